//! Certifies that the sets S_K empty out for a few margins ε, and reports how
//! many steps each box survives.
//!
//!     cargo run --release --example sk_emptiness -- [grid]

use std::time::Instant;

use monosum::dynamics::{sk_iterate, IterationConfig, SearchBox};
use monosum::optimize::f2_value;

fn main() -> monosum::Result<()> {
    let grid = std::env::args()
        .nth(1)
        .map_or(512, |s| s.parse().expect("grid must be an integer"));
    let config = IterationConfig {
        grid,
        ..IterationConfig::default()
    };
    println!("box B = [0, 1] x [0, f2 - eps], f2 = {:.12}, grid {grid}", f2_value());
    for eps in [0.2, 0.1, 0.05, 0.02, 0.01] {
        let start = Instant::now();
        let run = sk_iterate(&SearchBox::new(eps)?, &config)?;
        let areas: Vec<String> = run.polygons.iter().map(|p| format!("{:.4}", p.area())).collect();
        println!(
            "eps {eps:<5} {:?}  areas [{}]  ({:.2?})",
            run.certification(),
            areas.join(", "),
            start.elapsed()
        );
    }
    Ok(())
}
