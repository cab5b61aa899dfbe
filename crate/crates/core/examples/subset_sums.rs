//! Subset sums of a small set, with and without a cardinality bound.
//!
//!     cargo run --example subset_sums -- 3,5,7 20

use monosum::sums::{bounded_subset_sums, subset_sums, IntSet};

fn main() -> monosum::Result<()> {
    let mut args = std::env::args().skip(1);
    let elements: Vec<u64> = args
        .next()
        .unwrap_or_else(|| "3,5,7".into())
        .split(',')
        .map(|s| s.trim().parse().expect("elements must be positive integers"))
        .collect();
    let cap: u64 = args.next().map_or(20, |s| s.parse().expect("cap must be an integer"));
    let set = IntSet::new(elements)?;

    let all = subset_sums(&set, cap);
    println!("A = {:?}, cap {cap}", set.as_slice());
    println!("sums: {:?}", all.iter().collect::<Vec<_>>());
    for (lo, hi) in all.maximal_intervals(0, cap)?.iter() {
        println!("  [{lo}, {hi}]");
    }

    for k in 1..=set.len() {
        let bounded = bounded_subset_sums(&set, k, cap)?;
        println!("at most {k} summands: {} sums", bounded.count());
    }
    Ok(())
}
