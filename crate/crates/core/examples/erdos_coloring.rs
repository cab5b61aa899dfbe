//! The log-log coloring: colors of sample integers and the density of the
//! cover intervals, as the outer base b varies.

use monosum::colorings::{loglog_color, LogLogParams};
use monosum::density::{delta_formula, loglog_cover_density};

fn main() -> monosum::Result<()> {
    let erdos = LogLogParams::erdos();
    println!("b = 4, inner log base 2, two colors");
    for n in [2u64, 3, 15, 16, 17, 255, 256, 65535, 65536, 1 << 40] {
        let c = loglog_color(n, &erdos);
        println!(
            "  n = {n:>14}  color {}  level {:?}{}",
            c.color,
            c.level,
            if c.ambiguous { "  (boundary)" } else { "" }
        );
    }

    println!();
    println!("{:>3} {:>6} {:>12} {:>12}", "r", "b", "cover", "delta_r(b)");
    for r in [2u32, 3] {
        for b in [2.5, 3.0, 3.5, 3.7320508, 4.0, 5.0] {
            if b <= r as f64 - 1.0 {
                continue;
            }
            let p = LogLogParams::new(b, r)?;
            println!(
                "{r:>3} {b:>6.3} {:>12.9} {:>12.9}",
                loglog_cover_density(&p),
                delta_formula(r, b)?
            );
        }
    }
    Ok(())
}
