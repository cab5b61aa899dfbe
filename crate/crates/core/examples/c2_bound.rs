//! The upper bounds on c_r: the critical root b0, the table over r, and the
//! closed form (2 + √3)/4 for two colors.

use monosum::optimize::{c_upper_table, critical_root, f2_inf, f2_value, minimize_delta, DEFAULT_TOL};

fn main() -> monosum::Result<()> {
    let root = critical_root(2, DEFAULT_TOL)?;
    println!(
        "r = 2: b0 = {:.15} (bracket width {:.1e}), certificate {}",
        root.b0,
        monosum::exact::to_f64(&(&root.hi - &root.lo)),
        if root.certificate.holds() { "holds" } else { "FAILS" }
    );
    let min = minimize_delta(2, DEFAULT_TOL)?;
    println!("golden section: b* = {:.12}, delta = {:.15}", min.arg, min.value);
    let f2 = f2_inf();
    println!(
        "f2 = {:.15} at z = {:.12}; exact (2+sqrt3)/4 = {:.15}",
        f2.numeric.value,
        f2.numeric.arg,
        f2_value()
    );

    println!();
    println!("{:>3} {:>18} {:>18}", "r", "b0", "c_upper");
    for row in c_upper_table(12, DEFAULT_TOL)? {
        println!("{:>3} {:>18.15} {:>18.15}", row.r, row.b0, row.c_upper);
    }
    Ok(())
}
