//! Long intervals of k-fold subset sums after dividing out a common factor.

use monosum::sums::IntSet;
use monosum::verify::thm22_check;

fn main() -> monosum::Result<()> {
    let n = 400;
    // Multiples of 6 plus a few strays: d = 6 loses little and gains a lot.
    let mut a: Vec<u64> = (1..=n / 6).map(|i| 6 * i).collect();
    a.extend([7, 11, 13, 101]);
    let a = IntSet::new(a)?;
    let k = 8;
    let report = thm22_check(&a, n, k)?;
    println!("|A| = {}, N = {n}, k = {k}", report.size);
    println!("{:>4} {:>6} {:>6} {:>8}", "d", "|A'|", "drop", "length");
    let mut rows = report.rows.clone();
    rows.sort_by_key(|r| std::cmp::Reverse(r.length));
    for row in rows.iter().take(8) {
        println!("{:>4} {:>6} {:>6} {:>8}", row.d, row.reduced_size, row.drop, row.length);
    }
    let best = report.best_row();
    println!(
        "best d = {} with interval {:?}; reaches N: {}",
        best.d, best.longest, report.reaches_n
    );
    Ok(())
}
