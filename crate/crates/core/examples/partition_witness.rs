//! Random and adversarial two-colorings of [N, eN): which color's subset sums
//! cover an interval ending at N²/8, and how low that interval starts.

use monosum::verify::{lemma21_witness, worst_partition_search, PartitionWindow, SearchStrategy};

fn main() -> monosum::Result<()> {
    let p = PartitionWindow::new(60, 2)?;
    let alternating: Vec<u32> = (0..p.len() as u32).map(|i| i % 2).collect();
    let p = p.with_colors(alternating)?;
    let target = p.default_target();
    let w = lemma21_witness(&p, (60, target))?;
    println!("alternating coloring of [60, 163], target {target}");
    for c in &w.report().colors {
        println!(
            "  color {}: |A| = {}, covering start {:?}, c = {:?}",
            c.color, c.size, c.covering_start, c.c
        );
    }

    for strategy in [SearchStrategy::Random, SearchStrategy::GreedyAdversarial] {
        for n in [100u64, 300] {
            let report = worst_partition_search(n, 2, 50, 1, strategy)?;
            let cs: Vec<f64> = report.trials.iter().filter_map(|t| t.c).collect();
            let best = cs.iter().copied().fold(f64::INFINITY, f64::min);
            println!(
                "{strategy:?} N = {n}: all witnessed {}, c in [{best:.3}, {:.3}]",
                report.all_witnessed,
                report.worst_c.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
