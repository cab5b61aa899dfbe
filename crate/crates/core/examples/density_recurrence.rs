//! ā_n for a two-color block coloring: by recurrence, by the closed formula,
//! and by counting S(φ, 0) directly.

use monosum::colorings::BlockColoring;
use monosum::density::{abar_by_counting, abar_direct, abar_recurrence, abar_sequence};
use monosum::exact::{ratio, to_f64};

fn main() -> monosum::Result<()> {
    let col = BlockColoring::cyclic(vec![1, 3, 8, 21, 55, 144, 377, 987])?;
    println!("{:>2} {:>10} {:>12} {:>10}", "n", "z_n", "abar_n", "counted");
    for st in abar_sequence(&col)? {
        assert_eq!(st.abar, abar_direct(&col, st.n)?);
        let counted = abar_by_counting(&col, st.n)?;
        println!(
            "{:>2} {:>10.6} {:>12.9} {:>10.6}",
            st.n,
            to_f64(&st.z),
            to_f64(&st.abar),
            to_f64(&counted)
        );
    }

    // A constant ratio drives ā to the fixed point of its recurrence.
    let z = ratio(268, 1000);
    let states = abar_recurrence(&vec![z; 40], (ratio(1, 1), ratio(0, 1)))?;
    let last = states.last().expect("nonempty");
    println!(
        "\nconstant z = 0.268 after {} steps: abar = {:.12}",
        last.n,
        to_f64(&last.abar)
    );
    Ok(())
}
