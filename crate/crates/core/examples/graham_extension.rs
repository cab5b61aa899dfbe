//! Growing a covered run of subset sums one element at a time.

use monosum::error::Error;
use monosum::sums::{graham_extend, subset_sums, Coverage, IntSet};

fn main() -> monosum::Result<()> {
    // {1, 2} covers [0, 3]; each addition may be at most the current length.
    let base = Coverage::new(0, 4);
    let additions = [3, 5, 9, 20];
    let grown = graham_extend(base, &additions)?;
    println!("[0, 3] grows to [{}, {}]", grown.start, grown.end_inclusive());

    let set = IntSet::new(vec![1, 2, 3, 5, 9, 20])?;
    let sums = subset_sums(&set, grown.end_inclusive());
    assert!(sums.contains_interval(grown.start, grown.end_inclusive())?);
    println!("checked against the sums of {:?}", set.as_slice());

    match graham_extend(base, &[3, 12]) {
        Err(Error::ConditionViolated { index, addition, limit }) => {
            println!("addition #{index} = {addition} exceeds the run length {limit}")
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
