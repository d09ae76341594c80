//! Exact oriented Ramsey numbers for tiny trees, by exhaustive search
//! over tournaments and colourings.

use oriented_ramsey::oracle::{arrow_holds, oriented_ramsey_number, RamseyResult};
use oriented_ramsey::tournament::Tournament;
use oriented_ramsey::tree::OrientedTree;

fn report(name: &str, t: &OrientedTree, max_n: usize) {
    match oriented_ramsey_number(t, max_n, u64::MAX, true).unwrap() {
        RamseyResult::Exact { value, tournaments_checked } => {
            println!("r({name}) = {value}   ({tournaments_checked} tournaments checked)");
        }
        RamseyResult::AtLeast { bound, .. } => {
            println!("r({name}) >= {bound}   (cap {max_n} reached)");
        }
    }
}

fn main() {
    // Exact confirmation at order n sweeps all 2^(n(n-1)/2) orientations,
    // so caps stay at 7; refutations (the >= lines) are cheap at any cap.
    report("P2", &OrientedTree::out_path(2), 4);
    report("P3", &OrientedTree::out_path(3), 6);
    report("S3 (out-star)", &OrientedTree::out_star(3), 6);
    report("P4", &OrientedTree::out_path(4), 7);

    // The transitive tournament on 4 vertices does not arrow P3: the
    // block colouring leaves both colour classes too short.
    let g = Tournament::transitive(4);
    let p3 = OrientedTree::out_path(3);
    let res = arrow_holds(&g, &p3, &p3, u64::MAX).unwrap();
    println!("\ntransitive(4) arrows P3: {}", res.holds);
    assert!(!res.holds && res.witness.is_some());
    println!("refuting colouring checked ({} colourings examined)", res.colorings_checked);
}
