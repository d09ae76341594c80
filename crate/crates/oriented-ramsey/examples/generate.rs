//! Generate tournaments, colour them, and round-trip the text formats.

use oriented_ramsey::codec::{read_colored, read_tournament, write_colored, write_tournament};
use oriented_ramsey::coloring::{interval_coloring, Color, ColoredTournament};
use oriented_ramsey::tournament::Tournament;

fn main() {
    let g = Tournament::random(8, 42);
    println!("random tournament on 8 vertices, seed 42:");
    print!("{}", write_tournament(&g));

    let back = read_tournament(&write_tournament(&g)).unwrap();
    assert_eq!(back, g);
    println!("TOUR round-trip exact\n");

    let colored = ColoredTournament::random_coloring(g, 7);
    let text = write_colored(&colored);
    print!("{text}");
    assert_eq!(read_colored(&text).unwrap(), colored);
    println!("CTOUR round-trip exact\n");

    // The interval adversary keeps both colour classes acyclic, which is
    // what makes its longest monochromatic paths easy to certify.
    let adv = interval_coloring(&Tournament::random(32, 1));
    let red = adv.edge_total(Color::Red);
    let blue = adv.edge_total(Color::Blue);
    println!("interval colouring of a 32-vertex host: {red} red, {blue} blue edges");
}
