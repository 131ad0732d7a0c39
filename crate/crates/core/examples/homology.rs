//! Hochschild homology `H_r(A,A)` by cell, with the named cycle families.

use superjordan::cohomology::{homology_cell, named_hom_classes};

fn main() {
    println!("dim H_r(A,A)_w   (rows r, columns w = 0..=8)");
    for r in 0..=4 {
        let row: Vec<String> = (0..=8).map(|w| format!("{:>2}", homology_cell(r, w).dim)).collect();
        println!("r = {r}: {}", row.join(" "));
    }
    for (r, w) in [(0, 2), (1, 3), (2, 3), (3, 5)] {
        let names: Vec<String> = named_hom_classes(r, w).iter().map(|n| n.to_string()).collect();
        println!("H_{r} weight {w}: {}", names.join(", "));
    }
}
