//! Hochschild cohomology `H^r(A,A)` by cell (homological degree × weight),
//! with the named basis classes, and `H^•(A,k)` for comparison.

use superjordan::cohomology::{cohomology_cell, named_classes, Coeffs};

fn main() {
    println!("dim H^r(A,A)_w   (rows r, columns w = -6..=6)");
    for r in 0..=5 {
        let row: Vec<String> = (-6..=6).map(|w| format!("{:>2}", cohomology_cell(r, w, Coeffs::A).dim)).collect();
        println!("r = {r}: {}", row.join(" "));
    }

    println!("\nnamed classes:");
    for (r, w) in [(0, 0), (1, 0), (1, 2), (2, -2), (2, 4), (3, -2), (3, 4)] {
        let names: Vec<String> = named_classes(r, w).iter().map(|n| n.to_string()).collect();
        assert_eq!(names.len(), cohomology_cell(r, w, Coeffs::A).dim);
        println!("  H^{r}_{w}: {}", names.join(", "));
    }

    let k: Vec<usize> = (0..=6).map(|r| cohomology_cell(r, 0, Coeffs::K).dim).collect();
    println!("\ndim H^r(A,k), r ≤ 6: {k:?}");
}
