//! Cup products of the named generators of `H^•(A,A)`, graded commutativity,
//! and periodicity under `⌣ u_0²`.

use superjordan::cohomology::ClassName::{self, *};
use superjordan::structure::{cup_names, graded_commutator, periodicity_cell};

fn main() {
    let pairs: [(ClassName, ClassName); 7] = [
        (S(1), S(2)),
        (S(1), U(0, 2)),
        (U(1, 2), S(0)),
        (U(1, 2), U(2, 2)),
        (V(0, 3), W(1, 3)),
        (W(1, 3), S(2)),
        (C, T(0, 2)),
    ];
    for (a, b) in pairs {
        let p = cup_names(a, b).expect("product computes");
        assert!(graded_commutator(a, b).unwrap().is_zero());
        println!("{a} ⌣ {b} = {p}");
    }

    println!();
    for (r, w) in [(2, 0), (2, 4), (3, -2), (1, 0)] {
        let p = periodicity_cell(r, w).unwrap();
        println!("⌣u_0²: H^{r}_{w} → H^{}_{}: rank {} of {} → {}", r + 2, w - 2, p.rank, p.source_dim, p.target_dim);
    }
}
