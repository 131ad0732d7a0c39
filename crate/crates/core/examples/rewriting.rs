//! Normal forms in the super Jordan plane `k⟨x,y⟩/(x², y²x − xy² − xyx)`:
//! rewriting words to the PBW basis `x^a (yx)^b y^c`, the commutation rules
//! and the Hilbert series.

use superjordan::algebra::{
    commutation_closed_form, commutation_lhs, graded_basis, normal_form, parse_word, verify_confluence,
    CommutationKind,
};

fn main() {
    for w in ["xx", "yyx", "yxyx", "yyyx", "xyyyx"] {
        println!("{w:>6} ↦ {}", normal_form(&parse_word(w)));
    }

    let words = verify_confluence(10).expect("the reduction system is confluent");
    println!("\nconfluent on all {words} words of length ≤ 10");

    println!("\ncommutation rules with their closed forms:");
    for kind in [CommutationKind::EvenPastX, CommutationKind::OddPastX, CommutationKind::EvenPastYx, CommutationKind::OddPastYx] {
        let (n, b) = (3, 2);
        let lhs = normal_form(&commutation_lhs(kind, n, b));
        let rhs = commutation_closed_form(kind, n, b).expect("b ≥ 1");
        assert_eq!(lhs, rhs);
        println!("  {kind:?} (n = {n}, b = {b}): {lhs}");
    }

    let dims: Vec<usize> = (0..=10).map(|d| graded_basis(d).len()).collect();
    println!("\ndim A_d for d ≤ 10: {dims:?}");
}
