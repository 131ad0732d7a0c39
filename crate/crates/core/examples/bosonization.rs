//! The bosonization `A#kℤ`: the ℤ-action on `H^•(A,k)`, the `E₂` page of the
//! Lyndon–Hochschild–Serre spectral sequence, and the resulting dimensions.

use superjordan::yoneda::{action_table, bosonization_yoneda, k2_verdicts, smash_ext1};

fn main() {
    for row in action_table(4) {
        println!("q = {}: {}", row.degree, row.computed.join(", "));
    }

    let ext1 = smash_ext1();
    println!("\ndim H¹(A#kℤ, k) = {} ({})", ext1.dimension, ext1.constraints.join("; "));

    let b = bosonization_yoneda(8);
    for c in &b.grid {
        let cell = if c.computed.is_empty() { "0".to_string() } else { format!("⟨{}⟩", c.computed.join(", ")) };
        println!("E₂^{{{},{}}} = {cell}", c.p, c.q);
    }
    println!("dim H^n(A#kℤ, k), n ≤ 8: {:?}", b.dims);

    let k2 = k2_verdicts(6);
    println!("A#kℤ is 𝒦₂: {} ({})", k2.smash_is_k2, k2.smash_witness);
}
