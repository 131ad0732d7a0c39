//! The Yoneda algebra `H^•(A,k)`: basis, products, presentation by
//! generators in degrees 1 and 2, and the 𝒦₂ property.

use superjordan::yoneda::{cup_k, k2_verdicts, presentation_check, yoneda_dim, YonedaClass};

fn main() {
    let dims: Vec<usize> = (0..=8).map(yoneda_dim).collect();
    println!("dim H^n(A,k): {dims:?}");

    let (e1, w1, w2) = (YonedaClass::eta(1), YonedaClass::omega(1), YonedaClass::omega(2));
    println!("η¹ ⌣ η¹ = {}", cup_k(&e1, &e1));
    println!("η¹ ⌣ ω¹ = {}", cup_k(&e1, &w1));
    println!("ω² ⌣ η¹ = {}", cup_k(&w2, &e1));
    println!("η¹ ⌣ ω² = {}", cup_k(&e1, &w2));

    let p = presentation_check(6);
    for r in &p.relations {
        println!("relation {} = {}", r.relation, r.value);
    }
    println!("presentation holds to degree 6: {}", p.status);
    println!("𝒦₂: {}", k2_verdicts(8).a_is_k2);
}
