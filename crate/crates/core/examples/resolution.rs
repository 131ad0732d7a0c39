//! The minimal bimodule resolution `P_• → A`: differentials of the generators,
//! `d² = 0`, and the comparison morphism into the normalized bar resolution.

use superjordan::resolution::{
    apply_f, bar_differential, comparison_f, differential, generator_differential, generators, BiElem,
};

fn main() {
    for r in 1..=4 {
        for g in generators(r) {
            let d = generator_differential(g);
            println!("d_{r}({g}) = {d}");
            if r >= 2 {
                assert!(differential(&d).unwrap().is_zero(), "d² ≠ 0 on {g}");
            }
        }
    }

    println!("\nf: P_• → Bar(A) commutes with the differentials:");
    for r in 1..=4 {
        for g in generators(r) {
            let f = comparison_f(g);
            let lhs = bar_differential(&f).unwrap();
            let rhs = apply_f(&differential(&BiElem::generator(g)).unwrap());
            assert_eq!(lhs, rhs);
            println!("  f({g}) = {}", f.render());
        }
    }
}
