//! The action of `H¹` on higher cohomology: brackets through liftings and the
//! Jacobi recursion, and the intermediate-series parameters of each family.

use superjordan::algebra::render_q;
use superjordan::cohomology::{Class, ClassName::*};
use superjordan::structure::{bracket, intermediate_series_match, SeriesFamily};

fn main() {
    for x in [T(1, 2), U(1, 2), V(0, 3), W(1, 3)] {
        for m in 0..=3 {
            let b = bracket(S(m), &Class::named(x), x.hdeg()).unwrap();
            println!("[s_{m}, {x}] = {b}");
        }
        assert!(bracket(C, &Class::named(x), x.hdeg()).unwrap().is_zero());
    }

    println!("\nL_m · X_n = (n + a m + b) X_(n+m):");
    for (fam, r) in [(SeriesFamily::T, 2), (SeriesFamily::U, 2), (SeriesFamily::V, 3), (SeriesFamily::W, 3)] {
        let fit = intermediate_series_match(fam, r, 3, 3).unwrap();
        println!("  {}^{r}: a = {}, b = {}", fam.rescaled_symbol(), render_q(&fit.a), render_q(&fit.b));
    }
}
