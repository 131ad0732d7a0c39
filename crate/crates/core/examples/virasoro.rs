//! The Lie algebra `H¹(A,A)` of outer derivations: brackets of the classes
//! `c, s_m` and the isomorphism onto a Virasoro-type algebra.

use superjordan::cohomology::ClassName;
use superjordan::structure::{bracket_h1, h1_basis, transport, Derivation};

fn main() {
    let basis = h1_basis(3);
    for &a in &basis {
        for &b in &basis {
            if a >= b {
                continue;
            }
            let (da, db) = (Derivation::of_class(a).unwrap(), Derivation::of_class(b).unwrap());
            let br = bracket_h1(&da, &db).unwrap();
            let t = transport(&br).map(|v| v.render()).unwrap_or_default();
            println!("[{a}, {b}] = {br}   ↦ {t}");
        }
    }
    let s1 = Derivation::of_class(ClassName::S(1)).unwrap();
    println!("\ns_1(x) = {}, s_1(y) = {}", s1.on_x, s1.on_y);
}
