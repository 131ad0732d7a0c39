//! Cup products on `H^•(A,A)`, derivations and their liftings along the
//! resolution, the Gerstenhaber action of `H¹(A,A)`, and the Virasoro and
//! intermediate-series identifications.
//!
//! Cup products are computed as `(φg_p ⌣ ψg_q)f_{p+q}` through the comparison
//! maps with the bar resolution. Brackets `[δ, φ] = δ∘φ − φ∘δ_n` use a lifting
//! `δ_•` of the derivation `δ` to a family of `δ^e`-operators on `P•`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{cubic_relation, normal_form, parse_word, q, render_q, serialize_q, Element, Letter, Monomial, Q};
use crate::cohomology::{named_classes, reduce_to_basis, Class, ClassName, Cochain, Status};
use crate::error::StructureError;
use crate::linalg::{rank, solve, SparseVec};
use crate::resolution::{
    comparison_f, comparison_g_basic, differential, generator_differential, generators, lift_boundary, solved_g_basic,
    BiElem, Gen,
};

/// A derivation of `A`, given by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub on_x: Element,
    pub on_y: Element,
}

impl Derivation {
    pub fn new(on_x: Element, on_y: Element) -> Self {
        Derivation { on_x, on_y }
    }

    /// `c`: `x ↦ 0`, `y ↦ x`.
    pub fn c() -> Self {
        Self::from_cochain(&ClassName::C.representative())
    }

    /// `s_n`: `x ↦ (2n+1)xy^{2n}`, `y ↦ y^{2n+1}`.
    pub fn s(n: u32) -> Self {
        Self::from_cochain(&ClassName::S(n).representative())
    }

    /// Derivation attached to a degree-one class name (`c` or `s_n`).
    pub fn of_class(n: ClassName) -> Option<Self> {
        (n.hdeg() == 1).then(|| Self::from_cochain(&n.representative()))
    }

    /// Reads a 1-cochain as the derivation with the same values on `x`, `y`.
    pub fn from_cochain(z: &Cochain) -> Self {
        assert_eq!(z.hdeg, 1, "derivations are 1-cochains");
        Derivation { on_x: z.values[0].clone(), on_y: z.values[1].clone() }
    }

    pub fn to_cochain(&self) -> Cochain {
        Cochain::pair(1, self.on_x.clone(), self.on_y.clone())
    }

    /// Leibniz rule along a word, then normalized.
    pub fn apply_word(&self, w: &[Letter]) -> Element {
        let mut out = Element::zero();
        for i in 0..w.len() {
            let d = match w[i] {
                Letter::X => &self.on_x,
                Letter::Y => &self.on_y,
            };
            if d.is_zero() {
                continue;
            }
            let pre = normal_form(&w[..i]);
            let post = normal_form(&w[i + 1..]);
            out += &(&(&pre * d) * &post);
        }
        out
    }

    pub fn apply_monomial(&self, m: Monomial) -> Element {
        self.apply_word(&m.word())
    }

    pub fn apply(&self, v: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in v.terms() {
            out.add_scaled(c, &self.apply_monomial(*m));
        }
        out
    }

    /// Checks that both defining relations are sent to zero.
    pub fn check(&self) -> Result<(), StructureError> {
        let dxx = self.apply_word(&parse_word("xx"));
        if !dxx.is_zero() {
            return Err(StructureError::IllDefined(format!("D(x²) = {dxx}")));
        }
        let mut dc = Element::zero();
        for (c, w) in cubic_relation() {
            dc.add_scaled(&c, &self.apply_word(&w));
        }
        if !dc.is_zero() {
            return Err(StructureError::IllDefined(format!("D(y²x − xy² − xyx) = {dc}")));
        }
        Ok(())
    }

    /// `[D, E] = D∘E − E∘D`.
    pub fn commutator(&self, other: &Derivation) -> Derivation {
        Derivation {
            on_x: self.apply(&other.on_x) - other.apply(&self.on_x),
            on_y: self.apply(&other.on_y) - other.apply(&self.on_y),
        }
    }
}

/// Bracket of two classes in `H¹` as the commutator of derivations.
pub fn bracket_h1(phi: &Derivation, psi: &Derivation) -> Result<Class, StructureError> {
    phi.check()?;
    psi.check()?;
    Ok(reduce_to_basis(&phi.commutator(psi).to_cochain())?)
}

/// A family `δ_r : P_r → P_r` of `δ^e`-operators lifting a derivation `δ`,
/// known on the generators up to `max_hdeg`.
#[derive(Clone, Debug)]
pub struct Lifting {
    pub name: String,
    pub base: Derivation,
    values: BTreeMap<Gen, BiElem>,
    max_hdeg: u32,
}

impl Lifting {
    fn empty(name: &str, base: Derivation) -> Self {
        let mut values = BTreeMap::new();
        values.insert(Gen::Unit, BiElem::zero(0));
        Lifting { name: name.into(), base, values, max_hdeg: 0 }
    }

    /// Solves `d_r δ_r(g) = δ_{r−1}(d_r g)` generator by generator.
    pub fn solve(name: &str, base: &Derivation, max_hdeg: u32) -> Result<Self, StructureError> {
        base.check()?;
        let mut l = Self::empty(name, base.clone());
        l.extend(max_hdeg)?;
        Ok(l)
    }

    /// Extends a solver lifting to higher degrees.
    pub fn extend(&mut self, max_hdeg: u32) -> Result<(), StructureError> {
        for r in self.max_hdeg + 1..=max_hdeg {
            for g in generators(r) {
                let target = self.apply(&generator_differential(g))?;
                let v = lift_boundary(r, &target).map_err(|_| StructureError::NoSolution(r))?;
                self.values.insert(g, v);
            }
            self.max_hdeg = r;
        }
        Ok(())
    }

    pub fn max_hdeg(&self) -> u32 {
        self.max_hdeg
    }

    /// `δ_r(1⊗g⊗1)`.
    pub fn value(&self, g: Gen) -> Result<&BiElem, StructureError> {
        self.values
            .get(&g)
            .ok_or_else(|| StructureError::NotTabulated { name: self.name.clone(), max: self.max_hdeg })
    }

    /// `δ_r(l⊗g⊗r) = D(l)⊗g⊗r + l·δ_r(1⊗g⊗1)·r + l⊗g⊗D(r)`.
    pub fn apply(&self, e: &BiElem) -> Result<BiElem, StructureError> {
        let mut out = BiElem::zero(e.hdeg());
        for ((l, g, r), c) in e.terms() {
            let gen = BiElem::generator(*g);
            let dl = self.base.apply_monomial(*l);
            if !dl.is_zero() {
                out.add_scaled(c, &gen.sandwich(&dl, &Element::monomial(*r)));
            }
            out.add_scaled(c, &self.value(*g)?.sandwich_monomials(*l, *r));
            let dr = self.base.apply_monomial(*r);
            if !dr.is_zero() {
                out.add_scaled(c, &gen.sandwich(&Element::monomial(*l), &dr));
            }
        }
        Ok(out)
    }

    /// Commuting-square check `d_r δ_r(g) = δ_{r−1} d_r(g)` on every generator.
    pub fn verify(&self) -> Vec<(Gen, bool)> {
        (1..=self.max_hdeg)
            .flat_map(generators)
            .map(|g| {
                let lhs = differential(&self.values[&g]).expect("r >= 1");
                let ok = self.apply(&generator_differential(g)).map(|rhs| rhs == lhs).unwrap_or(false);
                (g, ok)
            })
            .collect()
    }
}

/// The explicitly tabulated liftings: `c_•`, and `α_•, β_•, γ_•` for `s_0, s_1, s_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TabulatedLifting {
    C,
    Alpha,
    Beta,
    Gamma,
}

impl TabulatedLifting {
    pub const ALL: [TabulatedLifting; 4] = [TabulatedLifting::C, TabulatedLifting::Alpha, TabulatedLifting::Beta, TabulatedLifting::Gamma];

    pub fn class(self) -> ClassName {
        match self {
            TabulatedLifting::C => ClassName::C,
            TabulatedLifting::Alpha => ClassName::S(0),
            TabulatedLifting::Beta => ClassName::S(1),
            TabulatedLifting::Gamma => ClassName::S(2),
        }
    }

    /// Highest tabulated degree (`None`: all degrees).
    pub fn tabulated(self) -> Option<u32> {
        match self {
            TabulatedLifting::C | TabulatedLifting::Alpha => None,
            TabulatedLifting::Beta | TabulatedLifting::Gamma => Some(3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TabulatedLifting::C => "c",
            TabulatedLifting::Alpha => "alpha",
            TabulatedLifting::Beta => "beta",
            TabulatedLifting::Gamma => "gamma",
        }
    }
}

type Tab<'a> = &'a [(i64, &'a str, &'a str)];

/// `Σ c · l ⊗ g ⊗ r` with `l`, `r` given as words.
fn tabulated(g: Gen, entries: Tab) -> BiElem {
    let mut e = BiElem::zero(g.hdeg());
    for (c, l, r) in entries {
        let term = BiElem::generator(g).sandwich(&normal_form(&parse_word(l)), &normal_form(&parse_word(r)));
        e.add_scaled(&q(*c), &term);
    }
    e
}

fn tabulated_value(kind: TabulatedLifting, g: Gen) -> BiElem {
    use Gen::*;
    let r = g.hdeg() as i64;
    match (kind, g) {
        (_, Unit) => BiElem::zero(0),
        (TabulatedLifting::C, X(_)) => BiElem::zero(g.hdeg()),
        // The value on `y` is forced by `d_1 c_1(y) = c_0(d_1 y) = x⊗1 − 1⊗x`.
        (TabulatedLifting::C, Y) => BiElem::generator(X(1)),
        (TabulatedLifting::C, Y2X(k)) => {
            let s = if r % 2 == 0 { -1 } else { 1 };
            let h = X(k + 1);
            tabulated(h, &[(1, "y", ""), (s, "", "y"), (-1, "x", "")])
        }
        (TabulatedLifting::Alpha, X(k)) => BiElem::generator(g).scale(&q(k as i64)),
        (TabulatedLifting::Alpha, Y) => BiElem::generator(Y),
        (TabulatedLifting::Alpha, Y2X(_)) => BiElem::generator(g).scale(&q(r + 1)),
        (TabulatedLifting::Beta, X(1)) => {
            let mut e = tabulated(Y, &[(3, "xy", ""), (3, "x", "y")]);
            e.add(&tabulated(X(1), &[(3, "", "yy")]));
            e
        }
        (TabulatedLifting::Beta, Y) => tabulated(Y, &[(1, "yy", ""), (1, "y", "y"), (1, "", "yy")]),
        (TabulatedLifting::Beta, X(2)) => {
            let mut e = tabulated(Y2X(1), &[(3, "x", "")]);
            e.add(&tabulated(X(2), &[(6, "", "yy"), (3, "", "yx")]));
            e
        }
        (TabulatedLifting::Beta, Y2X(1)) => tabulated(g, &[(2, "yy", ""), (5, "", "yy"), (2, "", "yx"), (-2, "xy", "")]),
        (TabulatedLifting::Beta, X(3)) => {
            let mut e = tabulated(Y2X(2), &[(3, "x", "")]);
            e.add(&tabulated(X(3), &[(9, "", "yy"), (6, "", "yx")]));
            e
        }
        (TabulatedLifting::Beta, Y2X(2)) => tabulated(g, &[(2, "yy", ""), (8, "", "yy"), (5, "", "yx"), (-2, "xy", "")]),
        (TabulatedLifting::Gamma, X(1)) => {
            let mut e = tabulated(Y, &[(5, "xyyy", ""), (5, "xyy", "y"), (5, "xy", "yy"), (5, "x", "yyy")]);
            e.add(&tabulated(X(1), &[(5, "", "yyyy")]));
            e
        }
        (TabulatedLifting::Gamma, Y) => {
            tabulated(Y, &[(1, "yyyy", ""), (1, "yyy", "y"), (1, "yy", "yy"), (1, "y", "yyy"), (1, "", "yyyy")])
        }
        (TabulatedLifting::Gamma, X(2)) => {
            let mut e = tabulated(X(2), &[(10, "", "yyyy"), (10, "", "yxyy"), (10, "", "yxyx")]);
            e.add(&tabulated(Y2X(1), &[(5, "xyy", ""), (5, "x", "yy"), (5, "x", "yx")]));
            e
        }
        (TabulatedLifting::Gamma, Y2X(1)) => tabulated(
            g,
            &[
                (2, "yyyy", ""),
                (2, "yy", "yy"),
                (2, "yy", "yx"),
                (7, "", "yyyy"),
                (4, "", "yxyy"),
                (4, "", "yxyx"),
                (-4, "xyyy", ""),
                (-2, "xy", "yy"),
                (-2, "xy", "yx"),
            ],
        ),
        (TabulatedLifting::Gamma, X(3)) => {
            let mut e = tabulated(X(3), &[(15, "", "yyyy"), (20, "", "yxyy"), (20, "", "yxyx")]);
            // The sign of the `x ⊗ y²x² ⊗ yx` term is undetermined by the table; `+` is the one
            // that makes the square commute.
            e.add(&tabulated(Y2X(2), &[(5, "xyy", ""), (5, "x", "yy"), (5, "x", "yx")]));
            e
        }
        (TabulatedLifting::Gamma, Y2X(2)) => tabulated(
            g,
            &[
                (2, "yyyy", ""),
                (2, "yy", "yy"),
                (2, "yy", "yx"),
                (12, "", "yyyy"),
                (14, "", "yxyy"),
                (14, "", "yxyx"),
                (-4, "xyyy", ""),
                (-2, "xy", "yy"),
                (-2, "xy", "yx"),
            ],
        ),
        _ => unreachable!("outside the tabulated range"),
    }
}

/// The tabulated lifting of `kind` on degrees `≤ max_hdeg`.
pub fn tabulated_lifting(kind: TabulatedLifting, max_hdeg: u32) -> Result<Lifting, StructureError> {
    if let Some(top) = kind.tabulated() {
        if max_hdeg > top {
            return Err(StructureError::NotTabulated { name: kind.name().into(), max: top });
        }
    }
    let base = Derivation::of_class(kind.class()).expect("degree-one class");
    let mut l = Lifting::empty(kind.name(), base);
    for r in 1..=max_hdeg {
        for g in generators(r) {
            l.values.insert(g, tabulated_value(kind, g));
        }
    }
    l.max_hdeg = max_hdeg;
    Ok(l)
}

/// Shared solver liftings of `c` and `s_m`, grown on demand.
pub fn solver_lifting(delta: ClassName, max_hdeg: u32) -> Result<Arc<Lifting>, StructureError> {
    static CACHE: OnceLock<RwLock<HashMap<ClassName, Arc<Lifting>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(l) = cache.read().expect("cache poisoned").get(&delta) {
        if l.max_hdeg >= max_hdeg {
            return Ok(l.clone());
        }
    }
    let base = Derivation::of_class(delta).ok_or_else(|| StructureError::IllDefined(format!("{delta} is not in H¹")))?;
    let mut guard = cache.write().expect("cache poisoned");
    let mut l = match guard.get(&delta) {
        Some(l) => (**l).clone(),
        None => Lifting::empty(&delta.to_string(), base),
    };
    l.base.check()?;
    l.extend(max_hdeg)?;
    let l = Arc::new(l);
    guard.insert(delta, l.clone());
    Ok(l)
}

/// `[δ, φ](g) = δ(φ(g)) − φ(δ_r(1⊗g⊗1))`.
pub fn bracket_cochain(lift: &Lifting, phi: &Cochain) -> Result<Cochain, StructureError> {
    let values = generators(phi.hdeg)
        .into_iter()
        .map(|g| {
            let a = lift.base.apply(phi.value(g));
            let b = phi.evaluate(lift.value(g)?);
            Ok(a - b)
        })
        .collect::<Result<Vec<_>, StructureError>>()?;
    Ok(Cochain::new(phi.hdeg, values))
}

/// Where a lifting comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LiftSource {
    Solver,
    Tabulated,
}

/// `[δ, φ]` for `φ ∈ H^r` using a lifting of `δ ∈ {c, s_m}`.
pub fn bracket_lifted(delta: ClassName, phi: &Class, r: u32, source: LiftSource) -> Result<Class, StructureError> {
    if phi.is_zero() {
        return Ok(Class::zero());
    }
    let z = phi.representative(r);
    let br = match source {
        LiftSource::Solver => bracket_cochain(solver_lifting(delta, r)?.as_ref(), &z)?,
        LiftSource::Tabulated => {
            let kind = TabulatedLifting::ALL
                .into_iter()
                .find(|k| k.class() == delta)
                .ok_or_else(|| StructureError::NotTabulated { name: delta.to_string(), max: 0 })?;
            bracket_cochain(&tabulated_lifting(kind, r)?, &z)?
        }
    };
    Ok(reduce_to_basis(&br)?)
}

/// `[δ, φ]` for `δ ∈ {c, s_0, s_1, s_2}` by liftings and for `s_m`, `m ≥ 3`,
/// by the Jacobi identity with `[s_1, s_{m−1}] = 2(m−2)s_m`.
pub fn bracket(delta: ClassName, phi: &Class, r: u32) -> Result<Class, StructureError> {
    match delta {
        ClassName::S(m) if m >= 3 => bracket_jacobi(m, phi, r),
        _ => bracket_lifted(delta, phi, r, LiftSource::Solver),
    }
}

/// `[s_m, φ] = ([s_1,[s_{m−1},φ]] − [s_{m−1},[s_1,φ]]) / 2(m−2)`.
pub fn bracket_jacobi(m: u32, phi: &Class, r: u32) -> Result<Class, StructureError> {
    assert!(m >= 3, "Jacobi recursion starts at s_3");
    let s1 = ClassName::S(1);
    let sm1 = ClassName::S(m - 1);
    let a = bracket(s1, &bracket(sm1, phi, r)?, r)?;
    let b = bracket(sm1, &bracket(s1, phi, r)?, r)?;
    let mut out = a;
    out.add_scaled(&q(-1), &b);
    Ok(out.scale(&(Q::one() / q(2 * (m as i64 - 2)))))
}

/// Choice of comparison morphism `B• → P•`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GChoice {
    /// The explicitly listed `g_n` patterns.
    Listed,
    /// The total morphism built by the exact solver.
    Solved,
}

fn g_basic(mid: &[Monomial], choice: GChoice) -> Result<BiElem, StructureError> {
    Ok(match choice {
        GChoice::Listed => comparison_g_basic(mid)?,
        GChoice::Solved => solved_g_basic(mid),
    })
}

/// Cochain-level cup product `(φg_p ⌣ ψg_q) f_{p+q}`.
pub fn cup_cochains(phi: &Cochain, psi: &Cochain, choice: GChoice) -> Result<Cochain, StructureError> {
    let p = phi.hdeg as usize;
    let n = phi.hdeg + psi.hdeg;
    let mut left_memo: HashMap<Vec<Monomial>, Element> = HashMap::new();
    let mut right_memo: HashMap<Vec<Monomial>, Element> = HashMap::new();
    let mut values = Vec::new();
    for g in generators(n) {
        let mut val = Element::zero();
        for (t, c) in comparison_f(g).terms() {
            let (m1, m2) = t.mid.split_at(p);
            let a = match left_memo.get(m1) {
                Some(a) => a.clone(),
                None => {
                    let a = phi.evaluate(&g_basic(m1, choice)?);
                    left_memo.insert(m1.to_vec(), a.clone());
                    a
                }
            };
            if a.is_zero() {
                continue;
            }
            let b = match right_memo.get(m2) {
                Some(b) => b.clone(),
                None => {
                    let b = psi.evaluate(&g_basic(m2, choice)?);
                    right_memo.insert(m2.to_vec(), b.clone());
                    b
                }
            };
            let prod = &(&(&Element::monomial(t.left) * &a) * &b) * &Element::monomial(t.right);
            val.add_scaled(c, &prod);
        }
        values.push(val);
    }
    Ok(Cochain::new(n, values))
}

/// Cohomological degree of a nonzero combination of named classes.
pub fn class_hdeg(c: &Class) -> Option<u32> {
    c.coords.keys().next().map(|n| n.hdeg())
}

/// Cup product of classes, reduced to the named basis.
pub fn cup_with(a: &Class, b: &Class, choice: GChoice) -> Result<Class, StructureError> {
    let (Some(ra), Some(rb)) = (class_hdeg(a), class_hdeg(b)) else {
        return Ok(Class::zero());
    };
    let z = cup_cochains(&a.representative(ra), &b.representative(rb), choice)?;
    Ok(reduce_to_basis(&z)?)
}

/// Cup product through the listed comparison morphism.
pub fn cup(a: &Class, b: &Class) -> Result<Class, StructureError> {
    cup_with(a, b, GChoice::Listed)
}

pub fn cup_names(a: ClassName, b: ClassName) -> Result<Class, StructureError> {
    cup(&Class::named(a), &Class::named(b))
}

fn lin(terms: &[(i64, ClassName)]) -> Class {
    Class::from_terms(terms.iter().map(|(c, n)| (q(*c), *n)))
}

/// The product table of `H^•(A,A)` in closed form.
///
/// In the `s_m` row the coefficient of `w` in `s_m ⌣ u_n` and of `t` in
/// `s_m ⌣ v_n` carry the index of `s`, as graded commutativity with the `u_m`
/// and `v_m` rows requires.
pub fn expected_cup(a: ClassName, b: ClassName) -> Class {
    use ClassName::*;
    let i = |n: u32| n as i64;
    match (a, b) {
        (One, x) | (x, One) => Class::named(x),
        (C, _) | (_, C) => Class::zero(),
        (S(m), S(n)) => lin(&[(4 * (i(n) - i(m)), T(n + m + 1, 2))]),
        (S(_), T(..)) | (T(..), S(_)) => Class::zero(),
        (S(m), U(n, r)) | (U(n, r), S(m)) => lin(&[(2, V(n + m + 1, r + 1)), (2 * i(m) + 1, W(n + m, r + 1))]),
        (S(m), V(n, r)) => lin(&[(-(2 * i(m) + 1), T(n + m, r + 1))]),
        (V(m, r), S(n)) => lin(&[(2 * i(n) + 1, T(n + m, r + 1))]),
        (S(m), W(n, r)) => lin(&[(2, T(n + m + 1, r + 1))]),
        (W(m, r), S(n)) => lin(&[(-2, T(n + m + 1, r + 1))]),
        (T(..), T(..) | V(..) | W(..)) | (V(..) | W(..), T(..)) => Class::zero(),
        (T(m, r1), U(n, r2)) | (U(n, r2), T(m, r1)) => lin(&[(1, T(m + n, r1 + r2))]),
        (U(m, r1), U(n, r2)) => lin(&[(1, U(m + n, r1 + r2))]),
        (U(m, r1), V(n, r2)) | (V(n, r2), U(m, r1)) => lin(&[(1, V(m + n, r1 + r2))]),
        (U(m, r1), W(n, r2)) | (W(n, r2), U(m, r1)) => lin(&[(1, W(m + n, r1 + r2))]),
        (V(..), V(..)) | (W(..), W(..)) => Class::zero(),
        (V(m, r1), W(n, r2)) => lin(&[(1, T(m + n, r1 + r2))]),
        (W(m, r1), V(n, r2)) => lin(&[(-1, T(m + n, r1 + r2))]),
    }
}

/// The reference table cell, which differs from [`expected_cup`] only in the
/// `s_m` row against `u_n` and `v_n` (index `2n+1` instead of `2m+1`).
pub fn tabulated_cup(a: ClassName, b: ClassName) -> Class {
    use ClassName::*;
    let i = |n: u32| n as i64;
    match (a, b) {
        (S(m), U(n, r)) => lin(&[(2, V(n + m + 1, r + 1)), (2 * i(n) + 1, W(n + m, r + 1))]),
        (S(m), V(n, r)) => lin(&[(-(2 * i(n) + 1), T(n + m, r + 1))]),
        _ => expected_cup(a, b),
    }
}

/// Table families, in the order of rows and columns of the product table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    C,
    S,
    T,
    U,
    V,
    W,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::C, Family::S, Family::T, Family::U, Family::V, Family::W];

    pub fn of(n: ClassName) -> Option<Family> {
        Some(match n {
            ClassName::One => return None,
            ClassName::C => Family::C,
            ClassName::S(_) => Family::S,
            ClassName::T(..) => Family::T,
            ClassName::U(..) => Family::U,
            ClassName::V(..) => Family::V,
            ClassName::W(..) => Family::W,
        })
    }

    /// Generic symbol with index `i` and degree exponent `e` (`p` or `q`).
    pub fn symbol(self, i: &str, e: &str) -> String {
        match self {
            Family::C => "c".into(),
            Family::S => format!("s_{i}"),
            Family::T => format!("t_{i}^{{2{e}}}"),
            Family::U => format!("u_{i}^{{2{e}}}"),
            Family::V => format!("v_{i}^{{2{e}+1}}"),
            Family::W => format!("w_{i}^{{2{e}+1}}"),
        }
    }

    /// Basis classes of this family with index `≤ max_index` and `p ≤ max_p`.
    pub fn members(self, max_index: u32, max_p: u32) -> Vec<ClassName> {
        let idx = 0..=max_index;
        match self {
            Family::C => vec![ClassName::C],
            Family::S => idx.map(ClassName::S).collect(),
            Family::T => (1..=max_p).flat_map(|p| (0..=max_index).map(move |n| ClassName::T(n, 2 * p))).collect(),
            Family::U => (1..=max_p).flat_map(|p| (0..=max_index).map(move |n| ClassName::U(n, 2 * p))).collect(),
            Family::V => (1..=max_p).flat_map(|p| (0..=max_index).map(move |n| ClassName::V(n, 2 * p + 1))).collect(),
            Family::W => (1..=max_p).flat_map(|p| (0..=max_index).map(move |n| ClassName::W(n, 2 * p + 1))).collect(),
        }
    }
}

/// Generic formula for the product of a row family (index `m`, exponent `p`)
/// with a column family (index `n`, exponent `q`).
pub fn generic_cup_formula(row: Family, col: Family) -> String {
    use Family::*;
    match (row, col) {
        (C, _) | (_, C) => "0".into(),
        (S, S) => "4(n-m) t_{n+m+1}^{2}".into(),
        (S, U) => "2 v_{n+m+1}^{2q+1} + (2m+1) w_{n+m}^{2q+1}".into(),
        (S, V) => "-(2m+1) t_{n+m}^{2q+2}".into(),
        (S, W) => "2 t_{n+m+1}^{2q+2}".into(),
        (U, S) => "2 v_{n+m+1}^{2p+1} + (2n+1) w_{n+m}^{2p+1}".into(),
        (V, S) => "(2n+1) t_{n+m}^{2p+2}".into(),
        (W, S) => "-2 t_{n+m+1}^{2p+2}".into(),
        (S, T) | (T, S) | (T, T) | (T, V) | (T, W) | (V, T) | (W, T) | (V, V) | (W, W) => "0".into(),
        (T, U) | (U, T) => "t_{m+n}^{2p+2q}".into(),
        (U, U) => "u_{m+n}^{2p+2q}".into(),
        (U, V) => "v_{m+n}^{2p+2q+1}".into(),
        (V, U) => "v_{m+n}^{2p+2q+1}".into(),
        (U, W) => "w_{m+n}^{2p+2q+1}".into(),
        (W, U) => "w_{m+n}^{2p+2q+1}".into(),
        (V, W) => "t_{m+n}^{2p+2q+2}".into(),
        (W, V) => "-t_{m+n}^{2p+2q+2}".into(),
    }
}

/// One entry of the computed product table.
#[derive(Clone, Debug, Serialize)]
pub struct CupEntry {
    pub left: String,
    pub right: String,
    pub expected: Class,
    pub computed: Option<Class>,
    pub tabulated_differs: bool,
    pub status: Status,
    pub error: Option<String>,
}

/// Computes every product of basis classes with indices `≤ max_index` and
/// exponents `≤ max_p`, in parallel, in a stable order.
pub fn cup_table(max_index: u32, max_p: u32) -> Vec<CupEntry> {
    use rayon::prelude::*;
    let members: Vec<ClassName> = Family::ALL.iter().flat_map(|f| f.members(max_index, max_p)).collect();
    let pairs: Vec<(ClassName, ClassName)> =
        members.iter().flat_map(|a| members.iter().map(move |b| (*a, *b))).collect();
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let expected = expected_cup(a, b);
            let tabulated_differs = tabulated_cup(a, b) != expected;
            let (computed, error) = match cup_names(a, b) {
                Ok(c) => (Some(c), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let status = Status::of(computed.as_ref() == Some(&expected));
            CupEntry { left: a.to_string(), right: b.to_string(), expected, computed, tabulated_differs, status, error }
        })
        .collect()
}

/// Sign `(−1)^{|a||b|}` of graded commutativity.
pub fn koszul_sign(a: u32, b: u32) -> Q {
    if (a * b).is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

/// `a⌣b − (−1)^{|a||b|} b⌣a`.
pub fn graded_commutator(a: ClassName, b: ClassName) -> Result<Class, StructureError> {
    let mut out = cup_names(a, b)?;
    out.add_scaled(&-koszul_sign(a.hdeg(), b.hdeg()), &cup_names(b, a)?);
    Ok(out)
}

/// `(a⌣b)⌣c − a⌣(b⌣c)`.
pub fn associator(a: ClassName, b: ClassName, c: ClassName) -> Result<Class, StructureError> {
    let (ea, eb, ec) = (Class::named(a), Class::named(b), Class::named(c));
    let mut out = cup(&cup(&ea, &eb)?, &ec)?;
    out.add_scaled(&q(-1), &cup(&ea, &cup(&eb, &ec)?)?);
    Ok(out)
}

/// `[δ, a⌣b] − ([δ,a]⌣b + a⌣[δ,b])`.
pub fn poisson_defect(delta: ClassName, a: ClassName, b: ClassName) -> Result<Class, StructureError> {
    let (ea, eb) = (Class::named(a), Class::named(b));
    let ab = cup(&ea, &eb)?;
    let mut out = bracket(delta, &ab, a.hdeg() + b.hdeg())?;
    let da = bracket(delta, &ea, a.hdeg())?;
    let db = bracket(delta, &eb, b.hdeg())?;
    out.add_scaled(&q(-1), &cup(&da, &eb)?);
    out.add_scaled(&q(-1), &cup(&ea, &db)?);
    Ok(out)
}

/// Multiplication by `u_0^2` from cell `(r, w)` to `(r+2, w−2)`.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicityCell {
    pub hdeg: u32,
    pub weight: i64,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub status: Status,
}

pub fn periodicity_cell(r: u32, w: i64) -> Result<PeriodicityCell, StructureError> {
    let src = named_classes(r, w);
    let tgt = named_classes(r + 2, w - 2);
    let u = Class::named(ClassName::U(0, 2));
    let mut cols: Vec<SparseVec> = Vec::new();
    for n in &src {
        let img = cup(&Class::named(*n), &u)?;
        cols.push(
            tgt.iter()
                .enumerate()
                .filter_map(|(i, t)| {
                    let c = img.coeff(*t);
                    (!c.is_zero()).then_some((i, c))
                })
                .collect(),
        );
    }
    let rk = rank(&cols);
    let status = Status::of(src.len() == tgt.len() && rk == src.len());
    Ok(PeriodicityCell { hdeg: r, weight: w, source_dim: src.len(), target_dim: tgt.len(), rank: rk, status })
}

/// Closed forms for the action of `H¹` on the even-degree classes, and on `H¹`.
pub fn expected_bracket(delta: ClassName, target: ClassName) -> Option<Class> {
    use ClassName::*;
    let i = |n: u32| n as i64;
    match (delta, target) {
        (C, _) => Some(Class::zero()),
        (S(_), C) => Some(Class::zero()),
        (S(m), S(n)) => Some(lin(&[(2 * (i(n) - i(m)), S(n + m))])),
        (S(m), T(n, r)) => {
            let p = i(r) / 2;
            Some(lin(&[(2 * (i(n) - (2 * p - 1) * i(m) - p), T(n + m, r))]))
        }
        (S(m), U(n, r)) => {
            let p = i(r) / 2;
            Some(lin(&[(2 * (i(n) - 2 * p * i(m) - p), U(n + m, r)), (2 * p * i(m) * (2 * i(m) + 1), T(n + m, r))]))
        }
        _ => None,
    }
}

/// `[s_m, X^{2(p+1)}] = [s_m, u_0^2]⌣X^{2p} + u_0^2⌣[s_m, X^{2p}]`, with the
/// brackets on the right computed directly.
pub fn bracket_by_periodicity(m: u32, target: ClassName) -> Result<Class, StructureError> {
    let r = target.hdeg();
    assert!(r >= 4, "needs a class of degree at least 4");
    let lower = match target {
        ClassName::T(n, r) => ClassName::T(n, r - 2),
        ClassName::U(n, r) => ClassName::U(n, r - 2),
        ClassName::V(n, r) => ClassName::V(n, r - 2),
        ClassName::W(n, r) => ClassName::W(n, r - 2),
        _ => panic!("periodic families only"),
    };
    let u0 = Class::named(ClassName::U(0, 2));
    let su = bracket(ClassName::S(m), &u0, 2)?;
    let sl = bracket(ClassName::S(m), &Class::named(lower), r - 2)?;
    let mut out = cup(&su, &Class::named(lower))?;
    out.add_scaled(&q(1), &cup(&u0, &sl)?);
    Ok(out)
}

/// Basis of `Vir⁺ ⊕ 𝔥`: the central element and `L_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VirBasis {
    C,
    L(i64),
}

impl fmt::Display for VirBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VirBasis::C => write!(f, "C"),
            VirBasis::L(m) => write!(f, "L_{m}"),
        }
    }
}

/// Element of the Virasoro algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VirElement {
    pub coords: BTreeMap<VirBasis, Q>,
}

impl VirElement {
    pub fn add_term(&mut self, c: Q, b: VirBasis) {
        let e = self.coords.entry(b).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coords.remove(&b);
        }
    }

    pub fn scale(&self, k: &Q) -> VirElement {
        let mut out = VirElement::default();
        for (b, c) in &self.coords {
            out.add_term(c * k, *b);
        }
        out
    }

    pub fn render(&self) -> String {
        crate::cohomology::render_combination(self.coords.iter().map(|(b, c)| (c.clone(), b.to_string())))
    }
}

impl Serialize for VirElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

/// `[L_m, L_n] = (n−m)L_{m+n} + δ_{m,−n}(m³−m)/12 C`, `C` central.
pub fn vir_bracket(a: VirBasis, b: VirBasis) -> VirElement {
    let mut out = VirElement::default();
    if let (VirBasis::L(m), VirBasis::L(n)) = (a, b) {
        out.add_term(q(n - m), VirBasis::L(m + n));
        if m == -n {
            out.add_term(q(m * m * m - m) / q(12), VirBasis::C);
        }
    }
    out
}

/// `c ↦ C`, `s_m ↦ 2^{m+1} L_m`.
pub fn transport(c: &Class) -> Option<VirElement> {
    let mut out = VirElement::default();
    for (n, k) in &c.coords {
        match n {
            ClassName::C => out.add_term(k.clone(), VirBasis::C),
            ClassName::S(m) => out.add_term(k * pow2(m + 1), VirBasis::L(*m as i64)),
            _ => return None,
        }
    }
    Some(out)
}

fn pow2(e: u32) -> Q {
    Q::from_integer(num::BigInt::one() << e as usize)
}

/// One bracket `[a, b]` in `H¹` compared with the Virasoro bracket of the images.
#[derive(Clone, Debug, Serialize)]
pub struct VirasoroEntry {
    pub left: String,
    pub right: String,
    pub bracket: Class,
    pub transported: Option<VirElement>,
    pub expected: VirElement,
    pub status: Status,
}

/// The degree-one basis classes `c, s_0, …, s_M`.
pub fn h1_basis(max: u32) -> Vec<ClassName> {
    std::iter::once(ClassName::C).chain((0..=max).map(ClassName::S)).collect()
}

/// Transports brackets supplied by `br` along `c ↦ C`, `s_m ↦ 2^{m+1}L_m`.
pub fn virasoro_check_with<F>(max: u32, mut br: F) -> Vec<VirasoroEntry>
where
    F: FnMut(ClassName, ClassName) -> Class,
{
    let basis = h1_basis(max);
    let mut out = Vec::new();
    for &a in &basis {
        for &b in &basis {
            let bracket = br(a, b);
            let ta = transport(&Class::named(a)).expect("degree one");
            let tb = transport(&Class::named(b)).expect("degree one");
            let mut expected = VirElement::default();
            for (x, cx) in &ta.coords {
                for (y, cy) in &tb.coords {
                    for (z, cz) in vir_bracket(*x, *y).coords {
                        expected.add_term(cx * cy * cz, z);
                    }
                }
            }
            let transported = transport(&bracket);
            let status = Status::of(transported.as_ref() == Some(&expected));
            out.push(VirasoroEntry { left: a.to_string(), right: b.to_string(), bracket, transported, expected, status });
        }
    }
    out
}

/// Computes every bracket as a commutator of derivations and transports it.
pub fn virasoro_check(max: u32) -> Result<Vec<VirasoroEntry>, StructureError> {
    let mut err = None;
    let entries = virasoro_check_with(max, |a, b| {
        let da = Derivation::of_class(a).expect("degree one");
        let db = Derivation::of_class(b).expect("degree one");
        bracket_h1(&da, &db).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Class::zero()
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(entries),
    }
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` for degree-one classes.
pub fn jacobiator_h1(x: ClassName, y: ClassName, z: ClassName) -> Result<Class, StructureError> {
    let d = |n: ClassName| Derivation::of_class(n).expect("degree one");
    let br = |a: &Derivation, b: &Derivation| a.commutator(b);
    let (dx, dy, dz) = (d(x), d(y), d(z));
    let t1 = br(&dx, &br(&dy, &dz));
    let t2 = br(&dy, &br(&dz, &dx));
    let t3 = br(&dz, &br(&dx, &dy));
    let mut z1 = t1.to_cochain();
    z1.add_scaled(&q(1), &t2.to_cochain());
    z1.add_scaled(&q(1), &t3.to_cochain());
    Ok(reduce_to_basis(&z1)?)
}

/// Family selector for the action on `H^r`, `r ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SeriesFamily {
    T,
    U,
    V,
    W,
}

impl SeriesFamily {
    pub fn class(self, n: u32, r: u32) -> ClassName {
        match self {
            SeriesFamily::T => ClassName::T(n, r),
            SeriesFamily::U => ClassName::U(n, r),
            SeriesFamily::V => ClassName::V(n, r),
            SeriesFamily::W => ClassName::W(n, r),
        }
    }

    /// Rescaled symbol (`τ, μ, ν, ω`).
    pub fn rescaled_symbol(self) -> &'static str {
        match self {
            SeriesFamily::T => "τ",
            SeriesFamily::U => "μ",
            SeriesFamily::V => "ν",
            SeriesFamily::W => "ω",
        }
    }

    pub fn of(n: ClassName) -> Option<(SeriesFamily, u32)> {
        match n {
            ClassName::T(k, _) => Some((SeriesFamily::T, k)),
            ClassName::U(k, _) => Some((SeriesFamily::U, k)),
            ClassName::V(k, _) => Some((SeriesFamily::V, k)),
            ClassName::W(k, _) => Some((SeriesFamily::W, k)),
            _ => None,
        }
    }
}

/// Rescaled coordinates: `L_m = s_m/2^{m+1}` acting on `X_n/2^{n+1}`, with
/// the result expressed in the rescaled classes `Y_k/2^{k+1}`.
pub fn rescale_action(m: u32, n: u32, raw: &Class) -> BTreeMap<ClassName, Q> {
    raw.coords
        .iter()
        .map(|(t, c)| {
            let k = SeriesFamily::of(*t).map(|(_, k)| k).unwrap_or(0);
            (*t, c * pow2(k + 1) / (pow2(m + 1) * pow2(n + 1)))
        })
        .collect()
}

/// One rescaled action coefficient `L_m · X_n`.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesSample {
    pub m: u32,
    pub n: u32,
    pub raw: Class,
    #[serde(serialize_with = "serialize_q")]
    pub diagonal: Q,
    pub off_diagonal: Vec<(String, String)>,
}

/// Fitted intermediate-series parameters for one family in one degree.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesFit {
    pub family: SeriesFamily,
    pub hdeg: u32,
    #[serde(serialize_with = "serialize_q")]
    pub a: Q,
    #[serde(serialize_with = "serialize_q")]
    pub b: Q,
    pub samples: Vec<SeriesSample>,
    pub central_trivial: bool,
}

/// Computes `[L_m, X_n]` for `m ≤ max_m`, `n ≤ max_n` and fits the diagonal
/// coefficient to `n + a·m + b`.
pub fn intermediate_series_match(
    family: SeriesFamily,
    r: u32,
    max_m: u32,
    max_n: u32,
) -> Result<SeriesFit, StructureError> {
    let mut samples = Vec::new();
    let mut central_trivial = true;
    for n in 0..=max_n {
        let x = family.class(n, r);
        central_trivial &= bracket(ClassName::C, &Class::named(x), r)?.is_zero();
        for m in 0..=max_m {
            let raw = bracket(ClassName::S(m), &Class::named(x), r)?;
            let resc = rescale_action(m, n, &raw);
            let diag_name = family.class(n + m, r);
            let diagonal = resc.get(&diag_name).cloned().unwrap_or_else(Q::zero);
            let off_diagonal =
                resc.iter().filter(|(k, _)| **k != diag_name).map(|(k, c)| (k.to_string(), render_q(c))).collect();
            samples.push(SeriesSample { m, n, raw, diagonal, off_diagonal });
        }
    }
    let col_a: SparseVec = samples.iter().enumerate().filter(|(_, s)| s.m != 0).map(|(i, s)| (i, q(s.m as i64))).collect();
    let col_b: SparseVec = (0..samples.len()).map(|i| (i, q(1))).collect();
    let target: SparseVec = samples
        .iter()
        .enumerate()
        .map(|(i, s)| (i, &s.diagonal - q(s.n as i64)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let sol = solve(&[col_a, col_b], &target).ok_or_else(|| {
        StructureError::FitImpossible(format!("{family:?} in degree {r}: no (a, b) with L_m·X_n = (n + am + b)X_(n+m)"))
    })?;
    let get = |j: usize| sol.iter().find(|(k, _)| *k == j).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero);
    Ok(SeriesFit { family, hdeg: r, a: get(0), b: get(1), samples, central_trivial })
}

/// The parameters `(−(2p−1), −p)` expected for `τ^{2p}`.
pub fn expected_even_fit(p: u32) -> (Q, Q) {
    (q(-(2 * p as i64 - 1)), q(-(p as i64)))
}

/// `|x|` for rationals, used in reports.
pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;

    fn named(n: ClassName) -> Class {
        Class::named(n)
    }

    #[test]
    fn derivations_are_well_defined() {
        Derivation::c().check().unwrap();
        for n in 0..5 {
            Derivation::s(n).check().unwrap();
        }
        let bad = Derivation::new(Element::y(), Element::zero());
        assert!(bad.check().is_err());
    }

    #[test]
    fn h1_brackets() {
        let br = |a, b| bracket_h1(&Derivation::of_class(a).unwrap(), &Derivation::of_class(b).unwrap()).unwrap();
        assert_eq!(br(ClassName::S(0), ClassName::S(1)), lin(&[(2, ClassName::S(1))]));
        assert!(br(ClassName::C, ClassName::S(3)).is_zero());
        assert!(br(ClassName::S(2), ClassName::S(2)).is_zero());
    }

    #[test]
    fn spec_cup_examples() {
        use ClassName::*;
        assert_eq!(cup_names(S(0), S(1)).unwrap(), lin(&[(4, T(2, 2))]));
        assert_eq!(cup_names(U(0, 2), T(1, 2)).unwrap(), named(T(1, 4)));
        assert_eq!(cup_names(V(0, 3), W(0, 3)).unwrap(), named(T(0, 6)));
        for n in 0..=4 {
            assert!(cup_names(C, S(n)).unwrap().is_zero());
        }
        assert_eq!(cup_names(One, U(1, 2)).unwrap(), named(U(1, 2)));
    }

    #[test]
    fn tabulated_liftings_commute() {
        for kind in TabulatedLifting::ALL {
            let top = kind.tabulated().unwrap_or(6);
            let l = tabulated_lifting(kind, top).unwrap();
            for (g, ok) in l.verify() {
                assert!(ok, "{} fails at {g}", kind.name());
            }
        }
    }

    #[test]
    fn spec_lifting_examples() {
        let c = tabulated_lifting(TabulatedLifting::C, 2).unwrap();
        let mut e = BiElem::term(q(1), Monomial::Y, Gen::X(2), Monomial::ONE);
        e.add_term(q(-1), Monomial::ONE, Gen::X(2), Monomial::Y);
        e.add_term(q(-1), Monomial::X, Gen::X(2), Monomial::ONE);
        assert_eq!(c.value(Gen::Y2X(1)).unwrap(), &e);
        let a = tabulated_lifting(TabulatedLifting::Alpha, 2).unwrap();
        assert_eq!(a.value(Gen::X(2)).unwrap(), &BiElem::generator(Gen::X(2)).scale(&q(2)));
        assert_eq!(a.value(Gen::Y2X(1)).unwrap(), &BiElem::generator(Gen::Y2X(1)).scale(&q(3)));
    }

    #[test]
    fn spec_bracket_examples() {
        use ClassName::*;
        for n in 0..=4 {
            let b = bracket(S(0), &named(T(n, 2)), 2).unwrap();
            assert_eq!(b, lin(&[(2 * (n as i64 - 1), T(n, 2))]));
            assert!(bracket(C, &named(U(n, 2)), 2).unwrap().is_zero());
        }
        for n in 0..=3u32 {
            let b = bracket(S(1), &named(U(n, 2)), 2).unwrap();
            assert_eq!(b, lin(&[(2 * (n as i64 - 3), U(n + 1, 2)), (6, T(n + 1, 2))]));
        }
    }

    #[test]
    fn lifted_bracket_on_h1_is_commutator() {
        for m in 0..=2 {
            for n in 0..=3 {
                let via_lift = bracket(ClassName::S(m), &named(ClassName::S(n)), 1).unwrap();
                let direct =
                    bracket_h1(&Derivation::s(m), &Derivation::s(n)).unwrap();
                assert_eq!(via_lift, direct);
            }
        }
    }

    #[test]
    fn parse_roundtrip() {
        let c = lin(&[(2, ClassName::T(1, 2)), (-3, ClassName::U(0, 4)), (1, ClassName::S(2))]);
        assert_eq!(c.to_string().parse::<Class>().unwrap(), c);
        assert_eq!("-1/2*w_3^5".parse::<Class>().unwrap(), Class::from_terms([(crate::algebra::qfrac(-1, 2), ClassName::W(3, 5))]));
    }
}
