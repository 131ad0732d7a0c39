//! The super Jordan plane `A = k<x,y>/(x², y²x − xy² − xyx)` over the rationals.
//!
//! Elements are stored in the PBW basis `x^a(yx)^b y^c` (`a ∈ {0,1}`). Two
//! independent multiplication routes exist: word rewriting with the reduction
//! system `{xx → 0, yyx → xyy + xyx}` ([`normal_form`]) and a letter-by-letter
//! left action on PBW monomials ([`Element::mul`]). Tests hold them equal.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{OnceLock, RwLock};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::AlgebraError;

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`.
pub fn render_q(c: &Q) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Serializes a rational as its rendered string (for `#[serde(serialize_with)]`).
pub fn serialize_q<S: serde::Serializer>(c: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&render_q(c))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `n!/i!` as a rational.
pub fn falling(n: u32, i: u32) -> Q {
    Q::from_integer(factorial(n) / factorial(i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

/// A word in the free algebra `k<x,y>`; `X < Y` in the letter order.
pub type Word = Vec<Letter>;

pub fn parse_word(s: &str) -> Word {
    s.chars()
        .filter_map(|ch| match ch {
            'x' => Some(Letter::X),
            'y' => Some(Letter::Y),
            _ => None,
        })
        .collect()
}

pub fn render_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|l| match l {
            Letter::X => 'x',
            Letter::Y => 'y',
        })
        .collect()
}

/// PBW monomial `x^a (yx)^b y^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial {
    pub a: u8,
    pub b: u32,
    pub c: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { a: 0, b: 0, c: 0 };
    pub const X: Monomial = Monomial { a: 1, b: 0, c: 0 };
    pub const Y: Monomial = Monomial { a: 0, b: 0, c: 1 };

    pub fn new(a: u8, b: u32, c: u32) -> Self {
        assert!(a <= 1, "x-exponent of a PBW monomial is 0 or 1");
        Monomial { a, b, c }
    }

    pub fn degree(&self) -> u32 {
        self.a as u32 + 2 * self.b + self.c
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn word(&self) -> Word {
        let mut w = Vec::with_capacity(self.degree() as usize);
        if self.a == 1 {
            w.push(Letter::X);
        }
        for _ in 0..self.b {
            w.push(Letter::Y);
            w.push(Letter::X);
        }
        w.extend(std::iter::repeat_n(Letter::Y, self.c as usize));
        w
    }

    /// Recognises a word already in PBW form.
    pub fn from_word(w: &[Letter]) -> Option<Monomial> {
        let mut i = 0;
        let mut a = 0;
        if w.first() == Some(&Letter::X) {
            a = 1;
            i = 1;
        }
        let mut b = 0;
        while i + 1 < w.len() && w[i] == Letter::Y && w[i + 1] == Letter::X {
            b += 1;
            i += 2;
        }
        let c = w[i..].len() as u32;
        if w[i..].iter().all(|&l| l == Letter::Y) {
            Some(Monomial { a, b, c })
        } else {
            None
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.a, self.b, self.c).cmp(&(other.degree(), other.a, other.b, other.c))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut s = String::new();
        if self.a == 1 {
            s.push('x');
        }
        match self.b {
            0 => {}
            1 => s.push_str("(yx)"),
            b => s.push_str(&format!("(yx)^{b}")),
        }
        if self.c > 0 {
            if !s.is_empty() {
                s.push(' ');
            }
            if self.c == 1 {
                s.push('y');
            } else {
                s.push_str(&format!("y^{}", self.c));
            }
        }
        write!(f, "{s}")
    }
}

/// PBW monomials of degree `d`, ordered deg-lex on the underlying word with
/// `y > x`, largest first (`d = 2` gives `y², yx, xy`).
pub fn graded_basis(d: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(d as usize + 1);
    for a in 0..=1u8 {
        if (a as u32) > d {
            continue;
        }
        let rest = d - a as u32;
        for b in 0..=rest / 2 {
            out.push(Monomial::new(a, b, rest - 2 * b));
        }
    }
    out.sort_by(|p, q| q.word().cmp(&p.word()));
    out
}

pub fn dim(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        d as usize + 1
    }
}

/// Finite linear combination of PBW monomials; no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Monomial, Q>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::ONE)
    }

    pub fn x() -> Self {
        Self::monomial(Monomial::X)
    }

    pub fn y() -> Self {
        Self::monomial(Monomial::Y)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(q(1), m)
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut e = Self::zero();
        e.add_term(c, m);
        e
    }

    pub fn scalar(c: Q) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn from_terms<I: IntoIterator<Item = (Q, Monomial)>>(it: I) -> Self {
        let mut e = Self::zero();
        for (c, m) in it {
            e.add_term(c, m);
        }
        e
    }

    pub fn add_term(&mut self, c: Q, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &Element) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(c * d, *m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(m, d)| (*m, d * c)).collect() }
    }

    /// The augmentation `ε: A → k`.
    pub fn augmentation(&self) -> Q {
        self.coeff(&Monomial::ONE)
    }

    pub fn homogeneous_part(&self, d: u32) -> Element {
        Element {
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// `Some(d)` when every term has degree `d`; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn mul(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let p = mul_monomials(*m1, *m2);
                out.add_scaled(&(c1 * c2), &p);
            }
        }
        out
    }

    pub fn commutator(&self, other: &Element) -> Element {
        self.mul(other) - other.mul(self)
    }

    pub fn pow(&self, n: u32) -> Element {
        (0..n).fold(Element::one(), |acc, _| acc.mul(self))
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&render_q(&abs));
            } else {
                if !abs.is_one() {
                    s.push_str(&render_q(&abs));
                    s.push('*');
                }
                s.push_str(&m.to_string());
            }
        }
        s
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl From<Monomial> for Element {
    fn from(m: Monomial) -> Self {
        Element::monomial(m)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += rhs;
        self
    }
}

impl AddAssign for Element {
    fn add_assign(&mut self, rhs: Element) {
        for (m, c) in rhs.terms {
            self.add_term(c, m);
        }
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        self.add_scaled(&q(1), rhs);
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(mut self, rhs: Element) -> Element {
        self -= rhs;
        self
    }
}

impl SubAssign for Element {
    fn sub_assign(&mut self, rhs: Element) {
        for (m, c) in rhs.terms {
            self.add_term(-c, m);
        }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        self.add_scaled(&q(-1), rhs);
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        -self.clone()
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        Element::mul(self, rhs)
    }
}

fn left_x(m: Monomial) -> Option<Monomial> {
    (m.a == 0).then(|| Monomial::new(1, m.b, m.c))
}

/// `y · x^a(yx)^b y^c` in PBW form.
fn left_y(m: Monomial) -> Element {
    if m.a == 1 {
        return Element::monomial(Monomial::new(0, m.b + 1, m.c));
    }
    if m.b == 0 {
        return Element::monomial(Monomial::new(0, 0, m.c + 1));
    }
    // y(yx)^b y^c = (xy² + xyx)(yx)^{b-1} y^c
    let tail = Monomial::new(0, m.b - 1, m.c);
    let mut out = Element::monomial(Monomial::new(1, m.b, m.c));
    for (m1, c1) in left_y(tail).terms {
        for (m2, c2) in left_y(m1).terms {
            if let Some(m3) = left_x(m2) {
                out.add_term(&c1 * c2, m3);
            }
        }
    }
    out
}

type ProductCache = RwLock<HashMap<(Monomial, Monomial), Element>>;

fn product_cache() -> &'static ProductCache {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Product of two PBW monomials, by applying the letters of `u` from the right.
pub fn mul_monomials(u: Monomial, v: Monomial) -> Element {
    if u.is_one() {
        return Element::monomial(v);
    }
    if v.is_one() {
        return Element::monomial(u);
    }
    // x^a(yx)^b · x... vanishes as soon as an xx appears.
    if v.a == 0 && u.c == 0 {
        return Element::monomial(Monomial::new(u.a, u.b + v.b, v.c));
    }
    if v.a == 1 && u.c == 0 {
        return if u.b == 0 && u.a == 0 { Element::monomial(v) } else { Element::zero() };
    }
    if let Some(hit) = product_cache().read().expect("cache poisoned").get(&(u, v)) {
        return hit.clone();
    }
    let mut acc = Element::monomial(v);
    for l in u.word().into_iter().rev() {
        let mut next = Element::zero();
        for (m, c) in acc.terms {
            match l {
                Letter::X => {
                    if let Some(m2) = left_x(m) {
                        next.add_term(c, m2);
                    }
                }
                Letter::Y => next.add_scaled(&c, &left_y(m)),
            }
        }
        acc = next;
    }
    product_cache().write().expect("cache poisoned").insert((u, v), acc.clone());
    acc
}

/// Product of a sequence of monomials.
pub fn product(ms: &[Monomial]) -> Element {
    ms.iter().fold(Element::one(), |acc, m| acc.mul(&Element::monomial(*m)))
}

fn redexes(w: &[Letter]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        if w[i..].starts_with(&[Letter::X, Letter::X]) || w[i..].starts_with(&[Letter::Y, Letter::Y, Letter::X]) {
            out.push(i);
        }
    }
    out
}

/// One rewrite at position `i`, which must be a redex.
fn rewrite_at(w: &[Letter], i: usize) -> Vec<Word> {
    if w[i..].starts_with(&[Letter::X, Letter::X]) {
        return Vec::new();
    }
    let (pre, post) = (&w[..i], &w[i + 3..]);
    let mut out = Vec::with_capacity(2);
    for mid in [[Letter::X, Letter::Y, Letter::Y], [Letter::X, Letter::Y, Letter::X]] {
        let mut v = pre.to_vec();
        v.extend_from_slice(&mid);
        v.extend_from_slice(post);
        out.push(v);
    }
    out
}

/// PBW normal form of a formal sum of words, rewriting leftmost redexes first.
pub fn normal_form_sum(words: &[(Q, Word)]) -> Element {
    let mut pending: BTreeMap<Word, Q> = BTreeMap::new();
    for (c, w) in words {
        *pending.entry(w.clone()).or_insert_with(Q::zero) += c;
    }
    let mut out = Element::zero();
    while let Some((w, c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        match redexes(&w).first() {
            None => {
                let m = Monomial::from_word(&w).expect("irreducible words are PBW monomials");
                out.add_term(c, m);
            }
            Some(&i) => {
                for v in rewrite_at(&w, i) {
                    *pending.entry(v).or_insert_with(Q::zero) += &c;
                }
            }
        }
    }
    out
}

pub fn normal_form(w: &[Letter]) -> Element {
    normal_form_sum(&[(q(1), w.to_vec())])
}

/// Checks that every reduction strategy agrees on all words of length `≤ max_len`.
/// Returns the number of words examined.
pub fn verify_confluence(max_len: usize) -> Result<usize, AlgebraError> {
    fn nf(w: &Word, memo: &mut HashMap<Word, Element>) -> Result<Element, AlgebraError> {
        if let Some(e) = memo.get(w) {
            return Ok(e.clone());
        }
        let rs = redexes(w);
        let result = if rs.is_empty() {
            Element::monomial(Monomial::from_word(w).expect("irreducible words are PBW monomials"))
        } else {
            let mut first: Option<Element> = None;
            for i in rs {
                let mut e = Element::zero();
                for v in rewrite_at(w, i) {
                    e += nf(&v, memo)?;
                }
                match &first {
                    None => first = Some(e),
                    Some(f) if *f != e => {
                        return Err(AlgebraError::NotConfluent { word: render_word(w) });
                    }
                    _ => {}
                }
            }
            first.expect("at least one redex")
        };
        memo.insert(w.clone(), result.clone());
        Ok(result)
    }
    let mut memo = HashMap::new();
    let mut count = 0;
    for len in 0..=max_len {
        for bits in 0..(1u32 << len) {
            let w: Word = (0..len).map(|i| if bits >> i & 1 == 1 { Letter::Y } else { Letter::X }).collect();
            nf(&w, &mut memo)?;
            count += 1;
        }
    }
    Ok(count)
}

/// The four commutation rules for moving powers of `y` past `x` and `(yx)^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CommutationKind {
    /// `y^{2n} x`
    EvenPastX,
    /// `y^{2n+1} x`
    OddPastX,
    /// `y^{2n} (yx)^b`
    EvenPastYx,
    /// `y^{2n+1} (yx)^b`
    OddPastYx,
}

/// Left-hand side word of a commutation rule.
pub fn commutation_lhs(kind: CommutationKind, n: u32, b: u32) -> Word {
    let ys = match kind {
        CommutationKind::EvenPastX | CommutationKind::EvenPastYx => 2 * n,
        CommutationKind::OddPastX | CommutationKind::OddPastYx => 2 * n + 1,
    };
    let mut w = vec![Letter::Y; ys as usize];
    match kind {
        CommutationKind::EvenPastX | CommutationKind::OddPastX => w.push(Letter::X),
        _ => {
            for _ in 0..b {
                w.push(Letter::Y);
                w.push(Letter::X);
            }
        }
    }
    w
}

/// Closed-form right-hand side of a commutation rule.
pub fn commutation_closed_form(kind: CommutationKind, n: u32, b: u32) -> Result<Element, AlgebraError> {
    let mut e = Element::zero();
    match kind {
        CommutationKind::EvenPastX => {
            for i in 0..=n {
                e.add_term(falling(n, i), Monomial::new(1, n - i, 2 * i));
            }
        }
        CommutationKind::OddPastX => {
            for i in 0..=n {
                e.add_term(falling(n, i), Monomial::new(0, n - i + 1, 2 * i));
            }
        }
        CommutationKind::EvenPastYx | CommutationKind::OddPastYx if b == 0 => {
            return Err(AlgebraError::OutOfRange(format!("{kind:?} needs b >= 1")));
        }
        CommutationKind::EvenPastYx => {
            for i in 0..=n {
                let c = binomial(n, i) * factorial(b + n - i - 1) / factorial(b - 1);
                e.add_term(Q::from_integer(c), Monomial::new(0, b + n - i, 2 * i));
            }
        }
        CommutationKind::OddPastYx => {
            for i in 0..=n + 1 {
                let c = binomial(n + 1, i) * factorial(b + n - i) / factorial(b - 1);
                e.add_term(Q::from_integer(c), Monomial::new(1, b + n - i, 2 * i));
            }
        }
    }
    Ok(e)
}

/// A power `t^k` of the generator of `ℤ` acting on `A` by `t·x = −x`, `t·y = −y + x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupPower(pub i64);

type Mat2 = [[Q; 2]; 2];

fn mat2_mul(m: &Mat2, n: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &m[i][0] * &n[0][j] + &m[i][1] * &n[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Matrix of `t` on `A_1` in the basis `(x, y)`; column `j` is the image of basis vector `j`.
fn t_matrix() -> Mat2 {
    [[q(-1), q(1)], [q(0), q(-1)]]
}

/// Inverse obtained by solving the 2×2 system once.
fn t_inverse_matrix() -> &'static Mat2 {
    static INV: OnceLock<Mat2> = OnceLock::new();
    INV.get_or_init(|| {
        let m = t_matrix();
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        [
            [&m[1][1] / &det, -&m[0][1] / &det],
            [-&m[1][0] / &det, &m[0][0] / &det],
        ]
    })
}

impl GroupPower {
    fn matrix(self) -> Mat2 {
        let base = if self.0 >= 0 { t_matrix() } else { t_inverse_matrix().clone() };
        let mut acc: Mat2 = [[q(1), q(0)], [q(0), q(1)]];
        for _ in 0..self.0.unsigned_abs() {
            acc = mat2_mul(&base, &acc);
        }
        acc
    }

    /// Images of `x` and `y`.
    pub fn generator_images(self) -> (Element, Element) {
        let m = self.matrix();
        let img = |j: usize| {
            Element::from_terms([(m[0][j].clone(), Monomial::X), (m[1][j].clone(), Monomial::Y)])
        };
        (img(0), img(1))
    }

    pub fn apply_monomial(self, m: Monomial) -> Element {
        let (ix, iy) = self.generator_images();
        m.word().iter().fold(Element::one(), |acc, l| {
            acc.mul(match l {
                Letter::X => &ix,
                Letter::Y => &iy,
            })
        })
    }

    pub fn apply(self, v: &Element) -> Element {
        if self.0 == 0 {
            return v.clone();
        }
        let mut out = Element::zero();
        for (m, c) in v.terms() {
            out.add_scaled(c, &self.apply_monomial(*m));
        }
        out
    }
}

pub fn apply_group_action(k: GroupPower, v: &Element) -> Element {
    k.apply(v)
}

/// Image of a word under an algebra map given on generators.
pub fn map_word(w: &[Letter], ix: &Element, iy: &Element) -> Element {
    w.iter().fold(Element::one(), |acc, l| {
        acc.mul(match l {
            Letter::X => ix,
            Letter::Y => iy,
        })
    })
}

/// The defining cubic relation `y²x − xy² − xyx`, as a formal sum of words.
pub fn cubic_relation() -> Vec<(Q, Word)> {
    vec![(q(1), parse_word("yyx")), (q(-1), parse_word("xyy")), (q(-1), parse_word("xyx"))]
}

/// `dim (k⟨x,y⟩/I)_d` by linear algebra on words of length `d`: `I_d` is
/// spanned by `u·r·v` for the two relations `r`. Independent of rewriting.
pub fn brute_force_dim(d: u32) -> usize {
    let n = d as usize;
    let index = |w: &[Letter]| w.iter().fold(0usize, |acc, l| 2 * acc + usize::from(*l == Letter::Y));
    let word = |bits: usize, len: usize| -> Word {
        (0..len).rev().map(|i| if bits >> i & 1 == 1 { Letter::Y } else { Letter::X }).collect()
    };
    let rels: Vec<Vec<(Q, Word)>> = vec![vec![(q(1), parse_word("xx"))], cubic_relation()];
    let mut cols = Vec::new();
    for r in &rels {
        let rl = r[0].1.len();
        if rl > n {
            continue;
        }
        for ul in 0..=n - rl {
            let vl = n - rl - ul;
            for ub in 0..1usize << ul {
                for vb in 0..1usize << vl {
                    let mut col = BTreeMap::new();
                    for (c, w) in r {
                        let mut full = word(ub, ul);
                        full.extend(w.iter().copied());
                        full.extend(word(vb, vl));
                        *col.entry(index(&full)).or_insert_with(Q::zero) += c;
                    }
                    cols.push(crate::linalg::to_sparse(col));
                }
            }
        }
    }
    (1usize << n) - crate::linalg::rank(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: u8, b: u32, c: u32) -> Monomial {
        Monomial::new(a, b, c)
    }

    #[test]
    fn brute_force_matches_pbw() {
        for d in 0..=6 {
            assert_eq!(brute_force_dim(d), dim(d as i64));
        }
    }

    #[test]
    fn rewriting_examples() {
        assert!(normal_form(&parse_word("xx")).is_zero());
        assert_eq!(normal_form(&parse_word("yyx")), Element::from_terms([(q(1), m(1, 0, 2)), (q(1), m(1, 1, 0))]));
        assert_eq!(normal_form(&parse_word("yyyx")), Element::from_terms([(q(1), m(0, 2, 0)), (q(1), m(0, 1, 2))]));
        assert_eq!(normal_form(&parse_word("xyxyy")), Element::monomial(m(1, 1, 2)));
    }

    #[test]
    fn product_examples() {
        let y4x = Element::monomial(m(0, 0, 4)).mul(&Element::x());
        let expect = Element::from_terms([(q(2), m(1, 2, 0)), (q(2), m(1, 1, 2)), (q(1), m(1, 0, 4))]);
        assert_eq!(y4x, expect);
        assert_eq!(Element::one().mul(&Element::monomial(m(1, 2, 3))), Element::monomial(m(1, 2, 3)));
    }

    #[test]
    fn closed_form_examples() {
        let e1 = commutation_closed_form(CommutationKind::EvenPastX, 1, 0).unwrap();
        assert_eq!(e1, Element::from_terms([(q(1), m(1, 1, 0)), (q(1), m(1, 0, 2))]));
        let e3 = commutation_closed_form(CommutationKind::EvenPastYx, 1, 1).unwrap();
        assert_eq!(e3, Element::from_terms([(q(1), m(0, 2, 0)), (q(1), m(0, 1, 2))]));
        assert_eq!(commutation_closed_form(CommutationKind::EvenPastX, 0, 0).unwrap(), Element::x());
        assert!(commutation_closed_form(CommutationKind::OddPastYx, 1, 0).is_err());
    }

    #[test]
    fn group_action_examples() {
        let t = GroupPower(1);
        assert_eq!(t.apply(&Element::x()), -Element::x());
        let (_, y_inv) = GroupPower(-1).generator_images();
        assert_eq!(y_inv, -Element::y() - Element::x());
        let y2 = Element::monomial(m(0, 0, 2));
        let expect = Element::from_terms([(q(1), m(0, 0, 2)), (q(-1), m(0, 1, 0)), (q(-1), m(1, 0, 1))]);
        assert_eq!(t.apply(&y2), expect);
        assert_eq!(GroupPower(0).apply(&y2), y2);
    }

    #[test]
    fn graded_basis_order() {
        assert_eq!(graded_basis(0), vec![Monomial::ONE]);
        assert_eq!(graded_basis(2), vec![m(0, 0, 2), m(0, 1, 0), m(1, 0, 1)]);
    }

    #[test]
    fn rendering() {
        assert_eq!(m(1, 2, 3).to_string(), "x(yx)^2 y^3");
        assert_eq!(Monomial::ONE.to_string(), "1");
        let e = Element::from_terms([(qfrac(1, 2), m(0, 0, 1)), (q(-3), m(1, 1, 0))]);
        assert_eq!(e.render(), "1/2*y - 3*x(yx)");
    }
}
