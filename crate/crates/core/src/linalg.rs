//! Exact sparse linear algebra over `Q`: incremental echelon forms, rank,
//! kernels, membership and solving.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use serde::Serialize;

use crate::algebra::{render_q, Q};

/// Sparse vector: strictly increasing indices, nonzero entries.
pub type SparseVec = Vec<(usize, Q)>;

pub fn to_sparse(m: BTreeMap<usize, Q>) -> SparseVec {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn sparse_add_scaled(acc: &mut BTreeMap<usize, Q>, f: &Q, v: &[(usize, Q)]) {
    for (j, a) in v {
        let e = acc.entry(*j).or_insert_with(Q::zero);
        *e += f * a;
        if e.is_zero() {
            acc.remove(j);
        }
    }
}

struct Row {
    v: SparseVec,
    combo: SparseVec,
}

/// Incrementally built echelon basis of the span of pushed generators.
///
/// Every stored row has pivot coefficient 1 and remembers how it is expressed
/// through the generators, so relations and preimages come for free.
#[derive(Default)]
pub struct Span {
    rows: Vec<Row>,
    pivot_of: HashMap<usize, usize>,
    n_gens: usize,
    relations: Vec<SparseVec>,
    track: bool,
}

impl Span {
    pub fn new() -> Self {
        Span { track: true, ..Default::default() }
    }

    /// Rank-only variant: no generator bookkeeping.
    pub fn untracked() -> Self {
        Span { track: false, ..Default::default() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> usize {
        self.n_gens
    }

    /// Reduces `v` against the rows; returns the accumulated row multipliers.
    fn reduce(&self, v: &mut BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut used = BTreeMap::new();
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.pivot_of.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, f)) = next else { break };
            let r = self.pivot_of[&k];
            sparse_add_scaled(v, &-f.clone(), &self.rows[r].v);
            *used.entry(r).or_insert_with(Q::zero) += f;
            cursor = k + 1;
        }
        used
    }

    fn combine(&self, used: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (r, f) in used {
            sparse_add_scaled(&mut out, f, &self.rows[*r].combo);
        }
        out
    }

    /// Adds a generator; returns `true` when it enlarges the span.
    pub fn push(&mut self, v: &[(usize, Q)]) -> bool {
        let idx = self.n_gens;
        self.n_gens += 1;
        let mut w: BTreeMap<usize, Q> = v.iter().cloned().collect();
        let used = self.reduce(&mut w);
        let combo = if self.track {
            let mut c = self.combine(&used);
            for e in c.values_mut() {
                *e = -e.clone();
            }
            sparse_add_scaled(&mut c, &Q::one(), &[(idx, Q::one())]);
            c
        } else {
            BTreeMap::new()
        };
        if w.is_empty() {
            if self.track {
                self.relations.push(to_sparse(combo));
            }
            return false;
        }
        let (&p, pv) = w.iter().next().expect("nonempty");
        let inv = Q::one() / pv.clone();
        let v: SparseVec = w.into_iter().map(|(j, a)| (j, a * &inv)).collect();
        let combo: SparseVec = combo.into_iter().map(|(j, a)| (j, a * &inv)).collect();
        self.pivot_of.insert(p, self.rows.len());
        self.rows.push(Row { v, combo });
        true
    }

    pub fn contains(&self, v: &[(usize, Q)]) -> bool {
        let mut w: BTreeMap<usize, Q> = v.iter().cloned().collect();
        self.reduce(&mut w);
        w.is_empty()
    }

    /// Coefficients `λ` with `v = Σ λ_j gen_j`, if `v` lies in the span.
    pub fn express(&self, v: &[(usize, Q)]) -> Option<SparseVec> {
        assert!(self.track, "express needs a tracked span");
        let mut w: BTreeMap<usize, Q> = v.iter().cloned().collect();
        let used = self.reduce(&mut w);
        w.is_empty().then(|| to_sparse(self.combine(&used)))
    }

    /// Linear relations among the pushed generators (a basis of the kernel).
    pub fn relations(&self) -> &[SparseVec] {
        assert!(self.track, "relations need a tracked span");
        &self.relations
    }
}

pub fn rank(cols: &[SparseVec]) -> usize {
    let mut s = Span::untracked();
    for c in cols {
        s.push(c);
    }
    s.rank()
}

/// Kernel basis of the map whose `j`-th column is `cols[j]`.
pub fn kernel(cols: &[SparseVec]) -> Vec<SparseVec> {
    let mut s = Span::new();
    for c in cols {
        s.push(c);
    }
    s.relations().to_vec()
}

/// Some `x` with `Σ x_j cols[j] = target`.
pub fn solve(cols: &[SparseVec], target: &[(usize, Q)]) -> Option<SparseVec> {
    let mut s = Span::new();
    for c in cols {
        s.push(c);
    }
    s.express(target)
}

/// Applies the map with the given columns to a coordinate vector.
pub fn apply(cols: &[SparseVec], x: &[(usize, Q)]) -> SparseVec {
    let mut acc = BTreeMap::new();
    for (j, a) in x {
        sparse_add_scaled(&mut acc, a, &cols[*j]);
    }
    to_sparse(acc)
}

/// Exact matrix of a map restricted to one cell, with labelled bases.
#[derive(Clone, Debug, Serialize)]
pub struct GradedMatrix {
    pub map: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    #[serde(skip)]
    pub cols: Vec<SparseVec>,
}

impl GradedMatrix {
    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Q {
        self.cols[j].iter().find(|(r, _)| *r == i).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn rank(&self) -> usize {
        rank(&self.cols)
    }

    pub fn kernel(&self) -> Vec<SparseVec> {
        kernel(&self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Dense rendering, one row per line.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for i in 0..self.nrows() {
            let row: Vec<String> = (0..self.ncols()).map(|j| render_q(&self.entry(i, j))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn v(e: &[(usize, i64)]) -> SparseVec {
        e.iter().map(|(i, c)| (*i, q(*c))).collect()
    }

    #[test]
    fn rank_kernel_solve() {
        let cols = vec![v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[(2, 1)])];
        assert_eq!(rank(&cols), 2);
        let k = kernel(&cols);
        assert_eq!(k.len(), 1);
        assert!(apply(&cols, &k[0]).is_empty());
        let x = solve(&cols, &v(&[(0, 3), (1, 6), (2, -1)])).unwrap();
        assert_eq!(apply(&cols, &x), v(&[(0, 3), (1, 6), (2, -1)]));
        assert!(solve(&cols, &v(&[(1, 1)])).is_none());
    }
}
