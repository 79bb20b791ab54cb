//! Integer lattices in `ℤ^d` held in Hermite normal form, with quotient bases
//! and elementary divisors via Smith normal form.
//!
//! Vectors are sparse. Lattices arising from the orbit basis split into
//! blocks of coordinates; [`quotient_basis`] exploits that by running the Smith
//! reduction independently on each connected block.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse integer vector: strictly increasing indices, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SparseVec {
    entries: Vec<(usize, BigInt)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, BigInt::one())],
        }
    }

    /// Collects `(index, value)` pairs, summing duplicates and dropping zeros.
    pub fn from_entries(it: impl IntoIterator<Item = (usize, BigInt)>) -> Self {
        let mut map: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (i, v) in it {
            *map.entry(i).or_default() += v;
        }
        SparseVec {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[BigInt]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn get(&self, i: usize) -> Option<&BigInt> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &BigInt)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn to_dense(&self, dim: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn neg(&self) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * k)).collect(),
        }
    }

    /// `a·self + b·other`
    pub fn combine(&self, a: &BigInt, other: &SparseVec, b: &BigInt) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.entries, &other.entries);
        while i < x.len() || j < y.len() {
            let (idx, val) = match (x.get(i), y.get(j)) {
                (Some((ix, vx)), Some((iy, _))) if ix < iy => {
                    i += 1;
                    (*ix, a * vx)
                }
                (Some((ix, _)), Some((iy, vy))) if iy < ix => {
                    j += 1;
                    (*iy, b * vy)
                }
                (Some((ix, vx)), Some((_, vy))) => {
                    i += 1;
                    j += 1;
                    (*ix, a * vx + b * vy)
                }
                (Some((ix, vx)), None) => {
                    i += 1;
                    (*ix, a * vx)
                }
                (None, Some((iy, vy))) => {
                    j += 1;
                    (*iy, b * vy)
                }
                (None, None) => unreachable!(),
            };
            if !val.is_zero() {
                out.push((idx, val));
            }
        }
        SparseVec { entries: out }
    }

    /// `self + k·other`
    pub fn add_scaled(&self, other: &SparseVec, k: &BigInt) -> SparseVec {
        if k.is_zero() {
            return self.clone();
        }
        self.combine(&BigInt::one(), other, k)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &-BigInt::one())
    }

    /// Keeps only the coordinates accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().filter(|(i, _)| keep(*i)).cloned().collect(),
        }
    }
}

#[derive(Debug, Clone)]
struct Row {
    data: SparseVec,
    tag: SparseVec,
}

/// Row echelon form under integer row operations, keyed by pivot column.
/// Each row optionally carries a tag recording its combination of inputs.
#[derive(Debug, Clone, Default)]
struct Echelon {
    rows: BTreeMap<usize, Row>,
}

impl Echelon {
    fn insert(&mut self, mut data: SparseVec, mut tag: SparseVec) {
        loop {
            let Some((c, vc)) = data.leading() else {
                return;
            };
            let vc = vc.clone();
            match self.rows.get_mut(&c) {
                None => {
                    if vc.is_negative() {
                        data = data.neg();
                        tag = tag.neg();
                    }
                    self.rows.insert(c, Row { data, tag });
                    return;
                }
                Some(row) => {
                    let rc = row.data.leading().expect("rows are nonzero").1.clone();
                    let (q, r) = vc.div_rem(&rc);
                    if r.is_zero() {
                        let mq = -q;
                        data = data.add_scaled(&row.data, &mq);
                        tag = tag.add_scaled(&row.tag, &mq);
                    } else {
                        let eg = rc.extended_gcd(&vc);
                        let (a, b) = (&rc / &eg.gcd, &vc / &eg.gcd);
                        let new_row = Row {
                            data: row.data.combine(&eg.x, &data, &eg.y),
                            tag: row.tag.combine(&eg.x, &tag, &eg.y),
                        };
                        data = data.combine(&a, &row.data, &-&b);
                        tag = tag.combine(&a, &row.tag, &-&b);
                        *row = new_row;
                    }
                }
            }
        }
    }

    /// Reduces entries above each pivot into `[0, pivot)`.
    fn normalize(&mut self) {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        for (k, &c) in pivots.iter().enumerate() {
            let pivot_row = self.rows[&c].clone();
            let pc = pivot_row.data.leading().unwrap().1.clone();
            for &c2 in &pivots[..k] {
                let row = self.rows.get_mut(&c2).unwrap();
                if let Some(e) = row.data.get(c) {
                    let q = e.div_floor(&pc);
                    if !q.is_zero() {
                        let mq = -q;
                        row.data = row.data.add_scaled(&pivot_row.data, &mq);
                        row.tag = row.tag.add_scaled(&pivot_row.tag, &mq);
                    }
                }
            }
        }
    }

    /// Reduces `v` along the pivots; returns the accumulated tag when `v`
    /// lies in the row span.
    fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut v = v.clone();
        let mut tag = SparseVec::zero();
        while let Some((c, vc)) = v.leading() {
            let row = self.rows.get(&c)?;
            let rc = row.data.leading().unwrap().1;
            let (q, r) = vc.div_rem(rc);
            if !r.is_zero() {
                return None;
            }
            v = v.add_scaled(&row.data, &-&q);
            tag = tag.add_scaled(&row.tag, &q);
        }
        Some(tag)
    }
}

/// A sublattice of `ℤ^dim`, stored as its Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    rows: Vec<SparseVec>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, rows: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Lattice {
            dim,
            rows: (0..dim).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_generators(dim: usize, gens: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut lat = Lattice::zero(dim);
        lat.extend(gens);
        lat
    }

    /// Adds generators and restores the normal form.
    pub fn extend(&mut self, gens: impl IntoIterator<Item = SparseVec>) {
        let mut ech = self.to_echelon();
        for g in gens {
            debug_assert!(g.iter().all(|(i, _)| i < self.dim));
            ech.insert(g, SparseVec::zero());
        }
        ech.normalize();
        self.rows = ech.rows.into_values().map(|r| r.data).collect();
    }

    fn to_echelon(&self) -> Echelon {
        Echelon {
            rows: self
                .rows
                .iter()
                .map(|r| {
                    (
                        r.leading().unwrap().0,
                        Row {
                            data: r.clone(),
                            tag: SparseVec::zero(),
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut out = self.clone();
        out.extend(other.rows.iter().cloned());
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Normal-form basis rows, ordered by pivot column.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading().unwrap().0).collect()
    }

    /// Coefficients of `v` with respect to [`Lattice::rows`], if `v` belongs.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<BigInt>> {
        let mut coords = vec![BigInt::zero(); self.rows.len()];
        let mut v = v.clone();
        let mut k = 0;
        while let Some((c, vc)) = v.leading() {
            while k < self.rows.len() && self.rows[k].leading().unwrap().0 < c {
                k += 1;
            }
            let row = self.rows.get(k)?;
            let (pc, pv) = row.leading().unwrap();
            if pc != c {
                return None;
            }
            let (q, r) = vc.div_rem(pv);
            if !r.is_zero() {
                return None;
            }
            v = v.add_scaled(row, &-&q);
            coords[k] = q;
        }
        Some(coords)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Reduces `v` modulo the lattice: entries at pivot columns end in `[0, pivot)`.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        for row in &self.rows {
            let (c, pc) = row.leading().unwrap();
            if let Some(e) = v.get(c) {
                let q = e.div_floor(pc);
                if !q.is_zero() {
                    v = v.add_scaled(row, &-q);
                }
            }
        }
        v
    }
}

/// Basis of a quotient `big / small`: lifts of a basis of the free part and
/// the nontrivial elementary divisors of its torsion part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBasis {
    pub lifts: Vec<SparseVec>,
    pub torsion_divisors: Vec<BigInt>,
}

impl QuotientBasis {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion_divisors.is_empty()
    }
}

/// Lifts and torsion of `big / small`. Fails unless `small ⊆ big`.
pub fn quotient_basis(big: &Lattice, small: &Lattice) -> Result<QuotientBasis> {
    if big.dim != small.dim {
        return Err(Error::SizeMismatch {
            left: big.dim,
            right: small.dim,
        });
    }
    let k = big.rank();
    let mut coeff_rows = Vec::with_capacity(small.rank());
    for r in small.rows() {
        let c = big.coordinates(r).ok_or(Error::NotASublattice)?;
        coeff_rows.push(SparseVec::from_dense(&c));
    }

    // connected blocks of big-basis indices
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for row in &coeff_rows {
        let mut it = row.iter().map(|(i, _)| i);
        if let Some(first) = it.next() {
            for j in it {
                let (a, b) = (find(&mut parent, first), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for j in 0..k {
        let root = find(&mut parent, j);
        blocks.entry(root).or_default().0.push(j);
    }
    for (ri, row) in coeff_rows.iter().enumerate() {
        let root = find(&mut parent, row.leading().expect("nonzero").0);
        blocks.get_mut(&root).unwrap().1.push(ri);
    }

    let mut lifts = Vec::new();
    let mut torsion = Vec::new();
    for (cols, rows) in blocks.values() {
        let local: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let matrix: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|&ri| {
                let mut dense = vec![BigInt::zero(); cols.len()];
                for (j, v) in coeff_rows[ri].iter() {
                    dense[local[&j]] = v.clone();
                }
                dense
            })
            .collect();
        let snf = smith_form(matrix, cols.len());
        torsion.extend(snf.diagonal.iter().filter(|d| !d.is_one()).cloned());
        for w in &snf.col_inverse[snf.diagonal.len()..] {
            let mut lift = SparseVec::zero();
            for (j, c) in w.iter().enumerate() {
                if !c.is_zero() {
                    lift = lift.add_scaled(&big.rows[cols[j]], c);
                }
            }
            lifts.push(lift);
        }
    }
    torsion.sort();

    let span = Lattice::from_generators(big.dim, lifts);
    let lifts = span.rows.iter().map(|r| small.reduce(r)).collect();
    Ok(QuotientBasis {
        lifts,
        torsion_divisors: torsion,
    })
}

/// Result of a Smith reduction `P·A·Q = diag(d_1, …, d_r, 0, …)`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero invariant factors, each dividing the next.
    pub diagonal: Vec<BigInt>,
    /// Rows of `Q⁻¹`; the row space of `A` is spanned by `d_i · Q⁻¹[i]`.
    pub col_inverse: Vec<Vec<BigInt>>,
}

/// Smith normal form of a dense `rows × ncols` matrix, tracking `Q⁻¹`.
pub fn smith_form(mut a: Vec<Vec<BigInt>>, ncols: usize) -> SmithForm {
    let m = a.len();
    let n = ncols;
    let mut qinv: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, &mut qinv, t, bj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    let pivot_row = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(t) {
                        *x -= &q * y;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for row in a.iter_mut().skip(t) {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                    let src = qinv[j].clone();
                    for (x, y) in qinv[t].iter_mut().zip(&src) {
                        *x += &q * y;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // move a smaller remainder onto the diagonal and retry
                let mut best = (t, t);
                for i in t..m {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                swap_cols(&mut a, &mut qinv, t, best.1);
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let src = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&src) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
        }
        diagonal.push(a[t][t].clone());
        t += 1;
    }
    SmithForm {
        diagonal,
        col_inverse: qinv,
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], qinv: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    qinv.swap(i, j);
}

/// Expresses vectors as integer combinations of a fixed generator list.
#[derive(Debug, Clone)]
pub struct Solver {
    echelon: Echelon,
    generators: usize,
}

impl Solver {
    pub fn new(gens: &[SparseVec]) -> Self {
        let mut echelon = Echelon::default();
        for (i, g) in gens.iter().enumerate() {
            echelon.insert(g.clone(), SparseVec::unit(i));
        }
        Solver {
            echelon,
            generators: gens.len(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// Some coefficient vector `c` with `Σ c_i·gen_i = v`, if one exists.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        self.echelon.solve(v)
    }
}
