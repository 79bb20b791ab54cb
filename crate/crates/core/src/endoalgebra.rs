//! The endomorphism algebra `End_{Sym(n)}(ℤΩ)` in its orbit-sum basis.
//!
//! Basis elements are indexed by `Sym(n)`-orbits on `Ω×Ω`. An orbit is named
//! by the orbit indices `(alpha, beta)` of its two components and the matrix
//! `M[a][b] = |x⁻¹(a) ∩ y⁻¹(b)|` of a representative pair `(x, y)`. The
//! basis element of a class acts by `a(x) = Σ_{(y,x) ∈ class} y`, so a class
//! maps `ℤ𝒪_beta` into `ℤ𝒪_alpha` and the first component is the output.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SparseVec;
use crate::partitions::{margin_matrices, Partition};
use crate::youngset::{enumerate_points, Tabloid, YoungSet, DEFAULT_MAX_POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitPairClass {
    pub alpha: usize,
    pub beta: usize,
    pub matrix: Vec<Vec<u32>>,
}

impl OrbitPairClass {
    /// The class of the transposed pairs.
    pub fn transpose(&self) -> OrbitPairClass {
        let cols = self.matrix.first().map_or(0, Vec::len);
        let matrix = (0..cols).map(|b| self.matrix.iter().map(|row| row[b]).collect()).collect();
        OrbitPairClass {
            alpha: self.beta,
            beta: self.alpha,
            matrix,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.alpha == self.beta
            && self
                .matrix
                .iter()
                .enumerate()
                .all(|(a, row)| row.iter().enumerate().all(|(b, &v)| a == b || v == 0))
    }

    /// A pair in the class: labels are dealt out cell by cell in row-major
    /// order, each cell taking the next `M[a][b]` unused labels.
    pub fn canonical_representative(&self) -> (Tabloid, Tabloid) {
        let n: u32 = self.matrix.iter().flatten().sum();
        let mut x = vec![0u8; n as usize];
        let mut y = vec![0u8; n as usize];
        let mut next = 0usize;
        for (a, row) in self.matrix.iter().enumerate() {
            for (b, &count) in row.iter().enumerate() {
                for _ in 0..count {
                    x[next] = a as u8;
                    y[next] = b as u8;
                    next += 1;
                }
            }
        }
        (Tabloid { rows: x }, Tabloid { rows: y })
    }
}

/// Intersection matrix of the fibres of `x` (rows) and `y` (columns).
pub fn pair_matrix(x: &Tabloid, y: &Tabloid) -> Vec<Vec<u32>> {
    let rows = x.rows.iter().map(|&r| r as usize + 1).max().unwrap_or(0);
    let cols = y.rows.iter().map(|&r| r as usize + 1).max().unwrap_or(0);
    let mut m = vec![vec![0u32; cols]; rows];
    for (&a, &b) in x.rows.iter().zip(&y.rows) {
        m[a as usize][b as usize] += 1;
    }
    m
}

/// The class of `(x, y)` with `x ∈ 𝒪_alpha` and `y ∈ 𝒪_beta`.
pub fn classify_pair(alpha: usize, x: &Tabloid, beta: usize, y: &Tabloid) -> OrbitPairClass {
    OrbitPairClass {
        alpha,
        beta,
        matrix: pair_matrix(x, y),
    }
}

/// All classes of `Ω×Ω` in canonical order.
pub fn orbit_pair_classes(omega: &YoungSet) -> Result<Vec<OrbitPairClass>> {
    let types = omega.orbit_types();
    let mut classes = Vec::new();
    for (alpha, ta) in types.iter().enumerate() {
        for (beta, tb) in types.iter().enumerate() {
            for matrix in margin_matrices(ta, tb)? {
                classes.push(OrbitPairClass { alpha, beta, matrix });
            }
        }
    }
    classes.sort();
    Ok(classes)
}

/// Number of classes without materialising them.
pub fn orbit_pair_class_count(omega: &YoungSet) -> Result<usize> {
    let types = omega.orbit_types();
    let mut memo: HashMap<(&Partition, &Partition), usize> = HashMap::new();
    let mut total = 0;
    for ta in types {
        for tb in types {
            let c = match memo.get(&(ta, tb)) {
                Some(&c) => c,
                None => {
                    let c = margin_matrices(ta, tb)?.len();
                    memo.insert((ta, tb), c);
                    c
                }
            };
            total += c;
        }
    }
    Ok(total)
}

/// An element of the algebra: integer coefficients on class indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement(pub SparseVec);

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        AlgebraElement(SparseVec::unit(i))
    }

    pub fn coeffs(&self) -> &SparseVec {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(self.0.add_scaled(&other.0, &BigInt::one()))
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(self.0.sub(&other.0))
    }

    pub fn scale(&self, k: &BigInt) -> AlgebraElement {
        AlgebraElement(self.0.scale(k))
    }
}

impl From<SparseVec> for AlgebraElement {
    fn from(v: SparseVec) -> Self {
        AlgebraElement(v)
    }
}

/// `(a, b, [(c, coefficient)])`: the product `a_a · a_b` in sparse form.
pub type ProductRow = (usize, usize, Vec<(usize, u64)>);

/// Structure constants: `products[(A, B)]` lists `(C, n^C_{A,B})` with `C`
/// increasing; pairs with `A.beta ≠ B.alpha` are absent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StructureTable {
    products: HashMap<(usize, usize), Vec<(usize, u64)>>,
}

impl StructureTable {
    pub fn get(&self, a: usize, b: usize) -> &[(usize, u64)] {
        self.products.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    /// Entries sorted by `(A, B)`.
    pub fn entries(&self) -> Vec<ProductRow> {
        let mut out: Vec<_> = self
            .products
            .iter()
            .map(|(&(a, b), v)| (a, b, v.clone()))
            .collect();
        out.sort();
        out
    }

    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }
}

/// Looks up class indices from `(alpha, beta, matrix)`.
#[derive(Debug, Clone)]
struct ClassIndex {
    blocks: HashMap<(usize, usize), Range<usize>>,
    by_class: HashMap<OrbitPairClass, usize>,
}

impl ClassIndex {
    fn new(classes: &[OrbitPairClass]) -> Self {
        let mut blocks: HashMap<(usize, usize), Range<usize>> = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            blocks
                .entry((c.alpha, c.beta))
                .and_modify(|r| r.end = i + 1)
                .or_insert(i..i + 1);
        }
        let by_class = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        ClassIndex { blocks, by_class }
    }
}

#[derive(Debug, Clone)]
pub struct EndoAlgebra {
    omega: YoungSet,
    classes: Vec<OrbitPairClass>,
    index: ClassIndex,
    star_of: Vec<usize>,
    table: StructureTable,
}

impl EndoAlgebra {
    /// Builds the algebra with the default point guard.
    pub fn new(omega: &YoungSet) -> Result<Self> {
        Self::with_limit(omega, DEFAULT_MAX_POINTS)
    }

    pub fn with_limit(omega: &YoungSet, max_points: u128) -> Result<Self> {
        Self::with_representatives(omega, max_points, OrbitPairClass::canonical_representative)
    }

    /// Builds the table from caller-chosen representatives, one per class.
    pub fn with_representatives<F>(omega: &YoungSet, max_points: u128, rep: F) -> Result<Self>
    where
        F: Fn(&OrbitPairClass) -> (Tabloid, Tabloid) + Sync,
    {
        omega.check_point_limit(max_points)?;
        let classes = orbit_pair_classes(omega)?;
        let index = ClassIndex::new(&classes);
        let table = build_table(omega, &classes, &index, rep)?;
        Ok(Self::assemble(omega.clone(), classes, index, table))
    }

    fn assemble(
        omega: YoungSet,
        classes: Vec<OrbitPairClass>,
        index: ClassIndex,
        table: StructureTable,
    ) -> Self {
        let star_of = classes.iter().map(|c| index.by_class[&c.transpose()]).collect();
        EndoAlgebra {
            omega,
            classes,
            index,
            star_of,
            table,
        }
    }

    pub fn omega(&self) -> &YoungSet {
        &self.omega
    }

    pub fn classes(&self) -> &[OrbitPairClass] {
        &self.classes
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn class_index(&self, class: &OrbitPairClass) -> Option<usize> {
        self.index.by_class.get(class).copied()
    }

    /// Indices of the classes with the given orbit pair.
    pub fn block(&self, alpha: usize, beta: usize) -> Range<usize> {
        self.index.blocks.get(&(alpha, beta)).cloned().unwrap_or(0..0)
    }

    pub fn multiply_basis(&self, a: usize, b: usize) -> AlgebraElement {
        AlgebraElement(SparseVec::from_entries(
            self.table.get(a, b).iter().map(|&(c, k)| (c, BigInt::from(k))),
        ))
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (i, ci) in a.0.iter() {
            let inner = self.classes[i].beta;
            for (j, cj) in b.0.iter() {
                if self.classes[j].alpha != inner {
                    continue;
                }
                let cij = ci * cj;
                for &(k, n) in self.table.get(i, j) {
                    *acc.entry(k).or_default() += &cij * BigInt::from(n);
                }
            }
        }
        AlgebraElement(SparseVec::from_entries(acc))
    }

    pub fn star(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(SparseVec::from_entries(
            a.0.iter().map(|(i, v)| (self.star_of[i], v.clone())),
        ))
    }

    pub fn star_index(&self, i: usize) -> usize {
        self.star_of[i]
    }

    /// Index of the diagonal class of orbit `alpha`.
    pub fn xi_index(&self, alpha: usize) -> usize {
        let ty = &self.omega.orbit_types()[alpha];
        let k = ty.len();
        let matrix = (0..k)
            .map(|a| (0..k).map(|b| if a == b { ty.part(a) } else { 0 }).collect())
            .collect();
        self.index.by_class[&OrbitPairClass {
            alpha,
            beta: alpha,
            matrix,
        }]
    }

    /// The projection onto `ℤ𝒪_alpha`.
    pub fn xi(&self, alpha: usize) -> AlgebraElement {
        AlgebraElement::basis(self.xi_index(alpha))
    }

    /// `ξ_{α(λ)}` for the first orbit `α(λ)` of type `λ`; zero when `λ ∉ ζ(Ω)`.
    pub fn xi_lambda(&self, lambda: &Partition) -> AlgebraElement {
        match self.omega.first_orbit_of(lambda) {
            Some(alpha) => self.xi(alpha),
            None => AlgebraElement::zero(),
        }
    }

    /// Orbit indices matched to the orbits of `sub`, taking for each orbit
    /// the first unused orbit of `Ω` of the same type.
    pub fn orbits_of(&self, sub: &YoungSet) -> Result<Vec<usize>> {
        let mut used = vec![false; self.omega.orbit_count()];
        let mut out = Vec::with_capacity(sub.orbit_count());
        for ty in sub.orbit_types() {
            let pos = self
                .omega
                .orbit_types()
                .iter()
                .enumerate()
                .position(|(i, t)| t == ty && !used[i])
                .ok_or_else(|| Error::OrbitNotInOmega(ty.clone()))?;
            used[pos] = true;
            out.push(pos);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `e_Γ = Σ_{α ∈ Γ} ξ_α`.
    pub fn e(&self, sub: &YoungSet) -> Result<AlgebraElement> {
        Ok(self.sum_of_xis(&self.orbits_of(sub)?))
    }

    pub fn sum_of_xis(&self, orbits: &[usize]) -> AlgebraElement {
        AlgebraElement(SparseVec::from_entries(
            orbits.iter().map(|&a| (self.xi_index(a), BigInt::one())),
        ))
    }

    pub fn identity(&self) -> AlgebraElement {
        self.sum_of_xis(&(0..self.omega.orbit_count()).collect::<Vec<_>>())
    }

    /// Points of `Ω` as `(orbit, tabloid)`, orbit by orbit.
    pub fn points(&self) -> Result<Vec<(usize, Tabloid)>> {
        let mut out = Vec::new();
        for (alpha, ty) in self.omega.orbit_types().iter().enumerate() {
            for t in enumerate_points(ty, self.omega.n())? {
                out.push((alpha, t));
            }
        }
        Ok(out)
    }

    /// Matrix of `a` on `ℤΩ` in the basis [`EndoAlgebra::points`]; column `x`
    /// holds the image of `x`.
    pub fn action_matrix(&self, a: &AlgebraElement) -> Result<Vec<Vec<BigInt>>> {
        let points = self.points()?;
        let mut m = vec![vec![BigInt::zero(); points.len()]; points.len()];
        for (row, (ay, y)) in points.iter().enumerate() {
            for (col, (ax, x)) in points.iter().enumerate() {
                let class = classify_pair(*ay, y, *ax, x);
                if let Some(v) = self.class_index(&class).and_then(|i| a.0.get(i)) {
                    m[row][col] = v.clone();
                }
            }
        }
        Ok(m)
    }

    pub fn dump(&self) -> AlgebraDump {
        AlgebraDump {
            n: self.omega.n(),
            orbit_types: self.omega.orbit_types().to_vec(),
            classes: self.classes.clone(),
            products: self.table.entries(),
        }
    }

    /// Rebuilds an algebra from a dump, checking its class list.
    pub fn from_dump(dump: AlgebraDump) -> Result<Self> {
        let omega = YoungSet::new(dump.n, dump.orbit_types)?;
        let classes = orbit_pair_classes(&omega)?;
        if classes != dump.classes {
            return Err(Error::InvalidArgument("dump class list does not match its orbit types".into()));
        }
        let dim = classes.len();
        let mut products = HashMap::new();
        for (a, b, list) in dump.products {
            if a >= dim || b >= dim || list.iter().any(|&(c, _)| c >= dim) {
                return Err(Error::InvalidArgument("dump product index out of range".into()));
            }
            products.insert((a, b), list);
        }
        let index = ClassIndex::new(&classes);
        Ok(Self::assemble(omega, classes, index, StructureTable { products }))
    }
}

/// Serialised form of an algebra and its structure constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDump {
    pub n: usize,
    pub orbit_types: Vec<Partition>,
    pub classes: Vec<OrbitPairClass>,
    pub products: Vec<ProductRow>,
}

fn build_table<F>(
    omega: &YoungSet,
    classes: &[OrbitPairClass],
    index: &ClassIndex,
    rep: F,
) -> Result<StructureTable>
where
    F: Fn(&OrbitPairClass) -> (Tabloid, Tabloid) + Sync,
{
    let points: Vec<Vec<Tabloid>> = omega
        .orbit_types()
        .iter()
        .map(|t| enumerate_points(t, omega.n()))
        .collect::<Result<_>>()?;

    // For each class C with representative (y, x), count the z with
    // (y, z) ∈ A and (z, x) ∈ B.
    let per_class: Vec<Vec<((usize, usize), u64)>> = classes
        .par_iter()
        .map(|c| {
            let (y, x) = rep(c);
            let mut counts: HashMap<(usize, usize), u64> = HashMap::new();
            for (gamma, orbit) in points.iter().enumerate() {
                for z in orbit {
                    let a = index.by_class[&classify_pair(c.alpha, &y, gamma, z)];
                    let b = index.by_class[&classify_pair(gamma, z, c.beta, &x)];
                    *counts.entry((a, b)).or_default() += 1;
                }
            }
            let mut v: Vec<_> = counts.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect();

    let mut products: HashMap<(usize, usize), Vec<(usize, u64)>> = HashMap::new();
    for (c, list) in per_class.into_iter().enumerate() {
        for (ab, k) in list {
            products.entry(ab).or_default().push((c, k));
        }
    }
    Ok(StructureTable { products })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ys(s: &str) -> YoungSet {
        s.parse().unwrap()
    }

    fn tab(rows: &[u8]) -> Tabloid {
        Tabloid { rows: rows.to_vec() }
    }

    #[test]
    fn classify_examples() {
        let x = tab(&[0, 0, 1]);
        assert_eq!(pair_matrix(&x, &x), vec![vec![2, 0], vec![0, 1]]);
        let y = tab(&[0, 1, 0]);
        assert_eq!(pair_matrix(&x, &y), vec![vec![1, 1], vec![1, 0]]);
        let row = tab(&[0, 0, 0]);
        assert_eq!(pair_matrix(&x, &row), vec![vec![2], vec![1]]);
    }

    #[test]
    fn class_counts() {
        assert_eq!(orbit_pair_classes(&ys("1,1; 2")).unwrap().len(), 5);
        assert_eq!(orbit_pair_classes(&ys("2,1; 3")).unwrap().len(), 5);
        assert_eq!(orbit_pair_classes(&ys("4")).unwrap().len(), 1);
        assert_eq!(orbit_pair_class_count(&ys("2,1 x2; 3")).unwrap(), 4 * 2 + 4 + 1);
    }

    #[test]
    fn sym2_group_algebra() {
        let alg = EndoAlgebra::new(&ys("1,1")).unwrap();
        assert_eq!(alg.dim(), 2);
        let d = alg.xi_index(0);
        let f = 1 - d;
        assert_eq!(alg.multiply_basis(f, f), AlgebraElement::basis(d));
        assert_eq!(alg.star(&AlgebraElement::basis(f)), AlgebraElement::basis(f));
    }

    #[test]
    fn idempotents() {
        let alg = EndoAlgebra::new(&ys("1,1; 2")).unwrap();
        let one = alg.identity();
        for i in 0..alg.dim() {
            let b = AlgebraElement::basis(i);
            assert_eq!(alg.multiply(&one, &b), b);
            assert_eq!(alg.multiply(&b, &one), b);
            let out = alg.classes()[i].alpha;
            for g in 0..2 {
                let lhs = alg.multiply(&alg.xi(g), &b);
                assert_eq!(lhs, if g == out { b.clone() } else { AlgebraElement::zero() });
            }
        }
        let e = alg.e(&ys("1,1")).unwrap();
        assert_eq!(e, alg.xi(0));
        assert!(alg.xi_lambda(&"2,1".parse().unwrap()).is_zero());
        assert!(matches!(alg.e(&ys("2 x2")), Err(Error::OrbitNotInOmega(_))));
    }

    #[test]
    fn representative_is_in_class() {
        for c in orbit_pair_classes(&ys("2,1; 3; 1,1,1")).unwrap() {
            let (x, y) = c.canonical_representative();
            assert_eq!(pair_matrix(&x, &y), c.matrix);
        }
    }
}
