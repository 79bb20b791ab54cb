//! Integral ideal chains of the orbit-basis algebra and cell data for its
//! truncations `eSe`.
//!
//! The total order used on `ζ(Ω)` is the descending lexicographic order of
//! [`crate::partitions::compare_refined`].

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::endoalgebra::{AlgebraElement, EndoAlgebra};
use crate::error::{Error, Result};
use crate::lattice::{quotient_basis, Lattice, Solver, SparseVec};
use crate::partitions::{dominates, kostka, partitions_of, Partition};
use crate::pdominance::{upward_closure, Dominance};
use crate::youngset::{YoungSet, DEFAULT_MAX_POINTS};

fn units(indices: impl IntoIterator<Item = usize>) -> Vec<SparseVec> {
    indices.into_iter().map(SparseVec::unit).collect()
}

/// Basis of the left ideal `Sξ_α`: classes ending in orbit `alpha`.
fn left_basis(alg: &EndoAlgebra, alpha: usize) -> Vec<usize> {
    (0..alg.omega().orbit_count()).flat_map(|g| alg.block(g, alpha)).collect()
}

/// Basis of the right ideal `ξ_αS`: classes starting in orbit `alpha`.
fn right_basis(alg: &EndoAlgebra, alpha: usize) -> Vec<usize> {
    (0..alg.omega().orbit_count()).flat_map(|g| alg.block(alpha, g)).collect()
}

/// Spanning set of `Sξ_αS`.
pub fn two_sided_generators(alg: &EndoAlgebra, alpha: usize) -> Vec<SparseVec> {
    let right = right_basis(alg, alpha);
    let mut seen = HashSet::new();
    for a in left_basis(alg, alpha) {
        for &b in &right {
            let v = alg.multiply_basis(a, b).0;
            if !v.is_zero() {
                seen.insert(v);
            }
        }
    }
    let mut gens: Vec<SparseVec> = seen.into_iter().collect();
    gens.sort();
    gens
}

/// `S(σ) = Σ_{λ ∈ σ} Sξ_λS`; partitions outside `ζ(Ω)` contribute nothing.
pub fn ideal_lattice(alg: &EndoAlgebra, sigma: &[Partition]) -> Lattice {
    let mut lat = Lattice::zero(alg.dim());
    for lambda in sigma {
        if let Some(alpha) = alg.omega().first_orbit_of(lambda) {
            lat.extend(two_sided_generators(alg, alpha));
        }
    }
    lat
}

/// `S(≥λ)` and `S(>λ)` for every `λ ∈ ζ(Ω)`, largest `λ` first.
#[derive(Debug, Clone)]
pub struct IdealChain {
    order: Vec<Partition>,
    above: Vec<Lattice>,
    at_or_above: Vec<Lattice>,
}

impl IdealChain {
    pub fn new(alg: &EndoAlgebra) -> Self {
        let order: Vec<Partition> = alg.omega().support().descending().cloned().collect();
        let mut above = Vec::with_capacity(order.len());
        let mut at_or_above = Vec::with_capacity(order.len());
        let mut current = Lattice::zero(alg.dim());
        for lambda in &order {
            above.push(current.clone());
            let alpha = alg.omega().first_orbit_of(lambda).expect("in support");
            current.extend(two_sided_generators(alg, alpha));
            at_or_above.push(current.clone());
        }
        IdealChain {
            order,
            above,
            at_or_above,
        }
    }

    pub fn order(&self) -> &[Partition] {
        &self.order
    }

    fn position(&self, lambda: &Partition) -> Result<usize> {
        self.order
            .iter()
            .position(|l| l == lambda)
            .ok_or_else(|| Error::NotInSupport(lambda.clone()))
    }

    /// `S(>λ)`.
    pub fn strictly_above(&self, lambda: &Partition) -> Result<&Lattice> {
        Ok(&self.above[self.position(lambda)?])
    }

    /// `S(≥λ)`.
    pub fn at_or_above(&self, lambda: &Partition) -> Result<&Lattice> {
        Ok(&self.at_or_above[self.position(lambda)?])
    }
}

fn divisor_strings(divisors: &[BigInt]) -> Vec<String> {
    divisors.iter().map(BigInt::to_string).collect()
}

fn ensure_cosaturated(n: usize, sigma: &[Partition]) -> Result<()> {
    for lambda in sigma {
        for mu in partitions_of(n) {
            if dominates(&mu, lambda)? && !sigma.contains(&mu) {
                return Err(Error::NotCosaturated(mu));
            }
        }
    }
    Ok(())
}

/// Elementary divisors of `S / S(σ)` for a cosaturated `σ`.
pub fn purity_divisors(alg: &EndoAlgebra, sigma: &[Partition]) -> Result<Vec<BigInt>> {
    ensure_cosaturated(alg.omega().n(), sigma)?;
    let ideal = ideal_lattice(alg, sigma);
    Ok(quotient_basis(&Lattice::full(alg.dim()), &ideal)?.torsion_divisors)
}

/// Whether `S(σ)` is a pure sublattice of `S`.
pub fn purity_check(alg: &EndoAlgebra, sigma: &[Partition]) -> Result<bool> {
    Ok(purity_divisors(alg, sigma)?.is_empty())
}

/// Elementary divisors of `S(≥λ)/S(>λ)` for every `λ ∈ ζ(Ω)`.
pub fn section_torsion(chain: &IdealChain) -> Result<Vec<(Partition, Vec<BigInt>)>> {
    chain
        .order
        .par_iter()
        .enumerate()
        .map(|(k, lambda)| {
            let q = quotient_basis(&chain.at_or_above[k], &chain.above[k])?;
            Ok((lambda.clone(), q.torsion_divisors))
        })
        .collect()
}

/// `Γ` as the leading orbits of its cosaturated closure, with the classes between them.
pub struct Truncation {
    pub algebra: EndoAlgebra,
    pub chain: IdealChain,
    keep: HashSet<usize>,
}

impl Truncation {
    pub fn new(gamma: &YoungSet) -> Result<Self> {
        let algebra = EndoAlgebra::new(&gamma.cosaturated_closure())?;
        let k = gamma.orbit_count();
        let keep = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .flat_map(|(a, b)| algebra.block(a, b))
            .collect();
        let chain = IdealChain::new(&algebra);
        Ok(Truncation { algebra, chain, keep })
    }

    /// `eLe` for a lattice `L` spanned by block-homogeneous vectors.
    pub fn restrict(&self, lat: &Lattice) -> Lattice {
        Lattice::from_generators(lat.dim(), lat.rows().iter().map(|r| r.filter(|i| self.keep.contains(&i))))
    }

    /// Elementary divisors of `eS(≥λ)e / eS(>λ)e` for every `λ` in the chain.
    pub fn section_torsion(&self) -> Result<Vec<(Partition, Vec<BigInt>)>> {
        self.chain
            .order
            .par_iter()
            .enumerate()
            .map(|(k, lambda)| {
                let big = self.restrict(&self.chain.at_or_above[k]);
                let small = self.restrict(&self.chain.above[k]);
                Ok((lambda.clone(), quotient_basis(&big, &small)?.torsion_divisors))
            })
            .collect()
    }

    /// Elementary divisors of `eSe / eS(σ)e` for a cosaturated `σ`.
    pub fn purity_divisors(&self, sigma: &[Partition]) -> Result<Vec<BigInt>> {
        ensure_cosaturated(self.algebra.omega().n(), sigma)?;
        let ideal = self.restrict(&ideal_lattice(&self.algebra, sigma));
        let whole = Lattice::from_generators(self.algebra.dim(), units(self.keep.iter().copied()));
        Ok(quotient_basis(&whole, &ideal)?.torsion_divisors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub lambda: Partition,
    /// Rank of `V(λ)^λ`.
    pub left_rank: usize,
    /// Rank of `^λV(λ)`.
    pub right_rank: usize,
    /// Rank of `V(λ)`.
    pub section_rank: usize,
    /// Products of the two quotient bases span `S(≥λ)` modulo `S(>λ)`.
    pub surjective: bool,
    pub pass: bool,
}

fn first_missing(omega: &YoungSet) -> Option<Partition> {
    let support = omega.support();
    upward_closure(&support, &Dominance)
        .expect("sizes agree")
        .descending()
        .find(|m| !support.contains(m))
        .cloned()
}

/// Checks that multiplication `V(λ)^λ ⊗ ^λV(λ) → V(λ)` is an isomorphism.
pub fn factorization_check(alg: &EndoAlgebra, lambda: &Partition) -> Result<Factorization> {
    factorization_in_chain(alg, &IdealChain::new(alg), lambda)
}

pub fn factorization_in_chain(
    alg: &EndoAlgebra,
    chain: &IdealChain,
    lambda: &Partition,
) -> Result<Factorization> {
    if let Some(missing) = first_missing(alg.omega()) {
        return Err(Error::NotCosaturated(missing));
    }
    let above = chain.strictly_above(lambda)?;
    let full = chain.at_or_above(lambda)?;
    let alpha = alg.omega().first_orbit_of(lambda).expect("in support");

    let mut left = above.clone();
    left.extend(units(left_basis(alg, alpha)));
    let mut right = above.clone();
    right.extend(units(right_basis(alg, alpha)));
    let xs = quotient_basis(&left, above)?.lifts;
    let ys = quotient_basis(&right, above)?.lifts;

    let mut image = above.clone();
    image.extend(xs.iter().flat_map(|x| {
        ys.iter()
            .map(|y| alg.multiply(&AlgebraElement(x.clone()), &AlgebraElement(y.clone())).0)
    }));
    let surjective = &image == full;
    let section_rank = full.rank() - above.rank();
    Ok(Factorization {
        lambda: lambda.clone(),
        left_rank: xs.len(),
        right_rank: ys.len(),
        section_rank,
        surjective,
        pass: surjective && xs.len() * ys.len() == section_rank,
    })
}

/// The elements attached to one `λ ∈ Λ⁺`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub lambda: Partition,
    /// The lifts `d_{λ,t}`.
    pub d: Vec<AlgebraElement>,
    /// `c[t][u] = d_t · d_u*`.
    pub c: Vec<Vec<AlgebraElement>>,
}

impl Cell {
    pub fn size(&self) -> usize {
        self.d.len()
    }
}

#[derive(Debug, Clone)]
pub struct CellDatum {
    pub gamma: YoungSet,
    pub algebra: EndoAlgebra,
    /// Orbits of `Ω` making up `Γ` (a prefix of `Ω`).
    pub gamma_orbits: Vec<usize>,
    pub chain: IdealChain,
    /// `Λ⁺` in decreasing order, with its cells.
    pub cells: Vec<Cell>,
}

impl CellDatum {
    pub fn lambda_plus(&self) -> Vec<Partition> {
        self.cells.iter().map(|c| c.lambda.clone()).collect()
    }

    /// Orbit-basis indices of `eSe`.
    pub fn truncated_basis(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for &a in &self.gamma_orbits {
            for &b in &self.gamma_orbits {
                out.extend(self.algebra.block(a, b));
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn build_cell_datum(gamma: &YoungSet) -> Result<CellDatum> {
    build_cell_datum_with(gamma, DEFAULT_MAX_POINTS)
}

pub fn build_cell_datum_with(gamma: &YoungSet, max_points: u128) -> Result<CellDatum> {
    let omega = gamma.cosaturated_closure();
    let algebra = EndoAlgebra::with_limit(&omega, max_points)?;
    let gamma_orbits: Vec<usize> = (0..gamma.orbit_count()).collect();
    let chain = IdealChain::new(&algebra);
    let lambda_plus: Vec<Partition> = upward_closure(&gamma.support(), &Dominance)?
        .descending()
        .cloned()
        .collect();
    debug_assert_eq!(lambda_plus, chain.order());

    let cells = lambda_plus
        .par_iter()
        .map(|lambda| build_cell(&algebra, &chain, gamma, &gamma_orbits, lambda))
        .collect::<Result<Vec<_>>>()?;
    Ok(CellDatum {
        gamma: gamma.clone(),
        algebra,
        gamma_orbits,
        chain,
        cells,
    })
}

fn build_cell(
    alg: &EndoAlgebra,
    chain: &IdealChain,
    gamma: &YoungSet,
    gamma_orbits: &[usize],
    lambda: &Partition,
) -> Result<Cell> {
    let alpha = alg.omega().first_orbit_of(lambda).expect("Λ⁺ = ζ(Ω)");
    let above = chain.strictly_above(lambda)?;
    let e_s_xi: Vec<usize> = gamma_orbits.iter().flat_map(|&g| alg.block(g, alpha)).collect();
    let mut big = above.clone();
    big.extend(units(e_s_xi.iter().copied()));
    let q = quotient_basis(&big, above)?;
    if !q.is_torsion_free() {
        return Err(Error::Torsion {
            label: format!("eV({lambda})^λ"),
            divisors: divisor_strings(&q.torsion_divisors),
        });
    }
    let expected: u64 = gamma
        .orbit_types()
        .iter()
        .map(|t| kostka(lambda, t))
        .sum::<Result<u64>>()?;
    if q.lifts.len() as u64 != expected {
        return Err(Error::RankMismatch {
            label: format!("eV({lambda})^λ"),
            expected: expected as usize,
            found: q.lifts.len(),
        });
    }
    // e·d·ξ_λ differs from d by an element of S(>λ)
    let keep: HashSet<usize> = e_s_xi.into_iter().collect();
    let d: Vec<AlgebraElement> = q
        .lifts
        .iter()
        .map(|l| AlgebraElement(l.filter(|i| keep.contains(&i))))
        .collect();
    let d_star: Vec<AlgebraElement> = d.iter().map(|x| alg.star(x)).collect();
    let c = d
        .iter()
        .map(|dt| d_star.iter().map(|du| alg.multiply(dt, du)).collect())
        .collect();
    Ok(Cell {
        lambda: lambda.clone(),
        d,
        c,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub pass: bool,
    /// Counterexample when failing.
    pub detail: Option<String>,
}

impl AxiomResult {
    fn ok() -> Self {
        AxiomResult { pass: true, detail: None }
    }

    fn fail(detail: String) -> Self {
        AxiomResult {
            pass: false,
            detail: Some(detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionTorsion {
    pub lambda: Partition,
    pub divisors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Purity {
    /// `σ = {μ ∈ ζ(Ω) : μ ≥ λ}` for this `λ`.
    pub lambda: Partition,
    pub divisors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub c1: AxiomResult,
    pub c2: AxiomResult,
    pub c3: AxiomResult,
    pub cells: Vec<(Partition, usize)>,
    pub torsion: Vec<SectionTorsion>,
    pub purity: Vec<Purity>,
    pub factorization: Vec<Factorization>,
}

impl VerificationReport {
    pub fn axioms_pass(&self) -> bool {
        self.c1.pass && self.c2.pass && self.c3.pass
    }

    pub fn all_pass(&self) -> bool {
        self.axioms_pass()
            && self.torsion.iter().all(|t| t.divisors.is_empty())
            && self.purity.iter().all(|p| p.divisors.is_empty())
            && self.factorization.iter().all(|f| f.pass)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |r: &AxiomResult| if r.pass { "pass" } else { "FAIL" };
        let cells: Vec<String> = self.cells.iter().map(|(l, k)| format!("{l}:{k}")).collect();
        writeln!(
            f,
            "C1 {}, C2 {}, C3 {}, cells {}",
            word(&self.c1),
            word(&self.c2),
            word(&self.c3),
            cells.join(", ")
        )?;
        for (name, r) in [("C1", &self.c1), ("C2", &self.c2), ("C3", &self.c3)] {
            if let Some(d) = &r.detail {
                writeln!(f, "  {name}: {d}")?;
            }
        }
        let torsion: Vec<_> = self.torsion.iter().filter(|t| !t.divisors.is_empty()).collect();
        if torsion.is_empty() {
            writeln!(f, "sections torsion-free: {}/{}", self.torsion.len(), self.torsion.len())?;
        } else {
            for t in torsion {
                writeln!(f, "torsion at {}: {:?}", t.lambda, t.divisors)?;
            }
        }
        let pure = self.purity.iter().filter(|p| p.divisors.is_empty()).count();
        writeln!(f, "pure chain ideals: {pure}/{}", self.purity.len())?;
        for fac in &self.factorization {
            writeln!(
                f,
                "factorization {}: {} x {} = {} {}",
                fac.lambda,
                fac.left_rank,
                fac.right_rank,
                fac.section_rank,
                if fac.pass { "pass" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Checks the cell axioms and the lattice properties of the ambient chain.
pub fn verify_cell_datum(datum: &CellDatum) -> Result<VerificationReport> {
    let alg = &datum.algebra;
    let (c1, c2, c3) = (check_c1(datum), check_c2(datum), check_c3(datum));

    let torsion = section_torsion(&datum.chain)?
        .into_iter()
        .map(|(lambda, d)| SectionTorsion {
            lambda,
            divisors: divisor_strings(&d),
        })
        .collect();
    let full = Lattice::full(alg.dim());
    let purity = datum
        .chain
        .order
        .par_iter()
        .zip(&datum.chain.at_or_above)
        .map(|(lambda, ideal)| {
            let q = quotient_basis(&full, ideal)?;
            Ok(Purity {
                lambda: lambda.clone(),
                divisors: divisor_strings(&q.torsion_divisors),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let factorization = datum
        .chain
        .order
        .par_iter()
        .map(|lambda| factorization_in_chain(alg, &datum.chain, lambda))
        .collect::<Result<Vec<_>>>()?;

    Ok(VerificationReport {
        c1,
        c2,
        c3,
        cells: datum.cells.iter().map(|c| (c.lambda.clone(), c.size())).collect(),
        torsion,
        purity,
        factorization,
    })
}

fn check_c1(datum: &CellDatum) -> AxiomResult {
    let basis = datum.truncated_basis();
    let family: Vec<SparseVec> = datum
        .cells
        .iter()
        .flat_map(|cell| cell.c.iter().flatten().map(|x| x.0.clone()))
        .collect();
    if family.len() != basis.len() {
        return AxiomResult::fail(format!(
            "{} elements for a truncated algebra of rank {}",
            family.len(),
            basis.len()
        ));
    }
    let span = Lattice::from_generators(datum.algebra.dim(), family);
    let target = Lattice::from_generators(datum.algebra.dim(), units(basis));
    if span == target {
        AxiomResult::ok()
    } else {
        AxiomResult::fail(format!(
            "span has rank {} and is {}contained in eSe",
            span.rank(),
            if target.contains_lattice(&span) { "" } else { "not " }
        ))
    }
}

fn check_c2(datum: &CellDatum) -> AxiomResult {
    for cell in &datum.cells {
        for t in 0..cell.size() {
            for u in 0..cell.size() {
                if datum.algebra.star(&cell.c[t][u]) != cell.c[u][t] {
                    return AxiomResult::fail(format!(
                        "star(C^{}_{{{},{}}}) ≠ C^{}_{{{},{}}}",
                        cell.lambda,
                        t + 1,
                        u + 1,
                        cell.lambda,
                        u + 1,
                        t + 1
                    ));
                }
            }
        }
    }
    AxiomResult::ok()
}

fn check_c3(datum: &CellDatum) -> AxiomResult {
    let alg = &datum.algebra;
    let basis = datum.truncated_basis();
    let mut higher = Lattice::zero(alg.dim());
    for cell in &datum.cells {
        let k = cell.size();
        let mut gens: Vec<SparseVec> = cell.c.iter().map(|row| row[0].0.clone()).collect();
        gens.extend(higher.rows().iter().cloned());
        let solver = Solver::new(&gens);
        let failure = basis.par_iter().find_map_first(|&a| {
            let a_el = AlgebraElement::basis(a);
            for t in 0..k {
                let target = alg.multiply(&a_el, &cell.c[t][0]);
                let Some(coef) = solver.solve(&target.0) else {
                    return Some(format!(
                        "a_{a}·C^{}_{{{},1}} is not a combination of its row modulo higher cells",
                        cell.lambda,
                        t + 1
                    ));
                };
                let r: Vec<BigInt> = (0..k).map(|i| coef.get(i).cloned().unwrap_or_default()).collect();
                for u in 1..k {
                    let mut residual = alg.multiply(&a_el, &cell.c[t][u]);
                    for (tp, rt) in r.iter().enumerate() {
                        residual = residual.sub(&cell.c[tp][u].scale(rt));
                    }
                    if !higher.contains(&residual.0) {
                        return Some(format!(
                            "coefficients of a_{a}·C^{}_{{{},u}} depend on u (u = {})",
                            cell.lambda,
                            t + 1,
                            u + 1
                        ));
                    }
                }
            }
            None
        });
        if let Some(detail) = failure {
            return AxiomResult::fail(detail);
        }
        higher.extend(cell.c.iter().flatten().map(|x| x.0.clone()));
    }
    AxiomResult::ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ys(s: &str) -> YoungSet {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn ideal_ranks_sym2() {
        let alg = EndoAlgebra::new(&ys("1,1; 2")).unwrap();
        assert_eq!(ideal_lattice(&alg, &[p("2")]).rank(), 4);
        assert_eq!(ideal_lattice(&alg, &[]).rank(), 0);
        assert_eq!(ideal_lattice(&alg, &partitions_of(2)).rank(), alg.dim());
    }

    #[test]
    fn purity_sym2() {
        let alg = EndoAlgebra::new(&ys("1,1; 2")).unwrap();
        assert!(purity_check(&alg, &[p("2")]).unwrap());
        assert!(purity_check(&alg, &partitions_of(2)).unwrap());
        assert!(matches!(purity_check(&alg, &[p("1,1")]), Err(Error::NotCosaturated(_))));
    }

    #[test]
    fn factorization_sym2() {
        let alg = EndoAlgebra::new(&ys("1,1; 2")).unwrap();
        let f = factorization_check(&alg, &p("2")).unwrap();
        assert_eq!((f.left_rank, f.right_rank, f.section_rank), (2, 2, 4));
        assert!(f.pass);
        let g = factorization_check(&alg, &p("1,1")).unwrap();
        assert_eq!((g.left_rank, g.right_rank, g.section_rank), (1, 1, 1));
        assert!(g.pass);
        let bad = EndoAlgebra::new(&ys("1,1")).unwrap();
        assert!(matches!(factorization_check(&bad, &p("1,1")), Err(Error::NotCosaturated(_))));
    }

    #[test]
    fn smallest_datum() {
        let datum = build_cell_datum(&ys("1,1")).unwrap();
        assert_eq!(datum.lambda_plus(), vec![p("2"), p("1,1")]);
        let report = verify_cell_datum(&datum).unwrap();
        assert!(report.all_pass(), "{report}");
        assert_eq!(
            report.to_string().lines().next().unwrap(),
            "C1 pass, C2 pass, C3 pass, cells (2):1, (1,1):1"
        );
    }

    #[test]
    fn sym3_datum() {
        let datum = build_cell_datum(&ys("2,1; 3")).unwrap();
        let sizes: Vec<usize> = datum.cells.iter().map(Cell::size).collect();
        assert_eq!(sizes, vec![2, 1]);
        assert!(verify_cell_datum(&datum).unwrap().all_pass());
    }
}
