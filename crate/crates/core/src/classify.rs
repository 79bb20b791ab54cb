//! Quasi-heredity of `End_{Sym(n)}(kΓ)` over a field of characteristic `p`.
//!
//! The algebra is quasi-hereditary exactly when every partition dominating
//! some orbit type of `Γ` also p-dominates one.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{Partition, Prime};
use crate::pdominance::{upward_closure, Dominance, PDominance, Relation, SupportSet};
use crate::youngset::YoungSet;

pub use crate::youngset::tensor_young_set;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QHVerdict {
    pub quasi_hereditary: bool,
    /// `ζ^⊵(Γ)`.
    pub zeta_dom: SupportSet,
    /// `ζ^⊵ₚ(Γ)`.
    pub zeta_pdom: SupportSet,
    /// Largest member of `ζ^⊵ \ ζ^⊵ₚ` when the verdict is negative.
    pub witness: Option<Partition>,
}

/// Compares the closures of `support` under `upper` and `lower`.
pub fn verdict_with(support: &SupportSet, upper: &dyn Relation, lower: &dyn Relation) -> Result<QHVerdict> {
    let zeta_dom = upward_closure(support, upper)?;
    let zeta_pdom = upward_closure(support, lower)?;
    let witness = zeta_dom.descending().find(|m| !zeta_pdom.contains(m)).cloned();
    Ok(QHVerdict {
        quasi_hereditary: witness.is_none() && zeta_pdom.is_subset(&zeta_dom),
        zeta_dom,
        zeta_pdom,
        witness,
    })
}

pub fn is_quasi_hereditary(gamma: &YoungSet, p: Prime) -> Result<QHVerdict> {
    verdict_with(&gamma.support(), &Dominance, &PDominance(p))
}

/// Closed form for `I(n, r)`: `p ∤ n` and (`n < 2p`, or `n > 2p` and `r < p`).
pub fn tensor_qh_closed_form(n: usize, r: usize, p: Prime) -> bool {
    let p = p.get() as usize;
    !n.is_multiple_of(p) && (n < 2 * p || (n > 2 * p && r < p))
}

/// Closed form for the partition algebra `P_r(n)`: `gcd(n, p) = 1` and `r < p`.
pub fn partition_algebra_qh(r: usize, n: usize, p: Prime) -> bool {
    n.gcd(&(p.get() as usize)) == 1 && r < p.get() as usize
}

/// A way of deciding quasi-heredity for the tensor family.
pub trait TensorCriterion: Send + Sync {
    fn name(&self) -> &'static str;
    fn decide(&self, n: usize, r: usize, p: Prime) -> Result<bool>;
}

/// Closure comparison on the support of `I(n, r)`.
pub struct Generic;

impl TensorCriterion for Generic {
    fn name(&self) -> &'static str {
        "generic"
    }

    fn decide(&self, n: usize, r: usize, p: Prime) -> Result<bool> {
        Ok(is_quasi_hereditary(&tensor_young_set(n, r)?, p)?.quasi_hereditary)
    }
}

pub struct ClosedForm;

impl TensorCriterion for ClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn decide(&self, n: usize, r: usize, p: Prime) -> Result<bool> {
        if n == 0 || r == 0 {
            return Err(Error::InvalidArgument("tensor model needs n ≥ 1 and r ≥ 1".into()));
        }
        Ok(tensor_qh_closed_form(n, r, p))
    }
}

pub static TENSOR_CRITERIA: &[&dyn TensorCriterion] = &[&Generic, &ClosedForm];

pub fn tensor_criterion_by_name(name: &str) -> Result<&'static dyn TensorCriterion> {
    TENSOR_CRITERIA
        .iter()
        .copied()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorRow {
    pub n: usize,
    pub r: usize,
    pub p: u32,
    pub generic: bool,
    pub closed_form: bool,
    pub agree: bool,
}

pub fn tensor_row(n: usize, r: usize, p: Prime) -> Result<TensorRow> {
    let generic = Generic.decide(n, r, p)?;
    let closed_form = ClosedForm.decide(n, r, p)?;
    Ok(TensorRow {
        n,
        r,
        p: p.get(),
        generic,
        closed_form,
        agree: generic == closed_form,
    })
}

/// Rows for `1 ≤ n ≤ n_max`, `1 ≤ r ≤ r_max`, ordered by `(n, r)`.
pub fn tensor_table(p: Prime, n_max: usize, r_max: usize) -> Result<Vec<TensorRow>> {
    let cells: Vec<(usize, usize)> = (1..=n_max).flat_map(|n| (1..=r_max).map(move |r| (n, r))).collect();
    cells.par_iter().map(|&(n, r)| tensor_row(n, r, p)).collect()
}

/// One comparison of the partition-algebra closed form against the tensor
/// criterion at `N = n + p·s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationPoint {
    pub s: usize,
    pub big_n: usize,
    pub tensor: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionAlgebraReport {
    pub r: usize,
    pub n: usize,
    pub p: u32,
    pub closed_form: bool,
    /// Points `N = n + p·s` with `s ≤ 4` and `N ≥ 2r + 1`.
    pub points: Vec<StabilizationPoint>,
    pub agree: bool,
    /// `N ≥ 2r + 1` is used as a working faithfulness threshold, not a proved one.
    pub regime: &'static str,
}

pub const STABILIZATION_STEPS: usize = 4;

pub fn partition_algebra_report(
    r: usize,
    n: usize,
    p: Prime,
    criterion: &dyn TensorCriterion,
) -> Result<PartitionAlgebraReport> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidArgument("need n ≥ 1 and r ≥ 1".into()));
    }
    let closed_form = partition_algebra_qh(r, n, p);
    let points = (0..=STABILIZATION_STEPS)
        .map(|s| (s, n + p.get() as usize * s))
        .filter(|&(_, big_n)| big_n > 2 * r)
        .map(|(s, big_n)| {
            Ok(StabilizationPoint {
                s,
                big_n,
                tensor: criterion.decide(big_n, r, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let agree = points.iter().all(|pt| pt.tensor == closed_form);
    Ok(PartitionAlgebraReport {
        r,
        n,
        p: p.get(),
        closed_form,
        points,
        agree,
        regime: "empirical: N >= 2r+1",
    })
}
