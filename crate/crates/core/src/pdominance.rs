//! p-dominance of partitions and closures of supports.
//!
//! `τ ⊴ₚ μ` holds when `τ = Σ pⁱ γ(i)` for tuples `γ(i)` whose sorted forms are
//! dominated by the base-p digits `μ(i)` of `μ`. [`p_dominates`] searches for
//! such a weak expansion and returns it as a witness; [`p_dominates_oracle`]
//! enumerates every digit matrix and is kept for cross-checking.
//!
//! Order relations are exposed behind the [`Relation`] trait and registered by
//! name in [`RELATIONS`], so closures and verdicts can be computed against any
//! of them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{
    base_p_expansion, dominates, partial_sums_bounded, partitions_of, sort_descending,
    Composition, Partition, Prime,
};

/// `τ = Σ pⁱ·digits[i]`, one entry per nonzero part of `τ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakExpansion {
    pub prime: u32,
    pub digits: Vec<Composition>,
}

impl WeakExpansion {
    /// The expanded tuple `Σ pⁱ·digits[i]`.
    pub fn value(&self) -> Vec<u64> {
        let width = self.digits.first().map_or(0, |d| d.0.len());
        let mut out = vec![0u64; width];
        let mut scale = 1u64;
        for d in &self.digits {
            for (o, &x) in out.iter_mut().zip(&d.0) {
                *o += scale * x as u64;
            }
            scale *= self.prime as u64;
        }
        out
    }

    /// Digits padded with zero coordinates to length `n`.
    pub fn padded(&self, n: usize) -> Vec<Composition> {
        self.digits
            .iter()
            .map(|d| {
                let mut v = d.0.clone();
                v.resize(n.max(v.len()), 0);
                Composition(v)
            })
            .collect()
    }

    /// Re-checks the witness conditions for `τ ⊴ₚ μ` from scratch.
    pub fn certifies(&self, mu: &Partition, tau: &Partition) -> bool {
        let Ok(p) = Prime::new(self.prime) else {
            return false;
        };
        let value = self.value();
        let tau_ok = (0..value.len().max(tau.len())).all(|j| {
            value.get(j).copied().unwrap_or(0) == tau.part(j) as u64
        });
        let mu_digits = base_p_expansion(mu, p);
        let digits_ok = self.digits.iter().enumerate().all(|(i, g)| {
            let target = mu_digits.get(i).cloned().unwrap_or_default();
            partial_sums_bounded(sort_descending(&g.0).parts(), target.parts())
        });
        tau_ok && digits_ok
    }
}

/// A non-empty set of partitions of a common size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSet {
    members: BTreeSet<Partition>,
}

impl SupportSet {
    pub fn new(members: impl IntoIterator<Item = Partition>) -> Result<Self> {
        let members: BTreeSet<Partition> = members.into_iter().collect();
        let Some(first) = members.iter().next() else {
            return Err(Error::InvalidArgument("support must be non-empty".into()));
        };
        let n = first.size();
        if let Some(bad) = members.iter().find(|m| m.size() != n) {
            return Err(Error::SizeMismatch {
                left: n,
                right: bad.size(),
            });
        }
        Ok(SupportSet { members })
    }

    pub fn n(&self) -> usize {
        self.members.iter().next().map_or(0, Partition::size)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.members.contains(p)
    }

    pub fn members(&self) -> &BTreeSet<Partition> {
        &self.members
    }

    /// Members from largest to smallest in the refined (lexicographic) order.
    pub fn descending(&self) -> impl Iterator<Item = &Partition> {
        self.members.iter().rev()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.members.is_subset(&other.members)
    }
}

fn check_sizes(mu: &Partition, tau: &Partition) -> Result<()> {
    if mu.size() != tau.size() {
        return Err(Error::SizeMismatch {
            left: mu.size(),
            right: tau.size(),
        });
    }
    Ok(())
}

/// Witness for `τ ⊴ₚ μ`, or `None` when no weak expansion qualifies.
///
/// Only digit levels up to the top base-p digit of `μ` are searched, and each
/// row `γ(i)` is forced to have size `|μ(i)|`: partial sums bound `|γ(i)|` by
/// `|μ(i)|` and the weighted totals agree, so equality holds in every row.
pub fn p_dominates(mu: &Partition, tau: &Partition, p: Prime) -> Result<Option<WeakExpansion>> {
    check_sizes(mu, tau)?;
    let mu_digits = base_p_expansion(mu, p);
    let levels = mu_digits.len();
    let pp = p.get() as u64;
    let powers: Vec<u64> = (0..levels).map(|i| pp.pow(i as u32)).collect();
    let cols: Vec<u64> = tau.parts().iter().map(|&x| x as u64).collect();

    // digit vectors per column, in a fixed order
    let options: Vec<Vec<Vec<u32>>> = cols
        .iter()
        .map(|&v| column_options(v, &powers, &mu_digits))
        .collect();

    let mut search = Search {
        p: pp,
        mu_digits: &mu_digits,
        powers: &powers,
        cols: &cols,
        options: &options,
        rem: mu_digits.iter().map(|d| d.size() as u64).collect(),
        rows: vec![Vec::new(); levels],
        chosen: Vec::with_capacity(cols.len()),
    };
    if !search.run(0) {
        return Ok(None);
    }
    let digits = (0..levels)
        .map(|i| Composition(search.chosen.iter().map(|&(j, k)| options[j][k][i]).collect()))
        .collect();
    Ok(Some(WeakExpansion {
        prime: p.get(),
        digits,
    }))
}

/// All `(c_0, …, c_{L-1})` with `Σ pⁱ c_i = v` and `c_i ≤ |μ(i)|`.
fn column_options(v: u64, powers: &[u64], mu_digits: &[Partition]) -> Vec<Vec<u32>> {
    fn go(level: usize, rest: u64, powers: &[u64], caps: &[u64], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if level == 0 {
            if rest <= caps[0] {
                cur[0] = rest as u32;
                out.push(cur.clone());
            }
            return;
        }
        let max = (rest / powers[level]).min(caps[level]);
        for c in (0..=max).rev() {
            cur[level] = c as u32;
            go(level - 1, rest - c * powers[level], powers, caps, cur, out);
        }
        cur[level] = 0;
    }
    if powers.is_empty() {
        return if v == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let caps: Vec<u64> = mu_digits.iter().map(|d| d.size() as u64).collect();
    let mut out = Vec::new();
    go(powers.len() - 1, v, powers, &caps, &mut vec![0; powers.len()], &mut out);
    out
}

struct Search<'a> {
    p: u64,
    mu_digits: &'a [Partition],
    powers: &'a [u64],
    cols: &'a [u64],
    options: &'a [Vec<Vec<u32>>],
    rem: Vec<u64>,
    /// per digit level, entries placed so far, kept sorted descending
    rows: Vec<Vec<u32>>,
    chosen: Vec<(usize, usize)>,
}

impl Search<'_> {
    fn run(&mut self, j: usize) -> bool {
        if j == self.cols.len() {
            return self.rem.iter().all(|&r| r == 0)
                && self
                    .rows
                    .iter()
                    .zip(self.mu_digits)
                    .all(|(row, target)| partial_sums_bounded(row, target.parts()));
        }
        // equal columns are interchangeable: keep option indices non-decreasing
        let start = match self.chosen.last() {
            Some(&(pj, k)) if self.cols[pj] == self.cols[j] => k,
            _ => 0,
        };
        for k in start..self.options[j].len() {
            let digits = &self.options[j][k];
            if digits.iter().zip(&self.rem).any(|(&c, &r)| c as u64 > r) {
                continue;
            }
            for (i, &c) in digits.iter().enumerate() {
                self.rem[i] -= c as u64;
                if c > 0 {
                    let row = &mut self.rows[i];
                    let pos = row.partition_point(|&x| x >= c);
                    row.insert(pos, c);
                }
            }
            self.chosen.push((j, k));
            if self.feasible(j + 1) && self.run(j + 1) {
                return true;
            }
            self.chosen.pop();
            for (i, &c) in digits.iter().enumerate() {
                self.rem[i] += c as u64;
                if c > 0 {
                    let row = &mut self.rows[i];
                    let pos = row.iter().position(|&x| x == c).unwrap();
                    row.remove(pos);
                }
            }
        }
        false
    }

    fn feasible(&self, next: usize) -> bool {
        // placed entries can only grow the top partial sums of each row
        let rows_ok = self
            .rows
            .iter()
            .zip(self.mu_digits)
            .all(|(row, target)| partial_sums_bounded(row, target.parts()));
        if !rows_ok {
            return false;
        }
        // the remaining columns must be able to carry the remaining high digits
        let levels = self.powers.len();
        let mut need = 0u64;
        for i in (0..levels).rev() {
            need = need * self.p + self.rem[i];
            let room: u64 = self.cols[next..].iter().map(|&v| v / self.powers[i]).sum();
            if room < need {
                return false;
            }
        }
        true
    }
}

/// Decides `τ ⊴ₚ μ` by listing every digit matrix over all levels `pⁱ ≤ n`
/// and all `n` coordinates, checking the partial-sum conditions directly.
pub fn p_dominates_oracle(mu: &Partition, tau: &Partition, p: Prime) -> Result<bool> {
    check_sizes(mu, tau)?;
    let n = tau.size();
    let pp = p.get() as u64;
    let mut powers = vec![1u64];
    while powers.last().unwrap() * pp <= n as u64 {
        powers.push(powers.last().unwrap() * pp);
    }
    let mu_digits = base_p_expansion(mu, p);
    let targets: Vec<Partition> = (0..powers.len().max(mu_digits.len()))
        .map(|i| mu_digits.get(i).cloned().unwrap_or_default())
        .collect();

    fn decompositions(v: u64, powers: &[u64]) -> Vec<Vec<u64>> {
        if powers.is_empty() {
            return if v == 0 { vec![vec![]] } else { vec![] };
        }
        let (last, init) = powers.split_last().unwrap();
        let mut out = Vec::new();
        for c in 0..=v / last {
            for mut d in decompositions(v - c * last, init) {
                d.push(c);
                out.push(d);
            }
        }
        out
    }

    let per_column: Vec<Vec<Vec<u64>>> = (0..n)
        .map(|j| decompositions(tau.part(j) as u64, &powers))
        .collect();

    fn product(
        j: usize,
        per_column: &[Vec<Vec<u64>>],
        current: &mut Vec<Vec<u64>>,
        check: &dyn Fn(&[Vec<u64>]) -> bool,
    ) -> bool {
        if j == per_column.len() {
            return check(current);
        }
        for d in &per_column[j] {
            current.push(d.clone());
            let found = product(j + 1, per_column, current, check);
            current.pop();
            if found {
                return true;
            }
        }
        false
    }

    let levels = powers.len();
    let check = |matrix: &[Vec<u64>]| -> bool {
        (0..levels).all(|i| {
            let row: Vec<u32> = matrix.iter().map(|col| col[i] as u32).collect();
            partial_sums_bounded(sort_descending(&row).parts(), targets[i].parts())
        }) && targets[levels..].iter().all(|t| t.is_empty())
    };
    Ok(product(0, &per_column, &mut Vec::new(), &check))
}

/// An order-like relation on partitions of equal size.
pub trait Relation: Send + Sync {
    fn name(&self) -> String;

    /// `true` iff `lower` sits below `upper`.
    fn relates(&self, upper: &Partition, lower: &Partition) -> Result<bool>;
}

/// The dominance order `⊴`.
pub struct Dominance;

impl Relation for Dominance {
    fn name(&self) -> String {
        "dominance".into()
    }

    fn relates(&self, upper: &Partition, lower: &Partition) -> Result<bool> {
        dominates(upper, lower)
    }
}

/// p-dominance decided by the pruned witness search.
pub struct PDominance(pub Prime);

impl Relation for PDominance {
    fn name(&self) -> String {
        format!("p-dominance(p={})", self.0)
    }

    fn relates(&self, upper: &Partition, lower: &Partition) -> Result<bool> {
        Ok(p_dominates(upper, lower, self.0)?.is_some())
    }
}

/// p-dominance decided by exhaustive enumeration.
pub struct PDominanceOracle(pub Prime);

impl Relation for PDominanceOracle {
    fn name(&self) -> String {
        format!("p-dominance-oracle(p={})", self.0)
    }

    fn relates(&self, upper: &Partition, lower: &Partition) -> Result<bool> {
        p_dominates_oracle(upper, lower, self.0)
    }
}

type RelationFactory = fn(Option<Prime>) -> Result<Box<dyn Relation>>;

fn need_prime(p: Option<Prime>) -> Result<Prime> {
    p.ok_or_else(|| Error::InvalidArgument("this relation needs a prime".into()))
}

/// Registered relations, selectable by name.
pub static RELATIONS: &[(&str, RelationFactory)] = &[
    ("dominance", |_| Ok(Box::new(Dominance))),
    ("p-dominance", |p| Ok(Box::new(PDominance(need_prime(p)?)))),
    ("p-dominance-oracle", |p| Ok(Box::new(PDominanceOracle(need_prime(p)?)))),
];

pub fn relation_by_name(name: &str, p: Option<Prime>) -> Result<Box<dyn Relation>> {
    RELATIONS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
        .and_then(|(_, make)| make(p))
}

/// `{μ ∈ Par(n) : μ is above some λ in the support}` under `relation`.
pub fn upward_closure(support: &SupportSet, relation: &dyn Relation) -> Result<SupportSet> {
    let mut out = Vec::new();
    for mu in partitions_of(support.n()) {
        for lambda in support.members() {
            if relation.relates(&mu, lambda)? {
                out.push(mu.clone());
                break;
            }
        }
    }
    SupportSet::new(out)
}
