//! Young `Sym(n)`-sets given by the types of their orbits.
//!
//! An orbit of type `μ` is modelled as `Sym(n)/Sym(μ)`, whose points are the
//! tabloids of shape `μ`: labellings of `{0, …, n-1}` by row indices with row
//! `i` used exactly `μ_i` times.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Partition};
use crate::pdominance::{upward_closure, Dominance, SupportSet};

/// Default cap on the number of points enumerated for a construction.
pub const DEFAULT_MAX_POINTS: u128 = 200_000;

/// Cap on the number of orbits materialised by [`tensor_young_set`].
pub const MAX_ORBITS: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YoungSet {
    n: usize,
    orbit_types: Vec<Partition>,
}

impl YoungSet {
    pub fn new(n: usize, orbit_types: Vec<Partition>) -> Result<Self> {
        if orbit_types.is_empty() {
            return Err(Error::InvalidArgument("a Young set needs at least one orbit".into()));
        }
        if let Some(bad) = orbit_types.iter().find(|t| t.size() != n) {
            return Err(Error::SizeMismatch {
                left: n,
                right: bad.size(),
            });
        }
        Ok(YoungSet { n, orbit_types })
    }

    /// Parses `"2,1 x2; 3"` and checks every type against `n`.
    pub fn parse_with_n(text: &str, n: usize) -> Result<Self> {
        let set: YoungSet = text.parse()?;
        if set.n != n {
            return Err(Error::SizeMismatch { left: n, right: set.n });
        }
        Ok(set)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn orbit_types(&self) -> &[Partition] {
        &self.orbit_types
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_types.len()
    }

    /// Index of the first orbit of type `lambda`.
    pub fn first_orbit_of(&self, lambda: &Partition) -> Option<usize> {
        self.orbit_types.iter().position(|t| t == lambda)
    }

    /// The distinct orbit types.
    pub fn support(&self) -> SupportSet {
        SupportSet::new(self.orbit_types.iter().cloned()).expect("orbit list is non-empty")
    }

    pub fn is_cosaturated(&self) -> bool {
        let support = self.support();
        upward_closure(&support, &Dominance).expect("sizes agree") == support
    }

    /// Appends one orbit for each partition dominating the support but
    /// missing from it, largest first.
    pub fn cosaturated_closure(&self) -> YoungSet {
        let support = self.support();
        let closure = upward_closure(&support, &Dominance).expect("sizes agree");
        let mut orbit_types = self.orbit_types.clone();
        orbit_types.extend(closure.descending().filter(|m| !support.contains(m)).cloned());
        YoungSet { n: self.n, orbit_types }
    }

    /// Whether `sub`'s orbits form a sub-multiset of ours.
    pub fn contains_orbits_of(&self, sub: &YoungSet) -> bool {
        sub.n == self.n
            && sub.support().members().iter().all(|t| {
                let need = sub.orbit_types.iter().filter(|x| *x == t).count();
                self.orbit_types.iter().filter(|x| *x == t).count() >= need
            })
    }

    /// `|Ω|`: the sum of the orbit sizes `n!/(μ_1!μ_2!⋯)`.
    pub fn point_count(&self) -> u128 {
        self.orbit_types.iter().map(multinomial).sum()
    }

    /// Fails when enumerating the points would exceed `limit`.
    pub fn check_point_limit(&self, limit: u128) -> Result<()> {
        let required = self.point_count();
        if required > limit {
            return Err(Error::SizeLimitExceeded { required, limit });
        }
        Ok(())
    }

    /// Text form, grouping consecutive repeats as `"type xK"`.
    pub fn to_text(&self) -> String {
        let mut groups: Vec<(Partition, usize)> = Vec::new();
        for t in &self.orbit_types {
            match groups.last_mut() {
                Some((last, k)) if last == t => *k += 1,
                _ => groups.push((t.clone(), 1)),
            }
        }
        groups
            .iter()
            .map(|(t, k)| if *k == 1 { t.to_text() } else { format!("{} x{k}", t.to_text()) })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for YoungSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for YoungSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut types = Vec::new();
        for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let (part, mult) = match item.split_once(['x', 'X']) {
                Some((a, b)) => {
                    let k: usize = b
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in `{item}`")))?;
                    if k == 0 {
                        return Err(Error::Parse(format!("zero multiplicity in `{item}`")));
                    }
                    (a.trim(), k)
                }
                None => (item, 1),
            };
            let lambda: Partition = part.parse()?;
            types.extend(std::iter::repeat_n(lambda, mult));
        }
        let n = types
            .first()
            .map(Partition::size)
            .ok_or_else(|| Error::Parse("no orbit types given".into()))?;
        if n == 0 {
            return Err(Error::Parse("orbit types must be partitions of n ≥ 1".into()));
        }
        YoungSet::new(n, types)
    }
}

/// The number of tabloids of shape `mu`.
pub fn multinomial(mu: &Partition) -> u128 {
    let mut result: u128 = 1;
    let mut placed: u128 = 0;
    for &part in mu.parts() {
        for k in 1..=part as u128 {
            placed += 1;
            result = result * placed / k;
        }
    }
    result
}

/// A point of `Sym(n)/Sym(μ)`: `rows[k]` is the row holding label `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tabloid {
    pub rows: Vec<u8>,
}

impl Tabloid {
    /// Row sizes, i.e. the type of the orbit containing this tabloid.
    pub fn shape(&self) -> Vec<u32> {
        let height = self.rows.iter().map(|&r| r as usize + 1).max().unwrap_or(0);
        let mut sizes = vec![0u32; height];
        for &r in &self.rows {
            sizes[r as usize] += 1;
        }
        sizes
    }

    /// The image under `w`, where label `k` is sent to `w[k]`.
    pub fn act(&self, w: &[usize]) -> Tabloid {
        let mut rows = vec![0u8; self.rows.len()];
        for (k, &r) in self.rows.iter().enumerate() {
            rows[w[k]] = r;
        }
        Tabloid { rows }
    }
}

/// All tabloids of shape `mu`, in lexicographic order of their row labels.
pub fn enumerate_points(mu: &Partition, n: usize) -> Result<Vec<Tabloid>> {
    if mu.size() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: mu.size(),
        });
    }
    if mu.len() > u8::MAX as usize {
        return Err(Error::InvalidArgument("too many rows".into()));
    }
    fn go(k: usize, remaining: &mut [u32], cur: &mut Vec<u8>, out: &mut Vec<Tabloid>) {
        if k == cur.len() {
            out.push(Tabloid { rows: cur.clone() });
            return;
        }
        for r in 0..remaining.len() {
            if remaining[r] > 0 {
                remaining[r] -= 1;
                cur[k] = r as u8;
                go(k + 1, remaining, cur, out);
                remaining[r] += 1;
            }
        }
    }
    let mut out = Vec::with_capacity(multinomial(mu) as usize);
    go(0, &mut mu.parts().to_vec(), &mut vec![0; n], &mut out);
    Ok(out)
}

/// Stirling numbers of the second kind `S(r, b)` for `b = 0..=r`.
pub fn stirling2_row(r: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for m in 1..=r {
        let mut next = vec![0u128; m + 1];
        for (b, slot) in next.iter_mut().enumerate().skip(1) {
            let carry = if b < m { b as u128 * row[b] } else { 0 };
            *slot = row[b - 1] + carry;
        }
        row = next;
    }
    row
}

/// `I(n, r)`, the maps `{1..r} → {1..n}` under `w·i = w∘i`, as a Young set.
///
/// Orbits are classified by the fibre partition of the map; a map with image
/// of size `b` is fixed exactly by the permutations of the complement of its
/// image, so it has type `(n-b, 1^b)`. There are `S(r, b)` orbits of that type.
pub fn tensor_young_set(n: usize, r: usize) -> Result<YoungSet> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidArgument("tensor model needs n ≥ 1 and r ≥ 1".into()));
    }
    let stirling = stirling2_row(r);
    let top = r.min(n);
    let total: u128 = stirling[1..=top].iter().sum();
    if total > MAX_ORBITS {
        return Err(Error::SizeLimitExceeded {
            required: total,
            limit: MAX_ORBITS,
        });
    }
    let mut types = Vec::with_capacity(total as usize);
    for (b, &mult) in stirling.iter().enumerate().take(top + 1).skip(1) {
        let ty = Partition::hook((n - b) as u32, b as u32);
        types.extend(std::iter::repeat_n(ty, mult as usize));
    }
    YoungSet::new(n, types)
}

/// Every Young set with multiplicity-one orbits on a non-empty subset of `Par(n)`.
pub fn all_simple_young_sets(n: usize) -> Vec<YoungSet> {
    let par = partitions_of(n);
    (1u64..(1 << par.len()))
        .map(|mask| {
            let types = par
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect();
            YoungSet::new(n, types).expect("non-empty")
        })
        .collect()
}
