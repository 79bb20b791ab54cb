//! Partitions and compositions: dominance, base-p digits, Kostka numbers and
//! integer matrices with prescribed margins.
//!
//! A [`Partition`] is stored without trailing zeros, so structural equality is
//! equality of partitions. The derived `Ord` is lexicographic on the part
//! sequence, which for partitions of the same size is the total order
//! [`compare_refined`] and refines dominance.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A prime number, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from parts that are already weakly decreasing.
    /// Trailing zeros are dropped.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(n)`.
    pub fn row(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition(vec![n])
        }
    }

    /// The hook `(a, 1^b)`, sorted if `a < 1`.
    pub fn hook(a: u32, b: u32) -> Self {
        let mut parts = vec![a];
        parts.extend(std::iter::repeat_n(1, b as usize));
        sort_descending(&parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Part `i` (zero based), reading zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    /// Comma separated parts, `"0"` for the empty partition.
    pub fn to_text(&self) -> String {
        if self.0.is_empty() {
            "0".to_string()
        } else {
            self.0.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_text())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty partition string".into()));
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad part `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|_| Error::Parse(format!("`{s}` is not weakly decreasing")))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A tuple of nonnegative integers of fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(pub Vec<u32>);

impl Composition {
    pub fn zeros(len: usize) -> Self {
        Composition(vec![0; len])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }
}

fn check_sizes(a: &Partition, b: &Partition) -> Result<()> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch {
            left: a.size(),
            right: b.size(),
        });
    }
    Ok(())
}

/// `true` iff `lambda ⊴ mu`, i.e. every partial sum of `lambda` is at most the
/// corresponding partial sum of `mu`.
pub fn dominates(mu: &Partition, lambda: &Partition) -> Result<bool> {
    check_sizes(mu, lambda)?;
    Ok(partial_sums_bounded(lambda.parts(), mu.parts()))
}

/// Partial-sum comparison with zero padding; sizes are not required to agree.
pub(crate) fn partial_sums_bounded(lower: &[u32], upper: &[u32]) -> bool {
    let len = lower.len().max(upper.len());
    let (mut sl, mut su) = (0u64, 0u64);
    for i in 0..len {
        sl += lower.get(i).copied().unwrap_or(0) as u64;
        su += upper.get(i).copied().unwrap_or(0) as u64;
        if sl > su {
            return false;
        }
    }
    true
}

pub fn sort_descending(gamma: &[u32]) -> Partition {
    let mut parts: Vec<u32> = gamma.iter().copied().filter(|&x| x > 0).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition(parts)
}

pub fn is_p_restricted(lambda: &Partition, p: Prime) -> bool {
    let parts = lambda.parts();
    (0..parts.len()).all(|i| parts[i] - lambda.part(i + 1) < p.get())
}

/// Base-p digits `λ(0), λ(1), …` with `λ = Σ pⁱ λ(i)` and every digit
/// p-restricted. Computed digit by digit on the gaps `λ_j − λ_{j+1}`.
pub fn base_p_expansion(lambda: &Partition, p: Prime) -> Vec<Partition> {
    let p = p.get();
    let mut gaps: Vec<u32> = (0..lambda.len())
        .map(|j| lambda.part(j) - lambda.part(j + 1))
        .collect();
    let mut digits = Vec::new();
    while gaps.iter().any(|&g| g > 0) {
        let digit_gaps: Vec<u32> = gaps.iter().map(|g| g % p).collect();
        for g in gaps.iter_mut() {
            *g /= p;
        }
        // suffix sums of the gaps rebuild the parts
        let mut parts = vec![0u32; digit_gaps.len()];
        let mut acc = 0;
        for j in (0..digit_gaps.len()).rev() {
            acc += digit_gaps[j];
            parts[j] = acc;
        }
        digits.push(Partition::new(parts).expect("suffix sums are decreasing"));
    }
    digits
}

/// Lexicographic comparison of part sequences. Refines dominance on `Par(n)`.
pub fn compare_refined(lambda: &Partition, mu: &Partition) -> Result<Ordering> {
    check_sizes(lambda, mu)?;
    Ok(lambda.cmp(mu))
}

/// All partitions of `n`, in descending lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=max.min(rem)).rev() {
            cur.push(part);
            go(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n as u32, n as u32, &mut Vec::new(), &mut out);
    out
}

/// Number of semistandard tableaux of shape `lambda` and content `mu`.
pub fn kostka(lambda: &Partition, mu: &Partition) -> Result<u64> {
    check_sizes(lambda, mu)?;
    let mut memo = HashMap::new();
    Ok(kostka_strips(lambda.parts(), mu.parts(), &mut memo))
}

/// Peels off the cells holding the largest entry as a horizontal strip.
fn kostka_strips(shape: &[u32], content: &[u32], memo: &mut HashMap<(Vec<u32>, usize), u64>) -> u64 {
    let Some((&last, rest)) = content.split_last() else {
        return u64::from(shape.iter().all(|&x| x == 0));
    };
    let key = (shape.to_vec(), content.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    // entries 1..=k fill at most k rows
    let result = if shape.iter().filter(|&&x| x > 0).count() > content.len() {
        0
    } else {
        let mut total = 0;
        let mut inner = shape.to_vec();
        strips(shape, 0, last, &mut inner, &mut |nu| {
            total += kostka_strips(nu, rest, memo);
        });
        total
    };
    memo.insert(key, result);
    result
}

/// Enumerates `nu` with `shape / nu` a horizontal strip of `size` cells.
fn strips(shape: &[u32], row: usize, size: u32, nu: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if row == shape.len() {
        if size == 0 {
            f(nu);
        }
        return;
    }
    let floor = shape.get(row + 1).copied().unwrap_or(0);
    let max_take = (shape[row] - floor).min(size);
    for take in 0..=max_take {
        nu[row] = shape[row] - take;
        strips(shape, row + 1, size - take, nu, f);
    }
    nu[row] = shape[row];
}

/// All nonnegative integer matrices with row sums `mu` and column sums `nu`,
/// in lexicographic (row-major) order.
pub fn margin_matrices(mu: &Partition, nu: &Partition) -> Result<Vec<Vec<Vec<u32>>>> {
    check_sizes(mu, nu)?;
    let rows = mu.len();
    let cols = nu.len();
    let mut out = Vec::new();
    let mut current = vec![vec![0u32; cols]; rows];
    let mut col_rem: Vec<u32> = nu.parts().to_vec();
    fill_margin(mu.parts(), 0, 0, mu.part(0), &mut col_rem, &mut current, &mut out);
    Ok(out)
}

fn fill_margin(
    row_sums: &[u32],
    r: usize,
    c: usize,
    row_rem: u32,
    col_rem: &mut [u32],
    current: &mut Vec<Vec<u32>>,
    out: &mut Vec<Vec<Vec<u32>>>,
) {
    let cols = col_rem.len();
    if r == row_sums.len() {
        if col_rem.iter().all(|&x| x == 0) {
            out.push(current.clone());
        }
        return;
    }
    if c + 1 == cols {
        // last column takes the remainder of the row
        if row_rem <= col_rem[c] {
            current[r][c] = row_rem;
            col_rem[c] -= row_rem;
            let next = row_sums.get(r + 1).copied().unwrap_or(0);
            fill_margin(row_sums, r + 1, 0, next, col_rem, current, out);
            col_rem[c] += row_rem;
            current[r][c] = 0;
        }
        return;
    }
    for v in 0..=row_rem.min(col_rem[c]) {
        current[r][c] = v;
        col_rem[c] -= v;
        fill_margin(row_sums, r, c + 1, row_rem - v, col_rem, current, out);
        col_rem[c] += v;
    }
    current[r][c] = 0;
}
