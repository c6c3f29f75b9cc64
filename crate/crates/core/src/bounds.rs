//! Closed-form triviality-order bounds and the counting inequalities behind
//! them. Every logarithm is compared exactly, by scaling with powers of two.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::commutator::tree::CommutatorTree;
use crate::surface::{GroupCert, HyperbolicityCert};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("the bounds need n > 5, got {0}")]
    SmallN(u64),
    #[error("k must be at least 1")]
    ZeroK,
}

/// Quotient of `m` by six.
pub fn q_of(m: u64) -> u64 {
    m / 6
}

/// Quotient of `m` by four.
pub fn t_of(m: u64) -> u64 {
    m / 4
}

/// `floor(log2(num / den))` for positive `num`, `den`.
pub fn floor_log2_ratio(num: u64, den: u64) -> i64 {
    assert!(num > 0 && den > 0, "logarithm of a nonpositive ratio");
    let (num, den) = (num as u128, den as u128);
    if num >= den {
        let mut e = 0;
        while den << (e + 1) <= num {
            e += 1;
        }
        e
    } else {
        let mut f = 1;
        while num << f < den {
            f += 1;
        }
        -f
    }
}

/// `value > log2(num / den)`, decided without floating point.
pub fn exceeds_log2_ratio(value: i64, num: u64, den: u64) -> bool {
    assert!(num > 0 && den > 0, "logarithm of a nonpositive ratio");
    let (num, den) = (num as u128, den as u128);
    if value >= 0 {
        // 2^value > num/den
        value >= 64 || den << value > num
    } else {
        let f = value.unsigned_abs();
        // 2^-f > num/den  <=>  den > num * 2^f
        f < 64 && den > num << f
    }
}

/// The triviality order attached to a push-off of an `n`-hyperbolic step
/// whose factors split into groups of at least `k` generators.
/// Negative values are returned as is.
pub fn q_gamma(n: u64, k: u64) -> Result<i64, BoundsError> {
    if k == 0 {
        return Err(BoundsError::ZeroK);
    }
    if n < 6 * k {
        Ok(q_of(n + 1) as i64)
    } else {
        Ok(k as i64 + floor_log2_ratio(n + 1 - 6 * k, 6))
    }
}

/// Upper bound on bad sets involving a generator that occurs `w` times.
pub fn max_bad_sets(w: u64) -> u64 {
    w / 2 + 1
}

/// Upper bound on conflict sets for `k` generators and `s` factors.
pub fn max_conflict_sets(k: u64, s: u32) -> u64 {
    assert!(s >= 1, "s must be at least 1");
    k * ((1u64 << s) - 2)
}

/// When every generator occurs four times and three of the sets it lies in
/// are bad, at least `t(len)` sets survive.
pub fn survivor_count_holds(len: u64) -> bool {
    len - 3 * len / 4 >= t_of(len)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConflictCount {
    /// `6k + r + 2k(2^s - 2)`
    pub len: u64,
    /// `k + floor(r/2) + k(s-2)`
    pub survivors: u64,
    /// `survivors > log2((len - 6k) / 6)`
    pub survivors_exceed: bool,
    /// `r/2 + k(s-2) > log2((len - 6k) / 6)` with real `r/2` and no `k` term.
    pub without_good_sets: bool,
}

/// Counting for products of `s` good arcs over `k` generators with `r > 2`.
pub fn conflict_counting(k: u64, s: u32, r: u64) -> ConflictCount {
    assert!(s >= 2, "s must be at least 2");
    let len = 6 * k + r + 2 * max_conflict_sets(k, s);
    let num = len - 6 * k;
    let survivors = k + r / 2 + k * (s as u64 - 2);
    // r/2 + k(s-2) > log2(num/6)  <=>  r + 2k(s-2) > log2(num^2/36)
    let doubled = (r + 2 * k * (s as u64 - 2)) as i64;
    ConflictCount {
        len,
        survivors,
        survivors_exceed: exceeds_log2_ratio(survivors as i64, num, 6),
        without_good_sets: exceeds_log2_ratio(doubled, num * num, 36),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub n: u64,
    pub q_gamma: i64,
    /// `q_gamma > log2((n-5)/72)`
    pub q_gamma_bound: bool,
    /// `q_gamma - 1 > log2((n-5)/144)`
    pub l_bound: bool,
}

pub fn check_inequalities(n: u64, k: u64) -> Result<InequalityReport, BoundsError> {
    if n <= 5 {
        return Err(BoundsError::SmallN(n));
    }
    let q = q_gamma(n, k)?;
    Ok(InequalityReport {
        n,
        q_gamma: q,
        q_gamma_bound: exceeds_log2_ratio(q, n - 5, 72),
        l_bound: exceeds_log2_ratio(q - 1, n - 5, 144),
    })
}

/// The `k` that the q-gamma inequality is checked with for a given `n`:
/// the largest `k` on the logarithmic branch, or 1 below it.
pub fn branch_k(n: u64) -> u64 {
    (n / 6).max(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Group {
    pub factors: Vec<usize>,
    pub generators: BTreeSet<usize>,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    /// Distinct generators other than the own generator.
    pub l: usize,
    pub groups: Vec<Group>,
    /// Smallest group size, absent when no factor uses another generator.
    pub k: Option<usize>,
}

/// Split factors into the connected components of the graph that joins
/// factors sharing a generator other than `own_gen`.
pub fn partition_and_k(factors: &[CommutatorTree], own_gen: usize) -> Partition {
    let gens: Vec<BTreeSet<usize>> = factors
        .iter()
        .map(|t| t.flatten().letters().iter().map(|l| l.gen).filter(|&g| g != own_gen).collect())
        .collect();
    let mut parent: Vec<usize> = (0..factors.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    let mut first_seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, gs) in gens.iter().enumerate() {
        for &g in gs {
            match first_seen.get(&g) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
                None => {
                    first_seen.insert(g, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Group> = BTreeMap::new();
    for (i, gs) in gens.iter().enumerate() {
        if gs.is_empty() {
            continue;
        }
        let root = find(&mut parent, i);
        let g = groups.entry(root).or_insert_with(|| Group { factors: vec![], generators: BTreeSet::new(), k: 0 });
        g.factors.push(i);
        g.generators.extend(gs);
        g.k = g.generators.len();
    }
    let groups: Vec<Group> = groups.into_values().collect();
    Partition { l: first_seen.len(), k: groups.iter().map(|g| g.k).min(), groups }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveBound {
    pub band: String,
    pub l: usize,
    pub groups: Vec<GroupCert>,
    pub k: Option<usize>,
    pub q_gamma: Option<i64>,
    /// `q_gamma > log2((n-5)/72)`, when `n > 5` and `q_gamma` is defined.
    pub q_gamma_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub genus: usize,
    pub curves: Vec<CurveBound>,
    /// `min(q_gamma - 1)` over constrained curves; absent means unbounded.
    pub l_n_s: Option<i64>,
    pub positive_order_certified: bool,
    /// `l(n,S) > log2((n-5)/144)`, when `n > 5` and `l(n,S)` is finite.
    pub l_bound: Option<bool>,
    pub summary: String,
}

/// Triviality-order bound of a certified surface.
pub fn l_of_surface(cert: &HyperbolicityCert) -> BoundReport {
    let n = cert.n as u64;
    let curves: Vec<CurveBound> = cert
        .steps
        .iter()
        .map(|s| CurveBound {
            band: s.band.clone(),
            l: s.l,
            groups: s.groups.clone(),
            k: s.k,
            q_gamma: s.q_gamma,
            q_gamma_bound: s.q_gamma.filter(|_| n > 5).map(|q| exceeds_log2_ratio(q, n - 5, 72)),
        })
        .collect();
    let l_n_s = curves.iter().filter_map(|c| c.q_gamma).map(|q| q - 1).min();
    let positive = l_n_s.is_none_or(|l| l > 0);
    let summary = match l_n_s {
        None => "unbounded: no curve constrains the triviality order".to_string(),
        Some(l) if l > 0 => format!("l({},S) = {l}", cert.n),
        Some(l) => format!("l({},S) = {l}: no positive triviality order certified", cert.n),
    };
    BoundReport {
        n: cert.n,
        genus: cert.genus,
        curves,
        l_n_s,
        positive_order_certified: positive,
        l_bound: l_n_s.filter(|_| n > 5).map(|l| exceeds_log2_ratio(l, n - 5, 144)),
        summary,
    }
}
