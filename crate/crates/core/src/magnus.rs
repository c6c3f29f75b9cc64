//! Truncated noncommutative power series with integer coefficients, the
//! Magnus embedding `x -> 1 + X`, and the membership test for the lower
//! central series: `w` lies in `F^(m)` iff its expansion has no nonconstant
//! terms of degree below `m`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::limits::Limits;
use crate::word::{Alphabet, Word};

/// A monomial is a sequence of generator indices.
pub type Monomial = Vec<u16>;

/// A homogeneous (or arbitrary) polynomial as a sparse coefficient map.
pub type Poly = BTreeMap<Monomial, BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagnusError {
    #[error("truncation caps differ ({0} vs {1})")]
    CapMismatch(usize, usize),
    #[error("alphabet sizes differ ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error("refusing cap {cap} over {gens} generators: {gens}^{cap} monomials exceeds the limit {limit}")]
    TooManyMonomials { gens: usize, cap: usize, limit: u128 },
    #[error("depth must be at least 1")]
    ZeroDepth,
}

/// Noncommutative polynomial truncated above degree `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    cap: usize,
    rank: usize,
    terms: Poly,
}

impl TruncatedSeries {
    pub fn zero(rank: usize, cap: usize) -> Self {
        TruncatedSeries { cap, rank, terms: Poly::new() }
    }

    pub fn one(rank: usize, cap: usize) -> Self {
        let mut s = Self::zero(rank, cap);
        s.terms.insert(Vec::new(), BigInt::one());
        s
    }

    /// Build from arbitrary terms; zero coefficients and monomials longer than
    /// `cap` are dropped.
    pub fn from_terms<I>(rank: usize, cap: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut s = Self::zero(rank, cap);
        for (m, c) in terms {
            assert!(m.iter().all(|&g| (g as usize) < rank), "monomial outside the alphabet");
            if m.len() <= cap {
                s.add_term(m, c);
            }
        }
        s
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &Poly {
        &self.terms
    }

    pub fn coeff(&self, m: &[u16]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Vec::new()).is_some_and(|c| c.is_one())
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), MagnusError> {
        if self.cap != other.cap {
            return Err(MagnusError::CapMismatch(self.cap, other.cap));
        }
        if self.rank != other.rank {
            return Err(MagnusError::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MagnusError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MagnusError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// Truncated noncommutative product.
    pub fn mul(&self, other: &Self) -> Result<Self, MagnusError> {
        self.check(other)?;
        let mut out = Self::zero(self.rank, self.cap);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.len() + b.len() > self.cap {
                    continue;
                }
                let mut m = Vec::with_capacity(a.len() + b.len());
                m.extend_from_slice(a);
                m.extend_from_slice(b);
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    /// Right multiplication by `1 + X_gen`.
    fn mul_generator(&mut self, gen: u16) {
        let additions: Vec<(Monomial, BigInt)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.len() < self.cap)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2.push(gen);
                (m2, c.clone())
            })
            .collect();
        for (m, c) in additions {
            self.add_term(m, c);
        }
    }

    /// Right multiplication by `(1 + X_gen)^-1 = 1 - X + X^2 - ...`, computed
    /// as the solution `t` of `t (1 + X) = s`, degree by degree.
    fn mul_generator_inverse(&mut self, gen: u16) {
        let mut by_len: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); self.cap + 1];
        for (m, c) in std::mem::take(&mut self.terms) {
            by_len[m.len()].push((m, c));
        }
        let mut prev: Vec<(Monomial, BigInt)> = Vec::new();
        for bucket in by_len {
            let mut level = Poly::new();
            for (m, c) in bucket {
                level.insert(m, c);
            }
            for (m, c) in prev {
                let mut m2 = m;
                m2.push(gen);
                let e = level.entry(m2).or_default();
                *e -= c;
            }
            level.retain(|_, c| !c.is_zero());
            prev = level.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
            self.terms.extend(level);
        }
    }

    /// Degree-`d` part.
    pub fn homogeneous(&self, d: usize) -> Poly {
        self.terms.iter().filter(|(m, _)| m.len() == d).map(|(m, c)| (m.clone(), c.clone())).collect()
    }

    /// Smallest positive degree with a nonzero term, if any.
    pub fn lowest_nonconstant_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).filter(|&l| l > 0).min()
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        format_poly(&self.terms, alphabet)
    }
}

/// Human-readable `1 + x*y - y*x` (generators stand for `X_i`).
pub fn format_poly(p: &Poly, alphabet: &Alphabet) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut terms: Vec<(&Monomial, &BigInt)> = p.iter().collect();
    terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));
    let mut s = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let mono = if m.is_empty() {
            String::new()
        } else {
            m.iter().map(|&g| alphabet.name(g as usize)).collect::<Vec<_>>().join("*")
        };
        let mag = c.abs();
        let body = match (mono.is_empty(), mag.is_one()) {
            (true, _) => mag.to_string(),
            (false, true) => mono,
            (false, false) => format!("{mag}*{mono}"),
        };
        if i == 0 {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    s
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.rank).map(|i| format!("X{i}")).collect();
        let a = Alphabet::new(names).expect("X<i> names are valid");
        f.write_str(&format_poly(&self.terms, &a))
    }
}

fn guard(w: &Word, cap: usize, limits: &Limits) -> Result<(), MagnusError> {
    let gens = w.generators().len();
    let count = (gens as u128).checked_pow(cap as u32).unwrap_or(u128::MAX);
    if gens > 1 && count > limits.monomial_limit {
        return Err(MagnusError::TooManyMonomials { gens, cap, limit: limits.monomial_limit });
    }
    Ok(())
}

/// Magnus expansion of `w` truncated at degree `cap`, with default limits.
pub fn magnus_expand(w: &Word, cap: usize) -> Result<TruncatedSeries, MagnusError> {
    magnus_expand_with(w, cap, &Limits::default())
}

/// Magnus expansion of `w` truncated at degree `cap`. The monomial guard
/// counts only generators that occur in `w`.
pub fn magnus_expand_with(w: &Word, cap: usize, limits: &Limits) -> Result<TruncatedSeries, MagnusError> {
    guard(w, cap, limits)?;
    let mut s = TruncatedSeries::one(w.alphabet().len(), cap);
    for l in w.letters() {
        if l.inverse {
            s.mul_generator_inverse(l.gen as u16);
        } else {
            s.mul_generator(l.gen as u16);
        }
    }
    Ok(s)
}

/// Membership of `w` in the `m`-th lower central term `F^(m)`.
pub fn lcs_member(w: &Word, m: usize) -> Result<bool, MagnusError> {
    lcs_member_with(w, m, &Limits::default())
}

pub fn lcs_member_with(w: &Word, m: usize, limits: &Limits) -> Result<bool, MagnusError> {
    if m == 0 {
        return Err(MagnusError::ZeroDepth);
    }
    if m == 1 {
        return Ok(true);
    }
    let reduced = w.reduce();
    if reduced.is_empty() {
        return Ok(true);
    }
    // Exponent sums are the degree-1 part; checking them first is cheap.
    if reduced.exponent_sums().iter().any(|&s| s != 0) {
        return Ok(false);
    }
    Ok(magnus_expand_with(&reduced, m - 1, limits)?.is_one())
}

/// Largest `d <= max_depth` with `w` in `F^(d)`.
pub fn lcs_depth(w: &Word, max_depth: usize, limits: &Limits) -> Result<usize, MagnusError> {
    if max_depth <= 1 {
        return Ok(max_depth.max(1));
    }
    let reduced = w.reduce();
    if reduced.exponent_sums().iter().any(|&s| s != 0) {
        return Ok(1);
    }
    let s = magnus_expand_with(&reduced, max_depth - 1, limits)?;
    Ok(s.lowest_nonconstant_degree().unwrap_or(max_depth))
}
