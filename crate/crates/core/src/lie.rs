//! Homogeneous Lie polynomials over the integers.
//!
//! The lowest nonvanishing Magnus component of an element of `F^(d)` is a
//! Lie polynomial of degree `d`. To peel it off with simple commutators we
//! need its coordinates on left-normed brackets `[..[[a1,a2],a3],..,ad]`.
//! We get them in two integral steps: first coordinates on the Lyndon basis
//! (unitriangular against the lexicographic order), then each standard
//! bracketing rewritten into left-normed form with the Jacobi identity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::magnus::{Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieTree {
    Gen(u16),
    Bracket(Box<LieTree>, Box<LieTree>),
}

pub fn is_lyndon(w: &[u16]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard bracketing of a Lyndon word: `w = u v` with `v` the longest
/// proper Lyndon suffix.
pub fn standard_bracketing(w: &[u16]) -> LieTree {
    debug_assert!(is_lyndon(w));
    if w.len() == 1 {
        return LieTree::Gen(w[0]);
    }
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("last letter is Lyndon");
    LieTree::Bracket(Box::new(standard_bracketing(&w[..split])), Box::new(standard_bracketing(&w[split..])))
}

fn add_into(p: &mut Poly, m: Monomial, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let e = p.entry(m.clone()).or_default();
    *e += c;
    if e.is_zero() {
        p.remove(&m);
    }
}

/// Associative expansion `[p, q] = pq - qp`.
pub fn expand(t: &LieTree) -> Poly {
    match t {
        LieTree::Gen(g) => [(vec![*g], BigInt::one())].into_iter().collect(),
        LieTree::Bracket(a, b) => {
            let (pa, pb) = (expand(a), expand(b));
            let mut out = Poly::new();
            for (u, cu) in &pa {
                for (v, cv) in &pb {
                    add_into(&mut out, [u.as_slice(), v].concat(), cu * cv);
                    add_into(&mut out, [v.as_slice(), u].concat(), -(cu * cv));
                }
            }
            out
        }
    }
}

/// Expansion of the left-normed bracket on the letters of `u`.
pub fn expand_left_normed(u: &[u16]) -> Poly {
    let mut it = u.iter();
    let Some(&first) = it.next() else { return Poly::new() };
    let mut t = LieTree::Gen(first);
    for &g in it {
        t = LieTree::Bracket(Box::new(t), Box::new(LieTree::Gen(g)));
    }
    expand(&t)
}

/// Coordinates of a Lie polynomial on the Lyndon basis, or `None` when `p`
/// is not a Lie polynomial.
pub fn lyndon_coordinates(p: &Poly) -> Option<Vec<(Monomial, BigInt)>> {
    let mut rest = p.clone();
    let mut out = Vec::new();
    while let Some((w, c)) = rest.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
        if !is_lyndon(&w) || out.len() > 1_000_000 {
            return None;
        }
        for (m, cm) in expand(&standard_bracketing(&w)) {
            add_into(&mut rest, m, -(&c * cm));
        }
        if rest.contains_key(&w) {
            return None;
        }
        out.push((w, c));
    }
    Some(out)
}

fn append(p: BTreeMap<Monomial, BigInt>, g: u16) -> BTreeMap<Monomial, BigInt> {
    p.into_iter()
        .map(|(mut m, c)| {
            m.push(g);
            (m, c)
        })
        .collect()
}

fn merge(into: &mut BTreeMap<Monomial, BigInt>, from: BTreeMap<Monomial, BigInt>, sign: i32) {
    for (m, c) in from {
        add_into(into, m, if sign < 0 { -c } else { c });
    }
}

/// `[l(u), l(v)]` as a combination of left-normed brackets, keyed by the
/// bracketed letter sequence.
fn bracket_left_normed(u: &[u16], v: &[u16]) -> BTreeMap<Monomial, BigInt> {
    if v.len() == 1 {
        return [([u, v].concat(), BigInt::one())].into_iter().collect();
    }
    let (head, b) = v.split_at(v.len() - 1);
    // [A, [C, b]] = [[A, C], b] - [[A, b], C]
    let mut out = append(bracket_left_normed(u, head), b[0]);
    merge(&mut out, bracket_left_normed(&[u, b].concat(), head), -1);
    out
}

/// Rewrite a bracket tree as an integer combination of left-normed brackets.
pub fn to_left_normed(t: &LieTree) -> BTreeMap<Monomial, BigInt> {
    match t {
        LieTree::Gen(g) => [(vec![*g], BigInt::one())].into_iter().collect(),
        LieTree::Bracket(a, b) => {
            let (la, lb) = (to_left_normed(a), to_left_normed(b));
            let mut out = BTreeMap::new();
            for (u, cu) in &la {
                for (v, cv) in &lb {
                    for (m, c) in bracket_left_normed(u, v) {
                        add_into(&mut out, m, c * cu * cv);
                    }
                }
            }
            out
        }
    }
}

/// Integer coordinates of a Lie polynomial on left-normed brackets.
/// Brackets that vanish identically (first two letters equal) are dropped.
/// Returns `None` when `p` is not a Lie polynomial.
pub fn left_normed_coordinates(p: &Poly) -> Option<BTreeMap<Monomial, BigInt>> {
    let mut out = BTreeMap::new();
    for (w, c) in lyndon_coordinates(p)? {
        for (m, cm) in to_left_normed(&standard_bracketing(&w)) {
            add_into(&mut out, m, cm * &c);
        }
    }
    out.retain(|m: &Monomial, _| m.len() < 2 || m[0] != m[1]);
    Some(out)
}
