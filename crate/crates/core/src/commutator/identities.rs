//! Witt–Hall commutator identities, assembled as explicit words.
//!
//! (b) and (c) hold exactly in any group; (a), (d), (e) hold modulo a lower
//! central term and are checked with the Magnus criterion.

use thiserror::Error;

use crate::limits::Limits;
use crate::magnus::{lcs_member_with, MagnusError};
use crate::word::{Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error("input `{name}` is not in F^({depth})")]
    Uncertified { name: &'static str, depth: usize },
}

fn comm(a: &Word, b: &Word) -> Result<Word, WordError> {
    Word::commutator(a, b)
}

fn cat(ws: &[&Word]) -> Result<Word, WordError> {
    Word::product(ws[0].alphabet().clone(), ws.iter().copied())
}

/// `[x, zy]` and `[x, z] [x, y] [[y, x], z]`.
pub fn witt_hall_b(x: &Word, z: &Word, y: &Word) -> Result<(Word, Word), WordError> {
    let lhs = comm(x, &z.concat(y)?)?;
    let rhs = cat(&[&comm(x, z)?, &comm(x, y)?, &comm(&comm(y, x)?, z)?])?;
    Ok((lhs, rhs))
}

/// `[xy, z]` and `[y, z] [[z, y], x] [x, z]`.
pub fn witt_hall_c(x: &Word, y: &Word, z: &Word) -> Result<(Word, Word), WordError> {
    let lhs = comm(&x.concat(y)?, z)?;
    let rhs = cat(&[&comm(y, z)?, &comm(&comm(z, y)?, x)?, &comm(x, z)?])?;
    Ok((lhs, rhs))
}

/// Inputs for the congruence forms of the identities. Depths are claims that
/// get verified before the congruence itself is tested.
#[derive(Debug, Clone)]
pub enum Congruence {
    /// `x in F^(k)`, `y in F^(m)`: `xy = yx mod F^(k+m)`.
    Commute { x: Word, k: usize, y: Word, m: usize },
    /// `x in F^(k)`, `y in F^(m)`, `z in F^(l)`:
    /// `[x,[y,z]] [y,[z,x]] [z,[x,y]] = 1 mod F^(k+l+m+1)`.
    Jacobi { x: Word, k: usize, y: Word, m: usize, z: Word, l: usize },
    /// `g = g' mod F^(k)`, `y in F^(m)`: `[g,y] = [g',y]` and
    /// `[y,g] = [y,g']` mod `F^(k+m)`.
    Substitute { g: Word, g_prime: Word, k: usize, y: Word, m: usize },
}

impl Congruence {
    /// The words whose membership in `F^(modulus)` is the congruence.
    pub fn differences(&self) -> Result<(Vec<Word>, usize), WordError> {
        Ok(match self {
            Congruence::Commute { x, k, y, m } => {
                let d = cat(&[x, y, &x.invert(), &y.invert()])?;
                (vec![d], k + m)
            }
            Congruence::Jacobi { x, k, y, m, z, l } => {
                let d = cat(&[&comm(x, &comm(y, z)?)?, &comm(y, &comm(z, x)?)?, &comm(z, &comm(x, y)?)?])?;
                (vec![d], k + l + m + 1)
            }
            Congruence::Substitute { g, g_prime, k, y, m } => {
                let left = comm(g, y)?.concat(&comm(g_prime, y)?.invert())?;
                let right = comm(y, g)?.concat(&comm(y, g_prime)?.invert())?;
                (vec![left, right], k + m)
            }
        })
    }

    fn certify(&self, limits: &Limits) -> Result<(), IdentityError> {
        let claims: Vec<(&'static str, Word, usize)> = match self {
            Congruence::Commute { x, k, y, m } => vec![("x", x.clone(), *k), ("y", y.clone(), *m)],
            Congruence::Jacobi { x, k, y, m, z, l } => {
                vec![("x", x.clone(), *k), ("y", y.clone(), *m), ("z", z.clone(), *l)]
            }
            Congruence::Substitute { g, g_prime, k, y, m } => {
                vec![("g g'^-1", g.concat(&g_prime.invert())?, *k), ("y", y.clone(), *m)]
            }
        };
        for (name, w, depth) in claims {
            if depth == 0 || !lcs_member_with(&w, depth, limits)? {
                return Err(IdentityError::Uncertified { name, depth });
            }
        }
        Ok(())
    }
}

/// Verify the depth claims, then test the congruence with the Magnus criterion.
pub fn check_whi_congruence(c: &Congruence, limits: &Limits) -> Result<bool, IdentityError> {
    c.certify(limits)?;
    let (diffs, modulus) = c.differences()?;
    for d in diffs {
        if !lcs_member_with(&d, modulus, limits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{flatten, parse};
    use crate::word::Alphabet;
    use std::sync::Arc;

    fn abc() -> Arc<Alphabet> {
        Alphabet::new(["x", "y", "z"]).unwrap()
    }

    fn w(text: &str) -> Word {
        let a = abc();
        if text.is_empty() {
            return Word::empty(a);
        }
        flatten(&parse(text, &a).unwrap(), a.clone())
    }

    #[test]
    fn b_and_c_on_letters() {
        let (l, r) = witt_hall_b(&w("x"), &w("z"), &w("y")).unwrap();
        assert!(l.freely_equal(&r));
        let (l, r) = witt_hall_b(&w("x"), &w("z"), &w("")).unwrap();
        assert_eq!(l, w("[x,z]"));
        assert!(r.freely_equal(&w("[x,z]")));
        let (l, r) = witt_hall_c(&w("x"), &w("y"), &w("z")).unwrap();
        assert!(l.freely_equal(&r));
        let (l, r) = witt_hall_c(&w(""), &w("y"), &w("z")).unwrap();
        assert!(l.freely_equal(&r));
    }

    #[test]
    fn congruences() {
        let lim = Limits::default();
        let a = Congruence::Commute { x: w("[x,y]"), k: 2, y: w("[y,z]"), m: 2 };
        assert!(check_whi_congruence(&a, &lim).unwrap());
        let d = Congruence::Jacobi { x: w("x"), k: 1, y: w("y"), m: 1, z: w("z"), l: 1 };
        assert!(check_whi_congruence(&d, &lim).unwrap());
        let e = Congruence::Substitute { g: w("x y"), g_prime: w("x y"), k: 5, y: w("z"), m: 1 };
        assert!(check_whi_congruence(&e, &lim).unwrap());
        // (a) does not hold one degree higher
        let (diffs, _) = a.differences().unwrap();
        assert!(!lcs_member_with(&diffs[0], 5, &lim).unwrap());
    }

    #[test]
    fn uncertified_depths_are_errors() {
        let bad = Congruence::Commute { x: w("x"), k: 2, y: w("y"), m: 1 };
        assert_eq!(
            check_whi_congruence(&bad, &Limits::default()),
            Err(IdentityError::Uncertified { name: "x", depth: 2 })
        );
    }
}
