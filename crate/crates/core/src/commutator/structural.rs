//! Rewriting a bracket expression into simple commutators using its
//! structure instead of its flattening.
//!
//! Intermediate results are products of conjugates `g t g^-1` with `t`
//! simple. Products distribute over brackets by
//! `[xy, z] = x[y,z]x^-1 [x,z]` and `[x, yz] = [x,y] y[x,z]y^-1`; a bracket
//! of two simple commutators recurses on the second through a Hall-Witt
//! rearrangement. A conjugate is unwound one letter at a time with
//! `a t a^-1 = [a, t] t`, which doubles the factor count per letter, so the
//! whole rewrite runs under a factor cap.

use crate::notation::Expr;
use crate::word::Letter;

use super::tree::{Shape, Side};

#[derive(Debug, Clone)]
struct Piece {
    conj: Vec<Letter>,
    shape: Shape,
}

fn reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|&p| p.cancels(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn inverse(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inv()).collect()
}

fn flat(pieces: &[Piece]) -> Vec<Letter> {
    let mut out = Vec::new();
    for p in pieces {
        out.extend_from_slice(&p.conj);
        out.extend(p.shape.flatten_letters());
        out.extend(inverse(&p.conj));
    }
    reduce(out)
}

fn conj(g: &[Letter], pieces: Vec<Piece>) -> Vec<Piece> {
    if g.is_empty() {
        return pieces;
    }
    pieces
        .into_iter()
        .map(|p| Piece { conj: reduce(g.iter().copied().chain(p.conj)), shape: p.shape })
        .collect()
}

fn invert(pieces: Vec<Piece>) -> Vec<Piece> {
    pieces.into_iter().rev().map(|p| Piece { conj: p.conj, shape: p.shape.inverse() }).collect()
}

/// Lowest length any factor of the rewrite can have: brackets add, products
/// take the minimum. `None` for expressions that are syntactically trivial.
pub fn weight(e: &Expr) -> Option<usize> {
    match e {
        Expr::Gen { exp, .. } => (*exp != 0).then_some(1),
        Expr::Bracket(a, b) => Some(weight(a)? + weight(b)?),
        Expr::Product(fs) => fs.iter().filter_map(weight).min(),
        Expr::Power(inner, k) => {
            if *k == 0 {
                None
            } else {
                weight(inner)
            }
        }
    }
}

struct Rewriter {
    cap: usize,
    made: usize,
}

impl Rewriter {
    fn charge(&mut self, k: usize) -> Option<()> {
        self.made = self.made.saturating_add(k);
        (self.made <= self.cap).then_some(())
    }

    fn expr(&mut self, e: &Expr) -> Option<Vec<Piece>> {
        let out = match e {
            Expr::Gen { gen, exp } => {
                let l = Letter::with_sign(*gen, exp.signum() as i32);
                let n = exp.unsigned_abs() as usize;
                self.charge(n)?;
                vec![Piece { conj: Vec::new(), shape: Shape::Leaf(l) }; n]
            }
            Expr::Product(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    out.extend(self.expr(f)?);
                }
                out
            }
            Expr::Power(inner, k) => {
                let mut one = self.expr(inner)?;
                if *k < 0 {
                    one = invert(one);
                }
                let n = k.unsigned_abs() as usize;
                self.charge(one.len().saturating_mul(n))?;
                std::iter::repeat(one).take(n).flatten().collect()
            }
            Expr::Bracket(..) if Shape::from_expr(e).is_some() => {
                self.charge(1)?;
                vec![Piece { conj: Vec::new(), shape: Shape::from_expr(e)? }]
            }
            Expr::Bracket(a, b) => {
                let p = self.expr(a)?;
                let q = self.expr(b)?;
                self.bracket(&p, &q)?
            }
        };
        Some(out)
    }

    fn bracket(&mut self, p: &[Piece], q: &[Piece]) -> Option<Vec<Piece>> {
        let mut out = Vec::new();
        // [p1..pn, Q] = prod over i = n..1 of (p1..p(i-1)) [pi, Q] (..)^-1
        for i in (0..p.len()).rev() {
            let g = flat(&p[..i]);
            let mut inner = Vec::new();
            for j in 0..q.len() {
                let h = flat(&q[..j]);
                inner.extend(conj(&h, self.single(&p[i], &q[j])?));
            }
            out.extend(conj(&g, inner));
        }
        Some(out)
    }

    /// `[g u g^-1, h v h^-1] = g [u, (g^-1 h) v (g^-1 h)^-1] g^-1`
    fn single(&mut self, a: &Piece, b: &Piece) -> Option<Vec<Piece>> {
        let k = reduce(inverse(&a.conj).into_iter().chain(b.conj.iter().copied()));
        Some(conj(&a.conj, self.simple(&a.shape, &k, &b.shape)?))
    }

    /// `[u, k v k^-1]` for simple `u` and `v`, by induction on the shorter one.
    fn simple(&mut self, u: &Shape, k: &[Letter], v: &Shape) -> Option<Vec<Piece>> {
        if u.length() < v.length() {
            // [u, k v k^-1] = k [v, k^-1 u k]^-1 k^-1
            return Some(conj(k, invert(self.simple(v, &inverse(k), u)?)));
        }
        match v {
            Shape::Leaf(l) => {
                let word = reduce(k.iter().copied().chain([*l]).chain(inverse(k)));
                self.bracket_letters(u, &word)
            }
            Shape::Node { side: Side::Left, .. } => {
                // [x, y^-1] = y^-1 [x, y]^-1 y
                let w = v.inverse();
                let y = reduce(k.iter().copied().chain(w.flatten_letters()).chain(inverse(k)));
                Some(conj(&inverse(&y), invert(self.simple(u, k, &w)?)))
            }
            Shape::Node { sub, letter, side: Side::Right } => {
                // With Y = k v' k^-1, Z = k c k^-1 and X = Z^-1 u Z:
                // [u, [Y, Z]] = [[u, Z^-1], X Y X^-1] [[X, Y], Y Z Y^-1]
                let z = reduce(k.iter().copied().chain([*letter]).chain(inverse(k)));
                let zi = inverse(&z);
                let x = reduce(zi.iter().copied().chain(u.flatten_letters()).chain(z.iter().copied()));
                let y = reduce(k.iter().copied().chain(sub.flatten_letters()).chain(inverse(k)));

                let u_zi = self.bracket_letters(u, &zi)?;
                let xk = reduce(x.iter().copied().chain(k.iter().copied()));
                let first = self.bracket(&u_zi, &[Piece { conj: xk, shape: (**sub).clone() }])?;

                let zk = reduce(z.iter().copied().chain(k.iter().copied()));
                let xy = conj(&zi, self.simple(u, &zk, sub)?);
                let yzy = reduce(y.iter().copied().chain(z.iter().copied()).chain(inverse(&y)));
                let letters: Vec<Piece> =
                    yzy.iter().map(|&l| Piece { conj: Vec::new(), shape: Shape::Leaf(l) }).collect();
                let second = self.bracket(&xy, &letters)?;

                let mut out = first;
                out.extend(second);
                Some(out)
            }
        }
    }

    /// `[u, w]` for a literal word `w`, by `[u, ab] = [u,a] a[u,b]a^-1`.
    fn bracket_letters(&mut self, u: &Shape, w: &[Letter]) -> Option<Vec<Piece>> {
        self.charge(w.len())?;
        Some(
            w.iter()
                .enumerate()
                .map(|(i, &c)| Piece { conj: w[..i].to_vec(), shape: Shape::node(u.clone(), c, Side::Right) })
                .collect(),
        )
    }
}

/// Unwinds `g t g^-1` into simple commutators.
fn unwind(p: Piece, out: &mut Vec<Shape>) {
    let mut factors = vec![p.shape];
    for &a in p.conj.iter().rev() {
        factors = factors.into_iter().flat_map(|s| [Shape::node(s.clone(), a, Side::Left), s]).collect();
    }
    out.extend(factors);
}

/// Simple commutators, each at least `weight(e)` long, whose product freely
/// equals the flattening of `e`. `None` when the rewrite would exceed `cap`
/// factors.
pub fn rewrite(e: &Expr, cap: usize) -> Option<Vec<Shape>> {
    let mut r = Rewriter { cap, made: 0 };
    let pieces = r.expr(e)?;
    let mut total: usize = 0;
    for p in &pieces {
        let n = u32::try_from(p.conj.len()).ok().and_then(|len| 1usize.checked_shl(len))?;
        total = total.checked_add(n)?;
        if total > cap {
            return None;
        }
    }
    let mut out = Vec::with_capacity(total);
    for p in pieces {
        unwind(p, &mut out);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{flatten, parse_inferring_alphabet};
    use crate::word::Word;

    fn product(shapes: &[Shape], like: &Word) -> Word {
        let letters = shapes.iter().flat_map(|s| s.flatten_letters()).collect();
        Word::new(like.alphabet().clone(), letters).unwrap()
    }

    fn sound(text: &str) -> usize {
        let (a, e) = parse_inferring_alphabet(text).unwrap();
        let w = flatten(&e, a);
        let n = weight(&e).unwrap();
        let shapes = rewrite(&e, 1 << 16).unwrap_or_else(|| panic!("cap hit for {text}"));
        assert!(product(&shapes, &w).freely_equal(&w), "{text}");
        assert!(shapes.iter().all(|s| s.length() >= n), "{text}");
        shapes.len()
    }

    #[test]
    fn weights() {
        let w = |t: &str| weight(&parse_inferring_alphabet(t).unwrap().1);
        assert_eq!(w("[[x,y],[x,z]]"), Some(4));
        assert_eq!(w("[x,y] z"), Some(1));
        assert_eq!(w("[x, y z]"), Some(2));
    }

    #[test]
    fn simple_input_is_kept() {
        assert_eq!(sound("[[x,y],z]"), 1);
        assert_eq!(sound("[x, [y, [z, x]]]"), 1);
        assert_eq!(sound("[x, y z]"), 3);
    }

    #[test]
    fn brackets_of_commutators() {
        sound("[x, y z]");
        sound("[[x,y],[x,z]]");
        sound("[[x,y^-1],[z,x]]");
        sound("[[x,y]^2, [z^-1,x] y]");
        sound("[x, [y, [z, x]]]");
    }

    #[test]
    fn cap_is_respected() {
        let (_, e) = parse_inferring_alphabet("[[x,y],[x,z]]").unwrap();
        assert!(rewrite(&e, 100).is_none());
    }
}
