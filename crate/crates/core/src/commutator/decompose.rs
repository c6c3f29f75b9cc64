//! Rewriting an element of `F^(n)` as a product of simple commutators of
//! length at least `n`.
//!
//! Two moves are combined. The exact move peels a known simple commutator off
//! either end of the reduced remainder: if `t` agrees with `r` on a prefix of
//! more than half of `t`, then `r = t (t^-1 r)` and the second factor is no
//! longer than `r`. Known commutators come from a table of every simple
//! commutator of length `n..=L` over the generators in play, with `L` as large
//! as `dictionary_limit` allows. The search over exact moves is a bounded
//! depth-first search ordered by length gain.
//!
//! When the search fails, one Magnus round runs instead: the lowest-degree
//! component of the remainder is a Lie polynomial of degree `d`, its
//! left-normed coordinates are lifted to simple commutators, and dividing them
//! out pushes the remainder into `F^(d+1)`. The number of rounds is the
//! termination budget. Depth alone never empties a word of a free group, so
//! the rounds only exist to reach a remainder the exact search can finish.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use super::structural;
use super::tree::{CommutatorTree, Shape, Side};
use crate::lie::left_normed_coordinates;
use crate::limits::Limits;
use crate::magnus::{lcs_member_with, magnus_expand_with, MagnusError};
use crate::notation::{flatten, Expr};
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("word is not in F^({0})")]
    NotMember(usize),
    #[error("no decomposition found within {rounds} Magnus rounds")]
    BudgetExceeded { rounds: usize },
    #[error("remainder grew to {len} letters after {rounds} Magnus rounds")]
    RemainderTooLong { len: usize, rounds: usize },
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub factors: Vec<CommutatorTree>,
    /// Magnus rounds spent before the exact search finished.
    pub magnus_rounds: usize,
}

/// Letters packed as `2 * gen + inverse`.
type Code = u8;

const MAX_CODED_GEN: usize = 127;
const BRANCHING: usize = 6;

fn encode(l: Letter) -> Code {
    (l.gen as u8) << 1 | l.inverse as u8
}

fn decode(c: Code) -> Letter {
    Letter { gen: (c >> 1) as usize, inverse: c & 1 == 1 }
}

fn inv(c: Code) -> Code {
    c ^ 1
}

fn reduce_codes(codes: impl IntoIterator<Item = Code>) -> Vec<Code> {
    let mut out: Vec<Code> = Vec::new();
    for c in codes {
        if out.last() == Some(&inv(c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

fn inverse_codes(w: &[Code]) -> impl Iterator<Item = Code> + '_ {
    w.iter().rev().map(|&c| inv(c))
}

/// A simple commutator as its innermost letter followed by `(letter, side)`
/// steps, together with its reduced flattening.
struct Entry {
    path: Vec<(Code, Side)>,
    word: Vec<Code>,
}

impl Entry {
    fn shape(&self) -> Shape {
        let mut it = self.path.iter();
        let &(first, _) = it.next().expect("nonempty path");
        let mut s = Shape::Leaf(decode(first));
        for &(c, side) in it {
            s = Shape::node(s, decode(c), side);
        }
        s
    }
}

/// Entries grouped by reduced length, each group sorted forwards and by
/// reversed word so both prefix and suffix queries are binary searches.
struct Bucket {
    len: usize,
    forward: Vec<u32>,
    backward: Vec<u32>,
}

struct Dictionary {
    entries: Vec<Entry>,
    buckets: Vec<Bucket>,
}

impl Dictionary {
    fn build(gens: &[usize], n: usize, limit: usize) -> Dictionary {
        let letters: Vec<Code> =
            gens.iter().flat_map(|&g| [encode(Letter::pos(g)), encode(Letter::neg(g))]).collect();
        let mut entries = Vec::new();
        let mut level: Vec<Entry> =
            letters.iter().map(|&c| Entry { path: vec![(c, Side::Right)], word: vec![c] }).collect();
        let mut total = level.len();
        let mut length = 1;
        loop {
            if length >= n {
                entries.extend(level.iter().map(|e| Entry { path: e.path.clone(), word: e.word.clone() }));
            }
            let next_size = level.len() * letters.len() * 2;
            if total + next_size > limit || level.is_empty() {
                break;
            }
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for e in &level {
                for &c in &letters {
                    for side in [Side::Right, Side::Left] {
                        let a = e.word.iter().copied();
                        let word = match side {
                            Side::Right => reduce_codes(a.chain([c]).chain(inverse_codes(&e.word)).chain([inv(c)])),
                            Side::Left => reduce_codes([c].into_iter().chain(a).chain([inv(c)]).chain(inverse_codes(&e.word))),
                        };
                        if word.is_empty() || !seen.insert(word.clone()) {
                            continue;
                        }
                        let mut path = e.path.clone();
                        path.push((c, side));
                        next.push(Entry { path, word });
                    }
                }
            }
            total += next.len();
            level = next;
            length += 1;
        }

        let mut by_len: HashMap<usize, Vec<u32>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            by_len.entry(e.word.len()).or_default().push(i as u32);
        }
        let mut buckets: Vec<Bucket> = by_len
            .into_iter()
            .map(|(len, mut forward)| {
                forward.sort_by(|&a, &b| entries[a as usize].word.cmp(&entries[b as usize].word));
                let mut backward = forward.clone();
                backward.sort_by(|&a, &b| {
                    inverse_codes(&entries[a as usize].word).cmp(inverse_codes(&entries[b as usize].word))
                });
                Bucket { len, forward, backward }
            })
            .collect();
        buckets.sort_by_key(|b| b.len);
        Dictionary { entries, buckets }
    }

    /// Every peeling move with nonnegative gain.
    fn moves(&self, r: &[Code]) -> Vec<Move> {
        let mut out = Vec::new();
        for b in &self.buckets {
            let need = b.len.div_ceil(2);
            if need == 0 || need > r.len() {
                continue;
            }
            // prefix of r against entry words
            let key = &r[..need];
            let lo = b.forward.partition_point(|&i| &self.entries[i as usize].word[..need] < key);
            let hi = b.forward.partition_point(|&i| &self.entries[i as usize].word[..need] <= key);
            for &i in &b.forward[lo..hi] {
                let t = &self.entries[i as usize].word;
                let c = t.iter().zip(r).take_while(|(a, b)| a == b).count();
                out.push(Move { entry: i, left: true, common: c, gain: 2 * c - t.len() });
            }
            // suffix of r against entry words, compared through the inverse
            // so that reversed order matches `backward`
            let key: Vec<Code> = inverse_codes(&r[r.len() - need..]).collect();
            let rev_prefix = |i: u32| -> Vec<Code> {
                inverse_codes(&self.entries[i as usize].word).take(need).collect()
            };
            let lo = b.backward.partition_point(|&i| rev_prefix(i) < key);
            let hi = b.backward.partition_point(|&i| rev_prefix(i) <= key);
            for &i in &b.backward[lo..hi] {
                let t = &self.entries[i as usize].word;
                let c = t.iter().rev().zip(r.iter().rev()).take_while(|(a, b)| a == b).count();
                out.push(Move { entry: i, left: false, common: c, gain: 2 * c - t.len() });
            }
        }
        out.sort_by_key(|m| (Reverse(m.gain), !m.left, m.entry));
        out
    }

    fn apply(&self, r: &[Code], m: &Move) -> Vec<Code> {
        let t = &self.entries[m.entry as usize].word;
        if m.left {
            inverse_codes(&t[m.common..]).chain(r[m.common..].iter().copied()).collect()
        } else {
            let keep = r.len() - m.common;
            r[..keep].iter().copied().chain(inverse_codes(&t[..t.len() - m.common])).collect()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Move {
    entry: u32,
    left: bool,
    common: usize,
    gain: usize,
}

struct Frame {
    r: Vec<Code>,
    moves: Vec<Move>,
    next: usize,
}

/// Bounded depth-first search for a sequence of peeling moves that empties
/// `r`. Returns the moves in the order taken.
fn search(dict: &Dictionary, r: Vec<Code>, node_budget: usize) -> Option<Vec<Move>> {
    if r.is_empty() {
        return Some(Vec::new());
    }
    let mut visited: HashSet<Vec<Code>> = HashSet::new();
    visited.insert(r.clone());
    let mut moves = dict.moves(&r);
    moves.truncate(BRANCHING);
    let mut stack = vec![Frame { r, moves, next: 0 }];
    let mut nodes = 1;
    while let Some(top) = stack.last_mut() {
        if top.next >= top.moves.len() {
            stack.pop();
            continue;
        }
        let m = top.moves[top.next];
        top.next += 1;
        let r = dict.apply(&top.r, &m);
        if r.is_empty() {
            let mut path: Vec<Move> = stack.iter().map(|f| f.moves[f.next - 1]).collect();
            path.shrink_to_fit();
            return Some(path);
        }
        if !visited.insert(r.clone()) {
            continue;
        }
        nodes += 1;
        if nodes > node_budget {
            return None;
        }
        let mut moves = dict.moves(&r);
        moves.truncate(BRANCHING);
        stack.push(Frame { r, moves, next: 0 });
    }
    None
}

type CacheKey = (Vec<usize>, usize, usize);

const TIERS: [usize; 2] = [2_000, 20_000];

/// Each Magnus round multiplies the remainder length several times over;
/// past this the exact search has no chance and the next round is slow.
const MAX_REMAINDER: usize = 1024;

/// Factor cap for the structural rewrite of bracket expressions.
pub const STRUCTURAL_CAP: usize = 1 << 16;

/// Decomposition engine. Tables of simple commutators are cached per
/// generator set and minimum length.
pub struct Decomposer {
    limits: Limits,
    cache: Mutex<HashMap<CacheKey, Arc<Dictionary>>>,
}

impl Default for Decomposer {
    fn default() -> Self {
        Decomposer::new(Limits::default())
    }
}

impl Decomposer {
    pub fn new(limits: Limits) -> Self {
        Decomposer { limits, cache: Mutex::new(HashMap::new()) }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    fn dictionary(&self, gens: &BTreeSet<usize>, n: usize, limit: usize) -> Option<Arc<Dictionary>> {
        if gens.is_empty() || gens.iter().any(|&g| g > MAX_CODED_GEN) {
            return None;
        }
        let key = (gens.iter().copied().collect::<Vec<_>>(), n, limit);
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        let dict = cache.entry(key.clone()).or_insert_with(|| Arc::new(Dictionary::build(&key.0, n, limit))).clone();
        (!dict.entries.is_empty()).then_some(dict)
    }

    /// Table sizes to try in turn; big tables are built only when small ones fail.
    fn tiers(&self) -> Vec<usize> {
        let full = self.limits.dictionary_limit;
        let mut t: Vec<usize> = TIERS.iter().copied().filter(|&x| x < full).collect();
        t.push(full);
        t
    }

    fn exact(&self, r: &Word, n: usize) -> Option<Vec<CommutatorTree>> {
        let gens = r.generators();
        let codes: Vec<Code> = r.letters().iter().map(|&l| encode(l)).collect();
        let mut last_size = None;
        for limit in self.tiers() {
            let Some(dict) = self.dictionary(&gens, n, limit) else { continue };
            // a bigger limit may not add a level
            if last_size == Some(dict.entries.len()) {
                continue;
            }
            last_size = Some(dict.entries.len());
            if let Some(path) = search(&dict, codes.clone(), self.limits.search_nodes) {
                let mut front = Vec::new();
                let mut back = Vec::new();
                for m in path {
                    let tree = CommutatorTree::new(r.alphabet().clone(), dict.entries[m.entry as usize].shape());
                    if m.left {
                        front.push(tree);
                    } else {
                        back.push(tree);
                    }
                }
                front.extend(back.into_iter().rev());
                return Some(front);
            }
        }
        None
    }

    /// Simple commutators of length at least `n` whose product freely equals `w`.
    pub fn decompose(&self, w: &Word, n: usize) -> Result<Decomposition, DecomposeError> {
        if n == 0 {
            return Err(MagnusError::ZeroDepth.into());
        }
        if !lcs_member_with(w, n, &self.limits)? {
            return Err(DecomposeError::NotMember(n));
        }
        let alphabet = w.alphabet().clone();
        let mut r = w.reduce();
        let mut factors = Vec::new();
        let mut rounds = 0;
        let budget = self.limits.budget_for(n);
        let mut depth = n;

        if n == 1 {
            factors = r.letters().iter().map(|&l| CommutatorTree::leaf(alphabet.clone(), l)).collect();
            r = Word::empty(alphabet.clone());
        }

        while !r.is_empty() {
            if let Some(found) = self.exact(&r, n) {
                factors.extend(found);
                break;
            }
            if rounds >= budget {
                return Err(DecomposeError::BudgetExceeded { rounds });
            }
            if r.len() > MAX_REMAINDER {
                return Err(DecomposeError::RemainderTooLong { len: r.len(), rounds });
            }
            rounds += 1;
            let (lifted, d) = self.magnus_round(&r, depth)?;
            let product = Word::product(alphabet.clone(), lifted.iter().map(|t| t.flatten()).collect::<Vec<_>>().iter())
                .map_err(|e| DecomposeError::Internal(e.to_string()))?;
            r = product.invert().concat(&r).map_err(|e| DecomposeError::Internal(e.to_string()))?.reduce();
            if !lcs_member_with(&r, d + 1, &self.limits)? {
                return Err(DecomposeError::Internal(format!("Magnus round left the remainder outside F^({})", d + 1)));
            }
            factors.extend(lifted);
            depth = d + 1;
        }

        let out = Decomposition { factors, magnus_rounds: rounds };
        self.check(w, n, &out)?;
        Ok(out)
    }

    /// Like [`Decomposer::decompose`], with the bracket expression at hand.
    /// When the word-level search gives up and every term of `e` has bracket
    /// weight at least `n`, the expression is rewritten by the commutator
    /// identities instead.
    pub fn decompose_expr(&self, e: &Expr, alphabet: Arc<Alphabet>, n: usize) -> Result<Decomposition, DecomposeError> {
        let w = flatten(e, alphabet.clone());
        let err = match self.decompose(&w, n) {
            Ok(d) => return Ok(d),
            Err(err @ (DecomposeError::BudgetExceeded { .. } | DecomposeError::RemainderTooLong { .. })) => err,
            Err(err) => return Err(err),
        };
        if !structural::weight(e).is_some_and(|k| k >= n) {
            return Err(err);
        }
        let Some(shapes) = structural::rewrite(e, STRUCTURAL_CAP) else { return Err(err) };
        let factors = shapes.into_iter().map(|s| CommutatorTree::new(alphabet.clone(), s)).collect();
        let out = Decomposition { factors, magnus_rounds: 0 };
        self.check(&w, n, &out)?;
        Ok(out)
    }

    /// Lift the lowest-degree component of `r`, known to lie in `F^(depth)`.
    fn magnus_round(&self, r: &Word, depth: usize) -> Result<(Vec<CommutatorTree>, usize), DecomposeError> {
        let mut d = depth;
        let component = loop {
            let s = magnus_expand_with(r, d, &self.limits)?;
            let c = s.homogeneous(d);
            if !c.is_empty() {
                break c;
            }
            d += 1;
        };
        let coords = left_normed_coordinates(&component)
            .ok_or_else(|| DecomposeError::Internal(format!("degree-{d} component is not a Lie element")))?;
        let alphabet = r.alphabet().clone();
        let mut out = Vec::new();
        for (mono, c) in coords {
            let letters: Vec<Letter> = mono.iter().map(|&g| Letter::pos(g as usize)).collect();
            let tree = CommutatorTree::left_normed(alphabet.clone(), &letters);
            let copy = if c.is_negative() { tree.inverse() } else { tree };
            let times = c.abs().to_usize().ok_or_else(|| {
                DecomposeError::Internal(format!("coefficient {c} too large to lift"))
            })?;
            out.extend(std::iter::repeat(copy).take(times));
        }
        Ok((out, d))
    }

    fn check(&self, w: &Word, n: usize, d: &Decomposition) -> Result<(), DecomposeError> {
        if let Some(t) = d.factors.iter().find(|t| t.length() < n) {
            return Err(DecomposeError::Internal(format!("factor {t} is shorter than {n}")));
        }
        let flat: Vec<Word> = d.factors.iter().map(|t| t.flatten()).collect();
        let product =
            Word::product(w.alphabet().clone(), flat.iter()).map_err(|e| DecomposeError::Internal(e.to_string()))?;
        if !product.freely_equal(w) {
            return Err(DecomposeError::Internal("factor product differs from the input".into()));
        }
        Ok(())
    }
}

/// Decompose with default limits.
pub fn decompose(w: &Word, n: usize) -> Result<Decomposition, DecomposeError> {
    Decomposer::default().decompose(w, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::lcs_member;
    use crate::notation::{flatten, parse};
    use crate::word::Alphabet;

    fn w(a: &Arc<Alphabet>, text: &str) -> Word {
        flatten(&parse(text, a).unwrap(), a.clone())
    }

    fn assert_sound(input: &Word, n: usize, d: &Decomposition) {
        let flat: Vec<Word> = d.factors.iter().map(|t| t.flatten()).collect();
        let product = Word::product(input.alphabet().clone(), flat.iter()).unwrap();
        assert!(product.freely_equal(input));
        for t in &d.factors {
            assert!(t.length() >= n);
            assert!(lcs_member(&t.flatten(), t.length()).unwrap());
        }
    }

    #[test]
    fn already_simple() {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        let input = w(&a, "[x,y]");
        let d = decompose(&input, 2).unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].flatten().reduce(), input.reduce());
        let input = w(&a, "[x,y][y,z]");
        let d = decompose(&input, 2).unwrap();
        assert_eq!(d.factors.len(), 2);
        assert_sound(&input, 2, &d);
    }

    #[test]
    fn commutator_with_a_product() {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        let input = w(&a, "[x, y z]");
        let d = decompose(&input, 2).unwrap();
        assert_sound(&input, 2, &d);
        assert_eq!(d.factors.len(), 3);
    }

    #[test]
    fn not_a_member() {
        let a = Alphabet::new(["x", "y"]).unwrap();
        assert_eq!(decompose(&w(&a, "[x,y]"), 3).unwrap_err(), DecomposeError::NotMember(3));
        assert_eq!(decompose(&w(&a, "x"), 2).unwrap_err(), DecomposeError::NotMember(2));
    }

    #[test]
    fn depth_one_and_trivial() {
        let a = Alphabet::new(["x", "y"]).unwrap();
        let input = w(&a, "x y^-1 x");
        let d = decompose(&input, 1).unwrap();
        assert_eq!(d.factors.len(), 3);
        assert!(decompose(&w(&a, "x x^-1"), 4).unwrap().factors.is_empty());
    }

    #[test]
    fn magnus_rounds_alone() {
        // no table at all, so only lifted commutators are available
        let a = Alphabet::new(["x", "y"]).unwrap();
        let limits = Limits { dictionary_limit: 0, ..Limits::default() };
        let dec = Decomposer::new(limits);
        let input = w(&a, "[[x,y],y]");
        let d = dec.decompose(&input, 3);
        // the lifted [[x,y],y] matches exactly, leaving nothing
        let d = d.unwrap();
        assert_eq!(d.magnus_rounds, 1);
        assert_sound(&input, 3, &d);
    }

    #[test]
    fn expressions_fall_back_to_structure() {
        use crate::notation::parse_inferring_alphabet;
        let (a, e) = parse_inferring_alphabet("[x, y z]").unwrap();
        let limits = Limits { dictionary_limit: 0, decompose_budget: Some(0), ..Limits::default() };
        let d = Decomposer::new(limits).decompose_expr(&e, a.clone(), 2).unwrap();
        assert_eq!(d.factors.len(), 3);
        assert_sound(&crate::notation::flatten(&e, a), 2, &d);
    }

    #[test]
    fn runaway_remainder_stops() {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        let limits = Limits { decompose_budget: Some(100), ..Limits::default() };
        let err = Decomposer::new(limits).decompose(&w(&a, "[[x,y],[x,z]]"), 4).unwrap_err();
        assert!(matches!(err, DecomposeError::RemainderTooLong { .. }), "{err}");
    }

    #[test]
    fn budget_is_enforced() {
        let a = Alphabet::new(["x", "y"]).unwrap();
        let limits = Limits { dictionary_limit: 0, decompose_budget: Some(0), ..Limits::default() };
        let err = Decomposer::new(limits).decompose(&w(&a, "[x,y]"), 2).unwrap_err();
        assert_eq!(err, DecomposeError::BudgetExceeded { rounds: 0 });
    }

    #[test]
    fn longer_depth_uses_the_table() {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        let input = w(&a, "[[[x,y],z],x^-1] [y,[z,[x,y]]]");
        let d = decompose(&input, 4).unwrap();
        assert_sound(&input, 4, &d);
    }
}
