//! n-triviality witnesses: `n+1` disjoint nonempty sets of letter positions
//! such that deleting any nonempty union of them trivializes the word.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::commutator::tree::{CommutatorTree, Shape, Side};
use crate::limits::Limits;
use crate::word::{Alphabet, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrivialityError {
    #[error("a witness needs at least one set")]
    NoSets,
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("position {position} is out of range for a word of length {len}")]
    OutOfRange { position: usize, len: usize },
    #[error("position {0} lies in more than one set")]
    Overlap(usize),
    #[error("{sets} sets exceed the exhaustive-check cap of {cap}")]
    CapExceeded { sets: usize, cap: usize },
    #[error("tree of length {length} is too short for {sets} sets")]
    TreeTooShort { length: usize, sets: usize },
    #[error("substitution covers {got} generators, alphabet has {want}")]
    IncompleteMapping { got: usize, want: usize },
    #[error("brute-force search over {0} assignments is above the limit")]
    SearchTooLarge(u128),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A word with a candidate witness collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedWord {
    word: Word,
    sets: Vec<BTreeSet<usize>>,
}

impl MarkedWord {
    pub fn new(word: Word, sets: Vec<BTreeSet<usize>>) -> Result<Self, TrivialityError> {
        if sets.is_empty() {
            return Err(TrivialityError::NoSets);
        }
        let mut seen = BTreeSet::new();
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(TrivialityError::EmptySet(i));
            }
            for &p in s {
                if p >= word.len() {
                    return Err(TrivialityError::OutOfRange { position: p, len: word.len() });
                }
                if !seen.insert(p) {
                    return Err(TrivialityError::Overlap(p));
                }
            }
        }
        Ok(MarkedWord { word, sets })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    /// The `n` of the n-triviality this collection would witness.
    pub fn order(&self) -> usize {
        self.sets.len() - 1
    }
}

/// True iff deleting every nonempty union of the sets leaves the trivial
/// element. All `2^(n+1) - 1` unions are checked.
pub fn verify_witness(mw: &MarkedWord, limits: &Limits) -> Result<bool, TrivialityError> {
    let k = mw.sets.len();
    if k > limits.witness_cap {
        return Err(TrivialityError::CapExceeded { sets: k, cap: limits.witness_cap });
    }
    let mut owner = vec![usize::MAX; mw.word.len()];
    for (i, s) in mw.sets.iter().enumerate() {
        for &p in s {
            owner[p] = i;
        }
    }
    let letters = mw.word.letters();
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for mask in 1u64..(1u64 << k) {
        stack.clear();
        for (l, &o) in letters.iter().zip(&owner) {
            if o != usize::MAX && mask >> o & 1 == 1 {
                continue;
            }
            if stack.last().is_some_and(|t| t.cancels(*l)) {
                stack.pop();
            } else {
                stack.push(*l);
            }
        }
        if !stack.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Witness sets on the bare flattening of a shape, innermost letter first.
fn shape_sets(shape: &Shape) -> Vec<BTreeSet<usize>> {
    match shape {
        Shape::Leaf(_) => vec![BTreeSet::from([0])],
        Shape::Node { sub, side, .. } => {
            let a = sub.flatten_letters().len();
            // offset of the sub copy, and mirror of sub position p in the inverse copy
            let (offset, mirror, letter_set) = match side {
                Side::Right => (0, 2 * a, [a, 2 * a + 1]),
                Side::Left => (1, 2 * a + 1, [0, a + 1]),
            };
            let mut sets: Vec<BTreeSet<usize>> = shape_sets(sub)
                .into_iter()
                .map(|s| s.iter().flat_map(|&p| [offset + p, mirror - p]).collect())
                .collect();
            sets.push(letter_set.into_iter().collect());
            sets
        }
    }
}

/// The witness of a simple quasi-commutator of length `n+1`: one set per
/// bracketed letter and its inverse partner. Inserted pairs are in no set.
pub fn witness_from_tree(t: &CommutatorTree) -> MarkedWord {
    let map = t.bare_to_final();
    let sets = shape_sets(t.shape()).into_iter().map(|s| s.into_iter().map(|p| map[p]).collect()).collect();
    MarkedWord { word: t.flatten(), sets }
}

/// Witness with `n+1` sets for a product of quasi-commutators each of
/// length at least `n+1`. Extra sets of a longer factor merge into its first.
pub fn witness_for_product(trees: &[CommutatorTree], n: usize) -> Result<MarkedWord, TrivialityError> {
    let Some(first) = trees.first() else { return Err(TrivialityError::NoSets) };
    let k = n + 1;
    let mut letters = Vec::new();
    let mut sets = vec![BTreeSet::new(); k];
    for t in trees {
        if t.length() < k {
            return Err(TrivialityError::TreeTooShort { length: t.length(), sets: k });
        }
        let mw = witness_from_tree(t);
        let extra = mw.sets.len() - k;
        let base = letters.len();
        for (i, s) in mw.sets.iter().enumerate() {
            sets[i.saturating_sub(extra)].extend(s.iter().map(|p| p + base));
        }
        letters.extend_from_slice(mw.word.letters());
    }
    let word = Word::new(first.alphabet().clone(), letters)?;
    MarkedWord::new(word, sets)
}

/// Replace every `g^{±1}` by `mapping[g]^{±1}`.
pub fn substitute(w: &Word, mapping: &[Word]) -> Result<Word, TrivialityError> {
    Ok(substitute_with_blocks(w, mapping)?.0)
}

fn substitute_with_blocks(w: &Word, mapping: &[Word]) -> Result<(Word, Vec<(usize, usize)>), TrivialityError> {
    let want = w.alphabet().len();
    if mapping.len() != want {
        return Err(TrivialityError::IncompleteMapping { got: mapping.len(), want });
    }
    let target: Arc<Alphabet> = match mapping.first() {
        Some(m) => m.alphabet().clone(),
        None => w.alphabet().clone(),
    };
    let mut blocks = Vec::with_capacity(w.len());
    let mut parts = Vec::with_capacity(w.len());
    let mut at = 0;
    for l in w.letters() {
        let image = &mapping[l.gen];
        let image = if l.inverse { image.invert() } else { image.clone() };
        blocks.push((at, at + image.len()));
        at += image.len();
        parts.push(image);
    }
    Ok((Word::product(target, parts.iter())?, blocks))
}

/// Result of carrying a witness through a substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PushOutcome {
    Witness(MarkedWord),
    /// Some sets lost all their positions; `empty` lists them.
    Degenerate { word: Word, sets: Vec<BTreeSet<usize>>, empty: Vec<usize> },
}

/// Substitute and expand every witness position to the block its letter
/// produced.
pub fn push_witness(mw: &MarkedWord, mapping: &[Word]) -> Result<PushOutcome, TrivialityError> {
    let (word, blocks) = substitute_with_blocks(&mw.word, mapping)?;
    let sets: Vec<BTreeSet<usize>> =
        mw.sets.iter().map(|s| s.iter().flat_map(|&p| blocks[p].0..blocks[p].1).collect()).collect();
    let empty: Vec<usize> = sets.iter().enumerate().filter(|(_, s)| s.is_empty()).map(|(i, _)| i).collect();
    if empty.is_empty() {
        Ok(PushOutcome::Witness(MarkedWord { word, sets }))
    } else {
        Ok(PushOutcome::Degenerate { word, sets, empty })
    }
}

/// Largest number of assignments `brute_witness` will enumerate.
pub const BRUTE_LIMIT: u128 = 2_000_000;

/// Exhaustive search for an `n`-triviality witness in a short word.
/// Sets are labelled in order of first use to skip relabellings.
pub fn brute_witness(w: &Word, n: usize, limits: &Limits) -> Result<Option<MarkedWord>, TrivialityError> {
    let k = n + 1;
    if k > limits.witness_cap {
        return Err(TrivialityError::CapExceeded { sets: k, cap: limits.witness_cap });
    }
    let space = (k as u128 + 1).checked_pow(w.len() as u32).unwrap_or(u128::MAX);
    if space > BRUTE_LIMIT {
        return Err(TrivialityError::SearchTooLarge(space));
    }
    if k > w.len() {
        return Ok(None);
    }
    // label[p] = 0 for "no set", otherwise set index + 1
    let mut label = vec![0usize; w.len()];
    fn go(
        p: usize,
        used: usize,
        label: &mut Vec<usize>,
        w: &Word,
        k: usize,
        limits: &Limits,
    ) -> Result<Option<MarkedWord>, TrivialityError> {
        if label.len() - p < k - used {
            return Ok(None);
        }
        if p == label.len() {
            let mut sets = vec![BTreeSet::new(); k];
            for (q, &l) in label.iter().enumerate() {
                if l > 0 {
                    sets[l - 1].insert(q);
                }
            }
            let mw = MarkedWord::new(w.clone(), sets)?;
            return Ok(verify_witness(&mw, limits)?.then_some(mw));
        }
        for l in 0..=(used + 1).min(k) {
            label[p] = l;
            if let Some(found) = go(p + 1, used.max(l), label, w, k, limits)? {
                return Ok(Some(found));
            }
        }
        label[p] = 0;
        Ok(None)
    }
    go(0, 0, &mut label, w, k, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{flatten, parse};

    fn xyz() -> Arc<Alphabet> {
        Alphabet::new(["x", "y", "z"]).unwrap()
    }

    fn tree(a: &Arc<Alphabet>, text: &str) -> CommutatorTree {
        CommutatorTree::new(a.clone(), Shape::from_expr(&parse(text, a).unwrap()).unwrap())
    }

    fn sets(v: &[&[usize]]) -> Vec<BTreeSet<usize>> {
        v.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn commutator_witnesses() {
        let a = xyz();
        let w = flatten(&parse("[x,y]", &a).unwrap(), a.clone());
        let lim = Limits::default();
        assert!(verify_witness(&MarkedWord::new(w.clone(), sets(&[&[0, 2], &[1, 3]])).unwrap(), &lim).unwrap());
        assert!(!verify_witness(&MarkedWord::new(w.clone(), sets(&[&[0], &[1]])).unwrap(), &lim).unwrap());
        assert_eq!(MarkedWord::new(w, vec![]), Err(TrivialityError::NoSets));

        let mw = witness_from_tree(&tree(&a, "[x,y]"));
        assert_eq!(mw.sets(), sets(&[&[0, 2], &[1, 3]]).as_slice());
        let mw = witness_from_tree(&tree(&a, "[[x,y],y^-1]"));
        assert_eq!(mw.word().len(), 10);
        assert_eq!(mw.sets().len(), 3);
        assert!(verify_witness(&mw, &lim).unwrap());
        let mw = witness_from_tree(&tree(&a, "x"));
        assert_eq!(mw.sets(), sets(&[&[0]]).as_slice());
        assert!(verify_witness(&mw, &lim).unwrap());
    }

    #[test]
    fn left_slot_trees() {
        let a = xyz();
        for text in ["[x,[y,z]]", "[z^-1,[[x,y],y]]", "[[y,[x^-1,z]],x]"] {
            let mw = witness_from_tree(&tree(&a, text));
            assert!(verify_witness(&mw, &Limits::default()).unwrap(), "{text}");
        }
    }

    #[test]
    fn insertions_are_skipped() {
        use crate::commutator::tree::Insertion;
        let a = xyz();
        let t = tree(&a, "[x,y]").with_insertions(vec![Insertion { position: 1, letter: Letter::pos(2) }]).unwrap();
        let mw = witness_from_tree(&t);
        assert_eq!(mw.sets(), sets(&[&[0, 4], &[3, 5]]).as_slice());
        assert!(verify_witness(&mw, &Limits::default()).unwrap());
    }

    #[test]
    fn products() {
        let a = xyz();
        let mw = witness_for_product(&[tree(&a, "[x,y]"), tree(&a, "[y,z]")], 1).unwrap();
        assert_eq!(mw.word().len(), 8);
        assert_eq!(mw.sets().len(), 2);
        assert!(verify_witness(&mw, &Limits::default()).unwrap());
        let mixed = witness_for_product(&[tree(&a, "[[x,y],z]"), tree(&a, "[y,z]")], 1).unwrap();
        assert!(verify_witness(&mixed, &Limits::default()).unwrap());
        assert_eq!(witness_for_product(&[], 1), Err(TrivialityError::NoSets));
        assert!(matches!(
            witness_for_product(&[tree(&a, "[y,z]")], 2),
            Err(TrivialityError::TreeTooShort { length: 2, sets: 3 })
        ));
    }

    #[test]
    fn substitution_pushes_witnesses() {
        let a = xyz();
        let b = Alphabet::new(["a", "b", "y"]).unwrap();
        let mw = witness_from_tree(&tree(&a, "[x,y]"));
        let ab = flatten(&parse("a b", &b).unwrap(), b.clone());
        let mapping = vec![ab, Word::generator(b.clone(), 2).unwrap(), Word::empty(b.clone())];
        let PushOutcome::Witness(pushed) = push_witness(&mw, &mapping).unwrap() else { panic!() };
        assert_eq!(pushed.word().len(), 6);
        assert_eq!(pushed.sets(), sets(&[&[0, 1, 3, 4], &[2, 5]]).as_slice());
        assert!(verify_witness(&pushed, &Limits::default()).unwrap());

        let identity: Vec<Word> = (0..3).map(|g| Word::generator(a.clone(), g).unwrap()).collect();
        assert_eq!(push_witness(&mw, &identity).unwrap(), PushOutcome::Witness(mw.clone()));

        let kill_x = vec![Word::empty(a.clone()), identity[1].clone(), identity[2].clone()];
        let PushOutcome::Degenerate { empty, .. } = push_witness(&mw, &kill_x).unwrap() else { panic!() };
        assert_eq!(empty, vec![0]);
    }

    #[test]
    fn brute_force() {
        let a = xyz();
        let w = flatten(&parse("[x,y]", &a).unwrap(), a.clone());
        let found = brute_witness(&w, 1, &Limits::default()).unwrap().unwrap();
        assert!(verify_witness(&found, &Limits::default()).unwrap());
        assert_eq!(brute_witness(&w, 2, &Limits::default()).unwrap(), None);
        let long = Word::new(a.clone(), vec![Letter::pos(0); 40]).unwrap();
        assert!(matches!(brute_witness(&long, 1, &Limits::default()), Err(TrivialityError::SearchTooLarge(_))));
    }
}
