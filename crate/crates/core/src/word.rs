//! Words in a free group over a finite, named alphabet.
//!
//! A [`Word`] keeps the literal letter sequence it was built from. Free
//! reduction is always an explicit call to [`Word::reduce`]; nothing in this
//! module cancels letters behind the caller's back, because n-triviality
//! witnesses address letters of one particular unreduced presentation by
//! position.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet mismatch: [{left}] vs [{right}]")]
    AlphabetMismatch { left: String, right: String },
    #[error("position {pos} out of range for a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("generator index {index} not in an alphabet of size {size}")]
    UnknownGenerator { index: usize, size: usize },
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
}

/// An ordered set of generator names. Generator `i` is `names[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for name in names {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(WordError::InvalidName(name));
            }
            if out.contains(&name) {
                return Err(WordError::DuplicateName(name));
            }
            out.push(name);
        }
        Ok(Arc::new(Alphabet { names: out }))
    }

    /// The dual generators `x1, y1, ..., xg, yg` of a genus `g` surface complement.
    pub fn surface(genus: usize) -> Arc<Self> {
        let names = (1..=genus).flat_map(|i| [format!("x{i}"), format!("y{i}")]);
        Alphabet::new(names).expect("surface names are valid and distinct")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The alphabet with the generators in `killed` removed, plus the map from
    /// old indices to new ones (`None` for removed generators).
    pub fn without(&self, killed: &BTreeSet<usize>) -> (Arc<Alphabet>, Vec<Option<usize>>) {
        let mut names = Vec::new();
        let mut map = Vec::with_capacity(self.len());
        for (i, name) in self.names.iter().enumerate() {
            if killed.contains(&i) {
                map.push(None);
            } else {
                map.push(Some(names.len()));
                names.push(name.clone());
            }
        }
        (Arc::new(Alphabet { names }), map)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn with_sign(gen: usize, sign: i32) -> Self {
        Letter { gen, inverse: sign < 0 }
    }

    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// A (possibly unreduced) word over an [`Alphabet`].
#[derive(Debug, Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && same_alphabet(&self.alphabet, &other.alphabet)
    }
}

impl Eq for Word {}

fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Word {
    pub fn new(alphabet: Arc<Alphabet>, letters: Vec<Letter>) -> Result<Self, WordError> {
        if let Some(bad) = letters.iter().find(|l| l.gen >= alphabet.len()) {
            return Err(WordError::UnknownGenerator { index: bad.gen, size: alphabet.len() });
        }
        Ok(Word { alphabet, letters })
    }

    pub(crate) fn from_letters_unchecked(alphabet: Arc<Alphabet>, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|l| l.gen < alphabet.len()));
        Word { alphabet, letters }
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Word { alphabet, letters: Vec::new() }
    }

    pub fn generator(alphabet: Arc<Alphabet>, gen: usize) -> Result<Self, WordError> {
        Word::new(alphabet, vec![Letter::pos(gen)])
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn check_alphabet(&self, other: &Word) -> Result<(), WordError> {
        if same_alphabet(&self.alphabet, &other.alphabet) {
            Ok(())
        } else {
            Err(WordError::AlphabetMismatch {
                left: self.alphabet.names.join(","),
                right: other.alphabet.names.join(","),
            })
        }
    }

    /// Free reduction with a single stack pass.
    pub fn reduce(&self) -> Word {
        Word { alphabet: self.alphabet.clone(), letters: reduce_letters(&self.letters) }
    }

    /// True iff the word represents the identity.
    pub fn is_trivial(&self) -> bool {
        reduce_letters(&self.letters).is_empty()
    }

    /// Equality in the free group.
    pub fn freely_equal(&self, other: &Word) -> bool {
        same_alphabet(&self.alphabet, &other.alphabet)
            && reduce_letters(&self.letters) == reduce_letters(&other.letters)
    }

    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        self.check_alphabet(other)?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word { alphabet: self.alphabet.clone(), letters })
    }

    /// Concatenate a sequence of words over one alphabet.
    pub fn product<'a, I>(alphabet: Arc<Alphabet>, words: I) -> Result<Word, WordError>
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let mut acc = Word::empty(alphabet);
        for w in words {
            acc.check_alphabet(w)?;
            acc.letters.extend_from_slice(&w.letters);
        }
        Ok(acc)
    }

    pub fn invert(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| l.inv()).collect();
        Word { alphabet: self.alphabet.clone(), letters }
    }

    /// `u v u^-1 v^-1`, unreduced.
    pub fn commutator(u: &Word, v: &Word) -> Result<Word, WordError> {
        u.check_alphabet(v)?;
        let mut letters = Vec::with_capacity(2 * (u.len() + v.len()));
        letters.extend_from_slice(&u.letters);
        letters.extend_from_slice(&v.letters);
        letters.extend(u.letters.iter().rev().map(|l| l.inv()));
        letters.extend(v.letters.iter().rev().map(|l| l.inv()));
        Ok(Word { alphabet: u.alphabet.clone(), letters })
    }

    /// `w^k` as a literal repetition (of `w^-1` for negative `k`).
    pub fn power(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let reps = k.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * reps);
        for _ in 0..reps {
            letters.extend_from_slice(&base.letters);
        }
        Word { alphabet: self.alphabet.clone(), letters }
    }

    /// Remove the letters at `positions` from the stored sequence. Positions
    /// always index this literal (unreduced) word.
    pub fn delete_positions(&self, positions: &BTreeSet<usize>) -> Result<Word, WordError> {
        if let Some(&pos) = positions.iter().next_back() {
            if pos >= self.len() {
                return Err(WordError::PositionOutOfRange { pos, len: self.len() });
            }
        }
        let letters = self
            .letters
            .iter()
            .enumerate()
            .filter(|(i, _)| !positions.contains(i))
            .map(|(_, l)| *l)
            .collect();
        Ok(Word { alphabet: self.alphabet.clone(), letters })
    }

    /// Image under the quotient by the normal closure of `killed`: the
    /// killed letters are deleted and the result reduced. The alphabet is
    /// unchanged; use [`Word::restrict_to_quotient`] to drop the killed names.
    pub fn kill_generators(&self, killed: &BTreeSet<usize>) -> Word {
        let kept: Vec<Letter> =
            self.letters.iter().filter(|l| !killed.contains(&l.gen)).copied().collect();
        Word { alphabet: self.alphabet.clone(), letters: reduce_letters(&kept) }
    }

    /// Kill `killed` and rewrite the result over the smaller alphabet of
    /// surviving generators, on which the quotient group is free.
    pub fn restrict_to_quotient(&self, killed: &BTreeSet<usize>) -> Word {
        let (alphabet, map) = self.alphabet.without(killed);
        let letters = self
            .kill_generators(killed)
            .letters
            .iter()
            .map(|l| Letter { gen: map[l.gen].expect("killed letters removed"), inverse: l.inverse })
            .collect();
        Word { alphabet, letters }
    }

    /// Distinct generators occurring in the stored sequence.
    pub fn generators(&self) -> BTreeSet<usize> {
        self.letters.iter().map(|l| l.gen).collect()
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.alphabet.len()];
        for l in &self.letters {
            sums[l.gen] += l.sign() as i64;
        }
        sums
    }

    pub fn with_alphabet(&self, alphabet: Arc<Alphabet>) -> Result<Word, WordError> {
        Word::new(alphabet, self.letters.clone())
    }
}

pub(crate) fn reduce_letters(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        match out.last() {
            Some(&top) if top.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::print(self))
    }
}
