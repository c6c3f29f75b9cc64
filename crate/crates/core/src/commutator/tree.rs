use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::notation::{print_letter, Expr};
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("insertion at {position} does not fit a word of final length {len}")]
    InsertionOutOfRange { position: usize, len: usize },
    #[error("insertions at {0} and {1} overlap")]
    OverlappingInsertions(usize, usize),
}

/// Which slot of the bracket holds the single letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `[A, x]`
    Right,
    /// `[x, A]`
    Left,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

/// Bracket structure of a simple commutator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Leaf(Letter),
    Node { sub: Box<Shape>, letter: Letter, side: Side },
}

impl Shape {
    pub fn length(&self) -> usize {
        match self {
            Shape::Leaf(_) => 1,
            Shape::Node { sub, .. } => sub.length() + 1,
        }
    }

    pub fn node(sub: Shape, letter: Letter, side: Side) -> Shape {
        Shape::Node { sub: Box::new(sub), letter, side }
    }

    /// `[..[[a1, a2], a3], .., ad]`
    pub fn left_normed(letters: &[Letter]) -> Shape {
        let mut it = letters.iter();
        let mut s = Shape::Leaf(*it.next().expect("at least one letter"));
        for &l in it {
            s = Shape::node(s, l, Side::Right);
        }
        s
    }

    /// `[A, x]^-1 = [x, A]` letter for letter, so inversion flips the
    /// outermost slot. A leaf inverts its letter.
    pub fn inverse(&self) -> Shape {
        match self {
            Shape::Leaf(l) => Shape::Leaf(l.inv()),
            Shape::Node { sub, letter, side } => {
                Shape::Node { sub: sub.clone(), letter: *letter, side: side.flip() }
            }
        }
    }

    pub fn flatten_letters(&self) -> Vec<Letter> {
        match self {
            Shape::Leaf(l) => vec![*l],
            Shape::Node { sub, letter, side } => {
                let a = sub.flatten_letters();
                let inv_a = a.iter().rev().map(|l| l.inv());
                let mut out = Vec::with_capacity(2 * a.len() + 2);
                match side {
                    Side::Right => {
                        out.extend_from_slice(&a);
                        out.push(*letter);
                        out.extend(inv_a);
                        out.push(letter.inv());
                    }
                    Side::Left => {
                        out.push(*letter);
                        out.extend_from_slice(&a);
                        out.push(letter.inv());
                        out.extend(inv_a);
                    }
                }
                out
            }
        }
    }

    /// Letters bracketed in, innermost first.
    pub fn letters(&self) -> Vec<Letter> {
        match self {
            Shape::Leaf(l) => vec![*l],
            Shape::Node { sub, letter, .. } => {
                let mut v = sub.letters();
                v.push(*letter);
                v
            }
        }
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        match self {
            Shape::Leaf(l) => print_letter(alphabet, *l),
            Shape::Node { sub, letter, side: Side::Right } => {
                format!("[{}, {}]", sub.to_text(alphabet), print_letter(alphabet, *letter))
            }
            Shape::Node { sub, letter, side: Side::Left } => {
                format!("[{}, {}]", print_letter(alphabet, *letter), sub.to_text(alphabet))
            }
        }
    }

    /// Read a simple-commutator shape off a parsed expression, if it has one.
    pub fn from_expr(e: &Expr) -> Option<Shape> {
        fn single(e: &Expr) -> Option<Letter> {
            match e {
                Expr::Gen { gen, exp } if exp.abs() == 1 => Some(Letter::with_sign(*gen, *exp as i32)),
                Expr::Product(fs) if fs.len() == 1 => single(&fs[0]),
                _ => None,
            }
        }
        if let Some(l) = single(e) {
            return Some(Shape::Leaf(l));
        }
        match e {
            Expr::Bracket(a, b) => {
                if let Some(l) = single(b) {
                    Some(Shape::node(Shape::from_expr(a)?, l, Side::Right))
                } else {
                    let l = single(a)?;
                    Some(Shape::node(Shape::from_expr(b)?, l, Side::Left))
                }
            }
            Expr::Power(inner, -1) => match Shape::from_expr(inner)? {
                s @ Shape::Node { .. } => Some(s.inverse()),
                _ => None,
            },
            _ => None,
        }
    }
}

/// A canceling pair `letter letter^-1` occupying positions `position` and
/// `position + 1` of the flattened quasi-commutator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Insertion {
    pub position: usize,
    pub letter: Letter,
}

/// A simple quasi-commutator: a simple commutator plus canceling pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorTree {
    alphabet: Arc<Alphabet>,
    shape: Shape,
    insertions: Vec<Insertion>,
}

impl CommutatorTree {
    pub fn new(alphabet: Arc<Alphabet>, shape: Shape) -> Self {
        assert!(shape.letters().iter().all(|l| l.gen < alphabet.len()), "letter outside alphabet");
        CommutatorTree { alphabet, shape, insertions: Vec::new() }
    }

    pub fn leaf(alphabet: Arc<Alphabet>, letter: Letter) -> Self {
        Self::new(alphabet, Shape::Leaf(letter))
    }

    pub fn left_normed(alphabet: Arc<Alphabet>, letters: &[Letter]) -> Self {
        Self::new(alphabet, Shape::left_normed(letters))
    }

    /// Attach canceling pairs; positions refer to the final flattened word
    /// and pairs may not overlap.
    pub fn with_insertions(mut self, mut insertions: Vec<Insertion>) -> Result<Self, TreeError> {
        insertions.sort_by_key(|i| i.position);
        let len = self.shape.flatten_letters().len() + 2 * insertions.len();
        for w in insertions.windows(2) {
            if w[1].position < w[0].position + 2 {
                return Err(TreeError::OverlappingInsertions(w[0].position, w[1].position));
            }
        }
        if let Some(last) = insertions.last() {
            if last.position + 1 >= len {
                return Err(TreeError::InsertionOutOfRange { position: last.position, len });
            }
        }
        assert!(insertions.iter().all(|i| i.letter.gen < self.alphabet.len()), "letter outside alphabet");
        self.insertions = insertions;
        Ok(self)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn insertions(&self) -> &[Insertion] {
        &self.insertions
    }

    pub fn length(&self) -> usize {
        self.shape.length()
    }

    /// The commutator without its canceling pairs.
    pub fn flatten_bare(&self) -> Word {
        Word::from_letters_unchecked(self.alphabet.clone(), self.shape.flatten_letters())
    }

    /// For each bare position, its index in the flattened word with
    /// insertions spliced in.
    pub fn bare_to_final(&self) -> Vec<usize> {
        let bare = self.shape.flatten_letters().len();
        let mut map = Vec::with_capacity(bare);
        let mut ins = self.insertions.iter().peekable();
        let mut pos = 0;
        while map.len() < bare {
            if ins.peek().is_some_and(|i| i.position == pos) {
                ins.next();
                pos += 2;
                continue;
            }
            map.push(pos);
            pos += 1;
        }
        map
    }

    pub fn flatten(&self) -> Word {
        let bare = self.shape.flatten_letters();
        let mut out = Vec::with_capacity(bare.len() + 2 * self.insertions.len());
        let mut ins = self.insertions.iter().peekable();
        let mut it = bare.into_iter();
        loop {
            if let Some(i) = ins.peek().filter(|i| i.position == out.len()) {
                out.push(i.letter);
                out.push(i.letter.inv());
                ins.next();
                continue;
            }
            match it.next() {
                Some(l) => out.push(l),
                None => break,
            }
        }
        Word::from_letters_unchecked(self.alphabet.clone(), out)
    }

    /// The inverse quasi-commutator; the flattening is reversed and inverted.
    pub fn inverse(&self) -> Self {
        let len = self.flatten().len();
        let insertions =
            self.insertions.iter().map(|i| Insertion { position: len - 2 - i.position, letter: i.letter }).collect();
        CommutatorTree { alphabet: self.alphabet.clone(), shape: self.shape.inverse(), insertions }
            .with_insertions_sorted()
    }

    fn with_insertions_sorted(mut self) -> Self {
        self.insertions.sort_by_key(|i| i.position);
        self
    }

    pub fn to_text(&self) -> String {
        self.shape.to_text(&self.alphabet)
    }
}

impl fmt::Display for CommutatorTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())?;
        for i in &self.insertions {
            write!(f, " +{}@{}", print_letter(&self.alphabet, i.letter), i.position)?;
        }
        Ok(())
    }
}
