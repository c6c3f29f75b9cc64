//! Seeded random words and commutators for property checks.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commutator::tree::{CommutatorTree, Shape, Side};
use crate::word::{Alphabet, Letter, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn letter<R: Rng>(rng: &mut R, gens: usize) -> Letter {
    Letter { gen: rng.gen_range(0..gens), inverse: rng.gen_bool(0.5) }
}

/// Unreduced word of length `0..=max_len`.
pub fn word<R: Rng>(rng: &mut R, alphabet: &Arc<Alphabet>, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len).map(|_| letter(rng, alphabet.len())).collect();
    Word::new(alphabet.clone(), letters).expect("letters drawn from the alphabet")
}

/// Simple commutator of the given length with random letters and sides.
pub fn shape<R: Rng>(rng: &mut R, gens: usize, length: usize) -> Shape {
    let mut s = Shape::Leaf(letter(rng, gens));
    for _ in 1..length {
        let side = if rng.gen_bool(0.5) { Side::Right } else { Side::Left };
        s = Shape::node(s, letter(rng, gens), side);
    }
    s
}

/// A simple commutator whose flattening is not freely trivial.
pub fn nontrivial_tree<R: Rng>(rng: &mut R, alphabet: &Arc<Alphabet>, length: usize) -> CommutatorTree {
    loop {
        let t = CommutatorTree::new(alphabet.clone(), shape(rng, alphabet.len(), length));
        if !t.flatten().is_trivial() {
            return t;
        }
    }
}
