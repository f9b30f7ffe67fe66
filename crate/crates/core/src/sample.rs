//! Deterministic random generators for words and automorphisms, used by the
//! randomized verifiers and property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::word::{Automorphism, Word};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A freely reduced word with exactly `len` single letters (adjacent
    /// inverse letters are never generated).
    pub fn word(&mut self, rank: usize, len: usize) -> Word {
        let mut letters: Vec<(usize, i64)> = Vec::new();
        let mut last: Option<(usize, i64)> = None;
        for _ in 0..len {
            loop {
                let g = self.rng.gen_range(1..=rank);
                let e: i64 = if self.rng.gen::<bool>() { 1 } else { -1 };
                if let Some((lg, le)) = last {
                    if lg == g && le == -e {
                        continue;
                    }
                }
                letters.push((g, e));
                last = Some((g, e));
                break;
            }
        }
        Word::from_letters(rank, letters).expect("indices in range")
    }

    /// A word with zero exponent sum on x1 modulo d (an element of W_{n,d}).
    pub fn kernel_word(&mut self, rank: usize, d: usize, len: usize) -> Word {
        let w = self.word(rank, len);
        let residue = w.exponent_sums()[0].rem_euclid(d as i64);
        w.concat(&Word::generator_power(rank, 1, -residue).unwrap())
            .unwrap()
    }

    /// An element of the commutator subgroup: a product of `pieces` simple
    /// commutators of random words.
    pub fn commutator_word(&mut self, rank: usize, pieces: usize) -> Word {
        let mut w = Word::identity(rank);
        for _ in 0..pieces.max(1) {
            let lu = self.rng.gen_range(1..=5);
            let lv = self.rng.gen_range(1..=5);
            let u = self.word(rank, lu);
            let v = self.word(rank, lv);
            w = w.concat(&Word::commutator(&u, &v).unwrap()).unwrap();
        }
        w
    }

    /// An element of the second derived subgroup: a commutator of two
    /// commutator-subgroup elements.
    pub fn second_derived_word(&mut self, rank: usize) -> Word {
        let pa = self.rng.gen_range(1..=2);
        let pb = self.rng.gen_range(1..=2);
        let a = self.commutator_word(rank, pa);
        let b = self.commutator_word(rank, pb);
        Word::commutator(&a, &b).unwrap()
    }

    /// A random Magnus generator K_ij or K_ijl.
    pub fn magnus_generator(&mut self, rank: usize) -> Automorphism {
        loop {
            if self.rng.gen::<bool>() || rank < 3 {
                let i = self.rng.gen_range(1..=rank);
                let j = self.rng.gen_range(1..=rank);
                if i != j {
                    return Automorphism::magnus_conj(rank, i, j).unwrap();
                }
            } else {
                let i = self.rng.gen_range(1..=rank);
                let j = self.rng.gen_range(1..=rank);
                let l = self.rng.gen_range(1..=rank);
                if i != j && i != l && j != l {
                    return Automorphism::magnus_comm(rank, i, j, l).unwrap();
                }
            }
        }
    }

    /// A product of `parts` random IA generators (Magnus generators and
    /// inner automorphisms), possibly inverted.
    pub fn ia_automorphism(&mut self, rank: usize, parts: usize) -> Automorphism {
        let mut auto = Automorphism::identity(rank);
        for _ in 0..parts.max(1) {
            let piece = if self.rng.gen_range(0..4) == 0 {
                let len = self.rng.gen_range(1..=4);
                Automorphism::inner(&self.word(rank, len))
            } else {
                self.magnus_generator(rank)
            };
            let piece = if self.rng.gen::<bool>() {
                piece.inverse()
            } else {
                piece
            };
            auto = auto.compose(&piece).unwrap();
        }
        auto
    }

    pub fn gen_range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }
}
