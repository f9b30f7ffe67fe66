//! Free-group words and automorphisms.
//!
//! Words are run-length encoded sequences of generator letters and are kept
//! freely reduced at all times, so equality in the free group is plain
//! structural equality. Automorphisms are stored as generator-image tables
//! together with explicit inverse images; composition and application never
//! need to invert a general automorphism.

mod parse;

pub use parse::{parse_word, WordExpr};

use crate::error::{Error, Result};

/// A freely reduced word in the free group of the given rank.
///
/// `letters` holds `(generator index, exponent)` runs with 1-based generator
/// indices, adjacent runs on distinct generators and no zero exponents. The
/// empty sequence is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<(usize, i64)>,
}

impl Word {
    /// The identity word.
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The single generator x_i.
    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        Self::from_letters(rank, vec![(i, 1)])
    }

    /// x_i^e (e may be any integer; e = 0 gives the identity).
    pub fn generator_power(rank: usize, i: usize, e: i64) -> Result<Self> {
        if e == 0 {
            Self::check_index(rank, i)?;
            return Ok(Self::identity(rank));
        }
        Self::from_letters(rank, vec![(i, e)])
    }

    fn check_index(rank: usize, i: usize) -> Result<()> {
        if i == 0 || i > rank {
            return Err(Error::IndexOutOfRange { index: i, rank });
        }
        Ok(())
    }

    /// Builds a word from arbitrary letter runs, freely reducing.
    pub fn from_letters(rank: usize, letters: Vec<(usize, i64)>) -> Result<Self> {
        let mut w = Word::identity(rank);
        for (g, e) in letters {
            Self::check_index(rank, g)?;
            w.push_run(g, e);
        }
        Ok(w)
    }

    /// Appends a run, merging with the tail and dropping cancellations.
    fn push_run(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some((tg, te)) if *tg == g => {
                *te += e;
                if *te == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push((g, e)),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Run-length encoded letters `(generator, exponent)`.
    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of runs (not single letters).
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total number of single letters, counting multiplicity.
    pub fn letter_count(&self) -> u64 {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    /// Freely reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push_run(g, e);
        }
        Ok(w)
    }

    /// The group inverse: letters reversed with negated exponents.
    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(g, e)| (g, -e))
                .collect(),
        }
    }

    /// self^k by repeated multiplication.
    pub fn pow(&self, k: i64) -> Word {
        if k == 0 {
            return Word::identity(self.rank);
        }
        let base = if k > 0 { self.clone() } else { self.inverse() };
        let mut out = base.clone();
        for _ in 1..k.abs() {
            out = out.concat(&base).expect("equal ranks");
        }
        out
    }

    /// Commutator [a, b] = a b a^{-1} b^{-1}.
    pub fn commutator(a: &Word, b: &Word) -> Result<Word> {
        a.check_rank(b)?;
        a.concat(b)?.concat(&a.inverse())?.concat(&b.inverse())
    }

    /// `self` conjugated: c · self · c^{-1}.
    pub fn conjugate_by(&self, c: &Word) -> Result<Word> {
        c.concat(self)?.concat(&c.inverse())
    }

    /// Exponent sum of each generator (the image in the abelianization).
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank];
        for &(g, e) in &self.letters {
            sums[g - 1] += e;
        }
        sums
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(g, e) in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", g)?;
            } else {
                write!(f, "x{}^{}", g, e)?;
            }
        }
        Ok(())
    }
}

/// An automorphism of a free group, stored as image and inverse-image tables
/// for the right action x ↦ x^σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

impl Automorphism {
    pub fn identity(rank: usize) -> Self {
        let images: Vec<Word> = (1..=rank)
            .map(|i| Word::generator(rank, i).expect("index in range"))
            .collect();
        Automorphism {
            rank,
            inverse_images: images.clone(),
            images,
        }
    }

    /// Builds an automorphism from explicit image and inverse-image tables,
    /// rejecting pairs that fail the mutual-inverse check.
    pub fn from_images(rank: usize, images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self> {
        if images.len() != rank || inverse_images.len() != rank {
            return Err(Error::NotAnAutomorphism(format!(
                "expected {} images, got {} and {} inverses",
                rank,
                images.len(),
                inverse_images.len()
            )));
        }
        for w in images.iter().chain(inverse_images.iter()) {
            if w.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: w.rank(),
                });
            }
        }
        let auto = Automorphism {
            rank,
            images,
            inverse_images,
        };
        for i in 1..=rank {
            let x = Word::generator(rank, i)?;
            let fwd = substitute(&auto.images[i - 1], &auto.inverse_images);
            if fwd != x {
                return Err(Error::NotAnAutomorphism(format!(
                    "x{} -> {} -> {} != x{}",
                    i,
                    auto.images[i - 1],
                    fwd,
                    i
                )));
            }
            let bwd = substitute(&auto.inverse_images[i - 1], &auto.images);
            if bwd != x {
                return Err(Error::NotAnAutomorphism(format!(
                    "inverse table fails on x{}",
                    i
                )));
            }
        }
        Ok(auto)
    }

    /// Magnus generator K_ij: x_i ↦ x_j^{-1} x_i x_j, all other generators fixed.
    pub fn magnus_conj(rank: usize, i: usize, j: usize) -> Result<Self> {
        Word::check_index(rank, i)?;
        Word::check_index(rank, j)?;
        if i == j {
            return Err(Error::BadParameter(format!(
                "K_{{{},{}}} requires distinct indices",
                i, j
            )));
        }
        let xj = Word::generator(rank, j)?;
        let image = Word::generator(rank, i)?.conjugate_by(&xj.inverse())?;
        let inv = Word::generator(rank, i)?.conjugate_by(&xj)?;
        let mut auto = Automorphism::identity(rank);
        auto.images[i - 1] = image;
        auto.inverse_images[i - 1] = inv;
        Ok(auto)
    }

    /// Magnus generator K_ijl: x_i ↦ x_i [x_j, x_l], all other generators fixed.
    /// K_ijj is the identity and K_ilj = K_ijl^{-1}.
    pub fn magnus_comm(rank: usize, i: usize, j: usize, l: usize) -> Result<Self> {
        Word::check_index(rank, i)?;
        Word::check_index(rank, j)?;
        Word::check_index(rank, l)?;
        if i == j || i == l {
            return Err(Error::BadParameter(format!(
                "K_{{{},{},{}}} requires i distinct from j and l",
                i, j, l
            )));
        }
        let xi = Word::generator(rank, i)?;
        let xj = Word::generator(rank, j)?;
        let xl = Word::generator(rank, l)?;
        let image = xi.concat(&Word::commutator(&xj, &xl)?)?;
        let inv = xi.concat(&Word::commutator(&xl, &xj)?)?;
        let mut auto = Automorphism::identity(rank);
        auto.images[i - 1] = image;
        auto.inverse_images[i - 1] = inv;
        Ok(auto)
    }

    /// The automorphism x_t ↦ x_t · tail with every other generator fixed.
    /// The tail must not involve x_t, so the inverse is x_t ↦ x_t · tail^{-1}.
    pub fn multiplier(rank: usize, t: usize, tail: &Word) -> Result<Self> {
        Word::check_index(rank, t)?;
        if tail.rank() != rank {
            return Err(Error::RankMismatch {
                left: rank,
                right: tail.rank(),
            });
        }
        if tail.letters().iter().any(|&(g, _)| g == t) {
            return Err(Error::BadParameter(format!(
                "multiplier tail {} involves the moved generator x{}",
                tail, t
            )));
        }
        let xt = Word::generator(rank, t)?;
        let mut auto = Automorphism::identity(rank);
        auto.images[t - 1] = xt.concat(tail)?;
        auto.inverse_images[t - 1] = xt.concat(&tail.inverse())?;
        Ok(auto)
    }

    /// Inner automorphism x ↦ g x g^{-1}.
    pub fn inner(g: &Word) -> Self {
        let rank = g.rank();
        let ginv = g.inverse();
        let images = (1..=rank)
            .map(|i| {
                Word::generator(rank, i)
                    .expect("index in range")
                    .conjugate_by(g)
                    .expect("equal ranks")
            })
            .collect();
        let inverse_images = (1..=rank)
            .map(|i| {
                Word::generator(rank, i)
                    .expect("index in range")
                    .conjugate_by(&ginv)
                    .expect("equal ranks")
            })
            .collect();
        Automorphism {
            rank,
            images,
            inverse_images,
        }
    }

    /// The automorphism x_j ↦ x_j [[x_1, x_s], [x_1^m, x_s]], other generators
    /// fixed. The multiplier lies in the second derived subgroup, so the whole
    /// map is in the kernel of the Magnus representation.
    pub fn kernel_generator(rank: usize, m: i64, j: usize, s: usize) -> Result<Self> {
        Word::check_index(rank, j)?;
        Word::check_index(rank, s)?;
        if j == s || j == 1 || s == 1 {
            return Err(Error::BadParameter(format!(
                "kernel generator requires distinct j, s >= 2, got j={}, s={}",
                j, s
            )));
        }
        let x1 = Word::generator(rank, 1)?;
        let xs = Word::generator(rank, s)?;
        let u = Word::commutator(&x1, &xs)?;
        let v = Word::commutator(&x1.pow(m), &xs)?;
        let c = Word::commutator(&u, &v)?;
        let xj = Word::generator(rank, j)?;
        let mut auto = Automorphism::identity(rank);
        auto.images[j - 1] = xj.concat(&c)?;
        auto.inverse_images[j - 1] = xj.concat(&c.inverse())?;
        Ok(auto)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The image x_i^σ.
    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_image(&self, i: usize) -> &Word {
        &self.inverse_images[i - 1]
    }

    /// Applies the automorphism to a word: substitute each letter by its image
    /// and reduce. This is a group homomorphism.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if self.rank != w.rank() {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: w.rank(),
            });
        }
        Ok(substitute(w, &self.images))
    }

    /// The composite στ: apply `self` first, then `tau`.
    pub fn compose(&self, tau: &Automorphism) -> Result<Automorphism> {
        if self.rank != tau.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: tau.rank,
            });
        }
        let images = self
            .images
            .iter()
            .map(|w| substitute(w, &tau.images))
            .collect();
        // (στ)^{-1} = τ^{-1} σ^{-1}
        let inverse_images = tau
            .inverse_images
            .iter()
            .map(|w| substitute(w, &self.inverse_images))
            .collect();
        Ok(Automorphism {
            rank: self.rank,
            images,
            inverse_images,
        })
    }

    /// The inverse automorphism (tables swapped).
    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            rank: self.rank,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [(i + 1, 1)])
    }

    /// True when the automorphism acts trivially on the abelianization.
    pub fn is_ia(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| {
            let sums = w.exponent_sums();
            sums.iter()
                .enumerate()
                .all(|(j, &s)| s == if i == j { 1 } else { 0 })
        })
    }

    /// Rejects non-IA automorphisms with the offending generator index.
    pub fn require_ia(&self) -> Result<()> {
        for (i, w) in self.images.iter().enumerate() {
            let sums = w.exponent_sums();
            let ok = sums
                .iter()
                .enumerate()
                .all(|(j, &s)| s == if i == j { 1 } else { 0 });
            if !ok {
                return Err(Error::NotIa { index: i + 1 });
            }
        }
        Ok(())
    }
}

/// Substitutes `images[g-1]^e` for each run `(g, e)` of `w` and reduces.
fn substitute(w: &Word, images: &[Word]) -> Word {
    let rank = images.first().map_or(w.rank(), Word::rank);
    let mut out = Word::identity(rank);
    for &(g, e) in w.letters() {
        let img = &images[g - 1];
        let (base, count) = if e > 0 {
            (img.clone(), e)
        } else {
            (img.inverse(), -e)
        };
        for _ in 0..count {
            for &(h, f) in base.letters() {
                out.push_run(h, f);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
