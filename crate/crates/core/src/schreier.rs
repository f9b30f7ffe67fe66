//! The subgroups W_{n,d} = ker(F_n → C_d, x_1 ↦ s, x_i ↦ 1): Schreier
//! transversal {1, x_1, …, x_1^{d-1}}, the free basis
//!
//! ```text
//! b_0 = x_1^d,   b_{k,i} = x_1^k x_i x_1^{-k}   (i = 2..n, k = 0..d-1)
//! ```
//!
//! rewriting of kernel words over that basis, and restriction of IA
//! automorphisms to automorphisms of W_{n,d}.
//!
//! Rewriting is a single left-to-right scan carrying the coset state x_1^c
//! with c an integer mod d; letters of x_1 move the state and emit b_0 on
//! wrap-around, all other letters emit b_{c,i}.

use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Automorphism, Word};

/// Transversal, basis and index bookkeeping for one W_{n,d}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupContext {
    n: usize,
    d: usize,
    basis: Vec<Word>,
}

/// Exponent sum of x_1 modulo d (the image in the cyclic group C_d, with the
/// generator written additively).
pub fn cyclic_image(w: &Word, d: usize) -> usize {
    w.exponent_sums()[0].rem_euclid(d as i64) as usize
}

/// Builds the Schreier data for W_{n,d}; requires n ≥ 2 and d ≥ 2.
pub fn build_context(n: usize, d: usize) -> Result<SubgroupContext> {
    if n < 2 || d < 2 {
        return Err(Error::BadParameter(format!(
            "W_{{n,d}} requires n >= 2 and d >= 2, got n={}, d={}",
            n, d
        )));
    }
    let mut basis = Vec::with_capacity(d * (n - 1) + 1);
    basis.push(Word::generator_power(n, 1, d as i64)?);
    for i in 2..=n {
        for k in 0..d {
            let xi = Word::generator(n, i)?;
            basis.push(xi.conjugate_by(&Word::generator_power(n, 1, k as i64)?)?);
        }
    }
    Ok(SubgroupContext { n, d, basis })
}

impl SubgroupContext {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The rank of W_{n,d}: d(n-1) + 1.
    pub fn subgroup_rank(&self) -> usize {
        self.d * (self.n - 1) + 1
    }

    /// Basis words in order: b_0, then b_{k,i} for i = 2..n with k = 0..d-1.
    pub fn basis_words(&self) -> &[Word] {
        &self.basis
    }

    /// 1-based basis word for a W-alphabet letter index.
    pub fn basis_word(&self, beta: usize) -> &Word {
        &self.basis[beta - 1]
    }

    /// W-alphabet index of b_{k,i}; b_0 has index 1.
    pub fn letter_index(&self, k: usize, i: usize) -> usize {
        debug_assert!(i >= 2 && i <= self.n && k < self.d);
        2 + (i - 2) * self.d + k
    }

    /// Printable name of a W-alphabet letter: `b0` or `b[k,i]`.
    pub fn letter_name(&self, beta: usize) -> String {
        if beta == 1 {
            "b0".to_string()
        } else {
            let off = beta - 2;
            let i = off / self.d + 2;
            let k = off % self.d;
            format!("b[{},{}]", k, i)
        }
    }

    /// Maps a word over the W-alphabet back into F_n by substituting the
    /// basis words and reducing.
    pub fn evaluate(&self, sw: &SubgroupWord) -> Word {
        let mut out = Word::identity(self.n);
        for &(beta, e) in sw.word.letters() {
            let base = if e > 0 {
                self.basis[beta - 1].clone()
            } else {
                self.basis[beta - 1].inverse()
            };
            for _ in 0..e.abs() {
                out = out.concat(&base).expect("equal ranks");
            }
        }
        out
    }
}

/// A word of W_{n,d} in Schreier coordinates: a reduced word over the
/// basis alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupWord {
    n: usize,
    d: usize,
    word: Word,
}

impl SubgroupWord {
    /// The underlying word over the basis alphabet (rank d(n-1)+1).
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_identity()
    }
}

impl fmt::Display for SubgroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        let ctx_name = |beta: usize| {
            if beta == 1 {
                "b0".to_string()
            } else {
                let off = beta - 2;
                format!("b[{},{}]", off % self.d, off / self.d + 2)
            }
        };
        let mut first = true;
        for &(beta, e) in self.word.letters() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", ctx_name(beta))?;
            } else {
                write!(f, "{}^{}", ctx_name(beta), e)?;
            }
        }
        Ok(())
    }
}

/// Reidemeister–Schreier rewriting of a kernel word over the basis of
/// W_{n,d}. Fails if the word is not in the kernel.
pub fn rewrite(w: &Word, ctx: &SubgroupContext) -> Result<SubgroupWord> {
    if w.rank() != ctx.n {
        return Err(Error::RankMismatch {
            left: ctx.n,
            right: w.rank(),
        });
    }
    let residue = cyclic_image(w, ctx.d);
    if residue != 0 {
        return Err(Error::NotInSubgroup {
            residue: residue as i64,
            modulus: ctx.d,
        });
    }
    let rank_w = ctx.subgroup_rank();
    let mut out: Vec<(usize, i64)> = Vec::new();
    let mut push = |g: usize, e: i64| {
        if e == 0 {
            return;
        }
        match out.last_mut() {
            Some((tg, te)) if *tg == g => {
                *te += e;
                if *te == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    };
    let mut state = 0usize;
    for &(g, e) in w.letters() {
        if g == 1 {
            if e > 0 {
                for _ in 0..e {
                    state += 1;
                    if state == ctx.d {
                        state = 0;
                        push(1, 1);
                    }
                }
            } else {
                for _ in 0..(-e) {
                    if state == 0 {
                        state = ctx.d - 1;
                        push(1, -1);
                    } else {
                        state -= 1;
                    }
                }
            }
        } else {
            push(ctx.letter_index(state, g), e);
        }
    }
    debug_assert_eq!(state, 0);
    Ok(SubgroupWord {
        n: ctx.n,
        d: ctx.d,
        word: Word::from_letters(rank_w, out)?,
    })
}

/// Restriction of an IA automorphism of F_n to W_{n,d}, expressed over the
/// basis alphabet. The result carries a verified inverse table.
pub fn restrict(sigma: &Automorphism, ctx: &SubgroupContext) -> Result<Automorphism> {
    sigma.require_ia()?;
    if sigma.rank() != ctx.n {
        return Err(Error::RankMismatch {
            left: ctx.n,
            right: sigma.rank(),
        });
    }
    let inv = sigma.inverse();
    let mut images = Vec::with_capacity(ctx.subgroup_rank());
    let mut inverse_images = Vec::with_capacity(ctx.subgroup_rank());
    for b in &ctx.basis {
        images.push(rewrite(&sigma.apply(b)?, ctx)?.word);
        inverse_images.push(rewrite(&inv.apply(b)?, ctx)?.word);
    }
    Automorphism::from_images(ctx.subgroup_rank(), images, inverse_images)
}

/// True iff the automorphism of W_{n,d} acts trivially on its
/// abelianization U_{n,d}.
pub fn ia_w_member(sigma_w: &Automorphism) -> bool {
    sigma_w.is_ia()
}
