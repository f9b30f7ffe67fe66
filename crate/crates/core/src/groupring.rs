//! Exact arithmetic in the abelianization H ≅ Z^n, the Laurent group ring
//! Z[H], formal integer combinations of words (Z[F_n]), and square matrices
//! over Z[H]. Coefficients are arbitrary-precision throughout.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::word::{Automorphism, Word};

/// A multiplicative monomial x_1^{a_1} … x_n^{a_n}, i.e. an element of H.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpVec(pub Vec<i64>);

impl ExpVec {
    pub fn zero(rank: usize) -> Self {
        ExpVec(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        ExpVec(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise sum (the product in H).
    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn neg(&self) -> ExpVec {
        ExpVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> ExpVec {
        ExpVec(self.0.iter().map(|a| a * k).collect())
    }
}

/// Abelianization of a word: the exponent sum of each generator.
pub fn abelianize_word(w: &Word) -> ExpVec {
    ExpVec(w.exponent_sums())
}

/// A sparse Laurent polynomial over Z^n, canonically ordered by exponent
/// vector. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<ExpVec, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(ExpVec::zero(rank), BigInt::one())
    }

    pub fn monomial(exp: ExpVec, coeff: BigInt) -> Self {
        let rank = exp.rank();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { rank, terms }
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(ExpVec::zero(rank), c.into())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.is_zero() && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &ExpVec) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, exp: ExpVec, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
        }
    }

    fn check_rank(&self, other: &LaurentPoly) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = LaurentPoly::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Applies the ring automorphism of Z[H] induced by `tau`'s action on H:
    /// each monomial exponent vector maps through the abelianized images.
    pub fn substitute(&self, tau: &Automorphism) -> Result<LaurentPoly> {
        if self.rank != tau.rank() {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: tau.rank(),
            });
        }
        let images: Vec<ExpVec> = tau.images().iter().map(abelianize_word).collect();
        let mut out = LaurentPoly::zero(self.rank);
        for (e, c) in &self.terms {
            let mut image = ExpVec::zero(self.rank);
            for (i, &a) in e.0.iter().enumerate() {
                if a != 0 {
                    image = image.add(&images[i].scale(a));
                }
            }
            out.add_term(image, c);
        }
        Ok(out)
    }

    /// JSON form: a list of `{exponents: [..], coeff: "decimal string"}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({"exponents": e.0, "coeff": c.to_string()}))
                .collect(),
        )
    }

    pub fn from_json(rank: usize, value: &Value) -> Result<Self> {
        let arr = value.as_array().ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "expected a JSON array of terms".into(),
        })?;
        let mut out = LaurentPoly::zero(rank);
        for term in arr {
            let exps = term["exponents"]
                .as_array()
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: "term missing 'exponents'".into(),
                })?
                .iter()
                .map(|v| {
                    v.as_i64().ok_or_else(|| Error::Parse {
                        pos: 0,
                        msg: "exponent is not an integer".into(),
                    })
                })
                .collect::<Result<Vec<i64>>>()?;
            if exps.len() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: exps.len(),
                });
            }
            let coeff_str = term["coeff"].as_str().ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "term missing 'coeff' string".into(),
            })?;
            let coeff: BigInt = coeff_str.parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("bad coefficient '{}'", coeff_str),
            })?;
            out.add_term(ExpVec(exps), &coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.sign() == num_bigint::Sign::Minus;
            let abs = c.magnitude();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, a)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A formal Z-linear combination of reduced words: an element of Z[F_n].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeRingElem {
    rank: usize,
    terms: BTreeMap<Word, BigInt>,
}

impl FreeRingElem {
    pub fn zero(rank: usize) -> Self {
        FreeRingElem {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::from_word(Word::identity(rank), BigInt::one())
    }

    pub fn from_word(w: Word, coeff: BigInt) -> Self {
        let rank = w.rank();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(w, coeff);
        }
        FreeRingElem { rank, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: Word, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
        }
    }

    fn check_rank(&self, other: &FreeRingElem) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FreeRingElem) -> Result<FreeRingElem> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> FreeRingElem {
        FreeRingElem {
            rank: self.rank,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &FreeRingElem) -> Result<FreeRingElem> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FreeRingElem) -> Result<FreeRingElem> {
        self.check_rank(other)?;
        let mut out = FreeRingElem::zero(self.rank);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2)?, &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Left-multiplies by a single word.
    pub fn mul_word_left(&self, w: &Word) -> Result<FreeRingElem> {
        let mut out = FreeRingElem::zero(self.rank);
        for (u, c) in &self.terms {
            out.add_term(w.concat(u)?, c);
        }
        Ok(out)
    }
}

/// The ring homomorphism Z[F_n] → Z[H] induced by abelianization.
pub fn abelianize_ring(e: &FreeRingElem) -> LaurentPoly {
    let mut out = LaurentPoly::zero(e.rank());
    for (w, c) in e.terms() {
        out.add_term(abelianize_word(w), c);
    }
    out
}

/// A square matrix over Z[H]; all entries share one rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrMatrix {
    size: usize,
    entries: Vec<LaurentPoly>,
}

impl GrMatrix {
    pub fn identity(size: usize, rank: usize) -> Self {
        let mut entries = vec![LaurentPoly::zero(rank); size * size];
        for i in 0..size {
            entries[i * size + i] = LaurentPoly::one(rank);
        }
        GrMatrix { size, entries }
    }

    pub fn from_entries(size: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::SizeMismatch {
                left: size * size,
                right: entries.len(),
            });
        }
        if let Some(first) = entries.first() {
            let rank = first.rank();
            for e in &entries {
                if e.rank() != rank {
                    return Err(Error::RankMismatch {
                        left: rank,
                        right: e.rank(),
                    });
                }
            }
        }
        Ok(GrMatrix { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.entries.first().map_or(0, LaurentPoly::rank)
    }

    /// Entry at 1-based (row, col).
    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[(i - 1) * self.size + (j - 1)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[(i - 1) * self.size + (j - 1)] = p;
    }

    pub fn mul(&self, other: &GrMatrix) -> Result<GrMatrix> {
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        let rank = self.rank();
        if rank != other.rank() {
            return Err(Error::RankMismatch {
                left: rank,
                right: other.rank(),
            });
        }
        let mut out = GrMatrix {
            size: self.size,
            entries: vec![LaurentPoly::zero(rank); self.size * self.size],
        };
        for i in 1..=self.size {
            for j in 1..=self.size {
                let mut acc = LaurentPoly::zero(rank);
                for k in 1..=self.size {
                    acc = acc.add(&self.entry(i, k).mul(other.entry(k, j))?)?;
                }
                out.set_entry(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        (1..=self.size).all(|i| {
            (1..=self.size).all(|j| {
                let e = self.entry(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Applies `tau`'s induced ring automorphism to every entry.
    pub fn substitute(&self, tau: &Automorphism) -> Result<GrMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.substitute(tau))
            .collect::<Result<Vec<_>>>()?;
        Ok(GrMatrix {
            size: self.size,
            entries,
        })
    }

    /// JSON form: row-major array of `LaurentPoly` JSON arrays.
    pub fn to_json(&self) -> Value {
        Value::Array(self.entries.iter().map(LaurentPoly::to_json).collect())
    }
}

impl fmt::Display for GrMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.size {
            write!(f, "[ ")?;
            for j in 1..=self.size {
                if j > 1 {
                    write!(f, " | ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}
