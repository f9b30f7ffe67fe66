//! Degree-truncated noncommutative power series (Magnus expansions of words),
//! homogeneous tensors, Lyndon words with their standard bracketings, and
//! exact decomposition of Lie elements in the Lyndon basis.
//!
//! The expansion substitutes x_i ↦ 1 + X_i and x_i^{-1} ↦ Σ (-X_i)^k, so a
//! word lies in the k-th lower-central-series term iff its expansion has no
//! terms in degrees 1..k-1.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::word::Word;

/// Truncation degrees above this are refused; every quantity in the toolkit
/// needs at most degree 6 (Johnson depth 5 checks).
pub const MAX_DEGREE: usize = 6;

type Monomial = Vec<u16>;

fn monomial_mul(a: &[u16], b: &[u16]) -> Monomial {
    let mut m = Vec::with_capacity(a.len() + b.len());
    m.extend_from_slice(a);
    m.extend_from_slice(b);
    m
}

/// A noncommutative polynomial truncated at a fixed total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcSeries {
    rank: usize,
    degree: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl NcSeries {
    pub fn one(rank: usize, degree: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), BigInt::one());
        NcSeries {
            rank,
            degree,
            terms,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn truncation(&self) -> usize {
        self.degree
    }

    fn add_term(&mut self, m: Monomial, c: &BigInt) {
        if c.is_zero() || m.len() > self.degree {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn mul(&self, other: &NcSeries) -> NcSeries {
        let mut out = NcSeries {
            rank: self.rank,
            degree: self.degree,
            terms: BTreeMap::new(),
        };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.len() + m2.len() <= self.degree {
                    out.add_term(monomial_mul(m1, m2), &(c1 * c2));
                }
            }
        }
        out
    }

    /// The homogeneous part of total degree k.
    pub fn graded_part(&self, k: usize) -> Result<Tensor> {
        if k > self.degree {
            return Err(Error::DegreeCap {
                degree: k,
                cap: self.degree,
            });
        }
        let mut t = Tensor::zero(self.rank, k);
        for (m, c) in &self.terms {
            if m.len() == k {
                t.add_term(m.clone(), c);
            }
        }
        Ok(t)
    }

    /// True when every homogeneous part in degrees 1..=k vanishes.
    pub fn vanishes_through(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.is_empty() || m.len() > k)
    }
}

/// Binomial expansion of (1 + X)^e truncated at `degree`; e may be negative.
fn letter_series(rank: usize, degree: usize, g: usize, e: i64) -> NcSeries {
    let mut s = NcSeries::one(rank, degree);
    let mut coeff = BigInt::one();
    let mut monomial: Monomial = Vec::new();
    for a in 0..degree as i64 {
        // c_{a+1} = c_a (e - a) / (a + 1), exact at every step
        coeff = coeff * BigInt::from(e - a) / BigInt::from(a + 1);
        monomial.push(g as u16);
        if coeff.is_zero() {
            break;
        }
        s.add_term(monomial.clone(), &coeff);
    }
    s
}

/// The Magnus expansion of a word, truncated at degree D (1 ≤ D ≤ 6).
pub fn expand(w: &Word, degree: usize) -> Result<NcSeries> {
    if degree == 0 {
        return Err(Error::BadParameter("truncation degree must be >= 1".into()));
    }
    if degree > MAX_DEGREE {
        return Err(Error::DegreeCap {
            degree,
            cap: MAX_DEGREE,
        });
    }
    let mut s = NcSeries::one(w.rank(), degree);
    for &(g, e) in w.letters() {
        s = s.mul(&letter_series(w.rank(), degree, g, e));
    }
    Ok(s)
}

/// A homogeneous degree-k tensor: a finite map monomial → integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    rank: usize,
    degree: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Tensor {
    pub fn zero(rank: usize, degree: usize) -> Self {
        Tensor {
            rank,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The degree-1 tensor X_i.
    pub fn generator(rank: usize, i: usize) -> Self {
        let mut t = Tensor::zero(rank, 1);
        t.add_term(vec![i as u16], &BigInt::one());
        t
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u16]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &BigInt) {
        debug_assert_eq!(m.len(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &(-c));
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Tensor {
        if k.is_zero() {
            return Tensor::zero(self.rank, self.degree);
        }
        Tensor {
            rank: self.rank,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Tensor) -> Tensor {
        let mut out = Tensor::zero(self.rank, self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(monomial_mul(m1, m2), &(c1 * c2));
            }
        }
        out
    }

    /// [a, b] = ab - ba.
    pub fn bracket(a: &Tensor, b: &Tensor) -> Tensor {
        a.mul(b).sub(&b.mul(a))
    }

    /// JSON form: a list of `{monomial: [..], coeff: "decimal string"}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!({"monomial": m, "coeff": c.to_string()}))
                .collect(),
        )
    }
}

/// Dynkin–Specht–Wever criterion: a homogeneous degree-k tensor is a Lie
/// element iff left-to-right bracketing sends it to k times itself.
pub fn dynkin_check(t: &Tensor) -> bool {
    if t.degree == 0 {
        return t.is_zero();
    }
    let mut image = Tensor::zero(t.rank, t.degree);
    for (m, c) in &t.terms {
        let mut b = Tensor::generator(t.rank, m[0] as usize);
        for &g in &m[1..] {
            b = Tensor::bracket(&b, &Tensor::generator(t.rank, g as usize));
        }
        image = image.add(&b.scale(c));
    }
    image == t.scale(&BigInt::from(t.degree as i64))
}

/// A Lyndon word: aperiodic and strictly smaller than all of its rotations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord(Vec<u16>);

impl LyndonWord {
    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Standard factorization: the right factor is the lexicographically
    /// smallest proper suffix (itself Lyndon).
    pub fn standard_split(&self) -> Option<(LyndonWord, LyndonWord)> {
        if self.0.len() < 2 {
            return None;
        }
        let mut best = 1;
        for s in 2..self.0.len() {
            if self.0[s..] < self.0[best..] {
                best = s;
            }
        }
        Some((
            LyndonWord(self.0[..best].to_vec()),
            LyndonWord(self.0[best..].to_vec()),
        ))
    }

    /// Expansion of the standard bracketing as a homogeneous tensor.
    pub fn bracket_tensor(&self, rank: usize) -> Tensor {
        match self.standard_split() {
            None => Tensor::generator(rank, self.0[0] as usize),
            Some((u, v)) => {
                Tensor::bracket(&u.bracket_tensor(rank), &v.bracket_tensor(rank))
            }
        }
    }

    fn bracket_string(&self) -> String {
        match self.standard_split() {
            None => format!("x{}", self.0[0]),
            Some((u, v)) => format!("[{},{}]", u.bracket_string(), v.bracket_string()),
        }
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bracket_string())
    }
}

/// All Lyndon words of length exactly `k` over the alphabet 1..=r, in
/// lexicographic order (Duval's generation).
pub fn lyndon_basis(rank: usize, k: usize) -> Result<Vec<LyndonWord>> {
    if rank == 0 || k == 0 {
        return Err(Error::BadParameter(
            "lyndon_basis requires rank >= 1 and degree >= 1".into(),
        ));
    }
    let mut out = Vec::new();
    let mut w: Vec<u16> = vec![0];
    loop {
        if w.len() == k {
            out.push(LyndonWord(w.iter().map(|&a| a + 1).collect()));
        }
        // extend periodically to length k, then increment the last
        // non-maximal letter
        let len = w.len();
        w = (0..k).map(|i| w[i % len]).collect();
        while w.last() == Some(&(rank as u16 - 1)) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    Ok(out)
}

/// Number of Lyndon words of length k over r letters by Witt's formula:
/// (1/k) Σ_{e|k} μ(e) r^{k/e}.
pub fn witt_dimension(rank: usize, k: usize) -> u64 {
    fn moebius(n: usize) -> i64 {
        let mut n = n;
        let mut mu = 1i64;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if n > 1 {
            mu = -mu;
        }
        mu
    }
    let mut sum = 0i64;
    for e in 1..=k {
        if k % e == 0 {
            sum += moebius(e) * (rank as i64).pow((k / e) as u32);
        }
    }
    (sum / k as i64) as u64
}

/// An element of the degree-k part of the free Lie algebra, in Lyndon
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    rank: usize,
    degree: usize,
    coords: BTreeMap<LyndonWord, BigInt>,
}

impl LieElement {
    pub fn zero(rank: usize, degree: usize) -> Self {
        LieElement {
            rank,
            degree,
            coords: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> impl Iterator<Item = (&LyndonWord, &BigInt)> {
        self.coords.iter()
    }

    pub fn coeff(&self, w: &LyndonWord) -> BigInt {
        self.coords.get(w).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Dense coordinates relative to `lyndon_basis(rank, degree)` order.
    pub fn dense(&self) -> Result<Vec<BigInt>> {
        let basis = lyndon_basis(self.rank, self.degree)?;
        Ok(basis.iter().map(|w| self.coeff(w)).collect())
    }

    /// Re-expands the element as a tensor.
    pub fn to_tensor(&self) -> Tensor {
        let mut t = Tensor::zero(self.rank, self.degree);
        for (w, c) in &self.coords {
            t = t.add(&w.bracket_tensor(self.rank).scale(c));
        }
        t
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.coords.iter().enumerate() {
            let neg = c.is_negative();
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
            if abs.is_one() {
                write!(f, "{}", w)?;
            } else {
                write!(f, "{}*{}", abs, w)?;
            }
        }
        Ok(())
    }
}

/// Decomposes a homogeneous Lie tensor exactly over the integers in the
/// Lyndon basis. The input must pass the Dynkin check; the result is always
/// verified by re-expansion, so no structural assumption on the basis matrix
/// is trusted.
pub fn lie_decompose(t: &Tensor, rank: usize) -> Result<LieElement> {
    let k = t.degree();
    if k == 0 || k > MAX_DEGREE {
        return Err(Error::DegreeCap {
            degree: k,
            cap: MAX_DEGREE,
        });
    }
    if t.is_zero() {
        return Ok(LieElement::zero(rank, k));
    }
    if !dynkin_check(t) {
        return Err(Error::NotLieElement);
    }
    let basis = lyndon_basis(rank, k)?;
    // The expansion of the standard bracketing of a Lyndon word w is w plus
    // lexicographically larger monomials, so scanning the basis in lex order
    // peels coefficients without division.
    let mut residual = t.clone();
    let mut elem = LieElement::zero(rank, k);
    for w in &basis {
        let c = residual.coeff(w.letters());
        if !c.is_zero() {
            residual = residual.sub(&w.bracket_tensor(rank).scale(&c));
            elem.coords.insert(w.clone(), c);
        }
    }
    if !residual.is_zero() {
        return Err(Error::Internal(
            "Lie decomposition left a nonzero residual".into(),
        ));
    }
    // unconditional re-expansion check
    if elem.to_tensor() != *t {
        return Err(Error::Internal(
            "Lie decomposition failed re-expansion verification".into(),
        ));
    }
    Ok(elem)
}
