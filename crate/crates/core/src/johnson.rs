//! Johnson filtration depth and Johnson homomorphisms τ_k, plus τ₁ written
//! in the Magnus-generator basis of IA^{ab}.
//!
//! For σ acting trivially on the abelianization, τ_k(σ) sends each generator
//! x to the class of x^{-1} x^σ in the degree-(k+1) part of the free Lie
//! algebra; the class is read off the Magnus expansion of the word.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::series::{expand, lie_decompose, LieElement};
use crate::word::{Automorphism, Word};

/// Johnson depth checks are supported up to this k (expansions stay within
/// the series degree cap).
pub const MAX_DEPTH: usize = 5;

/// τ_k values are computed for k ≤ 4 (all the toolkit needs); deeper values
/// are refused.
pub const MAX_TAU: usize = 4;

/// The word x_i^{-1} x_i^σ.
fn displacement(sigma: &Automorphism, i: usize) -> Word {
    let xi = Word::generator(sigma.rank(), i).expect("index in range");
    xi.inverse()
        .concat(sigma.image(i))
        .expect("equal ranks")
}

/// The largest k ≤ kmax with σ in the k-th Johnson filtration term: every
/// generator displacement expands with vanishing parts in degrees 1..=k.
/// IA input always yields at least 1.
pub fn johnson_depth(sigma: &Automorphism, kmax: usize) -> Result<usize> {
    if kmax == 0 || kmax > MAX_DEPTH {
        return Err(Error::DegreeCap {
            degree: kmax,
            cap: MAX_DEPTH,
        });
    }
    sigma.require_ia()?;
    let mut depth = kmax;
    for i in 1..=sigma.rank() {
        let s = expand(&displacement(sigma, i), kmax + 1)?;
        let mut k = 0;
        while k < depth && s.graded_part(k + 1)?.is_zero() {
            k += 1;
        }
        depth = depth.min(k);
        if depth == 0 {
            break;
        }
    }
    // IA automorphisms always lie in the first filtration term
    debug_assert!(depth >= 1);
    Ok(depth)
}

/// The value of the k-th Johnson homomorphism: one Lie element of degree
/// k+1 per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JohnsonImage {
    rank: usize,
    degree: usize,
    rows: Vec<LieElement>,
}

impl JohnsonImage {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The Johnson degree k (rows live in Lie degree k+1).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Row for generator x_i (1-based).
    pub fn row(&self, i: usize) -> &LieElement {
        &self.rows[i - 1]
    }

    pub fn rows(&self) -> &[LieElement] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(LieElement::is_zero)
    }

    /// Rows concatenated in Lyndon-basis order, as one dense integer vector.
    pub fn dense(&self) -> Result<Vec<BigInt>> {
        let mut out = Vec::new();
        for row in &self.rows {
            out.extend(row.dense()?);
        }
        Ok(out)
    }
}

/// τ_k(σ): requires σ to lie in the k-th Johnson filtration term.
pub fn tau(sigma: &Automorphism, k: usize) -> Result<JohnsonImage> {
    if k == 0 || k > MAX_TAU {
        return Err(Error::DegreeCap {
            degree: k,
            cap: MAX_TAU,
        });
    }
    sigma.require_ia()?;
    let rank = sigma.rank();
    let mut rows = Vec::with_capacity(rank);
    for i in 1..=rank {
        let s = expand(&displacement(sigma, i), k + 1)?;
        if !s.vanishes_through(k) {
            return Err(Error::BadParameter(format!(
                "automorphism is not in the Johnson filtration term A({}): \
                 generator x{} moves in lower degree",
                k, i
            )));
        }
        rows.push(lie_decompose(&s.graded_part(k + 1)?, rank)?);
    }
    Ok(JohnsonImage {
        rank,
        degree: k,
        rows,
    })
}

/// A basis element of IA^{ab}: a conjugation generator K_{α,β} (α ≠ β) or a
/// commutator generator K_{α,β,γ} stored with β < γ; the relation
/// K_{α,γ,β} = K_{α,β,γ}^{-1} is absorbed into a sign at normalization time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MagnusGenKey {
    Conj { alpha: usize, beta: usize },
    Comm { alpha: usize, beta: usize, gamma: usize },
}

impl MagnusGenKey {
    pub fn conj(alpha: usize, beta: usize) -> Result<Self> {
        if alpha == beta {
            return Err(Error::BadParameter(
                "conjugation key requires distinct indices".into(),
            ));
        }
        Ok(MagnusGenKey::Conj { alpha, beta })
    }

    /// Normalizes K_{α,β,γ} to its canonical key and sign; returns `None`
    /// for the degenerate β = γ (the identity automorphism).
    pub fn comm(alpha: usize, beta: usize, gamma: usize) -> Result<Option<(Self, i64)>> {
        if alpha == beta || alpha == gamma {
            return Err(Error::BadParameter(
                "commutator key requires α distinct from β and γ".into(),
            ));
        }
        if beta == gamma {
            return Ok(None);
        }
        let (b, g, sign) = if beta < gamma {
            (beta, gamma, 1)
        } else {
            (gamma, beta, -1)
        };
        Ok(Some((
            MagnusGenKey::Comm {
                alpha,
                beta: b,
                gamma: g,
            },
            sign,
        )))
    }

    /// Every key for the given rank, in the documented order: all conjugation
    /// keys sorted by (α, β), then all commutator keys sorted by (α, β, γ).
    pub fn all(rank: usize) -> Vec<MagnusGenKey> {
        let mut keys = Vec::new();
        for alpha in 1..=rank {
            for beta in 1..=rank {
                if beta != alpha {
                    keys.push(MagnusGenKey::Conj { alpha, beta });
                }
            }
        }
        for alpha in 1..=rank {
            for beta in 1..=rank {
                for gamma in beta + 1..=rank {
                    if beta != alpha && gamma != alpha {
                        keys.push(MagnusGenKey::Comm { alpha, beta, gamma });
                    }
                }
            }
        }
        keys
    }

    /// Total number of keys: r(r-1) + r(r-1)(r-2)/2 = r²(r-1)/2.
    pub fn count(rank: usize) -> usize {
        rank * rank * (rank - 1) / 2
    }

    pub fn to_json(&self) -> Value {
        match self {
            MagnusGenKey::Conj { alpha, beta } => {
                json!({"kind": "conj", "indices": [alpha, beta], "sign": 1})
            }
            MagnusGenKey::Comm { alpha, beta, gamma } => {
                json!({"kind": "comm", "indices": [alpha, beta, gamma], "sign": 1})
            }
        }
    }
}

/// τ₁ coordinates in the Magnus-generator basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tau1Coords {
    rank: usize,
    coords: BTreeMap<MagnusGenKey, BigInt>,
}

impl Tau1Coords {
    pub fn zero(rank: usize) -> Self {
        Tau1Coords {
            rank,
            coords: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coeff(&self, key: &MagnusGenKey) -> BigInt {
        self.coords.get(key).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coords(&self) -> impl Iterator<Item = (&MagnusGenKey, &BigInt)> {
        self.coords.iter()
    }

    pub fn add_key(&mut self, key: MagnusGenKey, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coords.entry(key) {
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

    pub fn add(&self, other: &Tau1Coords) -> Result<Tau1Coords> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.coords {
            out.add_key(*k, c);
        }
        Ok(out)
    }

    /// Dense vector over `MagnusGenKey::all(rank)`.
    pub fn dense(&self) -> Vec<BigInt> {
        MagnusGenKey::all(self.rank)
            .iter()
            .map(|k| self.coeff(k))
            .collect()
    }

    /// Sparse serialization: a list of `{key, coeff}` objects.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coords
                .iter()
                .map(|(k, c)| json!({"key": k.to_json(), "coeff": c.to_string()}))
                .collect(),
        )
    }
}

/// τ₁(σ) written in the Magnus-generator basis: the coefficient of K_{α,β}
/// is the coefficient of α* ⊗ (α ∧ β), and the coefficient of K_{α,β,γ}
/// (β < γ, both ≠ α) is the coefficient of α* ⊗ (β ∧ γ).
pub fn tau1_coords(sigma: &Automorphism) -> Result<Tau1Coords> {
    sigma.require_ia()?;
    let rank = sigma.rank();
    let mut out = Tau1Coords::zero(rank);
    for alpha in 1..=rank {
        let t = expand(&displacement(sigma, alpha), 2)?.graded_part(2)?;
        for (m, c) in t.terms() {
            let (a, b) = (m[0] as usize, m[1] as usize);
            if a == b {
                return Err(Error::Internal(format!(
                    "degree-2 part of an IA displacement has a diagonal term X{}X{}",
                    a, b
                )));
            }
            if a > b {
                // the a < b companion term carries the wedge coefficient
                continue;
            }
            debug_assert_eq!(t.coeff(&[m[1], m[0]]), -c);
            if a == alpha {
                out.add_key(MagnusGenKey::conj(alpha, b)?, c);
            } else if b == alpha {
                // a ∧ α = -(α ∧ a)
                out.add_key(MagnusGenKey::conj(alpha, a)?, &(-c));
            } else if let Some((key, sign)) = MagnusGenKey::comm(alpha, a, b)? {
                out.add_key(key, &(c * BigInt::from(sign)));
            }
        }
    }
    Ok(out)
}
