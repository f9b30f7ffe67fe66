//! Fox derivations, the Magnus representation, and the kernel membership
//! test, together with the metabelian 2×2 embedding used as an independent
//! oracle.
//!
//! The derivation ∂/∂x_i on Z[F_n] is determined by ∂x_j/∂x_i = δ_ij and the
//! product rule ∂(uv) = ∂u + u·∂v; a run x_i^k contributes an explicit
//! geometric sum, so powers are never expanded into single letters.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::groupring::{abelianize_ring, abelianize_word, ExpVec, FreeRingElem, GrMatrix, LaurentPoly};
use crate::word::{Automorphism, Word};

/// The Fox derivative ∂w/∂x_i as an element of Z[F_n].
pub fn fox_free(w: &Word, i: usize) -> Result<FreeRingElem> {
    let rank = w.rank();
    if i == 0 || i > rank {
        return Err(Error::IndexOutOfRange { index: i, rank });
    }
    let mut out = FreeRingElem::zero(rank);
    let mut prefix = Word::identity(rank);
    for &(g, e) in w.letters() {
        if g == i {
            // ∂(x^k)/∂x = 1 + x + … + x^{k-1} for k > 0,
            //            -(x^{-1} + … + x^{k})  for k < 0.
            if e > 0 {
                for a in 0..e {
                    let term = prefix.concat(&Word::generator_power(rank, g, a)?)?;
                    out.add_term(term, &BigInt::one());
                }
            } else {
                for a in 1..=(-e) {
                    let term = prefix.concat(&Word::generator_power(rank, g, -a)?)?;
                    out.add_term(term, &BigInt::from(-1));
                }
            }
        }
        prefix = prefix.concat(&Word::generator_power(rank, g, e)?)?;
    }
    Ok(out)
}

/// The abelianized Fox derivative (∂w/∂x_i)^𝔞 in Z[H].
pub fn fox_ab(w: &Word, i: usize) -> Result<LaurentPoly> {
    Ok(abelianize_ring(&fox_free(w, i)?))
}

/// The Magnus representation r_M(σ): the n×n matrix over Z[H] with entry
/// (i, j) the abelianized Fox derivative of x_i^σ by x_j.
///
/// On all of Aut F_n this is a crossed homomorphism,
/// r_M(στ) = r_M(σ)^{τ*} · r_M(τ); restricted to IA automorphisms it is
/// multiplicative.
pub fn magnus_matrix(sigma: &Automorphism) -> GrMatrix {
    let n = sigma.rank();
    let mut m = GrMatrix::identity(n, n);
    for i in 1..=n {
        for j in 1..=n {
            let entry = fox_ab(sigma.image(i), j).expect("index in range");
            m.set_entry(i, j, entry);
        }
    }
    m
}

/// True iff the IA automorphism lies in the kernel of the Magnus
/// representation, i.e. r_M(σ) is the identity matrix. Non-IA input is
/// rejected.
pub fn kernel_member(sigma: &Automorphism) -> Result<bool> {
    sigma.require_ia()?;
    Ok(magnus_matrix(sigma).is_identity())
}

/// An element of the free metabelian group in Magnus's 2×2 matrix form:
/// the diagonal entry (an element of H) and the linear form
/// v_1 t_1 + … + v_n t_n with coefficients in Z[H].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetabelianElem {
    abelian: ExpVec,
    linear_form: Vec<LaurentPoly>,
}

impl MetabelianElem {
    pub fn rank(&self) -> usize {
        self.abelian.rank()
    }

    /// The diagonal entry.
    pub fn abelian_part(&self) -> &ExpVec {
        &self.abelian
    }

    /// Coefficient of t_i.
    pub fn coefficient(&self, i: usize) -> &LaurentPoly {
        &self.linear_form[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.abelian.is_zero() && self.linear_form.iter().all(LaurentPoly::is_zero)
    }

    /// Matrix product: [[x, L], [0, 1]] · [[x', L'], [0, 1]] = [[xx', xL' + L], [0, 1]].
    pub fn mul(&self, other: &MetabelianElem) -> Result<MetabelianElem> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let x = LaurentPoly::monomial(self.abelian.clone(), BigInt::one());
        let linear_form = self
            .linear_form
            .iter()
            .zip(&other.linear_form)
            .map(|(l, lp)| x.mul(lp)?.add(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(MetabelianElem {
            abelian: self.abelian.add(&other.abelian),
            linear_form,
        })
    }
}

/// The image of a word under the Magnus embedding of the free metabelian
/// group: diagonal entry its abelianization, linear-form coefficients its
/// abelianized Fox derivatives.
pub fn metabelian_embed(w: &Word) -> MetabelianElem {
    let rank = w.rank();
    let linear_form = (1..=rank)
        .map(|i| fox_ab(w, i).expect("index in range"))
        .collect();
    MetabelianElem {
        abelian: abelianize_word(w),
        linear_form,
    }
}

/// True iff the word dies in the free metabelian group, i.e. lies in the
/// second derived subgroup [[F, F], [F, F]].
pub fn metabelian_trivial(w: &Word) -> bool {
    metabelian_embed(w).is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn wd(rank: usize, text: &str) -> Word {
        parse_word(text, rank).unwrap()
    }

    /// Single-letter product-rule oracle: ∂(x^ε · rest) = ∂x^ε + x^ε ∂(rest),
    /// with ∂x^1/∂x = 1 and ∂x^{-1}/∂x = -x^{-1}. Everything else follows.
    fn oracle_fox(w: &Word, i: usize) -> FreeRingElem {
        let rank = w.rank();
        let mut singles: Vec<(usize, i64)> = Vec::new();
        for &(g, e) in w.letters() {
            let s = if e > 0 { 1 } else { -1 };
            for _ in 0..e.abs() {
                singles.push((g, s));
            }
        }
        let mut out = FreeRingElem::zero(rank);
        let mut prefix = Word::identity(rank);
        for (g, s) in singles {
            if g == i {
                if s == 1 {
                    out.add_term(prefix.clone(), &BigInt::one());
                } else {
                    let t = prefix
                        .concat(&Word::generator_power(rank, g, -1).unwrap())
                        .unwrap();
                    out.add_term(t, &BigInt::from(-1));
                }
            }
            prefix = prefix
                .concat(&Word::generator_power(rank, g, s).unwrap())
                .unwrap();
        }
        out
    }

    fn word_strategy(rank: usize, max_runs: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(
            (1..=rank, prop_oneof![-3i64..=-1, 1i64..=3]),
            0..max_runs,
        )
        .prop_map(move |letters| Word::from_letters(rank, letters).unwrap())
    }

    #[test]
    fn fox_free_examples() {
        // prefix before the first letter
        assert_eq!(fox_free(&wd(2, "x1 x2"), 1).unwrap(), FreeRingElem::one(2));
        // ∂x^{-1}/∂x = -x^{-1}
        assert_eq!(
            fox_free(&wd(2, "x1^-1"), 1).unwrap(),
            FreeRingElem::from_word(wd(2, "x1^-1"), BigInt::from(-1))
        );
        // ∂[x1,x2]/∂x1 = 1 - x1 x2 x1^{-1}
        let mut expected = FreeRingElem::one(2);
        expected.add_term(wd(2, "x1 x2 x1^-1"), &BigInt::from(-1));
        assert_eq!(fox_free(&wd(2, "[x1,x2]"), 1).unwrap(), expected);
        assert_eq!(
            fox_free(&wd(2, "[x1,x2]"), 1).unwrap(),
            oracle_fox(&wd(2, "[x1,x2]"), 1)
        );
    }

    #[test]
    fn fox_ab_examples() {
        // abelianized commutator derivative: 1 - x2
        let p = fox_ab(&wd(2, "[x1,x2]"), 1).unwrap();
        let mut expected = LaurentPoly::one(2);
        expected.add_term(ExpVec(vec![0, 1]), &BigInt::from(-1));
        assert_eq!(p, expected);
        // geometric sum for x1^d
        let d = 5;
        let p = fox_ab(&wd(2, &format!("x1^{}", d)), 1).unwrap();
        let mut expected = LaurentPoly::zero(2);
        for a in 0..d {
            expected.add_term(ExpVec(vec![a, 0]), &BigInt::one());
        }
        assert_eq!(p, expected);
        // absent generator
        assert!(fox_ab(&wd(3, "x1 x3^-2"), 2).unwrap().is_zero());
        assert!(matches!(
            fox_ab(&wd(2, "x1"), 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn magnus_matrix_of_identity() {
        assert!(magnus_matrix(&Automorphism::identity(3)).is_identity());
    }

    #[test]
    fn magnus_matrix_of_k12() {
        // hand Fox computation: row 1 of r_M(K_12) at n = 3 is
        // (x2^{-1}, x2^{-1} x1 - x2^{-1}, 0)
        let k12 = Automorphism::magnus_conj(3, 1, 2).unwrap();
        let m = magnus_matrix(&k12);
        assert_eq!(
            m.entry(1, 1),
            &LaurentPoly::monomial(ExpVec(vec![0, -1, 0]), BigInt::one())
        );
        let mut e12 = LaurentPoly::monomial(ExpVec(vec![1, -1, 0]), BigInt::one());
        e12.add_term(ExpVec(vec![0, -1, 0]), &BigInt::from(-1));
        assert_eq!(m.entry(1, 2), &e12);
        assert!(m.entry(1, 3).is_zero());
        for i in 2..=3 {
            for j in 1..=3 {
                if i == j {
                    assert!(m.entry(i, j).is_one());
                } else {
                    assert!(m.entry(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn kernel_generator_has_identity_matrix() {
        for n in [3, 4] {
            let sigma = Automorphism::kernel_generator(n, 2, 2, 3).unwrap();
            assert!(magnus_matrix(&sigma).is_identity());
            assert!(kernel_member(&sigma).unwrap());
        }
    }

    #[test]
    fn kernel_member_examples() {
        assert!(!kernel_member(&Automorphism::magnus_comm(3, 1, 2, 3).unwrap()).unwrap());
        // inner automorphism by a second-derived word of F_2
        let u = wd(2, "[x1,x2]");
        let v = wd(2, "[x1,x2^-1]");
        let g = Word::commutator(&u, &v).unwrap();
        assert!(kernel_member(&Automorphism::inner(&g)).unwrap());
        // non-IA input rejected
        let t = Automorphism::from_spec(
            "map x1 -> x1 x2; map x2 -> x2; inv x1 -> x1 x2^-1; inv x2 -> x2",
            2,
        )
        .unwrap();
        assert!(matches!(kernel_member(&t), Err(Error::NotIa { .. })));
    }

    #[test]
    fn metabelian_embed_examples() {
        let rank = 3;
        for i in 1..=rank {
            let m = metabelian_embed(&Word::generator(rank, i).unwrap());
            assert_eq!(m.abelian_part(), &ExpVec::unit(rank, i));
            for j in 1..=rank {
                if j == i {
                    assert!(m.coefficient(j).is_one());
                } else {
                    assert!(m.coefficient(j).is_zero());
                }
            }
        }
        assert!(metabelian_embed(&Word::identity(2)).is_identity());
    }

    #[test]
    fn metabelian_triviality() {
        // a double commutator of [F,F] elements dies in the metabelian quotient
        let u = wd(2, "[x1,x2]");
        let v = wd(2, "[x1^2,x2]");
        let w = Word::commutator(&u, &v).unwrap();
        assert!(metabelian_trivial(&w));
        // ... while the product of the same two commutators survives
        let p = u.concat(&v).unwrap();
        assert!(abelianize_word(&p).is_zero());
        assert!(!metabelian_trivial(&p));
        assert!(!metabelian_trivial(&wd(2, "[x1,x2]")));
        assert!(!metabelian_trivial(&wd(2, "x1")));
        assert!(!metabelian_trivial(&wd(2, "[x1,[x1,x2]]")));
    }

    #[test]
    fn embed_is_multiplicative() {
        let u = wd(3, "x1 [x2,x3] x1^-2");
        let v = wd(3, "x3^2 x2^-1");
        let lhs = metabelian_embed(&u.concat(&v).unwrap());
        let rhs = metabelian_embed(&u).mul(&metabelian_embed(&v)).unwrap();
        assert_eq!(lhs, rhs);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn fundamental_identity(w in word_strategy(3, 16)) {
            // Σ_i ∂w/∂x_i · (x_i - 1) = w - 1 in Z[F_n]
            let rank = 3;
            let mut acc = FreeRingElem::zero(rank);
            for i in 1..=rank {
                let mut factor = FreeRingElem::from_word(
                    Word::generator(rank, i).unwrap(),
                    BigInt::one(),
                );
                factor.add_term(Word::identity(rank), &BigInt::from(-1));
                acc = acc.add(&fox_free(&w, i).unwrap().mul(&factor).unwrap()).unwrap();
            }
            let mut rhs = FreeRingElem::from_word(w.clone(), BigInt::one());
            rhs.add_term(Word::identity(rank), &BigInt::from(-1));
            prop_assert_eq!(acc, rhs);
        }

        #[test]
        fn product_rule(u in word_strategy(3, 10), v in word_strategy(3, 10)) {
            for i in 1..=3 {
                let lhs = fox_free(&u.concat(&v).unwrap(), i).unwrap();
                let rhs = fox_free(&u, i).unwrap()
                    .add(&fox_free(&v, i).unwrap().mul_word_left(&u).unwrap())
                    .unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn fox_matches_single_letter_oracle(w in word_strategy(3, 10)) {
            for i in 1..=3 {
                prop_assert_eq!(fox_free(&w, i).unwrap(), oracle_fox(&w, i));
            }
        }

        #[test]
        fn fox_ab_is_abelianized_fox_free(w in word_strategy(3, 10)) {
            for i in 1..=3 {
                prop_assert_eq!(
                    fox_ab(&w, i).unwrap(),
                    abelianize_ring(&fox_free(&w, i).unwrap())
                );
            }
        }

        #[test]
        fn magnus_is_multiplicative_on_ia(
            pick in prop::collection::vec((0usize..2, 1usize..=3, 1usize..=3, 1usize..=3), 1..3),
        ) {
            let n = 3;
            let mut autos = Vec::new();
            for (kind, i, j, l) in pick {
                if kind == 0 && i != j {
                    autos.push(Automorphism::magnus_conj(n, i, j).unwrap());
                } else if i != j && i != l {
                    autos.push(Automorphism::magnus_comm(n, i, j, l).unwrap());
                }
            }
            if autos.len() >= 2 {
                let a = &autos[0];
                let b = &autos[1];
                let lhs = magnus_matrix(&a.compose(b).unwrap());
                let rhs = magnus_matrix(a).mul(&magnus_matrix(b)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn inner_kernel_matches_metabelian_triviality(w in word_strategy(2, 8)) {
            // connects the 2x2 embedding to the Magnus matrix of the inner
            // automorphism, for words with trivial abelianization
            let sums = w.exponent_sums();
            let mut balanced = w.clone();
            for (i, s) in sums.iter().enumerate() {
                balanced = balanced
                    .concat(&Word::generator_power(2, i + 1, -s).unwrap())
                    .unwrap();
            }
            let inner = Automorphism::inner(&balanced);
            prop_assert_eq!(
                kernel_member(&inner).unwrap(),
                metabelian_trivial(&balanced)
            );
        }
    }
}
