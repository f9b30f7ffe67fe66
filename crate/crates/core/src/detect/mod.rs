//! The explicit detecting elements, the composite map π into IA(W)^{ab},
//! exact integer rank, and the verification suite.

mod verify;

pub use verify::{verify, LemmaId, Report, VerifyParams, MAX_D, MAX_N};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fox::kernel_member;
use crate::johnson::{tau1_coords, MagnusGenKey, Tau1Coords};
use crate::schreier::{restrict, SubgroupContext};
use crate::word::{Automorphism, Word};

/// σ_m^{j,s}: x_j ↦ x_j [[x_1, x_s], [x_1^m, x_s]], all other generators
/// fixed. Lies in the kernel of the Magnus representation. The §4 element
/// σ_m is the case (j, s) = (2, 3).
pub fn make_sigma(m: usize, j: usize, s: usize, n: usize) -> Result<Automorphism> {
    if n < 3 {
        return Err(Error::BadParameter(format!(
            "sigma elements need n >= 3, got {}",
            n
        )));
    }
    if m < 2 {
        return Err(Error::BadParameter(format!(
            "sigma elements need m >= 2, got {}",
            m
        )));
    }
    if j < 2 || j > n || s < 2 || s > n || j == s {
        return Err(Error::BadParameter(format!(
            "sigma indices need 2 <= j, s <= n and j != s, got j={}, s={}",
            j, s
        )));
    }
    Automorphism::kernel_generator(n, m as i64, j, s)
}

/// Inner automorphism x ↦ g x g^{-1}.
pub fn make_inner(g: &Word) -> Automorphism {
    Automorphism::inner(g)
}

/// The inner automorphism by [[x_2, x_3], [x_2, x_4]] (n ≥ 4): a nonzero
/// element of the kernel's abelianization that maps to zero in every
/// IA(W_{n,d})^{ab}.
pub fn make_undetected(n: usize) -> Result<Automorphism> {
    if n < 4 {
        return Err(Error::BadParameter(format!(
            "the undetected element needs n >= 4, got {}",
            n
        )));
    }
    let c = Word::commutator(
        &Word::commutator(&Word::generator(n, 2)?, &Word::generator(n, 3)?)?,
        &Word::commutator(&Word::generator(n, 2)?, &Word::generator(n, 4)?)?,
    )?;
    Ok(Automorphism::inner(&c))
}

/// The W-alphabet word for x_1^a x_3 x_1^{-a} with the exponent reduced mod
/// d through b_0: a plain letter for a < d, and b_0 b_{a-d,3} b_0^{-1} for
/// d <= a <= 2d-1.
fn conjugated_letter(ctx: &SubgroupContext, a: usize, i: usize) -> Result<Word> {
    let rank_w = ctx.subgroup_rank();
    let d = ctx.d();
    if a < d {
        Word::generator(rank_w, ctx.letter_index(a, i))
    } else {
        Word::from_letters(
            rank_w,
            vec![(1, 1), (ctx.letter_index(a - d, i), 1), (1, -1)],
        )
    }
}

/// ω_{m,k}: the automorphism of W_{n,d} moving only b_{k,2}, by the seven
/// conjugate factors of the restricted σ_m image. The product over all
/// k = 0..d-1 equals restrict(σ_m).
pub fn make_omega(m: usize, k: usize, ctx: &SubgroupContext) -> Result<Automorphism> {
    let d = ctx.d();
    if ctx.n() < 3 || d < 3 {
        return Err(Error::BadParameter(format!(
            "omega elements need n >= 3 and d >= 3, got n={}, d={}",
            ctx.n(),
            d
        )));
    }
    if m < 2 || m > d - 1 {
        return Err(Error::BadParameter(format!(
            "omega elements need 2 <= m <= d-1, got m={}",
            m
        )));
    }
    if k > d - 1 {
        return Err(Error::BadParameter(format!(
            "omega elements need 0 <= k <= d-1, got k={}",
            k
        )));
    }
    let u = conjugated_letter(ctx, k + 1, 3)?;
    let v = conjugated_letter(ctx, k, 3)?;
    let w = conjugated_letter(ctx, m + k, 3)?;
    let tail = u
        .concat(&v.inverse())?
        .concat(&w)?
        .concat(&u.inverse())?
        .concat(&v)?
        .concat(&w.inverse())?;
    Automorphism::multiplier(ctx.subgroup_rank(), ctx.letter_index(k, 2), &tail)
}

/// τ₁ coordinates of the restriction of σ to W_{n,d}. The restriction must
/// land in IA(W_{n,d}); membership of σ in the Magnus kernel guarantees it.
pub fn restricted_tau1(sigma: &Automorphism, ctx: &SubgroupContext) -> Result<Tau1Coords> {
    tau1_coords(&restrict(sigma, ctx)?)
}

/// π_{n,d}(σ): the image of a kernel element in IA(W_{n,d})^{ab}, as a dense
/// integer vector over the documented Magnus-generator key order.
pub fn pi(sigma: &Automorphism, ctx: &SubgroupContext) -> Result<Vec<BigInt>> {
    if !kernel_member(sigma)? {
        return Err(Error::NotInKernel);
    }
    Ok(restricted_tau1(sigma, ctx)?.dense())
}

/// Rows of π-images over a fixed key table, ready for exact rank
/// computation.
#[derive(Debug, Clone)]
pub struct CoordMatrix {
    keys: Vec<MagnusGenKey>,
    rows: Vec<Vec<BigInt>>,
}

impl CoordMatrix {
    /// An empty matrix over the key table of IA(W)^{ab} for the given
    /// subgroup rank.
    pub fn new(rank_w: usize) -> Self {
        CoordMatrix {
            keys: MagnusGenKey::all(rank_w),
            rows: Vec::new(),
        }
    }

    pub fn keys(&self) -> &[MagnusGenKey] {
        &self.keys
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) -> Result<()> {
        if row.len() != self.keys.len() {
            return Err(Error::SizeMismatch {
                left: self.keys.len(),
                right: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Exact rank of the row span.
    pub fn rank(&self) -> usize {
        int_rank(&self.rows)
    }
}

/// Rank over Q of an integer matrix by fraction-free (Bareiss) elimination;
/// for integer rows this is the maximal number of Z-linearly independent
/// rows.
pub fn int_rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let num = &m[r][c] * &m[rank][col] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fox::magnus_matrix;
    use crate::parse_word;
    use crate::sample::Sampler;
    use crate::schreier::{build_context, ia_w_member};

    #[test]
    fn make_sigma_is_in_the_kernel() {
        for (m, j, s, n) in [(2, 2, 3, 3), (3, 3, 2, 3), (2, 4, 2, 4)] {
            let sigma = make_sigma(m, j, s, n).unwrap();
            assert!(kernel_member(&sigma).unwrap());
            for i in 1..=n {
                if i != j {
                    let xi = Word::generator(n, i).unwrap();
                    assert_eq!(sigma.apply(&xi).unwrap(), xi);
                }
            }
        }
        assert!(make_sigma(1, 2, 3, 3).is_err());
        assert!(make_sigma(2, 2, 2, 3).is_err());
        assert!(make_sigma(2, 1, 3, 3).is_err());
    }

    #[test]
    fn make_sigma_image_matches_parse() {
        let sigma = make_sigma(2, 2, 3, 3).unwrap();
        let expected = parse_word("x2 [[x1,x3],[x1^2,x3]]", 3).unwrap();
        assert_eq!(sigma.image(2), &expected);
        assert_eq!(expected.len(), 14);
    }

    #[test]
    fn make_undetected_conjugates_by_double_commutator() {
        let n = 4;
        let sigma = make_undetected(n).unwrap();
        let c = parse_word("[[x2,x3],[x2,x4]]", n).unwrap();
        for i in 1..=n {
            let xi = Word::generator(n, i).unwrap();
            assert_eq!(
                sigma.apply(&xi).unwrap(),
                xi.conjugate_by(&c).unwrap()
            );
        }
        assert!(kernel_member(&sigma).unwrap());
        assert!(make_undetected(3).is_err());
    }

    #[test]
    fn inner_automorphisms_are_ia() {
        let mut sampler = Sampler::new(42);
        for _ in 0..20 {
            let len = sampler.gen_range(0, 12);
            let g = sampler.word(3, len);
            assert!(make_inner(&g).is_ia());
        }
    }

    #[test]
    fn omega_product_equals_restriction() {
        for (n, d, m) in [(3, 3, 2), (3, 4, 2), (3, 4, 3), (3, 5, 3)] {
            let ctx = build_context(n, d).unwrap();
            let mut product = Automorphism::identity(ctx.subgroup_rank());
            for k in 0..d {
                product = product.compose(&make_omega(m, k, &ctx).unwrap()).unwrap();
            }
            let restricted = restrict(&make_sigma(m, 2, 3, n).unwrap(), &ctx).unwrap();
            assert_eq!(product, restricted, "n={} d={} m={}", n, d, m);
        }
    }

    #[test]
    fn omegas_commute() {
        let ctx = build_context(3, 5).unwrap();
        for m in 2..=4 {
            for k in 0..5 {
                for l in 0..5 {
                    let a = make_omega(m, k, &ctx).unwrap();
                    let b = make_omega(m, l, &ctx).unwrap();
                    assert_eq!(
                        a.compose(&b).unwrap(),
                        b.compose(&a).unwrap(),
                        "m={} k={} l={}",
                        m,
                        k,
                        l
                    );
                }
            }
        }
    }

    #[test]
    fn omega_case1_tau1_is_three_commutator_keys() {
        let n = 3;
        let d = 5;
        let m = 2;
        let ctx = build_context(n, d).unwrap();
        for k in 0..=(d - 1 - m) {
            let omega = make_omega(m, k, &ctx).unwrap();
            assert!(ia_w_member(&omega));
            let got = tau1_coords(&omega).unwrap();
            let alpha = ctx.letter_index(k, 2);
            let mut expected = Tau1Coords::zero(ctx.subgroup_rank());
            for (bk, gk) in [(m + k, k), (k + 1, m + k), (k, k + 1)] {
                let (key, sign) = MagnusGenKey::comm(
                    alpha,
                    ctx.letter_index(bk, 3),
                    ctx.letter_index(gk, 3),
                )
                .unwrap()
                .unwrap();
                expected.add_key(key, &BigInt::from(sign));
            }
            assert_eq!(got, expected, "k={}", k);
        }
    }

    #[test]
    fn pi_of_identity_is_zero() {
        let ctx = build_context(3, 3).unwrap();
        let v = pi(&Automorphism::identity(3), &ctx).unwrap();
        assert!(v.iter().all(Zero::is_zero));
    }

    #[test]
    fn pi_rejects_non_kernel_elements() {
        let ctx = build_context(3, 3).unwrap();
        let k123 = Automorphism::magnus_comm(3, 1, 2, 3).unwrap();
        assert!(matches!(pi(&k123, &ctx), Err(Error::NotInKernel)));
    }

    #[test]
    fn pi_of_undetected_element_is_zero() {
        let n = 4;
        let sigma = make_undetected(n).unwrap();
        for d in [3, 4] {
            let ctx = build_context(n, d).unwrap();
            let v = pi(&sigma, &ctx).unwrap();
            assert!(v.iter().all(Zero::is_zero), "d={}", d);
        }
    }

    #[test]
    fn pi_is_additive_on_kernel_products() {
        let n = 3;
        let ctx = build_context(n, 4).unwrap();
        let mut sampler = Sampler::new(99);
        for _ in 0..10 {
            let ma = sampler.gen_range(2, 3);
            let mb = sampler.gen_range(2, 3);
            let a = make_sigma(ma, 2, 3, n).unwrap();
            let b = make_sigma(mb, 3, 2, n).unwrap();
            let ab = a.compose(&b).unwrap();
            let lhs = pi(&ab, &ctx).unwrap();
            let pa = pi(&a, &ctx).unwrap();
            let pb = pi(&b, &ctx).unwrap();
            let rhs: Vec<BigInt> = pa.iter().zip(&pb).map(|(x, y)| x + y).collect();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn int_rank_examples() {
        let zero = vec![vec![BigInt::zero(); 4]; 3];
        assert_eq!(int_rank(&zero), 0);
        let mut id = vec![vec![BigInt::zero(); 4]; 4];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        assert_eq!(int_rank(&id), 4);
        // rank drops for dependent rows
        let dep = vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(-2)],
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(-1)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(5)],
        ];
        assert_eq!(int_rank(&dep), 2);
        assert_eq!(int_rank(&[]), 0);
    }

    #[test]
    fn sigma_rows_at_n3_d6_have_rank_four() {
        let n = 3;
        let d = 6;
        let ctx = build_context(n, d).unwrap();
        let mut matrix = CoordMatrix::new(ctx.subgroup_rank());
        for m in 2..=d - 1 {
            matrix
                .push_row(pi(&make_sigma(m, 2, 3, n).unwrap(), &ctx).unwrap())
                .unwrap();
        }
        assert_eq!(matrix.rank(), d - 2);
    }

    #[test]
    fn magnus_matrix_of_sigma_is_identity_matrix() {
        for n in [3, 4] {
            for m in [2, 3] {
                let sigma = make_sigma(m, 2, 3, n).unwrap();
                assert!(magnus_matrix(&sigma).is_identity());
            }
        }
    }
}
