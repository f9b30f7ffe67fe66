//! One verifier per anchored claim, each producing a machine-readable
//! `Report`. Verifiers are pure given their parameters and may run
//! concurrently.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::detect::{make_sigma, make_undetected, restricted_tau1, CoordMatrix};
use crate::error::{Error, Result};
use crate::fox::{fox_free, kernel_member, magnus_matrix};
use crate::groupring::FreeRingElem;
use crate::johnson::{johnson_depth, tau1_coords, MagnusGenKey, Tau1Coords};
use crate::sample::Sampler;
use crate::schreier::{build_context, SubgroupContext};
use crate::series::{expand, lie_decompose, Tensor};
use crate::word::{Automorphism, Word};

/// Desk-scale caps for verifier parameters.
pub const MAX_N: usize = 6;
pub const MAX_D: usize = 12;

/// Identifiers of the verifiable claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaId {
    /// Decomposition of x_i ↦ x_i x_j x_l^{-1} x_m x_j^{-1} x_l x_m^{-1}
    /// into Magnus generators, with its abelianized three-term form.
    L1,
    /// The conjugated variant with one extra letter pair.
    L2,
    /// The doubly conjugated variant.
    L4,
    /// The two routes to the image of σ_m in IA(W_{n,d})^{ab} agree.
    Mayumi,
    /// The rows {π(σ_m)} for m = 2..d-1 have rank exactly d-2.
    Rank1,
    /// The rows {π(σ_m^{j,s})} have rank exactly (d-2)(n-1)(n-2).
    Rank2,
    /// τ₄ of the undetected element: vanishing through degree 4, nonzero
    /// degree-5 Lie rows matching the stated bracket tensors.
    Tau4,
    /// π of the undetected element vanishes for every tested d.
    Undetected,
    /// At n = 2 the kernel is exactly the inner automorphisms by
    /// second-derived words.
    N2,
    /// The crossed-homomorphism law of the Magnus representation.
    Crossed,
    /// The fundamental Fox identity Σ_i (∂w/∂x_i)(x_i - 1) = w - 1.
    FoxId,
}

impl LemmaId {
    pub const ALL: [LemmaId; 11] = [
        LemmaId::L1,
        LemmaId::L2,
        LemmaId::L4,
        LemmaId::Mayumi,
        LemmaId::Rank1,
        LemmaId::Rank2,
        LemmaId::Tau4,
        LemmaId::Undetected,
        LemmaId::N2,
        LemmaId::Crossed,
        LemmaId::FoxId,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::L1 => "L1",
            LemmaId::L2 => "L2",
            LemmaId::L4 => "L4",
            LemmaId::Mayumi => "MAYUMI",
            LemmaId::Rank1 => "RANK1",
            LemmaId::Rank2 => "RANK2",
            LemmaId::Tau4 => "TAU4",
            LemmaId::Undetected => "UNDETECTED",
            LemmaId::N2 => "N2",
            LemmaId::Crossed => "CROSSED",
            LemmaId::FoxId => "FOXID",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name() == up)
            .ok_or_else(|| Error::UnknownLemma(s.to_string()))
    }
}

/// Parameters for a verifier run; unset fields fall back to per-lemma
/// defaults.
#[derive(Debug, Clone)]
pub struct VerifyParams {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub seed: u64,
    /// Randomized case count; 0 selects the per-lemma default.
    pub cases: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            n: None,
            d: None,
            m: None,
            seed: 17,
            cases: 0,
        }
    }
}

/// Outcome of one verifier run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub id: String,
    pub params: Value,
    pub expected: Value,
    pub got: Value,
    pub pass: bool,
    pub millis: u64,
    pub tool_version: String,
}

impl Report {
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] {} params={} expected={} got={} ({} ms)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.params,
            self.expected,
            self.got,
            self.millis
        )
    }
}

fn check_caps(n: usize, d: usize) -> Result<()> {
    if n > MAX_N {
        return Err(Error::CapExceeded(format!("n={} exceeds {}", n, MAX_N)));
    }
    if d > MAX_D {
        return Err(Error::CapExceeded(format!("d={} exceeds {}", d, MAX_D)));
    }
    Ok(())
}

/// Runs one verifier and reports claim, parameters and outcome.
pub fn verify(id: LemmaId, params: &VerifyParams) -> Result<Report> {
    let start = Instant::now();
    let (params_json, expected, got, pass) = match id {
        LemmaId::L1 => lemma_word(params, LemmaKind::L1)?,
        LemmaId::L2 => lemma_word(params, LemmaKind::L2)?,
        LemmaId::L4 => lemma_word(params, LemmaKind::L4)?,
        LemmaId::Mayumi => mayumi(params)?,
        LemmaId::Rank1 => rank1(params)?,
        LemmaId::Rank2 => rank2(params)?,
        LemmaId::Tau4 => tau4(params)?,
        LemmaId::Undetected => undetected(params)?,
        LemmaId::N2 => n2(params)?,
        LemmaId::Crossed => crossed(params)?,
        LemmaId::FoxId => foxid(params)?,
    };
    Ok(Report {
        id: id.name().to_string(),
        params: params_json,
        expected,
        got,
        pass,
        millis: start.elapsed().as_millis() as u64,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

type Outcome = (Value, Value, Value, bool);

enum LemmaKind {
    L1,
    L2,
    L4,
}

fn compose_chain(parts: &[Automorphism]) -> Result<Automorphism> {
    let mut out = Automorphism::identity(parts[0].rank());
    for p in parts {
        out = out.compose(p)?;
    }
    Ok(out)
}

fn distinct_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(n: usize, len: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == len {
            out.push(stack.clone());
            return;
        }
        for v in 1..=n {
            if !stack.contains(&v) {
                stack.push(v);
                rec(n, len, stack, out);
                stack.pop();
            }
        }
    }
    rec(n, len, &mut stack, &mut out);
    out
}

/// L-1, L-2 and L-4: the displayed automorphism equals the Magnus-generator
/// composite for every admissible index tuple, and its τ₁ image is
/// K_iml + K_ijm + K_ilj.
fn lemma_word(params: &VerifyParams, kind: LemmaKind) -> Result<Outcome> {
    let (min_n, arity) = match kind {
        LemmaKind::L1 => (4, 4),
        LemmaKind::L2 | LemmaKind::L4 => (5, 5),
    };
    let n = params.n.unwrap_or(min_n);
    check_caps(n, 2)?;
    if n < min_n {
        return Err(Error::BadParameter(format!(
            "this lemma needs n >= {}, got {}",
            min_n, n
        )));
    }
    let tuples = distinct_tuples(n, arity);
    let mut failures = 0usize;
    for t in &tuples {
        let (i, j, l, m) = (t[0], t[1], t[2], t[3]);
        let p = t.get(4).copied().unwrap_or(0);
        let tail_letters: Vec<(usize, i64)> = match kind {
            LemmaKind::L1 => vec![(j, 1), (l, -1), (m, 1), (j, -1), (l, 1), (m, -1)],
            LemmaKind::L2 => vec![
                (j, 1),
                (l, -1),
                (p, 1),
                (m, 1),
                (p, -1),
                (j, -1),
                (l, 1),
                (p, 1),
                (m, -1),
                (p, -1),
            ],
            LemmaKind::L4 => vec![
                (p, 1),
                (j, 1),
                (p, -1),
                (l, -1),
                (p, 1),
                (m, 1),
                (p, -1),
                (p, 1),
                (j, -1),
                (p, -1),
                (l, 1),
                (p, 1),
                (m, -1),
                (p, -1),
            ],
        };
        let tail = Word::from_letters(n, tail_letters)?;
        let omega = Automorphism::multiplier(n, i, &tail)?;

        let kil = Automorphism::magnus_conj(n, i, l)?;
        let core = [
            kil.clone(),
            Automorphism::magnus_comm(n, i, m, l)?,
            Automorphism::magnus_comm(n, i, j, m)?,
            Automorphism::magnus_comm(n, i, l, j)?,
            kil.inverse(),
        ];
        let composite = match kind {
            LemmaKind::L1 => compose_chain(&core)?,
            LemmaKind::L2 => {
                let kmp = Automorphism::magnus_conj(n, m, p)?;
                kmp.compose(&compose_chain(&core)?)?.compose(&kmp.inverse())?
            }
            LemmaKind::L4 => {
                let kjp = Automorphism::magnus_conj(n, j, p)?;
                let kmp = Automorphism::magnus_conj(n, m, p)?;
                kjp.compose(&kmp)?
                    .compose(&compose_chain(&core)?)?
                    .compose(&kmp.inverse())?
                    .compose(&kjp.inverse())?
            }
        };

        let mut expected_tau = Tau1Coords::zero(n);
        for (b, g) in [(m, l), (j, m), (l, j)] {
            let (key, sign) = MagnusGenKey::comm(i, b, g)?.expect("distinct indices");
            expected_tau.add_key(key, &BigInt::from(sign));
        }

        if omega != composite || tau1_coords(&omega)? != expected_tau {
            failures += 1;
        }
    }
    let pass = failures == 0;
    Ok((
        json!({"n": n}),
        json!({"tuples": tuples.len(), "failures": 0}),
        json!({"tuples": tuples.len(), "failures": failures}),
        pass,
    ))
}

/// The displayed eq-mayumi K-sum for σ_m over W_{n,d}, with all conjugating
/// exponents read mod d through b_0 insertions.
fn mayumi_sum(m: usize, ctx: &SubgroupContext) -> Result<Tau1Coords> {
    let d = ctx.d();
    let mut out = Tau1Coords::zero(ctx.subgroup_rank());
    for k in 0..d {
        let alpha = ctx.letter_index(k, 2);
        let a1 = (m + k) % d;
        let a2 = (k + 1) % d;
        let a3 = k;
        for (bk, gk) in [(a1, a3), (a2, a1), (a3, a2)] {
            if let Some((key, sign)) =
                MagnusGenKey::comm(alpha, ctx.letter_index(bk, 3), ctx.letter_index(gk, 3))?
            {
                out.add_key(key, &BigInt::from(sign));
            }
        }
    }
    Ok(out)
}

/// eq-mayumi: the direct restriction route and the displayed K-sum agree
/// coordinate-wise for every m.
fn mayumi(params: &VerifyParams) -> Result<Outcome> {
    let n = params.n.unwrap_or(3);
    let d = params.d.unwrap_or(4);
    check_caps(n, d)?;
    let ctx = build_context(n, d)?;
    let ms: Vec<usize> = match params.m {
        Some(m) => vec![m],
        None => (2..=d - 1).collect(),
    };
    let mut mismatches = Vec::new();
    for &m in &ms {
        let direct = restricted_tau1(&make_sigma(m, 2, 3, n)?, &ctx)?;
        let displayed = mayumi_sum(m, &ctx)?;
        if direct != displayed {
            mismatches.push(m);
        }
    }
    let pass = mismatches.is_empty();
    Ok((
        json!({"n": n, "d": d, "m": ms}),
        json!({"mismatching_m": []}),
        json!({"mismatching_m": mismatches}),
        pass,
    ))
}

/// Rank of {π(σ_m)}_{m=2..d-1} equals d-2 exactly.
fn rank1(params: &VerifyParams) -> Result<Outcome> {
    let n = params.n.unwrap_or(3);
    let d = params.d.unwrap_or(6);
    check_caps(n, d)?;
    if n < 3 || d < 3 {
        return Err(Error::BadParameter(
            "rank checks need n >= 3 and d >= 3".into(),
        ));
    }
    let ctx = build_context(n, d)?;
    let mut matrix = CoordMatrix::new(ctx.subgroup_rank());
    for m in 2..=d - 1 {
        matrix.push_row(super::pi(&make_sigma(m, 2, 3, n)?, &ctx)?)?;
    }
    let got = matrix.rank();
    let expected = d - 2;
    Ok((
        json!({"n": n, "d": d}),
        json!({"rank": expected}),
        json!({"rank": got}),
        got == expected,
    ))
}

/// Rank of {π(σ_m^{j,s})} equals (d-2)(n-1)(n-2) exactly.
fn rank2(params: &VerifyParams) -> Result<Outcome> {
    let n = params.n.unwrap_or(4);
    let d = params.d.unwrap_or(3);
    check_caps(n, d)?;
    if n < 3 || d < 3 {
        return Err(Error::BadParameter(
            "rank checks need n >= 3 and d >= 3".into(),
        ));
    }
    let ctx = build_context(n, d)?;
    let mut matrix = CoordMatrix::new(ctx.subgroup_rank());
    let mut members = 0usize;
    for m in 2..=d - 1 {
        for j in 2..=n {
            for s in 2..=n {
                if s != j {
                    matrix.push_row(super::pi(&make_sigma(m, j, s, n)?, &ctx)?)?;
                    members += 1;
                }
            }
        }
    }
    let got = matrix.rank();
    let expected = (d - 2) * (n - 1) * (n - 2);
    Ok((
        json!({"n": n, "d": d, "elements": members}),
        json!({"rank": expected}),
        json!({"rank": got}),
        got == expected,
    ))
}

/// τ₄ of the undetected element σ: each generator displacement vanishes
/// through degree 4; the degree-5 parts are nonzero Lie elements; for
/// i ≥ 2 they equal [[[x4,x2],x_i],[x2,x3]] - [[[x3,x2],x_i],[x2,x4]].
fn tau4(params: &VerifyParams) -> Result<Outcome> {
    let n = params.n.unwrap_or(4);
    check_caps(n, 2)?;
    let sigma = make_undetected(n)?;
    let depth = johnson_depth(&sigma, 5)?;
    let mut bad_rows = Vec::new();
    let x = |i: usize| Tensor::generator(n, i);
    for i in 1..=n {
        let xi = Word::generator(n, i)?;
        let w = xi.inverse().concat(sigma.image(i))?;
        let s = expand(&w, 5)?;
        let t5 = s.graded_part(5)?;
        let mut ok = s.vanishes_through(4) && !t5.is_zero();
        ok = ok && lie_decompose(&t5, n).is_ok();
        if i >= 2 {
            let first = Tensor::bracket(
                &Tensor::bracket(&Tensor::bracket(&x(4), &x(2)), &x(i)),
                &Tensor::bracket(&x(2), &x(3)),
            );
            let second = Tensor::bracket(
                &Tensor::bracket(&Tensor::bracket(&x(3), &x(2)), &x(i)),
                &Tensor::bracket(&x(2), &x(4)),
            );
            ok = ok && t5 == first.sub(&second);
        }
        if !ok {
            bad_rows.push(i);
        }
    }
    let pass = depth == 4 && bad_rows.is_empty();
    Ok((
        json!({"n": n}),
        json!({"depth": 4, "bad_rows": []}),
        json!({"depth": depth, "bad_rows": bad_rows}),
        pass,
    ))
}

/// π of the undetected element is the zero vector for every tested d.
fn undetected(params: &VerifyParams) -> Result<Outcome> {
    let n = params.n.unwrap_or(4);
    let ds: Vec<usize> = match params.d {
        Some(d) => vec![d],
        None => vec![3, 4],
    };
    for &d in &ds {
        check_caps(n, d)?;
    }
    let sigma = make_undetected(n)?;
    let mut nonzero_d = Vec::new();
    for &d in &ds {
        let ctx = build_context(n, d)?;
        let v = super::pi(&sigma, &ctx)?;
        if !v.iter().all(Zero::is_zero) {
            nonzero_d.push(d);
        }
    }
    let pass = nonzero_d.is_empty();
    Ok((
        json!({"n": n, "d": ds}),
        json!({"nonzero_d": []}),
        json!({"nonzero_d": nonzero_d}),
        pass,
    ))
}

/// Kernel membership at n = 2: inner automorphisms by random second-derived
/// words are in the kernel; inner automorphisms by [x1,x2], x1 and
/// [x1,[x1,x2]] are not.
fn n2(params: &VerifyParams) -> Result<Outcome> {
    let cases = if params.cases == 0 { 100 } else { params.cases };
    let mut sampler = Sampler::new(params.seed);
    let mut positive_failures = 0usize;
    for _ in 0..cases {
        let w = sampler.second_derived_word(2);
        if !kernel_member(&Automorphism::inner(&w))? {
            positive_failures += 1;
        }
    }
    let mut negative_failures = 0usize;
    for text in ["[x1,x2]", "x1", "[x1,[x1,x2]]"] {
        let w = crate::parse_word(text, 2)?;
        if kernel_member(&Automorphism::inner(&w))? {
            negative_failures += 1;
        }
    }
    let pass = positive_failures == 0 && negative_failures == 0;
    Ok((
        json!({"n": 2, "cases": cases, "seed": params.seed}),
        json!({"positive_failures": 0, "negative_failures": 0}),
        json!({"positive_failures": positive_failures, "negative_failures": negative_failures}),
        pass,
    ))
}

/// One draw from {Magnus generators, inner automorphisms, the transvection
/// x1 ↦ x1 x2}.
fn crossed_pool(sampler: &mut Sampler, n: usize) -> Automorphism {
    match sampler.gen_range(0, 2) {
        0 => sampler.magnus_generator(n),
        1 => {
            let len = sampler.gen_range(1, 6);
            Automorphism::inner(&sampler.word(n, len))
        }
        _ => {
            let x1 = Word::generator(n, 1).unwrap();
            let x2 = Word::generator(n, 2).unwrap();
            let mut images: Vec<Word> = (1..=n).map(|i| Word::generator(n, i).unwrap()).collect();
            let mut inverses = images.clone();
            images[0] = x1.concat(&x2).unwrap();
            inverses[0] = x1.concat(&x2.inverse()).unwrap();
            Automorphism::from_images(n, images, inverses).unwrap()
        }
    }
}

/// The crossed-homomorphism law r_M(στ) = r_M(σ)^{τ*} · r_M(τ) on random
/// pairs, including non-IA members.
fn crossed(params: &VerifyParams) -> Result<Outcome> {
    let n = params.n.unwrap_or(3);
    check_caps(n, 2)?;
    let cases = if params.cases == 0 { 1000 } else { params.cases };
    let mut sampler = Sampler::new(params.seed);
    let mut failures = 0usize;
    for _ in 0..cases {
        let sigma = crossed_pool(&mut sampler, n);
        let tau = crossed_pool(&mut sampler, n);
        let lhs = magnus_matrix(&sigma.compose(&tau)?);
        let rhs = magnus_matrix(&sigma)
            .substitute(&tau)?
            .mul(&magnus_matrix(&tau))?;
        if lhs != rhs {
            failures += 1;
        }
    }
    Ok((
        json!({"n": n, "cases": cases, "seed": params.seed}),
        json!({"failures": 0}),
        json!({"failures": failures}),
        failures == 0,
    ))
}

/// The fundamental Fox identity Σ_i (∂w/∂x_i)(x_i - 1) = w - 1 in Z[F_n] on
/// random words.
fn foxid(params: &VerifyParams) -> Result<Outcome> {
    let n = params.n.unwrap_or(3);
    check_caps(n, 2)?;
    let cases = if params.cases == 0 { 1000 } else { params.cases };
    let mut sampler = Sampler::new(params.seed);
    let mut failures = 0usize;
    for _ in 0..cases {
        let len = sampler.gen_range(0, 64);
        let w = sampler.word(n, len);
        let mut acc = FreeRingElem::zero(n);
        for i in 1..=n {
            let mut factor =
                FreeRingElem::from_word(Word::generator(n, i)?, BigInt::from(1));
            factor.add_term(Word::identity(n), &BigInt::from(-1));
            acc = acc.add(&fox_free(&w, i)?.mul(&factor)?)?;
        }
        let mut rhs = FreeRingElem::from_word(w.clone(), BigInt::from(1));
        rhs.add_term(Word::identity(n), &BigInt::from(-1));
        if acc != rhs {
            failures += 1;
        }
    }
    Ok((
        json!({"n": n, "cases": cases, "seed": params.seed}),
        json!({"failures": 0}),
        json!({"failures": failures}),
        failures == 0,
    ))
}
