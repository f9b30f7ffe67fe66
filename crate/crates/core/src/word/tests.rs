use super::*;
use proptest::prelude::*;

/// Naive single-letter stack reduction, independent of `Word`'s RLE path.
/// Used as the oracle for every derived expectation in this module.
fn oracle_reduce(letters: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut stack: Vec<(usize, i64)> = Vec::new();
    for &(g, e) in letters {
        let sign = if e >= 0 { 1 } else { -1 };
        for _ in 0..e.abs() {
            if let Some(&(tg, ts)) = stack.last() {
                if tg == g && ts == -sign {
                    stack.pop();
                    continue;
                }
            }
            stack.push((g, sign));
        }
    }
    // re-pack into runs
    let mut runs: Vec<(usize, i64)> = Vec::new();
    for (g, s) in stack {
        match runs.last_mut() {
            Some((rg, re)) if *rg == g => *re += s,
            _ => runs.push((g, s)),
        }
    }
    runs
}

fn wd(rank: usize, text: &str) -> Word {
    parse_word(text, rank).unwrap()
}

fn word_strategy(rank: usize, max_runs: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(
        (1..=rank, prop_oneof![-3..=-1i64, 1..=3i64]),
        0..max_runs,
    )
    .prop_map(move |letters| Word::from_letters(rank, letters).unwrap())
}

fn auto_strategy(rank: usize) -> impl Strategy<Value = Automorphism> {
    let gens: Vec<(usize, usize)> = (1..=rank)
        .flat_map(|i| (1..=rank).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();
    let comms: Vec<(usize, usize, usize)> = (1..=rank)
        .flat_map(|i| {
            (1..=rank).flat_map(move |j| (1..=rank).map(move |l| (i, j, l)))
        })
        .filter(|&(i, j, l)| i != j && i != l && j != l)
        .collect();
    let pick = prop_oneof![
        prop::sample::select(gens).prop_map(move |(i, j)| {
            Automorphism::magnus_conj(rank, i, j).unwrap()
        }),
        prop::sample::select(comms).prop_map(move |(i, j, l)| {
            Automorphism::magnus_comm(rank, i, j, l).unwrap()
        }),
    ];
    prop::collection::vec(pick, 1..4).prop_map(move |parts| {
        let mut auto = Automorphism::identity(rank);
        for p in parts {
            auto = auto.compose(&p).unwrap();
        }
        auto
    })
}

#[test]
fn parse_cancels_to_identity() {
    assert!(wd(2, "x1 x1^-1").is_identity());
}

#[test]
fn parse_commutator_sugar() {
    let w = wd(2, "[x1,x2]");
    assert_eq!(w.letters(), &[(1, 1), (2, 1), (1, -1), (2, -1)]);
}

#[test]
fn parse_section4_multiplier() {
    // x2 [[x1,x3],[x1^2,x3]] reduces to 14 runs; cross-check against the
    // naive oracle on the fully expanded letter sequence.
    let w = wd(3, "x2 [[x1,x3],[x1^2,x3]]");
    let u = [(1, 1), (3, 1), (1, -1), (3, -1)];
    let v = [(1, 2), (3, 1), (1, -2), (3, -1)];
    let mut expanded: Vec<(usize, i64)> = vec![(2, 1)];
    expanded.extend_from_slice(&u);
    expanded.extend_from_slice(&v);
    expanded.extend(u.iter().rev().map(|&(g, e)| (g, -e)));
    expanded.extend(v.iter().rev().map(|&(g, e)| (g, -e)));
    assert_eq!(w.letters(), oracle_reduce(&expanded).as_slice());
    assert_eq!(w.len(), 14);
}

#[test]
fn parse_rejects_out_of_range_index() {
    assert!(matches!(
        parse_word("x3", 2),
        Err(Error::IndexOutOfRange { index: 3, rank: 2 })
    ));
}

#[test]
fn parse_reports_syntax_error_position() {
    match parse_word("x1 ^", 2) {
        Err(Error::Parse { pos, .. }) => assert!(pos >= 3),
        other => panic!("expected parse error, got {:?}", other),
    }
}

#[test]
fn parse_parenthesized_power() {
    assert_eq!(wd(2, "(x1 x2)^2"), wd(2, "x1 x2 x1 x2"));
    assert_eq!(wd(2, "(x1 x2)^-1"), wd(2, "x2^-1 x1^-1"));
}

#[test]
fn concat_single_cancellation() {
    let a = wd(2, "x1 x2");
    let b = wd(2, "x2^-1 x1");
    assert_eq!(a.concat(&b).unwrap().letters(), &[(1, 2)]);
}

#[test]
fn concat_rank_mismatch_rejected() {
    let a = wd(2, "x1");
    let b = wd(3, "x1");
    assert!(matches!(a.concat(&b), Err(Error::RankMismatch { .. })));
}

#[test]
fn inverse_reverses_and_negates() {
    let w = wd(2, "x1 x2^-1");
    assert_eq!(w.inverse().letters(), &[(2, 1), (1, -1)]);
    assert!(Word::identity(3).inverse().is_identity());
}

#[test]
fn commutator_of_equal_words_is_identity() {
    let x1 = wd(2, "x1");
    assert!(Word::commutator(&x1, &x1).unwrap().is_identity());
}

#[test]
fn commutator_section5_word_has_16_letters() {
    // [[x2,x3],[x2,x4]]: expand and reduce via the oracle.
    let a = wd(4, "[x2,x3]");
    let b = wd(4, "[x2,x4]");
    let c = Word::commutator(&a, &b).unwrap();
    let mut expanded: Vec<(usize, i64)> = Vec::new();
    expanded.extend_from_slice(a.letters());
    expanded.extend_from_slice(b.letters());
    expanded.extend(a.letters().iter().rev().map(|&(g, e)| (g, -e)));
    expanded.extend(b.letters().iter().rev().map(|&(g, e)| (g, -e)));
    assert_eq!(c.letters(), oracle_reduce(&expanded).as_slice());
    assert_eq!(c.letter_count(), 16);
}

#[test]
fn apply_identity_fixes_words() {
    let id = Automorphism::identity(3);
    let w = wd(3, "x1 x2^-2 x3");
    assert_eq!(id.apply(&w).unwrap(), w);
}

#[test]
fn apply_magnus_conj() {
    let k12 = Automorphism::magnus_conj(2, 1, 2).unwrap();
    assert_eq!(k12.apply(&wd(2, "x1")).unwrap(), wd(2, "x2^-1 x1 x2"));
}

#[test]
fn apply_magnus_comm() {
    let k123 = Automorphism::magnus_comm(3, 1, 2, 3).unwrap();
    assert_eq!(
        k123.apply(&wd(3, "x1")).unwrap(),
        wd(3, "x1 x2 x3 x2^-1 x3^-1")
    );
}

#[test]
fn compose_with_inverse_is_identity() {
    let k = Automorphism::magnus_comm(4, 2, 1, 3).unwrap();
    assert!(k.compose(&k.inverse()).unwrap().is_identity());
}

#[test]
fn compose_chain_reproduces_conjugated_image() {
    // K_il K_iml K_ijm K_ilj K_il^{-1} applied to x_i, with (i,j,l,m) = (1,2,3,4),
    // lands on x_i x_j x_l^{-1} x_m x_j^{-1} x_l x_m^{-1}.
    let n = 4;
    let (i, j, l, m) = (1, 2, 3, 4);
    let chain = [
        Automorphism::magnus_conj(n, i, l).unwrap(),
        Automorphism::magnus_comm(n, i, m, l).unwrap(),
        Automorphism::magnus_comm(n, i, j, m).unwrap(),
        Automorphism::magnus_comm(n, i, l, j).unwrap(),
        Automorphism::magnus_conj(n, i, l).unwrap().inverse(),
    ];
    let mut omega = Automorphism::identity(n);
    for part in &chain {
        omega = omega.compose(part).unwrap();
    }
    assert_eq!(
        omega.apply(&wd(n, "x1")).unwrap(),
        wd(n, "x1 x2 x3^-1 x4 x2^-1 x3 x4^-1")
    );
    for t in 2..=n {
        let xt = Word::generator(n, t).unwrap();
        assert_eq!(omega.apply(&xt).unwrap(), xt);
    }
}

#[test]
fn magnus_comm_degenerate_is_identity() {
    // K_ijj = 1 and K_ilj = K_ijl^{-1}.
    assert!(Automorphism::magnus_comm(3, 1, 2, 2)
        .unwrap()
        .is_identity());
    let kijl = Automorphism::magnus_comm(3, 1, 2, 3).unwrap();
    let kilj = Automorphism::magnus_comm(3, 1, 3, 2).unwrap();
    assert!(kijl.compose(&kilj).unwrap().is_identity());
}

#[test]
fn from_images_rejects_non_inverse_table() {
    let images = vec![wd(2, "x1 x2"), wd(2, "x2")];
    let bad_inverses = vec![wd(2, "x1"), wd(2, "x2")];
    assert!(matches!(
        Automorphism::from_images(2, images, bad_inverses),
        Err(Error::NotAnAutomorphism(_))
    ));
}

#[test]
fn from_spec_forms() {
    let k = Automorphism::from_spec("K 1 2", 3).unwrap();
    assert_eq!(k, Automorphism::magnus_conj(3, 1, 2).unwrap());
    let k3 = Automorphism::from_spec("K 1 2 3", 3).unwrap();
    assert_eq!(k3, Automorphism::magnus_comm(3, 1, 2, 3).unwrap());
    let inner = Automorphism::from_spec("inner [x1,x2]", 3).unwrap();
    assert_eq!(inner, Automorphism::inner(&wd(3, "[x1,x2]")));
    let sig = Automorphism::from_spec("sigma 2 2 3", 3).unwrap();
    assert_eq!(sig, Automorphism::kernel_generator(3, 2, 2, 3).unwrap());
    let mapped =
        Automorphism::from_spec("map x1 -> x1 x2; map x2 -> x2; inv x1 -> x1 x2^-1; inv x2 -> x2", 2)
            .unwrap();
    assert_eq!(mapped.apply(&wd(2, "x1")).unwrap(), wd(2, "x1 x2"));
}

#[test]
fn inner_is_ia_and_identity_on_trivial_word() {
    assert!(Automorphism::inner(&Word::identity(3)).is_identity());
    let g = wd(3, "x1 x2^-1 x3 x1");
    assert!(Automorphism::inner(&g).is_ia());
}

#[test]
fn ia_check_rejects_transvection() {
    let t = Automorphism::from_spec("map x1 -> x1 x2; map x2 -> x2; inv x1 -> x1 x2^-1; inv x2 -> x2", 2)
        .unwrap();
    assert!(!t.is_ia());
    assert!(matches!(t.require_ia(), Err(Error::NotIa { index: 1 })));
}

proptest! {
    #[test]
    fn reduction_matches_oracle(letters in prop::collection::vec((1usize..=3, -4i64..=4), 0..30)) {
        let filtered: Vec<(usize, i64)> = letters.into_iter().filter(|&(_, e)| e != 0).collect();
        let w = Word::from_letters(3, filtered.clone()).unwrap();
        prop_assert_eq!(w.letters(), oracle_reduce(&filtered).as_slice());
    }

    #[test]
    fn product_with_inverse_is_identity(w in word_strategy(3, 20)) {
        prop_assert!(w.concat(&w.inverse()).unwrap().is_identity());
        prop_assert!(w.inverse().concat(&w).unwrap().is_identity());
    }

    #[test]
    fn inverse_is_involutive(w in word_strategy(4, 20)) {
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn concat_is_associative(
        a in word_strategy(3, 12),
        b in word_strategy(3, 12),
        c in word_strategy(3, 12),
    ) {
        let left = a.concat(&b).unwrap().concat(&c).unwrap();
        let right = a.concat(&b.concat(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn insert_cancel_fuzz_preserves_canonical_form(
        w in word_strategy(3, 12),
        at in 0usize..12,
        g in 1usize..=3,
        e in 1i64..=3,
    ) {
        // Splice g^e g^{-e} into the letter sequence; reduction must recover w.
        let mut letters: Vec<(usize, i64)> = w.letters().to_vec();
        let at = at.min(letters.len());
        letters.insert(at, (g, -e));
        letters.insert(at, (g, e));
        prop_assert_eq!(Word::from_letters(3, letters).unwrap(), w);
    }

    #[test]
    fn apply_is_a_homomorphism(
        sigma in auto_strategy(3),
        a in word_strategy(3, 10),
        b in word_strategy(3, 10),
    ) {
        let lhs = sigma.apply(&a.concat(&b).unwrap()).unwrap();
        let rhs = sigma.apply(&a).unwrap().concat(&sigma.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_is_associative_and_matches_apply(
        a in auto_strategy(3),
        b in auto_strategy(3),
        c in auto_strategy(3),
        w in word_strategy(3, 8),
    ) {
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        // right-action order: apply a first, then b
        let via_compose = a.compose(&b).unwrap().apply(&w).unwrap();
        let stepwise = b.apply(&a.apply(&w).unwrap()).unwrap();
        prop_assert_eq!(via_compose, stepwise);
        prop_assert!(ab_c.compose(&ab_c.inverse()).unwrap().is_identity());
    }

    #[test]
    fn identity_automorphism_is_neutral(a in auto_strategy(4)) {
        let id = Automorphism::identity(4);
        prop_assert_eq!(&a.compose(&id).unwrap(), &a);
        prop_assert_eq!(&id.compose(&a).unwrap(), &a);
    }
}
