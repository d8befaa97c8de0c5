use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use thinlab_core::closure::ClosureClass;
use thinlab_core::image::sl_order;
use thinlab_core::probes::{
    coset_enumerate, rewrite_in_st, s_matrix, t_matrix, thinness_verdict, Classification, CosetEvidence,
    CosetOutcome, CosetTable, MinusIdentity, NotThinReason, ProbeConfig, PslLetter,
};
use thinlab_core::{catalog, enumerate_image, GeneratorSet, IntMatrix};

/// A matrix of `SL₂(Z)` with first column `(a, c)`, `gcd(a, c) = 1`.
fn sl2_with_column(a: i64, c: i64) -> IntMatrix {
    let e = a.extended_gcd(&c);
    // x·a + y·c = g = ±1
    let (x, y) = (e.x * e.gcd, e.y * e.gcd);
    IntMatrix::from_rows(&[[a, -y], [c, x]]).unwrap()
}

fn sl2_element() -> impl Strategy<Value = IntMatrix> {
    (-1_000_000i64..=1_000_000, -1_000_000i64..=1_000_000, -20i64..=20)
        .prop_filter("coprime column", |(a, c, _)| a.gcd(c) == 1)
        .prop_map(|(a, c, k)| {
            // shear the second column so it is not always the minimal one
            let m = sl2_with_column(a, c);
            m.mul(&t_matrix().pow(k).unwrap()).unwrap()
        })
}

/// Independent check of a closed table: permutations, relators, base coset
/// fixed by every subgroup word, and transitivity.
fn certify(t: &CosetTable) -> Result<(), String> {
    let k = t.index();
    let perm = |p: &[u32]| {
        let mut seen = vec![false; k];
        p.len() == k && p.iter().all(|&x| (x as usize) < k && !std::mem::replace(&mut seen[x as usize], true))
    };
    if !perm(&t.s_perm) || !perm(&t.t_perm) {
        return Err("not permutations".into());
    }
    let mut t_inv = vec![0u32; k];
    for (i, &x) in t.t_perm.iter().enumerate() {
        t_inv[x as usize] = i as u32;
    }
    let act = |c: u32, l: PslLetter| match l {
        PslLetter::S => t.s_perm[c as usize],
        PslLetter::T => t.t_perm[c as usize],
        PslLetter::TInv => t_inv[c as usize],
    };
    for c in 0..k as u32 {
        if act(act(c, PslLetter::S), PslLetter::S) != c {
            return Err(format!("s^2 moves {c}"));
        }
        if act(act(act(c, PslLetter::T), PslLetter::T), PslLetter::T) != c {
            return Err(format!("t^3 moves {c}"));
        }
    }
    for w in &t.subgroup {
        if w.iter().fold(0, |c, &l| act(c, l)) != 0 {
            return Err("subgroup word moves coset 0".into());
        }
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0u32];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for l in [PslLetter::S, PslLetter::T] {
            let d = act(c, l);
            if !std::mem::replace(&mut seen[d as usize], true) {
                stack.push(d);
            }
        }
    }
    if seen.iter().all(|&x| x) {
        Ok(())
    } else {
        Err("not transitive".into())
    }
}

/// `[PSL₂(Z/p) : image of ⟨H, −I⟩]`, which must divide the PSL₂(Z) index.
fn index_mod_p(gens: &GeneratorSet, p: u64) -> u64 {
    let mut with_minus: Vec<IntMatrix> = gens.generators().to_vec();
    with_minus.push(IntMatrix::identity(2).neg());
    let g = GeneratorSet::new("h", with_minus).unwrap();
    let order = enumerate_image(&g, p, 1 << 20).unwrap().order() as u64;
    let target: u64 = sl_order(2, p).unwrap().try_into().unwrap();
    target / order
}

fn psl_words(gens: &GeneratorSet) -> Vec<Vec<PslLetter>> {
    gens.generators()
        .iter()
        .map(|g| rewrite_in_st(g).unwrap().to_psl().unwrap())
        .collect()
}

#[test]
fn fibonacci_matrix_rewrites_short() {
    let a = IntMatrix::from_rows(&[[2, 1], [1, 1]]).unwrap();
    let w = rewrite_in_st(&a).unwrap();
    assert_eq!(w.eval(), a);
    assert!(w.len() <= BigInt::from(10));
}

#[test]
fn index_doubling_rule() {
    let cfg = ProbeConfig::default();
    for (id, psl, sl2) in [("ex1", 1, 1), ("ex2", 6, 12)] {
        let v = thinness_verdict(&catalog::generators(id).unwrap(), &cfg).unwrap();
        match &v.classification {
            Classification::ProvenNotThin(NotThinReason::Index {
                psl_index,
                sl2_index,
                minus_identity,
            }) => {
                assert_eq!((*psl_index, *sl2_index), (psl, Some(sl2)), "{id}");
                match (id, minus_identity) {
                    ("ex1", MinusIdentity::Present { .. }) => {}
                    ("ex2", MinusIdentity::Excluded { modulus: 4 }) => {}
                    other => panic!("{other:?}"),
                }
            }
            other => panic!("{id}: {other:?}"),
        }
    }
}

#[test]
fn verdicts_are_backed() {
    let cfg = ProbeConfig::default();
    for e in catalog::ENTRIES {
        let g = e.generator_set();
        if g.n() != 2 || !g.is_special() {
            continue;
        }
        let v = thinness_verdict(&g, &cfg).unwrap();
        if let Classification::ProvenNotThin(NotThinReason::Index { psl_index, .. }) = &v.classification {
            match &v.coset {
                Some(CosetEvidence::Closed(t)) => {
                    certify(t).unwrap();
                    assert_eq!(t.index(), *psl_index);
                }
                other => panic!("{}: index without a table: {other:?}", e.id),
            }
        }
        if v.closure.class == ClosureClass::Undetermined {
            assert_eq!(v.classification, Classification::Unknown, "{}", e.id);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rewrite_round_trip(m in sl2_element()) {
        prop_assert_eq!(m.det(), BigInt::from(1));
        let w = rewrite_in_st(&m).unwrap();
        prop_assert_eq!(w.eval(), m.clone());
        let neg = m.neg();
        prop_assert_eq!(rewrite_in_st(&neg).unwrap().eval(), neg);
    }

    #[test]
    fn closed_tables_certify(
        words in prop::collection::vec(prop::collection::vec(-3i64..=3, 1..6), 1..4)
    ) {
        let mats: Vec<IntMatrix> = words
            .iter()
            .map(|exps| {
                exps.iter().enumerate().fold(IntMatrix::identity(2), |m, (i, &e)| {
                    let f = if i % 2 == 0 { t_matrix() } else { s_matrix() };
                    m.mul(&f.pow(e).unwrap()).unwrap()
                })
            })
            .collect();
        let gens = GeneratorSet::new("h", mats).unwrap();
        if let CosetOutcome::Closed(t) = coset_enumerate(&psl_words(&gens), 5_000) {
            prop_assert!(certify(&t).is_ok(), "{:?}", certify(&t));
            prop_assert!(t.verify().is_ok());
            for p in [2u64, 3, 5, 7] {
                let k = index_mod_p(&gens, p) as usize;
                prop_assert_eq!(t.index() % k, 0, "p={} k={} index={}", p, k, t.index());
            }
        }
    }
}

#[test]
fn random_subgroups_often_close() {
    // keeps the property above from passing vacuously
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move |k: i64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % (2 * k as u64 + 1)) as i64 - k
    };
    let mut closed = 0;
    for _ in 0..200 {
        let mats: Vec<IntMatrix> = (0..2)
            .map(|_| {
                (0..4).fold(IntMatrix::identity(2), |m, i| {
                    let f = if i % 2 == 0 { t_matrix() } else { s_matrix() };
                    m.mul(&f.pow(next(3)).unwrap()).unwrap()
                })
            })
            .collect();
        let gens = GeneratorSet::new("h", mats).unwrap();
        if let CosetOutcome::Closed(t) = coset_enumerate(&psl_words(&gens), 5_000) {
            certify(&t).unwrap();
            closed += 1;
        }
    }
    assert!(closed >= 40, "only {closed} of 200 closed");
}
