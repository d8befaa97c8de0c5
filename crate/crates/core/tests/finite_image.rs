use num_bigint::BigUint;
use proptest::prelude::*;
use thinlab_core::image::{contains_mod, gl_order, is_surjective, lift_to_integers, sl_order, Membership, Surjectivity};
use thinlab_core::{catalog, enumerate_image, eval_word, reduce_mod, GeneratorSet, IntMatrix, ModMatrix};

const CAP: usize = 1 << 20;

fn sl2_brute_force(p: u64) -> usize {
    let mut count = 0;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c) % p == 1 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[test]
fn sl2_orders_match_brute_force() {
    for p in [2, 3, 5, 7, 11] {
        assert_eq!(sl_order(2, p).unwrap(), BigUint::from(sl2_brute_force(p)), "p={p}");
    }
    assert_eq!(sl_order(3, 7).unwrap(), BigUint::from(5_630_688u64));
}

#[test]
fn ex5_small_images() {
    let g = catalog::generators("ex5").unwrap();
    let img = enumerate_image(&g, 3, CAP).unwrap();
    assert!(img.is_complete());
    assert_eq!(img.order(), 24);
    let v = is_surjective(&g, 2, CAP).unwrap();
    assert_eq!(v.surjective, Surjectivity::No);
    assert_eq!(v.reason.unwrap().as_str(), "collapsed generator");
}

#[test]
fn closure_under_generators() {
    for id in ["ex1", "ex2", "ex4", "ex5", "ex7"] {
        let g = catalog::generators(id).unwrap();
        for m in [3, 4, 5, 8] {
            let img = enumerate_image(&g, m, CAP).unwrap();
            assert!(img.is_complete());
            for x in img.elements() {
                for s in img.letter_matrices() {
                    assert!(img.contains(&x.mul(s).unwrap()), "{id} mod {m}");
                }
            }
            assert!(img.witness(0).is_empty());
            assert!(img.element(0).is_identity());
        }
    }
}

#[test]
fn lagrange() {
    for e in catalog::ENTRIES {
        let g = e.generator_set();
        if !g.is_special() {
            continue;
        }
        for p in [3, 5, 7] {
            if e.n() >= 3 && p > 3 {
                continue;
            }
            let img = enumerate_image(&g, p, CAP).unwrap();
            if !img.is_complete() {
                continue;
            }
            let target = sl_order(g.n(), p).unwrap();
            assert_eq!(target % BigUint::from(img.order()), BigUint::from(0u8), "{} mod {p}", e.id);
            let gl = gl_order(g.n(), p).unwrap();
            assert_eq!(gl % BigUint::from(img.order()), BigUint::from(0u8));
        }
    }
}

#[test]
fn crt_projection() {
    // the image mod m1*m2 maps onto the images mod m1 and mod m2
    for id in ["ex2", "ex5", "ex3"] {
        let g = catalog::generators(id).unwrap();
        for (m1, m2) in [(3u64, 4u64), (3, 5), (4, 5)] {
            let big = enumerate_image(&g, m1 * m2, CAP).unwrap();
            for m in [m1, m2] {
                let small = enumerate_image(&g, m, CAP).unwrap();
                let projected: std::collections::HashSet<ModMatrix> = big
                    .elements()
                    .map(|x| reduce_mod(&x.lift(), m).unwrap())
                    .collect();
                assert_eq!(projected.len(), small.order(), "{id} {m1}x{m2} -> {m}");
                assert!(projected.iter().all(|x| small.contains(x)));
            }
            assert!(big.order() <= enumerate_image(&g, m1, CAP).unwrap().order() * enumerate_image(&g, m2, CAP).unwrap().order());
        }
    }
}

#[test]
fn lifting_footnote() {
    let g = catalog::generators("ex1").unwrap();
    let target = ModMatrix::from_rows(&[[2, 0], [1, 3]], 5).unwrap();
    let (gamma, w) = lift_to_integers(&g, 5, &target, CAP).unwrap();
    assert_eq!(gamma.det(), 1.into());
    assert_eq!(reduce_mod(&gamma, 5).unwrap(), target);
    assert_eq!(eval_word(&g, &w).unwrap(), gamma);

    let bad = ModMatrix::from_rows(&[[1, 2], [3, 4]], 5).unwrap();
    let gl = catalog::generators("gl2-demo").unwrap();
    match contains_mod(&gl, 5, &bad, CAP).unwrap() {
        Membership::No(why) => assert_eq!(why.as_str(), "determinant not in {±1}"),
        other => panic!("{other:?}"),
    }
}

fn sets() -> Vec<GeneratorSet> {
    ["ex1", "ex2", "ex5", "ex7", "ex9"].iter().map(|id| catalog::generators(id).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn witnesses_are_sound(which in 0usize..5, m in prop::sample::select(vec![3u64, 4, 5, 7]), pick in any::<prop::sample::Index>()) {
        let g = &sets()[which];
        if g.n() >= 3 && m > 4 {
            return Ok(());
        }
        let img = enumerate_image(g, m, CAP).unwrap();
        let i = pick.index(img.order());
        let w = img.witness(i);
        prop_assert_eq!(w.len(), img.depth(i));
        let x: IntMatrix = eval_word(g, &w).unwrap();
        prop_assert_eq!(reduce_mod(&x, m).unwrap(), img.element(i));
    }
}
