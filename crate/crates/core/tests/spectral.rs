use num_bigint::BigInt;
use proptest::prelude::*;
use thinlab_core::linalg::rank;
use thinlab_core::probes::{s_matrix, t_matrix};
use thinlab_core::spectral::{lambda1_iterative, laplacian_spectrum_dense};
use thinlab_core::{build_cayley, catalog, enumerate_image, CayleyGraph, GeneratorSet, IntMatrix};

fn st_word(exps: &[i64]) -> IntMatrix {
    let mut m = IntMatrix::identity(2);
    for (i, &e) in exps.iter().enumerate() {
        let f = if i % 2 == 0 { t_matrix().pow(e) } else { s_matrix().pow(e) };
        m = m.mul(&f.unwrap()).unwrap();
    }
    m
}

/// Two random elements of `SL_2(Z)` as short `T^a S^b …` products.
fn pair() -> impl Strategy<Value = GeneratorSet> {
    let w = || prop::collection::vec(-4i64..=4, 1..6);
    (w(), w()).prop_map(|(a, b)| GeneratorSet::new("random", vec![st_word(&a), st_word(&b)]).unwrap())
}

fn graph(g: &GeneratorSet, p: u64, psl: bool) -> CayleyGraph {
    build_cayley(&enumerate_image(g, p, 1 << 20).unwrap(), psl).unwrap()
}

fn disjoint_copies(g: &CayleyGraph, copies: usize) -> CayleyGraph {
    let v = g.vertex_count() as u32;
    let lists = (0..copies)
        .flat_map(|c| (0..v).map(move |i| (c as u32, i)))
        .map(|(c, i)| g.neighbors(i as usize).iter().map(|&w| w + c * v).collect())
        .collect();
    CayleyGraph::from_adjacency(lists).unwrap()
}

#[test]
fn ex5_mod3_exact_spectrum() {
    // 4Δ = 4I − A is an integer matrix; eigenvalue multiplicities are
    // nullities over Q of integer polynomials in it
    let g = graph(&catalog::generators("ex5").unwrap(), 3, false);
    let v = g.vertex_count();
    assert_eq!((v, g.k()), (24, 4));
    assert!(g.is_simple());
    let m: Vec<Vec<i64>> = (0..v)
        .map(|i| {
            let mut row = vec![0i64; v];
            row[i] += 4;
            for &w in g.neighbors(i) {
                row[w as usize] -= 1;
            }
            row
        })
        .collect();
    let shift = |c: i64| -> Vec<Vec<i64>> {
        let mut r = m.clone();
        for (i, row) in r.iter_mut().enumerate() {
            row[i] -= c;
        }
        r
    };
    let square_minus = |b: i64, c: i64| -> Vec<Vec<i64>> {
        // M² − bM + cI
        (0..v)
            .map(|i| {
                (0..v)
                    .map(|j| {
                        let sq: i64 = (0..v).map(|k| m[i][k] * m[k][j]).sum();
                        sq - b * m[i][j] + if i == j { c } else { 0 }
                    })
                    .collect()
            })
            .collect()
    };
    let nullity = |rows: Vec<Vec<i64>>| -> usize {
        let big: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        v - rank(&big)
    };
    // λ = μ/4 for μ = 0, 2, 3, 5, 7 and the roots of μ² − 7μ + 8
    let counts = [
        nullity(shift(0)),
        nullity(shift(2)),
        nullity(shift(3)),
        nullity(shift(5)),
        nullity(shift(7)),
        nullity(square_minus(7, 8)),
    ];
    assert_eq!(counts, [1, 4, 2, 8, 3, 6]);
    assert_eq!(counts.iter().sum::<usize>(), v);

    let r = laplacian_spectrum_dense(&g).unwrap();
    let root = |s: f64| (7.0 + s * 17f64.sqrt()) / 8.0;
    assert!((r.lambda1 - root(-1.0)).abs() < 1e-9);
    assert_eq!(r.multiplicity(root(-1.0), 1e-9), 3);
    assert_eq!(r.multiplicity(root(1.0), 1e-9), 3);
    assert!((r.lambda_max().unwrap() - 1.75).abs() < 1e-9);
}

#[test]
fn ex5_psl_mod3() {
    let g = graph(&catalog::generators("ex5").unwrap(), 3, true);
    assert_eq!((g.vertex_count(), g.k()), (12, 4));
    assert_eq!(g.degree_sum(), 48);
}

#[test]
fn mid_size_catalog_graphs_agree() {
    for (id, p) in [("ex5", 11), ("ex1", 11), ("ex2", 7), ("ex5", 13)] {
        for psl in [false, true] {
            let g = graph(&catalog::generators(id).unwrap(), p, psl);
            if g.vertex_count() > 2000 {
                continue;
            }
            let d = laplacian_spectrum_dense(&g).unwrap();
            let it = lambda1_iterative(&g, 1e-8).unwrap();
            assert!((d.lambda1 - it.lambda1).abs() < 1e-6, "{id} p={p} psl={psl}");
            assert!(d.residual <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn random_cayley_graphs(gens in pair(), p in prop::sample::select(vec![3u64, 5, 7]), psl in any::<bool>()) {
        let g = graph(&gens, p, psl);
        prop_assert_eq!(g.degree_sum(), g.k() * g.vertex_count());
        prop_assert!(g.is_symmetric());
        let d = laplacian_spectrum_dense(&g).unwrap();
        prop_assert!(d.eigenvalues.iter().all(|&x| (-1e-9..=2.0 + 1e-9).contains(&x)));
        prop_assert!(d.eigenvalues[0].abs() < 1e-9);
        prop_assert_eq!(d.multiplicity(0.0, 1e-8), g.component_count());
        prop_assert!(d.residual <= 1e-9);
        if g.component_count() == 1 && g.vertex_count() > 1 {
            let it = lambda1_iterative(&g, 1e-8).unwrap();
            prop_assert!((d.lambda1 - it.lambda1).abs() < 1e-6, "{} vs {}", d.lambda1, it.lambda1);
        }
    }

    #[test]
    fn zero_multiplicity_counts_components(gens in pair(), copies in 1usize..4) {
        let g = disjoint_copies(&graph(&gens, 3, false), copies);
        let d = laplacian_spectrum_dense(&g).unwrap();
        prop_assert_eq!(g.component_count(), copies * graph(&gens, 3, false).component_count());
        prop_assert_eq!(d.multiplicity(0.0, 1e-8), g.component_count());
    }
}
