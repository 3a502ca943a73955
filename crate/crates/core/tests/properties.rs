use k3cover_core::classify::{case_of, classify};
use k3cover_core::lattice::{U1, U2, V1, V2};
use k3cover_core::{
    enumerate_norm, BinaryForm, Case, Certificate, Classification, Embedding, IntMatrix, IntegralLattice, NormQuery,
    Sl2Matrix, StandardLattice, TranscendentalForm,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn form() -> impl Strategy<Value = TranscendentalForm> {
    (1i64..=40, 1i64..=40, -40i64..=40).prop_filter_map("definite", |(a, b, c)| TranscendentalForm::new(a, b, c).ok())
}

fn sl2() -> impl Strategy<Value = Sl2Matrix> {
    prop::collection::vec((any::<bool>(), -3i128..=3), 1..5).prop_map(|steps| {
        steps.into_iter().fold(Sl2Matrix::IDENTITY, |g, (upper, t)| {
            let e = if upper { Sl2Matrix::new(1, t, 0, 1) } else { Sl2Matrix::new(1, 0, t, 1) };
            g.compose(&e.unwrap()).unwrap()
        })
    })
}

/// Negative definite Gram `-(B Bᵀ + I)` of rank `n` with small entries.
fn negative_definite(max_rank: usize) -> impl Strategy<Value = IntegralLattice> {
    (1..=max_rank).prop_flat_map(|n| {
        prop::collection::vec(-2i64..=2, n * n).prop_map(move |b| {
            let g = IntMatrix::from_fn(n, n, |i, j| {
                let dot: i64 = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum();
                BigInt::from(-(dot + i64::from(i == j)))
            });
            IntegralLattice::new(g).unwrap()
        })
    })
}

fn value(g: &IntMatrix, x: &[i64]) -> i64 {
    let n = x.len();
    let mut s = BigInt::zero();
    for i in 0..n {
        for j in 0..n {
            s += &g[(i, j)] * x[i] * x[j];
        }
    }
    i64::try_from(s).unwrap()
}

/// Every vector in `[-r, r]^n` with norm `target`, first nonzero coordinate positive.
fn box_search(g: &IntMatrix, r: i64, target: i64) -> Vec<Vec<i64>> {
    let n = g.nrows();
    let mut out = Vec::new();
    let mut x = vec![-r; n];
    loop {
        if x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0) && value(g, &x) == target {
            out.push(x.clone());
        }
        let mut i = 0;
        while i < n && x[i] == r {
            x[i] = -r;
            i += 1;
        }
        if i == n {
            break;
        }
        x[i] += 1;
    }
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_box_search(l in negative_definite(3), k in 1i64..=6) {
        // -x G x >= sum x_i² for these Grams, so |x_i| <= sqrt(norm) bounds the box
        let target = -k;
        let r = (k as f64).sqrt().floor() as i64;
        let got = enumerate_norm(&NormQuery::exact(l.clone(), target).unwrap()).unwrap();
        for v in &got {
            prop_assert_eq!(value(l.gram(), v), target);
        }
        prop_assert_eq!(got, box_search(l.gram(), r, target));
    }

    #[test]
    fn reduction_is_equivalent_and_reduced(t in form()) {
        let f = BinaryForm::from_transcendental(&t);
        let (red, g) = f.reduce();
        prop_assert!(red.is_reduced());
        prop_assert_eq!(f.transform(&g), red.clone());
        let brute = (-40i64..=40).any(|x| (-40i64..=40).any(|y| f.evaluate(x, y).is_one()));
        prop_assert_eq!(f.represents_one(), brute);
        if let Some((x, y)) = f.representation_of_one() {
            prop_assert!(f.evaluate(x, y).is_one());
        }
    }

    #[test]
    fn case_is_sl2_invariant(t in form(), g in sl2()) {
        let t2 = t.apply_basis_change(&g).unwrap();
        prop_assert_eq!(t2.delta(), t.delta());
        prop_assert_eq!(case_of(&t).unwrap(), case_of(&t2).unwrap());
    }

    #[test]
    fn certificates_round_trip_and_replay(t in form()) {
        let c = classify(&t).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: Classification = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &c);
        back.verify(&t).unwrap();
        prop_assert_eq!(c.covers, !matches!(c.case, Case::III3 | Case::IV));
        if c.case == Case::III3 {
            prop_assert!([4, 8, 16].contains(&c.delta));
        }
    }

    #[test]
    fn all_even_forms_cover(a in 1i64..=20, b in 1i64..=20, c in -20i64..=20) {
        if let Ok(t) = TranscendentalForm::new(2 * a, 2 * b, 2 * c) {
            let k = classify(&t).unwrap();
            prop_assert!(k.covers);
            prop_assert_eq!(k.certificate, Certificate::KeumCitation { embedding: None });
        }
    }

    #[test]
    fn primitive_embeddings_have_no_torsion(
        rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 5), 1..=3),
        coeffs in prop::collection::vec(-6i64..=6, 3),
        n in 2i64..=6,
    ) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        prop_assume!(a.rank() == a.nrows());
        let e = Embedding::induced(IntegralLattice::diagonal(&[1; 5]), a.clone()).unwrap();
        let c: Vec<i64> = coeffs[..a.nrows()].to_vec();
        prop_assume!(c.iter().fold(n, |g, v| g.gcd(v)) == 1);
        let combo: Vec<BigInt> = (0..5).map(|j| (0..a.nrows()).map(|i| &a[(i, j)] * c[i]).sum()).collect();
        let divisible = combo.iter().all(|v| v.is_multiple_of(&n.into()));
        if e.is_primitive() {
            prop_assert!(!divisible);
            prop_assert!(e.torsion_witness().is_err());
        } else {
            let w = e.torsion_witness().unwrap();
            w.verify(&e).unwrap();
            let z_in_image = e.contains(&w.z).unwrap();
            prop_assert!(!z_in_image);
        }
    }
}

/// With all of `a`, `b`, `c` odd, vectors of norm `2a` and `2b` in `Λ⁻` have
/// odd `u1`, `u2` coordinates, which makes their product even.
#[test]
fn all_odd_forms_have_no_gram_compatible_pair() {
    let l = IntegralLattice::standard(StandardLattice::LambdaMinus);
    let mut pool = Vec::new();
    for x in -2i64..=2 {
        for y in -2i64..=2 {
            for z in -2i64..=2 {
                for w in -2i64..=2 {
                    for e1 in -1i64..=1 {
                        for e2 in -1i64..=1 {
                            let mut v = vec![0i64; 12];
                            (v[U1], v[U2], v[V1], v[V2], v[4], v[5]) = (x, y, z, w, e1, e2);
                            pool.push(v);
                        }
                    }
                }
            }
        }
    }
    let norm = |v: &[i64]| l.inner_product(v, v).unwrap();
    for (a, b, c) in [(1, 1, 1), (1, 3, 1), (3, 3, -1), (1, 5, 3), (3, 5, 5)] {
        let us: Vec<&Vec<i64>> = pool.iter().filter(|v| norm(v) == BigInt::from(2 * a)).collect();
        let vs: Vec<&Vec<i64>> = pool.iter().filter(|v| norm(v) == BigInt::from(2 * b)).collect();
        assert!(!us.is_empty() && !vs.is_empty());
        for u in &us {
            assert!(u[U1] % 2 != 0 && u[U2] % 2 != 0);
            for v in &vs {
                assert_ne!(l.inner_product(u, v).unwrap(), BigInt::from(c), "{u:?} {v:?}");
            }
        }
        assert_eq!(classify(&TranscendentalForm::new(a, b, c).unwrap()).unwrap().case, Case::IV);
    }
}

#[test]
fn minor_gcd_is_smith_product_on_examples() {
    for rows in [vec![vec![2, 4, 4], vec![-6, 6, 12]], vec![vec![2, 0, 0], vec![0, 3, 0]], vec![vec![3, 6, 9, 12]]] {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let e = Embedding::induced(IntegralLattice::diagonal(&vec![1; a.ncols()]), a.clone()).unwrap();
        let product: BigInt = a.smith_invariants().iter().product();
        assert_eq!(e.maximal_minor_gcd(), product);
    }
}

#[test]
fn huge_forms_classify_and_round_trip() {
    let big = i64::MAX / 4;
    for (a, b, c) in [(big, big - 1, 1), (big, big, 0), (big - 1, big, 2), (big, big, big), (1 << 40, 3, 1 << 20), (big, 1, 0)] {
        let Ok(t) = TranscendentalForm::new(a, b, c) else { continue };
        let k = classify(&t).unwrap_or_else(|e| panic!("{t}: {e}"));
        let back: Classification = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        back.verify(&t).unwrap();
    }
}
