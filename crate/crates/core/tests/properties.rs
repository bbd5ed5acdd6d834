use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use eigenrep::certify::{build_any, build_batch, build_strict};
use eigenrep::exactmat::{IntMatrix, SymIntMatrix};
use eigenrep::foursquare::decompose;
use eigenrep::polyint::IntPoly;
use eigenrep::psatz::{certify, peel_gram};
use eigenrep::structmat::{bezout, bezout_ffprime, companion};
use eigenrep::verify::{verify, verify_certificate};
use eigenrep::Execution;

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

fn from_roots(roots: &[i64]) -> IntPoly {
    roots
        .iter()
        .fold(IntPoly::one(), |acc, &r| &acc * &IntPoly::linear(BigInt::from(r)))
}

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntMatrix::from_data(rows, cols, data).unwrap()
}

fn random_symmetric(rng: &mut StdRng, k: usize, bound: i64) -> SymIntMatrix {
    let a = random_matrix(rng, k, k, bound);
    SymIntMatrix::new(&a + &a.transpose()).unwrap()
}

/// Distinct integer roots, optionally times `X^2 - d`; degree at most `max_deg`.
fn random_strict(rng: &mut StdRng, max_deg: usize) -> IntPoly {
    let k = rng.gen_range(1..=max_deg.min(3));
    let mut roots: Vec<i64> = Vec::new();
    while roots.len() < k {
        let r = rng.gen_range(-5..=5);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    let d = [2i64, 3, 5, 6, 7][rng.gen_range(0..5)];
    let f = from_roots(&roots);
    if k + 2 <= max_deg && rng.gen_bool(0.5) {
        &f * &p(&[-d, 0, 1])
    } else {
        f
    }
}

#[test]
fn sturm_counts_match_known_roots() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let k = rng.gen_range(1..=5);
        let roots: Vec<i64> = (0..k).map(|_| rng.gen_range(-6..=6)).collect();
        let mut distinct = roots.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let mut f = from_roots(&roots);
        // A factor X^2 + c with c > 0 adds no real roots.
        if rng.gen_bool(0.5) {
            f = &f * &p(&[rng.gen_range(1..=9), 0, 1]);
        }
        assert_eq!(f.sturm_distinct_real_roots().unwrap(), distinct.len(), "{}", f.pretty());
        let strict = distinct.len() == roots.len() && f.degree() == Some(roots.len());
        assert_eq!(f.is_strict_real_zero().unwrap(), strict, "{}", f.pretty());
        assert_eq!(f.is_real_zero().unwrap(), f.degree() == Some(roots.len()));
    }
}

#[test]
fn strict_implies_real_zero() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..200 {
        let deg = rng.gen_range(1..=6);
        let c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-8..=8)).chain([1]).collect();
        let f = p(&c);
        if f.is_strict_real_zero().unwrap() {
            assert!(f.is_real_zero().unwrap());
        }
    }
}

#[test]
fn squarefree_decomposition_recovers_multiplicities() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..100 {
        let roots: Vec<i64> = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(-4..=4)).collect();
        let f = from_roots(&roots);
        let dec = f.squarefree_decompose().unwrap();
        assert_eq!(dec.recombine(), f);
        for (g, e) in &dec.parts {
            for r in -4i64..=4 {
                let count = roots.iter().filter(|&&x| x == r).count() as u32;
                let root_of_g = g.eval(&BigInt::from(r)).is_zero();
                assert_eq!(root_of_g, count == *e, "root {r} in part of multiplicity {e}");
            }
        }
    }
}

#[test]
fn charpoly_algorithms_agree_with_determinant_oracle() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..60 {
        let k = rng.gen_range(1..=8);
        let a = random_matrix(&mut rng, k, k, 5);
        let fl = a.charpoly().unwrap();
        let ba = a.charpoly_bareiss().unwrap();
        assert_eq!(fl, ba);
        assert!(fl.is_monic() && fl.degree() == Some(k));
        for x in [-3i64, 0, 2] {
            let shifted = &IntMatrix::identity(k).scale(&BigInt::from(x)) - &a;
            assert_eq!(fl.eval(&BigInt::from(x)), shifted.det().unwrap());
        }
    }
}

#[test]
fn symmetric_charpoly_is_real_rooted() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..60 {
        let k = rng.gen_range(1..=6);
        let m = random_symmetric(&mut rng, k, 4);
        assert!(m.charpoly().is_real_zero().unwrap());
    }
}

#[test]
fn cauchy_binet_and_multiplicative_determinant() {
    let mut rng = StdRng::seed_from_u64(16);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(n..=n + 3);
        let q = random_matrix(&mut rng, m, n, 4);
        let (lhs, rhs) = q.cauchy_binet().unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, q.gram().det());

        let a = random_matrix(&mut rng, n, n, 6);
        let b = random_matrix(&mut rng, n, n, 6);
        assert_eq!((&a * &b).det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }
}

#[test]
fn bezout_matches_bezoutian_at_integer_points() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let fc: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).chain([1]).collect();
        let f = p(&fc);
        let g = p(&(0..n).map(|_| rng.gen_range(-5..=5)).collect::<Vec<_>>());
        let b = bezout(&f, &g).unwrap().matrix;
        for _ in 0..4 {
            let x = BigInt::from(rng.gen_range(-4..=4));
            let y = &x + BigInt::from(rng.gen_range(1..=4));
            let num = f.eval(&y) * g.eval(&x) - f.eval(&x) * g.eval(&y);
            let expected = num / (&y - &x);
            let mut got = BigInt::zero();
            for i in 0..n {
                for j in 0..n {
                    got += &b.as_matrix()[(i, j)] * x.pow(i as u32) * y.pow(j as u32);
                }
            }
            assert_eq!(got, expected, "f = {}, g = {}", f.pretty(), g.pretty());
        }
    }
}

fn sylvester(f: &IntPoly, g: &IntPoly) -> IntMatrix {
    let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
    let size = m + n;
    let mut s = IntMatrix::zeros(size, size);
    for r in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            s[(r, r + k)] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            s[(n + r, r + k)] = c.clone();
        }
    }
    s
}

#[test]
fn resultant_matches_sylvester_determinant() {
    let mut rng = StdRng::seed_from_u64(18);
    let mut checked = 0;
    while checked < 100 {
        let a = p(&(0..rng.gen_range(2..=6)).map(|_| rng.gen_range(-5..=5)).collect::<Vec<_>>());
        let b = p(&(0..rng.gen_range(2..=6)).map(|_| rng.gen_range(-5..=5)).collect::<Vec<_>>());
        if a.degree().unwrap_or(0) == 0 || b.degree().unwrap_or(0) == 0 {
            continue;
        }
        assert_eq!(a.resultant(&b), sylvester(&a, &b).det().unwrap(), "{} / {}", a.pretty(), b.pretty());
        checked += 1;
    }
}

#[test]
fn bezout_determinant_is_resultant_up_to_sign() {
    let mut rng = StdRng::seed_from_u64(19);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let fc: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).chain([1]).collect();
        let f = p(&fc);
        let det = bezout_ffprime(&f).unwrap().matrix.det();
        assert_eq!(det.abs(), f.resultant(&f.derivative()).abs());
    }
}

#[test]
fn peel_gram_reconstructs_random_gram_matrices() {
    let mut rng = StdRng::seed_from_u64(20);
    for _ in 0..100 {
        let k = rng.gen_range(1..=5);
        let rows = rng.gen_range(1..=6);
        let g = random_matrix(&mut rng, rows, k, 4);
        let n = g.gram();
        let (scale, q) = peel_gram(&n).unwrap();
        assert!(scale.is_positive());
        assert!(q.rows() <= 4 * k);
        assert_eq!(&q.gram().into_matrix(), &n.as_matrix().scale(&scale));
    }
}

#[test]
fn peel_gram_rejects_indefinite() {
    let n = SymIntMatrix::from_i64s(&[[1, 2], [2, 1]]);
    assert!(peel_gram(&n).is_err());
}

#[test]
fn certificates_satisfy_cauchy_binet() {
    let mut rng = StdRng::seed_from_u64(21);
    // Minor enumeration is C(m, n); keep n small.
    for _ in 0..40 {
        let f = random_strict(&mut rng, 3);
        let cert = build_strict(&f).unwrap();
        for fc in &cert.factors {
            let q = &fc.psatz.q;
            if q.rows() >= q.cols() {
                assert!(q.cauchy_binet_check().unwrap());
            }
        }
    }
}

#[test]
fn builds_verify_and_are_deterministic() {
    let mut rng = StdRng::seed_from_u64(22);
    let polys: Vec<IntPoly> = (0..30).map(|_| random_strict(&mut rng, 4)).collect();
    for f in &polys {
        let a = build_strict(f).unwrap();
        let b = build_strict(f).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert!(a.size <= 9 * f.degree().unwrap());
        let report = verify(&a);
        assert!(report.passed, "{}: {:?}", f.pretty(), report.failed().collect::<Vec<_>>());
    }
    let seq = build_batch(&polys, Execution::Sequential);
    let par = build_batch(&polys, Execution::Parallel);
    for (s, q) in seq.iter().zip(&par) {
        assert_eq!(s.as_ref().unwrap().to_json_string(), q.as_ref().unwrap().to_json_string());
    }
}

#[test]
fn direct_sums_verify() {
    let cases = [
        from_roots(&[1, 1, 2]),
        &p(&[-3, 0, 1]).pow(3) * &from_roots(&[0]),
        from_roots(&[-1, -1, 2, 2, 2]),
    ];
    for f in cases {
        let cert = build_any(&f).unwrap();
        assert!(cert.size <= 9 * f.degree().unwrap());
        let report = verify_certificate(&cert.to_bundle());
        assert!(report.passed, "{}: {:?}", f.pretty(), report.failed().collect::<Vec<_>>());
    }
}

#[test]
fn strict_builder_rejects_repeated_and_complex_roots() {
    assert!(build_strict(&from_roots(&[2, 2])).is_err());
    assert!(build_strict(&p(&[1, 0, 1])).is_err());
    assert!(build_any(&p(&[1, 0, 1])).is_err());
}

#[test]
fn certify_random_positive_definite() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..50 {
        let k = rng.gen_range(1..=4);
        let g = random_matrix(&mut rng, k, k, 3);
        let b = SymIntMatrix::new(&g.gram().into_matrix() + &IntMatrix::identity(k)).unwrap();
        let c = certify(&b).unwrap();
        assert!(c.is_valid());
        assert!(c.s >= BigInt::one());
    }
}

fn coeff_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1_000_000i64..=1_000_000, 0..8)
}

proptest! {
    #[test]
    fn poly_text_round_trip(c in coeff_strategy()) {
        let f = p(&c);
        let back: IntPoly = f.to_string().parse().unwrap();
        prop_assert_eq!(&back, &f);
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<IntPoly>(&json).unwrap(), f);
    }

    #[test]
    fn div_rem_round_trip(a in coeff_strategy(), mut g in prop::collection::vec(-50i64..=50, 0..5)) {
        g.push(1);
        let (a, g) = (p(&a), p(&g));
        let (q, r) = a.div_rem(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, a);
        prop_assert!(r.degree().is_none_or(|d| d < g.degree().unwrap()));
    }

    #[test]
    fn four_squares_sum(digits in "[1-9][0-9]{0,60}") {
        let n: BigInt = digits.parse().unwrap();
        let fs = decompose(&n).unwrap();
        prop_assert!(fs.is_valid());
    }

    #[test]
    fn matrix_json_round_trip(rows in 0usize..4, cols in 0usize..4, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_matrix(&mut rng, rows, cols, i64::MAX);
        let json = serde_json::to_string(&m).unwrap();
        let back: IntMatrix = serde_json::from_str(&json).unwrap();
        if rows > 0 {
            prop_assert_eq!(back, m);
        }
    }

    #[test]
    fn companion_charpoly_is_f(mut c in prop::collection::vec(-20i64..=20, 1..7)) {
        c.push(1);
        let f = p(&c);
        prop_assert_eq!(companion(&f).unwrap().matrix.charpoly().unwrap(), f);
    }
}
