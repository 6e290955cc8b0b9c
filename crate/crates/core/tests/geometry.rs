use proptest::prelude::*;

use trigon_core::cohomology::FreeComplex;
use trigon_core::fiber::{random_points, scan, Verdict};
use trigon_core::horikawa::{chart_computation, verify_slope, HorikawaError};
use trigon_core::pfaffian::{family_a, local_model_symbolic, random_quadrics, PfaffianModel};
use trigon_core::poly::{Chart, AMBIENT_VARS};
use trigon_core::{AmbientWeights, Bidegree, BasePoint, FieldMode, Polynomial, Scalar};

fn prime() -> FieldMode {
    FieldMode::default_prime()
}

fn model_a(n: u32, seed: u64) -> PfaffianModel {
    family_a(n, random_quadrics(seed, prime())).unwrap()
}

/// Substitute `(t0, t1) -> (a t0 + b t1, c t0 + d t1)` in every entry.
fn move_base(m: &PfaffianModel, [a, b, c, d]: [i64; 4]) -> PfaffianModel {
    let mode = m.mode().unwrap();
    let s = |v| Polynomial::constant(Scalar::from_i64(mode, v));
    let (t0, t1) = (Polynomial::t0(mode), Polynomial::t1(mode));
    let mut images: Vec<Polynomial> = (0..AMBIENT_VARS).map(|i| Polynomial::var(i, mode)).collect();
    images[0] = &(&s(a) * &t0) + &(&s(b) * &t1);
    images[1] = &(&s(c) * &t0) + &(&s(d) * &t1);
    m.map_entries(|_, f| f.compose(&images))
}

#[test]
fn symbolic_local_model_identities() {
    for n in 1..=3 {
        let (model, parts) = local_model_symbolic(n, 1, FieldMode::Rational).unwrap();
        let sys = model.pfaffians();
        assert!(model.syzygy_residual().iter().all(|r| r.is_zero()), "n={}", n);
        for r in parts.linear_relation_residuals(&sys) {
            assert!(r.is_zero(), "n={}: {}", n, r);
        }
        let shown = parts.displayed();
        assert_eq!(sys.c1, shown[0]);
        assert_eq!(sys.c2, shown[1]);
        assert_eq!(sys.p1, shown[2]);
        // the middle quadric carries the opposite sign on its minor
        let tn = Polynomial::t1(FieldMode::Rational).pow(n);
        let minor = &(&parts.m[0] * &parts.l[2]) - &(&parts.m[2] * &parts.l[0]);
        assert_eq!(&shown[3] - &minor, &tn * &parts.q[1]);
        assert_eq!(-&sys.p2, &(&tn * &parts.q[1]) - &minor);
        assert_eq!(sys.p3, shown[4]);
    }
}

#[test]
fn chi_matches_cohomology_where_determined() {
    for n in 1..=3 {
        let c = FreeComplex::from_model(&model_a(n, 0)).unwrap();
        let mut determined = 0;
        for t in -4..=6 {
            for x in -3..=4 {
                let d = Bidegree::new(t, x);
                if let Ok([h0, h1, h2]) = c.cohomology(d) {
                    assert_eq!(h0 - h1 + h2, c.chi(d), "n={} d={}", n, d);
                    determined += 1;
                }
            }
        }
        assert!(determined > 20);
    }
}

#[test]
fn chi_of_pluricanonical_bundles() {
    for n in 1..=3i64 {
        let c = FreeComplex::from_model(&model_a(n as u32, 0)).unwrap();
        for k in 2..=6i64 {
            let twice = -8 + 16 * k + 20 * n - 41 * k * n + 41 * k * k * n;
            assert_eq!(2 * c.chi_rk(k).unwrap(), twice, "n={} k={}", n, k);
        }
    }
}

#[test]
fn charts_agree_on_a_moved_trigonal_fibre() {
    // the special fibre moves from t1 = 0 to t1 = t0
    let m = move_base(&model_a(1, 0), [1, 0, -1, 1]);
    let one = Scalar::one(prime());
    let c0 = chart_computation(&m, Chart::T0).unwrap();
    let c1 = chart_computation(&m, Chart::T1).unwrap();
    assert_eq!(c0.horikawa.length_at(&one), 2);
    assert_eq!(c1.horikawa.length_at(&one), 2);
    assert_eq!(c0.horikawa.total_length, 2);
    assert_eq!(c1.horikawa.total_length, 2);
    let report = verify_slope(&m);
    assert!(report.passed(), "{:?}", report.identities);
    let p = BasePoint::affine(one);
    assert_eq!(report.horikawa.unwrap().horikawa.length_at(&p), 2);
}

#[test]
fn trigonal_fibre_at_infinity() {
    let m = move_base(&model_a(2, 0), [0, 1, 1, 0]);
    let report = verify_slope(&m);
    assert!(report.passed(), "{:?}", report.identities);
    let h = report.horikawa.unwrap();
    assert_eq!(h.horikawa.length_at(&BasePoint::infinity(prime())), 4);
    assert_eq!(h.horikawa.total_length, 4);
}

#[test]
fn constant_trigonal_family_fails_in_a_structured_way() {
    let p = prime();
    let x = |i| Polynomial::x(i, p);
    let [q1, q2, q3] = random_quadrics(0, p);
    let upper = [Polynomial::zero(), x(0), x(2), x(3), x(1), x(3), x(4), q1, q2, q3];
    let m = PfaffianModel::new("constant", AmbientWeights::zero(), upper).unwrap();
    let report = verify_slope(&m);
    match &report.horikawa {
        Err(HorikawaError::Nontorsion { free_rank, .. }) => assert!(*free_rank > 0),
        other => panic!("expected a non-torsion failure, got {:?}", other.as_ref().err()),
    }
    assert!(report.identities.is_empty());
    assert!(!report.passed());
}

#[test]
fn generic_fibres_are_not_trigonal() {
    let m = model_a(1, 0);
    let origin = BasePoint::affine(Scalar::zero(prime()));
    let pts = random_points(prime(), 10, 3, std::slice::from_ref(&origin));
    for c in scan(&m, &pts).unwrap() {
        assert_eq!(c.verdict, Verdict::Nontrigonal, "{}", c.point);
    }
    assert_eq!(scan(&m, [&origin]).unwrap()[0].verdict, Verdict::Trigonal);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scan_is_invariant_under_quadric_scaling(a in 1i64..1000, b in 1i64..1000, c in 1i64..1000, seed in 0u64..50) {
        let m = model_a(1, seed);
        let p = prime();
        let factors = [a, -b, c].map(|v| Scalar::from_i64(p, v));
        // q3, -q2, q1 sit in the last three slots
        let scaled = m.map_entries(|i, f| if i >= 7 { f.scale(&factors[i - 7]) } else { f.clone() });
        let mut pts = random_points(p, 4, seed, &[]);
        pts.push(BasePoint::affine(Scalar::zero(p)));
        pts.push(BasePoint::infinity(p));
        let before: Vec<_> = scan(&m, &pts).unwrap().into_iter().map(|c| (c.point, c.verdict)).collect();
        let after: Vec<_> = scan(&scaled, &pts).unwrap().into_iter().map(|c| (c.point, c.verdict)).collect();
        prop_assert_eq!(before, after);
    }
}
