use proptest::prelude::*;

use trigon_core::linalg::PolyMatrix;
use trigon_core::pfaffian::PfaffianModel;
use trigon_core::poly::{parse, AmbientWeights};
use trigon_core::scalar::SECOND_PRIME;
use trigon_core::{FieldMatrix, FieldMode, Monomial, Polynomial, Scalar, UniPoly};

const Q: FieldMode = FieldMode::Rational;

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (
            prop::array::uniform2(0u32..3),
            prop::array::uniform5(0u32..3),
            -20i64..=20,
        ),
        0..6,
    )
    .prop_map(|terms| {
        Polynomial::from_terms(
            terms
                .into_iter()
                .map(|(t, x, c)| (Monomial::ambient(t, x), Scalar::from_i64(Q, c))),
        )
    })
}

fn unipoly_strategy(max_len: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-5i64..=5, 0..max_len)
        .prop_map(|c| UniPoly::from_coeffs(c.into_iter().map(|v| Scalar::from_i64(Q, v)).collect()))
}

fn int_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), rows)
}

fn field_matrix(mode: FieldMode, rows: &[Vec<i64>]) -> FieldMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    FieldMatrix::from_i64(mode, &refs)
}

/// Leibniz expansion over all permutations.
fn leibniz(m: &[[i64; 4]; 4]) -> i64 {
    let mut total = 0;
    let mut perm = [0usize, 1, 2, 3];
    fn rec(k: usize, perm: &mut [usize; 4], m: &[[i64; 4]; 4], total: &mut i64) {
        if k == 4 {
            let mut inversions = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let prod: i64 = (0..4).map(|i| m[i][perm[i]]).product();
            *total += if inversions % 2 == 0 { prod } else { -prod };
            return;
        }
        for i in k..4 {
            perm.swap(k, i);
            rec(k + 1, perm, m, total);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, m, &mut total);
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(Q), a.clone());
    }

    #[test]
    fn parse_print_round_trip(a in poly_strategy()) {
        let text = a.to_string();
        prop_assert_eq!(parse(&text, Q).unwrap(), a);
    }

    #[test]
    fn prime_reduction_is_a_ring_map(a in poly_strategy(), b in poly_strategy()) {
        let p = FieldMode::default_prime();
        let r = |f: &Polynomial| f.reduce(p).unwrap();
        prop_assert_eq!(r(&(&a * &b)), &r(&a) * &r(&b));
        prop_assert_eq!(r(&(&a + &b)), &r(&a) + &r(&b));
    }

    #[test]
    fn unipoly_division(f in unipoly_strategy(7), g in unipoly_strategy(4)) {
        prop_assume!(!g.is_zero());
        let (q, r) = f.div_rem(&g);
        prop_assert_eq!(&(&q * &g) + &r, f);
        prop_assert!(r.is_zero() || r.degree() < g.degree());
    }

    #[test]
    fn gcd_divides_both(f in unipoly_strategy(6), g in unipoly_strategy(6), h in unipoly_strategy(3)) {
        let (fh, gh) = (&f * &h, &g * &h);
        let d = fh.gcd(&gh);
        prop_assert!(d.divides(&fh) && d.divides(&gh));
        if !d.is_zero() {
            prop_assert!(d.is_monic());
            prop_assert!(h.is_zero() || h.divides(&d));
        }
    }

    #[test]
    fn smith_reconstructs_and_chains(rows in 1usize..4, cols in 1usize..4, entries in prop::collection::vec(unipoly_strategy(3), 9)) {
        let data: Vec<Vec<UniPoly>> = (0..rows)
            .map(|i| (0..cols).map(|j| entries[i * 3 + j].clone()).collect())
            .collect();
        let m = PolyMatrix::from_rows(Q, data);
        let s = m.smith();
        let (u, v) = (s.u.clone().unwrap(), s.v.clone().unwrap());
        let d = u.mul(&m).mul(&v);
        for i in 0..rows {
            for j in 0..cols {
                let expected = if i == j { s.factors[i].clone() } else { UniPoly::zero() };
                prop_assert_eq!(&d[(i, j)], &expected);
            }
        }
        let id_r = PolyMatrix::identity(Q, rows);
        let id_c = PolyMatrix::identity(Q, cols);
        prop_assert_eq!(u.mul(s.u_inv.as_ref().unwrap()), id_r);
        prop_assert_eq!(v.mul(s.v_inv.as_ref().unwrap()), id_c);
        let nonzero: Vec<&UniPoly> = s.factors.iter().filter(|f| !f.is_zero()).collect();
        prop_assert!(s.factors.iter().skip(nonzero.len()).all(|f| f.is_zero()));
        for w in nonzero.windows(2) {
            prop_assert!(w[0].divides(w[1]));
        }
        prop_assert!(nonzero.iter().all(|f| f.is_monic()));
        prop_assert_eq!(m.invariant_factors(), s.factors);
    }

    #[test]
    fn torsion_length_is_unimodular_invariant(
        diag in prop::collection::vec(unipoly_strategy(3), 3),
        a in -3i64..=3, b in -3i64..=3, shift in unipoly_strategy(2),
    ) {
        prop_assume!(diag.iter().all(|f| !f.is_zero()));
        let d = PolyMatrix::diagonal(Q, diag.clone());
        // elementary operations on both sides
        let s = |v| UniPoly::constant(Scalar::from_i64(Q, v));
        let one = s(1);
        let z = UniPoly::zero();
        let left = PolyMatrix::from_rows(Q, vec![
            vec![one.clone(), shift.clone(), z.clone()],
            vec![z.clone(), one.clone(), z.clone()],
            vec![s(a), z.clone(), one.clone()],
        ]);
        let right = PolyMatrix::from_rows(Q, vec![
            vec![one.clone(), z.clone(), z.clone()],
            vec![s(b), one.clone(), shift.clone()],
            vec![z.clone(), z.clone(), one.clone()],
        ]);
        let before = d.cokernel_torsion().unwrap();
        let after = left.mul(&d).mul(&right).cokernel_torsion().unwrap();
        let expected: usize = diag.iter().map(|f| f.degree().unwrap()).sum();
        prop_assert_eq!(before.total_length, expected);
        prop_assert_eq!(after.total_length, expected);
        prop_assert_eq!(after.points, before.points);
    }

    #[test]
    fn rank_agrees_over_q_and_two_primes(m in int_matrix(4, 5, 9)) {
        // every minor is below 2^31 in absolute value
        let q = field_matrix(Q, &m).rank();
        let p1 = field_matrix(FieldMode::default_prime(), &m).rank();
        let p2 = field_matrix(FieldMode::prime(SECOND_PRIME).unwrap(), &m).rank();
        prop_assert_eq!(q, p1);
        prop_assert_eq!(q, p2);
    }

    #[test]
    fn kernel_is_annihilated(m in int_matrix(3, 5, 6)) {
        let fm = field_matrix(Q, &m);
        let ker = fm.kernel_basis();
        prop_assert_eq!(ker.len() + fm.rank(), 5);
        for v in ker {
            prop_assert!(fm.mul_vec(&v).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn pfaffian_squares_to_determinant(upper in prop::array::uniform10(-9i64..=9)) {
        let c = |v: i64| Polynomial::constant(Scalar::from_i64(Q, v));
        let model = PfaffianModel::new("constant", AmbientWeights::zero(), upper.map(c)).unwrap();
        let full = model.matrix();
        for skip in 0..5 {
            let idx: Vec<usize> = (0..5).filter(|&k| k != skip).collect();
            let mut block = [[0i64; 4]; 4];
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate() {
                    block[a][b] = match full[i][j].terms().first() {
                        None => 0,
                        Some((_, s)) => s.to_text().parse().unwrap(),
                    };
                }
            }
            let pf = model.sub_pfaffian(skip);
            prop_assert_eq!(&pf * &pf, c(leibniz(&block)));
        }
        prop_assert!(model.syzygy_residual().iter().all(|r| r.is_zero()));
    }
}

#[test]
fn leibniz_oracle_on_known_matrix() {
    let m = [[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
    assert_eq!(leibniz(&m), -6);
}
