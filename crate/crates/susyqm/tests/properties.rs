use approx::assert_relative_eq;
use nalgebra::DMatrix;
use proptest::prelude::*;

use susyqm::grid::{GridFunction, UniformGrid};
use susyqm::ladder::{normalize, overlap};
use susyqm::oracle::{build_hamiltonian, lowest_eigenpairs, lowest_eigenpairs_by_parity, Tridiagonal};
use susyqm::potential::{lookup, FamilyId, Params, Sign};
use susyqm::sextic::{SexticConfig, SexticModel, WellClass};

fn dense(t: &Tridiagonal) -> DMatrix<f64> {
    let m = t.d.len();
    DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            t.d[i]
        } else if i + 1 == j {
            t.e[i]
        } else if j + 1 == i {
            t.e[j]
        } else {
            0.0
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partner_identity(a in 0.2f64..3.0, b in -2.0f64..2.0, x in -4.0f64..4.0) {
        let f = lookup(FamilyId::Harmonic);
        let q = Params::pair(a, b).unwrap();
        let w = f.w(&q, x).unwrap();
        let wp = f.w_prime(&q, x).unwrap();
        let vp = f.partner(&q, x, Sign::Plus).unwrap();
        let vm = f.partner(&q, x, Sign::Minus).unwrap();
        prop_assert!((vp - vm - 2.0 * wp).abs() <= 1e-12 * (1.0 + w * w));
        prop_assert!((vp + vm - 2.0 * w * w).abs() <= 1e-12 * (1.0 + w * w));
    }

    #[test]
    fn sextic_superpotential_is_odd(b in 0.5f64..3.0, r in 2.01f64..2.13, x in 0.0f64..2.0) {
        let f = lookup(FamilyId::Sextic);
        let q = SexticConfig::new(b, r * b).unwrap().level0_params();
        prop_assert_eq!(f.w(&q, -x).unwrap(), -f.w(&q, x).unwrap());
    }

    #[test]
    fn normalize_is_idempotent(s in 0.3f64..3.0, c in -2.0f64..2.0, amp in 0.1f64..10.0) {
        let g = UniformGrid::symmetric(10.0, 1001).unwrap();
        let psi = GridFunction::sample(g, |x| amp * (x - c) * (-(x - c) * (x - c) / (s * s)).exp()).unwrap();
        let once = normalize(&psi).unwrap();
        let twice = normalize(&once).unwrap();
        prop_assert!((overlap(&once, &once).unwrap() - 1.0).abs() < 1e-12);
        for (a, b) in once.values.iter().zip(&twice.values) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn band_configs_are_triple_wells(b in 0.2f64..5.0, t in 0.02f64..0.98) {
        let top = susyqm::sextic::band_upper_ratio();
        let r = 2.0 + t * (top - 2.0);
        let m = SexticModel::new(SexticConfig::new(b, r * b).unwrap()).unwrap();
        let geo = m.classify_wells();
        prop_assert_eq!(geo.classification, WellClass::TripleWell);
        prop_assert!(geo.x0_sq.unwrap() > 0.0);
        prop_assert!(geo.epsilon.unwrap() > 0.0);
        let xs: Vec<f64> = geo.critical_points.iter().map(|c| c.x).collect();
        for (p, q) in xs.iter().zip(xs.iter().rev()) {
            prop_assert!((p + q).abs() < 1e-12 * p.abs().max(1.0));
        }
    }

    #[test]
    fn sturm_bisection_matches_dense(seed in 0u64..1000) {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let m = 24;
        let t = Tridiagonal {
            d: (0..m).map(|_| 4.0 * next()).collect(),
            e: (0..m - 1).map(|_| 2.0 * next()).collect(),
        };
        let mut want: Vec<f64> = dense(&t).symmetric_eigen().eigenvalues.iter().copied().collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (i, w) in want.iter().enumerate().take(6) {
            prop_assert!((t.eigenvalue(i) - w).abs() < 1e-10, "{i}: {} vs {w}", t.eigenvalue(i));
        }
    }
}

#[test]
fn dense_hamiltonian_agrees_with_tridiagonal_solver() {
    let g = UniformGrid::symmetric(6.0, 401).unwrap();
    let v = GridFunction::sample(g, |x| x * x * x * x - 3.0 * x * x).unwrap();
    let h = build_hamiltonian(&v).unwrap();
    let res = lowest_eigenpairs(&h, 5).unwrap();
    let mut want: Vec<f64> = dense(&h.tridiagonal()).symmetric_eigen().eigenvalues.iter().copied().collect();
    want.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (got, w) in res.eigenvalues.iter().zip(&want) {
        assert_relative_eq!(*got, *w, max_relative = 1e-10);
    }
    let split = lowest_eigenpairs_by_parity(&h, 5).unwrap();
    for (got, w) in split.eigenvalues.iter().zip(&want) {
        assert_relative_eq!(*got, *w, max_relative = 1e-10);
    }
    for i in 0..5 {
        for j in 0..i {
            assert!(overlap(&res.eigenvectors[i], &res.eigenvectors[j]).unwrap().abs() < 1e-10);
        }
    }
}
