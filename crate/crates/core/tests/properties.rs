use afl_core::algebra::Ring;
use afl_core::exactalg::QRatFun;
use afl_core::latoracle::Hnf;
use afl_core::localring::{Fp, TruncSeries};
use proptest::prelude::*;

type S = TruncSeries<Fp<3>>;
const N: usize = 7;

fn qrf() -> impl Strategy<Value = QRatFun> {
    (
        prop::collection::vec(-4i64..5, 1..4),
        prop::collection::vec(-4i64..5, 1..3),
    )
        .prop_filter_map("nonzero denominator", |(n, d)| {
            let den = QRatFun::poly(&d);
            (!den.is_zero()).then(|| QRatFun::poly(&n).div(&den).unwrap())
        })
}

fn series() -> impl Strategy<Value = S> {
    prop::collection::vec(0i64..3, 0..N).prop_map(|c| S::new(c.into_iter().map(Fp::from_int).collect(), N))
}

proptest! {
    #[test]
    fn rational_functions_form_a_field(a in qrf(), b in qrf(), c in qrf()) {
        prop_assert_eq!(&(&(&a + &b) - &b), &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn json_roundtrip(a in qrf()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: QRatFun = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn units_invert(x in series()) {
        if !x.coeff(0).is_zero() {
            prop_assert!(x.mul_ref(&x.checked_inverse().unwrap()) == S::one());
        } else {
            prop_assert!(x.checked_inverse().is_err());
        }
    }

    #[test]
    fn hermite_key_ignores_basis_change(
        g in prop::collection::vec(series(), 4),
        u in prop::collection::vec(series(), 3),
    ) {
        // Columns (g0, g1), (g2, g3) and a unimodular change [[1 + t u0, u1], [u2, 1]]
        // adjusted to have unit determinant.
        let cols = vec![vec![g[0].clone(), g[1].clone()], vec![g[2].clone(), g[3].clone()]];
        let a = Hnf::from_generators(2, &cols, N);
        let e11 = S::one().add_ref(&u[0].mul_ref(&S::t(N)));
        let det_fix = e11.sub_ref(&u[1].mul_ref(&u[2]));
        prop_assume!(det_fix.checked_inverse().is_ok());
        let mixed = |x: &S, y: &S, p: &S, r: &S| x.mul_ref(p).add_ref(&y.mul_ref(r));
        let new_cols = vec![
            vec![mixed(&cols[0][0], &cols[1][0], &e11, &u[2]), mixed(&cols[0][1], &cols[1][1], &e11, &u[2])],
            vec![mixed(&cols[0][0], &cols[1][0], &u[1], &S::one()), mixed(&cols[0][1], &cols[1][1], &u[1], &S::one())],
        ];
        let b = Hnf::from_generators(2, &new_cols, N);
        prop_assert_eq!(a.key(), b.key());
        for c in b.columns() {
            prop_assert!(a.contains(c));
        }
    }
}
