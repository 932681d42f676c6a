use proptest::prelude::*;

use oddtrans::algebra::{GmAlgebra, Side};
use oddtrans::exact::{rank_of, unit_vector, FieldSpec, Matrix, Scalar};
use oddtrans::spectral::{decompose, tau_permutation};
use oddtrans::system::construct_model;

const MODELS: &[&str] = &["dihedral:3", "dihedral:5", "dihedral:7", "frobenius:5,2", "frobenius:3,2", "burnside23"];
const PRIMES: &[u64] = &[3, 5, 7, 11, 13, 101, 1009];

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        prop::sample::select(PRIMES).prop_map(|q| FieldSpec::prime(q).unwrap()),
    ]
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (field_strategy(), -60i64..60, 1i64..40).prop_filter_map("denominator vanishes", |(f, r, s)| {
        let den = f.from_int(s);
        (!den.is_zero()).then(|| &f.from_int(r) / &den)
    })
}

fn matrix_strategy() -> impl Strategy<Value = Matrix> {
    (field_strategy(), 1usize..6, 1usize..6).prop_flat_map(|(f, r, c)| {
        prop::collection::vec(-3i64..4, r * c).prop_map(move |xs| {
            let rows = xs.chunks(c).map(|row| row.iter().map(|&x| f.from_int(x)).collect()).collect();
            Matrix::from_rows(f, c, rows)
        })
    })
}

fn algebra_strategy() -> impl Strategy<Value = GmAlgebra> {
    (prop::sample::select(MODELS), -9i64..10, 1i64..10).prop_filter_map("eta excluded", |(m, r, s)| {
        let eta = FieldSpec::Rationals.ratio(r, s);
        GmAlgebra::build(construct_model(m).ok()?, eta, false).ok()
    })
}

fn random_vector(alg: &GmAlgebra, seed: &[i64]) -> Vec<Scalar> {
    (0..alg.dim()).map(|i| alg.field().from_int(seed[i % seed.len()] + i as i64 % 3)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_text_round_trip(x in scalar_strategy()) {
        let back = Scalar::parse(&x.to_string(), x.field()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn rank_nullity_and_transpose(m in matrix_strategy()) {
        let rank = m.rank();
        prop_assert_eq!(rank + m.kernel().len(), m.cols());
        prop_assert_eq!(rank, m.transpose().rank());
    }

    #[test]
    fn kernel_is_annihilated(m in matrix_strategy()) {
        for v in m.kernel() {
            prop_assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn basis_elements_are_idempotent(alg in algebra_strategy()) {
        for a in 0..alg.dim() {
            let e = alg.basis_vector(a);
            prop_assert_eq!(alg.multiply(&e, &e), e);
        }
    }

    #[test]
    fn conjugation_is_an_automorphism(alg in algebra_strategy(), s in prop::collection::vec(-4i64..5, 1..6), a in 0usize..64) {
        let a = a % alg.dim();
        let x = random_vector(&alg, &s);
        let y: Vec<Scalar> = random_vector(&alg, &s).into_iter().rev().collect();
        let lhs = alg.conjugate_vector(&alg.multiply(&x, &y), a);
        let rhs = alg.multiply(&alg.conjugate_vector(&x, a), &alg.conjugate_vector(&y, a));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn left_matrix_columns_are_products(alg in algebra_strategy(), a in 0usize..64) {
        let a = a % alg.dim();
        let displayed = alg.mult_matrix(a, Side::Left).transpose();
        let right = alg.mult_matrix(a, Side::Right);
        for k in 0..alg.dim() {
            prop_assert_eq!(displayed.row(k), &alg.multiply(&alg.basis_vector(a), &alg.basis_vector(k))[..]);
            prop_assert_eq!(right.column(k), alg.multiply(&alg.basis_vector(k), &alg.basis_vector(a)));
        }
    }

    #[test]
    fn miyamoto_involutions_transform_by_conjugation(alg in algebra_strategy(), a in 0usize..64, b in 0usize..64) {
        let (a, b) = (a % alg.dim(), b % alg.dim());
        let ta = tau_permutation(&alg, a).unwrap().unwrap();
        let tb = tau_permutation(&alg, b).unwrap().unwrap();
        let tab = tau_permutation(&alg, alg.system().conj(b, a)).unwrap().unwrap();
        prop_assert_eq!(tab, ta.then(&tb).then(&ta));
        prop_assert_eq!(ta, alg.system().conjugation_permutation(a));
    }

    #[test]
    fn right_operator_preserves_left_eigenspaces(alg in algebra_strategy(), a in 0usize..64) {
        let a = a % alg.dim();
        let (f, n) = (alg.field(), alg.dim());
        let left = decompose(&alg, a, Side::Left).unwrap();
        let right = decompose(&alg, a, Side::Right).unwrap();
        let (l1, l2) = oddtrans::exact::lambda_params(alg.p(), alg.eta());
        let ra = alg.mult_matrix(a, Side::Right);

        let lb = &left.part(&l1).unwrap().basis;
        let rb = &right.part(&l1).unwrap().basis;
        let joint: Vec<_> = lb.iter().chain(rb).cloned().collect();
        prop_assert_eq!(lb.len(), rb.len());
        prop_assert_eq!(rank_of(f, n, &joint), lb.len());

        for lambda in [l2.clone(), -l2] {
            let Some(part) = left.part(&lambda) else { continue };
            let basis = &part.basis;
            let mut joint = basis.clone();
            joint.extend(basis.iter().map(|v| ra.mul_vec(v)));
            prop_assert_eq!(rank_of(f, n, &joint), basis.len());
            let images: Vec<_> = basis.iter().map(|v| ra.mul_vec(v)).collect();
            prop_assert_eq!(rank_of(f, n, &images), basis.len());
        }
    }

    #[test]
    fn unit_vectors_generate_everything_as_right_ideals(alg in algebra_strategy(), a in 0usize..64) {
        let a = a % alg.dim();
        let ideal = alg.right_ideal_closure(&unit_vector(alg.field(), alg.dim(), a)).unwrap();
        prop_assert_eq!(ideal.len(), alg.dim());
    }
}
