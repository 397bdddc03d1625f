mod common;

use common::*;
use diffcoh_core::algebra::{
    canonical_projection, canonical_section, deform_bimodule, homomorphism_violations, kernel_bimodule,
    regular_bimodule, semidirect_product, validate_diff_algebra, validate_diff_bimodule,
};
use diffcoh_core::cochain::Context;
use diffcoh_core::cohomology::{cohomology_dims, ComplexKind};
use diffcoh_core::corpus;
use diffcoh_core::linalg::{kernel_basis, rank, solve};
use diffcoh_core::{Field, Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn int_matrix(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
    Matrix::from_entries(field, rows, cols, entries.iter().map(|&x| field.from_i64(x)).collect()).unwrap()
}

proptest! {
    #[test]
    fn rank_nullity(seed in any::<u64>(), r in 0usize..6, c in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(Field::Rational, r, c, &mut rng);
        let ker = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + ker.len(), c);
        for v in &ker {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_returns_a_preimage(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(Field::Rational, r, c, &mut rng);
        let x = random_matrix(Field::Rational, c, 1, &mut rng).column(0);
        let b = m.mul_vec(&x).unwrap();
        let y = solve(&m, &b).unwrap().expect("b lies in the image");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    /// Integer matrices with small entries keep their rank modulo a large prime.
    #[test]
    fn prime_and_rational_ranks_agree(entries in proptest::collection::vec(-3i64..=3, 16)) {
        let over_q = rank(&int_matrix(Field::Rational, 4, 4, &entries));
        for p in [1_000_003, 998_244_353, 2_147_483_647] {
            let over_p = rank(&int_matrix(Field::prime(p).unwrap(), 4, 4, &entries));
            prop_assert_eq!(over_q, over_p);
        }
    }

    #[test]
    fn deformed_bimodule_is_a_bimodule(num in -5i64..5, den in 1i64..4, a in -3i64..4) {
        let w = ratio(num, den);
        let alg = corpus::dual_numbers(q(a), w);
        let v = deform_bimodule(&alg, &regular_bimodule(&alg)).unwrap();
        prop_assert!(validate_diff_bimodule(&alg, v.as_bimodule()).unwrap().passed());
    }

    #[test]
    fn ground_field_dims_are_weight_independent(num in -9i64..9, den in 1i64..5) {
        let a = corpus::ground_field(ratio(num, den));
        let ctx = Context::new(&a, &regular_bimodule(&a)).unwrap();
        let r = cohomology_dims(&ctx, 2, &[ComplexKind::Diff]).unwrap();
        prop_assert_eq!((r.dim(ComplexKind::Diff, 0), r.dim(ComplexKind::Diff, 1), r.dim(ComplexKind::Diff, 2)), (Some(1), Some(1), Some(0)));
    }
}

#[test]
fn rank_drops_modulo_a_small_prime() {
    // det = 5, so the rank falls to 1 over GF(5)
    let m = [1, 2, 3, 11];
    assert_eq!(rank(&int_matrix(Field::Rational, 2, 2, &m)), 2);
    assert_eq!(rank(&int_matrix(Field::prime(5).unwrap(), 2, 2, &m)), 1);
}

#[test]
fn semidirect_products_are_valid() {
    for (inst, _) in instances() {
        let total = semidirect_product(&inst.algebra, &inst.module).unwrap();
        assert!(validate_diff_algebra(&total).passed(), "{}", inst.name);
        assert_eq!(total.is_unital(), inst.algebra.is_unital() && inst.name != "dual_numbers_trivial_module", "{}", inst.name);
    }
}

#[test]
fn kernel_of_semidirect_product_recovers_module() {
    for (inst, _) in instances() {
        let (a, v) = (&inst.algebra, &inst.module);
        let total = semidirect_product(a, v).unwrap();
        let (f, n, m) = (a.field(), a.dim(), v.dim());
        let p = canonical_projection(f, n, m);
        assert!(homomorphism_violations(&total, a, &p).unwrap().is_empty(), "{}", inst.name);
        let s = canonical_section(f, n, m);
        assert_eq!(&kernel_bimodule(&total, a, &p, Some(&s)).unwrap(), v, "{}", inst.name);
        assert_eq!(&kernel_bimodule(&total, a, &p, None).unwrap(), v, "{}", inst.name);
    }
}

#[test]
fn projection_must_be_a_homomorphism() {
    let a = corpus::dual_numbers(q(1), q(0));
    let v = regular_bimodule(&a);
    let total = semidirect_product(&a, &v).unwrap();
    // swapping the roles of A and V is linear but not multiplicative
    let mut p = Matrix::zeros(Field::Rational, 2, 4);
    p.set(0, 2, q(1));
    p.set(1, 3, q(1));
    assert!(kernel_bimodule(&total, &a, &p, None).is_err());
}
