//! Random data shared by the integration tests.
#![allow(dead_code)]

use diffcoh_core::algebra::DiffAlgebra;
use diffcoh_core::cochain::{Cochain, Context, DiffCochain};
use diffcoh_core::corpus::{self, Instance};
use diffcoh_core::deformation::{regular_context, TruncatedDeformation, TruncatedGauge};
use diffcoh_core::extension::{extension_classes, TwoCocycle};
use diffcoh_core::{Field, Matrix, Scalar};
use rand::Rng;

pub fn q(x: i64) -> Scalar {
    Field::Rational.from_i64(x)
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    &q(n) * &q(d).inverse().unwrap()
}

pub fn small(field: Field, rng: &mut impl Rng) -> Scalar {
    if rng.gen_bool(0.5) {
        field.zero()
    } else {
        field.from_i64(rng.gen_range(-3..=3))
    }
}

pub fn instances() -> Vec<(Instance, Context)> {
    corpus::standard()
        .into_iter()
        .map(|i| {
            let ctx = Context::new(&i.algebra, &i.module).unwrap();
            (i, ctx)
        })
        .collect()
}

pub fn random_cochain(ctx: &Context, degree: usize, rng: &mut impl Rng) -> Cochain {
    let coeffs = (0..ctx.cochain_len(degree)).map(|_| small(ctx.field(), rng)).collect();
    Cochain::from_coords(ctx, degree, coeffs).unwrap()
}

pub fn random_pair(ctx: &Context, degree: usize, rng: &mut impl Rng) -> DiffCochain {
    let f = random_cochain(ctx, degree, rng);
    let g = (degree > 0).then(|| random_cochain(ctx, degree - 1, rng));
    DiffCochain::new(f, g).unwrap()
}

pub fn random_matrix(field: Field, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    let entries = (0..rows * cols).map(|_| small(field, rng)).collect();
    Matrix::from_entries(field, rows, cols, entries).unwrap()
}

pub fn random_gauge(field: Field, dim: usize, order: usize, rng: &mut impl Rng) -> TruncatedGauge {
    let mut phi = vec![Matrix::identity(field, dim)];
    phi.extend((0..order).map(|_| random_matrix(field, dim, dim, rng)));
    TruncatedGauge::new(phi).unwrap()
}

/// A random element of `Z̃²`: a reduced coboundary plus a random
/// combination of class representatives.
pub fn random_cocycle(ctx: &Context, reps: &[TwoCocycle], rng: &mut impl Rng) -> TwoCocycle {
    let phi = random_cochain(ctx, 1, rng);
    let mut pair = ctx.diff_d(&DiffCochain::algebra_part(ctx, phi)).unwrap();
    for r in reps {
        pair = pair.add(&r.to_pair().scale(&small(ctx.field(), rng))).unwrap();
    }
    TwoCocycle::from_pair(&pair).unwrap()
}

pub fn class_representatives(ctx: &Context) -> Vec<TwoCocycle> {
    extension_classes(ctx).unwrap().representatives
}

/// `μ_t = μ_A`, `d_t = d_A + Σ t^i D_i`; valid at weight zero when every
/// `D_i` is a derivation.
pub fn operator_family(a: &DiffAlgebra, terms: &[Matrix]) -> TruncatedDeformation {
    let ctx = regular_context(a).unwrap();
    let base = TruncatedDeformation::trivial(a, terms.len()).unwrap();
    let mut d = base.d().to_vec();
    for (i, t) in terms.iter().enumerate() {
        d[i + 1] = Cochain::from_linear_map(&ctx, t).unwrap();
    }
    TruncatedDeformation::new(a, base.mu().to_vec(), d).unwrap()
}
