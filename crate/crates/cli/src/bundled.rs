//! The problem files shipped in `corpus/`, generated from
//! [`diffcoh_core::corpus::standard`] plus a few named samples per file.

use diffcoh_core::algebra::{regular_bimodule, DiffAlgebra};
use diffcoh_core::cochain::{Cochain, DiffCochain};
use diffcoh_core::cohomology::{differential_matrix, ComplexKind};
use diffcoh_core::corpus::{self, Instance};
use diffcoh_core::deformation::{apply_gauge, regular_context, TruncatedDeformation, TruncatedGauge};
use diffcoh_core::extension::{extension_classes, is_cocycle, TwoCocycle};
use diffcoh_core::{linalg, Error, Matrix};

use crate::problem::Problem;

/// A fixed, non-degenerate `n×n` matrix with small entries.
fn sample_matrix(a: &DiffAlgebra, seed: i64) -> Matrix {
    let f = a.field();
    let n = a.dim();
    let entries = (0..n * n).map(|k| f.from_i64((k as i64 * 7 + seed) % 5 - 2)).collect();
    Matrix::from_entries(f, n, n, entries).expect("square shape")
}

fn sample_gauge(a: &DiffAlgebra, order: usize) -> TruncatedGauge {
    let mut phi = vec![Matrix::identity(a.field(), a.dim())];
    phi.extend((1..=order).map(|k| sample_matrix(a, k as i64)));
    TruncatedGauge::new(phi).expect("identity at order zero")
}

/// `d_t = d + Σ tⁱ D` for a fixed operator `D`.
fn operator_family(a: &DiffAlgebra, op: &Matrix, order: usize) -> Result<TruncatedDeformation, Error> {
    let ctx = regular_context(a)?;
    let base = TruncatedDeformation::trivial(a, order)?;
    let mut d = base.d().to_vec();
    for term in d.iter_mut().skip(1) {
        *term = Cochain::from_linear_map(&ctx, op)?;
    }
    TruncatedDeformation::new(a, base.mu().to_vec(), d)
}

/// The problem file for one corpus instance.
pub fn instance_problem(inst: &Instance) -> Result<Problem, Error> {
    let a = &inst.algebra;
    let module = (inst.module != regular_bimodule(a)).then(|| inst.module.clone());
    let mut p = Problem::new(a.clone(), module)?;
    let ctx = p.context.clone();

    let zero = DiffCochain::zero(&ctx, 2);
    p.cochains.insert("zero".into(), zero.clone());
    let classes = extension_classes(&ctx)?;
    for (k, r) in classes.representatives.iter().enumerate() {
        p.cochains.insert(format!("class_{k}"), r.to_pair());
    }
    // a coboundary shift of the first representative, or of zero
    let base = classes.representatives.first().map(|r| r.to_pair()).unwrap_or(zero.clone());
    let phi = Cochain::from_linear_map(&ctx, &sample_rect(&ctx))?;
    let shifted = base.add(&ctx.diff_d(&DiffCochain::algebra_part(&ctx, phi))?)?;
    p.cochains.insert("shifted".into(), shifted);
    // bump single coordinates of zero until the pair stops being closed
    let len = ctx.diff_cochain_len(2);
    for i in 0..len {
        let mut coords = zero.coords();
        coords[i] = ctx.field().one();
        let c = DiffCochain::from_coords(&ctx, 2, coords)?;
        if !is_cocycle(&ctx, &TwoCocycle::from_pair(&c)?)? {
            p.cochains.insert("perturbed".into(), c);
            break;
        }
    }

    let order = 2;
    let gauge = sample_gauge(a, order);
    p.deformations.insert("gauged_trivial".into(), apply_gauge(&TruncatedDeformation::trivial(a, order)?, &gauge)?);
    p.gauges.insert("sample".into(), gauge);

    let reg = regular_context(a)?;
    let reduced = extension_classes(&reg)?;
    if a.weight().is_zero() {
        // a derivation D with (0, D) not exact gives d + tD + t²D, obstructed at order 1
        let ders = linalg::kernel_basis(&differential_matrix(&reg, ComplexKind::Alg, 1)?);
        for v in ders {
            let pair = DiffCochain::operator_part(&reg, Cochain::from_coords(&reg, 1, v.clone())?);
            if !reduced.group.is_coboundary(&pair.coords())? {
                let op = Cochain::from_coords(&reg, 1, v)?.to_linear_map()?;
                p.deformations.insert("derivation_family".into(), operator_family(a, &op, order)?);
                break;
            }
        }
    } else if let Some(r) = reduced.representatives.first() {
        let base = TruncatedDeformation::trivial(a, 1)?;
        let (mut mu, mut d) = (base.mu().to_vec(), base.d().to_vec());
        mu[1] = r.psi.clone();
        d[1] = r.chi.clone();
        p.deformations.insert("seeded".into(), TruncatedDeformation::new(a, mu, d)?);
    }
    Ok(p)
}

fn sample_rect(ctx: &diffcoh_core::cochain::Context) -> Matrix {
    let (f, n, m) = (ctx.field(), ctx.algebra_dim(), ctx.module_dim());
    let entries = (0..n * m).map(|k| f.from_i64((k as i64 * 3 + 1) % 4 - 1)).collect();
    Matrix::from_entries(f, m, n, entries).expect("shape")
}

/// `(file name, problem)` for every standard instance.
pub fn standard_files() -> Result<Vec<(String, Problem)>, Error> {
    corpus::standard().iter().map(|inst| Ok((format!("{}.json", inst.name), instance_problem(inst)?))).collect()
}
