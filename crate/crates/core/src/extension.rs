//! Abelian extensions `0 → V → Â → A → 0` and their 2-cocycles.
//!
//! Extensions live in `A ⊕ V` coordinates: basis `e_0..e_{n-1}` of `A`
//! followed by `v_0..v_{m-1}` of `V`, with
//! `(x,u)(y,v) = (xy, xv + uy + ψ(x,y))` and `d(x,v) = (d_A x, χ(x) + d_V v)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    canonical_inclusion, canonical_projection, canonical_section, homomorphism_violations, kernel_decomposition,
    twisted_sum, validate_diff_algebra, DiffAlgebra,
};
use crate::cochain::{Cochain, Context, DiffCochain};
use crate::cohomology::{differential_matrix, Cohomology, ComplexKind};
use crate::error::{check_dim, Error};
use crate::linalg::{self, vec_add, vec_axpy, vec_sub, Matrix, Vector};
use crate::scalar::Scalar;

/// A pair `(ψ, χ)` with `ψ ∈ C²_alg` and `χ ∈ C¹_alg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCocycle {
    pub psi: Cochain,
    pub chi: Cochain,
}

impl TwoCocycle {
    pub fn new(psi: Cochain, chi: Cochain) -> Result<TwoCocycle, Error> {
        check_dim("psi degree", 2, psi.degree())?;
        check_dim("chi degree", 1, chi.degree())?;
        Ok(TwoCocycle { psi, chi })
    }

    pub fn zero(ctx: &Context) -> TwoCocycle {
        TwoCocycle { psi: Cochain::zero_in(ctx, 2), chi: Cochain::zero_in(ctx, 1) }
    }

    pub fn from_pair(pair: &DiffCochain) -> Result<TwoCocycle, Error> {
        let chi = pair.g().ok_or_else(|| Error::InvalidInput("degree-zero pair".into()))?;
        TwoCocycle::new(pair.f().clone(), chi.clone())
    }

    pub fn to_pair(&self) -> DiffCochain {
        DiffCochain::new(self.psi.clone(), Some(self.chi.clone())).expect("degrees checked on construction")
    }

    pub fn sub(&self, o: &TwoCocycle) -> Result<TwoCocycle, Error> {
        Ok(TwoCocycle { psi: self.psi.sub(&o.psi)?, chi: self.chi.sub(&o.chi)? })
    }
}

/// A failed cocycle identity with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleViolation {
    /// `xψ(y,z) − ψ(xy,z) + ψ(x,yz) − ψ(x,y)z ≠ 0`.
    Multiplicative { i: usize, j: usize, k: usize },
    /// `χ(xy) − x⊢χ(y) − χ(x)⊣y + d_V ψ(x,y) − ψ(dx,y) − ψ(x,dy) − λψ(dx,dy) ≠ 0`.
    Differential { i: usize, j: usize },
}

impl From<CocycleViolation> for Error {
    fn from(v: CocycleViolation) -> Error {
        match v {
            CocycleViolation::Multiplicative { i, j, k } => {
                Error::NotACocycle { identity: "multiplicative", witness: vec![i, j, k] }
            }
            CocycleViolation::Differential { i, j } => Error::NotACocycle { identity: "differential", witness: vec![i, j] },
        }
    }
}

/// First failure of the two cocycle identities, evaluated directly on basis
/// elements with the algebra and module operations.
pub fn cocycle_violation(ctx: &Context, c: &TwoCocycle) -> Option<CocycleViolation> {
    let a = ctx.algebra();
    let v = ctx.module();
    let n = a.dim();
    let e: Vec<Vector> = (0..n).map(|i| a.basis(i)).collect();
    let psi = |x: &[Scalar], y: &[Scalar]| c.psi.evaluate(&[x, y]);
    let chi = |x: &[Scalar]| c.chi.evaluate(&[x]);
    for i in 0..n {
        for j in 0..n {
            let xy = a.mul(&e[i], &e[j]);
            for k in 0..n {
                let yz = a.mul(&e[j], &e[k]);
                let lhs = vec_add(&v.act_left(&e[i], &psi(&e[j], &e[k])), &psi(&e[i], &yz));
                let rhs = vec_add(&psi(&xy, &e[k]), &v.act_right(&psi(&e[i], &e[j]), &e[k]));
                if lhs != rhs {
                    return Some(CocycleViolation::Multiplicative { i, j, k });
                }
            }
        }
    }
    let lambda = a.weight();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (&e[i], &e[j]);
            let (dx, dy) = (a.d(x), a.d(y));
            let mut total = chi(&a.mul(x, y));
            total = vec_sub(&total, &v.act_left(&a.twist(x), &chi(y)));
            total = vec_sub(&total, &v.act_right(&chi(x), &a.twist(y)));
            total = vec_add(&total, &v.d(&psi(x, y)));
            total = vec_sub(&total, &psi(&dx, y));
            total = vec_sub(&total, &psi(x, &dy));
            vec_axpy(&mut total, &-lambda, &psi(&dx, &dy));
            if !linalg::is_zero_vector(&total) {
                return Some(CocycleViolation::Differential { i, j });
            }
        }
    }
    None
}

/// Whether `∂_Diff(ψ, χ) = 0`.
pub fn is_cocycle(ctx: &Context, c: &TwoCocycle) -> Result<bool, Error> {
    Ok(ctx.diff_d(&c.to_pair())?.is_zero())
}

/// The algebra `A ⊕ V` built from arbitrary `(ψ, χ)`, with no check.
pub fn twisted_algebra(ctx: &Context, c: &TwoCocycle) -> Result<DiffAlgebra, Error> {
    let n = ctx.algebra_dim();
    let psi = |i: usize, j: usize| c.psi.value(&[i, j]).to_vec();
    let chi = |j: usize| c.chi.value(&[j]).to_vec();
    debug_assert_eq!(c.psi.algebra_dim(), n);
    twisted_sum(ctx.algebra(), ctx.module(), psi, chi)
}

/// An abelian extension in `A ⊕ V` coordinates.
#[derive(Clone, Debug)]
pub struct AbelianExtension {
    pub context: Context,
    pub total: DiffAlgebra,
    pub projection: Matrix,
    pub inclusion: Matrix,
    /// `x ↦ (x, 0)`.
    pub section: Matrix,
}

impl AbelianExtension {
    fn canonical(context: &Context, total: DiffAlgebra) -> AbelianExtension {
        let (f, n, m) = (context.field(), context.algebra_dim(), context.module_dim());
        AbelianExtension {
            context: context.clone(),
            total,
            projection: canonical_projection(f, n, m),
            inclusion: canonical_inclusion(f, n, m),
            section: canonical_section(f, n, m),
        }
    }

    fn check_maps(&self) -> Result<(), Error> {
        let viol = homomorphism_violations(&self.total, self.context.algebra(), &self.projection)?;
        if let Some(w) = viol.first() {
            return Err(Error::Internal(format!("projection of an extension is not a homomorphism: {w:?}")));
        }
        Ok(())
    }

    /// Coordinates in `V` of a vector of `Â` lying in the image of the inclusion.
    fn module_part(&self, w: &[Scalar]) -> Result<Vector, Error> {
        linalg::solve(&self.inclusion, w)?.ok_or_else(|| Error::Internal("value outside the kernel".into()))
    }
}

/// Build `A ⊕_{ψ,χ} V`; refused with a witness when `(ψ, χ)` is not a cocycle.
pub fn build_extension(ctx: &Context, c: &TwoCocycle) -> Result<AbelianExtension, Error> {
    let closed = is_cocycle(ctx, c)?;
    match (closed, cocycle_violation(ctx, c)) {
        (true, None) => {}
        (false, Some(v)) => return Err(v.into()),
        (true, Some(v)) => return Err(Error::Internal(format!("direct check found {v:?} on a closed pair"))),
        (false, None) => return Err(Error::Internal("direct check missed a non-closed pair".into())),
    }
    let total = twisted_algebra(ctx, c)?;
    if !validate_diff_algebra(&total).passed() {
        return Err(Error::Internal("extension of a cocycle failed validation".into()));
    }
    let ext = AbelianExtension::canonical(ctx, total);
    ext.check_maps()?;
    Ok(ext)
}

/// Bring an extension given in arbitrary coordinates to `A ⊕ V` form. The
/// bimodule is the kernel with its induced structure; the new basis is the
/// section's images followed by the kernel basis.
pub fn normalize_extension(
    total: &DiffAlgebra,
    base: &DiffAlgebra,
    projection: &Matrix,
    section: Option<&Matrix>,
) -> Result<(AbelianExtension, Matrix), Error> {
    let k = kernel_decomposition(total, base, projection, section)?;
    let change = k.section.hstack(&k.kernel)?;
    let moved = total.change_basis(&change)?;
    let ctx = Context::new(base, &k.module)?;
    let ext = AbelianExtension::canonical(&ctx, moved);
    ext.check_maps()?;
    Ok((ext, change))
}

/// `ψ(x,y) = s(x)s(y) − s(xy)` and `χ(x) = d(s(x)) − s(d x)` for a section `s`.
pub fn extract_cocycle(ext: &AbelianExtension, section: &Matrix) -> Result<TwoCocycle, Error> {
    let ctx = &ext.context;
    let (a, hat) = (ctx.algebra(), &ext.total);
    let n = a.dim();
    check_dim("section rows", hat.dim(), section.rows())?;
    check_dim("section cols", n, section.cols())?;
    if ext.projection.mul(section)? != Matrix::identity(ctx.field(), n) {
        return Err(Error::InvalidInput("map is not a section of the projection".into()));
    }
    let s: Vec<Vector> = (0..n).map(|i| section.column(i)).collect();
    let mut psi = Vec::with_capacity(n * n);
    for t in 0..n * n {
        let (i, j) = (t % n, t / n);
        let w = vec_sub(&hat.mul(&s[i], &s[j]), &section.mul_vec(a.basis_product(i, j))?);
        psi.extend(ext.module_part(&w)?);
    }
    let mut chi = Vec::with_capacity(n);
    for (i, si) in s.iter().enumerate() {
        let w = vec_sub(&hat.d(si), &section.mul_vec(&a.d_basis(i))?);
        chi.extend(ext.module_part(&w)?);
    }
    let c = TwoCocycle::new(Cochain::from_coords(ctx, 2, psi)?, Cochain::from_coords(ctx, 1, chi)?)?;
    if !is_cocycle(ctx, &c)? {
        return Err(Error::Internal("cocycle extracted from an extension is not closed".into()));
    }
    Ok(c)
}

/// `ζ(x, v) = (x, φ(x) + v)` as a matrix on `A ⊕ V`.
pub fn zeta(ctx: &Context, phi: &Cochain) -> Result<Matrix, Error> {
    let (f, n, m) = (ctx.field(), ctx.algebra_dim(), ctx.module_dim());
    let map = phi.to_linear_map()?;
    let mut z = Matrix::identity(f, n + m);
    for r in 0..m {
        for c in 0..n {
            z.set(n + r, c, map.get(r, c).clone());
        }
    }
    Ok(z)
}

/// Some `φ ∈ C¹_alg` with `c1 − c2 = ∂_Diff(φ, 0)`, or `None` when the
/// classes differ. A returned `φ` has been checked to give an isomorphism
/// `ζ` of the two extensions.
pub fn cocycles_equivalent(ctx: &Context, c1: &TwoCocycle, c2: &TwoCocycle) -> Result<Option<Cochain>, Error> {
    let e1 = build_extension(ctx, c1)?;
    let e2 = build_extension(ctx, c2)?;
    let m = differential_matrix(ctx, ComplexKind::DiffReduced, 1)?;
    let Some(x) = linalg::solve(&m, &c1.sub(c2)?.to_pair().coords())? else {
        return Ok(None);
    };
    let phi = Cochain::from_coords(ctx, 1, x)?;
    let viol = homomorphism_violations(&e1.total, &e2.total, &zeta(ctx, &phi)?)?;
    if let Some(w) = viol.first() {
        return Err(Error::Internal(format!("equivalence map is not a homomorphism: {w:?}")));
    }
    Ok(Some(phi))
}

/// Extension classes: `H̃²_Diff` with representatives, and `dim H²_Diff`
/// for comparison.
#[derive(Clone, Debug)]
pub struct ExtensionClasses {
    pub reduced_dim: usize,
    pub full_dim: usize,
    pub representatives: Vec<TwoCocycle>,
    pub group: Cohomology,
}

pub fn extension_classes(ctx: &Context) -> Result<ExtensionClasses, Error> {
    let group = Cohomology::compute(ctx, ComplexKind::DiffReduced, 2)?;
    let full_dim = Cohomology::compute(ctx, ComplexKind::Diff, 2)?.dim();
    let representatives = group
        .representatives
        .iter()
        .map(|r| TwoCocycle::from_pair(&DiffCochain::from_coords(ctx, 2, r.clone())?))
        .collect::<Result<Vec<_>, _>>()?;
    for c in &representatives {
        if let Some(v) = cocycle_violation(ctx, c) {
            return Err(Error::Internal(format!("representative fails {v:?}")));
        }
    }
    Ok(ExtensionClasses { reduced_dim: group.dim(), full_dim, representatives, group })
}

/// Coordinates of a cocycle's class in `H̃²_Diff`.
pub fn class_of(classes: &ExtensionClasses, c: &TwoCocycle) -> Result<Vector, Error> {
    let mut out = classes.group.class_coordinates(&[c.to_pair().coords()])?;
    Ok(out.remove(0))
}
