//! Truncated one-parameter deformations `μ_t = Σ μ_i tⁱ`, `d_t = Σ d_i tⁱ`
//! of a differential algebra, gauges `Φ_t = id + Σ φ_i tⁱ`, and order-by-order
//! trivialization.
//!
//! All statements hold modulo `t^{N+1}`; a successful trivialization means
//! trivial through order `N`, nothing more.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{regular_bimodule, DiffAlgebra};
use crate::cochain::{Cochain, Context, DiffCochain};
use crate::cohomology::{differential_matrix, Cohomology, ComplexKind};
use crate::error::{check_dim, Error};
use crate::linalg::{self, vec_add, vec_axpy, vec_sub, Matrix, Vector};

/// The regular-bimodule context of an algebra.
pub fn regular_context(a: &DiffAlgebra) -> Result<Context, Error> {
    Context::new(a, &regular_bimodule(a))
}

fn structure_cochains(a: &DiffAlgebra, ctx: &Context) -> Result<(Cochain, Cochain), Error> {
    let mu = Cochain::from_fn(ctx, 2, |t| a.basis_product(t[0], t[1]).to_vec())?;
    let d = Cochain::from_linear_map(ctx, a.derivation())?;
    Ok((mu, d))
}

/// Coefficients `μ_0..μ_N` and `d_0..d_N`, with `(μ_0, d_0)` the base structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedDeformation {
    base: DiffAlgebra,
    mu: Vec<Cochain>,
    d: Vec<Cochain>,
}

impl TruncatedDeformation {
    pub fn new(base: &DiffAlgebra, mu: Vec<Cochain>, d: Vec<Cochain>) -> Result<Self, Error> {
        let ctx = regular_context(base)?;
        if mu.is_empty() {
            return Err(Error::InvalidInput("a deformation needs at least the order-zero terms".into()));
        }
        check_dim("number of operator coefficients", mu.len(), d.len())?;
        for (i, (m, e)) in mu.iter().zip(&d).enumerate() {
            let shape = |c: &Cochain, deg| {
                c.degree() == deg && c.algebra_dim() == base.dim() && c.module_dim() == base.dim() && c.field() == base.field()
            };
            if !shape(m, 2) || !shape(e, 1) {
                return Err(Error::InvalidInput(format!("coefficient {i} has the wrong shape")));
            }
        }
        let (mu0, d0) = structure_cochains(base, &ctx)?;
        if mu[0] != mu0 || d[0] != d0 {
            return Err(Error::InvalidInput("order-zero terms differ from the base structure".into()));
        }
        Ok(TruncatedDeformation { base: base.clone(), mu, d })
    }

    /// `μ_t = μ_A`, `d_t = d_A` through order `order`.
    pub fn trivial(base: &DiffAlgebra, order: usize) -> Result<Self, Error> {
        let ctx = regular_context(base)?;
        let (mu0, d0) = structure_cochains(base, &ctx)?;
        let mut mu = vec![mu0];
        let mut d = vec![d0];
        mu.resize(order + 1, Cochain::zero_in(&ctx, 2));
        d.resize(order + 1, Cochain::zero_in(&ctx, 1));
        Ok(TruncatedDeformation { base: base.clone(), mu, d })
    }

    pub fn order(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn base(&self) -> &DiffAlgebra {
        &self.base
    }

    pub fn mu(&self) -> &[Cochain] {
        &self.mu
    }

    pub fn d(&self) -> &[Cochain] {
        &self.d
    }

    /// All coefficients of order at least one vanish.
    pub fn is_trivial(&self) -> bool {
        self.mu[1..].iter().chain(&self.d[1..]).all(Cochain::is_zero)
    }

    /// The pair `(μ_k, d_k)` as an element of `C²_Diff(A, A)`.
    pub fn coefficient_pair(&self, k: usize) -> DiffCochain {
        DiffCochain::new(self.mu[k].clone(), Some(self.d[k].clone())).expect("shapes checked on construction")
    }
}

/// Result of checking the deformation equations at one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderVerdict {
    pub order: usize,
    /// First basis triple where the associativity equation fails.
    pub associativity: Option<[usize; 3]>,
    /// First basis pair where the weighted Leibniz equation fails.
    pub leibniz: Option<[usize; 2]>,
}

impl OrderVerdict {
    pub fn passed(&self) -> bool {
        self.associativity.is_none() && self.leibniz.is_none()
    }
}

/// Evaluate the coefficient of `tⁿ` in associativity and in the weighted
/// Leibniz rule for every `n ≤ N`, on basis elements.
pub fn check_deformation(def: &TruncatedDeformation) -> Vec<OrderVerdict> {
    let a = &def.base;
    let dim = a.dim();
    let lambda = a.weight();
    let e: Vec<Vector> = (0..dim).map(|i| a.basis(i)).collect();
    let mu = |k: usize, x: &[crate::Scalar], y: &[crate::Scalar]| def.mu[k].evaluate(&[x, y]);
    // d_l(e_x)
    let de: Vec<Vec<Vector>> = def.d.iter().map(|d| e.iter().map(|x| d.evaluate(&[x])).collect()).collect();
    (0..=def.order())
        .map(|n| {
            let mut associativity = None;
            'triples: for x in 0..dim {
                for y in 0..dim {
                    for z in 0..dim {
                        let mut diff = linalg::zero_vector(a.field(), dim);
                        for i in 0..=n {
                            diff = vec_add(&diff, &mu(i, &mu(n - i, &e[x], &e[y]), &e[z]));
                            diff = vec_sub(&diff, &mu(i, &e[x], &mu(n - i, &e[y], &e[z])));
                        }
                        if !linalg::is_zero_vector(&diff) {
                            associativity = Some([x, y, z]);
                            break 'triples;
                        }
                    }
                }
            }
            let mut leibniz = None;
            'pairs: for x in 0..dim {
                for y in 0..dim {
                    let mut diff = linalg::zero_vector(a.field(), dim);
                    for k in 0..=n {
                        let l = n - k;
                        diff = vec_add(&diff, &def.d[l].evaluate(&[&mu(k, &e[x], &e[y])]));
                        diff = vec_sub(&diff, &mu(k, &de[l][x], &e[y]));
                        diff = vec_sub(&diff, &mu(k, &e[x], &de[l][y]));
                        for m in 0..=n - k {
                            let l = n - k - m;
                            vec_axpy(&mut diff, &-lambda, &mu(k, &de[l][x], &de[m][y]));
                        }
                    }
                    if !linalg::is_zero_vector(&diff) {
                        leibniz = Some([x, y]);
                        break 'pairs;
                    }
                }
            }
            OrderVerdict { order: n, associativity, leibniz }
        })
        .collect()
}

/// The infinitesimal `(μ_1, d_1)`, a 2-cocycle of `C*_Diff(A, A)`.
pub fn infinitesimal(def: &TruncatedDeformation) -> Result<DiffCochain, Error> {
    if def.order() < 1 {
        return Err(Error::InvalidInput("the infinitesimal needs a deformation of order at least one".into()));
    }
    let verdicts = check_deformation(def);
    if let Some(v) = verdicts.iter().take(2).find(|v| !v.passed()) {
        return Err(Error::InvalidInput(format!("deformation equations fail at order {}", v.order)));
    }
    let pair = def.coefficient_pair(1);
    let ctx = regular_context(&def.base)?;
    if !ctx.diff_d(&pair)?.is_zero() {
        return Err(Error::Internal("infinitesimal of a valid deformation is not closed".into()));
    }
    Ok(pair)
}

/// `Φ_t = Σ φ_i tⁱ` with `φ_0 = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedGauge {
    phi: Vec<Matrix>,
}

impl TruncatedGauge {
    pub fn new(phi: Vec<Matrix>) -> Result<Self, Error> {
        let first = phi.first().ok_or_else(|| Error::InvalidInput("a gauge needs at least the identity term".into()))?;
        let n = first.rows();
        if *first != Matrix::identity(first.field(), n) {
            return Err(Error::InvalidInput("the order-zero term of a gauge must be the identity".into()));
        }
        for p in &phi {
            check_dim("gauge rows", n, p.rows())?;
            check_dim("gauge cols", n, p.cols())?;
        }
        Ok(TruncatedGauge { phi })
    }

    pub fn identity(field: crate::Field, dim: usize, order: usize) -> Self {
        let mut phi = vec![Matrix::identity(field, dim)];
        phi.resize(order + 1, Matrix::zeros(field, dim, dim));
        TruncatedGauge { phi }
    }

    /// `id + t^k φ`.
    pub fn single(phi: Matrix, k: usize, order: usize) -> Result<Self, Error> {
        let mut g = TruncatedGauge::identity(phi.field(), phi.rows(), order);
        if k == 0 || k > order {
            return Err(Error::InvalidInput(format!("gauge term of order {k} outside 1..={order}")));
        }
        g.phi[k] = phi;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn terms(&self) -> &[Matrix] {
        &self.phi
    }

    pub fn is_identity(&self) -> bool {
        self.phi[1..].iter().all(Matrix::is_zero)
    }

    /// Series inverse: `ψ_0 = id`, `ψ_k = −Σ_{j=1}^k φ_j ψ_{k−j}`.
    pub fn inverse(&self) -> Self {
        let mut psi: Vec<Matrix> = vec![self.phi[0].clone()];
        for k in 1..self.phi.len() {
            let mut acc = Matrix::zeros(self.phi[0].field(), self.phi[0].rows(), self.phi[0].cols());
            for j in 1..=k {
                acc = acc.sub(&self.phi[j].mul(&psi[k - j]).expect("square")).expect("square");
            }
            psi.push(acc);
        }
        TruncatedGauge { phi: psi }
    }

    /// `self ∘ other`, truncated.
    pub fn compose(&self, other: &TruncatedGauge) -> Result<Self, Error> {
        check_dim("gauge order", self.order(), other.order())?;
        let mut out = Vec::with_capacity(self.phi.len());
        for k in 0..self.phi.len() {
            let mut acc = Matrix::zeros(self.phi[0].field(), self.phi[0].rows(), self.phi[0].cols());
            for i in 0..=k {
                acc = acc.add(&self.phi[i].mul(&other.phi[k - i])?)?;
            }
            out.push(acc);
        }
        Ok(TruncatedGauge { phi: out })
    }
}

/// `μ̄_t = Φ_t⁻¹ ∘ μ_t ∘ (Φ_t × Φ_t)` and `d̄_t = Φ_t⁻¹ ∘ d_t ∘ Φ_t`.
pub fn apply_gauge(def: &TruncatedDeformation, gauge: &TruncatedGauge) -> Result<TruncatedDeformation, Error> {
    check_dim("gauge order", def.order(), gauge.order())?;
    check_dim("gauge dimension", def.base.dim(), gauge.phi[0].rows())?;
    let ctx = regular_context(&def.base)?;
    let n_ord = def.order();
    let dim = def.base.dim();
    let inv = gauge.inverse();
    let field = def.base.field();
    // images[c][x] = φ_c(e_x)
    let images: Vec<Vec<Vector>> = gauge.phi.iter().map(|p| (0..dim).map(|x| p.column(x)).collect()).collect();

    let mut mu_bar = Vec::with_capacity(n_ord + 1);
    for n in 0..=n_ord {
        let mu_n = Cochain::from_fn(&ctx, 2, |t| {
            let (x, y) = (t[0], t[1]);
            let mut out = linalg::zero_vector(field, dim);
            for a in 0..=n {
                let mut inner = linalg::zero_vector(field, dim);
                for b in 0..=n - a {
                    for c in 0..=n - a - b {
                        let e = n - a - b - c;
                        inner = vec_add(&inner, &def.mu[b].evaluate(&[&images[c][x], &images[e][y]]));
                    }
                }
                out = vec_add(&out, &inv.phi[a].mul_vec(&inner).expect("square"));
            }
            out
        })?;
        mu_bar.push(mu_n);
    }

    let d_maps = def.d.iter().map(Cochain::to_linear_map).collect::<Result<Vec<_>, _>>()?;
    let mut d_bar = Vec::with_capacity(n_ord + 1);
    for n in 0..=n_ord {
        let mut acc = Matrix::zeros(field, dim, dim);
        for a in 0..=n {
            for b in 0..=n - a {
                acc = acc.add(&inv.phi[a].mul(&d_maps[b])?.mul(&gauge.phi[n - a - b])?)?;
            }
        }
        d_bar.push(Cochain::from_linear_map(&ctx, &acc)?);
    }
    Ok(TruncatedDeformation { base: def.base.clone(), mu: mu_bar, d: d_bar })
}

/// Outcome of [`trivialize`].
#[derive(Clone, Debug)]
pub enum Trivialization {
    /// Applying the gauge kills every coefficient of order `1..=N`.
    Trivial { gauge: TruncatedGauge },
    /// After gauging away lower orders, `(μ_k, d_k)` is not a coboundary of
    /// the reduced complex. `class` holds its coordinates in `H̃²_Diff(A, A)`
    /// against the representatives in `group`.
    Obstructed { order: usize, cocycle: DiffCochain, class: Vector, group: Cohomology },
}

/// Remove the coefficients one order at a time by solving
/// `(μ_k, d_k) = −∂_Diff(φ_k)` and gauging by `id + t^k φ_k`.
pub fn trivialize(def: &TruncatedDeformation) -> Result<Trivialization, Error> {
    if let Some(v) = check_deformation(def).into_iter().find(|v| !v.passed()) {
        return Err(Error::InvalidInput(format!("deformation equations fail at order {}", v.order)));
    }
    let ctx = regular_context(&def.base)?;
    let field = def.base.field();
    let n_ord = def.order();
    let boundary = differential_matrix(&ctx, ComplexKind::DiffReduced, 1)?;
    let mut current = def.clone();
    let mut total = TruncatedGauge::identity(field, def.base.dim(), n_ord);
    for k in 1..=n_ord {
        let pair = current.coefficient_pair(k);
        if !ctx.diff_d(&pair)?.is_zero() {
            return Err(Error::Internal(format!("leading coefficient at order {k} is not closed")));
        }
        if pair.is_zero() {
            continue;
        }
        let target: Vector = pair.coords().iter().map(|x| -x).collect();
        match linalg::solve(&boundary, &target)? {
            None => {
                let group = Cohomology::compute(&ctx, ComplexKind::DiffReduced, 2)?;
                let class = group.class_coordinates(&[pair.coords()])?.remove(0);
                return Ok(Trivialization::Obstructed { order: k, cocycle: pair, class, group });
            }
            Some(x) => {
                let phi = Cochain::from_coords(&ctx, 1, x)?.to_linear_map()?;
                let step = TruncatedGauge::single(phi, k, n_ord)?;
                current = apply_gauge(&current, &step)?;
                total = total.compose(&step)?;
            }
        }
    }
    if !current.is_trivial() || !apply_gauge(def, &total)?.is_trivial() {
        return Err(Error::Internal("trivializing gauge left nonzero coefficients".into()));
    }
    Ok(Trivialization::Trivial { gauge: total })
}
