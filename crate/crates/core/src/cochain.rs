//! Cochains and the four differentials.
//!
//! A degree-`n` cochain stores one `V`-vector per basis tuple
//! `(i_1, …, i_n)`. Tuples are ordered lexicographically, little-endian in
//! the first argument: the tuple index is `Σ_k i_k · (dim A)^(k-1)`. The flat
//! coordinate of component `c` at tuple index `t` is `t · dim V + c`.
//!
//! Differentials are evaluated by scattering each nonzero input value into
//! the output, so sparse inputs (unit cochains during matrix assembly) are
//! cheap.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{deform_bimodule, DeformedBimodule, DiffAlgebra, DiffBimodule};
use crate::error::{check_dim, Error};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Field, Scalar};

/// Default largest degree for which `δ` and matrix assembly run.
pub const DEFAULT_MAX_DEGREE: usize = 4;

/// Which actions the Hochschild differential uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The actions of `V`: the differential `∂`.
    Plain,
    /// The twisted actions of `V_λ`: the differential `∂_λ`.
    Deformed,
}

type Sparse = Vec<(usize, usize, Scalar)>;

fn sparse(m: &Matrix) -> Sparse {
    let mut out = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.get(r, c);
            if !v.is_zero() {
                out.push((r, c, v.clone()));
            }
        }
    }
    out
}

fn add_signed(acc: &mut Scalar, a: &Scalar, b: &Scalar, negate: bool) {
    if a.is_zero() || b.is_zero() {
        return;
    }
    let p = a * b;
    if negate {
        acc.sub_assign_ref(&p);
    } else {
        acc.add_assign_ref(&p);
    }
}

/// An algebra, a bimodule over it and the data the differentials need.
#[derive(Clone, Debug)]
pub struct Context {
    algebra: DiffAlgebra,
    module: DiffBimodule,
    deformed: DeformedBimodule,
    max_degree: usize,
    // factors[k] lists (a, b, c[a][b][k]) with a nonzero coefficient
    factors: Vec<Vec<(usize, usize, Scalar)>>,
    // d_rows[k] lists (t, coefficient of e_k in d(e_t))
    d_rows: Vec<Vec<(usize, Scalar)>>,
    left: Vec<Sparse>,
    right: Vec<Sparse>,
    left_twisted: Vec<Sparse>,
    right_twisted: Vec<Sparse>,
    dv: Sparse,
}

impl Context {
    pub fn new(algebra: &DiffAlgebra, module: &DiffBimodule) -> Result<Context, Error> {
        let deformed = deform_bimodule(algebra, module)?;
        let n = algebra.dim();
        let mut factors = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                for (k, c) in algebra.basis_product(a, b).iter().enumerate() {
                    if !c.is_zero() {
                        factors[k].push((a, b, c.clone()));
                    }
                }
            }
        }
        let mut d_rows = vec![Vec::new(); n];
        for (k, t, v) in sparse(algebra.derivation()) {
            d_rows[k].push((t, v));
        }
        let twisted = deformed.as_bimodule();
        Ok(Context {
            factors,
            d_rows,
            left: module.left().iter().map(sparse).collect(),
            right: module.right().iter().map(sparse).collect(),
            left_twisted: twisted.left().iter().map(sparse).collect(),
            right_twisted: twisted.right().iter().map(sparse).collect(),
            dv: sparse(module.dv()),
            algebra: algebra.clone(),
            module: module.clone(),
            deformed,
            max_degree: DEFAULT_MAX_DEGREE,
        })
    }

    /// Same context with a different degree budget.
    pub fn with_max_degree(mut self, max_degree: usize) -> Context {
        self.max_degree = max_degree;
        self
    }

    pub fn algebra(&self) -> &DiffAlgebra {
        &self.algebra
    }

    pub fn module(&self) -> &DiffBimodule {
        &self.module
    }

    pub fn deformed(&self) -> &DeformedBimodule {
        &self.deformed
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn weight(&self) -> &Scalar {
        self.algebra.weight()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn module_dim(&self) -> usize {
        self.module.dim()
    }

    pub(crate) fn check_budget(&self, degree: usize) -> Result<(), Error> {
        if degree > self.max_degree {
            Err(Error::Budget { degree, max: self.max_degree })
        } else {
            Ok(())
        }
    }

    /// Number of coordinates of a degree-`n` cochain.
    pub fn cochain_len(&self, n: usize) -> usize {
        tuple_count(self.algebra_dim(), n) * self.module_dim()
    }

    /// Number of coordinates of a degree-`n` pair `(f, g)`.
    pub fn diff_cochain_len(&self, n: usize) -> usize {
        self.cochain_len(n) + if n == 0 { 0 } else { self.cochain_len(n - 1) }
    }

    fn check(&self, f: &Cochain) -> Result<(), Error> {
        if f.field != self.field() || f.algebra_dim != self.algebra_dim() || f.module_dim != self.module_dim() {
            return Err(Error::ContextMismatch(format!(
                "cochain over dims ({}, {}) used with context ({}, {})",
                f.algebra_dim,
                f.module_dim,
                self.algebra_dim(),
                self.module_dim()
            )));
        }
        Ok(())
    }

    /// The Hochschild differential `∂` (plain) or `∂_λ` (deformed).
    pub fn hochschild_d(&self, f: &Cochain, mode: Mode) -> Result<Cochain, Error> {
        self.check(f)?;
        let (left, right) = match mode {
            Mode::Plain => (&self.left, &self.right),
            Mode::Deformed => (&self.left_twisted, &self.right_twisted),
        };
        let na = self.algebra_dim();
        let m = self.module_dim();
        let n = f.degree;
        let mut out = Cochain::zero(self.field(), na, m, n + 1);
        let top = na.pow(n as u32);
        for (s, w) in f.values() {
            if w.iter().all(Scalar::is_zero) {
                continue;
            }
            for a in 0..na {
                let base = (a + na * s) * m;
                for (r, c, v) in &left[a] {
                    add_signed(&mut out.coeffs[base + r], v, &w[*c], false);
                }
                let base = (s + a * top) * m;
                for (r, c, v) in &right[a] {
                    add_signed(&mut out.coeffs[base + r], &w[*c], v, n % 2 == 0);
                }
            }
            // the product of output slots i-1, i lands in input slot i-1
            for i in 1..=n {
                let lo_p = na.pow(i as u32 - 1);
                let low = s % lo_p;
                let k = (s / lo_p) % na;
                let high = s / (lo_p * na);
                for (a, b, c) in &self.factors[k] {
                    let t = low + a * lo_p + b * lo_p * na + high * lo_p * na * na;
                    for (comp, wc) in w.iter().enumerate() {
                        add_signed(&mut out.coeffs[t * m + comp], c, wc, i % 2 == 1);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `δ` by summing over all nonempty sets of slots that receive `d_A`.
    pub fn delta_subset(&self, f: &Cochain) -> Result<Cochain, Error> {
        self.check(f)?;
        self.check_budget(f.degree)?;
        let na = self.algebra_dim();
        let m = self.module_dim();
        let n = f.degree;
        let lambda = self.weight();
        let powers: Vec<Scalar> = (0..n.max(1)).map(|k| lambda.pow(k as u32)).collect();
        let mut out = Cochain::zero(self.field(), na, m, n);
        let mut tuple = vec![0; n];
        for (s, w) in f.values() {
            if w.iter().all(Scalar::is_zero) {
                continue;
            }
            decode_into(s, na, &mut tuple);
            for subset in 1u32..(1u32 << n) {
                let weight = &powers[subset.count_ones() as usize - 1];
                if weight.is_zero() {
                    continue;
                }
                let slots: Vec<usize> = (0..n).filter(|p| subset >> p & 1 == 1).collect();
                self.scatter_d(&slots, &tuple, weight.clone(), w, &mut out.coeffs);
            }
            for (r, c, v) in &self.dv {
                add_signed(&mut out.coeffs[s * m + r], v, &w[*c], true);
            }
        }
        Ok(out)
    }

    // Adds coef · Π D[k_p][t_p] · w at every tuple obtained from `tuple` by
    // replacing each slot p in `slots` with a t_p such that d(e_{t_p}) has
    // e_{tuple[p]} in its support.
    fn scatter_d(&self, slots: &[usize], tuple: &[usize], coef: Scalar, w: &[Scalar], out: &mut [Scalar]) {
        let na = self.algebra_dim();
        let m = w.len();
        match slots.split_first() {
            None => {
                let t = encode(tuple, na);
                for (comp, wc) in w.iter().enumerate() {
                    out[t * m + comp].add_product(&coef, wc);
                }
            }
            Some((&p, rest)) => {
                let mut t = tuple.to_vec();
                for (target, v) in &self.d_rows[tuple[p]] {
                    t[p] = *target;
                    self.scatter_d(rest, &t, &coef * v, w, out);
                }
            }
        }
    }

    /// `δ` via `λ⁻¹(f ∘ (id + λ d_A)^{⊗n} − f) − d_V ∘ f`. Undefined at
    /// weight zero.
    pub fn delta_tensor(&self, f: &Cochain) -> Result<Cochain, Error> {
        self.check(f)?;
        let inv = self.weight().inverse().ok_or(Error::Unsupported("closed-form delta at weight zero"))?;
        let na = self.algebra_dim();
        let m = self.module_dim();
        let lambda = self.weight();
        let mut h = f.clone();
        for p in 0..f.degree {
            let stride = na.pow(p as u32);
            let mut next = h.clone();
            for (s, w) in h.values() {
                if w.iter().all(Scalar::is_zero) {
                    continue;
                }
                let k = (s / stride) % na;
                let cleared = s - k * stride;
                for (target, v) in &self.d_rows[k] {
                    let coef = lambda * v;
                    let t = cleared + target * stride;
                    for (comp, wc) in w.iter().enumerate() {
                        next.coeffs[t * m + comp].add_product(&coef, wc);
                    }
                }
            }
            h = next;
        }
        let mut out = Cochain::zero(self.field(), na, m, f.degree);
        for (i, (a, b)) in h.coeffs.iter().zip(&f.coeffs).enumerate() {
            out.coeffs[i] = &(a - b) * &inv;
        }
        for (s, w) in f.values() {
            for (r, c, v) in &self.dv {
                add_signed(&mut out.coeffs[s * m + r], v, &w[*c], true);
            }
        }
        Ok(out)
    }

    /// `δ`, using the subset sum. Debug builds cross-check against the
    /// closed form when the weight is nonzero.
    pub fn delta(&self, f: &Cochain) -> Result<Cochain, Error> {
        let out = self.delta_subset(f)?;
        #[cfg(debug_assertions)]
        if !self.weight().is_zero() && self.delta_tensor(f)? != out {
            return Err(Error::Internal("the two delta implementations disagree".into()));
        }
        Ok(out)
    }

    /// The combined differential `∂_Diff(f, g) = (∂f, ∂_λ g + (−1)ⁿ δf)`,
    /// and `∂_Diff v = (∂v, δv)` in degree zero.
    pub fn diff_d(&self, c: &DiffCochain) -> Result<DiffCochain, Error> {
        let n = c.degree();
        let f = self.hochschild_d(&c.f, Mode::Plain)?;
        let mut g = self.delta(&c.f)?;
        if n % 2 == 1 {
            g = g.neg();
        }
        if let Some(old) = &c.g {
            self.check(old)?;
            g = g.add(&self.hochschild_d(old, Mode::Deformed)?)?;
        }
        DiffCochain::new(f, Some(g))
    }
}

/// `dim_a^n`.
pub fn tuple_count(dim_a: usize, n: usize) -> usize {
    dim_a.pow(n as u32)
}

/// Index of a basis tuple; the first argument varies fastest.
pub fn encode(tuple: &[usize], dim_a: usize) -> usize {
    tuple.iter().rev().fold(0, |acc, &t| acc * dim_a + t)
}

/// The basis tuple of length `n` with the given index.
pub fn decode(index: usize, dim_a: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    decode_into(index, dim_a, &mut out);
    out
}

fn decode_into(mut index: usize, dim_a: usize, out: &mut [usize]) {
    for slot in out.iter_mut() {
        *slot = index % dim_a;
        index /= dim_a;
    }
}

/// A multilinear map `A^{⊗n} → V`, stored by its values on basis tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    field: Field,
    degree: usize,
    algebra_dim: usize,
    module_dim: usize,
    coeffs: Vec<Scalar>,
}

impl Cochain {
    pub fn zero(field: Field, algebra_dim: usize, module_dim: usize, degree: usize) -> Cochain {
        let len = tuple_count(algebra_dim, degree) * module_dim;
        Cochain { field, degree, algebra_dim, module_dim, coeffs: vec![field.zero(); len] }
    }

    pub fn zero_in(ctx: &Context, degree: usize) -> Cochain {
        Cochain::zero(ctx.field(), ctx.algebra_dim(), ctx.module_dim(), degree)
    }

    /// Build from flat coordinates in the documented order.
    pub fn from_coords(ctx: &Context, degree: usize, coeffs: Vec<Scalar>) -> Result<Cochain, Error> {
        check_dim("cochain coordinates", ctx.cochain_len(degree), coeffs.len())?;
        let field = ctx.field();
        if !coeffs.iter().all(|c| field.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        Ok(Cochain { field, degree, algebra_dim: ctx.algebra_dim(), module_dim: ctx.module_dim(), coeffs })
    }

    /// Build from a function on basis tuples.
    pub fn from_fn(ctx: &Context, degree: usize, mut f: impl FnMut(&[usize]) -> Vector) -> Result<Cochain, Error> {
        let na = ctx.algebra_dim();
        let mut coeffs = Vec::with_capacity(ctx.cochain_len(degree));
        for s in 0..tuple_count(na, degree) {
            let v = f(&decode(s, na, degree));
            check_dim("cochain value", ctx.module_dim(), v.len())?;
            coeffs.extend(v);
        }
        Cochain::from_coords(ctx, degree, coeffs)
    }

    /// A linear map `A → V` viewed as a 1-cochain.
    pub fn from_linear_map(ctx: &Context, map: &Matrix) -> Result<Cochain, Error> {
        check_dim("map rows", ctx.module_dim(), map.rows())?;
        check_dim("map columns", ctx.algebra_dim(), map.cols())?;
        Cochain::from_fn(ctx, 1, |t| map.column(t[0]))
    }

    /// The matrix of a 1-cochain.
    pub fn to_linear_map(&self) -> Result<Matrix, Error> {
        check_dim("cochain degree", 1, self.degree)?;
        let cols: Vec<Vector> = self.values().map(|(_, w)| w.to_vec()).collect();
        Matrix::from_columns(self.field, self.module_dim, &cols)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coeffs
    }

    /// The value on a basis tuple.
    pub fn value(&self, tuple: &[usize]) -> &[Scalar] {
        assert_eq!(tuple.len(), self.degree, "tuple length must equal the degree");
        let t = encode(tuple, self.algebra_dim);
        &self.coeffs[t * self.module_dim..(t + 1) * self.module_dim]
    }

    /// Evaluate on arbitrary arguments by multilinearity.
    pub fn evaluate(&self, args: &[&[Scalar]]) -> Vector {
        assert_eq!(args.len(), self.degree, "argument count must equal the degree");
        let mut out = crate::linalg::zero_vector(self.field, self.module_dim);
        let mut tuple = vec![0; self.degree];
        for (s, w) in self.values() {
            decode_into(s, self.algebra_dim, &mut tuple);
            let mut coef = self.field.one();
            for (slot, &t) in tuple.iter().enumerate() {
                coef = &coef * &args[slot][t];
                if coef.is_zero() {
                    break;
                }
            }
            crate::linalg::vec_axpy(&mut out, &coef, w);
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Iterate `(tuple index, value)`.
    pub fn values(&self) -> impl Iterator<Item = (usize, &[Scalar])> + '_ {
        let m = self.module_dim;
        (0..tuple_count(self.algebra_dim, self.degree)).map(move |t| (t, &self.coeffs[t * m..(t + 1) * m]))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    fn same_shape(&self, o: &Cochain) -> Result<(), Error> {
        if (self.field, self.degree, self.algebra_dim, self.module_dim) != (o.field, o.degree, o.algebra_dim, o.module_dim) {
            return Err(Error::ContextMismatch("cochains of different shapes".into()));
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<Scalar>) -> Cochain {
        Cochain { field: self.field, degree: self.degree, algebra_dim: self.algebra_dim, module_dim: self.module_dim, coeffs }
    }

    pub fn add(&self, o: &Cochain) -> Result<Cochain, Error> {
        self.same_shape(o)?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, o: &Cochain) -> Result<Cochain, Error> {
        self.same_shape(o)?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, s: &Scalar) -> Cochain {
        self.with_coeffs(self.coeffs.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Cochain {
        self.with_coeffs(self.coeffs.iter().map(|a| -a).collect())
    }
}

/// An element `(f, g)` of `Cⁿ_alg ⊕ Cⁿ⁻¹_do`; `g` is absent in degree zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffCochain {
    f: Cochain,
    g: Option<Cochain>,
}

impl DiffCochain {
    pub fn new(f: Cochain, g: Option<Cochain>) -> Result<DiffCochain, Error> {
        match (&g, f.degree) {
            (None, 0) => {}
            (Some(g), n) if n > 0 => {
                check_dim("operator part degree", n - 1, g.degree)?;
                if (g.algebra_dim, g.module_dim) != (f.algebra_dim, f.module_dim) {
                    return Err(Error::ContextMismatch("parts built over different contexts".into()));
                }
            }
            (None, _) => return Err(Error::InvalidInput("operator part missing in positive degree".into())),
            (Some(_), _) => return Err(Error::InvalidInput("degree-zero cochains have no operator part".into())),
        }
        Ok(DiffCochain { f, g })
    }

    /// `(f, 0)`.
    pub fn algebra_part(ctx: &Context, f: Cochain) -> DiffCochain {
        let g = (f.degree > 0).then(|| Cochain::zero_in(ctx, f.degree - 1));
        DiffCochain { f, g }
    }

    /// `(0, g)`.
    pub fn operator_part(ctx: &Context, g: Cochain) -> DiffCochain {
        DiffCochain { f: Cochain::zero_in(ctx, g.degree + 1), g: Some(g) }
    }

    pub fn zero(ctx: &Context, degree: usize) -> DiffCochain {
        DiffCochain::algebra_part(ctx, Cochain::zero_in(ctx, degree))
    }

    /// Coordinates of `f` followed by those of `g`.
    pub fn from_coords(ctx: &Context, degree: usize, mut coords: Vec<Scalar>) -> Result<DiffCochain, Error> {
        check_dim("pair coordinates", ctx.diff_cochain_len(degree), coords.len())?;
        let rest = coords.split_off(ctx.cochain_len(degree));
        let f = Cochain::from_coords(ctx, degree, coords)?;
        let g = if degree == 0 { None } else { Some(Cochain::from_coords(ctx, degree - 1, rest)?) };
        DiffCochain::new(f, g)
    }

    pub fn coords(&self) -> Vector {
        let mut out = self.f.coeffs.clone();
        if let Some(g) = &self.g {
            out.extend_from_slice(&g.coeffs);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.f.degree
    }

    pub fn f(&self) -> &Cochain {
        &self.f
    }

    pub fn g(&self) -> Option<&Cochain> {
        self.g.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.as_ref().map_or(true, Cochain::is_zero)
    }

    pub fn add(&self, o: &DiffCochain) -> Result<DiffCochain, Error> {
        let g = match (&self.g, &o.g) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            (None, None) => None,
            _ => return Err(Error::ContextMismatch("pairs of different degrees".into())),
        };
        DiffCochain::new(self.f.add(&o.f)?, g)
    }

    pub fn sub(&self, o: &DiffCochain) -> Result<DiffCochain, Error> {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> DiffCochain {
        DiffCochain { f: self.f.scale(s), g: self.g.as_ref().map(|g| g.scale(s)) }
    }

    pub fn neg(&self) -> DiffCochain {
        DiffCochain { f: self.f.neg(), g: self.g.as_ref().map(Cochain::neg) }
    }
}

/// Membership in the reduced subcomplex: zero in degree 0, no operator part
/// in degree 1, anything from degree 2 on.
pub fn is_reduced_cochain(c: &DiffCochain) -> bool {
    match c.degree() {
        0 => c.f.is_zero(),
        1 => c.g.as_ref().map_or(true, Cochain::is_zero),
        _ => true,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::regular_bimodule;
    use crate::corpus::{self, dual_numbers, ground_field};
    use crate::linalg::{vec_add, vec_sub};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn q(x: i64) -> Scalar {
        Q.from_i64(x)
    }

    /// Random cochain with small integer entries, about half of them zero.
    pub(crate) fn random_cochain(ctx: &Context, degree: usize, rng: &mut impl Rng) -> Cochain {
        let coeffs = (0..ctx.cochain_len(degree))
            .map(|_| if rng.gen_bool(0.5) { ctx.field().zero() } else { ctx.field().from_i64(rng.gen_range(-3..=3)) })
            .collect();
        Cochain::from_coords(ctx, degree, coeffs).unwrap()
    }

    pub(crate) fn random_pair(ctx: &Context, degree: usize, rng: &mut impl Rng) -> DiffCochain {
        let f = random_cochain(ctx, degree, rng);
        let g = (degree > 0).then(|| random_cochain(ctx, degree - 1, rng));
        DiffCochain::new(f, g).unwrap()
    }

    fn regular(a: &DiffAlgebra) -> Context {
        Context::new(a, &regular_bimodule(a)).unwrap()
    }

    fn contexts() -> Vec<Context> {
        corpus::standard().iter().map(|i| Context::new(&i.algebra, &i.module).unwrap()).collect()
    }

    #[test]
    fn tuple_order_is_little_endian() {
        assert_eq!(encode(&[1, 0], 3), 1);
        assert_eq!(encode(&[0, 1], 3), 3);
        assert_eq!(encode(&[2, 1, 1], 3), 2 + 3 + 9);
        assert_eq!(decode(14, 3, 3), vec![2, 1, 1]);
    }

    #[test]
    fn degree_zero_boundary_over_ground_field_vanishes() {
        let ctx = regular(&ground_field(q(1)));
        let v = Cochain::from_coords(&ctx, 0, vec![q(7)]).unwrap();
        assert!(ctx.hochschild_d(&v, Mode::Plain).unwrap().is_zero());
    }

    #[test]
    fn ground_field_degree_one_boundary() {
        // (∂f)(1,1) = 1·f(1) − f(1·1) + f(1)·1 = c
        let ctx = regular(&ground_field(q(0)));
        let f = Cochain::from_coords(&ctx, 1, vec![q(5)]).unwrap();
        assert_eq!(ctx.hochschild_d(&f, Mode::Plain).unwrap().coords(), &[q(5)]);
    }

    #[test]
    fn deformed_equals_plain_at_weight_zero() {
        let ctx = regular(&corpus::matrix_inner(q(0)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..3 {
            let f = random_cochain(&ctx, n, &mut rng);
            assert_eq!(ctx.hochschild_d(&f, Mode::Plain).unwrap(), ctx.hochschild_d(&f, Mode::Deformed).unwrap());
        }
    }

    #[test]
    fn low_degree_delta_formulas() {
        let a = dual_numbers(q(2), q(3));
        let ctx = regular(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = random_cochain(&ctx, 0, &mut rng);
        let dv = ctx.module().d(v.coords());
        let neg: Vector = dv.iter().map(|x| -x).collect();
        assert_eq!(ctx.delta_subset(&v).unwrap().coords(), &neg[..]);

        let f = random_cochain(&ctx, 1, &mut rng);
        let df = ctx.delta_subset(&f).unwrap();
        for x in 0..2 {
            let e = a.basis(x);
            let expect = vec_sub(&f.evaluate(&[&a.d(&e)]), &ctx.module().d(&f.evaluate(&[&e])));
            assert_eq!(df.value(&[x]), &expect[..]);
        }

        let f = random_cochain(&ctx, 2, &mut rng);
        let df = ctx.delta_subset(&f).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let (ex, ey) = (a.basis(x), a.basis(y));
                let (dx, dy) = (a.d(&ex), a.d(&ey));
                let mut expect = vec_add(&f.evaluate(&[&dx, &ey]), &f.evaluate(&[&ex, &dy]));
                crate::linalg::vec_axpy(&mut expect, a.weight(), &f.evaluate(&[&dx, &dy]));
                let expect = vec_sub(&expect, &ctx.module().d(&f.evaluate(&[&ex, &ey])));
                assert_eq!(df.value(&[x, y]), &expect[..]);
            }
        }
    }

    #[test]
    fn delta_at_weight_zero_uses_single_slots_only() {
        let a = dual_numbers(q(1), q(0));
        let ctx = regular(&a);
        let f = random_cochain(&ctx, 3, &mut ChaCha8Rng::seed_from_u64(3));
        let df = ctx.delta_subset(&f).unwrap();
        for s in 0..8 {
            let t = decode(s, 2, 3);
            let args: Vec<Vector> = t.iter().map(|&i| a.basis(i)).collect();
            let mut expect = ctx.module().d(&f.evaluate(&[&args[0], &args[1], &args[2]])).iter().map(|x| -x).collect::<Vector>();
            for slot in 0..3 {
                let mut moved = args.clone();
                moved[slot] = a.d(&moved[slot]);
                expect = vec_add(&expect, &f.evaluate(&[&moved[0], &moved[1], &moved[2]]));
            }
            assert_eq!(df.value(&t), &expect[..]);
        }
    }

    #[test]
    fn closed_form_delta_needs_nonzero_weight() {
        let ctx = regular(&dual_numbers(q(1), q(0)));
        let f = Cochain::zero_in(&ctx, 1);
        assert!(matches!(ctx.delta_tensor(&f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn zero_operator_gives_minus_dv() {
        let a = corpus::ground_field(q(4));
        let v = DiffBimodule::trivial(&a, Matrix::from_entries(Q, 1, 1, vec![q(3)]).unwrap()).unwrap();
        let ctx = Context::new(&a, &v).unwrap();
        let f = Cochain::from_coords(&ctx, 2, vec![q(2)]).unwrap();
        assert_eq!(ctx.delta_tensor(&f).unwrap().coords(), &[q(-6)]);
        assert_eq!(ctx.delta_subset(&f).unwrap().coords(), &[q(-6)]);
    }

    #[test]
    fn combined_differential_low_degrees() {
        let ctx = regular(&dual_numbers(q(1), q(1)));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v = random_cochain(&ctx, 0, &mut rng);
        let out = ctx.diff_d(&DiffCochain::new(v.clone(), None).unwrap()).unwrap();
        assert_eq!(out.f(), &ctx.hochschild_d(&v, Mode::Plain).unwrap());
        let neg: Vector = ctx.module().d(v.coords()).iter().map(|x| -x).collect();
        assert_eq!(out.g().unwrap().coords(), &neg[..]);

        let g = random_cochain(&ctx, 1, &mut rng);
        let out = ctx.diff_d(&DiffCochain::operator_part(&ctx, g.clone())).unwrap();
        assert!(out.f().is_zero());
        assert_eq!(out.g().unwrap(), &ctx.hochschild_d(&g, Mode::Deformed).unwrap());
    }

    #[test]
    fn reduced_membership() {
        let ctx = regular(&dual_numbers(q(1), q(1)));
        let v = Cochain::from_coords(&ctx, 0, vec![q(1), q(0)]).unwrap();
        assert!(!is_reduced_cochain(&DiffCochain::new(v, None).unwrap()));
        assert!(is_reduced_cochain(&DiffCochain::zero(&ctx, 0)));
        let f = random_cochain(&ctx, 1, &mut ChaCha8Rng::seed_from_u64(5));
        assert!(is_reduced_cochain(&DiffCochain::algebra_part(&ctx, f.clone())));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = Cochain::from_coords(&ctx, 0, vec![q(0), q(1)]).unwrap();
        assert!(!is_reduced_cochain(&DiffCochain::new(f, Some(g)).unwrap()));
        assert!(is_reduced_cochain(&random_pair(&ctx, 3, &mut rng)));
    }

    #[test]
    fn mismatched_context_rejected() {
        let small = regular(&ground_field(q(1)));
        let big = regular(&dual_numbers(q(1), q(1)));
        let f = Cochain::zero_in(&small, 1);
        assert!(matches!(big.hochschild_d(&f, Mode::Plain), Err(Error::ContextMismatch(_))));
        assert!(DiffCochain::new(Cochain::zero_in(&big, 2), Some(Cochain::zero_in(&big, 0))).is_err());
        assert!(DiffCochain::new(Cochain::zero_in(&big, 2), None).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = regular(&dual_numbers(q(1), q(1))).with_max_degree(2);
        let f = Cochain::zero_in(&ctx, 3);
        assert_eq!(ctx.delta_subset(&f), Err(Error::Budget { degree: 3, max: 2 }));
    }

    #[test]
    fn linear_map_round_trip() {
        let ctx = regular(&dual_numbers(q(1), q(1)));
        let f = random_cochain(&ctx, 1, &mut ChaCha8Rng::seed_from_u64(7));
        let m = f.to_linear_map().unwrap();
        assert_eq!(Cochain::from_linear_map(&ctx, &m).unwrap(), f);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn differentials_square_to_zero(inst in 0usize..9, degree in 0usize..3, seed: u64) {
            let ctx = &contexts()[inst];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_cochain(ctx, degree, &mut rng);
            for mode in [Mode::Plain, Mode::Deformed] {
                let once = ctx.hochschild_d(&f, mode).unwrap();
                prop_assert!(ctx.hochschild_d(&once, mode).unwrap().is_zero());
            }
            let c = random_pair(ctx, degree, &mut rng);
            let once = ctx.diff_d(&c).unwrap();
            prop_assert!(ctx.diff_d(&once).unwrap().is_zero());
            prop_assert!(!is_reduced_cochain(&c) || is_reduced_cochain(&once));
        }

        #[test]
        fn delta_is_a_cochain_map(inst in 0usize..9, degree in 0usize..3, seed: u64) {
            let ctx = &contexts()[inst];
            let f = random_cochain(ctx, degree, &mut ChaCha8Rng::seed_from_u64(seed));
            let lhs = ctx.delta_subset(&ctx.hochschild_d(&f, Mode::Plain).unwrap()).unwrap();
            let rhs = ctx.hochschild_d(&ctx.delta_subset(&f).unwrap(), Mode::Deformed).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn delta_implementations_agree(inst in 0usize..9, degree in 0usize..4, seed: u64) {
            let ctx = &contexts()[inst];
            prop_assume!(!ctx.weight().is_zero());
            let f = random_cochain(ctx, degree, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(ctx.delta_tensor(&f).unwrap(), ctx.delta_subset(&f).unwrap());
        }

        #[test]
        fn evaluation_on_basis_matches_storage(degree in 0usize..4, seed: u64) {
            let ctx = regular(&corpus::cyclic_difference(3, q(1)));
            let f = random_cochain(&ctx, degree, &mut ChaCha8Rng::seed_from_u64(seed));
            for (s, w) in f.values() {
                let args: Vec<Vector> = decode(s, 3, degree).iter().map(|&i| ctx.algebra().basis(i)).collect();
                let refs: Vec<&[Scalar]> = args.iter().map(|v| &v[..]).collect();
                prop_assert_eq!(&f.evaluate(&refs)[..], w);
            }
        }
    }
}
