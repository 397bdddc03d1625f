//! Weighted differential algebras and their differential bimodules, given by
//! structure constants.
//!
//! Conventions: `mult[(i * n + j) * n + k]` is the coefficient of `e_k` in
//! `e_i e_j`. Linear maps are matrices acting on column vectors, so column
//! `j` of the derivation holds the coordinates of `d(e_j)`, and column `a` of
//! `left[i]` holds the coordinates of `e_i v_a`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error};
use crate::linalg::{self, is_zero_vector, vec_add, vec_axpy, zero_vector, Matrix, Vector};
use crate::scalar::{Field, Scalar};

/// An associative algebra with a differential operator of weight λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffAlgebra {
    field: Field,
    dim: usize,
    mult: Vec<Scalar>,
    unit: Option<Vector>,
    weight: Scalar,
    derivation: Matrix,
}

impl DiffAlgebra {
    /// Checks shapes and fields only; the axioms are checked by
    /// [`validate_diff_algebra`].
    pub fn new(
        field: Field,
        dim: usize,
        mult: Vec<Scalar>,
        unit: Option<Vector>,
        weight: Scalar,
        derivation: Matrix,
    ) -> Result<Self, Error> {
        check_dim("structure constants", dim * dim * dim, mult.len())?;
        check_dim("derivation rows", dim, derivation.rows())?;
        check_dim("derivation cols", dim, derivation.cols())?;
        if let Some(u) = &unit {
            check_dim("unit", dim, u.len())?;
        }
        let same_field = mult.iter().chain(unit.iter().flatten()).all(|x| x.field() == field)
            && weight.field() == field
            && derivation.field() == field;
        if !same_field {
            return Err(Error::FieldMismatch);
        }
        Ok(DiffAlgebra { field, dim, mult, unit, weight, derivation })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    pub fn derivation(&self) -> &Matrix {
        &self.derivation
    }

    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn structure_constants(&self) -> &[Scalar] {
        &self.mult
    }

    /// Coordinates of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim;
        &self.mult[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                vec_axpy(&mut out, &c, self.basis_product(i, j));
            }
        }
        out
    }

    pub fn d(&self, x: &[Scalar]) -> Vector {
        self.derivation.mul_vec(x).expect("vector of algebra dimension")
    }

    /// Coordinates of `d(e_j)`.
    pub fn d_basis(&self, j: usize) -> Vector {
        self.derivation.column(j)
    }

    /// `x + λ d(x)`, the map through which the deformed bimodule acts.
    pub fn twist(&self, x: &[Scalar]) -> Vector {
        let dx = self.d(x);
        let mut out = x.to_vec();
        vec_axpy(&mut out, &self.weight, &dx);
        out
    }

    pub fn basis(&self, i: usize) -> Vector {
        linalg::unit_vector(self.field, self.dim, i)
    }

    /// The same algebra with a different weight and derivation.
    pub fn with_operator(&self, weight: Scalar, derivation: Matrix) -> Result<DiffAlgebra, Error> {
        DiffAlgebra::new(self.field, self.dim, self.mult.clone(), self.unit.clone(), weight, derivation)
    }

    /// Re-express the algebra in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<DiffAlgebra, Error> {
        let n = self.dim;
        check_dim("basis change rows", n, p.rows())?;
        check_dim("basis change cols", n, p.cols())?;
        let inv = inverse(p)?;
        let cols: Vec<Vector> = (0..n).map(|j| p.column(j)).collect();
        let mut mult = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                let prod = self.mul(&cols[a], &cols[b]);
                mult.extend(inv.mul_vec(&prod)?);
            }
        }
        let derivation = inv.mul(&self.derivation)?.mul(p)?;
        let unit = match &self.unit {
            Some(u) => Some(inv.mul_vec(u)?),
            None => None,
        };
        DiffAlgebra::new(self.field, n, mult, unit, self.weight.clone(), derivation)
    }
}

/// Inverse of a square matrix, or an error if it is singular.
pub fn inverse(p: &Matrix) -> Result<Matrix, Error> {
    check_dim("square matrix", p.rows(), p.cols())?;
    let n = p.rows();
    let ids: Vec<Vector> = (0..n).map(|i| linalg::unit_vector(p.field(), n, i)).collect();
    let sols = linalg::solve_many(p, &ids)?;
    let mut cols = Vec::with_capacity(n);
    for s in sols {
        match s {
            Some(c) => cols.push(c),
            None => return Err(Error::InvalidInput("matrix is not invertible".into())),
        }
    }
    Matrix::from_columns(p.field(), n, &cols)
}

/// A bimodule over a differential algebra, with its own operator `d_V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffBimodule {
    field: Field,
    algebra_dim: usize,
    dim: usize,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    dv: Matrix,
}

impl DiffBimodule {
    pub fn new(field: Field, algebra_dim: usize, dim: usize, left: Vec<Matrix>, right: Vec<Matrix>, dv: Matrix) -> Result<Self, Error> {
        check_dim("left action count", algebra_dim, left.len())?;
        check_dim("right action count", algebra_dim, right.len())?;
        for m in left.iter().chain(&right).chain(core::iter::once(&dv)) {
            check_dim("action rows", dim, m.rows())?;
            check_dim("action cols", dim, m.cols())?;
            if m.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(DiffBimodule { field, algebra_dim, dim, left, right, dv })
    }

    /// The zero module.
    pub fn zero(a: &DiffAlgebra) -> DiffBimodule {
        let z = Matrix::zeros(a.field, 0, 0);
        DiffBimodule { field: a.field, algebra_dim: a.dim, dim: 0, left: vec![z.clone(); a.dim], right: vec![z.clone(); a.dim], dv: z }
    }

    /// `V` with both actions zero and the given operator.
    pub fn trivial(a: &DiffAlgebra, dv: Matrix) -> Result<DiffBimodule, Error> {
        let m = dv.rows();
        let z = Matrix::zeros(a.field, m, m);
        DiffBimodule::new(a.field, a.dim, m, vec![z.clone(); a.dim], vec![z; a.dim], dv)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn left(&self) -> &[Matrix] {
        &self.left
    }

    pub fn right(&self) -> &[Matrix] {
        &self.right
    }

    pub fn dv(&self) -> &Matrix {
        &self.dv
    }

    pub fn d(&self, v: &[Scalar]) -> Vector {
        self.dv.mul_vec(v).expect("vector of module dimension")
    }

    /// Matrix of `v ↦ x v`.
    pub fn left_matrix(&self, x: &[Scalar]) -> Matrix {
        combine_actions(self.field, self.dim, &self.left, x)
    }

    /// Matrix of `v ↦ v x`.
    pub fn right_matrix(&self, x: &[Scalar]) -> Matrix {
        combine_actions(self.field, self.dim, &self.right, x)
    }

    pub fn act_left(&self, x: &[Scalar], v: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                vec_axpy(&mut out, xi, &self.left[i].mul_vec(v).expect("module vector"));
            }
        }
        out
    }

    pub fn act_right(&self, v: &[Scalar], x: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                vec_axpy(&mut out, xi, &self.right[i].mul_vec(v).expect("module vector"));
            }
        }
        out
    }

    /// Re-index the actions after the algebra basis changes to the columns of `p`.
    pub fn change_algebra_basis(&self, p: &Matrix) -> Result<DiffBimodule, Error> {
        check_dim("basis change", self.algebra_dim, p.rows())?;
        let left = (0..p.cols()).map(|j| self.left_matrix(&p.column(j))).collect();
        let right = (0..p.cols()).map(|j| self.right_matrix(&p.column(j))).collect();
        DiffBimodule::new(self.field, p.cols(), self.dim, left, right, self.dv.clone())
    }

    fn check_context(&self, a: &DiffAlgebra) -> Result<(), Error> {
        check_dim("bimodule over algebra", a.dim, self.algebra_dim)?;
        if a.field != self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }
}

fn combine_actions(field: Field, m: usize, actions: &[Matrix], x: &[Scalar]) -> Matrix {
    let mut out = Matrix::zeros(field, m, m);
    for (i, xi) in x.iter().enumerate() {
        if !xi.is_zero() {
            out = out.add(&actions[i].scale(xi)).expect("same shape");
        }
    }
    out
}

/// `V` with actions twisted through `x ↦ x + λ d_A(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedBimodule {
    base: DiffBimodule,
    twisted: DiffBimodule,
}

impl DeformedBimodule {
    pub fn base(&self) -> &DiffBimodule {
        &self.base
    }

    /// The twisted actions packaged as an ordinary bimodule.
    pub fn as_bimodule(&self) -> &DiffBimodule {
        &self.twisted
    }
}

/// Build the deformed bimodule `V_λ`.
pub fn deform_bimodule(a: &DiffAlgebra, v: &DiffBimodule) -> Result<DeformedBimodule, Error> {
    v.check_context(a)?;
    let left = (0..a.dim).map(|i| v.left_matrix(&a.twist(&a.basis(i)))).collect();
    let right = (0..a.dim).map(|i| v.right_matrix(&a.twist(&a.basis(i)))).collect();
    let twisted = DiffBimodule::new(v.field, a.dim, v.dim, left, right, v.dv.clone())?;
    Ok(DeformedBimodule { base: v.clone(), twisted })
}

/// A single failed identity, with the basis indices where it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `(e_i e_j) e_k ≠ e_i (e_j e_k)`.
    Associativity { i: usize, j: usize, k: usize },
    /// `1 · e_i ≠ e_i`.
    LeftUnit { i: usize },
    /// `e_i · 1 ≠ e_i`.
    RightUnit { i: usize },
    /// `d(1) ≠ 0`.
    UnitDerivation,
    /// Weighted Leibniz rule fails on `(e_i, e_j)`.
    Leibniz { i: usize, j: usize },
    /// `(e_i e_j) v_a ≠ e_i (e_j v_a)`.
    LeftAction { i: usize, j: usize, a: usize },
    /// `v_a (e_i e_j) ≠ (v_a e_i) e_j`.
    RightAction { i: usize, j: usize, a: usize },
    /// `(e_i v_a) e_j ≠ e_i (v_a e_j)`.
    Bimodule { i: usize, j: usize, a: usize },
    /// `d_V(e_i v_a)` differs from its weighted Leibniz expansion.
    LeftLeibniz { i: usize, a: usize },
    /// `d_V(v_a e_i)` differs from its weighted Leibniz expansion.
    RightLeibniz { i: usize, a: usize },
}

/// Outcome of an axiom check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check associativity, the unit laws (when unital, including `d(1) = 0`)
/// and the weighted Leibniz rule on every basis pair and triple.
pub fn validate_diff_algebra(a: &DiffAlgebra) -> ValidationReport {
    let n = a.dim;
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let ij = a.basis_product(i, j).to_vec();
            for k in 0..n {
                let lhs = a.mul(&ij, &a.basis(k));
                let rhs = a.mul(&a.basis(i), a.basis_product(j, k));
                if lhs != rhs {
                    violations.push(Violation::Associativity { i, j, k });
                }
            }
        }
    }
    if let Some(u) = &a.unit {
        for i in 0..n {
            let e = a.basis(i);
            if a.mul(u, &e) != e {
                violations.push(Violation::LeftUnit { i });
            }
            if a.mul(&e, u) != e {
                violations.push(Violation::RightUnit { i });
            }
        }
        if !is_zero_vector(&a.d(u)) {
            violations.push(Violation::UnitDerivation);
        }
    }
    for i in 0..n {
        let di = a.d_basis(i);
        for j in 0..n {
            let dj = a.d_basis(j);
            let lhs = a.d(a.basis_product(i, j));
            let mut rhs = a.mul(&di, &a.basis(j));
            rhs = vec_add(&rhs, &a.mul(&a.basis(i), &dj));
            vec_axpy(&mut rhs, &a.weight, &a.mul(&di, &dj));
            if lhs != rhs {
                violations.push(Violation::Leibniz { i, j });
            }
        }
    }
    ValidationReport { violations }
}

/// Check the bimodule axioms and the two weighted Leibniz laws for `d_V`.
pub fn validate_diff_bimodule(a: &DiffAlgebra, v: &DiffBimodule) -> Result<ValidationReport, Error> {
    v.check_context(a)?;
    let n = a.dim;
    let mut violations = Vec::new();
    for a_idx in 0..v.dim {
        let va = linalg::unit_vector(v.field, v.dim, a_idx);
        let dva = v.d(&va);
        for i in 0..n {
            let ei = a.basis(i);
            let iv = v.act_left(&ei, &va);
            let vi = v.act_right(&va, &ei);
            for j in 0..n {
                let ej = a.basis(j);
                let eij = a.basis_product(i, j);
                if v.act_left(eij, &va) != v.act_left(&ei, &v.act_left(&ej, &va)) {
                    violations.push(Violation::LeftAction { i, j, a: a_idx });
                }
                if v.act_right(&va, eij) != v.act_right(&v.act_right(&va, &ei), &ej) {
                    violations.push(Violation::RightAction { i, j, a: a_idx });
                }
                if v.act_right(&iv, &ej) != v.act_left(&ei, &v.act_right(&va, &ej)) {
                    violations.push(Violation::Bimodule { i, j, a: a_idx });
                }
            }
            let di = a.d_basis(i);
            let mut rhs = vec_add(&v.act_left(&di, &va), &v.act_left(&ei, &dva));
            vec_axpy(&mut rhs, &a.weight, &v.act_left(&di, &dva));
            if v.d(&iv) != rhs {
                violations.push(Violation::LeftLeibniz { i, a: a_idx });
            }
            let mut rhs = vec_add(&v.act_right(&va, &di), &v.act_right(&dva, &ei));
            vec_axpy(&mut rhs, &a.weight, &v.act_right(&dva, &di));
            if v.d(&vi) != rhs {
                violations.push(Violation::RightLeibniz { i, a: a_idx });
            }
        }
    }
    Ok(ValidationReport { violations })
}

/// `A` acting on itself by multiplication, with `d_V = d_A`.
pub fn regular_bimodule(a: &DiffAlgebra) -> DiffBimodule {
    let n = a.dim;
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for i in 0..n {
        let mut l = Matrix::zeros(a.field, n, n);
        let mut r = Matrix::zeros(a.field, n, n);
        for col in 0..n {
            for k in 0..n {
                l.set(k, col, a.basis_product(i, col)[k].clone());
                r.set(k, col, a.basis_product(col, i)[k].clone());
            }
        }
        left.push(l);
        right.push(r);
    }
    DiffBimodule { field: a.field, algebra_dim: n, dim: n, left, right, dv: a.derivation.clone() }
}

/// `A ⊕ V` with product `(x,u)(y,v) = (xy, xv + uy + ψ(x,y))` and operator
/// `d(x,v) = (d_A x, χ(x) + d_V v)`, basis `e_0..e_{n-1}, v_0..v_{m-1}`.
///
/// The result is unital exactly when `A` is unital, the unit of `A` acts as
/// the identity on both sides of `V`, and `(1, -ψ(1,1))` satisfies the unit
/// laws. No axiom is checked here.
pub fn twisted_sum(
    a: &DiffAlgebra,
    v: &DiffBimodule,
    psi: impl Fn(usize, usize) -> Vector,
    chi: impl Fn(usize) -> Vector,
) -> Result<DiffAlgebra, Error> {
    v.check_context(a)?;
    let (n, m) = (a.dim, v.dim);
    let t = n + m;
    let f = a.field;
    let mut mult = vec![f.zero(); t * t * t];
    let idx = |i: usize, j: usize, k: usize| (i * t + j) * t + k;
    for i in 0..n {
        for j in 0..n {
            for (k, c) in a.basis_product(i, j).iter().enumerate() {
                mult[idx(i, j, k)] = c.clone();
            }
            let p = psi(i, j);
            check_dim("cocycle value", m, p.len())?;
            for (b, c) in p.into_iter().enumerate() {
                mult[idx(i, j, n + b)] = c;
            }
        }
        for col in 0..m {
            for b in 0..m {
                mult[idx(i, n + col, n + b)] = v.left[i].get(b, col).clone();
                mult[idx(n + col, i, n + b)] = v.right[i].get(b, col).clone();
            }
        }
    }
    let mut der = Matrix::zeros(f, t, t);
    for j in 0..n {
        for k in 0..n {
            der.set(k, j, a.derivation.get(k, j).clone());
        }
        let c = chi(j);
        check_dim("cocycle value", m, c.len())?;
        for (b, x) in c.into_iter().enumerate() {
            der.set(n + b, j, x);
        }
    }
    for j in 0..m {
        for b in 0..m {
            der.set(n + b, n + j, v.dv.get(b, j).clone());
        }
    }
    let mut total = DiffAlgebra::new(f, t, mult, None, a.weight.clone(), der)?;
    if let Some(u) = &a.unit {
        let acts_as_one = v.left_matrix(u) == Matrix::identity(f, m) && v.right_matrix(u) == Matrix::identity(f, m);
        if acts_as_one {
            // ψ(1,1) = Σ u_i u_j ψ(e_i, e_j)
            let mut w = zero_vector(f, m);
            for (i, ui) in u.iter().enumerate() {
                for (j, uj) in u.iter().enumerate() {
                    if !ui.is_zero() && !uj.is_zero() {
                        vec_axpy(&mut w, &(ui * uj), &psi(i, j));
                    }
                }
            }
            let mut cand = u.clone();
            cand.extend(w.iter().map(|x| -x));
            if unit_law_holds(&total, &cand) {
                total.unit = Some(cand);
            }
        }
    }
    Ok(total)
}

fn unit_law_holds(a: &DiffAlgebra, u: &[Scalar]) -> bool {
    (0..a.dim).all(|i| {
        let e = a.basis(i);
        a.mul(u, &e) == e && a.mul(&e, u) == e
    })
}

/// The semidirect product `A ⋉ V`.
pub fn semidirect_product(a: &DiffAlgebra, v: &DiffBimodule) -> Result<DiffAlgebra, Error> {
    let m = v.dim;
    twisted_sum(a, v, |_, _| zero_vector(a.field, m), |_| zero_vector(a.field, m))
}

/// Ways in which a linear map can fail to be a differential algebra
/// homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomViolation {
    Multiplicative { i: usize, j: usize },
    Derivation { i: usize },
    Unit,
}

/// Check that `map` (columns = images of the basis of `a`) is a
/// differential algebra homomorphism `a → b`. When both algebras are unital
/// the unit must be preserved.
pub fn homomorphism_violations(a: &DiffAlgebra, b: &DiffAlgebra, map: &Matrix) -> Result<Vec<HomViolation>, Error> {
    check_dim("homomorphism rows", b.dim, map.rows())?;
    check_dim("homomorphism cols", a.dim, map.cols())?;
    let mut out = Vec::new();
    let images: Vec<Vector> = (0..a.dim).map(|j| map.column(j)).collect();
    for i in 0..a.dim {
        for j in 0..a.dim {
            let lhs = map.mul_vec(a.basis_product(i, j))?;
            if lhs != b.mul(&images[i], &images[j]) {
                out.push(HomViolation::Multiplicative { i, j });
            }
        }
        if map.mul_vec(&a.d_basis(i))? != b.d(&images[i]) {
            out.push(HomViolation::Derivation { i });
        }
    }
    if let (Some(ua), Some(ub)) = (&a.unit, &b.unit) {
        if &map.mul_vec(ua)? != ub {
            out.push(HomViolation::Unit);
        }
    }
    Ok(out)
}

/// The bimodule carried by the kernel of a surjection, together with the
/// data used to compute it.
#[derive(Clone, Debug)]
pub struct KernelDecomposition {
    pub module: DiffBimodule,
    /// Columns form the deterministic kernel basis, in total-algebra coordinates.
    pub kernel: Matrix,
    /// Linear section of the projection, `dim Â × dim A`.
    pub section: Matrix,
}

impl KernelDecomposition {
    /// Coordinates in the kernel basis of a vector lying in the kernel.
    pub fn kernel_coordinates(&self, x: &[Scalar]) -> Result<Vector, Error> {
        kernel_coords(&self.kernel, &[x.to_vec()]).map(|mut v| v.remove(0))
    }
}

fn kernel_coords(kernel: &Matrix, xs: &[Vector]) -> Result<Vec<Vector>, Error> {
    linalg::solve_many(kernel, xs)?
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::InvalidInput("vector does not lie in the kernel".into())))
        .collect()
}

/// Induced bimodule on `ker(projection)` for a surjective differential
/// algebra homomorphism `Â → A` with square-zero kernel. Without a section,
/// one is computed from echelon-form preimages (free variables zero).
pub fn kernel_decomposition(
    total: &DiffAlgebra,
    base: &DiffAlgebra,
    projection: &Matrix,
    section: Option<&Matrix>,
) -> Result<KernelDecomposition, Error> {
    let viol = homomorphism_violations(total, base, projection)?;
    if let Some(w) = viol.first() {
        return Err(Error::InvalidInput(format!("projection is not a differential algebra homomorphism: {w:?}")));
    }
    if linalg::rank(projection) != base.dim {
        return Err(Error::InvalidInput("projection is not surjective".into()));
    }
    let f = total.field;
    let section = match section {
        Some(s) => {
            check_dim("section rows", total.dim, s.rows())?;
            check_dim("section cols", base.dim, s.cols())?;
            if projection.mul(s)? != Matrix::identity(f, base.dim) {
                return Err(Error::InvalidInput("supplied map is not a section of the projection".into()));
            }
            s.clone()
        }
        None => {
            let ids: Vec<Vector> = (0..base.dim).map(|i| base.basis(i)).collect();
            let cols: Vec<Vector> = linalg::solve_many(projection, &ids)?
                .into_iter()
                .map(|c| c.ok_or_else(|| Error::Internal("surjection without preimage".into())))
                .collect::<Result<_, _>>()?;
            Matrix::from_columns(f, total.dim, &cols)?
        }
    };
    let kbasis = linalg::kernel_basis(projection);
    let m = kbasis.len();
    let kernel = Matrix::from_columns(f, total.dim, &kbasis)?;
    for (a, ka) in kbasis.iter().enumerate() {
        for (b, kb) in kbasis.iter().enumerate() {
            if !is_zero_vector(&total.mul(ka, kb)) {
                return Err(Error::InvalidInput(format!("kernel is not square-zero: k{a} k{b} ≠ 0")));
            }
        }
    }
    let mut left = Vec::with_capacity(base.dim);
    let mut right = Vec::with_capacity(base.dim);
    for i in 0..base.dim {
        let s_i = section.column(i);
        let l: Vec<Vector> = kbasis.iter().map(|k| total.mul(&s_i, k)).collect();
        let r: Vec<Vector> = kbasis.iter().map(|k| total.mul(k, &s_i)).collect();
        left.push(Matrix::from_columns(f, m, &kernel_coords(&kernel, &l)?)?);
        right.push(Matrix::from_columns(f, m, &kernel_coords(&kernel, &r)?)?);
    }
    let dk: Vec<Vector> = kbasis.iter().map(|k| total.d(k)).collect();
    let dv = Matrix::from_columns(f, m, &kernel_coords(&kernel, &dk).map_err(|_| {
        Error::InvalidInput("kernel is not stable under the derivation".into())
    })?)?;
    let module = DiffBimodule::new(f, base.dim, m, left, right, dv)?;
    Ok(KernelDecomposition { module, kernel, section })
}

/// The bimodule `ker(projection)`; see [`kernel_decomposition`].
pub fn kernel_bimodule(
    total: &DiffAlgebra,
    base: &DiffAlgebra,
    projection: &Matrix,
    section: Option<&Matrix>,
) -> Result<DiffBimodule, Error> {
    kernel_decomposition(total, base, projection, section).map(|k| k.module)
}

/// `[I_n | 0]`, the projection `A ⊕ V → A`.
pub fn canonical_projection(field: Field, n: usize, m: usize) -> Matrix {
    let mut p = Matrix::zeros(field, n, n + m);
    for i in 0..n {
        p.set(i, i, field.one());
    }
    p
}

/// `[0 ; I_m]`, the inclusion `V → A ⊕ V`.
pub fn canonical_inclusion(field: Field, n: usize, m: usize) -> Matrix {
    let mut p = Matrix::zeros(field, n + m, m);
    for i in 0..m {
        p.set(n + i, i, field.one());
    }
    p
}

/// `[I_n ; 0]`, the section `x ↦ (x, 0)`.
pub fn canonical_section(field: Field, n: usize, m: usize) -> Matrix {
    canonical_projection(field, n, m).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn q(x: i64) -> Scalar {
        Field::Rational.from_i64(x)
    }

    #[test]
    fn field_passes_for_any_weight() {
        for w in [0, 1, -5] {
            let a = corpus::ground_field(q(w));
            assert!(validate_diff_algebra(&a).passed());
        }
    }

    #[test]
    fn dual_numbers_euler_derivation_passes() {
        for w in [0, 1, 7] {
            let a = corpus::dual_numbers(q(1), q(w));
            assert!(validate_diff_algebra(&a).passed(), "weight {w}");
        }
    }

    #[test]
    fn nonzero_derivative_of_unit_fails() {
        let a = corpus::dual_numbers(q(1), q(0));
        let mut d = a.derivation().clone();
        d.set(0, 0, q(1));
        let bad = a.with_operator(q(0), d).unwrap();
        let report = validate_diff_algebra(&bad);
        assert!(report.violations.contains(&Violation::UnitDerivation));
    }

    #[test]
    fn swap_difference_passes_at_weight_one() {
        let a = corpus::cyclic_difference(2, q(1));
        assert!(validate_diff_algebra(&a).passed());
        // the same operator is not a derivation of weight zero
        let w0 = a.with_operator(q(0), a.derivation().clone()).unwrap();
        assert!(!validate_diff_algebra(&w0).passed());
    }

    #[test]
    fn regular_bimodule_examples() {
        let k = corpus::ground_field(q(0));
        let v = regular_bimodule(&k);
        assert_eq!(v.dim(), 1);
        assert_eq!(v.left()[0], Matrix::identity(Field::Rational, 1));
        assert!(v.dv().is_zero());

        let a = corpus::dual_numbers(q(1), q(0));
        let v = regular_bimodule(&a);
        // multiplication by x sends 1 ↦ x and x ↦ 0
        let lx = &v.left()[1];
        assert_eq!((lx.get(1, 0).clone(), lx.get(0, 0).clone(), lx.get(0, 1).clone(), lx.get(1, 1).clone()), (q(1), q(0), q(0), q(0)));
        assert_eq!(v.dv().get(0, 0), &q(0));
        assert_eq!(v.dv().get(1, 1), &q(1));
        assert!(validate_diff_bimodule(&a, &v).unwrap().passed());

        let s = corpus::cyclic_difference(2, q(1));
        let v = regular_bimodule(&s);
        for l in v.left() {
            assert_eq!(l.get(0, 1), &q(0));
            assert_eq!(l.get(1, 0), &q(0));
        }
        assert_eq!(v.dv(), s.derivation());
    }

    #[test]
    fn zero_operator_on_regular_module_fails_at_x_one() {
        let a = corpus::dual_numbers(q(1), q(0));
        let reg = regular_bimodule(&a);
        let v = DiffBimodule::new(Field::Rational, 2, 2, reg.left().to_vec(), reg.right().to_vec(), Matrix::zeros(Field::Rational, 2, 2)).unwrap();
        let report = validate_diff_bimodule(&a, &v).unwrap();
        assert!(report.violations.contains(&Violation::LeftLeibniz { i: 1, a: 0 }));
    }

    #[test]
    fn zero_module_is_valid() {
        let a = corpus::dual_numbers(q(1), q(0));
        assert!(validate_diff_bimodule(&a, &DiffBimodule::zero(&a)).unwrap().passed());
    }

    #[test]
    fn deformed_bimodule_examples() {
        let a = corpus::dual_numbers(q(1), q(1));
        let v = regular_bimodule(&a);
        let dv = deform_bimodule(&a, &v).unwrap();
        // x ⊢ v = (x + d x) v = 2 x v
        assert_eq!(dv.as_bimodule().left()[1], v.left()[1].scale(&q(2)));
        assert!(validate_diff_bimodule(&a, dv.as_bimodule()).unwrap().passed());

        let a0 = corpus::dual_numbers(q(1), q(0));
        let v0 = regular_bimodule(&a0);
        assert_eq!(deform_bimodule(&a0, &v0).unwrap().as_bimodule(), &v0);

        let k = corpus::ground_field(q(3));
        let vk = regular_bimodule(&k);
        assert_eq!(deform_bimodule(&k, &vk).unwrap().as_bimodule(), &vk);
    }

    #[test]
    fn semidirect_examples() {
        let k = corpus::ground_field(q(0));
        let v = DiffBimodule::new(
            Field::Rational,
            1,
            1,
            vec![Matrix::identity(Field::Rational, 1)],
            vec![Matrix::identity(Field::Rational, 1)],
            Matrix::zeros(Field::Rational, 1, 1),
        )
        .unwrap();
        let dual = semidirect_product(&k, &v).unwrap();
        assert_eq!(dual, corpus::dual_numbers(q(0), q(0)));

        let a = corpus::dual_numbers(q(1), q(0));
        let z = semidirect_product(&a, &DiffBimodule::zero(&a)).unwrap();
        assert_eq!(z, a);

        let s = semidirect_product(&a, &regular_bimodule(&a)).unwrap();
        assert!(validate_diff_algebra(&s).passed());
        assert!(s.is_unital());
        for i in 2..4 {
            for j in 2..4 {
                assert!(is_zero_vector(s.basis_product(i, j)));
            }
        }
    }

    #[test]
    fn kernel_round_trip_and_identity_projection() {
        let a = corpus::dual_numbers(q(1), q(0));
        let v = regular_bimodule(&a);
        let s = semidirect_product(&a, &v).unwrap();
        let p = canonical_projection(Field::Rational, 2, 2);
        assert_eq!(kernel_bimodule(&s, &a, &p, None).unwrap(), v);

        let id = Matrix::identity(Field::Rational, 2);
        assert_eq!(kernel_bimodule(&a, &a, &id, None).unwrap().dim(), 0);

        let k = corpus::ground_field(q(0));
        let dual = corpus::dual_numbers(q(0), q(0));
        let pk = canonical_projection(Field::Rational, 1, 1);
        let kv = kernel_bimodule(&dual, &k, &pk, None).unwrap();
        assert_eq!(kv.dim(), 1);
        assert_eq!(kv.left()[0], Matrix::identity(Field::Rational, 1));
        assert_eq!(kv.right()[0], Matrix::identity(Field::Rational, 1));
    }

    #[test]
    fn kernel_rejects_non_homomorphism() {
        let a = corpus::dual_numbers(q(1), q(0));
        let s = semidirect_product(&a, &regular_bimodule(&a)).unwrap();
        let mut p = canonical_projection(Field::Rational, 2, 2);
        p.set(1, 2, q(1));
        assert!(matches!(kernel_bimodule(&s, &a, &p, None), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn kernel_actions_do_not_depend_on_section() {
        let a = corpus::dual_numbers(q(1), q(0));
        let v = regular_bimodule(&a);
        let s = semidirect_product(&a, &v).unwrap();
        let p = canonical_projection(Field::Rational, 2, 2);
        let mut sec = canonical_section(Field::Rational, 2, 2);
        sec.set(2, 0, q(3));
        sec.set(3, 1, q(-2));
        sec.set(2, 1, q(5));
        assert_eq!(kernel_bimodule(&s, &a, &p, Some(&sec)).unwrap(), v);
    }

    #[test]
    fn change_basis_preserves_validity() {
        let a = corpus::matrix_inner(q(1));
        let mut p = Matrix::identity(Field::Rational, 4);
        p.set(0, 1, q(2));
        p.set(3, 2, q(-1));
        let b = a.change_basis(&p).unwrap();
        assert!(validate_diff_algebra(&b).passed());
        let v = regular_bimodule(&a).change_algebra_basis(&p).unwrap();
        assert!(validate_diff_bimodule(&b, &v).unwrap().passed());
    }
}
