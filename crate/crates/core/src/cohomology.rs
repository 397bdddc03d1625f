//! Differentials as matrices, cohomology and the long exact sequence
//!
//! `… → H^{n-1}_do --ι--> H^n_Diff --π--> HH^n --Δ--> H^n_do --ι--> H^{n+1}_Diff → …`
//!
//! where `ι(g) = (0, g)`, `π(f, g) = f` and `Δ_n[f] = (−1)ⁿ[δf]`.

use alloc::format;
use alloc::vec::Vec;

use crate::cochain::{Cochain, Context, DiffCochain, Mode};
use crate::error::Error;
use crate::linalg::{self, unit_vector, zero_vector, EchelonBasis, Matrix, Vector};

/// One of the four complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplexKind {
    /// `(C*_alg, ∂)`.
    Alg,
    /// `(C*_do, ∂_λ)`.
    Do,
    /// `(C*_Diff, ∂_Diff)`.
    Diff,
    /// The reduced subcomplex: zero in degree 0, algebra part only in degree 1.
    DiffReduced,
}

impl ComplexKind {
    pub const ALL: [ComplexKind; 4] = [ComplexKind::Alg, ComplexKind::Do, ComplexKind::Diff, ComplexKind::DiffReduced];

    pub fn name(self) -> &'static str {
        match self {
            ComplexKind::Alg => "alg",
            ComplexKind::Do => "do",
            ComplexKind::Diff => "diff",
            ComplexKind::DiffReduced => "diff_reduced",
        }
    }
}

/// Dimension of the degree-`n` space of a complex.
pub fn space_dim(ctx: &Context, kind: ComplexKind, n: usize) -> usize {
    match (kind, n) {
        (ComplexKind::Alg | ComplexKind::Do, _) => ctx.cochain_len(n),
        (ComplexKind::Diff, _) => ctx.diff_cochain_len(n),
        (ComplexKind::DiffReduced, 0) => 0,
        (ComplexKind::DiffReduced, 1) => ctx.cochain_len(1),
        (ComplexKind::DiffReduced, _) => ctx.diff_cochain_len(n),
    }
}

/// Apply the differential of `kind` to coordinates in degree `n`.
pub fn apply_differential(ctx: &Context, kind: ComplexKind, n: usize, x: &[crate::Scalar]) -> Result<Vector, Error> {
    match kind {
        ComplexKind::Alg | ComplexKind::Do => {
            let mode = if kind == ComplexKind::Alg { Mode::Plain } else { Mode::Deformed };
            let f = Cochain::from_coords(ctx, n, x.to_vec())?;
            Ok(ctx.hochschild_d(&f, mode)?.into_coords())
        }
        ComplexKind::Diff => Ok(ctx.diff_d(&DiffCochain::from_coords(ctx, n, x.to_vec())?)?.coords()),
        ComplexKind::DiffReduced => match n {
            0 => Ok(zero_vector(ctx.field(), space_dim(ctx, kind, 1))),
            1 => {
                let f = Cochain::from_coords(ctx, 1, x.to_vec())?;
                Ok(ctx.diff_d(&DiffCochain::algebra_part(ctx, f))?.coords())
            }
            _ => apply_differential(ctx, ComplexKind::Diff, n, x),
        },
    }
}

/// Matrix of the differential out of degree `n`.
pub fn differential_matrix(ctx: &Context, kind: ComplexKind, n: usize) -> Result<Matrix, Error> {
    ctx.check_budget(n)?;
    let cols = space_dim(ctx, kind, n);
    let rows = space_dim(ctx, kind, n + 1);
    let field = ctx.field();
    let columns = (0..cols)
        .map(|j| apply_differential(ctx, kind, n, &unit_vector(field, cols, j)))
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_columns(field, rows, &columns)
}

/// The differentials into and out of one degree.
#[derive(Clone, Debug)]
pub struct ComplexSlice {
    pub kind: ComplexKind,
    pub degree: usize,
    pub in_matrix: Matrix,
    pub out_matrix: Matrix,
}

fn incoming(ctx: &Context, kind: ComplexKind, n: usize) -> Result<Matrix, Error> {
    if n == 0 {
        Ok(Matrix::zeros(ctx.field(), space_dim(ctx, kind, 0), 0))
    } else {
        differential_matrix(ctx, kind, n - 1)
    }
}

fn check_composition(kind: ComplexKind, n: usize, out: &Matrix, inc: &Matrix) -> Result<(), Error> {
    if out.mul(inc)?.is_zero() {
        Ok(())
    } else {
        Err(Error::Internal(format!("differential of {} does not square to zero at degree {n}", kind.name())))
    }
}

/// Build and verify the slice at degree `n`.
pub fn assemble(ctx: &Context, kind: ComplexKind, n: usize) -> Result<ComplexSlice, Error> {
    let in_matrix = incoming(ctx, kind, n)?;
    let out_matrix = differential_matrix(ctx, kind, n)?;
    check_composition(kind, n, &out_matrix, &in_matrix)?;
    Ok(ComplexSlice { kind, degree: n, in_matrix, out_matrix })
}

/// One cohomology group with chosen representatives.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub kind: ComplexKind,
    pub degree: usize,
    /// Dimension of the cochain space.
    pub cochains: usize,
    /// Nullity of the outgoing differential.
    pub cocycles: usize,
    /// Rank of the incoming differential.
    pub boundaries: usize,
    /// Cocycles whose classes form a basis, in cochain coordinates.
    pub representatives: Vec<Vector>,
    // [representatives | incoming], for class coordinates
    spanning: Matrix,
    out_rank: usize,
}

impl Cohomology {
    fn from_slice(slice: &ComplexSlice) -> Result<Cohomology, Error> {
        let field = slice.out_matrix.field();
        let len = slice.out_matrix.cols();
        let mut span = EchelonBasis::new(field, len);
        for j in 0..slice.in_matrix.cols() {
            span.insert(&slice.in_matrix.column(j));
        }
        let boundaries = span.dim();
        let rref = linalg::rref(&slice.out_matrix);
        let kernel = rref.kernel_basis();
        let cocycles = kernel.len();
        let representatives: Vec<Vector> = kernel.into_iter().filter(|z| span.insert(z)).collect();
        let mut columns = representatives.clone();
        columns.extend((0..slice.in_matrix.cols()).map(|j| slice.in_matrix.column(j)));
        let spanning = Matrix::from_columns(field, len, &columns)?;
        Ok(Cohomology {
            kind: slice.kind,
            degree: slice.degree,
            cochains: len,
            cocycles,
            boundaries,
            representatives,
            spanning,
            out_rank: rref.rank(),
        })
    }

    pub fn compute(ctx: &Context, kind: ComplexKind, n: usize) -> Result<Cohomology, Error> {
        Cohomology::from_slice(&assemble(ctx, kind, n)?)
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Rank of the differential out of this degree.
    pub fn out_rank(&self) -> usize {
        self.out_rank
    }

    /// Coordinates of the classes of cocycles against the representatives.
    /// A vector that is not a cocycle is an error.
    pub fn class_coordinates(&self, cocycles: &[Vector]) -> Result<Vec<Vector>, Error> {
        let k = self.dim();
        linalg::solve_many(&self.spanning, cocycles)?
            .into_iter()
            .map(|x| {
                x.map(|mut v| {
                    v.truncate(k);
                    v
                })
                .ok_or_else(|| Error::Internal(format!("vector is not a cocycle of {} in degree {}", self.kind.name(), self.degree)))
            })
            .collect()
    }

    /// Whether a cocycle is a coboundary.
    pub fn is_coboundary(&self, cocycle: &[crate::Scalar]) -> Result<bool, Error> {
        let c = self.class_coordinates(&[cocycle.to_vec()])?;
        Ok(c[0].iter().all(crate::Scalar::is_zero))
    }
}

/// Groups `H⁰ … H^max` of one complex, sharing each differential matrix
/// between neighbouring degrees.
pub fn cohomology_range(ctx: &Context, kind: ComplexKind, max: usize) -> Result<Vec<Cohomology>, Error> {
    let mut inc = incoming(ctx, kind, 0)?;
    let mut out = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let next = differential_matrix(ctx, kind, n)?;
        check_composition(kind, n, &next, &inc)?;
        let slice = ComplexSlice { kind, degree: n, in_matrix: inc, out_matrix: next };
        out.push(Cohomology::from_slice(&slice)?);
        inc = slice.out_matrix;
    }
    Ok(out)
}

/// Dimensions and representatives for several complexes.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub max_degree: usize,
    pub groups: Vec<Cohomology>,
}

impl CohomologyReport {
    pub fn group(&self, kind: ComplexKind, n: usize) -> Option<&Cohomology> {
        self.groups.iter().find(|g| g.kind == kind && g.degree == n)
    }

    pub fn dim(&self, kind: ComplexKind, n: usize) -> Option<usize> {
        self.group(kind, n).map(Cohomology::dim)
    }
}

pub fn cohomology_dims(ctx: &Context, max_degree: usize, kinds: &[ComplexKind]) -> Result<CohomologyReport, Error> {
    let mut groups = Vec::new();
    for &kind in kinds {
        groups.extend(cohomology_range(ctx, kind, max_degree)?);
    }
    Ok(CohomologyReport { max_degree, groups })
}

/// A node of the long exact sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LesNode {
    Diff(usize),
    Alg(usize),
    Do(usize),
}

/// Exactness data at one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeVerdict {
    pub node: LesNode,
    pub dim: usize,
    pub incoming_rank: usize,
    /// `None` when the outgoing map leaves the window.
    pub outgoing_rank: Option<usize>,
    /// The composite through the node vanishes.
    pub composite_zero: bool,
    /// `None` when the node sits on the window edge.
    pub exact: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct LesReport {
    pub max_degree: usize,
    pub nodes: Vec<NodeVerdict>,
    /// `∂_Diff(f, 0) = (0, Δ f)` for every representative `f` of `HH^n`.
    pub connecting_consistent: bool,
}

impl LesReport {
    /// Every node checked inside the window is exact.
    pub fn exact(&self) -> bool {
        self.connecting_consistent && self.nodes.iter().all(|v| v.composite_zero && v.exact != Some(false))
    }
}

/// Matrix of the map induced on cohomology by a cochain-level map.
fn induced(
    source: &Cohomology,
    target: &Cohomology,
    map: impl Fn(&[crate::Scalar]) -> Result<Vector, Error>,
) -> Result<Matrix, Error> {
    let images = source.representatives.iter().map(|r| map(r)).collect::<Result<Vec<_>, _>>()?;
    let cols = target.class_coordinates(&images)?;
    Matrix::from_columns(target.spanning.field(), target.dim(), &cols)
}

fn connecting(ctx: &Context, n: usize, f: &[crate::Scalar]) -> Result<Vector, Error> {
    let d = ctx.delta(&Cochain::from_coords(ctx, n, f.to_vec())?)?;
    Ok(if n % 2 == 1 { d.neg() } else { d }.into_coords())
}

/// Verify exactness of the long exact sequence through degree `max_degree`.
///
/// Nodes `H^n_Diff` and `HH^n` are checked for `n ≤ max_degree`, and
/// `H^n_do` for `n < max_degree`; at `H^max_do` the outgoing map leaves the
/// window and only the incoming rank is reported.
pub fn les_check(ctx: &Context, max_degree: usize) -> Result<LesReport, Error> {
    let diff = cohomology_range(ctx, ComplexKind::Diff, max_degree)?;
    let alg = cohomology_range(ctx, ComplexKind::Alg, max_degree)?;
    let dop = cohomology_range(ctx, ComplexKind::Do, max_degree)?;
    let field = ctx.field();

    let mut pi = Vec::new();
    let mut delta = Vec::new();
    let mut iota = Vec::new();
    for n in 0..=max_degree {
        let split = ctx.cochain_len(n);
        pi.push(induced(&diff[n], &alg[n], |x| Ok(x[..split].to_vec()))?);
        delta.push(induced(&alg[n], &dop[n], |x| connecting(ctx, n, x))?);
        if n < max_degree {
            let pad = ctx.cochain_len(n + 1);
            iota.push(induced(&dop[n], &diff[n + 1], |x| {
                let mut v = zero_vector(field, pad);
                v.extend_from_slice(x);
                Ok(v)
            })?);
        }
    }

    let verdict = |node, dim, inc: &Matrix, out: Option<&Matrix>| -> Result<NodeVerdict, Error> {
        let incoming_rank = linalg::rank(inc);
        let (outgoing_rank, composite_zero) = match out {
            Some(o) => (Some(linalg::rank(o)), o.mul(inc)?.is_zero()),
            None => (None, true),
        };
        let exact = outgoing_rank.map(|r| composite_zero && r + incoming_rank == dim);
        Ok(NodeVerdict { node, dim, incoming_rank, outgoing_rank, composite_zero, exact })
    };

    let mut nodes = Vec::new();
    for n in 0..=max_degree {
        let into_diff = match n {
            0 => Matrix::zeros(field, diff[0].dim(), 0),
            _ => iota[n - 1].clone(),
        };
        nodes.push(verdict(LesNode::Diff(n), diff[n].dim(), &into_diff, Some(&pi[n]))?);
        nodes.push(verdict(LesNode::Alg(n), alg[n].dim(), &pi[n], Some(&delta[n]))?);
        nodes.push(verdict(LesNode::Do(n), dop[n].dim(), &delta[n], iota.get(n))?);
    }

    let mut connecting_consistent = true;
    for n in 0..=max_degree {
        for r in &alg[n].representatives {
            let f = Cochain::from_coords(ctx, n, r.clone())?;
            let lifted = ctx.diff_d(&DiffCochain::algebra_part(ctx, f))?;
            let expected = DiffCochain::operator_part(ctx, Cochain::from_coords(ctx, n, connecting(ctx, n, r)?)?);
            connecting_consistent &= lifted == expected;
        }
    }
    Ok(LesReport { max_degree, nodes, connecting_consistent })
}

/// Alternating sum `Σ (−1)ⁿ x_n` over a window, as a signed integer.
pub fn alternating_sum(values: impl IntoIterator<Item = usize>) -> i64 {
    values.into_iter().enumerate().map(|(n, v)| if n % 2 == 0 { v as i64 } else { -(v as i64) }).sum()
}
