//! Built-in instances spanning weights 0, 1 and -2/3.
//!
//! The same instances ship as problem files with the command-line crate.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{regular_bimodule, DiffAlgebra, DiffBimodule};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

const Q: Field = Field::Rational;

fn q(x: i64) -> Scalar {
    Q.from_i64(x)
}

fn ratio(n: i64, d: i64) -> Scalar {
    &q(n) * &q(d).inverse().expect("nonzero denominator")
}

/// A named algebra together with a bimodule over it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: &'static str,
    pub algebra: DiffAlgebra,
    pub module: DiffBimodule,
}

/// The ground field, `d = 0`.
pub fn ground_field(weight: Scalar) -> DiffAlgebra {
    DiffAlgebra::new(Q, 1, vec![q(1)], Some(vec![q(1)]), weight, Matrix::zeros(Q, 1, 1)).expect("valid shapes")
}

/// `k[x]/(x²)` on the basis `{1, x}` with `d(x) = a x`. Valid for every weight.
pub fn dual_numbers(a: Scalar, weight: Scalar) -> DiffAlgebra {
    let mut mult = vec![q(0); 8];
    // 1·1 = 1, 1·x = x, x·1 = x, x·x = 0
    mult[0] = q(1);
    mult[2 + 1] = q(1);
    mult[4 + 1] = q(1);
    let mut d = Matrix::zeros(Q, 2, 2);
    d.set(1, 1, a);
    DiffAlgebra::new(Q, 2, mult, Some(vec![q(1), q(0)]), weight, d).expect("valid shapes")
}

/// `k^n` with componentwise product and `d = (σ - id)/λ`, where `σ` is the
/// cyclic shift `(σf)_i = f_{i+1}`. At `n = 2`, `λ = 1` this is the swap
/// difference operator. Panics at weight zero.
pub fn cyclic_difference(n: usize, weight: Scalar) -> DiffAlgebra {
    let inv = weight.inverse().expect("difference operators need a nonzero weight");
    let mut mult = vec![q(0); n * n * n];
    for i in 0..n {
        mult[(i * n + i) * n + i] = q(1);
    }
    let mut d = Matrix::zeros(Q, n, n);
    for j in 0..n {
        let shifted = (j + n - 1) % n;
        d.set(shifted, j, &d.get(shifted, j).clone() + &inv);
        d.set(j, j, &d.get(j, j).clone() - &inv);
    }
    DiffAlgebra::new(Q, n, mult, Some(vec![q(1); n]), weight, d).expect("valid shapes")
}

/// 2×2 matrices on the basis `E11, E12, E21, E22`, with an inner operator:
/// `d(x) = (u x u⁻¹ - x)/λ` for `u = [[1,1],[0,1]]` when `λ ≠ 0`, and
/// `d(x) = a x - x a` for `a = [[1,1],[0,0]]` when `λ = 0`.
pub fn matrix_inner(weight: Scalar) -> DiffAlgebra {
    let idx = |r: usize, c: usize| 2 * r + c;
    let mut mult = vec![q(0); 64];
    for (r1, c1, r2, c2) in (0..16).map(|t| (t >> 3 & 1, t >> 2 & 1, t >> 1 & 1, t & 1)) {
        if c1 == r2 {
            mult[(idx(r1, c1) * 4 + idx(r2, c2)) * 4 + idx(r1, c2)] = q(1);
        }
    }
    let as_mat = |m: [[i64; 2]; 2]| -> Vec<Scalar> { vec![q(m[0][0]), q(m[0][1]), q(m[1][0]), q(m[1][1])] };
    let mul2 = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        (0..4)
            .map(|t| {
                let (r, c) = (t / 2, t % 2);
                &(&x[idx(r, 0)] * &y[idx(0, c)]) + &(&x[idx(r, 1)] * &y[idx(1, c)])
            })
            .collect()
    };
    let mut d = Matrix::zeros(Q, 4, 4);
    for j in 0..4 {
        let mut e = vec![q(0); 4];
        e[j] = q(1);
        let image: Vec<Scalar> = match weight.inverse() {
            Some(inv) => {
                let conj = mul2(&mul2(&as_mat([[1, 1], [0, 1]]), &e), &as_mat([[1, -1], [0, 1]]));
                conj.iter().zip(&e).map(|(a, b)| &(a - b) * &inv).collect()
            }
            None => {
                let a = as_mat([[1, 1], [0, 0]]);
                mul2(&a, &e).iter().zip(mul2(&e, &a)).map(|(x, y)| x - &y).collect()
            }
        };
        for (k, v) in image.into_iter().enumerate() {
            d.set(k, j, v);
        }
    }
    DiffAlgebra::new(Q, 4, mult, Some(as_mat([[1, 0], [0, 1]])), weight, d).expect("valid shapes")
}

/// Non-unital `x k[x]/(x³)` on the basis `{a, b}` with `a·a = b`. The
/// operator is `(φ - id)/λ` for the automorphism `a ↦ 2a`, `b ↦ 4b`, or the
/// grading derivation `d(a) = a`, `d(b) = 2b` at weight zero.
pub fn truncated_nonunital(weight: Scalar) -> DiffAlgebra {
    let mut mult = vec![q(0); 8];
    mult[1] = q(1);
    let mut d = Matrix::zeros(Q, 2, 2);
    match weight.inverse() {
        Some(inv) => {
            d.set(0, 0, inv.clone());
            d.set(1, 1, &q(3) * &inv);
        }
        None => {
            d.set(0, 0, q(1));
            d.set(1, 1, q(2));
        }
    }
    DiffAlgebra::new(Q, 2, mult, None, weight, d).expect("valid shapes")
}

/// The standard corpus: every instance with its regular bimodule, plus one
/// trivial (zero-action) module.
pub fn standard() -> Vec<Instance> {
    let regular = |name, algebra: DiffAlgebra| Instance { name, module: regular_bimodule(&algebra), algebra };
    let dual0 = dual_numbers(q(1), q(0));
    let trivial = DiffBimodule::trivial(&dual0, Matrix::from_entries(Q, 1, 1, vec![q(2)]).expect("1x1"))
        .expect("valid shapes");
    vec![
        regular("ground_field", ground_field(q(1))),
        regular("dual_numbers", dual0.clone()),
        regular("dual_numbers_weighted", dual_numbers(q(3), ratio(-2, 3))),
        regular("swap_difference", cyclic_difference(2, q(1))),
        regular("cyclic_difference_3", cyclic_difference(3, ratio(-2, 3))),
        regular("matrix_inner", matrix_inner(q(1))),
        regular("matrix_inner_weight_zero", matrix_inner(q(0))),
        regular("nonunital_truncated", truncated_nonunital(q(1))),
        Instance { name: "dual_numbers_trivial_module", algebra: dual0, module: trivial },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{validate_diff_algebra, validate_diff_bimodule};

    #[test]
    fn every_instance_is_valid() {
        for inst in standard() {
            assert!(validate_diff_algebra(&inst.algebra).passed(), "{}", inst.name);
            assert!(validate_diff_bimodule(&inst.algebra, &inst.module).unwrap().passed(), "{}", inst.name);
        }
    }

    #[test]
    fn weight_variants_are_valid() {
        for w in [q(1), q(0), ratio(-2, 3), q(5)] {
            assert!(validate_diff_algebra(&matrix_inner(w.clone())).passed());
            assert!(validate_diff_algebra(&truncated_nonunital(w.clone())).passed());
            assert!(validate_diff_algebra(&dual_numbers(q(2), w.clone())).passed());
            if !w.is_zero() {
                assert!(validate_diff_algebra(&cyclic_difference(3, w.clone())).passed());
                assert!(validate_diff_algebra(&cyclic_difference(4, w)).passed());
            }
        }
    }
}
