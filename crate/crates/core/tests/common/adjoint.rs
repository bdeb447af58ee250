//! The adjoint action of a maximal-torus element, built from explicit
//! matrix groups: SU(n) for type A and Sp(2) ⊂ U(4) for C2.

use nalgebra::{Complex, DMatrix};
use num::ToPrimitive;
use seifert_volumes::lie::{AlcoveClass, LieType, RootSystem};
use std::f64::consts::PI;

type C = Complex<f64>;

fn unit(n: usize, r: usize, c: usize, v: C) -> DMatrix<C> {
    let mut m = DMatrix::zeros(n, n);
    m[(r, c)] = v;
    m
}

/// Real basis of `u(n)`.
fn u_basis(n: usize) -> Vec<DMatrix<C>> {
    let (one, i) = (C::new(1.0, 0.0), C::new(0.0, 1.0));
    let mut out = Vec::new();
    for r in 0..n {
        out.push(unit(n, r, r, i));
        for c in r + 1..n {
            out.push(unit(n, r, c, one) - unit(n, c, r, one));
            out.push(unit(n, r, c, i) + unit(n, c, r, i));
        }
    }
    out
}

fn inner(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a.adjoint() * b).trace().re
}

fn gram_schmidt(vs: Vec<DMatrix<C>>) -> Vec<DMatrix<C>> {
    let mut out: Vec<DMatrix<C>> = Vec::new();
    for mut v in vs {
        for e in &out {
            let c = inner(e, &v);
            v -= e * C::new(c, 0.0);
        }
        let norm = inner(&v, &v).sqrt();
        if norm > 1e-9 {
            out.push(v / C::new(norm, 0.0));
        }
    }
    out
}

/// Orthonormal real basis of the subspace of `u(n)` cut out by the real
/// linear condition `constraint(X) = 0`.
fn subalgebra(n: usize, constraint: impl Fn(&DMatrix<C>) -> DMatrix<C>) -> Vec<DMatrix<C>> {
    let basis = u_basis(n);
    let rows = 2 * n * n;
    let m = DMatrix::<f64>::from_fn(rows, basis.len(), |r, c| {
        let v = constraint(&basis[c]);
        let z = v[(r / 2 % n, r / 2 / n)];
        if r % 2 == 0 {
            z.re
        } else {
            z.im
        }
    });
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.unwrap();
    let sv = svd.singular_values;
    let mut kernel = Vec::new();
    for k in 0..vt.nrows() {
        let s = if k < sv.len() { sv[k] } else { 0.0 };
        if s < 1e-9 {
            let mut x = DMatrix::zeros(n, n);
            for (j, b) in basis.iter().enumerate() {
                x += b * C::new(vt[(k, j)], 0.0);
            }
            kernel.push(x);
        }
    }
    // full SVD of a wide matrix only returns min(rows, cols) right vectors
    let extra = basis.len().saturating_sub(vt.nrows());
    assert_eq!(extra, 0, "constraint matrix must be tall");
    gram_schmidt(kernel)
}

/// Lie algebra basis and torus element `exp(2πi X)` for the alcove point `u`.
fn group_data(rs: &RootSystem, u: &AlcoveClass) -> (Vec<DMatrix<C>>, DMatrix<C>) {
    let x: Vec<f64> = u.coords().iter().map(|c| c.to_f64().unwrap()).collect();
    match (rs.lie_type(), rs.rank()) {
        (LieType::A, r) => {
            let n = r + 1;
            // θ_k − θ_{k+1} = x_k with Σθ = 0
            let mut theta = vec![0.0; n];
            for k in 1..n {
                theta[k] = theta[k - 1] - x[k - 1];
            }
            let mean = theta.iter().sum::<f64>() / n as f64;
            let g = DMatrix::from_fn(n, n, |a, b| if a == b { C::from_polar(1.0, 2.0 * PI * (theta[a] - mean)) } else { C::new(0.0, 0.0) });
            let basis = subalgebra(n, |m| DMatrix::from_element(1, 1, m.trace()).resize(n, n, C::new(0.0, 0.0)));
            (basis, g)
        }
        (LieType::C, 2) => {
            let (t2, t1) = (x[1] / 2.0, x[0] + x[1] / 2.0);
            let angles = [t1, t2, -t1, -t2];
            let g = DMatrix::from_fn(4, 4, |a, b| if a == b { C::from_polar(1.0, 2.0 * PI * angles[a]) } else { C::new(0.0, 0.0) });
            let mut j = DMatrix::<C>::zeros(4, 4);
            for k in 0..2 {
                j[(k, k + 2)] = C::new(1.0, 0.0);
                j[(k + 2, k)] = C::new(-1.0, 0.0);
            }
            let basis = subalgebra(4, |m| m.transpose() * &j + &j * m);
            (basis, g)
        }
        other => panic!("no matrix model for {other:?}"),
    }
}

/// `Ad_g` in an orthonormal basis of the Lie algebra.
pub fn adjoint_matrix(rs: &RootSystem, u: &AlcoveClass) -> DMatrix<f64> {
    let (basis, g) = group_data(rs, u);
    assert_eq!(basis.len(), rs.dim_g());
    let ginv = g.adjoint();
    let conj: Vec<DMatrix<C>> = basis.iter().map(|b| &g * b * &ginv).collect();
    DMatrix::from_fn(basis.len(), basis.len(), |r, c| inner(&basis[r], &conj[c]))
}

/// `|det((Ad_g − id)|_{H⊥})|`: the product of the nonzero singular values of
/// `Ad_g − id`, which is normal.
pub fn adjoint_det(rs: &RootSystem, u: &AlcoveClass) -> f64 {
    let ad = adjoint_matrix(rs, u);
    let n = ad.nrows();
    let m = ad - DMatrix::<f64>::identity(n, n);
    m.singular_values().iter().filter(|&&s| s > 1e-7).product()
}
