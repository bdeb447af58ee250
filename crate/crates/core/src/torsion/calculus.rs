//! Closed forms and exact-sequence scalars.

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TorsionValue;
use crate::error::{Error, Result};
use crate::linalg::{Field, Mat, Q};
use crate::seifert::SeifertData;

/// Torsion of the twisted circle together with the fixed space `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleTorsion<T> {
    pub torsion: TorsionValue<T>,
    /// Basis of `H = ker(φ − id)`, one column per vector.
    pub fixed: Mat<T>,
}

/// `|det((φ − id)|_{H⊥})|⁻¹` for an orthogonal holonomy `φ`.
///
/// The restriction is computed as `det(BᵀMB)/det(BᵀB)` for a basis `B` of
/// `H⊥` and `M = φ − id`, which stays exact for rational `φ`.
pub fn circle_torsion<T: Field>(phi: &Mat<T>, tol: f64) -> Result<CircleTorsion<T>> {
    if !phi.is_square() {
        return Err(Error::Shape("holonomy must be square".into()));
    }
    let d = phi.rows();
    let m = phi.sub(&Mat::identity(d));
    let fixed = Mat::from_cols(d, &m.nullspace(tol));
    let perp = Mat::from_cols(d, &fixed.transpose().nullspace(tol));
    let bt = perp.transpose();
    let num = bt.mul(&perp).det(tol);
    let den = bt.mul(&m).mul(&perp).det(tol);
    if den.is_negligible(if T::EXACT { 0.0 } else { tol }) {
        return Err(Error::Shape("holonomy is not orthogonal: φ − id degenerates on H⊥".into()));
    }
    Ok(CircleTorsion {
        torsion: TorsionValue::new(num / den),
        fixed,
    })
}

/// `τ₁^{χ₂} · τ₂^{χ₁}`.
pub fn kunneth_torsion<T: Field>(t1: &TorsionValue<T>, chi1: i64, t2: &TorsionValue<T>, chi2: i64) -> TorsionValue<T> {
    TorsionValue::new(t1.pow(chi2).magnitude * t2.pow(chi1).magnitude)
}

/// Scalar of `0 → A -i→ B -j→ C → 0` relative to the chosen bases: the maps
/// are given in those bases, and the result is `|det[i | s]|` where the
/// columns of `s` are lifts of the basis of `C`. Any choice of lifts gives
/// the same value.
pub fn exact_sequence_det<T: Field>(i: &Mat<T>, j: &Mat<T>, tol: f64) -> Result<T> {
    let (b, a, c) = (i.rows(), i.cols(), j.rows());
    if j.cols() != b {
        return Err(Error::Shape(format!("i maps into dimension {b}, j starts from {}", j.cols())));
    }
    if a + c != b {
        return Err(Error::NotExact(format!("dimensions {a} + {c} != {b}")));
    }
    if i.rank(tol) != a {
        return Err(Error::NotExact("first map is not injective".into()));
    }
    if j.rank(tol) != c {
        return Err(Error::NotExact("last map is not surjective".into()));
    }
    if a > 0 && c > 0 && !j.mul(i).is_zero(tol) {
        return Err(Error::NotExact("composite is nonzero".into()));
    }
    let lifts = j
        .solve_mat(&Mat::identity(c), tol)
        .ok_or_else(|| Error::NotExact("last map is not surjective".into()))?;
    Ok(i.hcat(&lifts).det(tol).abs_val())
}

/// `τ_M = τ_{M₁} · τ_{M₂} · mv / τ_N`, where `mv` is the scalar of the
/// Mayer–Vietoris isomorphism of determinant lines in the chosen bases.
pub fn mv_torsion_compose<T: Field>(
    m1: &TorsionValue<T>,
    m2: &TorsionValue<T>,
    n: &TorsionValue<T>,
    mv_scalar: &T,
) -> TorsionValue<T> {
    TorsionValue::new(m1.magnitude.clone() * m2.magnitude.clone() * mv_scalar.clone() / n.magnitude.clone())
}

/// The Mayer–Vietoris scalar of a Seifert manifold split into `Σ × S¹` and
/// solid tori, in exact arithmetic.
///
/// `f : V → H₁(Σ)` is the boundary inclusion (injective, `V = ⊕ Vᵢ` with
/// `dims[i] = dim Vᵢ`) and `ψ : H₁(X) → H₂(X)` is invertible. The maps
/// `g : H₁(Σ) → H₁(X)` and `h = ψ g` are completed at random from `seed`
/// (any surjection with kernel `im f`); the result does not depend on it and
/// equals `∏ pᵢ^{dim Vᵢ} · |det ψ|`.
pub fn seifert_mv_scalar(s: &SeifertData, dims: &[usize], f: &Mat<Q>, psi: &Mat<Q>, seed: u64) -> Result<Q> {
    if dims.len() != s.n() {
        return Err(Error::Shape(format!("{} fibres but {} centralizer dimensions", s.n(), dims.len())));
    }
    let v: usize = dims.iter().sum();
    if f.cols() != v {
        return Err(Error::Shape(format!("f has {} columns, dim V = {v}", f.cols())));
    }
    let m = f.rows();
    if f.rank(0.0) != v {
        return Err(Error::Shape("f is not injective".into()));
    }
    let c = m - v;
    if !psi.is_square() || psi.rows() != c {
        return Err(Error::Shape(format!("psi must be {c}x{c}")));
    }
    if psi.det(0.0).is_zero() {
        return Err(Error::Shape("psi is not invertible".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // rows annihilating im f, mixed by a random invertible matrix
    let left_null = Mat::from_rows(f.transpose().nullspace(0.0));
    let mix = loop {
        let r = Mat::from_fn(c, c, |_, _| Q::from_integer(rng.gen_range(-5i64..=5).into()));
        if !r.det(0.0).is_zero() {
            break r;
        }
    };
    let g = if c == 0 { Mat::zeros(0, m) } else { mix.mul(&left_null) };
    let h = psi.mul(&g);

    let (pdiag, qdiag): (Vec<i64>, Vec<i64>) = s
        .pairs()
        .iter()
        .zip(dims)
        .flat_map(|(&(p, q), &d)| std::iter::repeat_n((p, q), d))
        .unzip();
    let pm = Mat::from_fn(v, v, |r, k| if r == k { Q::from_integer(pdiag[r].into()) } else { Q::zero() });
    let qm = Mat::from_fn(v, v, |r, k| if r == k { Q::from_integer(qdiag[r].into()) } else { Q::zero() });

    // 0 → V -f→ H₁(Σ) -h→ H₂(X) → 0
    let s2 = exact_sequence_det(f, &h, 0.0)?;
    // 0 → V ⊕ V -[[f, 0], [q, p]]→ H₁(Σ) ⊕ V -[g, 0]→ H₁(X) → 0
    let f_tilde = f.hcat(&Mat::zeros(m, v)).vcat(&qm.hcat(&pm));
    let g_tilde = g.hcat(&Mat::zeros(c, v));
    let s3 = exact_sequence_det(&f_tilde, &g_tilde, 0.0)?;
    // 0 → V -id→ V → 0
    let s7 = exact_sequence_det(&Mat::<Q>::identity(v), &Mat::zeros(0, v), 0.0)?;
    Ok(s3 / (s2 * s7))
}
