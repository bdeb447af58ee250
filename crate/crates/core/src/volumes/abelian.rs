//! The abelian case `G = U(1)`, in exact arithmetic.
//!
//! Representations of a Seifert group into `U(1)` are labelled by angles
//! `uᵢ = e^{2πi aᵢ}`, `v = e^{2πi b}` with `Σ aᵢ ≡ 0` and `pᵢ aᵢ ≡ qᵢ b`
//! modulo 1. When `χ ≠ 0` this set is finite and the torsion of every
//! component is `χ ∏ pᵢ` in the natural integral bases.

use std::collections::BTreeSet;

use num::rational::Rational64;
use num::{BigInt, Integer, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{ratio_to_f64, Mat, Q};
use crate::seifert::SeifertData;
use crate::torsion::{chain_torsion, exact_sequence_det, BasedChainComplex, HomologyBasis};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianLabel {
    /// Angle of `v` in `[0, 1)`.
    pub v: Rational64,
    /// Angles of the `uᵢ` in `[0, 1)`.
    pub u: Vec<Rational64>,
}

impl AbelianLabel {
    pub fn satisfies(&self, s: &SeifertData) -> bool {
        let total: Rational64 = self.u.iter().copied().sum();
        total.is_integer()
            && s.pairs()
                .iter()
                .zip(&self.u)
                .all(|(&(p, q), &a)| (a * p - self.v * q).is_integer())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbelianComponentSet {
    /// Sorted by `(v, u)`.
    pub labels: Vec<AbelianLabel>,
    pub euler: Q,
}

fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

fn to_small(x: &Q) -> Result<Rational64> {
    match (x.numer().to_i64(), x.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(Error::Unsupported(format!("Euler number {x} exceeds 64-bit arithmetic"))),
    }
}

fn nonzero_euler(s: &SeifertData) -> Result<Q> {
    let chi = s.euler_number();
    if chi.is_zero() {
        return Err(Error::VanishingEuler);
    }
    Ok(chi)
}

/// From `uᵢ^L = v^{qᵢL/pᵢ}` with `L = lcm pᵢ` and `∏ uᵢ = 1` one gets
/// `v^{χL} = 1`, so `v` runs over `|χL|`-th roots of unity. For each, the
/// first `n − 1` angles run over the `pᵢ` roots of `uᵢ^{pᵢ} = v^{qᵢ}` and the
/// last is forced by the product condition.
pub fn abelian_components(s: &SeifertData) -> Result<AbelianComponentSet> {
    let euler = nonzero_euler(s)?;
    let chi = to_small(&euler)?;
    let lcm = s.pairs().iter().fold(1i64, |acc, &(p, _)| acc.lcm(&p));
    let order = (chi * lcm).to_integer().abs();
    let n = s.n();
    let (p_last, q_last) = s.pairs()[n - 1];
    let mut labels = BTreeSet::new();
    for j in 0..order {
        let b = Rational64::new(j, order);
        let mut k = vec![0i64; n - 1];
        loop {
            let mut u: Vec<Rational64> = s.pairs()[..n - 1]
                .iter()
                .zip(&k)
                .map(|(&(p, q), &ki)| frac((b * q + ki) / p))
                .collect();
            let last = frac(-u.iter().copied().sum::<Rational64>());
            if (last * p_last - b * q_last).is_integer() {
                u.push(last);
                labels.insert(AbelianLabel { v: b, u });
            }
            // odometer over kᵢ ∈ 0..pᵢ
            let mut i = 0;
            while i < k.len() {
                k[i] += 1;
                if k[i] < s.pairs()[i].0 {
                    break;
                }
                k[i] = 0;
                i += 1;
            }
            if i == k.len() {
                break;
            }
        }
    }
    Ok(AbelianComponentSet {
        labels: labels.into_iter().collect(),
        euler,
    })
}

/// `χ ∏ pᵢ`.
pub fn abelian_torsion_scalar(s: &SeifertData) -> Result<Q> {
    let chi = nonzero_euler(s)?;
    let prod: BigInt = s.pairs().iter().map(|&(p, _)| BigInt::from(p)).product();
    Ok(chi * Q::from_integer(prod))
}

/// `|χ ∏ pᵢ|^{−1/2}`, the Liouville density of `H¹` relative to the torsion.
pub fn density_factor(s: &SeifertData) -> Result<f64> {
    Ok(ratio_to_f64(&abelian_torsion_scalar(s)?.abs()).powf(-0.5))
}

/// The integral matrices of the abelian Mayer–Vietoris computation.
///
/// `H₁(Σ)` has basis `a₁, b₁, …, a_g, b_g, c₁, …, c_{n−1}` and the boundary
/// map `f : ℝⁿ → H₁(Σ)` sends `eᵢ` to `cᵢ` for `i < n` and `eₙ` to
/// `−(c₁ + … + c_{n−1})`.
#[derive(Debug, Clone)]
pub struct AbelianSequences {
    /// `f`, of size `(2g+n−1) × n`.
    pub f: Mat<Q>,
    /// `B(x, y) = (z, f(x), −Σ yᵢ)` with `zᵢ = qᵢxᵢ + pᵢyᵢ`; the sign on the
    /// last component is the usual Mayer–Vietoris sign.
    pub b: Mat<Q>,
    /// `C(x) = (x, Σ xᵢ)`.
    pub c: Mat<Q>,
    genus: usize,
    n: usize,
}

impl AbelianSequences {
    pub fn new(s: &SeifertData) -> Self {
        let (g, n) = (s.genus() as usize, s.n());
        let h = 2 * g + n - 1;
        let one = Q::from_integer(1.into());
        let f = Mat::from_fn(h, n, |r, c| {
            if r < 2 * g {
                Q::zero()
            } else if c + 1 < n {
                if r - 2 * g == c {
                    one.clone()
                } else {
                    Q::zero()
                }
            } else {
                -one.clone()
            }
        });
        let rows = n + h + 1;
        let mut b = Mat::zeros(rows, 2 * n);
        for (i, &(p, q)) in s.pairs().iter().enumerate() {
            b[(i, i)] = Q::from_integer(q.into());
            b[(i, n + i)] = Q::from_integer(p.into());
            for r in 0..h {
                b[(n + r, i)] = f[(r, i)].clone();
            }
            b[(rows - 1, n + i)] = -one.clone();
        }
        let c = Mat::from_fn(n + 1, n, |r, col| if r == n || r == col { one.clone() } else { Q::zero() });
        AbelianSequences { f, b, c, genus: g, n }
    }

    fn h1_rank(&self) -> usize {
        2 * self.genus + self.n - 1
    }

    /// Middle space of the second sequence: `ℝⁿ ⊕ H₁(Σ) ⊕ ℝ`.
    fn middle(&self) -> usize {
        self.n + self.h1_rank() + 1
    }

    /// Columns `(0, aⱼ or bⱼ, 0)`, whose images span `H₁(X)`.
    fn surface_lifts(&self) -> Mat<Q> {
        let one = Q::from_integer(1.into());
        Mat::from_fn(self.middle(), 2 * self.genus, |r, c| if r == self.n + c { one.clone() } else { Q::zero() })
    }

    /// Signed coefficient of `B(e_x ∧ e_y)` against `δ ∧ e ∧ ρ` modulo the
    /// surface classes, where `δ` is the standard volume of the `z` block,
    /// `e` the last coordinate and `ρ = f(e₁) ∧ … ∧ f(e_{n−1})`.
    pub fn b_coefficient(&self) -> Q {
        let m = self.middle();
        let one = Q::from_integer(1.into());
        let lifts = self.surface_lifts();
        let numerator = self.b.hcat(&lifts).det(0.0);
        let mut reference = Mat::zeros(m, m);
        for i in 0..self.n {
            reference[(i, i)] = one.clone();
        }
        reference[(m - 1, self.n)] = one.clone();
        for j in 0..self.n - 1 {
            for r in 0..self.h1_rank() {
                reference[(self.n + r, self.n + 1 + j)] = self.f[(r, j)].clone();
            }
        }
        let reference = reference.select_cols(&(0..2 * self.n).collect::<Vec<_>>()).hcat(&lifts);
        numerator / reference.det(0.0)
    }

    /// Torsion of `0 → ℝ → ℝⁿ -f→ H₁(Σ) → H₂(X) → 0` in the standard bases,
    /// with `ℝ` mapping to the diagonal and `H₂(X)` spanned by the surface
    /// classes.
    pub fn first_sequence(&self) -> Result<Q> {
        let (n, h, g2) = (self.n, self.h1_rank(), 2 * self.genus);
        let one = Q::from_integer(1.into());
        let diag = Mat::from_fn(n, 1, |_, _| one.clone());
        let proj = Mat::from_fn(g2, h, |r, c| if r == c { one.clone() } else { Q::zero() });
        let cx = BasedChainComplex::new(vec![g2, h, n, 1], vec![proj, self.f.clone(), diag])?;
        if !cx.is_acyclic() {
            return Err(Error::NotExact("first abelian sequence".into()));
        }
        Ok(chain_torsion(&cx, &HomologyBasis::empty(&cx))?.magnitude)
    }

    /// `0 → ℝⁿ -C→ ℝⁿ ⊕ ℝ → ℝ → 0`, the quotient being `(x, w) ↦ w − Σ xᵢ`.
    pub fn third_sequence(&self) -> Result<Q> {
        let n = self.n;
        let one = Q::from_integer(1.into());
        let quotient = Mat::from_fn(1, n + 1, |_, c| if c == n { one.clone() } else { -one.clone() });
        exact_sequence_det(&self.c, &quotient, 0.0)
    }

    /// `0 → ℝ²ⁿ -B→ ℝⁿ ⊕ H₁(Σ) ⊕ ℝ → H₁(X) → 0` is exact exactly when
    /// `χ ≠ 0`; its magnitude is `|b_coefficient|`.
    pub fn second_sequence(&self) -> Result<Q> {
        // H₁(X) as the cokernel of B, in coordinates dual to the lifts
        let m = self.middle();
        let basis = self.b.hcat(&self.surface_lifts());
        let inv = basis.inverse(0.0).ok_or_else(|| Error::NotExact("B is not injective".into()))?;
        let rows: Vec<usize> = (2 * self.n..m).collect();
        let quotient = Mat::from_fn(rows.len(), m, |r, c| inv[(rows[r], c)].clone());
        exact_sequence_det(&self.b, &quotient, 0.0)
    }
}

/// Runs the abelian Mayer–Vietoris computation from integer matrices and
/// returns the torsion scalar. It agrees with `χ ∏ pᵢ` including sign.
pub fn abelian_mv_verify(s: &SeifertData) -> Result<Q> {
    nonzero_euler(s)?;
    let seq = AbelianSequences::new(s);
    let s1 = seq.first_sequence()?;
    let s2 = seq.second_sequence()?;
    let s3 = seq.third_sequence()?;
    let coefficient = seq.b_coefficient();
    if coefficient.abs() != s2 {
        return Err(Error::NotExact("second sequence scalar disagrees with its coefficient".into()));
    }
    Ok(coefficient / (s1 * s3))
}
