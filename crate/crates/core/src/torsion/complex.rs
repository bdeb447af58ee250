//! Based chain complexes and Milnor torsion.

use crate::error::{Error, Result};
use crate::linalg::{Field, Mat, DEFAULT_FLOAT_TOL};

use super::TorsionValue;

/// `C_N → … → C_1 → C_0` with a preferred basis in every degree. Entries are
/// exact rationals or floats depending on `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasedChainComplex<T> {
    dims: Vec<usize>,
    /// `boundaries[k - 1]` is `∂_k : C_k → C_{k-1}`, a `dims[k-1] × dims[k]` matrix.
    boundaries: Vec<Mat<T>>,
    tol: f64,
}

impl<T: Field> BasedChainComplex<T> {
    /// Checks shapes and `∂∂ = 0` (exactly, or to `1e-12` relative in float mode).
    pub fn new(dims: Vec<usize>, boundaries: Vec<Mat<T>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("a complex needs at least one space".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::Shape(format!(
                "{} spaces need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (k, d) in boundaries.iter().enumerate() {
            if d.rows() != dims[k] || d.cols() != dims[k + 1] {
                return Err(Error::Shape(format!(
                    "boundary {} is {}x{}, expected {}x{}",
                    k + 1,
                    d.rows(),
                    d.cols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        for k in 1..boundaries.len() {
            let comp = boundaries[k - 1].mul(&boundaries[k]);
            let scale = max_abs(&boundaries[k - 1]) * max_abs(&boundaries[k]) * dims[k] as f64;
            if !comp.is_zero(1e-12 * scale.max(1.0)) {
                return Err(Error::NotAComplex { degree: k + 1 });
            }
        }
        Ok(BasedChainComplex {
            dims,
            boundaries,
            tol: DEFAULT_FLOAT_TOL,
        })
    }

    /// Rank tolerance used in float mode (ignored for exact scalars).
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn is_exact(&self) -> bool {
        T::EXACT
    }

    /// Top degree `N`.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `∂_k`, with zero maps outside `1..=N`.
    pub fn boundary(&self, k: usize) -> Mat<T> {
        if k >= 1 && k <= self.boundaries.len() {
            self.boundaries[k - 1].clone()
        } else {
            let rows = if k == 0 { 0 } else { self.dim(k - 1) };
            Mat::zeros(rows, self.dim(k))
        }
    }

    pub fn boundaries(&self) -> &[Mat<T>] {
        &self.boundaries
    }

    pub fn rank_boundary(&self, k: usize) -> usize {
        self.boundary(k).rank(self.tol)
    }

    pub fn betti(&self, k: usize) -> usize {
        self.dim(k) - self.rank_boundary(k) - self.rank_boundary(k + 1)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    pub fn is_acyclic(&self) -> bool {
        (0..=self.top()).all(|k| self.betti(k) == 0)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let top = self.top().max(other.top());
        let dims: Vec<usize> = (0..=top).map(|k| self.dim(k) + other.dim(k)).collect();
        let boundaries = (1..=top)
            .map(|k| self.padded_boundary(k).block_diag(&other.padded_boundary(k)))
            .collect();
        BasedChainComplex {
            dims,
            boundaries,
            tol: self.tol.max(other.tol),
        }
    }

    fn padded_boundary(&self, k: usize) -> Mat<T> {
        if k <= self.top() {
            self.boundary(k)
        } else {
            Mat::zeros(self.dim(k - 1), self.dim(k))
        }
    }

    /// Tensor product with `∂(x⊗y) = ∂x⊗y + (−1)^i x⊗∂y`. In each degree
    /// `n` the summands `C_i ⊗ D_{n−i}` are ordered by increasing `i`, and
    /// within a summand `x_a ⊗ y_b` has index `a·dim D_{n−i} + b`.
    pub fn tensor(&self, other: &Self) -> Self {
        let top = self.top() + other.top();
        let offsets = |n: usize| -> Vec<(usize, usize, usize)> {
            // (i, j, offset)
            let mut out = Vec::new();
            let mut off = 0;
            for i in 0..=self.top() {
                if n < i || n - i > other.top() {
                    continue;
                }
                let j = n - i;
                out.push((i, j, off));
                off += self.dim(i) * other.dim(j);
            }
            out
        };
        let dims: Vec<usize> = (0..=top)
            .map(|n| offsets(n).iter().map(|&(i, j, _)| self.dim(i) * other.dim(j)).sum())
            .collect();
        let boundaries = (1..=top)
            .map(|n| {
                let mut m = Mat::zeros(dims[n - 1], dims[n]);
                let below = offsets(n - 1);
                let find = |i: usize| below.iter().find(|t| t.0 == i).map(|t| t.2);
                for (i, j, off) in offsets(n) {
                    let dj = other.dim(j);
                    if i >= 1 {
                        if let Some(off2) = find(i - 1) {
                            let dc = self.boundary(i);
                            for a in 0..self.dim(i) {
                                for b in 0..dj {
                                    for a2 in 0..self.dim(i - 1) {
                                        m[(off2 + a2 * dj + b, off + a * dj + b)] = dc[(a2, a)].clone();
                                    }
                                }
                            }
                        }
                    }
                    if j >= 1 {
                        if let Some(off2) = find(i) {
                            let dd = other.boundary(j);
                            let dj2 = other.dim(j - 1);
                            let sign = if i % 2 == 0 { T::one() } else { -T::one() };
                            for a in 0..self.dim(i) {
                                for b in 0..dj {
                                    for b2 in 0..dj2 {
                                        m[(off2 + a * dj2 + b2, off + a * dj + b)] = sign.clone() * dd[(b2, b)].clone();
                                    }
                                }
                            }
                        }
                    }
                }
                m
            })
            .collect();
        BasedChainComplex {
            dims,
            boundaries,
            tol: self.tol.max(other.tol),
        }
    }

    /// The cellular complex of a circle with one vertex and one edge,
    /// twisted by the holonomy `φ`: `∂_1 = φ − id`.
    pub fn circle(phi: &Mat<T>) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::Shape("holonomy must be square".into()));
        }
        let d = phi.rows();
        Self::new(vec![d, d], vec![phi.sub(&Mat::identity(d))])
    }
}

fn max_abs<T: Field>(m: &Mat<T>) -> f64 {
    let mut best = 0.0f64;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            best = best.max(m[(r, c)].to_f64().abs());
        }
    }
    best
}

/// Cycle representatives of a basis of `H_k` for every degree, as the
/// columns of a `dim C_k × β_k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyBasis<T> {
    bases: Vec<Mat<T>>,
}

impl<T: Field> HomologyBasis<T> {
    pub fn new(bases: Vec<Mat<T>>) -> Self {
        HomologyBasis { bases }
    }

    /// Empty bases in every degree, for acyclic complexes.
    pub fn empty(cx: &BasedChainComplex<T>) -> Self {
        HomologyBasis {
            bases: cx.dims().iter().map(|&d| Mat::zeros(d, 0)).collect(),
        }
    }

    /// A basis of the cycles orthogonal to the boundaries (harmonic
    /// representatives). This is a non-canonical choice: torsion computed
    /// with it depends on it through the determinant line of homology.
    pub fn harmonic(cx: &BasedChainComplex<T>) -> Self {
        let bases = (0..=cx.top())
            .map(|k| {
                let stacked = cx.boundary(k).vcat(&cx.boundary(k + 1).transpose());
                let ns = stacked.nullspace(cx.tolerance());
                Mat::from_cols(cx.dim(k), &ns)
            })
            .collect();
        HomologyBasis { bases }
    }

    pub fn degree(&self, k: usize) -> Option<&Mat<T>> {
        self.bases.get(k)
    }

    pub fn bases(&self) -> &[Mat<T>] {
        &self.bases
    }

    /// Extends with empty bases up to the top degree of `cx`.
    pub fn padded(&self, cx: &BasedChainComplex<T>) -> Self {
        let mut bases = self.bases.clone();
        while bases.len() < cx.dims().len() {
            bases.push(Mat::zeros(cx.dim(bases.len()), 0));
        }
        HomologyBasis { bases }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.bases.len().max(other.bases.len());
        let get = |h: &Self, k: usize| h.bases.get(k).cloned().unwrap_or_else(|| Mat::zeros(0, 0));
        HomologyBasis {
            bases: (0..n).map(|k| get(self, k).block_diag(&get(other, k))).collect(),
        }
    }

    /// Products `h_a ⊗ h_b` arranged to match [`BasedChainComplex::tensor`].
    pub fn tensor(&self, cx: &BasedChainComplex<T>, other: &Self, dx: &BasedChainComplex<T>) -> Self {
        let top = cx.top() + dx.top();
        let bases = (0..=top)
            .map(|n| {
                let rows: usize = (0..=cx.top())
                    .filter(|&i| n >= i && n - i <= dx.top())
                    .map(|i| cx.dim(i) * dx.dim(n - i))
                    .sum();
                let mut cols: Vec<Vec<T>> = Vec::new();
                let mut off = 0;
                for i in 0..=cx.top() {
                    if n < i || n - i > dx.top() {
                        continue;
                    }
                    let j = n - i;
                    let (hc, hd) = (&self.bases[i], &other.bases[j]);
                    let dj = dx.dim(j);
                    for a in 0..hc.cols() {
                        for b in 0..hd.cols() {
                            let mut v = vec![T::zero(); rows];
                            for x in 0..cx.dim(i) {
                                for y in 0..dj {
                                    v[off + x * dj + y] = hc[(x, a)].clone() * hd[(y, b)].clone();
                                }
                            }
                            cols.push(v);
                        }
                    }
                    off += cx.dim(i) * dj;
                }
                Mat::from_cols(rows, &cols)
            })
            .collect();
        HomologyBasis { bases }
    }
}

/// Milnor torsion of a based complex relative to a homology basis.
///
/// In degree `k` let `b_k` be the standard basis vectors at the pivot columns
/// of `∂_k` and `D_k = det[∂_{k+1} b_{k+1} | h_k | b_k]`. The torsion is
/// `∏ |D_k|^{(−1)^{k+1}}`; with this orientation the twisted circle gives
/// `|det((φ − id)|_{H⊥})|⁻¹`.
pub fn chain_torsion<T: Field>(cx: &BasedChainComplex<T>, hb: &HomologyBasis<T>) -> Result<TorsionValue<T>> {
    let tol = cx.tolerance();
    let pivots: Vec<Vec<usize>> = (0..=cx.top() + 1).map(|k| cx.boundary(k).independent_cols(tol)).collect();
    let mut value = T::one();
    for k in 0..=cx.top() {
        let h = hb.degree(k).ok_or(Error::InvalidHomologyBasis { degree: k })?;
        if h.rows() != cx.dim(k) {
            return Err(Error::InvalidHomologyBasis { degree: k });
        }
        let d = cx.boundary(k);
        if h.cols() > 0 {
            let scale = max_abs(&d) * max_abs(h) * cx.dim(k) as f64;
            if !d.mul(h).is_zero(tol * scale.max(1.0)) {
                return Err(Error::InvalidHomologyBasis { degree: k });
            }
        }
        let up = cx.boundary(k + 1).select_cols(&pivots[k + 1]);
        let own = Mat::from_fn(cx.dim(k), pivots[k].len(), |r, c| {
            if pivots[k][c] == r {
                T::one()
            } else {
                T::zero()
            }
        });
        let m = up.hcat(h).hcat(&own);
        if m.cols() != cx.dim(k) {
            return Err(Error::InvalidHomologyBasis { degree: k });
        }
        let det = m.det(tol).abs_val();
        if det.is_negligible(if T::EXACT { 0.0 } else { tol * tol }) {
            return Err(Error::InvalidHomologyBasis { degree: k });
        }
        value = if k % 2 == 1 { value * det } else { value / det };
    }
    Ok(TorsionValue::new(value))
}
