//! Algebraic model of a gluing: a based complex with a based subcomplex
//! spanned by leading basis vectors, and the quotient complex.

use super::{chain_torsion, BasedChainComplex, HomologyBasis};
use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};

/// `0 → C' → C → C'' → 0` where `C'_k` is spanned by the first
/// `sub_dims[k]` basis vectors of `C_k`, so every boundary is block upper
/// triangular.
#[derive(Debug, Clone)]
pub struct GluingModel<T> {
    whole: BasedChainComplex<T>,
    sub_dims: Vec<usize>,
}

impl<T: Field> GluingModel<T> {
    pub fn new(whole: BasedChainComplex<T>, sub_dims: Vec<usize>) -> Result<Self> {
        if sub_dims.len() != whole.dims().len() || sub_dims.iter().zip(whole.dims()).any(|(s, d)| s > d) {
            return Err(Error::Shape("subcomplex dimensions do not fit".into()));
        }
        for k in 1..=whole.top() {
            let d = whole.boundary(k);
            for r in sub_dims[k - 1]..d.rows() {
                for c in 0..sub_dims[k] {
                    if !d[(r, c)].is_negligible(whole.tolerance()) {
                        return Err(Error::Shape(format!("degree {k}: leading vectors do not span a subcomplex")));
                    }
                }
            }
        }
        Ok(GluingModel { whole, sub_dims })
    }

    pub fn whole(&self) -> &BasedChainComplex<T> {
        &self.whole
    }

    pub fn sub(&self) -> BasedChainComplex<T> {
        let s = &self.sub_dims;
        let b = (1..=self.whole.top())
            .map(|k| block(&self.whole.boundary(k), 0..s[k - 1], 0..s[k]))
            .collect();
        BasedChainComplex::new(s.clone(), b)
            .expect("diagonal block of a complex is a complex")
            .with_tolerance(self.whole.tolerance())
    }

    pub fn quotient(&self) -> BasedChainComplex<T> {
        let (s, d) = (&self.sub_dims, self.whole.dims());
        let dims: Vec<usize> = d.iter().zip(s).map(|(a, b)| a - b).collect();
        let b = (1..=self.whole.top())
            .map(|k| block(&self.whole.boundary(k), s[k - 1]..d[k - 1], s[k]..d[k]))
            .collect();
        BasedChainComplex::new(dims, b)
            .expect("diagonal block of a complex is a complex")
            .with_tolerance(self.whole.tolerance())
    }

    /// Scalar of the determinant-line isomorphism
    /// `det H(C) ⊗ det H(C') ≅ det H(C'')⊗…` induced by the homology
    /// sequence: the inverse of [`Self::homology_sequence_torsion`]. With it,
    /// `τ(C'') = τ(C) · mv / τ(C')`.
    pub fn mv_scalar(&self, h_sub: &HomologyBasis<T>, h_whole: &HomologyBasis<T>, h_quot: &HomologyBasis<T>) -> Result<T> {
        Ok(T::one() / self.homology_sequence_torsion(h_sub, h_whole, h_quot)?)
    }

    /// Torsion of the long exact homology sequence
    /// `… → H_k(C') → H_k(C) → H_k(C'') → H_{k−1}(C') → …`, as an acyclic
    /// complex based by the given homology bases. `H_k(C')` sits in degree
    /// `3k + 2`, `H_k(C)` in `3k + 1` and `H_k(C'')` in `3k`.
    pub fn homology_sequence_torsion(
        &self,
        h_sub: &HomologyBasis<T>,
        h_whole: &HomologyBasis<T>,
        h_quot: &HomologyBasis<T>,
    ) -> Result<T> {
        let tol = self.whole.tolerance();
        let (sub, quot) = (self.sub(), self.quotient());
        let top = self.whole.top();
        let basis = |h: &HomologyBasis<T>, k: usize| -> Result<Mat<T>> {
            h.degree(k).cloned().ok_or(Error::InvalidHomologyBasis { degree: k })
        };
        // coordinates of cycles in the homology basis, modulo boundaries
        let coords = |cx: &BasedChainComplex<T>, h: &Mat<T>, k: usize, cycles: &Mat<T>| -> Result<Mat<T>> {
            let sys = h.hcat(&cx.boundary(k + 1));
            let sol = sys
                .solve_mat(cycles, tol)
                .ok_or(Error::InvalidHomologyBasis { degree: k })?;
            Ok(Mat::from_fn(h.cols(), cycles.cols(), |r, c| sol[(r, c)].clone()))
        };
        let mut dims = Vec::with_capacity(3 * top + 3);
        let mut maps: Vec<Mat<T>> = Vec::new();
        for k in 0..=top {
            let (hs, hw, hq) = (basis(h_sub, k)?, basis(h_whole, k)?, basis(h_quot, k)?);
            let s = self.sub_dims[k];
            // degree 3k: H_k(C''), with δ into H_{k−1}(C')
            dims.push(hq.cols());
            if k > 0 {
                let lifted = Mat::zeros(s, hq.cols()).vcat(&hq);
                let image = self.whole.boundary(k).mul(&lifted);
                let top_part = block(&image, 0..self.sub_dims[k - 1], 0..hq.cols());
                let hs_prev = basis(h_sub, k - 1)?;
                maps.push(coords(&sub, &hs_prev, k - 1, &top_part)?);
            }
            // degree 3k + 1: H_k(C) -j→ H_k(C'')
            dims.push(hw.cols());
            let projected = block(&hw, s..self.whole.dim(k), 0..hw.cols());
            maps.push(coords(&quot, &hq, k, &projected)?);
            // degree 3k + 2: H_k(C') -i→ H_k(C)
            dims.push(hs.cols());
            let embedded = hs.vcat(&Mat::zeros(self.whole.dim(k) - s, hs.cols()));
            maps.push(coords(&self.whole, &hw, k, &embedded)?);
        }
        let les = BasedChainComplex::new(dims, maps)?.with_tolerance(tol);
        if !les.is_acyclic() {
            return Err(Error::NotExact("homology sequence is not exact".into()));
        }
        Ok(chain_torsion(&les, &HomologyBasis::empty(&les))?.magnitude)
    }
}

fn block<T: Field>(m: &Mat<T>, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat<T> {
    Mat::from_fn(rows.len(), cols.len(), |r, c| m[(rows.start + r, cols.start + c)].clone())
}
