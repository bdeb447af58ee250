//! Finite Weyl group and dominant weights, used by the character sums.

use std::collections::HashMap;

use num::rational::Rational64;
use num::{One, Zero};

use super::RootSystem;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Q};

/// A Weyl group element as an integer matrix acting on simple-root
/// coordinates (column vectors), with its sign `(-1)^length`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Vec<Vec<i64>>,
    pub sign: i64,
}

impl WeylElement {
    pub fn apply(&self, v: &[Rational64]) -> Vec<Rational64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).fold(Rational64::zero(), |acc, (&a, &b)| acc + b * a))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
}

impl WeylGroup {
    /// Enumerates `W` by breadth-first search over simple reflections; fails
    /// if the group has more than `limit` elements.
    pub fn generate(rs: &RootSystem, limit: usize) -> Result<Self> {
        let r = rs.rank();
        let gens: Vec<Vec<Vec<i64>>> = (0..r)
            .map(|j| {
                // s_j(α_k) = α_k - cartan[k][j] α_j
                let mut m = vec![vec![0i64; r]; r];
                for (k, row) in m.iter_mut().enumerate() {
                    row[k] = 1;
                }
                for k in 0..r {
                    m[j][k] -= rs.cartan()[k][j];
                }
                m
            })
            .collect();
        // 2ρ is regular, so w ↦ w(2ρ) is injective
        let two_rho: Vec<i64> = (0..r)
            .map(|i| rs.positive_roots().iter().map(|b| b[i]).sum())
            .collect();
        let ident: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut elements = vec![WeylElement { matrix: ident, sign: 1 }];
        seen.insert(two_rho.clone(), 0);
        let mut head = 0;
        while head < elements.len() {
            let cur = elements[head].clone();
            head += 1;
            for g in &gens {
                let m = mat_mul(g, &cur.matrix);
                let key = mat_vec(&m, &two_rho);
                if seen.contains_key(&key) {
                    continue;
                }
                if elements.len() >= limit {
                    return Err(Error::Unsupported(format!(
                        "Weyl group of {} exceeds {limit} elements",
                        rs.name()
                    )));
                }
                seen.insert(key, elements.len());
                elements.push(WeylElement { matrix: m, sign: -cur.sign });
            }
        }
        Ok(WeylGroup { elements })
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The same elements acting on fundamental-weight coordinates: a weight
    /// `Σ mᵢ ωᵢ` is sent to `Σ (Mm)ᵢ ωᵢ`. Pairs `(M, sign)` in the order of
    /// [`Self::elements`].
    pub fn weight_action(&self, rs: &RootSystem) -> Vec<(Vec<Vec<i64>>, i64)> {
        let r = rs.rank();
        // weight coordinates of a root-coordinate vector: m = Cᵀ c
        let ct = Mat::<Q>::from_fn(r, r, |i, j| Q::from_integer(rs.cartan()[j][i].into()));
        let ct_inv = ct.inverse(0.0).expect("Cartan matrix is invertible");
        self.elements
            .iter()
            .map(|w| {
                let m = Mat::<Q>::from_fn(r, r, |i, j| Q::from_integer(w.matrix[i][j].into()));
                let conj = ct.mul(&m).mul(&ct_inv);
                let ints = (0..r)
                    .map(|i| {
                        (0..r)
                            .map(|j| {
                                let v = &conj[(i, j)];
                                debug_assert!(v.is_integer());
                                i64::try_from(v.to_integer()).expect("small Weyl matrix entry")
                            })
                            .collect()
                    })
                    .collect();
                (ints, w.sign)
            })
            .collect()
    }
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

impl RootSystem {
    /// Fundamental weights in simple-root coordinates.
    pub fn fundamental_weights(&self) -> Vec<Vec<Rational64>> {
        let r = self.rank();
        let c = Mat::<Q>::from_fn(r, r, |i, j| Q::from_integer(self.cartan()[i][j].into()));
        let inv = c.inverse(0.0).expect("Cartan matrix is invertible");
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| {
                        let v = &inv[(i, k)];
                        Rational64::new(
                            i64::try_from(v.numer()).expect("small"),
                            i64::try_from(v.denom()).expect("small"),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    /// Coefficients of each positive coroot over the simple coroots.
    pub fn coroot_coefficients(&self) -> Vec<Vec<i64>> {
        self.positive_roots()
            .iter()
            .map(|b| {
                let len2 = self.root_length2(b);
                (0..self.rank())
                    .map(|i| {
                        let d = Rational64::from_integer(b[i]) * self.inner_product()[i][i] / len2;
                        debug_assert!(d.is_integer());
                        d.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    /// Weyl dimension formula for the highest weight `Σ nᵢ ωᵢ`.
    pub fn weyl_dimension(&self, n: &[u64]) -> f64 {
        weyl_dimension_with(&self.coroot_coefficients(), n)
    }
}

/// Weyl dimension formula with precomputed coroot coefficients. The product
/// is accumulated exactly and converted once at the end.
pub fn weyl_dimension_with(coroot_coefficients: &[Vec<i64>], n: &[u64]) -> f64 {
    let mut acc = Q::one();
    for d in coroot_coefficients {
        let num: i64 = d.iter().zip(n).map(|(&di, &ni)| di * (ni as i64 + 1)).sum();
        let den: i64 = d.iter().sum();
        acc *= Q::new(num.into(), den.into());
    }
    crate::linalg::ratio_to_f64(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_group_orders() {
        for (name, order) in [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("C3", 48), ("G2", 12), ("D4", 192), ("F4", 1152)] {
            let rs = RootSystem::parse(name).unwrap();
            let w = WeylGroup::generate(&rs, 10_000).unwrap();
            assert_eq!(w.order(), order, "{name}");
            assert_eq!(w.elements().iter().map(|e| e.sign).sum::<i64>(), 0);
        }
        let e8 = RootSystem::parse("E8").unwrap();
        assert!(WeylGroup::generate(&e8, 1000).is_err());
    }

    #[test]
    fn dimensions_of_small_representations() {
        let a2 = RootSystem::parse("A2").unwrap();
        assert_eq!(a2.weyl_dimension(&[1, 0]), 3.0);
        assert_eq!(a2.weyl_dimension(&[1, 1]), 8.0);
        assert_eq!(a2.weyl_dimension(&[2, 1]), 15.0);
        let g2 = RootSystem::parse("G2").unwrap();
        // short fundamental weight: 7, long: adjoint 14
        assert_eq!(g2.weyl_dimension(&[1, 0]), 7.0);
        assert_eq!(g2.weyl_dimension(&[0, 1]), 14.0);
        let e8 = RootSystem::parse("E8").unwrap();
        // adjoint representation of E8 is ω₈ in Bourbaki numbering
        assert_eq!(e8.weyl_dimension(&[0, 0, 0, 0, 0, 0, 0, 1]), 248.0);
        let c2 = RootSystem::parse("C2").unwrap();
        assert_eq!(c2.weyl_dimension(&[1, 0]), 4.0);
        assert_eq!(c2.weyl_dimension(&[0, 1]), 5.0);
    }

    #[test]
    fn fundamental_weights_are_dual_to_coroots() {
        let rs = RootSystem::parse("B3").unwrap();
        let w = rs.fundamental_weights();
        for (i, wi) in w.iter().enumerate() {
            for j in 0..3 {
                let pairing: Rational64 = (0..3).fold(Rational64::zero(), |acc, k| acc + wi[k] * rs.cartan()[k][j]);
                assert_eq!(pairing, Rational64::from_integer(i64::from(i == j)));
            }
        }
    }

    #[test]
    fn weight_action_permutes_roots() {
        for name in ["A2", "B2", "G2", "C3"] {
            let rs = RootSystem::parse(name).unwrap();
            let r = rs.rank();
            let to_weights = |c: &[i64]| -> Vec<i64> { (0..r).map(|k| (0..r).map(|j| c[j] * rs.cartan()[j][k]).sum()).collect() };
            let mut roots: Vec<Vec<i64>> = Vec::new();
            for b in rs.positive_roots() {
                let w = to_weights(b);
                roots.push(w.iter().map(|x| -x).collect());
                roots.push(w);
            }
            let group = WeylGroup::generate(&rs, 10_000).unwrap();
            for (m, _) in group.weight_action(&rs) {
                for root in &roots {
                    assert!(roots.contains(&mat_vec(&m, root)), "{name}");
                }
            }
        }
    }
}
