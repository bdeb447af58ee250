//! Conjugacy classes as points of the fundamental alcove.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num::rational::Rational64;
use num::{Integer, Zero};

use super::RootSystem;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Q};

/// Order in which violated walls are reflected during alcove reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReductionOrder {
    /// Lowest simple wall first, affine wall last.
    #[default]
    FirstWall,
    /// Affine wall first, then the highest-index simple wall.
    LastWall,
}

/// A conjugacy class `[e^X]`, stored as the alcove point `X` in coweight
/// coordinates `xᵢ = αᵢ(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlcoveClass {
    coords: Vec<Rational64>,
}

impl PartialOrd for AlcoveClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlcoveClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Display for AlcoveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl AlcoveClass {
    /// Validates alcove membership.
    pub fn new(rs: &RootSystem, coords: Vec<Rational64>) -> Result<Self> {
        if coords.len() != rs.rank() {
            return Err(Error::Shape(format!(
                "alcove point has {} coordinates, rank is {}",
                coords.len(),
                rs.rank()
            )));
        }
        let class = AlcoveClass { coords };
        if !class.in_alcove(rs) {
            return Err(Error::NotInAlcove(class.to_string()));
        }
        Ok(class)
    }

    /// Any point of the torus, reduced into the alcove.
    pub fn from_torus_point(rs: &RootSystem, coords: Vec<Rational64>) -> Self {
        reduce(rs, coords, ReductionOrder::FirstWall)
    }

    pub fn identity(rs: &RootSystem) -> Self {
        AlcoveClass {
            coords: vec![Rational64::zero(); rs.rank()],
        }
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.coords
    }

    pub fn in_alcove(&self, rs: &RootSystem) -> bool {
        self.coords.iter().all(|x| *x >= Rational64::zero()) && theta(rs, &self.coords) <= Rational64::from_integer(1)
    }

    /// `β(X)` for a root given in simple-root coordinates.
    pub fn root_value(&self, beta: &[i64]) -> Rational64 {
        root_value(beta, &self.coords)
    }

    /// `Δ(u) = ∏ 2|sin(π β(X))|` over positive roots with `β(X) ∉ ℤ`.
    pub fn delta(&self, rs: &RootSystem) -> f64 {
        rs.positive_roots()
            .iter()
            .filter_map(|b| {
                let v = self.root_value(b);
                (!v.is_integer()).then(|| 2.0 * sin_pi_frac(v).abs())
            })
            .product()
    }

    /// Number of roots (positive and negative) taking integral values at `X`.
    pub fn integral_roots(&self, rs: &RootSystem) -> usize {
        2 * rs
            .positive_roots()
            .iter()
            .filter(|b| self.root_value(b).is_integer())
            .count()
    }

    /// Dimension of the centralizer, `rank + #{α : α(X) ∈ ℤ}`.
    pub fn centralizer_dim(&self, rs: &RootSystem) -> usize {
        rs.rank() + self.integral_roots(rs)
    }

    /// Dimension of the conjugacy class.
    pub fn class_dim(&self, rs: &RootSystem) -> usize {
        rs.dim_g() - self.centralizer_dim(rs)
    }

    pub fn is_central(&self, rs: &RootSystem) -> bool {
        self.centralizer_dim(rs) == rs.dim_g()
    }

    pub fn is_regular(&self, rs: &RootSystem) -> bool {
        self.integral_roots(rs) == 0
    }

    /// The class of `g^k` for `g` in this class.
    pub fn power(&self, rs: &RootSystem, k: i64) -> AlcoveClass {
        self.power_with(rs, k, ReductionOrder::FirstWall)
    }

    pub fn power_with(&self, rs: &RootSystem, k: i64, order: ReductionOrder) -> AlcoveClass {
        let scaled = self.coords.iter().map(|x| *x * k).collect();
        reduce(rs, scaled, order)
    }
}

pub(crate) fn root_value(beta: &[i64], x: &[Rational64]) -> Rational64 {
    beta.iter()
        .zip(x)
        .fold(Rational64::zero(), |acc, (&c, &xi)| acc + xi * c)
}

fn theta(rs: &RootSystem, x: &[Rational64]) -> Rational64 {
    root_value(rs.highest_root(), x)
}

/// `sin(π v)` using the exact fractional part of `v` modulo 2.
pub(crate) fn sin_pi_frac(v: Rational64) -> f64 {
    let two = Rational64::from_integer(2);
    let r = v - (v / two).floor() * two;
    (PI * (*r.numer() as f64) / (*r.denom() as f64)).sin()
}

/// Reduces a torus point into the fundamental alcove by reflecting across
/// violated walls. Each reflection removes at least one affine root
/// hyperplane separating the point from the alcove, so the loop terminates.
pub fn reduce(rs: &RootSystem, mut x: Vec<Rational64>, order: ReductionOrder) -> AlcoveClass {
    let r = rs.rank();
    let one = Rational64::from_integer(1);
    // coweight coordinates of the simple coroots: column i of the Cartan matrix
    let simple_coroot = |i: usize| -> Vec<i64> { (0..r).map(|j| rs.cartan()[j][i]).collect() };
    let theta_coroot = rs.coroots()[rs.positive_roots().len() - 1].clone();
    let mut steps = 0usize;
    loop {
        steps += 1;
        assert!(steps < 10_000_000, "alcove reduction failed to terminate");
        let neg = (0..r).filter(|&i| x[i] < Rational64::zero());
        let wall = match order {
            ReductionOrder::FirstWall => neg.min(),
            ReductionOrder::LastWall => neg.max(),
        };
        let affine = theta(rs, &x) > one;
        let pick_affine = match order {
            ReductionOrder::FirstWall => wall.is_none() && affine,
            ReductionOrder::LastWall => affine,
        };
        if pick_affine {
            let t = theta(rs, &x) - one;
            for (xj, c) in x.iter_mut().zip(&theta_coroot) {
                *xj -= t * *c;
            }
        } else if let Some(i) = wall {
            let t = x[i];
            for (xj, c) in x.iter_mut().zip(simple_coroot(i)) {
                *xj -= t * c;
            }
        } else {
            return AlcoveClass { coords: x };
        }
    }
}

/// An element of the center `Z(G)` as an alcove vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CentralElement {
    class: AlcoveClass,
    order: u32,
}

impl CentralElement {
    pub fn class(&self) -> &AlcoveClass {
        &self.class
    }

    pub fn order(&self) -> u32 {
        self.order
    }
}

impl RootSystem {
    /// All central elements, sorted by coordinates (identity first).
    pub fn center_elements(&self) -> Vec<CentralElement> {
        let r = self.rank();
        let mut points = vec![vec![Rational64::zero(); r]];
        for i in 0..r {
            let m = self.highest_root()[i];
            let mut v = vec![Rational64::zero(); r];
            v[i] = Rational64::new(1, m);
            if v.iter().all(|c| c.is_integer()) {
                points.push(v);
            }
        }
        let mut out: Vec<CentralElement> = points
            .into_iter()
            .map(|coords| {
                let class = AlcoveClass { coords };
                let order = self.order_in_center(&class);
                CentralElement { class, order }
            })
            .collect();
        out.sort();
        out
    }

    /// Smallest `k ≥ 1` with `kX` in the coroot lattice.
    fn order_in_center(&self, class: &AlcoveClass) -> u32 {
        let r = self.rank();
        let c = Mat::<Q>::from_fn(r, r, |i, j| Q::from_integer(self.cartan()[i][j].into()));
        let x: Vec<Q> = class
            .coords()
            .iter()
            .map(|v| Q::new((*v.numer()).into(), (*v.denom()).into()))
            .collect();
        let sol = c.solve(&x, 0.0).expect("Cartan matrix is invertible");
        let l = sol.iter().fold(num::BigInt::from(1), |acc, s| acc.lcm(s.denom()));
        u32::try_from(l).expect("center order fits in u32")
    }
}
