//! Root systems of compact simply connected simple Lie groups.
//!
//! Roots are stored as integer coefficient vectors over the simple roots.
//! Torus points `X` are stored in the coweight basis, i.e. by the values
//! `αᵢ(X)` of the simple roots; a root `β = Σ cᵢ αᵢ` then evaluates to
//! `β(X) = Σ cᵢ xᵢ` and the fundamental alcove is `xᵢ ≥ 0`, `θ(X) ≤ 1`.

mod alcove;
mod weyl;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num::rational::Rational64;

use crate::error::{Error, Result};

pub use alcove::{reduce, AlcoveClass, CentralElement, ReductionOrder};
pub(crate) use alcove::sin_pi_frac;
pub use weyl::{weyl_dimension_with, WeylElement, WeylGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieType {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl LieType {
    /// Rank of the exceptional types; `None` for the classical series.
    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            LieType::E6 => Some(6),
            LieType::E7 => Some(7),
            LieType::E8 => Some(8),
            LieType::F4 => Some(4),
            LieType::G2 => Some(2),
            _ => None,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            LieType::A => "A",
            LieType::B => "B",
            LieType::C => "C",
            LieType::D => "D",
            LieType::E6 | LieType::E7 | LieType::E8 => "E",
            LieType::F4 => "F",
            LieType::G2 => "G",
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LieType::A => "A",
            LieType::B => "B",
            LieType::C => "C",
            LieType::D => "D",
            LieType::E6 => "E6",
            LieType::E7 => "E7",
            LieType::E8 => "E8",
            LieType::F4 => "F4",
            LieType::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for LieType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(LieType::A),
            "B" => Ok(LieType::B),
            "C" => Ok(LieType::C),
            "D" => Ok(LieType::D),
            "E6" => Ok(LieType::E6),
            "E7" => Ok(LieType::E7),
            "E8" => Ok(LieType::E8),
            "F4" => Ok(LieType::F4),
            "G2" => Ok(LieType::G2),
            other => Err(Error::Parse {
                field: "group",
                message: format!("unknown Lie type {other:?}"),
            }),
        }
    }
}

/// Root data of a simple Lie algebra in the basic normalization
/// (long roots have squared length 2).
#[derive(Debug, Clone)]
pub struct RootSystem {
    lie_type: LieType,
    rank: usize,
    /// `⟨αᵢ, αⱼ⟩` on simple roots.
    inner: Vec<Vec<Rational64>>,
    /// `cartan[i][j] = 2⟨αᵢ, αⱼ⟩ / ⟨αⱼ, αⱼ⟩`.
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    /// Coweight coordinates of the coroot of each positive root.
    coroots: Vec<Vec<i64>>,
    highest_root: Vec<i64>,
    dim_g: usize,
}

impl RootSystem {
    pub fn new(lie_type: LieType, rank: usize) -> Result<Self> {
        let bad = |constraint: &str| Error::InvalidLieType {
            lie_type: lie_type.letter().to_string(),
            rank,
            constraint: constraint.to_string(),
        };
        match (lie_type, lie_type.fixed_rank()) {
            (_, Some(r)) if r != rank => return Err(bad(&format!("type {lie_type} has rank {r}"))),
            (LieType::A, _) if rank < 1 => return Err(bad("A_r requires r >= 1")),
            (LieType::B, _) if rank < 2 => return Err(bad("B_r requires r >= 2")),
            (LieType::C, _) if rank < 2 => return Err(bad("C_r requires r >= 2")),
            (LieType::D, _) if rank < 4 => return Err(bad("D_r requires r >= 4")),
            _ => {}
        }
        let (edges, lengths) = dynkin(lie_type, rank);
        let mut inner = vec![vec![Rational64::from_integer(0); rank]; rank];
        for i in 0..rank {
            inner[i][i] = lengths[i];
        }
        for &(i, j, m) in &edges {
            let short = lengths[i].min(lengths[j]);
            let v = -Rational64::from_integer(m) * short / 2;
            inner[i][j] = v;
            inner[j][i] = v;
        }
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let c = inner[i][j] * 2 / inner[j][j];
                        debug_assert!(c.is_integer());
                        c.to_integer()
                    })
                    .collect()
            })
            .collect();
        let positive_roots = positive_roots_by_strings(&cartan);
        let highest_root = positive_roots
            .iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .cloned()
            .expect("root system has roots");
        let mut rs = RootSystem {
            lie_type,
            rank,
            inner,
            cartan,
            dim_g: rank + 2 * positive_roots.len(),
            positive_roots,
            coroots: Vec::new(),
            highest_root,
        };
        rs.coroots = rs.positive_roots.iter().map(|b| rs.coroot_coords(b)).collect();
        Ok(rs)
    }

    /// Parses names like `A1`, `C2`, `E8`, `G2`.
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        let err = || Error::Parse {
            field: "group",
            message: format!("expected a simple type such as A1, C2 or E8, got {name:?}"),
        };
        if name.len() < 2 {
            return Err(err());
        }
        let (letter, digits) = name.split_at(1);
        let rank: usize = digits.parse().map_err(|_| err())?;
        let lie_type = match letter.to_ascii_uppercase().as_str() {
            "E" => format!("E{rank}").parse()?,
            "F" => format!("F{rank}").parse()?,
            "G" => format!("G{rank}").parse()?,
            l => l.parse()?,
        };
        RootSystem::new(lie_type, rank)
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        match self.lie_type.fixed_rank() {
            Some(_) => self.lie_type.to_string(),
            None => format!("{}{}", self.lie_type, self.rank),
        }
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn inner_product(&self) -> &[Vec<Rational64>] {
        &self.inner
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Simple-root coefficients `mᵢ` of the highest root.
    pub fn highest_root(&self) -> &[i64] {
        &self.highest_root
    }

    /// Coweight coordinates of the coroots, aligned with [`Self::positive_roots`].
    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    /// `⟨β, γ⟩` for vectors in simple-root coordinates.
    pub fn inner_q(&self, b: &[Rational64], c: &[Rational64]) -> Rational64 {
        let mut acc = Rational64::from_integer(0);
        for i in 0..self.rank {
            if b[i] == Rational64::from_integer(0) {
                continue;
            }
            for j in 0..self.rank {
                acc += b[i] * self.inner[i][j] * c[j];
            }
        }
        acc
    }

    fn coroot_coords(&self, beta: &[i64]) -> Vec<i64> {
        let b: Vec<Rational64> = beta.iter().map(|&x| Rational64::from_integer(x)).collect();
        let len2 = self.inner_q(&b, &b);
        (0..self.rank)
            .map(|i| {
                let mut e = vec![Rational64::from_integer(0); self.rank];
                e[i] = Rational64::from_integer(1);
                let v = self.inner_q(&e, &b) * 2 / len2;
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect()
    }

    /// Squared length of a root given in simple-root coordinates.
    pub fn root_length2(&self, beta: &[i64]) -> Rational64 {
        let b: Vec<Rational64> = beta.iter().map(|&x| Rational64::from_integer(x)).collect();
        self.inner_q(&b, &b)
    }

    /// Order of the center of the simply connected group.
    pub fn center_order(&self) -> usize {
        1 + self.highest_root.iter().filter(|&&m| m == 1).count()
    }
}

/// Dynkin diagram in Bourbaki numbering: `(i, j, bond multiplicity)` and
/// squared root lengths.
fn dynkin(t: LieType, r: usize) -> (Vec<(usize, usize, i64)>, Vec<Rational64>) {
    let two = Rational64::from_integer(2);
    let one = Rational64::from_integer(1);
    let chain = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1, 1)).collect::<Vec<_>>();
    match t {
        LieType::A => (chain(r), vec![two; r]),
        LieType::B => {
            let mut e = chain(r - 1);
            e.push((r - 2, r - 1, 2));
            let mut l = vec![two; r];
            l[r - 1] = one;
            (e, l)
        }
        LieType::C => {
            let mut e = chain(r - 1);
            e.push((r - 2, r - 1, 2));
            let mut l = vec![one; r];
            l[r - 1] = two;
            (e, l)
        }
        LieType::D => {
            let mut e = chain(r - 1);
            e.push((r - 3, r - 1, 1));
            (e, vec![two; r])
        }
        LieType::E6 | LieType::E7 | LieType::E8 => {
            // 1-3-4-5-6-…, with 2 attached to 4
            let mut e = vec![(0, 2, 1), (1, 3, 1)];
            for i in 2..r - 1 {
                e.push((i, i + 1, 1));
            }
            (e, vec![two; r])
        }
        LieType::F4 => (vec![(0, 1, 1), (1, 2, 2), (2, 3, 1)], vec![two, two, one, one]),
        LieType::G2 => (vec![(0, 1, 3)], vec![Rational64::new(2, 3), two]),
    }
}

/// Positive roots built height by height from `α`-strings.
fn positive_roots_by_strings(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let mut all: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            e
        })
        .collect();
    let mut known: HashSet<Vec<i64>> = all.iter().cloned().collect();
    let mut layer = all.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..r {
                // ⟨β, αᵢ^∨⟩
                let pairing: i64 = (0..r).map(|j| beta[j] * cartan[j][i]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort_by_key(|b| (b.iter().sum::<i64>(), std::cmp::Reverse(b.clone())));
    all
}
