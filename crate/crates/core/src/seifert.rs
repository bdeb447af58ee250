//! Seifert invariants, the component label set and the torsion prefactor.
//!
//! A Seifert manifold is given by its base genus and the pairs `(pᵢ, qᵢ)`.
//! Components of the irreducible character variety are labelled by pairs
//! `(u, v)` with `v` central and `uᵢ^{pᵢ} = v^{qᵢ}`; this set is computed
//! exactly by pulling the target class back through the `p`-th power map.

use std::fmt;

use num::rational::Rational64;
use num::{BigInt, Integer, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::lie::{AlcoveClass, CentralElement, RootSystem};
use crate::linalg::{ratio_to_f64, Q};

/// Validated Seifert invariants `(g; (p₁,q₁), …, (pₙ,qₙ))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    genus: u32,
    pairs: Vec<(i64, i64)>,
}

impl SeifertData {
    pub fn new(genus: i64, pairs: Vec<(i64, i64)>) -> Result<Self> {
        validate_seifert(genus, pairs)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    /// `χ = −Σ qᵢ/pᵢ`.
    pub fn euler_number(&self) -> Q {
        euler_number(self)
    }

    /// The same manifold with the exceptional fibres listed in another order.
    pub fn permuted(&self, perm: &[usize]) -> SeifertData {
        SeifertData {
            genus: self.genus,
            pairs: perm.iter().map(|&i| self.pairs[i]).collect(),
        }
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={};", self.genus)?;
        for (i, (p, q)) in self.pairs.iter().enumerate() {
            let sep = if i == 0 { " " } else { "," };
            write!(f, "{sep}({p},{q})")?;
        }
        Ok(())
    }
}

pub fn validate_seifert(genus: i64, pairs: Vec<(i64, i64)>) -> Result<SeifertData> {
    let genus = u32::try_from(genus).map_err(|_| Error::InvalidSeifert {
        field: "genus",
        message: format!("genus must be a nonnegative integer, got {genus}"),
    })?;
    if pairs.is_empty() {
        return Err(Error::InvalidSeifert {
            field: "n",
            message: "at least one pair (p,q) is required (n >= 1)".into(),
        });
    }
    for &(p, q) in &pairs {
        if p < 1 {
            return Err(Error::InvalidSeifert {
                field: "p",
                message: format!("p must be >= 1, got ({p},{q})"),
            });
        }
        let g = p.gcd(&q);
        if g != 1 {
            return Err(Error::InvalidSeifert {
                field: "coprime",
                message: format!("gcd({p},{q}) = {g}, p and q must be coprime"),
            });
        }
    }
    Ok(SeifertData { genus, pairs })
}

pub fn euler_number(s: &SeifertData) -> Q {
    s.pairs
        .iter()
        .fold(Q::zero(), |acc, &(p, q)| acc - Q::new(BigInt::from(q), BigInt::from(p)))
}

/// Smallest `r ≥ 0` with `q·r ≡ 1 (mod p)`; `0` when `p = 1`.
pub fn inverse_mod(q: i64, p: i64) -> Result<i64> {
    if p < 1 {
        return Err(Error::NotInvertible { q, p });
    }
    if p == 1 {
        return Ok(0);
    }
    let e = q.mod_floor(&p).extended_gcd(&p);
    if e.gcd != 1 {
        return Err(Error::NotInvertible { q, p });
    }
    Ok(e.x.mod_floor(&p))
}

/// Whether a label is known to be empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Occupancy {
    /// Negative expected dimension.
    Empty,
    /// Existence of an irreducible representation is not decided.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentLabel {
    pub v: CentralElement,
    pub u: Vec<AlcoveClass>,
    pub dim: i64,
}

impl ComponentLabel {
    pub fn occupancy(&self) -> Occupancy {
        if self.dim < 0 {
            Occupancy::Empty
        } else {
            Occupancy::Unknown
        }
    }

    /// Re-checks `uᵢ^{pᵢ} = v^{qᵢ}` for every `i`.
    pub fn satisfies(&self, s: &SeifertData, rs: &RootSystem) -> bool {
        self.u.len() == s.n()
            && s.pairs
                .iter()
                .zip(&self.u)
                .all(|(&(p, q), ui)| ui.power(rs, p) == self.v.class().power(rs, q))
    }
}

/// `2(g−1)·dim G + Σ dim uᵢ`.
pub fn component_dimension(genus: u32, rs: &RootSystem, u: &[AlcoveClass]) -> i64 {
    let base = 2 * (i64::from(genus) - 1) * rs.dim_g() as i64;
    base + u.iter().map(|x| x.class_dim(rs) as i64).sum::<i64>()
}

/// All alcove points `X` with `[e^{pX}] = [e^W]`, sorted.
pub fn power_preimages(rs: &RootSystem, target: &AlcoveClass, p: i64) -> Vec<AlcoveClass> {
    assert!(p >= 1);
    let r = rs.rank();
    let pr = Rational64::from_integer(p);
    let total = (p as usize).pow(r as u32);
    let mut out: Vec<AlcoveClass> = (0..total)
        .map(|mut idx| {
            // μ = Σ cⱼ αⱼ^∨ with cⱼ ∈ {0, …, p−1}; αⱼ^∨ is column j of the Cartan matrix
            let mut x: Vec<Rational64> = target.coords().to_vec();
            for j in 0..r {
                let c = (idx % p as usize) as i64;
                idx /= p as usize;
                for (k, xk) in x.iter_mut().enumerate() {
                    *xk += Rational64::from_integer(c * rs.cartan()[k][j]);
                }
            }
            AlcoveClass::from_torus_point(rs, x.into_iter().map(|v| v / pr).collect())
        })
        .collect();
    out.sort();
    out.dedup();
    debug_assert!(out.iter().all(|x| x.power(rs, p) == *target));
    out
}

/// Solutions `(uᵢ, dim of its class)` for each fibre.
type FibreSolutions = Vec<Vec<(AlcoveClass, i64)>>;

/// The label set `P`, stored as one solution list per fibre for each
/// central `v`. Iteration is lazy and yields labels in `(v, u)` order.
#[derive(Debug, Clone)]
pub struct ComponentSet {
    genus: u32,
    blocks: Vec<(CentralElement, FibreSolutions)>,
    base_dim: i64,
}

impl ComponentSet {
    /// Number of labels (may exceed what is reasonable to materialize).
    pub fn len(&self) -> u128 {
        self.blocks
            .iter()
            .map(|(_, sols)| sols.iter().map(|s| s.len() as u128).product::<u128>())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn iter(&self) -> ComponentIter<'_> {
        ComponentIter {
            set: self,
            block: 0,
            odometer: None,
        }
    }
}

pub struct ComponentIter<'a> {
    set: &'a ComponentSet,
    block: usize,
    /// Current index into each fibre's solution list; `None` before the
    /// first label of a block.
    odometer: Option<Vec<usize>>,
}

impl ComponentIter<'_> {
    /// Advances to the next index tuple, last fibre fastest so that output is
    /// lexicographic. Returns false when the current block is exhausted.
    fn advance(&mut self) -> bool {
        let sols = &self.set.blocks[self.block].1;
        match &mut self.odometer {
            None => {
                if sols.iter().any(|s| s.is_empty()) {
                    return false;
                }
                self.odometer = Some(vec![0; sols.len()]);
                true
            }
            Some(o) => {
                for i in (0..o.len()).rev() {
                    o[i] += 1;
                    if o[i] < sols[i].len() {
                        return true;
                    }
                    o[i] = 0;
                }
                false
            }
        }
    }
}

impl Iterator for ComponentIter<'_> {
    type Item = ComponentLabel;

    fn next(&mut self) -> Option<ComponentLabel> {
        while self.block < self.set.blocks.len() {
            if !self.advance() {
                self.block += 1;
                self.odometer = None;
                continue;
            }
            let (v, sols) = &self.set.blocks[self.block];
            let odo = self.odometer.as_ref().expect("advanced");
            let mut dim = self.set.base_dim;
            let u = odo
                .iter()
                .zip(sols)
                .map(|(&k, s)| {
                    dim += s[k].1;
                    s[k].0.clone()
                })
                .collect();
            return Some(ComponentLabel { v: v.clone(), u, dim });
        }
        None
    }
}

pub fn component_set(s: &SeifertData, rs: &RootSystem, mode: ExecMode) -> ComponentSet {
    let center = rs.center_elements();
    let jobs: Vec<(usize, usize)> = (0..center.len())
        .flat_map(|c| (0..s.n()).map(move |i| (c, i)))
        .collect();
    let solved = exec::map_slice(mode, &jobs, |&(c, i)| {
        let (p, q) = s.pairs[i];
        let target = center[c].class().power(rs, q);
        power_preimages(rs, &target, p)
            .into_iter()
            .map(|x| {
                let d = x.class_dim(rs) as i64;
                (x, d)
            })
            .collect::<Vec<_>>()
    });
    let mut solved = solved.into_iter();
    let blocks = center
        .into_iter()
        .map(|v| {
            let sols = (0..s.n()).map(|_| solved.next().expect("one job per fibre")).collect();
            (v, sols)
        })
        .collect();
    ComponentSet {
        genus: s.genus,
        blocks,
        base_dim: 2 * (i64::from(s.genus) - 1) * rs.dim_g() as i64,
    }
}

pub fn enumerate_components(s: &SeifertData, rs: &RootSystem) -> Vec<ComponentLabel> {
    enumerate_components_with(s, rs, ExecMode::default())
}

pub fn enumerate_components_with(s: &SeifertData, rs: &RootSystem, mode: ExecMode) -> Vec<ComponentLabel> {
    component_set(s, rs, mode).iter().collect()
}

/// `∏ Δ(uᵢ^{rᵢ}) / pᵢ^{dim Vᵢ/2}`, with `exact_square` its square when
/// every sine factor squares to a rational number.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefactorValue {
    pub value: f64,
    pub exact_square: Option<Q>,
}

pub fn torsion_prefactor(s: &SeifertData, rs: &RootSystem, label: &ComponentLabel) -> Result<PrefactorValue> {
    let r = s
        .pairs
        .iter()
        .map(|&(p, q)| inverse_mod(q, p))
        .collect::<Result<Vec<_>>>()?;
    torsion_prefactor_with_r(s, rs, label, &r)
}

/// Same as [`torsion_prefactor`] with caller-chosen inverses `rᵢ`.
pub fn torsion_prefactor_with_r(
    s: &SeifertData,
    rs: &RootSystem,
    label: &ComponentLabel,
    r: &[i64],
) -> Result<PrefactorValue> {
    if label.u.len() != s.n() || r.len() != s.n() {
        return Err(Error::Shape(format!(
            "label has {} classes and {} inverses for {} fibres",
            label.u.len(),
            r.len(),
            s.n()
        )));
    }
    let mut log_value = 0.0f64;
    let mut square = Some(Q::from_integer(1.into()));
    for ((&(p, q), ui), &ri) in s.pairs.iter().zip(&label.u).zip(r) {
        if p > 1 && (q * ri - 1).rem_euclid(p) != 0 {
            return Err(Error::NotInvertible { q, p });
        }
        let power = ui.power(rs, ri);
        let dim_v = ui.centralizer_dim(rs) as i64;
        for beta in rs.positive_roots() {
            let a = power.root_value(beta);
            if a.is_integer() {
                continue;
            }
            let s2 = four_sin2(a);
            log_value += s2.1.ln() / 2.0;
            square = match (square, s2.0) {
                (Some(acc), Some(f)) => Some(acc * f),
                _ => None,
            };
        }
        log_value -= dim_v as f64 * (p as f64).ln() / 2.0;
        if let Some(acc) = square.as_mut() {
            *acc /= Q::from_integer(BigInt::from(p).pow(dim_v as u32));
        }
    }
    let value = match &square {
        Some(sq) => ratio_to_f64(sq).sqrt(),
        None => log_value.exp(),
    };
    Ok(PrefactorValue {
        value,
        exact_square: square,
    })
}

/// `4 sin²(πa)`, exactly when it is rational (denominator of `a` mod 1 in
/// {2, 3, 4, 6}), together with its float value.
fn four_sin2(a: Rational64) -> (Option<Q>, f64) {
    let frac = a - a.floor();
    let d = *frac.denom();
    let k = *frac.numer();
    let exact = match (d, k) {
        (2, _) => Some(4),
        (3, _) => Some(3),
        (4, _) => Some(2),
        (6, _) => Some(1),
        _ => None,
    };
    let s = crate::lie::sin_pi_frac(frac);
    (exact.map(|v| Q::from_integer(BigInt::from(v))), 4.0 * s * s)
}
