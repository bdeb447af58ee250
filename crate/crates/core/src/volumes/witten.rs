//! Character-sum volumes of moduli spaces of flat connections on a surface
//! of genus `g` whose boundary holonomies lie in prescribed classes.
//!
//! The value is
//!
//! ```text
//! κ · |Z(G)| · s^{dim/2} · Σ_λ ∏ᵢ Δ(uᵢ) χ_λ(uᵢ) / (dim λ)^{2g−2+n}
//! ```
//!
//! summed over dominant weights with `⟨λ+ρ, λ+ρ⟩ ≤ T`, where `s` scales the
//! basic inner product and `κ` is [`WITTEN_NORMALIZATION`]. Characters are
//! evaluated by the Weyl character formula; at singular classes both
//! alternating sums vanish and the ratio of their lowest nonvanishing
//! derivatives along `ρ^∨` is used instead.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::rational::Rational64;
use num::{Integer, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::lie::{weyl_dimension_with, AlcoveClass, LieType, RootSystem, WeylGroup};
use crate::seifert::component_dimension;

/// `κ = 1/(2π)`, fixed so that the four-punctured sphere with all `SU(2)`
/// classes at `t = 1/2` has volume `2π`, the length of its bending-action
/// interval times the period `2π`.
pub const WITTEN_NORMALIZATION: f64 = 1.0 / (2.0 * PI);

/// Largest Weyl group enumerated; excludes `E7` and `E8`.
const WEYL_GROUP_LIMIT: usize = 60_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalization {
    /// Factor applied to the basic invariant inner product.
    pub scale: f64,
    pub constant: f64,
    pub center_order: usize,
    /// Real dimension of the moduli space; volumes scale as `scale^{dim/2}`.
    pub dimension: i64,
}

/// Whether `tail_estimate` is a proven bound or an integral-comparison
/// estimate along generic directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailKind {
    Bound,
    Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeResult {
    pub value: f64,
    pub truncation: u64,
    pub tail_estimate: f64,
    pub tail_kind: TailKind,
    pub normalization: Normalization,
    /// Number of dominant weights summed.
    pub terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeOptions {
    /// Bound `T` on `⟨λ+ρ, λ+ρ⟩`.
    pub truncation: u64,
    pub scale: f64,
    pub mode: ExecMode,
}

impl VolumeOptions {
    pub fn new(truncation: u64) -> Self {
        VolumeOptions {
            truncation,
            scale: 1.0,
            mode: ExecMode::default(),
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_mode(mut self, mode: ExecMode) -> Self {
        self.mode = mode;
        self
    }
}

pub fn witten_volume(genus: u32, rs: &RootSystem, u: &[AlcoveClass], truncation: u64) -> Result<VolumeResult> {
    witten_volume_with(genus, rs, u, &VolumeOptions::new(truncation))
}

pub fn witten_volume_with(genus: u32, rs: &RootSystem, u: &[AlcoveClass], opts: &VolumeOptions) -> Result<VolumeResult> {
    let dim = component_dimension(genus, rs, u);
    if dim <= 0 {
        return Err(Error::NonConvergent { dim });
    }
    if !(opts.scale.is_finite() && opts.scale > 0.0) {
        return Err(Error::Parse {
            field: "scale",
            message: format!("scale must be positive, got {}", opts.scale),
        });
    }
    for x in u {
        if x.coords().len() != rs.rank() || !x.in_alcove(rs) {
            return Err(Error::NotInAlcove(x.to_string()));
        }
    }
    let sum = CharacterSum::new(genus, rs, u)?;
    let weights = dominant_weights(&sum.gram, sum.gram_den, opts.truncation);
    let terms = exec::map_slice(opts.mode, &weights, |n| sum.term(n));
    let total = exec::compensated_sum(terms);
    let constant = WITTEN_NORMALIZATION;
    let factor = constant * rs.center_order() as f64 * opts.scale.powf(dim as f64 / 2.0);
    let (tail, tail_kind) = sum.tail(rs, opts.truncation, &weights);
    Ok(VolumeResult {
        value: factor * total,
        truncation: opts.truncation,
        tail_estimate: factor * tail,
        tail_kind,
        normalization: Normalization {
            scale: opts.scale,
            constant,
            center_order: rs.center_order(),
            dimension: dim,
        },
        terms: weights.len(),
    })
}

/// One marked class, prepared for repeated character evaluation.
struct Puncture {
    /// `ωₖ(X) = numerators[k] / den`.
    numerators: Vec<i64>,
    den: i64,
    /// Number of positive roots integral at `X`: the order of vanishing of
    /// the alternating sums.
    order: i32,
    /// `Δ(u)` divided by the alternating sum at `ρ`.
    coefficient: Complex64,
    delta: f64,
    class: AlcoveClass,
}

struct CharacterSum {
    weyl: Vec<(Vec<Vec<i64>>, i64)>,
    coroot_coefficients: Vec<Vec<i64>>,
    /// `ωₖ(ρ^∨)`.
    heights: Vec<f64>,
    punctures: Vec<Puncture>,
    exponent: i32,
    /// `⟨ωᵢ, ωⱼ⟩ = gram[i][j] / gram_den`.
    gram: Vec<Vec<i128>>,
    gram_den: i128,
}

impl CharacterSum {
    fn new(genus: u32, rs: &RootSystem, u: &[AlcoveClass]) -> Result<Self> {
        let r = rs.rank();
        let weyl = WeylGroup::generate(rs, WEYL_GROUP_LIMIT)?.weight_action(rs);
        let omega = rs.fundamental_weights();
        let heights = omega
            .iter()
            .map(|w| {
                let h: Rational64 = w.iter().copied().sum();
                *h.numer() as f64 / *h.denom() as f64
            })
            .collect();
        let gram_q: Vec<Vec<Rational64>> = omega
            .iter()
            .map(|a| omega.iter().map(|b| rs.inner_q(a, b)).collect())
            .collect();
        let gram_den = gram_q.iter().flatten().fold(1i64, |acc, v| acc.lcm(v.denom()));
        let gram = gram_q
            .iter()
            .map(|row| row.iter().map(|v| i128::from(*v.numer() * (gram_den / *v.denom()))).collect())
            .collect();
        let mut sum = CharacterSum {
            weyl,
            coroot_coefficients: rs.coroot_coefficients(),
            heights,
            punctures: Vec::with_capacity(u.len()),
            exponent: 2 * genus as i32 - 2 + u.len() as i32,
            gram,
            gram_den: i128::from(gram_den),
        };
        let rho = vec![1i64; r];
        for x in u {
            let phi: Vec<Rational64> = omega
                .iter()
                .map(|w| w.iter().zip(x.coords()).fold(Rational64::zero(), |acc, (a, b)| acc + a * b))
                .collect();
            let den = phi.iter().fold(1i64, |acc, v| acc.lcm(v.denom()));
            let numerators = phi.iter().map(|v| v.numer() * (den / v.denom())).collect();
            let mut p = Puncture {
                numerators,
                den,
                order: (x.integral_roots(rs) / 2) as i32,
                coefficient: Complex64::new(1.0, 0.0),
                delta: x.delta(rs),
                class: x.clone(),
            };
            let at_rho = sum.alternating(&p, &sum.orbit(&rho));
            p.coefficient = Complex64::new(p.delta, 0.0) / at_rho;
            sum.punctures.push(p);
        }
        Ok(sum)
    }

    fn orbit(&self, m: &[i64]) -> Vec<(Vec<i64>, i64)> {
        self.weyl
            .iter()
            .map(|(w, sign)| {
                let image = w.iter().map(|row| row.iter().zip(m).map(|(a, b)| a * b).sum()).collect();
                (image, *sign)
            })
            .collect()
    }

    /// `Σ_w ε(w) ((wμ)(ρ^∨))^k e^{2πi (wμ)(X)}` with `k` the order of the
    /// puncture.
    fn alternating(&self, p: &Puncture, orbit: &[(Vec<i64>, i64)]) -> Complex64 {
        let mut acc = Complex64::zero();
        for (wm, sign) in orbit {
            let num: i128 = wm.iter().zip(&p.numerators).map(|(&a, &b)| i128::from(a) * i128::from(b)).sum();
            let phase = num.rem_euclid(i128::from(p.den)) as f64 / p.den as f64;
            let mut amp = *sign as f64;
            if p.order > 0 {
                let h: f64 = wm.iter().zip(&self.heights).map(|(&a, b)| a as f64 * b).sum();
                amp *= h.powi(p.order);
            }
            acc += Complex64::from_polar(amp, 2.0 * PI * phase);
        }
        acc
    }

    /// Summand for `λ + ρ = Σ nₖ ωₖ`.
    fn term(&self, n: &[i64]) -> f64 {
        let lambda: Vec<u64> = n.iter().map(|&x| (x - 1) as u64).collect();
        let dim = weyl_dimension_with(&self.coroot_coefficients, &lambda);
        let orbit = self.orbit(n);
        let mut prod = Complex64::new(1.0, 0.0);
        for p in &self.punctures {
            prod *= p.coefficient * self.alternating(p, &orbit);
        }
        prod.re / dim.powi(self.exponent)
    }

    /// Bound on the omitted part of the sum (before the overall factor).
    fn tail(&self, rs: &RootSystem, truncation: u64, weights: &[Vec<i64>]) -> (f64, TailKind) {
        let w_order = self.weyl.len() as f64;
        let (mut amp, mut lost) = (1.0f64, 0i32);
        for p in &self.punctures {
            if p.order == 0 {
                amp *= w_order;
            } else {
                // |Δ χ_λ| ≤ Δ · dim λ
                amp *= p.delta;
                lost += 1;
            }
        }
        let e = self.exponent - lost;
        match (rs.lie_type(), rs.rank()) {
            (LieType::A, 1) => {
                let k = weights.iter().map(|n| n[0]).max().unwrap_or(0) as f64;
                if k < 1.0 {
                    return (f64::INFINITY, TailKind::Bound);
                }
                let bound = if e >= 2 {
                    amp * k.powi(1 - e) / f64::from(e - 1)
                } else if e == 1 && lost + 1 == self.punctures.len() as i32 {
                    // single regular class: Σ_{k>K} 2 sin(k x)/k with
                    // x = π(t + number of classes at −1), by Abel summation
                    let reg = self.punctures.iter().find(|p| p.order == 0).expect("one regular class");
                    let t = reg.class.coords()[0];
                    let shift = self
                        .punctures
                        .iter()
                        .filter(|p| p.order > 0 && p.class.coords()[0] == Rational64::from_integer(1))
                        .count() as i64;
                    let x = PI * (*t.numer() as f64 / *t.denom() as f64 + shift as f64);
                    2.0 / ((x / 2.0).sin().abs() * (k + 1.0))
                } else {
                    f64::INFINITY
                };
                (bound, TailKind::Bound)
            }
            (LieType::A, 2) => {
                // ⟨λ+ρ, λ+ρ⟩ ≤ (2/3)(n₁+n₂)², so every omitted weight has
                // n₁ + n₂ > S; dim λ = n₁n₂(n₁+n₂)/2
                let s = isqrt(truncation as u128 * 3 / 2) as f64;
                if e < 1 || s < 1.0 {
                    return (f64::INFINITY, TailKind::Bound);
                }
                let ef = f64::from(e);
                let integral = (1.0 + s.ln()) / (ef * s.powi(e)) + 1.0 / (ef * ef * s.powi(e));
                (amp * 2f64.powi(e + 1) * integral, TailKind::Bound)
            }
            _ => {
                // ∫_R^∞ r^{rank−1} (r/|ρ|)^{−e·N} dr over the dominant chamber
                let r = rs.rank() as i32;
                let big_n = rs.positive_roots().len() as i32;
                let decay = e * big_n;
                if decay <= r {
                    return (f64::INFINITY, TailKind::Estimate);
                }
                let radius = (truncation as f64).sqrt();
                let rho_norm = (self.norm(&vec![1; r as usize])).sqrt();
                let chamber = sphere_area(r as u32) / w_order;
                let covolume = gram_det(&self.gram, self.gram_den).sqrt();
                let est = amp * chamber / covolume * rho_norm.powi(decay) * radius.powi(r - decay) / f64::from(decay - r);
                (est, TailKind::Estimate)
            }
        }
    }

    fn norm(&self, n: &[i64]) -> f64 {
        quadratic(&self.gram, n) as f64 / self.gram_den as f64
    }
}

fn quadratic(g: &[Vec<i128>], n: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, row) in g.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            acc += v * i128::from(n[i]) * i128::from(n[j]);
        }
    }
    acc
}

/// All `n ∈ ℤ_{≥1}^r` with `nᵀ G n ≤ bound · den`, in lexicographic order.
/// Every entry of `G` is nonnegative, so the norm grows in each coordinate.
fn dominant_weights(g: &[Vec<i128>], den: i128, bound: u64) -> Vec<Vec<i64>> {
    let r = g.len();
    let limit = i128::from(bound) * den;
    let mut out = Vec::new();
    let mut n = vec![1i64; r];
    fn rec(i: usize, n: &mut Vec<i64>, g: &[Vec<i128>], limit: i128, out: &mut Vec<Vec<i64>>) {
        if i == n.len() {
            out.push(n.clone());
            return;
        }
        n[i] = 1;
        while quadratic(g, n) <= limit {
            rec(i + 1, n, g, limit, out);
            n[i] += 1;
        }
        n[i] = 1;
    }
    if r > 0 {
        rec(0, &mut n, g, limit, &mut out);
    }
    out
}

fn isqrt(v: u128) -> u128 {
    let mut x = (v as f64).sqrt() as u128;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

/// Area of the unit sphere in `ℝ^r`.
fn sphere_area(r: u32) -> f64 {
    match r {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI * sphere_area(r - 2) / f64::from(r - 2),
    }
}

fn gram_det(g: &[Vec<i128>], den: i128) -> f64 {
    let m = crate::linalg::Mat::<f64>::from_fn(g.len(), g.len(), |i, j| g[i][j] as f64 / den as f64);
    m.det(1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Rational64 as R;

    fn class(rs: &RootSystem, x: &[(i64, i64)]) -> AlcoveClass {
        AlcoveClass::new(rs, x.iter().map(|&(a, b)| R::new(a, b)).collect()).unwrap()
    }

    fn su2(ts: &[(i64, i64)]) -> (RootSystem, Vec<AlcoveClass>) {
        let rs = RootSystem::parse("A1").unwrap();
        let u = ts.iter().map(|&t| class(&rs, &[t])).collect();
        (rs, u)
    }

    #[test]
    fn four_halves_on_the_sphere() {
        let (rs, u) = su2(&[(1, 2); 4]);
        let v = witten_volume(0, &rs, &u, 2_000_000_000).unwrap();
        assert!((v.value - 2.0 * PI).abs() < 1e-4, "{}", v.value);
        assert!(v.tail_estimate < 1e-4);
        assert_eq!(v.tail_kind, TailKind::Bound);
        assert_eq!(v.normalization.dimension, 2);
    }

    #[test]
    fn one_holed_torus_is_linear() {
        // Σ_k 2 sin(kπt)/k = π(1 − t)
        for t in [(1, 4), (1, 2), (3, 4)] {
            let (rs, u) = su2(&[t]);
            let v = witten_volume(1, &rs, &u, 500_000_000).unwrap();
            let expect = 1.0 - t.0 as f64 / t.1 as f64;
            assert!((v.value - expect).abs() <= v.tail_estimate + 1e-12, "{t:?}: {} vs {expect}", v.value);
        }
    }

    #[test]
    fn dimension_guard() {
        let (rs, u) = su2(&[(1, 2); 3]);
        assert!(matches!(witten_volume(0, &rs, &u, 100), Err(Error::NonConvergent { dim: 0 })));
        let (rs, u) = su2(&[(0, 1)]);
        assert!(matches!(witten_volume(1, &rs, &u, 100), Err(Error::NonConvergent { .. })));
        let e8 = RootSystem::parse("E8").unwrap();
        assert!(matches!(witten_volume(3, &e8, &[], 10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn central_classes_drop_out() {
        // a puncture at the identity leaves the volume unchanged
        let (rs, u) = su2(&[(1, 3), (1, 2), (2, 3), (1, 4)]);
        let mut with = u.clone();
        with.push(class(&rs, &[(0, 1)]));
        let a = witten_volume(0, &rs, &u, 1_000_000).unwrap();
        let b = witten_volume(0, &rs, &with, 1_000_000).unwrap();
        assert!((a.value - b.value).abs() < 1e-12);
        // at −1 it shifts every class t to 1 − t in one slot
        let mut minus = u.clone();
        minus.push(class(&rs, &[(1, 1)]));
        let mut flipped = u.clone();
        flipped[0] = class(&rs, &[(2, 3)]);
        let c = witten_volume(0, &rs, &minus, 1_000_000).unwrap();
        let d = witten_volume(0, &rs, &flipped, 1_000_000).unwrap();
        assert!((c.value - d.value).abs() < 1e-12);
    }

    #[test]
    fn scale_and_modes() {
        let (rs, u) = su2(&[(1, 3), (1, 2), (2, 3), (1, 4), (1, 5)]);
        let base = witten_volume(0, &rs, &u, 100_000).unwrap();
        let opts = VolumeOptions::new(100_000).with_scale(2.0).with_mode(ExecMode::Sequential);
        let scaled = witten_volume_with(0, &rs, &u, &opts).unwrap();
        assert!((scaled.value - base.value * 2f64.powi(2)).abs() < 1e-12);
        let seq = witten_volume_with(0, &rs, &u, &VolumeOptions::new(100_000).with_mode(ExecMode::Sequential)).unwrap();
        assert_eq!(seq.value.to_bits(), base.value.to_bits());
    }

    #[test]
    fn permutation_invariance_term_by_term() {
        let rs = RootSystem::parse("A2").unwrap();
        let u = vec![class(&rs, &[(1, 3), (1, 4)]), class(&rs, &[(1, 5), (1, 2)]), class(&rs, &[(1, 6), (1, 6)])];
        let a = CharacterSum::new(0, &rs, &u).unwrap();
        let rev: Vec<_> = u.iter().rev().cloned().collect();
        let b = CharacterSum::new(0, &rs, &rev).unwrap();
        for n in dominant_weights(&a.gram, a.gram_den, 200) {
            assert!((a.term(&n) - b.term(&n)).abs() < 1e-12 * (1.0 + a.term(&n).abs()));
        }
    }

    #[test]
    fn singular_characters_are_dimensions() {
        // at the identity Δχ_λ = dim λ, through the derivative formula
        for name in ["A2", "B2", "G2"] {
            let rs = RootSystem::parse(name).unwrap();
            let id = AlcoveClass::identity(&rs);
            let sum = CharacterSum::new(0, &rs, std::slice::from_ref(&id)).unwrap();
            for n in dominant_weights(&sum.gram, sum.gram_den, 40) {
                let lambda: Vec<u64> = n.iter().map(|&x| (x - 1) as u64).collect();
                let dim = rs.weyl_dimension(&lambda);
                let got = sum.punctures[0].coefficient * sum.alternating(&sum.punctures[0], &sum.orbit(&n));
                assert!((got.re - dim).abs() < 1e-8 * dim && got.im.abs() < 1e-8 * dim, "{name} {n:?}");
            }
        }
    }

    #[test]
    fn a2_tail_bounds_the_change() {
        let rs = RootSystem::parse("A2").unwrap();
        let u = vec![class(&rs, &[(1, 3), (1, 3)]); 3];
        let small = witten_volume(0, &rs, &u, 300).unwrap();
        let large = witten_volume(0, &rs, &u, 3000).unwrap();
        assert_eq!(small.tail_kind, TailKind::Bound);
        assert!((small.value - large.value).abs() <= small.tail_estimate);
        assert!(large.tail_estimate < small.tail_estimate);
    }

    #[test]
    fn weight_enumeration() {
        let g = vec![vec![1i128]];
        // A1: ⟨kω, kω⟩ = k²/2 ≤ 8 ⇔ k ≤ 4
        assert_eq!(dominant_weights(&g, 2, 8).len(), 4);
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
    }
}
