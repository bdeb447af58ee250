//! SU(2) volumes by convolution of conjugacy-class laws on the alcove
//! `[0, 1]`, independent of any character expansion.
//!
//! A law is stored through `g(w) = p(w)/sin(πw)`, `p` its density in the
//! class coordinate `w`. Multiplying a Haar-random element of class `v` by
//! one of class `t` spreads the class over `[|v−t|, 1−|1−v−t|]` with
//! `g = π/(2 sin πv sin πt)`, so a law times a class is
//! `π/(2 sin πt)·(G(b) − G(a))` with `G = ∫g`, and a law times a law is
//! `(π/2)∫ g_B(v)(G_A(b) − G_A(a)) dv`. A commutator `[x, y]` of Haar
//! elements has `g = π(1 − w)`.

use std::f64::consts::PI;

/// Grid resolution of the oracle.
pub const GRID: usize = 1 << 12;

#[derive(Debug, Clone)]
pub struct Law {
    g: Vec<f64>,
    cum: Vec<f64>,
}

fn interp(v: &[f64], w: f64) -> f64 {
    let n = v.len() - 1;
    let x = (w.clamp(0.0, 1.0)) * n as f64;
    let k = (x.floor() as usize).min(n - 1);
    let f = x - k as f64;
    v[k] * (1.0 - f) + v[k + 1] * f
}

fn interval(w: f64, t: f64) -> (f64, f64) {
    ((w - t).abs(), 1.0 - (1.0 - w - t).abs())
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |k| k as f64 / n as f64)
}

fn trapezoid_cumulative(g: &[f64]) -> Vec<f64> {
    let h = 1.0 / (g.len() - 1) as f64;
    let mut cum = vec![0.0; g.len()];
    for k in 1..g.len() {
        cum[k] = cum[k - 1] + h * (g[k - 1] + g[k]) / 2.0;
    }
    cum
}

impl Law {
    pub fn g(&self, w: f64) -> f64 {
        interp(&self.g, w)
    }

    pub fn cumulative(&self, w: f64) -> f64 {
        interp(&self.cum, w)
    }

    /// Total mass `∫ g(w) sin(πw) dw`; 1 for a probability law.
    pub fn mass(&self) -> f64 {
        let s: Vec<f64> = self.g.iter().enumerate().map(|(k, g)| g * (PI * k as f64 / GRID as f64).sin()).collect();
        *trapezoid_cumulative(&s).last().unwrap()
    }

    /// Product of two independent classes; its `g` is constant on an interval.
    pub fn two_classes(t1: f64, t2: f64) -> Law {
        let c = PI / (2.0 * (PI * t1).sin() * (PI * t2).sin());
        let (lo, hi) = interval(t1, t2);
        Law {
            g: grid(GRID).map(|w| if (lo..=hi).contains(&w) { c } else { 0.0 }).collect(),
            cum: grid(GRID).map(|w| c * (w.clamp(lo, hi) - lo)).collect(),
        }
    }

    pub fn commutator() -> Law {
        Law {
            g: grid(GRID).map(|w| PI * (1.0 - w)).collect(),
            cum: grid(GRID).map(|w| PI * (w - w * w / 2.0)).collect(),
        }
    }

    pub fn times_class(&self, t: f64) -> Law {
        let c = PI / (2.0 * (PI * t).sin());
        let g: Vec<f64> = grid(GRID)
            .map(|w| {
                let (a, b) = interval(w, t);
                c * (self.cumulative(b) - self.cumulative(a))
            })
            .collect();
        let cum = trapezoid_cumulative(&g);
        Law { g, cum }
    }

    pub fn times_law(&self, other: &Law) -> Law {
        let h = 1.0 / GRID as f64;
        let g: Vec<f64> = grid(GRID)
            .map(|w| {
                let mut acc = 0.0;
                for (k, v) in grid(GRID).enumerate() {
                    let (a, b) = interval(w, v);
                    let weight = if k == 0 || k == GRID { 0.5 } else { 1.0 };
                    acc += weight * other.g[k] * (self.cumulative(b) - self.cumulative(a));
                }
                PI / 2.0 * acc * h
            })
            .collect();
        let cum = trapezoid_cumulative(&g);
        Law { g, cum }
    }
}

/// Volume of the genus-`genus` moduli space with boundary classes `ts`
/// (noncentral), normalized like the character sum: `(1/π)·∏ 2 sin(πtᵢ)`
/// times the density of the product at the identity relative to Haar.
pub fn su2_volume(genus: usize, ts: &[f64]) -> f64 {
    let n = ts.len();
    assert!(n >= 1, "need at least one boundary class");
    let (head, last) = (&ts[..n - 1], ts[n - 1]);
    let mut commutators = genus;
    let mut law = match head.len() {
        0 => {
            assert!(genus >= 1, "empty moduli space");
            commutators -= 1;
            Law::commutator()
        }
        1 => {
            assert!(genus >= 1, "empty moduli space");
            commutators -= 1;
            Law::commutator().times_class(head[0])
        }
        _ => {
            let mut l = Law::two_classes(head[0], head[1]);
            for &t in &head[2..] {
                l = l.times_class(t);
            }
            l
        }
    };
    for _ in 0..commutators {
        law = law.times_law(&Law::commutator());
    }
    let density = law.g(last) / (2.0 * (PI * last).sin());
    let delta: f64 = ts.iter().map(|t| 2.0 * (PI * t).sin()).product();
    delta * density / PI
}

/// Four classes on the sphere: `2π` times the length of the interval of
/// admissible diagonal classes.
pub fn four_class_polygon_volume(t: [f64; 4]) -> f64 {
    let lo = (t[0] - t[1]).abs().max((t[2] - t[3]).abs());
    let hi = (t[0] + t[1]).min(2.0 - t[0] - t[1]).min(t[2] + t[3]).min(2.0 - t[2] - t[3]);
    2.0 * PI * (hi - lo).max(0.0)
}
