//! Random instances and the property checks for the torsion calculus:
//! direct sums, tensor products, gluing along a subcomplex, and the twisted
//! circle.

use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{chain_torsion, circle_torsion, kunneth_torsion, mv_torsion_compose, BasedChainComplex, GluingModel, HomologyBasis};
use crate::error::Result;
use crate::exec::{self, ExecMode};
use crate::linalg::{q, qi, ratio_to_f64, Mat, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Sub,
    Quotient,
}

fn random_unit_fraction(rng: &mut impl Rng) -> Q {
    let n = rng.gen_range(1..=4i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
    q(n, rng.gen_range(1..=3))
}

/// Random invertible integer matrix, block upper triangular with respect to
/// the split `split + (n − split)`.
fn random_invertible(rng: &mut impl Rng, n: usize, split: usize) -> Mat<Q> {
    loop {
        let m = Mat::from_fn(n, n, |r, c| {
            if r >= split && c < split {
                Q::zero()
            } else {
                qi(rng.gen_range(-2..=2))
            }
        });
        if !m.det(0.0).is_zero() {
            return m;
        }
    }
}

/// A random based complex of length at most `max_top + 1` together with a
/// random subcomplex spanned by its leading basis vectors.
///
/// The complex is a random change of basis of a direct sum of elementary
/// pieces (a single vector, or `ℝ -×c→ ℝ` in adjacent degrees). Pieces are
/// put on the subcomplex or quotient side; a pair may also straddle, with
/// its top in the quotient and its bottom in the subcomplex, which makes the
/// connecting maps of the homology sequence nonzero.
pub fn random_gluing(rng: &mut impl Rng, max_top: usize) -> GluingModel<Q> {
    let top = rng.gen_range(1..=max_top);
    // per degree: list of (side, pair id or None)
    let mut slots: Vec<Vec<(Side, Option<usize>)>> = vec![Vec::new(); top + 1];
    let mut pairs: Vec<(usize, Q)> = Vec::new();
    let side = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { Side::Sub } else { Side::Quotient };
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    for slot in slots.iter_mut() {
        for _ in 0..local.gen_range(0..=1) {
            slot.push((side(&mut local), None));
        }
    }
    for k in 1..=top {
        for _ in 0..local.gen_range(0..=2) {
            let id = pairs.len();
            pairs.push((k, random_unit_fraction(&mut local)));
            let (t, b) = match local.gen_range(0..3) {
                0 => (Side::Sub, Side::Sub),
                1 => (Side::Quotient, Side::Quotient),
                _ => (Side::Quotient, Side::Sub),
            };
            slots[k].push((t, Some(id)));
            slots[k - 1].push((b, Some(id)));
        }
    }
    for slot in slots.iter_mut() {
        slot.shuffle(&mut local);
        slot.sort_by_key(|s| s.0 == Side::Quotient);
    }
    let dims: Vec<usize> = slots.iter().map(Vec::len).collect();
    let sub_dims: Vec<usize> = slots.iter().map(|s| s.iter().filter(|x| x.0 == Side::Sub).count()).collect();
    let change: Vec<Mat<Q>> = (0..=top).map(|k| random_invertible(&mut local, dims[k], sub_dims[k])).collect();
    let boundaries = (1..=top)
        .map(|k| {
            let mut j = Mat::zeros(dims[k - 1], dims[k]);
            for (c, (_, pid)) in slots[k].iter().enumerate() {
                let Some(pid) = *pid else { continue };
                if pairs[pid].0 != k {
                    continue;
                }
                let r = slots[k - 1].iter().position(|s| s.1 == Some(pid)).expect("pair bottom");
                j[(r, c)] = pairs[pid].1.clone();
            }
            let inv = change[k].inverse(0.0).expect("invertible");
            change[k - 1].mul(&j).mul(&inv)
        })
        .collect();
    let whole = BasedChainComplex::new(dims, boundaries).expect("conjugate of a complex is a complex");
    GluingModel::new(whole, sub_dims).expect("block upper triangular by construction")
}

pub fn random_complex(rng: &mut impl Rng, max_top: usize) -> BasedChainComplex<Q> {
    random_gluing(rng, max_top).whole().clone()
}

/// Random rational orthogonal matrix: a Cayley transform block, a fixed
/// block and a reflected block, conjugated by a signed permutation.
pub fn random_orthogonal(rng: &mut impl Rng, max_dim: usize) -> Mat<Q> {
    let rot = rng.gen_range(0..=max_dim.min(3));
    let fixed = rng.gen_range(0..=1);
    let flip = rng.gen_range(0..=1);
    let mut a = Mat::<Q>::zeros(rot, rot);
    for r in 0..rot {
        for c in r + 1..rot {
            let v = random_unit_fraction(rng);
            a[(r, c)] = v.clone();
            a[(c, r)] = -v;
        }
    }
    let id = Mat::identity(rot);
    let cayley = id.sub(&a).mul(&id.add(&a).inverse(0.0).expect("I + A is invertible for skew A"));
    let phi = cayley
        .block_diag(&Mat::identity(fixed))
        .block_diag(&Mat::<Q>::identity(flip).scale(&qi(-1)));
    let d = phi.rows();
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let s = Mat::from_fn(d, d, |r, c| {
        if perm[r] == c {
            if rng.gen_bool(0.5) {
                qi(1)
            } else {
                qi(-1)
            }
        } else {
            Q::zero()
        }
    });
    s.mul(&phi).mul(&s.transpose())
}

/// Outcome of one property over many random instances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub max_relative_error: f64,
}

impl PropertyReport {
    fn from_errors(property: &'static str, errors: &[Option<f64>], tol: f64) -> Self {
        let mut rep = PropertyReport {
            property,
            passed: 0,
            failed: 0,
            max_relative_error: 0.0,
        };
        for e in errors {
            match e {
                Some(e) if *e <= tol => {
                    rep.passed += 1;
                    rep.max_relative_error = rep.max_relative_error.max(*e);
                }
                Some(e) => {
                    rep.failed += 1;
                    rep.max_relative_error = rep.max_relative_error.max(*e);
                }
                None => rep.failed += 1,
            }
        }
        rep
    }
}

fn rel_err(a: &Q, b: &Q) -> f64 {
    if a == b {
        return 0.0;
    }
    let (x, y) = (ratio_to_f64(a), ratio_to_f64(b));
    (x - y).abs() / x.abs().max(y.abs())
}

fn seeded(seed: u64, case: usize, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (salt << 48) ^ (case as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn check_direct_sum(seed: u64, case: usize) -> Result<f64> {
    let mut rng = seeded(seed, case, 1);
    let (c, d) = (random_complex(&mut rng, 3), random_complex(&mut rng, 3));
    let (hc, hd) = (HomologyBasis::harmonic(&c), HomologyBasis::harmonic(&d));
    let whole = chain_torsion(&c.direct_sum(&d), &hc.direct_sum(&hd))?.magnitude;
    let parts = chain_torsion(&c, &hc)?.magnitude * chain_torsion(&d, &hd)?.magnitude;
    Ok(rel_err(&whole, &parts))
}

pub fn check_tensor(seed: u64, case: usize) -> Result<f64> {
    let mut rng = seeded(seed, case, 2);
    let (c, d) = (random_complex(&mut rng, 2), random_complex(&mut rng, 2));
    let (hc, hd) = (HomologyBasis::harmonic(&c), HomologyBasis::harmonic(&d));
    let whole = chain_torsion(&c.tensor(&d), &hc.tensor(&c, &hd, &d))?.magnitude;
    let expected = kunneth_torsion(
        &chain_torsion(&c, &hc)?,
        c.euler_characteristic(),
        &chain_torsion(&d, &hd)?,
        d.euler_characteristic(),
    );
    Ok(rel_err(&whole, &expected.magnitude))
}

/// The middle complex plays `M₁ ⊕ M₂` (split further as a direct sum with an
/// independent complex), the subcomplex plays `N` and the quotient plays `M`.
pub fn check_gluing(seed: u64, case: usize) -> Result<f64> {
    let mut rng = seeded(seed, case, 3);
    let model = random_gluing(&mut rng, 3);
    let extra = random_complex(&mut rng, 2);
    let n = model.sub();
    let m1 = model.whole().clone();
    // append `extra` to both the middle and the quotient
    let mut sub_dims: Vec<usize> = n.dims().to_vec();
    sub_dims.resize(m1.top().max(extra.top()) + 1, 0);
    let glued = GluingModel::new(m1.direct_sum(&extra), sub_dims)?;
    let (hn, h1, h2) = (
        HomologyBasis::harmonic(&n),
        HomologyBasis::harmonic(&m1),
        HomologyBasis::harmonic(&extra),
    );
    let quotient = glued.quotient();
    let hm = HomologyBasis::harmonic(&quotient);
    let mv = glued.mv_scalar(&hn.padded(glued.whole()), &h1.direct_sum(&h2), &hm)?;
    let composed = mv_torsion_compose(
        &chain_torsion(&m1, &h1)?,
        &chain_torsion(&extra, &h2)?,
        &chain_torsion(&n, &hn)?,
        &mv,
    );
    let direct = chain_torsion(&quotient, &hm)?.magnitude;
    Ok(rel_err(&direct, &composed.magnitude))
}

pub fn check_circle(seed: u64, case: usize) -> Result<f64> {
    let mut rng = seeded(seed, case, 4);
    let phi = random_orthogonal(&mut rng, 4);
    let closed = circle_torsion(&phi, 0.0)?;
    let cx = BasedChainComplex::circle(&phi)?;
    let hb = HomologyBasis::new(vec![closed.fixed.clone(), closed.fixed.clone()]);
    let cellular = chain_torsion(&cx, &hb)?.magnitude;
    Ok(rel_err(&cellular, &closed.torsion.magnitude))
}

/// Runs every property on `instances` random cases each. Exact properties
/// must hold with zero error; gluing is held to `1e-9` relative.
pub fn run_suite(seed: u64, instances: usize, mode: ExecMode) -> Vec<PropertyReport> {
    type Check = fn(u64, usize) -> Result<f64>;
    let checks: [(&'static str, Check, f64); 4] = [
        ("direct-sum", check_direct_sum, 0.0),
        ("tensor-product", check_tensor, 0.0),
        ("gluing", check_gluing, 1e-9),
        ("circle", check_circle, 0.0),
    ];
    checks
        .iter()
        .map(|&(name, check, tol)| {
            let errors = exec::map_range(mode, instances, |i| check(seed, i).ok());
            PropertyReport::from_errors(name, &errors, tol)
        })
        .collect()
}
