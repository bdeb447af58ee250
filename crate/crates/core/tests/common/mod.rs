#![allow(dead_code)]

pub mod adjoint;
pub mod su2;

use num::rational::Rational64;
use rand::Rng;
use seifert_volumes::lie::{AlcoveClass, RootSystem};
use seifert_volumes::seifert::SeifertData;

/// A random rational point of the closed alcove with denominators below `max_den`.
pub fn random_alcove_point(rs: &RootSystem, rng: &mut impl Rng, max_den: i64) -> AlcoveClass {
    let marks = rs.highest_root().to_vec();
    loop {
        let x: Vec<Rational64> = (0..rs.rank())
            .map(|_| {
                let d = rng.gen_range(1..max_den);
                Rational64::new(rng.gen_range(0..=d), d)
            })
            .collect();
        let level: Rational64 = x.iter().zip(&marks).map(|(a, &m)| a * m).sum();
        if level <= Rational64::from_integer(1) {
            return AlcoveClass::new(rs, x).unwrap();
        }
    }
}

/// Random valid Seifert data with `p ≤ max_p`, `|q| ≤ max_q`, `n ≤ max_n`.
pub fn random_seifert(rng: &mut impl Rng, max_genus: i64, max_n: usize, max_p: i64, max_q: i64) -> SeifertData {
    use num::Integer;
    let genus = rng.gen_range(0..=max_genus);
    let n = rng.gen_range(1..=max_n);
    let pairs = (0..n)
        .map(|_| loop {
            let p = rng.gen_range(1..=max_p);
            let q = rng.gen_range(-max_q..=max_q);
            if p.gcd(&q) == 1 {
                break (p, q);
            }
        })
        .collect();
    SeifertData::new(genus, pairs).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
