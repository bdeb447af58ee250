//! Plain-text format for based chain complexes.
//!
//! ```text
//! # comment
//! field rational
//! dims 1 2
//! d1
//! 1 -1/2
//! h1 1
//! 1
//! 2
//! ```
//!
//! `dims` lists `dim C_0 … dim C_N`. Section `dk` holds the rows of `∂_k`
//! (`dim C_{k−1}` rows of `dim C_k` entries). Optional sections `hk m` give a
//! homology basis in degree `k` as `dim C_k` rows of `m` entries. Entries are
//! integers, fractions `a/b` or decimals, all read exactly. `field float`
//! marks a complex meant for floating-point evaluation.

use std::fmt::Write as _;
use std::str::FromStr;

use num::{BigInt, Zero};

use super::{BasedChainComplex, HomologyBasis};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scalars {
    Rational,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFile {
    pub scalars: Scalars,
    pub complex: BasedChainComplex<Q>,
    pub homology: Option<HomologyBasis<Q>>,
}

fn parse_err(message: impl Into<String>) -> Error {
    Error::Parse {
        field: "complex",
        message: message.into(),
    }
}

/// Reads `a`, `a/b` or a decimal like `-1.25e-3` exactly.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || parse_err(format!("bad number {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str(&digits).map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Q::from_integer(n * ten.pow(scale as u32))
    } else {
        Q::new(n, ten.pow((-scale) as u32))
    })
}

fn format_rational(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse_complex(text: &str) -> Result<ComplexFile> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .peekable();
    let mut scalars = Scalars::Rational;
    let mut dims: Option<Vec<usize>> = None;
    let mut boundaries: Vec<Option<Mat<Q>>> = Vec::new();
    let mut homology: Vec<Option<Mat<Q>>> = Vec::new();
    let read_rows = |lines: &mut std::iter::Peekable<_>, rows: usize, cols: usize| -> Result<Mat<Q>> {
        let mut m = Mat::zeros(rows, cols);
        for r in 0..rows {
            let line: &str = Iterator::next(lines).ok_or_else(|| parse_err("unexpected end of input"))?;
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != cols {
                return Err(parse_err(format!("expected {cols} entries, got {:?}", line)));
            }
            for (c, e) in entries.iter().enumerate() {
                m[(r, c)] = parse_rational(e)?;
            }
        }
        Ok(m)
    };
    while let Some(line) = lines.next() {
        let mut words = line.split_whitespace();
        let key = words.next().unwrap_or("");
        match key {
            "field" => {
                scalars = match words.next() {
                    Some("rational") => Scalars::Rational,
                    Some("float") => Scalars::Float,
                    other => return Err(parse_err(format!("unknown field {other:?}"))),
                }
            }
            "dims" => {
                let d = words
                    .map(|w| w.parse::<usize>().map_err(|_| parse_err(format!("bad dimension {w:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                if d.is_empty() {
                    return Err(parse_err("dims needs at least one entry"));
                }
                boundaries = vec![None; d.len() - 1];
                homology = vec![None; d.len()];
                dims = Some(d);
            }
            _ if key.starts_with('d') || key.starts_with('h') => {
                let d = dims.as_ref().ok_or_else(|| parse_err("dims must come first"))?;
                let k: usize = key[1..].parse().map_err(|_| parse_err(format!("bad section {key:?}")))?;
                if key.starts_with('d') {
                    if k == 0 || k >= d.len() {
                        return Err(parse_err(format!("no boundary {key}")));
                    }
                    boundaries[k - 1] = Some(read_rows(&mut lines, d[k - 1], d[k])?);
                } else {
                    if k >= d.len() {
                        return Err(parse_err(format!("no degree {k}")));
                    }
                    let m: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| parse_err(format!("{key} needs a column count")))?;
                    homology[k] = Some(read_rows(&mut lines, d[k], m)?);
                }
            }
            _ => return Err(parse_err(format!("unknown line {line:?}"))),
        }
    }
    let dims = dims.ok_or_else(|| parse_err("missing dims"))?;
    let boundaries = boundaries
        .into_iter()
        .enumerate()
        .map(|(k, b)| b.unwrap_or_else(|| Mat::zeros(dims[k], dims[k + 1])))
        .collect();
    let complex = BasedChainComplex::new(dims.clone(), boundaries)?;
    let homology = if homology.iter().any(Option::is_some) {
        Some(HomologyBasis::new(
            homology
                .into_iter()
                .enumerate()
                .map(|(k, h)| h.unwrap_or_else(|| Mat::zeros(dims[k], 0)))
                .collect(),
        ))
    } else {
        None
    };
    Ok(ComplexFile {
        scalars,
        complex,
        homology,
    })
}

pub fn write_complex(file: &ComplexFile) -> String {
    let mut out = String::new();
    let field = match file.scalars {
        Scalars::Rational => "rational",
        Scalars::Float => "float",
    };
    let _ = writeln!(out, "field {field}");
    let dims: Vec<String> = file.complex.dims().iter().map(usize::to_string).collect();
    let _ = writeln!(out, "dims {}", dims.join(" "));
    let write_mat = |out: &mut String, m: &Mat<Q>| {
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r).iter().map(format_rational).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    };
    for k in 1..=file.complex.top() {
        let _ = writeln!(out, "d{k}");
        write_mat(&mut out, &file.complex.boundary(k));
    }
    if let Some(h) = &file.homology {
        for (k, b) in h.bases().iter().enumerate() {
            if b.cols() > 0 {
                let _ = writeln!(out, "h{k} {}", b.cols());
                write_mat(&mut out, b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qi};
    use crate::torsion::chain_torsion;

    #[test]
    fn numbers() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("1.25").unwrap(), q(5, 4));
        assert_eq!(parse_rational("-2e-2").unwrap(), q(-1, 50));
        assert_eq!(parse_rational("7").unwrap(), qi(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn round_trip() {
        let text = "# circle with holonomy -1 plus a fixed line\nfield rational\ndims 2 2\nd1\n-2 0\n0 0\nh0 1\n0\n1\nh1 1\n0\n1\n";
        let f = parse_complex(text).unwrap();
        assert_eq!(chain_torsion(&f.complex, f.homology.as_ref().unwrap()).unwrap().magnitude, q(1, 2));
        let again = parse_complex(&write_complex(&f)).unwrap();
        assert_eq!(again, f);
        assert_eq!(write_complex(&again), write_complex(&f));
    }

    #[test]
    fn errors() {
        assert!(parse_complex("d1\n1\n").is_err());
        assert!(parse_complex("dims 1 1\nd1\n1 2\n").is_err());
        assert!(parse_complex("dims 1 1 1\nd1\n1\nd2\n1\n").is_err());
        assert!(parse_complex("dims 1\nbogus\n").is_err());
    }
}
