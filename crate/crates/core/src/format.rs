//! Line-oriented text format for repair schemes.
//!
//! ```text
//! m d modulus n k
//! point [multiplier]        # n lines
//! c0 c1 .. c_deg            # t lines per point, in point order
//! ```
//!
//! Every number except `m d n k` is lowercase hex. A polynomial line lists
//! coefficients lowest degree first; the zero polynomial is written `0`.
//! The optional second value on a point line is that position's GRS
//! multiplier. Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldTower};
use crate::repair::RepairScheme;
use crate::rs::{PolyF, RsCode};

/// Parses hex with an optional `0x` prefix.
pub fn parse_hex(s: &str) -> Option<u32> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u32::from_str_radix(digits, 16).ok()
}

pub fn write_scheme(scheme: &RepairScheme) -> String {
    let code = scheme.code();
    let tower = code.tower();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {:x} {} {}",
        tower.m(),
        tower.d(),
        tower.field().modulus(),
        code.n(),
        code.k()
    );
    for (i, &p) in code.points().iter().enumerate() {
        match code.multipliers() {
            Some(l) => {
                let _ = writeln!(out, "{p} {}", l[i]);
            }
            None => {
                let _ = writeln!(out, "{p}");
            }
        }
    }
    for set in scheme.polys() {
        for p in set {
            if p.is_zero() {
                out.push_str("0\n");
                continue;
            }
            let line: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    out
}

pub fn parse_scheme(text: &str) -> Result<RepairScheme> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line: usize, message: &str| Error::Parse {
        line,
        message: message.to_string(),
    };

    let (hline, header) = lines.next().ok_or_else(|| err(0, "empty scheme file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 {
        return Err(err(hline, "header must be `m d modulus n k`"));
    }
    let dec = |s: &str| s.parse::<u32>().map_err(|_| err(hline, "expected a decimal number"));
    let (m, d) = (dec(fields[0])?, dec(fields[1])?);
    let modulus = parse_hex(fields[2]).ok_or_else(|| err(hline, "modulus is not hex"))?;
    let (n, k) = (dec(fields[3])? as usize, dec(fields[4])? as usize);
    let tower = FieldTower::new(m, d, Some(modulus))?;
    let f = tower.field().clone();
    if n > f.size() {
        return Err(Error::InvalidDimensions { n, k });
    }

    let elem = |line: usize, s: &str| -> Result<FieldElem> {
        let v = parse_hex(s).ok_or_else(|| err(line, "value is not hex"))?;
        f.elem(v)
    };
    let mut points = Vec::with_capacity(n);
    let mut multipliers = Vec::new();
    for _ in 0..n {
        let (ln, l) = lines.next().ok_or_else(|| err(0, "missing evaluation points"))?;
        let tok: Vec<&str> = l.split_whitespace().collect();
        match tok.as_slice() {
            [p] => points.push(elem(ln, p)?),
            [p, lam] => {
                points.push(elem(ln, p)?);
                multipliers.push((ln, elem(ln, lam)?));
            }
            _ => return Err(err(ln, "point line must hold a point and an optional multiplier")),
        }
    }
    let code = match multipliers.len() {
        0 => RsCode::new(tower.clone(), points, k)?,
        l if l == n => RsCode::grs(tower.clone(), points, k, multipliers.into_iter().map(|(_, v)| v).collect())?,
        _ => {
            let line = multipliers[0].0;
            return Err(err(line, "multipliers must be given for every point or none"));
        }
    };

    let t = tower.t();
    let mut polys = Vec::with_capacity(n);
    for _ in 0..n {
        let mut set = Vec::with_capacity(t);
        for _ in 0..t {
            let (ln, l) = lines.next().ok_or_else(|| err(0, "missing polynomial lines"))?;
            let coeffs = l
                .split_whitespace()
                .map(|s| elem(ln, s))
                .collect::<Result<Vec<_>>>()?;
            set.push(PolyF::from_coeffs(coeffs));
        }
        polys.push(set);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "unexpected trailing content"));
    }
    RepairScheme::new(code, polys)
}

pub fn read_scheme_file(path: &Path) -> Result<RepairScheme> {
    parse_scheme(&std::fs::read_to_string(path)?)
}

pub fn write_scheme_file(path: &Path, scheme: &RepairScheme) -> Result<()> {
    std::fs::write(path, write_scheme(scheme))?;
    Ok(())
}
