//! Generator CSV: one ray per line, comma-separated exact rationals `p/q`,
//! integers or decimals. Blank lines and `#` comments are ignored, as is a
//! leading header row of column names.

use std::path::Path;

use num_rational::Rational64;
use num_traits::Zero;

use super::{GeneratorSet, Source};
use crate::error::{Error, Result};
use crate::pseudogeometry::Ray;

fn parse_number(tok: &str) -> Option<Rational64> {
    let tok = tok.trim();
    if let Some((p, q)) = tok.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        return (q != 0).then(|| Rational64::new(p, q));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 15 {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().ok()?;
        let num = int_part.abs().checked_mul(den)?.checked_add(f)?;
        return Some(Rational64::new(if neg { -num } else { num }, den));
    }
    tok.parse::<i64>().ok().map(Rational64::from_integer)
}

fn is_header(line: &str) -> bool {
    line.split(',').all(|t| t.trim().starts_with(|c: char| c.is_ascii_alphabetic()))
}

/// `w0,w1,...` for length `n`.
pub fn header_row(n: usize) -> String {
    (0..n).map(|i| format!("w{i}")).collect::<Vec<_>>().join(",")
}

/// Parses generator CSV text. All rows must share one arity.
pub fn parse_generators(text: &str, matrix_id: &str) -> Result<GeneratorSet> {
    let mut rays = Vec::new();
    let mut arity = None;
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if arity.is_none() && rays.is_empty() && is_header(line) {
            continue;
        }
        let err = |reason: String| Error::GeneratorFormat { line: ln + 1, reason };
        let coords = line
            .split(',')
            .map(|t| parse_number(t).ok_or_else(|| err(format!("bad number {:?}", t.trim()))))
            .collect::<Result<Vec<_>>>()?;
        match arity {
            None => arity = Some(coords.len()),
            Some(a) if a != coords.len() => {
                return Err(err(format!("expected {a} entries, found {}", coords.len())))
            }
            _ => {}
        }
        if coords.iter().any(|c| *c < Rational64::zero()) {
            return Err(err("negative entry".into()));
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(err("all-zero line".into()));
        }
        rays.push(Ray::new(coords).map_err(|e| err(e.to_string()))?);
    }
    Ok(GeneratorSet::new(rays, Source::Imported, matrix_id))
}

pub fn read_generators(path: impl AsRef<Path>) -> Result<GeneratorSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_generators(&text, &path.display().to_string())
}

pub fn render_generators(set: &GeneratorSet) -> String {
    let mut out = String::new();
    if let Some(r) = set.rays().first() {
        out += &header_row(r.dim());
        out.push('\n');
    }
    for r in set.rays() {
        out += &r.to_string();
        out.push('\n');
    }
    out
}

pub fn write_generators(set: &GeneratorSet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_generators(set))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = parse_generators("1,1,0\n0,1,1\n", "t").unwrap();
        assert_eq!(s.len(), 2);
        let s = parse_generators("1/2,1,0", "t").unwrap();
        assert_eq!(s.rays()[0].to_string(), "1,2,0");
        let s = parse_generators("0.25, 0.5 ,0", "t").unwrap();
        assert_eq!(s.rays()[0].to_string(), "1,2,0");
        assert!(matches!(
            parse_generators("-1,0,0", "t"),
            Err(Error::GeneratorFormat { line: 1, .. })
        ));
        assert!(matches!(parse_generators("1,1\n0,0", "t"), Err(Error::GeneratorFormat { line: 2, .. })));
        assert!(matches!(parse_generators("1,1\n1,1,1", "t"), Err(Error::GeneratorFormat { line: 2, .. })));
        assert!(parse_generators("1,x", "t").is_err());
        let s = parse_generators("# c\nw0,w1,w2\n1,1,0\n", "t").unwrap();
        assert_eq!(s.len(), 1);
        assert!(parse_generators("1,1,0\nw0,w1,w2\n", "t").is_err());
    }

    #[test]
    fn file_roundtrip() {
        let dir = std::env::temp_dir().join(format!("pseudocone-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.csv");
        let s = parse_generators("3,1/2,0\n1,1,1\n", "t").unwrap();
        write_generators(&s, &path).unwrap();
        let back = read_generators(&path).unwrap();
        assert_eq!(back.rays(), s.rays());
        std::fs::remove_dir_all(dir).ok();
    }

    proptest! {
        #[test]
        fn render_parse_identity(rows in prop::collection::vec(prop::collection::vec((0i64..20, 1i64..9), 5), 1..8)) {
            let text: String = rows
                .iter()
                .filter(|r| r.iter().any(|(p, _)| *p > 0))
                .map(|r| r.iter().map(|(p, q)| format!("{p}/{q}")).collect::<Vec<_>>().join(",") + "\n")
                .collect();
            prop_assume!(!text.is_empty());
            let s = parse_generators(&text, "t").unwrap();
            let again = parse_generators(&render_generators(&s), "t").unwrap();
            prop_assert_eq!(s.rays(), again.rays());
        }
    }
}
