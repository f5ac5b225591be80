//! Variety spec files.
//!
//! ```text
//! # nodal cubic with an avoided point
//! 3 1 2
//! [Z]
//! label: nodal cubic
//! dim: 1
//! gen: x1^2*x2 - x0^3 - x0^2*x2
//! [S]
//! point: 1, 0, 0
//! point@2: [0,1], 1, 0
//! jet: 0, 1, 0
//! [X0]
//! point: 0, 0, 1
//! ```
//!
//! The header is `p k n`. Lines before the first section header belong to
//! `[Z]`. Inside a section, `gen:` adds a generator, `point:` an explicit
//! closed point, `jet:` a point with its first-order neighbourhood, and the
//! suffix `@e` gives coordinates in `F_{q^e}` (digit tuples over `F_p`).
//! `[X0]` describes what is removed: `X0 = P^n - [X0]`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{make_field, Extension, Field};
use crate::poly::MPoly;

use super::{exact_degree, ClosedPoint, PointSpec, ProjPoint, SubschemeSpec};

#[derive(Clone, Debug)]
pub struct SpecFile {
    pub field: Field,
    pub n: usize,
    pub z: Option<SubschemeSpec>,
    pub s: Option<SubschemeSpec>,
    /// The removed locus; `X0` is its complement.
    pub x0_removed: Option<SubschemeSpec>,
}

impl PartialEq for SpecFile {
    fn eq(&self, other: &Self) -> bool {
        self.field.p() == other.field.p()
            && self.field.k() == other.field.k()
            && self.n == other.n
            && self.z == other.z
            && self.s == other.s
            && self.x0_removed == other.x0_removed
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Z,
    S,
    X0,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Z => "Z",
            Section::S => "S",
            Section::X0 => "X0",
        }
    }
}

pub fn parse_spec_file(path: &std::path::Path) -> Result<SpecFile> {
    parse_spec(&std::fs::read_to_string(path)?)
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let mut header: Option<(Field, usize)> = None;
    let mut current = Section::Z;
    let mut sections: Vec<(Section, SubschemeSpec)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let body = raw.split('#').next().unwrap();
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        let Some((field, n)) = header.clone() else {
            header = Some(parse_header(trimmed, line_no, indent)?);
            continue;
        };
        let nvars = n + 1;
        if trimmed.starts_with('[') {
            current = match trimmed {
                "[Z]" => Section::Z,
                "[S]" => Section::S,
                "[X0]" => Section::X0,
                _ => return Err(Error::parse(line_no, indent + 1, format!("unknown section {trimmed}"))),
            };
            continue;
        }
        let spec = match sections.iter_mut().find(|(s, _)| *s == current) {
            Some((_, spec)) => spec,
            None => {
                sections.push((current, SubschemeSpec::empty(current.name(), nvars)));
                &mut sections.last_mut().unwrap().1
            }
        };
        let (key, value) = trimmed
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, indent + 1, "expected 'key: value'"))?;
        let value_col = indent + key.len() + 2 + (value.len() - value.trim_start().len());
        let value = value.trim();
        let (kind, level) = match key.trim().split_once('@') {
            Some((k, e)) => {
                let e: u32 = e
                    .trim()
                    .parse()
                    .ok()
                    .filter(|&e| e >= 1)
                    .ok_or_else(|| Error::parse(line_no, indent + k.len() + 2, "bad level"))?;
                (k.trim(), e)
            }
            None => (key.trim(), 1),
        };
        match kind {
            "label" => spec.label = value.to_string(),
            "dim" => {
                spec.dim = Some(
                    value
                        .parse()
                        .map_err(|_| Error::parse(line_no, value_col, "expected an integer"))?,
                )
            }
            "gen" => {
                let g = MPoly::parse(&field, nvars, value).map_err(|e| shift(e, line_no, value_col - 1))?;
                spec.generators.push(g);
            }
            "point" | "jet" => {
                let point = parse_point(&field, nvars, level, value, line_no, value_col)?;
                spec.points.push(PointSpec {
                    point,
                    first_order: kind == "jet",
                });
            }
            _ => return Err(Error::parse(line_no, indent + 1, format!("unknown key {kind:?}"))),
        }
    }
    let (field, n) = header.ok_or_else(|| Error::parse(1, 1, "missing header 'p k n'"))?;
    let mut out = SpecFile {
        field,
        n,
        z: None,
        s: None,
        x0_removed: None,
    };
    for (sec, spec) in sections {
        match sec {
            Section::Z => out.z = Some(spec),
            Section::S => out.s = Some(spec),
            Section::X0 => out.x0_removed = Some(spec),
        }
    }
    Ok(out)
}

fn shift(e: Error, line: usize, offset: usize) -> Error {
    match e {
        Error::Parse { col, msg, .. } => Error::Parse {
            line,
            col: col + offset,
            msg,
        },
        other => other,
    }
}

fn parse_header(s: &str, line: usize, indent: usize) -> Result<(Field, usize)> {
    let nums: Vec<&str> = s.split_whitespace().collect();
    if nums.len() != 3 {
        return Err(Error::parse(line, indent + 1, "header must be 'p k n'"));
    }
    let mut vals = [0u32; 3];
    for (i, t) in nums.iter().enumerate() {
        vals[i] = t
            .parse()
            .map_err(|_| Error::parse(line, indent + 1, format!("bad header number {t:?}")))?;
    }
    if vals[2] == 0 {
        return Err(Error::parse(line, indent + 1, "n must be at least 1"));
    }
    let field = make_field(vals[0], vals[1]).map_err(|e| Error::parse(line, indent + 1, e.to_string()))?;
    Ok((field, vals[2] as usize))
}

fn parse_point(base: &Field, nvars: usize, level: u32, s: &str, line: usize, col: usize) -> Result<ClosedPoint> {
    let ext = base.extension(level).map_err(|e| Error::parse(line, col, e.to_string()))?;
    let mut coords = Vec::new();
    let mut rest = s;
    let mut offset = col;
    loop {
        let t = rest.trim_start();
        offset += rest.len() - t.len();
        rest = t;
        let (tok, tail) = if rest.starts_with('[') {
            let end = rest
                .find(']')
                .ok_or_else(|| Error::parse(line, offset, "unterminated digit tuple"))?;
            (&rest[..=end], &rest[end + 1..])
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            (&rest[..end], &rest[end..])
        };
        coords.push(parse_coord(&ext, tok.trim(), line, offset)?);
        offset += tok.len();
        let t = tail.trim_start();
        offset += tail.len() - t.len();
        if t.is_empty() {
            break;
        }
        if !t.starts_with(',') {
            return Err(Error::parse(line, offset, "expected ','"));
        }
        rest = &t[1..];
        offset += 1;
    }
    if coords.len() != nvars {
        return Err(Error::parse(
            line,
            col,
            format!("expected {nvars} coordinates, got {}", coords.len()),
        ));
    }
    let p = ProjPoint::normalize(&ext, &coords).ok_or_else(|| Error::parse(line, col, "all coordinates are zero"))?;
    let e = exact_degree(&ext, p.coords());
    if e != level {
        return Err(Error::parse(
            line,
            col,
            format!("point has degree {e}, not {level}; write it at level {e}"),
        ));
    }
    ClosedPoint::from_point(base, &p)
}

fn parse_coord(ext: &Extension, tok: &str, line: usize, col: usize) -> Result<u32> {
    let err = |m: String| Error::parse(line, col, m);
    if let Some(inner) = tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let digits = inner
            .split(',')
            .map(|d| d.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| err(format!("bad digit tuple {tok}")))?;
        ext.field.from_digits(&digits).map_err(|e| err(e.to_string()))
    } else {
        let v: u64 = tok.parse().map_err(|_| err(format!("bad coordinate {tok:?}")))?;
        Ok((v % ext.field.p() as u64) as u32)
    }
}

/// Canonical text; `parse_spec(to_text(s)) == s` and the text is a fixed
/// point of parse-then-print.
pub fn to_text(spec: &SpecFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", spec.field.p(), spec.field.k(), spec.n);
    for (name, sec) in [("Z", &spec.z), ("S", &spec.s), ("X0", &spec.x0_removed)] {
        let Some(sec) = sec else { continue };
        let _ = writeln!(out, "[{name}]");
        if sec.label != name {
            let _ = writeln!(out, "label: {}", sec.label);
        }
        if let Some(d) = sec.dim {
            let _ = writeln!(out, "dim: {d}");
        }
        for g in &sec.generators {
            let _ = writeln!(out, "gen: {g}");
        }
        for p in &sec.points {
            let key = if p.first_order { "jet" } else { "point" };
            let e = p.point.degree();
            let ext = spec.field.extension(e).expect("validated level");
            let coords: Vec<String> = p
                .point
                .representative()
                .coords()
                .iter()
                .map(|&c| format_coord(&ext, c))
                .collect();
            if e == 1 {
                let _ = writeln!(out, "{key}: {}", coords.join(", "));
            } else {
                let _ = writeln!(out, "{key}@{e}: {}", coords.join(", "));
            }
        }
    }
    out
}

fn format_coord(ext: &Extension, c: u32) -> String {
    if c < ext.field.p() {
        c.to_string()
    } else {
        let d: Vec<String> = ext.field.digits(c).iter().map(|x| x.to_string()).collect();
        format!("[{}]", d.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODAL: &str = "\
# nodal cubic
3 1 2
label: nodal cubic
gen: x1^2*x2 - x0^3 - x0^2*x2
[S]
point: 1, 0, 0
point@2: [0,1], 1, 0
jet: 0, 2, 1
[X0]
point: 0, 0, 1
";

    #[test]
    fn round_trip_is_idempotent() {
        let s = parse_spec(NODAL).unwrap();
        let z = s.z.as_ref().unwrap();
        assert_eq!(z.generators.len(), 1);
        assert_eq!(z.generators[0].degree(), 3);
        assert_eq!(s.s.as_ref().unwrap().points.len(), 3);
        let t = to_text(&s);
        let s2 = parse_spec(&t).unwrap();
        assert_eq!(s, s2);
        assert_eq!(to_text(&s2), t);
    }

    #[test]
    fn errors_carry_locations() {
        match parse_spec("2 1 2\ngen: x0^ + x1\n") {
            Err(Error::Parse { line: 2, col, .. }) => assert_eq!(col, 10),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_spec("2 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_spec("2 1 2\npoint@2: 1, 0, 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_spec("4 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_spec("2 1 2\n[W]\n"), Err(Error::Parse { line: 2, .. })));
    }
}
