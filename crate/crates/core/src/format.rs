//! Line-oriented text formats.
//!
//! `.sys`:
//! ```text
//! # comment
//! field p=2 k=2 modulus=1,1,1
//! vars x y z
//! poly x*y + g*z^2
//! poly x + 1
//! ```
//! `.sub` (elements are field literals):
//! ```text
//! ambient 3
//! offset 0 0 1
//! basis 1 0 0
//! basis 0 1 0
//! ```
//! LF or CRLF is accepted; LF is written.

use std::sync::Arc;

use crate::affine::AffineSubspace;
use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::poly::{parse_poly, PolySystem};

/// A parsed `.sys` file: the system and the variable names it used.
#[derive(Clone, Debug, PartialEq)]
pub struct SysFile {
    pub system: PolySystem,
    pub vars: Vec<String>,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

/// Lines with comments stripped, as `(line number, column of first
/// non-blank char, content)`, skipping blank ones.
fn lines(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    text.split('\n').enumerate().filter_map(|(i, raw)| {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        let col = body.len() - trimmed.len() + 1;
        let trimmed = trimmed.trim_end();
        (!trimmed.is_empty()).then_some((i + 1, col, trimmed))
    })
}

fn keyword(content: &str) -> (&str, &str) {
    match content.find(char::is_whitespace) {
        Some(i) => (&content[..i], content[i..].trim_start()),
        None => (content, ""),
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_field_line(line: usize, col: usize, args: &str) -> Result<Arc<FieldSpec>> {
    let (mut p, mut k, mut modulus) = (None, None, None);
    for tok in args.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| syntax(line, col, format!("expected key=value, got `{tok}`")))?;
        let num = |v: &str| v.parse::<u64>().map_err(|_| syntax(line, col, format!("bad number `{v}` for {key}")));
        match key {
            "p" => p = Some(num(val)?),
            "k" => k = Some(num(val)? as u32),
            "modulus" => {
                modulus = Some(
                    val.split(',')
                        .map(|c| c.trim().parse::<u32>().map_err(|_| syntax(line, col, format!("bad modulus coefficient `{c}`"))))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            _ => return Err(syntax(line, col, format!("unknown field key `{key}`"))),
        }
    }
    let p = p.ok_or_else(|| syntax(line, col, "field needs p="))?;
    let k = k.unwrap_or(1);
    let field = match modulus {
        Some(m) => {
            let f = FieldSpec::with_modulus(p, &m)?;
            if f.k() != k {
                return Err(syntax(line, col, format!("modulus has degree {}, but k={k}", f.k())));
            }
            f
        }
        None => FieldSpec::new(p, k)?,
    };
    Ok(field)
}

pub fn parse_sys(text: &str) -> Result<SysFile> {
    let mut field = None;
    let mut vars: Option<Vec<String>> = None;
    let mut polys = Vec::new();
    for (line, col, content) in lines(text) {
        let (kw, rest) = keyword(content);
        let rest_col = col + content.len() - rest.len();
        match kw {
            "field" => {
                if field.is_some() {
                    return Err(syntax(line, col, "duplicate field line"));
                }
                field = Some(parse_field_line(line, rest_col, rest).map_err(|e| at_line(e, line, rest_col))?);
            }
            "vars" => {
                if vars.is_some() {
                    return Err(syntax(line, col, "duplicate vars line"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(syntax(line, col, "vars needs at least one name"));
                }
                for (i, n) in names.iter().enumerate() {
                    if !is_ident(n) {
                        return Err(syntax(line, rest_col, format!("`{n}` is not an identifier")));
                    }
                    if names[..i].contains(n) {
                        return Err(syntax(line, rest_col, format!("duplicate variable `{n}`")));
                    }
                }
                vars = Some(names);
            }
            "poly" => {
                let f = field.as_ref().ok_or_else(|| syntax(line, col, "poly before field line"))?;
                let v = vars.as_ref().ok_or_else(|| syntax(line, col, "poly before vars line"))?;
                let p = parse_poly(rest, f, v).map_err(|e| match e {
                    Error::Syntax { col: c, msg, .. } => syntax(line, rest_col + c - 1, msg),
                    other => syntax(line, rest_col, other.to_string()),
                })?;
                polys.push(p);
            }
            _ => return Err(syntax(line, col, format!("unknown keyword `{kw}`"))),
        }
    }
    if field.is_none() {
        return Err(syntax(1, 1, "missing field line"));
    }
    let vars = vars.ok_or_else(|| syntax(1, 1, "missing vars line"))?;
    if polys.is_empty() {
        return Err(syntax(1, 1, "no poly lines"));
    }
    Ok(SysFile {
        system: PolySystem::new(polys)?,
        vars,
    })
}

fn at_line(e: Error, line: usize, col: usize) -> Error {
    match e {
        Error::Syntax { .. } => e,
        other => syntax(line, col, other.to_string()),
    }
}

pub fn field_line(f: &FieldSpec) -> String {
    if f.k() == 1 {
        format!("field p={} k=1", f.p())
    } else {
        let m: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
        format!("field p={} k={} modulus={}", f.p(), f.k(), m.join(","))
    }
}

pub fn write_sys(sys: &PolySystem, vars: &[String]) -> String {
    let mut out = field_line(sys.field());
    out.push('\n');
    out.push_str("vars ");
    out.push_str(&vars.join(" "));
    out.push('\n');
    for p in sys.format_with(vars) {
        out.push_str("poly ");
        out.push_str(&p);
        out.push('\n');
    }
    out
}

pub fn parse_sub(text: &str, field: &Arc<FieldSpec>) -> Result<AffineSubspace> {
    let mut ambient = None;
    let mut offset = None;
    let mut basis = Vec::new();
    for (line, col, content) in lines(text) {
        let (kw, rest) = keyword(content);
        let rest_col = col + content.len() - rest.len();
        let vector = |n: usize| -> Result<Vec<_>> {
            let v = rest
                .split_whitespace()
                .map(|t| field.parse_element(t).map_err(|e| syntax(line, rest_col, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != n {
                return Err(syntax(line, rest_col, format!("expected {n} coordinates, got {}", v.len())));
            }
            Ok(v)
        };
        match kw {
            "ambient" => {
                if ambient.is_some() {
                    return Err(syntax(line, col, "duplicate ambient line"));
                }
                ambient = Some(rest.parse::<usize>().map_err(|_| syntax(line, rest_col, format!("bad dimension `{rest}`")))?);
            }
            "offset" | "basis" => {
                let n = ambient.ok_or_else(|| syntax(line, col, format!("{kw} before ambient line")))?;
                if kw == "offset" {
                    if offset.is_some() {
                        return Err(syntax(line, col, "duplicate offset line"));
                    }
                    offset = Some(vector(n)?);
                } else {
                    basis.push(vector(n)?);
                }
            }
            _ => return Err(syntax(line, col, format!("unknown keyword `{kw}`"))),
        }
    }
    let n = ambient.ok_or_else(|| syntax(1, 1, "missing ambient line"))?;
    let offset = offset.unwrap_or_else(|| vec![field.zero(); n]);
    AffineSubspace::new(field, offset, basis)
}

pub fn write_sub(l: &AffineSubspace) -> String {
    let f = l.field();
    let vec = |v: &[_]| v.iter().map(|&c| f.format_element(c)).collect::<Vec<_>>().join(" ");
    let mut out = format!("ambient {}\noffset {}\n", l.ambient(), vec(l.offset()));
    for b in l.basis() {
        out.push_str(&format!("basis {}\n", vec(b)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_two, random_system};
    use crate::poly::default_names;

    #[test]
    fn reads_a_system() {
        let text = "# hyperbolic form\r\nfield p=2 k=1\r\nvars x1 x2 x3 x4\r\npoly x1*x2 + x3*x4  # trailing\r\n";
        let s = parse_sys(text).unwrap();
        assert_eq!(s.system.nvars(), 4);
        assert_eq!(s.system.degrees(), &[2]);
        assert_eq!(write_sys(&s.system, &s.vars), "field p=2 k=1\nvars x1 x2 x3 x4\npoly x3*x4 + x1*x2\n");
    }

    #[test]
    fn extension_fields_and_generator() {
        let s = parse_sys("field p=2 k=2 modulus=1,1,1\nvars x y\npoly g*x + y^2\npoly x + 1\n").unwrap();
        assert_eq!(s.system.r(), 2);
        assert_eq!(s.system.q(), 4);
        let text = write_sys(&s.system, &s.vars);
        assert!(text.starts_with("field p=2 k=2 modulus=1,1,1\n"));
        assert_eq!(parse_sys(&text).unwrap(), s);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_sys("field p=3 k=1\nvars x1 x2\npoly x1 + * x2\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 3, col: 11, .. }), "{e:?}");
        let e = parse_sys("field p=3 k=1\nvars x1\npoly x1 + y\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 3, .. }), "{e:?}");
        let e = parse_sys("field p=4 k=1\nvars x\npoly x\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, .. }), "{e:?}");
        assert!(matches!(parse_sys("field p=3\nvars x\n"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_sys("vars x\n"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_sys("field p=3\nvars x x\npoly x\n"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_sys("field p=3\nvars x\nwhat\n"), Err(Error::Syntax { line: 3, col: 1, .. })));
        assert!(matches!(
            parse_sys("field p=2 k=2 modulus=1,0,1\nvars x\npoly x\n"),
            Err(Error::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn systems_round_trip() {
        let f4 = FieldSpec::from_order(4).unwrap();
        let f3 = FieldSpec::new(3, 1).unwrap();
        let systems = [
            random_system(&f4, 3, &[2, 1], 5).unwrap().system,
            random_system(&f3, 5, &[3], 1).unwrap().system,
            example_two(&f3).unwrap().system,
        ];
        for s in systems {
            let names = default_names(s.nvars());
            let text = write_sys(&s, &names);
            let back = parse_sys(&text).unwrap();
            assert_eq!(back.system, s);
            assert_eq!(write_sys(&back.system, &back.vars), text);
        }
    }

    #[test]
    fn subspaces_round_trip() {
        let f4 = FieldSpec::from_order(4).unwrap();
        let l = parse_sub("ambient 3\noffset 1 0:1 0\nbasis 1 1 0\n", &f4).unwrap();
        assert_eq!(l.dim(), 1);
        let text = write_sub(&l);
        assert_eq!(parse_sub(&text, &f4).unwrap(), l);
        assert_eq!(write_sub(&parse_sub(&text, &f4).unwrap()), text);

        let p = parse_sub("ambient 2\noffset 1 1\n", &f4).unwrap();
        assert_eq!(p.dim(), 0);
        assert!(matches!(parse_sub("ambient 2\noffset 1\n", &f4), Err(Error::Syntax { line: 2, .. })));
        assert_eq!(
            parse_sub("ambient 2\nbasis 1 1\nbasis 0:1 0:1\n", &f4).unwrap_err(),
            Error::DependentBasis
        );
    }
}
