//! Line-oriented algebra files.
//!
//! ```text
//! file      := line*
//! line      := statement? comment?
//! comment   := '#' any*
//! statement := 'dim' integer
//!            | 'basis' name+
//!            | name ',' name '=' combo      bracket, first name before second
//!            | name '.' name '=' combo      product, any pair
//! combo     := '0' | ['-'] lterm (('+' | '-') lterm)*
//! lterm     := (rational '*')? name
//! rational  := integer ('/' positive-integer)?
//! name      := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! `dim` comes first. `basis` is optional (default `e1 .. en`) and must
//! precede every entry. Bracket entries are given for pairs in basis order
//! only; the opposite pair is filled in by antisymmetry. Omitted entries are
//! zero, repeated entries are rejected.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rbgs::poly::Rational;
use rbgs::postlie::{zero_table, zero_vector, PostLieAlgebra, Table, Vector};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct AlgebraFileError {
    /// 1-based; one past the last line for errors found at end of input.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> AlgebraFileError {
    AlgebraFileError {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(BigInt),
    Comma,
    Dot,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of line".into(),
        Some(Tok::Name(s)) => format!("'{s}'"),
        Some(Tok::Int(n)) => format!("'{n}'"),
        Some(Tok::Comma) => "','".into(),
        Some(Tok::Dot) => "'.'".into(),
        Some(Tok::Eq) => "'='".into(),
        Some(Tok::Plus) => "'+'".into(),
        Some(Tok::Minus) => "'-'".into(),
        Some(Tok::Star) => "'*'".into(),
        Some(Tok::Slash) => "'/'".into(),
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Tok>, AlgebraFileError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Name(s));
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    s.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Int(s.parse().expect("ascii digits")));
            continue;
        }
        out.push(match c {
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '=' => Tok::Eq,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            _ => return Err(err(line, format!("unexpected character '{c}'"))),
        });
        chars.next();
    }
    Ok(out)
}

struct Builder {
    names: Vec<String>,
    basis_given: bool,
    entries_seen: bool,
    bracket: Table,
    product: Table,
    bracket_set: BTreeSet<(usize, usize)>,
    product_set: BTreeSet<(usize, usize)>,
}

impl Builder {
    fn index(&self, name: &str, line: usize) -> Result<usize, AlgebraFileError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| err(line, format!("unknown basis element '{name}'")))
    }

    fn combination(&self, toks: &[Tok], line: usize) -> Result<Vector, AlgebraFileError> {
        let mut out = zero_vector(self.names.len());
        if let [Tok::Int(z)] = toks {
            if z.is_zero() {
                return Ok(out);
            }
        }
        let mut i = 0;
        let mut sign = Rational::from_integer(1.into());
        if toks.first() == Some(&Tok::Minus) {
            sign = -sign;
            i = 1;
        }
        loop {
            let mut coeff = Rational::from_integer(1.into());
            if let Some(Tok::Int(n)) = toks.get(i) {
                coeff = Rational::from_integer(n.clone());
                i += 1;
                if toks.get(i) == Some(&Tok::Slash) {
                    match toks.get(i + 1) {
                        Some(Tok::Int(d)) if !d.is_zero() => coeff = Rational::new(n.clone(), d.clone()),
                        Some(Tok::Int(_)) => return Err(err(line, "zero denominator")),
                        t => return Err(err(line, format!("expected a denominator, found {}", describe(t)))),
                    }
                    i += 2;
                }
                if toks.get(i) != Some(&Tok::Star) {
                    return Err(err(line, format!("expected '*' after a coefficient, found {}", describe(toks.get(i)))));
                }
                i += 1;
            }
            match toks.get(i) {
                Some(Tok::Name(name)) => {
                    let k = self.index(name, line)?;
                    out[k] += sign * coeff;
                    i += 1;
                }
                t => return Err(err(line, format!("expected a basis element, found {}", describe(t)))),
            }
            match toks.get(i) {
                None => return Ok(out),
                Some(Tok::Plus) => sign = Rational::from_integer(1.into()),
                Some(Tok::Minus) => sign = Rational::from_integer((-1).into()),
                t => return Err(err(line, format!("expected '+', '-' or end of line, found {}", describe(t)))),
            }
            i += 1;
        }
    }

    fn entry(&mut self, toks: &[Tok], line: usize) -> Result<(), AlgebraFileError> {
        let (a, op, b) = match toks {
            [Tok::Name(a), op @ (Tok::Comma | Tok::Dot), Tok::Name(b), Tok::Eq, ..] => (a, op, b),
            _ => {
                return Err(err(
                    line,
                    "expected 'dim N', 'basis ...', 'a, b = ...' or 'a . b = ...'",
                ))
            }
        };
        let (i, j) = (self.index(a, line)?, self.index(b, line)?);
        let value = self.combination(&toks[4..], line)?;
        self.entries_seen = true;
        if *op == Tok::Comma {
            if i == j {
                return Err(err(line, format!("bracket [{a}, {a}] is zero by antisymmetry")));
            }
            if i > j {
                return Err(err(
                    line,
                    format!("bracket entries take pairs in basis order; write '{b}, {a} = ...' with the sign flipped"),
                ));
            }
            if !self.bracket_set.insert((i, j)) {
                return Err(err(line, format!("repeated bracket entry {a}, {b}")));
            }
            self.bracket[j][i] = value.iter().map(|c| -c).collect();
            self.bracket[i][j] = value;
        } else {
            if !self.product_set.insert((i, j)) {
                return Err(err(line, format!("repeated product entry {a} . {b}")));
            }
            self.product[i][j] = value;
        }
        Ok(())
    }
}

fn valid_name(s: &str) -> bool {
    s != "dim" && s != "basis"
}

/// Parses an algebra file; structure is not validated beyond shape.
pub fn parse_algebra(text: &str) -> Result<PostLieAlgebra, AlgebraFileError> {
    let mut b: Option<Builder> = None;
    let mut last = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last = line;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokenize(body, line)?;
        match (toks.first(), &mut b) {
            (None, _) => {}
            (Some(Tok::Name(kw)), None) if kw == "dim" => {
                let n = match &toks[1..] {
                    [Tok::Int(n)] => n
                        .try_into()
                        .map_err(|_| err(line, "dimension out of range"))?,
                    _ => return Err(err(line, "expected 'dim N'")),
                };
                if n == 0 {
                    return Err(err(line, "dimension must be at least 1"));
                }
                b = Some(Builder {
                    names: (1..=n).map(|i| format!("e{i}")).collect(),
                    basis_given: false,
                    entries_seen: false,
                    bracket: zero_table(n),
                    product: zero_table(n),
                    bracket_set: BTreeSet::new(),
                    product_set: BTreeSet::new(),
                });
            }
            (Some(Tok::Name(kw)), Some(_)) if kw == "dim" => return Err(err(line, "repeated 'dim'")),
            (_, None) => return Err(err(line, "the file must start with 'dim N'")),
            (Some(Tok::Name(kw)), Some(bld)) if kw == "basis" => {
                if bld.basis_given {
                    return Err(err(line, "repeated 'basis'"));
                }
                if bld.entries_seen {
                    return Err(err(line, "'basis' must precede all entries"));
                }
                let mut names = Vec::new();
                for t in &toks[1..] {
                    match t {
                        Tok::Name(s) if valid_name(s) => {
                            if names.contains(s) {
                                return Err(err(line, format!("repeated basis name '{s}'")));
                            }
                            names.push(s.clone());
                        }
                        t => return Err(err(line, format!("invalid basis name {}", describe(Some(t))))),
                    }
                }
                if names.len() != bld.names.len() {
                    return Err(err(
                        line,
                        format!("expected {} basis names, got {}", bld.names.len(), names.len()),
                    ));
                }
                bld.names = names;
                bld.basis_given = true;
            }
            (Some(_), Some(bld)) => bld.entry(&toks, line)?,
        }
    }
    let b = b.ok_or_else(|| err(last + 1, "missing 'dim N'"))?;
    PostLieAlgebra::new(b.names, b.bracket, b.product).map_err(|e| err(last + 1, e.to_string()))
}
