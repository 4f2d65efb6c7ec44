//! Expressions over the generators `y1..yn, x1..xn` of a free Rota-Baxter
//! algebra.
//!
//! ```text
//! expr      := ['-'] term (('+' | '-') term)*
//! term      := (rational '*')? factor ('*' factor)*
//! factor    := generator | 'R' '(' expr ')' | '(' expr ')'
//! rational  := integer ('/' positive-integer)?
//! generator := ('x' | 'y') index
//! ```
//!
//! Products and sums are left-associative; whitespace is ignored. The
//! optional leading minus lets every printed polynomial parse back.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rbgs::poly::{format_rational, Polynomial, Rational};
use rbgs::words::{Generator, Word};

/// Parsed expression tree. Coefficients of [`Expression::Scale`] are
/// nonnegative when produced by [`parse_expression`]; signs live in
/// [`Expression::Neg`] and [`Expression::Sub`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expression {
    Gen(Generator),
    R(Box<Expression>),
    Mul(Box<Expression>, Box<Expression>),
    Scale(Rational, Box<Expression>),
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("column {column}: unknown generator {name} (dimension {dim})")]
    UnknownGenerator {
        column: usize,
        name: String,
        dim: usize,
    },
}

impl Expression {
    pub fn eval(&self) -> Polynomial {
        match self {
            Expression::Gen(g) => Polynomial::from_word(Word::gen(*g)),
            Expression::R(e) => e.eval().apply_r(),
            Expression::Mul(a, b) => &a.eval() * &b.eval(),
            Expression::Scale(c, e) => e.eval().scale(c),
            Expression::Neg(e) => e.eval().scale(&-Rational::from_integer(1.into())),
            Expression::Add(a, b) => &a.eval() + &b.eval(),
            Expression::Sub(a, b) => &a.eval() - &b.eval(),
        }
    }

    fn is_sum(&self) -> bool {
        matches!(self, Expression::Add(..) | Expression::Sub(..) | Expression::Neg(_))
    }

    fn is_product(&self) -> bool {
        matches!(self, Expression::Gen(_) | Expression::R(_) | Expression::Mul(..))
    }

    fn write_sum(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Add(a, b) | Expression::Sub(a, b) => {
                a.write_sum(f)?;
                f.write_str(if matches!(self, Expression::Add(..)) { " + " } else { " - " })?;
                b.write_term_operand(f)
            }
            Expression::Neg(e) => {
                f.write_str("-")?;
                e.write_term_operand(f)
            }
            e => e.write_term(f),
        }
    }

    fn write_term_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sum() {
            parenthesized(self, f)
        } else {
            self.write_term(f)
        }
    }

    fn write_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Scale(c, e) => {
                write!(f, "{}*", format_rational(c))?;
                e.write_product(f)
            }
            e => e.write_product(f),
        }
    }

    fn write_product(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Mul(a, b) => {
                a.write_product(f)?;
                f.write_str("*")?;
                b.write_factor(f)
            }
            e if e.is_product() => e.write_factor(f),
            e => parenthesized(e, f),
        }
    }

    fn write_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Gen(g) => write!(f, "{g}"),
            Expression::R(e) => {
                f.write_str("R(")?;
                e.write_sum(f)?;
                f.write_str(")")
            }
            e => parenthesized(e, f),
        }
    }
}

fn parenthesized(e: &Expression, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str("(")?;
    e.write_sum(f)?;
    f.write_str(")")
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_sum(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Gen { y: bool, index: String },
    R,
    Open,
    Close,
    Plus,
    Minus,
    Star,
    Slash,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::Gen { y, index } => write!(f, "generator {}{index}", if *y { 'y' } else { 'x' }),
            Tok::R => f.write_str("'R'"),
            Tok::Open => f.write_str("'('"),
            Tok::Close => f.write_str("')'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn syntax(column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        column,
        message: message.into(),
    }
}

/// Tokens with 1-based character columns.
fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let digits = |from: usize| {
            let mut j = from;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            j
        };
        let tok = match c {
            '0'..='9' => {
                let j = digits(i);
                let s: String = chars[i..j].iter().collect();
                i = j;
                out.push((Tok::Int(s.parse().expect("ascii digits")), column));
                continue;
            }
            'x' | 'y' => {
                let j = digits(i + 1);
                if j == i + 1 {
                    return Err(syntax(column, format!("expected an index after '{c}'")));
                }
                let index: String = chars[i + 1..j].iter().collect();
                i = j;
                out.push((Tok::Gen { y: c == 'y', index }, column));
                continue;
            }
            'R' => Tok::R,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            _ => return Err(syntax(column, format!("unexpected character '{c}'"))),
        };
        out.push((tok, column));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (t, column) = self.next();
        if t == want {
            Ok(())
        } else {
            Err(syntax(column, format!("expected {want}, found {t}")))
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.next();
            Expression::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    acc = Expression::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    acc = Expression::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let coeff = if matches!(self.peek(), Tok::Int(_)) {
            let q = self.rational()?;
            self.expect(Tok::Star)?;
            Some(q)
        } else {
            None
        };
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.next();
            acc = Expression::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(match coeff {
            Some(q) => Expression::Scale(q, Box::new(acc)),
            None => acc,
        })
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let (Tok::Int(n), _) = self.next() else {
            unreachable!("caller checked for a number")
        };
        if *self.peek() != Tok::Slash {
            return Ok(Rational::from_integer(n));
        }
        self.next();
        match self.next() {
            (Tok::Int(d), column) if d.is_zero() => Err(syntax(column, "zero denominator")),
            (Tok::Int(d), _) => Ok(Rational::new(n, d)),
            (t, column) => Err(syntax(column, format!("expected a denominator, found {t}"))),
        }
    }

    fn factor(&mut self) -> Result<Expression, ParseError> {
        let (t, column) = self.next();
        match t {
            Tok::Gen { y, index } => {
                let name = format!("{}{index}", if y { 'y' } else { 'x' });
                let unknown = || ParseError::UnknownGenerator {
                    column,
                    name: name.clone(),
                    dim: self.dim,
                };
                let i: u32 = index.parse().map_err(|_| unknown())?;
                if i == 0 || i as usize > self.dim {
                    return Err(unknown());
                }
                Ok(Expression::Gen(if y { Generator::y(i) } else { Generator::x(i) }))
            }
            Tok::R => {
                self.expect(Tok::Open)?;
                let e = self.expr()?;
                self.expect(Tok::Close)?;
                Ok(Expression::R(Box::new(e)))
            }
            Tok::Open => {
                let e = self.expr()?;
                self.expect(Tok::Close)?;
                Ok(e)
            }
            Tok::Int(_) => Err(syntax(column, "a coefficient must be followed by '*' and a factor")),
            t => Err(syntax(column, format!("expected a generator, 'R(' or '(', found {t}"))),
        }
    }
}

/// Parses `text` over `dim` pairs of generators.
pub fn parse_expression(text: &str, dim: usize) -> Result<Expression, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        dim,
    };
    let e = p.expr()?;
    match p.next() {
        (Tok::End, _) => Ok(e),
        (t, column) => Err(syntax(column, format!("unexpected {t}"))),
    }
}

/// True when every coefficient in the tree is nonnegative, i.e. the tree can
/// come out of [`parse_expression`].
pub fn is_canonical(e: &Expression) -> bool {
    match e {
        Expression::Gen(_) => true,
        Expression::Scale(c, e) => !c.is_negative() && is_canonical(e),
        Expression::R(e) | Expression::Neg(e) => is_canonical(e),
        Expression::Mul(a, b) | Expression::Add(a, b) | Expression::Sub(a, b) => {
            is_canonical(a) && is_canonical(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rbgs::poly::ratio;

    fn gen(e: Expression) -> Box<Expression> {
        Box::new(e)
    }

    #[test]
    fn difference_of_r_product_and_scaled_r() {
        let e = parse_expression("R(y1*x1)*x2 - 3/2*R(y1)", 2).unwrap();
        let y1 = Expression::Gen(Generator::y(1));
        let expected = Expression::Sub(
            gen(Expression::Mul(
                gen(Expression::R(gen(Expression::Mul(
                    gen(y1.clone()),
                    gen(Expression::Gen(Generator::x(1))),
                )))),
                gen(Expression::Gen(Generator::x(2))),
            )),
            gen(Expression::Scale(ratio(3, 2), gen(Expression::R(gen(y1))))),
        );
        assert_eq!(e, expected);
        assert_eq!(e.to_string(), "R(y1*x1)*x2 - 3/2*R(y1)");
    }

    #[test]
    fn single_generator() {
        assert_eq!(parse_expression(" y1 ", 1).unwrap(), Expression::Gen(Generator::y(1)));
    }

    #[test]
    fn out_of_range_generator() {
        let err = parse_expression("x3", 2).unwrap_err();
        assert!(matches!(err, ParseError::UnknownGenerator { column: 1, dim: 2, .. }), "{err}");
        assert!(parse_expression("y0", 2).is_err());
        assert!(parse_expression("y99999999999999999999", 2).is_err());
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let cases = [
            ("y1 +", 5),
            ("R y1", 3),
            ("2 y1", 3),
            ("y1 * (x1", 9),
            ("1/0*y1", 3),
            ("y1 @ x1", 4),
            ("y1)", 3),
            ("", 1),
        ];
        for (text, col) in cases {
            match parse_expression(text, 2) {
                Err(ParseError::Syntax { column, .. }) => assert_eq!(column, col, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn products_are_left_associative() {
        let e = parse_expression("y1*y2*x1", 2).unwrap();
        let Expression::Mul(left, _) = &e else { panic!() };
        assert!(matches!(**left, Expression::Mul(..)));
        let r = parse_expression("y1*(y2*x1)", 2).unwrap();
        assert_ne!(e, r);
        assert_eq!(r.to_string(), "y1*(y2*x1)");
        assert_eq!(e.eval(), r.eval());
    }

    #[test]
    fn polynomial_rendering_parses_back() {
        let e = parse_expression("-y1 + 2*(x1 - 1/3*R(y1*x1))*y2", 2).unwrap();
        let p = e.eval();
        let again = parse_expression(&p.to_string(), 2).unwrap();
        assert_eq!(again.eval(), p);
    }
}
