//! Exact-rational linear combinations of bracketed words.

use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::words::{StarWord, Word};

/// Ground field: arbitrary-precision rationals.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `3`, `-1/2`, ... (the canonical reduced form).
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `a + b`, skipping the gcd reduction when both are integers.
fn add_into(a: &mut Rational, b: &Rational) {
    if a.is_integer() && b.is_integer() {
        *a = Rational::from_integer(a.numer() + b.numer());
    } else {
        *a += b;
    }
}

/// `a * b` with the same shortcut.
fn mul(a: &Rational, b: &Rational) -> Rational {
    if a.is_integer() && b.is_integer() {
        Rational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

/// Returned by [`Polynomial::leading`] and [`Polynomial::monic`] on zero.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("the zero polynomial has no leading word")]
pub struct ZeroPolynomial;

/// A finite linear combination of words with nonzero rational coefficients.
///
/// Terms are kept sorted by the monomial order, so the leading word is the
/// last key.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Word, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn from_word(w: Word) -> Self {
        Polynomial::term(rat(1), w)
    }

    pub fn term(c: Rational, w: Word) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Rational)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending word order.
    pub fn iter(&self) -> btree_map::Iter<'_, Word, Rational> {
        self.terms.iter()
    }

    /// Terms in descending word order (leading term first).
    pub fn iter_desc(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                add_into(e.get_mut(), &c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Rational, other: &Polynomial) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), mul(c, d));
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(w, d)| (w.clone(), mul(c, d))).collect(),
        }
    }

    /// Applies the linear operator `R` termwise, without reducing.
    pub fn apply_r(&self) -> Polynomial {
        // wrap_r is strictly monotone, so the map stays sorted
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.wrap_r(), c.clone()))
                .collect(),
        }
    }

    /// Right multiplication by a single word.
    pub fn mul_word(&self, w: &Word) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(u, c)| (u.concat(w), c.clone()))
                .collect(),
        }
    }

    /// Left multiplication by a single word.
    pub fn word_mul(w: &Word, p: &Polynomial) -> Polynomial {
        Polynomial {
            terms: p
                .terms
                .iter()
                .map(|(u, c)| (w.concat(u), c.clone()))
                .collect(),
        }
    }

    /// `q|_self`, extended linearly.
    pub fn substitute_into(&self, q: &StarWord) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(u, c)| (q.substitute(u), c.clone()))
                .collect(),
        }
    }

    pub fn leading(&self) -> Result<&Word, ZeroPolynomial> {
        self.terms.keys().next_back().ok_or(ZeroPolynomial)
    }

    pub fn leading_coeff(&self) -> Result<&Rational, ZeroPolynomial> {
        self.terms.values().next_back().ok_or(ZeroPolynomial)
    }

    pub fn monic(&self) -> Result<Polynomial, ZeroPolynomial> {
        let lc = self.leading_coeff()?;
        if lc.is_one() {
            return Ok(self.clone());
        }
        Ok(self.scale(&lc.recip()))
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_ok_and(|c| c.is_one())
    }

    pub fn max_deg_r(&self) -> u32 {
        self.terms.keys().map(Word::deg_r).max().unwrap_or(0)
    }
}

impl From<Word> for Polynomial {
    fn from(w: Word) -> Self {
        Polynomial::from_word(w)
    }
}

impl<'a> Add<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &'a Polynomial) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &'a Polynomial) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c.clone());
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;

    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl<'a> Mul<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (u, c) in &self.terms {
            for (v, d) in &rhs.terms {
                out.add_term(u.concat(v), mul(c, d));
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.iter_desc().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if !abs.is_one() {
                write!(f, "{}*", format_rational(&abs))?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}
