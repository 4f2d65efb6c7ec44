//! Bracketed words of the free Rota-Baxter associative algebra.
//!
//! A [`Word`] is a nonempty sequence of letters; a letter is either a
//! generator (`y_i` or `x_i`) or an R-letter `R(w)` wrapping another word.
//! Words are ordered first by R-degree (total number of `R` symbols at every
//! depth), then deg-lex over the alphabet of generators and R-letters, where
//! every generator precedes every R-letter and R-letters compare by their
//! arguments. This order is monomial: placing two words into the same
//! [`StarWord`] context preserves their comparison.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// The two generator kinds of the doubled alphabet. `Y` sorts before `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Y,
    X,
}

impl Kind {
    pub fn symbol(self) -> char {
        match self {
            Kind::Y => 'y',
            Kind::X => 'x',
        }
    }
}

/// A generator `y_i` / `x_i` with a 1-based index.
///
/// The derived order is the alphabet order: all `y` before all `x`, then by
/// index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: Kind,
    pub index: u32,
}

impl Generator {
    pub fn y(index: u32) -> Self {
        Generator { kind: Kind::Y, index }
    }

    pub fn x(index: u32) -> Self {
        Generator { kind: Kind::X, index }
    }

    /// Position in the list `y1..yn, x1..xn`.
    pub fn ordinal(self, n: usize) -> usize {
        let i = self.index as usize - 1;
        match self.kind {
            Kind::Y => i,
            Kind::X => n + i,
        }
    }

    pub fn from_ordinal(ordinal: usize, n: usize) -> Self {
        if ordinal < n {
            Generator::y(ordinal as u32 + 1)
        } else {
            Generator::x((ordinal - n) as u32 + 1)
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.index)
    }
}

/// One letter of the alphabet `X_inf`: a generator or an R-letter.
///
/// Variant order matters: the derived `Ord` puts generators before R-letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Gen(Generator),
    R(Word),
}

impl Letter {
    pub fn deg_r(&self) -> u32 {
        match self {
            Letter::Gen(_) => 0,
            Letter::R(w) => w.deg_r + 1,
        }
    }

    pub fn as_gen(&self) -> Option<Generator> {
        match self {
            Letter::Gen(g) => Some(*g),
            Letter::R(_) => None,
        }
    }

    pub fn as_r(&self) -> Option<&Word> {
        match self {
            Letter::Gen(_) => None,
            Letter::R(w) => Some(w),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Gen(g) => write!(f, "{g}"),
            Letter::R(w) => write!(f, "R({w})"),
        }
    }
}

/// A basic bracketed word. Immutable and cheap to clone.
#[derive(Clone)]
pub struct Word {
    letters: Arc<[Letter]>,
    deg_r: u32,
    /// Structural hash, fixed at construction.
    fingerprint: u64,
}

fn mix(h: u64, v: u64) -> u64 {
    (h.rotate_left(5) ^ v).wrapping_mul(0x517c_c1b7_2722_0a95)
}

fn fingerprint(letters: &[Letter]) -> u64 {
    letters.iter().fold(letters.len() as u64, |h, l| {
        mix(
            h,
            match l {
                Letter::Gen(g) => ((g.kind as u64) << 32) | g.index as u64,
                Letter::R(w) => mix(u64::MAX, w.fingerprint),
            },
        )
    })
}

impl Word {
    /// Builds a word from its top-level letters; `None` when `letters` is empty.
    pub fn new(letters: Vec<Letter>) -> Option<Word> {
        if letters.is_empty() {
            return None;
        }
        Some(Word::from_nonempty(letters))
    }

    pub(crate) fn from_nonempty(letters: Vec<Letter>) -> Word {
        debug_assert!(!letters.is_empty());
        let deg_r = letters.iter().map(Letter::deg_r).sum();
        Word {
            fingerprint: fingerprint(&letters),
            letters: letters.into(),
            deg_r,
        }
    }

    pub fn gen(g: Generator) -> Word {
        Word::from_nonempty(vec![Letter::Gen(g)])
    }

    pub fn y(index: u32) -> Word {
        Word::gen(Generator::y(index))
    }

    pub fn x(index: u32) -> Word {
        Word::gen(Generator::x(index))
    }

    /// Word over generators only.
    pub fn from_gens(gens: &[Generator]) -> Option<Word> {
        Word::new(gens.iter().map(|g| Letter::Gen(*g)).collect())
    }

    /// The single-letter word `R(self)`.
    pub fn wrap_r(&self) -> Word {
        let letters = vec![Letter::R(self.clone())];
        Word {
            fingerprint: fingerprint(&letters),
            letters: letters.into(),
            deg_r: self.deg_r + 1,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word {
            fingerprint: fingerprint(&letters),
            letters: letters.into(),
            deg_r: self.deg_r + other.deg_r,
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Length over the alphabet `X_inf` (top-level letter count).
    pub fn deg(&self) -> usize {
        self.letters.len()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total number of `R` symbols at every nesting depth.
    pub fn deg_r(&self) -> u32 {
        self.deg_r
    }

    /// `Some(kind)` when the word has no R-letters and all its generators
    /// are of one kind.
    pub fn pure_kind(&self) -> Option<Kind> {
        if self.deg_r != 0 {
            return None;
        }
        let first = self.letters[0].as_gen()?.kind;
        self.letters
            .iter()
            .all(|l| matches!(l, Letter::Gen(g) if g.kind == first))
            .then_some(first)
    }

    pub fn is_pure(&self) -> bool {
        self.pure_kind().is_some()
    }

    /// Membership in `RS'`: neither a pure X-word nor a pure Y-word.
    pub fn is_mixed(&self) -> bool {
        !self.is_pure()
    }

    /// True when `deg_r <= max_deg_r` and every letter sequence, at every
    /// nesting depth, has length at most `max_deg`.
    pub fn fits(&self, max_deg: usize, max_deg_r: u32) -> bool {
        self.deg_r <= max_deg_r && self.levels_within(max_deg)
    }

    fn levels_within(&self, max_deg: usize) -> bool {
        self.len() <= max_deg
            && self.letters.iter().all(|l| match l {
                Letter::Gen(_) => true,
                Letter::R(w) => w.levels_within(max_deg),
            })
    }

    /// Largest generator index used anywhere in the word.
    pub fn max_index(&self) -> u32 {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Gen(g) => g.index,
                Letter::R(w) => w.max_index(),
            })
            .max()
            .unwrap_or(0)
    }

    /// Every context `q` with `q|_p == self`, outer-leftmost first.
    pub fn occurrences(&self, p: &Word) -> Vec<StarWord> {
        let mut out = Vec::new();
        let n = p.len();
        if n <= self.len() {
            for start in 0..=self.len() - n {
                if self.letters[start..start + n] == p.letters[..] {
                    out.push(StarWord::new(
                        self.letters[..start].to_vec(),
                        Center::Hole,
                        self.letters[start + n..].to_vec(),
                    ));
                }
            }
        }
        for (i, letter) in self.letters.iter().enumerate() {
            if let Letter::R(inner) = letter {
                if inner.deg_r < p.deg_r {
                    continue;
                }
                for q in inner.occurrences(p) {
                    out.push(StarWord::new(
                        self.letters[..i].to_vec(),
                        Center::R(Box::new(q)),
                        self.letters[i + 1..].to_vec(),
                    ));
                }
            }
        }
        out
    }

    /// Proper top-level overlaps `w = u*mu = nu*v` with `mu`, `nu` nonempty,
    /// i.e. `deg(w) < deg(u) + deg(v)` and neither word contains the other at
    /// the seam. Ordered by increasing overlap length.
    pub fn overlaps(u: &Word, v: &Word) -> Vec<Overlap> {
        let mut out = Vec::new();
        let max_k = u.len().min(v.len());
        for k in 1..max_k {
            if u.letters[u.len() - k..] == v.letters[..k] {
                let mu = Word::from_nonempty(v.letters[k..].to_vec());
                let nu = Word::from_nonempty(u.letters[..u.len() - k].to_vec());
                let w = u.concat(&mu);
                out.push(Overlap { mu, nu, w });
            }
        }
        out
    }

    /// Replaces the window `[start, start + len)` of the letter sequence
    /// reached by descending through the R-letters at `path`.
    pub(crate) fn splice(&self, path: &[usize], start: usize, len: usize, with: &Word) -> Word {
        match path.split_first() {
            None => {
                let mut letters = Vec::with_capacity(self.len() - len + with.len());
                letters.extend_from_slice(&self.letters[..start]);
                letters.extend_from_slice(&with.letters);
                letters.extend_from_slice(&self.letters[start + len..]);
                Word::from_nonempty(letters)
            }
            Some((&i, rest)) => {
                let inner = self.letters[i].as_r().expect("path runs through R-letters");
                let replaced = inner.splice(rest, start, len, with);
                let mut letters = self.letters.to_vec();
                letters[i] = Letter::R(replaced);
                Word::from_nonempty(letters)
            }
        }
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.letters, &other.letters)
            || (self.fingerprint == other.fingerprint
                && self.deg_r == other.deg_r
                && self.letters == other.letters)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.fingerprint);
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.letters, &other.letters) {
            return Ordering::Equal;
        }
        self.deg_r
            .cmp(&other.deg_r)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.letters.iter().cmp(other.letters.iter()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Result of [`Word::overlaps`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub mu: Word,
    pub nu: Word,
    pub w: Word,
}

/// What sits at the hole's level of a [`StarWord`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Center {
    Hole,
    R(Box<StarWord>),
}

/// A bracketed word with exactly one placeholder `_`, possibly nested inside
/// R-letters. `left` and `right` are the sibling letters around the
/// placeholder (or around the R-letter that contains it).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarWord {
    left: Vec<Letter>,
    center: Center,
    right: Vec<Letter>,
}

impl StarWord {
    pub fn new(left: Vec<Letter>, center: Center, right: Vec<Letter>) -> Self {
        StarWord {
            left,
            center,
            right,
        }
    }

    /// The bare placeholder.
    pub fn hole() -> Self {
        StarWord::new(Vec::new(), Center::Hole, Vec::new())
    }

    /// `R(q)` as a context.
    pub fn wrap_r(self) -> Self {
        StarWord::new(Vec::new(), Center::R(Box::new(self)), Vec::new())
    }

    /// `left * q * right` as a context.
    pub fn between(left: Option<&Word>, q: StarWord, right: Option<&Word>) -> Self {
        let mut out = q;
        if let Some(l) = left {
            let mut letters = l.letters().to_vec();
            letters.append(&mut out.left);
            out.left = letters;
        }
        if let Some(r) = right {
            out.right.extend_from_slice(r.letters());
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.left.is_empty() && self.right.is_empty() && self.center == Center::Hole
    }

    /// Depth of the placeholder (number of enclosing R-letters).
    pub fn depth(&self) -> usize {
        match &self.center {
            Center::Hole => 0,
            Center::R(inner) => 1 + inner.depth(),
        }
    }

    /// `q|_u`: splices `u`'s letters in place of the placeholder.
    pub fn substitute(&self, u: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.left.len() + u.len() + self.right.len());
        letters.extend_from_slice(&self.left);
        match &self.center {
            Center::Hole => letters.extend_from_slice(u.letters()),
            Center::R(inner) => letters.push(Letter::R(inner.substitute(u))),
        }
        letters.extend_from_slice(&self.right);
        Word::from_nonempty(letters)
    }

    /// Context for the window `[start, start + len)` reached through `path`.
    pub(crate) fn from_site(w: &Word, path: &[usize], start: usize, len: usize) -> StarWord {
        match path.split_first() {
            None => StarWord::new(
                w.letters[..start].to_vec(),
                Center::Hole,
                w.letters[start + len..].to_vec(),
            ),
            Some((&i, rest)) => {
                let inner = w.letters[i].as_r().expect("path runs through R-letters");
                StarWord::new(
                    w.letters[..i].to_vec(),
                    Center::R(Box::new(StarWord::from_site(inner, rest, start, len))),
                    w.letters[i + 1..].to_vec(),
                )
            }
        }
    }
}

impl fmt::Display for StarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.left.iter().map(ToString::to_string).collect();
        parts.push(match &self.center {
            Center::Hole => "_".to_string(),
            Center::R(inner) => format!("R({inner})"),
        });
        parts.extend(self.right.iter().map(ToString::to_string));
        f.write_str(&parts.join("*"))
    }
}
