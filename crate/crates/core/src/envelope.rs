//! The enveloping Rota-Baxter associative algebra of a hat algebra, presented
//! by rewriting rules, with its postassociative operations and the embedding
//! verifier.
//!
//! Rule families, by the shape of their left-hand side:
//!
//! * `commute`: `x_a x_b` (a > b), `y_a y_b` (a > b), `x_a y_b`, rewritten
//!   to the swapped pair plus the hat bracket.
//! * `r-fix-y`: `R(u)` with `u` a pure y-word, rewritten to `u`.
//! * `r-kill-x`: `R(u)` with `u` a pure x-word, rewritten to `0`.
//! * `y-chain`: `R(u)` where `u` is built from y-generators and R-letters
//!   with mixed arguments (at least one of each), rewritten to `u`.
//! * `x-chain`: `R(u)` where `u` is built from x-generators and R-letters
//!   `R(c_1)..R(c_m)` with mixed arguments (at least one of each),
//!   rewritten to `-sum (-1)^|T| R(u_T)` over nonempty `T`, where `u_T`
//!   unwraps the R-letters indexed by `T`.
//! * `rota-baxter`: `R(a)R(b)` with `a`, `b` mixed, rewritten to
//!   `R(R(a)b) + R(aR(b)) - R(ab)`.
//!
//! A word is mixed when it is not a pure x-word and not a pure y-word.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::poly::{rat, Polynomial, Rational};
use crate::postlie::{hat, AlgebraError, PostLieAlgebra, RbLieAlgebra, WEIGHT};
use crate::rewrite::{Reducer, RewriteError, RewriteRule, RuleSource, Strategy};
use crate::words::{Generator, Kind, Letter, Word};

/// The relation families of the presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Commute,
    RFixY,
    RKillX,
    YChain,
    XChain,
    RotaBaxter,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Commute,
        Family::RFixY,
        Family::RKillX,
        Family::YChain,
        Family::XChain,
        Family::RotaBaxter,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Commute => "commute",
            Family::RFixY => "r-fix-y",
            Family::RKillX => "r-kill-x",
            Family::YChain => "y-chain",
            Family::XChain => "x-chain",
            Family::RotaBaxter => "rota-baxter",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.tag() == tag)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Letters of `R(u)` for the two chain families: generators of one kind and
/// R-letters with mixed arguments, at least one of each.
fn chain_kind(u: &Word) -> Option<Kind> {
    let mut kind = None;
    let mut has_r = false;
    for l in u.letters() {
        match l {
            Letter::Gen(g) => match kind {
                None => kind = Some(g.kind),
                Some(k) if k != g.kind => return None,
                Some(_) => {}
            },
            Letter::R(a) => {
                if a.is_pure() {
                    return None;
                }
                has_r = true;
            }
        }
    }
    if has_r {
        kind
    } else {
        None
    }
}

/// `-sum_{T nonempty} (-1)^|T| R(u_T)`.
fn x_chain_replacement(u: &Word) -> Polynomial {
    let positions: Vec<usize> = u
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.as_r().is_some())
        .map(|(i, _)| i)
        .collect();
    let m = positions.len();
    let mut out = Polynomial::zero();
    for mask in 1u64..(1 << m) {
        let mut letters = Vec::new();
        let mut bit = 0;
        for (i, l) in u.letters().iter().enumerate() {
            if bit < m && positions[bit] == i {
                if mask & (1 << bit) != 0 {
                    letters.extend_from_slice(l.as_r().expect("R position").letters());
                } else {
                    letters.push(l.clone());
                }
                bit += 1;
            } else {
                letters.push(l.clone());
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        let w = Word::new(letters).expect("nonempty").wrap_r();
        out.add_term(w, rat(sign));
    }
    out
}

/// `R(R(a)b) + R(aR(b)) - R(ab)`.
pub fn rota_baxter_replacement(a: &Word, b: &Word) -> Polynomial {
    let mut out = Polynomial::zero();
    out.add_term(a.wrap_r().concat(b).wrap_r(), rat(1));
    out.add_term(a.concat(&b.wrap_r()).wrap_r(), rat(1));
    out.add_term(a.concat(b).wrap_r(), rat(-1));
    out
}

/// The rule source of the enveloping algebra of a hat algebra.
#[derive(Clone, Debug)]
pub struct EnvelopeRules {
    n: usize,
    /// Hat bracket of generator ordinals, as polynomials in the generators.
    brackets: Vec<Vec<Polynomial>>,
    disabled: BTreeSet<Family>,
}

impl EnvelopeRules {
    pub fn new(h: &RbLieAlgebra) -> Self {
        let n = h.n();
        let gen_word = |k: usize| Word::gen(Generator::from_ordinal(k, n));
        let brackets = (0..2 * n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        Polynomial::from_terms(
                            h.bracket_of(i, j)
                                .iter()
                                .enumerate()
                                .map(|(k, c)| (gen_word(k), c.clone())),
                        )
                    })
                    .collect()
            })
            .collect();
        EnvelopeRules {
            n,
            brackets,
            disabled: BTreeSet::new(),
        }
    }

    /// Same rules with one family switched off.
    pub fn without(mut self, family: Family) -> Self {
        self.disabled.insert(family);
        self
    }

    pub fn disabled(&self) -> &BTreeSet<Family> {
        &self.disabled
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn enabled(&self, f: Family) -> Option<Family> {
        (!self.disabled.contains(&f)).then_some(f)
    }

    fn bracket(&self, a: Generator, b: Generator) -> Polynomial {
        let n = self.n;
        if a.index as usize > n || b.index as usize > n || a.index == 0 || b.index == 0 {
            return Polynomial::zero();
        }
        self.brackets[a.ordinal(n)][b.ordinal(n)].clone()
    }

    /// Which family, if any, has `window` as a left-hand side.
    pub fn classify(&self, window: &[Letter]) -> Option<Family> {
        match window {
            [Letter::R(u)] => match u.pure_kind() {
                Some(Kind::Y) => self.enabled(Family::RFixY),
                Some(Kind::X) => self.enabled(Family::RKillX),
                None => match chain_kind(u)? {
                    Kind::Y => self.enabled(Family::YChain),
                    Kind::X => self.enabled(Family::XChain),
                },
            },
            [Letter::Gen(a), Letter::Gen(b)] => {
                let descending = a.kind == b.kind && a.index > b.index;
                let x_before_y = a.kind == Kind::X && b.kind == Kind::Y;
                (descending || x_before_y)
                    .then_some(Family::Commute)
                    .and_then(|f| self.enabled(f))
            }
            [Letter::R(a), Letter::R(b)] if a.is_mixed() && b.is_mixed() => {
                self.enabled(Family::RotaBaxter)
            }
            _ => None,
        }
    }

    fn replacement(&self, family: Family, window: &[Letter]) -> Polynomial {
        match (family, window) {
            (Family::Commute, [Letter::Gen(a), Letter::Gen(b)]) => {
                let mut out = self.bracket(*a, *b);
                out.add_term(Word::from_gens(&[*b, *a]).expect("two letters"), rat(1));
                out
            }
            (Family::RFixY | Family::YChain, [Letter::R(u)]) => Polynomial::from_word(u.clone()),
            (Family::RKillX, _) => Polynomial::zero(),
            (Family::XChain, [Letter::R(u)]) => x_chain_replacement(u),
            (Family::RotaBaxter, [Letter::R(a), Letter::R(b)]) => rota_baxter_replacement(a, b),
            _ => unreachable!("classify and replacement disagree"),
        }
    }
}

impl RuleSource for EnvelopeRules {
    fn max_lhs_len(&self) -> usize {
        2
    }

    fn rules_for(&self, window: &[Letter]) -> Vec<RewriteRule> {
        match self.classify(window) {
            None => Vec::new(),
            Some(f) => {
                let lhs = Word::new(window.to_vec()).expect("nonempty window");
                vec![RewriteRule::new(f.tag(), lhs, self.replacement(f, window))]
            }
        }
    }

    fn is_redex(&self, window: &[Letter]) -> bool {
        self.classify(window).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("basis index {index} out of range 1..={dim}")]
pub struct IndexError {
    pub index: usize,
    pub dim: usize,
}

/// A hat algebra together with the rule source of its envelope.
#[derive(Clone, Debug)]
pub struct Envelope {
    hat: RbLieAlgebra,
    rules: EnvelopeRules,
}

impl Envelope {
    pub fn new(hat: RbLieAlgebra) -> Self {
        let rules = EnvelopeRules::new(&hat);
        Envelope { hat, rules }
    }

    pub fn from_post_lie(p: &PostLieAlgebra) -> Result<Self, AlgebraError> {
        Ok(Envelope::new(hat(p)?))
    }

    pub fn without(mut self, family: Family) -> Self {
        self.rules = self.rules.without(family);
        self
    }

    pub fn hat(&self) -> &RbLieAlgebra {
        &self.hat
    }

    pub fn rules(&self) -> &EnvelopeRules {
        &self.rules
    }

    pub fn n(&self) -> usize {
        self.hat.n()
    }

    pub fn reducer(&self, strategy: Strategy) -> Reducer<'_> {
        Reducer::new(&self.rules, strategy)
    }

    pub fn quotient(&self) -> Quotient<'_> {
        Quotient {
            reducer: self.reducer(Strategy::LeftmostInnermost),
        }
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, RewriteError> {
        self.reducer(Strategy::LeftmostInnermost).normal_form(f)
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        crate::rewrite::is_irreducible(&self.rules, w)
    }

    /// `x_i - y_i`, the image of the `i`-th basis element (1-based).
    pub fn embed(&self, i: usize) -> Result<Polynomial, IndexError> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(IndexError { index: i, dim: n });
        }
        let i = i as u32;
        Ok(Polynomial::from_word(Word::x(i)) - Polynomial::from_word(Word::y(i)))
    }

    /// Linear extension of [`Envelope::embed`] to coordinate vectors.
    pub fn embed_vector(&self, v: &[Rational]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let i = i as u32 + 1;
                out.add_term(Word::x(i), c.clone());
                out.add_term(Word::y(i), -c.clone());
            }
        }
        out
    }

    /// Irreducible words fitting `(max_deg, max_deg_r)`, ascending.
    pub fn irr_words(&self, max_deg: usize, max_deg_r: u32) -> Vec<Word> {
        let mut by_deg_r = irr_by_deg_r(&self.rules, self.n(), max_deg, max_deg_r);
        let mut out: Vec<Word> = by_deg_r.drain(..).flatten().collect();
        out.sort();
        out
    }

    /// Every instance of the families whose left-hand side fits the bounds,
    /// sorted by left-hand side. Parameters `a`, `b` range over irreducible
    /// mixed words, blocks over sorted pure words; `rota-baxter` is also
    /// instantiated with pure parameters. Disabled families are skipped.
    pub fn instantiate_relations(&self, max_deg: usize, max_deg_r: u32) -> Vec<RewriteRule> {
        Instantiator::new(self, max_deg, max_deg_r).run()
    }
}

/// Irreducible words with R-degree exactly `k` at index `k`.
fn irr_by_deg_r(rules: &EnvelopeRules, n: usize, max_deg: usize, max_deg_r: u32) -> Vec<Vec<Word>> {
    let mut words: Vec<Vec<Word>> = Vec::new();
    if max_deg == 0 || n == 0 {
        return words;
    }
    // letters[j]: irreducible letters of R-degree j
    let mut letters: Vec<Vec<Letter>> = vec![(1..=n as u32)
        .map(|i| Letter::Gen(Generator::y(i)))
        .chain((1..=n as u32).map(|i| Letter::Gen(Generator::x(i))))
        .collect()];
    for k in 0..=max_deg_r as usize {
        if k > 0 {
            let ls: Vec<Letter> = words[k - 1]
                .iter()
                .map(|w| Letter::R(w.clone()))
                .filter(|l| !rules.is_redex(std::slice::from_ref(l)))
                .collect();
            letters.push(ls);
        }
        // extend sequences; states are (letters, deg_r) with deg_r <= k
        let mut found = Vec::new();
        let mut frontier: Vec<(Vec<Letter>, usize)> = Vec::new();
        for (j, ls) in letters.iter().enumerate().take(k + 1) {
            for l in ls {
                frontier.push((vec![l.clone()], j));
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (seq, d) in frontier {
                if d == k {
                    found.push(Word::new(seq.clone()).expect("nonempty"));
                }
                if seq.len() == max_deg {
                    continue;
                }
                for (j, ls) in letters.iter().enumerate().take(k - d + 1) {
                    for l in ls {
                        let pair = [seq.last().expect("nonempty").clone(), l.clone()];
                        if rules.is_redex(&pair) {
                            continue;
                        }
                        let mut s = seq.clone();
                        s.push(l.clone());
                        next.push((s, d + j));
                    }
                }
            }
            frontier = next;
        }
        words.push(found);
    }
    words
}

/// Pieces of a chain argument before flattening.
#[derive(Clone)]
enum Piece {
    Block(Word),
    R(Word),
}

struct Instantiator<'e> {
    env: &'e Envelope,
    max_deg: usize,
    max_deg_r: u32,
    /// Irreducible mixed words of R-degree below `max_deg_r`.
    mixed: Vec<Word>,
    y_blocks: Vec<Word>,
    x_blocks: Vec<Word>,
}

/// Sorted pure words of one kind, lengths `1..=max_len`.
fn sorted_blocks(kind: Kind, n: usize, max_len: usize) -> Vec<Word> {
    fn go(kind: Kind, n: u32, from: u32, left: usize, cur: &mut Vec<Generator>, out: &mut Vec<Word>) {
        if !cur.is_empty() {
            out.push(Word::from_gens(cur).expect("nonempty"));
        }
        if left == 0 {
            return;
        }
        for i in from..=n {
            cur.push(Generator { kind, index: i });
            go(kind, n, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(kind, n as u32, 1, max_len, &mut Vec::new(), &mut out);
    out.sort();
    out
}

impl<'e> Instantiator<'e> {
    fn new(env: &'e Envelope, max_deg: usize, max_deg_r: u32) -> Self {
        let n = env.n();
        let mixed = if max_deg_r == 0 {
            Vec::new()
        } else {
            env.irr_words(max_deg, max_deg_r - 1)
                .into_iter()
                .filter(Word::is_mixed)
                .collect()
        };
        Instantiator {
            env,
            max_deg,
            max_deg_r,
            mixed,
            y_blocks: sorted_blocks(Kind::Y, n, max_deg),
            x_blocks: sorted_blocks(Kind::X, n, max_deg),
        }
    }

    fn enabled(&self, f: Family) -> bool {
        !self.env.rules.disabled.contains(&f)
    }

    fn fits(&self, w: &Word) -> bool {
        w.fits(self.max_deg, self.max_deg_r)
    }

    fn run(&self) -> Vec<RewriteRule> {
        let mut out = Vec::new();
        if self.max_deg == 0 {
            return out;
        }
        let rules = &self.env.rules;
        let n = self.env.n();
        let gens: Vec<Generator> = (1..=n as u32)
            .map(Generator::y)
            .chain((1..=n as u32).map(Generator::x))
            .collect();
        for &a in &gens {
            for &b in &gens {
                let w = Word::from_gens(&[a, b]).expect("two letters");
                if self.fits(&w) {
                    out.extend(rules.rules_for(w.letters()));
                }
            }
        }
        for block in self.y_blocks.iter().chain(&self.x_blocks) {
            let w = block.wrap_r();
            if self.fits(&w) {
                out.extend(rules.rules_for(w.letters()));
            }
        }
        if self.enabled(Family::YChain) {
            self.chains(&self.y_blocks, &mut out);
        }
        if self.enabled(Family::XChain) {
            self.chains(&self.x_blocks, &mut out);
        }
        if self.enabled(Family::RotaBaxter) && self.max_deg >= 2 && self.max_deg_r >= 2 {
            let budget = self.max_deg_r - 2;
            let params: Vec<&Word> = self
                .mixed
                .iter()
                .filter(|a| a.deg_r() <= budget)
                .chain(&self.y_blocks)
                .chain(&self.x_blocks)
                .collect();
            for a in &params {
                for b in &params {
                    if a.deg_r() + b.deg_r() > budget {
                        continue;
                    }
                    let w = a.wrap_r().concat(&b.wrap_r());
                    if self.fits(&w) {
                        let rule = RewriteRule::new(
                            Family::RotaBaxter.tag(),
                            w,
                            rota_baxter_replacement(a, b),
                        );
                        out.push(rule);
                    }
                }
            }
        }
        out.sort_by(|f, g| f.lhs.cmp(&g.lhs).then(f.family.cmp(g.family)));
        out.dedup_by(|f, g| f.lhs == g.lhs && f.family == g.family);
        out
    }

    /// `R(u)` for `u` alternating blocks and R-letters, never two R-letters
    /// or two blocks in a row.
    fn chains(&self, blocks: &[Word], out: &mut Vec<RewriteRule>) {
        let mut pieces = Vec::new();
        self.extend_chain(blocks, &mut pieces, 0, 1, out);
    }

    fn extend_chain(
        &self,
        blocks: &[Word],
        pieces: &mut Vec<Piece>,
        len: usize,
        deg_r: u32,
        out: &mut Vec<RewriteRule>,
    ) {
        let has_block = pieces.iter().any(|p| matches!(p, Piece::Block(_)));
        let has_r = pieces.iter().any(|p| matches!(p, Piece::R(_)));
        if has_block && has_r {
            let mut letters = Vec::new();
            for p in pieces.iter() {
                match p {
                    Piece::Block(b) => letters.extend_from_slice(b.letters()),
                    Piece::R(a) => letters.push(Letter::R(a.clone())),
                }
            }
            let w = Word::new(letters).expect("nonempty").wrap_r();
            out.extend(self.env.rules.rules_for(w.letters()));
        }
        let last_block = matches!(pieces.last(), Some(Piece::Block(_)));
        let last_r = matches!(pieces.last(), Some(Piece::R(_)));
        if !last_block {
            for b in blocks {
                if len + b.len() <= self.max_deg {
                    pieces.push(Piece::Block(b.clone()));
                    self.extend_chain(blocks, pieces, len + b.len(), deg_r, out);
                    pieces.pop();
                }
            }
        }
        if !last_r && len < self.max_deg {
            for a in &self.mixed {
                let d = deg_r + 1 + a.deg_r();
                if d <= self.max_deg_r {
                    pieces.push(Piece::R(a.clone()));
                    self.extend_chain(blocks, pieces, len + 1, d, out);
                    pieces.pop();
                }
            }
        }
    }
}

/// Arithmetic in the quotient; every result is a normal form.
pub struct Quotient<'e> {
    reducer: Reducer<'e>,
}

/// `(u > v, u < v, u . v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostOps {
    pub succ: Polynomial,
    pub prec: Polynomial,
    pub dot: Polynomial,
}

/// Product and bracket of the derived post-Lie structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedPostLie {
    pub product: Polynomial,
    pub bracket: Polynomial,
}

impl<'e> Quotient<'e> {
    pub fn nf(&mut self, f: &Polynomial) -> Result<Polynomial, RewriteError> {
        self.reducer.normal_form(f)
    }

    pub fn mul(&mut self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial, RewriteError> {
        self.nf(&(f * g))
    }

    /// The operator of the quotient: `NF(R(f))`.
    pub fn p(&mut self, f: &Polynomial) -> Result<Polynomial, RewriteError> {
        self.nf(&f.apply_r())
    }

    pub fn succ(&mut self, u: &Polynomial, v: &Polynomial) -> Result<Polynomial, RewriteError> {
        let pu = self.p(u)?;
        self.mul(&pu, v)
    }

    pub fn prec(&mut self, u: &Polynomial, v: &Polynomial) -> Result<Polynomial, RewriteError> {
        let pv = self.p(v)?;
        self.mul(u, &pv)
    }

    pub fn dot(&mut self, u: &Polynomial, v: &Polynomial) -> Result<Polynomial, RewriteError> {
        Ok(self.mul(u, v)?.scale(&rat(WEIGHT)))
    }

    pub fn post_ops(&mut self, u: &Polynomial, v: &Polynomial) -> Result<PostOps, RewriteError> {
        Ok(PostOps {
            succ: self.succ(u, v)?,
            prec: self.prec(u, v)?,
            dot: self.dot(u, v)?,
        })
    }

    /// `product = NF(P(u)v - vP(u))`, `bracket = NF(-(uv - vu))`.
    pub fn derived_post_lie(
        &mut self,
        u: &Polynomial,
        v: &Polynomial,
    ) -> Result<DerivedPostLie, RewriteError> {
        let pu = self.p(u)?;
        let product = self.nf(&(&(&pu * v) - &(v * &pu)))?;
        let bracket = self
            .nf(&(&(u * v) - &(v * u)))?
            .scale(&rat(WEIGHT));
        Ok(DerivedPostLie { product, bracket })
    }

    fn pair(&mut self, x: &Polynomial, y: &Polynomial) -> Result<PairOps, RewriteError> {
        let ops = self.post_ops(x, y)?;
        let all = &(&ops.succ + &ops.prec) + &ops.dot;
        let p_all = self.p(&all)?;
        Ok(PairOps { ops, p_all })
    }

    /// Both sides of each postassociative identity at `(x, y, z)`.
    pub fn identity_sides(
        &mut self,
        x: &Polynomial,
        y: &Polynomial,
        z: &Polynomial,
    ) -> Result<[(Polynomial, Polynomial); 7], RewriteError> {
        let xy = self.pair(x, y)?;
        let yz = self.pair(y, z)?;
        let (px, pz) = (self.p(x)?, self.p(z)?);
        self.sides(x, z, &px, &pz, &xy, &yz)
    }

    fn sides(
        &mut self,
        x: &Polynomial,
        z: &Polynomial,
        px: &Polynomial,
        pz: &Polynomial,
        xy: &PairOps,
        yz: &PairOps,
    ) -> Result<[(Polynomial, Polynomial); 7], RewriteError> {
        let l = rat(WEIGHT);
        let (a, b) = (&xy.ops, &yz.ops);
        Ok([
            (self.mul(&a.prec, pz)?, self.mul(x, &yz.p_all)?),
            (self.mul(&a.succ, pz)?, self.mul(px, &b.prec)?),
            (self.mul(&xy.p_all, z)?, self.mul(px, &b.succ)?),
            (self.mul(px, &b.dot)?, self.mul(&a.succ, z)?.scale(&l)),
            (self.mul(&a.prec, z)?.scale(&l), self.mul(x, &b.succ)?.scale(&l)),
            (self.mul(&a.dot, pz)?, self.mul(x, &b.prec)?.scale(&l)),
            (self.mul(&a.dot, z)?.scale(&l), self.mul(x, &b.dot)?.scale(&l)),
        ])
    }
}

/// Pair-level operations reused across triples.
struct PairOps {
    ops: PostOps,
    /// `P(x>y + x<y + x.y)`.
    p_all: Polynomial,
}

/// The seven postassociative identities, in the order checked.
pub const POST_IDENTITIES: [&str; 7] = [
    "(x<y)<z = x<(y>z + y<z + y.z)",
    "(x>y)<z = x>(y<z)",
    "(x>y + x<y + x.y)>z = x>(y>z)",
    "x>(y.z) = (x>y).z",
    "(x<y).z = x.(y>z)",
    "(x.y)<z = x.(y<z)",
    "(x.y).z = x.(y.z)",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityViolation {
    /// 1-based position in [`POST_IDENTITIES`].
    pub identity: usize,
    pub statement: &'static str,
    pub triple: [String; 3],
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PostIdentityReport {
    pub max_deg: usize,
    pub max_deg_r: u32,
    pub words: usize,
    pub triples: usize,
    pub checks: usize,
    pub violations: Vec<IdentityViolation>,
}

impl PostIdentityReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks all seven identities on every triple of irreducible words with
/// level length at most `max_deg` and R-degree at most 1.
pub fn verify_postassociative(env: &Envelope, max_deg: usize) -> Result<PostIdentityReport, RewriteError> {
    let max_deg_r = 1;
    let words: Vec<Polynomial> = env
        .irr_words(max_deg, max_deg_r)
        .into_iter()
        .map(Polynomial::from_word)
        .collect();
    let m = words.len();
    let mut q = env.quotient();
    let mut pairs = Vec::with_capacity(m * m);
    for x in &words {
        for y in &words {
            pairs.push(q.pair(x, y)?);
        }
    }
    let mut ps = Vec::with_capacity(m);
    for w in &words {
        ps.push(q.p(w)?);
    }
    let results: Vec<Result<Vec<(usize, IdentityViolation)>, RewriteError>> = (0..m * m)
        .into_par_iter()
        .map_init(
            || env.quotient(),
            |q, ij| {
                let (i, j) = (ij / m, ij % m);
                let mut found = Vec::new();
                for k in 0..m {
                    let sides = q.sides(
                        &words[i],
                        &words[k],
                        &ps[i],
                        &ps[k],
                        &pairs[ij],
                        &pairs[j * m + k],
                    )?;
                    for (id, (lhs, rhs)) in sides.into_iter().enumerate() {
                        if lhs != rhs {
                            let triple = [&words[i], &words[j], &words[k]].map(ToString::to_string);
                            found.push((
                                ij * m + k,
                                IdentityViolation {
                                    identity: id + 1,
                                    statement: POST_IDENTITIES[id],
                                    triple,
                                    lhs: lhs.to_string(),
                                    rhs: rhs.to_string(),
                                },
                            ));
                        }
                    }
                }
                Ok(found)
            },
        )
        .collect();
    let mut violations = Vec::new();
    for r in results {
        violations.extend(r?);
    }
    violations.sort_by_key(|(ix, v)| (*ix, v.identity));
    Ok(PostIdentityReport {
        max_deg,
        max_deg_r,
        words: m,
        triples: m * m * m,
        checks: 7 * m * m * m,
        violations: violations.into_iter().map(|(_, v)| v).collect(),
    })
}

/// One row of the morphism table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismRow {
    pub pair: [String; 2],
    pub product: String,
    pub expected_product: String,
    pub bracket: String,
    pub expected_bracket: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub images: Vec<String>,
    /// Images are nonzero normal forms with linearly independent supports.
    pub independent: bool,
    pub irreducible: bool,
    pub rows: Vec<MorphismRow>,
}

impl EmbeddingReport {
    pub fn pass(&self) -> bool {
        self.independent && self.irreducible && self.rows.iter().all(|r| r.ok)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EmbeddingError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Rank of polynomials as vectors over their joint support.
fn rank(polys: &[Polynomial]) -> usize {
    let support: BTreeSet<&Word> = polys.iter().flat_map(Polynomial::support).collect();
    let support: Vec<&Word> = support.into_iter().collect();
    let mut rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| support.iter().map(|w| p.coeff(w)).collect())
        .collect();
    let mut r = 0;
    for col in 0..support.len() {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][col].recip();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = &rows[i][col] * &inv;
                let pivot_row = rows[r].clone();
                for (a, b) in rows[i].iter_mut().zip(&pivot_row) {
                    *a -= &f * b;
                }
            }
        }
        r += 1;
    }
    r
}

/// Checks that `e_i -> x_i - y_i` is injective and a post-Lie morphism into
/// the derived structure of the envelope of `hat(p)`.
pub fn verify_embedding(p: &PostLieAlgebra) -> Result<EmbeddingReport, EmbeddingError> {
    let env = Envelope::from_post_lie(p)?;
    verify_embedding_in(p, &env)
}

/// [`verify_embedding`] against a given envelope, e.g. one built from a
/// corrupted hat algebra.
pub fn verify_embedding_in(p: &PostLieAlgebra, env: &Envelope) -> Result<EmbeddingReport, EmbeddingError> {
    let n = p.dim();
    let mut q = env.quotient();
    let images: Vec<Polynomial> = (1..=n).map(|i| env.embed(i).expect("in range")).collect();
    let mut normal = Vec::with_capacity(n);
    for u in &images {
        normal.push(q.nf(u)?);
    }
    let irreducible = normal == images;
    let independent = rank(&normal) == n;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let d = q.derived_post_lie(&images[i], &images[j])?;
            let (ei, ej) = (p.basis(i), p.basis(j));
            let ep = q.nf(&env.embed_vector(&p.product(&ei, &ej)))?;
            let eb = q.nf(&env.embed_vector(&p.bracket(&ei, &ej)))?;
            rows.push(MorphismRow {
                pair: [p.names()[i].clone(), p.names()[j].clone()],
                ok: d.product == ep && d.bracket == eb,
                product: d.product.to_string(),
                expected_product: ep.to_string(),
                bracket: d.bracket.to_string(),
                expected_bracket: eb.to_string(),
            });
        }
    }
    Ok(EmbeddingReport {
        images: images.iter().map(ToString::to_string).collect(),
        independent,
        irreducible,
        rows,
    })
}
