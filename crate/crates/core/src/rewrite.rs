//! Reduction of polynomials modulo a (possibly infinite) set of monic
//! relations presented as rewrite rules.
//!
//! A [`RuleSource`] answers one question: which rules have exactly this
//! window of letters as their left-hand side. Windows are contiguous runs of
//! letters at any nesting depth, so a rule applies to a word `w` at a site
//! `q` whenever `w = q|_lhs`. The [`Reducer`] repeatedly replaces such a
//! site by `q|_replacement` until no site remains.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Polynomial, Rational};
use crate::words::{Letter, StarWord, Word};

/// Default cap on rewrite steps per [`Reducer::normal_form`] call.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// `lhs -> replacement`, read off a monic relation `lhs - replacement`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub family: &'static str,
    pub lhs: Word,
    pub replacement: Polynomial,
}

impl RewriteRule {
    pub fn new(family: &'static str, lhs: Word, replacement: Polynomial) -> Self {
        debug_assert!(
            replacement.support().all(|w| w < &lhs),
            "rule {family}: replacement must be below {lhs}"
        );
        RewriteRule {
            family,
            lhs,
            replacement,
        }
    }

    /// The monic relation `lhs - replacement`.
    pub fn relation(&self) -> Polynomial {
        &Polynomial::from_word(self.lhs.clone()) - &self.replacement
    }

    pub fn is_decreasing(&self) -> bool {
        self.replacement.support().all(|w| w < &self.lhs)
    }
}

/// A rule applicable at a concrete context of some word.
#[derive(Clone, Debug)]
pub struct RuleMatch {
    pub context: StarWord,
    pub rule: RewriteRule,
}

/// Position of a window: descend through the R-letters at `path`, then take
/// letters `[start, start + len)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Site {
    pub path: Vec<usize>,
    pub start: usize,
    pub len: usize,
}

impl Site {
    fn top(start: usize, len: usize) -> Self {
        Site {
            path: Vec::new(),
            start,
            len,
        }
    }

    fn nested(mut self, i: usize) -> Self {
        self.path.insert(0, i);
        self
    }

    pub fn window<'w>(&self, w: &'w Word) -> &'w [Letter] {
        let mut letters = w.letters();
        for &i in &self.path {
            letters = letters[i].as_r().expect("path runs through R-letters").letters();
        }
        &letters[self.start..self.start + self.len]
    }

    pub fn context(&self, w: &Word) -> StarWord {
        StarWord::from_site(w, &self.path, self.start, self.len)
    }
}

/// A matchable presentation of a relation set.
///
/// Implementations must be pure: the same window always yields the same
/// rules.
pub trait RuleSource: Sync {
    /// Longest left-hand side, counted in letters of a single level.
    fn max_lhs_len(&self) -> usize;

    /// All rules whose left-hand side is exactly `window`.
    fn rules_for(&self, window: &[Letter]) -> Vec<RewriteRule>;

    fn is_redex(&self, window: &[Letter]) -> bool {
        !self.rules_for(window).is_empty()
    }

    /// Every `(q, rule)` with `q|_{rule.lhs} == w`, outer-leftmost first.
    fn matches(&self, w: &Word) -> Vec<RuleMatch>
    where
        Self: Sized,
    {
        matches_in(self, w)
    }
}

/// [`RuleSource::matches`] for trait objects.
pub fn matches_in(rules: &dyn RuleSource, w: &Word) -> Vec<RuleMatch> {
    let mut sites = Vec::new();
    collect_sites(rules, w.letters(), &mut sites);
    sites.sort_by_key(|s| s.path.len());
    sites
        .into_iter()
        .flat_map(|site| {
            let context = site.context(w);
            rules
                .rules_for(site.window(w))
                .into_iter()
                .map(move |rule| RuleMatch {
                    context: context.clone(),
                    rule,
                })
        })
        .collect()
}

fn collect_sites(rules: &dyn RuleSource, letters: &[Letter], out: &mut Vec<Site>) {
    let max = rules.max_lhs_len();
    for i in 0..letters.len() {
        for len in 1..=max.min(letters.len() - i) {
            if rules.is_redex(&letters[i..i + len]) {
                out.push(Site::top(i, len));
            }
        }
    }
    for (i, l) in letters.iter().enumerate() {
        if let Letter::R(inner) = l {
            let mut nested = Vec::new();
            collect_sites(rules, inner.letters(), &mut nested);
            out.extend(nested.into_iter().map(|s| s.nested(i)));
        }
    }
}

fn has_redex(rules: &dyn RuleSource, letters: &[Letter]) -> bool {
    let max = rules.max_lhs_len();
    (0..letters.len()).any(|i| {
        (1..=max.min(letters.len() - i)).any(|len| rules.is_redex(&letters[i..i + len]))
            || matches!(&letters[i], Letter::R(inner) if has_redex(rules, inner.letters()))
    })
}

/// True when no window strictly inside `[start, start + len)` is a redex.
/// The argument of the first letter is assumed already checked.
fn window_is_innermost(rules: &dyn RuleSource, letters: &[Letter], start: usize, len: usize) -> bool {
    let end = start + len;
    for j in start + 1..end {
        if let Letter::R(inner) = &letters[j] {
            if has_redex(rules, inner.letters()) {
                return false;
            }
        }
    }
    for a in start..end {
        for b in a + 1..=end {
            if b - a < len && rules.is_redex(&letters[a..b]) {
                return false;
            }
        }
    }
    true
}

fn innermost_site(rules: &dyn RuleSource, letters: &[Letter]) -> Option<Site> {
    let max = rules.max_lhs_len();
    for i in 0..letters.len() {
        if let Letter::R(inner) = &letters[i] {
            if let Some(site) = innermost_site(rules, inner.letters()) {
                return Some(site.nested(i));
            }
        }
        for len in 1..=max.min(letters.len() - i) {
            if rules.is_redex(&letters[i..i + len]) && window_is_innermost(rules, letters, i, len) {
                return Some(Site::top(i, len));
            }
        }
    }
    None
}

fn outermost_site(rules: &dyn RuleSource, letters: &[Letter]) -> Option<Site> {
    let max = rules.max_lhs_len();
    for i in 0..letters.len() {
        for len in (1..=max.min(letters.len() - i)).rev() {
            if rules.is_redex(&letters[i..i + len]) {
                return Some(Site::top(i, len));
            }
        }
    }
    letters.iter().enumerate().find_map(|(i, l)| match l {
        Letter::R(inner) => outermost_site(rules, inner.letters()).map(|s| s.nested(i)),
        Letter::Gen(_) => None,
    })
}

/// How the next redex is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Reduce inside R-letter arguments first, then leftmost.
    LeftmostInnermost,
    /// Reduce the leftmost redex not contained in another redex.
    LeftmostOutermost,
    /// Uniformly random redex, reproducible from the seed.
    Random(u64),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::LeftmostInnermost => f.write_str("leftmost-innermost"),
            Strategy::LeftmostOutermost => f.write_str("leftmost-outermost"),
            Strategy::Random(seed) => write!(f, "random(seed={seed})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("rewrite step budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
}

/// One applied rewrite: `before = context|_lhs` was replaced by
/// `context|_replacement`.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub context: StarWord,
    pub family: &'static str,
    pub before: Word,
    pub after: Polynomial,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) at {}: {} -> {}",
            self.family, self.context, self.before, self.after
        )
    }
}

/// Normal-form engine over a rule source.
///
/// Deterministic strategies memoize normal forms of words across calls; the
/// random strategy only memoizes within a single call so every call explores
/// fresh reduction paths.
pub struct Reducer<'a> {
    rules: &'a dyn RuleSource,
    strategy: Strategy,
    rng: ChaCha8Rng,
    budget: u64,
    steps: u64,
    memo: HashMap<Word, Arc<Polynomial>>,
    trace: Option<Vec<TraceStep>>,
}

impl<'a> Reducer<'a> {
    pub fn new(rules: &'a dyn RuleSource, strategy: Strategy) -> Self {
        let seed = match strategy {
            Strategy::Random(seed) => seed,
            _ => 0,
        };
        Reducer {
            rules,
            strategy,
            rng: ChaCha8Rng::seed_from_u64(seed),
            budget: DEFAULT_STEP_BUDGET,
            steps: 0,
            memo: HashMap::new(),
            trace: None,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Records every step; disables memoization while on.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn rules(&self) -> &'a dyn RuleSource {
        self.rules
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn take_trace(&mut self) -> Vec<TraceStep> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    fn pick_site(&mut self, w: &Word) -> Option<Site> {
        match self.strategy {
            Strategy::LeftmostInnermost => innermost_site(self.rules, w.letters()),
            Strategy::LeftmostOutermost => outermost_site(self.rules, w.letters()),
            Strategy::Random(_) => {
                let mut sites = Vec::new();
                collect_sites(self.rules, w.letters(), &mut sites);
                sites.choose(&mut self.rng).cloned()
            }
        }
    }

    fn pick_rule(&mut self, w: &Word, site: &Site) -> RewriteRule {
        let mut rules = self.rules.rules_for(site.window(w));
        debug_assert!(!rules.is_empty());
        let i = match self.strategy {
            Strategy::Random(_) if rules.len() > 1 => self.rng.gen_range(0..rules.len()),
            _ => 0,
        };
        rules.swap_remove(i)
    }

    /// Rewrites `w` once at a strategy-chosen site. The result is expressed
    /// as a list of words with coefficients.
    fn rewrite_word(&mut self, w: &Word) -> Option<(Site, RewriteRule, Vec<(Word, Rational)>)> {
        let site = self.pick_site(w)?;
        let rule = self.pick_rule(w, &site);
        let out = rule
            .replacement
            .iter()
            .map(|(u, c)| (w.splice(&site.path, site.start, site.len, u), c.clone()))
            .collect();
        Some((site, rule, out))
    }

    fn count_step(&mut self) -> Result<(), RewriteError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(RewriteError::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// One rewrite on one support word of `f`. Returns `(f, false)` when `f`
    /// is already in normal form.
    ///
    /// Deterministic strategies rewrite the largest reducible word; the
    /// random strategy picks the word at random too.
    pub fn reduce_step(&mut self, f: &Polynomial) -> (Polynomial, bool) {
        let reducible: Vec<&Word> = f
            .iter_desc()
            .map(|(w, _)| w)
            .filter(|w| !is_irreducible(self.rules, w))
            .collect();
        let target = match self.strategy {
            Strategy::Random(_) => reducible.choose(&mut self.rng).copied(),
            _ => reducible.first().copied(),
        };
        let Some(target) = target.cloned() else {
            return (f.clone(), false);
        };
        let (site, rule, out) = self
            .rewrite_word(&target)
            .expect("word was checked reducible");
        let c = f.coeff(&target);
        let after = Polynomial::from_terms(out);
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceStep {
                context: site.context(&target),
                family: rule.family,
                before: target.clone(),
                after: after.clone(),
            });
        }
        let mut g = f.clone();
        g.add_term(target, -c.clone());
        g.add_scaled(&c, &after);
        (g, true)
    }

    /// Rewrites `f` until no rule applies.
    pub fn normal_form(&mut self, f: &Polynomial) -> Result<Polynomial, RewriteError> {
        self.steps = 0;
        if self.trace.is_some() {
            let mut g = f.clone();
            loop {
                let (next, applied) = self.reduce_step(&g);
                if !applied {
                    return Ok(next);
                }
                self.count_step()?;
                g = next;
            }
        }
        if matches!(self.strategy, Strategy::Random(_)) {
            self.memo.clear();
        }
        let mut out = Polynomial::zero();
        for (w, c) in f.iter() {
            let nf = self.word_normal_form(w)?;
            out.add_scaled(c, &nf);
        }
        Ok(out)
    }

    pub fn word_nf(&mut self, w: &Word) -> Result<Polynomial, RewriteError> {
        self.normal_form(&Polynomial::from_word(w.clone()))
    }

    fn word_normal_form(&mut self, w: &Word) -> Result<Arc<Polynomial>, RewriteError> {
        enum Task {
            Visit(Word),
            Combine(Word, Vec<Rational>),
        }
        let mut tasks = vec![Task::Visit(w.clone())];
        let mut values: Vec<Arc<Polynomial>> = Vec::new();
        while let Some(task) = tasks.pop() {
            match task {
                Task::Visit(w) => {
                    if let Some(p) = self.memo.get(&w) {
                        values.push(p.clone());
                        continue;
                    }
                    match self.rewrite_word(&w) {
                        None => {
                            let p = Arc::new(Polynomial::from_word(w.clone()));
                            self.memo.insert(w, p.clone());
                            values.push(p);
                        }
                        Some((_, _, out)) => {
                            self.count_step()?;
                            let (words, coeffs): (Vec<Word>, Vec<Rational>) = out.into_iter().unzip();
                            tasks.push(Task::Combine(w, coeffs));
                            tasks.extend(words.into_iter().rev().map(Task::Visit));
                        }
                    }
                }
                Task::Combine(w, coeffs) => {
                    let parts = values.split_off(values.len() - coeffs.len());
                    let mut p = Polynomial::zero();
                    for (c, part) in coeffs.iter().zip(&parts) {
                        p.add_scaled(c, part);
                    }
                    let p = Arc::new(p);
                    self.memo.insert(w, p.clone());
                    values.push(p);
                }
            }
        }
        Ok(values.pop().expect("one value per visited root"))
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        is_irreducible(self.rules, w)
    }

    /// `f` lies in the ideal iff its normal form vanishes (valid when the
    /// rule set is a Groebner-Shirshov basis).
    pub fn ideal_member(&mut self, f: &Polynomial) -> Result<bool, RewriteError> {
        Ok(self.normal_form(f)?.is_zero())
    }
}

/// True when no rule applies anywhere in `w`.
pub fn is_irreducible(rules: &dyn RuleSource, w: &Word) -> bool {
    !has_redex(rules, w.letters())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::words::Generator;

    /// Commutation rules `x_a x_b -> x_b x_a` for `a > b`, plus `R(x_a) -> 0`
    /// and `R(w) -> w` for any other argument; enough to exercise the engine.
    struct Toy;

    impl RuleSource for Toy {
        fn max_lhs_len(&self) -> usize {
            2
        }

        fn rules_for(&self, window: &[Letter]) -> Vec<RewriteRule> {
            match window {
                [Letter::Gen(a), Letter::Gen(b)] if a > b => {
                    let lhs = Word::from_gens(&[*a, *b]).unwrap();
                    let rhs = Word::from_gens(&[*b, *a]).unwrap();
                    vec![RewriteRule::new("swap", lhs, rhs.into())]
                }
                [Letter::R(arg)] => {
                    let lhs = arg.wrap_r();
                    if arg.len() == 1 && arg.letters()[0].as_gen().is_some() {
                        vec![RewriteRule::new("kill", lhs, Polynomial::zero())]
                    } else {
                        vec![RewriteRule::new("unwrap", lhs, arg.clone().into())]
                    }
                }
                _ => vec![],
            }
        }
    }

    fn gens(ix: &[u32]) -> Word {
        Word::from_gens(&ix.iter().map(|i| Generator::x(*i)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn sorts_and_kills() {
        let mut r = Reducer::new(&Toy, Strategy::LeftmostInnermost);
        let w = gens(&[3, 1, 2]);
        assert_eq!(r.word_nf(&w).unwrap(), gens(&[1, 2, 3]).into());
        let w = gens(&[2, 1]).wrap_r();
        assert_eq!(r.word_nf(&w).unwrap(), gens(&[1, 2]).into());
        assert!(r.word_nf(&gens(&[1]).wrap_r()).unwrap().is_zero());
    }

    #[test]
    fn innermost_and_outermost_sites_differ() {
        let w = gens(&[2, 1]).wrap_r();
        let inner = innermost_site(&Toy, w.letters()).unwrap();
        assert_eq!(inner.path, vec![0]);
        let outer = outermost_site(&Toy, w.letters()).unwrap();
        assert!(outer.path.is_empty());
    }

    #[test]
    fn strategies_agree_on_confluent_toy() {
        let f = &Polynomial::from_word(gens(&[3, 2, 1]).wrap_r().concat(&gens(&[2, 1])))
            - &Polynomial::term(rat(2), gens(&[2, 1]));
        let mut a = Reducer::new(&Toy, Strategy::LeftmostInnermost);
        let mut b = Reducer::new(&Toy, Strategy::LeftmostOutermost);
        let mut c = Reducer::new(&Toy, Strategy::Random(7));
        let na = a.normal_form(&f).unwrap();
        assert_eq!(na, b.normal_form(&f).unwrap());
        assert_eq!(na, c.normal_form(&f).unwrap());
    }

    #[test]
    fn trace_records_steps() {
        let mut r = Reducer::new(&Toy, Strategy::LeftmostInnermost).with_trace();
        let nf = r.word_nf(&gens(&[2, 1])).unwrap();
        assert_eq!(nf, gens(&[1, 2]).into());
        let trace = r.take_trace();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].to_string(), "(swap) at _: x2*x1 -> x1*x2");
    }

    #[test]
    fn budget_is_enforced() {
        let mut r = Reducer::new(&Toy, Strategy::LeftmostInnermost).with_budget(1);
        assert_eq!(
            r.word_nf(&gens(&[3, 2, 1])),
            Err(RewriteError::BudgetExceeded { budget: 1 })
        );
    }

    #[test]
    fn matches_are_outer_first() {
        let w = gens(&[2, 1]).wrap_r();
        let m = Toy.matches(&w);
        assert_eq!(m.len(), 2);
        assert!(m[0].context.is_identity());
        assert_eq!(m[1].context.to_string(), "R(_)");
    }
}
