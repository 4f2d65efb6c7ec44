//! Compositions (critical pairs) of monic relations and their triviality
//! checks, used to certify a rule set as a Groebner-Shirshov basis within
//! degree bounds.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::poly::Polynomial;
use crate::rewrite::{Reducer, RewriteError, RewriteRule, RuleSource, Strategy};
use crate::words::{Letter, Overlap, StarWord, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompositionKind {
    Intersection,
    Inclusion,
}

impl fmt::Display for CompositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompositionKind::Intersection => "intersection",
            CompositionKind::Inclusion => "inclusion",
        })
    }
}

/// How the two leading words meet in `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Meeting {
    /// `w = lead(f) * mu = nu * lead(g)`.
    Overlap { mu: Word, nu: Word },
    /// `w = lead(f) = q|_{lead(g)}`.
    Within(StarWord),
}

impl fmt::Display for Meeting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Meeting::Overlap { mu, nu } => write!(f, "mu = {mu}, nu = {nu}"),
            Meeting::Within(q) => write!(f, "q = {q}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    pub kind: CompositionKind,
    pub f: Polynomial,
    pub g: Polynomial,
    pub w: Word,
    pub meeting: Meeting,
    pub value: Polynomial,
}

impl Composition {
    /// Checks the factorization of `w` and that `value` lies below `w`.
    pub fn is_well_formed(&self) -> bool {
        let (Ok(lf), Ok(lg)) = (self.f.leading(), self.g.leading()) else {
            return false;
        };
        let factored = match &self.meeting {
            Meeting::Overlap { mu, nu } => {
                lf.concat(mu) == self.w
                    && nu.concat(lg) == self.w
                    && self.w.len() < lf.len() + lg.len()
            }
            Meeting::Within(q) => *lf == self.w && q.substitute(lg) == self.w,
        };
        factored && self.value.support().all(|u| *u < self.w)
    }
}

/// One composition per proper top-level overlap of `lead(f)` and `lead(g)`;
/// `value = f*mu - nu*g`. Both inputs must be monic.
pub fn intersection_compositions(f: &Polynomial, g: &Polynomial) -> Vec<Composition> {
    let (Ok(lf), Ok(lg)) = (f.leading(), g.leading()) else {
        return Vec::new();
    };
    Word::overlaps(lf, lg)
        .into_iter()
        .map(|o| intersection(f, g, o))
        .collect()
}

fn intersection(f: &Polynomial, g: &Polynomial, o: Overlap) -> Composition {
    Composition {
        kind: CompositionKind::Intersection,
        value: &f.mul_word(&o.mu) - &Polynomial::word_mul(&o.nu, g),
        f: f.clone(),
        g: g.clone(),
        w: o.w,
        meeting: Meeting::Overlap { mu: o.mu, nu: o.nu },
    }
}

/// One composition per occurrence `q` of `lead(g)` in `lead(f)`, skipping
/// the bare placeholder when `f == g`; `value = f - q|_g`.
pub fn inclusion_compositions(f: &Polynomial, g: &Polynomial) -> Vec<Composition> {
    let (Ok(lf), Ok(lg)) = (f.leading(), g.leading()) else {
        return Vec::new();
    };
    lf.occurrences(lg)
        .into_iter()
        .filter(|q| !(q.is_identity() && f == g))
        .map(|q| inclusion(f, g, q))
        .collect()
}

fn inclusion(f: &Polynomial, g: &Polynomial, q: StarWord) -> Composition {
    Composition {
        kind: CompositionKind::Inclusion,
        value: f - &g.substitute_into(&q),
        f: f.clone(),
        g: g.clone(),
        w: f.leading().expect("monic").clone(),
        meeting: Meeting::Within(q),
    }
}

/// Reduction of the value to zero certifies triviality modulo `(S, w)`:
/// every step rewrites a word at most the current leading word, which stays
/// below `w`.
pub fn trivial_mod(c: &Composition, rules: &dyn RuleSource) -> Result<bool, RewriteError> {
    Reducer::new(rules, Strategy::LeftmostInnermost).ideal_member(&c.value)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionRecord {
    pub kind: CompositionKind,
    pub families: [&'static str; 2],
    pub f: String,
    pub g: String,
    pub meeting: String,
    pub w: String,
    pub trivial: bool,
    /// Normal form of the value when it does not vanish.
    pub residue: Option<String>,
}

impl fmt::Display for CompositionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{} w = {} [{}] f = {} g = {}: {}",
            self.kind,
            self.families[0],
            self.families[1],
            self.w,
            self.meeting,
            self.f,
            self.g,
            if self.trivial { "trivial" } else { "NONTRIVIAL" }
        )?;
        if let Some(r) = &self.residue {
            write!(f, " residue {r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GsbReport {
    pub max_deg: usize,
    pub max_deg_r: u32,
    pub instances: usize,
    pub compositions: Vec<CompositionRecord>,
    pub nontrivial: usize,
}

impl GsbReport {
    pub fn pass(&self) -> bool {
        self.nontrivial == 0
    }

    pub fn count(&self, kind: CompositionKind) -> usize {
        self.compositions.iter().filter(|c| c.kind == kind).count()
    }
}

struct Tagged<'r> {
    family: &'static str,
    relation: Polynomial,
    rule: &'r RewriteRule,
}

/// Enumerates every intersection and inclusion composition among
/// `instances` (and the source's own rules inside their leading words)
/// whose ambiguity word fits the bounds, and reduces each value with
/// `rules`. Records are sorted by ambiguity word.
pub fn check_pairs(
    instances: &[RewriteRule],
    rules: &dyn RuleSource,
    max_deg: usize,
    max_deg_r: u32,
) -> Result<GsbReport, RewriteError> {
    let tagged: Vec<Tagged> = instances
        .iter()
        .map(|r| Tagged {
            family: r.family,
            relation: r.relation(),
            rule: r,
        })
        .collect();
    let mut by_lhs: HashMap<&Word, Vec<usize>> = HashMap::new();
    let mut by_first: HashMap<&Letter, Vec<usize>> = HashMap::new();
    for (i, t) in tagged.iter().enumerate() {
        by_lhs.entry(&t.rule.lhs).or_default().push(i);
        if t.rule.lhs.len() > 1 {
            by_first.entry(&t.rule.lhs.letters()[0]).or_default().push(i);
        }
    }
    let max_window = instances
        .iter()
        .map(|r| r.lhs.len())
        .max()
        .unwrap_or(0)
        .max(rules.max_lhs_len());

    let found: Vec<Result<Vec<(Word, CompositionRecord)>, RewriteError>> = (0..tagged.len())
        .into_par_iter()
        .map_init(
            || Reducer::new(rules, Strategy::LeftmostInnermost),
            |reducer, i| {
                let f = &tagged[i];
                let mut comps: Vec<(&'static str, Composition)> = Vec::new();
                // inclusions
                let lf = &f.rule.lhs;
                for (q, window) in windows(lf, max_window) {
                    let mut candidates: Vec<(&'static str, Polynomial)> = rules
                        .rules_for(&window)
                        .into_iter()
                        .map(|r| (r.family, r.relation()))
                        .collect();
                    if let Ok(wword) = Word::new(window.clone()).ok_or(()) {
                        for &j in by_lhs.get(&wword).into_iter().flatten() {
                            candidates.push((tagged[j].family, tagged[j].relation.clone()));
                        }
                    }
                    let mut seen: Vec<&Polynomial> = Vec::new();
                    let mut unique = Vec::new();
                    for (fam, g) in &candidates {
                        if !seen.contains(&g) {
                            seen.push(g);
                            unique.push((*fam, g));
                        }
                    }
                    for (fam, g) in unique {
                        if q.is_identity() && *g == f.relation {
                            continue;
                        }
                        comps.push((fam, inclusion(&f.relation, g, q.clone())));
                    }
                }
                // intersections
                for k in 1..lf.len() {
                    let letter = &lf.letters()[lf.len() - k];
                    for &j in by_first.get(letter).into_iter().flatten() {
                        let g = &tagged[j];
                        for o in Word::overlaps(lf, &g.rule.lhs) {
                            if o.mu.len() == g.rule.lhs.len() - k && o.w.fits(max_deg, max_deg_r) {
                                comps.push((g.family, intersection(&f.relation, &g.relation, o)));
                            }
                        }
                    }
                }
                let mut out = Vec::new();
                for (g_family, c) in comps {
                    if !c.w.fits(max_deg, max_deg_r) {
                        continue;
                    }
                    debug_assert!(c.is_well_formed(), "malformed composition at {}", c.w);
                    let residue = reducer.normal_form(&c.value)?;
                    let trivial = residue.is_zero();
                    out.push((
                        c.w.clone(),
                        CompositionRecord {
                            kind: c.kind,
                            families: [f.family, g_family],
                            f: c.f.to_string(),
                            g: c.g.to_string(),
                            meeting: c.meeting.to_string(),
                            w: c.w.to_string(),
                            trivial,
                            residue: (!trivial).then(|| residue.to_string()),
                        },
                    ));
                }
                Ok(out)
            },
        )
        .collect();
    let mut all = Vec::new();
    for r in found {
        all.extend(r?);
    }
    all.sort_by(|(w1, r1), (w2, r2)| {
        w1.cmp(w2)
            .then(r1.kind.cmp(&r2.kind))
            .then_with(|| r1.f.cmp(&r2.f))
            .then_with(|| r1.g.cmp(&r2.g))
            .then_with(|| r1.meeting.cmp(&r2.meeting))
    });
    let compositions: Vec<CompositionRecord> = all.into_iter().map(|(_, r)| r).collect();
    let nontrivial = compositions.iter().filter(|c| !c.trivial).count();
    Ok(GsbReport {
        max_deg,
        max_deg_r,
        instances: instances.len(),
        compositions,
        nontrivial,
    })
}

/// Every window of at most `max_len` letters at every depth of `w`, with its
/// context.
fn windows(w: &Word, max_len: usize) -> Vec<(StarWord, Vec<Letter>)> {
    let mut out = Vec::new();
    let letters = w.letters();
    for start in 0..letters.len() {
        for len in 1..=max_len.min(letters.len() - start) {
            out.push((
                StarWord::new(
                    letters[..start].to_vec(),
                    crate::words::Center::Hole,
                    letters[start + len..].to_vec(),
                ),
                letters[start..start + len].to_vec(),
            ));
        }
    }
    for (i, l) in letters.iter().enumerate() {
        if let Letter::R(inner) = l {
            for (q, window) in windows(inner, max_len) {
                out.push((
                    StarWord::new(
                        letters[..i].to_vec(),
                        crate::words::Center::R(Box::new(q)),
                        letters[i + 1..].to_vec(),
                    ),
                    window,
                ));
            }
        }
    }
    out
}

/// `f - c * q|_rule`, i.e. one rewrite of the word `q|_lhs` inside `f`.
pub fn apply_at(f: &Polynomial, q: &StarWord, rule: &RewriteRule) -> Polynomial {
    let target = q.substitute(&rule.lhs);
    let c = f.coeff(&target);
    let mut out = f.clone();
    out.add_scaled(&(-c), &rule.relation().substitute_into(q));
    out
}
