//! Seeded random words, contexts and polynomials, and the confluence fuzzer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::envelope::Envelope;
use crate::poly::{rat, Polynomial};
use crate::rewrite::{RewriteError, Strategy};
use crate::words::{Center, Generator, Letter, StarWord, Word};

/// Shape limits for random elements over `y1..yn, x1..xn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub n: usize,
    pub max_deg: usize,
    pub max_deg_r: u32,
}

fn random_gen<R: Rng>(rng: &mut R, n: usize) -> Generator {
    let i = rng.gen_range(1..=n as u32);
    if rng.gen_bool(0.5) {
        Generator::y(i)
    } else {
        Generator::x(i)
    }
}

/// A word fitting the bounds; R-letters appear with probability about 1/3
/// while R-degree budget remains.
pub fn random_word<R: Rng>(rng: &mut R, b: Bounds) -> Word {
    let budget = rng.gen_range(0..=b.max_deg_r);
    word_with_budget(rng, b, budget)
}

fn word_with_budget<R: Rng>(rng: &mut R, b: Bounds, budget: u32) -> Word {
    let len = rng.gen_range(1..=b.max_deg);
    let mut left = budget;
    let mut letters = Vec::with_capacity(len);
    for _ in 0..len {
        if left > 0 && rng.gen_bool(0.35) {
            let inner_budget = rng.gen_range(0..left);
            let inner = word_with_budget(rng, b, inner_budget);
            left -= 1 + inner.deg_r();
            letters.push(Letter::R(inner));
        } else {
            letters.push(Letter::Gen(random_gen(rng, b.n)));
        }
    }
    Word::new(letters).expect("len >= 1")
}

/// A context whose placeholder sits at depth at most `max_depth`.
pub fn random_context<R: Rng>(rng: &mut R, b: Bounds, max_depth: usize) -> StarWord {
    let side = |rng: &mut R| -> Vec<Letter> {
        let k = rng.gen_range(0..=2);
        (0..k)
            .flat_map(|_| random_word(rng, b).letters().to_vec())
            .take(b.max_deg)
            .collect()
    };
    let left = side(rng);
    let right = side(rng);
    let center = if max_depth > 0 && rng.gen_bool(0.4) {
        Center::R(Box::new(random_context(rng, b, max_depth - 1)))
    } else {
        Center::Hole
    };
    StarWord::new(left, center, right)
}

/// Up to `max_terms` words with coefficients drawn from `-c..=c`.
pub fn random_polynomial<R: Rng>(rng: &mut R, b: Bounds, max_terms: usize, c: i64) -> Polynomial {
    let terms = rng.gen_range(1..=max_terms);
    Polynomial::from_terms((0..terms).map(|_| (random_word(rng, b), rat(rng.gen_range(-c..=c)))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceMismatch {
    pub sample: usize,
    pub input: String,
    pub strategy: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub samples: usize,
    pub max_deg: usize,
    pub max_deg_r: u32,
    pub seed: u64,
    /// Strategies compared against leftmost-innermost, per sample.
    pub strategies: Vec<String>,
    pub mismatches: Vec<ConfluenceMismatch>,
}

impl ConfluenceReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Reduces `samples` random polynomials under leftmost-innermost,
/// leftmost-outermost and two independently seeded random strategies and
/// reports every disagreement. Sample `i` depends only on `(seed, i)`.
pub fn confluence(
    env: &Envelope,
    samples: usize,
    max_deg: usize,
    max_deg_r: u32,
    seed: u64,
) -> Result<ConfluenceReport, RewriteError> {
    let b = Bounds {
        n: env.n(),
        max_deg,
        max_deg_r,
    };
    let results: Vec<Result<Vec<ConfluenceMismatch>, RewriteError>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let f = random_polynomial(&mut rng, b, 4, 2);
            let reference = env.reducer(Strategy::LeftmostInnermost).normal_form(&f)?;
            let others = [
                Strategy::LeftmostOutermost,
                Strategy::Random(rng.gen()),
                Strategy::Random(rng.gen()),
            ];
            let mut out = Vec::new();
            for s in others {
                let got = env.reducer(s).normal_form(&f)?;
                if got != reference {
                    out.push(ConfluenceMismatch {
                        sample: i,
                        input: f.to_string(),
                        strategy: s.to_string(),
                        expected: reference.to_string(),
                        got: got.to_string(),
                    });
                }
            }
            Ok(out)
        })
        .collect();
    let mut mismatches = Vec::new();
    for r in results {
        mismatches.extend(r?);
    }
    Ok(ConfluenceReport {
        samples,
        max_deg,
        max_deg_r,
        seed,
        strategies: vec![
            "leftmost-outermost".into(),
            "random".into(),
            "random".into(),
        ],
        mismatches,
    })
}
