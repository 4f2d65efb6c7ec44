use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rbgs::envelope::Envelope;
use rbgs::poly::{rat, Polynomial};
use rbgs::postlie::samples::{d2_algebra, e_algebra, p1_algebra, sl2_algebra};
use rbgs::postlie::{hat, validate_post_lie, validate_rb_lie};
use rbgs::rewrite::Strategy;
use rbgs::sample::{random_context, random_polynomial, random_word, Bounds};
use rbgs::words::Word;

const B: Bounds = Bounds {
    n: 2,
    max_deg: 4,
    max_deg_r: 2,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn order_is_total_and_consistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (u, v, w) = (random_word(&mut r, B), random_word(&mut r, B), random_word(&mut r, B));
        prop_assert_eq!(u.cmp(&v), v.cmp(&u).reverse());
        prop_assert_eq!(u.cmp(&v) == std::cmp::Ordering::Equal, u == v);
        if u < v && v < w {
            prop_assert!(u < w);
        }
    }

    #[test]
    fn order_is_monomial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (u, v) = (random_word(&mut r, B), random_word(&mut r, B));
        let q = random_context(&mut r, B, 2);
        let (qu, qv) = (q.substitute(&u), q.substitute(&v));
        prop_assert_eq!(u.cmp(&v), qu.cmp(&qv));
    }

    #[test]
    fn occurrences_substitute_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_word(&mut r, Bounds { max_deg: 2, ..B });
        let q = random_context(&mut r, B, 2);
        let w = q.substitute(&p);
        let occ = w.occurrences(&p);
        prop_assert!(occ.contains(&q));
        for o in occ {
            prop_assert_eq!(o.substitute(&p), w.clone());
        }
    }

    #[test]
    fn leading_word_of_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_polynomial(&mut r, B, 4, 3);
        let g = random_polynomial(&mut r, B, 4, 3);
        prop_assume!(!f.is_zero() && !g.is_zero());
        let fg = &f * &g;
        prop_assert_eq!(fg.leading().unwrap(), &f.leading().unwrap().concat(g.leading().unwrap()));
        prop_assert_eq!(fg.leading_coeff().unwrap(), &(f.leading_coeff().unwrap() * g.leading_coeff().unwrap()));
    }

    #[test]
    fn normal_forms_are_linear_and_irreducible(seed in any::<u64>(), a in -3i64..=3, b in -3i64..=3) {
        let env = Envelope::from_post_lie(&e_algebra()).unwrap();
        let mut r = rng(seed);
        let bounds = Bounds { max_deg: 3, ..B };
        let f = random_polynomial(&mut r, bounds, 3, 2);
        let g = random_polynomial(&mut r, bounds, 3, 2);
        let nf = |p: &Polynomial| env.normal_form(p).unwrap();
        let combo = &f.scale(&rat(a)) + &g.scale(&rat(b));
        let expect = &nf(&f).scale(&rat(a)) + &nf(&g).scale(&rat(b));
        prop_assert_eq!(nf(&combo), expect);
        let h = nf(&f);
        prop_assert!(h.support().all(|w| env.is_irreducible(w)));
        prop_assert!(env.normal_form(&(&f - &h)).unwrap().is_zero());
    }

    #[test]
    fn strategies_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        for alg in [e_algebra(), p1_algebra(), d2_algebra()] {
            let env = Envelope::from_post_lie(&alg).unwrap();
            let f = random_polynomial(&mut r, Bounds { n: alg.dim(), max_deg: 4, max_deg_r: 3 }, 3, 2);
            let base = env.reducer(Strategy::LeftmostInnermost).normal_form(&f).unwrap();
            for s in [Strategy::LeftmostOutermost, Strategy::Random(seed), Strategy::Random(!seed)] {
                prop_assert_eq!(&env.reducer(s).normal_form(&f).unwrap(), &base);
            }
        }
    }

    #[test]
    fn rota_baxter_identity_in_the_quotient(seed in any::<u64>()) {
        let env = Envelope::from_post_lie(&d2_algebra()).unwrap();
        let mut r = rng(seed);
        let bounds = Bounds { max_deg: 3, max_deg_r: 1, n: 2 };
        let a = Polynomial::from_word(random_word(&mut r, bounds));
        let b = Polynomial::from_word(random_word(&mut r, bounds));
        let mut q = env.quotient();
        let (ra, rb) = (a.apply_r(), b.apply_r());
        let lhs = q.nf(&(&ra * &rb)).unwrap();
        let inner = &(&(&ra * &b) + &(&a * &rb)) - &(&a * &b);
        prop_assert_eq!(lhs, q.nf(&inner.apply_r()).unwrap());
    }
}

#[test]
fn hat_algebras_validate() {
    for alg in [e_algebra(), p1_algebra(), sl2_algebra(), d2_algebra()] {
        assert!(validate_post_lie(&alg).is_empty());
        assert!(validate_rb_lie(&hat(&alg).unwrap()).is_empty());
    }
}

#[test]
fn enveloping_commutators_match_the_hat_bracket() {
    for alg in [e_algebra(), sl2_algebra(), d2_algebra()] {
        let env = Envelope::from_post_lie(&alg).unwrap();
        let h = env.hat();
        let n = alg.dim();
        let gens: Vec<Word> = (1..=n as u32).map(Word::y).chain((1..=n as u32).map(Word::x)).collect();
        for (i, u) in gens.iter().enumerate() {
            for (j, v) in gens.iter().enumerate() {
                let (pu, pv) = (Polynomial::from_word(u.clone()), Polynomial::from_word(v.clone()));
                let comm = env.normal_form(&(&(&pu * &pv) - &(&pv * &pu))).unwrap();
                let expected = Polynomial::from_terms(
                    h.bracket_of(i, j).iter().cloned().enumerate().map(|(k, c)| (gens[k].clone(), c)),
                );
                assert_eq!(comm, expected, "[{u}, {v}]");
            }
        }
    }
}

#[test]
fn pure_words_are_fixed_by_r() {
    // R(y_a y_b) agrees with y_a y_b in the quotient for every ordering
    let env = Envelope::from_post_lie(&sl2_algebra()).unwrap();
    for a in 1..=3 {
        for b in 1..=3 {
            let w = Word::y(a).concat(&Word::y(b));
            let lhs = env.normal_form(&Polynomial::from_word(w.wrap_r())).unwrap();
            let rhs = env.normal_form(&Polynomial::from_word(w)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
