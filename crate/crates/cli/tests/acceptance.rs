//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbgs::envelope::{rota_baxter_replacement, verify_postassociative, Envelope, Family};
use rbgs::gsb::{apply_at, check_pairs};
use rbgs::poly::Polynomial;
use rbgs::postlie::samples::{abelian, d2_algebra, e_algebra, p1_algebra, sl2_algebra};
use rbgs::postlie::{hat, validate_rb_lie};
use rbgs::rewrite::{matches_in, RewriteRule};
use rbgs::sample::{random_context, random_word, Bounds};
use rbgs::words::{StarWord, Word};
use rbgs_cli::{parse_expression, run};
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn algebra(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "algebras", name].iter().collect();
    p.to_string_lossy().into_owned()
}

/// Runs the CLI in-process with `--json`; returns exit code and record.
fn cli_json(args: &[&str]) -> Result<(i32, Value), String> {
    let mut argv = vec!["rbgs", "--json"];
    argv.extend_from_slice(args);
    let out = run(argv);
    if out.code == 2 {
        return Err(format!("{args:?}: input error: {}", out.stderr));
    }
    let v = serde_json::from_str(&out.stdout).map_err(|e| format!("{args:?}: bad json: {e}"))?;
    Ok((out.code, v))
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn bounded_certificate() -> Check {
    let start = Instant::now();
    let mut detail = Vec::new();
    for file in ["E.alg", "P1.alg"] {
        let (code, v) = cli_json(&["gsb-check", &algebra(file), "--max-deg", "5", "--max-rdeg", "2"])?;
        let report = &v["report"];
        let nontrivial = report["nontrivial"].as_u64().unwrap_or(u64::MAX);
        let total = report["compositions"].as_array().map_or(0, Vec::len);
        ensure(code == 0 && nontrivial == 0, || {
            format!("{file}: exit {code}, {nontrivial} nontrivial of {total}")
        })?;
        ensure(total > 0, || format!("{file}: no compositions formed"))?;
        detail.push(format!("{file} {total} compositions"));
    }
    within(start, Duration::from_secs(300), "certificate")?;
    Ok(format!("{}, all trivial", detail.join(", ")))
}

fn confluence_fuzzing() -> Check {
    let start = Instant::now();
    let (code, v) = cli_json(&[
        "confluence",
        &algebra("E.alg"),
        "--samples",
        "1000",
        "--max-deg",
        "6",
        "--max-rdeg",
        "2",
        "--seed",
        "2024",
    ])?;
    let report = &v["report"];
    let mismatches = report["mismatches"].as_array().map_or(usize::MAX, Vec::len);
    let randoms = report["strategies"]
        .as_array()
        .map_or(0, |s| s.iter().filter(|x| *x == "random").count());
    ensure(code == 0 && mismatches == 0, || format!("{mismatches} mismatches"))?;
    ensure(randoms >= 2, || "fewer than two random strategies".into())?;
    within(start, Duration::from_secs(60), "confluence")?;
    Ok(format!("1000 samples, {randoms} seeded strategies each, 0 mismatches"))
}

fn hat_validation() -> Check {
    let algebras = [
        ("E", e_algebra()),
        ("P1", p1_algebra()),
        ("sl2", sl2_algebra()),
        ("abelian", abelian(3)),
    ];
    for (name, p) in &algebras {
        let h = hat(p).map_err(|e| format!("{name}: {e}"))?;
        let violations = validate_rb_lie(&h);
        ensure(violations.is_empty(), || format!("{name}: {}", violations[0]))?;
    }
    for file in ["E.alg", "P1.alg", "sl2.alg", "abelian.alg"] {
        let (code, v) = cli_json(&["hat", &algebra(file)])?;
        ensure(code == 0 && v["pass"] == true, || format!("hat {file}: exit {code}"))?;
    }
    Ok("E, P1, sl2, abelian: Jacobi, Rota-Baxter, R^2 = R, both subalgebras".into())
}

fn embedding_end_to_end() -> Check {
    for file in ["E.alg", "P1.alg", "sl2.alg"] {
        let (code, v) = cli_json(&["verify-embedding", &algebra(file)])?;
        let r = &v["report"];
        ensure(code == 0, || format!("{file}: exit {code}"))?;
        ensure(r["independent"] == true && r["irreducible"] == true, || {
            format!("{file}: images not independent irreducible")
        })?;
    }
    let (_, v) = cli_json(&["verify-embedding", &algebra("E.alg")])?;
    let row = v["report"]["rows"]
        .as_array()
        .and_then(|rows| rows.iter().find(|r| r["pair"] == serde_json::json!(["e1", "e2"])))
        .ok_or("E: no (e1, e2) row")?;
    ensure(row["bracket"] == "x2 - y2" && row["product"] == "0", || {
        format!("E (e1, e2): bracket {} product {}", row["bracket"], row["product"])
    })?;
    Ok("E, P1, sl2 pass; E: [e1', e2'] = x2 - y2, e1'.e2' = 0".into())
}

fn postassociative_axioms() -> Check {
    let start = Instant::now();
    let env = Envelope::from_post_lie(&e_algebra()).map_err(|e| e.to_string())?;
    let report = verify_postassociative(&env, 2).map_err(|e| e.to_string())?;
    ensure(report.max_deg_r == 1, || "R-degree bound is not 1".into())?;
    ensure(report.pass(), || {
        let v = &report.violations[0];
        format!("identity {} at {:?}: {} != {}", v.identity, v.triple, v.lhs, v.rhs)
    })?;
    within(start, Duration::from_secs(120), "identities")?;
    Ok(format!("{} words, {} checks, 0 violations", report.words, report.checks))
}

fn rota_baxter_in_quotient() -> Check {
    let mut pairs = 0;
    for (name, p) in [("E", e_algebra()), ("d2", d2_algebra())] {
        let env = Envelope::from_post_lie(&p).map_err(|e| e.to_string())?;
        let words = env.irr_words(2, 1);
        let mut q = env.quotient();
        for a in &words {
            for b in &words {
                let (pa, pb) = (Polynomial::from_word(a.clone()), Polynomial::from_word(b.clone()));
                let (ra, rb) = (pa.apply_r(), pb.apply_r());
                let lhs = q.nf(&(&ra * &rb)).map_err(|e| e.to_string())?;
                let inner = &(&(&ra * &pb) + &(&pa * &rb)) - &(&pa * &pb);
                let rhs = q.nf(&inner.apply_r()).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("{name}: a = {a}, b = {b}: {lhs} != {rhs}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs over E and d2"))
}

/// One rewrite of `target` inside `f` by the first `family` match whose
/// placeholder sits at `depth`.
fn rewrite(env: &Envelope, f: &Polynomial, target: &Word, family: Family, depth: usize) -> Result<Polynomial, String> {
    let m = matches_in(env.rules(), target)
        .into_iter()
        .find(|m| m.rule.family == family.tag() && m.context.depth() == depth)
        .ok_or_else(|| format!("no {family} redex at depth {depth} in {target}"))?;
    ensure(!f.coeff(target).is_zero(), || format!("{target} does not occur in {f}"))?;
    Ok(apply_at(f, &m.context, &m.rule))
}

fn same(step: &str, got: &Polynomial, want: &Polynomial) -> Result<(), String> {
    ensure(got == want, || format!("{step}: got {got}, displayed {want}"))
}

fn regression_vectors() -> Check {
    let env = Envelope::from_post_lie(&e_algebra()).map_err(|e| e.to_string())?;
    let w = |x: &Word| Polynomial::from_word(x.clone());
    let r = |p: &Polynomial| p.apply_r();
    let nf = |p: &Polynomial| env.normal_form(p).map_err(|e| e.to_string());

    // w = R(a)R(xbar): one route kills R(xbar) directly, the other goes
    // through the Rota-Baxter expansion with a pure argument.
    let a = Word::y(1).concat(&Word::x(1));
    let xbar = Word::x(1);
    let w1 = a.wrap_r().concat(&xbar.wrap_r());
    let f1 = w(&w1);
    let direct = rewrite(&env, &f1, &w1, Family::RKillX, 0)?;
    same("R(x) = 0 inside w", &direct, &Polynomial::zero())?;
    let rb = RewriteRule::new(Family::RotaBaxter.tag(), w1.clone(), rota_baxter_replacement(&a, &xbar));
    let s1 = apply_at(&f1, &StarWord::hole(), &rb);
    let (pa, px) = (w(&a), w(&xbar));
    let shown = r(&(&(&(&r(&pa) * &px) + &(&pa * &r(&px))) - &(&pa * &px)));
    same("Rota-Baxter step", &s1, &shown)?;
    let t = a.wrap_r().concat(&xbar).wrap_r();
    let s2 = rewrite(&env, &s1, &t, Family::XChain, 0)?;
    same("x-chain step", &s2, &r(&(&pa * &r(&px))))?;
    let u = a.concat(&xbar.wrap_r()).wrap_r();
    let s3 = rewrite(&env, &s2, &u, Family::RKillX, 1)?;
    same("final R(x) = 0", &s3, &Polynomial::zero())?;
    same("normal form of w", &nf(&f1)?, &Polynomial::zero())?;

    // w = R(a)R(R(b) xbar R(c)) with a = b = c = y1 x1.
    let (b, c) = (a.clone(), a.clone());
    let (pb, pc) = (w(&b), w(&c));
    let (ra, rb_, rc) = (r(&pa), r(&pb), r(&pc));
    let mid = b.wrap_r().concat(&xbar).concat(&c.wrap_r());
    let w2 = a.wrap_r().concat(&mid.wrap_r());
    let f2 = w(&w2);
    let mul = |ps: &[&Polynomial]| ps.iter().skip(1).fold(ps[0].clone(), |acc, p| &acc * p);
    // x-chain image of R(R(b) x R(c))
    let expand = &(&mul(&[&rb_, &px, &pc]) + &mul(&[&pb, &px, &rc])) - &mul(&[&pb, &px, &pc]);

    // right route
    let r1 = rewrite(&env, &f2, &w2, Family::XChain, 0)?;
    same("right route, x-chain", &r1, &(&ra * &r(&expand)))?;
    let mut r2 = r1.clone();
    for t in r1.support() {
        r2 = rewrite(&env, &r2, t, Family::RotaBaxter, 0)?;
    }
    let shown_r = &(&r(&mul(&[&ra, &expand])) + &r(&(&pa * &r(&expand)))) - &r(&(&pa * &expand));
    same("right route, Rota-Baxter", &r2, &shown_r)?;
    let first = a.wrap_r().concat(&b.wrap_r()).concat(&xbar).concat(&c).wrap_r();
    let r3 = rewrite(&env, &r2, &first, Family::RotaBaxter, 1)?;
    let rab = &(&(&ra * &pb) + &(&pa * &rb_)) - &(&pa * &pb);
    let final_r = &(&r2 - &w(&first)) + &r(&mul(&[&r(&rab), &px, &pc]));
    same("right route, first summand", &r3, &final_r)?;

    // left route
    let l1 = rewrite(&env, &f2, &w2, Family::RotaBaxter, 0)?;
    let pm = w(&mid);
    let shown_l = &(&r(&(&ra * &pm)) + &r(&(&pa * &r(&pm)))) - &r(&(&pa * &pm));
    same("left route, Rota-Baxter", &l1, &shown_l)?;
    let inner = a.concat(&mid.wrap_r()).wrap_r();
    let l2 = rewrite(&env, &l1, &inner, Family::XChain, 1)?;
    let shown_l2 = &(&r(&mul(&[&ra, &rb_, &px, &rc])) + &r(&(&pa * &r(&expand)))) - &r(&mul(&[&pa, &rb_, &px, &rc]));
    same("left route, x-chain", &l2, &shown_l2)?;
    let lead = a.wrap_r().concat(&b.wrap_r()).concat(&xbar).concat(&c.wrap_r()).wrap_r();
    let mut l3 = rewrite(&env, &l2, &lead, Family::RotaBaxter, 1)?;
    for v in rab.support() {
        let t = v.wrap_r().concat(&xbar).concat(&c.wrap_r()).wrap_r();
        l3 = rewrite(&env, &l3, &t, Family::XChain, 0)?;
    }
    let la = &(&r(&mul(&[&rab, &px, &rc])) + &r(&mul(&[&r(&rab), &px, &pc]))) - &r(&mul(&[&rab, &px, &pc]));
    let final_l = &(&l2 - &w(&lead)) + &la;
    same("left route, substituted", &l3, &final_l)?;

    same("both routes", &final_l, &final_r)?;
    let target = nf(&f2)?;
    same("normal form, left", &nf(&final_l)?, &target)?;
    same("normal form, right", &nf(&final_r)?, &target)?;
    Ok(format!(
        "R(a)R(x1) -> 0 both ways; R(a)R(R(b)x1R(c)) routes agree ({} terms)",
        final_l.len()
    ))
}

fn order_laws() -> Check {
    let b = Bounds {
        n: 2,
        max_deg: 4,
        max_deg_r: 2,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut strict = 0;
    for i in 0..10_000 {
        let (u, v, w) = (random_word(&mut rng, b), random_word(&mut rng, b), random_word(&mut rng, b));
        let q = random_context(&mut rng, b, 2);
        let (qu, qv) = (q.substitute(&u), q.substitute(&v));
        ensure(u.cmp(&v) == qu.cmp(&qv), || format!("#{i}: {u} vs {v} in {q}"))?;
        ensure(u.cmp(&v) == v.cmp(&u).reverse(), || format!("#{i}: antisymmetry {u} {v}"))?;
        ensure((u.cmp(&v).is_eq()) == (u == v), || format!("#{i}: totality {u} {v}"))?;
        if u < v && v < w {
            ensure(u < w, || format!("#{i}: transitivity {u} {v} {w}"))?;
        }
        strict += usize::from(u != v);
    }
    Ok(format!("10000 triples ({strict} with u != v), 0 failures"))
}

fn mutation_sensitivity() -> Check {
    // broken constants are caught by check
    let (code, v) = cli_json(&["check", &algebra("E-corrupted.alg")])?;
    ensure(code == 1 && !v["violations"].as_array().is_some_and(Vec::is_empty), || {
        "check missed the corrupted E".into()
    })?;
    let (code, v) = cli_json(&["check", &algebra("badjacobi.alg")])?;
    let jacobi = v["violations"]
        .as_array()
        .is_some_and(|vs| vs.iter().any(|x| x["identity"].as_str().is_some_and(|s| s.contains("Jacobi"))));
    ensure(code == 1 && jacobi, || "check missed the Jacobi failure".into())?;

    // a flipped commutation constant is caught by the composition check
    let mut h = hat(&e_algebra()).map_err(|e| e.to_string())?;
    for (i, j) in [(2, 1), (1, 2)] {
        let flipped = h.bracket_of(i, j).iter().map(|c| -c).collect();
        h.set_bracket(i, j, flipped);
    }
    let env = Envelope::new(h);
    let instances = env.instantiate_relations(3, 0);
    let report = check_pairs(&instances, env.rules(), 3, 0).map_err(|e| e.to_string())?;
    ensure(!report.pass(), || "gsb-check missed the flipped sign".into())?;

    // dropping the Rota-Baxter family is caught by the identities
    let (code, v) = cli_json(&["post-identities", &algebra("E.alg"), "--max-deg", "2", "--without", "rota-baxter"])?;
    let found = v["report"]["violations"].as_array().map_or(0, Vec::len);
    ensure(code == 1 && found > 0, || "post-identities missed the dropped family".into())?;
    Ok(format!(
        "check: corrupted E and Jacobi; gsb-check: {} nontrivial; post-identities: {found} violations",
        report.nontrivial
    ))
}

const CORPUS: [&str; 50] = [
    "y1",
    "x2",
    "R(y1)",
    "R(x1)",
    "y1*x1",
    "x1*y1",
    "R(y1*x1)*x2 - 3/2*R(y1)",
    "R(y2*y1)",
    "-y1 + x1",
    "-3/2*y1",
    "2*y1 + 3*x2",
    "1/3*R(x1*y2)",
    "y1*y2*x1",
    "y1*(y2*x1)",
    "(y1 + x1)*(y2 - x2)",
    "R(R(y1*x1)*y2*R(y1*x1))",
    "R(R(y1*x1)*x1*R(y2*x2))",
    "R(y1*x1)*R(y1)",
    "R(y1*x1)*R(y2*x1)",
    "R(R(y1)*x1)",
    "R(x1*R(y2))",
    "R(R(R(y1*x1)))",
    "0*y1",
    "12/8*x1",
    "y1 - y2 - x1 - x2",
    "y1 - (y2 - x1)",
    "y1 + (y2 + x1)",
    "-(y1 + x1)",
    "-(-y1)",
    "y1 + (-x1)",
    "2*(3*y1)",
    "(2*y1)*x1",
    "y1*(2*x1)",
    "R(-y1 + 2*x1)",
    "R(y1 - R(x2*y2))*y1",
    "x2*x1*y2*y1",
    "R(y2)*R(y1)*R(x1)",
    "R((y1))",
    "((y1*x1))",
    "7*R(y1*x1)*R(y2*x2)*x1",
    "100/7*y1 - 5/3*x2 + 1*y2",
    "R(y1*R(y2*R(x1*R(x2))))",
    "R(y1)*x1 - x1*R(y1)",
    "y1*x1*y1*x1*y1*x1",
    "R(x1*x2) - R(x2*x1)",
    "R(R(y1*x1)*R(y2*x1)) + R(y1*x1*R(y2*x1)) - R(y1*x1*y2*x1)",
    "-1/2*R(y1*x1) + 1/2*R(x1*y1)",
    "(R(y1) + R(x1))*(R(y2) - R(x2))",
    "y2 * x2 + R( y1 * x1 )",
    "3 * R(x2) - 0/5*y1",
];

const DETERMINISM: [&[&str]; 8] = [
    &["check", "badjacobi.alg"],
    &["hat", "sl2.alg"],
    &["nf", "E.alg", "-e", "R(R(y1*x1)*x2*R(y1*x1))*R(y2*x1)", "--trace"],
    &["gsb-check", "d2.alg", "--max-deg", "3", "--max-rdeg", "1"],
    &["confluence", "d2.alg", "--samples", "200", "--max-deg", "5", "--seed", "9"],
    &["verify-embedding", "sl2.alg"],
    &["post-identities", "E.alg", "--max-deg", "1", "--without", "commute"],
    &["irr", "P1.alg", "--max-deg", "2", "--max-rdeg", "2"],
];

fn cli_determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_rbgs");
    let mut runs = 0;
    for args in DETERMINISM {
        let args: Vec<String> = args
            .iter()
            .map(|a| if a.ends_with(".alg") { algebra(a) } else { a.to_string() })
            .collect();
        for json in [false, true] {
            let mut reference: Option<(Option<i32>, Vec<u8>)> = None;
            for threads in ["1", "2", "4", "1", "4"] {
                let mut cmd = Command::new(bin);
                cmd.args(&args).args(["--threads", threads]);
                if json {
                    cmd.arg("--json");
                }
                let out = cmd.output().map_err(|e| e.to_string())?;
                runs += 1;
                let got = (out.status.code(), out.stdout);
                match &reference {
                    None => reference = Some(got),
                    Some(r) => ensure(*r == got, || format!("{args:?} json={json} threads={threads} differs"))?,
                }
            }
        }
    }
    for (k, text) in CORPUS.iter().enumerate() {
        let e = parse_expression(text, 2).map_err(|e| format!("corpus {k} {text:?}: {e}"))?;
        let printed = e.to_string();
        let again = parse_expression(&printed, 2).map_err(|e| format!("corpus {k} reprint {printed:?}: {e}"))?;
        ensure(again == e, || format!("corpus {k}: {text:?} -> {printed:?} parses differently"))?;
        ensure(again.to_string() == printed, || format!("corpus {k}: printing is not a fixpoint"))?;
    }
    Ok(format!("{runs} runs byte-identical; {} expressions round-trip", CORPUS.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("bounded Groebner-Shirshov certificate", bounded_certificate),
        ("confluence fuzzing", confluence_fuzzing),
        ("hat validation", hat_validation),
        ("embedding end to end", embedding_end_to_end),
        ("postassociative axioms", postassociative_axioms),
        ("Rota-Baxter identity in the quotient", rota_baxter_in_quotient),
        ("composition regression vectors", regression_vectors),
        ("monomial order laws", order_laws),
        ("mutation sensitivity", mutation_sensitivity),
        ("CLI determinism and round-trip", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
