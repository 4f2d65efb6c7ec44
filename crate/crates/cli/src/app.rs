//! Subcommands. [`run`] returns the exit status and both output streams so
//! the binary, tests and benches share one code path.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rbgs::envelope::{verify_embedding_in, verify_postassociative, Envelope, Family};
use rbgs::gsb::{check_pairs, CompositionKind};
use rbgs::postlie::samples::d2_algebra;
use rbgs::postlie::{
    hat, resolve_sign_convention, validate_post_lie, validate_rb_lie, PostLieAlgebra, SignConvention,
    WEIGHT,
};
use rbgs::rewrite::Strategy;
use rbgs::sample::confluence;
use serde::Serialize;
use serde_json::json;

use crate::algebra::parse_algebra;
use crate::expr::parse_expression;

/// Violations listed in text output before eliding the rest.
const TEXT_LIMIT: usize = 20;

#[derive(Parser, Debug)]
#[command(
    name = "rbgs",
    version,
    about = "Rota-Baxter rewriting, composition checks and post-Lie envelopes"
)]
pub struct Cli {
    /// Emit a JSON record instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for batch checks (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Rules {
    /// Drop a relation family (commute, r-fix-y, r-kill-x, y-chain, x-chain,
    /// rota-baxter); repeatable.
    #[arg(long, value_name = "FAMILY", value_parser = parse_family)]
    pub without: Vec<Family>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_tag(s).ok_or_else(|| {
        let tags: Vec<_> = Family::ALL.iter().map(|f| f.tag()).collect();
        format!("unknown family '{s}' (expected one of {})", tags.join(", "))
    })
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate the post-Lie axioms of an algebra file.
    Check { file: PathBuf },
    /// Print the Rota-Baxter Lie algebra built from a post-Lie algebra.
    Hat { file: PathBuf },
    /// Normal form of an expression in the enveloping algebra.
    Nf {
        file: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Print every rewrite step.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        rules: Rules,
    },
    /// Reduce all compositions among bounded relation instances.
    GsbCheck {
        file: PathBuf,
        #[arg(long)]
        max_deg: usize,
        #[arg(long)]
        max_rdeg: u32,
        /// List trivial compositions too.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        rules: Rules,
    },
    /// Compare normal forms across reduction strategies on random input.
    Confluence {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
        #[arg(long, default_value_t = 2)]
        max_rdeg: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        rules: Rules,
    },
    /// Check that e_i -> x_i - y_i embeds the algebra into its envelope.
    VerifyEmbedding {
        file: PathBuf,
        #[command(flatten)]
        rules: Rules,
    },
    /// Check the seven postassociative identities on irreducible words.
    PostIdentities {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_deg: usize,
        #[command(flatten)]
        rules: Rules,
    },
    /// List irreducible words within bounds.
    Irr {
        file: PathBuf,
        #[arg(long)]
        max_deg: usize,
        #[arg(long)]
        max_rdeg: u32,
        #[command(flatten)]
        rules: Rules,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

struct Report {
    pass: bool,
    text: String,
    json: serde_json::Value,
}

fn input_error(msg: impl Into<String>) -> Outcome {
    Outcome {
        code: EXIT_INPUT,
        stdout: String::new(),
        stderr: format!("error: {}\n", msg.into()),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return input_error("--threads must be at least 1");
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return input_error(format!("cannot start worker threads: {e}")),
    };
    pool.install(|| match execute(&cli.command) {
        Ok(r) => Outcome {
            code: if r.pass { EXIT_PASS } else { EXIT_VIOLATION },
            stdout: if cli.json {
                let mut s = serde_json::to_string_pretty(&r.json).expect("reports serialize");
                s.push('\n');
                s
            } else {
                r.text
            },
            stderr: String::new(),
        },
        Err(o) => o,
    })
}

/// The built-in sign convention must be the only one that survives the
/// validation suite on a nonabelian algebra with nonzero product.
fn certify_signs() -> Result<(), Outcome> {
    let found = resolve_sign_convention(&d2_algebra())
        .ok()
        .and_then(|r| r.unique());
    if found == Some(SignConvention::WEIGHT_MINUS_ONE) {
        Ok(())
    } else {
        Err(Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: "error: built-in hat sign convention failed self-certification\n".into(),
        })
    }
}

fn load(path: &Path) -> Result<PostLieAlgebra, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse_algebra(&text).map_err(|e| input_error(format!("{}:{}: {}", path.display(), e.line, e.message)))
}

fn envelope(path: &Path, p: &PostLieAlgebra, rules: &Rules) -> Result<Envelope, Outcome> {
    let mut env = Envelope::from_post_lie(p).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    for f in &rules.without {
        env = env.without(*f);
    }
    Ok(env)
}

fn rewrite_failure(e: impl std::fmt::Display) -> Outcome {
    Outcome {
        code: EXIT_VIOLATION,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

fn verdict(text: &mut String, pass: bool) {
    text.push_str(if pass { "PASS\n" } else { "FAIL\n" });
}

fn disabled_line(text: &mut String, rules: &Rules) {
    if !rules.without.is_empty() {
        let mut tags: Vec<_> = rules.without.iter().map(|f| f.tag()).collect();
        tags.sort_unstable();
        tags.dedup();
        let _ = writeln!(text, "disabled families: {}", tags.join(", "));
    }
}

fn disabled_json(rules: &Rules) -> Vec<&'static str> {
    let mut tags: Vec<_> = rules.without.iter().map(|f| f.tag()).collect();
    tags.sort_unstable();
    tags.dedup();
    tags
}

fn list_limited<T: std::fmt::Display>(text: &mut String, items: &[T]) {
    for v in items.iter().take(TEXT_LIMIT) {
        let _ = writeln!(text, "  {v}");
    }
    if items.len() > TEXT_LIMIT {
        let _ = writeln!(text, "  ... {} more (see --json)", items.len() - TEXT_LIMIT);
    }
}

fn execute(command: &Command) -> Result<Report, Outcome> {
    certify_signs()?;
    match command {
        Command::Check { file } => check(file),
        Command::Hat { file } => show_hat(file),
        Command::Nf {
            file,
            expr,
            trace,
            rules,
        } => normal_form(file, expr, *trace, rules),
        Command::GsbCheck {
            file,
            max_deg,
            max_rdeg,
            all,
            rules,
        } => gsb_check(file, *max_deg, *max_rdeg, *all, rules),
        Command::Confluence {
            file,
            samples,
            max_deg,
            max_rdeg,
            seed,
            rules,
        } => fuzz(file, *samples, *max_deg, *max_rdeg, *seed, rules),
        Command::VerifyEmbedding { file, rules } => embedding(file, rules),
        Command::PostIdentities { file, max_deg, rules } => post_identities(file, *max_deg, rules),
        Command::Irr {
            file,
            max_deg,
            max_rdeg,
            rules,
        } => irr(file, *max_deg, *max_rdeg, rules),
    }
}

fn check(file: &Path) -> Result<Report, Outcome> {
    let p = load(file)?;
    let violations = validate_post_lie(&p);
    let pass = violations.is_empty();
    let mut text = format!("dimension {}, basis {}\n", p.dim(), p.names().join(" "));
    let _ = writeln!(text, "post-Lie axioms: {} violations", violations.len());
    list_limited(&mut text, &violations);
    verdict(&mut text, pass);
    Ok(Report {
        pass,
        text,
        json: json!({
            "command": "check",
            "dim": p.dim(),
            "basis": p.names(),
            "violations": violations,
            "pass": pass,
        }),
    })
}

fn show_hat(file: &Path) -> Result<Report, Outcome> {
    let p = load(file)?;
    let h = hat(&p).map_err(|e| input_error(format!("{}: {e}", file.display())))?;
    let n = h.n();
    let gens = h.generator_names();
    let labels = h.labels();
    let signs = SignConvention::WEIGHT_MINUS_ONE;
    let mut text = format!("sign convention (sigma, tau, rho) = {signs}, weight {WEIGHT}\n");
    text.push_str("generators:\n");
    let mut mapping = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let y = format!("{l}");
        let x = format!("{l} + {l}'");
        let _ = writeln!(text, "  {} = {y}", gens[i]);
        mapping.push(json!({ "generator": gens[i], "element": y }));
        let _ = writeln!(text, "  {} = {x}", gens[n + i]);
        mapping.push(json!({ "generator": gens[n + i], "element": x }));
    }
    text.push_str("brackets:\n");
    let mut brackets = Vec::new();
    for i in 0..h.dim() {
        for j in i + 1..h.dim() {
            let v = h.format(h.bracket_of(i, j));
            let _ = writeln!(text, "  [{}, {}] = {v}", gens[i], gens[j]);
            brackets.push(json!({ "pair": [gens[i], gens[j]], "value": v }));
        }
    }
    text.push_str("operator:\n");
    let mut r_table = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let v = h.format(&h.r(&h.generator(i)));
        let _ = writeln!(text, "  R({g}) = {v}");
        r_table.push(json!({ "generator": g, "value": v }));
    }
    text.push_str("embedding:\n");
    let mut embedding = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let v = h.format(&h.embed_vector(&p.basis(i)));
        let _ = writeln!(text, "  {l} -> {v}");
        embedding.push(json!({ "element": l, "image": v }));
    }
    let violations = validate_rb_lie(&h);
    let pass = violations.is_empty();
    let _ = writeln!(text, "Rota-Baxter Lie axioms: {} violations", violations.len());
    list_limited(&mut text, &violations);
    verdict(&mut text, pass);
    Ok(Report {
        pass,
        text,
        json: json!({
            "command": "hat",
            "signs": signs,
            "weight": WEIGHT,
            "generators": mapping,
            "brackets": brackets,
            "operator": r_table,
            "embedding": embedding,
            "violations": violations,
            "pass": pass,
        }),
    })
}

#[derive(Serialize)]
struct TraceRecord {
    family: &'static str,
    context: String,
    before: String,
    after: String,
}

fn normal_form(file: &Path, expr: &str, trace: bool, rules: &Rules) -> Result<Report, Outcome> {
    let p = load(file)?;
    let env = envelope(file, &p, rules)?;
    let e = parse_expression(expr, p.dim()).map_err(|e| input_error(format!("expression: {e}")))?;
    let f = e.eval();
    let mut reducer = env.reducer(Strategy::LeftmostInnermost);
    if trace {
        reducer = reducer.with_trace();
    }
    let nf = reducer.normal_form(&f).map_err(rewrite_failure)?;
    let steps: Vec<TraceRecord> = reducer
        .take_trace()
        .into_iter()
        .map(|s| TraceRecord {
            family: s.family,
            context: s.context.to_string(),
            before: s.before.to_string(),
            after: s.after.to_string(),
        })
        .collect();
    let mut text = format!("{nf}\n");
    if trace {
        for s in &steps {
            let _ = writeln!(text, "  ({}) at {}: {} -> {}", s.family, s.context, s.before, s.after);
        }
    }
    let mut json = json!({
        "command": "nf",
        "input": e.to_string(),
        "normal_form": nf.to_string(),
        "disabled": disabled_json(rules),
        "pass": true,
    });
    if trace {
        json["trace"] = serde_json::to_value(&steps).expect("trace serializes");
    }
    Ok(Report { pass: true, text, json })
}

fn gsb_check(file: &Path, max_deg: usize, max_rdeg: u32, all: bool, rules: &Rules) -> Result<Report, Outcome> {
    let p = load(file)?;
    let env = envelope(file, &p, rules)?;
    let instances = env.instantiate_relations(max_deg, max_rdeg);
    let report = check_pairs(&instances, env.rules(), max_deg, max_rdeg).map_err(rewrite_failure)?;
    let pass = report.pass();
    let mut text = String::new();
    disabled_line(&mut text, rules);
    let _ = writeln!(
        text,
        "relation instances: {} (max-deg {max_deg}, max-rdeg {max_rdeg})",
        report.instances
    );
    let _ = writeln!(
        text,
        "compositions: {} (intersection {}, inclusion {})",
        report.compositions.len(),
        report.count(CompositionKind::Intersection),
        report.count(CompositionKind::Inclusion)
    );
    let _ = writeln!(text, "nontrivial: {}", report.nontrivial);
    for c in &report.compositions {
        if all || !c.trivial {
            let _ = writeln!(text, "  {c}");
        }
    }
    verdict(&mut text, pass);
    Ok(Report {
        pass,
        text,
        json: json!({
            "command": "gsb-check",
            "disabled": disabled_json(rules),
            "report": report,
            "pass": pass,
        }),
    })
}

fn fuzz(
    file: &Path,
    samples: usize,
    max_deg: usize,
    max_rdeg: u32,
    seed: u64,
    rules: &Rules,
) -> Result<Report, Outcome> {
    if max_deg == 0 {
        return Err(input_error("--max-deg must be at least 1"));
    }
    let p = load(file)?;
    let env = envelope(file, &p, rules)?;
    let report = confluence(&env, samples, max_deg, max_rdeg, seed).map_err(rewrite_failure)?;
    let pass = report.pass();
    let mut text = String::new();
    disabled_line(&mut text, rules);
    let _ = writeln!(
        text,
        "samples: {samples} (max-deg {max_deg}, max-rdeg {max_rdeg}, seed {seed})"
    );
    let _ = writeln!(
        text,
        "strategies: {} against {}",
        report.strategies.join(", "),
        Strategy::LeftmostInnermost
    );
    let _ = writeln!(text, "mismatches: {}", report.mismatches.len());
    let lines: Vec<String> = report
        .mismatches
        .iter()
        .map(|m| {
            format!(
                "sample {} {}: {} gives {}, expected {}",
                m.sample, m.strategy, m.input, m.got, m.expected
            )
        })
        .collect();
    list_limited(&mut text, &lines);
    verdict(&mut text, pass);
    Ok(Report {
        pass,
        text,
        json: json!({
            "command": "confluence",
            "disabled": disabled_json(rules),
            "report": report,
            "pass": pass,
        }),
    })
}

fn embedding(file: &Path, rules: &Rules) -> Result<Report, Outcome> {
    let p = load(file)?;
    let env = envelope(file, &p, rules)?;
    let report = verify_embedding_in(&p, &env).map_err(rewrite_failure)?;
    let pass = report.pass();
    let mut text = String::new();
    disabled_line(&mut text, rules);
    text.push_str("images:\n");
    for (l, img) in p.names().iter().zip(&report.images) {
        let _ = writeln!(text, "  {l} -> {img}");
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(text, "independent: {}", yes(report.independent));
    let _ = writeln!(text, "irreducible: {}", yes(report.irreducible));
    text.push_str("morphism table:\n");
    for r in &report.rows {
        let [a, b] = &r.pair;
        let _ = writeln!(
            text,
            "  {a} . {b}: {} (expected {}); [{a}, {b}]: {} (expected {}) {}",
            r.product,
            r.expected_product,
            r.bracket,
            r.expected_bracket,
            if r.ok { "ok" } else { "MISMATCH" }
        );
    }
    verdict(&mut text, pass);
    Ok(Report {
        pass,
        text,
        json: json!({
            "command": "verify-embedding",
            "disabled": disabled_json(rules),
            "report": report,
            "pass": pass,
        }),
    })
}

fn post_identities(file: &Path, max_deg: usize, rules: &Rules) -> Result<Report, Outcome> {
    let p = load(file)?;
    let env = envelope(file, &p, rules)?;
    let report = verify_postassociative(&env, max_deg).map_err(rewrite_failure)?;
    let pass = report.pass();
    let mut text = String::new();
    disabled_line(&mut text, rules);
    let _ = writeln!(
        text,
        "irreducible words: {} (max-deg {}, max-rdeg {})",
        report.words, report.max_deg, report.max_deg_r
    );
    let _ = writeln!(text, "triples: {}, identity checks: {}", report.triples, report.checks);
    let _ = writeln!(text, "violations: {}", report.violations.len());
    let lines: Vec<String> = report
        .violations
        .iter()
        .map(|v| {
            format!(
                "identity {} {} at ({}): {} != {}",
                v.identity,
                v.statement,
                v.triple.join(", "),
                v.lhs,
                v.rhs
            )
        })
        .collect();
    list_limited(&mut text, &lines);
    verdict(&mut text, pass);
    Ok(Report {
        pass,
        text,
        json: json!({
            "command": "post-identities",
            "disabled": disabled_json(rules),
            "report": report,
            "pass": pass,
        }),
    })
}

fn irr(file: &Path, max_deg: usize, max_rdeg: u32, rules: &Rules) -> Result<Report, Outcome> {
    let p = load(file)?;
    let env = envelope(file, &p, rules)?;
    let words: Vec<String> = env
        .irr_words(max_deg, max_rdeg)
        .iter()
        .map(ToString::to_string)
        .collect();
    let mut text = String::new();
    disabled_line(&mut text, rules);
    let _ = writeln!(
        text,
        "irreducible words: {} (max-deg {max_deg}, max-rdeg {max_rdeg})",
        words.len()
    );
    for w in &words {
        let _ = writeln!(text, "  {w}");
    }
    Ok(Report {
        pass: true,
        text,
        json: json!({
            "command": "irr",
            "disabled": disabled_json(rules),
            "max_deg": max_deg,
            "max_deg_r": max_rdeg,
            "count": words.len(),
            "words": words,
            "pass": true,
        }),
    })
}
