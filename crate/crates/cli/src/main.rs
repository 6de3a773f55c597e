use std::io::Write;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use qvdc_core::arith::{poly, Window};
use qvdc_core::complete::{sigma, Method, RationalFunctionZ};
use qvdc_core::opt::{
    divisor_level, gamma_left_limit, gamma_of_theta, level_max_gamma, optimize_word_with, subconvex_delta,
    validity_range, LevelProblem, LpVariant, Objective, SearchOptions, GAMMA_DOMAIN,
};
use qvdc_core::pairs::{word_on_seed, Family, ProcessWord};
use qvdc_core::quadratic::{correspondence, roots_minus_one, two_squares, verify_correspondence_upto, weyl_rho};
use qvdc_core::rational::{parse as parse_rational, ratio, to_f64, to_pq, Rational};
use qvdc_core::sieve::{build_table, bt_upper_constant, congruence_sum_check};
use qvdc_core::trace::{
    empirical_pair_check, eval_trace, incomplete_sum, trace_table, CompositeTraceSpec, TraceSpec,
};
use qvdc_core::verify::{format_line, run_suite, VerifyOptions, CRITERIA, DEFAULT_SEED};
use qvdc_core::Error;
use serde_json::json;

mod output;

use output::{Cell, Doc, Format, Row};

#[derive(Parser, Debug)]
#[command(name = "qvdc", version, about = "Exponent pairs, exponential sums and sieve levels")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Master seed for randomised suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Time cap in seconds for the word search.
    #[arg(long, global = true, default_value_t = 60.0)]
    time_cap: f64,
    /// Include wall-clock timings (output is then no longer reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Exponent pairs from process words.
    #[command(subcommand)]
    Pair(PairCmd),
    /// Maximal level gamma at one theta.
    Level(LevelArgs),
    /// Rows of (theta, gamma).
    GammaCurve(CurveArgs),
    /// Complete sum of e(f1/f2 (a) / c).
    Csum(CsumArgs),
    /// Trace functions and their incomplete sums.
    #[command(subcommand)]
    Trace(TraceCmd),
    /// Roots of a^2 + 1 and sums of two squares.
    #[command(subcommand)]
    Quad(QuadCmd),
    /// Linear sieve functions and congruence sums.
    #[command(subcommand)]
    Sieve(SieveCmd),
    /// Brun-Titchmarsh constant 2/gamma(theta).
    Bt {
        #[arg(long)]
        theta: String,
    },
    /// Acceptance suite.
    Verify {
        /// `all` or a comma-separated list of criterion numbers.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
enum PairCmd {
    /// Applies a word such as `BA3` (rightmost letter first) to the seed (0, 1, 1/2).
    Word { word: String },
    /// Branch-and-bound search over words.
    Optimize {
        #[arg(long, default_value = "rankin")]
        objective: String,
        #[arg(long, default_value_t = 30)]
        depth: usize,
    },
}

#[derive(Args, Debug)]
struct LevelArgs {
    #[arg(long)]
    theta: String,
    /// Word giving the pair; default reports A, A2 and A3.
    #[arg(long)]
    word: Option<String>,
    #[arg(long, default_value = "table2")]
    variant: String,
    #[arg(long, default_value = "ak")]
    family: String,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long, default_value = "1/2")]
    from: String,
    #[arg(long, default_value = "16/17")]
    to: String,
    #[arg(long, default_value = "1/200")]
    step: String,
}

#[derive(Args, Debug)]
struct CsumArgs {
    #[arg(long)]
    f1: String,
    #[arg(long, default_value = "1")]
    f2: String,
    #[arg(long)]
    modulus: u64,
    #[arg(long, default_value = "direct")]
    method: String,
}

#[derive(Subcommand, Debug)]
enum TraceCmd {
    /// Values of a trace function mod p; all of them without --x.
    Eval {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        x: Option<u64>,
    },
    /// sum_{M < n <= M + N} K(n) for a composite spec `q=p1*p2;p1=..;*=..`.
    Sum {
        #[arg(long)]
        spec: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        m: i64,
        #[arg(long)]
        n: u64,
    },
    /// Max of |S| / ((q/N)^k N^l) over shifts, per word and length.
    Pairs {
        #[arg(long)]
        spec: String,
        #[arg(long, value_delimiter = ',', default_value = "A,A2,BA2")]
        words: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum QuadCmd {
    Roots {
        #[arg(long)]
        ell: u64,
    },
    /// Proper representations paired with their roots.
    Reps {
        #[arg(long)]
        ell: u64,
    },
    Weyl {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        ell: u64,
    },
    /// Bijection scan over 2..=max.
    Verify {
        #[arg(long)]
        max: u64,
    },
}

#[derive(Subcommand, Debug)]
enum SieveCmd {
    /// Upper function F(s).
    #[command(name = "F")]
    Upper {
        #[arg(long)]
        s: f64,
        #[arg(long, default_value = "1/1024")]
        h: String,
    },
    /// Lower function f(s).
    #[command(name = "f")]
    Lower {
        #[arg(long)]
        s: f64,
        #[arg(long, default_value = "1/1024")]
        h: String,
    },
    /// F and f on a grid.
    Table {
        #[arg(long, default_value_t = 12.0)]
        smax: f64,
        #[arg(long, default_value = "1/1024")]
        h: String,
        /// Print every k-th grid point.
        #[arg(long, default_value_t = 64)]
        every: usize,
        /// Same as --format.
        #[arg(long, value_enum)]
        out: Option<Format>,
    },
    /// A_d against its main term and the truncated Poisson sum.
    Csum {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value = "bump")]
        window: String,
    },
}

/// A finished verb: the document and whether its checks passed.
struct Outcome {
    doc: Doc,
    ok: bool,
    format: Option<Format>,
}

impl From<Doc> for Outcome {
    fn from(doc: Doc) -> Self {
        Outcome { doc, ok: true, format: None }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = out.doc.write(out.format.unwrap_or(cli.format), &mut stdout) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            let _ = stdout.flush();
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(
                e.downcast_ref::<Error>(),
                Some(Error::Parse(_) | Error::Domain(_) | Error::Precondition(_) | Error::LengthMismatch { .. })
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn rational(s: &str) -> anyhow::Result<Rational> {
    Ok(parse_rational(s)?)
}

fn step_size(s: &str) -> anyhow::Result<f64> {
    Ok(to_f64(&rational(s)?))
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let time_cap = Duration::from_secs_f64(cli.time_cap.max(0.0));
    Ok(match &cli.verb {
        Verb::Pair(PairCmd::Word { word }) => pair_word(word)?.into(),
        Verb::Pair(PairCmd::Optimize { objective, depth }) => {
            let obj = Objective::parse(objective)?;
            let opts = SearchOptions { time_cap, sample_seed: cli.seed, ..SearchOptions::default() };
            let r = optimize_word_with(obj, *depth, opts);
            let sample: Vec<_> = r
                .pruned_sample
                .iter()
                .map(|p| json!({"word": p.word.compact(), "bound": to_pq(&p.bound), "incumbent": to_pq(&p.incumbent)}))
                .collect();
            let mut row: Row = row![
                "objective" => obj.name(),
                "best_word" => r.best_word.compact(),
                "best_value" => &r.best_value,
                "kappa" => &r.best_triple.kappa,
                "lambda" => &r.best_triple.lambda,
                "nu" => &r.best_triple.nu,
                "subconvex_delta" => subconvex_delta(&r.best_triple),
                "divisor_level" => divisor_level(&r.best_triple),
                "nodes_expanded" => r.nodes_expanded,
                "nodes_pruned" => r.nodes_pruned,
                "depth_cap" => r.depth_cap,
                "exhaustive" => r.exhaustive,
            ];
            if cli.timings {
                row.push(("elapsed_ms", r.elapsed_ms.into()));
            }
            if cli.format == Format::Json {
                row.push(("pruned_sample", serde_json::Value::Array(sample).into()));
            }
            Doc::Record(row).into()
        }
        Verb::Level(a) => level(a)?.into(),
        Verb::GammaCurve(a) => gamma_curve(a)?.into(),
        Verb::Csum(a) => {
            let lam = RationalFunctionZ::new(poly::parse(&a.f1)?, poly::parse(&a.f2)?)?;
            let v = sigma(&lam, a.modulus, Method::parse(&a.method)?)?;
            Doc::Record(row![
                "lambda" => lam.to_string(),
                "modulus" => v.modulus,
                "method" => a.method.to_ascii_lowercase(),
                "value" => v.value,
                "abs" => v.value.norm(),
                "excluded" => v.excluded,
            ])
            .into()
        }
        Verb::Trace(t) => trace(t)?.into(),
        Verb::Quad(q) => quad(q)?,
        Verb::Sieve(s) => sieve(s)?,
        Verb::Bt { theta } => {
            let t = rational(theta)?;
            Doc::Record(row![
                "theta" => &t,
                "gamma" => gamma_of_theta(&t)?,
                "constant" => qvdc_core::opt::bt_constant(&t)?,
                "constant_float" => bt_upper_constant(&t)?,
            ])
            .into()
        }
        Verb::Verify { suite } => verify(suite, cli, time_cap)?,
    })
}

fn pair_word(word: &str) -> anyhow::Result<Doc> {
    let w = ProcessWord::parse(word)?;
    let t = word_on_seed(word)?;
    Ok(Doc::Record(row![
        "word" => w.compact(),
        "canonical" => w.canonical().compact(),
        "kappa" => &t.kappa,
        "lambda" => &t.lambda,
        "nu" => &t.nu,
        "kappa_plus_lambda" => &t.kappa + &t.lambda,
        "in_box" => t.in_box(),
    ]))
}

fn level(a: &LevelArgs) -> anyhow::Result<Doc> {
    let theta = rational(&a.theta)?;
    let variant = LpVariant::parse(&a.variant)?;
    let family = Family::parse(&a.family)?;
    let words: Vec<String> = match &a.word {
        Some(w) => vec![w.clone()],
        None => ["A", "A2", "A3"].iter().map(|s| s.to_string()).collect(),
    };
    let mut rows = Vec::new();
    for w in words {
        let pair = word_on_seed(&w)?;
        let valid = validity_range(&pair, variant, family).ok();
        let r = level_max_gamma(&LevelProblem::new(theta.clone(), pair.clone(), variant, family));
        let mut row: Row = row![
            "word" => ProcessWord::parse(&w)?.compact(),
            "kappa" => &pair.kappa,
            "lambda" => &pair.lambda,
            "theta" => &theta,
            "variant" => variant.name(),
        ];
        match r {
            Ok(r) => {
                let binding: Vec<String> = r.binding.iter().map(|b| format!("{b:?}")).collect();
                row.extend(row![
                    "gamma" => r.gamma,
                    "alpha" => r.alpha,
                    "beta" => r.beta,
                    "binding" => binding.join(" "),
                ]);
            }
            Err(Error::Infeasible) if a.word.is_none() => {
                row.extend(row!["gamma" => "infeasible", "alpha" => "", "beta" => "", "binding" => ""]);
            }
            Err(e) => return Err(e.into()),
        }
        row.push(("valid_below", valid.map_or(Cell::Text("none".into()), Cell::Rat)));
        rows.push(row);
    }
    Ok(if a.word.is_some() { Doc::Record(rows.remove(0)) } else { Doc::Table(rows) })
}

fn gamma_curve(a: &CurveArgs) -> anyhow::Result<Doc> {
    let (from, to, step) = (rational(&a.from)?, rational(&a.to)?, rational(&a.step)?);
    if step <= Rational::from_integer(0.into()) {
        return Err(Error::Domain("step must be positive".into()).into());
    }
    let ((a0, b0), (a1, b1)) = GAMMA_DOMAIN;
    let (lo, hi) = (ratio(a0, b0), ratio(a1, b1));
    if from < lo || to > hi || from > to {
        return Err(Error::Domain(format!("need {} <= from <= to <= {}", to_pq(&lo), to_pq(&hi))).into());
    }
    let mut rows = Vec::new();
    let mut theta = from;
    while theta <= to {
        if theta < hi {
            rows.push(row!["theta" => &theta, "gamma" => gamma_of_theta(&theta)?, "kind" => "value"]);
        }
        theta += &step;
    }
    if to == hi {
        rows.push(row!["theta" => &hi, "gamma" => gamma_left_limit(&hi)?, "kind" => "left-limit"]);
    }
    Ok(Doc::Table(rows))
}

fn trace(t: &TraceCmd) -> anyhow::Result<Doc> {
    Ok(match t {
        TraceCmd::Eval { spec, p, x } => {
            let s = TraceSpec::parse(spec)?;
            match x {
                Some(x) => Doc::Record(row![
                    "spec" => s.to_string(),
                    "p" => *p,
                    "x" => *x,
                    "value" => eval_trace(&s, *p, *x)?,
                    "conductor" => s.conductor_bound,
                ]),
                None => Doc::Table(
                    trace_table(&s, *p)?.into_iter().enumerate().map(|(x, v)| row!["x" => x, "value" => v]).collect(),
                ),
            }
        }
        TraceCmd::Sum { spec, m, n } => {
            let s = CompositeTraceSpec::parse(spec)?;
            let v = incomplete_sum(&s, *m, *n)?;
            Doc::Record(row![
                "spec" => s.to_string(),
                "modulus" => s.modulus(),
                "m" => *m,
                "n" => *n,
                "value" => v,
                "abs" => v.norm(),
            ])
        }
        TraceCmd::Pairs { spec, words, lengths } => {
            let s = CompositeTraceSpec::parse(spec)?;
            let q = s.modulus() as f64;
            let lengths: Vec<u64> = if lengths.is_empty() {
                [0.4, 0.5, 0.6].iter().map(|e| q.powf(*e).floor() as u64).collect()
            } else {
                lengths.clone()
            };
            let mut rows = Vec::new();
            for w in words {
                let r = empirical_pair_check(&s, &word_on_seed(w)?, &lengths)?;
                for row in r.rows {
                    rows.push(row![
                        "word" => w.as_str(),
                        "kappa" => &r.pair.kappa,
                        "lambda" => &r.pair.lambda,
                        "length" => row.length,
                        "scale" => row.scale,
                        "max_abs" => row.max_abs,
                        "worst_shift" => row.worst_shift,
                        "ratio" => row.max_ratio,
                    ]);
                }
            }
            Doc::Table(rows)
        }
    })
}

fn quad(q: &QuadCmd) -> anyhow::Result<Outcome> {
    Ok(match q {
        QuadCmd::Roots { ell } => {
            let r = roots_minus_one(*ell);
            let roots: Vec<String> = r.roots.iter().map(u64::to_string).collect();
            Doc::Record(row!["ell" => *ell, "rho" => r.rho(), "roots" => roots.join(" ")]).into()
        }
        QuadCmd::Reps { ell } => {
            if roots_minus_one(*ell).roots.is_empty() || *ell < 2 {
                let reps = two_squares(*ell);
                Doc::Table(reps.iter().map(|r| row!["r" => r.r, "s" => r.s, "root" => ""]).collect()).into()
            } else {
                let c = correspondence(*ell)?;
                let rows = c.pairs.iter().map(|(a, rep)| row!["r" => rep.r, "s" => rep.s, "root" => *a]).collect();
                Outcome { doc: Doc::Table(rows), ok: c.bijective && c.identities_hold, format: None }
            }
        }
        QuadCmd::Weyl { n, ell } => {
            Doc::Record(row!["n" => *n, "ell" => *ell, "value" => weyl_rho(*n, *ell)]).into()
        }
        QuadCmd::Verify { max } => {
            let bad = verify_correspondence_upto(*max);
            let doc = Doc::Record(row![
                "max" => *max,
                "pass" => bad.is_none(),
                "first_failure" => bad.map_or(Cell::Text("none".into()), Cell::from),
            ]);
            Outcome { doc, ok: bad.is_none(), format: None }
        }
    })
}

fn sieve(cmd: &SieveCmd) -> anyhow::Result<Outcome> {
    Ok(match cmd {
        SieveCmd::Upper { s, h } | SieveCmd::Lower { s, h } => {
            let upper = matches!(cmd, SieveCmd::Upper { .. });
            let table = build_table((s.ceil() + 1.0).clamp(3.0, 20.0), step_size(h)?)?;
            let v = if upper { table.upper(*s)? } else { table.lower(*s)? };
            Doc::Record(row!["function" => if upper { "F" } else { "f" }, "s" => *s, "value" => v]).into()
        }
        SieveCmd::Table { smax, h, every, out } => {
            let table = build_table(*smax, step_size(h)?)?;
            let every = (*every).max(1);
            let rows = table
                .grid()
                .enumerate()
                .filter(|(i, _)| i % every == 0)
                .map(|(_, (s, big, small))| row!["s" => s, "F" => big, "f" => small])
                .collect();
            Outcome { doc: Doc::Table(rows), ok: true, format: *out }
        }
        SieveCmd::Csum { x, d, ell, window } => {
            let r = congruence_sum_check(*x, *d, *ell, Window::parse(window)?)?;
            let doc = Doc::Record(row![
                "x" => r.x,
                "d" => r.d,
                "ell" => r.ell,
                "rho" => r.rho,
                "a_d" => r.a_d,
                "main" => r.main,
                "remainder" => r.remainder,
                "poisson" => r.poisson,
                "terms" => r.terms,
                "tail_bound" => r.tail_bound,
                "pass" => r.pass,
            ]);
            Outcome { doc, ok: r.pass, format: None }
        }
    })
}

fn verify(suite: &str, cli: &Cli, time_cap: Duration) -> anyhow::Result<Outcome> {
    let ids: Vec<u32> = if suite.trim() == "all" {
        CRITERIA.iter().map(|c| c.id).collect()
    } else {
        suite
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|id| CRITERIA.iter().any(|c| c.id == *id))
                    .ok_or_else(|| Error::Parse(format!("unknown criterion {t:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    let reports = run_suite(&ids, &VerifyOptions { seed: cli.seed, time_cap });
    let ok = reports.iter().all(|r| r.pass);
    if cli.format == Format::Text {
        for r in &reports {
            eprintln!("{}", format_line(r));
        }
    }
    let rows = reports
        .iter()
        .map(|r| {
            let mut row: Row = row!["id" => r.id, "name" => r.name, "pass" => r.pass, "detail" => r.detail.clone()];
            if cli.timings {
                row.extend(row!["elapsed_ms" => r.elapsed_ms as u64, "budget_ms" => r.budget_ms as u64]);
            }
            row
        })
        .collect();
    Ok(Outcome { doc: Doc::Table(rows), ok, format: None })
}
