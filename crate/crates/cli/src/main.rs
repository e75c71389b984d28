use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use sullivan::algebra::{Derivation, FreeCga};
use sullivan::cohomology::{Presentation, Surjectivity};
use sullivan::dsl::{json, AlgebraDocument};
use sullivan::fixtures::{fixture, FIXTURES};
use sullivan::formality::{
    decide_formality, map_formality_certificate, model_of, module_derivation_replay,
    negative_derivations, tncz_analyze, Certificate, ObstructionStatus, Outcome,
};
use sullivan::models::{bigraded_model, minimal_model};
use sullivan::{Error, Q};

/// Models and formality of simply-connected CDGAs over Q.
#[derive(Parser)]
#[command(name = "sullivan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// A `.cdga` or `.json` file, or a bundled fixture such as `fixtures/s2`.
    input: String,
    /// Degree through which to compute.
    #[arg(long)]
    cap: u32,
    /// Canonical JSON output.
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Plain text output (the default).
    #[arg(long)]
    text: bool,
    /// Shuffle the generator declarations with this seed first.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Formal,
    Nonformal,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers and representative cocycles.
    Cohomology(Common),
    /// The cohomology algebra with its products.
    Presentation(Common),
    /// The minimal Sullivan model.
    MinimalModel(Common),
    /// The bigraded model of the cohomology.
    BigradedModel(Common),
    /// A filtered model, with D - d split by stage.
    FilteredModel(Common),
    /// Decide formality through the cap.
    Formality {
        #[command(flatten)]
        common: Common,
        /// Exit with status 4 unless the verdict matches.
        #[arg(long)]
        expect: Option<Expect>,
    },
    /// Negative-degree derivations of the cohomology.
    Halperin(Common),
    /// Whether the fiber cohomology is a quotient of the total.
    Tncz(Common),
    /// Try to certify the projection of a fibration as a formal map.
    MapFormality(Common),
    /// Compare a base deformation with its image upstairs.
    ReplayDerivations {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        stage: u32,
    },
    /// List the bundled fixtures.
    Fixtures {
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Parse(String),
    Invariant(String),
    Expect(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Expect(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Invariant(m) | Failure::Expect(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Dsl(e) => Failure::Parse(e.to_string()),
            Error::CapTooSmall { .. } => Failure::Usage(e.to_string()),
            e => Failure::Invariant(e.to_string()),
        }
    }
}

type Report = Result<String, Failure>;

fn read_document(input: &str) -> Result<AlgebraDocument, Failure> {
    let path = Path::new(input);
    let (text, is_json) = if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{input}: {e}")))?;
        (text, path.extension().is_some_and(|x| x == "json"))
    } else if let Some(f) = fixture(input) {
        (f.text.to_string(), false)
    } else {
        return Err(Failure::Usage(format!(
            "{input}: no such file or fixture (run `sullivan fixtures` for the list)"
        )));
    };
    let doc = if is_json {
        AlgebraDocument::load_json(&text)
    } else {
        AlgebraDocument::load(&text)
    };
    doc.map_err(|e| match e {
        Error::Dsl(d) => Failure::Parse(format!("{input}:{d}")),
        e => Failure::Parse(format!("{input}: {e}")),
    })
}

fn shuffled(doc: AlgebraDocument, seed: u64) -> AlgebraDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..doc.section.generators.len()).collect();
    let mut base: Vec<usize> = (0..doc
        .fibration
        .as_ref()
        .map_or(0, |f| f.base.generators.len()))
        .collect();
    order.shuffle(&mut rng);
    base.shuffle(&mut rng);
    doc.permuted(&order, &base)
}

fn prepare(c: &Common) -> Result<AlgebraDocument, Failure> {
    let mut doc = read_document(&c.input)?;
    for w in &doc.warnings {
        eprintln!("warning: {}:{w}", c.input);
    }
    let need = doc.max_generator_degree() + 2;
    if c.cap < need {
        return Err(Failure::Usage(format!(
            "--cap {} is too small for {}: its generators go up to degree {}, so use --cap {need} or more",
            c.cap,
            c.input,
            doc.max_generator_degree()
        )));
    }
    if let Some(seed) = c.seed {
        doc = shuffled(doc, seed);
    }
    Ok(doc)
}

fn base_len(doc: &AlgebraDocument, input: &str) -> Result<usize, Failure> {
    doc.base_len().ok_or_else(|| {
        Failure::Usage(format!(
            "{input} is not a fibration; it needs a `base` section"
        ))
    })
}

fn render(c: &Common, v: Value, text: String) -> String {
    if c.json {
        json::render(&v)
    } else {
        text
    }
}

fn list(xs: impl IntoIterator<Item = impl ToString>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn derivation_lines(
    out: &mut String,
    alg: &FreeCga,
    values: &FreeCga,
    theta: &Derivation<Q>,
    indent: &str,
) {
    if theta.vanishes() {
        let _ = writeln!(out, "{indent}0");
    }
    for (g, v) in theta.values() {
        let _ = writeln!(
            out,
            "{indent}{} ↦ {}",
            alg.generator(*g).name,
            values.format(v)
        );
    }
}

fn cohomology_text(name: &str, alg: &FreeCga, p: &Presentation<Q>, cap: u32) -> String {
    let mut out = format!("cohomology of {name} through degree {cap}\n");
    let _ = writeln!(out, "betti: {}", list(p.algebra.betti()));
    for d in &p.degrees {
        if d.degree == 0 || d.dim() == 0 {
            continue;
        }
        let reps: Vec<String> = d.representatives().iter().map(|z| alg.format(z)).collect();
        let _ = writeln!(out, "H^{}: {}", d.degree, reps.join(", "));
    }
    out
}

fn run(cmd: Command) -> Report {
    match cmd {
        Command::Fixtures { json: as_json } => {
            if as_json {
                let v: Vec<Value> = FIXTURES
                    .iter()
                    .map(|f| serde_json::json!({ "name": f.name, "summary": f.summary }))
                    .collect();
                return Ok(json::render(&Value::Array(v)));
            }
            let width = FIXTURES.iter().map(|f| f.name.len()).max().unwrap_or(0);
            Ok(FIXTURES
                .iter()
                .map(|f| format!("{:width$}  {}\n", f.name, f.summary))
                .collect())
        }
        Command::Cohomology(c) => {
            let doc = prepare(&c)?;
            let (real, p) = doc.cohomology(c.cap)?;
            let text = cohomology_text(&doc.name, &real.algebra, &p, c.cap);
            Ok(render(&c, json::cohomology(&real.algebra, &p), text))
        }
        Command::Presentation(c) => {
            let doc = prepare(&c)?;
            let (real, p) = doc.cohomology(c.cap)?;
            let mut text = cohomology_text(&doc.name, &real.algebra, &p, c.cap);
            let h = &p.algebra;
            let gens: Vec<String> = h
                .generators()
                .iter()
                .map(|(n, k)| h.labels(*n)[*k].clone())
                .collect();
            let _ = writeln!(text, "indecomposables: {}", gens.join(", "));
            for ((i, j), rows) in h.products() {
                for (k, row) in rows.iter().enumerate() {
                    if row.iter().all(num_zero) {
                        continue;
                    }
                    let (a, b) = (k / h.dim(*j), k % h.dim(*j));
                    let terms: Vec<String> = row
                        .iter()
                        .zip(h.labels(i + j))
                        .filter(|(x, _)| !num_zero(x))
                        .map(|(x, l)| format!("{}·{l}", sullivan::scalar::format_rational(x)))
                        .collect();
                    let _ = writeln!(
                        text,
                        "{} * {} = {}",
                        h.labels(*i)[a],
                        h.labels(*j)[b],
                        terms.join(" + ")
                    );
                }
            }
            Ok(render(&c, json::presentation(&real.algebra, &p), text))
        }
        Command::MinimalModel(c) => {
            let doc = prepare(&c)?;
            let real = doc.realize(c.cap)?;
            let m = minimal_model(&real, c.cap)?;
            let mut text = format!("minimal model of {} through degree {}\n", doc.name, c.cap);
            for (g, gen) in m.cdga.algebra.generators().iter().enumerate() {
                let _ = writeln!(
                    text,
                    "{} (degree {}): d = {}",
                    gen.name,
                    gen.degree,
                    m.cdga.algebra.format(&m.cdga.d_gen(g))
                );
            }
            Ok(render(&c, json::minimal_model(&m, &real.algebra), text))
        }
        Command::BigradedModel(c) => {
            let doc = prepare(&c)?;
            let (_, p) = doc.cohomology(c.cap + 1)?;
            let m = bigraded_model(&p.algebra, c.cap)?;
            let mut text = format!("bigraded model of {} through degree {}\n", doc.name, c.cap);
            for ((n, lower), k) in m.generator_counts() {
                let _ = writeln!(text, "V_{lower}^{n}: {k}");
            }
            for (g, gen) in m.algebra.generators().iter().enumerate() {
                let _ = writeln!(
                    text,
                    "{} ({}, lower {}): d = {}",
                    gen.name,
                    gen.degree,
                    gen.lower,
                    m.algebra.format(&m.d.value(g))
                );
            }
            Ok(render(&c, json::bigraded_model(&m), text))
        }
        Command::FilteredModel(c) => {
            let doc = prepare(&c)?;
            let m = model_of(&doc, c.cap)?;
            let mut text = format!(
                "filtered model of {} through degree {}\n",
                doc.name, m.valid_through
            );
            for g in m.domain() {
                let gen = m.algebra.generator(g);
                let _ = writeln!(
                    text,
                    "{} ({}, lower {}): D = {}",
                    gen.name,
                    gen.degree,
                    gen.lower,
                    m.algebra.format(&m.big_d.value(g))
                );
            }
            for (i, di) in m.deformations() {
                let _ = writeln!(text, "d_{i}:");
                derivation_lines(&mut text, &m.algebra, &m.algebra, &di, "  ");
            }
            Ok(render(&c, json::filtered_model(&m), text))
        }
        Command::Formality { common: c, expect } => {
            let doc = prepare(&c)?;
            let v = decide_formality(&doc, c.cap)?;
            let alg = &v.model.algebra;
            let mut text = format!("{}\n", v.outcome.label());
            if v.transcript.is_empty() {
                let _ = writeln!(text, "gauge transcript: empty");
            } else {
                let _ = writeln!(text, "gauge transcript:");
            }
            for step in &v.transcript {
                let _ = writeln!(text, "  stage {}: mu =", step.stage);
                derivation_lines(&mut text, alg, alg, &step.witness, "    ");
            }
            if let Outcome::NonFormal { stage, obstruction } = &v.outcome {
                let _ = writeln!(text, "representative of o_{stage} (d_{stage}):");
                derivation_lines(&mut text, alg, alg, &obstruction.representative, "  ");
                for g in obstruction.representative.values().keys() {
                    let gen = &alg.generator(*g).name;
                    let _ = writeln!(text, "D({gen}) = {}", alg.format(&v.model.big_d.value(*g)));
                }
                let _ = writeln!(
                    text,
                    "no mu with [d, mu] = d_{stage} on generators through degree {}",
                    obstruction.rows_through
                );
            }
            let out = render(&c, json::verdict(&v), text);
            if let Some(e) = expect {
                if (e == Expect::Formal) != v.outcome.is_formal() {
                    print!("{out}");
                    return Err(Failure::Expect(format!(
                        "expected a different verdict, got {}",
                        v.outcome.label()
                    )));
                }
            }
            Ok(out)
        }
        Command::Halperin(c) => {
            let doc = prepare(&c)?;
            let (_, p) = doc.cohomology(c.cap)?;
            let r = negative_derivations(&p.algebra, doc.max_generator_degree())?;
            let depth = p
                .algebra
                .max_generator_degree()
                .max(doc.max_generator_degree());
            let mut text = if r.halperin {
                format!("no negative-degree derivations in degrees -1 to -{depth}\n")
            } else {
                "negative-degree derivations found\n".to_string()
            };
            for d in r.degrees.iter().filter(|d| !d.basis.is_empty()) {
                let _ = writeln!(text, "degree {}: dimension {}", d.q, d.basis.len());
            }
            Ok(render(&c, json::halperin(&r), text))
        }
        Command::Tncz(c) => {
            let doc = prepare(&c)?;
            let base = base_len(&doc, &c.input)?;
            let real = doc.realize(c.cap)?;
            let r = tncz_analyze(&real, base, c.cap)?;
            let mut text = match r.result {
                Surjectivity::Surjective => "TNCZ\n".to_string(),
                Surjectivity::FailsAt(n) => {
                    format!("not TNCZ: H(total) → H(fiber) misses degree {n}\n")
                }
            };
            let _ = writeln!(text, "fiber betti: {}", list(&r.fiber_betti));
            let _ = writeln!(text, "image ranks: {}", list(&r.ranks));
            Ok(render(&c, json::tncz(&r), text))
        }
        Command::MapFormality(c) => {
            let doc = prepare(&c)?;
            let base = base_len(&doc, &c.input)?;
            let r = map_formality_certificate(&doc, base, c.cap)?;
            let mut text = match &r.certificate {
                Certificate::Certified => "Certified\n".to_string(),
                Certificate::NotCertified(why) => format!("NotCertified: {why}\n"),
            };
            let _ = writeln!(text, "base: {}", r.base.label());
            let _ = writeln!(text, "total: {}", r.total.label());
            for step in &r.transcript {
                let _ = writeln!(text, "stage {}: mu =", step.stage);
                derivation_lines(&mut text, &r.algebra, &r.algebra, &step.witness, "  ");
            }
            Ok(render(&c, json::certificate(&r), text))
        }
        Command::ReplayDerivations { common: c, stage } => {
            let doc = prepare(&c)?;
            let base = base_len(&doc, &c.input)?;
            let r = module_derivation_replay(&doc, base, stage, c.cap)?;
            let status = |s: &ObstructionStatus<Q>| match s {
                ObstructionStatus::Zero => "zero",
                ObstructionStatus::Exact(_) => "exact",
                ObstructionStatus::NonExact => "not exact",
            };
            let mut text = format!("stage {stage}, through degree {}\n", r.top);
            let _ = writeln!(text, "j'(d_{stage}') = j(d_{stage}): {}", r.j_matches);
            let _ = writeln!(text, "j(d_{stage}) upstairs: {}", status(&r.upstairs));
            let _ = writeln!(text, "d_{stage} downstairs: {}", status(&r.downstairs));
            if let Some(ok) = r.pulled_back {
                let _ = writeln!(text, "pulled-back witness works downstairs: {ok}");
            }
            if let Some(t) = &r.total {
                let _ = writeln!(text, "o_{stage} of the total model: {}", status(t));
            }
            let _ = writeln!(
                text,
                "exact upstairs implies exact downstairs: {}",
                r.injectivity_consistent()
            );
            Ok(render(&c, json::replay(&r), text))
        }
    }
}

fn num_zero(x: &Q) -> bool {
    num_traits::Zero::is_zero(x)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
