//! One PASS or FAIL line per acceptance criterion.
//!
//! Runs the `sullivan` binary where a criterion names a command, and
//! re-derives the expected values with the dense oracle in `support`.
//! Exits non-zero if a criterion fails that is not listed in
//! [`KNOWN_FAILURES`].

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sullivan::algebra::{Cdga, Derivation, FreeCga, Generator, LowerGrading, Monomial, Polynomial};
use sullivan::fixtures::{fixture, FIXTURES};
use sullivan::formality::{
    decide_formality, derivation_slice, module_derivation_replay, ObstructionStatus,
};
use sullivan::models::{bigraded_model, complete_seeded};
use sullivan::{FilteredModel, Q};

const SPHERE_BUDGET: Duration = Duration::from_secs(1);
const EXAMPLE31_BUDGET: Duration = Duration::from_secs(300);
const LUPTON_BUDGET: Duration = Duration::from_secs(120);
const SEED: u64 = 20240611;
const KOSZUL_CASES: usize = 1000;
const ORACLE_CASES: usize = 50;
const ORACLE_CAP: u32 = 12;
const SLICE_CASES: usize = 20;
const PERMUTATIONS: u64 = 10;

/// Criteria expected to fail, with the exact failure and why it stands.
const KNOWN_FAILURES: &[(u32, &str, &str)] = &[(
    5,
    "base_bcn: expected FormalUpTo(20), got NonFormal(stage=2) (oracle confirms b*n closed, in (n), H^9 = 1)",
    "Λ(b, c, n) with dn = bc is not formal",
)];

struct Run {
    code: i32,
    stdout: String,
    elapsed: Duration,
}

fn sullivan(args: &[&str]) -> Run {
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_sullivan"))
        .args(args)
        .output()
        .unwrap();
    Run {
        code: o.status.code().unwrap_or(-1),
        stdout: String::from_utf8(o.stdout).unwrap(),
        elapsed: start.elapsed(),
    }
}

fn sullivan_json(args: &[&str]) -> (Value, Duration) {
    let mut all = args.to_vec();
    all.push("--json");
    let r = sullivan(&all);
    assert_eq!(r.code, 0, "sullivan {}", all.join(" "));
    (serde_json::from_str(&r.stdout).unwrap(), r.elapsed)
}

/// A check with a summary line, or the reason it failed.
type Outcome = Result<String, String>;

type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn one() -> Q {
    Q::one()
}

fn sphere_sanity() -> Outcome {
    let mut notes = Vec::new();
    // S⁶ has a generator in degree 11, and caps start two above it.
    for (name, cap) in [("s2", 12), ("s3", 12), ("s6", 13)] {
        let r = sullivan(&["cohomology", name, "--cap", &cap.to_string()]);
        let doc = fixture(name).unwrap().load().unwrap();
        let c = doc.realize(cap).unwrap();
        let oracle: Vec<String> = (0..=cap)
            .map(|n| support::dense_betti(&c, n).to_string())
            .collect();
        let expected = format!("betti: {}\n", oracle.join(","));
        ensure(r.code == 0 && r.stdout.contains(&expected), || {
            format!("{name}: expected `{}` in\n{}", expected.trim(), r.stdout)
        })?;
        ensure(r.elapsed < SPHERE_BUDGET, || {
            format!("{name} took {}", secs(r.elapsed))
        })?;
        notes.push(format!(
            "{name}@{cap} {} in {}",
            oracle.join(","),
            secs(r.elapsed)
        ));
    }
    Ok(notes.join("; "))
}

fn example31() -> Outcome {
    let f = sullivan(&["formality", "example31", "--cap", "24"]);
    ensure(f.stdout.starts_with("FormalUpTo(24)\n"), || {
        f.stdout.clone()
    })?;
    let h = sullivan(&["halperin", "example31", "--cap", "24"]);
    ensure(
        h.stdout
            .contains("no negative-degree derivations in degrees -1 to -11"),
        || h.stdout.clone(),
    )?;
    let total = f.elapsed + h.elapsed;
    ensure(total < EXAMPLE31_BUDGET, || format!("took {}", secs(total)))?;
    Ok(format!(
        "FormalUpTo(24), no derivations down to -11, {}",
        secs(total)
    ))
}

/// Whether `target` is `[d, μ]` on the generators of degree at most `top`
/// for some `μ` of degree 0 lowering the lower degree by one, by a dense
/// solve over every such `μ`.
fn dense_exact(alg: &FreeCga, d: &Derivation<Q>, target: &Derivation<Q>, top: u32) -> bool {
    let rows: Vec<usize> = (0..alg.len())
        .filter(|&g| alg.generator(g).degree <= top)
        .collect();
    let mut columns: Vec<Vec<(usize, Monomial, Q)>> = Vec::new();
    for &g in &rows {
        let gen = alg.generator(g);
        if gen.lower == 0 {
            continue;
        }
        for m in alg
            .basis_where(gen.degree, gen.lower - 1..=gen.lower - 1, |_| true)
            .unwrap()
        {
            let mu = Derivation::new(0, 1).with(g, Polynomial::term(m, one()));
            let mut col = Vec::new();
            for &h in &rows {
                let mut v = alg.apply_unchecked(d, &mu.value(h));
                v -= &alg.apply_unchecked(&mu, &d.value(h));
                col.extend(v.iter().map(|(m, c)| (h, m.clone(), c.clone())));
            }
            columns.push(col);
        }
    }
    let rhs: Vec<(usize, Monomial, Q)> = rows
        .iter()
        .flat_map(|&h| {
            target
                .value(h)
                .iter()
                .map(|(m, c)| (h, m.clone(), c.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    let keys: Vec<(usize, Monomial)> = columns
        .iter()
        .chain(std::iter::once(&rhs))
        .flatten()
        .map(|(g, m, _)| (*g, m.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let dense = |col: &Vec<(usize, Monomial, Q)>| {
        let mut row = vec![Q::zero(); keys.len()];
        for (g, m, c) in col {
            row[keys.binary_search(&(*g, m.clone())).unwrap()] += c.clone();
        }
        row
    };
    let mut matrix: Vec<Vec<Q>> = columns.iter().map(dense).collect();
    let without = support::rank(matrix.clone());
    matrix.push(dense(&rhs));
    support::rank(matrix) == without
}

fn lupton() -> Outcome {
    let (v, elapsed) = sullivan_json(&["formality", "lupton_total", "--cap", "12"]);
    let verdict = &v["verdict"];
    ensure(verdict["label"] == "NonFormal(stage=2)", || {
        verdict["label"].to_string()
    })?;
    let w = &verdict["obstruction"]["representative"]["values"]["w"];
    let vc = json!([{ "coefficient": { "num": "1", "den": "1" }, "monomial": { "c": 1, "v": 1 } }]);
    ensure(*w == vc, || format!("value on w is {w}"))?;
    ensure(elapsed < LUPTON_BUDGET, || {
        format!("took {}", secs(elapsed))
    })?;

    let doc = fixture("lupton_total").unwrap().load().unwrap();
    let verdict = decide_formality(&doc, 12).unwrap();
    let m: &FilteredModel = &verdict.model;
    let top = verdict_rows(&v);
    ensure(
        !dense_exact(&m.algebra, &m.d, &m.deformation(2), top),
        || "the dense solve found a μ".into(),
    )?;
    // A bracket [d, μ] must be seen as exact by the same solve.
    let s = derivation_slice(&m.algebra, &m.d, 1, 0, top);
    let mu = s.derivation((0..s.source.len()).map(|k| (k, Q::from_integer((k as i64 + 1).into()))));
    let exact = m.algebra.bracket(&m.d, &mu, 0..m.algebra.len());
    ensure(
        !exact.vanishes() && dense_exact(&m.algebra, &m.d, &exact, top),
        || "the dense solve misses a bracket".into(),
    )?;
    Ok(format!(
        "NonFormal(stage=2), w ↦ v*c, no μ through degree {top} (dense), {}",
        secs(elapsed)
    ))
}

fn verdict_rows(v: &Value) -> u32 {
    v["verdict"]["obstruction"]["rows_through"]
        .as_u64()
        .unwrap() as u32
}

fn bigraded_wedge() -> Outcome {
    // Generators go up to degree 4, so the cap starts at 6; only degrees
    // through 4 are inspected.
    let (v, _) = sullivan_json(&["bigraded-model", "wedge_s2_s2_s2", "--cap", "6"]);
    let count = |n: u64, p: u64| {
        v["counts"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["degree"] == n && c["lower"] == p)
            .map_or(0, |c| c["count"].as_u64().unwrap())
    };
    let (v0, v1, v2) = (count(2, 0), count(3, 1), count(4, 2));
    ensure(v0 == 3 && v1 == 6, || {
        format!("dim V_0 = {v0}, dim V_1 = {v1}")
    })?;
    let others: u64 = v["counts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["degree"].as_u64().unwrap() <= 4)
        .map(|c| c["count"].as_u64().unwrap())
        .sum();
    ensure(others == v0 + v1 + v2, || {
        "unexpected generators through degree 4".into()
    })?;

    let doc = fixture("wedge_s2_s2_s2").unwrap().load().unwrap();
    let (_, p) = doc.cohomology(7).unwrap();
    let m = bigraded_model(&p.algebra, 6).unwrap();
    let alg = &m.algebra;
    let of = |n: u32, l: u32| -> Vec<usize> {
        (0..alg.len())
            .filter(|&g| alg.generator(g).degree == n && alg.generator(g).lower == l)
            .collect()
    };
    let (gens0, gens1, gens2) = (of(2, 0), of(3, 1), of(4, 2));
    let quadratics = alg.basis_where(4, 0..=0, |_| true).unwrap();
    let coords = |p: &Polynomial<Q>, basis: &[Monomial]| -> Vec<Q> {
        basis.iter().map(|b| p.coefficient(b)).collect()
    };
    let dv1: Vec<Vec<Q>> = gens1
        .iter()
        .map(|&g| coords(&m.d.value(g), &quadratics))
        .collect();
    ensure(quadratics.len() == 6 && support::rank(dv1) == 6, || {
        "d(V_1) does not span the quadratics".into()
    })?;

    // a, b and the α, β with dα = a², dβ = ab.
    let (a, b) = (
        Polynomial::generator(gens0[0]),
        Polynomial::generator(gens0[1]),
    );
    let find = |target: Polynomial<Q>| {
        gens1.iter().copied().find(|&g| {
            let dg = m.d.value(g);
            let c = dg.coefficient(target.iter().next().unwrap().0);
            !c.is_zero() && dg == target.scaled(&c)
        })
    };
    let alpha = find(alg.mul(&a, &a)).ok_or("no α with dα = a²")?;
    let beta = find(alg.mul(&a, &b)).ok_or("no β with dβ = ab")?;
    let ca =
        m.d.value(alpha)
            .coefficient(alg.mul(&a, &a).iter().next().unwrap().0);
    let cb =
        m.d.value(beta)
            .coefficient(alg.mul(&a, &b).iter().next().unwrap().0);
    let alpha = Polynomial::generator(alpha).scaled(&(one() / ca));
    let beta = Polynomial::generator(beta).scaled(&(one() / cb));
    let mut target = alg.mul(&alpha, &b);
    target -= &alg.mul(&a, &beta);
    let cubics = alg.basis_where(5, 1..=1, |_| true).unwrap();
    let mut rows: Vec<Vec<Q>> = gens2
        .iter()
        .map(|&g| coords(&m.d.value(g), &cubics))
        .collect();
    let before = support::rank(rows.clone());
    rows.push(coords(&target, &cubics));
    ensure(support::rank(rows) == before, || {
        "αb − aβ is not in d(V_2)".into()
    })?;
    Ok(format!(
        "dim V_0 = 3, dim V_1 = 6, αb − aβ ∈ d(V_2) with dim V_2^4 = {v2}"
    ))
}

/// `b·n` is closed and `H^9 = ⟨b·n⟩`, so a closed element in the ideal of
/// `n` is not exact.
fn bcn_oracle() -> bool {
    let doc = fixture("base_bcn").unwrap().load().unwrap();
    let c = doc.realize(10).unwrap();
    let alg = &c.algebra;
    let bn = alg.mul(
        &Polynomial::generator(alg.index_of("b").unwrap()),
        &Polynomial::generator(alg.index_of("n").unwrap()),
    );
    let only = alg.monomial_basis(9, None).unwrap();
    c.d(&bn).is_zero() && only.len() == 1 && support::dense_betti(&c, 9) == 1
}

fn section4() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (name, cap, expected) in [
        ("heisenberg_shifted", 14, "NonFormal(stage=2)"),
        ("base_bcn", 20, "FormalUpTo(20)"),
        ("base_bcn_total", 20, "FormalUpTo(20)"),
    ] {
        let r = sullivan(&["formality", name, "--cap", &cap.to_string()]);
        let label = r.stdout.lines().next().unwrap_or("").to_string();
        notes.push(format!("{name} {label}"));
        if label != expected {
            failures.push(format!("{name}: expected {expected}, got {label}"));
        }
    }
    if failures.is_empty() {
        return Ok(notes.join("; "));
    }
    let oracle = if bcn_oracle() {
        "oracle confirms b*n closed, in (n), H^9 = 1"
    } else {
        "oracle does NOT confirm non-formality"
    };
    Err(format!("{} ({oracle})", failures.join("; ")))
}

fn tncz_and_twistor() -> Outcome {
    let t = sullivan(&["tncz", "lupton_total", "--cap", "8"]);
    ensure(t.stdout.starts_with("TNCZ\n"), || t.stdout.clone())?;
    let (v, _) = sullivan_json(&["map-formality", "toy_twistor", "--cap", "10"]);
    ensure(v["certified"] == true, || v.to_string())?;
    let (base, total) = (v["base"].as_str().unwrap(), v["total"].as_str().unwrap());
    ensure(
        base.starts_with("FormalUpTo") == total.starts_with("FormalUpTo"),
        || format!("base {base}, total {total}"),
    )?;
    Ok(format!(
        "lupton TNCZ; toy_twistor base {base}, total {total}, Certified"
    ))
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 0..KOSZUL_CASES {
        support::koszul_and_leibniz(&mut rng)
            .map_err(|e| format!("Koszul/Leibniz case {k}: {e}"))?;
    }
    for f in FIXTURES {
        let doc = f.load().unwrap();
        let c = doc.realize(doc.max_generator_degree() + 2).unwrap();
        c.check_differential(LowerGrading::Ignored)
            .map_err(|v| format!("{}: {}", f.name, v.into_error(&c.algebra)))?;
    }
    for k in 0..ORACLE_CASES {
        let c = support::random_cdga(&mut rng, ORACLE_CAP + 2);
        support::cohomology_agrees(&c, ORACLE_CAP).map_err(|e| format!("oracle case {k}: {e}"))?;
    }
    let models = support::slice_models();
    use rand::Rng;
    for k in 0..SLICE_CASES {
        let (name, alg, d) = &models[rng.gen_range(0..models.len())];
        let (p, q, top) = (
            rng.gen_range(0..=2),
            rng.gen_range(-3..=2),
            rng.gen_range(5..=7),
        );
        support::slice_square(alg, d, p, q, top)
            .map_err(|e| format!("slice case {k} ({name}): {e}"))?;
    }
    Ok(format!(
        "{KOSZUL_CASES} Koszul/Leibniz, {} fixtures d² = 0, {ORACLE_CASES} oracle CDGAs, {SLICE_CASES} slices, 0 discrepancies",
        FIXTURES.len()
    ))
}

fn determinism() -> Outcome {
    let mut runs = 0;
    for f in FIXTURES {
        let doc = f.load().unwrap();
        let cap = (doc.max_generator_degree() + 2).max(8).to_string();
        let mut commands = vec![
            "cohomology",
            "presentation",
            "filtered-model",
            "formality",
            "halperin",
        ];
        if doc.is_fibration() {
            commands.extend(["tncz", "map-formality"]);
        }
        for c in commands {
            let args = [c, f.name, "--cap", &cap, "--json"];
            let (a, b) = (sullivan(&args), sullivan(&args));
            ensure(a.code == 0 && a.stdout == b.stdout, || {
                format!("`{}` differs between runs", args.join(" "))
            })?;
            runs += 1;
        }
    }
    for (name, cap) in [("example31", "24"), ("lupton_total", "12")] {
        let reference = sullivan(&["formality", name, "--cap", cap]).stdout;
        let label = reference.lines().next().unwrap().to_string();
        for seed in 1..=PERMUTATIONS {
            let r = sullivan(&["formality", name, "--cap", cap, "--seed", &seed.to_string()]);
            let got = r.stdout.lines().next().unwrap_or("");
            ensure(got == label, || {
                format!("{name} seed {seed}: {got}, unshuffled {label}")
            })?;
        }
    }
    Ok(format!("{runs} commands repeated byte-identically, labels stable on {PERMUTATIONS} permutations each"))
}

/// `S² ∨ S²` with its differential conjugated by `exp(μ)`, times an `S²`
/// fiber, so that a base deformation is exact upstairs.
fn gauged_product() -> (Cdga<Q>, usize, u32) {
    let gens = vec![
        Generator::with_lower("a", 2, 0),
        Generator::with_lower("b", 2, 0),
        Generator::with_lower("alpha", 3, 1),
        Generator::with_lower("beta", 3, 1),
        Generator::with_lower("gamma", 3, 1),
    ];
    let alg = FreeCga::new(gens, 11).unwrap();
    let (a, b) = (Polynomial::generator(0), Polynomial::generator(1));
    let d = Derivation::new(1, 1)
        .with(2, alg.mul(&a, &a))
        .with(3, alg.mul(&a, &b))
        .with(4, alg.mul(&b, &b));
    let base = complete_seeded(alg, d, 8).unwrap().as_cdga();
    let alg = &base.algebra;
    let n = alg.len();
    let (p, mu) = (1..=3)
        .find_map(|p| {
            let s = derivation_slice(alg, &base.differential, p, 0, 8);
            let mu = s.derivation(
                (0..s.source.len()).map(|k| (k, Q::from_integer((k as i64 + 1).into()))),
            );
            (!alg.bracket(&base.differential, &mu, 0..n).is_zero()).then_some((p, mu))
        })
        .unwrap();
    let mut big_d = Derivation::new(1, 1);
    for g in 0..n {
        let inv = alg.exp_apply(&mu, &Polynomial::generator(g), true);
        big_d.set(
            g,
            alg.exp_apply(&mu, &alg.apply_unchecked(&base.differential, &inv), false),
        );
    }
    let mut total = alg.clone();
    let s = total
        .push_generator(Generator::with_lower("s", 2, 0))
        .unwrap();
    let sigma = total
        .push_generator(Generator::with_lower("sigma", 3, 1))
        .unwrap();
    big_d.set(sigma, total.pow(&Polynomial::generator(s), 2));
    (Cdga::new(total, big_d), n, p + 1)
}

fn replay() -> Outcome {
    let (l, _) = sullivan_json(&[
        "replay-derivations",
        "lupton_total",
        "--cap",
        "10",
        "--stage",
        "2",
    ]);
    ensure(
        l["j_matches"] == true && l["injectivity_consistent"] == true,
        || l.to_string(),
    )?;
    let (t, _) = sullivan_json(&[
        "replay-derivations",
        "toy_twistor",
        "--cap",
        "10",
        "--stage",
        "2",
    ]);
    ensure(
        t["j_matches"] == true && t["injectivity_consistent"] == true,
        || t.to_string(),
    )?;
    let twistor = match t["upstairs"]["kind"].as_str().unwrap() {
        "exact" => {
            ensure(t["pulled_back"] == true, || t.to_string())?;
            "exact upstairs, pulled back"
        }
        "zero" => "d_2 = 0 on the base, nothing to pull back",
        other => return Err(format!("toy_twistor upstairs {other}")),
    };
    let (c, base_len, i) = gauged_product();
    let r = module_derivation_replay(&c, base_len, i, 7).map_err(|e| e.to_string())?;
    ensure(
        r.j_matches && matches!(r.upstairs, ObstructionStatus::Exact(_)),
        || format!("{r:?}"),
    )?;
    ensure(r.pulled_back == Some(true), || {
        "upstairs witness does not pull back".into()
    })?;
    Ok(format!(
        "lupton j' = j; toy_twistor {twistor}; gauged S²∨S² × S² exact upstairs at stage {i}, pulled back"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "sphere cohomology", sphere_sanity),
        (2, "example31 formal, no negative derivations", example31),
        (3, "lupton_total not formal at stage 2", lupton),
        (4, "bigraded model of S² ∨ S² ∨ S²", bigraded_wedge),
        (5, "heisenberg, base_bcn, base_bcn_total verdicts", section4),
        (6, "TNCZ and map formality", tncz_and_twistor),
        (7, "property suites", properties),
        (8, "determinism", determinism),
        (9, "derivation replay", replay),
    ];
    let mut unexpected = Vec::new();
    for (n, title, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = secs(start.elapsed());
        match result {
            Ok(note) => println!("criterion {n} PASS  {title}: {note} [{took}]"),
            Err(why) => {
                let known = KNOWN_FAILURES
                    .iter()
                    .find(|(k, text, _)| *k == n && *text == why);
                match known {
                    Some((_, _, reason)) => {
                        println!("criterion {n} FAIL  {title}: {why}; known: {reason} [{took}]")
                    }
                    None => {
                        println!("criterion {n} FAIL  {title}: {why} [{took}]");
                        unexpected.push(n);
                    }
                }
            }
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
