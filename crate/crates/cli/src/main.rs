//! Batch CLI over the spinor-core library: quiver export, invariant
//! verification, cycle-class enumeration, and isotropic configuration trials.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
//! cap exceeded. Output is deterministic for a fixed set of flags (including
//! the seed).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use spinor_core::bsword::{
    build_quiver, dot_export, pairing_matrix, represents_top_coset, root_multiplicities,
    spinor_word, verify_lemma,
};
use spinor_core::cycles::{
    anticanonical, dimension_bound, enumerate_positive_classes, extremal_class,
    fibration_positivity, incidence_balance, min_degree_threshold, relative_tangent_classes,
};
use spinor_core::isotropic::{
    build_flag_from_points, from_skew_chart, in_open_cell, is_totally_isotropic, meet,
    membership_in_u, random_complete_flag, random_general_points, random_skew, reconstruct_chain,
    reference_isotropic, skew_census_size, skew_rank_census_range, span_e, HyperbolicSpace,
};
use spinor_core::weyl::is_reduced;
use spinor_core::{Error, Field};

const CENSUS_CAP: u128 = 1 << 24;

#[derive(Parser)]
#[command(
    name = "spinor-lab",
    version,
    about = "Exact checks around the spinor variety"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the quiver of the reduced word as DOT or JSON.
    Quiver {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the whole invariant suite for one rank.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerate cone classes of a given degree with their dimensions.
    Classes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded isotropic-configuration trials and optional rank census.
    Config {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        census: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Quiver { n, format, output } => cmd_quiver(n, format, output),
        Command::Verify { n, format, output } => cmd_verify(n, format, output),
        Command::Classes { n, d, output } => cmd_classes(n, d, output),
        Command::Config {
            n,
            field,
            seed,
            trials,
            census,
            output,
        } => cmd_config(n, &field, seed, trials, census, output),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            let c = match e {
                Error::Argument(_) => 2,
                Error::ResourceCap(_) => 3,
                _ => 1,
            };
            ExitCode::from(c)
        }
    }
}

fn emit(output: Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Error::Argument(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::Argument(format!("cannot write stdout: {e}")))
        }
    }
}

fn thread_count() -> usize {
    std::env::var("SPINOR_LAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

#[derive(Serialize)]
struct QuiverVertex {
    i: usize,
    beta: usize,
    height: usize,
}

#[derive(Serialize)]
struct QuiverJson {
    schema: &'static str,
    n: usize,
    r: usize,
    vertices: Vec<QuiverVertex>,
    arrows: Vec<(usize, usize)>,
    multiplicities: BTreeMap<usize, usize>,
}

fn cmd_quiver(n: usize, format: Format, output: Option<PathBuf>) -> Result<u8, Error> {
    let word = spinor_word(n)?;
    let quiver = build_quiver(&word);
    let text = match format {
        Format::Dot => dot_export(&quiver),
        Format::Json => {
            let doc = QuiverJson {
                schema: "1",
                n,
                r: quiver.len(),
                vertices: (1..=quiver.len())
                    .map(|i| QuiverVertex {
                        i,
                        beta: quiver.label(i),
                        height: quiver.height(i),
                    })
                    .collect(),
                arrows: quiver.arrows().to_vec(),
                multiplicities: root_multiplicities(&word),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            return Err(Error::Argument("quiver supports dot or json".into()));
        }
    };
    emit(output, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

impl Check {
    fn plain(name: &str, pass: bool) -> Self {
        Check {
            name: name.into(),
            pass,
            witness: None,
        }
    }

    fn witnessed(name: &str, pass: bool, witness: String) -> Self {
        Check {
            name: name.into(),
            pass,
            witness: if pass { None } else { Some(witness) },
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    schema: &'static str,
    n: usize,
    checks: Vec<Check>,
    all_pass: bool,
}

fn verify_checks(n: usize) -> Result<VerifyReport, Error> {
    let word = spinor_word(n)?;
    let r = word.len();
    let mut checks = Vec::new();

    checks.push(Check::plain("word-length", r == n * (n - 1) / 2));
    checks.push(Check::plain("word-reduced", is_reduced(n, word.betas())?));
    checks.push(Check::plain(
        "word-represents-w0bar",
        represents_top_coset(&word),
    ));

    let pm = pairing_matrix(&word);
    let mut range_ok = true;
    let mut range_witness = String::new();
    for i in 1..=r {
        for k in 1..i {
            let v = pm.entry(k, i);
            if v != 0 && v != 1 {
                range_ok = false;
                range_witness = format!("c[{k}][{i}] = {v}");
            }
        }
    }
    checks.push(Check::witnessed("pairing-range", range_ok, range_witness));

    let lemma = verify_lemma(&word);
    let witness = format!("{:?}", lemma.witnesses);
    checks.push(Check::witnessed(
        "lemma-i",
        lemma.clause_i_pass,
        witness.clone(),
    ));
    checks.push(Check::witnessed(
        "lemma-ii",
        lemma.clause_ii_pass,
        witness.clone(),
    ));
    checks.push(Check::witnessed(
        "gamma-prefix-sum",
        lemma.prefix_sum_pass,
        witness,
    ));

    let quiver = build_quiver(&word);
    let heights_ok = quiver.height(r) == 1
        && quiver.height(r - 1) == 2
        && quiver.height(1) == 2 * n - 3
        && (1..=(n - 1)).all(|i| quiver.height(i) == 2 * (n - 1) - i);
    checks.push(Check::plain("height-pinning", heights_ok));

    let tangents = relative_tangent_classes(&pm);
    let mut sum = vec![0i64; r];
    for t in &tangents {
        for (acc, c) in sum.iter_mut().zip(t.coeffs()) {
            *acc += c;
        }
    }
    checks.push(Check::plain(
        "canonical-identity",
        sum == anticanonical(&quiver).coeffs(),
    ));

    let column_ok = (1..=r).all(|k| {
        let s: i64 = (k..=r).map(|i| pm.entry(k, i)).sum();
        s == quiver.height(k) as i64 + 1
    });
    checks.push(Check::plain("column-sum-identity", column_ok));

    // Positivity of every fibration step on a sample of cone classes.
    let mut positivity_ok = true;
    for d in (n as i64 - 1)..=(n as i64 + 1) {
        for x in enumerate_positive_classes(n, d) {
            if fibration_positivity(&x, &tangents)
                .iter()
                .any(|s| s.value <= 0)
            {
                positivity_ok = false;
            }
        }
    }
    checks.push(Check::plain("fibration-positivity", positivity_ok));

    let b = incidence_balance(n);
    checks.push(Check::plain("incidence-balance", b.balanced_b));

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        schema: "1",
        n,
        checks,
        all_pass,
    })
}

fn cmd_verify(n: usize, format: Format, output: Option<PathBuf>) -> Result<u8, Error> {
    let report = verify_checks(n)?;
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                s.push_str(if c.pass { "PASS " } else { "FAIL " });
                s.push_str(&c.name);
                if let Some(w) = &c.witness {
                    s.push_str(&format!(" ({w})"));
                }
                s.push('\n');
            }
            s
        }
        Format::Dot => return Err(Error::Argument("verify supports json or text".into())),
    };
    emit(output, &text)?;
    Ok(if report.all_pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct ClassEntry {
    x: Vec<i64>,
    dim: i64,
}

#[derive(Serialize)]
struct ClassesReport {
    schema: &'static str,
    n: usize,
    d: i64,
    threshold: i64,
    expected_dim: i64,
    warning_below_threshold: bool,
    classes: Vec<ClassEntry>,
    max_dim: i64,
    argmax: Vec<i64>,
    unique: bool,
}

fn cmd_classes(n: usize, d: i64, output: Option<PathBuf>) -> Result<u8, Error> {
    if n < 3 {
        return Err(Error::Argument(format!("rank must be >= 3, got {n}")));
    }
    if d < 1 {
        return Err(Error::Argument(format!("degree must be >= 1, got {d}")));
    }
    let word = spinor_word(n)?;
    let quiver = build_quiver(&word);
    let anti = anticanonical(&quiver);
    let classes: Vec<ClassEntry> = enumerate_positive_classes(n, d)
        .into_iter()
        .map(|x| {
            let dim = anti.pair(&x);
            ClassEntry {
                x: x.pairings().to_vec(),
                dim,
            }
        })
        .collect();
    let (argmax, max_dim, unique) = if classes.is_empty() {
        (Vec::new(), 0, false)
    } else {
        let (x, dim, unique) = extremal_class(n, d, &quiver)?;
        debug_assert_eq!(dim, dimension_bound(n, d));
        (x.pairings().to_vec(), dim, unique)
    };
    let threshold = min_degree_threshold(n);
    let report = ClassesReport {
        schema: "1",
        n,
        d,
        threshold,
        expected_dim: 2 * (n as i64 - 1) * d,
        warning_below_threshold: d < threshold,
        classes,
        max_dim,
        argmax,
        unique,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("serializable");
    s.push('\n');
    emit(output, &s)?;
    Ok(0)
}

#[derive(Serialize)]
struct PropertyOutcome {
    name: String,
    pass: bool,
    checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct CensusReport {
    p: u64,
    total: u64,
    ranks: BTreeMap<usize, u64>,
    low_rank_count: u64,
}

#[derive(Serialize)]
struct ConfigReport {
    schema: &'static str,
    n: usize,
    field: String,
    seed: u64,
    trials: usize,
    properties: Vec<PropertyOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    census: Option<CensusReport>,
    all_pass: bool,
}

fn cmd_config(
    n: usize,
    field_spec: &str,
    seed: u64,
    trials: usize,
    census: bool,
    output: Option<PathBuf>,
) -> Result<u8, Error> {
    if n < 3 {
        return Err(Error::Argument(format!("rank must be >= 3, got {n}")));
    }
    let field = Field::parse(field_spec)?;
    let h = HyperbolicSpace::new(n, field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut properties = Vec::new();

    // Chart law: dim(chart(A) meet span(e)) = n - rank(A), images isotropic.
    {
        let se = span_e(&h);
        let mut pass = true;
        let mut detail = None;
        for t in 0..trials {
            let a = random_skew(n, field, &mut rng);
            let s = from_skew_chart(&h, &a)?;
            let ok = is_totally_isotropic(&h, &s) && meet(&s, &se)?.dim() == n - a.rank();
            if !ok && pass {
                pass = false;
                detail = Some(format!("violated at trial {t}"));
            }
        }
        properties.push(PropertyOutcome {
            name: "chart-intersection-law".into(),
            pass,
            checked: trials,
            detail,
        });
    }

    // Modular dimension law for meet/join.
    {
        let mut pass = true;
        let mut detail = None;
        for t in 0..trials {
            let a = from_skew_chart(&h, &random_skew(n, field, &mut rng))?;
            let b = from_skew_chart(&h, &random_skew(n, field, &mut rng))?;
            let (s, i) = (spinor_core::isotropic::join(&a, &b)?, meet(&a, &b)?);
            if s.dim() + i.dim() != a.dim() + b.dim() && pass {
                pass = false;
                detail = Some(format!("violated at trial {t}"));
            }
        }
        properties.push(PropertyOutcome {
            name: "modular-dimension-law".into(),
            pass,
            checked: trials,
            detail,
        });
    }

    // Chain reconstruction on points of U with a random flag.
    {
        let v = reference_isotropic(&h);
        let mut pass = true;
        let mut detail = None;
        let mut reconstructed = 0usize;
        for t in 0..trials {
            let x_r = from_skew_chart(&h, &random_skew(n, field, &mut rng))?;
            if !membership_in_u(&h, &x_r, &v)? {
                continue;
            }
            let flag = random_complete_flag(&v, &mut rng);
            match reconstruct_chain(&h, &x_r, &v, &flag) {
                Ok(rec) => {
                    reconstructed += 1;
                    let dims_ok = rec
                        .chain
                        .iter()
                        .enumerate()
                        .all(|(idx, s)| s.dim() == idx + 1);
                    let nested_ok = rec.chain.windows(2).all(|w| w[0].is_contained_in(&w[1]))
                        && (2..n).all(|i| flag.member(i - 1).is_contained_in(&rec.chain[i - 1]));
                    let cell_ok = in_open_cell(&h, &x_r, &v, &flag).is_ok();
                    if !(dims_ok && nested_ok && cell_ok) && pass {
                        pass = false;
                        detail = Some(format!("violated at trial {t}"));
                    }
                }
                Err(Error::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        if reconstructed == 0 && pass {
            pass = false;
            detail = Some("no trial landed in U".into());
        }
        properties.push(PropertyOutcome {
            name: "chain-reconstruction".into(),
            pass,
            checked: reconstructed,
            detail,
        });
    }

    // Flag construction postconditions.
    {
        let v = reference_isotropic(&h);
        let mut pass = true;
        let mut detail = None;
        for t in 0..trials {
            let points = random_general_points(&v, &mut rng);
            let flag = build_flag_from_points(&v, &points)?;
            let ok = points.iter().enumerate().all(|(idx, p)| {
                let i = idx + 1;
                p.is_contained_in(flag.member(i + 1)) && !p.is_contained_in(flag.member(i))
            });
            if !ok && pass {
                pass = false;
                detail = Some(format!("violated at trial {t}"));
            }
        }
        properties.push(PropertyOutcome {
            name: "flag-construction".into(),
            pass,
            checked: trials,
            detail,
        });
    }

    let census_report = if census {
        let p = match field {
            Field::Prime(p) => p,
            Field::Rational => {
                return Err(Error::Argument(
                    "census requires a prime field (--field p)".into(),
                ))
            }
        };
        let total = skew_census_size(n, p);
        if total > CENSUS_CAP {
            return Err(Error::ResourceCap(format!(
                "census of {total} matrices exceeds cap {CENSUS_CAP}"
            )));
        }
        let ranks = census_parallel(n, p, total, thread_count());
        let low_rank_count = ranks
            .iter()
            .filter(|(r, _)| **r + 3 <= n)
            .map(|(_, c)| c)
            .sum();
        Some(CensusReport {
            p,
            total: total as u64,
            ranks,
            low_rank_count,
        })
    } else {
        None
    };

    let all_pass = properties.iter().all(|p| p.pass);
    let report = ConfigReport {
        schema: "1",
        n,
        field: field_spec.to_string(),
        seed,
        trials,
        properties,
        census: census_report,
        all_pass,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("serializable");
    s.push('\n');
    emit(output, &s)?;
    Ok(if report.all_pass { 0 } else { 1 })
}

fn census_parallel(n: usize, p: u64, total: u128, threads: usize) -> BTreeMap<usize, u64> {
    if threads <= 1 || total < 1024 {
        return skew_rank_census_range(n, p, 0, total);
    }
    let chunk = total / threads as u128 + 1;
    let mut merged: BTreeMap<usize, u64> = BTreeMap::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = chunk * t as u128;
            let hi = (lo + chunk).min(total);
            if lo >= hi {
                continue;
            }
            handles.push(scope.spawn(move || skew_rank_census_range(n, p, lo, hi)));
        }
        for handle in handles {
            for (r, c) in handle.join().expect("census worker") {
                *merged.entry(r).or_insert(0) += c;
            }
        }
    });
    merged
}
