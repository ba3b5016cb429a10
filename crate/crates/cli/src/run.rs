use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qcflc_core::exact::{Basis, ExactLength};
use qcflc_core::flc::report::{length_value, sfdp_report, udp_report};
use qcflc_core::flc::{
    check_delone_measure_flc, check_fep, check_flp, check_sfdp, check_udp, decompose, detect_eventual_period,
    recode_by_occurrences, Decomposition, PieceSet,
};
use qcflc_core::measure::json::{delone_from_json, window_from_json, window_to_json, PieceJson};
use qcflc_core::measure::{analyze_point_set, MeasureWindow, Piece};
use qcflc_core::spectral::{
    energy_grid, fibonacci_trace_sequence, floquet_bands, scan_lyapunov, scan_period, CompiledPiece, PeriodicSupplier,
    SequenceSupplier, WindowSupplier, EDGE_TOL,
};
use qcflc_core::symbolic::{
    bernoulli_word, circle_map_word, continued_fraction, convergents_within_bound, fibonacci_word, gordon_scan,
    substitution_word, suspend, suspend_with_profiles, RealInput, Substitution, SuspensionParams, Word,
};
use qcflc_core::Rational;

use crate::config::{Analyze, Command, Decomp, Generate, RunConfig, Scan};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Invalid(String),
    /// Could not write outputs: exit code 1.
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn invalid(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{field}: {e}"))
}

/// Whether a checker found a counterexample (exit code 3).
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub counterexample: bool,
}

enum Artifact {
    /// Plain text; the hash goes in a leading `#` comment.
    Text(String),
    /// A JSON object; the hash goes in a `config_hash` key.
    Json(Value),
    /// CSV whose header comments already carry the hash.
    Csv(String),
}

struct Sink {
    dir: PathBuf,
    stem: String,
    hash: String,
    config: Value,
}

impl Sink {
    fn path(&self, ext: &str) -> PathBuf {
        self.dir.join(format!("{}.{ext}", self.stem))
    }

    fn header(&self) -> Vec<String> {
        vec![format!("config: {}", self.config["command"]), format!("config_hash: {}", self.hash)]
    }

    fn write(&self, ext: &str, a: Artifact) -> Result<PathBuf> {
        let body = match a {
            Artifact::Text(t) => format!("# config_hash: {}\n{t}", self.hash),
            Artifact::Csv(t) => t,
            Artifact::Json(mut v) => {
                if let Value::Object(m) = &mut v {
                    m.insert("config_hash".into(), Value::String(self.hash.clone()));
                }
                serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
            }
        };
        let p = self.path(ext);
        fs::write(&p, body).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        Ok(p)
    }
}

/// Hash embedded in an existing output, if any.
fn embedded_hash(p: &Path) -> Option<String> {
    let s = fs::read_to_string(p).ok()?;
    if p.extension().is_some_and(|e| e == "json") {
        let v: Value = serde_json::from_str(&s).ok()?;
        return v.get("config_hash")?.as_str().map(str::to_string);
    }
    s.lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# config_hash: ").map(|h| h.trim().to_string()))
}

fn outputs(cmd: &Command) -> (&'static str, &'static [&'static str]) {
    match cmd {
        Command::Generate(g) => match g {
            Generate::Fibonacci { .. } => ("fibonacci", &["txt"]),
            Generate::Substitution { .. } => ("substitution", &["txt"]),
            Generate::Circle { .. } => ("circle", &["txt"]),
            Generate::Bernoulli { .. } => ("bernoulli", &["txt"]),
            Generate::Suspend { .. } => ("window", &["json"]),
        },
        Command::Analyze(a) => (
            match a {
                Analyze::Sfdp { .. } => "sfdp",
                Analyze::Udp { .. } => "udp",
                Analyze::Flp { .. } => "flp",
                Analyze::Fep { .. } => "fep",
                Analyze::Period { .. } => "period",
                Analyze::Gordon { .. } => "gordon",
                Analyze::Cf { .. } => "cf",
                Analyze::Points { .. } => "points",
                Analyze::DeloneMeasure { .. } => "delone_measure",
            },
            &["json"],
        ),
        Command::Scan(s) => match s {
            Scan::Bands { .. } => ("bands", &["csv", "json"]),
            Scan::Lyapunov { .. } => ("lyapunov", &["csv"]),
            Scan::Eigencount { .. } => ("eigencount", &["csv"]),
            Scan::TraceMap { .. } => ("trace_map", &["json"]),
        },
    }
}

pub fn run(cfg: &RunConfig, out_dir: &Path, resume: bool) -> Result<Outcome> {
    let (default_stem, exts) = outputs(&cfg.command);
    let hash = cfg.hash();
    let sink = Sink {
        dir: out_dir.to_path_buf(),
        stem: cfg.output.clone().unwrap_or_else(|| default_stem.to_string()),
        hash: hash.clone(),
        config: serde_json::to_value(cfg).expect("configs serialize"),
    };

    if resume {
        let existing: Vec<(PathBuf, Option<String>)> =
            exts.iter().map(|e| sink.path(e)).filter(|p| p.exists()).map(|p| (p.clone(), embedded_hash(&p))).collect();
        for (p, h) in &existing {
            if h.as_deref() != Some(hash.as_str()) {
                return Err(CliError::Invalid(format!(
                    "--resume: {} was written by a different configuration (hash {}, expected {hash})",
                    p.display(),
                    h.as_deref().unwrap_or("missing")
                )));
            }
        }
        if existing.len() == exts.len() {
            println!("up to date: {}", sink.path(exts[0]).display());
            let verdict = fs::read_to_string(sink.path(exts[0]))
                .ok()
                .and_then(|s| serde_json::from_str::<Value>(&s).ok())
                .and_then(|v| v.get("verdict").and_then(Value::as_str).map(str::to_string));
            return Ok(Outcome { counterexample: verdict.as_deref() == Some("fails on window") });
        }
    }

    fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let outcome = match &cfg.command {
        Command::Generate(g) => generate(g, &sink)?,
        Command::Analyze(a) => analyze(a, &sink)?,
        Command::Scan(s) => scan(s, &sink, cfg.threads)?,
    };

    let mut echo = sink.config.clone();
    echo["config_hash"] = Value::String(hash.clone());
    let p = sink.path("config.json");
    fs::write(&p, serde_json::to_string_pretty(&echo).expect("json values serialize") + "\n")
        .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let side = json!({ "config_hash": hash, "unix_time": stamp, "version": env!("CARGO_PKG_VERSION") });
    let p = sink.path("run.json");
    fs::write(&p, serde_json::to_string_pretty(&side).expect("json values serialize") + "\n")
        .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    Ok(outcome)
}

fn read(field: &str, p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| invalid(field, format!("{}: {e}", p.display())))
}

fn load_window(field: &str, p: &Path) -> Result<MeasureWindow> {
    window_from_json(&read(field, p)?).map_err(|e| invalid(field, e))
}

fn load_pieces(field: &str, p: &Path) -> Result<Vec<Piece>> {
    let docs: Vec<PieceJson> = serde_json::from_str(&read(field, p)?).map_err(|e| invalid(field, e))?;
    docs.iter().map(|d| d.to_piece().map_err(|e| invalid(field, e))).collect()
}

fn load_piece(field: &str, p: &Path) -> Result<Piece> {
    qcflc_core::measure::json::piece_from_json(&read(field, p)?).map_err(|e| invalid(field, e))
}

fn load_word(field: &str, p: &Path) -> Result<Word> {
    Word::from_file_string(&read(field, p)?).map_err(|e| invalid(field, e))
}

fn length(field: &str, basis: &Basis, s: &str) -> Result<ExactLength> {
    ExactLength::parse(basis, s).map_err(|e| invalid(field, e))
}

fn real(field: &str, s: &str) -> Result<RealInput> {
    RealInput::parse(s).map_err(|e| invalid(field, e))
}

fn word_artifact(w: &Word, sink: &Sink) -> Result<Outcome> {
    let p = sink.write("txt", Artifact::Text(w.to_file_string()))?;
    println!("wrote {} ({} letters)", p.display(), w.len());
    Ok(Outcome::default())
}

fn generate(g: &Generate, sink: &Sink) -> Result<Outcome> {
    match g {
        Generate::Fibonacci { iterations } => word_artifact(&fibonacci_word(*iterations), sink),
        Generate::Substitution { rules, seed, iterations, max_len } => {
            let sub = Substitution::parse(rules).map_err(|e| invalid("--rules", e))?;
            let w = substitution_word(&sub, seed, *iterations, *max_len).map_err(|e| invalid("--seed", e))?;
            word_artifact(&w, sink)
        }
        Generate::Circle { alpha, beta, m, n } => {
            let (a, b) = (real("--alpha", alpha)?, real("--beta", beta)?);
            let cw = circle_map_word(&a, &b, *m, *n).map_err(|e| invalid("--alpha/--beta", e))?;
            for w in &cw.warnings {
                eprintln!("warning: {w}");
            }
            word_artifact(&cw.word, sink)
        }
        Generate::Bernoulli { p, seed, n } => {
            word_artifact(&bernoulli_word(*p, *seed, *n).map_err(|e| invalid("--p", e))?, sink)
        }
        Generate::Suspend { word, profiles, lengths, basis } => {
            let w = load_word("--word", word)?;
            let m = match (profiles, lengths) {
                (Some(p), _) => {
                    let params = SuspensionParams::new(load_pieces("--profiles", p)?).map_err(|e| invalid("--profiles", e))?;
                    suspend_with_profiles(&w, &params).map_err(|e| invalid("--profiles", e))?
                }
                (None, Some(ls)) => {
                    let b = Basis::builtin(basis).ok_or_else(|| invalid("--basis", format!("unknown basis `{basis}`")))?;
                    let ls = ls.split(',').map(|s| length("--lengths", &b, s.trim())).collect::<Result<Vec<_>>>()?;
                    suspend(&w, &ls).map_err(|e| invalid("--lengths", e))?
                }
                (None, None) => return Err(invalid("--profiles/--lengths", "give one of them")),
            };
            let doc: Value = serde_json::from_str(&window_to_json(&m)).expect("window documents are json");
            let p = sink.write("json", Artifact::Json(doc))?;
            println!("wrote {} (window of length {})", p.display(), m.len());
            Ok(Outcome::default())
        }
    }
}

/// Pieces from `--pieces`, or a cut at every atom: one pilot per atom weight,
/// half as long as the closest atom spacing.
fn decomposition(d: &Decomp, w: &MeasureWindow) -> Result<Decomposition> {
    let x0 = match &d.x0 {
        Some(s) => length("--x0", w.basis(), s)?,
        None => w.origin().clone(),
    };
    if let Some(p) = &d.pieces {
        let set = PieceSet::new(load_pieces("--pieces", p)?).map_err(|e| invalid("--pieces", e))?;
        return decompose(w, &set, &x0).map_err(|e| invalid("--pieces", e));
    }
    let atoms = w.content().atoms();
    if atoms.len() < 2 {
        return Err(invalid("--pieces", "window has fewer than two atoms; give a piece set"));
    }
    let mut spacing = &atoms[1].at - &atoms[0].at;
    for pair in atoms.windows(2) {
        spacing = spacing.try_min(&(&pair[1].at - &pair[0].at)).map_err(|e| invalid("--window", e))?;
    }
    let half = spacing.scale(&Rational::new(1, 2));
    let mut weights: Vec<Rational> = atoms.iter().map(|a| a.weight).collect();
    weights.sort();
    weights.dedup();
    let pilots = weights
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Piece::atom(half.clone(), ExactLength::zero(w.basis()), *c).map(|p| p.with_label(format!("atom{i}")))
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| invalid("--window", e))?;
    let set = PieceSet::new(pilots).map_err(|e| invalid("--window", e))?;
    recode_by_occurrences(w, &set).map_err(|e| invalid("--window", e))
}

fn json_report(sink: &Sink, v: Value, summary: &str) -> Result<()> {
    let p = sink.write("json", Artifact::Json(v))?;
    println!("wrote {}: {summary}", p.display());
    Ok(())
}

fn analyze(a: &Analyze, sink: &Sink) -> Result<Outcome> {
    match a {
        Analyze::Sfdp { dec, ell } => {
            let w = load_window("--window", &dec.window)?;
            let d = decomposition(dec, &w)?;
            let l = length("--ell", w.basis(), ell)?;
            let v = check_sfdp(&w, &d, &l).map_err(|e| invalid("--ell", e))?;
            let rep = sfdp_report(&w, &l, &v);
            json_report(sink, serde_json::to_value(&rep).expect("reports serialize"), &rep.verdict)?;
            Ok(Outcome { counterexample: !rep.holds() })
        }
        Analyze::Udp { dec, radius } => {
            let w = load_window("--window", &dec.window)?;
            let d = decomposition(dec, &w)?;
            let r = length("--radius", w.basis(), radius)?;
            let v = check_udp(&w, d.piece_set(), d.x0(), &r).map_err(|e| invalid("--radius", e))?;
            let rep = udp_report(&w, &r, &v);
            json_report(sink, serde_json::to_value(&rep).expect("reports serialize"), &rep.verdict)?;
            Ok(Outcome { counterexample: !rep.holds() })
        }
        Analyze::Flp { window, rho, radii } => {
            let w = load_window("--window", window)?;
            let rho = length("--rho", w.basis(), rho)?;
            let radii = radii.iter().map(|s| length("--radii", w.basis(), s)).collect::<Result<Vec<_>>>()?;
            let r = check_flp(&w, &rho, &radii).map_err(|e| invalid("--rho/--radii", e))?;
            let counts: Vec<Value> = r
                .counts
                .iter()
                .map(|(l, n, anchors)| json!({ "L": length_value(l), "distinct": n, "anchors": anchors }))
                .collect();
            json_report(sink, json!({ "property": "flp", "rho": length_value(&r.rho), "counts": counts }), "patch census")?;
            Ok(Outcome::default())
        }
        Analyze::Fep { window, r, l } => {
            let w = load_window("--window", window)?;
            let (rr, ll) = (length("-r", w.basis(), r)?, length("-l", w.basis(), l)?);
            let rep = check_fep(&w, &rr, &ll).map_err(|e| invalid("-r/-l", e))?;
            let v = json!({
                "property": "fep",
                "r": length_value(&rr),
                "l": length_value(&ll),
                "prefixes": rep.prefixes,
                "extensions": rep.extensions,
                "max_per_prefix": rep.max_per_prefix,
                "anchors": rep.anchors,
            });
            json_report(sink, v, &format!("{} extensions over {} prefixes", rep.extensions, rep.prefixes))?;
            Ok(Outcome::default())
        }
        Analyze::Period { window } => {
            let w = load_window("--window", window)?;
            let found = detect_eventual_period(&w, None).map_err(|e| invalid("--window", e))?;
            let (v, summary) = match &found {
                Some((x0, p)) => (
                    json!({ "eventually_periodic": true, "x0": length_value(x0), "p": length_value(p) }),
                    format!("x0 = {x0}, p = {p}"),
                ),
                None => (json!({ "eventually_periodic": false }), "no period found".to_string()),
            };
            json_report(sink, v, &summary)?;
            Ok(Outcome::default())
        }
        Analyze::Gordon { word, p, p_from_cf, alpha, cf_terms } => {
            let w = load_word("--word", word)?;
            let mut ps = p.clone();
            if *p_from_cf {
                let a = real("--alpha", alpha.as_deref().unwrap_or_default())?;
                let cf = continued_fraction(&a, *cf_terms).map_err(|e| invalid("--alpha", e))?;
                ps.extend(
                    cf.denominators()
                        .iter()
                        .filter_map(|q| usize::try_from(q).ok())
                        .filter(|&q| q >= 2 && 3 * q <= w.len()),
                );
            }
            ps.sort_unstable();
            ps.dedup();
            if ps.is_empty() {
                return Err(invalid("--p", "no block lengths to test"));
            }
            let rows = gordon_scan(&w, &ps).map_err(|e| invalid("--p", e))?;
            let table: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "p": r.p, "tested": r.tested, "hits": r.hits.len(), "density": r.density }))
                .collect();
            let positive = rows.iter().filter(|r| r.density > 0.0).count();
            json_report(sink, json!({ "rows": table }), &format!("{positive}/{} block lengths with positive density", rows.len()))?;
            Ok(Outcome::default())
        }
        Analyze::Cf { alpha, n } => {
            let a = real("--alpha", alpha)?;
            let cf = continued_fraction(&a, *n).map_err(|e| invalid("--alpha", e))?;
            let k = cf.kaminaga();
            let conv: Vec<[String; 2]> = cf.convergents().iter().map(|(p, q)| [p.to_string(), q.to_string()]).collect();
            let v = json!({
                "a0": cf.a0.to_string(),
                "partial": cf.partial,
                "terminated": cf.terminated,
                "convergents": conv,
                "within_bound": convergents_within_bound(a.to_f64(), &cf),
                "kaminaga": { "examined": k.examined, "count": k.count, "positions": k.positions },
            });
            json_report(sink, v, &format!("{} partial quotients, {} at least 4", cf.partial.len(), k.count))?;
            Ok(Outcome::default())
        }
        Analyze::Points { points, r, big_r, l } => {
            let d = delone_from_json(&read("--points", points)?).map_err(|e| invalid("--points", e))?;
            let b = d.points().first().ok_or_else(|| invalid("--points", "empty point set"))?.basis().clone();
            let rep = analyze_point_set(&d, &length("-r", &b, r)?, &length("--big-r", &b, big_r)?, &length("-l", &b, l)?)
                .map_err(|e| invalid("--points", e))?;
            let v = json!({
                "is_delone": rep.is_delone,
                "patch_count": rep.patch_count,
                "interior_anchors": rep.interior_anchors,
                "distinct_gaps": rep.distinct_gaps,
            });
            json_report(sink, v, &format!("delone = {}, {} patches", rep.is_delone, rep.patch_count))?;
            Ok(Outcome::default())
        }
        Analyze::DeloneMeasure { window, profiles } => {
            let w = load_window("--window", window)?;
            let set = PieceSet::new(load_pieces("--profiles", profiles)?).map_err(|e| invalid("--profiles", e))?;
            let rep = check_delone_measure_flc(&w, &set).map_err(|e| invalid("--profiles", e))?;
            let verdict = if rep.holds { "holds on window" } else { "fails on window" };
            let v = json!({
                "property": "delone_measure",
                "verdict": verdict,
                "occurrences": rep.occurrences,
                "reason": rep.reason,
            });
            json_report(sink, v, verdict)?;
            Ok(Outcome { counterexample: !rep.holds })
        }
    }
}

fn scan(s: &Scan, sink: &Sink, threads: usize) -> Result<Outcome> {
    match s {
        Scan::Bands { period, emin, emax, resolution, points } => {
            let p = load_piece("--period", period)?;
            let cell = CompiledPiece::new(&p);
            let grid = energy_grid(*emin, *emax, *points).map_err(|e| invalid("--emin/--emax/--points", e))?;
            let csv = scan_period(&cell, &grid, threads).map_err(|e| invalid("--period", e))?;
            let c = sink.write("csv", Artifact::Csv(csv.to_csv(&sink.header())))?;
            let bands = floquet_bands(&p, *emin, *emax, *resolution).map_err(|e| invalid("--resolution", e))?;
            let v = json!({ "edge_tol": EDGE_TOL, "measure": bands.measure, "bands": bands.bands });
            let j = sink.write("json", Artifact::Json(v))?;
            println!("wrote {} and {}: {} bands, measure {}", c.display(), j.display(), bands.bands.len(), bands.measure);
            Ok(Outcome::default())
        }
        Scan::Lyapunov { window, period, fibonacci, energies, seed, emin, emax, cells, samples } => {
            let sources = usize::from(window.is_some()) + usize::from(period.is_some()) + usize::from(fibonacci.is_some());
            if sources != 1 {
                return Err(invalid("--window/--period/--fibonacci", "give exactly one source"));
            }
            if emin.is_nan() || emax.is_nan() || emin >= emax || *energies == 0 {
                return Err(invalid("--emin/--emax/--energies", "need emin < emax and at least one energy"));
            }
            let (supplier, cells, samples): (Box<dyn WindowSupplier>, usize, usize) = if let Some(w) = window {
                let cell = CompiledPiece::window(&load_window("--window", w)?);
                (Box::new(PeriodicSupplier::new(cell).map_err(|e| invalid("--window", e))?), 1, 1)
            } else if let Some(p) = period {
                let cell = CompiledPiece::new(&load_piece("--period", p)?);
                (Box::new(PeriodicSupplier::new(cell).map_err(|e| invalid("--period", e))?), *cells, *samples)
            } else {
                let c = fibonacci.expect("one source");
                let sup = SequenceSupplier::fibonacci_kp(c, *cells, *samples).map_err(|e| invalid("--fibonacci", e))?;
                (Box::new(sup), *cells, *samples)
            };
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut grid: Vec<f64> = (0..*energies).map(|_| rng.random_range(*emin..*emax)).collect();
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            let scan = scan_lyapunov(supplier.as_ref(), &grid, cells, samples, threads).map_err(|e| invalid("--cells", e))?;
            let c = sink.write("csv", Artifact::Csv(scan.to_csv(&sink.header())))?;
            let positive = scan.records.iter().filter(|r| r.gamma > 0.0).count();
            println!("wrote {}: {positive}/{} energies with gamma > 0", c.display(), scan.records.len());
            Ok(Outcome::default())
        }
        Scan::Eigencount { window, energies } => {
            let cell = CompiledPiece::window(&load_window("--window", window)?);
            let mut csv = String::new();
            for h in sink.header() {
                let _ = writeln!(csv, "# {h}");
            }
            csv.push_str("E,count\n");
            for &e in energies {
                if !e.is_finite() {
                    return Err(invalid("--energies", format!("{e} is not finite")));
                }
                let _ = writeln!(csv, "{e},{}", qcflc_core::spectral::dirichlet_eigencount_compiled(&cell, e));
            }
            let c = sink.write("csv", Artifact::Csv(csv))?;
            println!("wrote {}", c.display());
            Ok(Outcome::default())
        }
        Scan::TraceMap { energy, coupling, order } => {
            let r = fibonacci_trace_sequence(*energy, *coupling, *order).map_err(|e| invalid("--order", e))?;
            let v = serde_json::to_value(&r).expect("reports serialize");
            let summary = format!(
                "order {} of {}, recursion residual {:.1e}, invariant drift {:.1e}",
                r.effective_n,
                r.requested_n,
                r.max_recursion_residual(),
                r.invariant_drift
            );
            json_report(sink, v, &summary)?;
            Ok(Outcome::default())
        }
    }
}
