//! One function per subcommand. Every command resolves its parameters as
//! defaults → config file → flags, writes its outputs atomically under the
//! output directory, writes the run manifest, and prints a one-line summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use omqm_core::born::{empirical_distribution, gaussian_model, total_variation, JitterModel};
use omqm_core::chaos::{
    feigenbaum_delta, fine_structure, rossler_trajectory, RosslerParams,
};
use omqm_core::collapse::{key_cylinder_collapse, zeta_stretch_collapse, CollapseOutcome};
use omqm_core::elliptic::{Lattice, WpContext, DEFAULT_CUTOFF};
use omqm_core::epr::{epr_collapse, EprOutcome, EprSetup};
use omqm_core::ledger::{run_ledger, ClaimRecord, ClaimStatus, ClaimValue, LedgerConfig};
use omqm_core::numtheory::build_table;
use omqm_core::omcore::OmScale;
use omqm_core::zeta::{counting_estimate, find_zeros};

use crate::config::{ConfigError, FileConfig, Globals};
use crate::emit::RunOutput;
use crate::svg;

fn base_resolved(globals: &Globals) -> BTreeMap<String, Value> {
    let mut resolved = BTreeMap::new();
    resolved.insert("global.seed".into(), json!(globals.seed));
    resolved.insert(
        "global.out_dir".into(),
        json!(globals.out_dir.display().to_string()),
    );
    resolved.insert("global.svg".into(), json!(globals.svg));
    resolved.insert("global.s_tilde_sign".into(), json!(globals.s_tilde_sign));
    resolved.insert("global.alpha_tilde".into(), json!(globals.alpha_tilde));
    resolved.insert("global.dimension".into(), json!(globals.dimension));
    resolved
}

// ---------------------------------------------------------------- collapse

/// Which collapse mechanism to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathChoice {
    /// Braid-walking key-cylinder mechanism.
    Key,
    /// Analytic zeta-stretch mechanism (with certification).
    Zeta,
    /// Run both and report both records.
    Both,
}

impl PathChoice {
    fn as_str(self) -> &'static str {
        match self {
            PathChoice::Key => "key",
            PathChoice::Zeta => "zeta",
            PathChoice::Both => "both",
        }
    }

    fn from_config(text: &str) -> Result<Self, ConfigError> {
        match text {
            "key" => Ok(PathChoice::Key),
            "zeta" => Ok(PathChoice::Zeta),
            "both" => Ok(PathChoice::Both),
            other => Err(ConfigError(format!(
                "collapse.path must be key, zeta or both, got {other:?}"
            ))),
        }
    }
}

/// Deterministic collapse of one scale by the key-cylinder and/or
/// zeta-stretch mechanism.
#[derive(Debug, Args)]
pub struct CollapseArgs {
    /// Scale (petal count) l1.
    #[arg(long)]
    pub l1: u64,
    /// Outcome-space size n (>= 1).
    #[arg(long)]
    pub n: u64,
    /// Mechanism: key, zeta, or both (default from config, else both).
    #[arg(long, value_enum)]
    pub path: Option<PathChoice>,
}

fn outcome_json(outcome: &CollapseOutcome) -> Value {
    json!({
        "k_star": outcome.k_star,
        "rotation_trace": outcome.rotation_trace,
        "rotation_sum": outcome.rotation_sum,
        "phase_re": outcome.phase.re,
        "phase_im": outcome.phase.im,
        "path": outcome.path.as_str(),
    })
}

pub fn run_collapse(args: &CollapseArgs, globals: &Globals, file: &FileConfig) -> Result<()> {
    let choice = match args.path {
        Some(p) => p,
        None => match file.get_str("collapse.path")? {
            Some(text) => PathChoice::from_config(text)?,
            None => PathChoice::Both,
        },
    };
    let scale = OmScale::new(args.l1, args.n)?;
    let document = match choice {
        PathChoice::Key => outcome_json(&key_cylinder_collapse(scale, &globals.constants)),
        PathChoice::Zeta => {
            let (outcome, _certificate) = zeta_stretch_collapse(scale, &globals.constants)?;
            outcome_json(&outcome)
        }
        PathChoice::Both => {
            let key = key_cylinder_collapse(scale, &globals.constants);
            let (zeta, _certificate) = zeta_stretch_collapse(scale, &globals.constants)?;
            json!([outcome_json(&key), outcome_json(&zeta)])
        }
    };
    let mut out = RunOutput::new(&globals.out_dir)?;
    out.write(
        "collapse.json",
        &format!("{}\n", serde_json::to_string_pretty(&document)?),
    )?;
    let mut resolved = base_resolved(globals);
    resolved.insert("collapse.l1".into(), json!(args.l1));
    resolved.insert("collapse.n".into(), json!(args.n));
    resolved.insert("collapse.path".into(), json!(choice.as_str()));
    out.finish("collapse", &resolved)?;
    println!("{}", serde_json::to_string(&document)?);
    Ok(())
}

// -------------------------------------------------------------------- born

/// Sample the jittered collapse statistics and compare with the model law.
#[derive(Debug, Args)]
pub struct BornArgs {
    /// Scale (petal count) l1.
    #[arg(long)]
    pub l1: u64,
    /// Outcome-space size n (>= 1).
    #[arg(long)]
    pub n: u64,
    /// Jitter width sigma in scale units.
    #[arg(long)]
    pub sigma: f64,
    /// Number of samples (default from config, else 100000).
    #[arg(long)]
    pub samples: Option<u64>,
}

pub fn run_born(args: &BornArgs, globals: &Globals, file: &FileConfig) -> Result<()> {
    let samples = match args.samples {
        Some(s) => s,
        None => file.get_u64("born.samples")?.unwrap_or(100_000),
    };
    let scale = OmScale::new(args.l1, args.n)?;
    let jitter = JitterModel::new(args.sigma, globals.seed, samples)?;
    let empirical = empirical_distribution(scale, &jitter)?;
    let model = gaussian_model(scale, args.sigma)?;
    let probabilities = empirical.probabilities();
    let tv = total_variation(&probabilities, &model);
    let mut csv = String::from("k,count,empirical_p,model_p\n");
    for k in 0..args.n as usize {
        let _ = writeln!(
            csv,
            "{k},{},{},{}",
            empirical.counts()[k],
            probabilities[k],
            model[k]
        );
    }
    let mut out = RunOutput::new(&globals.out_dir)?;
    let csv_path = out.write("born.csv", &csv)?;
    if globals.svg {
        let title = format!(
            "born l1={} n={} sigma={} samples={samples}",
            args.l1, args.n, args.sigma
        );
        out.write(
            "born.svg",
            &svg::histogram_with_overlay(&title, &probabilities, &model),
        )?;
    }
    let mut resolved = base_resolved(globals);
    resolved.insert("born.l1".into(), json!(args.l1));
    resolved.insert("born.n".into(), json!(args.n));
    resolved.insert("born.sigma".into(), json!(args.sigma));
    resolved.insert("born.samples".into(), json!(samples));
    out.finish("born", &resolved)?;
    println!(
        "born: l1={} n={} sigma={} samples={samples} seed={} tv={tv:.6} -> {}",
        args.l1,
        args.n,
        args.sigma,
        globals.seed,
        csv_path.display()
    );
    Ok(())
}

// --------------------------------------------------------------------- epr

/// Entangled two-particle collapse: one setup via flags, or a JSON-lines
/// batch of setups via --batch.
#[derive(Debug, Args)]
pub struct EprArgs {
    /// Particle A scale.
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    pub l1a: Option<u64>,
    /// Particle B scale.
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    pub l1b: Option<u64>,
    /// Entanglement-box scale (default 0).
    #[arg(long, conflicts_with = "batch")]
    pub b: Option<u64>,
    /// Outcome-space size n (>= 1).
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    pub n: Option<u64>,
    /// Crossing parity: +1 or -1 (default +1).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "batch")]
    pub parity: Option<i8>,
    /// JSON-lines file of setups: {"l1_a":..,"l1_b":..,"b":..,"n":..,"parity":..}
    /// per line (b and parity optional).
    #[arg(long, value_name = "FILE")]
    pub batch: Option<PathBuf>,
}

fn epr_record(outcome: &EprOutcome) -> Value {
    json!({
        "k_a": outcome.k_a,
        "k_b": outcome.k_b,
        "orient_a": outcome.orient_a,
        "orient_b": outcome.orient_b,
        "spin_a": outcome.spin_a,
        "spin_b": outcome.spin_b,
        "symmetric": outcome.symmetric,
    })
}

const BATCH_KEYS: &[&str] = &["l1_a", "l1_b", "b", "n", "parity"];

fn parse_batch_line(line: &str, number: usize) -> Result<EprSetup> {
    let value: Value = serde_json::from_str(line)
        .with_context(|| format!("batch line {number} is not valid JSON"))?;
    let object = value
        .as_object()
        .ok_or_else(|| anyhow!("batch line {number} must be a JSON object"))?;
    for key in object.keys() {
        if !BATCH_KEYS.contains(&key.as_str()) {
            bail!("batch line {number}: unknown field {key:?}");
        }
    }
    let need_u64 = |key: &str| -> Result<u64> {
        object
            .get(key)
            .and_then(Value::as_u64)
            .ok_or_else(|| anyhow!("batch line {number}: field {key:?} must be a non-negative integer"))
    };
    let l1_a = need_u64("l1_a")?;
    let l1_b = need_u64("l1_b")?;
    let n = need_u64("n")?;
    let b = match object.get("b") {
        None => 0,
        Some(v) => v
            .as_u64()
            .ok_or_else(|| anyhow!("batch line {number}: field \"b\" must be a non-negative integer"))?,
    };
    let parity = match object.get("parity") {
        None => 1,
        Some(v) => {
            let raw = v
                .as_i64()
                .ok_or_else(|| anyhow!("batch line {number}: field \"parity\" must be +1 or -1"))?;
            i8::try_from(raw).map_err(|_| anyhow!("batch line {number}: parity out of range"))?
        }
    };
    EprSetup::new(l1_a, l1_b, b, n, parity)
        .with_context(|| format!("batch line {number}"))
}

pub fn run_epr(args: &EprArgs, globals: &Globals) -> Result<()> {
    let mut out = RunOutput::new(&globals.out_dir)?;
    let mut resolved = base_resolved(globals);
    if let Some(batch_path) = &args.batch {
        let text = fs::read_to_string(batch_path)
            .with_context(|| format!("cannot read batch file {}", batch_path.display()))?;
        let mut lines = String::new();
        let mut count = 0usize;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let setup = parse_batch_line(line, idx + 1)?;
            let outcome = epr_collapse(&setup)?;
            let _ = writeln!(lines, "{}", serde_json::to_string(&epr_record(&outcome))?);
            count += 1;
        }
        if count == 0 {
            bail!("batch file {} holds no setups", batch_path.display());
        }
        let path = out.write("epr-batch.jsonl", &lines)?;
        resolved.insert(
            "epr.batch".into(),
            json!(batch_path.display().to_string()),
        );
        out.finish("epr", &resolved)?;
        println!("epr: {count} scenarios -> {}", path.display());
        return Ok(());
    }
    let l1_a = args.l1a.expect("clap enforces presence");
    let l1_b = args.l1b.expect("clap enforces presence");
    let n = args.n.expect("clap enforces presence");
    let b = args.b.unwrap_or(0);
    let parity = args.parity.unwrap_or(1);
    let setup = EprSetup::new(l1_a, l1_b, b, n, parity)?;
    let outcome = epr_collapse(&setup)?;
    let record = epr_record(&outcome);
    out.write(
        "epr.json",
        &format!("{}\n", serde_json::to_string_pretty(&record)?),
    )?;
    resolved.insert("epr.l1a".into(), json!(l1_a));
    resolved.insert("epr.l1b".into(), json!(l1_b));
    resolved.insert("epr.b".into(), json!(b));
    resolved.insert("epr.n".into(), json!(n));
    resolved.insert("epr.parity".into(), json!(parity));
    out.finish("epr", &resolved)?;
    println!("{}", serde_json::to_string(&record)?);
    Ok(())
}

// -------------------------------------------------------------- weierstrass

/// Lattice shape for the elliptic-function grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeChoice {
    /// Periods 1 and i.
    Square,
    /// Periods 1 and e^{i pi/3}.
    Hexagonal,
}

/// Tabulate the elliptic function over the fundamental cell.
#[derive(Debug, Args)]
pub struct WeierstrassArgs {
    /// Lattice shape.
    #[arg(long, value_enum, default_value = "square")]
    pub lattice: LatticeChoice,
    /// Grid points per axis (default from config, else 41).
    #[arg(long)]
    pub grid: Option<u64>,
    /// Cell scaling factor in (0, 1] (default from config, else 1).
    #[arg(long)]
    pub extent: Option<f64>,
}

pub fn run_weierstrass(
    args: &WeierstrassArgs,
    globals: &Globals,
    file: &FileConfig,
) -> Result<()> {
    let grid = match args.grid {
        Some(g) => g,
        None => file.get_u64("weierstrass.grid")?.unwrap_or(41),
    };
    if !(2..=512).contains(&grid) {
        return Err(ConfigError(format!("grid must lie in [2, 512], got {grid}")).into());
    }
    let extent = match args.extent {
        Some(e) => e,
        None => file.get_f64("weierstrass.extent")?.unwrap_or(1.0),
    };
    if !(extent > 0.0 && extent <= 1.0) {
        return Err(ConfigError(format!("extent must lie in (0, 1], got {extent}")).into());
    }
    let lattice = match args.lattice {
        LatticeChoice::Square => Lattice::square()?,
        LatticeChoice::Hexagonal => Lattice::hexagonal()?,
    };
    let ctx = WpContext::new(&lattice, DEFAULT_CUTOFF)?;
    let (o1, o2) = (lattice.omega1(), lattice.omega2());
    let mut csv = String::from("re_z,im_z,re_wp,im_wp,ode_residual\n");
    let mut magnitude_rows = Vec::with_capacity(grid as usize);
    let mut max_residual = 0.0f64;
    let denominator = (grid + 1) as f64;
    for j in 1..=grid {
        let t = extent * j as f64 / denominator;
        let mut magnitude_row = Vec::with_capacity(grid as usize);
        for i in 1..=grid {
            let s = extent * i as f64 / denominator;
            let z = o1 * s + o2 * t;
            let wp = ctx.wp(z)?;
            let residual = ctx.ode_residual(z)?;
            max_residual = max_residual.max(residual);
            magnitude_row.push(wp.value.norm());
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                z.re, z.im, wp.value.re, wp.value.im, residual
            );
        }
        magnitude_rows.push(magnitude_row);
    }
    let mut out = RunOutput::new(&globals.out_dir)?;
    let csv_path = out.write("weierstrass.csv", &csv)?;
    let lattice_name = match args.lattice {
        LatticeChoice::Square => "square",
        LatticeChoice::Hexagonal => "hexagonal",
    };
    if globals.svg {
        let title = format!("|wp| on the {lattice_name} lattice ({grid}x{grid})");
        out.write("weierstrass.svg", &svg::heatmap(&title, &magnitude_rows))?;
    }
    let mut resolved = base_resolved(globals);
    resolved.insert("weierstrass.lattice".into(), json!(lattice_name));
    resolved.insert("weierstrass.grid".into(), json!(grid));
    resolved.insert("weierstrass.extent".into(), json!(extent));
    out.finish("weierstrass", &resolved)?;
    println!(
        "weierstrass: {lattice_name} lattice {grid}x{grid} extent {extent} max residual {max_residual:.3e} -> {}",
        csv_path.display()
    );
    Ok(())
}

// ------------------------------------------------------------------- zeros

/// Scan critical-line zeros and export the table.
#[derive(Debug, Args)]
pub struct ZerosArgs {
    /// Scan height (0, 120].
    #[arg(long, default_value_t = 50.0)]
    pub t_max: f64,
    /// Bisection precision (default from config, else 1e-9).
    #[arg(long)]
    pub precision: Option<f64>,
}

pub fn run_zeros(args: &ZerosArgs, globals: &Globals, file: &FileConfig) -> Result<()> {
    let precision = match args.precision {
        Some(p) => p,
        None => file.get_f64("zeros.precision")?.unwrap_or(1e-9),
    };
    let table = find_zeros(args.t_max, precision)?;
    let mut out = RunOutput::new(&globals.out_dir)?;
    let path = out.path_of("zeros.txt");
    let tmp = out.path_of(&format!(".zeros.txt.tmp-{}", std::process::id()));
    table.save(&tmp)?;
    fs::rename(&tmp, &path)
        .with_context(|| format!("cannot move {} into place", path.display()))?;
    out.record("zeros.txt");
    if globals.svg {
        let title = format!("critical-line zeros to t = {}", args.t_max);
        out.write("zeros.svg", &svg::scatter(&title, table.zeros()))?;
    }
    let estimate = counting_estimate(args.t_max);
    let mut resolved = base_resolved(globals);
    resolved.insert("zeros.t_max".into(), json!(args.t_max));
    resolved.insert("zeros.precision".into(), json!(precision));
    out.finish("zeros", &resolved)?;
    println!(
        "zeros: {} zeros in (0, {}] (estimate {estimate:.2}, precision {precision:e}) -> {}",
        table.zeros().len(),
        args.t_max,
        path.display()
    );
    Ok(())
}

// --------------------------------------------------------------- numtheory

/// Build arithmetic tables and report summary values.
#[derive(Debug, Args)]
pub struct NumtheoryArgs {
    /// Sieve bound (default from config, else 100000).
    #[arg(long)]
    pub table_bound: Option<u64>,
    /// Rows of the emitted CSV (clamped to the bound).
    #[arg(long, default_value_t = 1000)]
    pub rows: u64,
    /// Also save the binary table cache to this file (relative paths land in
    /// the output directory).
    #[arg(long, value_name = "FILE")]
    pub cache: Option<PathBuf>,
}

pub fn run_numtheory(args: &NumtheoryArgs, globals: &Globals, file: &FileConfig) -> Result<()> {
    let bound = match args.table_bound {
        Some(b) => b,
        None => file.get_u64("numtheory.table_bound")?.unwrap_or(100_000),
    };
    let table = build_table(bound)?;
    let rows = args.rows.min(bound);
    let mut csv = String::from("k,mobius,mertens,von_mangoldt,psi\n");
    let mut mertens = 0i64;
    let mut psi = 0.0f64;
    for k in 1..=rows {
        mertens += i64::from(table.mobius(k)?);
        let lambda = table.von_mangoldt(k)?;
        psi += lambda;
        let _ = writeln!(csv, "{k},{},{mertens},{lambda},{psi}", table.mobius(k)?);
    }
    let mut out = RunOutput::new(&globals.out_dir)?;
    let csv_path = out.write("numtheory.csv", &csv)?;
    let mut cache_note = String::new();
    if let Some(cache) = &args.cache {
        let target = if cache.is_absolute() {
            cache.clone()
        } else {
            globals.out_dir.join(cache)
        };
        if let Some(parent) = target.parent() {
            fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
        let tmp = target.with_file_name(format!(
            ".{}.tmp-{}",
            target.file_name().and_then(|n| n.to_str()).unwrap_or("cache"),
            std::process::id()
        ));
        table.save_cache(&tmp)?;
        fs::rename(&tmp, &target)
            .with_context(|| format!("cannot move {} into place", target.display()))?;
        if target.starts_with(&globals.out_dir) {
            if let Ok(rel) = target.strip_prefix(&globals.out_dir) {
                out.record(&rel.display().to_string());
            }
        }
        cache_note = format!(" cache={}", target.display());
    }
    let mut resolved = base_resolved(globals);
    resolved.insert("numtheory.table_bound".into(), json!(bound));
    resolved.insert("numtheory.rows".into(), json!(rows));
    out.finish("numtheory", &resolved)?;
    println!(
        "numtheory: bound={bound} primes={} psi(bound)={:.6} M({rows})={mertens} -> {}{cache_note}",
        table.prime_count(),
        table.chebyshev_psi(bound)?,
        csv_path.display()
    );
    Ok(())
}

// ------------------------------------------------------------------- chaos

/// Period-doubling cascade and, optionally, the chaotic attractor.
#[derive(Debug, Args)]
pub struct ChaosArgs {
    /// Cascade depth (default from config, else 10).
    #[arg(long)]
    pub feigenbaum_levels: Option<u64>,
    /// Integrate the attractor; optional value "a,b,c,dt,t" overrides the
    /// flow parameters (default from config, else 0.2,0.2,5.7,0.01,2000).
    #[arg(long, value_name = "A,B,C,DT,T", num_args = 0..=1, default_missing_value = "defaults")]
    pub rossler: Option<String>,
}

fn rossler_from(text: &str, base: RosslerParams) -> Result<RosslerParams> {
    if text == "defaults" {
        return Ok(base);
    }
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 5 {
        return Err(ConfigError(format!(
            "--rossler takes five comma-separated numbers a,b,c,dt,t, got {text:?}"
        ))
        .into());
    }
    let mut numbers = [0.0f64; 5];
    for (slot, part) in numbers.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| ConfigError(format!("--rossler component {part:?} is not a number")))?;
    }
    Ok(RosslerParams {
        a: numbers[0],
        b: numbers[1],
        c: numbers[2],
        dt: numbers[3],
        t_total: numbers[4],
        ..base
    })
}

pub fn run_chaos(args: &ChaosArgs, globals: &Globals, file: &FileConfig) -> Result<()> {
    let levels = match args.feigenbaum_levels {
        Some(l) => l,
        None => file.get_u64("chaos.feigenbaum_levels")?.unwrap_or(10),
    };
    let estimate = feigenbaum_delta(levels as usize)?;
    let mut csv = String::from("m,a,ratio\n");
    for (m, a) in estimate.parameters.iter().enumerate() {
        let ratio = estimate
            .ratios
            .get(m)
            .map(|r| r.to_string())
            .unwrap_or_default();
        let _ = writeln!(csv, "{m},{a},{ratio}");
    }
    let mut out = RunOutput::new(&globals.out_dir)?;
    let feigenbaum_path = out.write("feigenbaum.csv", &csv)?;
    let readings = fine_structure(globals.dimension, estimate.delta)?;
    let mut summary = format!(
        "chaos: feigenbaum delta={:.9} (levels={levels}) printed={:.6} matching={:.6} -> {}",
        estimate.delta,
        readings.reading_printed,
        readings.reading_matching,
        feigenbaum_path.display()
    );
    let mut resolved = base_resolved(globals);
    resolved.insert("chaos.feigenbaum_levels".into(), json!(levels));
    if let Some(flag) = &args.rossler {
        let mut base = RosslerParams::default();
        if let Some(a) = file.get_f64("chaos.a")? {
            base.a = a;
        }
        if let Some(b) = file.get_f64("chaos.b")? {
            base.b = b;
        }
        if let Some(c) = file.get_f64("chaos.c")? {
            base.c = c;
        }
        if let Some(dt) = file.get_f64("chaos.dt")? {
            base.dt = dt;
        }
        if let Some(t_total) = file.get_f64("chaos.t_total")? {
            base.t_total = t_total;
        }
        let params = rossler_from(flag, base)?;
        let steps = (params.t_total / params.dt).round().max(1.0);
        let stride = ((steps / 20_000.0).ceil() as usize).max(1);
        let trajectory = rossler_trajectory(&params, stride)?;
        let mut rows = String::from("t,x,y,z\n");
        for (t, [x, y, z]) in &trajectory {
            let _ = writeln!(rows, "{t},{x},{y},{z}");
        }
        let rossler_path = out.write("rossler.csv", &rows)?;
        if globals.svg {
            let thin = (trajectory.len() / 4000).max(1);
            let points: Vec<(f64, f64)> = trajectory
                .iter()
                .step_by(thin)
                .map(|(_, [x, y, _])| (*x, *y))
                .collect();
            let title = format!(
                "x-y portrait a={} b={} c={}",
                params.a, params.b, params.c
            );
            out.write("rossler.svg", &svg::phase_portrait(&title, &points))?;
        }
        resolved.insert("chaos.a".into(), json!(params.a));
        resolved.insert("chaos.b".into(), json!(params.b));
        resolved.insert("chaos.c".into(), json!(params.c));
        resolved.insert("chaos.dt".into(), json!(params.dt));
        resolved.insert("chaos.t_total".into(), json!(params.t_total));
        let _ = write!(
            summary,
            "; rossler {} rows -> {}",
            trajectory.len(),
            rossler_path.display()
        );
    }
    out.finish("chaos", &resolved)?;
    println!("{summary}");
    Ok(())
}

// ------------------------------------------------------------------ verify

/// Evaluate the claim ledger and report every grade.
#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Print the ledger as a JSON array on stdout.
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    /// Print the ledger as a fixed-width table on stdout (the default).
    #[arg(long)]
    pub table: bool,
}

fn claim_value_json(value: ClaimValue) -> Value {
    match value {
        ClaimValue::Real(x) => json!(x),
        ClaimValue::Complex { re, im } => json!({ "re": re, "im": im }),
    }
}

fn claim_value_text(value: ClaimValue) -> String {
    match value {
        ClaimValue::Real(x) => format!("{x:.12}"),
        ClaimValue::Complex { re, im } => format!("{re:.9}{im:+.9}i"),
    }
}

fn ledger_json(records: &[ClaimRecord]) -> Result<String> {
    let array: Vec<Value> = records
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "status": r.status.as_str(),
                "computed": claim_value_json(r.computed),
                "reference": r.reference.map(claim_value_json).unwrap_or(Value::Null),
                "tolerance": r.tolerance,
                "note": r.note,
            })
        })
        .collect();
    Ok(format!("{}\n", serde_json::to_string_pretty(&array)?))
}

fn ledger_table(records: &[ClaimRecord]) -> String {
    let mut text = format!(
        "{:<16} {:<12} {:>28} {:>28} {:>10}  note\n",
        "id", "status", "computed", "reference", "tolerance"
    );
    for record in records {
        let reference = record
            .reference
            .map(claim_value_text)
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(
            text,
            "{:<16} {:<12} {:>28} {:>28} {:>10}  {}",
            record.id,
            record.status.as_str(),
            claim_value_text(record.computed),
            reference,
            format!("{:e}", record.tolerance),
            record.note
        );
    }
    text
}

pub fn run_verify(args: &VerifyArgs, globals: &Globals) -> Result<()> {
    let records = run_ledger(&LedgerConfig {
        constants: globals.constants.clone(),
        ..LedgerConfig::default()
    })?;
    let json_text = ledger_json(&records)?;
    let mut out = RunOutput::new(&globals.out_dir)?;
    let path = out.write("ledger.json", &json_text)?;
    let resolved = base_resolved(globals);
    out.finish("verify", &resolved)?;
    if args.json {
        print!("{json_text}");
    } else {
        print!("{}", ledger_table(&records));
    }
    let confirmed = records
        .iter()
        .filter(|r| r.status == ClaimStatus::Confirmed)
        .count();
    let discrepant = records
        .iter()
        .filter(|r| r.status == ClaimStatus::Discrepant)
        .count();
    let report_only = records.len() - confirmed - discrepant;
    eprintln!(
        "verify: {} claims - {confirmed} confirmed, {discrepant} discrepant, {report_only} report-only -> {}",
        records.len(),
        path.display()
    );
    Ok(())
}
