use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wildfire_uav::markov::{self, Rating, RatingSequence};
use wildfire_uav::planner::format::{fraction, sig6, Table};
use wildfire_uav::planner::{self, FleetPlan, OracleReport, Planner, PlannerConfig};
use wildfire_uav::ranking::{self, IndicatorTable, Orientation, WeightVector};
use wildfire_uav::ssa;

#[derive(Parser, Debug)]
#[command(name = "uavplan", version, about = "Wildfire drone fleet planning")]
struct Cli {
    /// JSON planner configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides every configured Monte Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Exit with status 3 when a plan is infeasible or fails an oracle.
    #[arg(long, global = true)]
    strict: bool,
    /// Write files into this directory instead of printing to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grey relational ranking of fire protection zones.
    RankRegions {
        /// CSV with a zone column followed by one column per indicator.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Comma-separated indicator weights.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Comma-separated `cost` or `benefit` per indicator.
        #[arg(long, value_delimiter = ',')]
        orientation: Option<Vec<String>>,
        #[arg(long, default_value_t = ranking::DEFAULT_RHO)]
        rho: f64,
        /// Number of target zones.
        #[arg(short, default_value_t = 4)]
        k: usize,
    },
    /// Fits the rating transition matrix and its limit distribution.
    FitMarkov {
        /// Comma-separated ratings (1, 2 or 3).
        #[arg(long, value_delimiter = ',', conflicts_with = "radii")]
        sequence: Option<Vec<i64>>,
        /// Comma-separated fire radii (km), classified into ratings.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
    },
    /// Full fleet plan for one fire radius.
    Plan {
        /// Fire radius D (km).
        #[arg(long)]
        radius: f64,
    },
    /// Deployed totals against D/d with d = r.
    SweepFig7 {
        #[arg(long, default_value_t = 0.001)]
        step: f64,
        /// Defaults to 2 cos(π/5).
        #[arg(long)]
        max: Option<f64>,
    },
    /// Ring radius and deployment time against D/r.
    SweepFig8,
    /// Repeater range sensitivity to the cone radius, z0 and beta.
    SweepFig9,
    /// Published extreme-fire costs, recomputed and annotated.
    CostTable,
    /// Replans a fire growing at a constant rate.
    SimulateGrowth {
        /// Initial radius (km).
        #[arg(long)]
        d0: f64,
        /// Growth rate (km/h).
        #[arg(long)]
        rate: f64,
        /// Horizon (h).
        #[arg(long)]
        horizon: f64,
        /// Tick (h).
        #[arg(long, default_value_t = 0.5)]
        tick: f64,
    },
}

/// Outcome of a strict-mode check.
struct StrictFailure(String);

impl std::fmt::Debug for StrictFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::fmt::Display for StrictFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for StrictFailure {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<StrictFailure>().is_some() {
                ExitCode::from(3)
            } else if e.chain().any(|c| c.downcast_ref::<wildfire_uav::Error>().is_some()) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn load_config(cli: &Cli) -> Result<PlannerConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            PlannerConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => PlannerConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = cli.samples {
        cfg.samples.range = n;
        cfg.samples.coverage = n;
        cfg.figure9.samples = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Collects named outputs and writes them once every check has passed.
struct Output<'a> {
    cli: &'a Cli,
    files: Vec<(String, String)>,
}

impl<'a> Output<'a> {
    fn new(cli: &'a Cli) -> Self {
        Self { cli, files: Vec::new() }
    }

    /// The first table added goes to stdout when no output directory is set.
    fn table(&mut self, name: &str, table: &Table) -> Result<()> {
        if self.cli.format == Format::Csv {
            self.files.push((format!("{name}.csv"), table.to_csv_string()?));
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        if self.cli.format == Format::Json {
            self.files.push((format!("{name}.json"), serde_json::to_string_pretty(value)? + "\n"));
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        match &self.cli.out {
            Some(dir) => {
                ensure_dir(dir)?;
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                for (name, body) in &self.files {
                    let path = dir.join(name);
                    write_file(&path, body)?;
                    log::info!("wrote {}", path.display());
                }
            }
            None => {
                if let Some((_, body)) = self.files.first() {
                    std::io::stdout().lock().write_all(body.as_bytes())?;
                }
            }
        }
        Ok(())
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: &Cli) -> Result<()> {
    let mut out = Output::new(cli);
    match &cli.command {
        Command::RankRegions { table, weights, orientation, rho, k } => {
            rank_regions(&mut out, table.as_deref(), weights.as_deref(), orientation.as_deref(), *rho, *k)?
        }
        Command::FitMarkov { sequence, radii } => fit_markov(&mut out, sequence.as_deref(), radii.as_deref())?,
        Command::Plan { radius } => {
            let planner = Planner::new(load_config(cli)?)?;
            let plan = planner.plan(*radius)?;
            let oracle = planner.verify(&plan, planner.config().samples.coverage);
            strict_plan(cli, &plan, &oracle)?;
            emit_plan(&mut out, &planner, &plan, &oracle)?;
        }
        Command::SweepFig7 { step, max } => {
            let cfg = load_config(cli)?;
            let max = max.unwrap_or(ssa::small_band_limits()[3].0);
            let fig = planner::figure7(cfg.standby_factor, max, *step)?;
            let mut rows = Table::new(&["ratio", "n_cover", "m_cover", "n_total", "m_total"]);
            for r in &fig.rows {
                rows.push(vec![
                    sig6(r.ratio),
                    r.n_cover.to_string(),
                    r.m_cover.to_string(),
                    r.n_total.to_string(),
                    r.m_total.to_string(),
                ]);
            }
            let mut bps = Table::new(&["ratio", "n_below", "m_below", "n_above", "m_above"]);
            for b in &fig.breakpoints {
                log::info!("breakpoint at D/d = {:.12}: {:?} -> {:?}", b.ratio, b.below, b.above);
                bps.push(vec![
                    format!("{:.12}", b.ratio),
                    b.below.0.to_string(),
                    b.below.1.to_string(),
                    b.above.0.to_string(),
                    b.above.1.to_string(),
                ]);
            }
            out.table("figure7", &rows)?;
            out.table("figure7_breakpoints", &bps)?;
            out.json("figure7", &fig)?;
        }
        Command::SweepFig8 => {
            let cfg = load_config(cli)?;
            let f8 = &cfg.figure8;
            let rows = planner::figure8(&f8.ranges_km, f8.max_ratio, f8.step, &cfg.deployment)?;
            let mut trends = Vec::new();
            for &r in &f8.ranges_km {
                let curve: Vec<_> = rows.iter().filter(|x| x.range_km == r).copied().collect();
                trends.push((r, planner::figure8_trend(&curve)));
            }
            if cli.strict {
                if let Some(bad) = rows.iter().find(|x| (x.identity_km - x.range_km).abs() > 1e-9 * x.range_km) {
                    return Err(StrictFailure(format!(
                        "coverage identity off by {} km at D/r = {}",
                        (bad.identity_km - bad.range_km).abs(),
                        bad.ratio
                    ))
                    .into());
                }
            }
            let mut t = Table::new(&[
                "range_km", "ratio", "radius_km", "m", "ring_km", "distance_km", "time_h", "identity_km", "feasible",
            ]);
            for x in &rows {
                t.push(vec![
                    sig6(x.range_km),
                    sig6(x.ratio),
                    sig6(x.radius_km),
                    x.m.to_string(),
                    sig6(x.ring_km),
                    sig6(x.distance_km),
                    sig6(x.time_h),
                    sig6(x.identity_km),
                    x.feasible.to_string(),
                ]);
            }
            let mut tt = Table::new(&[
                "range_km",
                "q_nondecreasing",
                "ring_band_decreasing_below_one",
                "ring_band_increases_above_one",
                "band_starts_nondecreasing_above_one",
                "ring_jumps",
                "slope_below_one",
                "slope_above_one",
            ]);
            for (r, tr) in &trends {
                tt.push(vec![
                    sig6(*r),
                    tr.q_nondecreasing.to_string(),
                    tr.ring_band_decreasing_below_one.to_string(),
                    tr.ring_band_increases_above_one.to_string(),
                    tr.band_starts_nondecreasing_above_one.to_string(),
                    tr.ring_jumps.to_string(),
                    sig6(tr.slope_below_one),
                    sig6(tr.slope_above_one),
                ]);
            }
            out.table("figure8", &t)?;
            out.table("figure8_trend", &tt)?;
            #[derive(Serialize)]
            struct Fig8<'a> {
                rows: &'a [planner::Figure8Row],
                trends: Vec<TrendEntry>,
            }
            #[derive(Serialize)]
            struct TrendEntry {
                range_km: f64,
                #[serde(flatten)]
                trend: planner::Figure8Trend,
            }
            let trends = trends.into_iter().map(|(range_km, trend)| TrendEntry { range_km, trend }).collect();
            out.json("figure8", &Fig8 { rows: &rows, trends })?;
        }
        Command::SweepFig9 => {
            let planner = Planner::new(load_config(cli)?)?;
            let rows = planner::figure9(&planner)?;
            let mut t = Table::new(&[
                "height_km",
                "base_radius_km",
                "firefighter_altitude_km",
                "beta_factor",
                "range_km",
                "feasible",
                "best_altitude_km",
            ]);
            for x in &rows {
                t.push(vec![
                    sig6(x.height_km),
                    sig6(x.base_radius_km),
                    sig6(x.firefighter_altitude_km),
                    sig6(x.beta_factor),
                    sig6(x.range_km),
                    x.feasible.to_string(),
                    x.best_altitude_km.map(sig6).unwrap_or_default(),
                ]);
            }
            out.table("figure9", &t)?;
            out.json("figure9", &rows)?;
        }
        Command::CostTable => {
            let planner = Planner::new(load_config(cli)?)?;
            let rows = planner::cost_table(&planner)?;
            let mut t = Table::new(&[
                "D", "m", "n", "u", "G0", "G1", "G0_recomputed", "G1_recomputed", "u_rounded", "m_model", "n_model",
                "note",
            ]);
            for x in &rows {
                let p = x.published;
                let mut notes = Vec::new();
                if !x.g0_consistent {
                    notes.push(format!("G0 != (n+m+ut)c = {}", x.g0_recomputed));
                }
                if !x.g1_consistent {
                    notes.push(format!("G1 != utc = {}", x.g1_recomputed));
                }
                if x.u_rounded != p.u {
                    notes.push(format!("u != [(n+m)p] = {}", x.u_rounded));
                }
                if !x.m_rounding_consistent {
                    notes.push(format!("m differs from model by {}", x.m_model.abs_diff(p.m)));
                }
                if x.n_model != p.n {
                    notes.push(format!("n differs from model by {}", x.n_model.abs_diff(p.n)));
                }
                t.push(vec![
                    p.d_km.to_string(),
                    p.m.to_string(),
                    p.n.to_string(),
                    p.u.to_string(),
                    p.g0.to_string(),
                    p.g1.to_string(),
                    x.g0_recomputed.to_string(),
                    x.g1_recomputed.to_string(),
                    x.u_rounded.to_string(),
                    x.m_model.to_string(),
                    x.n_model.to_string(),
                    notes.join("; "),
                ]);
            }
            out.table("cost_table", &t)?;
            out.json("cost_table", &rows)?;
        }
        Command::SimulateGrowth { d0, rate, horizon, tick } => {
            let planner = Planner::new(load_config(cli)?)?;
            let rows = planner::simulate_growth(&planner, *d0, *rate, *horizon, *tick)?;
            if cli.strict {
                for r in &rows {
                    let oracle = planner.verify(&r.plan, planner.config().samples.coverage);
                    strict_plan(cli, &r.plan, &oracle)?;
                }
            }
            let mut t = Table::new(&["t_h", "radius_km", "n_total", "m_total", "ring_km", "time_h", "feasible"]);
            for r in &rows {
                t.push(vec![
                    sig6(r.t_h),
                    sig6(r.radius_km),
                    r.n_total.to_string(),
                    r.m_total.to_string(),
                    sig6(r.ring_km),
                    sig6(r.time_h),
                    r.feasible.to_string(),
                ]);
            }
            out.table("growth", &t)?;
            out.json("growth", &rows)?;
        }
    }
    out.finish()
}

fn parse_orientation(s: &str) -> Result<Orientation> {
    match s.trim().to_ascii_lowercase().as_str() {
        "cost" => Ok(Orientation::Cost),
        "benefit" => Ok(Orientation::Benefit),
        other => Err(wildfire_uav::Error::Validation(format!("unknown orientation {other:?}")).into()),
    }
}

fn rank_regions(
    out: &mut Output<'_>,
    table: Option<&Path>,
    weights: Option<&[f64]>,
    orientation: Option<&[String]>,
    rho: f64,
    k: usize,
) -> Result<()> {
    let orient = match orientation {
        Some(o) => o.iter().map(|s| parse_orientation(s)).collect::<Result<Vec<_>>>()?,
        None => ranking::default_orientation(),
    };
    let table: IndicatorTable = match table {
        Some(path) => {
            let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
            IndicatorTable::from_csv(f, orient)?
        }
        None => IndicatorTable { orientation: orient, ..ranking::victoria_table() },
    };
    let w = WeightVector::new(weights.map(<[f64]>::to_vec).unwrap_or_else(|| ranking::VICTORIA_WEIGHTS.to_vec()))?;
    let gra = ranking::gra_scores(&table, &w, rho)?;
    let targets = ranking::select_targets(&gra.scores, k)?;

    let mut header = vec!["rank", "zone", "score", "selected"];
    let coeff_names: Vec<String> = table.indicators.iter().map(|i| format!("xi_{i}")).collect();
    header.extend(coeff_names.iter().map(String::as_str));
    let mut t = Table::new(&header);
    for (i, s) in gra.scores.iter().enumerate() {
        let mut row = vec![(i + 1).to_string(), s.zone.clone(), sig6(s.score), targets.contains(&s.zone).to_string()];
        row.extend(s.coefficients.iter().map(|&c| sig6(c)));
        t.push(row);
    }
    out.table("regions", &t)?;
    #[derive(Serialize)]
    struct Ranked<'a> {
        weights: &'a [f64],
        rho: f64,
        targets: &'a [String],
        #[serde(flatten)]
        gra: &'a ranking::GraResult,
    }
    out.json("regions", &Ranked { weights: w.as_slice(), rho, targets: &targets, gra: &gra })
}

fn fit_markov(out: &mut Output<'_>, sequence: Option<&[i64]>, radii: Option<&[f64]>) -> Result<()> {
    let seq = match (sequence, radii) {
        (Some(s), _) => RatingSequence::from_values(s)?,
        (None, Some(r)) => RatingSequence::from_radii(r)?,
        (None, None) => RatingSequence::from_values(&markov::VICTORIA_RATINGS)?,
    };
    let p = markov::fit_transition_matrix(&seq);
    for r in p.unobserved_rows() {
        log::warn!("rating {r} never left; its row is uniform");
    }
    let stationary = markov::stationary_distribution(&p);
    let mut t = Table::new(&["quantity", "from", "to", "value"]);
    for from in Rating::ALL {
        for to in Rating::ALL {
            t.push(vec!["transition".into(), from.to_string(), to.to_string(), fraction(p.entry(from, to))]);
        }
    }
    for from in Rating::ALL {
        for to in Rating::ALL {
            let c = p.counts()[from.index()][to.index()];
            t.push(vec!["count".into(), from.to_string(), to.to_string(), c.to_string()]);
        }
    }
    match &stationary {
        Ok(s) => {
            for r in Rating::ALL {
                t.push(vec!["stationary".into(), String::new(), r.to_string(), fraction(&s.exact[r.index()])]);
            }
            for r in Rating::ALL {
                t.push(vec!["stationary_float".into(), String::new(), r.to_string(), sig6(s.probs[r.index()])]);
            }
        }
        Err(e) => log::warn!("{e}"),
    }
    out.table("markov", &t)?;

    #[derive(Serialize)]
    struct Fit {
        ratings: Vec<u8>,
        transition: Vec<Vec<String>>,
        transition_float: [[f64; 3]; 3],
        counts: [[u64; 3]; 3],
        unobserved: Vec<u8>,
        regular: bool,
        stationary: Option<Vec<String>>,
        stationary_float: Option<[f64; 3]>,
    }
    let fit = Fit {
        ratings: seq.as_slice().iter().map(|&r| u8::from(r)).collect(),
        transition: p.rows().iter().map(|row| row.iter().map(fraction).collect()).collect(),
        transition_float: p.to_f64(),
        counts: *p.counts(),
        unobserved: p.unobserved_rows().iter().map(|&r| u8::from(r)).collect(),
        regular: p.is_regular(),
        stationary: stationary.as_ref().ok().map(|s| s.exact.iter().map(fraction).collect()),
        stationary_float: stationary.as_ref().ok().map(|s| s.probs),
    };
    out.json("markov", &fit)
}

fn strict_plan(cli: &Cli, plan: &FleetPlan, oracle: &OracleReport) -> Result<()> {
    let mut problems = Vec::new();
    if !plan.feasible {
        problems.push(format!(
            "farthest hover point is {:.3} km away, beyond the flight range",
            plan.relay.distance_km
        ));
    }
    if !oracle.ssa.covered {
        problems.push(format!("surveillance layout leaves {} of the disk uncovered", oracle.ssa.uncovered_fraction));
    }
    if !oracle.relay.covered {
        problems.push(format!("relay ring leaves {} of the perimeter uncovered", oracle.relay.uncovered_fraction));
    }
    if problems.is_empty() {
        return Ok(());
    }
    let msg = format!("D = {} km: {}", plan.radius_km, problems.join("; "));
    if cli.strict {
        Err(StrictFailure(msg).into())
    } else {
        log::warn!("{msg}");
        Ok(())
    }
}

fn emit_plan(out: &mut Output<'_>, planner: &Planner, plan: &FleetPlan, oracle: &OracleReport) -> Result<()> {
    let mut t = Table::new(&[
        "radius_km",
        "camera_km",
        "range_km",
        "rating",
        "n_cover",
        "m_cover",
        "n_total",
        "m_total",
        "ring_km",
        "distance_km",
        "time_h",
        "feasible",
        "u",
        "G0",
        "G1",
        "ssa_uncovered_fraction",
        "relay_uncovered_fraction",
    ]);
    t.push(vec![
        sig6(plan.radius_km),
        sig6(plan.camera_km),
        sig6(plan.range_km),
        plan.rating.to_string(),
        plan.n_cover.to_string(),
        plan.m_cover.to_string(),
        plan.n_total.to_string(),
        plan.m_total.to_string(),
        sig6(plan.relay.ring_radius_km),
        sig6(plan.relay.distance_km),
        sig6(plan.relay.time_h),
        plan.feasible.to_string(),
        plan.cost.u.to_string(),
        plan.cost.g0.to_string(),
        plan.cost.g1.to_string(),
        sig6(oracle.ssa.uncovered_fraction),
        sig6(oracle.relay.uncovered_fraction),
    ]);
    let mut ssa = Table::new(&["x_km", "y_km"]);
    for p in &plan.layout.positions {
        ssa.push(vec![sig6(p[0]), sig6(p[1])]);
    }
    let mut rr = Table::new(&["angle_rad", "x_km", "y_km"]);
    for (a, p) in plan.relay.angles.iter().zip(plan.relay.hover_points()) {
        rr.push(vec![sig6(*a), sig6(p[0]), sig6(p[1])]);
    }
    out.table("plan", &t)?;
    out.table("plan_ssa_positions", &ssa)?;
    out.table("plan_relay_positions", &rr)?;
    #[derive(Serialize)]
    struct Planned<'a> {
        plan: &'a FleetPlan,
        oracle: &'a OracleReport,
        range: Option<&'a wildfire_uav::terrain::RangeResult>,
    }
    out.json("plan", &Planned { plan, oracle, range: planner.range_diagnostics() })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    if dir.exists() && !dir.is_dir() {
        bail!("{} is not a directory", dir.display());
    }
    Ok(())
}
