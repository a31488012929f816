use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use gaplab::heuristics::{
    g_gauss_log_cprime, twin_constant_with, GapModel, HeuristicConstants, RModel,
};
use gaplab::scanner::{AndricaPoint, AndricaReport, GapRecordTable};
use gaplab::{
    datasets, g_cramer, g_gauss, g_wolf, granville_bound, merge_records, pf_shanks, pf_wolf,
    r_cramer_form, r_kernel, r_main, r_shanks, GapModelKind, GapScanner, HeuristicError,
    PrimeEngine, ReferenceTable,
};

use crate::format::sig12;
use crate::{CliError, GSource, RefSource, RunConfig, Subcommand};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// π(x) is computed on demand by `predict` only up to this bound.
const PREDICT_SIEVE_CAP: f64 = 1e11;

fn scanner(cfg: &RunConfig) -> Result<GapScanner, CliError> {
    let engine = PrimeEngine::new()
        .with_segment_len(cfg.segment_length)?
        .with_threads(cfg.threads)?;
    Ok(GapScanner::new(engine))
}

/// `# gaplab <command> version=... key=value ...`; thread count and segment
/// length are left out so output does not depend on them.
fn header(out: &mut String, cfg: &RunConfig, extra: &[(&str, String)]) {
    let _ = write!(out, "# gaplab {} version={}", cfg.subcommand.name(), VERSION);
    for (k, v) in extra {
        let _ = write!(out, " {k}={v}");
    }
    out.push('\n');
}

fn load_reference(src: &RefSource) -> Result<ReferenceTable, CliError> {
    match src {
        RefSource::Bundled => Ok(ReferenceTable::bundled()),
        RefSource::File(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            datasets::parse_reference_table(&text)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
        }
    }
}

fn record_table(cfg: &RunConfig) -> Result<GapRecordTable<f64>, CliError> {
    let computed = scanner(cfg)?.max_gap_records::<f64>(cfg.limit());
    match &cfg.reference {
        None => Ok(computed),
        Some(src) => Ok(merge_records(&computed, &load_reference(src)?)?),
    }
}

fn ref_label(cfg: &RunConfig) -> String {
    cfg.reference.as_ref().map_or_else(|| "none".into(), |r| r.label())
}

/// Renders the command's output without touching the filesystem (except to
/// read a reference table).
pub fn render(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    match cfg.subcommand {
        Subcommand::Table1 => table1(cfg),
        Subcommand::Table2 => table2(cfg),
        Subcommand::Records => records(cfg),
        Subcommand::FirstGaps => first_gaps(cfg),
        Subcommand::Verify => verify(cfg),
        Subcommand::Constants => constants(cfg),
        Subcommand::Predict => predict(cfg),
        Subcommand::Figure1 => figure1(cfg),
        Subcommand::Figure2 => figure2(cfg),
    }
}

/// Renders and writes to `--out` (or stdout), plus the gnuplot script when
/// one was requested.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let text = render(cfg)?;
    match &cfg.output {
        Some(path) => write_file(path, &text)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    if let Some(script) = &cfg.gnuplot {
        write_file(script, &gnuplot_script(cfg))?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn table1(cfg: &RunConfig) -> Result<String, CliError> {
    let mut out = String::new();
    header(&mut out, cfg, &[("limit", cfg.limit().to_string())]);
    out.push_str("p_n,p_n1,d_n,A_n\n");
    scanner(cfg)?.for_each_gap(cfg.limit(), |_, g| {
        let a: f64 = g.andrica();
        let _ = writeln!(out, "{},{},{},{:.9}", g.p, g.q, g.d, a);
    });
    Ok(out)
}

pub fn table2(cfg: &RunConfig) -> Result<String, CliError> {
    let mut out = String::new();
    header(
        &mut out,
        cfg,
        &[("limit", cfg.limit().to_string()), ("top", cfg.top_k.to_string())],
    );
    out.push_str("n,p_n,p_n1,d_n,A_n\n");
    let top: Vec<AndricaPoint<f64>> = scanner(cfg)?.top_andrica(cfg.limit(), cfg.top_k);
    for pt in top {
        let n = pt.n.expect("scanned points carry their index");
        let _ = writeln!(out, "{},{},{},{},{:.7}", n, pt.gap.p, pt.gap.q, pt.gap.d, pt.a);
    }
    Ok(out)
}

pub fn records(cfg: &RunConfig) -> Result<String, CliError> {
    let table = record_table(cfg)?;
    let mut out = String::new();
    header(
        &mut out,
        cfg,
        &[("limit", cfg.limit().to_string()), ("ref", ref_label(cfg))],
    );
    out.push_str("g,p_L,p_L1,R,source\n");
    for r in &table.records {
        let source = if r.n.is_some() { "computed" } else { "reference" };
        let _ = writeln!(out, "{},{},{},{},{}", r.gap, r.p, r.q, sig12(r.r), source);
    }
    Ok(out)
}

pub fn first_gaps(cfg: &RunConfig) -> Result<String, CliError> {
    let firsts = scanner(cfg)?.first_occurrences(cfg.limit());
    let mut out = String::new();
    header(&mut out, cfg, &[("limit", cfg.limit().to_string())]);
    out.push_str("d,p_f,A,pf_wolf,pf_shanks\n");
    for f in firsts.values() {
        let d = f.d as f64;
        let a: f64 = f.gap().andrica();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            f.d,
            f.p,
            sig12(a),
            sig12(pf_wolf(d).unwrap_or(f64::NAN)),
            sig12(pf_shanks(d).unwrap_or(f64::NAN))
        );
    }
    Ok(out)
}

pub fn verify(cfg: &RunConfig) -> Result<String, CliError> {
    let r: AndricaReport<f64> = scanner(cfg)?.verify_andrica(cfg.limit());
    let at = r
        .argmax
        .map_or_else(|| "none".to_string(), |g| format!("({},{})", g.p, g.q));
    let max = if r.argmax.is_some() {
        format!("{:.9}", r.max_a)
    } else {
        "nan".into()
    };
    Ok(format!(
        "all_below_one={} max_A={} at={} count={}\n",
        r.all_below_one, max, at, r.count
    ))
}

pub fn constants(cfg: &RunConfig) -> Result<String, CliError> {
    let prime_limit = cfg.prime_limit.unwrap_or(1_000_000);
    let engine = scanner(cfg)?.engine().clone();
    let est = twin_constant_with::<f64>(&engine, prime_limit);
    let c = HeuristicConstants::from_estimate(&est);
    Ok(format!(
        "prime_limit={}\nC2={}\nc_prime={}\neuler_gamma={}\ngranville_coeff={}\ntail_bound={}\n",
        prime_limit,
        sig12(c.c2),
        sig12(c.c_prime),
        sig12(c.euler_gamma),
        sig12(c.granville_coeff),
        sig12(est.tail_bound)
    ))
}

/// Predictor names accepted by `predict`.
pub const PREDICT_MODELS: &[&str] = &[
    "g_wolf",
    "g_gauss",
    "g_gauss_logc",
    "g_cramer",
    "granville",
    "pf_wolf",
    "pf_shanks",
    "r_kernel",
    "r_shanks",
    "r_cramer",
    "r_shanks_gauss",
    "r_main_wolf",
    "r_main_gauss",
    "r_main_cramer",
    "r_main_granville",
];

fn exact_pi(x: f64) -> Result<f64, CliError> {
    if !(0.0..=PREDICT_SIEVE_CAP).contains(&x) {
        return Err(CliError::Usage(format!(
            "x = {x}: pass π(x) explicitly (computed automatically only for 0 <= x <= {PREDICT_SIEVE_CAP:e})"
        )));
    }
    Ok(gaplab::prime_count(x.ceil() as u64) as f64)
}

pub fn predict(cfg: &RunConfig) -> Result<String, CliError> {
    let model = cfg
        .model
        .as_deref()
        .ok_or_else(|| CliError::Usage("predict needs a model name".into()))?;
    let x = cfg
        .x
        .ok_or_else(|| CliError::Usage("predict needs an argument".into()))?;
    let pi = || cfg.pi_x.map_or_else(|| exact_pi(x), Ok);
    let main = |kind: GapModelKind, pi_x: Option<f64>| r_main(x, &GapModel::new(kind), pi_x);
    let value: Result<f64, HeuristicError> = match model {
        "g_wolf" => g_wolf(x, pi()?),
        "g_gauss" => g_gauss(x),
        "g_gauss_logc" => g_gauss_log_cprime(x),
        "g_cramer" => g_cramer(x),
        "granville" => granville_bound(x),
        "pf_wolf" => pf_wolf(x),
        "pf_shanks" => pf_shanks(x),
        "r_kernel" => r_kernel(x),
        "r_shanks" => r_shanks(x),
        "r_cramer" => r_cramer_form(x),
        "r_shanks_gauss" => RModel::ShanksForm(HeuristicConstants::standard()).eval(x, None),
        "r_main_wolf" => main(GapModelKind::WolfExactPi, Some(pi()?)),
        "r_main_gauss" => main(GapModelKind::WolfGauss, None),
        "r_main_cramer" => main(GapModelKind::Cramer, None),
        "r_main_granville" => main(GapModelKind::Granville, None),
        other => {
            return Err(CliError::Usage(format!(
                "unknown model `{other}`; expected one of {}",
                PREDICT_MODELS.join(", ")
            )))
        }
    };
    Ok(format!("{}\n", sig12(value?)))
}

/// Gap model selection for `figure1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FigureModel {
    /// Exact π where the sieve reached, the Gauss form beyond.
    Auto,
    Fixed(GapModelKind),
}

fn figure_model(cfg: &RunConfig) -> Result<FigureModel, CliError> {
    Ok(match cfg.model.as_deref().unwrap_or("auto") {
        "auto" => FigureModel::Auto,
        "wolf" => FigureModel::Fixed(GapModelKind::WolfExactPi),
        "gauss" => FigureModel::Fixed(GapModelKind::WolfGauss),
        "cramer" => FigureModel::Fixed(GapModelKind::Cramer),
        "granville" => FigureModel::Fixed(GapModelKind::Granville),
        other => {
            return Err(CliError::Usage(format!(
                "unknown gap model `{other}`; expected auto, wolf, gauss, cramer or granville"
            )))
        }
    })
}

pub fn figure1(cfg: &RunConfig) -> Result<String, CliError> {
    let model = figure_model(cfg)?;
    let table = record_table(cfg)?;
    let mut out = String::new();
    let g_source = match cfg.g_source {
        GSource::Model => "model",
        GSource::Empirical => "empirical",
    };
    header(
        &mut out,
        cfg,
        &[
            ("limit", cfg.limit().to_string()),
            ("ref", ref_label(cfg)),
            ("model", cfg.model.clone().unwrap_or_else(|| "auto".into())),
            ("g_source", g_source.into()),
        ],
    );
    let description = match (cfg.g_source, model) {
        (GSource::Empirical, _) => "R_predicted = r_kernel(observed record gap)".to_string(),
        (GSource::Model, FigureModel::Auto) => format!(
            "R_predicted = r_kernel(G(x)), G = wolf_exact_pi for x < {}, wolf_gauss beyond",
            cfg.limit()
        ),
        (GSource::Model, FigureModel::Fixed(kind)) => {
            format!("R_predicted = r_kernel(G(x)), G = {kind:?}")
        }
    };
    let _ = writeln!(out, "# {description}; nan marks x outside the model's domain");
    out.push_str("x,R_empirical,R_predicted\n");
    for r in &table.records {
        let x = r.p as f64;
        // π(p_L) = n − 1 when the scan knows the index of p_L.
        let pi_x = r.n.map(|n| (n - 1) as f64);
        let predicted = match (cfg.g_source, model) {
            (GSource::Empirical, _) => r_kernel(r.gap as f64),
            (GSource::Model, FigureModel::Auto) => match pi_x {
                Some(pi) => r_main(x, &GapModel::new(GapModelKind::WolfExactPi), Some(pi)),
                None => r_main(x, &GapModel::new(GapModelKind::WolfGauss), None),
            },
            (GSource::Model, FigureModel::Fixed(kind)) => r_main(x, &GapModel::new(kind), pi_x),
        };
        let _ = writeln!(
            out,
            "{},{},{}",
            r.p,
            sig12(r.r),
            sig12(predicted.unwrap_or(f64::NAN))
        );
    }
    Ok(out)
}

/// `(R_cramer, R_shanks)` at `x`; NaN where a form is undefined.
pub fn figure2_row(x: f64) -> (f64, f64) {
    let cramer = r_cramer_form(x).unwrap_or(f64::NAN);
    let shanks = RModel::ShanksForm(HeuristicConstants::standard())
        .eval(x, None)
        .unwrap_or(f64::NAN);
    (cramer, shanks)
}

pub fn figure2(cfg: &RunConfig) -> Result<String, CliError> {
    let table = record_table(cfg)?;
    let mut out = String::new();
    header(
        &mut out,
        cfg,
        &[("limit", cfg.limit().to_string()), ("ref", ref_label(cfg))],
    );
    out.push_str("# R_cramer = ln^1.5(x)/(2 sqrt x); R_shanks = r_shanks(g_gauss(x)); nan marks x outside the domain\n");
    out.push_str("x,R_empirical,R_cramer,R_shanks\n");
    for r in &table.records {
        let (cramer, shanks) = figure2_row(r.p as f64);
        let _ = writeln!(out, "{},{},{},{}", r.p, sig12(r.r), sig12(cramer), sig12(shanks));
    }
    Ok(out)
}

/// A gnuplot script that renders the figure from the emitted CSV.
pub fn gnuplot_script(cfg: &RunConfig) -> String {
    let data = cfg.output.as_ref().map_or_else(
        || format!("{}.csv", cfg.subcommand.name()),
        |p| p.display().to_string(),
    );
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script for `gaplab {}`", cfg.subcommand.name());
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile commentschars '#'\n");
    s.push_str("set datafile missing 'nan'\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set logscale xy\n");
    s.push_str("set format x '10^{%L}'\n");
    s.push_str("set xlabel 'x'\n");
    s.push_str("set ylabel 'R(x)'\n");
    s.push_str("set grid\n");
    let data = data.replace('\'', "''");
    match cfg.subcommand {
        Subcommand::Figure2 => {
            let _ = writeln!(
                s,
                "plot '{data}' using 1:2 with points pt 6 lc rgb 'black', \\\n     '' using 1:3 with lines lw 2 lc rgb 'red', \\\n     '' using 1:4 with lines lw 2 lc rgb 'dark-green'"
            );
        }
        _ => {
            let _ = writeln!(
                s,
                "plot '{data}' using 1:2 with points pt 6 lc rgb 'black', \\\n     '' using 1:3 with lines lw 2 lc rgb 'blue'"
            );
        }
    }
    s.push_str("pause mouse close\n");
    s
}
