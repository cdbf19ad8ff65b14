//! Batch driver: scenario configs in, JSON reports and CSV plot data out.

pub mod config;
pub mod report;
pub mod run;

use std::path::{Path, PathBuf};

pub use config::{ConfigError, Overrides, PlotKind, ScenarioConfig};
pub use report::{plot_csv, PlotError, Report};
pub use run::run;

/// Exit status: all suites passed.
pub const EXIT_PASS: u8 = 0;
/// Exit status: a suite failed or the scenario stopped early.
pub const EXIT_FAIL: u8 = 1;
/// Exit status: unusable config, report or arguments.
pub const EXIT_CONFIG: u8 = 2;

/// `run <config>`: writes the report (and requested plots) and returns the
/// exit status.
pub fn run_command(config: &Path, ov: &Overrides) -> u8 {
    let cfg = match ScenarioConfig::load(config, ov) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let rep = run(&cfg);
    let json = rep.to_json();
    if let Err(e) = write(&cfg.out_dir, &cfg.report, &json) {
        eprintln!("{e}");
        return EXIT_CONFIG;
    }
    let value: serde_json::Value = serde_json::from_str(&json).expect("own report parses");
    for &kind in &cfg.plots {
        match plot_csv(&value, kind) {
            Ok(csv) => {
                if let Err(e) = write(&cfg.out_dir, &format!("{}.csv", kind.name()), &csv) {
                    eprintln!("{e}");
                    return EXIT_CONFIG;
                }
            }
            Err(e) => {
                eprintln!("plot {}: {e}", kind.name());
                return EXIT_CONFIG;
            }
        }
    }
    for s in &rep.suites {
        println!("{:<24} {:<16} {:>6} cases  worst {:.3e}  {}", s.suite, s.space, s.cases, s.worst, if s.passed { "ok" } else { "FAILED" });
    }
    if let Some(f) = &rep.failure {
        println!("stopped: {f}");
    }
    println!("report: {}", cfg.out_dir.join(&cfg.report).display());
    if rep.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// `plot <report> <what>`: writes `<what>.csv` next to the report, or into
/// `out_dir` when given.
pub fn plot_command(report: &Path, what: &str, out_dir: Option<PathBuf>) -> u8 {
    let Some(kind) = PlotKind::parse(what) else {
        eprintln!("unknown plot `{what}`; expected tape, scissors or error_curve");
        return EXIT_CONFIG;
    };
    let text = match std::fs::read_to_string(report) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", report.display());
            return EXIT_CONFIG;
        }
    };
    let value: serde_json::Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{}: {e}", report.display());
            return EXIT_CONFIG;
        }
    };
    let csv = match plot_csv(&value, kind) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", report.display());
            return EXIT_CONFIG;
        }
    };
    let dir = out_dir.unwrap_or_else(|| report.parent().map(Path::to_path_buf).unwrap_or_default());
    match write(&dir, &format!("{}.csv", kind.name()), &csv) {
        Ok(p) => {
            println!("{}", p.display());
            EXIT_PASS
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
    }
}

fn write(dir: &Path, name: &str, body: &str) -> Result<PathBuf, String> {
    let dir = if dir.as_os_str().is_empty() { Path::new(".") } else { dir };
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(path)
}
