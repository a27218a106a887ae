use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tatm::scenario::{
    run_phi_sweep, run_scan, scan_report, sweep_csv, sweep_verdicts_csv, Config, Overrides, Scenario,
};
use tatm::table::{table_one_report, TableOptions};
use tatm::Error;

#[derive(Parser)]
#[command(name = "tatm", version, about = "Two atoms, two modes: entanglement dynamics runner")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Evolve every scenario (or one) and write <name>.csv and <name>.verdict.toml.
    Run {
        #[command(flatten)]
        common: Common,
        /// Only run this scenario.
        #[arg(long)]
        scenario: Option<String>,
    },
    /// Run every [sweep.*] table of the config.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        name: Option<String>,
    },
    /// Reproduce the published verdict grid and write table1.txt / table1.csv.
    Table1 {
        #[command(flatten)]
        common: Common,
        /// Exit with status 3 when the grid does not reproduce.
        #[arg(long)]
        strict: bool,
    },
    /// Run every [scan.*] table of the config.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Reserved; nothing is random yet.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

enum Failure {
    Config(String),
    Physics(String),
    Diff(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => Failure::Config(m),
            _ => Failure::Physics(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            phi: self.phi,
            t_max: self.t_max,
            samples: self.samples,
            n_max: self.n_max,
        }
    }

    fn load(&self, required: bool) -> Result<Config, Failure> {
        match &self.config {
            Some(p) => {
                let src = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
                Config::parse(&src).map_err(|e| match e {
                    Error::Config(m) => Failure::Config(format!("{}: {m}", p.display())),
                    e => e.into(),
                })
            }
            None if required => Err(Failure::Config("--config is required for this verb".into())),
            None => Ok(Config::default()),
        }
    }

    fn write(&self, file: &str, body: &str) -> Result<(), Failure> {
        fs::create_dir_all(&self.out_dir).map_err(|e| io_err(&self.out_dir, e))?;
        let path = self.out_dir.join(file);
        fs::write(&path, body).map_err(|e| io_err(&path, e))?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

fn scenario_for(cfg: &Config, name: &str, o: &Overrides) -> Result<Scenario, Failure> {
    cfg.scenario(name)?
        .with_overrides(o)
        .map_err(|e| Failure::Physics(format!("scenario '{name}': {e}")))
}

fn pick<'a, T>(all: impl Iterator<Item = (&'a String, T)>, only: &Option<String>, what: &str) -> Result<Vec<(&'a String, T)>, Failure> {
    let v: Vec<_> = all.filter(|(n, _)| only.as_ref().is_none_or(|o| o == *n)).collect();
    match (v.is_empty(), only) {
        (true, Some(n)) => Err(Failure::Config(format!("no {what} named '{n}'"))),
        (true, None) => Err(Failure::Config(format!("the config defines no {what}"))),
        _ => Ok(v),
    }
}

fn run(verb: Verb) -> Result<(), Failure> {
    let common = match &verb {
        Verb::Run { common, .. } | Verb::Sweep { common, .. } | Verb::Table1 { common, .. } | Verb::Scan { common, .. } => common,
    };
    if let Some(j) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    let o = common.overrides();
    match &verb {
        Verb::Run { scenario, .. } => {
            let cfg = common.load(true)?;
            let mut unlabeled = Vec::new();
            for (name, _) in pick(cfg.scenarios.iter(), scenario, "scenario")? {
                let s = scenario_for(&cfg, name, &o)?;
                let rec = s.run().map_err(|e| Failure::Physics(format!("scenario '{name}': {e}")))?;
                common.write(&format!("{name}.csv"), &rec.to_csv())?;
                common.write(&format!("{name}.verdict.toml"), &rec.verdict_toml())?;
                if let Err(e) = &rec.verdict {
                    unlabeled.push(format!("scenario '{name}': {e}"));
                }
            }
            if !unlabeled.is_empty() {
                return Err(Failure::Physics(unlabeled.join("; ")));
            }
        }
        Verb::Sweep { name, .. } => {
            let cfg = common.load(true)?;
            for (sname, spec) in pick(cfg.sweeps.iter(), name, "sweep")? {
                let base = scenario_for(&cfg, &spec.scenario, &Overrides { phi: None, ..o })?;
                let points = run_phi_sweep(&base, &spec.phis)
                    .map_err(|e| Failure::Physics(format!("sweep '{sname}': {e}")))?;
                common.write(&format!("{sname}.sweep.csv"), &sweep_csv(&base, &points))?;
                common.write(&format!("{sname}.verdicts.csv"), &sweep_verdicts_csv(&base, &points))?;
                if let Some(p) = points.iter().find(|p| p.record.verdict.is_err()) {
                    let e = p.record.verdict.as_ref().unwrap_err();
                    return Err(Failure::Physics(format!("sweep '{sname}', phi = {}: {e}", p.phi)));
                }
            }
        }
        Verb::Scan { name, .. } => {
            let cfg = common.load(true)?;
            for (sname, spec) in pick(cfg.scans.iter(), name, "scan")? {
                let base = scenario_for(&cfg, &spec.scenario, &o)?;
                let outcome = run_scan(&base, spec).map_err(|e| Failure::Physics(format!("scan '{sname}': {e}")))?;
                common.write(&format!("{sname}.scan.csv"), &scan_report(&base, spec, &outcome))?;
            }
        }
        Verb::Table1 { strict, .. } => {
            let cfg = common.load(false)?;
            let mut opts = cfg.table1.unwrap_or_default();
            apply_table_overrides(&mut opts, &o);
            let report = table_one_report(&opts)?;
            let text = report.render_text();
            common.write("table1.txt", &text)?;
            common.write("table1.csv", &report.to_csv())?;
            print!("{text}");
            if *strict && !report.passed() {
                return Err(Failure::Diff(format!("{} cell(s) differ from the published grid", report.mismatches().len())));
            }
        }
    }
    Ok(())
}

fn apply_table_overrides(t: &mut TableOptions, o: &Overrides) {
    if let Some(v) = o.t_max {
        t.t_max = v;
    }
    if let Some(v) = o.samples {
        t.samples = v;
    }
    if let Some(v) = o.n_max {
        t.n_max_cv = v;
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Physics(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Diff(m)) => {
            eprintln!("table1: {m}");
            ExitCode::from(3)
        }
    }
}
