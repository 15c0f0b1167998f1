//! Command implementations. Each returns whether the reported certificate
//! passed, which decides the exit code.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use markov_dubins::{
    enumerate_candidates, globalize, shortest_by_enumeration, Instance, Slack, SolvedPath,
    SolverConfig,
};

use crate::bundle::{certify, samples, with_suffix, Comparison, PathSummary, ResultBundle, Source};
use crate::instance_file::InstanceFile;
use crate::{generate, render};

pub const OUTPUT_DIR_ENV: &str = "MDUBINS_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "mdubins",
    version,
    about = "Shortest bounded-curvature paths with optimality certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance with the multistart solver and certify the best path.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Solve an instance by enumerating every admissible word.
    Oracle {
        file: PathBuf,
        /// Also run the solver and report the length discrepancy.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Draw a bundle as SVG.
    Render {
        bundle: PathBuf,
        /// Also draw the (λ3, dλ3/dt) phase trajectory.
        #[arg(long)]
        phase: bool,
        /// Also draw the switching function over time.
        #[arg(long)]
        switching: bool,
        /// Output `.svg` file or directory.
        #[arg(long, env = OUTPUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Write seeded random instance files.
    Generate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = OUTPUT_DIR_ENV)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SolveOpts {
    /// Certify every stationary path, not only the best one.
    #[arg(long)]
    pub all_certificates: bool,
    /// Use the abnormal (λ0 = 0) certificate when the path allows it.
    #[arg(long)]
    pub prefer_abnormal: bool,
    /// Number of uniform samples in the output tables.
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(2..))]
    pub samples: u64,
    /// Multistart seed (overrides the instance file).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Absolute length slack of the globalization bound (overrides the instance file).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Output `.bundle` file or directory.
    #[arg(long, env = OUTPUT_DIR_ENV)]
    pub out: Option<PathBuf>,
}

impl SolveOpts {
    fn config(&self, file: &InstanceFile) -> Result<SolverConfig> {
        let mut config = file.solver_config()?;
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(eps) = self.eps {
            if !(eps.is_finite() && eps >= 0.0) {
                bail!("--eps must be a non-negative number, got {eps}");
            }
            config.epsilon_globalize = Slack::Absolute(eps);
        }
        config.validate()?;
        Ok(config)
    }
}

/// Resolves `out` (a file with extension `ext`, a directory, or nothing) to a
/// concrete file `<dir>/<name>.<ext>`.
fn output_file(out: Option<&Path>, default_dir: &Path, name: &str, ext: &str) -> PathBuf {
    match out {
        Some(p) if p.extension().is_some_and(|e| e == ext) => p.to_path_buf(),
        Some(dir) => dir.join(format!("{name}.{ext}")),
        None => default_dir.join(format!("{name}.{ext}")),
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string())
}

fn assemble(
    instance: &Instance,
    source: Source,
    config: Option<SolverConfig>,
    best: &SolvedPath,
    stationary: &[SolvedPath],
    opts: &SolveOpts,
) -> Result<ResultBundle> {
    let n = opts.samples as usize;
    let (entry, cert, note) = certify(instance, best, opts.prefer_abnormal, n);
    if let Some(note) = note {
        eprintln!("note: {note}");
    }
    if let Some(err) = &entry.error {
        eprintln!("warning: no certificate for the best path: {err}");
    }
    let all_certificates = if opts.all_certificates {
        stationary
            .iter()
            .map(|p| certify(instance, p, opts.prefer_abnormal, n).0)
            .collect()
    } else {
        Vec::new()
    };
    Ok(ResultBundle {
        instance: *instance,
        source,
        config,
        best: PathSummary::from(best),
        stationary: stationary.iter().map(PathSummary::from).collect(),
        certificate: entry,
        all_certificates,
        comparison: None,
        samples: samples(instance, best, cert.as_ref(), n)?,
    })
}

fn emit(bundle: &ResultBundle, path: &Path) -> Result<bool> {
    let written = bundle.write(path)?;
    let verdict = bundle
        .certificate
        .certificate
        .as_ref()
        .map_or("fail", |c| c.verdict.as_str());
    println!(
        "{} {:.12} {} {}",
        crate::bundle::word_label(&bundle.best.word),
        bundle.best.length,
        verdict,
        written[0].display()
    );
    Ok(bundle.passed())
}

pub fn solve(file: &Path, opts: &SolveOpts) -> Result<bool> {
    let input = InstanceFile::read(file)?;
    let instance = input
        .instance()
        .with_context(|| format!("invalid instance file {}", file.display()))?;
    let config = opts.config(&input)?;
    let report = globalize(&instance, &config).context("solver failed")?;
    let bundle = assemble(
        &instance,
        Source::Solver,
        Some(config),
        &report.best,
        &report.all_found,
        opts,
    )?;
    let out = output_file(
        opts.out.as_deref(),
        Path::new("."),
        &file_stem(file),
        "bundle",
    );
    emit(&bundle, &out)
}

pub fn oracle(file: &Path, compare: bool, opts: &SolveOpts) -> Result<bool> {
    let input = InstanceFile::read(file)?;
    let instance = input
        .instance()
        .with_context(|| format!("invalid instance file {}", file.display()))?;
    let best = shortest_by_enumeration(&instance).context("oracle failed")?;
    let all = enumerate_candidates(&instance).context("oracle failed")?;
    let mut config = None;
    let mut comparison = None;
    if compare {
        let c = opts.config(&input)?;
        let report = globalize(&instance, &c).context("solver failed")?;
        let cmp = Comparison::new(&report.best, &best);
        eprintln!(
            "compare: solver {} {:.12}, oracle {} {:.12}, discrepancy {:.3e}",
            crate::bundle::word_label(&cmp.solver_word),
            cmp.solver_length,
            crate::bundle::word_label(&cmp.oracle_word),
            cmp.oracle_length,
            cmp.discrepancy
        );
        config = Some(c);
        comparison = Some(cmp);
    }
    let mut bundle = assemble(&instance, Source::Oracle, config, &best, &all, opts)?;
    bundle.comparison = comparison;
    let name = format!("{}.oracle", file_stem(file));
    let out = output_file(opts.out.as_deref(), Path::new("."), &name, "bundle");
    emit(&bundle, &out)
}

pub fn render(bundle_path: &Path, phase: bool, switching: bool, out: Option<&Path>) -> Result<()> {
    let bundle = ResultBundle::read(bundle_path)?;
    let default_dir = bundle_path.parent().unwrap_or(Path::new("."));
    let svg = output_file(out, default_dir, &file_stem(bundle_path), "svg");
    let mut drawings = vec![(svg.clone(), render::path_svg(&bundle)?)];
    let stem = svg.with_extension("");
    if switching {
        drawings.push((
            with_suffix(&stem, ".switching.svg"),
            render::switching_svg(&bundle)?,
        ));
    }
    if phase {
        drawings.push((
            with_suffix(&stem, ".phase.svg"),
            render::phase_svg(&bundle)?,
        ));
    }
    if let Some(dir) = svg.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    for (path, text) in drawings {
        std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(())
}

/// Runs a parsed command; `Ok(false)` means a certificate failed verification.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve { file, opts } => solve(&file, &opts),
        Command::Oracle {
            file,
            compare,
            opts,
        } => oracle(&file, compare, &opts),
        Command::Render {
            bundle,
            phase,
            switching,
            out,
        } => render(&bundle, phase, switching, out.as_deref()).map(|()| true),
        Command::Generate { count, seed, out } => {
            for p in generate::write_instances(count as usize, seed, &out)? {
                println!("{}", p.display());
            }
            Ok(true)
        }
    }
}
