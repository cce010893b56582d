use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use frechet_sweep::backend::{make_backend, BackendKind};
use frechet_sweep::bench::{run_bench, BenchConfig};
use frechet_sweep::freespace::{alt_godau_decide_with, build_skeleton};
use frechet_sweep::fsg::build_fsg;
use frechet_sweep::grid::grid_from_skeleton;
use frechet_sweep::sweep::{default_range, enumerate_sweep_events, sweep_decide, SweepOptions};
use frechet_sweep::translation::{decide_translation_2d, DecideMode};
use frechet_sweep::{frechet_value, parse_curve, Curve, Direction2, Error, Point2, Result, Tolerance, Translation2};

#[derive(Parser)]
#[command(
    name = "frechet-sweep",
    version,
    about = "Fréchet distance decisions under translation"
)]
struct Cli {
    /// Cross-check every printed decision against the free-space oracle.
    #[arg(long, global = true)]
    selfcheck: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pair {
    #[arg(long, value_name = "FILE")]
    pi: PathBuf,
    #[arg(long, value_name = "FILE")]
    sigma: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Is d_F(π, σ) ≤ δ?
    Decide {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
    },
    /// Approximate d_F(π, σ) by bisection.
    Frechet {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Translations λ·v (λ in the range) with d_F(π, σ + λv) ≤ δ.
    Sweep {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, num_args = 2, value_names = ["DX", "DY"], allow_negative_numbers = true)]
        dir: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        /// Defaults to a range that contains every feasible λ.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        range: Option<Vec<f64>>,
        #[arg(long, default_value = "baseline")]
        backend: BackendKind,
        /// Write the event list as JSON lines.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
    /// Is there a translation t with d_F(π, σ + t) ≤ δ?
    Xlate2d {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, default_value = "oracle")]
        mode: DecideMode,
        #[arg(long, default_value = "baseline")]
        backend: BackendKind,
        #[arg(long)]
        json: bool,
    },
    /// Event-driven writes against full recomputation on random sweeps.
    Bench {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value = "baseline")]
        backend: BackendKind,
        #[arg(long)]
        json: bool,
        /// Include wall times (the report is then no longer reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Dump the free space, graph and grid for one configuration.
    Trace {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, num_args = 2, value_names = ["DX", "DY"], allow_negative_numbers = true)]
        dir: Option<Vec<f64>>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        range: Option<Vec<f64>>,
    },
}

fn read_curve(path: &Path) -> Result<Curve> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_curve(&text)
        .map(|p| p.curve)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn load(pair: &Pair) -> Result<(Curve, Curve)> {
    Ok((read_curve(&pair.pi)?, read_curve(&pair.sigma)?))
}

fn check_delta(delta: f64) -> Result<f64> {
    if delta.is_finite() && delta >= 0.0 {
        Ok(delta)
    } else {
        Err(Error::InvalidArgument(format!(
            "--delta must be a finite non-negative number, got {delta}"
        )))
    }
}

fn direction(v: &[f64]) -> Result<Direction2> {
    Direction2::new(v[0], v[1])
}

fn range_or_default(range: &Option<Vec<f64>>, pi: &Curve, sigma: &Curve, delta: f64) -> Result<(f64, f64)> {
    match range {
        Some(r) if r[0] <= r[1] => Ok((r[0], r[1])),
        Some(r) => Err(Error::InvalidArgument(format!("empty range [{}, {}]", r[0], r[1]))),
        None => Ok(default_range(pi, sigma, delta)),
    }
}

fn selfcheck_failed(what: String) -> Error {
    Error::InvariantViolation(format!("selfcheck: {what}"))
}

fn grid_decision(pi: &Curve, sigma: &Curve, delta: f64, tol: Tolerance) -> bool {
    let grid = grid_from_skeleton(&build_skeleton(pi, sigma, delta, tol));
    let mut b = make_backend(BackendKind::Baseline);
    b.init(grid.lattice());
    b.query()
}

fn shifted(sigma: &Curve, t: Point2) -> Curve {
    sigma.translate(Translation2::from_vector(t))
}

fn run(cli: Cli) -> Result<()> {
    let tol = Tolerance::from_env()?;
    match cli.command {
        Command::Decide { pair, delta } => {
            let delta = check_delta(delta)?;
            let (pi, sigma) = load(&pair)?;
            let yes = alt_godau_decide_with(&pi, &sigma, delta, tol);
            if cli.selfcheck && grid_decision(&pi, &sigma, delta, tol) != yes {
                return Err(selfcheck_failed("grid reachability disagrees".into()));
            }
            println!("{}", if yes { "YES" } else { "NO" });
        }
        Command::Frechet { pair, tol: value_tol } => {
            if value_tol.is_nan() || value_tol <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "--tol must be positive, got {value_tol}"
                )));
            }
            let (pi, sigma) = load(&pair)?;
            println!("{}", frechet_value(&pi, &sigma, value_tol));
        }
        Command::Sweep {
            pair,
            dir,
            delta,
            range,
            backend,
            trace,
        } => {
            let delta = check_delta(delta)?;
            let (pi, sigma) = load(&pair)?;
            let v = direction(&dir)?;
            let range = range_or_default(&range, &pi, &sigma, delta)?;
            let out = sweep_decide(
                &pi,
                &sigma,
                v,
                range,
                delta,
                tol,
                SweepOptions { backend, audit: false },
            )?;
            if let Some(path) = trace {
                write_events(&path, &out.plan.events)?;
            }
            if cli.selfcheck {
                for s in &out.samples {
                    let t = v.as_vector() * s.probe;
                    if alt_godau_decide_with(&pi, &shifted(&sigma, t), delta, tol) != s.decision {
                        return Err(selfcheck_failed(format!("sweep decision at λ = {} disagrees", s.probe)));
                    }
                }
            }
            if out.intervals.is_empty() {
                println!("INFEASIBLE");
            } else {
                let mut line = String::from("FEASIBLE");
                for (lo, hi) in &out.intervals {
                    let _ = write!(line, " {lo} {hi}");
                }
                println!("{line}");
            }
        }
        Command::Xlate2d {
            pair,
            delta,
            mode,
            backend,
            json,
        } => {
            let delta = check_delta(delta)?;
            let (pi, sigma) = load(&pair)?;
            let started = Instant::now();
            let d = decide_translation_2d(&pi, &sigma, delta, mode, backend, tol)?;
            let elapsed = started.elapsed();
            if cli.selfcheck {
                if let Some(w) = d.witness {
                    if !alt_godau_decide_with(&pi, &sigma.translate(w), delta, tol) {
                        return Err(selfcheck_failed("witness fails the oracle".into()));
                    }
                }
                let other = match mode {
                    DecideMode::Oracle => DecideMode::Events,
                    DecideMode::Events => DecideMode::Oracle,
                };
                if decide_translation_2d(&pi, &sigma, delta, other, backend, tol)?.feasible != d.feasible {
                    return Err(selfcheck_failed("oracle and events modes disagree".into()));
                }
            }
            if json {
                let report = serde_json::json!({
                    "feasible": d.feasible,
                    "witness": d.witness.map(|w| [w.tx, w.ty]),
                    "mode": mode,
                    "candidates": d.candidates,
                    "evaluated": d.evaluated,
                    "counts": d.counts,
                    "events": d.sweep.as_ref().map(|s| serde_json::json!({
                        "m_ve": s.m_ve, "m_vve": s.m_vve, "ticks": s.ticks, "weight_writes": s.weight_writes,
                    })),
                    "elapsed_ms": elapsed.as_secs_f64() * 1e3,
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                match d.witness {
                    Some(w) => println!("YES {} {}", w.tx, w.ty),
                    None => println!("NO"),
                }
            }
        }
        Command::Bench {
            seed,
            n,
            trials,
            backend,
            json,
            timings,
        } => {
            if n < 2 {
                return Err(Error::InvalidArgument("--n must be at least 2".into()));
            }
            let cfg = BenchConfig {
                seed,
                n,
                trials,
                backend,
                timings,
                tol,
            };
            let report = run_bench(&cfg)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!(
                    "n={} trials={} m_ve={} m_vve={} writes={} recompute={} ratio={:.2} updates={} queries={} violations={}",
                    report.n,
                    report.trials,
                    report.m_ve,
                    report.m_vve,
                    report.weight_writes,
                    report.recompute_writes,
                    report.write_ratio,
                    report.updates,
                    report.queries,
                    report.bound_violations
                );
            }
        }
        Command::Trace {
            pair,
            delta,
            out,
            dir,
            range,
        } => {
            let delta = check_delta(delta)?;
            let (pi, sigma) = load(&pair)?;
            std::fs::create_dir_all(&out)?;
            let sk = build_skeleton(&pi, &sigma, delta, tol);
            let fsg = build_fsg(&sk);
            let grid = grid_from_skeleton(&sk);
            let fsg_json = serde_json::to_string_pretty(&fsg.to_json()).expect("graph serializes");
            std::fs::write(out.join("fsg.json"), fsg_json)?;
            std::fs::write(out.join("grid.pbm"), grid.to_pbm())?;
            std::fs::write(out.join("freespace.svg"), freespace_svg(&pi, &sigma, delta))?;
            let v = match &dir {
                Some(d) => direction(d)?,
                None => Direction2::new(1.0, 0.0)?,
            };
            let range = range_or_default(&range, &pi, &sigma, delta)?;
            let plan = enumerate_sweep_events(&pi, &sigma, v, range, delta, tol);
            write_events(&out.join("events.jsonl"), &plan.events)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn write_events<T: serde::Serialize>(path: &Path, events: &[T]) -> Result<()> {
    let mut text = String::new();
    for e in events {
        text.push_str(&serde_json::to_string(e).expect("event serializes"));
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Raster of the free space, one rectangle per free sample, with the cell grid on top.
fn freespace_svg(pi: &Curve, sigma: &Curve, delta: f64) -> String {
    let (nx, ny) = (pi.edge_count(), sigma.edge_count());
    let per_cell = (160 / nx.max(ny)).clamp(4, 40);
    let scale = 480.0 / (nx.max(ny) * per_cell) as f64;
    let (w, h) = (nx * per_cell, ny * per_cell);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}">"#,
        w as f64 * scale,
        h as f64 * scale
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#444"/>"##);
    for a in 0..w {
        for b in 0..h {
            let x = (a as f64 + 0.5) / per_cell as f64;
            let y = (b as f64 + 0.5) / per_cell as f64;
            if pi.point_at(x).dist(sigma.point_at(y)) <= delta {
                let _ = writeln!(
                    s,
                    r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#eee"/>"##,
                    a as f64 * scale,
                    (h - 1 - b) as f64 * scale,
                    scale,
                    scale
                );
            }
        }
    }
    for i in 0..=nx {
        let x = (i * per_cell) as f64 * scale;
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="0" x2="{x:.2}" y2="{:.2}" stroke="#c33"/>"##,
            h as f64 * scale
        );
    }
    for j in 0..=ny {
        let y = (j * per_cell) as f64 * scale;
        let _ = writeln!(
            s,
            r##"<line x1="0" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#c33"/>"##,
            w as f64 * scale
        );
    }
    s.push_str("</svg>\n");
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
