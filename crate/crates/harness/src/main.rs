use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lsmix::error::{HarnessError, Result};
use lsmix::formats::fmt_f64;
use lsmix::mc::mc_risk_prepared;
use lsmix::signal::BvFunction;
use lsmix::{illustrate, Scenario};
use lsmix_core::approx::{
    compressed_approx, compressed_error_bound, linear_approx, linear_error_bound,
};
use lsmix_core::bounds::{
    appendix_a2_bound, c_beta_with, prop2_bound, theorem1_bounds, CBetaOptions,
};
use lsmix_core::tuning::check_orthonormal_conditions;

#[derive(Parser)]
#[command(
    name = "lsmix",
    version,
    about = "Mixtures of least-squares estimators: simulations and bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the Fourier illustration and write CSV and SVG files
    Illustrate {
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "illustration")]
        out_dir: PathBuf,
        /// also estimate risks over this many draws
        #[arg(long, default_value_t = 0)]
        reps: usize,
    },
    /// Monte Carlo risk of the mixture for a scenario file
    McRisk {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// exit with status 3 when beta violates the risk-bound condition
        #[arg(long)]
        strict: bool,
    },
    /// Tabulate gamma_beta(p) and c_beta(p)
    Cbeta {
        #[arg(long)]
        beta: f64,
        /// comma-separated values of p
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "3,10,100,1000,10000,100000,1000000"
        )]
        p_grid: Vec<usize>,
    },
    /// Evaluate the risk bounds for a scenario file
    Bounds {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Haar approximation errors of a bounded-variation function
    Approx {
        #[arg(long)]
        function: BvFunction,
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// comma-separated levels J
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
        levels: Vec<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn kv(key: &str, v: f64) {
    println!("{key},{}", fmt_f64(v));
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Illustrate {
            sigma,
            seed,
            out_dir,
            reps,
        } => {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(HarnessError::Invalid(format!(
                    "sigma must be finite and >= 0, got {sigma}"
                )));
            }
            let ill = illustrate::run_illustration(sigma, seed)?;
            let paths = illustrate::write_outputs(&ill, &out_dir)?;
            kv("gram_deviation", ill.gram_deviation);
            kv("sigma2_hat", ill.sigma2_hat);
            kv("loss", ill.loss());
            kv("projection_loss", ill.projection_loss());
            if reps > 0 {
                let r = illustrate::illustration_risk(sigma, seed, reps)?;
                kv("mixture_risk", r.mixture_risk);
                kv("mixture_se", r.mixture_se);
                kv("projection_risk", r.projection_risk);
                kv("projection_risk_exact", r.projection_risk_exact);
            }
            for p in paths {
                println!("wrote,{}", p.display());
            }
        }
        Command::McRisk {
            scenario,
            reps,
            seed,
            strict,
        } => {
            let mut s = Scenario::from_file(&scenario)?;
            if let Some(r) = reps {
                s.reps = r;
            }
            if let Some(seed) = seed {
                s.master_seed = seed;
            }
            s.validate()?;
            let p = s.prepare()?;
            if strict && !p.conditions_ok {
                return Err(HarnessError::Precondition(format!(
                    "beta = {} violates N_* >= 2 + ln n / phi(4 beta)",
                    p.config.beta
                )));
            }
            let r = mc_risk_prepared(&p, s.sigma, s.reps, s.master_seed, false)?;
            kv("beta", p.config.beta);
            println!("conditions_ok,{}", p.conditions_ok);
            kv("empirical_risk", r.empirical_risk);
            kv("std_error", r.std_error);
            if let Some(b) = r.bound_report {
                kv("fgibbs_rhs", b.fgibbs_rhs);
                kv("foracle_rhs", b.foracle_rhs);
                kv("crude_rhs", b.crude_rhs);
            }
        }
        Command::Cbeta { beta, p_grid } => {
            if beta.is_nan() || beta <= 0.0 {
                return Err(HarnessError::Invalid(format!(
                    "beta must be positive, got {beta}"
                )));
            }
            println!("p,gamma,c_beta,supremum,argmax");
            for p in p_grid {
                let c = c_beta_with(p, beta, &CBetaOptions::default())?;
                println!(
                    "{p},{},{},{},{}",
                    fmt_f64(c.gamma),
                    fmt_f64(c.value),
                    fmt_f64(c.supremum),
                    fmt_f64(c.argmax)
                );
            }
        }
        Command::Bounds { scenario } => {
            let s = Scenario::from_file(&scenario)?;
            let p = s.prepare()?;
            let sigma2 = s.sigma * s.sigma;
            let beta = p.config.beta;
            let b = theorem1_bounds(&p.mu, &p.collection, sigma2, beta, p.config.l_rule)?;
            kv("beta", beta);
            println!("conditions_ok,{}", p.conditions_ok);
            kv("epsilon_n", b.epsilon_n);
            kv("sigma_bar2", b.sigma_bar2);
            kv("fgibbs_rhs", b.fgibbs_rhs);
            kv("foracle_rhs", b.foracle_rhs);
            kv("crude_rhs", b.crude_rhs);
            println!(
                "best_model,{:?}",
                p.collection.models()[p.collection.position(b.best_model).unwrap_or(0)].columns
            );
            let orth = p.collection.design().is_orthonormal() && p.collection.star_dim() >= 3;
            if orth && (0.25..=0.5).contains(&beta) {
                kv(
                    "known_variance_rhs",
                    prop2_bound(&p.mu, &p.collection, sigma2, beta)?.value,
                );
            }
            let bb = match s.collection {
                lsmix::scenario::CollectionSpec::AllSubsets { b, .. } => Some(b),
                _ => None,
            };
            if let Some(bb) = bb {
                let (n, ps) = (p.collection.n(), p.collection.star_dim());
                if orth && check_orthonormal_conditions(beta, bb, ps, n).is_ok() {
                    kv(
                        "orthonormal_unknown_variance_rhs",
                        appendix_a2_bound(&p.mu, &p.collection, sigma2, beta, bb)?.value,
                    );
                }
            }
        }
        Command::Approx {
            function,
            n,
            levels,
        } => {
            let f = function.sample(n)?;
            let v = f.total_variation();
            kv("total_variation", v);
            println!("level,linear_error,linear_bound,compressed_error,compressed_bound,kept");
            for j in levels {
                let lin = linear_approx(&f, j)?;
                let comp = compressed_approx(&f, j)?;
                println!(
                    "{j},{},{},{},{},{}",
                    fmt_f64(f.distance(&lin)),
                    fmt_f64(linear_error_bound(v, j)),
                    fmt_f64(f.distance(&comp.function)),
                    fmt_f64(compressed_error_bound(v, j)),
                    comp.kept
                );
            }
        }
    }
    Ok(())
}
