//! `opswtw solve`: run a solver over one instance or a directory of them.
//!
//! Policy solvers emit one tour per (instance, sample) pair in
//! instance-major order against the derived streams `(seed, i, j)` — exactly
//! the streams `opswtw score` replays, so realized rewards match the
//! official score. The other solvers emit one tour per instance.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use opswtw::policy::{run_episode, GreedySelector, RolloutSelector};
use opswtw::rng::sample_stream;
use opswtw::scoring::brute_force_best_tour;
use opswtw::solver::ea::{self, EaConfig, PhaseConfig, PhaseKind};
use opswtw::solver::iterative::{ga_improve, iterative_search, GaConfig, IterConfig};
use opswtw::solver::random_search;
use opswtw::{Error, Instance, Result};
use rayon::prelude::*;

use crate::commands::{load_instances, tour_line};
use crate::config::{write_output, KvConfig, RunHeader};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    /// Multi-fidelity surrogate-assisted evolutionary search.
    Ea,
    /// Arc-penalty surrogate with branch-and-bound and GA refinement.
    Iterative,
    /// Stepwise construction, argmax of the heuristic prior.
    PolicyGreedy,
    /// Stepwise construction with Monte-Carlo rollouts.
    PolicyRollout,
    /// Random search at a matched simulator budget.
    Random,
    /// Brute-force enumeration (small instances only).
    Oracle,
}

#[derive(Parser, Debug)]
pub struct Args {
    /// Instance file or directory.
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub solver: SolverKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Key-value config file overriding solver constants.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Tours output file (submission format).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run-log CSV.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Episodes per instance for the policy solvers.
    #[arg(long)]
    pub samples: Option<usize>,
}

fn parse_phases(raw: &str) -> Result<Vec<PhaseConfig>> {
    raw.split(',')
        .map(|part| {
            let fields: Vec<&str> = part.trim().split(':').collect();
            if fields.len() != 3 {
                return Err(Error::InvalidInput(format!(
                    "phase `{part}` must be fidelity:budget:kind"
                )));
            }
            let fidelity = fields[0]
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad fidelity in `{part}`")))?;
            let budget = fields[1]
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad budget in `{part}`")))?;
            let kind = match fields[2] {
                "plain" => PhaseKind::Plain,
                "veto" => PhaseKind::ClassifierVeto,
                "filter" => PhaseKind::SurrogateFilter,
                "sort" => PhaseKind::ClassifierSurrogateSort,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown phase kind `{other}` (plain|veto|filter|sort)"
                    )))
                }
            };
            Ok(PhaseConfig {
                fidelity,
                budget,
                kind,
            })
        })
        .collect()
}

fn phases_string(phases: &[PhaseConfig]) -> String {
    phases
        .iter()
        .map(|p| {
            let kind = match p.kind {
                PhaseKind::Plain => "plain",
                PhaseKind::ClassifierVeto => "veto",
                PhaseKind::SurrogateFilter => "filter",
                PhaseKind::ClassifierSurrogateSort => "sort",
            };
            format!("{}:{}:{}", p.fidelity, p.budget, kind)
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn ea_config(cfg: &KvConfig, header: &mut RunHeader) -> Result<EaConfig> {
    let profile: String = cfg.resolve(None, "profile", "desk".to_string())?;
    let mut ea = match profile.as_str() {
        "desk" => EaConfig::desk(),
        "full" => EaConfig::default(),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown profile `{other}` (desk|full)"
            )))
        }
    };
    ea.mu = cfg.resolve(None, "mu", ea.mu)?;
    ea.lambda = cfg.resolve(None, "lambda", ea.lambda)?;
    ea.op_mutation_prob = cfg.resolve(None, "op_mutation_prob", ea.op_mutation_prob)?;
    ea.reduce_reps = cfg.resolve(None, "reduce_reps", ea.reduce_reps)?;
    ea.reduce_threshold = cfg.resolve(None, "reduce_threshold", ea.reduce_threshold)?;
    ea.final_pool = cfg.resolve(None, "final_pool", ea.final_pool)?;
    ea.final_fidelity = cfg.resolve(None, "final_fidelity", ea.final_fidelity)?;
    ea.veto_threshold = cfg.resolve(None, "veto_threshold", ea.veto_threshold)?;
    ea.prefilter_keep = cfg.resolve(None, "prefilter_keep", ea.prefilter_keep)?;
    ea.retrain_every = cfg.resolve(None, "retrain_every", ea.retrain_every)?;
    ea.cluster_cap = cfg.resolve(None, "cluster_cap", ea.cluster_cap)?;
    if let Some(raw) = cfg.get::<String>("phases")? {
        ea.phases = parse_phases(&raw)?;
    }
    header.push("profile", profile);
    header.push("mu", ea.mu);
    header.push("lambda", ea.lambda);
    header.push("op_mutation_prob", ea.op_mutation_prob);
    header.push("reduce_reps", ea.reduce_reps);
    header.push("reduce_threshold", ea.reduce_threshold);
    header.push("final_pool", ea.final_pool);
    header.push("final_fidelity", ea.final_fidelity);
    header.push("veto_threshold", ea.veto_threshold);
    header.push("prefilter_keep", ea.prefilter_keep);
    header.push("retrain_every", ea.retrain_every);
    header.push("cluster_cap", ea.cluster_cap);
    header.push("phases", phases_string(&ea.phases));
    Ok(ea)
}

fn iter_config(cfg: &KvConfig, header: &mut RunHeader) -> Result<(IterConfig, GaConfig)> {
    let base = IterConfig::default();
    let iter = IterConfig {
        max_iterations: cfg.resolve(None, "max_iterations", base.max_iterations)?,
        sims_per_iteration: cfg.resolve(None, "sims_per_iteration", base.sims_per_iteration)?,
        feasibility_threshold: cfg.resolve(
            None,
            "feasibility_threshold",
            base.feasibility_threshold,
        )?,
        gap_threshold: cfg.resolve(None, "gap_threshold", base.gap_threshold)?,
    };
    let gbase = GaConfig::default();
    let ga = GaConfig {
        population: cfg.resolve(None, "ga_population", gbase.population)?,
        generations: cfg.resolve(None, "ga_generations", gbase.generations)?,
        evals: cfg.resolve(None, "ga_evals", gbase.evals)?,
        parents: cfg.resolve(None, "ga_parents", gbase.parents)?,
        elites: cfg.resolve(None, "ga_elites", gbase.elites)?,
        tournament: cfg.resolve(None, "ga_tournament", gbase.tournament)?,
    };
    header.push("max_iterations", iter.max_iterations);
    header.push("sims_per_iteration", iter.sims_per_iteration);
    header.push("feasibility_threshold", iter.feasibility_threshold);
    header.push("gap_threshold", iter.gap_threshold);
    header.push("ga_population", ga.population);
    header.push("ga_generations", ga.generations);
    header.push("ga_evals", ga.evals);
    header.push("ga_parents", ga.parents);
    header.push("ga_elites", ga.elites);
    header.push("ga_tournament", ga.tournament);
    Ok((iter, ga))
}

pub fn run(args: Args, jobs: usize) -> Result<()> {
    let cfg = match &args.config {
        Some(path) => KvConfig::load(path)?,
        None => KvConfig::default(),
    };
    let named = load_instances(&args.instance)?;

    let mut header = RunHeader::new("solve");
    header.push("jobs", jobs);
    header.push("instance", args.instance.display());
    header.push(
        "solver",
        match args.solver {
            SolverKind::Ea => "ea",
            SolverKind::Iterative => "iterative",
            SolverKind::PolicyGreedy => "policy-greedy",
            SolverKind::PolicyRollout => "policy-rollout",
            SolverKind::Random => "random",
            SolverKind::Oracle => "oracle",
        },
    );
    header.push("seed", args.seed);

    let mut tours: Vec<Vec<usize>> = Vec::new();
    let mut log_body = String::new();

    match args.solver {
        SolverKind::Ea => {
            let ea_cfg = ea_config(&cfg, &mut header)?;
            log_body.push_str("instance_id,phase,generation,best_mean,evals_used\n");
            let results: Vec<_> = named
                .par_iter()
                .map(|(_, inst)| ea::solve(inst, &ea_cfg, args.seed))
                .collect::<Result<_>>()?;
            for (i, ((path, _), result)) in named.iter().zip(&results).enumerate() {
                for row in &result.log {
                    log_body.push_str(&format!(
                        "{i},{},{},{:.10},{}\n",
                        row.phase, row.generation, row.best_mean, row.evals_used
                    ));
                }
                println!(
                    "{}: mean = {:.10} (active {}, {} sim calls)",
                    path.display(),
                    result.mean,
                    result.active_nodes,
                    result.sim_calls
                );
                tours.push(result.tour.clone());
            }
        }
        SolverKind::Iterative => {
            let (iter_cfg, ga_cfg) = iter_config(&cfg, &mut header)?;
            log_body.push_str(
                "instance_id,iter,max_route_size,surrogate_value,upper_bound,feasible_fraction,best_mean\n",
            );
            let results: Vec<_> = named
                .par_iter()
                .map(|(_, inst)| {
                    let iter = iterative_search(inst, &iter_cfg, args.seed)?;
                    let mut seeds: Vec<Vec<usize>> =
                        iter.stored.iter().map(|(r, _)| r.clone()).collect();
                    seeds.truncate(16);
                    if seeds.is_empty() {
                        seeds.push(iter.visited.clone());
                    }
                    let ga = ga_improve(inst, &seeds, &ga_cfg, args.seed)?;
                    Ok((iter, ga))
                })
                .collect::<Result<_>>()?;
            for (i, ((path, _), (iter, ga))) in named.iter().zip(&results).enumerate() {
                for row in &iter.log {
                    log_body.push_str(&format!(
                        "{i},{},{},{:.10},{:.10},{:.4},{:.10}\n",
                        row.iteration,
                        row.max_route_size,
                        row.surrogate_value,
                        row.upper_bound,
                        row.feasible_fraction,
                        row.best_mean
                    ));
                }
                println!(
                    "{}: mean = {:.10} ({} iterations, {} sim calls)",
                    path.display(),
                    ga.mean,
                    iter.iterations,
                    iter.sim_calls + ga.sim_calls
                );
                tours.push(ga.tour.clone());
            }
        }
        SolverKind::PolicyGreedy | SolverKind::PolicyRollout => {
            let samples = cfg.resolve(args.samples, "samples", 1usize)?;
            let k: usize = cfg.resolve(None, "rollout_k", 5)?;
            let r: usize = cfg.resolve(None, "rollout_r", 64)?;
            header.push("samples", samples);
            if args.solver == SolverKind::PolicyRollout {
                header.push("rollout_k", k);
                header.push("rollout_r", r);
            }
            let pairs: Vec<(usize, usize)> = (0..named.len())
                .flat_map(|i| (0..samples).map(move |j| (i, j)))
                .collect();
            let episodes: Vec<(Vec<usize>, opswtw::Centi)> = pairs
                .par_iter()
                .map(|&(i, j)| {
                    let inst: &Instance = &named[i].1;
                    let stream = sample_stream(args.seed, i as u64, j as u64);
                    match args.solver {
                        SolverKind::PolicyGreedy => {
                            run_episode(inst, &mut GreedySelector, stream)
                        }
                        _ => {
                            let mut selector = RolloutSelector::new(k, r, args.seed);
                            run_episode(inst, &mut selector, stream)
                        }
                    }
                })
                .collect::<Result<_>>()?;
            let total: i64 = episodes.iter().map(|(_, r)| r.raw()).sum();
            println!(
                "mean realized reward = {:.10} over {} episodes",
                total as f64 / (100.0 * episodes.len() as f64),
                episodes.len()
            );
            tours.extend(episodes.into_iter().map(|(t, _)| t));
        }
        SolverKind::Random => {
            let budget: u64 = cfg.resolve(None, "random_budget", 100_000)?;
            let fidelity: usize = cfg.resolve(None, "random_fidelity", 100)?;
            header.push("random_budget", budget);
            header.push("random_fidelity", fidelity);
            let results: Vec<_> = named
                .par_iter()
                .map(|(_, inst)| random_search(inst, budget, fidelity, args.seed))
                .collect::<Result<_>>()?;
            for ((path, _), result) in named.iter().zip(&results) {
                println!(
                    "{}: mean = {:.10} ({} tours tried)",
                    path.display(),
                    result.mean,
                    result.evals
                );
                tours.push(result.tour.clone());
            }
        }
        SolverKind::Oracle => {
            let fidelity: usize = cfg.resolve(None, "fidelity", 10_000)?;
            header.push("fidelity", fidelity);
            let results: Vec<_> = named
                .par_iter()
                .map(|(_, inst)| brute_force_best_tour(inst, fidelity, args.seed))
                .collect::<Result<_>>()?;
            for ((path, _), result) in named.iter().zip(&results) {
                println!(
                    "{}: mean = {:.10} over {} prefixes",
                    path.display(),
                    result.mean,
                    result.prefixes
                );
                tours.push(result.tour.clone());
            }
        }
    }

    if let Some(out) = &args.out {
        let body: String = tours.iter().map(|t| tour_line(t) + "\n").collect();
        write_output(out, &header, &body)?;
    }
    if let Some(log) = &args.log {
        if log_body.is_empty() {
            log_body.push_str("# no log for this solver\n");
        }
        write_output(log, &header, &log_body)?;
    }
    Ok(())
}
