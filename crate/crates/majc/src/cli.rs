//! Command-line front door: eight subcommands, each a thin wrapper that
//! reads JSON files, calls one library entry point, and writes the result
//! as JSON.
//!
//! Conventions shared by every subcommand:
//! - the primary artifact goes to `--out` when given, else to stdout;
//! - a run report (command echo, input hash, outputs, assertion summary,
//!   timing) goes to stdout when `--out` is given, else to stderr;
//! - `--seed` (or `MAJC_SEED`) feeds every seeded stage, so identical
//!   inputs replay identically;
//! - exit codes: 0 success, 1 verification failure, 2 usage, 3 I/O.

use crate::card::Card;
use crate::closure::{boundary_degree_check, closure, elimination_order, verify_elimination};
use crate::colouring::Colour;
use crate::error::{Error, Result};
use crate::extend::{extend_over_boundary, ExtensionPlan};
use crate::generators::{instantiate_generator, GeneratorSpec};
use crate::io::{
    parse_colouring_json, parse_family_json, parse_graph_json, parse_instance_json,
    parse_lists_json, parse_set_json,
};
use crate::lazy::GraphView;
use crate::runner::{
    free_enumeration_stream, free_neighbour_stream, run_prefix, RunConfig,
};
use crate::saturation::{is_saturated, saturate};
use crate::solver::{majority_choosable_oracle, solve_finite, OracleMode};
use crate::streams::DisjointRefinement;
use crate::sublists::{select_sublists, ListOracle, SublistRequest, TrackedSet};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "majc", version, about = "Majority list-colouring toolbox")]
pub struct Cli {
    /// Seed for every sampled or scheduled stage.
    #[arg(long, global = true, env = "MAJC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the parallel stages.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Write the primary JSON artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Colour one finite instance, maximizing cross edges locally.
    Solve {
        /// Instance file: graph, frozen part, lists, optional pin.
        #[arg(long)]
        instance: PathBuf,
    },
    /// Decide majority choosability over exhaustive or sampled list systems.
    CheckChoosable {
        #[arg(long)]
        graph: PathBuf,
        /// List size to test.
        #[arg(long = "l")]
        ell: usize,
        /// Colours available to the list enumeration.
        #[arg(long, default_value_t = 8)]
        palette: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Sampled mode: how many systems to draw.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Grow a vertex set to its minimal closed superset.
    Closure {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        set: PathBuf,
        /// Materialization bound, required for generated graphs.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Round-by-round neighbourhood saturation on a generated graph.
    Saturate {
        #[arg(long)]
        generator: PathBuf,
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        budget: usize,
    },
    /// Colour the boundary of a frozen base, one audited step at a time.
    Extend {
        #[arg(long)]
        graph: PathBuf,
        /// Colouring of the already-decided part.
        #[arg(long)]
        base: PathBuf,
        /// 3-lists for the boundary vertices.
        #[arg(long)]
        lists: PathBuf,
        /// Boundary order file; computed from the closure when omitted.
        #[arg(long)]
        order: Option<PathBuf>,
        /// Map from coloured vertices to their reserved witness sets.
        #[arg(long)]
        witnesses: Option<PathBuf>,
    },
    /// Certified prefix colouring of a generated infinite graph.
    Prefix {
        #[arg(long)]
        generator: PathBuf,
        /// Closed-part vertex set file.
        #[arg(long = "A")]
        a: Option<PathBuf>,
        /// Colouring of the closed part.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Root vertex; always enumerated first.
        #[arg(long)]
        x: String,
        /// Colour the root must avoid.
        #[arg(long)]
        cx: Colour,
        /// Number of finite instances to solve.
        #[arg(long)]
        horizon: usize,
        /// Number of vertices to colour and certify.
        #[arg(long)]
        prefix: usize,
        /// Shared 3-list.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        colours: Vec<Colour>,
        /// Trust the closed part without scanning it.
        #[arg(long)]
        assume_closed: bool,
    },
    /// Refine overlapping infinite streams into pairwise disjoint ones.
    Disjointify {
        /// JSON array of stream descriptions.
        #[arg(long)]
        family: PathBuf,
        /// Emitted prefix length per member.
        #[arg(long)]
        k: usize,
    },
    /// Shrink shared 3-lists to 2-sublists along a fair triple enumeration.
    Sublists {
        #[arg(long)]
        generator: PathBuf,
        /// Triple steps to process.
        #[arg(long)]
        horizon: usize,
        /// Distinguished first vertex.
        #[arg(long)]
        x: String,
        /// Colour struck from the first vertex's list.
        #[arg(long)]
        cx: Colour,
        /// Track the neighbour set of these vertices.
        #[arg(long)]
        track: Vec<String>,
        /// Shared base list.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        colours: Vec<Colour>,
    },
}

/// What one invocation did: inputs digested, artifacts written, and the
/// summary lines of every assertion the run re-checked.  Identical
/// (command, input files, seed) triples produce identical reports except
/// for `elapsed_ms`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 over the command echo, the seed, and every input file read.
    pub config_hash: String,
    /// Files written (empty when the artifact went to stdout).
    pub outputs: Vec<String>,
    pub assertions: Vec<String>,
    pub elapsed_ms: u128,
}

/// Reads input files and folds their bytes into the run hash.
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Self {
        Inputs { hasher: Sha256::new() }
    }

    fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path)?;
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    fn finish(mut self, echo: &str, seed: u64) -> String {
        self.hasher.update(echo.as_bytes());
        self.hasher.update(seed.to_le_bytes());
        let digest = self.hasher.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// Runs one parsed invocation end to end and returns its report.
///
/// The artifact is written to `--out` when given, otherwise printed to
/// stdout; the caller decides where the report itself goes.
pub fn dispatch(cli: &Cli) -> Result<RunReport> {
    let started = Instant::now();
    let mut inputs = Inputs::new();
    let (echo, artifact, assertions) = run_command(cli, &mut inputs)?;
    let config_hash = inputs.finish(&echo, cli.seed);
    let mut outputs = Vec::new();
    match &cli.out {
        Some(path) => {
            fs::write(path, &artifact)?;
            outputs.push(path.display().to_string());
        }
        None => println!("{artifact}"),
    }
    Ok(RunReport {
        command: echo,
        config_hash,
        outputs,
        assertions,
        elapsed_ms: started.elapsed().as_millis(),
    })
}

fn run_command(cli: &Cli, inputs: &mut Inputs) -> Result<(String, String, Vec<String>)> {
    match &cli.command {
        Command::Solve { instance } => {
            let echo = format!("solve --instance {}", instance.display());
            let parsed = parse_instance_json(&inputs.read(instance)?)?;
            let result = solve_finite(&parsed)?;
            let assertions = vec![
                format!("improving-moves: {}", result.certificate.improving_moves),
                format!("happy-free-vertices: {}", result.certificate.happy_free_vertices),
                format!("cross-edges: {}", result.cross_edges),
            ];
            Ok((echo, to_json(&result)?, assertions))
        }
        Command::CheckChoosable { graph, ell, palette, mode, samples } => {
            let echo = format!(
                "check-choosable --graph {} --l {ell} --palette {palette} --mode {:?} --samples {samples}",
                graph.display(),
                mode
            );
            let g = parse_graph_json(&inputs.read(graph)?)?;
            let oracle_mode = match mode {
                ModeArg::Exhaustive => OracleMode::Exhaustive,
                ModeArg::Sampled => OracleMode::Sampled { samples: *samples, seed: cli.seed },
            };
            let report = majority_choosable_oracle(&g, *ell, *palette, oracle_mode, cli.threads)?;
            let assertions = vec![
                format!("choosable: {}", report.choosable),
                format!("systems-checked: {}", report.systems_checked),
            ];
            Ok((echo, to_json(&report)?, assertions))
        }
        Command::Closure { graph, set, budget } => {
            let echo = format!("closure --graph {} --set {}", graph.display(), set.display());
            let g = parse_graph_json(&inputs.read(graph)?)?;
            let seed_set = parse_set_json(&inputs.read(set)?)?;
            let view = GraphView::Finite(&g);
            let outcome = closure(&view, &seed_set, *budget)?;
            let order = elimination_order(&view, &outcome)?;
            let violation = verify_elimination(&view, outcome.seed(), &order.order)?;
            let boundary = boundary_degree_check(&view, &outcome)?;
            #[derive(Serialize)]
            struct ClosureArtifact<'a> {
                outcome: &'a crate::closure::ClosureOutcome,
                order: &'a crate::closure::EliminationOrder,
                boundary: &'a crate::closure::BoundaryReport,
            }
            let assertions = vec![
                format!("closure-size: {}", outcome.closed_set.len()),
                format!("order-violation: {}", violation.as_deref().unwrap_or("none")),
                format!("boundary-degrees-pass: {}", boundary.all_pass),
            ];
            let artifact = to_json(&ClosureArtifact {
                outcome: &outcome,
                order: &order,
                boundary: &boundary,
            })?;
            Ok((echo, artifact, assertions))
        }
        Command::Saturate { generator, a, b, budget } => {
            let echo = format!(
                "saturate --generator {} --A {} --B {} --budget {budget}",
                generator.display(),
                a.display(),
                b.display()
            );
            let spec: GeneratorSpec = serde_json::from_str(&inputs.read(generator)?)?;
            let lazy = instantiate_generator(&spec)?;
            let view = GraphView::Lazy(lazy.as_ref());
            let a_set = parse_set_json(&inputs.read(a)?)?;
            let b_set = parse_set_json(&inputs.read(b)?)?;
            let result = saturate(&view, &a_set, &b_set, Card::Aleph0, *budget)?;
            let check = is_saturated(&view, &a_set, &result.member_set(), Card::Aleph0, Some(*budget))?;
            #[derive(Serialize)]
            struct SaturateArtifact<'a> {
                result: &'a crate::saturation::SaturationResult,
                check: &'a crate::saturation::SaturationCheck,
            }
            let assertions = vec![
                format!("members: {}", result.members.len()),
                format!("complete: {}", result.complete),
                format!("saturated: {}", check.is_saturated()),
            ];
            let artifact = to_json(&SaturateArtifact { result: &result, check: &check })?;
            Ok((echo, artifact, assertions))
        }
        Command::Extend { graph, base, lists, order, witnesses } => {
            let echo = format!(
                "extend --graph {} --base {} --lists {}",
                graph.display(),
                base.display(),
                lists.display()
            );
            let g = parse_graph_json(&inputs.read(graph)?)?;
            let base_colouring = parse_colouring_json(&inputs.read(base)?)?;
            let list_system = parse_lists_json(&inputs.read(lists)?)?;
            let view = GraphView::Finite(&g);
            let order_vec = match order {
                Some(path) => serde_json::from_str::<Vec<String>>(&inputs.read(path)?)?,
                None => {
                    // No explicit order: take the boundary of the base's
                    // closure, in the order closure stages absorbed it.
                    let seed: BTreeSet<String> =
                        base_colouring.domain().map(str::to_string).collect();
                    let outcome = closure(&view, &seed, None)?;
                    elimination_order(&view, &outcome)?.order
                }
            };
            let witness_sets = match witnesses {
                Some(path) => serde_json::from_str::<BTreeMap<String, BTreeSet<String>>>(
                    &inputs.read(path)?,
                )?,
                None => BTreeMap::new(),
            };
            let plan = ExtensionPlan {
                base: base_colouring,
                order: order_vec,
                witness_sets,
                lists: list_system,
            };
            let outcome = extend_over_boundary(&view, &plan, None)?;
            let min_safe = outcome.steps.iter().map(|s| s.safe.len()).min();
            let assertions = vec![
                format!("boundary-vertices: {}", outcome.steps.len()),
                format!("boundary-happy: {}", outcome.boundary_happy),
                format!(
                    "min-safe-set: {}",
                    min_safe.map_or("n/a".to_string(), |m| m.to_string())
                ),
            ];
            Ok((echo, to_json(&outcome)?, assertions))
        }
        Command::Prefix {
            generator,
            a,
            base,
            x,
            cx,
            horizon,
            prefix,
            colours,
            assume_closed,
        } => {
            let echo = format!(
                "prefix --generator {} --x {x} --cx {cx} --horizon {horizon} --prefix {prefix}",
                generator.display()
            );
            let spec: GeneratorSpec = serde_json::from_str(&inputs.read(generator)?)?;
            let a_set = match a {
                Some(path) => parse_set_json(&inputs.read(path)?)?,
                None => BTreeSet::new(),
            };
            let base_colouring = match base {
                Some(path) => parse_colouring_json(&inputs.read(path)?)?,
                None => Default::default(),
            };
            let config = RunConfig {
                generator: spec,
                a_set,
                a_assumed_closed: *assume_closed,
                base: base_colouring,
                lists: colours.clone(),
                x: x.clone(),
                banned: *cx,
                horizon: *horizon,
                prefix: *prefix,
                seed: cli.seed,
            };
            let certificate = run_prefix(&config, cli.threads)?;
            let certified = certificate
                .verdicts
                .iter()
                .filter(|v| v.status.is_certified_happy())
                .count();
            let assertions = vec![
                format!("root-colour: {}", certificate.root_colour),
                format!("banned-avoided: {}", certificate.root_colour != *cx),
                format!("certified-happy: {certified}"),
                format!("pending: {}", certificate.verdicts.len() - certified),
                format!("stable: {}", certificate.stabilization.stable),
            ];
            Ok((echo, to_json(&certificate)?, assertions))
        }
        Command::Disjointify { family, k } => {
            let echo = format!("disjointify --family {} --k {k}", family.display());
            let fam = parse_family_json(&inputs.read(family)?)?;
            let members = fam.members.len();
            let mut refinement = DisjointRefinement::new(fam, cli.seed)?;
            let mut prefixes = Vec::with_capacity(members);
            for i in 0..members {
                prefixes.push(refinement.prefix(i, *k)?);
            }
            let mut seen = BTreeSet::new();
            let disjoint = prefixes
                .iter()
                .flatten()
                .all(|value| seen.insert(value.clone()));
            #[derive(Serialize)]
            struct DisjointifyArtifact {
                prefixes: Vec<Vec<String>>,
                steps: usize,
                scan_work: usize,
            }
            let assertions = vec![
                format!("pairwise-disjoint: {disjoint}"),
                format!("steps: {}", refinement.steps),
            ];
            let artifact = to_json(&DisjointifyArtifact {
                prefixes,
                steps: refinement.steps,
                scan_work: refinement.scan_work,
            })?;
            Ok((echo, artifact, assertions))
        }
        Command::Sublists { generator, horizon, x, cx, track, colours } => {
            let echo = format!(
                "sublists --generator {} --horizon {horizon} --x {x} --cx {cx}",
                generator.display()
            );
            let spec: GeneratorSpec = serde_json::from_str(&inputs.read(generator)?)?;
            let lazy = instantiate_generator(&spec)?;
            if lazy.vertex_index(x).is_none() {
                return Err(Error::UnknownVertex(x.clone()));
            }
            let mut palette = colours.clone();
            palette.sort_unstable();
            palette.dedup();
            let mut tracked = Vec::new();
            for vertex in track {
                if lazy.vertex_index(vertex).is_none() {
                    return Err(Error::UnknownVertex(vertex.clone()));
                }
                if lazy.degree(vertex) != Card::Aleph0 {
                    return Err(Error::Usage(format!(
                        "--track {vertex}: only vertices with infinite degree can be tracked"
                    )));
                }
                tracked.push(TrackedSet {
                    label: vertex.clone(),
                    stream: free_neighbour_stream(
                        Arc::clone(&lazy),
                        BTreeSet::new(),
                        vertex.clone(),
                    ),
                });
            }
            let table = select_sublists(SublistRequest {
                vertex_enum: free_enumeration_stream(&lazy, BTreeSet::new(), x),
                tracked,
                lists: ListOracle::Uniform(&palette),
                x: x.clone(),
                c_x: *cx,
                ell: palette.len().saturating_sub(1),
                horizon: *horizon,
            })?;
            let x_sublist = table.sublists.get(x).cloned().unwrap_or_default();
            let assertions = vec![
                format!("log-entries: {}", table.log.len()),
                format!("x-sublist-excludes-cx: {}", !x_sublist.contains(cx)),
            ];
            Ok((echo, to_json(&table)?, assertions))
        }
    }
}
