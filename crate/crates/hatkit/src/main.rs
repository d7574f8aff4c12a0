use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hatkit_core::alternating::analyze;
use hatkit_core::autsearch::{are_isomorphic, automorphism_group};
use hatkit_core::constructions::{
    build_circulant_pm, build_wreath, build_wreath_instance, build_xe, build_xo, catalog_entry, Instance,
    XeParams, XoParams, CATALOG,
};
use hatkit_core::formats::{parse_generators, to_graph6, to_sparse6};
use hatkit_core::graph::{certify_hat, Graph};
use hatkit_core::harness::{
    analyze_cmd, aut_json, dot_files, ingest, to_bundle_json, transitivity_json, AnalyzeOptions,
    GridConfig, HarnessError, InputFormat, InstanceSpec, Ingested, Suite, EXIT_CHECK_FAILED,
};
use hatkit_core::quotients::{alt_graph, classify_kernel, cyclic_quotient_pipeline, kernel_report, kernels};

#[derive(Parser)]
#[command(name = "hatkit", version, about = "Half-arc-transitive tetravalent graph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph (and its group, where known) from parameters.
    Construct {
        #[command(subcommand)]
        family: Family,
        #[arg(long, value_enum, default_value_t = OutFormat::BundleJson, global = true)]
        format: OutFormat,
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Full pipeline report as JSON.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Orientation-only analysis; no group is needed.
        #[arg(long)]
        no_group: bool,
        /// Also decide arc-transitivity of the graph and derived graphs.
        #[arg(long)]
        arc_transitivity: bool,
        /// Write DOT files for the graph and derived graphs here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Cyclic-quotient pipeline report.
    Quotient {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// The graph on alternating cycles, two cycles adjacent when they meet.
    Altgraph {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Edgelist)]
        format: OutFormat,
    },
    /// The three kernels and the case they fall in.
    Kernels {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Decide isomorphism of two graphs.
    Iso { a: PathBuf, b: PathBuf },
    /// Full automorphism group.
    Aut { graph: PathBuf },
    /// Run verification suites.
    Verify {
        /// Suite name, or `all`.
        suite: String,
        /// `default` or `extended`.
        #[arg(long, default_value = "default")]
        grid: String,
        /// Extra instance files (bundle JSON with generators).
        #[arg(long)]
        instance: Vec<PathBuf>,
        /// Only the given files, no built-in grid.
        #[arg(long)]
        only_instances: bool,
        /// Omit wall time so output can be compared byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Parse a file and summarize it.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Odd-radius layered family.
    Xo {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        q: u64,
    },
    /// Even-radius layered family.
    Xe {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u64,
    },
    /// Circulant `Circ_n(+-jumps)`; no group is attached.
    Circ {
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        jumps: Vec<u64>,
    },
    /// Wreath graph `C_n[2K_1]` with its radius-2 group.
    Wreath {
        #[arg(long)]
        n: u64,
    },
    /// A named entry of the Cayley catalog; `--list` prints the names.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    BundleJson,
    Edgelist,
    Graph6,
    Sparse6,
    Dot,
}

#[derive(Args)]
struct InputArgs {
    file: PathBuf,
    /// Input format; detected from extension and content when omitted.
    #[arg(long)]
    input_format: Option<String>,
    /// Generator file, one permutation per line.
    #[arg(long)]
    generators: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<Ingested> {
        let format = self.input_format.as_deref().map(str::parse::<InputFormat>).transpose()?;
        let mut ing = ingest(&self.file, format)?;
        if let Some(path) = &self.generators {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Io { path: path.clone(), message: e.to_string() })?;
            let gens = parse_generators(&text).map_err(HarnessError::from)?;
            let group = hatkit_core::perm::GroupByGenerators::new(ing.graph.order(), gens)
                .map_err(HarnessError::from)?;
            ing.group = Some(group);
        }
        Ok(ing)
    }

    fn load_with_group(&self) -> Result<(Ingested, hatkit_core::perm::GroupByGenerators)> {
        let ing = self.load()?;
        let group = ing.group.clone().ok_or_else(|| {
            HarnessError::MissingGroup(format!("{} carries no group; pass --generators", self.file.display()))
        })?;
        Ok((ing, group))
    }
}

fn render(graph: &Graph, group: Option<&hatkit_core::perm::GroupByGenerators>, format: OutFormat, params: Option<serde_json::Value>) -> String {
    match format {
        OutFormat::BundleJson => to_bundle_json(graph, group, params) + "\n",
        OutFormat::Edgelist => graph.to_edge_list(),
        OutFormat::Graph6 => to_graph6(graph) + "\n",
        OutFormat::Sparse6 => to_sparse6(graph) + "\n",
        OutFormat::Dot => graph.to_dot("graph"),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_dots(dir: &Path, ing: &Ingested) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, text) in dot_files(ing) {
        let p = dir.join(name);
        std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

/// Runs the command and returns the exit code for recorded check failures.
fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Construct { family, format, out } => {
            let (graph, group, params) = match family {
                Family::Xo { m, r, q } => {
                    let p = XoParams::new(m, r, q)?;
                    let Instance { graph, group } = build_xo(p)?;
                    (graph, Some(group), Some(json!({"family": "Xo", "m": m, "r": r, "q": q})))
                }
                Family::Xe { m, r, q, t } => {
                    let p = XeParams::new(m, r, q, t)?;
                    let Instance { graph, group } = build_xe(p)?;
                    (graph, Some(group), Some(json!({"family": "Xe", "m": m, "r": r, "q": q, "t": t})))
                }
                Family::Circ { n, jumps } => {
                    (build_circulant_pm(n, &jumps)?, None, Some(json!({"family": "Circ", "n": n, "jumps": jumps})))
                }
                Family::Wreath { n } => {
                    let Instance { graph, group } = build_wreath_instance(n)?;
                    debug_assert_eq!(graph, build_wreath(n)?);
                    (graph, Some(group), Some(json!({"family": "Wreath", "n": n})))
                }
                Family::Catalog { name, list } => {
                    if list || name.is_none() {
                        let names: Vec<&str> = CATALOG.iter().map(|e| e.name).collect();
                        emit(out.as_deref(), &(names.join("\n") + "\n"))?;
                        return Ok(0);
                    }
                    let name = name.expect("checked above");
                    let entry = catalog_entry(&name).ok_or_else(|| {
                        hatkit_core::constructions::ConstructionError::InvalidParams(format!("no catalog entry `{name}`"))
                    })?;
                    let Instance { graph, group } = entry.build()?;
                    (graph, Some(group), Some(json!({"family": "Catalog", "name": name})))
                }
            };
            emit(out.as_deref(), &render(&graph, group.as_ref(), format, params))?;
            Ok(0)
        }
        Command::Analyze { input, no_group, arc_transitivity, dot } => {
            let ing = input.load()?;
            let rep = analyze_cmd(&ing, AnalyzeOptions { no_group, arc_transitivity })?;
            if let Some(dir) = dot {
                write_dots(&dir, &ing)?;
            }
            print!("{}", rep.to_json() + "\n");
            Ok(if rep.errors.is_empty() { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Quotient { input, dot } => {
            let (ing, group) = input.load_with_group()?;
            let rep = cyclic_quotient_pipeline(&ing.graph, &group).map_err(HarnessError::from)?;
            if let Some(dir) = dot {
                write_dots(&dir, &ing)?;
            }
            print!("{}", pretty(json!(rep)));
            Ok(if rep.passes { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Altgraph { input, format } => {
            let (ing, group) = input.load_with_group()?;
            let cert = certify_hat(&ing.graph, &group).map_err(HarnessError::from)?;
            let s = analyze(&cert.orientation).map_err(HarnessError::from)?;
            let alt = alt_graph(&s).map_err(HarnessError::from)?;
            print!("{}", render(&alt, None, format, None));
            Ok(0)
        }
        Command::Kernels { input } => {
            let (ing, group) = input.load_with_group()?;
            let cert = certify_hat(&ing.graph, &group).map_err(HarnessError::from)?;
            let s = analyze(&cert.orientation).map_err(HarnessError::from)?;
            let k = kernels(&group, &s).map_err(HarnessError::from)?;
            let rep = kernel_report(&k, &s).map_err(HarnessError::from)?;
            let class = classify_kernel(&s, &k.alt);
            let consistent = class.is_ok();
            let out = json!({
                "kernels": rep,
                "classification": class.as_ref().ok(),
                "error": class.as_ref().err().map(|e| e.to_string()),
            });
            print!("{}", pretty(out));
            Ok(if consistent { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Iso { a, b } => {
            let ga = ingest(&a, None)?.graph;
            let gb = ingest(&b, None)?.graph;
            let w = are_isomorphic(&ga, &gb).map_err(HarnessError::from)?;
            let out = json!({
                "isomorphic": w.is_some(),
                "witness": w.map(|p| p.images().to_vec()),
            });
            print!("{}", pretty(out));
            Ok(0)
        }
        Command::Aut { graph } => {
            let g = ingest(&graph, None)?.graph;
            let mut out = aut_json(&g)?;
            out["base"] = json!(automorphism_group(&g).map_err(HarnessError::from)?.base);
            print!("{}", pretty(out));
            Ok(0)
        }
        Command::Verify { suite, grid, instance, only_instances, no_timing } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse()?]
            };
            let mut config = if only_instances {
                GridConfig::default()
            } else {
                match grid.as_str() {
                    "default" => GridConfig::standard(),
                    "extended" => GridConfig::extended(),
                    other => anyhow::bail!(HarnessError::UnknownSuite(format!("grid `{other}`"))),
                }
            };
            for path in instance {
                config = config.with(InstanceSpec::File { path });
            }
            let reports: Vec<_> = suites
                .iter()
                .map(|&s| {
                    let r = hatkit_core::harness::run_suite(s, &config);
                    if no_timing {
                        r.without_timing()
                    } else {
                        r
                    }
                })
                .collect();
            let ok = reports.iter().all(|r| r.passes());
            for r in &reports {
                eprintln!(
                    "{}: {} passed, {} failed, {} skipped, {} errors",
                    r.suite, r.passed, r.failed, r.skipped, r.errors
                );
            }
            print!("{}", pretty(json!(reports)));
            Ok(if ok { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Ingest { input } => {
            let ing = input.load()?;
            let group_order = ing.group.as_ref().map(|g| g.order()).transpose().map_err(HarnessError::from)?;
            let out = json!({
                "n": ing.graph.order(),
                "edges": ing.graph.size(),
                "regular_degree": ing.graph.regular_degree(),
                "connected": ing.graph.is_connected(),
                "graph6": to_graph6(&ing.graph),
                "group_order": group_order,
                "transitivity": ing.group.as_ref().map(|g| transitivity_json(&ing.graph, g)),
                "params": ing.params,
            });
            print!("{}", pretty(out));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<HarnessError>()
                .map(HarnessError::exit_code)
                .or_else(|| e.downcast_ref::<hatkit_core::constructions::ConstructionError>().map(|_| 5))
                .or_else(|| e.downcast_ref::<std::io::Error>().map(|_| 3))
                .unwrap_or(1);
            ExitCode::from(code as u8)
        }
    }
}
