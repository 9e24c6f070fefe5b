//! Command-line surface: generation, validation, computation, extraction
//! and SVG export over the flat-file formats.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or parse error,
//! 3 budget exhausted ("unknown").

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Once;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::extract::{
    extract_planar_subwall, plant_instance, verify_planar_certificate, ExtractError,
};
use crate::formats;
use crate::graph::Graph;
use crate::homotopy::{classify, find_homotopic_pair, HomotopyError};
use crate::nearembed::{captured_wall_subwall, replay_reduction, validate_near_embedding};
use crate::surface::{euler_genus, validate_embedding, ValidationReport};
use crate::vortex::{adhesion, transaction_order, AdhesionOutcome};
use crate::walls::{generate_q, generate_wall, grid_edges, verify_wall_model};

/// Outcome of one CLI invocation.
#[derive(Debug)]
pub struct CommandResult {
    pub exit_code: i32,
    pub human: String,
    pub machine: Value,
}

impl CommandResult {
    fn ok(human: impl Into<String>, machine: Value) -> Self {
        CommandResult {
            exit_code: 0,
            human: human.into(),
            machine,
        }
    }

    fn failed(human: impl Into<String>, machine: Value) -> Self {
        CommandResult {
            exit_code: 1,
            human: human.into(),
            machine,
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        CommandResult {
            exit_code: 2,
            machine: json!({"error": msg}),
            human: msg,
        }
    }

    fn unknown(msg: impl Into<String>, machine: Value) -> Self {
        CommandResult {
            exit_code: 3,
            human: msg.into(),
            machine,
        }
    }
}

#[derive(Parser)]
#[command(name = "wallkit", version, about = "Walls, vortices and near-embeddings")]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a cylindrical wall, a flat wall or a grid.
    Gen {
        /// qwall, wall or grid
        kind: String,
        r: u16,
        /// Output stem; files <stem>.graph and <stem>.wallmodel are written.
        #[arg(long)]
        out: Option<String>,
    },
    /// Validate files of the given kind.
    Verify {
        /// emb, wallmodel, vortexdec, ne or cert
        kind: String,
        files: Vec<PathBuf>,
    },
    /// Euler genus of an embedding.
    Genus { emb: PathBuf },
    /// Homotopy classification of a curve family.
    Homotopy {
        /// classify or pair
        op: String,
        emb: PathBuf,
        family: PathBuf,
    },
    /// Vortex computations.
    Vortex {
        /// order or adhesion
        op: String,
        vortex: PathBuf,
        #[arg(long, default_value_t = 2_000_000)]
        budget: usize,
        #[arg(long)]
        cyclic: bool,
    },
    /// Apply a reduction sequence to a graph.
    Reduce {
        graph: PathBuf,
        steps: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wall operations on reduced graphs.
    Subwall {
        /// lemma3
        op: String,
        host: PathBuf,
        wall: PathBuf,
        steps: PathBuf,
        #[arg(long, default_value_t = 1)]
        phase: u16,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract a planarly embedded cylindrical subwall.
    Extract {
        ne: PathBuf,
        wall: PathBuf,
        #[arg(long, default_value_t = 2)]
        a: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a planted instance from a spec file.
    Plant {
        spec: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "planted")]
        out: String,
    },
    /// Export an embedding as SVG.
    Export {
        /// svg
        format: String,
        emb: PathBuf,
        #[arg(long)]
        highlight: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

static THREAD_POOL: Once = Once::new();

fn init_threads() {
    THREAD_POOL.call_once(|| {
        if let Ok(n) = std::env::var("WALLKIT_THREADS") {
            if let Ok(n) = n.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build_global();
            }
        }
    });
}

fn read(path: &Path) -> Result<String, CommandResult> {
    std::fs::read_to_string(path)
        .map_err(|e| CommandResult::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: &Path, content: &str) -> Result<(), CommandResult> {
    std::fs::write(path, content)
        .map_err(|e| CommandResult::usage(format!("cannot write {}: {e}", path.display())))
}

fn report_result(kind: &str, report: &ValidationReport) -> CommandResult {
    let machine = json!({
        "kind": kind,
        "valid": report.is_valid(),
        "violations": report.violations,
        "warnings": report.warnings,
    });
    if report.is_valid() {
        CommandResult::ok(format!("{kind}: ok\n{report}"), machine)
    } else {
        CommandResult::failed(format!("{kind}: invalid\n{report}"), machine)
    }
}

fn load_ne(path: &Path) -> Result<crate::nearembed::NearEmbedding, CommandResult> {
    let manifest = read(path)?;
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    formats::parse_ne_bundle(&manifest, &dir, &|p| std::fs::read_to_string(p))
        .map_err(|e| CommandResult::usage(format!("{}: {e}", path.display())))
}

/// Runs one invocation; `argv` excludes the program name.
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    init_threads();
    let mut full: Vec<String> = vec!["wallkit".into()];
    full.extend(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(&full) {
        Ok(c) => c,
        Err(e) => return CommandResult::usage(e.to_string()),
    };
    match dispatch(cli.command) {
        Ok(r) | Err(r) => r,
    }
}

fn dispatch(cmd: Command) -> Result<CommandResult, CommandResult> {
    match cmd {
        Command::Gen { kind, r, out } => gen(&kind, r, out),
        Command::Verify { kind, files } => verify(&kind, &files),
        Command::Genus { emb } => {
            let emb = formats::parse_embedding(&read(&emb)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let g = euler_genus(&emb).map_err(|e| CommandResult::failed(e.to_string(), json!({})))?;
            Ok(CommandResult::ok(
                format!("euler genus {g}"),
                json!({"genus": g}),
            ))
        }
        Command::Homotopy { op, emb, family } => homotopy(&op, &emb, &family),
        Command::Vortex {
            op,
            vortex,
            budget,
            cyclic,
        } => vortex_cmd(&op, &vortex, budget, cyclic),
        Command::Reduce { graph, steps, out } => {
            let g = formats::parse_graph(&read(&graph)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let steps = formats::parse_steps(&read(&steps)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let (reduced, added) = replay_reduction(&g, &steps)
                .map_err(|e| CommandResult::failed(e.to_string(), json!({"error": e.to_string()})))?;
            let text = formats::emit_graph(&reduced);
            if let Some(path) = out {
                write_out(&path, &text)?;
            }
            Ok(CommandResult::ok(
                format!(
                    "reduced to {} vertices, {} edges ({} clique edges added)\n{text}",
                    reduced.vertex_count(),
                    reduced.edge_count(),
                    added.iter().map(Vec::len).sum::<usize>()
                ),
                json!({
                    "vertices": reduced.vertex_count(),
                    "edges": reduced.edge_count(),
                    "added": added.iter().map(Vec::len).sum::<usize>(),
                }),
            ))
        }
        Command::Subwall {
            op,
            host,
            wall,
            steps,
            phase,
            out,
        } => {
            if op != "lemma3" {
                return Err(CommandResult::usage(format!("unknown subwall op {op:?}")));
            }
            let g = formats::parse_graph(&read(&host)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let model = formats::parse_wall_model(&read(&wall)?, &g)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let steps = formats::parse_steps(&read(&steps)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let sub = captured_wall_subwall(&g, &model, &steps, phase)
                .map_err(|e| CommandResult::failed(e.to_string(), json!({"error": e.to_string()})))?;
            let text = formats::emit_wall_model(&sub);
            if let Some(path) = out {
                write_out(&path, &text)?;
            }
            Ok(CommandResult::ok(
                format!("subwall of order {}\n{text}", sub.order),
                json!({"order": sub.order}),
            ))
        }
        Command::Extract {
            ne,
            wall,
            a,
            seed: _,
            out,
        } => {
            let ne = load_ne(&ne)?;
            let model = formats::parse_wall_model(&read(&wall)?, &ne.whole)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            match extract_planar_subwall(&ne, &model, a) {
                Ok(result) => {
                    let cert_text = formats::emit_certificate(&result.certificate);
                    if let Some(path) = out {
                        write_out(&path, &cert_text)?;
                    }
                    let check = verify_planar_certificate(&ne, &result.certificate);
                    let machine = json!({
                        "order": result.certificate.subwall.order,
                        "hypotheses_met": result.hypotheses_met,
                        "verified": check.is_valid(),
                        "discarded_cycles": result.discarded_cycles,
                        "discarded_paths": result.discarded_paths,
                        "log": result.log,
                    });
                    let mut human = format!(
                        "extracted a cylindrical {}-wall (hypotheses met: {})\n",
                        result.certificate.subwall.order, result.hypotheses_met
                    );
                    for l in &result.log {
                        human.push_str("  ");
                        human.push_str(l);
                        human.push('\n');
                    }
                    if check.is_valid() {
                        Ok(CommandResult::ok(human, machine))
                    } else {
                        Ok(CommandResult::failed(human, machine))
                    }
                }
                Err(ExtractError::NoCertificate { hypotheses_met }) => Ok(CommandResult::failed(
                    format!("no certifiable subwall found (hypotheses met: {hypotheses_met})"),
                    json!({"error": "no certificate", "hypotheses_met": hypotheses_met}),
                )),
                Err(e) => Ok(CommandResult::failed(
                    e.to_string(),
                    json!({"error": e.to_string()}),
                )),
            }
        }
        Command::Plant { spec, seed, out } => {
            let spec = formats::parse_plant_spec(&read(&spec)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let inst = plant_instance(&spec, seed)
                .map_err(|e| CommandResult::failed(e.to_string(), json!({"error": e.to_string()})))?;
            // The bundle manifest references sibling files by bare name.
            let out_path = PathBuf::from(&out);
            let dir = out_path
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("."));
            let stem = out_path
                .file_name()
                .and_then(|s| s.to_str())
                .ok_or_else(|| CommandResult::usage("bad --out stem"))?
                .to_string();
            let mut files = formats::emit_ne_bundle(&inst.ne, &stem);
            files.push((format!("{stem}.wallmodel"), formats::emit_wall_model(&inst.wall)));
            files.push((
                format!("{stem}.cert"),
                formats::emit_certificate(&inst.certificate),
            ));
            let names: Vec<String> = files.iter().map(|(n, _)| n.clone()).collect();
            for (name, content) in &files {
                write_out(&dir.join(name), content)?;
            }
            Ok(CommandResult::ok(
                format!(
                    "planted instance of order {} written to {}",
                    inst.certificate.subwall.order,
                    names.join(", ")
                ),
                json!({"order": inst.certificate.subwall.order, "files": names, "seed": seed}),
            ))
        }
        Command::Export {
            format,
            emb,
            highlight,
            out,
        } => {
            if format != "svg" {
                return Err(CommandResult::usage(format!("unknown export format {format:?}")));
            }
            let emb = formats::parse_embedding(&read(&emb)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let family = match highlight {
                None => Vec::new(),
                Some(path) => formats::parse_family(&read(&path)?, emb.graph())
                    .map_err(|e| CommandResult::usage(e.to_string()))?
                    .members,
            };
            let svg = crate::svg::render_svg(&emb, &family)
                .map_err(|e| CommandResult::failed(e.to_string(), json!({})))?;
            if let Some(path) = out {
                write_out(&path, &svg)?;
            }
            Ok(CommandResult::ok(svg.clone(), json!({"bytes": svg.len()})))
        }
    }
}

fn gen(kind: &str, r: u16, out: Option<String>) -> Result<CommandResult, CommandResult> {
    let stem = out.unwrap_or_else(|| format!("{kind}{r}"));
    match kind {
        "qwall" | "wall" => {
            let (g, model) = if kind == "qwall" {
                generate_q(r)
            } else {
                generate_wall(r)
            }
            .map_err(|e| CommandResult::usage(e.to_string()))?;
            write_out(Path::new(&format!("{stem}.graph")), &formats::emit_graph(&g))?;
            write_out(
                Path::new(&format!("{stem}.wallmodel")),
                &formats::emit_wall_model(&model),
            )?;
            Ok(CommandResult::ok(
                format!(
                    "{kind} of order {r}: {} vertices, {} edges -> {stem}.graph, {stem}.wallmodel",
                    g.vertex_count(),
                    g.edge_count()
                ),
                json!({
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "files": [format!("{stem}.graph"), format!("{stem}.wallmodel")],
                }),
            ))
        }
        "grid" => {
            let mut g = Graph::new();
            let vid = |i: u16, j: u16| crate::graph::VertexId(u32::from(i - 1) * u32::from(r) + u32::from(j - 1));
            for i in 1..=r {
                for j in 1..=r {
                    g.ensure_vertex(vid(i, j));
                }
            }
            for (idx, (a, b)) in grid_edges(r).into_iter().enumerate() {
                g.add_edge(crate::graph::EdgeId(idx as u32), vid(a.0, a.1), vid(b.0, b.1))
                    .unwrap();
            }
            write_out(Path::new(&format!("{stem}.graph")), &formats::emit_graph(&g))?;
            Ok(CommandResult::ok(
                format!(
                    "grid of order {r}: {} vertices, {} edges -> {stem}.graph",
                    g.vertex_count(),
                    g.edge_count()
                ),
                json!({
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "files": [format!("{stem}.graph")],
                }),
            ))
        }
        other => Err(CommandResult::usage(format!("unknown gen kind {other:?}"))),
    }
}

fn verify(kind: &str, files: &[PathBuf]) -> Result<CommandResult, CommandResult> {
    match kind {
        "emb" => {
            let [file] = files else {
                return Err(CommandResult::usage("verify emb <file.emb>"));
            };
            let emb = formats::parse_embedding(&read(file)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            Ok(report_result("emb", &validate_embedding(&emb)))
        }
        "wallmodel" => {
            let [host, model] = files else {
                return Err(CommandResult::usage(
                    "verify wallmodel <host.graph> <model.wallmodel>",
                ));
            };
            let g = formats::parse_graph(&read(host)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let m = formats::parse_wall_model(&read(model)?, &g)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            Ok(report_result("wallmodel", &verify_wall_model(&g, &m)))
        }
        "vortexdec" => {
            let [vortex, dec] = files else {
                return Err(CommandResult::usage(
                    "verify vortexdec <file.vortex> <file.dec>",
                ));
            };
            let v = formats::parse_vortex(&read(vortex)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let d = formats::parse_decomposition(&read(dec)?)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            Ok(report_result(
                "vortexdec",
                &crate::vortex::validate_decomposition(&v, &d),
            ))
        }
        "ne" => {
            let [file] = files else {
                return Err(CommandResult::usage("verify ne <file.ne>"));
            };
            let ne = load_ne(file)?;
            Ok(report_result(
                "ne",
                &validate_near_embedding(&ne, crate::nearembed::DEFAULT_ADHESION_BUDGET),
            ))
        }
        "cert" => {
            let [ne_path, wall, cert] = files else {
                return Err(CommandResult::usage(
                    "verify cert <file.ne> <file.wallmodel> <file.cert>",
                ));
            };
            let ne = load_ne(ne_path)?;
            let wall = formats::parse_wall_model(&read(wall)?, &ne.whole)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            let mut report = verify_wall_model(&ne.whole, &wall);
            let cert = formats::parse_certificate(&read(cert)?, &ne)
                .map_err(|e| CommandResult::usage(e.to_string()))?;
            report.merge(verify_planar_certificate(&ne, &cert));
            Ok(report_result("cert", &report))
        }
        other => Err(CommandResult::usage(format!("unknown verify kind {other:?}"))),
    }
}

fn homotopy(op: &str, emb: &Path, family: &Path) -> Result<CommandResult, CommandResult> {
    let emb = formats::parse_embedding(&read(emb)?)
        .map_err(|e| CommandResult::usage(e.to_string()))?;
    let family = formats::parse_family(&read(family)?, emb.graph())
        .map_err(|e| CommandResult::usage(e.to_string()))?;
    match op {
        "classify" => {
            let classes = classify(&emb, &family)
                .map_err(|e| CommandResult::failed(e.to_string(), json!({"error": e.to_string()})))?;
            Ok(CommandResult::ok(
                format!("{} classes: {classes:?}", classes.len()),
                json!({"classes": classes}),
            ))
        }
        "pair" => match find_homotopic_pair(&emb, &family) {
            Ok(w) => Ok(CommandResult::ok(
                format!(
                    "members {} and {} are homotopic (witness region with {} faces)",
                    w.pair.0,
                    w.pair.1,
                    w.region.faces.len()
                ),
                json!({
                    "pair": [w.pair.0, w.pair.1],
                    "witness_faces": w.region.faces.iter().copied().collect::<Vec<_>>(),
                }),
            )),
            Err(e @ HomotopyError::BoundNotApplicable) => Ok(CommandResult::failed(
                e.to_string(),
                json!({"error": "bound not applicable"}),
            )),
            Err(e) => Ok(CommandResult::failed(
                e.to_string(),
                json!({"error": e.to_string()}),
            )),
        },
        other => Err(CommandResult::usage(format!("unknown homotopy op {other:?}"))),
    }
}

fn vortex_cmd(
    op: &str,
    vortex: &Path,
    budget: usize,
    cyclic: bool,
) -> Result<CommandResult, CommandResult> {
    let v = formats::parse_vortex(&read(vortex)?)
        .map_err(|e| CommandResult::usage(e.to_string()))?;
    match op {
        "order" => {
            let (order, tx) = transaction_order(&v, cyclic)
                .map_err(|e| CommandResult::failed(e.to_string(), json!({})))?;
            Ok(CommandResult::ok(
                format!(
                    "transaction order {order} on interval {:?} ({} paths)",
                    tx.interval,
                    tx.paths.len()
                ),
                json!({
                    "order": order,
                    "interval": [tx.interval.0, tx.interval.1],
                }),
            ))
        }
        "adhesion" => match adhesion(&v, budget)
            .map_err(|e| CommandResult::failed(e.to_string(), json!({})))?
        {
            AdhesionOutcome::Exact(rep) => {
                let parts: Vec<Vec<u32>> = rep
                    .decomposition
                    .parts
                    .iter()
                    .map(|p| p.iter().map(|v| v.0).collect())
                    .collect();
                Ok(CommandResult::ok(
                    format!("adhesion {} (linked: {})", rep.adhesion, rep.linked),
                    json!({
                        "adhesion": rep.adhesion,
                        "linked": rep.linked,
                        "parts": parts,
                    }),
                ))
            }
            AdhesionOutcome::Infeasible { edge } => Ok(CommandResult::failed(
                format!(
                    "infeasible: nonconsecutive society edge {} - {}",
                    edge.0, edge.1
                ),
                json!({"infeasible": true, "edge": [edge.0 .0, edge.1 .0]}),
            )),
            AdhesionOutcome::Unknown { known_above } => Ok(CommandResult::unknown(
                format!("unknown above bound {known_above} (budget {budget} exhausted)"),
                json!({"unknown_above": known_above, "budget": budget}),
            )),
        },
        other => Err(CommandResult::usage(format!("unknown vortex op {other:?}"))),
    }
}

// Re-exported for tests: deterministic set of file outputs of `plant`.
pub fn plant_file_names(stem: &str, vortices: usize) -> BTreeSet<String> {
    let mut names = BTreeSet::from([
        format!("{stem}.ne"),
        format!("{stem}.graph"),
        format!("{stem}.emb"),
        format!("{stem}.wallmodel"),
        format!("{stem}.cert"),
    ]);
    for i in 0..vortices {
        names.insert(format!("{stem}.vortex{i}"));
    }
    names
}
