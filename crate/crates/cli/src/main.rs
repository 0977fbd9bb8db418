use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use moser_core::catalog::{group_listing, parse_graph_spec, GraphInstance};
use moser_core::kernel_graph::{
    build_kernel_graph, cayley_omega, check_omega_lemma, mainomega_bound,
};
use moser_core::mader::{mader_cycles, verify_cycle_system};
use moser_core::moser::{
    all_kernels, all_molecules, check_kernel_lemmas_with, kernel, mu_brute, mu_flow, MoserInstance,
};
use moser_core::verify::{run_sweep, Family, Mode, RecordLevel, SweepOptions, SweepSpec, Theorem};
use moser_core::{Error, TransitivityCertificate};

#[derive(Parser)]
#[command(
    name = "moser",
    version,
    about = "Moser sets, kernels and sumset inequality sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a group or graph family and check theorem instances.
    Verify(VerifyArgs),
    /// Minimum boundary μ(v) of Moser sets at a vertex.
    Mu(MuArgs),
    /// Kernels K_v (least molecules) and their atoms.
    Kernel(GraphArgs),
    /// The kernel-graph Ω(v) = Γ(v) ∩ K_v.
    KernelGraph(KernelGraphArgs),
    /// Every molecule at a vertex.
    Molecules(VertexArgs),
    /// Cycles through a vertex meeting only there, one per out-neighbour.
    Mader(MaderArgs),
    /// Kernel distinctness, equivariance and containment checks.
    Lemmas(GraphArgs),
    /// Group catalogue.
    Groups {
        #[command(subcommand)]
        command: GroupsCommand,
    },
}

#[derive(Subcommand)]
enum GroupsCommand {
    /// List the built-in groups with their orders.
    List(OutputArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Theorems to check: scherk, kemperman, main (or main-finite),
    /// mainomega, lemmas, mader, submodular, boundary-inclusion.
    #[arg(required = true, num_args = 1.., value_parser = parse_theorem)]
    theorems: Vec<Theorem>,
    /// Group spec (Z6, D4, Q8, S4, Z2xZ4, table:PATH) or family (sumset, cyclic:N).
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    group: Option<String>,
    /// Graph spec (circulant:n:S, cayley:G:S, kneser:n:k, edges:n:..., file:PATH)
    /// or family (circulants:N, vt-catalogue:N, cayley-all:G, random-cayley:C:S,
    /// reflexive-all:N, random-reflexive:C:S).
    #[arg(long)]
    graph: Option<String>,
    /// Enumerate every instance (the default).
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Random instances per job.
    #[arg(long, requires = "seed")]
    samples: Option<usize>,
    #[arg(long, requires = "samples")]
    seed: Option<u64>,
    /// Which records to keep in the report.
    #[arg(long, default_value = "tight", value_parser = parse_level)]
    records: RecordLevel,
    /// Add loops to every graph first.
    #[arg(long)]
    reflexive_closure: bool,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Skip the size caps and instance budget.
    #[arg(long)]
    force: bool,
    /// Include wall-clock runtime in the report summary.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    graph: String,
    /// Restrict to one vertex.
    #[arg(long)]
    vertex: Option<usize>,
    #[arg(long)]
    reflexive_closure: bool,
    /// Skip the vertex-transitivity certificate. Automorphism checks are then
    /// vacuous and other checks may fail on non-transitive graphs.
    #[arg(long)]
    assume_transitive: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VertexArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    vertex: usize,
    #[arg(long)]
    reflexive_closure: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Flow,
    Brute,
    Both,
}

#[derive(Args)]
struct MuArgs {
    #[command(flatten)]
    target: VertexArgs,
    #[arg(long, value_enum, default_value = "flow")]
    method: Method,
}

#[derive(Args)]
struct KernelGraphArgs {
    #[command(flatten)]
    target: GraphArgs,
    /// Also check the Ω lemmas, the μ lower bound and, for Cayley graphs,
    /// Ω = Cay(G, S ∩ K_1).
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct MaderArgs {
    #[command(flatten)]
    target: GraphArgs,
    /// Remove loops before building cycles.
    #[arg(long)]
    strip_loops: bool,
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_level(s: &str) -> Result<RecordLevel, String> {
    s.parse()
}

/// Command output plus whether it found a violation.
struct Output {
    json: Value,
    text: String,
    csv: Option<String>,
    violation: bool,
}

fn emit(out: &Output, args: &OutputArgs) -> Result<(), Error> {
    let body = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("json");
            s.push('\n');
            s
        }
        Format::Text => out.text.clone(),
        Format::Csv => match &out.csv {
            Some(csv) => csv.clone(),
            None => {
                return Err(Error::InvalidSpec {
                    spec: "csv".into(),
                    reason: "csv output is only available for verify and groups list".into(),
                })
            }
        },
    };
    match &args.out {
        Some(path) => fs::write(path, body)?,
        None => {
            // a closed pipe (e.g. `| head`) is not an error
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn load_graph(spec: &str, reflexive_closure: bool) -> Result<GraphInstance, Error> {
    let inst = parse_graph_spec(spec)?;
    if reflexive_closure {
        inst.reflexive_closure()
    } else {
        Ok(inst)
    }
}

fn certificate(inst: &GraphInstance, assume: bool) -> Result<TransitivityCertificate, Error> {
    if assume {
        Ok(TransitivityCertificate::asserted())
    } else {
        inst.certify()
    }
}

fn vertices(inst: &GraphInstance, vertex: Option<usize>) -> Result<Vec<usize>, Error> {
    match vertex {
        Some(v) => {
            inst.graph.check_vertex(v)?;
            Ok(vec![v])
        }
        None => Ok((0..inst.graph.vertex_count()).collect()),
    }
}

fn verify(args: &VerifyArgs) -> Result<Output, Error> {
    let family = match (&args.group, &args.graph) {
        (Some(g), _) => Family::Groups(g.clone()),
        (None, Some(g)) => Family::Graphs(g.clone()),
        (None, None) => unreachable!("clap requires one of --group/--graph"),
    };
    let mode = match (args.samples, args.seed) {
        (Some(count), Some(seed)) => Mode::Sampled { count, seed },
        _ => Mode::Exhaustive,
    };
    let mut spec = SweepSpec::new(family, mode, args.theorems.clone()).with_records(args.records);
    spec.reflexive_closure = args.reflexive_closure;
    let options = SweepOptions {
        jobs: args.jobs,
        force: args.force,
        timing: args.timing,
        ..SweepOptions::default()
    };
    let started = Instant::now();
    let report = run_sweep(&spec, &options)?;
    let t = &report.summary.total;
    eprintln!(
        "{} instances, {} violations, {} tight in {:.2}s",
        t.instances,
        t.violations,
        t.tight,
        started.elapsed().as_secs_f64()
    );
    Ok(Output {
        json: serde_json::to_value(&report).expect("report serializes"),
        text: report.to_text(),
        csv: Some(report.to_csv()),
        violation: !report.is_clean(),
    })
}

fn mu(args: &MuArgs) -> Result<Output, Error> {
    let t = &args.target;
    let inst = load_graph(&t.graph, t.reflexive_closure)?;
    let mi = MoserInstance::new(&inst.graph, t.vertex)?;
    let (json, text, violation) = match args.method {
        Method::Flow | Method::Brute => {
            let cert = match args.method {
                Method::Flow => mu_flow(&mi)?,
                _ => mu_brute(&mi)?,
            };
            let text = format!(
                "mu({}) = {}  witness {}  boundary {}\n",
                t.vertex, cert.value, cert.witness.members, cert.cut
            );
            (serde_json::to_value(&cert).expect("json"), text, false)
        }
        Method::Both => {
            let flow = mu_flow(&mi)?;
            let brute = mu_brute(&mi)?;
            let agree = flow.value == brute.value && flow.witness.members == brute.witness.members;
            let text = format!(
                "mu({}) flow {} brute {}  kernel flow {} brute {}  {}\n",
                t.vertex,
                flow.value,
                brute.value,
                flow.witness.members,
                brute.witness.members,
                if agree { "agree" } else { "DISAGREE" }
            );
            (
                json!({ "flow": flow, "brute": brute, "agree": agree }),
                text,
                !agree,
            )
        }
    };
    Ok(Output {
        json,
        text,
        csv: None,
        violation,
    })
}

fn kernels_cmd(args: &GraphArgs) -> Result<Output, Error> {
    let inst = load_graph(&args.graph, args.reflexive_closure)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for v in vertices(&inst, args.vertex)? {
        let k = kernel(&MoserInstance::new(&inst.graph, v)?)?;
        text.push_str(&format!(
            "K_{v} = {}  atom {}  mu {}\n",
            k.members(),
            k.atom,
            k.molecule.boundary_size
        ));
        rows.push(serde_json::to_value(&k).expect("json"));
    }
    Ok(Output {
        json: Value::Array(rows),
        text,
        csv: None,
        violation: false,
    })
}

fn kernel_graph_cmd(args: &KernelGraphArgs) -> Result<Output, Error> {
    let t = &args.target;
    let inst = load_graph(&t.graph, t.reflexive_closure)?;
    let cert = certificate(&inst, t.assume_transitive)?;
    let kg = build_kernel_graph(&inst.graph, Some(&cert))?;
    let mut text = String::new();
    let mut omega = Vec::new();
    for v in vertices(&inst, t.vertex)? {
        text.push_str(&format!("Omega({v}) = {}\n", kg.omega().out_set(v)));
        omega.push(json!({ "v": v, "omega": kg.omega().out_set(v) }));
    }
    let mut json = json!({ "omega": omega });
    let mut violation = false;
    if args.check {
        let lemmas = check_omega_lemma(&kg);
        let bounds: Vec<_> = vertices(&inst, t.vertex)?
            .into_iter()
            .map(|v| mainomega_bound(&kg, v))
            .collect();
        let cayley = match &inst.cayley {
            Some(cay) => Some(&cayley_omega(&kg, cay)? == kg.omega()),
            None => None,
        };
        violation = !lemmas.holds() || bounds.iter().any(|b| !b.holds) || cayley == Some(false);
        text.push_str(&format!(
            "omega lemmas: {} checks, {} violations\n",
            lemmas.checks,
            lemmas.violations.len()
        ));
        for v in &lemmas.violations {
            text.push_str(&format!(
                "  {} at {:?}: {}\n",
                v.lemma, v.vertices, v.detail
            ));
        }
        for b in &bounds {
            text.push_str(&format!(
                "mu({}) = {} >= {}{}\n",
                b.v,
                b.mu,
                b.rhs,
                if b.holds {
                    if b.tight {
                        "  tight"
                    } else {
                        ""
                    }
                } else {
                    "  VIOLATED"
                }
            ));
        }
        if let Some(ok) = cayley {
            text.push_str(&format!("omega = Cay(G, S ∩ K_1): {ok}\n"));
        }
        json["lemmas"] = serde_json::to_value(&lemmas).expect("json");
        json["bounds"] = serde_json::to_value(&bounds).expect("json");
        json["cayley_omega"] = json!(cayley);
    }
    Ok(Output {
        json,
        text,
        csv: None,
        violation,
    })
}

fn molecules_cmd(args: &VertexArgs) -> Result<Output, Error> {
    let inst = load_graph(&args.graph, args.reflexive_closure)?;
    let molecules = all_molecules(&MoserInstance::new(&inst.graph, args.vertex)?)?;
    let text = molecules
        .iter()
        .map(|m| format!("{}  boundary {}\n", m.members, m.boundary_size))
        .collect();
    Ok(Output {
        json: serde_json::to_value(&molecules).expect("json"),
        text,
        csv: None,
        violation: false,
    })
}

fn mader_cmd(args: &MaderArgs) -> Result<Output, Error> {
    let t = &args.target;
    let mut inst = load_graph(&t.graph, t.reflexive_closure)?;
    if args.strip_loops {
        inst = inst.without_loops()?;
    } else if !inst.graph.is_loopless() {
        return Err(Error::InvalidSpec {
            spec: t.graph.clone(),
            reason: "graph has loops; pass --strip-loops".into(),
        });
    }
    let cert = certificate(&inst, t.assume_transitive)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut violation = false;
    for v in vertices(&inst, t.vertex)? {
        let cs = mader_cycles(&inst.graph, Some(&cert), v)?;
        let verdict = verify_cycle_system(&inst.graph, &cs);
        violation |= verdict.is_err();
        for c in &cs.cycles {
            let path: Vec<String> = c.iter().map(usize::to_string).collect();
            text.push_str(&format!("{v}: {}\n", path.join(" -> ")));
        }
        if let Err(e) = &verdict {
            text.push_str(&format!("{v}: INVALID {e}\n"));
        }
        rows.push(json!({ "v": v, "cycles": cs.cycles, "valid": verdict.is_ok(), "error": verdict.err() }));
    }
    Ok(Output {
        json: Value::Array(rows),
        text,
        csv: None,
        violation,
    })
}

fn lemmas_cmd(args: &GraphArgs) -> Result<Output, Error> {
    let inst = load_graph(&args.graph, args.reflexive_closure)?;
    let cert = certificate(&inst, args.assume_transitive)?;
    let kernels = all_kernels(&inst.graph)?;
    let report = check_kernel_lemmas_with(&inst.graph, &cert, &kernels);
    let mut text = format!(
        "{} checks, {} violations\n",
        report.checks,
        report.violations.len()
    );
    for v in &report.violations {
        text.push_str(&format!(
            "  {} at {:?}: {}\n",
            v.lemma, v.vertices, v.detail
        ));
    }
    Ok(Output {
        json: serde_json::to_value(&report).expect("json"),
        text,
        csv: None,
        violation: !report.holds(),
    })
}

fn groups_list() -> Output {
    let rows = group_listing();
    let json = Value::Array(
        rows.iter()
            .map(|(spec, order, abelian)| json!({ "spec": spec, "order": order, "abelian": abelian }))
            .collect(),
    );
    let mut text = String::new();
    let mut csv = String::from("spec,order,abelian\n");
    for (spec, order, abelian) in &rows {
        text.push_str(&format!(
            "{spec:<14} order {order:>3}{}\n",
            if *abelian { "  abelian" } else { "" }
        ));
        csv.push_str(&format!("{spec},{order},{abelian}\n"));
    }
    Output {
        json,
        text,
        csv: Some(csv),
        violation: false,
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let (out, args) = match &cli.command {
        Command::Verify(a) => (verify(a)?, &a.output),
        Command::Mu(a) => (mu(a)?, &a.target.output),
        Command::Kernel(a) => (kernels_cmd(a)?, &a.output),
        Command::KernelGraph(a) => (kernel_graph_cmd(a)?, &a.target.output),
        Command::Molecules(a) => (molecules_cmd(a)?, &a.output),
        Command::Mader(a) => (mader_cmd(a)?, &a.target.output),
        Command::Lemmas(a) => (lemmas_cmd(a)?, &a.output),
        Command::Groups {
            command: GroupsCommand::List(a),
        } => (groups_list(), a),
    };
    emit(&out, args)?;
    Ok(out.violation)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
