//! `racg`: scripting front end for right-angled Coxeter group experiments.
//!
//! Documents go to stdout, diagnostics to stderr. Exit status is 0 on
//! success, 2 when a scan or validator found a witness, 1 on error.

use std::fmt;
use std::io::Read;
use std::ops::Range;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use racg_core::families;
use racg_core::geometry::{group_divergence, subgroup_divergence};
use racg_core::subgroup::{
    classify_collection, classify_parabolic, free_basis_check, join_busting_estimate, join_free_scan,
    malnormal_preconditions, malnormality_scan, reflection_scan, star_free_scan,
};
use racg_core::vkd::DiagramDoc;
use racg_core::{
    CayleyBall, DefiningGraph, DivergenceEstimate, DualVanKampenDiagram, FinGenSubgroup, JoinWitness, NormalForm,
    ParabolicSpec, Ratio, ReducingDiagram, SubgroupDoc, SubgroupTarget, Verdict, VertexSet, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "racg", version, about = "Right-angled Coxeter group toolkit")]
struct Cli {
    #[command(flatten)]
    input: Input,
    /// Output format; not every command renders every format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Graph document (`-` for stdin). Subgroup and diagram documents carry
    /// their graph and are accepted too. Defaults to stdin.
    #[arg(long, global = true, value_name = "FILE")]
    graph: Option<String>,
    /// Subgroup document `{"graph": ..., "generators": [...]}`.
    #[arg(long, global = true, value_name = "FILE")]
    subgroup: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a word.
    Reduce {
        #[arg(long)]
        word: String,
    },
    /// Cyclic decomposition and cyclic support.
    Csupp {
        #[arg(long)]
        word: String,
    },
    /// Order of an element: 1, 2 or infinite.
    Order {
        #[arg(long)]
        word: String,
    },
    /// Graph-level flags of a parabolic subgroup g·G_Λ·g⁻¹.
    ClassifyParabolic {
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "")]
        conjugator: String,
    },
    /// Flags of a collection; repeat --lambda, or separate sets with `;`.
    ClassifyCollection {
        #[arg(long, required = true)]
        lambda: Vec<String>,
    },
    /// Graph invariants.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Bounded searches on a subgroup.
    #[command(subcommand)]
    Scan(ScanCommand),
    /// Dual van Kampen diagrams.
    #[command(subcommand)]
    Vkd(VkdCommand),
    /// Cayley-graph ball statistics.
    Ball {
        #[arg(long)]
        radius: usize,
        /// Abort once the ball exceeds this many elements.
        #[arg(long)]
        cap: Option<usize>,
        /// Highlight G_Λ in dot output.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Subgroup divergence σ, or group divergence δ without a target.
    Divergence(DivergenceArgs),
    /// Emit a named example graph or subgroup.
    Family {
        #[arg(value_enum)]
        name: FamilyName,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        /// With omega: emit the subgroup H_d^m instead of the graph.
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Join decomposition and join/star containment of a vertex set.
    Joins {
        /// Defaults to every vertex.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Induced four-cycles, the four-cycle graph and the CFS test.
    Cfs,
    /// Rank of non-adjacent pairs.
    Rank {
        #[arg(long, num_args = 2, value_names = ["S", "T"])]
        pair: Option<Vec<String>>,
        /// Defaults to the number of vertices.
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Args)]
struct SubgroupArgs {
    /// Special subgroup G_Λ on the input graph.
    #[arg(long, conflicts_with = "gen")]
    lambda: Option<String>,
    /// Generator word; repeatable.
    #[arg(long)]
    gen: Vec<String>,
}

#[derive(Subcommand)]
enum ScanCommand {
    JoinFree {
        #[command(flatten)]
        h: SubgroupArgs,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    StarFree {
        #[command(flatten)]
        h: SubgroupArgs,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    Reflections {
        #[command(flatten)]
        h: SubgroupArgs,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Necessary conditions plus a conjugation search.
    Malnormal {
        #[command(flatten)]
        h: SubgroupArgs,
        /// T-depth of the necessary-condition scans; defaults to --lh.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 3)]
        lg: usize,
        #[arg(long, default_value_t = 3)]
        lh: usize,
    },
    JoinBusting {
        #[command(flatten)]
        h: SubgroupArgs,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Free-basis test: |h|_S = ratio·|h|_T for reduced T-words.
    FreeBasis {
        #[command(flatten)]
        h: SubgroupArgs,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        ratio: usize,
    },
}

#[derive(Subcommand)]
enum VkdCommand {
    /// Diagram for an identity word, or for a random one drawn from --seed.
    Build {
        #[arg(long, conflicts_with = "seed")]
        word: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Half-length of the random word.
        #[arg(long, default_value_t = 6)]
        len: usize,
    },
    Validate {
        /// Diagram document (`-` for stdin). Defaults to stdin.
        #[arg(long, value_name = "FILE")]
        diagram: Option<String>,
    },
    Comb {
        #[arg(long, value_name = "FILE")]
        diagram: Option<String>,
        /// Boundary range `i..j`.
        #[arg(long)]
        range: String,
    },
    /// Reducing diagram for h_1⋯h_k against its reduced product.
    Reduce {
        #[arg(long = "word", required = true)]
        words: Vec<String>,
    },
}

#[derive(Args)]
struct DivergenceArgs {
    #[arg(long)]
    radius: usize,
    /// Values of r: a list `1,2,3` or a range `1..=3`.
    #[arg(long)]
    r: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value = "1/1")]
    rho: String,
    #[command(flatten)]
    h: SubgroupArgs,
    #[arg(long, default_value = "")]
    conjugator: String,
    /// T-depth used for non-special subgroups.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Measure δ even when a subgroup is given.
    #[arg(long)]
    group: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Figure1,
    Omega,
    Gamma,
}

#[derive(Debug)]
struct CliError {
    field: &'static str,
    message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn err(field: &'static str, message: impl fmt::Display) -> CliError {
    CliError { field, message: message.to_string() }
}

/// Attaches a field name to a core error, unless it already names one.
fn at(field: &'static str) -> impl Fn(racg_core::Error) -> CliError {
    move |e| match e {
        racg_core::Error::Parameter { field, message } => CliError { field, message },
        other => err(field, other),
    }
}

type Outcome = Result<Output, CliError>;

struct Output {
    text: String,
    witness: bool,
}

impl Output {
    fn plain(text: String) -> Self {
        Output { text, witness: false }
    }

    fn json(value: &Value) -> Self {
        Output::plain(pretty(value))
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.witness {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn read_source(field: &'static str, path: Option<&str>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        None | Some("-") => std::io::stdin().read_to_string(&mut text).map_err(|e| err(field, e))?,
        Some(p) => return std::fs::read_to_string(p).map_err(|e| err(field, format!("{p}: {e}"))),
    };
    Ok(text)
}

impl Input {
    fn graph(&self) -> Result<DefiningGraph, CliError> {
        if self.graph.is_none() {
            if let Some(path) = &self.subgroup {
                let text = read_source("subgroup", Some(path))?;
                return DefiningGraph::load(&text).map_err(at("subgroup"));
            }
        }
        let text = read_source("graph", self.graph.as_deref())?;
        DefiningGraph::load(&text).map_err(at("graph"))
    }

    fn subgroup(&self, args: &SubgroupArgs) -> Result<(DefiningGraph, FinGenSubgroup), CliError> {
        if args.lambda.is_some() || !args.gen.is_empty() {
            if self.subgroup.is_some() {
                return Err(err("subgroup", "give a subgroup document or --lambda/--gen, not both"));
            }
            let graph = self.graph()?;
            let h = match &args.lambda {
                Some(l) => FinGenSubgroup::special(&graph, lambda(&graph, l)?).map_err(at("lambda"))?,
                None => FinGenSubgroup::from_words(&graph, &args.gen).map_err(at("gen"))?,
            };
            return Ok((graph, h));
        }
        let path = self.subgroup.as_deref().or(self.graph.as_deref());
        let text = read_source("subgroup", path)?;
        SubgroupDoc::load(&text).map_err(at("subgroup"))
    }

    /// A diagram document and the graph it lives over.
    fn diagram(&self, path: Option<&str>) -> Result<(DefiningGraph, DualVanKampenDiagram), CliError> {
        let text = read_source("diagram", path)?;
        let graph = if self.graph.is_some() || self.subgroup.is_some() {
            self.graph()?
        } else {
            DefiningGraph::load(&text).map_err(at("diagram"))?
        };
        let doc: DiagramDoc = serde_json::from_str(&text).map_err(|e| err("diagram", e))?;
        let d = doc.into_diagram(&graph).map_err(at("diagram"))?;
        Ok((graph, d))
    }
}

fn lambda(graph: &DefiningGraph, text: &str) -> Result<VertexSet, CliError> {
    let set = graph.vertex_set(text).map_err(at("lambda"))?;
    if set.is_empty() {
        return Err(err("lambda", "vertex set must be nonempty"));
    }
    Ok(set)
}

fn word(graph: &DefiningGraph, field: &'static str, text: &str) -> Result<Word, CliError> {
    graph.parse_word(text).map_err(at(field))
}

fn spell(graph: &DefiningGraph, g: &NormalForm) -> String {
    graph.format(g.letters())
}

fn only(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(err("format", format!("`{format}` is not available for `{command}`")))
    }
}

fn run(cli: &Cli) -> Outcome {
    let input = &cli.input;
    let format = cli.format;
    match &cli.command {
        Command::Reduce { word: w } => {
            only(format, &[Format::Json], "reduce")?;
            let graph = input.graph()?;
            let nf = graph.normalize(word(&graph, "word", w)?.letters());
            Ok(Output::json(&json!({
                "word": w,
                "normal_form": spell(&graph, &nf),
                "length": nf.len(),
            })))
        }
        Command::Csupp { word: w } => {
            only(format, &[Format::Json], "csupp")?;
            let graph = input.graph()?;
            let nf = graph.normalize(word(&graph, "word", w)?.letters());
            let dec = graph.cyclic_decompose(&nf);
            Ok(Output::json(&json!({
                "element": spell(&graph, &nf),
                "conjugator": spell(&graph, &dec.conjugator),
                "core": spell(&graph, &dec.core),
                "csupp": graph.set_names(graph.csupp(&nf)),
                "finite_order": graph.is_finite_order(&nf),
            })))
        }
        Command::Order { word: w } => {
            only(format, &[Format::Json], "order")?;
            let graph = input.graph()?;
            let nf = graph.normalize(word(&graph, "word", w)?.letters());
            let order = if nf.is_identity() {
                json!(1)
            } else if graph.is_finite_order(&nf) {
                json!(2)
            } else {
                json!("infinite")
            };
            Ok(Output::json(&json!({ "element": spell(&graph, &nf), "order": order })))
        }
        Command::ClassifyParabolic { lambda: l, conjugator } => {
            only(format, &[Format::Json], "classify-parabolic")?;
            let graph = input.graph()?;
            let spec = ParabolicSpec {
                lambda: lambda(&graph, l)?,
                conjugator: graph.normalize(word(&graph, "conjugator", conjugator)?.letters()),
            };
            let flags = classify_parabolic(&graph, &spec).map_err(at("lambda"))?;
            let mut v = serde_json::to_value(flags).expect("flags serialize");
            v["lambda"] = json!(graph.set_names(spec.lambda));
            v["conjugator"] = json!(spell(&graph, &spec.conjugator));
            Ok(Output::json(&v))
        }
        Command::ClassifyCollection { lambda: ls } => {
            only(format, &[Format::Json], "classify-collection")?;
            let graph = input.graph()?;
            let specs = ls
                .iter()
                .flat_map(|l| l.split(';'))
                .map(|l| lambda(&graph, l).map(ParabolicSpec::special))
                .collect::<Result<Vec<_>, _>>()?;
            let flags = classify_collection(&graph, &specs).map_err(at("lambda"))?;
            let mut v = serde_json::to_value(flags).expect("flags serialize");
            v["collection"] = json!(specs.iter().map(|s| graph.set_names(s.lambda)).collect::<Vec<_>>());
            Ok(Output::json(&v))
        }
        Command::Graph(cmd) => run_graph(input, format, cmd),
        Command::Scan(cmd) => run_scan(input, format, cmd),
        Command::Vkd(cmd) => run_vkd(input, format, cmd),
        Command::Ball { radius, cap, lambda: l } => {
            only(format, &[Format::Json, Format::Csv, Format::Dot], "ball")?;
            let graph = input.graph()?;
            let ball = CayleyBall::new(&graph, *radius, *cap).map_err(at("cap"))?;
            let mut spheres = vec![0usize; radius + 1];
            for g in ball.elements() {
                spheres[g.len()] += 1;
            }
            match format {
                Format::Dot => {
                    let highlight: Vec<usize> = match l {
                        Some(l) => {
                            let set = lambda(&graph, l)?;
                            (0..ball.len()).filter(|&i| ball.element(i).support().is_subset(set)).collect()
                        }
                        None => Vec::new(),
                    };
                    Ok(Output::plain(ball.to_dot(&graph, &highlight)))
                }
                Format::Csv => {
                    let mut out = String::from("k,sphere,ball\n");
                    let mut total = 0;
                    for (k, s) in spheres.iter().enumerate() {
                        total += s;
                        out.push_str(&format!("{k},{s},{total}\n"));
                    }
                    Ok(Output::plain(out))
                }
                Format::Json => Ok(Output::json(&json!({
                    "radius": radius,
                    "size": ball.len(),
                    "spheres": spheres,
                    "edges": ball.edges().count(),
                }))),
            }
        }
        Command::Divergence(args) => run_divergence(input, format, args),
        Command::Family { name, d, p, m } => run_family(format, *name, *d, *p, *m),
    }
}

fn run_graph(input: &Input, format: Format, cmd: &GraphCommand) -> Outcome {
    let graph = input.graph()?;
    match cmd {
        GraphCommand::Joins { lambda: l } => {
            only(format, &[Format::Json], "graph joins")?;
            let set = match l {
                Some(l) => lambda(&graph, l)?,
                None => graph.all(),
            };
            let names = |s: VertexSet| graph.set_names(s);
            let split = graph.join_decomposition(set).map_err(at("lambda"))?;
            let witness = graph.contained_in_join(set).map_err(at("lambda"))?.map(|w| match w {
                JoinWitness::Split(a, b) => json!({ "kind": "split", "parts": [names(a), names(b)] }),
                JoinWitness::Cone(v) => json!({ "kind": "cone", "vertex": graph.name(v) }),
            });
            let star = graph.contained_in_star(set).map_err(at("lambda"))?;
            Ok(Output::json(&json!({
                "set": names(set),
                "join_decomposition": split.map(|(a, b)| [names(a), names(b)]),
                "contained_in_join": witness,
                "contained_in_star": star.map(|v| graph.name(v)),
            })))
        }
        GraphCommand::Cfs => {
            only(format, &[Format::Json, Format::Dot], "graph cfs")?;
            let g4 = graph.four_cycle_graph();
            if format == Format::Dot {
                return Ok(Output::plain(g4.to_dot(&graph)));
            }
            let pair = |(a, b): (racg_core::Vertex, racg_core::Vertex)| [graph.name(a), graph.name(b)];
            Ok(Output::json(&json!({
                "cfs": graph.is_cfs(),
                "four_cycles": g4.cycles.iter().map(|c| c.diagonals.map(pair)).collect::<Vec<_>>(),
                "edges": g4.edges.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
                "components": g4
                    .components
                    .iter()
                    .zip(&g4.supports)
                    .map(|(c, &s)| json!({ "cycles": c, "support": graph.set_names(s) }))
                    .collect::<Vec<_>>(),
            })))
        }
        GraphCommand::Rank { pair, cap } => {
            only(format, &[Format::Json, Format::Csv], "graph rank")?;
            let cap = cap.unwrap_or(graph.len());
            let pairs = match pair {
                Some(p) => vec![(graph.vertex(&p[0]).map_err(at("pair"))?, graph.vertex(&p[1]).map_err(at("pair"))?)],
                None => graph
                    .vertices()
                    .flat_map(|s| graph.vertices().filter(move |&t| t > s).map(move |t| (s, t)))
                    .filter(|&(s, t)| !graph.adjacent(s, t))
                    .collect(),
            };
            let mut rows = Vec::new();
            for (s, t) in pairs {
                let r = graph.rank_of_pair(s, t, cap).map_err(at("pair"))?;
                rows.push((graph.name(s), graph.name(t), r));
            }
            if format == Format::Csv {
                let mut out = String::from("s,t,rank,at_cap\n");
                for (s, t, r) in &rows {
                    out.push_str(&format!("{s},{t},{},{}\n", r.rank, r.at_cap));
                }
                return Ok(Output::plain(out));
            }
            let row = |(s, t, r): &(&str, &str, racg_core::graph::PairRank)| {
                json!({ "pair": [s, t], "rank": r.rank, "at_cap": r.at_cap })
            };
            let v = match (pair, rows.as_slice()) {
                (Some(_), [one]) => {
                    let mut v = row(one);
                    v["cap"] = json!(cap);
                    v
                }
                _ => json!({ "cap": cap, "pairs": rows.iter().map(row).collect::<Vec<_>>() }),
            };
            Ok(Output::json(&v))
        }
    }
}

fn run_scan(input: &Input, format: Format, cmd: &ScanCommand) -> Outcome {
    only(format, &[Format::Json], "scan")?;
    let depth_ok = |d: usize| if d == 0 { Err(err("depth", "must be at least 1")) } else { Ok(d) };
    let report = |graph: &DefiningGraph, r: racg_core::ScanReport| Output {
        text: pretty(&r.to_json(graph)),
        witness: r.is_violation(),
    };
    match cmd {
        ScanCommand::JoinFree { h, depth } => {
            let (graph, h) = input.subgroup(h)?;
            Ok(report(&graph, join_free_scan(&graph, &h, depth_ok(*depth)?)))
        }
        ScanCommand::StarFree { h, depth } => {
            let (graph, h) = input.subgroup(h)?;
            Ok(report(&graph, star_free_scan(&graph, &h, depth_ok(*depth)?)))
        }
        ScanCommand::Reflections { h, depth } => {
            let (graph, h) = input.subgroup(h)?;
            Ok(report(&graph, reflection_scan(&graph, &h, depth_ok(*depth)?)))
        }
        ScanCommand::Malnormal { h, depth, lg, lh } => {
            let (graph, h) = input.subgroup(h)?;
            let pre = malnormal_preconditions(&graph, &h, depth_ok(depth.unwrap_or(*lh))?);
            let scan = malnormality_scan(&graph, &h, *lg, *lh).map_err(at("lh"))?;
            let witness = pre.verdict() == Verdict::CertifiedNegative || scan.is_violation();
            Ok(Output {
                text: pretty(&json!({
                    "preconditions": pre.to_json(&graph),
                    "conjugation": scan.to_json(&graph),
                })),
                witness,
            })
        }
        ScanCommand::JoinBusting { h, depth } => {
            let (graph, h) = input.subgroup(h)?;
            let r = join_busting_estimate(&graph, &h, *depth).map_err(at("depth"))?;
            Ok(Output::json(&r.to_json(&graph)))
        }
        ScanCommand::FreeBasis { h, depth, ratio } => {
            let (graph, h) = input.subgroup(h)?;
            let r = free_basis_check(&graph, &h, *depth, *ratio).map_err(at("depth"))?;
            Ok(Output { text: pretty(&r.to_json(&graph)), witness: !r.passed() })
        }
    }
}

/// Diagram JSON with the graph attached, so it loads on its own.
fn diagram_doc(graph: &DefiningGraph, d: &DualVanKampenDiagram, mut v: Value) -> Value {
    if v.is_null() {
        v = d.to_json(graph);
    }
    v["graph"] = serde_json::to_value(graph.to_doc()).expect("graph documents serialize");
    v
}

fn parse_range(text: &str) -> Result<Range<usize>, CliError> {
    let bad = || err("range", format!("expected i..j, got {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    Ok(a.trim().parse().map_err(|_| bad())?..b.trim().parse().map_err(|_| bad())?)
}

/// `u · reverse(u)` for a random word `u`, shuffled by commuting swaps.
fn random_identity_word(graph: &DefiningGraph, seed: u64, len: usize) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = graph.len();
    let u: Vec<_> = (0..len).map(|_| racg_core::Vertex::from_index(rng.gen_range(0..n))).collect();
    let mut w: Vec<_> = u.iter().chain(u.iter().rev()).copied().collect();
    for _ in 0..4 * w.len() {
        if w.len() < 2 {
            break;
        }
        let i = rng.gen_range(0..w.len() - 1);
        if graph.adjacent(w[i], w[i + 1]) {
            w.swap(i, i + 1);
        }
    }
    Word(w)
}

fn run_vkd(input: &Input, format: Format, cmd: &VkdCommand) -> Outcome {
    match cmd {
        VkdCommand::Build { word: w, seed, len } => {
            only(format, &[Format::Json, Format::Dot], "vkd build")?;
            let graph = input.graph()?;
            let w = match (w, seed) {
                (Some(w), _) => word(&graph, "word", w)?,
                (None, Some(seed)) => random_identity_word(&graph, *seed, *len),
                (None, None) => return Err(err("word", "give --word or --seed")),
            };
            let d = DualVanKampenDiagram::build(&graph, &w).map_err(at("word"))?;
            if format == Format::Dot {
                return Ok(Output::plain(d.to_dot(&graph)));
            }
            let mut v = diagram_doc(&graph, &d, Value::Null);
            v["word"] = json!(graph.format(w.letters()));
            Ok(Output::json(&v))
        }
        VkdCommand::Validate { diagram } => {
            only(format, &[Format::Json], "vkd validate")?;
            let (graph, d) = input.diagram(diagram.as_deref())?;
            Ok(match d.validate(&graph) {
                Ok(()) => Output::json(&json!({ "valid": true, "violation": null })),
                Err(v) => Output {
                    text: pretty(&json!({
                        "valid": false,
                        "violation": { "kind": v.kind(), "detail": v.to_string() },
                    })),
                    witness: true,
                },
            })
        }
        VkdCommand::Comb { diagram, range } => {
            only(format, &[Format::Json, Format::Dot], "vkd comb")?;
            let (graph, d) = input.diagram(diagram.as_deref())?;
            d.validate(&graph).map_err(|v| err("diagram", v))?;
            let range = parse_range(range)?;
            let combed = d.comb(range.clone()).map_err(at("range"))?;
            if format == Format::Dot {
                return Ok(Output::plain(combed.diagram.to_dot(&graph)));
            }
            let mut v = diagram_doc(&graph, &combed.diagram, Value::Null);
            v["combed"] = json!({
                "range": [range.start, range.end],
                "word": graph.format(combed.word.letters()),
                "swaps": combed.swaps,
                "rebuilt": combed.rebuilt,
            });
            Ok(Output::json(&v))
        }
        VkdCommand::Reduce { words } => {
            only(format, &[Format::Json, Format::Dot], "vkd reduce")?;
            let graph = input.graph()?;
            let hs = words.iter().map(|w| word(&graph, "word", w)).collect::<Result<Vec<_>, _>>()?;
            let all: Vec<_> = hs.iter().flat_map(|h| h.letters().iter().copied()).collect();
            let w = graph.normalize(&all);
            let rd = ReducingDiagram::build(&graph, &hs, &w).map_err(at("word"))?;
            if format == Format::Dot {
                return Ok(Output::plain(rd.diagram.to_dot(&graph)));
            }
            let mut v = diagram_doc(&graph, &rd.diagram, rd.to_json(&graph));
            v["reduced"] = json!(spell(&graph, &w));
            v["contributing"] = json!(graph.format(&rd.contributing_letters()));
            Ok(Output::json(&v))
        }
    }
}

fn parse_r(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || err("r", format!("expected a list like 1,2,3 or a range like 1..=3, got {text:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let values: Vec<usize> = if let Some((a, b)) = text.split_once("..=") {
        (num(a)?..=num(b)?).collect()
    } else if let Some((a, b)) = text.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        text.split(',').map(num).collect::<Result<_, _>>()?
    };
    if values.is_empty() || values.contains(&0) {
        return Err(err("r", "values must be positive and the list nonempty"));
    }
    Ok(values)
}

fn run_divergence(input: &Input, format: Format, args: &DivergenceArgs) -> Outcome {
    only(format, &[Format::Json, Format::Csv], "divergence")?;
    let rho: Ratio = args.rho.parse().map_err(at("rho"))?;
    let rs = parse_r(&args.r)?;
    if args.n == 0 {
        return Err(err("n", "must be positive"));
    }
    let has_target = args.h.lambda.is_some() || !args.h.gen.is_empty() || input.subgroup.is_some();
    let (graph, target) = if has_target && !args.group {
        let (graph, h) = input.subgroup(&args.h)?;
        let conjugator = graph.normalize(word(&graph, "conjugator", &args.conjugator)?.letters());
        let target = match h.as_special() {
            Some(lambda) => SubgroupTarget::Parabolic(ParabolicSpec { lambda, conjugator }),
            None if conjugator.is_identity() => SubgroupTarget::FinGen { subgroup: h, depth: args.depth },
            None => return Err(err("conjugator", "only parabolic targets take a conjugator")),
        };
        (graph, Some(target))
    } else {
        (input.graph()?, None)
    };
    let estimates = rs
        .iter()
        .map(|&r| match &target {
            Some(t) => subgroup_divergence(&graph, t, args.n, rho, r, args.radius),
            None => group_divergence(&graph, rho, r, args.radius),
        })
        .collect::<Result<Vec<DivergenceEstimate>, _>>()
        .map_err(at("radius"))?;
    if format == Format::Csv {
        let mut out = format!("{}\n", DivergenceEstimate::CSV_HEADER);
        for e in &estimates {
            out.push_str(&e.csv_row(&graph));
            out.push('\n');
        }
        return Ok(Output::plain(out));
    }
    Ok(Output::json(&json!({
        "kind": if target.is_some() { "subgroup" } else { "group" },
        "estimates": estimates.iter().map(|e| e.to_json(&graph)).collect::<Vec<_>>(),
    })))
}

fn run_family(format: Format, name: FamilyName, d: Option<usize>, p: Option<usize>, m: Option<usize>) -> Outcome {
    only(format, &[Format::Json, Format::Dot], "family")?;
    let need = |v: Option<usize>, field: &'static str| v.ok_or_else(|| err(field, "required for this family"));
    let (graph, h) = match name {
        FamilyName::Figure1 => {
            let (g, h) = families::figure1();
            (g, Some(h))
        }
        FamilyName::Omega => {
            let d = need(d, "d")?;
            let g = families::omega(d).map_err(at("d"))?;
            let h = m.map(|m| families::named_subgroup(&g, d, m).map_err(at("m"))).transpose()?;
            (g, h)
        }
        FamilyName::Gamma => (families::gamma(need(p, "p")?).map_err(at("p"))?, None),
    };
    if format == Format::Dot {
        return Ok(Output::plain(graph.to_dot()));
    }
    let v = match h {
        Some(h) => serde_json::to_value(SubgroupDoc::new(&graph, &h)),
        None => serde_json::to_value(graph.to_doc()),
    }
    .expect("documents serialize");
    Ok(Output::json(&v))
}
