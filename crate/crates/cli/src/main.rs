//! `pgarc`: verify arcs in PG(2,q), compute their stabilizers and codes,
//! and run classification searches.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 search budget exceeded.

mod io;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pgarc::codes::{CodeSummary, LinearCode};
use pgarc::search::{Checkpoint, FieldInfo};
use pgarc::{
    arcfile::arc_list_text, brute_force_classify, classify_arcs, find_max_complete,
    find_min_complete, orbit_union_search, seeded_extend, ArcSet, Budget, Canonizer, FieldSpec,
    Plane, PointId, SearchConfig, SearchError, SearchMode, SearchReport,
};

/// Largest q searched without `--extended`.
const DESK_SCALE_Q: u32 = 8;

pub enum Fail {
    Verify(String),
    Usage(String),
    Budget(Box<SearchReport>),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Verify(_) => 1,
            Fail::Usage(_) => 2,
            Fail::Budget(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "pgarc", version, about = "Arcs in the projective plane PG(2,q)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// GF(16) with α⁴ + α³ + 1 = 0.
    #[value(name = "gf16-paper")]
    Gf16Paper,
}

#[derive(Args, Clone, Default)]
struct FieldArgs {
    #[arg(long, value_enum, conflicts_with_all = ["q", "p", "e", "poly"])]
    preset: Option<Preset>,
    /// Field order; picks the smallest primitive polynomial.
    #[arg(long, conflicts_with_all = ["p", "e", "poly"])]
    q: Option<u32>,
    #[arg(long, requires_all = ["e", "poly"])]
    p: Option<u32>,
    #[arg(long, requires_all = ["p", "poly"])]
    e: Option<u32>,
    /// Defining polynomial as an integer in base p, leading term included.
    #[arg(long, requires_all = ["p", "e"])]
    poly: Option<u64>,
}

impl FieldArgs {
    fn spec(&self) -> Result<Option<FieldSpec>, Fail> {
        let bad = |e: pgarc::FieldError| Fail::Usage(e.to_string());
        Ok(match (self.preset, self.q, self.p, self.e, self.poly) {
            (Some(Preset::Gf16Paper), ..) => Some(FieldSpec::gf16_paper()),
            (None, Some(q), ..) => Some(FieldSpec::with_order(q).map_err(bad)?),
            (None, None, Some(p), Some(e), Some(poly)) => Some(FieldSpec::new(p, e, poly).map_err(bad)?),
            _ => None,
        })
    }

    fn require(&self) -> Result<FieldSpec, Fail> {
        self.spec()?
            .ok_or_else(|| Fail::Usage("give --preset, --q, or --p/--e/--poly".into()))
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Out {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Clone)]
struct Run {
    /// Node budget (canonized candidate sets).
    #[arg(long, env = "PGARC_BUDGET", default_value_t = 50_000_000)]
    budget: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Allow exhaustive searches above q = 8.
    #[arg(long)]
    extended: bool,
}

impl Run {
    fn budget(&self) -> Budget {
        Budget {
            max_nodes: self.budget,
            max_time: self.time_limit.map(Duration::from_secs),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Classify,
    FindMax,
    FindMin,
    SeededExtend,
    OrbitUnion,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Classify => SearchMode::Classify,
            ModeArg::FindMax => SearchMode::FindMax,
            ModeArg::FindMin => SearchMode::FindMin,
            ModeArg::SeededExtend => SearchMode::SeededExtend,
            ModeArg::OrbitUnion => SearchMode::OrbitUnion,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a file holds a complete (n,r)-arc.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: u32,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Number of lines meeting the set in each possible number of points.
    Secants {
        file: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Collineations fixing the set.
    Stabilizer {
        file: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Largest subset with no three collinear points.
    Max2arc {
        file: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Exhaustive isomorph-free search.
    Search {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        min: usize,
        /// Defaults to (r-1)q+r+1.
        #[arg(long)]
        max: Option<usize>,
        /// Seed arcs, one per line after the field header.
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Collineations generating the group for orbit unions.
        #[arg(long)]
        generators: Option<PathBuf>,
        #[arg(long, default_value_t = pgarc::search::DEFAULT_MAX_ORBITS)]
        max_orbits: usize,
        /// Written after each completed level.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        resume: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        run: Run,
        #[command(flatten)]
        out: Out,
    },
    /// Write one representative per class of k-arcs for k in a range.
    Seeds {
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: usize,
        /// Output file; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        run: Run,
    },
    /// Point orbits of the group generated by the given collineations.
    Orbits {
        #[arg(long)]
        generators: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: Out,
    },
    /// The [n,3] code whose generator columns are the points.
    Tocode {
        file: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Brute-force classification by explicit orbits, for small q.
    Oracle {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        max: usize,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        run: Run,
        #[command(flatten)]
        out: Out,
    },
}

fn emit<T: Serialize>(value: &T, out: &Out) {
    let v = serde_json::to_value(value).expect("serializable");
    match out.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&v).expect("serializable")),
        Format::Text => print!("{}", render::text(&v)),
    }
}

fn emit_report(rep: &SearchReport, out: &Out) {
    match out.format {
        Format::Json => println!("{}", rep.to_json()),
        Format::Text => print!("{}", rep.to_text()),
    }
}

fn labels(plane: &Plane, pts: &[PointId]) -> Vec<[u32; 3]> {
    pts.iter().map(|&p| plane.point_labels(p)).collect()
}

/// Plane over the requested field, or the file's own field.
fn open(file: &std::path::Path, field: &FieldArgs) -> Result<(Plane, Vec<PointId>), Fail> {
    let spec = field.spec()?;
    let arc = io::load_arc(file, spec.as_ref())?;
    let plane = Plane::new(arc.field.clone());
    let pts = arc.point_ids(&plane);
    Ok((plane, pts))
}

#[derive(Serialize)]
struct StabilizerInfo {
    order: u64,
    abelian: Option<bool>,
    name: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    field: FieldInfo,
    r: u32,
    n: usize,
    points: Vec<[u32; 3]>,
    /// No line holds more than r points.
    arc: bool,
    /// Some line holds exactly r points.
    strict: bool,
    complete: bool,
    max_line_intersection: u32,
    secants: Vec<u32>,
    /// Points that could be added without exceeding r on a line.
    addable: Vec<[u32; 3]>,
    stabilizer: Option<StabilizerInfo>,
    max_2arc: Option<usize>,
    code: Option<CodeSummary>,
}

fn verify(file: &std::path::Path, r: u32, field: &FieldArgs, out: &Out) -> Result<(), Fail> {
    let (plane, pts) = open(file, field)?;
    let arc = ArcSet::from_points(&plane, pts).expect("parsed points are distinct");
    let is_arc = arc.is_arc(r, false);
    let addable = match arc.addable_points(r) {
        Ok(set) => labels(&plane, &Plane::sorted_points(&set)),
        Err(_) => Vec::new(),
    };
    let complete = is_arc && addable.is_empty();
    let stabilizer = Canonizer::new(&plane).stabilizer(arc.members()).ok().map(|g| StabilizerInfo {
        order: g.order,
        abelian: g.abelian,
        name: g.structure_name,
    });
    let code = LinearCode::from_columns(
        plane.field().clone(),
        arc.points().iter().map(|&p| *plane.point(p)).collect(),
    )
    .ok();
    let rep = VerifyReport {
        field: plane.field().into(),
        r,
        n: arc.len(),
        points: labels(&plane, arc.points()),
        arc: is_arc,
        strict: arc.is_arc(r, true),
        complete,
        max_line_intersection: arc.max_line_intersection(),
        secants: arc.secant_distribution().truncated(r as usize),
        addable,
        stabilizer,
        max_2arc: arc.max_2arc_subset().ok().map(|(k, _)| k),
        code: code.as_ref().map(CodeSummary::from),
    };
    emit(&rep, out);
    if !rep.arc {
        return Err(Fail::Verify(format!(
            "some line holds {} > {r} points",
            rep.max_line_intersection
        )));
    }
    if !rep.strict {
        return Err(Fail::Verify(format!("no line holds exactly {r} points")));
    }
    if !rep.complete {
        return Err(Fail::Verify(format!("not complete: {} addable points", rep.addable.len())));
    }
    Ok(())
}

#[derive(Serialize)]
struct SecantReport {
    field: FieldInfo,
    n: usize,
    /// Entry i counts the lines meeting the set in i points, i = 0..=q+1.
    secants: Vec<u32>,
    max_line_intersection: u32,
}

#[derive(Serialize)]
struct Element {
    matrix: [u32; 9],
    frob: u32,
}

#[derive(Serialize)]
struct StabilizerReport {
    field: FieldInfo,
    n: usize,
    order: u64,
    abelian: Option<bool>,
    name: Option<String>,
    /// Listed when the order is small enough.
    elements: Vec<Element>,
}

#[derive(Serialize)]
struct Max2Report {
    field: FieldInfo,
    n: usize,
    k: usize,
    witness: Vec<[u32; 3]>,
}

#[derive(Serialize)]
struct OrbitReport {
    field: FieldInfo,
    generators: usize,
    sizes: Vec<usize>,
    orbits: Vec<Vec<[u32; 3]>>,
}

fn search_failure(e: SearchError) -> Fail {
    match e {
        SearchError::BudgetExceeded { partial } => Fail::Budget(partial),
        other => Fail::Usage(other.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    mode: ModeArg,
    r: u32,
    min: usize,
    max: Option<usize>,
    seeds: Option<PathBuf>,
    generators: Option<PathBuf>,
    max_orbits: usize,
    checkpoint: Option<PathBuf>,
    resume: Option<PathBuf>,
    field: &FieldArgs,
    run: &Run,
    out: &Out,
) -> Result<(), Fail> {
    let plane = Plane::new(field.require()?);
    let q = plane.q();
    let mode = SearchMode::from(mode);
    if q > DESK_SCALE_Q && mode != SearchMode::OrbitUnion && !run.extended {
        return Err(Fail::Usage(format!(
            "exhaustive search at q={q} is extended-scale; pass --extended (and consider --checkpoint)"
        )));
    }
    if r < 2 {
        return Err(Fail::Usage("--r must be at least 2".into()));
    }
    let max = max.unwrap_or(SearchConfig::size_limit(q, r) + 1);
    let mut cfg = SearchConfig::new(mode, r, max)
        .with_min(min)
        .with_workers(run.workers)
        .with_budget(run.budget());
    cfg.max_orbits = max_orbits;
    cfg.checkpoint = checkpoint;
    if let Some(path) = resume {
        cfg.resume = Some(Checkpoint::load(&path).map_err(|e| Fail::Usage(e.to_string()))?);
    }
    if let Some(path) = seeds {
        cfg.seeds = io::load_seeds(&path, &plane)?;
    }
    if let Some(path) = generators {
        cfg.generators = io::parse_generators(&io::read(&path)?, &plane)?;
    }
    let rep = match mode {
        SearchMode::Classify => classify_arcs(&plane, &cfg),
        SearchMode::FindMax => find_max_complete(&plane, &cfg),
        SearchMode::FindMin => find_min_complete(&plane, &cfg),
        SearchMode::SeededExtend => seeded_extend(&plane, &cfg),
        SearchMode::OrbitUnion => orbit_union_search(&plane, &cfg),
        SearchMode::BruteOracle => unreachable!("not a search flag value"),
    }
    .map_err(search_failure)?;
    emit_report(&rep, out);
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<(), Fail> {
    match cmd {
        Cmd::Verify { file, r, field, out } => verify(&file, r, &field, &out),
        Cmd::Secants { file, field, out } => {
            let (plane, pts) = open(&file, &field)?;
            let arc = ArcSet::from_points(&plane, pts).expect("distinct points");
            emit(
                &SecantReport {
                    field: plane.field().into(),
                    n: arc.len(),
                    secants: arc.secant_distribution().0,
                    max_line_intersection: arc.max_line_intersection(),
                },
                &out,
            );
            Ok(())
        }
        Cmd::Stabilizer { file, field, out } => {
            let (plane, pts) = open(&file, &field)?;
            let set = ArcSet::from_points(&plane, pts).expect("distinct points");
            let g = Canonizer::new(&plane)
                .stabilizer(set.members())
                .map_err(|e| Fail::Usage(e.to_string()))?;
            let f = plane.field();
            let elements = g
                .elements
                .iter()
                .map(|x| {
                    let (matrix, frob) = x.to_labels(f);
                    Element { matrix, frob }
                })
                .collect();
            emit(
                &StabilizerReport {
                    field: f.into(),
                    n: set.len(),
                    order: g.order,
                    abelian: g.abelian,
                    name: g.structure_name,
                    elements,
                },
                &out,
            );
            Ok(())
        }
        Cmd::Max2arc { file, field, out } => {
            let (plane, pts) = open(&file, &field)?;
            let arc = ArcSet::from_points(&plane, pts).expect("distinct points");
            let (k, witness) = arc.max_2arc_subset().map_err(|e| Fail::Usage(e.to_string()))?;
            emit(
                &Max2Report {
                    field: plane.field().into(),
                    n: arc.len(),
                    k,
                    witness: labels(&plane, &witness),
                },
                &out,
            );
            Ok(())
        }
        Cmd::Tocode { file, field, out } => {
            let (plane, pts) = open(&file, &field)?;
            let arc = ArcSet::from_points(&plane, pts).expect("distinct points");
            let code = LinearCode::from_arc(&arc).map_err(|e| Fail::Usage(e.to_string()))?;
            match out.format {
                Format::Json => emit(&CodeSummary::from(&code), &out),
                Format::Text => {
                    let s = CodeSummary::from(&code);
                    println!(
                        "n={} k={} d={} singleton_defect={} class={} dual_singleton_defect={}",
                        s.n,
                        s.k,
                        s.d,
                        s.singleton_defect,
                        serde_json::to_value(s.class).expect("serializable").as_str().unwrap_or("?"),
                        s.dual_singleton_defect
                    );
                    print!("{}", code.generator_text());
                }
            }
            Ok(())
        }
        Cmd::Search {
            mode,
            r,
            min,
            max,
            seeds,
            generators,
            max_orbits,
            checkpoint,
            resume,
            field,
            run,
            out,
        } => search(
            mode, r, min, max, seeds, generators, max_orbits, checkpoint, resume, &field, &run, &out,
        ),
        Cmd::Seeds {
            min,
            max,
            output,
            field,
            run,
        } => {
            let plane = Plane::new(field.require()?);
            if plane.q() > DESK_SCALE_Q && !run.extended {
                return Err(Fail::Usage(format!(
                    "classifying k-arcs at q={} is extended-scale; pass --extended",
                    plane.q()
                )));
            }
            let cfg = SearchConfig::new(SearchMode::Classify, 2, max)
                .with_min(min)
                .with_workers(run.workers)
                .with_budget(run.budget());
            let rep = classify_arcs(&plane, &cfg).map_err(search_failure)?;
            let arcs: Vec<Vec<[u32; 3]>> = rep.classes.iter().map(|c| c.labels.clone()).collect();
            let text = arc_list_text(plane.field(), &arcs);
            match output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Cmd::Orbits {
            generators,
            field,
            out,
        } => {
            let text = io::read(&generators)?;
            let spec = match field.spec()? {
                Some(f) => f,
                None => pgarc::arcfile::parse_header(
                    text.lines()
                        .map(|l| l.split('#').next().unwrap_or("").trim())
                        .find(|l| !l.is_empty())
                        .unwrap_or(""),
                    1,
                )
                .map_err(|e| Fail::Usage(e.to_string()))?,
            };
            let plane = Plane::new(spec);
            let gens = io::parse_generators(&text, &plane)?;
            let orbits = pgarc::group::point_orbits(&plane, &gens);
            emit(
                &OrbitReport {
                    field: plane.field().into(),
                    generators: gens.len(),
                    sizes: orbits.iter().map(|o| o.len()).collect(),
                    orbits: orbits.iter().map(|o| labels(&plane, o)).collect(),
                },
                &out,
            );
            Ok(())
        }
        Cmd::Oracle {
            r,
            max,
            field,
            run,
            out,
        } => {
            let plane = Plane::new(field.require()?);
            let rep = brute_force_classify(&plane, r, max, run.budget).map_err(search_failure)?;
            emit_report(&rep, &out);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(fail) => {
            match &fail {
                Fail::Verify(msg) => eprintln!("verification failed: {msg}"),
                Fail::Usage(msg) => eprintln!("error: {msg}"),
                Fail::Budget(partial) => {
                    println!("{}", partial.to_json());
                    eprintln!(
                        "budget exceeded after {} nodes; the partial report above is not exhaustive",
                        partial.nodes_visited
                    );
                }
            }
            ExitCode::from(fail.code())
        }
    }
}
