//! Command-line surface. Every command prints one JSON report:
//!
//! ```json
//! {"command": "models distance", "inputs_digest": "…", "seed": 0, "results": {…}, "pass": true}
//! ```
//!
//! JSON-valued options take either inline JSON or a path to a file holding
//! it. Exit status is 0 when the report passes, 1 when a check fails and 2
//! for usage errors or malformed input.

use std::fmt::Display;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::actions::{
    complement_path, convex_hull, dirichlet_domain, limit_points, project_cone, proper_action_count,
    shrink_horoballs, word_ball, ConeSpec, DirichletOptions, Polyhedron, HULL_DIM_CAP,
};
use crate::arrangements::{
    aut_sharp_trivial, build_coble_lattice_example, build_dual_hesse, check_pair, dual_hesse_pair,
    general_position_4, max_collinear, CoefficientClass, Overall, PairSpec, ProjPoint,
};
use crate::cohom::{
    distinct_mod_center, h1_z2, no_relation_search, pingpong_witness, sanov_generators, semidirect_order2_classes,
    CycloMatrix2, FiniteGroupTable, IntMatrix2, DEFAULT_MAX_BITS,
};
use crate::lattice::{format_rational, DivisorClass, PicardLattice, RationalRepr};
use crate::models::sample::random_point;
use crate::models::{
    cat0_check, distance, HyperboloidPoint, Horoball, Isometry, ModelKind, ModelPoint,
};
use crate::verify::{run_all, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "kltgeom", version, about = "Hyperbolic geometry and KLT Calabi-Yau pair checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance for pass/fail decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Word length for enumerations and relation searches.
    #[arg(long, global = true, default_value_t = 6)]
    pub word_length: usize,
    /// Number of random samples.
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    /// Worker threads for data-parallel steps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Picard lattice arithmetic.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Hyperboloid, Klein and Poincaré models.
    #[command(subcommand)]
    Models(ModelsCmd),
    /// Discrete group actions on hyperbolic space.
    #[command(subcommand)]
    Actions(ActionsCmd),
    /// Exact point-line configurations and pair verdicts.
    #[command(subcommand)]
    Arrange(ArrangeCmd),
    /// Nonabelian cohomology and free-group checks.
    #[command(subcommand)]
    Cohom(CohomCmd),
    /// Run the full acceptance suite.
    VerifyPaper,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Intersection number of two classes on the blow-up at `k` points.
    Intersect {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Canonical class and its self-intersection.
    Canonical {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModelsCmd {
    /// Convert a tagged model point to another model.
    Convert {
        #[arg(long)]
        point: String,
        #[arg(long, value_parser = parse_kind)]
        to: ModelKind,
    },
    /// Hyperbolic distance between two points given in one model.
    Distance {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, value_parser = parse_kind, default_value = "hyperboloid")]
        model: ModelKind,
    },
    /// Elliptic, parabolic or loxodromic type of a Lorentz matrix.
    Classify {
        #[arg(long)]
        matrix: String,
    },
    /// Largest CAT(0) comparison violation over random triangles.
    Cat0Sample {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ActionsCmd {
    /// Dirichlet polyhedron of the word ball around a center.
    Dirichlet {
        #[arg(long)]
        generators: String,
        #[arg(long)]
        center: Option<String>,
        #[arg(long)]
        restrict: Option<String>,
        #[arg(long)]
        remove_redundant: bool,
    },
    /// Number of enumerated elements moving a ball onto itself.
    ProperCount {
        #[arg(long)]
        generators: String,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        radius: f64,
    },
    /// Approximate limit set from orbit points near the boundary.
    LimitSet {
        #[arg(long)]
        generators: String,
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 1e-3)]
        min_norm: f64,
    },
    /// Radial projection of a cone to the Klein ball.
    ProjectCone {
        #[arg(long)]
        cone: String,
    },
    /// Shrink horoballs until their antipodes lie in a region.
    Shrink {
        #[arg(long)]
        horoballs: String,
        #[arg(long)]
        region: String,
    },
    /// Shortest path avoiding an open horoball in the plane.
    ComplementPath {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        horoball: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ArrangeCmd {
    /// The twelve-point, nine-line configuration and its pair verdict.
    DualHesse,
    /// The lattice example with a non-KLT boundary.
    Coble,
    /// Verdict for a pair read from JSON.
    CheckPair {
        #[arg(long)]
        pair: String,
    },
    /// Collinearity test bounding the automorphisms fixing the points.
    AutSharp {
        #[arg(long)]
        points: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CohomCmd {
    /// Classes of `H¹(ℤ/2, A)` for a group table with an involution.
    H1 {
        #[arg(long)]
        table: String,
    },
    /// Order-2 elements of `A ⋊ ℤ/2` up to conjugacy, compared with `H¹`.
    Semidirect {
        #[arg(long)]
        table: String,
    },
    /// Exhaustive search for relations among 2×2 integer matrices.
    FreeCheck {
        #[arg(long)]
        generators: Option<String>,
        /// Treat `−I` as trivial.
        #[arg(long)]
        mod_sign: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_BITS)]
        max_bits: u64,
    },
    /// Ping-pong inclusions on rational sample points.
    Pingpong {
        #[arg(long)]
        points: Option<String>,
    },
    /// Whether pairs of matrices over ℤ[ζ] differ modulo scalars ζᵏ.
    ModCenter {
        #[arg(long)]
        pairs: String,
    },
}

fn parse_kind(s: &str) -> Result<ModelKind, String> {
    serde_json::from_value(Value::String(s.to_lowercase()))
        .map_err(|_| format!("unknown model `{s}` (expected hyperboloid, klein or poincare)"))
}

/// Shape of every command's output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub results: Value,
    pub pass: bool,
}

/// Exit status and the text destined for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct UsageError(String);

impl<E: Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Hashes everything that determines a report and resolves JSON options.
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new(command: &str, global: &GlobalOpts) -> Self {
        let mut hasher = Sha256::new();
        for part in [
            command.to_string(),
            global.tolerance.to_string(),
            global.word_length.to_string(),
            global.samples.to_string(),
        ] {
            hasher.update(part.as_bytes());
            hasher.update([0]);
        }
        Inputs { hasher }
    }

    fn scalar(&mut self, name: &str, value: impl Display) {
        self.hasher.update(format!("{name}={value}").as_bytes());
        self.hasher.update([0]);
    }

    fn json<T: DeserializeOwned>(&mut self, name: &str, raw: &str) -> Result<T, UsageError> {
        let (text, source) = if Path::new(raw).is_file() {
            let text = std::fs::read_to_string(raw).map_err(|e| UsageError(format!("--{name}: cannot read {raw}: {e}")))?;
            (text, raw.to_string())
        } else {
            (raw.to_string(), "inline".to_string())
        };
        self.scalar(name, &text);
        serde_json::from_str(&text).map_err(|e| UsageError(format!("--{name} ({source}): {e}")))
    }

    fn digest(self) -> String {
        self.hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Some(jobs) = cli.global.jobs {
        if jobs == 0 {
            return usage("--jobs must be at least 1".into());
        }
        // a pool may already exist when run is called repeatedly in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match execute(&cli) {
        Ok(report) => {
            let code = if report.pass { 0 } else { 1 };
            let mut stdout = serde_json::to_string_pretty(&report).expect("report serializes");
            stdout.push('\n');
            CliOutput { code, stdout, stderr: String::new() }
        }
        Err(UsageError(msg)) => usage(msg),
    }
}

fn usage(msg: String) -> CliOutput {
    CliOutput {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn command_name(cmd: &Command) -> String {
    let (group, sub): (&str, &str) = match cmd {
        Command::Lattice(c) => ("lattice", match c {
            LatticeCmd::Intersect { .. } => "intersect",
            LatticeCmd::Canonical { .. } => "canonical",
        }),
        Command::Models(c) => ("models", match c {
            ModelsCmd::Convert { .. } => "convert",
            ModelsCmd::Distance { .. } => "distance",
            ModelsCmd::Classify { .. } => "classify",
            ModelsCmd::Cat0Sample { .. } => "cat0-sample",
        }),
        Command::Actions(c) => ("actions", match c {
            ActionsCmd::Dirichlet { .. } => "dirichlet",
            ActionsCmd::ProperCount { .. } => "proper-count",
            ActionsCmd::LimitSet { .. } => "limit-set",
            ActionsCmd::ProjectCone { .. } => "project-cone",
            ActionsCmd::Shrink { .. } => "shrink",
            ActionsCmd::ComplementPath { .. } => "complement-path",
        }),
        Command::Arrange(c) => ("arrange", match c {
            ArrangeCmd::DualHesse => "dual-hesse",
            ArrangeCmd::Coble => "coble",
            ArrangeCmd::CheckPair { .. } => "check-pair",
            ArrangeCmd::AutSharp { .. } => "aut-sharp",
        }),
        Command::Cohom(c) => ("cohom", match c {
            CohomCmd::H1 { .. } => "h1",
            CohomCmd::Semidirect { .. } => "semidirect",
            CohomCmd::FreeCheck { .. } => "free-check",
            CohomCmd::Pingpong { .. } => "pingpong",
            CohomCmd::ModCenter { .. } => "mod-center",
        }),
        Command::VerifyPaper => return "verify-paper".into(),
    };
    format!("{group} {sub}")
}

fn execute(cli: &Cli) -> Result<Report, UsageError> {
    let name = command_name(&cli.command);
    let g = &cli.global;
    let mut inputs = Inputs::new(&name, g);
    let (results, pass) = match &cli.command {
        Command::Lattice(c) => lattice(c, &mut inputs)?,
        Command::Models(c) => models(c, g, &mut inputs)?,
        Command::Actions(c) => actions(c, g, &mut inputs)?,
        Command::Arrange(c) => arrange(c, &mut inputs)?,
        Command::Cohom(c) => cohom(c, g, &mut inputs)?,
        Command::VerifyPaper => {
            let results = run_all(&VerifyOptions {
                seed: g.seed,
                ..VerifyOptions::default()
            });
            let pass = results.iter().all(|r| r.pass);
            (json!({ "criteria": results }), pass)
        }
    };
    Ok(Report {
        command: name,
        inputs_digest: inputs.digest(),
        seed: g.seed,
        results,
        pass,
    })
}

type CmdResult = Result<(Value, bool), UsageError>;

fn lattice(c: &LatticeCmd, inputs: &mut Inputs) -> CmdResult {
    match c {
        LatticeCmd::Intersect { k, u, v } => {
            inputs.scalar("k", k);
            let lattice = PicardLattice::new(*k);
            let u: DivisorClass = inputs.json("u", u)?;
            let v: DivisorClass = inputs.json("v", v)?;
            let product = lattice.intersect(&u, &v)?;
            Ok((json!({ "k": k, "intersection": format_rational(&product) }), true))
        }
        LatticeCmd::Canonical { k } => {
            inputs.scalar("k", k);
            let lattice = PicardLattice::new(*k);
            let kc = lattice.canonical_class();
            let square = lattice.self_intersection(&kc)?;
            Ok((
                json!({ "k": k, "canonical_class": kc, "self_intersection": format_rational(&square) }),
                true,
            ))
        }
    }
}

fn model_point(kind: ModelKind, coords: Vec<f64>) -> Result<ModelPoint, UsageError> {
    let tagged = json!({ "model": kind, "coords": coords });
    Ok(serde_json::from_value(tagged)?)
}

fn models(c: &ModelsCmd, g: &GlobalOpts, inputs: &mut Inputs) -> CmdResult {
    match c {
        ModelsCmd::Convert { point, to } => {
            let p: ModelPoint = inputs.json("point", point)?;
            inputs.scalar("to", format!("{to:?}"));
            let q = p.convert(*to);
            Ok((json!({ "input": p, "output": q }), true))
        }
        ModelsCmd::Distance { u, v, model } => {
            inputs.scalar("model", format!("{model:?}"));
            let u = model_point(*model, inputs.json("u", u)?)?;
            let v = model_point(*model, inputs.json("v", v)?)?;
            let d = u.distance(&v)?;
            Ok((json!({ "distance": d }), true))
        }
        ModelsCmd::Classify { matrix } => {
            let m: Isometry = inputs.json("matrix", matrix)?;
            let class = m.classify_with_tol(g.tolerance);
            Ok((json!(class), true))
        }
        ModelsCmd::Cat0Sample { dim } => {
            inputs.scalar("dim", dim);
            if *dim < 2 {
                return Err(UsageError("--dim must be at least 2".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let mut worst = f64::NEG_INFINITY;
            let mut comparisons = 0;
            for _ in 0..g.samples {
                let a = random_point(&mut rng, *dim, 3.0);
                let b = random_point(&mut rng, *dim, 3.0);
                let c = random_point(&mut rng, *dim, 3.0);
                let r = cat0_check(&a, &b, &c, 10, &mut rng)?;
                worst = worst.max(r.max_violation);
                comparisons += r.comparisons;
            }
            let pass = worst <= g.tolerance;
            Ok((
                json!({ "dim": dim, "triangles": g.samples, "comparisons": comparisons, "max_violation": worst }),
                pass,
            ))
        }
    }
}

fn point_or_origin(inputs: &mut Inputs, name: &str, raw: &Option<String>, n: usize) -> Result<HyperboloidPoint, UsageError> {
    match raw {
        Some(r) => {
            let p: HyperboloidPoint = inputs.json(name, r)?;
            if p.dim() != n {
                return Err(UsageError(format!("--{name}: expected a point of H^{n}, got H^{}", p.dim())));
            }
            Ok(p)
        }
        None => Ok(HyperboloidPoint::origin(n)),
    }
}

fn generators(inputs: &mut Inputs, raw: &str) -> Result<Vec<Isometry>, UsageError> {
    let gens: Vec<Isometry> = inputs.json("generators", raw)?;
    if gens.is_empty() {
        return Err(UsageError("--generators: need at least one matrix".into()));
    }
    Ok(gens)
}

fn polyhedron_summary(p: &Polyhedron) -> Value {
    let inradius = p.inradius_estimate();
    json!({
        "polyhedron": p,
        "side_count": p.side_count(),
        "inradius_estimate": inradius.as_ref().map(|r| r.0),
        "inradius_center": inradius.map(|r| r.1),
    })
}

fn actions(c: &ActionsCmd, g: &GlobalOpts, inputs: &mut Inputs) -> CmdResult {
    match c {
        ActionsCmd::Dirichlet { generators: raw, center, restrict, remove_redundant } => {
            let gens = generators(inputs, raw)?;
            let a = point_or_origin(inputs, "center", center, gens[0].dim())?;
            let restrict: Option<Polyhedron> = restrict.as_deref().map(|r| inputs.json("restrict", r)).transpose()?;
            inputs.scalar("remove_redundant", remove_redundant);
            let opts = DirichletOptions { restrict, remove_redundant: *remove_redundant };
            // side counts for every shorter word length, to show whether the domain has settled
            let mut side_counts = Vec::new();
            for l in 1..g.word_length {
                side_counts.push(dirichlet_domain(&word_ball(&gens, l)?, &a, &opts)?.side_count());
            }
            let elems = word_ball(&gens, g.word_length)?;
            let domain = dirichlet_domain(&elems, &a, &opts)?;
            side_counts.push(domain.side_count());
            let stabilized = side_counts.len() >= 2 && side_counts[side_counts.len() - 2] == domain.side_count();
            let mut out = polyhedron_summary(&domain);
            out["elements"] = json!(elems.len());
            out["side_counts_by_word_length"] = json!(side_counts);
            out["side_count_stable"] = json!(stabilized);
            Ok((out, true))
        }
        ActionsCmd::ProperCount { generators: raw, point, radius } => {
            let gens = generators(inputs, raw)?;
            let x = point_or_origin(inputs, "point", point, gens[0].dim())?;
            inputs.scalar("radius", radius);
            let elems = word_ball(&gens, g.word_length)?;
            let count = proper_action_count(&elems, &x, *radius)?;
            Ok((json!({ "elements": elems.len(), "radius": radius, "count": count }), true))
        }
        ActionsCmd::LimitSet { generators: raw, point, min_norm } => {
            let gens = generators(inputs, raw)?;
            let n = gens[0].dim();
            let x = point_or_origin(inputs, "point", point, n)?;
            inputs.scalar("min_norm", min_norm);
            let elems = word_ball(&gens, g.word_length)?;
            let points = limit_points(&elems, &x, *min_norm);
            let directions: Vec<Vec<f64>> = points.iter().map(|b| b.direction().as_slice().to_vec()).collect();
            let hull = if n <= HULL_DIM_CAP && !directions.is_empty() {
                convex_hull(&directions).ok().map(|h| {
                    let mut s = polyhedron_summary(&h.polyhedron);
                    s["affine_dim"] = json!(h.affine_dim);
                    s["degenerate"] = json!(h.degenerate);
                    s
                })
            } else {
                None
            };
            Ok((json!({ "elements": elems.len(), "limit_points": points, "hull": hull }), true))
        }
        ActionsCmd::ProjectCone { cone } => {
            let cone: ConeSpec = inputs.json("cone", cone)?;
            let n = cone.rays.first().map(|r| r.len().saturating_sub(1)).unwrap_or(0);
            let projection = project_cone(n, &cone)?;
            Ok((json!(projection), true))
        }
        ActionsCmd::Shrink { horoballs, region } => {
            let balls: Vec<Horoball> = inputs.json("horoballs", horoballs)?;
            let region: Polyhedron = inputs.json("region", region)?;
            let shrunk = shrink_horoballs(&balls, &region)?;
            let pass = shrunk.iter().all(|s| {
                let w = s.horoball.antipode_poincare().to_klein();
                region.satisfies_halfspaces(w.coords().as_slice(), g.tolerance.max(1e-12))
            });
            Ok((json!({ "horoballs": shrunk }), pass))
        }
        ActionsCmd::ComplementPath { x, y, horoball } => {
            let x: HyperboloidPoint = inputs.json("x", x)?;
            let y: HyperboloidPoint = inputs.json("y", y)?;
            let h: Horoball = inputs.json("horoball", horoball)?;
            let path = complement_path(&x, &y, &h)?;
            let direct = distance(&x, &y)?;
            let pass = path.length >= direct - g.tolerance;
            Ok((json!({ "path": path, "distance": direct }), pass))
        }
    }
}

fn arrange(c: &ArrangeCmd, inputs: &mut Inputs) -> CmdResult {
    match c {
        ArrangeCmd::DualHesse => {
            let cfg = build_dual_hesse();
            let verdict = check_pair(&dual_hesse_pair())?;
            let pass = verdict.overall == Overall::KltCy;
            Ok((
                json!({
                    "configuration": cfg,
                    "points": cfg.points().len(),
                    "lines": cfg.lines().len(),
                    "lines_per_point": cfg.point_degrees(),
                    "points_per_line": cfg.line_degrees(),
                    "verdict": verdict,
                }),
                pass,
            ))
        }
        ArrangeCmd::Coble => {
            let ex = build_coble_lattice_example();
            let ids = ex.identities()?;
            let verdict = check_pair(&ex.spec)?;
            let pass = ids.c6_is_minus_2k
                && ids.k_plus_half_c6_is_zero
                && verdict.overall == Overall::LcCy
                && verdict.coefficient_class == CoefficientClass::LcOnly;
            Ok((json!({ "curves": ex.curves, "c6": ex.c6, "identities": ids, "verdict": verdict }), pass))
        }
        ArrangeCmd::CheckPair { pair } => {
            let spec: PairSpec = inputs.json("pair", pair)?;
            let verdict = check_pair(&spec)?;
            let pass = matches!(verdict.overall, Overall::KltCy | Overall::LcCy);
            Ok((json!(verdict), pass))
        }
        ArrangeCmd::AutSharp { points } => {
            let pts: Vec<ProjPoint> = match points {
                Some(raw) => inputs.json("points", raw)?,
                None => build_dual_hesse().points().to_vec(),
            };
            let mc = max_collinear(&pts)?;
            let trivial = aut_sharp_trivial(&pts);
            let gp4 = if pts.len() >= 4 { Some(general_position_4(&pts)?) } else { None };
            Ok((
                json!({
                    "points": pts.len(),
                    "max_collinear": mc.count,
                    "witness": mc.witness,
                    "general_position_4": gp4,
                    "aut_sharp_trivial": trivial,
                }),
                trivial,
            ))
        }
    }
}

fn default_pingpong_points(seed: u64, count: usize) -> Vec<(BigRational, BigRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: i64 = rng.random_range(-50..=50);
        let q: i64 = rng.random_range(-50..=50);
        if p == 0 && q == 0 {
            continue;
        }
        let d: i64 = rng.random_range(1..=7);
        out.push((BigRational::new(p.into(), d.into()), BigRational::new(q.into(), d.into())));
    }
    out
}

fn cohom(c: &CohomCmd, g: &GlobalOpts, inputs: &mut Inputs) -> CmdResult {
    match c {
        CohomCmd::H1 { table } => {
            let t: FiniteGroupTable = inputs.json("table", table)?;
            Ok((json!(h1_z2(&t)), true))
        }
        CohomCmd::Semidirect { table } => {
            let t: FiniteGroupTable = inputs.json("table", table)?;
            let r = semidirect_order2_classes(&t);
            let pass = r.well_defined && r.surjective;
            Ok((json!(r), pass))
        }
        CohomCmd::FreeCheck { generators, mod_sign, max_bits } => {
            let gens: Vec<IntMatrix2> = match generators {
                Some(raw) => inputs.json("generators", raw)?,
                None => sanov_generators().to_vec(),
            };
            inputs.scalar("mod_sign", mod_sign);
            inputs.scalar("max_bits", max_bits);
            let signs = [BigInt::from(1), BigInt::from(-1)];
            let center = mod_sign.then_some(&signs[..]);
            let r = no_relation_search(&gens, g.word_length, center, *max_bits)?;
            let pass = r.free_up_to_l;
            Ok((json!(r), pass))
        }
        CohomCmd::Pingpong { points } => {
            let pts: Vec<(BigRational, BigRational)> = match points {
                Some(raw) => {
                    let v: Vec<(RationalRepr, RationalRepr)> = inputs.json("points", raw)?;
                    v.into_iter().map(|(p, q)| (p.0, q.0)).collect()
                }
                None => default_pingpong_points(g.seed, g.samples),
            };
            let r = pingpong_witness(&pts)?;
            let pass = r.holds;
            Ok((json!({ "samples": pts.len(), "report": r }), pass))
        }
        CohomCmd::ModCenter { pairs } => {
            let pairs: Vec<(CycloMatrix2, CycloMatrix2)> = inputs.json("pairs", pairs)?;
            let distinct = distinct_mod_center(&pairs);
            let pass = distinct.iter().all(|&d| d);
            Ok((json!({ "distinct": distinct }), pass))
        }
    }
}
