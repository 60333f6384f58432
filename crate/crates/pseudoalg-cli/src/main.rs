//! Command-line driver: builds algebras from JSON recipes and runs the
//! library's verification, product, module, and classification machinery on
//! them.  Every report is deterministic for a fixed seed, and exit codes
//! separate bad input (2) from failed checks (1) and internal limits (3).

use clap::{Parser, Subcommand, ValueEnum};
use pseudoalg::annih::CoefAlgebra;
use pseudoalg::classify::{classify, rank1_classify, Classification, Rank1Report};
use pseudoalg::construct::{
    env_quotient_xcop, hop_sub_xcop, hop_xcop, poly_trivial_action, poly_xy_ddx, OrdinaryAlgebra,
};
use pseudoalg::dual::XElt;
use pseudoalg::error::Error;
use pseudoalg::hopf::{HCtx, HElt};
use pseudoalg::lie::{Cocycle, CocycleJson, LieAlgebra, LieJson};
use pseudoalg::linalg::Matrix;
use pseudoalg::multiindex::MultiIndex;
use pseudoalg::par::Parallelism;
use pseudoalg::pseudo::{
    find_pseudoidentity, locality_data, pseudoproduct, verify_axioms, xprod, BasisLabel,
    PseudoAlgebra, PseudoElement,
};
use pseudoalg::reps::{
    curc_decompose, module_lattice_probe, normalize_module_generators, slice_generates, AModule,
    ConformalModule,
};
use pseudoalg::sample::SampleCfg;
use pseudoalg::scalar::{self, Scalar};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Recipes

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Recipe {
    /// current algebra over an ordinary algebra
    Cur { lie: LieJson, base: BaseJson },
    /// matrix differential operators of the given size
    Cend { lie: LieJson, n: usize },
    /// differential type over an algebra with coordinate action
    Dif { lie: LieJson, base: XBaseJson },
    /// current extension along a coordinate embedding (1-based indices)
    CurExt {
        lie: LieJson,
        embed: Vec<usize>,
        inner: Box<Recipe>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BaseJson {
    ScalarField,
    Matrix { n: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum XBaseJson {
    /// opposite enveloping algebra of the ambient Lie algebra
    Hop,
    /// opposite enveloping algebra of a coordinate subalgebra (1-based)
    HopSub { indices: Vec<usize> },
    /// cocycle-deformed quotient, size n matrices
    EnvQuotient {
        n: usize,
        #[serde(default)]
        cocycle: Option<CocycleJson>,
    },
    PolyTrivial,
    PolyXyDdx,
}

fn one_based(indices: &[usize], dim: usize) -> Result<Vec<usize>, Error> {
    indices
        .iter()
        .map(|&i| {
            if i == 0 || i > dim {
                Err(Error::Input(format!("coordinate index {i} out of range")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

fn build_algebra(recipe: &Recipe) -> Result<PseudoAlgebra, Error> {
    match recipe {
        Recipe::Cur { lie, base } => {
            let ctx = HCtx::new(LieAlgebra::from_json(lie)?)?;
            let (alg, name) = match base {
                BaseJson::ScalarField => (OrdinaryAlgebra::scalar_field(), "cur_c".to_string()),
                BaseJson::Matrix { n } => (OrdinaryAlgebra::matrix(*n), format!("cur_end{n}")),
            };
            PseudoAlgebra::cur(ctx, alg, &name)
        }
        Recipe::Cend { lie, n } => {
            let ctx = HCtx::new(LieAlgebra::from_json(lie)?)?;
            Ok(PseudoAlgebra::cend(ctx, *n))
        }
        Recipe::Dif { lie, base } => {
            let g = LieAlgebra::from_json(lie)?;
            let ctx = HCtx::new(g)?;
            let (xalg, name) = match base {
                XBaseJson::Hop => (hop_xcop(&ctx), "dif_hop".to_string()),
                XBaseJson::HopSub { indices } => {
                    let zero = one_based(indices, ctx.dim())?;
                    (hop_sub_xcop(&ctx, &zero)?, "dif_hop_sub".to_string())
                }
                XBaseJson::EnvQuotient { n, cocycle } => {
                    let phi = match cocycle {
                        Some(c) => Cocycle::from_json(c)?,
                        None => Cocycle::new(),
                    };
                    (
                        env_quotient_xcop(*n, &ctx.lie, &phi)?,
                        format!("dif_env{n}"),
                    )
                }
                XBaseJson::PolyTrivial => {
                    (poly_trivial_action(ctx.dim()), "dif_poly_trivial".into())
                }
                XBaseJson::PolyXyDdx => (poly_xy_ddx(ctx.dim()), "dif_poly_xy_ddx".into()),
            };
            PseudoAlgebra::dif(ctx, xalg, &name)
        }
        Recipe::CurExt { lie, embed, inner } => {
            let g = LieAlgebra::from_json(lie)?;
            let ctx = HCtx::new(g)?;
            let inner_alg = build_algebra(inner)?;
            let embed = one_based(embed, ctx.dim())?;
            PseudoAlgebra::current_ext(ctx, inner_alg, embed)
        }
    }
}

// ---------------------------------------------------------------------------
// Elements and modules

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum LabelJson {
    /// 1-based basis position of an ordinary algebra
    Idx(usize),
    /// exponent vector of a polynomial label
    Mono(Vec<u32>),
    /// matrix operator label: symbol exponents and 1-based matrix cell
    Mat { m: Vec<u32>, p: u16, q: u16 },
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    label: LabelJson,
    /// enveloping coefficient: (exponent vector, rational) pairs
    coeff: Vec<(Vec<u32>, String)>,
}

type ElementJson = Vec<TermJson>;

fn label_from(json: &LabelJson) -> Result<BasisLabel, Error> {
    Ok(match json {
        LabelJson::Idx(i) => {
            if *i == 0 {
                return Err(Error::Input("label positions are 1-based".into()));
            }
            BasisLabel::Idx(i - 1)
        }
        LabelJson::Mono(m) => BasisLabel::Mono(MultiIndex(m.clone())),
        LabelJson::Mat { m, p, q } => {
            if *p == 0 || *q == 0 {
                return Err(Error::Input("matrix cells are 1-based".into()));
            }
            BasisLabel::MatMono {
                m: MultiIndex(m.clone()),
                p: p - 1,
                q: q - 1,
            }
        }
    })
}

fn label_to(label: &BasisLabel) -> LabelJson {
    match label {
        BasisLabel::Idx(i) => LabelJson::Idx(i + 1),
        BasisLabel::Mono(m) => LabelJson::Mono(m.0.clone()),
        BasisLabel::MatMono { m, p, q } => LabelJson::Mat {
            m: m.0.clone(),
            p: p + 1,
            q: q + 1,
        },
    }
}

fn helt_from(coeff: &[(Vec<u32>, String)], dim: usize) -> Result<HElt, Error> {
    let mut out = HElt::zero();
    for (idx, c) in coeff {
        if idx.len() != dim {
            return Err(Error::Input(format!(
                "exponent vector {idx:?} does not match {dim} coordinates"
            )));
        }
        out.add_term(MultiIndex(idx.clone()), scalar::parse(c).map_err(Error::Input)?);
    }
    Ok(out)
}

fn element_from(json: &ElementJson, dim: usize) -> Result<PseudoElement, Error> {
    let mut out = PseudoElement::zero();
    for term in json {
        let label = label_from(&term.label)?;
        let h = helt_from(&term.coeff, dim)?;
        out.add_term(label, h);
    }
    Ok(out)
}

fn element_to(pe: &PseudoElement) -> ElementJson {
    pe.terms()
        .map(|(l, h)| TermJson {
            label: label_to(l),
            coeff: h
                .terms()
                .map(|(i, c)| (i.0.clone(), scalar::to_string(c)))
                .collect(),
        })
        .collect()
}

fn xelt_from(entries: &[(Vec<u32>, String)], dim: usize) -> Result<XElt, Error> {
    let mut out = XElt::zero();
    for (idx, c) in entries {
        if idx.len() != dim {
            return Err(Error::Input(format!(
                "exponent vector {idx:?} does not match {dim} coordinates"
            )));
        }
        out.add_term(MultiIndex(idx.clone()), scalar::parse(c).map_err(Error::Input)?);
    }
    Ok(out)
}

type MatrixJson = Vec<Vec<String>>;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ModuleJson {
    Free {
        action: Vec<MatrixJson>,
        #[serde(default)]
        nil: Vec<MatrixJson>,
    },
    Taut { n: usize, shift: Vec<String> },
}

fn matrix_from(json: &MatrixJson) -> Result<Matrix, Error> {
    let rows = json.len();
    let cols = json.first().map(|r| r.len()).unwrap_or(0);
    if rows != cols || rows == 0 {
        return Err(Error::Input("module matrices must be square".into()));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (r, row) in json.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Input("ragged matrix".into()));
        }
        for (c, v) in row.iter().enumerate() {
            *m.at_mut(r, c) = scalar::parse(v).map_err(Error::Input)?;
        }
    }
    Ok(m)
}

fn module_from(json: &ModuleJson, alg: &PseudoAlgebra) -> Result<ConformalModule, Error> {
    let module = match json {
        ModuleJson::Free { action, nil } => {
            let action: Vec<Matrix> = action.iter().map(matrix_from).collect::<Result<_, _>>()?;
            let dim_v = action.first().map(|m| m.rows).unwrap_or(0);
            let amod = AModule { dim_v, action };
            if nil.is_empty() {
                ConformalModule::tilde(amod, alg.dim())
            } else {
                let nil: Vec<Matrix> = nil.iter().map(matrix_from).collect::<Result<_, _>>()?;
                ConformalModule::Free { amod, nil }
            }
        }
        ModuleJson::Taut { n, shift } => {
            let shift: Vec<Scalar> = shift
                .iter()
                .map(|s| scalar::parse(s).map_err(Error::Input))
                .collect::<Result<_, _>>()?;
            ConformalModule::taut(*n, shift)
        }
    };
    module.validate(alg)?;
    Ok(module)
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Serialize)]
struct Report<T: Serialize> {
    schema_version: u32,
    kind: &'static str,
    #[serde(flatten)]
    payload: T,
}

#[derive(Serialize)]
struct BuildReport {
    name: String,
    coordinates: usize,
    generators_to_degree_2: usize,
}

#[derive(Serialize)]
struct ProductReport {
    fourier: Vec<(Vec<u32>, ElementJson)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    at_x: Option<ElementJson>,
}

#[derive(Serialize)]
struct CoefReport {
    order: u32,
    inners: Vec<(Vec<u32>, ElementJson)>,
}

#[derive(Serialize)]
struct NormalizeReport {
    elements: Vec<ElementJson>,
}

#[derive(Serialize)]
struct DecomposeReport {
    image_rank: usize,
    kernel_rank: usize,
    image: Vec<ElementJson>,
    kernel: Vec<ElementJson>,
}

#[derive(Serialize)]
struct LatticeReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    proper_submodules: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator_is_cyclic_to_degree: Option<(u32, bool)>,
}

#[derive(Serialize)]
struct ClassifyReport {
    classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank1: Option<Rank1Report>,
}

fn emit<T: Serialize>(
    out: &Option<PathBuf>,
    kind: &'static str,
    payload: T,
) -> Result<(), String> {
    let report = Report {
        schema_version: SCHEMA_VERSION,
        kind,
        payload,
    };
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Command line

#[derive(Parser)]
#[command(name = "pseudoalg", version, about = "Exact computations in associative pseudoalgebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Seq,
    Par,
}

impl From<Mode> for Parallelism {
    fn from(m: Mode) -> Parallelism {
        match m {
            Mode::Seq => Parallelism::Sequential,
            Mode::Par => Parallelism::Rayon,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a recipe, reporting basic shape data
    Build {
        recipe: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized axiom suite against a recipe
    Verify {
        recipe: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_deg: u32,
        #[arg(long, default_value_t = 24)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Par)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fourier expansion of the product of two elements, optionally
    /// evaluated at a coordinate polynomial
    Product {
        recipe: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// inline JSON: [(exponents, rational), ...]
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coordinate products a_(t^K) b with the locality order
    Coef {
        recipe: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project elements through the unit action at the trivial functional
    Normalize {
        recipe: PathBuf,
        /// JSON file with a list of elements
        #[arg(long)]
        elems: PathBuf,
        /// treat the elements as members of this module instead
        #[arg(long)]
        module: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a module slice into the unit-action image and kernel
    Decompose {
        recipe: PathBuf,
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_deg: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant subspace probe (free modules) or cyclicity check
    /// (tautological modules)
    Lattice {
        recipe: PathBuf,
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_deg: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identify the base algebra against the known small models
    Classify {
        recipe: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_deg: u32,
        /// additionally solve the rank-one relaxation to this degree
        #[arg(long)]
        rank1_deg: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Input(_)
        | Error::JacobiViolation { .. }
        | Error::CocycleViolation { .. }
        | Error::NotSubalgebra
        | Error::DimTooLarge { .. }
        | Error::ZeroElement => 2,
        Error::AxiomFailure(_)
        | Error::ModelMismatch(_)
        | Error::NotClosed(_)
        | Error::NotIdempotentAction(_)
        | Error::NotSimpleZeroComponent(_)
        | Error::NotFound(_)
        | Error::AnnihilatorHit(_) => 1,
        Error::OutOfScope(_) | Error::LocalityCapExceeded { .. } => 3,
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

enum Failure {
    /// unreadable or malformed input
    Input(String),
    /// the computation ran and the object failed
    Check(String),
    /// the instance falls outside what the engine decides at desk scale
    OutOfScope(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match exit_for(&e) {
            2 => Failure::Input(e.to_string()),
            1 => Failure::Check(e.to_string()),
            _ => Failure::OutOfScope(e.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Failure {
        Failure::Input(s)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Build { recipe, out } => {
            let recipe: Recipe = read_json(&recipe)?;
            let alg = build_algebra(&recipe)?;
            let report = BuildReport {
                name: alg.name.clone(),
                coordinates: alg.dim(),
                generators_to_degree_2: alg.generator_labels(2).len(),
            };
            emit(&out, "build", report)?;
            Ok(())
        }
        Cmd::Verify {
            recipe,
            max_deg,
            samples,
            seed,
            mode,
            out,
        } => {
            let recipe: Recipe = read_json(&recipe)?;
            let alg = build_algebra(&recipe)?;
            let cfg = SampleCfg {
                max_deg,
                samples,
                seed,
            };
            let report = verify_axioms(&alg, &cfg, mode.into())?;
            let ok = report.ok;
            emit(&out, "verify", report)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Check("axiom checks reported failures".into()))
            }
        }
        Cmd::Product { recipe, a, b, x, out } => {
            let recipe: Recipe = read_json(&recipe)?;
            let alg = build_algebra(&recipe)?;
            let a = element_from(&read_json(&a)?, alg.dim())?;
            let b = element_from(&read_json(&b)?, alg.dim())?;
            let expansion = pseudoproduct(&alg, &a, &b)?;
            let fourier = expansion
                .coeffs
                .iter()
                .map(|(k, pe)| (k.0.clone(), element_to(pe)))
                .collect();
            let at_x = match x {
                Some(text) => {
                    let entries: Vec<(Vec<u32>, String)> =
                        serde_json::from_str(&text).map_err(|e| e.to_string())?;
                    let x = xelt_from(&entries, alg.dim())?;
                    Some(element_to(&xprod(&alg, &a, &x, &b)?))
                }
                None => None,
            };
            emit(&out, "product", ProductReport { fourier, at_x })?;
            Ok(())
        }
        Cmd::Coef { recipe, a, b, out } => {
            let recipe: Recipe = read_json(&recipe)?;
            let alg = build_algebra(&recipe)?;
            let a = element_from(&read_json(&a)?, alg.dim())?;
            let b = element_from(&read_json(&b)?, alg.dim())?;
            let (order, inners) = locality_data(&alg, &a, &b)?;
            // exercise the coefficient algebra glue so malformed backends
            // surface here rather than in later commands
            let _ = CoefAlgebra::new(&alg);
            let inners = inners
                .iter()
                .map(|(k, pe)| (k.0.clone(), element_to(pe)))
                .collect();
            emit(&out, "coef", CoefReport { order, inners })?;
            Ok(())
        }
        Cmd::Normalize {
            recipe,
            elems,
            module,
            out,
        } => {
            let recipe: Recipe = read_json(&recipe)?;
            let alg = build_algebra(&recipe)?;
            let raw: Vec<ElementJson> = read_json(&elems)?;
            let elems: Vec<PseudoElement> = raw
                .iter()
                .map(|e| element_from(e, alg.dim()))
                .collect::<Result<_, _>>()?;
            let e = find_pseudoidentity(&alg)?;
            let normalized = match module {
                Some(path) => {
                    let mj: ModuleJson = read_json(&path)?;
                    let module = module_from(&mj, &alg)?;
                    normalize_module_generators(&alg, &module, &e, &elems)?
                }
                None => {
                    let one_x = XElt::one(alg.dim());
                    elems
                        .iter()
                        .map(|a| xprod(&alg, a, &one_x, &e))
                        .collect::<Result<_, _>>()?
                }
            };
            let elements = normalized.iter().map(element_to).collect();
            emit(&out, "normalize", NormalizeReport { elements })?;
            Ok(())
        }
        Cmd::Decompose {
            recipe,
            module,
            max_deg,
            out,
        } => {
            let recipe: Recipe = read_json(&recipe)?;
            let alg = build_algebra(&recipe)?;
            let mj: ModuleJson = read_json(&module)?;
            let module = module_from(&mj, &alg)?;
            let e = find_pseudoidentity(&alg)?;
            let (image, kernel) = curc_decompose(&alg, &module, &e, max_deg)?;
            let report = DecomposeReport {
                image_rank: image.len(),
                kernel_rank: kernel.len(),
                image: image.iter().map(element_to).collect(),
                kernel: kernel.iter().map(element_to).collect(),
            };
            emit(&out, "decompose", report)?;
            Ok(())
        }
        Cmd::Lattice {
            recipe,
            module,
            max_deg,
            out,
        } => {
            let recipe: Recipe = read_json(&recipe)?;
            let alg = build_algebra(&recipe)?;
            let mj: ModuleJson = read_json(&module)?;
            let module = module_from(&mj, &alg)?;
            let report = match &module {
                ConformalModule::Free { .. } => {
                    let lattice = module_lattice_probe(&module)?;
                    let rendered = lattice
                        .iter()
                        .map(|basis| {
                            basis
                                .iter()
                                .map(|v| v.iter().map(scalar::to_string).collect())
                                .collect()
                        })
                        .collect();
                    LatticeReport {
                        proper_submodules: Some(rendered),
                        generator_is_cyclic_to_degree: None,
                    }
                }
                ConformalModule::Taut { .. } => {
                    let start = PseudoElement::single(BasisLabel::Idx(0), alg.dim());
                    let generates = slice_generates(&alg, &module, &start, max_deg)?;
                    LatticeReport {
                        proper_submodules: None,
                        generator_is_cyclic_to_degree: Some((max_deg, generates)),
                    }
                }
            };
            emit(&out, "lattice", report)?;
            Ok(())
        }
        Cmd::Classify {
            recipe,
            max_deg,
            rank1_deg,
            out,
        } => {
            let recipe: Recipe = read_json(&recipe)?;
            let alg = build_algebra(&recipe)?;
            let classification = classify(&alg, max_deg)?;
            let rank1 = match rank1_deg {
                Some(d) => Some(rank1_classify(&alg.ctx, d)?),
                None => None,
            };
            emit(
                &out,
                "classify",
                ClassifyReport {
                    classification,
                    rank1,
                },
            )?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::OutOfScope(msg)) => {
            eprintln!("out of scope: {msg}");
            ExitCode::from(3)
        }
    }
}
