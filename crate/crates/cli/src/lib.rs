//! Command-line front end: reads JSON instances, runs the solver, checker,
//! oracle or distance evaluator, and writes canonical JSON.
//!
//! Exit codes: 0 success, 1 internal error, 2 close-knit violations found,
//! 3 a size or enumeration cap was hit, 4 malformed input.

pub mod wire;

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use closeknit::abstract_lattice::{load_abstract, AbstractLattice, AbstractTables};
use closeknit::contlogic::{self, Formula, GroupTable, MetricStructure, VectorTable};
use closeknit::engine::{
    solve, validate_conditions, verify_certificate, Certificate, CloseKnitInstance, Closed, SolveMode, SolveOptions,
    TraceStep, ValidationReport,
};
use closeknit::galois::{solve_galois, GaloisInstance};
use closeknit::groups::{GroupInstance, GroupLattice, PermGroup, Subgroup};
use closeknit::oracle;
use closeknit::sets::{FiniteSubset, SetInstance, SetLattice};
use closeknit::vect::{Matrix, SubspaceBasis, VectInstance, VectLattice};
use closeknit::{Error, IndexValue, Perm, Rational};

use wire::{InstanceFile, Kind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VIOLATIONS: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "closeknit",
    version,
    about = "Invariant commensurable sub-objects of finite lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the invariant element and print its certificate.
    Solve {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Include the absorption trace of the proof route.
        #[arg(long)]
        trace: bool,
    },
    /// Check the close-knit conditions.
    Check {
        #[arg(short, long)]
        input: PathBuf,
        /// Sample count for instances too large to check exhaustively.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List every invariant element within `bound` of all family members.
    Oracle {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        bound: u64,
    },
    /// Tabulate the tuple distances of a metric instance.
    EvalDelta {
        #[arg(short, long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Full,
    Proof,
    Both,
}

/// A failed run: exit code and a one-line diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        at("", e)
    }
}

fn code_of(e: &Error) -> i32 {
    if e.is_cap() {
        EXIT_CAP
    } else if e.is_condition() {
        EXIT_VIOLATIONS
    } else if matches!(e, Error::Internal(_)) {
        EXIT_INTERNAL
    } else {
        EXIT_MALFORMED
    }
}

/// Attaches the offending field path to a library error.
fn at(path: impl Display, e: Error) -> Failure {
    let path = path.to_string();
    let message = if path.is_empty() {
        e.to_string()
    } else {
        format!("{path}: {e}")
    };
    Failure {
        code: code_of(&e),
        message,
    }
}

trait Context<T> {
    fn at(self, path: impl Display) -> Result<T, Failure>;
}

impl<T> Context<T> for closeknit::Result<T> {
    fn at(self, path: impl Display) -> Result<T, Failure> {
        self.map_err(|e| at(path, e))
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let outcome =
        match cli.command {
            Command::Solve {
                input,
                output,
                mode,
                trace,
            } => load(&input)
                .and_then(|f| cmd_solve(&f, mode, trace))
                .and_then(|v| emit(&v, output.as_deref(), stdout)),
            Command::Check { input, samples, seed } => load(&input)
                .and_then(|f| cmd_check(&f, samples, seed))
                .and_then(|(v, clean)| {
                    emit(&v, None, stdout)?;
                    Ok(if clean { EXIT_OK } else { EXIT_VIOLATIONS })
                }),
            Command::Oracle { input, bound } => load(&input)
                .and_then(|f| cmd_oracle(&f, bound))
                .and_then(|v| emit(&v, None, stdout)),
            Command::EvalDelta { input } => load(&input)
                .and_then(|f| cmd_eval_delta(&f))
                .and_then(|v| emit(&v, None, stdout)),
        };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(value: &Value, output: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::internal(e.to_string()))?;
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::internal(format!("cannot write {}: {e}", path.display())))?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::internal(format!("cannot write output: {e}")))?,
    }
    Ok(EXIT_OK)
}

pub fn load(path: &Path) -> Result<InstanceFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|f| Failure::malformed(format!("{}: {}", path.display(), f.message)))
}

/// Parses an instance file and checks that exactly the block named by `kind` is present.
pub fn parse(text: &str) -> Result<InstanceFile, Failure> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Failure::malformed(e.to_string()))?;
    let present: Vec<&str> = [
        ("set", file.set.is_some()),
        ("group", file.group.is_some()),
        ("vector", file.vector.is_some()),
        ("abstract", file.abstract_.is_some()),
        ("galois", file.galois.is_some()),
        ("metric", file.metric.is_some()),
    ]
    .iter()
    .filter(|(_, p)| *p)
    .map(|(n, _)| *n)
    .collect();
    if present != [file.kind.name()] {
        return Err(Failure::malformed(format!(
            "kind is \"{}\" but the blocks present are {present:?}; exactly one block named after the kind is required",
            file.kind.name()
        )));
    }
    Ok(file)
}

// ---------------------------------------------------------------------------
// Building instances

fn perm(images: &[usize], path: impl Display) -> Result<Perm, Failure> {
    Perm::from_usize(images).at(path)
}

fn set_instance(file: &InstanceFile) -> Result<Closed<SetLattice>, Failure> {
    let b = file.set.as_ref().expect("checked by parse");
    let seeds = b
        .seeds
        .iter()
        .enumerate()
        .map(|(i, s)| FiniteSubset::from_members(b.carrier_size, s).at(format_args!("set.seeds[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let gamma = b
        .gamma
        .iter()
        .enumerate()
        .map(|(i, g)| perm(g, format_args!("set.gamma[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    SetInstance::new(b.carrier_size, seeds, gamma)
        .at("set")?
        .close(file.options.max_orbit)
        .at("set")
}

/// Ambient group, seed subgroups and Γ generators of a group block.
type GroupParts = (Arc<PermGroup>, Vec<Subgroup>, Vec<Perm>);

fn group_parts(file: &InstanceFile, b: &wire::GroupBlock, name: &str) -> Result<GroupParts, Failure> {
    let gens = b
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| perm(g, format_args!("{name}.generators[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let group =
        Arc::new(PermGroup::generate(b.degree, gens, file.options.max_elements).at(format_args!("{name}.generators"))?);
    let seeds = b
        .seeds
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let perms = s
                .iter()
                .enumerate()
                .map(|(j, g)| perm(g, format_args!("{name}.seeds[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            group.subgroup_from_perms(&perms).at(format_args!("{name}.seeds[{i}]"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gamma = match &b.gamma {
        None => Vec::new(),
        Some(wire::Gamma::Inner(_)) => group.generators().to_vec(),
        Some(wire::Gamma::Explicit(list)) => list
            .iter()
            .enumerate()
            .map(|(i, g)| perm(g, format_args!("{name}.gamma[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok((group, seeds, gamma))
}

fn group_instance(
    file: &InstanceFile,
    b: &wire::GroupBlock,
    name: &str,
) -> Result<(Closed<GroupLattice>, Arc<PermGroup>), Failure> {
    let (group, seeds, gamma) = group_parts(file, b, name)?;
    let closed = GroupInstance::new(group.clone(), seeds, gamma)
        .at(name)?
        .close(file.options.max_orbit)
        .at(name)?;
    Ok((closed, group))
}

fn vector_instance(file: &InstanceFile) -> Result<Closed<VectLattice>, Failure> {
    let b = file.vector.as_ref().expect("checked by parse");
    let seeds = b
        .seeds
        .iter()
        .enumerate()
        .map(|(i, rows)| SubspaceBasis::new(b.p, b.dim, rows.clone()).at(format_args!("vector.seeds[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let gamma = b
        .gamma
        .iter()
        .enumerate()
        .map(|(i, m)| Matrix::invertible(b.p, m.clone()).at(format_args!("vector.gamma[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    VectInstance::new(b.p, b.dim, seeds, gamma)
        .at("vector")?
        .close(file.options.max_orbit)
        .at("vector")
}

fn index_value(coords: &[wire::WireNumber], cap: u64, path: impl Display) -> Result<IndexValue, Failure> {
    let ints: Option<Vec<u64>> = coords
        .iter()
        .map(|c| match c {
            wire::WireNumber::Int(n) => u64::try_from(*n).ok(),
            wire::WireNumber::Pair(_) => None,
        })
        .collect();
    match ints {
        Some(v) => IndexValue::nat(cap, v).at(path),
        None => {
            let rats = coords
                .iter()
                .map(|c| c.to_rational())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|m| Failure::malformed(format!("{path}: {m}")))?;
            IndexValue::rat(rats).at(path)
        }
    }
}

fn abstract_tables(file: &InstanceFile) -> Result<AbstractTables, Failure> {
    let b = file.abstract_.as_ref().expect("checked by parse");
    let largest = b
        .delta
        .iter()
        .flatten()
        .flatten()
        .filter_map(|c| match c {
            wire::WireNumber::Int(n) => u64::try_from(*n).ok(),
            wire::WireNumber::Pair(_) => None,
        })
        .max()
        .unwrap_or(0);
    let cap = b.delta_cap.unwrap_or(largest);
    let delta = b
        .delta
        .iter()
        .enumerate()
        .map(|(s, row)| {
            row.iter()
                .enumerate()
                .map(|(a, coords)| index_value(coords, cap, format_args!("abstract.delta[{s}][{a}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AbstractTables {
        size: b.size,
        meet: b.meet.clone(),
        family: b.family.clone(),
        delta,
        increment: b.increment.clone(),
        gamma: b.gamma.clone(),
        family_action: b.family_action.clone(),
    })
}

fn rationals(row: &[wire::WireNumber], path: impl Display) -> Result<Vec<Rational>, Failure> {
    row.iter()
        .map(|x| x.to_rational())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|m| Failure::malformed(format!("{path}: {m}")))
}

fn metric_structure(file: &InstanceFile) -> Result<(MetricStructure, &wire::Query), Failure> {
    let b = file.metric.as_ref().expect("checked by parse");
    let dist = match &b.distance {
        Some(rows) => rows
            .iter()
            .enumerate()
            .map(|(i, r)| rationals(r, format_args!("metric.distance[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        None => (0..b.points)
            .map(|x| {
                (0..b.points)
                    .map(|y| Rational::from_integer(i64::from(x != y)))
                    .collect()
            })
            .collect(),
    };
    if dist.len() != b.points {
        return Err(Failure::malformed(format!(
            "metric.distance: {} rows for {} points",
            dist.len(),
            b.points
        )));
    }
    let formulas = b
        .formulas
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let values = f
                .values
                .iter()
                .enumerate()
                .map(|(x, r)| rationals(r, format_args!("metric.formulas[{i}].values[{x}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Formula {
                name: f.name.clone(),
                values,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let group = b.group.as_ref().map(|g| GroupTable {
        mul: g.mul.clone(),
        inv: g.inv.clone(),
    });
    let vector = b.vector.as_ref().map(|v| VectorTable {
        p: v.p,
        coords: v.coords.clone(),
    });
    Ok((
        MetricStructure::new(dist, formulas, group, vector).at("metric")?,
        &b.query,
    ))
}

// ---------------------------------------------------------------------------
// Encoding

fn rational_json(r: &Rational) -> Value {
    json!([r.numer(), r.denom()])
}

fn index_value_json(v: &IndexValue) -> Value {
    match v {
        IndexValue::Nat { coords, .. } => json!(coords),
        IndexValue::Rat(coords) => Value::Array(coords.iter().map(rational_json).collect()),
    }
}

fn subgroup_json(g: &PermGroup, s: &Subgroup) -> Value {
    let gens: Vec<&[u32]> = g.generators_of(s).into_iter().map(|i| g.element(i).images()).collect();
    json!({ "order": s.order(), "generators": gens })
}

fn certificate_json<E>(kind: Kind, cert: &Certificate<E>, enc: &dyn Fn(&E) -> Value) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(kind.name()));
    m.insert("invariant_element".into(), enc(&cert.invariant_element));
    m.insert("gamma_fixed".into(), json!(cert.gamma_fixed));
    m.insert(
        "measures".into(),
        Value::Array(
            cert.measures
                .iter()
                .map(|x| json!({ "forward": x.forward, "backward": x.backward }))
                .collect(),
        ),
    );
    m.insert("orbit_size".into(), json!(cert.orbit_size));
    m.insert("strong_element".into(), enc(&cert.strong_element));
    m.insert("argmax_indices".into(), json!(cert.argmax_indices));
    m.insert(
        "m_generators".into(),
        Value::Array(cert.m_generators.generators().iter().map(index_value_json).collect()),
    );
    m.insert("mode_agreement".into(), json!(cert.mode_agreement));
    m.insert("sandwich".into(), json!(cert.sandwich));
    m.insert("bound".into(), json!(cert.bound));
    m.insert("verified".into(), json!(true));
    if let Some(trace) = &cert.trace {
        let steps = trace
            .iter()
            .map(|step| match step {
                TraceStep::Start { strong, n } => json!({ "step": "start", "strong": enc(strong), "n": enc(n) }),
                TraceStep::Absorb {
                    with,
                    n_with,
                    strong,
                    n,
                } => json!({
                    "step": "absorb",
                    "with": enc(with),
                    "n_with": enc(n_with),
                    "strong": enc(strong),
                    "n": enc(n),
                }),
            })
            .collect();
        m.insert("trace".into(), Value::Array(steps));
    }
    Value::Object(m)
}

fn report_json(kind: Kind, r: &ValidationReport) -> Value {
    json!({
        "kind": kind.name(),
        "pairs_checked": r.pairs_checked,
        "exhaustive": r.exhaustive,
        "clean": r.is_clean(),
        "violations": r.violations.iter().map(|v| json!({ "kind": v.kind.name(), "detail": v.detail })).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

// ---------------------------------------------------------------------------
// Commands

fn solve_options(file: &InstanceFile, mode: Option<ModeArg>, trace: bool) -> SolveOptions {
    let mode = match (mode, file.options.mode) {
        (Some(ModeArg::Full), _) | (None, Some(wire::Mode::Full)) => SolveMode::Full,
        (Some(ModeArg::Proof), _) | (None, Some(wire::Mode::Proof)) => SolveMode::Proof,
        _ => SolveMode::Both,
    };
    SolveOptions {
        mode,
        trace,
        ..SolveOptions::default()
    }
}

fn solve_verified<I: CloseKnitInstance>(
    kind: Kind,
    inst: &I,
    opts: &SolveOptions,
    enc: &dyn Fn(&I::Elem) -> Value,
) -> Result<(Certificate<I::Elem>, Value), Failure> {
    let cert = solve(inst, opts)?;
    if !verify_certificate(inst, &cert) {
        return Err(Failure::internal("certificate failed re-verification"));
    }
    let value = certificate_json(kind, &cert, enc);
    Ok((cert, value))
}

pub fn cmd_solve_value(file: &InstanceFile, opts: &SolveOptions) -> Result<Value, Failure> {
    let kind = file.kind;
    match kind {
        Kind::Set => {
            let inst = set_instance(file)?;
            Ok(solve_verified(kind, &inst, opts, &|s: &FiniteSubset| json!(s.to_vec()))?.1)
        }
        Kind::Group => {
            let (inst, g) = group_instance(file, file.group.as_ref().expect("checked by parse"), "group")?;
            Ok(solve_verified(kind, &inst, opts, &|s| subgroup_json(&g, s))?.1)
        }
        Kind::Vector => {
            let inst = vector_instance(file)?;
            Ok(solve_verified(kind, &inst, opts, &|s: &SubspaceBasis| json!(s.rows()))?.1)
        }
        Kind::Abstract => {
            let inst = load_abstract(abstract_tables(file)?).at("abstract")?;
            Ok(solve_verified(kind, &inst, opts, &|x: &usize| json!(x))?.1)
        }
        Kind::Galois => {
            let b = file.galois.as_ref().expect("checked by parse");
            let (group, seeds, gamma) = group_parts(file, b, "galois")?;
            let inst = GaloisInstance::new(group.clone(), seeds.clone(), gamma.clone());
            let sol = solve_galois(&inst, file.options.max_orbit, opts).at("galois")?;
            let closed = GroupInstance::new(group.clone(), seeds, gamma)
                .at("galois")?
                .close(file.options.max_orbit)
                .at("galois")?;
            if !verify_certificate(&closed, &sol.certificate) {
                return Err(Failure::internal("certificate failed re-verification"));
            }
            let mut value = certificate_json(kind, &sol.certificate, &|s| subgroup_json(&group, s));
            let d = &sol.descriptor;
            value["descriptor"] = json!({
                "index_in_group": d.index_in_group,
                "normal_in_group": d.normal_in_group,
                "members": d.members.iter().map(|m| json!({
                    "member_side": m.member_side,
                    "invariant_side": m.invariant_side,
                })).collect::<Vec<_>>(),
                "note": d.note,
            });
            Ok(value)
        }
        Kind::Metric => Err(Failure::malformed(
            "metric instances are evaluated with eval-delta, not solved",
        )),
    }
}

fn cmd_solve(file: &InstanceFile, mode: Option<ModeArg>, trace: bool) -> Result<Value, Failure> {
    cmd_solve_value(file, &solve_options(file, mode, trace))
}

fn cmd_check(file: &InstanceFile, samples: usize, seed: u64) -> Result<(Value, bool), Failure> {
    let kind = file.kind;
    let report = match kind {
        Kind::Set => validate_conditions(&set_instance(file)?, samples, seed),
        Kind::Group => validate_conditions(
            &group_instance(file, file.group.as_ref().expect("checked"), "group")?.0,
            samples,
            seed,
        ),
        Kind::Galois => validate_conditions(
            &group_instance(file, file.galois.as_ref().expect("checked"), "galois")?.0,
            samples,
            seed,
        ),
        Kind::Vector => validate_conditions(&vector_instance(file)?, samples, seed),
        Kind::Abstract => {
            let lattice = AbstractLattice::from_tables(abstract_tables(file)?).at("abstract")?;
            let violations = lattice.violations();
            ValidationReport {
                pairs_checked: lattice.size() * lattice.size() * lattice.family().len(),
                exhaustive: true,
                violations,
                notes: vec!["semilattice laws, equivariance and every pair t ≤ s checked exhaustively".into()],
            }
        }
        Kind::Metric => {
            return Err(Failure::malformed(
                "metric instances are validated on load; use eval-delta",
            ))
        }
    };
    Ok((report_json(kind, &report), report.is_clean()))
}

fn oracle_json<E: PartialEq>(kind: Kind, bound: u64, engine: &E, feasible: &[E], enc: &dyn Fn(&E) -> Value) -> Value {
    json!({
        "kind": kind.name(),
        "bound": bound,
        "engine_output": enc(engine),
        "engine_output_feasible": feasible.contains(engine),
        "count": feasible.len(),
        "feasible": feasible.iter().map(enc).collect::<Vec<_>>(),
    })
}

fn cmd_oracle(file: &InstanceFile, bound: u64) -> Result<Value, Failure> {
    let kind = file.kind;
    let opts = SolveOptions::default();
    match kind {
        Kind::Set => {
            let inst = set_instance(file)?;
            let cert = solve(&inst, &opts)?;
            let feasible = oracle::feasible_sets(&inst, bound)?;
            Ok(oracle_json(kind, bound, &cert.invariant_element, &feasible, &|s| {
                json!(s.to_vec())
            }))
        }
        Kind::Group | Kind::Galois => {
            let block = file.group.as_ref().or(file.galois.as_ref()).expect("checked by parse");
            let (inst, g) = group_instance(file, block, kind.name())?;
            let cert = solve(&inst, &opts)?;
            let feasible = oracle::feasible_subgroups(&inst, bound)?;
            Ok(oracle_json(kind, bound, &cert.invariant_element, &feasible, &|s| {
                subgroup_json(&g, s)
            }))
        }
        Kind::Vector => {
            let inst = vector_instance(file)?;
            let cert = solve(&inst, &opts)?;
            let feasible = oracle::feasible_subspaces(&inst, bound)?;
            Ok(oracle_json(kind, bound, &cert.invariant_element, &feasible, &|s| {
                json!(s.rows())
            }))
        }
        Kind::Abstract => {
            let inst = load_abstract(abstract_tables(file)?).at("abstract")?;
            let cert = solve(&inst, &opts)?;
            let feasible = oracle::feasible_abstract(&inst, bound);
            Ok(oracle_json(kind, bound, &cert.invariant_element, &feasible, &|x| {
                json!(x)
            }))
        }
        Kind::Metric => Err(Failure::malformed("the oracle does not apply to metric instances")),
    }
}

fn cmd_eval_delta(file: &InstanceFile) -> Result<Value, Failure> {
    if file.kind != Kind::Metric {
        return Err(Failure::malformed("eval-delta needs a metric instance"));
    }
    let (st, q) = metric_structure(file)?;
    let form = match q.form {
        wire::Form::Set => contlogic::Form::Set,
        wire::Form::Group => contlogic::Form::Group,
        wire::Form::Vector => contlogic::Form::Vector,
    };
    let gamma = q.gamma.as_ref().map(|g| perm(g, "metric.query.gamma")).transpose()?;
    let default_n = match (form, &file.metric.as_ref().expect("checked").vector) {
        (contlogic::Form::Vector, Some(v)) => v.coords.first().map_or(0, Vec::len) + 1,
        _ => st.points(),
    };
    let n_max = q.n_max.unwrap_or(default_n);
    let rows = st
        .sweep(form, &q.subset, q.parameter, gamma.as_ref(), n_max)
        .at("metric.query")?;
    let names: Vec<&str> = st.formulas().iter().map(|f| f.name.as_str()).collect();
    Ok(json!({
        "kind": "metric",
        "form": format!("{:?}", q.form).to_lowercase(),
        "subset": q.subset,
        "parameter": q.parameter,
        "formulas": names,
        "rows": rows.iter().map(|r| json!({
            "formula": names[r.formula],
            "n": r.n,
            "value": rational_json(&r.value),
        })).collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_requires_exactly_the_named_block() {
        assert!(parse(r#"{"kind":"set","set":{"carrier_size":2,"seeds":[[0]]}}"#).is_ok());
        let both = r#"{"kind":"set","set":{"carrier_size":2,"seeds":[[0]]},"vector":{"p":2,"dim":1,"seeds":[]}}"#;
        assert_eq!(parse(both).unwrap_err().code, EXIT_MALFORMED);
        assert_eq!(parse(r#"{"kind":"set"}"#).unwrap_err().code, EXIT_MALFORMED);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = parse(r#"{"kind":"set","set":{"carrier_size":2,"seeds":[[0]],"colour":1}}"#).unwrap_err();
        assert!(e.message.contains("colour"));
    }

    #[test]
    fn options_default() {
        let f = parse(r#"{"kind":"set","set":{"carrier_size":2,"seeds":[[0]]}}"#).unwrap();
        assert_eq!((f.options.max_orbit, f.options.max_elements), (10_000, 100_000));
        assert_eq!(solve_options(&f, None, false).mode, SolveMode::Both);
        assert_eq!(solve_options(&f, Some(ModeArg::Proof), false).mode, SolveMode::Proof);
    }

    #[test]
    fn error_codes() {
        assert_eq!(code_of(&Error::OrbitCapExceeded { cap: 1 }), EXIT_CAP);
        assert_eq!(code_of(&Error::IncrementViolation("x".into())), EXIT_VIOLATIONS);
        assert_eq!(code_of(&Error::Internal("x".into())), EXIT_INTERNAL);
        assert_eq!(code_of(&Error::Invalid("x".into())), EXIT_MALFORMED);
    }

    #[test]
    fn run_writes_to_given_streams() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["closeknit", "solve"], &mut out, &mut err), EXIT_MALFORMED);
        assert!(out.is_empty() && !err.is_empty());
    }
}
