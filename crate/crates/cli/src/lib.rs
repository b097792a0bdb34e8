//! `ppdual`: formula language, sessions and subcommands.
//!
//! Every subcommand builds a [`Report`]. Text output prints one line per
//! record; `--format jsonl` prints the report as JSON lines. The exit code is
//! 0 when every record passes, 1 on a failed check, 2 on a usage error and 3
//! when something could not be decided at the current bound.

pub mod dsl;
pub mod session;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ppdual_core::algebra::decompose_indecomposable;
use ppdual_core::lattice::dot::to_dot;
use ppdual_core::lattice::{antiiso_between, Stability};
use ppdual_core::suite::battery::{battery_report, Battery};
use ppdual_core::suite::Suite;
use ppdual_core::{
    character_dual, construct_dual_element, definable_witness, double_dual_embed, dual_defcat,
    dual_in, dualize_sequence, in_defcat, in_limclosure_fp, is_pure, max_ideal_avoiding, pp_dual,
    pp_equivalent, pp_lattice, pp_solve, pp_type_of, same_prod_closure, thm51_check,
    verify_almost_dual_pair, ziegler_irreducible, AlmostDualPairWitness, DualityKind,
    FiniteModule, FiniteRing, Membership, PPFormula, ProdVerdict, Record, Report, Shadow,
    ShortExactSequence, Side, Verdict, DEFAULT_BOUND, MAX_BOUND,
};

pub use dsl::{parse_formula, DslError, ParsedFormula};
pub use session::{Session, BOUND_ENV, SHIPPED_SUITE};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("formula: {0}")]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Core(#[from] ppdual_core::Error),
}

impl CliError {
    /// Size limits mean the question was not decided; other library errors are failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Dsl(_) => 2,
            CliError::Core(ppdual_core::Error::SizeGuard { .. } | ppdual_core::Error::EndTooLarge { .. }) => 3,
            CliError::Core(ppdual_core::Error::InvalidArgument(_) | ppdual_core::Error::Mismatch(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Jsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DualityArg {
    /// Hom into Q/Z, realized with target Z/e for e the exponent.
    Character,
    /// Hom into the base prime field of the ring.
    Field,
}

#[derive(Debug, Parser)]
#[command(name = "ppdual", version, about = "pp formulas and duality over finite rings and modules")]
pub struct Cli {
    /// Ring and module definition files loaded on top of the shipped ones.
    #[arg(long = "catalog", global = true, value_name = "FILE")]
    pub catalogs: Vec<PathBuf>,
    /// Enumeration bound for formula scans (bound variables and constraints).
    #[arg(long, global = true, env = BOUND_ENV, default_value_t = DEFAULT_BOUND)]
    pub bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = DualityArg::Character)]
    pub duality: DualityArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Leave the timestamp out of the report header.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct FormulaArgs {
    #[arg(long)]
    pub formula: String,
    /// Module whose ring and side the formula uses.
    #[arg(long, conflicts_with_all = ["ring", "side"])]
    pub module: Option<String>,
    #[arg(long, requires = "side")]
    pub ring: Option<String>,
    #[arg(long, value_parser = parse_side)]
    pub side: Option<Side>,
}

fn parse_side(s: &str) -> Result<Side, String> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        _ => Err(format!("expected left or right, found {s:?}")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load definition files and list their objects.
    Load { files: Vec<PathBuf> },
    /// Check the ring and module axioms of loaded objects.
    Validate { names: Vec<String> },
    /// Solution set of a formula in a module.
    Solve {
        #[arg(long)]
        module: String,
        #[arg(long)]
        formula: String,
    },
    /// The elementary dual of a formula.
    Dual(FormulaArgs),
    /// The double dual, checked equivalent to the formula on the loaded modules.
    Ddual(FormulaArgs),
    /// phi(M*) against the annihilator of D phi(M); the formula is read on the side of M*.
    CheckAnnihilator {
        #[arg(long)]
        module: String,
        #[arg(long)]
        formula: String,
    },
    /// The lattice of pp-definable subgroups.
    Lattice {
        #[arg(long)]
        module: String,
        #[arg(long)]
        dot: bool,
    },
    /// Irreducibility of the pp-type of an element.
    Ziegler {
        #[arg(long)]
        module: String,
        #[arg(long)]
        element: usize,
    },
    /// A maximal ideal avoiding an element and the dual element it yields.
    MaxIdeal {
        #[arg(long)]
        module: String,
        #[arg(long)]
        element: usize,
    },
    /// The dual module.
    CharDual {
        #[arg(long)]
        module: String,
        /// Include the addition and action tables.
        #[arg(long)]
        tables: bool,
    },
    /// Krull-Schmidt decomposition.
    Decompose {
        #[arg(long)]
        module: String,
    },
    /// Purity of the inclusion of the submodule generated by some elements.
    Purity {
        #[arg(long)]
        module: String,
        #[arg(long, value_delimiter = ',')]
        generators: Vec<usize>,
    },
    /// Membership in the definable subcategory generated by some modules.
    DefcatMember {
        #[arg(long)]
        module: String,
        #[arg(long, value_delimiter = ',', required = true)]
        generators: Vec<String>,
        /// Modules used to find separating pairs; defaults to every loaded module over the ring.
        #[arg(long, value_delimiter = ',')]
        probes: Vec<String>,
    },
    /// The dual definable subcategory.
    DefcatDual {
        #[arg(long, value_delimiter = ',', required = true)]
        generators: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        probes: Vec<String>,
    },
    /// Compare Prod closures of two modules, or of the two duals of one module.
    ProdCompare {
        #[arg(long, conflicts_with_all = ["x", "y"])]
        module: Option<String>,
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Membership in the closure under direct limits of finite sums.
    LimMember {
        #[arg(long)]
        module: String,
        #[arg(long, value_delimiter = ',', required = true)]
        from: Vec<String>,
    },
    /// Direct-limit closure against Prod of duals on a test set.
    Thm51 {
        #[arg(long, value_delimiter = ',', required = true)]
        from: Vec<String>,
        /// Defaults to every loaded module over the ring.
        #[arg(long, value_delimiter = ',')]
        testset: Vec<String>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Check a candidate almost dual pair of classes.
    DualpairVerify {
        #[arg(long)]
        ring: String,
        /// everything | zero | summands:A,B | definable:A,B
        #[arg(long)]
        s: String,
        /// As for --s; left modules named here stand for their duals.
        #[arg(long)]
        p: String,
        /// Left modules; defaults to every loaded left module over the ring.
        #[arg(long, value_delimiter = ',')]
        testset: Vec<String>,
    },
    /// Run the acceptance battery.
    Suite {
        /// Suite definitions replacing the shipped ones.
        #[arg(long)]
        suite: Option<PathBuf>,
        /// Run only these criteria (1 to 8; 9 compares two full runs).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
    },
}

/// What a command produced.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub report: Report,
    /// Human-readable lines; printed instead of the records in text mode when present.
    pub text: Vec<String>,
}

impl Output {
    fn push(&mut self, r: Record) {
        self.report.push(r);
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }
}

fn set_text(items: impl IntoIterator<Item = usize>) -> String {
    let v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn tuple_text(t: &[usize]) -> String {
    if t.len() == 1 {
        t[0].to_string()
    } else {
        let v: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        format!("({})", v.join(", "))
    }
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

fn check_element(m: &FiniteModule, a: usize) -> CliResult<()> {
    if a >= m.size() {
        return Err(CliError::Usage(format!("element {a} is outside {} (size {})", m.name(), m.size())));
    }
    Ok(())
}

fn module_formula(s: &Session, module: &str, text: &str, side: Option<Side>) -> CliResult<(FiniteModule, PPFormula)> {
    let m = s.module(module)?.clone();
    let f = parse_formula(text, m.ring(), side.unwrap_or(m.side()))?.formula;
    Ok((m, f))
}

fn formula_args(s: &Session, a: &FormulaArgs) -> CliResult<(FiniteRing, Side, PPFormula)> {
    let (ring, side) = match (&a.module, &a.ring, a.side) {
        (Some(m), _, _) => {
            let m = s.module(m)?;
            (m.ring().clone(), m.side())
        }
        (None, Some(r), Some(side)) => (s.ring(r)?.clone(), side),
        _ => return Err(CliError::Usage("give --module, or --ring with --side".into())),
    };
    let f = parse_formula(&a.formula, &ring, side)?.formula;
    Ok((ring, side, f))
}

/// Loaded modules over the ring and side, plus the regular module.
fn testset(s: &Session, ring: &FiniteRing, side: Side) -> Vec<FiniteModule> {
    let mut t = vec![FiniteModule::regular(ring, side).with_name(format!("{}[{side}]", ring.name()))];
    t.extend(s.modules_over(ring, side));
    t
}

fn same_ring(ms: &[FiniteModule]) -> CliResult<(FiniteRing, Side)> {
    let first = ms.first().ok_or_else(|| CliError::Usage("no modules given".into()))?;
    for m in ms {
        if !m.ring().same_as(first.ring()) || m.side() != first.side() {
            return Err(CliError::Usage(format!(
                "{} and {} are not over the same ring and side",
                first.name(),
                m.name()
            )));
        }
    }
    Ok((first.ring().clone(), first.side()))
}

fn probes(s: &Session, names: &[String], ring: &FiniteRing, side: Side) -> CliResult<Vec<FiniteModule>> {
    if names.is_empty() {
        Ok(testset(s, ring, side))
    } else {
        s.modules(names)
    }
}

fn parse_shadow(s: &Session, text: &str, dualize: bool, kind: DualityKind) -> CliResult<Shadow> {
    let (head, rest) = match text.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (text, None),
    };
    let names = || -> CliResult<Vec<FiniteModule>> {
        let list: Vec<String> = rest
            .unwrap_or("")
            .split(',')
            .map(|x| x.trim().to_string())
            .filter(|x| !x.is_empty())
            .collect();
        if list.is_empty() {
            return Err(CliError::Usage(format!("shadow {text:?} lists no modules")));
        }
        s.modules(&list)?
            .into_iter()
            .map(|m| {
                if dualize && m.side() == Side::Left {
                    Ok(dual_in(&m, kind)?.dual)
                } else {
                    Ok(m)
                }
            })
            .collect()
    };
    match head {
        "everything" => Ok(Shadow::Everything),
        "zero" => Ok(Shadow::Zero),
        "summands" => Ok(Shadow::Summands(names()?)),
        "definable" => {
            let gens = names()?;
            let (ring, side) = same_ring(&gens)?;
            let mut probes = testset(s, &ring, side);
            if dualize {
                for m in s.modules_over(&ring, Side::Left) {
                    probes.push(dual_in(&m, kind)?.dual);
                }
            }
            Ok(Shadow::Definable(definable_witness(&ring, side, &gens, &probes, s.bound)?))
        }
        _ => Err(CliError::Usage(format!(
            "unknown shadow {text:?}; expected everything, zero, summands:.. or definable:.."
        ))),
    }
}

fn membership_json(m: &Membership) -> Value {
    serde_json::to_value(m).expect("serializable")
}

/// Parses `argv` (program name first) and runs the command in `session`.
pub fn run_command<I, T>(session: &mut Session, argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    match execute(session, &cli) {
        Ok((out, name)) => {
            let code = out.report.exit_code();
            (code, render(session, &cli, &name, &out))
        }
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}

fn header(session: &Session, cli: &Cli, name: &str) -> Value {
    let mut h = json!({
        "tool": "ppdual",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "bound": session.bound,
        "duality": match session.kind {
            DualityKind::Character => "character".to_string(),
            DualityKind::Field(p) => format!("field F{p}"),
        },
    });
    if session.timestamp && !cli.no_timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        h["timestamp"] = json!(secs);
    }
    h
}

fn render(session: &Session, cli: &Cli, name: &str, out: &Output) -> String {
    let h = header(session, cli, name);
    match cli.format {
        Format::Jsonl => out.report.to_jsonl(Some(&h)),
        Format::Text => {
            let mut s = String::new();
            if out.text.is_empty() {
                for r in out.report.records() {
                    s.push_str(&format!("{} {} [{}]", verdict_text(r.verdict), r.check, r.inputs.join(", ")));
                    if !r.detail.is_null() {
                        s.push_str(&format!(" {}", r.detail));
                    }
                    s.push('\n');
                }
            } else {
                for l in &out.text {
                    s.push_str(l);
                    s.push('\n');
                }
            }
            let sum = out.report.summary();
            s.push_str(&format!(
                "# {name}: {} pass, {} fail, {} inconclusive, bound {}\n",
                sum.pass, sum.fail, sum.inconclusive, session.bound
            ));
            s
        }
    }
}

fn execute(session: &mut Session, cli: &Cli) -> CliResult<(Output, String)> {
    if cli.bound == 0 || cli.bound > MAX_BOUND {
        return Err(CliError::Usage(format!("--bound must lie in 1..={MAX_BOUND}")));
    }
    session.bound = cli.bound;
    for path in &cli.catalogs {
        session.load_file(path)?;
    }
    let mut out = Output::default();
    let name = command_name(&cli.command);
    if let DualityArg::Field = cli.duality {
        session.kind = DualityKind::Field(0);
    }
    run(session, &cli.command, &mut out)?;
    Ok((out, name.to_string()))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Load { .. } => "load",
        Command::Validate { .. } => "validate",
        Command::Solve { .. } => "solve",
        Command::Dual(_) => "dual",
        Command::Ddual(_) => "ddual",
        Command::CheckAnnihilator { .. } => "check-annihilator",
        Command::Lattice { .. } => "lattice",
        Command::Ziegler { .. } => "ziegler",
        Command::MaxIdeal { .. } => "max-ideal",
        Command::CharDual { .. } => "char-dual",
        Command::Decompose { .. } => "decompose",
        Command::Purity { .. } => "purity",
        Command::DefcatMember { .. } => "defcat-member",
        Command::DefcatDual { .. } => "defcat-dual",
        Command::ProdCompare { .. } => "prod-compare",
        Command::LimMember { .. } => "lim-member",
        Command::Thm51 { .. } => "thm51",
        Command::DualpairVerify { .. } => "dualpair-verify",
        Command::Suite { .. } => "suite",
    }
}

/// The duality for modules over `ring`: the field dual needs a base field.
fn kind_for(session: &Session, ring: &FiniteRing) -> CliResult<DualityKind> {
    match session.kind {
        DualityKind::Character => Ok(DualityKind::Character),
        DualityKind::Field(_) => ring.base_field().map(DualityKind::Field).ok_or_else(|| {
            CliError::Usage(format!("{} has no base field; use --duality character", ring.name()))
        }),
    }
}

fn run(s: &mut Session, cmd: &Command, out: &mut Output) -> CliResult<()> {
    match cmd {
        Command::Load { files } => {
            if files.is_empty() {
                return Err(CliError::Usage("load needs at least one file".into()));
            }
            for f in files {
                let cat = s.load_file(f)?;
                for (n, r) in &cat.rings {
                    out.push(
                        Record::new("load", vec![n.clone()], Verdict::Pass)
                            .with_detail(json!({ "kind": "ring", "size": r.size() })),
                    );
                }
                for (n, m) in &cat.modules {
                    out.push(Record::new("load", vec![n.clone()], Verdict::Pass).with_detail(json!({
                        "kind": "module",
                        "ring": m.ring().name(),
                        "side": m.side().to_string(),
                        "size": m.size(),
                    })));
                }
            }
        }
        Command::Validate { names } => {
            for (n, v) in s.catalog.validate_all() {
                if names.is_empty() || names.contains(&n) {
                    out.push(
                        Record::new("validate", vec![n], Verdict::from_bool(v.is_pass()))
                            .with_detail(json!(v.to_string())),
                    );
                }
            }
            for n in names {
                if s.catalog.ring(n).is_none() && s.catalog.module(n).is_none() {
                    return Err(CliError::Usage(format!("unknown object {n:?}")));
                }
            }
        }
        Command::Solve { module, formula } => {
            let (m, f) = module_formula(s, module, formula, None)?;
            let sol = pp_solve(&f, &m)?;
            let closed = sol.check_closure(None);
            let text = format!("{{{}}}", sol.elements().iter().map(|t| tuple_text(t)).collect::<Vec<_>>().join(", "));
            out.line(text.clone());
            out.push(
                Record::new("solve", vec![m.name().to_string(), f.to_string()], Verdict::from_bool(closed.is_pass()))
                    .with_detail(json!({ "solutions": text, "size": sol.len(), "end_closed": closed.to_string() })),
            );
        }
        Command::Dual(a) => {
            let (_, _, f) = formula_args(s, a)?;
            let d = pp_dual(&f);
            out.line(d.to_string());
            out.push(
                Record::new("dual", vec![f.to_string()], Verdict::Pass)
                    .with_detail(json!({ "dual": d.to_string(), "side": d.side().to_string() })),
            );
        }
        Command::Ddual(a) => {
            let (ring, side, f) = formula_args(s, a)?;
            let dd = pp_dual(&pp_dual(&f));
            let t = testset(s, &ring, side);
            let eq = pp_equivalent(&f, &dd, &t)?;
            out.line(dd.to_string());
            out.line(format!("{} on {} modules", if eq { "equivalent" } else { "NOT equivalent" }, t.len()));
            out.push(
                Record::new("ddual", vec![f.to_string()], Verdict::from_bool(eq))
                    .with_detail(json!({ "double_dual": dd.to_string(), "testset": t.len() })),
            );
        }
        Command::CheckAnnihilator { module, formula } => {
            let m = s.module(module)?.clone();
            let kind = kind_for(s, m.ring())?;
            let f = parse_formula(formula, m.ring(), m.side().opposite())?.formula;
            let dm = dual_in(&m, kind)?;
            let ok = ppdual_core::annihilator_identity_check(&f, &dm)?;
            let dphi = pp_solve(&pp_dual(&f), &m)?.to_set();
            out.line(verdict_text(Verdict::from_bool(ok)));
            out.push(
                Record::new("check_annihilator", vec![m.name().to_string(), f.to_string()], Verdict::from_bool(ok))
                    .with_detail(json!({
                        "phi_of_dual_size": pp_solve(&f, &dm.dual)?.len(),
                        "dual_formula_in_module": set_text(dphi.iter()),
                    })),
            );
        }
        Command::Lattice { module, dot } => {
            let m = s.module(module)?.clone();
            let l = pp_lattice(&m, s.bound)?;
            let ok = l.verify()? && l.modular_violation().is_none();
            let verdict = if !ok {
                Verdict::Fail
            } else if l.stability() == Stability::Unsettled {
                Verdict::Inconclusive
            } else {
                Verdict::Pass
            };
            if *dot {
                out.line(to_dot(&l).trim_end().to_string());
            } else {
                for (i, e) in l.elements().iter().enumerate() {
                    out.line(format!("{i}: {} by {}", set_text(e.set.iter()), e.witness));
                }
            }
            out.push(
                Record::new("lattice", vec![m.name().to_string()], verdict)
                    .with_detail(json!({
                        "elements": l.elements().iter().map(|e| set_text(e.set.iter())).collect::<Vec<_>>(),
                        "stability": l.stability(),
                        "modular": l.modular_violation().is_none(),
                    }))
                    .with_bound(l.bound()),
            );
        }
        Command::Ziegler { module, element } => {
            let m = s.module(module)?.clone();
            check_element(&m, *element)?;
            let l = pp_lattice(&m, s.bound)?;
            let p = pp_type_of(*element, &l)?;
            let z = ziegler_irreducible(&l, &p)?;
            out.line(format!(
                "type of {element} in {}: {}{}",
                m.name(),
                if z.irreducible { "irreducible" } else { "reducible" },
                z.witness.map(|(a, b)| format!(" (witness {a}, {b})")).unwrap_or_default()
            ));
            out.push(
                Record::new("ziegler", vec![m.name().to_string(), element.to_string()], Verdict::Pass)
                    .with_detail(json!({
                        "irreducible": z.irreducible,
                        "type": p.members,
                        "witness": z.witness,
                    }))
                    .with_bound(l.bound()),
            );
        }
        Command::MaxIdeal { module, element } => {
            let m = s.module(module)?.clone();
            check_element(&m, *element)?;
            if *element == m.zero() {
                return Err(CliError::Usage("every ideal contains 0; pick a nonzero element".into()));
            }
            let kind = kind_for(s, m.ring())?;
            let l = pp_lattice(&m, s.bound)?;
            let ideal = max_ideal_avoiding(&l, *element)?;
            let dual = dual_in(&m, kind)?;
            let dl = pp_lattice(&dual.dual, s.bound)?;
            let anti = antiiso_between(&l, dual, dl)?;
            let de = construct_dual_element(&l, &ideal, *element, &anti)?;
            let d = &anti.dual;
            let g = ideal.generator(&l);
            let kills = l.set(g).iter().all(|x| d.eval(de.character, x) == 0);
            let z = ziegler_irreducible(&anti.dual_lattice, &de.pp_type)?;
            let ok = d.eval(de.character, *element) != 0 && kills && de.matches_prediction() && z.irreducible;
            out.line(format!("ideal generated by {}", set_text(l.set(g).iter())));
            out.line(format!("dual element {} with values {:?}", de.character, d.character(de.character)));
            out.line(format!(
                "pp-type irreducible: {}, matches prediction: {}",
                z.irreducible,
                de.matches_prediction()
            ));
            out.push(
                Record::new("max_ideal", vec![m.name().to_string(), element.to_string()], Verdict::from_bool(ok))
                    .with_detail(json!({
                        "ideal": ideal.members,
                        "generator": set_text(l.set(g).iter()),
                        "dual_element": de.character,
                        "type": de.pp_type.members,
                        "predicted": de.predicted,
                        "irreducible": z.irreducible,
                    }))
                    .with_bound(l.bound()),
            );
        }
        Command::CharDual { module, tables } => {
            let m = s.module(module)?.clone();
            let kind = kind_for(s, m.ring())?;
            let d = dual_in(&m, kind)?;
            let dd = double_dual_embed(&m, kind)?;
            let nondeg = d.context.is_nondegenerate(m.size(), d.dual.size(), m.zero(), d.dual.zero());
            let ok = nondeg && d.dual.size() == m.size() && dd.is_isomorphism() && d.dual.validate().is_pass();
            let mut detail = json!({
                "size": d.dual.size(),
                "side": d.dual.side().to_string(),
                "target": d.target(),
                "nondegenerate": nondeg,
                "double_dual_isomorphism": dd.is_isomorphism(),
                "characters": d.characters(),
            });
            if *tables {
                detail["add_table"] = json!(d.dual.add_table());
                detail["action_table"] = json!(d.dual.action_table());
            }
            out.line(format!(
                "{} of {}: {} elements, {} module, values in Z/{}",
                match kind {
                    DualityKind::Character => "character dual".to_string(),
                    DualityKind::Field(p) => format!("F{p}-dual"),
                },
                m.name(),
                d.dual.size(),
                d.dual.side(),
                d.target()
            ));
            for (i, c) in d.characters().iter().enumerate() {
                out.line(format!("  f{i} = {c:?}"));
            }
            out.push(Record::new("char_dual", vec![m.name().to_string()], Verdict::from_bool(ok)).with_detail(detail));
        }
        Command::Decompose { module } => {
            let m = s.module(module)?.clone();
            let d = decompose_indecomposable(&m)?;
            let ok = d.verify();
            for (i, sm) in d.summands.iter().enumerate() {
                out.line(format!(
                    "summand {i}: {} elements, image {}",
                    sm.module.size(),
                    set_text(sm.inclusion.image().iter())
                ));
            }
            out.push(
                Record::new("decompose", vec![m.name().to_string()], Verdict::from_bool(ok))
                    .with_detail(json!({ "sizes": d.sizes() })),
            );
        }
        Command::Purity { module, generators } => {
            let m = s.module(module)?.clone();
            for &g in generators {
                check_element(&m, g)?;
            }
            let sub = m.span(generators);
            let seq = ShortExactSequence::from_submodule(&m, &sub)?;
            let kind = kind_for(s, m.ring())?;
            let p = is_pure(&seq, s.bound)?;
            let d = dualize_sequence(&seq, kind)?;
            let ok = p.methods_agree && d.split == p.pure;
            out.line(format!(
                "submodule {} is {}pure; dual sequence {}split",
                set_text(sub.iter()),
                if p.pure { "" } else { "not " },
                if d.split { "" } else { "not " }
            ));
            if let Some(f) = &p.separating_formula {
                out.line(format!("separating formula: {f}"));
            }
            let mut detail = serde_json::to_value(&p).expect("serializable");
            detail["dual_split"] = json!(d.split);
            detail["submodule"] = json!(set_text(sub.iter()));
            out.push(
                Record::new("purity", vec![m.name().to_string(), seq.describe()], Verdict::from_bool(ok))
                    .with_detail(detail)
                    .with_bound(p.bound),
            );
        }
        Command::DefcatMember {
            module,
            generators,
            probes: probe_names,
        } => {
            let x = s.module(module)?.clone();
            let gens = s.modules(generators)?;
            let (ring, side) = same_ring(&gens)?;
            let pr = probes(s, probe_names, &ring, side)?;
            let w = definable_witness(&ring, side, &gens, &pr, s.bound)?;
            let res = in_defcat(&x, &w)?;
            out.line(format!("{} in <{}>: {}", x.name(), generators.join(", "), res.member));
            if let Some(p) = &res.separating {
                out.line(format!("separating pair: {p}"));
            }
            out.push(
                Record::new("defcat_member", vec![x.name().to_string(), generators.join(",")], Verdict::Pass)
                    .with_detail(json!({
                        "member": res.member,
                        "separating_pair": res.separating.as_ref().map(|p| p.to_string()),
                        "pairs": w.closed_pairs.len(),
                    }))
                    .with_bound(s.bound),
            );
        }
        Command::DefcatDual {
            generators,
            probes: probe_names,
        } => {
            let gens = s.modules(generators)?;
            let (ring, side) = same_ring(&gens)?;
            let kind = kind_for(s, &ring)?;
            let pr = probes(s, probe_names, &ring, side)?;
            let w = definable_witness(&ring, side, &gens, &pr, s.bound)?;
            let d = dual_defcat(&w, kind)?;
            let dd = dual_defcat(&d, kind)?;
            let mut involutive = dd.closed_pairs.len() == w.closed_pairs.len() && d.verify()?;
            for (p, q) in w.closed_pairs.iter().zip(&dd.closed_pairs) {
                involutive &= p.equivalent(q, &pr)?;
            }
            out.line(format!(
                "dual generators: {}",
                d.generators.iter().map(|g| g.name().to_string()).collect::<Vec<_>>().join(", ")
            ));
            for p in &d.closed_pairs {
                out.line(format!("  closed: {p}"));
            }
            out.push(
                Record::new("defcat_dual", vec![generators.join(",")], Verdict::from_bool(involutive))
                    .with_detail(json!({
                        "dual_side": d.side.to_string(),
                        "pairs": d.closed_pairs.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    }))
                    .with_bound(s.bound),
            );
        }
        Command::ProdCompare { module, x, y, k_max } => {
            let (xm, ym, strict, inputs) = match (module, x, y) {
                (Some(m), _, _) => {
                    let m = s.module(m)?.clone();
                    if m.ring().base_field().is_none() {
                        return Err(CliError::Usage(format!(
                            "{} has no base field for a second duality",
                            m.ring().name()
                        )));
                    }
                    let a = character_dual(&m)?.dual;
                    let b = ppdual_core::k_dual(&m)?.dual;
                    (a, b, true, vec![format!("{}*", m.name()), format!("{}^", m.name())])
                }
                (None, Some(x), Some(y)) => (
                    s.module(x)?.clone(),
                    s.module(y)?.clone(),
                    false,
                    vec![x.clone(), y.clone()],
                ),
                _ => return Err(CliError::Usage("give --module, or --x with --y".into())),
            };
            let k = k_max.unwrap_or(xm.size().max(ym.size()).max(1));
            let cmp = same_prod_closure(&xm, &ym, k)?;
            let verdict = match cmp.verdict {
                ProdVerdict::Inconclusive => Verdict::Inconclusive,
                ProdVerdict::Equivalent => Verdict::Pass,
                _ if strict => Verdict::Fail,
                _ => Verdict::Pass,
            };
            let (xn, yn) = (&inputs[0], &inputs[1]);
            out.line(match cmp.verdict {
                ProdVerdict::Equivalent => format!("Prod({xn}) = Prod({yn})"),
                ProdVerdict::XOnly => format!("{xn} in Prod({yn}), {yn} not in Prod({xn})"),
                ProdVerdict::YOnly => format!("{yn} in Prod({xn}), {xn} not in Prod({yn})"),
                ProdVerdict::Incomparable => format!("neither of {xn}, {yn} lies in Prod of the other"),
                ProdVerdict::Inconclusive => format!("undecided with powers up to {k}"),
            });
            out.push(
                Record::new("prod_compare", inputs, verdict).with_detail(json!({
                    "verdict": cmp.verdict,
                    "x_in_prod_y": membership_json(&cmp.x_in_prod_y),
                    "y_in_prod_x": membership_json(&cmp.y_in_prod_x),
                    "k_max": k,
                })),
            );
        }
        Command::LimMember { module, from } => {
            let m = s.module(module)?.clone();
            let b = s.modules(from)?;
            let member = in_limclosure_fp(&m, &b)?;
            out.line(format!("{} in lim <{}>: {member}", m.name(), from.join(", ")));
            out.push(
                Record::new("lim_member", vec![m.name().to_string(), from.join(",")], Verdict::Pass)
                    .with_detail(json!({ "member": member })),
            );
        }
        Command::Thm51 { from, testset: names, k_max } => {
            let b = s.modules(from)?;
            let (ring, side) = same_ring(&b)?;
            let kind = kind_for(s, &ring)?;
            let t = if names.is_empty() {
                testset(s, &ring, side)
            } else {
                s.modules(names)?
            };
            let rep = thm51_check(&b, &t, kind, *k_max)?;
            for row in &rep.rows {
                out.line(format!(
                    "{}: lim {} prod {} {}",
                    row.module,
                    row.in_lim_closure,
                    match &row.dual_in_prod {
                        Membership::Member { k } => format!("member (k = {k})"),
                        Membership::NonMember { .. } => "non-member".into(),
                        Membership::Inconclusive { .. } => "inconclusive".into(),
                    },
                    if row.agrees { "ok" } else { "VIOLATION" }
                ));
            }
            let verdict = if rep.violations > 0 {
                Verdict::Fail
            } else if rep.inconclusive > 0 {
                Verdict::Inconclusive
            } else {
                Verdict::Pass
            };
            out.push(
                Record::new("thm51", vec![from.join(",")], verdict)
                    .with_detail(serde_json::to_value(&rep).expect("serializable")),
            );
        }
        Command::DualpairVerify { ring, s: ss, p, testset: names } => {
            let ring = s.ring(ring)?.clone();
            let kind = kind_for(s, &ring)?;
            let left = if names.is_empty() {
                testset(s, &ring, Side::Left)
            } else {
                s.modules(names)?
            };
            let mut right = left
                .iter()
                .map(|m| Ok(dual_in(m, kind)?.dual))
                .collect::<CliResult<Vec<_>>>()?;
            right.extend(s.modules_over(&ring, Side::Right));
            let w = AlmostDualPairWitness {
                left_testset: left,
                right_testset: right,
                kind,
                s_shadow: parse_shadow(s, ss, false, kind)?,
                p_shadow: parse_shadow(s, p, true, kind)?,
            };
            let rep = verify_almost_dual_pair(&w)?;
            out.line(format!("almost dual pair: {}", if rep.pass { "yes" } else { "no" }));
            out.push(
                Record::new("dualpair_verify", vec![ss.clone(), p.clone()], Verdict::from_bool(rep.pass))
                    .with_detail(serde_json::to_value(&rep).expect("serializable"))
                    .with_bound(s.bound),
            );
        }
        Command::Suite { suite, criteria } => {
            let mut local = s.clone();
            if let Some(path) = suite {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                local.catalog = ppdual_core::io::parse_catalog(&text)?;
                local.suite_text = text;
            }
            let def = local.suite_definition()?;
            for c in criteria {
                if !(1..=9).contains(c) {
                    return Err(CliError::Usage(format!("criterion {c} is not in 1..=9")));
                }
            }
            let run_once = || -> CliResult<Vec<_>> {
                let battery = Battery::new(Suite::from_rings(&def.rings, def.max_carrier)?, s.bound);
                let ids: Vec<usize> = if criteria.is_empty() {
                    (1..=8).collect()
                } else {
                    criteria.iter().copied().filter(|&c| c <= 8).collect()
                };
                Ok(ids.into_iter().map(|i| battery.run(i)).collect::<Result<Vec<_>, _>>()?)
            };
            let outcomes = run_once()?;
            let mut report = battery_report(&outcomes);
            for o in &outcomes {
                out.line(format!(
                    "criterion {} [{}]: {} ({})",
                    o.id,
                    o.title,
                    if o.pass { "PASS" } else if o.inconclusive { "INCONCLUSIVE" } else { "FAIL" },
                    o.summary
                ));
            }
            if criteria.is_empty() || criteria.contains(&9) {
                let again = battery_report(&run_once()?);
                let same = again.to_jsonl(None) == report.to_jsonl(None);
                out.line(format!(
                    "criterion 9 [determinism]: {} ({} records compared)",
                    if same { "PASS" } else { "FAIL" },
                    report.records().len()
                ));
                report.push(
                    Record::new("criterion_9", vec!["determinism".into()], Verdict::from_bool(same))
                        .with_detail(json!({ "records": report.records().len() })),
                );
            }
            out.report.extend(report);
        }
    }
    Ok(())
}
