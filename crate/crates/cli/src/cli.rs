//! Subcommands. Each one reads a problem file, prints one JSON report on
//! stdout and maps its verdict to an exit code.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use diffcoh_core::algebra::{validate_diff_algebra, validate_diff_bimodule, Violation};
use diffcoh_core::cochain::DEFAULT_MAX_DEGREE;
use diffcoh_core::cohomology::{cohomology_dims, les_check, ComplexKind, LesNode};
use diffcoh_core::deformation::{check_deformation, infinitesimal, regular_context, trivialize, Trivialization};
use diffcoh_core::extension::{
    build_extension, class_of, cocycle_violation, cocycles_equivalent, extension_classes, extract_cocycle,
    normalize_extension, CocycleViolation, TwoCocycle,
};
use diffcoh_core::{Error, Matrix};
use serde_json::{json, Value};

use crate::problem::{self, matrix_rows, raw_cochain, scalars, ExtensionData, ParseError, Problem};

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Negative = 1,
    InputError = 2,
    Budget = 3,
}

#[derive(Debug, Parser)]
#[command(name = "diffcoh", version, about = "Exact cohomology of weighted differential algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the algebra and module axioms.
    Validate { file: PathBuf },
    /// Cohomology dimensions of the Hochschild, operator and combined complexes.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        max_degree: usize,
        /// Also report the reduced complex.
        #[arg(long)]
        reduced: bool,
        /// Include a basis of representatives for each group.
        #[arg(long)]
        representatives: bool,
        /// Check exactness of the long exact sequence.
        #[arg(long)]
        les: bool,
        /// Largest cochain degree any differential may be built in.
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        budget: usize,
    },
    /// Decide whether a named degree-2 pair is a cocycle.
    CocycleCheck {
        file: PathBuf,
        #[arg(long)]
        cochain: String,
    },
    /// Write the extension defined by a named cocycle as a new problem file.
    Extend {
        file: PathBuf,
        #[arg(long)]
        cocycle: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Read off the cocycle of an extension file through a named section.
    ExtractCocycle {
        file: PathBuf,
        #[arg(long)]
        section: String,
    },
    /// Look for φ with c1 − c2 = ∂_Diff(φ, 0).
    Equivalent {
        file: PathBuf,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
    },
    /// Check the deformation equations order by order.
    DeformCheck {
        file: PathBuf,
        #[arg(long)]
        deformation: String,
    },
    /// Gauge a deformation away order by order, or report the obstruction.
    Trivialize {
        file: PathBuf,
        #[arg(long)]
        deformation: String,
    },
}

/// A command's report and verdict.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
}

impl Outcome {
    fn new(pass: bool, report: Value) -> Self {
        Outcome { status: if pass { Status::Success } else { Status::Negative }, report }
    }
}

/// A failure before a verdict could be reached.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure { status: Status::InputError, message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Budget { .. } => Status::Budget,
            Error::NotACocycle { .. } | Error::Internal(_) => Status::Negative,
            _ => Status::InputError,
        };
        Failure { status, message: e.to_string() }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure { status: Status::InputError, message: message.into() }
}

fn load(path: &Path) -> Result<Problem, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(problem::parse(&text)?)
}

fn named<'a, T>(items: &'a std::collections::BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, Failure> {
    items.get(name).ok_or_else(|| input(format!("no {kind} named {name:?}")))
}

fn header(p: &Problem) -> Value {
    json!({
        "field": p.field().to_string(),
        "heuristic": p.field().is_heuristic(),
        "weight": p.algebra.weight().to_string(),
    })
}

fn with_header(p: &Problem, body: Value) -> Value {
    let mut v = header(p);
    if let (Value::Object(h), Value::Object(b)) = (&mut v, body) {
        h.extend(b);
    }
    v
}

fn violation_json(v: &Violation) -> Value {
    let (kind, at): (&str, Vec<usize>) = match *v {
        Violation::Associativity { i, j, k } => ("associativity", vec![i, j, k]),
        Violation::LeftUnit { i } => ("left_unit", vec![i]),
        Violation::RightUnit { i } => ("right_unit", vec![i]),
        Violation::UnitDerivation => ("unit_derivation", vec![]),
        Violation::Leibniz { i, j } => ("leibniz", vec![i, j]),
        Violation::LeftAction { i, j, a } => ("left_action", vec![i, j, a]),
        Violation::RightAction { i, j, a } => ("right_action", vec![i, j, a]),
        Violation::Bimodule { i, j, a } => ("bimodule", vec![i, j, a]),
        Violation::LeftLeibniz { i, a } => ("left_leibniz", vec![i, a]),
        Violation::RightLeibniz { i, a } => ("right_leibniz", vec![i, a]),
    };
    json!({ "identity": kind, "at": at })
}

fn cocycle_violation_json(v: &CocycleViolation) -> Value {
    match *v {
        CocycleViolation::Multiplicative { i, j, k } => json!({ "identity": "multiplicative", "witness": [i, j, k] }),
        CocycleViolation::Differential { i, j } => json!({ "identity": "differential", "witness": [i, j] }),
    }
}

fn validate(p: &Problem) -> Result<Outcome, Failure> {
    let alg = validate_diff_algebra(&p.algebra);
    let module = validate_diff_bimodule(&p.algebra, p.effective_module())?;
    let report = with_header(
        p,
        json!({
            "algebra": {
                "passed": alg.passed(),
                "violations": alg.violations.iter().map(violation_json).collect::<Vec<_>>(),
            },
            "module": {
                "regular": p.module.is_none(),
                "passed": module.passed(),
                "violations": module.violations.iter().map(violation_json).collect::<Vec<_>>(),
            },
        }),
    );
    Ok(Outcome::new(alg.passed() && module.passed(), report))
}

fn les_node_json(node: &LesNode) -> Value {
    let (complex, degree) = match *node {
        LesNode::Diff(n) => ("diff", n),
        LesNode::Alg(n) => ("alg", n),
        LesNode::Do(n) => ("do", n),
    };
    json!({ "complex": complex, "degree": degree })
}

fn cohomology(p: &Problem, max_degree: usize, reduced: bool, reps: bool, les: bool, budget: usize) -> Result<Outcome, Failure> {
    let ctx = p.context.clone().with_max_degree(budget);
    let mut kinds = vec![ComplexKind::Alg, ComplexKind::Do, ComplexKind::Diff];
    if reduced {
        kinds.push(ComplexKind::DiffReduced);
    }
    let r = cohomology_dims(&ctx, max_degree, &kinds)?;
    let groups: Vec<Value> = r
        .groups
        .iter()
        .map(|g| {
            let mut v = json!({
                "complex": g.kind.name(),
                "degree": g.degree,
                "dim": g.dim(),
                "cochains": g.cochains,
                "cocycles": g.cocycles,
                "boundaries": g.boundaries,
            });
            if reps {
                v["representatives"] = json!(g.representatives.iter().map(|x| scalars(x)).collect::<Vec<_>>());
            }
            v
        })
        .collect();
    let mut body = json!({ "max_degree": max_degree, "groups": groups });
    let mut pass = true;
    if les {
        let l = les_check(&ctx, max_degree)?;
        pass = l.exact();
        body["les"] = json!({
            "exact": l.exact(),
            "connecting_consistent": l.connecting_consistent,
            "nodes": l.nodes.iter().map(|v| json!({
                "node": les_node_json(&v.node),
                "dim": v.dim,
                "incoming_rank": v.incoming_rank,
                "outgoing_rank": v.outgoing_rank,
                "composite_zero": v.composite_zero,
                "exact": v.exact,
            })).collect::<Vec<_>>(),
        });
    }
    Ok(Outcome::new(pass, with_header(p, body)))
}

fn two_cocycle(p: &Problem, name: &str) -> Result<TwoCocycle, Failure> {
    let c = named(&p.cochains, "cochain", name)?;
    if c.degree() != 2 {
        return Err(input(format!("cochain {name:?} has degree {}, expected 2", c.degree())));
    }
    Ok(TwoCocycle::from_pair(c)?)
}

fn cocycle_check(p: &Problem, name: &str) -> Result<Outcome, Failure> {
    let c = two_cocycle(p, name)?;
    let body = match cocycle_violation(&p.context, &c) {
        Some(v) => json!({ "cochain": name, "cocycle": false, "violation": cocycle_violation_json(&v) }),
        None => {
            let classes = extension_classes(&p.context)?;
            json!({
                "cochain": name,
                "cocycle": true,
                "class": scalars(&class_of(&classes, &c)?),
                "reduced_dim": classes.reduced_dim,
                "full_dim": classes.full_dim,
            })
        }
    };
    let pass = body["cocycle"] == json!(true);
    Ok(Outcome::new(pass, with_header(p, body)))
}

fn extend(p: &Problem, name: &str, output: &Path) -> Result<Outcome, Failure> {
    let c = two_cocycle(p, name)?;
    if let Some(v) = cocycle_violation(&p.context, &c) {
        let body = json!({ "cochain": name, "cocycle": false, "violation": cocycle_violation_json(&v) });
        return Ok(Outcome::new(false, with_header(p, body)));
    }
    let ext = build_extension(&p.context, &c)?;
    let mut out = Problem::new(ext.total.clone(), None)?;
    out.extension = Some(ExtensionData {
        base: p.algebra.clone(),
        projection: ext.projection.clone(),
        sections: [("canonical".to_string(), ext.section.clone())].into(),
    });
    fs::write(output, problem::serialize(&out)).map_err(|e| input(format!("{}: {e}", output.display())))?;
    let body = json!({ "cochain": name, "written": output.display().to_string(), "dim": ext.total.dim() });
    Ok(Outcome::new(true, with_header(p, body)))
}

fn extract(p: &Problem, name: &str) -> Result<Outcome, Failure> {
    let x = p.extension.as_ref().ok_or_else(|| input("file has no extension block"))?;
    let section = named(&x.sections, "section", name)?;
    // the kernel basis does not depend on the section, so the given section
    // becomes the canonical one after the change of basis
    let (ext, change) = normalize_extension(&p.algebra, &x.base, &x.projection, Some(section))?;
    let c = extract_cocycle(&ext, &ext.section)?;
    let m = ext.context.module();
    let n = x.base.dim();
    let kernel: Matrix = {
        let cols: Vec<_> = (n..change.cols()).map(|j| change.column(j)).collect();
        Matrix::from_columns(p.field(), change.rows(), &cols)?
    };
    let body = json!({
        "section": name,
        "kernel_basis": matrix_rows(&kernel),
        "module": {
            "dim": m.dim(),
            "left": m.left().iter().map(matrix_rows).collect::<Vec<_>>(),
            "right": m.right().iter().map(matrix_rows).collect::<Vec<_>>(),
            "dV": matrix_rows(m.dv()),
        },
        "cocycle": raw_cochain(&c.to_pair()),
    });
    Ok(Outcome::new(true, with_header(p, body)))
}

fn equivalent(p: &Problem, c1: &str, c2: &str) -> Result<Outcome, Failure> {
    let (a, b) = (two_cocycle(p, c1)?, two_cocycle(p, c2)?);
    for (name, c) in [(c1, &a), (c2, &b)] {
        if let Some(v) = cocycle_violation(&p.context, c) {
            let body = json!({ "cochain": name, "cocycle": false, "violation": cocycle_violation_json(&v) });
            return Ok(Outcome::new(false, with_header(p, body)));
        }
    }
    let body = match cocycles_equivalent(&p.context, &a, &b)? {
        Some(phi) => json!({ "c1": c1, "c2": c2, "equivalent": true, "phi": matrix_rows(&phi.to_linear_map()?) }),
        None => json!({ "c1": c1, "c2": c2, "equivalent": false }),
    };
    let pass = body["equivalent"] == json!(true);
    Ok(Outcome::new(pass, with_header(p, body)))
}

fn deform_check(p: &Problem, name: &str) -> Result<Outcome, Failure> {
    let def = named(&p.deformations, "deformation", name)?;
    let verdicts = check_deformation(def);
    let pass = verdicts.iter().all(|v| v.passed());
    let mut body = json!({
        "deformation": name,
        "order": def.order(),
        "passed": pass,
        "orders": verdicts.iter().map(|v| json!({
            "order": v.order,
            "passed": v.passed(),
            "associativity": v.associativity,
            "leibniz": v.leibniz,
        })).collect::<Vec<_>>(),
    });
    if pass && def.order() >= 1 {
        let ctx = regular_context(def.base())?;
        body["infinitesimal_closed"] = json!(ctx.diff_d(&infinitesimal(def)?)?.is_zero());
    }
    Ok(Outcome::new(pass, with_header(p, body)))
}

fn trivialize_cmd(p: &Problem, name: &str) -> Result<Outcome, Failure> {
    let def = named(&p.deformations, "deformation", name)?;
    let body = match trivialize(def)? {
        Trivialization::Trivial { gauge } => json!({
            "deformation": name,
            "trivial_through_order": def.order(),
            "gauge": gauge.terms()[1..].iter().map(matrix_rows).collect::<Vec<_>>(),
        }),
        Trivialization::Obstructed { order, cocycle, class, group } => json!({
            "deformation": name,
            "obstructed_at_order": order,
            "cocycle": raw_cochain(&cocycle),
            "class": scalars(&class),
            "reduced_dim": group.dim(),
        }),
    };
    let pass = body.get("trivial_through_order").is_some();
    Ok(Outcome::new(pass, with_header(p, body)))
}

/// Run one parsed command.
pub fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Validate { file } => validate(&load(file)?),
        Command::Cohomology { file, max_degree, reduced, representatives, les, budget } => {
            cohomology(&load(file)?, *max_degree, *reduced, *representatives, *les, *budget)
        }
        Command::CocycleCheck { file, cochain } => cocycle_check(&load(file)?, cochain),
        Command::Extend { file, cocycle, output } => extend(&load(file)?, cocycle, output),
        Command::ExtractCocycle { file, section } => extract(&load(file)?, section),
        Command::Equivalent { file, c1, c2 } => equivalent(&load(file)?, c1, c2),
        Command::DeformCheck { file, deformation } => deform_check(&load(file)?, deformation),
        Command::Trivialize { file, deformation } => trivialize_cmd(&load(file)?, deformation),
    }
}

/// Entry point shared by the binary: prints the report or the error and
/// returns the exit status.
pub fn main_with(cli: Cli) -> Status {
    match execute(&cli.command) {
        Ok(out) => {
            print!("{}", problem::to_canonical_json(&out.report));
            out.status
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.status
        }
    }
}

