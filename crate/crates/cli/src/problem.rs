//! Problem files, format version 1.
//!
//! A problem is a JSON document. Scalars are strings (`"3"`, `"-1/2"`, or a
//! residue for prime fields) so that no precision is lost in transit.
//! Matrices are arrays of rows; `derivation[r][c]` is the coefficient of
//! `e_r` in `d(e_c)`. `mult[i][j][k]` is the coefficient of `e_k` in
//! `e_i e_j`, and `left[i][b][a]` the coefficient of `v_b` in `e_i v_a`.
//!
//! A cochain of degree `n` lists one value per argument tuple, tuples
//! ordered by index `Σ t_k nᵏ` (first argument varying fastest).

use std::collections::BTreeMap;
use std::fmt;

use diffcoh_core::algebra::{regular_bimodule, DiffAlgebra, DiffBimodule};
use diffcoh_core::cochain::{tuple_count, Cochain, Context, DiffCochain};
use diffcoh_core::deformation::{regular_context, TruncatedDeformation, TruncatedGauge};
use diffcoh_core::{Field, Matrix, Scalar};
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

/// A parse failure, located by a JSON path or by line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub at: String,
    pub message: String,
}

impl ParseError {
    fn new(at: impl Into<String>, message: impl fmt::Display) -> Self {
        ParseError { at: at.into(), message: message.to_string() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.at, self.message)
    }
}

impl std::error::Error for ParseError {}

type Array1 = Vec<String>;
type Array2 = Vec<Vec<String>>;
type Array3 = Vec<Vec<Vec<String>>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    schema: u32,
    field: RawField,
    weight: String,
    algebra: RawAlgebra,
    derivation: Array2,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    module: Option<RawModule>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    cochains: BTreeMap<String, RawCochain>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    deformations: BTreeMap<String, RawDeformation>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    gauges: BTreeMap<String, Vec<Array2>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extension: Option<RawExtension>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawField {
    Rational,
    Prime { p: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    dim: usize,
    unital: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<Array1>,
    mult: Array3,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    dim: usize,
    left: Array3,
    right: Array3,
    #[serde(rename = "dV")]
    dv: Array2,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawCochain {
    degree: usize,
    f: Array2,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<Array2>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDeformation {
    order: usize,
    mu: Vec<Array3>,
    d: Vec<Array2>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBase {
    algebra: RawAlgebra,
    derivation: Array2,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    base: RawBase,
    projection: Array2,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    sections: BTreeMap<String, Array2>,
}

/// The total algebra of an extension file comes with the base it maps onto
/// and named sections of that projection.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub base: DiffAlgebra,
    pub projection: Matrix,
    pub sections: BTreeMap<String, Matrix>,
}

/// A parsed problem. Named items are checked for shape against the algebra
/// and module; no axiom is checked.
#[derive(Clone, Debug)]
pub struct Problem {
    pub algebra: DiffAlgebra,
    /// `None` means the regular bimodule.
    pub module: Option<DiffBimodule>,
    pub context: Context,
    pub cochains: BTreeMap<String, DiffCochain>,
    pub deformations: BTreeMap<String, TruncatedDeformation>,
    pub gauges: BTreeMap<String, TruncatedGauge>,
    pub extension: Option<ExtensionData>,
}

struct Reader {
    field: Field,
}

impl Reader {
    fn scalar(&self, s: &str, at: &str) -> Result<Scalar, ParseError> {
        self.field.parse(s).map_err(|e| ParseError::new(at, e))
    }

    fn vector(&self, xs: &[String], len: usize, at: &str) -> Result<Vec<Scalar>, ParseError> {
        expect_len(xs.len(), len, at)?;
        xs.iter().enumerate().map(|(i, s)| self.scalar(s, &format!("{at}[{i}]"))).collect()
    }

    fn matrix(&self, rows: &Array2, r: usize, c: usize, at: &str) -> Result<Matrix, ParseError> {
        expect_len(rows.len(), r, at)?;
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            entries.extend(self.vector(row, c, &format!("{at}[{i}]"))?);
        }
        Matrix::from_entries(self.field, r, c, entries).map_err(|e| ParseError::new(at, e))
    }

    /// An `n×n×n` table flattened in `(i, j, k)` order.
    fn table(&self, t: &Array3, n: usize, at: &str) -> Result<Vec<Scalar>, ParseError> {
        expect_len(t.len(), n, at)?;
        let mut out = Vec::with_capacity(n * n * n);
        for (i, rows) in t.iter().enumerate() {
            expect_len(rows.len(), n, &format!("{at}[{i}]"))?;
            for (j, row) in rows.iter().enumerate() {
                out.extend(self.vector(row, n, &format!("{at}[{i}][{j}]"))?);
            }
        }
        Ok(out)
    }

    fn algebra(&self, a: &RawAlgebra, der: &Array2, weight: &Scalar, at: &str) -> Result<DiffAlgebra, ParseError> {
        let n = a.dim;
        let mult = self.table(&a.mult, n, &format!("{at}algebra.mult"))?;
        let unit = match (a.unital, &a.unit) {
            (true, Some(u)) => Some(self.vector(u, n, &format!("{at}algebra.unit"))?),
            (false, None) => None,
            (true, None) => return Err(ParseError::new(format!("{at}algebra.unit"), "unital algebra without a unit")),
            (false, Some(_)) => return Err(ParseError::new(format!("{at}algebra.unit"), "unit given but unital is false")),
        };
        let derivation = self.matrix(der, n, n, &format!("{at}derivation"))?;
        DiffAlgebra::new(self.field, n, mult, unit, weight.clone(), derivation).map_err(|e| ParseError::new(format!("{at}algebra"), e))
    }

    fn module(&self, m: &RawModule, n: usize) -> Result<DiffBimodule, ParseError> {
        let actions = |side: &Array3, name: &str| -> Result<Vec<Matrix>, ParseError> {
            expect_len(side.len(), n, &format!("module.{name}"))?;
            side.iter().enumerate().map(|(i, rows)| self.matrix(rows, m.dim, m.dim, &format!("module.{name}[{i}]"))).collect()
        };
        let left = actions(&m.left, "left")?;
        let right = actions(&m.right, "right")?;
        let dv = self.matrix(&m.dv, m.dim, m.dim, "module.dV")?;
        DiffBimodule::new(self.field, n, m.dim, left, right, dv).map_err(|e| ParseError::new("module", e))
    }

    fn cochain_part(&self, ctx: &Context, rows: &Array2, degree: usize, at: &str) -> Result<Cochain, ParseError> {
        let m = ctx.module_dim();
        expect_len(rows.len(), tuple_count(ctx.algebra_dim(), degree), at)?;
        let mut coeffs = Vec::with_capacity(rows.len() * m);
        for (t, row) in rows.iter().enumerate() {
            coeffs.extend(self.vector(row, m, &format!("{at}[{t}]"))?);
        }
        Cochain::from_coords(ctx, degree, coeffs).map_err(|e| ParseError::new(at, e))
    }

    fn cochain(&self, ctx: &Context, c: &RawCochain, at: &str) -> Result<DiffCochain, ParseError> {
        let f = self.cochain_part(ctx, &c.f, c.degree, &format!("{at}.f"))?;
        let g = match (&c.g, c.degree) {
            (None, 0) => None,
            (Some(g), n) if n > 0 => Some(self.cochain_part(ctx, g, n - 1, &format!("{at}.g"))?),
            (None, _) => return Err(ParseError::new(format!("{at}.g"), "operator part required in positive degree")),
            (Some(_), _) => return Err(ParseError::new(format!("{at}.g"), "degree-zero cochains have no operator part")),
        };
        DiffCochain::new(f, g).map_err(|e| ParseError::new(at, e))
    }

    fn deformation(&self, a: &DiffAlgebra, d: &RawDeformation, at: &str) -> Result<TruncatedDeformation, ParseError> {
        let n = a.dim();
        expect_len(d.mu.len(), d.order, &format!("{at}.mu"))?;
        expect_len(d.d.len(), d.order, &format!("{at}.d"))?;
        let ctx = regular_context(a).map_err(|e| ParseError::new(at, e))?;
        let base = TruncatedDeformation::trivial(a, 0).map_err(|e| ParseError::new(at, e))?;
        let (mut mu, mut der) = (base.mu().to_vec(), base.d().to_vec());
        for (k, t) in d.mu.iter().enumerate() {
            let coeffs = self.table(t, n, &format!("{at}.mu[{k}]"))?;
            let c = Cochain::from_fn(&ctx, 2, |tuple| {
                let off = (tuple[0] * n + tuple[1]) * n;
                coeffs[off..off + n].to_vec()
            })
            .map_err(|e| ParseError::new(at, e))?;
            mu.push(c);
        }
        for (k, rows) in d.d.iter().enumerate() {
            let m = self.matrix(rows, n, n, &format!("{at}.d[{k}]"))?;
            der.push(Cochain::from_linear_map(&ctx, &m).map_err(|e| ParseError::new(at, e))?);
        }
        TruncatedDeformation::new(a, mu, der).map_err(|e| ParseError::new(at, e))
    }
}

fn expect_len(found: usize, expected: usize, at: &str) -> Result<(), ParseError> {
    if found == expected {
        Ok(())
    } else {
        Err(ParseError::new(at, format!("expected {expected} entries, found {found}")))
    }
}

/// Parse and shape-check a problem file.
pub fn parse(text: &str) -> Result<Problem, ParseError> {
    let raw: RawFile = serde_json::from_str(text)
        .map_err(|e| ParseError::new(format!("line {} column {}", e.line(), e.column()), e))?;
    if raw.schema != SCHEMA {
        return Err(ParseError::new("schema", format!("unsupported schema version {}", raw.schema)));
    }
    let field = match raw.field {
        RawField::Rational => Field::Rational,
        RawField::Prime { p } => Field::prime(p).map_err(|e| ParseError::new("field.p", e))?,
    };
    let rd = Reader { field };
    let weight = rd.scalar(&raw.weight, "weight")?;
    let algebra = rd.algebra(&raw.algebra, &raw.derivation, &weight, "")?;
    let module = raw.module.as_ref().map(|m| rd.module(m, algebra.dim())).transpose()?;
    let effective = module.clone().unwrap_or_else(|| regular_bimodule(&algebra));
    let context = Context::new(&algebra, &effective).map_err(|e| ParseError::new("module", e))?;

    let mut cochains = BTreeMap::new();
    for (name, c) in &raw.cochains {
        cochains.insert(name.clone(), rd.cochain(&context, c, &format!("cochains.{name}"))?);
    }
    let mut deformations = BTreeMap::new();
    for (name, d) in &raw.deformations {
        deformations.insert(name.clone(), rd.deformation(&algebra, d, &format!("deformations.{name}"))?);
    }
    let mut gauges = BTreeMap::new();
    for (name, terms) in &raw.gauges {
        let at = format!("gauges.{name}");
        let n = algebra.dim();
        let mut phi = vec![Matrix::identity(field, n)];
        for (k, rows) in terms.iter().enumerate() {
            phi.push(rd.matrix(rows, n, n, &format!("{at}[{k}]"))?);
        }
        gauges.insert(name.clone(), TruncatedGauge::new(phi).map_err(|e| ParseError::new(&at, e))?);
    }
    let extension = match &raw.extension {
        None => None,
        Some(x) => {
            let base = rd.algebra(&x.base.algebra, &x.base.derivation, &weight, "extension.base.")?;
            let projection = rd.matrix(&x.projection, base.dim(), algebra.dim(), "extension.projection")?;
            let mut sections = BTreeMap::new();
            for (name, rows) in &x.sections {
                let at = format!("extension.sections.{name}");
                sections.insert(name.clone(), rd.matrix(rows, algebra.dim(), base.dim(), &at)?);
            }
            Some(ExtensionData { base, projection, sections })
        }
    };
    Ok(Problem { algebra, module, context, cochains, deformations, gauges, extension })
}

pub(crate) fn scalars(xs: &[Scalar]) -> Array1 {
    xs.iter().map(|x| x.to_string()).collect()
}

pub(crate) fn matrix_rows(m: &Matrix) -> Array2 {
    (0..m.rows()).map(|r| scalars(m.row(r))).collect()
}

fn table_rows(flat: &[Scalar], n: usize) -> Array3 {
    (0..n).map(|i| (0..n).map(|j| scalars(&flat[(i * n + j) * n..(i * n + j + 1) * n])).collect()).collect()
}

fn raw_algebra(a: &DiffAlgebra) -> RawAlgebra {
    RawAlgebra {
        dim: a.dim(),
        unital: a.is_unital(),
        unit: a.unit().map(|u| scalars(u)),
        mult: table_rows(a.structure_constants(), a.dim()),
    }
}

fn cochain_rows(c: &Cochain) -> Array2 {
    c.values().map(|(_, v)| scalars(v)).collect()
}

pub(crate) fn raw_cochain(c: &DiffCochain) -> RawCochain {
    RawCochain { degree: c.degree(), f: cochain_rows(c.f()), g: c.g().map(cochain_rows) }
}

fn raw_field(f: Field) -> RawField {
    match f {
        Field::Rational => RawField::Rational,
        Field::Prime(p) => RawField::Prime { p },
    }
}

fn raw_file(p: &Problem) -> RawFile {
    let a = &p.algebra;
    let n = a.dim();
    let module = p.module.as_ref().map(|m| RawModule {
        dim: m.dim(),
        left: m.left().iter().map(matrix_rows).collect(),
        right: m.right().iter().map(matrix_rows).collect(),
        dv: matrix_rows(m.dv()),
    });
    let deformations = p
        .deformations
        .iter()
        .map(|(name, d)| {
            let mu = d.mu()[1..]
                .iter()
                .map(|c| (0..n).map(|i| (0..n).map(|j| scalars(c.value(&[i, j]))).collect()).collect())
                .collect();
            let der = d.d()[1..].iter().map(|c| matrix_rows(&c.to_linear_map().expect("degree one"))).collect();
            (name.clone(), RawDeformation { order: d.order(), mu, d: der })
        })
        .collect();
    let gauges = p.gauges.iter().map(|(name, g)| (name.clone(), g.terms()[1..].iter().map(matrix_rows).collect())).collect();
    let extension = p.extension.as_ref().map(|x| RawExtension {
        base: RawBase { algebra: raw_algebra(&x.base), derivation: matrix_rows(x.base.derivation()) },
        projection: matrix_rows(&x.projection),
        sections: x.sections.iter().map(|(k, s)| (k.clone(), matrix_rows(s))).collect(),
    });
    RawFile {
        schema: SCHEMA,
        field: raw_field(a.field()),
        weight: a.weight().to_string(),
        algebra: raw_algebra(a),
        derivation: matrix_rows(a.derivation()),
        module,
        cochains: p.cochains.iter().map(|(k, c)| (k.clone(), raw_cochain(c))).collect(),
        deformations,
        gauges,
        extension,
    }
}

/// Canonical text: sorted keys, lowest-terms scalars, two-space indent and
/// a trailing newline.
pub fn serialize(p: &Problem) -> String {
    to_canonical_json(&raw_file(p))
}

/// Serialize any value with sorted keys and a trailing newline.
pub fn to_canonical_json(value: &impl Serialize) -> String {
    // Value's map is ordered, which sorts keys at every level.
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

impl Problem {
    /// A problem holding only an algebra and an optional module.
    pub fn new(algebra: DiffAlgebra, module: Option<DiffBimodule>) -> Result<Problem, diffcoh_core::Error> {
        let effective = module.clone().unwrap_or_else(|| regular_bimodule(&algebra));
        let context = Context::new(&algebra, &effective)?;
        Ok(Problem {
            algebra,
            module,
            context,
            cochains: BTreeMap::new(),
            deformations: BTreeMap::new(),
            gauges: BTreeMap::new(),
            extension: None,
        })
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    /// The bimodule cochains live in: the given one, or the regular one.
    pub fn effective_module(&self) -> &DiffBimodule {
        self.context.module()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const POINT: &str = r#"{
        "schema": 1,
        "field": {"kind": "rational"},
        "weight": "0",
        "algebra": {"dim": 1, "unital": true, "unit": ["1"], "mult": [[["1"]]]},
        "derivation": [["0"]]
    }"#;

    #[test]
    fn minimal_file() {
        let p = parse(POINT).unwrap();
        assert_eq!(p.algebra.dim(), 1);
        assert!(p.module.is_none());
        assert_eq!(p.context.module_dim(), 1);
    }

    #[test]
    fn omitted_module_is_regular() {
        let p = parse(POINT).unwrap();
        assert_eq!(p.effective_module(), &regular_bimodule(&p.algebra));
    }

    #[test]
    fn rationals_are_reduced() {
        let text = POINT.replace(r#""weight": "0""#, r#""weight": "-2/4""#);
        let p = parse(&text).unwrap();
        let out = serialize(&p);
        assert!(out.contains(r#""weight": "-1/2""#), "{out}");
        let again = parse(&out).unwrap();
        assert_eq!(serialize(&again), out);
    }

    #[test]
    fn shape_errors_are_positioned() {
        let text = POINT.replace(r#""mult": [[["1"]]]"#, r#""mult": [[["1", "0"]]]"#);
        let e = parse(&text).unwrap_err();
        assert_eq!(e.at, "algebra.mult[0][0]");
    }

    #[test]
    fn bad_rational_is_positioned() {
        let text = POINT.replace(r#""derivation": [["0"]]"#, r#""derivation": [["1/0"]]"#);
        assert_eq!(parse(&text).unwrap_err().at, "derivation[0][0]");
    }

    #[test]
    fn unknown_field_rejected() {
        let text = POINT.replace(r#""schema": 1,"#, r#""schema": 1, "colour": "red","#);
        let e = parse(&text).unwrap_err();
        assert!(e.message.contains("colour"), "{e}");
        assert!(e.at.starts_with("line "), "{e}");
    }

    #[test]
    fn wrong_schema_rejected() {
        let text = POINT.replace(r#""schema": 1"#, r#""schema": 2"#);
        assert_eq!(parse(&text).unwrap_err().at, "schema");
    }

    #[test]
    fn keys_come_out_sorted() {
        let out = serialize(&parse(POINT).unwrap());
        let keys: Vec<usize> = ["algebra", "derivation", "field", "schema", "weight"].iter().map(|k| out.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "{out}");
    }

    #[test]
    fn prime_field_round_trip() {
        let text = POINT.replace(r#"{"kind": "rational"}"#, r#"{"kind": "prime", "p": 7}"#).replace(r#""weight": "0""#, r#""weight": "-1""#);
        let p = parse(&text).unwrap();
        assert_eq!(p.field(), Field::Prime(7));
        assert!(serialize(&p).contains(r#""weight": "6""#));
        assert!(parse(&text.replace("\"p\": 7", "\"p\": 8")).is_err());
    }

    proptest::proptest! {
        #[test]
        fn weight_round_trips_in_lowest_terms(num in -60i64..60, den in 1i64..60) {
            let text = POINT.replace(r#""weight": "0""#, &format!(r#""weight": "{num}/{den}""#));
            let out = serialize(&parse(&text).unwrap());
            let g = num_gcd(num.abs(), den);
            let (a, b) = (num / g, den / g);
            let expect = if b == 1 { format!("{a}") } else { format!("{a}/{b}") };
            let wanted = format!(r#""weight": "{expect}""#);
            proptest::prop_assert!(out.contains(&wanted));
            proptest::prop_assert_eq!(serialize(&parse(&out).unwrap()), out);
        }
    }

    fn num_gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.max(1) } else { num_gcd(b, a % b) }
    }
}
