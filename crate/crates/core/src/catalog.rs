//! The six four-dimensional Lie algebras with their published tables.
//!
//! Expected values live in `fixtures/catalog.json`, one keyed claim per line,
//! so a discrepancy can point at the exact fixture line. Claims are formulas
//! in the [`expr`](crate::expr) language over the basis labels, `alpha`,
//! `beta`, the coordinates `a b c d` of `U`, `at bt ct dt` of `V`, and the
//! drift coefficients.
//!
//! A claim may carry an annotation recording a confirmed misprint together
//! with a hand derivation and the corrected formula. [`reproduce`] still
//! reports the mismatch against the printed value; the item is marked
//! [`Status::Annotated`] instead of failing when the corrected formula agrees
//! with the computation.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Vector;
use crate::document::{AlgebraDocument, BracketEntry, Formula, MetricSpec, Model, Params};
use crate::error::{Error, Result};
use crate::expr::{basis_bindings, Bindings, Value};
use crate::linalg;
use crate::randers::{build_randers, flag_curvature, g_y, parallel_fields, Flag};
use crate::riemann::{levi_civita, riemann_tensor, scalar_curvature, sectional};
use crate::sampling;
use crate::scalar::{Field, Rational, Scalar};

const FIXTURE_TEXT: &str = include_str!("../fixtures/catalog.json");

/// Path of the fixture file relative to the `liegeom` crate root.
pub const FIXTURE_PATH: &str = "fixtures/catalog.json";

pub const CASE_IDS: std::ops::RangeInclusive<u32> = 1..=6;

/// Variable names bound to the coordinates of the pole `U` and edge `V`.
pub const POLE_COORDINATES: [&str; 4] = ["a", "b", "c", "d"];
pub const EDGE_COORDINATES: [&str; 4] = ["at", "bt", "ct", "dt"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    cases: Vec<FixtureCase>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureCase {
    pub id: u32,
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntry>,
    pub metric: MetricSpec,
    #[serde(default)]
    pub parameterized: bool,
    pub expected: Expected,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    /// `∇_{args[0]} args[1]`.
    pub connection: Vec<Claim>,
    /// `R(args[0], args[1]) args[2]`.
    pub curvature: Vec<Claim>,
    /// Whether the published table claims every unlisted entry vanishes.
    pub curvature_complete: bool,
    /// `R(V,U)U` for arbitrary `U`, `V`.
    pub operator: Claim,
    /// Unnormalized sectional curvature `g(R(V,U)U, V)`.
    pub sectional: Claim,
    pub scalar: Claim,
    pub parallel: ParallelClaim,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub randers: Option<RandersClaims>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    pub key: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<Formula>,
    pub value: Formula,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<Annotation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationKind {
    ConfirmedTypo,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Annotation {
    pub kind: AnnotationKind,
    pub derivation: String,
    pub corrected: Formula,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ParallelClaim {
    pub key: String,
    pub basis: Vec<Formula>,
    /// Parameter values at which the basis applies; elsewhere the space is empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub when: Option<BTreeMap<String, Formula>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClaim {
    Nonpositive,
    Indefinite,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RandersClaims {
    /// Drift as a vector formula over the coefficient names.
    pub drift: Formula,
    pub coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignClaim>,
    /// `g_U(args[0], args[1])`, with `RVUU` bound to `R(V,U)U`.
    pub fundamental: Vec<Claim>,
    /// Flag curvature with pole `U` and edge `V`.
    pub flag: Claim,
}

fn fixtures() -> &'static [FixtureCase] {
    static CASES: OnceLock<Vec<FixtureCase>> = OnceLock::new();
    CASES.get_or_init(|| {
        serde_json::from_str::<FixtureFile>(FIXTURE_TEXT)
            .expect("catalog fixture matches its schema")
            .cases
    })
}

pub fn fixture_text() -> &'static str {
    FIXTURE_TEXT
}

/// 1-based line of the first fixture line in case `case` containing `needle`.
pub fn fixture_line(case: u32, needle: &str) -> Option<usize> {
    let header = format!("\"id\": {case},");
    let mut inside = false;
    for (n, line) in FIXTURE_TEXT.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.starts_with("\"id\": ") {
            if inside {
                break;
            }
            inside = trimmed == header;
            continue;
        }
        if inside && line.contains(needle) {
            return Some(n + 1);
        }
    }
    None
}

fn key_line(case: u32, key: &str) -> Option<usize> {
    fixture_line(case, &format!("\"key\": \"{key}\""))
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseSummary {
    pub id: u32,
    pub name: String,
    pub parameterized: bool,
}

pub fn list_cases() -> Vec<CaseSummary> {
    fixtures()
        .iter()
        .map(|c| CaseSummary { id: c.id, name: c.name.clone(), parameterized: c.parameterized })
        .collect()
}

/// A catalog algebra, with `alpha` and `beta` bound when it takes them.
#[derive(Clone, Debug)]
pub struct CatalogCase {
    fixture: &'static FixtureCase,
    params: Option<Params>,
}

pub fn get_case(id: u32, params: Option<Params>) -> Result<CatalogCase> {
    let fixture = fixtures().iter().find(|c| c.id == id).ok_or(Error::CaseOutOfRange(id))?;
    match (fixture.parameterized, &params) {
        (true, None) => Err(Error::MissingParams(id)),
        (false, Some(_)) => Err(Error::UnexpectedParams(id)),
        _ => Ok(CatalogCase { fixture, params }),
    }
}

/// A flag and drift drawn for checking the Randers closed forms.
#[derive(Clone, Debug, PartialEq)]
pub struct RandersSample {
    pub pole: Vector<Rational>,
    pub edge: Vector<Rational>,
    pub coefficients: Vec<(String, Rational)>,
    pub drift: Vector<Rational>,
}

fn lift<T: Field>(v: &Vector<Rational>) -> Vector<T> {
    Vector::new(v.coeffs().iter().map(|x| T::from_scalar(&Scalar::Exact(x.clone()))).collect())
}

fn lift_scalar<T: Field>(x: &Rational) -> T {
    T::from_scalar(&Scalar::Exact(x.clone()))
}

fn eval_vector<T: Field>(f: &Formula, env: &Bindings<T>, dim: usize) -> Result<Vector<T>> {
    Ok(Vector::new(f.parse()?.eval(env)?.into_vector(dim)?))
}

fn eval_scalar<T: Field>(f: &Formula, env: &Bindings<T>) -> Result<T> {
    f.parse()?.eval_scalar(env)
}

impl CatalogCase {
    pub fn id(&self) -> u32 {
        self.fixture.id
    }

    pub fn name(&self) -> &str {
        &self.fixture.name
    }

    pub fn params(&self) -> Option<&Params> {
        self.params.as_ref()
    }

    pub fn expected(&self) -> &Expected {
        &self.fixture.expected
    }

    pub fn labels(&self) -> &[String] {
        &self.fixture.basis
    }

    pub fn document(&self) -> AlgebraDocument {
        AlgebraDocument {
            dim: self.fixture.dim,
            basis: self.fixture.basis.clone(),
            brackets: self.fixture.brackets.clone(),
            metric: self.fixture.metric.clone(),
            drift: None,
            params: self.params.clone(),
        }
    }

    pub fn is_floating(&self) -> bool {
        self.document().is_floating()
    }

    pub fn model<T: Field>(&self) -> Result<Model<T>> {
        self.document().resolve_as()
    }

    /// Basis vectors by label plus `alpha` and `beta`.
    pub fn bindings<T: Field>(&self) -> Bindings<T> {
        let mut env = basis_bindings::<T>(&self.fixture.basis);
        if let Some(p) = &self.params {
            env.insert("alpha".into(), Value::Scalar(T::from_scalar(&p.alpha)));
            env.insert("beta".into(), Value::Scalar(T::from_scalar(&p.beta)));
        }
        env
    }

    fn parallel_condition_holds(&self) -> Result<bool> {
        let Some(when) = &self.expected().parallel.when else {
            return Ok(true);
        };
        let env = Bindings::<Rational>::new();
        for (name, formula) in when {
            let wanted = Scalar::Exact(eval_scalar(formula, &env)?);
            let actual = match (name.as_str(), &self.params) {
                ("alpha", Some(p)) => &p.alpha,
                ("beta", Some(p)) => &p.beta,
                _ => return Err(Error::Input(format!("unknown parameter `{name}` in fixture"))),
            };
            if !actual.agrees_with(&wanted) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The published basis of parallel fields at the bound parameters.
    pub fn expected_parallel_basis<T: Field>(&self) -> Result<Vec<Vector<T>>> {
        if !self.parallel_condition_holds()? {
            return Ok(Vec::new());
        }
        let env = self.bindings::<T>();
        self.expected()
            .parallel
            .basis
            .iter()
            .map(|f| eval_vector(f, &env, self.fixture.dim))
            .collect()
    }

    /// Seeded flags with orthonormal rational pole and edge, and a drift in
    /// the published parallel family with norm below one.
    pub fn randers_samples(&self, count: usize, seed: u64) -> Result<Vec<RandersSample>> {
        let claims = self
            .expected()
            .randers
            .as_ref()
            .ok_or_else(|| Error::Input(format!("case {} has no Randers closed forms", self.id())))?;
        let dim = self.fixture.dim;
        let g = self.model::<Rational>()?.metric;
        let drift_formula = claims.drift.parse()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let (pole, edge) = sampling::random_orthonormal_pair(&mut rng, dim);
            let coefficients: Vec<(String, Rational)> = claims
                .coefficients
                .iter()
                .map(|name| (name.clone(), sampling::random_unit_interval(&mut rng)))
                .collect();
            let mut env = self.bindings::<Rational>();
            for (name, q) in &coefficients {
                env.insert(name.clone(), Value::Scalar(q.clone()));
            }
            let drift = Vector::new(drift_formula.eval(&env)?.into_vector(dim)?);
            if g.norm_squared(&drift) < Rational::from_i64(1) {
                out.push(RandersSample { pole, edge, coefficients, drift });
            }
        }
        Ok(out)
    }

    /// Bindings for a sample: basis, parameters, coordinates of `U` and `V`,
    /// drift coefficients, and the vectors `U` and `V`.
    pub fn sample_bindings<T: Field>(&self, sample: &RandersSample) -> Bindings<T> {
        let mut env = self.bindings::<T>();
        bind_pair(&mut env, &lift(&sample.pole), &lift(&sample.edge));
        for (name, q) in &sample.coefficients {
            env.insert(name.clone(), Value::Scalar(lift_scalar(q)));
        }
        env
    }

    /// The published flag curvature evaluated at a sample.
    pub fn flag_closed_form<T: Field>(&self, sample: &RandersSample) -> Result<T> {
        let claims = self
            .expected()
            .randers
            .as_ref()
            .ok_or_else(|| Error::Input(format!("case {} has no Randers closed forms", self.id())))?;
        eval_scalar(&claims.flag.value, &self.sample_bindings(sample))
    }
}

fn bind_pair<T: Field>(env: &mut Bindings<T>, u: &Vector<T>, v: &Vector<T>) {
    for (k, x) in u.coeffs().iter().enumerate().take(POLE_COORDINATES.len()) {
        env.insert(POLE_COORDINATES[k].into(), Value::Scalar(x.clone()));
    }
    for (k, x) in v.coeffs().iter().enumerate().take(EDGE_COORDINATES.len()) {
        env.insert(EDGE_COORDINATES[k].into(), Value::Scalar(x.clone()));
    }
    env.insert("U".into(), Value::Vector(u.coeffs().to_vec()));
    env.insert("V".into(), Value::Vector(v.coeffs().to_vec()));
}

/// Writes a vector as a combination of basis labels, e.g. `X - 1/2*W`.
pub fn format_combination<T: Field>(labels: &[String], v: &Vector<T>) -> String {
    let mut out = String::new();
    for (label, c) in labels.iter().zip(v.coeffs()) {
        if c.is_negligible() {
            continue;
        }
        let negative = *c < T::zero();
        let magnitude = if negative { -c.clone() } else { c.clone() };
        let term = if (magnitude.clone() - T::one()).is_negligible() && T::EXACT {
            label.clone()
        } else {
            format!("{magnitude}*{label}")
        };
        match (out.is_empty(), negative) {
            (true, false) => out.push_str(&term),
            (true, true) => out.push_str(&format!("-{term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
            (false, true) => out.push_str(&format!(" - {term}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Disagrees with the printed value but agrees with an annotated correction.
    Annotated,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemResult {
    pub key: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A disagreement between a printed value and the computation.
#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub case: u32,
    pub item: String,
    pub paper_value: String,
    pub computed_value: String,
    pub fixture_line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotation: Option<AnnotationKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected_value: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: u32,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    pub exact: bool,
    pub items: Vec<ItemResult>,
    pub discrepancies: Vec<Discrepancy>,
}

impl CaseReport {
    /// No item failed. Annotated mismatches still count as passing.
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.status != Status::Fail)
    }

    pub fn item(&self, key: &str) -> Option<&ItemResult> {
        self.items.iter().find(|i| i.key == key)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ItemResult> {
        self.items.iter().filter(|i| i.status == Status::Fail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReproduceOptions {
    /// Random samples for every formula that depends on `U`, `V` or the drift.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions { samples: 20, seed: 20_240_601 }
    }
}

pub fn reproduce(case: &CatalogCase) -> CaseReport {
    reproduce_with(case, &ReproduceOptions::default())
}

pub fn reproduce_with(case: &CatalogCase, options: &ReproduceOptions) -> CaseReport {
    if case.is_floating() {
        run::<f64>(case, options)
    } else {
        run::<Rational>(case, options)
    }
}

/// Outcome of comparing one formula against the computation.
struct Check {
    ok: bool,
    paper: String,
    computed: String,
}

struct Builder {
    case: u32,
    items: Vec<ItemResult>,
    discrepancies: Vec<Discrepancy>,
}

impl Builder {
    fn claim(&mut self, claim: &Claim, samples: Option<usize>, eval: impl Fn(&Formula) -> Result<Check>) {
        let line = key_line(self.case, &claim.key);
        let printed = match eval(&claim.value) {
            Ok(check) => check,
            Err(e) => {
                self.fail(&claim.key, claim.value.to_string(), format!("error: {e}"), samples, line);
                return;
            }
        };
        if printed.ok {
            self.items.push(ItemResult {
                key: claim.key.clone(),
                status: Status::Pass,
                expected: printed.paper,
                computed: printed.computed,
                samples,
                note: None,
            });
            return;
        }
        let corrected = claim.annotation.as_ref().map(|a| (a, eval(&a.corrected)));
        let (status, note, annotation, corrected_value) = match corrected {
            Some((a, Ok(c))) if c.ok => (
                Status::Annotated,
                Some("printed value disagrees; the annotated correction agrees".into()),
                Some(a.kind),
                Some(a.corrected.to_string()),
            ),
            Some((a, Ok(_))) => (
                Status::Fail,
                Some("annotated correction also disagrees".into()),
                Some(a.kind),
                Some(a.corrected.to_string()),
            ),
            Some((a, Err(e))) => (
                Status::Fail,
                Some(format!("annotated correction could not be evaluated: {e}")),
                Some(a.kind),
                Some(a.corrected.to_string()),
            ),
            None => (Status::Fail, None, None, None),
        };
        self.discrepancies.push(Discrepancy {
            case: self.case,
            item: claim.key.clone(),
            paper_value: printed.paper.clone(),
            computed_value: printed.computed.clone(),
            fixture_line: line,
            annotation,
            corrected_value,
        });
        self.items.push(ItemResult {
            key: claim.key.clone(),
            status,
            expected: printed.paper,
            computed: printed.computed,
            samples,
            note,
        });
    }

    fn fail(&mut self, key: &str, paper: String, computed: String, samples: Option<usize>, line: Option<usize>) {
        self.discrepancies.push(Discrepancy {
            case: self.case,
            item: key.into(),
            paper_value: paper.clone(),
            computed_value: computed.clone(),
            fixture_line: line,
            annotation: None,
            corrected_value: None,
        });
        self.items.push(ItemResult {
            key: key.into(),
            status: Status::Fail,
            expected: paper,
            computed,
            samples,
            note: None,
        });
    }

    fn plain(&mut self, key: String, check: Check, samples: Option<usize>, line: Option<usize>) {
        if check.ok {
            self.items.push(ItemResult {
                key,
                status: Status::Pass,
                expected: check.paper,
                computed: check.computed,
                samples,
                note: None,
            });
        } else {
            self.fail(&key, check.paper, check.computed, samples, line);
        }
    }

    fn not_applicable(&mut self, key: String, note: &str) {
        self.items.push(ItemResult {
            key,
            status: Status::NotApplicable,
            expected: "-".into(),
            computed: "-".into(),
            samples: None,
            note: Some(note.into()),
        });
    }
}

fn same<T: Field>(a: &T, b: &T) -> bool {
    (a.clone() - b.clone()).is_negligible()
}

fn same_vector<T: Field>(a: &Vector<T>, b: &Vector<T>) -> bool {
    a.dim() == b.dim() && a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| same(x, y))
}

fn rank<T: Field>(vectors: &[Vector<T>], dim: usize) -> usize {
    let rows: linalg::Matrix<T> = vectors.iter().map(|v| v.coeffs().to_vec()).collect();
    dim - T::nullspace(&rows, dim).len()
}

fn describe_span<T: Field>(labels: &[String], basis: &[Vector<T>]) -> String {
    let parts: Vec<String> = basis.iter().map(|v| format_combination(labels, v)).collect();
    format!("span{{{}}}", parts.join(", "))
}

/// Runs `check` on every sample and reports the first failure, if any.
fn over_samples<S>(samples: &[S], mut check: impl FnMut(&S) -> Result<Check>) -> Result<Check> {
    let mut last = Check { ok: true, paper: String::new(), computed: String::new() };
    for s in samples {
        let c = check(s)?;
        if !c.ok {
            return Ok(c);
        }
        last = c;
    }
    Ok(last)
}

struct FlagContext<T> {
    env: Bindings<T>,
    rm: crate::randers::RandersMetric<T>,
    pole: Vector<T>,
    flag: Result<Scalar>,
}

fn run<T: Field>(case: &CatalogCase, options: &ReproduceOptions) -> CaseReport {
    let id = case.id();
    let mut b = Builder { case: id, items: Vec::new(), discrepancies: Vec::new() };
    let finish = |b: Builder| CaseReport {
        case: id,
        name: case.name().to_string(),
        params: case.params.clone(),
        exact: T::EXACT,
        items: b.items,
        discrepancies: b.discrepancies,
    };
    let labels = case.labels().to_vec();
    let dim = labels.len();
    let model = match case.model::<T>() {
        Ok(m) => m,
        Err(e) => {
            b.fail(&format!("c{id}.document"), "valid algebra".into(), e.to_string(), None, None);
            return finish(b);
        }
    };
    let (alg, g) = (&model.algebra, &model.metric);
    let jacobi = alg.check_jacobi();
    b.plain(
        format!("c{id}.jacobi"),
        Check {
            ok: jacobi.passed(),
            paper: "Jacobi identity holds".into(),
            computed: format!("{} violating triples", jacobi.violations.len() + jacobi.antisymmetry_violations.len()),
        },
        None,
        fixture_line(id, "\"brackets\""),
    );
    let conn = match levi_civita(alg, g) {
        Ok(c) => c,
        Err(e) => {
            b.fail(&format!("c{id}.connection"), "Levi-Civita connection".into(), e.to_string(), None, None);
            return finish(b);
        }
    };
    let rt = riemann_tensor(&conn);
    let env = case.bindings::<T>();
    let expected = case.expected();

    for claim in &expected.connection {
        b.claim(claim, None, |value| {
            let [u, v] = claim.args.as_slice() else {
                return Err(Error::Input("connection claims take two arguments".into()));
            };
            let u = eval_vector(u, &env, dim)?;
            let v = eval_vector(v, &env, dim)?;
            let computed = conn.covariant(&u, &v)?;
            let paper = eval_vector(value, &env, dim)?;
            Ok(Check {
                ok: same_vector(&paper, &computed),
                paper: format_combination(&labels, &paper),
                computed: format_combination(&labels, &computed),
            })
        });
    }

    for claim in &expected.curvature {
        b.claim(claim, None, |value| {
            let [u, v, w] = claim.args.as_slice() else {
                return Err(Error::Input("curvature claims take three arguments".into()));
            };
            let computed =
                rt.apply(&eval_vector(u, &env, dim)?, &eval_vector(v, &env, dim)?, &eval_vector(w, &env, dim)?)?;
            let paper = eval_vector(value, &env, dim)?;
            Ok(Check {
                ok: same_vector(&paper, &computed),
                paper: format_combination(&labels, &paper),
                computed: format_combination(&labels, &computed),
            })
        });
    }

    if expected.curvature_complete {
        let listed: Vec<[String; 3]> = expected
            .curvature
            .iter()
            .filter_map(|c| match c.args.as_slice() {
                [u, v, w] => Some([u.0.clone(), v.0.clone(), w.0.clone()]),
                _ => None,
            })
            .collect();
        let mut unlisted = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in 0..dim {
                    let names = [labels[i].clone(), labels[j].clone(), labels[k].clone()];
                    if listed.contains(&names) {
                        continue;
                    }
                    let r = rt.apply_basis(i, j, k);
                    if !r.is_zero() {
                        unlisted.push(format!(
                            "R({},{}){} = {}",
                            names[0],
                            names[1],
                            names[2],
                            format_combination(&labels, &r)
                        ));
                    }
                }
            }
        }
        b.plain(
            format!("c{id}.R.unlisted"),
            Check {
                ok: unlisted.is_empty(),
                paper: "all unlisted entries vanish".into(),
                computed: if unlisted.is_empty() { "all vanish".into() } else { unlisted.join("; ") },
            },
            None,
            fixture_line(id, "\"curvature_complete\""),
        );
    }

    // Independent random pairs for the Riemannian closed forms.
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ (u64::from(id) << 32));
    let mut pairs = Vec::with_capacity(options.samples);
    let g_exact = case.model::<Rational>().map(|m| m.metric);
    while pairs.len() < options.samples {
        let u = sampling::random_nonzero_vector(&mut rng, dim);
        let v = sampling::random_nonzero_vector(&mut rng, dim);
        let independent = match &g_exact {
            Ok(ge) => !ge.pair_determinant(&u, &v).is_negligible(),
            Err(_) => true,
        };
        if independent {
            pairs.push((lift::<T>(&u), lift::<T>(&v)));
        }
    }
    let pair_env = |u: &Vector<T>, v: &Vector<T>| {
        let mut e = env.clone();
        bind_pair(&mut e, u, v);
        e
    };
    let show_pair = |u: &Vector<T>, v: &Vector<T>| format!("U={u}, V={v}");

    b.claim(&expected.operator, Some(pairs.len()), |value| {
        over_samples(&pairs, |(u, v)| {
            let computed = rt.apply(v, u, u)?;
            let paper = eval_vector(value, &pair_env(u, v), dim)?;
            Ok(Check {
                ok: same_vector(&paper, &computed),
                paper: format!("{} at {}", format_combination(&labels, &paper), show_pair(u, v)),
                computed: format_combination(&labels, &computed),
            })
        })
    });

    b.claim(&expected.sectional, Some(pairs.len()), |value| {
        over_samples(&pairs, |(u, v)| {
            let computed = sectional(&rt, g, u, v)?.numerator;
            let paper = eval_scalar(value, &pair_env(u, v))?;
            Ok(Check {
                ok: same(&paper, &computed),
                paper: format!("{paper} at {}", show_pair(u, v)),
                computed: computed.to_string(),
            })
        })
    });

    b.claim(&expected.scalar, None, |value| {
        let computed = scalar_curvature(&rt, g)?;
        let paper = eval_scalar(value, &env)?;
        Ok(Check { ok: same(&paper, &computed), paper: paper.to_string(), computed: computed.to_string() })
    });

    let computed_parallel = parallel_fields(&conn);
    let parallel_key = expected.parallel.key.clone();
    match case.expected_parallel_basis::<T>() {
        Ok(paper) => {
            let joint: Vec<Vector<T>> = paper.iter().chain(&computed_parallel).cloned().collect();
            let (rp, rc, rj) = (rank(&paper, dim), rank(&computed_parallel, dim), rank(&joint, dim));
            b.plain(
                parallel_key.clone(),
                Check {
                    ok: rp == paper.len() && rp == rc && rc == rj,
                    paper: describe_span(&labels, &paper),
                    computed: describe_span(&labels, &computed_parallel),
                },
                None,
                key_line(id, &parallel_key),
            );
        }
        Err(e) => b.fail(&parallel_key, "parallel basis".into(), format!("error: {e}"), None, key_line(id, &parallel_key)),
    }

    let applicable = case.expected_parallel_basis::<T>().map(|p| !p.is_empty()).unwrap_or(false);
    let claims = match (&expected.randers, applicable) {
        (Some(claims), true) => claims,
        (_, false) => {
            b.not_applicable(format!("c{id}.randers"), "no parallel drift exists, so no Berwald Randers metric");
            return finish(b);
        }
        (None, true) => {
            b.not_applicable(format!("c{id}.randers"), "no published Randers closed forms");
            return finish(b);
        }
    };

    let samples = match case.randers_samples(options.samples, options.seed ^ u64::from(id)) {
        Ok(s) => s,
        Err(e) => {
            b.fail(&claims.flag.key, claims.flag.value.to_string(), format!("error: {e}"), None, None);
            return finish(b);
        }
    };
    let mut contexts = Vec::with_capacity(samples.len());
    for s in &samples {
        let (u, v, drift) = (lift::<T>(&s.pole), lift::<T>(&s.edge), lift::<T>(&s.drift));
        let rm = match build_randers(g, &drift, &conn) {
            Ok(rm) => rm,
            Err(e) => {
                b.fail(&claims.flag.key, "Randers metric".into(), format!("error: {e}"), None, None);
                return finish(b);
            }
        };
        let mut e = case.sample_bindings::<T>(s);
        e.insert("RVUU".into(), Value::Vector(rt.apply_unchecked(&v, &u, &u).into_coeffs()));
        let flag = Flag::new(u.clone(), v, g).and_then(|f| flag_curvature(&rm, &rt, &f));
        contexts.push(FlagContext { env: e, rm, pole: u, flag });
    }
    let berwald = contexts.iter().all(|c| c.rm.is_berwald());
    b.plain(
        format!("c{id}.berwald"),
        Check {
            ok: berwald,
            paper: "parallel drift gives a Berwald metric".into(),
            computed: if berwald { "Berwald at every sample".into() } else { "non-Berwald drift".into() },
        },
        Some(contexts.len()),
        fixture_line(id, "\"drift\""),
    );

    for claim in &claims.fundamental {
        b.claim(claim, Some(contexts.len()), |value| {
            over_samples(&contexts, |c| {
                let [x, y] = claim.args.as_slice() else {
                    return Err(Error::Input("fundamental tensor claims take two arguments".into()));
                };
                let computed = g_y(&c.rm, &c.pole, &eval_vector(x, &c.env, dim)?, &eval_vector(y, &c.env, dim)?)?;
                let paper = eval_scalar(value, &c.env)?.to_scalar();
                Ok(Check { ok: paper.agrees_with(&computed), paper: paper.to_string(), computed: computed.to_string() })
            })
        });
    }

    b.claim(&claims.flag, Some(contexts.len()), |value| {
        over_samples(&contexts, |c| {
            let computed = c.flag.clone()?;
            let paper = eval_scalar(value, &c.env)?.to_scalar();
            Ok(Check { ok: paper.agrees_with(&computed), paper: paper.to_string(), computed: computed.to_string() })
        })
    });

    if let Some(sign) = claims.sign {
        let values: Vec<f64> = contexts.iter().filter_map(|c| c.flag.as_ref().ok().map(Scalar::to_f64)).collect();
        let tol = crate::scalar::TOLERANCE;
        let positive = values.iter().filter(|x| **x > tol).count();
        let negative = values.iter().filter(|x| **x < -tol).count();
        let (ok, paper) = match sign {
            SignClaim::Nonpositive => (positive == 0, "flag curvature <= 0"),
            SignClaim::Indefinite => (positive > 0 && negative > 0, "flag curvature changes sign"),
        };
        b.plain(
            format!("c{id}.flag.sign"),
            Check { ok, paper: paper.into(), computed: format!("{positive} positive, {negative} negative") },
            Some(values.len()),
            fixture_line(id, "\"sign\""),
        );
    }
    finish(b)
}
