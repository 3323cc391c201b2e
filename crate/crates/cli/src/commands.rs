use std::fmt::Write as _;
use std::ops::RangeInclusive;

use liegeom::catalog::{get_case, list_cases, reproduce_with, CaseReport, CatalogCase, Discrepancy, ReproduceOptions, Status};
use liegeom::document::{Model, Params};
use liegeom::{
    build_randers, check_finsler_positivity, flag_curvature, g_y, levi_civita, parallel_fields, randers_norm,
    riemann_tensor, scalar_curvature, sectional, Error, Field, Flag, LieAlgebra, Rational, Scalar, Vector,
};
use serde_json::{json, Value};

use crate::args::{ReportArgs, VectorArg};
use crate::error::CliError;
use crate::input::{sha256_hex, LoadedInput};
use crate::render::Style;

/// Directions sampled by the strong-convexity check of `randers`.
const POSITIVITY_SAMPLES: usize = 200;
const POSITIVITY_SEED: u64 = 1;
const DEFAULT_GRID: RangeInclusive<i64> = -2..=1;

/// What a command produced, before the envelope is added.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Value,
    pub text: String,
    pub digest: Option<String>,
    pub mode: Option<&'static str>,
    pub discrepancies: Vec<Discrepancy>,
    /// Nonzero when the command ran but found its input invalid.
    pub exit_code: u8,
}

fn mode_name(floating: bool) -> &'static str {
    if floating {
        "float"
    } else {
        "exact"
    }
}

/// Resolves the document in exact or floating arithmetic and calls `$f::<T>`.
macro_rules! dispatch {
    ($loaded:expr, $floating:expr, $f:ident($($arg:expr),*)) => {
        if $floating {
            $f::<f64>(&$loaded.document.resolve_as::<f64>()?, $($arg),*)
        } else {
            $f::<Rational>(&$loaded.document.resolve_as::<Rational>()?, $($arg),*)
        }
    };
}

fn outcome(loaded: &LoadedInput, floating: bool, (results, text): (Value, String)) -> Outcome {
    Outcome {
        results,
        text,
        digest: Some(loaded.digest()),
        mode: Some(mode_name(floating)),
        ..Outcome::default()
    }
}

fn to_vector<T: Field>(v: &VectorArg, dim: usize) -> Result<Vector<T>, CliError> {
    let out = Vector::new(v.values.iter().map(T::from_scalar).collect());
    out.ensure_dim(dim)?;
    Ok(out)
}

fn require_lie<T: Field>(alg: &LieAlgebra<T>) -> Result<(), CliError> {
    let report = alg.check_jacobi();
    if let Some(((i, j, k), _)) = report.violations.first() {
        let l = alg.labels();
        return Err(Error::Input(format!("brackets violate the Jacobi identity at ({}, {}, {})", l[*i], l[*j], l[*k])).into());
    }
    if let Some((i, j, k)) = report.antisymmetry_violations.first() {
        return Err(Error::Input(format!("structure constants are not antisymmetric at ({i}, {j}, {k})")).into());
    }
    Ok(())
}

pub fn check(loaded: &LoadedInput, style: Style) -> Result<Outcome, CliError> {
    let floating = loaded.document.is_floating();
    let (results, text, valid) = dispatch!(loaded, floating, check_model(style));
    let mut out = outcome(loaded, floating, (results, text));
    if !valid {
        out.exit_code = 1;
    }
    Ok(out)
}

fn check_model<T: Field>(m: &Model<T>, style: Style) -> (Value, String, bool) {
    let labels = m.algebra.labels();
    let report = m.algebra.check_jacobi();
    let triple = |(i, j, k): (usize, usize, usize)| json!([labels[i], labels[j], labels[k]]);
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|(t, residual)| json!({"triple": triple(*t), "residual": style.vector(residual)}))
        .collect();
    let antisymmetry: Vec<Value> = report.antisymmetry_violations.iter().map(|t| triple(*t)).collect();
    let results = json!({
        "dim": m.algebra.dim(),
        "basis": labels,
        "jacobi": {"passed": report.violations.is_empty(), "violations": violations},
        "antisymmetry": {"passed": report.antisymmetry_violations.is_empty(), "violations": antisymmetry},
        "metric": {"positive_definite": true},
        "valid": report.passed(),
    });
    let mut text = String::new();
    let _ = writeln!(text, "algebra of dimension {} on {}", m.algebra.dim(), labels.join(", "));
    if report.antisymmetry_violations.is_empty() {
        let _ = writeln!(text, "antisymmetry: ok");
    } else {
        let _ = writeln!(text, "antisymmetry: {} violations", report.antisymmetry_violations.len());
    }
    if report.violations.is_empty() {
        let _ = writeln!(text, "Jacobi identity: ok");
    } else {
        for ((i, j, k), r) in &report.violations {
            let _ = writeln!(
                text,
                "Jacobi identity fails at ({}, {}, {}): cyclic sum = {}",
                labels[*i],
                labels[*j],
                labels[*k],
                style.combination(labels, r)
            );
        }
    }
    let _ = writeln!(text, "metric: positive definite");
    (results, text, report.passed())
}

pub fn analyze(loaded: &LoadedInput, style: Style, options: ReproduceOptions) -> Result<Outcome, CliError> {
    let floating = loaded.document.is_floating();
    let mut out = outcome(loaded, floating, dispatch!(loaded, floating, analyze_model(style))?);
    if let Some(case) = &loaded.case {
        let report = reproduce_with(case, &options);
        let section = catalog_section(&report);
        let _ = write!(out.text, "\n{}", report_text(&report));
        out.results["catalog"] = section;
        out.discrepancies = report.discrepancies;
    }
    Ok(out)
}

fn catalog_section(report: &CaseReport) -> Value {
    json!({"passed": report.passed(), "items": report.items})
}

fn analyze_model<T: Field>(m: &Model<T>, style: Style) -> Result<(Value, String), CliError> {
    require_lie(&m.algebra)?;
    let (alg, g) = (&m.algebra, &m.metric);
    let labels = alg.labels();
    let n = alg.dim();
    let conn = levi_civita(alg, g)?;
    let rt = riemann_tensor(&conn);
    let mut text = String::new();

    let mut connection = Vec::new();
    let _ = writeln!(text, "Levi-Civita connection (nonzero entries):");
    for i in 0..n {
        for j in 0..n {
            let v = conn.covariant_basis(i, j);
            if !v.is_zero() {
                connection.push(json!({"args": [labels[i], labels[j]], "value": style.vector(&v)}));
                let _ = writeln!(text, "  nabla_{} {} = {}", labels[i], labels[j], style.combination(labels, &v));
            }
        }
    }

    let mut curvature = Vec::new();
    let _ = writeln!(text, "curvature R(U,V)W (nonzero entries, U before V):");
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let v = rt.apply_basis(i, j, k);
                if !v.is_zero() {
                    curvature.push(json!({"args": [labels[i], labels[j], labels[k]], "value": style.vector(&v)}));
                    let _ = writeln!(
                        text,
                        "  R({},{}){} = {}",
                        labels[i],
                        labels[j],
                        labels[k],
                        style.combination(labels, &v)
                    );
                }
            }
        }
    }

    let mut planes = Vec::new();
    let _ = writeln!(text, "sectional curvature of coordinate planes:");
    for i in 0..n {
        for j in i + 1..n {
            let k = sectional(&rt, g, &Vector::basis(n, i), &Vector::basis(n, j))?.value;
            planes.push(json!({"plane": [labels[i], labels[j]], "value": style.num(&k)}));
            let _ = writeln!(text, "  K({},{}) = {}", labels[i], labels[j], style.text(&k));
        }
    }
    let scalar = scalar_curvature(&rt, g)?;
    let _ = writeln!(text, "scalar curvature: {}", style.text(&scalar));

    let parallel = parallel_fields(&conn);
    let _ = writeln!(text, "parallel fields: {}", span_text(style, labels, &parallel));

    let symmetries = rt.check_symmetries();
    let checks = json!({
        "torsion_free": conn.torsion_violations().is_empty(),
        "metric_compatible": conn.metric_compatibility_violations().is_empty(),
        "curvature_symmetries": symmetries.passed(),
    });
    let _ = writeln!(
        text,
        "checks: torsion-free {}, metric-compatible {}, curvature symmetries {}",
        yes_no(checks["torsion_free"].as_bool() == Some(true)),
        yes_no(checks["metric_compatible"].as_bool() == Some(true)),
        yes_no(symmetries.passed())
    );
    let results = json!({
        "basis": labels,
        "connection": connection,
        "curvature": curvature,
        "sectional": planes,
        "scalar_curvature": style.num(&scalar),
        "parallel_basis": parallel.iter().map(|v| style.vector(v)).collect::<Vec<_>>(),
        "checks": checks,
    });
    Ok((results, text))
}

fn yes_no(ok: bool) -> &'static str {
    if ok {
        "yes"
    } else {
        "NO"
    }
}

fn span_text<T: Field>(style: Style, labels: &[String], basis: &[Vector<T>]) -> String {
    if basis.is_empty() {
        return "none".into();
    }
    let parts: Vec<String> = basis.iter().map(|v| style.combination(labels, v)).collect();
    format!("span{{{}}}", parts.join(", "))
}

pub fn sectional_cmd(loaded: &LoadedInput, style: Style, u: &VectorArg, v: &VectorArg) -> Result<Outcome, CliError> {
    let floating = loaded.document.is_floating() || u.is_floating() || v.is_floating();
    Ok(outcome(loaded, floating, dispatch!(loaded, floating, sectional_model(style, u, v))?))
}

fn sectional_model<T: Field>(m: &Model<T>, style: Style, u: &VectorArg, v: &VectorArg) -> Result<(Value, String), CliError> {
    require_lie(&m.algebra)?;
    let n = m.algebra.dim();
    let (u, v) = (to_vector::<T>(u, n)?, to_vector::<T>(v, n)?);
    let rt = riemann_tensor(&levi_civita(&m.algebra, &m.metric)?);
    let s = sectional(&rt, &m.metric, &u, &v)?;
    let area = m.metric.pair_determinant(&u, &v);
    let results = json!({
        "u": style.vector(&u),
        "v": style.vector(&v),
        "numerator": style.num(&s.numerator),
        "area": style.num(&area),
        "sectional_curvature": style.num(&s.value),
    });
    let text = format!(
        "g(R(V,U)U, V) = {}\nplane area = {}\nsectional curvature = {}\n",
        style.text(&s.numerator),
        style.text(&area),
        style.text(&s.value)
    );
    Ok((results, text))
}

pub fn scalar(loaded: &LoadedInput, style: Style) -> Result<Outcome, CliError> {
    let floating = loaded.document.is_floating();
    Ok(outcome(loaded, floating, dispatch!(loaded, floating, scalar_model(style))?))
}

fn scalar_model<T: Field>(m: &Model<T>, style: Style) -> Result<(Value, String), CliError> {
    require_lie(&m.algebra)?;
    let rt = riemann_tensor(&levi_civita(&m.algebra, &m.metric)?);
    let s = scalar_curvature(&rt, &m.metric)?;
    Ok((json!({"scalar_curvature": style.num(&s)}), format!("scalar curvature: {}\n", style.text(&s))))
}

pub fn parallel(loaded: &LoadedInput, style: Style) -> Result<Outcome, CliError> {
    let floating = loaded.document.is_floating();
    Ok(outcome(loaded, floating, dispatch!(loaded, floating, parallel_model(style))?))
}

fn parallel_model<T: Field>(m: &Model<T>, style: Style) -> Result<(Value, String), CliError> {
    require_lie(&m.algebra)?;
    let basis = parallel_fields(&levi_civita(&m.algebra, &m.metric)?);
    let results = json!({
        "dimension": basis.len(),
        "basis": basis.iter().map(|v| style.vector(v)).collect::<Vec<_>>(),
    });
    let text = format!(
        "parallel fields: dimension {}, {}\n",
        basis.len(),
        span_text(style, m.algebra.labels(), &basis)
    );
    Ok((results, text))
}

/// Pole and edge arguments of `randers` and `flag`.
pub struct FlagArgs<'a> {
    pub pole: Option<&'a VectorArg>,
    pub edge: Option<&'a VectorArg>,
    /// Only the flag curvature is wanted.
    pub flag_only: bool,
}

impl FlagArgs<'_> {
    fn is_floating(&self) -> bool {
        self.pole.is_some_and(VectorArg::is_floating) || self.edge.is_some_and(VectorArg::is_floating)
    }
}

pub fn randers(loaded: &LoadedInput, style: Style, flag: FlagArgs<'_>) -> Result<Outcome, CliError> {
    if loaded.document.drift.is_none() {
        return Err(CliError::Usage("a drift is required: pass --drift or include `drift` in the document".into()));
    }
    let floating = loaded.document.is_floating() || flag.is_floating();
    Ok(outcome(loaded, floating, dispatch!(loaded, floating, randers_model(style, &flag))?))
}

fn randers_model<T: Field>(m: &Model<T>, style: Style, args: &FlagArgs<'_>) -> Result<(Value, String), CliError> {
    require_lie(&m.algebra)?;
    let (alg, g) = (&m.algebra, &m.metric);
    let labels = alg.labels();
    let n = alg.dim();
    let drift = m.drift.clone().expect("drift presence checked by the caller");
    let conn = levi_civita(alg, g)?;
    let rt = riemann_tensor(&conn);
    let rm = build_randers(g, &drift, &conn)?;
    if !rm.is_berwald() {
        return Err(Error::NonBerwald.into());
    }
    let pole = args.pole.map(|p| to_vector::<T>(p, n)).transpose()?;
    let edge = args.edge.map(|e| to_vector::<T>(e, n)).transpose()?;
    let flag = match (&pole, &edge) {
        (Some(p), Some(e)) => {
            let f = Flag::new(p.clone(), e.clone(), g)?;
            Some(flag_curvature(&rm, &rt, &f)?)
        }
        _ => None,
    };

    let mut results = serde_json::Map::new();
    let mut text = String::new();
    if let Some(k) = &flag {
        results.insert("flag_curvature".into(), style.scalar(k));
    }
    if args.flag_only {
        let (p, e) = (pole.as_ref().expect("flag needs a pole"), edge.as_ref().expect("flag needs an edge"));
        let riemannian = sectional(&rt, g, p, e)?.value;
        results.insert("riemannian_sectional".into(), style.num(&riemannian));
        let _ = writeln!(text, "flag curvature K(pole; edge) = {}", style.text_scalar(flag.as_ref().unwrap()));
        let _ = writeln!(text, "Riemannian sectional curvature of the plane = {}", style.text(&riemannian));
        return Ok((Value::Object(results), text));
    }

    let positivity = check_finsler_positivity(&rm, POSITIVITY_SAMPLES, POSITIVITY_SEED);
    results.insert("drift".into(), style.vector(&drift));
    results.insert("drift_norm".into(), style.scalar(rm.drift_norm()));
    results.insert("berwald".into(), json!(true));
    results.insert(
        "positivity".into(),
        json!({"samples": positivity.samples, "passed": positivity.passed()}),
    );
    let _ = writeln!(text, "drift Q = {} with |Q| = {}", style.combination(labels, &drift), style.text_scalar(rm.drift_norm()));
    let _ = writeln!(text, "Berwald: yes (Q is parallel)");
    let _ = writeln!(
        text,
        "fundamental tensor positive definite at {} sampled directions: {}",
        positivity.samples,
        yes_no(positivity.passed())
    );
    let mut norms = serde_json::Map::new();
    for (name, v) in [("pole", &pole), ("edge", &edge)] {
        if let Some(v) = v {
            let forward = randers_norm(&rm, v)?;
            let backward = randers_norm(&rm, &v.scale(&-T::one()))?;
            norms.insert(name.into(), json!({"forward": style.scalar(&forward), "backward": style.scalar(&backward)}));
            let _ = writeln!(
                text,
                "F({name}) = {}, F(-{name}) = {}",
                style.text_scalar(&forward),
                style.text_scalar(&backward)
            );
        }
    }
    if !norms.is_empty() {
        results.insert("norms".into(), Value::Object(norms));
    }
    if let Some(p) = &pole {
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            let row = (0..n)
                .map(|j| g_y(&rm, p, &Vector::basis(n, i), &Vector::basis(n, j)))
                .collect::<liegeom::Result<Vec<Scalar>>>()?;
            table.push(row);
        }
        let width = table.iter().flatten().map(|x| style.text_scalar(x).len()).max().unwrap_or(1);
        let _ = writeln!(text, "fundamental tensor g_y at the pole:");
        for (label, row) in labels.iter().zip(&table) {
            let cells: Vec<String> = row.iter().map(|x| format!("{:>width$}", style.text_scalar(x))).collect();
            let _ = writeln!(text, "  {label:>3} | {}", cells.join("  "));
        }
        let rows: Vec<Value> =
            table.iter().map(|row| Value::Array(row.iter().map(|x| style.scalar(x)).collect())).collect();
        results.insert("fundamental_tensor".into(), Value::Array(rows));
    }
    if let Some(k) = &flag {
        let _ = writeln!(text, "flag curvature K(pole; edge) = {}", style.text_scalar(k));
    }
    Ok((Value::Object(results), text))
}

/// Catalog instances named by the report arguments, in output order.
fn report_instances(args: &ReportArgs) -> Result<Vec<CatalogCase>, CliError> {
    let ids: Vec<u32> = if args.all { liegeom::catalog::CASE_IDS.collect() } else { args.case.clone() };
    if !ids.contains(&4) && (args.alpha_grid.is_some() || args.beta_grid.is_some()) {
        return Err(CliError::Usage("--alpha-grid and --beta-grid apply to case 4 only".into()));
    }
    let mut out = Vec::new();
    for id in ids {
        if id != 4 {
            out.push(get_case(id, None)?);
            continue;
        }
        for alpha in args.alpha_grid.clone().unwrap_or(DEFAULT_GRID) {
            for beta in args.beta_grid.clone().unwrap_or(DEFAULT_GRID) {
                let params = Params {
                    alpha: Scalar::Exact(Rational::from_i64(alpha)),
                    beta: Scalar::Exact(Rational::from_i64(beta)),
                };
                out.push(get_case(4, Some(params))?);
            }
        }
    }
    Ok(out)
}

fn params_text(report: &CaseReport) -> String {
    match &report.params {
        Some(p) => format!(" at alpha={}, beta={}", p.alpha, p.beta),
        None => String::new(),
    }
}

fn report_text(report: &CaseReport) -> String {
    let mut text = String::new();
    let count = |s: Status| report.items.iter().filter(|i| i.status == s).count();
    let _ = writeln!(
        text,
        "case {} ({}){}: {} ({} pass, {} annotated, {} fail, {} not applicable)",
        report.case,
        report.name,
        params_text(report),
        if report.passed() { "PASS" } else { "FAIL" },
        count(Status::Pass),
        count(Status::Annotated),
        count(Status::Fail),
        count(Status::NotApplicable),
    );
    for item in &report.items {
        let show = match item.status {
            Status::Pass => item.key.ends_with(".S") || item.key.ends_with(".parallel"),
            _ => true,
        };
        if !show {
            continue;
        }
        let status = match item.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Annotated => "annotated",
            Status::NotApplicable => "n/a",
        };
        let _ = write!(text, "  {:<12} {:<10} computed {}", item.key, status, item.computed);
        if item.status != Status::Pass && item.status != Status::NotApplicable {
            let _ = write!(text, "; printed {}", item.expected);
        }
        if let Some(note) = &item.note {
            let _ = write!(text, " ({note})");
        }
        text.push('\n');
    }
    text
}

fn ledger_text(discrepancies: &[Discrepancy]) -> String {
    let mut text = format!("discrepancy ledger: {} entries\n", discrepancies.len());
    for d in discrepancies {
        let _ = write!(text, "  case {} {}: printed {}, computed {}", d.case, d.item, d.paper_value, d.computed_value);
        if let Some(line) = d.fixture_line {
            let _ = write!(text, " [fixture line {line}]");
        }
        match &d.corrected_value {
            Some(c) if c.len() <= 24 => {
                let _ = write!(text, " [annotated typo; correction {c}]");
            }
            Some(_) => text.push_str(" [annotated typo; correction in fixture]"),
            None => {}
        }
        text.push('\n');
    }
    text
}

pub fn report(args: &ReportArgs) -> Result<Outcome, CliError> {
    let instances = report_instances(args)?;
    let options = ReproduceOptions { samples: args.samples, seed: args.seed };
    let reports: Vec<CaseReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = instances.iter().map(|c| scope.spawn(move || reproduce_with(c, &options))).collect();
        handles.into_iter().map(|h| h.join().expect("reproduction does not panic")).collect()
    });

    let mut sections: Vec<Value> = Vec::new();
    let mut text = String::new();
    let mut ids: Vec<u32> = reports.iter().map(|r| r.case).collect();
    ids.dedup();
    for id in ids {
        let points: Vec<&CaseReport> = reports.iter().filter(|r| r.case == id).collect();
        let passed = points.iter().all(|r| r.passed());
        sections.push(json!({
            "case": id,
            "name": points[0].name,
            "passed": passed,
            "points": points,
        }));
        for r in &points {
            text += &report_text(r);
        }
    }
    let discrepancies: Vec<Discrepancy> = reports.iter().flat_map(|r| r.discrepancies.clone()).collect();
    let passed = reports.iter().all(CaseReport::passed);
    let _ = writeln!(text, "\n{} of {} catalog instances pass", reports.iter().filter(|r| r.passed()).count(), reports.len());
    text += &ledger_text(&discrepancies);
    let results = json!({
        "passed": passed,
        "instances": reports.len(),
        "sections": sections,
        "samples": args.samples,
        "seed": args.seed,
    });
    Ok(Outcome {
        results,
        text,
        digest: Some(sha256_hex(liegeom::catalog::fixture_text().as_bytes())),
        mode: None,
        discrepancies,
        exit_code: 0,
    })
}

pub fn catalog_list() -> Outcome {
    let cases = list_cases();
    let mut text = String::new();
    for c in &cases {
        let _ = writeln!(text, "{}  {}{}", c.id, c.name, if c.parameterized { "  (takes --alpha, --beta)" } else { "" });
    }
    Outcome { results: json!({"cases": cases}), text, ..Outcome::default() }
}
