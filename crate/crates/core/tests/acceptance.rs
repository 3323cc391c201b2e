//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use liegeom::algebra::{LieAlgebra, MetricTensor, Vector};
use liegeom::catalog::{get_case, reproduce, CaseReport, CatalogCase, Discrepancy, Status};
use liegeom::document::{Model, Params};
use liegeom::randers::ORACLE_STEP;
use liegeom::riemann::scalar_curvature_in_frame;
use liegeom::sampling::{random_nonzero_vector, random_orthogonal, random_orthonormal_pair, random_rational};
use liegeom::{
    build_randers, flag_curvature, g_y, g_y_hessian_oracle, levi_civita, parallel_fields, randers_norm,
    riemann_tensor, scalar_curvature, sectional, sectional_plane_invariance_check, Field, Flag, Rational, Scalar,
    TOLERANCE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const GRID: [i64; 4] = [-2, -1, 0, 1];
const SCALAR_BUDGET: Duration = Duration::from_secs(1);
const PROPERTY_BUDGET: Duration = Duration::from_secs(10);
const FLAG_SAMPLES: usize = 20;
const SIGN_SAMPLES: usize = 1000;
const ORACLE_SAMPLES: usize = 50;
const ORACLE_TOLERANCE: f64 = 1e-6;

type Criterion<'a> = Box<dyn Fn() -> Verdict + 'a>;

struct Verdict {
    pass: bool,
    detail: String,
}

fn params(alpha: i64, beta: i64) -> Option<Params> {
    Some(Params {
        alpha: Scalar::Exact(Rational::from_i64(alpha)),
        beta: Scalar::Exact(Rational::from_i64(beta)),
    })
}

/// Every catalog instance: the fixed cases, then Case 4 over the grid.
fn instances() -> Vec<CatalogCase> {
    let mut out: Vec<CatalogCase> = [1, 2, 3, 5, 6].iter().map(|&id| get_case(id, None).unwrap()).collect();
    for alpha in GRID {
        for beta in GRID {
            out.push(get_case(4, params(alpha, beta)).unwrap());
        }
    }
    out
}

fn label(case: &CatalogCase) -> String {
    match case.params() {
        Some(p) => format!("case {}(alpha={}, beta={})", case.id(), p.alpha, p.beta),
        None => format!("case {}", case.id()),
    }
}

fn grid_value(case: &CatalogCase) -> (Rational, Rational) {
    let p = case.params().expect("parameterized case");
    (p.alpha.as_exact().unwrap().clone(), p.beta.as_exact().unwrap().clone())
}

struct Geometry {
    model: Model<Rational>,
    rt: liegeom::riemann::CurvatureTensor<Rational>,
    conn: liegeom::riemann::Connection<Rational>,
}

fn geometry(case: &CatalogCase) -> Geometry {
    let model = case.model::<Rational>().unwrap();
    let conn = levi_civita(&model.algebra, &model.metric).unwrap();
    let rt = riemann_tensor(&conn);
    Geometry { model, rt, conn }
}

fn published_scalar(case: &CatalogCase) -> Rational {
    let r = |n, d| Rational::ratio(n, d);
    match case.id() {
        1 => r(-6, 1),
        2 => r(-1, 2),
        3 => r(-2, 1),
        4 => {
            let (a, b) = grid_value(case);
            let one = r(1, 1);
            -((one.clone() + a).pow(2) / r(2, 1)) - r(2, 1) * b.pow(2) - r(6, 1)
        }
        5 => r(-4, 1),
        6 => r(-7, 2),
        _ => unreachable!(),
    }
}

fn scalar_reproduction() -> Verdict {
    let cases = instances();
    let start = Instant::now();
    let computed: Vec<Rational> = cases
        .iter()
        .map(|c| {
            let geo = geometry(c);
            scalar_curvature(&geo.rt, &geo.model.metric).unwrap()
        })
        .collect();
    let elapsed = start.elapsed();
    let mut misses = Vec::new();
    for (c, s) in cases.iter().zip(&computed) {
        let expected = published_scalar(c);
        let printed = c.expected().scalar.value.parse().unwrap().eval_scalar::<Rational>(&c.bindings()).unwrap();
        if printed != expected {
            misses.push(format!("{}: fixture value {printed} differs from pinned {expected}", label(c)));
        }
        if *s != expected {
            let mut miss = format!("{}: expected {expected}, computed {s}", label(c));
            if let Some(a) = &c.expected().scalar.annotation {
                miss += &format!(" (fixture annotates the printed value as a typo; corrected {})", a.corrected);
            }
            misses.push(miss);
        }
    }
    if elapsed > SCALAR_BUDGET {
        misses.push(format!("took {elapsed:?}, budget {SCALAR_BUDGET:?}"));
    }
    Verdict {
        pass: misses.is_empty(),
        detail: if misses.is_empty() {
            format!("{} instances exact in {elapsed:?}", cases.len())
        } else {
            format!("{} ({} instances in {elapsed:?})", misses.join("; "), cases.len())
        },
    }
}

/// Items whose key matches `select`, failing on any `Fail` status.
fn table_regime(reports: &[(String, CaseReport)], select: impl Fn(&str) -> bool) -> Verdict {
    let (mut checked, mut annotated, mut failures) = (0, Vec::new(), Vec::new());
    for (name, report) in reports {
        for item in report.items.iter().filter(|i| select(&i.key)) {
            checked += 1;
            match item.status {
                Status::Fail => failures.push(format!("{name} {}: expected {}, computed {}", item.key, item.expected, item.computed)),
                Status::Annotated => annotated.push(item.key.clone()),
                _ => {}
            }
        }
    }
    let mut detail = format!("{checked} entries checked");
    if !annotated.is_empty() {
        let count = annotated.len();
        annotated.sort();
        annotated.dedup();
        detail += &format!("; {count} pass through annotated typos ({})", annotated.join(", "));
    }
    if !failures.is_empty() {
        detail += &format!("; mismatches: {}", failures.join("; "));
    }
    Verdict { pass: failures.is_empty() && checked > 0, detail }
}

fn is_connection_key(key: &str) -> bool {
    key.contains(".nabla.")
}

fn is_curvature_key(key: &str) -> bool {
    key.contains(".R.") || key.ends_with(".RVUU") || key.ends_with(".K")
}

fn parallel_dimensions() -> Verdict {
    let mut misses = Vec::new();
    for c in instances() {
        let dim = parallel_fields(&geometry(&c).conn).len();
        let expected = match c.id() {
            1 | 2 | 6 => 1,
            3 => 2,
            5 => 0,
            4 => usize::from(grid_value(&c) == (Rational::from_i64(-1), Rational::from_i64(0))),
            _ => unreachable!(),
        };
        if dim != expected {
            misses.push(format!("{}: expected {expected}, computed {dim}", label(&c)));
        }
    }
    Verdict {
        pass: misses.is_empty(),
        detail: if misses.is_empty() {
            "(1, 1, 2, conditional, 0, 1); case 4 nonempty only at (-1, 0) on the grid".into()
        } else {
            misses.join("; ")
        },
    }
}

fn randers_cases() -> Vec<CatalogCase> {
    let mut out: Vec<CatalogCase> = [1, 2, 3, 6].iter().map(|&id| get_case(id, None).unwrap()).collect();
    out.push(get_case(4, params(-1, 0)).unwrap());
    out
}

fn flag_closed_forms() -> Verdict {
    let mut misses = Vec::new();
    let mut exact_count = 0;
    for c in randers_cases() {
        let geo = geometry(&c);
        let model_f = c.model::<f64>().unwrap();
        let conn_f = levi_civita(&model_f.algebra, &model_f.metric).unwrap();
        let rt_f = riemann_tensor(&conn_f);
        for (k, s) in c.randers_samples(FLAG_SAMPLES, 5_000 + u64::from(c.id())).unwrap().iter().enumerate() {
            let rm = build_randers(&geo.model.metric, &s.drift, &geo.conn).unwrap();
            let flag = Flag::new(s.pole.clone(), s.edge.clone(), &geo.model.metric).unwrap();
            let exact = flag_curvature(&rm, &geo.rt, &flag).unwrap();
            let closed: Rational = c.flag_closed_form(s).unwrap();
            match &exact {
                Scalar::Exact(x) if *x == closed => exact_count += 1,
                Scalar::Exact(x) => misses.push(format!("{} sample {k}: closed form {closed}, computed {x}", label(&c))),
                Scalar::Float(_) => misses.push(format!("{} sample {k}: unexpected floating result", label(&c))),
            }
            let rm_f = build_randers(&model_f.metric, &s.drift.to_f64(), &conn_f).unwrap();
            let flag_f = Flag::new(s.pole.to_f64(), s.edge.to_f64(), &model_f.metric).unwrap();
            let float = flag_curvature(&rm_f, &rt_f, &flag_f).unwrap().to_f64();
            let closed_f: f64 = c.flag_closed_form(s).unwrap();
            if (float - closed_f).abs() > TOLERANCE {
                misses.push(format!("{} sample {k}: float closed form {closed_f}, computed {float}", label(&c)));
            }
        }
    }
    Verdict {
        pass: misses.is_empty(),
        detail: if misses.is_empty() {
            format!("{exact_count} exact and {exact_count} floating samples agree")
        } else {
            misses.join("; ")
        },
    }
}

fn sign_properties() -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for c in randers_cases() {
        let geo = geometry(&c);
        let (mut positive, mut negative) = (0, 0);
        for s in c.randers_samples(SIGN_SAMPLES, 9_000 + u64::from(c.id())).unwrap() {
            let rm = build_randers(&geo.model.metric, &s.drift, &geo.conn).unwrap();
            let flag = Flag::new(s.pole, s.edge, &geo.model.metric).unwrap();
            let k = flag_curvature(&rm, &geo.rt, &flag).unwrap();
            let (pos, neg) = match &k {
                Scalar::Exact(x) => (x.is_strictly_positive(), (-x.clone()).is_strictly_positive()),
                Scalar::Float(x) => (*x > TOLERANCE, *x < -TOLERANCE),
            };
            positive += usize::from(pos);
            negative += usize::from(neg);
        }
        let ok = match c.id() {
            1 | 3 | 4 => positive == 0,
            6 => positive > 0 && negative > 0,
            _ => continue,
        };
        pass &= ok;
        parts.push(format!("{}: {positive} positive, {negative} negative", label(&c)));
    }
    Verdict { pass, detail: format!("{SIGN_SAMPLES} samples each; {}", parts.join("; ")) }
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// `R ⋉ R^{n-1}` with a random action; always a Lie algebra.
fn random_semidirect(rng: &mut ChaCha8Rng, dim: usize) -> LieAlgebra<Rational> {
    let brackets = (1..dim).map(|k| {
        let mut v = vec![Rational::from_i64(0); dim];
        for slot in v.iter_mut().skip(1) {
            *slot = random_rational(rng);
        }
        (0, k, Vector::new(v))
    });
    LieAlgebra::from_brackets(labels(dim), brackets).unwrap()
}

fn random_metric(rng: &mut ChaCha8Rng, dim: usize) -> MetricTensor<Rational> {
    let mut gram = vec![vec![Rational::from_i64(0); dim]; dim];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = Rational::from_i64(rng.gen_range(1..=3));
    }
    let i = rng.gen_range(0..dim - 1);
    let j = rng.gen_range(i + 1..dim);
    let off = Rational::ratio(rng.gen_range(-1..=1), rng.gen_range(2..=3));
    gram[i][j] = off.clone();
    gram[j][i] = off;
    MetricTensor::new(gram).unwrap()
}

fn agree(a: &Scalar, b: &Scalar, tol: f64) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() <= tol * (1.0 + a.to_f64().abs()),
    }
}

fn property_suites() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4_242);
    let mut counts: Vec<(&str, usize, usize)> = Vec::new();
    let tally = |name: &'static str, ok: bool, counts: &mut Vec<(&str, usize, usize)>| {
        match counts.iter_mut().find(|(n, _, _)| *n == name) {
            Some(entry) => {
                entry.1 += 1;
                entry.2 += usize::from(!ok);
            }
            None => counts.push((name, 1, usize::from(!ok))),
        }
    };

    let mut geometries: Vec<Geometry> = instances().iter().map(geometry).collect();
    for _ in 0..20 {
        let dim = rng.gen_range(3..=4);
        let alg = random_semidirect(&mut rng, dim);
        let g = random_metric(&mut rng, dim);
        let conn = levi_civita(&alg, &g).unwrap();
        let rt = riemann_tensor(&conn);
        geometries.push(Geometry { model: Model { algebra: alg, metric: g, drift: None }, rt, conn });
    }
    for geo in &geometries {
        let n = geo.conn.dim();
        tally("torsion-free", geo.conn.torsion_violations().is_empty(), &mut counts);
        tally("metric compatibility", geo.conn.metric_compatibility_violations().is_empty(), &mut counts);
        let sym = geo.rt.check_symmetries();
        tally("R(U,V) = -R(V,U)", sym.first_pair.is_empty(), &mut counts);
        tally("<R(U,V)W,Z> = -<R(U,V)Z,W>", sym.last_pair.is_empty(), &mut counts);
        tally("pair symmetry", sym.pair_symmetry.is_empty(), &mut counts);
        tally("first Bianchi", sym.bianchi.is_empty(), &mut counts);
        for _ in 0..3 {
            let u = random_nonzero_vector(&mut rng, n);
            let v = random_nonzero_vector(&mut rng, n);
            if geo.model.metric.pair_determinant(&u, &v).is_negligible() {
                continue;
            }
            let t = [random_rational(&mut rng), random_rational(&mut rng), random_rational(&mut rng), random_rational(&mut rng)];
            if let Ok(check) = sectional_plane_invariance_check(&geo.rt, &geo.model.metric, &u, &v, t) {
                tally("sectional plane invariance", check.consistent(), &mut counts);
            }
        }
        if geo.model.metric == MetricTensor::identity(n) {
            let q = random_orthogonal(&mut rng, n);
            let frame: Vec<Vector<Rational>> =
                (0..n).map(|k| Vector::new(q.iter().map(|row| row[k].clone()).collect())).collect();
            let rotated = scalar_curvature_in_frame(&geo.rt, &geo.model.metric, &frame).unwrap();
            tally("scalar rotation invariance", rotated == scalar_curvature(&geo.rt, &geo.model.metric).unwrap(), &mut counts);
        }
    }

    let mut oracle_samples = 0;
    for c in randers_cases() {
        let geo = geometry(&c);
        for s in c.randers_samples(ORACLE_SAMPLES / 5, 7_000 + u64::from(c.id())).unwrap() {
            let rm = build_randers(&geo.model.metric, &s.drift, &geo.conn).unwrap();
            let y = random_nonzero_vector(&mut rng, 4);
            let (a, b, w) = (random_nonzero_vector(&mut rng, 4), random_nonzero_vector(&mut rng, 4), random_nonzero_vector(&mut rng, 4));
            let lambda = random_rational(&mut rng);
            let gy = |p: &Vector<Rational>, x: &Vector<Rational>, z: &Vector<Rational>| g_y(&rm, p, x, z).unwrap();
            let ab = gy(&y, &a, &b);
            tally("g_y symmetry", agree(&ab, &gy(&y, &b, &a), TOLERANCE), &mut counts);
            let wb = gy(&y, &w, &b);
            let combined = gy(&y, &a.add_scaled(&lambda, &w), &b);
            let linear = match (&ab, &wb) {
                (Scalar::Exact(x), Scalar::Exact(z)) => Scalar::Exact(x + lambda.clone() * z),
                _ => Scalar::Float(ab.to_f64() + lambda.to_f64() * wb.to_f64()),
            };
            tally("g_y bilinearity", agree(&combined, &linear, TOLERANCE), &mut counts);
            for scale in [Rational::from_i64(2), Rational::ratio(1, 3)] {
                tally("g_y zero-homogeneity", agree(&ab, &gy(&y.scale(&scale), &a, &b), TOLERANCE), &mut counts);
            }
            let f = randers_norm(&rm, &y).unwrap();
            let f2 = match &f {
                Scalar::Exact(x) => Scalar::Exact(x * x),
                Scalar::Float(x) => Scalar::Float(x * x),
            };
            tally("g_y(Y,Y) = F(Y)^2", agree(&gy(&y, &y, &y), &f2, TOLERANCE), &mut counts);
            let closed = gy(&s.pole, &s.pole, &s.edge).to_f64();
            let oracle = g_y_hessian_oracle(&rm, &s.pole, &s.pole, &s.edge, ORACLE_STEP).unwrap();
            tally("g_y vs Hessian oracle", (closed - oracle).abs() < ORACLE_TOLERANCE, &mut counts);
            oracle_samples += 1;
        }
    }
    let elapsed = start.elapsed();
    let failed: Vec<String> =
        counts.iter().filter(|(_, _, f)| *f > 0).map(|(n, t, f)| format!("{n}: {f}/{t} failed")).collect();
    let total: usize = counts.iter().map(|(_, t, _)| t).sum();
    let mut pass = failed.is_empty() && oracle_samples == ORACLE_SAMPLES && counts.iter().all(|(_, t, _)| *t > 0);
    let mut detail = format!("{} properties, {total} checks, {oracle_samples} oracle samples in {elapsed:?}", counts.len());
    if elapsed > PROPERTY_BUDGET {
        pass = false;
        detail += &format!("; over budget {PROPERTY_BUDGET:?}");
    }
    if !failed.is_empty() {
        detail += &format!("; {}", failed.join("; "));
    }
    Verdict { pass, detail }
}

fn degenerate_limit() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8_080);
    let mut misses = Vec::new();
    let mut checked = 0;
    for c in instances() {
        let geo = geometry(&c);
        let g = &geo.model.metric;
        let rm = build_randers(g, &Vector::zeros(4), &geo.conn).unwrap();
        let mut flags: Vec<(Vector<Rational>, Vector<Rational>)> = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    flags.push((Vector::basis(4, i), Vector::basis(4, j)));
                }
            }
        }
        flags.extend((0..FLAG_SAMPLES).map(|_| random_orthonormal_pair(&mut rng, 4)));
        flags.extend((0..FLAG_SAMPLES).filter_map(|_| {
            let (u, v) = (random_nonzero_vector(&mut rng, 4), random_nonzero_vector(&mut rng, 4));
            (!g.pair_determinant(&u, &v).is_negligible()).then_some((u, v))
        }));
        for (pole, edge) in flags {
            let expected = sectional(&geo.rt, g, &pole, &edge).unwrap().value;
            let flag = Flag::new(pole, edge, g).unwrap();
            let k = flag_curvature(&rm, &geo.rt, &flag).unwrap();
            checked += 1;
            if k != Scalar::Exact(expected.clone()) {
                misses.push(format!("{}: flag {k}, sectional {expected}", label(&c)));
            }
        }
    }
    Verdict {
        pass: misses.is_empty(),
        detail: if misses.is_empty() { format!("{checked} flags exact") } else { misses.join("; ") },
    }
}

fn write_report(path: &std::path::Path, verdicts: &[(&str, &Verdict)], discrepancies: &[Discrepancy]) {
    let body = json!({
        "criteria": verdicts.iter().map(|(name, v)| json!({"criterion": name, "pass": v.pass, "detail": v.detail})).collect::<Vec<_>>(),
        "discrepancies": discrepancies,
    });
    if let Err(e) = std::fs::write(path, serde_json::to_string_pretty(&body).unwrap()) {
        eprintln!("could not write {}: {e}", path.display());
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let reports: Vec<(String, CaseReport)> = instances().iter().map(|c| (label(c), reproduce(c))).collect();
    println!("reproduced {} catalog instances [{:.2?}]", reports.len(), start.elapsed());
    let runs: Vec<(&str, Criterion<'_>)> = vec![
        ("1 scalar curvature reproduction", Box::new(scalar_reproduction)),
        ("2 connection tables", Box::new(|| table_regime(&reports, is_connection_key))),
        ("3 curvature tables", Box::new(|| table_regime(&reports, is_curvature_key))),
        ("4 parallel-space dimensions", Box::new(parallel_dimensions)),
        ("5 flag-curvature closed forms", Box::new(flag_closed_forms)),
        ("6 flag-curvature signs", Box::new(sign_properties)),
        ("7 property suites", Box::new(property_suites)),
        ("8 zero-drift limit", Box::new(degenerate_limit)),
    ];
    let mut criteria = Vec::with_capacity(runs.len());
    for (name, run) in runs {
        let start = Instant::now();
        let v = run();
        println!("{} [{name}] {} [{:.2?}]", if v.pass { "PASS" } else { "FAIL" }, v.detail, start.elapsed());
        criteria.push((name, v));
    }
    let discrepancies: Vec<Discrepancy> = reports.iter().flat_map(|(_, r)| r.discrepancies.clone()).collect();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-discrepancies.json");
    let refs: Vec<(&str, &Verdict)> = criteria.iter().map(|(n, v)| (*n, v)).collect();
    write_report(&path, &refs, &discrepancies);
    println!("discrepancy ledger: {} entries, written to {}", discrepancies.len(), path.display());
    let failed = criteria.iter().filter(|(_, v)| !v.pass).count();
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
