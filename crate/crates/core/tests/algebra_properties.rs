use liegeom::algebra::{check_para_hypercomplex, nijenhuis, Endomorphism, LieAlgebra, StructureKind, Vector};
use liegeom::catalog::get_case;
use liegeom::document::Params;
use liegeom::{Field, Rational, Scalar};
use std::sync::OnceLock;

use proptest::prelude::*;

fn labels() -> Vec<String> {
    ["X", "Y", "Z", "W"].iter().map(|s| s.to_string()).collect()
}

fn params(alpha: i64, beta: i64) -> Option<Params> {
    Some(Params {
        alpha: Scalar::Exact(Rational::from_i64(alpha)),
        beta: Scalar::Exact(Rational::from_i64(beta)),
    })
}

fn catalog_algebras() -> &'static [LieAlgebra<Rational>] {
    static ALGEBRAS: OnceLock<Vec<LieAlgebra<Rational>>> = OnceLock::new();
    ALGEBRAS.get_or_init(|| {
        let mut out = Vec::new();
        for id in [1, 2, 3, 5, 6] {
            out.push(get_case(id, None).unwrap().model::<Rational>().unwrap().algebra);
        }
        for alpha in -2..=1 {
            for beta in -2..=1 {
                out.push(get_case(4, params(alpha, beta)).unwrap().model::<Rational>().unwrap().algebra);
            }
        }
        out
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Rational::ratio(n, d))
}

fn vector() -> impl Strategy<Value = Vector<Rational>> {
    prop::collection::vec(rational(), 4).prop_map(Vector::new)
}

fn endomorphism() -> impl Strategy<Value = Endomorphism<Rational>> {
    prop::collection::vec(prop::collection::vec(rational(), 4), 4).prop_map(|m| Endomorphism::new(m).unwrap())
}

fn kind() -> impl Strategy<Value = StructureKind> {
    prop_oneof![Just(StructureKind::Complex), Just(StructureKind::Product)]
}

#[test]
fn every_catalog_algebra_satisfies_jacobi() {
    for alg in catalog_algebras() {
        let report = alg.check_jacobi();
        assert!(report.passed(), "{:?}", report.violations);
        assert!(alg.check_antisymmetry().is_empty());
    }
}

#[test]
fn brackets_are_antisymmetric_on_basis() {
    for alg in catalog_algebras() {
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(alg.bracket_basis(i, j), -&alg.bracket_basis(j, i));
            }
        }
    }
}

#[test]
fn parameterized_bracket() {
    let alg = get_case(4, params(2, 1)).unwrap().model::<Rational>().unwrap().algebra;
    let y = Vector::basis(4, 1);
    let w = Vector::basis(4, 3);
    assert_eq!(alg.bracket(&y, &w).unwrap(), Vector::from(&[2, 1, 0, 0][..]));
}

#[test]
fn case_two_with_an_extra_bracket_fails_jacobi() {
    // [X,Z]=X on top of [X,Y]=Z: [[X,Y],Z]+[[Y,Z],X]+[[Z,X],Y] = [Z,Z] + 0 + [-X,Y] = -Z.
    let alg = LieAlgebra::from_brackets(
        labels(),
        [(0, 1, Vector::from(&[0, 0, 1, 0][..])), (0, 2, Vector::from(&[1, 0, 0, 0][..]))],
    )
    .unwrap();
    let report = alg.check_jacobi();
    assert!(!report.passed());
    let (triple, residual) = &report.violations[0];
    assert_eq!(*triple, (0, 1, 2));
    assert_eq!(*residual, Vector::from(&[0, 0, -1, 0][..]));
}

#[test]
fn identity_structures_violate_the_axioms() {
    let alg = LieAlgebra::<Rational>::abelian(labels());
    let id = Endomorphism::identity(4);
    let j1 = Endomorphism::from_images(vec![
        Vector::from(&[0, 1, 0, 0][..]),
        Vector::from(&[-1, 0, 0, 0][..]),
        Vector::from(&[0, 0, 0, 1][..]),
        Vector::from(&[0, 0, -1, 0][..]),
    ])
    .unwrap();
    let report = check_para_hypercomplex(&alg, &j1, &id, &j1.compose(&id)).unwrap();
    assert!(!report.j2_product);
    let report = check_para_hypercomplex(&alg, &id, &id, &id).unwrap();
    assert!(!report.j1_complex);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nijenhuis_is_antisymmetric(
        case in 0usize..21, j in endomorphism(), kind in kind(), u in vector(), v in vector()
    ) {
        let alg = &catalog_algebras()[case];
        let uv = nijenhuis(alg, &j, kind, &u, &v).unwrap();
        let vu = nijenhuis(alg, &j, kind, &v, &u).unwrap();
        prop_assert_eq!(uv, -&vu);
    }

    #[test]
    fn nijenhuis_is_bilinear(
        case in 0usize..21, j in endomorphism(), kind in kind(),
        u in vector(), w in vector(), v in vector(), s in rational()
    ) {
        let alg = &catalog_algebras()[case];
        let combo = u.add_scaled(&s, &w);
        let lhs = nijenhuis(alg, &j, kind, &combo, &v).unwrap();
        let rhs = nijenhuis(alg, &j, kind, &u, &v).unwrap()
            .add_scaled(&s, &nijenhuis(alg, &j, kind, &w, &v).unwrap());
        prop_assert_eq!(lhs, rhs);
        let lhs = nijenhuis(alg, &j, kind, &v, &combo).unwrap();
        let rhs = nijenhuis(alg, &j, kind, &v, &u).unwrap()
            .add_scaled(&s, &nijenhuis(alg, &j, kind, &v, &w).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn abelian_nijenhuis_vanishes_for_any_structure(
        j in endomorphism(), kind in kind(), u in vector(), v in vector()
    ) {
        let alg = LieAlgebra::<Rational>::abelian(labels());
        prop_assert!(nijenhuis(&alg, &j, kind, &u, &v).unwrap().is_zero());
    }
}
