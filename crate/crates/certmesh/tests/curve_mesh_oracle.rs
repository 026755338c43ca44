//! Cross-checks for curve meshing on a fixed corpus of plane curves with
//! known topology. The mesh graph must reproduce the frozen component and
//! cycle counts (independently confirmed against a dense pixel oracle in
//! the topology tests), every certificate crossing is re-verified with the
//! Sturm counter from `common` — machinery disjoint from the production
//! isolator — and sampled vertices are proven ε-close to the curve by root
//! counting on coordinate segments.

mod common;

use std::str::FromStr;

use certmesh::curvemesh::{curve_mesh, CertKind, MeshingGraph, Side};
use certmesh::interval::{Box2, Iv};
use certmesh::ratpoly::{Polynomial, Q, Var};
use num_traits::Zero;

fn p(s: &str) -> Polynomial {
    Polynomial::from_str(s).unwrap()
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn boxq(x0: i64, x1: i64, y0: i64, y1: i64) -> Box2 {
    Box2::new(Iv::of_ints(x0, x1), Iv::of_ints(y0, y1))
}

struct Case {
    name: &'static str,
    poly: &'static str,
    b2: Box2,
    components: usize,
    cycles: usize,
}

fn corpus() -> Vec<Case> {
    vec![
        Case { name: "line", poly: "y - x", b2: boxq(0, 1, 0, 1), components: 1, cycles: 0 },
        Case {
            name: "circle",
            poly: "16*x^2 + 16*y^2 - 49",
            b2: boxq(-2, 2, -2, 2),
            components: 1,
            cycles: 1,
        },
        Case {
            name: "node",
            poly: "y^2 - x^2 - x^3",
            b2: boxq(-2, 2, -2, 2),
            components: 1,
            cycles: 1,
        },
        Case { name: "cusp", poly: "y^2 - x^3", b2: boxq(-2, 2, -2, 2), components: 1, cycles: 0 },
        Case {
            name: "tacnode",
            poly: "y^2 - x^4 + x^5",
            b2: boxq(-2, 2, -2, 2),
            components: 1,
            cycles: 1,
        },
        Case {
            name: "figure-eight",
            poly: "x^4 - x^2 + y^2",
            b2: boxq(-2, 2, -2, 2),
            components: 1,
            cycles: 2,
        },
        Case {
            name: "acnode",
            poly: "y^2 - x^4 + x^2",
            b2: boxq(-3, 3, -3, 3),
            components: 3,
            cycles: 0,
        },
        Case {
            name: "lines-times-circle",
            poly: "x * y * (16*x^2 + 16*y^2 - 49)",
            b2: boxq(-2, 2, -2, 2),
            components: 1,
            cycles: 4,
        },
    ]
}

/// Restriction of `g` to one side of a box, as (univariate polynomial,
/// free variable, side span).
fn side_restriction(g: &Polynomial, b: &Box2, s: Side) -> (Polynomial, Var, Q, Q) {
    match s {
        Side::Left => (g.eval_var(Var::X, b.x.lo()), Var::Y, b.y.lo().clone(), b.y.hi().clone()),
        Side::Right => (g.eval_var(Var::X, b.x.hi()), Var::Y, b.y.lo().clone(), b.y.hi().clone()),
        Side::Bottom => (g.eval_var(Var::Y, b.y.lo()), Var::X, b.x.lo().clone(), b.x.hi().clone()),
        Side::Top => (g.eval_var(Var::Y, b.y.hi()), Var::X, b.x.lo().clone(), b.x.hi().clone()),
    }
}

fn eval1(r: &Polynomial, v: Var, t: &Q) -> Q {
    r.eval_var(v, t).as_constant().expect("univariate restriction")
}

/// Re-verify one recorded crossing with the independent Sturm counter.
fn check_crossing(name: &str, g: &Polynomial, b: &Box2, s: Side, iv: &Iv) {
    let (restr, v, lo, hi) = side_restriction(g, b, s);
    assert!(&lo <= iv.lo() && iv.hi() <= &hi, "{name}: crossing interval leaves its side");
    if restr.is_zero() {
        // a side the curve lies on must be claimed in full
        assert!(iv.lo() == &lo && iv.hi() == &hi, "{name}: on-curve side only partially claimed");
        return;
    }
    if iv.is_point() {
        assert!(
            eval1(&restr, v, iv.lo()).is_zero(),
            "{name}: exact crossing is not a boundary root"
        );
        return;
    }
    assert!(
        !eval1(&restr, v, iv.lo()).is_zero() && !eval1(&restr, v, iv.hi()).is_zero(),
        "{name}: crossing interval endpoint lies on the curve"
    );
    let coeffs = common::dense_coeffs(&restr, v);
    let chain = common::sturm_chain(&coeffs);
    let n = common::count_roots_between(&chain, iv.lo(), iv.hi());
    assert_eq!(n, 1, "{name}: crossing interval does not isolate a single boundary root");
}

/// Does the curve cross the coordinate segment of half-length `eps` through
/// `(x, y)`? Checked for both axis directions with the Sturm counter.
fn curve_within_eps(g: &Polynomial, x: &Q, y: &Q, eps: &Q) -> bool {
    let probes = [(Var::X, x, Var::Y, y), (Var::Y, y, Var::X, x)];
    for (fixed, at, free, center) in probes {
        let restr = g.eval_var(fixed, at);
        if restr.is_zero() {
            return true;
        }
        let (lo, hi) = (center - eps, center + eps);
        if eval1(&restr, free, &lo).is_zero() || eval1(&restr, free, &hi).is_zero() {
            return true;
        }
        let coeffs = common::dense_coeffs(&restr, free);
        if coeffs.len() <= 1 {
            continue;
        }
        if common::count_roots_between(&common::sturm_chain(&coeffs), &lo, &hi) >= 1 {
            return true;
        }
    }
    false
}

fn mesh_corpus_case(case: &Case, eps: &Q) -> MeshingGraph {
    curve_mesh(&p(case.poly), &case.b2, eps).unwrap_or_else(|e| {
        panic!("{}: meshing failed: {e}", case.name);
    })
}

#[test]
fn mesh_reproduces_frozen_topology() {
    let eps = q(1, 8);
    for case in corpus() {
        let mesh = mesh_corpus_case(&case, &eps);
        assert_eq!(
            mesh.components(),
            case.components,
            "{}: mesh component count drifted",
            case.name
        );
        assert_eq!(mesh.cycles(), case.cycles, "{}: mesh cycle count drifted", case.name);
    }
}

#[test]
fn certificates_pass_independent_recount() {
    let eps = q(1, 8);
    for case in corpus() {
        let g = p(case.poly);
        let mesh = mesh_corpus_case(&case, &eps);
        assert!(!mesh.boxes.is_empty(), "{}: no certificates", case.name);
        for nb in &mesh.boxes {
            assert!(
                nb.box2.max_width() <= eps,
                "{}: certificate box exceeds eps",
                case.name
            );
            if nb.kind == CertKind::Segregating || nb.kind == CertKind::Nice {
                for (s, iv) in &nb.crossings {
                    check_crossing(case.name, &g, &nb.box2, *s, iv);
                }
            } else {
                // line slices: exactly one curve point on each horizontal edge
                for (s, iv) in &nb.crossings {
                    assert!(matches!(s, Side::Bottom | Side::Top), "{}: slice sides", case.name);
                    let (restr, v, _, _) = side_restriction(&g, &nb.box2, *s);
                    let coeffs = common::dense_coeffs(&restr, v);
                    let chain = common::sturm_chain(&coeffs);
                    assert!(
                        !eval1(&restr, v, iv.lo()).is_zero() && !eval1(&restr, v, iv.hi()).is_zero(),
                        "{}: slice span endpoint on the curve",
                        case.name
                    );
                    assert_eq!(
                        common::count_roots_between(&chain, iv.lo(), iv.hi()),
                        1,
                        "{}: line slice does not isolate the line",
                        case.name
                    );
                }
            }
        }
        // every edge endpoint sits inside its certificate box
        for e in &mesh.edges {
            let b = &mesh.boxes[e.cert].box2;
            for vtx in [e.a, e.b] {
                let (x, y) = &mesh.points[vtx];
                assert!(
                    b.x.lo() <= x && x <= b.x.hi() && b.y.lo() <= y && y <= b.y.hi(),
                    "{}: edge endpoint escapes its certificate box",
                    case.name
                );
            }
        }
    }
}

#[test]
fn sampled_vertices_are_eps_close_to_the_curve() {
    let eps = q(1, 8);
    for case in corpus() {
        let g = p(case.poly);
        let mesh = mesh_corpus_case(&case, &eps);
        let n = mesh.points.len();
        assert!(n > 0, "{}: empty mesh", case.name);
        let step = (n / 100).max(1);
        for (x, y) in mesh.points.iter().step_by(step) {
            assert!(
                curve_within_eps(&g, x, y, &eps),
                "{}: vertex ({x}, {y}) is farther than eps from the curve",
                case.name
            );
        }
    }
}

#[test]
fn meshing_is_deterministic_across_runs() {
    let eps = q(1, 8);
    for case in [&corpus()[2], &corpus()[7]] {
        let a = mesh_corpus_case(case, &eps);
        let b = mesh_corpus_case(case, &eps);
        assert_eq!(a.points, b.points, "{}: vertex order changed", case.name);
        assert_eq!(a.edges, b.edges, "{}: edge list changed", case.name);
        assert_eq!(a.boxes.len(), b.boxes.len(), "{}: box count changed", case.name);
    }
}
