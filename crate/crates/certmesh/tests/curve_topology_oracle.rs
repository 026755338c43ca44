//! Cross-checks the curve topology graph against an independent
//! pixel-connectivity oracle: sample the polynomial's sign on a dense
//! floating-point grid, mark every pixel whose corner signs disagree,
//! and read components and cycles off the resulting cubical complex.
//! All corpus polynomials have small integer coefficients and dyadic
//! grid points, so the f64 sign evaluations are exact.

use std::str::FromStr;

use certmesh::curvetop::{curve_topology, extend_topology_graph, ColumnKind};
use certmesh::interval::{Box2, Iv};
use certmesh::ratpoly::{Polynomial, Q, Var};
use num_traits::ToPrimitive;

const N: usize = 2048;

fn p(s: &str) -> Polynomial {
    Polynomial::from_str(s).unwrap()
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn boxq(x0: i64, x1: i64, y0: i64, y1: i64) -> Box2 {
    Box2::new(Iv::of_ints(x0, x1), Iv::of_ints(y0, y1))
}

/// Flatten the polynomial into (x-degree, y-degree, f64 coefficient) terms.
fn terms_of(g: &Polynomial) -> Vec<(usize, usize, f64)> {
    let mut terms = Vec::new();
    for (i, cy) in g.coeffs_wrt(Var::X).into_iter().enumerate() {
        for (j, c) in cy.coeffs_wrt(Var::Y).into_iter().enumerate() {
            let c = c.as_constant().expect("bivariate input");
            if let Some(v) = c.to_f64() {
                if v != 0.0 {
                    terms.push((i, j, v));
                }
            }
        }
    }
    terms
}

struct PixelTopology {
    components: usize,
    cycles: usize,
}

/// Sign-grid topology of g = 0 inside the box: pixels whose corners are not
/// all strictly positive or all strictly negative form a thickened curve;
/// its component count and first Betti number (components − Euler
/// characteristic of the cubical complex) are the oracle values.
fn pixel_topology(g: &Polynomial, b2: &Box2) -> PixelTopology {
    let (x0, x1) = (b2.x.lo().to_f64().unwrap(), b2.x.hi().to_f64().unwrap());
    let (y0, y1) = (b2.y.lo().to_f64().unwrap(), b2.y.hi().to_f64().unwrap());
    let terms = terms_of(g);
    let dx = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let dy = terms.iter().map(|t| t.1).max().unwrap_or(0);

    // powers of every grid coordinate, exact for dyadic grids
    let pows = |a: f64, b: f64, d: usize| -> Vec<f64> {
        let mut out = Vec::with_capacity((N + 1) * (d + 1));
        for i in 0..=N {
            let t = a + (b - a) * (i as f64) / (N as f64);
            let mut pw = 1.0;
            for _ in 0..=d {
                out.push(pw);
                pw *= t;
            }
        }
        out
    };
    let xp = pows(x0, x1, dx);
    let yp = pows(y0, y1, dy);

    let mut sign = vec![0i8; (N + 1) * (N + 1)];
    for i in 0..=N {
        for j in 0..=N {
            let mut v = 0.0;
            for &(di, dj, c) in &terms {
                v += c * xp[i * (dx + 1) + di] * yp[j * (dy + 1) + dj];
            }
            sign[i * (N + 1) + j] = if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            };
        }
    }

    // curve pixels: corner signs not uniformly positive or negative
    let mut pixel = vec![false; N * N];
    let mut ids = vec![u32::MAX; N * N];
    let mut order: Vec<(usize, usize)> = Vec::new();
    for i in 0..N {
        for j in 0..N {
            let s = [
                sign[i * (N + 1) + j],
                sign[(i + 1) * (N + 1) + j],
                sign[i * (N + 1) + j + 1],
                sign[(i + 1) * (N + 1) + j + 1],
            ];
            let all_pos = s.iter().all(|&v| v > 0);
            let all_neg = s.iter().all(|&v| v < 0);
            if !all_pos && !all_neg {
                pixel[i * N + j] = true;
                ids[i * N + j] = order.len() as u32;
                order.push((i, j));
            }
        }
    }

    // components under 8-connectivity (matches the complex: diagonal
    // neighbors share a vertex)
    let mut parent: Vec<u32> = (0..order.len() as u32).collect();
    fn find(parent: &mut [u32], mut a: u32) -> u32 {
        while parent[a as usize] != a {
            parent[a as usize] = parent[parent[a as usize] as usize];
            a = parent[a as usize];
        }
        a
    }
    for (idx, &(i, j)) in order.iter().enumerate() {
        let mut join = |pi: isize, pj: isize, parent: &mut [u32]| {
            if pi < 0 || pj < 0 || pi as usize >= N || pj as usize >= N {
                return;
            }
            let other = ids[pi as usize * N + pj as usize];
            if other != u32::MAX {
                let (ra, rb) = (find(parent, idx as u32), find(parent, other));
                if ra != rb {
                    parent[ra as usize] = rb;
                }
            }
        };
        let (i, j) = (i as isize, j as isize);
        join(i - 1, j - 1, &mut parent);
        join(i, j - 1, &mut parent);
        join(i + 1, j - 1, &mut parent);
        join(i - 1, j, &mut parent);
    }
    let mut components = 0;
    for k in 0..order.len() as u32 {
        if find(&mut parent, k) == k {
            components += 1;
        }
    }

    // Euler characteristic of the closed cubical complex: V − E + F
    let mut vset = vec![false; (N + 1) * (N + 1)];
    let mut he = vec![false; N * (N + 1)]; // edge (i,j)-(i+1,j)
    let mut ve = vec![false; (N + 1) * N]; // edge (i,j)-(i,j+1)
    for &(i, j) in &order {
        for (a, b) in [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)] {
            vset[a * (N + 1) + b] = true;
        }
        he[i * (N + 1) + j] = true;
        he[i * (N + 1) + j + 1] = true;
        ve[i * N + j] = true;
        ve[(i + 1) * N + j] = true;
    }
    let v = vset.iter().filter(|&&b| b).count();
    let e = he.iter().filter(|&&b| b).count() + ve.iter().filter(|&&b| b).count();
    let f = order.len();
    let chi = v as isize - e as isize + f as isize;
    let cycles = (components as isize - chi) as usize;
    PixelTopology { components, cycles }
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
        Case {
            name: "line",
            poly: "y - x",
            b2: boxq(0, 1, 0, 1),
            components: 1,
            cycles: 0,
        },
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
        Case {
            name: "cusp",
            poly: "y^2 - x^3",
            b2: boxq(-2, 2, -2, 2),
            components: 1,
            cycles: 0,
        },
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

#[test]
fn graph_matches_pixel_oracle_on_corpus() {
    let eps = q(1, 8);
    for case in corpus() {
        let g = p(case.poly);
        let oracle = pixel_topology(&g, &case.b2);
        assert_eq!(
            oracle.components, case.components,
            "{}: pixel oracle component count drifted",
            case.name
        );
        assert_eq!(
            oracle.cycles, case.cycles,
            "{}: pixel oracle cycle count drifted",
            case.name
        );

        let graph = curve_topology(&g, &case.b2, &eps).unwrap();
        assert_eq!(
            graph.curve_components(),
            oracle.components,
            "{}: component count disagrees with the pixel oracle",
            case.name
        );
        assert_eq!(
            graph.curve_cycles(),
            oracle.cycles,
            "{}: cycle count disagrees with the pixel oracle",
            case.name
        );
    }
}

#[test]
fn graph_boxes_respect_eps_and_stay_disjoint() {
    let eps = q(1, 16);
    for case in corpus() {
        let g = p(case.poly);
        let graph = curve_topology(&g, &case.b2, &eps).unwrap();
        for pt in &graph.points {
            assert!(pt.enclosure.x.width() <= eps, "{}: x width", case.name);
            assert!(pt.enclosure.y.width() <= eps, "{}: y width", case.name);
        }
        // boxes within a column are pairwise disjoint in y
        for col in &graph.columns {
            for w in col.points.windows(2) {
                let a = &graph.points[w[0]].enclosure.y;
                let b = &graph.points[w[1]].enclosure.y;
                assert!(a.hi() < b.lo(), "{}: column boxes overlap", case.name);
            }
        }
    }
}

#[test]
fn branch_sums_balance_across_every_gap() {
    let eps = q(1, 8);
    for case in corpus() {
        let g = p(case.poly);
        let graph = curve_topology(&g, &case.b2, &eps).unwrap();
        for w in graph.columns.windows(3) {
            if w[1].kind != ColumnKind::Auxiliary {
                continue;
            }
            let r_sum: u32 = w[0]
                .points
                .iter()
                .map(|&i| graph.points[i].right_branches)
                .sum();
            let l_sum: u32 = w[2]
                .points
                .iter()
                .map(|&i| graph.points[i].left_branches)
                .sum();
            assert_eq!(r_sum as usize, w[1].points.len(), "{}", case.name);
            assert_eq!(l_sum as usize, w[1].points.len(), "{}", case.name);
        }
    }
}

#[test]
fn render_positions_embed_without_crossings() {
    let eps = q(1, 8);
    for case in corpus() {
        let g = p(case.poly);
        let graph = curve_topology(&g, &case.b2, &eps).unwrap();
        assert!(
            graph.edges_properly_embedded(),
            "{}: straight-line embedding has a crossing",
            case.name
        );
    }
}

#[test]
fn extended_graph_covers_every_corpus_box() {
    let eps = q(1, 4);
    for case in corpus() {
        let g = p(case.poly);
        let ext = extend_topology_graph(&g, &case.b2, &eps).unwrap();
        let area = (case.b2.x.hi() - case.b2.x.lo()) * (case.b2.y.hi() - case.b2.y.lo());
        assert_eq!(ext.total_cell_area(), area, "{}: cell areas", case.name);
        assert!(ext.cell_edges_closed(), "{}: open cell edge", case.name);
        assert!(ext.all_points_in_cells(), "{}: dangling point", case.name);
        assert!(
            ext.graph.edges_properly_embedded(),
            "{}: extended embedding has a crossing",
            case.name
        );
        // topology is preserved by the extension
        assert_eq!(ext.graph.curve_components(), case.components, "{}", case.name);
        assert_eq!(ext.graph.curve_cycles(), case.cycles, "{}", case.name);
    }
}

#[test]
fn empty_curve_produces_scaffold_only() {
    let g = p("x^2 + y^2 + 1");
    let ext = extend_topology_graph(&g, &boxq(-1, 1, -1, 1), &q(1, 2)).unwrap();
    assert!(ext.graph.points.iter().all(|pt| !pt.on_curve));
    assert!(ext.graph.edges.iter().all(|e| !e.kind.is_curve()));
    assert_eq!(ext.total_cell_area(), q(4, 1));
}
