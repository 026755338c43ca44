//! Isotopic topology of a plane algebraic curve clipped to a box.
//!
//! The construction projects the curve's critical x-values (discriminant,
//! boundary contacts, box edges) into a square-free, pairwise-coprime factor
//! list; isolates the real roots per factor; lifts each root to its fiber of
//! curve points; shrinks every column into a certified segregating box (the
//! curve provably misses the top and bottom edges of each point box); counts
//! left/right branches exactly by univariate root isolation on the box walls;
//! and connects branches across each gap through an auxiliary column at the
//! gap separator. Vertical lines (x-only factors of the input) become
//! vertical edge chains. The extended variant adds ceiling and wall points
//! and triangulates the whole box into cells with exact rational area.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Error;
use crate::interval::{box_eval2, Box2, Iv};
use crate::ratpoly::{resultant, split_content, square_free_part, FactorHook, FactorList,
                     Polynomial, Q, Var};
use crate::rootiso::{isolate, isolate_in, Alg1, AlgPoint2, BasePoint, FiberRoots};
use crate::Result;

/// Role of a graph vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointKind {
    /// Lies on the curve: a fiber root of the curve over its column.
    Curve,
    /// Endpoint of a vertical-line component on the top/bottom box edge.
    LineEnd,
    /// Box-corner scaffold of the extended graph (not on the curve).
    Ceiling,
    /// Wall midpoint between vertically consecutive points (extended graph).
    WallMid,
}

/// Role of a graph edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    /// A curve segment crossing a column gap (non-vertical).
    Branch,
    /// A piece of a vertical-line component of the curve.
    VerticalLine,
    /// Scaffold edge of the extended graph (wall, ceiling, or diagonal).
    Auxiliary,
}

impl EdgeKind {
    pub fn is_curve(self) -> bool {
        !matches!(self, EdgeKind::Auxiliary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    /// Critical or boundary x-value of the curve.
    Critical,
    /// Root of the input's x-only factor: a vertical line of the curve.
    VerticalLine,
    /// Auxiliary mid-gap column (regular sample, one branch per point).
    Auxiliary,
}

#[derive(Debug, Clone)]
pub struct GraphPoint {
    /// Exact enclosure; either axis may be a degenerate (point) interval.
    pub enclosure: Box2,
    pub column: usize,
    pub kind: PointKind,
    /// Lies on the curve g = 0 (fiber point or vertical-line point).
    pub on_curve: bool,
    /// Number of curve branches entering from the left / leaving right.
    pub left_branches: u32,
    pub right_branches: u32,
}

impl GraphPoint {
    /// Render position: the midpoint of the enclosure.
    pub fn position(&self) -> (Q, Q) {
        (self.enclosure.x.mid(), self.enclosure.y.mid())
    }
}

#[derive(Debug, Clone)]
pub struct Column {
    /// Exact x enclosure shared by the column's points.
    pub x: Iv,
    pub kind: ColumnKind,
    /// Point ids bottom-up.
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone)]
pub struct TopologyGraph {
    pub points: Vec<GraphPoint>,
    /// Columns ordered left to right; auxiliary columns interleave the
    /// critical ones.
    pub columns: Vec<Column>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone)]
pub struct ExtendedTopologyGraph {
    pub graph: TopologyGraph,
    /// Counter-clockwise triangles covering the box exactly.
    pub cells: Vec<[usize; 3]>,
}

impl TopologyGraph {
    fn curve_vertex_ids(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.points[i].on_curve)
            .collect()
    }

    /// Connected components of the curve subgraph (curve points joined by
    /// branch / vertical-line edges).
    pub fn curve_components(&self) -> usize {
        let verts = self.curve_vertex_ids();
        let mut idx = vec![usize::MAX; self.points.len()];
        for (k, &v) in verts.iter().enumerate() {
            idx[v] = k;
        }
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for e in &self.edges {
            if e.kind.is_curve() {
                let (ra, rb) = (find(&mut parent, idx[e.a]), find(&mut parent, idx[e.b]));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        (0..verts.len()).filter(|&k| find(&mut parent, k) == k).count()
    }

    /// Independent cycles of the curve subgraph: E − V + C.
    pub fn curve_cycles(&self) -> usize {
        let v = self.curve_vertex_ids().len();
        let e = self.edges.iter().filter(|e| e.kind.is_curve()).count();
        let c = self.curve_components();
        (e + c).saturating_sub(v)
    }

    /// Curve points with no incident curve edge (isolated real points).
    pub fn isolated_curve_points(&self) -> usize {
        let mut deg = vec![0usize; self.points.len()];
        for e in &self.edges {
            if e.kind.is_curve() {
                deg[e.a] += 1;
                deg[e.b] += 1;
            }
        }
        (0..self.points.len())
            .filter(|&i| self.points[i].on_curve && deg[i] == 0)
            .count()
    }

    /// Exact straight-line embedding check at render positions: no two
    /// edges intersect except at shared endpoints.
    pub fn edges_properly_embedded(&self) -> bool {
        let pos: Vec<(Q, Q)> = self.points.iter().map(|p| p.position()).collect();
        for (i, e) in self.edges.iter().enumerate() {
            for f in &self.edges[i + 1..] {
                if segments_conflict(&pos[e.a], &pos[e.b], &pos[f.a], &pos[f.b],
                                     e.a == f.a || e.a == f.b || e.b == f.a || e.b == f.b) {
                    return false;
                }
            }
        }
        true
    }
}

impl ExtendedTopologyGraph {
    /// Exact total area of all cells (shoelace).
    pub fn total_cell_area(&self) -> Q {
        let pos: Vec<(Q, Q)> = self.graph.points.iter().map(|p| p.position()).collect();
        let mut twice = Q::from_integer(0.into());
        for c in &self.cells {
            let (ax, ay) = &pos[c[0]];
            let (bx, by) = &pos[c[1]];
            let (cx, cy) = &pos[c[2]];
            let t = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
            // cells are CCW; take the value directly so an orientation bug
            // shows up as a wrong total instead of being hidden by abs()
            twice = twice + t;
        }
        twice / Q::from_integer(2.into())
    }

    /// Every cell edge is present in the edge set.
    pub fn cell_edges_closed(&self) -> bool {
        let mut set = std::collections::BTreeSet::new();
        for e in &self.graph.edges {
            set.insert((e.a.min(e.b), e.a.max(e.b)));
        }
        self.cells.iter().all(|c| {
            (0..3).all(|k| {
                let (a, b) = (c[k], c[(k + 1) % 3]);
                set.contains(&(a.min(b), a.max(b)))
            })
        })
    }

    /// Every point is a vertex of at least one cell.
    pub fn all_points_in_cells(&self) -> bool {
        let mut used = vec![false; self.graph.points.len()];
        for c in &self.cells {
            for &v in c {
                used[v] = true;
            }
        }
        used.iter().all(|&u| u)
    }
}

fn orient(a: &(Q, Q), b: &(Q, Q), c: &(Q, Q)) -> i32 {
    let v = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
    if v > Q::from_integer(0.into()) {
        1
    } else if v < Q::from_integer(0.into()) {
        -1
    } else {
        0
    }
}

fn on_segment(a: &(Q, Q), b: &(Q, Q), p: &(Q, Q)) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.clone().min(b.0.clone())
        && p.0 <= a.0.clone().max(b.0.clone())
        && p.1 >= a.1.clone().min(b.1.clone())
        && p.1 <= a.1.clone().max(b.1.clone())
}

/// Do segments ab and cd intersect anywhere besides a shared endpoint?
fn segments_conflict(a: &(Q, Q), b: &(Q, Q), c: &(Q, Q), d: &(Q, Q), share: bool) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if share {
        // sharing an endpoint is fine unless they overlap collinearly
        if o1 == 0 && o2 == 0 {
            // collinear: conflict iff a non-shared endpoint lies strictly
            // inside the other segment
            let interior = |p: &(Q, Q), u: &(Q, Q), v: &(Q, Q)| {
                on_segment(u, v, p) && p != u && p != v
            };
            return interior(c, a, b) || interior(d, a, b) || interior(a, c, d)
                || interior(b, c, d);
        }
        return false;
    }
    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

// ---------------------------------------------------------------------------
// Build state
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub(crate) struct PtBuild {
    pub(crate) tight: Iv,
    pub(crate) win: (Q, Q),
    pub(crate) on_curve: bool,
    pub(crate) bottom: bool,
    pub(crate) top: bool,
    pub(crate) l: u32,
    pub(crate) r: u32,
    pub(crate) kind: PointKind,
    /// For fiber-root points, the index into the column's `FiberRoots`.
    pub(crate) fiber_idx: Option<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct ColBuild {
    pub(crate) x: Alg1,
    pub(crate) vertical: bool,
    pub(crate) aux: bool,
    pub(crate) clip_l: bool,
    pub(crate) clip_r: bool,
    pub(crate) win: (Q, Q),
    pub(crate) fiber: Option<FiberRoots>,
    /// Point arena (append-only; ids stay stable under insertion).
    pub(crate) pts: Vec<PtBuild>,
    /// Bottom-up view into the arena.
    pub(crate) order: Vec<usize>,
}

const SEGREGATION_CAP: u32 = 4000;

impl ColBuild {
    fn new(x: Alg1, vertical: bool, aux: bool) -> ColBuild {
        ColBuild {
            x,
            vertical,
            aux,
            clip_l: false,
            clip_r: false,
            win: (Q::from_integer(0.into()), Q::from_integer(0.into())),
            fiber: None,
            pts: Vec::new(),
            order: Vec::new(),
        }
    }

    fn shrink(&mut self) {
        self.x.refine();
        let two = Q::from_integer(2.into());
        if !self.clip_l {
            self.win.0 = (&self.win.0 + self.x.iv().lo()) / &two;
        }
        if !self.clip_r {
            self.win.1 = (&self.win.1 + self.x.iv().hi()) / &two;
        }
    }

    /// Isolate the curve fiber over this column, clip it to [y1, y2] with
    /// exact boundary decisions, and refine every kept root to width ≤ eps
    /// strictly inside the window (unless pinned on the boundary).
    fn build_fiber(&mut self, gv: &Polynomial, y1: &Q, y2: &Q, eps: &Q) -> Result<()> {
        let mut fiber = FiberRoots::isolate(gv, Var::Y, &mut self.x)
            .map_err(|_| Error::internal("curve fiber vanished identically over a column"))?;
        let y = Polynomial::var(Var::Y);
        let low = y.clone() - &Polynomial::constant(y1.clone());
        let high = y - &Polynomial::constant(y2.clone());
        for idx in 0..fiber.len() {
            let s1 = fiber.sign_at(&mut self.x, idx, &low);
            if s1 < 0 {
                continue;
            }
            let s2 = fiber.sign_at(&mut self.x, idx, &high);
            if s2 > 0 {
                continue;
            }
            let bottom = s1 == 0;
            let top = s2 == 0;
            if bottom {
                fiber.collapse_root(idx, y1.clone());
            } else if top {
                fiber.collapse_root(idx, y2.clone());
            }
            // tighten: width ≤ eps, strictly inside (y1, y2) unless pinned
            fiber.refine_root_below(&mut self.x, idx, eps);
            while !bottom && fiber.root_iv(idx).lo() <= y1 {
                fiber.refine_root(&mut self.x, idx);
            }
            while !top && fiber.root_iv(idx).hi() >= y2 {
                fiber.refine_root(&mut self.x, idx);
            }
            let pi = self.pts.len();
            self.pts.push(PtBuild {
                tight: fiber.root_iv(idx).clone(),
                win: (y1.clone(), y2.clone()),
                on_curve: true,
                bottom,
                top,
                l: 0,
                r: 0,
                kind: PointKind::Curve,
                fiber_idx: Some(idx),
            });
            self.order.push(pi);
        }
        if self.vertical {
            let need_bottom = self
                .order
                .first()
                .map_or(true, |&pi| !self.pts[pi].bottom);
            if need_bottom {
                let pi = self.pts.len();
                self.pts.push(PtBuild {
                    tight: Iv::point(y1.clone()),
                    win: (y1.clone(), y2.clone()),
                    on_curve: true,
                    bottom: true,
                    top: false,
                    l: 0,
                    r: 0,
                    kind: PointKind::LineEnd,
                    fiber_idx: None,
                });
                self.order.insert(0, pi);
            }
            let need_top = self.order.last().map_or(true, |&pi| !self.pts[pi].top);
            if need_top {
                let pi = self.pts.len();
                self.pts.push(PtBuild {
                    tight: Iv::point(y2.clone()),
                    win: (y1.clone(), y2.clone()),
                    on_curve: true,
                    bottom: false,
                    top: true,
                    l: 0,
                    r: 0,
                    kind: PointKind::LineEnd,
                    fiber_idx: None,
                });
                self.order.push(pi);
            }
        }
        self.x.refine_below_width(eps);
        self.fiber = Some(fiber);
        Ok(())
    }

    /// Counting windows: midpoints between consecutive tight boxes, clipped
    /// to the exact boundary for pinned points. Adjacent windows share their
    /// endpoint, which later doubles as the wall midpoint height.
    fn assign_point_windows(&mut self, y1: &Q, y2: &Q) {
        let two = Q::from_integer(2.into());
        let n = self.order.len();
        for k in 0..n {
            let below = if k == 0 {
                y1.clone()
            } else {
                self.pts[self.order[k - 1]].tight.hi().clone()
            };
            let above = if k + 1 == n {
                y2.clone()
            } else {
                self.pts[self.order[k + 1]].tight.lo().clone()
            };
            let pt = &mut self.pts[self.order[k]];
            let wc = if pt.bottom {
                y1.clone()
            } else {
                (&below + pt.tight.lo()) / &two
            };
            let wd = if pt.top {
                y2.clone()
            } else {
                (pt.tight.hi() + &above) / &two
            };
            debug_assert!(wc < wd);
            pt.win = (wc, wd);
        }
    }

    /// Shrink the column's x-window until the curve provably misses the top
    /// and bottom edge of every point window (skipping edges pinned on the
    /// box boundary, which are covered by root-uniqueness instead).
    fn segregate(&mut self, gv: &Polynomial) -> Result<()> {
        if self.aux {
            return Ok(());
        }
        for _ in 0..SEGREGATION_CAP {
            let xiv = Iv::new(self.win.0.clone(), self.win.1.clone());
            let clear = self.order.iter().all(|&pi| {
                let pt = &self.pts[pi];
                let bot_ok = pt.bottom
                    || !box_eval2(gv, &Box2::new(xiv.clone(), Iv::point(pt.win.0.clone())))
                        .contains_zero();
                let top_ok = pt.top
                    || !box_eval2(gv, &Box2::new(xiv.clone(), Iv::point(pt.win.1.clone())))
                        .contains_zero();
                bot_ok && top_ok
            });
            if clear {
                return Ok(());
            }
            self.shrink();
        }
        Err(Error::SegregationFailed(
            "column window could not be certified curve-free on point box edges".into(),
        ))
    }

    /// Exact branch counts by univariate isolation on the segregated walls.
    fn count_branches(&mut self, gv: &Polynomial, y1: &Q, y2: &Q) -> Result<()> {
        if self.aux {
            for &pi in &self.order {
                self.pts[pi].l = 1;
                self.pts[pi].r = 1;
            }
            return Ok(());
        }
        if !self.clip_r {
            let counts = self.bucket_wall(gv, &self.win.1.clone(), y1, y2)?;
            for (k, &pi) in self.order.iter().enumerate() {
                self.pts[pi].r = counts[k];
            }
        }
        if !self.clip_l {
            let counts = self.bucket_wall(gv, &self.win.0.clone(), y1, y2)?;
            for (k, &pi) in self.order.iter().enumerate() {
                self.pts[pi].l = counts[k];
            }
        }
        Ok(())
    }

    /// Clamp every counting window to height ≤ eps around the root. Branches
    /// still cross the walls inside their point's window: the narrowed edges
    /// get re-certified curve-free, so nothing escapes through them.
    fn narrow_point_windows(&mut self, eps: &Q) {
        let m = eps / &Q::from_integer(4.into());
        for &pi in &self.order {
            let pt = &mut self.pts[pi];
            if !pt.bottom {
                let cand = pt.tight.lo() - &m;
                if cand > pt.win.0 {
                    pt.win.0 = cand;
                }
            }
            if !pt.top {
                let cand = pt.tight.hi() + &m;
                if cand < pt.win.1 {
                    pt.win.1 = cand;
                }
            }
        }
    }

    /// Root counts of gv(sample, ·) per point window; every root must land
    /// in exactly one window (segregation guarantees it).
    fn bucket_wall(&self, gv: &Polynomial, sample: &Q, y1: &Q, y2: &Q) -> Result<Vec<u32>> {
        let fq = gv.eval_var(Var::X, sample);
        let mut counts = vec![0u32; self.order.len()];
        if fq.as_constant().is_some() {
            return Ok(counts);
        }
        let roots = isolate_in(&fq, Var::Y, &Iv::new(y1.clone(), y2.clone()));
        'roots: for mut r in roots {
            for (k, &pi) in self.order.iter().enumerate() {
                let pt = &self.pts[pi];
                let lo_cmp = r.cmp_rational(&pt.win.0);
                let hi_cmp = r.cmp_rational(&pt.win.1);
                let inside = (lo_cmp == Ordering::Greater && hi_cmp == Ordering::Less)
                    || (pt.bottom && lo_cmp == Ordering::Equal)
                    || (pt.top && hi_cmp == Ordering::Equal);
                if inside {
                    counts[k] += 1;
                    continue 'roots;
                }
            }
            return Err(Error::internal(
                "branch crossed a segregated wall outside every point window",
            ));
        }
        Ok(counts)
    }
}

pub(crate) type PtRef = (usize, usize); // (final column index, arena index)

pub(crate) struct Builder {
    pub(crate) b2: Box2,
    pub(crate) gv: Polynomial,
    pub(crate) cols: Vec<ColBuild>,
    edges: BTreeMap<(PtRef, PtRef), EdgeKind>,
    /// Per half-gap (between final columns i and i+1), branch edges ordered
    /// bottom-up. Length = cols.len() − 1.
    pub(crate) gap_edges: Vec<Vec<(PtRef, PtRef)>>,
}

/// Where the scaffolding of the extended graph came from, for consumers that
/// must locate cells and diagonals within the half-gap strip structure.
#[derive(Debug, Default)]
pub(crate) struct ExtendTrace {
    /// Triangulation diagonals: (a, b, half-gap, strip window).
    pub(crate) diagonals: Vec<(PtRef, PtRef, usize, usize)>,
    /// Per cell (parallel to the returned cell list): (half-gap, strip window).
    pub(crate) cell_regions: Vec<(usize, usize)>,
    /// Final deduplicated strips per half-gap, bottom-up: the bottom ceiling
    /// pair, the branch edges, the top ceiling pair.
    pub(crate) strips: Vec<Vec<(PtRef, PtRef)>>,
}

fn edge_key(a: PtRef, b: PtRef) -> (PtRef, PtRef) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Builder {
    fn add_edge(&mut self, a: PtRef, b: PtRef, kind: EdgeKind) {
        debug_assert_ne!(a, b);
        let entry = self.edges.entry(edge_key(a, b)).or_insert(kind);
        // curve kinds win over scaffold on duplicates
        if *entry == EdgeKind::Auxiliary && kind != EdgeKind::Auxiliary {
            *entry = kind;
        }
    }

    pub(crate) fn start(
        g: &Polynomial,
        b2: &Box2,
        eps: &Q,
        hook: Option<&dyn FactorHook>,
        extra_x: &[Polynomial],
        mesh: bool,
    ) -> Result<Builder> {
        let zero = Q::from_integer(0.into());
        assert!(b2.x.lo() < b2.x.hi() && b2.y.lo() < b2.y.hi(), "degenerate box");
        assert!(eps > &zero, "eps must be positive");
        if g.is_zero() {
            return Err(Error::ZeroPolynomial("curve topology"));
        }
        if g.as_constant().is_none() {
            let prim = g.primitive_part_q();
            let sf = square_free_part(g);
            if sf != prim {
                let square = prim.div_exact(&sf).unwrap_or(prim);
                return Err(Error::NotSquareFree(square.to_string()));
            }
        }

        let (x1, x2) = (b2.x.lo().clone(), b2.x.hi().clone());
        let (y1, y2) = (b2.y.lo().clone(), b2.y.hi().clone());

        // split off the x-only factor: vertical lines of the curve
        let (vpart, gv) = split_content(g, &[Var::Y]);
        let v_list = if vpart.as_constant().is_none() {
            FactorList::factor(&vpart, hook)
        } else {
            FactorList::trivial()
        };

        // critical/boundary x-values of gv as a factor list
        let x = Polynomial::var(Var::X);
        let mut h_parts: Vec<Polynomial> = vec![
            x.clone() - &Polynomial::constant(x1.clone()),
            x - &Polynomial::constant(x2.clone()),
        ];
        if gv.deg(Var::Y) >= 1 {
            for yb in [&y1, &y2] {
                let edge = gv.eval_var(Var::Y, yb);
                if !edge.is_zero() && edge.as_constant().is_none() {
                    h_parts.push(edge);
                }
            }
            // Critical x-values. When the curve is known as a product, the
            // discriminant of the product vanishes exactly where a factor's
            // discriminant or a pairwise resultant does (common zeros of two
            // factors are singular points of the product), and the per-factor
            // route keeps degrees and coefficients far smaller.
            let g_list = FactorList::factor(&gv, hook);
            let parts: Vec<&Polynomial> = g_list.support().collect();
            if parts.len() <= 1 {
                let d = resultant(&gv, &gv.derivative(Var::Y), Var::Y);
                if d.is_zero() {
                    return Err(Error::internal(
                        "discriminant of the square-free curve vanished",
                    ));
                }
                if d.as_constant().is_none() {
                    h_parts.push(d);
                }
            } else {
                for u in &parts {
                    if u.deg(Var::Y) == 0 {
                        continue; // y-free piece: no fiber structure of its own
                    }
                    let d = resultant(u, &u.derivative(Var::Y), Var::Y);
                    if d.is_zero() {
                        return Err(Error::internal(
                            "discriminant of a square-free factor vanished",
                        ));
                    }
                    if d.as_constant().is_none() {
                        h_parts.push(d);
                    }
                }
                for i in 0..parts.len() {
                    for j in i + 1..parts.len() {
                        let r = resultant(parts[i], parts[j], Var::Y);
                        if r.is_zero() {
                            return Err(Error::internal(
                                "coprime curve factors share a component",
                            ));
                        }
                        if r.as_constant().is_none() {
                            h_parts.push(r);
                        }
                    }
                }
            }
        }
        for p in extra_x {
            if !p.is_zero() && p.as_constant().is_none() {
                h_parts.push(p.clone());
            }
        }
        let mut h_list = FactorList::trivial();
        for p in &h_parts {
            h_list = h_list.mul(&FactorList::factor(p, hook));
        }
        let h_list = h_list.saturate_away(&v_list);

        // x-roots per coprime factor, clipped to the box
        let xwin = Iv::new(x1.clone(), x2.clone());
        let mut raw: Vec<(Alg1, bool)> = Vec::new();
        for f in h_list.support() {
            for r in isolate_in(f, Var::X, &xwin) {
                raw.push((r, false));
            }
        }
        for f in v_list.support() {
            for r in isolate_in(f, Var::X, &xwin) {
                raw.push((r, true));
            }
        }
        // pairwise disjoint enclosures (all roots distinct by coprimality)
        for i in 0..raw.len() {
            for j in i + 1..raw.len() {
                let (left, right) = raw.split_at_mut(j);
                let c = left[i].0.cmp_alg(&mut right[0].0);
                if c == Ordering::Equal {
                    return Err(Error::internal("coprime factors shared a root"));
                }
            }
        }
        raw.sort_by(|a, b| a.0.iv().lo().cmp(b.0.iv().lo()));
        let mut cols: Vec<ColBuild> = raw
            .into_iter()
            .map(|(x, vertical)| ColBuild::new(x, vertical, false))
            .collect();
        if cols.is_empty() {
            return Err(Error::internal("no columns: box corners always project"));
        }

        // separators between adjacent columns; windows clipped at the box
        let two = Q::from_integer(2.into());
        let seps: Vec<Q> = (0..cols.len() - 1)
            .map(|i| (cols[i].x.iv().hi() + cols[i + 1].x.iv().lo()) / &two)
            .collect();
        let n = cols.len();
        for i in 0..n {
            let clip_l = i == 0 && cols[i].x.cmp_rational(&x1) == Ordering::Equal;
            let clip_r = i == n - 1 && cols[i].x.cmp_rational(&x2) == Ordering::Equal;
            let lo = if i == 0 {
                if clip_l {
                    x1.clone()
                } else {
                    (&x1 + cols[i].x.iv().lo()) / &two
                }
            } else {
                seps[i - 1].clone()
            };
            let hi = if i == n - 1 {
                if clip_r {
                    x2.clone()
                } else {
                    (cols[i].x.iv().hi() + &x2) / &two
                }
            } else {
                seps[i].clone()
            };
            cols[i].clip_l = clip_l;
            cols[i].clip_r = clip_r;
            cols[i].win = (lo, hi);
            cols[i].shrink(); // strict containment from the start
        }
        debug_assert!(cols[0].clip_l, "left box edge must project to a column");
        debug_assert!(cols[n - 1].clip_r, "right box edge must project to a column");

        // per-column fibers, windows, segregation, branch counts (parallel);
        // mesh mode clamps boxes to eps before certifying
        let eps_fiber = if mesh {
            eps / &Q::from_integer(4.into())
        } else {
            eps.clone()
        };
        cols.par_iter_mut().try_for_each(|c| -> Result<()> {
            c.build_fiber(&gv, &y1, &y2, &eps_fiber)?;
            c.assign_point_windows(&y1, &y2);
            if mesh {
                let mut guard = 0u32;
                while &c.win.1 - &c.win.0 > *eps {
                    c.shrink();
                    guard += 1;
                    if guard > SEGREGATION_CAP {
                        return Err(Error::SegregationFailed(
                            "column window would not contract below eps".into(),
                        ));
                    }
                }
                c.narrow_point_windows(eps);
            }
            c.segregate(&gv)?;
            c.count_branches(&gv, &y1, &y2)
        })?;

        // auxiliary columns at the separators + branch pairing
        let mut builder = Builder {
            b2: b2.clone(),
            gv: gv.clone(),
            cols: Vec::with_capacity(2 * n - 1),
            edges: BTreeMap::new(),
            gap_edges: Vec::new(),
        };
        let mut aux_cols: Vec<ColBuild> = Vec::with_capacity(n - 1);
        for (gi, sep) in seps.iter().enumerate() {
            let mut aux = ColBuild::new(Alg1::rational(Var::X, sep.clone()), false, true);
            aux.win = (sep.clone(), sep.clone());
            aux.build_fiber(&gv, &y1, &y2, eps)?;
            aux.assign_point_windows(&y1, &y2);
            aux.count_branches(&gv, &y1, &y2)?;
            let u = aux.order.len();
            let r_sum: u32 = cols[gi].order.iter().map(|&pi| cols[gi].pts[pi].r).sum();
            let l_sum: u32 = cols[gi + 1]
                .order
                .iter()
                .map(|&pi| cols[gi + 1].pts[pi].l)
                .sum();
            if r_sum as usize != u || l_sum as usize != u {
                return Err(Error::internal(
                    "branch sums across a gap disagree with the auxiliary column",
                ));
            }
            // final column indices: real i ↦ 2i, aux gi ↦ 2gi+1
            let (lc, ac, rc) = (2 * gi, 2 * gi + 1, 2 * gi + 2);
            let mut left_slots: Vec<PtRef> = Vec::with_capacity(u);
            for &pi in &cols[gi].order {
                for _ in 0..cols[gi].pts[pi].r {
                    left_slots.push((lc, pi));
                }
            }
            let mut right_slots: Vec<PtRef> = Vec::with_capacity(u);
            for &pi in &cols[gi + 1].order {
                for _ in 0..cols[gi + 1].pts[pi].l {
                    right_slots.push((rc, pi));
                }
            }
            let mut left_half = Vec::with_capacity(u);
            let mut right_half = Vec::with_capacity(u);
            for (j, &api) in aux.order.iter().enumerate() {
                left_half.push((left_slots[j], (ac, api)));
                right_half.push(((ac, api), right_slots[j]));
            }
            builder.gap_edges.push(left_half);
            builder.gap_edges.push(right_half);
            aux_cols.push(aux);
        }
        // interleave real and aux columns into the final order
        let mut aux_iter = aux_cols.into_iter();
        for (i, c) in cols.into_iter().enumerate() {
            builder.cols.push(c);
            if i + 1 < n {
                builder.cols.push(aux_iter.next().expect("one aux per gap"));
            }
        }
        for gap in builder.gap_edges.clone() {
            for (a, b) in gap {
                builder.add_edge(a, b, EdgeKind::Branch);
            }
        }
        Ok(builder)
    }

    /// Direct vertical chains for the plain topology graph.
    fn add_vertical_edges(&mut self) {
        for ci in 0..self.cols.len() {
            if !self.cols[ci].vertical {
                continue;
            }
            let order = self.cols[ci].order.clone();
            for w in order.windows(2) {
                self.add_edge((ci, w[0]), (ci, w[1]), EdgeKind::VerticalLine);
            }
        }
    }

    /// Ceilings, wall midpoints, wall chains, ceiling chains, and the
    /// triangulated cells of the extended graph.
    pub(crate) fn extend(&mut self) -> (Vec<[PtRef; 3]>, ExtendTrace) {
        let (y1, y2) = (self.b2.y.lo().clone(), self.b2.y.hi().clone());
        let two = Q::from_integer(2.into());

        // ceilings
        for c in self.cols.iter_mut() {
            let need_bottom = c.order.first().map_or(true, |&pi| !c.pts[pi].bottom);
            if need_bottom {
                let pi = c.pts.len();
                c.pts.push(PtBuild {
                    tight: Iv::point(y1.clone()),
                    win: (y1.clone(), y1.clone()),
                    on_curve: false,
                    bottom: true,
                    top: false,
                    l: 0,
                    r: 0,
                    kind: PointKind::Ceiling,
                    fiber_idx: None,
                });
                c.order.insert(0, pi);
            }
            let need_top = c.order.last().map_or(true, |&pi| !c.pts[pi].top);
            if need_top {
                let pi = c.pts.len();
                c.pts.push(PtBuild {
                    tight: Iv::point(y2.clone()),
                    win: (y2.clone(), y2.clone()),
                    on_curve: false,
                    bottom: false,
                    top: true,
                    l: 0,
                    r: 0,
                    kind: PointKind::Ceiling,
                    fiber_idx: None,
                });
                c.order.push(pi);
            }
        }

        // wall midpoints between consecutive points; on a vertical-line
        // column they subdivide the line, so they lie on the curve
        for c in self.cols.iter_mut() {
            let on_line = c.vertical;
            let mut new_order = Vec::with_capacity(2 * c.order.len());
            for k in 0..c.order.len() {
                if k > 0 {
                    let below = c.pts[c.order[k - 1]].tight.hi().clone();
                    let above = c.pts[c.order[k]].tight.lo().clone();
                    debug_assert!(below < above);
                    let mid = (&below + &above) / &two;
                    let pi = c.pts.len();
                    c.pts.push(PtBuild {
                        tight: Iv::point(mid.clone()),
                        win: (mid.clone(), mid),
                        on_curve: on_line,
                        bottom: false,
                        top: false,
                        l: 0,
                        r: 0,
                        kind: PointKind::WallMid,
                        fiber_idx: None,
                    });
                    new_order.push(pi);
                }
                new_order.push(c.order[k]);
            }
            c.order = new_order;
        }

        // wall chains (curve edges on vertical lines, scaffold elsewhere)
        for ci in 0..self.cols.len() {
            let kind = if self.cols[ci].vertical {
                EdgeKind::VerticalLine
            } else {
                EdgeKind::Auxiliary
            };
            let order = self.cols[ci].order.clone();
            for w in order.windows(2) {
                self.add_edge((ci, w[0]), (ci, w[1]), kind);
            }
        }

        // ceiling chains + cells per gap
        let mut cells: Vec<[PtRef; 3]> = Vec::new();
        let mut trace = ExtendTrace::default();
        for gi in 0..self.cols.len() - 1 {
            let (lci, rci) = (gi, gi + 1);
            let bottom_edge = (
                (lci, self.cols[lci].order[0]),
                (rci, self.cols[rci].order[0]),
            );
            let top_edge = (
                (lci, *self.cols[lci].order.last().unwrap()),
                (rci, *self.cols[rci].order.last().unwrap()),
            );
            self.add_edge(bottom_edge.0, bottom_edge.1, EdgeKind::Auxiliary);
            self.add_edge(top_edge.0, top_edge.1, EdgeKind::Auxiliary);

            let mut strip: Vec<(PtRef, PtRef)> = Vec::new();
            strip.push(bottom_edge);
            for e in &self.gap_edges[gi] {
                if *strip.last().unwrap() != *e {
                    strip.push(*e);
                }
            }
            if *strip.last().unwrap() != top_edge {
                strip.push(top_edge);
            }

            // positions within each column's order for chain walking
            let lpos: BTreeMap<usize, usize> = self.cols[lci]
                .order
                .iter()
                .enumerate()
                .map(|(k, &pi)| (pi, k))
                .collect();
            let rpos: BTreeMap<usize, usize> = self.cols[rci]
                .order
                .iter()
                .enumerate()
                .map(|(k, &pi)| (pi, k))
                .collect();

            for (s, w) in strip.windows(2).enumerate() {
                let (lo_e, hi_e) = (w[0], w[1]);
                let la = lpos[&(lo_e.0).1];
                let lb = lpos[&(hi_e.0).1];
                let ra = rpos[&(lo_e.1).1];
                let rb = rpos[&(hi_e.1).1];
                debug_assert!(la <= lb && ra <= rb);
                let lchain: Vec<PtRef> = (la..=lb)
                    .map(|k| (lci, self.cols[lci].order[k]))
                    .collect();
                let rchain: Vec<PtRef> = (ra..=rb)
                    .map(|k| (rci, self.cols[rci].order[k]))
                    .collect();
                self.triangulate_region(&lchain, &rchain, (gi, s), &mut cells, &mut trace);
            }
            trace.strips.push(strip);
        }
        (cells, trace)
    }

    /// Two-chain triangulation of the region between two wall chains and
    /// two straight edges; advances the chain whose next vertex is lower.
    fn triangulate_region(
        &mut self,
        lchain: &[PtRef],
        rchain: &[PtRef],
        region: (usize, usize),
        cells: &mut Vec<[PtRef; 3]>,
        trace: &mut ExtendTrace,
    ) {
        let ymid = |cols: &[ColBuild], r: &PtRef| cols[r.0].pts[r.1].tight.mid();
        let lmid: Vec<Q> = lchain.iter().map(|r| ymid(&self.cols, r)).collect();
        let rmid: Vec<Q> = rchain.iter().map(|r| ymid(&self.cols, r)).collect();
        // a final advance along a single-point chain re-adds the strip edge
        // itself; only genuine interior chords count as diagonals
        let hi_pair = (*lchain.last().unwrap(), *rchain.last().unwrap());
        let (mut i, mut j) = (0usize, 0usize);
        while i + 1 < lchain.len() || j + 1 < rchain.len() {
            let advance_left = if i + 1 >= lchain.len() {
                false
            } else if j + 1 >= rchain.len() {
                true
            } else {
                lmid[i + 1] <= rmid[j + 1]
            };
            let diag = if advance_left {
                // CCW: (L_i, R_j, L_{i+1})
                cells.push([lchain[i], rchain[j], lchain[i + 1]]);
                i += 1;
                (lchain[i], rchain[j])
            } else {
                // CCW: (L_i, R_j, R_{j+1})
                cells.push([lchain[i], rchain[j], rchain[j + 1]]);
                j += 1;
                (lchain[i], rchain[j])
            };
            trace.cell_regions.push(region);
            self.add_edge(diag.0, diag.1, EdgeKind::Auxiliary);
            if diag != hi_pair {
                trace.diagonals.push((diag.0, diag.1, region.0, region.1));
            }
        }
    }

    pub(crate) fn emit(self, cells: Option<Vec<[PtRef; 3]>>) -> (TopologyGraph, Vec<[usize; 3]>) {
        let mut id_of: BTreeMap<PtRef, usize> = BTreeMap::new();
        let mut points = Vec::new();
        let mut columns = Vec::new();
        for (ci, c) in self.cols.iter().enumerate() {
            let kind = if c.aux {
                ColumnKind::Auxiliary
            } else if c.vertical {
                ColumnKind::VerticalLine
            } else {
                ColumnKind::Critical
            };
            let mut ids = Vec::with_capacity(c.order.len());
            for &pi in &c.order {
                let id = points.len();
                id_of.insert((ci, pi), id);
                let pt = &c.pts[pi];
                points.push(GraphPoint {
                    enclosure: Box2::new(c.x.iv().clone(), pt.tight.clone()),
                    column: ci,
                    kind: pt.kind,
                    on_curve: pt.on_curve,
                    left_branches: pt.l,
                    right_branches: pt.r,
                });
                ids.push(id);
            }
            columns.push(Column {
                x: c.x.iv().clone(),
                kind,
                points: ids,
            });
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|(&(a, b), &kind)| Edge {
                a: id_of[&a],
                b: id_of[&b],
                kind,
            })
            .collect();
        debug_assert!(edges.iter().all(|e| {
            !e.kind.is_curve() || (points[e.a].on_curve && points[e.b].on_curve)
        }));
        let cells = cells
            .unwrap_or_default()
            .into_iter()
            .map(|c| [id_of[&c[0]], id_of[&c[1]], id_of[&c[2]]])
            .collect();
        (
            TopologyGraph {
                points,
                columns,
                edges,
            },
            cells,
        )
    }
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Isotopic topology graph of g = 0 within `b2`; every point enclosure has
/// width ≤ eps on both axes.
pub fn curve_topology(g: &Polynomial, b2: &Box2, eps: &Q) -> Result<TopologyGraph> {
    curve_topology_hooked(g, b2, eps, None)
}

pub fn curve_topology_hooked(
    g: &Polynomial,
    b2: &Box2,
    eps: &Q,
    hook: Option<&dyn FactorHook>,
) -> Result<TopologyGraph> {
    let mut b = Builder::start(g, b2, eps, hook, &[], false)?;
    b.add_vertical_edges();
    let (graph, _) = b.emit(None);
    debug_assert!(graph.edges_properly_embedded());
    Ok(graph)
}

/// Topology graph plus a triangulation of the box into cells whose areas
/// sum exactly to the box area.
pub fn extend_topology_graph(
    g: &Polynomial,
    b2: &Box2,
    eps: &Q,
) -> Result<ExtendedTopologyGraph> {
    extend_topology_graph_hooked(g, b2, eps, None)
}

pub fn extend_topology_graph_hooked(
    g: &Polynomial,
    b2: &Box2,
    eps: &Q,
    hook: Option<&dyn FactorHook>,
) -> Result<ExtendedTopologyGraph> {
    let mut b = Builder::start(g, b2, eps, hook, &[], false)?;
    let (cells, _) = b.extend();
    let (graph, cells) = b.emit(Some(cells));
    let out = ExtendedTopologyGraph { graph, cells };
    debug_assert!(out.cell_edges_closed());
    debug_assert!(out.all_points_in_cells());
    Ok(out)
}

/// Shrink the enclosure of a curve point until the curve provably misses the
/// top and bottom edges of the box and the box interior contains no
/// x-critical point besides (possibly) the point itself. The y-window is
/// fixed strictly between the neighboring fiber roots; only the x-window
/// shrinks, which guarantees termination. Returns the certified box, whose
/// x-width is always positive (a rational base gets a symmetric window).
///
/// Requires the point to lie on the curve after its x-only factor is
/// stripped.
pub fn segregate_point(g: &Polynomial, p: &mut AlgPoint2) -> Result<Box2> {
    let (_, gv) = split_content(g, &[Var::Y]);
    let crit = x_critical_roots(&gv);
    segregate_point_with(&gv, &crit, p)
}

/// X-critical values of the stripped curve, for reuse when many points are
/// segregated against the same curve.
pub(crate) fn x_critical_roots(gv: &Polynomial) -> Vec<Alg1> {
    if gv.deg(Var::Y) >= 1 {
        let d = resultant(gv, &gv.derivative(Var::Y), Var::Y);
        if !d.is_zero() && d.as_constant().is_none() {
            return isolate(&square_free_part(&d), Var::X);
        }
    }
    Vec::new()
}

pub(crate) fn segregate_point_with(
    gv: &Polynomial,
    crit: &[Alg1],
    p: &mut AlgPoint2,
) -> Result<Box2> {
    debug_assert!(p.is_zero(gv), "point must lie on the stripped curve");
    // x-critical values other than (possibly) the point's own projection;
    // cmp_alg refines both sides until the enclosures are disjoint
    let mut foreign: Vec<Alg1> = Vec::new();
    for root in crit {
        let mut root = root.clone();
        if p.base.cmp_alg(&mut root) != Ordering::Equal {
            foreign.push(root);
        }
    }
    let two = Q::from_integer(2.into());
    let eighth = Q::new(1.into(), 8.into());
    let idx = p.idx;
    let c = if idx > 0 {
        (p.fiber.root_iv(idx - 1).hi() + p.fiber.root_iv(idx).lo()) / &two
    } else {
        p.fiber.root_iv(idx).lo() - &eighth
    };
    let d = if idx + 1 < p.fiber.len() {
        (p.fiber.root_iv(idx).hi() + p.fiber.root_iv(idx + 1).lo()) / &two
    } else {
        p.fiber.root_iv(idx).hi() + &eighth
    };
    // rational base: symmetric x-window inside the gap to foreign criticals
    let mut half_width: Option<Q> = None;
    if p.base_iv().is_point() {
        let alpha = p.base_iv().lo().clone();
        let mut w = eighth;
        for f in &foreign {
            let dist = if f.iv().hi() < &alpha {
                &alpha - f.iv().hi()
            } else {
                f.iv().lo() - &alpha
            };
            let half = dist / &two;
            if half < w {
                w = half;
            }
        }
        half_width = Some(w);
    }
    for _ in 0..SEGREGATION_CAP {
        let xiv = match &half_width {
            Some(w) => {
                let alpha = p.base_iv().lo();
                Iv::new(alpha - w, alpha + w)
            }
            None => p.base_iv().clone(),
        };
        let top = Box2::new(xiv.clone(), Iv::point(d.clone()));
        let bottom = Box2::new(xiv.clone(), Iv::point(c.clone()));
        if !box_eval2(gv, &top).contains_zero() && !box_eval2(gv, &bottom).contains_zero() {
            return Ok(Box2::new(xiv, Iv::new(c, d)));
        }
        match &mut half_width {
            Some(w) => *w = &*w / &two,
            None => p.refine(),
        }
    }
    Err(Error::SegregationFailed(
        "point box edges could not be certified curve-free".into(),
    ))
}

/// Exact left/right branch numbers of a curve point: the number of curve
/// segments meeting it from each side, via root counts on the walls of a
/// segregating box.
pub fn branch_numbers(g: &Polynomial, p: &mut AlgPoint2) -> Result<(u32, u32)> {
    let (_, gv) = split_content(g, &[Var::Y]);
    let crit = x_critical_roots(&gv);
    branch_numbers_with(&gv, &crit, p)
}

pub(crate) fn branch_numbers_with(
    gv: &Polynomial,
    crit: &[Alg1],
    p: &mut AlgPoint2,
) -> Result<(u32, u32)> {
    let bx = segregate_point_with(gv, crit, p)?;
    let count = |sample: &Q| -> u32 {
        let fq = gv.eval_var(Var::X, sample);
        if fq.as_constant().is_some() {
            return 0;
        }
        isolate_in(&fq, Var::Y, &bx.y)
            .into_iter()
            .filter(|r| {
                let mut r = r.clone();
                r.cmp_rational(bx.y.lo()) == Ordering::Greater
                    && r.cmp_rational(bx.y.hi()) == Ordering::Less
            })
            .count() as u32
    };
    let l = count(bx.x.lo());
    let r = count(bx.x.hi());
    Ok((l, r))
}
