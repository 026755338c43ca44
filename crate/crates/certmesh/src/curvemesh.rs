//! ε-accurate isotopic meshing of plane algebraic curves.
//!
//! The box is cut into vertical *bands* around every special x-value (branch
//! points, vertical tangents, vertical lines, horizontal-tangent projections)
//! and *regions* in between. Regions contain only smooth, doubly-monotone
//! curve arcs and are meshed by quadtree subdivision into certified **nice
//! boxes**: each kept box provably contains a single curve segment, decided
//! by exact root counting on its boundary. Bands are meshed from the
//! segregating boxes of the topology machinery: one vertex per fiber point,
//! stitched to the exact wall crossings shared with the neighbouring
//! regions. Vertical lines get a ladder of certified slices.
//!
//! Every mesh edge carries a certificate box of side length ≤ ε containing
//! its curve segment, so the mesh is isotopic to the curve and pointwise
//! ε-close. All decisions are exact; vertex identity across box boundaries
//! is resolved through a shared per-line root store, never by coordinate
//! comparison of approximations.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::curvetop::{
    Builder, ColBuild, Edge, EdgeKind, ExtendedTopologyGraph, GraphPoint, PointKind,
    TopologyGraph,
};
use crate::interval::{box_eval2, Box2, Iv};
use crate::ratpoly::{
    content_wrt, resultant, split_content, square_free_part, FactorHook, Polynomial, Q, Var, Z,
};
use crate::rootiso::isolate_in;
use crate::{Error, Result};

/// Subdivision gives up below boxes of relative size 2⁻⁴⁰: reaching this
/// depth means the region violates the smoothness precondition.
const DEPTH_CAP: u32 = 40;

/// Interval-refinement attempts per certificate before a slab is bisected.
const SLAB_TRIES: u32 = 8;

fn qz(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

fn fmt_box(b: &Box2) -> String {
    format!("[{}, {}]×[{}, {}]", b.x.lo(), b.x.hi(), b.y.lo(), b.y.hi())
}

// ---------------------------------------------------------------------------
// Public mesh types
// ---------------------------------------------------------------------------

/// One side of an axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

/// What a certificate box certifies about the curve inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertKind {
    /// Subdivision box: exactly one curve segment runs through it (possibly
    /// lying on one of its sides).
    Nice,
    /// Segregating box around a fiber point: all branches entering the box
    /// pass through that single point.
    Segregating,
    /// Slice of a vertical line of the curve between two fiber points; the
    /// line is the only curve inside.
    Line,
}

/// A certificate box together with where the curve crosses its boundary.
///
/// Crossing intervals are expressed in the side's own coordinate: x for
/// `Bottom`/`Top`, y for `Left`/`Right`. A point interval is an exactly
/// known crossing; a full-side interval marks a side the curve lies on.
#[derive(Debug, Clone)]
pub struct NiceBox {
    pub box2: Box2,
    pub kind: CertKind,
    pub crossings: Vec<(Side, Iv)>,
}

/// Mesh segment between two vertices, with the index of the box that
/// certifies the curve piece it approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshEdge {
    pub a: usize,
    pub b: usize,
    pub cert: usize,
}

/// Straight-line mesh of a curve: rational vertices, certified edges, and
/// the certificate boxes they refer to.
#[derive(Debug, Clone)]
pub struct MeshingGraph {
    pub points: Vec<(Q, Q)>,
    pub edges: Vec<MeshEdge>,
    pub boxes: Vec<NiceBox>,
}

impl MeshingGraph {
    /// Connected components, counting isolated vertices.
    pub fn components(&self) -> usize {
        let n = self.points.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..n).filter(|&k| find(&mut parent, k) == k).count()
    }

    /// Independent cycles: E − V + C.
    pub fn cycles(&self) -> usize {
        (self.edges.len() + self.components()).saturating_sub(self.points.len())
    }

    /// Vertex degrees.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.points.len()];
        for e in &self.edges {
            d[e.a] += 1;
            d[e.b] += 1;
        }
        d
    }

    /// Largest side length over all certificate boxes.
    pub fn max_box_side(&self) -> Q {
        let mut m = qz(0);
        for b in &self.boxes {
            let w = b.box2.max_width();
            if w > m {
                m = w;
            }
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Quadtree subdivision (pure: no shared state, parallel-safe)
// ---------------------------------------------------------------------------

/// A chord endpoint as discovered on the box boundary.
#[derive(Debug, Clone)]
enum EndPt {
    /// Box corner lying exactly on the curve, with the arc entering the box.
    Corner(Q, Q),
    /// Crossing strictly inside one side: ordinal among that side's strict
    /// interior crossings, counted in ascending coordinate order.
    Interior(Side, usize),
}

#[derive(Debug, Clone)]
enum LeafStatus {
    /// One segment inside, entering and leaving at the two endpoints.
    Chord(EndPt, EndPt),
    /// The curve runs along this entire side and nowhere else in the box.
    OnEdge(Side),
}

#[derive(Debug, Clone)]
struct Leaf {
    b: Box2,
    status: LeafStatus,
}

enum Decision {
    Drop,
    Keep(LeafStatus),
    Split,
}

struct SubdivCtx<'a> {
    p: &'a Polynomial,
    px: Polynomial,
    py: Polynomial,
    eps: Q,
}

/// (line axis, line position, span low, span high) of a box side. Axis 0 is
/// a vertical line (root coordinate y), axis 1 horizontal (root coordinate
/// x); the same encoding keys the shared root store.
fn side_geom(b: &Box2, s: Side) -> (u8, Q, Q, Q) {
    match s {
        Side::Left => (0, b.x.lo().clone(), b.y.lo().clone(), b.y.hi().clone()),
        Side::Right => (0, b.x.hi().clone(), b.y.lo().clone(), b.y.hi().clone()),
        Side::Bottom => (1, b.y.lo().clone(), b.x.lo().clone(), b.x.hi().clone()),
        Side::Top => (1, b.y.hi().clone(), b.x.lo().clone(), b.x.hi().clone()),
    }
}

fn side_restriction(p: &Polynomial, b: &Box2, s: Side) -> (Polynomial, Var) {
    match s {
        Side::Left => (p.eval_var(Var::X, b.x.lo()), Var::Y),
        Side::Right => (p.eval_var(Var::X, b.x.hi()), Var::Y),
        Side::Bottom => (p.eval_var(Var::Y, b.y.lo()), Var::X),
        Side::Top => (p.eval_var(Var::Y, b.y.hi()), Var::X),
    }
}

const SIDES: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

fn eval_point(p: &Polynomial, x: &Q, y: &Q) -> Q {
    p.eval_var(Var::X, x)
        .eval_var(Var::Y, y)
        .as_constant()
        .expect("evaluation at a point yields a constant")
}

fn qsign(v: &Q) -> i32 {
    let zero = qz(0);
    if *v > zero {
        1
    } else if *v < zero {
        -1
    } else {
        0
    }
}

/// Does the arc through the on-curve box corner (cx, cy) enter the box's
/// interior? Inside a regular region both partials are nonzero on the
/// curve, so the tangent is strictly diagonal and its slope sign decides.
/// `None` flags a vanishing partial (precondition violation): keep
/// subdividing and let the depth cap report it.
fn corner_enters(ctx: &SubdivCtx, b: &Box2, cx: &Q, cy: &Q) -> Option<bool> {
    let sx = qsign(&eval_point(&ctx.px, cx, cy));
    let sy = qsign(&eval_point(&ctx.py, cx, cy));
    if sx == 0 || sy == 0 {
        return None;
    }
    // slope = −px/py is positive iff the partials have opposite signs
    let slope_positive = (sx > 0) != (sy > 0);
    // corners on the main diagonal (bottom-left, top-right) are entered by
    // positive-slope arcs, the other two by negative-slope arcs
    let need_positive = (cx == b.x.lo()) == (cy == b.y.lo());
    Some(slope_positive == need_positive)
}

fn classify(ctx: &SubdivCtx, b: &Box2) -> Decision {
    if !box_eval2(ctx.p, b).contains_zero() {
        return Decision::Drop;
    }
    if b.max_width() > ctx.eps {
        return Decision::Split;
    }

    let restr: Vec<(Polynomial, Var)> = SIDES.iter().map(|&s| side_restriction(ctx.p, b, s)).collect();
    let on_curve: Vec<Side> = SIDES
        .iter()
        .zip(&restr)
        .filter(|(_, (r, _))| r.is_zero())
        .map(|(&s, _)| s)
        .collect();

    if on_curve.len() >= 2 {
        return Decision::Split;
    }
    if let [lone] = on_curve[..] {
        // admissible iff the other three sides only touch the curve at the
        // two corners of the on-curve side
        let (_, at, _, _) = side_geom(b, lone);
        for (&s, (r, v)) in SIDES.iter().zip(&restr) {
            if s == lone {
                continue;
            }
            let (axis, _, lo, hi) = side_geom(b, s);
            let perpendicular = (axis == 0) != matches!(lone, Side::Left | Side::Right);
            for mut root in isolate_in(r, *v, &Iv::new(lo.clone(), hi.clone())) {
                if !(perpendicular && root.cmp_rational(&at) == Ordering::Equal) {
                    return Decision::Split;
                }
            }
        }
        return Decision::Keep(LeafStatus::OnEdge(lone));
    }

    // small normal variation: the gradient provably avoids (0, 0)
    let snv = box_eval2(&ctx.px, b)
        .pow(2)
        .add(&box_eval2(&ctx.py, b).pow(2));
    if snv.contains_zero() {
        return Decision::Split;
    }

    // exact boundary analysis: count arc ends entering the interior
    let mut corners: BTreeSet<(Q, Q)> = BTreeSet::new();
    let mut ends: Vec<EndPt> = Vec::new();
    for (&s, (r, v)) in SIDES.iter().zip(&restr) {
        let (axis, at, lo, hi) = side_geom(b, s);
        let mut ordinal = 0usize;
        for mut root in isolate_in(r, *v, &Iv::new(lo.clone(), hi.clone())) {
            let corner_val = if root.cmp_rational(&lo) == Ordering::Equal {
                Some(lo.clone())
            } else if root.cmp_rational(&hi) == Ordering::Equal {
                Some(hi.clone())
            } else {
                None
            };
            match corner_val {
                Some(w) => {
                    // (axis, at, w) → corner coordinates
                    let (cx, cy) = if axis == 0 { (at.clone(), w) } else { (w, at.clone()) };
                    corners.insert((cx, cy));
                }
                None => {
                    ends.push(EndPt::Interior(s, ordinal));
                    ordinal += 1;
                }
            }
        }
    }
    for (cx, cy) in corners {
        match corner_enters(ctx, b, &cx, &cy) {
            None => return Decision::Split,
            Some(true) => ends.push(EndPt::Corner(cx, cy)),
            Some(false) => {}
        }
    }
    match ends.len() {
        0 => Decision::Drop,
        2 => {
            let b2 = ends.pop().expect("two ends");
            let a2 = ends.pop().expect("two ends");
            Decision::Keep(LeafStatus::Chord(a2, b2))
        }
        _ => Decision::Split,
    }
}

/// Binary split of the widest dimension; exact ties become a 4-way split so
/// stacked features separate in both directions.
fn children(b: &Box2) -> Vec<Box2> {
    match b.x.width().cmp(&b.y.width()) {
        Ordering::Equal => b.split4().to_vec(),
        Ordering::Greater => {
            let (l, r) = b.x.split();
            vec![Box2::new(l, b.y.clone()), Box2::new(r, b.y.clone())]
        }
        Ordering::Less => {
            let (lo, hi) = b.y.split();
            vec![Box2::new(b.x.clone(), lo), Box2::new(b.x.clone(), hi)]
        }
    }
}

fn subdivide(ctx: &SubdivCtx, b: &Box2, depth: u32, out: &mut Vec<Leaf>) -> Result<()> {
    match classify(ctx, b) {
        Decision::Drop => Ok(()),
        Decision::Keep(status) => {
            out.push(Leaf { b: b.clone(), status });
            Ok(())
        }
        Decision::Split => {
            if depth >= DEPTH_CAP {
                return Err(Error::RegionNotRegular(format!(
                    "subdivision depth cap {DEPTH_CAP} reached at {}; the region \
                     contains a critical or extremal point",
                    fmt_box(b)
                )));
            }
            let kids = children(b);
            if depth < 6 {
                let parts: Vec<Result<Vec<Leaf>>> = kids
                    .par_iter()
                    .map(|k| {
                        let mut v = Vec::new();
                        subdivide(ctx, k, depth + 1, &mut v)?;
                        Ok(v)
                    })
                    .collect();
                for p in parts {
                    out.extend(p?);
                }
            } else {
                for k in &kids {
                    subdivide(ctx, k, depth + 1, out)?;
                }
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Shared root store: one isolation per line, stable root identity
// ---------------------------------------------------------------------------

/// Identity of a crossing vertex: (line axis, line position, root index on
/// that line). Points with both coordinates rational are always keyed
/// through the vertical line so neighbours of different subdivision depth
/// agree on them.
type Key = (u8, Q, usize);

struct LineRoots {
    /// The restriction vanished identically: the whole line is curve.
    zero: bool,
    roots: Vec<crate::rootiso::Alg1>,
}

struct Store {
    p: Polynomial,
    xspan: Iv,
    yspan: Iv,
    qeps: Q,
    map: BTreeMap<(u8, Q), LineRoots>,
}

impl Store {
    fn new(p: Polynomial, xspan: Iv, yspan: Iv, eps: &Q) -> Store {
        Store { p, xspan, yspan, qeps: eps / &qz(4), map: BTreeMap::new() }
    }

    fn line(&mut self, axis: u8, at: &Q) -> &mut LineRoots {
        if !self.map.contains_key(&(axis, at.clone())) {
            let (v, restr, span) = if axis == 0 {
                (Var::Y, self.p.eval_var(Var::X, at), self.yspan.clone())
            } else {
                (Var::X, self.p.eval_var(Var::Y, at), self.xspan.clone())
            };
            let entry = if restr.is_zero() {
                LineRoots { zero: true, roots: Vec::new() }
            } else {
                let mut roots = isolate_in(&restr, v, &span);
                for r in roots.iter_mut() {
                    r.refine_below_width(&self.qeps);
                }
                LineRoots { zero: false, roots }
            };
            self.map.insert((axis, at.clone()), entry);
        }
        self.map.get_mut(&(axis, at.clone())).expect("just inserted")
    }

    fn root(&self, key: &Key) -> &crate::rootiso::Alg1 {
        &self.map[&(key.0, key.1.clone())].roots[key.2]
    }

    fn root_mut(&mut self, key: &Key) -> &mut crate::rootiso::Alg1 {
        &mut self
            .map
            .get_mut(&(key.0, key.1.clone()))
            .expect("line materialized before use")
            .roots[key.2]
    }

    /// Indices of roots strictly inside (lo, hi), ascending.
    fn inside(&mut self, axis: u8, at: &Q, lo: &Q, hi: &Q) -> Vec<usize> {
        let line = self.line(axis, at);
        let mut out = Vec::new();
        for (i, r) in line.roots.iter_mut().enumerate() {
            if r.cmp_rational(lo) == Ordering::Greater && r.cmp_rational(hi) == Ordering::Less {
                out.push(i);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Assembly: claims first, vertices second
// ---------------------------------------------------------------------------

/// Everything a vertex can be before ids exist.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum VertRef {
    /// Crossing root in the store.
    Root(Key),
    /// Fiber-point vertex of a segregating box: (builder column, point).
    Center(usize, usize),
    /// Vertical-line ladder vertex: (builder column, height).
    Ladder(usize, Q),
}

#[derive(Debug, Default)]
struct Claim {
    /// Open spans the final isolating interval must fit strictly inside.
    spans: Vec<(Q, Q)>,
    /// Exactly known value on the line (corner / pinned crossings).
    exact: Option<Q>,
}

#[derive(Debug, Clone)]
enum CrossSeed {
    Root(Key),
    At(Q),
    Span(Iv),
}

#[derive(Debug, Clone)]
enum RoleSeed {
    None,
    Center(usize, usize),
    Chord(VertRef, VertRef),
}

/// How a certificate box participates in the cell decomposition.
#[derive(Debug, Clone)]
pub(crate) enum Role {
    /// Fan the whole boundary cycle from an interior centroid.
    Plain,
    /// Fan every boundary vertex to this interior mesh vertex.
    Center(usize),
    /// Split the boundary cycle at this chord, fan both halves.
    Chord(usize, usize),
}

struct BoxPlan {
    box2: Box2,
    kind: CertKind,
    crossings: Vec<(Side, CrossSeed)>,
    role: RoleSeed,
}

pub(crate) struct MeshInternals {
    pub(crate) roles: Vec<Role>,
    pub(crate) kinds: Vec<EdgeKind>,
}

struct Assembler {
    store: Store,
    claims: BTreeMap<Key, Claim>,
    /// On-curve box sides per line: (span lo, span hi, certificate box).
    registry: BTreeMap<(u8, Q), Vec<(Q, Q, usize)>>,
    plans: Vec<BoxPlan>,
    eseeds: Vec<(VertRef, VertRef, usize, EdgeKind)>,
}

impl Assembler {
    fn new(p: Polynomial, xspan: Iv, yspan: Iv, eps: &Q) -> Assembler {
        Assembler {
            store: Store::new(p, xspan, yspan, eps),
            claims: BTreeMap::new(),
            registry: BTreeMap::new(),
            plans: Vec::new(),
            eseeds: Vec::new(),
        }
    }

    fn claim_span(&mut self, key: &Key, lo: Q, hi: Q) {
        self.claims.entry(key.clone()).or_default().spans.push((lo, hi));
    }

    fn claim_exact(&mut self, key: &Key, v: Q) -> Result<()> {
        let c = self.claims.entry(key.clone()).or_default();
        match &c.exact {
            Some(old) if *old != v => Err(Error::internal(
                "one crossing root collapsed to two different values",
            )),
            _ => {
                c.exact = Some(v);
                Ok(())
            }
        }
    }

    /// Canonical key of an exactly rational on-curve point: through the
    /// vertical line when it carries roots, else the horizontal one.
    fn corner_key(&mut self, cx: &Q, cy: &Q) -> Result<Key> {
        for (axis, at, val) in [(0u8, cx, cy), (1u8, cy, cx)] {
            let line = self.store.line(axis, at);
            if line.zero {
                continue;
            }
            let idx = line
                .roots
                .iter_mut()
                .position(|r| r.cmp_rational(val) == Ordering::Equal);
            let idx = idx.ok_or_else(|| {
                Error::internal("on-curve corner is not a root on its own line")
            })?;
            let key = (axis, at.clone(), idx);
            self.claim_exact(&key, val.clone())?;
            return Ok(key);
        }
        Err(Error::internal(
            "corner lies on two identically-vanishing lines (singular point in a regular region)",
        ))
    }

    /// Key of the `ordinal`-th strict interior crossing on a box side.
    fn interior_key(&mut self, b: &Box2, s: Side, ordinal: usize) -> Result<Key> {
        let (axis, at, lo, hi) = side_geom(b, s);
        let inside = self.store.inside(axis, &at, &lo, &hi);
        let idx = *inside.get(ordinal).ok_or_else(|| {
            Error::internal("subdivision and store disagree on side crossing count")
        })?;
        let key = (axis, at, idx);
        self.claim_span(&key, lo, hi);
        Ok(key)
    }

    fn endpoint(&mut self, b: &Box2, e: &EndPt) -> Result<(Key, Side, CrossSeed)> {
        match e {
            EndPt::Interior(s, ord) => {
                let key = self.interior_key(b, *s, *ord)?;
                Ok((key.clone(), *s, CrossSeed::Root(key)))
            }
            EndPt::Corner(cx, cy) => {
                let key = self.corner_key(cx, cy)?;
                // report the corner on its vertical side
                let side = if cx == b.x.lo() { Side::Left } else { Side::Right };
                Ok((key, side, CrossSeed::At(cy.clone())))
            }
        }
    }

    fn add_leaf(&mut self, leaf: &Leaf) -> Result<()> {
        let id = self.plans.len();
        match &leaf.status {
            LeafStatus::Chord(e1, e2) => {
                let (k1, s1, c1) = self.endpoint(&leaf.b, e1)?;
                let (k2, s2, c2) = self.endpoint(&leaf.b, e2)?;
                self.eseeds.push((
                    VertRef::Root(k1.clone()),
                    VertRef::Root(k2.clone()),
                    id,
                    EdgeKind::Branch,
                ));
                self.plans.push(BoxPlan {
                    box2: leaf.b.clone(),
                    kind: CertKind::Nice,
                    crossings: vec![(s1, c1), (s2, c2)],
                    role: RoleSeed::Chord(VertRef::Root(k1), VertRef::Root(k2)),
                });
            }
            LeafStatus::OnEdge(side) => {
                let (axis, at, lo, hi) = side_geom(&leaf.b, *side);
                self.registry
                    .entry((axis, at.clone()))
                    .or_default()
                    .push((lo.clone(), hi.clone(), id));
                // both end corners of the on-curve side
                let (p1, p2) = if axis == 1 {
                    ((lo.clone(), at.clone()), (hi.clone(), at.clone()))
                } else {
                    ((at.clone(), lo.clone()), (at.clone(), hi.clone()))
                };
                self.corner_key(&p1.0, &p1.1)?;
                self.corner_key(&p2.0, &p2.1)?;
                self.plans.push(BoxPlan {
                    box2: leaf.b.clone(),
                    kind: CertKind::Nice,
                    crossings: vec![(*side, CrossSeed::Span(Iv::new(lo, hi)))],
                    role: RoleSeed::None,
                });
            }
        }
        Ok(())
    }

    /// Segregating boxes for one band column: one box per fiber point, wall
    /// crossings bucketed into the point windows and stitched to the
    /// center. Returns the box ids in point order.
    fn add_sigma_column(&mut self, ci: usize, col: &ColBuild) -> Result<Vec<usize>> {
        let mut ids = Vec::with_capacity(col.order.len());
        for &pi in &col.order {
            let pt = &col.pts[pi];
            let id = self.plans.len();
            ids.push(id);
            self.plans.push(BoxPlan {
                box2: Box2::new(
                    Iv::new(col.win.0.clone(), col.win.1.clone()),
                    Iv::new(pt.win.0.clone(), pt.win.1.clone()),
                ),
                kind: CertKind::Segregating,
                crossings: Vec::new(),
                role: RoleSeed::Center(ci, pi),
            });
        }
        let walls = [
            (col.win.0.clone(), Side::Left, col.clip_l),
            (col.win.1.clone(), Side::Right, col.clip_r),
        ];
        for (wall_at, side, clipped) in walls {
            if clipped {
                continue;
            }
            let nroots = {
                let line = self.store.line(0, &wall_at);
                debug_assert!(!line.zero, "band wall restriction cannot vanish");
                line.roots.len()
            };
            let mut counts = vec![0u32; col.order.len()];
            'roots: for ri in 0..nroots {
                for (k, &pi) in col.order.iter().enumerate() {
                    let pt = &col.pts[pi];
                    let key = (0u8, wall_at.clone(), ri);
                    let lo_cmp = self.store.root_mut(&key).cmp_rational(&pt.win.0);
                    let hi_cmp = self.store.root_mut(&key).cmp_rational(&pt.win.1);
                    let pinned_lo = pt.bottom && lo_cmp == Ordering::Equal;
                    let pinned_hi = pt.top && hi_cmp == Ordering::Equal;
                    let inside =
                        lo_cmp == Ordering::Greater && hi_cmp == Ordering::Less;
                    if !(inside || pinned_lo || pinned_hi) {
                        continue;
                    }
                    counts[k] += 1;
                    if pinned_lo {
                        self.claim_exact(&key, pt.win.0.clone())?;
                    } else if pinned_hi {
                        self.claim_exact(&key, pt.win.1.clone())?;
                    } else {
                        self.claim_span(&key, pt.win.0.clone(), pt.win.1.clone());
                    }
                    self.eseeds.push((
                        VertRef::Center(ci, pi),
                        VertRef::Root(key.clone()),
                        ids[k],
                        EdgeKind::Branch,
                    ));
                    self.plans[ids[k]]
                        .crossings
                        .push((side, CrossSeed::Root(key)));
                    continue 'roots;
                }
                return Err(Error::internal(
                    "wall crossing outside every point window of its band",
                ));
            }
            for (k, &pi) in col.order.iter().enumerate() {
                let expected = if side == Side::Left { col.pts[pi].l } else { col.pts[pi].r };
                if counts[k] != expected {
                    return Err(Error::internal(
                        "stitch count disagrees with the certified branch number",
                    ));
                }
            }
        }
        Ok(ids)
    }

    /// Ladder for a vertical-line column: certified slices over every gap
    /// between consecutive point windows, chained through the segregating
    /// boxes. `sigma_ids` are the box ids from [`add_sigma_column`].
    fn add_line_ladders(
        &mut self,
        ci: usize,
        col: &mut ColBuild,
        sigma_ids: &[usize],
        eps: &Q,
    ) -> Result<()> {
        let two = qz(2);
        let mut delta: Option<(Q, Q)> = None;
        for k in 0..col.order.len().saturating_sub(1) {
            let (lo, hi) = {
                let a = &col.pts[col.order[k]];
                let b = &col.pts[col.order[k + 1]];
                (a.win.1.clone(), b.win.0.clone())
            };
            if lo == hi {
                let v = VertRef::Ladder(ci, lo.clone());
                self.eseeds.push((
                    VertRef::Center(ci, col.order[k]),
                    v.clone(),
                    sigma_ids[k],
                    EdgeKind::VerticalLine,
                ));
                self.eseeds.push((
                    v,
                    VertRef::Center(ci, col.order[k + 1]),
                    sigma_ids[k + 1],
                    EdgeKind::VerticalLine,
                ));
                continue;
            }
            // uniform steps of height ≤ eps/2, then adaptive certification
            let h = &hi - &lo;
            let m = (&h / &(eps / &two))
                .ceil()
                .to_integer()
                .to_usize()
                .unwrap_or(1)
                .max(1);
            let step = &h / &Q::from_integer(Z::from(m as i64));
            let mut slabs: Vec<(Iv, Q, Q)> = Vec::new();
            for j in 0..m {
                let a = &lo + &(&step * Q::from_integer(Z::from(j as i64)));
                let b = if j + 1 == m {
                    hi.clone()
                } else {
                    &lo + &(&step * Q::from_integer(Z::from((j + 1) as i64)))
                };
                certify_gap(&self.store.p, col, &mut delta, a, b, &mut slabs)?;
            }
            let mut prev = VertRef::Center(ci, col.order[k]);
            let mut prev_cert = sigma_ids[k];
            for (span, a, b) in slabs {
                let id = self.plans.len();
                self.plans.push(BoxPlan {
                    box2: Box2::new(span.clone(), Iv::new(a.clone(), b.clone())),
                    kind: CertKind::Line,
                    crossings: vec![
                        (Side::Bottom, CrossSeed::Span(span.clone())),
                        (Side::Top, CrossSeed::Span(span)),
                    ],
                    role: RoleSeed::Chord(
                        VertRef::Ladder(ci, a.clone()),
                        VertRef::Ladder(ci, b.clone()),
                    ),
                });
                let va = VertRef::Ladder(ci, a);
                let vb = VertRef::Ladder(ci, b);
                // consecutive slabs share their boundary vertex
                if prev != va {
                    self.eseeds.push((prev, va.clone(), prev_cert, EdgeKind::VerticalLine));
                }
                self.eseeds.push((va, vb.clone(), id, EdgeKind::VerticalLine));
                prev = vb;
                prev_cert = id;
            }
            // close the run into the next segregating box
            self.eseeds.push((
                prev,
                VertRef::Center(ci, col.order[k + 1]),
                sigma_ids[k + 1],
                EdgeKind::VerticalLine,
            ));
        }
        Ok(())
    }

    /// Rational points shared by two store lines must end with a single
    /// canonical key (through the vertical line) and an exact position, or
    /// chains from boxes at different subdivision depths would not join.
    fn normalize(&mut self) -> Result<BTreeMap<Key, Key>> {
        let mut remap: BTreeMap<Key, Key> = BTreeMap::new();
        let keys: Vec<Key> = self.claims.keys().cloned().collect();
        for key in keys {
            let (axis, ref at, _) = key;
            let iv = self.store.root(&key).iv().clone();
            let other = 1 - axis;
            let cands: Vec<(Q, bool)> = self
                .store
                .map
                .range((other, iv.lo().clone())..=(other, iv.hi().clone()))
                .map(|((_, cat), line)| (cat.clone(), line.zero))
                .collect();
            for (cat, zero) in cands {
                if self.store.root_mut(&key).cmp_rational(&cat) != Ordering::Equal {
                    continue;
                }
                if axis == 0 || zero {
                    // canonical already (or no roots to remap onto): the
                    // crossing is exactly rational — pin it
                    self.claim_exact(&key, cat)?;
                } else {
                    // horizontal-line root at a vertical store line: move
                    // the claim onto the vertical line
                    let tline = self.store.line(0, &cat);
                    let tidx = tline
                        .roots
                        .iter_mut()
                        .position(|r| r.cmp_rational(at) == Ordering::Equal)
                        .ok_or_else(|| {
                            Error::internal("shared rational point missing on vertical line")
                        })?;
                    let tkey = (0u8, cat.clone(), tidx);
                    let old = self.claims.remove(&key).expect("claimed key");
                    if let Some(v) = &old.exact {
                        if *v != cat {
                            return Err(Error::internal(
                                "one crossing root collapsed to two different values",
                            ));
                        }
                    }
                    debug_assert!(old
                        .spans
                        .iter()
                        .all(|(lo, hi)| *lo <= cat && cat <= *hi));
                    self.claim_exact(&tkey, at.clone())?;
                    remap.insert(key.clone(), tkey);
                }
                break;
            }
        }
        Ok(remap)
    }

    /// Collapse exact claims and refine the rest strictly inside every
    /// claiming span, so minted positions stay on the open box sides that
    /// reference them.
    fn refine_claims(&mut self) -> Result<()> {
        let keys: Vec<Key> = self.claims.keys().cloned().collect();
        for key in keys {
            let claim = &self.claims[&key];
            if let Some(v) = claim.exact.clone() {
                if self.store.root_mut(&key).cmp_rational(&v) != Ordering::Equal {
                    return Err(Error::internal("exact claim does not match its root"));
                }
                continue;
            }
            for (lo, hi) in claim.spans.clone() {
                let r = self.store.root_mut(&key);
                if r.cmp_rational(&lo) != Ordering::Greater
                    || r.cmp_rational(&hi) != Ordering::Less
                {
                    return Err(Error::internal(
                        "crossing root touches a claiming span endpoint after normalization",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Emit the deduplicated edges of every on-curve line: one edge between
    /// consecutive breakpoints, certified by the first box that claimed a
    /// span covering the piece.
    fn resolve_registry(&mut self) -> Result<()> {
        let registry = std::mem::take(&mut self.registry);
        for ((axis, at), entries) in &registry {
            let mut breakpoints: BTreeSet<Q> = BTreeSet::new();
            for (lo, hi, _) in entries {
                breakpoints.insert(lo.clone());
                breakpoints.insert(hi.clone());
            }
            let bps: Vec<Q> = breakpoints.into_iter().collect();
            for w in bps.windows(2) {
                let cert = entries
                    .iter()
                    .find(|(lo, hi, _)| *lo <= w[0] && w[1] <= *hi)
                    .map(|&(_, _, id)| id);
                let Some(cert) = cert else { continue };
                let mut kv = Vec::with_capacity(2);
                for bp in [&w[0], &w[1]] {
                    let (cx, cy) = if *axis == 1 {
                        (bp.clone(), at.clone())
                    } else {
                        (at.clone(), bp.clone())
                    };
                    kv.push(self.corner_key(&cx, &cy)?);
                }
                let b = kv.pop().expect("two breakpoints");
                let a = kv.pop().expect("two breakpoints");
                self.eseeds
                    .push((VertRef::Root(a), VertRef::Root(b), cert, EdgeKind::Branch));
            }
        }
        Ok(())
    }

    fn finish(mut self, cols: Option<&[ColBuild]>) -> Result<(MeshingGraph, MeshInternals)> {
        let remap = self.normalize()?;
        self.refine_claims()?;
        self.resolve_registry()?;

        let canon = |v: &VertRef| -> VertRef {
            match v {
                VertRef::Root(k) => VertRef::Root(remap.get(k).cloned().unwrap_or_else(|| k.clone())),
                other => other.clone(),
            }
        };

        // vertex set: everything referenced by an edge or a chord role
        let mut refs: BTreeSet<VertRef> = BTreeSet::new();
        for (a, b, _, _) in &self.eseeds {
            refs.insert(canon(a));
            refs.insert(canon(b));
        }
        for p in &self.plans {
            match &p.role {
                RoleSeed::Chord(a, b) => {
                    refs.insert(canon(a));
                    refs.insert(canon(b));
                }
                RoleSeed::Center(ci, pi) => {
                    refs.insert(VertRef::Center(*ci, *pi));
                }
                RoleSeed::None => {}
            }
        }

        let mut ids: BTreeMap<VertRef, usize> = BTreeMap::new();
        let mut points: Vec<(Q, Q)> = Vec::new();
        let mut seen: BTreeSet<(Q, Q)> = BTreeSet::new();
        for v in refs {
            let pos = match &v {
                VertRef::Root(key) => {
                    let r = self.store.root(key);
                    let val = r.rational_value().unwrap_or_else(|| r.iv().mid());
                    if key.0 == 0 {
                        (key.1.clone(), val)
                    } else {
                        (val, key.1.clone())
                    }
                }
                VertRef::Center(ci, pi) => {
                    let col = &cols.expect("band vertices need their columns")[*ci];
                    (col.x.iv().mid(), col.pts[*pi].tight.mid())
                }
                VertRef::Ladder(ci, h) => {
                    let col = &cols.expect("band vertices need their columns")[*ci];
                    (col.x.iv().mid(), h.clone())
                }
            };
            if !seen.insert(pos.clone()) {
                return Err(Error::internal("two mesh vertices minted the same position"));
            }
            ids.insert(v, points.len());
            points.push(pos);
        }

        // edges, deduplicated; the first certificate wins
        let mut emap: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut kinds_of: BTreeMap<(usize, usize), EdgeKind> = BTreeMap::new();
        for (a, b, cert, kind) in &self.eseeds {
            let ia = ids[&canon(a)];
            let ib = ids[&canon(b)];
            debug_assert_ne!(ia, ib, "self-loop mesh edge");
            let key = (ia.min(ib), ia.max(ib));
            emap.entry(key).or_insert(*cert);
            kinds_of.entry(key).or_insert(*kind);
        }
        let mut edges = Vec::with_capacity(emap.len());
        let mut kinds = Vec::with_capacity(emap.len());
        for ((a, b), cert) in &emap {
            edges.push(MeshEdge { a: *a, b: *b, cert: *cert });
            kinds.push(kinds_of[&(*a, *b)]);
        }

        // final boxes with resolved crossing intervals and roles
        let mut boxes = Vec::with_capacity(self.plans.len());
        let mut roles = Vec::with_capacity(self.plans.len());
        for p in &self.plans {
            let mut crossings = Vec::with_capacity(p.crossings.len());
            for (side, seed) in &p.crossings {
                let iv = match seed {
                    CrossSeed::At(v) => Iv::point(v.clone()),
                    CrossSeed::Span(iv) => iv.clone(),
                    CrossSeed::Root(k) => {
                        let ck = match &canon(&VertRef::Root(k.clone())) {
                            VertRef::Root(c) => c.clone(),
                            _ => unreachable!(),
                        };
                        let side_axis = if matches!(side, Side::Left | Side::Right) { 0 } else { 1 };
                        if ck.0 == side_axis {
                            self.store.root(&ck).iv().clone()
                        } else {
                            // remapped onto the perpendicular line: the
                            // crossing is exactly at that line's position
                            Iv::point(ck.1.clone())
                        }
                    }
                };
                crossings.push((*side, iv));
            }
            boxes.push(NiceBox { box2: p.box2.clone(), kind: p.kind, crossings });
            roles.push(match &p.role {
                RoleSeed::None => Role::Plain,
                RoleSeed::Center(ci, pi) => Role::Center(ids[&VertRef::Center(*ci, *pi)]),
                RoleSeed::Chord(a, b) => Role::Chord(ids[&canon(a)], ids[&canon(b)]),
            });
        }

        Ok((
            MeshingGraph { points, edges, boxes },
            MeshInternals { roles, kinds },
        ))
    }
}

/// Certify that the curve inside `span × [lo, hi]` is exactly the vertical
/// line, bisecting the height and shrinking the x-span as needed. For a
/// rational line the span is a symmetric inflation (clipped sides stay
/// put); for an irrational one it is the root enclosure itself.
fn certify_gap(
    gv: &Polynomial,
    col: &mut ColBuild,
    delta: &mut Option<(Q, Q)>,
    lo: Q,
    hi: Q,
    out: &mut Vec<(Iv, Q, Q)>,
) -> Result<()> {
    let two = qz(2);
    let rational = col.x.iv().is_point();
    if rational && delta.is_none() {
        let alpha = col.x.iv().lo().clone();
        *delta = Some((
            (&alpha - &col.win.0) / &two,
            (&col.win.1 - &alpha) / &two,
        ));
    }
    let mut stack = vec![(lo, hi, 0u32)];
    while let Some((a, b, depth)) = stack.pop() {
        let mut done = false;
        for _ in 0..SLAB_TRIES {
            let span = if rational {
                let (dl, dr) = delta.as_ref().expect("initialized above");
                let alpha = col.x.iv().lo();
                Iv::new(alpha - dl, alpha + dr)
            } else {
                col.x.iv().clone()
            };
            if !box_eval2(gv, &Box2::new(span.clone(), Iv::new(a.clone(), b.clone())))
                .contains_zero()
            {
                out.push((span, a.clone(), b.clone()));
                done = true;
                break;
            }
            if rational {
                let (dl, dr) = delta.as_mut().expect("initialized above");
                *dl = &*dl / &two;
                *dr = &*dr / &two;
            } else {
                col.x.refine();
            }
        }
        if done {
            continue;
        }
        if depth >= DEPTH_CAP {
            return Err(Error::SegregationFailed(format!(
                "vertical-line slice over [{a}, {b}] could not be certified curve-free",
            )));
        }
        let mid = (&a + &b) / &two;
        stack.push((mid.clone(), b, depth + 1));
        stack.push((a, mid, depth + 1));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Mesh the curve g = 0 by subdivision inside `regions`, which the caller
/// guarantees free of x-critical and y-extremal curve points. Boxes of the
/// list must be pairwise disjoint. Vertex identity is shared across region
/// boundaries through the exact crossing roots.
pub fn mpv2(g: &Polynomial, regions: &[Box2], eps: &Q) -> Result<MeshingGraph> {
    validate(g, eps, "curve meshing")?;
    let mut xspan: Option<Iv> = None;
    let mut yspan: Option<Iv> = None;
    for r in regions {
        assert!(r.x.lo() < r.x.hi() && r.y.lo() < r.y.hi(), "degenerate region box");
        xspan = Some(xspan.map_or(r.x.clone(), |s| s.hull(&r.x)));
        yspan = Some(yspan.map_or(r.y.clone(), |s| s.hull(&r.y)));
    }
    let Some((xspan, yspan)) = xspan.zip(yspan) else {
        return Ok(MeshingGraph { points: Vec::new(), edges: Vec::new(), boxes: Vec::new() });
    };
    let ctx = SubdivCtx {
        p: g,
        px: g.derivative(Var::X),
        py: g.derivative(Var::Y),
        eps: eps.clone(),
    };
    let parts: Vec<Result<Vec<Leaf>>> = regions
        .par_iter()
        .map(|r| {
            let mut v = Vec::new();
            subdivide(&ctx, r, 0, &mut v)?;
            Ok(v)
        })
        .collect();
    let mut asm = Assembler::new(g.clone(), xspan, yspan, eps);
    for p in parts {
        for leaf in p? {
            asm.add_leaf(&leaf)?;
        }
    }
    Ok(asm.finish(None)?.0)
}

/// ε-isotopic mesh of g = 0 within `b2`: every vertex lies within ε of the
/// curve, every edge's curve segment stays inside a certificate box of side
/// length ≤ ε, and the mesh graph is isotopic to the clipped curve.
pub fn curve_mesh(g: &Polynomial, b2: &Box2, eps: &Q) -> Result<MeshingGraph> {
    curve_mesh_hooked(g, b2, eps, None)
}

pub fn curve_mesh_hooked(
    g: &Polynomial,
    b2: &Box2,
    eps: &Q,
    hook: Option<&dyn FactorHook>,
) -> Result<MeshingGraph> {
    Ok(mesh_pipeline(g, b2, eps, hook)?.0)
}

/// Mesh plus a triangulation of all certificate boxes into cells whose
/// areas sum exactly to the total box area. Mesh vertices, box corners and
/// fan centroids become the graph points; mesh edges keep their curve kind.
pub fn extend_meshing_graph(g: &Polynomial, b2: &Box2, eps: &Q) -> Result<ExtendedTopologyGraph> {
    extend_meshing_graph_hooked(g, b2, eps, None)
}

pub fn extend_meshing_graph_hooked(
    g: &Polynomial,
    b2: &Box2,
    eps: &Q,
    hook: Option<&dyn FactorHook>,
) -> Result<ExtendedTopologyGraph> {
    let (mesh, internals) = mesh_pipeline(g, b2, eps, hook)?;
    let out = extend_mesh(&mesh, &internals);
    debug_assert!(out.cell_edges_closed());
    debug_assert!(out.all_points_in_cells());
    Ok(out)
}

fn validate(g: &Polynomial, eps: &Q, what: &'static str) -> Result<()> {
    assert!(*eps > qz(0), "eps must be positive");
    if g.is_zero() {
        return Err(Error::ZeroPolynomial(what));
    }
    if g.as_constant().is_none() {
        let prim = g.primitive_part_q();
        let sf = square_free_part(g);
        if sf != prim {
            let square = prim.div_exact(&sf).unwrap_or(prim);
            return Err(Error::NotSquareFree(square.to_string()));
        }
    }
    Ok(())
}

fn mesh_pipeline(
    g: &Polynomial,
    b2: &Box2,
    eps: &Q,
    hook: Option<&dyn FactorHook>,
) -> Result<(MeshingGraph, MeshInternals)> {
    validate(g, eps, "curve meshing")?;

    // augment the projection with horizontal-tangent x-values so regions
    // are also free of y-extremal points; y-only factors carry none and
    // would void the resultant, so they are stripped first
    let (_, gv0) = split_content(g, &[Var::Y]);
    let mut extra: Vec<Polynomial> = Vec::new();
    if gv0.as_constant().is_none() {
        let u = content_wrt(&gv0, &[Var::X]);
        let gu = gv0.div_exact(&u).expect("content divides");
        if gu.as_constant().is_none() {
            let r = resultant(&gu, &gu.derivative(Var::X), Var::Y);
            if r.is_zero() {
                return Err(Error::DegenerateProjection(
                    "horizontal-tangent resultant vanished identically".into(),
                ));
            }
            if r.as_constant().is_none() {
                extra.push(r);
            }
        }
    }

    let mut builder = Builder::start(g, b2, eps, hook, &extra, true)?;
    let gv = builder.gv.clone();

    // regions between consecutive band windows
    let nreal = builder.cols.len() / 2 + 1;
    let mut regions: Vec<Box2> = Vec::with_capacity(nreal.saturating_sub(1));
    for i in 0..nreal.saturating_sub(1) {
        let lo = builder.cols[2 * i].win.1.clone();
        let hi = builder.cols[2 * i + 2].win.0.clone();
        debug_assert!(lo < hi, "band windows must leave room between them");
        regions.push(Box2::new(Iv::new(lo, hi), builder.b2.y.clone()));
    }

    let ctx = SubdivCtx {
        p: &gv,
        px: gv.derivative(Var::X),
        py: gv.derivative(Var::Y),
        eps: eps.clone(),
    };
    let parts: Vec<Result<Vec<Leaf>>> = regions
        .par_iter()
        .map(|r| {
            let mut v = Vec::new();
            subdivide(&ctx, r, 0, &mut v)?;
            Ok(v)
        })
        .collect();

    let mut asm = Assembler::new(gv.clone(), builder.b2.x.clone(), builder.b2.y.clone(), eps);
    for p in parts {
        for leaf in p? {
            asm.add_leaf(&leaf)?;
        }
    }
    for ci in (0..builder.cols.len()).step_by(2) {
        let sigma_ids = asm.add_sigma_column(ci, &builder.cols[ci])?;
        if builder.cols[ci].vertical {
            asm.add_line_ladders(ci, &mut builder.cols[ci], &sigma_ids, eps)?;
        }
    }
    asm.finish(Some(&builder.cols))
}

// ---------------------------------------------------------------------------
// Extension: triangular cells tiling the certificate boxes
// ---------------------------------------------------------------------------

struct ExtBuild {
    points: Vec<GraphPoint>,
    coord_id: BTreeMap<(Q, Q), usize>,
    edges: BTreeMap<(usize, usize), EdgeKind>,
    cells: Vec<[usize; 3]>,
}

impl ExtBuild {
    /// Curve kinds placed by the mesh survive; everything else is auxiliary.
    fn add_edge(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b, "degenerate cell edge");
        self.edges.entry((a.min(b), a.max(b))).or_insert(EdgeKind::Auxiliary);
    }

    fn point_at(&mut self, x: Q, y: Q, kind: PointKind) -> usize {
        if let Some(&id) = self.coord_id.get(&(x.clone(), y.clone())) {
            return id;
        }
        let id = self.points.len();
        self.points.push(GraphPoint {
            enclosure: Box2::new(Iv::point(x.clone()), Iv::point(y.clone())),
            column: 0,
            kind,
            on_curve: false,
            left_branches: 0,
            right_branches: 0,
        });
        self.coord_id.insert((x, y), id);
        id
    }

    /// Triangulate the convex polygon `ring` (counter-clockwise) by fanning
    /// from `center`, or from a fresh centroid vertex when none is given.
    fn fan(&mut self, center: Option<usize>, ring: &[usize]) {
        if center.is_none() && ring.len() < 3 {
            // a 2-ring is a doubled edge, not a polygon
            return;
        }
        let c = match center {
            Some(c) => c,
            None => {
                let n = Q::from_integer(Z::from(ring.len() as i64));
                let mut sx = qz(0);
                let mut sy = qz(0);
                for &id in ring {
                    let (px, py) = self.points[id].position();
                    sx = sx + px;
                    sy = sy + py;
                }
                self.point_at(sx / &n, sy / &n, PointKind::WallMid)
            }
        };
        for i in 0..ring.len() {
            let u = ring[i];
            let v = ring[(i + 1) % ring.len()];
            if u == c || v == c {
                continue;
            }
            self.cells.push([c, u, v]);
            self.add_edge(c, u);
            self.add_edge(u, v);
            self.add_edge(c, v);
        }
    }
}

fn extend_mesh(mesh: &MeshingGraph, internals: &MeshInternals) -> ExtendedTopologyGraph {
    let mut ext = ExtBuild {
        points: Vec::new(),
        coord_id: BTreeMap::new(),
        edges: BTreeMap::new(),
        cells: Vec::new(),
    };
    let mut by_x: BTreeMap<Q, Vec<(Q, usize)>> = BTreeMap::new();
    let mut by_y: BTreeMap<Q, Vec<(Q, usize)>> = BTreeMap::new();
    for (x, y) in &mesh.points {
        let id = ext.points.len();
        ext.points.push(GraphPoint {
            enclosure: Box2::new(Iv::point(x.clone()), Iv::point(y.clone())),
            column: 0,
            kind: PointKind::Curve,
            on_curve: true,
            left_branches: 0,
            right_branches: 0,
        });
        let dup = ext.coord_id.insert((x.clone(), y.clone()), id);
        debug_assert!(dup.is_none(), "mesh vertices share a position");
        by_x.entry(x.clone()).or_default().push((y.clone(), id));
        by_y.entry(y.clone()).or_default().push((x.clone(), id));
    }
    for v in by_x.values_mut().chain(by_y.values_mut()) {
        v.sort();
    }
    for (e, k) in mesh.edges.iter().zip(&internals.kinds) {
        ext.edges.insert((e.a.min(e.b), e.a.max(e.b)), *k);
    }

    for (bi, nb) in mesh.boxes.iter().enumerate() {
        let b = &nb.box2;
        let (x0, x1) = (b.x.lo().clone(), b.x.hi().clone());
        let (y0, y1) = (b.y.lo().clone(), b.y.hi().clone());
        debug_assert!(x0 < x1 && y0 < y1, "degenerate certificate box");

        // boundary cycle, counter-clockwise from the bottom-left corner;
        // only mesh vertices subdivide the sides
        let empty: Vec<(Q, usize)> = Vec::new();
        let bottom = side_points(by_y.get(&y0).unwrap_or(&empty), &x0, &x1, false);
        let right = side_points(by_x.get(&x1).unwrap_or(&empty), &y0, &y1, false);
        let top = side_points(by_y.get(&y1).unwrap_or(&empty), &x0, &x1, true);
        let left = side_points(by_x.get(&x0).unwrap_or(&empty), &y0, &y1, true);
        let mut cycle: Vec<usize> = Vec::new();
        cycle.push(ext.point_at(x0.clone(), y0.clone(), PointKind::Ceiling));
        cycle.extend(bottom);
        cycle.push(ext.point_at(x1.clone(), y0.clone(), PointKind::Ceiling));
        cycle.extend(right);
        cycle.push(ext.point_at(x1.clone(), y1.clone(), PointKind::Ceiling));
        cycle.extend(top);
        cycle.push(ext.point_at(x0.clone(), y1.clone(), PointKind::Ceiling));
        cycle.extend(left);

        match &internals.roles[bi] {
            Role::Plain => ext.fan(None, &cycle),
            Role::Center(c) => ext.fan(Some(*c), &cycle),
            Role::Chord(a, b) => {
                let ia = cycle.iter().position(|&v| v == *a).expect("chord end on cycle");
                let ib = cycle.iter().position(|&v| v == *b).expect("chord end on cycle");
                let (ia, ib) = (ia.min(ib), ia.max(ib));
                let first: Vec<usize> = cycle[ia..=ib].to_vec();
                let mut second: Vec<usize> = cycle[ib..].to_vec();
                second.extend_from_slice(&cycle[..=ia]);
                ext.fan(None, &first);
                ext.fan(None, &second);
            }
        }
    }

    let edges: Vec<Edge> = ext
        .edges
        .into_iter()
        .map(|((a, b), kind)| Edge { a, b, kind })
        .collect();
    ExtendedTopologyGraph {
        graph: TopologyGraph { points: ext.points, columns: Vec::new(), edges },
        cells: ext.cells,
    }
}

/// Vertex ids strictly between `lo` and `hi` on one box side, in traversal
/// order (`rev` for the top and left sides of a counter-clockwise cycle).
fn side_points(v: &[(Q, usize)], lo: &Q, hi: &Q, rev: bool) -> Vec<usize> {
    let mut ids: Vec<usize> = v
        .iter()
        .filter(|(c, _)| c > lo && c < hi)
        .map(|&(_, id)| id)
        .collect();
    if rev {
        ids.reverse();
    }
    ids
}
