//! Real roots of a polynomial's fiber over an algebraic base point: the
//! zeros of `g(α, ·)` where the coordinates of α are real algebraic numbers
//! known by defining polynomials and shrinking rational boxes.
//!
//! The fiber polynomial may degenerate at the base (leading coefficients can
//! vanish, the fiber can have multiple roots even when `g` is square-free),
//! so isolation runs on a *square-free surrogate*: the effective truncation
//! of `g` is deflated by the subresultant `S_{j*}` of least index whose
//! principal coefficient survives at the base. The surrogate's fiber is the
//! square-free part of the true fiber, its leading coefficient provably does
//! not vanish, and its roots are isolated by interval sleeves whose clusters
//! are certified by derivative exclusion plus endpoint sign changes — all
//! signs evaluated exactly at the algebraic base.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::interval::{box_eval_fast, Box3, Iv};
use crate::ratpoly::{principal_subresultants, square_free_part, subresultant_poly, Polynomial, Q,
                     Var};
use crate::Result;

use super::alg::Alg1;
use super::uni::sign_at_rational;

/// An algebraic point that fibers can be taken over. Implemented by `Alg1`
/// (one coordinate) and `AlgPoint2` (two), which makes the same isolation
/// code serve plane curves over a base line and space surfaces over a base
/// plane.
pub trait BasePoint {
    /// Current rational enclosure; axes not constrained by the point are
    /// degenerate at 0 (polynomials passed in never use them).
    fn enclosure(&self) -> Box3;
    /// Shrink the enclosure (every coordinate).
    fn refine(&mut self);
    /// Complete zero test for a polynomial in the base variables.
    fn is_zero(&mut self, q: &Polynomial) -> bool;
    /// Exact sign of `q` at the point (−1, 0, +1); complete.
    fn sign_of(&mut self, q: &Polynomial) -> i32;
    /// If every coordinate is exactly rational: the substitution list.
    fn rational_subst(&self) -> Option<Vec<(Var, Q)>>;
}

impl BasePoint for Alg1 {
    fn enclosure(&self) -> Box3 {
        Box3::point_origin().with_axis(self.var(), self.iv().clone())
    }

    fn refine(&mut self) {
        Alg1::refine(self);
    }

    fn is_zero(&mut self, q: &Polynomial) -> bool {
        Alg1::is_zero(self, q)
    }

    fn sign_of(&mut self, q: &Polynomial) -> i32 {
        Alg1::sign_of(self, q)
    }

    fn rational_subst(&self) -> Option<Vec<(Var, Q)>> {
        self.rational_value().map(|r| vec![(self.var(), r)])
    }
}

#[derive(Debug, Clone)]
struct RootSlot {
    iv: Iv,
    /// Sign of the surrogate fiber at `iv.lo` (0 for exact point roots).
    sign_lo: i32,
}

/// The isolated real roots of one fiber, with the machinery to refine them
/// and to decide vanishing of other polynomials at (base, root) exactly.
#[derive(Debug, Clone)]
pub struct FiberRoots {
    fv: Var,
    sf: Polynomial,
    truncated: Polynomial,
    eff_deg: usize,
    roots: Vec<RootSlot>,
}

const SLEEVE_ROUNDS: u32 = 220;
const EXCLUSION_BUDGET: u32 = 6;

impl FiberRoots {
    /// Isolate the real roots of `g(base, ·)` with respect to `fv`.
    ///
    /// Fails with `ZeroLevelPolynomial` when the fiber is identically zero
    /// (every coefficient of `g` vanishes at the base).
    pub fn isolate<B: BasePoint>(g: &Polynomial, fv: Var, base: &mut B) -> Result<FiberRoots> {
        // Effective truncation: degree of the fiber at the base.
        let coeffs = g.coeffs_wrt(fv);
        let mut eff = None;
        for k in (0..coeffs.len()).rev() {
            if !base.is_zero(&coeffs[k]) {
                eff = Some(k);
                break;
            }
        }
        let eff = eff.ok_or(Error::ZeroLevelPolynomial(fv.index() + 1))?;
        let truncated = g.truncate_wrt(fv, eff as u32);
        if eff == 0 {
            return Ok(FiberRoots {
                fv,
                sf: truncated.clone(),
                truncated,
                eff_deg: 0,
                roots: Vec::new(),
            });
        }

        if let Some(subst) = base.rational_subst() {
            return Ok(Self::isolate_rational(truncated, fv, eff, &subst));
        }

        // Square-free surrogate via the least surviving subresultant.
        let sf = if eff == 1 {
            truncated.primitive_part_q()
        } else {
            let deriv = truncated.derivative(fv);
            let sres = principal_subresultants(&truncated, &deriv, fv);
            let mut jstar = None;
            for (j, s) in sres.iter().enumerate() {
                if !base.is_zero(s) {
                    jstar = Some(j);
                    break;
                }
            }
            match jstar {
                Some(0) => truncated.primitive_part_q(),
                Some(j) => {
                    let gamma = subresultant_poly(&truncated, &deriv, fv, j);
                    pseudo_quotient(&truncated, &gamma, fv)
                }
                // Every proper subresultant dies: the fiber is a single
                // root of full multiplicity; deflating by the derivative
                // leaves the linear factor.
                None => pseudo_quotient(&truncated, &deriv, fv),
            }
        };
        let sf_deriv = sf.derivative(fv);
        let lambda = sf.deg(fv);
        debug_assert!(lambda >= 1);

        // Root bound: Cauchy over interval enclosures of the coefficients.
        let lc = sf.leading_coeff(fv);
        while box_eval_fast(&lc, &base.enclosure()).contains_zero() {
            base.refine();
        }
        let denom = box_eval_fast(&lc, &base.enclosure()).abs_inf();
        let mut num = Q::zero();
        for c in sf.coeffs_wrt(fv).iter().take(lambda) {
            let s = box_eval_fast(c, &base.enclosure()).abs_sup();
            if s > num {
                num = s;
            }
        }
        let bound = Q::one() + num / denom;

        // Interval sleeve: survivors under box exclusion, grouped into
        // adjacency clusters, each certified (or emptied) per round.
        let mut cands: Vec<Iv> = vec![Iv::new(-bound.clone(), bound)];
        for _round in 0..SLEEVE_ROUNDS {
            let encl = base.enclosure();
            cands.retain(|c| {
                box_eval_fast(&sf, &encl.with_axis(fv, c.clone())).contains_zero()
            });
            if cands.is_empty() {
                return Ok(FiberRoots {
                    fv,
                    sf,
                    truncated,
                    eff_deg: eff,
                    roots: Vec::new(),
                });
            }
            let clusters = cluster_hulls(&cands);
            let mut slots: Vec<RootSlot> = Vec::new();
            let mut all_resolved = true;
            for hull in &clusters {
                let b = encl.with_axis(fv, hull.clone());
                if box_eval_fast(&sf_deriv, &b).contains_zero() {
                    all_resolved = false;
                    break;
                }
                // Monotone across the cluster: at most one root; the
                // endpoint signs decide whether it is exactly one or none.
                let slo = base.sign_of(&sf.eval_var(fv, hull.lo()));
                let shi = base.sign_of(&sf.eval_var(fv, hull.hi()));
                debug_assert!(slo != 0 && shi != 0, "cluster endpoints are non-roots");
                if slo * shi < 0 {
                    slots.push(RootSlot { iv: hull.clone(), sign_lo: slo });
                }
            }
            if all_resolved {
                return Ok(FiberRoots {
                    fv,
                    sf,
                    truncated,
                    eff_deg: eff,
                    roots: slots,
                });
            }
            // Split and tighten the base for the next round.
            cands = cands
                .iter()
                .flat_map(|c| {
                    let (l, r) = c.split();
                    [l, r]
                })
                .collect();
            base.refine();
        }
        Err(Error::internal(
            "fiber sleeve isolation exhausted its rounds (non-square-free surrogate?)",
        ))
    }

    /// All base coordinates rational: substitute and fall back to exact
    /// univariate isolation.
    fn isolate_rational(
        truncated: Polynomial,
        fv: Var,
        eff: usize,
        subst: &[(Var, Q)],
    ) -> FiberRoots {
        let mut uni = truncated.clone();
        for (v, r) in subst {
            uni = uni.eval_var(*v, r);
        }
        let sf = square_free_part(&uni);
        let roots = super::uni::isolate(&uni, fv)
            .into_iter()
            .map(|a| {
                let iv = a.iv().clone();
                let sign_lo = if iv.is_point() {
                    0
                } else {
                    sign_at_rational(&sf, fv, iv.lo())
                };
                debug_assert!(iv.is_point() || sign_lo != 0);
                RootSlot { iv, sign_lo }
            })
            .collect();
        FiberRoots {
            fv,
            sf,
            truncated,
            eff_deg: eff,
            roots,
        }
    }

    pub fn fiber_var(&self) -> Var {
        self.fv
    }

    /// Degree of the fiber at the base (after effective truncation).
    pub fn effective_degree(&self) -> usize {
        self.eff_deg
    }

    /// The effective truncation of the input at the base: same fiber, but a
    /// leading coefficient that provably does not vanish.
    pub fn truncated(&self) -> &Polynomial {
        &self.truncated
    }

    /// Square-free surrogate (its fiber is the square-free part of the true
    /// fiber).
    pub fn surrogate(&self) -> &Polynomial {
        &self.sf
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn root_iv(&self, idx: usize) -> &Iv {
        &self.roots[idx].iv
    }

    pub fn root_ivs(&self) -> impl Iterator<Item = &Iv> {
        self.roots.iter().map(|s| &s.iv)
    }

    /// One bisection step on root `idx` (collapses to a point if the
    /// midpoint is hit exactly).
    pub fn refine_root<B: BasePoint>(&mut self, base: &mut B, idx: usize) {
        let slot = &self.roots[idx];
        if slot.iv.is_point() {
            return;
        }
        let m = slot.iv.mid();
        let qm = self.sf.eval_var(self.fv, &m);
        let s = base.sign_of(&qm);
        let slot = &mut self.roots[idx];
        if s == 0 {
            slot.iv = Iv::point(m);
            slot.sign_lo = 0;
        } else if s == slot.sign_lo {
            slot.iv = Iv::new(m, slot.iv.hi().clone());
        } else {
            slot.iv = Iv::new(slot.iv.lo().clone(), m);
        }
    }

    pub fn refine_root_below<B: BasePoint>(&mut self, base: &mut B, idx: usize, eps: &Q) {
        while !self.roots[idx].iv.is_point() && &self.roots[idx].iv.width() > eps {
            self.refine_root(base, idx);
        }
    }

    /// Pin root `idx` to an exact rational value the caller has proven it
    /// equal to (e.g. via `is_zero_at` on `fv − value`).
    pub fn collapse_root(&mut self, idx: usize, value: Q) {
        debug_assert!(self.roots[idx].iv.contains(&value));
        self.roots[idx] = RootSlot { iv: Iv::point(value), sign_lo: 0 };
    }

    /// Complete zero test: does `q(base, β_idx)` vanish?
    ///
    /// Fast paths: a rational base evaluates through exact univariate
    /// algebra, and a short interval-exclusion budget settles clearly
    /// nonzero cases. The complete path intersects the fiber of `q` with the
    /// surrogate fiber through their subresultant chain at the base: the
    /// least surviving principal subresultant pins the gcd of the two
    /// fibers, whose roots are surrogate roots — so membership of β reduces
    /// to an endpoint sign change of that gcd representative.
    pub fn is_zero_at<B: BasePoint>(&mut self, base: &mut B, idx: usize, q: &Polynomial) -> bool {
        if q.is_zero() {
            return true;
        }
        if q.deg(self.fv) == 0 {
            return base.is_zero(q);
        }
        if let Some(subst) = base.rational_subst() {
            let mut uni = q.clone();
            for (v, r) in &subst {
                uni = uni.eval_var(*v, r);
            }
            if uni.is_zero() {
                return true;
            }
            let slot = &self.roots[idx];
            if let Some(pt) = rational_point(&slot.iv) {
                return sign_at_rational(&uni, self.fv, &pt) == 0;
            }
            let alg = Alg1::from_interval(self.sf.clone(), self.fv, slot.iv.clone());
            return alg.is_zero(&uni);
        }
        // Interval exclusion budget.
        for _ in 0..EXCLUSION_BUDGET {
            let b = base
                .enclosure()
                .with_axis(self.fv, self.roots[idx].iv.clone());
            if !box_eval_fast(q, &b).contains_zero() {
                return false;
            }
            base.refine();
            self.refine_root(base, idx);
        }
        // Symbolic completion.
        let coeffs = q.coeffs_wrt(self.fv);
        let mut eff = None;
        for k in (0..coeffs.len()).rev() {
            if !base.is_zero(&coeffs[k]) {
                eff = Some(k);
                break;
            }
        }
        let eff = match eff {
            None => return true, // q's fiber is identically zero
            Some(0) => return false, // nonzero constant fiber
            Some(k) => k,
        };
        let qhat = q.truncate_wrt(self.fv, eff as u32);
        let lambda = self.sf.deg(self.fv);
        let min_deg = lambda.min(eff);
        let sres = principal_subresultants(&self.sf, &qhat, self.fv);
        debug_assert_eq!(sres.len(), min_deg);
        let mut jss = None;
        for (j, s) in sres.iter().enumerate() {
            if !base.is_zero(s) {
                jss = Some(j);
                break;
            }
        }
        let d_poly = match jss {
            Some(0) => return false, // coprime fibers: q(base, ·) misses all roots
            Some(j) => subresultant_poly(&self.sf, &qhat, self.fv, j),
            None => {
                if lambda <= eff {
                    // gcd is the whole surrogate fiber: every root vanishes.
                    return true;
                }
                // gcd is q's whole fiber; membership of β decides.
                qhat
            }
        };
        // roots(d_poly at base) ⊆ surrogate roots, the slot endpoints are
        // surrogate non-roots, and the gcd fiber is square-free: a sign
        // change across the slot is exact membership.
        let slot_iv = self.roots[idx].iv.clone();
        if let Some(pt) = rational_point(&slot_iv) {
            return base.is_zero(&d_poly.eval_var(self.fv, &pt));
        }
        let slo = base.sign_of(&d_poly.eval_var(self.fv, slot_iv.lo()));
        let shi = base.sign_of(&d_poly.eval_var(self.fv, slot_iv.hi()));
        debug_assert!(slo != 0 && shi != 0, "slot endpoints must miss the gcd fiber");
        slo * shi < 0
    }

    /// Exact sign of `q(base, β_idx)`.
    pub fn sign_at<B: BasePoint>(&mut self, base: &mut B, idx: usize, q: &Polynomial) -> i32 {
        if self.is_zero_at(base, idx, q) {
            return 0;
        }
        loop {
            let b = base
                .enclosure()
                .with_axis(self.fv, self.roots[idx].iv.clone());
            let range = box_eval_fast(q, &b);
            if !range.contains_zero() {
                return if range.lo().is_positive() { 1 } else { -1 };
            }
            base.refine();
            self.refine_root(base, idx);
        }
    }
}

fn rational_point(iv: &Iv) -> Option<Q> {
    if iv.is_point() {
        Some(iv.lo().clone())
    } else {
        None
    }
}

/// Maximal hulls of runs of intervals that touch (shared endpoints).
fn cluster_hulls(sorted: &[Iv]) -> Vec<Iv> {
    let mut out: Vec<Iv> = Vec::new();
    for c in sorted {
        match out.last_mut() {
            Some(last) if last.hi() >= c.lo() => {
                *last = last.hull(c);
            }
            _ => out.push(c.clone()),
        }
    }
    out
}

fn pseudo_quotient(f: &Polynomial, d: &Polynomial, v: Var) -> Polynomial {
    let (_, quo, _) = f.pseudo_divrem(d, v);
    quo.primitive_part_q()
}

/// A point (α, β) with α algebraic on the base axis and β a fiber root over
/// it. Implements `BasePoint` itself, so a third coordinate's fibers can be
/// taken over it with the same machinery.
#[derive(Debug, Clone)]
pub struct AlgPoint2 {
    pub base: Alg1,
    pub fiber: FiberRoots,
    pub idx: usize,
}

impl AlgPoint2 {
    pub fn new(base: Alg1, fiber: FiberRoots, idx: usize) -> AlgPoint2 {
        AlgPoint2 { base, fiber, idx }
    }

    pub fn base_iv(&self) -> &Iv {
        self.base.iv()
    }

    pub fn fiber_iv(&self) -> &Iv {
        self.fiber.root_iv(self.idx)
    }

    pub fn refine_below(&mut self, eps: &Q) {
        while (!self.base.iv().is_point() && &self.base.iv().width() > eps)
            || (!self.fiber_iv().is_point() && &self.fiber_iv().width() > eps)
        {
            self.refine();
        }
    }
}

impl BasePoint for AlgPoint2 {
    fn enclosure(&self) -> Box3 {
        self.base
            .enclosure()
            .with_axis(self.fiber.fiber_var(), self.fiber.root_iv(self.idx).clone())
    }

    fn refine(&mut self) {
        self.base.refine();
        self.fiber.refine_root(&mut self.base, self.idx);
    }

    fn is_zero(&mut self, q: &Polynomial) -> bool {
        self.fiber.is_zero_at(&mut self.base, self.idx, q)
    }

    fn sign_of(&mut self, q: &Polynomial) -> i32 {
        self.fiber.sign_at(&mut self.base, self.idx, q)
    }

    fn rational_subst(&self) -> Option<Vec<(Var, Q)>> {
        let mut subst = self.base.rational_subst()?;
        let pt = rational_point(self.fiber.root_iv(self.idx))?;
        subst.push((self.fiber.fiber_var(), pt));
        Some(subst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootiso::isolate;
    use std::str::FromStr;

    fn p(s: &str) -> Polynomial {
        Polynomial::from_str(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn sqrt2() -> Alg1 {
        isolate(&p("x^2 - 2"), Var::X).pop().unwrap()
    }

    #[test]
    fn fiber_over_rational_base() {
        let mut base = Alg1::rational(Var::X, q(1, 4));
        let g = p("y^2 - x");
        let fiber = FiberRoots::isolate(&g, Var::Y, &mut base).unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(fiber.root_iv(0).contains(&q(-1, 2)));
        assert!(fiber.root_iv(1).contains(&q(1, 2)));
        let mut fiber = fiber;
        assert!(fiber.is_zero_at(&mut base, 1, &p("2*y - 1")));
        assert!(!fiber.is_zero_at(&mut base, 1, &p("y - x")));
        assert_eq!(fiber.sign_at(&mut base, 0, &p("y")), -1);
    }

    #[test]
    fn rational_fiber_roots_over_irrational_base() {
        // circle of radius √3 at x = √2: y = ±1 exactly
        let mut base = sqrt2();
        let g = p("16*x^2 + 16*y^2 - 48");
        let mut fiber = FiberRoots::isolate(&g, Var::Y, &mut base).unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(fiber.is_zero_at(&mut base, 1, &p("y - 1")));
        assert!(fiber.is_zero_at(&mut base, 0, &p("y + 1")));
        assert!(!fiber.is_zero_at(&mut base, 1, &p("y + 1")));
        assert_eq!(fiber.sign_at(&mut base, 1, &p("2*y - 1")), 1);
    }

    #[test]
    fn double_root_fiber_over_irrational_base() {
        // x² + y² − 2 at x = √2: the fiber is y², a double root at 0 that
        // the surrogate must deflate.
        let mut base = sqrt2();
        let g = p("x^2 + y^2 - 2");
        let mut fiber = FiberRoots::isolate(&g, Var::Y, &mut base).unwrap();
        assert_eq!(fiber.len(), 1);
        assert_eq!(fiber.effective_degree(), 2);
        assert!(fiber.root_iv(0).contains(&q(0, 1)));
        assert!(fiber.is_zero_at(&mut base, 0, &p("y")));
        assert_eq!(fiber.sign_at(&mut base, 0, &p("y - 1")), -1);
    }

    #[test]
    fn zero_test_through_subresultant_chain() {
        // Node curve y² − x²(x+1) at x = √2: β² = 2√2 + 2, so y² − 2x − 2
        // vanishes at (√2, β) while y² − 2x − 1 does not.
        let mut base = sqrt2();
        let g = p("y^2 - x^2*(x + 1)");
        let mut fiber = FiberRoots::isolate(&g, Var::Y, &mut base).unwrap();
        assert_eq!(fiber.len(), 2);
        for idx in 0..2 {
            assert!(fiber.is_zero_at(&mut base, idx, &p("y^2 - 2*x - 2")));
            assert!(!fiber.is_zero_at(&mut base, idx, &p("y^2 - 2*x - 1")));
        }
    }

    #[test]
    fn identically_zero_fiber_detected() {
        let mut base = Alg1::rational(Var::X, q(1, 1));
        let g = p("(x - 1) * y^2 + (x - 1)");
        let err = FiberRoots::isolate(&g, Var::Y, &mut base);
        assert!(matches!(err, Err(Error::ZeroLevelPolynomial(2))));
    }

    #[test]
    fn empty_fiber_is_fine() {
        let mut base = Alg1::rational(Var::X, q(2, 1));
        let g = p("y^2 + x"); // y² = −2: no real roots
        let fiber = FiberRoots::isolate(&g, Var::Y, &mut base).unwrap();
        assert!(fiber.is_empty());
        // and over an irrational base too
        let mut base = sqrt2();
        let fiber = FiberRoots::isolate(&g, Var::Y, &mut base).unwrap();
        assert!(fiber.is_empty());
    }

    #[test]
    fn pair_point_supports_third_level() {
        // Sphere x² + y² + z² = 3 over the pair (√2, β) with β the upper
        // root of x² + y² − 2 … β = 0, so z = ±1.
        let mut base = sqrt2();
        let fiber = FiberRoots::isolate(&p("x^2 + y^2 - 2"), Var::Y, &mut base).unwrap();
        assert_eq!(fiber.len(), 1);
        let mut pair = AlgPoint2::new(base, fiber, 0);
        let f = p("x^2 + y^2 + z^2 - 3");
        let mut zfiber = FiberRoots::isolate(&f, Var::Z, &mut pair).unwrap();
        assert_eq!(zfiber.len(), 2);
        assert!(zfiber.is_zero_at(&mut pair, 0, &p("z + 1")));
        assert!(zfiber.is_zero_at(&mut pair, 1, &p("z - 1")));
        assert!(!zfiber.is_zero_at(&mut pair, 1, &p("z + 1")));
        assert!(zfiber.is_zero_at(&mut pair, 1, &p("z^2 - 1")));
        assert_eq!(zfiber.sign_at(&mut pair, 1, &p("x + z")), 1);
    }

    #[test]
    fn refinement_keeps_roots_bracketed() {
        let mut base = sqrt2();
        let g = p("y^2 - x^2*(x + 1)");
        let mut fiber = FiberRoots::isolate(&g, Var::Y, &mut base).unwrap();
        let before = fiber.root_iv(1).clone();
        fiber.refine_root_below(&mut base, 1, &q(1, 1024));
        let after = fiber.root_iv(1);
        assert!(before.contains_iv(after));
        assert!(after.is_point() || after.width() <= q(1, 1024));
        assert!(fiber.is_zero_at(&mut base, 1, &p("y^2 - 2*x - 2")));
    }
}
