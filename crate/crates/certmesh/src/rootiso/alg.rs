//! Real algebraic numbers as (square-free defining polynomial, isolating
//! interval) with complete symbolic zero tests and exact sign evaluation.

use std::cmp::Ordering;

use num_traits::Signed;

use crate::interval::Iv;
use crate::ratpoly::{gcd, Polynomial, Q, Var};

use super::uni::sign_at_rational;

/// A real algebraic number α.
///
/// Invariants:
/// * `factor` is univariate in `v`, square-free, and α is its only root in
///   the closed box `iv`;
/// * if `iv` is a point, α is that rational number (and `factor(α) = 0`);
/// * otherwise the endpoints are *not* roots of `factor` and
///   `factor(lo)·factor(hi) < 0`.
///
/// Refinement only ever shrinks `iv`, so sharing an `Alg1` across longer
/// computations is sound: every answer remains valid.
#[derive(Debug, Clone)]
pub struct Alg1 {
    factor: Polynomial,
    v: Var,
    iv: Iv,
}

impl Alg1 {
    /// An exact rational number `r` (defining polynomial `den·v − num`).
    pub fn rational(v: Var, r: Q) -> Alg1 {
        let factor = super::uni::linear_for(v, &r);
        Alg1 { factor, v, iv: Iv::point(r) }
    }

    /// Wrap an isolating interval produced by the isolator. Debug-checks the
    /// sign-change invariant.
    pub fn from_interval(factor: Polynomial, v: Var, iv: Iv) -> Alg1 {
        debug_assert!(!iv.is_point());
        debug_assert!(
            sign_at_rational(&factor, v, iv.lo()) * sign_at_rational(&factor, v, iv.hi()) < 0,
            "isolating interval must change sign"
        );
        Alg1 { factor, v, iv }
    }

    pub fn var(&self) -> Var {
        self.v
    }

    pub fn iv(&self) -> &Iv {
        &self.iv
    }

    pub fn factor(&self) -> &Polynomial {
        &self.factor
    }

    pub fn rational_value(&self) -> Option<Q> {
        if self.iv.is_point() {
            Some(self.iv.lo().clone())
        } else {
            None
        }
    }

    /// One bisection step (no-op for exact rationals). If the midpoint turns
    /// out to be the root, the interval collapses to a point.
    pub fn refine(&mut self) {
        if self.iv.is_point() {
            return;
        }
        let m = self.iv.mid();
        let sm = sign_at_rational(&self.factor, self.v, &m);
        if sm == 0 {
            self.iv = Iv::point(m);
            return;
        }
        let slo = sign_at_rational(&self.factor, self.v, self.iv.lo());
        if sm == slo {
            self.iv = Iv::new(m, self.iv.hi().clone());
        } else {
            self.iv = Iv::new(self.iv.lo().clone(), m);
        }
    }

    pub fn refine_below_width(&mut self, eps: &Q) {
        while !self.iv.is_point() && &self.iv.width() > eps {
            self.refine();
        }
    }

    /// Complete zero test: does the univariate polynomial `q` vanish at α?
    ///
    /// Reduces to a parity argument on `g = gcd(factor, q)`: the roots of `g`
    /// are roots of `factor`, so the isolating interval contains at most one
    /// of them and the endpoints are never roots of `g`; a sign change of `g`
    /// across the interval is therefore equivalent to `q(α) = 0`.
    pub fn is_zero(&self, q: &Polynomial) -> bool {
        debug_assert!(q.vars_used().iter().all(|w| *w == self.v));
        if q.is_zero() {
            return true;
        }
        if q.is_constant() {
            return false;
        }
        if let Some(r) = self.rational_value() {
            return sign_at_rational(q, self.v, &r) == 0;
        }
        let g = gcd(&self.factor, q);
        if g.is_constant() {
            return false;
        }
        let slo = sign_at_rational(&g, self.v, self.iv.lo());
        let shi = sign_at_rational(&g, self.v, self.iv.hi());
        debug_assert!(slo != 0 && shi != 0, "endpoints must not be roots of g");
        slo * shi < 0
    }

    /// Exact sign of `q(α)`; refines the interval until interval evaluation
    /// is sign-definite when nonzero.
    pub fn sign_of(&mut self, q: &Polynomial) -> i32 {
        if let Some(r) = self.rational_value() {
            return sign_at_rational(q, self.v, &r);
        }
        if self.is_zero(q) {
            return 0;
        }
        // q(α) ≠ 0 is now certain, so interval evaluation becomes
        // sign-definite after finitely many refinements.
        loop {
            let b = crate::interval::Box3::point_origin().with_axis(self.v, self.iv.clone());
            let range = crate::interval::box_eval_fast(q, &b);
            if !range.contains_zero() {
                return if range.lo().is_positive() { 1 } else { -1 };
            }
            self.refine();
            if let Some(r) = self.rational_value() {
                return sign_at_rational(q, self.v, &r);
            }
        }
    }

    /// Exact comparison of α with a rational number.
    pub fn cmp_rational(&mut self, t: &Q) -> Ordering {
        if let Some(r) = self.rational_value() {
            return r.cmp(t);
        }
        if self.iv.contains(t) && sign_at_rational(&self.factor, self.v, t) == 0 {
            // t is a factor-root inside the isolating interval: t = α.
            self.iv = Iv::point(t.clone());
            return Ordering::Equal;
        }
        loop {
            if self.iv.lo() > t {
                return Ordering::Greater;
            }
            if self.iv.hi() < t {
                return Ordering::Less;
            }
            self.refine();
            if let Some(r) = self.rational_value() {
                return r.cmp(t);
            }
        }
    }

    /// Exact comparison with another algebraic number; equality is decided
    /// symbolically (as a shared root of the gcd of the two defining
    /// polynomials), so distinct-but-close numbers terminate too.
    pub fn cmp_alg(&mut self, other: &mut Alg1) -> Ordering {
        debug_assert_eq!(self.v, other.v);
        if let Some(r) = other.rational_value() {
            return self.cmp_rational(&r);
        }
        if let Some(r) = self.rational_value() {
            return other.cmp_rational(&r).reverse();
        }
        let g = gcd(&self.factor, &other.factor);
        if !g.is_constant() && self.is_zero(&g) && other.is_zero(&g) {
            // Both are g-roots. Each isolating interval contains exactly one
            // g-root (g divides the respective defining polynomial), and its
            // index in the sorted g-root list decides equality *and* order.
            let mut roots = super::uni::isolate(&g, self.v);
            let ia = locate_in(&mut roots, &self.iv);
            let ib = locate_in(&mut roots, &other.iv);
            return ia.cmp(&ib);
        }
        // Provably distinct numbers: refinement separates them.
        loop {
            if self.iv.hi() < other.iv.lo() {
                return Ordering::Less;
            }
            if other.iv.hi() < self.iv.lo() {
                return Ordering::Greater;
            }
            self.refine();
            other.refine();
            if let (Some(a), Some(b)) = (self.rational_value(), other.rational_value()) {
                return a.cmp(&b);
            }
        }
    }
}

/// Index of the unique root in `roots` that lies strictly inside `iv`.
/// The interval endpoints are never roots of the polynomial the roots come
/// from, so the strict comparisons terminate.
fn locate_in(roots: &mut [Alg1], iv: &Iv) -> usize {
    for (i, r) in roots.iter_mut().enumerate() {
        if r.cmp_rational(iv.lo()) == Ordering::Greater
            && r.cmp_rational(iv.hi()) == Ordering::Less
        {
            return i;
        }
    }
    panic!("isolating interval contains no root of its own divisor");
}

/// Sort the roots and refine until all closed boxes are pairwise disjoint.
/// Requires genuinely distinct numbers (e.g. roots of square-free or
/// pairwise-coprime polynomials), otherwise this would not terminate —
/// violations are caught by a step cap.
pub fn separate(roots: &mut Vec<Alg1>) {
    // Initial sort by midpoint to get near-order; exact order emerges as
    // intervals separate.
    let mut guard = 0u32;
    loop {
        guard += 1;
        assert!(guard < 4096, "root separation failed: duplicate roots?");
        roots.sort_by(|a, b| (a.iv().lo() + a.iv().hi()).cmp(&(b.iv().lo() + b.iv().hi())));
        let mut clean = true;
        for i in 0..roots.len().saturating_sub(1) {
            let overlapping = roots[i].iv().intersects(roots[i + 1].iv());
            if overlapping {
                clean = false;
                roots[i].refine();
                roots[i + 1].refine();
            }
        }
        if clean {
            return;
        }
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
    fn zero_test_is_complete() {
        let a = sqrt2(); // +√2
        assert!(a.is_zero(&p("x^2 - 2")));
        assert!(a.is_zero(&p("x^4 - 4")));
        assert!(a.is_zero(&p("(x^2 - 2) * (x - 5)")));
        assert!(!a.is_zero(&p("x^2 - 3")));
        assert!(!a.is_zero(&p("x - 1")));
        // x^2 + 2 shares no real root
        assert!(!a.is_zero(&p("x^2 + 2")));
        // a product that shares a factor with the minimal polynomial vanishes
        assert!(a.is_zero(&p("x^3 + 2*x^2 - 2*x - 4"))); // (x+2)(x^2-2)
        // but one whose every factor misses +√2 does not
        assert!(!a.is_zero(&p("(x + 2) * (x^2 - 3)")));
    }

    #[test]
    fn zero_test_sees_through_conjugates() {
        let a = sqrt2();
        assert!(a.is_zero(&p("(x + 2) * (x^2 - 2)")));
    }

    #[test]
    fn sign_evaluation() {
        let mut a = sqrt2();
        assert_eq!(a.sign_of(&p("x - 1")), 1); // √2 > 1
        assert_eq!(a.sign_of(&p("x - 2")), -1); // √2 < 2
        assert_eq!(a.sign_of(&p("x^2 - 2")), 0);
        assert_eq!(a.sign_of(&p("x^3 - 2*x + 1")), 1); // 2√2 − 2√2 + 1 > 0… exact: 2.83−2.83+1
    }

    #[test]
    fn rational_comparison() {
        let mut a = sqrt2();
        assert_eq!(a.cmp_rational(&q(1, 1)), Ordering::Greater);
        assert_eq!(a.cmp_rational(&q(3, 2)), Ordering::Less);
        assert_eq!(a.cmp_rational(&q(141421, 100000)), Ordering::Greater);
        let mut r = Alg1::rational(Var::X, q(7, 5));
        assert_eq!(r.cmp_rational(&q(7, 5)), Ordering::Equal);
    }

    #[test]
    fn algebraic_comparison_and_equality() {
        let mut a = sqrt2();
        let mut b = isolate(&p("x^2 - 3"), Var::X).pop().unwrap(); // +√3
        assert_eq!(a.cmp_alg(&mut b), Ordering::Less);
        // same number through a different defining polynomial
        let mut c = isolate(&p("x^4 - 4"), Var::X).pop().unwrap(); // +√2 again
        let mut a2 = sqrt2();
        assert_eq!(a2.cmp_alg(&mut c), Ordering::Equal);
    }

    #[test]
    fn refinement_tightens_and_preserves() {
        let mut a = sqrt2();
        let before = a.iv().clone();
        a.refine_below_width(&q(1, 1 << 20));
        assert!(a.iv().width() <= q(1, 1 << 20));
        assert!(before.contains_iv(a.iv()));
        assert!(a.is_zero(&p("x^2 - 2")));
    }

    #[test]
    fn separation_of_close_roots() {
        // √2 via x^2-2 and 1.41 exactly: distinct, must separate.
        let mut roots = vec![sqrt2(), Alg1::rational(Var::X, q(141, 100))];
        separate(&mut roots);
        assert!(!roots[0].iv().intersects(roots[1].iv()));
        assert!(roots[0].iv().hi() < roots[1].iv().lo());
    }
}
