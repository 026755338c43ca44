//! Exact univariate real-root isolation (Descartes / interval bisection on
//! integer coefficient vectors) and rational-point sign evaluation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::interval::Iv;
use crate::ratpoly::{square_free_part, Polynomial, Q, Var, Z};

use super::alg::Alg1;

/// Sign of `q(t)` for univariate `q` in `v`: −1, 0, or +1.
pub fn sign_at_rational(q: &Polynomial, v: Var, t: &Q) -> i32 {
    let val = q.eval_var(v, t);
    match val.as_constant() {
        Some(c) => {
            if c.is_zero() {
                0
            } else if c.is_positive() {
                1
            } else {
                -1
            }
        }
        None => panic!("sign_at_rational needs a univariate polynomial"),
    }
}

/// Isolate all distinct real roots of `q` (univariate in `v`, nonzero).
/// Multiplicities are ignored: the square-free part is isolated. Roots come
/// back sorted, in pairwise disjoint closed boxes; a point box is an exact
/// rational root, every other box has endpoints of opposite nonzero sign for
/// the stored refiner polynomial.
pub fn isolate(q: &Polynomial, v: Var) -> Vec<Alg1> {
    assert!(!q.is_zero(), "cannot isolate roots of the zero polynomial");
    let sf = square_free_part(q);
    if sf.is_constant() {
        return Vec::new();
    }
    let mut coeffs = to_int(&sf, v);
    reduce_content(&mut coeffs);

    // Strict Cauchy-style bound as a power of two: all real roots lie in
    // (-bound, bound).
    let bound = root_bound_pow2(&coeffs);

    // Transform so roots in (-bound, bound) map to (0, 1).
    let two_b = Q::from_integer(2.into()) * &bound;
    let shifted = sf.shift_var(v, &-bound.clone()).scale_var(v, &two_b);
    let mut p01 = to_int(&shifted, v);
    reduce_content(&mut p01);

    let mut points: Vec<Q> = Vec::new();
    let mut intervals: Vec<(Q, Q)> = Vec::new();
    descartes_rec(
        &mut p01,
        -bound.clone(),
        bound.clone(),
        &mut points,
        &mut intervals,
        0,
    );

    // Refiner: the square-free polynomial with the split-point roots removed,
    // so refiner endpoints of every open interval are guaranteed nonzero.
    let mut refiner = sf.clone();
    for r in &points {
        let lin = linear_for(v, r);
        refiner = refiner
            .div_exact(&lin)
            .expect("extracted rational root divides");
    }
    let refiner = refiner.primitive_part_q();

    let mut roots: Vec<Alg1> = Vec::new();
    for r in points {
        roots.push(Alg1::rational(v, r));
    }
    for (lo, hi) in intervals {
        roots.push(Alg1::from_interval(refiner.clone(), v, Iv::new(lo, hi)));
    }
    super::alg::separate(&mut roots);
    roots
}

/// Roots of `q` that lie in the closed window `[w.lo, w.hi]`, decided
/// exactly (a root equal to an endpoint is kept, as a point when rational).
pub fn isolate_in(q: &Polynomial, v: Var, window: &Iv) -> Vec<Alg1> {
    let mut all = isolate(q, v);
    let mut out = Vec::new();
    for mut r in all.drain(..) {
        use std::cmp::Ordering::*;
        let above_lo = match r.cmp_rational(window.lo()) {
            Less => false,
            Equal | Greater => true,
        };
        if !above_lo {
            continue;
        }
        match r.cmp_rational(window.hi()) {
            Greater => {}
            Equal | Less => out.push(r),
        }
    }
    out
}

pub(crate) fn linear_for(v: Var, r: &Q) -> Polynomial {
    (Polynomial::var(v).scale(&Q::from_integer(r.denom().clone()))
        - Polynomial::constant(Q::from_integer(r.numer().clone())))
    .primitive_part_q()
}

/// Dense ascending integer coefficients (denominators cleared).
fn to_int(p: &Polynomial, v: Var) -> Vec<Z> {
    crate::ratpoly::to_int_coeffs_of(p, v)
}

fn reduce_content(p: &mut Vec<Z>) {
    let mut g = Z::zero();
    for c in p.iter() {
        g = num_integer::gcd(g, c.clone());
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for c in p.iter_mut() {
        *c = &*c / &g;
    }
}

/// Power-of-two `B` with every real root strictly inside `(-B, B)`.
fn root_bound_pow2(coeffs: &[Z]) -> Q {
    let n = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
    let lead = coeffs[n].magnitude().clone();
    let max_rest = coeffs[..n]
        .iter()
        .map(|c| c.magnitude().clone())
        .max()
        .unwrap_or_default();
    // Cauchy: |root| < 1 + max|a_i| / |a_n|
    let mut b = Q::one();
    let target = Q::one()
        + Q::new(BigInt::from(max_rest), BigInt::from(lead));
    let two = Q::from_integer(2.into());
    while b < target {
        b *= &two;
    }
    b
}

/// Descartes' sign-variation bound on the number of roots of `p` in (0, 1):
/// variations of `(x+1)^n p(1/(x+1))`.
fn descartes_bound(p: &[Z]) -> usize {
    let mut rev: Vec<Z> = p.iter().rev().cloned().collect();
    taylor_shift_1(&mut rev);
    sign_variations(&rev)
}

fn sign_variations(p: &[Z]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for c in p {
        let s = if c.is_zero() {
            0
        } else if c.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// In-place substitution `x ← x + 1` (ascending coefficients).
fn taylor_shift_1(p: &mut [Z]) {
    let n = p.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let (a, b) = p.split_at_mut(j + 1);
            a[j] += &b[0];
        }
    }
}

/// `2^n p(x/2)` in place: roots in (0,1) map from roots in (0,2)… used to
/// pass to the left half before shifting for the right half.
fn scale_half(p: &[Z]) -> Vec<Z> {
    let n = p.len() - 1;
    p.iter()
        .enumerate()
        .map(|(i, c)| c << (n - i))
        .collect()
}

/// Exact synthetic division by `(x - 1)`; the caller guarantees 1 is a root.
fn deflate_root_one(p: &[Z]) -> Vec<Z> {
    // p(x) = (x-1) q(x): q via Horner from the top.
    let n = p.len() - 1;
    let mut q = vec![Z::zero(); n];
    let mut carry = Z::zero();
    for k in (1..=n).rev() {
        carry += &p[k];
        q[k - 1] = carry.clone();
    }
    debug_assert_eq!(&carry + &p[0], Z::zero(), "1 must be a root");
    q
}

/// Recursive Descartes bisection of `p` on (0,1) mapped to `(lo, hi)`.
/// Invariant: `p(0) ≠ 0` and `p(1) ≠ 0`, `p` square-free.
fn descartes_rec(
    p: &mut Vec<Z>,
    lo: Q,
    hi: Q,
    points: &mut Vec<Q>,
    intervals: &mut Vec<(Q, Q)>,
    depth: u32,
) {
    assert!(depth < 512, "root isolation failed to terminate");
    reduce_content(p);
    match descartes_bound(p) {
        0 => return,
        1 => {
            intervals.push((lo, hi));
            return;
        }
        _ => {}
    }
    let mid = (&lo + &hi) / Q::from_integer(2.into());
    let mut left = scale_half(p);
    let mut right = left.clone();
    taylor_shift_1(&mut right);
    // right[0] = left(1) = 2^n p(1/2)
    if right[0].is_zero() {
        points.push(mid.clone());
        right.remove(0);
        left = deflate_root_one(&left);
    }
    descartes_rec(&mut left, lo, mid.clone(), points, intervals, depth + 1);
    descartes_rec(&mut right, mid, hi, points, intervals, depth + 1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn p(s: &str) -> Polynomial {
        Polynomial::from_str(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn rational_roots_become_points_or_tight_boxes() {
        let roots = isolate(&p("x^2 - 1"), Var::X);
        assert_eq!(roots.len(), 2);
        for (r, expect) in roots.iter().zip([q(-1, 1), q(1, 1)]) {
            assert!(r.iv().contains(&expect));
        }
        // x = 0 is always a point root (0 is a bisection point)
        let roots = isolate(&p("x^3 - x"), Var::X);
        assert_eq!(roots.len(), 3);
        assert!(roots[1].iv().is_point());
        assert_eq!(roots[1].rational_value(), Some(q(0, 1)));
    }

    #[test]
    fn irrational_roots_isolated_disjointly() {
        let roots = isolate(&p("x^2 - 2"), Var::X);
        assert_eq!(roots.len(), 2);
        assert!(roots[0].iv().hi() < roots[1].iv().lo());
        // √2 ≈ 1.414…
        assert!(roots[1].iv().contains(&q(141, 100)) || {
            // at least: interval inside (1, 2)
            roots[1].iv().lo() > &q(1, 1) && roots[1].iv().hi() < &q(2, 1)
        });
    }

    #[test]
    fn multiplicities_are_ignored() {
        let roots = isolate(&p("(x - 1)^3 * (x + 2)^2"), Var::X);
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate(&p("x^2 + 1"), Var::X).is_empty());
        assert!(isolate(&p("5"), Var::X).is_empty());
    }

    #[test]
    fn dense_root_cluster_separates() {
        // roots at 0, 1/512, 2/512 — forces deep bisection
        let f = p("x * (512*x - 1) * (256*x - 1)");
        let roots = isolate(&f, Var::X);
        assert_eq!(roots.len(), 3);
        for w in roots.windows(2) {
            assert!(w[0].iv().hi() < w[1].iv().lo() || {
                // allow exact points to touch nothing
                w[0].iv().is_point() || w[1].iv().is_point()
            });
            assert!(!w[0].iv().intersects(w[1].iv()));
        }
    }

    #[test]
    fn window_filter_keeps_boundary_roots() {
        let f = p("x * (x - 1) * (x - 2)");
        let inside = isolate_in(&f, Var::X, &Iv::of_ints(0, 1));
        assert_eq!(inside.len(), 2); // 0 and 1, both on the boundary
        let inside = isolate_in(&f, Var::X, &Iv::new(q(1, 2), q(5, 2)));
        assert_eq!(inside.len(), 2); // 1 and 2
        let inside = isolate_in(&f, Var::X, &Iv::new(q(1, 4), q(3, 4)));
        assert!(inside.is_empty());
    }

    #[test]
    fn wilkinson_style_integer_roots() {
        // (x-1)(x-2)…(x-10): all roots found, all exactly rational or tightly
        // isolated around integers.
        let mut f = Polynomial::one();
        for k in 1..=10i64 {
            f = f * (Polynomial::var(Var::X) - Polynomial::constant_int(k));
        }
        let roots = isolate(&f, Var::X);
        assert_eq!(roots.len(), 10);
        for (i, r) in roots.iter().enumerate() {
            assert!(r.iv().contains(&q(i as i64 + 1, 1)));
        }
    }
}
