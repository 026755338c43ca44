//! Shared helpers for integration tests: an independent Sturm-chain root
//! counter used to cross-check the production isolator, written directly on
//! dense rational coefficient vectors so it shares no code with the library's
//! gcd/remainder routines.

#![allow(dead_code)]

use certmesh::ratpoly::{Polynomial, Q, Var};
use num_traits::{Signed, Zero};

/// Dense coefficients (ascending) of a univariate polynomial.
pub fn dense_coeffs(p: &Polynomial, v: Var) -> Vec<Q> {
    p.coeffs_wrt(v)
        .iter()
        .map(|c| c.as_constant().expect("univariate input"))
        .collect()
}

fn trim(mut c: Vec<Q>) -> Vec<Q> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

fn deriv(c: &[Q]) -> Vec<Q> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a * Q::from_integer(i.into()))
        .collect()
}

/// Remainder of a by b over the rationals (exact long division).
fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let f = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            let sub = &r[idx] - &f * bc;
            r[idx] = sub;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Canonical Sturm chain: p, p', then negated remainders until zero.
pub fn sturm_chain(p: &[Q]) -> Vec<Vec<Q>> {
    let p0 = trim(p.to_vec());
    assert!(!p0.is_empty(), "zero polynomial has no Sturm chain");
    let mut chain = vec![p0.clone()];
    if p0.len() > 1 {
        chain.push(deriv(&p0));
        loop {
            let n = chain.len();
            let r = rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.iter().map(|c| -c).collect());
        }
    }
    chain
}

fn eval(c: &[Q], t: &Q) -> Q {
    let mut acc = Q::zero();
    for a in c.iter().rev() {
        acc = acc * t + a;
    }
    acc
}

fn variations(chain: &[Vec<Q>], t: &Q) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for c in chain {
        let v = eval(c, t);
        let s = if v.is_zero() {
            continue;
        } else if v.is_positive() {
            1i8
        } else {
            -1i8
        };
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of the chain's polynomial in the open
/// interval (a, b). Requires p(a) ≠ 0 and p(b) ≠ 0.
pub fn count_roots_between(chain: &[Vec<Q>], a: &Q, b: &Q) -> usize {
    assert!(a < b);
    assert!(!eval(&chain[0], a).is_zero(), "left endpoint is a root");
    assert!(!eval(&chain[0], b).is_zero(), "right endpoint is a root");
    variations(chain, a) - variations(chain, b)
}

/// Bound M with all real roots in (-M, M), and M itself never a root.
pub fn root_bound(p: &[Q]) -> Q {
    let p = trim(p.to_vec());
    let lead = p.last().unwrap().abs();
    let mut m = Q::zero();
    for c in &p[..p.len() - 1] {
        let a = c.abs();
        if a > m {
            m = a;
        }
    }
    Q::from_integer(1.into()) + m / lead
}

/// Total number of distinct real roots.
pub fn count_roots(p: &[Q]) -> usize {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return 0;
    }
    let chain = sturm_chain(&p);
    let m = root_bound(&p);
    count_roots_between(&chain, &-m.clone(), &m)
}
