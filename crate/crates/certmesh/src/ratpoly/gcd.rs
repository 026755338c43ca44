use num_traits::{One, Zero};

use super::poly::{Polynomial, Q, Var, Z};

/// Greatest common divisor over ℚ[x, y, z], returned integer-primitive with
/// positive canonical leading coefficient. `gcd(p, 0) = primitive(p)`;
/// `gcd` of two nonzero constants is 1 (constants are units over ℚ).
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive_part_q();
    }
    if b.is_zero() {
        return a.primitive_part_q();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    let mut joint: Vec<Var> = Vec::new();
    for v in Var::ALL {
        if a.deg(v) > 0 || b.deg(v) > 0 {
            joint.push(v);
        }
    }
    debug_assert!(!joint.is_empty());
    if joint.len() == 1 {
        let v = joint[0];
        return gcd_univariate(a, b, v);
    }
    // Split contents with respect to the highest joint variable and recurse.
    let v = *joint.last().unwrap();
    let (ca, pa) = split_content(a, &[v]);
    let (cb, pb) = split_content(b, &[v]);
    let g_cont = gcd(&ca.primitive_part_q(), &cb.primitive_part_q());
    let g_pp = if pa.deg(v) == 0 || pb.deg(v) == 0 {
        Polynomial::one()
    } else {
        gcd_primitive_parts(&pa, &pb, v)
    };
    (g_cont * g_pp).primitive_part_q()
}

/// gcd of a slice of polynomials (zero entries ignored).
pub fn gcd_many(ps: &[Polynomial]) -> Polynomial {
    let mut acc = Polynomial::zero();
    for p in ps {
        if p.is_zero() {
            continue;
        }
        acc = gcd(&acc, p);
        if acc.is_constant() && !acc.is_zero() {
            return Polynomial::one();
        }
    }
    acc
}

/// Split `p = content * primitive` viewing `p` in the `main` variables:
/// `content` involves only the complementary variables (it is the gcd of the
/// coefficients of the `main`-monomials, carrying the rational scale), and
/// `primitive` is integer-primitive with positive canonical leading
/// coefficient and trivial content with respect to `main`.
pub fn split_content(p: &Polynomial, main: &[Var]) -> (Polynomial, Polynomial) {
    if p.is_zero() {
        return (Polynomial::zero(), Polynomial::zero());
    }
    let c = content_wrt(p, main);
    let quotient = p
        .div_exact(&c)
        .expect("content must divide the polynomial");
    let (s, prim) = quotient.primitive_normalized();
    (c.scale(&s), prim)
}

/// Primitive gcd of the coefficients of `p` with respect to the `main`
/// variables (a polynomial in the complementary variables).
pub fn content_wrt(p: &Polynomial, main: &[Var]) -> Polynomial {
    let coeffs = coefficients_wrt_set(p, main);
    gcd_many(&coeffs)
}

/// The distinct coefficient polynomials of `p` grouped by monomials in the
/// `main` variables; each returned polynomial involves only complementary
/// variables.
pub fn coefficients_wrt_set(p: &Polynomial, main: &[Var]) -> Vec<Polynomial> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<[u16; 3], Polynomial> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut key = [0u16; 3];
        let mut rest = *m;
        for v in main {
            key[v.index()] = m[v.index()];
            rest[v.index()] = 0;
        }
        let entry = groups.entry(key).or_default();
        *entry = std::mem::take(entry) + Polynomial::monomial(c.clone(), rest);
    }
    groups.into_values().collect()
}

/// Univariate gcd via an integer primitive remainder sequence.
fn gcd_univariate(a: &Polynomial, b: &Polynomial, v: Var) -> Polynomial {
    let mut ra = to_int_coeffs(a, v);
    let mut rb = to_int_coeffs(b, v);
    if ra.len() < rb.len() {
        std::mem::swap(&mut ra, &mut rb);
    }
    loop {
        if rb.iter().all(|c| c.is_zero()) {
            int_primitive(&mut ra);
            return from_int_coeffs(&ra, v).primitive_part_q();
        }
        let r = int_prem(&ra, &rb);
        ra = rb;
        rb = r;
        int_primitive(&mut rb);
    }
}

/// Dense ascending integer coefficients of `p` in `v` (denominators cleared).
pub(crate) fn to_int_coeffs(p: &Polynomial, v: Var) -> Vec<Z> {
    let coeffs = p.coeffs_wrt(v);
    let mut den = Z::one();
    for c in &coeffs {
        let q = c.as_constant().expect("univariate polynomial expected");
        den = num_integer::lcm(den, q.denom().clone());
    }
    coeffs
        .iter()
        .map(|c| {
            let q = c.as_constant().unwrap();
            q.numer() * (&den / q.denom())
        })
        .collect()
}

pub(crate) fn from_int_coeffs(cs: &[Z], v: Var) -> Polynomial {
    let mut out = Polynomial::zero();
    for (k, c) in cs.iter().enumerate() {
        if !c.is_zero() {
            let mut m = [0u16; 3];
            m[v.index()] = k as u16;
            out = out + Polynomial::monomial(Q::from_integer(c.clone()), m);
        }
    }
    out
}

pub(crate) fn int_deg(p: &[Z]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Integer pseudo-remainder of `a` by `b` (both dense ascending).
pub(crate) fn int_prem(a: &[Z], b: &[Z]) -> Vec<Z> {
    let da = match int_deg(a) {
        Some(d) => d,
        None => return Vec::new(),
    };
    let db = int_deg(b).expect("pseudo-remainder by zero");
    if da < db {
        return a.to_vec();
    }
    let lb = b[db].clone();
    let mut r = a.to_vec();
    for d in (db..=da).rev() {
        let lead = r[d].clone();
        for c in r.iter_mut().take(d + 1) {
            *c *= &lb;
        }
        if !lead.is_zero() {
            for j in 0..db {
                r[d - db + j] -= &lead * &b[j];
            }
        }
        r[d] = Z::zero();
    }
    r.truncate(db);
    r
}

/// Divide by the integer content in place; zero stays zero.
pub(crate) fn int_primitive(p: &mut [Z]) {
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

/// gcd of two polynomials that are primitive with respect to `v` and have
/// positive degree in `v`, by evaluation of one auxiliary variable, recursive
/// gcd of the images, interpolation, and trial-division verification.
fn gcd_primitive_parts(pa: &Polynomial, pb: &Polynomial, v: Var) -> Polynomial {
    // Auxiliary variable: the highest variable other than v appearing in
    // either argument. Primitive parts can collapse to univariate even when
    // the original inputs were not.
    let u = match Var::ALL
        .into_iter()
        .rev()
        .find(|w| *w != v && (pa.deg(*w) > 0 || pb.deg(*w) > 0))
    {
        Some(u) => u,
        None => return gcd_univariate(pa, pb, v),
    };

    let gamma = gcd(&pa.leading_coeff(v), &pb.leading_coeff(v));
    let degree_bound = pa.deg(u).min(pb.deg(u)) + gamma.deg(u);

    'restart: for attempt in 0u32.. {
        let mut nodes: Vec<Q> = Vec::new();
        let mut values: Vec<Polynomial> = Vec::new();
        let mut cur_deg: Option<usize> = None;
        // Candidate evaluation points 0, 1, -1, 2, -2, ... offset per attempt.
        let mut k: i64 = attempt as i64 * (degree_bound as i64 + 7);
        let mut tried = 0u32;
        while values.len() < degree_bound + 1 {
            let t = Q::from_integer(Z::from(next_point(&mut k)));
            tried += 1;
            if tried > 40 * (degree_bound as u32 + 2) {
                // Far more bad points than the theory allows: fall back to a
                // primitive PRS which is always correct.
                return gcd_prs(pa, pb, v);
            }
            if gamma.eval_var(u, &t).is_zero()
                || pa.leading_coeff(v).eval_var(u, &t).is_zero()
                || pb.leading_coeff(v).eval_var(u, &t).is_zero()
            {
                continue;
            }
            let ia = pa.eval_var(u, &t);
            let ib = pb.eval_var(u, &t);
            let h = gcd(&ia, &ib);
            let d = h.deg(v);
            if d == 0 {
                return Polynomial::one();
            }
            match cur_deg {
                Some(cd) if d > cd => continue, // unlucky point, skip
                Some(cd) if d < cd => {
                    // All previous points were unlucky; start over keeping t.
                    nodes.clear();
                    values.clear();
                    cur_deg = Some(d);
                }
                None => cur_deg = Some(d),
                _ => {}
            }
            // Impose leading coefficient gamma(t) on the image.
            let gt = gamma.eval_var(u, &t);
            let lc = h.leading_coeff(v);
            let scaled = match (h * gt).div_exact(&lc) {
                Some(s) => s,
                None => continue 'restart,
            };
            nodes.push(t);
            values.push(scaled);
        }
        // Newton interpolation in u with polynomial values.
        let interpolated = newton_interpolate(&nodes, &values, u);
        let candidate = interpolated.primitive_part_q();
        let (_, cand) = split_content(&candidate, &[v]);
        if pa.div_exact(&cand).is_some() && pb.div_exact(&cand).is_some() {
            return cand;
        }
        // Verification failed (bad luck across the whole batch): retry with
        // fresh points, eventually falling back to the PRS.
        if attempt >= 3 {
            return gcd_prs(pa, pb, v);
        }
    }
    unreachable!()
}

fn next_point(k: &mut i64) -> i64 {
    let t = *k;
    *k += 1;
    // 0, 1, -1, 2, -2, ...
    if t == 0 {
        0
    } else if t % 2 == 1 {
        (t + 1) / 2
    } else {
        -(t / 2)
    }
}

fn newton_interpolate(nodes: &[Q], values: &[Polynomial], u: Var) -> Polynomial {
    // Divided differences with polynomial values.
    let n = nodes.len();
    let mut table: Vec<Polynomial> = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = table[i].clone() - &table[i - 1];
            let den = &nodes[i] - &nodes[i - level];
            table[i] = num.scale(&den.recip());
        }
    }
    // Horner accumulation: result = d0 + (u - t0)(d1 + (u - t1)(...)).
    let mut acc = table[n - 1].clone();
    for i in (0..n - 1).rev() {
        let lin = Polynomial::var(u) - Polynomial::constant(nodes[i].clone());
        acc = acc * lin + &table[i];
    }
    acc
}

/// Primitive PRS gcd in `v`; always correct, potentially slow on large
/// inputs. Used as the fallback when interpolation is unlucky.
fn gcd_prs(pa: &Polynomial, pb: &Polynomial, v: Var) -> Polynomial {
    let mut a = pa.clone();
    let mut b = pb.clone();
    if a.deg(v) < b.deg(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            let (_, prim) = split_content(&a, &[v]);
            return prim;
        }
        if b.deg(v) == 0 {
            return Polynomial::one();
        }
        let (_, _, r) = a.pseudo_divrem(&b, v);
        a = b;
        b = if r.is_zero() { r } else { split_content(&r, &[v]).1 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn p(s: &str) -> Polynomial {
        Polynomial::from_str(s).unwrap()
    }

    #[test]
    fn univariate_gcd() {
        let a = p("x^2 - 1");
        let b = p("x^2 - 2*x + 1");
        assert_eq!(gcd(&a, &b), p("x - 1"));
        assert_eq!(gcd(&a, &p("x^2 + 1")), p("1"));
        assert_eq!(gcd(&p("6*x"), &p("4*x^2")), p("x"));
    }

    #[test]
    fn multivariate_gcd() {
        let a = p("(x + y)^2 * (x - y)");
        let b = p("(x + y) * (x^2 + y^2)");
        assert_eq!(gcd(&a, &b), p("x + y"));
        let c = p("x^2*y - y");
        let d = p("x*y^2 + y^2");
        assert_eq!(gcd(&c, &d), p("x*y + y"));
    }

    #[test]
    fn trivariate_gcd() {
        let g = p("x*z - y + 1");
        let a = p("(x*z - y + 1)*(z^2 + x)");
        let b = p("(x*z - y + 1)*(y*z - 2)");
        assert_eq!(gcd(&a, &b), g);
    }

    #[test]
    fn gcd_with_zero_and_constants() {
        let a = p("2*x^2 - 2");
        assert_eq!(gcd(&a, &Polynomial::zero()), p("x^2 - 1"));
        assert_eq!(gcd(&a, &p("5")), p("1"));
        assert!(gcd(&Polynomial::zero(), &Polynomial::zero()).is_zero());
    }

    #[test]
    fn split_content_example() {
        // Splitting x*y*(16x^2+16y^2-49) viewed in y: the content is the
        // pure-x factor, the primitive part keeps the rest.
        let g = p("x*y*(16*x^2 + 16*y^2 - 49)");
        let (content, prim) = split_content(&g, &[Var::Y]);
        assert_eq!(content, p("x"));
        assert_eq!(prim, p("y*(16*x^2 + 16*y^2 - 49)"));
        assert_eq!(content * prim, g);
    }

    #[test]
    fn split_content_carries_scale() {
        let g = p("2*x*y");
        let (content, prim) = split_content(&g, &[Var::Y]);
        assert_eq!(content.clone() * prim.clone(), g);
        assert_eq!(prim, p("y"));
        assert_eq!(content, p("2*x"));
    }

    #[test]
    fn gcd_many_works() {
        let list = [p("x^2*y"), p("x*y^2"), p("x*y*z")];
        assert_eq!(gcd_many(&list), p("x*y"));
    }
}
