//! Exact interval arithmetic over ℚ and conservative range bounds for
//! polynomials on boxes. Everything here is sound in the certificate sense:
//! a returned range always contains the true image, and `excludes_zero`
//! never lies when it answers `true`.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::ratpoly::{Polynomial, Q, Var};

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iv {
    lo: Q,
    hi: Q,
}

impl Iv {
    pub fn new(lo: Q, hi: Q) -> Iv {
        assert!(lo <= hi, "interval endpoints out of order");
        Iv { lo, hi }
    }

    pub fn point(q: Q) -> Iv {
        Iv { lo: q.clone(), hi: q }
    }

    pub fn of_ints(lo: i64, hi: i64) -> Iv {
        Iv::new(Q::from_integer(lo.into()), Q::from_integer(hi.into()))
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Q) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_iv(&self, other: &Iv) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Iv) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Iv) -> Option<Iv> {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi <= other.hi { self.hi.clone() } else { other.hi.clone() };
        if lo <= hi {
            Some(Iv { lo, hi })
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Iv) -> Iv {
        Iv {
            lo: if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() },
            hi: if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() },
        }
    }

    pub fn split(&self) -> (Iv, Iv) {
        let m = self.mid();
        (Iv::new(self.lo.clone(), m.clone()), Iv::new(m, self.hi.clone()))
    }

    /// Widen both ends by `delta ≥ 0`.
    pub fn inflate(&self, delta: &Q) -> Iv {
        debug_assert!(!delta.is_negative());
        Iv::new(&self.lo - delta, &self.hi + delta)
    }

    pub fn neg(&self) -> Iv {
        Iv { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    /// Largest absolute value attained on the interval.
    pub fn abs_sup(&self) -> Q {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    /// Smallest absolute value attained; zero when the interval straddles 0.
    pub fn abs_inf(&self) -> Q {
        if self.contains_zero() {
            Q::zero()
        } else {
            let a = self.lo.abs();
            let b = self.hi.abs();
            if a <= b {
                a
            } else {
                b
            }
        }
    }

    pub fn add(&self, other: &Iv) -> Iv {
        Iv { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Iv) -> Iv {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Iv) -> Iv {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Iv { lo, hi }
    }

    pub fn scale(&self, c: &Q) -> Iv {
        if c.is_negative() {
            Iv { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            Iv { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    /// Interval power with the even-exponent tightening
    /// (`[-2,3]^2 = [0,9]`, not `[-6,9]`).
    pub fn pow(&self, e: u32) -> Iv {
        if e == 0 {
            return Iv::point(Q::one());
        }
        let pl = pow_q(&self.lo, e);
        let ph = pow_q(&self.hi, e);
        if e % 2 == 1 {
            Iv { lo: pl, hi: ph }
        } else if self.contains_zero() {
            Iv { lo: Q::zero(), hi: if pl >= ph { pl } else { ph } }
        } else {
            let (lo, hi) = if pl <= ph { (pl, ph) } else { (ph, pl) };
            Iv { lo, hi }
        }
    }
}

fn pow_q(b: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    let mut base = b.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Axis-aligned rational rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Box2 {
    pub x: Iv,
    pub y: Iv,
}

/// Axis-aligned rational box.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Box3 {
    pub x: Iv,
    pub y: Iv,
    pub z: Iv,
}

impl Box2 {
    pub fn new(x: Iv, y: Iv) -> Box2 {
        Box2 { x, y }
    }

    pub fn axis(&self, v: Var) -> &Iv {
        match v {
            Var::X => &self.x,
            Var::Y => &self.y,
            Var::Z => panic!("no z-axis on a rectangle"),
        }
    }

    pub fn max_width(&self) -> Q {
        let wx = self.x.width();
        let wy = self.y.width();
        if wx >= wy {
            wx
        } else {
            wy
        }
    }

    pub fn contains_point(&self, x: &Q, y: &Q) -> bool {
        self.x.contains(x) && self.y.contains(y)
    }

    /// Quadrant split at the midpoint: SW, SE, NW, NE.
    pub fn split4(&self) -> [Box2; 4] {
        let (xl, xr) = self.x.split();
        let (yl, yr) = self.y.split();
        [
            Box2::new(xl.clone(), yl.clone()),
            Box2::new(xr.clone(), yl),
            Box2::new(xl, yr.clone()),
            Box2::new(xr, yr),
        ]
    }

    /// Parse `x0:x1,y0:y1` with rational endpoints.
    pub fn parse(s: &str) -> Result<Box2, Error> {
        let ivs = parse_axes(s, 2)?;
        Ok(Box2::new(ivs[0].clone(), ivs[1].clone()))
    }
}

impl Box3 {
    pub fn new(x: Iv, y: Iv, z: Iv) -> Box3 {
        Box3 { x, y, z }
    }

    pub fn axis(&self, v: Var) -> &Iv {
        match v {
            Var::X => &self.x,
            Var::Y => &self.y,
            Var::Z => &self.z,
        }
    }

    pub fn max_width(&self) -> Q {
        let mut w = self.x.width();
        for iv in [&self.y, &self.z] {
            let wi = iv.width();
            if wi > w {
                w = wi;
            }
        }
        w
    }

    pub fn contains_point(&self, x: &Q, y: &Q, z: &Q) -> bool {
        self.x.contains(x) && self.y.contains(y) && self.z.contains(z)
    }

    /// Octant split at the midpoint; z fastest, then y, then x.
    pub fn split8(&self) -> [Box3; 8] {
        let (xl, xr) = self.x.split();
        let (yl, yr) = self.y.split();
        let (zl, zr) = self.z.split();
        let xs = [xl, xr];
        let ys = [yl, yr];
        let zs = [zl, zr];
        std::array::from_fn(|i| {
            Box3::new(
                xs[(i >> 2) & 1].clone(),
                ys[(i >> 1) & 1].clone(),
                zs[i & 1].clone(),
            )
        })
    }

    pub fn xy(&self) -> Box2 {
        Box2::new(self.x.clone(), self.y.clone())
    }

    /// Copy with one axis replaced.
    pub fn with_axis(&self, v: Var, iv: Iv) -> Box3 {
        let mut b = self.clone();
        match v {
            Var::X => b.x = iv,
            Var::Y => b.y = iv,
            Var::Z => b.z = iv,
        }
        b
    }

    /// Degenerate box around the origin; axes get widened individually.
    pub fn point_origin() -> Box3 {
        Box3::new(
            Iv::point(Q::zero()),
            Iv::point(Q::zero()),
            Iv::point(Q::zero()),
        )
    }

    /// Parse `x0:x1,y0:y1,z0:z1` with rational endpoints.
    pub fn parse(s: &str) -> Result<Box3, Error> {
        let ivs = parse_axes(s, 3)?;
        Ok(Box3::new(ivs[0].clone(), ivs[1].clone(), ivs[2].clone()))
    }
}

fn parse_axes(s: &str, n: usize) -> Result<Vec<Iv>, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(Error::parse(
            1,
            1,
            format!("expected {n} comma-separated ranges, got {}", parts.len()),
        ));
    }
    parts
        .iter()
        .map(|part| {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| Error::parse(1, 1, format!("range `{part}` needs lo:hi")))?;
            let lo = parse_rational(a.trim())?;
            let hi = parse_rational(b.trim())?;
            if lo > hi {
                return Err(Error::parse(1, 1, format!("empty range `{part}`")));
            }
            Ok(Iv::new(lo, hi))
        })
        .collect()
}

/// Parse `p/q` or `p` (optionally signed) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q, Error> {
    let bad = |why: &str| Error::parse(1, 1, format!("bad rational `{s}`: {why}"));
    let (num_str, den_str) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s.trim(), None),
    };
    let num: num_bigint::BigInt = num_str.parse().map_err(|_| bad("integer expected"))?;
    let den: num_bigint::BigInt = match den_str {
        Some(d) => d.parse().map_err(|_| bad("denominator expected"))?,
        None => One::one(),
    };
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Q::new(num, den))
}

/// Conservative range of `f` over the box: the variables are shifted so the
/// box sits at the origin, and the positive- and negative-coefficient parts
/// are evaluated at the far corner. Exact over ℚ, so `f(B) ⊆ box_eval(f, B)`
/// unconditionally.
pub fn box_eval(f: &Polynomial, b: &Box3) -> Iv {
    let mut g = f.clone();
    for v in Var::ALL {
        if g.deg(v) > 0 {
            g = g.shift_var(v, b.axis(v).lo());
        }
    }
    let w = [b.x.width(), b.y.width(), b.z.width()];
    let mut lo = Q::zero();
    let mut hi = Q::zero();
    for (m, c) in g.terms() {
        if m.iter().all(|e| *e == 0) {
            lo += c;
            hi += c;
            continue;
        }
        let mut mw = Q::one();
        for (i, e) in m.iter().enumerate() {
            if *e > 0 {
                mw *= pow_q(&w[i], *e as u32);
            }
        }
        let t = c * mw;
        if t.is_positive() {
            hi += t;
        } else {
            lo += t;
        }
    }
    Iv::new(lo, hi)
}

pub fn box_eval2(f: &Polynomial, b: &Box2) -> Iv {
    debug_assert_eq!(f.deg(Var::Z), 0);
    box_eval(f, &Box3::new(b.x.clone(), b.y.clone(), Iv::point(Q::zero())))
}

/// Termwise interval evaluation: sums the interval value of each monomial
/// directly, with no Taylor shift. Also sound; used in subdivision loops
/// where shifting every box would dominate the cost.
pub fn box_eval_fast(f: &Polynomial, b: &Box3) -> Iv {
    let axes = [&b.x, &b.y, &b.z];
    let mut acc = Iv::point(Q::zero());
    for (m, c) in f.terms() {
        let mut t = Iv::point(Q::one());
        for (i, e) in m.iter().enumerate() {
            if *e > 0 {
                t = t.mul(&axes[i].pow(*e as u32));
            }
        }
        acc = acc.add(&t.scale(c));
    }
    acc
}

pub fn box_eval_fast2(f: &Polynomial, b: &Box2) -> Iv {
    debug_assert_eq!(f.deg(Var::Z), 0);
    box_eval_fast(f, &Box3::new(b.x.clone(), b.y.clone(), Iv::point(Q::zero())))
}

/// `true` only if `f` provably has no zero on the box.
pub fn excludes_zero(f: &Polynomial, b: &Box3) -> bool {
    !box_eval_fast(f, b).contains_zero()
}

pub fn excludes_zero2(f: &Polynomial, b: &Box2) -> bool {
    !box_eval_fast2(f, b).contains_zero()
}
