use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = BigRational;
/// Exact integer scalar.
pub type Z = BigInt;

/// The three ambient variables, in the fixed global order x < y < z.
///
/// Every polynomial lives in ℚ[x, y, z]; lower-dimensional inputs simply do
/// not use the trailing variables. Elimination removes the highest variable
/// first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
            Var::Z => 'z',
        }
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }
}

/// Exponent vector; index = `Var::index()`. Compares lexicographically with
/// x strongest, which is the canonical term order used for display and for
/// the sign normalization of primitive parts.
pub type Mono = [u16; 3];

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Sparse polynomial over ℚ; invariant: no explicit zero coefficients.
/// The derived ordering (term-map lexicographic) is arbitrary but total,
/// used only to keep factor lists and outputs deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Mono, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert([0, 0, 0], c);
        }
        Polynomial { terms: t }
    }

    pub fn constant_int(c: i64) -> Self {
        Polynomial::constant(Q::from_integer(Z::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Polynomial::monomial(Q::one(), {
            let mut m = [0, 0, 0];
            m[v.index()] = 1;
            m
        })
    }

    pub fn monomial(c: Q, m: Mono) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        Polynomial { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&[0, 0, 0]))
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        if self.terms.is_empty() {
            return Some(Q::zero());
        }
        if self.is_constant() {
            return self.terms.get(&[0, 0, 0]).cloned();
        }
        None
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree in `v`; the zero polynomial has degree `None`.
    pub fn degree(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m[v.index()] as u32).max()
    }

    /// Degree in `v` as usize, treating zero and constants as degree 0.
    pub fn deg(&self, v: Var) -> usize {
        self.degree(v).unwrap_or(0) as usize
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| (m[0] + m[1] + m[2]) as usize)
            .max()
            .unwrap_or(0)
    }

    /// Variables that actually occur with positive degree, in global order.
    pub fn vars_used(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.deg(*v) > 0)
            .collect()
    }

    /// Coefficient of `v^k` as a polynomial in the remaining variables.
    pub fn coeff_wrt(&self, v: Var, k: u32) -> Polynomial {
        let i = v.index();
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[i] as u32 == k {
                let mut m2 = *m;
                m2[i] = 0;
                out.insert(m2, c.clone());
            }
        }
        Polynomial { terms: out }
    }

    /// All coefficients with respect to `v`, ascending exponent, length
    /// `deg(v) + 1`. The zero polynomial yields a single zero entry.
    pub fn coeffs_wrt(&self, v: Var) -> Vec<Polynomial> {
        let d = self.deg(v);
        (0..=d as u32).map(|k| self.coeff_wrt(v, k)).collect()
    }

    /// Rebuild from coefficients with respect to `v`, ascending exponent.
    pub fn from_coeffs_wrt(v: Var, coeffs: &[Polynomial]) -> Polynomial {
        let i = v.index();
        let mut out = Polynomial::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let mut shifted = BTreeMap::new();
            for (m, q) in &c.terms {
                debug_assert_eq!(m[i], 0, "coefficient must not involve the main variable");
                let mut m2 = *m;
                m2[i] = k as u16;
                shifted.insert(m2, q.clone());
            }
            out = out + Polynomial { terms: shifted };
        }
        out
    }

    /// Leading coefficient with respect to `v` (zero polynomial → zero).
    pub fn leading_coeff(&self, v: Var) -> Polynomial {
        match self.degree(v) {
            None => Polynomial::zero(),
            Some(d) => self.coeff_wrt(v, d),
        }
    }

    /// Drop all terms with exponent in `v` above `d` (fiber-degree truncation).
    pub fn truncate_wrt(&self, v: Var, d: u32) -> Polynomial {
        let i = v.index();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| (m[i] as u32) <= d)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Polynomial { terms }
    }

    pub fn derivative(&self, v: Var) -> Polynomial {
        let i = v.index();
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut m2 = *m;
                m2[i] -= 1;
                let c2 = c * Q::from_integer(Z::from(m[i]));
                out.insert(m2, c2);
            }
        }
        Polynomial { terms: out }
    }

    /// Substitute the rational value `val` for `v`.
    pub fn eval_var(&self, v: Var, val: &Q) -> Polynomial {
        // Horner over the coefficient list keeps the power computations shared.
        let coeffs = self.coeffs_wrt(v);
        let mut acc = Polynomial::zero();
        for c in coeffs.into_iter().rev() {
            acc = acc.scale(val) + c;
        }
        acc
        // (for a polynomial not involving v this returns it unchanged)
    }

    /// Evaluate at a full rational point (x, y, z).
    pub fn eval_point(&self, p: &[Q; 3]) -> Q {
        let mut r = self
            .eval_var(Var::Z, &p[2])
            .eval_var(Var::Y, &p[1])
            .eval_var(Var::X, &p[0]);
        debug_assert!(r.is_constant());
        r.terms.remove(&[0, 0, 0]).unwrap_or_else(Q::zero)
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, s: &Q) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    /// Substitute `v -> v + c` (Taylor shift).
    pub fn shift_var(&self, v: Var, c: &Q) -> Polynomial {
        if c.is_zero() || self.deg(v) == 0 {
            return self.clone();
        }
        let coeffs = self.coeffs_wrt(v);
        // Synthetic Horner: p(v + c) computed by repeated evaluation-style
        // accumulation, O(d^2) coefficient operations.
        let mut work: Vec<Polynomial> = coeffs;
        let n = work.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let add = work[j + 1].scale(c);
                work[j] = std::mem::take(&mut work[j]) + add;
            }
        }
        Polynomial::from_coeffs_wrt(v, &work)
    }

    /// Substitute `v -> c * v`.
    pub fn scale_var(&self, v: Var, c: &Q) -> Polynomial {
        let i = v.index();
        let mut out = BTreeMap::new();
        for (m, q) in &self.terms {
            let mut f = Q::one();
            for _ in 0..m[i] {
                f *= c;
            }
            let c2 = q * &f;
            if !c2.is_zero() {
                out.insert(*m, c2);
            }
        }
        Polynomial { terms: out }
    }

    /// Substitute another polynomial for `v`.
    pub fn subst_poly(&self, v: Var, rep: &Polynomial) -> Polynomial {
        let coeffs = self.coeffs_wrt(v);
        let mut acc = Polynomial::zero();
        for c in coeffs.into_iter().rev() {
            acc = &acc * rep + c;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// The canonical leading term under the global order (largest monomial).
    pub fn leading_term(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().next_back()
    }

    /// Integer normalization: returns `(s, p)` with `self = s * p`, `p`
    /// having coprime integer coefficients and positive canonical leading
    /// coefficient. The zero polynomial returns `(0, 0)`.
    pub fn primitive_normalized(&self) -> (Q, Polynomial) {
        if self.is_zero() {
            return (Q::zero(), Polynomial::zero());
        }
        let mut den = Z::one();
        for c in self.terms.values() {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let mut gcd_num = Z::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den / c.denom());
            gcd_num = num_integer::gcd(gcd_num, scaled);
        }
        debug_assert!(!gcd_num.is_zero());
        let mut scale = Q::new(gcd_num, den);
        let lead = self.leading_term().unwrap().1;
        if (lead / &scale).is_negative() {
            scale = -scale;
        }
        let inv = scale.recip();
        (scale, self.scale(&inv))
    }

    /// Primitive part only (see `primitive_normalized`).
    pub fn primitive_part_q(&self) -> Polynomial {
        self.primitive_normalized().1
    }

    /// Exact polynomial division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        // Divide in the highest variable d uses; leading coefficients are
        // divided recursively in the remaining variables.
        let v = *d.vars_used().last().unwrap();
        let dd = d.deg(v);
        let dlead = d.leading_coeff(v);
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while !rem.is_zero() {
            let rd = rem.deg(v);
            if rd < dd {
                return None;
            }
            let rlead = rem.leading_coeff(v);
            let c = rlead.div_exact(&dlead)?;
            let mut m = [0u16, 0, 0];
            m[v.index()] = (rd - dd) as u16;
            let t = Polynomial::monomial(Q::one(), m) * c;
            rem = rem - &t * d;
            quot = quot + t;
            // The leading terms cancel exactly, so deg_v strictly decreases
            // (or rem becomes zero); termination is guaranteed.
        }
        Some(quot)
    }

    /// Pseudo-division of `self` by `d` with respect to `v`:
    /// `lc(d)^k * self = q * d + r` with `deg_v r < deg_v d` and
    /// `k = max(deg_v self - deg_v d + 1, 0)`. Requires `deg_v d >= 1`.
    /// Returns `(k, q, r)`.
    pub fn pseudo_divrem(&self, d: &Polynomial, v: Var) -> (u32, Polynomial, Polynomial) {
        let dd = d.deg(v);
        assert!(dd >= 1, "pseudo-division requires positive degree divisor");
        let sd = self.deg(v);
        if self.is_zero() || sd < dd {
            return (0, Polynomial::zero(), self.clone());
        }
        let k = (sd - dd + 1) as u32;
        let lc = d.leading_coeff(v);
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        let mut steps = 0u32;
        while !rem.is_zero() && rem.deg(v) >= dd {
            let rd = rem.deg(v);
            let rlead = rem.leading_coeff(v);
            let mut m = [0u16, 0, 0];
            m[v.index()] = (rd - dd) as u16;
            let t = Polynomial::monomial(Q::one(), m) * rlead;
            quot = quot * &lc + &t;
            rem = rem * &lc - &t * d;
            steps += 1;
            debug_assert!(rem.is_zero() || rem.deg(v) < rd);
        }
        // Pad so that exactly lc^k * self = q*d + r.
        for _ in steps..k {
            quot = quot * &lc;
            rem = rem * &lc;
        }
        (k, quot, rem)
    }

    /// Largest absolute numerator/denominator bit size; a cheap complexity
    /// proxy used by heuristics in the resultant strategies.
    pub fn coeff_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

impl Default for Polynomial {
    fn default() -> Self {
        Polynomial::zero()
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        for (m, c) in rhs.terms {
            match self.terms.get_mut(&m) {
                Some(e) => {
                    *e += c;
                    if e.is_zero() {
                        self.terms.remove(&m);
                    }
                }
                None => {
                    self.terms.insert(m, c);
                }
            }
        }
        self
    }
}

impl Add<&Polynomial> for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: &Polynomial) -> Polynomial {
        for (m, c) in &rhs.terms {
            match self.terms.get_mut(m) {
                Some(e) => {
                    *e += c;
                    if e.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(*m, c.clone());
                }
            }
        }
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + rhs.neg()
    }
}

impl Sub<&Polynomial> for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: &Polynomial) -> Polynomial {
        for (m, c) in &rhs.terms {
            match self.terms.get_mut(m) {
                Some(e) => {
                    *e -= c;
                    if e.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(*m, -c.clone());
                }
            }
        }
        self
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out: BTreeMap<Mono, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = mono_mul(ma, mb);
                let c = ca * cb;
                match out.get_mut(&m) {
                    Some(e) => {
                        *e += c;
                        if e.is_zero() {
                            out.remove(&m);
                        }
                    }
                    None => {
                        out.insert(m, c);
                    }
                }
            }
        }
        Polynomial { terms: out }
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        (&self) * (&rhs)
    }
}

impl Mul<&Polynomial> for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        (&self) * rhs
    }
}

impl Mul<Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        self * (&rhs)
    }
}
