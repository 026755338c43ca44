use crate::error::Error;

use super::gcd::{gcd, split_content};
use super::poly::Polynomial;
use super::sqfree::square_free_decomposition;

/// Source of true irreducible factorizations. The pipeline never factors
/// into irreducibles on its own; a hook can close that gap when a caller
/// knows the factors (or wires up an external factorizer).
pub trait FactorHook: Sync {
    /// An irreducible factorization of `p` up to a rational constant, or
    /// `None` when this hook cannot handle `p`.
    fn factor(&self, p: &Polynomial) -> Option<Vec<(Polynomial, u32)>>;
}

/// Factorizations registered up front, matched by primitive part. Backs the
/// command-line `--factors` option.
#[derive(Default)]
pub struct SuppliedFactors {
    entries: Vec<(Polynomial, Vec<(Polynomial, u32)>)>,
}

impl SuppliedFactors {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register `factors` as the irreducible factorization of `product`.
    /// Fails unless the powers multiply back to the product up to a
    /// rational constant.
    pub fn register(
        &mut self,
        product: &Polynomial,
        factors: Vec<(Polynomial, u32)>,
    ) -> Result<(), Error> {
        let mut check = Polynomial::one();
        for (f, m) in &factors {
            if f.is_constant() {
                return Err(Error::internal("constant supplied as a factor"));
            }
            check = check * f.pow(*m);
        }
        if check.primitive_part_q() != product.primitive_part_q() {
            return Err(Error::DimensionMismatch(
                "supplied factors do not multiply to the polynomial".into(),
            ));
        }
        let normalized = factors
            .into_iter()
            .map(|(f, m)| (f.primitive_part_q(), m))
            .collect();
        self.entries.push((product.primitive_part_q(), normalized));
        Ok(())
    }
}

impl FactorHook for SuppliedFactors {
    fn factor(&self, p: &Polynomial) -> Option<Vec<(Polynomial, u32)>> {
        let key = p.primitive_part_q();
        self.entries
            .iter()
            .find(|(prod, _)| *prod == key)
            .map(|(_, fs)| fs.clone())
    }
}

/// A nonzero polynomial held as a product of pairwise-coprime, square-free,
/// integer-primitive factors with multiplicities. `partial` records whether
/// some factor might still be reducible (true unless a hook vouched for
/// irreducibility). The rational scale of the original polynomial is not
/// retained; zero sets are what the pipeline consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorList {
    factors: Vec<(Polynomial, u32)>,
    partial: bool,
}

impl FactorList {
    /// Factor `p` (nonzero) through the hook if one is given and it claims
    /// `p`, otherwise through the default partial splitter.
    pub fn factor(p: &Polynomial, hook: Option<&dyn FactorHook>) -> FactorList {
        assert!(!p.is_zero(), "cannot factor the zero polynomial");
        if p.is_constant() {
            return FactorList { factors: Vec::new(), partial: false };
        }
        if let Some(h) = hook {
            if let Some(fs) = h.factor(p) {
                let factors = normalize(fs);
                debug_assert!(pairwise_coprime(&factors));
                return FactorList { factors, partial: false };
            }
        }
        FactorList { factors: partial_split(p), partial: true }
    }

    /// Wrap factors already known to be pairwise coprime, square-free and
    /// primitive (debug-asserted).
    pub fn from_parts(factors: Vec<(Polynomial, u32)>, partial: bool) -> FactorList {
        let factors = normalize(factors);
        debug_assert!(pairwise_coprime(&factors));
        FactorList { factors, partial }
    }

    pub fn trivial() -> FactorList {
        FactorList { factors: Vec::new(), partial: false }
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Polynomial, u32)] {
        &self.factors
    }

    /// The distinct factors, multiplicities dropped.
    pub fn support(&self) -> impl Iterator<Item = &Polynomial> {
        self.factors.iter().map(|(f, _)| f)
    }

    /// Square-free product of the distinct factors.
    pub fn support_product(&self) -> Polynomial {
        let mut acc = Polynomial::one();
        for (f, _) in &self.factors {
            acc = acc * f;
        }
        acc
    }

    /// Full product with multiplicities.
    pub fn product(&self) -> Polynomial {
        let mut acc = Polynomial::one();
        for (f, m) in &self.factors {
            acc = acc * f.pow(*m);
        }
        acc
    }

    /// Product of two factor lists: shared refined factors add
    /// multiplicities, and everything is re-refined to stay coprime.
    pub fn mul(&self, other: &FactorList) -> FactorList {
        let mut items: Vec<(Polynomial, u32)> =
            self.factors.iter().chain(other.factors.iter()).cloned().collect();
        items = refine_items(items);
        FactorList { factors: items, partial: self.partial || other.partial }
    }

    /// Remove every factor shared with `other` (saturation of the product by
    /// the other product): each of my factors is repeatedly stripped of its
    /// gcd with the other support until the leftover is coprime to all of it.
    pub fn saturate_away(&self, other: &FactorList) -> FactorList {
        let mut mine = self.factors.clone();
        let mut out: Vec<(Polynomial, u32)> = Vec::new();
        'next: while let Some((f, m)) = mine.pop() {
            for (g, _) in &other.factors {
                let d = gcd(&f, g);
                if d.is_constant() {
                    continue;
                }
                if d == f {
                    continue 'next; // fully shared: drop
                }
                let rest = f.div_exact(&d).expect("gcd divides").primitive_part_q();
                mine.push((rest, m));
                continue 'next;
            }
            out.push((f, m));
        }
        FactorList { factors: normalize(out), partial: self.partial || other.partial }
    }
}

/// Default splitter: per-variable content/primitive splits and square-free
/// decomposition, then pairwise gcd refinement. The result is not a true
/// irreducible factorization, but the powers multiply back to the primitive
/// part of the input.
pub(crate) fn partial_split(p: &Polynomial) -> Vec<(Polynomial, u32)> {
    let mut items: Vec<(Polynomial, u32)> = Vec::new();
    let mut work: Vec<(Polynomial, u32)> = vec![(p.primitive_part_q(), 1)];
    'work: while let Some((f, m)) = work.pop() {
        if f.is_constant() {
            continue;
        }
        for v in f.vars_used() {
            let (c, pp) = split_content(&f, &[v]);
            if !c.is_constant() {
                work.push((c.primitive_part_q(), m));
                work.push((pp, m));
                continue 'work;
            }
        }
        for (g, k) in square_free_decomposition(&f) {
            items.push((g, k * m));
        }
    }
    let out = refine_items(items);
    debug_assert_eq!(
        out.iter()
            .fold(Polynomial::one(), |acc, (f, m)| acc * f.pow(*m))
            .primitive_part_q(),
        p.primitive_part_q()
    );
    out
}

/// Pairwise gcd refinement preserving the product with multiplicities:
/// a shared divisor d of f (mult a) and g (mult b) becomes entries
/// (d, a+b), (f/d, a), (g/d, b).
fn refine_items(mut items: Vec<(Polynomial, u32)>) -> Vec<(Polynomial, u32)> {
    let mut out: Vec<(Polynomial, u32)> = Vec::new();
    'outer: while let Some((f, m)) = items.pop() {
        if f.is_constant() {
            continue;
        }
        for idx in 0..out.len() {
            if out[idx].0 == f {
                out[idx].1 += m;
                continue 'outer;
            }
            let d = gcd(&f, &out[idx].0);
            if d.is_constant() {
                continue;
            }
            let (g, mg) = out.swap_remove(idx);
            let f_rest = f.div_exact(&d).expect("gcd divides").primitive_part_q();
            let g_rest = g.div_exact(&d).expect("gcd divides").primitive_part_q();
            items.push((d, m + mg));
            if !f_rest.is_constant() {
                items.push((f_rest, m));
            }
            if !g_rest.is_constant() {
                items.push((g_rest, mg));
            }
            continue 'outer;
        }
        out.push((f, m));
    }
    normalize(out)
}

fn normalize(factors: Vec<(Polynomial, u32)>) -> Vec<(Polynomial, u32)> {
    let mut out: Vec<(Polynomial, u32)> = factors
        .into_iter()
        .filter(|(f, m)| !f.is_constant() && *m > 0)
        .map(|(f, m)| (f.primitive_part_q(), m))
        .collect();
    out.sort();
    out
}

fn pairwise_coprime(factors: &[(Polynomial, u32)]) -> bool {
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if !gcd(&factors[i].0, &factors[j].0).is_constant() {
                return false;
            }
        }
    }
    true
}
