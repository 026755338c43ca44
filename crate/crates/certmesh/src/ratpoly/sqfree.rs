use super::gcd::{gcd, split_content};
use super::poly::{Polynomial, Var};

/// Product of the distinct irreducible factors of `p`, integer-primitive with
/// positive canonical leading coefficient. Constants map to 1, zero to zero.
pub fn square_free_part(p: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return Polynomial::zero();
    }
    if p.is_constant() {
        return Polynomial::one();
    }
    let v = *p.vars_used().last().unwrap();
    let (c, pp) = split_content(p, &[v]);
    // Every irreducible factor of the primitive part involves v, so the
    // gcd with the v-derivative removes exactly the repeated ones.
    let g = gcd(&pp, &pp.derivative(v));
    let reduced = pp
        .div_exact(&g)
        .expect("gcd divides the primitive part");
    (square_free_part(&c) * reduced).primitive_part_q()
}

/// Square-free decomposition `p ~ ∏ fᵢ^{mᵢ}` with pairwise coprime,
/// square-free, integer-primitive `fᵢ`. The product of the returned powers
/// equals the primitive part of `p`.
pub fn square_free_decomposition(p: &Polynomial) -> Vec<(Polynomial, u32)> {
    let mut out = Vec::new();
    decompose_into(p, 1, &mut out);
    out.sort();
    merge_equal(out)
}

fn decompose_into(p: &Polynomial, outer_mult: u32, out: &mut Vec<(Polynomial, u32)>) {
    if p.is_zero() || p.is_constant() {
        return;
    }
    let v = *p.vars_used().last().unwrap();
    let (c, pp) = split_content(p, &[v]);
    decompose_into(&c, outer_mult, out);
    for (f, m) in yun(&pp, v) {
        out.push((f, m * outer_mult));
    }
}

/// Yun's algorithm on a polynomial primitive with respect to `v` (so all of
/// its irreducible factors have positive degree in `v`). Intermediate values
/// are kept exact — the pair (b, d) stays a consistent rational multiple of
/// the textbook quantities, which the gcds do not see.
fn yun(f: &Polynomial, v: Var) -> Vec<(Polynomial, u32)> {
    let mut out = Vec::new();
    let fp = f.derivative(v);
    let g = gcd(f, &fp);
    let mut b = f.div_exact(&g).expect("gcd divides");
    let mut d = fp.div_exact(&g).expect("gcd divides") - b.derivative(v);
    let mut i = 1u32;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("multiplicity factor divides b");
        let c = d.div_exact(&a).expect("multiplicity factor divides d");
        d = c - b.derivative(v);
        i += 1;
        assert!(i < 1_000, "square-free decomposition failed to terminate");
    }
    out
}

fn merge_equal(sorted: Vec<(Polynomial, u32)>) -> Vec<(Polynomial, u32)> {
    let mut out: Vec<(Polynomial, u32)> = Vec::with_capacity(sorted.len());
    for (f, m) in sorted {
        if let Some(last) = out.last_mut() {
            if last.0 == f {
                last.1 += m;
                continue;
            }
        }
        out.push((f, m));
    }
    out
}

/// Refine a list of polynomials into a pairwise-coprime, square-free list
/// with the same union of zero sets. Constants disappear; output is sorted
/// canonically.
pub fn coprime_refine(input: &[Polynomial]) -> Vec<Polynomial> {
    let mut stack: Vec<Polynomial> = input
        .iter()
        .filter(|p| !p.is_zero() && !p.is_constant())
        .map(square_free_part)
        .collect();
    let mut out: Vec<Polynomial> = Vec::new();
    'outer: while let Some(f) = stack.pop() {
        if f.is_constant() {
            continue;
        }
        for idx in 0..out.len() {
            let d = gcd(&f, &out[idx]);
            if d.is_constant() {
                continue;
            }
            if d == out[idx] && d == f {
                // duplicate factor
                continue 'outer;
            }
            let g = out.swap_remove(idx);
            let f_rest = f.div_exact(&d).expect("gcd divides");
            let g_rest = g.div_exact(&d).expect("gcd divides");
            stack.push(d);
            if !f_rest.is_constant() {
                stack.push(f_rest.primitive_part_q());
            }
            if !g_rest.is_constant() {
                stack.push(g_rest.primitive_part_q());
            }
            continue 'outer;
        }
        out.push(f);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn p(s: &str) -> Polynomial {
        Polynomial::from_str(s).unwrap()
    }

    #[test]
    fn square_free_part_strips_multiplicity() {
        assert_eq!(square_free_part(&p("(x - 1)^2 * (x + 2)")), p("(x - 1)*(x + 2)"));
        assert_eq!(square_free_part(&p("(x + y)^3 * (x - y)")), p("x^2 - y^2"));
        // canonical sign: positive coefficient on the lex-largest monomial
        assert_eq!(square_free_part(&p("x^2 * (y^2 - x)")), p("x*(x - y^2)"));
        assert_eq!(square_free_part(&p("7")), p("1"));
    }

    #[test]
    fn decomposition_lists_multiplicities() {
        let f = p("(x - 1) * (x - 2)^2 * (x - 3)^3");
        let mut d = square_free_decomposition(&f);
        d.sort_by_key(|(_, m)| *m);
        assert_eq!(d, vec![(p("x - 1"), 1), (p("x - 2"), 2), (p("x - 3"), 3)]);
    }

    #[test]
    fn decomposition_product_reconstructs_input() {
        let f = p("x^3 * (y - 1)^2 * (x^2 + y^2 - 1)");
        let d = square_free_decomposition(&f);
        let mut prod = Polynomial::one();
        for (fi, m) in &d {
            prod = prod * fi.pow(*m);
        }
        assert_eq!(prod.primitive_part_q(), f.primitive_part_q());
    }

    #[test]
    fn refinement_splits_shared_factors() {
        let refined = coprime_refine(&[p("x^2 - 1"), p("x - 1")]);
        assert_eq!(refined, vec![p("x - 1"), p("x + 1")]);
        let mut refined = coprime_refine(&[p("x*y"), p("x^2")]);
        refined.sort_by_key(|f| f.vars_used());
        assert_eq!(refined, vec![p("x"), p("y")]);
        // pairwise coprimality
        for i in 0..refined.len() {
            for j in i + 1..refined.len() {
                assert!(gcd(&refined[i], &refined[j]).is_constant());
            }
        }
    }
}
