//! Cross-validation of the root isolator against an independent Sturm-chain
//! counter on seeded random polynomials: the number of isolated roots must
//! match the Sturm count, every returned interval must contain exactly one
//! root, point roots must evaluate to zero, and enclosures must be pairwise
//! disjoint.

mod common;

use certmesh::ratpoly::{Polynomial, Q, Var};
use certmesh::rootiso::isolate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn poly_from_dense(coeffs: &[i64]) -> Polynomial {
    let mut p = Polynomial::zero();
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            let mono = Polynomial::var(Var::X).pow(i as u32);
            p = p + mono.scale(&q(c, 1));
        }
    }
    p
}

fn random_instance(rng: &mut ChaCha8Rng, case: usize) -> Polynomial {
    match case % 3 {
        // dense random coefficients
        0 => loop {
            let deg = rng.gen_range(1..=8);
            let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-50..=50)).collect();
            if coeffs[deg] == 0 {
                coeffs[deg] = 1;
            }
            let p = poly_from_dense(&coeffs);
            if !p.is_zero() {
                return p;
            }
        },
        // products of small linear factors: clustered rational roots
        1 => {
            let k = rng.gen_range(2..=4);
            let mut p = Polynomial::constant(q(1, 1));
            for _ in 0..k {
                let a = rng.gen_range(1..=6);
                let b = rng.gen_range(-6..=6);
                // a*x - b
                let f = poly_from_dense(&[-b, a]);
                p = p * f;
            }
            p
        }
        // a squared factor times a quadratic: exercises multiplicity removal
        _ => {
            let a = rng.gen_range(-5..=5);
            let f = poly_from_dense(&[a, 0, 1]); // x^2 + a
            let c = rng.gen_range(-9..=9);
            let g = poly_from_dense(&[c, 1]); // x + c
            f.clone() * f * g
        }
    }
}

#[test]
fn isolator_matches_sturm_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0D15_EA5E);
    for case in 0..200 {
        let p = random_instance(&mut rng, case);
        let dense = common::dense_coeffs(&p, Var::X);
        let expected = common::count_roots(&dense);
        let roots = isolate(&p, Var::X);
        assert_eq!(
            roots.len(),
            expected,
            "root count mismatch for {p} (case {case})"
        );

        let chain = common::sturm_chain(&dense);
        for (i, r) in roots.iter().enumerate() {
            if let Some(t) = r.rational_value() {
                assert!(
                    p.eval_var(Var::X, &t).is_zero(),
                    "point root {t} of {p} does not evaluate to zero"
                );
            } else {
                let iv = r.iv();
                let inside = common::count_roots_between(&chain, iv.lo(), iv.hi());
                assert_eq!(inside, 1, "interval {:?} of {p} has {inside} roots", iv);
            }
            for s in &roots[..i] {
                assert!(
                    !r.iv().intersects(s.iv()),
                    "enclosures overlap for {p}: {:?} vs {:?}",
                    r.iv(),
                    s.iv()
                );
            }
        }
    }
}

#[test]
fn isolator_matches_sturm_on_tight_clusters() {
    // Roots at 0, 1/512, 1/256, 3/512: forces deep subdivision.
    let mut p = Polynomial::constant(q(1, 1));
    for num in [0i64, 1, 2, 3] {
        let f = poly_from_dense(&[-num, 512]);
        p = p * f;
    }
    let dense = common::dense_coeffs(&p, Var::X);
    assert_eq!(common::count_roots(&dense), 4);
    let roots = isolate(&p, Var::X);
    assert_eq!(roots.len(), 4);
}
