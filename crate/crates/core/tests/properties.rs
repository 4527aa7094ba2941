mod common;

use common::{int, no_three_collinear, pairwise_distinct, power_sum, relative_residual, sparse_form};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use waring::apolarity::{catalecticant, catalecticant_rank, essential_variables, hilbert_function, verify_apolar_points};
use waring::binary::{binary_border_rank, binary_decompose, binary_rank};
use waring::bounds::{
    catalecticant_lower, colon_e1_lower, monomial_decomposition, monomial_rank, ranestad_schreyer_lower,
    upper_bounds,
};
use waring::dispatch::{self, RankOptions};
use waring::modp::PrimeField;
use waring::monomial::{factorial, monomials, unit};
use waring::multivar::{bcmt_decompose_detailed, catalecticant_decompose_detailed, multiplicative_defect};
use waring::roots::{binary_squarefree, cluster_count, univariate_complex_roots};
use waring::secant::{ah_oracle, defect_scan, secant_dim, SecantConfig, VarietySpec};
use waring::{apolar_apply, Field, Form, Rational, C64};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dense_form(r: &mut ChaCha8Rng, nvars: usize, d: u32, b: i64) -> Form {
    let mut f = Form::zero(nvars, d);
    for e in monomials(nvars, d) {
        let c = r.gen_range(-b..=b);
        f = f.add(&Form::monomial(nvars, e, int(c))).unwrap();
    }
    f
}

fn random_linear(r: &mut ChaCha8Rng, nvars: usize) -> Vec<Rational> {
    loop {
        let l: Vec<Rational> = (0..nvars).map(|_| int(r.gen_range(-4..=4))).collect();
        if l.iter().any(|c| !Field::is_zero(c)) {
            return l;
        }
    }
}

fn dual_variable(nvars: usize, i: usize) -> Form {
    Form::monomial(nvars, unit(nvars, i), int(1))
}

fn best_upper(m: usize, d: u32) -> u64 {
    if d < 2 || m < 2 {
        return u64::MAX;
    }
    upper_bounds(m as u64 - 1, d).unwrap().best()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivatives_commute(seed in any::<u64>(), nvars in 2usize..=4, d in 1u32..=6, i in 0usize..4, j in 0usize..4) {
        let (i, j) = (i % nvars, j % nvars);
        let f = sparse_form(&mut rng(seed), nvars, d, 5);
        let (yi, yj) = (dual_variable(nvars, i), dual_variable(nvars, j));
        let a = apolar_apply(&yi, &apolar_apply(&yj, &f).unwrap()).unwrap();
        let b = apolar_apply(&yj, &apolar_apply(&yi, &f).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dual_forms_on_powers(seed in any::<u64>(), nvars in 2usize..=3, d in 1u32..=6, e in 0u32..=6) {
        let e = e.min(d);
        let mut r = rng(seed);
        let l = random_linear(&mut r, nvars);
        let g = sparse_form(&mut r, nvars, e, 3);
        let lhs = apolar_apply(&g, &Form::power_of_linear(&l, d)).unwrap();
        let scale = Rational::from_bigint(&(factorial(d) / factorial(d - e)));
        let rhs = Form::power_of_linear(&l, d - e).scale(&scale.mul(&g.evaluate(&l).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn powers_respect_evaluation(seed in any::<u64>(), nvars in 1usize..=4, d in 0u32..=7) {
        let mut r = rng(seed);
        let l = random_linear(&mut r, nvars);
        let p = random_linear(&mut r, nvars);
        let lp = Form::linear(&l).evaluate(&p).unwrap();
        let want = (0..d).fold(int(1), |acc, _| acc.mul(&lp));
        prop_assert_eq!(Form::power_of_linear(&l, d).evaluate(&p).unwrap(), want);
    }

    #[test]
    fn gorenstein_symmetry(seed in any::<u64>(), nvars in 2usize..=4, d in 1u32..=6) {
        let f = sparse_form(&mut rng(seed), nvars, d, 6);
        prop_assume!(!f.is_zero());
        for i in 0..=d {
            prop_assert_eq!(catalecticant_rank(&f, i).unwrap(), catalecticant_rank(&f, d - i).unwrap());
        }
    }

    #[test]
    fn essential_variables_are_coordinate_free(seed in any::<u64>(), nvars in 2usize..=4, d in 2u32..=5) {
        let mut r = rng(seed);
        let k = r.gen_range(1..=nvars);
        // a form in k variables, pushed through a random invertible change of coordinates
        let f = sparse_form(&mut r, k, d, 4);
        prop_assume!(!f.is_zero());
        let padded = f.substitute(&(0..k).map(|i| {
            let mut v = vec![int(0); nvars];
            v[i] = int(1);
            v
        }).collect::<Vec<_>>(), nvars).unwrap();
        let images: Vec<Vec<Rational>> = loop {
            let m: Vec<Vec<Rational>> = (0..nvars).map(|_| random_linear(&mut r, nvars)).collect();
            if waring::linalg::rank(&m) == nvars {
                break m;
            }
        };
        let moved = padded.substitute(&images, nvars).unwrap();
        prop_assert_eq!(essential_variables(&padded).unwrap().m, essential_variables(&moved).unwrap().m);
    }

    #[test]
    fn apolar_points_reconstruct_exactly(seed in any::<u64>(), d in 2u32..=5, r in 1usize..=4) {
        let mut g = rng(seed);
        let (f, forms) = power_sum(&mut g, 3, d, r, 4);
        prop_assume!(!f.is_zero() && no_three_collinear(&forms));
        let lambdas = verify_apolar_points(&f, &forms).unwrap().expect("constructed points span F");
        let mut acc = Form::zero(3, d);
        for (c, l) in lambdas.iter().zip(&forms) {
            acc = acc.add(&Form::power_of_linear(l, d).scale(c)).unwrap();
        }
        prop_assert_eq!(acc, f.clone());
        // a single point other than the constructed ones cannot carry a form of rank > 1
        if catalecticant_lower(&f).unwrap() > 1 {
            prop_assert!(verify_apolar_points(&f, &forms[..1]).unwrap().is_none());
        }
    }

    #[test]
    fn prime_field_ranks_match_rational_ranks(seed in any::<u64>(), nvars in 2usize..=4, d in 2u32..=6) {
        let f = sparse_form(&mut rng(seed), nvars, d, 6);
        let field = PrimeField::new(2_147_483_659).unwrap();
        for i in 0..=d {
            let cat = catalecticant(&f, i).unwrap();
            let reduced: Option<Vec<Vec<u64>>> =
                cat.entries.iter().map(|row| row.iter().map(|c| field.from_rational(c)).collect()).collect();
            let Some(mut rows) = reduced else { continue };
            prop_assert_eq!(field.rank_in_place(&mut rows), cat.rank());
        }
    }
}

#[test]
fn monomial_hilbert_functions_match_brute_force() {
    for nvars in 1..=4usize {
        for d in 1..=6u32 {
            for alpha in monomials(nvars, d) {
                let f = Form::monomial(nvars, alpha.clone(), int(1));
                let hf = hilbert_function(&f).unwrap();
                let brute: Vec<usize> = (0..=d)
                    .map(|i| monomials(nvars, i).iter().filter(|b| b.iter().zip(&alpha).all(|(x, a)| x <= a)).count())
                    .collect();
                assert_eq!(hf, brute, "{f}");
            }
        }
    }
}

#[test]
fn random_binary_forms() {
    let mut r = rng(11);
    for _ in 0..500 {
        let d = r.gen_range(2..=10);
        let f = dense_form(&mut r, 2, d, 9);
        if f.is_zero() || essential_variables(&f).unwrap().m < 2 {
            continue;
        }
        let b = binary_border_rank(&f).unwrap();
        let cert = binary_rank(&f).unwrap();
        assert!(cert.rank == b || cert.rank == d as usize - b + 2, "{f}");
        let dec = binary_decompose(&f, 1e-8).unwrap_or_else(|e| panic!("{f}: {e}"));
        assert_eq!(dec.len(), cert.rank, "{f}");
        assert!(relative_residual(&f, &dec) <= 1e-8, "{f}");
        assert!(catalecticant_lower(&f).unwrap() <= cert.rank as u64);
        assert!(cert.rank as u64 <= best_upper(2, d));
    }
}

#[test]
fn binary_round_trip_border_rank() {
    let mut r = rng(12);
    let mut retries = 0;
    for _ in 0..100 {
        let d = r.gen_range(2..=10u32);
        let k = r.gen_range(1..=(d as usize + 2) / 2);
        let mut ok = false;
        for _ in 0..3 {
            // coincident points are redrawn without counting as a retry
            let f = loop {
                let (f, forms) = power_sum(&mut r, 2, d, k, 20);
                if pairwise_distinct(&forms) {
                    break f;
                }
            };
            if binary_border_rank(&f).unwrap() == k {
                ok = true;
                break;
            }
            retries += 1;
        }
        assert!(ok);
    }
    assert!(retries <= 1, "{retries} retries");
}

#[test]
fn generic_odd_binary_forms() {
    let mut r = rng(13);
    for t in 1..=5u32 {
        for _ in 0..100 {
            let f = dense_form(&mut r, 2, 2 * t + 1, 50);
            assert_eq!(binary_rank(&f).unwrap().rank, t as usize + 1, "{f}");
        }
    }
}

#[test]
fn squarefree_agrees_with_root_clusters() {
    let mut r = rng(14);
    for _ in 0..200 {
        // products of linear factors, some repeated
        let k = r.gen_range(1..=5);
        let mut g = Form::monomial(2, vec![0, 0], int(1));
        let mut distinct: Vec<Vec<Rational>> = Vec::new();
        for _ in 0..k {
            let l = if !distinct.is_empty() && r.gen_bool(0.3) {
                distinct[r.gen_range(0..distinct.len())].clone()
            } else {
                random_linear(&mut r, 2)
            };
            g = g.mul(&Form::linear(&l)).unwrap();
            distinct.push(l);
        }
        let sf = binary_squarefree(&g).unwrap();
        let roots = univariate_complex_roots(&g, 1e-12).unwrap();
        // distinct roots of these factors are at least 1/16 apart
        let clusters = cluster_count(&roots, 1e-3);
        assert_eq!(sf, clusters == g.degree() as usize, "{g}");
    }
}

#[test]
fn ternary_construct_then_decompose() {
    let mut r = rng(15);
    let mut done = 0;
    while done < 50 {
        let d = r.gen_range(3..=6u32);
        // the Hankel basis lies in degree floor(d/2)
        let max_r = if d < 4 { 3 } else { 6 };
        let k = r.gen_range(3..=max_r);
        let (f, forms) = power_sum(&mut r, 3, d, k, 6);
        if !no_three_collinear(&forms) || catalecticant_lower(&f).unwrap() != k as u64 {
            continue;
        }
        done += 1;
        let Ok(out) = bcmt_decompose_detailed(&f, k, 1e-8, 1) else {
            continue;
        };
        let dec = &out.decomposition;
        assert_eq!(dec.len(), k, "{f}");
        assert!(relative_residual(&f, dec) <= 1e-8, "{f}");
        for v in &out.eigenvectors {
            assert!(multiplicative_defect(&out.basis, v) < 1e-6, "{f}");
        }
        if let Ok(cat) = catalecticant_decompose_detailed(&f, 1e-8, 1) {
            assert!(same_points(&dec.linear_forms, &cat.decomposition.linear_forms), "{f}");
        }
        let rank = dispatch::rank(&f, &RankOptions::default()).unwrap();
        assert_eq!(rank.rank(), Some(k as u64), "{f}");
        assert!(k as u64 <= best_upper(3, d));
    }
}

fn projective(l: &[C64]) -> Vec<C64> {
    let lead = *l.iter().max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap()).unwrap();
    l.iter().map(|c| c / lead).collect()
}

fn same_points(a: &[Vec<C64>], b: &[Vec<C64>]) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| {
            let p = projective(p);
            b.iter().any(|q| {
                let q = projective(q);
                p.iter().zip(&q).all(|(x, y)| (x - y).norm() <= 1e-6)
            })
        })
}

#[test]
fn secant_dimensions_are_monotone() {
    let cfg = SecantConfig::default();
    for t in ["veronese:2,4", "veronese:3,3", "segre:1x1x1x1", "grass:1,5", "segre-veronese:1,1;2,2", "tangential:2,3"] {
        let v: VarietySpec = t.parse().unwrap();
        let reports = defect_scan(&v, 1..=12, &cfg).unwrap();
        for w in reports.windows(2) {
            let (a, b) = (w[0].actual, w[1].actual);
            assert!(a <= b, "{t}");
            assert!(a == v.ambient_dim() || a < b, "{t} stalls below N at s={}", w[0].s);
        }
        assert!(reports.iter().all(|r| r.primes_agree), "{t}");
    }
}

#[test]
fn veronese_dimensions_match_the_oracle() {
    let cfg = SecantConfig::default();
    for n in 1..=5usize {
        for d in 2..=6u32 {
            let v = VarietySpec::Veronese { n, d };
            for s in 1..=20u64 {
                let got = secant_dim(&v, s, &cfg).unwrap();
                let (dim, defect) = ah_oracle(n as u64, d, s).unwrap();
                assert_eq!((got.actual, got.defect), (dim, defect), "{v} s={s}");
                if got.actual == v.ambient_dim() {
                    break;
                }
            }
        }
    }
}

#[test]
fn grassmannian_lines() {
    let r = secant_dim(&"grass:1,7".parse().unwrap(), 2, &SecantConfig::default()).unwrap();
    assert_eq!((r.actual, r.defect), (21, 4));
}

#[test]
fn monomials_are_one_computable() {
    for nvars in 1..=4usize {
        for total in 1..=8u32 {
            for alpha in monomials(nvars, total) {
                if alpha.contains(&0) {
                    continue;
                }
                let mut sorted = alpha.clone();
                sorted.sort_unstable();
                let f = Form::monomial(nvars, sorted.clone(), int(1));
                let rank = monomial_rank(&sorted).unwrap();
                let mut y0 = vec![int(0); nvars];
                y0[0] = int(1);
                let colon = colon_e1_lower(&f, &y0).unwrap();
                assert_eq!(colon, rank, "{f}");
                assert!(ranestad_schreyer_lower(&f).unwrap() <= colon, "{f}");
                assert!(catalecticant_lower(&f).unwrap() <= colon, "{f}");
                assert!(rank <= best_upper(nvars, total), "{f}");
                if rank <= 64 {
                    let dec = monomial_decomposition(&sorted, 1e-8).unwrap();
                    assert_eq!(dec.len() as u64, rank, "{f}");
                    assert!(relative_residual(&f, &dec) <= 1e-8, "{f}");
                }
                if nvars == 2 {
                    assert_eq!(binary_rank(&f).unwrap().rank as u64, rank, "{f}");
                }
            }
        }
    }
}
