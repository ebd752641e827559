use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use uwstbc::clifford::{self, Sign};
use uwstbc::exactmat::{ExactMatrix, GaussianRational};
use uwstbc::lambda::{
    coefficient_domain, enumerate_lambdas, is_single_thread_unit, recover_coefficients,
    structure_space, EnumerateOptions,
};

/// Number of admissible Λ for four antennas, fixed by the oracle below.
const LAMBDA_COUNT_A2: usize = 160;

fn key(m: &ExactMatrix) -> String {
    serde_json::to_string(m).unwrap()
}

fn admissible(m: &ExactMatrix, threads: &[ExactMatrix]) -> bool {
    m.is_unitary().unwrap()
        && m.is_anti_hermitian().unwrap()
        && m.squares_to_neg_identity().unwrap()
        && is_single_thread_unit(m, threads).is_some()
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Every `±α_k` and every `Σ ±½ α_k` over four distinct `k`, filtered by
/// matrix predicates alone.
fn coefficient_pattern_oracle() -> (usize, BTreeSet<String>) {
    let b = clifford::basis(2, Sign::Plus).unwrap();
    let threads = clifford::thread_permutations(2).unwrap();
    let mut tried = 0;
    let mut out = BTreeSet::new();
    for k in 1..=16 {
        for s in [BigRational::one(), -BigRational::one()] {
            tried += 1;
            let m = b.alpha(k).scale_real(&s);
            if admissible(&m, &threads) {
                out.insert(key(&m));
            }
        }
    }
    for i in 1..=16 {
        for j in i + 1..=16 {
            for k in j + 1..=16 {
                for l in k + 1..=16 {
                    for signs in 0..16u32 {
                        tried += 1;
                        let mut m = ExactMatrix::zeros(4, 4);
                        for (bit, idx) in [i, j, k, l].into_iter().enumerate() {
                            let c = if signs >> bit & 1 == 1 { -half() } else { half() };
                            m = m.add(&b.alpha(idx).scale_real(&c)).unwrap();
                        }
                        if admissible(&m, &threads) {
                            out.insert(key(&m));
                        }
                    }
                }
            }
        }
    }
    (tried, out)
}

/// Every 4×4 unit monomial (permutation times phases), filtered by matrix predicates.
fn monomial_oracle() -> BTreeSet<String> {
    let threads = clifford::thread_permutations(2).unwrap();
    let mut out = BTreeSet::new();
    let perms = permutations(4);
    for p in &perms {
        for phases in 0..256u32 {
            let mut m = ExactMatrix::zeros(4, 4);
            for (r, &c) in p.iter().enumerate() {
                m.set(r, c, GaussianRational::j_pow((phases >> (2 * r) & 3) as i64));
            }
            if admissible(&m, &threads) {
                out.insert(key(&m));
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn coefficient_enumeration_matches_oracles() {
    let (tried, oracle) = coefficient_pattern_oracle();
    assert_eq!(tried, 32 + 29_120);
    assert_eq!(oracle.len(), LAMBDA_COUNT_A2);

    let got = enumerate_lambdas(2, EnumerateOptions::default()).unwrap();
    let got_set: BTreeSet<String> = got.iter().map(|c| key(&c.matrix)).collect();
    assert_eq!(got.len(), got_set.len());
    assert_eq!(got_set, oracle);

    let structure: BTreeSet<String> = structure_space(2).unwrap().iter().map(key).collect();
    assert_eq!(structure, oracle);
    assert_eq!(monomial_oracle(), oracle);
}

#[test]
fn small_case_counts() {
    let got = enumerate_lambdas(1, EnumerateOptions::default()).unwrap();
    let structure: BTreeSet<String> = structure_space(1).unwrap().iter().map(key).collect();
    let got_set: BTreeSet<String> = got.iter().map(|c| key(&c.matrix)).collect();
    assert_eq!(got_set, structure);
    assert_eq!(got.len(), 8);
    // 2^8 phase choices times the 764 involutions of eight elements
    assert_eq!(structure_space(3).unwrap().len(), 256 * 764);
}

#[test]
fn candidate_invariants() {
    for a in 1..=2 {
        let b = clifford::basis(a, Sign::Plus).unwrap();
        let threads = clifford::thread_permutations(a).unwrap();
        let domain = coefficient_domain(a).unwrap();
        let all = enumerate_lambdas(a, EnumerateOptions::default()).unwrap();
        let keys: BTreeSet<String> = all.iter().map(|c| key(&c.matrix)).collect();
        for c in &all {
            assert!(admissible(&c.matrix, &threads));
            let norm: BigRational = c.coeffs.iter().map(|x| x * x).sum();
            assert!(norm.is_one());
            assert!(c.coeffs.iter().all(|x| domain.contains(x)));
            let mut sum = ExactMatrix::zeros(b.dim(), b.dim());
            for (k, x) in c.coeffs.iter().enumerate() {
                sum = sum.add(&b.alpha(k + 1).scale_real(x)).unwrap();
            }
            assert_eq!(sum, c.matrix);
            let recovered = recover_coefficients(&b, &c.matrix).unwrap();
            for (r, x) in recovered.iter().zip(&c.coeffs) {
                assert!(r.im.is_zero());
                assert_eq!(&r.re, x);
            }
            let support: Vec<usize> = (1..=c.coeffs.len()).filter(|&k| !c.coeffs[k - 1].is_zero()).collect();
            assert_eq!(c.support, support);
            assert!(keys.contains(&key(&c.matrix.neg())), "negation missing");
        }
    }
}

#[test]
fn worked_example_and_plus_minus_units() {
    let b = clifford::basis(2, Sign::Plus).unwrap();
    let all = enumerate_lambdas(2, EnumerateOptions::default()).unwrap();
    let keys: BTreeSet<String> = all.iter().map(|c| key(&c.matrix)).collect();
    for k in 1..=16 {
        assert!(keys.contains(&key(b.alpha(k))));
        assert!(keys.contains(&key(&b.alpha(k).neg())));
    }
    let g = clifford::generators(2, Sign::Plus).unwrap();
    let ex = g
        .r(1)
        .sub(g.r(3))
        .unwrap()
        .add(&g.r(1).mat_mul(g.r(2)).unwrap())
        .unwrap()
        .add(&g.r(2).mat_mul(g.r(3)).unwrap())
        .unwrap()
        .scale_real(&half());
    assert!(keys.contains(&key(&ex)));
}

#[test]
fn execution_modes_agree() {
    use uwstbc::exec::Execution;
    let seq = enumerate_lambdas(2, EnumerateOptions { allow_a3: false, execution: Execution::Sequential }).unwrap();
    let par = enumerate_lambdas(2, EnumerateOptions { allow_a3: false, execution: Execution::Parallel }).unwrap();
    assert_eq!(seq, par);
}
