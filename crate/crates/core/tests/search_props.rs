use std::collections::BTreeSet;

use num_rational::BigRational;

use uwstbc::code::GroupSignature;
use uwstbc::codecheck::{check_g_group, check_independence, check_single_thread_diversity, cross_term};
use uwstbc::exactmat::{rank_over_reals, ExactMatrix};
use uwstbc::exec::Execution;
use uwstbc::fixtures;
use uwstbc::lambda::LambdaCandidate;
use uwstbc::search::*;
use uwstbc::Error;

fn sig(s: &[usize]) -> GroupSignature {
    GroupSignature::new(s.to_vec()).unwrap()
}

fn cands() -> Vec<LambdaCandidate> {
    candidates(2, false, Execution::Parallel).unwrap()
}

fn opts(limit: Option<usize>, execution: Execution) -> SearchOptions {
    SearchOptions { limit, execution }
}

/// Cross-group condition and rank, straight from the weight matrices.
fn brute_force_code_ok(code: &uwstbc::code::StbcCode) -> bool {
    for (i, gi) in code.groups.iter().enumerate() {
        for gj in &code.groups[i + 1..] {
            for x in gi {
                for y in gj {
                    if !cross_term(x, y).unwrap().is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    let all: Vec<ExactMatrix> = code.weights().cloned().collect();
    rank_over_reals(&all).unwrap() == all.len()
}

#[test]
fn smallest_signature_example() {
    let c = cands();
    let found = find_gamma_sets(&sig(&[1, 1]), &c, opts(None, Execution::Sequential)).unwrap();
    assert_eq!(found.len(), 80);
    let b = uwstbc::clifford::basis(2, uwstbc::clifford::Sign::Plus).unwrap();
    let gs = found.iter().find(|g| &g.lambda_11.matrix == b.alpha(2)).unwrap();
    let code = reconstruct_weights(gs, &ExactMatrix::identity(4)).unwrap();
    assert_eq!(code.groups, vec![vec![ExactMatrix::identity(4)], vec![b.alpha(2).neg()]]);
}

#[test]
fn pruned_counts_match_unpruned() {
    let c = cands();
    for s in [&[1, 1][..], &[2, 1], &[1, 2], &[2, 2], &[1, 1, 1], &[1, 1, 2], &[1, 1, 1, 1]] {
        let s = sig(s);
        let pruned = count_gamma_sets(&s, &c, Execution::Parallel).unwrap() as u64;
        let unpruned = count_gamma_sets_unpruned(&s, &c).unwrap();
        assert_eq!(pruned * symmetry_factor(&s), unpruned, "{s}");
    }
}

#[test]
fn found_sets_revalidate_and_reconstruct() {
    let c = cands();
    let cases: [(&[usize], Option<usize>); 6] = [
        (&[2, 2], None),
        (&[1, 1, 2], None),
        (&[3, 3], Some(200)),
        (&[5, 5], Some(50)),
        (&[2, 2, 4], Some(50)),
        (&[2, 2, 2], Some(50)),
    ];
    let eye = ExactMatrix::identity(4);
    for (s, limit) in cases {
        let s = sig(s);
        let found = find_gamma_sets(&s, &c, opts(limit, Execution::Parallel)).unwrap();
        assert!(!found.is_empty(), "{s}");
        for gs in &found {
            assert_eq!(validate_gamma(gs).unwrap(), Ok(()), "{s}");
            let code = reconstruct_weights(gs, &eye).unwrap();
            assert!(brute_force_code_ok(&code));
            assert_eq!(code.signature(), s);
        }
    }
}

#[test]
fn negation_keeps_sets_valid() {
    let c = cands();
    for s in [&[2, 2][..], &[2, 2, 4], &[5, 5]] {
        let found = find_gamma_sets(&sig(s), &c, opts(Some(10), Execution::Parallel)).unwrap();
        for gs in &found {
            let members = s.iter().sum::<usize>() - 1;
            for idx in 0..members {
                let neg = gs.negate_member(idx, &c).unwrap();
                assert_eq!(validate_gamma(&neg).unwrap(), Ok(()));
                reconstruct_weights(&neg, &ExactMatrix::identity(4)).unwrap();
            }
        }
    }
}

/// Swapping one member for any other candidate: the set is valid exactly
/// when its reconstruction passes the code-level checks.
#[test]
fn gamma_and_code_conditions_are_equivalent() {
    let c = cands();
    let eye = ExactMatrix::identity(4);
    for s in [&[2, 2][..], &[1, 1, 2]] {
        let found = find_gamma_sets(&sig(s), &c, opts(Some(3), Execution::Parallel)).unwrap();
        for gs in &found {
            let members = s.iter().sum::<usize>() - 1;
            for idx in 0..members {
                let mut broken = 0;
                for cand in &c {
                    let mut g = gs.clone();
                    match idx {
                        0 => g.lambda_11 = cand.clone(),
                        i if i <= g.lambda_k1.len() => g.lambda_k1[i - 1] = cand.clone(),
                        i => {
                            let off = i - 1 - g.lambda_k1.len();
                            g.lambda_1l[off] = cand.clone();
                        }
                    }
                    let gamma_ok = validate_gamma(&g).unwrap().is_ok();
                    match reconstruct_weights(&g, &eye) {
                        Ok(code) => {
                            assert!(gamma_ok, "code passes but Γ fails");
                            assert!(brute_force_code_ok(&code));
                        }
                        Err(Error::Verification { .. }) => {
                            assert!(!gamma_ok, "Γ passes but code fails");
                            broken += 1;
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
                assert!(broken > 0);
            }
        }
    }
}

#[test]
fn deterministic_across_modes_and_limits() {
    let c = cands();
    for s in [&[2, 2][..], &[1, 1, 2], &[1, 2, 2]] {
        let s = sig(s);
        let seq = find_gamma_sets(&s, &c, opts(None, Execution::Sequential)).unwrap();
        let par = find_gamma_sets(&s, &c, opts(None, Execution::Parallel)).unwrap();
        assert_eq!(seq, par);
        for limit in [1, 7, 100] {
            let lim_par = find_gamma_sets(&s, &c, opts(Some(limit), Execution::Parallel)).unwrap();
            let lim_seq = find_gamma_sets(&s, &c, opts(Some(limit), Execution::Sequential)).unwrap();
            assert_eq!(lim_par, seq[..limit.min(seq.len())].to_vec());
            assert_eq!(lim_seq, lim_par);
        }
    }
    let one = uwstbc::exec::with_workers(1, || find_gamma_sets(&sig(&[2, 2]), &c, opts(None, Execution::Parallel)).unwrap());
    let four = uwstbc::exec::with_workers(4, || find_gamma_sets(&sig(&[2, 2]), &c, opts(None, Execution::Parallel)).unwrap());
    assert_eq!(one, four);
}

#[test]
fn splitting_matches_direct_search() {
    let c = cands();
    for (two, sub) in [(&[1usize, 2][..], &[1usize, 1][..]), (&[2, 2], &[1, 1])] {
        let coarse = find_gamma_sets(&sig(two), &c, opts(None, Execution::Parallel)).unwrap();
        let mut split = Vec::new();
        for gs in &coarse {
            split.extend(split_second_group(gs, sub).unwrap());
        }
        let mut fine_sig = vec![two[0]];
        fine_sig.extend_from_slice(sub);
        let direct = find_gamma_sets(&sig(&fine_sig), &c, opts(None, Execution::Parallel)).unwrap();
        let key = |g: &GammaSet| serde_json::to_string(g).unwrap();
        let a: BTreeSet<String> = split.iter().map(key).collect();
        let b: BTreeSet<String> = direct.iter().map(key).collect();
        assert_eq!(a.len(), split.len());
        assert_eq!(a, b, "{fine_sig:?}");
        for gs in &split {
            assert!(validate_gamma(gs).unwrap().is_ok());
        }
    }
    let gs = &find_gamma_sets(&sig(&[1, 3]), &c, opts(Some(1), Execution::Parallel)).unwrap()[0];
    assert!(matches!(split_second_group(gs, &[1, 1]), Err(Error::Domain(_))));
}

#[test]
fn alternative_first_weight() {
    let c = cands();
    let gs = &find_gamma_sets(&sig(&[5, 5]), &c, opts(Some(1), Execution::Parallel)).unwrap()[0];
    let eye = ExactMatrix::identity(4);
    let t2 = uwstbc::clifford::thread_permutations(2).unwrap()[1].clone();
    let x = reconstruct_weights(gs, &eye).unwrap();
    let y = reconstruct_weights(gs, &t2).unwrap();
    assert_ne!(x.groups, y.groups);
    assert!(brute_force_code_ok(&y));
    // a unitary outside the single-thread class is rejected
    let h = ExactMatrix::from_rows(vec![
        vec!["1/2".parse().unwrap(), "1/2".parse().unwrap(), "1/2".parse().unwrap(), "1/2".parse().unwrap()],
        vec!["1/2".parse().unwrap(), "-1/2".parse().unwrap(), "1/2".parse().unwrap(), "-1/2".parse().unwrap()],
        vec!["1/2".parse().unwrap(), "1/2".parse().unwrap(), "-1/2".parse().unwrap(), "-1/2".parse().unwrap()],
        vec!["1/2".parse().unwrap(), "-1/2".parse().unwrap(), "-1/2".parse().unwrap(), "1/2".parse().unwrap()],
    ])
    .unwrap();
    assert!(h.is_unitary().unwrap());
    assert!(matches!(
        reconstruct_weights(gs, &h),
        Err(Error::Verification { condition, .. }) if condition == "single-thread"
    ));
    assert!(matches!(reconstruct_weights(gs, &ExactMatrix::identity(4).scale_real(&BigRational::from_integer(2.into()))), Err(Error::Domain(_))));
}

#[test]
fn column_removal() {
    let t2 = fixtures::table2();
    let same = remove_columns(&t2, &[0, 1, 2, 3]).unwrap();
    assert_eq!(same.groups, t2.groups);

    // three columns of the rate-5/4 code stay decodable but lose one real dimension
    let groups = t2
        .groups
        .iter()
        .map(|g| g.iter().map(|m| m.select_columns(&[0, 1, 2]).unwrap()).collect())
        .collect();
    let cut = uwstbc::code::StbcCode::new(2, groups).unwrap();
    assert!(cut.weights().all(|m| m.rows() == 4 && m.cols() == 3));
    assert_eq!(cut.weights().count(), 10);
    assert!(check_g_group(&cut).unwrap().holds);
    assert_eq!(check_independence(&cut).unwrap().rank, 9);
    assert!(matches!(
        remove_columns(&t2, &[0, 1, 2]),
        Err(Error::Verification { condition, .. }) if condition == "real independence"
    ));

    let t3 = fixtures::table3();
    let narrow = remove_columns(&t3, &[0, 1, 2]).unwrap();
    assert_eq!((narrow.t, narrow.n_t), (4, 3));
    assert!(check_g_group(&narrow).unwrap().holds);
    assert!(check_independence(&narrow).unwrap().holds);
    assert_eq!(check_single_thread_diversity(&narrow).unwrap(), None);

    assert!(matches!(remove_columns(&t2, &[0]), Err(Error::Verification { .. })));
    assert!(matches!(remove_columns(&t2, &[0, 0]), Err(Error::Domain(_))));
    assert!(matches!(remove_columns(&t2, &[4]), Err(Error::Domain(_))));
    assert!(matches!(remove_columns(&t2, &[]), Err(Error::Domain(_))));
}

/// Restricting columns never breaks the cross-group condition.
#[test]
fn column_removal_preserves_decodability() {
    let c = cands();
    let mut codes = vec![fixtures::table2(), fixtures::table3()];
    for s in [&[5, 5][..], &[2, 2, 4]] {
        for gs in find_gamma_sets(&sig(s), &c, opts(Some(5), Execution::Parallel)).unwrap() {
            codes.push(reconstruct_weights(&gs, &ExactMatrix::identity(4)).unwrap());
        }
    }
    for code in &codes {
        for mask in 1u32..15 {
            let keep: Vec<usize> = (0..4).filter(|&i| mask >> i & 1 == 1).collect();
            let groups = code
                .groups
                .iter()
                .map(|g| g.iter().map(|m| m.select_columns(&keep).unwrap()).collect())
                .collect();
            let cut = uwstbc::code::StbcCode::new(code.a, groups).unwrap();
            assert!(check_g_group(&cut).unwrap().holds);
        }
    }
}

#[test]
fn symmetric_two_group_maximum() {
    let r = max_rate_search(2, 2, true, MaxRateOptions::default()).unwrap();
    assert_eq!(r.max_rate.to_string(), "5/4");
    assert_eq!(r.signatures, vec![sig(&[5, 5])]);
    assert_eq!(r.witnesses.len(), 1);
    assert!(brute_force_code_ok(&r.witnesses[0]));
    let last = r.explored.last().unwrap();
    assert_eq!((last.signature.clone(), last.found), (sig(&[6, 6]), false));
}

#[test]
fn three_group_maxima_without_singletons() {
    let o = MaxRateOptions { min_group_size: 2, ..MaxRateOptions::default() };
    let r = max_rate_search(2, 3, false, o).unwrap();
    assert_eq!(r.max_rate.to_string(), "1");
    assert_eq!(r.signatures, vec![sig(&[2, 3, 3]), sig(&[2, 2, 4])]);
    for w in &r.witnesses {
        assert!(brute_force_code_ok(w));
    }
    for p in partitions_at_least(9, 3, 2) {
        assert!(r.explored.iter().any(|o| o.signature == sig(&p) && !o.found));
    }
    let c = cands();
    for p in partitions_at_least(10, 3, 2) {
        assert!(find_gamma_sets(&sig(&p), &c, opts(Some(1), Execution::Parallel)).unwrap().is_empty(), "{p:?}");
    }
    let sym = max_rate_search(2, 3, true, MaxRateOptions::default()).unwrap();
    assert!(sym.max_rate <= BigRational::new(3.into(), 4.into()));
}

/// `{I}`, `{R_1}` and the eight basis elements anticommuting with `R_1`.
#[test]
fn singleton_groups_reach_five_quarters() {
    let g = uwstbc::clifford::generators(2, uwstbc::clifford::Sign::Plus).unwrap();
    let b = uwstbc::clifford::basis(2, uwstbc::clifford::Sign::Plus).unwrap();
    let r1 = g.r(1).clone();
    let third: Vec<ExactMatrix> = b
        .matrices()
        .iter()
        .filter(|m| r1.mat_mul(m).unwrap().add(&m.mat_mul(&r1).unwrap()).unwrap().is_zero())
        .cloned()
        .collect();
    assert_eq!(third.len(), 8);
    let code = uwstbc::code::StbcCode::new(2, vec![vec![ExactMatrix::identity(4)], vec![r1], third]).unwrap();
    assert!(brute_force_code_ok(&code));
    assert_eq!(check_single_thread_diversity(&code).unwrap(), Some(true));
    assert_eq!(code.rate(), BigRational::new(5.into(), 4.into()));

    let r = max_rate_search(2, 3, false, MaxRateOptions::default()).unwrap();
    assert_eq!(r.max_rate.to_string(), "5/4");
    assert_eq!(r.signatures, vec![sig(&[1, 1, 8])]);
    assert!(brute_force_code_ok(&r.witnesses[0]));
    assert!(r.explored.iter().any(|o| o.signature == sig(&[1, 1, 9]) && !o.found));
}

#[test]
fn two_antenna_maximum() {
    let r = max_rate_search(1, 2, true, MaxRateOptions::default()).unwrap();
    assert!(!r.witnesses.is_empty());
    for w in &r.witnesses {
        assert!(brute_force_code_ok(w));
        assert_eq!((w.t, w.n_t), (2, 2));
    }
}

#[test]
fn one_group_is_rejected() {
    let c = cands();
    assert!(matches!(find_gamma_sets(&sig(&[4]), &c, SearchOptions::default()), Err(Error::Domain(_))));
    assert!(matches!(max_rate_search(2, 1, true, MaxRateOptions::default()), Err(Error::Domain(_))));
}
