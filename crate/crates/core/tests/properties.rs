//! Randomized sweeps for module-level invariants that are not part of
//! the acceptance criteria.

use mvote_core::election::WeightVector;
use mvote_core::enumerate::{random_election_with, random_instance, random_weights_with};
use mvote_core::matching::{
    in_matching_uncovered_set, DominationGraph, IntegralDominationGraph, MatchingCertificate,
};
use mvote_core::ratio::{rat, Rat};
use mvote_core::rules::plurality_matching;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn plurality_matching_winner_is_uncovered_and_plu_dominates_veto() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=7);
        let m = rng.gen_range(1..=5);
        let e = random_election_with(&mut rng, n, m);
        let report = plurality_matching(&e).unwrap();
        assert!(
            in_matching_uncovered_set(&e, report.chosen),
            "winner must lie in the matching uncovered set"
        );
        for a in report.matchable.iter() {
            assert!(
                e.plurality_score(a) >= e.veto_score(a),
                "matchable candidates satisfy plu >= veto"
            );
        }
    }
}

#[test]
fn integral_matching_implies_plu_at_least_veto() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=7);
        let m = rng.gen_range(1..=5);
        let e = random_election_with(&mut rng, n, m);
        for a in 0..m {
            if IntegralDominationGraph::build(&e, a)
                .perfect_matching()
                .is_some()
            {
                assert!(e.plurality_score(a) >= e.veto_score(a));
            }
        }
    }
}

#[test]
fn certificates_validate_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=5);
        let e = random_election_with(&mut rng, n, m);
        let p = random_weights_with(&mut rng, n);
        let q = random_weights_with(&mut rng, m);
        let a = rng.gen_range(0..m);
        let g = DominationGraph::build(&e, a, p.clone(), q.clone()).unwrap();
        match g.check_fractional_matching() {
            MatchingCertificate::Matchable { matching } => {
                assert!(matching
                    .expect("flow check returns a witness")
                    .validates(&g));
            }
            MatchingCertificate::NotMatchable {
                violating,
                p_weight,
                q_weight,
            } => {
                assert_eq!(p.weight_of(&violating), p_weight);
                assert_eq!(q.weight_of(&g.neighborhood(&violating)), q_weight);
                assert!(q_weight < p_weight);
            }
        }
    }
}

#[test]
fn phi_k_monotone_and_capped() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=4);
        let inst = random_instance(n, m, 2, rng.gen::<u64>());
        for c in 0..m {
            let max_cost = (0..n)
                .map(|i| inst.metric.dist_vc(i, c).clone())
                .max()
                .unwrap();
            let mut last = Rat::new(0.into(), 1.into());
            for k in 1..=n {
                let phi = inst.metric.phi_k(c, k);
                assert!(phi >= last, "phi_k must be nondecreasing in k");
                assert!(phi <= Rat::from_integer(k.into()) * &max_cost);
                last = phi;
            }
            assert_eq!(last, inst.metric.social_cost(c));
        }
    }
}

#[test]
fn consistency_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..100 {
        let inst = random_instance(3, 3, 2, rng.gen::<u64>());
        for lambda in [rat(1, 3), Rat::one(), rat(7, 2)] {
            let scaled = inst.metric.scale(&lambda);
            assert!(scaled.consistent_with(&inst.election).unwrap());
            assert!(scaled
                .is_alpha_decisive(&inst.election, &inst.min_alpha)
                .unwrap());
        }
    }
}

#[test]
fn some_candidate_is_matchable_on_every_small_election() {
    // Exhaustive over all elections with n <= 4, m <= 3, each against 25
    // random weight pairs.
    let elections: Vec<_> = mvote_core::enumerate::all_small_elections(4, 3).collect();
    let bad: usize = mvote_core::parallel::par_map(&elections, |e| {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let p = random_weights_with(&mut rng, e.voters());
            let q = random_weights_with(&mut rng, e.candidates());
            let ok = (0..e.candidates()).any(|a| {
                DominationGraph::build(e, a, p.clone(), q.clone())
                    .unwrap()
                    .check_fractional_matching()
                    .is_matchable()
            });
            if !ok {
                return 1;
            }
        }
        0
    })
    .into_iter()
    .sum();
    assert_eq!(bad, 0);
}

#[test]
fn bounded_distortion_witnesses_are_feasible_and_tight() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..40 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=3);
        let e = random_election_with(&mut rng, n, m);
        let alpha = rat(rng.gen_range(0..=4), 4);
        let outcome = mvote_core::rules::random_dictatorship(&e);
        let b = rng.gen_range(0..m);
        let res = mvote_core::distortion::worst_case_ratio(&e, &outcome, b, &alpha);
        match res.status {
            mvote_core::distortion::DistortionStatus::Bounded => {
                let w = res.witness.expect("bounded results carry a witness");
                assert!(w.consistent_with(&e).unwrap());
                assert!(w.is_alpha_decisive(&e, &alpha).unwrap());
                let ratio = w.expected_social_cost(&outcome) / w.social_cost(b);
                assert_eq!(Some(ratio), res.value);
            }
            mvote_core::distortion::DistortionStatus::Unbounded => {
                let w = res.witness.expect("unbounded results carry a witness");
                assert!(w.social_cost(b).is_zero());
                assert!(w.expected_social_cost(&outcome).is_one());
            }
            mvote_core::distortion::DistortionStatus::Degenerate => {
                assert!(res.value.as_ref().unwrap().is_one());
            }
        }
    }
}

#[test]
fn decisiveness_bound_on_the_equal_plurality_instance() {
    // m = 3 at full generality (alpha = 1): the uniform lottery realizes
    // ratio 7/3 on the bundled metric, and the closed-form bound from the
    // plurality-score inequality dominates it.
    use mvote_core::construction::{construct, Params};
    use mvote_core::distortion::plurality_ratio_bound;
    use mvote_core::rules::Lottery;
    use num::One;
    let alpha = Rat::one();
    let inst = construct(
        "thm5-plurality",
        &Params {
            alpha: alpha.clone(),
            m: Some(3),
            k: None,
        },
    )
    .unwrap();
    let d = inst.primary_metric();
    let lottery = Lottery::uniform(3);
    let realized = d.expected_social_cost(&lottery) / d.social_cost(0);
    assert_eq!(realized, rat(7, 3));
    let bound = plurality_ratio_bound(&d, &inst.election, &lottery, &alpha, 0).unwrap();
    assert!(bound >= realized);
}

#[test]
fn uniform_matching_winner_defeats_proportionally() {
    // The uniform-weights rule guarantees |A(a,S)|/m >= |S|/n for all S;
    // spot-check via the subset oracle on small elections.
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=4);
        let e = random_election_with(&mut rng, n, m);
        let report = mvote_core::rules::uniform_matching(&e).unwrap();
        let g = DominationGraph::build(
            &e,
            report.chosen,
            WeightVector::uniform(n),
            WeightVector::uniform(m),
        )
        .unwrap();
        assert!(g.brute_force_hall().unwrap().is_matchable());
    }
}
