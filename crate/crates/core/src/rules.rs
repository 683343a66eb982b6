//! Social choice rules: domination-graph matching rules, randomized
//! plurality-score rules, and the Condorcet/Copeland baselines.
//!
//! Stable rule names (used by the CLI): `plurality-matching`,
//! `uniform-matching`, `matching:<p-file>:<q-file>`, `random-dictatorship`,
//! `smart-dictatorship`, `gps`, `condorcet`, `copeland`.
//!
//! Randomized rules return lotteries, never samples; distortion is a
//! property of the distribution, and sampling lives in the CLI.

use crate::election::{Election, WeightVector};
use crate::matching::{DominationGraph, MatchingCertificate};
use crate::ratio::{format_rat, rat_usize, Rat};
use crate::sets::{CandidateSet, IdxSet};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("internal invariant violated: no candidate admits a fractional perfect matching")]
    EmptyMatchableSet,
    #[error("rule requires exactly 2 candidates, election has {0}")]
    NotTwoCandidates(usize),
    #[error("alpha must lie in [0,1], got {0}")]
    AlphaOutOfRange(String),
    #[error(transparent)]
    Matching(#[from] crate::matching::MatchingError),
}

/// Probability distribution over candidates, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lottery {
    probs: Vec<Rat>,
}

impl Lottery {
    pub fn new(probs: Vec<Rat>) -> Result<Self, String> {
        if probs.iter().any(|p| p.is_negative()) {
            return Err("negative probability".to_string());
        }
        let sum: Rat = probs.iter().sum();
        if !sum.is_one() {
            return Err(format!("probabilities sum to {}", format_rat(&sum)));
        }
        Ok(Lottery { probs })
    }

    pub fn degenerate(m: usize, c: usize) -> Self {
        assert!(c < m);
        let mut probs = vec![Rat::zero(); m];
        probs[c] = Rat::one();
        Lottery { probs }
    }

    pub fn uniform(m: usize) -> Self {
        assert!(m > 0);
        Lottery {
            probs: vec![Rat::new(1.into(), (m as i64).into()); m],
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probability(&self, c: usize) -> &Rat {
        &self.probs[c]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rat> {
        self.probs.iter()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.probs.len())
            .filter(|&c| self.probs[c].is_positive())
            .collect()
    }

    /// `Some(c)` when the lottery is a point mass on `c`.
    pub fn as_degenerate(&self) -> Option<usize> {
        let support = self.support();
        (support.len() == 1).then(|| support[0])
    }

    /// `c1:p1;c2:p2;...` over the support, probabilities as `p/q`.
    pub fn display_compact(&self) -> String {
        self.support()
            .iter()
            .map(|&c| format!("{c}:{}", format_rat(&self.probs[c])))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Draws a candidate using a uniform rational in [0,1).
    pub fn sample(&self, unit: &Rat) -> usize {
        let mut acc = Rat::zero();
        for (c, p) in self.probs.iter().enumerate() {
            acc += p;
            if *unit < acc {
                return c;
            }
        }
        self.probs.len() - 1
    }
}

/// Output of a matching rule: the chosen candidate, the full matchable
/// set, and one certificate per candidate.
#[derive(Debug, Clone)]
pub struct RuleReport {
    pub chosen: usize,
    pub matchable: CandidateSet,
    pub certificates: Vec<MatchingCertificate>,
}

impl RuleReport {
    pub fn lottery(&self, m: usize) -> Lottery {
        Lottery::degenerate(m, self.chosen)
    }
}

/// Generic matching rule: pick the lowest-index candidate whose
/// `(p,q)`-domination graph admits a fractional perfect matching. The
/// matchable set is guaranteed nonempty for any profile and weights;
/// an empty set is an implementation bug and is surfaced as an error.
///
/// The per-candidate checks are independent, but each one is microseconds
/// at realistic sizes; callers parallelize across elections instead.
pub fn matching_rule(
    e: &Election,
    p: &WeightVector,
    q: &WeightVector,
) -> Result<RuleReport, RuleError> {
    let certificates: Vec<MatchingCertificate> = (0..e.candidates())
        .map(|a| {
            DominationGraph::build(e, a, p.clone(), q.clone())
                .map(|g| g.check_fractional_matching())
        })
        .collect::<Result<_, _>>()?;
    let matchable = IdxSet::from_indices(
        e.candidates(),
        certificates
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_matchable())
            .map(|(a, _)| a),
    );
    let chosen = matchable
        .iter()
        .next()
        .ok_or(RuleError::EmptyMatchableSet)?;
    Ok(RuleReport {
        chosen,
        matchable,
        certificates,
    })
}

/// Matching rule with uniform voter weights and plurality candidate weights.
pub fn plurality_matching(e: &Election) -> Result<RuleReport, RuleError> {
    matching_rule(
        e,
        &WeightVector::uniform(e.voters()),
        &WeightVector::plurality(e),
    )
}

/// Matching rule with uniform weights on both sides.
pub fn uniform_matching(e: &Election) -> Result<RuleReport, RuleError> {
    matching_rule(
        e,
        &WeightVector::uniform(e.voters()),
        &WeightVector::uniform(e.candidates()),
    )
}

/// Picks the top choice of a uniformly random voter: `Pr[c] = plu(c)/n`.
pub fn random_dictatorship(e: &Election) -> Lottery {
    let n = rat_usize(e.voters());
    Lottery {
        probs: e
            .plurality_scores()
            .into_iter()
            .map(|s| rat_usize(s) / &n)
            .collect(),
    }
}

fn check_alpha(alpha: &Rat) -> Result<(), RuleError> {
    if alpha.is_negative() || *alpha > Rat::one() {
        return Err(RuleError::AlphaOutOfRange(format_rat(alpha)));
    }
    Ok(())
}

/// If some candidate has `plu(a) >= (1+alpha) * n/2`, the lowest-index such
/// candidate wins outright; otherwise candidates are drawn with probability
/// proportional to `plu(a) / (n - 2/(1+alpha) * plu(a))`.
pub fn smart_dictatorship(e: &Election, alpha: &Rat) -> Result<Lottery, RuleError> {
    check_alpha(alpha)?;
    let m = e.candidates();
    let n = rat_usize(e.voters());
    let plu: Vec<Rat> = e.plurality_scores().into_iter().map(rat_usize).collect();
    let threshold = (Rat::one() + alpha) * &n / rat_usize(2);
    if let Some(winner) = (0..m).find(|&c| plu[c] >= threshold) {
        return Ok(Lottery::degenerate(m, winner));
    }
    let shrink = rat_usize(2) / (Rat::one() + alpha);
    let raw: Vec<Rat> = plu
        .iter()
        .map(|s| {
            if s.is_zero() {
                Rat::zero()
            } else {
                s / (&n - &shrink * s)
            }
        })
        .collect();
    let total: Rat = raw.iter().sum();
    Ok(Lottery {
        probs: raw.into_iter().map(|r| r / &total).collect(),
    })
}

/// Two-candidate generalized proportional-to-squares:
/// `Pr[a]` proportional to `(1+alpha)*plu(a)^2 - (1-alpha)*plu(a)*plu(b)`.
/// Above the `(1+alpha)*n/2` plurality threshold the formula leaves `[0,1]`,
/// so that regime routes through the outright-winner branch.
pub fn generalized_proportional_to_squares(
    e: &Election,
    alpha: &Rat,
) -> Result<Lottery, RuleError> {
    check_alpha(alpha)?;
    if e.candidates() != 2 {
        return Err(RuleError::NotTwoCandidates(e.candidates()));
    }
    let n = rat_usize(e.voters());
    let scores = e.plurality_scores();
    let (pa, pb) = (rat_usize(scores[0]), rat_usize(scores[1]));
    let threshold = (Rat::one() + alpha) * &n / rat_usize(2);
    if pa >= threshold {
        return Ok(Lottery::degenerate(2, 0));
    }
    if pb >= threshold {
        return Ok(Lottery::degenerate(2, 1));
    }
    let one_plus = Rat::one() + alpha;
    let one_minus = Rat::one() - alpha;
    let cross = &pa * &pb;
    let num_a = &one_plus * &pa * &pa - &one_minus * &cross;
    let den = &one_plus * (&pa * &pa + &pb * &pb) - rat_usize(2) * &one_minus * &cross;
    let prob_a = num_a / den;
    let prob_b = Rat::one() - &prob_a;
    Ok(Lottery {
        probs: vec![prob_a, prob_b],
    })
}

/// Number of voters ranking `a` strictly above `b`.
pub fn prefer_count(e: &Election, a: usize, b: usize) -> usize {
    (0..e.voters())
        .filter(|&i| e.rank_of(i, a) < e.rank_of(i, b))
        .count()
}

/// A candidate weakly majority-preferred (`>= n/2`) to every other, lowest
/// index when several qualify; `None` when no Condorcet winner exists.
pub fn condorcet_winner(e: &Election) -> Option<usize> {
    let n = e.voters();
    (0..e.candidates())
        .find(|&a| (0..e.candidates()).all(|b| a == b || 2 * prefer_count(e, a, b) >= n))
}

/// Maximizes the number of pairwise strict-majority wins (ties score 0);
/// lowest index breaks rule-level ties.
pub fn copeland_winner(e: &Election) -> usize {
    let n = e.voters();
    let score = |a: usize| {
        (0..e.candidates())
            .filter(|&b| b != a && 2 * prefer_count(e, a, b) > n)
            .count()
    };
    (0..e.candidates())
        .max_by_key(|&a| (score(a), std::cmp::Reverse(a)))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rat_int};

    fn running_example() -> Election {
        Election::new(vec![
            vec![0, 1, 2],
            vec![2, 0, 1],
            vec![0, 2, 1],
            vec![1, 0, 2],
        ])
        .unwrap()
    }

    /// Seven voters, four candidates; a is the unique Condorcet winner but
    /// has zero plurality score.
    fn condorcet_vs_matching() -> Election {
        Election::new(vec![
            vec![1, 0, 2, 3],
            vec![1, 0, 2, 3],
            vec![2, 0, 1, 3],
            vec![2, 0, 1, 3],
            vec![3, 0, 1, 2],
            vec![3, 0, 1, 2],
            vec![1, 2, 3, 0],
        ])
        .unwrap()
    }

    #[test]
    fn plurality_matching_running_example() {
        let report = plurality_matching(&running_example()).unwrap();
        assert_eq!(report.chosen, 0);
        assert_eq!(report.matchable.iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn matching_rule_trivial_cases() {
        let solo = Election::new(vec![vec![0]; 3]).unwrap();
        assert_eq!(plurality_matching(&solo).unwrap().chosen, 0);

        let unan = Election::new(vec![vec![1, 0, 2]; 4]).unwrap();
        let q = WeightVector::new(vec![rat_int(0), rat_int(1), rat_int(0)]).unwrap();
        let report = matching_rule(&unan, &WeightVector::uniform(4), &q).unwrap();
        assert_eq!(report.chosen, 1);
    }

    #[test]
    fn uniform_matching_cases() {
        let solo = Election::new(vec![vec![0]]).unwrap();
        assert_eq!(uniform_matching(&solo).unwrap().chosen, 0);
        let unan = Election::new(vec![vec![0, 1]; 2]).unwrap();
        assert!(uniform_matching(&unan).unwrap().matchable.contains(0));
        // The winner's certificate satisfies |A(a,S)|/m >= |S|/n for all
        // S (checked by the subset oracle).
        let e = running_example();
        let report = uniform_matching(&e).unwrap();
        let g = DominationGraph::build(
            &e,
            report.chosen,
            WeightVector::uniform(4),
            WeightVector::uniform(3),
        )
        .unwrap();
        assert!(g.brute_force_hall().unwrap().is_matchable());
    }

    #[test]
    fn plurality_matching_never_picks_low_plurality_condorcet_winner() {
        let e = condorcet_vs_matching();
        assert_eq!(e.plurality_score(0), 0);
        assert_eq!(e.veto_score(0), 1);
        let report = plurality_matching(&e).unwrap();
        assert!(!report.matchable.contains(0));
    }

    #[test]
    fn random_dictatorship_running_example() {
        let lot = random_dictatorship(&running_example());
        assert_eq!(lot.probability(0), &rat(1, 2));
        assert_eq!(lot.probability(1), &rat(1, 4));
        assert_eq!(lot.probability(2), &rat(1, 4));
    }

    #[test]
    fn random_dictatorship_degenerate_and_uniform() {
        let unan = Election::new(vec![vec![1, 0]; 3]).unwrap();
        assert_eq!(random_dictatorship(&unan).as_degenerate(), Some(1));
        let distinct = Election::new(vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 0, 1]]).unwrap();
        assert_eq!(random_dictatorship(&distinct), Lottery::uniform(3));
    }

    #[test]
    fn smart_dictatorship_below_threshold() {
        // n=3, plu=(2,1), alpha=1: probabilities (4/5, 1/5).
        let e = Election::new(vec![vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        let lot = smart_dictatorship(&e, &rat_int(1)).unwrap();
        assert_eq!(lot.probability(0), &rat(4, 5));
        assert_eq!(lot.probability(1), &rat(1, 5));
    }

    #[test]
    fn smart_dictatorship_threshold_branch() {
        // n=3, plu=(2,1), alpha=0: 2 >= 3/2, degenerate on candidate 0.
        let e = Election::new(vec![vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        let lot = smart_dictatorship(&e, &rat_int(0)).unwrap();
        assert_eq!(lot.as_degenerate(), Some(0));
    }

    #[test]
    fn smart_dictatorship_symmetric_uniform() {
        // n=m with distinct tops, below threshold: uniform.
        let e = Election::new(vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 0, 1]]).unwrap();
        let lot = smart_dictatorship(&e, &rat(1, 2)).unwrap();
        assert_eq!(lot, Lottery::uniform(3));
        // Support excludes zero-plurality candidates.
        let e2 = Election::new(vec![vec![0, 1, 2], vec![0, 2, 1], vec![2, 1, 0]]).unwrap();
        let lot2 = smart_dictatorship(&e2, &rat_int(1)).unwrap();
        assert_eq!(lot2.support(), vec![0, 2]);
    }

    #[test]
    fn gps_matches_smart_dictatorship() {
        let e = Election::new(vec![vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        let gps = generalized_proportional_to_squares(&e, &rat_int(1)).unwrap();
        assert_eq!(gps.probability(0), &rat(4, 5));
        assert_eq!(gps, smart_dictatorship(&e, &rat_int(1)).unwrap());
    }

    #[test]
    fn gps_symmetry_and_degenerate() {
        // plu = (k, k): fair coin.
        let e = Election::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let lot = generalized_proportional_to_squares(&e, &rat(1, 3)).unwrap();
        assert_eq!(lot.probability(0), &rat(1, 2));
        // plu = (n, 0): degenerate on the first candidate.
        let unan = Election::new(vec![vec![0, 1]; 3]).unwrap();
        let lot = generalized_proportional_to_squares(&unan, &rat_int(1)).unwrap();
        assert_eq!(lot.as_degenerate(), Some(0));
        // m != 2 rejected.
        let three = Election::new(vec![vec![0, 1, 2]]).unwrap();
        assert!(generalized_proportional_to_squares(&three, &rat_int(1)).is_err());
    }

    #[test]
    fn condorcet_examples() {
        assert_eq!(condorcet_winner(&condorcet_vs_matching()), Some(0));
        // Two voters with opposite rankings: both qualify, lowest index wins.
        let split = Election::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(condorcet_winner(&split), Some(0));
        // Classic cycle has no winner.
        let cycle = Election::new(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(condorcet_winner(&cycle), None);
    }

    #[test]
    fn copeland_examples() {
        let unan = Election::new(vec![vec![2, 0, 1]; 3]).unwrap();
        assert_eq!(copeland_winner(&unan), 2);
        assert_eq!(copeland_winner(&condorcet_vs_matching()), 0);
        let solo = Election::new(vec![vec![0]]).unwrap();
        assert_eq!(copeland_winner(&solo), 0);
    }

    #[test]
    fn rules_are_anonymous() {
        let e = running_example();
        let perm = Election::new(vec![
            vec![1, 0, 2],
            vec![0, 2, 1],
            vec![2, 0, 1],
            vec![0, 1, 2],
        ])
        .unwrap();
        assert_eq!(
            plurality_matching(&e).unwrap().chosen,
            plurality_matching(&perm).unwrap().chosen
        );
        assert_eq!(random_dictatorship(&e), random_dictatorship(&perm));
        assert_eq!(
            smart_dictatorship(&e, &rat(1, 2)).unwrap(),
            smart_dictatorship(&perm, &rat(1, 2)).unwrap()
        );
        assert_eq!(condorcet_winner(&e), condorcet_winner(&perm));
        assert_eq!(copeland_winner(&e), copeland_winner(&perm));
    }

    #[test]
    fn lottery_sampling_is_consistent() {
        let lot = Lottery::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        assert_eq!(lot.sample(&rat(1, 3)), 0);
        assert_eq!(lot.sample(&rat(5, 8)), 1);
        assert_eq!(lot.sample(&rat(99, 100)), 2);
    }
}
