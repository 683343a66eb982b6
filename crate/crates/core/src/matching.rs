//! Domination, integral-domination, and separation graphs, together with
//! exact fractional/integral perfect-matching checks.
//!
//! The fractional check reduces to max-flow on the standard network
//! (source -> voter with capacity `p(i)`, candidate -> sink with capacity
//! `q(c)`, graph edges unbounded), with all rational capacities scaled to
//! integers by the common denominator so verdicts are exact. When no
//! matching exists, the source side of a minimum cut yields a voter set
//! `S` with `q(A(a,S)) < p(S)`.

use crate::election::{Election, WeightVector};
use crate::flow::FlowNetwork;
use crate::ratio::Rat;
use crate::sets::{CandidateSet, IdxSet, VoterSet};
use num::bigint::BigInt;
use num::{Integer, One, Zero};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("weight vector over {have} entries, expected {want}")]
    WeightLength { have: usize, want: usize },
    #[error("candidate index {0} out of range")]
    CandidateOutOfRange(usize),
    #[error("subset enumeration requires n <= {limit}, got n = {n}")]
    TooManyVoters { n: usize, limit: usize },
}

/// The `(p,q)`-domination graph of candidate `a`: bipartite voters x
/// candidates, edge `(i,c)` iff `a` weakly defeats `c` in vote `i`.
#[derive(Debug, Clone)]
pub struct DominationGraph<'e> {
    election: &'e Election,
    candidate: usize,
    p: WeightVector,
    q: WeightVector,
    /// `adjacency[i] = A(a, {i})`.
    adjacency: Vec<CandidateSet>,
}

/// Edge weights of a fractional perfect matching, indexed `[voter][candidate]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalMatching {
    pub weights: Vec<Vec<Rat>>,
}

/// Outcome of a matchability check. A positive verdict may carry the
/// matching that realizes it (the subset-enumeration oracle returns none);
/// a negative verdict always carries a Hall-violating voter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingCertificate {
    Matchable {
        matching: Option<FractionalMatching>,
    },
    NotMatchable {
        violating: VoterSet,
        p_weight: Rat,
        q_weight: Rat,
    },
}

impl MatchingCertificate {
    pub fn is_matchable(&self) -> bool {
        matches!(self, MatchingCertificate::Matchable { .. })
    }
}

impl<'e> DominationGraph<'e> {
    pub fn build(
        election: &'e Election,
        candidate: usize,
        p: WeightVector,
        q: WeightVector,
    ) -> Result<Self, MatchingError> {
        if candidate >= election.candidates() {
            return Err(MatchingError::CandidateOutOfRange(candidate));
        }
        if p.len() != election.voters() {
            return Err(MatchingError::WeightLength {
                have: p.len(),
                want: election.voters(),
            });
        }
        if q.len() != election.candidates() {
            return Err(MatchingError::WeightLength {
                have: q.len(),
                want: election.candidates(),
            });
        }
        let adjacency = (0..election.voters())
            .map(|i| {
                election.defeated_set(candidate, &IdxSet::from_indices(election.voters(), [i]))
            })
            .collect();
        Ok(DominationGraph {
            election,
            candidate,
            p,
            q,
            adjacency,
        })
    }

    pub fn candidate(&self) -> usize {
        self.candidate
    }

    pub fn election(&self) -> &Election {
        self.election
    }

    pub fn neighbors(&self, voter: usize) -> &CandidateSet {
        &self.adjacency[voter]
    }

    /// Neighborhood of a voter set: `A(a, S)`.
    pub fn neighborhood(&self, s: &VoterSet) -> CandidateSet {
        let mut out = IdxSet::empty(self.election.candidates());
        for i in s.iter() {
            out = out.union(&self.adjacency[i]);
        }
        out
    }

    /// Max-flow check for a fractional perfect matching, with an exact
    /// witness either way.
    pub fn check_fractional_matching(&self) -> MatchingCertificate {
        let n = self.election.voters();
        let m = self.election.candidates();
        // Common denominator of all weights; scaled capacities are integers.
        let mut scale = BigInt::one();
        for w in self.p.iter().chain(self.q.iter()) {
            scale = scale.lcm(w.denom());
        }
        let scaled = |w: &Rat| -> BigInt { w.numer() * (&scale / w.denom()) };
        // Safe finite stand-in for the unbounded voter->candidate edges.
        let infinite = &scale + BigInt::one();

        let source = 0;
        let voter = |i: usize| 1 + i;
        let cand = |c: usize| 1 + n + c;
        let sink = 1 + n + m;
        let mut net = FlowNetwork::new(n + m + 2);
        for i in 0..n {
            net.add_edge(source, voter(i), scaled(self.p.get(i)));
        }
        for c in 0..m {
            net.add_edge(cand(c), sink, scaled(self.q.get(c)));
        }
        let mut edge_handles = Vec::new();
        for i in 0..n {
            for c in self.adjacency[i].iter() {
                edge_handles.push((i, c, net.add_edge(voter(i), cand(c), infinite.clone())));
            }
        }
        let flow = net.max_flow(source, sink);
        if flow == scale {
            let mut weights = vec![vec![Rat::zero(); m]; n];
            for (i, c, handle) in edge_handles {
                weights[i][c] = Rat::new(net.flow_on(handle), scale.clone());
            }
            MatchingCertificate::Matchable {
                matching: Some(FractionalMatching { weights }),
            }
        } else {
            let side = net.residual_reachable(source);
            let violating = IdxSet::from_indices(n, (0..n).filter(|&i| side[voter(i)]));
            let p_weight = self.p.weight_of(&violating);
            let q_weight = self.q.weight_of(&self.neighborhood(&violating));
            debug_assert!(q_weight < p_weight);
            MatchingCertificate::NotMatchable {
                violating,
                p_weight,
                q_weight,
            }
        }
    }

    /// Subset-enumeration oracle for the Hall condition
    /// (`q(A(a,S)) >= p(S)` for all `S`). Exponential; guarded to n <= 20.
    pub fn brute_force_hall(&self) -> Result<MatchingCertificate, MatchingError> {
        let n = self.election.voters();
        const LIMIT: usize = 20;
        if n > LIMIT {
            return Err(MatchingError::TooManyVoters { n, limit: LIMIT });
        }
        for mask in 0u64..(1 << n) {
            let s = IdxSet::from_mask(n, mask);
            let p_weight = self.p.weight_of(&s);
            let q_weight = self.q.weight_of(&self.neighborhood(&s));
            if q_weight < p_weight {
                return Ok(MatchingCertificate::NotMatchable {
                    violating: s,
                    p_weight,
                    q_weight,
                });
            }
        }
        Ok(MatchingCertificate::Matchable { matching: None })
    }

    /// Debug export; not a stability-guaranteed format.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": "domination",
            "candidate": self.candidate,
            "p": self.p.iter().map(crate::ratio::format_rat).collect::<Vec<_>>(),
            "q": self.q.iter().map(crate::ratio::format_rat).collect::<Vec<_>>(),
            "adjacency": self.adjacency.iter()
                .map(|s| s.iter().collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

impl FractionalMatching {
    /// Both marginal constraints, exactly, and support inside the graph.
    pub fn validates(&self, g: &DominationGraph) -> bool {
        let n = g.election.voters();
        let m = g.election.candidates();
        if self.weights.len() != n || self.weights.iter().any(|r| r.len() != m) {
            return false;
        }
        for i in 0..n {
            for c in 0..m {
                if !self.weights[i][c].is_zero() && !g.adjacency[i].contains(c) {
                    return false;
                }
            }
        }
        (0..n).all(|i| &self.weights[i].iter().sum::<Rat>() == g.p.get(i))
            && (0..m).all(|c| &(0..n).map(|i| &self.weights[i][c]).sum::<Rat>() == g.q.get(c))
    }
}

/// Bipartite voters x voters adjacency, shared by the integral domination
/// graph and the separation graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterBipartite {
    /// `adjacency[i]` = right-side voters adjacent to left voter `i`.
    pub adjacency: Vec<VoterSet>,
}

impl VoterBipartite {
    pub fn size(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    /// Deterministic augmenting-path search (left vertices in increasing
    /// order); returns `M` with `M[i]` = right match of left vertex `i`.
    pub fn perfect_matching(&self) -> Option<Vec<usize>> {
        let n = self.size();
        let mut match_right: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let mut visited = vec![false; n];
            if !self.augment(i, &mut visited, &mut match_right) {
                return None;
            }
        }
        let mut match_left = vec![usize::MAX; n];
        for (j, owner) in match_right.iter().enumerate() {
            match_left[(*owner)?] = j;
        }
        Some(match_left)
    }

    fn augment(&self, i: usize, visited: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for j in self.adjacency[i].iter() {
            if visited[j] {
                continue;
            }
            visited[j] = true;
            if match_right[j].is_none()
                || self.augment(match_right[j].unwrap(), visited, match_right)
            {
                match_right[j] = Some(i);
                return true;
            }
        }
        false
    }

    pub fn to_json(&self, kind: &str) -> serde_json::Value {
        json!({
            "kind": kind,
            "adjacency": self.adjacency.iter()
                .map(|s| s.iter().collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// Integral domination graph `G(a)`: edge `(i,j)` iff `a` weakly defeats
/// voter `j`'s top choice in vote `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralDominationGraph {
    pub candidate: usize,
    pub graph: VoterBipartite,
}

impl IntegralDominationGraph {
    pub fn build(e: &Election, a: usize) -> Self {
        assert!(a < e.candidates(), "candidate index {a} out of range");
        let n = e.voters();
        let adjacency = (0..n)
            .map(|i| {
                IdxSet::from_indices(
                    n,
                    (0..n).filter(|&j| e.weakly_defeats(i, a, e.top_choice(j))),
                )
            })
            .collect();
        IntegralDominationGraph {
            candidate: a,
            graph: VoterBipartite { adjacency },
        }
    }

    pub fn perfect_matching(&self) -> Option<Vec<usize>> {
        self.graph.perfect_matching()
    }
}

/// Separation graph `G(a,b)`: edge `(i,j)` iff some candidate `c` has
/// `a` weakly defeating `c` in vote `i` and `c` weakly defeating `b` in
/// vote `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationGraph {
    pub a: usize,
    pub b: usize,
    pub graph: VoterBipartite,
}

impl SeparationGraph {
    pub fn build(e: &Election, a: usize, b: usize) -> Self {
        let m = e.candidates();
        assert!(a < m && b < m, "candidate index out of range");
        let n = e.voters();
        // below[i] = candidates a weakly defeats in vote i;
        // above[j] = candidates weakly defeating b in vote j.
        let below: Vec<CandidateSet> = (0..n)
            .map(|i| IdxSet::from_indices(m, e.ranking(i)[e.rank_of(i, a)..].iter().copied()))
            .collect();
        let above: Vec<CandidateSet> = (0..n)
            .map(|j| IdxSet::from_indices(m, e.ranking(j)[..=e.rank_of(j, b)].iter().copied()))
            .collect();
        let adjacency = (0..n)
            .map(|i| IdxSet::from_indices(n, (0..n).filter(|&j| below[i].intersects(&above[j]))))
            .collect();
        SeparationGraph {
            a,
            b,
            graph: VoterBipartite { adjacency },
        }
    }

    pub fn perfect_matching(&self) -> Option<Vec<usize>> {
        self.graph.perfect_matching()
    }
}

/// True iff `G(a,b)` has a perfect matching for every `b`.
pub fn in_matching_uncovered_set(e: &Election, a: usize) -> bool {
    (0..e.candidates()).all(|b| SeparationGraph::build(e, a, b).perfect_matching().is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;

    fn running_example() -> Election {
        Election::new(vec![
            vec![0, 1, 2],
            vec![2, 0, 1],
            vec![0, 2, 1],
            vec![1, 0, 2],
        ])
        .unwrap()
    }

    fn example_graph(e: &Election, a: usize) -> DominationGraph<'_> {
        DominationGraph::build(
            e,
            a,
            WeightVector::uniform(e.voters()),
            WeightVector::plurality(e),
        )
        .unwrap()
    }

    #[test]
    fn domination_adjacency_matches_definition() {
        let e = running_example();
        let gb = example_graph(&e, 1);
        // Voter at index 1 (c > a > b) weakly defeats only b itself.
        assert_eq!(gb.neighbors(1).iter().collect::<Vec<_>>(), vec![1]);
        // Voter at index 3 (b > a > c): all three.
        assert_eq!(gb.neighbors(3).len(), 3);

        let ga = example_graph(&e, 0);
        // Voters 0 and 2 rank a first: adjacent to everything.
        assert_eq!(ga.neighbors(0).len(), 3);
        assert_eq!(ga.neighbors(2).len(), 3);
        assert_eq!(ga.neighbors(1).iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(ga.neighbors(3).iter().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn unanimous_top_graph_is_complete() {
        let e = Election::new(vec![vec![0, 1]; 3]).unwrap();
        let g = example_graph(&e, 0);
        assert!((0..3).all(|i| g.neighbors(i).len() == 2));
    }

    #[test]
    fn example_b_not_matchable_with_hall_witness() {
        let e = running_example();
        let cert = example_graph(&e, 1).check_fractional_matching();
        match cert {
            MatchingCertificate::NotMatchable {
                violating,
                p_weight,
                q_weight,
            } => {
                // S = {voters 2,3} in 1-indexed notation.
                assert_eq!(violating.iter().collect::<Vec<_>>(), vec![1, 2]);
                assert_eq!(p_weight, rat(1, 2));
                assert_eq!(q_weight, rat(1, 4));
            }
            _ => panic!("b must not be matchable"),
        }
    }

    #[test]
    fn example_a_matchable_with_valid_witness() {
        let e = running_example();
        let g = example_graph(&e, 0);
        match g.check_fractional_matching() {
            MatchingCertificate::Matchable { matching: Some(w) } => {
                assert!(w.validates(&g));
            }
            _ => panic!("a must be matchable"),
        }
    }

    #[test]
    fn single_voter_single_candidate_matchable() {
        let e = Election::new(vec![vec![0]]).unwrap();
        let g = example_graph(&e, 0);
        match g.check_fractional_matching() {
            MatchingCertificate::Matchable { matching: Some(w) } => {
                assert_eq!(w.weights[0][0], rat(1, 1));
            }
            _ => panic!("must be matchable"),
        }
    }

    #[test]
    fn brute_force_agrees_on_example() {
        let e = running_example();
        assert!(!example_graph(&e, 1)
            .brute_force_hall()
            .unwrap()
            .is_matchable());
        assert!(example_graph(&e, 0)
            .brute_force_hall()
            .unwrap()
            .is_matchable());
        assert!(example_graph(&e, 2)
            .check_fractional_matching()
            .is_matchable()
            .eq(&example_graph(&e, 2)
                .brute_force_hall()
                .unwrap()
                .is_matchable()));
    }

    #[test]
    fn brute_force_guard() {
        let e = Election::new(vec![vec![0]; 21]).unwrap();
        let g = example_graph(&e, 0);
        assert!(matches!(
            g.brute_force_hall(),
            Err(MatchingError::TooManyVoters { .. })
        ));
    }

    #[test]
    fn integral_graph_example_missing_edges() {
        let e = running_example();
        let g = IntegralDominationGraph::build(&e, 0);
        // Exactly (2,2) and (4,4) missing in 1-indexed notation.
        let missing: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| !g.graph.has_edge(i, j))
            .collect();
        assert_eq!(missing, vec![(1, 1), (3, 3)]);
        let matching = g.perfect_matching().expect("G(a) has a perfect matching");
        for (i, j) in matching.iter().enumerate() {
            assert!(g.graph.has_edge(i, *j));
        }
    }

    #[test]
    fn integral_graph_complete_when_unanimous() {
        let e = Election::new(vec![vec![1, 0]; 4]).unwrap();
        let g = IntegralDominationGraph::build(&e, 1);
        assert!((0..4).all(|i| g.graph.adjacency[i].len() == 4));
    }

    #[test]
    fn integral_graph_example_b_row() {
        let e = running_example();
        let g = IntegralDominationGraph::build(&e, 1);
        // Voter 2 (1-indexed; ranks c > a > b) relates only to voters whose
        // top is b, i.e. voter 4.
        assert_eq!(g.graph.adjacency[1].iter().collect::<Vec<_>>(), vec![3]);
        assert!(g.perfect_matching().is_none());
    }

    #[test]
    fn identity_adjacency_matches_identically() {
        let adjacency = (0..5).map(|i| IdxSet::from_indices(5, [i])).collect();
        let g = VoterBipartite { adjacency };
        assert_eq!(g.perfect_matching().unwrap(), vec![0, 1, 2, 3, 4]);
    }

    fn prop2_election() -> Election {
        // a=0, b=1, c=2, d=3, e=4
        Election::new(vec![
            vec![1, 4, 2, 0, 3],
            vec![2, 3, 1, 0, 4],
            vec![3, 0, 2, 1, 4],
        ])
        .unwrap()
    }

    #[test]
    fn separation_graph_edges() {
        let e = prop2_election();
        let g = SeparationGraph::build(&e, 0, 1);
        let edges: Vec<(usize, usize)> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| g.graph.has_edge(i, j))
            .collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2), (2, 0), (2, 1), (2, 2)]);
        assert!(g.perfect_matching().is_some());

        let gae = SeparationGraph::build(&e, 0, 4);
        assert!(gae.perfect_matching().is_some());
    }

    #[test]
    fn separation_contains_integral_graph() {
        let e = running_example();
        for a in 0..3 {
            let ig = IntegralDominationGraph::build(&e, a);
            for b in 0..3 {
                let sg = SeparationGraph::build(&e, a, b);
                for i in 0..4 {
                    assert!(ig.graph.adjacency[i].is_subset(&sg.graph.adjacency[i]));
                }
            }
        }
    }

    #[test]
    fn matching_uncovered_set_examples() {
        let e = prop2_election();
        assert!(in_matching_uncovered_set(&e, 0));
        // Sole candidate is trivially uncovered.
        let solo = Election::new(vec![vec![0]; 2]).unwrap();
        assert!(in_matching_uncovered_set(&solo, 0));
        // Complete separation graph when a is the unanimous top.
        let unan = Election::new(vec![vec![0, 1]; 2]).unwrap();
        let g = SeparationGraph::build(&unan, 0, 0);
        assert!((0..2).all(|i| g.graph.adjacency[i].len() == 2));
    }

    #[test]
    fn graph_json_exports() {
        let e = running_example();
        let g = example_graph(&e, 1).to_json();
        assert_eq!(g["kind"], "domination");
        assert_eq!(g["candidate"], 1);
        assert_eq!(g["adjacency"][1], serde_json::json!([1]));
        let ig = IntegralDominationGraph::build(&e, 0);
        let j = ig.graph.to_json("integral-domination");
        assert_eq!(j["adjacency"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn prop2_integral_matchability_pattern() {
        let e = prop2_election();
        assert!(IntegralDominationGraph::build(&e, 0)
            .perfect_matching()
            .is_none());
        assert!(IntegralDominationGraph::build(&e, 2)
            .perfect_matching()
            .is_some());
        assert!(IntegralDominationGraph::build(&e, 3)
            .perfect_matching()
            .is_some());
    }
}
