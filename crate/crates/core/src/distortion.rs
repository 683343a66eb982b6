//! Worst-case social-cost ratios over all consistent, decisive metrics,
//! computed exactly by linear programming.
//!
//! Variables are the distances for voter-candidate and candidate-candidate
//! pairs. Voter-voter distances never appear in the objective or in the
//! consistency/decisiveness constraints, and any feasible assignment on
//! the kept pairs extends to a full pseudometric via
//! `d(v,v') = min_c d(v,c) + d(c,v')`, so those variables are dropped from
//! the program and the witness is completed afterwards. Consistency uses
//! only adjacent-rank pairs per voter; transitivity supplies the rest.
//!
//! The program optimizes over the closed cone of pseudometrics (zero
//! distances between distinct points allowed), which is where the
//! supremum in the distortion definition is attained.

use crate::election::Election;
use crate::metric::MetricSpace;
use crate::parallel;
use crate::ratio::{format_rat, rat_usize, Rat};
use crate::rules::Lottery;
use crate::simplex::{self, Constraint, LinearProgram, LpOutcome, Rel};
use num::{One, Signed, Zero};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistortionStatus {
    Bounded,
    Unbounded,
    Degenerate,
}

/// Result of a worst-case ratio computation against one reference
/// candidate (or the max over references).
#[derive(Debug, Clone)]
pub struct DistortionResult {
    pub status: DistortionStatus,
    /// Max ratio for `Bounded`; the conventional 1 for `Degenerate`
    /// (numerator and denominator both forced to zero); `None` when
    /// unbounded.
    pub value: Option<Rat>,
    /// Reference (denominator) candidate; for an aggregated result, the
    /// argmax reference.
    pub reference: usize,
    /// Metric achieving the value (bounded), or one with zero reference
    /// cost and unit outcome cost (unbounded).
    pub witness: Option<MetricSpace>,
}

impl DistortionResult {
    pub fn status_str(&self) -> &'static str {
        match self.status {
            DistortionStatus::Bounded => "bounded",
            DistortionStatus::Unbounded => "unbounded",
            DistortionStatus::Degenerate => "degenerate",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "status": self.status_str(),
            "value": self.value.as_ref().map(format_rat),
            "reference": self.reference,
            "witness_metric": self.witness.as_ref().map(|w| {
                w.matrix()
                    .iter()
                    .map(|row| row.iter().map(format_rat).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            }),
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PreconditionError {
    #[error("metric/election mismatch: {0}")]
    Metric(String),
    #[error("candidate {candidate} is not optimal: SC({candidate}) > SC({better})")]
    NotOptimal { candidate: usize, better: usize },
    #[error("weight w must lie in (0, 1], got {0}")]
    BadWeight(String),
    #[error("vector entries must sum to n and lie in [0, n/w)")]
    BadVector,
}

/// Folded-variable LP over the metric cone for one election and one
/// decisiveness parameter.
pub struct LpModel {
    n: usize,
    m: usize,
    pub num_vars: usize,
    base: Vec<Constraint>,
}

impl LpModel {
    pub fn build(e: &Election, alpha: &Rat) -> LpModel {
        let n = e.voters();
        let m = e.candidates();
        let num_vars = n * m + m * (m - 1) / 2;
        let mut base = Vec::new();
        let model = LpModel {
            n,
            m,
            num_vars,
            base: Vec::new(),
        };
        // Triangle inequalities: triples with one voter and two candidates,
        // and pure candidate triples.
        for i in 0..n {
            for a in 0..m {
                for b in a + 1..m {
                    let (ia, ib, ab) = (model.vc(i, a), model.vc(i, b), model.cc(a, b));
                    base.push(tri(ia, ab, ib));
                    base.push(tri(ib, ab, ia));
                    base.push(tri(ia, ib, ab));
                }
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let (ab, bc, ac) = (model.cc(a, b), model.cc(b, c), model.cc(a, c));
                    base.push(tri(ab, bc, ac));
                    base.push(tri(ac, bc, ab));
                    base.push(tri(ab, ac, bc));
                }
            }
        }
        // Ranking consistency on adjacent pairs.
        for i in 0..n {
            let r = e.ranking(i);
            for w in r.windows(2) {
                base.push(Constraint {
                    coeffs: vec![
                        (model.vc(i, w[1]), Rat::one()),
                        (model.vc(i, w[0]), -Rat::one()),
                    ],
                    rel: Rel::Ge,
                    rhs: Rat::zero(),
                });
            }
        }
        // Decisiveness: d(i, top) <= alpha * d(i, c).
        for i in 0..n {
            let top = e.top_choice(i);
            for c in 0..m {
                if c != top {
                    base.push(Constraint {
                        coeffs: vec![
                            (model.vc(i, c), alpha.clone()),
                            (model.vc(i, top), -Rat::one()),
                        ],
                        rel: Rel::Ge,
                        rhs: Rat::zero(),
                    });
                }
            }
        }
        LpModel { base, ..model }
    }

    fn vc(&self, i: usize, c: usize) -> usize {
        i * self.m + c
    }

    /// Folded candidate-pair variable, `a != b`.
    fn cc(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        // Offset of pair (a,b) in the upper-triangle enumeration.
        self.n * self.m + a * self.m - a * (a + 1) / 2 + (b - a - 1)
    }

    fn sc_coeffs(&self, c: usize) -> Vec<(usize, Rat)> {
        (0..self.n).map(|i| (self.vc(i, c), Rat::one())).collect()
    }

    fn expected_sc_coeffs(&self, outcome: &Lottery) -> Vec<(usize, Rat)> {
        let mut coeffs = Vec::new();
        for c in 0..self.m {
            let p = outcome.probability(c);
            if !p.is_zero() {
                for i in 0..self.n {
                    coeffs.push((self.vc(i, c), p.clone()));
                }
            }
        }
        coeffs
    }

    /// Rebuilds a full pseudometric from an LP point, completing the
    /// dropped voter-voter distances through the cheapest candidate.
    fn complete_metric(&self, point: &[Rat]) -> MetricSpace {
        let size = self.n + self.m;
        let mut d = vec![vec![Rat::zero(); size]; size];
        for i in 0..self.n {
            for c in 0..self.m {
                let v = point[self.vc(i, c)].clone();
                d[i][self.n + c] = v.clone();
                d[self.n + c][i] = v;
            }
        }
        for a in 0..self.m {
            for b in a + 1..self.m {
                let v = point[self.cc(a, b)].clone();
                d[self.n + a][self.n + b] = v.clone();
                d[self.n + b][self.n + a] = v;
            }
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                let v = (0..self.m)
                    .map(|c| &d[i][self.n + c] + &d[j][self.n + c])
                    .min()
                    .unwrap();
                d[i][j] = v.clone();
                d[j][i] = v;
            }
        }
        MetricSpace::validate(self.n, self.m, d)
            .expect("completed LP point is always a pseudometric")
    }
}

fn tri(x: usize, y: usize, z: usize) -> Constraint {
    // d(x) + d(y) >= d(z)
    Constraint {
        coeffs: vec![(x, Rat::one()), (y, Rat::one()), (z, -Rat::one())],
        rel: Rel::Ge,
        rhs: Rat::zero(),
    }
}

/// Supremum of `E[SC(outcome)] / SC(reference)` over all metrics in the
/// consistency/decisiveness cone.
///
/// First checks feasibility of `SC(reference) = 0, E[SC(outcome)] = 1`
/// (unbounded ratio); otherwise maximizes `E[SC(outcome)]` subject to
/// `SC(reference) = 1`. If that normalization is itself infeasible, every
/// admissible metric has both quantities zero and the result is flagged
/// degenerate with conventional value 1.
pub fn worst_case_ratio(
    e: &Election,
    outcome: &Lottery,
    reference: usize,
    alpha: &Rat,
) -> DistortionResult {
    worst_case_ratio_scaled(e, outcome, reference, alpha, &Rat::one())
}

/// Same as [`worst_case_ratio`] with the normalization `SC(reference) =
/// lambda`; the reported ratio is invariant in `lambda`, which exists to
/// make that invariance testable.
pub fn worst_case_ratio_scaled(
    e: &Election,
    outcome: &Lottery,
    reference: usize,
    alpha: &Rat,
    lambda: &Rat,
) -> DistortionResult {
    assert!(
        reference < e.candidates(),
        "reference candidate out of range"
    );
    assert_eq!(outcome.len(), e.candidates(), "lottery dimension mismatch");
    assert!(lambda.is_positive());
    let model = LpModel::build(e, alpha);

    // Phase 1: unboundedness check.
    let mut phase1 = model.base.clone();
    phase1.push(Constraint {
        coeffs: model.sc_coeffs(reference),
        rel: Rel::Eq,
        rhs: Rat::zero(),
    });
    phase1.push(Constraint {
        coeffs: model.expected_sc_coeffs(outcome),
        rel: Rel::Eq,
        rhs: Rat::one(),
    });
    let feasibility = LinearProgram {
        num_vars: model.num_vars,
        objective: vec![],
        constraints: phase1,
    };
    if let LpOutcome::Optimal { point, .. } = simplex::solve(&feasibility) {
        return DistortionResult {
            status: DistortionStatus::Unbounded,
            value: None,
            reference,
            witness: Some(model.complete_metric(&point)),
        };
    }

    // Phase 2: maximize the outcome cost at normalized reference cost.
    let mut phase2 = model.base.clone();
    phase2.push(Constraint {
        coeffs: model.sc_coeffs(reference),
        rel: Rel::Eq,
        rhs: lambda.clone(),
    });
    let program = LinearProgram {
        num_vars: model.num_vars,
        objective: model.expected_sc_coeffs(outcome),
        constraints: phase2,
    };
    match simplex::solve(&program) {
        LpOutcome::Optimal { value, point } => DistortionResult {
            status: DistortionStatus::Bounded,
            value: Some(value / lambda),
            reference,
            witness: Some(model.complete_metric(&point)),
        },
        LpOutcome::Infeasible => DistortionResult {
            status: DistortionStatus::Degenerate,
            value: Some(Rat::one()),
            reference,
            witness: None,
        },
        LpOutcome::Unbounded => {
            unreachable!("phase 2 cannot be unbounded once phase 1 is infeasible")
        }
    }
}

/// Deterministic feasible metric with prescribed exact social costs, if
/// one exists in the consistency/decisiveness cone. Used by instance
/// generators that must realize prescribed cost values.
pub(crate) fn feasible_metric_with_costs(
    e: &Election,
    alpha: &Rat,
    targets: &[(usize, Rat)],
) -> Option<MetricSpace> {
    let model = LpModel::build(e, alpha);
    let mut constraints = model.base.clone();
    for (c, sc) in targets {
        constraints.push(Constraint {
            coeffs: model.sc_coeffs(*c),
            rel: Rel::Eq,
            rhs: sc.clone(),
        });
    }
    let program = LinearProgram {
        num_vars: model.num_vars,
        objective: vec![],
        constraints,
    };
    match simplex::solve(&program) {
        LpOutcome::Optimal { point, .. } => Some(model.complete_metric(&point)),
        _ => None,
    }
}

/// Worst case over all reference candidates; reports the argmax reference.
pub fn distortion_of_outcome(e: &Election, outcome: &Lottery, alpha: &Rat) -> DistortionResult {
    let per_ref =
        parallel::par_map_range(e.candidates(), |b| worst_case_ratio(e, outcome, b, alpha));
    let mut best: Option<DistortionResult> = None;
    for r in per_ref {
        match r.status {
            DistortionStatus::Unbounded => return r,
            _ => {
                let keep = match &best {
                    None => true,
                    Some(b) => r.value.as_ref().unwrap() > b.value.as_ref().unwrap(),
                };
                if keep {
                    best = Some(r);
                }
            }
        }
    }
    best.expect("m >= 1 guarantees at least one reference")
}

/// The ratio bound obtained from the known decisiveness inequality:
/// `1 + (1+a) * sum_c Pr[c] (n - 2/(1+a) plu(c)) d(c, c*) /
///  sum_c plu(c) d(c, c*)`.
/// `None` when the denominator vanishes (bound not applicable).
pub fn plurality_ratio_bound(
    d: &MetricSpace,
    e: &Election,
    outcome: &Lottery,
    alpha: &Rat,
    c_star: usize,
) -> Option<Rat> {
    assert_eq!(d.voters(), e.voters());
    assert_eq!(d.candidates(), e.candidates());
    let n = rat_usize(e.voters());
    let shrink = rat_usize(2) / (Rat::one() + alpha);
    let plu: Vec<Rat> = e.plurality_scores().into_iter().map(rat_usize).collect();
    let denominator: Rat = (0..e.candidates())
        .map(|c| &plu[c] * d.dist_cc(c, c_star))
        .sum();
    if denominator.is_zero() {
        return None;
    }
    let numerator: Rat = (0..e.candidates())
        .map(|c| outcome.probability(c) * (&n - &shrink * &plu[c]) * d.dist_cc(c, c_star))
        .sum();
    Some(Rat::one() + (Rat::one() + alpha) * numerator / denominator)
}

/// Checks `SC(a) <= SC(c*) + (n - 2/(1+a) plu(a)) * d(a, c*)` exactly,
/// given a consistent `alpha`-decisive metric with `c*` optimal.
pub fn check_plurality_slack(
    d: &MetricSpace,
    e: &Election,
    a: usize,
    c_star: usize,
    alpha: &Rat,
) -> Result<bool, PreconditionError> {
    if !d
        .is_alpha_decisive(e, alpha)
        .map_err(|err| PreconditionError::Metric(err.to_string()))?
    {
        return Err(PreconditionError::Metric(format!(
            "metric is not {}-decisive",
            format_rat(alpha)
        )));
    }
    let sc_star = d.social_cost(c_star);
    for c in 0..e.candidates() {
        if d.social_cost(c) < sc_star {
            return Err(PreconditionError::NotOptimal {
                candidate: c_star,
                better: c,
            });
        }
    }
    let n = rat_usize(e.voters());
    let shrink = rat_usize(2) / (Rat::one() + alpha);
    let slack = (&n - shrink * rat_usize(e.plurality_score(a))) * d.dist_cc(a, c_star);
    Ok(d.social_cost(a) <= sc_star + slack)
}

/// Checks `sum_i x_i / (n - w x_i) >= m / (m - w)` for `w` in `(0,1]`,
/// `x_i` in `[0, n/w)` summing to `n`.
pub fn check_summation_bound(xs: &[Rat], w: &Rat, n: &Rat) -> Result<bool, PreconditionError> {
    if !w.is_positive() || *w > Rat::one() {
        return Err(PreconditionError::BadWeight(format_rat(w)));
    }
    let cap = n / w;
    if xs.iter().any(|x| x.is_negative() || *x >= cap) || &xs.iter().sum::<Rat>() != n {
        return Err(PreconditionError::BadVector);
    }
    let m = rat_usize(xs.len());
    let lhs: Rat = xs.iter().map(|x| x / (n - w * x)).sum();
    Ok(lhs >= &m / (m.clone() - w))
}
