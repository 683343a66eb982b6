//! Rule-name parsing and application shared by `analyze`, `distortion`,
//! and `batch`.

use crate::Failure;
use mvote_core::election::{Election, WeightVector};
use mvote_core::ratio::{parse_rat, Rat};
use mvote_core::rules::{self, Lottery, RuleError, RuleReport};
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub enum RuleSpec {
    PluralityMatching,
    UniformMatching,
    MatchingFiles(PathBuf, PathBuf),
    RandomDictatorship,
    SmartDictatorship,
    Gps,
    Condorcet,
    Copeland,
}

impl RuleSpec {
    pub fn parse(name: &str) -> Result<Self, Failure> {
        match name {
            "plurality-matching" => Ok(RuleSpec::PluralityMatching),
            "uniform-matching" => Ok(RuleSpec::UniformMatching),
            "random-dictatorship" => Ok(RuleSpec::RandomDictatorship),
            "smart-dictatorship" => Ok(RuleSpec::SmartDictatorship),
            "gps" => Ok(RuleSpec::Gps),
            "condorcet" => Ok(RuleSpec::Condorcet),
            "copeland" => Ok(RuleSpec::Copeland),
            other => {
                if let Some(rest) = other.strip_prefix("matching:") {
                    let mut parts = rest.splitn(2, ':');
                    let p = parts.next().unwrap_or_default();
                    let q = parts.next().ok_or_else(|| {
                        Failure::usage("matching rule needs `matching:<p-file>:<q-file>`")
                    })?;
                    Ok(RuleSpec::MatchingFiles(PathBuf::from(p), PathBuf::from(q)))
                } else {
                    Err(Failure::usage(format!(
                        "unknown rule `{other}`; expected one of plurality-matching, \
                         uniform-matching, matching:<p-file>:<q-file>, random-dictatorship, \
                         smart-dictatorship, gps, condorcet, copeland"
                    )))
                }
            }
        }
    }

    pub fn needs_alpha(&self) -> bool {
        matches!(self, RuleSpec::SmartDictatorship | RuleSpec::Gps)
    }
}

/// What a rule produced: always a lottery (degenerate for deterministic
/// rules); matching rules also report the matchable set.
pub struct RuleOutcome {
    pub lottery: Lottery,
    pub winner: Option<usize>,
    pub report: Option<RuleReport>,
}

pub fn parse_alpha(raw: Option<&str>, needed_by: &str) -> Result<Rat, Failure> {
    let raw = raw.ok_or_else(|| Failure::usage(format!("--alpha is required by {needed_by}")))?;
    let alpha = parse_rat(raw).map_err(|e| Failure::usage(format!("bad --alpha: {e}")))?;
    if alpha < Rat::new(0.into(), 1.into()) || alpha > Rat::new(1.into(), 1.into()) {
        return Err(Failure::usage("--alpha must lie in [0, 1]"));
    }
    Ok(alpha)
}

fn lift_rule_error(e: RuleError) -> Failure {
    match e {
        RuleError::EmptyMatchableSet => Failure::internal(e.to_string()),
        other => Failure::usage(other.to_string()),
    }
}

pub fn apply(spec: &RuleSpec, e: &Election, alpha: Option<&Rat>) -> Result<RuleOutcome, Failure> {
    let m = e.candidates();
    let from_report = |report: RuleReport| {
        let lottery = report.lottery(m);
        RuleOutcome {
            lottery,
            winner: Some(report.chosen),
            report: Some(report),
        }
    };
    let need_alpha = || {
        alpha
            .cloned()
            .ok_or_else(|| Failure::usage("this rule needs --alpha"))
    };
    match spec {
        RuleSpec::PluralityMatching => Ok(from_report(
            rules::plurality_matching(e).map_err(lift_rule_error)?,
        )),
        RuleSpec::UniformMatching => Ok(from_report(
            rules::uniform_matching(e).map_err(lift_rule_error)?,
        )),
        RuleSpec::MatchingFiles(p_path, q_path) => {
            let p = load_weights(p_path, e.voters())?;
            let q = load_weights(q_path, e.candidates())?;
            Ok(from_report(
                rules::matching_rule(e, &p, &q).map_err(lift_rule_error)?,
            ))
        }
        RuleSpec::RandomDictatorship => {
            let lottery = rules::random_dictatorship(e);
            Ok(RuleOutcome {
                winner: lottery.as_degenerate(),
                lottery,
                report: None,
            })
        }
        RuleSpec::SmartDictatorship => {
            let lottery = rules::smart_dictatorship(e, &need_alpha()?).map_err(lift_rule_error)?;
            Ok(RuleOutcome {
                winner: lottery.as_degenerate(),
                lottery,
                report: None,
            })
        }
        RuleSpec::Gps => {
            let lottery = rules::generalized_proportional_to_squares(e, &need_alpha()?)
                .map_err(lift_rule_error)?;
            Ok(RuleOutcome {
                winner: lottery.as_degenerate(),
                lottery,
                report: None,
            })
        }
        RuleSpec::Condorcet => match rules::condorcet_winner(e) {
            Some(w) => Ok(RuleOutcome {
                lottery: Lottery::degenerate(m, w),
                winner: Some(w),
                report: None,
            }),
            None => Err(Failure::usage("no Condorcet winner exists")),
        },
        RuleSpec::Copeland => {
            let w = rules::copeland_winner(e);
            Ok(RuleOutcome {
                lottery: Lottery::degenerate(m, w),
                winner: Some(w),
                report: None,
            })
        }
    }
}

fn load_weights(path: &PathBuf, want: usize) -> Result<WeightVector, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let w = WeightVector::parse(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if w.len() != want {
        return Err(Failure::usage(format!(
            "{}: {} weights, expected {}",
            path.display(),
            w.len(),
            want
        )));
    }
    Ok(w)
}
