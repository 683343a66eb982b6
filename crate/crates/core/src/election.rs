//! Ordinal elections: strict preference profiles, scores, and the
//! per-voter weak-defeat relation that all matching machinery consumes.
//!
//! File format (UTF-8, `#` starts a comment, blank lines ignored):
//!
//! ```text
//! election
//! <n> <m>
//! <m space-separated candidate indices, most-preferred first>   (n lines)
//! ```

use crate::ratio::{format_rat, parse_rat, rat_usize, Rat};
use crate::sets::{CandidateSet, IdxSet, VoterSet};
use num::{One, Signed};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElectionError {
    #[error("missing `election` header")]
    MissingHeader,
    #[error("malformed header line `{0}`, expected `<n> <m>`")]
    MalformedHeader(String),
    #[error("expected {expected} ranking lines, found {found}")]
    WrongVoterCount { expected: usize, found: usize },
    #[error("ranking line {line} is not a permutation of 0..{m}: `{text}`")]
    NotAPermutation { line: usize, m: usize, text: String },
    #[error("empty election: need n >= 1 and m >= 1")]
    Empty,
    #[error("voter index {0} out of range")]
    VoterOutOfRange(usize),
    #[error("candidate index {0} out of range")]
    CandidateOutOfRange(usize),
    #[error("restriction to an empty voter or candidate set")]
    EmptyRestriction,
}

/// A strict preference profile: `rankings[i]` is voter `i`'s permutation of
/// `0..m`, most-preferred first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    n: usize,
    m: usize,
    rankings: Vec<Vec<usize>>,
    /// `position[i][c]` = rank of candidate `c` in voter `i`'s list (0 = top).
    position: Vec<Vec<usize>>,
}

impl Election {
    pub fn new(rankings: Vec<Vec<usize>>) -> Result<Self, ElectionError> {
        let n = rankings.len();
        if n == 0 {
            return Err(ElectionError::Empty);
        }
        let m = rankings[0].len();
        if m == 0 {
            return Err(ElectionError::Empty);
        }
        let mut position = Vec::with_capacity(n);
        for (i, ranking) in rankings.iter().enumerate() {
            position.push(Self::check_permutation(ranking, m).ok_or_else(|| {
                ElectionError::NotAPermutation {
                    line: i,
                    m,
                    text: format!("{ranking:?}"),
                }
            })?);
        }
        Ok(Election {
            n,
            m,
            rankings,
            position,
        })
    }

    fn check_permutation(ranking: &[usize], m: usize) -> Option<Vec<usize>> {
        if ranking.len() != m {
            return None;
        }
        let mut position = vec![usize::MAX; m];
        for (rank, &c) in ranking.iter().enumerate() {
            if c >= m || position[c] != usize::MAX {
                return None;
            }
            position[c] = rank;
        }
        Some(position)
    }

    pub fn parse(text: &str) -> Result<Self, ElectionError> {
        let mut lines = content_lines(text);
        match lines.next() {
            Some((_, "election")) => {}
            _ => return Err(ElectionError::MissingHeader),
        }
        let (_, header) = lines
            .next()
            .ok_or_else(|| ElectionError::MalformedHeader(String::new()))?;
        let mut toks = header.split_whitespace();
        let n: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ElectionError::MalformedHeader(header.to_string()))?;
        let m: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ElectionError::MalformedHeader(header.to_string()))?;
        if toks.next().is_some() {
            return Err(ElectionError::MalformedHeader(header.to_string()));
        }
        if n == 0 || m == 0 {
            return Err(ElectionError::Empty);
        }
        let mut rankings = Vec::with_capacity(n);
        for (lineno, line) in lines {
            let ranking: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| ElectionError::NotAPermutation {
                    line: lineno,
                    m,
                    text: line.to_string(),
                })?;
            if Self::check_permutation(&ranking, m).is_none() {
                return Err(ElectionError::NotAPermutation {
                    line: lineno,
                    m,
                    text: line.to_string(),
                });
            }
            rankings.push(ranking);
        }
        if rankings.len() != n {
            return Err(ElectionError::WrongVoterCount {
                expected: n,
                found: rankings.len(),
            });
        }
        Self::new(rankings)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("election\n{} {}\n", self.n, self.m);
        for ranking in &self.rankings {
            let toks: Vec<String> = ranking.iter().map(|c| c.to_string()).collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn voters(&self) -> usize {
        self.n
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    pub fn ranking(&self, i: usize) -> &[usize] {
        &self.rankings[i]
    }

    /// Rank position of candidate `c` in voter `i`'s list (0 = top).
    pub fn rank_of(&self, i: usize, c: usize) -> usize {
        self.position[i][c]
    }

    pub fn top_choice(&self, i: usize) -> usize {
        self.rankings[i][0]
    }

    /// Number of voters ranking `c` first.
    pub fn plurality_score(&self, c: usize) -> usize {
        assert!(c < self.m, "candidate index {c} out of range");
        self.rankings.iter().filter(|r| r[0] == c).count()
    }

    pub fn plurality_scores(&self) -> Vec<usize> {
        let mut scores = vec![0; self.m];
        for r in &self.rankings {
            scores[r[0]] += 1;
        }
        scores
    }

    /// Number of voters ranking `c` last.
    pub fn veto_score(&self, c: usize) -> usize {
        assert!(c < self.m, "candidate index {c} out of range");
        self.rankings.iter().filter(|r| r[self.m - 1] == c).count()
    }

    /// True iff `a = c` or voter `i` ranks `a` above `c`.
    pub fn weakly_defeats(&self, i: usize, a: usize, c: usize) -> bool {
        self.position[i][a] <= self.position[i][c]
    }

    /// Candidates that `a` weakly defeats in at least one vote of `s`.
    pub fn defeated_set(&self, a: usize, s: &VoterSet) -> CandidateSet {
        assert!(a < self.m, "candidate index {a} out of range");
        let mut out = IdxSet::empty(self.m);
        for i in s.iter() {
            let cut = self.position[i][a];
            for &c in &self.rankings[i][cut..] {
                out.insert(c);
            }
        }
        out
    }

    /// Restriction to voters in `s` and candidates in `d`, preserving the
    /// relative order inside each surviving ranking. Returns the restricted
    /// election plus `map` with `map[new_candidate] = old_candidate`.
    pub fn restrict(
        &self,
        s: &VoterSet,
        d: &CandidateSet,
    ) -> Result<(Election, Vec<usize>), ElectionError> {
        if s.is_empty() || d.is_empty() {
            return Err(ElectionError::EmptyRestriction);
        }
        let map: Vec<usize> = d.iter().collect();
        let mut back = vec![usize::MAX; self.m];
        for (new, &old) in map.iter().enumerate() {
            back[old] = new;
        }
        let rankings = s
            .iter()
            .map(|i| {
                self.rankings[i]
                    .iter()
                    .filter(|&&c| d.contains(c))
                    .map(|&c| back[c])
                    .collect()
            })
            .collect();
        Ok((Election::new(rankings)?, map))
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(no, line)| {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim();
        if line.is_empty() {
            None
        } else {
            Some((no + 1, line))
        }
    })
}

/// Nonnegative exact weights summing to 1, indexed by voters or candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    weights: Vec<Rat>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight {index} is negative")]
    Negative { index: usize },
    #[error("weights sum to {sum}, expected 1")]
    NotNormalized { sum: String },
    #[error("empty weight vector")]
    Empty,
    #[error("bad weight token: {0}")]
    BadToken(String),
}

impl WeightVector {
    pub fn new(weights: Vec<Rat>) -> Result<Self, WeightError> {
        if weights.is_empty() {
            return Err(WeightError::Empty);
        }
        for (index, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(WeightError::Negative { index });
            }
        }
        let sum: Rat = weights.iter().sum();
        if !sum.is_one() {
            return Err(WeightError::NotNormalized {
                sum: format_rat(&sum),
            });
        }
        Ok(WeightVector { weights })
    }

    /// `1/k` everywhere.
    pub fn uniform(k: usize) -> Self {
        assert!(k > 0);
        let w = Rat::new(num::BigInt::one(), num::BigInt::from(k));
        WeightVector {
            weights: vec![w; k],
        }
    }

    /// Candidate weights proportional to plurality scores: `plu(c) / n`.
    pub fn plurality(e: &Election) -> Self {
        let n = rat_usize(e.voters());
        WeightVector {
            weights: e
                .plurality_scores()
                .into_iter()
                .map(|s| rat_usize(s) / &n)
                .collect(),
        }
    }

    /// Normalizes a vector of nonnegative integer counts.
    pub fn from_counts(counts: &[u64]) -> Result<Self, WeightError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(WeightError::NotNormalized {
                sum: "0".to_string(),
            });
        }
        let total = rat_usize(total as usize);
        Self::new(
            counts
                .iter()
                .map(|&c| rat_usize(c as usize) / &total)
                .collect(),
        )
    }

    /// One rational token per line; `#` comments and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, WeightError> {
        let weights = content_lines(text)
            .map(|(_, tok)| parse_rat(tok).map_err(|e| WeightError::BadToken(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(weights)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rat> {
        self.weights.iter()
    }

    pub fn weight_of(&self, s: &IdxSet) -> Rat {
        s.iter().map(|i| &self.weights[i]).sum()
    }
}
