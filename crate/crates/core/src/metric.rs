//! Pseudometric spaces over the `n + m` points hosting voters and
//! candidates: validation, shortest-path completion of weighted graphs,
//! consistency with a profile, decisiveness, social costs, and the
//! tail-cost objective `phi_k`.
//!
//! Points `0..n` are voters, points `n..n+m` are candidates. Distinct
//! entities may share a location (distance 0); the lower-bound
//! constructions rely on that.

use crate::election::Election;
use crate::ratio::{format_rat, parse_rat, Rat};
use crate::rules::Lottery;
use num::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricViolation {
    #[error("matrix is {rows}x{cols}, expected square of side {expected}")]
    BadShape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("d({x},{y}) is negative")]
    Negative { x: usize, y: usize },
    #[error("d({x},{x}) is nonzero")]
    NonzeroDiagonal { x: usize },
    #[error("d({x},{y}) != d({y},{x})")]
    Asymmetric { x: usize, y: usize },
    #[error("triangle inequality fails on ({x},{y},{z}): d({x},{z}) > d({x},{y}) + d({y},{z})")]
    Triangle { x: usize, y: usize, z: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error(
        "metric is over {have_n} voters / {have_m} candidates, election has {want_n} / {want_m}"
    )]
    DimensionMismatch {
        have_n: usize,
        have_m: usize,
        want_n: usize,
        want_m: usize,
    },
    #[error("metric is not consistent with the profile (voter {voter}: candidate {better} is ranked above {worse} but is strictly farther)")]
    Inconsistent {
        voter: usize,
        better: usize,
        worse: usize,
    },
    #[error("malformed metric file: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge weight must be positive, got {0}")]
    NonPositiveEdge(String),
    #[error("edge references unknown point `{0}`")]
    UnknownPoint(String),
    #[error("voter {0} placed on multiple points or missing")]
    VoterPlacement(usize),
    #[error("candidate {0} placed on multiple points or missing")]
    CandidatePlacement(usize),
    #[error("malformed graph file: {0}")]
    Parse(String),
}

/// Validated pseudometric over `n + m` points (voters first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpace {
    n: usize,
    m: usize,
    d: Vec<Vec<Rat>>,
}

impl MetricSpace {
    /// Checks symmetry, nonnegativity, zero diagonal, and every triangle.
    pub fn validate(n: usize, m: usize, d: Vec<Vec<Rat>>) -> Result<Self, MetricViolation> {
        let size = n + m;
        if d.len() != size || d.iter().any(|row| row.len() != size) {
            return Err(MetricViolation::BadShape {
                rows: d.len(),
                cols: d.first().map_or(0, |r| r.len()),
                expected: size,
            });
        }
        for x in 0..size {
            if !d[x][x].is_zero() {
                return Err(MetricViolation::NonzeroDiagonal { x });
            }
            for y in 0..size {
                if d[x][y].is_negative() {
                    return Err(MetricViolation::Negative { x, y });
                }
                if d[x][y] != d[y][x] {
                    return Err(MetricViolation::Asymmetric { x, y });
                }
            }
        }
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if d[x][z] > &d[x][y] + &d[y][z] {
                        return Err(MetricViolation::Triangle { x, y, z });
                    }
                }
            }
        }
        Ok(MetricSpace { n, m, d })
    }

    pub fn voters(&self) -> usize {
        self.n
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    /// Distance between raw point indices.
    pub fn dist(&self, x: usize, y: usize) -> &Rat {
        &self.d[x][y]
    }

    /// Distance from voter `i` to candidate `c`.
    pub fn dist_vc(&self, i: usize, c: usize) -> &Rat {
        &self.d[i][self.n + c]
    }

    /// Distance between candidates `a` and `b`.
    pub fn dist_cc(&self, a: usize, b: usize) -> &Rat {
        &self.d[self.n + a][self.n + b]
    }

    pub fn matrix(&self) -> &Vec<Vec<Rat>> {
        &self.d
    }

    fn check_dims(&self, e: &Election) -> Result<(), MetricError> {
        if self.n != e.voters() || self.m != e.candidates() {
            return Err(MetricError::DimensionMismatch {
                have_n: self.n,
                have_m: self.m,
                want_n: e.voters(),
                want_m: e.candidates(),
            });
        }
        Ok(())
    }

    /// True iff every voter's ranking is non-decreasing in distance.
    pub fn consistent_with(&self, e: &Election) -> Result<bool, MetricError> {
        self.check_dims(e)?;
        for i in 0..self.n {
            let r = e.ranking(i);
            for w in r.windows(2) {
                if self.dist_vc(i, w[0]) > self.dist_vc(i, w[1]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Profile obtained by sorting candidates by distance per voter,
    /// equidistant candidates ordered by index.
    pub fn induced_profile(&self) -> Election {
        let rankings = (0..self.n)
            .map(|i| {
                let mut order: Vec<usize> = (0..self.m).collect();
                order.sort_by(|&a, &b| self.dist_vc(i, a).cmp(self.dist_vc(i, b)).then(a.cmp(&b)));
                order
            })
            .collect();
        Election::new(rankings).expect("induced profile is always a valid election")
    }

    /// True iff `d(i, top(i)) <= alpha * d(i, c)` for every voter and every
    /// non-top candidate. Errors if the metric is not consistent with `e`.
    pub fn is_alpha_decisive(&self, e: &Election, alpha: &Rat) -> Result<bool, MetricError> {
        self.ensure_consistent(e)?;
        for i in 0..self.n {
            let top = e.top_choice(i);
            for c in 0..self.m {
                if c != top && self.dist_vc(i, top) > &(alpha * self.dist_vc(i, c)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Smallest `alpha` for which the instance is `alpha`-decisive
    /// (0 when there are no non-top candidates).
    pub fn min_alpha(&self, e: &Election) -> Result<Rat, MetricError> {
        self.ensure_consistent(e)?;
        let mut best = Rat::zero();
        for i in 0..self.n {
            let top = e.top_choice(i);
            let top_d = self.dist_vc(i, top);
            for c in 0..self.m {
                if c == top {
                    continue;
                }
                let dc = self.dist_vc(i, c);
                if dc.is_zero() {
                    // consistency forces top_d == 0 here; no constraint
                    continue;
                }
                let ratio = top_d / dc;
                if ratio > best {
                    best = ratio;
                }
            }
        }
        Ok(best)
    }

    fn ensure_consistent(&self, e: &Election) -> Result<(), MetricError> {
        self.check_dims(e)?;
        for i in 0..self.n {
            let r = e.ranking(i);
            for w in r.windows(2) {
                if self.dist_vc(i, w[0]) > self.dist_vc(i, w[1]) {
                    return Err(MetricError::Inconsistent {
                        voter: i,
                        better: w[0],
                        worse: w[1],
                    });
                }
            }
        }
        Ok(())
    }

    /// `SC(c) = sum_i d(i, c)`.
    pub fn social_cost(&self, c: usize) -> Rat {
        assert!(c < self.m, "candidate index {c} out of range");
        (0..self.n).map(|i| self.dist_vc(i, c)).sum()
    }

    /// `sum_c Pr[c] * SC(c)`.
    pub fn expected_social_cost(&self, lottery: &Lottery) -> Rat {
        assert_eq!(lottery.len(), self.m, "lottery dimension mismatch");
        (0..self.m)
            .map(|c| lottery.probability(c) * self.social_cost(c))
            .sum()
    }

    /// Sum of the `k` largest voter distances to `c`; `phi_n = SC`.
    pub fn phi_k(&self, c: usize, k: usize) -> Rat {
        assert!(c < self.m, "candidate index {c} out of range");
        assert!(k >= 1 && k <= self.n, "k must lie in 1..=n");
        let mut costs: Vec<&Rat> = (0..self.n).map(|i| self.dist_vc(i, c)).collect();
        costs.sort();
        costs.iter().rev().take(k).copied().cloned().sum()
    }

    /// Uniformly scaled copy, `lambda > 0`.
    pub fn scale(&self, lambda: &Rat) -> MetricSpace {
        assert!(lambda.is_positive());
        MetricSpace {
            n: self.n,
            m: self.m,
            d: self
                .d
                .iter()
                .map(|row| row.iter().map(|v| v * lambda).collect())
                .collect(),
        }
    }

    /// Graph presentation of the metric: one point per colocation class
    /// (zero-distance entities share a point), complete positive-weight
    /// edge set between class representatives.
    pub fn to_graph_spec(&self) -> WeightedGraphSpec {
        let size = self.n + self.m;
        let mut class = vec![usize::MAX; size];
        let mut reps: Vec<usize> = Vec::new();
        for x in 0..size {
            match reps.iter().position(|&r| self.d[r][x].is_zero()) {
                Some(k) => class[x] = k,
                None => {
                    class[x] = reps.len();
                    reps.push(x);
                }
            }
        }
        let mut points: Vec<PointSpec> = (0..reps.len())
            .map(|k| PointSpec {
                id: format!("p{k}"),
                ..Default::default()
            })
            .collect();
        for i in 0..self.n {
            points[class[i]].voters.push(i);
        }
        for c in 0..self.m {
            points[class[self.n + c]].cands.push(c);
        }
        let mut edges = Vec::new();
        for a in 0..reps.len() {
            for b in a + 1..reps.len() {
                edges.push((a, b, self.d[reps[a]][reps[b]].clone()));
            }
        }
        WeightedGraphSpec {
            n: self.n,
            m: self.m,
            points,
            edges,
        }
    }

    /// Metric file: `metric <n> <m>` then `n+m` rows of `n+m` rationals.
    pub fn parse(text: &str) -> Result<Self, MetricError> {
        let mut lines = content_lines(text);
        let header = lines
            .next()
            .ok_or_else(|| MetricError::Parse("empty file".into()))?;
        let mut toks = header.split_whitespace();
        if toks.next() != Some("metric") {
            return Err(MetricError::Parse("missing `metric` header".into()));
        }
        let n: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| MetricError::Parse(format!("bad header `{header}`")))?;
        let m: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| MetricError::Parse(format!("bad header `{header}`")))?;
        let size = n + m;
        let mut d = Vec::with_capacity(size);
        for line in lines {
            let row: Vec<Rat> = line
                .split_whitespace()
                .map(|t| parse_rat(t).map_err(|e| MetricError::Parse(e.to_string())))
                .collect::<Result<_, _>>()?;
            d.push(row);
        }
        if d.len() != size {
            return Err(MetricError::Parse(format!(
                "expected {size} rows, found {}",
                d.len()
            )));
        }
        MetricSpace::validate(n, m, d).map_err(|v| MetricError::Parse(v.to_string()))
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("metric {} {}\n", self.n, self.m);
        for row in &self.d {
            let toks: Vec<String> = row.iter().map(format_rat).collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
        out
    }
}

/// A positively weighted undirected graph whose shortest paths define a
/// metric; each point may host several voters and candidates (colocated
/// entities are at distance 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraphSpec {
    pub n: usize,
    pub m: usize,
    pub points: Vec<PointSpec>,
    /// `(point, point, weight)` with `weight > 0`.
    pub edges: Vec<(usize, usize, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointSpec {
    pub id: String,
    pub voters: Vec<usize>,
    pub cands: Vec<usize>,
}

impl WeightedGraphSpec {
    /// All-pairs shortest paths; colocated entities get distance 0.
    pub fn to_metric(&self) -> Result<MetricSpace, GraphError> {
        self.check()?;
        let p = self.points.len();
        let mut dist: Vec<Vec<Option<Rat>>> = vec![vec![None; p]; p];
        for (v, row) in dist.iter_mut().enumerate() {
            row[v] = Some(Rat::zero());
        }
        for (u, v, w) in &self.edges {
            let shorter = dist[*u][*v].as_ref().is_none_or(|cur| w < cur);
            if shorter {
                dist[*u][*v] = Some(w.clone());
                dist[*v][*u] = Some(w.clone());
            }
        }
        for k in 0..p {
            for i in 0..p {
                let Some(dik) = dist[i][k].clone() else {
                    continue;
                };
                for j in 0..p {
                    let Some(dkj) = dist[k][j].as_ref() else {
                        continue;
                    };
                    let via = &dik + dkj;
                    if dist[i][j].as_ref().is_none_or(|cur| via < *cur) {
                        dist[i][j] = Some(via);
                    }
                }
            }
        }
        if dist.iter().flatten().any(|v| v.is_none()) {
            return Err(GraphError::Disconnected);
        }
        let size = self.n + self.m;
        let mut point_of = vec![usize::MAX; size];
        for (pi, point) in self.points.iter().enumerate() {
            for &v in &point.voters {
                point_of[v] = pi;
            }
            for &c in &point.cands {
                point_of[self.n + c] = pi;
            }
        }
        let d = (0..size)
            .map(|x| {
                (0..size)
                    .map(|y| dist[point_of[x]][point_of[y]].clone().unwrap())
                    .collect()
            })
            .collect();
        MetricSpace::validate(self.n, self.m, d)
            .map_err(|v| GraphError::Parse(format!("shortest paths produced a non-metric: {v}")))
    }

    fn check(&self) -> Result<(), GraphError> {
        let mut voter_seen = vec![0usize; self.n];
        let mut cand_seen = vec![0usize; self.m];
        for point in &self.points {
            for &v in &point.voters {
                if v >= self.n {
                    return Err(GraphError::VoterPlacement(v));
                }
                voter_seen[v] += 1;
            }
            for &c in &point.cands {
                if c >= self.m {
                    return Err(GraphError::CandidatePlacement(c));
                }
                cand_seen[c] += 1;
            }
        }
        if let Some(v) = voter_seen.iter().position(|&k| k != 1) {
            return Err(GraphError::VoterPlacement(v));
        }
        if let Some(c) = cand_seen.iter().position(|&k| k != 1) {
            return Err(GraphError::CandidatePlacement(c));
        }
        for (u, v, w) in &self.edges {
            if *u >= self.points.len() || *v >= self.points.len() {
                return Err(GraphError::UnknownPoint(format!("{}", u.max(v))));
            }
            if !w.is_positive() {
                return Err(GraphError::NonPositiveEdge(format_rat(w)));
            }
        }
        Ok(())
    }

    /// Graph file: `graph <P> <E>`, then `point <id> [voter <i>]* [cand <c>]*`
    /// lines and `edge <id1> <id2> <weight>` lines.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = content_lines(text);
        let header = lines
            .next()
            .ok_or_else(|| GraphError::Parse("empty file".into()))?;
        let mut toks = header.split_whitespace();
        if toks.next() != Some("graph") {
            return Err(GraphError::Parse("missing `graph` header".into()));
        }
        let p: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Parse(format!("bad header `{header}`")))?;
        let e: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Parse(format!("bad header `{header}`")))?;
        let mut points = Vec::new();
        let mut ids = std::collections::HashMap::new();
        let mut edges = Vec::new();
        let (mut max_voter, mut max_cand) = (None::<usize>, None::<usize>);
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "point" => {
                    if toks.len() < 2 {
                        return Err(GraphError::Parse(format!("bad point line `{line}`")));
                    }
                    let mut spec = PointSpec {
                        id: toks[1].to_string(),
                        ..Default::default()
                    };
                    let mut rest = toks[2..].iter();
                    while let Some(&kind) = rest.next() {
                        let idx: usize = rest
                            .next()
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| GraphError::Parse(format!("bad point line `{line}`")))?;
                        match kind {
                            "voter" => {
                                max_voter = Some(max_voter.map_or(idx, |m| m.max(idx)));
                                spec.voters.push(idx);
                            }
                            "cand" => {
                                max_cand = Some(max_cand.map_or(idx, |m| m.max(idx)));
                                spec.cands.push(idx);
                            }
                            other => {
                                return Err(GraphError::Parse(format!("unknown tag `{other}`")))
                            }
                        }
                    }
                    ids.insert(spec.id.clone(), points.len());
                    points.push(spec);
                }
                "edge" => {
                    if toks.len() != 4 {
                        return Err(GraphError::Parse(format!("bad edge line `{line}`")));
                    }
                    let u = *ids
                        .get(toks[1])
                        .ok_or_else(|| GraphError::UnknownPoint(toks[1].to_string()))?;
                    let v = *ids
                        .get(toks[2])
                        .ok_or_else(|| GraphError::UnknownPoint(toks[2].to_string()))?;
                    let w = parse_rat(toks[3]).map_err(|e| GraphError::Parse(e.to_string()))?;
                    edges.push((u, v, w));
                }
                other => return Err(GraphError::Parse(format!("unknown line kind `{other}`"))),
            }
        }
        if points.len() != p || edges.len() != e {
            return Err(GraphError::Parse(format!(
                "header declared {p} points / {e} edges, found {} / {}",
                points.len(),
                edges.len()
            )));
        }
        let spec = WeightedGraphSpec {
            n: max_voter.map_or(0, |v| v + 1),
            m: max_cand.map_or(0, |c| c + 1),
            points,
            edges,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("graph {} {}\n", self.points.len(), self.edges.len());
        for point in &self.points {
            out.push_str(&format!("point {}", point.id));
            for &v in &point.voters {
                out.push_str(&format!(" voter {v}"));
            }
            for &c in &point.cands {
                out.push_str(&format!(" cand {c}"));
            }
            out.push('\n');
        }
        for (u, v, w) in &self.edges {
            out.push_str(&format!(
                "edge {} {} {}\n",
                self.points[*u].id,
                self.points[*v].id,
                format_rat(w)
            ));
        }
        out
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().filter_map(|line| {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim();
        if line.is_empty() {
            None
        } else {
            Some(line)
        }
    })
}
