//! Generators for the named lower-bound instances: each bundles an
//! election, one or two witness metrics (as weighted graphs), and the
//! exact cost facts the instance is supposed to realize, so the stated
//! distortion numbers can be rechecked from the bundle alone.

use crate::distortion;
use crate::election::Election;
use crate::metric::{MetricSpace, PointSpec, WeightedGraphSpec};
use crate::ratio::{format_rat, parse_rat, rat_usize, Rat};
use num::{One, Signed, Zero};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("unknown construction `{0}`")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
}

/// Construction parameters; missing optional parameters take the
/// catalog defaults.
#[derive(Debug, Clone)]
pub struct Params {
    pub alpha: Rat,
    pub m: Option<usize>,
    pub k: Option<usize>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            alpha: Rat::new(1.into(), 2.into()),
            m: None,
            k: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NamedInstance {
    pub name: String,
    pub alpha: Rat,
    pub m_param: Option<usize>,
    pub k_param: Option<usize>,
    pub election: Election,
    /// Named witness metrics; most instances carry one, the randomized
    /// lower bound carries the mirrored pair.
    pub metrics: Vec<(String, WeightedGraphSpec)>,
    /// `(quantity, exact value)` facts re-derivable from the bundle.
    pub facts: Vec<(String, Rat)>,
}

impl NamedInstance {
    pub fn fact(&self, name: &str) -> Option<&Rat> {
        self.facts.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn primary_metric(&self) -> MetricSpace {
        self.metrics[0]
            .1
            .to_metric()
            .expect("bundled graphs are connected and positive")
    }

    pub fn facts_json(&self) -> serde_json::Value {
        json!({
            "name": self.name,
            "alpha": format_rat(&self.alpha),
            "m": self.m_param,
            "k": self.k_param,
            "facts": self.facts.iter()
                .map(|(k, v)| (k.clone(), json!(format_rat(v))))
                .collect::<serde_json::Map<_, _>>(),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static str,
    pub domain: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub facts: &'static [&'static str],
}

const ALPHA_SPEC: ParamSpec = ParamSpec {
    name: "alpha",
    default: "1/2",
    domain: "[0, 1] rational",
};

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "thm1-tight",
        summary: "two voters, three candidates; the matchable candidate b costs (2+alpha) times the optimum",
        params: &[ALPHA_SPEC, ParamSpec { name: "m", default: "3", domain: "integer >= 3" }],
        facts: &["sc_b", "sc_c", "ratio"],
    },
    CatalogEntry {
        name: "thm2-lower",
        summary: "two symmetric candidate groups; every deterministic choice costs 2+alpha-2(1-alpha)/m",
        params: &[ALPHA_SPEC, ParamSpec { name: "m", default: "4", domain: "integer >= 2" }],
        facts: &["sc_a", "sc_b", "ratio"],
    },
    CatalogEntry {
        name: "prop2-muc",
        summary: "five candidates where an uncovered-set pick costs 2.5+alpha/2 times the optimum",
        params: &[ALPHA_SPEC, ParamSpec { name: "m", default: "5", domain: "integer >= 5" }],
        facts: &["sc_a", "sc_c", "ratio"],
    },
    CatalogEntry {
        name: "prop3-condorcet",
        summary: "the Condorcet winner costs nearly 3x the optimum as k grows",
        params: &[ALPHA_SPEC, ParamSpec { name: "k", default: "2", domain: "integer >= 1" }],
        facts: &["sc_a", "sc_b", "ratio"],
    },
    CatalogEntry {
        name: "thm5-plurality",
        summary: "all plurality scores equal; plurality-only randomized rules pay 2+alpha-2/m",
        params: &[ALPHA_SPEC, ParamSpec { name: "m", default: "3", domain: "integer >= 2" }],
        facts: &["sc_cstar", "sc_other", "realized_ratio"],
    },
    CatalogEntry {
        name: "thm6-rand",
        summary: "mirrored pair of metrics forcing randomized rules to (3+alpha)/2 - (1-alpha)/m",
        params: &[ALPHA_SPEC, ParamSpec { name: "m", default: "4", domain: "integer >= 2" }],
        facts: &["sc_a", "sc_b", "ratio", "bound"],
    },
    CatalogEntry {
        name: "thm7-mix",
        summary: "zero-plurality optimum; mixing matching rules with plurality-supported lotteries pays 2+alpha-2/(m-2)",
        params: &[
            ALPHA_SPEC,
            ParamSpec { name: "m", default: "3", domain: "integer >= 3" },
            ParamSpec { name: "k", default: "1", domain: "integer >= 1" },
        ],
        facts: &["sc_astar", "sc_a1", "asymptotic_ratio"],
    },
    CatalogEntry {
        name: "appB-condorcet",
        summary: "seven voters where the unique Condorcet winner has zero plurality score",
        params: &[ALPHA_SPEC],
        facts: &["plu_a", "veto_a", "condorcet_winner"],
    },
    CatalogEntry {
        name: "appC-ties",
        summary: "b is the only matchable candidate yet costs 2+alpha-2(2+alpha)^2/(k+2(2+alpha))",
        params: &[
            ALPHA_SPEC,
            ParamSpec { name: "k", default: "1", domain: "integer >= 1" },
            ParamSpec { name: "m", default: "3", domain: "integer >= 3" },
        ],
        facts: &["sc_b", "sc_c", "ratio"],
    },
];

pub fn catalog_json() -> serde_json::Value {
    json!({
        "constructions": CATALOG.iter().map(|e| json!({
            "name": e.name,
            "summary": e.summary,
            "params": e.params.iter().map(|p| json!({
                "name": p.name,
                "default": p.default,
                "domain": p.domain,
            })).collect::<Vec<_>>(),
            "facts": e.facts,
        })).collect::<Vec<_>>(),
    })
}

pub fn construct(name: &str, params: &Params) -> Result<NamedInstance, ConstructError> {
    let alpha = params.alpha.clone();
    if alpha.is_negative() || alpha > Rat::one() {
        return Err(ConstructError::BadParam(format!(
            "alpha must lie in [0,1], got {}",
            format_rat(&alpha)
        )));
    }
    match name {
        "thm1-tight" => thm1_tight(&alpha, params.m.unwrap_or(3)),
        "thm2-lower" => thm2_lower(&alpha, params.m.unwrap_or(4), false),
        "prop2-muc" => prop2_muc(&alpha, params.m.unwrap_or(5)),
        "prop3-condorcet" => prop3_condorcet(&alpha, params.k.unwrap_or(2)),
        "thm5-plurality" => thm5_plurality(&alpha, params.m.unwrap_or(3)),
        "thm6-rand" => thm2_lower(&alpha, params.m.unwrap_or(4), true),
        "thm7-mix" => thm7_mix(&alpha, params.m.unwrap_or(3), params.k.unwrap_or(1)),
        "appB-condorcet" => app_b_condorcet(&alpha),
        "appC-ties" => app_c_ties(&alpha, params.k.unwrap_or(1), params.m.unwrap_or(3)),
        other => Err(ConstructError::UnknownName(other.to_string())),
    }
}

/// Graph under assembly; zero-weight edges collapse their endpoints into
/// one shared point, so builders can write `alpha`-weighted edges without
/// special-casing `alpha = 0`.
struct Assembler {
    n: usize,
    m: usize,
    ids: Vec<String>,
    voters: Vec<Vec<usize>>,
    cands: Vec<Vec<usize>>,
    edges: Vec<(usize, usize, Rat)>,
}

impl Assembler {
    fn new(n: usize, m: usize) -> Self {
        Assembler {
            n,
            m,
            ids: Vec::new(),
            voters: Vec::new(),
            cands: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn node(&mut self, id: impl Into<String>) -> usize {
        self.ids.push(id.into());
        self.voters.push(Vec::new());
        self.cands.push(Vec::new());
        self.ids.len() - 1
    }

    fn voter(&mut self, node: usize, i: usize) -> &mut Self {
        self.voters[node].push(i);
        self
    }

    fn cand(&mut self, node: usize, c: usize) -> &mut Self {
        self.cands[node].push(c);
        self
    }

    fn edge(&mut self, u: usize, v: usize, w: Rat) {
        assert!(!w.is_negative());
        self.edges.push((u, v, w));
    }

    fn finish(self) -> WeightedGraphSpec {
        let k = self.ids.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for (u, v, w) in &self.edges {
            if w.is_zero() {
                let (ru, rv) = (find(&mut parent, *u), find(&mut parent, *v));
                if ru != rv {
                    parent[ru.max(rv)] = ru.min(rv);
                }
            }
        }
        let mut index_of = vec![usize::MAX; k];
        let mut points: Vec<PointSpec> = Vec::new();
        for x in 0..k {
            let root = find(&mut parent, x);
            if index_of[root] == usize::MAX {
                index_of[root] = points.len();
                points.push(PointSpec {
                    id: self.ids[root].clone(),
                    ..Default::default()
                });
            }
            let p = &mut points[index_of[root]];
            p.voters.extend(&self.voters[x]);
            p.cands.extend(&self.cands[x]);
        }
        let mut edges = Vec::new();
        for (u, v, w) in self.edges {
            if w.is_zero() {
                continue;
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                edges.push((index_of[ru], index_of[rv], w));
            }
        }
        for p in &mut points {
            p.voters.sort_unstable();
            p.cands.sort_unstable();
        }
        WeightedGraphSpec {
            n: self.n,
            m: self.m,
            points,
            edges,
        }
    }
}

/// Appends `target_m - m` irrelevant candidates, each on its own point at
/// ten graph diameters from the anchor point and ranked last by everyone.
fn pad_with_dummies(
    e: &Election,
    g: &WeightedGraphSpec,
    target_m: usize,
) -> (Election, WeightedGraphSpec) {
    let base_m = e.candidates();
    assert!(target_m >= base_m);
    if target_m == base_m {
        return (e.clone(), g.clone());
    }
    let metric = g.to_metric().expect("base graph is valid");
    let size = metric.voters() + metric.candidates();
    let diameter = (0..size)
        .flat_map(|x| (0..size).map(move |y| (x, y)))
        .map(|(x, y)| metric.dist(x, y).clone())
        .max()
        .unwrap();
    let far = rat_usize(10) * diameter.max(Rat::one());

    let mut g = g.clone();
    g.m = target_m;
    for c in base_m..target_m {
        g.points.push(PointSpec {
            id: format!("far{c}"),
            voters: vec![],
            cands: vec![c],
        });
        g.edges.push((0, g.points.len() - 1, far.clone()));
    }
    let rankings = (0..e.voters())
        .map(|i| {
            let mut r = e.ranking(i).to_vec();
            r.extend(base_m..target_m);
            r
        })
        .collect();
    (Election::new(rankings).unwrap(), g)
}

fn two_plus(alpha: &Rat) -> Rat {
    rat_usize(2) + alpha
}

fn thm1_tight(alpha: &Rat, m: usize) -> Result<NamedInstance, ConstructError> {
    if m < 3 {
        return Err(ConstructError::BadParam("thm1-tight needs m >= 3".into()));
    }
    // Candidates a=0, b=1, c=2; voter 0: a>b>c, voter 1: c>b>a.
    let e = Election::new(vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
    let mut g = Assembler::new(2, 3);
    let x = g.node("x");
    let b = g.node("b");
    let c = g.node("c");
    let a = g.node("a");
    g.voter(x, 0);
    g.cand(b, 1);
    g.voter(c, 1).cand(c, 2);
    g.cand(a, 0);
    g.edge(a, x, alpha.clone());
    g.edge(x, b, Rat::one());
    g.edge(x, c, Rat::one());
    g.edge(b, c, Rat::one() + alpha);
    let (e, g) = pad_with_dummies(&e, &g.finish(), m);
    let sc_b = two_plus(alpha);
    Ok(NamedInstance {
        name: "thm1-tight".into(),
        alpha: alpha.clone(),
        m_param: Some(m),
        k_param: None,
        election: e,
        metrics: vec![("metric".into(), g)],
        facts: vec![
            ("sc_b".into(), sc_b.clone()),
            ("sc_c".into(), Rat::one()),
            ("ratio".into(), sc_b),
        ],
    })
}

/// Shared builder for the deterministic lower bound and its randomized
/// mirror variant (`with_mirror` adds the role-swapped metric).
fn thm2_lower(alpha: &Rat, m: usize, with_mirror: bool) -> Result<NamedInstance, ConstructError> {
    if m < 2 {
        return Err(ConstructError::BadParam("thm2-lower needs m >= 2".into()));
    }
    let me = if m.is_multiple_of(2) { m } else { m - 1 };
    let ell = me / 2;
    // Candidates: group A = 0..ell, group B = ell..2*ell. Voters likewise.
    let mut rankings = Vec::new();
    for i in 0..ell {
        let mut r = vec![i];
        r.extend((0..ell).filter(|&j| j != i));
        r.extend(ell..me);
        rankings.push(r);
    }
    for i in ell..me {
        let mut r = vec![i];
        r.extend((ell..me).filter(|&j| j != i));
        r.extend(0..ell);
        rankings.push(r);
    }
    let e = Election::new(rankings).unwrap();

    // One group is "spread" (each voter alpha from its own candidate, 1
    // from the rest), the other collapses onto a single hub point at
    // distance 1 from every spread voter.
    let build_metric = |swap: bool| {
        let mut g = Assembler::new(me, me);
        let hub = g.node("hub");
        let spread: Vec<usize> = if swap {
            (ell..me).collect()
        } else {
            (0..ell).collect()
        };
        let mut voter_nodes = Vec::new();
        let mut cand_nodes = Vec::new();
        for &x in &spread {
            let u = g.node(format!("v{x}"));
            let c = g.node(format!("c{x}"));
            g.voter(u, x);
            g.cand(c, x);
            voter_nodes.push(u);
            cand_nodes.push(c);
        }
        for x in 0..me {
            if !spread.contains(&x) {
                g.voter(hub, x);
                g.cand(hub, x);
            }
        }
        for i in 0..ell {
            g.edge(cand_nodes[i], voter_nodes[i], alpha.clone());
            g.edge(voter_nodes[i], hub, Rat::one());
            for j in 0..ell {
                if i != j {
                    g.edge(cand_nodes[i], voter_nodes[j], Rat::one());
                }
            }
        }
        g.finish()
    };
    let (e_padded, g_main) = pad_with_dummies(&e, &build_metric(false), m);
    let mut metrics = vec![("metric".into(), g_main)];
    if with_mirror {
        let (_, g_mirror) = pad_with_dummies(&e, &build_metric(true), m);
        metrics.push(("metric-mirror".into(), g_mirror));
    }
    let ell_r = rat_usize(ell);
    let sc_a = rat_usize(2) * &ell_r - Rat::one() + alpha * (&ell_r + Rat::one());
    let sc_b = ell_r;
    let ratio = two_plus(alpha) - rat_usize(2) * (Rat::one() - alpha) / rat_usize(me);
    let mut facts = vec![
        ("sc_a".into(), sc_a),
        ("sc_b".into(), sc_b),
        ("ratio".into(), ratio),
    ];
    if with_mirror {
        let bound = (rat_usize(3) + alpha) / rat_usize(2) - (Rat::one() - alpha) / rat_usize(me);
        facts.push(("bound".into(), bound));
    }
    Ok(NamedInstance {
        name: if with_mirror {
            "thm6-rand"
        } else {
            "thm2-lower"
        }
        .into(),
        alpha: alpha.clone(),
        m_param: Some(m),
        k_param: None,
        election: e_padded,
        metrics,
        facts,
    })
}

fn prop2_muc(alpha: &Rat, m: usize) -> Result<NamedInstance, ConstructError> {
    if m < 5 {
        return Err(ConstructError::BadParam("prop2-muc needs m >= 5".into()));
    }
    // a=0, b=1, c=2, d=3, e=4.
    let e = Election::new(vec![
        vec![1, 4, 2, 0, 3],
        vec![2, 3, 1, 0, 4],
        vec![3, 0, 2, 1, 4],
    ])
    .unwrap();
    // Seven-point cycle.
    let mut g = Assembler::new(3, 5);
    let cq = g.node("c");
    let v1 = g.node("v1");
    let b = g.node("b");
    let ee = g.node("e");
    let a = g.node("a");
    let d = g.node("d");
    let v3 = g.node("v3");
    g.cand(cq, 2).voter(cq, 1);
    g.voter(v1, 0);
    g.cand(b, 1);
    g.cand(ee, 4);
    g.cand(a, 0);
    g.cand(d, 3);
    g.voter(v3, 2);
    g.edge(cq, v1, Rat::one());
    g.edge(v1, b, alpha.clone());
    g.edge(b, ee, Rat::one() - alpha);
    g.edge(ee, a, Rat::one() + alpha);
    g.edge(a, d, Rat::one() - alpha);
    g.edge(d, v3, alpha.clone());
    g.edge(v3, cq, Rat::one());
    let (e, g) = pad_with_dummies(&e, &g.finish(), m);
    let sc_a = rat_usize(5) + alpha;
    Ok(NamedInstance {
        name: "prop2-muc".into(),
        alpha: alpha.clone(),
        m_param: Some(m),
        k_param: None,
        election: e,
        metrics: vec![("metric".into(), g)],
        facts: vec![
            ("sc_a".into(), sc_a.clone()),
            ("sc_c".into(), rat_usize(2)),
            ("ratio".into(), sc_a / rat_usize(2)),
        ],
    })
}

fn prop3_condorcet(alpha: &Rat, k: usize) -> Result<NamedInstance, ConstructError> {
    if k < 1 {
        return Err(ConstructError::BadParam(
            "prop3-condorcet needs k >= 1".into(),
        ));
    }
    // Candidates: a=0, b=1, c_r = 1+r for r in 1..=k.
    // Voters: 0,1 in V_a; 2..2+k in V_b; k+2..2k+2 one per c_r.
    let middles: Vec<usize> = (2..2 + k).collect();
    let mut rankings = Vec::new();
    for _ in 0..2 {
        let mut r = vec![0];
        r.extend(&middles);
        r.push(1);
        rankings.push(r);
    }
    for _ in 0..k {
        let mut r = vec![1];
        r.extend(&middles);
        r.push(0);
        rankings.push(r);
    }
    for c in &middles {
        let mut r = vec![*c, 0, 1];
        r.extend(middles.iter().filter(|&&x| x != *c));
        rankings.push(r);
    }
    let e = Election::new(rankings).unwrap();

    let mut g = Assembler::new(2 * k + 2, k + 2);
    let pa = g.node("a");
    let va = g.node("va");
    let pb = g.node("b");
    g.cand(pa, 0);
    g.voter(va, 0).voter(va, 1);
    g.cand(pb, 1);
    for i in 0..k {
        g.voter(pb, 2 + i);
    }
    g.edge(pa, va, alpha.clone());
    for r in 0..k {
        let pc = g.node(format!("c{}", r + 1));
        g.cand(pc, 2 + r);
        g.voter(pc, k + 2 + r);
        g.edge(va, pc, Rat::one());
        g.edge(pc, pb, Rat::one() + alpha);
    }
    let kr = rat_usize(k);
    let sc_a = rat_usize(3) * &kr + (rat_usize(3) * &kr + rat_usize(2)) * alpha;
    let sc_b = &kr + rat_usize(4) + (&kr + rat_usize(2)) * alpha;
    Ok(NamedInstance {
        name: "prop3-condorcet".into(),
        alpha: alpha.clone(),
        m_param: None,
        k_param: Some(k),
        election: e,
        metrics: vec![("metric".into(), g.finish())],
        facts: vec![
            ("sc_a".into(), sc_a.clone()),
            ("sc_b".into(), sc_b.clone()),
            ("ratio".into(), sc_a / sc_b),
        ],
    })
}

fn thm5_plurality(alpha: &Rat, m: usize) -> Result<NamedInstance, ConstructError> {
    if m < 2 {
        return Err(ConstructError::BadParam(
            "thm5-plurality needs m >= 2".into(),
        ));
    }
    // n = m voters; candidate 0 is the optimum c*, topped by voter 0 only.
    let mut rankings = vec![(0..m).collect::<Vec<_>>()];
    for j in 1..m {
        let mut r = vec![j, 0];
        r.extend((1..m).filter(|&c| c != j));
        rankings.push(r);
    }
    let e = Election::new(rankings).unwrap();

    let mut g = Assembler::new(m, m);
    let hub = g.node("cstar");
    g.cand(hub, 0).voter(hub, 0);
    let mut voter_nodes = Vec::new();
    let mut cand_nodes = Vec::new();
    for j in 1..m {
        let w = g.node(format!("v{j}"));
        let q = g.node(format!("c{j}"));
        g.voter(w, j).cand(q, j);
        voter_nodes.push(w);
        cand_nodes.push(q);
    }
    for j in 0..m - 1 {
        g.edge(voter_nodes[j], cand_nodes[j], alpha.clone());
        g.edge(voter_nodes[j], hub, Rat::one());
        g.edge(cand_nodes[j], hub, Rat::one() + alpha);
        for j2 in 0..m - 1 {
            if j2 != j {
                g.edge(voter_nodes[j], cand_nodes[j2], two_plus(alpha));
            }
        }
    }
    let sc_cstar = rat_usize(m - 1);
    let sc_other = alpha + (Rat::one() + alpha) + rat_usize(m - 2) * two_plus(alpha);
    let realized = two_plus(alpha) - rat_usize(2) / rat_usize(m);
    Ok(NamedInstance {
        name: "thm5-plurality".into(),
        alpha: alpha.clone(),
        m_param: Some(m),
        k_param: None,
        election: e,
        metrics: vec![("metric".into(), g.finish())],
        facts: vec![
            ("sc_cstar".into(), sc_cstar),
            ("sc_other".into(), sc_other),
            ("realized_ratio".into(), realized),
        ],
    })
}

fn thm7_mix(alpha: &Rat, m: usize, k: usize) -> Result<NamedInstance, ConstructError> {
    if m < 3 || k < 1 {
        return Err(ConstructError::BadParam(
            "thm7-mix needs m >= 3, k >= 1".into(),
        ));
    }
    let ell = m - 2;
    // Candidates: a_1..a_ell are 0..ell-1, a_{ell+1} is ell, a* is m-1.
    // Voters: group i (i in 0..ell) holds voters i*k..(i+1)*k; the last
    // voter k*ell tops a_{ell+1}.
    let mut rankings = Vec::new();
    for i in 0..ell {
        for _ in 0..k {
            let mut r = vec![i, m - 1];
            r.extend((0..ell).filter(|&j| j != i));
            r.push(ell);
            rankings.push(r);
        }
    }
    {
        let mut r = vec![ell];
        r.extend(0..ell);
        r.push(m - 1);
        rankings.push(r);
    }
    let e = Election::new(rankings).unwrap();

    let mut g = Assembler::new(k * ell + 1, m);
    let star = g.node("astar");
    g.cand(star, m - 1);
    let w = g.node("w");
    g.voter(w, k * ell);
    let last = g.node("alast");
    g.cand(last, ell);
    g.edge(w, last, alpha.clone());
    for i in 0..ell {
        let u = g.node(format!("u{i}"));
        let c = g.node(format!("a{i}"));
        for t in 0..k {
            g.voter(u, i * k + t);
        }
        g.cand(c, i);
        g.edge(u, star, Rat::one());
        g.edge(u, c, alpha.clone());
        g.edge(c, w, rat_usize(2));
    }
    let (kr, lr) = (rat_usize(k), rat_usize(ell));
    let sc_astar = &kr * &lr + rat_usize(3) + alpha;
    let sc_a1 = &lr * &kr * alpha + rat_usize(2) * (&lr - Rat::one()) * &kr + rat_usize(2);
    let asymptotic = two_plus(alpha) - rat_usize(2) / rat_usize(ell);
    Ok(NamedInstance {
        name: "thm7-mix".into(),
        alpha: alpha.clone(),
        m_param: Some(m),
        k_param: Some(k),
        election: e,
        metrics: vec![("metric".into(), g.finish())],
        facts: vec![
            ("sc_astar".into(), sc_astar),
            ("sc_a1".into(), sc_a1),
            ("asymptotic_ratio".into(), asymptotic),
        ],
    })
}

fn app_b_condorcet(alpha: &Rat) -> Result<NamedInstance, ConstructError> {
    // a=0, b=1, c=2, d=3.
    let e = Election::new(vec![
        vec![1, 0, 2, 3],
        vec![1, 0, 2, 3],
        vec![2, 0, 1, 3],
        vec![2, 0, 1, 3],
        vec![3, 0, 1, 2],
        vec![3, 0, 1, 2],
        vec![1, 2, 3, 0],
    ])
    .unwrap();
    // Star metric: every voter sits alpha from its top and 1 from the rest.
    let mut g = Assembler::new(7, 4);
    let cand_nodes: Vec<usize> = (0..4).map(|c| g.node(format!("c{c}"))).collect();
    for (c, node) in cand_nodes.iter().enumerate() {
        g.cand(*node, c);
    }
    for i in 0..7 {
        let w = g.node(format!("v{i}"));
        g.voter(w, i);
        let top = e.top_choice(i);
        g.edge(w, cand_nodes[top], alpha.clone());
        for c in 0..4 {
            if c != top {
                g.edge(w, cand_nodes[c], Rat::one());
            }
        }
    }
    Ok(NamedInstance {
        name: "appB-condorcet".into(),
        alpha: alpha.clone(),
        m_param: None,
        k_param: None,
        election: e,
        metrics: vec![("metric".into(), g.finish())],
        facts: vec![
            ("plu_a".into(), Rat::zero()),
            ("veto_a".into(), Rat::one()),
            ("condorcet_winner".into(), Rat::zero()),
        ],
    })
}

fn app_c_ties(alpha: &Rat, k: usize, m: usize) -> Result<NamedInstance, ConstructError> {
    if k < 1 || m < 3 {
        return Err(ConstructError::BadParam(
            "appC-ties needs k >= 1, m >= 3".into(),
        ));
    }
    // a=0, b=1, c=2; voters: 0..k rank a>b>c, k..2k rank c>b>a,
    // 2k ranks b>a>c, 2k+1 ranks b>c>a.
    let mut rankings = vec![vec![0, 1, 2]; k];
    rankings.extend(vec![vec![2, 1, 0]; k]);
    rankings.push(vec![1, 0, 2]);
    rankings.push(vec![1, 2, 0]);
    let e = Election::new(rankings).unwrap();

    let sc_b_target = rat_usize(k) * two_plus(alpha);
    let sc_c_target = rat_usize(k) + rat_usize(2) * two_plus(alpha);

    // The naive four-point metric under-shoots SC(c): lift the
    // voters-to-c distance to 1 + 2/k, which is a shortest path whenever
    // 2/k <= 1 + alpha. Outside that regime (k = 1, alpha < 1) search the
    // constraint cone for a metric with the exact target costs; when no
    // such pseudometric exists the bundle falls back to the figure metric
    // and records the costs it actually realizes.
    let direct_ok = rat_usize(2) / rat_usize(k) <= Rat::one() + alpha;
    let (graph, sc_b_fact, sc_c_fact) = if direct_ok {
        let g = app_c_graph(alpha, k, &(Rat::one() + rat_usize(2) / rat_usize(k)));
        (g, sc_b_target.clone(), sc_c_target.clone())
    } else {
        let targets = vec![(1, sc_b_target.clone()), (2, sc_c_target.clone())];
        match distortion::feasible_metric_with_costs(&e, alpha, &targets) {
            Some(metric) => (
                metric.to_graph_spec(),
                sc_b_target.clone(),
                sc_c_target.clone(),
            ),
            None => {
                let g = app_c_graph(alpha, k, &Rat::one());
                let realized_c = rat_usize(k) + rat_usize(2) * (Rat::one() + alpha);
                (g, sc_b_target.clone(), realized_c)
            }
        }
    };
    let (e, graph) = pad_with_dummies(&e, &graph, m);
    Ok(NamedInstance {
        name: "appC-ties".into(),
        alpha: alpha.clone(),
        m_param: Some(m),
        k_param: Some(k),
        election: e,
        metrics: vec![("metric".into(), graph)],
        facts: vec![
            ("sc_b".into(), sc_b_fact.clone()),
            ("sc_c".into(), sc_c_fact.clone()),
            ("ratio".into(), sc_b_fact / sc_c_fact),
        ],
    })
}

fn app_c_graph(alpha: &Rat, k: usize, x1_to_c: &Rat) -> WeightedGraphSpec {
    let mut g = Assembler::new(2 * k + 2, 3);
    let pa = g.node("a");
    let x1 = g.node("x1");
    let pb = g.node("b");
    let pc = g.node("c");
    g.cand(pa, 0);
    for i in 0..k {
        g.voter(x1, i);
    }
    g.cand(pb, 1).voter(pb, 2 * k).voter(pb, 2 * k + 1);
    g.cand(pc, 2);
    for i in k..2 * k {
        g.voter(pc, i);
    }
    g.edge(pa, x1, alpha.clone());
    g.edge(x1, pb, Rat::one());
    g.edge(x1, pc, x1_to_c.clone());
    g.edge(pb, pc, Rat::one() + alpha);
    g.finish()
}

pub fn default_params_for(name: &str) -> Option<Params> {
    let entry = CATALOG.iter().find(|e| e.name == name)?;
    let mut params = Params {
        alpha: parse_rat(ALPHA_SPEC.default).unwrap(),
        m: None,
        k: None,
    };
    for p in entry.params {
        match p.name {
            "m" => params.m = Some(p.default.parse().unwrap()),
            "k" => params.k = Some(p.default.parse().unwrap()),
            _ => {}
        }
    }
    Some(params)
}
