//! Implementations of the six subcommands.

use crate::rulespec::{self, RuleSpec};
use crate::{io, Failure};
use crate::{AnalyzeArgs, BatchArgs, ConstructArgs, DistortionArgs, FairnessArgs, RandomArgs};
use mvote_core::construction::{self, Params};
use mvote_core::distortion::{distortion_of_outcome, worst_case_ratio, DistortionResult};
use mvote_core::enumerate::{random_instance_with, COORD_DENOM};
use mvote_core::matching::MatchingCertificate;
use mvote_core::parallel;
use mvote_core::ratio::{format_rat, Rat};
use mvote_core::rules::Lottery;
use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let e = io::load_election(&args.election)?;
    let spec = RuleSpec::parse(&args.rule)?;
    let alpha = if spec.needs_alpha() {
        Some(rulespec::parse_alpha(args.alpha.as_deref(), &args.rule)?)
    } else {
        args.alpha
            .as_deref()
            .map(|raw| rulespec::parse_alpha(Some(raw), &args.rule))
            .transpose()?
    };
    let outcome = rulespec::apply(&spec, &e, alpha.as_ref())?;

    let sampled = if args.sample {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed.unwrap_or(0));
        let unit = Rat::new(
            u64::from(rand::Rng::gen_range(&mut rng, 0..u32::MAX)).into(),
            u64::from(u32::MAX).into(),
        );
        Some(outcome.lottery.sample(&unit))
    } else {
        None
    };

    if args.json {
        let certs = outcome.report.as_ref().map(|r| {
            r.certificates
                .iter()
                .enumerate()
                .map(|(c, cert)| certificate_json(c, cert))
                .collect::<Vec<_>>()
        });
        let value = json!({
            "rule": args.rule,
            "winner": outcome.winner,
            "lottery": lottery_json(&outcome.lottery),
            "matchable": outcome.report.as_ref().map(|r| r.matchable.iter().collect::<Vec<_>>()),
            "certificates": certs,
            "sampled": sampled,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!("rule: {}", args.rule);
        match outcome.winner {
            Some(w) => println!("winner: {w}"),
            None => println!("winner: (lottery)"),
        }
        println!("lottery: {}", outcome.lottery.display_compact());
        if let Some(report) = &outcome.report {
            println!("matchable: {}", report.matchable);
            for (c, cert) in report.certificates.iter().enumerate() {
                match cert {
                    MatchingCertificate::Matchable { .. } => {
                        println!("candidate {c}: matchable");
                    }
                    MatchingCertificate::NotMatchable {
                        violating,
                        p_weight,
                        q_weight,
                    } => println!(
                        "candidate {c}: not matchable, S={violating} with p(S)={} > q(A)={}",
                        format_rat(p_weight),
                        format_rat(q_weight)
                    ),
                }
            }
        }
        if let Some(s) = sampled {
            println!("sampled: {s}");
        }
    }
    Ok(())
}

fn lottery_json(lottery: &Lottery) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for c in lottery.support() {
        map.insert(c.to_string(), json!(format_rat(lottery.probability(c))));
    }
    serde_json::Value::Object(map)
}

fn certificate_json(candidate: usize, cert: &MatchingCertificate) -> serde_json::Value {
    match cert {
        MatchingCertificate::Matchable { matching } => json!({
            "candidate": candidate,
            "matchable": true,
            "matching": matching.as_ref().map(|m| {
                m.weights
                    .iter()
                    .map(|row| row.iter().map(format_rat).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            }),
        }),
        MatchingCertificate::NotMatchable {
            violating,
            p_weight,
            q_weight,
        } => json!({
            "candidate": candidate,
            "matchable": false,
            "violating_set": violating.iter().collect::<Vec<_>>(),
            "p_weight": format_rat(p_weight),
            "q_weight": format_rat(q_weight),
        }),
    }
}

pub fn distortion(args: DistortionArgs) -> Result<(), Failure> {
    let e = io::load_election(&args.election)?;
    let alpha = rulespec::parse_alpha(Some(&args.alpha), "distortion")?;
    let outcome = match (&args.candidate, &args.rule) {
        (Some(c), None) => {
            if *c >= e.candidates() {
                return Err(Failure::usage(format!(
                    "--candidate {c} out of range (m = {})",
                    e.candidates()
                )));
            }
            Lottery::degenerate(e.candidates(), *c)
        }
        (None, Some(rule)) => {
            let spec = RuleSpec::parse(rule)?;
            rulespec::apply(&spec, &e, Some(&alpha))?.lottery
        }
        _ => {
            return Err(Failure::usage(
                "exactly one of --candidate or --rule is required",
            ))
        }
    };
    let result = match args.reference {
        Some(b) => {
            if b >= e.candidates() {
                return Err(Failure::usage(format!(
                    "--reference {b} out of range (m = {})",
                    e.candidates()
                )));
            }
            worst_case_ratio(&e, &outcome, b, &alpha)
        }
        None => distortion_of_outcome(&e, &outcome, &alpha),
    };
    print_distortion(&result, args.json);
    Ok(())
}

fn print_distortion(result: &DistortionResult, as_json: bool) {
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&result.to_json()).unwrap()
        );
    } else {
        println!("status: {}", result.status_str());
        match &result.value {
            Some(v) => println!("value: {}", format_rat(v)),
            None => println!("value: (unbounded)"),
        }
        println!("reference: {}", result.reference);
    }
}

pub fn construct(args: ConstructArgs) -> Result<(), Failure> {
    if args.name == "list" {
        println!(
            "{}",
            serde_json::to_string_pretty(&construction::catalog_json()).unwrap()
        );
        return Ok(());
    }
    let defaults = construction::default_params_for(&args.name).ok_or_else(|| {
        Failure::usage(format!(
            "unknown construction `{}`; available:\n{}",
            args.name,
            serde_json::to_string_pretty(&construction::catalog_json()).unwrap()
        ))
    })?;
    let params = Params {
        alpha: match &args.alpha {
            Some(raw) => rulespec::parse_alpha(Some(raw), "construct")?,
            None => defaults.alpha,
        },
        m: args.m.or(defaults.m),
        k: args.k.or(defaults.k),
    };
    let inst =
        construction::construct(&args.name, &params).map_err(|e| Failure::usage(e.to_string()))?;
    let out = args
        .out
        .ok_or_else(|| Failure::usage("--out <DIR> is required"))?;
    io::write_atomic(&out.join("election.elec"), &inst.election.serialize())?;
    let mut written = vec!["election.elec".to_string()];
    for (name, graph) in &inst.metrics {
        let file = format!("{name}.graph");
        io::write_atomic(&out.join(&file), &graph.serialize())?;
        written.push(file);
    }
    io::write_atomic(
        &out.join("facts.json"),
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&inst.facts_json()).unwrap()
        ),
    )?;
    written.push("facts.json".to_string());
    println!(
        "wrote {} files to {}: {}",
        written.len(),
        out.display(),
        written.join(", ")
    );
    Ok(())
}

pub fn random(args: RandomArgs) -> Result<(), Failure> {
    if args.n < 1 || args.m < 1 || args.dim < 1 {
        return Err(Failure::usage("--n, --m, --dim must be at least 1"));
    }
    let cap = args
        .alpha_cap
        .as_deref()
        .map(|raw| rulespec::parse_alpha(Some(raw), "--alpha-cap"))
        .transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut attempts = 0;
    let inst = loop {
        attempts += 1;
        let inst = random_instance_with(&mut rng, args.n, args.m, args.dim);
        match &cap {
            Some(cap) if inst.min_alpha > *cap => {
                if attempts >= 10_000 {
                    return Err(Failure::usage(format!(
                        "no instance with min alpha <= {} found in {attempts} draws",
                        format_rat(cap)
                    )));
                }
            }
            _ => break inst,
        }
    };
    io::write_atomic(&args.out.join("election.elec"), &inst.election.serialize())?;
    io::write_atomic(&args.out.join("metric.metric"), &inst.metric.serialize())?;
    let info = json!({
        "n": args.n,
        "m": args.m,
        "dim": args.dim,
        "seed": args.seed,
        "coordinate_denominator": COORD_DENOM,
        "coordinates": inst.coordinates,
        "min_alpha": format_rat(&inst.min_alpha),
        "draws": attempts,
    });
    io::write_atomic(
        &args.out.join("info.json"),
        &format!("{}\n", serde_json::to_string_pretty(&info).unwrap()),
    )?;
    println!(
        "wrote election.elec, metric.metric, info.json to {} (min alpha = {})",
        args.out.display(),
        format_rat(&inst.min_alpha)
    );
    Ok(())
}

pub fn batch(args: BatchArgs) -> Result<(), Failure> {
    let paths: Vec<std::path::PathBuf> = glob::glob(&args.instances)
        .map_err(|e| Failure::usage(format!("bad glob: {e}")))?
        .filter_map(Result::ok)
        .collect();
    if paths.is_empty() {
        return Err(Failure::usage(format!(
            "no instances match `{}`",
            args.instances
        )));
    }
    let alpha = rulespec::parse_alpha(Some(&args.alpha), "batch")?;
    let rule_names: Vec<String> = args
        .rules
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if rule_names.is_empty() {
        return Err(Failure::usage("--rules is empty"));
    }
    let specs: Vec<RuleSpec> = rule_names
        .iter()
        .map(|n| RuleSpec::parse(n))
        .collect::<Result<_, _>>()?;

    let mut jobs: Vec<(String, usize)> = Vec::new();
    for path in &paths {
        for rule_idx in 0..specs.len() {
            jobs.push((path.display().to_string(), rule_idx));
        }
    }
    jobs.sort();

    let rows = parallel::par_map(&jobs, |(instance, rule_idx)| {
        let started = std::time::Instant::now();
        let row = batch_row(instance, &rule_names[*rule_idx], &specs[*rule_idx], &alpha);
        let millis = if args.timing {
            started.elapsed().as_millis() as u64
        } else {
            0
        };
        (row, millis)
    });

    let mut csv = String::from("instance,rule,winner,lottery,status,value,millis\n");
    let mut failures = 0;
    for ((instance, rule, winner, lottery, status, value), millis) in &rows {
        if status == "error" {
            failures += 1;
        }
        csv.push_str(&format!(
            "{},{rule},{winner},{lottery},{status},{value},{millis}\n",
            csv_field(instance)
        ));
    }
    io::write_atomic(&args.csv, &csv)?;
    println!("wrote {} rows to {}", rows.len(), args.csv.display());
    if failures == rows.len() {
        return Err(Failure::usage("every batch row failed"));
    }
    Ok(())
}

type BatchRow = (String, String, String, String, String, String);

fn batch_row(instance: &str, rule_name: &str, spec: &RuleSpec, alpha: &Rat) -> BatchRow {
    let run = || -> Result<(String, String, String, String), Failure> {
        let e = io::load_election(std::path::Path::new(instance))?;
        let outcome = rulespec::apply(spec, &e, Some(alpha))?;
        let result = distortion_of_outcome(&e, &outcome.lottery, alpha);
        Ok((
            outcome.winner.map_or_else(|| "-".into(), |w| w.to_string()),
            outcome.lottery.display_compact(),
            result.status_str().to_string(),
            result.value.map_or_else(|| "-".into(), |v| format_rat(&v)),
        ))
    };
    match run() {
        Ok((winner, lottery, status, value)) => (
            instance.to_string(),
            rule_name.to_string(),
            winner,
            lottery,
            status,
            value,
        ),
        Err(f) => (
            instance.to_string(),
            rule_name.to_string(),
            "-".into(),
            "-".into(),
            "error".into(),
            f.message.replace(',', ";"),
        ),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn fairness(args: FairnessArgs) -> Result<(), Failure> {
    let d = io::load_metric(&args.metric)?;
    if args.candidate >= d.candidates() {
        return Err(Failure::usage(format!(
            "--candidate {} out of range (m = {})",
            args.candidate,
            d.candidates()
        )));
    }
    if args.k < 1 || args.k > d.voters() {
        return Err(Failure::usage(format!(
            "--k must lie in 1..={}",
            d.voters()
        )));
    }
    let value = d.phi_k(args.candidate, args.k);
    let best = (0..d.candidates())
        .map(|c| d.phi_k(c, args.k))
        .min()
        .unwrap();
    let ratio = if best.is_zero() {
        None
    } else {
        Some(&value / &best)
    };
    if args.json {
        let out = json!({
            "candidate": args.candidate,
            "k": args.k,
            "phi_k": format_rat(&value),
            "min_phi_k": format_rat(&best),
            "ratio": ratio.as_ref().map(format_rat),
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!(
            "phi_{}({}) = {}",
            args.k,
            args.candidate,
            format_rat(&value)
        );
        println!("min_c phi_{}(c) = {}", args.k, format_rat(&best));
        match ratio {
            Some(r) => println!("ratio = {}", format_rat(&r)),
            None => println!("ratio = (all candidates colocated with all voters)"),
        }
    }
    Ok(())
}
