use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use serde_json::{json, Value};
use vanish_core::construct::{construct_solution, construct_symmetric_solution};
use vanish_core::quasirandom::{test_property_p, test_property_p_sym};
use vanish_core::rational::{format_rational, parse_rational};
use vanish_core::{
    brute_force_vanishes, compute_k, decide_vanishing, expand, AlphaVector, GraphSpec, Graphon, LevelSelector,
    OracleConfig, StepFunction,
};

use crate::{CheckArgs, ConstructArgs, DecomposeArgs, GraphonArgs, KsetArgs, OracleArgs};

pub struct Report {
    pub json: Value,
    pub success: bool,
}

type Outcome = Result<Report, String>;

fn report(command: &str, config: Value, body: Value, success: bool) -> Outcome {
    let mut json = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
    });
    if let (Value::Object(out), Value::Object(fields)) = (&mut json, body) {
        out.extend(fields);
    }
    Ok(Report { json, success })
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid {what} in {}: {e}", path.display()))
}

fn write_json(path: &Path, value: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).expect("values serialize");
    fs::write(path, text + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn parse_alpha(text: &str) -> Result<AlphaVector, String> {
    AlphaVector::parse(text).map_err(|e| e.to_string())
}

fn parse_factors(text: Option<&str>) -> Result<Vec<usize>, String> {
    let Some(text) = text else {
        return Ok(Vec::new());
    };
    text.split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("invalid refinement factor {s:?}")),
            Ok(r) => Ok(r),
        })
        .collect()
}

fn alpha_json(alpha: &AlphaVector) -> Value {
    json!(alpha.entries().iter().map(format_rational).collect::<Vec<_>>())
}

pub fn decompose(args: &DecomposeArgs) -> Outcome {
    let f: StepFunction = read_json(&args.input, "function")?;
    let config = json!({
        "input": args.input,
        "project": args.project,
        "m": f.arity(),
        "n": f.resolution(),
    });
    let body = match &args.project {
        Some(text) => {
            let selector: LevelSelector = text.parse().map_err(|e: vanish_core::Error| e.to_string())?;
            json!({ "selector": selector.to_string(), "projection": vanish_core::walsh::project(&f, selector) })
        }
        None => json!({ "expansion": expand(&f) }),
    };
    if let Some(out) = &args.output {
        let payload = body.get("projection").or_else(|| body.get("expansion")).expect("one of the two");
        write_json(out, payload)?;
    }
    report("decompose", config, body, true)
}

pub fn check(args: &CheckArgs) -> Outcome {
    let alpha = parse_alpha(&args.alpha)?;
    let f: StepFunction = read_json(&args.input, "function")?;
    let verdict = decide_vanishing(&f, &alpha).map_err(|e| e.to_string())?;
    let config = json!({ "input": args.input, "alpha": alpha_json(&alpha), "m": f.arity(), "n": f.resolution() });
    report("check", config, verdict.to_json(), verdict.holds)
}

pub fn construct(args: &ConstructArgs) -> Outcome {
    let (f, alpha_value) = if args.symmetric {
        let r = args.r.expect("clap enforces -r");
        let alpha = parse_rational(&args.alpha).map_err(|e| e.to_string())?;
        let f = construct_symmetric_solution(args.m, r, &alpha, args.n, args.seed).map_err(|e| e.to_string())?;
        (f, json!(format_rational(&alpha)))
    } else {
        let alpha = parse_alpha(&args.alpha)?;
        let f = construct_solution(args.m, args.n, &alpha, args.seed).map_err(|e| e.to_string())?;
        (f, alpha_json(&alpha))
    };
    let config = json!({
        "m": args.m,
        "n": args.n,
        "alpha": alpha_value,
        "seed": args.seed,
        "symmetric": args.symmetric,
        "r": args.r,
        "output": args.output,
    });
    let function = serde_json::to_value(&f).expect("functions serialize");
    let body = match &args.output {
        Some(out) => {
            write_json(out, &function)?;
            json!({ "written": out })
        }
        None => json!({ "function": function }),
    };
    report("construct", config, body, true)
}

pub fn oracle(args: &OracleArgs) -> Outcome {
    let alpha = parse_alpha(&args.alpha)?;
    let f: StepFunction = read_json(&args.input, "function")?;
    let mut config = OracleConfig {
        refinements: parse_factors(args.refine.as_deref())?,
        budget: args.budget,
        seed: args.seed,
    };
    if config.refinements.is_empty() {
        config.refinements = vanish_core::oracle::default_refinements(f.arity());
    }
    let result = brute_force_vanishes(&f, &alpha, &config).map_err(|e| e.to_string())?;
    let resolved = json!({
        "input": args.input,
        "alpha": alpha_json(&alpha),
        "refine": config.refinements,
        "budget": config.budget,
        "seed": config.seed,
    });
    let mut body = result.to_json();
    body["holds"] = json!(result.all_zero);
    report("oracle", resolved, body, result.all_zero)
}

pub fn kset(args: &KsetArgs) -> Outcome {
    let alpha = parse_rational(&args.alpha).map_err(|e| e.to_string())?;
    let k = compute_k(args.m, args.r, &alpha).map_err(|e| e.to_string())?;
    let config = json!({ "m": args.m, "r": args.r, "alpha": format_rational(&alpha) });
    report("kset", config, serde_json::to_value(&k).expect("k-sets serialize"), true)
}

pub fn graphon_test(args: &GraphonArgs) -> Outcome {
    let alpha = parse_alpha(&args.alpha)?;
    let p = parse_rational(&args.p).map_err(|e| e.to_string())?;
    let graph: GraphSpec = read_json(&args.graph, "graph")?;
    let graphon: Graphon = read_json(&args.graphon, "graphon")?;
    let config = OracleConfig {
        refinements: parse_factors(args.refine.as_deref())?,
        budget: args.budget,
        seed: args.seed,
    };
    let test = if args.symmetrized { test_property_p_sym } else { test_property_p };
    let result = test(&graph, &alpha, &p, &graphon, &config).map_err(|e| e.to_string())?;
    let factors: Vec<usize> = result.oracle.factors.iter().map(|r| r.refinement).collect();
    let resolved = json!({
        "graph": args.graph,
        "graphon": args.graphon,
        "alpha": alpha_json(&alpha),
        "p": format_rational(&p),
        "refine": factors,
        "symmetrized": args.symmetrized,
        "budget": config.budget,
        "seed": config.seed,
    });
    report("graphon-test", resolved, result.to_json(), result.holds)
}
