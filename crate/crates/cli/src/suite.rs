//! Batch runs of named checks over a list of instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::checks::{self, Verdict, REGISTRY};
use crate::instance::{self, Instance};
use crate::{CliError, DEFAULT_BUDGET, DEFAULT_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    pub lattice_cap: usize,
    pub group_budget: u64,
    pub word_length: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { lattice_cap: DEFAULT_CAP, group_budget: DEFAULT_BUDGET, word_length: 3 }
    }
}

fn all_checks() -> Vec<String> {
    REGISTRY.iter().map(|(n, _)| n.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub instances: Vec<String>,
    #[serde(default = "all_checks")]
    pub checks: Vec<String>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub seed: u64,
}

impl SuiteConfig {
    pub fn default_suite() -> Self {
        SuiteConfig {
            instances: ["boolean(3)", "boolean(4)", "boolean(5)", "pairs(2)", "cycle(6)", "euclidean(3)", "nonarchimedean(4)"]
                .map(String::from)
                .to_vec(),
            checks: all_checks(),
            budgets: Budgets::default(),
            seed: 0,
        }
    }
}

/// SplitMix64 finalizer over the seed and two indices.
fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_one(inst: &Result<Instance, CliError>, f: checks::CheckFn, budgets: &Budgets, seed: u64) -> (Verdict, Value) {
    let inst = match inst {
        Ok(i) => i,
        Err(e) => return (Verdict::Fail, json!({ "error": e.to_string() })),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match f(inst, budgets, &mut rng) {
        Ok(r) => (r.verdict, r.details),
        Err(CliError::Budget(msg)) => (Verdict::Skip, json!({ "reason": msg })),
        Err(CliError::Input(msg)) => (Verdict::Fail, json!({ "error": msg })),
    }
}

/// Runs every check on every instance and returns the report and whether no check failed.
/// Worker count follows `ORTHOSET_LAB_THREADS` when set; results keep configuration order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<(Value, bool), CliError> {
    let fns = cfg
        .checks
        .iter()
        .map(|c| checks::lookup(c).ok_or_else(|| CliError::Input(format!("unknown check {c:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("ORTHOSET_LAB_THREADS").ok().and_then(|s| s.parse().ok()) {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Input(e.to_string()))?;
    let instances: Vec<_> = cfg
        .instances
        .iter()
        .enumerate()
        .map(|(i, input)| instance::resolve(input, mix(cfg.seed, i as u64, u64::MAX)))
        .collect();
    let tasks: Vec<(usize, usize)> = (0..instances.len()).flat_map(|i| (0..fns.len()).map(move |c| (i, c))).collect();
    let results: Vec<(Verdict, Value)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, c)| run_one(&instances[i], fns[c], &cfg.budgets, mix(cfg.seed, i as u64, c as u64)))
            .collect()
    });
    let mut counts = [0usize; 3];
    let entries: Vec<Value> = tasks
        .iter()
        .zip(results)
        .map(|(&(i, c), (verdict, details))| {
            counts[verdict as usize] += 1;
            json!({
                "instance": cfg.instances[i],
                "kind": instances[i].as_ref().map_or("invalid", Instance::kind),
                "check": cfg.checks[c],
                "status": verdict.as_str(),
                "details": details,
            })
        })
        .collect();
    let report = json!({
        "seed": cfg.seed,
        "budgets": cfg.budgets,
        "results": entries,
        "summary": { "pass": counts[0], "fail": counts[1], "skip": counts[2] },
    });
    Ok((report, counts[1] == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults() {
        let cfg: SuiteConfig = serde_json::from_str(r#"{"instances": ["boolean(3)"]}"#).unwrap();
        assert_eq!(cfg.checks.len(), REGISTRY.len());
        assert_eq!(cfg.budgets, Budgets::default());
        assert!(serde_json::from_str::<SuiteConfig>(r#"{"instances": [], "bogus": 1}"#).is_err());
    }

    #[test]
    fn empty_and_unknown() {
        let cfg = SuiteConfig { instances: vec![], checks: all_checks(), budgets: Budgets::default(), seed: 0 };
        let (report, pass) = run_suite(&cfg).unwrap();
        assert!(pass);
        assert_eq!(report["results"], json!([]));
        let bad = SuiteConfig { checks: vec!["nope".into()], ..cfg };
        assert!(matches!(run_suite(&bad), Err(CliError::Input(_))));
    }
}
