//! Named generators and instance files.

use std::fs;

use orthoset_core::Orthoset;
use orthoset_field::Tower;
use orthoset_qspace::QuadraticSpace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub enum Instance {
    Orthoset(Orthoset),
    Space(QuadraticSpace),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Orthoset(_) => "orthoset",
            Instance::Space(_) => "qspace",
        }
    }
}

fn parse_call(input: &str) -> Option<(&str, Vec<usize>)> {
    let (name, rest) = input.trim().split_once('(')?;
    let args = rest.strip_suffix(')')?;
    let args = args.split(',').map(|a| a.trim().parse().ok()).collect::<Option<Vec<usize>>>()?;
    Some((name.trim(), args))
}

/// Resolves `boolean(n)`, `pairs(k)`, `cycle(n)`, `random(n)`, `euclidean(n)`,
/// `nonarchimedean(n)`, or a path to an orthoset or quadratic-space JSON file.
/// `random(n)` draws each pair orthogonal with probability 0.4 from `seed`.
pub fn resolve(input: &str, seed: u64) -> Result<Instance, CliError> {
    if let Some((name, args)) = parse_call(input) {
        let one = |what: &str| match args[..] {
            [n] => Ok(n),
            _ => Err(CliError::Input(format!("{what} takes one argument"))),
        };
        let x = match name {
            "boolean" => Orthoset::boolean(one(name)?),
            "pairs" => Orthoset::pairs(one(name)?),
            "cycle" => Orthoset::cycle(one(name)?),
            "random" => Orthoset::random(one(name)?, 0.4, &mut ChaCha8Rng::seed_from_u64(seed)),
            "euclidean" => return Ok(Instance::Space(QuadraticSpace::identity(&Tower::rationals(), one(name)?)?)),
            "nonarchimedean" => {
                return Ok(Instance::Space(QuadraticSpace::identity(&Tower::rational_functions(), one(name)?)?))
            }
            _ => return Err(CliError::Input(format!("unknown generator {name:?}"))),
        };
        return Ok(Instance::Orthoset(x?));
    }
    let src = fs::read_to_string(input).map_err(|e| CliError::Input(format!("{input}: {e}")))?;
    let is_space = serde_json::from_str::<serde_json::Value>(&src).ok().is_some_and(|v| v.get("gram").is_some());
    if is_space {
        Ok(Instance::Space(QuadraticSpace::from_json(&src).map_err(|e| CliError::Input(format!("{input}: {e}")))?))
    } else {
        Ok(Instance::Orthoset(Orthoset::from_json(&src).map_err(|e| CliError::Input(format!("{input}: {e}")))?))
    }
}

pub fn orthoset(input: &str, seed: u64) -> Result<Orthoset, CliError> {
    match resolve(input, seed)? {
        Instance::Orthoset(x) => Ok(x),
        Instance::Space(_) => Err(CliError::Input(format!("{input} is a quadratic space, expected an orthoset"))),
    }
}

pub fn space(input: &str) -> Result<QuadraticSpace, CliError> {
    match resolve(input, 0)? {
        Instance::Space(h) => Ok(h),
        Instance::Orthoset(_) => Err(CliError::Input(format!("{input} is an orthoset, expected a quadratic space"))),
    }
}
