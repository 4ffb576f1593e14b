use std::fs;
use std::path::Path;

use orthoset_core::perm::{automorphism_group, check_quasiprimitive, divisible_part, AutContext};
use orthoset_core::{OrthoLattice, Permutation};
use orthoset_qspace::{Matrix, ProjPoint, QuadraticSpace, Vector};
use serde_json::{json, Map, Value};

use crate::instance;
use crate::suite::{self, SuiteConfig};
use crate::{CliError, DiagramFormat, Outcome, QspaceAction, Status};

pub(crate) fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn outcome(pass: bool, v: &Value) -> Outcome {
    Outcome { status: if pass { Status::Pass } else { Status::Fail }, output: render(v) }
}

/// Group orders as JSON numbers when they fit, as strings otherwise.
pub(crate) fn order_json(order: u128) -> Value {
    u64::try_from(order).map_or_else(|_| Value::String(order.to_string()), Value::from)
}

const LATTICE_PROPS: &[&str] = &[
    "modular",
    "orthomodular",
    "atomistic",
    "covering",
    "finite-covering",
    "irreducible",
    "h1",
    "h2",
    "h3",
    "h4",
    "ps1",
    "ps2",
    "ps3",
];

fn lattice_verdicts(l: &OrthoLattice) -> Vec<(&'static str, bool)> {
    let h = l.check_h_conditions();
    let ps = l.check_projective_axioms();
    vec![
        ("modular", l.is_modular()),
        ("orthomodular", l.is_orthomodular()),
        ("atomistic", l.is_atomistic()),
        ("covering", l.has_covering()),
        ("finite-covering", h.h1),
        ("irreducible", l.is_irreducible()),
        ("h1", h.h1),
        ("h2", h.h2),
        ("h3", h.h3),
        ("h4", h.h4),
        ("ps1", ps.ps1),
        ("ps2", ps.ps2),
        ("ps3", ps.ps3),
    ]
}

fn key(name: &str) -> String {
    name.replace('-', "_")
}

pub fn check(input: &str, props: &[String], cap: usize, seed: u64) -> Result<Outcome, CliError> {
    let x = instance::orthoset(input, seed)?;
    let defaults = ["point-closed".to_string(), "boolean".to_string(), "rank".to_string()];
    let props = if props.is_empty() { &defaults[..] } else { props };
    let mut lattice = None;
    let mut report = Map::new();
    let mut pass = true;
    for p in props {
        let value = match p.as_str() {
            "point-closed" => x.is_point_closed(),
            "boolean" => x.is_boolean(),
            "rank" => {
                let r = x.rank().map_err(|e| CliError::Budget(e.to_string()))?;
                report.insert(key(p), Value::from(r));
                continue;
            }
            "duality" => orthoset_core::verify_atom_space_duality(&x, cap)?,
            name if LATTICE_PROPS.contains(&name) => {
                if lattice.is_none() {
                    lattice = Some(OrthoLattice::build(&x, cap)?);
                }
                let verdicts = lattice_verdicts(lattice.as_ref().expect("built above"));
                verdicts.into_iter().find(|(n, _)| *n == name).expect("listed property").1
            }
            other => return Err(CliError::Input(format!("unknown property {other:?}"))),
        };
        pass &= value;
        report.insert(key(p), Value::Bool(value));
    }
    Ok(outcome(pass, &Value::Object(report)))
}

pub fn lattice(
    input: &str,
    format: DiagramFormat,
    checks: &[String],
    write: Option<&Path>,
    cap: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let x = instance::orthoset(input, seed)?;
    for c in checks {
        if !LATTICE_PROPS.contains(&c.as_str()) {
            return Err(CliError::Input(format!("unknown lattice check {c:?}")));
        }
    }
    let l = OrthoLattice::build(&x, cap)?;
    let verdicts = lattice_verdicts(&l);
    let verdict_map: Map<String, Value> = verdicts.iter().map(|(n, v)| (key(n), Value::Bool(*v))).collect();
    let pass = checks.iter().all(|c| verdicts.iter().any(|(n, v)| n == c && *v));
    let diagram = match format {
        DiagramFormat::Dot => Value::String(l.to_dot()),
        DiagramFormat::Json => l.to_json(),
    };
    let mut report = json!({
        "size": l.len(),
        "height": l.height(),
        "atoms": l.atoms().len(),
        "point_closed": x.is_point_closed(),
        "verdicts": verdict_map,
    });
    match write {
        Some(path) => {
            let text = match &diagram {
                Value::String(s) => s.clone(),
                other => render(other),
            };
            fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            report["diagram_file"] = Value::String(path.display().to_string());
        }
        None => report["diagram"] = diagram,
    }
    Ok(outcome(pass, &report))
}

pub fn aut(input: &str, seed: u64) -> Result<Outcome, CliError> {
    let x = instance::orthoset(input, seed)?;
    let g = automorphism_group(&x);
    let mut seen = vec![false; x.len()];
    let mut orbits = Vec::new();
    for p in 0..x.len() {
        if !seen[p] {
            let orbit = g.orbit(p);
            for &q in &orbit {
                seen[q] = true;
            }
            orbits.push(orbit.iter().map(|&q| x.label(q).to_string()).collect::<Vec<_>>());
        }
    }
    let report = json!({
        "order": order_json(g.order()),
        "generators": g.generators().iter().map(|s| format!("{s:?}")).collect::<Vec<_>>(),
        "orbits": orbits,
        "transitive": g.is_transitive(),
    });
    Ok(outcome(true, &report))
}

pub fn ht(input: &str, budget: u64, seed: u64) -> Result<Outcome, CliError> {
    let x = instance::orthoset(input, seed)?;
    let ctx = AutContext::new(&x, budget);
    let report = ctx.check_ht()?;
    let reform = ctx.check_reformulations()?;
    let v = json!({
        "automorphism_group_order": order_json(ctx.aut.order()),
        "ht1": report.ht1,
        "ht2": report.ht2,
        "ht1_failure": report.ht1_failure,
        "ht2_failure": report.ht2_failure,
        "orbit_identity_all_pairs": report.pairs.iter().all(|p| p.orbit_identity),
        "reformulations": reform,
        "pairs": report.pairs,
    });
    Ok(outcome(report.ht1 && report.ht2, &v))
}

pub fn dt(input: &str, budget: u64, seed: u64) -> Result<Outcome, CliError> {
    let x = instance::orthoset(input, seed)?;
    let ctx = AutContext::new(&x, budget);
    let report = ctx.check_dt()?;
    let pass = report.dt0 && report.dt1 && report.dt2;
    Ok(outcome(pass, &serde_json::to_value(&report).expect("serializable")))
}

pub fn qp(input: &str, rotations: Option<&Path>, budget: u64, seed: u64) -> Result<Outcome, CliError> {
    let x = instance::orthoset(input, seed)?;
    let (rots, source) = match rotations {
        Some(path) => {
            let src = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let rots: Vec<Permutation> =
                serde_json::from_str(&src).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            (rots, "file")
        }
        None => {
            let ctx = AutContext::new(&x, budget);
            let mut rots = Vec::new();
            for e in 0..x.len() {
                for f in (0..x.len()).filter(|&f| f != e) {
                    let part = divisible_part(&ctx.g_ef(e, f)?, budget)?;
                    rots.extend(part.elements.into_iter().filter(|p| !p.is_identity()));
                }
            }
            rots.sort();
            rots.dedup();
            (rots, "divisible parts")
        }
    };
    let report = check_quasiprimitive(&x, &rots)?;
    let mut v = serde_json::to_value(&report).expect("serializable");
    v["rotation_source"] = Value::String(source.into());
    if report.rotations.is_empty() {
        v["note"] = Value::String("no nontrivial rotations; the condition holds vacuously".into());
    }
    Ok(outcome(report.quasiprimitive, &v))
}

fn parse_vector(h: &QuadraticSpace, text: &str) -> Result<Vector, CliError> {
    let value = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("{text:?}: {e}")))?
    } else {
        Value::Array(text.split(',').map(|s| Value::String(s.trim().to_string())).collect())
    };
    Ok(h.parse_vector(&value)?)
}

fn point(h: &QuadraticSpace, text: &str) -> Result<ProjPoint, CliError> {
    Ok(h.point(&parse_vector(h, text)?)?)
}

pub fn qspace(input: &str, action: QspaceAction) -> Result<Outcome, CliError> {
    let h = instance::space(input)?;
    match action {
        QspaceAction::Rotate { from, to } => {
            let (p, q) = (point(&h, &from)?, point(&h, &to)?);
            let r = h.simple_rotation(&p, &q)?;
            let mut v = r.to_json();
            v["maps_from_to"] = Value::Bool(r.apply_point(&p) == q);
            v["form_preserving"] = Value::Bool(h.preserves_form(r.matrix()));
            Ok(outcome(true, &v))
        }
        QspaceAction::Root { from, to, pow } => {
            if !pow.is_power_of_two() {
                return Err(CliError::Input(format!("--pow must be a power of two, got {pow}")));
            }
            let (p, q) = (point(&h, &from)?, point(&h, &to)?);
            let r = h.simple_rotation(&p, &q)?;
            let mut s = r.clone();
            for _ in 0..pow.trailing_zeros() {
                s = h.half_root(&s)?;
            }
            let verified = h.rotation_pow(&s, pow).matrix() == r.matrix();
            let mut v = s.to_json();
            v["pow"] = Value::from(pow);
            v["verified"] = Value::Bool(verified);
            Ok(outcome(verified, &v))
        }
        QspaceAction::Probe { a, word_length } => {
            let a = h.tower().parse(&a).map_err(|e| CliError::Input(format!("{a:?}: {e}")))?;
            let (e1, e2) = (h.basis_vector(0), h.basis_vector(1));
            let plane = h.orthogonalize(&[e1.clone(), e2.clone()])?;
            let (u, w) = (h.normalize(&plane[0])?, h.normalize(&plane[1])?);
            let rot = h.small_rotation(&u, &w, &a)?;
            let n = h.dim();
            let cycle = Matrix::from_columns((0..n).map(|j| h.basis_vector((j + 1) % n)).collect())?;
            let mut conjugators = vec![Matrix::identity(h.tower(), n)];
            if h.preserves_form(&cycle) {
                conjugators.push(cycle);
            }
            let targets = [(h.point(&e1)?, h.point(&e2)?)];
            let report = h.quasiprimitivity_probe(&rot, &conjugators, &[], &targets, word_length)?;
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["rotation"] = rot.to_json();
            Ok(outcome(report.confined, &v))
        }
    }
}

pub fn suite(config: Option<&Path>, seed: Option<u64>, out: Option<&Path>) -> Result<Outcome, CliError> {
    let mut cfg = match config {
        Some(path) => {
            let src = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<SuiteConfig>(&src).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig::default_suite(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let (report, pass) = suite::run_suite(&cfg)?;
    let text = render(&report);
    if let Some(path) = out {
        fs::write(path, &text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome { status: if pass { Status::Pass } else { Status::Fail }, output: text })
}
