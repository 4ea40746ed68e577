//! Randomized campaigns checking that the interchange verdict matches the
//! Φ-inf-directedness scan on every instance. A violation is shrunk
//! greedily and serialized as a scenario that reproduces it.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::functional::{Domain, Functional};
use crate::interchange::{verify_interchange, Family, InterchangeOptions, InterchangeReport};
use crate::lattice::FnClass;
use crate::measure::MeasureSpace;
use crate::random;
use crate::scenario::{capacity_to_json, scenario_to_json};

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_atoms: usize,
    pub max_family: usize,
    pub options: InterchangeOptions,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            trials: 1000,
            seed: 0,
            max_atoms: 6,
            max_family: 5,
            options: InterchangeOptions::default(),
        }
    }
}

#[derive(Clone)]
pub struct Instance {
    pub index: usize,
    pub family: Family,
    pub functional: Functional,
    pub functional_spec: Value,
}

/// Instance `index` of a campaign, drawn from its own stream `seed + index`.
pub fn instance(cfg: &OracleConfig, index: usize) -> Result<Instance> {
    if cfg.max_atoms == 0 || cfg.max_family == 0 {
        return Err(Error::input("--max-atoms and --max-family must be positive"));
    }
    if cfg.max_atoms > 16 {
        return Err(Error::input("--max-atoms is limited to 16"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(index as u64));
    let n = rng.random_range(1..=cfg.max_atoms);
    let k = rng.random_range(1..=cfg.max_family);
    let space = random::space(&mut rng, n, true);
    let (functional, spec, domain) = match rng.random_range(0..3) {
        0 => (
            Functional::extended_lebesgue(),
            json!({"kind": "extended_lebesgue"}),
            Domain::PlusCone,
        ),
        1 => {
            let c = random::capacity(&mut rng, &space);
            let spec = json!({"kind": "choquet", "capacity": capacity_to_json(&c)?});
            (Functional::choquet(c), spec, Domain::Nonnegative)
        }
        _ => (Functional::ess_sup(), json!({"kind": "ess_sup"}), Domain::All),
    };
    let family = Family::new(random::family(&mut rng, &space, domain, k))?;
    Ok(Instance {
        index,
        family,
        functional,
        functional_spec: spec,
    })
}

fn violations(x: &Family, phi: &Functional, opts: &InterchangeOptions) -> Result<Vec<String>> {
    let r = verify_interchange(x, phi, opts)?;
    Ok(violations_of(&r))
}

fn violations_of(r: &InterchangeReport) -> Vec<String> {
    let mut v = r.invariant_failures.clone();
    if r.interchange_holds.holds() != r.phi_inf_directed.is_directed() {
        v.push(format!(
            "interchange {:?} but Φ-inf-directed verdict {:?}",
            r.interchange_holds, r.phi_inf_directed
        ));
    }
    v
}

/// Drops members, then pulls values toward zero, while the violation
/// persists. The space is kept because capacities are tied to it.
pub fn shrink(x: &Family, phi: &Functional, opts: &InterchangeOptions) -> Family {
    let still_fails = |f: &Family| violations(f, phi, opts).map(|v| !v.is_empty()).unwrap_or(false);
    let mut current = x.clone();
    let mut progress = true;
    while progress {
        progress = false;
        for i in 0..current.len() {
            if current.len() == 1 {
                break;
            }
            let mut members = current.members().to_vec();
            members.remove(i);
            let candidate = Family::new(members).expect("nonempty");
            if still_fails(&candidate) {
                current = candidate;
                progress = true;
                break;
            }
        }
        if progress {
            continue;
        }
        'values: for m in 0..current.len() {
            for a in 0..current.members()[m].space().len() {
                let v = current.members()[m].value(a);
                if v.is_zero() {
                    continue;
                }
                let mut values = current.members()[m].values().to_vec();
                values[a] = ExtReal::zero();
                let replaced = FnClass::new(current.members()[m].space().clone(), values).expect("aligned");
                if !phi.domain().contains(&replaced) {
                    continue;
                }
                let mut members = current.members().to_vec();
                members[m] = replaced;
                let candidate = Family::new(members).expect("nonempty");
                if still_fails(&candidate) {
                    current = candidate;
                    progress = true;
                    break 'values;
                }
            }
        }
    }
    current
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub instance: usize,
    pub failures: Vec<String>,
    /// A scenario document reproducing the failure through `check`.
    pub scenario: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub trials: usize,
    pub seed: u64,
    pub max_atoms: usize,
    pub max_family: usize,
    pub holds: usize,
    pub fails: usize,
    pub by_functional: BTreeMap<String, usize>,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub fn run(cfg: &OracleConfig) -> Result<OracleSummary> {
    run_with(cfg, |_, _| {})
}

/// Like [`run`], calling `inspect` on every instance and its report.
pub fn run_with(cfg: &OracleConfig, mut inspect: impl FnMut(&Instance, &InterchangeReport)) -> Result<OracleSummary> {
    let mut summary = OracleSummary {
        trials: cfg.trials,
        seed: cfg.seed,
        max_atoms: cfg.max_atoms,
        max_family: cfg.max_family,
        holds: 0,
        fails: 0,
        by_functional: BTreeMap::new(),
        violations: 0,
        counterexample: None,
    };
    for index in 0..cfg.trials {
        let inst = instance(cfg, index)?;
        let r = verify_interchange(&inst.family, &inst.functional, &cfg.options)?;
        inspect(&inst, &r);
        *summary.by_functional.entry(inst.functional.name().to_string()).or_default() += 1;
        if r.interchange_holds.holds() {
            summary.holds += 1;
        } else {
            summary.fails += 1;
        }
        let found = violations_of(&r);
        if !found.is_empty() {
            summary.violations += 1;
            if summary.counterexample.is_none() {
                let small = shrink(&inst.family, &inst.functional, &cfg.options);
                let failures = violations(&small, &inst.functional, &cfg.options)?;
                summary.counterexample = Some(Counterexample {
                    instance: index,
                    failures: if failures.is_empty() { found } else { failures },
                    scenario: scenario_to_json(&small, &inst.functional_spec, &cfg.options),
                });
            }
        }
    }
    Ok(summary)
}

/// The shared space of an instance.
pub fn space_of(inst: &Instance) -> &Arc<MeasureSpace> {
    inst.family.members()[0].space()
}
