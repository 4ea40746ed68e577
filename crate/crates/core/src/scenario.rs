//! Scenario files: a space, a family or generated sequence, a functional,
//! and run options. Integrand and Shapiro scenarios share the same space and
//! functional encodings.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::decomposable::{
    is_decomposable, verify_rw_argmin, verify_rw_interchange, verify_shapiro, ArgminReport, DecompositionReport,
    Integrand, RwReport, Selection, SelectionSet, ShapiroReport, ShapiroScenario, DEFAULT_SELECTION_BUDGET,
};
use crate::error::{Error, Result};
use crate::ext_real::{Backing, Scalar};
use crate::functional::{Functional, MonotoneMap};
use crate::integrals::{set_label, Capacity};
use crate::interchange::{
    verify_interchange, verify_interchange_sequence, Family, InterchangeOptions, InterchangeReport, SequenceSpec,
};
use crate::json::{capacity_from_json, ext_from_json, ext_to_json, fn_from_json, scalar_from_json, space_from_json};
use crate::lattice::FnClass;
use crate::measure::MeasureSpace;

/// Named sequence generators available from scenario files.
#[derive(Clone, Debug)]
pub enum Generator {
    /// `−n` on the unit interval `(n, n+1)`, zero elsewhere.
    ShiftedBumps,
    /// `base + 1/(n+1)`.
    Shifted(FnClass),
    Constant(FnClass),
}

#[derive(Clone, Debug)]
pub enum FamilySource {
    Literal(Family),
    Generated { generator: Generator, prefix: usize },
}

#[derive(Clone)]
pub struct Scenario {
    pub space: Option<Arc<MeasureSpace>>,
    pub family: FamilySource,
    pub functional: Functional,
    pub functional_spec: Value,
    pub options: InterchangeOptions,
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::schema(format!("{what} must be an object")))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<Option<usize>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|n| Some(n as usize))
            .ok_or_else(|| Error::schema(format!("{key} must be a nonnegative integer"))),
    }
}

fn options_from_json(obj: &Map<String, Value>, backing: Backing) -> Result<InterchangeOptions> {
    let mut opts = InterchangeOptions::for_backing(backing);
    if let Some(b) = usize_field(obj, "subset_budget")? {
        opts.subset_budget = b;
    }
    if let Some(v) = obj.get("seed") {
        opts.seed = v.as_u64().ok_or_else(|| Error::schema("seed must be a nonnegative integer"))?;
    }
    if let Some(v) = obj.get("tolerance") {
        opts.tolerance = scalar_from_json(v, backing)?;
    }
    if let Some(v) = obj.get("divergence_threshold") {
        opts.divergence_threshold = Some(scalar_from_json(v, backing)?);
    }
    Ok(opts)
}

fn map_from_json(v: &Value, backing: Backing) -> Result<MonotoneMap> {
    let obj = object(v, "map")?;
    let field = |k: &str| obj.get(k).ok_or_else(|| Error::schema(format!("map needs \"{k}\"")));
    match obj.get("kind").and_then(Value::as_str) {
        Some("affine") => Ok(MonotoneMap::Affine {
            scale: scalar_from_json(field("scale")?, backing)?,
            shift: match obj.get("shift") {
                Some(s) => scalar_from_json(s, backing)?,
                None => Scalar::zero(),
            },
        }),
        Some("max_with") => Ok(MonotoneMap::MaxWith(ext_from_json(field("value")?, backing)?)),
        Some("min_with") => Ok(MonotoneMap::MinWith(ext_from_json(field("value")?, backing)?)),
        other => Err(Error::schema(format!("unknown map kind {other:?}"))),
    }
}

/// `{"kind":"extended_lebesgue"}`, `{"kind":"choquet","capacity":{...}}`,
/// `{"kind":"post_compose","inner":{...},"map":{...}}`, ...
pub fn functional_from_json(v: &Value, space: Option<&Arc<MeasureSpace>>, backing: Backing) -> Result<Functional> {
    let obj = object(v, "functional")?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("extended_lebesgue") | Some("lebesgue") => Ok(Functional::extended_lebesgue()),
        Some("outer") => Ok(Functional::outer()),
        Some("inner") => Ok(Functional::inner()),
        Some("ess_sup") => Ok(Functional::ess_sup()),
        Some("choquet") => {
            let space = space.ok_or_else(|| Error::schema("a choquet functional needs the scenario space"))?;
            let c = obj
                .get("capacity")
                .ok_or_else(|| Error::schema("choquet functional needs \"capacity\""))?;
            Ok(Functional::choquet(capacity_from_json(c, space, backing)?))
        }
        Some("post_compose") => {
            let inner = obj
                .get("inner")
                .ok_or_else(|| Error::schema("post_compose needs \"inner\""))?;
            let map = obj.get("map").ok_or_else(|| Error::schema("post_compose needs \"map\""))?;
            Functional::post_compose(functional_from_json(inner, space, backing)?, map_from_json(map, backing)?)
        }
        other => Err(Error::schema(format!("unknown functional kind {other:?}"))),
    }
}

/// A capacity as an explicit table over every nonempty set.
pub fn capacity_to_json(c: &Capacity) -> Result<Value> {
    let space = c.space();
    let n = space.len();
    if n > 16 {
        return Err(Error::input("capacity tables are limited to 16 atoms"));
    }
    let mut values = Map::new();
    for mask in 1u64..(1u64 << n) {
        let set = space.atom_set_from_indices((0..n).filter(|i| mask >> i & 1 == 1))?;
        values.insert(set_label(space, &set), ext_to_json(&c.value(&set)?));
    }
    Ok(json!({"kind": "table", "values": values}))
}

fn generator_from_json(
    obj: &Map<String, Value>,
    space: Option<&Arc<MeasureSpace>>,
    backing: Backing,
) -> Result<FamilySource> {
    let prefix = usize_field(obj, "prefix")?.unwrap_or(100);
    let base = |key: &str| -> Result<FnClass> {
        let space = space.ok_or_else(|| Error::schema("this generator needs the scenario space"))?;
        let v = obj.get(key).ok_or_else(|| Error::schema(format!("generator needs \"{key}\"")))?;
        fn_from_json(v, space, backing)
    };
    let generator = match obj.get("generator").and_then(Value::as_str) {
        Some("example-2-6") | Some("shifted-bumps") => Generator::ShiftedBumps,
        Some("shifted") => Generator::Shifted(base("base")?),
        Some("constant") => Generator::Constant(base("base")?),
        other => return Err(Error::schema(format!("unknown generator {other:?}"))),
    };
    Ok(FamilySource::Generated { generator, prefix })
}

impl Scenario {
    pub fn parse(text: &str, backing: Backing) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::schema(format!("invalid JSON: {e}")))?;
        Self::from_json(&v, backing)
    }

    pub fn from_json(v: &Value, backing: Backing) -> Result<Self> {
        let obj = object(v, "scenario")?;
        let space = match obj.get("space") {
            Some(s) => Some(space_from_json(s, backing)?.into_shared()),
            None => None,
        };
        let family = match obj.get("family") {
            Some(Value::Array(rows)) => {
                let s = space
                    .as_ref()
                    .ok_or_else(|| Error::schema("a literal family needs \"space\""))?;
                let members = rows
                    .iter()
                    .map(|r| fn_from_json(r, s, backing))
                    .collect::<Result<Vec<_>>>()?;
                FamilySource::Literal(Family::new(members)?)
            }
            Some(Value::Object(g)) => generator_from_json(g, space.as_ref(), backing)?,
            _ => return Err(Error::schema("scenario needs \"family\": an array or a generator object")),
        };
        let functional_spec = obj
            .get("functional")
            .cloned()
            .unwrap_or_else(|| json!({"kind": "extended_lebesgue"}));
        let functional = functional_from_json(&functional_spec, space.as_ref(), backing)?;
        let options = options_from_json(obj, backing)?;
        Ok(Scenario {
            space,
            family,
            functional,
            functional_spec,
            options,
        })
    }

    /// Overrides the prefix of a generated family.
    pub fn set_prefix(&mut self, n: usize) {
        if let FamilySource::Generated { prefix, .. } = &mut self.family {
            *prefix = n;
        }
    }

    pub fn sequence(&self) -> Result<Option<SequenceSpec>> {
        let FamilySource::Generated { generator, prefix } = &self.family else {
            return Ok(None);
        };
        let spec = match generator {
            Generator::ShiftedBumps => SequenceSpec::shifted_bumps(*prefix)?,
            Generator::Shifted(f) => SequenceSpec::shifted(f.clone(), *prefix)?,
            Generator::Constant(f) => SequenceSpec::constant(f.clone(), *prefix)?,
        };
        Ok(Some(match &self.options.divergence_threshold {
            Some(t) => spec.with_threshold(t.clone())?,
            None => spec,
        }))
    }

    pub fn run(&self) -> Result<InterchangeReport> {
        match &self.family {
            FamilySource::Literal(x) => verify_interchange(x, &self.functional, &self.options),
            FamilySource::Generated { .. } => {
                let spec = self.sequence()?.expect("generated");
                verify_interchange_sequence(&spec, &self.functional, &self.options)
            }
        }
    }
}

/// The literal-family scenario document for `x` and a functional spec.
pub fn scenario_to_json(x: &Family, functional_spec: &Value, opts: &InterchangeOptions) -> Value {
    let space = x.members()[0].space();
    let mut obj = Map::new();
    obj.insert("space".into(), crate::json::space_to_json(space));
    obj.insert("family".into(), serde_json::to_value(x.members()).expect("serializable"));
    obj.insert("functional".into(), functional_spec.clone());
    obj.insert("subset_budget".into(), opts.subset_budget.into());
    obj.insert("seed".into(), opts.seed.into());
    obj.insert("tolerance".into(), crate::json::scalar_to_json(&opts.tolerance));
    Value::Object(obj)
}

pub fn integrand_from_json(v: &Value, space: &Arc<MeasureSpace>, backing: Backing) -> Result<Integrand> {
    let obj = object(v, "integrand")?;
    let controls = obj
        .get("controls")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::schema("integrand.controls must be an array"))?
        .iter()
        .map(|c| match c {
            Value::Array(xs) => xs.iter().map(|x| scalar_from_json(x, backing)).collect(),
            x => Ok(vec![scalar_from_json(x, backing)?]),
        })
        .collect::<Result<Vec<Vec<Scalar>>>>()?;
    let table = obj
        .get("table")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::schema("integrand.table must be an array of rows"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::schema("integrand rows must be arrays"))?
                .iter()
                .map(|x| ext_from_json(x, backing))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Integrand::new(space.clone(), controls, table)
}

fn selection_list(v: &Value) -> Result<Vec<Selection>> {
    v.as_array()
        .ok_or_else(|| Error::schema("selections must be an array"))?
        .iter()
        .map(|s| {
            s.as_array()
                .ok_or_else(|| Error::schema("a selection is an array of control indices"))?
                .iter()
                .map(|c| {
                    c.as_u64()
                        .map(|c| c as usize)
                        .ok_or_else(|| Error::schema("control indices must be nonnegative integers"))
                })
                .collect()
        })
        .collect()
}

/// Missing means the full product. Otherwise
/// `{"kind":"product","admissible":[[0,1],[1]]}` or
/// `{"kind":"explicit","selections":[[0,0],[1,1]]}`.
pub fn selection_set_from_json(v: Option<&Value>, f: &Integrand) -> Result<SelectionSet> {
    let (n, k) = (f.space().len(), f.n_controls());
    let Some(v) = v else {
        return Ok(SelectionSet::full(n, k));
    };
    let obj = object(v, "selections")?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("full") => Ok(SelectionSet::full(n, k)),
        Some("product") => {
            let adm = selection_list(
                obj.get("admissible")
                    .ok_or_else(|| Error::schema("product selections need \"admissible\""))?,
            )?;
            if adm.len() != n {
                return Err(Error::schema(format!("admissible sets given for {} of {n} atoms", adm.len())));
            }
            SelectionSet::product(k, adm)
        }
        Some("explicit") => SelectionSet::explicit(
            n,
            k,
            selection_list(
                obj.get("selections")
                    .ok_or_else(|| Error::schema("explicit selections need \"selections\""))?,
            )?,
        ),
        other => Err(Error::schema(format!("unknown selection set kind {other:?}"))),
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RwCheckReport {
    pub interchange: RwReport,
    pub decomposition: DecompositionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin: Option<ArgminReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin_skipped: Option<String>,
}

impl RwCheckReport {
    pub fn invariant_failures(&self) -> Vec<String> {
        let mut out = self.interchange.invariant_failures.clone();
        out.extend(self.decomposition.invariant_failures.iter().cloned());
        out
    }
}

pub fn run_rw(f: &Integrand, u: &SelectionSet, budget: u128) -> Result<RwCheckReport> {
    let interchange = verify_rw_interchange(f, u, budget)?;
    let decomposition = is_decomposable(u, f.space(), budget)?;
    let (argmin, argmin_skipped) = match verify_rw_argmin(f, u, budget) {
        Ok(r) => (Some(r), None),
        Err(Error::NotApplicable(why)) => (None, Some(why)),
        Err(e) => return Err(e),
    };
    Ok(RwCheckReport {
        interchange,
        decomposition,
        argmin,
        argmin_skipped,
    })
}

/// `{"space":..., "integrand":..., "selections":..., "budget":N}`
pub fn run_rw_json(text: &str, backing: Backing) -> Result<RwCheckReport> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::schema(format!("invalid JSON: {e}")))?;
    let obj = object(&v, "scenario")?;
    let space = space_from_json(obj.get("space").ok_or_else(|| Error::schema("scenario needs \"space\""))?, backing)?
        .into_shared();
    let f = integrand_from_json(
        obj.get("integrand").ok_or_else(|| Error::schema("scenario needs \"integrand\""))?,
        &space,
        backing,
    )?;
    let u = selection_set_from_json(obj.get("selections"), &f)?;
    let budget = usize_field(obj, "budget")?.map_or(DEFAULT_SELECTION_BUDGET, |b| b as u128);
    run_rw(&f, &u, budget)
}

/// `{"space":..., "integrand":..., "functional":..., "p":2, "selections":...,
/// "sequence":[[...],...], "declared_minimum":[...]}`
pub fn shapiro_from_json(text: &str, backing: Backing) -> Result<(ShapiroScenario, InterchangeOptions)> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::schema(format!("invalid JSON: {e}")))?;
    let obj = object(&v, "scenario")?;
    let space = space_from_json(obj.get("space").ok_or_else(|| Error::schema("scenario needs \"space\""))?, backing)?
        .into_shared();
    let integrand = integrand_from_json(
        obj.get("integrand").ok_or_else(|| Error::schema("scenario needs \"integrand\""))?,
        &space,
        backing,
    )?;
    let selections = selection_set_from_json(obj.get("selections"), &integrand)?;
    let phi = functional_from_json(
        obj.get("functional").unwrap_or(&json!({"kind": "extended_lebesgue"})),
        Some(&space),
        backing,
    )?;
    let p = match obj.get("p") {
        Some(p) => scalar_from_json(p, backing)?,
        None => Scalar::one(),
    };
    let seq = selection_list(obj.get("sequence").ok_or_else(|| Error::schema("scenario needs \"sequence\""))?)?;
    if seq.is_empty() {
        return Err(Error::schema("sequence must list at least one selection"));
    }
    let declared_minimum = match obj.get("declared_minimum") {
        Some(d) => Some(fn_from_json(d, &space, backing)?),
        None => None,
    };
    let budget = usize_field(obj, "budget")?.map_or(DEFAULT_SELECTION_BUDGET, |b| b as u128);
    let prefix_len = seq.len();
    let seq = Arc::new(seq);
    let sc = ShapiroScenario {
        phi,
        p,
        integrand,
        selections,
        sequence: Arc::new(move |n| seq[n.min(seq.len() - 1)].clone()),
        prefix_len,
        declared_minimum,
        budget,
    };
    Ok((sc, options_from_json(obj, backing)?))
}

pub fn run_shapiro_json(text: &str, backing: Backing) -> Result<ShapiroReport> {
    let (sc, opts) = shapiro_from_json(text, backing)?;
    verify_shapiro(&sc, &opts)
}
