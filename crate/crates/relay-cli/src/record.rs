//! Per-point records and their CSV/JSON encodings.
//!
//! Floats are serialized with 12 significant digits in both formats (JSON
//! values are rounded through the same formatter), so the two encodings of
//! a scan decode to identical value sets and regression diffs stay
//! bit-stable.

use relay_core::protocols::{PointEvaluation, RateBound};
use serde_json::{json, Map, Value};

/// Format with 12 significant digits.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Round to exactly what [`fmt12`] prints.
pub fn round12(x: f64) -> f64 {
    fmt12(x).parse().expect("formatted float parses")
}

/// Scan axis of one record.
#[derive(Debug, Clone, Copy)]
pub enum Axis {
    Plane { g: f64, gprime: f64 },
    Noise { n: f64 },
}

/// Optimal-rate bound field: finite, divergent, or not computed.
#[derive(Debug, Clone, Copy)]
pub enum BoundField {
    Finite(f64),
    Unbounded,
    Missing,
}

impl From<Option<RateBound>> for BoundField {
    fn from(b: Option<RateBound>) -> Self {
        match b {
            Some(RateBound::Finite(v)) => BoundField::Finite(v),
            Some(RateBound::Unbounded) => BoundField::Unbounded,
            None => BoundField::Missing,
        }
    }
}

/// One evaluated point. Raw partially-transposed eigenvalues are carried
/// next to their flags so every flag can be re-derived from the record.
#[derive(Debug, Clone)]
pub struct PointRecord {
    pub axis: Axis,
    pub physical: bool,
    pub separable: bool,
    pub entanglement_breaking: bool,
    pub i_env: Option<f64>,
    /// 1x3 groupings in mode order (a, b, A', B').
    pub nu_quad: [Option<f64>; 4],
    pub quad: [Option<bool>; 4],
    /// Bipartite reductions a|A', b|B', a|b.
    pub nu_bip: [Option<f64>; 3],
    pub bip: [Option<bool>; 3],
    pub nu_tri_min: Option<f64>,
    pub tri_any: Option<bool>,
    pub eps: Option<f64>,
    pub eps_opt: Option<f64>,
    pub logneg: Option<f64>,
    pub fidelity: Option<f64>,
    pub fidelity_opt: Option<f64>,
    pub coherent_info: Option<f64>,
    pub key_bound: Option<f64>,
    pub qkd_rate: Option<f64>,
    pub qkd_rate_bound: BoundField,
}

impl PointRecord {
    pub fn from_evaluation(axis: Axis, eval: &PointEvaluation) -> Self {
        let c = eval.classification;
        let (nu_quad, quad, nu_bip, bip, nu_tri_min, tri_any) = match &eval.structure {
            Some(s) => (
                std::array::from_fn(|k| Some(s.quadripartite[k].nu_min)),
                std::array::from_fn(|k| Some(s.quadripartite[k].entangled)),
                std::array::from_fn(|k| Some(s.bipartite[k].nu_min)),
                std::array::from_fn(|k| Some(s.bipartite[k].entangled)),
                Some(s.min_tripartite_nu()),
                Some(s.any_tripartite()),
            ),
            None => Default::default(),
        };
        let m = eval.metrics.as_ref();
        PointRecord {
            axis,
            physical: c.physical,
            separable: c.separable,
            entanglement_breaking: c.entanglement_breaking,
            i_env: eval.mutual_info,
            nu_quad,
            quad,
            nu_bip,
            bip,
            nu_tri_min,
            tri_any,
            eps: m.map(|m| m.eps),
            eps_opt: m.map(|m| m.eps_opt),
            logneg: m.map(|m| m.log_negativity),
            fidelity: m.map(|m| m.fidelity),
            fidelity_opt: m.map(|m| m.fidelity_opt),
            coherent_info: m.map(|m| m.coherent_info),
            key_bound: m.map(|m| m.key_distill_bound),
            qkd_rate: m.map(|m| m.qkd_rate),
            qkd_rate_bound: m.map(|m| m.qkd_rate_opt_bound).into(),
        }
    }

    fn axis_columns(&self) -> Vec<(&'static str, String)> {
        match self.axis {
            Axis::Plane { g, gprime } => {
                vec![("g", fmt12(g)), ("gprime", fmt12(gprime))]
            }
            Axis::Noise { n } => vec![("n", fmt12(n))],
        }
    }

    /// Column names and cell text in the fixed schema order.
    pub fn columns(&self) -> Vec<(&'static str, String)> {
        fn opt(x: Option<f64>) -> String {
            x.map(fmt12).unwrap_or_default()
        }
        fn optb(x: Option<bool>) -> String {
            x.map(|b| b.to_string()).unwrap_or_default()
        }
        let mut cols = self.axis_columns();
        cols.push(("physical", self.physical.to_string()));
        cols.push(("separable", self.separable.to_string()));
        cols.push(("entanglement_breaking", self.entanglement_breaking.to_string()));
        cols.push(("i_env", opt(self.i_env)));
        for (k, name) in ["nu_quad_a", "nu_quad_b", "nu_quad_ap", "nu_quad_bp"]
            .iter()
            .enumerate()
        {
            cols.push((name, opt(self.nu_quad[k])));
        }
        for (k, name) in ["quad_a", "quad_b", "quad_ap", "quad_bp"].iter().enumerate() {
            cols.push((name, optb(self.quad[k])));
        }
        for (k, name) in ["nu_bip_a_ap", "nu_bip_b_bp", "nu_bip_a_b"].iter().enumerate() {
            cols.push((name, opt(self.nu_bip[k])));
        }
        for (k, name) in ["bip_a_ap", "bip_b_bp", "bip_a_b"].iter().enumerate() {
            cols.push((name, optb(self.bip[k])));
        }
        cols.push(("nu_tri_min", opt(self.nu_tri_min)));
        cols.push(("tri_any", optb(self.tri_any)));
        cols.push(("eps", opt(self.eps)));
        cols.push(("eps_opt", opt(self.eps_opt)));
        cols.push(("logneg", opt(self.logneg)));
        cols.push(("fidelity", opt(self.fidelity)));
        cols.push(("fidelity_opt", opt(self.fidelity_opt)));
        cols.push(("coherent_info", opt(self.coherent_info)));
        cols.push(("key_bound", opt(self.key_bound)));
        cols.push(("qkd_rate", opt(self.qkd_rate)));
        cols.push((
            "qkd_rate_bound",
            match self.qkd_rate_bound {
                BoundField::Finite(v) => fmt12(v),
                BoundField::Unbounded => "unbounded".to_string(),
                BoundField::Missing => String::new(),
            },
        ));
        cols
    }

    /// JSON object with the same fields and 12-digit-rounded numbers.
    pub fn to_json(&self) -> Value {
        fn opt(x: Option<f64>) -> Value {
            x.map_or(Value::Null, |v| json!(round12(v)))
        }
        fn optb(x: Option<bool>) -> Value {
            x.map_or(Value::Null, Value::Bool)
        }
        let mut obj = Map::new();
        match self.axis {
            Axis::Plane { g, gprime } => {
                obj.insert("g".into(), json!(round12(g)));
                obj.insert("gprime".into(), json!(round12(gprime)));
            }
            Axis::Noise { n } => {
                obj.insert("n".into(), json!(round12(n)));
            }
        }
        obj.insert("physical".into(), Value::Bool(self.physical));
        obj.insert("separable".into(), Value::Bool(self.separable));
        obj.insert(
            "entanglement_breaking".into(),
            Value::Bool(self.entanglement_breaking),
        );
        obj.insert("i_env".into(), opt(self.i_env));
        for (k, name) in ["nu_quad_a", "nu_quad_b", "nu_quad_ap", "nu_quad_bp"]
            .iter()
            .enumerate()
        {
            obj.insert((*name).into(), opt(self.nu_quad[k]));
        }
        for (k, name) in ["quad_a", "quad_b", "quad_ap", "quad_bp"].iter().enumerate() {
            obj.insert((*name).into(), optb(self.quad[k]));
        }
        for (k, name) in ["nu_bip_a_ap", "nu_bip_b_bp", "nu_bip_a_b"].iter().enumerate() {
            obj.insert((*name).into(), opt(self.nu_bip[k]));
        }
        for (k, name) in ["bip_a_ap", "bip_b_bp", "bip_a_b"].iter().enumerate() {
            obj.insert((*name).into(), optb(self.bip[k]));
        }
        obj.insert("nu_tri_min".into(), opt(self.nu_tri_min));
        obj.insert("tri_any".into(), optb(self.tri_any));
        obj.insert("eps".into(), opt(self.eps));
        obj.insert("eps_opt".into(), opt(self.eps_opt));
        obj.insert("logneg".into(), opt(self.logneg));
        obj.insert("fidelity".into(), opt(self.fidelity));
        obj.insert("fidelity_opt".into(), opt(self.fidelity_opt));
        obj.insert("coherent_info".into(), opt(self.coherent_info));
        obj.insert("key_bound".into(), opt(self.key_bound));
        obj.insert("qkd_rate".into(), opt(self.qkd_rate));
        obj.insert(
            "qkd_rate_bound".into(),
            match self.qkd_rate_bound {
                BoundField::Finite(v) => json!(round12(v)),
                BoundField::Unbounded => Value::String("unbounded".into()),
                BoundField::Missing => Value::Null,
            },
        );
        Value::Object(obj)
    }
}

/// Config echo: ordered key/value pairs shared by the CSV header block and
/// the JSON `config` object. Runtime-only knobs (worker count, paths) are
/// excluded so output bytes do not depend on them.
pub fn render_csv(
    echo: &[(String, String)],
    records: &[PointRecord],
    diagnostics: &[(String, String)],
) -> String {
    let mut out = String::new();
    for (k, v) in echo {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    if let Some(first) = records.first() {
        let names: Vec<&str> = first.columns().iter().map(|(n, _)| *n).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for r in records {
            let cells: Vec<String> = r.columns().into_iter().map(|(_, v)| v).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }
    for (k, v) in diagnostics {
        out.push_str(&format!("# diagnostic: {k} = {v}\n"));
    }
    out
}

pub fn render_json(
    echo: &[(String, String)],
    records: &[PointRecord],
    diagnostics: &[(String, String)],
) -> String {
    let mut config = Map::new();
    for (k, v) in echo {
        config.insert(k.clone(), Value::String(v.clone()));
    }
    let mut root = Map::new();
    root.insert("config".into(), Value::Object(config));
    root.insert(
        "records".into(),
        Value::Array(records.iter().map(PointRecord::to_json).collect()),
    );
    if !diagnostics.is_empty() {
        let mut d = Map::new();
        for (k, v) in diagnostics {
            d.insert(k.clone(), Value::String(v.clone()));
        }
        root.insert("diagnostics".into(), Value::Object(d));
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
    text.push('\n');
    text
}
