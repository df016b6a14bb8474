//! JSON documents for generated problem instances.
//!
//! ```json
//! {"type": "quadratic", "seed": 7, "params": {"n": 200, "cond": 1e4},
//!  "data": {"A": {"rows": 200, "cols": 200, "values": [...]}, ...}}
//! ```
//!
//! Matrices are stored dense and row-major. Floats are written with enough
//! digits to round-trip exactly, so a loaded instance evaluates bit-for-bit like
//! the regenerated one.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::generate::params;
use super::{gen_boxqp, gen_lasso, gen_logsumexp, gen_quadratic};
use super::{BoxQp, LassoProblem, LogSumExp, Quadratic};
use crate::error::{Error, Result};
use crate::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Quadratic(Quadratic),
    LogSumExp(LogSumExp),
    Lasso(LassoProblem),
    BoxQp(BoxQp),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    #[serde(rename = "type")]
    pub kind: String,
    pub seed: u64,
    pub params: BTreeMap<String, f64>,
    pub data: Map<String, Value>,
}

fn matrix_value(m: &Matrix) -> Value {
    let mut values = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        values.extend(m.row(i).iter().copied());
    }
    json!({"rows": m.nrows(), "cols": m.ncols(), "values": values})
}

fn vector_value(v: &Vector) -> Value {
    json!(v.as_slice())
}

fn field<'a>(data: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    data.get(key)
        .ok_or_else(|| Error::input(format!("instance data is missing `{key}`")))
}

fn read_f64s(value: &Value, key: &str) -> Result<Vec<f64>> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::input(format!("`{key}` must be an array")))?;
    arr.iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| Error::input(format!("`{key}` must contain numbers")))
        })
        .collect()
}

fn read_vector(data: &Map<String, Value>, key: &str) -> Result<Vector> {
    Ok(Vector::from_vec(read_f64s(field(data, key)?, key)?))
}

fn read_matrix(data: &Map<String, Value>, key: &str) -> Result<Matrix> {
    let v = field(data, key)?;
    let dim = |name: &str| {
        v.get(name)
            .and_then(Value::as_u64)
            .map(|d| d as usize)
            .ok_or_else(|| Error::input(format!("`{key}.{name}` must be a non-negative integer")))
    };
    let (rows, cols) = (dim("rows")?, dim("cols")?);
    let values = read_f64s(
        v.get("values")
            .ok_or_else(|| Error::input(format!("`{key}.values` is missing")))?,
        key,
    )?;
    if values.len() != rows * cols {
        return Err(Error::input(format!(
            "`{key}` has {} values, expected {rows}x{cols}",
            values.len()
        )));
    }
    Ok(Matrix::from_row_slice(rows, cols, &values))
}

fn param(params: &BTreeMap<String, f64>, key: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::input(format!("instance params are missing `{key}`")))
}

fn param_usize(params: &BTreeMap<String, f64>, key: &str) -> Result<usize> {
    let v = param(params, key)?;
    if v < 0.0 || v.fract() != 0.0 {
        return Err(Error::input(format!("param `{key}` must be a non-negative integer")));
    }
    Ok(v as usize)
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Quadratic(_) => "quadratic",
            Instance::LogSumExp(_) => "logsumexp",
            Instance::Lasso(_) => "lasso",
            Instance::BoxQp(_) => "boxqp",
        }
    }

    /// Serialises the instance together with the generator arguments that produced it.
    pub fn to_document(&self, seed: u64, params: BTreeMap<String, f64>) -> InstanceDocument {
        let mut data = Map::new();
        match self {
            Instance::Quadratic(f) => {
                data.insert("A".into(), matrix_value(f.matrix()));
                data.insert("q".into(), vector_value(f.linear()));
                data.insert("eigenvalues".into(), json!(f.eigenvalues()));
                data.insert("eigenvectors".into(), matrix_value(f.eigenvectors()));
            }
            Instance::LogSumExp(f) => {
                data.insert("A".into(), matrix_value(f.a()));
                data.insert("b".into(), vector_value(f.b()));
                data.insert("rho".into(), json!(f.rho()));
            }
            Instance::Lasso(p) => {
                data.insert("A".into(), matrix_value(p.a()));
                data.insert("b".into(), vector_value(p.b()));
                data.insert("rho".into(), json!(p.rho()));
                if let Some(y) = p.signal() {
                    data.insert("signal".into(), vector_value(y));
                }
            }
            Instance::BoxQp(qp) => {
                data.insert("Q".into(), matrix_value(qp.q_matrix()));
                data.insert("q".into(), vector_value(qp.q()));
                data.insert("lower".into(), vector_value(qp.lower()));
                data.insert("upper".into(), vector_value(qp.upper()));
                data.insert("eigenvalues".into(), json!(qp.eigenvalues()));
            }
        }
        InstanceDocument {
            kind: self.kind().to_string(),
            seed,
            params,
            data,
        }
    }

    pub fn from_document(doc: &InstanceDocument) -> Result<Self> {
        let d = &doc.data;
        match doc.kind.as_str() {
            "quadratic" => {
                let a = read_matrix(d, "A")?;
                let q = read_vector(d, "q")?;
                let eigenvalues = read_f64s(field(d, "eigenvalues")?, "eigenvalues")?;
                let v = read_matrix(d, "eigenvectors")?;
                let n = eigenvalues.len();
                if a.shape() != (n, n) || v.shape() != (n, n) || q.len() != n {
                    return Err(Error::input("inconsistent quadratic dimensions"));
                }
                Ok(Instance::Quadratic(Quadratic::from_parts_unchecked(
                    a,
                    q,
                    eigenvalues,
                    v,
                )))
            }
            "logsumexp" => {
                let rho = field(d, "rho")?
                    .as_f64()
                    .ok_or_else(|| Error::input("`rho` must be a number"))?;
                Ok(Instance::LogSumExp(LogSumExp::new(
                    read_matrix(d, "A")?,
                    read_vector(d, "b")?,
                    rho,
                )?))
            }
            "lasso" => {
                let rho = field(d, "rho")?
                    .as_f64()
                    .ok_or_else(|| Error::input("`rho` must be a number"))?;
                let mut p = LassoProblem::new(read_matrix(d, "A")?, read_vector(d, "b")?, rho)?;
                if d.contains_key("signal") {
                    p = p.with_signal(read_vector(d, "signal")?);
                }
                Ok(Instance::Lasso(p))
            }
            "boxqp" => {
                let eigenvalues = read_f64s(field(d, "eigenvalues")?, "eigenvalues")?;
                Ok(Instance::BoxQp(BoxQp::new(
                    read_matrix(d, "Q")?,
                    read_vector(d, "q")?,
                    read_vector(d, "lower")?,
                    read_vector(d, "upper")?,
                    eigenvalues,
                )?))
            }
            other => Err(Error::input(format!("unknown instance type `{other}`"))),
        }
    }
}

impl InstanceDocument {
    /// Document for a freshly generated instance.
    pub fn generate(kind: &str, seed: u64, params: BTreeMap<String, f64>) -> Result<Self> {
        let doc = InstanceDocument {
            kind: kind.to_string(),
            seed,
            params,
            data: Map::new(),
        };
        let instance = doc.regenerate()?;
        Ok(instance.to_document(seed, doc.params))
    }

    /// Reruns the generator named by `type` with the stored seed and params.
    pub fn regenerate(&self) -> Result<Instance> {
        let p = &self.params;
        let seed = self.seed;
        Ok(match self.kind.as_str() {
            "quadratic" => Instance::Quadratic(gen_quadratic(param_usize(p, "n")?, param(p, "cond")?, seed)?),
            "logsumexp" => Instance::LogSumExp(gen_logsumexp(
                param_usize(p, "n")?,
                param_usize(p, "m")?,
                param(p, "rho")?,
                seed,
            )?),
            "lasso" => Instance::Lasso(gen_lasso(
                param_usize(p, "n")?,
                param_usize(p, "m")?,
                param_usize(p, "s")?,
                param(p, "rho")?,
                param(p, "noise_sigma")?,
                seed,
            )?),
            "boxqp" => Instance::BoxQp(gen_boxqp(param_usize(p, "n")?, param(p, "cond")?, seed)?),
            other => return Err(Error::input(format!("unknown instance type `{other}`"))),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Convenience for the common generator parameter sets.
    pub fn quadratic(n: usize, cond: f64, seed: u64) -> Result<Self> {
        Self::generate("quadratic", seed, params(&[("n", n as f64), ("cond", cond)]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{seeded_rng, standard_normal_vector, CompositeObjective, SmoothObjective};

    fn roundtrip(doc: &InstanceDocument) -> Instance {
        let text = doc.to_json().unwrap();
        Instance::from_document(&InstanceDocument::from_json(&text).unwrap()).unwrap()
    }

    fn value_at(inst: &Instance, x: &Vector) -> f64 {
        match inst {
            Instance::Quadratic(f) => f.value(x),
            Instance::LogSumExp(f) => f.value(x),
            Instance::Lasso(p) => p.value(x),
            Instance::BoxQp(p) => p.smooth_value(x),
        }
    }

    #[test]
    fn loaded_instances_evaluate_bit_for_bit() {
        let docs = [
            InstanceDocument::quadratic(12, 1e3, 4).unwrap(),
            InstanceDocument::generate("logsumexp", 5, params(&[("n", 4.0), ("m", 9.0), ("rho", 0.1)])).unwrap(),
            InstanceDocument::generate(
                "lasso",
                6,
                params(&[("n", 30.0), ("m", 8.0), ("s", 3.0), ("rho", 1.0), ("noise_sigma", 0.1)]),
            )
            .unwrap(),
            InstanceDocument::generate("boxqp", 7, params(&[("n", 10.0), ("cond", 1e5)])).unwrap(),
        ];
        for doc in &docs {
            let loaded = roundtrip(doc);
            let regenerated = doc.regenerate().unwrap();
            assert_eq!(loaded.kind(), doc.kind);
            let n = match &loaded {
                Instance::Quadratic(f) => f.dim(),
                Instance::LogSumExp(f) => f.dim(),
                Instance::Lasso(p) => p.dim(),
                Instance::BoxQp(p) => p.dim(),
            };
            let mut rng = seeded_rng(99);
            for _ in 0..5 {
                let x = standard_normal_vector(&mut rng, n);
                assert_eq!(
                    value_at(&loaded, &x).to_bits(),
                    value_at(&regenerated, &x).to_bits(),
                    "{}",
                    doc.kind
                );
            }
        }
    }

    #[test]
    fn unknown_type_rejected() {
        let mut doc = InstanceDocument::quadratic(3, 2.0, 1).unwrap();
        doc.kind = "cone".into();
        assert!(Instance::from_document(&doc).is_err());
        assert!(doc.regenerate().is_err());
    }

    #[test]
    fn truncated_matrix_rejected() {
        let mut doc = InstanceDocument::quadratic(3, 2.0, 1).unwrap();
        doc.data["A"]["values"].as_array_mut().unwrap().pop();
        assert!(Instance::from_document(&doc).is_err());
    }
}
