//! JSON run configuration with `key=value` overrides.
//!
//! Every grid key accepts either a scalar or a list. `beta_a` takes a
//! positive number, or `null` / `"zero"` for a zero-temperature reservoir.

use serde_json::{Map, Value};

use crate::analysis::{
    InitialState, SweepGrid, TimeGrid, DEFAULT_EPSILON, DEFAULT_FREEZE_FRACTION,
};
use crate::evolution::QubitTriple;
use crate::measures::MeasureKind;
use crate::reservoir::{GammaMethod, Temperature};

pub const KEYS: [&str; 19] = [
    "x",
    "eta",
    "omega_c",
    "beta_a",
    "k1",
    "k2",
    "omega_sq_a",
    "omega_sq_b",
    "omega_sq_c",
    "t_start",
    "t_stop",
    "t_count",
    "measures",
    "method",
    "state",
    "epsilon",
    "freeze_fraction",
    "curves",
    "timescales",
];

/// A configuration problem, always tied to the key that caused it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config key `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

type Parsed<T> = std::result::Result<T, ConfigError>;

fn err<T>(key: &str, message: impl Into<String>) -> Parsed<T> {
    Err(ConfigError {
        key: key.to_string(),
        message: message.into(),
    })
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid: SweepGrid<f64>,
    pub qubits: QubitTriple<f64>,
    pub omega_sq: [f64; 3],
}

impl RunConfig {
    pub fn from_json(text: &str) -> Parsed<Self> {
        let value: Value = serde_json::from_str(text)
            .or_else(|e| err("<document>", format!("invalid JSON: {e}")))?;
        Self::from_value(value, &[])
    }

    /// Builds a configuration from a parsed document plus `key=value`
    /// overrides. Override values are read as JSON when they parse, and as
    /// bare strings otherwise.
    pub fn from_value(value: Value, overrides: &[String]) -> Parsed<Self> {
        let mut map = match value {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            _ => return err("<document>", "top level must be a JSON object"),
        };
        for item in overrides {
            let Some((key, raw)) = item.split_once('=') else {
                return err(item, "override must have the form key=value");
            };
            let key = key.trim();
            let parsed =
                serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            map.insert(key.to_string(), parsed);
        }
        if let Some(unknown) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return err(
                unknown,
                format!("unknown key (expected one of {})", KEYS.join(", ")),
            );
        }
        Self::from_map(&map)
    }

    fn from_map(map: &Map<String, Value>) -> Parsed<Self> {
        let x = numbers(map, "x", &[0.8])?;
        check_each("x", &x, |v| (0.0..=1.0).contains(&v), "must lie in [0, 1]")?;
        let eta = numbers(map, "eta", &[0.2])?;
        check_each("eta", &eta, |v| v > 0.0, "must be positive")?;
        let k1 = numbers(map, "k1", &[1.0])?;
        check_each("k1", &k1, |v| v > 0.0, "must be positive")?;
        let k2 = numbers(map, "k2", &[1.0])?;
        check_each("k2", &k2, |v| v > 0.0, "must be positive")?;
        let beta_a = temperatures(map, "beta_a")?;

        let omega_c = scalar(map, "omega_c", 1.0)?;
        positive("omega_c", omega_c)?;
        let omega_sq = [
            scalar(map, "omega_sq_a", 4.0)?,
            scalar(map, "omega_sq_b", 4.0)?,
            scalar(map, "omega_sq_c", 4.0)?,
        ];
        for (key, v) in ["omega_sq_a", "omega_sq_b", "omega_sq_c"]
            .iter()
            .zip(omega_sq)
        {
            positive(key, v)?;
        }
        let qubits = QubitTriple::from_squares(omega_sq[0], omega_sq[1], omega_sq[2])
            .or_else(|e| err("omega_sq_a", e.to_string()))?;

        let t_start = scalar(map, "t_start", 0.0)?;
        if !(t_start >= 0.0) || !t_start.is_finite() {
            return err("t_start", format!("{t_start} must be finite and >= 0"));
        }
        let t_stop = scalar(map, "t_stop", 1.0)?;
        if !(t_stop > t_start) || !t_stop.is_finite() {
            return err(
                "t_stop",
                format!("{t_stop} must be finite and greater than t_start = {t_start}"),
            );
        }
        let t_count = count(map, "t_count", 101)?;
        let time =
            TimeGrid::new(t_start, t_stop, t_count).or_else(|e| err("t_count", e.to_string()))?;

        let measures = strings(map, "measures", &["gmc"])?
            .iter()
            .map(|s| {
                s.parse::<MeasureKind>()
                    .or_else(|e| err("measures", e.to_string()))
            })
            .collect::<Parsed<Vec<_>>>()?;
        let method = match map.get("method") {
            None | Some(Value::Null) => default_method(&beta_a),
            Some(Value::String(s)) if s == "auto" => default_method(&beta_a),
            Some(Value::String(s)) => s
                .parse()
                .or_else(|e: crate::error::Error| err("method", e.to_string()))?,
            Some(other) => return err("method", format!("expected a string, got {other}")),
        };
        check_method(method, &beta_a)?;
        let state = match map.get("state") {
            None => InitialState::GhzWerner,
            Some(Value::String(s)) => s
                .parse()
                .or_else(|e: crate::error::Error| err("state", e.to_string()))?,
            Some(other) => return err("state", format!("expected a string, got {other}")),
        };
        let epsilon = scalar(map, "epsilon", DEFAULT_EPSILON)?;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return err("epsilon", format!("{epsilon} must lie in (0, 1)"));
        }
        let freeze_fraction = scalar(map, "freeze_fraction", DEFAULT_FREEZE_FRACTION)?;
        if !(freeze_fraction > 0.0 && freeze_fraction < 1.0) {
            return err(
                "freeze_fraction",
                format!("{freeze_fraction} must lie in (0, 1)"),
            );
        }
        let curves = boolean(map, "curves", true)?;
        let timescales = boolean(map, "timescales", true)?;

        let grid = SweepGrid {
            x,
            eta,
            beta_a,
            k1,
            k2,
            time,
            measures,
            method,
            state,
            omega_c,
            curves,
            timescales,
            epsilon,
            freeze_fraction,
        };
        Ok(Self {
            grid,
            qubits,
            omega_sq,
        })
    }
}

fn default_method(temps: &[Temperature<f64>]) -> GammaMethod {
    if temps.iter().all(|t| *t == Temperature::Zero) {
        GammaMethod::ZeroTClosedForm
    } else if temps.iter().all(|t| t.beta().is_some()) {
        GammaMethod::LowTClosedForm
    } else {
        GammaMethod::NumericQuadrature
    }
}

fn check_method(method: GammaMethod, temps: &[Temperature<f64>]) -> Parsed<()> {
    match method {
        GammaMethod::ZeroTClosedForm if temps.iter().any(|t| t.beta().is_some()) => {
            err("method", "zero_t needs every beta_a to be zero temperature")
        }
        GammaMethod::LowTClosedForm if temps.contains(&Temperature::Zero) => {
            err("method", "low_t needs every beta_a to be finite")
        }
        _ => Ok(()),
    }
}

fn as_list(v: &Value) -> Vec<&Value> {
    match v {
        Value::Array(items) => items.iter().collect(),
        other => vec![other],
    }
}

fn number(key: &str, v: &Value) -> Parsed<f64> {
    match v.as_f64() {
        Some(n) => Ok(n),
        None => err(key, format!("expected a number, got {v}")),
    }
}

fn numbers(map: &Map<String, Value>, key: &str, default: &[f64]) -> Parsed<Vec<f64>> {
    let Some(v) = map.get(key) else {
        return Ok(default.to_vec());
    };
    let out = as_list(v)
        .into_iter()
        .map(|item| number(key, item))
        .collect::<Parsed<Vec<_>>>()?;
    if out.is_empty() {
        return err(key, "list must not be empty");
    }
    Ok(out)
}

fn scalar(map: &Map<String, Value>, key: &str, default: f64) -> Parsed<f64> {
    map.get(key).map_or(Ok(default), |v| number(key, v))
}

fn positive(key: &str, v: f64) -> Parsed<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        err(key, format!("{v} must be positive and finite"))
    }
}

fn check_each(key: &str, values: &[f64], ok: impl Fn(f64) -> bool, what: &str) -> Parsed<()> {
    match values.iter().find(|v| !ok(**v) || !v.is_finite()) {
        Some(bad) => err(key, format!("{bad} {what}")),
        None => Ok(()),
    }
}

fn count(map: &Map<String, Value>, key: &str, default: usize) -> Parsed<usize> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => match v.as_u64() {
            Some(n) => Ok(n as usize),
            None => err(key, format!("expected a non-negative integer, got {v}")),
        },
    }
}

fn boolean(map: &Map<String, Value>, key: &str, default: bool) -> Parsed<bool> {
    match map.get(key) {
        None => Ok(default),
        Some(Value::Bool(b)) => Ok(*b),
        Some(v) => err(key, format!("expected true or false, got {v}")),
    }
}

fn strings(map: &Map<String, Value>, key: &str, default: &[&str]) -> Parsed<Vec<String>> {
    let Some(v) = map.get(key) else {
        return Ok(default.iter().map(|s| s.to_string()).collect());
    };
    let out = as_list(v)
        .into_iter()
        .map(|item| match item {
            Value::String(s) => Ok(s.clone()),
            other => err(key, format!("expected a string, got {other}")),
        })
        .collect::<Parsed<Vec<_>>>()?;
    if out.is_empty() {
        return err(key, "list must not be empty");
    }
    Ok(out)
}

fn temperatures(map: &Map<String, Value>, key: &str) -> Parsed<Vec<Temperature<f64>>> {
    let Some(v) = map.get(key) else {
        return Ok(vec![Temperature::Zero]);
    };
    let items = match v {
        Value::Array(items) if items.is_empty() => return err(key, "list must not be empty"),
        other => as_list(other),
    };
    items
        .into_iter()
        .map(|item| match item {
            Value::Null => Ok(Temperature::Zero),
            Value::String(s) if s == "zero" => Ok(Temperature::Zero),
            other => {
                let beta = number(key, other)?;
                Temperature::inverse(beta).or_else(|e| err(key, e.to_string()))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn defaults() {
        let c = RunConfig::from_json("{}").unwrap();
        assert_eq!(c.grid.x, vec![0.8]);
        assert_eq!(c.grid.beta_a, vec![Temperature::Zero]);
        assert_eq!(c.grid.method, GammaMethod::ZeroTClosedForm);
        assert_eq!(c.qubits.omega_sq(), 12.0);
    }

    #[test]
    fn lists_and_overrides() {
        let doc = json!({"x": [0.5, 0.9], "beta_a": [0.004, 0.01], "measures": "l1_coherence"});
        let c = RunConfig::from_value(doc, &["k1=[1,4]".into(), "state=w".into()]).unwrap();
        assert_eq!(c.grid.x, vec![0.5, 0.9]);
        assert_eq!(c.grid.k1, vec![1.0, 4.0]);
        assert_eq!(c.grid.state, InitialState::WWerner);
        assert_eq!(c.grid.method, GammaMethod::LowTClosedForm);
        assert_eq!(c.grid.measures, vec![MeasureKind::L1Coherence]);
    }

    #[test]
    fn errors_name_the_key() {
        let cases = [
            (json!({"x": 1.5}), "x"),
            (json!({"eta": "big"}), "eta"),
            (json!({"beta_a": -1.0}), "beta_a"),
            (json!({"t_count": 1}), "t_count"),
            (json!({"t_stop": 0.0}), "t_stop"),
            (json!({"measures": ["gmc", "bogus"]}), "measures"),
            (json!({"omega_sq_b": 0.0}), "omega_sq_b"),
            (json!({"kappa": 1.0}), "kappa"),
            (json!({"method": "low_t"}), "method"),
        ];
        for (doc, key) in cases {
            let e = RunConfig::from_value(doc.clone(), &[]).unwrap_err();
            assert_eq!(e.key, key, "{doc}: {e}");
        }
    }

    #[test]
    fn zero_temperature_spellings() {
        let c = RunConfig::from_value(
            json!({"beta_a": [null, "zero", 50.0], "method": "numeric"}),
            &[],
        )
        .unwrap();
        assert_eq!(c.grid.beta_a[..2], [Temperature::Zero, Temperature::Zero]);
        assert_eq!(c.grid.beta_a[2].beta(), Some(50.0));
    }
}
