use dirichlet_forms::arith::parse_rational;
use dirichlet_forms::audit::parse_checks;
use dirichlet_forms::characters::{parse_selector, DirichletCharacter};
use dirichlet_forms::siegel::{admissible_n, Parameters};
use dirichlet_forms::{Error, Result};
use serde_json::Value;
use std::path::{Path, PathBuf};

/// A run described by one JSON document.
///
/// Rational parameters must be strings such as `"9/2"`; JSON numbers are rejected
/// for them so that no binary float ever enters the construction.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub id: String,
    pub character: DirichletCharacter,
    pub params: Parameters,
    pub n_values: Vec<u64>,
    pub precision_digits: u32,
    pub checks: Vec<String>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))?;
        RunConfig::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<RunConfig> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("config must be a JSON object".into()))?;
        let uint = |k: &str| {
            obj.get(k)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("'{k}' must be a nonnegative integer")))
        };
        let ratf = |k: &str| match obj.get(k) {
            Some(Value::String(s)) => parse_rational(s).map_err(|e| Error::Parse(format!("'{k}': {e}"))),
            Some(_) => Err(Error::Parse(format!("'{k}' must be an exact rational string such as \"39/10\""))),
            None => Err(Error::Parse(format!("missing '{k}'"))),
        };
        let selector = obj
            .get("character")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("'character' must be a selector string \"N:index\"".into()))?;
        let character = parse_selector(selector)?;
        let params = Parameters::new(
            uint("a")?,
            character.modulus(),
            ratf("r")?,
            ratf("omega")?,
            ratf("Omega")?,
            ratf("kappa")?,
            uint("h")?,
        )?;
        let n_values = match (obj.get("n_list"), obj.get("n_count")) {
            (Some(list), None) => {
                let list = list.as_array().ok_or_else(|| Error::Parse("'n_list' must be an array".into()))?;
                let mut ns = Vec::new();
                for x in list {
                    let n = x.as_u64().ok_or_else(|| Error::Parse("'n_list' entries must be integers".into()))?;
                    if !params.is_admissible(n) {
                        return Err(Error::InvalidArgument(format!(
                            "n={n} is not admissible (must be a multiple of {})",
                            params.n_period()
                        )));
                    }
                    ns.push(n);
                }
                ns
            }
            (None, Some(c)) => {
                let c = c.as_u64().ok_or_else(|| Error::Parse("'n_count' must be an integer".into()))?;
                admissible_n(&params, c as usize)
            }
            _ => return Err(Error::Parse("give exactly one of 'n_list' or 'n_count'".into())),
        };
        if n_values.is_empty() {
            return Err(Error::InvalidArgument("no values of n selected".into()));
        }
        let precision_digits = match obj.get("precision_digits") {
            None => 200,
            Some(x) => x
                .as_u64()
                .filter(|&d| d > 0)
                .ok_or_else(|| Error::Parse("'precision_digits' must be a positive integer".into()))?
                as u32,
        };
        let checks = match obj.get("checks") {
            None => parse_checks("all")?,
            Some(Value::String(s)) => parse_checks(s)?,
            Some(Value::Array(xs)) => {
                let parts: Option<Vec<&str>> = xs.iter().map(Value::as_str).collect();
                let parts = parts.ok_or_else(|| Error::Parse("'checks' entries must be strings".into()))?;
                parse_checks(&parts.join(","))?
            }
            Some(_) => return Err(Error::Parse("'checks' must be a string or an array".into())),
        };
        Ok(RunConfig {
            id: obj.get("id").and_then(Value::as_str).unwrap_or("config").to_string(),
            character,
            params,
            n_values,
            precision_digits,
            checks,
            output_dir: obj.get("output_dir").and_then(Value::as_str).map(PathBuf::from),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn c3() -> Value {
        json!({
            "id": "C3", "character": "3:1", "a": 18,
            "r": "2", "omega": "5", "Omega": "5", "kappa": "9/2", "h": 9,
            "n_count": 2
        })
    }

    #[test]
    fn c3_parses() {
        let c = RunConfig::from_json(&c3()).unwrap();
        assert_eq!(c.n_values, vec![6, 12]);
        assert_eq!(c.params.modulus, 3);
        assert_eq!(c.precision_digits, 200);
        assert_eq!(c.checks.len(), 18);
    }

    #[test]
    fn floats_are_rejected() {
        let mut v = c3();
        v["kappa"] = json!(4.5);
        assert!(matches!(RunConfig::from_json(&v), Err(Error::Parse(_))));
        v["kappa"] = json!("9/x");
        assert!(matches!(RunConfig::from_json(&v), Err(Error::Parse(_))));
    }

    #[test]
    fn inadmissible_n() {
        let mut v = c3();
        v.as_object_mut().unwrap().remove("n_count");
        v["n_list"] = json!([4]);
        assert!(RunConfig::from_json(&v).is_err());
        v["n_count"] = json!(1);
        assert!(RunConfig::from_json(&v).is_err());
    }
}
