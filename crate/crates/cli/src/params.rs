//! Parsing of `key=value` parameters, numbers and complex points.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};
use twistloop::{Complex64, Point};

use crate::CliError;

/// Real number: a float, `pi`, `<float>pi`, or a ratio `a/b` of those.
pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("cannot read '{s}' as a number"));
    let token = |t: &str| -> Result<f64, CliError> {
        let t = t.trim();
        if let Some(head) = t.strip_suffix("pi") {
            let k = match head {
                "" => 1.0,
                "-" => -1.0,
                h => h.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
            };
            Ok(k * PI)
        } else {
            t.parse::<f64>().map_err(|_| bad())
        }
    };
    let v = match s.split_once('/') {
        Some((a, b)) => token(a)? / token(b)?,
        None => token(s)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Complex number: `re,im`, polar `r@theta`, or a real.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    if let Some((r, t)) = s.split_once('@') {
        return Ok(Complex64::from_polar(parse_real(r)?, parse_real(t)?));
    }
    if let Some((re, im)) = s.split_once(',') {
        return Ok(Complex64::new(parse_real(re)?, parse_real(im)?));
    }
    Ok(Complex64::new(parse_real(s)?, 0.0))
}

pub fn parse_point(s: &str) -> Result<Point, CliError> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(Point::Infinity),
        other => Ok(Point::Finite(parse_complex(other)?)),
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// `key=value` list that remembers which keys were read, so leftovers can
/// be reported as usage errors.
#[derive(Debug, Clone)]
pub struct Params {
    entries: Vec<(String, String)>,
    used: Vec<bool>,
    echo: Map<String, Value>,
}

impl Params {
    pub fn parse(items: &[String]) -> Result<Self, CliError> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for item in items {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got '{item}'")))?;
            if entries.iter().any(|(e, _)| e == k) {
                return Err(CliError::Usage(format!("parameter '{k}' given twice")));
            }
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(Self::from_pairs(entries))
    }

    pub fn from_pairs(entries: Vec<(String, String)>) -> Self {
        let used = vec![false; entries.len()];
        Params {
            entries,
            used,
            echo: Map::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: String) {
        match self.entries.iter().position(|(k, _)| k == key) {
            Some(i) => self.entries[i].1 = value,
            None => {
                self.entries.push((key.to_string(), value));
                self.used.push(false);
            }
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.iter().any(|(k, _)| k == key)
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        let i = self.entries.iter().position(|(k, _)| k == key)?;
        self.used[i] = true;
        Some(self.entries[i].1.clone())
    }

    fn missing(key: &str) -> CliError {
        CliError::Usage(format!("missing parameter '{key}'"))
    }

    pub fn real(&mut self, key: &str) -> Result<f64, CliError> {
        let v = parse_real(&self.raw(key).ok_or_else(|| Self::missing(key))?)?;
        self.echo.insert(key.into(), json!(v));
        Ok(v)
    }

    pub fn real_or(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        if self.has(key) {
            self.real(key)
        } else {
            self.echo.insert(key.into(), json!(default));
            Ok(default)
        }
    }

    pub fn complex(&mut self, key: &str) -> Result<Complex64, CliError> {
        let z = parse_complex(&self.raw(key).ok_or_else(|| Self::missing(key))?)?;
        self.echo.insert(key.into(), complex_json(z));
        Ok(z)
    }

    pub fn point(&mut self, key: &str) -> Result<Point, CliError> {
        let p = parse_point(&self.raw(key).ok_or_else(|| Self::missing(key))?)?;
        let v = match p {
            Point::Infinity => json!("inf"),
            Point::Finite(z) => complex_json(z),
        };
        self.echo.insert(key.into(), v);
        Ok(p)
    }

    pub fn word(&mut self, key: &str) -> Result<String, CliError> {
        let w = self.raw(key).ok_or_else(|| Self::missing(key))?;
        self.echo.insert(key.into(), json!(w));
        Ok(w)
    }

    /// Errors on any key that was never read.
    pub fn finish(self) -> Result<Map<String, Value>, CliError> {
        let unused: Vec<&str> = self
            .entries
            .iter()
            .zip(&self.used)
            .filter(|(_, u)| !**u)
            .map(|((k, _), _)| k.as_str())
            .collect();
        if unused.is_empty() {
            Ok(self.echo)
        } else {
            Err(CliError::Usage(format!("unknown parameter(s): {}", unused.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_real("8/3").unwrap(), 8.0 / 3.0);
        assert!((parse_real("pi/3").unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((parse_real("2pi").unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!(parse_real("abc").is_err());
        assert!(parse_real("1/0").is_err());
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.5,-2").unwrap(), Complex64::new(0.5, -2.0));
        let z = parse_complex("2@pi/4").unwrap();
        assert!((z - Complex64::from_polar(2.0, PI / 4.0)).norm() < 1e-15);
        assert_eq!(parse_point("inf").unwrap(), Point::Infinity);
    }

    #[test]
    fn leftover_keys_are_reported() {
        let mut p = Params::parse(&["a=1".into(), "b=2".into()]).unwrap();
        p.real("a").unwrap();
        assert!(matches!(p.finish(), Err(CliError::Usage(m)) if m.contains('b')));
        assert!(Params::parse(&["a".into()]).is_err());
    }
}
