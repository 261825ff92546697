//! `grid`: a formula tabulated over one or two axes, written as CSV with a
//! JSON manifest next to it.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::eval::{evaluate, Evaluation};
use crate::params::{parse_real, Params};
use crate::{CliError, GridArgs, RunManifest};

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let bad = || CliError::Usage(format!("axis '{spec}' is not NAME=START:STOP:COUNT"));
    let (name, range) = spec.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(bad());
    };
    let (a, b) = (parse_real(start)?, parse_real(stop)?);
    let n: usize = count.parse().map_err(|_| bad())?;
    if n == 0 || name.is_empty() {
        return Err(bad());
    }
    let values = if n == 1 {
        vec![a]
    } else {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    };
    Ok(Axis {
        name: name.to_string(),
        values,
    })
}

fn component(key: &str) -> Option<(&str, bool)> {
    key.strip_suffix(".re")
        .map(|b| (b, true))
        .or_else(|| key.strip_suffix(".im").map(|b| (b, false)))
}

/// Parameters at one grid node; `NAME.re` / `NAME.im` pairs are joined.
fn node_params(fixed: &[(String, String)], assigned: &[(&str, f64)]) -> Result<Params, CliError> {
    let mut plain: Vec<(String, String)> = Vec::new();
    let mut parts: BTreeMap<String, (Option<String>, Option<String>)> = BTreeMap::new();
    let all = fixed
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .chain(assigned.iter().map(|(k, v)| (k.to_string(), format!("{v:e}"))));
    for (k, v) in all {
        match component(&k) {
            Some((base, is_re)) => {
                let e = parts.entry(base.to_string()).or_default();
                if is_re {
                    e.0 = Some(v);
                } else {
                    e.1 = Some(v);
                }
            }
            None => match plain.iter_mut().find(|(pk, _)| *pk == k) {
                Some(slot) => slot.1 = v,
                None => plain.push((k, v)),
            },
        }
    }
    for (base, (re, im)) in parts {
        match (re, im) {
            (Some(re), Some(im)) => plain.push((base, format!("{re},{im}"))),
            _ => {
                return Err(CliError::Usage(format!(
                    "'{base}' needs both {base}.re and {base}.im (from --axis or --set)"
                )))
            }
        }
    }
    Ok(Params::from_pairs(plain))
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn run(args: &GridArgs) -> Result<Value, CliError> {
    if args.axes.len() > 2 {
        return Err(CliError::Usage("at most two axes".into()));
    }
    let axes: Vec<Axis> = args.axes.iter().map(|a| parse_axis(a)).collect::<Result<_, _>>()?;
    let fixed: Vec<(String, String)> = args
        .set
        .iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got '{s}'")))
        })
        .collect::<Result<_, _>>()?;

    let mut nodes: Vec<Vec<(&str, f64)>> = vec![vec![]];
    for axis in &axes {
        nodes = nodes
            .into_iter()
            .flat_map(|n| {
                axis.values.iter().map(move |&v| {
                    let mut n = n.clone();
                    n.push((axis.name.as_str(), v));
                    n
                })
            })
            .collect();
    }

    let mut columns: Option<Vec<&'static str>> = None;
    let mut rows: Vec<(Vec<f64>, Option<Evaluation>)> = Vec::with_capacity(nodes.len());
    let mut failed = 0usize;
    for node in &nodes {
        let p = node_params(&fixed, node)?;
        let coords = node.iter().map(|(_, v)| *v).collect();
        match evaluate(args.formula, p) {
            Ok(e) => {
                columns.get_or_insert_with(|| e.values.iter().map(|(k, _)| *k).collect());
                rows.push((coords, Some(e)));
            }
            Err(CliError::Domain(_)) | Err(CliError::Numeric(_)) => {
                failed += 1;
                rows.push((coords, None));
            }
            Err(e) => return Err(e),
        }
    }
    let columns = columns.unwrap_or_else(|| vec!["value"]);

    let mut header: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    header.extend(columns.iter().map(|c| c.to_string()));
    let mut w = csv::Writer::from_path(&args.out).map_err(|e| io_err(&args.out, e))?;
    w.write_record(&header).map_err(|e| io_err(&args.out, e))?;
    for (coords, e) in &rows {
        let mut rec: Vec<String> = coords.iter().map(|v| v.to_string()).collect();
        match e {
            Some(e) => rec.extend(e.values.iter().map(|(_, v)| v.to_string())),
            None => rec.extend(columns.iter().map(|_| String::new())),
        }
        w.write_record(&rec).map_err(|e| io_err(&args.out, e))?;
    }
    w.flush().map_err(|e| io_err(&args.out, e))?;

    let manifest = RunManifest::new(
        "grid",
        json!({
            "formula": args.formula.name(),
            "axes": args.axes,
            "set": args.set,
            "out": args.out.display().to_string(),
        }),
        None,
    );
    let sidecar = sidecar_path(&args.out);
    let summary = json!({
        "output": args.out.display().to_string(),
        "manifest_path": sidecar.display().to_string(),
        "columns": header,
        "rows": rows.len(),
        "failed_points": failed,
        "units": args.formula.units(),
        "manifest": manifest.to_json(),
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(&sidecar, text + "\n").map_err(|e| io_err(&sidecar, e))?;
    Ok(summary)
}

/// `<out>.manifest.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        let a = parse_axis("v=0:pi:3").unwrap();
        assert_eq!(a.name, "v");
        assert_eq!(a.values.len(), 3);
        assert!((a.values[2] - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(parse_axis("x=0.5:9:1").unwrap().values, vec![0.5]);
        assert!(parse_axis("x=0:1").is_err());
        assert!(parse_axis("x=0:1:0").is_err());
    }

    #[test]
    fn complex_components_join() {
        let fixed = vec![("z4.im".to_string(), "1".to_string()), ("z1".into(), "0".into())];
        let mut p = node_params(&fixed, &[("z4.re", 0.5)]).unwrap();
        let z = p.complex("z4").unwrap();
        assert_eq!(z, twistloop::Complex64::new(0.5, 1.0));
        assert!(node_params(&[], &[("z4.re", 0.5)]).is_err());
    }
}
