//! Plain-text model files.
//!
//! ```text
//! nodes: 3
//! le: 0 1
//! le: 0 2
//! val: p 1 2
//! point: 0
//! ```
//!
//! `le` lines are generating pairs; the reflexive-transitive closure is taken
//! automatically. Valuations must already be upward closed. Output is ASCII
//! with LF line endings and 0-based node indices, and printing a parsed model
//! reproduces the bytes exactly.

use super::{KripkeModel, ModelError};
use crate::syntax::{is_identifier, VarSet};
use std::collections::BTreeMap;

/// Parse a model file; returns the model and the optional point.
pub fn parse_model(text: &str) -> Result<(KripkeModel, Option<usize>), ModelError> {
    let mut size: Option<usize> = None;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut valuation: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut point: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| ModelError::Format {
            line: lineno,
            message: format!("expected `key: ...`, got {line:?}"),
        })?;
        let rest = rest.trim();
        match key.trim() {
            "nodes" => {
                if size.is_some() {
                    return Err(ModelError::Format {
                        line: lineno,
                        message: "duplicate `nodes` line".into(),
                    });
                }
                size = Some(parse_number(rest, lineno)?);
            }
            "le" => {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(ModelError::Format {
                        line: lineno,
                        message: format!("`le` expects two node indices, got {rest:?}"),
                    });
                }
                pairs.push((parse_number(fields[0], lineno)?, parse_number(fields[1], lineno)?));
            }
            "val" => {
                let mut fields = rest.split_whitespace();
                let var = fields.next().ok_or_else(|| ModelError::Format {
                    line: lineno,
                    message: "`val` expects a variable name".into(),
                })?;
                if !is_identifier(var) {
                    return Err(ModelError::Format {
                        line: lineno,
                        message: format!("invalid variable name {var:?}"),
                    });
                }
                let nodes: Result<Vec<usize>, _> =
                    fields.map(|f| parse_number(f, lineno)).collect();
                let entry = valuation.entry(var.to_string()).or_default();
                entry.extend(nodes?);
            }
            "point" => {
                if point.is_some() {
                    return Err(ModelError::Format {
                        line: lineno,
                        message: "duplicate `point` line".into(),
                    });
                }
                point = Some(parse_number(rest, lineno)?);
            }
            other => {
                return Err(ModelError::Format {
                    line: lineno,
                    message: format!("unknown directive {other:?}"),
                });
            }
        }
    }

    let size = size.ok_or_else(|| ModelError::Format {
        line: 1,
        message: "missing `nodes` line".into(),
    })?;
    let sig: VarSet = valuation.keys().map(|s| s.as_str()).collect();
    let model = KripkeModel::new(size, &pairs, sig, &valuation)?;
    if let Some(p) = point {
        if p >= model.size() {
            return Err(ModelError::NodeOutOfRange {
                node: p,
                size: model.size(),
            });
        }
    }
    Ok((model, point))
}

fn parse_number(text: &str, line: usize) -> Result<usize, ModelError> {
    text.parse().map_err(|_| ModelError::Format {
        line,
        message: format!("expected a number, got {text:?}"),
    })
}

/// Render a model in the file format. All non-reflexive pairs of the closed
/// relation are listed, so the output is canonical for the model.
pub fn format_model(m: &KripkeModel, point: Option<usize>) -> String {
    let mut out = String::new();
    out.push_str(&format!("nodes: {}\n", m.size()));
    for w in 0..m.size() {
        for v in 0..m.size() {
            if v != w && m.up_mask(w) & (1 << v) != 0 {
                out.push_str(&format!("le: {w} {v}\n"));
            }
        }
    }
    for var in m.signature().iter() {
        let mask = m.val_mask(var).unwrap_or(0);
        let nodes: Vec<String> = (0..m.size())
            .filter(|w| mask & (1 << w) != 0)
            .map(|w| w.to_string())
            .collect();
        out.push_str(&format!("val: {} {}\n", var, nodes.join(" ")));
    }
    if let Some(p) = point {
        out.push_str(&format!("point: {p}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "nodes: 3\nle: 0 1\nle: 0 2\nval: p 1 2\nval: q 2\npoint: 0\n";
        let (model, point) = parse_model(text).unwrap();
        assert_eq!(point, Some(0));
        assert_eq!(model.size(), 3);
        assert_eq!(format_model(&model, point), text);
    }

    #[test]
    fn closure_happens_valuation_validation_does_not_repair() {
        let (model, _) = parse_model("nodes: 3\nle: 0 1\nle: 1 2\nval: p 2\n").unwrap();
        assert_eq!(model.up_mask(0), 0b111);

        let err = parse_model("nodes: 2\nle: 0 1\nval: p 0\n").unwrap_err();
        assert!(matches!(err, ModelError::ValuationNotUpwardClosed { .. }));
    }

    #[test]
    fn format_errors_carry_line_numbers() {
        let err = parse_model("nodes: 2\nle: 0\n").unwrap_err();
        assert!(matches!(err, ModelError::Format { line: 2, .. }));

        let err = parse_model("size: 2\n").unwrap_err();
        assert!(matches!(err, ModelError::Format { line: 1, .. }));

        let err = parse_model("nodes: 2\npoint: 7\n").unwrap_err();
        assert!(matches!(err, ModelError::NodeOutOfRange { node: 7, .. }));
    }
}
