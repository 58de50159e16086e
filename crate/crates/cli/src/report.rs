//! Versioned report records and their JSON, CSV and table encodings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coefficient: String,
    pub bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_best: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violated: Option<bool>,
}

impl Row {
    pub fn new(coefficient: impl Into<String>, bound: f64) -> Self {
        Row {
            coefficient: coefficient.into(),
            bound: sig15(bound),
            branch: None,
            route: None,
            variant: None,
            constants: BTreeMap::new(),
            oracle_best: None,
            slack: None,
            violated: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub spec: String,
    pub rows: Vec<Row>,
    pub provenance: Provenance,
}

impl ReportDocument {
    pub fn new(spec: impl Into<String>, anchor: impl Into<String>, rows: Vec<Row>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            spec: spec.into(),
            rows,
            provenance: Provenance { anchor: anchor.into(), variant: None },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema version '{}'", self.schema_version);
        }
        if self.rows.is_empty() {
            bail!("report for '{}' has no rows", self.spec);
        }
        Ok(())
    }
}

/// Several documents emitted together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCollection {
    pub schema_version: String,
    pub documents: Vec<ReportDocument>,
}

impl ReportCollection {
    pub fn new(documents: Vec<ReportDocument>) -> Self {
        ReportCollection { schema_version: SCHEMA_VERSION.to_string(), documents }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn document_from_json(text: &str) -> Result<ReportDocument> {
    let doc: ReportDocument = serde_json::from_str(text).context("malformed report JSON")?;
    doc.validate()?;
    Ok(doc)
}

pub fn collection_from_json(text: &str) -> Result<ReportCollection> {
    let c: ReportCollection = serde_json::from_str(text).context("malformed report JSON")?;
    if c.schema_version != SCHEMA_VERSION {
        bail!("unsupported schema version '{}'", c.schema_version);
    }
    for d in &c.documents {
        d.validate()?;
    }
    Ok(c)
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRecord {
    schema_version: String,
    spec: String,
    anchor: String,
    provenance_variant: Option<String>,
    coefficient: String,
    bound: f64,
    branch: Option<String>,
    route: Option<String>,
    variant: Option<String>,
    constants: String,
    oracle_best: Option<f64>,
    slack: Option<f64>,
    violated: Option<bool>,
}

fn encode_constants(c: &BTreeMap<String, f64>) -> String {
    c.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

fn decode_constants(s: &str) -> Result<BTreeMap<String, f64>> {
    s.split(';')
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').with_context(|| format!("bad constant '{p}'"))?;
            Ok((k.to_string(), v.parse().with_context(|| format!("bad constant value '{v}'"))?))
        })
        .collect()
}

/// One CSV record per row; document fields repeat on every record.
pub fn to_csv(documents: &[ReportDocument]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for d in documents {
        for r in &d.rows {
            w.serialize(CsvRecord {
                schema_version: d.schema_version.clone(),
                spec: d.spec.clone(),
                anchor: d.provenance.anchor.clone(),
                provenance_variant: d.provenance.variant.clone(),
                coefficient: r.coefficient.clone(),
                bound: r.bound,
                branch: r.branch.clone(),
                route: r.route.clone(),
                variant: r.variant.clone(),
                constants: encode_constants(&r.constants),
                oracle_best: r.oracle_best,
                slack: r.slack,
                violated: r.violated,
            })?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Consecutive records sharing the document fields form one document.
pub fn from_csv(text: &str) -> Result<Vec<ReportDocument>> {
    let mut docs: Vec<ReportDocument> = Vec::new();
    for rec in csv::Reader::from_reader(text.as_bytes()).deserialize() {
        let rec: CsvRecord = rec.context("malformed report CSV")?;
        let row = Row {
            coefficient: rec.coefficient,
            bound: rec.bound,
            branch: rec.branch,
            route: rec.route,
            variant: rec.variant,
            constants: decode_constants(&rec.constants)?,
            oracle_best: rec.oracle_best,
            slack: rec.slack,
            violated: rec.violated,
        };
        let provenance = Provenance { anchor: rec.anchor, variant: rec.provenance_variant };
        match docs.last_mut() {
            Some(d)
                if d.schema_version == rec.schema_version
                    && d.spec == rec.spec
                    && d.provenance == provenance =>
            {
                d.rows.push(row)
            }
            _ => docs.push(ReportDocument {
                schema_version: rec.schema_version,
                spec: rec.spec,
                rows: vec![row],
                provenance,
            }),
        }
    }
    for d in &docs {
        d.validate()?;
    }
    Ok(docs)
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_else(|| "-".into())
}

/// Aligned plain-text table.
pub fn to_table(documents: &[ReportDocument]) -> String {
    let mut out = String::new();
    for (i, d) in documents.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "{} [{}]", d.spec, d.provenance.anchor);
        let oracle = d.rows.iter().any(|r| r.oracle_best.is_some());
        let mut header = vec!["coeff", "bound", "branch", "route", "variant"];
        if oracle {
            header.extend(["oracle_best", "slack", "violated"]);
        }
        let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for r in &d.rows {
            let mut line = vec![
                r.coefficient.clone(),
                r.bound.to_string(),
                opt(&r.branch),
                opt(&r.route),
                opt(&r.variant),
            ];
            if oracle {
                line.extend([opt(&r.oracle_best), opt(&r.slack), opt(&r.violated)]);
            }
            cells.push(line);
        }
        let widths: Vec<usize> = (0..cells[0].len())
            .map(|c| cells.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        for line in cells {
            let text: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect();
            let _ = writeln!(out, "  {}", text.join("  ").trim_end());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReportDocument {
        let mut a = Row::new("a2", 2f64.sqrt());
        a.branch = Some("case-a".into());
        a.route = Some("route-1".into());
        a.constants.insert("A".into(), 3.5);
        a.constants.insert("C".into(), sig15(1.0 / 3.0));
        let mut b = Row::new("a5", sig15(13.0 / 6.0 + 2f64.sqrt() * 2.0 / 3.0));
        b.variant = Some("proof".into());
        b.oracle_best = Some(sig15(2.07));
        b.slack = Some(sig15(1.0394));
        b.violated = Some(false);
        ReportDocument::new("st:lambda=0:order:rho=0", "bounds/st", vec![a, b])
    }

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig15(2f64.sqrt()), 1.41421356237310);
        assert_eq!(sig15(0.0), 0.0);
        assert_eq!(sig15(-1.0 / 3.0), -0.333333333333333);
    }

    #[test]
    fn json_round_trip() {
        let d = sample();
        assert_eq!(document_from_json(&to_json(&d).unwrap()).unwrap(), d);
        let c = ReportCollection::new(vec![d.clone(), d]);
        assert_eq!(collection_from_json(&to_json(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn csv_round_trip() {
        let mut other = sample();
        other.spec = "ss:beta=0.5".into();
        other.provenance.variant = Some("stated".into());
        let docs = vec![sample(), other];
        assert_eq!(from_csv(&to_csv(&docs).unwrap()).unwrap(), docs);
    }

    #[test]
    fn rejects_bad_documents() {
        let mut d = sample();
        d.rows.clear();
        assert!(document_from_json(&to_json(&d).unwrap()).is_err());
        let mut d = sample();
        d.schema_version = "2".into();
        assert!(document_from_json(&to_json(&d).unwrap()).is_err());
    }

    #[test]
    fn table_layout() {
        let t = to_table(&[sample()]);
        assert!(t.starts_with("st:lambda=0:order:rho=0 [bounds/st]"));
        assert!(t.contains("oracle_best"));
        assert!(t.contains("1.4142135623731"));
    }
}
