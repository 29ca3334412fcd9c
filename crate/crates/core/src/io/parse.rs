//! CSV readers and writers for producers, outages and distributions.
//!
//! Files are UTF-8, comma separated, with an exact header row. LF and CRLF
//! line endings are accepted; writers emit LF. Only `.` is accepted as the
//! decimal separator.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::dea::{Dataset, Producer};
use crate::stochastic::{EnergyDistribution, OutageRecord};

pub const PRODUCERS_HEADER: [&str; 5] = [
    "id",
    "electricity_mwh",
    "raw_materials_e10_rial",
    "labor_hours_e6",
    "sales_e10_rial",
];
pub const OUTAGES_HEADER: [&str; 3] = ["producer_id", "duration_h", "demand_mw"];
pub const DISTRIBUTIONS_HEADER: [&str; 3] = ["producer_id", "mean_mwh", "std_mwh"];

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: u64,
    pub message: String,
}

fn err<T>(line: u64, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Rows after the header, each with its 1-based line number.
fn read_rows(text: &str, header: &[&str]) -> Result<Vec<(u64, Vec<String>)>, ParseError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let first = match records.next() {
        None => return err(1, format!("missing header, expected `{}`", header.join(","))),
        Some(r) => r.map_err(|e| ParseError {
            line: 1,
            message: e.to_string(),
        })?,
    };
    let line = first.position().map_or(1, |p| p.line());
    let found: Vec<&str> = first.iter().collect();
    if found != header {
        return err(
            line,
            format!("bad header `{}`, expected `{}`", found.join(","), header.join(",")),
        );
    }

    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| ParseError {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != header.len() {
            return err(line, format!("expected {} fields, found {}", header.len(), rec.len()));
        }
        let cells: Vec<String> = rec.iter().map(str::to_string).collect();
        if cells == header {
            return err(line, "duplicate header row");
        }
        rows.push((line, cells));
    }
    Ok(rows)
}

fn number(cell: &str, column: &str, line: u64) -> Result<f64, ParseError> {
    let ok_chars = cell
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    match cell.parse::<f64>() {
        Ok(v) if ok_chars && v.is_finite() => Ok(v),
        _ => err(line, format!("{column}: `{cell}` is not a finite decimal number")),
    }
}

pub fn parse_producers(text: &str) -> Result<Dataset, ParseError> {
    let rows = read_rows(text, &PRODUCERS_HEADER)?;
    if rows.is_empty() {
        return err(2, "no producers");
    }
    let mut seen = HashSet::new();
    let mut producers = Vec::with_capacity(rows.len());
    for (line, cells) in rows {
        let id = cells[0].clone();
        if id.is_empty() {
            return err(line, "empty producer id");
        }
        if !seen.insert(id.clone()) {
            return err(line, format!("duplicate producer id {id}"));
        }
        let v: Vec<f64> = cells[1..]
            .iter()
            .zip(&PRODUCERS_HEADER[1..])
            .map(|(c, h)| number(c, h, line))
            .collect::<Result<_, _>>()?;
        let p = Producer::new(id, v[0], v[1], v[2], v[3]).map_err(|e| ParseError {
            line,
            message: e.to_string(),
        })?;
        producers.push(p);
    }
    Dataset::new(producers).map_err(|e| ParseError {
        line: 0,
        message: e.to_string(),
    })
}

pub fn parse_outages(text: &str) -> Result<Vec<OutageRecord>, ParseError> {
    read_rows(text, &OUTAGES_HEADER)?
        .into_iter()
        .map(|(line, cells)| {
            if cells[0].is_empty() {
                return err(line, "empty producer id");
            }
            let duration = number(&cells[1], OUTAGES_HEADER[1], line)?;
            let demand = if cells[2].is_empty() {
                None
            } else {
                Some(number(&cells[2], OUTAGES_HEADER[2], line)?)
            };
            OutageRecord::new(cells[0].clone(), duration, demand).map_err(|e| ParseError {
                line,
                message: e.to_string(),
            })
        })
        .collect()
}

/// `base_mwh` of each row is the matching producer's electricity consumption.
pub fn parse_distributions(text: &str, dataset: &Dataset) -> Result<Vec<EnergyDistribution>, ParseError> {
    let mut seen = HashSet::new();
    read_rows(text, &DISTRIBUTIONS_HEADER)?
        .into_iter()
        .map(|(line, cells)| {
            let id = &cells[0];
            let Some(k) = dataset.index_of(id) else {
                return err(line, format!("unknown producer id {id}"));
            };
            if !seen.insert(id.clone()) {
                return err(line, format!("duplicate distribution for {id}"));
            }
            let mean = number(&cells[1], DISTRIBUTIONS_HEADER[1], line)?;
            let std = number(&cells[2], DISTRIBUTIONS_HEADER[2], line)?;
            let base = dataset.producers()[k].electricity_mwh;
            EnergyDistribution::new(id.clone(), mean, std, base).map_err(|e| ParseError {
                line,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn write_producers(dataset: &Dataset) -> String {
    let mut out = PRODUCERS_HEADER.join(",");
    out.push('\n');
    for p in dataset.producers() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.id, p.electricity_mwh, p.raw_materials, p.labor_hours, p.sales_value
        );
    }
    out
}

pub fn write_outages(outages: &[OutageRecord]) -> String {
    let mut out = OUTAGES_HEADER.join(",");
    out.push('\n');
    for o in outages {
        let demand = o.demand_mw.map(|d| d.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", o.producer_id, o.duration_h, demand);
    }
    out
}

pub fn write_distributions(distributions: &[EnergyDistribution]) -> String {
    let mut out = DISTRIBUTIONS_HEADER.join(",");
    out.push('\n');
    for d in distributions {
        let _ = writeln!(out, "{},{},{}", d.producer_id, d.mean_mwh, d.std_mwh);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "id,electricity_mwh,raw_materials_e10_rial,labor_hours_e6,sales_e10_rial";

    #[test]
    fn empty_body_is_an_error() {
        let e = parse_producers(&format!("{HEADER}\n")).unwrap_err();
        assert_eq!(e.message, "no producers");
    }

    #[test]
    fn missing_and_wrong_header() {
        assert!(parse_producers("").unwrap_err().message.contains("missing header"));
        let e = parse_producers("id,e,r,l,s\nA,1,1,1,1\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("bad header"));
    }

    #[test]
    fn duplicate_id_names_line() {
        let text = format!("{HEADER}\nA,1,1,1,1\nB,1,1,1,1\nA,2,2,2,2\n");
        let e = parse_producers(&text).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("duplicate producer id A"));
    }

    #[test]
    fn duplicate_header_row() {
        let text = format!("{HEADER}\n{HEADER}\nA,1,1,1,1\n");
        assert!(parse_producers(&text).unwrap_err().message.contains("duplicate header"));
    }

    #[test]
    fn non_numeric_and_locale_cells() {
        let text = format!("{HEADER}\nA,1,x,1,1\n");
        let e = parse_producers(&text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("raw_materials_e10_rial"));
        let text = format!("{HEADER}\nA,1,\"1,5\",1,1\n");
        assert!(parse_producers(&text).is_err());
        let text = format!("{HEADER}\nA,inf,1,1,1\n");
        assert!(parse_producers(&text).is_err());
    }

    #[test]
    fn producer_invariant_reported_with_line() {
        let text = format!("{HEADER}\nA,1,1,1,1\nB,1,1,1,0\n");
        let e = parse_producers(&text).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("sales value"));
    }

    #[test]
    fn crlf_and_blank_lines() {
        let text = format!("{HEADER}\r\nA,1,2,3,4\r\n\r\nB,5,6,7,8\r\n");
        let ds = parse_producers(&text).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.producers()[1].sales_value, 8.0);
    }

    #[test]
    fn outage_rows() {
        let recs = parse_outages("producer_id,duration_h,demand_mw\nP1,2.5,\nP1,1,3\n").unwrap();
        assert_eq!(recs[0].demand_mw, None);
        assert_eq!(recs[1].demand_mw, Some(3.0));
        assert_eq!(parse_outages(&write_outages(&recs)).unwrap(), recs);
        let e = parse_outages("producer_id,duration_h,demand_mw\nP1,-2,\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn distribution_rows() {
        let ds = parse_producers(&format!("{HEADER}\nA,10,1,1,1\n")).unwrap();
        let d = parse_distributions("producer_id,mean_mwh,std_mwh\nA,12,0\n", &ds).unwrap();
        assert_eq!(d[0].base_mwh, 10.0);
        assert_eq!(d[0].std_mwh, 0.0);
        let e = parse_distributions("producer_id,mean_mwh,std_mwh\nZ,12,1\n", &ds).unwrap_err();
        assert!(e.message.contains("unknown producer id Z"));
    }
}
