//! Instance, front and solution documents.
//!
//! Readers accept any well-formed JSON matching the schema. Writers emit one
//! canonical layout (fixed key order, one matrix row or front point per
//! line), so `write(read(x)) == x` for canonical documents.

use std::fmt::Write as _;

use compactvrp_core::{evaluate, EvalError, Instance, ParetoFront, RawInstance, Route, Solution, ValidationError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid instance: {0}")]
    Validation(#[from] ValidationError),
    #[error("front point {index}: {source}")]
    Point { index: usize, source: EvalError },
    #[error("front document is not ordered: {0}")]
    Order(#[from] compactvrp_core::model::FrontOrderError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    name: String,
    n_customers: i64,
    capacity: i64,
    time_limit: i64,
    fleet_size: i64,
    unload_time: i64,
    demand: Vec<i64>,
    service_time: Vec<i64>,
    travel_time: Vec<Vec<i64>>,
    distance: Vec<Vec<i64>>,
}

/// Parses and validates an instance document.
pub fn load_instance(source: &[u8]) -> Result<Instance, FormatError> {
    let doc: InstanceDoc = serde_json::from_slice(source)?;
    let raw = RawInstance {
        name: doc.name,
        n_customers: doc.n_customers,
        capacity: doc.capacity,
        time_limit: doc.time_limit,
        fleet_size: doc.fleet_size,
        unload_time: doc.unload_time,
        demand: doc.demand,
        service_time: doc.service_time,
        travel_time: doc.travel_time,
        distance: doc.distance,
    };
    Ok(Instance::new(raw)?)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn int_list(v: impl IntoIterator<Item = impl std::fmt::Display>) -> String {
    let items: Vec<String> = v.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn routes_list(routes: &[Vec<usize>]) -> String {
    let items: Vec<String> = routes.iter().map(int_list).collect();
    format!("[{}]", items.join(", "))
}

fn matrix(out: &mut String, key: &str, rows: &[Vec<i64>], last: bool) {
    let _ = writeln!(out, "  \"{key}\": [");
    for (i, row) in rows.iter().enumerate() {
        let sep = if i + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(out, "    {}{sep}", int_list(row));
    }
    let _ = writeln!(out, "  ]{}", if last { "" } else { "," });
}

/// Canonical instance document.
pub fn write_instance(instance: &Instance) -> String {
    let raw = instance.to_raw();
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"name\": {},", json_str(&raw.name));
    let _ = writeln!(out, "  \"n_customers\": {},", raw.n_customers);
    let _ = writeln!(out, "  \"capacity\": {},", raw.capacity);
    let _ = writeln!(out, "  \"time_limit\": {},", raw.time_limit);
    let _ = writeln!(out, "  \"fleet_size\": {},", raw.fleet_size);
    let _ = writeln!(out, "  \"unload_time\": {},", raw.unload_time);
    let _ = writeln!(out, "  \"demand\": {},", int_list(&raw.demand));
    let _ = writeln!(out, "  \"service_time\": {},", int_list(&raw.service_time));
    matrix(&mut out, "travel_time", &raw.travel_time, false);
    matrix(&mut out, "distance", &raw.distance, true);
    out.push_str("}\n");
    out
}

/// One front point as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub f1: u64,
    pub f2: u64,
    #[serde(default)]
    pub routes: Vec<Vec<usize>>,
}

/// A front with the instance name and the method that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontDoc {
    pub instance: String,
    pub method: String,
    pub points: Vec<PointDoc>,
}

impl FrontDoc {
    pub fn from_front(instance: &str, method: &str, front: &ParetoFront) -> Self {
        FrontDoc {
            instance: instance.to_string(),
            method: method.to_string(),
            points: front
                .points()
                .iter()
                .map(|p| PointDoc {
                    f1: p.f1,
                    f2: p.f2,
                    routes: p.witness.sequences(),
                })
                .collect(),
        }
    }

    pub fn objectives(&self) -> Vec<(u64, u64)> {
        self.points.iter().map(|p| (p.f1, p.f2)).collect()
    }

    /// Rebuilds the front, re-evaluating each witness on `instance`.
    pub fn to_front(&self, instance: &Instance) -> Result<ParetoFront, FormatError> {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(index, p)| {
                evaluate(instance, &p.routes)
                    .map(compactvrp_core::FrontPoint::new)
                    .map_err(|source| FormatError::Point { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ParetoFront::new(points)?)
    }
}

/// Canonical front-json.
pub fn write_front_json(doc: &FrontDoc) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"instance\": {},", json_str(&doc.instance));
    let _ = writeln!(out, "  \"method\": {},", json_str(&doc.method));
    if doc.points.is_empty() {
        out.push_str("  \"points\": []\n}\n");
        return out;
    }
    out.push_str("  \"points\": [\n");
    for (i, p) in doc.points.iter().enumerate() {
        let sep = if i + 1 < doc.points.len() { "," } else { "" };
        let _ = writeln!(
            out,
            "    {{\"f1\": {}, \"f2\": {}, \"routes\": {}}}{sep}",
            p.f1,
            p.f2,
            routes_list(&p.routes)
        );
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn read_front_json(source: &[u8]) -> Result<FrontDoc, FormatError> {
    Ok(serde_json::from_slice(source)?)
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    f1: u64,
    f2: u64,
}

/// front-csv: header `f1,f2`, then one row per point.
pub fn write_front_csv(doc: &FrontDoc) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["f1", "f2"]).expect("in-memory write");
    for p in &doc.points {
        w.serialize(CsvRow { f1: p.f1, f2: p.f2 }).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is ascii")
}

/// Reads a front-csv. Routes are not part of the format and come back empty.
pub fn read_front_csv(source: &[u8], instance: &str, method: &str) -> Result<FrontDoc, FormatError> {
    let mut r = csv::Reader::from_reader(source);
    let points = r
        .deserialize::<CsvRow>()
        .map(|row| {
            row.map(|r| PointDoc {
                f1: r.f1,
                f2: r.f2,
                routes: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FrontDoc {
        instance: instance.to_string(),
        method: method.to_string(),
        points,
    })
}

/// A single candidate solution with its claimed objective values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    pub instance: String,
    pub f1: u64,
    pub f2: u64,
    pub routes: Vec<Vec<usize>>,
}

impl SolutionDoc {
    pub fn from_solution(instance: &str, solution: &Solution) -> Self {
        SolutionDoc {
            instance: instance.to_string(),
            f1: solution.f1,
            f2: solution.f2,
            routes: solution.sequences(),
        }
    }

    /// Builds the candidate without judging it: route measures are
    /// recomputed from the sequences while `f1` and `f2` keep their claimed
    /// values. Sequences naming unknown nodes are kept verbatim with zeroed
    /// measures.
    pub fn to_candidate(&self, instance: &Instance) -> Solution {
        candidate(instance, &self.routes, self.f1, self.f2)
    }
}

pub(crate) fn candidate(instance: &Instance, routes: &[Vec<usize>], f1: u64, f2: u64) -> Solution {
    let routes = routes
        .iter()
        .map(|seq| {
            Route::measure(instance, seq.clone()).unwrap_or_else(|_| Route {
                sequence: seq.clone(),
                ..Route::default()
            })
        })
        .collect();
    Solution { routes, f1, f2 }
}

pub fn write_solution_json(doc: &SolutionDoc) -> String {
    format!(
        "{{\n  \"instance\": {},\n  \"f1\": {},\n  \"f2\": {},\n  \"routes\": {}\n}}\n",
        json_str(&doc.instance),
        doc.f1,
        doc.f2,
        routes_list(&doc.routes)
    )
}

/// Either a single solution or every point of a front.
pub enum CheckInput {
    Solution(SolutionDoc),
    Front(FrontDoc),
}

/// Reads a solution-json or front-json document for checking.
pub fn read_check_input(source: &[u8]) -> Result<CheckInput, FormatError> {
    let value: serde_json::Value = serde_json::from_slice(source)?;
    if value.get("points").is_some() {
        Ok(CheckInput::Front(serde_json::from_value(value)?))
    } else {
        Ok(CheckInput::Solution(serde_json::from_value(value)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{"name": "tiny1", "n_customers": 1, "capacity": 10, "time_limit": 13,
        "fleet_size": 1, "unload_time": 1, "demand": [3], "service_time": [2],
        "travel_time": [[0, 5], [5, 0]], "distance": [[0, 0], [0, 0]]}"#;

    #[test]
    fn loads_and_rejects() {
        let inst = load_instance(TINY.as_bytes()).unwrap();
        assert_eq!(inst.time_limit(), 13);
        let tight = TINY.replace("\"time_limit\": 13", "\"time_limit\": 12");
        let err = load_instance(tight.as_bytes()).unwrap_err();
        assert!(matches!(err, FormatError::Validation(_)));
        assert!(err.to_string().contains("singleton route infeasible for customer 1"));
        assert!(matches!(load_instance(b"{\"name\": 1}"), Err(FormatError::Json(_))));
    }

    #[test]
    fn instance_write_is_canonical() {
        let inst = load_instance(TINY.as_bytes()).unwrap();
        let text = write_instance(&inst);
        assert_eq!(
            text,
            "{\n  \"name\": \"tiny1\",\n  \"n_customers\": 1,\n  \"capacity\": 10,\n  \"time_limit\": 13,\n  \"fleet_size\": 1,\n  \"unload_time\": 1,\n  \"demand\": [3],\n  \"service_time\": [2],\n  \"travel_time\": [\n    [0, 5],\n    [5, 0]\n  ],\n  \"distance\": [\n    [0, 0],\n    [0, 0]\n  ]\n}\n"
        );
        let again = write_instance(&load_instance(text.as_bytes()).unwrap());
        assert_eq!(again, text);
    }

    #[test]
    fn empty_front_documents() {
        let doc = FrontDoc {
            instance: "x".into(),
            method: "econ".into(),
            points: vec![],
        };
        let json = write_front_json(&doc);
        assert!(json.contains("\"points\": []"));
        assert_eq!(read_front_json(json.as_bytes()).unwrap(), doc);
        assert_eq!(write_front_csv(&doc), "f1,f2\n");
    }

    #[test]
    fn one_point_csv() {
        let doc = FrontDoc {
            instance: "tiny1".into(),
            method: "econ".into(),
            points: vec![PointDoc {
                f1: 10,
                f2: 0,
                routes: vec![vec![1]],
            }],
        };
        assert_eq!(write_front_csv(&doc), "f1,f2\n10,0\n");
        let back = read_front_csv(write_front_csv(&doc).as_bytes(), "tiny1", "econ").unwrap();
        assert_eq!(back.objectives(), vec![(10, 0)]);
        let inst = load_instance(TINY.as_bytes()).unwrap();
        let front = doc.to_front(&inst).unwrap();
        assert_eq!(FrontDoc::from_front("tiny1", "econ", &front), doc);
    }

    #[test]
    fn check_input_dispatch() {
        let sol = SolutionDoc {
            instance: "tiny1".into(),
            f1: 10,
            f2: 0,
            routes: vec![vec![1]],
        };
        let text = write_solution_json(&sol);
        match read_check_input(text.as_bytes()).unwrap() {
            CheckInput::Solution(s) => assert_eq!(s, sol),
            CheckInput::Front(_) => panic!("expected a solution document"),
        }
        let inst = load_instance(TINY.as_bytes()).unwrap();
        let bad = candidate(&inst, &[vec![1, 7]], 10, 0);
        assert_eq!(bad.routes[0].sequence, vec![1, 7]);
    }
}
