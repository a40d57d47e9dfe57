use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "afl-report/1";

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

/// One line of the `(v, N, N', pass)` table.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Row {
    pub v: u32,
    #[serde(rename = "N")]
    pub n: String,
    #[serde(rename = "N_prime")]
    pub nprime: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub params: Map<String, Value>,
    pub results: Map<String, Value>,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            schema: SCHEMA,
            command,
            params: Map::new(),
            results: Map::new(),
            rows: Vec::new(),
            checks: Vec::new(),
            pass: true,
            wall_clock_ms: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.pass &= pass;
        self.checks.push(Check { name: name.into(), pass });
    }

    pub fn row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["v", "N", "N_prime", "pass"]).expect("in-memory write");
        for r in &self.rows {
            w.write_record([r.v.to_string(), r.n.clone(), r.nprime.clone(), r.pass.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_is_header_only() {
        let r = RunReport::new(vec!["table".into()]);
        assert_eq!(r.to_csv(), "v,N,N_prime,pass\n");
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = RunReport::new(vec![]);
        r.check("a", true);
        assert!(r.pass);
        r.check("b", false);
        assert!(!r.pass);
    }

    #[test]
    fn csv_quotes_when_needed() {
        let mut r = RunReport::new(vec![]);
        r.row(Row { v: 3, n: "q + 2".into(), nprime: "-q - 2".into(), pass: true });
        assert_eq!(r.to_csv(), "v,N,N_prime,pass\n3,q + 2,-q - 2,true\n");
    }
}
