use serde::Serialize;
use serde_json::{Map, Value};
use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

/// One output line. A record is a check when it carries `pass`; `null`
/// there means the check could not be decided.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn new() -> Self {
        Record(Map::new())
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        let value = serde_json::to_value(value).expect("plain data serializes");
        self.0.insert(key.to_string(), value);
        self
    }

    /// Every field of a serializable struct, in declaration order.
    pub fn from_struct(value: &impl Serialize) -> Self {
        match serde_json::to_value(value).expect("plain data serializes") {
            Value::Object(map) => Record(map),
            other => Record::new().with("value", other),
        }
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }

    pub fn without(mut self, key: &str) -> Self {
        self.0.shift_remove(key);
        self
    }

    pub fn pass(self, pass: bool) -> Self {
        self.with("pass", pass)
    }

    pub fn unknown(self) -> Self {
        self.with("pass", Value::Null)
    }

    fn verdict(&self) -> Option<Option<bool>> {
        self.0.get("pass").map(Value::as_bool)
    }
}

impl IntoIterator for Record {
    type Item = (String, Value);
    type IntoIter = serde_json::map::IntoIter;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

pub enum Outcome {
    Finished(Vec<Record>),
    /// The time budget ran out before any record was produced.
    Unknown(Record),
}

#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub unknown: usize,
}

impl Summary {
    fn tally(records: &[Record]) -> Self {
        let mut s = Summary {
            records: records.len(),
            ..Summary::default()
        };
        for r in records {
            match r.verdict() {
                Some(Some(true)) => s.passed += 1,
                Some(Some(false)) => s.failed += 1,
                Some(None) => s.unknown += 1,
                None => {}
            }
        }
        s
    }
}

/// Prints the records and the summary line, returning the tallies.
pub fn emit(command: &str, outcome: &Outcome, table: bool, timestamp: bool) -> Summary {
    let timed_out;
    let records: &[Record] = match outcome {
        Outcome::Finished(r) => r,
        Outcome::Unknown(r) => {
            timed_out = [r.clone().unknown()];
            &timed_out
        }
    };
    let summary = Summary::tally(records);
    let mut tail = Record::new()
        .with("summary", command)
        .with("records", summary.records);
    tail = tail
        .with("passed", summary.passed)
        .with("failed", summary.failed)
        .with("unknown", summary.unknown);
    if timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        tail = tail.with("timestamp", secs);
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let lines = records.iter().chain(std::iter::once(&tail));
    if table {
        let mut header: Option<Vec<&String>> = None;
        for r in lines {
            let keys: Vec<&String> = r.0.keys().collect();
            if header.as_ref() != Some(&keys) {
                let _ = writeln!(
                    out,
                    "{}",
                    keys.iter()
                        .map(|k| k.as_str())
                        .collect::<Vec<_>>()
                        .join("\t")
                );
                header = Some(keys);
            }
            let cells: Vec<String> = r.0.values().map(cell).collect();
            let _ = writeln!(out, "{}", cells.join("\t"));
        }
    } else {
        for r in lines {
            let _ = writeln!(out, "{}", Value::Object(r.0.clone()));
        }
    }
    summary
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "unknown".to_string(),
        other => other.to_string(),
    }
}
