use std::fmt::Display;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// One row of the replication output. Field names are part of the wire format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub paper_ref: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    pub runtime_ms: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

struct Item {
    name: String,
    expected: String,
    computed: String,
    status: Status,
}

/// Accumulates named sub-results; the report fails if any item fails.
pub struct ReportBuilder {
    id: String,
    label: String,
    items: Vec<Item>,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(id: &str, label: &str) -> Self {
        Self { id: id.to_string(), label: label.to_string(), items: Vec::new(), start: Instant::now() }
    }

    pub fn item(&mut self, name: &str, expected: impl Display, computed: impl Display, ok: bool) -> &mut Self {
        self.push(name, expected, computed, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn push(&mut self, name: &str, expected: impl Display, computed: impl Display, status: Status) -> &mut Self {
        self.items.push(Item {
            name: name.to_string(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status,
        });
        self
    }

    /// Compares two displayable values by their rendering.
    pub fn equal(&mut self, name: &str, expected: impl Display, computed: impl Display) -> &mut Self {
        let (e, c) = (expected.to_string(), computed.to_string());
        let ok = e == c;
        self.push(name, e, c, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn error(&mut self, name: &str, expected: impl Display, err: impl Display) -> &mut Self {
        self.push(name, expected, format!("error: {}", err), Status::Fail)
    }

    pub fn status(&self) -> Status {
        if self.items.iter().any(|i| i.status == Status::Fail) {
            Status::Fail
        } else if self.items.is_empty() || self.items.iter().any(|i| i.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    pub fn finish(self) -> CheckReport {
        let status = self.status();
        let join = |f: &dyn Fn(&Item) -> &str| {
            self.items.iter().map(|i| format!("{} = {}", i.name, f(i))).collect::<Vec<_>>().join("; ")
        };
        let expected = join(&|i| &i.expected);
        let computed = join(&|i| &i.computed);
        CheckReport {
            check_id: self.id,
            paper_ref: self.label,
            status,
            expected,
            computed,
            runtime_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}
