//! Relation-by-relation verification reports.

use serde_json::{json, Value};

use crate::expr::format_state;
use crate::space::SpaceSpec;
use crate::state::State;

pub const SCHEMA: &str = "scva-report/1";

/// Where the expected right-hand side comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Read off a printed formula.
    Stated,
    /// Obtained by an independent computation or a normalization argument.
    Derived,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Stated => "stated",
            Source::Derived => "derived",
        }
    }
}

/// One checked identity `lhs = rhs`.
///
/// `product` is the index `n` of an n-th product `a_(n) b`; its pole order is
/// `n + 1`. Operator-level checks on probe states carry `None`.
#[derive(Clone, Debug)]
pub struct RelationRow {
    pub id: String,
    pub product: Option<i64>,
    pub source: Source,
    pub lhs: State,
    pub rhs: State,
    pub equal: bool,
}

impl RelationRow {
    pub fn new(id: impl Into<String>, product: Option<i64>, source: Source, lhs: State, rhs: State) -> Self {
        let equal = lhs == rhs;
        RelationRow { id: id.into(), product, source, lhs, rhs, equal }
    }

    pub fn pole(&self) -> Option<i64> {
        self.product.map(|n| n + 1)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub title: String,
    pub space: SpaceSpec,
    pub rows: Vec<RelationRow>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, space: SpaceSpec) -> Report {
        Report { title: title.into(), space, rows: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, row: RelationRow) {
        self.rows.push(row);
    }

    pub fn check(&mut self, id: impl Into<String>, product: Option<i64>, source: Source, lhs: State, rhs: State) {
        self.push(RelationRow::new(id, product, source, lhs, rhs));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationRow> {
        self.rows.iter().filter(|r| !r.equal)
    }

    pub fn first_failure(&self) -> Option<&RelationRow> {
        self.failures().next()
    }

    pub fn row(&self, id: &str, product: Option<i64>) -> Option<&RelationRow> {
        self.rows.iter().find(|r| r.id == id && r.product == product)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "ope_id": r.id,
                    "product": r.product,
                    "pole": r.pole(),
                    "expected_source": r.source.as_str(),
                    "lhs": format_state(&self.space, &r.lhs),
                    "rhs": format_state(&self.space, &r.rhs),
                    "equal": r.equal,
                })
            })
            .collect();
        json!({
            "schema": SCHEMA,
            "title": self.title,
            "space": self.space.to_string(),
            "passed": self.passed(),
            "checked": self.rows.len(),
            "failed": self.failures().count(),
            "rows": rows,
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} [{}]\n", self.title, self.space);
        for r in &self.rows {
            let tag = if r.equal { "PASS" } else { "FAIL" };
            let at = match r.product {
                Some(n) => format!("({n})"),
                None => String::new(),
            };
            out.push_str(&format!("{tag} {}{at} [{}]: {}", r.id, r.source.as_str(), format_state(&self.space, &r.lhs)));
            if r.equal {
                out.push('\n');
            } else {
                out.push_str(&format!("  expected {}\n", format_state(&self.space, &r.rhs)));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} relations, {} failed\n", self.rows.len(), failed));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn json_shape() {
        let space = SpaceSpec::orthonormal(1).unwrap();
        let mut r = Report::new("demo", space);
        r.check("x", Some(2), Source::Stated, State::vacuum(), State::vacuum());
        r.check("y", None, Source::Derived, State::vacuum(), State::vacuum().scale(&int(2)));
        assert!(!r.passed());
        let v = r.to_json();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["rows"][0]["pole"], 3);
        assert_eq!(v["rows"][1]["rhs"], "2 |0>");
        assert_eq!(v["failed"], 1);
        assert!(r.to_text().contains("FAIL y"));
    }
}
