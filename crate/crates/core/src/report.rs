//! Pass/fail reports for mathematical checks.
//!
//! Opers that verify a battery of conditions return a [`Report`]: an ordered
//! list of named check items, each with a pass flag, an optional structured
//! location, and a short human-readable detail.  Reports render both as text
//! and as deterministic JSON.

use serde::Serialize;

/// Structured location of a failed (or passed) check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum Location {
    /// A filtration index or weight.
    Index(i64),
    /// A pair of indices, e.g. a bigrading position (p, q).
    Pair(i64, i64),
    /// Basis-triple location, e.g. an associativity failure (a, b, c).
    Triple(usize, usize, usize),
    /// A series order (total q-degree).
    Order(u32),
    /// A named component.
    Name(String),
}

/// A single named check with outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// An ordered collection of check items.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub items: Vec<CheckItem>,
}

impl Report {
    pub fn new() -> Self {
        Report { items: Vec::new() }
    }

    /// Record an unconditional pass.
    pub fn ok(&mut self, name: &str) {
        self.push(name, true, None, String::new());
    }

    /// Record an outcome with no location data.
    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.push(name, pass, None, detail.into());
    }

    /// Record an outcome at a structured location.
    pub fn check_at(
        &mut self,
        name: &str,
        pass: bool,
        location: Location,
        detail: impl Into<String>,
    ) {
        self.push(name, pass, Some(location), detail.into());
    }

    pub fn push(&mut self, name: &str, pass: bool, location: Option<Location>, detail: String) {
        self.items.push(CheckItem {
            name: name.to_string(),
            pass,
            location,
            detail,
        });
    }

    /// Append all items of another report, prefixing their names.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut item in other.items {
            if !prefix.is_empty() {
                item.name = format!("{prefix}.{}", item.name);
            }
            self.items.push(item);
        }
    }

    /// True when every item passed.
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    /// First failing item, if any.
    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.items.iter().find(|i| !i.pass)
    }

    /// Find an item by exact name.
    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    /// Deterministic JSON rendering.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            pass: bool,
            items: &'a [CheckItem],
        }
        serde_json::to_string_pretty(&Out {
            pass: self.pass(),
            items: &self.items,
        })
        .expect("report serialization cannot fail")
    }

    /// Plain-text rendering, one line per item.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            let mark = if item.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!("[{mark}] {}", item.name));
            if let Some(loc) = &item.location {
                out.push_str(&format!(" @ {loc:?}"));
            }
            if !item.detail.is_empty() {
                out.push_str(&format!(" — {}", item.detail));
            }
            out.push('\n');
        }
        out.push_str(if self.pass() { "PASS\n" } else { "FAIL\n" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_aggregates_and_renders() {
        let mut r = Report::new();
        r.ok("first");
        r.check_at("second", false, Location::Pair(1, 2), "mismatch");
        assert!(!r.pass());
        assert_eq!(r.first_failure().unwrap().name, "second");
        let text = r.to_text();
        assert!(text.contains("[ok  ] first"));
        assert!(text.contains("[FAIL] second"));
        assert!(text.ends_with("FAIL\n"));
        let json = r.to_json();
        assert!(json.contains("\"pass\": false"));
    }
}
