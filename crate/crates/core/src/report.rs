//! Plain-text property reports.
//!
//! ```text
//! property=limited-crossover
//! params=lambda:1,tested:52
//! radius=8
//! status=pass
//! violations=0
//! witness u="x2" g="x1 x1 x1" v="x2" excess=3
//! ```
//!
//! Word-valued witness fields are quoted; at most [`WITNESS_LIMIT`] witness
//! lines are kept while `violations` is always the full count.

use std::fmt;

pub const WITNESS_LIMIT: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: String,
    pub params: Vec<(String, String)>,
    pub radius: usize,
    pub violations: usize,
    pub witnesses: Vec<Vec<(String, String)>>,
}

impl PropertyReport {
    pub fn new(property: &str, radius: usize) -> Self {
        PropertyReport {
            property: property.to_string(),
            params: Vec::new(),
            radius,
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    /// Numeric field values are written bare, everything else quoted.
    pub fn witness(&mut self, fields: Vec<(&str, String)>) {
        if self.witnesses.len() < WITNESS_LIMIT {
            self.witnesses
                .push(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "property={}", self.property)?;
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        writeln!(f, "params={}", params.join(","))?;
        writeln!(f, "radius={}", self.radius)?;
        writeln!(f, "status={}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(f, "violations={}", self.violations)?;
        for w in &self.witnesses {
            let fields: Vec<String> = w
                .iter()
                .map(|(k, v)| {
                    if v.parse::<i64>().is_ok() || v == "unbounded" {
                        format!("{k}={v}")
                    } else {
                        format!("{k}=\"{v}\"")
                    }
                })
                .collect();
            writeln!(f, "witness {}", fields.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_fields() {
        let mut r = PropertyReport::new("limited-crossover", 6);
        r.param("lambda", 1);
        r.violations = 1;
        r.witness(vec![("u", "x2".into()), ("g", "x1 x1 x1".into()), ("excess", "3".into())]);
        let text = r.to_string();
        assert_eq!(
            text,
            "property=limited-crossover\nparams=lambda:1\nradius=6\nstatus=fail\nviolations=1\nwitness u=\"x2\" g=\"x1 x1 x1\" excess=3\n"
        );
    }

    #[test]
    fn truncates_witnesses() {
        let mut r = PropertyReport::new("p", 1);
        for i in 0..150 {
            r.witness(vec![("n", i.to_string())]);
        }
        r.violations = 150;
        assert_eq!(r.witnesses.len(), WITNESS_LIMIT);
        assert!(r.to_string().contains("violations=150"));
    }
}
