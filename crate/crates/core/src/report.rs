//! Shared report structures: each verification campaign produces a suite of
//! named cases with stable ordering, rendered as JSON or markdown.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub suite: String,
    pub schema: u32,
    pub cases: Vec<Case>,
}

impl Suite {
    pub fn new(name: &str) -> Suite {
        Suite {
            suite: name.to_string(),
            schema: 1,
            cases: Vec::new(),
        }
    }

    pub fn case(&mut self, id: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.cases.push(Case {
            id: id.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite serialization")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# suite: {}\n\n| case | pass | detail |\n|---|---|---|\n", self.suite);
        for c in &self.cases {
            out.push_str(&format!(
                "| {} | {} | {} |\n",
                c.id,
                if c.pass { "pass" } else { "FAIL" },
                c.detail.replace('|', "\\|")
            ));
        }
        out
    }
}
