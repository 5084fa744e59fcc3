//! The complex file format: a JSON document with the maximal simplices, an
//! optional table of exact function values, and optional provenance.
//!
//! ```json
//! {
//!   "format": "confun-complex/1",
//!   "name": "circle",
//!   "maximal": [
//!     [0, 1],
//!     [0, 2],
//!     [1, 2]
//!   ],
//!   "function": [
//!     {"simplex": [0], "value": "5/2"}
//!   ]
//! }
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::confun::ConstructibleFunction;
use crate::dyadic::Dyadic;
use crate::simplicial::{Complex, Simplex, SimplicialError, Vertex};

pub const FORMAT_TAG: &str = "confun-complex/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl ToString) -> FileError {
    FileError::Field {
        field: field.into(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub simplex: Vec<Vertex>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub format: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub maximal: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<Vec<FunctionEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

/// A parsed and validated file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: String,
    pub complex: Arc<Complex>,
    pub function: Option<ConstructibleFunction>,
    pub provenance: Option<serde_json::Value>,
}

impl ComplexFile {
    /// Parse and validate.
    pub fn parse(text: &str) -> Result<ComplexFile, FileError> {
        let f: ComplexFile = serde_json::from_str(text).map_err(|e| FileError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        f.load()?;
        Ok(f)
    }

    pub fn from_complex(
        name: &str,
        complex: &Complex,
        function: Option<&ConstructibleFunction>,
    ) -> ComplexFile {
        let mut maximal: Vec<Vec<Vertex>> = complex
            .maximal_simplices()
            .into_iter()
            .map(|s| s.vertices().to_vec())
            .collect();
        maximal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let function = function.map(|f| {
            (0..complex.len())
                .filter(|&i| !f.value(i).is_zero())
                .map(|i| FunctionEntry {
                    simplex: complex.simplex(i).vertices().to_vec(),
                    value: f.value(i).to_string(),
                })
                .collect()
        });
        ComplexFile {
            format: FORMAT_TAG.into(),
            name: name.into(),
            labels: complex.labels().map(|l| l.to_vec()),
            maximal,
            function,
            provenance: None,
        }
    }

    pub fn with_provenance(mut self, p: serde_json::Value) -> Self {
        self.provenance = Some(p);
        self
    }

    /// Build the complex and function, checking every field.
    pub fn load(&self) -> Result<Loaded, FileError> {
        if self.format != FORMAT_TAG {
            return Err(field_err(
                "format",
                format!("expected `{FORMAT_TAG}`, found `{}`", self.format),
            ));
        }
        if self.maximal.is_empty() {
            return Err(field_err("maximal", "no simplices"));
        }
        let mut gens = Vec::with_capacity(self.maximal.len());
        for (i, s) in self.maximal.iter().enumerate() {
            gens.push(Simplex::new(s.clone()).map_err(|e| field_err(format!("maximal[{i}]"), e))?);
        }
        let mut complex = Complex::from_simplices(gens).map_err(|e| match e {
            SimplicialError::MissingVertex(v) => field_err(
                "maximal",
                format!("vertex ids must be 0..n without gaps; {v} is unused"),
            ),
            e => field_err("maximal", e),
        })?;
        if let Some(labels) = &self.labels {
            complex = complex
                .with_labels(labels.clone())
                .map_err(|e| field_err("labels", e))?;
        }
        let complex = Arc::new(complex);
        let function = match &self.function {
            None => None,
            Some(entries) => {
                let mut values = vec![Dyadic::zero(); complex.len()];
                let mut seen = BTreeSet::new();
                for (i, e) in entries.iter().enumerate() {
                    let here = |sub: &str| format!("function[{i}].{sub}");
                    let s = Simplex::new(e.simplex.clone()).map_err(|x| field_err(here("simplex"), x))?;
                    let k = complex
                        .index_of(&s)
                        .ok_or_else(|| field_err(here("simplex"), format!("{s:?} is not in the complex")))?;
                    if !seen.insert(k) {
                        return Err(field_err(here("simplex"), format!("{s:?} listed twice")));
                    }
                    values[k] = e.value.parse().map_err(|x| field_err(here("value"), x))?;
                }
                Some(ConstructibleFunction::new(complex.clone(), values).expect("one value per simplex"))
            }
        };
        Ok(Loaded {
            name: self.name.clone(),
            complex,
            function,
            provenance: self.provenance.clone(),
        })
    }

    /// Same content with maximal simplices reduced and sorted, function
    /// entries sorted with zeros dropped and values normalized.
    pub fn canonical(&self) -> Result<ComplexFile, FileError> {
        let l = self.load()?;
        let mut c = ComplexFile::from_complex(&l.name, &l.complex, l.function.as_ref());
        if self.function.is_some() && c.function.is_none() {
            c.function = Some(Vec::new());
        }
        c.provenance = self.provenance.clone();
        Ok(c)
    }

    /// Deterministic text: one simplex or function entry per line.
    pub fn to_text(&self) -> String {
        let js = |v: &dyn erased::Json| v.json();
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"format\": {},", js(&self.format));
        let _ = write!(out, "  \"name\": {}", js(&self.name));
        if let Some(labels) = &self.labels {
            let _ = write!(out, ",\n  \"labels\": {}", js(labels));
        }
        out.push_str(",\n  \"maximal\": [");
        for (i, s) in self.maximal.iter().enumerate() {
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            out.push_str(&simplex_text(s));
        }
        out.push_str(if self.maximal.is_empty() { "]" } else { "\n  ]" });
        if let Some(f) = &self.function {
            out.push_str(",\n  \"function\": [");
            for (i, e) in f.iter().enumerate() {
                out.push_str(if i == 0 { "\n    " } else { ",\n    " });
                let _ = write!(
                    out,
                    "{{\"simplex\": {}, \"value\": {}}}",
                    simplex_text(&e.simplex),
                    js(&e.value)
                );
            }
            out.push_str(if f.is_empty() { "]" } else { "\n  ]" });
        }
        if let Some(p) = &self.provenance {
            let pretty = serde_json::to_string_pretty(p).expect("json value");
            out.push_str(",\n  \"provenance\": ");
            out.push_str(&pretty.replace('\n', "\n  "));
        }
        out.push_str("\n}\n");
        out
    }
}

fn simplex_text(s: &[Vertex]) -> String {
    let inner: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

mod erased {
    pub trait Json {
        fn json(&self) -> String;
    }

    impl<T: serde::Serialize> Json for T {
        fn json(&self) -> String {
            serde_json::to_string(self).expect("serializable")
        }
    }
}

/// Parse text straight to a loaded complex.
pub fn load_text(text: &str) -> Result<Loaded, FileError> {
    ComplexFile::parse(text)?.load()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::build_complex;

    const CIRCLE: &str = r#"{
  "format": "confun-complex/1",
  "name": "circle",
  "maximal": [[0, 1], [1, 2], [0, 2]],
  "function": [{"simplex": [0], "value": "5/2"}, {"simplex": [1, 2], "value": "-3"}]
}"#;

    #[test]
    fn parse_and_round_trip() {
        let f = ComplexFile::parse(CIRCLE).unwrap();
        let l = f.load().unwrap();
        assert_eq!(l.complex.len(), 6);
        let phi = l.function.unwrap();
        assert_eq!(phi.value(0).to_string(), "5/2");
        let c = f.canonical().unwrap();
        let text = c.to_text();
        let again = ComplexFile::parse(&text).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_text(), text);
        assert!(text.contains("    [0, 1],\n"));
    }

    #[test]
    fn diagnostics() {
        let e = ComplexFile::parse("{\n  \"format\": 3\n}").unwrap_err();
        assert!(matches!(e, FileError::Syntax { line: 2, .. }), "{e}");
        let bad_value = CIRCLE.replace("5/2", "1/3");
        let e = ComplexFile::parse(&bad_value).unwrap_err();
        assert_eq!(e.to_string().split(':').next().unwrap(), "field `function[0].value`");
        let missing = CIRCLE.replace("[1, 2], \"value\"", "[0, 1, 2], \"value\"");
        assert!(ComplexFile::parse(&missing).is_err());
        let gap = CIRCLE.replace("[0, 2]]", "[0, 4]]");
        assert!(matches!(ComplexFile::parse(&gap), Err(FileError::Field { .. })));
        let tag = CIRCLE.replace("confun-complex/1", "other");
        assert!(ComplexFile::parse(&tag).is_err());
    }

    #[test]
    fn from_complex_is_canonical() {
        let k = build_complex(&[vec![2, 1, 0], vec![0, 3]]).unwrap();
        let f = ComplexFile::from_complex("k", &k, None);
        assert_eq!(f.maximal, vec![vec![0, 3], vec![0, 1, 2]]);
        assert_eq!(f.canonical().unwrap(), f);
    }
}
