//! Plain-text model files.
//!
//! ```text
//! [base]
//! dim = 1
//!
//! [fields]
//! q ghost = 0
//!
//! [sections]
//! q = sin(1) + 1/2*cos(2)
//! q† = t1*cos(1)
//! ```
//!
//! `[base] dim = n` may also sit on one line. `#` starts a comment. The
//! `[sections]` table is optional and holds an oracle section.

use thiserror::Error;

use crate::jetcalc::{BvModel, ModelError};
use crate::oracle::{OracleError, SectionSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `[base] dim = n`")]
    MissingDimension,
    #[error("no fields declared")]
    NoFields,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Section(#[from] OracleError),
}

/// A parsed model file.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub model: BvModel,
    pub section: Option<SectionSpec>,
}

#[derive(Clone, Copy, PartialEq)]
enum Table {
    None,
    Base,
    Fields,
    Sections,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, ModelFileError> {
        let mut table = Table::None;
        let mut dim: Option<usize> = None;
        let mut fields: Vec<(String, i32)> = Vec::new();
        let mut field_lines: Vec<usize> = Vec::new();
        let mut section_lines: Vec<(usize, String)> = Vec::new();
        let mut seen_sections = false;
        for (k, raw) in text.lines().enumerate() {
            let no = k + 1;
            let err = |msg: String| ModelFileError::Syntax { line: no, msg };
            let mut line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let (name, after) = rest.split_once(']').ok_or_else(|| err("unterminated table header".into()))?;
                table = match name.trim() {
                    "base" => Table::Base,
                    "fields" => Table::Fields,
                    "sections" => {
                        if seen_sections {
                            return Err(err("`[sections]` appears twice".into()));
                        }
                        seen_sections = true;
                        Table::Sections
                    }
                    other => return Err(err(format!("unknown table `[{other}]`"))),
                };
                line = after.trim();
                if line.is_empty() {
                    continue;
                }
            }
            match table {
                Table::None => return Err(err("content before the first table header".into())),
                Table::Base => {
                    let (key, value) = line.split_once('=').ok_or_else(|| err("expected `dim = n`".into()))?;
                    if key.trim() != "dim" {
                        return Err(err(format!("unknown key `{}` in [base]", key.trim())));
                    }
                    if dim.is_some() {
                        return Err(err("`dim` is set twice".into()));
                    }
                    let n = value.trim().parse::<usize>().map_err(|_| err(format!("`{}` is not a dimension", value.trim())))?;
                    dim = Some(n);
                }
                Table::Fields => {
                    let (lhs, value) = line.split_once('=').ok_or_else(|| err("expected `name ghost = k`".into()))?;
                    let words: Vec<&str> = lhs.split_whitespace().collect();
                    let [name, key] = words.as_slice() else {
                        return Err(err("expected `name ghost = k`".into()));
                    };
                    if *key != "ghost" {
                        return Err(err(format!("unknown key `{key}` in [fields]")));
                    }
                    let g = value.trim().parse::<i32>().map_err(|_| err(format!("`{}` is not a ghost number", value.trim())))?;
                    fields.push((name.to_string(), g));
                    field_lines.push(no);
                }
                Table::Sections => section_lines.push((no, line.to_string())),
            }
        }
        let dim = dim.ok_or(ModelFileError::MissingDimension)?;
        if fields.is_empty() {
            return Err(ModelFileError::NoFields);
        }
        let model = match BvModel::new(dim, fields.clone()) {
            Ok(m) => m,
            Err(e @ (ModelError::DuplicateField(_) | ModelError::InvalidName(_))) => {
                let name = match &e {
                    ModelError::DuplicateField(n) | ModelError::InvalidName(n) => n.clone(),
                    _ => unreachable!(),
                };
                let at = fields.iter().rposition(|(n, _)| *n == name).map(|p| field_lines[p]).unwrap_or(0);
                return Err(ModelFileError::Syntax { line: at, msg: e.to_string() });
            }
            Err(e) => return Err(e.into()),
        };
        let section = if seen_sections {
            let mut s = SectionSpec::new();
            for (no, line) in &section_lines {
                s.parse_line(&model, line, *no)?;
            }
            Some(s)
        } else {
            None
        };
        Ok(ModelFile { model, section })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_all_tables() {
        let f = ModelFile::parse("# scalar\n[base] dim = 1\n[fields]\nq ghost = 0\n[sections]\nq = sin(1)\n").unwrap();
        assert_eq!(f.model.dim(), 1);
        assert_eq!(f.model.field_id("q"), Some(0));
        assert_eq!(f.section.unwrap().max_frequency(0, false), 1);
    }

    #[test]
    fn sections_are_optional() {
        let f = ModelFile::parse("[base]\ndim = 4\n[fields]\nA1 ghost = 0\nc ghost = 1\n").unwrap();
        assert_eq!(f.model.ghost(1, false), 1);
        assert!(f.section.is_none());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_key = ModelFile::parse("[base]\ndim = 1\n[fields]\nq ghst = 0\n").unwrap_err();
        assert_eq!(bad_key, ModelFileError::Syntax { line: 4, msg: "unknown key `ghst` in [fields]".into() });
        let bad_table = ModelFile::parse("[base]\ndim = 1\n[extra]\n").unwrap_err();
        assert!(matches!(bad_table, ModelFileError::Syntax { line: 3, .. }));
        let bad_base = ModelFile::parse("[base]\nsize = 1\n").unwrap_err();
        assert!(matches!(bad_base, ModelFileError::Syntax { line: 2, .. }));
        let dup = ModelFile::parse("[base]\ndim = 1\n[fields]\nq ghost = 0\nq ghost = 1\n").unwrap_err();
        assert!(matches!(dup, ModelFileError::Syntax { line: 5, .. }));
        let section = ModelFile::parse("[base]\ndim = 1\n[fields]\nq ghost = 0\n[sections]\nq = t1*sin(1)\n").unwrap_err();
        assert!(matches!(section, ModelFileError::Section(OracleError::Section { line: 6, .. })));
    }

    #[test]
    fn missing_pieces() {
        assert_eq!(ModelFile::parse("[fields]\nq ghost = 0\n").unwrap_err(), ModelFileError::MissingDimension);
        assert_eq!(ModelFile::parse("[base]\ndim = 1\n").unwrap_err(), ModelFileError::NoFields);
    }
}
