//! Line-oriented problem files:
//!
//! ```text
//! # power sums in three variables
//! vars: x1 x2 x3
//! gen: x1 + x2 + x3
//! gen: x1^2 + x2^2 + x3^2
//! gen: x1^3 + x2^3 + x3^3
//! target: x1*x2*x3 + 2
//! field: rational
//! seed: 7
//! ```

use crate::parse::ParseError;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub vars: Vec<String>,
    pub gens: Vec<String>,
    pub target: String,
    pub field: Option<String>,
    pub seed: Option<u64>,
}

fn problem(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Problem {
        line,
        message: message.into(),
    }
}

impl ProblemFile {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut out = ProblemFile::default();
        let mut target = None;
        let mut vars_line = None;
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let (key, value) = text
                .split_once(':')
                .ok_or_else(|| problem(line, "expected `key: value`"))?;
            let value = value.trim();
            match key.trim() {
                "vars" => {
                    if vars_line.replace(line).is_some() {
                        return Err(problem(line, "duplicate `vars`"));
                    }
                    out.vars = value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect();
                }
                "gen" => out.gens.push(value.to_string()),
                "target" => {
                    if target.replace(value.to_string()).is_some() {
                        return Err(problem(line, "duplicate `target`"));
                    }
                }
                "field" => out.field = Some(value.to_string()),
                "seed" => {
                    out.seed = Some(value.parse().map_err(|_| problem(line, format!("bad seed `{value}`")))?);
                }
                other => return Err(problem(line, format!("unknown key `{other}`"))),
            }
        }
        let last = src.lines().count().max(1);
        out.target = target.ok_or_else(|| problem(last, "missing `target`"))?;
        if vars_line.is_none() {
            return Err(problem(last, "missing `vars`"));
        }
        if out.gens.len() != out.vars.len() {
            return Err(problem(
                last,
                format!("{} generators for {} variables", out.gens.len(), out.vars.len()),
            ));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file() {
        let src = "# example\nvars: x y\ngen: x + y  # sum\ngen: x*y\n\ntarget: x^2 + y^2\nfield: fp:101\nseed: 3\n";
        let p = ProblemFile::parse(src).unwrap();
        assert_eq!(p.vars, ["x", "y"]);
        assert_eq!(p.gens, ["x + y", "x*y"]);
        assert_eq!(p.target, "x^2 + y^2");
        assert_eq!(p.field.as_deref(), Some("fp:101"));
        assert_eq!(p.seed, Some(3));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(
            ProblemFile::parse("vars: x\ngen: x\n"),
            Err(ParseError::Problem { line: 2, .. })
        ));
        assert!(matches!(
            ProblemFile::parse("vars: x y\ngen: x\ntarget: x\n"),
            Err(ParseError::Problem { .. })
        ));
        assert!(matches!(
            ProblemFile::parse("vars: x\nfoo: 1\n"),
            Err(ParseError::Problem { line: 2, .. })
        ));
        assert!(matches!(
            ProblemFile::parse("vars x\n"),
            Err(ParseError::Problem { line: 1, .. })
        ));
    }
}
