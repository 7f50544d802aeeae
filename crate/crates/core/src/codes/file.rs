//! Plain-text codeword files.
//!
//! ```text
//! # twistcode v1
//! # family=<affine|symplectic|custom> <params> r=<r> q=<q> length=<m> size=<|C|>
//! <m space-separated 1-based letters>
//! ...
//! ```

use std::io::{BufRead, Write};

use rustc_hash::FxHashMap;

use super::{Code, Symbol};
use crate::error::{Error, Result};

pub const MAGIC: &str = "# twistcode v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeFileHeader {
    pub family: String,
    /// Family parameters in output order, e.g. `[("p", "3"), ("k", "2")]`.
    pub params: Vec<(String, String)>,
    pub r: usize,
    pub q: usize,
    pub length: usize,
    pub size: usize,
}

impl CodeFileHeader {
    pub fn for_code(family: &str, params: Vec<(String, String)>, r: usize, code: &Code) -> Self {
        CodeFileHeader {
            family: family.to_string(),
            params,
            r,
            q: code.alphabet(),
            length: code.length(),
            size: code.len(),
        }
    }

    fn render(&self) -> String {
        let mut line = format!("# family={}", self.family);
        for (k, v) in &self.params {
            line.push_str(&format!(" {k}={v}"));
        }
        line.push_str(&format!(
            " r={} q={} length={} size={}",
            self.r, self.q, self.length, self.size
        ));
        line
    }

    fn parse(line: &str) -> Result<Self> {
        let err = |message: String| Error::Parse { line: 2, message };
        let body = line
            .strip_prefix("# ")
            .ok_or_else(|| err("header line must start with `# `".into()))?;
        let mut family = None;
        let mut params = Vec::new();
        let (mut r, mut q, mut length, mut size) = (None, None, None, None);
        for token in body.split_whitespace() {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| err(format!("token `{token}` is not key=value")))?;
            let num = || {
                v.parse::<usize>()
                    .map_err(|_| err(format!("`{k}` must be a non-negative integer")))
            };
            match k {
                "family" => family = Some(v.to_string()),
                "r" => r = Some(num()?),
                "q" => q = Some(num()?),
                "length" => length = Some(num()?),
                "size" => size = Some(num()?),
                _ => params.push((k.to_string(), v.to_string())),
            }
        }
        let missing = |k: &str| err(format!("header is missing `{k}`"));
        let header = CodeFileHeader {
            family: family.ok_or_else(|| missing("family"))?,
            params,
            r: r.ok_or_else(|| missing("r"))?,
            q: q.ok_or_else(|| missing("q"))?,
            length: length.ok_or_else(|| missing("length"))?,
            size: size.ok_or_else(|| missing("size"))?,
        };
        if header.q == 0 || header.q > Symbol::MAX as usize + 1 {
            return Err(err(format!("unsupported alphabet size {}", header.q)));
        }
        if header.length == 0 {
            return Err(err("length must be positive".into()));
        }
        Ok(header)
    }
}

pub fn write_code<W: Write>(out: &mut W, header: &CodeFileHeader, code: &Code) -> Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "{}", header.render())?;
    let mut line = String::with_capacity(code.length() * 4);
    for w in code.words() {
        line.clear();
        for (j, &s) in w.iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&(s as usize + 1).to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn read_code<R: BufRead>(input: R) -> Result<(CodeFileHeader, Code)> {
    let mut lines = input.lines().enumerate();
    let mut next_line = |expect: &str| -> Result<String> {
        match lines.next() {
            Some((_, l)) => Ok(l?),
            None => Err(Error::Parse {
                line: 0,
                message: format!("missing {expect}"),
            }),
        }
    };
    let magic = next_line("format line")?;
    if magic.trim_end() != MAGIC {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected `{MAGIC}`"),
        });
    }
    let header = CodeFileHeader::parse(next_line("header line")?.trim_end())?;

    let mut flat: Vec<Symbol> = Vec::with_capacity(header.size * header.length);
    let mut line_of: Vec<usize> = Vec::with_capacity(header.size);
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let start = flat.len();
        for tok in line.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| err(format!("`{tok}` is not an integer")))?;
            if v == 0 || v > header.q {
                return Err(err(format!("letter {v} outside 1..={}", header.q)));
            }
            flat.push((v - 1) as Symbol);
        }
        let got = flat.len() - start;
        if got != header.length {
            return Err(err(format!(
                "expected {} letters, found {got}",
                header.length
            )));
        }
        line_of.push(lineno);
    }
    let mut seen: FxHashMap<&[Symbol], usize> = FxHashMap::default();
    for (w, &lineno) in flat.chunks(header.length).zip(&line_of) {
        if let Some(first) = seen.insert(w, lineno) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("duplicate of the codeword on line {first}"),
            });
        }
    }
    drop(seen);
    if line_of.len() != header.size {
        return Err(Error::Parse {
            line: 2,
            message: format!(
                "header declares {} codewords, file has {}",
                header.size,
                line_of.len()
            ),
        });
    }
    let code = Code::from_flat(header.length, header.q, flat)?;
    Ok((header, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (CodeFileHeader, Code) {
        let code = Code::from_flat(3, 3, vec![0, 1, 2, 1, 2, 0, 2, 0, 1]).unwrap();
        let header = CodeFileHeader::for_code("custom", vec![], 1, &code);
        (header, code)
    }

    #[test]
    fn writes_expected_text() {
        let (h, c) = sample();
        let mut buf = Vec::new();
        write_code(&mut buf, &h, &c).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# twistcode v1\n# family=custom r=1 q=3 length=3 size=3\n1 2 3\n2 3 1\n3 1 2\n"
        );
        let (h2, c2) = read_code(text.as_bytes()).unwrap();
        assert_eq!(h2, h);
        assert_eq!(c2, c);
    }

    #[test]
    fn params_survive() {
        let code = Code::from_flat(2, 2, vec![0, 1]).unwrap();
        let h = CodeFileHeader::for_code("affine", vec![("p".into(), "3".into())], 2, &code);
        let mut buf = Vec::new();
        write_code(&mut buf, &h, &code).unwrap();
        let (h2, _) = read_code(buf.as_slice()).unwrap();
        assert_eq!(h2.params, vec![("p".to_string(), "3".to_string())]);
    }

    fn parse_err(text: &str) -> usize {
        match read_code(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_files_report_lines() {
        let head = "# twistcode v1\n# family=custom r=1 q=3 length=3 size=2\n";
        assert_eq!(parse_err(&format!("{head}1 2 3\n1 2\n")), 4);
        assert_eq!(parse_err(&format!("{head}1 2 3\n1 2 4\n")), 4);
        assert_eq!(parse_err(&format!("{head}1 2 3\n1 x 3\n")), 4);
        assert_eq!(parse_err(&format!("{head}1 2 3\n1 2 3\n")), 4);
        assert_eq!(parse_err(&format!("{head}1 2 3\n")), 2);
        assert_eq!(parse_err("# twistcode v2\n"), 1);
        assert_eq!(
            parse_err("# twistcode v1\n# family=custom q=3 length=3 size=0\n"),
            2
        );
    }
}
