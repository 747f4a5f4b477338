//! Text formats for function tables and partitions.
//!
//! Both start with a three-field header on the first non-blank line and
//! continue with whitespace-separated values in mixed-radix order. Lines
//! starting with `#` are comments.

use std::str::FromStr;

use num_complex::Complex64;

use crate::equitable::Partition;
use crate::qary_domain::{DomainParams, FunctionTable, ValueMode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokens(text: &str) -> impl Iterator<Item = Token<'_>> {
    text.lines().enumerate().filter(|(_, l)| !l.trim_start().starts_with('#')).flat_map(|(i, line)| {
        let mut out = Vec::new();
        let mut start = None;
        for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    out.push(Token { text: &line[s..pos], line: i + 1, column: line[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        out
    })
}

fn parse_error(t: &Token<'_>, message: impl Into<String>) -> Error {
    Error::Parse { line: t.line, column: t.column, message: message.into() }
}

fn parse_header<'a>(text: &'a str, what: &str) -> Result<(Token<'a>, [Token<'a>; 3], Vec<Token<'a>>)> {
    let all: Vec<Token<'a>> = tokens(text).collect();
    let Some(first) = all.first().copied() else {
        return Err(Error::Parse { line: 1, column: 1, message: format!("empty input, expected a {what} header") });
    };
    let header: Vec<Token<'a>> = all.iter().copied().take_while(|t| t.line == first.line).collect();
    if header.len() != 3 {
        return Err(parse_error(&first, format!("header must have 3 fields ({what}), found {}", header.len())));
    }
    let rest = all[3..].to_vec();
    Ok((first, [header[0], header[1], header[2]], rest))
}

fn number<T: FromStr>(t: &Token<'_>, what: &str) -> Result<T> {
    t.text.parse().map_err(|_| parse_error(t, format!("expected {what}, found `{}`", t.text)))
}

fn domain(q: &Token<'_>, n: &Token<'_>) -> Result<DomainParams> {
    let qv: u32 = number(q, "alphabet size q")?;
    let nv: usize = number(n, "dimension n")?;
    DomainParams::new(nv, qv).map_err(|e| parse_error(q, e.to_string()))
}

fn check_count(values: &[Token<'_>], expected: usize, text: &str) -> Result<()> {
    if values.len() > expected {
        return Err(parse_error(&values[expected], format!("expected {expected} values, found more")));
    }
    if values.len() < expected {
        let line = text.lines().count().max(1);
        let column = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
        return Err(Error::Parse {
            line,
            column,
            message: format!("expected {expected} values, found {}", values.len()),
        });
    }
    Ok(())
}

/// Parses `q n mode` followed by `q^n` values (`re im` pairs for `cplx`).
pub fn parse_function_table(text: &str) -> Result<FunctionTable> {
    let (_, [q, n, mode], values) = parse_header(text, "q n mode")?;
    let params = domain(&q, &n)?;
    let mode: ValueMode = mode.text.parse().map_err(|e: String| parse_error(&mode, e))?;
    let size = params.size();
    if mode == ValueMode::Complex {
        check_count(&values, 2 * size, text)?;
        let nums = values.iter().map(|t| number::<f64>(t, "a real number")).collect::<Result<Vec<_>>>()?;
        let z = nums.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        return FunctionTable::from_complex(params, z);
    }
    check_count(&values, size, text)?;
    let ints = values.iter().map(|t| number::<i64>(t, "an integer")).collect::<Result<Vec<_>>>()?;
    FunctionTable::from_ints(params, mode, ints).map_err(|e| match e {
        Error::InvalidValue { index, .. } => parse_error(&values[index], e.to_string()),
        other => other,
    })
}

/// Parses `q n r` followed by `q^n` class labels in `[1, r]`.
pub fn parse_partition(text: &str) -> Result<Partition> {
    let (_, [q, n, r], values) = parse_header(text, "q n r")?;
    let params = domain(&q, &n)?;
    let r: u32 = number(&r, "class count r")?;
    check_count(&values, params.size(), text)?;
    let labels = values.iter().map(|t| number::<u32>(t, "a class label")).collect::<Result<Vec<_>>>()?;
    Partition::new(params, r, labels).map_err(|e| match e {
        Error::InvalidValue { index, .. } => parse_error(&values[index], e.to_string()),
        other => other,
    })
}

/// Text form of a partition, readable by [`parse_partition`].
pub fn write_partition(p: &Partition) -> String {
    let params = p.params();
    let mut out = format!("{} {} {}\n", params.q(), params.n(), p.class_count());
    for row in p.labels().chunks(params.q() as usize) {
        out.push_str(&row.iter().map(u32::to_string).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_tables() {
        let p = DomainParams::new(2, 3).unwrap();
        let f = FunctionTable::from_fn(p, ValueMode::Pm1, |x| if x.coords()[0] == 0 { 1 } else { -1 }).unwrap();
        assert_eq!(parse_function_table(&f.to_string()).unwrap(), f);
        let z =
            FunctionTable::from_complex(p, (0..9).map(|i| Complex64::new(i as f64 / 3.0, -0.1 * i as f64)).collect())
                .unwrap();
        assert_eq!(parse_function_table(&z.to_string()).unwrap(), z);
    }

    #[test]
    fn header_errors_name_line_one() {
        for bad in ["3 2\n1 1 1", "3 x pm1\n", "3 2 bits\n1", "1 2 pm1\n"] {
            match parse_function_table(bad) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, 1, "{bad}"),
                other => panic!("{bad}: {other:?}"),
            }
        }
    }

    #[test]
    fn value_errors_point_at_the_token() {
        let err = parse_function_table("3 1 pm1\n1 -1\n  2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err:?}");
        let err = parse_function_table("3 1 01\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_function_table("3 1 int\n1 0 4 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 7, .. }), "{err:?}");
    }

    #[test]
    fn comments_and_partitions() {
        let p = parse_partition("# split\n3 2 2\n1 1 1\n2 2 2\n2 2 2\n").unwrap();
        assert_eq!(p.class_count(), 2);
        assert_eq!(parse_partition(&write_partition(&p)).unwrap(), p);
        assert!(matches!(parse_partition("3 1 2\n1 3 1\n"), Err(Error::Parse { line: 2, column: 3, .. })));
    }
}
