use std::fmt::Write;

use labelcast_core::separability::{Formula, Literal};

use super::{parse_num, syntax, FormatError};

/// Parses `p 1in3 <vars> <clauses>` followed by one clause of three signed,
/// 1-based literals per line (a trailing `0` is allowed). Lines starting with
/// `c` or `#` are comments.
pub fn parse_formula(text: &str) -> Result<Formula, FormatError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        let comment = line.is_empty() || line == "c" || line.starts_with("c ");
        (!comment).then_some((i + 1, line))
    });
    let (header_line, header) = lines.next().ok_or(FormatError::Empty)?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (vars, count) = match tokens.as_slice() {
        ["p", "1in3", k, l] => (
            parse_num::<usize>(header_line, k, "a variable count")?,
            parse_num::<usize>(header_line, l, "a clause count")?,
        ),
        _ => {
            return Err(syntax(
                header_line,
                format!("unknown header {header:?}, expected `p 1in3 <vars> <clauses>`"),
            ))
        }
    };

    let mut clauses = Vec::new();
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        let mut lits = Vec::with_capacity(3);
        for token in content.split_whitespace() {
            let value: i64 = parse_num(line, token, "a signed literal")?;
            if value == 0 {
                break;
            }
            let lit = Literal::from_signed(value).expect("nonzero");
            if lit.var >= vars {
                return Err(syntax(
                    line,
                    format!("literal {value} exceeds the {vars} declared variables"),
                ));
            }
            lits.push(lit);
        }
        let [a, b, c] = lits.as_slice() else {
            return Err(syntax(
                line,
                format!("a clause needs exactly 3 literals, found {}", lits.len()),
            ));
        };
        clauses.push([*a, *b, *c]);
    }
    if clauses.len() != count {
        return Err(syntax(
            last_line,
            format!("header declares {count} clause(s), found {}", clauses.len()),
        ));
    }
    Formula::new(vars, clauses).map_err(|error| FormatError::Formula {
        line: header_line,
        error,
    })
}

pub fn write_formula(f: &Formula) -> String {
    let mut out = format!("p 1in3 {} {}\n", f.var_count(), f.clauses().len());
    for c in f.clauses() {
        writeln!(
            out,
            "{} {} {} 0",
            c[0].to_signed(),
            c[1].to_signed(),
            c[2].to_signed()
        )
        .unwrap();
    }
    out
}
