//! The comma-separated model file format.
//!
//! ```text
//! state,a,b
//! q0,q2/1,q1/2
//! q1,q1/0,q0/0
//! q2,q2/0,q1/2
//! ```
//!
//! Line 1 names the inputs. Each further line is one state followed by one
//! `target/output` cell per input. The first data row is the initial state
//! and the output alphabet is every output mentioned, in order of first
//! appearance. LF and CRLF line endings are accepted; LF is written.

use std::collections::HashMap;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::{ParseError, ParseErrorKind};
use crate::machine::Dfsm;

struct Field<'a> {
    text: &'a str,
    column: usize,
}

fn fields(line: &str) -> Vec<Field<'_>> {
    let mut out = Vec::new();
    let mut column = 1;
    for text in line.split(',') {
        out.push(Field { text, column });
        column += text.chars().count() + 1;
    }
    out
}

/// Splits on `|` outside of `{...}` groups.
fn top_level_alternatives(cell: &str) -> usize {
    let mut depth = 0i32;
    let mut count = 1;
    for c in cell.chars() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            '|' if depth == 0 => count += 1,
            _ => {}
        }
    }
    count
}

fn check_name(name: &str, line: usize, column: usize, what: &str) -> Result<(), ParseError> {
    if name.is_empty() {
        return Err(ParseError::new(
            line,
            column,
            ParseErrorKind::Syntax(format!("empty {what}")),
        ));
    }
    if name.contains('/') {
        return Err(ParseError::new(
            line,
            column,
            ParseErrorKind::Syntax(format!("`/` inside {what} `{name}`")),
        ));
    }
    Ok(())
}

/// Parses and validates a model file into a deterministic, completely specified machine.
pub fn parse_fsm(text: &str) -> Result<Dfsm, ParseError> {
    let lines: Vec<(usize, &str)> = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let Some(&(header_line, header)) = lines.first() else {
        return Err(ParseError::new(1, 1, ParseErrorKind::Empty));
    };

    let header_fields = fields(header);
    if header_fields[0].text != "state" {
        return Err(ParseError::new(
            header_line,
            1,
            ParseErrorKind::Syntax("header must start with `state`".into()),
        ));
    }
    if header_fields.len() < 2 {
        return Err(ParseError::new(
            header_line,
            header.chars().count() + 1,
            ParseErrorKind::Syntax("header names no inputs".into()),
        ));
    }
    let mut input_names: Vec<&str> = Vec::new();
    for f in &header_fields[1..] {
        check_name(f.text, header_line, f.column, "input name")?;
        if input_names.contains(&f.text) {
            return Err(ParseError::new(
                header_line,
                f.column,
                ParseErrorKind::DuplicateInput(f.text.to_string()),
            ));
        }
        input_names.push(f.text);
    }
    let k = input_names.len();

    let rows: Vec<(usize, Vec<Field<'_>>)> =
        lines[1..].iter().map(|&(n, l)| (n, fields(l))).collect();
    if rows.is_empty() {
        return Err(ParseError::new(
            header_line + 1,
            1,
            ParseErrorKind::NoStates,
        ));
    }

    let mut state_index: HashMap<&str, usize> = HashMap::new();
    let mut states: Vec<String> = Vec::new();
    for (line, fs) in &rows {
        let name = fs[0].text;
        check_name(name, *line, 1, "state name")?;
        if state_index.insert(name, states.len()).is_some() {
            return Err(ParseError::new(
                *line,
                1,
                ParseErrorKind::DuplicateStateRow(name.to_string()),
            ));
        }
        states.push(name.to_string());
    }

    let mut output_names: Vec<String> = Vec::new();
    let mut output_index: HashMap<String, usize> = HashMap::new();
    let mut delta = Vec::with_capacity(states.len() * k);
    let mut omega = Vec::with_capacity(states.len() * k);
    for (line, fs) in &rows {
        let line = *line;
        if fs.len() > k + 1 {
            return Err(ParseError::new(
                line,
                fs[k + 1].column,
                ParseErrorKind::Syntax(format!("expected {} cells, found {}", k, fs.len() - 1)),
            ));
        }
        for i in 0..k {
            let Some(cell) = fs.get(i + 1) else {
                let end = fs.last().map(|f| f.column + f.text.chars().count()).unwrap_or(1);
                return Err(ParseError::new(line, end, ParseErrorKind::MissingCell));
            };
            let text = cell.text.trim();
            if text.is_empty() {
                return Err(ParseError::new(line, cell.column, ParseErrorKind::MissingCell));
            }
            if top_level_alternatives(text) > 1 {
                return Err(ParseError::new(
                    line,
                    cell.column,
                    ParseErrorKind::NonDeterministicCell,
                ));
            }
            let Some((target, output)) = text.split_once('/') else {
                return Err(ParseError::new(
                    line,
                    cell.column,
                    ParseErrorKind::Syntax(format!("cell `{text}` is not `target/output`")),
                ));
            };
            check_name(target, line, cell.column, "target state")?;
            check_name(output, line, cell.column + target.chars().count() + 1, "output")?;
            let Some(&t) = state_index.get(target) else {
                return Err(ParseError::new(
                    line,
                    cell.column,
                    ParseErrorKind::UnknownTargetState(target.to_string()),
                ));
            };
            let y = *output_index.entry(output.to_string()).or_insert_with(|| {
                output_names.push(output.to_string());
                output_names.len() - 1
            });
            delta.push(t);
            omega.push(y);
        }
    }

    let inputs = Arc::new(Alphabet::new(input_names.iter().copied()).expect("checked above"));
    let outputs = Arc::new(Alphabet::new(output_names).expect("distinct by construction"));
    Ok(Dfsm::from_parts_unchecked(states, 0, inputs, outputs, delta, omega))
}

/// Writes a machine in the model format, initial state first.
pub fn serialize_fsm(m: &Dfsm) -> String {
    let mut out = String::from("state");
    for name in m.inputs().symbols() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    let order = std::iter::once(m.initial()).chain((0..m.num_states()).filter(|&q| q != m.initial()));
    for q in order {
        out.push_str(m.state_name(q));
        for x in 0..m.num_inputs() {
            out.push(',');
            out.push_str(m.state_name(m.next_state(q, x)));
            out.push('/');
            out.push_str(m.outputs().name(m.output(q, x)));
        }
        out.push('\n');
    }
    out
}
