//! JSONL catalog: one output line per isomorphism class, keyed by
//! `n:stratum:invariants`.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::{json, Value};

use filiform::algebra::AlgebraRecord;
use filiform::strata::{canonicalize, invariant_vector, Deferral, StrataError};

use crate::render::unsupported_json;
use crate::{read_input, Failure, EXIT_OK};

struct Class {
    key: String,
    representative: AlgebraRecord,
    invariants: Value,
    members: usize,
}

enum Entry {
    Class(usize),
    Unsupported { line: usize, record: AlgebraRecord, why: Value },
}

pub fn cmd_catalog(input: &str, output: &str) -> Result<u8, Failure> {
    let text = read_input(input)?;
    let mut n_seen: Option<usize> = None;
    let mut classes: Vec<Class> = Vec::new();
    let mut by_key: HashMap<String, usize> = HashMap::new();
    let mut entries: Vec<Entry> = Vec::new();
    let mut records = 0usize;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let record =
            AlgebraRecord::from_json(raw.trim()).map_err(|e| Failure::Data(format!("line {line}: {e}")))?;
        match n_seen {
            None => n_seen = Some(record.n()),
            Some(n) if n != record.n() => {
                return Err(Failure::Data(format!(
                    "line {line}: n = {} but earlier records have n = {n}",
                    record.n()
                )));
            }
            Some(_) => {}
        }
        records += 1;

        let p = match &record {
            AlgebraRecord::First(p) => p.clone(),
            AlgebraRecord::Second(p) => {
                let why = unsupported_json("second", p.n(), Deferral::SecondClass);
                entries.push(Entry::Unsupported { line, record, why });
                continue;
            }
        };
        let inv = match invariant_vector(&p) {
            Ok(v) => v,
            Err(StrataError::Unsupported { region, n, deferral }) => {
                let why = unsupported_json(region, n, deferral);
                entries.push(Entry::Unsupported { line, record, why });
                continue;
            }
            Err(e) => return Err(Failure::Data(format!("line {line}: {e}"))),
        };
        let key = inv.canonical_key();
        if let Some(&at) = by_key.get(&key) {
            classes[at].members += 1;
            continue;
        }
        let canon = canonicalize(&p).map_err(|e| Failure::Data(format!("line {line}: {e}")))?;
        by_key.insert(key.clone(), classes.len());
        entries.push(Entry::Class(classes.len()));
        classes.push(Class {
            key,
            representative: AlgebraRecord::First(canon),
            invariants: serde_json::to_value(&inv).expect("invariants serialize"),
            members: 1,
        });
    }

    let mut sink: Box<dyn Write> = if output == "-" {
        Box::new(io::stdout().lock())
    } else {
        Box::new(BufWriter::new(
            File::create(output).map_err(|e| Failure::NoInput(format!("{output}: {e}")))?,
        ))
    };
    let mut unsupported = 0usize;
    for entry in &entries {
        let value = match entry {
            Entry::Class(at) => {
                let c = &classes[*at];
                json!({
                    "key": c.key,
                    "members": c.members,
                    "invariants": c.invariants,
                    "representative": c.representative,
                })
            }
            Entry::Unsupported { line, record, why } => {
                unsupported += 1;
                json!({ "line": line, "record": record, "unsupported": why })
            }
        };
        writeln!(sink, "{value}")?;
    }
    sink.flush()?;
    eprintln!(
        "catalog: {records} records, {} classes, {unsupported} unsupported",
        classes.len()
    );
    Ok(EXIT_OK)
}
