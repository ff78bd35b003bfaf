use std::fs;
use std::io::{self, Write};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use quanta_stats::SCHEMA;

use crate::cli::OutputArgs;

pub fn write(args: &OutputArgs, bytes: &[u8]) -> Result<()> {
    match &args.out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// CSV with a header row, `,` delimiter and LF endings.
pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new<I, S>(header: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(self) -> Result<Vec<u8>> {
        Ok(self.writer.into_inner().map_err(|e| e.into_error())?)
    }
}

/// Pretty JSON document tagged with the schema and command name.
pub fn json_doc<T: Serialize>(command: &str, body: T) -> Result<Vec<u8>> {
    let mut doc = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(map), Value::Object(extra)) = (&mut doc, serde_json::to_value(body)?) {
        map.extend(extra);
    }
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Shortest round-trip rendering of a float.
pub fn float(v: f64) -> String {
    format!("{v:?}")
}
