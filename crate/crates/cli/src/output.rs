use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::Value;

use dicke_core::sweep::{write_csv, write_json};

use crate::args::{Command, Format};
use crate::commands::Artifact;

/// Nested JSON flattened to `key,value` rows with dotted keys.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::Null => out.push((prefix.into(), String::new())),
        Value::String(s) => out.push((prefix.into(), s.clone())),
        Value::Number(n) => out.push((
            prefix.into(),
            match n.as_f64() {
                Some(x) if !n.is_i64() && !n.is_u64() => format!("{x:.16e}"),
                _ => n.to_string(),
            },
        )),
        Value::Bool(b) => out.push((prefix.into(), b.to_string())),
    }
}

fn write_document<W: Write>(cmd: Command, doc: &Value, format: Format, mut out: W) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, doc).map_err(io::Error::other)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", doc, &mut rows);
            writeln!(out, "# schema: dicke2p-{}/1", cmd.name())?;
            writeln!(out, "key,value")?;
            rows.iter().try_for_each(|(k, v)| writeln!(out, "{k},{v}"))
        }
    }
}

fn write_to<W: Write>(cmd: Command, artifact: &Artifact, format: Format, mut out: W) -> io::Result<()> {
    match (artifact, format) {
        (Artifact::Sweep(s), Format::Csv) => write_csv(s, &mut out),
        (Artifact::Sweep(s), Format::Json) => {
            write_json(s, &mut out)?;
            writeln!(out)
        }
        (Artifact::Document(d), f) => write_document(cmd, d, f, &mut out),
    }?;
    out.flush()
}

pub fn emit(cmd: Command, artifact: &Artifact, format: Format, path: Option<&std::path::Path>) -> io::Result<()> {
    match path {
        Some(p) => write_to(cmd, artifact, format, BufWriter::new(File::create(p)?)),
        None => write_to(cmd, artifact, format, io::stdout().lock()),
    }
}
