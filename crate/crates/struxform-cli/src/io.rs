use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use struxform::json::{parse, render, VectorJson};
use struxform::ComplexVector;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse(&text)?)
}

pub fn read_vector(path: &Path) -> Result<ComplexVector> {
    let v: VectorJson = read_json(path)?;
    Ok(ComplexVector::try_from(&v)?)
}

pub fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            let written = stdout.write_all(text.as_bytes()).and_then(|()| stdout.write_all(b"\n"));
            match written {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            }
        }
    }
}

pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    write_text(out, &render(value))
}

pub fn write_vector(out: Option<&Path>, v: &ComplexVector) -> Result<()> {
    write_json(out, &VectorJson::from(v))
}
