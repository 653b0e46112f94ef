use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

/// `record.jsonl` writer: one JSON object per line, floats with 17 digits.
pub struct RecordWriter {
    out: BufWriter<File>,
    pub rows: usize,
}

impl RecordWriter {
    pub fn create(dir: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("record.jsonl");
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        Ok(RecordWriter { out: BufWriter::new(f), rows: 0 })
    }

    pub fn push<T: Serialize>(&mut self, row: &T) -> anyhow::Result<()> {
        let line = ewlab_core::json::to_string17(row)?;
        writeln!(self.out, "{line}")?;
        self.rows += 1;
        Ok(())
    }

    pub fn finish(mut self) -> anyhow::Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

pub fn write_json<T: Serialize>(path: &PathBuf, v: &T) -> anyhow::Result<()> {
    let text = ewlab_core::json::to_string_pretty17(v)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}
