//! Artifact writing: files under --out-dir, or stdout.

use std::fs;
use std::path::PathBuf;

use serde_json::Value;

use crate::Failure;

pub struct Sink {
    out_dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(out_dir: Option<PathBuf>) -> Self {
        Self { out_dir }
    }

    /// Writes one named text artifact. With an output directory the file
    /// lands there and its path is echoed; otherwise the content goes to
    /// stdout under a comment header.
    pub fn emit_text(&self, name: &str, content: &str) -> Result<(), Failure> {
        match &self.out_dir {
            Some(dir) => {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
                let path = dir.join(name);
                fs::write(&path, content)
                    .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
                println!("wrote {}", path.display());
                Ok(())
            }
            None => {
                println!("# {name}");
                print!("{content}");
                if !content.ends_with('\n') {
                    println!();
                }
                Ok(())
            }
        }
    }

    /// Writes one named JSON artifact; on stdout it is printed bare so the
    /// output stays machine-readable.
    pub fn emit_json(&self, name: &str, value: &Value) -> Result<(), Failure> {
        let text = format!("{}\n", serde_json::to_string_pretty(value).expect("valid JSON"));
        match &self.out_dir {
            Some(_) => self.emit_text(name, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
