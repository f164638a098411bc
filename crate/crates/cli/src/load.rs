use std::io::Read;
use std::path::Path;

use refclass::dsl::parse_kb;
use refclass::{close, ClosedKB, KbBuilder, KbError};

use crate::status;

fn read(path: &Path) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
    }
}

/// Reads and parses a knowledge base, printing diagnostics on failure.
pub fn builder(path: &Path) -> Result<KbBuilder, u8> {
    let text = read(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        status::INPUT
    })?;
    parse_kb(&text).map_err(|diagnostics| {
        for d in diagnostics {
            eprintln!("{}:{d}", path.display());
        }
        status::INPUT
    })
}

pub fn closed(builder: &KbBuilder) -> Result<ClosedKB, u8> {
    close(builder).map_err(|e: KbError| {
        eprintln!("error: {e}");
        status::INCONSISTENT
    })
}
