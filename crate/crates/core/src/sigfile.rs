//! Signature list files: UTF-8 text, one signature per line, `#` comment
//! lines and blank lines ignored. The format is shared by every pipeline
//! stage that consumes or produces signature lists.

use crate::isosig::{IsoSig, ParseError};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum SigFileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    BadSignature {
        line: usize,
        #[source]
        source: ParseError,
    },
}

/// Reads a signature list.
pub fn read_sig_list(r: impl BufRead) -> Result<Vec<IsoSig>, SigFileError> {
    let mut out = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let sig = IsoSig::parse(line).map_err(|source| SigFileError::BadSignature {
            line: lineno + 1,
            source,
        })?;
        out.push(sig);
    }
    Ok(out)
}

/// Writes a signature list, one per line.
pub fn write_sig_list(mut w: impl Write, sigs: &[IsoSig]) -> std::io::Result<()> {
    for sig in sigs {
        writeln!(w, "{sig}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks_are_skipped() {
        let text = "# header\n\ncMcabbgqs\n  cMcabbjaj  \n# trailing\n";
        let sigs = read_sig_list(std::io::Cursor::new(text)).unwrap();
        assert_eq!(sigs.len(), 2);
        assert_eq!(sigs[0].as_str(), "cMcabbgqs");
        assert_eq!(sigs[1].as_str(), "cMcabbjaj");
    }

    #[test]
    fn bad_characters_are_reported_with_line() {
        let text = "cMcabbgqs\nnot a sig!\n";
        match read_sig_list(std::io::Cursor::new(text)) {
            Err(SigFileError::BadSignature { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected bad signature, got {:?}", other.map(|v| v.len())),
        }
    }

    #[test]
    fn round_trip() {
        let sigs = vec![
            IsoSig::parse("cMcabbgqs").unwrap(),
            IsoSig::parse("caba").unwrap(),
        ];
        let mut buf = Vec::new();
        write_sig_list(&mut buf, &sigs).unwrap();
        let back = read_sig_list(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(back, sigs);
    }
}
