//! Versioned JSON stage files.

use std::io::{BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Serialize)]
struct Envelope<'a, T> {
    format: &'a str,
    version: u32,
    body: &'a T,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Deserialize)]
struct Body<T> {
    body: T,
}

pub fn to_string<T: Serialize>(format: &str, version: u32, body: &T) -> Result<String> {
    Ok(serde_json::to_string(&Envelope {
        format,
        version,
        body,
    })?)
}

pub fn from_str<T: DeserializeOwned>(format: &str, version: u32, text: &str) -> Result<T> {
    let header: Header = serde_json::from_str(text)?;
    if header.format != format {
        return Err(Error::Stale {
            artifact: format.to_string(),
            reason: format!("file holds `{}`", header.format),
        });
    }
    if header.version != version {
        return Err(Error::Version {
            artifact: format.to_string(),
            found: header.version,
            expected: version,
        });
    }
    let body: Body<T> = serde_json::from_str(text)?;
    Ok(body.body)
}

pub fn write<T: Serialize>(path: &Path, format: &str, version: u32, body: &T) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(
        &mut w,
        &Envelope {
            format,
            version,
            body,
        },
    )?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a stage file; a missing file is reported as a missing stage.
pub fn read<T: DeserializeOwned>(path: &Path, format: &str, version: u32, stage: &str) -> Result<T> {
    if !path.exists() {
        return Err(Error::MissingStage {
            artifact: path.display().to_string(),
            stage: stage.to_string(),
        });
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_str(format, version, &text).map_err(|e| match e {
        Error::Version {
            found, expected, ..
        } => Error::Version {
            artifact: path.display().to_string(),
            found,
            expected,
        },
        Error::Stale { reason, .. } => Error::Stale {
            artifact: path.display().to_string(),
            reason,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_mismatch_is_error() {
        let s = to_string("thing", 2, &vec![1, 2]).unwrap();
        assert!(matches!(
            from_str::<Vec<i32>>("thing", 1, &s),
            Err(Error::Version { found: 2, .. })
        ));
        assert_eq!(from_str::<Vec<i32>>("thing", 2, &s).unwrap(), vec![1, 2]);
        assert!(from_str::<Vec<i32>>("other", 2, &s).is_err());
    }

    #[test]
    fn missing_file_names_stage() {
        let err = read::<i32>(Path::new("/nonexistent/x.json"), "x", 1, "train").unwrap_err();
        assert!(err.to_string().contains("train"));
    }
}
