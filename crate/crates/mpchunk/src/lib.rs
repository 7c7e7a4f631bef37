//! Text formats and command-line front end for [`mpchunk_core`].
//!
//! [`load`] turns any supported input (one-critical, multi-critical or OFF
//! mesh) into a sorted, validated complex; [`format`](mod@format) reads and writes the
//! text formats and [`cli`] implements the `mpchunk` binary.

pub mod cli;
pub mod format;
pub mod off;

use std::path::{Path, PathBuf};

use mpchunk_core::{
    expand_h_critical, mesh_bifiltration, sort_and_index, validate, BifilteredComplex, FieldChar,
    IngestError, ValidationReport,
};
use thiserror::Error;

use crate::format::{detect, parse_multicritical, parse_native, FormatError, Kind};
use crate::off::{parse_off, Filters, OffError};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: {source}")]
    Off { path: PathBuf, source: OffError },
    #[error("{path}: {source}")]
    Ingest { path: PathBuf, source: IngestError },
    #[error("{path}: invalid complex ({} violations)", report.violations.len())]
    Invalid {
        path: PathBuf,
        report: ValidationReport,
    },
}

impl LoadError {
    /// True for problems with the complex itself rather than with reading
    /// or parsing the file.
    pub fn is_validation(&self) -> bool {
        match self {
            LoadError::Invalid { .. } => true,
            LoadError::Ingest { source, .. } => !matches!(
                source,
                IngestError::BadVertex { .. } | IngestError::DegenerateCell { .. }
            ),
            _ => false,
        }
    }
}

/// A loaded input, ready for reduction.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub kind: Kind,
    pub complex: BifilteredComplex,
}

/// Parses text in any supported format into a sorted complex, without the
/// final validation pass.
pub fn parse_any(
    text: &str,
    path: &Path,
    field: Option<FieldChar>,
    filters: Filters,
) -> Result<Loaded, LoadError> {
    let ingest = |source| LoadError::Ingest {
        path: path.to_path_buf(),
        source,
    };
    let kind = if detect(text) == Kind::Native
        && path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("off"))
    {
        Kind::Off
    } else {
        detect(text)
    };
    let (raw, field) = match kind {
        Kind::Native => parse_native(text, field).map_err(|source| LoadError::Format {
            path: path.to_path_buf(),
            source,
        })?,
        Kind::MultiCritical => {
            let (gens, field) =
                parse_multicritical(text, field).map_err(|source| LoadError::Format {
                    path: path.to_path_buf(),
                    source,
                })?;
            (expand_h_critical(&gens, field).map_err(ingest)?, field)
        }
        Kind::Off => {
            let mesh = parse_off(text, filters).map_err(|source| LoadError::Off {
                path: path.to_path_buf(),
                source,
            })?;
            let field = field.unwrap_or_default();
            (mesh_bifiltration(&mesh, field).map_err(ingest)?, field)
        }
    };
    let complex = sort_and_index(&raw, field).map_err(ingest)?;
    Ok(Loaded { kind, complex })
}

/// Reads, parses and validates a file.
pub fn load(path: &Path, field: Option<FieldChar>, filters: Filters) -> Result<Loaded, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let loaded = parse_any(&text, path, field, filters)?;
    let report = validate(&loaded.complex);
    if !report.ok() {
        return Err(LoadError::Invalid {
            path: path.to_path_buf(),
            report,
        });
    }
    Ok(loaded)
}
