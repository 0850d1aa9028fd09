//! CSV ingestion and emission.
//!
//! Dataset files carry one header row naming a `y` column, a `t` column
//! of {0, 1} type labels, and any number of numeric feature columns (read
//! in file order). Ingestion appends the constant-1 feature; emission
//! drops it again, so emit-then-ingest reproduces a dataset exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use seldonian_core::rl::EpisodeRecord;
use seldonian_core::Dataset64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    // The source is reported through the error chain, not the message,
    // so a chained printout does not repeat it.
    #[error("{path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}")]
    Malformed { path: String, source: csv::Error },
    #[error("{path}: no data rows")]
    Empty { path: String },
    #[error("{path}: missing required column '{column}'")]
    MissingColumn { path: String, column: String },
    #[error("{path}: data row {row}, column '{column}': {message}")]
    Cell {
        path: String,
        row: usize,
        column: String,
        message: String,
    },
    #[error("dataset's final feature must be the constant-1 column to emit it")]
    NoConstantColumn,
    #[error("episodes disagree on the constraint count")]
    RaggedEpisodes,
}

fn io_err(path: &Path, source: std::io::Error) -> CsvError {
    CsvError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Reads a dataset file. Column order of features is preserved; the
/// constant-1 feature is appended as the last column.
pub fn ingest_csv(path: &Path) -> Result<Dataset64, CsvError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let display = path.display().to_string();
    let headers: Vec<String> = reader
        .headers()
        .map_err(|source| CsvError::Malformed {
            path: display.clone(),
            source,
        })?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let find = |name: &str| -> Result<usize, CsvError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CsvError::MissingColumn {
                path: display.clone(),
                column: name.to_string(),
            })
    };
    let y_col = find("y")?;
    let t_col = find("t")?;
    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&i| i != y_col && i != t_col)
        .collect();
    let mut d = Dataset64::new(feature_cols.len() + 1);
    let mut features = vec![0.0f64; feature_cols.len() + 1];
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|source| CsvError::Malformed {
            path: display.clone(),
            source,
        })?;
        let cell = |col: usize| -> Result<f64, CsvError> {
            let raw = record.get(col).unwrap_or("").trim();
            raw.parse::<f64>().map_err(|_| CsvError::Cell {
                path: display.clone(),
                row,
                column: headers[col].clone(),
                message: format!("expected a number, found '{raw}'"),
            })
        };
        for (slot, &col) in features.iter_mut().zip(&feature_cols) {
            *slot = cell(col)?;
        }
        *features.last_mut().unwrap() = 1.0;
        let y = cell(y_col)?;
        let t_raw = cell(t_col)?;
        let t = if t_raw == 0.0 {
            0
        } else if t_raw == 1.0 {
            1
        } else {
            return Err(CsvError::Cell {
                path: display.clone(),
                row,
                column: headers[t_col].clone(),
                message: format!("type label must be 0 or 1, found '{t_raw}'"),
            });
        };
        d.push_row(&features, y, t).expect("row width fixed above");
    }
    if d.m() == 0 {
        return Err(CsvError::Empty { path: display });
    }
    Ok(d)
}

/// Writes a dataset whose final feature column is the constant 1 (the
/// shape [`ingest_csv`] produces). The constant column is dropped so the
/// file round-trips.
pub fn emit_dataset(path: &Path, d: &Dataset64) -> Result<(), CsvError> {
    let w = d.width();
    if w < 1 || (0..d.m()).any(|i| d.x(i)[w - 1] != 1.0) {
        return Err(CsvError::NoConstantColumn);
    }
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut writer = csv::Writer::from_writer(BufWriter::new(file));
    let mut header: Vec<String> = (1..w).map(|i| format!("f{i}")).collect();
    header.push("y".into());
    header.push("t".into());
    writer
        .write_record(&header)
        .map_err(|source| CsvError::Malformed {
            path: path.display().to_string(),
            source,
        })?;
    let mut record = Vec::with_capacity(w + 1);
    for i in 0..d.m() {
        record.clear();
        for v in &d.x(i)[..w - 1] {
            record.push(v.to_string());
        }
        record.push(d.y(i).to_string());
        record.push(d.t(i).to_string());
        writer
            .write_record(&record)
            .map_err(|source| CsvError::Malformed {
                path: path.display().to_string(),
                source,
            })?;
    }
    writer.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

/// Writes logged episodes as `p1,p2,r,r1..rn`.
pub fn emit_episodes(path: &Path, episodes: &[EpisodeRecord<f64>]) -> Result<(), CsvError> {
    let n = episodes.first().map_or(0, |e| e.constraints.len());
    if episodes.iter().any(|e| e.constraints.len() != n) {
        return Err(CsvError::RaggedEpisodes);
    }
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut writer = csv::Writer::from_writer(BufWriter::new(file));
    let mut header = vec!["p1".to_string(), "p2".to_string(), "r".to_string()];
    header.extend((1..=n).map(|i| format!("r{i}")));
    writer
        .write_record(&header)
        .map_err(|source| CsvError::Malformed {
            path: path.display().to_string(),
            source,
        })?;
    let mut record = Vec::with_capacity(3 + n);
    for e in episodes {
        record.clear();
        record.push(e.policy[0].to_string());
        record.push(e.policy[1].to_string());
        record.push(e.primary.to_string());
        record.extend(e.constraints.iter().map(|v| v.to_string()));
        writer
            .write_record(&record)
            .map_err(|source| CsvError::Malformed {
                path: path.display().to_string(),
                source,
            })?;
    }
    writer.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        let mut f = File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn ingest_appends_the_constant_feature() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            &dir,
            "d.csv",
            "f1,f2,y,t\n1.5,-2.0,0.25,0\n0.0,3.5,1.0,1\n2.0,0.5,-1.0,1\n",
        );
        let d = ingest_csv(&path).unwrap();
        assert_eq!((d.m(), d.width()), (3, 3));
        assert_eq!(d.x(0), &[1.5, -2.0, 1.0]);
        assert_eq!(d.x(2), &[2.0, 0.5, 1.0]);
        assert_eq!((d.y(1), d.t(1)), (1.0, 1));
        assert_eq!((d.m0(), d.m1()), (1, 2));
    }

    #[test]
    fn column_order_does_not_matter() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "d.csv", "t,y,f1\n0,2.0,4.0\n1,-1.0,5.0\n");
        let d = ingest_csv(&path).unwrap();
        assert_eq!(d.x(0), &[4.0, 1.0]);
        assert_eq!(d.y(0), 2.0);
    }

    #[test]
    fn bad_type_label_names_the_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "d.csv", "f1,y,t\n1.0,2.0,0\n1.0,2.0,2\n");
        let err = ingest_csv(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("data row 2"), "message was: {msg}");
        assert!(msg.contains("must be 0 or 1"), "message was: {msg}");
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "d.csv", "f1,y,t\nouch,2.0,0\n");
        let msg = ingest_csv(&path).unwrap_err().to_string();
        assert!(msg.contains("data row 1") && msg.contains("'f1'"), "message was: {msg}");
    }

    #[test]
    fn missing_column_and_empty_file_are_named_errors() {
        let dir = tempfile::tempdir().unwrap();
        let no_t = write_file(&dir, "a.csv", "f1,y\n1.0,2.0\n");
        assert!(ingest_csv(&no_t).unwrap_err().to_string().contains("'t'"));
        let empty = write_file(&dir, "b.csv", "");
        assert!(ingest_csv(&empty).is_err());
        let header_only = write_file(&dir, "c.csv", "f1,y,t\n");
        assert!(matches!(ingest_csv(&header_only).unwrap_err(), CsvError::Empty { .. }));
    }

    #[test]
    fn emit_then_ingest_reproduces_the_dataset_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let mut d = Dataset64::new(3);
        d.push_row(&[0.1 + 0.2, -1.0 / 3.0, 1.0], 2.0_f64.sqrt(), 0).unwrap();
        d.push_row(&[1e-300, 4.567891234567e12, 1.0], -0.0, 1).unwrap();
        d.push_row(&[-7.25, 0.0, 1.0], f64::MIN_POSITIVE, 0).unwrap();
        let path = dir.path().join("round.csv");
        emit_dataset(&path, &d).unwrap();
        let back = ingest_csv(&path).unwrap();
        assert_eq!((back.m(), back.width()), (d.m(), d.width()));
        for i in 0..d.m() {
            assert_eq!(back.x(i), d.x(i));
            assert_eq!(back.y(i).to_bits(), d.y(i).to_bits());
            assert_eq!(back.t(i), d.t(i));
        }
    }

    #[test]
    fn emit_refuses_without_a_trailing_constant_column() {
        let dir = tempfile::tempdir().unwrap();
        let mut d = Dataset64::new(2);
        d.push_row(&[1.0, 2.0], 0.0, 0).unwrap();
        let err = emit_dataset(&dir.path().join("x.csv"), &d).unwrap_err();
        assert!(matches!(err, CsvError::NoConstantColumn));
    }

    #[test]
    fn episodes_emit_matches_the_schema() {
        let dir = tempfile::tempdir().unwrap();
        let eps = vec![
            EpisodeRecord {
                policy: [0.25, 0.5],
                primary: -1.5,
                constraints: vec![-0.5],
            },
            EpisodeRecord {
                policy: [0.75, 0.1],
                primary: -2.0,
                constraints: vec![0.0],
            },
        ];
        let path = dir.path().join("eps.csv");
        emit_episodes(&path, &eps).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "p1,p2,r,r1\n0.25,0.5,-1.5,-0.5\n0.75,0.1,-2,0\n");

        let ragged = vec![
            EpisodeRecord {
                policy: [0.0, 0.0],
                primary: 0.0,
                constraints: vec![1.0],
            },
            EpisodeRecord {
                policy: [0.0, 0.0],
                primary: 0.0,
                constraints: vec![],
            },
        ];
        assert!(matches!(
            emit_episodes(&dir.path().join("r.csv"), &ragged).unwrap_err(),
            CsvError::RaggedEpisodes
        ));
    }
}
