//! Instruction corpus ingestion and persistence.
//!
//! Two on-disk formats are supported: `alpaca_json`, a single JSON array of
//! `{instruction, input, output}` objects, and `jsonl`, one
//! `{id, prompt, input, response}` object per line. Records without an
//! explicit id are assigned their zero-padded position in the file, so
//! loading the same file twice always yields the same id sequence.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Width of generated positional ids ("000000", "000001", ...).
const ID_PAD_WIDTH: usize = 6;

/// One corpus record. `prompt` is the instruction text attacks operate on;
/// `input` is auxiliary context preserved verbatim; `response` may be empty
/// for prompt-only workflows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionSample {
    pub id: String,
    pub prompt: String,
    #[serde(default)]
    pub input: String,
    #[serde(default)]
    pub response: String,
}

impl InstructionSample {
    /// The full conditioning text: prompt joined with the input by a single
    /// newline when the input is non-empty, the prompt alone otherwise.
    pub fn instruction_text(&self) -> String {
        join_instruction(&self.prompt, &self.input)
    }
}

/// Join an (attacked or clean) prompt with a sample's input.
pub fn join_instruction(prompt: &str, input: &str) -> String {
    if input.is_empty() {
        prompt.to_string()
    } else {
        format!("{prompt}\n{input}")
    }
}

/// An ordered, immutable collection of samples. Order is preserved exactly
/// as read; ranking ties break on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub samples: Vec<InstructionSample>,
    pub source_path: String,
}

impl Corpus {
    pub fn new(samples: Vec<InstructionSample>, source_path: impl Into<String>) -> Self {
        Corpus {
            samples,
            source_path: source_path.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&InstructionSample> {
        self.samples.iter().find(|s| s.id == id)
    }
}

/// On-disk corpus format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFormat {
    AlpacaJson,
    Jsonl,
}

impl CorpusFormat {
    /// Infer a format from a file extension: `.jsonl` means JSONL,
    /// anything else the Alpaca array format.
    pub fn infer(path: &Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") => CorpusFormat::Jsonl,
            _ => CorpusFormat::AlpacaJson,
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusFormat::AlpacaJson => write!(f, "alpaca_json"),
            CorpusFormat::Jsonl => write!(f, "jsonl"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at record {record} of {path}: {message}")]
    Parse {
        path: String,
        record: usize,
        message: String,
    },
    #[error("duplicate id {id:?} at record {record} of {path}")]
    DuplicateId {
        path: String,
        record: usize,
        id: String,
    },
    #[error("empty prompt at record {record} (id {id:?}) of {path}")]
    EmptyPrompt {
        path: String,
        record: usize,
        id: String,
    },
}

#[derive(Deserialize)]
struct AlpacaRecord {
    instruction: String,
    #[serde(default)]
    input: String,
    #[serde(default)]
    output: String,
}

#[derive(Serialize)]
struct AlpacaRecordRef<'a> {
    instruction: &'a str,
    input: &'a str,
    output: &'a str,
}

#[derive(Deserialize)]
struct JsonlRecord {
    #[serde(default)]
    id: Option<String>,
    prompt: String,
    #[serde(default)]
    input: String,
    #[serde(default)]
    response: String,
}

fn positional_id(index: usize) -> String {
    format!("{index:0width$}", width = ID_PAD_WIDTH)
}

/// Load a corpus from disk in the declared format.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Read {
        path: display.clone(),
        source,
    })?;

    let mut samples = Vec::new();
    match format {
        CorpusFormat::AlpacaJson => {
            let records: Vec<serde_json::Value> =
                serde_json::from_str(&text).map_err(|e| CorpusError::Parse {
                    path: display.clone(),
                    record: 0,
                    message: e.to_string(),
                })?;
            for (i, value) in records.into_iter().enumerate() {
                let rec: AlpacaRecord =
                    serde_json::from_value(value).map_err(|e| CorpusError::Parse {
                        path: display.clone(),
                        record: i,
                        message: e.to_string(),
                    })?;
                samples.push(InstructionSample {
                    id: positional_id(i),
                    prompt: rec.instruction,
                    input: rec.input,
                    response: rec.output,
                });
            }
        }
        CorpusFormat::Jsonl => {
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let rec: JsonlRecord =
                    serde_json::from_str(line).map_err(|e| CorpusError::Parse {
                        path: display.clone(),
                        record: i,
                        message: e.to_string(),
                    })?;
                samples.push(InstructionSample {
                    id: rec.id.unwrap_or_else(|| positional_id(samples.len())),
                    prompt: rec.prompt,
                    input: rec.input,
                    response: rec.response,
                });
            }
        }
    }

    let mut seen = HashSet::new();
    for (i, sample) in samples.iter().enumerate() {
        if sample.prompt.trim().is_empty() {
            return Err(CorpusError::EmptyPrompt {
                path: display,
                record: i,
                id: sample.id.clone(),
            });
        }
        if !seen.insert(sample.id.clone()) {
            return Err(CorpusError::DuplicateId {
                path: display,
                record: i,
                id: sample.id.clone(),
            });
        }
    }

    Ok(Corpus::new(samples, display))
}

/// Serialize a corpus in the given format. Key order is fixed, so the same
/// corpus always produces the same bytes. Note the Alpaca schema carries no
/// id column; ids regenerate positionally on reload.
pub fn corpus_to_string(corpus: &Corpus, format: CorpusFormat) -> String {
    match format {
        CorpusFormat::AlpacaJson => {
            let records: Vec<AlpacaRecordRef<'_>> = corpus
                .samples
                .iter()
                .map(|s| AlpacaRecordRef {
                    instruction: &s.prompt,
                    input: &s.input,
                    output: &s.response,
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&records).expect("corpus serializes");
            out.push('\n');
            out
        }
        CorpusFormat::Jsonl => {
            let mut out = String::new();
            for s in &corpus.samples {
                out.push_str(&serde_json::to_string(s).expect("sample serializes"));
                out.push('\n');
            }
            out
        }
    }
}

/// Write a corpus to disk in the given format.
pub fn write_corpus(corpus: &Corpus, path: &Path, format: CorpusFormat) -> Result<(), CorpusError> {
    fs::write(path, corpus_to_string(corpus, format)).map_err(|source| CorpusError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(contents: &str, ext: &str) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(format!("corpus.{ext}")), contents).unwrap();
        dir
    }

    #[test]
    fn loads_alpaca_record() {
        let dir = write_temp(
            r#"[{"instruction":"Give three tips for staying healthy.","input":"","output":"1.Eat a balanced diet and make sure to include plenty of fruits and vegetables."}]"#,
            "json",
        );
        let corpus = load_corpus(&dir.path().join("corpus.json"), CorpusFormat::AlpacaJson).unwrap();
        assert_eq!(corpus.len(), 1);
        let s = &corpus.samples[0];
        assert_eq!(s.id, "000000");
        assert_eq!(s.prompt, "Give three tips for staying healthy.");
        assert_eq!(s.input, "");
        assert!(s.response.starts_with("1.Eat a balanced diet"));
    }

    #[test]
    fn empty_jsonl_is_empty_corpus() {
        let dir = write_temp("", "jsonl");
        let corpus = load_corpus(&dir.path().join("corpus.jsonl"), CorpusFormat::Jsonl).unwrap();
        assert!(corpus.is_empty());
    }

    #[test]
    fn missing_instruction_names_record_index() {
        let dir = write_temp(
            r#"[{"instruction":"Say hi.","input":"","output":"hi"},{"input":"","output":"oops"}]"#,
            "json",
        );
        let err = load_corpus(&dir.path().join("corpus.json"), CorpusFormat::AlpacaJson).unwrap_err();
        match err {
            CorpusError::Parse { record, .. } => assert_eq!(record, 1),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn duplicate_explicit_id_rejected() {
        let dir = write_temp(
            "{\"id\":\"a\",\"prompt\":\"one\"}\n{\"id\":\"a\",\"prompt\":\"two\"}\n",
            "jsonl",
        );
        let err = load_corpus(&dir.path().join("corpus.jsonl"), CorpusFormat::Jsonl).unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateId { record: 1, .. }));
    }

    #[test]
    fn whitespace_prompt_rejected() {
        let dir = write_temp("{\"id\":\"a\",\"prompt\":\"  \"}\n", "jsonl");
        let err = load_corpus(&dir.path().join("corpus.jsonl"), CorpusFormat::Jsonl).unwrap_err();
        assert!(matches!(err, CorpusError::EmptyPrompt { .. }));
    }

    #[test]
    fn round_trip_both_formats() {
        let samples = vec![
            InstructionSample {
                id: "000000".into(),
                prompt: "Give three tips for staying healthy.".into(),
                input: String::new(),
                response: "1. Eat well.".into(),
            },
            InstructionSample {
                id: "000001".into(),
                prompt: "Summarize the text.".into(),
                input: "the cat sat on the mat.".into(),
                response: "a cat sits.".into(),
            },
            InstructionSample {
                id: "000002".into(),
                prompt: "List two colors".into(),
                input: String::new(),
                response: String::new(),
            },
        ];
        let corpus = Corpus::new(samples, "memory");
        let dir = tempfile::tempdir().unwrap();

        for (format, name) in [
            (CorpusFormat::AlpacaJson, "c.json"),
            (CorpusFormat::Jsonl, "c.jsonl"),
        ] {
            let path = dir.path().join(name);
            write_corpus(&corpus, &path, format).unwrap();
            let reloaded = load_corpus(&path, format).unwrap();
            assert_eq!(reloaded.samples, corpus.samples, "round trip for {format}");

            // Re-serialization is byte-stable.
            let first = fs::read(&path).unwrap();
            write_corpus(&reloaded, &path, format).unwrap();
            assert_eq!(first, fs::read(&path).unwrap());
        }
    }

    #[test]
    fn ids_stable_across_loads() {
        let dir = write_temp(
            r#"[{"instruction":"a b c","input":"","output":""},{"instruction":"d e f","input":"","output":""}]"#,
            "json",
        );
        let path = dir.path().join("corpus.json");
        let a = load_corpus(&path, CorpusFormat::AlpacaJson).unwrap();
        let b = load_corpus(&path, CorpusFormat::AlpacaJson).unwrap();
        let ids: Vec<_> = a.samples.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, vec!["000000", "000001"]);
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn format_inference() {
        assert_eq!(
            CorpusFormat::infer(Path::new("x.jsonl")),
            CorpusFormat::Jsonl
        );
        assert_eq!(
            CorpusFormat::infer(Path::new("x.json")),
            CorpusFormat::AlpacaJson
        );
    }
}
