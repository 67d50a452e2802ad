use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::{Error, Result};

pub const MIN_YEAR: i32 = 1800;
pub const MAX_YEAR: i32 = 2100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub year: i32,
    #[serde(default)]
    pub venue: String,
    #[serde(default)]
    pub discipline: String,
    #[serde(default)]
    pub title: String,
    #[serde(default, rename = "abstract")]
    pub abstract_text: String,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default)]
    pub is_book_or_review: bool,
    #[serde(default)]
    pub references: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_text: Option<String>,
}

impl PaperRecord {
    /// A record with only the required fields set.
    pub fn new(paper_id: impl Into<String>, year: i32) -> Self {
        Self {
            paper_id: paper_id.into(),
            year,
            venue: String::new(),
            discipline: String::new(),
            title: String::new(),
            abstract_text: String::new(),
            authors: Vec::new(),
            is_book_or_review: false,
            references: Vec::new(),
            full_text: None,
        }
    }
}

/// The sentence window around one in-text citation marker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationContext {
    pub citing_id: String,
    pub cited_id: String,
    pub text: String,
}

/// Papers indexed by id, in file order.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    papers: Vec<PaperRecord>,
    by_id: HashMap<String, usize>,
}

impl Corpus {
    pub fn new(papers: Vec<PaperRecord>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(papers.len());
        for (i, p) in papers.iter().enumerate() {
            if by_id.insert(p.paper_id.clone(), i).is_some() {
                return Err(Error::DuplicatePaper(p.paper_id.clone()));
            }
        }
        Ok(Self { papers, by_id })
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn get(&self, id: &str) -> Option<&PaperRecord> {
        self.by_id.get(id).map(|&i| &self.papers[i])
    }

    pub fn require(&self, id: &str) -> Result<&PaperRecord> {
        self.get(id).ok_or_else(|| Error::UnknownPaper(id.to_string()))
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }
}

/// Parsed corpus file.
#[derive(Debug, Clone, Default)]
pub struct CorpusData {
    pub papers: Vec<PaperRecord>,
    pub contexts: Vec<CitationContext>,
}

impl CorpusData {
    pub fn into_corpus(self) -> Result<(Corpus, Vec<CitationContext>)> {
        Ok((Corpus::new(self.papers)?, self.contexts))
    }
}

/// Reads a corpus file: one JSON object per line, `"kind"` is `"paper"` or
/// `"context"`. Blank lines are skipped; unknown keys are ignored.
pub fn ingest(path: &Path) -> Result<CorpusData> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_corpus<R: BufRead>(reader: R) -> Result<CorpusData> {
    let mut data = CorpusData::default();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io("<corpus>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .map_err(|e| Error::malformed(lineno, "<record>", e.to_string()))?;
        let Value::Object(obj) = value else {
            return Err(Error::malformed(lineno, "<record>", "expected an object"));
        };
        match req_str(&obj, lineno, "kind")? {
            "paper" => {
                let paper = parse_paper(&obj, lineno)?;
                if !seen.insert(paper.paper_id.clone()) {
                    return Err(Error::DuplicatePaper(paper.paper_id));
                }
                data.papers.push(paper);
            }
            "context" => data.contexts.push(parse_context(&obj, lineno)?),
            other => {
                return Err(Error::malformed(
                    lineno,
                    "kind",
                    format!("expected `paper` or `context`, got `{other}`"),
                ))
            }
        }
    }
    Ok(data)
}

fn req_str<'a>(obj: &'a Map<String, Value>, line: usize, field: &str) -> Result<&'a str> {
    match obj.get(field) {
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err(Error::malformed(line, field, "expected a string")),
        None => Err(Error::malformed(line, field, "missing")),
    }
}

fn opt_str(obj: &Map<String, Value>, line: usize, field: &str) -> Result<Option<String>> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(Error::malformed(line, field, "expected a string")),
    }
}

fn opt_str_list(obj: &Map<String, Value>, line: usize, field: &str) -> Result<Vec<String>> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => Ok(s.clone()),
                _ => Err(Error::malformed(line, field, "expected a list of strings")),
            })
            .collect(),
        Some(_) => Err(Error::malformed(line, field, "expected a list of strings")),
    }
}

fn parse_paper(obj: &Map<String, Value>, line: usize) -> Result<PaperRecord> {
    let paper_id = req_str(obj, line, "paper_id")?.to_string();
    if paper_id.trim().is_empty() {
        return Err(Error::malformed(line, "paper_id", "empty"));
    }
    let year = match obj.get("year") {
        Some(Value::Number(n)) => n
            .as_i64()
            .ok_or_else(|| Error::malformed(line, "year", "expected an integer"))?,
        Some(_) => return Err(Error::malformed(line, "year", "expected an integer")),
        None => return Err(Error::malformed(line, "year", "missing")),
    };
    if !(MIN_YEAR as i64..=MAX_YEAR as i64).contains(&year) {
        return Err(Error::malformed(
            line,
            "year",
            format!("{year} outside [{MIN_YEAR}, {MAX_YEAR}]"),
        ));
    }
    let is_book_or_review = match obj.get("is_book_or_review") {
        None | Some(Value::Null) => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(Error::malformed(line, "is_book_or_review", "expected a boolean")),
    };
    let references = opt_str_list(obj, line, "references")?;
    let mut uniq = HashSet::new();
    for r in &references {
        if r == &paper_id {
            return Err(Error::malformed(line, "references", "paper cites itself"));
        }
        if !uniq.insert(r) {
            return Err(Error::malformed(line, "references", format!("duplicate `{r}`")));
        }
    }
    Ok(PaperRecord {
        year: year as i32,
        venue: opt_str(obj, line, "venue")?.unwrap_or_default(),
        discipline: opt_str(obj, line, "discipline")?.unwrap_or_default(),
        title: opt_str(obj, line, "title")?.unwrap_or_default(),
        abstract_text: opt_str(obj, line, "abstract")?.unwrap_or_default(),
        authors: opt_str_list(obj, line, "authors")?,
        is_book_or_review,
        references,
        full_text: opt_str(obj, line, "full_text")?,
        paper_id,
    })
}

fn parse_context(obj: &Map<String, Value>, line: usize) -> Result<CitationContext> {
    let citing_id = req_str(obj, line, "citing_id")?.to_string();
    let cited_id = req_str(obj, line, "cited_id")?.to_string();
    let text = req_str(obj, line, "text")?;
    if citing_id == cited_id {
        return Err(Error::malformed(line, "cited_id", "context cites its own paper"));
    }
    let text = text.split_whitespace().collect::<Vec<_>>().join(" ");
    if text.is_empty() {
        return Err(Error::malformed(line, "text", "empty"));
    }
    Ok(CitationContext {
        citing_id,
        cited_id,
        text,
    })
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum LineRef<'a> {
    Paper(&'a PaperRecord),
    Context(&'a CitationContext),
}

/// Writes papers then contexts in the corpus line format.
pub fn write_corpus<W: Write>(
    mut w: W,
    papers: &[PaperRecord],
    contexts: &[CitationContext],
) -> std::io::Result<()> {
    for p in papers {
        serde_json::to_writer(&mut w, &LineRef::Paper(p))?;
        w.write_all(b"\n")?;
    }
    for c in contexts {
        serde_json::to_writer(&mut w, &LineRef::Context(c))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
