//! JSON documents for algebras, morphisms, languages and expression files.
//!
//! ```json
//! {"monad": "word", "params": {}, "sorts": ["s"],
//!  "elements": [{"id": "o", "sort": "s"}, {"id": "e", "sort": "s"}],
//!  "table": [{"op": "concat", "args": ["o", "o"], "value": "e"}, ...]}
//! ```
//!
//! Morphisms are `{"algebra": <inline document or path>, "alphabet":
//! [{"id", "sort"}], "units": {letter: element}}`; languages add
//! `"accepting": [element, ...]`. Set-slot arguments are arrays of ids.
//! Relative paths resolve against the directory of the referring file.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Algebra, Arg, Shape};
use crate::error::{Error, Result};
use crate::monad::Monad;
use crate::morphism::{Alphabet, Language, Letter, Morphism};
use crate::mso::{Environment, MsoExpr};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub monad: String,
    #[serde(default = "empty_params")]
    pub params: Value,
    pub sorts: Vec<String>,
    pub elements: Vec<ElementDoc>,
    pub table: Vec<EntryDoc>,
}

fn empty_params() -> Value {
    Value::Object(Default::default())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    pub id: String,
    pub sort: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub op: String,
    pub args: Vec<ArgDoc>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArgDoc {
    One(String),
    Set(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(Box<AlgebraDoc>),
}

/// A morphism document, or a language document when `accepting` is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageDoc {
    pub algebra: AlgebraRef,
    pub alphabet: Vec<ElementDoc>,
    pub units: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepting: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LanguageRef {
    Path(String),
    Inline(Box<LanguageDoc>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MsoDoc {
    pub expr: MsoExpr,
    pub env: BTreeMap<String, LanguageRef>,
}

/// Parses JSON, reporting syntax and shape errors with line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Syntax { line: e.line(), column: e.column(), msg: strip_position(&e) })
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Syntax { line, column, msg } => Error::Syntax { line, column, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

fn resolve(base: Option<&Path>, rel: &str) -> PathBuf {
    match base {
        Some(dir) => dir.join(rel),
        None => PathBuf::from(rel),
    }
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<Algebra> {
    let params = if doc.params.is_null() { empty_params() } else { doc.params.clone() };
    let monad = Monad::from_id(&doc.monad, &params)?;
    let sig = monad.signature();
    if doc.sorts != sig.sorts {
        return Err(Error::Schema(format!(
            "monad `{}` has sorts {:?}, document declares {:?}",
            doc.monad, sig.sorts, doc.sorts
        )));
    }
    let mut elements = Vec::new();
    for el in &doc.elements {
        let sort = sig.sort_id(&el.sort).ok_or_else(|| Error::UnknownSort(el.sort.clone()))?;
        elements.push((el.id.clone(), sort));
    }
    let ids: BTreeMap<&str, usize> = doc.elements.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
    let elem = |name: &str| ids.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()));
    let mut entries = Vec::new();
    for entry in &doc.table {
        let op = sig.op_id(&entry.op).ok_or_else(|| Error::UnknownOp(entry.op.clone()))?;
        let args = entry
            .args
            .iter()
            .map(|a| {
                Ok(match a {
                    ArgDoc::One(x) => Arg::One(elem(x)?),
                    ArgDoc::Set(xs) => Arg::set(xs.iter().map(|x| elem(x)).collect::<Result<_>>()?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        entries.push((Shape { op, args }, elem(&entry.value)?));
    }
    Algebra::from_entries(monad, elements, entries)
}

pub fn algebra_to_doc(alg: &Algebra) -> AlgebraDoc {
    let sig = alg.signature();
    AlgebraDoc {
        monad: alg.monad().id().to_string(),
        params: alg.monad().params(),
        sorts: sig.sorts.clone(),
        elements: alg
            .elements()
            .iter()
            .map(|e| ElementDoc { id: e.name.clone(), sort: sig.sorts[e.sort].clone() })
            .collect(),
        table: alg
            .entries()
            .into_iter()
            .map(|(shape, value)| EntryDoc {
                op: sig.ops[shape.op].name.clone(),
                args: shape
                    .args
                    .iter()
                    .map(|a| match a {
                        Arg::One(e) => ArgDoc::One(alg.name(*e).to_string()),
                        Arg::Set(v) => ArgDoc::Set(v.iter().map(|e| alg.name(*e).to_string()).collect()),
                    })
                    .collect(),
                value: alg.name(value).to_string(),
            })
            .collect(),
    }
}

fn load_algebra_ref(r: &AlgebraRef, base: Option<&Path>) -> Result<Algebra> {
    match r {
        AlgebraRef::Inline(doc) => algebra_from_doc(doc),
        AlgebraRef::Path(p) => read_algebra(&resolve(base, p)),
    }
}

fn morphism_from_doc(doc: &LanguageDoc, base: Option<&Path>) -> Result<Morphism> {
    let alg = load_algebra_ref(&doc.algebra, base)?;
    let sig = alg.signature();
    let mut letters = Vec::new();
    let mut units = Vec::new();
    for l in &doc.alphabet {
        let sort = sig.sort_id(&l.sort).ok_or_else(|| Error::UnknownSort(l.sort.clone()))?;
        letters.push(Letter { name: l.id.clone(), sort });
        let target = doc.units.get(&l.id).ok_or_else(|| Error::Schema(format!("no unit image for letter `{}`", l.id)))?;
        units.push(alg.lookup(target)?);
    }
    if let Some(extra) = doc.units.keys().find(|k| !doc.alphabet.iter().any(|l| &l.id == *k)) {
        return Err(Error::UnknownLetter(extra.clone()));
    }
    Morphism::new(Alphabet::new(letters)?, alg, units)
}

fn language_from_doc(doc: &LanguageDoc, base: Option<&Path>) -> Result<Language> {
    let h = morphism_from_doc(doc, base)?;
    let acc = doc.accepting.as_ref().ok_or_else(|| Error::Schema("language document needs `accepting`".into()))?;
    let accepting: BTreeSet<usize> = acc.iter().map(|n| h.target().lookup(n)).collect::<Result<_>>()?;
    Language::new(h, accepting)
}

pub fn morphism_to_doc(h: &Morphism) -> LanguageDoc {
    let sig = h.target().signature();
    LanguageDoc {
        algebra: AlgebraRef::Inline(Box::new(algebra_to_doc(h.target()))),
        alphabet: h
            .alphabet()
            .letters()
            .iter()
            .map(|l| ElementDoc { id: l.name.clone(), sort: sig.sorts[l.sort].clone() })
            .collect(),
        units: h
            .alphabet()
            .letters()
            .iter()
            .zip(h.units())
            .map(|(l, &u)| (l.name.clone(), h.target().name(u).to_string()))
            .collect(),
        accepting: None,
    }
}

pub fn language_to_doc(l: &Language) -> LanguageDoc {
    let mut doc = morphism_to_doc(l.morphism());
    doc.accepting = Some(l.accepting().iter().map(|&e| l.algebra().name(e).to_string()).collect());
    doc
}

pub fn parse_algebra(text: &str) -> Result<Algebra> {
    algebra_from_doc(&parse_json(text)?)
}

/// Parses a morphism document; `base` resolves a referenced algebra path.
pub fn parse_morphism(text: &str, base: Option<&Path>) -> Result<Morphism> {
    morphism_from_doc(&parse_json(text)?, base)
}

pub fn parse_language(text: &str, base: Option<&Path>) -> Result<Language> {
    language_from_doc(&parse_json(text)?, base)
}

pub fn read_algebra(path: &Path) -> Result<Algebra> {
    in_file(path, parse_algebra(&read_text(path)?))
}

pub fn read_morphism(path: &Path) -> Result<Morphism> {
    in_file(path, parse_morphism(&read_text(path)?, path.parent()))
}

pub fn read_language(path: &Path) -> Result<Language> {
    in_file(path, parse_language(&read_text(path)?, path.parent()))
}

/// Reads an expression file and loads its environment.
pub fn read_mso(path: &Path) -> Result<(MsoExpr, Environment)> {
    let doc: MsoDoc = in_file(path, parse_json(&read_text(path)?))?;
    let mut env = Environment::new();
    for (name, r) in &doc.env {
        let l = match r {
            LanguageRef::Path(p) => read_language(&resolve(path.parent(), p))?,
            LanguageRef::Inline(doc) => language_from_doc(doc, path.parent())?,
        };
        env.insert(name, l)?;
    }
    Ok((doc.expr, env))
}

/// Any document kind, told apart by its top-level keys.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Algebra(Algebra),
    Morphism(Morphism),
    Language(Language),
}

impl Document {
    pub fn algebra(&self) -> &Algebra {
        match self {
            Document::Algebra(a) => a,
            Document::Morphism(h) => h.target(),
            Document::Language(l) => l.algebra(),
        }
    }
}

pub fn parse_document(text: &str, base: Option<&Path>) -> Result<Document> {
    let value: Value = parse_json(text)?;
    if value.get("monad").is_some() {
        Ok(Document::Algebra(parse_algebra(text)?))
    } else if value.get("accepting").is_some() {
        Ok(Document::Language(parse_language(text, base)?))
    } else if value.get("algebra").is_some() {
        Ok(Document::Morphism(parse_morphism(text, base)?))
    } else {
        Err(Error::Schema("expected an algebra, morphism or language document".into()))
    }
}

pub fn read_document(path: &Path) -> Result<Document> {
    in_file(path, parse_document(&read_text(path)?, path.parent()))
}

fn pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialise");
    s.push('\n');
    s
}

pub fn write_algebra(alg: &Algebra) -> String {
    pretty(&algebra_to_doc(alg))
}

pub fn write_morphism(h: &Morphism) -> String {
    pretty(&morphism_to_doc(h))
}

pub fn write_language(l: &Language) -> String {
    pretty(&language_to_doc(l))
}

pub fn write_document(d: &Document) -> String {
    match d {
        Document::Algebra(a) => write_algebra(a),
        Document::Morphism(h) => write_morphism(h),
        Document::Language(l) => write_language(l),
    }
}
