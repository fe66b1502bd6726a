//! Expressions over named base languages closed under boolean operations,
//! inverse images of substitutions and relabelled images, compiled to
//! recognisers. Every intermediate recogniser is minimised.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::construct::{boolean, inverse_image, relabel_image, BoolOp};
use crate::closure::emptiness;
use crate::error::{Error, Result};
use crate::moore::moore_syntactic;
use crate::morphism::{Alphabet, Language, Letter};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum MsoExpr {
    Base { name: String },
    Not { arg: Box<MsoExpr> },
    And { left: Box<MsoExpr>, right: Box<MsoExpr> },
    Or { left: Box<MsoExpr>, right: Box<MsoExpr> },
    /// Preimage under the substitution sending each new letter to a ground
    /// term (in text syntax) over the alphabet of `arg`. New letters take
    /// the sorts of their terms.
    InvImage { arg: Box<MsoExpr>, sub: BTreeMap<String, String> },
    /// Image under a letter-to-letter relabelling; the new alphabet is the
    /// set of image letters.
    Image { arg: Box<MsoExpr>, map: BTreeMap<String, String> },
}

impl MsoExpr {
    pub fn base(name: &str) -> MsoExpr {
        MsoExpr::Base { name: name.into() }
    }

    pub fn not(e: MsoExpr) -> MsoExpr {
        MsoExpr::Not { arg: Box::new(e) }
    }

    pub fn and(l: MsoExpr, r: MsoExpr) -> MsoExpr {
        MsoExpr::And { left: Box::new(l), right: Box::new(r) }
    }

    pub fn or(l: MsoExpr, r: MsoExpr) -> MsoExpr {
        MsoExpr::Or { left: Box::new(l), right: Box::new(r) }
    }

    pub fn inv_image(e: MsoExpr, sub: &[(&str, &str)]) -> MsoExpr {
        MsoExpr::InvImage { arg: Box::new(e), sub: sub.iter().map(|(a, t)| (a.to_string(), t.to_string())).collect() }
    }

    pub fn image(e: MsoExpr, map: &[(&str, &str)]) -> MsoExpr {
        MsoExpr::Image { arg: Box::new(e), map: map.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect() }
    }

    pub fn depth(&self) -> usize {
        match self {
            MsoExpr::Base { .. } => 0,
            MsoExpr::Not { arg } | MsoExpr::InvImage { arg, .. } | MsoExpr::Image { arg, .. } => 1 + arg.depth(),
            MsoExpr::And { left, right } | MsoExpr::Or { left, right } => 1 + left.depth().max(right.depth()),
        }
    }
}

/// Named base languages, all over one instance.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    langs: BTreeMap<String, Language>,
}

impl Environment {
    pub fn new() -> Environment {
        Environment::default()
    }

    pub fn insert(&mut self, name: &str, l: Language) -> Result<()> {
        if let Some(other) = self.langs.values().next() {
            if other.algebra().monad() != l.algebra().monad() {
                return Err(Error::SignatureMismatch(other.algebra().monad().id().into(), l.algebra().monad().id().into()));
            }
        }
        self.langs.insert(name.into(), l);
        Ok(())
    }

    pub fn with(mut self, name: &str, l: Language) -> Result<Environment> {
        self.insert(name, l)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Result<&Language> {
        self.langs.get(name).ok_or_else(|| Error::UnresolvedName(name.into()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.langs.keys().map(String::as_str)
    }
}

pub fn compile(e: &MsoExpr, env: &Environment) -> Result<Language> {
    Compiler { env, cache: HashMap::new() }.compile(e)
}

struct Compiler<'a> {
    env: &'a Environment,
    cache: HashMap<MsoExpr, Language>,
}

impl Compiler<'_> {
    fn compile(&mut self, e: &MsoExpr) -> Result<Language> {
        if let Some(l) = self.cache.get(e) {
            return Ok(l.clone());
        }
        let raw = match e {
            MsoExpr::Base { name } => self.env.get(name)?.clone(),
            MsoExpr::Not { arg } => boolean(BoolOp::Not, &self.compile(arg)?, None)?,
            MsoExpr::And { left, right } => boolean(BoolOp::And, &self.compile(left)?, Some(&self.compile(right)?))?,
            MsoExpr::Or { left, right } => boolean(BoolOp::Or, &self.compile(left)?, Some(&self.compile(right)?))?,
            MsoExpr::InvImage { arg, sub } => {
                let inner = self.compile(arg)?;
                let sig = inner.algebra().signature();
                let mut letters = Vec::new();
                let mut terms = BTreeMap::new();
                for (letter, text) in sub {
                    let t = Term::parse(text, sig)?;
                    letters.push(Letter { name: letter.clone(), sort: t.sort(sig, inner.alphabet())? });
                    terms.insert(letter.clone(), t);
                }
                inverse_image(&inner, &Alphabet::new(letters)?, &terms)?
            }
            MsoExpr::Image { arg, map } => {
                let inner = self.compile(arg)?;
                let mut letters: Vec<Letter> = Vec::new();
                for letter in inner.alphabet().letters() {
                    let img = map.get(&letter.name).ok_or_else(|| Error::UnknownLetter(letter.name.clone()))?;
                    match letters.iter().find(|l| &l.name == img) {
                        Some(l) if l.sort != letter.sort => {
                            return Err(Error::SortMismatch(format!("letters of different sorts relabelled to `{img}`")))
                        }
                        Some(_) => {}
                        None => letters.push(Letter { name: img.clone(), sort: letter.sort }),
                    }
                }
                letters.sort_by(|a, b| a.name.cmp(&b.name));
                relabel_image(&inner, map, &Alphabet::new(letters)?)?
            }
        };
        let l = moore_syntactic(&raw)?.language;
        self.cache.insert(e.clone(), l.clone());
        Ok(l)
    }
}

/// Satisfiability with a witness term on success.
pub fn satisfiable(e: &MsoExpr, env: &Environment) -> Result<Option<Term>> {
    Ok(emptiness(&compile(e, env)?)?.witness().cloned())
}
