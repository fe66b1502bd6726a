//! Alphabets, recognising morphisms (given by unit images) and languages.

use std::collections::BTreeSet;

use crate::algebra::{Algebra, Arg, Elem};
use crate::error::{Error, Result};
use crate::signature::SortId;
use crate::term::{Term, TermArg};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub sort: SortId,
}

/// A finite sorted alphabet with unique letter names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: Vec<Letter>) -> Result<Alphabet> {
        for (i, l) in letters.iter().enumerate() {
            if letters[..i].iter().any(|m| m.name == l.name) {
                return Err(Error::DuplicateLetter(l.name.clone()));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Letters of sort 0.
    pub fn of(names: &[&str]) -> Alphabet {
        Alphabet::new(names.iter().map(|n| Letter { name: n.to_string(), sort: 0 }).collect())
            .expect("duplicate letter")
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.name == name)
    }

    pub fn sort_of(&self, name: &str) -> Result<SortId> {
        self.position(name).map(|i| self.letters[i].sort).ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }
}

/// A morphism from the free algebra over `alphabet` into a finite reduct,
/// represented by the images of the units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Alphabet,
    target: Algebra,
    units: Vec<Elem>,
}

impl Morphism {
    pub fn new(alphabet: Alphabet, target: Algebra, units: Vec<Elem>) -> Result<Morphism> {
        if units.len() != alphabet.len() {
            return Err(Error::Schema(format!(
                "{} unit images for {} letters",
                units.len(),
                alphabet.len()
            )));
        }
        for (l, &u) in alphabet.letters().iter().zip(&units) {
            if u >= target.len() {
                return Err(Error::UnknownElement(format!("#{u}")));
            }
            if target.sort_of(u) != l.sort {
                return Err(Error::SortMismatch(format!(
                    "letter `{}` of sort `{}` mapped to `{}` of sort `{}`",
                    l.name,
                    target.signature().sorts[l.sort],
                    target.name(u),
                    target.signature().sorts[target.sort_of(u)]
                )));
            }
        }
        Ok(Morphism { alphabet, target, units })
    }

    /// Builds a morphism from `(letter, element name)` pairs; letter sorts
    /// are taken from the element sorts.
    pub fn from_names(target: Algebra, units: &[(&str, &str)]) -> Result<Morphism> {
        let mut letters = Vec::new();
        let mut images = Vec::new();
        for (l, e) in units {
            let e = target.lookup(e)?;
            letters.push(Letter { name: l.to_string(), sort: target.sort_of(e) });
            images.push(e);
        }
        Morphism::new(Alphabet::new(letters)?, target, images)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn units(&self) -> &[Elem] {
        &self.units
    }

    pub fn unit(&self, letter: &str) -> Result<Elem> {
        self.alphabet.position(letter).map(|i| self.units[i]).ok_or_else(|| Error::UnknownLetter(letter.to_string()))
    }

    /// Homomorphic extension of the unit images to ground terms.
    pub fn evaluate(&self, t: &Term) -> Result<Elem> {
        match t {
            Term::Letter(l) => self.unit(l),
            Term::Apply(op, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(match a {
                        TermArg::One(t) => Arg::One(self.evaluate(t)?),
                        TermArg::Set(ts) => Arg::set(ts.iter().map(|t| self.evaluate(t)).collect::<Result<_>>()?),
                    });
                }
                self.target.try_apply(*op, &vals)
            }
        }
    }

    pub(crate) fn with_target(&self, target: Algebra, map: impl Fn(Elem) -> Elem) -> Result<Morphism> {
        Morphism::new(self.alphabet.clone(), target, self.units.iter().map(|&u| map(u)).collect())
    }
}

/// A recognised language: the preimage of `accepting` under the morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    morphism: Morphism,
    accepting: BTreeSet<Elem>,
}

impl Language {
    pub fn new(morphism: Morphism, accepting: BTreeSet<Elem>) -> Result<Language> {
        if let Some(&e) = accepting.iter().find(|&&e| e >= morphism.target.len()) {
            return Err(Error::UnknownElement(format!("#{e}")));
        }
        Ok(Language { morphism, accepting })
    }

    /// Builds a language from element names.
    pub fn from_names(morphism: Morphism, accepting: &[&str]) -> Result<Language> {
        let acc = accepting.iter().map(|n| morphism.target.lookup(n)).collect::<Result<_>>()?;
        Language::new(morphism, acc)
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn algebra(&self) -> &Algebra {
        &self.morphism.target
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.morphism.alphabet
    }

    pub fn accepting(&self) -> &BTreeSet<Elem> {
        &self.accepting
    }

    pub fn accepts(&self, e: Elem) -> bool {
        self.accepting.contains(&e)
    }

    pub fn contains(&self, t: &Term) -> Result<bool> {
        Ok(self.accepts(self.morphism.evaluate(t)?))
    }
}

/// Morphism into the product algebra pairing two morphisms letterwise.
/// `product` must come from [`crate::construct::product`] on the two targets.
pub fn pair_morphism(h: &Morphism, g: &Morphism, product: &crate::construct::Product) -> Result<Morphism> {
    if h.alphabet != g.alphabet {
        return Err(Error::AlphabetMismatch("pair_morphism needs identical alphabets".into()));
    }
    let units = h.units.iter().zip(&g.units).map(|(&a, &b)| product.pair(a, b)).collect();
    Morphism::new(h.alphabet.clone(), product.algebra.clone(), units)
}
