use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::word::Word;
use super::FpError;

/// Generators and relators of a finitely presented group. Relators are kept
/// freely reduced; trivial relators are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new<S: Into<String>>(
        generators: impl IntoIterator<Item = S>,
        relators: impl IntoIterator<Item = Word>,
    ) -> Result<Self, FpError> {
        let generators: Vec<String> = generators.into_iter().map(Into::into).collect();
        for (i, name) in generators.iter().enumerate() {
            if !is_identifier(name) {
                return Err(FpError::BadGeneratorName(name.clone()));
            }
            if generators[..i].contains(name) {
                return Err(FpError::DuplicateGenerator(name.clone()));
            }
        }
        let relators: Vec<Word> = relators.into_iter().filter(|w| !w.is_identity()).collect();
        if generators.is_empty() && !relators.is_empty() {
            return Err(FpError::NoGenerators);
        }
        for w in &relators {
            check_word(w, generators.len())?;
        }
        Ok(Self { generators, relators })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Same generators, one more relator.
    pub fn with_relator(&self, w: Word) -> Result<Self, FpError> {
        check_word(&w, self.ngens())?;
        let mut out = self.clone();
        if !w.is_identity() {
            out.relators.push(w);
        }
        Ok(out)
    }

    pub fn check_word(&self, w: &Word) -> Result<(), FpError> {
        check_word(w, self.ngens())
    }

    /// Parses a word over this presentation's generators, e.g. `a^2*b^-1`.
    pub fn parse_word(&self, s: &str) -> Result<Word, FpError> {
        parse_word(s, &self.generators)
    }

    pub fn display_word<'a>(&'a self, w: &'a Word) -> impl fmt::Display + 'a {
        w.display_with(&self.generators)
    }
}

fn check_word(w: &Word, ngens: usize) -> Result<(), FpError> {
    match w.max_generator() {
        Some(g) if g >= ngens => Err(FpError::GeneratorOutOfRange { index: g, ngens }),
        _ => Ok(()),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} |", self.generators.join(", "))?;
        for (i, w) in self.relators.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{}", w.display_with(&self.generators))?;
        }
        f.write_str(" >")
    }
}

/// Parses `< a, b | a^3 = b^2, a*b^-1 >`. An equation `u = v` becomes the
/// relator `u*v^-1`.
impl FromStr for Presentation {
    type Err = FpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix('<')
            .and_then(|t| t.strip_suffix('>'))
            .ok_or_else(|| FpError::Parse(format!("expected `< gens | rels >`, got {s:?}")))?;
        let (gens, rels) = body
            .split_once('|')
            .ok_or_else(|| FpError::Parse(format!("missing `|` in {s:?}")))?;
        let generators: Vec<String> = split_list(gens).map(str::to_string).collect();
        for g in &generators {
            if !is_identifier(g) {
                return Err(FpError::BadGeneratorName(g.clone()));
            }
        }
        let mut relators = Vec::new();
        for item in split_list(rels) {
            let w = match item.split_once('=') {
                Some((lhs, rhs)) => {
                    let l = parse_word(lhs, &generators)?;
                    let r = parse_word(rhs, &generators)?;
                    l.mul(&r.inverse())
                }
                None => parse_word(item, &generators)?,
            };
            relators.push(w);
        }
        Presentation::new(generators, relators)
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// Parses a product of powers of named generators; `1` is the identity.
pub fn parse_word(s: &str, generators: &[String]) -> Result<Word, FpError> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Word::identity());
    }
    let mut syllables = Vec::new();
    for factor in s.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .trim()
                    .parse()
                    .map_err(|_| FpError::Parse(format!("bad exponent in {factor:?}")))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        if name == "1" {
            continue;
        }
        let g = generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| FpError::UnknownGenerator(name.to_string()))?;
        syllables.push((g, exp));
    }
    Ok(Word::from_syllables(syllables))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_equation_relator() {
        let p: Presentation = "< a, b | a^3 = b^2 >".parse().unwrap();
        assert_eq!(p.ngens(), 2);
        assert_eq!(p.relators()[0].syllables(), &[(0, 3), (1, -2)]);
        assert_eq!(p.to_string(), "< a, b | a^3*b^-2 >");
    }

    #[test]
    fn emitted_text_is_a_fixed_point() {
        for src in [
            "< a, b | a^3 = b^2, a*b*a^-1*b^-1 >",
            "< x | x^5 >",
            "< a, b | >",
            "< | >",
            "< c1, c2, h | c1^3*h^4, c2^3*h^-1, c1*c2*h^-1 >",
        ] {
            let p: Presentation = src.parse().unwrap();
            let text = p.to_string();
            let q: Presentation = text.parse().unwrap();
            assert_eq!(p, q);
            assert_eq!(q.to_string(), text);
        }
    }

    #[test]
    fn trivial_relators_are_dropped() {
        let p: Presentation = "< a | a*a^-1, a^2 = a^2 >".parse().unwrap();
        assert!(p.relators().is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            "< a | b >".parse::<Presentation>(),
            Err(FpError::UnknownGenerator(_))
        ));
        assert!("a, b | a".parse::<Presentation>().is_err());
        assert!("< a, a | a >".parse::<Presentation>().is_err());
        assert!("< a | a^x >".parse::<Presentation>().is_err());
        assert!(matches!(
            Presentation::new(Vec::<String>::new(), [Word::generator(0)]),
            Err(FpError::NoGenerators)
        ));
        assert!(matches!(
            Presentation::new(["a"], [Word::generator(1)]),
            Err(FpError::GeneratorOutOfRange { index: 1, ngens: 1 })
        ));
    }
}
