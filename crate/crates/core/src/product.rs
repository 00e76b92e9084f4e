use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::text::Cursor;
use crate::word::{FreeGroup, Word};

/// An element of `F_m x ... x F_m` (n factors), one reduced word per factor.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductElement {
    factors: Vec<Word>,
}

impl ProductElement {
    pub fn identity(n: usize) -> Self {
        ProductElement {
            factors: vec![Word::empty(); n],
        }
    }

    pub fn new(factors: Vec<Word>) -> Self {
        ProductElement { factors }
    }

    /// `w` placed in factor `i` (0-based), identity elsewhere.
    pub fn embed(n: usize, i: usize, w: Word) -> Self {
        let mut out = ProductElement::identity(n);
        out.factors[i] = w;
        out
    }

    pub fn factors(&self) -> &[Word] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &Word {
        &self.factors[i]
    }

    pub fn into_factors(self) -> Vec<Word> {
        self.factors
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(Word::is_empty)
    }

    pub fn mul(&self, other: &ProductElement) -> ProductElement {
        debug_assert_eq!(self.n(), other.n());
        ProductElement {
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn mul_assign(&mut self, other: &ProductElement) {
        debug_assert_eq!(self.n(), other.n());
        for (a, b) in self.factors.iter_mut().zip(&other.factors) {
            a.mul_assign(b);
        }
    }

    pub fn inv(&self) -> ProductElement {
        ProductElement {
            factors: self.factors.iter().map(Word::inv).collect(),
        }
    }

    /// `y self y^-1`.
    pub fn conj(&self, y: &ProductElement) -> ProductElement {
        y.mul(self).mul(&y.inv())
    }

    pub fn commutator(&self, other: &ProductElement) -> ProductElement {
        ProductElement {
            factors: self
                .factors
                .iter()
                .zip(&other.factors)
                .map(|(a, b)| a.commutator(b))
                .collect(),
        }
    }

    /// Sum of reduced factor lengths: the word length for the generating
    /// set made of every factor's basis.
    pub fn ambient_length(&self) -> usize {
        self.factors.iter().map(Word::len).sum()
    }

    /// Checks factor count and letter ranks.
    pub fn check_shape(&self, n: usize, m: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: self.n(),
            });
        }
        let f = FreeGroup::new(m);
        self.factors.iter().try_for_each(|w| f.check(w))
    }

    pub fn format(&self, m: usize) -> String {
        let f = FreeGroup::new(m);
        self.factors.iter().map(|w| f.format(w)).collect::<Vec<_>>().join(" ; ")
    }

    /// Parses `w1 ; w2 ; ...` or `{"factors": ["w1", ...]}`.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            let repr: ProductElementJson = serde_json::from_str(text)
                .map_err(|e| Error::InvalidArgument(format!("product element JSON: {e}")))?;
            return repr.decode(m);
        }
        let f = FreeGroup::new(m);
        let mut cur = Cursor::new(text);
        let mut factors = vec![cur.word(&f)?];
        while cur.eat(';') {
            factors.push(cur.word(&f)?);
        }
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.error(format!("unexpected `{}`", cur.peek().unwrap())).into());
        }
        Ok(ProductElement { factors })
    }

    pub fn to_json(&self, m: usize) -> ProductElementJson {
        let f = FreeGroup::new(m);
        ProductElementJson {
            factors: self.factors.iter().map(|w| f.format(w)).collect(),
        }
    }
}

impl fmt::Debug for ProductElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ProductElement").field(&self.factors).finish()
    }
}

/// Wire form: `{"factors": ["word", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductElementJson {
    pub factors: Vec<String>,
}

impl ProductElementJson {
    pub fn decode(&self, m: usize) -> Result<ProductElement> {
        let f = FreeGroup::new(m);
        let factors = self
            .factors
            .iter()
            .map(|s| crate::text::parse_word(s, &f))
            .collect::<Result<Vec<_>, ParseError>>()?;
        Ok(ProductElement { factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let g = ProductElement::parse("x ; x^-1", 2).unwrap();
        assert_eq!(g, ProductElement::new(vec![Word::gen(1), Word::from_signed(&[-1])]));
        let j = ProductElement::parse(r#"{"factors": ["x", "x^-1"]}"#, 2).unwrap();
        assert_eq!(g, j);
        assert_eq!(ProductElement::parse(&g.format(2), 2).unwrap(), g);
        assert_eq!(serde_json::to_string(&g.to_json(2)).unwrap(), r#"{"factors":["x","x^-1"]}"#);
        assert!(ProductElement::parse("x ; z", 2).is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(ProductElement::identity(3).ambient_length(), 0);
        assert_eq!(ProductElement::parse("x ; y^-2", 2).unwrap().ambient_length(), 3);
    }
}
