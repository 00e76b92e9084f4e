//! Reduced words in finitely generated free groups.
//!
//! A [`Word`] is always freely reduced, so equality of words is equality of
//! group elements. Words do not carry their rank; the ambient [`FreeGroup`]
//! does, and its checked operations reject letters outside that rank.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse. Stored as a nonzero signed index: `+j` is
/// `e_j`, `-j` is `e_j^-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Self {
        assert!(generator > 0, "generator indices start at 1");
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn gen(generator: u32) -> Self {
        Letter::new(generator, false)
    }

    pub fn from_signed(value: i32) -> Self {
        assert!(value != 0, "letter index must be nonzero");
        Letter(value)
    }

    pub fn generator(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn sign(self) -> i64 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    pub fn signed(self) -> i32 {
        self.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "e{}^-1", self.generator())
        } else {
            write!(f, "e{}", self.generator())
        }
    }
}

/// A freely reduced word. Serializes as its list of signed indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Letter>", into = "Vec<Letter>")]
pub struct Word {
    letters: Vec<Letter>,
}

impl From<Vec<Letter>> for Word {
    fn from(raw: Vec<Letter>) -> Self {
        Word::reduce(raw)
    }
}

impl From<Word> for Vec<Letter> {
    fn from(w: Word) -> Self {
        w.letters
    }
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            push_reduced(&mut letters, l);
        }
        Word { letters }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn gen(generator: u32) -> Self {
        Word::letter(Letter::gen(generator))
    }

    /// `generator^exponent`.
    pub fn gen_pow(generator: u32, exponent: i64) -> Self {
        let l = Letter::new(generator, exponent < 0);
        Word {
            letters: vec![l; exponent.unsigned_abs() as usize],
        }
    }

    pub fn from_signed(raw: &[i32]) -> Self {
        Word::reduce(raw.iter().map(|&v| Letter::from_signed(v)))
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

    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.reserve(other.len());
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word { letters }
    }

    /// Multiplies in place on the right.
    pub fn mul_assign(&mut self, other: &Word) {
        for &l in &other.letters {
            push_reduced(&mut self.letters, l);
        }
    }

    pub fn push(&mut self, l: Letter) {
        push_reduced(&mut self.letters, l);
    }

    pub fn inv(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out.mul_assign(&base);
        }
        out
    }

    /// `x y x^-1 y^-1`.
    pub fn commutator(&self, y: &Word) -> Word {
        let mut out = self.mul(y);
        out.mul_assign(&self.inv());
        out.mul_assign(&y.inv());
        out
    }

    /// `y x y^-1`: conjugator on the left.
    pub fn conj(&self, y: &Word) -> Word {
        let mut out = y.mul(self);
        out.mul_assign(&y.inv());
        out
    }

    /// Homomorphic image under `generator -> images[generator]`.
    pub fn substitute<S: Substitution + ?Sized>(&self, images: &S) -> Result<Word> {
        let mut out = Word::empty();
        for &l in &self.letters {
            let img = images.image(l.generator()).ok_or(Error::MissingImage(l.generator()))?;
            if l.is_inverse() {
                out.mul_assign(&img.inv());
            } else {
                out.mul_assign(img);
            }
        }
        Ok(out)
    }

    pub fn exponent_sum(&self, generator: u32) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator() == generator)
            .map(|l| l.sign())
            .sum()
    }

    /// Number of letters equal to `generator` or its inverse.
    pub fn occurrences(&self, generator: u32) -> usize {
        self.letters.iter().filter(|l| l.generator() == generator).count()
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word {
            letters: self.letters[..len].to_vec(),
        }
    }

    pub fn suffix(&self, start: usize) -> Word {
        Word {
            letters: self.letters[start..].to_vec(),
        }
    }

    /// Cyclically reduced core: strips matching inverse letters from both ends.
    pub fn cyclic_core(&self) -> Word {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo] == self.letters[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Word {
            letters: self.letters[lo..hi].to_vec(),
        }
    }

    /// Rotation starting at position `t`, reduced.
    pub fn rotate(&self, t: usize) -> Word {
        Word::reduce(
            self.letters[t..]
                .iter()
                .chain(self.letters[..t].iter())
                .copied(),
        )
    }

    /// True if this word represents `u^k` for some `k >= 2`, i.e. its
    /// cyclically reduced core is periodic.
    pub fn is_proper_power(&self) -> bool {
        let core = self.cyclic_core();
        let l = &core.letters;
        let n = l.len();
        (1..n).any(|d| n % d == 0 && (d..n).all(|i| l[i] == l[i - d]))
    }

    /// Relabels letters through `f`, then reduces.
    pub fn map_letters<F: FnMut(Letter) -> Letter>(&self, f: F) -> Word {
        Word::reduce(self.letters.iter().copied().map(f))
    }
}

fn push_reduced(letters: &mut Vec<Letter>, l: Letter) {
    if letters.last() == Some(&l.inverse()) {
        letters.pop();
    } else {
        letters.push(l);
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_word(self, &IndexNames))
    }
}

/// Something that can serve as generator images for [`Word::substitute`].
pub trait Substitution {
    fn image(&self, generator: u32) -> Option<&Word>;
}

/// Index 0 holds the image of generator 1.
impl Substitution for [Word] {
    fn image(&self, generator: u32) -> Option<&Word> {
        self.get(generator.checked_sub(1)? as usize)
    }
}

impl Substitution for Vec<Word> {
    fn image(&self, generator: u32) -> Option<&Word> {
        self.as_slice().image(generator)
    }
}

impl Substitution for BTreeMap<u32, Word> {
    fn image(&self, generator: u32) -> Option<&Word> {
        self.get(&generator)
    }
}

/// Names for generator indices, used by the text grammar.
pub trait Alphabet {
    fn rank(&self) -> usize;
    fn index_of(&self, name: &str) -> Option<u32>;
    fn name_of(&self, generator: u32) -> Cow<'_, str>;
}

/// Fallback naming `e<j>` with no rank restriction; used for debug output.
struct IndexNames;

impl Alphabet for IndexNames {
    fn rank(&self) -> usize {
        usize::MAX
    }
    fn index_of(&self, name: &str) -> Option<u32> {
        name.strip_prefix('e')?.parse().ok().filter(|&j| j > 0)
    }
    fn name_of(&self, generator: u32) -> Cow<'_, str> {
        Cow::Owned(format!("e{generator}"))
    }
}

/// The free group `F_m` with basis `e1..em`. In rank 2 the basis also
/// answers to `x` and `y`, and prints that way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn check_letter(&self, l: Letter) -> Result<()> {
        if l.generator() as usize > self.rank {
            Err(Error::GeneratorOutOfRange {
                index: l.generator(),
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        w.letters().iter().try_for_each(|&l| self.check_letter(l))
    }

    /// Reduces `raw` after checking every letter against the rank.
    pub fn reduce<I: IntoIterator<Item = Letter>>(&self, raw: I) -> Result<Word> {
        let mut letters = Vec::new();
        for l in raw {
            self.check_letter(l)?;
            push_reduced(&mut letters, l);
        }
        Ok(Word { letters })
    }

    pub fn generator(&self, j: u32) -> Result<Word> {
        self.reduce([Letter::gen(j)])
    }

    pub fn mul(&self, u: &Word, v: &Word) -> Result<Word> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.mul(v))
    }

    pub fn inv(&self, u: &Word) -> Result<Word> {
        self.check(u)?;
        Ok(u.inv())
    }

    pub fn commutator(&self, x: &Word, y: &Word) -> Result<Word> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.commutator(y))
    }

    pub fn conj(&self, x: &Word, y: &Word) -> Result<Word> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.conj(y))
    }

    pub fn exponent_sum(&self, w: &Word, j: u32) -> Result<i64> {
        if j == 0 || j as usize > self.rank {
            return Err(Error::GeneratorOutOfRange { index: j, rank: self.rank });
        }
        Ok(w.exponent_sum(j))
    }

    /// The standard basis as words.
    pub fn basis(&self) -> Vec<Word> {
        (1..=self.rank as u32).map(Word::gen).collect()
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        Ok(crate::text::parse_word(text, self)?)
    }

    pub fn format(&self, w: &Word) -> String {
        format_word(w, self)
    }
}

impl Alphabet for FreeGroup {
    fn rank(&self) -> usize {
        self.rank
    }

    fn index_of(&self, name: &str) -> Option<u32> {
        if self.rank == 2 {
            match name {
                "x" => return Some(1),
                "y" => return Some(2),
                _ => {}
            }
        }
        let j: u32 = name.strip_prefix('e')?.parse().ok()?;
        (j >= 1 && j as usize <= self.rank).then_some(j)
    }

    fn name_of(&self, generator: u32) -> Cow<'_, str> {
        match (self.rank, generator) {
            (2, 1) => Cow::Borrowed("x"),
            (2, 2) => Cow::Borrowed("y"),
            _ => Cow::Owned(format!("e{generator}")),
        }
    }
}

/// An explicit list of symbol names; symbol `i` (0-based) is generator `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbols {
    names: Vec<String>,
}

impl Symbols {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !crate::text::is_identifier(n) {
                return Err(Error::InvalidArgument(format!("`{n}` is not a valid symbol name")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("duplicate symbol `{n}`")));
            }
        }
        Ok(Symbols { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        Ok(crate::text::parse_word(text, self)?)
    }

    pub fn format(&self, w: &Word) -> String {
        format_word(w, self)
    }
}

impl Alphabet for Symbols {
    fn rank(&self) -> usize {
        self.names.len()
    }

    fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32 + 1)
    }

    fn name_of(&self, generator: u32) -> Cow<'_, str> {
        Cow::Borrowed(&self.names[generator as usize - 1])
    }
}

/// Canonical text: space-separated letters, runs folded into `name^k`,
/// the empty word printed as `1`.
pub fn format_word<A: Alphabet + ?Sized>(w: &Word, alphabet: &A) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == l {
            run += 1;
        }
        let name = alphabet.name_of(l.generator());
        let exp = run as i64 * l.sign();
        parts.push(if exp == 1 {
            name.into_owned()
        } else {
            format!("{name}^{exp}")
        });
        i += run;
    }
    parts.join(" ")
}
