//! Lower-bound certificates for area in amalgams `G_1 *_H G_2`.
//!
//! For `h ∈ H` commuting with `α ∈ G_1` and `β ∈ G_2` (both outside `H`),
//! and `w` a word representing `h`, the word `[w, (uv)^n]` has area at
//! least `2n · d_B(1, h)`. This module builds the words, checks the
//! hypotheses, and assembles the chain of verified facts that turns a
//! distance bound into an area bound:
//!
//! * in `F_2 x F_2`, `K^2_2(2)` is generated by
//!   `B = {x1 x2^-1, y1 y2^-1, [x1, y1]}` and `h_n = ([x^n, y^n], 1)`;
//! * a `B`-word for `h_n` with `k` letters `b3^±1` yields, by deleting
//!   commutators, a null-expression for `[x^n, y^n]` of area at most `k`
//!   over `<x, y | [x, y]>`, where that word has area exactly `n^2`;
//! * so `d_B(1, h_n) >= n^2`, and the test word has area `>= 2n · n^2`.
//!
//! A small amalgam with a faithful evaluation into `F(a,b) x Z` lets the
//! inequality itself be tested by exhaustive area search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kernel::{random_word, GenWord, GeneratingSet};
use crate::metric::{h_family, Metric};
use crate::presentation::{
    area_search, verify_null_expression, AreaResult, Evaluation, Exactness, NullExpression, NullTerm, Presentation,
    SearchBudget, Target,
};
use crate::product::ProductElement;
use crate::word::{Symbols, Word};

/// The alphabet `A_1 ∪ A_2 ∪ B` of an amalgam presentation. Generator
/// indices follow that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioAlphabet {
    symbols: Symbols,
    a1: usize,
    a2: usize,
    b: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    A1,
    A2,
    B,
}

impl ScenarioAlphabet {
    pub fn new(a1: &[&str], a2: &[&str], b: &[&str]) -> Result<Self> {
        let parts = [("A1", a1), ("A2", a2), ("B", b)];
        for (i, (pi, xs)) in parts.iter().enumerate() {
            for (pj, ys) in &parts[i + 1..] {
                if let Some(s) = xs.iter().find(|s| ys.contains(s)) {
                    return Err(Error::InvalidArgument(format!("symbol `{s}` appears in both {pi} and {pj}")));
                }
            }
        }
        let names: Vec<&str> = a1.iter().chain(a2).chain(b).copied().collect();
        Ok(ScenarioAlphabet {
            symbols: Symbols::new(names)?,
            a1: a1.len(),
            a2: a2.len(),
            b: b.len(),
        })
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn part(&self, generator: u32) -> Part {
        let g = generator as usize;
        if g <= self.a1 {
            Part::A1
        } else if g <= self.a1 + self.a2 {
            Part::A2
        } else {
            debug_assert!(g <= self.a1 + self.a2 + self.b);
            Part::B
        }
    }

    pub fn is_over(&self, w: &Word, part: Part) -> bool {
        w.letters().iter().all(|l| self.part(l.generator()) == part)
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        self.symbols.parse(text)
    }

    pub fn format(&self, w: &Word) -> String {
        self.symbols.format(w)
    }

    /// `w (uv)^n w^-1 (uv)^-n` for `w, u` over `A_1` and `v` over `A_2`.
    pub fn test_word(&self, w: &Word, u: &Word, v: &Word, n: usize) -> Result<Word> {
        if n < 1 {
            return Err(Error::InvalidArgument("test word needs n >= 1".into()));
        }
        if w.max_generator() as usize > self.symbols.len() {
            return Err(Error::GeneratorOutOfRange {
                index: w.max_generator(),
                rank: self.symbols.len(),
            });
        }
        if !self.is_over(w, Part::A1) || !self.is_over(u, Part::A1) {
            return Err(Error::InvalidArgument("w and u must be words over A1".into()));
        }
        if !self.is_over(v, Part::A2) {
            return Err(Error::InvalidArgument("v must be a word over A2".into()));
        }
        Ok(w.commutator(&u.mul(v).pow(n as i64)))
    }
}

/// `K^2_2(2) ⊂ F_2 x F_2` with generators named `b1, b2, b3`.
pub fn b_generators() -> GeneratingSet {
    let pe = |t: &str| ProductElement::parse(t, 2).expect("literal");
    GeneratingSet::new(
        Symbols::new(["b1", "b2", "b3"]).expect("literal"),
        vec![pe("x ; x^-1"), pe("y ; y^-1"), pe("[x,y] ; 1")],
        2,
    )
    .expect("literal")
}

/// `<x, y | [x, y]>` with its evaluation into `Z^2`.
pub fn torus_presentation() -> Presentation {
    Presentation::parse("<x, y | [x, y]>")
        .and_then(Presentation::with_inferred_evaluation)
        .expect("literal")
}

/// The words of the `F_2 x F_2` scenario for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundWords {
    pub n: usize,
    pub alphabet: ScenarioAlphabet,
    /// `[(x1X2)^n, y1^n]` over `A_1`.
    pub w_n: Word,
    /// `[w_n, (y2 x2)^n]`.
    pub test_word: Word,
}

const A1: [&str; 3] = ["x1X2", "y1", "y2"];
const A2: [&str; 3] = ["x1", "x2", "y1Y2"];
const B: [&str; 3] = ["b1", "b2", "b3"];

/// Realizations of `A_1 ∪ A_2 ∪ B` in `F_2 x F_2`, in alphabet order.
fn realizations_2() -> Vec<ProductElement> {
    ["x ; x^-1", "y ; 1", "1 ; y", "x ; 1", "1 ; x", "y ; y^-1", "x ; x^-1", "y ; y^-1", "[x,y] ; 1"]
        .iter()
        .map(|t| ProductElement::parse(t, 2).expect("literal"))
        .collect()
}

/// Realizations of `A_1 ∪ A_2` in `F_2^3`, where `y2` and `x2` become the
/// hat elements of `K^3_2(2)`. The relation `[w_n, (y2 x2)^n] = 1` holds
/// there.
fn realizations_3() -> Vec<ProductElement> {
    ["x ; x^-1 ; 1", "y ; 1 ; y^-1", "1 ; y ; y^-1", "x ; 1 ; x^-1", "1 ; x ; x^-1", "y ; y^-1 ; 1"]
        .iter()
        .map(|t| ProductElement::parse(t, 2).expect("literal"))
        .collect()
}

fn eval_with(realizations: &[ProductElement], n_factors: usize, w: &Word) -> ProductElement {
    let mut out = ProductElement::identity(n_factors);
    for l in w.letters() {
        let e = &realizations[l.generator() as usize - 1];
        out.mul_assign(&if l.is_inverse() { e.inv() } else { e.clone() });
    }
    out
}

impl LowerBoundWords {
    /// Evaluation in `F_2 x F_2`.
    pub fn eval(&self, w: &Word) -> ProductElement {
        eval_with(&realizations_2(), 2, w)
    }

    /// Letter count over `A_1 ∪ A_2`.
    pub fn symbol_length(&self) -> usize {
        self.test_word.len()
    }

    /// Letters weighted by the ambient length of their realizations.
    pub fn ambient_length(&self) -> usize {
        let r = realizations_2();
        self.test_word
            .letters()
            .iter()
            .map(|l| r[l.generator() as usize - 1].ambient_length())
            .sum()
    }

    /// `eval(w_n) = h_n`, and `h_n` commutes with `eval(y2)` and `eval(x2)`.
    pub fn check_hypotheses(&self) -> Result<()> {
        let h = h_family(self.n)?;
        if self.eval(&self.w_n) != h {
            return Err(Error::Verification("w_n does not evaluate to h_n".into()));
        }
        for name in ["y2", "x2"] {
            let g = self.eval(&self.alphabet.parse(name)?);
            if !h.commutator(&g).is_identity() {
                return Err(Error::Verification(format!("h_n does not commute with {name}")));
            }
        }
        Ok(())
    }

    /// The test word is trivial in `K^3_2(2)`.
    pub fn check_relation(&self) -> bool {
        eval_with(&realizations_3(), 3, &self.test_word).is_identity()
    }
}

pub fn lower_bound_words(n: usize) -> Result<LowerBoundWords> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let alphabet = ScenarioAlphabet::new(&A1, &A2, &B)?;
    let k = n as i64;
    let w_n = alphabet.parse("x1X2")?.pow(k).commutator(&alphabet.parse("y1")?.pow(k));
    let test_word = alphabet.test_word(&w_n, &alphabet.parse("y2")?, &alphabet.parse("x2")?, n)?;
    Ok(LowerBoundWords {
        n,
        alphabet,
        w_n,
        test_word,
    })
}

/// `w(b1, b2, b3) = W_1(x, y, k) · W_2(x, y)` with `k` standing for `[x, y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionSplit {
    /// Over `x, y, k`: `b1 -> x`, `b2 -> y`, `b3 -> k`.
    pub w1: Word,
    /// Over `x, y`: `b1 -> x^-1`, `b2 -> y^-1`, `b3 -> 1`.
    pub w2: Word,
}

pub fn split_symbols() -> Symbols {
    Symbols::new(["x", "y", "k"]).expect("literal")
}

impl SubstitutionSplit {
    /// `W_1` with `k` expanded to `[x, y]`.
    pub fn w1_expanded(&self) -> Word {
        self.w1
            .substitute(&vec![Word::gen(1), Word::gen(2), Word::gen(1).commutator(&Word::gen(2))])
            .expect("images cover x, y, k")
    }
}

pub fn substitution_split(w: &GenWord) -> Result<SubstitutionSplit> {
    if w.max_generator() > 3 {
        return Err(Error::GeneratorOutOfRange {
            index: w.max_generator(),
            rank: 3,
        });
    }
    Ok(SubstitutionSplit {
        w1: w.clone(),
        w2: w.substitute(&vec![Word::gen(1).inv(), Word::gen(2).inv(), Word::empty()])?,
    })
}

/// `eval_B(w) = (W_1 with k = [x,y], W_2)` componentwise.
pub fn substitution_identity_holds(w: &GenWord) -> Result<bool> {
    let split = substitution_split(w)?;
    let lhs = b_generators().eval(w)?;
    Ok(lhs == ProductElement::new(vec![split.w1_expanded(), split.w2]))
}

/// Deletes the `b3` letters of a `B`-word for `h_n`: each one becomes a
/// conjugate of `[x, y]^±1` by the `k`-free prefix before it. The result is
/// a null-expression for `[x^n, y^n]` over [`torus_presentation`].
pub fn derive_null_expression(w: &GenWord, n: usize) -> Result<NullExpression> {
    let split = substitution_split(w)?;
    if b_generators().eval(w)? != h_family(n)? {
        return Err(Error::Verification("B-word does not evaluate to h_n".into()));
    }
    let mut terms = Vec::new();
    let mut prefix = Word::empty();
    for &l in split.w1.letters() {
        if l.generator() == 3 {
            terms.push(NullTerm {
                conjugator: prefix.clone(),
                relator: 0,
                sign: l.sign() as i8,
            });
        } else {
            prefix.push(l);
        }
    }
    let expr = NullExpression { terms };
    let p = torus_presentation();
    let target = Word::gen_pow(1, n as i64).commutator(&Word::gen_pow(2, n as i64));
    if !verify_null_expression(&p, &target, &expr)? {
        return Err(Error::Verification("derived expression does not reproduce [x^n, y^n]".into()));
    }
    Ok(expr)
}

/// A presentation `<A_1, A_2, B | R_1, R_2, E>` with a faithful
/// evaluation, words `w, u` over `A_1` and `v` over `A_2`, and `h` as a
/// word over `B`.
#[derive(Clone, Debug)]
pub struct AmalgamScenario {
    pub alphabet: ScenarioAlphabet,
    pub presentation: Presentation,
    pub w: Word,
    pub u: Word,
    pub v: Word,
    pub h: Word,
}

impl AmalgamScenario {
    /// `<a, c | [a,c]> *_{s} <b, d | [b,d]>` with `s = a^-1 c = b^-1 d`,
    /// evaluated into `F(a,b) x Z` by `a -> a`, `c -> a t`, `b -> b`,
    /// `d -> b t`, `s -> t`. `h = s^k`, `w = (a^-1 c)^k`, `u = a`, `v = b`.
    pub fn toy(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let alphabet = ScenarioAlphabet::new(&["a", "c"], &["b", "d"], &["s"])?;
        let presentation = Presentation::new(
            alphabet.symbols().clone(),
            ["[a,c]", "[b,d]", "s c^-1 a", "s d^-1 b"]
                .iter()
                .map(|r| alphabet.parse(r))
                .collect::<Result<_>>()?,
        )?;
        let t = |free: Word, z: i64| Target {
            free: vec![free],
            abelian: vec![z],
        };
        let ev = Evaluation::new(
            vec![2],
            1,
            vec![
                t(Word::gen(1), 0),
                t(Word::gen(1), 1),
                t(Word::gen(2), 0),
                t(Word::gen(2), 1),
                t(Word::empty(), 1),
            ],
        )?;
        // collapsing c = a s and d = b s leaves the product complex of F(a,b) x Z
        let presentation = presentation.with_evaluation(ev)?.declare_aspherical();
        let k = k as i64;
        Ok(AmalgamScenario {
            w: alphabet.parse("a^-1 c")?.pow(k),
            u: alphabet.parse("a")?,
            v: alphabet.parse("b")?,
            h: alphabet.parse("s")?.pow(k),
            alphabet,
            presentation,
        })
    }

    fn eval(&self, w: &Word) -> Target {
        self.presentation.evaluation().expect("faithful evaluation").eval(w)
    }

    /// Images of the `B` letters, which generate `H`.
    fn h_generators(&self) -> Vec<Target> {
        (1..=self.alphabet.symbols().len() as u32)
            .filter(|&g| self.alphabet.part(g) == Part::B)
            .map(|g| self.eval(&Word::gen(g)))
            .collect()
    }

    /// Membership in `H`, decided for `H` inside the free-abelian factor.
    fn in_h(&self, t: &Target) -> Result<bool> {
        let gens = self.h_generators();
        if gens.iter().any(|g| g.free.iter().any(|w| !w.is_empty())) {
            return Err(Error::InvalidArgument("membership in H is only decided when H is central".into()));
        }
        if t.free.iter().any(|w| !w.is_empty()) {
            return Ok(false);
        }
        // rank at most one here, which is all the toy scenario needs
        match gens.as_slice() {
            [g] => {
                let nz: Vec<(i64, i64)> = g
                    .abelian
                    .iter()
                    .zip(&t.abelian)
                    .map(|(&a, &b)| (a, b))
                    .collect();
                let ratio = nz.iter().find(|(a, _)| *a != 0).map(|(a, b)| (*b, *a));
                Ok(match ratio {
                    None => t.abelian.iter().all(|&c| c == 0),
                    Some((b, a)) => b % a == 0 && nz.iter().all(|(x, y)| x * (b / a) == *y),
                })
            }
            _ => Err(Error::InvalidArgument("membership in H is only decided for cyclic H".into())),
        }
    }

    /// The hypotheses of the area inequality, failing with the one violated.
    pub fn check_hypotheses(&self) -> Result<()> {
        let p = &self.presentation;
        let nb = (1..=self.alphabet.symbols().len() as u32)
            .filter(|&g| self.alphabet.part(g) == Part::B)
            .count();
        let mut seen = Vec::new();
        for r in p.relators() {
            let l = r.letters();
            let has_b = l.iter().any(|x| self.alphabet.part(x.generator()) == Part::B);
            if !has_b {
                let parts: Vec<Part> = l.iter().map(|x| self.alphabet.part(x.generator())).collect();
                if !(parts.iter().all(|&q| q == Part::A1) || parts.iter().all(|&q| q == Part::A2)) {
                    return Err(Error::Verification("a relator mixes A1 and A2".into()));
                }
                continue;
            }
            let rest = Word::reduce(l[1..].iter().copied()).inv();
            let side = if self.alphabet.is_over(&rest, Part::A1) {
                Part::A1
            } else if self.alphabet.is_over(&rest, Part::A2) {
                Part::A2
            } else {
                return Err(Error::Verification("an E relator is not of the form b u_b^-1".into()));
            };
            if l[0].is_inverse() || self.alphabet.part(l[0].generator()) != Part::B {
                return Err(Error::Verification("an E relator is not of the form b u_b^-1".into()));
            }
            seen.push((l[0].generator(), side));
        }
        seen.sort_by_key(|&(g, s)| (g, s == Part::A2));
        seen.dedup();
        if seen.len() != 2 * nb {
            return Err(Error::Verification("E needs one relator b u_b^-1 and one b v_b^-1 per b".into()));
        }
        if !self.alphabet.is_over(&self.w, Part::A1) || !self.alphabet.is_over(&self.u, Part::A1) {
            return Err(Error::Verification("w and u must be words over A1".into()));
        }
        if !self.alphabet.is_over(&self.v, Part::A2) {
            return Err(Error::Verification("v must be a word over A2".into()));
        }
        if !self.alphabet.is_over(&self.h, Part::B) {
            return Err(Error::Verification("h must be a word over B".into()));
        }
        let h = self.eval(&self.h);
        if self.eval(&self.w) != h {
            return Err(Error::Verification("w does not represent h".into()));
        }
        for (name, x) in [("u", &self.u), ("v", &self.v)] {
            let t = self.eval(x);
            if self.in_h(&t)? {
                return Err(Error::Verification(format!("{name} lies in H")));
            }
            if t.mul(&h) != h.mul(&t) {
                return Err(Error::Verification(format!("{name} does not commute with h")));
            }
        }
        for (i, name) in self.presentation.symbols().names().iter().enumerate() {
            let gen = i as u32 + 1;
            if self.alphabet.part(gen) != Part::B && self.in_h(&self.eval(&Word::gen(gen)))? {
                return Err(Error::Verification(format!("A-letter `{name}` lies in H")));
            }
        }
        Ok(())
    }

    pub fn test_word(&self, n: usize) -> Result<Word> {
        self.alphabet.test_word(&self.w, &self.u, &self.v, n)
    }

    /// `d_B(1, h)` by breadth-first search in the evaluation target.
    pub fn h_distance(&self, max_radius: usize) -> Option<usize> {
        let gens: Vec<Target> = self
            .h_generators()
            .into_iter()
            .flat_map(|g| {
                let i = g.inv();
                [g, i]
            })
            .collect();
        let target = self.eval(&self.h);
        let id = target_identity(&target);
        let mut seen = std::collections::HashSet::from([id.clone()]);
        let mut layer = vec![id];
        for d in 0..=max_radius {
            if layer.contains(&target) {
                return Some(d);
            }
            let mut next = Vec::new();
            for x in &layer {
                for g in &gens {
                    let y = x.mul(g);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            layer = next;
        }
        None
    }
}

fn target_identity(t: &Target) -> Target {
    Target::identity(t.free.len(), t.abelian.len())
}

fn hash_inputs(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

fn budget_key(b: &SearchBudget) -> String {
    format!("node_cap={};len_cap_factor={}", b.node_cap, b.len_cap_factor)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AreaSummary {
    /// `exact` or `exhausted`.
    pub status: &'static str,
    pub area: Option<usize>,
    pub lower_bound: usize,
    pub regime: Option<Exactness>,
    pub nodes: usize,
}

impl From<&AreaResult> for AreaSummary {
    fn from(r: &AreaResult) -> Self {
        match r {
            AreaResult::Exact {
                area,
                exactness,
                lower_bound,
                nodes,
                ..
            } => AreaSummary {
                status: "exact",
                area: Some(*area),
                lower_bound: *lower_bound,
                regime: Some(*exactness),
                nodes: *nodes,
            },
            AreaResult::Exhausted { lower_bound, nodes, .. } => AreaSummary {
                status: "exhausted",
                area: None,
                lower_bound: *lower_bound,
                regime: None,
                nodes: *nodes,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToyReport {
    pub k: usize,
    pub n: usize,
    pub word: String,
    pub word_length: usize,
    pub h_distance: usize,
    /// `2 n d_B(1, h)`.
    pub required: usize,
    pub area: AreaSummary,
    pub verdict: Verdict,
}

/// Searches the area of `[w, (uv)^n]` in the toy scenario and compares it
/// with `2 n d_B(1, s^k)`. Exhaustion is inconclusive, never a violation.
pub fn toy_amalgam_check(k: usize, n: usize, budget: SearchBudget) -> Result<ToyReport> {
    let sc = AmalgamScenario::toy(k)?;
    sc.check_hypotheses()?;
    let word = sc.test_word(n)?;
    let h_distance = sc
        .h_distance(k)
        .ok_or_else(|| Error::Verification("h not found in the B-ball".into()))?;
    let required = 2 * n * h_distance;
    let res = area_search(&sc.presentation, &word, budget)?;
    let verdict = match res.exact_area() {
        Some(a) if a >= required => Verdict::Holds,
        Some(_) => Verdict::Violated,
        None => Verdict::Inconclusive,
    };
    Ok(ToyReport {
        k,
        n,
        word: sc.presentation.format_word(&word),
        word_length: word.len(),
        h_distance,
        required,
        area: AreaSummary::from(&res),
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub verifier: &'static str,
    pub inputs_hash: String,
    /// `pass` or `inconclusive`; failures abort the report.
    pub status: &'static str,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthReport {
    /// Letters over `A_1 ∪ A_2`.
    pub symbols: usize,
    /// Letters weighted by ambient length of their realizations.
    pub ambient: usize,
    /// The figure `16n` quoted for this word.
    pub stated: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub n: usize,
    pub test_word: String,
    pub test_word_length: LengthReport,
    /// `verified` or `inconclusive`.
    pub status: &'static str,
    pub distance_lower_bound: usize,
    pub area_lower_bound: usize,
    pub evidence: Vec<Evidence>,
    pub conclusion: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportConfig {
    pub budget: SearchBudget,
    pub radius: usize,
    pub seed: u64,
    /// Random `B`-words checked against the substitution identity.
    pub samples: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            budget: SearchBudget::default(),
            radius: crate::metric::DEFAULT_RADIUS,
            seed: 0,
            samples: 100,
        }
    }
}

fn fail(verifier: &str, why: impl std::fmt::Display) -> Error {
    Error::Verification(format!("{verifier}: {why}"))
}

/// Random `B`-words of length up to `max_len`, reproducible from `seed`.
pub fn random_b_words(count: usize, max_len: usize, seed: u64) -> Vec<GenWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_word(&mut rng, 3, i % (max_len + 1)))
        .collect()
}

/// The verified chain `Area([w_n, (y2 x2)^n]) >= 2n d_B(1, h_n) >= 2n n^2`.
pub fn lower_bound_report(n: usize, cfg: ReportConfig) -> Result<CertificateReport> {
    let words = lower_bound_words(n)?;
    let mut evidence = Vec::new();
    let mut inconclusive = false;
    let nn = n * n;

    // (i) the words and the hypotheses on h_n
    {
        let v = "lower_bound_words";
        words.check_hypotheses().map_err(|e| fail(v, e))?;
        if !words.check_relation() {
            return Err(fail(v, "test word is not trivial in K3_2_2"));
        }
        let wn = words.alphabet.format(&words.w_n);
        evidence.push(Evidence {
            verifier: v,
            inputs_hash: hash_inputs(&[v, &n.to_string()]),
            status: "pass",
            detail: json!({
                "w_n": wn,
                "w_n_symbols": words.w_n.len(),
                "eval_w_n_is_h_n": true,
                "h_n_commutes_with": ["y2", "x2"],
                "test_word_trivial_in_K3_2_2": true,
            }),
        });
    }

    // (ii) Area([x^n, y^n]) = n^2 over <x, y | [x, y]>
    let torus = torus_presentation();
    let hn_word = Word::gen_pow(1, n as i64).commutator(&Word::gen_pow(2, n as i64));
    let area_lb = {
        let v = "abelian_area";
        let res = area_search(&torus, &hn_word, cfg.budget)?;
        let summary = AreaSummary::from(&res);
        let status = match &res {
            AreaResult::Exact { area, witness, .. } => {
                if *area != nn || !verify_null_expression(&torus, &hn_word, witness)? {
                    return Err(fail(v, format!("expected exact({nn}), found exact({area})")));
                }
                "pass"
            }
            AreaResult::Exhausted { .. } => {
                inconclusive = true;
                "inconclusive"
            }
        };
        let lb = match &res {
            AreaResult::Exact {
                exactness: Exactness::MatchesLowerBound,
                area,
                ..
            } => *area,
            _ => res.lower_bound(),
        };
        evidence.push(Evidence {
            verifier: v,
            inputs_hash: hash_inputs(&[v, &torus.to_string(), &torus.format_word(&hn_word), &budget_key(&cfg.budget)]),
            status,
            detail: serde_json::to_value(&summary).expect("plain data"),
        });
        lb
    };

    // (iii) the commutator-deletion argument on a concrete B-word for h_n
    let b = b_generators();
    {
        let v = "commutator_deletion";
        let h = h_family(n)?;
        let kg = crate::kernel::KernelGroup::standard(2, 2, 2)?;
        let bw = kg.rewrite_in_generators(&h).map_err(|e| fail(v, e))?;
        if b.eval(&bw)? != h {
            return Err(fail(v, "rewritten B-word does not evaluate to h_n"));
        }
        let expr = derive_null_expression(&bw, n).map_err(|e| fail(v, e))?;
        let k = bw.occurrences(3);
        if expr.area() > k || k < area_lb {
            return Err(fail(v, format!("area {} vs b3 count {k}", expr.area())));
        }
        evidence.push(Evidence {
            verifier: v,
            inputs_hash: hash_inputs(&[v, &b.format_word(&bw)]),
            status: "pass",
            detail: json!({
                "b_word_length": bw.len(),
                "b3_occurrences": k,
                "expression_area": expr.area(),
                "expression_verifies": true,
            }),
        });
    }

    // (iv) the substitution identity behind the deletion argument
    {
        let v = "substitution_identity";
        let samples = random_b_words(cfg.samples, 24, cfg.seed);
        for w in &samples {
            if !substitution_identity_holds(w)? {
                return Err(fail(v, format!("fails on {}", b.format_word(w))));
            }
        }
        evidence.push(Evidence {
            verifier: v,
            inputs_hash: hash_inputs(&[v, &cfg.seed.to_string(), &cfg.samples.to_string()]),
            status: "pass",
            detail: json!({ "samples": cfg.samples, "seed": cfg.seed }),
        });
    }

    // (v) breadth-first search in the B-metric, independent of (ii)-(iv)
    {
        let v = "bfs_distance";
        let metric = Metric::new(&b, cfg.radius, cfg.budget.exec);
        let d = metric.distance(&h_family(n)?)?;
        let detail = match d.exact() {
            Some(x) => json!({ "radius": cfg.radius, "exact": x }),
            None => json!({ "radius": cfg.radius, "lower_bound": d.lower_bound() }),
        };
        if d.exact().is_some_and(|x| x < nn) {
            return Err(fail(v, "found a B-word for h_n shorter than n^2"));
        }
        evidence.push(Evidence {
            verifier: v,
            inputs_hash: hash_inputs(&[v, &n.to_string(), &cfg.radius.to_string()]),
            // supplementary: decisive only when the ball reaches n^2
            status: if d.lower_bound() >= nn { "pass" } else { "inconclusive" },
            detail,
        });
    }

    let distance_lower_bound = area_lb.min(nn);
    let area_lower_bound = 2 * n * distance_lower_bound;
    let status = if inconclusive { "inconclusive" } else { "verified" };
    let conclusion = if inconclusive {
        format!("area search for [x^{n},y^{n}] did not finish; no bound certified for n = {n}")
    } else {
        format!(
            "Area([w_{n}, (y2 x2)^{n}]) >= 2*{n}*d_B(1,h_{n}) >= 2*{n}*{nn} = {area_lower_bound}; \
             the test words grow linearly in n while this bound grows like n^3"
        )
    };
    Ok(CertificateReport {
        n,
        test_word: words.alphabet.format(&words.test_word),
        test_word_length: LengthReport {
            symbols: words.symbol_length(),
            ambient: words.ambient_length(),
            stated: 16 * n,
        },
        status,
        distance_lower_bound,
        area_lower_bound,
        evidence,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_word_expansion_and_clashes() {
        let alph = ScenarioAlphabet::new(&["b", "a"], &["c"], &["s"]).unwrap();
        let p = |t: &str| alph.parse(t).unwrap();
        let tw = alph.test_word(&p("b"), &p("a"), &p("c"), 1).unwrap();
        assert_eq!(alph.format(&tw), "b a c b^-1 c^-1 a^-1");
        assert!(alph.test_word(&p("b"), &p("a"), &p("c"), 0).is_err());
        assert!(alph.test_word(&p("c"), &p("a"), &p("c"), 1).is_err());
        assert!(ScenarioAlphabet::new(&["a"], &["a"], &["s"]).is_err());
        assert!(ScenarioAlphabet::new(&["a"], &["c"], &["c"]).is_err());
    }

    #[test]
    fn lower_bound_words_shape() {
        let lw = lower_bound_words(1).unwrap();
        assert_eq!(lw.w_n.len(), 4);
        assert_eq!(lw.alphabet.format(&lw.test_word), lw.alphabet.format(&lw.w_n.commutator(&lw.alphabet.parse("y2 x2").unwrap())));
        for n in 1..=4 {
            let lw = lower_bound_words(n).unwrap();
            lw.check_hypotheses().unwrap();
            assert!(lw.check_relation());
            assert_eq!(lw.symbol_length(), 12 * n);
            assert_eq!(lw.ambient_length(), 16 * n);
        }
        assert!(lower_bound_words(0).is_err());
    }

    #[test]
    fn split_examples() {
        let b = b_generators();
        let s = substitution_split(&b.parse_word("b3").unwrap()).unwrap();
        assert_eq!(s.w1_expanded(), Word::gen(1).commutator(&Word::gen(2)));
        assert!(s.w2.is_empty());
        let s = substitution_split(&b.parse_word("b1").unwrap()).unwrap();
        assert_eq!((s.w1_expanded(), s.w2), (Word::gen(1), Word::gen(1).inv()));
        assert!(substitution_split(&Word::gen(4)).is_err());
        for w in random_b_words(100, 20, 7) {
            assert!(substitution_identity_holds(&w).unwrap());
        }
    }

    #[test]
    fn deletion_examples() {
        let b = b_generators();
        let e = derive_null_expression(&b.parse_word("b3").unwrap(), 1).unwrap();
        assert_eq!(e.area(), 1);
        assert!(derive_null_expression(&b.parse_word("b1").unwrap(), 1).is_err());
        let w = b.parse_word("b1 b3 b2 b3 b1^-1 b3 b1 b2^-1 b1^-1 b3").unwrap();
        let e = derive_null_expression(&w, 2).unwrap();
        assert_eq!(e.area(), 4);
    }

    #[test]
    fn toy_hypotheses() {
        for k in 1..=3 {
            let sc = AmalgamScenario::toy(k).unwrap();
            sc.check_hypotheses().unwrap();
            assert_eq!(sc.h_distance(5), Some(k));
        }
        let sc = AmalgamScenario::toy(1).unwrap();
        let w = sc.alphabet.parse("[(a^-1 c), (a b)]").unwrap();
        assert!(sc.presentation.is_null_homotopic(&w).unwrap());
        let mut bad = AmalgamScenario::toy(1).unwrap();
        bad.u = bad.alphabet.parse("a^-1 c").unwrap();
        assert!(bad.check_hypotheses().is_err());
    }

    #[test]
    fn toy_smallest_instance() {
        let r = toy_amalgam_check(1, 1, SearchBudget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.required, 2);
        assert!(r.area.area.unwrap() >= 2);
    }

    #[test]
    fn report_for_small_n() {
        let cfg = ReportConfig {
            samples: 10,
            ..ReportConfig::default()
        };
        let r = lower_bound_report(1, cfg).unwrap();
        assert_eq!((r.status, r.area_lower_bound), ("verified", 2));
        let r2 = lower_bound_report(2, cfg).unwrap();
        assert_eq!(r2.area_lower_bound, 16);
        assert_eq!(r2.test_word_length, LengthReport { symbols: 24, ambient: 32, stated: 32 });
        assert_eq!(r2, lower_bound_report(2, cfg).unwrap());
    }
}
