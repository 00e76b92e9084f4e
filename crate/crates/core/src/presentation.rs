//! Finite presentations, null-expressions and exact area search.
//!
//! A null-expression for `w` over `<A | R>` is a list of conjugated relators
//! `x_i r_i^±1 x_i^-1` whose product freely equals `w`; its length is its
//! area. [`area_search`] looks for a shortest one by best-first search over
//! reduced words: a move inserts a cyclic permutation of some `r^±1` at some
//! position and freely reduces, and the goal is the empty word.
//!
//! Two admissible lower bounds guide the search:
//!
//! * length: one insertion shortens a word by at most the longest relator
//!   length, so `ceil(|w| / max|r|)` moves remain;
//! * chain: on an aspherical presentation with a faithful evaluation, a
//!   null-homotopic word bounds exactly one 2-chain in the Cayley complex.
//!   Each move changes that chain by a single signed cell, so its `l1` norm
//!   never overestimates the remaining moves. The chain of the input word is
//!   read off any null-expression, found first by a greedy pass.
//!
//! Insertion search can only see intermediate words up to a length cap, so
//! an optimum is in general exact only relative to that cap. When the optimum
//! equals the certified lower bound it is exact outright, and the result says
//! which case applies.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::text::Cursor;
use crate::word::{Letter, Symbols, Word};

/// An element of `F_{r_1} x ... x F_{r_k} x Z^d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Target {
    pub free: Vec<Word>,
    pub abelian: Vec<i64>,
}

impl Target {
    pub fn identity(free_factors: usize, abelian_dim: usize) -> Self {
        Target {
            free: vec![Word::empty(); free_factors],
            abelian: vec![0; abelian_dim],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.free.iter().all(Word::is_empty) && self.abelian.iter().all(|&c| c == 0)
    }

    pub fn mul_assign(&mut self, other: &Target) {
        for (a, b) in self.free.iter_mut().zip(&other.free) {
            a.mul_assign(b);
        }
        for (a, b) in self.abelian.iter_mut().zip(&other.abelian) {
            *a += b;
        }
    }

    pub fn mul(&self, other: &Target) -> Target {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn inv(&self) -> Target {
        Target {
            free: self.free.iter().map(Word::inv).collect(),
            abelian: self.abelian.iter().map(|c| -c).collect(),
        }
    }
}

/// A homomorphism from the free group on the presentation's alphabet into
/// `F_{r_1} x ... x F_{r_k} x Z^d`, declared faithful on the presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    free_ranks: Vec<usize>,
    abelian_dim: usize,
    images: Vec<Target>,
}

impl Evaluation {
    pub fn new(free_ranks: Vec<usize>, abelian_dim: usize, images: Vec<Target>) -> Result<Self> {
        for t in &images {
            if t.free.len() != free_ranks.len() || t.abelian.len() != abelian_dim {
                return Err(Error::InvalidArgument("evaluation image has the wrong shape".into()));
            }
            for (w, &rank) in t.free.iter().zip(&free_ranks) {
                crate::word::FreeGroup::new(rank).check(w)?;
            }
        }
        Ok(Evaluation {
            free_ranks,
            abelian_dim,
            images,
        })
    }

    pub fn identity(&self) -> Target {
        Target::identity(self.free_ranks.len(), self.abelian_dim)
    }

    pub fn eval(&self, w: &Word) -> Target {
        let mut out = self.identity();
        for l in w.letters() {
            let img = &self.images[l.generator() as usize - 1];
            if l.is_inverse() {
                out.mul_assign(&img.inv());
            } else {
                out.mul_assign(img);
            }
        }
        out
    }

    fn eval_letters(&self, letters: &[Letter]) -> Target {
        self.eval(&Word::reduce(letters.iter().copied()))
    }
}

/// Why a presentation is treated as aspherical, if it is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Asphericity {
    Unknown,
    /// One relator that is not a proper power.
    OneRelator,
    /// Commutator relators presenting a product of at most two free groups.
    ProductOfTwoFree,
    /// Asserted by the caller.
    Declared,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    symbols: Symbols,
    relators: Vec<Word>,
    evaluation: Option<Evaluation>,
    asphericity: Asphericity,
}

impl Presentation {
    pub fn new(symbols: Symbols, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if r.is_empty() {
                return Err(Error::InvalidArgument("relators must be nonempty".into()));
            }
            if r.max_generator() as usize > symbols.len() {
                return Err(Error::GeneratorOutOfRange {
                    index: r.max_generator(),
                    rank: symbols.len(),
                });
            }
        }
        let asphericity = if relators.len() == 1 && !relators[0].is_proper_power() {
            Asphericity::OneRelator
        } else {
            Asphericity::Unknown
        };
        Ok(Presentation {
            symbols,
            relators,
            evaluation: None,
            asphericity,
        })
    }

    /// Parses `< a, b, ... | r1, r2, ... >`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text);
        cur.expect('<')?;
        let mut names = Vec::new();
        if !cur.eat('|') {
            loop {
                names.push(cur.identifier()?);
                if cur.eat(',') {
                    continue;
                }
                cur.expect('|')?;
                break;
            }
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(cur.error(format!("duplicate generator `{n}`")).into());
            }
        }
        let symbols = Symbols::new(names)?;
        let mut relators = Vec::new();
        if !cur.eat('>') {
            loop {
                let w = cur.word(&symbols)?;
                if w.is_empty() {
                    return Err(cur.error("relator reduces to the empty word").into());
                }
                relators.push(w);
                if cur.eat(',') {
                    continue;
                }
                cur.expect('>')?;
                break;
            }
        }
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.error("trailing input after `>`").into());
        }
        Presentation::new(symbols, relators)
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn evaluation(&self) -> Option<&Evaluation> {
        self.evaluation.as_ref()
    }

    pub fn asphericity(&self) -> Asphericity {
        self.asphericity
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.symbols.parse(text)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.symbols.format(w)
    }

    /// Attaches a faithful evaluation after checking every relator dies.
    pub fn with_evaluation(mut self, ev: Evaluation) -> Result<Self> {
        if ev.images.len() != self.symbols.len() {
            return Err(Error::InvalidArgument("one evaluation image per generator required".into()));
        }
        for (i, r) in self.relators.iter().enumerate() {
            if !ev.eval(r).is_identity() {
                return Err(Error::Verification(format!("relator {i} does not evaluate to the identity")));
            }
        }
        self.evaluation = Some(ev);
        Ok(self)
    }

    pub fn declare_aspherical(mut self) -> Self {
        if self.asphericity == Asphericity::Unknown {
            self.asphericity = Asphericity::Declared;
        }
        self
    }

    /// Recognizes presentations whose relators are exactly the commutators
    /// `[a, b]` between generators in different blocks of a partition. Those
    /// present the product of the free groups on the blocks (free groups for
    /// no relators, free abelian groups for all singleton blocks), which
    /// gives a faithful evaluation. Two blocks or fewer also make the
    /// presentation complex aspherical.
    pub fn with_inferred_evaluation(self) -> Result<Self> {
        let k = self.symbols.len();
        let mut commute = vec![vec![false; k]; k];
        for r in &self.relators {
            let core = r.cyclic_core();
            let l = core.letters();
            let is_comm = l.len() == 4
                && l[2] == l[0].inverse()
                && l[3] == l[1].inverse()
                && l[0].generator() != l[1].generator();
            if !is_comm {
                return Err(Error::InvalidArgument(
                    "cannot infer an evaluation: relators are not all generator commutators".into(),
                ));
            }
            let (a, b) = (l[0].generator() as usize - 1, l[1].generator() as usize - 1);
            commute[a][b] = true;
            commute[b][a] = true;
        }
        // blocks: classes of "does not commute", which must be cliques of non-commuting pairs
        let mut block = vec![usize::MAX; k];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for a in 0..k {
            if block[a] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (0..k).filter(|&b| b == a || !commute[a][b]).collect();
            for &b in &members {
                if block[b] != usize::MAX {
                    return Err(Error::InvalidArgument("cannot infer an evaluation: not a product of free groups".into()));
                }
                block[b] = blocks.len();
            }
            blocks.push(members);
        }
        for a in 0..k {
            for b in 0..k {
                if a != b && (block[a] == block[b]) == commute[a][b] {
                    return Err(Error::InvalidArgument("cannot infer an evaluation: not a product of free groups".into()));
                }
            }
        }
        let free_ranks: Vec<usize> = blocks.iter().map(Vec::len).collect();
        let images = (0..k)
            .map(|a| {
                let mut t = Target::identity(blocks.len(), 0);
                let pos = blocks[block[a]].iter().position(|&b| b == a).unwrap();
                t.free[block[a]] = Word::gen(pos as u32 + 1);
                t
            })
            .collect();
        let ev = Evaluation::new(free_ranks, 0, images)?;
        let two_blocks = blocks.len() <= 2;
        let mut out = self.with_evaluation(ev)?;
        if two_blocks && out.asphericity == Asphericity::Unknown {
            out.asphericity = Asphericity::ProductOfTwoFree;
        }
        Ok(out)
    }

    pub fn is_null_homotopic(&self, w: &Word) -> Result<bool> {
        let ev = self.evaluation.as_ref().ok_or(Error::NoEvaluation)?;
        Ok(ev.eval(w).is_identity())
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.symbols.format(r)).collect();
        write!(f, "< {} | {} >", self.symbols.names().join(", "), rels.join(", "))
    }
}

/// `x r^sign x^-1`, with `relator` a 0-based index into the presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullTerm {
    pub conjugator: Word,
    pub relator: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NullExpression {
    pub terms: Vec<NullTerm>,
}

/// Wire form of one term: `{"conj": "...", "rel": i, "sign": ±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullTermJson {
    pub conj: String,
    pub rel: usize,
    pub sign: i8,
}

impl NullExpression {
    pub fn area(&self) -> usize {
        self.terms.len()
    }

    /// The freely reduced product of the terms.
    pub fn product(&self, p: &Presentation) -> Result<Word> {
        let mut out = Word::empty();
        for t in &self.terms {
            let r = p.relators.get(t.relator).ok_or(Error::BadRelatorIndex(t.relator))?;
            let r = if t.sign > 0 { r.clone() } else { r.inv() };
            out.mul_assign(&r.conj(&t.conjugator));
        }
        Ok(out)
    }

    pub fn to_json(&self, p: &Presentation) -> Vec<NullTermJson> {
        self.terms
            .iter()
            .map(|t| NullTermJson {
                conj: p.format_word(&t.conjugator),
                rel: t.relator,
                sign: t.sign,
            })
            .collect()
    }

    pub fn from_json(p: &Presentation, terms: &[NullTermJson]) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|t| {
                if t.sign != 1 && t.sign != -1 {
                    return Err(Error::InvalidArgument(format!("sign must be ±1, got {}", t.sign)));
                }
                Ok(NullTerm {
                    conjugator: p.parse_word(&t.conj)?,
                    relator: t.rel,
                    sign: t.sign,
                })
            })
            .collect::<Result<_>>()?;
        Ok(NullExpression { terms })
    }
}

/// True iff `w` freely equals the product of the expression's terms.
pub fn verify_null_expression(p: &Presentation, w: &Word, expr: &NullExpression) -> Result<bool> {
    Ok(expr.product(p)? == *w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Maximum number of distinct words stored.
    pub node_cap: usize,
    /// Intermediate words are capped at `|w| + factor * max|r|` letters.
    pub len_cap_factor: usize,
    pub exec: Exec,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_cap: 2_000_000,
            len_cap_factor: 4,
            exec: Exec::Parallel,
        }
    }
}

/// Which lower bound drove the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Length,
    Chain,
}

/// How far an `exact` answer can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "regime")]
pub enum Exactness {
    /// The optimum equals the certified lower bound: exact with no caveat.
    MatchesLowerBound,
    /// Optimal among expressions whose intermediate words fit the cap.
    WithinLengthCap { cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AreaResult {
    Exact {
        area: usize,
        witness: NullExpression,
        exactness: Exactness,
        lower_bound: usize,
        bound: BoundKind,
        nodes: usize,
    },
    Exhausted {
        node_cap: usize,
        /// Certified: holds for every null-expression.
        lower_bound: usize,
        /// Holds for expressions whose intermediate words fit the length cap.
        capped_lower_bound: usize,
        bound: BoundKind,
        nodes: usize,
    },
}

impl AreaResult {
    pub fn exact_area(&self) -> Option<usize> {
        match self {
            AreaResult::Exact { area, .. } => Some(*area),
            AreaResult::Exhausted { .. } => None,
        }
    }

    pub fn lower_bound(&self) -> usize {
        match self {
            AreaResult::Exact { lower_bound, .. } | AreaResult::Exhausted { lower_bound, .. } => *lower_bound,
        }
    }
}

/// One cyclic permutation of `r^sign`.
#[derive(Clone, Debug)]
struct Variant {
    relator: usize,
    sign: i8,
    /// `s[..t]` for `s = r^sign`: the insertion `p ρ p^-1` equals
    /// `X s X^-1` with `X = p · s[..t]^-1`.
    head: Word,
    letters: Vec<Letter>,
    /// Evaluation of `s[t..]`: the cell's base vertex is `eval(p) · tail`.
    tail: Option<Target>,
}

fn variants(p: &Presentation) -> Vec<Variant> {
    let mut out: Vec<Variant> = Vec::new();
    for (ri, r) in p.relators.iter().enumerate() {
        for sign in [1i8, -1] {
            let s = if sign > 0 { r.clone() } else { r.inv() };
            let sl = s.letters();
            for t in 0..sl.len() {
                let letters: Vec<Letter> = sl[t..].iter().chain(&sl[..t]).copied().collect();
                if out.iter().any(|v| v.letters == letters) {
                    continue;
                }
                out.push(Variant {
                    relator: ri,
                    sign,
                    head: s.prefix(t),
                    tail: p.evaluation.as_ref().map(|ev| ev.eval_letters(&sl[t..])),
                    letters,
                });
            }
        }
    }
    out
}

type Cell = (Target, usize);
type Chain = HashMap<Cell, i64>;

fn chain_norm(c: &Chain) -> usize {
    c.values().map(|v| v.unsigned_abs() as usize).sum()
}

fn add_cell(c: &mut Chain, cell: Cell, coef: i64) {
    match c.entry(cell) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += coef;
            if *e.get() == 0 {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(coef);
        }
    }
}

#[derive(Clone, Copy)]
struct Move {
    pos: u32,
    variant: u32,
}

struct Node {
    word: Word,
    g: u32,
    h: u32,
    parent: u32,
    mv: Move,
    closed: bool,
}

#[derive(Clone, Copy)]
enum Mode {
    /// Minimize word length first; finds some expression quickly.
    Greedy,
    Optimal(BoundKind),
}

struct Search<'a> {
    p: &'a Presentation,
    variants: Vec<Variant>,
    cap: usize,
    budget: SearchBudget,
}

const NO_PARENT: u32 = u32::MAX;

struct Outcome {
    path: Option<Vec<Move>>,
    nodes: usize,
    frontier_bound: usize,
}

impl<'a> Search<'a> {
    fn new(p: &'a Presentation, w: &Word, budget: SearchBudget) -> Self {
        Search {
            p,
            variants: variants(p),
            cap: w.len() + budget.len_cap_factor * p.max_relator_len(),
            budget,
        }
    }

    fn successors(&self, w: &Word) -> Vec<(Word, Move)> {
        let letters = w.letters();
        let cap = self.cap;
        let nv = self.variants.len();
        let work = (letters.len() + 1) * nv;
        let exec = if work >= 512 { self.budget.exec } else { Exec::Sequential };
        let positions: Vec<usize> = (0..=letters.len()).collect();
        exec.flat_map(&positions, |&pos| {
            let mut out = Vec::with_capacity(nv);
            for (vi, v) in self.variants.iter().enumerate() {
                let mut stack: Vec<Letter> = Vec::with_capacity(letters.len() + v.letters.len());
                stack.extend_from_slice(&letters[..pos]);
                for &l in v.letters.iter().chain(&letters[pos..]) {
                    if stack.last() == Some(&l.inverse()) {
                        stack.pop();
                    } else {
                        stack.push(l);
                    }
                }
                if stack.len() <= cap {
                    out.push((
                        Word::reduce(stack),
                        Move {
                            pos: pos as u32,
                            variant: vi as u32,
                        },
                    ));
                }
            }
            out
        })
    }

    /// The cell a move adds to the chain of the word it is applied to.
    fn cell(&self, prefix_evals: &[Target], mv: Move) -> (Cell, i64) {
        let v = &self.variants[mv.variant as usize];
        let base = prefix_evals[mv.pos as usize].mul(v.tail.as_ref().expect("evaluation attached"));
        ((base, v.relator), v.sign as i64)
    }

    fn prefix_evals(&self, w: &Word) -> Vec<Target> {
        let ev = self.p.evaluation.as_ref().expect("evaluation attached");
        let mut out = Vec::with_capacity(w.len() + 1);
        let mut cur = ev.identity();
        out.push(cur.clone());
        for &l in w.letters() {
            cur.mul_assign(&ev.eval(&Word::letter(l)));
            out.push(cur.clone());
        }
        out
    }

    /// Chain of the word reached by `path` from `start`, given the start chain.
    fn replay_chain(&self, start: &Word, start_chain: &Chain, path: &[Move]) -> Chain {
        let mut chain = start_chain.clone();
        let mut w = start.clone();
        for &mv in path {
            let evals = self.prefix_evals(&w);
            let (cell, coef) = self.cell(&evals, mv);
            add_cell(&mut chain, cell, coef);
            w = self.apply(&w, mv);
        }
        chain
    }

    fn apply(&self, w: &Word, mv: Move) -> Word {
        let v = &self.variants[mv.variant as usize];
        let l = w.letters();
        Word::reduce(
            l[..mv.pos as usize]
                .iter()
                .chain(&v.letters)
                .chain(&l[mv.pos as usize..])
                .copied(),
        )
    }

    fn length_bound(&self, w: &Word) -> u32 {
        let m = self.p.max_relator_len().max(1);
        w.len().div_ceil(m) as u32
    }

    fn run(&self, start: &Word, mode: Mode, start_chain: Option<&Chain>) -> Outcome {
        let mut nodes: Vec<Node> = Vec::new();
        let mut index: HashMap<Word, u32> = HashMap::new();
        // (priority, tiebreak, sequence, node)
        let mut open: BinaryHeap<Reverse<(u32, u32, u32, u64, u32)>> = BinaryHeap::new();
        let mut seq = 0u64;

        let h0 = match mode {
            Mode::Optimal(BoundKind::Chain) => chain_norm(start_chain.expect("chain required")) as u32,
            _ => self.length_bound(start),
        };
        let key = |mode: Mode, g: u32, h: u32, len: usize| -> (u32, u32, u32) {
            match mode {
                Mode::Greedy => (len as u32, g, 0),
                Mode::Optimal(_) => (g + h, u32::MAX - g, len as u32),
            }
        };
        nodes.push(Node {
            word: start.clone(),
            g: 0,
            h: h0,
            parent: NO_PARENT,
            mv: Move { pos: 0, variant: 0 },
            closed: false,
        });
        index.insert(start.clone(), 0);
        let (a, b, c) = key(mode, 0, h0, start.len());
        open.push(Reverse((a, b, c, seq, 0)));
        let mut frontier_bound = h0 as usize;

        while let Some(Reverse((prio, _, _, _, id))) = open.pop() {
            let node = &nodes[id as usize];
            if node.closed || key(mode, node.g, node.h, node.word.len()).0 != prio {
                continue;
            }
            if let Mode::Optimal(_) = mode {
                frontier_bound = frontier_bound.max(prio as usize);
            }
            if node.word.is_empty() {
                let mut path = Vec::new();
                let mut cur = id;
                while nodes[cur as usize].parent != NO_PARENT {
                    path.push(nodes[cur as usize].mv);
                    cur = nodes[cur as usize].parent;
                }
                path.reverse();
                return Outcome {
                    path: Some(path),
                    nodes: nodes.len(),
                    frontier_bound,
                };
            }
            nodes[id as usize].closed = true;
            let word = nodes[id as usize].word.clone();
            let g = nodes[id as usize].g + 1;

            let chain_ctx = match mode {
                Mode::Optimal(BoundKind::Chain) => {
                    let mut path = Vec::new();
                    let mut cur = id;
                    while nodes[cur as usize].parent != NO_PARENT {
                        path.push(nodes[cur as usize].mv);
                        cur = nodes[cur as usize].parent;
                    }
                    path.reverse();
                    let chain = self.replay_chain(start, start_chain.unwrap(), &path);
                    let norm = chain_norm(&chain) as i64;
                    Some((chain, norm, self.prefix_evals(&word)))
                }
                _ => None,
            };

            for (child, mv) in self.successors(&word) {
                let h = match (&chain_ctx, mode) {
                    (Some((chain, norm, evals)), _) => {
                        let (cell, coef) = self.cell(evals, mv);
                        let old = chain.get(&cell).copied().unwrap_or(0);
                        (norm - old.abs() + (old + coef).abs()) as u32
                    }
                    (None, Mode::Optimal(BoundKind::Length)) => self.length_bound(&child),
                    _ => 0,
                };
                let len = child.len();
                let cid = match index.get(&child) {
                    Some(&cid) => {
                        let n = &mut nodes[cid as usize];
                        if n.closed || n.g <= g {
                            continue;
                        }
                        n.g = g;
                        n.parent = id;
                        n.mv = mv;
                        cid
                    }
                    None => {
                        if nodes.len() >= self.budget.node_cap {
                            return Outcome {
                                path: None,
                                nodes: nodes.len(),
                                frontier_bound,
                            };
                        }
                        let cid = nodes.len() as u32;
                        index.insert(child.clone(), cid);
                        nodes.push(Node {
                            word: child,
                            g,
                            h,
                            parent: id,
                            mv,
                            closed: false,
                        });
                        cid
                    }
                };
                seq += 1;
                let (a, b, c) = key(mode, g, h, len);
                open.push(Reverse((a, b, c, seq, cid)));
            }
        }
        Outcome {
            path: None,
            nodes: nodes.len(),
            frontier_bound: usize::MAX,
        }
    }

    fn witness(&self, start: &Word, path: &[Move]) -> NullExpression {
        let mut terms = Vec::with_capacity(path.len());
        let mut w = start.clone();
        for &mv in path {
            let v = &self.variants[mv.variant as usize];
            let conj = w.prefix(mv.pos as usize).mul(&v.head.inv());
            terms.push(NullTerm {
                conjugator: conj,
                relator: v.relator,
                sign: -v.sign,
            });
            w = self.apply(&w, mv);
        }
        NullExpression { terms }
    }
}

/// Minimal area of a null-homotopic word, or a certified "don't know".
pub fn area_search(p: &Presentation, w: &Word, budget: SearchBudget) -> Result<AreaResult> {
    if w.max_generator() as usize > p.symbols.len() {
        return Err(Error::GeneratorOutOfRange {
            index: w.max_generator(),
            rank: p.symbols.len(),
        });
    }
    if p.evaluation.is_some() && !p.is_null_homotopic(w)? {
        return Err(Error::InvalidArgument("word is not null-homotopic".into()));
    }
    let search = Search::new(p, w, budget);
    let use_chain = p.evaluation.is_some() && p.asphericity != Asphericity::Unknown;

    let mut start_chain = None;
    if use_chain {
        let greedy = search.run(w, Mode::Greedy, None);
        if let Some(path) = greedy.path {
            let end = search.replay_chain(w, &Chain::new(), &path);
            start_chain = Some(end.into_iter().map(|(k, v)| (k, -v)).collect::<Chain>());
        }
    }
    let (bound, outcome, lower_bound) = match &start_chain {
        Some(chain) => (
            BoundKind::Chain,
            search.run(w, Mode::Optimal(BoundKind::Chain), Some(chain)),
            chain_norm(chain),
        ),
        None => (
            BoundKind::Length,
            search.run(w, Mode::Optimal(BoundKind::Length), None),
            search.length_bound(w) as usize,
        ),
    };
    match outcome.path {
        Some(path) => {
            let witness = search.witness(w, &path);
            if !verify_null_expression(p, w, &witness)? {
                return Err(Error::Verification("search witness does not reproduce the word".into()));
            }
            let area = path.len();
            let exactness = if area == lower_bound {
                Exactness::MatchesLowerBound
            } else {
                Exactness::WithinLengthCap { cap: search.cap }
            };
            Ok(AreaResult::Exact {
                area,
                witness,
                exactness,
                lower_bound,
                bound,
                nodes: outcome.nodes,
            })
        }
        None => Ok(AreaResult::Exhausted {
            node_cap: budget.node_cap,
            lower_bound,
            capped_lower_bound: outcome.frontier_bound.max(lower_bound),
            bound,
            nodes: outcome.nodes,
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnValue {
    pub n: usize,
    /// Largest area found; a lower bound on `δ(n)` unless `exact`.
    pub value: usize,
    pub exact: bool,
    pub witness: Option<Word>,
    /// Null-homotopic words examined, one per rotation/inversion class.
    pub words: usize,
    pub inconclusive: usize,
}

/// Cyclically reduced words of length `1..=n`, one per class under rotation
/// and inversion, in shortlex order of the class representative.
fn cyclic_classes(rank: usize, n: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (1..=rank as u32)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<Letter> = Vec::new();
    fn canonical(w: &[Letter]) -> bool {
        let n = w.len();
        let inv: Vec<Letter> = w.iter().rev().map(|l| l.inverse()).collect();
        for base in [w, &inv[..]] {
            for t in 0..n {
                let rot = base[t..].iter().chain(&base[..t]);
                if rot.cmp(w.iter()) == std::cmp::Ordering::Less {
                    return false;
                }
            }
        }
        true
    }
    fn rec(alphabet: &[Letter], cur: &mut Vec<Letter>, n: usize, out: &mut Vec<Word>) {
        if !cur.is_empty() && cur.len() <= n {
            let cyc = cur.len() == 1 || cur[0] != cur[cur.len() - 1].inverse();
            if cyc && canonical(cur) {
                out.push(Word::reduce(cur.iter().copied()));
            }
        }
        if cur.len() == n {
            return;
        }
        for &l in alphabet {
            if cur.last() == Some(&l.inverse()) {
                continue;
            }
            cur.push(l);
            rec(alphabet, cur, n, out);
            cur.pop();
        }
    }
    rec(&alphabet, &mut cur, n, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `δ(n)`: the largest area of a null-homotopic word of length at most `n`.
/// Area is invariant under rotation and inversion, so one cyclically reduced
/// representative per class suffices.
pub fn dehn_function(p: &Presentation, n: usize, budget: SearchBudget) -> Result<DehnValue> {
    let ev = p.evaluation.as_ref().ok_or(Error::NoEvaluation)?;
    let words: Vec<Word> = cyclic_classes(p.symbols.len(), n)
        .into_iter()
        .filter(|w| ev.eval(w).is_identity())
        .collect();
    let inner = SearchBudget {
        exec: Exec::Sequential,
        ..budget
    };
    let results = budget.exec.map(&words, |w| area_search(p, w, inner));
    let mut best = DehnValue {
        n,
        value: 0,
        exact: true,
        witness: None,
        words: words.len(),
        inconclusive: 0,
    };
    for (w, res) in words.iter().zip(results) {
        let res = res?;
        let value = match res.exact_area() {
            Some(a) => a,
            None => {
                best.exact = false;
                best.inconclusive += 1;
                res.lower_bound()
            }
        };
        if value > best.value {
            best.value = value;
            best.witness = Some(w.clone());
        }
    }
    Ok(best)
}
