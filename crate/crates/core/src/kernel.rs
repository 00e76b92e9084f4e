//! The kernel groups `K^n_m(r) = ker(θ : F_m^n -> Z^r)`.
//!
//! Besides membership, this module builds the standard finite generating
//! set `S1 ∪ S2 ∪ S3` and rewrites any kernel element as a word over it.
//! Rewriting runs in three stages:
//!
//! 1. each factor `i >= 2` is lifted letter by letter to `S1 ∪ S2'`;
//! 2. the residue, supported on factor 1, is written as a product of
//!    conjugates of `S2'' ∪ S3` by peeling off letters `e_k` (`k > r`) and
//!    bubble-sorting the rest with `a b = [a,b] b a`;
//! 3. each conjugator `w(e_1, ..., e_m)` of factor 1 is replaced by
//!    `w(e_1^(1) (e_1^(2))^-1, ...)`, which conjugates factor-1 elements the
//!    same way and is a word in the generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{normalize_basis, AbelianVector, BasisChange, FactorHom};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::product::ProductElement;
use crate::word::{Letter, Symbols, Word};

/// A word over the symbols of a [`GeneratingSet`].
pub type GenWord = Word;

/// `K^n_m(r)` with one surjective homomorphism per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGroup {
    n: usize,
    m: usize,
    r: usize,
    homs: Vec<FactorHom>,
    /// Per-factor change of basis making each hom standard, with its inverse.
    /// `None` when every hom is already standard.
    transport: Option<Vec<(Vec<Word>, Vec<Word>)>>,
}

impl KernelGroup {
    /// The standard θ: `e_j^(i) -> t_j` for `j <= r`, `0` otherwise.
    pub fn standard(n: usize, m: usize, r: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument("n and m must be positive".into()));
        }
        let h = FactorHom::standard(m, r)?;
        Ok(KernelGroup {
            n,
            m,
            r,
            homs: vec![h; n],
            transport: None,
        })
    }

    /// Kernel of an arbitrary per-factor map. Every map must be surjective.
    pub fn with_homs(homs: Vec<FactorHom>) -> Result<Self> {
        let first = homs.first().ok_or_else(|| Error::InvalidArgument("no factors".into()))?;
        let (m, r) = (first.rank(), first.target_rank());
        if homs.iter().any(|h| h.rank() != m || h.target_rank() != r) {
            return Err(Error::InvalidArgument("factor homs disagree on (m, r)".into()));
        }
        let standard = FactorHom::standard(m, r)?;
        let transport = if homs.iter().all(|h| *h == standard) {
            None
        } else {
            let mut t = Vec::with_capacity(homs.len());
            for h in &homs {
                let change = normalize_basis(h)?;
                let inverse = BasisChange::replay(&change.inverse_moves(), m);
                t.push((change.new_basis, inverse));
            }
            Some(t)
        };
        Ok(KernelGroup {
            n: homs.len(),
            m,
            r,
            homs,
            transport,
        })
    }

    /// Parses `K<n>_<m>_<r>`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("group `{text}` is not of the form K<n>_<m>_<r>"));
        let body = text.trim().strip_prefix('K').ok_or_else(bad)?;
        let parts: Vec<usize> = body
            .split('_')
            .map(|p| p.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [n, m, r] => KernelGroup::standard(n, m, r),
            _ => Err(bad()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn homs(&self) -> &[FactorHom] {
        &self.homs
    }

    pub fn name(&self) -> String {
        format!("K{}_{}_{}", self.n, self.m, self.r)
    }

    pub fn theta(&self, g: &ProductElement) -> Result<AbelianVector> {
        g.check_shape(self.n, self.m)?;
        let mut out = AbelianVector::zero(self.r);
        for (h, w) in self.homs.iter().zip(g.factors()) {
            out.add_scaled(&h.ab_image_unchecked(w), 1);
        }
        Ok(out)
    }

    pub fn contains(&self, g: &ProductElement) -> Result<bool> {
        Ok(self.theta(g)?.is_zero())
    }

    fn layout(&self) -> Layout {
        Layout {
            n: self.n,
            m: self.m,
            r: self.r,
        }
    }

    /// `S1 ∪ S2 ∪ S3`, in that order. Symbol names: `s<i>_<j>` for
    /// `e_i^(1) (e_i^(j))^-1`, `g<i>_<j>` for `e_i^(j)`, `c<i>_<j>` for
    /// `[e_i^(1), e_j^(1)]`.
    pub fn standard_generators(&self) -> Result<GeneratingSet> {
        if self.n < 2 {
            return Err(Error::TooFewFactors { needed: 2, got: self.n });
        }
        let lay = self.layout();
        let (n, m, r) = (self.n, self.m, self.r);
        let mut names = Vec::new();
        let mut realizations = Vec::new();
        for i in 1..=r as u32 {
            for j in 2..=n {
                names.push(format!("s{i}_{j}"));
                let mut g = ProductElement::embed(n, 0, Word::gen(i));
                g.mul_assign(&ProductElement::embed(n, j - 1, Word::gen(i).inv()));
                realizations.push(g);
            }
        }
        for i in r as u32 + 1..=m as u32 {
            for j in 1..=n {
                names.push(format!("g{i}_{j}"));
                realizations.push(ProductElement::embed(n, j - 1, Word::gen(i)));
            }
        }
        for i in 1..=r as u32 {
            for j in i + 1..=r as u32 {
                names.push(format!("c{i}_{j}"));
                realizations.push(ProductElement::embed(n, 0, Word::gen(i).commutator(&Word::gen(j))));
            }
        }
        debug_assert_eq!(names.len(), lay.total());
        if let Some(t) = &self.transport {
            for g in &mut realizations {
                *g = transport(g, t.iter().map(|(fwd, _)| fwd));
            }
        }
        GeneratingSet::new(Symbols::new(names)?, realizations, m)
    }

    /// A word over [`Self::standard_generators`] evaluating to `g`.
    pub fn rewrite_in_generators(&self, g: &ProductElement) -> Result<GenWord> {
        if self.n < 2 {
            return Err(Error::TooFewFactors { needed: 2, got: self.n });
        }
        if !self.contains(g)? {
            return Err(Error::NotInKernel);
        }
        let g = match &self.transport {
            Some(t) => transport(g, t.iter().map(|(_, inv)| inv)),
            None => g.clone(),
        };
        let lay = self.layout();

        // stage 1
        let mut lift = GenWord::empty();
        let mut lift_first = Word::empty();
        for i in 2..=self.n {
            for &l in g.factor(i - 1).letters() {
                let j = l.generator();
                if j as usize <= self.r {
                    lift.push(Letter::new(lay.s(j, i), !l.is_inverse()));
                    lift_first.push(Letter::new(j, !l.is_inverse()));
                } else {
                    lift.push(Letter::new(lay.g(j, i), l.is_inverse()));
                }
            }
        }
        let residue = g.factor(0).mul(&lift_first.inv());

        // stages 2 and 3
        let mut out = GenWord::empty();
        for piece in collect_commutators(&residue, self.r)? {
            let conj = lay.conjugator_word(&piece.conjugator);
            let sym = match piece.basic {
                Basic::Free(k) => lay.g(k, 1),
                Basic::Commutator(i, j) => lay.c(i, j),
            };
            out.mul_assign(&conj);
            out.push(Letter::new(sym, piece.sign < 0));
            out.mul_assign(&conj.inv());
        }
        out.mul_assign(&lift);
        Ok(out)
    }

    /// Batch form of [`Self::rewrite_in_generators`].
    pub fn rewrite_batch(&self, elements: &[ProductElement], exec: Exec) -> Vec<Result<GenWord>> {
        exec.map(elements, |g| self.rewrite_in_generators(g))
    }

    /// Evaluates a uniformly random generator word of exactly `length_budget`
    /// letters (before reduction).
    pub fn random_kernel_element(&self, length_budget: usize, seed: u64) -> Result<ProductElement> {
        let gens = self.standard_generators()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, gens.len(), length_budget);
        gens.eval(&w)
    }

    /// `count` elements, the `i`-th drawn from seed `seed + i`.
    pub fn random_kernel_elements(&self, count: usize, length_budget: usize, seed: u64, exec: Exec) -> Result<Vec<ProductElement>> {
        let gens = self.standard_generators()?;
        exec.map_range(count, |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            gens.eval(&random_word(&mut rng, gens.len(), length_budget))
        })
        .into_iter()
        .collect()
    }
}

fn transport<'a, I: Iterator<Item = &'a Vec<Word>>>(g: &ProductElement, bases: I) -> ProductElement {
    ProductElement::new(
        g.factors()
            .iter()
            .zip(bases)
            .map(|(w, basis)| w.substitute(basis).expect("basis covers the rank"))
            .collect(),
    )
}

pub(crate) fn random_word<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Word {
    if rank == 0 {
        return Word::empty();
    }
    Word::reduce((0..len).map(|_| Letter::new(rng.gen_range(1..=rank as u32), rng.gen())))
}

/// Symbol numbering for the standard generating set.
#[derive(Clone, Copy)]
struct Layout {
    n: usize,
    m: usize,
    r: usize,
}

impl Layout {
    fn s(&self, i: u32, j: usize) -> u32 {
        ((i as usize - 1) * (self.n - 1) + (j - 2) + 1) as u32
    }

    fn g(&self, i: u32, j: usize) -> u32 {
        let base = self.r * (self.n - 1);
        (base + (i as usize - self.r - 1) * self.n + (j - 1) + 1) as u32
    }

    fn c(&self, i: u32, j: u32) -> u32 {
        let base = self.r * (self.n - 1) + (self.m - self.r) * self.n;
        let (i, j) = (i as usize, j as usize);
        // pairs (1,2),(1,3),..,(1,r),(2,3),..
        let before: usize = (1..i).map(|a| self.r - a).sum();
        (base + before + (j - i - 1) + 1) as u32
    }

    fn total(&self) -> usize {
        self.r * (self.n - 1) + (self.m - self.r) * self.n + self.r * self.r.saturating_sub(1) / 2
    }

    /// `w(e_1, .., e_m)` in factor 1 rewritten as
    /// `w(e_1^(1) (e_1^(2))^-1, ..)` over the generators.
    fn conjugator_word(&self, w: &Word) -> GenWord {
        let images: Vec<GenWord> = (1..=self.m as u32)
            .map(|j| {
                if j as usize <= self.r {
                    Word::gen(self.s(j, 2))
                } else {
                    Word::gen(self.g(j, 1)).mul(&Word::gen(self.g(j, 2)).inv())
                }
            })
            .collect();
        w.substitute(&images).expect("conjugator within rank")
    }
}

/// A normal generator of `K^1_m(r)` inside `F_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basic {
    /// `e_k`, `k > r`.
    Free(u32),
    /// `[e_i, e_j]`, `i < j <= r`.
    Commutator(u32, u32),
}

impl Basic {
    pub fn word(self) -> Word {
        match self {
            Basic::Free(k) => Word::gen(k),
            Basic::Commutator(i, j) => Word::gen(i).commutator(&Word::gen(j)),
        }
    }
}

/// `conjugator · basic^sign · conjugator^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatedBasic {
    pub conjugator: Word,
    pub basic: Basic,
    pub sign: i8,
}

impl ConjugatedBasic {
    pub fn expand(&self) -> Word {
        let b = if self.sign > 0 { self.basic.word() } else { self.basic.word().inv() };
        b.conj(&self.conjugator)
    }
}

/// `[a, b]` for letters with `gen(a) > gen(b)`, as `k · [e_lo, e_hi]^sign · k^-1`.
fn swap_commutator(a: Letter, b: Letter) -> (Word, i8) {
    let x = Word::gen(a.generator());
    let y = Word::gen(b.generator());
    match (a.is_inverse(), b.is_inverse()) {
        (false, false) => (Word::empty(), -1),
        (true, false) => (x.inv(), 1),
        (false, true) => (y.inv(), 1),
        (true, true) => (x.inv().mul(&y.inv()), -1),
    }
}

/// Writes `w` (exponent sums of `e_1..e_r` all zero) as a product of
/// conjugates of `e_k` (`k > r`) and `[e_i, e_j]` (`i < j <= r`).
pub fn collect_commutators(w: &Word, r: usize) -> Result<Vec<ConjugatedBasic>> {
    let mut out = Vec::new();
    let mut kept = Word::empty();
    for &l in w.letters() {
        if l.generator() as usize > r {
            out.push(ConjugatedBasic {
                conjugator: kept.clone(),
                basic: Basic::Free(l.generator()),
                sign: l.sign() as i8,
            });
        } else {
            kept.push(l);
        }
    }
    let mut v: Vec<Letter> = kept.letters().to_vec();
    loop {
        let Some(pos) = v.windows(2).position(|p| p[0].generator() > p[1].generator()) else {
            break;
        };
        let (a, b) = (v[pos], v[pos + 1]);
        let (k, sign) = swap_commutator(a, b);
        let prefix = Word::reduce(v[..pos].iter().copied());
        out.push(ConjugatedBasic {
            conjugator: prefix.mul(&k),
            basic: Basic::Commutator(b.generator(), a.generator()),
            sign,
        });
        v.swap(pos, pos + 1);
        v = Word::reduce(v).letters().to_vec();
    }
    if !v.is_empty() {
        return Err(Error::NotInKernel);
    }
    Ok(out)
}

/// Abstract symbols with realizations in a product of free groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    symbols: Symbols,
    realizations: Vec<ProductElement>,
    n: usize,
    m: usize,
}

impl GeneratingSet {
    pub fn new(symbols: Symbols, realizations: Vec<ProductElement>, m: usize) -> Result<Self> {
        if symbols.len() != realizations.len() {
            return Err(Error::InvalidArgument("one realization per symbol required".into()));
        }
        let n = realizations.first().map_or(0, ProductElement::n);
        for g in &realizations {
            g.check_shape(n, m)?;
        }
        Ok(GeneratingSet {
            symbols,
            realizations,
            n,
            m,
        })
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn realizations(&self) -> &[ProductElement] {
        &self.realizations
    }

    pub fn realization(&self, name: &str) -> Option<&ProductElement> {
        use crate::word::Alphabet;
        let i = self.symbols.index_of(name)?;
        Some(&self.realizations[i as usize - 1])
    }

    pub fn len(&self) -> usize {
        self.realizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realizations.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eval(&self, w: &GenWord) -> Result<ProductElement> {
        let mut out = ProductElement::identity(self.n);
        for &l in w.letters() {
            let g = self
                .realizations
                .get(l.generator() as usize - 1)
                .ok_or_else(|| Error::UnknownSymbol(format!("#{}", l.generator())))?;
            if l.is_inverse() {
                out.mul_assign(&g.inv());
            } else {
                out.mul_assign(g);
            }
        }
        Ok(out)
    }

    pub fn parse_word(&self, text: &str) -> Result<GenWord> {
        self.symbols.parse(text)
    }

    pub fn format_word(&self, w: &GenWord) -> String {
        self.symbols.format(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pe(text: &str) -> ProductElement {
        ProductElement::parse(text, 2).unwrap()
    }

    #[test]
    fn theta_examples() {
        let k222 = KernelGroup::standard(2, 2, 2).unwrap();
        assert!(k222.theta(&pe("x ; x^-1")).unwrap().is_zero());
        assert_eq!(k222.theta(&pe("x ; 1")).unwrap(), AbelianVector::basis(2, 1));
        let k322 = KernelGroup::standard(3, 2, 2).unwrap();
        assert!(k322.theta(&pe("[x,y] ; 1 ; 1")).unwrap().is_zero());
        assert!(k222.theta(&pe("x ; 1 ; 1")).is_err());
    }

    #[test]
    fn membership() {
        let k222 = KernelGroup::standard(2, 2, 2).unwrap();
        assert!(k222.contains(&pe("x ; x^-1")).unwrap());
        assert!(!k222.contains(&pe("x ; 1")).unwrap());
        let k121 = KernelGroup::standard(1, 2, 1).unwrap();
        for n in 1..5 {
            let g = ProductElement::new(vec![Word::gen_pow(1, n).mul(&Word::gen_pow(2, -n))]);
            // y is killed by the standard map, so only the x-exponent matters
            assert_eq!(k121.contains(&g).unwrap(), false);
        }
        // the same element is in the kernel of the map sending both x and y to t1
        let both = FactorHom::new(2, 1, vec![vec![1], vec![1]]).unwrap();
        let k = KernelGroup::with_homs(vec![both]).unwrap();
        let g = ProductElement::new(vec![Word::gen_pow(1, 3).mul(&Word::gen_pow(2, -3))]);
        assert!(k.contains(&g).unwrap());
    }

    #[test]
    fn generating_set_shapes() {
        let b = KernelGroup::standard(2, 2, 2).unwrap().standard_generators().unwrap();
        assert_eq!(b.symbols().names(), ["s1_2", "s2_2", "c1_2"]);
        assert_eq!(b.realizations()[0], pe("x ; x^-1"));
        assert_eq!(b.realizations()[1], pe("y ; y^-1"));
        assert_eq!(b.realizations()[2], pe("[x,y] ; 1"));

        let s = KernelGroup::standard(3, 2, 2).unwrap().standard_generators().unwrap();
        let count = |p: char| s.symbols().names().iter().filter(|n| n.starts_with(p)).count();
        assert_eq!((count('s'), count('g'), count('c')), (4, 0, 1));

        let a1 = KernelGroup::standard(2, 2, 1).unwrap().standard_generators().unwrap();
        assert_eq!(a1.realizations(), &[pe("x ; x^-1"), pe("y ; 1"), pe("1 ; y")]);

        assert_eq!(
            KernelGroup::standard(1, 2, 2).unwrap().standard_generators(),
            Err(Error::TooFewFactors { needed: 2, got: 1 })
        );
    }

    #[test]
    fn eval_examples() {
        let b = KernelGroup::standard(2, 2, 2).unwrap().standard_generators().unwrap();
        assert_eq!(b.eval(&Word::empty()).unwrap(), ProductElement::identity(2));
        assert_eq!(b.eval(&b.parse_word("c1_2").unwrap()).unwrap(), pe("[x,y] ; 1"));
        assert!(b.eval(&Word::gen(4)).is_err());
    }

    #[test]
    fn swap_identities() {
        for a in [Letter::new(2, false), Letter::new(2, true)] {
            for b in [Letter::new(1, false), Letter::new(1, true)] {
                let (k, sign) = swap_commutator(a, b);
                let c = Word::gen(1).commutator(&Word::gen(2));
                let c = if sign > 0 { c } else { c.inv() };
                let lhs = Word::letter(a).commutator(&Word::letter(b));
                assert_eq!(lhs, c.conj(&k), "{a:?} {b:?}");
                // and a b = [a,b] b a
                assert_eq!(
                    Word::reduce([a, b]),
                    lhs.mul(&Word::reduce([b, a]))
                );
            }
        }
    }

    #[test]
    fn rewrite_examples() {
        let k = KernelGroup::standard(2, 2, 2).unwrap();
        let b = k.standard_generators().unwrap();
        let w = k.rewrite_in_generators(&pe("[x,y] ; 1")).unwrap();
        assert_eq!(b.format_word(&w), "c1_2");
        assert!(k.rewrite_in_generators(&ProductElement::identity(2)).unwrap().is_empty());
        let g = pe("1 ; [x,y]");
        assert_eq!(b.eval(&k.rewrite_in_generators(&g).unwrap()).unwrap(), g);
        assert_eq!(k.rewrite_in_generators(&pe("x ; 1")), Err(Error::NotInKernel));
    }

    #[test]
    fn random_elements_are_deterministic() {
        let k = KernelGroup::standard(2, 2, 2).unwrap();
        assert!(k.random_kernel_element(0, 7).unwrap().is_identity());
        assert_eq!(k.random_kernel_element(12, 7).unwrap(), k.random_kernel_element(12, 7).unwrap());
        let batch = k.random_kernel_elements(200, 12, 1, Exec::Parallel).unwrap();
        assert!(batch.iter().all(|g| k.contains(g).unwrap()));
        assert_eq!(batch, k.random_kernel_elements(200, 12, 1, Exec::Sequential).unwrap());
    }

    #[test]
    fn custom_homs_transport() {
        let h = FactorHom::new(2, 1, vec![vec![1], vec![1]]).unwrap();
        let k = KernelGroup::with_homs(vec![h.clone(), h]).unwrap();
        let gens = k.standard_generators().unwrap();
        for g in gens.realizations() {
            assert!(k.contains(g).unwrap());
        }
        for seed in 0..20 {
            let g = k.random_kernel_element(10, seed).unwrap();
            let w = k.rewrite_in_generators(&g).unwrap();
            assert_eq!(gens.eval(&w).unwrap(), g);
        }
    }

    proptest! {
        #[test]
        fn stage_two_collects(raw in prop::collection::vec((1u32..=2, any::<bool>()), 0..24)) {
            // make exponent sums zero by appending the abelian inverse
            let w = Word::reduce(raw.into_iter().map(|(g, inv)| Letter::new(g, inv)));
            let fix = Word::gen_pow(1, -w.exponent_sum(1)).mul(&Word::gen_pow(2, -w.exponent_sum(2)));
            let w = w.mul(&fix);
            let pieces = collect_commutators(&w, 2).unwrap();
            let mut prod = Word::empty();
            for p in &pieces {
                prod.mul_assign(&p.expand());
            }
            prop_assert_eq!(prod, w);
        }

        #[test]
        fn theta_is_homomorphic(a in 0u64..1000, b in 0u64..1000) {
            let k = KernelGroup::standard(2, 3, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(a);
            let g = ProductElement::new(vec![random_word(&mut rng, 3, 8), random_word(&mut rng, 3, 8)]);
            let mut rng = ChaCha8Rng::seed_from_u64(b);
            let h = ProductElement::new(vec![random_word(&mut rng, 3, 8), random_word(&mut rng, 3, 8)]);
            let lhs = k.theta(&g.mul(&h)).unwrap();
            let rhs = &k.theta(&g).unwrap() + &k.theta(&h).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
