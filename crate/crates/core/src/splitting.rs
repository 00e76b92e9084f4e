//! The amalgam splitting `K^n_m(m) = L_1 *_M ... *_M L_m`.
//!
//! `M = K^{n-1}_m(m)` sits in the first `n-1` factors. Projecting onto the
//! last factor splits, with section generated by the hat elements
//! `ĝ_k = e_k^(n-1) (e_k^(n))^-1`, so every `γ` is uniquely `μ · v(ĝ)` with
//! `μ ∈ M` and `v` read off the last coordinate of `γ`. Conjugation by `ĝ_k`
//! acts on `M` as conjugation by `e_k^(n-1)`, which identifies
//! `M ⋊ <ĝ_k>` with `L_k = ker θ_k`.
//!
//! The syllable form used here is the run-length encoding of `v`: one block
//! per maximal run of a single hat generator.

use serde::{Deserialize, Serialize};

use crate::abelian::AbelianVector;
use crate::error::{Error, Result};
use crate::kernel::KernelGroup;
use crate::product::{ProductElement, ProductElementJson};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    n: usize,
    m: usize,
    ambient: KernelGroup,
    base: KernelGroup,
    hats: Vec<ProductElement>,
}

/// `γ = μ · v(ĝ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectParts {
    /// `μ` on the first `n-1` factors.
    pub m_part: ProductElement,
    /// `v`, a word in the hat generators (generator `k` is `ĝ_k`).
    pub hat_word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyllableForm {
    pub m_part: ProductElement,
    /// `(k, exponent)` with consecutive `k` distinct and exponents nonzero.
    pub blocks: Vec<(u32, i64)>,
}

/// Wire form: `{"m_part": {"factors": [..]}, "blocks": [[k, e], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyllableFormJson {
    pub m_part: ProductElementJson,
    pub blocks: Vec<(u32, i64)>,
}

impl SyllableForm {
    pub fn to_json(&self, m: usize) -> SyllableFormJson {
        SyllableFormJson {
            m_part: self.m_part.to_json(m),
            blocks: self.blocks.clone(),
        }
    }
}

impl Splitting {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewFactors { needed: 2, got: n });
        }
        let hats = (1..=m as u32)
            .map(|k| {
                let mut g = ProductElement::embed(n, n - 2, Word::gen(k));
                g.mul_assign(&ProductElement::embed(n, n - 1, Word::gen(k).inv()));
                g
            })
            .collect();
        Ok(Splitting {
            n,
            m,
            ambient: KernelGroup::standard(n, m, m)?,
            base: KernelGroup::standard(n - 1, m, m)?,
            hats,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `K^n_m(m)`.
    pub fn ambient(&self) -> &KernelGroup {
        &self.ambient
    }

    /// `M = K^{n-1}_m(m)`.
    pub fn base(&self) -> &KernelGroup {
        &self.base
    }

    pub fn hats(&self) -> &[ProductElement] {
        &self.hats
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.m {
            return Err(Error::IndexOutOfRange { index: k, max: self.m });
        }
        Ok(())
    }

    /// `θ_k : e_j -> t_j (j < k), 0 (j = k), t_{j-1} (j > k)` on `n-1` factors.
    pub fn theta_k(&self, k: usize, g: &ProductElement) -> Result<AbelianVector> {
        self.check_k(k)?;
        g.check_shape(self.n - 1, self.m)?;
        let mut coords = vec![0i64; self.m - 1];
        for w in g.factors() {
            for l in w.letters() {
                let j = l.generator() as usize;
                if j < k {
                    coords[j - 1] += l.sign();
                } else if j > k {
                    coords[j - 2] += l.sign();
                }
            }
        }
        Ok(AbelianVector::from_vec(coords))
    }

    /// Total exponent sum of `e_k` over the `n-1` factors.
    pub fn p_k(&self, k: usize, g: &ProductElement) -> Result<i64> {
        self.check_k(k)?;
        g.check_shape(self.n - 1, self.m)?;
        Ok(g.factors().iter().map(|w| w.exponent_sum(k as u32)).sum())
    }

    pub fn in_lk(&self, k: usize, g: &ProductElement) -> Result<bool> {
        Ok(self.theta_k(k, g)?.is_zero())
    }

    pub fn in_m(&self, g: &ProductElement) -> Result<bool> {
        self.base.contains(g)
    }

    /// Evaluates a hat word as an `n`-factor element.
    pub fn eval_hat_word(&self, v: &Word) -> ProductElement {
        let mut out = ProductElement::identity(self.n);
        for l in v.letters() {
            let h = &self.hats[l.generator() as usize - 1];
            out.mul_assign(&if l.is_inverse() { h.inv() } else { h.clone() });
        }
        out
    }

    /// `μ` padded with a trivial last factor.
    pub fn embed_base(&self, mu: &ProductElement) -> ProductElement {
        let mut factors = mu.factors().to_vec();
        factors.push(Word::empty());
        ProductElement::new(factors)
    }

    pub fn semidirect_decompose(&self, gamma: &ProductElement) -> Result<SemidirectParts> {
        if !self.ambient.contains(gamma)? {
            return Err(Error::NotInKernel);
        }
        // ĝ_k has last coordinate e_k^-1, so the letter e_k^ε there comes from ĝ_k^-ε
        let hat_word = gamma.factor(self.n - 1).map_letters(Letter::inverse);
        let full = gamma.mul(&self.eval_hat_word(&hat_word).inv());
        debug_assert!(full.factor(self.n - 1).is_empty());
        let mut factors = full.into_factors();
        factors.pop();
        Ok(SemidirectParts {
            m_part: ProductElement::new(factors),
            hat_word,
        })
    }

    pub fn syllable_form(&self, gamma: &ProductElement) -> Result<SyllableForm> {
        let parts = self.semidirect_decompose(gamma)?;
        let mut blocks: Vec<(u32, i64)> = Vec::new();
        for l in parts.hat_word.letters() {
            match blocks.last_mut() {
                Some((k, e)) if *k == l.generator() => *e += l.sign(),
                _ => blocks.push((l.generator(), l.sign())),
            }
        }
        Ok(SyllableForm {
            m_part: parts.m_part,
            blocks,
        })
    }

    /// The image of `γ` under `ĝ_k -> e_k^(n-1)`, an element of the first
    /// `n-1` factors.
    pub fn collapse(&self, gamma: &ProductElement) -> Result<ProductElement> {
        let parts = self.semidirect_decompose(gamma)?;
        let mut factors = parts.m_part.into_factors();
        // ĝ_k and e_k share the generator index k
        factors[self.n - 2].mul_assign(&parts.hat_word);
        Ok(ProductElement::new(factors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pe(text: &str) -> ProductElement {
        ProductElement::parse(text, 2).unwrap()
    }

    #[test]
    fn theta_k_and_p_k() {
        let d = Splitting::new(2, 2).unwrap();
        assert!(d.theta_k(1, &pe("x")).unwrap().is_zero());
        assert_eq!(d.theta_k(1, &pe("y")).unwrap(), AbelianVector::basis(1, 1));
        assert!(d.theta_k(2, &pe("[x,y]")).unwrap().is_zero());
        assert!(d.theta_k(3, &pe("x")).is_err());

        let d3 = Splitting::new(3, 2).unwrap();
        assert_eq!(d3.p_k(1, &pe("x ; 1")).unwrap(), 1);
        assert_eq!(d3.p_k(1, &pe("x ; x^-1")).unwrap(), 0);
        assert_eq!(d3.p_k(2, &pe("y^3 ; y^-1")).unwrap(), 2);
    }

    #[test]
    fn membership_predicates() {
        let d = Splitting::new(3, 2).unwrap();
        let g = pe("x ; x^-1");
        assert!(d.in_m(&g).unwrap() && d.in_lk(1, &g).unwrap());
        assert_eq!(d.p_k(1, &g).unwrap(), 0);
        let g = pe("x ; 1");
        assert!(d.in_lk(1, &g).unwrap());
        assert!(!d.in_m(&g).unwrap());
        let e = ProductElement::identity(2);
        assert!(d.in_m(&e).unwrap() && d.in_lk(1, &e).unwrap() && d.in_lk(2, &e).unwrap());
    }

    #[test]
    fn decompose_examples() {
        let d = Splitting::new(3, 2).unwrap();
        let gamma = pe("x^-1 ; 1 ; x");
        let parts = d.semidirect_decompose(&gamma).unwrap();
        assert_eq!(parts.m_part, pe("x^-1 ; x"));
        assert_eq!(parts.hat_word, Word::from_signed(&[-1]));
        assert_eq!(d.syllable_form(&gamma).unwrap().blocks, vec![(1, -1)]);

        let gamma = pe("[x,y] ; 1 ; 1");
        let parts = d.semidirect_decompose(&gamma).unwrap();
        assert!(parts.hat_word.is_empty());
        assert_eq!(parts.m_part, pe("[x,y] ; 1"));

        let parts = d.semidirect_decompose(&d.hats()[1]).unwrap();
        assert!(parts.m_part.is_identity());
        assert_eq!(parts.hat_word, Word::gen(2));

        let alt = d.eval_hat_word(&Word::from_signed(&[1, 2, 1]));
        assert_eq!(d.syllable_form(&alt).unwrap().blocks, vec![(1, 1), (2, 1), (1, 1)]);

        assert_eq!(d.semidirect_decompose(&pe("x ; 1 ; 1")), Err(Error::NotInKernel));
    }

    #[test]
    fn hat_action_matches_last_base_factor() {
        let d = Splitting::new(3, 2).unwrap();
        let k = KernelGroup::standard(2, 2, 2).unwrap();
        for seed in 0..30 {
            let mu = k.random_kernel_element(8, seed).unwrap();
            for kk in 1..=2u32 {
                let lhs = d.embed_base(&mu).conj(&d.hats()[kk as usize - 1]);
                let e = ProductElement::embed(2, 1, Word::gen(kk));
                let rhs = d.embed_base(&mu.conj(&e));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn single_blocks_collapse_into_lk() {
        let d = Splitting::new(3, 2).unwrap();
        let k = KernelGroup::standard(2, 2, 2).unwrap();
        for seed in 0..40 {
            let mu = d.embed_base(&k.random_kernel_element(6, seed).unwrap());
            let kk = 1 + (seed % 2) as u32;
            let e = [1, -2, 3][seed as usize % 3];
            let gamma = mu.mul(&d.eval_hat_word(&Word::gen_pow(kk, e)));
            let form = d.syllable_form(&gamma).unwrap();
            assert_eq!(form.blocks, vec![(kk, e)]);
            assert!(d.in_lk(kk as usize, &d.collapse(&gamma).unwrap()).unwrap());
        }
    }

    #[test]
    fn degenerate_rank_one() {
        let d = Splitting::new(2, 1).unwrap();
        let gamma = ProductElement::parse("e1^2 ; e1^-2", 1).unwrap();
        let form = d.syllable_form(&gamma).unwrap();
        assert_eq!(form.blocks, vec![(1, 2)]);
        assert!(form.m_part.is_identity());
    }

    #[test]
    fn json_shape() {
        let d = Splitting::new(3, 2).unwrap();
        let form = d.syllable_form(&pe("x^-1 ; 1 ; x")).unwrap();
        let text = serde_json::to_string(&form.to_json(2)).unwrap();
        assert_eq!(text, r#"{"m_part":{"factors":["x^-1","x"]},"blocks":[[1,-1]]}"#);
    }
}
