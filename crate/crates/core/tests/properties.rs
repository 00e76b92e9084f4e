use proptest::prelude::*;

use dpfree::abelian::{normalize_basis, BasisChange, FactorHom};
use dpfree::certificate::{b_generators, derive_null_expression, lower_bound_words, substitution_identity_holds};
use dpfree::kernel::KernelGroup;
use dpfree::metric::{h_family, h_family_generators, Ball, Distance, Metric};
use dpfree::presentation::{area_search, verify_null_expression, AreaResult, Presentation, SearchBudget};
use dpfree::splitting::Splitting;
use dpfree::{Exec, Letter, ProductElement, Word};

fn raw_letters(rank: u32, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1..=rank, any::<bool>()), 0..max_len)
        .prop_map(|v| v.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect())
}

fn word(rank: u32, max_len: usize) -> impl Strategy<Value = Word> {
    raw_letters(rank, max_len).prop_map(Word::reduce)
}

fn element(n: usize, rank: u32, max_len: usize) -> impl Strategy<Value = ProductElement> {
    prop::collection::vec(word(rank, max_len), n).prop_map(ProductElement::new)
}

fn torus() -> Presentation {
    Presentation::parse("<x,y|[x,y]>")
        .and_then(Presentation::with_inferred_evaluation)
        .unwrap()
}

/// Products of at most two conjugates of `[x,y]^±1`: null-homotopic over the torus.
fn torus_null_word() -> impl Strategy<Value = Word> {
    prop::collection::vec((word(2, 4), any::<bool>()), 1..=2).prop_map(|terms| {
        let k = Word::gen(1).commutator(&Word::gen(2));
        let mut w = Word::empty();
        for (c, inv) in terms {
            w.mul_assign(&if inv { k.inv() } else { k.clone() }.conj(&c));
        }
        w
    })
}

fn exact_area(p: &Presentation, w: &Word) -> usize {
    match area_search(p, w, SearchBudget::default()).unwrap() {
        AreaResult::Exact { area, witness, .. } => {
            assert!(verify_null_expression(p, w, &witness).unwrap());
            assert_eq!(witness.area(), area);
            area
        }
        other => panic!("no exact area for {}: {other:?}", p.format_word(w)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_is_idempotent_and_shortens(raw in raw_letters(3, 30)) {
        let w = Word::reduce(raw.clone());
        prop_assert!(w.len() <= raw.len());
        prop_assert_eq!(Word::reduce(w.letters().to_vec()), w);
    }

    #[test]
    fn group_laws(u in word(3, 20), v in word(3, 20)) {
        prop_assert!(u.mul(&v).len() <= u.len() + v.len());
        prop_assert_eq!(u.inv().inv(), u.clone());
        prop_assert!(u.mul(&u.inv()).is_empty());
    }

    #[test]
    fn substitution_is_a_homomorphism(u in word(3, 12), v in word(3, 12), images in prop::collection::vec(word(2, 5), 3)) {
        let lhs = u.mul(&v).substitute(&images).unwrap();
        let rhs = u.substitute(&images).unwrap().mul(&v.substitute(&images).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exponent_sum_survives_reduction_and_conjugation(raw in raw_letters(3, 24), y in word(3, 10), j in 1u32..=3) {
        let naive: i64 = raw.iter().filter(|l| l.generator() == j).map(|l| l.sign()).sum();
        let x = Word::reduce(raw);
        prop_assert_eq!(x.exponent_sum(j), naive);
        prop_assert_eq!(x.conj(&y).exponent_sum(j), naive);
    }

    #[test]
    fn basis_change_is_replayable_and_compatible(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 2..=4),
        w in word(4, 12),
    ) {
        let m = rows.len();
        let h = FactorHom::new(m, 2, rows).unwrap();
        prop_assume!(h.is_surjective());
        let change = normalize_basis(&h).unwrap();
        prop_assert_eq!(BasisChange::replay(&change.moves, m), change.new_basis.clone());
        let w = Word::reduce(w.letters().iter().copied().filter(|l| l.generator() as usize <= m));
        let substituted = w.substitute(&change.new_basis).unwrap();
        prop_assert_eq!(h.ab_image(&substituted).unwrap(), h.compose(&change).ab_image(&w).unwrap());
    }

    #[test]
    fn theta_is_a_homomorphism(g in element(3, 2, 10), h in element(3, 2, 10)) {
        let k = KernelGroup::standard(3, 2, 2).unwrap();
        let mut sum = k.theta(&g).unwrap();
        sum.add_scaled(&k.theta(&h).unwrap(), 1);
        prop_assert_eq!(k.theta(&g.mul(&h)).unwrap(), sum);
    }

    #[test]
    fn reassembly_and_normal_form_stability(seed in any::<u64>(), mu_seed in any::<u64>(), m in 2usize..=3) {
        let d = Splitting::new(3, m).unwrap();
        let gamma = d.ambient().random_kernel_element(10, seed).unwrap();
        let parts = d.semidirect_decompose(&gamma).unwrap();
        prop_assert_eq!(d.embed_base(&parts.m_part).mul(&d.eval_hat_word(&parts.hat_word)), gamma.clone());
        prop_assert!(d.base().contains(&parts.m_part).unwrap());
        let mu = d.base().random_kernel_element(8, mu_seed).unwrap();
        let shifted = d.embed_base(&mu).mul(&gamma);
        prop_assert_eq!(
            d.syllable_form(&shifted).unwrap().blocks.len(),
            d.syllable_form(&gamma).unwrap().blocks.len()
        );
    }

    #[test]
    fn single_block_collapses_into_lk(seed in any::<u64>(), k in 1u32..=2, e in -3i64..=3) {
        prop_assume!(e != 0);
        let d = Splitting::new(3, 2).unwrap();
        let mu = d.base().random_kernel_element(8, seed).unwrap();
        let gamma = d.embed_base(&mu).mul(&d.eval_hat_word(&Word::gen_pow(k, e)));
        let form = d.syllable_form(&gamma).unwrap();
        prop_assert_eq!(form.blocks, vec![(k, e)]);
        prop_assert!(d.in_lk(k as usize, &d.collapse(&gamma).unwrap()).unwrap());
    }

    #[test]
    fn short_exact_sequence(g in element(2, 2, 8), k in 1usize..=2) {
        let d = Splitting::new(3, 2).unwrap();
        let lhs = d.in_m(&g).unwrap();
        let rhs = d.in_lk(k, &g).unwrap() && d.p_k(k, &g).unwrap() == 0;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_identity(w in word(3, 30)) {
        prop_assert!(substitution_identity_holds(&w).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn area_is_symmetric(w in torus_null_word(), t in 0usize..16) {
        let p = torus();
        let a = exact_area(&p, &w);
        prop_assert_eq!(exact_area(&p, &w.inv()), a);
        let core = w.cyclic_core();
        if !core.is_empty() {
            prop_assert_eq!(exact_area(&p, &core.rotate(t % core.len())), a);
        }
    }

    #[test]
    fn area_is_subadditive(u in torus_null_word(), v in torus_null_word()) {
        let p = torus();
        prop_assert!(exact_area(&p, &u.mul(&v)) <= exact_area(&p, &u) + exact_area(&p, &v));
    }
}

#[test]
fn ball_distances_are_symmetric_and_subadditive() {
    let gens = b_generators();
    let ball = Ball::grow(&gens, 4, Exec::Parallel);
    let inner: Vec<ProductElement> = (0..=2).flat_map(|d| ball.layer(d).to_vec()).collect();
    for g in &inner {
        let dg = ball.distance(g).unwrap();
        assert_eq!(ball.distance(&g.inv()), Some(dg));
        for h in &inner {
            let dgh = ball.distance(&g.mul(h)).unwrap();
            assert!(dgh <= dg + ball.distance(h).unwrap());
        }
    }
}

#[test]
fn ball_sizes_are_deterministic_and_monotone() {
    let gens = h_family_generators();
    let a = Ball::grow(&gens, 5, Exec::Parallel);
    let b = Ball::grow(&gens, 5, Exec::Sequential);
    assert_eq!(a.sphere_sizes(), b.sphere_sizes());
    assert!(a.sphere_sizes().windows(2).all(|w| w[0] <= w[1]));
    for d in 0..=5 {
        assert_eq!(a.layer(d), b.layer(d));
    }
}

#[test]
fn derived_expressions_are_short() {
    let gens = b_generators();
    for n in 1..=2 {
        let h = h_family(n).unwrap();
        let geodesic = match Metric::new(&gens, 10, Exec::Parallel).distance(&h).unwrap() {
            Distance::Exact { witness, .. } => witness,
            other => panic!("h_{n}: {other:?}"),
        };
        // also a long, non-geodesic word for h_n
        let padded = Word::gen(1).mul(&geodesic).mul(&Word::gen(1).inv());
        let padded = Word::gen(1).inv().mul(&padded).mul(&Word::gen(1));
        for w in [geodesic, padded] {
            let expr = derive_null_expression(&w, n).unwrap();
            let b3 = w.occurrences(3);
            assert!(expr.area() <= b3 && b3 <= w.len());
        }
    }
}

#[test]
fn lower_bound_words_hypotheses_up_to_four() {
    for n in 1..=4 {
        let lw = lower_bound_words(n).unwrap();
        lw.check_hypotheses().unwrap();
        assert!(lw.check_relation());
    }
}
