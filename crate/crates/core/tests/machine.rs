mod common;

use common::*;
use dvn::catalog;
use dvn::enumerate::enumerate_core_elements;
use dvn::homeo::{bakers, machine_of, PrefixExchange};
use dvn::machine::*;
use dvn::words::{lcp, square_words, validate_prefix_code, WordD};
use dvn::Error;
use proptest::prelude::*;

fn b(s: &str) -> WordD {
    w1(2, &s.bytes().map(|c| c - b'0').collect::<Vec<_>>())
}

fn idx(q: usize) -> StateKey {
    StateKey::Index(q)
}

#[test]
fn every_one_dimensional_table_is_valid() {
    let sig = Sig::new(1, 3);
    let out = vec![w1(3, &[2, 2]), WordD::empty(1, 3), w1(3, &[0]), w1(3, &[1]), w1(3, &[]), w1(3, &[0, 1])];
    assert!(Diagram::new(sig, sig, vec![1, 0, 1, 0, 0, 1], out).is_ok());
}

#[test]
fn incoherent_outputs_are_rejected() {
    // Reading 0 in coordinate 0 emits (0,ε); reading 0 in coordinate 1 emits (1,ε).
    let sig = Sig::new(2, 2);
    let o = |s: &str| WordD::parse(s, 2).unwrap();
    let out = vec![o("(0,)"), o("(0,)"), o("(1,)"), o("(1,)")];
    let err = Diagram::new(sig, sig, vec![0; 4], out).unwrap_err();
    assert!(matches!(err, Error::IncoherentOutput { state: 0, .. }), "{err}");
    assert!(err.to_string().starts_with("IncoherentOutput at state 0, gens ("));
}

#[test]
fn incoherent_transitions_are_rejected() {
    let sig = Sig::new(2, 2);
    let trans = vec![1, 1, 0, 0, 1, 1, 0, 0];
    let out = (0..8).map(|i| sig.generator(sig.generator_at(i % 4))).collect();
    assert!(matches!(Diagram::new(sig, sig, trans, out), Err(Error::IncoherentTransition { .. })));
}

#[test]
fn run_examples() {
    let id = Diagram::identity(2, 3);
    let x = WordD::parse("(012,21)", 3).unwrap();
    assert_eq!(run(&id, &idx(0), &x).unwrap(), (idx(0), x));
    let t = catalog::fig3_left();
    assert_eq!(run(&t, &idx(0), &b("01")).unwrap(), (idx(0), b("001")));
    assert_eq!(run(&t, &idx(0), &b("0001")).unwrap().1, b("0001"));
    assert!(matches!(run(&t, &idx(0), &w1(3, &[2])), Err(Error::AlphabetMismatch { .. })));
}

#[test]
fn eval_prefix_examples() {
    let baker = bakers();
    let e2 = StateKey::Word(WordD::empty(2, 2));
    let x = WordD::parse("(0,)", 2).unwrap();
    assert_eq!(eval_prefix(baker.as_ref(), &e2, &x).unwrap(), WordD::parse("(,0)", 2).unwrap());
    let t = catalog::fig5_t();
    assert_eq!(eval_prefix(&t, &idx(0), &w1(4, &[0, 2])).unwrap(), WordD::parse("(01,00)", 2).unwrap());
    assert_eq!(eval_prefix(&t, &idx(0), &w1(4, &[2])).unwrap(), WordD::parse("(1,0)", 2).unwrap());
}

#[test]
fn nondegeneracy_examples() {
    assert!(is_nondegenerate(&catalog::fig3_left()));
    assert!(is_nondegenerate(&Diagram::identity(2, 2)));
    let sig = Sig::new(1, 2);
    let silent = Diagram::from_fn(sig, sig, 1, |_, _| (0, sig.empty())).unwrap();
    assert!(!is_nondegenerate(&silent));
}

#[test]
fn product_examples() {
    assert_eq!(product(&[Diagram::identity(1, 2), Diagram::identity(1, 2)]).unwrap(), Diagram::identity(2, 2));
    let b = catalog::fig4_b();
    assert_eq!(b.states(), 16);
    assert_eq!(b.domain(), Sig::new(2, 2));
}

#[test]
fn compose_with_identity_keeps_behavior() {
    let t = catalog::fig3_left();
    let ti = compose(&t, &Diagram::identity(1, 2)).unwrap();
    for len in 0..=6 {
        for x in all_words(2, len) {
            assert_eq!(simulate(&ti, 0, &x).1, simulate(&t, 0, &x).1);
        }
    }
}

/// fig3_left with a fifth state copying `b` (state 2), entered from `c`.
fn fig3_with_duplicate() -> Diagram {
    let t = catalog::fig3_left();
    let sig = t.domain();
    Diagram::from_fn(sig, sig, 5, |q, g| {
        let src = if q == 4 { 2 } else { q };
        let (mut next, o) = t.step_idx(src, g);
        if q == 3 && g.letter == 0 {
            next = 4;
        }
        (next, o.clone())
    })
    .unwrap()
}

#[test]
fn minimize_merges_duplicates() {
    let d = fig3_with_duplicate();
    let (m, map) = minimize(&d);
    assert_eq!(m.states(), 4);
    assert_eq!(map[4], map[2]);
    let (again, remap) = minimize(&m);
    assert_eq!(again, m);
    assert_eq!(remap, (0..4).collect::<Vec<_>>());
    for q in 0..5 {
        for len in 0..=6 {
            for x in all_words(2, len) {
                assert_eq!(simulate(&m, map[q], &x).1, simulate(&d, q, &x).1);
            }
        }
    }
}

#[test]
fn image_examples() {
    assert!(image(&Diagram::identity(2, 2), 0, DEFAULT_IMAGE_CAP).unwrap().is_full());
    assert!(image(&catalog::fig3_left(), 0, DEFAULT_IMAGE_CAP).unwrap().is_full());
    assert!(image(&catalog::fig2_forward(3).unwrap(), 0, DEFAULT_IMAGE_CAP).unwrap().is_full());
}

#[test]
fn image_of_a_non_clopen_map_hits_the_cap() {
    // 0 ↦ 0, 1 ↦ 10: the image is the set of sequences avoiding 11, closed but not open.
    let sig = Sig::new(1, 2);
    let d = Diagram::from_fn(sig, sig, 1, |_, g| (0, if g.letter == 0 { b("0") } else { b("10") })).unwrap();
    assert!(matches!(image(&d, 0, 16), Err(Error::CapExceeded(16))));
}

#[test]
fn complete_response_examples() {
    let t = catalog::fig3_left();
    assert_eq!(complete_response(&t).unwrap(), t);
    // The image of state 0 is the cone 1𝔠.
    let sig = Sig::new(1, 2);
    // State 0 prefixes its first output with 1 and hands over to the identity state 1.
    let shifted = Diagram::from_fn(sig, sig, 2, |q, g| {
        let out = if q == 0 { vec![1, g.letter] } else { vec![g.letter] };
        (1, w1(2, &out))
    })
    .unwrap();
    let cr = complete_response(&shifted).unwrap();
    for len in 0..=6 {
        for x in all_words(2, len) {
            let (_, before) = simulate(&shifted, 0, &x);
            let (_, after) = simulate(&cr, 0, &x);
            let (_, later) = simulate(&shifted, 0, &[x.clone(), vec![0]].concat());
            assert!(is_prefix(before.get(1..).unwrap_or(&[]), &after));
            assert!(is_prefix(&after, &later[1..]));
        }
    }
    assert!(lcp(image(&cr, 0, DEFAULT_IMAGE_CAP).unwrap().cones()).unwrap().is_empty());
}

#[test]
fn injectivity_examples() {
    assert_eq!(injectivity(&Diagram::identity(2, 2), 0, None), Injectivity::Yes);
    let sig = Sig::new(1, 2);
    let constant = Diagram::from_fn(sig, sig, 1, |_, _| (0, b("0"))).unwrap();
    assert!(matches!(injectivity(&constant, 0, None), Injectivity::No { .. }));
    assert_eq!(injectivity(&catalog::fig3_left(), 0, None), Injectivity::Yes);
}

#[test]
fn synchronization_examples() {
    assert_eq!(synchronizing_level(&Diagram::identity(1, 2)).unwrap(), 0);
    assert_eq!(synchronizing_level(&catalog::fig3_left()).unwrap(), 3);
    let sig = Sig::new(1, 2);
    let swapper = Diagram::from_fn(sig, sig, 2, |q, g| (if g.letter == 0 { 1 - q } else { q }, sig.generator(g))).unwrap();
    assert_eq!(synchronizing_level(&swapper), Err(Error::NotSynchronizing));
}

#[test]
fn core_examples() {
    let (c, states) = core(&catalog::fig3_left()).unwrap();
    assert_eq!((c.states(), states), (4, vec![0, 1, 2, 3]));
    let sig = Sig::new(1, 2);
    let garbage = Diagram::from_fn(sig, sig, 2, |_, g| (0, sig.generator(g))).unwrap();
    let (c, states) = core(&garbage).unwrap();
    assert_eq!(states, vec![0]);
    assert_eq!(c, Diagram::identity(1, 2));
}

#[test]
fn strong_iso_examples() {
    let t = catalog::fig3_left();
    assert_eq!(strong_iso(&t, &t).unwrap(), Some(vec![0, 1, 2, 3]));
    let perm = vec![2, 0, 3, 1];
    assert_eq!(strong_iso(&t, &t.relabel(&perm)).unwrap(), Some(perm));
    assert_eq!(strong_iso(&t, &Diagram::identity(1, 2)).unwrap(), None);
}

#[test]
fn minimal_machine_examples() {
    let (m, _) = minimal_for_homeomorphism(&Diagram::identity(1, 2), &idx(0), 100).unwrap();
    assert_eq!(m, Diagram::identity(1, 2));
    // Swap the halves 0𝔠 and 1𝔠: one state flips the first letter, then the identity.
    let h = PrefixExchange::new(
        validate_prefix_code(vec![b("0"), b("1")]).unwrap(),
        validate_prefix_code(vec![b("1"), b("0")]).unwrap(),
    )
    .unwrap();
    let e = StateKey::Word(WordD::empty(1, 2));
    let lazy = machine_of(&h);
    // The exchange machine keys its states by the words read, so its finite
    // quotient is written out by hand and checked against it.
    let sig = Sig::new(1, 2);
    let flip_once = Diagram::from_fn(sig, sig, 2, |q, g| (1, w1(2, &[if q == 0 { 1 - g.letter } else { g.letter }]))).unwrap();
    let (m, base) = minimal_for_homeomorphism(&flip_once, &idx(0), 100).unwrap();
    assert_eq!(m.states(), 2);
    for len in 1..=6 {
        for x in all_words(2, len) {
            let lazy_out = run(lazy.as_ref(), &e, &w1(2, &x)).unwrap().1;
            assert_eq!(simulate(&m, base, &x).1, lazy_out.coord(0));
        }
    }
    let baker = bakers();
    let e2 = StateKey::Word(WordD::empty(2, 2));
    assert_eq!(minimal_for_homeomorphism(baker.as_ref(), &e2, 10).unwrap_err(), Error::BoundExceeded(10));
}

#[test]
fn lower_bound_examples() {
    assert_eq!(distinct_states_lower_bound(&Diagram::identity(1, 2), &idx(0), 5), 1);
    let e2 = StateKey::Word(WordD::empty(2, 2));
    assert!(distinct_states_lower_bound(bakers().as_ref(), &e2, 4) >= 5);
    assert_eq!(distinct_states_lower_bound(&catalog::fig3_left(), &idx(0), 6), 4);
}

#[test]
fn image_signature_recursion_on_ternary_cores() {
    for c in ternary_cores() {
        let d = c.diagram();
        for q in 0..d.states() {
            let whole = image(d, q, DEFAULT_IMAGE_CAP).unwrap().ssig();
            let parts: u64 = (0..3u8).map(|x| image(d, d.trans(q, gen(0, x)), DEFAULT_IMAGE_CAP).unwrap().ssig()).sum();
            assert_eq!(whole, parts % 2, "{d:?}");
        }
    }
}

fn ternary_cores() -> &'static [dvn::outer::CoreElement] {
    static CORES: std::sync::OnceLock<Vec<dvn::outer::CoreElement>> = std::sync::OnceLock::new();
    CORES.get_or_init(|| enumerate_core_elements(1, 3, 2, 2).unwrap())
}

/// Random coherent two-dimensional machines: products of one-dimensional tables.
fn diagram_2d() -> impl Strategy<Value = Diagram> {
    (diagram_1d(3, 2), diagram_1d(3, 2)).prop_map(|(a, b)| product(&[a, b]).unwrap())
}

fn pair_word() -> impl Strategy<Value = WordD> {
    (letters(2, 4), letters(2, 4)).prop_map(|(a, b)| WordD::new(2, vec![a, b]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 150, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn transducer_law(d in diagram_2d(), s in pair_word(), t in pair_word()) {
        for q in 0..d.states() {
            let (p, os) = d.run_idx(q, &s).unwrap();
            let (r, ot) = d.run_idx(p, &t).unwrap();
            let (r2, ost) = d.run_idx(q, &s.concat(&t).unwrap()).unwrap();
            prop_assert_eq!(r, r2);
            prop_assert_eq!(os.concat(&ot).unwrap(), ost);
        }
    }

    #[test]
    fn interleaved_order_agrees(d in diagram_2d(), s in pair_word()) {
        // Alternate coordinates instead of reading coordinate 0 first.
        let (a, b) = (s.coord(0), s.coord(1));
        for q in 0..d.states() {
            let mut state = q;
            let mut out = d.range().empty();
            for i in 0..a.len().max(b.len()) {
                for (c, word) in [(1, b), (0, a)] {
                    if let Some(&x) = word.get(i) {
                        let (t, o) = d.step_idx(state, gen(c, x));
                        out = out.concat(o).unwrap();
                        state = t;
                    }
                }
            }
            prop_assert_eq!(d.run_idx(q, &s).unwrap(), (state, out));
        }
    }

    #[test]
    fn composite_output_converges(a in diagram_1d(3, 2), bm in diagram_1d(3, 2), x in letters(2, 6)) {
        let ab = compose(&a, &bm).unwrap();
        for p in 0..a.states() {
            for q in 0..bm.states() {
                let direct = simulate(&ab, p * bm.states() + q, &x).1;
                let staged = simulate(&bm, q, &simulate(&a, p, &x).1).1;
                prop_assert_eq!(direct, staged);
            }
        }
    }

    #[test]
    fn minimize_is_a_strong_quotient(d in diagram_1d(5, 2)) {
        let (m, map) = minimize(&d);
        for q in 0..d.states() {
            for x in 0..2u8 {
                let (t, o) = d.step_idx(q, gen(0, x));
                let (mt, mo) = m.step_idx(map[q], gen(0, x));
                prop_assert_eq!(mt, map[t]);
                prop_assert_eq!(mo, o);
            }
        }
        // Distinct states of the quotient differ on some probe of length at most 8.
        for p in 0..m.states() {
            for q in p + 1..m.states() {
                let differ = (0..=8).any(|len| all_words(2, len).iter().any(|x| simulate(&m, p, x).1 != simulate(&m, q, x).1));
                prop_assert!(differ, "states {} and {} agree to depth 8", p, q);
            }
        }
        prop_assert_eq!(minimize(&m).0, m);
    }

    #[test]
    fn complete_response_empties_image_prefixes(d in homeo_1d()) {
        let cr = complete_response(&d).unwrap();
        for q in 0..cr.states() {
            let img = image(&cr, q, DEFAULT_IMAGE_CAP).unwrap();
            prop_assert!(lcp(img.cones()).unwrap().is_empty());
        }
        prop_assert_eq!(complete_response(&cr).unwrap(), cr);
    }

    #[test]
    fn core_is_idempotent_and_strongly_connected(d in diagram_1d(5, 2)) {
        if let Ok((c, _)) = core(&d) {
            prop_assert!(is_strongly_connected(&c));
            let (cc, states) = core(&c).unwrap();
            prop_assert_eq!(states.len(), c.states());
            prop_assert!(strong_iso(&cc, &c).unwrap().is_some());
        }
    }

    #[test]
    fn core_of_composite_sits_in_composite_of_cores(a in diagram_1d(3, 2), bm in diagram_1d(3, 2)) {
        let (Ok(ca), Ok(cb)) = (core_states(&a), core_states(&bm)) else { return Ok(()) };
        let ab = compose(&a, &bm).unwrap();
        if let Ok(cab) = core_states(&ab) {
            for s in cab {
                let (p, q) = (s / bm.states(), s % bm.states());
                prop_assert!(ca.contains(&p) && cb.contains(&q));
            }
        }
    }

    #[test]
    fn synchronizing_level_is_least(d in diagram_1d(4, 2)) {
        if let Ok(k) = synchronizing_level(&d) {
            let collapses = |k: usize| {
                square_words(1, 2, k).iter().all(|u| {
                    let ends: Vec<usize> = (0..d.states()).map(|q| d.run_idx(q, u).unwrap().0).collect();
                    ends.iter().all(|&e| e == ends[0])
                })
            };
            prop_assert!(collapses(k));
            prop_assert!(k == 0 || !collapses(k - 1));
        }
    }

    #[test]
    fn strong_iso_recovers_relabelings(i in 0usize..96, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let c = ternary_cores()[i % ternary_cores().len()].diagram().clone();
        let mut perm: Vec<usize> = (0..c.states()).collect();
        perm.shuffle(&mut rng(seed));
        let r = c.relabel(&perm);
        let there = strong_iso(&c, &r).unwrap().unwrap();
        let back = strong_iso(&r, &c).unwrap().unwrap();
        for q in 0..c.states() {
            prop_assert_eq!(back[there[q]], q);
        }
    }
}
