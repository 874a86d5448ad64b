mod common;

use common::*;
use dvn::catalog::{self, CatalogObject};
use dvn::homeo::{inverse_digit_pairing_d, Applied};
use dvn::machine::{compose, compose_handles, core_states, is_nondegenerate, run, synchronizing_level, StateKey};
use dvn::words::{refinement_irreducible, validate_prefix_code, WordD};

fn out1(d: &dvn::machine::Diagram, input: &[u8]) -> Vec<u8> {
    simulate(d, 0, input).1
}

#[test]
fn every_entry_resolves_and_finite_ones_are_non_degenerate() {
    assert_eq!(catalog::entries().len(), catalog::names().len());
    for e in catalog::entries() {
        assert!(!e.note.is_empty(), "{} has no note", e.name);
        match e.object {
            CatalogObject::Diagram(d) => assert!(is_nondegenerate(&d), "{} is degenerate", e.name),
            CatalogObject::Code(c) => assert!(validate_prefix_code(c.members().to_vec()).is_ok()),
            CatalogObject::Exchange(h) => assert!(dvn::homeo::is_dvn_member_exchange(&h)),
            CatalogObject::Machine(_) => {}
        }
    }
    assert!(catalog::get("no_such_entry").is_none());
    assert!(catalog::get("fig2_forward_5").is_some());
    assert!(catalog::get("fig2_forward_x").is_none());
}

#[test]
fn block_swap_examples() {
    let d = catalog::fig3_left();
    assert_eq!(out1(&d, &[0, 0, 1]), [0, 1]);
    assert_eq!(out1(&d, &[0, 1]), [0, 0, 1]);
    assert_eq!(out1(&d, &[0, 0, 0, 1]), [0, 0, 0, 1]);
    assert_eq!(out1(&d, &[1, 1]), [1, 1]);
    assert_eq!(synchronizing_level(&d).unwrap(), 3);
    assert_eq!(core_states(&d).unwrap().len(), 4);
}

#[test]
fn splitter_letters() {
    let t = catalog::fig5_t();
    let expect = [[0, 0], [0, 1], [1, 0], [1, 1]];
    for (x, e) in expect.iter().enumerate() {
        let o = t.out(0, gen(0, x as u8));
        assert_eq!((o.coord(0), o.coord(1)), (&e[..1], &e[1..]));
    }
}

#[test]
fn product_of_block_swaps_has_sixteen_states() {
    let b = catalog::fig4_b();
    assert_eq!(b.states(), 16);
    let x = WordD::new(2, vec![vec![0, 1], vec![0, 0, 1]]).unwrap();
    let y = run(&b, &StateKey::Index(0), &x).unwrap().1;
    assert_eq!(y, WordD::new(2, vec![vec![0, 0, 1], vec![0, 1]]).unwrap());
}

#[test]
fn zero_counter_examples() {
    for n in 4..=6 {
        let f = catalog::fig2_forward(n).unwrap();
        assert_eq!(out1(&f, &[0, 0, 1]), [2]);
        assert_eq!(out1(&f, &[1]), [0]);
        assert_eq!(out1(&f, &vec![0; n - 1]), [(n - 1) as u8]);
    }
    // Three letters: two zeros already fill the last letter.
    assert_eq!(out1(&catalog::fig2_forward(3).unwrap(), &[0, 0]), [2]);
    assert!(catalog::fig2_forward(2).is_err());
}

#[test]
fn recodings_are_mutually_inverse() {
    for n in 3..=5 {
        let fwd = catalog::fig2_forward(n).unwrap();
        let bwd = catalog::fig2_backward(n).unwrap();
        let there_and_back = compose(&bwd, &fwd).unwrap();
        for len in 0..=4 {
            for x in all_words(n, len) {
                assert_eq!(out1(&there_and_back, &x), x);
            }
        }
    }
}

#[test]
fn scary_code_is_irreducible() {
    let c = catalog::scary_code();
    assert_eq!(c.len(), 5);
    assert!(is_complete_code(c.members(), 2));
    assert!(refinement_irreducible(&c));
}

#[test]
fn baker_exchange_applies() {
    let Some(CatalogObject::Exchange(h)) = catalog::get("baker_exchange").map(|e| e.object) else {
        panic!("baker_exchange is an exchange")
    };
    let x = WordD::parse("(10,)", 2).unwrap();
    assert_eq!(h.apply(&x), Applied::Word(WordD::parse("(0,1)", 2).unwrap()));
}

#[test]
fn baker_then_block_swaps_on_zero_pairs() {
    // (02)^n splits to ((01)^n, (00)^n); the block swaps and pairing yield (002)^{2n/3}.
    let tb = compose(&catalog::fig5_t(), &catalog::fig4_b()).unwrap();
    let m = compose_handles(tb.handle(), inverse_digit_pairing_d()).unwrap();
    let base = StateKey::Tuple(vec![StateKey::Index(0), StateKey::Word(WordD::empty(2, 2))]);
    for n in [3, 6] {
        let out = run(m.as_ref(), &base, &w1(4, &[0, 2].repeat(n))).unwrap().1;
        assert_eq!(out.coord(0), [0, 0, 2].repeat(2 * n / 3).as_slice());
    }
}
