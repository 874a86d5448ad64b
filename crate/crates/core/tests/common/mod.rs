//! Strategies, fixtures and independent oracles shared by the test targets.
#![allow(dead_code)]

use dvn::catalog;
use dvn::machine::{compose, Diagram, Generator, Sig};
use dvn::outer::{canonicalize, recompose, CoreElement};
use dvn::words::WordD;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A reproducible runner: fixed ChaCha seed, `cases` cases.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn w1(n: usize, letters: &[u8]) -> WordD {
    WordD::single(n, letters)
}

/// Arbitrary one-dimensional `(1,n,1,n)` tables: up to `max_states` states,
/// outputs of length at most 2.
pub fn diagram_1d(max_states: usize, n: usize) -> impl Strategy<Value = Diagram> {
    (1..=max_states).prop_flat_map(move |s| {
        (
            prop::collection::vec(0..s, s * n),
            prop::collection::vec(prop::collection::vec(0..n as u8, 0..=2), s * n),
        )
            .prop_map(move |(trans, outs)| {
                let sig = Sig::new(1, n);
                let out = outs.into_iter().map(|o| w1(n, &o)).collect();
                Diagram::new(sig, sig, trans, out).expect("one-dimensional tables are always coherent")
            })
    })
}

/// A one-state-or-more machine whose every state permutes the letters: a
/// homeomorphism with full images at every state.
pub fn letter_permuter(max_states: usize) -> impl Strategy<Value = Diagram> {
    (1..=max_states).prop_flat_map(|s| {
        (prop::collection::vec(0..s, s * 2), prop::collection::vec(any::<bool>(), s)).prop_map(move |(trans, flips)| {
            let sig = Sig::new(1, 2);
            Diagram::from_fn(sig, sig, s, |q, g| {
                (trans[q * 2 + g.letter as usize], w1(2, &[g.letter ^ flips[q] as u8]))
            })
            .unwrap()
        })
    })
}

/// Composites of letter permuters and the `0 ↔ 00` swap: homeomorphisms of
/// `C_2` whose machines are usually not in complete response.
pub fn homeo_1d() -> impl Strategy<Value = Diagram> {
    let factor = prop_oneof![letter_permuter(3), Just(catalog::fig3_left())];
    prop::collection::vec(factor, 1..=3).prop_map(|fs| {
        fs.into_iter().reduce(|a, b| compose(&a, &b).unwrap()).unwrap()
    })
}

pub fn letters(n: usize, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..n as u8, 0..=max_len)
}

/// Every word of length exactly `len` over `n` letters.
pub fn all_words(n: usize, len: usize) -> Vec<Vec<u8>> {
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| (0..n as u8).map(move |x| [w.clone(), vec![x]].concat()))
            .collect();
    }
    words
}

/// Direct simulation of a one-dimensional table, independent of the library's runner.
pub fn simulate(d: &Diagram, q: usize, input: &[u8]) -> (usize, Vec<u8>) {
    let g = d.domain().gens();
    let n = d.domain().alphabet;
    assert_eq!(g, n, "simulate handles one-dimensional machines");
    let mut state = q;
    let mut out = Vec::new();
    for &x in input {
        let i = state * g + x as usize;
        out.extend_from_slice(d.out_table()[i].coord(0));
        state = d.trans_table()[i];
    }
    (state, out)
}

pub fn is_prefix(p: &[u8], w: &[u8]) -> bool {
    p.len() <= w.len() && &w[..p.len()] == p
}

/// Cones of `u` and `v` meet iff in every coordinate one word extends the other.
pub fn compatible(u: &WordD, v: &WordD) -> bool {
    (0..u.dims()).all(|i| {
        let (a, b) = (u.coord(i), v.coord(i));
        is_prefix(a, b) || is_prefix(b, a)
    })
}

/// Complete prefix code test by exact Kraft equality plus pairwise disjointness.
pub fn is_complete_code(members: &[WordD], n: usize) -> bool {
    let depth = members.iter().map(WordD::total_len).max().unwrap_or(0) as u32;
    let total: u128 = members.iter().map(|w| (n as u128).pow(depth - w.total_len() as u32)).sum();
    let disjoint = members.iter().enumerate().all(|(i, u)| members[i + 1..].iter().all(|v| !compatible(u, v)));
    disjoint && total == (n as u128).pow(depth)
}

pub fn canon_fig3() -> CoreElement {
    canonicalize(&catalog::fig3_left()).unwrap()
}

/// The one-dimensional binary cores in the catalog: identity, the block swap, the bit flip.
pub fn binary_cores() -> Vec<CoreElement> {
    vec![CoreElement::identity(1, 2), canon_fig3(), canonicalize(&catalog::bit_flip()).unwrap()]
}

/// Two-dimensional binary cores built from the catalog: products of the
/// one-dimensional cores and the coordinate swap.
pub fn binary_cores_2d() -> Vec<CoreElement> {
    let cores = binary_cores();
    let mut out = vec![catalog::perm_cores(2, 2)[1].1.clone()];
    for a in &cores {
        for b in &cores {
            out.push(recompose(&[a.clone(), b.clone()]).unwrap());
        }
    }
    out
}

pub fn gen(coord: usize, letter: u8) -> Generator {
    Generator::new(coord, letter)
}
