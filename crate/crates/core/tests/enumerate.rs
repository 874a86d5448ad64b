mod common;

use std::collections::HashSet;

use common::*;
use dvn::catalog;
use dvn::enumerate::{census, enumerate, representative, EnumerationSpec, Stage};
use dvn::machine::{strong_iso, Diagram, Sig};
use dvn::Error;
use rand::Rng;

/// Words over `n` letters of length at most `cap`.
fn short_words(n: usize, cap: usize) -> Vec<Vec<u8>> {
    (0..=cap).flat_map(|len| all_words(n, len)).collect()
}

fn cat(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    a.iter().zip(b).map(|(x, y)| [x.clone(), y.clone()].concat()).collect()
}

/// Number of coherent one-state `(2,2)` tables with outputs of length at most
/// `cap` per coordinate: generators of different coordinates must commute.
fn coherent_one_state_2d(cap: usize) -> usize {
    let one = short_words(2, cap);
    let outs: Vec<Vec<Vec<u8>>> =
        one.iter().flat_map(|a| one.iter().map(move |b| vec![a.clone(), b.clone()])).collect();
    let mut count = 0;
    for x0 in &outs {
        for x1 in &outs {
            for y0 in &outs {
                for y1 in &outs {
                    let ok = [x0, x1].iter().all(|x| [y0, y1].iter().all(|y| cat(x, y) == cat(y, x)));
                    count += ok as usize;
                }
            }
        }
    }
    count
}

/// A table as plain data: transitions then outputs, for orbit counting.
type Raw = (Vec<usize>, Vec<Vec<u8>>);

/// Number of one-dimensional tables with at most two states up to renaming
/// states, by brute force over both labelings.
fn classes_up_to_two_states(n: usize, cap: usize) -> usize {
    let words = short_words(n, cap);
    let mut seen: HashSet<Raw> = HashSet::new();
    for s in 1..=2usize {
        let cells = s * n;
        let total = (s * words.len()).pow(cells as u32);
        for mut code in 0..total {
            let mut trans = Vec::with_capacity(cells);
            let mut out = Vec::with_capacity(cells);
            for _ in 0..cells {
                let c = code % (s * words.len());
                code /= s * words.len();
                trans.push(c / words.len());
                out.push(words[c % words.len()].clone());
            }
            let swapped: Raw = if s == 2 {
                let mut t = Vec::with_capacity(cells);
                let mut o = Vec::with_capacity(cells);
                for q in [1, 0] {
                    for x in 0..n {
                        t.push(1 - trans[q * n + x]);
                        o.push(out[q * n + x].clone());
                    }
                }
                (t, o)
            } else {
                (trans.clone(), out.clone())
            };
            let raw: Raw = (trans, out);
            seen.insert(raw.min(swapped));
        }
    }
    seen.len()
}

/// Strong isomorphism by trying every state bijection.
fn isomorphic(a: &Diagram, b: &Diagram) -> bool {
    if a.states() != b.states() || a.domain() != b.domain() {
        return false;
    }
    let g = a.domain().gens();
    let s = a.states();
    let perms: Vec<Vec<usize>> = match s {
        1 => vec![vec![0]],
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => panic!("the oracle handles at most two states"),
    };
    perms.iter().any(|p| {
        (0..s * g).all(|i| {
            let (q, x) = (i / g, i % g);
            let j = p[q] * g + x;
            p[a.trans_table()[i]] == b.trans_table()[j] && a.out_table()[i] == b.out_table()[j]
        })
    })
}

#[test]
fn one_state_letter_maps() {
    let spec = EnumerationSpec::new(1, 2, 1).with_cap(1).with_filters(&[Stage::NonDegenerate]);
    // Letter maps into {0, 1}: identity, flip and the two constants.
    assert_eq!(enumerate(&spec).unwrap().len(), 4);
    let injective = enumerate(&spec.with_filters(&[Stage::NonDegenerate, Stage::Injective])).unwrap();
    assert_eq!(injective.len(), 2);
    for d in [Diagram::identity(1, 2), catalog::bit_flip()] {
        assert!(injective.iter().any(|e| strong_iso(e, &d).unwrap().is_some()));
    }
}

#[test]
fn two_dimensional_one_state_count_matches_brute_force() {
    let spec = EnumerationSpec::new(2, 2, 1).with_cap(1);
    assert_eq!(enumerate(&spec).unwrap().len(), coherent_one_state_2d(1));
    assert_eq!(census(&spec).unwrap()[0], (Stage::Valid, coherent_one_state_2d(1)));
}

#[test]
fn census_matches_brute_force() {
    let rows = census(&EnumerationSpec::new(1, 2, 1).with_cap(2)).unwrap();
    // Seven outputs per letter; non-degenerate exactly when neither is empty.
    assert_eq!(rows[0], (Stage::Valid, 49));
    assert_eq!(rows[1], (Stage::NonDegenerate, 36));
    for cap in [1, 2] {
        let rows = census(&EnumerationSpec::new(1, 2, 2).with_cap(cap)).unwrap();
        assert_eq!(rows[0].1, classes_up_to_two_states(2, cap), "cap {cap}");
    }
    let rows = census(&EnumerationSpec::new(1, 3, 2).with_cap(1)).unwrap();
    assert_eq!(rows[0].1, classes_up_to_two_states(3, 1));
}

#[test]
fn census_narrows_and_repeats() {
    let spec = EnumerationSpec::new(1, 2, 2).with_cap(2);
    let rows = census(&spec).unwrap();
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), Stage::ALL.to_vec());
    assert!(rows.windows(2).all(|w| w[0].1 >= w[1].1), "{rows:?}");
    assert_eq!(census(&spec).unwrap(), rows);
    // Identity and bit flip are the invertible ones.
    assert_eq!(rows[7], (Stage::Invertible, 2));
}

#[test]
fn representatives_are_pairwise_distinct() {
    let reps = enumerate(&EnumerationSpec::new(1, 2, 2).with_cap(1)).unwrap();
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            assert!(!isomorphic(a, b), "{a:?} ~ {b:?}");
        }
    }
}

#[test]
fn every_sampled_table_has_its_representative() {
    let reps = enumerate(&EnumerationSpec::new(1, 2, 2).with_cap(1)).unwrap();
    let mut r = rng(5);
    let sig = Sig::new(1, 2);
    for _ in 0..200 {
        let s = r.gen_range(1..=2);
        let d = Diagram::from_fn(sig, sig, s, |_, _| {
            let len = r.gen_range(0..=1);
            (r.gen_range(0..s), w1(2, &(0..len).map(|_| r.gen_range(0..2)).collect::<Vec<u8>>()))
        })
        .unwrap();
        assert!(reps.iter().any(|e| isomorphic(e, &d)), "{d:?} missing");
        assert!(reps.contains(&representative(&d)));
    }
}

#[test]
fn enumeration_is_deterministic() {
    let spec = EnumerationSpec::core_elements(1, 3, 2).with_cap(1);
    assert_eq!(enumerate(&spec).unwrap(), enumerate(&spec).unwrap());
}

#[test]
fn units_with_four_states_include_the_block_swap() {
    let spec = EnumerationSpec::core_elements(1, 2, 4).with_filters(&Stage::ALL[1..]);
    let units = enumerate(&spec).unwrap();
    assert!(units.contains(canon_fig3().diagram()));
    assert!(units.contains(&Diagram::identity(1, 2)));
    assert!(units.contains(&catalog::bit_flip()));
}

#[test]
fn core_elements_are_canonical() {
    for d in enumerate(&EnumerationSpec::core_elements(1, 2, 3).with_cap(2)).unwrap() {
        assert_eq!(dvn::outer::canonicalize(&d).unwrap().diagram(), &d);
    }
}

#[test]
fn oversized_specs_are_refused() {
    let spec = EnumerationSpec::new(2, 3, 4).with_budget(1_000);
    assert!(matches!(enumerate(&spec), Err(Error::SpecTooLarge { .. })));
    assert!(matches!(census(&spec), Err(Error::SpecTooLarge { .. })));
    assert!(matches!(enumerate(&EnumerationSpec::new(1, 1, 1)), Err(Error::BadSignature(_))));
}

#[test]
fn stage_names_round_trip() {
    for s in Stage::ALL {
        assert_eq!(Stage::parse(s.name()).unwrap(), s);
    }
    assert!(Stage::parse("wellfounded").is_err());
}
