use std::collections::HashMap;

use super::Diagram;
use crate::words::WordD;

/// Moore partition refinement.
///
/// States start grouped by their generator-output profile and are split until
/// class-equal states have class-equal successors on every generator. Returns
/// the quotient and the map from old states to classes, with classes numbered
/// by first occurrence.
pub fn minimize(d: &Diagram) -> (Diagram, Vec<usize>) {
    let g = d.domain().gens();
    let states = d.states();
    let mut class = first_occurrence(|q| d.out_table()[q * g..(q + 1) * g].to_vec(), states);
    loop {
        let next = first_occurrence(
            |q| {
                let succ: Vec<usize> = (0..g).map(|gi| class[d.trans_table()[q * g + gi]]).collect();
                (class[q], succ)
            },
            states,
        );
        let stable = next.iter().max() == class.iter().max();
        class = next;
        if stable {
            break;
        }
    }
    let classes = class.iter().max().map_or(0, |m| m + 1);
    let mut rep = vec![usize::MAX; classes];
    for q in (0..states).rev() {
        rep[class[q]] = q;
    }
    let mut trans = Vec::with_capacity(classes * g);
    let mut out: Vec<WordD> = Vec::with_capacity(classes * g);
    for &r in &rep {
        for gi in 0..g {
            trans.push(class[d.trans_table()[r * g + gi]]);
            out.push(d.out_table()[r * g + gi].clone());
        }
    }
    (Diagram::from_tables_unchecked(d.domain(), d.range(), trans, out), class)
}

fn first_occurrence<K: std::hash::Hash + Eq, F: Fn(usize) -> K>(key: F, states: usize) -> Vec<usize> {
    let mut seen: HashMap<K, usize> = HashMap::new();
    (0..states)
        .map(|q| {
            let next = seen.len();
            *seen.entry(key(q)).or_insert(next)
        })
        .collect()
}
