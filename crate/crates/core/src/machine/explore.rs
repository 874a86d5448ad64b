use std::collections::{HashMap, HashSet};

use super::{complete_response, minimize, Diagram, Generator, Machine, StateKey};
use crate::error::{Error, Result};
use crate::words::WordD;

/// Breadth-first exploration of the states reachable from `start`, in
/// generator order. Produces a finite diagram whose state `i` is `keys[i]`;
/// state 0 is `start`. Fails with `BoundExceeded` past `bound` states.
pub fn explore(m: &dyn Machine, start: &StateKey, bound: usize) -> Result<(Diagram, Vec<StateKey>)> {
    let dom = m.domain();
    let mut index: HashMap<StateKey, usize> = HashMap::from([(start.clone(), 0)]);
    let mut keys = vec![start.clone()];
    let mut trans = Vec::new();
    let mut out = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let q = keys[i].clone();
        for gi in 0..dom.gens() {
            let (t, o) = m.step(&q, dom.generator_at(gi));
            let next = match index.get(&t) {
                Some(&j) => j,
                None => {
                    if keys.len() >= bound {
                        return Err(Error::BoundExceeded(bound));
                    }
                    index.insert(t.clone(), keys.len());
                    keys.push(t);
                    keys.len() - 1
                }
            };
            trans.push(next);
            out.push(o);
        }
        i += 1;
    }
    Ok((Diagram::new(dom, m.range(), trans, out)?, keys))
}

/// The minimal transducer of `f_{M,q}`: reachable part from `q`, then complete
/// response, then minimization. Returns the diagram and its base state.
/// `f_{M,q}` must be a homeomorphism; lazy machines whose minimal transducer is
/// infinite fail with `BoundExceeded`.
pub fn minimal_for_homeomorphism(m: &dyn Machine, q: &StateKey, bound: usize) -> Result<(Diagram, usize)> {
    let (reach, _) = explore(m, q, bound)?;
    let cr = complete_response(&reach)?;
    let (min, map) = minimize(&cr);
    Ok((min, map[0]))
}

/// Every state `π(q,w)` with each coordinate of `w` at most `depth` long, deduplicated by key.
fn reached_states(m: &dyn Machine, q: &StateKey, depth: usize) -> Vec<StateKey> {
    let dom = m.domain();
    let mut current: Vec<StateKey> = vec![q.clone()];
    for coord in 0..dom.dims {
        let mut seen: HashSet<StateKey> = current.iter().cloned().collect();
        let mut frontier = current.clone();
        for _ in 0..depth {
            let mut next = Vec::new();
            for p in &frontier {
                for x in 0..dom.alphabet as u8 {
                    let (t, _) = m.step(p, Generator::new(coord, x));
                    next.push(t);
                }
            }
            // A key first met at a shorter depth already has all its
            // extensions within the bound listed.
            next.retain(|t| seen.insert(t.clone()));
            frontier = next;
            current.extend(frontier.iter().cloned());
        }
    }
    current
}

/// Outputs on every generator sequence of length at most 2; states with
/// different signatures are distinguished by a probe of length at most 2.
fn signature(m: &dyn Machine, q: &StateKey) -> Vec<WordD> {
    let dom = m.domain();
    let mut sig = Vec::new();
    for gi in 0..dom.gens() {
        let (t, o) = m.step(q, dom.generator_at(gi));
        sig.push(o.clone());
        for gj in 0..dom.gens() {
            let (_, o2) = m.step(&t, dom.generator_at(gj));
            sig.push(o.cat(&o2));
        }
    }
    sig
}

const PAIR_BUDGET: usize = 256;
/// Total pairs the distinguishing searches of one call may visit.
const SEARCH_BUDGET: usize = 200_000;

/// Searches for a generator sequence of length at most `probe_len` on which the
/// two states emit different outputs. `false` means no witness was found
/// within the length or the pair budget.
fn distinguishable(m: &dyn Machine, a: &StateKey, b: &StateKey, probe_len: usize, spent: &mut usize) -> bool {
    let dom = m.domain();
    let mut seen: HashSet<(StateKey, StateKey)> = HashSet::from([(a.clone(), b.clone())]);
    let mut level = vec![(a.clone(), b.clone())];
    for _ in 0..probe_len {
        let mut next = Vec::new();
        for (p, q) in &level {
            for gi in 0..dom.gens() {
                let g = dom.generator_at(gi);
                let (pt, po) = m.step(p, g);
                let (qt, qo) = m.step(q, g);
                if po != qo {
                    return true;
                }
                if pt != qt && seen.insert((pt.clone(), qt.clone())) {
                    *spent += 1;
                    if seen.len() > PAIR_BUDGET || *spent > SEARCH_BUDGET {
                        return false;
                    }
                    next.push((pt, qt));
                }
            }
        }
        level = next;
    }
    false
}

/// A rigorous lower bound on the number of behaviorally distinct states among
/// `{π(q,w) : every coordinate of w has length ≤ depth}`.
///
/// States are bucketed by their outputs on probes of length ≤ 2; inside a
/// bucket a greedy set of representatives is kept, each separated from the
/// others by an explicit probe of length ≤ `depth + 4`. Every counted pair is
/// thus witnessed, so the count never exceeds the true number. The searches
/// share a fixed work budget; once it is spent, only signatures separate
/// states.
pub fn distinct_states_lower_bound(m: &dyn Machine, q: &StateKey, depth: usize) -> usize {
    let states = reached_states(m, q, depth);
    let mut buckets: HashMap<Vec<WordD>, Vec<StateKey>> = HashMap::new();
    let mut spent = 0;
    for s in states {
        let entry = buckets.entry(signature(m, &s)).or_default();
        if entry.iter().all(|r| distinguishable(m, r, &s, depth + 4, &mut spent)) {
            entry.push(s);
        }
    }
    buckets.values().map(Vec::len).sum()
}
