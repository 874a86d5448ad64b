use std::collections::{HashSet, VecDeque};

use super::Diagram;
use crate::error::{Error, Result};
use crate::words::WordD;

type Family = Vec<Vec<usize>>;

/// Level-by-level evolution of the family of state sets reached from all of
/// `Q` by square words. Returns the least level at which every member is a
/// singleton, together with those singletons (the core states, sorted).
fn evolve(d: &Diagram) -> Result<(usize, Vec<usize>)> {
    let (trans, _) = d.square_tables();
    let s = d.domain().square_letters();
    let mut family: Family = vec![(0..d.states()).collect()];
    let mut seen: HashSet<Family> = HashSet::new();
    for level in 0.. {
        if family.iter().all(|set| set.len() == 1) {
            let mut core: Vec<usize> = family.iter().map(|set| set[0]).collect();
            core.sort_unstable();
            return Ok((level, core));
        }
        if !seen.insert(family.clone()) {
            return Err(Error::NotSynchronizing);
        }
        let mut next: HashSet<Vec<usize>> = HashSet::new();
        for set in &family {
            for u in 0..s {
                let mut img: Vec<usize> = set.iter().map(|&q| trans[q * s + u]).collect();
                img.sort_unstable();
                img.dedup();
                next.insert(img);
            }
        }
        let mut next: Family = next.into_iter().collect();
        next.sort();
        family = next;
    }
    unreachable!()
}

/// Least `k` such that every square word of level `k` sends all states to one
/// state. Fails with `NotSynchronizing` when the family sequence cycles first.
pub fn synchronizing_level(d: &Diagram) -> Result<usize> {
    evolve(d).map(|(k, _)| k)
}

/// States `𝔰(u)` for square words `u` at the synchronizing level, sorted.
pub fn core_states(d: &Diagram) -> Result<Vec<usize>> {
    evolve(d).map(|(_, c)| c)
}

/// The synchronizing map on a word with every coordinate at least the level long.
pub fn sync_map(d: &Diagram, w: &WordD) -> Result<usize> {
    let k = synchronizing_level(d)?;
    if w.min_len() < k {
        return Err(Error::Precondition(format!("{w} is shorter than the synchronizing level {k}")));
    }
    Ok(d.trans_word(0, w))
}

/// The core: the subtransducer on `𝔰((X_n^k)^d)`. Returns it with the old
/// index of each new state.
pub fn core(d: &Diagram) -> Result<(Diagram, Vec<usize>)> {
    let keep = core_states(d)?;
    Ok((d.restrict(&keep)?, keep))
}

/// States reachable from `q`, in breadth-first order over generators.
pub fn reachable(d: &Diagram, q: usize) -> Vec<usize> {
    let g = d.domain().gens();
    let mut seen = vec![false; d.states()];
    let mut order = vec![q];
    seen[q] = true;
    let mut queue = VecDeque::from([q]);
    while let Some(p) = queue.pop_front() {
        for gi in 0..g {
            let t = d.trans_table()[p * g + gi];
            if !seen[t] {
                seen[t] = true;
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    order
}

pub fn is_strongly_connected(d: &Diagram) -> bool {
    (0..d.states()).all(|q| reachable(d, q).len() == d.states())
}

/// A strong isomorphism `A → B` (state bijection commuting with transitions and
/// outputs), found by seeding state 0 of `A` at each state of `B` and propagating.
/// Both inputs must be cores: every state reachable from every other.
pub fn strong_iso(a: &Diagram, b: &Diagram) -> Result<Option<Vec<usize>>> {
    if a.domain() != b.domain() || a.range() != b.range() {
        return Ok(None);
    }
    if !is_strongly_connected(a) || !is_strongly_connected(b) {
        return Err(Error::Precondition("strong_iso needs strongly connected inputs".into()));
    }
    if a.states() != b.states() {
        return Ok(None);
    }
    let g = a.domain().gens();
    'seed: for b0 in 0..b.states() {
        let mut map = vec![usize::MAX; a.states()];
        let mut used = vec![false; b.states()];
        map[0] = b0;
        used[b0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            let q = map[p];
            for gi in 0..g {
                if a.out_table()[p * g + gi] != b.out_table()[q * g + gi] {
                    continue 'seed;
                }
                let (pt, qt) = (a.trans_table()[p * g + gi], b.trans_table()[q * g + gi]);
                if map[pt] == usize::MAX {
                    if used[qt] {
                        continue 'seed;
                    }
                    map[pt] = qt;
                    used[qt] = true;
                    queue.push_back(pt);
                } else if map[pt] != qt {
                    continue 'seed;
                }
            }
        }
        return Ok(Some(map));
    }
    Ok(None)
}
