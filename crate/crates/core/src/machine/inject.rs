use std::collections::{HashMap, VecDeque};

use super::Diagram;
use crate::words::WordD;

/// Outcome of the injectivity search for one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Injectivity {
    Yes,
    /// Two distinct inputs entering a cycle of the pair graph; repeating the
    /// cycle forever gives two different infinite inputs with the same output.
    No { left: WordD, right: WordD },
    /// An output offset outgrew the cap before the search closed.
    Unknown,
}

/// Per range coordinate, the output one run has produced beyond the other.
/// At most one side is nonempty in each coordinate.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Node {
    p1: usize,
    p2: usize,
    s1: WordD,
    s2: WordD,
}

/// Cancels the common prefix of two outputs coordinatewise; `None` when they
/// disagree outright.
fn balance(a: WordD, b: WordD) -> Option<(WordD, WordD)> {
    let n = a.alphabet();
    let mut ra = Vec::with_capacity(a.dims());
    let mut rb = Vec::with_capacity(a.dims());
    for (x, y) in a.coords().iter().zip(b.coords()) {
        if x.starts_with(y) {
            ra.push(x[y.len()..].to_vec());
            rb.push(Vec::new());
        } else if y.starts_with(x) {
            ra.push(Vec::new());
            rb.push(y[x.len()..].to_vec());
        } else {
            return None;
        }
    }
    Some((WordD::from_parts(n, ra), WordD::from_parts(n, rb)))
}

const NODE_BUDGET: usize = 400_000;

/// Decides whether `f_{D,q}` is injective by searching the pair-offset graph.
///
/// Two runs start together from any state reachable from `q`, diverge on their
/// first square letter, and then advance one square letter each per step while
/// their outputs stay prefix-compatible. A reachable cycle of bounded offsets
/// yields two distinct infinite inputs with equal images (`No`); closing the
/// search without a cycle proves injectivity (`Yes`). If some offset exceeds
/// `offset_cap`, or the search grows past an internal node budget, the answer is
/// `Unknown`. Assumes `D` is non-degenerate.
pub fn injectivity(d: &Diagram, q: usize, offset_cap: Option<usize>) -> Injectivity {
    let (trans, out) = d.square_tables();
    let s = d.domain().square_letters();
    let max_out = out.iter().flat_map(|w| w.coords().iter().map(Vec::len)).max().unwrap_or(0);
    let cap = offset_cap.unwrap_or(d.states() * d.states() * (1 + max_out));
    let letters: Vec<WordD> = (0..s).map(|u| d.domain().square_letter(u)).collect();

    // Square-word access paths to every state reachable from q.
    let mut path: Vec<Option<WordD>> = vec![None; d.states()];
    path[q] = Some(d.domain().empty());
    let mut queue = VecDeque::from([q]);
    while let Some(p) = queue.pop_front() {
        for u in 0..s {
            let t = trans[p * s + u];
            if path[t].is_none() {
                path[t] = Some(path[p].as_ref().unwrap().cat(&letters[u]));
                queue.push_back(t);
            }
        }
    }

    let empty = d.range().empty();
    // Each node records its parent and the letter pair used to reach it.
    let mut parent: HashMap<Node, (Option<Node>, usize, usize, usize)> = HashMap::new();
    let mut color: HashMap<Node, u8> = HashMap::new();
    let mut capped = false;

    let step = |node: &Node, u: usize, v: usize| -> Option<Node> {
        let o1 = node.s1.cat(&out[node.p1 * s + u]);
        let o2 = node.s2.cat(&out[node.p2 * s + v]);
        let (s1, s2) = balance(o1, o2)?;
        Some(Node { p1: trans[node.p1 * s + u], p2: trans[node.p2 * s + v], s1, s2 })
    };

    for start in 0..d.states() {
        let Some(_) = path[start] else { continue };
        let origin = Node { p1: start, p2: start, s1: empty.clone(), s2: empty.clone() };
        for u in 0..s {
            for v in 0..s {
                if u == v {
                    continue;
                }
                let Some(first) = step(&origin, u, v) else { continue };
                if color.contains_key(&first) {
                    continue;
                }
                parent.insert(first.clone(), (None, start, u, v));
                // Iterative depth-first search; 1 = on stack, 2 = finished.
                color.insert(first.clone(), 1);
                let mut stack: Vec<(Node, usize)> = vec![(first, 0)];
                while let Some((node, next_pair)) = stack.last_mut() {
                    if *next_pair == s * s {
                        color.insert(node.clone(), 2);
                        stack.pop();
                        continue;
                    }
                    let (a, b) = (*next_pair / s, *next_pair % s);
                    *next_pair += 1;
                    let node = node.clone();
                    if node.s1.max_len() > cap || node.s2.max_len() > cap {
                        capped = true;
                        continue;
                    }
                    let Some(child) = step(&node, a, b) else { continue };
                    match color.get(&child) {
                        Some(1) => {
                            let (left, right) = witness(&parent, &node, &path, &letters, a, b);
                            return Injectivity::No { left, right };
                        }
                        Some(_) => {}
                        None => {
                            if color.len() > NODE_BUDGET {
                                return Injectivity::Unknown;
                            }
                            parent.insert(child.clone(), (Some(node), 0, a, b));
                            color.insert(child.clone(), 1);
                            stack.push((child, 0));
                        }
                    }
                }
            }
        }
    }
    if capped {
        Injectivity::Unknown
    } else {
        Injectivity::Yes
    }
}

fn witness(
    parent: &HashMap<Node, (Option<Node>, usize, usize, usize)>,
    last: &Node,
    path: &[Option<WordD>],
    letters: &[WordD],
    a: usize,
    b: usize,
) -> (WordD, WordD) {
    let mut pairs = vec![(a, b)];
    let mut cur = last.clone();
    let start = loop {
        let (up, start, u, v) = parent[&cur].clone();
        pairs.push((u, v));
        match up {
            Some(p) => cur = p,
            None => break start,
        }
    };
    pairs.reverse();
    let prefix = path[start].clone().expect("start state is reachable");
    let mut left = prefix.clone();
    let mut right = prefix;
    for (u, v) in pairs {
        left.push(&letters[u]);
        right.push(&letters[v]);
    }
    (left, right)
}
