use super::Diagram;
use crate::error::{Error, Result};
use crate::words::{lcp, ConeSet, WordD};

/// Default iteration cap for [`image`].
pub const DEFAULT_IMAGE_CAP: usize = 64;

/// Cone-count ceiling for one state's image during iteration.
const CONE_CEILING: usize = 20_000;

/// Degenerate iff, for some range coordinate, the square-letter transition
/// graph has a cycle whose edges all leave that coordinate empty: reading the
/// cycle forever yields a finite word there.
pub fn is_nondegenerate(d: &Diagram) -> bool {
    let (trans, out) = d.square_tables();
    let s = d.domain().square_letters();
    let states = d.states();
    (0..d.range().dims).all(|i| {
        let (trans, out) = (&trans, &out);
        let edges = |q: usize| (0..s).filter(move |&u| out[q * s + u].coord(i).is_empty()).map(move |u| trans[q * s + u]);
        !has_cycle(states, edges)
    })
}

fn has_cycle<I: Iterator<Item = usize>, F: Fn(usize) -> I>(states: usize, edges: F) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; states];
    for root in 0..states {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, edges(root).collect())];
        color[root] = 1;
        while let Some((q, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(t) if color[t] == 1 => return true,
                Some(t) if color[t] == 0 => {
                    color[t] = 1;
                    let next = edges(t).collect();
                    stack.push((t, next));
                }
                Some(_) => {}
                None => {
                    color[*q] = 2;
                    stack.pop();
                }
            }
        }
    }
    false
}

/// Images of every state, by greatest-fixpoint iteration from the full space:
/// `I_{t+1}(q) = ⋃_u out(q,u)·I_t(trans(q,u))` over square letters `u`.
/// Stabilization certifies the images; it happens exactly when every image is
/// clopen (for non-degenerate machines).
pub fn images(d: &Diagram, cap: usize) -> Result<Vec<ConeSet>> {
    let (trans, out) = d.square_tables();
    let s = d.domain().square_letters();
    let (k, m) = (d.range().dims, d.range().alphabet);
    let mut cur: Vec<ConeSet> = vec![ConeSet::full(k, m); d.states()];
    for _ in 0..cap {
        let mut next = Vec::with_capacity(d.states());
        for q in 0..d.states() {
            let mut cones: Vec<WordD> = Vec::new();
            for u in 0..s {
                let t = trans[q * s + u];
                cones.extend(cur[t].prefixed_cones(&out[q * s + u]));
            }
            let set = ConeSet::from_cones_unchecked(k, m, &cones);
            if set.len() > CONE_CEILING {
                return Err(Error::CapExceeded(cap));
            }
            next.push(set);
        }
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::CapExceeded(cap))
}

/// The image `(𝔠_n^d)f_{D,q}` as a normalized cone set.
pub fn image(d: &Diagram, q: usize, cap: usize) -> Result<ConeSet> {
    if q >= d.states() {
        return Err(Error::NoSuchState(format!("q{q}")));
    }
    Ok(images(d, cap)?.swap_remove(q))
}

/// Longest common prefix of an image, coordinatewise. For a union of cones the
/// projection to coordinate `i` has the same lcp as the cone words themselves.
pub(crate) fn image_lcp(set: &ConeSet) -> WordD {
    lcp(set.cones()).unwrap_or_else(|_| WordD::empty(set.dims(), set.alphabet()))
}

/// Moves each state's image prefix `g(q)` into earlier outputs:
/// `out'(q,x) = g(q)⁻¹ · out(q,x) · g(trans(q,x))`.
pub fn complete_response(d: &Diagram) -> Result<Diagram> {
    let imgs = images(d, DEFAULT_IMAGE_CAP)?;
    let prefixes: Vec<WordD> = imgs.iter().map(image_lcp).collect();
    let g = d.domain().gens();
    let mut out = Vec::with_capacity(d.out_table().len());
    for q in 0..d.states() {
        for gi in 0..g {
            let t = d.trans_table()[q * g + gi];
            let shifted = d.out_table()[q * g + gi].cat(&prefixes[t]);
            out.push(shifted.strip(&prefixes[q]).ok_or(Error::PrefixViolation(q))?);
        }
    }
    Ok(d.with_outputs(out))
}
