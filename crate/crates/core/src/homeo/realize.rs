use std::sync::Arc;

use crate::error::{Error, Result};
use crate::machine::{compose, explore, image, product, Diagram, Generator, Machine, MachineHandle, Memo, Sig, StateKey, DEFAULT_IMAGE_CAP};
use crate::outer::{decompose, multiply, permutation_core, psi, CoreElement};
use crate::words::WordD;

const MAX_GRAFT_DEPTH: usize = 64;
const EXPLORE_BOUND: usize = 1_000_000;

/// The grafted machine realizing a core element: fresh states are the words
/// with some coordinate shorter than `k`; once every coordinate reaches `k`,
/// the square prefix `b` is read by `P` from `q`, the image cone `a` its
/// output lies in is swapped for the paired code member `(a)φ`, and the run
/// continues inside `P`.
struct Graft {
    p: Diagram,
    q: usize,
    k: usize,
    cones: Vec<WordD>,
    code: Vec<WordD>,
}

impl Graft {
    fn new(p: &Diagram, q: usize) -> Result<Graft> {
        let sig = p.domain();
        let img = image(p, q, DEFAULT_IMAGE_CAP)?;
        let m = img.len();
        if (m - 1) % (sig.alphabet - 1) != 0 {
            return Err(Error::SignatureObstruction(m));
        }
        let cones = img.cones().to_vec();
        let longest = cones.iter().map(WordD::max_len).max().unwrap_or(0);
        let k = (1..=MAX_GRAFT_DEPTH)
            .find(|&k| {
                crate::words::square_words(sig.dims, sig.alphabet, k)
                    .iter()
                    .all(|w| p.run_fast(q, w).1.min_len() >= longest)
            })
            .ok_or_else(|| Error::Precondition("outputs never outgrow the image cones".into()))?;
        Ok(Graft { p: p.clone(), q, k, cones, code: left_comb(sig, m) })
    }
}

/// The code of `m` members built by splitting the all-zero member in
/// coordinate 0 again and again, sorted.
fn left_comb(sig: Sig, m: usize) -> Vec<WordD> {
    let t = (m - 1) / (sig.alphabet - 1);
    let word = |w: Vec<u8>| {
        let mut coords = vec![Vec::new(); sig.dims];
        coords[0] = w;
        WordD::from_parts(sig.alphabet, coords)
    };
    let mut code = vec![word(vec![0; t])];
    for j in 0..t {
        for x in 1..sig.alphabet as u8 {
            let mut w = vec![0; j];
            w.push(x);
            code.push(word(w));
        }
    }
    code.sort();
    code
}

impl Machine for Graft {
    fn domain(&self) -> Sig {
        self.p.domain()
    }

    fn range(&self) -> Sig {
        self.p.range()
    }

    fn step(&self, state: &StateKey, g: Generator) -> (StateKey, WordD) {
        match state {
            StateKey::Index(s) => {
                let (t, o) = self.p.step_idx(*s, g);
                (StateKey::Index(t), o.clone())
            }
            StateKey::Word(w) => {
                let wg = w.cat(&self.domain().generator(g));
                if wg.min_len() < self.k {
                    return (StateKey::Word(wg), self.range().empty());
                }
                let b = wg.truncate(self.k);
                let rest = wg.strip(&b).expect("truncation is a prefix");
                let (s1, o1) = self.p.run_fast(self.q, &b);
                let i = self.cones.iter().position(|a| a.le(&o1)).expect("output lies in one image cone");
                let (s2, o2) = self.p.run_fast(s1, &rest);
                let out = self.code[i].cat(&o1.strip(&self.cones[i]).expect("cone is a prefix")).cat(&o2);
                (StateKey::Index(s2), out)
            }
            other => panic!("graft states are words or indices, got {other}"),
        }
    }
}

/// The grafted realization of `(P, q)` as a lazy machine with base state
/// `Word(ε_d)`. For `d ≥ 2` its state set is infinite.
pub fn realize_lazy(p: &CoreElement, q: usize) -> Result<MachineHandle> {
    if q >= p.states() {
        return Err(Error::NoSuchState(format!("q{q}")));
    }
    Ok(Memo::wrap(Arc::new(Graft::new(p.diagram(), q)?)))
}

/// A finite diagram `D` and base state whose homeomorphism has a minimal
/// transducer with core `P`.
///
/// A state with full image realizes `P` directly. In dimension one the grafted
/// machine is finite and is built outright. In higher dimension the element is
/// split as `K·T_g` with `g = ψ(P)`; `K` is realized as the product of its
/// one-dimensional factors' realizations, followed by the permutation.
pub fn realize(p: &CoreElement, q: usize) -> Result<(Diagram, usize)> {
    if q >= p.states() {
        return Err(Error::NoSuchState(format!("q{q}")));
    }
    let d = p.diagram();
    if let Some(s) = (0..d.states()).find(|&s| image(d, s, DEFAULT_IMAGE_CAP).map(|i| i.is_full()).unwrap_or(false)) {
        return Ok((d.clone(), s));
    }
    if p.dims() == 1 {
        let graft = Graft::new(d, q)?;
        let (diagram, _) = explore(&graft, &StateKey::Word(d.domain().empty()), EXPLORE_BOUND)?;
        return Ok((diagram, 0));
    }
    let g = psi(p)?;
    if !g.is_identity() {
        let g_inv = g.inverse().ok_or(Error::NotInvertible)?;
        let k = multiply(p, &permutation_core(&g_inv, p.alphabet())?)?;
        let (dk, base) = realize(&k, 0)?;
        let pg = permutation_core(&g, p.alphabet())?;
        return Ok((compose(&dk, pg.diagram())?, base));
    }
    let mut parts = Vec::new();
    let mut base = 0;
    for f in decompose(p)? {
        let (df, b) = realize(&f, 0)?;
        base = base * df.states() + b;
        parts.push(df);
    }
    Ok((product(&parts)?, base))
}
