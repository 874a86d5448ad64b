use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::{canonicalize, CoordinateMap, CoreElement};
use crate::error::{Error, Result};
use crate::machine::{image, product, Diagram, Generator, Sig, DEFAULT_IMAGE_CAP};

/// The coordinate map `ψ_A`: input coordinate `i` feeds exactly one output
/// coordinate. Outputs of longer single-coordinate words are concatenations of
/// generator outputs, so scanning generators at every state is exhaustive.
pub fn psi(a: &CoreElement) -> Result<CoordinateMap> {
    let d = a.diagram();
    let sig = d.domain();
    let mut images = Vec::with_capacity(sig.dims);
    for i in 0..sig.dims {
        let mut targets = BTreeSet::new();
        for q in 0..d.states() {
            for x in 0..sig.alphabet as u8 {
                let o = d.out(q, Generator::new(i, x));
                targets.extend((0..sig.dims).filter(|&j| !o.coord(j).is_empty()));
            }
        }
        if targets.len() != 1 {
            return Err(Error::Inconsistent { coord: i, targets: targets.into_iter().collect() });
        }
        images.push(*targets.first().unwrap());
    }
    CoordinateMap::new(images)
}

pub fn in_dk(a: &CoreElement) -> Result<bool> {
    Ok(psi(a)?.is_identity())
}

/// The one-state core `T_g`: generator `x_{d,i}` is emitted as `x_{d,(i)g}`.
pub fn permutation_core(g: &CoordinateMap, n: usize) -> Result<CoreElement> {
    if !g.is_bijection() {
        return Err(Error::Precondition(format!("{g} is not a permutation")));
    }
    let sig = Sig::new(g.dims(), n);
    let d = Diagram::from_fn(sig, sig, 1, |_, x| (0, sig.generator(Generator::new(g.apply(x.coord), x.letter))))?;
    Ok(CoreElement::from_canonical(d))
}

/// The one-dimensional factors of an element of `dK`. Factor `i` lives on the
/// states reachable from state 0 by coordinate-`i` generators; the product of
/// the factors is checked against the input.
pub fn decompose(a: &CoreElement) -> Result<Vec<CoreElement>> {
    if !in_dk(a)? {
        return Err(Error::Precondition("decompose needs psi = identity".into()));
    }
    let d = a.diagram();
    let n = a.alphabet();
    let mut factors = Vec::with_capacity(a.dims());
    for i in 0..a.dims() {
        let mut index = vec![usize::MAX; d.states()];
        let mut class = vec![0];
        index[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(p) = queue.pop_front() {
            for x in 0..n as u8 {
                let t = d.trans(p, Generator::new(i, x));
                if index[t] == usize::MAX {
                    index[t] = class.len();
                    class.push(t);
                    queue.push_back(t);
                }
            }
        }
        let one = Sig::new(1, n);
        let f = Diagram::from_fn(one, one, class.len(), |q, x| {
            let (t, o) = d.step_idx(class[q], Generator::new(i, x.letter));
            (index[t], o.project(i))
        })?;
        factors.push(canonicalize(&f)?);
    }
    if recompose(&factors)? != *a {
        return Err(Error::DecompositionMismatch);
    }
    Ok(factors)
}

/// The canonical core of the product of one-dimensional factors.
pub fn recompose(factors: &[CoreElement]) -> Result<CoreElement> {
    let diagrams: Vec<Diagram> = factors.iter().map(|f| f.diagram().clone()).collect();
    canonicalize(&product(&diagrams)?)
}

/// A residue class `value mod modulus`; for `n = 2` the modulus is 1 and every
/// signature is trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Residue {
        Residue { value: value % modulus, modulus }
    }

    pub fn one(modulus: u64) -> Residue {
        Residue::new(1, modulus)
    }

    pub fn mul(self, other: Residue) -> Residue {
        assert_eq!(self.modulus, other.modulus, "residues of different moduli");
        Residue::new(self.value * other.value, self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// Number of cones in the image of the base state, modulo `n - 1`.
pub fn sig(a: &CoreElement) -> Result<Residue> {
    let img = image(a.diagram(), 0, DEFAULT_IMAGE_CAP)?;
    Ok(Residue::new(img.len() as u64, (a.alphabet() - 1) as u64))
}
