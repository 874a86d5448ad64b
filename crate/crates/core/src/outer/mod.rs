//! The core monoid: canonical cores of synchronizing homeomorphisms, their
//! product, the coordinate map `Ψ`, signatures, the decomposition of `dK`
//! into one-dimensional factors, and wreath coordinates.

mod coords;
mod perm;
mod wreath;

use std::fmt;

pub use coords::{decompose, in_dk, permutation_core, psi, recompose, sig, Residue};
pub use perm::CoordinateMap;
pub(crate) use wreath::find_inverse_among;
pub use wreath::{find_inverse, from_wreath, wreath_coordinates, wreath_multiply, WreathElement};

use crate::error::{Error, Result};
use crate::machine::{complete_response, core, minimize, reachable, synchronizing_level, Diagram};
use crate::words::WordD;

/// A core in canonical form: synchronizing, equal to its own core, complete
/// response, minimal, with states numbered breadth-first (generator order)
/// from `𝔰((0^k)^d)` at the synchronizing level `k`. Strongly isomorphic
/// cores have identical canonical tables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoreElement {
    diagram: Diagram,
}

impl CoreElement {
    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn into_diagram(self) -> Diagram {
        self.diagram
    }

    pub fn dims(&self) -> usize {
        self.diagram.domain().dims
    }

    pub fn alphabet(&self) -> usize {
        self.diagram.domain().alphabet
    }

    pub fn states(&self) -> usize {
        self.diagram.states()
    }

    pub fn identity(d: usize, n: usize) -> CoreElement {
        CoreElement { diagram: Diagram::identity(d, n) }
    }

    /// One state echoing every generator.
    pub fn is_identity(&self) -> bool {
        self.states() == 1 && self.diagram.is_identity_state(0)
    }

    pub(crate) fn from_canonical(diagram: Diagram) -> CoreElement {
        CoreElement { diagram }
    }
}

impl fmt::Debug for CoreElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoreElement{:?}", self.diagram)
    }
}

pub fn is_identity(a: &CoreElement) -> bool {
    a.is_identity()
}

/// Renumbers a synchronizing, strongly connected diagram breadth-first from
/// `𝔰((0^k)^d)`.
fn canonical_numbering(d: &Diagram) -> Result<Diagram> {
    let k = synchronizing_level(d)?;
    let sig = d.domain();
    let zeros = WordD::new(sig.alphabet, vec![vec![0; k]; sig.dims])?;
    let root = d.trans_word(0, &zeros);
    let order = reachable(d, root);
    if order.len() != d.states() {
        return Err(Error::Precondition("core is not strongly connected".into()));
    }
    d.restrict(&order)
}

/// Core, then complete response, then minimization, then canonical numbering.
/// The input must be a synchronizing `(d,n,d,n)` diagram whose states induce
/// homeomorphisms onto clopen images.
pub fn canonicalize(d: &Diagram) -> Result<CoreElement> {
    if d.domain() != d.range() {
        return Err(Error::BadSignature(format!("core elements need equal domain and range, got {} and {}", d.domain(), d.range())));
    }
    let (c, _) = core(d)?;
    let cr = complete_response(&c)?;
    let (m, _) = minimize(&cr);
    Ok(CoreElement { diagram: canonical_numbering(&m)? })
}

/// `AB`: the canonical core of the composite, `A` first.
pub fn multiply(a: &CoreElement, b: &CoreElement) -> Result<CoreElement> {
    canonicalize(&crate::machine::compose(&a.diagram, &b.diagram)?)
}

/// `A^k` for `k ≥ 0`.
pub fn power(a: &CoreElement, k: usize) -> Result<CoreElement> {
    let mut acc = CoreElement::identity(a.dims(), a.alphabet());
    for _ in 0..k {
        acc = multiply(&acc, a)?;
    }
    Ok(acc)
}
