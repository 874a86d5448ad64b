use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use super::{run_unchecked, Diagram, Generator, Machine, MachineHandle, Sig, StateKey};
use crate::error::{Error, Result};
use crate::words::WordD;

/// The composite `AB`: read with `A`, feed `A`'s output to `B`.
/// State `(a, b)` has index `a·|Q_B| + b`.
pub fn compose(a: &Diagram, b: &Diagram) -> Result<Diagram> {
    if a.range() != b.domain() {
        return Err(Error::BadSignature(format!("cannot feed range {} into domain {}", a.range(), b.domain())));
    }
    let (qa, qb) = (a.states(), b.states());
    let g = a.domain().gens();
    let mut trans = Vec::with_capacity(qa * qb * g);
    let mut out = Vec::with_capacity(qa * qb * g);
    for p in 0..qa {
        for q in 0..qb {
            for gi in 0..g {
                let (p2, s) = a.step_idx(p, a.domain().generator_at(gi));
                let (q2, t) = b.run_fast(q, s);
                trans.push(p2 * qb + q2);
                out.push(t);
            }
        }
    }
    Ok(Diagram::from_tables_unchecked(a.domain(), b.range(), trans, out))
}

struct Layout {
    domain: Sig,
    range: Sig,
    dom_offsets: Vec<usize>,
    ran_offsets: Vec<usize>,
}

fn layout(parts: &[(Sig, Sig)]) -> Result<Layout> {
    let (d0, r0) = *parts.first().ok_or(Error::EmptySet)?;
    let mut dom_offsets = Vec::new();
    let mut ran_offsets = Vec::new();
    let (mut dd, mut rr) = (0, 0);
    for &(d, r) in parts {
        if d.alphabet != d0.alphabet || r.alphabet != r0.alphabet {
            return Err(Error::AlphabetMismatch { expected: d0.alphabet, found: d.alphabet });
        }
        dom_offsets.push(dd);
        ran_offsets.push(rr);
        dd += d.dims;
        rr += r.dims;
    }
    Ok(Layout {
        domain: Sig::new(dd, d0.alphabet),
        range: Sig::new(rr, r0.alphabet),
        dom_offsets,
        ran_offsets,
    })
}

impl Layout {
    /// The factor owning domain coordinate `c`, and the coordinate inside it.
    fn locate(&self, c: usize) -> (usize, usize) {
        let j = self.dom_offsets.iter().rposition(|&o| o <= c).expect("coordinate in range");
        (j, c - self.dom_offsets[j])
    }
}

/// Categorical product. Domain and range coordinates concatenate in factor
/// order: factor `j` owns the block starting at the sum of earlier dimensions.
/// States are tuples, numbered mixed-radix with the first factor most significant.
pub fn product(factors: &[Diagram]) -> Result<Diagram> {
    let lay = layout(&factors.iter().map(|f| (f.domain(), f.range())).collect::<Vec<_>>())?;
    let sizes: Vec<usize> = factors.iter().map(Diagram::states).collect();
    let total: usize = sizes.iter().product();
    let mut strides = vec![1; factors.len()];
    for j in (0..factors.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * sizes[j + 1];
    }
    let g = lay.domain.gens();
    let mut trans = Vec::with_capacity(total * g);
    let mut out = Vec::with_capacity(total * g);
    for s in 0..total {
        for gi in 0..g {
            let gen = lay.domain.generator_at(gi);
            let (j, local) = lay.locate(gen.coord);
            let qj = (s / strides[j]) % sizes[j];
            let (t, o) = factors[j].step_idx(qj, Generator::new(local, gen.letter));
            trans.push(s - qj * strides[j] + t * strides[j]);
            out.push(o.embed(lay.range.dims, lay.ran_offsets[j]));
        }
    }
    Ok(Diagram::from_tables_unchecked(lay.domain, lay.range, trans, out))
}

/// Lazy composite of two machines; states are pairs.
pub struct Composite {
    first: MachineHandle,
    second: MachineHandle,
}

impl Machine for Composite {
    fn domain(&self) -> Sig {
        self.first.domain()
    }

    fn range(&self) -> Sig {
        self.second.range()
    }

    fn step(&self, q: &StateKey, g: Generator) -> (StateKey, WordD) {
        let StateKey::Tuple(parts) = q else { panic!("composite state must be a pair, got {q}") };
        let (a, s) = self.first.step(&parts[0], g);
        let (b, t) = run_unchecked(self.second.as_ref(), &parts[1], &s);
        (StateKey::Tuple(vec![a, b]), t)
    }
}

pub fn compose_handles(a: MachineHandle, b: MachineHandle) -> Result<MachineHandle> {
    if a.range() != b.domain() {
        return Err(Error::BadSignature(format!("cannot feed range {} into domain {}", a.range(), b.domain())));
    }
    Ok(Arc::new(Composite { first: a, second: b }))
}

/// Lazy product of machines; states are tuples, coordinates laid out as in [`product`].
pub struct ProductMachine {
    factors: Vec<MachineHandle>,
    lay: Layout,
}

impl Machine for ProductMachine {
    fn domain(&self) -> Sig {
        self.lay.domain
    }

    fn range(&self) -> Sig {
        self.lay.range
    }

    fn step(&self, q: &StateKey, g: Generator) -> (StateKey, WordD) {
        let StateKey::Tuple(parts) = q else { panic!("product state must be a tuple, got {q}") };
        let (j, local) = self.lay.locate(g.coord);
        let (t, o) = self.factors[j].step(&parts[j], Generator::new(local, g.letter));
        let mut next = parts.clone();
        next[j] = t;
        (StateKey::Tuple(next), o.embed(self.lay.range.dims, self.lay.ran_offsets[j]))
    }
}

pub fn product_handles(factors: Vec<MachineHandle>) -> Result<MachineHandle> {
    let lay = layout(&factors.iter().map(|f| (f.domain(), f.range())).collect::<Vec<_>>())?;
    Ok(Arc::new(ProductMachine { factors, lay }))
}

/// Caches the steps of an expensive lazy machine. The cache sits behind a
/// read-write lock, so concurrent readers always see values equal to what
/// the wrapped machine computes.
pub struct Memo {
    inner: MachineHandle,
    cache: RwLock<HashMap<(StateKey, Generator), (StateKey, WordD)>>,
}

impl Memo {
    pub fn wrap(inner: MachineHandle) -> MachineHandle {
        Arc::new(Memo { inner, cache: RwLock::new(HashMap::new()) })
    }
}

impl Machine for Memo {
    fn domain(&self) -> Sig {
        self.inner.domain()
    }

    fn range(&self) -> Sig {
        self.inner.range()
    }

    fn step(&self, q: &StateKey, g: Generator) -> (StateKey, WordD) {
        let key = (q.clone(), g);
        if let Some(hit) = self.cache.read().get(&key) {
            return hit.clone();
        }
        let value = self.inner.step(q, g);
        self.cache.write().insert(key, value.clone());
        value
    }
}
