//! `(d,n,k,m)`-transducers: finite diagrams, lazily evaluated machines, and the
//! algorithms on them.
//!
//! Functions act on the right and compose left to right: `compose(A, B)` reads
//! its input with `A` and feeds `A`'s output to `B`.

mod algebra;
mod explore;
mod image;
mod inject;
mod minimize;
mod sync;

pub use algebra::{compose, compose_handles, product, product_handles, Composite, Memo, ProductMachine};
pub use explore::{distinct_states_lower_bound, explore, minimal_for_homeomorphism};
pub use image::{complete_response, image, images, is_nondegenerate, DEFAULT_IMAGE_CAP};
pub use inject::{injectivity, Injectivity};
pub use minimize::minimize;
pub use sync::{core, core_states, is_strongly_connected, reachable, strong_iso, synchronizing_level, sync_map};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::words::WordD;

/// Dimension and alphabet size of a domain or range, `(d, n)` or `(k, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sig {
    pub dims: usize,
    pub alphabet: usize,
}

impl Sig {
    pub fn new(dims: usize, alphabet: usize) -> Sig {
        Sig { dims, alphabet }
    }

    /// Number of generators `x_{d,i}`.
    pub fn gens(&self) -> usize {
        self.dims * self.alphabet
    }

    /// Number of square letters: one letter in every coordinate.
    pub fn square_letters(&self) -> usize {
        self.alphabet.pow(self.dims as u32)
    }

    pub fn empty(&self) -> WordD {
        WordD::empty(self.dims, self.alphabet)
    }

    pub fn generator(&self, g: Generator) -> WordD {
        WordD::generator(self.dims, self.alphabet, g.coord, g.letter)
    }

    pub fn generator_at(&self, index: usize) -> Generator {
        Generator { coord: index / self.alphabet, letter: (index % self.alphabet) as u8 }
    }

    /// The square letter with index `u`, coordinate 0 most significant.
    pub fn square_letter(&self, u: usize) -> WordD {
        let mut coords = vec![Vec::new(); self.dims];
        let mut r = u;
        for i in (0..self.dims).rev() {
            coords[i].push((r % self.alphabet) as u8);
            r /= self.alphabet;
        }
        WordD::from_parts(self.alphabet, coords)
    }

    fn check(&self, w: &WordD) -> Result<()> {
        if w.dims() != self.dims {
            return Err(Error::DimMismatch { expected: self.dims, found: w.dims() });
        }
        if w.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch { expected: self.alphabet, found: w.alphabet() });
        }
        Ok(())
    }
}

impl fmt::Display for Sig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dims, self.alphabet)
    }
}

/// The generator `x_{d,i}`: a single letter placed in one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub coord: usize,
    pub letter: u8,
}

impl Generator {
    pub fn new(coord: usize, letter: u8) -> Generator {
        Generator { coord, letter }
    }

    pub fn index(&self, n: usize) -> usize {
        self.coord * n + self.letter as usize
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.letter, self.coord)
    }
}

/// Opaque, comparable identity of a machine state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateKey {
    Index(usize),
    Word(WordD),
    Tuple(Vec<StateKey>),
}

impl StateKey {
    pub fn index(&self) -> usize {
        match self {
            StateKey::Index(i) => *i,
            other => panic!("expected an indexed state, got {other}"),
        }
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateKey::Index(i) => write!(f, "q{i}"),
            StateKey::Word(w) => write!(f, "{w}"),
            StateKey::Tuple(ks) => {
                write!(f, "<")?;
                for (i, k) in ks.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, ">")
            }
        }
    }
}

/// Uniform evaluation interface over finite diagrams and lazy machines.
///
/// Implementations are deterministic and satisfy cross-coordinate coherence on
/// every state they produce.
pub trait Machine: Send + Sync {
    fn domain(&self) -> Sig;
    fn range(&self) -> Sig;
    /// One generator step: next state and emitted output.
    fn step(&self, q: &StateKey, g: Generator) -> (StateKey, WordD);
}

pub type MachineHandle = Arc<dyn Machine>;

/// Reads `w` generator by generator, coordinate-major, returning `(π(q,w), λ(q,w))`.
pub fn run(m: &dyn Machine, q: &StateKey, w: &WordD) -> Result<(StateKey, WordD)> {
    m.domain().check(w)?;
    Ok(run_unchecked(m, q, w))
}

pub(crate) fn run_unchecked(m: &dyn Machine, q: &StateKey, w: &WordD) -> (StateKey, WordD) {
    let mut state = q.clone();
    let mut out = m.range().empty();
    for (coord, letter) in w.generators() {
        let (next, o) = m.step(&state, Generator { coord, letter });
        out.push(&o);
        state = next;
    }
    (state, out)
}

/// The output `λ(q,w)`; a prefix of `(x)f_{M,q}` for every infinite `x` extending `w`.
pub fn eval_prefix(m: &dyn Machine, q: &StateKey, w: &WordD) -> Result<WordD> {
    run(m, q, w).map(|(_, o)| o)
}

/// A finite `(d,n,k,m)`-transducer, total on states × generators and coherent.
///
/// Generator `x_{d,i}` with letter `x` has index `i·n + x`; tables are flat,
/// indexed `state · (d·n) + generator`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    domain: Sig,
    range: Sig,
    trans: Vec<usize>,
    out: Vec<WordD>,
}

impl Diagram {
    /// Validates raw tables: totality, range signature of every output, and
    /// cross-coordinate coherence at every state.
    pub fn new(domain: Sig, range: Sig, trans: Vec<usize>, out: Vec<WordD>) -> Result<Diagram> {
        if domain.dims == 0 || domain.alphabet < 2 || range.dims == 0 || range.alphabet < 2 {
            return Err(Error::BadSignature(format!("domain {domain}, range {range}")));
        }
        let g = domain.gens();
        if trans.is_empty() || trans.len() % g != 0 || out.len() != trans.len() {
            return Err(Error::NotTotal(format!(
                "{} transitions and {} outputs for {} generators per state",
                trans.len(),
                out.len(),
                g
            )));
        }
        let states = trans.len() / g;
        if let Some(&t) = trans.iter().find(|&&t| t >= states) {
            return Err(Error::NoSuchState(format!("q{t}")));
        }
        for w in &out {
            range.check(w)?;
        }
        let d = Diagram { domain, range, trans, out };
        d.check_coherence()?;
        Ok(d)
    }

    /// Builds from closures over `(state, generator)`; validated like [`Diagram::new`].
    pub fn from_fn<F>(domain: Sig, range: Sig, states: usize, mut f: F) -> Result<Diagram>
    where
        F: FnMut(usize, Generator) -> (usize, WordD),
    {
        let mut trans = Vec::with_capacity(states * domain.gens());
        let mut out = Vec::with_capacity(states * domain.gens());
        for q in 0..states {
            for gi in 0..domain.gens() {
                let (t, o) = f(q, domain.generator_at(gi));
                trans.push(t);
                out.push(o);
            }
        }
        Diagram::new(domain, range, trans, out)
    }

    pub(crate) fn from_tables_unchecked(domain: Sig, range: Sig, trans: Vec<usize>, out: Vec<WordD>) -> Diagram {
        let d = Diagram { domain, range, trans, out };
        debug_assert!(d.check_coherence().is_ok());
        d
    }

    /// The one-state identity transducer on `(d, n)`.
    pub fn identity(d: usize, n: usize) -> Diagram {
        let sig = Sig::new(d, n);
        let out = (0..sig.gens()).map(|g| sig.generator(sig.generator_at(g))).collect();
        Diagram { domain: sig, range: sig, trans: vec![0; sig.gens()], out }
    }

    fn check_coherence(&self) -> Result<()> {
        let n = self.domain.alphabet;
        for q in 0..self.states() {
            for i in 0..self.domain.dims {
                for j in i + 1..self.domain.dims {
                    for a in 0..n as u8 {
                        for b in 0..n as u8 {
                            let x = Generator::new(i, a);
                            let y = Generator::new(j, b);
                            let (qx, ox) = self.step_idx(q, x);
                            let (qy, oy) = self.step_idx(q, y);
                            let (qxy, oxy) = self.step_idx(qx, y);
                            let (qyx, oyx) = self.step_idx(qy, x);
                            if qxy != qyx {
                                return Err(Error::IncoherentTransition { state: q, x, y });
                            }
                            if ox.cat(oxy) != oy.cat(oyx) {
                                return Err(Error::IncoherentOutput { state: q, x, y });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Sig {
        self.domain
    }

    pub fn range(&self) -> Sig {
        self.range
    }

    pub fn states(&self) -> usize {
        self.trans.len() / self.domain.gens()
    }

    pub fn trans_table(&self) -> &[usize] {
        &self.trans
    }

    pub fn out_table(&self) -> &[WordD] {
        &self.out
    }

    #[inline]
    pub fn step_idx(&self, q: usize, g: Generator) -> (usize, &WordD) {
        let i = q * self.domain.gens() + g.index(self.domain.alphabet);
        (self.trans[i], &self.out[i])
    }

    #[inline]
    pub fn trans(&self, q: usize, g: Generator) -> usize {
        self.trans[q * self.domain.gens() + g.index(self.domain.alphabet)]
    }

    #[inline]
    pub fn out(&self, q: usize, g: Generator) -> &WordD {
        &self.out[q * self.domain.gens() + g.index(self.domain.alphabet)]
    }

    /// `(π(q,w), λ(q,w))` for a word over the domain signature.
    pub fn run_idx(&self, q: usize, w: &WordD) -> Result<(usize, WordD)> {
        self.domain.check(w)?;
        if q >= self.states() {
            return Err(Error::NoSuchState(format!("q{q}")));
        }
        Ok(self.run_fast(q, w))
    }

    pub(crate) fn run_fast(&self, q: usize, w: &WordD) -> (usize, WordD) {
        let mut state = q;
        let mut out = self.range.empty();
        for (coord, letter) in w.generators() {
            let (t, o) = self.step_idx(state, Generator { coord, letter });
            out.push(o);
            state = t;
        }
        (state, out)
    }

    pub(crate) fn trans_word(&self, q: usize, w: &WordD) -> usize {
        let mut state = q;
        for (coord, letter) in w.generators() {
            state = self.trans(state, Generator { coord, letter });
        }
        state
    }

    /// Transition and output tables on square letters (one letter per coordinate).
    pub fn square_tables(&self) -> (Vec<usize>, Vec<WordD>) {
        let s = self.domain.square_letters();
        let letters: Vec<WordD> = (0..s).map(|u| self.domain.square_letter(u)).collect();
        let mut trans = Vec::with_capacity(self.states() * s);
        let mut out = Vec::with_capacity(self.states() * s);
        for q in 0..self.states() {
            for u in &letters {
                let (t, o) = self.run_fast(q, u);
                trans.push(t);
                out.push(o);
            }
        }
        (trans, out)
    }

    /// The subdiagram on `keep` (which must be closed under transitions),
    /// renumbered in the order given.
    pub fn restrict(&self, keep: &[usize]) -> Result<Diagram> {
        let mut index = vec![usize::MAX; self.states()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let g = self.domain.gens();
        let mut trans = Vec::with_capacity(keep.len() * g);
        let mut out = Vec::with_capacity(keep.len() * g);
        for &old in keep {
            for gi in 0..g {
                let t = index[self.trans[old * g + gi]];
                if t == usize::MAX {
                    return Err(Error::Precondition("state subset is not closed under transitions".into()));
                }
                trans.push(t);
                out.push(self.out[old * g + gi].clone());
            }
        }
        Ok(Diagram { domain: self.domain, range: self.range, trans, out })
    }

    /// Renumbers states: old state `q` becomes `perm[q]`.
    pub fn relabel(&self, perm: &[usize]) -> Diagram {
        let mut order = vec![0; perm.len()];
        for (old, &new) in perm.iter().enumerate() {
            order[new] = old;
        }
        self.restrict(&order).expect("a permutation is closed under transitions")
    }

    /// Same tables with new output words, for constructions that only rewrite outputs.
    pub(crate) fn with_outputs(&self, out: Vec<WordD>) -> Diagram {
        Diagram::from_tables_unchecked(self.domain, self.range, self.trans.clone(), out)
    }

    /// Shares the diagram behind the lazy [`Machine`] interface.
    pub fn handle(&self) -> MachineHandle {
        Arc::new(self.clone())
    }

    /// True iff every generator is echoed unchanged at every state.
    pub fn is_identity_state(&self, q: usize) -> bool {
        self.domain == self.range
            && (0..self.domain.gens()).all(|gi| {
                let g = self.domain.generator_at(gi);
                *self.out(q, g) == self.domain.generator(g)
            })
    }
}

impl Machine for Diagram {
    fn domain(&self) -> Sig {
        self.domain
    }

    fn range(&self) -> Sig {
        self.range
    }

    fn step(&self, q: &StateKey, g: Generator) -> (StateKey, WordD) {
        let (t, o) = self.step_idx(q.index(), g);
        (StateKey::Index(t), o.clone())
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Diagram {} -> {}, {} states", self.domain, self.range, self.states())?;
        for q in 0..self.states() {
            write!(f, "  q{q}:")?;
            for gi in 0..self.domain.gens() {
                let g = self.domain.generator_at(gi);
                let (t, o) = self.step_idx(q, g);
                write!(f, " {g}/{o}->q{t}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
