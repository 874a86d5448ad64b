use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::machine::{Generator, Machine, MachineHandle, Memo, Sig, StateKey};
use crate::words::{lcp, random_code, validate_prefix_code, PrefixCode, WordD};

/// An element of `dV_n`: member `i` of `source` is sent to member `i` of `target`,
/// and `(u·x)h = (u)φ·x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixExchange {
    source: PrefixCode,
    target: PrefixCode,
}

/// Result of applying an exchange to a finite word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Applied {
    Word(WordD),
    /// No source member is a prefix yet; extend the word and retry.
    Undetermined,
}

impl PrefixExchange {
    pub fn new(source: PrefixCode, target: PrefixCode) -> Result<PrefixExchange> {
        if source.dims() != target.dims() {
            return Err(Error::DimMismatch { expected: source.dims(), found: target.dims() });
        }
        if source.alphabet() != target.alphabet() {
            return Err(Error::AlphabetMismatch { expected: source.alphabet(), found: target.alphabet() });
        }
        if source.len() != target.len() {
            return Err(Error::Precondition(format!(
                "codes of sizes {} and {} admit no bijection",
                source.len(),
                target.len()
            )));
        }
        Ok(PrefixExchange { source, target })
    }

    /// Builds from explicit pairs `(u, (u)φ)`, validating both codes.
    pub fn from_pairs(pairs: Vec<(WordD, WordD)>) -> Result<PrefixExchange> {
        let (src, tgt): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        PrefixExchange::new(validate_prefix_code(src)?, validate_prefix_code(tgt)?)
    }

    pub fn identity(d: usize, n: usize) -> PrefixExchange {
        PrefixExchange { source: PrefixCode::trivial(d, n), target: PrefixCode::trivial(d, n) }
    }

    pub fn source(&self) -> &PrefixCode {
        &self.source
    }

    pub fn target(&self) -> &PrefixCode {
        &self.target
    }

    pub fn dims(&self) -> usize {
        self.source.dims()
    }

    pub fn alphabet(&self) -> usize {
        self.source.alphabet()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&WordD, &WordD)> {
        self.source.members().iter().zip(self.target.members())
    }

    pub fn apply(&self, w: &WordD) -> Applied {
        match self.source.member_below(w) {
            Some(i) => {
                let rest = w.strip(&self.source.members()[i]).expect("member is a prefix");
                Applied::Word(self.target.members()[i].cat(&rest))
            }
            None => Applied::Undetermined,
        }
    }

    pub fn invert(&self) -> PrefixExchange {
        PrefixExchange { source: self.target.clone(), target: self.source.clone() }
    }

    /// The cones making up `(s𝔠)h`: one per source member compatible with `s`.
    pub fn image_cones(&self, s: &WordD) -> Vec<WordD> {
        self.pairs()
            .filter(|(u, _)| u.compatible(s))
            .map(|(u, v)| v.cat(&u.join(s).strip(u).expect("join extends u")))
            .collect()
    }

    /// True iff the exchange acts as the identity map.
    pub fn is_identity(&self) -> bool {
        self.pairs().all(|(u, v)| u == v)
    }

    /// Equality as homeomorphisms, independent of the codes chosen.
    pub fn same_map(&self, other: &PrefixExchange) -> Result<bool> {
        Ok(compose_exchanges(self, &other.invert())?.is_identity())
    }
}

/// `gh`: apply `g`, then `h`. Transports through the common refinement
/// `{u ∨ v}` of `g`'s target code and `h`'s source code.
pub fn compose_exchanges(g: &PrefixExchange, h: &PrefixExchange) -> Result<PrefixExchange> {
    if g.dims() != h.dims() {
        return Err(Error::DimMismatch { expected: g.dims(), found: h.dims() });
    }
    if g.alphabet() != h.alphabet() {
        return Err(Error::AlphabetMismatch { expected: g.alphabet(), found: h.alphabet() });
    }
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for (gs, gt) in g.pairs() {
        for (hs, ht) in h.pairs() {
            if !gt.compatible(hs) {
                continue;
            }
            let c = gt.join(hs);
            src.push(gs.cat(&c.strip(gt).expect("join extends gt")));
            tgt.push(ht.cat(&c.strip(hs).expect("join extends hs")));
        }
    }
    let (d, n) = (g.dims(), g.alphabet());
    Ok(PrefixExchange {
        source: PrefixCode::from_members_unchecked(d, n, src),
        target: PrefixCode::from_members_unchecked(d, n, tgt),
    })
}

/// A random exchange between two codes of `1 + splits·(n-1)` members, each
/// grown by random refinement, paired by a random bijection.
pub fn random_exchange<R: Rng + ?Sized>(d: usize, n: usize, splits: usize, rng: &mut R) -> PrefixExchange {
    let source = random_code(d, n, splits, rng);
    let target = random_code(d, n, splits, rng);
    let mut members = target.members().to_vec();
    members.shuffle(rng);
    let target = PrefixCode::from_members_unchecked(d, n, members);
    PrefixExchange { source, target }
}

/// The baker's map of `2V`: `(0,ε) ↦ (ε,0)`, `(1,ε) ↦ (ε,1)`.
pub fn baker_exchange() -> PrefixExchange {
    let w = |a: &[u8], b: &[u8]| WordD::from_parts(2, vec![a.to_vec(), b.to_vec()]);
    PrefixExchange::from_pairs(vec![(w(&[0], &[]), w(&[], &[0])), (w(&[1], &[]), w(&[], &[1]))])
        .expect("baker codes are complete")
}

/// The transducer `T_h` of a homeomorphism given by an exchange: states are
/// words, `(s,t)π = st`, and the output strips the lcp of `(s𝔠)h` from the lcp
/// of `(st𝔠)h`, coordinatewise.
pub struct ExchangeMachine {
    h: PrefixExchange,
}

impl ExchangeMachine {
    fn lcp_of_image(&self, s: &WordD) -> WordD {
        lcp(&self.h.image_cones(s)).expect("cones of a complete code cover every word")
    }

    pub fn exchange(&self) -> &PrefixExchange {
        &self.h
    }
}

impl Machine for ExchangeMachine {
    fn domain(&self) -> Sig {
        Sig::new(self.h.dims(), self.h.alphabet())
    }

    fn range(&self) -> Sig {
        self.domain()
    }

    fn step(&self, q: &StateKey, g: Generator) -> (StateKey, WordD) {
        let StateKey::Word(s) = q else { panic!("exchange machine states are words, got {q}") };
        let t = s.cat(&self.domain().generator(g));
        let out = self.lcp_of_image(&t).strip(&self.lcp_of_image(s)).expect("image of a subcone has a longer lcp");
        (StateKey::Word(t), out)
    }
}

/// The lazy machine `T_h`, memoized; its base state is `StateKey::Word(ε_d)`.
pub fn machine_of(h: &PrefixExchange) -> MachineHandle {
    Memo::wrap(Arc::new(ExchangeMachine { h: h.clone() }))
}

/// Membership check for exchange machines: once a source member `u` has
/// been read, the state must echo every generator. Every square state of the
/// code depth extends exactly one member, so each member is checked as read
/// and padded out to the square level with each constant letter.
pub fn exchange_machine_echoes(h: &PrefixExchange) -> bool {
    let m = ExchangeMachine { h: h.clone() };
    let sig = m.domain();
    let k = h.source.depth().max(h.target.depth());
    h.source.members().iter().all(|u| {
        let padded = (0..sig.alphabet as u8).map(|x| {
            let coords = u.coords().iter().map(|c| [c.clone(), vec![x; k - c.len()]].concat()).collect();
            WordD::from_parts(sig.alphabet, coords)
        });
        std::iter::once(u.clone()).chain(padded).all(|w| {
            let key = StateKey::Word(w);
            (0..sig.gens()).all(|gi| {
                let g = sig.generator_at(gi);
                m.step(&key, g).1 == sig.generator(g)
            })
        })
    })
}
