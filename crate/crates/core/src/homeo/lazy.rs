use std::sync::Arc;

use super::exchange::{baker_exchange, machine_of};
use crate::machine::{Generator, Machine, MachineHandle, Memo, Sig, StateKey};
use crate::words::WordD;

/// The baker's map `(0,ε) ↦ (ε,0)`, `(1,ε) ↦ (ε,1)` as a lazy `(2,2)` machine.
/// Its minimal transducer is infinite; the base state is `Word(ε,ε)`.
pub fn bakers() -> MachineHandle {
    machine_of(&baker_exchange())
}

/// A `(2,2,1,4)` machine pairing binary digits across coordinates: the pair
/// `(b₀, b₁)` is emitted as the letter `2·b₀ + b₁`. States are the unpaired
/// leftovers, so one coordinate is always empty. Base state `Word(ε,ε)`.
///
/// Its composite with the one-state splitter `x ↦ (⌊x/2⌋, x mod 2)` is the
/// identity of `2V_2` at the base state, yet the digit pairing has no finite
/// minimal transducer.
pub struct DigitPairing;

impl Machine for DigitPairing {
    fn domain(&self) -> Sig {
        Sig::new(2, 2)
    }

    fn range(&self) -> Sig {
        Sig::new(1, 4)
    }

    fn step(&self, q: &StateKey, g: Generator) -> (StateKey, WordD) {
        let StateKey::Word(w) = q else { panic!("digit pairing states are words, got {q}") };
        let mut coords = w.coords().to_vec();
        coords[g.coord].push(g.letter);
        let pairs = coords[0].len().min(coords[1].len());
        let letters: Vec<u8> = (0..pairs).map(|i| 2 * coords[0][i] + coords[1][i]).collect();
        coords[0].drain(..pairs);
        coords[1].drain(..pairs);
        (StateKey::Word(WordD::from_parts(2, coords)), WordD::from_parts(4, vec![letters]))
    }
}

pub fn inverse_digit_pairing_d() -> MachineHandle {
    Memo::wrap(Arc::new(DigitPairing))
}
