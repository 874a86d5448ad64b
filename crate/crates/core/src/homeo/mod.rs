//! Homeomorphisms of Cantor space: prefix exchanges (`dV_n`), their
//! transducers, membership of `dV_n`, and realization of core elements.

mod exchange;
mod lazy;
mod realize;

pub use exchange::{
    baker_exchange, compose_exchanges, exchange_machine_echoes, machine_of, random_exchange, Applied, ExchangeMachine,
    PrefixExchange,
};
pub use lazy::{bakers, inverse_digit_pairing_d, DigitPairing};
pub use realize::{realize, realize_lazy};

use crate::error::{Error, Result};
use crate::machine::{reachable, Diagram};
use crate::outer::canonicalize;

/// Whether `f_{D,q}` lies in `dV_n`: the canonical core of its minimal
/// transducer must be the identity. `f_{D,q}` must be a homeomorphism onto a
/// clopen set; non-synchronizing machines fail with `NotSynchronizing`.
pub fn is_dvn_member(d: &Diagram, q: usize) -> Result<bool> {
    if q >= d.states() {
        return Err(Error::NoSuchState(format!("q{q}")));
    }
    let part = d.restrict(&reachable(d, q))?;
    Ok(canonicalize(&part)?.is_identity())
}

/// Membership for an exchange's own machine: always true for valid exchanges,
/// confirmed by the echo test once a source member has been read.
pub fn is_dvn_member_exchange(h: &PrefixExchange) -> bool {
    exchange_machine_echoes(h)
}
