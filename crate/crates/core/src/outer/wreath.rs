use super::{decompose, multiply, permutation_core, psi, recompose, CoordinateMap, CoreElement};
use crate::enumerate::enumerate_core_elements;
use crate::error::{Error, Result};

/// An element of `𝒪 ≀ Sym(d)`: one-dimensional factors and a coordinate permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub factors: Vec<CoreElement>,
    pub perm: CoordinateMap,
}

/// `A ↦ (decompose(A·T_{g⁻¹}), g)` with `g = ψ(A)`. `ψ(A)` must be a
/// permutation; otherwise `A` is not a unit.
pub fn wreath_coordinates(a: &CoreElement) -> Result<WreathElement> {
    let g = psi(a)?;
    let g_inv = g.inverse().ok_or(Error::NotInvertible)?;
    let k = multiply(a, &permutation_core(&g_inv, a.alphabet())?)?;
    Ok(WreathElement { factors: decompose(&k)?, perm: g })
}

/// The element with the given wreath coordinates: `recompose(factors)·T_g`.
pub fn from_wreath(w: &WreathElement) -> Result<CoreElement> {
    let n = w.factors.first().ok_or(Error::EmptySet)?.alphabet();
    multiply(&recompose(&w.factors)?, &permutation_core(&w.perm, n)?)
}

/// `(k₀,h₀)(k₁,h₁) = (k₀·(k₁)a(h₀⁻¹), h₀h₁)`, where `Sym(d)` acts on factor
/// lists by `((k_x)_x)a(h) = (k_{(x)h⁻¹})_x`. Factor `x` of the product is
/// therefore `k₀[x]·k₁[(x)h₀]`.
pub fn wreath_multiply(x: &WreathElement, y: &WreathElement) -> Result<WreathElement> {
    if x.factors.len() != y.factors.len() || x.perm.dims() != y.perm.dims() {
        return Err(Error::DimMismatch { expected: x.factors.len(), found: y.factors.len() });
    }
    let factors = (0..x.factors.len())
        .map(|i| multiply(&x.factors[i], &y.factors[x.perm.apply(i)]))
        .collect::<Result<Vec<_>>>()?;
    Ok(WreathElement { factors, perm: x.perm.then(&y.perm) })
}

const POWER_LIMIT: usize = 24;
const POWER_STATE_LIMIT: usize = 64;

/// If some power `A^k` is the identity, returns `A^{k-1}`. The search stops
/// at the first power too large to canonicalize within the library's caps.
fn inverse_by_powers(a: &CoreElement) -> Result<Option<CoreElement>> {
    if a.is_identity() {
        return Ok(Some(a.clone()));
    }
    let mut prev = a.clone();
    for _ in 2..=POWER_LIMIT {
        let next = match multiply(&prev, a) {
            Ok(next) => next,
            Err(Error::CapExceeded(_) | Error::BoundExceeded(_)) => break,
            Err(e) => return Err(e),
        };
        if next.is_identity() {
            return Ok(Some(prev));
        }
        if next.states() > POWER_STATE_LIMIT {
            break;
        }
        prev = next;
    }
    Ok(None)
}

fn two_sided(a: &CoreElement, b: &CoreElement) -> Result<bool> {
    Ok(multiply(a, b)?.is_identity() && multiply(b, a)?.is_identity())
}

fn same_space(a: &CoreElement, b: &CoreElement) -> bool {
    b.dims() == a.dims() && b.alphabet() == a.alphabet()
}

/// An inverse of `A` found inside `pool` (cheap: pool elements are small),
/// then among the powers of `A`.
pub(crate) fn find_inverse_among(a: &CoreElement, pool: &[CoreElement]) -> Result<Option<CoreElement>> {
    for b in pool {
        if same_space(a, b) && two_sided(a, b)? {
            return Ok(Some(b.clone()));
        }
    }
    inverse_by_powers(a)
}

/// A two-sided inverse of `A`, or `None` when none was found. Powers of `A`
/// are tried first (inverses are unique, so any hit is the answer); then the
/// canonical core elements with at most `max_states` states (default
/// `|Q_A| + 2`) and outputs of length at most 2. Search spaces too large to
/// enumerate are skipped, so `None` is inconclusive.
pub fn find_inverse(a: &CoreElement, max_states: Option<usize>) -> Result<Option<CoreElement>> {
    if let Some(b) = inverse_by_powers(a)? {
        return Ok(Some(b));
    }
    let bound = max_states.unwrap_or(a.states() + 2);
    let pool = match enumerate_core_elements(a.dims(), a.alphabet(), bound, 2) {
        Ok(pool) => pool,
        Err(Error::SpecTooLarge { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    for b in &pool {
        if two_sided(a, b)? {
            return Ok(Some(b.clone()));
        }
    }
    Ok(None)
}
