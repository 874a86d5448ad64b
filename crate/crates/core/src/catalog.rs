//! Named fixtures: the machines, codes and exchanges drawn or described in the
//! paper's worked examples, plus a few small helpers for tests.

use crate::error::{Error, Result};
use crate::homeo::{baker_exchange, bakers, inverse_digit_pairing_d, PrefixExchange};
use crate::machine::{product, Diagram, MachineHandle, Sig};
use crate::outer::{permutation_core, CoordinateMap, CoreElement};
use crate::words::{validate_prefix_code, PrefixCode, WordD};

/// A catalog object.
#[derive(Clone)]
pub enum CatalogObject {
    Diagram(Diagram),
    Machine(MachineHandle),
    Exchange(PrefixExchange),
    Code(PrefixCode),
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub object: CatalogObject,
    pub note: &'static str,
}

fn w1(n: usize, letters: &[u8]) -> WordD {
    WordD::single(n, letters)
}

/// The complete code `{(ε,0,0), (0,1,ε), (1,ε,1), (0,0,1), (1,1,0)}` over
/// `(3,2)`, which no sequence of single refinements produces.
pub fn scary_code() -> PrefixCode {
    let w = |a: &[u8], b: &[u8], c: &[u8]| WordD::new(2, vec![a.to_vec(), b.to_vec(), c.to_vec()]).unwrap();
    validate_prefix_code(vec![
        w(&[], &[0], &[0]),
        w(&[0], &[1], &[]),
        w(&[1], &[], &[1]),
        w(&[0], &[0], &[1]),
        w(&[1], &[1], &[0]),
    ])
    .expect("the scary code is complete")
}

/// `C_2 → C_n` for `n ≥ 3`: counts zeros, emitting letter `i` for `0^i 1`
/// and letter `n-1` for `0^{n-1}`. State `i` has read `i` zeros.
pub fn fig2_forward(n: usize) -> Result<Diagram> {
    if n < 3 {
        return Err(Error::Precondition(format!("fig2 needs n >= 3, got {n}")));
    }
    Diagram::from_fn(Sig::new(1, 2), Sig::new(1, n), n - 1, |q, g| match g.letter {
        1 => (0, w1(n, &[q as u8])),
        _ if q + 1 < n - 1 => (q + 1, w1(n, &[])),
        _ => (0, w1(n, &[(n - 1) as u8])),
    })
}

/// The inverse of [`fig2_forward`]: one state, letter `i < n-1` to `0^i 1`,
/// letter `n-1` to `0^{n-1}`.
pub fn fig2_backward(n: usize) -> Result<Diagram> {
    if n < 3 {
        return Err(Error::Precondition(format!("fig2 needs n >= 3, got {n}")));
    }
    Diagram::from_fn(Sig::new(1, n), Sig::new(1, 2), 1, |_, g| {
        let i = g.letter as usize;
        let mut out = vec![0u8; i];
        if i < n - 1 {
            out.push(1);
        }
        (0, w1(2, &out))
    })
}

/// The `0 ↔ 00` transducer: blocks of exactly one or two zeros swap lengths;
/// other blocks pass through. States `q0 = 0`, `a = 1`, `b = 2`, `c = 3`.
pub fn fig3_left() -> Diagram {
    let sig = Sig::new(1, 2);
    // (state, letter) -> (next, output)
    let table: [[(usize, &[u8]); 2]; 4] = [
        [(1, &[0]), (0, &[1])],    // q0
        [(3, &[]), (0, &[0, 1])],  // a
        [(2, &[0]), (0, &[1])],    // b
        [(2, &[0, 0]), (0, &[1])], // c
    ];
    Diagram::from_fn(sig, sig, 4, |q, g| {
        let (t, o) = table[q][g.letter as usize];
        (t, w1(2, o))
    })
    .expect("fig3_left is a valid transducer")
}

/// The right-hand machine of the two-machine figure. Only its action on
/// all-zero blocks is pinned down by the text, and the left machine fits
/// every stated equation, so it is reused.
pub fn fig3_right() -> Diagram {
    fig3_left()
}

/// The categorical product of the two one-dimensional machines: 16 states.
pub fn fig4_b() -> Diagram {
    product(&[fig3_left(), fig3_right()]).expect("same alphabets")
}

/// One state, `C_4 → C_2^2`: letter `x` becomes `(⌊x/2⌋, x mod 2)`.
pub fn fig5_t() -> Diagram {
    Diagram::from_fn(Sig::new(1, 4), Sig::new(2, 2), 1, |_, g| {
        let x = g.letter;
        (0, WordD::new(2, vec![vec![x / 2], vec![x % 2]]).unwrap())
    })
    .expect("fig5_t is a valid transducer")
}

/// The one-state bit flip on `C_2`.
pub fn bit_flip() -> Diagram {
    let sig = Sig::new(1, 2);
    Diagram::from_fn(sig, sig, 1, |_, g| (0, w1(2, &[1 - g.letter]))).expect("valid")
}

/// The permutation cores of every permutation of `{0..d-1}`, in
/// lexicographic order of the image lists.
pub fn perm_cores(d: usize, n: usize) -> Vec<(CoordinateMap, CoreElement)> {
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..d {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..d).filter(|x| !p.contains(x)).map(|x| [p.clone(), vec![x]].concat()).collect::<Vec<_>>())
            .collect();
    }
    perms
        .into_iter()
        .map(|p| {
            let g = CoordinateMap::new(p).expect("in range");
            let c = permutation_core(&g, n).expect("bijection");
            (g, c)
        })
        .collect()
}

const NAMES: &[&str] = &[
    "scary_code",
    "fig2_forward",
    "fig2_backward",
    "fig3_left",
    "fig3_right",
    "fig4_B",
    "fig5_T",
    "bakers",
    "baker_exchange",
    "digit_pairing_D",
    "bit_flip",
    "perm_swap",
    "identity",
];

/// Names accepted by [`get`]. `fig2_forward` and `fig2_backward` also take
/// an alphabet suffix such as `fig2_forward_5` (default 3).
pub fn names() -> &'static [&'static str] {
    NAMES
}

pub fn get(name: &str) -> Option<CatalogEntry> {
    let entry = |object, note| Some(CatalogEntry { name: name.to_string(), object, note });
    if let Some(rest) = name.strip_prefix("fig2_forward").or_else(|| name.strip_prefix("fig2_backward")) {
        let n = match rest {
            "" => 3,
            r => r.strip_prefix('_')?.parse().ok()?,
        };
        let forward = name.starts_with("fig2_forward");
        let d = if forward { fig2_forward(n) } else { fig2_backward(n) }.ok()?;
        let note = if forward {
            "binary to n-ary recoding by counting zeros; the code {1, 01, ..., 0^{n-2}1, 0^{n-1}}"
        } else {
            "n-ary to binary recoding, inverse of fig2_forward"
        };
        return entry(CatalogObject::Diagram(d), note);
    }
    match name {
        "scary_code" => entry(CatalogObject::Code(scary_code()), "a complete (3,2) code not obtainable by refinement"),
        "fig3_left" => entry(CatalogObject::Diagram(fig3_left()), "the 0 <-> 00 block-length swap, synchronizing at level 3"),
        "fig3_right" => entry(
            CatalogObject::Diagram(fig3_right()),
            "reconstruction: the drawing is not recoverable from the text, so the left machine is reused",
        ),
        "fig4_B" => entry(CatalogObject::Diagram(fig4_b()), "categorical product of fig3_left and fig3_right"),
        "fig5_T" => entry(CatalogObject::Diagram(fig5_t()), "one-state C_4 -> C_2^2 splitting each letter into two bits"),
        "bakers" => entry(CatalogObject::Machine(bakers()), "the baker's map of 2V as a lazy machine; infinite"),
        "baker_exchange" => entry(CatalogObject::Exchange(baker_exchange()), "(0,e) -> (e,0), (1,e) -> (e,1)"),
        "digit_pairing_D" => entry(
            CatalogObject::Machine(inverse_digit_pairing_d()),
            "inverse of fig5_T as a lazy (2,2,1,4) machine; infinite",
        ),
        "bit_flip" => entry(CatalogObject::Diagram(bit_flip()), "one-state bit flip on C_2"),
        "perm_swap" => entry(
            CatalogObject::Diagram(perm_cores(2, 2)[1].1.diagram().clone()),
            "one-state coordinate swap on C_2^2",
        ),
        "identity" => entry(CatalogObject::Diagram(Diagram::identity(1, 2)), "one-state identity on C_2"),
        _ => None,
    }
}

/// Every catalog entry under its default parameters.
pub fn entries() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| get(n).expect("listed names resolve")).collect()
}
