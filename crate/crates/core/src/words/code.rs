use rand::Rng;

use super::{ConeSet, WordD};
use crate::error::{Error, Result};

/// A complete prefix code: finitely many tuples whose cones partition `𝔠_n^d`.
/// Members keep the order they were given in, so bijections can index them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixCode {
    d: usize,
    n: usize,
    members: Vec<WordD>,
}

impl PrefixCode {
    pub fn dims(&self) -> usize {
        self.d
    }

    pub fn alphabet(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[WordD] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The trivial code `{ε_d}`.
    pub fn trivial(d: usize, n: usize) -> PrefixCode {
        PrefixCode { d, n, members: vec![WordD::empty(d, n)] }
    }

    /// Longest coordinate over all members.
    pub fn depth(&self) -> usize {
        self.members.iter().map(WordD::max_len).max().unwrap_or(0)
    }

    /// Index of the member that is a prefix of `w`, if `w` is deep enough.
    pub fn member_below(&self, w: &WordD) -> Option<usize> {
        self.members.iter().position(|u| u.le(w))
    }

    pub(crate) fn from_members_unchecked(d: usize, n: usize, members: Vec<WordD>) -> PrefixCode {
        PrefixCode { d, n, members }
    }

    /// Replaces member `i` by its `n` children in coordinate `coord`, appended in letter order.
    pub fn split(&self, i: usize, coord: usize) -> PrefixCode {
        let mut members = self.members.clone();
        let parent = members.remove(i);
        for x in 0..self.n as u8 {
            let mut coords = parent.coords().to_vec();
            coords[coord].push(x);
            members.insert(i + x as usize, WordD::from_parts(self.n, coords));
        }
        PrefixCode { d: self.d, n: self.n, members }
    }
}

/// Checks that `members` is a complete prefix code.
///
/// Exactness at the square level `k` (every `u ∈ (X_n^k)^d` has exactly one
/// member as a prefix) is equivalent to pairwise incomparability of cones plus
/// covering, which is what is checked here: the first is a pairwise scan and the
/// second a cone-algebra union, both far cheaper than listing `n^{kd}` words.
pub fn validate_prefix_code(members: Vec<WordD>) -> Result<PrefixCode> {
    let first = members.first().ok_or(Error::EmptySet)?;
    let (d, n) = (first.dims(), first.alphabet());
    for w in &members {
        if w.dims() != d {
            return Err(Error::DimMismatch { expected: d, found: w.dims() });
        }
        if w.alphabet() != n {
            return Err(Error::AlphabetMismatch { expected: n, found: w.alphabet() });
        }
    }
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if a.compatible(b) {
                return Err(Error::Overlap(a.to_string(), b.to_string()));
            }
        }
    }
    if kraft_full(&members, n) {
        return Ok(PrefixCode { d, n, members });
    }
    let cover = ConeSet::from_cones_unchecked(d, n, &members);
    if let Some(hole) = cover.complement().cones().first() {
        let k = members.iter().map(WordD::max_len).max().unwrap_or(0).max(hole.max_len());
        let coords = hole
            .coords()
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.resize(k, 0);
                c
            })
            .collect();
        return Err(Error::Gap(WordD::from_parts(n, coords).to_string()));
    }
    Ok(PrefixCode { d, n, members })
}

/// Whether disjoint cones have total measure one, i.e. cover the space: a
/// nonempty clopen complement would have positive measure. `false` when the
/// sum cannot be formed exactly, leaving the cone-algebra test to decide.
fn kraft_full(members: &[WordD], n: usize) -> bool {
    let depth = members.iter().map(WordD::total_len).max().unwrap_or(0) as u32;
    let Some(whole) = (n as u128).checked_pow(depth) else { return false };
    let mut sum: u128 = 0;
    for w in members {
        match sum.checked_add((n as u128).pow(depth - w.total_len() as u32)) {
            Some(s) => sum = s,
            None => return false,
        }
    }
    sum == whole
}

/// A code of size `m` exists in `𝔠_n^d` iff `m ≡ 1 mod (n-1)`.
pub fn code_size_realizable(m: usize, _d: usize, n: usize) -> bool {
    m >= 1 && n >= 2 && (m - 1) % (n - 1) == 0
}

/// True iff no `n` members agree except for the final letter of one coordinate,
/// i.e. the code is not the result of splitting a smaller code.
pub fn refinement_irreducible(code: &PrefixCode) -> bool {
    let n = code.n;
    for i in 0..code.d {
        let mut groups: std::collections::HashMap<WordD, usize> = std::collections::HashMap::new();
        for w in &code.members {
            if w.coord(i).is_empty() {
                continue;
            }
            let mut coords = w.coords().to_vec();
            coords[i].pop();
            *groups.entry(WordD::from_parts(n, coords)).or_insert(0) += 1;
        }
        if groups.values().any(|&c| c == n) {
            return false;
        }
    }
    true
}

/// A code made by `splits` random refinement steps from `{ε_d}`; it has
/// `1 + splits·(n-1)` members.
pub fn random_code<R: Rng + ?Sized>(d: usize, n: usize, splits: usize, rng: &mut R) -> PrefixCode {
    let mut code = PrefixCode::trivial(d, n);
    for _ in 0..splits {
        let i = rng.gen_range(0..code.len());
        let coord = rng.gen_range(0..d);
        code = code.split(i, coord);
    }
    code
}
