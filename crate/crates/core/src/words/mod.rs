//! Tuples of finite words over `{0..n-1}`, the product prefix order, cones and
//! complete prefix codes.

mod code;
mod cone;

pub use code::{code_size_realizable, random_code, refinement_irreducible, validate_prefix_code, PrefixCode};
pub use cone::ConeSet;

use std::fmt;

use crate::error::{Error, Result};

/// A `d`-tuple of finite words over the alphabet `{0..n-1}`.
///
/// Ordering is by alphabet size, then coordinatewise lexicographic, which is
/// the tie-break order used by every canonical construction in the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordD {
    n: usize,
    coords: Vec<Vec<u8>>,
}

impl WordD {
    pub fn new(n: usize, coords: Vec<Vec<u8>>) -> Result<Self> {
        if n < 2 || n > 256 {
            return Err(Error::BadSignature(format!("alphabet size {n}")));
        }
        if coords.is_empty() {
            return Err(Error::BadSignature("dimension 0".into()));
        }
        for c in &coords {
            if let Some(&x) = c.iter().find(|&&x| x as usize >= n) {
                return Err(Error::LetterOutOfRange { letter: x as usize, n });
            }
        }
        Ok(WordD { n, coords })
    }

    /// Builds a word without checking letters. Callers guarantee every letter is `< n`.
    pub(crate) fn from_parts(n: usize, coords: Vec<Vec<u8>>) -> Self {
        debug_assert!(coords.iter().flatten().all(|&x| (x as usize) < n));
        WordD { n, coords }
    }

    /// The empty tuple `ε_d`.
    pub fn empty(d: usize, n: usize) -> Self {
        WordD { n, coords: vec![Vec::new(); d] }
    }

    /// The generator `x_{d,i}`: letter `x` in coordinate `i`, empty elsewhere.
    pub fn generator(d: usize, n: usize, coord: usize, letter: u8) -> Self {
        let mut w = Self::empty(d, n);
        w.coords[coord].push(letter);
        w
    }

    /// A one-dimensional word.
    pub fn single(n: usize, letters: &[u8]) -> Self {
        WordD::from_parts(n, vec![letters.to_vec()])
    }

    pub fn dims(&self) -> usize {
        self.coords.len()
    }

    pub fn alphabet(&self) -> usize {
        self.n
    }

    pub fn coord(&self, i: usize) -> &[u8] {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[Vec<u8>] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Vec<u8>> {
        self.coords
    }

    pub fn is_empty(&self) -> bool {
        self.coords.iter().all(|c| c.is_empty())
    }

    pub fn max_len(&self) -> usize {
        self.coords.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> usize {
        self.coords.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn total_len(&self) -> usize {
        self.coords.iter().map(Vec::len).sum()
    }

    /// True when every coordinate has the same length.
    pub fn is_square(&self) -> bool {
        self.coords.iter().all(|c| c.len() == self.coords[0].len())
    }

    fn check_same(&self, other: &WordD) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimMismatch { expected: self.dims(), found: other.dims() });
        }
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// Coordinatewise concatenation.
    pub fn concat(&self, other: &WordD) -> Result<WordD> {
        self.check_same(other)?;
        Ok(self.cat(other))
    }

    /// Concatenation for operands already known to share a signature.
    pub(crate) fn cat(&self, other: &WordD) -> WordD {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let mut c = Vec::with_capacity(a.len() + b.len());
                c.extend_from_slice(a);
                c.extend_from_slice(b);
                c
            })
            .collect();
        WordD { n: self.n, coords }
    }

    pub(crate) fn push(&mut self, other: &WordD) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            a.extend_from_slice(b);
        }
    }

    /// The product prefix order: every coordinate of `self` is a prefix of the
    /// matching coordinate of `other`.
    pub fn is_prefix(&self, other: &WordD) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.le(other))
    }

    pub(crate) fn le(&self, other: &WordD) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| b.starts_with(a))
    }

    /// Comparable coordinatewise: in each coordinate one word is a prefix of the
    /// other, so the two cones intersect.
    pub(crate) fn compatible(&self, other: &WordD) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| a.starts_with(b) || b.starts_with(a))
    }

    /// For compatible words, the coordinatewise longer word. Its cone is the
    /// intersection of the two cones.
    pub(crate) fn join(&self, other: &WordD) -> WordD {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| if a.len() >= b.len() { a.clone() } else { b.clone() })
            .collect();
        WordD { n: self.n, coords }
    }

    /// Returns `r` with `p · r = self`.
    pub fn strip_prefix(&self, p: &WordD) -> Result<WordD> {
        self.check_same(p)?;
        self.strip(p).ok_or_else(|| Error::NotPrefix { prefix: p.to_string(), word: self.to_string() })
    }

    pub(crate) fn strip(&self, p: &WordD) -> Option<WordD> {
        if !p.le(self) {
            return None;
        }
        let coords = self.coords.iter().zip(&p.coords).map(|(w, a)| w[a.len()..].to_vec()).collect();
        Some(WordD { n: self.n, coords })
    }

    /// Keeps only coordinate `i`, as a one-dimensional word.
    pub fn project(&self, i: usize) -> WordD {
        WordD { n: self.n, coords: vec![self.coords[i].clone()] }
    }

    /// Truncates every coordinate to at most `k` letters.
    pub fn truncate(&self, k: usize) -> WordD {
        let coords = self.coords.iter().map(|c| c[..c.len().min(k)].to_vec()).collect();
        WordD { n: self.n, coords }
    }

    /// Reads the word as a sequence of generators, coordinate-major.
    pub fn generators(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.coords.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&x| (i, x)))
    }

    /// Re-embeds a `d`-tuple into `total` coordinates, starting at `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> WordD {
        let mut coords = vec![Vec::new(); total];
        for (i, c) in self.coords.iter().enumerate() {
            coords[offset + i] = c.clone();
        }
        WordD { n: self.n, coords }
    }

    /// Concatenates tuples side by side: `(a0..) ⊕ (b0..) = (a0.., b0..)`.
    pub fn juxtapose(parts: &[WordD]) -> WordD {
        let n = parts[0].n;
        WordD { n, coords: parts.iter().flat_map(|p| p.coords.iter().cloned()).collect() }
    }
}

/// Coordinatewise longest common prefix; the greatest lower bound in the
/// product prefix order.
pub fn lcp<'a, I>(words: I) -> Result<WordD>
where
    I: IntoIterator<Item = &'a WordD>,
{
    let mut it = words.into_iter();
    let first = it.next().ok_or(Error::EmptySet)?;
    let mut acc: Vec<usize> = first.coords.iter().map(Vec::len).collect();
    for w in it {
        first.check_same(w)?;
        for (i, len) in acc.iter_mut().enumerate() {
            let a = &first.coords[i];
            let b = &w.coords[i];
            *len = a[..*len].iter().zip(b).take_while(|(x, y)| x == y).count();
        }
    }
    let coords = first.coords.iter().zip(&acc).map(|(c, &l)| c[..l].to_vec()).collect();
    Ok(WordD { n: first.n, coords })
}

/// All square words of level `k`: every coordinate of length exactly `k`.
/// There are `n^{kd}` of them, listed in lexicographic order.
pub fn square_words(d: usize, n: usize, k: usize) -> Vec<WordD> {
    let total = d * k;
    let count = n.checked_pow(total as u32).expect("square level too large");
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0u8; total];
    for _ in 0..count {
        let coords = (0..d).map(|i| digits[i * k..(i + 1) * k].to_vec()).collect();
        out.push(WordD { n, coords });
        for pos in (0..total).rev() {
            digits[pos] += 1;
            if (digits[pos] as usize) < n {
                break;
            }
            digits[pos] = 0;
        }
    }
    out
}

fn fmt_letters(f: &mut fmt::Formatter<'_>, c: &[u8]) -> fmt::Result {
    for &x in c {
        if x < 10 {
            write!(f, "{x}")?;
        } else {
            write!(f, "[{x}]")?;
        }
    }
    Ok(())
}

impl fmt::Display for WordD {
    /// Text syntax: `(01,1,)`, one digit string per coordinate.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            fmt_letters(f, c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for WordD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a digit string such as `011` into letters.
pub fn parse_letters(s: &str, n: usize) -> Result<Vec<u8>> {
    s.chars()
        .map(|ch| {
            let x = ch.to_digit(10).ok_or_else(|| Error::Parse(format!("bad letter {ch:?}")))? as usize;
            if x >= n {
                return Err(Error::LetterOutOfRange { letter: x, n });
            }
            Ok(x as u8)
        })
        .collect()
}

impl WordD {
    /// Parses the text syntax `(01,1,)` over an alphabet of size `n <= 10`.
    pub fn parse(s: &str, n: usize) -> Result<WordD> {
        if n > 10 {
            return Err(Error::Parse("text syntax supports alphabets of size at most 10".into()));
        }
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected parenthesised word, got {t:?}")))?;
        let coords = inner.split(',').map(|c| parse_letters(c.trim(), n)).collect::<Result<Vec<_>>>()?;
        WordD::new(n, coords)
    }
}
