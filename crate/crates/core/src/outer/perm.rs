use std::fmt;

use crate::error::{Error, Result};

/// A map `{0..d-1} → {0..d-1}`, written on the right: `(i)g = g[i]`.
/// Products read left to right, so `(i)(gh) = ((i)g)h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordinateMap(Vec<usize>);

impl CoordinateMap {
    pub fn new(images: Vec<usize>) -> Result<CoordinateMap> {
        let d = images.len();
        if d == 0 {
            return Err(Error::EmptySet);
        }
        if let Some(&bad) = images.iter().find(|&&j| j >= d) {
            return Err(Error::Precondition(format!("coordinate {bad} out of range for d = {d}")));
        }
        Ok(CoordinateMap(images))
    }

    pub fn identity(d: usize) -> CoordinateMap {
        CoordinateMap((0..d).collect())
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_bijection(&self) -> bool {
        let mut hit = vec![false; self.0.len()];
        self.0.iter().all(|&j| !std::mem::replace(&mut hit[j], true))
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &CoordinateMap) -> CoordinateMap {
        CoordinateMap(self.0.iter().map(|&j| other.0[j]).collect())
    }

    pub fn inverse(&self) -> Option<CoordinateMap> {
        if !self.is_bijection() {
            return None;
        }
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Some(CoordinateMap(inv))
    }

    /// Parses cycle notation such as `(0 1)(2 3)` or `()`; `d` fixes the degree.
    pub fn parse_cycles(s: &str, d: usize) -> Result<CoordinateMap> {
        let mut images: Vec<usize> = (0..d).collect();
        let mut seen = vec![false; d];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = open.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = &open[..close];
            let points = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad point {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            for (k, &p) in points.iter().enumerate() {
                if p >= d || std::mem::replace(&mut seen[p], true) {
                    return Err(Error::Parse(format!("point {p} repeated or out of range in {s:?}")));
                }
                images[p] = points[(k + 1) % points.len()];
            }
            rest = open[close + 1..].trim_start();
        }
        Ok(CoordinateMap(images))
    }
}

/// Cycle notation with fixed points omitted; the identity is `()`. A map that
/// is not a bijection prints as its image list, e.g. `[0 0]`.
impl fmt::Display for CoordinateMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_bijection() {
            let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
            return write!(f, "[{}]", parts.join(" "));
        }
        if self.is_identity() {
            return write!(f, "()");
        }
        let mut done = vec![false; self.0.len()];
        for start in 0..self.0.len() {
            if done[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            done[start] = true;
            let mut i = self.0[start];
            while i != start {
                cycle.push(i);
                done[i] = true;
                i = self.0[i];
            }
            let parts: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}
