use std::collections::BTreeMap;
use std::fmt;

use super::WordD;
use crate::error::{Error, Result};

/// A clopen subset of `𝔠_n^d`, stored as a normalized set of pairwise disjoint cones.
///
/// Normalization goes through the unique minimal square tree of the set (each
/// level reads one letter in every coordinate) and then merges sibling
/// families greedily in a fixed order. The stored cone list is therefore a
/// function of the point set alone, and `==` is set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConeSet {
    d: usize,
    n: usize,
    cones: Vec<WordD>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tree {
    Empty,
    Full,
    Node(Vec<Tree>),
}

impl Tree {
    fn fanout(d: usize, n: usize) -> usize {
        n.pow(d as u32)
    }

    fn settle(children: Vec<Tree>) -> Tree {
        if children.iter().all(|c| *c == Tree::Full) {
            Tree::Full
        } else if children.iter().all(|c| *c == Tree::Empty) {
            Tree::Empty
        } else {
            Tree::Node(children)
        }
    }

    fn insert(self, cone: &[&[u8]], d: usize, n: usize) -> Tree {
        if cone.iter().all(|c| c.is_empty()) {
            return Tree::Full;
        }
        let mut children = match self {
            Tree::Full => return Tree::Full,
            Tree::Empty => vec![Tree::Empty; Self::fanout(d, n)],
            Tree::Node(ch) => ch,
        };
        let rest: Vec<&[u8]> = cone.iter().map(|c| if c.is_empty() { *c } else { &c[1..] }).collect();
        for (u, child) in children.iter_mut().enumerate() {
            if matches_square_letter(u, cone, d, n) {
                *child = std::mem::replace(child, Tree::Empty).insert(&rest, d, n);
            }
        }
        Tree::settle(children)
    }

    fn union(a: Tree, b: Tree) -> Tree {
        match (a, b) {
            (Tree::Full, _) | (_, Tree::Full) => Tree::Full,
            (Tree::Empty, x) | (x, Tree::Empty) => x,
            (Tree::Node(x), Tree::Node(y)) => {
                Tree::settle(x.into_iter().zip(y).map(|(p, q)| Tree::union(p, q)).collect())
            }
        }
    }

    fn intersect(a: Tree, b: Tree) -> Tree {
        match (a, b) {
            (Tree::Empty, _) | (_, Tree::Empty) => Tree::Empty,
            (Tree::Full, x) | (x, Tree::Full) => x,
            (Tree::Node(x), Tree::Node(y)) => {
                Tree::settle(x.into_iter().zip(y).map(|(p, q)| Tree::intersect(p, q)).collect())
            }
        }
    }

    fn complement(self) -> Tree {
        match self {
            Tree::Empty => Tree::Full,
            Tree::Full => Tree::Empty,
            Tree::Node(ch) => Tree::Node(ch.into_iter().map(Tree::complement).collect()),
        }
    }

    fn leaves(&self, path: &mut Vec<usize>, d: usize, n: usize, out: &mut Vec<WordD>) {
        match self {
            Tree::Empty => {}
            Tree::Full => out.push(square_word_of_path(path, d, n)),
            Tree::Node(ch) => {
                for (u, c) in ch.iter().enumerate() {
                    path.push(u);
                    c.leaves(path, d, n, out);
                    path.pop();
                }
            }
        }
    }
}

/// Square letter `u` encodes one letter per coordinate, coordinate 0 most significant.
fn square_letter(u: usize, d: usize, n: usize) -> Vec<u8> {
    let mut letters = vec![0u8; d];
    let mut r = u;
    for i in (0..d).rev() {
        letters[i] = (r % n) as u8;
        r /= n;
    }
    letters
}

fn matches_square_letter(u: usize, cone: &[&[u8]], d: usize, n: usize) -> bool {
    let letters = square_letter(u, d, n);
    cone.iter().zip(&letters).all(|(c, &x)| c.is_empty() || c[0] == x)
}

fn square_word_of_path(path: &[usize], d: usize, n: usize) -> WordD {
    let mut coords = vec![Vec::with_capacity(path.len()); d];
    for &u in path {
        for (i, x) in square_letter(u, d, n).into_iter().enumerate() {
            coords[i].push(x);
        }
    }
    WordD::from_parts(n, coords)
}

/// Merges complete sibling families (n cones equal except for the last letter
/// of one coordinate) until none remain. Coordinates are scanned in order and
/// families in lexicographic order, so the result is deterministic.
fn merge_siblings(cones: Vec<WordD>, d: usize, n: usize) -> Vec<WordD> {
    let mut set: std::collections::BTreeSet<WordD> = cones.into_iter().collect();
    loop {
        let mut changed = false;
        for i in 0..d {
            let mut families: BTreeMap<WordD, usize> = BTreeMap::new();
            for c in &set {
                if let Some(parent) = parent_in(c, i) {
                    *families.entry(parent).or_insert(0) += 1;
                }
            }
            for (parent, count) in families {
                if count < n {
                    continue;
                }
                let kids: Vec<WordD> = (0..n as u8).map(|x| child_in(&parent, i, x)).collect();
                if kids.iter().all(|k| set.contains(k)) {
                    for k in &kids {
                        set.remove(k);
                    }
                    set.insert(parent);
                    changed = true;
                }
            }
        }
        if !changed {
            return set.into_iter().collect();
        }
    }
}

fn parent_in(c: &WordD, i: usize) -> Option<WordD> {
    if c.coord(i).is_empty() {
        return None;
    }
    let mut coords = c.coords().to_vec();
    coords[i].pop();
    Some(WordD::from_parts(c.alphabet(), coords))
}

fn child_in(p: &WordD, i: usize, x: u8) -> WordD {
    let mut coords = p.coords().to_vec();
    coords[i].push(x);
    WordD::from_parts(p.alphabet(), coords)
}

impl ConeSet {
    /// The union of the given cones, normalized. The cones may overlap.
    pub fn new(d: usize, n: usize, cones: Vec<WordD>) -> Result<ConeSet> {
        for c in &cones {
            if c.dims() != d {
                return Err(Error::DimMismatch { expected: d, found: c.dims() });
            }
            if c.alphabet() != n {
                return Err(Error::AlphabetMismatch { expected: n, found: c.alphabet() });
            }
        }
        Ok(Self::from_tree(Self::tree_of(&cones, d, n), d, n))
    }

    pub(crate) fn from_cones_unchecked(d: usize, n: usize, cones: &[WordD]) -> ConeSet {
        Self::from_tree(Self::tree_of(cones, d, n), d, n)
    }

    pub fn full(d: usize, n: usize) -> ConeSet {
        ConeSet { d, n, cones: vec![WordD::empty(d, n)] }
    }

    pub fn empty(d: usize, n: usize) -> ConeSet {
        ConeSet { d, n, cones: Vec::new() }
    }

    pub fn cone(w: &WordD) -> ConeSet {
        Self::from_cones_unchecked(w.dims(), w.alphabet(), std::slice::from_ref(w))
    }

    fn tree_of(cones: &[WordD], d: usize, n: usize) -> Tree {
        let mut t = Tree::Empty;
        for c in cones {
            let view: Vec<&[u8]> = c.coords().iter().map(Vec::as_slice).collect();
            t = t.insert(&view, d, n);
        }
        t
    }

    fn tree(&self) -> Tree {
        Self::tree_of(&self.cones, self.d, self.n)
    }

    fn from_tree(t: Tree, d: usize, n: usize) -> ConeSet {
        let mut leaves = Vec::new();
        t.leaves(&mut Vec::new(), d, n, &mut leaves);
        ConeSet { d, n, cones: merge_siblings(leaves, d, n) }
    }

    fn check(&self, other: &ConeSet) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimMismatch { expected: self.d, found: other.d });
        }
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.d
    }

    pub fn alphabet(&self) -> usize {
        self.n
    }

    /// The normalized cones, sorted.
    pub fn cones(&self) -> &[WordD] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.cones.len() == 1 && self.cones[0].is_empty()
    }

    pub fn union(&self, other: &ConeSet) -> Result<ConeSet> {
        self.check(other)?;
        Ok(Self::from_tree(Tree::union(self.tree(), other.tree()), self.d, self.n))
    }

    pub fn intersect(&self, other: &ConeSet) -> Result<ConeSet> {
        self.check(other)?;
        Ok(Self::from_tree(Tree::intersect(self.tree(), other.tree()), self.d, self.n))
    }

    pub fn complement(&self) -> ConeSet {
        Self::from_tree(self.tree().complement(), self.d, self.n)
    }

    /// Re-normalizes; a no-op on values built by this type.
    pub fn normalize(&self) -> ConeSet {
        Self::from_tree(self.tree(), self.d, self.n)
    }

    /// Union of many sets in one tree pass.
    pub fn union_all<'a, I: IntoIterator<Item = &'a ConeSet>>(d: usize, n: usize, sets: I) -> ConeSet {
        let mut t = Tree::Empty;
        for s in sets {
            for c in &s.cones {
                let view: Vec<&[u8]> = c.coords().iter().map(Vec::as_slice).collect();
                t = t.insert(&view, d, n);
            }
        }
        Self::from_tree(t, d, n)
    }

    /// `w · S`, the image of the set under the prefix map `λ_w`. Not normalized.
    pub(crate) fn prefixed_cones(&self, w: &WordD) -> impl Iterator<Item = WordD> + '_ {
        let w = w.clone();
        self.cones.iter().map(move |c| w.cat(c))
    }

    /// True iff the cone `w𝔠` lies inside the set.
    pub fn contains_cone(&self, w: &WordD) -> bool {
        let c = Self::tree_of(std::slice::from_ref(w), self.d, self.n);
        Tree::intersect(self.tree(), c.clone()) == c
    }

    /// The set's signature: number of cones in a disjoint decomposition,
    /// reduced mod `n - 1`. Returned as the representative in `0..n-1`.
    pub fn ssig(&self) -> u64 {
        let m = (self.n - 1) as u64;
        self.cones.len() as u64 % m
    }

    /// Deepest coordinate length over all cones.
    pub fn depth(&self) -> usize {
        self.cones.iter().map(WordD::max_len).max().unwrap_or(0)
    }
}

impl fmt::Display for ConeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.cones.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ConeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
