//! Bounded enumeration of transducers up to strong isomorphism.
//!
//! Every emitted diagram is the representative of its class: synchronizing,
//! strongly connected diagrams are numbered breadth-first from `𝔰((0^k)^d)`
//! (the canonical form of [`crate::outer`]); all others use the
//! lexicographically least table over state permutations. A table is emitted
//! iff it equals its own representative, so no class appears twice.

use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{
    core_states, images, injectivity, is_nondegenerate, minimize, reachable, Diagram, Injectivity, Sig,
    DEFAULT_IMAGE_CAP,
};
use crate::outer::{find_inverse_among, CoreElement};
use crate::words::WordD;

/// Filter stages, in pipeline order. Validity (totality and coherence) is
/// always applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Valid,
    NonDegenerate,
    Synchronizing,
    Core,
    CompleteResponse,
    Minimal,
    Injective,
    Invertible,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Valid,
        Stage::NonDegenerate,
        Stage::Synchronizing,
        Stage::Core,
        Stage::CompleteResponse,
        Stage::Minimal,
        Stage::Injective,
        Stage::Invertible,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Valid => "valid",
            Stage::NonDegenerate => "non-degenerate",
            Stage::Synchronizing => "synchronizing",
            Stage::Core => "core",
            Stage::CompleteResponse => "complete-response",
            Stage::Minimal => "minimal",
            Stage::Injective => "injective",
            Stage::Invertible => "invertible",
        }
    }

    pub fn parse(s: &str) -> Result<Stage> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown filter {s:?}")))
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Search bounds and filters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub dims: usize,
    pub alphabet: usize,
    pub max_states: usize,
    /// Every coordinate of every generator output has at most this length.
    pub output_cap: usize,
    /// Enabled stages besides validity, applied in pipeline order.
    pub filters: Vec<Stage>,
    /// Largest number of raw tables the search may visit. One-dimensional
    /// core searches count output length patterns instead of output tables.
    pub budget: u128,
}

pub const DEFAULT_OUTPUT_CAP: usize = 2;
pub const DEFAULT_BUDGET: u128 = 200_000_000;

impl EnumerationSpec {
    pub fn new(dims: usize, alphabet: usize, max_states: usize) -> EnumerationSpec {
        EnumerationSpec {
            dims,
            alphabet,
            max_states,
            output_cap: DEFAULT_OUTPUT_CAP,
            filters: Vec::new(),
            budget: DEFAULT_BUDGET,
        }
    }

    /// Every stage up to and including `Injective`: the canonical core elements.
    pub fn core_elements(dims: usize, alphabet: usize, max_states: usize) -> EnumerationSpec {
        EnumerationSpec { filters: Stage::ALL[1..7].to_vec(), ..EnumerationSpec::new(dims, alphabet, max_states) }
    }

    pub fn with_cap(mut self, cap: usize) -> EnumerationSpec {
        self.output_cap = cap;
        self
    }

    pub fn with_filters(mut self, filters: &[Stage]) -> EnumerationSpec {
        self.filters = filters.to_vec();
        self
    }

    pub fn with_budget(mut self, budget: u128) -> EnumerationSpec {
        self.budget = budget;
        self
    }

    fn enabled(&self, s: Stage) -> bool {
        s == Stage::Valid || self.filters.contains(&s)
    }

    fn check(&self) -> Result<Sig> {
        if self.dims == 0 || self.alphabet < 2 || self.max_states == 0 {
            return Err(Error::BadSignature(format!(
                "d = {}, n = {}, max_states = {}",
                self.dims, self.alphabet, self.max_states
            )));
        }
        Ok(Sig::new(self.dims, self.alphabet))
    }
}

/// All words of the signature with every coordinate at most `cap` long, in a fixed order.
fn output_words(sig: Sig, cap: usize) -> Vec<WordD> {
    let mut one: Vec<Vec<u8>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for w in &frontier {
            for x in 0..sig.alphabet as u8 {
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        one.extend(next.iter().cloned());
        frontier = next;
    }
    let mut all: Vec<Vec<Vec<u8>>> = vec![Vec::new()];
    for _ in 0..sig.dims {
        all = all
            .into_iter()
            .flat_map(|prefix| {
                one.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    all.into_iter().map(|coords| WordD::new(sig.alphabet, coords).expect("letters in range")).collect()
}

/// Advances a little-endian mixed-radix counter; false on wrap-around.
fn bump(digits: &mut [usize], radix: usize) -> bool {
    for x in digits.iter_mut().rev() {
        *x += 1;
        if *x < radix {
            return true;
        }
        *x = 0;
    }
    false
}

/// As [`bump`], with a radix per digit.
fn bump_mixed(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

fn sort_key(d: &Diagram) -> (usize, Vec<usize>, Vec<WordD>) {
    (d.states(), d.trans_table().to_vec(), d.out_table().to_vec())
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    fn rec(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(p, i + 1, out);
            p.swap(i, j);
        }
    }
    rec(&mut p, 0, &mut out);
    out
}

/// Breadth-first renumbering from the synchronized root, when the diagram is
/// synchronizing and strongly connected.
fn sync_numbering(d: &Diagram) -> Option<Diagram> {
    let core = core_states(d).ok()?;
    if core.len() != d.states() {
        return None;
    }
    let sig = d.domain();
    let k = crate::machine::synchronizing_level(d).ok()?;
    let root = d.trans_word(0, &WordD::from_parts(sig.alphabet, vec![vec![0; k]; sig.dims]));
    let order = reachable(d, root);
    (order.len() == d.states()).then(|| d.restrict(&order).expect("order is all states"))
}

/// The class representative described in the module docs.
pub fn representative(d: &Diagram) -> Diagram {
    if let Some(c) = sync_numbering(d) {
        return c;
    }
    permutations(d.states())
        .into_iter()
        .map(|p| d.relabel(&p))
        .min_by_key(sort_key)
        .expect("at least one state")
}

fn is_representative(d: &Diagram) -> bool {
    match sync_numbering(d) {
        Some(c) => c == *d,
        None => permutations(d.states()).into_iter().all(|p| sort_key(&d.relabel(&p)) >= sort_key(d)),
    }
}

/// First letters of each state's image in coordinate `j`, as a bitmask, from
/// square-letter tables. Least fixpoint; exact for non-degenerate diagrams.
fn first_letters(trans: &[usize], out: &[WordD], states: usize, s: usize, j: usize) -> Vec<u64> {
    let mut f = vec![0u64; states];
    loop {
        let mut changed = false;
        for q in 0..states {
            let mut m = f[q];
            for u in 0..s {
                let o = out[q * s + u].coord(j);
                m |= if o.is_empty() { f[trans[q * s + u]] } else { 1 << o[0] };
            }
            if m != f[q] {
                f[q] = m;
                changed = true;
            }
        }
        if !changed {
            return f;
        }
    }
}

/// Complete response without building cone sets: the image lcp at `q` is empty in
/// coordinate `j` iff the image has two first letters there.
fn has_response_letters(d: &Diagram) -> bool {
    let (trans, out) = d.square_tables();
    let s = d.domain().square_letters();
    (0..d.range().dims).all(|j| first_letters(&trans, &out, d.states(), s, j).iter().all(|m| m.count_ones() >= 2))
}

fn clopen_images(d: &Diagram) -> bool {
    if d.domain().dims == 1 && d.range().dims == 1 {
        return (0..d.states()).all(|q| clopen_image_1d(d, q));
    }
    images(d, DEFAULT_IMAGE_CAP).is_ok()
}

/// `(t, r)` stands for the set `r·I(t)`: a pending output, then the image of `t`.
type Atom = (usize, Vec<u8>);

/// Residual of an atom by one leading letter. Expanding an atom with no
/// pending output terminates because the diagram is non-degenerate.
fn residual(d: &Diagram, atom: &Atom, a: u8, acc: &mut Vec<Atom>) {
    let (t, r) = atom;
    if let Some((&first, rest)) = r.split_first() {
        if first == a {
            acc.push((*t, rest.to_vec()));
        }
        return;
    }
    for x in 0..d.domain().alphabet as u8 {
        let (t2, o) = d.step_idx(*t, crate::machine::Generator::new(0, x));
        residual(d, &(t2, o.coord(0).to_vec()), a, acc);
    }
}

/// Exact clopen test for one-dimensional, non-degenerate diagrams. Residuals
/// of `I(q)` are finite unions of atoms, so they form a finite automaton. The
/// image is clopen iff no reachable cycle passes through residuals that are
/// neither empty nor everything. A residual is everything iff the empty
/// residual is unreachable from it.
fn clopen_image_1d(d: &Diagram, q: usize) -> bool {
    use std::collections::HashMap;
    let n = d.range().alphabet as u8;
    let start: Vec<Atom> = vec![(q, Vec::new())];
    let mut index: HashMap<Vec<Atom>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut row = Vec::with_capacity(n as usize);
        for a in 0..n {
            let mut acc = Vec::new();
            for atom in &sets[i] {
                residual(d, atom, a, &mut acc);
            }
            acc.sort();
            acc.dedup();
            let j = *index.entry(acc.clone()).or_insert_with(|| {
                sets.push(acc);
                sets.len() - 1
            });
            row.push(j);
        }
        edges.push(row);
        i += 1;
    }
    let m = sets.len();
    // States that can reach the empty residual.
    let mut hits_empty: Vec<bool> = sets.iter().map(Vec::is_empty).collect();
    loop {
        let mut changed = false;
        for v in 0..m {
            if !hits_empty[v] && edges[v].iter().any(|&w| hits_empty[w]) {
                hits_empty[v] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let proper: Vec<bool> = (0..m).map(|v| hits_empty[v] && !sets[v].is_empty()).collect();
    // Cycle among proper residuals: peel off proper states with no proper successor.
    let mut alive = proper.clone();
    loop {
        let mut changed = false;
        for v in 0..m {
            if alive[v] && !edges[v].iter().any(|&w| alive[w]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    !alive.iter().any(|&a| a)
}

fn passes(d: &Diagram, stage: Stage) -> bool {
    match stage {
        Stage::Valid => true,
        Stage::NonDegenerate => is_nondegenerate(d),
        Stage::Synchronizing => core_states(d).is_ok(),
        Stage::Core => core_states(d).map(|c| c.len() == d.states()).unwrap_or(false),
        Stage::CompleteResponse => has_response_letters(d) && clopen_images(d),
        Stage::Minimal => minimize(d).0.states() == d.states(),
        Stage::Injective => (0..d.states()).all(|q| injectivity(d, q, None) == Injectivity::Yes),
        Stage::Invertible => unreachable!("invertibility is decided on the whole set"),
    }
}

/// All enabled stages at once, cheapest tests first. In dimension one the
/// exact clopen test is cheap and runs before injectivity, whose rejections
/// are slow; otherwise the image fixpoint, slow on non-clopen images, runs last.
fn passes_all(d: &Diagram, stages: &[Stage]) -> bool {
    let on = |s: Stage| stages.contains(&s);
    let one_dim = d.domain().dims == 1 && d.range().dims == 1;
    (!on(Stage::NonDegenerate) || passes(d, Stage::NonDegenerate))
        && (!on(Stage::Synchronizing) || passes(d, Stage::Synchronizing))
        && (!on(Stage::Core) || passes(d, Stage::Core))
        && (!on(Stage::CompleteResponse) || has_response_letters(d))
        && (!on(Stage::Minimal) || passes(d, Stage::Minimal))
        && (!on(Stage::CompleteResponse) || !one_dim || clopen_images(d))
        && (!on(Stage::Injective) || passes(d, Stage::Injective))
        && (!on(Stage::CompleteResponse) || one_dim || clopen_images(d))
}

/// Index-level tests for one-dimensional tables, run before a diagram is
/// built. Non-degeneracy and a measure balance that injectivity forces depend
/// only on output lengths; complete response is then read off first letters.
struct Precheck {
    first: Vec<Option<u8>>,
    /// `n^{-len}` for each output length.
    weight: Vec<f64>,
    /// Output word indices grouped by length.
    by_len: Vec<Vec<usize>>,
    g: usize,
    cr: bool,
    injective: bool,
}

impl Precheck {
    fn admits_lengths(&self, trans: &[usize], lens: &[usize], states: usize) -> bool {
        let g = self.g;
        // An empty-output cycle exists iff repeatedly pruning states without
        // empty-output successors leaves something behind.
        let mut alive = vec![true; states];
        loop {
            let mut changed = false;
            for q in 0..states {
                if alive[q] && !(0..g).any(|x| lens[q * g + x] == 0 && alive[trans[q * g + x]]) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if alive.iter().any(|&a| a) {
            return false;
        }
        !(self.injective && self.cr) || self.measure_balanced(trans, lens, states)
    }

    fn admits_letters(&self, trans: &[usize], out: &[usize], states: usize) -> bool {
        if !self.cr {
            return true;
        }
        let g = self.g;
        let mut f = vec![0u64; states];
        loop {
            let mut changed = false;
            for q in 0..states {
                let mut m = f[q];
                for x in 0..g {
                    m |= match self.first[out[q * g + x]] {
                        Some(a) => 1 << a,
                        None => f[trans[q * g + x]],
                    };
                }
                if m != f[q] {
                    f[q] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        f.iter().all(|m| m.count_ones() >= 2)
    }
}

impl Precheck {
    /// An injective state with clopen image splits its image disjointly as
    /// `⊔_x out(q,x)·I(t_x)`, so the image measures form a positive vector with
    /// `m = M m`, where `M[q][t] = Σ n^{-|out(q,x)|}` over letters `x` with
    /// `t_x = t`. For a strongly connected table, Perron-Frobenius then forces
    /// the spectral radius of `M` to be 1. Collatz-Wielandt bounds from a
    /// power iteration reject only when they prove otherwise.
    fn measure_balanced(&self, trans: &[usize], lens: &[usize], states: usize) -> bool {
        let g = self.g;
        let mut m = vec![0.0f64; states * states];
        for q in 0..states {
            for x in 0..g {
                m[q * states + trans[q * g + x]] += self.weight[lens[q * g + x]];
            }
        }
        let mut v = vec![1.0f64; states];
        for _ in 0..64 {
            let mv: Vec<f64> = (0..states).map(|q| (0..states).map(|t| m[q * states + t] * v[t]).sum::<f64>()).collect();
            let ratios = (0..states).map(|q| mv[q] / v[q]);
            let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
            if hi < 1.0 - 1e-9 || lo > 1.0 + 1e-9 {
                return false;
            }
            if hi - lo < 1e-12 {
                return true;
            }
            // Averaging with the identity keeps the iteration aperiodic.
            let norm: f64 = mv.iter().zip(&v).map(|(a, b)| a + b).sum();
            v = mv.iter().zip(&v).map(|(a, b)| (a + b) / norm).collect();
        }
        true
    }
}

/// Walks the raw space; `visit` receives each representative table with the
/// last stage it passed among the enabled ones (stages past `Injective`
/// excluded).
fn scan<F: FnMut(Diagram, Stage)>(spec: &EnumerationSpec, stop_early: bool, mut visit: F) -> Result<()> {
    let sig = spec.check()?;
    let words = output_words(sig, spec.output_cap);
    let g = sig.gens();
    let fast = spec.enabled(Stage::Core) && stop_early;
    let mut estimate: u128 = 0;
    for s in 1..=spec.max_states {
        let cells = (s * g) as u32;
        let t = (s as u128).checked_pow(cells).unwrap_or(u128::MAX);
        let w = (words.len() as u128).checked_pow(cells).unwrap_or(u128::MAX);
        estimate = estimate.saturating_add(if fast { t } else { t.saturating_mul(w) });
    }
    if estimate > spec.budget {
        return Err(Error::SpecTooLarge { estimate, budget: spec.budget });
    }
    let stages: Vec<Stage> = Stage::ALL[..7].iter().copied().filter(|&st| spec.enabled(st)).collect();
    let zero = sig.empty();
    let pre = (sig.dims == 1 && stop_early && spec.enabled(Stage::NonDegenerate)).then(|| Precheck {
        first: words.iter().map(|w| w.coord(0).first().copied()).collect(),
        weight: (0..=spec.output_cap).map(|l| (sig.alphabet as f64).powi(-(l as i32))).collect(),
        by_len: (0..=spec.output_cap)
            .map(|l| (0..words.len()).filter(|&i| words[i].coord(0).len() == l).collect())
            .collect(),
        g,
        cr: spec.enabled(Stage::CompleteResponse),
        injective: spec.enabled(Stage::Injective),
    });
    let mut try_table = |t: &[usize], odig: &[usize]| {
        let out: Vec<WordD> = odig.iter().map(|&i| words[i].clone()).collect();
        let Ok(d) = Diagram::new(sig, sig, t.to_vec(), out) else { return };
        if stop_early {
            if passes_all(&d, &stages) && (fast || is_representative(&d)) {
                visit(d, *stages.last().unwrap());
            }
        } else if is_representative(&d) {
            let mut reached = Stage::Valid;
            for &st in &stages[1..] {
                if !passes(&d, st) {
                    break;
                }
                reached = st;
            }
            visit(d, reached);
        }
    };
    for s in 1..=spec.max_states {
        let cells = s * g;
        let mut tdig = vec![0usize; cells];
        let mut tables: Vec<Vec<usize>> = Vec::new();
        loop {
            tables.push(tdig.clone());
            if !bump(&mut tdig, s) {
                break;
            }
        }
        if fast {
            // Outputs do not affect synchronization or the core, and a core's
            // representative numbering depends on transitions alone.
            tables.retain(|t| {
                let bare = Diagram::new(sig, sig, t.clone(), vec![zero.clone(); cells]);
                bare.map(|b| sync_numbering(&b).is_some_and(|c| c.trans_table() == t.as_slice())).unwrap_or(false)
            });
            // With prechecks, outputs are searched by length pattern first and
            // letters are filled in only for the rare patterns that survive.
            let per_table = if pre.is_some() { spec.output_cap as u128 + 1 } else { words.len() as u128 };
            let remaining = (tables.len() as u128).saturating_mul(per_table.saturating_pow(cells as u32));
            estimate = estimate.saturating_add(remaining);
            if estimate > spec.budget {
                return Err(Error::SpecTooLarge { estimate, budget: spec.budget });
            }
        }
        for t in &tables {
            match &pre {
                Some(p) => {
                    let mut lens = vec![0usize; cells];
                    loop {
                        if p.admits_lengths(t, &lens, s) {
                            let choices: Vec<&[usize]> = lens.iter().map(|&l| p.by_len[l].as_slice()).collect();
                            let mut pick = vec![0usize; cells];
                            loop {
                                let odig: Vec<usize> = (0..cells).map(|c| choices[c][pick[c]]).collect();
                                if p.admits_letters(t, &odig, s) {
                                    try_table(t, &odig);
                                }
                                if !bump_mixed(&mut pick, |c| choices[c].len()) {
                                    break;
                                }
                            }
                        }
                        if !bump(&mut lens, spec.output_cap + 1) {
                            break;
                        }
                    }
                }
                None => {
                    let mut odig = vec![0usize; cells];
                    loop {
                        try_table(t, &odig);
                        if !bump(&mut odig, words.len()) {
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// One representative per strong-isomorphism class passing every enabled
/// filter, sorted by (state count, transitions, outputs).
///
/// `Invertible` keeps the elements with a known inverse: a power that is
/// the identity, or a two-sided inverse inside the enumerated set. Elements
/// whose inverses need more states or longer outputs are dropped.
pub fn enumerate(spec: &EnumerationSpec) -> Result<Vec<Diagram>> {
    let mut found = Vec::new();
    scan(spec, true, |d, _| found.push(d))?;
    found.sort_by_key(sort_key);
    if spec.enabled(Stage::Invertible) {
        found = invertible_subset(found)?;
    }
    Ok(found)
}

fn invertible_subset(found: Vec<Diagram>) -> Result<Vec<Diagram>> {
    let elems: Vec<CoreElement> = found.iter().map(|d| CoreElement::from_canonical(d.clone())).collect();
    let mut keep = Vec::new();
    for (d, a) in found.into_iter().zip(&elems) {
        if find_inverse_among(a, &elems)?.is_some() {
            keep.push(d);
        }
    }
    Ok(keep)
}

/// The canonical core elements with at most `max_states` states and outputs
/// within `cap`: every filter up to `Injective`.
pub fn enumerate_core_elements(d: usize, n: usize, max_states: usize, cap: usize) -> Result<Vec<CoreElement>> {
    let spec = EnumerationSpec::core_elements(d, n, max_states).with_cap(cap);
    Ok(enumerate(&spec)?.into_iter().map(CoreElement::from_canonical).collect())
}

/// Number of classes surviving each stage of the full pipeline, enabled
/// filters or not: `(stage, count)` in pipeline order, non-increasing.
pub fn census(spec: &EnumerationSpec) -> Result<Vec<(Stage, usize)>> {
    let mut counts = [0usize; 7];
    let mut cores = Vec::new();
    let all = EnumerationSpec { filters: Stage::ALL[1..].to_vec(), ..spec.clone() };
    scan(&all, false, |d, reached| {
        for c in counts.iter_mut().take(reached as usize + 1) {
            *c += 1;
        }
        if reached == Stage::Injective {
            cores.push(d);
        }
    })?;
    cores.sort_by_key(sort_key);
    let inv = invertible_subset(cores)?.len();
    let mut rows: Vec<(Stage, usize)> = Stage::ALL[..7].iter().copied().zip(counts).collect();
    rows.push((Stage::Invertible, inv));
    Ok(rows)
}
