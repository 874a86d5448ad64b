//! The JSON machine format and Graphviz export.

use std::collections::HashMap;
use std::fmt::Write as _;

use dvn::machine::{Diagram, Generator, Sig};
use dvn::words::{parse_letters, WordD};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainSig {
    pub d: usize,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeSig {
    pub k: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub coord: usize,
    pub letter: u8,
    pub to: String,
    /// One digit string per range coordinate.
    pub out: Vec<String>,
}

/// A diagram on disk. The first state is the base state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineFile {
    pub domain: DomainSig,
    pub range: RangeSig,
    pub states: Vec<String>,
    pub edges: Vec<Edge>,
}

/// A parsed diagram together with its state names.
#[derive(Clone, Debug)]
pub struct Named {
    pub diagram: Diagram,
    pub names: Vec<String>,
}

impl Named {
    /// States named `q0, q1, ...`.
    pub fn indexed(diagram: Diagram) -> Named {
        let names = (0..diagram.states()).map(|q| format!("q{q}")).collect();
        Named { diagram, names }
    }

    pub fn state(&self, name: &str) -> Result<usize, CliError> {
        self.names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| CliError::Domain(format!("NoSuchState: {name}")))
    }
}

fn letters_text(w: &[u8]) -> String {
    w.iter().map(|x| char::from(b'0' + x)).collect()
}

impl MachineFile {
    pub fn from_named(named: &Named) -> Result<MachineFile, CliError> {
        let d = &named.diagram;
        let (dom, ran) = (d.domain(), d.range());
        if ran.alphabet > 10 {
            return Err(CliError::Domain(format!("range alphabet {} has no digit-string form", ran.alphabet)));
        }
        let mut edges = Vec::with_capacity(d.states() * dom.gens());
        for q in 0..d.states() {
            for g in 0..dom.gens() {
                let gen = dom.generator_at(g);
                let (t, o) = d.step_idx(q, gen);
                edges.push(Edge {
                    from: named.names[q].clone(),
                    coord: gen.coord,
                    letter: gen.letter,
                    to: named.names[t].clone(),
                    out: o.coords().iter().map(|c| letters_text(c)).collect(),
                });
            }
        }
        Ok(MachineFile {
            domain: DomainSig { d: dom.dims, n: dom.alphabet },
            range: RangeSig { k: ran.dims, m: ran.alphabet },
            states: named.names.clone(),
            edges,
        })
    }

    /// Builds the diagram, checking names, totality, letters and coherence.
    pub fn to_named(&self) -> Result<Named, CliError> {
        let dom = Sig::new(self.domain.d, self.domain.n);
        let ran = Sig::new(self.range.k, self.range.m);
        if dom.dims == 0 || dom.alphabet < 2 || ran.dims == 0 || ran.alphabet < 2 {
            return Err(CliError::Domain(format!("invalid signature: domain {dom}, range {ran}")));
        }
        if self.states.is_empty() {
            return Err(CliError::Domain("a machine needs at least one state".into()));
        }
        let mut index = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(CliError::Domain(format!("duplicate state name {s:?}")));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| CliError::Domain(format!("NoSuchState: {s}")));
        let gens = dom.gens();
        let mut slots: Vec<Option<(usize, WordD)>> = vec![None; self.states.len() * gens];
        for e in &self.edges {
            let from = lookup(&e.from)?;
            let to = lookup(&e.to)?;
            if e.coord >= dom.dims || e.letter as usize >= dom.alphabet {
                return Err(CliError::Domain(format!(
                    "edge {}/{}@{} is outside the domain {dom}",
                    e.from, e.letter, e.coord
                )));
            }
            if e.out.len() != ran.dims {
                return Err(CliError::Domain(format!(
                    "edge {} {}@{} has {} output coordinates, expected {}",
                    e.from,
                    e.letter,
                    e.coord,
                    e.out.len(),
                    ran.dims
                )));
            }
            let coords = e.out.iter().map(|s| parse_letters(s, ran.alphabet)).collect::<dvn::Result<Vec<_>>>()?;
            let slot = &mut slots[from * gens + Generator::new(e.coord, e.letter).index(dom.alphabet)];
            if slot.is_some() {
                return Err(CliError::Domain(format!("edge {} {}@{} appears twice", e.from, e.letter, e.coord)));
            }
            *slot = Some((to, WordD::new(ran.alphabet, coords)?));
        }
        let mut trans = Vec::with_capacity(slots.len());
        let mut out = Vec::with_capacity(slots.len());
        for (i, s) in slots.into_iter().enumerate() {
            let Some((t, o)) = s else {
                let g = dom.generator_at(i % gens);
                return Err(CliError::Domain(format!("NotTotal: no edge for {g} at state {}", self.states[i / gens])));
            };
            trans.push(t);
            out.push(o);
        }
        let diagram = Diagram::new(dom, ran, trans, out).map_err(|e| name_states(e, &self.states))?;
        Ok(Named { diagram, names: self.states.clone() })
    }
}

/// Library errors with state indices replaced by the file's state names.
pub fn name_states(e: dvn::Error, names: &[String]) -> CliError {
    use dvn::Error::*;
    match e {
        IncoherentTransition { state, x, y } => {
            CliError::Domain(format!("IncoherentTransition at state {}, gens ({x}, {y})", names[state]))
        }
        IncoherentOutput { state, x, y } => {
            CliError::Domain(format!("IncoherentOutput at state {}, gens ({x}, {y})", names[state]))
        }
        other => other.into(),
    }
}

pub fn parse_machine(text: &str) -> Result<Named, CliError> {
    let file: MachineFile =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed machine file: {e}")))?;
    file.to_named()
}

pub fn serialize_machine(named: &Named) -> Result<String, CliError> {
    let file = MachineFile::from_named(named)?;
    Ok(serde_json::to_string_pretty(&file).expect("machine files serialize"))
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            q.push('\\');
        }
        q.push(ch);
    }
    q.push('"');
    q
}

/// An output word as edge-label text: digit strings, `ε` for empty
/// coordinates, parenthesised when there is more than one coordinate.
fn output_label(w: &WordD) -> String {
    let parts: Vec<String> =
        w.coords().iter().map(|c| if c.is_empty() { "ε".to_string() } else { letters_text(c) }).collect();
    if parts.len() == 1 {
        parts.into_iter().next().unwrap()
    } else {
        format!("({})", parts.join(","))
    }
}

/// Graphviz source: one node per state (the base state doubled), one edge per
/// generator labelled `x_{d,i}/output`.
pub fn render_dot(named: &Named) -> String {
    let d = &named.diagram;
    let dom = d.domain();
    let mut s = String::from("digraph transducer {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (q, name) in named.names.iter().enumerate() {
        let shape = if q == 0 { " shape=doublecircle" } else { "" };
        let _ = writeln!(s, "  {} [label={}{}];", quote(&format!("s{q}")), quote(name), shape);
    }
    for q in 0..d.states() {
        for g in 0..dom.gens() {
            let gen = dom.generator_at(g);
            let (t, o) = d.step_idx(q, gen);
            let label = format!("{}_{{{},{}}}/{}", gen.letter, dom.dims, gen.coord, output_label(o));
            let _ = writeln!(s, "  {} -> {} [label={}];", quote(&format!("s{q}")), quote(&format!("s{t}")), quote(&label));
        }
    }
    s.push_str("}\n");
    s
}
