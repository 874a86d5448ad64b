//! Subcommands. Each returns its standard output as a string.

use clap::{Args, Parser, Subcommand};
use dvn::enumerate::{census, enumerate, EnumerationSpec, Stage, DEFAULT_BUDGET, DEFAULT_OUTPUT_CAP};
use dvn::homeo::{is_dvn_member, is_dvn_member_exchange, random_exchange, realize};
use dvn::machine::{complete_response, compose, core, minimize, product, run, synchronizing_level, Diagram, StateKey};
use dvn::outer::{
    canonicalize, decompose, find_inverse, multiply, psi, recompose, sig, wreath_coordinates, CoreElement,
};
use dvn::words::WordD;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::format::{render_dot, serialize_machine, MachineFile, Named};
use crate::input::{Inputs, Object};
use crate::CliError;

/// Transducers on powers of Cantor space. Maps compose left to right:
/// `compose A B` applies A first, then B.
#[derive(Debug, Parser)]
#[command(name = "dvn", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Search bounds shared by `enumerate` and `census`.
#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Dimension d of the domain and range.
    #[arg(long, default_value_t = 1)]
    pub dims: usize,
    /// Alphabet size n.
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 1)]
    pub max_states: usize,
    /// Longest output per coordinate of a generator.
    #[arg(long, default_value_t = DEFAULT_OUTPUT_CAP)]
    pub cap: usize,
    /// Comma-separated filter stages, e.g. `non-degenerate,synchronizing`.
    #[arg(long, value_delimiter = ',')]
    pub filters: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

impl SpecArgs {
    fn spec(&self) -> Result<EnumerationSpec, CliError> {
        let filters = self
            .filters
            .iter()
            .map(|f| Stage::parse(f).map_err(|e| CliError::Usage(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EnumerationSpec::new(self.dims, self.alphabet, self.max_states)
            .with_cap(self.cap)
            .with_filters(&filters)
            .with_budget(self.budget))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a machine file, code or exchange.
    Validate {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Print the final state and output on a word such as `(01,1)`.
    Run {
        input: String,
        word: String,
        /// Start state name (default: the base state).
        #[arg(long)]
        state: Option<String>,
    },
    /// Print the output on a word.
    Eval {
        input: String,
        word: String,
        #[arg(long)]
        state: Option<String>,
    },
    /// Merge states with equal behaviour.
    Minimize {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Move common output prefixes forward until every state responds completely.
    Cr {
        #[arg(default_value = "-")]
        input: String,
    },
    /// The least synchronizing level.
    Sync {
        #[arg(default_value = "-")]
        input: String,
    },
    /// The core: states reached by long enough words.
    Core {
        #[arg(default_value = "-")]
        input: String,
    },
    /// A then B.
    Compose { a: String, b: String },
    /// The product acting coordinatewise.
    Product {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Canonical core element.
    Canon {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Product of two core elements, A first.
    Mul { a: String, b: String },
    /// Whether the canonical core is the one-state identity.
    IsIdentity {
        #[arg(default_value = "-")]
        input: String,
    },
    /// The coordinate map, in cycle notation.
    Psi {
        #[arg(default_value = "-")]
        input: String,
    },
    /// The signature, as `r mod (n-1)`.
    Sig {
        #[arg(default_value = "-")]
        input: String,
    },
    /// One-dimensional factors, one machine per line.
    Decompose {
        #[arg(default_value = "-")]
        input: String,
    },
    /// The core of the product of one-dimensional factors.
    Recompose {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Wreath coordinates: the permutation, then one factor per line.
    Wreath {
        #[arg(default_value = "-")]
        input: String,
    },
    /// A two-sided inverse in the core monoid.
    Inverse {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Membership of the Brin-Thompson group.
    IsDvn {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        state: Option<String>,
    },
    /// A finite machine whose minimal transducer has the given core.
    Realize {
        #[arg(default_value = "-")]
        input: String,
        /// Graft state, numbered in the canonical form.
        #[arg(long, default_value_t = 0)]
        state: usize,
    },
    /// Representatives of the classes passing the filters, one per line.
    Enumerate(SpecArgs),
    /// Class counts after each filter stage.
    Census(SpecArgs),
    /// List the built-in fixtures, or print one.
    Catalog { name: Option<String> },
    /// Graphviz source for a diagram.
    Render {
        #[arg(default_value = "-")]
        input: String,
    },
    /// A random prefix exchange, one `source -> target` pair per line.
    Exchange {
        #[arg(long, default_value_t = 1)]
        dims: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 2)]
        splits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Renumbers so that `base` becomes state 0.
fn rebase(d: Diagram, base: usize) -> Diagram {
    if base == 0 {
        return d;
    }
    let mut perm: Vec<usize> = (0..d.states()).collect();
    perm.swap(0, base);
    d.relabel(&perm)
}

fn machine_text(d: Diagram) -> Result<String, CliError> {
    serialize_machine(&Named::indexed(d))
}

fn compact(d: &Diagram) -> Result<String, CliError> {
    let file = MachineFile::from_named(&Named::indexed(d.clone()))?;
    Ok(serde_json::to_string(&file).expect("machine files serialize"))
}

fn core_element(inputs: &mut Inputs, arg: &str) -> Result<CoreElement, CliError> {
    Ok(canonicalize(&inputs.diagram(arg)?.diagram)?)
}

fn lines<I: IntoIterator<Item = String>>(items: I) -> String {
    items.into_iter().map(|l| l + "\n").collect()
}

fn evaluate(inputs: &mut Inputs, input: &str, word: &str, state: Option<&str>) -> Result<(String, WordD), CliError> {
    let (m, base, names) = inputs.load(input)?.into_machine()?;
    let start = match (state, &names) {
        (None, _) => base,
        (Some(s), Some(names)) => StateKey::Index(
            names.iter().position(|n| n == s).ok_or_else(|| CliError::Domain(format!("NoSuchState: {s}")))?,
        ),
        (Some(_), None) => return Err(CliError::Usage("--state needs a finite diagram".into())),
    };
    let w = WordD::parse(word, m.domain().alphabet)?;
    let (end, out) = run(m.as_ref(), &start, &w)?;
    let name = match (&end, names) {
        (StateKey::Index(i), Some(names)) => names[*i].clone(),
        _ => end.to_string(),
    };
    Ok((name, out))
}

pub fn execute(command: Command, inputs: &mut Inputs) -> Result<String, CliError> {
    use Command::*;
    let out = match command {
        Validate { input } => match inputs.load(&input)? {
            Object::Diagram(n) => {
                let d = &n.diagram;
                format!("ok: {} -> {}, {} states\n", d.domain(), d.range(), d.states())
            }
            Object::Machine(m) => format!("ok: lazy machine {} -> {}\n", m.domain(), m.range()),
            Object::Exchange(h) => format!("ok: prefix exchange over ({},{}), {} pairs\n", h.dims(), h.alphabet(), h.source().len()),
            Object::Code(c) => {
                dvn::words::validate_prefix_code(c.members().to_vec())?;
                format!("ok: complete prefix code, {} members\n", c.len())
            }
        },
        Run { input, word, state } => {
            let (end, out) = evaluate(inputs, &input, &word, state.as_deref())?;
            format!("{end} {out}\n")
        }
        Eval { input, word, state } => format!("{}\n", evaluate(inputs, &input, &word, state.as_deref())?.1),
        Minimize { input } => {
            let (m, map) = minimize(&inputs.diagram(&input)?.diagram);
            machine_text(rebase(m, map[0]))?
        }
        Cr { input } => {
            let n = inputs.diagram(&input)?;
            serialize_machine(&Named { diagram: complete_response(&n.diagram)?, names: n.names })?
        }
        Sync { input } => format!("{}\n", synchronizing_level(&inputs.diagram(&input)?.diagram)?),
        Core { input } => {
            let n = inputs.diagram(&input)?;
            let (c, keep) = core(&n.diagram)?;
            serialize_machine(&Named { diagram: c, names: keep.iter().map(|&q| n.names[q].clone()).collect() })?
        }
        Compose { a, b } => {
            let (a, b) = (inputs.diagram(&a)?, inputs.diagram(&b)?);
            machine_text(compose(&a.diagram, &b.diagram)?)?
        }
        Product { inputs: args } => {
            let ds = args.iter().map(|a| inputs.diagram(a).map(|n| n.diagram)).collect::<Result<Vec<_>, _>>()?;
            machine_text(product(&ds)?)?
        }
        Canon { input } => machine_text(core_element(inputs, &input)?.into_diagram())?,
        Mul { a, b } => {
            let (a, b) = (core_element(inputs, &a)?, core_element(inputs, &b)?);
            machine_text(multiply(&a, &b)?.into_diagram())?
        }
        IsIdentity { input } => format!("{}\n", core_element(inputs, &input)?.is_identity()),
        Psi { input } => format!("{}\n", psi(&core_element(inputs, &input)?)?),
        Sig { input } => format!("{}\n", sig(&core_element(inputs, &input)?)?),
        Decompose { input } => {
            let factors = decompose(&core_element(inputs, &input)?)?;
            lines(factors.iter().map(|f| compact(f.diagram())).collect::<Result<Vec<_>, _>>()?)
        }
        Recompose { inputs: args } => {
            let fs = args.iter().map(|a| core_element(inputs, a)).collect::<Result<Vec<_>, _>>()?;
            machine_text(recompose(&fs)?.into_diagram())?
        }
        Wreath { input } => {
            let w = wreath_coordinates(&core_element(inputs, &input)?)?;
            let mut out = vec![w.perm.to_string()];
            for f in &w.factors {
                out.push(compact(f.diagram())?);
            }
            lines(out)
        }
        Inverse { input, max_states } => {
            let a = core_element(inputs, &input)?;
            match find_inverse(&a, max_states)? {
                Some(b) => machine_text(b.into_diagram())?,
                None => return Err(CliError::Domain("NotFound: no inverse within the search bound".into())),
            }
        }
        IsDvn { input, state } => match inputs.load(&input)? {
            Object::Diagram(n) => {
                let q = state.map(|s| n.state(&s)).transpose()?.unwrap_or(0);
                format!("{}\n", is_dvn_member(&n.diagram, q)?)
            }
            Object::Exchange(h) => format!("{}\n", is_dvn_member_exchange(&h)),
            other => return Err(CliError::Domain(format!("is-dvn needs a diagram or exchange, got {}", kind(&other)))),
        },
        Realize { input, state } => {
            let (d, base) = realize(&core_element(inputs, &input)?, state)?;
            machine_text(rebase(d, base))?
        }
        Enumerate(args) => {
            let found = enumerate(&args.spec()?)?;
            lines(found.iter().map(compact).collect::<Result<Vec<_>, _>>()?)
        }
        Census(args) => lines(census(&args.spec()?)?.into_iter().map(|(s, c)| format!("{s}\t{c}"))),
        Catalog { name: None } => lines(dvn::catalog::entries().into_iter().map(|e| format!("{}\t{}", e.name, e.note))),
        Catalog { name: Some(name) } => match inputs.load(&format!("catalog:{name}"))? {
            Object::Diagram(n) => serialize_machine(&n)?,
            Object::Machine(m) => format!("lazy machine {} -> {}\n", m.domain(), m.range()),
            Object::Exchange(h) => lines(h.pairs().map(|(u, v)| format!("{u} -> {v}"))),
            Object::Code(c) => lines(c.members().iter().map(|w| w.to_string())),
        },
        Render { input } => render_dot(&inputs.diagram(&input)?),
        Exchange { dims, alphabet, splits, seed } => {
            if dims == 0 || !(2..=10).contains(&alphabet) {
                return Err(CliError::Usage(format!("need dims >= 1 and 2 <= alphabet <= 10, got {dims} and {alphabet}")));
            }
            let h = random_exchange(dims, alphabet, splits, &mut ChaCha8Rng::seed_from_u64(seed));
            lines(h.pairs().map(|(u, v)| format!("{u} -> {v}")))
        }
    };
    Ok(out)
}

fn kind(o: &Object) -> &'static str {
    match o {
        Object::Diagram(_) => "a diagram",
        Object::Machine(_) => "a lazy machine",
        Object::Exchange(_) => "a prefix exchange",
        Object::Code(_) => "a prefix code",
    }
}
