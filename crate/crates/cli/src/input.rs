//! Resolving input arguments: file paths, `-` for stdin, `catalog:NAME`.

use std::io::Read;

use dvn::catalog::{self, CatalogObject};
use dvn::homeo::{machine_of, PrefixExchange};
use dvn::machine::{MachineHandle, StateKey};
use dvn::words::PrefixCode;

use crate::format::{parse_machine, Named};
use crate::CliError;

/// Anything an argument can name.
pub enum Object {
    Diagram(Named),
    Machine(MachineHandle),
    Exchange(PrefixExchange),
    Code(PrefixCode),
}

impl Object {
    fn kind(&self) -> &'static str {
        match self {
            Object::Diagram(_) => "diagram",
            Object::Machine(_) => "lazy machine",
            Object::Exchange(_) => "prefix exchange",
            Object::Code(_) => "prefix code",
        }
    }

    pub fn into_diagram(self) -> Result<Named, CliError> {
        match self {
            Object::Diagram(n) => Ok(n),
            other => Err(CliError::Domain(format!("expected a finite diagram, got a {}", other.kind()))),
        }
    }

    /// A machine with its base state, for evaluation.
    pub fn into_machine(self) -> Result<(MachineHandle, StateKey, Option<Vec<String>>), CliError> {
        match self {
            Object::Diagram(n) => Ok((n.diagram.handle(), StateKey::Index(0), Some(n.names))),
            Object::Machine(m) => {
                let base = StateKey::Word(m.domain().empty());
                Ok((m, base, None))
            }
            Object::Exchange(h) => {
                let base = StateKey::Word(dvn::words::WordD::empty(h.dims(), h.alphabet()));
                Ok((machine_of(&h), base, None))
            }
            Object::Code(_) => Err(CliError::Domain("a prefix code is not a machine".into())),
        }
    }
}

/// Reads arguments; stdin is read at most once and shared by every `-`.
#[derive(Default)]
pub struct Inputs {
    stdin: Option<String>,
}

impl Inputs {
    pub fn with_stdin(text: String) -> Inputs {
        Inputs { stdin: Some(text) }
    }

    fn text(&mut self, arg: &str) -> Result<String, CliError> {
        if arg == "-" {
            if self.stdin.is_none() {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
                self.stdin = Some(s);
            }
            return Ok(self.stdin.clone().unwrap());
        }
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))
    }

    pub fn load(&mut self, arg: &str) -> Result<Object, CliError> {
        if let Some(name) = arg.strip_prefix("catalog:") {
            let entry = catalog::get(name).ok_or_else(|| CliError::Usage(format!("unknown catalog entry {name:?}")))?;
            return Ok(match entry.object {
                CatalogObject::Diagram(d) => Object::Diagram(Named::indexed(d)),
                CatalogObject::Machine(m) => Object::Machine(m),
                CatalogObject::Exchange(h) => Object::Exchange(h),
                CatalogObject::Code(c) => Object::Code(c),
            });
        }
        let text = self.text(arg)?;
        parse_machine(&text).map(Object::Diagram)
    }

    pub fn diagram(&mut self, arg: &str) -> Result<Named, CliError> {
        self.load(arg)?.into_diagram()
    }
}
