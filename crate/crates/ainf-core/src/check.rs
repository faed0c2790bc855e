//! Pass/fail reports for identity checks.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// One checked identity: which one, whether it held, and a witness if not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub identity: String,
    pub index: String,
    pub ok: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckResult {
    pub items: Vec<Item>,
}

impl CheckResult {
    pub fn new() -> CheckResult {
        CheckResult { items: Vec::new() }
    }

    pub fn push(&mut self, identity: &str, index: String, witness: Option<String>) {
        self.items.push(Item { identity: identity.into(), index, ok: witness.is_none(), witness });
    }

    pub fn pass(&mut self, identity: &str, index: String) {
        self.push(identity, index, None);
    }

    pub fn extend(&mut self, other: CheckResult) {
        self.items.extend(other.items);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }

    pub fn first_failure(&self) -> Option<&Item> {
        self.items.iter().find(|i| !i.ok)
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.items {
            write!(f, "{} {} {}", if i.ok { "PASS" } else { "FAIL" }, i.identity, i.index)?;
            if let Some(w) = &i.witness {
                write!(f, ": {}", w)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
