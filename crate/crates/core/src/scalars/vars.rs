use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The ordered variable list shared by every element of one computation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            let ok = n
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Parse(format!("bad variable name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate variable {n:?}")));
            }
        }
        Ok(Vars(names.into()))
    }

    /// `x1, ..., xr`.
    pub fn numbered(r: usize) -> Self {
        let names: Vec<String> = (1..=r).map(|i| format!("x{i}")).collect();
        Vars(names.into())
    }

    /// Comma-separated list, as given on the command line. Empty means r = 0.
    pub fn parse_list(s: &str) -> Result<Self> {
        let names: Vec<&str> = s.split(',').map(str::trim).filter(|n| !n.is_empty()).collect();
        Vars::new(&names)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// This list followed by one more variable.
    pub fn extended(&self, name: &str) -> Result<Self> {
        let mut names: Vec<String> = self.0.to_vec();
        names.push(name.to_string());
        Vars::new(&names)
    }

    /// This list with the last variable removed.
    pub fn without_last(&self) -> Self {
        let n = self.0.len().saturating_sub(1);
        Vars(self.0[..n].to_vec().into())
    }

    pub fn same(&self, other: &Vars) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vars({})", self.0.join(","))
    }
}
