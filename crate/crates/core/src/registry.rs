//! Name-keyed factories for interchangeable strategies.

use crate::error::{Error, Result};

type Factory<T> = fn() -> Box<T>;

/// Constructors for one family of trait objects, looked up by name.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<(&'static str, Factory<T>)>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    /// Add a strategy. A later registration under the same name replaces
    /// the earlier one.
    pub fn register(&mut self, name: &'static str, make: fn() -> Box<T>) -> &mut Self {
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(entry) => entry.1 = make,
            None => self.entries.push((name, make)),
        }
        self
    }

    pub fn create(&self, name: &str) -> Result<Box<T>> {
        self.entries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, make)| make())
            .ok_or_else(|| {
                Error::Parameter(format!(
                    "unknown {} {name:?} (available: {})",
                    self.kind,
                    self.names().join(", ")
                ))
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|(n, _)| *n == name)
    }
}
