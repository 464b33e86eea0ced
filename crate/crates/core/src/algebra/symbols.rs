use std::sync::Arc;

use super::MAX_SYMBOLS;
use crate::error::{Error, Result};

/// Ordered list of symbol names; index `i` is exponent slot `i` of every monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolTable {
    names: Vec<String>,
}

impl SymbolTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.len() > MAX_SYMBOLS {
            return Err(Error::TooManySymbols(names.len()));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateSymbol(n.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn empty() -> Self {
        Self { names: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_owned()))
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// The coefficient ring of a formal computation: its symbols plus the
/// lowest q-exponent any series may reach.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    symbols: SymbolTable,
    min_floor: i64,
}

impl Ring {
    /// Ring for expansions to truncation order `order`; the floor defaults to `-order`.
    pub fn new(symbols: SymbolTable, order: i64) -> Arc<Self> {
        Arc::new(Self { symbols, min_floor: -order.abs() })
    }

    pub fn with_min_floor(symbols: SymbolTable, min_floor: i64) -> Arc<Self> {
        Arc::new(Self { symbols, min_floor })
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn min_floor(&self) -> i64 {
        self.min_floor
    }

    pub fn check_floor(&self, exponent: i64) -> Result<()> {
        if exponent < self.min_floor {
            Err(Error::FloorViolation { exponent, floor: self.min_floor })
        } else {
            Ok(())
        }
    }
}
