use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numeric::{BigComplex, NumericContext};

/// Numeric parameter assignment as literal strings, parsed at the working
/// precision on use so that reports echo exactly what was requested.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NumParams(pub BTreeMap<String, String>);

impl NumParams {
    pub fn new<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Self(pairs.into_iter().map(|(k, v)| (k.to_owned(), v.to_owned())).collect())
    }

    pub fn set(mut self, key: &str, value: impl ToString) -> Self {
        self.0.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn raw(&self, key: &str) -> Result<&str> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidConfig(format!("missing parameter `{key}`")))
    }

    pub fn get(&self, ctx: &NumericContext, key: &str) -> Result<BigComplex> {
        ctx.parse_num(self.raw(key)?)
    }

    /// A context whose nome is the `q` parameter.
    pub fn context(&self, prec: u32, tol: f64) -> Result<NumericContext> {
        NumericContext::parse(prec, self.raw("q")?, tol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.0.iter()
    }
}
