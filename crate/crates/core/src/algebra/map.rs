use std::fmt;

use super::module::FiniteModule;
use super::ring::Validation;
use crate::elemset::ElementSet;
use crate::error::{Error, Result};

/// A map between modules over the same ring and side, stored as a value table.
#[derive(Clone)]
pub struct ModuleMap {
    source: FiniteModule,
    target: FiniteModule,
    values: Vec<usize>,
}

impl ModuleMap {
    /// Wraps a value table; only shape and compatibility are checked here.
    pub fn new(source: &FiniteModule, target: &FiniteModule, values: Vec<usize>) -> Result<Self> {
        source.ensure_compatible(target)?;
        if values.len() != source.size() {
            return Err(Error::Table {
                path: "value_table".into(),
                message: format!(
                    "expected {} entries, found {}",
                    source.size(),
                    values.len()
                ),
            });
        }
        if let Some((i, &v)) = values.iter().enumerate().find(|(_, &v)| v >= target.size()) {
            return Err(Error::Table {
                path: format!("value_table[{i}]"),
                message: format!("value {v} out of range"),
            });
        }
        Ok(ModuleMap {
            source: source.clone(),
            target: target.clone(),
            values,
        })
    }

    pub(crate) fn from_parts(source: &FiniteModule, target: &FiniteModule, values: Vec<usize>) -> Self {
        debug_assert_eq!(values.len(), source.size());
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            values,
        }
    }

    pub fn identity(m: &FiniteModule) -> Self {
        Self::from_parts(m, m, (0..m.size()).collect())
    }

    pub fn zero(source: &FiniteModule, target: &FiniteModule) -> Self {
        Self::from_parts(source, target, vec![target.zero(); source.size()])
    }

    pub fn source(&self) -> &FiniteModule {
        &self.source
    }

    pub fn target(&self) -> &FiniteModule {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ModuleMap) -> Result<ModuleMap> {
        if inner.target.size() != self.source.size() || !inner.target.same_as(&self.source) {
            return Err(Error::mismatch("composition of non-matching maps"));
        }
        Ok(Self::from_parts(
            &inner.source,
            &self.target,
            inner.values.iter().map(|&x| self.values[x]).collect(),
        ))
    }

    /// Pointwise sum of two parallel maps.
    pub fn sum(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if !self.source.same_as(&other.source) || !self.target.same_as(&other.target) {
            return Err(Error::mismatch("sum of non-parallel maps"));
        }
        Ok(Self::from_parts(
            &self.source,
            &self.target,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| self.target.add(a, b))
                .collect(),
        ))
    }

    pub fn is_identity(&self) -> bool {
        self.source.same_as(&self.target) && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == self.target.zero())
    }

    pub fn kernel(&self) -> ElementSet {
        ElementSet::from_iter_in(
            self.source.size(),
            (0..self.source.size()).filter(|&x| self.values[x] == self.target.zero()),
        )
    }

    pub fn image(&self) -> ElementSet {
        ElementSet::from_iter_in(self.target.size(), self.values.iter().copied())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.size()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Exhaustive check of additivity and compatibility with the ring action.
    pub fn validate(&self) -> Validation {
        let (s, t) = (&self.source, &self.target);
        for x in 0..s.size() {
            for y in 0..s.size() {
                if self.values[s.add(x, y)] != t.add(self.values[x], self.values[y]) {
                    return Validation::fail("additive", &[x, y]);
                }
            }
        }
        for r in 0..s.ring().size() {
            for x in 0..s.size() {
                if self.values[s.act(r, x)] != t.act(r, self.values[x]) {
                    return Validation::fail("commutes with the action", &[r, x]);
                }
            }
        }
        Validation::Pass
    }
}

impl PartialEq for ModuleMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
            && self.source.same_as(&other.source)
            && self.target.same_as(&other.target)
    }
}

impl Eq for ModuleMap {}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModuleMap({} -> {}: {:?})",
            self.source.name(),
            self.target.name(),
            self.values
        )
    }
}
