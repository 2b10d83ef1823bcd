use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which factor of a composite basis an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subsystem::A => f.write_str("A"),
            Subsystem::B => f.write_str("B"),
        }
    }
}

/// An ordered list of orthonormal mode labels.
///
/// A composite basis remembers its two factors so that partial traces and
/// lifted operators can find the subsystem indices.
#[derive(Clone, Debug)]
pub struct ModeBasis(Arc<Inner>);

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    labels: Vec<String>,
    factors: Option<(ModeBasis, ModeBasis)>,
}

impl PartialEq for ModeBasis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for ModeBasis {}

impl ModeBasis {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(ModeBasis(Arc::new(Inner {
            labels,
            factors: None,
        })))
    }

    /// Product basis in A-major order; labels are concatenated (`A1` + `B2` →
    /// `A1B2`).
    pub fn product(a: &ModeBasis, b: &ModeBasis) -> Result<Self> {
        if let Some(shared) = a.labels().iter().find(|l| b.labels().contains(l)) {
            return Err(Error::BasisConflict(shared.clone()));
        }
        let labels = a
            .labels()
            .iter()
            .flat_map(|la| b.labels().iter().map(move |lb| format!("{la}{lb}")))
            .collect::<Vec<_>>();
        let basis = ModeBasis::new(labels)?;
        Ok(ModeBasis(Arc::new(Inner {
            labels: basis.0.labels.clone(),
            factors: Some((a.clone(), b.clone())),
        })))
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn dim(&self) -> usize {
        self.0.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.labels.iter().position(|l| l == label)
    }

    pub(crate) fn require_index(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn is_composite(&self) -> bool {
        self.0.factors.is_some()
    }

    pub fn factors(&self) -> Option<(&ModeBasis, &ModeBasis)> {
        self.0.factors.as_ref().map(|(a, b)| (a, b))
    }

    pub fn factor(&self, which: Subsystem) -> Option<&ModeBasis> {
        self.factors().map(|(a, b)| match which {
            Subsystem::A => a,
            Subsystem::B => b,
        })
    }
}

impl fmt::Display for ModeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.labels().join(", "))
    }
}
