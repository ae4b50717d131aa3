//! The collineation group PΓL(3,q) acting on PG(2,q).

mod canon;
mod element;
mod orbit;
mod structure;

use serde::Serialize;
use thiserror::Error;

pub use canon::{
    brute_force_canonical_form, Canon, CanonicalForm, Canonizer, BRUTE_FORCE_LIMIT, ELEMENT_LIMIT,
};
pub use element::{all_elements, group_order, standard_generators, Collineation, Matrix};
pub use orbit::{orbit, point_orbits};
pub use structure::structure_name;

use crate::field::{FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix is singular")]
    Singular,
    #[error("three of the four frame points are collinear")]
    DegenerateFrame,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("orbit exceeds the cap of {cap} sets")]
    BudgetExceeded { cap: usize },
    #[error("field: {0}")]
    Field(#[from] FieldError),
}

/// A finite subgroup, listed explicitly when small enough.
#[derive(Debug, Clone, Serialize)]
pub struct GroupDescription {
    pub order: u64,
    /// Empty when the order exceeds [`ELEMENT_LIMIT`].
    #[serde(skip)]
    pub elements: Vec<Collineation>,
    pub abelian: Option<bool>,
    pub structure_name: Option<String>,
}

impl GroupDescription {
    pub fn order_only(order: u64) -> Self {
        GroupDescription {
            order,
            elements: Vec::new(),
            abelian: None,
            structure_name: (order == 1).then(|| "1".to_string()),
        }
    }

    pub fn from_elements(field: &FieldSpec, elements: Vec<Collineation>) -> Self {
        let order = elements.len() as u64;
        let abelian = elements.iter().all(|a| {
            elements
                .iter()
                .all(|b| a.compose(field, b) == b.compose(field, a))
        });
        let structure_name = if order <= 16 || order == 24 {
            let orders: Vec<u64> = elements.iter().map(|g| g.order(field)).collect();
            structure_name(order, abelian, &orders)
        } else {
            None
        };
        GroupDescription {
            order,
            elements,
            abelian: Some(abelian),
            structure_name,
        }
    }

    /// Every product of two listed elements is listed.
    pub fn is_closed(&self, field: &FieldSpec) -> bool {
        let set: std::collections::HashSet<_> = self.elements.iter().collect();
        self.elements.iter().all(|a| {
            set.contains(&a.inverse(field))
                && self
                    .elements
                    .iter()
                    .all(|b| set.contains(&a.compose(field, b)))
        })
    }
}

#[cfg(test)]
mod tests;
