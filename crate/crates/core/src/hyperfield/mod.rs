//! The ten hyperfields: elements, set values, hyperaddition and axiom checks.

mod axioms;
mod element;
mod ops;
mod sets;
mod value;

pub use axioms::{
    default_probes, double_distributivity_counterexample, four_term_parenthesization,
    verify_hyperfield_axioms, AxiomReport, Check, Status,
};
pub use element::{el, Element, Field, Geometry};
pub use ops::{
    add_element, add_set, contains_zero, fold_hypersum, hypersum, mul_sets, scale_set,
    split_sum_contains, sum_contains,
};
pub use sets::{Arc, CircleSet, Interval, LineSet};
pub use value::{Part, SetValue};

/// Multiplies two elements of the same field.
pub fn product(a: &Element, b: &Element) -> Result<Element, crate::Error> {
    a.mul(b)
}

/// The additive inverse.
pub fn negate(a: &Element) -> Element {
    a.neg()
}
