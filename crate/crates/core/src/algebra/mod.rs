//! Finite fields, SL matrices, and their permutation actions.

pub mod action;
pub mod field;
pub mod matrix;

pub use action::{
    base_generating_set, k_cycle_element, perm_from_matrix, sl_order, EnumKind, GenStyle,
    PointEnumeration,
};
pub use field::{FieldElem, FieldSpec};
pub use matrix::Matrix;
