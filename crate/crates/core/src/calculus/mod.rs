//! Differential calculi determined by automorphisms and twisted inner
//! derivations: first-order data, forms, 2-form structure and checks.

mod calc;
mod form;
mod group;
mod solve;
mod spec;
mod twoform;
mod verify;

pub use calc::Calculus;
pub use form::{Form, TWord};
pub use group::{DirectionSet, Group, GroupElem, PairClass};
pub use spec::{CalculusSpec, DirKind, Direction, DirectionDef, Mode};
pub use twoform::{Reducer, TwoFormStructure};
pub use solve::{coordinate_matrix, solve_theta_in_differentials, ThetaSolution, ThetaSolve};
pub use verify::{
    apply_to_form, central_one_forms, check_differentiability, verify_inner_identities,
    verify_twisted_two_forms,
};
