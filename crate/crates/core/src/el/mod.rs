//! EL⊥ concepts, axioms and their finite-model semantics.

mod agreement;
mod interp;
mod syntax;

use thiserror::Error;

use crate::name::Name;

pub use agreement::{induced_interpretation, state_satisfies_tbox};
pub use interp::{
    enumerate_models, enumerate_models_with_budget, extension_of, is_model, is_model_of_tbox,
    satisfies, satisfies_assertion, satisfies_axiom, Element, Interpretation,
    InterpretationSpace, Statement, DEFAULT_MODEL_BUDGET,
};
pub use syntax::{tbox_signature, Assertion, Axiom, Base, Concept, KnowledgeBase, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElError {
    #[error("name `{0}` is not mapped by the interpretation")]
    UnmappedName(Name),
    #[error("enumeration would visit more than {budget} interpretations")]
    BudgetExceeded { budget: u64 },
    #[error("interpretation domains must be non-empty")]
    EmptyDomain,
    #[error("state is incomplete: neither `{0}` nor its negation holds")]
    IncompleteState(String),
    #[error("state is inconsistent on `{0}`")]
    InconsistentState(String),
    #[error("no interpretation agrees with the state: `{0}` cannot hold")]
    Agreement(String),
}
