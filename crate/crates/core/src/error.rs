use thiserror::Error;

use crate::formula::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// A universal refinement quantifier showed up where only the
    /// existential fragment is accepted.
    #[error("formula leaves the existential fragment: {0}")]
    FragmentViolation(String),

    #[error("unknown state `{0}`")]
    StateNotFound(String),

    #[error("model is not a tree: {0}")]
    NotATree(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("an or-instance needs a left/right choice")]
    ChoiceRequired,

    #[error("a choice was supplied for a rule that is not an or-instance")]
    ChoiceForbidden,

    #[error("rule instance is not applicable to this branch")]
    NotApplicable,

    #[error("branch is not complete")]
    NotComplete,

    #[error("branch has a clash on `{atom}` at ({model_prefix},{state_prefix})")]
    Clash {
        model_prefix: String,
        state_prefix: String,
        atom: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed model: {0}")]
    Model(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
