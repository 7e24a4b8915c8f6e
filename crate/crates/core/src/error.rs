use thiserror::Error;

/// Errors produced by constructions and deciders.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("the shift is empty: no bi-infinite point survives trimming")]
    EmptyShift,
    #[error("forbidden word contains the empty word, which forbids everything")]
    EmptyForbiddenWord,
    #[error("presentation has no states")]
    NoStates,
    #[error("word {0:?} is not in the language required by the rule table")]
    RuleDomainMismatch(String),
    #[error("rule table is missing an entry for block {0:?}")]
    MissingRuleEntry(String),
    #[error("rule output {0:?} is not in the codomain alphabet")]
    RuleOutputNotInCodomain(String),
    #[error("point is not in the domain shift")]
    NotInDomain,
    #[error("lasso loop must be nonempty")]
    EmptyLoop,
    #[error("code is not 1-block (memory {memory}, anticipation {anticipation})")]
    NotOneBlock { memory: usize, anticipation: usize },
    #[error("alphabets do not match: {0}")]
    AlphabetMismatch(String),
    #[error("composition domain mismatch: image of the first code is not contained in the domain of the second")]
    CompositionDomainMismatch,
    #[error("domain is not a shift of finite type; {0}")]
    NotSft(String),
    #[error("code has no retract, cannot apply the construction")]
    NoRetract,
    #[error("size cap exceeded while {context} ({size} > {cap}); raise the cap to proceed")]
    CapExceeded {
        context: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
