use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ill-defined map: {0}")]
    IllDefined(String),
    #[error("domain has infinite index in the source")]
    InfiniteIndexDomain,
    #[error("element is not in the domain of the partial homomorphism")]
    NotInDomain,
    #[error("axiom violated: {axiom} (witness {witness})")]
    AxiomViolated { axiom: String, witness: String },
    #[error("subgroup is not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("subgroup is not a subring: {0}")]
    NotASubring(String),
    #[error("subgroup is not a submodule: {0}")]
    NotASubmodule(String),
    #[error("element is not in H~0 of the quotient module")]
    NotInH0,
    #[error("no preimage exists")]
    NoPreimage,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("unsupported coefficient carrier: {0}")]
    UnsupportedCarrier(String),
    #[error("carrier has {size} elements, above the enumeration bound {bound}")]
    SizeBoundExceeded { size: String, bound: u64 },
    #[error("polynomial is reducible over F_{0}")]
    ReduciblePolynomial(u64),
    #[error("empty family")]
    EmptyFamily,
    #[error("invalid element: {0}")]
    InvalidElement(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
