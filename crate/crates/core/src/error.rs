use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parent mismatch: {0}")]
    ParentMismatch(String),
    #[error("group is infinite")]
    InfiniteGroup,
    #[error("homomorphism not well defined: {0}")]
    NotWellDefined(String),
    #[error("sequence not exact at {0}")]
    NotExact(String),
    #[error("units incompatible: {0}")]
    UnitIncompatible(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("end groups or maps differ: {0}")]
    EndMismatch(String),
    #[error("not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("target mismatch: {0}")]
    TargetMismatch(String),
    #[error("source mismatch: {0}")]
    SourceMismatch(String),
    #[error("element has no preimage: {0}")]
    NoPreimage(String),
    #[error("vector does not lie in the lattice")]
    NotInLattice,
    #[error("distinguished element is not in the kernel of the boundary map")]
    UnitNotInKernel,
}

pub type Result<T> = std::result::Result<T, Error>;
