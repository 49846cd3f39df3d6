use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("integer overflow while converting an exact value to a machine integer")]
    Overflow,
    #[error("integer matrix is not surjective")]
    NotSurjective,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not a face of the fan: {0:?}")]
    NotAFace(Vec<usize>),
    #[error("already a ray: {0:?}")]
    AlreadyARay(Vec<usize>),
    #[error("divisor has {got} coefficients, variety has {expected} rays")]
    DivisorLength { expected: usize, got: usize },
    #[error("class has {got} coordinates, class group has rank {expected}")]
    ClassLength { expected: usize, got: usize },
    #[error("variety must be smooth and complete")]
    NotSmoothComplete,
    #[error("morphism is incompatible with the fans: cone {cone:?} maps into no cone of the target")]
    Incompatible { cone: Vec<usize> },
    #[error("morphism is not a toric fibration")]
    NotFibration,
    #[error("target is not the projective line")]
    TargetNotP1,
    #[error("twist box exceeds limit ({size} > {limit})")]
    TwistBoxTooLarge { size: usize, limit: usize },
    #[error("stabilization cap exceeded")]
    StabilizationCap,
    #[error("not a sum of line bundles plus finite torsion")]
    NotSplit,
    #[error("duality check requires locally free images")]
    TorsionPresent,
    #[error("entry not homogeneous of the required degree")]
    NotHomogeneous,
    #[error("not a subcomplex")]
    NotSubcomplex,
    #[error("input is not a complex: consecutive maps do not compose to zero")]
    NotAComplex,
    #[error("rays do not span the lattice")]
    RaysDoNotSpan,
}

pub type Result<T> = std::result::Result<T, ToricError>;
