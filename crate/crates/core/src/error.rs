//! Error type shared by the whole library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite coordinate at index {index}")]
    NonFiniteCoordinate { index: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("p-norm exponent must be finite and >= 1, got {0}")]
    InvalidPNormExponent(f64),

    #[error("point lies off the unit sphere (deviation {deviation:.3e} exceeds tolerance)")]
    OffSphere { deviation: f64 },

    #[error("half-chord {0} exceeds 1 beyond rounding tolerance; not a pair of unit vectors")]
    ChordOverflow(f64),

    #[error("geodesic distance {0} lies outside [0, pi]")]
    GeodesicOutOfRange(f64),

    #[error("endpoints are antipodal; the minimizing arc is not unique")]
    AntipodalEndpoints,

    #[error("sphere metrics need ambient dimension >= 2, got {0}")]
    SphereDimension(usize),

    #[error("space must have dimension >= 1")]
    ZeroDimension,

    #[error("degenerate plane basis: {0}")]
    DegenerateBasis(String),

    #[error("invalid interval: left endpoint {a} exceeds right endpoint {b}")]
    InvalidInterval { a: f64, b: f64 },

    #[error("partition needs at least two strictly increasing finite knots")]
    InvalidPartition,

    #[error("partition spans [{p_a}, {p_b}] but the curve domain is [{a}, {b}]")]
    PartitionDomainMismatch { p_a: f64, p_b: f64, a: f64, b: f64 },

    #[error("parameter {value} lies outside [{a}, {b}]")]
    ParameterOutOfDomain { value: f64, a: f64, b: f64 },

    #[error("length estimate did not converge within {0} segments")]
    NonConvergentLength(usize),

    #[error("adaptive quadrature exceeded bisection depth {0}")]
    QuadratureDepthExceeded(usize),

    #[error("curve carries no derivative rule")]
    MissingDerivative,

    #[error("interpolated point has no direction; cannot renormalize onto the sphere")]
    DegenerateRenormalization,

    #[error("reparametrization table must be nondecreasing with strictly increasing inputs")]
    NonMonotoneTable,

    #[error("reparametrization table does not map onto [{a}, {b}]")]
    TableNotOnto { a: f64, b: f64 },

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("no usable pairs: every sampled pair has zero source distance")]
    AllPairsDegenerate,

    #[error("Lipschitz constant must be nonnegative, got {0}")]
    NegativeConstant(f64),

    #[error("map carries no claimed Lipschitz constant")]
    MissingClaimedConstant,

    #[error("maps do not compose: {0}")]
    SpaceMismatch(String),

    #[error("invalid shortening configuration: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Parse(String),
}
