use crate::bundles::BundleError;
use crate::fan::FanError;
use crate::gale::GaleError;
use crate::group::GroupError;
use crate::surfaces::SurfaceError;
use crate::zmat::ZmatError;

/// Any pipeline failure.
#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Zmat(#[from] ZmatError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Gale(#[from] GaleError),
}

impl Error {
    /// Module-qualified code such as `group_action.NotSL`.
    pub fn code(&self) -> String {
        let (module, name) = match self {
            Error::Zmat(e) => ("exact_zmat", zmat_name(e)),
            Error::Group(e) => (
                "group_action",
                match e {
                    GroupError::OrderTooSmall(_) => "OrderTooSmall",
                    GroupError::NotSL { .. } => "NotSL",
                    GroupError::NotFaithful { .. } => "NotFaithful",
                    GroupError::DegenerateWeight { .. } => "DegenerateWeight",
                    GroupError::Parse(_) => "ParseError",
                    GroupError::DimensionVector(_) => "InvalidDimensionVector",
                },
            ),
            Error::Fan(e) => ("crepant_fan", fan_name(e)),
            Error::Bundle(e) => (
                "taut_bundles",
                match e {
                    BundleError::NotLocallyFree { .. } => "NotLocallyFree",
                    BundleError::InconsistentSupport { .. } => "InconsistentSupport",
                    BundleError::NonIntegralDegree { .. } => "NonIntegralDegree",
                },
            ),
            Error::Surface(e) => match e {
                SurfaceError::Fan(f) => ("crepant_fan", fan_name(f)),
                SurfaceError::InconsistentDegrees { .. } => ("exc_surfaces", "InconsistentDegrees"),
                SurfaceError::NonIntegralChi { .. } => ("exc_surfaces", "NonIntegralChi"),
                SurfaceError::TooFewCurves(_) => ("exc_surfaces", "TooFewCurves"),
            },
            Error::Gale(e) => match e {
                GaleError::Zmat(z) => ("exact_zmat", zmat_name(z)),
                GaleError::RankMismatch { .. } => ("gale_reid", "RankMismatch"),
                GaleError::NotUnimodular { .. } => ("gale_reid", "NotUnimodular"),
                GaleError::NotABasis { .. } => ("gale_reid", "NotABasis"),
                GaleError::NotSurjective { .. } => ("gale_reid", "NotSurjective"),
                GaleError::NotAKernelBasis(_) => ("gale_reid", "NotAKernelBasis"),
                GaleError::Input(_) => ("gale_reid", "InvalidInput"),
            },
        };
        format!("{module}.{name}")
    }
}

fn zmat_name(e: &ZmatError) -> &'static str {
    match e {
        ZmatError::DimensionMismatch(_) => "DimensionMismatch",
        ZmatError::NotSurjective { .. } => "NotSurjective",
        ZmatError::Ragged { .. } => "RaggedMatrix",
        ZmatError::Parse(_) => "ParseError",
        ZmatError::Io(_) => "IoError",
    }
}

fn fan_name(e: &FanError) -> &'static str {
    match e {
        FanError::Io(_) => "IoError",
        FanError::Schema(_) => "SchemaError",
        FanError::Validation { .. } => "ValidationError",
        FanError::NonIntegralRelation { .. } => "NonIntegralRelation",
        FanError::OpenStar { .. } => "OpenStar",
        FanError::NotInterior(_) => "NotInterior",
    }
}
