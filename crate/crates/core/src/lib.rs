//! Outage and user-selection statistics for an underlay cognitive radio
//! MIMO-OSTBC RF hop decoded and forwarded over a Málaga-turbulence FSO hop
//! with pointing errors.
//!
//! * [`specfun`]: incomplete gammas, erf, Bessel K, Meijer G.
//! * [`rf`]: channel-gain laws, the underlay power policy and the CDF of the
//!   opportunistic selection metric.
//! * [`fso`]: turbulence, pointing-error and composite channel laws, and the
//!   destination SNR CDF.
//! * [`outage`]: end-to-end outage and its two asymptotic floors.
//! * [`mc`]: seeded, worker-count-invariant Monte Carlo counterparts.

pub mod error;
pub mod fso;
pub mod mc;
pub mod outage;
pub mod quad;
pub mod rf;
pub mod specfun;

pub use error::{Error, Result};
pub use fso::{Detection, FsoLinkParams, MalagaParams, PointingParams, SpecialCase};
pub use mc::{McEngine, OutageEstimate, RngConfig, SelectionStats};
pub use outage::{OutageTerms, ScenarioConfig};
pub use rf::{OstbcParams, RfLinkParams, SuTxProfile, ZetaMethod};
