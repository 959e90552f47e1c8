//! Functional principal component analysis of daily electric-load curves,
//! with stepwise regression of component scores on calendar predictors for
//! long-term forecasting.

pub mod curves;
pub mod error;
pub mod fpca;
pub mod metrics;
pub mod pipeline;
pub mod regress;
mod symeig;

pub use error::{Error, Result};
