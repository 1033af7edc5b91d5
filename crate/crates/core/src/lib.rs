pub mod colorlib;
pub mod colorspace;
pub mod concepts;
pub mod estimator;
pub mod metrics;
pub mod numfmt;
pub mod ols;
pub mod regression;
pub mod seed;
pub mod store;
