//! Imagined-speech EEG decoding and two binary-selection interfaces for
//! operating a computer with two decoded words.
//!
//! The decoder estimates a spatial covariance per trial, maps it to the
//! tangent space of the SPD manifold at the training mean, reduces the
//! vectorized result with PCA and classifies with a bagged ensemble of
//! one-hidden-layer networks. [`eval`] wraps this in nested stratified
//! cross-validation and reports accuracy, kappa, t-tests and information
//! transfer rate.
//!
//! [`fsm`] holds the two interface machines and [`sim`] joins them to the
//! decoder: held-out trials stand in for a live headset.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `synthetic_data` | generating trials, the binary container, CSV import |
//! | `spectrogram` | short-time spectra of one trial |
//! | `manifold` | covariance, Riemannian mean, tangent projection, MDM |
//! | `pca_features` | tangent features and PCA |
//! | `train_ensemble` | MLP and bagging, model save and load |
//! | `cross_validate` | nested CV and the three report formats |
//! | `itr_stats` | information rate, kappa, paired t-test |
//! | `design1_pointer` | rectangle cropping down to a screen cell |
//! | `design2_folders` | keyboard navigation with undo |
//! | `headless_session` | the full simulated loop and its transcript |

pub mod ann;
pub mod dataio;
pub mod error;
pub mod eval;
pub mod features;
pub mod fsm;
pub mod pipeline;
pub mod seed;
pub mod sim;
pub mod spd;

pub use error::{Error, Result};
