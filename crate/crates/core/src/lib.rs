//! Revenue allocation among teams from season race results.
//!
//! Race results are reduced to a *goals matrix* (how often a car of one team
//! finished ahead of a car of another), turned into a multiplicative pairwise
//! comparison matrix whose entries are goal ratios raised to an inequality
//! exponent `alpha`, and weighted with the eigenvector method or the row
//! geometric mean method. The weights are the revenue shares.
//!
//! ```
//! use pcm_alloc::{build_pcm, fixtures, metrics, WeightingMethod};
//!
//! let goals = fixtures::goals_2014();
//! let pcm = build_pcm(&goals, 1.0, 0.0).unwrap();
//! let w = WeightingMethod::row_geometric_mean().weights(&pcm).unwrap();
//! assert!((w.weight_of("Mercedes").unwrap() - 0.3173).abs() < 1e-3);
//! assert!(metrics::hhi_star(&w).unwrap() < 0.1);
//! ```
//!
//! Modules, bottom up: [`ingest`] (season CSV), [`goals`], [`pcm`],
//! [`weights`], [`metrics`] (HHI, rankings, rank-reversal scans),
//! [`scoring`] (points-system standings), [`alloc`] (money, sweeps, inverse
//! problem) and [`cli`].

pub mod alloc;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod goals;
pub mod ingest;
pub mod metrics;
pub mod numfmt;
pub mod pcm;
pub mod scoring;
pub mod weights;

pub use alloc::{allocate, indifferent_alpha, share_curve, sweep, AlphaGrid};
pub use error::{Error, Result};
pub use goals::{goals_matrix, load_goals, GoalsMatrix};
pub use ingest::{parse_season, SeasonResults};
pub use pcm::{build_pcm, power_transform, PairwiseComparisonMatrix};
pub use weights::{Method, WeightVector, WeightingMethod};
