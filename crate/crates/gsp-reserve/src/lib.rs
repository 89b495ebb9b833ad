//! Reserve-price learning for generalized second-price (GSP) auctions.
//!
//! The crate models position auctions in which `n_slots` ad slots with
//! decreasing position factors are sold to `n_bidders` bidders, and provides
//! two learning routes for the seller's reserve price together with the
//! empirical machinery needed to evaluate them on synthetic equilibrium data:
//!
//! - [`auction`] — the auction form itself: ranking rules, payments, seller
//!   revenue, and the simplified per-auction loss the learners minimize.
//! - [`sweep`] — the discriminative route: an `O(nS log nS)` breakpoint sweep
//!   that minimizes the empirical loss exactly, plus its quadratic brute-force
//!   oracle and a generalization bound.
//! - [`density`] — the density-estimation route: empirical CDF + triangular
//!   kernel density estimates, equilibrium bid inversion, and the classical
//!   fixed-point equation for the reserve.
//! - [`equilibrium`] — discrete approximation of the symmetric Bayes-Nash
//!   equilibrium bid function via a lower-triangular linear system.
//! - [`harness`] — experiment drivers: synthetic data generation, dataset
//!   (de)serialization with provenance hashes, revenue comparisons,
//!   convergence sweeps, and histogram exports.
//!
//! Everything downstream of a seed is deterministic: experiments derive all
//! randomness from a master seed through a labelled seed tree ([`seed`]), so
//! reruns produce bit-identical artifacts.

pub mod auction;
pub mod density;
pub mod equilibrium;
pub mod error;
pub mod harness;
pub mod numeric;
pub mod seed;
pub mod sweep;

pub use auction::{Allocation, AuctionConfig, BidProfile, RankingRule, ReserveVector};
pub use error::{Error, Result};
