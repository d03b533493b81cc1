//! Entropy production laboratory for scalar conservation laws `u_t + f(u)_x = 0`
//! with strictly convex flux.
//!
//! Entropic and non-entropic weak solutions come from exact Riemann fans
//! ([`selfsim`]) and front tracking ([`fronts`]); [`entropy`] measures their
//! production. [`hjb`] and [`fvoracle`] are independent oracles for the entropy
//! solution.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod export;
pub mod flux;
pub mod fronts;
pub mod fvoracle;
pub mod hjb;
pub mod profile;
pub mod quadrature;
pub mod residual;
pub mod selfsim;

pub use entropy::{
    check_e_condition, check_entropy_inequality, combined_entropy_p, delta_density, entropy_rate_hdot, jump_ep_rate,
    kinetic_density, total_ep, EConditionReport, EntropyLedger, EpMode, KruzhkovPair, QuadraticEntropy,
};
pub use error::{Error, Result};
pub use flux::{ConvexFlux, FluxFunction, FluxKind};
pub use fronts::{evolve, FrontHistory, FrontKind, FrontState, Mode, Trajectory, TrapezoidDomain, Window};
pub use hjb::{hopf_lax_value, oracle_u, PotentialData};
pub use profile::{l1_distance, Piece, Profile};
pub use selfsim::{non_entropic_family, solve_riemann, EntropicFlag, SegmentKind, Wave, WaveFan};
