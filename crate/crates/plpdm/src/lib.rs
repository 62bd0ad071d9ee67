//! Dynamics of the piecewise-linear perturbation of the doubling map.
//!
//! The library computes attracting cycles, symbolic itineraries, the
//! semiconjugacy with the doubling map and its types, tongue/eye boundary
//! locations, and parallel rasterizations of the `(a, b)` parameter plane.

pub mod map;
pub mod scan;
pub mod search;
pub mod semiconj;
pub mod symbolic;
pub mod tongue;

pub use map::{Branch, BranchCoeffs, CirclePoint, LiftPoint, ParamError, Params};
pub use scan::{CellResult, ComponentKind, ComponentRecord, GridSpec, ScanGrid};
pub use search::{find_attractor, AttractorReport, SearchOptions};
pub use semiconj::{phi, type_of, PhiEstimate, TypeFraction};
pub use symbolic::{
    cycles_with_itinerary, enumerate_attracting_cycles, follower_set, Cycle, Itinerary,
    ItineraryClass, Stability,
};
pub use tongue::{boundary_a, seed_tongue, xi_table, BoundaryQuery, SeedResult, Side, XiTable};
