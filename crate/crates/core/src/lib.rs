//! Set chromatic numbers of binomial random graphs.
//!
//! A *set colouring* of a graph assigns a colour to every vertex so that any
//! two adjacent vertices see different colour sets in their neighbourhoods;
//! the *set chromatic number* `chi_s(G)` is the fewest colours admitting one.
//! For `G(n,p)` the growth rate of `chi_s` is governed by the per-class
//! collision factor `s(p)` and its zigzag coefficient `r(p) = 2 / lg(1/s)`.
//!
//! The crate provides:
//!
//! - [`graph`]: packed-bit-row graphs, seeded `G(n,p)` sampling, edge-list I/O;
//! - [`theory`]: the closed-form parameter functions `s`, `ell_0`, the `r`
//!   variants, and the bound envelopes as functions of `(n, p)`;
//! - [`colouring`]: neighbourhood colour sets, set/proper verifiers, the
//!   greedy baseline, and the block construction that achieves
//!   `(r + o(1)) lg n` colours;
//! - [`solver`]: exact `chi` and `chi_s` at desk scale with brute-force
//!   oracles;
//! - [`prob`]: Chernoff tails, colour-set collision probabilities, Suen's
//!   inequality, and the Hoelder-type ratio checker.
//!
//! All randomness is seeded and platform-independent; every function here is
//! deterministic in its inputs.

pub mod colouring;
pub mod graph;
pub mod prob;
pub mod solver;
pub mod theory;

pub use colouring::{Colouring, ColourSet, ConstructiveParams, Verdict};
pub use graph::{Graph, Seed};
pub use solver::{SolveOutcome, SolveResult, SolverConfig};

pub(crate) mod numeric {
    /// `(1-p)^ell` via `exp(ell * ln(1-p))`, accurate for small `p` and
    /// large `ell` (the regime where direct `powf` of `1-p` loses digits).
    #[inline]
    pub fn one_minus_p_pow(p: f64, ell: f64) -> f64 {
        (ell * (-p).ln_1p()).exp()
    }
}
