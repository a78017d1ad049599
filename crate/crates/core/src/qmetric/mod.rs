//! Metric geometry of the quantized interval `I_q = {q^{2m} : m ≥ 0} ∪ {0}`.
//!
//! Functions and states are truncated at a level `T`: everything below
//! `q^{2T}` is collapsed onto a single tail value (for functions) or the atom
//! at `0` (for states). Every computation is generic over [`Real`], so the
//! same code runs on `f64` and on exact `BigRational`s.

mod chain;
mod function;
mod lp;
mod state;
pub mod surd;

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub use chain::{
    chain_edge, chain_edge_exact, diameter, envelope, mk_closed_form, mk_closed_form_exact, mk_lp_oracle,
    mk_lp_oracle_exact, point_mass_diameter, tail_bound_upper, tail_bracket_exact, tail_edge,
};
pub use function::{
    diff_d, diff_e, g_function, lip_bound_check, projection_derivative_check, psi_approx, psi_bound_check,
    seminorm_grad, seminorm_grad_sq, sup_distance, IqPoint, QFunction,
};
pub use lp::{maximize, LpSolution};
pub use state::{base_state, parse_rational, counit_state, haar_state_iq, hk_state, state_from_moments, MomentSequence, QState};
pub use surd::Surd;

/// Default truncation level.
pub const DEFAULT_T: usize = 60;

/// Scalars the metric code can run on.
pub trait Real: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive {
    /// `self ≤ other`, with a small relative slack for floats.
    fn le_slack(&self, other: &Self) -> bool;
    /// Positive beyond rounding noise.
    fn is_pos(&self) -> bool;
    /// Equal up to rounding noise.
    fn near(&self, other: &Self) -> bool;

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n).expect("integer fits") / Self::from_i64(d).expect("integer fits")
    }

    fn powi(&self, k: usize) -> Self {
        num_traits::pow(self.clone(), k)
    }
}

impl Real for f64 {
    fn le_slack(&self, other: &Self) -> bool {
        *self <= *other + 1e-12 * (1.0 + other.abs())
    }

    fn is_pos(&self) -> bool {
        *self > 1e-12
    }

    fn near(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-12 * (1.0 + self.abs().max(other.abs()))
    }
}

impl Real for BigRational {
    fn le_slack(&self, other: &Self) -> bool {
        self <= other
    }

    fn is_pos(&self) -> bool {
        self.is_positive()
    }

    fn near(&self, other: &Self) -> bool {
        self == other
    }
}

/// Checks `0 < q < 1`.
pub fn check_q<F: Real>(q: &F) -> crate::Result<()> {
    if q.is_positive() && *q < F::one() {
        Ok(())
    } else {
        Err(crate::Error::InvalidArgument(format!("q must lie in (0, 1), got {:?}", q)))
    }
}
