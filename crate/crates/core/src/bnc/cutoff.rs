//! Node cutoff against the incumbent, with the integrality delta for
//! integer objectives.

/// Tolerance below the incumbent at which a node is cut off when the
/// objective is not known to be integral.
pub const CUTOFF_TOL: f64 = 1e-9;

/// Smallest bound at which a node is cut off, and whether reaching it
/// exactly already counts (`true`) or the bound has to exceed it.
pub fn cutoff_threshold(incumbent: f64, integral_objective: bool) -> (f64, bool) {
    if !incumbent.is_finite() {
        return (f64::INFINITY, false);
    }
    if !integral_objective {
        return (incumbent - CUTOFF_TOL, true);
    }
    // Any better integer solution is worth at most U - 1. The small deltas
    // leave room for LP round-off; at huge magnitudes adding them is a no-op
    // in double precision, hence the cascade.
    let limit1 = incumbent - 1.0;
    let limit2 = limit1 + 1.0 / 32.0;
    if limit2 > limit1 {
        return (limit2, true);
    }
    let limit3 = limit1 + 0.25;
    if limit3 > limit1 {
        (limit3, true)
    } else {
        (limit3, false)
    }
}

/// True if a node with LP bound `z` cannot contain a solution better than
/// the incumbent `u` (`+inf` when there is none).
pub fn cutoff_test(z: f64, u: f64, integral_objective: bool) -> bool {
    let (limit, inclusive) = cutoff_threshold(u, integral_objective);
    if inclusive {
        z >= limit
    } else {
        z > limit
    }
}
