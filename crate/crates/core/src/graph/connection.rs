use thiserror::Error;

use super::{congruence_witness, forms_rank, reverse, DartId, OrbifoldGkmGraph};
use crate::exact::Int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error("along dart {along}: no dart matches dart {dart}")]
    NoMatch { along: DartId, dart: DartId },
    #[error("along dart {along}: darts {candidates:?} all match dart {dart}")]
    AmbiguousMatch {
        along: DartId,
        dart: DartId,
        candidates: Vec<DartId>,
    },
    #[error("along dart {along}: transport is not a bijection")]
    NotBijective { along: DartId },
}

impl ConnectionError {
    /// Message with vertex names instead of dart ids.
    pub fn describe(&self, g: &OrbifoldGkmGraph) -> String {
        match self {
            ConnectionError::NoMatch { along, dart } => format!(
                "along {}: no dart at the far end matches {}",
                g.describe_dart(*along),
                g.describe_dart(*dart)
            ),
            ConnectionError::AmbiguousMatch { along, dart, candidates } => format!(
                "along {}: {} candidate darts match {}",
                g.describe_dart(*along),
                candidates.len(),
                g.describe_dart(*dart)
            ),
            ConnectionError::NotBijective { along } => {
                format!("along {}: transport is not a bijection", g.describe_dart(*along))
            }
        }
    }
}

/// The connection `θ` together with the minimal congruence witnesses `c_{e,e'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    /// `theta[e][j]` is the image of the `j`-th dart at `i(e)`.
    theta: Vec<Vec<DartId>>,
    witness: Vec<Vec<Option<Int>>>,
    /// Position of each dart among the darts at its origin.
    slot: Vec<usize>,
}

impl Connection {
    /// `θ_e(e')`, for `e'` leaving the origin of `e`.
    pub fn apply(&self, e: DartId, e_prime: DartId) -> DartId {
        self.theta[e][self.slot[e_prime]]
    }

    /// Least positive `c` with `c (α(θ_e(e')) − α(e')) ∈ Z r̃_e α(e)`; `None`
    /// when the difference is not a rational multiple of `α(e)`.
    pub fn witness(&self, e: DartId, e_prime: DartId) -> Option<&Int> {
        self.witness[e][self.slot[e_prime]].as_ref()
    }

    pub fn images(&self, e: DartId) -> &[DartId] {
        &self.theta[e]
    }
}

/// Infers the connection from the span condition
/// `α(θ_e(e')) ∈ Q α(e') + Q α(e)`, requiring a unique match for every pair.
pub fn infer_connection(g: &OrbifoldGkmGraph) -> Result<Connection, ConnectionError> {
    let k = g.torus_rank();
    let mut slot = vec![0; g.num_darts()];
    for v in 0..g.num_vertices() {
        for (j, &d) in g.darts_at(v).iter().enumerate() {
            slot[d] = j;
        }
    }
    let mut theta = Vec::with_capacity(g.num_darts());
    let mut witness = Vec::with_capacity(g.num_darts());
    for e in 0..g.num_darts() {
        let back = reverse(e);
        let far = g.darts_at(g.terminus(e));
        let modulus = g.modulus(e).ok();
        let mut images = Vec::new();
        let mut cs = Vec::new();
        for &e1 in g.darts_at(g.origin(e)) {
            let image = if e1 == e {
                back
            } else {
                let candidates: Vec<DartId> = far
                    .iter()
                    .copied()
                    .filter(|&e2| e2 != back && forms_rank(&[g.alpha(e2), g.alpha(e1), g.alpha(e)], k) == 2)
                    .collect();
                match candidates.len() {
                    0 => return Err(ConnectionError::NoMatch { along: e, dart: e1 }),
                    1 => candidates[0],
                    _ => {
                        return Err(ConnectionError::AmbiguousMatch {
                            along: e,
                            dart: e1,
                            candidates,
                        })
                    }
                }
            };
            if images.contains(&image) {
                return Err(ConnectionError::NotBijective { along: e });
            }
            let diff = g.alpha(image) - g.alpha(e1);
            cs.push(modulus.as_ref().and_then(|m| congruence_witness(&diff, m)));
            images.push(image);
        }
        theta.push(images);
        witness.push(cs);
    }
    Ok(Connection { theta, witness, slot })
}
