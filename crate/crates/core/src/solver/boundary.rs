use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Point values `(t, x, ξ) ↦ u` imposed outside the domain.
pub type BoundaryFn = Arc<dyn Fn(f64, f64, f64, &mut [f64]) + Send + Sync>;

#[derive(Clone)]
pub enum BoundaryKind {
    Periodic,
    /// Zeroth-order extrapolation: ghosts copy the boundary cell.
    Extrapolate,
    /// Ghost cells hold averages of the given function.
    Dirichlet(BoundaryFn),
}

impl fmt::Debug for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryKind::Periodic => write!(f, "Periodic"),
            BoundaryKind::Extrapolate => write!(f, "Extrapolate"),
            BoundaryKind::Dirichlet(_) => write!(f, "Dirichlet(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Boundary {
    pub left: BoundaryKind,
    pub right: BoundaryKind,
}

impl Boundary {
    pub fn periodic() -> Self {
        Self {
            left: BoundaryKind::Periodic,
            right: BoundaryKind::Periodic,
        }
    }

    pub fn extrapolate() -> Self {
        Self {
            left: BoundaryKind::Extrapolate,
            right: BoundaryKind::Extrapolate,
        }
    }

    /// Same Dirichlet data on both sides.
    pub fn dirichlet(f: BoundaryFn) -> Self {
        Self {
            left: BoundaryKind::Dirichlet(f.clone()),
            right: BoundaryKind::Dirichlet(f),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lp = matches!(self.left, BoundaryKind::Periodic);
        let rp = matches!(self.right, BoundaryKind::Periodic);
        if lp != rp {
            return Err(Error::Config("periodic boundaries must be set on both sides".into()));
        }
        Ok(())
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.left, BoundaryKind::Periodic)
    }
}
