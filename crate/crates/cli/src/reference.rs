//! Published reference numbers for the three worked examples and the
//! tolerances they are checked against.

use lqu_core::protocol::ReferenceCase;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub value: f64,
    pub tol: f64,
}

const fn t(value: f64, tol: f64) -> Target {
    Target { value, tol }
}

impl Target {
    pub fn delta(&self, got: f64) -> f64 {
        got - self.value
    }

    pub fn accepts(&self, got: f64) -> bool {
        self.delta(got).abs() <= self.tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub initial: Target,
    pub protected: Target,
    pub unprotected: Target,
    pub fidelity_protected: Target,
    pub fidelity_unprotected: Target,
}

pub fn reference(case: ReferenceCase) -> Reference {
    match case {
        ReferenceCase::BellQubit => Reference {
            initial: t(1.0, 1e-9),
            protected: t(0.218, 0.002),
            unprotected: t(0.134, 0.001),
            fidelity_protected: t(0.52, 0.005),
            fidelity_unprotected: t(0.56, 0.005),
        },
        ReferenceCase::NonsymQubit => Reference {
            initial: t(0.096, 0.001),
            protected: t(0.031, 0.002),
            unprotected: t(0.019, 0.001),
            fidelity_protected: t(0.964, 0.003),
            fidelity_unprotected: t(0.960, 0.003),
        },
        ReferenceCase::NonsymQutrit => Reference {
            initial: t(0.130, 0.001),
            protected: t(0.081, 0.002),
            unprotected: t(0.072, 0.001),
            fidelity_protected: t(0.925, 0.005),
            fidelity_unprotected: t(0.964, 0.005),
        },
    }
}

/// Reported optimum of the reversal strengths on the swept surfaces.
pub fn surface_optimum(case: ReferenceCase) -> Option<(f64, f64)> {
    match case {
        ReferenceCase::BellQubit => Some((1.606, 0.830)),
        ReferenceCase::NonsymQubit => Some((0.85, 0.90)),
        ReferenceCase::NonsymQutrit => None,
    }
}
