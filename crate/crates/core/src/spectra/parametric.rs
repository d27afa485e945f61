use num_rational::Rational64;

use crate::error::Result;
use crate::operator::{Domain, Operator};
use crate::scalar::rational_to_f64;
use crate::spinor::SpinorBasis;
use crate::spinor_op::{DroppedTerm, SpinorOp};

/// `sum_k c_k A_k` with exact matrices `A_k` and float couplings `c_k`.
pub(crate) fn combine(domain: Domain, parts: &[(f64, &Operator<Rational64>)]) -> Result<Operator<f64>> {
    let mut total = Operator::zeros(domain);
    for (c, op) in parts {
        total = total.try_add(&op.map(rational_to_f64).scale(*c))?;
    }
    Ok(total)
}

/// One-variable operator assembled from exact per-coupling pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedOperator {
    pub basis: SpinorBasis,
    pub op: Operator<f64>,
    /// The exact coefficient operator of each coupling, in parameter order.
    pub pieces: Vec<(&'static str, SpinorOp)>,
    /// Images that left the basis; nonempty means the basis is not invariant.
    pub dropped: Vec<(&'static str, DroppedTerm)>,
}

pub(crate) fn assemble(basis: SpinorBasis, pieces: Vec<(&'static str, f64, SpinorOp)>) -> Result<ReducedOperator> {
    let mut mats = Vec::new();
    let mut dropped = Vec::new();
    for (name, _, op) in &pieces {
        let (m, d) = op.to_matrix(&basis);
        dropped.extend(d.into_iter().map(|t| (*name, t)));
        mats.push(m);
    }
    let parts: Vec<(f64, &Operator<Rational64>)> = pieces.iter().zip(&mats).map(|((_, c, _), m)| (*c, m)).collect();
    let op = combine(Domain::Spinor(basis), &parts)?;
    Ok(ReducedOperator {
        basis,
        op,
        pieces: pieces.into_iter().map(|(n, _, o)| (n, o)).collect(),
        dropped,
    })
}
