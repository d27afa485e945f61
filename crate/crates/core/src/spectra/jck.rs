//! Jaynes-Cummings model with a Kerr medium in three pictures: the physical
//! single-mode Hamiltonian, its osp(2,1) generator form, and the
//! one-variable sector operator.

use num_rational::Rational64;
use serde_json::{json, Value};

use crate::algebra::{build_generators, RealizationKind};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fock::FockSpace;
use crate::json::Sig17;
use crate::operator::{Domain, Operator};
use crate::spinor::SpinorBasis;

use super::parametric::{assemble, ReducedOperator};
use super::params::JCKerrParams;

/// Field mode `a = a1`; mode 2 is a spectator.
pub fn build_jck_full(space: FockSpace, p: &JCKerrParams) -> Result<Operator<f64>> {
    let pieces = [
        (p.omega, Expr::n1()),
        (p.omega0 / 2.0, Expr::sigma_zero()),
        (p.kappa, Expr::a1_dag() * Expr::sigma_minus() + Expr::a1() * Expr::sigma_plus()),
        (p.lambda, Expr::n1().pow(2)),
    ];
    let mut h = Operator::zeros(Domain::Fock(space));
    for (c, e) in pieces {
        h = h.try_add(&e.to_fock(space)?.scale(c))?;
    }
    Ok(h)
}

/// `a1^+ a1 + sigma_+ sigma_-`
pub fn jck_excitation(space: FockSpace) -> Result<Operator<f64>> {
    (Expr::n1() + Expr::occupation()).to_fock(space)
}

/// The generator form of the Hamiltonian together with its difference from
/// the physical one.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicForm {
    pub realization: RealizationKind,
    pub hamiltonian: Operator<f64>,
    /// `physical - algebraic`
    pub difference: Operator<f64>,
    pub interior: Vec<usize>,
}

impl AlgebraicForm {
    /// Largest difference entry over interior columns.
    pub fn interior_norm(&self) -> f64 {
        self.difference.max_abs_on_columns(&self.interior)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.difference.triplets().map(|(_, _, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn to_json(&self, subject: &str) -> Value {
        json!({
            "subject": subject,
            "realization": self.realization.label(),
            "interior_columns": self.interior.len(),
            "max_abs_interior": Sig17(self.interior_norm()).to_value(),
            "frobenius": Sig17(self.frobenius_norm()).to_value(),
            "nonzero_entries": self.difference.nnz(),
        })
    }
}

/// The sum of `omega (2 J0 + N)`, `omega0/2 (J - N - J0 - 1)`,
/// `lambda (2 J0 + N)^2` and `kappa (W+ - V-)` from generator matrices.
pub fn build_jck_algebraic(space: FockSpace, p: &JCKerrParams, realization: RealizationKind) -> Result<AlgebraicForm> {
    let g = build_generators(space, realization)?;
    let id = Operator::identity(Domain::Fock(space));
    let number = &g.j0.scale(2.0) + &g.n;
    let atomic = &(&(&g.j - &g.n) - &g.j0) - &id;
    let kerr = number.try_mul(&number)?;
    let coupling = &g.wp - &g.vm;
    let h = &(&(&number.scale(p.omega) + &atomic.scale(p.omega0 / 2.0)) + &kerr.scale(p.lambda))
        + &coupling.scale(p.kappa);
    let difference = build_jck_full(space, p)?.try_sub(&h)?;
    Ok(AlgebraicForm { realization, hamiltonian: h, difference, interior: space.interior(1) })
}

/// Sector basis: upper degrees `0..=j`, lower degrees `0..=j-1`.
pub fn jck_sector_basis(j: usize) -> Result<SpinorBasis> {
    if j == 0 {
        return Err(Error::InvalidArgument("sector label j must be at least 1".into()));
    }
    Ok(SpinorBasis::new(j, j, j - 1))
}

/// The sum of `(omega + omega0)(2 x d + 1 - j)`, `(omega - omega0) sigma0`,
/// `lambda (2 x d + 1 + sigma0 - j)^2` and `kappa (x sigma_- + d sigma_+)`
/// on the given basis; images leaving the basis are dropped and recorded.
pub fn build_jck_reduced_on(basis: SpinorBasis, p: &JCKerrParams) -> Result<ReducedOperator> {
    let j = basis.j as i64;
    let euler = Expr::n1().scale(Rational64::from_integer(2)) + Expr::int(1 - j);
    let sz = Expr::sigma_zero();
    let kerr = (euler.clone() + sz.clone()).pow(2);
    let coupling = Expr::a1_dag() * Expr::sigma_minus() + Expr::a1() * Expr::sigma_plus();
    let omega_part = euler.clone() + sz.clone();
    let omega0_part = euler - sz;
    assemble(
        basis,
        vec![
            ("omega", p.omega, omega_part.to_spinor_op(j)?),
            ("omega0", p.omega0, omega0_part.to_spinor_op(j)?),
            ("kappa", p.kappa, coupling.to_spinor_op(j)?),
            ("lambda", p.lambda, kerr.to_spinor_op(j)?),
        ],
    )
}

pub fn build_jck_reduced(j: usize, p: &JCKerrParams) -> Result<ReducedOperator> {
    build_jck_reduced_on(jck_sector_basis(j)?, p)
}

/// The values listed for `j = 1` and `j = 2` in closed form.
pub fn jck_printed_values(j: usize, p: &JCKerrParams) -> Option<Vec<f64>> {
    let JCKerrParams { omega: w, omega0: w0, kappa: k, lambda: l } = *p;
    match j {
        1 => Some(vec![9.0 * l + 3.0 * w + w0, l - w + w0]),
        2 => {
            let root = (k * k + (3.0 * w + 6.0 * l + w0).powi(2)).sqrt();
            Some(vec![2.0 * w0, 2.0 * (w + 2.0 * l), w + 10.0 * l + w0 + root, w + 10.0 * l + w0 - root])
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_generators;
    use crate::eigen::eigen_dense;
    use crate::fock::FockState;
    use crate::operator::commutator;

    fn params() -> JCKerrParams {
        JCKerrParams::new(1.0, 0.5, 0.2, 0.1).unwrap()
    }

    #[test]
    fn full_is_symmetric_and_conserves_excitations() {
        let space = FockSpace::new(6, 2);
        let h = build_jck_full(space, &params()).unwrap();
        assert!(h.is_symmetric());
        let c = commutator(&h, &jck_excitation(space).unwrap()).unwrap();
        assert!(c.max_abs() < 1e-12);
    }

    #[test]
    fn ground_energy_and_decoupled_spectrum() {
        let space = FockSpace::new(4, 0);
        let p = JCKerrParams::new(1.3, 0.7, 0.0, 0.0).unwrap();
        let h = build_jck_full(space, &p).unwrap();
        let g = space.index(&FockState::new(0, 0, 0)).unwrap();
        assert_eq!(h.get(g, g), -0.35);
        let spec = eigen_dense(&h).unwrap();
        let mut expected: Vec<f64> = (0..=4).flat_map(|n| [1.3 * n as f64 + 0.35, 1.3 * n as f64 - 0.35]).collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in spec.real_parts().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn schwinger_number_and_coupling_identities() {
        let space = FockSpace::new(5, 5);
        let g = build_generators(space, RealizationKind::FermA).unwrap();
        let lhs = &g.j0.scale(2.0) + &g.n;
        let rhs = Expr::n1().to_fock(space).unwrap().scale(2.0);
        assert!((&lhs - &rhs).max_abs() < 1e-12);
        let coupling = &g.wp - &g.vm;
        let physical = (Expr::sigma_minus() * Expr::a1_dag() + Expr::sigma_plus() * Expr::a1()).to_fock(space).unwrap();
        assert!((&coupling - &physical).max_abs() < 1e-12);
    }

    #[test]
    fn embedding_difference_on_single_quantum() {
        let space = FockSpace::new(4, 4);
        let p = JCKerrParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let form = build_jck_algebraic(space, &p, RealizationKind::FermA).unwrap();
        let i = space.index(&FockState::new(1, 0, 0)).unwrap();
        // omega n1 - 2 omega n1 on |1,0>
        assert_eq!(form.difference.get(i, i), -1.0);
    }

    #[test]
    fn reduced_without_coupling_is_diagonal() {
        let p = JCKerrParams::new(0.9, 0.4, 0.0, 0.3).unwrap();
        for j in 1..5 {
            let r = build_jck_reduced(j, &p).unwrap();
            assert!(r.op.triplets().all(|(a, b, _)| a == b), "j={j}");
        }
    }

    #[test]
    fn reduced_j1_contains_listed_values() {
        let p = params();
        let r = build_jck_reduced(1, &p).unwrap();
        let spec = eigen_dense(&r.op).unwrap().real_parts();
        for v in jck_printed_values(1, &p).unwrap() {
            assert!(spec.iter().any(|e| (e - v).abs() < 1e-9), "{v} not in {spec:?}");
        }
    }
}
