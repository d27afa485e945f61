//! Two-mode Jaynes-Cummings Hamiltonian and its one-variable sector form.

use num_complex::Complex64;
use num_rational::Rational64;
use serde_json::{json, Value};

use crate::algebra::{build_generators, RealizationKind};
use crate::eigen::{Provenance, Spectrum};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fock::FockSpace;
use crate::json::Sig17;
use crate::operator::{Domain, Operator};
use crate::spinor::{expand_linear_factors, PolySpinor, SpinorBasis};
use crate::spinor_op::SpinorOp;

use super::jck::AlgebraicForm;
use super::parametric::{assemble, ReducedOperator};
use super::params::MJCParams;

/// Residual bound for accepting a closed-form eigenpair.
pub const EIGENFUNCTION_TOLERANCE: f64 = 1e-10;

pub fn build_mjc_full(space: FockSpace, p: &MJCParams) -> Result<Operator<f64>> {
    let pieces = [
        (p.omega, Expr::n1() + Expr::n2()),
        (p.omega0 / 2.0, Expr::sigma_zero()),
        (p.lambda1, Expr::a1() * Expr::sigma_plus() + Expr::a1_dag() * Expr::sigma_minus()),
        (p.lambda2, Expr::a2() * Expr::sigma_plus() + Expr::a2_dag() * Expr::sigma_minus()),
    ];
    let mut h = Operator::zeros(Domain::Fock(space));
    for (c, e) in pieces {
        h = h.try_add(&e.to_fock(space)?.scale(c))?;
    }
    Ok(h)
}

/// `a1^+ a1 + a2^+ a2 + sigma_+ sigma_-`
pub fn mjc_excitation(space: FockSpace) -> Result<Operator<f64>> {
    (Expr::n1() + Expr::n2() + Expr::occupation()).to_fock(space)
}

/// The sum of `omega N`, `omega0/2 (J - 1 - N/2)`, `lambda1 (W+ - V-)` and
/// `lambda2 (W- + V+)` from the generators of the first realization.
pub fn build_mjc_algebraic(space: FockSpace, p: &MJCParams) -> Result<AlgebraicForm> {
    let realization = RealizationKind::FermA;
    let g = build_generators(space, realization)?;
    let id = Operator::identity(Domain::Fock(space));
    let atomic = &(&g.j - &id) - &g.n.scale(0.5);
    let h = &(&(&g.n.scale(p.omega) + &atomic.scale(p.omega0 / 2.0)) + &(&g.wp - &g.vm).scale(p.lambda1))
        + &(&g.wm + &g.vp).scale(p.lambda2);
    let difference = build_mjc_full(space, p)?.try_sub(&h)?;
    Ok(AlgebraicForm { realization, hamiltonian: h, difference, interior: space.interior(1) })
}

/// Sector basis: upper degrees `0..=j-1`, lower degrees `0..=j`.
pub fn mjc_sector_basis(j: usize) -> Result<SpinorBasis> {
    if j == 0 {
        return Err(Error::InvalidArgument("sector label j must be at least 1".into()));
    }
    Ok(SpinorBasis::new(j, j - 1, j))
}

/// The sum of `omega (j - 1 - sigma0)`, `omega0/2 sigma0`,
/// `lambda1 (x sigma_- + d sigma_+)` and `lambda2 (sigma_- - (x d - j) sigma_+)`.
pub fn build_mjc_reduced(j: usize, p: &MJCParams) -> Result<ReducedOperator> {
    let basis = mjc_sector_basis(j)?;
    let jj = j as i64;
    let sz = Expr::sigma_zero();
    let omega_part = Expr::int(jj - 1) - sz.clone();
    let omega0_part = sz.scale(Rational64::new(1, 2));
    let first = Expr::a1_dag() * Expr::sigma_minus() + Expr::a1() * Expr::sigma_plus();
    let second = Expr::sigma_minus() - (Expr::n1() - Expr::int(jj)) * Expr::sigma_plus();
    assemble(
        basis,
        vec![
            ("omega", p.omega, omega_part.to_spinor_op(jj)?),
            ("omega0", p.omega0, omega0_part.to_spinor_op(jj)?),
            ("lambda1", p.lambda1, first.to_spinor_op(jj)?),
            ("lambda2", p.lambda2, second.to_spinor_op(jj)?),
        ],
    )
}

/// `omega (j - 1) + sign sqrt((omega0/2 - omega)^2 + n (lambda1^2 + lambda2^2))`
pub fn mjc_energy(j: usize, n: usize, sign: f64, p: &MJCParams) -> f64 {
    let detuning = p.omega0 / 2.0 - p.omega;
    p.omega * (j as f64 - 1.0) + sign * (detuning * detuning + n as f64 * p.coupling_strength()).sqrt()
}

/// `omega (j - 1) +- sqrt((omega0 - 2 omega)^2 + 4 n (lambda1^2 + lambda2^2))`
/// as listed in closed form.
pub fn printed_mjc_energies(j: usize, n: usize, p: &MJCParams) -> [f64; 2] {
    let root = ((p.omega0 - 2.0 * p.omega).powi(2) + 4.0 * n as f64 * p.coupling_strength()).sqrt();
    let base = p.omega * (j as f64 - 1.0);
    [base + root, base - root]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondComponent {
    /// `(lambda2 + lambda1 x)^(n-1) (lambda1 - lambda2 x)^(j-n)`
    Polynomial,
    /// `n = 0`: the listed form has a negative power; the zero polynomial is
    /// used instead.
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    /// `+1` or `-1`, the side of `omega (j - 1)` the energy lies on.
    pub sign: i8,
    pub energy: Complex64,
    /// `C2 / C1`; `None` when the eigenfunction has no lower component.
    pub ratio: Option<f64>,
    pub eigenfunction: PolySpinor,
    /// `|H phi - E phi|_inf / |phi|_inf`
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub j: usize,
    pub n: usize,
    /// Lower component candidate, coefficients of `x^0..=x^j`.
    pub phi1: Vec<f64>,
    /// Upper component candidate, coefficients of `x^0..=x^(j-1)`.
    pub phi2: Vec<f64>,
    pub second: SecondComponent,
    /// How far the operator leaves `span{phi1, phi2}`.
    pub projection_residual: f64,
    pub consistent: bool,
    pub branches: Vec<Branch>,
    pub printed: [f64; 2],
}

fn pad(v: &[f64], len: usize) -> Vec<f64> {
    let mut out = v.to_vec();
    out.resize(len.max(v.len()), 0.0);
    out
}

fn axpy(acc: &mut Vec<f64>, c: f64, v: &[f64]) {
    if acc.len() < v.len() {
        acc.resize(v.len(), 0.0);
    }
    for (a, b) in acc.iter_mut().zip(v) {
        *a += c * b;
    }
}

/// `sum_k c_k op_k psi` without truncation.
fn apply_pieces(pieces: &[(f64, &SpinorOp)], psi: &PolySpinor) -> PolySpinor {
    let mut out = PolySpinor { upper: Vec::new(), lower: Vec::new() };
    for (c, op) in pieces {
        let img = op.apply(psi);
        axpy(&mut out.upper, *c, &img.upper);
        axpy(&mut out.lower, *c, &img.lower);
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn spinor_residual(pieces: &[(f64, &SpinorOp)], phi: &PolySpinor, e: f64) -> f64 {
    let image = apply_pieces(pieces, phi);
    let len_u = image.upper.len().max(phi.upper.len());
    let len_l = image.lower.len().max(phi.lower.len());
    let diff = |img: &[f64], v: &[f64], len: usize| -> f64 {
        let (a, b) = (pad(img, len), pad(v, len));
        a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - e * y).abs()))
    };
    let r = diff(&image.upper, &phi.upper, len_u).max(diff(&image.lower, &phi.lower, len_l));
    r / phi.max_abs().max(f64::MIN_POSITIVE)
}

/// Substitutes the product-form eigenfunctions for quantum number `n` into
/// the sector operator, fixing `C2 / C1` and the branch energies.
pub fn mjc_closed_form(j: usize, n: usize, p: &MJCParams) -> Result<ClosedForm> {
    let basis = mjc_sector_basis(j)?;
    if n > j {
        return Err(Error::InvalidArgument(format!("quantum number n = {n} exceeds j = {j}")));
    }
    if p.lambda1 == 0.0 && p.lambda2 == 0.0 {
        return Err(Error::InvalidArgument("closed form needs (lambda1, lambda2) != (0, 0)".into()));
    }
    let reduced = build_mjc_reduced(j, p)?;
    let coefs = [p.omega, p.omega0, p.lambda1, p.lambda2];
    let pieces: Vec<(f64, &SpinorOp)> = coefs.iter().zip(&reduced.pieces).map(|(c, (_, op))| (*c, op)).collect();

    let phi1 = expand_linear_factors(&[(p.lambda2, p.lambda1, n), (p.lambda1, -p.lambda2, j - n)]);
    let (phi2, second) = if n == 0 {
        (vec![0.0; j], SecondComponent::Zero)
    } else {
        (expand_linear_factors(&[(p.lambda2, p.lambda1, n - 1), (p.lambda1, -p.lambda2, j - n)]), SecondComponent::Polynomial)
    };
    let lower_vec = PolySpinor { upper: vec![0.0; basis.upper_max + 1], lower: phi1.clone() };
    let upper_vec = PolySpinor { upper: phi2.clone(), lower: vec![0.0; basis.lower_max + 1] };

    // Coordinates of the images in the (lower, upper) candidate basis. The
    // candidates live in different components, so projections decouple.
    let project = |img: &PolySpinor| -> (f64, f64, f64) {
        let a = dot(&img.lower, &phi1) / dot(&phi1, &phi1);
        let b = if second == SecondComponent::Zero { 0.0 } else { dot(&img.upper, &phi2) / dot(&phi2, &phi2) };
        let mut rl = img.lower.clone();
        axpy(&mut rl, -a, &phi1);
        let mut ru = img.upper.clone();
        if b != 0.0 {
            axpy(&mut ru, -b, &phi2);
        }
        (a, b, max_abs(&rl).max(max_abs(&ru)))
    };
    let (m11, m21, r1) = project(&apply_pieces(&pieces, &lower_vec));
    let scale = max_abs(&phi1).max(max_abs(&phi2));
    let mut projection_residual = r1;
    let mut branches = Vec::new();
    let centre = p.omega * (j as f64 - 1.0);

    let mut push = |energy: Complex64, c1: f64, c2: f64| {
        let phi = PolySpinor {
            upper: phi2.iter().map(|x| c2 * x).collect(),
            lower: phi1.iter().map(|x| c1 * x).collect(),
        };
        let residual = if energy.im == 0.0 { spinor_residual(&pieces, &phi, energy.re) } else { f64::INFINITY };
        let sign = if energy.re >= centre { 1 } else { -1 };
        let ratio = (c1 != 0.0).then(|| c2 / c1);
        branches.push(Branch { sign, energy, ratio, eigenfunction: phi, residual });
    };

    if second == SecondComponent::Zero {
        push(Complex64::new(m11, 0.0), 1.0, 0.0);
    } else {
        let (m12, m22, r2) = project(&apply_pieces(&pieces, &upper_vec));
        projection_residual = projection_residual.max(r2);
        let half_trace = (m11 + m22) / 2.0;
        let disc = ((m11 - m22) / 2.0).powi(2) + m12 * m21;
        for s in [1.0, -1.0] {
            let root = Complex64::new(disc, 0.0).sqrt() * s;
            let e = root + half_trace;
            if e.im != 0.0 {
                push(e, 1.0, 0.0);
                continue;
            }
            let e = e.re;
            // Null vector of [[m11 - e, m12], [m21, m22 - e]].
            let (c1a, c2a) = (m12, e - m11);
            let (c1b, c2b) = (e - m22, m21);
            let (c1, c2) = if c1a.hypot(c2a) >= c1b.hypot(c2b) { (c1a, c2a) } else { (c1b, c2b) };
            let norm = if c1 != 0.0 { c1 } else { c2 };
            push(Complex64::new(e, 0.0), c1 / norm, c2 / norm);
        }
    }
    let projection_residual = projection_residual / scale.max(f64::MIN_POSITIVE);
    let consistent = projection_residual < EIGENFUNCTION_TOLERANCE
        && branches.iter().all(|b| b.residual < EIGENFUNCTION_TOLERANCE);
    Ok(ClosedForm {
        j,
        n,
        phi1,
        phi2,
        second,
        projection_residual,
        consistent,
        branches,
        printed: printed_mjc_energies(j, n, p),
    })
}

/// Every accepted branch for `n = 0..=j`, sorted, residuals aligned.
pub fn mjc_closed_form_spectrum(j: usize, p: &MJCParams) -> Result<(Spectrum, Vec<ClosedForm>)> {
    let forms: Vec<ClosedForm> = (0..=j).map(|n| mjc_closed_form(j, n, p)).collect::<Result<_>>()?;
    let mut pairs: Vec<(Complex64, f64)> =
        forms.iter().flat_map(|f| f.branches.iter().map(|b| (b.energy, b.residual))).collect();
    pairs.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut spec = Spectrum::from_values(pairs.iter().map(|x| x.0).collect(), Provenance::ClosedForm);
    spec.residuals = pairs.iter().map(|x| x.1).collect();
    for f in &forms {
        if !f.consistent {
            spec.warnings.push(format!(
                "n = {}: substitution residual {:.3e} exceeds tolerance",
                f.n,
                f.branches.iter().fold(f.projection_residual, |m, b| m.max(b.residual))
            ));
        }
    }
    Ok((spec, forms))
}

/// Listed closed-form values over the same branch bookkeeping: both signs for
/// `n >= 1`, and for `n = 0` the sign of the accepted derived branch.
pub fn printed_mjc_spectrum(j: usize, p: &MJCParams, forms: &[ClosedForm]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for f in forms {
        let [plus, minus] = printed_mjc_energies(j, f.n, p);
        for b in &f.branches {
            out.push(Complex64::new(if b.sign > 0 { plus } else { minus }, 0.0));
        }
    }
    out
}

impl ClosedForm {
    pub fn to_json(&self) -> Value {
        let f = |v: &[f64]| v.iter().map(|x| Sig17(*x).to_value()).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "phi1": f(&self.phi1),
            "phi2": f(&self.phi2),
            "phi2_choice": match self.second {
                SecondComponent::Polynomial => "product-form",
                SecondComponent::Zero => "zero",
            },
            "projection_residual": Sig17(self.projection_residual).to_value(),
            "consistent": self.consistent,
            "printed": f(&self.printed),
            "branches": self.branches.iter().map(|b| json!({
                "sign": b.sign,
                "energy": [Sig17(b.energy.re).to_value(), Sig17(b.energy.im).to_value()],
                "ratio": b.ratio.map(|r| Sig17(r).to_value()),
                "residual": Sig17(b.residual).to_value(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{eigen_dense, match_multiset, Tolerance};
    use crate::operator::commutator;

    fn params() -> MJCParams {
        MJCParams::new(1.0, 1.0, 0.3, 0.4).unwrap()
    }

    #[test]
    fn full_is_symmetric_and_conserves_excitations() {
        let space = FockSpace::new(4, 4);
        let h = build_mjc_full(space, &params()).unwrap();
        assert!(h.is_symmetric());
        assert!(commutator(&h, &mjc_excitation(space).unwrap()).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn reduced_basis_is_invariant() {
        for j in 1..6 {
            assert!(build_mjc_reduced(j, &params()).unwrap().dropped.is_empty());
        }
    }

    #[test]
    fn reduced_without_coupling() {
        let p = MJCParams::new(1.2, 0.5, 0.0, 0.0).unwrap();
        let r = build_mjc_reduced(3, &p).unwrap();
        for (i, (c, _)) in r.basis.monomials().enumerate() {
            let expected = match c {
                crate::spinor::Component::Upper => 1.2 + 0.25,
                crate::spinor::Component::Lower => 1.2 * 3.0 - 0.25,
            };
            assert!((r.op.get(i, i) - expected).abs() < 1e-12);
        }
        assert_eq!(r.op.nnz(), r.basis.dim());
    }

    #[test]
    fn substitution_reproduces_derived_energies() {
        let p = params();
        for j in 1..5 {
            for n in 0..=j {
                let f = mjc_closed_form(j, n, &p).unwrap();
                assert!(f.consistent, "j={j} n={n}");
                assert_eq!(f.branches.len(), if n == 0 { 1 } else { 2 });
                for b in &f.branches {
                    let e = mjc_energy(j, n, f64::from(b.sign), &p);
                    assert!((b.energy.re - e).abs() < 1e-12, "j={j} n={n}");
                }
            }
        }
    }

    #[test]
    fn euler_eigenstate_at_top_quantum_number() {
        let p = MJCParams::new(0.8, 1.7, 0.6, 0.0).unwrap();
        let f = mjc_closed_form(3, 3, &p).unwrap();
        assert!(f.branches.iter().all(|b| b.residual < 1e-12));
        assert_eq!(f.phi1, vec![0.0, 0.0, 0.0, 0.6f64.powi(3)]);
    }

    #[test]
    fn closed_form_spectrum_equals_dense() {
        let p = MJCParams::new(0.7, 1.9, -0.45, 0.35).unwrap();
        for j in 1..6 {
            let (cf, _) = mjc_closed_form_spectrum(j, &p).unwrap();
            let dense = eigen_dense(&build_mjc_reduced(j, &p).unwrap().op).unwrap();
            let m = match_multiset(&cf.eigenvalues, &dense.eigenvalues, Tolerance::Relative { rel: 1e-9 });
            assert!(m.is_complete(), "j={j}");
        }
    }

    #[test]
    fn listed_root_is_twice_the_substituted_one() {
        let p = params();
        let [plus, _] = printed_mjc_energies(2, 1, &p);
        let derived = mjc_energy(2, 1, 1.0, &p);
        assert!(((plus - p.omega) - 2.0 * (derived - p.omega)).abs() < 1e-12);
    }

    #[test]
    fn algebraic_form_misses_half_the_atomic_splitting() {
        let space = FockSpace::new(4, 4);
        let p = MJCParams::new(0.0, 2.0, 0.0, 0.0).unwrap();
        let form = build_mjc_algebraic(space, &p).unwrap();
        let up = space.index(&crate::fock::FockState::new(1, 1, 1)).unwrap();
        let down = space.index(&crate::fock::FockState::new(1, 1, 0)).unwrap();
        assert_eq!(form.difference.get(up, up), 1.0);
        assert_eq!(form.difference.get(down, down), 0.0);
    }
}
