//! Three-term recurrence for the JC-Kerr sector.
//!
//! In the ordering `v0, u0, v1, u1, .., v_{j-1}, u_{j-1}, u_j` the sector
//! operator is tridiagonal, so `det(E - H)` is a continuant. Links with a
//! vanishing product split the chain into independent blocks; each block's
//! characteristic polynomial is rooted through its companion matrix and the
//! roots are polished by simultaneous Newton (Aberth) steps on the
//! continuant itself.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::eigen::{eigen_dense, eigen_matrix, match_multiset, EigenOptions, Provenance, Spectrum, Tolerance};
use crate::error::{Error, Result};
use crate::json::Sig17;
use crate::spinor::Component;

use super::jck::build_jck_reduced;
use super::params::JCKerrParams;

const POLISH_ITERATIONS: usize = 200;

/// Integer coefficients of `(omega, omega0, lambda)`.
pub type LinearForm = [i64; 3];

fn evaluate(form: LinearForm, p: &JCKerrParams) -> f64 {
    form[0] as f64 * p.omega + form[1] as f64 * p.omega0 + form[2] as f64 * p.lambda
}

/// Diagonal of the upper monomial `x^n` (shared by both versions).
pub fn upper_diagonal(j: usize, n: usize) -> LinearForm {
    let d = j as i64 - 2 * n as i64;
    [2 - d, -d, (d - 2) * (d - 2)]
}

/// Diagonal of the lower monomial `x^m` derived from the sector operator.
pub fn lower_diagonal(j: usize, m: usize) -> LinearForm {
    let d = j as i64 - 2 * m as i64;
    [-d, 2 - d, d * d]
}

/// Diagonal of the lower monomial as printed:
/// `-(j - 2m)(omega - lambda (j - m)) - (j - 2m - 2) omega0`.
pub fn printed_lower_diagonal(j: usize, m: usize) -> LinearForm {
    let d = j as i64 - 2 * m as i64;
    [-d, 2 - d, d * (j as i64 - m as i64)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Derived,
    Printed,
}

impl Coefficients {
    pub fn label(self) -> &'static str {
        match self {
            Coefficients::Derived => "derived",
            Coefficients::Printed => "printed",
        }
    }
}

/// Tridiagonal operator: `upper[i] = H[i, i+1]`, `lower[i] = H[i+1, i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub sites: Vec<(Component, usize)>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

pub fn chain_sites(j: usize) -> Vec<(Component, usize)> {
    let mut sites = Vec::with_capacity(2 * j + 1);
    for k in 0..j {
        sites.push((Component::Lower, k));
        sites.push((Component::Upper, k));
    }
    sites.push((Component::Upper, j));
    sites
}

pub fn jck_chain(j: usize, p: &JCKerrParams, which: Coefficients) -> Result<Chain> {
    if j == 0 {
        return Err(Error::InvalidArgument("sector label j must be at least 1".into()));
    }
    let sites = chain_sites(j);
    let diag = sites
        .iter()
        .map(|&(c, k)| match (c, which) {
            (Component::Upper, _) => evaluate(upper_diagonal(j, k), p),
            (Component::Lower, Coefficients::Derived) => evaluate(lower_diagonal(j, k), p),
            (Component::Lower, Coefficients::Printed) => evaluate(printed_lower_diagonal(j, k), p),
        })
        .collect();
    let links = sites.len() - 1;
    let mut upper = vec![0.0; links];
    let mut lower = vec![0.0; links];
    for i in 0..links {
        match (sites[i], sites[i + 1], which) {
            // u_n above v_{n+1}: d sigma_+ brings x^{n+1} down with factor n+1.
            ((Component::Upper, n), (Component::Lower, _), Coefficients::Derived) => {
                upper[i] = p.kappa * (n + 1) as f64;
                lower[i] = p.kappa;
            }
            ((Component::Lower, k), (Component::Upper, _), Coefficients::Printed) => {
                upper[i] = p.kappa;
                lower[i] = p.kappa * (k + 1) as f64;
            }
            _ => {}
        }
    }
    Ok(Chain { sites, diag, upper, lower })
}

impl Chain {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = self.upper[i];
            m[(i + 1, i)] = self.lower[i];
        }
        m
    }

    /// Index ranges of the decoupled blocks.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 0..self.dim().saturating_sub(1) {
            if self.upper[i] * self.lower[i] == 0.0 {
                out.push(start..i + 1);
                start = i + 1;
            }
        }
        out.push(start..self.dim());
        out
    }

    /// Monic `det(E - H)` of a block, lowest power first.
    fn characteristic(&self, block: &std::ops::Range<usize>) -> Vec<f64> {
        let mut prev: Vec<f64> = vec![1.0];
        let mut cur: Vec<f64> = vec![-self.diag[block.start], 1.0];
        for k in block.start + 1..block.end {
            let link = self.upper[k - 1] * self.lower[k - 1];
            let mut next = vec![0.0; cur.len() + 1];
            for (i, &c) in cur.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= self.diag[k] * c;
            }
            for (i, &c) in prev.iter().enumerate() {
                next[i] -= link * c;
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `det(E - H_block)` and its derivative by the continuant recurrence.
    fn continuant(&self, block: &std::ops::Range<usize>, e: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let (mut p_prev, mut d_prev) = (one, Complex64::default());
        let (mut p, mut d) = (e - self.diag[block.start], one);
        for k in block.start + 1..block.end {
            let link = self.upper[k - 1] * self.lower[k - 1];
            let shift = e - self.diag[k];
            let p_next = shift * p - link * p_prev;
            let d_next = p + shift * d - link * d_prev;
            (p_prev, d_prev, p, d) = (p, d, p_next, d_next);
        }
        (p, d)
    }
}

fn companion_roots(monic: &[f64]) -> Result<Vec<Complex64>> {
    let n = monic.len() - 1;
    let mut m = DMatrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -monic[i];
    }
    Ok(eigen_matrix(&m, EigenOptions::default())?.eigenvalues)
}

/// Aberth iteration; `None` if the corrections never settle.
fn polish(chain: &Chain, block: &std::ops::Range<usize>, mut roots: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let scale = chain.to_dense().amax().max(1.0);
    for _ in 0..POLISH_ITERATIONS {
        let mut largest = 0.0f64;
        for i in 0..roots.len() {
            let (p, d) = chain.continuant(block, roots[i]);
            if p == Complex64::default() {
                continue;
            }
            let newton = p / d;
            let repulsion: Complex64 = (0..roots.len())
                .filter(|&k| k != i)
                .map(|k| Complex64::new(1.0, 0.0) / (roots[i] - roots[k]))
                .sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return None;
            }
            roots[i] -= step;
            largest = largest.max(step.norm());
        }
        if largest <= 4.0 * f64::EPSILON * scale {
            return Some(roots);
        }
    }
    None
}

fn solve_block(chain: &Chain, block: &std::ops::Range<usize>) -> Option<Vec<Complex64>> {
    if block.len() == 1 {
        return Some(vec![Complex64::new(chain.diag[block.start], 0.0)]);
    }
    let monic = chain.characteristic(block);
    if monic.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let start = companion_roots(&monic).ok()?;
    polish(chain, block, start)
}

/// Roots of the terminating polynomial, or the dense sector spectrum with a
/// warning if the polynomial route breaks down.
pub fn chain_spectrum(chain: &Chain) -> Result<Spectrum> {
    let mut roots = Vec::with_capacity(chain.dim());
    for block in chain.blocks() {
        match solve_block(chain, &block) {
            Some(r) => roots.extend(r),
            None => {
                let mut spec = eigen_matrix(&chain.to_dense(), EigenOptions::default())?;
                spec.warnings.push(format!(
                    "recurrence block {}..{} has a degenerate characteristic polynomial; used dense diagonalization",
                    block.start, block.end
                ));
                return Ok(spec);
            }
        }
    }
    Ok(Spectrum::from_values(roots, Provenance::Recurrence))
}

pub fn jck_recurrence(j: usize, p: &JCKerrParams) -> Result<Spectrum> {
    p.validate()?;
    chain_spectrum(&jck_chain(j, p, Coefficients::Derived)?)
}

/// Off-diagonal entry `(row site, column site, kappa multiplier)`.
pub type Coupling = ((Component, usize), (Component, usize), usize);

/// Printed recurrence coefficients against the derived ones.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceDiff {
    pub j: usize,
    /// `(m, derived, printed)` for every lower diagonal that differs.
    pub lower_diagonal: Vec<(usize, LinearForm, LinearForm)>,
    pub derived_couplings: Vec<Coupling>,
    pub printed_couplings: Vec<Coupling>,
    /// Derived and printed spectra at the audited parameters.
    pub derived_spectrum: Vec<Complex64>,
    pub printed_spectrum: Vec<Complex64>,
    pub unmatched_printed: Vec<Complex64>,
}

fn couplings(chain_of: impl Fn(f64) -> Result<Chain>) -> Result<Vec<Coupling>> {
    let unit = chain_of(1.0)?;
    let mut out = Vec::new();
    for i in 0..unit.dim() - 1 {
        if unit.upper[i] != 0.0 {
            out.push((unit.sites[i], unit.sites[i + 1], unit.upper[i] as usize));
            out.push((unit.sites[i + 1], unit.sites[i], unit.lower[i] as usize));
        }
    }
    Ok(out)
}

pub fn recurrence_diff(j: usize, p: &JCKerrParams) -> Result<RecurrenceDiff> {
    let lower_diagonal = (0..j)
        .map(|m| (m, lower_diagonal(j, m), printed_lower_diagonal(j, m)))
        .filter(|(_, a, b)| a != b)
        .collect();
    let unit = |which| move |kappa: f64| jck_chain(j, &JCKerrParams { kappa, ..*p }, which);
    let derived_spectrum = chain_spectrum(&jck_chain(j, p, Coefficients::Derived)?)?.eigenvalues;
    let printed_spectrum = eigen_matrix(&jck_chain(j, p, Coefficients::Printed)?.to_dense(), EigenOptions::default())?.eigenvalues;
    let matching = match_multiset(&printed_spectrum, &derived_spectrum, Tolerance::MATCHING);
    Ok(RecurrenceDiff {
        j,
        lower_diagonal,
        derived_couplings: couplings(unit(Coefficients::Derived))?,
        printed_couplings: couplings(unit(Coefficients::Printed))?,
        unmatched_printed: matching.unmatched_left.iter().map(|&i| printed_spectrum[i]).collect(),
        derived_spectrum,
        printed_spectrum,
    })
}

fn site_label((c, k): (Component, usize)) -> String {
    match c {
        Component::Upper => format!("u{k}"),
        Component::Lower => format!("v{k}"),
    }
}

fn form_json(f: LinearForm) -> Value {
    json!({"omega": f[0], "omega0": f[1], "lambda": f[2]})
}

fn complex_json(values: &[Complex64]) -> Value {
    Value::Array(values.iter().map(|z| json!([Sig17(z.re).to_value(), Sig17(z.im).to_value()])).collect())
}

impl RecurrenceDiff {
    pub fn is_consistent(&self) -> bool {
        self.lower_diagonal.is_empty() && self.derived_couplings == self.printed_couplings
    }

    pub fn to_json(&self) -> Value {
        let coupling_json = |cs: &[Coupling]| {
            Value::Array(
                cs.iter()
                    .map(|&(r, c, k)| json!({"row": site_label(r), "column": site_label(c), "kappa_multiplier": k}))
                    .collect(),
            )
        };
        json!({
            "j": self.j,
            "consistent": self.is_consistent(),
            "upper_diagonal": "identical",
            "lower_diagonal_mismatches": self.lower_diagonal.iter().map(|&(m, d, p)| json!({
                "m": m, "derived": form_json(d), "printed": form_json(p)
            })).collect::<Vec<_>>(),
            "derived_couplings": coupling_json(&self.derived_couplings),
            "printed_couplings": coupling_json(&self.printed_couplings),
            "derived_spectrum": complex_json(&self.derived_spectrum),
            "printed_spectrum": complex_json(&self.printed_spectrum),
            "printed_values_not_in_derived": complex_json(&self.unmatched_printed),
        })
    }
}

/// Dense spectrum of the sector operator built from the differential form.
pub fn jck_dense(j: usize, p: &JCKerrParams) -> Result<Spectrum> {
    eigen_dense(&build_jck_reduced(j, p)?.op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::SpinorBasis;

    #[test]
    fn derived_chain_reproduces_sector_matrix() {
        let p = JCKerrParams::new(0.7, -0.3, 0.45, 0.2).unwrap();
        for j in 1..6 {
            let chain = jck_chain(j, &p, Coefficients::Derived).unwrap();
            let reduced = build_jck_reduced(j, &p).unwrap();
            let basis = SpinorBasis::new(j, j, j - 1);
            let idx: Vec<usize> = chain.sites.iter().map(|&(c, k)| basis.index(c, k).unwrap()).collect();
            let dense = chain.to_dense();
            for a in 0..chain.dim() {
                for b in 0..chain.dim() {
                    let got = reduced.op.get(idx[a], idx[b]);
                    assert!((got - dense[(a, b)]).abs() < 1e-12, "j={j} ({a},{b}): {got} vs {}", dense[(a, b)]);
                }
            }
        }
    }

    #[test]
    fn recurrence_matches_dense() {
        let p = JCKerrParams::new(1.1, 0.6, 0.8, -0.25).unwrap();
        for j in 1..7 {
            let rec = jck_recurrence(j, &p).unwrap();
            assert_eq!(rec.provenance, Provenance::Recurrence);
            let dense = jck_dense(j, &p).unwrap();
            let m = match_multiset(&rec.eigenvalues, &dense.eigenvalues, Tolerance::Relative { rel: 1e-9 });
            assert!(m.is_complete(), "j={j}");
        }
    }

    #[test]
    fn decoupled_roots_are_diagonal() {
        let p = JCKerrParams::new(1.0, 0.3, 0.0, 0.2).unwrap();
        let chain = jck_chain(4, &p, Coefficients::Derived).unwrap();
        let mut diag = chain.diag.clone();
        diag.sort_by(f64::total_cmp);
        assert_eq!(jck_recurrence(4, &p).unwrap().real_parts(), diag);
    }

    #[test]
    fn continuant_polynomial_matches_companion_block() {
        let chain = Chain {
            sites: chain_sites(1),
            diag: vec![1.0, 2.0, 3.0],
            upper: vec![0.5, 1.0],
            lower: vec![2.0, 1.0],
        };
        // (E-1)(E-2)(E-3) - (E-3) - (E-1)
        let poly = chain.characteristic(&(0..3));
        assert_eq!(poly, vec![-2.0, 9.0, -6.0, 1.0]);
    }

    #[test]
    fn overflowing_polynomial_falls_back() {
        let p = JCKerrParams::new(1e200, 1e200, 1e200, 1e200).unwrap();
        let spec = jck_recurrence(3, &p).unwrap();
        assert_eq!(spec.provenance, Provenance::Dense);
        assert!(!spec.warnings.is_empty());
    }

    #[test]
    fn printed_lower_diagonal_differs_by_kerr_term() {
        let diff = recurrence_diff(3, &JCKerrParams::new(1.0, 0.5, 0.2, 0.1).unwrap()).unwrap();
        for &(m, d, p) in &diff.lower_diagonal {
            assert_eq!(d[2] - p[2], -((3 - 2 * m as i64) * m as i64));
        }
        assert!(!diff.is_consistent());
        assert_eq!(diff.to_json(), recurrence_diff(3, &JCKerrParams::new(1.0, 0.5, 0.2, 0.1).unwrap()).unwrap().to_json());
    }
}
