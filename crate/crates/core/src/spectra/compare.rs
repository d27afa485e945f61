//! Isospectrality audit between the one-variable sector operators and the
//! physical Hamiltonians restricted to conserved-excitation blocks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::RealizationKind;
use crate::eigen::{eigen_dense, eigen_matrix, match_multiset, real_values, EigenOptions, Matching, Tolerance};
use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockState};
use crate::json::Sig17;
use crate::operator::Operator;
use crate::spinor::SpinorBasis;

use super::jck::{build_jck_algebraic, build_jck_full, build_jck_reduced, build_jck_reduced_on, jck_printed_values};
use super::mjc::{build_mjc_algebraic, build_mjc_full, mjc_closed_form_spectrum, printed_mjc_spectrum};
use super::params::{JCKerrParams, MJCParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Jck,
    Mjc,
}

impl Model {
    pub fn label(self) -> &'static str {
        match self {
            Model::Jck => "jck",
            Model::Mjc => "mjc",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jck" => Ok(Model::Jck),
            "mjc" => Ok(Model::Mjc),
            other => Err(Error::InvalidArgument(format!("unknown model '{other}'"))),
        }
    }
}

/// Spectrum of one conserved-excitation block.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorSpectrum {
    pub excitation: usize,
    pub values: Vec<Complex64>,
}

/// Diagonalizes `h` on each block of states sharing `label`, keeping only
/// blocks with `label <= complete_up_to`; states with `label = None` are
/// ignored.
pub fn sector_spectra(
    h: &Operator<f64>,
    space: FockSpace,
    label: impl Fn(&FockState) -> Option<usize>,
    complete_up_to: usize,
) -> Result<Vec<SectorSpectrum>> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); complete_up_to + 1];
    for (i, st) in space.states().enumerate() {
        if let Some(k) = label(&st).filter(|&k| k <= complete_up_to) {
            members[k].push(i);
        }
    }
    members
        .into_iter()
        .enumerate()
        .map(|(k, idx)| {
            let block = DMatrix::from_fn(idx.len(), idx.len(), |a, b| h.get(idx[a], idx[b]));
            Ok(SectorSpectrum { excitation: k, values: eigen_matrix(&block, EigenOptions::default())?.eigenvalues })
        })
        .collect()
}

/// One reduced-value set matched into a flattened reference spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    pub name: &'static str,
    pub values: Vec<Complex64>,
    pub matching: Matching,
}

impl Containment {
    fn new(name: &'static str, values: Vec<Complex64>, reference: &[Complex64], tol: Tolerance) -> Self {
        let matching = match_multiset(&values, reference, tol);
        Containment { name, values, matching }
    }

    pub fn contained(&self) -> bool {
        self.matching.left_contained()
    }

    pub fn unmatched(&self) -> Vec<Complex64> {
        self.matching.unmatched_left.iter().map(|&i| self.values[i]).collect()
    }

    fn to_json(&self, reference: &[(usize, Complex64)]) -> Value {
        json!({
            "name": self.name,
            "contained": self.contained(),
            "matched": self.matching.pairs.iter().map(|&(i, k, d)| json!({
                "value": complex(self.values[i]),
                "reference": complex(reference[k].1),
                "sector": reference[k].0,
                "distance": Sig17(d).to_value(),
            })).collect::<Vec<_>>(),
            "unmatched": self.unmatched().into_iter().map(complex).collect::<Vec<_>>(),
        })
    }
}

fn complex(z: Complex64) -> Value {
    json!([Sig17(z.re).to_value(), Sig17(z.im).to_value()])
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub model: Model,
    pub j: usize,
    pub params: Value,
    pub space: FockSpace,
    pub tolerance: Tolerance,
    pub sectors: Vec<SectorSpectrum>,
    /// The sector values the audit is about; `primary` decides `passed`.
    pub primary: Containment,
    /// Further value sets reported against the same reference.
    pub secondary: Vec<Containment>,
    /// `(name, max over interior columns, Frobenius norm)` of embedding
    /// differences.
    pub embedding: Vec<(&'static str, f64, f64)>,
    pub notes: Vec<String>,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.primary.contained()
    }

    fn reference(&self) -> Vec<(usize, Complex64)> {
        self.sectors.iter().flat_map(|s| s.values.iter().map(move |&v| (s.excitation, v))).collect()
    }

    pub fn to_json(&self) -> Value {
        let reference = self.reference();
        json!({
            "model": self.model.label(),
            "j": self.j,
            "params": self.params,
            "cutoffs": [self.space.cutoff1, self.space.cutoff2],
            "tolerance": self.tolerance,
            "passed": self.passed(),
            "full_sectors": self.sectors.iter().map(|s| json!({
                "excitation": s.excitation,
                "eigenvalues": s.values.iter().copied().map(complex).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "reduced": self.primary.to_json(&reference),
            "additional": self.secondary.iter().map(|c| c.to_json(&reference)).collect::<Vec<_>>(),
            "embedding": self.embedding.iter().map(|(name, max, frob)| json!({
                "subject": name,
                "max_abs_interior": Sig17(*max).to_value(),
                "frobenius": Sig17(*frob).to_value(),
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

fn flatten(sectors: &[SectorSpectrum]) -> Vec<Complex64> {
    sectors.iter().flat_map(|s| s.values.iter().copied()).collect()
}

fn check_space(j: usize, space: FockSpace) -> Result<()> {
    if j == 0 {
        return Err(Error::InvalidArgument("sector label j must be at least 1".into()));
    }
    if space.cutoff1 < j + 1 {
        return Err(Error::InvalidArgument(format!("cutoff {} cannot hold sector j = {j}", space.cutoff1)));
    }
    Ok(())
}

/// The reduced sector against the Kerr Hamiltonian with `a = a1`, restricted
/// to the spectator slice `n2 = 0` and split by `a^+ a + sigma_+ sigma_-`.
pub fn compare_jck(j: usize, p: &JCKerrParams, space: FockSpace, tol: Tolerance) -> Result<CompareReport> {
    check_space(j, space)?;
    let full = build_jck_full(space, p)?;
    let sectors = sector_spectra(&full, space, |st| (st.n2 == 0).then_some(st.n1 + st.s as usize), space.cutoff1)?;
    let reference = flatten(&sectors);
    let reduced = eigen_dense(&build_jck_reduced(j, p)?.op)?.eigenvalues;
    let primary = Containment::new("sector operator, upper 0..=j, lower 0..=j-1", reduced, &reference, tol);

    let mut secondary = Vec::new();
    if let Some(printed) = jck_printed_values(j, p) {
        secondary.push(Containment::new("listed closed-form values", real_values(&printed), &reference, tol));
    }
    let invariant = build_jck_reduced_on(SpinorBasis::new(j, j - 1, j), p)?;
    secondary.push(Containment::new(
        "sector operator, upper 0..=j-1, lower 0..=j",
        eigen_dense(&invariant.op)?.eigenvalues,
        &reference,
        tol,
    ));
    let form = build_jck_algebraic(space, p, RealizationKind::FermA)?;
    let mut notes = vec!["mode 2 is a spectator; sectors use the n2 = 0 slice".to_string()];
    let dropped = build_jck_reduced(j, p)?.dropped;
    if !dropped.is_empty() {
        notes.push(format!("{} sector images left the basis and were dropped", dropped.len()));
    }
    if space.cutoff2 >= j {
        let algebraic = sector_spectra(&form.hamiltonian, space, |st| {
            (st.n1 + st.n2 + st.s as usize == j).then_some(0)
        }, 0)?;
        secondary.push(Containment::new(
            "generator-form block n1 + n2 + occupation = j",
            flatten(&algebraic),
            &reference,
            tol,
        ));
    }
    Ok(CompareReport {
        model: Model::Jck,
        j,
        params: p.to_json(),
        space,
        tolerance: tol,
        sectors,
        primary,
        secondary,
        embedding: vec![("physical minus generator form", form.interior_norm(), form.frobenius_norm())],
        notes,
    })
}

/// Closed-form branches against the two-mode Hamiltonian split by
/// `a1^+ a1 + a2^+ a2 + sigma_+ sigma_-`.
pub fn compare_mjc(j: usize, p: &MJCParams, space: FockSpace, tol: Tolerance) -> Result<CompareReport> {
    check_space(j, space)?;
    let full = build_mjc_full(space, p)?;
    let complete = space.cutoff1.min(space.cutoff2);
    let sectors = sector_spectra(&full, space, |st| Some(st.n1 + st.n2 + st.s as usize), complete)?;
    let reference = flatten(&sectors);
    let (closed, forms) = mjc_closed_form_spectrum(j, p)?;
    let primary = Containment::new("substituted closed-form branches", closed.eigenvalues, &reference, tol);
    let secondary = vec![Containment::new(
        "listed closed-form values",
        printed_mjc_spectrum(j, p, &forms),
        &reference,
        tol,
    )];
    let form = build_mjc_algebraic(space, p)?;
    Ok(CompareReport {
        model: Model::Mjc,
        j,
        params: p.to_json(),
        space,
        tolerance: tol,
        sectors,
        primary,
        secondary,
        embedding: vec![("physical minus generator form", form.interior_norm(), form.frobenius_norm())],
        notes: closed.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_couplings_are_contained() {
        let space = FockSpace::new(6, 6);
        let zero = JCKerrParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(compare_jck(2, &zero, space, Tolerance::MATCHING).unwrap().passed());
    }

    #[test]
    fn report_is_deterministic() {
        let space = FockSpace::new(6, 6);
        let p = MJCParams::new(1.0, 1.0, 0.3, 0.4).unwrap();
        let a = compare_mjc(2, &p, space, Tolerance::MATCHING).unwrap().to_json();
        let b = compare_mjc(2, &p, space, Tolerance::MATCHING).unwrap().to_json();
        assert_eq!(a, b);
    }
}
