//! Spectrum files: JSON with an audit block, and CSV with one row per
//! eigenvalue.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::eigen::{eigen_dense_with, match_multiset, real_values, EigenOptions, Provenance, Spectrum, Tolerance};
use crate::error::{Error, Result};
use crate::json::{format_sig17, Sig17};

use super::compare::Model;
use super::jck::{build_jck_reduced, jck_printed_values};
use super::mjc::{build_mjc_reduced, mjc_closed_form_spectrum, printed_mjc_spectrum};
use super::params::{JCKerrParams, MJCParams};
use super::recurrence::{jck_recurrence, recurrence_diff};

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub model: Model,
    pub j: usize,
    pub params: Value,
    pub spectrum: Spectrum,
    /// Closed-form values the computed spectrum is audited against.
    pub reference: Option<(&'static str, Vec<Complex64>)>,
    pub tolerance: Tolerance,
    pub recurrence_diff: Option<Value>,
}

fn complex(z: Complex64) -> Value {
    json!([Sig17(z.re).to_value(), Sig17(z.im).to_value()])
}

impl SpectrumReport {
    pub fn audit(&self) -> Value {
        let mut audit = json!({ "matched": [], "unmatched": [], "recurrence_diff": self.recurrence_diff });
        if let Some((name, values)) = &self.reference {
            let m = match_multiset(values, &self.spectrum.eigenvalues, self.tolerance);
            audit["reference"] = json!(name);
            audit["matched"] = m
                .pairs
                .iter()
                .map(|&(i, k, d)| json!({"reference": complex(values[i]), "eigenvalue": complex(self.spectrum.eigenvalues[k]), "distance": Sig17(d).to_value()}))
                .collect();
            audit["unmatched"] = m.unmatched_left.iter().map(|&i| complex(values[i])).collect();
            audit["extra"] = m.unmatched_right.iter().map(|&k| complex(self.spectrum.eigenvalues[k])).collect();
        }
        audit
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model.label(),
            "j": self.j,
            "params": self.params,
            "provenance": self.spectrum.provenance.label(),
            "eigenvalues": self.spectrum.eigenvalues.iter().copied().map(complex).collect::<Vec<_>>(),
            "residuals": self.spectrum.residuals.iter().map(|r| Sig17(*r).to_value()).collect::<Vec<_>>(),
            "warnings": self.spectrum.warnings,
            "audit": self.audit(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im,residual\n");
        for (i, z) in self.spectrum.eigenvalues.iter().enumerate() {
            let residual = self.spectrum.residuals.get(i).map(|r| format_sig17(*r)).unwrap_or_default();
            out.push_str(&format!("{i},{},{},{residual}\n", format_sig17(z.re), format_sig17(z.im)));
        }
        out
    }
}

fn dense(op: &crate::operator::Operator<f64>) -> Result<Spectrum> {
    eigen_dense_with(op, EigenOptions { eigenvectors: true, ..EigenOptions::default() })
}

pub fn jck_spectrum_report(j: usize, p: &JCKerrParams, method: Provenance, tol: Tolerance) -> Result<SpectrumReport> {
    p.validate()?;
    let spectrum = match method {
        Provenance::Recurrence => jck_recurrence(j, p)?,
        Provenance::Dense => dense(&build_jck_reduced(j, p)?.op)?,
        Provenance::ClosedForm => {
            return Err(Error::InvalidArgument("the Kerr model has closed forms only for j <= 2; use recurrence or dense".into()))
        }
    };
    Ok(SpectrumReport {
        model: Model::Jck,
        j,
        params: p.to_json(),
        spectrum,
        reference: jck_printed_values(j, p).map(|v| ("listed closed-form values", real_values(&v))),
        tolerance: tol,
        recurrence_diff: Some(recurrence_diff(j, p)?.to_json()),
    })
}

pub fn mjc_spectrum_report(j: usize, p: &MJCParams, method: Provenance, tol: Tolerance) -> Result<SpectrumReport> {
    p.validate()?;
    let (spectrum, reference) = match method {
        Provenance::Dense => {
            let spec = dense(&build_mjc_reduced(j, p)?.op)?;
            let reference = if p.lambda1 == 0.0 && p.lambda2 == 0.0 {
                None
            } else {
                let (_, forms) = mjc_closed_form_spectrum(j, p)?;
                Some(("listed closed-form values", printed_mjc_spectrum(j, p, &forms)))
            };
            (spec, reference)
        }
        Provenance::ClosedForm => {
            let (spec, forms) = mjc_closed_form_spectrum(j, p)?;
            (spec, Some(("listed closed-form values", printed_mjc_spectrum(j, p, &forms))))
        }
        Provenance::Recurrence => {
            return Err(Error::InvalidArgument("the two-mode model is solved by closed form or dense".into()))
        }
    };
    Ok(SpectrumReport {
        model: Model::Mjc,
        j,
        params: p.to_json(),
        spectrum,
        reference,
        tolerance: tol,
        recurrence_diff: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j1_report_matches_listed_values() {
        let p = JCKerrParams::new(1.0, 0.5, 0.2, 0.1).unwrap();
        let r = jck_spectrum_report(1, &p, Provenance::Recurrence, Tolerance::Relative { rel: 1e-9 }).unwrap();
        let audit = r.audit();
        assert_eq!(audit["unmatched"].as_array().unwrap().len(), 0);
        assert_eq!(audit["extra"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn csv_has_one_row_per_eigenvalue() {
        let p = MJCParams::new(1.0, 1.0, 0.3, 0.4).unwrap();
        let r = mjc_spectrum_report(3, &p, Provenance::ClosedForm, Tolerance::MATCHING).unwrap();
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 1 + 7);
        assert!(csv.lines().nth(1).unwrap().split(',').all(|f| !f.is_empty()));
    }

    #[test]
    fn closed_form_is_rejected_for_kerr() {
        let p = JCKerrParams::new(1.0, 0.5, 0.2, 0.1).unwrap();
        assert!(jck_spectrum_report(2, &p, Provenance::ClosedForm, Tolerance::MATCHING).is_err());
    }
}
