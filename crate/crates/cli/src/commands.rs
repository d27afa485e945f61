//! The four subcommands. Each produces an [`Outcome`]; rendering and exit
//! codes live in `main`.

use serde_json::{json, Value};

use osp21_core::algebra::{build_generators, verify_algebra, verify_qpm_closure, AlgebraReport, RealizationKind};
use osp21_core::eigen::{Provenance, Tolerance};
use osp21_core::fock::FockSpace;
use osp21_core::gamma::{gamma_one_vs_matrix_power, gamma_two_report};
use osp21_core::json::format_sig17;
use osp21_core::spectra::{
    compare_jck, compare_mjc, jck_spectrum_report, mjc_spectrum_report, JCKerrParams, MJCParams, Model,
};
use osp21_core::transform::{audit_printed_forms, verify_intertwining, verify_transformed_algebra, TransformTag};

use crate::config::{Method, Settings};
use crate::CliError;

pub struct Outcome {
    /// File stem used under the default output directory.
    pub name: String,
    pub body: Value,
    /// Header row first.
    pub rows: Vec<Vec<String>>,
    pub passed: bool,
    pub summary: String,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn failure(e: osp21_core::Error) -> CliError {
    CliError::Failure(e.to_string())
}

fn sector_label(s: &Settings, default: usize) -> Result<usize, CliError> {
    match s.j.unwrap_or(default) {
        0 => Err(usage("j must be at least 1")),
        j => Ok(j),
    }
}

fn report_rows(reports: &[AlgebraReport]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["subject".into(), "relation".into(), "residual".into(), "passed".into(), "gating".into()]];
    for r in reports {
        for rel in &r.relations {
            rows.push(vec![
                r.subject.clone(),
                rel.relation_id.clone(),
                format_sig17(rel.residual),
                rel.passed.to_string(),
                rel.gating.to_string(),
            ]);
        }
    }
    rows
}

pub fn verify(s: &Settings) -> Result<Outcome, CliError> {
    let j = sector_label(s, 4)?;
    let margin = s.margin.unwrap_or(1);
    let (c1, c2) = s.cutoffs.unwrap_or((12, 12));
    if c1.min(c2) < margin + 2 {
        return Err(usage(format!("cutoffs ({c1}, {c2}) leave no interior states at margin {margin}")));
    }
    let tol = s.tolerance(1e-10)?;
    let mut realizations: Vec<RealizationKind> =
        s.realizations.iter().map(|r| r.parse().map_err(|e: osp21_core::Error| usage(e.to_string()))).collect::<Result<_, _>>()?;
    let mut tags: Vec<TransformTag> =
        s.tags.iter().map(|t| t.parse().map_err(|e: osp21_core::Error| usage(e.to_string()))).collect::<Result<_, _>>()?;
    if realizations.is_empty() && tags.is_empty() {
        realizations = RealizationKind::ALL.to_vec();
        tags = TransformTag::ALL.to_vec();
    }
    let space = FockSpace::new(c1, c2);
    let mut reports = Vec::new();
    for kind in &realizations {
        let g = build_generators(space, *kind).map_err(failure)?;
        reports.push(verify_algebra(&g, margin, tol).map_err(failure)?);
        let mut q = verify_qpm_closure(&g, Some(&space.interior(margin)), tol).map_err(failure)?;
        q.subject = format!("{} Q closure", kind.label());
        reports.push(q);
    }
    for tag in &tags {
        reports.push(verify_transformed_algebra(j, *tag).map_err(failure)?);
        reports.push(audit_printed_forms(j, *tag).map_err(failure)?);
        reports.push(verify_intertwining(space, *tag, tol));
    }
    let passed = reports.iter().all(AlgebraReport::passed);
    let failing: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.subject.clone()).collect();
    Ok(Outcome {
        name: "verify-algebra".into(),
        body: json!({
            "passed": passed,
            "reports": reports.iter().map(AlgebraReport::to_json).collect::<Vec<_>>(),
        }),
        rows: report_rows(&reports),
        passed,
        summary: if passed {
            format!("verify-algebra: {} reports passed", reports.len())
        } else {
            format!("verify-algebra: failing {}", failing.join(", "))
        },
    })
}

fn jck_params(s: &Settings) -> Result<JCKerrParams, CliError> {
    JCKerrParams::new(s.omega.unwrap_or(1.0), s.omega0.unwrap_or(0.5), s.kappa.unwrap_or(0.2), s.lambda.unwrap_or(0.1))
        .map_err(|e| usage(e.to_string()))
}

fn mjc_params(s: &Settings) -> Result<MJCParams, CliError> {
    MJCParams::new(s.omega.unwrap_or(1.0), s.omega0.unwrap_or(1.0), s.l1.unwrap_or(0.3), s.l2.unwrap_or(0.4))
        .map_err(|e| usage(e.to_string()))
}

pub fn spectrum(model: Model, s: &Settings) -> Result<Outcome, CliError> {
    let j = sector_label(s, 1)?;
    let tol = Tolerance::Relative { rel: s.tolerance(1e-9)? };
    let report = match model {
        Model::Jck => {
            let method = match s.method.unwrap_or(Method::Recurrence) {
                Method::Recurrence => Provenance::Recurrence,
                Method::Dense => Provenance::Dense,
                Method::ClosedForm => return Err(usage("jck spectra use --method recurrence or dense")),
            };
            jck_spectrum_report(j, &jck_params(s)?, method, tol).map_err(failure)?
        }
        Model::Mjc => {
            let p = mjc_params(s)?;
            let method = match s.method.unwrap_or(Method::ClosedForm) {
                Method::ClosedForm if p.lambda1 == 0.0 && p.lambda2 == 0.0 => {
                    return Err(usage("closed form needs l1 or l2 nonzero"))
                }
                Method::ClosedForm => Provenance::ClosedForm,
                Method::Dense => Provenance::Dense,
                Method::Recurrence => return Err(usage("mjc spectra use --method closed-form or dense")),
            };
            mjc_spectrum_report(j, &p, method, tol).map_err(failure)?
        }
    };
    let mut rows = vec![vec!["index".into(), "re".into(), "im".into(), "residual".into()]];
    for (i, z) in report.spectrum.eigenvalues.iter().enumerate() {
        rows.push(vec![
            i.to_string(),
            format_sig17(z.re),
            format_sig17(z.im),
            report.spectrum.residuals.get(i).map(|r| format_sig17(*r)).unwrap_or_default(),
        ]);
    }
    let warnings = report.spectrum.warnings.len();
    Ok(Outcome {
        name: format!("spectrum-{}-j{j}", model.label()),
        summary: format!(
            "spectrum {}: {} eigenvalues ({}){}",
            model.label(),
            report.spectrum.eigenvalues.len(),
            report.spectrum.provenance.label(),
            if warnings > 0 { format!(", {warnings} warning(s)") } else { String::new() }
        ),
        body: report.to_json(),
        rows,
        passed: true,
    })
}

pub fn compare(model: Model, s: &Settings) -> Result<Outcome, CliError> {
    let j = sector_label(s, 1)?;
    let default_cutoff = 8.max(j + 4);
    let (c1, c2) = s.cutoffs.unwrap_or((default_cutoff, default_cutoff));
    if c1.min(c2) < j + 4 {
        return Err(usage(format!("compare needs cutoffs >= j + 4 = {}, got ({c1}, {c2})", j + 4)));
    }
    let t = s.tolerance(1e-8)?;
    let tol = Tolerance::Additive { abs: t, rel: t };
    let space = FockSpace::new(c1, c2);
    let report = match model {
        Model::Jck => compare_jck(j, &jck_params(s)?, space, tol),
        Model::Mjc => {
            let p = mjc_params(s)?;
            if p.lambda1 == 0.0 && p.lambda2 == 0.0 {
                return Err(usage("closed form needs l1 or l2 nonzero"));
            }
            compare_mjc(j, &p, space, tol)
        }
    }
    .map_err(failure)?;
    let mut rows = vec![vec!["set".into(), "re".into(), "im".into(), "contained".into()]];
    for c in std::iter::once(&report.primary).chain(&report.secondary) {
        let unmatched = &c.matching.unmatched_left;
        for (i, z) in c.values.iter().enumerate() {
            rows.push(vec![c.name.into(), format_sig17(z.re), format_sig17(z.im), (!unmatched.contains(&i)).to_string()]);
        }
    }
    let missing = report.primary.matching.unmatched_left.len();
    Ok(Outcome {
        name: format!("compare-{}-j{j}", model.label()),
        summary: format!(
            "compare {}: {} of {} sector values found in the full spectrum",
            model.label(),
            report.primary.values.len() - missing,
            report.primary.values.len()
        ),
        body: report.to_json(),
        rows,
        passed: report.passed(),
    })
}

pub fn gamma(s: &Settings) -> Result<Outcome, CliError> {
    let max_total = s.max_total.unwrap_or(10);
    let tol = s.tolerance(1e-12)?;
    let gamma_one = gamma_one_vs_matrix_power(max_total);
    let two = gamma_two_report(max_total, tol);
    let mut rows = vec![vec![
        "n1".into(),
        "n2".into(),
        "image_n2".into(),
        "tabulated".into(),
        "matrix_power".into(),
        "matches".into(),
    ]];
    for r in &two.rows {
        rows.push(vec![
            r.state.n1.to_string(),
            r.state.n2.to_string(),
            r.image.n2.to_string(),
            format_sig17(r.tabulated),
            format_sig17(r.matrix_power),
            r.matches(tol).to_string(),
        ]);
    }
    let passed = gamma_one <= tol;
    Ok(Outcome {
        name: "gamma".into(),
        summary: format!(
            "gamma: gamma1 max deviation {}, gamma2 {} of {} rows agree",
            format_sig17(gamma_one),
            two.matching_rows(),
            two.rows.len()
        ),
        body: json!({
            "max_total": max_total,
            "gamma1": {"max_abs_difference": osp21_core::json::Sig17(gamma_one).to_value(), "passed": passed},
            "gamma2": two.to_json(),
        }),
        rows,
        passed,
    })
}
