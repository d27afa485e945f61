use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    check_grading, verify_qpm_closure, verify_relations, AlgebraReport, Gen, GeneratorExprs, GeneratorSet, Origin,
    RelationResult,
};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fock::FockSpace;
use crate::spinor::SpinorBasis;

use super::{MetricKind, TransformTag};

fn half(e: Expr) -> Expr {
    e.scale(Rational64::new(1, 2))
}

/// Transformed generators derived by conjugating the source realization,
/// with `a2^+ a2` still an operator. The fixed-`j` one-variable forms follow
/// by [`Expr::to_spinor_op`].
pub fn transformed_exprs(tag: TransformTag) -> GeneratorExprs {
    let (rho, rho_bar) = tag.source_realization().fermions();
    let sign = Expr::int(tag.sign.value());
    let signed_occ = sign * Expr::occupation();
    let (n1, n2) = (Expr::n1, Expr::n2);
    match tag.metric {
        MetricKind::S => {
            let lowering = n2() - n1() - signed_occ.clone();
            let n = n2() - signed_occ.clone();
            GeneratorExprs {
                jp: Expr::a1_dag() * lowering.clone(),
                jm: Expr::a1(),
                j0: half(n1().scale(2.into()) - n2() + signed_occ),
                j: half(n.clone()) + rho.clone() * rho_bar.clone(),
                vp: rho.clone() * lowering,
                vm: -(rho * Expr::a1()),
                wp: rho_bar.clone() * Expr::a1_dag(),
                wm: rho_bar,
                n,
            }
        }
        MetricKind::T => {
            let n = n2() + signed_occ.clone();
            GeneratorExprs {
                jp: Expr::a1_dag(),
                jm: (n2() - n1() + signed_occ.clone()) * Expr::a1(),
                j0: half(n1().scale(2.into()) - n2() - signed_occ.clone()),
                j: half(n.clone()) + rho.clone() * rho_bar.clone(),
                vp: rho.clone(),
                vm: -(rho * Expr::a1()),
                wp: rho_bar.clone() * Expr::a1_dag(),
                wm: rho_bar * (n2() + Expr::one() - n1() + signed_occ),
                n,
            }
        }
    }
}

/// The generator forms as tabulated in the original derivation, kept for
/// the audit in [`audit_printed_forms`]. `N'` is not tabulated there, so the
/// derived one is used.
pub fn printed_exprs(tag: TransformTag) -> GeneratorExprs {
    let (a1, a1d, n1, n2, occ) = (Expr::a1, Expr::a1_dag, Expr::n1, Expr::n2, Expr::occupation);
    let (sp, sm) = (Expr::sigma_plus, Expr::sigma_minus);
    let n = transformed_exprs(tag).n;
    // J+-,0 shared by the two S forms and by the two T forms.
    let s_even = (
        -(a1d() * a1d() * a1()) + a1d() * (n2() - occ()),
        a1(),
        half(n1().scale(2.into()) - n2() + occ()),
    );
    let t_even = (
        a1d(),
        a1d() * a1() * a1() + (n2() + occ()),
        half(n1().scale(2.into()) - n2() - occ()),
    );
    let ((jp, jm, j0), j, vp, vm, wp, wm) = match (tag.metric, tag.sign.value()) {
        (MetricKind::S, 1) => (
            s_even,
            half(n2() + occ()),
            sp() * (n2() - n1() - occ()),
            -(sp() * a1()),
            sm() * a1d(),
            sm(),
        ),
        (MetricKind::S, _) => (
            s_even,
            half(n2() + Expr::one() + Expr::vacancy()),
            -(sm() * (n1() - n2() - Expr::one())),
            -(sm() * a1()),
            sp() * a1d(),
            sp(),
        ),
        (MetricKind::T, 1) => (
            t_even,
            half(n2() + Expr::one() + Expr::vacancy()),
            sm(),
            -(sm() * a1()),
            sp() * a1d(),
            sp() * (n2() - n1() + Expr::one() + occ()),
        ),
        (MetricKind::T, _) => (
            t_even,
            half(n2() - occ()),
            sp(),
            -(sp() * a1()),
            sm() * a1d(),
            sm() * (n2() - n1() + Expr::one() - occ()),
        ),
    };
    GeneratorExprs { jp, jm, j0, j, vp, vm, wp, wm, n }
}

/// How the truncated matrices relate to the infinite polynomial space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    /// Every generator maps the basis into itself.
    Subspace,
    /// The higher monomials form an invariant complement; the truncated
    /// matrices are an exact quotient representation.
    Quotient,
    /// Neither; the truncation is a compression.
    Compression,
}

/// Degree ranges on which the fixed-`j` generators of `tag` act.
pub fn spinor_basis(tag: TransformTag, j: usize) -> Result<SpinorBasis> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be at least 1".into()));
    }
    // The upper component carries the fermion; its degree bound shifts by the
    // metric's fermion exponent.
    let upper = match (tag.metric, tag.sign.value()) {
        (MetricKind::S, 1) | (MetricKind::T, -1) => j - 1,
        _ => j + 1,
    };
    Ok(SpinorBasis::new(j, upper, j))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformedSet {
    pub tag: TransformTag,
    pub basis: SpinorBasis,
    pub generators: GeneratorSet<Rational64>,
    pub kind: BasisKind,
    /// Matrix entries that fell outside the basis, over all generators.
    pub dropped_terms: usize,
}

impl TransformedSet {
    /// Generator matrices in the operator JSON format under a common header.
    pub fn to_json(&self) -> Value {
        let generators: serde_json::Map<String, Value> = Gen::ALL
            .iter()
            .map(|g| (g.label().to_string(), self.generators.get(*g).to_json()))
            .collect();
        json!({
            "tag": self.tag.label(),
            "j": self.basis.j,
            "basis_family": self.basis.family().label(),
            "upper_max": self.basis.upper_max,
            "lower_max": self.basis.lower_max,
            "basis_kind": self.kind,
            "generators": generators,
        })
    }
}

fn build_from_exprs(exprs: &GeneratorExprs, tag: TransformTag, basis: SpinorBasis) -> Result<TransformedSet> {
    let mut subspace = true;
    let mut quotient = true;
    let mut dropped_terms = 0;
    for gen in Gen::ALL {
        let op = exprs.get(gen).to_spinor_op(basis.j as i64)?;
        let (_, dropped) = op.to_matrix(&basis);
        dropped_terms += dropped.len();
        subspace &= dropped.is_empty();
        quotient &= op.preserves_complement(&basis);
    }
    let kind = if subspace {
        BasisKind::Subspace
    } else if quotient {
        BasisKind::Quotient
    } else {
        BasisKind::Compression
    };
    let generators = exprs.try_map(Origin::Transform(tag), |e| Ok(e.to_spinor_op(basis.j as i64)?.to_matrix(&basis).0))?;
    Ok(TransformedSet { tag, basis, generators, kind, dropped_terms })
}

/// Exact rational matrices of the fixed-`j` transformed generators.
pub fn build_transformed_generators(j: usize, tag: TransformTag) -> Result<TransformedSet> {
    build_from_exprs(&transformed_exprs(tag), tag, spinor_basis(tag, j)?)
}

/// Structure table, `Q+-` closure and grading in exact arithmetic, plus the
/// structural basis check. Every gating residual must be exactly zero.
pub fn verify_transformed_algebra(j: usize, tag: TransformTag) -> Result<AlgebraReport> {
    let set = build_transformed_generators(j, tag)?;
    let mut report = AlgebraReport::new(tag.label(), 0.0);
    report.j = Some(j);
    report.relations = verify_relations(&set.generators, None, 0.0)?;
    report.relations.extend(verify_qpm_closure(&set.generators, None, 0.0)?.relations);
    report.relations.extend(check_grading(&set.generators));
    let expected = match tag.metric {
        MetricKind::S => BasisKind::Subspace,
        MetricKind::T => BasisKind::Quotient,
    };
    report.relations.push(RelationResult::new(
        format!("basis {}", serde_json::to_value(expected)?.as_str().unwrap_or("")),
        if set.kind == expected { 0.0 } else { 1.0 },
        0.0,
    ));
    report.notes.push(format!(
        "basis upper 0..={} lower 0..={} ({}), {:?}, {} dropped terms",
        set.basis.upper_max,
        set.basis.lower_max,
        set.basis.family().label(),
        set.kind,
        set.dropped_terms
    ));
    Ok(report)
}

/// Compares the tabulated forms against the derived ones at fixed `j`.
/// All entries are informational: a failing entry records a discrepancy in
/// the tabulated form.
pub fn audit_printed_forms(j: usize, tag: TransformTag) -> Result<AlgebraReport> {
    let basis = spinor_basis(tag, j)?;
    let printed = build_from_exprs(&printed_exprs(tag), tag, basis)?;
    let derived = build_transformed_generators(j, tag)?;
    let mut report = AlgebraReport::new(format!("printed {tag}"), 0.0);
    report.j = Some(j);
    for gen in Gen::ALL {
        let diff = printed.generators.get(gen).try_sub(derived.generators.get(gen))?;
        report
            .relations
            .push(RelationResult::new(format!("printed {g}' = derived {g}'", g = gen.label()), diff.max_abs(), 0.0).informational());
    }
    for r in verify_relations(&printed.generators, None, 0.0)? {
        report.relations.push(RelationResult { relation_id: format!("printed {}", r.relation_id), ..r }.informational());
    }
    report.notes.push(format!("printed forms give a {:?} basis", printed.kind));
    Ok(report)
}

/// The `j`-unfixed transformed generators as truncated Fock matrices,
/// checked against the structure table on interior states.
pub fn verify_unfixed_on_fock(space: FockSpace, tag: TransformTag, margin: usize, tolerance: f64) -> Result<AlgebraReport> {
    let g = transformed_exprs(tag).try_map(Origin::Transform(tag), |e| e.to_fock(space))?;
    let cols = space.interior(margin);
    let mut report = AlgebraReport::new(format!("unfixed {tag}"), tolerance);
    report.cutoffs = Some((space.cutoff1, space.cutoff2));
    report.margin = Some(margin);
    report.relations = verify_relations(&g, Some(&cols), tolerance)?;
    report.relations.extend(check_grading(&g));
    Ok(report)
}
