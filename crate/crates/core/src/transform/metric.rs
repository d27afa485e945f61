use crate::algebra::{generator_exprs, AlgebraReport, Gen, RelationResult};
use crate::expr::{basis_vector, metric_image, Expr, LatticeFault, StateVec};
use crate::fock::FockSpace;
use crate::operator::{Domain, Operator};

use super::{transformed_exprs, MetricKind, Sign, TransformTag};

/// The metric as a truncated matrix, with the columns it cannot represent.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricMatrix {
    pub op: Operator<f64>,
    /// Columns where the exponent is negative.
    pub undefined: Vec<usize>,
    /// Columns whose image lies above the cutoff.
    pub overflow: Vec<usize>,
}

/// Block-diagonal state map: on each `(n1, s)` sector the metric is a power
/// of `a2^+` (for `S`) or `a2` (for `T`).
pub fn build_metric(space: FockSpace, tag: TransformTag) -> MetricMatrix {
    let mut op = Operator::zeros(Domain::Fock(space));
    let mut undefined = Vec::new();
    let mut overflow = Vec::new();
    for (col, st) in space.states().enumerate() {
        match metric_image(tag, &st) {
            None => undefined.push(col),
            Some(None) => {}
            Some(Some((to, amp))) => match space.index(&to) {
                Some(row) => op.insert(row, col, amp),
                None => overflow.push(col),
            },
        }
    }
    MetricMatrix { op, undefined, overflow }
}

/// A conjugation identity in multiplication-only form, `lhs = rhs` as state
/// maps.
#[derive(Clone, Debug, PartialEq)]
pub struct IntertwiningRelation {
    pub id: String,
    pub lhs: Expr,
    pub rhs: Expr,
    /// Printed variants that are expected to fail are not gating.
    pub gating: bool,
}

fn rel(id: impl Into<String>, lhs: Expr, rhs: Expr) -> IntertwiningRelation {
    IntertwiningRelation { id: id.into(), lhs, rhs, gating: true }
}

/// Elementary identities for the metric, then `M G = G' M` for all nine
/// generators of the matching realization.
pub fn intertwining_relations(tag: TransformTag) -> Vec<IntertwiningRelation> {
    let m = || Expr::metric(tag);
    let (a1, a1d, a2, a2d) = (Expr::a1, Expr::a1_dag, Expr::a2, Expr::a2_dag);
    let (sp, sm) = (Expr::sigma_plus, Expr::sigma_minus);
    let sign = Expr::int(tag.sign.value());
    let exponent_shift = |bosons: Expr| bosons + sign.clone() * Expr::occupation();
    let mut out = match tag.metric {
        MetricKind::S => {
            let n = exponent_shift(Expr::n1());
            let mut v = vec![
                rel("a2+ S a1 = a1 S", a2d() * m() * a1(), a1() * m()),
                rel("S a1+ = a1+ a2+ S", m() * a1d(), a1d() * a2d() * m()),
                rel("a2+ S a2 = (a2+ a2 - n) S", a2d() * m() * a2(), (Expr::n2() - n) * m()),
                rel("S a2+ = a2+ S", m() * a2d(), a2d() * m()),
            ];
            match tag.sign {
                Sign::Plus => {
                    v.push(rel("S s+ = s+ a2+ S", m() * sp(), sp() * a2d() * m()));
                    v.push(rel("a2+ S s- = s- S", a2d() * m() * sm(), sm() * m()));
                }
                Sign::Minus => {
                    v.push(rel("a2+ S s+ = s+ S", a2d() * m() * sp(), sp() * m()));
                    v.push(rel("S s- = s- a2+ S", m() * sm(), sm() * a2d() * m()));
                }
            }
            v
        }
        MetricKind::T => {
            let shift = exponent_shift(-Expr::n1());
            let mut v = vec![
                rel("T a1 = a1 a2 T", m() * a1(), a1() * a2() * m()),
                rel("a2 T a1+ = a1+ T", a2() * m() * a1d(), a1d() * m()),
                rel("T a2 = a2 T", m() * a2(), a2() * m()),
                rel("a2 T a2+ = (a2+ a2 + 1 + m) T", a2() * m() * a2d(), (Expr::n2() + Expr::one() + shift) * m()),
            ];
            match tag.sign {
                Sign::Plus => {
                    v.push(rel("T s+ = s+ a2 T", m() * sp(), sp() * a2() * m()));
                    v.push(rel("a2 T s- = s- T", a2() * m() * sm(), sm() * m()));
                }
                Sign::Minus => {
                    v.push(rel("a2 T s+ = s+ T", a2() * m() * sp(), sp() * m()));
                    v.push(rel("T s- = s- a2 T", m() * sm(), sm() * a2() * m()));
                }
            }
            // Printed variants with a2^+ in place of a2.
            let mut printed = vec![
                rel("printed: T a1 = a1 a2+ T", m() * a1(), a1() * a2d() * m()),
                rel("printed: a2+ T a1+ = a1+ T", a2d() * m() * a1d(), a1d() * m()),
            ];
            match tag.sign {
                Sign::Plus => printed.push(rel("printed: T s+ = s+ a2+ T", m() * sp(), sp() * a2d() * m())),
                Sign::Minus => printed.push(rel("printed: a2+ T s+ = s+ T", a2d() * m() * sp(), sp() * m())),
            }
            v.extend(printed.into_iter().map(|r| IntertwiningRelation { gating: false, ..r }));
            v
        }
    };
    let source = generator_exprs(tag.source_realization());
    let target = transformed_exprs(tag);
    // Conjugation by T hides one inverse of a2, so its generator identities
    // only hold after a left factor of a2.
    let (name, left, left_label) = match tag.metric {
        MetricKind::S => ("S", Expr::one(), ""),
        MetricKind::T => ("T", a2(), "a2 "),
    };
    for gen in Gen::ALL {
        out.push(rel(
            format!("{left_label}{name} {g} = {left_label}{g}' {name}", g = gen.label()),
            left.clone() * m() * source.get(gen).clone(),
            left.clone() * target.get(gen).clone() * m(),
        ));
    }
    out
}

fn max_entry(v: &StateVec) -> f64 {
    v.values().fold(0.0, |m, a| m.max(a.abs()))
}

/// Checks every relation of [`intertwining_relations`] on all basis states of
/// `space`, skipping columns where either side needs an undefined metric
/// power or leaves the truncation. The residual is
/// `max |lhs - rhs| / max(1, max |entry|)` over the checked columns.
pub fn verify_intertwining(space: FockSpace, tag: TransformTag, tolerance: f64) -> AlgebraReport {
    let mut report = AlgebraReport::new(format!("intertwining {tag}"), tolerance);
    report.cutoffs = Some((space.cutoff1, space.cutoff2));
    for relation in intertwining_relations(tag) {
        let (mut checked, mut undefined, mut overflow, mut nonzero) = (0usize, 0usize, 0usize, 0usize);
        let (mut diff_max, mut scale) = (0.0f64, 1.0f64);
        for st in space.states() {
            let v = basis_vector(st);
            let sides = relation
                .lhs
                .apply(&v, Some(space))
                .and_then(|l| relation.rhs.apply(&v, Some(space)).map(|r| (l, r)));
            match sides {
                Err(LatticeFault::Undefined) => undefined += 1,
                Err(LatticeFault::Overflow) => overflow += 1,
                Ok((l, r)) => {
                    checked += 1;
                    if !(l.is_empty() && r.is_empty()) {
                        nonzero += 1;
                    }
                    scale = scale.max(max_entry(&l)).max(max_entry(&r));
                    let mut d = l;
                    for (k, a) in r {
                        *d.entry(k).or_insert(0.0) -= a;
                    }
                    diff_max = diff_max.max(max_entry(&d));
                }
            }
        }
        let residual = if checked == 0 { f64::NAN } else { diff_max / scale };
        let mut result = RelationResult::new(relation.id.clone(), residual, tolerance);
        // A relation whose sides vanish on every checked column says nothing.
        if !relation.gating || nonzero == 0 {
            result = result.informational();
        }
        report.relations.push(result);
        report.notes.push(format!(
            "{}: checked {checked} ({nonzero} nonvanishing), undefined {undefined}, overflow {overflow}",
            relation.id
        ));
    }
    report
}
