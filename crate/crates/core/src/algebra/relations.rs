use crate::error::Result;
use crate::fock::{make_boson, make_fermion, FermionOp, FockSpace, Ladder, Mode};
use crate::operator::{anticommutator, commutator, Domain, Operator};
use crate::scalar::Scalar;
use crate::spinor::Component;

use super::{build_generators, AlgebraReport, Gen, GeneratorSet, RealizationKind, RelationResult};

/// One structure relation: `[left, right]` (or `{left, right}`) equals
/// `sum num/den * generator`.
#[derive(Clone, Copy, Debug)]
pub struct RelationSpec {
    pub id: &'static str,
    pub anti: bool,
    pub left: Gen,
    pub right: Gen,
    pub rhs: &'static [(i64, i64, Gen)],
}

const fn comm(id: &'static str, left: Gen, right: Gen, rhs: &'static [(i64, i64, Gen)]) -> RelationSpec {
    RelationSpec { id, anti: false, left, right, rhs }
}

const fn anti(id: &'static str, left: Gen, right: Gen, rhs: &'static [(i64, i64, Gen)]) -> RelationSpec {
    RelationSpec { id, anti: true, left, right, rhs }
}

use Gen::*;

/// The osp(2,1) table, less `{V+-, W+-}` which only defines `Q+-` (see
/// [`verify_qpm_closure`]), plus the centrality of `N` in su(2).
pub const RELATION_TABLE: &[RelationSpec] = &[
    comm("[J+,J-]=2J0", Jp, Jm, &[(2, 1, J0)]),
    comm("[J0,J+]=J+", J0, Jp, &[(1, 1, Jp)]),
    comm("[J0,J-]=-J-", J0, Jm, &[(-1, 1, Jm)]),
    comm("[J,J+]=0", J, Jp, &[]),
    comm("[J,J-]=0", J, Jm, &[]),
    comm("[J,J0]=0", J, J0, &[]),
    comm("[J0,V+]=V+/2", J0, Vp, &[(1, 2, Vp)]),
    comm("[J0,V-]=-V-/2", J0, Vm, &[(-1, 2, Vm)]),
    comm("[J0,W+]=W+/2", J0, Wp, &[(1, 2, Wp)]),
    comm("[J0,W-]=-W-/2", J0, Wm, &[(-1, 2, Wm)]),
    comm("[J,V+]=V+/2", J, Vp, &[(1, 2, Vp)]),
    comm("[J,V-]=V-/2", J, Vm, &[(1, 2, Vm)]),
    comm("[J+,V-]=V+", Jp, Vm, &[(1, 1, Vp)]),
    comm("[J-,V+]=V-", Jm, Vp, &[(1, 1, Vm)]),
    comm("[J+,W-]=W+", Jp, Wm, &[(1, 1, Wp)]),
    comm("[J-,W+]=W-", Jm, Wp, &[(1, 1, Wm)]),
    comm("[J,W+]=-W+/2", J, Wp, &[(-1, 2, Wp)]),
    comm("[J,W-]=-W-/2", J, Wm, &[(-1, 2, Wm)]),
    comm("[J+,V+]=0", Jp, Vp, &[]),
    comm("[J-,V-]=0", Jm, Vm, &[]),
    comm("[J+,W+]=0", Jp, Wp, &[]),
    comm("[J-,W-]=0", Jm, Wm, &[]),
    anti("{V+,W-}=-J0+J", Vp, Wm, &[(-1, 1, J0), (1, 1, J)]),
    anti("{V-,W+}=-J0-J", Vm, Wp, &[(-1, 1, J0), (-1, 1, J)]),
    anti("{V+,V+}=0", Vp, Vp, &[]),
    anti("{V-,V-}=0", Vm, Vm, &[]),
    anti("{V+,V-}=0", Vp, Vm, &[]),
    anti("{W+,W+}=0", Wp, Wp, &[]),
    anti("{W-,W-}=0", Wm, Wm, &[]),
    anti("{W+,W-}=0", Wp, Wm, &[]),
    comm("[N,J+]=0", N, Jp, &[]),
    comm("[N,J-]=0", N, Jm, &[]),
    comm("[N,J0]=0", N, J0, &[]),
];

fn residual<T: Scalar>(diff: &Operator<T>, cols: Option<&[usize]>) -> f64 {
    match cols {
        Some(c) => diff.max_abs_on_columns(c),
        None => diff.max_abs(),
    }
}

fn combination<T: Scalar>(g: &GeneratorSet<T>, rhs: &[(i64, i64, Gen)]) -> Result<Operator<T>> {
    let mut total = Operator::zeros(g.jp.domain());
    for &(num, den, gen) in rhs {
        total = total.try_add(&g.get(gen).scale_ratio(num, den))?;
    }
    Ok(total)
}

/// Evaluates [`RELATION_TABLE`] on `g`. `cols = None` checks every column.
pub fn verify_relations<T: Scalar>(
    g: &GeneratorSet<T>,
    cols: Option<&[usize]>,
    tolerance: f64,
) -> Result<Vec<RelationResult>> {
    RELATION_TABLE
        .iter()
        .map(|spec| {
            let (x, y) = (g.get(spec.left), g.get(spec.right));
            let lhs = if spec.anti { anticommutator(x, y)? } else { commutator(x, y)? };
            let diff = lhs.try_sub(&combination(g, spec.rhs)?)?;
            Ok(RelationResult::new(spec.id, residual(&diff, cols), tolerance))
        })
        .collect()
}

fn fermion_parity(domain: &Domain, index: usize) -> Option<u8> {
    match domain {
        Domain::Fock(space) => Some(space.state(index).s),
        Domain::Spinor(basis) => Some(match basis.monomial(index).0 {
            Component::Upper => 1,
            Component::Lower => 0,
        }),
        Domain::Plain { .. } => None,
    }
}

/// Even generators preserve fermion occupation, odd ones flip it. The
/// residual is the largest entry that violates the grading.
pub fn check_grading<T: Scalar>(g: &GeneratorSet<T>) -> Vec<RelationResult> {
    Gen::ALL
        .iter()
        .map(|&gen| {
            let op = g.get(gen);
            let domain = op.domain();
            let worst = op
                .triplets()
                .filter(|(r, c, _)| {
                    let flips = fermion_parity(&domain, *r) != fermion_parity(&domain, *c);
                    flips != gen.is_odd()
                })
                .fold(0.0f64, |m, (_, _, v)| m.max(v.magnitude()));
            let kind = if gen.is_odd() { "odd" } else { "even" };
            RelationResult::new(format!("grading({} {kind})", gen.label()), worst, 0.0)
        })
        .collect()
}

/// Boson commutators and fermion anticommutators on the Fock space.
pub fn verify_canonical_relations(space: FockSpace, cols: &[usize], tolerance: f64) -> Result<Vec<RelationResult>> {
    let a1 = make_boson(space, Mode::One, Ladder::Annihilate);
    let a1d = make_boson(space, Mode::One, Ladder::Create);
    let a2 = make_boson(space, Mode::Two, Ladder::Annihilate);
    let a2d = make_boson(space, Mode::Two, Ladder::Create);
    let f = make_fermion(space, FermionOp::SigmaMinus);
    let fd = make_fermion(space, FermionOp::SigmaPlus);
    let id = Operator::identity(Domain::Fock(space));
    let zero = Operator::zeros(Domain::Fock(space));
    let cases = [
        ("[a1,a1+]=1", commutator(&a1, &a1d)?, &id),
        ("[a2,a2+]=1", commutator(&a2, &a2d)?, &id),
        ("[a1,a2]=0", commutator(&a1, &a2)?, &zero),
        ("[a1,a2+]=0", commutator(&a1, &a2d)?, &zero),
        ("[a2,a1+]=0", commutator(&a2, &a1d)?, &zero),
        ("{f,f+}=1", anticommutator(&f, &fd)?, &id),
        ("f^2=0", f.try_mul(&f)?, &zero),
        ("(f+)^2=0", fd.try_mul(&fd)?, &zero),
    ];
    cases
        .into_iter()
        .map(|(id, lhs, rhs)| Ok(RelationResult::new(id, lhs.try_sub(rhs)?.max_abs_on_columns(cols), tolerance)))
        .collect()
}

/// Full Fock-space report: structure table, canonical relations and grading,
/// all restricted to states at least `margin` below both cutoffs.
pub fn verify_algebra(g: &GeneratorSet<f64>, margin: usize, tolerance: f64) -> Result<AlgebraReport> {
    let Domain::Fock(space) = g.jp.domain() else {
        return Err(crate::error::Error::InvalidArgument("verify_algebra needs Fock-space generators".into()));
    };
    let cols = space.interior(margin);
    let mut report = AlgebraReport::new(g.origin.to_string(), tolerance);
    report.cutoffs = Some((space.cutoff1, space.cutoff2));
    report.margin = Some(margin);
    report.relations = verify_relations(g, Some(&cols), tolerance)?;
    report.relations.extend(verify_canonical_relations(space, &cols, tolerance)?);
    report.relations.extend(check_grading(g));
    Ok(report)
}

/// `Q+ = {V+, W+}` and `Q- = -{V-, W-}`.
pub fn q_operators<T: Scalar>(g: &GeneratorSet<T>) -> Result<(Operator<T>, Operator<T>)> {
    let q_plus = anticommutator(&g.vp, &g.wp)?;
    let q_minus = -&anticommutator(&g.vm, &g.wm)?;
    Ok((q_plus, q_minus))
}

/// Closure of `Q+-` under the even part. The identification `Q+- = J+-` is
/// reported as informational entries.
pub fn verify_qpm_closure<T: Scalar>(
    g: &GeneratorSet<T>,
    cols: Option<&[usize]>,
    tolerance: f64,
) -> Result<AlgebraReport> {
    let (qp, qm) = q_operators(g)?;
    let mut report = AlgebraReport::new(g.origin.to_string(), tolerance);
    let zero = Operator::zeros(qp.domain());
    let two_j0 = g.j0.scale_ratio(2, 1);
    let cases = [
        ("[J0,Q+]=Q+", commutator(&g.j0, &qp)?, qp.clone()),
        ("[J0,Q-]=-Q-", commutator(&g.j0, &qm)?, -&qm),
        ("[J-,Q+]=-2J0", commutator(&g.jm, &qp)?, -&two_j0),
        ("[J+,Q-]=2J0", commutator(&g.jp, &qm)?, two_j0.clone()),
        ("[J+,Q+]=0", commutator(&g.jp, &qp)?, zero.clone()),
        ("[J-,Q-]=0", commutator(&g.jm, &qm)?, zero.clone()),
        ("[N,Q+]=0", commutator(&g.n, &qp)?, zero.clone()),
        ("[N,Q-]=0", commutator(&g.n, &qm)?, zero.clone()),
        ("[J,Q+]=0", commutator(&g.j, &qp)?, zero.clone()),
        ("[J,Q-]=0", commutator(&g.j, &qm)?, zero),
    ];
    for (id, lhs, rhs) in cases {
        report.relations.push(RelationResult::new(id, residual(&lhs.try_sub(&rhs)?, cols), tolerance));
    }
    report.relations.push(
        RelationResult::new("Q+=J+", residual(&qp.try_sub(&g.jp)?, cols), tolerance).informational(),
    );
    report.relations.push(
        RelationResult::new("Q-=J-", residual(&qm.try_sub(&g.jm)?, cols), tolerance).informational(),
    );
    Ok(report)
}

/// `J` of the second realization minus `J` of the first equals
/// `1 - 2 f^+ f` on the whole truncated space.
pub fn verify_number_operator_shift(space: FockSpace, tolerance: f64) -> Result<RelationResult> {
    let ja = build_generators(space, RealizationKind::FermA)?.j;
    let jb = build_generators(space, RealizationKind::FermB)?.j;
    let occupation = make_fermion(space, FermionOp::SigmaPlus).try_mul(&make_fermion(space, FermionOp::SigmaMinus))?;
    let expected = Operator::identity(Domain::Fock(space)).try_sub(&occupation.scale(2.0))?;
    let diff = jb.try_sub(&ja)?.try_sub(&expected)?;
    Ok(RelationResult::new("J(fermb)-J(ferma)=1-2f+f", diff.max_abs(), tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_realizations_close_on_interior() {
        let space = FockSpace::new(6, 6);
        for kind in RealizationKind::ALL {
            let g = build_generators(space, kind).unwrap();
            let report = verify_algebra(&g, 2, 1e-10).unwrap();
            assert!(report.passed(), "{kind}: {:?}", report.failures().collect::<Vec<_>>());
            assert_eq!(report.find("{V+,V+}=0").unwrap().residual, 0.0);
        }
    }

    #[test]
    fn vplus_minus_bracket_sign_as_tabulated() {
        // [J, V-] = +V-/2 for both realizations
        let space = FockSpace::new(5, 5);
        for kind in RealizationKind::ALL {
            let g = build_generators(space, kind).unwrap();
            let cols = space.interior(2);
            let results = verify_relations(&g, Some(&cols), 1e-12).unwrap();
            let r = results.iter().find(|r| r.relation_id == "[J,V-]=V-/2").unwrap();
            assert!(r.passed);
        }
    }

    #[test]
    fn truncation_shows_without_margin() {
        let space = FockSpace::new(4, 4);
        let g = build_generators(space, RealizationKind::FermA).unwrap();
        let report = verify_algebra(&g, 0, 1e-10).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn q_matches_raising_and_lowering() {
        let space = FockSpace::new(6, 6);
        let g = build_generators(space, RealizationKind::FermB).unwrap();
        let cols = space.interior(3);
        let report = verify_qpm_closure(&g, Some(&cols), 1e-10).unwrap();
        assert!(report.passed());
        assert!(report.find("Q+=J+").unwrap().passed);
        assert!(report.find("Q-=J-").unwrap().passed);
    }

    #[test]
    fn number_operator_shift_is_exact() {
        assert!(verify_number_operator_shift(FockSpace::new(3, 3), 1e-12).unwrap().passed);
    }
}
