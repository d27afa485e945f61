//! The two boson-fermion realizations of osp(2,1) and the machine check of
//! their structure relations.

mod relations;
mod report;

pub use relations::{
    check_grading, verify_algebra, verify_canonical_relations, verify_number_operator_shift,
    verify_qpm_closure, verify_relations, RELATION_TABLE,
};
pub use report::{AlgebraReport, RelationResult};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fock::FockSpace;
use crate::operator::Operator;
use crate::scalar::Scalar;
use crate::transform::TransformTag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RealizationKind {
    /// Odd generators built on `f^+ a`, `f a^+`, with `J = N/2 + f^+ f`.
    FermA,
    /// Odd generators built on `f a`, `f^+ a^+`, with `J = N/2 + f f^+`.
    FermB,
}

impl RealizationKind {
    pub const ALL: [RealizationKind; 2] = [RealizationKind::FermA, RealizationKind::FermB];

    pub fn label(self) -> &'static str {
        match self {
            RealizationKind::FermA => "ferma",
            RealizationKind::FermB => "fermb",
        }
    }

    /// The fermion operator paired with annihilators in `V_+-`, and its
    /// partner in `W_+-`.
    pub(crate) fn fermions(self) -> (Expr, Expr) {
        match self {
            RealizationKind::FermA => (Expr::sigma_plus(), Expr::sigma_minus()),
            RealizationKind::FermB => (Expr::sigma_minus(), Expr::sigma_plus()),
        }
    }
}

impl fmt::Display for RealizationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RealizationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ferma" | "a" => Ok(RealizationKind::FermA),
            "fermb" | "b" => Ok(RealizationKind::FermB),
            _ => Err(Error::InvalidArgument(format!("unknown realization '{s}'"))),
        }
    }
}

/// What a generator set realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "label", rename_all = "lowercase")]
pub enum Origin {
    Realization(RealizationKind),
    Transform(TransformTag),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Realization(r) => write!(f, "{r}"),
            Origin::Transform(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Jp,
    Jm,
    J0,
    J,
    Vp,
    Vm,
    Wp,
    Wm,
    N,
}

impl Gen {
    pub const ALL: [Gen; 9] = [Gen::Jp, Gen::Jm, Gen::J0, Gen::J, Gen::Vp, Gen::Vm, Gen::Wp, Gen::Wm, Gen::N];

    pub fn is_odd(self) -> bool {
        matches!(self, Gen::Vp | Gen::Vm | Gen::Wp | Gen::Wm)
    }

    pub fn label(self) -> &'static str {
        match self {
            Gen::Jp => "J+",
            Gen::Jm => "J-",
            Gen::J0 => "J0",
            Gen::J => "J",
            Gen::Vp => "V+",
            Gen::Vm => "V-",
            Gen::Wp => "W+",
            Gen::Wm => "W-",
            Gen::N => "N",
        }
    }
}

/// The nine generators as expressions in the ladder operators.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorExprs {
    pub jp: Expr,
    pub jm: Expr,
    pub j0: Expr,
    pub j: Expr,
    pub vp: Expr,
    pub vm: Expr,
    pub wp: Expr,
    pub wm: Expr,
    pub n: Expr,
}

impl GeneratorExprs {
    pub fn get(&self, g: Gen) -> &Expr {
        match g {
            Gen::Jp => &self.jp,
            Gen::Jm => &self.jm,
            Gen::J0 => &self.j0,
            Gen::J => &self.j,
            Gen::Vp => &self.vp,
            Gen::Vm => &self.vm,
            Gen::Wp => &self.wp,
            Gen::Wm => &self.wm,
            Gen::N => &self.n,
        }
    }

    pub fn try_map<T: Scalar>(
        &self,
        origin: Origin,
        f: impl Fn(&Expr) -> Result<Operator<T>>,
    ) -> Result<GeneratorSet<T>> {
        Ok(GeneratorSet {
            origin,
            jp: f(&self.jp)?,
            jm: f(&self.jm)?,
            j0: f(&self.j0)?,
            j: f(&self.j)?,
            vp: f(&self.vp)?,
            vm: f(&self.vm)?,
            wp: f(&self.wp)?,
            wm: f(&self.wm)?,
            n: f(&self.n)?,
        })
    }
}

/// Schwinger su(2) generators, the odd extension and the total number
/// operator of the chosen realization.
pub fn generator_exprs(kind: RealizationKind) -> GeneratorExprs {
    let (rho, rho_bar) = kind.fermions();
    let n = Expr::n1() + Expr::n2();
    let half = |e: Expr| e.scale(num_rational::Rational64::new(1, 2));
    GeneratorExprs {
        jp: Expr::a1_dag() * Expr::a2(),
        jm: Expr::a2_dag() * Expr::a1(),
        j0: half(Expr::n1() - Expr::n2()),
        j: half(n.clone()) + rho.clone() * rho_bar.clone(),
        vp: rho.clone() * Expr::a2(),
        vm: -(rho * Expr::a1()),
        wp: rho_bar.clone() * Expr::a1_dag(),
        wm: rho_bar * Expr::a2_dag(),
        n,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet<T> {
    pub origin: Origin,
    pub jp: Operator<T>,
    pub jm: Operator<T>,
    pub j0: Operator<T>,
    pub j: Operator<T>,
    pub vp: Operator<T>,
    pub vm: Operator<T>,
    pub wp: Operator<T>,
    pub wm: Operator<T>,
    pub n: Operator<T>,
}

impl<T: Scalar> GeneratorSet<T> {
    pub fn get(&self, g: Gen) -> &Operator<T> {
        match g {
            Gen::Jp => &self.jp,
            Gen::Jm => &self.jm,
            Gen::J0 => &self.j0,
            Gen::J => &self.j,
            Gen::Vp => &self.vp,
            Gen::Vm => &self.vm,
            Gen::Wp => &self.wp,
            Gen::Wm => &self.wm,
            Gen::N => &self.n,
        }
    }
}

pub fn build_generators(space: FockSpace, kind: RealizationKind) -> Result<GeneratorSet<f64>> {
    if space.cutoff1 < 2 || space.cutoff2 < 2 {
        return Err(Error::InvalidArgument("generator cutoffs must be at least 2".into()));
    }
    generator_exprs(kind).try_map(Origin::Realization(kind), |e| e.to_fock(space))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockState;
    use crate::operator::commutator;

    #[test]
    fn ferma_vplus_moves_boson_into_fermion() {
        let space = FockSpace::new(3, 3);
        let g = build_generators(space, RealizationKind::FermA).unwrap();
        let from = space.index(&FockState::new(0, 1, 0)).unwrap();
        let to = space.index(&FockState::new(0, 0, 1)).unwrap();
        assert_eq!(g.vp.get(to, from), 1.0);
        assert_eq!(g.vp.column(from).len(), 1);
    }

    #[test]
    fn number_commutes_with_raising() {
        let space = FockSpace::new(5, 5);
        let g = build_generators(space, RealizationKind::FermA).unwrap();
        assert!(commutator(&g.n, &g.jp).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn fermb_wplus_raises_mode_one_and_fermion() {
        let space = FockSpace::new(3, 3);
        let g = build_generators(space, RealizationKind::FermB).unwrap();
        let from = space.index(&FockState::new(1, 2, 0)).unwrap();
        let to = space.index(&FockState::new(2, 2, 1)).unwrap();
        assert!((g.wp.get(to, from) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn small_cutoffs_rejected() {
        assert!(build_generators(FockSpace::new(1, 4), RealizationKind::FermA).is_err());
    }
}
