//! Noncommutative polynomials in the elementary ladder operators.
//!
//! One expression is interpreted three ways: as a truncated Fock matrix, as
//! an exact state map on the unbounded occupation lattice, and (with the
//! mode-2 number operator fixed) as a one-variable differential operator on
//! spinors. Words are read like matrix products: the rightmost atom acts
//! first.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{make_boson, make_fermion, FermionOp, FockSpace, FockState, Ladder, Mode};
use crate::operator::{Domain, Operator};
use crate::scalar::rational_to_f64;
use crate::spinor_op::SpinorOp;
use crate::transform::{MetricKind, TransformTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    A1,
    A1Dag,
    A2,
    A2Dag,
    SigmaPlus,
    SigmaMinus,
    /// The metric of a similarity transformation; only the lattice picture
    /// can evaluate it.
    Metric(TransformTag),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Expr {
    terms: Vec<(Rational64, Vec<Atom>)>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr { terms: Vec::new() }
    }

    pub fn scalar(c: Rational64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Expr { terms: vec![(c, Vec::new())] }
    }

    pub fn int(c: i64) -> Self {
        Self::scalar(Rational64::from_integer(c))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::scalar(Rational64::new(num, den))
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn atom(a: Atom) -> Self {
        Expr { terms: vec![(Rational64::one(), vec![a])] }
    }

    pub fn a1() -> Self {
        Self::atom(Atom::A1)
    }
    pub fn a1_dag() -> Self {
        Self::atom(Atom::A1Dag)
    }
    pub fn a2() -> Self {
        Self::atom(Atom::A2)
    }
    pub fn a2_dag() -> Self {
        Self::atom(Atom::A2Dag)
    }
    pub fn sigma_plus() -> Self {
        Self::atom(Atom::SigmaPlus)
    }
    pub fn sigma_minus() -> Self {
        Self::atom(Atom::SigmaMinus)
    }
    pub fn metric(tag: TransformTag) -> Self {
        Self::atom(Atom::Metric(tag))
    }

    /// `a1^+ a1`
    pub fn n1() -> Self {
        Self::a1_dag() * Self::a1()
    }
    /// `a2^+ a2`
    pub fn n2() -> Self {
        Self::a2_dag() * Self::a2()
    }
    /// `sigma_+ sigma_-`, the fermion occupation.
    pub fn occupation() -> Self {
        Self::sigma_plus() * Self::sigma_minus()
    }
    /// `sigma_- sigma_+`, the fermion vacancy.
    pub fn vacancy() -> Self {
        Self::sigma_minus() * Self::sigma_plus()
    }
    /// `sigma_+ sigma_- - sigma_- sigma_+ = diag(1, -1)`
    pub fn sigma_zero() -> Self {
        Self::occupation() - Self::vacancy()
    }

    pub fn scale(&self, c: Rational64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.0 *= c;
        }
        out.simplified()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self.clone())
    }

    pub fn terms(&self) -> &[(Rational64, Vec<Atom>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn simplified(self) -> Self {
        let mut merged: BTreeMap<Vec<Atom>, Rational64> = BTreeMap::new();
        for (c, w) in self.terms {
            *merged.entry(w).or_insert_with(Rational64::zero) += c;
        }
        Expr {
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| (c, w))
                .collect(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.clone() * other.clone() - other.clone() * self.clone()
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.clone() * other.clone() + other.clone() * self.clone()
    }

    /// Truncated Fock matrix of the expression.
    pub fn to_fock(&self, space: FockSpace) -> Result<Operator<f64>> {
        let mut cache: BTreeMap<Atom, Operator<f64>> = BTreeMap::new();
        let mut total = Operator::zeros(Domain::Fock(space));
        for (c, word) in &self.terms {
            let mut prod = Operator::identity(Domain::Fock(space));
            for atom in word {
                if !cache.contains_key(atom) {
                    cache.insert(*atom, fock_atom(space, *atom)?);
                }
                prod = prod.try_mul(&cache[atom])?;
            }
            total = total.try_add(&prod.scale(rational_to_f64(c)))?;
        }
        Ok(total)
    }

    /// Exact action on a lattice vector, without truncation.
    ///
    /// Fails with [`LatticeFault::Undefined`] when a metric exponent is
    /// negative on some reached state, and with [`LatticeFault::Overflow`]
    /// when a reached state leaves `bounds`.
    pub fn apply(&self, v: &StateVec, bounds: Option<FockSpace>) -> std::result::Result<StateVec, LatticeFault> {
        let mut out = StateVec::new();
        for (c, word) in &self.terms {
            let mut cur = v.clone();
            for atom in word.iter().rev() {
                cur = apply_atom(*atom, &cur)?;
                if let Some(space) = bounds {
                    if cur.keys().any(|st| !space.contains(st)) {
                        return Err(LatticeFault::Overflow);
                    }
                }
            }
            let c = rational_to_f64(c);
            for (st, amp) in cur {
                *out.entry(st).or_insert(0.0) += c * amp;
            }
        }
        out.retain(|_, a| *a != 0.0);
        Ok(out)
    }

    /// One-variable differential operator with `a1 = d/dx`, `a1^+ = x`, and
    /// every adjacent `a2^+ a2` replaced by the scalar `j`.
    pub fn to_spinor_op(&self, j: i64) -> Result<SpinorOp> {
        let mut total = SpinorOp::zero();
        for (c, word) in &self.terms {
            let mut prod = SpinorOp::scalar(*c);
            let mut i = 0;
            while i < word.len() {
                let factor = match (word[i], word.get(i + 1)) {
                    (Atom::A2Dag, Some(Atom::A2)) => {
                        i += 1;
                        SpinorOp::scalar(Rational64::from_integer(j))
                    }
                    (Atom::A1, _) => SpinorOp::derivative(),
                    (Atom::A1Dag, _) => SpinorOp::multiply_x(),
                    (Atom::SigmaPlus, _) => SpinorOp::sigma_plus(),
                    (Atom::SigmaMinus, _) => SpinorOp::sigma_minus(),
                    (other, _) => {
                        return Err(Error::InvalidArgument(format!(
                            "{other:?} has no one-variable realization at fixed j"
                        )))
                    }
                };
                prod = &prod * &factor;
                i += 1;
            }
            total = &total + &prod;
        }
        Ok(total)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        self.terms.extend(rhs.terms);
        self.simplified()
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(mut self) -> Expr {
        for t in &mut self.terms {
            t.0 = -t.0;
        }
        self
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, wa) in &self.terms {
            for (b, wb) in &rhs.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                terms.push((a * b, w));
            }
        }
        Expr { terms }.simplified()
    }
}

fn fock_atom(space: FockSpace, atom: Atom) -> Result<Operator<f64>> {
    Ok(match atom {
        Atom::A1 => make_boson(space, Mode::One, Ladder::Annihilate),
        Atom::A1Dag => make_boson(space, Mode::One, Ladder::Create),
        Atom::A2 => make_boson(space, Mode::Two, Ladder::Annihilate),
        Atom::A2Dag => make_boson(space, Mode::Two, Ladder::Create),
        Atom::SigmaPlus => make_fermion(space, FermionOp::SigmaPlus),
        Atom::SigmaMinus => make_fermion(space, FermionOp::SigmaMinus),
        Atom::Metric(_) => {
            return Err(Error::InvalidArgument(
                "metric operators are evaluated as state maps, not matrices".into(),
            ))
        }
    })
}

/// Sparse vector on the unbounded occupation lattice.
pub type StateVec = BTreeMap<FockState, f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeFault {
    Undefined,
    Overflow,
}

pub fn basis_vector(st: FockState) -> StateVec {
    BTreeMap::from([(st, 1.0)])
}

/// `sqrt(hi! / lo!)` for `lo <= hi`.
pub fn falling_sqrt(hi: usize, lo: usize) -> f64 {
    (lo + 1..=hi).map(|k| (k as f64).sqrt()).product()
}

/// Metric exponent on a state, `None` where the metric is undefined.
pub fn metric_exponent(tag: TransformTag, st: &FockState) -> Option<usize> {
    let s = st.s as i64 * tag.sign.value();
    let k = match tag.metric {
        MetricKind::S => st.n1 as i64 + s,
        MetricKind::T => -(st.n1 as i64) + s,
    };
    usize::try_from(k).ok()
}

/// Image of a basis state under the metric, or `None` where undefined.
pub fn metric_image(tag: TransformTag, st: &FockState) -> Option<Option<(FockState, f64)>> {
    let k = metric_exponent(tag, st)?;
    Some(match tag.metric {
        MetricKind::S => Some((FockState { n2: st.n2 + k, ..*st }, falling_sqrt(st.n2 + k, st.n2))),
        MetricKind::T => (st.n2 >= k).then(|| (FockState { n2: st.n2 - k, ..*st }, falling_sqrt(st.n2, st.n2 - k))),
    })
}

fn apply_atom(atom: Atom, v: &StateVec) -> std::result::Result<StateVec, LatticeFault> {
    let mut out = StateVec::new();
    for (st, amp) in v {
        let image = match atom {
            Atom::A1 => (st.n1 > 0).then(|| (FockState { n1: st.n1 - 1, ..*st }, (st.n1 as f64).sqrt())),
            Atom::A1Dag => Some((FockState { n1: st.n1 + 1, ..*st }, ((st.n1 + 1) as f64).sqrt())),
            Atom::A2 => (st.n2 > 0).then(|| (FockState { n2: st.n2 - 1, ..*st }, (st.n2 as f64).sqrt())),
            Atom::A2Dag => Some((FockState { n2: st.n2 + 1, ..*st }, ((st.n2 + 1) as f64).sqrt())),
            Atom::SigmaPlus => (st.s == 0).then_some((FockState { s: 1, ..*st }, 1.0)),
            Atom::SigmaMinus => (st.s == 1).then_some((FockState { s: 0, ..*st }, 1.0)),
            Atom::Metric(tag) => metric_image(tag, st).ok_or(LatticeFault::Undefined)?,
        };
        if let Some((to, a)) = image {
            *out.entry(to).or_insert(0.0) += amp * a;
        }
    }
    out.retain(|_, a| *a != 0.0);
    Ok(out)
}
