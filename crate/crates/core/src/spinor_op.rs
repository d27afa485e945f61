//! Differential operators on two-component polynomials.
//!
//! An operator is a 2x2 array of blocks, each block a finite sum of
//! `c * x^p (d/dx)^q` with exact rational `c`. Block `(to, from)` maps the
//! `from` component into the `to` component.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::Zero;

use crate::operator::{Domain, Operator};
use crate::scalar::rational_to_f64;
use crate::spinor::{Component, PolySpinor, SpinorBasis};

type Block = BTreeMap<(u32, u32), Rational64>;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpinorOp {
    blocks: BTreeMap<(Component, Component), Block>,
}

/// A matrix entry that landed outside the basis and was dropped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DroppedTerm {
    pub from: (Component, usize),
    pub to: (Component, usize),
    pub coefficient: Rational64,
}

/// `k! / (k - q)!`
fn falling(k: u32, q: u32) -> i64 {
    (k - q + 1..=k).map(i64::from).product()
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * i64::from(n - i) / i64::from(i + 1))
}

impl SpinorOp {
    pub fn zero() -> Self {
        SpinorOp::default()
    }

    fn diagonal_term(p: u32, q: u32, c: Rational64) -> Self {
        let mut op = SpinorOp::zero();
        for comp in Component::BOTH {
            op.add_term(comp, comp, p, q, c);
        }
        op
    }

    pub fn scalar(c: Rational64) -> Self {
        Self::diagonal_term(0, 0, c)
    }

    pub fn derivative() -> Self {
        Self::diagonal_term(0, 1, Rational64::from_integer(1))
    }

    pub fn multiply_x() -> Self {
        Self::diagonal_term(1, 0, Rational64::from_integer(1))
    }

    /// Lower component into upper.
    pub fn sigma_plus() -> Self {
        let mut op = SpinorOp::zero();
        op.add_term(Component::Upper, Component::Lower, 0, 0, Rational64::from_integer(1));
        op
    }

    /// Upper component into lower.
    pub fn sigma_minus() -> Self {
        let mut op = SpinorOp::zero();
        op.add_term(Component::Lower, Component::Upper, 0, 0, Rational64::from_integer(1));
        op
    }

    pub fn add_term(&mut self, to: Component, from: Component, xpow: u32, dpow: u32, c: Rational64) {
        let block = self.blocks.entry((to, from)).or_default();
        let slot = block.entry((xpow, dpow)).or_insert_with(Rational64::zero);
        *slot += c;
        if slot.is_zero() {
            block.remove(&(xpow, dpow));
            if block.is_empty() {
                self.blocks.remove(&(to, from));
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn scale(&self, c: Rational64) -> Self {
        let mut out = SpinorOp::zero();
        for ((to, from), block) in &self.blocks {
            for ((p, q), v) in block {
                out.add_term(*to, *from, *p, *q, v * c);
            }
        }
        out
    }

    /// Terms as `(to, from, x power, derivative order, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Component, Component, u32, u32, Rational64)> + '_ {
        self.blocks
            .iter()
            .flat_map(|((to, from), b)| b.iter().map(move |((p, q), c)| (*to, *from, *p, *q, *c)))
    }

    /// Action on the monomial `x^degree` of component `from`.
    fn act_on_monomial(&self, from: Component, degree: u32) -> Vec<(Component, u32, Rational64)> {
        self.terms()
            .filter(|t| t.1 == from && degree >= t.3)
            .map(|(to, _, p, q, c)| (to, degree - q + p, c * falling(degree, q)))
            .collect()
    }

    /// Exact matrix on `basis`; images outside the basis are dropped and
    /// returned alongside.
    pub fn to_matrix(&self, basis: &SpinorBasis) -> (Operator<Rational64>, Vec<DroppedTerm>) {
        let mut op = Operator::zeros(Domain::Spinor(*basis));
        let mut dropped = Vec::new();
        for (col, (from, degree)) in basis.monomials().enumerate() {
            let mut images: BTreeMap<(Component, u32), Rational64> = BTreeMap::new();
            for (to, d, c) in self.act_on_monomial(from, degree as u32) {
                *images.entry((to, d)).or_insert_with(Rational64::zero) += c;
            }
            for ((to, d), c) in images {
                if c.is_zero() {
                    continue;
                }
                match basis.index(to, d as usize) {
                    Some(row) => op.insert(row, col, c),
                    None => dropped.push(DroppedTerm {
                        from: (from, degree),
                        to: (to, d as usize),
                        coefficient: c,
                    }),
                }
            }
        }
        (op, dropped)
    }

    /// True when the span of monomials above the basis degrees is mapped
    /// into itself, so truncating to the basis is an exact quotient
    /// representation.
    pub fn preserves_complement(&self, basis: &SpinorBasis) -> bool {
        let max_shift = self.terms().map(|t| t.3).max().unwrap_or(0) as usize;
        Component::BOTH.iter().all(|&from| {
            let lo = basis.max_degree(from) + 1;
            (lo..=lo + max_shift + 1).all(|deg| {
                let mut images: BTreeMap<(Component, u32), Rational64> = BTreeMap::new();
                for (to, d, c) in self.act_on_monomial(from, deg as u32) {
                    *images.entry((to, d)).or_insert_with(Rational64::zero) += c;
                }
                images
                    .iter()
                    .all(|((to, d), c)| c.is_zero() || *d as usize > basis.max_degree(*to))
            })
        })
    }

    /// Unbounded action on a float polynomial spinor.
    pub fn apply(&self, psi: &PolySpinor) -> PolySpinor {
        let mut out = PolySpinor { upper: Vec::new(), lower: Vec::new() };
        for from in Component::BOTH {
            let coeffs = match from {
                Component::Upper => &psi.upper,
                Component::Lower => &psi.lower,
            };
            for (deg, &a) in coeffs.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (to, d, c) in self.act_on_monomial(from, deg as u32) {
                    let target = match to {
                        Component::Upper => &mut out.upper,
                        Component::Lower => &mut out.lower,
                    };
                    if target.len() <= d as usize {
                        target.resize(d as usize + 1, 0.0);
                    }
                    target[d as usize] += a * rational_to_f64(&c);
                }
            }
        }
        out
    }
}

impl Add for &SpinorOp {
    type Output = SpinorOp;
    fn add(self, rhs: &SpinorOp) -> SpinorOp {
        let mut out = self.clone();
        for (to, from, p, q, c) in rhs.terms() {
            out.add_term(to, from, p, q, c);
        }
        out
    }
}

impl Sub for &SpinorOp {
    type Output = SpinorOp;
    fn sub(self, rhs: &SpinorOp) -> SpinorOp {
        self + &(-rhs)
    }
}

impl Neg for &SpinorOp {
    type Output = SpinorOp;
    fn neg(self) -> SpinorOp {
        self.scale(Rational64::from_integer(-1))
    }
}

impl Mul for &SpinorOp {
    type Output = SpinorOp;
    /// Composition; `rhs` acts first. Uses
    /// `d^q x^r = sum_k C(q,k) r!/(r-k)! x^(r-k) d^(q-k)`.
    fn mul(self, rhs: &SpinorOp) -> SpinorOp {
        let mut out = SpinorOp::zero();
        for (to, mid, p, q, a) in self.terms() {
            for (mid2, from, r, s, b) in rhs.terms() {
                if mid != mid2 {
                    continue;
                }
                for k in 0..=q.min(r) {
                    let c = a * b * Rational64::from_integer(binomial(q, k) * falling(r, k));
                    out.add_term(to, from, p + r - k, q - k + s, c);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn canonical_commutator() {
        let d = SpinorOp::derivative();
        let x = SpinorOp::multiply_x();
        let comm = &(&d * &x) - &(&x * &d);
        assert_eq!(comm, SpinorOp::scalar(r(1)));
    }

    #[test]
    fn euler_operator_is_diagonal() {
        let basis = SpinorBasis::new(3, 3, 2);
        let euler = &SpinorOp::multiply_x() * &SpinorOp::derivative();
        let (m, dropped) = euler.to_matrix(&basis);
        assert!(dropped.is_empty());
        for (i, (_, deg)) in basis.monomials().enumerate() {
            assert_eq!(m.get(i, i), r(deg as i64));
        }
        assert_eq!(m.nnz(), 5);
    }

    #[test]
    fn raising_drops_top_monomial() {
        let basis = SpinorBasis::new(1, 1, 0);
        let (_, dropped) = SpinorOp::multiply_x().to_matrix(&basis);
        assert_eq!(dropped.len(), 2);
        assert!(SpinorOp::multiply_x().preserves_complement(&basis));
        assert!(!SpinorOp::derivative().preserves_complement(&basis));
    }

    #[test]
    fn second_derivative_of_cube() {
        let d2 = &SpinorOp::derivative() * &SpinorOp::derivative();
        let psi = PolySpinor { upper: vec![0.0, 0.0, 0.0, 1.0], lower: vec![] };
        assert_eq!(d2.apply(&psi).upper, vec![0.0, 6.0]);
    }
}
