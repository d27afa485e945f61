//! Sparse operators over a finite basis.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::json::Sig17;
use crate::scalar::{Scalar, ScalarKind};
use crate::spinor::SpinorBasis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Domain {
    Fock(FockSpace),
    Spinor(SpinorBasis),
    Plain { dim: usize },
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Fock(s) => s.dim(),
            Domain::Spinor(b) => b.dim(),
            Domain::Plain { dim } => *dim,
        }
    }

    fn describe(&self) -> String {
        match self {
            Domain::Fock(s) => format!("fock({}, {})", s.cutoff1, s.cutoff2),
            Domain::Spinor(b) => format!("spinor(j={}, {}, {})", b.j, b.upper_max, b.lower_max),
            Domain::Plain { dim } => format!("plain({dim})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    domain: Domain,
    rows: Vec<BTreeMap<usize, T>>,
}

impl<T: Scalar> Operator<T> {
    pub fn zeros(domain: Domain) -> Self {
        Operator {
            domain,
            rows: vec![BTreeMap::new(); domain.dim()],
        }
    }

    pub fn identity(domain: Domain) -> Self {
        let mut op = Self::zeros(domain);
        for i in 0..domain.dim() {
            op.rows[i].insert(i, T::one());
        }
        op
    }

    pub fn from_triplets(domain: Domain, triplets: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut op = Self::zeros(domain);
        for (r, c, v) in triplets {
            op.insert(r, c, v);
        }
        op
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn kind(&self) -> ScalarKind {
        T::KIND
    }

    /// Adds `value` to entry `(row, col)`, dropping it if the sum is zero.
    pub fn insert(&mut self, row: usize, col: usize, value: T) {
        let dim = self.dim();
        assert!(row < dim && col < dim, "entry ({row}, {col}) outside dimension {dim}");
        let slot = self.rows[row].entry(col).or_insert_with(T::zero);
        *slot = slot.clone() + value;
        if slot.is_zero() {
            self.rows[row].remove(&col);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.rows[row].get(&col).cloned().unwrap_or_else(T::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    /// Row-major, column-sorted nonzero entries.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch {
                left: self.domain.describe(),
                right: other.domain.describe(),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let mut out = Self::zeros(self.domain);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, T> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &other.rows[*k] {
                    let slot = acc.entry(*c).or_insert_with(T::zero);
                    *slot = slot.clone() + a.clone() * b.clone();
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.rows[r] = acc;
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let mut out = self.clone();
        for (r, c, v) in other.triplets() {
            out.insert(r, c, v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let mut out = self.clone();
        for (r, c, v) in other.triplets() {
            out.insert(r, c, -v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: T) -> Self {
        let mut out = Self::zeros(self.domain);
        if factor.is_zero() {
            return out;
        }
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let x = v.clone() * factor.clone();
                if !x.is_zero() {
                    out.rows[r].insert(*c, x);
                }
            }
        }
        out
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(T::from_ratio(num, den))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.domain);
        for (r, c, v) in self.triplets() {
            out.rows[c].insert(r, v.clone());
        }
        out
    }

    /// Explicit scalar-kind conversion.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Operator<U> {
        let mut out = Operator::<U>::zeros(self.domain);
        for (r, c, v) in self.triplets() {
            let x = f(v);
            if !x.is_zero() {
                out.rows[r].insert(c, x);
            }
        }
        out
    }

    pub fn with_domain(mut self, domain: Domain) -> Result<Self> {
        if domain.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: domain.dim(),
            });
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim(), "vector length mismatch");
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(T::zero(), |acc, (c, a)| acc + a.clone() * v[*c].clone())
            })
            .collect()
    }

    pub fn column(&self, col: usize) -> Vec<(usize, T)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| row.get(&col).map(|v| (r, v.clone())))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.triplets().fold(0.0, |m, (_, _, v)| m.max(v.magnitude()))
    }

    /// Largest entry magnitude among the listed columns (all rows).
    pub fn max_abs_on_columns(&self, cols: &[usize]) -> f64 {
        let mut keep = vec![false; self.dim()];
        for &c in cols {
            keep[c] = true;
        }
        self.triplets()
            .filter(|(_, c, _)| keep[*c])
            .fold(0.0, |m, (_, _, v)| m.max(v.magnitude()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.triplets().all(|(r, c, v)| self.rows[c].get(&r) == Some(v))
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    /// JSON document `{domain, scalar_kind, triplets: [[row, col, re, im], ...]}`.
    ///
    /// Exact integers are written as JSON integers, non-integral rationals as
    /// `"p/q"` strings, floats with 17 significant digits.
    pub fn to_json(&self) -> Value
    where
        T: JsonScalar,
    {
        let integral = self.triplets().all(|(_, _, v)| v.is_integral());
        let kind = if T::KIND.is_exact() && integral {
            ScalarKind::ExactInteger
        } else {
            T::KIND
        };
        let triplets: Vec<Value> = self
            .triplets()
            .map(|(r, c, v)| {
                let (re, im) = v.json_parts();
                json!([r, c, re, im])
            })
            .collect();
        json!({
            "domain": serde_json::to_value(self.domain).expect("domain serializes"),
            "dim": self.dim(),
            "scalar_kind": kind.as_str(),
            "triplets": triplets,
        })
    }
}

impl Operator<f64> {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = *v;
        }
        m
    }
}

/// `AB - BA`.
pub fn commutator<T: Scalar>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

/// `AB + BA`.
pub fn anticommutator<T: Scalar>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    a.try_mul(b)?.try_add(&b.try_mul(a)?)
}

impl<T: Scalar> Add for &Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: Self) -> Operator<T> {
        self.try_add(rhs).expect("operator domains must agree")
    }
}

impl<T: Scalar> Sub for &Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: Self) -> Operator<T> {
        self.try_sub(rhs).expect("operator domains must agree")
    }
}

impl<T: Scalar> Mul for &Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: Self) -> Operator<T> {
        self.try_mul(rhs).expect("operator domains must agree")
    }
}

impl<T: Scalar> Neg for &Operator<T> {
    type Output = Operator<T>;
    fn neg(self) -> Operator<T> {
        self.scale(-T::one())
    }
}

/// Scalars that know how to write themselves into the operator JSON format.
pub trait JsonScalar: Scalar {
    fn json_parts(&self) -> (Value, Value);
    fn is_integral(&self) -> bool;
}

impl JsonScalar for i64 {
    fn json_parts(&self) -> (Value, Value) {
        (json!(self), json!(0))
    }
    fn is_integral(&self) -> bool {
        true
    }
}

impl JsonScalar for Rational64 {
    fn json_parts(&self) -> (Value, Value) {
        if self.is_integer() {
            (json!(self.to_integer()), json!(0))
        } else {
            (json!(format!("{}/{}", self.numer(), self.denom())), json!(0))
        }
    }
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

impl JsonScalar for f64 {
    fn json_parts(&self) -> (Value, Value) {
        (Sig17(*self).to_value(), Sig17(0.0).to_value())
    }
    fn is_integral(&self) -> bool {
        false
    }
}

impl JsonScalar for Complex64 {
    fn json_parts(&self) -> (Value, Value) {
        (Sig17(self.re).to_value(), Sig17(self.im).to_value())
    }
    fn is_integral(&self) -> bool {
        false
    }
}

/// An operator read back from JSON, keyed by its declared scalar kind.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyOperator {
    Integer(Operator<i64>),
    Rational(Operator<Rational64>),
    Float(Operator<f64>),
    Complex(Operator<Complex64>),
}

impl AnyOperator {
    pub fn from_json(doc: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Malformed(m.to_string());
        let domain: Domain = serde_json::from_value(doc.get("domain").cloned().ok_or_else(|| bad("missing domain"))?)?;
        let kind: ScalarKind = serde_json::from_value(
            doc.get("scalar_kind").cloned().ok_or_else(|| bad("missing scalar_kind"))?,
        )?;
        let triplets = doc
            .get("triplets")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing triplets"))?;
        let mut entries = Vec::with_capacity(triplets.len());
        for t in triplets {
            let t = t.as_array().filter(|t| t.len() == 4).ok_or_else(|| bad("triplet must have 4 fields"))?;
            let r = t[0].as_u64().ok_or_else(|| bad("row index"))? as usize;
            let c = t[1].as_u64().ok_or_else(|| bad("column index"))? as usize;
            if r >= domain.dim() || c >= domain.dim() {
                return Err(bad("index outside domain"));
            }
            entries.push((r, c, t[2].clone(), t[3].clone()));
        }
        let float = |v: &Value| v.as_f64().ok_or_else(|| bad("expected a number"));
        Ok(match kind {
            ScalarKind::ExactInteger => {
                let mut op = Operator::zeros(domain);
                for (r, c, re, _) in entries {
                    op.insert(r, c, re.as_i64().ok_or_else(|| bad("expected an integer"))?);
                }
                AnyOperator::Integer(op)
            }
            ScalarKind::ExactRational => {
                let mut op = Operator::zeros(domain);
                for (r, c, re, _) in entries {
                    op.insert(r, c, parse_rational(&re).ok_or_else(|| bad("expected a rational"))?);
                }
                AnyOperator::Rational(op)
            }
            ScalarKind::Float => {
                let mut op = Operator::zeros(domain);
                for (r, c, re, _) in entries {
                    op.insert(r, c, float(&re)?);
                }
                AnyOperator::Float(op)
            }
            ScalarKind::ComplexFloat => {
                let mut op = Operator::zeros(domain);
                for (r, c, re, im) in entries {
                    op.insert(r, c, Complex64::new(float(&re)?, float(&im)?));
                }
                AnyOperator::Complex(op)
            }
        })
    }
}

fn parse_rational(v: &Value) -> Option<Rational64> {
    if let Some(i) = v.as_i64() {
        return Some(Rational64::from_integer(i));
    }
    let s = v.as_str()?;
    let (n, d) = s.split_once('/')?;
    let d: i64 = d.trim().parse().ok()?;
    (d != 0).then_some(())?;
    Some(Rational64::new(n.trim().parse().ok()?, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain(n: usize) -> Domain {
        Domain::Plain { dim: n }
    }

    #[test]
    fn commutator_with_itself_vanishes() {
        let a = Operator::from_triplets(plain(3), [(0, 1, 2.0), (2, 0, -1.5), (1, 1, 0.25)]);
        assert!(commutator(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let a = Operator::<f64>::identity(plain(2));
        let b = Operator::<f64>::identity(Domain::Fock(FockSpace::new(0, 0)));
        assert!(matches!(commutator(&a, &b), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn insert_cancels_to_structural_zero() {
        let mut a = Operator::<i64>::zeros(plain(2));
        a.insert(0, 1, 3);
        a.insert(0, 1, -3);
        assert_eq!(a.nnz(), 0);
    }

    #[test]
    fn rational_json_keeps_fractions() {
        let a = Operator::from_triplets(
            plain(2),
            [(0, 0, Rational64::new(1, 2)), (1, 0, Rational64::from_integer(-3))],
        );
        let doc = a.to_json();
        assert_eq!(doc["scalar_kind"], "exact-rational");
        assert_eq!(doc["triplets"][0][2], "1/2");
        assert_eq!(doc["triplets"][1][2], -3);
        assert_eq!(AnyOperator::from_json(&doc).unwrap(), AnyOperator::Rational(a));
    }

    #[test]
    fn integral_rational_reports_exact_integer() {
        let a = Operator::from_triplets(plain(2), [(1, 0, Rational64::from_integer(4))]);
        assert_eq!(a.to_json()["scalar_kind"], "exact-integer");
    }
}
