//! Two-component monomial bases for the one-variable (Bargmann) picture.
//!
//! A spinor is `(u(x), v(x))` with `u` the upper component (`sigma_0 = +1`,
//! fermion occupied) and `v` the lower one. The basis lists the upper
//! monomials `x^0..=x^upper_max` first, then the lower ones.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Upper,
    Lower,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::Upper, Component::Lower];

    pub fn flipped(self) -> Self {
        match self {
            Component::Upper => Component::Lower,
            Component::Lower => Component::Upper,
        }
    }
}

/// Shape of a spinor basis, named by the degree of the upper component
/// relative to the lower one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisFamily {
    /// upper `0..=n+1`, lower `0..=n`
    UpperLeads,
    /// upper `0..=n`, lower `0..=n+1`
    LowerLeads,
    /// upper `0..=n`, lower `0..=n`
    Balanced,
    Other,
}

impl BasisFamily {
    pub fn of(upper_max: usize, lower_max: usize) -> Self {
        match upper_max as i64 - lower_max as i64 {
            1 => BasisFamily::UpperLeads,
            -1 => BasisFamily::LowerLeads,
            0 => BasisFamily::Balanced,
            _ => BasisFamily::Other,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisFamily::UpperLeads => "P(n+1,n)",
            BasisFamily::LowerLeads => "P(n,n+1)",
            BasisFamily::Balanced => "P(n,n)",
            BasisFamily::Other => "P(other)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinorBasis {
    /// Sector label: the fixed value of the mode-2 number operator.
    pub j: usize,
    pub upper_max: usize,
    pub lower_max: usize,
}

impl SpinorBasis {
    pub fn new(j: usize, upper_max: usize, lower_max: usize) -> Self {
        SpinorBasis { j, upper_max, lower_max }
    }

    pub fn dim(&self) -> usize {
        self.upper_max + 1 + self.lower_max + 1
    }

    pub fn family(&self) -> BasisFamily {
        BasisFamily::of(self.upper_max, self.lower_max)
    }

    pub fn max_degree(&self, comp: Component) -> usize {
        match comp {
            Component::Upper => self.upper_max,
            Component::Lower => self.lower_max,
        }
    }

    pub fn index(&self, comp: Component, degree: usize) -> Option<usize> {
        match comp {
            Component::Upper => (degree <= self.upper_max).then_some(degree),
            Component::Lower => {
                (degree <= self.lower_max).then_some(self.upper_max + 1 + degree)
            }
        }
    }

    pub fn monomial(&self, index: usize) -> (Component, usize) {
        assert!(index < self.dim(), "index {index} out of range");
        if index <= self.upper_max {
            (Component::Upper, index)
        } else {
            (Component::Lower, index - self.upper_max - 1)
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = (Component, usize)> + '_ {
        (0..self.dim()).map(move |i| self.monomial(i))
    }
}

/// Polynomial spinor with dense coefficient lists (index = power of `x`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolySpinor {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl PolySpinor {
    pub fn zeros(basis: &SpinorBasis) -> Self {
        PolySpinor {
            upper: vec![0.0; basis.upper_max + 1],
            lower: vec![0.0; basis.lower_max + 1],
        }
    }

    pub fn from_vector(basis: &SpinorBasis, v: &[f64]) -> Self {
        assert_eq!(v.len(), basis.dim());
        PolySpinor {
            upper: v[..=basis.upper_max].to_vec(),
            lower: v[basis.upper_max + 1..].to_vec(),
        }
    }

    pub fn to_vector(&self) -> Vec<f64> {
        self.upper.iter().chain(self.lower.iter()).copied().collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().chain(&self.lower).fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }
}

/// Coefficients of `prod_k (c0_k + c1_k x)^e_k`, lowest power first.
pub fn expand_linear_factors(factors: &[(f64, f64, usize)]) -> Vec<f64> {
    let mut poly = vec![1.0];
    for &(c0, c1, e) in factors {
        for _ in 0..e {
            let mut next = vec![0.0; poly.len() + 1];
            for (k, &p) in poly.iter().enumerate() {
                next[k] += c0 * p;
                next[k + 1] += c1 * p;
            }
            poly = next;
        }
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        let b = SpinorBasis::new(3, 3, 2);
        assert_eq!(b.dim(), 7);
        for i in 0..b.dim() {
            let (c, d) = b.monomial(i);
            assert_eq!(b.index(c, d), Some(i));
        }
        assert_eq!(b.index(Component::Lower, 3), None);
        assert_eq!(b.family(), BasisFamily::UpperLeads);
    }

    #[test]
    fn binomial_expansion() {
        // (1 + x)^2 (2 - x) = 2 + 3x - x^3
        let p = expand_linear_factors(&[(1.0, 1.0, 2), (2.0, -1.0, 1)]);
        assert_eq!(p, vec![2.0, 3.0, 0.0, -1.0]);
    }
}
