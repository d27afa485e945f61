//! Truncated Fock space of two boson modes and one fermion mode.
//!
//! Basis states `|n1, n2, s>` are enumerated lexicographically in
//! `(n1, n2, s)`, so the dense index is `(n1 * (cutoff2 + 1) + n2) * 2 + s`.
//! The fermion occupation `s = 1` is the upper component of the Pauli
//! realization: `f = sigma_-` lowers `s = 1 -> 0`, `f^+ = sigma_+` raises it,
//! and `sigma_0 = diag(1, -1)` reads `+1` on `s = 1`.
//!
//! Creation out of the top boson level maps to zero; identities that would
//! see that edge are checked only on interior states.

use serde::{Deserialize, Serialize};

use crate::operator::{Domain, Operator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockState {
    pub n1: usize,
    pub n2: usize,
    /// Fermion occupation, 0 or 1.
    pub s: u8,
}

impl FockState {
    pub fn new(n1: usize, n2: usize, s: u8) -> Self {
        assert!(s <= 1, "fermion occupation must be 0 or 1");
        FockState { n1, n2, s }
    }
}

impl std::fmt::Display for FockState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{},{},{}>", self.n1, self.n2, self.s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockSpace {
    pub cutoff1: usize,
    pub cutoff2: usize,
}

impl FockSpace {
    pub fn new(cutoff1: usize, cutoff2: usize) -> Self {
        FockSpace { cutoff1, cutoff2 }
    }

    pub fn dim(&self) -> usize {
        (self.cutoff1 + 1) * (self.cutoff2 + 1) * 2
    }

    pub fn contains(&self, st: &FockState) -> bool {
        st.n1 <= self.cutoff1 && st.n2 <= self.cutoff2 && st.s <= 1
    }

    pub fn index(&self, st: &FockState) -> Option<usize> {
        self.contains(st)
            .then(|| (st.n1 * (self.cutoff2 + 1) + st.n2) * 2 + st.s as usize)
    }

    pub fn state(&self, index: usize) -> FockState {
        assert!(index < self.dim(), "index {index} out of range");
        let s = (index % 2) as u8;
        let rest = index / 2;
        FockState {
            n1: rest / (self.cutoff2 + 1),
            n2: rest % (self.cutoff2 + 1),
            s,
        }
    }

    pub fn states(&self) -> impl Iterator<Item = FockState> + '_ {
        (0..self.dim()).map(move |i| self.state(i))
    }

    /// Indices of states with `n1 <= cutoff1 - margin1` and
    /// `n2 <= cutoff2 - margin2`.
    pub fn interior_with(&self, margin1: usize, margin2: usize) -> Vec<usize> {
        if margin1 > self.cutoff1 || margin2 > self.cutoff2 {
            return Vec::new();
        }
        self.states()
            .enumerate()
            .filter(|(_, st)| st.n1 + margin1 <= self.cutoff1 && st.n2 + margin2 <= self.cutoff2)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn interior(&self, margin: usize) -> Vec<usize> {
        self.interior_with(margin, margin)
    }

    fn cutoff(&self, mode: Mode) -> usize {
        match mode {
            Mode::One => self.cutoff1,
            Mode::Two => self.cutoff2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    One,
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ladder {
    Annihilate,
    Create,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FermionOp {
    SigmaMinus,
    SigmaPlus,
    SigmaZero,
}

fn occupation(st: &FockState, mode: Mode) -> usize {
    match mode {
        Mode::One => st.n1,
        Mode::Two => st.n2,
    }
}

fn with_occupation(st: FockState, mode: Mode, n: usize) -> FockState {
    match mode {
        Mode::One => FockState { n1: n, ..st },
        Mode::Two => FockState { n2: n, ..st },
    }
}

/// Boson ladder operator on one mode, identity on the other mode and the
/// fermion.
pub fn make_boson(space: FockSpace, mode: Mode, kind: Ladder) -> Operator<f64> {
    let mut op = Operator::zeros(Domain::Fock(space));
    let top = space.cutoff(mode);
    for (col, st) in space.states().enumerate() {
        let n = occupation(&st, mode);
        let image = match kind {
            Ladder::Annihilate if n > 0 => Some((n - 1, (n as f64).sqrt())),
            Ladder::Create if n < top => Some((n + 1, ((n + 1) as f64).sqrt())),
            _ => None,
        };
        if let Some((m, amp)) = image {
            let row = space.index(&with_occupation(st, mode, m)).expect("image inside space");
            op.insert(row, col, amp);
        }
    }
    op
}

/// Pauli realization of the fermion, identity on both boson modes.
pub fn make_fermion(space: FockSpace, kind: FermionOp) -> Operator<f64> {
    let mut op = Operator::zeros(Domain::Fock(space));
    for (col, st) in space.states().enumerate() {
        match (kind, st.s) {
            (FermionOp::SigmaPlus, 0) => {
                let row = space.index(&FockState { s: 1, ..st }).unwrap();
                op.insert(row, col, 1.0);
            }
            (FermionOp::SigmaMinus, 1) => {
                let row = space.index(&FockState { s: 0, ..st }).unwrap();
                op.insert(row, col, 1.0);
            }
            (FermionOp::SigmaZero, s) => {
                op.insert(col, col, if s == 1 { 1.0 } else { -1.0 });
            }
            _ => {}
        }
    }
    op
}

/// Diagonal operator `f(state)` on the Fock basis.
pub fn diagonal(space: FockSpace, f: impl Fn(&FockState) -> f64) -> Operator<f64> {
    let mut op = Operator::zeros(Domain::Fock(space));
    for (i, st) in space.states().enumerate() {
        let v = f(&st);
        if v != 0.0 {
            op.insert(i, i, v);
        }
    }
    op
}
