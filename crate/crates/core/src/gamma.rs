//! The operators `(a2)^(a1^+ a1)` and `(a2^+)^(a1^+ a1)` as explicit state
//! maps on two-mode states `|n1, n2>`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::fock::{make_boson, FockSpace, FockState, Ladder, Mode};
use crate::json::Sig17;
use crate::operator::{Domain, Operator};

/// Above this occupation, factorial ratios are accumulated in log space.
const LOG_SPACE_ABOVE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Gamma {
    /// `(a2)^(a1^+ a1)`
    One,
    /// `(a2^+)^(a1^+ a1)`, with the tabulated amplitude
    Two,
}

/// Image of a state, or `None` when the state is annihilated.
pub type GammaImage = Option<(FockState, f64)>;

/// `sqrt(hi! / lo!)` for `lo <= hi`.
pub fn factorial_ratio_sqrt(hi: usize, lo: usize) -> f64 {
    debug_assert!(lo <= hi);
    if hi > LOG_SPACE_ABOVE {
        let log: f64 = (lo + 1..=hi).map(|k| (k as f64).ln()).sum();
        (0.5 * log).exp()
    } else {
        (lo + 1..=hi).map(|k| k as f64).product::<f64>().sqrt()
    }
}

/// `Gamma1 |n1,n2> = sqrt(n2!/(n2-n1)!) |n1, n2-n1>` (zero if `n2 < n1`);
/// `Gamma2 |n1,n2> = sqrt(n2!/(n2+n1+1)!) |n1, n2+n1>` as tabulated.
pub fn gamma_action(which: Gamma, st: FockState) -> GammaImage {
    match which {
        Gamma::One => (st.n2 >= st.n1).then(|| {
            (FockState { n2: st.n2 - st.n1, ..st }, factorial_ratio_sqrt(st.n2, st.n2 - st.n1))
        }),
        Gamma::Two => Some((
            FockState { n2: st.n2 + st.n1, ..st },
            1.0 / factorial_ratio_sqrt(st.n2 + st.n1 + 1, st.n2),
        )),
    }
}

/// Amplitude of `(a2^+)^n1 |n1,n2>`, the actual power of the creation
/// operator.
pub fn creation_power_amplitude(st: FockState) -> f64 {
    factorial_ratio_sqrt(st.n2 + st.n1, st.n2)
}

fn matrix_power(op: &Operator<f64>, k: usize) -> Operator<f64> {
    (0..k).fold(Operator::identity(op.domain()), |acc, _| &acc * op)
}

/// Largest entry difference between the `Gamma1` state map and the matrix
/// power `(a2)^n1`, over all states with `n1 + n2 <= max_total`.
pub fn gamma_one_vs_matrix_power(max_total: usize) -> f64 {
    let space = FockSpace::new(max_total, max_total);
    let a2 = make_boson(space, Mode::Two, Ladder::Annihilate);
    let powers: Vec<Operator<f64>> = (0..=max_total).map(|k| matrix_power(&a2, k)).collect();
    let mut worst = 0.0f64;
    for st in space.states().filter(|st| st.n1 + st.n2 <= max_total) {
        let col = space.index(&st).expect("state inside space");
        let mut expected = vec![0.0; space.dim()];
        if let Some((to, amp)) = gamma_action(Gamma::One, st) {
            expected[space.index(&to).expect("image inside space")] = amp;
        }
        let power = &powers[st.n1];
        for (row, e) in expected.iter().enumerate() {
            worst = worst.max((power.get(row, col) - e).abs());
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaTwoRow {
    pub state: FockState,
    pub image: FockState,
    pub tabulated: f64,
    pub matrix_power: f64,
}

impl GammaTwoRow {
    pub fn matches(&self, tolerance: f64) -> bool {
        (self.tabulated - self.matrix_power).abs() <= tolerance * self.matrix_power.abs().max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaTwoReport {
    pub rows: Vec<GammaTwoRow>,
    pub tolerance: f64,
}

impl GammaTwoReport {
    pub fn matching_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.matches(self.tolerance)).count()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n1": r.state.n1,
                    "n2": r.state.n2,
                    "image_n2": r.image.n2,
                    "tabulated": Sig17(r.tabulated).to_value(),
                    "matrix_power": Sig17(r.matrix_power).to_value(),
                    "matches": r.matches(self.tolerance),
                })
            })
            .collect();
        json!({
            "operator": "gamma2",
            "tolerance": Sig17(self.tolerance).to_value(),
            "rows": rows,
            "matching_rows": self.matching_rows(),
            "total_rows": self.rows.len(),
        })
    }
}

/// Tabulated `Gamma2` amplitude against the matrix power `(a2^+)^n1`,
/// evaluated on a truncated space large enough to hold every image.
pub fn gamma_two_report(max_total: usize, tolerance: f64) -> GammaTwoReport {
    let space = FockSpace::new(max_total, 2 * max_total);
    let a2d = make_boson(space, Mode::Two, Ladder::Create);
    let powers: Vec<Operator<f64>> = (0..=max_total).map(|k| matrix_power(&a2d, k)).collect();
    let mut rows = Vec::new();
    for (n1, power) in powers.iter().enumerate() {
        for n2 in 0..=max_total - n1 {
            let st = FockState::new(n1, n2, 0);
            let (image, tabulated) = gamma_action(Gamma::Two, st).expect("Gamma2 never annihilates");
            let row = space.index(&image).expect("image inside space");
            let col = space.index(&st).expect("state inside space");
            rows.push(GammaTwoRow { state: st, image, tabulated, matrix_power: power.get(row, col) });
        }
    }
    GammaTwoReport { rows, tolerance }
}

/// `Gamma1` as a matrix on `space`, for callers that want the operator.
pub fn gamma_one_matrix(space: FockSpace) -> Operator<f64> {
    let mut op = Operator::zeros(Domain::Fock(space));
    for (col, st) in space.states().enumerate() {
        if let Some((to, amp)) = gamma_action(Gamma::One, st) {
            op.insert(space.index(&to).expect("lowering stays inside"), col, amp);
        }
    }
    op
}
