//! Linear-program feasibility for signed half-space systems.
//!
//! A cell of a central hyperplane arrangement is the set of coefficient
//! vectors β satisfying `sign_i · (row_i · β) > 0` for every constraint. We
//! decide whether a cell is empty by maximising a slack variable `0 <= r <= 1`
//! subject to, per constraint,
//!
//! ```text
//! sign = +:  row·β₋ − row·β₊ + r·‖row‖₂ <= 0
//! sign = −:  row·β₊ − row·β₋ + r·‖row‖₂ <= 0
//! ```
//!
//! with `0 <= β₊, β₋ <= B` componentwise and `β = β₊ − β₋`. The optimum is a
//! pseudo-Chebyshev centre of the cell: the interior point whose worst
//! normalised slack is maximal (capped at one, since cells are cones and the
//! slack scales along rays).
//!
//! The engine is a dense bounded-variable primal simplex with Bland's rule.
//! Because the optimum is supported on at most a handful of rows while
//! arrangements can carry hundreds, the solver works on a growing subset of
//! rows: solve the subset, check the witness against every row, and pull in
//! the most violated row until the witness certifies the subset optimum.
//! The subset solution always bounds the full optimum from above, so an
//! infeasible verdict from a subset is final.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cells with maximal slack above this are nonempty open cells; anything at
/// or below is treated as a boundary-only sign vector.
pub const FEASIBILITY_EPS: f64 = 1e-7;

/// Componentwise cap on β₊ and β₋. Any interior ray direction reaches the
/// slack cap r = 1 long before this box binds for non-degenerate cells.
pub const DEFAULT_BOX_BOUND: f64 = 1e3;

const PIVOT_TOL: f64 = 1e-10;
const OPT_TOL: f64 = 1e-9;

/// Which side of the hyperplane a constraint keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Result<Sign> {
        match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            other => Err(Error::InvalidParameter(format!(
                "sign character must be + or -, got {other:?}"
            ))),
        }
    }

    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One signed half-space `sign · (row · β) > 0`, with the row's Euclidean
/// norm precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedConstraint {
    pub row: Vec<f64>,
    pub sign: Sign,
    pub norm: f64,
}

impl SignedConstraint {
    pub fn new(row: Vec<f64>, sign: Sign) -> Result<Self> {
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::InvalidParameter(
                "constraint row must be nonzero and finite".to_string(),
            ));
        }
        Ok(Self { row, sign, norm })
    }

    /// Normalised signed slack of `beta`: positive iff `beta` lies strictly
    /// inside the half-space.
    pub fn slack(&self, beta: &[f64]) -> f64 {
        let dot: f64 = self.row.iter().zip(beta).map(|(a, b)| a * b).sum();
        self.sign.factor() * dot / self.norm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
    /// The simplex hit its iteration cap; callers treat this as infeasible.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    /// Maximal worst-case normalised slack, in [0, 1].
    pub r_star: f64,
    /// β = β₊ − β₋ realising `r_star` (meaningful when feasible).
    pub witness: Vec<f64>,
    pub status: FeasibilityStatus,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
    }
}

/// Maximises the slack `r` over the whole constraint system and returns the
/// pseudo-Chebyshev witness.
pub fn solve_feasibility(
    constraints: &[SignedConstraint],
    box_bound: f64,
) -> Result<FeasibilityResult> {
    for c in constraints {
        let norm = c.row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (c.norm - norm).abs() > 1e-12 * norm.max(1.0) {
            return Err(Error::InvalidParameter(
                "constraint norm disagrees with its row".to_string(),
            ));
        }
    }
    solve_with_options(constraints, &SolveOptions::new(box_bound)).map(|(res, _)| res)
}

/// Internal knobs shared with the arrangement enumerator.
#[derive(Debug, Clone)]
pub(crate) struct SolveOptions {
    pub box_bound: f64,
    /// Stop as soon as a verified witness exceeds this slack instead of
    /// optimising to the true maximum. Feasibility verdicts are unaffected.
    pub stop_above: Option<f64>,
    /// Row indices to seed the working set with (e.g. the parent cell's
    /// support during incremental enumeration).
    pub seed_support: Vec<usize>,
}

impl SolveOptions {
    pub fn new(box_bound: f64) -> Self {
        Self {
            box_bound,
            stop_above: None,
            seed_support: Vec::new(),
        }
    }
}

/// Solves and additionally returns the active working set, which callers can
/// reuse to warm-start the LPs of derived systems.
pub(crate) fn solve_with_options(
    constraints: &[SignedConstraint],
    options: &SolveOptions,
) -> Result<(FeasibilityResult, Vec<usize>)> {
    let refs: Vec<&SignedConstraint> = constraints.iter().collect();
    solve_refs(&refs, options)
}

/// Reference-slice variant so the arrangement enumerator can assemble
/// constraint systems without cloning rows.
pub(crate) fn solve_refs(
    constraints: &[&SignedConstraint],
    options: &SolveOptions,
) -> Result<(FeasibilityResult, Vec<usize>)> {
    if constraints.is_empty() {
        return Err(Error::Empty {
            what: "constraint system",
        });
    }
    if !(options.box_bound > 0.0) {
        return Err(Error::InvalidParameter(
            "box bound must be positive".to_string(),
        ));
    }
    let dim = constraints[0].row.len();
    for c in constraints {
        if c.row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: c.row.len(),
            });
        }
    }

    let m = constraints.len();
    let mut working: Vec<usize> = options
        .seed_support
        .iter()
        .copied()
        .filter(|&i| i < m)
        .collect();
    working.sort_unstable();
    working.dedup();
    if working.is_empty() {
        working.extend(0..m.min(4));
    }

    loop {
        let subset: Vec<&SignedConstraint> = working.iter().map(|&i| constraints[i]).collect();
        let outcome = simplex_max_slack(&subset, dim, options.box_bound, options.stop_above);
        let outcome = match outcome {
            Some(o) => o,
            None => {
                // Iteration cap: report a degenerate solve.
                return Ok((
                    FeasibilityResult {
                        r_star: 0.0,
                        witness: vec![0.0; dim],
                        status: FeasibilityStatus::Degenerate,
                    },
                    working,
                ));
            }
        };

        // The subset optimum bounds the full optimum from above.
        if outcome.r_value <= FEASIBILITY_EPS && outcome.optimal {
            return Ok((
                FeasibilityResult {
                    r_star: outcome.r_value.clamp(0.0, 1.0),
                    witness: outcome.beta,
                    status: FeasibilityStatus::Infeasible,
                },
                working,
            ));
        }

        // Check the subset witness against every row.
        let mut min_slack = f64::INFINITY;
        let mut worst = 0usize;
        for (i, c) in constraints.iter().enumerate() {
            let s = c.slack(&outcome.beta);
            if s < min_slack {
                min_slack = s;
                worst = i;
            }
        }

        let verified_optimal = min_slack >= outcome.r_value - OPT_TOL && outcome.optimal;
        let probe_hit = options
            .stop_above
            .is_some_and(|target| min_slack > target.max(FEASIBILITY_EPS));
        let stuck = working.contains(&worst);
        if verified_optimal || probe_hit || (stuck && outcome.optimal) {
            let r_star = min_slack.clamp(0.0, 1.0);
            let status = if r_star > FEASIBILITY_EPS {
                FeasibilityStatus::Feasible
            } else {
                FeasibilityStatus::Infeasible
            };
            return Ok((
                FeasibilityResult {
                    r_star,
                    witness: outcome.beta,
                    status,
                },
                working,
            ));
        }

        if !working.contains(&worst) {
            working.push(worst);
            working.sort_unstable();
        } else {
            // Early-exit witness fell short of the probe target: redo the
            // solve exactly from the accumulated working set.
            let exact = SolveOptions {
                box_bound: options.box_bound,
                stop_above: None,
                seed_support: working,
            };
            return solve_refs(constraints, &exact);
        }
    }
}

struct SimplexOutcome {
    beta: Vec<f64>,
    r_value: f64,
    /// False when the solve stopped early at a feasible but non-optimal point.
    optimal: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
}

/// Bounded-variable primal simplex (Bland's rule) for
/// `max r  s.t.  sign·(row·(β₊−β₋)) >= r·‖row‖,  0 <= β± <= B,  0 <= r <= 1`.
///
/// The origin is always feasible, so no phase-one is needed. Returns `None`
/// when the iteration cap is exceeded.
fn simplex_max_slack(
    constraints: &[&SignedConstraint],
    dim: usize,
    box_bound: f64,
    stop_above: Option<f64>,
) -> Option<SimplexOutcome> {
    let m = constraints.len();
    let n_struct = 2 * dim + 1;
    let r_col = 2 * dim;
    let n_total = n_struct + m;

    // Upper bounds per variable; slacks are unbounded above.
    let mut upper = vec![box_bound; n_struct];
    upper[r_col] = 1.0;
    upper.extend(std::iter::repeat(f64::INFINITY).take(m));

    // Tableau rows: [-sign·row | sign·row | norm | I] z <= 0.
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (i, c) in constraints.iter().enumerate() {
        let mut row = vec![0.0; n_total];
        let f = c.sign.factor();
        for (j, &a) in c.row.iter().enumerate() {
            row[j] = -f * a;
            row[dim + j] = f * a;
        }
        row[r_col] = c.norm;
        row[n_struct + i] = 1.0;
        tab.push(row);
    }

    let mut basis: Vec<usize> = (0..m).map(|i| n_struct + i).collect();
    let mut status = vec![VarStatus::AtLower; n_total];
    for &b in &basis {
        status[b] = VarStatus::Basic;
    }
    let mut xb = vec![0.0; m];
    let mut r_row: Option<usize> = None;

    let current_r = |r_row: Option<usize>, xb: &[f64], status: &[VarStatus]| -> f64 {
        match r_row {
            Some(i) => xb[i],
            None => match status[r_col] {
                VarStatus::AtUpper => 1.0,
                _ => 0.0,
            },
        }
    };

    let max_iterations = 200 + 50 * (m + n_struct);
    for _ in 0..max_iterations {
        if let Some(target) = stop_above {
            let r_now = current_r(r_row, &xb, &status);
            if r_now > target {
                return Some(extract(SimplexState {
                    basis: &basis,
                    status: &status,
                    xb: &xb,
                    upper: &upper,
                    dim,
                    r_value: r_now,
                    optimal: false,
                }));
            }
        }

        // Reduced cost of column j for the objective e_r: when r is basic in
        // row ri, d_j = c_j − tab[ri][j]; otherwise d_j = c_j.
        let reduced = |j: usize| -> f64 {
            let c_j = if j == r_col { 1.0 } else { 0.0 };
            match r_row {
                Some(ri) => c_j - tab[ri][j],
                None => c_j,
            }
        };

        // Bland: smallest-index eligible entering variable.
        let mut entering: Option<(usize, f64)> = None;
        for j in 0..n_total {
            match status[j] {
                VarStatus::Basic => continue,
                VarStatus::AtLower => {
                    if reduced(j) > PIVOT_TOL {
                        entering = Some((j, 1.0));
                        break;
                    }
                }
                VarStatus::AtUpper => {
                    if reduced(j) < -PIVOT_TOL {
                        entering = Some((j, -1.0));
                        break;
                    }
                }
            }
        }
        let (j, dir) = match entering {
            Some(e) => e,
            None => {
                let r_now = current_r(r_row, &xb, &status);
                return Some(extract(SimplexState {
                    basis: &basis,
                    status: &status,
                    xb: &xb,
                    upper: &upper,
                    dim,
                    r_value: r_now,
                    optimal: true,
                }));
            }
        };

        // Ratio test. Moving the entering variable by t >= 0 in direction
        // `dir` changes basic i by −dir·tab[i][j]·t.
        let span = upper[j]; // lower bounds are all zero
        let mut t_best = span;
        let mut leave: Option<(usize, VarStatus)> = None; // (row, bound hit)
        for i in 0..m {
            let delta = -dir * tab[i][j];
            if delta < -PIVOT_TOL {
                // Basic variable decreases towards its lower bound 0.
                let limit = (xb[i] / -delta).max(0.0);
                let better = limit < t_best - PIVOT_TOL
                    || (limit < t_best + PIVOT_TOL
                        && leave.is_some_and(|(li, _)| basis[i] < basis[li]));
                if better {
                    t_best = limit.min(t_best);
                    leave = Some((i, VarStatus::AtLower));
                }
            } else if delta > PIVOT_TOL {
                let ub = upper[basis[i]];
                if ub.is_finite() {
                    let limit = ((ub - xb[i]) / delta).max(0.0);
                    let better = limit < t_best - PIVOT_TOL
                        || (limit < t_best + PIVOT_TOL
                            && leave.is_some_and(|(li, _)| basis[i] < basis[li]));
                    if better {
                        t_best = limit.min(t_best);
                        leave = Some((i, VarStatus::AtUpper));
                    }
                }
            }
        }

        if !t_best.is_finite() {
            // Unblocked improving ray; cannot occur with the slack cap and
            // box in place, so treat as a degenerate solve.
            return None;
        }

        // Apply the step.
        for i in 0..m {
            xb[i] += -dir * tab[i][j] * t_best;
        }

        match leave {
            None => {
                // Bound flip: the entering variable crosses to its other bound.
                status[j] = if dir > 0.0 {
                    VarStatus::AtUpper
                } else {
                    VarStatus::AtLower
                };
            }
            Some((rr, hit)) => {
                let leaving = basis[rr];
                status[leaving] = hit;
                status[j] = VarStatus::Basic;
                basis[rr] = j;
                xb[rr] = if dir > 0.0 { t_best } else { upper[j] - t_best };
                if leaving == r_col {
                    r_row = None;
                }
                if j == r_col {
                    r_row = Some(rr);
                }

                // Pivot the tableau on (rr, j).
                let piv = tab[rr][j];
                if piv.abs() <= PIVOT_TOL {
                    return None;
                }
                let inv = 1.0 / piv;
                for v in tab[rr].iter_mut() {
                    *v *= inv;
                }
                let pivot_row = tab[rr].clone();
                for (i, row) in tab.iter_mut().enumerate() {
                    if i == rr {
                        continue;
                    }
                    let factor = row[j];
                    if factor != 0.0 {
                        for (v, pv) in row.iter_mut().zip(&pivot_row) {
                            *v -= factor * pv;
                        }
                    }
                }
            }
        }
    }

    None
}

struct SimplexState<'a> {
    basis: &'a [usize],
    status: &'a [VarStatus],
    xb: &'a [f64],
    upper: &'a [f64],
    dim: usize,
    r_value: f64,
    optimal: bool,
}

fn extract(state: SimplexState<'_>) -> SimplexOutcome {
    let n_struct = 2 * state.dim + 1;
    let mut values = vec![0.0; n_struct];
    for (row, &var) in state.basis.iter().enumerate() {
        if var < n_struct {
            values[var] = state.xb[row];
        }
    }
    for (j, value) in values.iter_mut().enumerate() {
        if state.status[j] == VarStatus::AtUpper {
            *value = state.upper[j];
        }
    }
    let beta: Vec<f64> = (0..state.dim)
        .map(|j| values[j] - values[state.dim + j])
        .collect();
    SimplexOutcome {
        beta,
        r_value: state.r_value,
        optimal: state.optimal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plus(row: &[f64]) -> SignedConstraint {
        SignedConstraint::new(row.to_vec(), Sign::Plus).unwrap()
    }

    fn minus(row: &[f64]) -> SignedConstraint {
        SignedConstraint::new(row.to_vec(), Sign::Minus).unwrap()
    }

    #[test]
    fn single_half_space_reaches_the_slack_cap() {
        let res = solve_feasibility(&[plus(&[1.0, 1.0])], DEFAULT_BOX_BOUND).unwrap();
        assert_eq!(res.status, FeasibilityStatus::Feasible);
        assert!((res.r_star - 1.0).abs() < 1e-9, "r_star = {}", res.r_star);
    }

    #[test]
    fn antipodal_pair_is_infeasible() {
        let res = solve_feasibility(
            &[plus(&[1.0, 1.0]), minus(&[1.0, 1.0])],
            DEFAULT_BOX_BOUND,
        )
        .unwrap();
        assert_eq!(res.status, FeasibilityStatus::Infeasible);
        assert!(res.r_star <= FEASIBILITY_EPS);
    }

    #[test]
    fn three_half_spaces_witness_substitutes_back() {
        let cons = vec![
            plus(&[1.0, 0.0, 0.0]),
            plus(&[1.0, 1.0, 0.0]),
            plus(&[1.0, 0.0, 1.0]),
        ];
        let res = solve_feasibility(&cons, DEFAULT_BOX_BOUND).unwrap();
        assert_eq!(res.status, FeasibilityStatus::Feasible);
        for c in &cons {
            assert!(
                c.slack(&res.witness) >= res.r_star - 1e-8,
                "slack {} below r_star {}",
                c.slack(&res.witness),
                res.r_star
            );
        }
    }

    /// Random systems: whenever a sampled direction proves the system
    /// feasible, the solver must agree (no feasible system declared
    /// infeasible), and feasible witnesses must carry strict slack.
    #[test]
    fn completeness_against_sampling_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n_dirs = 1_000_000;
        for case in 0..50 {
            let j = 1 + case % 3; // covariate dimension 1..=3
            let dim = j + 1;
            let m = 2 + case % 5; // up to 6 constraints
            let cons: Vec<SignedConstraint> = (0..m)
                .map(|_| {
                    let row: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
                    SignedConstraint::new(row, sign)
                })
                .collect::<Result<_>>()
                .unwrap();

            let mut oracle_best = f64::NEG_INFINITY;
            let mut dir = vec![0.0; dim];
            for _ in 0..n_dirs {
                for d in dir.iter_mut() {
                    *d = rng.gen_range(-1.0..1.0);
                }
                let norm: f64 = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm < 1e-6 {
                    continue;
                }
                let mut worst = f64::INFINITY;
                for c in &cons {
                    let s = c.slack(&dir) / norm;
                    if s < worst {
                        worst = s;
                        if worst <= oracle_best {
                            break;
                        }
                    }
                }
                oracle_best = oracle_best.max(worst);
            }

            let res = solve_feasibility(&cons, DEFAULT_BOX_BOUND).unwrap();
            if oracle_best > 1e-4 {
                assert_eq!(
                    res.status,
                    FeasibilityStatus::Feasible,
                    "case {case}: oracle found slack {oracle_best} but solver says infeasible"
                );
            }
            if res.status == FeasibilityStatus::Feasible {
                let worst = cons
                    .iter()
                    .map(|c| c.slack(&res.witness))
                    .fold(f64::INFINITY, f64::min);
                assert!(worst >= FEASIBILITY_EPS / 2.0, "case {case}: slack {worst}");
                assert!(worst >= res.r_star - 1e-8);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Scaling every row (and norm) by a common positive constant leaves
        /// the status and maximal slack unchanged.
        #[test]
        fn scale_invariance(
            rows in proptest::collection::vec(
                proptest::collection::vec(-2.0f64..2.0, 3),
                1..5,
            ),
            signs in proptest::collection::vec(any::<bool>(), 5),
            scale in 0.1f64..10.0,
        ) {
            let mut base = Vec::new();
            let mut scaled = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                if row.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-3 {
                    return Ok(());
                }
                let sign = if signs[i % signs.len()] { Sign::Plus } else { Sign::Minus };
                base.push(SignedConstraint::new(row.clone(), sign).unwrap());
                scaled.push(
                    SignedConstraint::new(row.iter().map(|v| v * scale).collect(), sign).unwrap(),
                );
            }
            let a = solve_feasibility(&base, DEFAULT_BOX_BOUND).unwrap();
            let b = solve_feasibility(&scaled, DEFAULT_BOX_BOUND).unwrap();
            prop_assert_eq!(a.status, b.status);
            if a.status == FeasibilityStatus::Feasible {
                prop_assert!((a.r_star - b.r_star).abs() < 1e-6,
                    "r {} vs {}", a.r_star, b.r_star);
            }
        }

        /// Feasible results always substitute back with strict slack.
        #[test]
        fn soundness_of_witnesses(
            rows in proptest::collection::vec(
                proptest::collection::vec(-2.0f64..2.0, 2..5),
                1..7,
            ),
            signs in proptest::collection::vec(any::<bool>(), 7),
        ) {
            let dim = rows[0].len();
            let mut cons = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                if row.len() != dim || row.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-3 {
                    return Ok(());
                }
                let sign = if signs[i % signs.len()] { Sign::Plus } else { Sign::Minus };
                cons.push(SignedConstraint::new(row.clone(), sign).unwrap());
            }
            let res = solve_feasibility(&cons, DEFAULT_BOX_BOUND).unwrap();
            if res.status == FeasibilityStatus::Feasible {
                for c in &cons {
                    prop_assert!(c.slack(&res.witness) >= FEASIBILITY_EPS / 2.0);
                }
            }
        }
    }
}
