//! Incremental cell enumeration for central hyperplane arrangements.
//!
//! Each coarsening-phase covariate vector x contributes the hyperplane
//! `{β : (1, xᵀ)β = 0}` in coefficient space. A cell is a maximal region on
//! which every β classifies all the points identically; it is identified by
//! its sign label, one `+`/`-` per hyperplane. Enumeration proceeds one
//! hyperplane at a time: every surviving label is extended by `+` and by `-`,
//! and an extension is kept exactly when its linear programme ([`crate::lpfeas`])
//! is feasible. Empty cells cannot be divided, so discarded labels never
//! return.
//!
//! Two standard accelerations apply. The parent cell's witness certifies the
//! child on its own side of the new hyperplane, so only the opposite side
//! needs an LP; and each cell carries the small set of rows active at its LP
//! solution, which seeds the child LPs. A final pass re-solves every
//! surviving cell against the full constraint set so the stored witnesses are
//! pseudo-Chebyshev centres.
//!
//! Labels are processed in lexicographic order with `+` before `-`, so
//! catalogs are byte-identical across runs and worker counts.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{CovariateVector, Expert};
use crate::error::{Error, Result};
use crate::lpfeas::{
    solve_refs, FeasibilityStatus, Sign, SignedConstraint, SolveOptions, DEFAULT_BOX_BOUND,
};

/// Slack (normalised by the row norm) above which a parent witness certifies
/// the child cell on its own side without an LP.
const INHERIT_TOL: f64 = 1e-6;

/// Probe LPs stop once this much slack is certified; the final pass recomputes
/// exact pseudo-Chebyshev witnesses.
const PROBE_TARGET: f64 = 1e-3;

/// Rows equal after unit-norm sign normalisation are merged when every
/// component agrees within this tolerance.
const DEDUP_TOL: f64 = 1e-12;

/// Maximum number of distinct signed partitions of `t` points in R^{J+1}
/// induced by hyperplanes through the origin: `2·Σ_{j<=J} C(t−1, j)`.
///
/// Exact integer arithmetic; errors on overflow of the 128-bit accumulator.
pub fn harding(t: u64, j: u32) -> Result<u128> {
    if t < 2 {
        return Err(Error::InvalidParameter(format!(
            "harding requires t >= 2, got {t}"
        )));
    }
    let mut sum: u128 = 0;
    for jj in 0..=u64::from(j) {
        sum = sum
            .checked_add(binomial(t - 1, jj)?)
            .ok_or(Error::Overflow { what: "harding" })?;
    }
    sum.checked_mul(2).ok_or(Error::Overflow { what: "harding" })
}

fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut res: u128 = 1;
    for i in 1..=k {
        res = res
            .checked_mul(u128::from(n - k + i))
            .ok_or(Error::Overflow { what: "binomial" })?;
        res /= u128::from(i);
    }
    Ok(res)
}

/// Natural log of the Harding number, with a floating-point fallback when the
/// exact value overflows 128 bits.
pub fn ln_harding(t: u64, j: u32) -> Result<f64> {
    match harding(t, j) {
        Ok(h) => Ok((h as f64).ln()),
        Err(Error::Overflow { .. }) => {
            let n = (t - 1) as f64;
            let mut term = 1.0f64;
            let mut sum = 1.0f64;
            for jj in 0..f64::from(j) as u64 {
                let jj = jj as f64;
                term *= (n - jj) / (jj + 1.0);
                sum += term;
            }
            let val = (2.0 * sum).ln();
            if val.is_finite() {
                Ok(val)
            } else {
                Err(Error::Overflow { what: "ln_harding" })
            }
        }
        Err(e) => Err(e),
    }
}

/// A cell's sign label, one entry per deduplicated hyperplane in insertion
/// order. Ordering is lexicographic with `+` before `-`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellLabel(pub Vec<Sign>);

impl CellLabel {
    pub fn flipped(&self) -> CellLabel {
        CellLabel(self.0.iter().map(|s| s.flip()).collect())
    }

    pub fn parse(s: &str) -> Result<CellLabel> {
        s.chars().map(Sign::from_char).collect::<Result<Vec<_>>>().map(CellLabel)
    }
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// One enumerated cell: its label and an interior coefficient vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogCell {
    pub label: CellLabel,
    pub witness: Vec<f64>,
}

/// The full output of enumeration over a point set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellCatalog {
    pub cells: Vec<CatalogCell>,
    /// Deduplicated augmented rows (1, xᵀ), in first-occurrence order.
    pub hyperplanes: Vec<Vec<f64>>,
    /// Original point index → hyperplane index.
    pub dedup_map: Vec<usize>,
}

impl CellCatalog {
    /// One LES expert per cell plus a uniformly randomising expert.
    pub fn experts(&self) -> Vec<Expert> {
        let mut experts: Vec<Expert> = self
            .cells
            .iter()
            .map(|c| Expert::LesRule(c.witness.clone()))
            .collect();
        experts.push(Expert::UniformRandom);
        experts
    }

    /// Writes the cells as CSV: `label,beta_0..beta_J`.
    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let dim = self.hyperplanes.first().map_or(0, Vec::len);
        let mut header = vec!["label".to_string()];
        header.extend((0..dim).map(|i| format!("beta_{i}")));
        w.write_record(&header)?;
        for cell in &self.cells {
            let mut record = vec![cell.label.to_string()];
            record.extend(cell.witness.iter().map(|v| format!("{v}")));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes the JSON sidecar holding the hyperplane rows and dedup map.
    pub fn write_sidecar<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            hyperplanes: &'a Vec<Vec<f64>>,
            dedup_map: &'a Vec<usize>,
        }
        let file = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(
            file,
            &Sidecar {
                hyperplanes: &self.hyperplanes,
                dedup_map: &self.dedup_map,
            },
        )?;
        Ok(())
    }

    /// Reads a catalog back from its CSV and JSON sidecar.
    pub fn read<P: AsRef<Path>>(csv_path: P, sidecar_path: P) -> Result<CellCatalog> {
        #[derive(Deserialize)]
        struct Sidecar {
            hyperplanes: Vec<Vec<f64>>,
            dedup_map: Vec<usize>,
        }
        let sidecar: Sidecar = serde_json::from_reader(BufReader::new(File::open(sidecar_path)?))?;
        let mut reader = csv::Reader::from_path(csv_path)?;
        let mut cells = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let label = CellLabel::parse(record.get(0).ok_or(Error::Malformed {
                row: i + 1,
                message: "missing label column".to_string(),
            })?)?;
            let witness = record
                .iter()
                .skip(1)
                .map(|v| {
                    v.parse::<f64>().map_err(|e| Error::Malformed {
                        row: i + 1,
                        message: format!("bad witness entry: {e}"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            cells.push(CatalogCell { label, witness });
        }
        Ok(CellCatalog {
            cells,
            hyperplanes: sidecar.hyperplanes,
            dedup_map: sidecar.dedup_map,
        })
    }
}

/// Tuning knobs for enumeration.
#[derive(Debug, Clone)]
pub struct EnumerationOptions {
    pub box_bound: f64,
    /// Frontier size beyond which labels are streamed to temporary files.
    pub spill_threshold: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            box_bound: DEFAULT_BOX_BOUND,
            spill_threshold: 1_000_000,
        }
    }
}

/// Enumerates the cells of the arrangement spanned by `points`.
pub fn enumerate_cells(points: &[CovariateVector], j: usize) -> Result<CellCatalog> {
    enumerate_cells_with(points, j, &EnumerationOptions::default())
}

pub fn enumerate_cells_with(
    points: &[CovariateVector],
    j: usize,
    options: &EnumerationOptions,
) -> Result<CellCatalog> {
    if points.is_empty() {
        return Err(Error::Empty { what: "point set" });
    }
    if j == 0 {
        return Err(Error::InvalidParameter(
            "covariate dimension must be at least one".to_string(),
        ));
    }
    for x in points {
        if x.dim() != j {
            return Err(Error::DimensionMismatch {
                expected: j,
                actual: x.dim(),
            });
        }
    }

    let (hyperplanes, dedup_map) = dedup_hyperplanes(points);
    // Both sign variants of every hyperplane's constraint, built once.
    let pairs: Vec<(SignedConstraint, SignedConstraint)> = hyperplanes
        .iter()
        .map(|row| {
            Ok((
                SignedConstraint::new(row.clone(), Sign::Plus)?,
                SignedConstraint::new(row.clone(), Sign::Minus)?,
            ))
        })
        .collect::<Result<_>>()?;

    let mut frontier = CellStore::new(options.spill_threshold);
    for sign in [Sign::Plus, Sign::Minus] {
        let cons = [constraint_for(&pairs, 0, sign)];
        let opts = SolveOptions {
            box_bound: options.box_bound,
            stop_above: Some(PROBE_TARGET),
            seed_support: vec![0],
        };
        let (res, support) = solve_refs(&cons, &opts)?;
        match res.status {
            FeasibilityStatus::Feasible => frontier.push(WorkCell {
                label: vec![sign],
                witness: res.witness,
                support: support.into_iter().map(|s| s as u32).collect(),
            })?,
            FeasibilityStatus::Infeasible => {}
            FeasibilityStatus::Degenerate => {
                log::warn!("degenerate LP for label {}", label_string(&[sign]));
            }
        }
    }

    for h in 1..hyperplanes.len() {
        let mut next = CellStore::new(options.spill_threshold);
        let prev = std::mem::replace(&mut frontier, CellStore::new(options.spill_threshold));
        prev.for_each_chunk(|chunk| {
            let extended: Vec<Result<Vec<WorkCell>>> = chunk
                .par_iter()
                .map(|cell| extend_cell(cell, h, &pairs, options))
                .collect();
            for cells in extended {
                for cell in cells? {
                    next.push(cell)?;
                }
            }
            Ok(())
        })?;
        frontier = next;
    }

    // Final pass: recompute each witness against the full constraint set.
    let mut cells: Vec<CatalogCell> = Vec::with_capacity(frontier.len());
    frontier.for_each_chunk(|chunk| {
        let solved: Vec<CatalogCell> = chunk
            .par_iter()
            .map(|cell| {
                let cons: Vec<&SignedConstraint> = cell
                    .label
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| constraint_for(&pairs, i, s))
                    .collect();
                let opts = SolveOptions {
                    box_bound: options.box_bound,
                    stop_above: None,
                    seed_support: cell.support.iter().map(|&s| s as usize).collect(),
                };
                match solve_refs(&cons, &opts) {
                    Ok((res, _)) if res.status == FeasibilityStatus::Feasible => CatalogCell {
                        label: CellLabel(cell.label.clone()),
                        witness: res.witness,
                    },
                    other => {
                        log::warn!(
                            "final witness solve for label {} did not converge ({:?}); \
                             keeping the enumeration witness",
                            label_string(&cell.label),
                            other.map(|(r, _)| r.status)
                        );
                        CatalogCell {
                            label: CellLabel(cell.label.clone()),
                            witness: cell.witness.clone(),
                        }
                    }
                }
            })
            .collect();
        cells.extend(solved);
        Ok(())
    })?;

    debug_assert!(cells.windows(2).all(|w| w[0].label < w[1].label));
    Ok(CellCatalog {
        cells,
        hyperplanes,
        dedup_map,
    })
}

/// Coarsens the linear eligibility-score class on `points`: one LES expert
/// per cell plus a uniformly randomising expert.
pub fn coarsen_les(points: &[CovariateVector], j: usize) -> Result<Vec<Expert>> {
    Ok(enumerate_cells(points, j)?.experts())
}

fn constraint_for(
    pairs: &[(SignedConstraint, SignedConstraint)],
    index: usize,
    sign: Sign,
) -> &SignedConstraint {
    match sign {
        Sign::Plus => &pairs[index].0,
        Sign::Minus => &pairs[index].1,
    }
}

fn label_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.as_char()).collect()
}

/// Extends one cell across hyperplane `h`, keeping the feasible children in
/// `+`-before-`-` order.
fn extend_cell(
    cell: &WorkCell,
    h: usize,
    pairs: &[(SignedConstraint, SignedConstraint)],
    options: &EnumerationOptions,
) -> Result<Vec<WorkCell>> {
    let row = &pairs[h].0.row;
    let norm = pairs[h].0.norm;
    let dot: f64 = row.iter().zip(&cell.witness).map(|(a, b)| a * b).sum();
    let slack = dot / norm;

    let mut out = Vec::with_capacity(2);
    for sign in [Sign::Plus, Sign::Minus] {
        let witness_side = match sign {
            Sign::Plus => slack > INHERIT_TOL,
            Sign::Minus => slack < -INHERIT_TOL,
        };
        let mut label = Vec::with_capacity(cell.label.len() + 1);
        label.extend_from_slice(&cell.label);
        label.push(sign);

        if witness_side {
            // The parent witness lies strictly inside this child.
            out.push(WorkCell {
                label,
                witness: cell.witness.clone(),
                support: cell.support.clone(),
            });
            continue;
        }

        let cons: Vec<&SignedConstraint> = label
            .iter()
            .enumerate()
            .map(|(i, &s)| constraint_for(pairs, i, s))
            .collect();
        let mut seed: Vec<usize> = cell.support.iter().map(|&s| s as usize).collect();
        seed.push(h);
        let opts = SolveOptions {
            box_bound: options.box_bound,
            stop_above: Some(PROBE_TARGET),
            seed_support: seed,
        };
        let (res, support) = solve_refs(&cons, &opts)?;
        match res.status {
            FeasibilityStatus::Feasible => out.push(WorkCell {
                label,
                witness: res.witness,
                support: support.into_iter().map(|s| s as u32).collect(),
            }),
            FeasibilityStatus::Infeasible => {}
            FeasibilityStatus::Degenerate => {
                log::warn!("degenerate LP for label {}", label_string(&label));
            }
        }
    }
    Ok(out)
}

/// Merges proportional augmented rows. Rows are compared after scaling to
/// unit norm with the first nonzero component positive; the stored
/// representative is the raw first occurrence.
fn dedup_hyperplanes(points: &[CovariateVector]) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut hyperplanes: Vec<Vec<f64>> = Vec::new();
    let mut normalized: Vec<Vec<f64>> = Vec::new();
    let mut dedup_map = Vec::with_capacity(points.len());

    for x in points {
        let row = x.augmented();
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut unit: Vec<f64> = row.iter().map(|v| v / norm).collect();
        if let Some(first) = unit.iter().find(|v| v.abs() > 0.0) {
            if *first < 0.0 {
                for v in unit.iter_mut() {
                    *v = -*v;
                }
            }
        }
        let found = normalized
            .iter()
            .position(|u| u.iter().zip(&unit).all(|(a, b)| (a - b).abs() <= DEDUP_TOL));
        match found {
            Some(idx) => dedup_map.push(idx),
            None => {
                dedup_map.push(hyperplanes.len());
                hyperplanes.push(row);
                normalized.push(unit);
            }
        }
    }
    (hyperplanes, dedup_map)
}

/// Frontier cell during enumeration: label, interior witness, and the row
/// indices active at its LP solution (the warm-start seed for children).
#[derive(Debug, Clone, Serialize, Deserialize)]
struct WorkCell {
    label: Vec<Sign>,
    witness: Vec<f64>,
    support: Vec<u32>,
}

/// An ordered store of frontier cells that spills to temporary files once the
/// in-memory buffer exceeds the configured threshold.
struct CellStore {
    threshold: usize,
    buffer: Vec<WorkCell>,
    chunks: Vec<PathBuf>,
    dir: Option<tempfile::TempDir>,
    len: usize,
}

impl CellStore {
    fn new(threshold: usize) -> Self {
        Self {
            threshold: threshold.max(1),
            buffer: Vec::new(),
            chunks: Vec::new(),
            dir: None,
            len: 0,
        }
    }

    fn len(&self) -> usize {
        self.len
    }

    fn push(&mut self, cell: WorkCell) -> Result<()> {
        self.buffer.push(cell);
        self.len += 1;
        if self.buffer.len() >= self.threshold {
            self.spill()?;
        }
        Ok(())
    }

    fn spill(&mut self) -> Result<()> {
        if self.dir.is_none() {
            self.dir = Some(tempfile::tempdir()?);
        }
        let dir = self.dir.as_ref().expect("spill dir just created");
        let path = dir.path().join(format!("chunk_{:06}.json", self.chunks.len()));
        let file = BufWriter::new(File::create(&path)?);
        serde_json::to_writer(file, &self.buffer)?;
        self.chunks.push(path);
        self.buffer.clear();
        Ok(())
    }

    /// Consumes the store, yielding cells chunk by chunk in push order.
    fn for_each_chunk<F>(self, mut f: F) -> Result<()>
    where
        F: FnMut(Vec<WorkCell>) -> Result<()>,
    {
        for path in &self.chunks {
            let chunk: Vec<WorkCell> = serde_json::from_reader(BufReader::new(File::open(path)?))?;
            f(chunk)?;
        }
        if !self.buffer.is_empty() {
            f(self.buffer)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn xv(values: &[f64]) -> CovariateVector {
        CovariateVector::new(values.to_vec()).unwrap()
    }

    fn random_points(n: usize, j: usize, seed: u64) -> Vec<CovariateVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| xv(&(0..j).map(|_| rng.gen_range(0.0..1.0)).collect::<Vec<f64>>()))
            .collect()
    }

    /// Exhaustive oracle: try all 2^t sign labels with a full LP each.
    fn brute_force_labels(points: &[CovariateVector]) -> BTreeSet<CellLabel> {
        let rows: Vec<Vec<f64>> = points.iter().map(CovariateVector::augmented).collect();
        let t = rows.len();
        let mut feasible = BTreeSet::new();
        for mask in 0..(1u32 << t) {
            let signs: Vec<Sign> = (0..t)
                .map(|i| if mask & (1 << i) == 0 { Sign::Plus } else { Sign::Minus })
                .collect();
            let cons: Vec<SignedConstraint> = rows
                .iter()
                .zip(&signs)
                .map(|(row, &sign)| SignedConstraint::new(row.clone(), sign).unwrap())
                .collect();
            let res = crate::lpfeas::solve_feasibility(&cons, DEFAULT_BOX_BOUND).unwrap();
            if res.is_feasible() {
                feasible.insert(CellLabel(signs));
            }
        }
        feasible
    }

    #[test]
    fn harding_reference_values() {
        assert_eq!(harding(4, 2).unwrap(), 14);
        assert_eq!(harding(177, 2).unwrap(), 31_154);
        assert_eq!(harding(609, 2).unwrap(), 370_274);
        assert_eq!(harding(6, 2).unwrap(), 32);
        assert_eq!(harding(2, 0).unwrap(), 2);
    }

    #[test]
    fn harding_overflow_is_reported() {
        assert!(matches!(
            harding(400, 180),
            Err(Error::Overflow { .. })
        ));
        // The log-domain fallback still succeeds there.
        assert!(ln_harding(400, 180).unwrap().is_finite());
    }

    #[test]
    fn single_point_gives_two_cells() {
        let catalog = enumerate_cells(&[xv(&[0.3, 0.4])], 2).unwrap();
        let labels: Vec<String> = catalog.cells.iter().map(|c| c.label.to_string()).collect();
        assert_eq!(labels, vec!["+", "-"]);
    }

    #[test]
    fn duplicate_points_are_merged() {
        let p = xv(&[0.3, 0.4]);
        let catalog = enumerate_cells(&[p.clone(), p.clone(), p.clone()], 2).unwrap();
        assert_eq!(catalog.hyperplanes.len(), 1);
        assert_eq!(catalog.dedup_map, vec![0, 0, 0]);
        assert_eq!(catalog.cells.len(), 2);
    }

    #[test]
    fn four_generic_points_give_fourteen_cells() {
        let points = random_points(4, 2, 11);
        let catalog = enumerate_cells(&points, 2).unwrap();
        assert_eq!(catalog.cells.len(), 14);
        // Closed under sign flips.
        let labels: BTreeSet<CellLabel> =
            catalog.cells.iter().map(|c| c.label.clone()).collect();
        for label in &labels {
            assert!(labels.contains(&label.flipped()), "missing mirror of {label}");
        }
    }

    #[test]
    fn six_generic_points_match_harding() {
        let points = random_points(6, 2, 5);
        let catalog = enumerate_cells(&points, 2).unwrap();
        assert_eq!(catalog.cells.len() as u128, harding(6, 2).unwrap());
    }

    #[test]
    fn incremental_matches_brute_force_on_random_sets() {
        for (case, &(t, j)) in [(5usize, 2usize), (7, 2), (6, 3), (4, 1), (8, 3)]
            .iter()
            .enumerate()
        {
            let points = random_points(t, j, 100 + case as u64);
            let catalog = enumerate_cells(&points, j).unwrap();
            let incremental: BTreeSet<CellLabel> =
                catalog.cells.iter().map(|c| c.label.clone()).collect();
            let oracle = brute_force_labels(&points);
            assert_eq!(incremental, oracle, "case {case} (t={t}, j={j})");
        }
    }

    #[test]
    fn witnesses_reproduce_their_labels() {
        let points = random_points(7, 2, 3);
        let catalog = enumerate_cells(&points, 2).unwrap();
        for cell in &catalog.cells {
            for (i, row) in catalog.hyperplanes.iter().enumerate() {
                let dot: f64 = row.iter().zip(&cell.witness).map(|(a, b)| a * b).sum();
                let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                let expected = cell.label.0[i];
                let actual = if dot >= 0.0 { Sign::Plus } else { Sign::Minus };
                assert_eq!(actual, expected, "cell {} row {i}", cell.label);
                assert!(
                    dot.abs() > crate::lpfeas::FEASIBILITY_EPS * norm,
                    "witness sits on hyperplane {i} for cell {}",
                    cell.label
                );
            }
        }
    }

    #[test]
    fn spilled_enumeration_matches_in_memory() {
        let points = random_points(6, 2, 42);
        let in_memory = enumerate_cells(&points, 2).unwrap();
        let spilled = enumerate_cells_with(
            &points,
            2,
            &EnumerationOptions {
                spill_threshold: 3,
                ..EnumerationOptions::default()
            },
        )
        .unwrap();
        assert_eq!(in_memory.cells.len(), spilled.cells.len());
        for (a, b) in in_memory.cells.iter().zip(&spilled.cells) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.witness, b.witness);
        }
    }

    #[test]
    fn coarsen_single_point_gives_three_experts() {
        let experts = coarsen_les(&[xv(&[0.3, 0.4])], 2).unwrap();
        assert_eq!(experts.len(), 3);
        assert!(matches!(experts[2], Expert::UniformRandom));
        // The two LES experts assign the point to different arms.
        let x = xv(&[0.3, 0.4]);
        let a = experts[0].recommend(&x, 2).unwrap();
        let b = experts[1].recommend(&x, 2).unwrap();
        assert_ne!(a.probs, b.probs);
    }

    #[test]
    fn coarsen_four_generic_points_gives_fifteen_experts() {
        let points = random_points(4, 2, 11);
        let experts = coarsen_les(&points, 2).unwrap();
        assert_eq!(experts.len(), 15);
    }

    #[test]
    fn coarsened_assignments_cover_exactly_the_feasible_labels() {
        let points = random_points(5, 2, 9);
        let experts = coarsen_les(&points, 2).unwrap();
        let mut seen = BTreeSet::new();
        for expert in &experts[..experts.len() - 1] {
            let assignment: Vec<Sign> = points
                .iter()
                .map(|x| {
                    let rec = expert.recommend(x, 2).unwrap();
                    if rec.probs[1] == 1.0 { Sign::Plus } else { Sign::Minus }
                })
                .collect();
            assert!(seen.insert(CellLabel(assignment)), "duplicate assignment vector");
        }
        assert_eq!(seen, brute_force_labels(&points));
    }

    #[test]
    fn catalog_roundtrips_through_files() {
        let points = random_points(4, 2, 11);
        let catalog = enumerate_cells(&points, 2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let csv_path = dir.path().join("catalog.csv");
        let json_path = dir.path().join("catalog.json");
        catalog.write_csv(&csv_path).unwrap();
        catalog.write_sidecar(&json_path).unwrap();
        let back = CellCatalog::read(&csv_path, &json_path).unwrap();
        assert_eq!(back.cells.len(), catalog.cells.len());
        assert_eq!(back.hyperplanes, catalog.hyperplanes);
        assert_eq!(back.dedup_map, catalog.dedup_map);
        for (a, b) in catalog.cells.iter().zip(&back.cells) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.witness, b.witness);
        }
    }
}
