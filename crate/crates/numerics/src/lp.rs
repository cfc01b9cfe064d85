//! Dense two-phase primal simplex for conic feasibility `Σ wᵢ gᵢ = t, w ≥ 0`.

use crate::{NumericsError, Result};

const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;
const DEGENERATE_LIMIT: usize = 64;

/// Result of [`solve_conic_lp`].
#[derive(Debug, Clone, PartialEq)]
pub enum ConicLpOutcome {
    /// Nonnegative weights, one per generator, with `‖Σ wᵢ gᵢ − t‖₂ = residual`.
    Feasible { weights: Vec<f64>, residual: f64 },
    /// Unit-norm `y` with `⟨y, gᵢ⟩ ≥ 0` (up to round-off) and `⟨y, t⟩ = −margin`.
    Infeasible { farkas: Vec<f64>, margin: f64 },
}

impl ConicLpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ConicLpOutcome::Feasible { .. })
    }
}

/// Decides whether `target` lies in the cone generated by `generators`.
///
/// Columns and target are normalized to unit length before pivoting. The
/// problem is declared feasible when the phase-1 basic solution
/// reproduces the unscaled target within `tol`. Among feasible weight
/// vectors, phase 2 returns one minimizing the sum of normalized weights.
/// Pivot choices are deterministic, so the output is a function of the
/// input alone.
pub fn solve_conic_lp(generators: &[Vec<f64>], target: &[f64], tol: f64) -> Result<ConicLpOutcome> {
    let d = target.len();
    if generators.is_empty() {
        return Err(NumericsError::DimensionMismatch { expected: 1, found: 0 });
    }
    for g in generators {
        if g.len() != d {
            return Err(NumericsError::DimensionMismatch { expected: d, found: g.len() });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(NumericsError::NonFinite);
        }
    }
    if target.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFinite);
    }
    let count = generators.len();
    let target_norm = norm(target);
    if target_norm <= tol {
        return Ok(ConicLpOutcome::Feasible { weights: vec![0.0; count], residual: target_norm });
    }
    let col_norms: Vec<f64> = generators.iter().map(|g| norm(g)).collect();

    let mut tableau = Tableau::new(generators, &col_norms, target, target_norm);
    tableau.run()?;
    let scaled = tableau.structural_solution(count);
    let weights = unscale(&scaled, &col_norms, target_norm);
    let residual = residual(generators, &weights, target);

    if residual <= tol {
        tableau.drive_out_artificials(count);
        tableau.set_phase_two_costs(count);
        tableau.run()?;
        let scaled = tableau.structural_solution(count);
        let phase_two = unscale(&scaled, &col_norms, target_norm);
        let r2 = self::residual(generators, &phase_two, target);
        let (weights, residual) = if r2 <= tol { (phase_two, r2) } else { (weights, residual) };
        return Ok(ConicLpOutcome::Feasible { weights, residual });
    }

    let pi = tableau.phase_one_duals(count);
    let mut farkas: Vec<f64> = pi.iter().zip(&tableau.signs).map(|(p, s)| -p * s).collect();
    let n = norm(&farkas);
    if n > 0.0 {
        farkas.iter_mut().for_each(|v| *v /= n);
    }
    let margin = -dot(&farkas, target);
    Ok(ConicLpOutcome::Infeasible { farkas, margin })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unscale(scaled: &[f64], col_norms: &[f64], target_norm: f64) -> Vec<f64> {
    scaled
        .iter()
        .zip(col_norms)
        .map(|(w, n)| if *n > 0.0 { (w * target_norm / n).max(0.0) } else { 0.0 })
        .collect()
}

fn residual(generators: &[Vec<f64>], weights: &[f64], target: &[f64]) -> f64 {
    let mut r: Vec<f64> = target.iter().map(|t| -t).collect();
    for (g, w) in generators.iter().zip(weights) {
        if *w != 0.0 {
            for (ri, gi) in r.iter_mut().zip(g) {
                *ri += w * gi;
            }
        }
    }
    norm(&r)
}

/// Row-major tableau `[A | I | b]` with the cost row kept separately.
struct Tableau {
    rows: usize,
    /// structural + artificial columns
    cols: usize,
    a: Vec<f64>,
    rhs: Vec<f64>,
    costs: Vec<f64>,
    /// reduced costs of the current basis
    reduced: Vec<f64>,
    basis: Vec<usize>,
    /// `±1` row flips applied so that `rhs ≥ 0`
    signs: Vec<f64>,
    blocked: Vec<bool>,
}

impl Tableau {
    fn new(generators: &[Vec<f64>], col_norms: &[f64], target: &[f64], target_norm: f64) -> Self {
        let rows = target.len();
        let count = generators.len();
        let cols = count + rows;
        let mut a = vec![0.0; rows * cols];
        let mut rhs = vec![0.0; rows];
        let mut signs = vec![1.0; rows];
        for i in 0..rows {
            let b = target[i] / target_norm;
            let s = if b < 0.0 { -1.0 } else { 1.0 };
            signs[i] = s;
            rhs[i] = s * b;
            for (j, g) in generators.iter().enumerate() {
                if col_norms[j] > 0.0 {
                    a[i * cols + j] = s * g[i] / col_norms[j];
                }
            }
            a[i * cols + count + i] = 1.0;
        }
        let mut costs = vec![0.0; cols];
        costs[count..].iter_mut().for_each(|c| *c = 1.0);
        let basis = (count..cols).collect();
        let mut t = Tableau {
            rows,
            cols,
            a,
            rhs,
            costs,
            reduced: vec![0.0; cols],
            basis,
            signs,
            blocked: vec![false; cols],
        };
        t.recompute_reduced();
        t
    }

    fn recompute_reduced(&mut self) {
        let mut reduced = self.costs.clone();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = self.costs[b];
            if cb != 0.0 {
                let row = &self.a[i * self.cols..(i + 1) * self.cols];
                for (r, v) in reduced.iter_mut().zip(row) {
                    *r -= cb * v;
                }
            }
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let cols = self.cols;
        let p = self.a[row * cols + col];
        for v in &mut self.a[row * cols..(row + 1) * cols] {
            *v /= p;
        }
        self.rhs[row] /= p;
        let pivot_row: Vec<f64> = self.a[row * cols..(row + 1) * cols].to_vec();
        let pivot_rhs = self.rhs[row];
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let f = self.a[i * cols + col];
            if f != 0.0 {
                for (v, pr) in self.a[i * cols..(i + 1) * cols].iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
                self.a[i * cols + col] = 0.0;
                self.rhs[i] -= f * pivot_rhs;
                if self.rhs[i] < 0.0 && self.rhs[i] > -1e-13 {
                    self.rhs[i] = 0.0;
                }
            }
        }
        let f = self.reduced[col];
        if f != 0.0 {
            for (v, pr) in self.reduced.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            self.reduced[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Primal simplex on the current costs; blocked columns never enter.
    ///
    /// The entering column has the most negative reduced cost. After a run
    /// of degenerate pivots the choice falls back to Bland's rule until
    /// the objective moves again, which rules out cycling.
    fn run(&mut self) -> Result<()> {
        let mut degenerate_run = 0usize;
        for _ in 0..MAX_PIVOTS {
            let eligible = |j: &usize| !self.blocked[*j] && self.reduced[*j] < -PIVOT_EPS;
            let entering = if degenerate_run > DEGENERATE_LIMIT {
                (0..self.cols).find(eligible)
            } else {
                (0..self.cols).filter(eligible).min_by(|&x, &y| self.reduced[x].total_cmp(&self.reduced[y]))
            };
            let Some(col) = entering else {
                return Ok(());
            };
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..self.rows {
                let v = self.a[i * self.cols + col];
                if v > PIVOT_EPS {
                    let ratio = self.rhs[i] / v;
                    let better = match best {
                        None => true,
                        Some((r, _, b)) => ratio < r - 1e-15 || (ratio <= r + 1e-15 && self.basis[i] < b),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                Some((ratio, row, _)) => {
                    degenerate_run = if ratio <= 1e-15 { degenerate_run + 1 } else { 0 };
                    self.pivot(row, col);
                }
                // Unbounded direction; cannot occur with nonnegative costs.
                None => return Ok(()),
            }
        }
        Err(NumericsError::NoConvergence { sweeps: MAX_PIVOTS })
    }

    fn structural_solution(&self, count: usize) -> Vec<f64> {
        let mut x = vec![0.0; count];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < count {
                x[b] = self.rhs[i].max(0.0);
            }
        }
        x
    }

    /// Pivots zero-level artificials out of the basis where a structural
    /// column allows it; remaining ones sit on redundant rows.
    fn drive_out_artificials(&mut self, count: usize) {
        for i in 0..self.rows {
            if self.basis[i] < count {
                continue;
            }
            let col = (0..count)
                .filter(|&j| self.a[i * self.cols + j].abs() > 1e-9)
                .max_by(|&x, &y| self.a[i * self.cols + x].abs().total_cmp(&self.a[i * self.cols + y].abs()));
            if let Some(col) = col {
                self.pivot(i, col);
            }
        }
        for j in count..self.cols {
            self.blocked[j] = true;
        }
    }

    fn set_phase_two_costs(&mut self, count: usize) {
        for j in 0..self.cols {
            self.costs[j] = if j < count { 1.0 } else { 0.0 };
        }
        self.recompute_reduced();
    }

    /// Phase-1 simplex multipliers `π`, read off the artificial columns:
    /// reduced cost of artificial `i` equals `1 − πᵢ`.
    fn phase_one_duals(&self, count: usize) -> Vec<f64> {
        (0..self.rows).map(|i| 1.0 - self.reduced[count + i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_generators() {
        let out = solve_conic_lp(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[2.0, 3.0], 1e-9).unwrap();
        match out {
            ConicLpOutcome::Feasible { weights, residual } => {
                assert!((weights[0] - 2.0).abs() < 1e-12);
                assert!((weights[1] - 3.0).abs() < 1e-12);
                assert!(residual < 1e-12);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn single_generator_farkas() {
        let out = solve_conic_lp(&[vec![1.0, 0.0]], &[0.0, 1.0], 1e-9).unwrap();
        match out {
            ConicLpOutcome::Infeasible { farkas, margin } => {
                assert!(farkas[0].abs() < 1e-12);
                assert!((farkas[1] + 1.0).abs() < 1e-12);
                assert!((margin - 1.0).abs() < 1e-12);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            solve_conic_lp(&[vec![1.0]], &[0.0, 1.0], 1e-9),
            Err(NumericsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn phase_two_prefers_short_combination() {
        // target = g0 exactly, or g1 + g2; phase 2 picks the smaller total weight
        let gens = vec![vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        match solve_conic_lp(&gens, &[1.0, 1.0], 1e-9).unwrap() {
            ConicLpOutcome::Feasible { weights, .. } => {
                assert!((weights[0] - 1.0).abs() < 1e-12, "{weights:?}");
            }
            other => panic!("{other:?}"),
        }
    }
}
