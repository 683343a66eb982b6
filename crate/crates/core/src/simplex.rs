//! Dense two-phase primal simplex over exact rationals.
//!
//! All variables are implicitly nonnegative; constraints may be `<=`,
//! `>=`, or `=` with rational coefficients. Pricing is Dantzig's rule
//! with a permanent switch to Bland's rule once a degenerate stall is
//! detected, which guarantees termination.

use crate::ratio::Rat;
use num::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    /// Sparse `(variable, coefficient)` pairs; variables may repeat
    /// (coefficients are accumulated).
    pub coeffs: Vec<(usize, Rat)>,
    pub rel: Rel,
    pub rhs: Rat,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Maximized objective, sparse.
    pub objective: Vec<(usize, Rat)>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// Degenerate-pivot streak after which pricing falls back to Bland's rule.
const STALL_LIMIT: usize = 40;

struct Tableau {
    /// `rows[r]` has `ncols` coefficient entries followed by the rhs.
    rows: Vec<Vec<Rat>>,
    cost: Vec<Rat>,
    basis: Vec<usize>,
    ncols: usize,
    bland: bool,
    degenerate_streak: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let pivot_val = self.rows[r][c].clone();
        debug_assert!(!pivot_val.is_zero());
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &pivot_val;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    row[j] -= &factor * pv;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let factor = self.cost[c].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    self.cost[j] -= &factor * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes the current cost row. Returns false on unboundedness.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let entering = if self.bland {
                (0..self.ncols).find(|&j| allowed(j) && self.cost[j].is_negative())
            } else {
                let mut best: Option<(usize, &Rat)> = None;
                for j in 0..self.ncols {
                    if allowed(j)
                        && self.cost[j].is_negative()
                        && best.is_none_or(|(_, bv)| self.cost[j] < *bv)
                    {
                        best = Some((j, &self.cost[j]));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(c) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][c].is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / &self.rows[r][c];
                let better = match &leaving {
                    None => true,
                    Some((lr, lv)) => {
                        ratio < *lv || (ratio == *lv && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            let Some((r, ratio)) = leaving else {
                return false;
            };
            if ratio.is_zero() {
                self.degenerate_streak += 1;
                if self.degenerate_streak > STALL_LIMIT {
                    self.bland = true;
                }
            } else {
                self.degenerate_streak = 0;
            }
            self.pivot(r, c);
        }
    }
}

pub fn solve(lp: &LinearProgram) -> LpOutcome {
    // Normalize: accumulate duplicate coefficients, force rhs >= 0, and
    // rewrite `>= 0` rows as `<= 0` so they need no artificial variable.
    let mut norm: Vec<(Vec<Rat>, Rel, Rat)> = Vec::with_capacity(lp.constraints.len());
    for con in &lp.constraints {
        let mut dense = vec![Rat::zero(); lp.num_vars];
        for (v, coef) in &con.coeffs {
            assert!(*v < lp.num_vars, "constraint references unknown variable");
            dense[*v] += coef;
        }
        let mut rel = con.rel;
        let mut rhs = con.rhs.clone();
        if rhs.is_negative() {
            for d in dense.iter_mut() {
                *d = -d.clone();
            }
            rhs = -rhs;
            rel = match rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
        }
        if rel == Rel::Ge && rhs.is_zero() {
            for d in dense.iter_mut() {
                *d = -d.clone();
            }
            rel = Rel::Le;
        }
        norm.push((dense, rel, rhs));
    }

    let n_slack = norm
        .iter()
        .filter(|(_, rel, _)| matches!(rel, Rel::Le | Rel::Ge))
        .count();
    let n_art = norm
        .iter()
        .filter(|(_, rel, _)| matches!(rel, Rel::Ge | Rel::Eq))
        .count();
    let ncols = lp.num_vars + n_slack + n_art;
    let art_start = lp.num_vars + n_slack;

    let mut rows = Vec::with_capacity(norm.len());
    let mut basis = Vec::with_capacity(norm.len());
    let mut next_slack = lp.num_vars;
    let mut next_art = art_start;
    for (dense, rel, rhs) in norm {
        let mut row = vec![Rat::zero(); ncols + 1];
        row[..lp.num_vars].clone_from_slice(&dense);
        row[ncols] = rhs;
        match rel {
            Rel::Le => {
                row[next_slack] = Rat::from_integer(1.into());
                basis.push(next_slack);
                next_slack += 1;
            }
            Rel::Ge => {
                row[next_slack] = Rat::from_integer((-1).into());
                next_slack += 1;
                row[next_art] = Rat::from_integer(1.into());
                basis.push(next_art);
                next_art += 1;
            }
            Rel::Eq => {
                row[next_art] = Rat::from_integer(1.into());
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        cost: vec![Rat::zero(); ncols + 1],
        basis,
        ncols,
        bland: false,
        degenerate_streak: 0,
    };

    // Phase 1: minimize the sum of artificials. Price out the rows whose
    // basic variable is artificial.
    if n_art > 0 {
        for j in art_start..ncols {
            t.cost[j] = Rat::from_integer(1.into());
        }
        for r in 0..t.rows.len() {
            if t.basis[r] >= art_start {
                let row = t.rows[r].clone();
                for (j, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        t.cost[j] -= v;
                    }
                }
            }
        }
        let bounded = t.run(&|_| true);
        debug_assert!(bounded, "phase 1 is bounded below by zero");
        // cost rhs = -(current phase-1 objective)
        if t.cost[t.ncols].is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive any zero-level artificial out of the basis.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art_start {
                match (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        // Redundant constraint.
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2: minimize the negated objective over non-artificial columns.
    t.cost = vec![Rat::zero(); ncols + 1];
    for (v, coef) in &lp.objective {
        t.cost[*v] -= coef;
    }
    for r in 0..t.rows.len() {
        let b = t.basis[r];
        if !t.cost[b].is_zero() {
            let factor = t.cost[b].clone();
            let row = t.rows[r].clone();
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    t.cost[j] -= &factor * v;
                }
            }
        }
    }
    t.bland = false;
    t.degenerate_streak = 0;
    let allowed = |j: usize| j < art_start;
    if !t.run(&allowed) {
        return LpOutcome::Unbounded;
    }

    let mut point = vec![Rat::zero(); lp.num_vars];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < lp.num_vars {
            point[b] = t.rhs(r).clone();
        }
    }
    let value = lp.objective.iter().map(|(v, coef)| coef * &point[*v]).sum();
    LpOutcome::Optimal { value, point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rat_int};

    fn c(coeffs: Vec<(usize, i64)>, rel: Rel, rhs: (i64, i64)) -> Constraint {
        Constraint {
            coeffs: coeffs.into_iter().map(|(v, k)| (v, rat_int(k))).collect(),
            rel,
            rhs: rat(rhs.0, rhs.1),
        }
    }

    #[test]
    fn small_optimum() {
        // max x + y st x + 2y <= 4, x <= 3 -> x = 3, y = 1/2.
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![(0, rat_int(1)), (1, rat_int(1))],
            constraints: vec![
                c(vec![(0, 1), (1, 2)], Rel::Le, (4, 1)),
                c(vec![(0, 1)], Rel::Le, (3, 1)),
            ],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(7, 2));
                assert_eq!(point, vec![rat_int(3), rat(1, 2)]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn equality_and_ge() {
        // max 2x + 3y st x + y = 5, x >= 2 -> x = 2, y = 3, value 13.
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![(0, rat_int(2)), (1, rat_int(3))],
            constraints: vec![
                c(vec![(0, 1), (1, 1)], Rel::Eq, (5, 1)),
                c(vec![(0, 1)], Rel::Ge, (2, 1)),
            ],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat_int(13));
                assert_eq!(point, vec![rat_int(2), rat_int(3)]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        // x <= 1, x >= 2.
        let lp = LinearProgram {
            num_vars: 1,
            objective: vec![(0, rat_int(1))],
            constraints: vec![
                c(vec![(0, 1)], Rel::Le, (1, 1)),
                c(vec![(0, 1)], Rel::Ge, (2, 1)),
            ],
        };
        assert_eq!(solve(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![(0, rat_int(1))],
            constraints: vec![c(vec![(0, 1), (1, -1)], Rel::Le, (1, 1))],
        };
        assert_eq!(solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_normalization() {
        // -x <= -2 means x >= 2; max -x -> x = 2, value -2.
        let lp = LinearProgram {
            num_vars: 1,
            objective: vec![(0, rat_int(-1))],
            constraints: vec![c(vec![(0, -1)], Rel::Le, (-2, 1))],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(-2)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn homogeneous_ge_rows() {
        // max y st y <= x (as y - x >= 0 flipped), x <= 1.
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![(1, rat_int(1))],
            constraints: vec![
                c(vec![(0, 1), (1, -1)], Rel::Ge, (0, 1)),
                c(vec![(0, 1)], Rel::Le, (1, 1)),
            ],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(1)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Klee-Minty-ish degeneracy: several redundant constraints at origin.
        let lp = LinearProgram {
            num_vars: 3,
            objective: vec![(0, rat_int(1)), (1, rat_int(1)), (2, rat_int(1))],
            constraints: vec![
                c(vec![(0, 1), (1, 1)], Rel::Le, (0, 1)),
                c(vec![(1, 1), (2, 1)], Rel::Le, (0, 1)),
                c(vec![(0, 1), (2, 1)], Rel::Le, (0, 1)),
                c(vec![(0, 1), (1, 1), (2, 1)], Rel::Le, (0, 1)),
            ],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(0)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_coefficients_accumulate() {
        // max x st x + x <= 4 -> x = 2.
        let lp = LinearProgram {
            num_vars: 1,
            objective: vec![(0, rat_int(1))],
            constraints: vec![c(vec![(0, 1), (0, 1)], Rel::Le, (4, 1))],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(2)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }
}
