//! Exact linear programming over rationals.
//!
//! Two-phase tableau simplex with Bland's rule. All variables are
//! non-negative; upper bounds are expressed as ordinary constraints.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    sense: Sense,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            num_vars,
            sense,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        debug_assert!(coeffs.iter().all(|(v, _)| *v < self.num_vars));
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs; the last slot holds minus the current objective.
    cost: Vec<Rational>,
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let mut normalized: Vec<(Vec<(usize, Rational)>, Relation, Rational)> = Vec::new();
        for c in &lp.constraints {
            if c.rhs.is_negative() {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                let coeffs = c.coeffs.iter().map(|(v, a)| (*v, -a.clone())).collect();
                normalized.push((coeffs, rel, -c.rhs.clone()));
            } else {
                normalized.push((c.coeffs.clone(), c.relation, c.rhs.clone()));
            }
        }
        let slacks = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
        let artificials = normalized.iter().filter(|c| c.1 != Relation::Le).count();
        let first_artificial = n + slacks;
        let width = first_artificial + artificials;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut next_slack, mut next_art) = (n, first_artificial);
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![Rational::zero(); width + 1];
            for (v, a) in coeffs {
                row[v] += a;
            }
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = Rational::from_integer(1.into());
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = Rational::from_integer((-1).into());
                    next_slack += 1;
                    row[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            cost: vec![Rational::zero(); width + 1],
            first_artificial,
            width,
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        let nonzero: Vec<usize> = (0..=self.width).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for &j in &nonzero {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for &j in &nonzero {
                self.cost[j] -= &f * &pivot_row[j];
            }
        }
        self.basis[r] = col;
    }

    /// Loads reduced costs for the cost vector `c` (indexed by column).
    fn load_costs(&mut self, c: &[Rational]) {
        let mut cost = vec![Rational::zero(); self.width + 1];
        cost[..c.len()].clone_from_slice(c);
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &c[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    cost[j] -= cb * x;
                }
            }
        }
        self.cost = cost;
    }

    /// Runs simplex iterations over columns `< limit`. Returns false when
    /// the program is unbounded.
    fn iterate(&mut self, limit: usize) -> bool {
        loop {
            let Some(col) = (0..limit).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        if self.first_artificial < self.width {
            let mut c = vec![Rational::zero(); self.width];
            for x in c.iter_mut().skip(self.first_artificial) {
                *x = Rational::from_integer(1.into());
            }
            self.load_costs(&c);
            self.iterate(self.width);
            if !self.cost[self.width].is_zero() {
                return LpOutcome::Infeasible;
            }
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(col) => self.pivot(r, col),
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }
        let mut c = vec![Rational::zero(); self.width];
        for (j, x) in lp.objective.iter().enumerate() {
            c[j] = match lp.sense {
                Sense::Minimize => x.clone(),
                Sense::Maximize => -x.clone(),
            };
        }
        self.load_costs(&c);
        if !self.iterate(self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut solution = vec![Rational::zero(); lp.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < lp.num_vars {
                solution[b] = self.rows[i][self.width].clone();
            }
        }
        let value: Rational = lp
            .objective
            .iter()
            .zip(&solution)
            .map(|(a, x)| a * x)
            .sum();
        LpOutcome::Optimal { value, solution }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn triangle_cover() {
        // min x+y+z, x+z>=1, x+y>=1, y+z>=1
        let mut lp = LinearProgram::new(3, Sense::Minimize);
        for v in 0..3 {
            lp.set_objective(v, int(1));
        }
        for (a, b) in [(0, 2), (0, 1), (1, 2)] {
            lp.add_constraint(vec![(a, int(1)), (b, int(1))], Relation::Ge, int(1));
        }
        match lp.solve() {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, ratio(3, 2));
                assert!(solution.iter().all(|x| *x == ratio(1, 2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn maximize_with_equality() {
        // max 3x+2y, x+y=4, x<=3
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(0, int(3));
        lp.set_objective(1, int(2));
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(4));
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(3));
        match lp.solve() {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, int(11));
                assert_eq!(solution, vec![int(3), int(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1, Sense::Minimize);
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(2));
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(1, Sense::Maximize);
        lp.set_objective(0, int(1));
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // min x, -x <= -2 (x >= 2), duplicated equality rows
        let mut lp = LinearProgram::new(2, Sense::Minimize);
        lp.set_objective(0, int(1));
        lp.add_constraint(vec![(0, int(-1))], Relation::Le, int(-2));
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(5));
        lp.add_constraint(vec![(0, int(2)), (1, int(2))], Relation::Eq, int(10));
        match lp.solve() {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, int(2));
                assert_eq!(solution, vec![int(2), int(3)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let mut lp = LinearProgram::new(4, Sense::Minimize);
        let obj = [ratio(-3, 4), int(150), ratio(-1, 50), int(6)];
        for (i, c) in obj.into_iter().enumerate() {
            lp.set_objective(i, c);
        }
        lp.add_constraint(
            vec![(0, ratio(1, 4)), (1, int(-60)), (2, ratio(-1, 25)), (3, int(9))],
            Relation::Le,
            int(0),
        );
        lp.add_constraint(
            vec![(0, ratio(1, 2)), (1, int(-90)), (2, ratio(-1, 50)), (3, int(3))],
            Relation::Le,
            int(0),
        );
        lp.add_constraint(vec![(2, int(1))], Relation::Le, int(1));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(-1, 20)),
            other => panic!("{other:?}"),
        }
    }
}
