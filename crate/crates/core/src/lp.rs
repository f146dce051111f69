//! Exact linear programming over [`BigRational`].
//!
//! Solves `max c·x` subject to `A x <= b`, `x >= 0` with `b >= 0`, so the
//! origin is feasible and no phase one is needed. Long runs of degenerate
//! pivots hand over to Bland's rule, which rules out cycling.
//!
//! [`Problem::solve_by_row_generation`] first runs the same simplex in
//! `f64`, then rebuilds the primal and dual of the final basis in exact
//! arithmetic and keeps them only if they certify optimality. Otherwise it
//! repeats the search exactly.

use alloc::vec::Vec;
use alloc::{format, vec};
use core::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// One row `Σ coeffs[j] x_j <= rhs`, sparse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Row {
    pub coeffs: Vec<(usize, BigRational)>,
    pub rhs: BigRational,
}

#[derive(Debug, Clone, Default)]
pub struct Problem {
    pub vars: usize,
    pub objective: Vec<BigRational>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub value: BigRational,
    pub primal: Vec<BigRational>,
    /// One multiplier per row.
    pub dual: Vec<BigRational>,
    pub pivots: usize,
}

impl Problem {
    pub fn new(vars: usize) -> Self {
        Problem {
            vars,
            objective: vec![BigRational::zero(); vars],
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<(usize, BigRational)>, rhs: BigRational) {
        self.rows.push(Row { coeffs, rhs });
    }

    fn check(&self) -> Result<()> {
        if self.objective.len() != self.vars {
            return Err(Error::Lp("objective length differs from variable count".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.rhs.is_negative() {
                return Err(Error::Lp(format!("row {i} has a negative right-hand side")));
            }
            if let Some(&(j, _)) = row.coeffs.iter().find(|(j, _)| *j >= self.vars) {
                return Err(Error::Lp(format!("row {i} references variable {j}")));
            }
        }
        Ok(())
    }

    /// Primal simplex on a dense exact tableau. Entering columns follow the
    /// largest reduced cost until a run of degenerate pivots, then Bland's
    /// rule for the rest of the solve.
    pub fn solve(&self) -> Result<Solution> {
        self.check()?;
        let all: Vec<usize> = (0..self.rows.len()).collect();
        let mut t = Tableau::<BigRational>::new(self, &all);
        t.primal_simplex()?;
        Ok(t.solution(self.rows.len()))
    }

    /// Solves with only the rows in `start` active, then repeatedly adds up
    /// to `batch` of the most violated remaining rows until the optimum is
    /// feasible for every row. Added rows are repaired by dual simplex on
    /// the same tableau. Returns the solution (duals over all rows) and the
    /// number of active rows at the end.
    ///
    /// The search runs in `f64` first; its final basis is accepted only if
    /// the exact primal and dual rebuilt from it pass [`Problem::certify`].
    pub fn solve_by_row_generation(&self, start: &[usize], batch: usize) -> Result<(Solution, usize)> {
        self.check()?;
        if let Ok(t) = self.generate::<f64>(start, batch) {
            if let Some(s) = self.exact_from_basis(&t) {
                return Ok((s, t.slack_ids.len()));
            }
        }
        match self.generate::<BigRational>(start, batch) {
            Ok(t) => Ok((t.solution(self.rows.len()), t.slack_ids.len())),
            Err(_) => Ok((self.solve()?, self.rows.len())),
        }
    }

    fn generate<T: Scalar>(&self, start: &[usize], batch: usize) -> Result<Tableau<T>> {
        let batch = batch.max(1);
        let m = self.rows.len();
        let mut active = vec![false; m];
        let mut ids = Vec::new();
        for &i in start {
            if !active[i] {
                active[i] = true;
                ids.push(i);
            }
        }
        let mut t = Tableau::<T>::new(self, &ids);
        t.primal_simplex()?;
        loop {
            let primal = t.primal();
            let mut violated: Vec<(T, usize)> = (0..m)
                .filter(|&i| !active[i])
                .filter_map(|i| {
                    let row = &self.rows[i];
                    let mut excess = T::from_q(&row.rhs).negated();
                    excess.minus_eq(&T::jitter(i, RHS_JITTER));
                    for (j, a) in &row.coeffs {
                        excess.plus_eq(&T::from_q(a).times(&primal[*j]));
                    }
                    excess.excessive().then_some((excess, i))
                })
                .collect();
            if violated.is_empty() {
                return Ok(t);
            }
            violated.sort_by(|a, b| b.0.order(&a.0).then(a.1.cmp(&b.1)));
            for (_, i) in violated.into_iter().take(batch) {
                active[i] = true;
                t.add_row(&self.rows[i], i);
            }
            t.dual_simplex()?;
        }
    }

    /// Exact primal and dual of the basis `t` ends in, if they certify.
    fn exact_from_basis<T: Scalar>(&self, t: &Tableau<T>) -> Option<Solution> {
        let n = self.vars;
        let basic: Vec<usize> = t.basis.iter().copied().filter(|&b| b < n).collect();
        let tight: Vec<usize> = (0..t.slack_ids.len())
            .filter(|&k| t.row_of[n + k].is_none())
            .map(|k| t.slack_ids[k])
            .collect();
        if basic.len() != tight.len() {
            return None;
        }
        let k = basic.len();
        let column: Vec<Option<usize>> = {
            let mut c = vec![None; n];
            for (pos, &j) in basic.iter().enumerate() {
                c[j] = Some(pos);
            }
            c
        };
        // A[T, B] x_B = b_T and A[T, B]^T y_T = c_B
        let mut forward = vec![vec![BigRational::zero(); k]; k];
        let mut backward = vec![vec![BigRational::zero(); k]; k];
        for (r, &id) in tight.iter().enumerate() {
            for (j, a) in &self.rows[id].coeffs {
                if let Some(c) = column[*j] {
                    forward[r][c] += a;
                    backward[c][r] += a;
                }
            }
        }
        let b: Vec<BigRational> = tight.iter().map(|&id| self.rows[id].rhs.clone()).collect();
        let c: Vec<BigRational> = basic.iter().map(|&j| self.objective[j].clone()).collect();
        let x_b = solve_square(forward, b)?;
        let y_t = solve_square(backward, c)?;
        let mut primal = vec![BigRational::zero(); n];
        for (pos, &j) in basic.iter().enumerate() {
            primal[j] = x_b[pos].clone();
        }
        let mut dual = vec![BigRational::zero(); self.rows.len()];
        for (pos, &id) in tight.iter().enumerate() {
            dual[id] = y_t[pos].clone();
        }
        let value = self.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();
        let s = Solution {
            value,
            primal,
            dual,
            pivots: t.pivots,
        };
        self.certify(&s).then_some(s)
    }

    /// Checks primal and dual feasibility and equal objective values.
    pub fn certify(&self, s: &Solution) -> bool {
        if s.primal.len() != self.vars || s.dual.len() != self.rows.len() {
            return false;
        }
        if s.primal.iter().chain(&s.dual).any(Signed::is_negative) {
            return false;
        }
        let mut reduced: Vec<BigRational> = self.objective.iter().map(|c| -c).collect();
        for (row, y) in self.rows.iter().zip(&s.dual) {
            let lhs: BigRational = row.coeffs.iter().map(|(j, a)| a * &s.primal[*j]).sum();
            if lhs > row.rhs {
                return false;
            }
            if !y.is_zero() {
                for (j, a) in &row.coeffs {
                    reduced[*j] += a * y;
                }
            }
        }
        if reduced.iter().any(Signed::is_negative) {
            return false;
        }
        let primal: BigRational = self
            .objective
            .iter()
            .zip(&s.primal)
            .map(|(c, x)| c * x)
            .sum();
        let dual: BigRational = self.rows.iter().zip(&s.dual).map(|(r, y)| &r.rhs * y).sum();
        primal == s.value && dual == s.value
    }
}

/// Solves `a x = b` for square nonsingular `a` by Gaussian elimination.
fn solve_square(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let k = b.len();
    for col in 0..k {
        let p = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut().skip(col) {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        b[col] *= &inv;
        let support: Vec<usize> = (col..k).filter(|&j| !a[col][j].is_zero()).collect();
        let (pivot_row, pivot_rhs) = (a[col].clone(), b[col].clone());
        for r in 0..k {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                a[r][j] -= delta;
            }
            b[r] -= &factor * &pivot_rhs;
        }
    }
    Some(b)
}

/// Arithmetic the tableau needs; exact for [`BigRational`], tolerance
/// based for `f64`.
trait Scalar: Clone {
    const EXACT: bool;
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_q(q: &BigRational) -> Self;
    fn is_nil(&self) -> bool;
    fn gt0(&self) -> bool;
    fn lt0(&self) -> bool;
    fn order(&self, other: &Self) -> Ordering;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn over(&self, other: &Self) -> Self;
    fn plus_eq(&mut self, other: &Self);
    fn minus_eq(&mut self, other: &Self);
    fn times_eq(&mut self, other: &Self);
    /// Beyond the feasibility tolerance below zero.
    fn infeasible(&self) -> bool {
        self.lt0()
    }
    /// Beyond the feasibility tolerance above zero.
    fn excessive(&self) -> bool {
        self.gt0()
    }
    /// Rounds drift to zero after an update.
    fn settle(&mut self) {}
    /// Perturbation of size about `scale` for item `id`; zero when exact.
    fn jitter(_id: usize, _scale: f64) -> Self {
        Self::nil()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_q(q: &BigRational) -> Self {
        q.clone()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gt0(&self) -> bool {
        Signed::is_positive(self)
    }
    fn lt0(&self) -> bool {
        Signed::is_negative(self)
    }
    fn order(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Self {
        BigRational::recip(self)
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn over(&self, other: &Self) -> Self {
        self / other
    }
    fn plus_eq(&mut self, other: &Self) {
        *self += other;
    }
    fn minus_eq(&mut self, other: &Self) {
        *self -= other;
    }
    fn times_eq(&mut self, other: &Self) {
        *self *= other;
    }
}

/// Magnitudes below this count as zero in the `f64` search.
const EPS: f64 = 1e-9;
/// Right-hand sides and row excesses within this count as feasible.
const FEAS: f64 = 1e-9;
/// Size of the right-hand side and cost perturbations in the `f64` search.
/// They break the degeneracy that stalls the pivot rules; exact
/// certification ignores them.
const RHS_JITTER: f64 = 1e-6;
const COST_JITTER: f64 = 1e-7;

impl Scalar for f64 {
    const EXACT: bool = false;
    fn nil() -> Self {
        0.0
    }
    fn unit() -> Self {
        1.0
    }
    fn from_q(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn is_nil(&self) -> bool {
        self.abs() < EPS
    }
    fn gt0(&self) -> bool {
        *self >= EPS
    }
    fn lt0(&self) -> bool {
        *self <= -EPS
    }
    fn order(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Self {
        1.0 / self
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn over(&self, other: &Self) -> Self {
        self / other
    }
    fn plus_eq(&mut self, other: &Self) {
        *self += other;
    }
    fn minus_eq(&mut self, other: &Self) {
        *self -= other;
    }
    fn times_eq(&mut self, other: &Self) {
        *self *= other;
    }
    fn infeasible(&self) -> bool {
        *self < -FEAS
    }
    fn excessive(&self) -> bool {
        *self > FEAS
    }
    fn jitter(id: usize, scale: f64) -> Self {
        // golden-ratio sequence in [0.5, 1)
        let x = (id as f64 + 1.0) * 0.618_033_988_749_895;
        let frac = x - (x as u64) as f64;
        scale * (0.5 + 0.5 * frac)
    }
    fn settle(&mut self) {
        if self.abs() < EPS {
            *self = 0.0;
        }
    }
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 64;
/// The `f64` search gives up here and leaves the problem to exact pivots.
const FLOAT_PIVOT_LIMIT: usize = 100_000;

fn less<T: Scalar>(a: &T, b: &T) -> bool {
    b.minus(a).gt0()
}

fn same<T: Scalar>(a: &T, b: &T) -> bool {
    a.minus(b).is_nil()
}

/// Dense tableau in the `A x + s = b` form. Column `j < n` is `x_j`,
/// column `n + k` the slack of problem row `slack_ids[k]`.
struct Tableau<T> {
    n: usize,
    slack_ids: Vec<usize>,
    tab: Vec<Vec<T>>,
    rhs: Vec<T>,
    /// Reduced costs; a column may enter while its cost is positive.
    cost: Vec<T>,
    value: T,
    basis: Vec<usize>,
    /// Row holding each basic column.
    row_of: Vec<Option<usize>>,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn new(lp: &Problem, rows: &[usize]) -> Self {
        let n = lp.vars;
        let mut t = Tableau {
            n,
            slack_ids: Vec::new(),
            tab: Vec::new(),
            rhs: Vec::new(),
            cost: lp
                .objective
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let mut c = T::from_q(c);
                    c.plus_eq(&T::jitter(j, COST_JITTER));
                    c
                })
                .collect(),
            value: T::nil(),
            basis: Vec::new(),
            row_of: vec![None; n],
            pivots: 0,
        };
        for &i in rows {
            t.add_row(&lp.rows[i], i);
        }
        t
    }

    fn width(&self) -> usize {
        self.cost.len()
    }

    /// Appends a row with its slack basic, written in the current basis.
    /// The new right-hand side may be negative.
    fn add_row(&mut self, row: &Row, id: usize) {
        self.slack_ids.push(id);
        for r in &mut self.tab {
            r.push(T::nil());
        }
        self.cost.push(T::nil());
        let width = self.width();
        let mut dense = vec![T::nil(); width];
        for (j, a) in &row.coeffs {
            dense[*j].plus_eq(&T::from_q(a));
        }
        let mut rhs = T::from_q(&row.rhs);
        rhs.plus_eq(&T::jitter(id, RHS_JITTER));
        for j in 0..self.n {
            if dense[j].is_nil() {
                continue;
            }
            if let Some(r) = self.row_of[j] {
                let factor = dense[j].clone();
                for (d, a) in dense.iter_mut().zip(&self.tab[r]) {
                    if !a.is_nil() {
                        d.minus_eq(&factor.times(a));
                    }
                }
                rhs.minus_eq(&factor.times(&self.rhs[r]));
                dense[j] = T::nil();
            }
        }
        dense[width - 1] = T::unit();
        self.tab.push(dense);
        self.rhs.push(rhs);
        self.basis.push(width - 1);
        self.row_of.push(Some(self.tab.len() - 1));
    }

    fn primal_simplex(&mut self) -> Result<()> {
        let mut degenerate = 0usize;
        loop {
            if !T::EXACT && self.pivots > FLOAT_PIVOT_LIMIT {
                return Err(Error::Lp("pivot limit reached".into()));
            }
            let entering = if degenerate < DEGENERATE_LIMIT {
                largest_positive(&self.cost)
            } else {
                (0..self.width()).find(|&j| self.cost[j].gt0())
            };
            let Some(q) = entering else { return Ok(()) };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.tab.len() {
                if !self.tab[i][q].gt0() {
                    continue;
                }
                let ratio = self.rhs[i].over(&self.tab[i][q]);
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        less(&ratio, best) || (same(&ratio, best) && self.basis[i] < self.basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((p, ratio)) = leave else {
                return Err(Error::Lp("objective is unbounded".into()));
            };
            if ratio.is_nil() {
                degenerate += 1;
            } else if degenerate < DEGENERATE_LIMIT {
                degenerate = 0;
            }
            self.pivot(p, q);
        }
    }

    /// Restores primal feasibility from a dual feasible basis. The most
    /// negative row leaves until a run of degenerate pivots, then Bland's
    /// lowest-index choices on both sides.
    fn dual_simplex(&mut self) -> Result<()> {
        let mut degenerate = 0usize;
        loop {
            if !T::EXACT && self.pivots > FLOAT_PIVOT_LIMIT {
                return Err(Error::Lp("pivot limit reached".into()));
            }
            let infeasible = (0..self.tab.len()).filter(|&i| self.rhs[i].infeasible());
            let leaving = if degenerate < DEGENERATE_LIMIT {
                infeasible.min_by(|&a, &b| self.rhs[a].order(&self.rhs[b]).then(self.basis[a].cmp(&self.basis[b])))
            } else {
                infeasible.min_by_key(|&i| self.basis[i])
            };
            let Some(p) = leaving else { return Ok(()) };
            let mut enter: Option<(usize, T)> = None;
            for j in 0..self.width() {
                let a = &self.tab[p][j];
                if !a.lt0() {
                    continue;
                }
                let ratio = self.cost[j].over(a);
                if enter.as_ref().is_none_or(|(_, best)| less(&ratio, best)) {
                    enter = Some((j, ratio));
                }
            }
            let Some((q, ratio)) = enter else {
                return Err(Error::Lp("constraints are infeasible".into()));
            };
            if ratio.is_nil() {
                degenerate += 1;
            } else if degenerate < DEGENERATE_LIMIT {
                degenerate = 0;
            }
            self.pivot(p, q);
        }
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let inv = self.tab[p][q].inverse();
        for a in self.tab[p].iter_mut() {
            if !a.is_nil() {
                a.times_eq(&inv);
            }
        }
        self.rhs[p].times_eq(&inv);
        let support: Vec<usize> = (0..self.width()).filter(|&j| !self.tab[p][j].is_nil()).collect();
        let prow = self.tab[p].clone();
        let prhs = self.rhs[p].clone();
        for i in 0..self.tab.len() {
            if i == p || self.tab[i][q].is_nil() {
                continue;
            }
            let factor = self.tab[i][q].clone();
            for &j in &support {
                self.tab[i][j].minus_eq(&factor.times(&prow[j]));
                self.tab[i][j].settle();
            }
            self.tab[i][q] = T::nil();
            self.rhs[i].minus_eq(&factor.times(&prhs));
            self.rhs[i].settle();
        }
        if !self.cost[q].is_nil() {
            let factor = self.cost[q].clone();
            for &j in &support {
                self.cost[j].minus_eq(&factor.times(&prow[j]));
                self.cost[j].settle();
            }
            self.value.plus_eq(&factor.times(&prhs));
        }
        self.cost[q] = T::nil();
        let old = self.basis[p];
        self.row_of[old] = None;
        self.basis[p] = q;
        self.row_of[q] = Some(p);
        self.pivots += 1;
    }

    fn primal(&self) -> Vec<T> {
        let mut x = vec![T::nil(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

impl Tableau<BigRational> {
    fn solution(&self, rows: usize) -> Solution {
        let mut dual = vec![BigRational::nil(); rows];
        for (k, &id) in self.slack_ids.iter().enumerate() {
            dual[id] = -self.cost[self.n + k].clone();
        }
        Solution {
            value: self.value.clone(),
            primal: self.primal(),
            dual,
            pivots: self.pivots,
        }
    }
}

/// Column with the largest positive reduced cost, lowest index on ties.
fn largest_positive<T: Scalar>(cost: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (j, c) in cost.iter().enumerate() {
        if c.gt0() && best.is_none_or(|b| less(&cost[b], c)) {
            best = Some(j);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = Problem::new(2);
        lp.objective = vec![r(3, 1), r(2, 1)];
        lp.push(vec![(0, r(1, 1)), (1, r(1, 1))], r(4, 1));
        lp.push(vec![(0, r(1, 1)), (1, r(3, 1))], r(6, 1));
        lp.push(vec![(0, r(1, 1))], r(3, 1));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, r(11, 1));
        assert_eq!(s.primal, vec![r(3, 1), r(1, 1)]);
        assert!(lp.certify(&s));
    }

    #[test]
    fn row_generation_matches_the_full_solve() {
        let mut lp = Problem::new(2);
        lp.objective = vec![r(3, 1), r(2, 1)];
        lp.push(vec![(0, r(1, 1))], r(3, 1));
        lp.push(vec![(1, r(1, 1))], r(5, 1));
        lp.push(vec![(0, r(1, 1)), (1, r(1, 1))], r(4, 1));
        lp.push(vec![(0, r(1, 1)), (1, r(3, 1))], r(6, 1));
        for batch in [1, 8] {
            let (s, active) = lp.solve_by_row_generation(&[0, 1], batch).unwrap();
            assert_eq!(s.value, r(11, 1));
            assert!(lp.certify(&s));
            assert!(active >= 3);
        }
    }

    #[test]
    fn row_generation_falls_back_when_unbounded() {
        let mut lp = Problem::new(2);
        lp.objective = vec![r(1, 1), r(1, 1)];
        lp.push(vec![(0, r(1, 1))], r(1, 1));
        lp.push(vec![(1, r(1, 1))], r(2, 1));
        let (s, active) = lp.solve_by_row_generation(&[0], 1).unwrap();
        assert_eq!((s.value, active), (r(3, 1), 2));
    }

    #[test]
    fn fractional_optimum() {
        // max x + y, 2x + y <= 2, x + 2y <= 2
        let mut lp = Problem::new(2);
        lp.objective = vec![r(1, 1), r(1, 1)];
        lp.push(vec![(0, r(2, 1)), (1, r(1, 1))], r(2, 1));
        lp.push(vec![(0, r(1, 1)), (1, r(2, 1))], r(2, 1));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, r(4, 3));
        assert!(lp.certify(&s));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // classic cycling example for the largest-coefficient rule
        let mut lp = Problem::new(4);
        lp.objective = vec![r(10, 1), r(-57, 1), r(-9, 1), r(-24, 1)];
        lp.push(
            vec![(0, r(1, 2)), (1, r(-11, 2)), (2, r(-5, 2)), (3, r(9, 1))],
            r(0, 1),
        );
        lp.push(
            vec![(0, r(1, 2)), (1, r(-3, 2)), (2, r(-1, 2)), (3, r(1, 1))],
            r(0, 1),
        );
        lp.push(vec![(0, r(1, 1))], r(1, 1));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, r(1, 1));
        assert!(lp.certify(&s));
    }

    #[test]
    fn unbounded_and_bad_rows() {
        let mut lp = Problem::new(1);
        lp.objective = vec![r(1, 1)];
        assert!(lp.solve().is_err());
        lp.push(vec![(0, r(1, 1))], r(-1, 1));
        assert!(lp.solve().is_err());
    }
}
