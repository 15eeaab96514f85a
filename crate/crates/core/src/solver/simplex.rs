//! Dense bounded-variable primal simplex (two-phase).
//!
//! Variables are shifted so that every internal column lives in `[0, u]`
//! with `u` possibly infinite; nonbasic columns sit at either bound. Each row
//! owns one identity column (its slack, or its artificial for `>=`/`=` rows),
//! so the final tableau carries `B^-1` and the row duals for free.
//!
//! Pricing is Dantzig's rule with lowest-index ties. After a run of
//! `bland_after` consecutive degenerate pivots the phase switches to Bland's
//! rule, which cannot cycle.

use super::{LinearProgram, LpBackend, Relation, SolveResult, Status, FEAS_TOL};

const PIV_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const RATIO_TIE: f64 = 1e-12;
const DROP_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct DenseSimplex {
    pub max_pivots: usize,
    pub bland_after: usize,
}

impl Default for DenseSimplex {
    fn default() -> Self {
        Self {
            max_pivots: 1_000_000,
            bland_after: 5_000,
        }
    }
}

impl LpBackend for DenseSimplex {
    fn solve_lp(&self, lp: &LinearProgram) -> SolveResult {
        assert!(lp.check_dims(), "malformed linear program");
        for j in 0..lp.num_vars() {
            let (lo, hi) = (lp.lower[j], lp.upper[j]);
            if lo > hi + FEAS_TOL || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return SolveResult::failed(Status::Infeasible, 0);
            }
        }
        let mut tab = Tableau::build(lp);
        let outcome = tab.solve(self, lp);
        match outcome {
            Ok(()) => tab.extract(lp),
            Err(status) => SolveResult::failed(status, tab.pivots),
        }
    }

    fn name(&self) -> &'static str {
        "dense"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
}

/// Internal column `k` contributes `sign * z_k` to original variable `orig`.
#[derive(Debug, Clone, Copy)]
struct StructCol {
    orig: usize,
    sign: f64,
}

struct Tableau {
    m: usize,
    n: usize,
    t: Vec<f64>,
    xb: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<State>,
    upper: Vec<f64>,
    d: Vec<f64>,
    pivots: usize,
    structs: Vec<StructCol>,
    offset: Vec<f64>,
    /// Internal right-hand side after shifting and sign normalisation.
    rhs: Vec<f64>,
    /// +1 or -1: whether row `i` was negated to make its rhs nonnegative.
    row_sign: Vec<f64>,
    /// Identity column owned by each row.
    ident: Vec<usize>,
    art_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let nv = lp.num_vars();
        let mut structs = Vec::with_capacity(nv);
        let mut cols_of: Vec<Vec<usize>> = vec![Vec::new(); nv];
        let mut offset = vec![0.0; nv];
        let mut upper = Vec::new();
        for j in 0..nv {
            let (lo, hi) = (lp.lower[j], lp.upper[j]);
            if lo.is_finite() {
                offset[j] = lo;
                cols_of[j].push(structs.len());
                structs.push(StructCol { orig: j, sign: 1.0 });
                upper.push(if hi.is_finite() {
                    (hi - lo).max(0.0)
                } else {
                    f64::INFINITY
                });
            } else if hi.is_finite() {
                offset[j] = hi;
                cols_of[j].push(structs.len());
                structs.push(StructCol {
                    orig: j,
                    sign: -1.0,
                });
                upper.push(f64::INFINITY);
            } else {
                for sign in [1.0, -1.0] {
                    cols_of[j].push(structs.len());
                    structs.push(StructCol { orig: j, sign });
                    upper.push(f64::INFINITY);
                }
            }
        }
        let ns = structs.len();
        let m = lp.rows.len();

        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut relation = Vec::with_capacity(m);
        for row in &lp.rows {
            let shift: f64 = row.coeffs.iter().map(|&(j, a)| a * offset[j]).sum();
            let b = row.rhs - shift;
            let (s, rel) = if b < 0.0 {
                let flipped = match row.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (-1.0, flipped)
            } else {
                (1.0, row.relation)
            };
            rhs.push(s * b);
            row_sign.push(s);
            relation.push(rel);
        }
        let n_slack = relation.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = relation.iter().filter(|r| **r != Relation::Le).count();
        let art_start = ns + n_slack;
        let n = art_start + n_art;
        upper.resize(n, f64::INFINITY);

        let mut t = vec![0.0; m * n];
        let mut ident = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (ns, art_start);
        for (i, row) in lp.rows.iter().enumerate() {
            let base = i * n;
            for &(j, a) in &row.coeffs {
                for &k in &cols_of[j] {
                    t[base + k] += row_sign[i] * a * structs[k].sign;
                }
            }
            match relation[i] {
                Relation::Le => {
                    t[base + next_slack] = 1.0;
                    ident.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    t[base + next_slack] = -1.0;
                    next_slack += 1;
                    t[base + next_art] = 1.0;
                    ident.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    t[base + next_art] = 1.0;
                    ident.push(next_art);
                    next_art += 1;
                }
            }
        }
        let mut state = vec![State::Lower; n];
        for &c in &ident {
            state[c] = State::Basic;
        }
        Tableau {
            m,
            n,
            t,
            xb: rhs.clone(),
            basis: ident.clone(),
            state,
            upper,
            d: vec![0.0; n],
            pivots: 0,
            structs,
            offset,
            rhs,
            row_sign,
            ident,
            art_start,
        }
    }

    fn solve(&mut self, cfg: &DenseSimplex, lp: &LinearProgram) -> Result<(), Status> {
        if self.art_start < self.n {
            let mut cost = vec![0.0; self.n];
            for c in &mut cost[self.art_start..] {
                *c = 1.0;
            }
            self.run_phase(&cost, cfg)?;
            let infeas: f64 = (0..self.m)
                .filter(|&i| self.basis[i] >= self.art_start)
                .map(|i| self.xb[i].max(0.0))
                .sum();
            let scale = 1.0 + self.rhs.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
            if infeas > FEAS_TOL * scale {
                return Err(Status::Infeasible);
            }
            for j in self.art_start..self.n {
                self.upper[j] = 0.0;
                if self.state[j] == State::Upper {
                    self.state[j] = State::Lower;
                }
            }
            for i in 0..self.m {
                if self.basis[i] >= self.art_start {
                    self.xb[i] = 0.0;
                }
            }
        }
        let cost = self.phase_costs(lp);
        self.run_phase(&cost, cfg)
    }

    fn run_phase(&mut self, cost: &[f64], cfg: &DenseSimplex) -> Result<(), Status> {
        let (m, n) = (self.m, self.n);
        self.d.copy_from_slice(cost);
        for i in 0..m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.t[i * n..(i + 1) * n];
                for (dj, &tij) in self.d.iter_mut().zip(row) {
                    *dj -= cb * tij;
                }
            }
        }
        for i in 0..m {
            self.d[self.basis[i]] = 0.0;
        }

        let mut stalled = 0usize;
        let mut bland = false;
        loop {
            if self.pivots >= cfg.max_pivots {
                return Err(Status::IterLimit);
            }
            let Some(q) = self.choose_entering(bland) else {
                return Ok(());
            };
            let dir = if self.state[q] == State::Lower {
                1.0
            } else {
                -1.0
            };

            let mut step = self.upper[q];
            let mut leave: Option<usize> = None;
            let mut leave_piv = 0.0;
            for i in 0..m {
                let a = self.t[i * n + q];
                if a.abs() <= PIV_TOL {
                    continue;
                }
                let rate = -dir * a;
                let b = self.basis[i];
                let lim = if rate < 0.0 {
                    self.xb[i].max(0.0) / -rate
                } else if self.upper[b].is_finite() {
                    (self.upper[b] - self.xb[i]).max(0.0) / rate
                } else {
                    continue;
                };
                let take = if lim < step - RATIO_TIE {
                    true
                } else if lim <= step + RATIO_TIE {
                    match leave {
                        // a bound flip wins ties
                        None => false,
                        Some(r) if bland => b < self.basis[r],
                        Some(_) => a.abs() > leave_piv,
                    }
                } else {
                    false
                };
                if take {
                    step = lim;
                    leave = Some(i);
                    leave_piv = a.abs();
                }
            }
            if !step.is_finite() {
                return Err(Status::Unbounded);
            }

            if step > 0.0 {
                for i in 0..m {
                    let a = self.t[i * n + q];
                    if a != 0.0 {
                        self.xb[i] -= dir * a * step;
                    }
                }
            }
            self.pivots += 1;
            match leave {
                None => {
                    self.state[q] = if dir > 0.0 {
                        State::Upper
                    } else {
                        State::Lower
                    };
                }
                Some(r) => {
                    let b = self.basis[r];
                    let rate = -dir * self.t[r * n + q];
                    self.state[b] = if rate < 0.0 {
                        State::Lower
                    } else {
                        State::Upper
                    };
                    let entering_value = if dir > 0.0 {
                        step
                    } else {
                        self.upper[q] - step
                    };
                    self.pivot(r, q);
                    self.basis[r] = q;
                    self.state[q] = State::Basic;
                    self.xb[r] = entering_value;
                }
            }
            if step <= RATIO_TIE {
                stalled += 1;
                if stalled > cfg.bland_after {
                    bland = true;
                }
            } else {
                stalled = 0;
            }
        }
    }

    fn choose_entering(&self, bland: bool) -> Option<usize> {
        let mut best = OPT_TOL;
        let mut q = None;
        for j in 0..self.n {
            let gain = match self.state[j] {
                State::Basic => continue,
                State::Lower => {
                    if self.upper[j] <= 0.0 {
                        continue;
                    }
                    -self.d[j]
                }
                State::Upper => self.d[j],
            };
            if gain > best {
                if bland {
                    return Some(j);
                }
                best = gain;
                q = Some(j);
            }
        }
        q
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let n = self.n;
        let p = self.t[r * n + q];
        let inv = 1.0 / p;
        let mut nz: Vec<(usize, f64)> = Vec::new();
        {
            let row = &mut self.t[r * n..(r + 1) * n];
            for (j, v) in row.iter_mut().enumerate() {
                if *v != 0.0 {
                    *v *= inv;
                    if v.abs() < DROP_TOL {
                        *v = 0.0;
                    } else {
                        nz.push((j, *v));
                    }
                }
            }
            row[q] = 1.0;
        }
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * n + q];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.t[i * n..(i + 1) * n];
            for &(j, v) in &nz {
                let x = row[j] - f * v;
                row[j] = if x.abs() < DROP_TOL { 0.0 } else { x };
            }
            row[q] = 0.0;
        }
        let f = self.d[q];
        if f != 0.0 {
            for &(j, v) in &nz {
                self.d[j] -= f * v;
            }
        }
        self.d[q] = 0.0;
    }

    /// Recomputes basic values from `B^-1` (held in the identity columns).
    fn refresh_basic_values(&mut self) {
        let n = self.n;
        for i in 0..self.m {
            let row = &self.t[i * n..(i + 1) * n];
            let mut v: f64 = self
                .ident
                .iter()
                .zip(&self.rhs)
                .map(|(&c, &b)| row[c] * b)
                .sum();
            for ((r, state), up) in row.iter().zip(&self.state).zip(&self.upper) {
                if *state == State::Upper {
                    v -= r * up;
                }
            }
            self.xb[i] = v;
        }
    }

    fn extract(&mut self, lp: &LinearProgram) -> SolveResult {
        self.refresh_basic_values();
        let mut z: Vec<f64> = self
            .state
            .iter()
            .zip(&self.upper)
            .map(|(state, &up)| if *state == State::Upper { up } else { 0.0 })
            .collect();
        for i in 0..self.m {
            z[self.basis[i]] = self.xb[i];
        }
        let mut x = self.offset.clone();
        for (k, col) in self.structs.iter().enumerate() {
            x[col.orig] += col.sign * z[k];
        }
        for ((v, &lo), &hi) in x.iter_mut().zip(&lp.lower).zip(&lp.upper) {
            *v = v.clamp(lo, hi);
        }
        let s = lp.sense.sign();
        let dual = (0..self.m)
            .map(|i| s * self.row_sign[i] * -self.d[self.ident[i]])
            .collect();
        SolveResult {
            status: Status::Optimal,
            value: lp.objective_value(&x),
            primal: x,
            dual,
            iterations: self.pivots,
            node_count: 0,
            root_lp: None,
        }
    }
}

impl Tableau {
    fn phase_costs(&self, lp: &LinearProgram) -> Vec<f64> {
        let s = lp.sense.sign();
        let mut cost = vec![0.0; self.n];
        for (k, col) in self.structs.iter().enumerate() {
            cost[k] = s * col.sign * lp.objective[col.orig];
        }
        cost
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{dual_bound, Relation, Sense};

    #[test]
    fn lower_bounded_minimum() {
        let mut lp = LinearProgram::new(1, Sense::Minimize);
        lp.objective[0] = 1.0;
        lp.upper[0] = 10.0;
        lp.add_row([(0, 1.0)], Relation::Ge, 1.0);
        let res = DenseSimplex::default().solve_lp(&lp);
        assert!(res.is_optimal());
        assert_eq!(res.value, 1.0);
        assert_eq!(dual_bound(&lp, &res.dual, 1e-9), Some(1.0));
    }

    #[test]
    fn unit_square_maximum() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.objective = vec![1.0, 1.0];
        lp.upper = vec![1.0, 1.0];
        let res = DenseSimplex::default().solve_lp(&lp);
        assert_eq!(res.value, 2.0);
        assert_eq!(res.primal, vec![1.0, 1.0]);
    }

    #[test]
    fn free_and_mirrored_variables() {
        // min x + y, x free with x >= -3 enforced by a row, y in (-inf, 2] with y >= -1 by row
        let mut lp = LinearProgram::new(2, Sense::Minimize);
        lp.objective = vec![1.0, 1.0];
        lp.lower = vec![f64::NEG_INFINITY, f64::NEG_INFINITY];
        lp.upper = vec![f64::INFINITY, 2.0];
        lp.add_row([(0, 1.0)], Relation::Ge, -3.0);
        lp.add_row([(1, 1.0)], Relation::Ge, -1.0);
        let res = DenseSimplex::default().solve_lp(&lp);
        assert!(res.is_optimal());
        assert!((res.value + 4.0).abs() < 1e-12);
    }

    #[test]
    fn detects_unbounded_and_infeasible() {
        let mut lp = LinearProgram::new(1, Sense::Maximize);
        lp.objective[0] = 1.0;
        assert_eq!(
            DenseSimplex::default().solve_lp(&lp).status,
            Status::Unbounded
        );

        let mut lp = LinearProgram::new(1, Sense::Minimize);
        lp.upper[0] = 1.0;
        lp.add_row([(0, 1.0)], Relation::Ge, 2.0);
        assert_eq!(
            DenseSimplex::default().solve_lp(&lp).status,
            Status::Infeasible
        );
    }

    #[test]
    fn equality_rows_and_strong_duality() {
        // transportation between two 2-point distributions with unit distances off-diagonal
        let mut lp = LinearProgram::new(4, Sense::Minimize);
        lp.objective = vec![0.0, 1.0, 1.0, 0.0];
        lp.add_row([(0, 1.0), (1, 1.0)], Relation::Eq, 0.3);
        lp.add_row([(2, 1.0), (3, 1.0)], Relation::Eq, 0.7);
        lp.add_row([(0, 1.0), (2, 1.0)], Relation::Eq, 0.6);
        lp.add_row([(1, 1.0), (3, 1.0)], Relation::Eq, 0.4);
        let res = DenseSimplex::default().solve_lp(&lp);
        assert!((res.value - 0.3).abs() < 1e-12);
        let bound = dual_bound(&lp, &res.dual, 1e-9).unwrap();
        assert!((bound - res.value).abs() < 1e-9);
    }

    #[test]
    fn identical_inputs_identical_pivots() {
        let mut lp = LinearProgram::new(3, Sense::Minimize);
        lp.objective = vec![-1.0, -1.0, -1.0];
        lp.upper = vec![1.0; 3];
        lp.add_row([(0, 1.0), (1, 1.0)], Relation::Le, 1.0);
        lp.add_row([(1, 1.0), (2, 1.0)], Relation::Le, 1.0);
        lp.add_row([(0, 1.0), (2, 1.0)], Relation::Le, 1.0);
        let a = DenseSimplex::default().solve_lp(&lp);
        let b = DenseSimplex::default().solve_lp(&lp);
        assert_eq!(a, b);
        assert!((a.value + 1.5).abs() < 1e-12);
    }
}
