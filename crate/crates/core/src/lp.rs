//! Exact rational simplex for `max c·x  s.t.  A x <= b, x >= 0` with
//! `b >= 0`, so that the slack basis is feasible from the start.
//!
//! Pivoting follows Bland's rule, which rules out cycling. Arithmetic first
//! runs on `Ratio<i64>` with checked operations and is redone on big
//! rationals if anything overflows.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

/// Field operations that may refuse (overflow) instead of wrapping.
pub(crate) trait ExactScalar: Clone + PartialOrd + Zero + One {
    fn from_i64(v: i64) -> Self;
    fn try_sub(&self, o: &Self) -> Option<Self>;
    fn try_mul(&self, o: &Self) -> Option<Self>;
    fn try_div(&self, o: &Self) -> Option<Self>;
    fn positive(&self) -> bool;
    fn to_big(&self) -> BigRational;
}

impl ExactScalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn try_sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn try_mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn try_div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn positive(&self) -> bool {
        self.is_positive()
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl ExactScalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn try_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn try_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn try_div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn positive(&self) -> bool {
        self.is_positive()
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// `value` is the optimum, or, when a stopping threshold was given and
    /// reached, the first basic feasible value at or above it.
    Optimal { value: BigRational, point: Vec<BigRational>, stopped_early: bool },
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&BigRational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Unbounded => None,
        }
    }
}

/// Solves `max c·x` over `A x <= b, x >= 0` where `a` is row-major
/// (`a[i][j]` multiplies `x_j` in constraint `i`) and every `b_i >= 0`.
///
/// With `stop_at = Some(t)` the search ends as soon as the objective
/// reaches `t`; the simplex objective never decreases, so the answer to
/// "is the optimum at least `t`" is still exact.
pub fn maximize(a: &[Vec<i64>], b: &[i64], c: &[i64], stop_at: Option<i64>) -> LpOutcome {
    assert_eq!(a.len(), b.len());
    assert!(b.iter().all(|&v| v >= 0), "right-hand side must be nonnegative");
    assert!(a.iter().all(|row| row.len() == c.len()));
    if let Some(out) = simplex::<Ratio<i64>>(a, b, c, stop_at) {
        return out;
    }
    simplex::<BigRational>(a, b, c, stop_at).expect("big rationals do not overflow")
}

fn simplex<T: ExactScalar>(a: &[Vec<i64>], b: &[i64], c: &[i64], stop_at: Option<i64>) -> Option<LpOutcome> {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    // tableau rows: [A | I | b]
    let mut tab: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut row: Vec<T> = a[i].iter().map(|&v| T::from_i64(v)).collect();
            row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
            row.push(T::from_i64(b[i]));
            row
        })
        .collect();
    // reduced costs for maximization; the last slot holds -z
    let mut cost: Vec<T> = c.iter().map(|&v| T::from_i64(v)).collect();
    cost.extend((0..=m).map(|_| T::zero()));
    let mut basis: Vec<usize> = (n..n + m).collect();
    let threshold = stop_at.map(T::from_i64);

    loop {
        let value = T::zero().try_sub(&cost[width])?;
        if let Some(t) = &threshold {
            if value >= *t {
                return Some(finish(&tab, &basis, n, width, value, true));
            }
        }
        let Some(enter) = (0..width).find(|&j| cost[j].positive()) else {
            return Some(finish(&tab, &basis, n, width, value, false));
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if !tab[i][enter].positive() {
                continue;
            }
            let ratio = tab[i][width].try_div(&tab[i][enter])?;
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row, _)) = leave else {
            return Some(LpOutcome::Unbounded);
        };
        pivot(&mut tab, &mut cost, row, enter)?;
        basis[row] = enter;
    }
}

fn pivot<T: ExactScalar>(tab: &mut [Vec<T>], cost: &mut [T], row: usize, col: usize) -> Option<()> {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v = v.try_div(&p)?;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i != row {
            eliminate_row(r, &pivot_row, col)?;
        }
    }
    eliminate_row(cost, &pivot_row, col)?;
    Some(())
}

fn eliminate_row<T: ExactScalar>(target: &mut [T], pivot_row: &[T], col: usize) -> Option<()> {
    let factor = target[col].clone();
    if factor.is_zero() {
        return Some(());
    }
    for (t, pr) in target.iter_mut().zip(pivot_row) {
        if !pr.is_zero() {
            *t = t.try_sub(&factor.try_mul(pr)?)?;
        }
    }
    Some(())
}

fn finish<T: ExactScalar>(tab: &[Vec<T>], basis: &[usize], n: usize, width: usize, value: T, stopped_early: bool) -> LpOutcome {
    let mut point = vec![BigRational::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            point[var] = tab[i][width].to_big();
        }
    }
    LpOutcome::Optimal { value: value.to_big(), point, stopped_early }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_maximum() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6  -> (8/5, 6/5), value 14/5
        let out = maximize(&[vec![1, 2], vec![3, 1]], &[4, 6], &[1, 1], None);
        let LpOutcome::Optimal { value, point, .. } = out else { panic!() };
        assert_eq!(value, q(14, 5));
        assert_eq!(point, vec![q(8, 5), q(6, 5)]);
    }

    #[test]
    fn triangle_edge_packing() {
        // columns are the generators x1x2, x1x3, x2x3; rows are variables
        let a = vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]];
        let out = maximize(&a, &[1, 1, 1], &[1, 1, 1], None);
        assert_eq!(out.value(), Some(&q(3, 2)));
        let out = maximize(&a, &[2, 1, 1], &[1, 1, 1], None);
        assert_eq!(out.value(), Some(&q(2, 1)));
    }

    #[test]
    fn unbounded_and_degenerate() {
        assert_eq!(maximize(&[vec![1, -1]], &[1], &[1, 1], None), LpOutcome::Unbounded);
        let out = maximize(&[vec![1, 1], vec![1, 1]], &[0, 0], &[1, 1], None);
        assert_eq!(out.value(), Some(&q(0, 1)));
    }

    #[test]
    fn early_stop_reports_reached_threshold() {
        let a = vec![vec![1, 0], vec![0, 1]];
        let out = maximize(&a, &[5, 5], &[1, 1], Some(3));
        let LpOutcome::Optimal { value, stopped_early, .. } = out else { panic!() };
        assert!(stopped_early);
        assert!(value >= q(3, 1));
    }

    #[test]
    fn overflow_falls_back_to_big_rationals() {
        let big = i64::MAX / 3;
        let a = vec![vec![big, 1], vec![1, big]];
        let out = maximize(&a, &[big, big], &[big, big], None);
        let LpOutcome::Optimal { value, point, .. } = out else { panic!() };
        let expect_x = q(big, 1) * (q(big, 1) - q(1, 1)) / (q(big, 1) * q(big, 1) - q(1, 1));
        assert_eq!(point[0], expect_x);
        assert_eq!(value, q(big, 1) * (expect_x.clone() + expect_x));
    }
}
