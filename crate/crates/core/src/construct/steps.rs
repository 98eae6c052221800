//! The base pattern and the three growth steps `n → n + 1`.
//!
//! Every step returns the new pattern together with the column arrangement
//! applied to the input (`order[k]` is the input column placed at `k`).

use super::pattern::{perfect_matching, PatternMatrix};
use crate::error::{Error, Result};
use crate::ratlin::{Cell, ZeroNonzeroMask};

/// The 3 × 6 base: identity, then three columns with one zero each on the
/// anti-diagonal positions (1,6), (2,5), (3,4).
pub fn base_pattern_36() -> PatternMatrix {
    PatternMatrix::from_strs(&["100**0", "010*0*", "0010**"])
}

/// Outcome of a step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutput {
    pub pattern: PatternMatrix,
    pub arrangement: Vec<usize>,
}

/// Copies `a` into the top-left corner of a zero pattern of the given size.
fn embed(a: &PatternMatrix, rows: usize, cols: usize) -> ZeroNonzeroMask {
    let mut m = ZeroNonzeroMask::new(rows, cols, Cell::Zero);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.mask().get(i, j));
        }
    }
    m
}

fn finish(mask: ZeroNonzeroMask, arrangement: Vec<usize>) -> Result<StepOutput> {
    let pattern = PatternMatrix::new(mask);
    pattern.validate()?;
    Ok(StepOutput { pattern, arrangement })
}

/// `(n, N) → (n + 1, N + n + 1)`: columns `N+1..N+n` pair row `i` with the new
/// row, then `e_{n+1}`.
#[allow(non_snake_case)]
pub fn step_I(a: &PatternMatrix) -> Result<StepOutput> {
    a.validate()?;
    let (n, len) = (a.rows(), a.cols());
    let mut b = embed(a, n + 1, len + n + 1);
    for i in 0..n {
        b.set(i, len + i, Cell::Free);
        b.set(n, len + i, Cell::Free);
    }
    b.set(n, len + n, Cell::Unit);
    finish(b, (0..len).collect())
}

/// Arrangement moving the first non-identity column with a zero in row 1 and
/// a non-zero in row 2 to the end. The new row only reaches rows 1 and 2
/// through columns `N` and `N+1`, so (P4) needs both.
fn step_ii_arrangement(a: &PatternMatrix) -> Result<Vec<usize>> {
    let c = a
        .non_identity_columns()
        .into_iter()
        .find(|&j| !a.nonzero(0, j) && a.nonzero(1, j) && a.column_count(j) >= 2)
        .ok_or_else(|| {
            Error::RearrangeFailure("no non-identity column with a zero in row 1 and a non-zero in row 2".into())
        })?;
    let mut order: Vec<usize> = (0..a.cols()).filter(|&j| j != c).collect();
    order.push(c);
    Ok(order)
}

/// `(n, N) → (n + 1, N + n)`: column `N` (zero in row 1) gains the new row,
/// column `N+1` covers rows 1, 2 and the new row, columns `N+2..N+n-1` pair
/// rows `3..n` with the new row, then `e_{n+1}`.
#[allow(non_snake_case)]
pub fn step_II(a: &PatternMatrix) -> Result<StepOutput> {
    let order = step_ii_arrangement(a)?;
    a.validate()?;
    let a = a.permute_columns(&order);
    let (n, len) = (a.rows(), a.cols());
    let mut b = embed(&a, n + 1, len + n);
    b.set(n, len - 1, Cell::Free);
    for r in [0, 1, n] {
        b.set(r, len, Cell::Free);
    }
    for l in 2..n {
        b.set(l, len + l - 1, Cell::Free);
        b.set(n, len + l - 1, Cell::Free);
    }
    b.set(n, len + n - 1, Cell::Unit);
    finish(b, order)
}

/// Arrangement for step III: identity first, then untouched columns, then
/// `c_{n-1}, .., c_1, c_N` where `c_N` has a zero in row `n` and `c_i` is
/// non-zero in rows `i` and `n`.
fn step_iii_arrangement(a: &PatternMatrix) -> Result<Vec<usize>> {
    let fail = |why: &str| Error::RearrangeFailure(why.into());
    let n = a.rows();
    let id = a.identity_columns().ok_or_else(|| fail("identity block missing"))?;
    let others = a.non_identity_columns();
    let last = others
        .iter()
        .copied()
        .find(|&j| !a.nonzero(n - 1, j) && a.column_count(j) >= 2)
        .ok_or_else(|| fail("no non-identity column with a zero in row n"))?;
    let adj: Vec<Vec<usize>> = (0..n - 1)
        .map(|i| {
            others
                .iter()
                .copied()
                .filter(|&j| j != last && a.nonzero(i, j) && a.nonzero(n - 1, j))
                .collect()
        })
        .collect();
    let chosen = perfect_matching(&adj, a.cols()).ok_or_else(|| fail("rows 1..n-1 cannot be matched"))?;
    let mut order = id;
    order.extend(others.iter().copied().filter(|j| *j != last && !chosen.contains(j)));
    order.extend(chosen.iter().rev());
    order.push(last);
    Ok(order)
}

/// `(n, N) → (n + 1, N + 2)`: the new row covers columns `N-n+1..N`, column
/// `N+1` is non-zero in rows `1..n`, then `e_{n+1}`.
#[allow(non_snake_case)]
pub fn step_III(a: &PatternMatrix) -> Result<StepOutput> {
    let order = step_iii_arrangement(a)?;
    a.validate()?;
    let a = a.permute_columns(&order);
    let (n, len) = (a.rows(), a.cols());
    let mut b = embed(&a, n + 1, len + 2);
    for j in len - n..len {
        b.set(n, j, Cell::Free);
    }
    for i in 0..n {
        b.set(i, len, Cell::Free);
    }
    b.set(n, len + 1, Cell::Unit);
    finish(b, order)
}
