//! Zero/non-zero patterns and the structural properties (P1)-(P4).

use crate::error::{Error, Result};
use crate::ratlin::{Cell, ZeroNonzeroMask};

/// A zero/non-zero pattern. `Unit` cells hold the exact value 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternMatrix {
    mask: ZeroNonzeroMask,
}

impl PatternMatrix {
    pub fn new(mask: ZeroNonzeroMask) -> Self {
        PatternMatrix { mask }
    }

    /// Parses rows of `0`, `1`, `*`.
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut mask = ZeroNonzeroMask::new(rows.len(), cols, Cell::Zero);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged pattern");
            for (j, c) in r.chars().enumerate() {
                let cell = match c {
                    '0' => Cell::Zero,
                    '1' => Cell::Unit,
                    '*' => Cell::Free,
                    other => panic!("bad pattern character {other:?}"),
                };
                mask.set(i, j, cell);
            }
        }
        PatternMatrix { mask }
    }

    /// The `n × n` identity pattern.
    pub fn identity(n: usize) -> Self {
        let mut mask = ZeroNonzeroMask::new(n, n, Cell::Zero);
        for i in 0..n {
            mask.set(i, i, Cell::Unit);
        }
        PatternMatrix { mask }
    }

    pub fn mask(&self) -> &ZeroNonzeroMask {
        &self.mask
    }

    pub fn rows(&self) -> usize {
        self.mask.rows()
    }

    pub fn cols(&self) -> usize {
        self.mask.cols()
    }

    pub fn nonzero(&self, i: usize, j: usize) -> bool {
        self.mask.nonzero(i, j)
    }

    pub fn render(&self) -> String {
        self.mask.render()
    }

    pub fn permute_columns(&self, order: &[usize]) -> Self {
        PatternMatrix { mask: self.mask.permute_columns(order) }
    }

    /// Positions of the fixed entries.
    pub fn fixed_entries(&self) -> Vec<(usize, usize)> {
        (0..self.rows())
            .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.mask.get(i, j) == Cell::Unit)
            .collect()
    }

    /// Row `i` if column `j` is the unit vector `e_i` (a single `Unit` cell).
    pub fn unit_row(&self, j: usize) -> Option<usize> {
        let nz: Vec<usize> = (0..self.rows()).filter(|&i| self.nonzero(i, j)).collect();
        match nz.as_slice() {
            [i] if self.mask.get(*i, j) == Cell::Unit => Some(*i),
            _ => None,
        }
    }

    /// For each row `i`, the first column equal to `e_i`.
    pub fn identity_columns(&self) -> Option<Vec<usize>> {
        (0..self.rows()).map(|i| (0..self.cols()).find(|&j| self.unit_row(j) == Some(i))).collect()
    }

    /// Columns outside the identity block chosen by [`Self::identity_columns`].
    pub fn non_identity_columns(&self) -> Vec<usize> {
        let id = self.identity_columns().unwrap_or_default();
        (0..self.cols()).filter(|j| !id.contains(j)).collect()
    }

    pub fn row_count(&self, i: usize) -> usize {
        (0..self.cols()).filter(|&j| self.nonzero(i, j)).count()
    }

    pub fn column_count(&self, j: usize) -> usize {
        (0..self.rows()).filter(|&i| self.nonzero(i, j)).count()
    }

    pub fn check_p1(&self) -> Result<()> {
        match self.identity_columns() {
            Some(_) => Ok(()),
            None => Err(violation("P1", "identity block missing".into())),
        }
    }

    pub fn check_p2(&self) -> Result<()> {
        self.check_p1()?;
        for j in self.non_identity_columns() {
            let c = self.column_count(j);
            if c < 2 || c == self.rows() {
                return Err(violation("P2", format!("column {} has {c} non-zero entries", j + 1)));
            }
        }
        Ok(())
    }

    pub fn check_p3(&self) -> Result<()> {
        let n = self.rows();
        for i in 0..n {
            let c = self.row_count(i);
            if c != n {
                return Err(violation("P3", format!("row {} has {c} non-zero entries", i + 1)));
            }
        }
        Ok(())
    }

    pub fn check_p4(&self) -> Result<()> {
        for i in 0..self.rows() {
            if self.representatives(i).is_none() {
                return Err(violation("P4", format!("row {} has no distinct representatives", i + 1)));
            }
        }
        Ok(())
    }

    /// (P1)-(P4).
    pub fn validate(&self) -> Result<()> {
        self.check_p1()?;
        self.check_p2()?;
        self.check_p3()?;
        self.check_p4()
    }

    /// Distinct columns `j_1, .., j_n` with `(i, j_l)` and `(l, j_l)` non-zero.
    pub fn representatives(&self, i: usize) -> Option<Vec<usize>> {
        let candidates: Vec<usize> = (0..self.cols()).filter(|&j| self.nonzero(i, j)).collect();
        let adj: Vec<Vec<usize>> = (0..self.rows())
            .map(|l| candidates.iter().copied().filter(|&j| self.nonzero(l, j)).collect())
            .collect();
        perfect_matching(&adj, self.cols())
    }
}

fn violation(property: &'static str, detail: String) -> Error {
    Error::PatternViolation { property, detail }
}

/// Kuhn's augmenting-path matching of every left vertex; `adj[l]` lists the
/// right vertices in `0..right`. Returns the matched right vertex per left one.
pub(crate) fn perfect_matching(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    fn augment(l: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &r in &adj[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[r] = Some(l);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for l in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(l, adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; adj.len()];
    for (r, o) in owner.iter().enumerate() {
        if let Some(l) = o {
            out[*l] = r;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_basics() {
        assert_eq!(perfect_matching(&[vec![0, 1], vec![0]], 2), Some(vec![1, 0]));
        assert_eq!(perfect_matching(&[vec![0], vec![0]], 2), None);
    }

    #[test]
    fn property_failures_are_named() {
        let p = PatternMatrix::from_strs(&["1*", "0*"]);
        assert!(matches!(p.validate(), Err(Error::PatternViolation { property: "P1", .. })));
        let p = PatternMatrix::from_strs(&["10*", "01*"]);
        assert!(matches!(p.validate(), Err(Error::PatternViolation { property: "P2", .. })));
        let p = PatternMatrix::from_strs(&["100*", "010*", "0010"]);
        assert!(matches!(p.check_p3(), Err(Error::PatternViolation { property: "P3", .. })));
    }
}
