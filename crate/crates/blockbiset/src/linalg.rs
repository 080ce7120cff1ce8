//! Exact Gaussian elimination over GF(p^m).
//!
//! Everything is deterministic: pivots are the first nonzero entry of an
//! incoming row, and the maintained basis is in reduced row-echelon form,
//! so a span has exactly one stored basis no matter the insertion order
//! of equivalent row sets.

use crate::field::{FieldElement, FiniteField, MulScratch};

/// Incremental row-space accumulator in reduced row-echelon form.
pub struct RowSpace<'f> {
    field: &'f FiniteField,
    cols: usize,
    /// (pivot column, row) sorted by pivot column; rows are normalized to
    /// pivot 1 and fully reduced against each other.
    rows: Vec<(usize, Vec<FieldElement>)>,
    scratch: MulScratch,
}

impl<'f> RowSpace<'f> {
    pub fn new(field: &'f FiniteField, cols: usize) -> Self {
        RowSpace { field, cols, rows: Vec::new(), scratch: MulScratch::default() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `v` against the current basis in place.
    pub fn reduce(&mut self, v: &mut [FieldElement]) {
        debug_assert_eq!(v.len(), self.cols);
        let f = self.field;
        for (pivot, row) in &self.rows {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let factor = f.neg(&v[*pivot]);
            f.row_axpy(v, &factor, row, &mut self.scratch);
        }
    }

    /// Inserts a row; returns true if it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<FieldElement>) -> bool {
        self.reduce(&mut v);
        let f = self.field;
        let Some(pivot) = v.iter().position(|c| !f.is_zero(c)) else {
            return false;
        };
        let inv = f.inv(&v[pivot]);
        let mut tmp = f.zero();
        for c in v.iter_mut() {
            f.mul_into(&mut tmp, &inv, c, &mut self.scratch);
            std::mem::swap(c, &mut tmp);
        }
        // back-eliminate the new pivot from existing rows
        for (_, row) in self.rows.iter_mut() {
            if f.is_zero(&row[pivot]) {
                continue;
            }
            let factor = f.neg(&row[pivot]);
            f.row_axpy(row, &factor, &v, &mut self.scratch);
        }
        let at = self.rows.partition_point(|(pc, _)| *pc < pivot);
        self.rows.insert(at, (pivot, v));
        true
    }

    pub fn contains(&mut self, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|c| self.field.is_zero(c))
    }

    /// The canonical (RREF) basis, ordered by pivot column.
    pub fn basis(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _)| *p)
    }

    /// Coordinates of a member vector with respect to the RREF basis;
    /// with pivots normalized to 1 these are just the pivot entries.
    pub fn coordinates(&mut self, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        let coords: Vec<FieldElement> =
            self.rows.iter().map(|(p, _)| v[*p].clone()).collect();
        // verify membership
        let f = self.field;
        let mut rem = v.to_vec();
        for ((_, row), c) in self.rows.iter().zip(&coords) {
            let factor = f.neg(c);
            f.row_axpy(&mut rem, &factor, row, &mut self.scratch);
        }
        if rem.iter().all(|c| f.is_zero(c)) {
            Some(coords)
        } else {
            None
        }
    }
}

/// Rank of an explicit list of rows.
pub fn rank_of_rows(field: &FiniteField, cols: usize, rows: &[Vec<FieldElement>]) -> usize {
    let mut space = RowSpace::new(field, cols);
    for r in rows {
        space.insert(r.clone());
    }
    space.rank()
}

/// Canonical basis of {v : Mv = 0}, where the rows of `rows` are the
/// equations. One basis vector per free column, in ascending column
/// order, each with a 1 in its free position.
pub fn nullspace(
    field: &FiniteField,
    cols: usize,
    rows: &[Vec<FieldElement>],
) -> Vec<Vec<FieldElement>> {
    let mut space = RowSpace::new(field, cols);
    for r in rows {
        space.insert(r.clone());
    }
    let pivots: Vec<usize> = space.pivots().collect();
    let rref: Vec<Vec<FieldElement>> = space.basis().map(|r| r.to_vec()).collect();
    let mut out = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (row, &p) in rref.iter().zip(&pivots) {
            v[p] = field.neg(&row[free]);
        }
        out.push(v);
    }
    out
}

/// Coefficients c with sum(c_i * rows_i) = target, if target lies in the
/// row span. Gaussian elimination with combination tracking.
pub fn express_in_rows(
    field: &FiniteField,
    rows: &[Vec<FieldElement>],
    target: &[FieldElement],
) -> Option<Vec<FieldElement>> {
    let n = rows.len();
    let mut scratch = MulScratch::default();
    // working rows augmented with the identity to track combinations
    let mut work: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut combo = vec![field.zero(); n];
            combo[i] = field.one();
            (r.clone(), combo)
        })
        .collect();
    let mut echelon: Vec<(usize, Vec<FieldElement>, Vec<FieldElement>)> = Vec::new();
    for (mut row, mut combo) in work.drain(..) {
        for (p, er, ec) in &echelon {
            if field.is_zero(&row[*p]) {
                continue;
            }
            let factor = field.neg(&row[*p]);
            field.row_axpy(&mut row, &factor, er, &mut scratch);
            field.row_axpy(&mut combo, &factor, ec, &mut scratch);
        }
        if let Some(p) = row.iter().position(|c| !field.is_zero(c)) {
            let inv = field.inv(&row[p]);
            let mut tmp = field.zero();
            for c in row.iter_mut().chain(combo.iter_mut()) {
                field.mul_into(&mut tmp, &inv, c, &mut scratch);
                std::mem::swap(c, &mut tmp);
            }
            echelon.push((p, row, combo));
        }
    }
    let mut rem = target.to_vec();
    let mut coeffs = vec![field.zero(); n];
    let mut tmp = field.zero();
    for (p, er, ec) in &echelon {
        if field.is_zero(&rem[*p]) {
            continue;
        }
        let factor = rem[*p].clone();
        for (c, e) in coeffs.iter_mut().zip(ec) {
            field.mul_into(&mut tmp, &factor, e, &mut scratch);
            field.add_assign(c, &tmp);
        }
        let neg = field.neg(&factor);
        field.row_axpy(&mut rem, &neg, er, &mut scratch);
    }
    if rem.iter().all(|c| field.is_zero(c)) {
        Some(coeffs)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecf(f: &FiniteField, vals: &[u64]) -> Vec<FieldElement> {
        vals.iter().map(|&v| f.from_int(v)).collect()
    }

    #[test]
    fn rank_and_membership() {
        let f = FiniteField::new(5, 1);
        let mut s = RowSpace::new(&f, 3);
        assert!(s.insert(vecf(&f, &[1, 2, 3])));
        assert!(s.insert(vecf(&f, &[0, 1, 4])));
        assert!(!s.insert(vecf(&f, &[1, 3, 2]))); // sum of the first two
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&vecf(&f, &[2, 4, 1])));
        assert!(!s.contains(&vecf(&f, &[0, 0, 1])));
    }

    #[test]
    fn rref_is_canonical() {
        let f = FiniteField::new(3, 1);
        let mut a = RowSpace::new(&f, 3);
        a.insert(vecf(&f, &[1, 1, 0]));
        a.insert(vecf(&f, &[0, 1, 1]));
        let mut b = RowSpace::new(&f, 3);
        b.insert(vecf(&f, &[2, 0, 1])); // same span, different presentation
        b.insert(vecf(&f, &[1, 2, 1]));
        let rows_a: Vec<_> = a.basis().map(|r| r.to_vec()).collect();
        let rows_b: Vec<_> = b.basis().map(|r| r.to_vec()).collect();
        assert_eq!(rows_a, rows_b);
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let f = FiniteField::new(5, 1);
        // rows: [1,2,0], [0,0,1] -> kernel spanned by [-2,1,0] = [3,1,0]
        let rows = vec![vecf(&f, &[1, 2, 0]), vecf(&f, &[0, 0, 1])];
        let ns = nullspace(&f, 3, &rows);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vecf(&f, &[3, 1, 0]));
        // verify: each equation annihilates the kernel vector
        for row in &rows {
            let mut acc = f.zero();
            for (a, b) in row.iter().zip(&ns[0]) {
                acc = f.add(&acc, &f.mul(a, b));
            }
            assert!(f.is_zero(&acc));
        }
    }

    #[test]
    fn express_in_rows_finds_combinations() {
        let f = FiniteField::new(7, 1);
        let rows = vec![vecf(&f, &[1, 1, 0]), vecf(&f, &[0, 1, 1]), vecf(&f, &[1, 2, 1])];
        let target = vecf(&f, &[2, 3, 1]);
        let coeffs = express_in_rows(&f, &rows, &target).unwrap();
        // reconstruct
        let mut acc = vecf(&f, &[0, 0, 0]);
        for (c, row) in coeffs.iter().zip(&rows) {
            for (a, b) in acc.iter_mut().zip(row) {
                *a = f.add(a, &f.mul(c, b));
            }
        }
        assert_eq!(acc, target);
        assert!(express_in_rows(&f, &rows[..1], &vecf(&f, &[0, 0, 1])).is_none());
    }

    #[test]
    fn coordinates_recover_combinations() {
        let f = FiniteField::new(7, 1);
        let mut s = RowSpace::new(&f, 4);
        s.insert(vecf(&f, &[1, 0, 2, 0]));
        s.insert(vecf(&f, &[0, 1, 3, 5]));
        let v = vecf(&f, &[3, 2, 5, 3]); // 3*r0 + 2*r1 = [3,2,12,10] = [3,2,5,3] mod 7
        let coords = s.coordinates(&v).unwrap();
        assert_eq!(coords, vecf(&f, &[3, 2]));
        assert!(s.coordinates(&vecf(&f, &[0, 0, 0, 1])).is_none());
    }
}
