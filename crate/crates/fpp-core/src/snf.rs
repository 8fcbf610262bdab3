//! Smith normal form of integer matrices, with the unimodular transforms
//! tracked so generator images in the quotient can be read off.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = IntegerMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntegerMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let t = q * &self[(b, j)];
            self[(a, j)] += t;
        }
    }

    /// col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let t = q * &self[(i, b)];
            self[(i, a)] += t;
        }
    }

    /// (row[a], row[b]) <- (c00*row[a] + c01*row[b], c10*row[a] + c11*row[b])
    fn combine_rows(
        &mut self,
        a: usize,
        b: usize,
        c00: &BigInt,
        c01: &BigInt,
        c10: &BigInt,
        c11: &BigInt,
    ) {
        for j in 0..self.cols {
            let ra = self[(a, j)].clone();
            let rb = self[(b, j)].clone();
            self[(a, j)] = c00 * &ra + c01 * &rb;
            self[(b, j)] = c10 * &ra + c11 * &rb;
        }
    }

    /// (col[a], col[b]) <- (c00*col[a] + c01*col[b], c10*col[a] + c11*col[b])
    fn combine_cols(
        &mut self,
        a: usize,
        b: usize,
        c00: &BigInt,
        c01: &BigInt,
        c10: &BigInt,
        c11: &BigInt,
    ) {
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = c00 * &ca + c01 * &cb;
            self[(i, b)] = c10 * &ca + c11 * &cb;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -&self[(a, j)];
            self[(a, j)] = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination; used in tests to
    /// certify unimodularity.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = &num / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// U * M * V = S with U, V unimodular and S diagonal with a divisibility chain.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub s: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries d_1 | d_2 | ... (all positive).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows.min(self.s.cols);
        (0..n)
            .map(|i| self.s[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    let mut s = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut k = 0;
    while k < n {
        // pivot: nonzero entry of minimal absolute value in the submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..s.rows {
            for j in k..s.cols {
                if !s[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| s[(i, j)].abs() < s[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap_rows(k, pi);
        u.swap_rows(k, pi);
        s.swap_cols(k, pj);
        v.swap_cols(k, pj);

        // Clear row and column k. A divisible entry is removed by an
        // ordinary elimination step; anything else by a single unimodular
        // 2x2 combine built from the extended gcd, which zeroes the entry
        // and replaces the pivot with gcd(pivot, entry) in one step. (The
        // one-step form matters: eliminating by repeated remainder swaps
        // makes the off-pivot entries grow multiplicatively per pass, which
        // blows up even on small dense matrices.) Column combines can
        // reintroduce entries below the pivot, but only when they shrank
        // the pivot to a proper divisor, so the loop is short.
        loop {
            for i in k + 1..s.rows {
                if s[(i, k)].is_zero() {
                    continue;
                }
                if (&s[(i, k)] % &s[(k, k)]).is_zero() {
                    let q = -(&s[(i, k)] / &s[(k, k)]);
                    s.add_row(i, k, &q);
                    u.add_row(i, k, &q);
                } else {
                    let p = s[(k, k)].clone();
                    let a = s[(i, k)].clone();
                    let eg = p.extended_gcd(&a);
                    let c10 = -(&a / &eg.gcd);
                    let c11 = &p / &eg.gcd;
                    s.combine_rows(k, i, &eg.x, &eg.y, &c10, &c11);
                    u.combine_rows(k, i, &eg.x, &eg.y, &c10, &c11);
                }
            }
            for j in k + 1..s.cols {
                if s[(k, j)].is_zero() {
                    continue;
                }
                if (&s[(k, j)] % &s[(k, k)]).is_zero() {
                    let q = -(&s[(k, j)] / &s[(k, k)]);
                    s.add_col(j, k, &q);
                    v.add_col(j, k, &q);
                } else {
                    let p = s[(k, k)].clone();
                    let a = s[(k, j)].clone();
                    let eg = p.extended_gcd(&a);
                    let c10 = -(&a / &eg.gcd);
                    let c11 = &p / &eg.gcd;
                    s.combine_cols(k, j, &eg.x, &eg.y, &c10, &c11);
                    v.combine_cols(k, j, &eg.x, &eg.y, &c10, &c11);
                }
            }
            let clean = (k + 1..s.rows).all(|i| s[(i, k)].is_zero())
                && (k + 1..s.cols).all(|j| s[(k, j)].is_zero());
            if clean {
                break;
            }
        }

        // enforce divisibility: if some later entry is not divisible by the
        // pivot, fold its row in and redo this position
        let mut redo = false;
        'check: for i in k + 1..s.rows {
            for j in k + 1..s.cols {
                if !s[(i, j)].mod_floor(&s[(k, k)]).is_zero() {
                    let one = BigInt::one();
                    s.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                    redo = true;
                    break 'check;
                }
            }
        }
        if redo {
            continue;
        }
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
        k += 1;
    }
    SnfResult { s, u, v }
}

/// Invariant factors of the cokernel Z^cols / rowspan(M).
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct InvariantFactors {
    pub free_rank: usize,
    /// torsion coefficients > 1, each dividing the next
    pub torsion: Vec<BigInt>,
}

impl InvariantFactors {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// e.g. "Z^2 x Z/2 x Z/6", or "1" for the trivial group
    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" x ")
        }
    }
}

/// Cokernel invariants of M acting on Z^cols by its row span.
pub fn cokernel_invariants(m: &IntegerMatrix) -> (InvariantFactors, SnfResult) {
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let torsion: Vec<BigInt> = diag.iter().filter(|d| !d.is_one()).cloned().collect();
    let inv = InvariantFactors { free_rank: m.cols - diag.len(), torsion };
    (inv, snf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntegerMatrix) -> SnfResult {
        let r = smith_normal_form(m);
        // U M V = S
        assert_eq!(r.u.mul(m).mul(&r.v), r.s);
        // unimodular
        assert_eq!(r.u.determinant().abs(), BigInt::one());
        assert_eq!(r.v.determinant().abs(), BigInt::one());
        // diagonal, nonnegative, divisibility chain
        for i in 0..r.s.rows {
            for j in 0..r.s.cols {
                if i != j {
                    assert!(r.s[(i, j)].is_zero(), "off-diagonal at ({i},{j})");
                }
            }
        }
        let d = r.diagonal();
        for w in d.windows(2) {
            assert!(w[1].mod_floor(&w[0]).is_zero(), "chain broken: {w:?}");
        }
        // all entries past the chain are zero
        for i in d.len()..r.s.rows.min(r.s.cols) {
            assert!(r.s[(i, i)].is_zero());
        }
        r
    }

    /// Independent oracle: d_1 * ... * d_k = gcd of all k x k minors.
    fn minor_gcd(m: &IntegerMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combos(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        let mut c = vec![first];
                        c.append(&mut rest);
                        out.push(c);
                    }
                }
            }
            out
        }
        let mut g = BigInt::zero();
        for ri in combos(m.rows, k) {
            for ci in combos(m.cols, k) {
                let mut sub = IntegerMatrix::zero(k, k);
                for (a, &i) in ri.iter().enumerate() {
                    for (b, &j) in ci.iter().enumerate() {
                        sub[(a, b)] = m[(i, j)].clone();
                    }
                }
                g = g.gcd(&sub.determinant());
            }
        }
        g
    }

    #[test]
    fn known_small_cases() {
        let r = check(&IntegerMatrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]));
        assert_eq!(
            r.diagonal(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
        let r = check(&IntegerMatrix::from_i64(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(r.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_and_identity() {
        let r = check(&IntegerMatrix::zero(2, 3));
        assert!(r.diagonal().is_empty());
        let r = check(&IntegerMatrix::identity(4));
        assert_eq!(r.diagonal().len(), 4);
    }

    #[test]
    fn cokernel_of_empty_relations() {
        let (inv, _) = cokernel_invariants(&IntegerMatrix::zero(0, 3));
        assert_eq!(inv.free_rank, 3);
        assert!(inv.torsion.is_empty());
        assert_eq!(inv.display(), "Z^3");
    }

    #[test]
    fn cokernel_klein_four() {
        let m = IntegerMatrix::from_i64(&[vec![2, 0], vec![0, 2]]);
        let (inv, _) = cokernel_invariants(&m);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(inv.display(), "Z/2 x Z/2");
        assert_eq!(inv.torsion_order(), BigInt::from(4));
    }

    #[test]
    fn minor_gcd_oracle_fixed() {
        let m = IntegerMatrix::from_i64(&[vec![6, 4, 2], vec![4, 8, 12], vec![2, 12, 34]]);
        let r = check(&m);
        let d = r.diagonal();
        let mut prod = BigInt::one();
        for (k, dk) in d.iter().enumerate() {
            prod *= dk;
            assert_eq!(prod, minor_gcd(&m, k + 1));
        }
    }

    #[test]
    fn dense_matrix_regression() {
        // With remainder-swap elimination this input made the entries grow
        // past half a million bits; the gcd-combine form finishes instantly.
        let m = IntegerMatrix::from_i64(&[
            vec![12, 23, -17, 20, 9],
            vec![6, -23, 0, 11, 17],
            vec![-27, -20, -26, -4, 4],
            vec![29, 11, -24, -6, 10],
            vec![28, -9, -9, -5, -12],
            vec![-21, 14, -16, -25, -28],
        ]);
        let r = check(&m);
        let d = r.diagonal();
        let mut prod = BigInt::one();
        for (k, dk) in d.iter().enumerate() {
            prod *= dk;
            assert_eq!(prod, minor_gcd(&m, k + 1));
        }
    }

    proptest! {
        #[test]
        fn snf_random(entries in proptest::collection::vec(-20i64..20, 12)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let m = IntegerMatrix::from_i64(&rows);
            let r = check(&m);
            // oracle on the first invariant factor
            let d = r.diagonal();
            if let Some(d1) = d.first() {
                prop_assert_eq!(d1.clone(), minor_gcd(&m, 1));
            }
        }

        #[test]
        fn snf_random_square(entries in proptest::collection::vec(-9i64..9, 9)) {
            let rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let m = IntegerMatrix::from_i64(&rows);
            let r = check(&m);
            let d = r.diagonal();
            let mut prod = BigInt::one();
            for (k, dk) in d.iter().enumerate() {
                prod *= dk;
                prop_assert_eq!(prod.clone(), minor_gcd(&m, k + 1));
            }
        }
    }
}
