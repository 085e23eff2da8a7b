//! Exact rational scalars, vectors, matrices and dense linear solving.
//!
//! Everything downstream (simplex, regions, projection) works on these
//! types; there is no floating point here except the one-way `to_float`
//! bridge.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational. Always kept in canonical form by
/// `num-rational`: reduced, positive denominator, zero is 0/1.
pub type Rat = BigRational;

/// Dense rational vector.
pub type RatVec = Vec<Rat>;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum NumError {
    #[error("singular matrix: rank < {0}")]
    SingularMatrix(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Shorthand constructor from an integer pair; panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand constructor from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Parses the rational text syntax shared by all file formats:
/// `p`, `-p`, or `p/q` with q > 0, ASCII decimal.
pub fn parse_rat(text: &str) -> Result<Rat, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator `{num}`"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator `{den}`"))?;
        if d <= BigInt::zero() {
            return Err(format!("denominator must be positive in `{text}`"));
        }
        Ok(Rat::new(n, d))
    } else {
        let n: BigInt = text.parse().map_err(|_| format!("bad rational `{text}`"))?;
        Ok(Rat::from_integer(n))
    }
}

/// Nearest binary64 value; magnitudes beyond the double range map to
/// signed infinity.
pub fn to_float(x: &Rat) -> f64 {
    // num-rational's conversion is correctly rounded (nearest-even) and
    // returns +-inf on overflow, which is exactly the contract we want.
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact dot product; panics on length mismatch.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `a + s * b` componentwise.
pub fn axpy(a: &[Rat], s: &Rat, b: &[Rat]) -> RatVec {
    assert_eq!(a.len(), b.len(), "axpy: length mismatch");
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Infinity norm.
pub fn norm_inf(v: &[Rat]) -> Rat {
    v.iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// 1-norm.
pub fn norm_1(v: &[Rat]) -> Rat {
    v.iter().map(|x| x.abs()).sum()
}

pub fn zeros(n: usize) -> RatVec {
    vec![Rat::zero(); n]
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "RatMat: data length mismatch");
        RatMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "RatMat: ragged rows");
        }
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix from i64 entries, row-major.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RatMat {
            rows,
            cols,
            data: entries.iter().map(|&e| rat_int(e)).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> RatVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// New matrix made of the given columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> RatMat {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        RatMat::new(self.rows, cols.len(), data)
    }

    pub fn transpose(&self) -> RatMat {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        RatMat::new(self.cols, self.rows, data)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(v.len(), self.cols, "mul_vec: length mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Rank by fraction-exact Gaussian elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            if rank == work.rows {
                break;
            }
            let pivot = (rank..work.rows).find(|&i| !work.get(i, col).is_zero());
            let Some(p) = pivot else { continue };
            work.swap_rows(rank, p);
            for i in (rank + 1)..work.rows {
                if work.get(i, col).is_zero() {
                    continue;
                }
                let factor = work.get(i, col) / work.get(rank, col);
                for j in col..work.cols {
                    let v = work.get(i, j) - &factor * work.get(rank, j);
                    work.set(i, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Solves `M x = rhs` exactly for square `M`.
///
/// Gaussian elimination with partial pivoting on the largest absolute
/// rational pivot; the pivot choice only affects intermediate growth,
/// never the (exact) result.
pub fn gauss_solve(m: &RatMat, rhs: &[Rat]) -> Result<RatVec, NumError> {
    let sol = gauss_solve_multi(m, &RatMat::new(rhs.len(), 1, rhs.to_vec()))?;
    Ok(sol.col(0))
}

/// Solves `M X = RHS` for a k x r right-hand-side block with a single
/// elimination pass. Used where several systems share one basis matrix.
pub fn gauss_solve_multi(m: &RatMat, rhs: &RatMat) -> Result<RatMat, NumError> {
    let k = m.nrows();
    if m.ncols() != k {
        return Err(NumError::DimensionMismatch(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if rhs.nrows() != k {
        return Err(NumError::DimensionMismatch(format!(
            "rhs has {} rows, expected {}",
            rhs.nrows(),
            k
        )));
    }
    let r = rhs.ncols();
    // augmented working matrix [M | RHS]
    let mut aug = RatMat::zeros(k, k + r);
    for i in 0..k {
        for j in 0..k {
            aug.set(i, j, m.get(i, j).clone());
        }
        for j in 0..r {
            aug.set(i, k + j, rhs.get(i, j).clone());
        }
    }
    for col in 0..k {
        let pivot_row = (col..k)
            .filter(|&i| !aug.get(i, col).is_zero())
            .max_by(|&a, &b| aug.get(a, col).abs().cmp(&aug.get(b, col).abs()))
            .ok_or(NumError::SingularMatrix(k))?;
        aug.swap_rows(col, pivot_row);
        let pivot = aug.get(col, col).clone();
        for j in col..(k + r) {
            let v = aug.get(col, j) / &pivot;
            aug.set(col, j, v);
        }
        for i in 0..k {
            if i == col || aug.get(i, col).is_zero() {
                continue;
            }
            let factor = aug.get(i, col).clone();
            for j in col..(k + r) {
                let v = aug.get(i, j) - &factor * aug.get(col, j);
                aug.set(i, j, v);
            }
        }
    }
    let mut out = RatMat::zeros(k, r);
    for i in 0..k {
        for j in 0..r {
            out.set(i, j, aug.get(i, k + j).clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;
    use rand::{Rng as _, SeedableRng as _};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_form() {
        let x = rat(4, -6);
        assert_eq!(x, rat(-2, 3));
        assert!(x.denom() > &BigInt::zero());
        assert_eq!(rat(0, 5), rat_int(0));
        assert_eq!(rat(0, 5).denom(), &BigInt::one());
    }

    #[test]
    fn parse_syntax() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-7").unwrap(), rat_int(-7));
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rat(" 6/8 ").unwrap(), rat(3, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat("a").is_err());
        assert!(parse_rat("1.5").is_err());
    }

    #[test]
    fn to_float_basics() {
        assert_eq!(to_float(&rat(1, 2)), 0.5);
        assert_eq!(to_float(&rat_int(0)), 0.0);
        let huge = Rat::new(BigInt::from(10).pow(400), BigInt::one());
        assert_eq!(to_float(&huge), f64::INFINITY);
        assert_eq!(to_float(&-huge), f64::NEG_INFINITY);
    }

    /// Independent extended-precision conversion: scale the numerator by
    /// 2^shift so the integer quotient has > 53 bits, then round the
    /// quotient to nearest-even by looking at the exact remainder.
    fn oracle_to_f64(x: &Rat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        let neg = x.is_negative();
        let num = x.numer().abs();
        let den = x.denom().clone();
        let shift = 64 + den.bits() as i64 - num.bits() as i64 + 64;
        let scaled = if shift >= 0 {
            &num << shift as u64
        } else {
            &num >> (-shift) as u64
        };
        let (q, r) = (scaled.clone() / &den, scaled % &den);
        // q has >= 64 significant bits; keep 53 and round.
        let bits = q.bits();
        let drop = bits as i64 - 53;
        assert!(drop > 0);
        let kept = &q >> drop as u64;
        let rem_mask = (BigInt::one() << drop as u64) - 1;
        let dropped = &q & rem_mask;
        let half = BigInt::one() << (drop - 1) as u64;
        let mut mant = kept.clone();
        if dropped > half || (dropped == half && (!r.is_zero() || (&kept & BigInt::one()) == BigInt::one())) {
            mant += 1;
        }
        let exp = (bits as i64 - shift) - 53
            + if mant.bits() > 53 {
                mant >>= 1;
                1
            } else {
                0
            };
        let m = mant.to_f64().unwrap();
        let val = m * 2f64.powi(exp as i32);
        if neg {
            -val
        } else {
            val
        }
    }

    #[test]
    fn to_float_nearest_even() {
        let cases = [
            rat(1, 3),
            rat(2, 3),
            rat(-1, 3),
            rat(1, 10),
            rat(22, 7),
            rat(355, 113),
            Rat::new(BigInt::from(1), BigInt::from(10).pow(30)),
        ];
        for x in &cases {
            assert_eq!(to_float(x), oracle_to_f64(x), "mismatch for {x}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(-1_000_000_000i64..1_000_000_000);
            let d = rng.gen_range(1i64..1_000_000_000);
            let x = rat(n, d);
            assert_eq!(to_float(&x), oracle_to_f64(&x), "mismatch for {x}");
        }
    }

    #[test]
    fn gauss_identity() {
        let m = RatMat::from_i64(2, 2, &[1, 0, 0, 1]);
        let x = gauss_solve(&m, &[rat_int(6), rat_int(6)]).unwrap();
        assert_eq!(x, vec![rat_int(6), rat_int(6)]);
    }

    #[test]
    fn gauss_basic_block() {
        // basic block of the polygon system at the optimal vertex
        let m = RatMat::from_i64(2, 2, &[3, -1, -1, 3]);
        let x = gauss_solve(&m, &[rat_int(6), rat_int(6)]).unwrap();
        assert_eq!(x, vec![rat_int(3), rat_int(3)]);
    }

    #[test]
    fn gauss_singular() {
        let m = RatMat::from_i64(2, 2, &[1, 2, 2, 4]);
        assert_eq!(
            gauss_solve(&m, &[rat_int(1), rat_int(1)]),
            Err(NumError::SingularMatrix(2))
        );
    }

    #[test]
    fn gauss_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut done = 0;
        while done < 20 {
            let m = RatMat::from_i64(
                5,
                5,
                &(0..25).map(|_| rng.gen_range(-9i64..=9)).collect::<Vec<_>>(),
            );
            let x0: RatVec = (0..5).map(|_| rat(rng.gen_range(-20i64..=20), rng.gen_range(1i64..=6))).collect();
            let rhs = m.mul_vec(&x0);
            match gauss_solve(&m, &rhs) {
                Ok(x) => {
                    assert_eq!(x, x0);
                    done += 1;
                }
                Err(NumError::SingularMatrix(_)) => continue,
                Err(e) => panic!("unexpected: {e}"),
            }
        }
    }

    proptest! {
        #[test]
        fn gauss_round_trip_prop(entries in prop::collection::vec(-9i64..=9, 9),
                                 xs in prop::collection::vec(-9i64..=9, 3)) {
            let m = RatMat::from_i64(3, 3, &entries);
            let x0: RatVec = xs.iter().map(|&v| rat_int(v)).collect();
            let rhs = m.mul_vec(&x0);
            match gauss_solve(&m, &rhs) {
                Ok(x) => prop_assert_eq!(x, x0),
                Err(NumError::SingularMatrix(_)) => {}
                Err(e) => panic!("unexpected: {e}"),
            }
        }

        #[test]
        fn parse_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = rat(n, d);
            let text = x.to_string();
            prop_assert_eq!(parse_rat(&text).unwrap(), x);
        }
    }
}
