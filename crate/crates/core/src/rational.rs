//! Exact-arithmetic helpers: random small rationals, dense rational
//! row-reduction and nullspace extraction.
//!
//! The nullspace routine backs the lattice-placeholder machinery in
//! [`crate::gl4`]: solutions of the homogeneous shift-relation systems are
//! computed exactly so identity tests carry no floating-point tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub type Rat = BigRational;

/// `n/d` as a `BigRational`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Random rational with numerator in `[-mag, mag]` and denominator in `[1, den]`.
pub fn rand_rat<R: Rng>(rng: &mut R, mag: i64, den: i64) -> Rat {
    let n = rng.gen_range(-mag..=mag);
    let d = rng.gen_range(1..=den);
    rat(n, d)
}

/// Random nonzero rational.
pub fn rand_rat_nonzero<R: Rng>(rng: &mut R, mag: i64, den: i64) -> Rat {
    loop {
        let r = rand_rat(rng, mag, den);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Reduced row-echelon form in place. Returns the pivot column of each row.
pub fn rref(m: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        // partial pivot: any nonzero entry works in exact arithmetic; pick the
        // shortest numerator to slow coefficient growth
        let mut best: Option<usize> = None;
        for i in r..rows {
            if !m[i][c].is_zero() {
                let sz = m[i][c].numer().abs().bits() + m[i][c].denom().bits();
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        let bsz = m[b][c].numer().abs().bits() + m[b][c].denom().bits();
                        if sz < bsz {
                            best = Some(i);
                        }
                    }
                }
            }
        }
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for j in c..cols {
            m[r][j] = &m[r][j] / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of the (right) nullspace of `m`, one vector per free column.
pub fn nullspace(mut m: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    for row in &m {
        assert_eq!(row.len(), cols);
    }
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (row_idx, &p) in pivots.iter().enumerate() {
            // pivot row: x_p = -sum over free columns
            v[p] = -m[row_idx][f].clone();
        }
        basis.push(v);
    }
    basis
}
