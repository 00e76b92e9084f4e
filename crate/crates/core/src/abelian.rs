//! Homomorphisms `F_m -> Z^r` and basis normalization by Nielsen moves.
//!
//! A [`FactorHom`] is an integer `m x r` matrix whose row `j` is the image of
//! `e_j`. [`normalize_basis`] row-reduces that matrix to `[I_r; 0]` using only
//! elementary operations, recording each as the matching Nielsen move on the
//! free basis:
//!
//! | row operation          | Nielsen move            |
//! |------------------------|-------------------------|
//! | swap rows `i`, `j`     | swap `f_i`, `f_j`       |
//! | negate row `i`         | `f_i <- f_i^-1`         |
//! | row `i` += ε row `j`   | `f_i <- f_i f_j^ε`      |

use std::fmt;
use std::ops::{Add, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Word, FreeGroup};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianVector(Vec<i64>);

impl AbelianVector {
    pub fn zero(r: usize) -> Self {
        AbelianVector(vec![0; r])
    }

    /// `t_i`, 1-based.
    pub fn basis(r: usize, i: usize) -> Self {
        let mut v = vec![0; r];
        v[i - 1] = 1;
        AbelianVector(v)
    }

    pub fn from_vec(v: Vec<i64>) -> Self {
        AbelianVector(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add_scaled(&mut self, other: &AbelianVector, k: i64) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += k * b;
        }
    }
}

impl fmt::Debug for AbelianVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Add for &AbelianVector {
    type Output = AbelianVector;
    fn add(self, rhs: &AbelianVector) -> AbelianVector {
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

impl Neg for &AbelianVector {
    type Output = AbelianVector;
    fn neg(self) -> AbelianVector {
        AbelianVector(self.0.iter().map(|c| -c).collect())
    }
}

/// Homomorphism from a rank-`m` free group to `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HomRepr", into = "HomRepr")]
pub struct FactorHom {
    m: usize,
    r: usize,
    images: Vec<AbelianVector>,
}

#[derive(Serialize, Deserialize)]
struct HomRepr {
    m: usize,
    r: usize,
    rows: Vec<Vec<i64>>,
}

impl TryFrom<HomRepr> for FactorHom {
    type Error = Error;
    fn try_from(repr: HomRepr) -> Result<Self> {
        FactorHom::new(repr.m, repr.r, repr.rows)
    }
}

impl From<FactorHom> for HomRepr {
    fn from(h: FactorHom) -> Self {
        HomRepr {
            m: h.m,
            r: h.r,
            rows: h.images.into_iter().map(|v| v.0).collect(),
        }
    }
}

impl FactorHom {
    pub fn new(m: usize, r: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.len() != m {
            return Err(Error::InvalidArgument(format!("expected {m} rows, got {}", rows.len())));
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != r) {
            return Err(Error::InvalidArgument(format!(
                "expected rows of length {r}, got one of length {}",
                bad.len()
            )));
        }
        Ok(FactorHom {
            m,
            r,
            images: rows.into_iter().map(AbelianVector).collect(),
        })
    }

    /// `e_j -> t_j` for `j <= r`, `e_j -> 0` otherwise.
    pub fn standard(m: usize, r: usize) -> Result<Self> {
        if r > m {
            return Err(Error::InvalidArgument(format!("target rank {r} exceeds rank {m}")));
        }
        let rows = (1..=m)
            .map(|j| {
                if j <= r {
                    AbelianVector::basis(r, j).0
                } else {
                    vec![0; r]
                }
            })
            .collect();
        FactorHom::new(m, r, rows)
    }

    /// Parses `{"m":..,"r":..,"rows":[..]}` or a bare row list `[[..],..]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("matrix JSON: {e}")))?;
        if value.is_array() {
            let rows: Vec<Vec<i64>> =
                serde_json::from_value(value).map_err(|e| Error::InvalidArgument(format!("matrix JSON: {e}")))?;
            let m = rows.len();
            let r = rows.first().map_or(0, Vec::len);
            FactorHom::new(m, r, rows)
        } else {
            serde_json::from_value(value).map_err(|e| Error::InvalidArgument(format!("matrix JSON: {e}")))
        }
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn target_rank(&self) -> usize {
        self.r
    }

    pub fn images(&self) -> &[AbelianVector] {
        &self.images
    }

    pub fn image(&self, j: u32) -> &AbelianVector {
        &self.images[j as usize - 1]
    }

    pub fn domain(&self) -> FreeGroup {
        FreeGroup::new(self.m)
    }

    /// Abelianized image of `w`.
    pub fn ab_image(&self, w: &Word) -> Result<AbelianVector> {
        self.domain().check(w)?;
        Ok(self.ab_image_unchecked(w))
    }

    pub(crate) fn ab_image_unchecked(&self, w: &Word) -> AbelianVector {
        let mut out = AbelianVector::zero(self.r);
        for l in w.letters() {
            out.add_scaled(self.image(l.generator()), l.sign());
        }
        out
    }

    /// True iff the rows generate `Z^r`.
    pub fn is_surjective(&self) -> bool {
        let mut rows: Vec<Vec<i64>> = self.images.iter().map(|v| v.0.clone()).collect();
        hermite_reduce(&mut rows, self.r, &mut |_| {})
    }

    /// `self` precomposed with the basis change: row `i` becomes the image of
    /// the `i`-th new basis word.
    pub fn compose(&self, change: &BasisChange) -> FactorHom {
        FactorHom {
            m: self.m,
            r: self.r,
            images: change.new_basis.iter().map(|w| self.ab_image_unchecked(w)).collect(),
        }
    }
}

/// Elementary automorphism of a free basis. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum NielsenMove {
    Swap { i: usize, j: usize },
    Invert { i: usize },
    /// `f_i <- f_i f_j^sign`
    Multiply { i: usize, j: usize, sign: i8 },
}

impl NielsenMove {
    pub fn inverse(self) -> NielsenMove {
        match self {
            NielsenMove::Multiply { i, j, sign } => NielsenMove::Multiply { i, j, sign: -sign },
            other => other,
        }
    }

    pub fn apply(self, basis: &mut [Word]) {
        match self {
            NielsenMove::Swap { i, j } => basis.swap(i - 1, j - 1),
            NielsenMove::Invert { i } => basis[i - 1] = basis[i - 1].inv(),
            NielsenMove::Multiply { i, j, sign } => {
                let f = if sign > 0 { basis[j - 1].clone() } else { basis[j - 1].inv() };
                basis[i - 1].mul_assign(&f);
            }
        }
    }

    fn apply_rows(self, rows: &mut [Vec<i64>]) {
        match self {
            NielsenMove::Swap { i, j } => rows.swap(i - 1, j - 1),
            NielsenMove::Invert { i } => rows[i - 1].iter_mut().for_each(|c| *c = -*c),
            NielsenMove::Multiply { i, j, sign } => {
                let src = rows[j - 1].clone();
                for (a, b) in rows[i - 1].iter_mut().zip(src) {
                    *a += sign as i64 * b;
                }
            }
        }
    }
}

/// Audit trail of a basis normalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisChange {
    pub moves: Vec<NielsenMove>,
    /// New basis words, written in the old basis.
    pub new_basis: Vec<Word>,
}

impl BasisChange {
    /// Applies `moves` to the standard basis of `F_m`.
    pub fn replay(moves: &[NielsenMove], m: usize) -> Vec<Word> {
        let mut basis = FreeGroup::new(m).basis();
        for mv in moves {
            mv.apply(&mut basis);
        }
        basis
    }

    pub fn inverse_moves(&self) -> Vec<NielsenMove> {
        self.moves.iter().rev().map(|m| m.inverse()).collect()
    }
}

/// Brings `rows` (`m x r`) to `[I_r; 0]` with elementary row operations,
/// reporting each one. Returns false if the row lattice is not `Z^r`; the
/// matrix is then left partially reduced.
///
/// Pivot choice: smallest nonzero absolute value in the column, lowest row
/// index on ties.
fn hermite_reduce(rows: &mut [Vec<i64>], r: usize, emit: &mut dyn FnMut(NielsenMove)) -> bool {
    let m = rows.len();
    let mut op = |mv: NielsenMove, rows: &mut [Vec<i64>]| {
        mv.apply_rows(rows);
        emit(mv);
    };
    for c in 0..r {
        loop {
            let pivot = (c..m)
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| (rows[i][c].abs(), i));
            let Some(p) = pivot else {
                return false;
            };
            if p != c {
                op(NielsenMove::Swap { i: c + 1, j: p + 1 }, rows);
            }
            let mut clean = true;
            for i in c + 1..m {
                let q = rows[i][c] / rows[c][c];
                let sign = if q > 0 { -1 } else { 1 };
                for _ in 0..q.abs() {
                    op(NielsenMove::Multiply { i: i + 1, j: c + 1, sign }, rows);
                }
                clean &= rows[i][c] == 0;
            }
            if clean {
                break;
            }
        }
        if rows[c][c] < 0 {
            op(NielsenMove::Invert { i: c + 1 }, rows);
        }
        if rows[c][c] != 1 {
            return false;
        }
    }
    for c in (0..r).rev() {
        for d in c + 1..r {
            let q = rows[c][d];
            let sign = if q > 0 { -1 } else { 1 };
            for _ in 0..q.abs() {
                op(NielsenMove::Multiply { i: c + 1, j: d + 1, sign }, rows);
            }
        }
    }
    true
}

/// Finds a free basis on which `h` is standard: the `i`-th new basis word
/// maps to `t_i` for `i <= r` and to `0` beyond.
pub fn normalize_basis(h: &FactorHom) -> Result<BasisChange> {
    let mut rows: Vec<Vec<i64>> = h.images.iter().map(|v| v.0.clone()).collect();
    let mut moves = Vec::new();
    if !hermite_reduce(&mut rows, h.r, &mut |mv| moves.push(mv)) {
        return Err(Error::NotSurjective(h.r));
    }
    let new_basis = BasisChange::replay(&moves, h.m);
    Ok(BasisChange { moves, new_basis })
}
