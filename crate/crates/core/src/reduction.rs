//! Field reduction PG(m−1,qⁿ) → PG(mn−1,q), the Desarguesian spread, and
//! the linear-set trace `B(S) = {X : F(X) ∩ S ≠ ∅}` with point weights.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldTower};
use crate::linalg::Matrix;
use crate::projective::{all_points, ProjPoint, Subspace};

#[derive(Clone, Debug)]
pub struct ReductionContext {
    tower: FieldTower,
    m: usize,
}

/// A point of PG(m−1,qⁿ) together with its weight w.r.t. a subspace.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedPoint {
    pub point: ProjPoint,
    pub weight: usize,
}

impl ReductionContext {
    pub fn new(tower: FieldTower, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("field reduction needs m ≥ 1".into()));
        }
        Ok(ReductionContext { tower, m })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn base(&self) -> &Arc<Field> {
        self.tower.base()
    }

    pub fn top(&self) -> &Arc<Field> {
        self.tower.top()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.tower.n()
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    /// Dimension mn−1 of the reduced space.
    pub fn ambient_dim(&self) -> usize {
        self.m * self.n() - 1
    }

    /// GF(qⁿ)^m → GF(q)^{mn}, the coordinates of the i-th entry in block i.
    pub fn flatten(&self, v: &[Elem]) -> Vec<Elem> {
        debug_assert_eq!(v.len(), self.m);
        let top = self.top();
        v.iter().flat_map(|&x| top.coeffs(x)).collect()
    }

    pub fn unflatten(&self, w: &[Elem]) -> Vec<Elem> {
        debug_assert_eq!(w.len(), self.m * self.n());
        w.chunks(self.n()).map(|c| self.tower.from_base_vector(c)).collect()
    }

    /// Normalized point of PG(m−1,qⁿ).
    pub fn ext_point(&self, v: Vec<Elem>) -> Result<ProjPoint> {
        if v.len() != self.m {
            return Err(Error::DimensionMismatch(format!("expected {} coordinates", self.m)));
        }
        ProjPoint::new(self.top(), v)
    }

    /// The point X of PG(m−1,qⁿ) with `w ∈ F(X)`.
    pub fn point_of(&self, w: &[Elem]) -> Result<ProjPoint> {
        ProjPoint::new(self.top(), self.unflatten(w))
    }

    /// F(⟨v⟩): the GF(q)-span of {flatten(xⁱ·v) : 0 ≤ i < n}.
    pub fn reduce_vec(&self, v: &[Elem]) -> Result<Subspace> {
        if v.iter().all(|&c| c == 0) {
            return Err(Error::ZeroVector);
        }
        let top = self.top();
        let x = top.root();
        let mut lambda = 1;
        let mut rows = Vec::with_capacity(self.n());
        for _ in 0..self.n() {
            let scaled: Vec<Elem> = v.iter().map(|&c| top.mul(lambda, c)).collect();
            rows.push(self.flatten(&scaled));
            lambda = top.mul(lambda, x);
        }
        Subspace::from_rows(self.base(), self.ambient_dim(), &rows)
    }

    pub fn reduce_point(&self, p: &ProjPoint) -> Subspace {
        self.reduce_vec(p.coords()).expect("points are nonzero")
    }

    /// All points of PG(m−1,qⁿ) in enumeration order.
    pub fn ext_points(&self) -> impl Iterator<Item = ProjPoint> {
        all_points(self.top().order(), self.m - 1)
    }

    /// The Desarguesian spread {F(X) : X ∈ PG(m−1,qⁿ)}.
    pub fn spread(&self) -> Vec<Subspace> {
        self.ext_points().map(|p| self.reduce_point(&p)).collect()
    }

    /// GF(q)-linear map of GF(q)^{mn} induced by an m×m matrix over GF(qⁿ).
    pub fn induced_map(&self, a: &Matrix) -> Matrix {
        let (n, m) = (self.n(), self.m);
        let top = self.top();
        let x = top.root();
        let mut cols = Vec::with_capacity(m * n);
        for i in 0..m {
            let mut lambda = 1;
            for _ in 0..n {
                let v: Vec<Elem> = (0..m).map(|r| top.mul(a[(r, i)], lambda)).collect();
                cols.push(self.flatten(&v));
                lambda = top.mul(lambda, x);
            }
        }
        Matrix::from_columns(m * n, &cols)
    }

    /// `B(S)` with weights w(X) = dim(F(X) ∩ S) + 1, sorted by point.
    ///
    /// Small subspaces are traced point by point; large ones by meeting
    /// each spread element.
    pub fn spread_trace(&self, s: &Subspace) -> Result<Vec<WeightedPoint>> {
        if s.ambient_dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "subspace of PG({},q) traced in PG({},q)",
                s.ambient_dim(),
                self.ambient_dim()
            )));
        }
        let q = self.q() as u64;
        let spread_size = ((self.top().order() as u64).pow(self.m as u32) - 1) / (self.top().order() as u64 - 1);
        if s.num_points(self.q()) <= spread_size {
            let mut counts: BTreeMap<ProjPoint, u64> = BTreeMap::new();
            for p in s.points(self.base()) {
                *counts.entry(self.point_of(p.coords())?).or_default() += 1;
            }
            Ok(counts
                .into_iter()
                .map(|(point, c)| {
                    // c = (q^w − 1)/(q − 1)
                    let mut w = 0;
                    let mut total = 0;
                    while total < c {
                        total = total * q + 1;
                        w += 1;
                    }
                    WeightedPoint { point, weight: w }
                })
                .collect())
        } else {
            let mut out = Vec::new();
            for x in self.ext_points() {
                let meet = self.reduce_point(&x).meet(self.base(), s)?;
                if !meet.is_empty() {
                    out.push(WeightedPoint { point: x, weight: meet.rank() });
                }
            }
            out.sort();
            Ok(out)
        }
    }

    /// Σ_X (q^{w(X)} − 1)/(q − 1) = (q^r − 1)/(q − 1) over X ∈ B(S).
    pub fn weight_identity_check(&self, s: &Subspace) -> Result<bool> {
        let q = self.q() as u64;
        let mut lhs = 0;
        for wp in self.spread_trace(s)? {
            let w = self.reduce_point(&wp.point).meet(self.base(), s)?.rank();
            if w != wp.weight {
                return Ok(false);
            }
            lhs += (q.pow(w as u32) - 1) / (q - 1);
        }
        Ok(lhs == s.num_points(self.q()))
    }
}
