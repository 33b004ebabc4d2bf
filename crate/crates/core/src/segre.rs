//! Subgeometries, the Segre varieties they reduce to, and transversal
//! traces of curves on a regulus.
//!
//! A Segre variety S_{n−1,m−1,q} is stored through an injective linear map
//! `σ: GF(q)^n ⊗ GF(q)^m → GF(q)^{N}`, column `i·n + j` being the image of
//! `e_j ⊗ e'_i`. The first family consists of the (n−1)-spaces σ(·, s),
//! the second of the (m−1)-spaces σ(r, ·).

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldTower};
use crate::linalg::{normalize, Matrix};
use crate::nrc::{self, moment_vector, NrcReport};
use crate::projective::{all_points, ProjPoint, Subspace};
use crate::reduction::ReductionContext;

/// A q-subgeometry of PG(M−1,qⁿ): the points Σ xᵢaᵢ with (xᵢ) ∈ PG(k,q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgeometry {
    reps: Vec<Vec<Elem>>,
}

impl Subgeometry {
    /// The subgeometry with the given representatives, which must be
    /// independent over GF(qⁿ).
    pub fn new(top: &Field, reps: Vec<Vec<Elem>>) -> Result<Self> {
        let len = reps.first().map(Vec::len).ok_or_else(|| Error::Precondition("no representatives".into()))?;
        if reps.iter().any(|r| r.len() != len) {
            return Err(Error::DimensionMismatch("representatives of different lengths".into()));
        }
        if Matrix::from_rows(len, &reps).rank(top) != reps.len() {
            return Err(Error::DegenerateFrame("representatives are dependent".into()));
        }
        Ok(Subgeometry { reps })
    }

    /// Points with GF(q) coordinates in the span of the first `k+1`
    /// coordinate vectors of GF(qⁿ)^len.
    pub fn standard(len: usize, k: usize) -> Self {
        let reps = (0..=k)
            .map(|i| {
                let mut v = vec![0; len];
                v[i] = 1;
                v
            })
            .collect();
        Subgeometry { reps }
    }

    /// The subgeometry with frame `points`: the first k+1 are its base
    /// points and the last one its unit point.
    pub fn from_frame(top: &Field, points: &[ProjPoint]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::DegenerateFrame("a frame needs at least three points".into()));
        }
        let k = points.len() - 2;
        let len = points[0].ambient_dim() + 1;
        let cols: Vec<Vec<Elem>> = points[..=k].iter().map(|p| p.coords().to_vec()).collect();
        let base = Matrix::from_columns(len, &cols);
        if base.rank(top) != k + 1 {
            return Err(Error::DegenerateFrame("base points are dependent".into()));
        }
        let c = base
            .solve(top, points[k + 1].coords())
            .ok_or_else(|| Error::DegenerateFrame("unit point outside the span of the base points".into()))?;
        if c.contains(&0) {
            return Err(Error::DegenerateFrame("frame points not in general position".into()));
        }
        let reps = points[..=k]
            .iter()
            .zip(&c)
            .map(|(p, &ci)| p.coords().iter().map(|&x| top.mul(x, ci)).collect())
            .collect();
        Ok(Subgeometry { reps })
    }

    pub fn reps(&self) -> &[Vec<Elem>] {
        &self.reps
    }

    /// Projective dimension k.
    pub fn dim(&self) -> usize {
        self.reps.len() - 1
    }

    /// Coordinate count M of the ambient space.
    pub fn len(&self) -> usize {
        self.reps[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The point with GF(q)-coordinates `x`.
    pub fn point(&self, top: &Field, x: &[Elem]) -> ProjPoint {
        ProjPoint::new(top, self.combine(top, x)).expect("representatives are independent")
    }

    fn combine(&self, top: &Field, x: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.len()];
        for (rep, &c) in self.reps.iter().zip(x) {
            if c != 0 {
                for (vi, &a) in v.iter_mut().zip(rep) {
                    *vi = top.add(*vi, top.mul(a, c));
                }
            }
        }
        v
    }

    /// All points, in the enumeration order of their GF(q)-coordinates.
    pub fn points(&self, tower: &FieldTower) -> Vec<ProjPoint> {
        all_points(tower.q(), self.dim()).map(|x| self.point(tower.top(), x.coords())).collect()
    }

    /// The GF(qⁿ)-span.
    pub fn span(&self, top: &Field) -> Subspace {
        Subspace::from_rows(top, self.len() - 1, &self.reps).expect("representatives are independent")
    }

    /// Coordinates of `p` with respect to the representatives.
    pub fn local_coords(&self, top: &Field, p: &ProjPoint) -> Option<Vec<Elem>> {
        Matrix::from_columns(self.len(), &self.reps).solve(top, p.coords())
    }

    pub fn contains(&self, tower: &FieldTower, p: &ProjPoint) -> bool {
        match self.local_coords(tower.top(), p) {
            None => false,
            Some(mut c) => {
                normalize(tower.top(), &mut c);
                c.iter().all(|&x| tower.in_base(x))
            }
        }
    }

    /// The degree [Θ:b] of a point of the GF(qⁿ)-span of a subline: the
    /// degree over GF(q) of ζ where Θ has coordinates (1, ζ).
    pub fn degree_of(&self, tower: &FieldTower, p: &ProjPoint) -> Result<usize> {
        if self.dim() != 1 {
            return Err(Error::Precondition("degree over a subgeometry that is not a subline".into()));
        }
        let c = self
            .local_coords(tower.top(), p)
            .ok_or_else(|| Error::Precondition("point outside the span of the subline".into()))?;
        if c[0] == 0 {
            return Ok(1);
        }
        Ok(tower.degree_over_base(tower.top().div(c[1], c[0])))
    }
}

/// An embedded Segre variety, see the module docs.
#[derive(Clone, Debug)]
pub struct SegreVariety {
    field: Arc<Field>,
    n: usize,
    m: usize,
    map: Matrix,
    left_inv: Matrix,
}

impl SegreVariety {
    pub fn new(field: Arc<Field>, n: usize, m: usize, map: Matrix) -> Result<Self> {
        if map.cols() != n * m || map.rows() < n * m {
            return Err(Error::DimensionMismatch(format!("a Segre map needs {} columns", n * m)));
        }
        let mut t = map.transpose();
        let rows = t.rref(&field);
        if rows.len() != n * m {
            return Err(Error::DegenerateFrame("Segre map is not injective".into()));
        }
        let mut square = Matrix::zeros(n * m, n * m);
        let mut select = Matrix::zeros(n * m, map.rows());
        for (k, &r) in rows.iter().enumerate() {
            for c in 0..n * m {
                square[(k, c)] = map[(r, c)];
            }
            select[(k, r)] = 1;
        }
        let left_inv = square.inverse(&field).expect("pivot rows are independent").mul(&field, &select);
        Ok(SegreVariety { field, n, m, map, left_inv })
    }

    pub fn standard(field: Arc<Field>, n: usize, m: usize) -> Self {
        SegreVariety::new(field, n, m, Matrix::identity(n * m)).expect("identity is injective")
    }

    /// F̃ of a subgeometry: σ(r, s) = flatten(λ_r · Σ sᵢaᵢ) with
    /// λ_r = Σ r_j x^j.
    pub fn of_subgeometry(ctx: &ReductionContext, b: &Subgeometry) -> Result<Self> {
        if b.len() != ctx.m() {
            return Err(Error::DimensionMismatch(format!("subgeometry of PG({},qⁿ) in PG({},qⁿ)", b.len() - 1, ctx.m() - 1)));
        }
        let top = ctx.top();
        let x = top.root();
        let mut cols = Vec::with_capacity(b.reps().len() * ctx.n());
        for a in b.reps() {
            let mut lambda = 1;
            for _ in 0..ctx.n() {
                let v: Vec<Elem> = a.iter().map(|&c| top.mul(c, lambda)).collect();
                cols.push(ctx.flatten(&v));
                lambda = top.mul(lambda, x);
            }
        }
        let map = Matrix::from_columns(ctx.ambient_dim() + 1, &cols);
        SegreVariety::new(ctx.base().clone(), ctx.n(), b.reps().len(), map)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Length of the first factor vectors, PG(n−1,q).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Length of the second factor vectors, PG(m−1,q).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ambient_dim(&self) -> usize {
        self.map.rows() - 1
    }

    pub fn map(&self) -> &Matrix {
        &self.map
    }

    pub fn vector(&self, r: &[Elem], s: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut u = Vec::with_capacity(self.n * self.m);
        for &si in s {
            u.extend(r.iter().map(|&rj| f.mul(si, rj)));
        }
        self.map.mul_vec(f, &u)
    }

    pub fn point(&self, r: &ProjPoint, s: &ProjPoint) -> ProjPoint {
        ProjPoint::new(&self.field, self.vector(r.coords(), s.coords())).expect("Segre map is injective")
    }

    /// Parameters s of the first family, in enumeration order.
    pub fn first_params(&self) -> Vec<ProjPoint> {
        all_points(self.field.order(), self.m - 1).collect()
    }

    /// Parameters r of the second family, in enumeration order.
    pub fn second_params(&self) -> Vec<ProjPoint> {
        all_points(self.field.order(), self.n - 1).collect()
    }

    /// σ(PG(n−1,q), s).
    pub fn first_family_element(&self, s: &ProjPoint) -> Subspace {
        let rows: Vec<Vec<Elem>> = (0..self.n).map(|j| self.vector(&unit(self.n, j), s.coords())).collect();
        Subspace::from_rows(&self.field, self.ambient_dim(), &rows).expect("Segre map is injective")
    }

    /// σ(r, PG(m−1,q)).
    pub fn second_family_element(&self, r: &ProjPoint) -> Subspace {
        let rows: Vec<Vec<Elem>> = (0..self.m).map(|i| self.vector(r.coords(), &unit(self.m, i))).collect();
        Subspace::from_rows(&self.field, self.ambient_dim(), &rows).expect("Segre map is injective")
    }

    pub fn first_family(&self) -> Vec<Subspace> {
        self.first_params().iter().map(|s| self.first_family_element(s)).collect()
    }

    pub fn second_family(&self) -> Vec<Subspace> {
        self.second_params().iter().map(|r| self.second_family_element(r)).collect()
    }

    /// The pair (r, s) with σ(r, s) = ⟨v⟩, if ⟨v⟩ lies on the variety.
    pub fn factors(&self, v: &[Elem]) -> Option<(ProjPoint, ProjPoint)> {
        let f = &self.field;
        let u = self.left_inv.mul_vec(f, v);
        if self.map.mul_vec(f, &u) != v {
            return None;
        }
        let block = |i: usize| &u[i * self.n..(i + 1) * self.n];
        let i0 = (0..self.m).find(|&i| block(i).iter().any(|&c| c != 0))?;
        let r = block(i0).to_vec();
        let j0 = r.iter().position(|&c| c != 0)?;
        let mut s = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let coef = f.div(block(i)[j0], r[j0]);
            if block(i).iter().zip(&r).any(|(&b, &a)| b != f.mul(coef, a)) {
                return None;
            }
            s.push(coef);
        }
        Some((ProjPoint::new(f, r).ok()?, ProjPoint::new(f, s).ok()?))
    }

    pub fn contains_point(&self, p: &ProjPoint) -> bool {
        self.factors(p.coords()).is_some()
    }

    /// Number of points, |PG(n−1,q)|·|PG(m−1,q)|.
    pub fn num_points(&self) -> u64 {
        let q = self.field.order() as u64;
        ((q.pow(self.n as u32) - 1) / (q - 1)) * ((q.pow(self.m as u32) - 1) / (q - 1))
    }

    /// All points, sorted.
    pub fn points(&self) -> Vec<ProjPoint> {
        let mut out: Vec<ProjPoint> = self
            .first_params()
            .iter()
            .flat_map(|s| self.second_params().into_iter().map(move |r| (r, s.clone())))
            .map(|(r, s)| self.point(&r, &s))
            .collect();
        out.sort();
        out
    }

    /// Points of the variety inside `h`, sorted.
    pub fn points_in(&self, h: &Subspace) -> Result<Vec<ProjPoint>> {
        let mut out = Vec::new();
        for el in self.first_family() {
            let meet = el.meet(&self.field, h)?;
            out.extend(meet.points(&self.field));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The second-family line through a point of the variety.
    pub fn transversal_through(&self, p: &ProjPoint) -> Option<Subspace> {
        self.factors(p.coords()).map(|(r, _)| self.second_family_element(&r))
    }
}

fn unit(len: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

/// The regulus F̃(b) of a q-subline of PG(1,qⁿ).
pub fn regulus_of_subline(ctx: &ReductionContext, b: &Subgeometry) -> Result<SegreVariety> {
    if b.dim() != 1 {
        return Err(Error::Precondition("regulus of a subgeometry that is not a subline".into()));
    }
    SegreVariety::of_subgeometry(ctx, b)
}

/// The curve S(Φ, Ξ) where Ξ = σ(·, xi), with points listed in the order
/// of `phi`, and its curve analysis.
pub fn transversal_trace(segre: &SegreVariety, phi: &[ProjPoint], xi: &ProjPoint) -> Result<NrcReport> {
    let f = segre.field();
    if segre.m() != 2 {
        return Err(Error::Precondition("transversal traces need a regulus".into()));
    }
    let mut seen = HashSet::new();
    let mut trace = Vec::with_capacity(phi.len());
    for p in phi {
        let (r, s) = segre
            .factors(p.coords())
            .ok_or_else(|| Error::Precondition(format!("point {} is not on the regulus", p.format(f))))?;
        if !seen.insert(s) {
            return Err(Error::Precondition("two points of the curve on one regulus element".into()));
        }
        trace.push(segre.point(&r, xi));
    }
    if seen.len() != f.order() as usize + 1 {
        return Err(Error::Precondition("the curve misses some regulus element".into()));
    }
    if trace.iter().all(|p| p == &trace[0]) {
        // a transversal line traces to a single point, a curve of order 0
        let witness = Matrix::from_columns(segre.ambient_dim() + 1, &[trace[0].coords().to_vec()]);
        return Ok(NrcReport { points: trace, order: 0, is_nrc: true, witness: Some(witness) });
    }
    nrc::is_nrc(f, &trace)
}

/// Pairs (X, X^α) where X^α is the point of Ξ = σ(·, xi) on the
/// transversal through X.
pub fn transversal_pairs(segre: &SegreVariety, phi: &[ProjPoint], xi: &ProjPoint) -> Result<Vec<(ProjPoint, ProjPoint)>> {
    phi.iter()
        .map(|p| {
            let (r, _) = segre
                .factors(p.coords())
                .ok_or_else(|| Error::Precondition("point is not on the regulus".into()))?;
            Ok((p.clone(), segre.point(&r, xi)))
        })
        .collect()
}

/// The curve σ(R·m_{t−1}(y), A·y) on a regulus, where t = R.cols():
/// points in parameter order and a witness of order t.
pub fn scroll_curve(segre: &SegreVariety, r_map: &Matrix, s_map: &Matrix) -> NrcReport {
    let f = segre.field();
    let t = r_map.cols();
    assert_eq!((segre.m(), r_map.rows()), (2, segre.n()), "shape mismatch");
    // y₀·m_{t−1}(y) and y₁·m_{t−1}(y) select the first and last t monomials of m_t(y)
    let mut shift = [Matrix::zeros(t, t + 1), Matrix::zeros(t, t + 1)];
    for k in 0..t {
        shift[0][(k, k)] = 1;
        shift[1][(k, k + 1)] = 1;
    }
    let mut inner = Matrix::zeros(0, t + 1);
    for i in 0..2 {
        let mut block = Matrix::zeros(t, t + 1);
        for k in 0..t {
            for l in 0..t + 1 {
                let mut acc = 0;
                for (src, sh) in shift.iter().enumerate() {
                    acc = f.add(acc, f.mul(s_map[(i, src)], sh[(k, l)]));
                }
                block[(k, l)] = acc;
            }
        }
        inner = inner.stack(&r_map.mul(f, &block));
    }
    witness_report(f, segre.map().mul(f, &inner), t)
}

/// The curve σ(R·m_{t−1}(y), z) inside one regulus element: points in
/// parameter order and a witness of order t−1.
pub fn directrix_curve(segre: &SegreVariety, r_map: &Matrix, z: &ProjPoint) -> NrcReport {
    let f = segre.field();
    let t = r_map.cols();
    let mut inner = Matrix::zeros(0, t);
    for &zi in z.coords() {
        inner = inner.stack(&r_map.scale(f, zi));
    }
    witness_report(f, segre.map().mul(f, &inner), t - 1)
}

fn witness_report(f: &Field, witness: Matrix, order: usize) -> NrcReport {
    let points = nrc::parameters(f.order())
        .iter()
        .map(|y| ProjPoint::new(f, witness.mul_vec(f, &moment_vector(f, order, y.coords()))).expect("witness is injective"))
        .collect();
    NrcReport { points, order, is_nrc: true, witness: Some(witness) }
}

/// The curve {σ(rᵢ, sᵢ)} with sᵢ the parameters of PG(1,q) in order.
pub fn curve_through_params(segre: &SegreVariety, rs: &[ProjPoint]) -> Result<Vec<ProjPoint>> {
    let params = segre.first_params();
    if rs.len() != params.len() {
        return Err(Error::Precondition(format!("{} first-factor points for {} regulus elements", rs.len(), params.len())));
    }
    Ok(rs.iter().zip(&params).map(|(r, s)| segre.point(r, s)).collect())
}
