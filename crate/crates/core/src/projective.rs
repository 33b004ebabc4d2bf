//! Points, subspaces and projectivities of PG(d,q) in canonical form.
//!
//! A subspace is stored by the reduced row echelon form of a generator
//! matrix, which is unique per subspace, so structural equality is
//! geometric equality. Enumerations order subspaces by pivot columns
//! (lexicographically), breaking ties lexicographically on the flattened
//! canonical matrix.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, Field, FieldTower};
use crate::linalg::{normalize, Matrix};

/// A point of PG(d,q): a nonzero vector whose first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

impl ProjPoint {
    pub fn new(f: &Field, mut coords: Vec<Elem>) -> Result<Self> {
        if !normalize(f, &mut coords) {
            return Err(Error::ZeroVector);
        }
        Ok(ProjPoint { coords })
    }

    /// Wraps a vector already known to be normalized.
    pub(crate) fn from_normalized(coords: Vec<Elem>) -> Self {
        debug_assert_eq!(coords.iter().find(|&&c| c != 0), Some(&1));
        ProjPoint { coords }
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.coords
    }

    /// Projective dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn standard(d: usize, i: usize) -> Self {
        let mut v = vec![0; d + 1];
        v[i] = 1;
        ProjPoint { coords: v }
    }

    pub fn unit(d: usize) -> Self {
        ProjPoint { coords: vec![1; d + 1] }
    }

    pub fn format(&self, f: &Field) -> String {
        let parts: Vec<String> = self.coords.iter().map(|&c| f.format(c)).collect();
        format!("({})", parts.join(" "))
    }
}

/// A projective subspace of PG(d,q); `rank` = projective dimension + 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn empty(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient + 1), pivots: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient + 1), pivots: (0..=ambient).collect() }
    }

    pub fn from_matrix(f: &Field, ambient: usize, mut m: Matrix) -> Result<Self> {
        if m.cols() != ambient + 1 {
            return Err(Error::DimensionMismatch(format!(
                "generators of length {} in PG({ambient},q)",
                m.cols()
            )));
        }
        let pivots = m.rref(f);
        Ok(Subspace { ambient, basis: m, pivots })
    }

    /// Span of the given vectors (zero rows are allowed and ignored).
    pub fn from_rows(f: &Field, ambient: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != ambient + 1) {
            return Err(Error::DimensionMismatch(format!("vector of length {} in PG({ambient},q)", r.len())));
        }
        let m = Matrix::from_rows(ambient + 1, rows);
        Self::from_matrix(f, ambient, m)
    }

    pub fn from_points(f: &Field, ambient: usize, points: &[ProjPoint]) -> Result<Self> {
        let rows: Vec<Vec<Elem>> = points.iter().map(|p| p.coords.clone()).collect();
        Self::from_rows(f, ambient, &rows)
    }

    pub fn point(p: &ProjPoint) -> Self {
        Subspace {
            ambient: p.ambient_dim(),
            basis: Matrix::from_rows(p.coords.len(), std::slice::from_ref(&p.coords)),
            pivots: vec![p.coords.iter().position(|&c| c != 0).unwrap()],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Projective dimension; −1 for the empty subspace.
    pub fn dim(&self) -> isize {
        self.rank() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of points, (q^r − 1)/(q − 1).
    pub fn num_points(&self, q: u32) -> u64 {
        ((q as u64).pow(self.rank() as u32) - 1) / (q as u64 - 1)
    }

    /// Reduces `v` against the echelon basis; the residue is zero iff `v`
    /// lies in the span.
    pub fn residue(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        let mut v = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(self.basis.row(i)) {
                    if r != 0 {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
            }
        }
        v
    }

    pub fn contains_vec(&self, f: &Field, v: &[Elem]) -> bool {
        self.residue(f, v).iter().all(|&c| c == 0)
    }

    pub fn contains_point(&self, f: &Field, p: &ProjPoint) -> bool {
        self.contains_vec(f, p.coords())
    }

    pub fn contains(&self, f: &Field, other: &Subspace) -> bool {
        (0..other.rank()).all(|i| self.contains_vec(f, other.basis.row(i)))
    }

    /// Coefficients of a vector of the subspace in the echelon basis.
    pub fn coords_of(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    /// The vector with the given coefficients in the echelon basis.
    pub fn combine(&self, f: &Field, coeffs: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.ambient + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(self.basis.row(i)) {
                if r != 0 {
                    *x = f.add(*x, f.mul(c, r));
                }
            }
        }
        v
    }

    pub fn join(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Subspace::from_matrix(f, self.ambient, self.basis.stack(&other.basis))
    }

    pub fn join_point(&self, f: &Field, p: &ProjPoint) -> Result<Subspace> {
        self.join(f, &Subspace::point(p))
    }

    /// Intersection by the Zassenhaus algorithm.
    pub fn meet(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let w = self.ambient + 1;
        let mut z = Matrix::zeros(self.rank() + other.rank(), 2 * w);
        for i in 0..self.rank() {
            for j in 0..w {
                let x = self.basis[(i, j)];
                z[(i, j)] = x;
                z[(i, w + j)] = x;
            }
        }
        for i in 0..other.rank() {
            for j in 0..w {
                z[(self.rank() + i, j)] = other.basis[(i, j)];
            }
        }
        let pivots = z.rref(f);
        let rows: Vec<Vec<Elem>> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &pc)| pc >= w)
            .map(|(i, _)| z.row(i)[w..].to_vec())
            .collect();
        Subspace::from_rows(f, self.ambient, &rows)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "PG({},q) versus PG({},q)",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// All points, in the order of their normalized coefficient vectors.
    pub fn points<'a>(&'a self, f: &'a Field) -> impl Iterator<Item = ProjPoint> + 'a {
        NormalizedVectors::new(f.order(), self.rank()).map(move |c| ProjPoint::from_normalized(self.combine(f, &c)))
    }

    /// The unique point of a 0-dimensional subspace.
    pub fn as_point(&self) -> Option<ProjPoint> {
        (self.rank() == 1).then(|| ProjPoint::from_normalized(self.basis.row(0).to_vec()))
    }

    pub fn format(&self, f: &Field) -> Vec<String> {
        (0..self.rank())
            .map(|i| self.basis.row(i).iter().map(|&c| f.format(c)).collect::<Vec<_>>().join(" "))
            .collect()
    }
}

/// Smallest subspace containing every part.
pub fn span<'a>(f: &Field, parts: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
    let mut iter = parts.into_iter();
    let first = iter.next().ok_or_else(|| Error::Precondition("span of nothing".into()))?;
    let mut m = first.basis.clone();
    for s in iter {
        first.check_ambient(s)?;
        m = m.stack(&s.basis);
    }
    Subspace::from_matrix(f, first.ambient, m)
}

/// Nonzero vectors of GF(q)^len with first nonzero entry 1, ordered by the
/// position of the leading 1 and then lexicographically.
pub struct NormalizedVectors {
    q: u32,
    len: usize,
    lead: usize,
    current: Vec<Elem>,
    done: bool,
}

impl NormalizedVectors {
    pub fn new(q: u32, len: usize) -> Self {
        let mut current = vec![0; len];
        if len > 0 {
            current[0] = 1;
        }
        NormalizedVectors { q, len, lead: 0, current, done: len == 0 }
    }
}

impl Iterator for NormalizedVectors {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut j = self.len;
        loop {
            if j == self.lead + 1 {
                self.current[self.lead] = 0;
                self.lead += 1;
                if self.lead == self.len {
                    self.done = true;
                } else {
                    self.current[self.lead] = 1;
                }
                break;
            }
            j -= 1;
            self.current[j] += 1;
            if self.current[j] < self.q {
                break;
            }
            self.current[j] = 0;
        }
        Some(out)
    }
}

/// Echelon matrices of rank `k` with `cols` columns, i.e. the
/// (k−1)-subspaces of PG(cols−1,q), in canonical enumeration order.
pub struct RrefEnumerator {
    q: u32,
    cols: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    values: Vec<Elem>,
    done: bool,
}

impl RrefEnumerator {
    pub fn new(q: u32, cols: usize, k: usize) -> Self {
        let mut e = RrefEnumerator {
            q,
            cols,
            pivots: (0..k).collect(),
            free: Vec::new(),
            values: Vec::new(),
            done: k > cols,
        };
        if !e.done {
            e.reset_free();
        }
        e
    }

    fn reset_free(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.cols {
                if !self.pivots.contains(&c) {
                    self.free.push((i, c));
                }
            }
        }
        self.values = vec![0; self.free.len()];
    }

    fn current(&self) -> Matrix {
        let mut m = Matrix::zeros(self.pivots.len(), self.cols);
        for (i, &p) in self.pivots.iter().enumerate() {
            m[(i, p)] = 1;
        }
        for (&(i, c), &v) in self.free.iter().zip(&self.values) {
            m[(i, c)] = v;
        }
        m
    }

    fn advance_pivots(&mut self) -> bool {
        let k = self.pivots.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < self.cols - k + i {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for RrefEnumerator {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        if self.done {
            return None;
        }
        let out = self.current();
        let mut j = self.values.len();
        loop {
            if j == 0 {
                if self.advance_pivots() {
                    self.reset_free();
                } else {
                    self.done = true;
                }
                break;
            }
            j -= 1;
            self.values[j] += 1;
            if self.values[j] < self.q {
                break;
            }
            self.values[j] = 0;
        }
        Some(out)
    }
}

/// Every subspace of projective dimension `dim` in PG(d,q).
pub fn subspaces_of_dim(f: &Field, d: usize, dim: usize) -> impl Iterator<Item = Subspace> + '_ {
    RrefEnumerator::new(f.order(), d + 1, dim + 1).map(move |m| {
        let pivots = (0..m.rows()).map(|i| m.row(i).iter().position(|&c| c != 0).unwrap()).collect();
        Subspace { ambient: d, basis: m, pivots }
    })
}

/// Every point of PG(d,q).
pub fn all_points(q: u32, d: usize) -> impl Iterator<Item = ProjPoint> {
    NormalizedVectors::new(q, d + 1).map(ProjPoint::from_normalized)
}

/// Every subspace of dimension `target_dim` containing `s`, each once.
///
/// The quotient by `s` is modelled on the coordinates outside the pivot
/// columns of `s`; subspaces of the quotient are enumerated canonically
/// and lifted back.
pub fn extensions_through<'a>(
    f: &'a Field,
    s: &'a Subspace,
    target_dim: usize,
) -> Result<impl Iterator<Item = Subspace> + 'a> {
    let d = s.ambient_dim();
    if target_dim as isize <= s.dim() || target_dim > d {
        return Err(Error::Precondition(format!(
            "target dimension {target_dim} must lie in ({}, {d}]",
            s.dim()
        )));
    }
    let complement: Vec<usize> = (0..=d).filter(|c| !s.pivots().contains(c)).collect();
    let k = target_dim - s.rank() + 1;
    let iter = RrefEnumerator::new(f.order(), complement.len(), k).map(move |m| {
        let mut gens = s.basis().clone();
        for i in 0..m.rows() {
            let mut v = vec![0; d + 1];
            for (j, &c) in complement.iter().enumerate() {
                v[c] = m[(i, j)];
            }
            gens.push_row(&v);
        }
        Subspace::from_matrix(f, d, gens).expect("lifted generators have the ambient length")
    });
    Ok(iter)
}

/// Gaussian binomial coefficient [n choose k]_q.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= (q as u128).pow(n - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// An element of PGL(d+1,q), scaled so its first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Projectivity {
    matrix: Matrix,
}

impl Projectivity {
    pub fn new(f: &Field, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch("projectivity matrix must be square".into()));
        }
        if matrix.rank(f) != matrix.rows() {
            return Err(Error::Precondition("projectivity matrix is singular".into()));
        }
        Ok(Self::canonical(f, matrix))
    }

    fn canonical(f: &Field, matrix: Matrix) -> Self {
        let lead = matrix.data().iter().copied().find(|&c| c != 0).expect("nonzero matrix");
        let matrix = if lead == 1 { matrix } else { matrix.scale(f, f.inv(lead)) };
        Projectivity { matrix }
    }

    pub fn identity(d: usize) -> Self {
        Projectivity { matrix: Matrix::identity(d + 1) }
    }

    pub fn random<R: Rng>(f: &Field, d: usize, rng: &mut R) -> Self {
        loop {
            let rows: Vec<Vec<Elem>> = (0..=d).map(|_| (0..=d).map(|_| rng.gen_range(0..f.order())).collect()).collect();
            if let Ok(p) = Projectivity::new(f, Matrix::from_rows(d + 1, &rows)) {
                return p;
            }
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.rows() - 1
    }

    pub fn apply_vec(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        self.matrix.mul_vec(f, v)
    }

    pub fn apply(&self, f: &Field, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(f, self.matrix.mul_vec(f, p.coords())).expect("invertible maps keep vectors nonzero")
    }

    pub fn apply_subspace(&self, f: &Field, s: &Subspace) -> Subspace {
        let rows: Vec<Vec<Elem>> = (0..s.rank()).map(|i| self.apply_vec(f, s.basis().row(i))).collect();
        Subspace::from_rows(f, s.ambient_dim(), &rows).expect("same ambient")
    }

    /// `self ∘ other`.
    pub fn compose(&self, f: &Field, other: &Projectivity) -> Projectivity {
        Self::canonical(f, self.matrix.mul(f, &other.matrix))
    }

    pub fn inverse(&self, f: &Field) -> Projectivity {
        Self::canonical(f, self.matrix.inverse(f).expect("projectivities are invertible"))
    }
}

/// The matrix sending eᵢ to a multiple of `frame[i]` for i ≤ d and the unit
/// point to `frame[d+1]`.
fn frame_matrix(f: &Field, frame: &[ProjPoint]) -> Result<Matrix> {
    let d = frame.len() - 2;
    let cols: Vec<Vec<Elem>> = frame[..=d].iter().map(|p| p.coords().to_vec()).collect();
    let m = Matrix::from_columns(d + 1, &cols);
    let c = m
        .inverse(f)
        .map(|inv| inv.mul_vec(f, frame[d + 1].coords()))
        .ok_or_else(|| Error::DegenerateFrame("the first d+1 points are dependent".into()))?;
    if c.contains(&0) {
        return Err(Error::DegenerateFrame("the last point lies in a face of the simplex".into()));
    }
    let scaled: Vec<Vec<Elem>> = cols.iter().zip(&c).map(|(col, &ci)| col.iter().map(|&x| f.mul(x, ci)).collect()).collect();
    Ok(Matrix::from_columns(d + 1, &scaled))
}

/// The unique projectivity sending `src[i]` to `dst[i]` for all i.
pub fn frame_projectivity(f: &Field, src: &[ProjPoint], dst: &[ProjPoint]) -> Result<Projectivity> {
    let Some(first) = src.first() else {
        return Err(Error::DegenerateFrame("empty frame".into()));
    };
    let d = first.ambient_dim();
    if src.len() != d + 2 || dst.len() != d + 2 {
        return Err(Error::DegenerateFrame(format!("a frame of PG({d},q) has {} points", d + 2)));
    }
    if src.iter().chain(dst).any(|p| p.ambient_dim() != d) {
        return Err(Error::DimensionMismatch("frames live in different spaces".into()));
    }
    let a = frame_matrix(f, src)?;
    let b = frame_matrix(f, dst)?;
    let a_inv = a.inverse(f).expect("frame matrices are invertible");
    Ok(Projectivity::canonical(f, b.mul(f, &a_inv)))
}

/// The standard frame e₀, …, e_d, e₀+…+e_d.
pub fn standard_frame(d: usize) -> Vec<ProjPoint> {
    let mut v: Vec<ProjPoint> = (0..=d).map(|i| ProjPoint::standard(d, i)).collect();
    v.push(ProjPoint::unit(d));
    v
}

/// A subspace read from the text file format.
#[derive(Clone, Debug)]
pub struct SubspaceFile {
    pub d: usize,
    pub q: u32,
    pub field: Arc<Field>,
    pub subspace: Subspace,
    /// Number of generator lines in the file.
    pub generators: usize,
}

/// GF(q) for a prime power q, with the lexicographic modulus.
pub fn base_field(q: u32) -> Result<Arc<Field>> {
    let (p, k) = prime_power(q as u64)?;
    Ok(FieldTower::new(p, k, 1)?.base().clone())
}

/// Parses `pg d q` followed by one generator per line. With `strict`,
/// dependent generators are rejected; otherwise they are reduced away and
/// the rank is reported through the subspace.
pub fn parse_subspace_file(text: &str, strict: bool) -> Result<SubspaceFile> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty subspace file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 || fields[0] != "pg" {
        return Err(Error::Parse(format!("expected header `pg d q`, got {header:?}")));
    }
    let d: usize = fields[1].parse().map_err(|_| Error::Parse(format!("bad dimension {:?}", fields[1])))?;
    let q: u32 = fields[2].parse().map_err(|_| Error::Parse(format!("bad field order {:?}", fields[2])))?;
    let field = base_field(q)?;
    let mut rows = Vec::new();
    for line in lines {
        let row = line.split_whitespace().map(|tok| field.parse(tok)).collect::<Result<Vec<_>>>()?;
        if row.len() != d + 1 {
            return Err(Error::Parse(format!("generator has {} entries, expected {}", row.len(), d + 1)));
        }
        rows.push(row);
    }
    let subspace = Subspace::from_rows(&field, d, &rows)?;
    if strict && subspace.rank() != rows.len() {
        return Err(Error::Parse(format!(
            "{} generators span a subspace of rank {}",
            rows.len(),
            subspace.rank()
        )));
    }
    Ok(SubspaceFile { d, q, field, subspace, generators: rows.len() })
}

pub fn format_subspace_file(f: &Field, s: &Subspace) -> String {
    let mut out = format!("pg {} {}\n", s.ambient_dim(), f.order());
    for line in s.format(f) {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> Arc<Field> {
        base_field(q).unwrap()
    }

    #[test]
    fn span_examples() {
        let f = gf(2);
        let p = ProjPoint::new(&f, vec![1, 0, 1, 0]).unwrap();
        let s = Subspace::point(&p);
        assert_eq!(span(&f, [&s]).unwrap(), s);
        let q = Subspace::point(&ProjPoint::standard(3, 1));
        let line = span(&f, [&s, &q]).unwrap();
        assert_eq!(line.dim(), 1);
        assert_eq!(line.points(&f).count(), 3);
        let all: Vec<Subspace> = (0..=3).map(|i| Subspace::point(&ProjPoint::standard(3, i))).collect();
        assert_eq!(span(&f, &all).unwrap(), Subspace::whole(3));
        let other = Subspace::empty(4);
        assert!(matches!(span(&f, [&s, &other]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn meet_examples() {
        let f = gf(3);
        let h1 = Subspace::from_rows(&f, 3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        let h2 = Subspace::from_rows(&f, 3, &[vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(h1.meet(&f, &h1).unwrap(), h1);
        assert_eq!(h1.meet(&f, &h2).unwrap().dim(), 1);
        let a = Subspace::from_rows(&f, 3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let b = Subspace::from_rows(&f, 3, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert!(a.meet(&f, &b).unwrap().is_empty());
    }

    #[test]
    fn canonical_form_is_exhaustively_stable() {
        for (q, d) in [(2u32, 5usize), (3, 3)] {
            let f = gf(q);
            for dim in 0..=3.min(d) {
                let mut count = 0u64;
                for s in subspaces_of_dim(&f, d, dim) {
                    let pts: Vec<ProjPoint> = s.points(&f).collect();
                    assert_eq!(pts.len() as u64, s.num_points(q));
                    assert_eq!(Subspace::from_points(&f, d, &pts).unwrap(), s);
                    count += 1;
                }
                assert_eq!(count, gaussian_binomial(d as u32 + 1, dim as u32 + 1, q as u64));
            }
        }
    }

    #[test]
    fn dimension_formula_on_random_pairs() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let ra = rng.gen_range(1..5);
            let rb = rng.gen_range(1..5);
            let gen = |r: usize, rng: &mut ChaCha8Rng| -> Vec<Vec<Elem>> {
                (0..r).map(|_| (0..6).map(|_| rng.gen_range(0..3)).collect()).collect()
            };
            let a = Subspace::from_rows(&f, 5, &gen(ra, &mut rng)).unwrap();
            let b = Subspace::from_rows(&f, 5, &gen(rb, &mut rng)).unwrap();
            let meet = a.meet(&f, &b).unwrap();
            let join = a.join(&f, &b).unwrap();
            assert_eq!(a.dim() + b.dim(), meet.dim() + join.dim());
            assert!(a.contains(&f, &meet) && b.contains(&f, &meet));
            assert!(join.contains(&f, &a) && join.contains(&f, &b));
        }
    }

    #[test]
    fn extensions_match_filter_oracle() {
        for (q, d, sdim, tdim) in [(2u32, 4usize, 1usize, 2usize), (3, 3, 0, 1), (2, 5, 1, 3), (3, 3, 0, 2)] {
            let f = gf(q);
            let s = subspaces_of_dim(&f, d, sdim).nth(5).unwrap();
            let ext: Vec<Subspace> = extensions_through(&f, &s, tdim).unwrap().collect();
            let mut oracle: Vec<Subspace> = subspaces_of_dim(&f, d, tdim).filter(|t| t.contains(&f, &s)).collect();
            let mut sorted = ext.clone();
            sorted.sort();
            oracle.sort();
            assert_eq!(sorted, oracle);
            let c = (d - sdim) as u32;
            assert_eq!(ext.len() as u64, gaussian_binomial(c, (tdim - sdim) as u32, q as u64));
        }
    }

    #[test]
    fn extension_counts() {
        let f = gf(4);
        let s = Subspace::from_rows(
            &f,
            7,
            &(0..4).map(|i| (0..8).map(|j| u32::from(i == j)).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(extensions_through(&f, &s, 4).unwrap().count(), 85);
        let f = gf(5);
        let p = Subspace::point(&ProjPoint::standard(2, 0));
        assert_eq!(extensions_through(&f, &p, 1).unwrap().count(), 6);
        assert!(extensions_through(&f, &p, 0).is_err());
        assert!(extensions_through(&f, &p, 3).is_err());
    }

    #[test]
    fn frame_projectivity_examples() {
        let f = gf(5);
        let id = frame_projectivity(&f, &standard_frame(2), &standard_frame(2)).unwrap();
        assert_eq!(id, Projectivity::identity(2));
        let src = standard_frame(1);
        let dst = vec![src[1].clone(), src[0].clone(), src[2].clone()];
        let swap = frame_projectivity(&f, &src, &dst).unwrap();
        assert_eq!(swap.matrix(), &Matrix::from_rows(2, &[vec![0, 1], vec![1, 0]]));
        let bad = vec![src[0].clone(), src[0].clone(), src[2].clone()];
        assert!(matches!(frame_projectivity(&f, &bad, &src), Err(Error::DegenerateFrame(_))));
    }

    #[test]
    fn random_frames_map_correctly() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let frame = |rng: &mut ChaCha8Rng| -> Vec<ProjPoint> {
            let k = Projectivity::random(&f, 2, rng);
            standard_frame(2).iter().map(|p| k.apply(&f, p)).collect()
        };
        for _ in 0..50 {
            let (a, b) = (frame(&mut rng), frame(&mut rng));
            let k = frame_projectivity(&f, &a, &b).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(&k.apply(&f, x), y);
            }
        }
    }

    #[test]
    fn projectivities_preserve_incidence() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let planes: Vec<Subspace> = subspaces_of_dim(&f, 3, 1).collect();
        for _ in 0..20 {
            let k = Projectivity::random(&f, 3, &mut rng);
            let kinv = k.inverse(&f);
            assert_eq!(k.compose(&f, &kinv), Projectivity::identity(3));
            let s = &planes[rng.gen_range(0..planes.len())];
            let ks = k.apply_subspace(&f, s);
            for p in all_points(3, 3) {
                assert_eq!(s.contains_point(&f, &p), ks.contains_point(&f, &k.apply(&f, &p)));
            }
        }
    }

    #[test]
    fn subspace_file_round_trip_and_strictness() {
        let f = gf(4);
        let w = f.root();
        let s = Subspace::from_rows(&f, 3, &[vec![1, w, 0, 1], vec![0, 0, 1, w]]).unwrap();
        let text = format_subspace_file(&f, &s);
        assert!(text.starts_with("pg 3 4\n"));
        let parsed = parse_subspace_file(&text, true).unwrap();
        assert_eq!(parsed.subspace, s);
        let dependent = "pg 2 3\n1 0 0\n2 0 0\n0 1 0\n";
        assert!(parse_subspace_file(dependent, true).is_err());
        let lax = parse_subspace_file(dependent, false).unwrap();
        assert_eq!((lax.generators, lax.subspace.rank()), (3, 2));
        assert!(parse_subspace_file("pg 2 3\n1 0\n", false).is_err());
        assert!(parse_subspace_file("pg 2 6\n1 0 0\n", false).is_err());
    }
}
