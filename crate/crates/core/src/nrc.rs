//! Moment curves, span orders and an exhaustive normal rational curve test.
//!
//! Parameters of PG(1,q) are homogeneous pairs `(y₀ : y₁)` in the order of
//! [`parameters`]: `(1:0), (1:1), …, (1:q−1), (0:1)`, so `(0:1)` plays the
//! role of ∞. The moment curve of order t is
//! `y ↦ (y₀ᵗ, y₀^{t−1}y₁, …, y₁ᵗ)`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{normalize, Matrix};
use crate::par::Exec;
use crate::projective::{all_points, frame_projectivity, ProjPoint, Projectivity, Subspace};

/// The q+1 parameters of PG(1,q) in canonical order.
pub fn parameters(q: u32) -> Vec<ProjPoint> {
    all_points(q, 1).collect()
}

/// The vector (y₀ᵗ, y₀^{t−1}y₁, …, y₁ᵗ).
pub fn moment_vector(f: &Field, t: usize, y: &[Elem]) -> Vec<Elem> {
    (0..=t).map(|i| f.mul(f.pow(y[0], (t - i) as u64), f.pow(y[1], i as u64))).collect()
}

/// The moment curve of order t in PG(t,q), one point per parameter.
pub fn moment_curve(f: &Field, t: usize) -> Vec<ProjPoint> {
    assert!(t >= 1, "moment curves have order at least 1");
    parameters(f.order())
        .iter()
        .map(|y| ProjPoint::new(f, moment_vector(f, t, y.coords())).expect("moment vectors are nonzero"))
        .collect()
}

/// Projective dimension of the span of a nonempty point set.
pub fn span_order(f: &Field, points: &[ProjPoint]) -> Result<usize> {
    let first = points.first().ok_or_else(|| Error::Precondition("span order of an empty set".into()))?;
    let s = Subspace::from_points(f, first.ambient_dim(), points)?;
    Ok(s.dim() as usize)
}

/// Outcome of the normal rational curve test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NrcReport {
    pub points: Vec<ProjPoint>,
    /// Projective dimension of the span.
    pub order: usize,
    pub is_nrc: bool,
    /// A (d+1)×(t+1) matrix of rank t+1 sending the moment curve of order
    /// t onto `points`, when the verdict is positive.
    pub witness: Option<Matrix>,
}

impl NrcReport {
    /// Images of the moment curve under the witness, in parameter order.
    pub fn parametrized_points(&self, f: &Field) -> Option<Vec<ProjPoint>> {
        let w = self.witness.as_ref()?;
        Some(
            parameters(f.order())
                .iter()
                .map(|y| ProjPoint::new(f, w.mul_vec(f, &moment_vector(f, self.order, y.coords()))).expect("witness is injective"))
                .collect(),
        )
    }

    /// The witness reproduces exactly the point set.
    pub fn witness_is_valid(&self, f: &Field) -> bool {
        match self.parametrized_points(f) {
            None => false,
            Some(mut image) => {
                let mut pts = self.points.clone();
                image.sort();
                pts.sort();
                image.dedup();
                pts.dedup();
                image == pts
            }
        }
    }
}

/// Decides whether `points` is a normal rational curve of the order of its
/// span. When that order equals q the set qualifies as soon as its q+1
/// points are independent.
pub fn is_nrc(f: &Field, points: &[ProjPoint]) -> Result<NrcReport> {
    is_nrc_with(f, points, Exec::Sequential)
}

pub fn is_nrc_with(f: &Field, points: &[ProjPoint], exec: Exec) -> Result<NrcReport> {
    let q = f.order() as usize;
    if points.len() != q + 1 {
        return Err(Error::NotCandidateCurve(format!("{} points, expected q+1 = {}", points.len(), q + 1)));
    }
    let distinct: HashSet<&ProjPoint> = points.iter().collect();
    if distinct.len() != points.len() {
        return Err(Error::NotCandidateCurve("repeated points".into()));
    }
    let d = points[0].ambient_dim();
    let span = Subspace::from_points(f, d, points)?;
    let t = span.dim() as usize;
    let mut report = NrcReport { points: points.to_vec(), order: t, is_nrc: false, witness: None };
    if t == q {
        // q+1 independent points: send the moment points onto them in order
        let params = parameters(f.order());
        let moment_cols: Vec<Vec<Elem>> = params.iter().map(|y| moment_vector(f, t, y.coords())).collect();
        let moment = Matrix::from_columns(t + 1, &moment_cols);
        let target_cols: Vec<Vec<Elem>> = points.iter().map(|p| p.coords().to_vec()).collect();
        let target = Matrix::from_columns(d + 1, &target_cols);
        let inv = moment.inverse(f).expect("q+1 moment points of order q are independent");
        report.is_nrc = true;
        report.witness = Some(target.mul(f, &inv));
        return Ok(report);
    }
    let local: Vec<Vec<Elem>> = points.iter().map(|p| span.coords_of(p.coords())).collect();
    if !in_general_position(f, &local, t + 1) {
        return Ok(report);
    }
    // frame normalization: first t+1 points to e_i, point t+1 to the unit point
    let frame: Vec<ProjPoint> = local[..t + 2].iter().map(|v| ProjPoint::new(f, v.clone()).unwrap()).collect();
    let std_frame = crate::projective::standard_frame(t);
    let to_std = frame_projectivity(f, &frame, &std_frame)?;
    let mut rest: Vec<Vec<Elem>> = local[t + 2..]
        .iter()
        .map(|v| {
            let mut w = to_std.apply_vec(f, v);
            normalize(f, &mut w);
            w
        })
        .collect();
    rest.sort();

    let params = parameters(f.order());
    // reparametrizing by PGL(2,q) is sharply 3-transitive, so the first
    // three frame points sit at (1:0), (0:1), (1:1)
    let fixed = [0usize, q, 1];
    let fixed_count = fixed.len().min(t + 2);
    let free: Vec<usize> = (0..=q).filter(|i| !fixed[..fixed_count].contains(i)).collect();
    let tuples = ordered_tuples(&free, t + 2 - fixed_count);
    let hit = exec.position_first(&tuples, |tail| {
        let assignment: Vec<usize> = fixed[..fixed_count].iter().copied().chain(tail.iter().copied()).collect();
        curve_through_frame(f, t, &params, &assignment).is_some_and(|(_, curve_rest)| curve_rest == rest)
    });
    if let Some(idx) = hit {
        let assignment: Vec<usize> = fixed[..fixed_count].iter().copied().chain(tuples[idx].iter().copied()).collect();
        let (frame_coeffs, _) = curve_through_frame(f, t, &params, &assignment).expect("hit recomputes");
        let from_std = to_std.inverse(f);
        let basis_t = span.basis().transpose();
        report.is_nrc = true;
        report.witness = Some(basis_t.mul(f, &from_std.matrix().mul(f, &frame_coeffs)));
    }
    Ok(report)
}

/// Every (t+1)-subset of the vectors is independent.
fn in_general_position(f: &Field, vecs: &[Vec<Elem>], size: usize) -> bool {
    let mut idx: Vec<usize> = (0..size).collect();
    let n = vecs.len();
    loop {
        let rows: Vec<Vec<Elem>> = idx.iter().map(|&i| vecs[i].clone()).collect();
        if Matrix::from_rows(vecs[0].len(), &rows).rank(f) < size {
            return false;
        }
        let mut i = size;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Ordered tuples of `len` distinct entries, lexicographic by position.
fn ordered_tuples(items: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(items: &[usize], len: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for &x in items {
            if !current.contains(&x) {
                current.push(x);
                rec(items, len, current, out);
                current.pop();
            }
        }
    }
    rec(items, len, &mut current, &mut out);
    out
}

/// The curve through the standard frame of PG(t,q) whose i-th frame point
/// has parameter `params[assignment[i]]`: coordinates cᵢ·fᵢ(y) with
/// fᵢ(y) = Π_{j≠i, j≤t} (b_{j,0} y₁ − b_{j,1} y₀) and cᵢ = 1/fᵢ(β_{t+1}).
///
/// Returns the (t+1)×(t+1) coefficient matrix (rows: coordinates, columns:
/// monomials y₀^{t−k}y₁^k) and the sorted curve points at the parameters
/// outside the assignment.
fn curve_through_frame(f: &Field, t: usize, params: &[ProjPoint], assignment: &[usize]) -> Option<(Matrix, Vec<Vec<Elem>>)> {
    let beta: Vec<&[Elem]> = assignment.iter().map(|&i| params[i].coords()).collect();
    let mut coeffs = Matrix::zeros(t + 1, t + 1);
    for i in 0..=t {
        let mut form = vec![1];
        for (j, b) in beta[..=t].iter().enumerate() {
            if j == i {
                continue;
            }
            // b₀ y₁ − b₁ y₀ has coefficient −b₁ on y₀ (k = 0) and b₀ on y₁ (k = 1)
            let lin = [f.neg(b[1]), b[0]];
            let mut next = vec![0; form.len() + 1];
            for (k, &c) in form.iter().enumerate() {
                next[k] = f.add(next[k], f.mul(c, lin[0]));
                next[k + 1] = f.add(next[k + 1], f.mul(c, lin[1]));
            }
            form = next;
        }
        let at_unit = eval_form(f, &form, beta[t + 1]);
        if at_unit == 0 {
            return None;
        }
        let c = f.inv(at_unit);
        for (k, &x) in form.iter().enumerate() {
            coeffs[(i, k)] = f.mul(c, x);
        }
    }
    let mut rest: Vec<Vec<Elem>> = (0..params.len())
        .filter(|i| !assignment.contains(i))
        .map(|i| {
            let mut v = coeffs.mul_vec(f, &moment_vector(f, t, params[i].coords()));
            normalize(f, &mut v);
            v
        })
        .collect();
    rest.sort();
    Some((coeffs, rest))
}

fn eval_form(f: &Field, form: &[Elem], y: &[Elem]) -> Elem {
    let t = form.len() - 1;
    form.iter().enumerate().fold(0, |acc, (k, &c)| {
        f.add(acc, f.mul(c, f.mul(f.pow(y[0], (t - k) as u64), f.pow(y[1], k as u64))))
    })
}

/// The same curve with a witness visiting `ordered` in parameter order, if
/// one exists. Always succeeds when the order is at least q − 1.
pub fn reparametrized(f: &Field, report: &NrcReport, ordered: &[ProjPoint]) -> Option<NrcReport> {
    if !report.is_nrc {
        return None;
    }
    let mut a = ordered.to_vec();
    let mut b = report.points.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let (t, q) = (report.order, f.order() as usize);
    let params = parameters(f.order());
    let moment: Vec<Vec<Elem>> = params.iter().map(|y| moment_vector(f, t, y.coords())).collect();
    let d = ordered[0].ambient_dim();
    let target = Matrix::from_columns(d + 1, &ordered.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>());
    let witness = if t == q {
        target.mul(f, &Matrix::from_columns(t + 1, &moment).inverse(f)?)
    } else {
        let span = Subspace::from_points(f, d, ordered).ok()?;
        let local: Vec<ProjPoint> = ordered.iter().map(|p| ProjPoint::new(f, span.coords_of(p.coords())).unwrap()).collect();
        let src: Vec<ProjPoint> = moment.iter().map(|v| ProjPoint::new(f, v.clone()).unwrap()).collect();
        let g = frame_projectivity(f, &src[..t + 2], &local[..t + 2]).ok()?;
        if src.iter().zip(&local).any(|(s, l)| &g.apply(f, s) != l) {
            return None;
        }
        span.basis().transpose().mul(f, g.matrix())
    };
    Some(NrcReport { witness: Some(witness), ..report.clone() })
}

/// The projectivity g of PG(1,q) with `pair(c0(y)) = c1(g(y))` for every
/// parameter y, where c0 and c1 are the witness parametrizations and
/// `pairs` lists the map point by point.
pub fn parameter_projectivity(
    f: &Field,
    c0: &NrcReport,
    c1: &NrcReport,
    pairs: &[(ProjPoint, ProjPoint)],
) -> Result<Projectivity> {
    let p0 = c0
        .parametrized_points(f)
        .ok_or_else(|| Error::Precondition("source curve has no witness".into()))?;
    let p1 = c1
        .parametrized_points(f)
        .ok_or_else(|| Error::Precondition("target curve has no witness".into()))?;
    let params = parameters(f.order());
    let lookup: HashMap<&ProjPoint, usize> = p1.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let pairing: HashMap<&ProjPoint, &ProjPoint> = pairs.iter().map(|(a, b)| (a, b)).collect();
    let mut images = Vec::with_capacity(params.len());
    for x in &p0 {
        let partner = pairing
            .get(x)
            .ok_or_else(|| Error::Precondition(format!("no partner for curve point {x:?}")))?;
        let idx = lookup
            .get(partner)
            .ok_or_else(|| Error::Precondition(format!("partner {partner:?} is not on the target curve")))?;
        images.push(params[*idx].clone());
    }
    let g = frame_projectivity(f, &params[..3], &images[..3])?;
    for (y, img) in params.iter().zip(&images) {
        if &g.apply(f, y) != img {
            return Err(Error::Precondition("the pairing is not induced by a projectivity of PG(1,q)".into()));
        }
    }
    Ok(g)
}
