//! Circle packings from reflection groups preserving a signature-(3,1) form.
//!
//! Each reflection `g = I − 2 v vᵀQ / (vᵀQv)` is inversion in the circle
//! with normal `v`. An exact chart puts `Q` in inversive coordinates
//! `Q(v, v) = −b·b̂ + w₁s₁² + w₂s₂²` with `w` squarefree; `b` is the
//! curvature, `b̂` the co-curvature and `sᵢ√wᵢ` the curvature-times-center.
//! Everything here is exact; the `*_f64` accessors are render shadows.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::closure::{form_signature, FormMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, bilinear, congruence_diagonalize, kernel, square_decomposition, to_rational, RatMatrix, Signature};
use crate::matrix::IntMatrix;
use crate::word::{GeneratorSet, Letter, Word};

/// The mirror normal of a reflection `g` for the form `q`: the primitive
/// integer vector spanning the `(−1)`-eigenspace, checked by rebuilding `g`.
pub fn reflection_vector(g: &IntMatrix, q: &FormMatrix) -> Result<Vec<BigInt>> {
    let n = g.n();
    if q.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: q.len() });
    }
    if g.is_identity() {
        return Err(Error::NotAReflection("identity".into()));
    }
    if !g.mul(g)?.is_identity() {
        return Err(Error::NotAReflection("not an involution".into()));
    }
    if !crate::closure::preserves(g, q) {
        return Err(Error::NotAReflection("does not preserve the form".into()));
    }
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| g.get(i, j) + BigInt::from(u8::from(i == j)))
                .collect()
        })
        .collect();
    let mut eig = kernel(&rows, n);
    if eig.len() != 1 {
        return Err(Error::NotAReflection(alloc::format!(
            "(-1)-eigenspace has dimension {}",
            eig.len()
        )));
    }
    let v = eig.pop().expect("one vector");
    let qv: Vec<BigInt> = (0..n).map(|j| (0..n).map(|i| &v[i] * &q[i][j]).sum()).collect();
    let norm: BigInt = v.iter().zip(&qv).map(|(a, b)| a * b).sum();
    if norm.is_zero() {
        return Err(Error::NotAReflection("mirror normal is isotropic".into()));
    }
    // norm·(δ_ij − g_ij) = 2·v_i·(qv)_j
    for i in 0..n {
        for j in 0..n {
            let lhs = &norm * (BigInt::from(u8::from(i == j)) - g.get(i, j));
            if lhs != &v[i] * &qv[j] * 2 {
                return Err(Error::NotAReflection("reconstruction mismatch".into()));
            }
        }
    }
    Ok(v)
}

/// An exact base change from `Q` to inversive coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    q: RatMatrix,
    /// `Q` was replaced by `−Q` to reach signature (3,1).
    pub negated: bool,
    /// Isotropic vectors with `Q(N, M) = −1/2`; `b = −2Q(v, N)`, `b̂ = −2Q(v, M)`.
    pub null: Vec<BigRational>,
    pub conull: Vec<BigRational>,
    /// Orthogonal spatial axes with `Q(Eᵢ, Eᵢ) = wᵢ`.
    pub axes: [Vec<BigRational>; 2],
    pub weights: [BigInt; 2],
}

fn rvec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

impl Chart {
    pub fn new(q: &FormMatrix) -> Result<Chart> {
        if q.len() != 4 {
            return Err(Error::InvalidInput("packing charts need a 4x4 form".into()));
        }
        let sig = form_signature(q);
        let target = Signature { positive: 3, negative: 1, zero: 0 };
        let negated = if sig == target {
            false
        } else if sig.flipped() == target {
            true
        } else {
            return Err(Error::InvalidInput(alloc::format!(
                "form has signature ({}, {}, {}), not (3, 1)",
                sig.positive,
                sig.negative,
                sig.zero
            )));
        };
        let mut q = to_rational(q);
        if negated {
            for row in q.iter_mut() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
        }
        let null = find_isotropic(&q).ok_or(Error::NoRationalChart)?;
        let e = |j: usize| -> Vec<BigRational> {
            (0..4).map(|i| BigRational::from_integer(BigInt::from(u8::from(i == j)))).collect()
        };
        let (j, qne) = (0..4)
            .map(|j| (j, bilinear(&q, &null, &e(j))))
            .find(|(_, x)| !x.is_zero())
            .ok_or(Error::NoRationalChart)?;
        let ej = e(j);
        let t = bilinear(&q, &ej, &ej) / (&qne * BigRational::from_integer(2.into()));
        let c = -BigRational::one() / (&qne * BigRational::from_integer(2.into()));
        let conull: Vec<BigRational> = ej.iter().zip(&null).map(|(x, n)| (x - &t * n) * &c).collect();

        let project = |x: &[BigRational]| -> Vec<BigRational> {
            let two = BigRational::from_integer(2.into());
            let a = bilinear(&q, x, &conull) * &two;
            let b = bilinear(&q, x, &null) * &two;
            (0..4).map(|i| &x[i] + &a * &null[i] + &b * &conull[i]).collect()
        };
        let mut spatial: Vec<Vec<BigRational>> = Vec::new();
        for j in 0..4 {
            let p = project(&e(j));
            let candidate: Vec<Vec<BigRational>> = spatial.iter().cloned().chain([p.clone()]).collect();
            if rational_rank(&candidate) > spatial.len() {
                spatial.push(p);
            }
            if spatial.len() == 2 {
                break;
            }
        }
        if spatial.len() != 2 {
            return Err(Error::NoRationalChart);
        }
        let gram: RatMatrix = (0..2)
            .map(|a| (0..2).map(|b| bilinear(&q, &spatial[a], &spatial[b])).collect())
            .collect();
        let d = congruence_diagonalize(&gram);
        let mut axes: [Vec<BigRational>; 2] = [Vec::new(), Vec::new()];
        let mut weights = [BigInt::zero(), BigInt::zero()];
        for k in 0..2 {
            if !d.diagonal[k].is_positive() {
                return Err(Error::NoRationalChart);
            }
            let (s, f) = square_decomposition(&d.diagonal[k]);
            axes[k] = (0..4)
                .map(|i| (&spatial[0][i] * &d.basis[0][k] + &spatial[1][i] * &d.basis[1][k]) / &s)
                .collect();
            weights[k] = f;
        }
        Ok(Chart {
            q,
            negated,
            null,
            conull,
            axes,
            weights,
        })
    }

    /// The form in use (possibly negated).
    pub fn form(&self) -> &RatMatrix {
        &self.q
    }

    pub fn norm(&self, v: &[BigRational]) -> BigRational {
        bilinear(&self.q, v, v)
    }

    /// `(b, b̂, s₁, s₂)` of a vector in the original basis.
    pub fn coordinates(&self, v: &[BigRational]) -> (BigRational, BigRational, [BigRational; 2]) {
        let m2 = BigRational::from_integer((-2).into());
        let b = bilinear(&self.q, v, &self.null) * &m2;
        let b_hat = bilinear(&self.q, v, &self.conull) * &m2;
        let s = [0, 1].map(|k| {
            bilinear(&self.q, v, &self.axes[k]) / BigRational::from_integer(self.weights[k].clone())
        });
        (b, b_hat, s)
    }
}

fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    linalg::rank(&ints)
}

fn find_isotropic(q: &RatMatrix) -> Option<Vec<BigRational>> {
    let n = q.len();
    for i in 0..n {
        if q[i][i].is_zero() {
            return Some((0..n).map(|j| BigRational::from_integer(BigInt::from(u8::from(i == j)))).collect());
        }
    }
    // bounded search over small integer vectors
    let range: Vec<i64> = (-4..=4).collect();
    let mut v = vec![0usize; n];
    loop {
        let cand: Vec<BigRational> = v.iter().map(|&k| BigRational::from_integer(range[k].into())).collect();
        if cand.iter().any(|x| !x.is_zero()) && bilinear(q, &cand, &cand).is_zero() {
            return Some(cand);
        }
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            v[k] += 1;
            if v[k] < range.len() {
                break;
            }
            v[k] = 0;
            k += 1;
        }
    }
}

/// A circle or line in inversive coordinates, normalized so that
/// `b·b̂ − w₁s₁² − w₂s₂² = −f` with `f` squarefree. When `f = 1` this is the
/// unit-norm convention and every coordinate is the literal (rational)
/// curvature data; otherwise the real circle is the vector divided by `√f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InversiveCircle {
    pub b: BigRational,
    pub b_hat: BigRational,
    pub s: [BigRational; 2],
    pub weights: [BigInt; 2],
    pub f: BigInt,
}

impl InversiveCircle {
    pub fn is_line(&self) -> bool {
        self.b.is_zero()
    }

    /// `b·b̂ − w₁s₁² − w₂s₂²`.
    pub fn inversive_norm(&self) -> BigRational {
        let w = |k: usize| BigRational::from_integer(self.weights[k].clone());
        &self.b * &self.b_hat - w(0) * &self.s[0] * &self.s[0] - w(1) * &self.s[1] * &self.s[1]
    }

    /// Exact curvature when it is rational (`f = 1`).
    pub fn rational_curvature(&self) -> Option<BigRational> {
        self.f.is_one().then(|| self.b.clone())
    }

    pub fn curvature_f64(&self) -> f64 {
        ratf(&self.b) / sqrtf(&self.f)
    }

    /// Real `curvature × center`, or the unit normal of a line.
    pub fn bx_f64(&self) -> [f64; 2] {
        [0, 1].map(|k| ratf(&self.s[k]) * sqrtf(&self.weights[k]) / sqrtf(&self.f))
    }

    pub fn center_f64(&self) -> Option<[f64; 2]> {
        if self.is_line() {
            return None;
        }
        let k = self.curvature_f64();
        let bx = self.bx_f64();
        Some([bx[0] / k, bx[1] / k])
    }

    pub fn radius_f64(&self) -> Option<f64> {
        (!self.is_line()).then(|| 1.0 / libm::fabs(self.curvature_f64()))
    }

    /// For a line: unit normal `n` and offset `h` with the line `n·x = h`.
    pub fn line_f64(&self) -> Option<([f64; 2], f64)> {
        self.is_line()
            .then(|| (self.bx_f64(), ratf(&self.b_hat) / sqrtf(&self.f) / 2.0))
    }
}

fn ratf(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

fn sqrtf(x: &BigInt) -> f64 {
    libm::sqrt(x.to_f64().unwrap_or(f64::NAN))
}

/// Scales `v` by a positive rational so that `Q(v, v)` is squarefree;
/// returns the scaled vector and that norm.
fn normalize(chart: &Chart, v: &[BigRational]) -> Result<(Vec<BigRational>, BigInt)> {
    let norm = chart.norm(v);
    if !norm.is_positive() {
        return Err(Error::NotACircle);
    }
    let (s, f) = square_decomposition(&norm);
    Ok((v.iter().map(|x| x / &s).collect(), f))
}

/// Inversive coordinates of the circle with normal `v` (projectively: any
/// positive multiple of `v` gives the same circle).
pub fn to_inversive(v: &[BigRational], chart: &Chart) -> Result<InversiveCircle> {
    let (v, f) = normalize(chart, v)?;
    let (b, b_hat, s) = chart.coordinates(&v);
    Ok(InversiveCircle {
        b,
        b_hat,
        s,
        weights: chart.weights.clone(),
        f,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCircle {
    /// Normalized vector in the original basis.
    pub vector: Vec<BigRational>,
    pub circle: InversiveCircle,
    pub depth: usize,
    /// A shortest word `w` with this circle equal to `w · seed`.
    pub word: Word,
    pub seed: usize,
}

#[derive(Clone, Debug)]
pub struct Mirror {
    pub generator: usize,
    pub normal: Vec<BigInt>,
    pub circle: InversiveCircle,
}

#[derive(Clone, Debug)]
pub struct PackingOrbit {
    pub gens: GeneratorSet,
    pub form: FormMatrix,
    pub chart: Chart,
    pub mirrors: Vec<Mirror>,
    /// Seed circles (depth 0), in the order they were found.
    pub seeds: Vec<Vec<BigInt>>,
    pub circles: Vec<OrbitCircle>,
    pub depth: usize,
    /// Global curvature rescaling fixed from the depth-0 circles.
    pub scale: BigRational,
}

impl PackingOrbit {
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn circles_to_depth(&self, d: usize) -> impl Iterator<Item = &OrbitCircle> {
        self.circles.iter().filter(move |c| c.depth <= d)
    }

    /// Rescaled curvature, when it is an integer.
    pub fn integer_curvature(&self, c: &OrbitCircle) -> Option<BigInt> {
        let k = c.circle.rational_curvature()? * &self.scale;
        k.is_integer().then(|| k.to_integer())
    }

    /// Circles whose rescaled curvature is not an integer.
    pub fn non_integral(&self) -> Vec<&OrbitCircle> {
        self.circles
            .iter()
            .filter(|c| self.integer_curvature(c).is_none())
            .collect()
    }
}

/// Circles orthogonal to three of the mirrors: the normal spanning the
/// `Q`-orthogonal complement of each mirror triple, kept when it has
/// positive norm. Oriented so the curvature is positive (lines: `b̂ ≥ 0`).
pub fn packing_seeds(mirrors: &[Vec<BigInt>], q: &FormMatrix) -> Vec<Vec<BigInt>> {
    let n = q.len();
    let qv = |v: &[BigInt]| -> Vec<BigInt> { (0..n).map(|j| (0..n).map(|i| &v[i] * &q[i][j]).sum()).collect() };
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let m = mirrors.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let rows = vec![qv(&mirrors[a]), qv(&mirrors[b]), qv(&mirrors[c])];
                let ker = kernel(&rows, n);
                if ker.len() != 1 {
                    continue;
                }
                let w = &ker[0];
                let norm: BigInt = w.iter().zip(qv(w)).map(|(x, y)| x * y).sum();
                if norm.is_positive() && !out.contains(w) {
                    out.push(w.clone());
                }
            }
        }
    }
    out
}

fn orient(chart: &Chart, v: Vec<BigInt>) -> Vec<BigInt> {
    let (b, b_hat, s) = chart.coordinates(&rvec(&v));
    let key = [b, b_hat, s[0].clone(), s[1].clone()];
    match key.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

fn apply(g: &IntMatrix, v: &[BigRational]) -> Vec<BigRational> {
    let n = g.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(g.get(i, j).clone()) * &v[j])
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect()
}

/// gcd of the nonzero rationals (`gcd(numerators) / lcm(denominators)`).
fn rational_gcd<'a>(xs: impl Iterator<Item = &'a BigRational>) -> Option<BigRational> {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut any = false;
    for x in xs.filter(|x| !x.is_zero()) {
        num = num.gcd(x.numer());
        den = den.lcm(x.denom());
        any = true;
    }
    any.then(|| BigRational::new(num, den))
}

/// Breadth-first orbit of the packing seeds under the reflections, up to
/// word length `depth`, deduplicated on exact normalized vectors.
pub fn orbit_circles(gens: &GeneratorSet, q: &FormMatrix, depth: usize) -> Result<PackingOrbit> {
    let chart = Chart::new(q)?;
    let mut mirrors = Vec::new();
    for (i, g) in gens.generators().iter().enumerate() {
        let normal = reflection_vector(g, q)?;
        let circle = to_inversive(&rvec(&normal), &chart)?;
        mirrors.push(Mirror {
            generator: i,
            normal,
            circle,
        });
    }
    let normals: Vec<Vec<BigInt>> = mirrors.iter().map(|m| m.normal.clone()).collect();
    let signed: FormMatrix = if chart.negated {
        q.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
    } else {
        q.clone()
    };
    let seeds: Vec<Vec<BigInt>> = packing_seeds(&normals, &signed)
        .into_iter()
        .map(|w| orient(&chart, w))
        .collect();

    let mut circles: Vec<OrbitCircle> = Vec::new();
    let mut index: HashMap<Vec<BigRational>, usize> = HashMap::new();
    for (k, s) in seeds.iter().enumerate() {
        let (v, _) = normalize(&chart, &rvec(s))?;
        if index.contains_key(&v) {
            continue;
        }
        index.insert(v.clone(), circles.len());
        circles.push(OrbitCircle {
            circle: to_inversive(&v, &chart)?,
            vector: v,
            depth: 0,
            word: Word::empty(),
            seed: k,
        });
    }
    let scale = rational_gcd(circles.iter().filter_map(|c| c.circle.rational_curvature()).collect::<Vec<_>>().iter())
        .map(|g| BigRational::one() / g)
        .unwrap_or_else(BigRational::one);

    let mut frontier: Vec<usize> = (0..circles.len()).collect();
    for d in 1..=depth {
        let mut next = Vec::new();
        for &ci in &frontier {
            for (gi, g) in gens.generators().iter().enumerate() {
                let image = apply(g, &circles[ci].vector);
                if index.contains_key(&image) {
                    continue;
                }
                let circle = to_inversive(&image, &chart)?;
                let word = Word::new(
                    core::iter::once(Letter::new(gi, false)).chain(circles[ci].word.letters().iter().copied()),
                );
                index.insert(image.clone(), circles.len());
                next.push(circles.len());
                let seed = circles[ci].seed;
                circles.push(OrbitCircle {
                    vector: image,
                    circle,
                    depth: d,
                    word,
                    seed,
                });
            }
        }
        frontier = next;
    }
    Ok(PackingOrbit {
        gens: gens.clone(),
        form: q.clone(),
        chart,
        mirrors,
        seeds,
        circles,
        depth,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::closure::{invariant_forms, Symmetry};

    fn ex10() -> (GeneratorSet, FormMatrix) {
        let g = catalog::generators("ex10").unwrap();
        let q = invariant_forms(&g, Symmetry::Symmetric).nondegenerate_element().unwrap();
        (g, q)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diagonal_reflection() {
        let g = IntMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]).unwrap();
        let q: FormMatrix = (0..4)
            .map(|i| (0..4).map(|j| BigInt::from(if i == j { if i == 3 { -1 } else { 1 } } else { 0 })).collect())
            .collect();
        assert_eq!(reflection_vector(&g, &q).unwrap(), ints(&[0, 0, 1, 0]));
        assert!(reflection_vector(&IntMatrix::identity(4), &q).is_err());
    }

    #[test]
    fn ex10_reflections_rebuild() {
        let (g, q) = ex10();
        for m in g.generators() {
            reflection_vector(m, &q).unwrap();
        }
    }

    #[test]
    fn unit_circle_in_standard_form() {
        // Q(v) = −2·v0·v1 + v2² + v3², so b = 2·v1 and b̂ = v0
        let q: FormMatrix = [[0, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
            .iter()
            .map(|r| ints(r))
            .collect();
        let chart = Chart::new(&q).unwrap();
        let c = to_inversive(&rvec(&ints(&[-2, 1, 0, 0])), &chart).unwrap();
        let r = |x: i64| BigRational::from_integer(x.into());
        assert_eq!((c.b.clone(), c.b_hat.clone(), c.f.clone()), (r(1), r(-1), BigInt::one()));
        assert!(c.s.iter().all(Zero::is_zero));
        assert_eq!(c.inversive_norm(), r(-1));
        assert_eq!(c.center_f64(), Some([0.0, 0.0]));
        assert_eq!(c.radius_f64(), Some(1.0));
        let doubled = to_inversive(&rvec(&ints(&[-4, 2, 0, 0])), &chart).unwrap();
        assert_eq!(c, doubled);
        assert_eq!(to_inversive(&rvec(&ints(&[1, 1, 0, 0])), &chart), Err(Error::NotACircle));
    }

    #[test]
    fn ex10_orbit_is_integral() {
        let (g, q) = ex10();
        let orbit = orbit_circles(&g, &q, 6).unwrap();
        assert!(orbit.non_integral().is_empty());
        for c in &orbit.circles {
            assert_eq!(c.circle.inversive_norm(), -BigRational::from_integer(c.circle.f.clone()));
            assert!(c.circle.f.is_one());
        }
        let sizes: Vec<usize> = (0..=6).map(|d| orbit.circles_to_depth(d).count()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn orbit_is_closed_one_level_up() {
        let (g, q) = ex10();
        let small = orbit_circles(&g, &q, 3).unwrap();
        let big = orbit_circles(&g, &q, 4).unwrap();
        let keys: hashbrown::HashSet<_> = big.circles.iter().map(|c| c.vector.clone()).collect();
        for c in &small.circles {
            assert!(keys.contains(&c.vector));
            for m in g.generators() {
                assert!(keys.contains(&apply(m, &c.vector)));
            }
        }
    }
}
