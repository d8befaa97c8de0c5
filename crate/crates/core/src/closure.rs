//! Evidence about Zariski closures: invariant bilinear forms, the span of
//! the group in the matrix algebra, unipotence and torus tests, and the
//! one-prime density certificate.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::image::{is_prime, is_surjective, sl_order, Surjectivity};
use crate::linalg::{self, kernel, to_rational, Signature, SpanBuilder};
use crate::matrix::IntMatrix;
use crate::word::GeneratorSet;

pub const DEFAULT_SPAN_WORD_LENGTH: usize = 6;
pub const DENSITY_PRIMES: [u64; 4] = [5, 7, 11, 13];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureClass {
    Full,
    Unipotent,
    Torus,
    ReducibleBlock,
    Symplectic,
    OrthogonalLike,
    Undetermined,
}

impl ClosureClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ClosureClass::Full => "Full",
            ClosureClass::Unipotent => "Unipotent",
            ClosureClass::Torus => "Torus",
            ClosureClass::ReducibleBlock => "ReducibleBlock",
            ClosureClass::Symplectic => "Symplectic",
            ClosureClass::OrthogonalLike => "OrthogonalLike",
            ClosureClass::Undetermined => "Undetermined",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

impl Symmetry {
    pub fn as_str(self) -> &'static str {
        match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Antisymmetric => "antisymmetric",
        }
    }
}

/// Integer matrix stored as rows; used for forms.
pub type FormMatrix = Vec<Vec<BigInt>>;

/// Basis of `{Q : gᵀQg = Q for every generator g}` within the symmetric or
/// antisymmetric matrices. Basis elements are primitive integer matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpace {
    pub symmetry: Symmetry,
    pub n: usize,
    pub basis: Vec<FormMatrix>,
}

impl FormSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// A basis element (or small combination of them) with nonzero
    /// determinant, if one turns up.
    pub fn nondegenerate_element(&self) -> Option<FormMatrix> {
        let d = self.basis.len();
        if d == 0 {
            return None;
        }
        let mut candidates: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        for base in 2..=(d as i64 + 3) {
            candidates.push((0..d as u32).map(|j| base.pow(j)).collect());
        }
        candidates.into_iter().find_map(|c| {
            let q = self.combination(&c);
            let m = IntMatrix::new(self.n, q.iter().flatten().cloned().collect()).ok()?;
            (!m.det().is_zero()).then_some(q)
        })
    }

    pub fn combination(&self, coeffs: &[i64]) -> FormMatrix {
        let mut q = vec![vec![BigInt::zero(); self.n]; self.n];
        for (b, &c) in self.basis.iter().zip(coeffs) {
            for i in 0..self.n {
                for j in 0..self.n {
                    q[i][j] += &b[i][j] * c;
                }
            }
        }
        q
    }
}

/// Exact kernel of `Q ↦ (gᵀQg − Q)_g` over (anti)symmetric `Q`.
pub fn invariant_forms(gens: &GeneratorSet, symmetry: Symmetry) -> FormSpace {
    let n = gens.n();
    let unknowns: Vec<(usize, usize)> = match symmetry {
        Symmetry::Symmetric => (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect(),
        Symmetry::Antisymmetric => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
    };
    let sign = match symmetry {
        Symmetry::Symmetric => 1,
        Symmetry::Antisymmetric => -1,
    };
    let mut rows = Vec::new();
    for g in gens.generators() {
        for &(a, b) in &unknowns {
            // (gᵀQg)_ab = Σ_ij g_ia Q_ij g_jb
            let row: Vec<BigInt> = unknowns
                .iter()
                .map(|&(i, j)| {
                    let mut c = g.get(i, a) * g.get(j, b);
                    if i != j {
                        c += g.get(j, a) * g.get(i, b) * sign;
                    }
                    if (i, j) == (a, b) {
                        c -= 1;
                    }
                    c
                })
                .collect();
            rows.push(row);
        }
    }
    let basis = kernel(&rows, unknowns.len())
        .into_iter()
        .map(|v| {
            let mut q = vec![vec![BigInt::zero(); n]; n];
            for (x, &(i, j)) in v.iter().zip(&unknowns) {
                q[i][j] = x.clone();
                q[j][i] = x * sign;
            }
            q
        })
        .collect();
    FormSpace { symmetry, n, basis }
}

/// `gᵀQg == Q`, exactly.
pub fn preserves(g: &IntMatrix, q: &FormMatrix) -> bool {
    let n = g.n();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let mut s = BigInt::zero();
            for i in 0..n {
                for j in 0..n {
                    s += g.get(i, a) * &q[i][j] * g.get(j, b);
                }
            }
            s == q[a][b]
        })
    })
}

/// Inertia of a symmetric integer form.
pub fn form_signature(q: &FormMatrix) -> Signature {
    linalg::form_signature(&to_rational(q))
}

/// Dimension of the rational span of all words of length at most
/// `max_word_len` in the generators and their inverses.
pub fn spanning_dimension(gens: &GeneratorSet, max_word_len: usize) -> usize {
    let n = gens.n();
    let letters: Vec<IntMatrix> = gens
        .symmetric_letters()
        .map(|l| gens.letter_matrix(l).expect("valid letter").clone())
        .collect();
    let mut span = SpanBuilder::new();
    let id = IntMatrix::identity(n);
    span.insert(id.to_vec());
    let mut frontier = vec![id];
    for _ in 0..max_word_len {
        if span.dim() == n * n {
            break;
        }
        let mut next = Vec::new();
        for w in &frontier {
            for s in &letters {
                let ws = w.mul(s).expect("same dimension");
                if span.insert(ws.to_vec()) {
                    next.push(ws);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier.extend(next);
    }
    span.dim()
}

fn unipotent_poly(n: usize) -> Vec<BigInt> {
    // (x − 1)^n, constant term first
    let mut c = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i + 1] += x;
            next[i] -= x;
        }
        c = next;
    }
    c
}

/// Every generator, and every word of length up to 3, has characteristic
/// polynomial `(x − 1)ⁿ`.
pub fn classify_unipotent(gens: &GeneratorSet) -> bool {
    let target = unipotent_poly(gens.n());
    let letters: Vec<&IntMatrix> = gens
        .symmetric_letters()
        .map(|l| gens.letter_matrix(l).expect("valid letter"))
        .collect();
    let mut level = vec![IntMatrix::identity(gens.n())];
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &level {
            for s in &letters {
                let ws = w.mul(s).expect("same dimension");
                if ws.char_poly() != target {
                    return false;
                }
                next.push(ws);
            }
        }
        level = next;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityCertificate {
    pub prime: u64,
    pub image_order: usize,
    pub target_order: BigUint,
}

/// A surjection onto `SL_n(Z/pZ)` for one prime `p ≥ 5` certifies Zariski
/// density in `SL_n`.
pub fn density_certificate(gens: &GeneratorSet, p: u64, cap: usize) -> Result<Option<DensityCertificate>> {
    if p < 5 {
        return Err(Error::InvalidInput(alloc::format!(
            "density certificates need p >= 5, got {p}"
        )));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !gens.is_special() {
        return Ok(None);
    }
    let v = is_surjective(gens, p, cap)?;
    Ok((v.surjective == Surjectivity::Yes).then_some(DensityCertificate {
        prime: p,
        image_order: v.image_order,
        target_order: v.target_order,
    }))
}

/// First prime in [`DENSITY_PRIMES`] whose `SL_n` order fits under `cap` and
/// for which the reduction is onto.
fn first_density_certificate(gens: &GeneratorSet, cap: usize) -> Result<Option<DensityCertificate>> {
    for p in DENSITY_PRIMES {
        if sl_order(gens.n(), p)? > BigUint::from(cap) {
            continue;
        }
        if let Some(c) = density_certificate(gens, p, cap)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Evidence {
    pub density: Option<DensityCertificate>,
    pub spanning_dimension: Option<usize>,
    pub symmetric_forms: Option<FormSpace>,
    pub antisymmetric_forms: Option<FormSpace>,
    pub symmetric_signature: Option<Signature>,
    pub commutative: Option<bool>,
    pub unipotent: Option<bool>,
    /// Characteristic polynomials of the generators, constant term first.
    pub char_polys: Vec<Vec<BigInt>>,
    /// `t² − 4` for the first non-central generator (2×2 only).
    pub discriminant: Option<BigInt>,
    /// Squarefree part of the discriminant: the torus splits over `Q(√d)`.
    pub discriminant_squarefree: Option<BigInt>,
    pub common_eigenvector: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCertificate {
    pub class: ClosureClass,
    pub n: usize,
    pub evidence: Evidence,
}

fn is_scalar(m: &IntMatrix) -> bool {
    let n = m.n();
    (0..n).all(|i| (0..n).all(|j| if i == j { m.get(i, i) == m.get(0, 0) } else { m.get(i, j).is_zero() }))
}

fn squarefree_part(x: &BigInt) -> BigInt {
    let sign = if x.is_negative() { -BigInt::one() } else { BigInt::one() };
    let (_, f) = linalg::square_decomposition(&num_rational::BigRational::from_integer(x.abs()));
    sign * f
}

/// Rational eigenvectors of a non-scalar 2×2 integer matrix (primitive).
fn rational_eigenvectors(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let t = a + d;
    let disc: BigInt = &t * &t - (a * d - b * c) * 4;
    if disc.is_negative() {
        return Vec::new();
    }
    let r = disc.sqrt();
    if &r * &r != disc {
        return Vec::new();
    }
    let mut out = Vec::new();
    for root2 in [&t + &r, &t - &r] {
        // eigenvalue root2 / 2; (M − λ)v = 0 with 2λ = root2
        let (p, q): (BigInt, BigInt) = (a * 2 - &root2, b * 2);
        let v = if !p.is_zero() || !q.is_zero() {
            vec![q, -p]
        } else {
            vec![d * 2 - &root2, -(c * BigInt::from(2))]
        };
        let v = primitive(v);
        if v.iter().any(|x| !x.is_zero()) && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut rows = vec![v.clone()];
    linalg::echelon(&mut rows);
    if let Some(r) = rows.into_iter().next() {
        v = r;
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        v.iter_mut().for_each(|x| *x = -&*x);
    }
    v
}

fn is_eigenvector(m: &IntMatrix, v: &[BigInt]) -> bool {
    let mv0 = m.get(0, 0) * &v[0] + m.get(0, 1) * &v[1];
    let mv1 = m.get(1, 0) * &v[0] + m.get(1, 1) * &v[1];
    (&v[0] * mv1 - &v[1] * mv0).is_zero()
}

/// The SL₂ decision tree: unipotent, torus, Borel-like, dense, or
/// undetermined.
pub fn classify_sl2(gens: &GeneratorSet, cap: usize) -> Result<ClosureCertificate> {
    if gens.n() != 2 {
        return Err(Error::UnsupportedDimension(gens.n()));
    }
    let g = gens.generators();
    let mut ev = Evidence {
        char_polys: g.iter().map(IntMatrix::char_poly).collect(),
        ..Evidence::default()
    };
    let commutative = g.iter().enumerate().all(|(i, a)| g[i + 1..].iter().all(|b| a.commutes_with(b)));
    ev.commutative = Some(commutative);
    let unipotent = classify_unipotent(gens);
    ev.unipotent = Some(unipotent);

    if let Some(m) = g.iter().find(|m| !is_scalar(m)) {
        let t = m.trace();
        let disc: BigInt = &t * &t - m.det() * 4;
        if !disc.is_zero() {
            ev.discriminant_squarefree = Some(squarefree_part(&disc));
        }
        ev.discriminant = Some(disc);
    }

    let class = if commutative && unipotent {
        ClosureClass::Unipotent
    } else if commutative && torus_like(g) {
        ClosureClass::Torus
    } else if let Some(v) = common_eigenvector(g) {
        ev.common_eigenvector = Some(v);
        ClosureClass::ReducibleBlock
    } else if let Some(c) = first_density_certificate(gens, cap)? {
        ev.density = Some(c);
        ClosureClass::Full
    } else {
        ClosureClass::Undetermined
    };
    Ok(ClosureCertificate { class, n: 2, evidence: ev })
}

/// Commuting generators whose non-central members are all hyperbolic with
/// irrational eigenvalues in one common quadratic field.
fn torus_like(g: &[IntMatrix]) -> bool {
    let mut field: Option<BigInt> = None;
    for m in g.iter().filter(|m| !is_scalar(m)) {
        let t = m.trace();
        let disc: BigInt = &t * &t - m.det() * 4;
        if !disc.is_positive() || disc.sqrt().pow(2) == disc {
            return false;
        }
        let f = squarefree_part(&disc);
        match &field {
            None => field = Some(f),
            Some(prev) if *prev != f => return false,
            _ => {}
        }
    }
    field.is_some()
}

fn common_eigenvector(g: &[IntMatrix]) -> Option<Vec<BigInt>> {
    let first = g.iter().find(|m| !is_scalar(m))?;
    rational_eigenvectors(first)
        .into_iter()
        .find(|v| g.iter().all(|m| is_eigenvector(m, v)))
}

/// Closure class for any dimension. `2×2` inputs go through
/// [`classify_sl2`]; larger ones try density, then invariant forms, then the
/// algebra span.
pub fn certify_closure(gens: &GeneratorSet, cap: usize) -> Result<ClosureCertificate> {
    let n = gens.n();
    let span = spanning_dimension(gens, DEFAULT_SPAN_WORD_LENGTH);
    if n == 2 {
        let mut c = classify_sl2(gens, cap)?;
        c.evidence.spanning_dimension = Some(span);
        return Ok(c);
    }
    let mut ev = Evidence {
        spanning_dimension: Some(span),
        char_polys: gens.generators().iter().map(IntMatrix::char_poly).collect(),
        ..Evidence::default()
    };
    let sym = invariant_forms(gens, Symmetry::Symmetric);
    let anti = invariant_forms(gens, Symmetry::Antisymmetric);
    let sym_nd = sym.nondegenerate_element();
    ev.symmetric_signature = sym_nd.as_ref().map(form_signature);
    let anti_nd = anti.nondegenerate_element().is_some();
    ev.symmetric_forms = Some(sym);
    ev.antisymmetric_forms = Some(anti);

    let class = if let Some(c) = first_density_certificate(gens, cap)? {
        ev.density = Some(c);
        ClosureClass::Full
    } else if anti_nd {
        ClosureClass::Symplectic
    } else if sym_nd.is_some() {
        ClosureClass::OrthogonalLike
    } else if span < n * n {
        ClosureClass::ReducibleBlock
    } else {
        ClosureClass::Undetermined
    };
    Ok(ClosureCertificate { class, n, evidence: ev })
}
