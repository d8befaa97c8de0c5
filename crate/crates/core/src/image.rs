//! Images of integer matrix groups under reduction mod `m`.
//!
//! [`enumerate_image`] runs a breadth-first closure from the identity under
//! right multiplication by the generators and their inverses. Elements are
//! packed into a single `u64` or `u128` (base-`m` digits) whenever
//! `m^(n²)` fits, which keeps the multi-million element enumerations lean.
//! Each element stores only its BFS parent and the connecting letter; witness
//! words are rebuilt on demand and are shortest words, ties broken by letter
//! order `A, A⁻¹, B, B⁻¹, ...`.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::hash::Hash;

use hashbrown::HashMap;
use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::modular::{reduce_mod, ModMatrix};
use crate::word::{eval_word, GeneratorSet, Letter, Word};

/// Default element budget for enumerations (2²⁴).
pub const DEFAULT_ELEMENT_CAP: usize = 1 << 24;

const NO_LETTER: u8 = u8::MAX;

trait Codec {
    type Key: Hash + Eq + Clone;
    fn encode(&self, digits: &[u64]) -> Self::Key;
    fn decode(&self, key: &Self::Key, out: &mut [u64]);
}

struct U64Codec {
    m: u64,
}

impl Codec for U64Codec {
    type Key = u64;
    fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.m + d)
    }
    fn decode(&self, key: &u64, out: &mut [u64]) {
        let mut k = *key;
        for d in out.iter_mut() {
            *d = k % self.m;
            k /= self.m;
        }
    }
}

struct U128Codec {
    m: u128,
}

impl Codec for U128Codec {
    type Key = u128;
    fn encode(&self, digits: &[u64]) -> u128 {
        digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * self.m + d as u128)
    }
    fn decode(&self, key: &u128, out: &mut [u64]) {
        let mut k = *key;
        for d in out.iter_mut() {
            *d = (k % self.m) as u64;
            k /= self.m;
        }
    }
}

struct WideCodec;

impl Codec for WideCodec {
    type Key = Box<[u64]>;
    fn encode(&self, digits: &[u64]) -> Box<[u64]> {
        digits.into()
    }
    fn decode(&self, key: &Box<[u64]>, out: &mut [u64]) {
        out.copy_from_slice(key);
    }
}

struct Table<C: Codec> {
    codec: C,
    keys: Vec<C::Key>,
    index: HashMap<C::Key, u32>,
}

impl<C: Codec> Table<C> {
    fn new(codec: C) -> Self {
        Table {
            codec,
            keys: Vec::new(),
            index: HashMap::new(),
        }
    }
}

enum Storage {
    U64(Table<U64Codec>),
    U128(Table<U128Codec>),
    Wide(Table<WideCodec>),
}

macro_rules! with_table {
    ($storage:expr, $t:ident => $body:expr) => {
        match $storage {
            Storage::U64($t) => $body,
            Storage::U128($t) => $body,
            Storage::Wide($t) => $body,
        }
    };
}

fn fits(m: u64, digits: usize, bits: u32) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..digits {
        match acc.checked_mul(m as u128) {
            Some(v) => acc = v,
            None => return false,
        }
    }
    // `acc` distinct keys need values up to acc - 1.
    bits == 128 || (acc - 1) >> bits == 0
}

/// Row-major `x · s` modulo `m` into `out`.
fn mul_into(x: &[u64], s: &[u64], n: usize, m: u64, out: &mut [u64]) {
    let small = m <= u32::MAX as u64;
    let m = m as u128;
    for i in 0..n {
        for j in 0..n {
            let mut acc: u128 = 0;
            for k in 0..n {
                let t = x[i * n + k] as u128 * s[k * n + j] as u128;
                // below 2^32 at most eight products of size 2^64 cannot overflow
                acc = if small { acc + t } else { (acc + t % m) % m };
            }
            out[i * n + j] = (acc % m) as u64;
        }
    }
}

/// The enumerated image of a generator set modulo `m`.
pub struct GroupImage {
    modulus: u64,
    n: usize,
    gens: GeneratorSet,
    letters: Vec<ModMatrix>,
    storage: Storage,
    parent: Vec<u32>,
    via: Vec<u8>,
    complete: bool,
}

impl fmt::Debug for GroupImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupImage")
            .field("generators", &self.gens.name())
            .field("modulus", &self.modulus)
            .field("n", &self.n)
            .field("order", &self.order())
            .field("complete", &self.complete)
            .finish()
    }
}

fn bfs<C: Codec>(
    table: &mut Table<C>,
    letters: &[ModMatrix],
    n: usize,
    m: u64,
    cap: usize,
    parent: &mut Vec<u32>,
    via: &mut Vec<u8>,
) -> bool {
    let id = ModMatrix::identity(n, m);
    let key = table.codec.encode(id.entries());
    table.index.insert(key.clone(), 0);
    table.keys.push(key);
    parent.push(0);
    via.push(NO_LETTER);
    if cap < 1 {
        return false;
    }

    let mut cur = vec![0u64; n * n];
    let mut next = vec![0u64; n * n];
    let mut head = 0usize;
    while head < table.keys.len() {
        table.codec.decode(&table.keys[head], &mut cur);
        for (li, s) in letters.iter().enumerate() {
            mul_into(&cur, s.entries(), n, m, &mut next);
            let key = table.codec.encode(&next);
            if table.index.contains_key(&key) {
                continue;
            }
            if table.keys.len() >= cap {
                return false;
            }
            let idx = table.keys.len() as u32;
            table.index.insert(key.clone(), idx);
            table.keys.push(key);
            parent.push(head as u32);
            via.push(li as u8);
        }
        head += 1;
    }
    true
}

/// Breadth-first closure of the image of `gens` modulo `m`.
///
/// Exceeding `cap` elements is not an error: the returned image has
/// `complete() == false`.
pub fn enumerate_image(gens: &GeneratorSet, m: u64, cap: usize) -> Result<GroupImage> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    if cap < 1 {
        return Err(Error::InvalidInput("element cap must be positive".into()));
    }
    if 2 * gens.len() >= NO_LETTER as usize {
        return Err(Error::InvalidInput("too many generators".into()));
    }
    let cap = cap.min(u32::MAX as usize);
    let n = gens.n();
    let letters = gens
        .symmetric_letters()
        .map(|l| reduce_mod(gens.letter_matrix(l)?, m))
        .collect::<Result<Vec<_>>>()?;

    let digits = n * n;
    let mut storage = if fits(m, digits, 64) {
        Storage::U64(Table::new(U64Codec { m }))
    } else if fits(m, digits, 128) {
        Storage::U128(Table::new(U128Codec { m: m as u128 }))
    } else {
        Storage::Wide(Table::new(WideCodec))
    };
    let mut parent = Vec::new();
    let mut via = Vec::new();
    let complete = with_table!(&mut storage, t => bfs(t, &letters, n, m, cap, &mut parent, &mut via));

    Ok(GroupImage {
        modulus: m,
        n,
        gens: gens.clone(),
        letters,
        storage,
        parent,
        via,
        complete,
    })
}

impl GroupImage {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    /// Number of elements found (the group order when complete).
    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Reduced generators and inverses in letter order.
    pub fn letter_matrices(&self) -> &[ModMatrix] {
        &self.letters
    }

    pub fn element(&self, i: usize) -> ModMatrix {
        let mut out = vec![0u64; self.n * self.n];
        with_table!(&self.storage, t => t.codec.decode(&t.keys[i], &mut out));
        ModMatrix::from_residues(self.n, self.modulus, out).expect("stored residues are valid")
    }

    pub fn index_of(&self, x: &ModMatrix) -> Option<usize> {
        if x.n() != self.n || x.modulus() != self.modulus {
            return None;
        }
        with_table!(&self.storage, t => {
            let key = t.codec.encode(x.entries());
            t.index.get(&key).map(|&i| i as usize)
        })
    }

    pub fn contains(&self, x: &ModMatrix) -> bool {
        self.index_of(x).is_some()
    }

    /// Index of `element(i) · letter`, if that product was enumerated.
    pub fn step(&self, i: usize, letter: usize) -> Option<usize> {
        let mut cur = vec![0u64; self.n * self.n];
        let mut next = vec![0u64; self.n * self.n];
        with_table!(&self.storage, t => {
            t.codec.decode(&t.keys[i], &mut cur);
            mul_into(&cur, self.letters[letter].entries(), self.n, self.modulus, &mut next);
            let key = t.codec.encode(&next);
            t.index.get(&key).map(|&j| j as usize)
        })
    }

    /// BFS-shortest word reaching element `i`.
    pub fn witness(&self, mut i: usize) -> Word {
        let mut letters = Vec::new();
        while self.via[i] != NO_LETTER {
            letters.push(Letter::from_index(self.via[i] as usize));
            i = self.parent[i] as usize;
        }
        letters.reverse();
        Word::new(letters)
    }

    /// Depth of element `i` in the BFS tree (its word length).
    pub fn depth(&self, mut i: usize) -> usize {
        let mut d = 0;
        while self.via[i] != NO_LETTER {
            d += 1;
            i = self.parent[i] as usize;
        }
        d
    }

    pub fn elements(&self) -> impl Iterator<Item = ModMatrix> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `|SL_n(Z/pZ)| = p^(n(n-1)/2) · ∏_{k=2..n} (p^k − 1)`.
pub fn sl_order(n: usize, p: u64) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pb = BigUint::from(p);
    let mut order: BigUint = Pow::pow(&pb, (n * (n - 1) / 2) as u32);
    for k in 2..=n {
        order *= Pow::pow(&pb, k as u32) - BigUint::one();
    }
    Ok(order)
}

/// `|GL_n(Z/mZ)|` for any modulus `m ≥ 2`.
pub fn gl_order(n: usize, m: u64) -> Result<BigUint> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let mut order = BigUint::one();
    let mut rest = m;
    let mut p = 2u64;
    while rest > 1 {
        if p.saturating_mul(p) > rest {
            p = rest;
        }
        let mut e = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            let pb = BigUint::from(p);
            // |GL_n(F_p)| = |SL_n(F_p)| · (p − 1)
            let mut gl = sl_order(n, p)? * (p - 1);
            gl *= Pow::pow(&pb, (e - 1) * (n * n) as u32);
            order *= gl;
        }
        p += 1;
    }
    Ok(order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surjectivity {
    Yes,
    No,
    Capped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    DeterminantObstruction,
    CollapsedGenerator,
    ProperImage,
    Capped,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::DeterminantObstruction => "determinant obstruction",
            FailureReason::CollapsedGenerator => "collapsed generator",
            FailureReason::ProperImage => "proper image",
            FailureReason::Capped => "element cap reached",
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageVerdict {
    pub prime: u64,
    pub surjective: Surjectivity,
    pub image_order: usize,
    pub target_order: BigUint,
    pub complete: bool,
    pub reason: Option<FailureReason>,
}

/// Decides whether `gens` reduces onto `SL_n(Z/pZ)`.
pub fn is_surjective(gens: &GeneratorSet, p: u64, cap: usize) -> Result<ImageVerdict> {
    let target_order = sl_order(gens.n(), p)?;
    let image = enumerate_image(gens, p, cap)?;
    Ok(surjectivity_of(&image, target_order))
}

/// The surjectivity verdict for an already enumerated prime image.
pub fn surjectivity_of(image: &GroupImage, target_order: BigUint) -> ImageVerdict {
    let p = image.modulus();
    let reduced = image.letter_matrices();
    let (surjective, reason) = if !image.is_complete() {
        (Surjectivity::Capped, Some(FailureReason::Capped))
    } else if BigUint::from(image.order()) == target_order {
        (Surjectivity::Yes, None)
    } else if reduced.iter().any(|g| g.det() != 1 % p) {
        (Surjectivity::No, Some(FailureReason::DeterminantObstruction))
    } else if reduced.iter().any(ModMatrix::is_identity) {
        (Surjectivity::No, Some(FailureReason::CollapsedGenerator))
    } else {
        (Surjectivity::No, Some(FailureReason::ProperImage))
    };
    ImageVerdict {
        prime: p,
        surjective,
        image_order: image.order(),
        target_order,
        complete: image.is_complete(),
        reason,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonMembership {
    /// The target's determinant is not `±1`, so no integer matrix of
    /// determinant `±1` reduces to it.
    DeterminantNotUnit,
    NotInImage,
}

impl NonMembership {
    pub fn as_str(self) -> &'static str {
        match self {
            NonMembership::DeterminantNotUnit => "determinant not in {±1}",
            NonMembership::NotInImage => "not in image",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes { witness: Word },
    No(NonMembership),
    Capped,
}

/// Membership of `target` in the image of `gens` modulo `m`.
pub fn contains_mod(
    gens: &GeneratorSet,
    m: u64,
    target: &ModMatrix,
    cap: usize,
) -> Result<Membership> {
    if target.modulus() != m {
        return Err(Error::InvalidInput("target is reduced modulo a different m".into()));
    }
    if target.n() != gens.n() {
        return Err(Error::DimensionMismatch {
            left: gens.n(),
            right: target.n(),
        });
    }
    if !target.det_is_unit_sign() {
        return Ok(Membership::No(NonMembership::DeterminantNotUnit));
    }
    let image = enumerate_image(gens, m, cap)?;
    Ok(match image.index_of(target) {
        Some(i) => Membership::Yes {
            witness: image.witness(i),
        },
        None if image.is_complete() => Membership::No(NonMembership::NotInImage),
        None => Membership::Capped,
    })
}

/// An integer matrix in the group generated by `gens` that reduces to
/// `target` mod `p`, together with its word. The reduction is re-checked
/// before returning.
pub fn lift_to_integers(
    gens: &GeneratorSet,
    p: u64,
    target: &ModMatrix,
    cap: usize,
) -> Result<(IntMatrix, Word)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    match contains_mod(gens, p, target, cap)? {
        Membership::Yes { witness } => {
            let lifted = eval_word(gens, &witness)?;
            if reduce_mod(&lifted, p)? != *target {
                return Err(Error::InvalidInput("witness failed to reduce to target".into()));
            }
            Ok((lifted, witness))
        }
        Membership::No(_) => Err(Error::NotInImage),
        Membership::Capped => Err(Error::CapExceeded { cap }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use num_traits::ToPrimitive;

    // Independent count of det-1 matrices mod p by exhausting all entries.
    fn brute_sl2_count(p: u64) -> usize {
        let mut count = 0;
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - (b * c) % p) % p == 1 % p {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn order_formula_matches_brute_force() {
        for p in [2, 3, 5, 7] {
            assert_eq!(
                sl_order(2, p).unwrap().to_usize().unwrap(),
                brute_sl2_count(p)
            );
        }
        assert_eq!(sl_order(2, 23).unwrap(), BigUint::from(12144u32));
        assert_eq!(sl_order(3, 7).unwrap(), BigUint::from(5_630_688u32));
        assert_eq!(sl_order(2, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(gl_order(2, 3).unwrap(), BigUint::from(48u32));
        // |GL_2(Z/4Z)| = 16 · 6
        assert_eq!(gl_order(2, 4).unwrap(), BigUint::from(96u32));
        assert_eq!(gl_order(2, 6).unwrap(), BigUint::from(6u32 * 48));
    }

    #[test]
    fn packed_keys_choose_width() {
        assert!(fits(7, 9, 64));
        assert!(!fits(1 << 20, 9, 64));
        assert!(fits(1 << 20, 4, 128));
        assert!(!fits(u64::MAX, 9, 128));
    }

    #[test]
    fn ex5_small_images() {
        let g = catalog::generators("ex5").unwrap();
        let mod2 = enumerate_image(&g, 2, 1000).unwrap();
        assert!(mod2.is_complete());
        assert_eq!(mod2.order(), 2);
        let mod3 = enumerate_image(&g, 3, 1000).unwrap();
        assert_eq!(mod3.order(), 24);
        let v = is_surjective(&g, 2, 1000).unwrap();
        assert_eq!(v.surjective, Surjectivity::No);
        assert_eq!(v.reason, Some(FailureReason::CollapsedGenerator));
        let v = is_surjective(&g, 5, 1000).unwrap();
        assert_eq!(v.surjective, Surjectivity::Yes);
    }

    #[test]
    fn cap_sets_flag_not_error() {
        let g = catalog::generators("ex5").unwrap();
        let img = enumerate_image(&g, 5, 10).unwrap();
        assert!(!img.is_complete());
        assert_eq!(img.order(), 10);
        let v = is_surjective(&g, 5, 10).unwrap();
        assert_eq!(v.surjective, Surjectivity::Capped);
        // exactly the group order is still complete
        assert!(enumerate_image(&g, 5, 120).unwrap().is_complete());
    }

    #[test]
    fn wide_keys_work() {
        // 3^(2·2) fits, but a huge modulus in dimension 8 needs the byte fallback.
        let g = GeneratorSet::new("id8", vec![IntMatrix::identity(8)]).unwrap();
        let img = enumerate_image(&g, u64::MAX - 58, 10).unwrap();
        assert_eq!(img.order(), 1);
        assert!(img.contains(&ModMatrix::identity(8, u64::MAX - 58)));
    }

    #[test]
    fn witness_words_are_shortest_and_sound() {
        let g = catalog::generators("ex1").unwrap();
        let img = enumerate_image(&g, 7, DEFAULT_ELEMENT_CAP).unwrap();
        for i in 0..img.order() {
            let w = img.witness(i);
            assert_eq!(w.len(), img.depth(i));
            let m = eval_word(&g, &w).unwrap();
            assert_eq!(reduce_mod(&m, 7).unwrap(), img.element(i));
        }
    }

    #[test]
    fn membership() {
        let gl2 = catalog::generators("gl2-demo").unwrap();
        let t = ModMatrix::from_rows(&[[1, 2], [3, 4]], 5).unwrap();
        assert_eq!(
            contains_mod(&gl2, 5, &t, 1000).unwrap(),
            Membership::No(NonMembership::DeterminantNotUnit)
        );
        let ex2 = catalog::generators("ex2").unwrap();
        let minus = ModMatrix::minus_identity(2, 4);
        assert_eq!(
            contains_mod(&ex2, 4, &minus, 1000).unwrap(),
            Membership::No(NonMembership::NotInImage)
        );
        let id = ModMatrix::identity(2, 4);
        assert_eq!(
            contains_mod(&ex2, 4, &id, 1000).unwrap(),
            Membership::Yes {
                witness: Word::empty()
            }
        );
    }

    #[test]
    fn lifting() {
        let g = catalog::generators("ex1").unwrap();
        let a = reduce_mod(g.generator(0), 5).unwrap();
        let (m, w) = lift_to_integers(&g, 5, &a, 1000).unwrap();
        assert_eq!(&m, g.generator(0));
        assert_eq!(w, Word::letter(0));
        let (m, w) = lift_to_integers(&g, 5, &ModMatrix::identity(2, 5), 1000).unwrap();
        assert!(m.is_identity() && w.is_empty());

        let target = ModMatrix::from_rows(&[[2, 0], [1, 3]], 5).unwrap();
        let (m, _) = lift_to_integers(&g, 5, &target, 1000).unwrap();
        assert!(num_traits::One::is_one(&m.det()));
        assert_eq!(reduce_mod(&m, 5).unwrap(), target);

        let ex3 = catalog::generators("ex3").unwrap();
        assert_eq!(
            lift_to_integers(&ex3, 5, &target, 1000),
            Err(Error::NotInImage)
        );
    }
}
