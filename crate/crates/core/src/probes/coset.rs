//! Todd–Coxeter coset enumeration over `PSL₂(Z) = ⟨s, t | s², t³⟩`.
//!
//! HLT strategy with a lookahead pass when the coset budget runs out.
//! Column 0 is `s` (an involution, so `s²` holds by construction), columns 1
//! and 2 are `t` and `t⁻¹`. Coincidences are merged through a union-find
//! forwarding array.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::st::PslLetter;

pub const DEFAULT_COSET_CAP: usize = 100_000;

const UNDEF: u32 = u32::MAX;
const COLS: usize = 3;
const INV: [usize; COLS] = [0, 2, 1];
const RELATOR_T3: [usize; 3] = [1, 1, 1];

/// Outcome of an enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetOutcome {
    Closed(CosetTable),
    /// The budget ran out; `live` cosets were alive when it stopped.
    Exceeded { live: usize, defined: usize },
}

/// A complete, compacted coset table: coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    /// `s_perm[i]` is the coset `i·s`.
    pub s_perm: Vec<u32>,
    /// `t_perm[i]` is the coset `i·t`.
    pub t_perm: Vec<u32>,
    pub subgroup: Vec<Vec<PslLetter>>,
    /// Cosets defined during the run, including ones later merged.
    pub defined: usize,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.s_perm.len()
    }

    fn act(&self, c: u32, l: PslLetter, t_inv: &[u32]) -> u32 {
        match l {
            PslLetter::S => self.s_perm[c as usize],
            PslLetter::T => self.t_perm[c as usize],
            PslLetter::TInv => t_inv[c as usize],
        }
    }

    /// Re-checks the table from scratch as a permutation representation:
    /// `s` and `t` are permutations with `s² = t³ = 1`, every subgroup
    /// generator fixes coset 0, and the action is transitive.
    pub fn verify(&self) -> Result<(), &'static str> {
        let k = self.index();
        if k == 0 || self.t_perm.len() != k {
            return Err("empty or ragged table");
        }
        let mut t_inv = vec![UNDEF; k];
        let mut seen_s = vec![false; k];
        for i in 0..k {
            let (s, t) = (self.s_perm[i] as usize, self.t_perm[i] as usize);
            if s >= k || t >= k {
                return Err("entry out of range");
            }
            if t_inv[t] != UNDEF || seen_s[s] {
                return Err("not a permutation");
            }
            t_inv[t] = i as u32;
            seen_s[s] = true;
        }
        for i in 0..k as u32 {
            if self.act(self.act(i, PslLetter::S, &t_inv), PslLetter::S, &t_inv) != i {
                return Err("s^2 acts nontrivially");
            }
            let mut c = i;
            for _ in 0..3 {
                c = self.act(c, PslLetter::T, &t_inv);
            }
            if c != i {
                return Err("t^3 acts nontrivially");
            }
        }
        for w in &self.subgroup {
            let end = w.iter().fold(0u32, |c, &l| self.act(c, l, &t_inv));
            if end != 0 {
                return Err("subgroup generator moves the base coset");
            }
        }
        let mut reached = vec![false; k];
        reached[0] = true;
        let mut stack = vec![0u32];
        while let Some(c) = stack.pop() {
            for l in [PslLetter::S, PslLetter::T, PslLetter::TInv] {
                let d = self.act(c, l, &t_inv);
                if !reached[d as usize] {
                    reached[d as usize] = true;
                    stack.push(d);
                }
            }
        }
        if reached.iter().all(|&r| r) {
            Ok(())
        } else {
            Err("action is not transitive")
        }
    }
}

struct Enumerator {
    table: Vec<[u32; COLS]>,
    forward: Vec<u32>,
    live: usize,
    cap: usize,
    queue: VecDeque<u32>,
}

struct Full;

impl Enumerator {
    fn new(cap: usize) -> Self {
        Enumerator {
            table: vec![[UNDEF; COLS]],
            forward: vec![0],
            live: 1,
            cap,
            queue: VecDeque::new(),
        }
    }

    fn is_live(&self, c: u32) -> bool {
        self.forward[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.forward[root as usize] != root {
            root = self.forward[root as usize];
        }
        let mut x = c;
        while self.forward[x as usize] != root {
            let next = self.forward[x as usize];
            self.forward[x as usize] = root;
            x = next;
        }
        root
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, Full> {
        if self.live >= self.cap || self.table.len() >= u32::MAX as usize - 1 {
            return Err(Full);
        }
        let d = self.table.len() as u32;
        self.table.push([UNDEF; COLS]);
        self.forward.push(d);
        self.live += 1;
        self.table[c as usize][x] = d;
        self.table[d as usize][INV[x]] = c;
        Ok(d)
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.forward[hi as usize] = lo;
        self.live -= 1;
        self.queue.push_back(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(g) = self.queue.pop_front() {
            for x in 0..COLS {
                let d = self.table[g as usize][x];
                if d == UNDEF {
                    continue;
                }
                if self.table[d as usize][INV[x]] == g {
                    self.table[d as usize][INV[x]] = UNDEF;
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mx = self.table[mu as usize][x];
                if mx != UNDEF {
                    self.merge(nu, mx);
                } else {
                    let nx = self.table[nu as usize][INV[x]];
                    if nx != UNDEF {
                        self.merge(mu, nx);
                    } else {
                        self.table[mu as usize][x] = nu;
                        self.table[nu as usize][INV[x]] = mu;
                    }
                }
            }
        }
    }

    /// Scans `alpha · word` from both ends; defines new cosets to close the
    /// gap when `fill` is set, otherwise only records deductions.
    fn scan(&mut self, alpha: u32, word: &[usize], fill: bool) -> Result<(), Full> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut i = 0usize;
        let mut b = alpha;
        let mut j = word.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                let next = self.table[f as usize][word[i]];
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                let next = self.table[b as usize][INV[word[j as usize]]];
                if next == UNDEF {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                let x = word[i];
                self.table[f as usize][x] = b;
                self.table[b as usize][INV[x]] = f;
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }

    fn lookahead(&mut self) {
        let mut c = 0;
        while c < self.table.len() {
            if self.is_live(c as u32) {
                let _ = self.scan(c as u32, &RELATOR_T3, false);
            }
            c += 1;
        }
    }

    fn compact(&mut self, subgroup: Vec<Vec<PslLetter>>) -> CosetTable {
        let mut number = vec![UNDEF; self.table.len()];
        let mut next = 0u32;
        for c in 0..self.table.len() {
            if self.is_live(c as u32) {
                number[c] = next;
                next += 1;
            }
        }
        let mut s_perm = Vec::with_capacity(next as usize);
        let mut t_perm = Vec::with_capacity(next as usize);
        for c in 0..self.table.len() {
            if !self.is_live(c as u32) {
                continue;
            }
            let row = self.table[c];
            s_perm.push(number[self.rep(row[0]) as usize]);
            t_perm.push(number[self.rep(row[1]) as usize]);
        }
        CosetTable {
            s_perm,
            t_perm,
            subgroup,
            defined: self.table.len(),
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in
/// `PSL₂(Z)`, stopping once more than `cap` cosets would be alive.
pub fn coset_enumerate(subgroup: &[Vec<PslLetter>], cap: usize) -> CosetOutcome {
    let cap = cap.max(1);
    let words: Vec<Vec<usize>> = subgroup
        .iter()
        .map(|w| w.iter().map(|l| l.column()).collect())
        .collect();
    let mut e = Enumerator::new(cap);
    let mut exhausted = false;

    'subgroup: loop {
        for w in &words {
            if e.scan(0, w, true).is_err() {
                e.lookahead();
                if e.live >= cap {
                    exhausted = true;
                    break 'subgroup;
                }
                continue 'subgroup;
            }
        }
        break;
    }

    let mut alpha = 0usize;
    while !exhausted && alpha < e.table.len() {
        if !e.is_live(alpha as u32) {
            alpha += 1;
            continue;
        }
        let step = (|| -> Result<(), Full> {
            e.scan(alpha as u32, &RELATOR_T3, true)?;
            for x in 0..COLS {
                if e.is_live(alpha as u32) && e.table[alpha][x] == UNDEF {
                    e.define(alpha as u32, x)?;
                }
            }
            Ok(())
        })();
        match step {
            Ok(()) => alpha += 1,
            Err(Full) => {
                e.lookahead();
                if e.live >= cap {
                    exhausted = true;
                }
            }
        }
    }

    if exhausted {
        return CosetOutcome::Exceeded {
            live: e.live,
            defined: e.table.len(),
        };
    }
    CosetOutcome::Closed(e.compact(subgroup.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::st::rewrite_in_st;
    use crate::catalog;

    fn psl_words(id: &str) -> Vec<Vec<PslLetter>> {
        catalog::generators(id)
            .unwrap()
            .generators()
            .iter()
            .map(|g| rewrite_in_st(g).unwrap().to_psl().unwrap())
            .collect()
    }

    #[test]
    fn whole_group_has_index_one() {
        let CosetOutcome::Closed(t) = coset_enumerate(&psl_words("ex1"), 1000) else {
            panic!("did not close");
        };
        assert_eq!(t.index(), 1);
        t.verify().unwrap();
    }

    #[test]
    fn trivial_subgroup_is_infinite() {
        assert!(matches!(coset_enumerate(&[], 500), CosetOutcome::Exceeded { .. }));
    }

    #[test]
    fn level_four_group_has_psl_index_six() {
        let CosetOutcome::Closed(t) = coset_enumerate(&psl_words("ex2"), DEFAULT_COSET_CAP) else {
            panic!("did not close");
        };
        assert_eq!(t.index(), 6);
        t.verify().unwrap();
    }

    #[test]
    fn ex5_does_not_close() {
        assert!(matches!(
            coset_enumerate(&psl_words("ex5"), DEFAULT_COSET_CAP),
            CosetOutcome::Exceeded { .. }
        ));
    }

    #[test]
    fn small_finite_index_examples() {
        // ⟨t, s t s⟩ is the kernel of the map onto Z/2 sending s to 1
        let w = vec![
            vec![PslLetter::T],
            vec![PslLetter::S, PslLetter::T, PslLetter::S],
        ];
        let CosetOutcome::Closed(t) = coset_enumerate(&w, 1000) else {
            panic!("did not close");
        };
        assert_eq!(t.index(), 2);
        t.verify().unwrap();
        // ⟨s, t s t⁻¹, t⁻¹ s t⟩ is the kernel of the map onto Z/3
        let w = vec![
            vec![PslLetter::S],
            vec![PslLetter::T, PslLetter::S, PslLetter::TInv],
            vec![PslLetter::TInv, PslLetter::S, PslLetter::T],
        ];
        let CosetOutcome::Closed(t) = coset_enumerate(&w, 1000) else {
            panic!("did not close");
        };
        assert_eq!(t.index(), 3);
        t.verify().unwrap();
    }

    #[test]
    fn verify_rejects_tampered_tables() {
        let CosetOutcome::Closed(mut t) = coset_enumerate(&psl_words("ex2"), 1000) else {
            panic!("did not close");
        };
        t.t_perm.swap(0, 1);
        assert!(t.verify().is_err());
    }
}
