//! Z- and e-abacus calculus: cores, weights, disorders, homological degree,
//! affine moves, orbit enumeration, runner surgery, and core transposition.

use crate::partition_core::Partition;
use crate::{Error, Result};

/// Bead positions on the integer line, strictly increasing; the bead count h
/// is the number of positions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZAbacus {
    beads: Vec<u64>,
}

impl ZAbacus {
    /// Beads at β_j = (λ^T)_j + h − j for j = 1..h (zero column heights
    /// beyond the last column).
    pub fn from_partition(lambda: &Partition, h: u32) -> Result<Self> {
        let heights = lambda.col_heights(h)?;
        let mut beads: Vec<u64> = heights
            .iter()
            .enumerate()
            .map(|(idx, &ht)| ht as u64 + (h as u64 - 1 - idx as u64))
            .collect();
        beads.sort_unstable();
        if beads.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Internal(format!("duplicate bead positions for {lambda}")));
        }
        Ok(Self { beads })
    }

    pub fn from_positions(mut beads: Vec<u64>) -> Result<Self> {
        beads.sort_unstable();
        if beads.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("duplicate bead positions".into()));
        }
        Ok(Self { beads })
    }

    pub fn beads(&self) -> &[u64] {
        &self.beads
    }

    pub fn bead_count(&self) -> u32 {
        self.beads.len() as u32
    }

    pub fn to_partition(&self) -> Partition {
        let h = self.beads.len() as u64;
        let mut cols: Vec<u32> = self
            .beads
            .iter()
            .rev()
            .enumerate()
            .map(|(j, &b)| (b - (h - 1 - j as u64)) as u32)
            .collect();
        cols.retain(|&c| c > 0);
        // cols are the column heights of the partition, largest first
        Partition::new(cols).expect("sorted column heights").conjugate()
    }
}

/// e runners indexed 0..e−1 bottom to top; runner of position p is p mod e,
/// column is p div e. Beads per runner are sorted columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EAbacus {
    e: u32,
    runners: Vec<Vec<u32>>,
}

impl EAbacus {
    pub fn from_zabacus(a: &ZAbacus, e: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::Domain("need at least one runner".into()));
        }
        let mut runners = vec![Vec::new(); e as usize];
        for &b in a.beads() {
            runners[(b % e as u64) as usize].push((b / e as u64) as u32);
        }
        Ok(Self { e, runners })
    }

    pub fn from_partition(lambda: &Partition, h: u32, e: u32) -> Result<Self> {
        Self::from_zabacus(&ZAbacus::from_partition(lambda, h)?, e)
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn runners(&self) -> &[Vec<u32>] {
        &self.runners
    }

    pub fn bead_count(&self) -> u32 {
        self.runners.iter().map(|r| r.len() as u32).sum()
    }

    pub fn to_zabacus(&self) -> ZAbacus {
        let mut beads = Vec::new();
        for (g, runner) in self.runners.iter().enumerate() {
            for &c in runner {
                beads.push(g as u64 + self.e as u64 * c as u64);
            }
        }
        ZAbacus::from_positions(beads).expect("distinct by construction")
    }

    pub fn to_partition(&self) -> Partition {
        self.to_zabacus().to_partition()
    }

    /// Insert empty runners: r has length (number of runners)+1, r[i] runners
    /// go between runner i−1 and runner i (r[0] below the bottom, r[last]
    /// above the top). Bead columns are unchanged.
    pub fn insert_empty_runners(&self, r: &[u32]) -> Result<EAbacus> {
        if r.len() != self.runners.len() + 1 {
            return Err(Error::Domain(format!(
                "need {} insertion counts, got {}",
                self.runners.len() + 1,
                r.len()
            )));
        }
        let mut runners = Vec::new();
        for (i, runner) in self.runners.iter().enumerate() {
            for _ in 0..r[i] {
                runners.push(Vec::new());
            }
            runners.push(runner.clone());
        }
        for _ in 0..r[self.runners.len()] {
            runners.push(Vec::new());
        }
        Ok(EAbacus { e: runners.len() as u32, runners })
    }

    /// Drop every empty runner, keeping occupied runners in order.
    pub fn remove_empty_runners(&self) -> Result<EAbacus> {
        let runners: Vec<Vec<u32>> =
            self.runners.iter().filter(|r| !r.is_empty()).cloned().collect();
        if runners.is_empty() {
            return Err(Error::Domain("abacus has no beads".into()));
        }
        Ok(EAbacus { e: runners.len() as u32, runners })
    }

    /// Rows top runner first, `o` bead, `-` space.
    pub fn render_text(&self) -> String {
        let width = self
            .runners
            .iter()
            .flat_map(|r| r.iter().map(|&c| c + 1))
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        for runner in self.runners.iter().rev() {
            for c in 0..width {
                out.push(if runner.contains(&c) { 'o' } else { '-' });
            }
            out.push('\n');
        }
        out
    }
}

/// Core: slide every bead as far left on its runner as possible. Weight: the
/// total number of slots slid over.
pub fn e_core_and_weight(a: &ZAbacus, e: u32) -> Result<(Partition, u64)> {
    let ea = EAbacus::from_zabacus(a, e)?;
    let mut weight = 0u64;
    let mut runners = Vec::with_capacity(e as usize);
    for runner in ea.runners() {
        let slid: Vec<u32> = (0..runner.len() as u32).collect();
        weight += runner.iter().map(|&c| c as u64).sum::<u64>();
        weight -= slid.iter().map(|&c| c as u64).sum::<u64>();
        runners.push(slid);
    }
    let core = EAbacus { e, runners }.to_partition();
    Ok((core, weight))
}

/// At most one bead per runner; runner g holds a bead at column cols[g].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UnitaryAbacus {
    e: u32,
    cols: Vec<Option<u32>>,
}

impl UnitaryAbacus {
    /// The h-bead abacus of λ with h = exact column count, wrapped onto e
    /// runners. Ambient variants pass a larger h explicitly.
    pub fn from_partition(lambda: &Partition, e: u32) -> Result<Self> {
        Self::from_partition_ambient(lambda, e, lambda.cols())
    }

    pub fn from_partition_ambient(lambda: &Partition, e: u32, h: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::Domain("need at least one runner".into()));
        }
        let ea = EAbacus::from_partition(lambda, h, e)?;
        Self::from_eabacus(&ea)
    }

    pub fn from_eabacus(a: &EAbacus) -> Result<Self> {
        let mut cols = Vec::with_capacity(a.e() as usize);
        for runner in a.runners() {
            match runner.len() {
                0 => cols.push(None),
                1 => cols.push(Some(runner[0])),
                _ => {
                    return Err(Error::Domain("more than one bead on a runner".into()));
                }
            }
        }
        Ok(Self { e: a.e(), cols })
    }

    pub fn from_runner_cols(e: u32, cols: Vec<Option<u32>>) -> Result<Self> {
        if cols.len() != e as usize {
            return Err(Error::Domain("runner count mismatch".into()));
        }
        Ok(Self { e, cols })
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn runner_cols(&self) -> &[Option<u32>] {
        &self.cols
    }

    /// Occupied runner indices, bottom to top.
    pub fn occupied(&self) -> Vec<usize> {
        (0..self.cols.len()).filter(|&g| self.cols[g].is_some()).collect()
    }

    /// Bead columns on occupied runners, bottom to top.
    pub fn col_tuple(&self) -> Vec<u32> {
        self.cols.iter().filter_map(|c| *c).collect()
    }

    /// Same occupied runners, new bead columns (bottom to top).
    pub fn with_col_tuple(&self, t: &[u32]) -> Result<Self> {
        let occ = self.occupied();
        if occ.len() != t.len() {
            return Err(Error::Domain("column tuple length mismatch".into()));
        }
        let mut cols = vec![None; self.cols.len()];
        for (g, &c) in occ.iter().zip(t) {
            cols[*g] = Some(c);
        }
        Ok(Self { e: self.e, cols })
    }

    pub fn bead_count(&self) -> u32 {
        self.cols.iter().filter(|c| c.is_some()).count() as u32
    }

    pub fn to_eabacus(&self) -> EAbacus {
        let runners = self
            .cols
            .iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        EAbacus { e: self.e, runners }
    }

    pub fn to_partition(&self) -> Partition {
        self.to_eabacus().to_partition()
    }

    /// Drop empty runners, producing the h-runner abacus with the same bead
    /// columns in the same bottom-to-top order.
    pub fn remove_empty_runners(&self) -> Result<UnitaryAbacus> {
        let cols: Vec<Option<u32>> =
            self.cols.iter().filter(|c| c.is_some()).copied().collect();
        if cols.is_empty() {
            return Err(Error::Domain("abacus has no beads".into()));
        }
        Ok(Self { e: cols.len() as u32, cols })
    }
}

/// True iff the beads of the h-bead abacus (h = exact column count) lie in a
/// window of width e.
pub fn is_unitary(lambda: &Partition, e: u32) -> bool {
    is_unitary_ambient(lambda, e, lambda.cols()).unwrap_or(false)
}

/// Window test with an explicit ambient bead count h ≥ columns(λ).
pub fn is_unitary_ambient(lambda: &Partition, e: u32, h: u32) -> Result<bool> {
    let a = ZAbacus::from_partition(lambda, h)?;
    match (a.beads().first(), a.beads().last()) {
        (Some(&lo), Some(&hi)) => Ok(hi - lo < u64::from(e)),
        _ => Ok(true),
    }
}

/// Unordered occupied-runner pairs where the upper bead is strictly left of
/// the lower bead.
pub fn disorders(u: &UnitaryAbacus) -> u64 {
    let t = u.col_tuple();
    let mut count = 0;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[j] < t[i] {
                count += 1;
            }
        }
    }
    count
}

/// Homological degree: Σ over occupied pairs |β_i − β_j| minus disorders.
pub fn hd(u: &UnitaryAbacus) -> u64 {
    let t = u.col_tuple();
    let mut total = 0u64;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            total += (t[i] as i64 - t[j] as i64).unsigned_abs();
        }
    }
    total - disorders(u)
}

/// Swap the beads on the lowest and highest occupied runners, then move the
/// bottom bead one step right and the top bead one step left.
pub fn apply_s0(u: &UnitaryAbacus) -> Result<UnitaryAbacus> {
    let occ = u.occupied();
    if occ.len() < 2 {
        return Err(Error::Domain("need at least two beads".into()));
    }
    let (lo, hi) = (occ[0], occ[occ.len() - 1]);
    let (a, b) = (u.cols[lo].unwrap(), u.cols[hi].unwrap());
    if a == 0 {
        return Err(Error::Domain("bottom bead cannot move left of column 0".into()));
    }
    let mut cols = u.cols.clone();
    cols[lo] = Some(b + 1);
    cols[hi] = Some(a - 1);
    Ok(UnitaryAbacus { e: u.e, cols })
}

/// τ_i: fix the bottom i runners; on the top e−i runners rotate every bead up
/// one runner (the top bead wrapping to runner i), then shift the bead on
/// runner i one step right. Requires every runner occupied.
pub fn apply_tau(u: &UnitaryAbacus, i: u32) -> Result<UnitaryAbacus> {
    let e = u.e;
    if i >= e {
        return Err(Error::Domain(format!("tau index {i} out of range for e = {e}")));
    }
    if u.bead_count() != e {
        return Err(Error::Domain("tau needs a bead on every runner".into()));
    }
    let mut cols = u.cols.clone();
    let block: Vec<u32> = (i..e).map(|g| cols[g as usize].unwrap()).collect();
    let m = block.len();
    for (idx, g) in (i..e).enumerate() {
        cols[g as usize] = Some(block[(idx + m - 1) % m]);
    }
    cols[i as usize] = Some(cols[i as usize].unwrap() + 1);
    Ok(UnitaryAbacus { e, cols })
}

/// Apply a weakly decreasing word of τ-indices (zeros allowed) to the e-bead
/// abacus of ∅, largest index first.
pub fn apply_tau_word(e: u32, word: &[u32]) -> Result<UnitaryAbacus> {
    if word.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Domain("tau word must be weakly decreasing".into()));
    }
    let mut u = UnitaryAbacus::from_runner_cols(e, vec![Some(0); e as usize])?;
    for &i in word {
        u = apply_tau(&u, i)?;
    }
    Ok(u)
}

/// Invert the τ-word bijection on an orbit member: after removing empty
/// runners, the unique word in the (h−1)×k box reproducing the bead columns.
pub fn tau_from_partition(u: &UnitaryAbacus) -> Result<Vec<u32>> {
    let stripped = u.remove_empty_runners()?;
    let h = stripped.e;
    let k: u64 = stripped.col_tuple().iter().map(|&c| c as u64).sum();
    let target = stripped.col_tuple();
    let mut word = vec![0u32; k as usize];
    if k == 0 {
        return Ok(word);
    }
    // search the (h−1) x k box of weakly decreasing words
    fn search(word: &mut Vec<u32>, pos: usize, max: u32, h: u32, target: &[u32]) -> bool {
        if pos == word.len() {
            let got = apply_tau_word(h, word).expect("word in box is valid");
            return got.col_tuple() == target;
        }
        for v in (0..=max).rev() {
            word[pos] = v;
            if search(word, pos + 1, v, h, target) {
                return true;
            }
        }
        word[pos] = 0;
        false
    }
    if !search(&mut word, 0, h - 1, h, &target) {
        return Err(Error::Domain("abacus is not in the image of the tau bijection".into()));
    }
    Ok(word)
}

/// All bead-column tuples with the same occupied runners and total as λ's
/// unitary abacus, as partitions, sorted by (hd, label).
pub fn enumerate_po(lambda: &Partition, e: u32) -> Result<Vec<Partition>> {
    Ok(enumerate_po_abaci(lambda, e)?
        .into_iter()
        .map(|u| u.to_partition())
        .collect())
}

pub fn enumerate_po_abaci(lambda: &Partition, e: u32) -> Result<Vec<UnitaryAbacus>> {
    if !is_unitary(lambda, e) {
        return Err(Error::Domain(format!("{lambda} is not {e}-unitary")));
    }
    let base = UnitaryAbacus::from_partition(lambda, e)?;
    let h = base.bead_count() as usize;
    let k: u64 = base.col_tuple().iter().map(|&c| c as u64).sum();
    let mut out = Vec::new();
    let mut tuple = vec![0u32; h];
    fn rec(
        tuple: &mut Vec<u32>,
        pos: usize,
        left: u64,
        base: &UnitaryAbacus,
        out: &mut Vec<UnitaryAbacus>,
    ) {
        if pos + 1 == tuple.len() {
            tuple[pos] = left as u32;
            out.push(base.with_col_tuple(tuple).expect("same runner count"));
            return;
        }
        for v in 0..=left {
            tuple[pos] = v as u32;
            rec(tuple, pos + 1, left - v, base, out);
        }
    }
    if h == 0 {
        out.push(base);
    } else {
        rec(&mut tuple, 0, k, &base, &mut out);
    }
    let mut keyed: Vec<(u64, Partition, UnitaryAbacus)> =
        out.into_iter().map(|u| (hd(&u), u.to_partition(), u)).collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(keyed.into_iter().map(|(_, _, u)| u).collect())
}

/// A bead exchange between two occupied runners: columns (a, b) on runners
/// (low, high) become (b + shift, a − shift). shift = 0 is the plain swap;
/// shift = 1 matches the affine generator pattern.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CoveringMove {
    pub low: usize,
    pub high: usize,
    pub shift: i64,
}

/// All single two-runner bead exchanges lowering hd by exactly one,
/// deterministically ordered by (low, high, shift).
pub fn covering_transpositions(u: &UnitaryAbacus) -> Vec<(UnitaryAbacus, CoveringMove)> {
    let occ = u.occupied();
    let base_hd = hd(u);
    let mut out = Vec::new();
    for ii in 0..occ.len() {
        for jj in ii + 1..occ.len() {
            let (lo, hi) = (occ[ii], occ[jj]);
            let (a, b) = (u.cols[lo].unwrap() as i64, u.cols[hi].unwrap() as i64);
            // (a, b) -> (b + m, a - m), constrained to non-negative columns
            for m in -b..=a {
                let (na, nb) = (b + m, a - m);
                if (na, nb) == (a, b) {
                    continue;
                }
                let mut cols = u.cols.clone();
                cols[lo] = Some(na as u32);
                cols[hi] = Some(nb as u32);
                let candidate = UnitaryAbacus { e: u.e, cols };
                if base_hd > 0 && hd(&candidate) == base_hd - 1 {
                    out.push((candidate, CoveringMove { low: lo, high: hi, shift: m }));
                }
            }
        }
    }
    out.sort_by_key(|(_, m)| (m.low, m.high, m.shift));
    out
}

/// Core transposition: swap beads and spaces in column 0 (all beads must sit
/// there), then flip the abacus upside down. Sends the core abacus of ρ with
/// h < e beads to the core abacus of ρ^T with e−h beads.
pub fn core_transpose_abacus(a: &EAbacus) -> Result<EAbacus> {
    let e = a.e() as usize;
    let mut occupied = vec![false; e];
    for (g, runner) in a.runners().iter().enumerate() {
        match runner.len() {
            0 => {}
            1 if runner[0] == 0 => occupied[g] = true,
            _ => {
                return Err(Error::Domain(
                    "core transposition needs all beads in column 0".into(),
                ));
            }
        }
    }
    let mut runners = vec![Vec::new(); e];
    for g in 0..e {
        if !occupied[g] {
            runners[e - 1 - g].push(0);
        }
    }
    Ok(EAbacus { e: e as u32, runners })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn ua(e: u32, cols: &[Option<u32>]) -> UnitaryAbacus {
        UnitaryAbacus::from_runner_cols(e, cols.to_vec()).unwrap()
    }

    #[test]
    fn z_abacus_examples() {
        assert_eq!(ZAbacus::from_partition(&p("3^4,1"), 3).unwrap().beads(), &[4, 5, 7]);
        assert_eq!(ZAbacus::from_partition(&p("3^3,2,1^2"), 3).unwrap().beads(), &[3, 5, 8]);
        assert_eq!(ZAbacus::from_partition(&Partition::empty(), 3).unwrap().beads(), &[0, 1, 2]);
        assert!(ZAbacus::from_partition(&p("3,1"), 2).is_err());
    }

    #[test]
    fn core_and_weight_examples() {
        let a = ZAbacus::from_partition(&p("3^4,1"), 3).unwrap();
        let (core, w) = e_core_and_weight(&a, 4).unwrap();
        assert_eq!(core, p("1"));
        assert_eq!(w, 3);

        let b = ZAbacus::from_partition(&p("3^5"), 3).unwrap();
        let (core, w) = e_core_and_weight(&b, 5).unwrap();
        assert_eq!(core, Partition::empty());
        assert_eq!(w, 3);

        let c = ZAbacus::from_partition(&core, 3).unwrap();
        assert_eq!(e_core_and_weight(&c, 5).unwrap(), (Partition::empty(), 0));
    }

    #[test]
    fn unitary_window_examples() {
        assert!(is_unitary(&p("3^4,1"), 4));
        assert!(is_unitary(&p("3,3"), 3));
        assert!(!is_unitary(&p("5,4,2^5,1"), 5));
        assert!(!is_unitary_ambient(&p("1,1"), 3, 2).unwrap());
        assert!(is_unitary(&Partition::empty(), 3));
        assert!(!is_unitary(&p("4,1,1"), 3));
    }

    #[test]
    fn disorder_examples() {
        assert_eq!(disorders(&ua(5, &[Some(8), Some(7), Some(6), Some(0), None])), 6);
        assert_eq!(disorders(&ua(4, &[Some(2), Some(0), Some(1), None])), 2);
        assert_eq!(disorders(&ua(4, &[Some(0), Some(0), Some(0), None])), 0);
    }

    #[test]
    fn hd_examples_and_s0() {
        let nu = ua(5, &[Some(8), Some(7), Some(6), Some(0), None]);
        assert_eq!(hd(&nu), 19);
        let mu = apply_s0(&nu).unwrap();
        assert_eq!(mu.col_tuple(), vec![1, 7, 6, 7]);
        assert_eq!(disorders(&mu), 1);
        assert_eq!(hd(&mu), 18);
        let core = ua(5, &[Some(0), Some(0), None, Some(0), None]);
        assert_eq!(hd(&core), 0);
    }

    #[test]
    fn tau_rotation_matches_worked_move() {
        let u = UnitaryAbacus::from_partition_ambient(&p("3^11,2^3,1^11"), 5, 5).unwrap();
        assert_eq!(u.col_tuple(), vec![0, 0, 3, 2, 5]);
        let before = hd(&u);
        let v = apply_tau(&u, 2).unwrap();
        assert_eq!(v.col_tuple(), vec![0, 0, 6, 3, 2]);
        assert_eq!(hd(&v), before + 2);
    }

    #[test]
    fn tau_word_examples() {
        let u = apply_tau_word(5, &[3, 3, 1, 0]).unwrap();
        assert_eq!(u.to_partition(), p("5,4,2^5,1"));
        assert_eq!(hd(&u), 7);
        assert_eq!(apply_tau_word(4, &[]).unwrap().to_partition(), Partition::empty());
        // zero letters still act: the length-k zero word lands on the orbit base
        let base = apply_tau_word(4, &[0, 0, 0]).unwrap();
        assert_eq!(base.to_partition(), p("4,4,4"));
        assert_eq!(hd(&base), 0);
        assert!(apply_tau_word(4, &[4]).is_err());
        assert!(apply_tau_word(4, &[1, 2]).is_err());
    }

    #[test]
    fn tau_inversion_round_trips() {
        let u = UnitaryAbacus::from_partition(&p("5,4,2^5,1"), 5).unwrap();
        assert_eq!(tau_from_partition(&u).unwrap(), vec![3, 3, 1, 0]);

        let empty = apply_tau_word(3, &[]).unwrap();
        assert_eq!(tau_from_partition(&empty).unwrap(), Vec::<u32>::new());

        for e in [3u32, 4] {
            for word in [&[2, 1, 0][..], &[1, 1][..], &[2, 2, 2][..], &[0][..]] {
                let word: Vec<u32> = word.iter().map(|&x| x.min(e - 1)).collect();
                let mut sorted = word.clone();
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                let u = apply_tau_word(e, &sorted).unwrap();
                assert_eq!(tau_from_partition(&u).unwrap(), sorted);
            }
        }
    }

    #[test]
    fn po_enumeration_examples() {
        let po = enumerate_po(&p("3^4,1"), 4).unwrap();
        assert_eq!(po.len(), 10); // C(3+3-1, 3)
        for member in ["3^3,2,1^2", "3,2^5", "3^3,1^4", "3^4,1"] {
            assert!(po.contains(&p(member)), "missing {member}");
        }
        assert_eq!(enumerate_po(&p("2,1"), 4).unwrap(), vec![p("2,1")]); // weight 0
        assert_eq!(enumerate_po(&p("3^5"), 5).unwrap().len(), 10);
    }

    #[test]
    fn po_matches_bfs_over_single_moves() {
        use std::collections::HashSet;
        for (lam, e) in [("3^4,1", 4u32), ("3^5", 5), ("2^2", 2)] {
            let lam = p(lam);
            let direct: HashSet<Partition> = enumerate_po(&lam, e).unwrap().into_iter().collect();
            let base = UnitaryAbacus::from_partition(&lam, e).unwrap();
            let mut seen: HashSet<Vec<u32>> = HashSet::new();
            let mut queue = vec![base.col_tuple()];
            seen.insert(base.col_tuple());
            while let Some(t) = queue.pop() {
                for i in 0..t.len() {
                    for j in 0..t.len() {
                        if i == j || t[j] == 0 {
                            continue;
                        }
                        let mut next = t.clone();
                        next[i] += 1;
                        next[j] -= 1;
                        if seen.insert(next.clone()) {
                            queue.push(next);
                        }
                    }
                }
            }
            let bfs: HashSet<Partition> = seen
                .into_iter()
                .map(|t| base.with_col_tuple(&t).unwrap().to_partition())
                .collect();
            assert_eq!(direct, bfs, "λ = {lam}, e = {e}");
        }
    }

    #[test]
    fn covering_moves_drop_hd_by_one_and_match_brute_force() {
        use std::collections::HashSet;
        for (lam, e) in [("3^4,1", 4u32), ("3^5", 5)] {
            let lam = p(lam);
            let abaci = enumerate_po_abaci(&lam, e).unwrap();
            for u in &abaci {
                let down = covering_transpositions(u);
                let got: HashSet<Partition> =
                    down.iter().map(|(v, _)| v.to_partition()).collect();
                assert_eq!(got.len(), down.len(), "duplicate covering targets");
                // brute force: orbit members one hd lower differing on two runners
                let want: HashSet<Partition> = abaci
                    .iter()
                    .filter(|v| {
                        hd(v) + 1 == hd(u)
                            && v.col_tuple()
                                .iter()
                                .zip(u.col_tuple())
                                .filter(|(a, b)| **a != *b)
                                .count()
                                == 2
                    })
                    .map(|v| v.to_partition())
                    .collect();
                assert_eq!(got, want, "λ = {lam}, e = {e}, μ = {}", u.to_partition());
                for (v, _) in &down {
                    assert_eq!(hd(v) + 1, hd(u));
                }
            }
        }
    }

    #[test]
    fn covering_includes_the_affine_flip() {
        let nu = ua(5, &[Some(8), Some(7), Some(6), Some(0), None]);
        let down = covering_transpositions(&nu);
        assert!(down
            .iter()
            .any(|(v, m)| v.col_tuple() == vec![1, 7, 6, 7] && m.shift == 1));
    }

    #[test]
    fn runner_insertion_round_trip_preserves_hd() {
        let u = UnitaryAbacus::from_partition(&p("3^4,1"), 4).unwrap();
        let ea = u.to_eabacus();
        let bigger = ea.insert_empty_runners(&[1, 0, 2, 0, 1]).unwrap();
        assert_eq!(bigger.e(), 8);
        assert_eq!(bigger.remove_empty_runners().unwrap(), ea.remove_empty_runners().unwrap());
        let bu = UnitaryAbacus::from_eabacus(&bigger).unwrap();
        assert_eq!(hd(&bu), hd(&u));
    }

    #[test]
    fn stripped_unitary_abacus_lands_in_the_square_orbit() {
        for (lam, e) in [("3^4,1", 4u32), ("2^28,1^3", 5), ("3^9,2^4", 7)] {
            let lam = p(lam);
            let u = UnitaryAbacus::from_partition(&lam, e).unwrap();
            let h = u.bead_count();
            let stripped = u.remove_empty_runners().unwrap();
            assert_eq!(hd(&stripped), hd(&u));
            let mu = stripped.to_partition();
            let (core, w) = e_core_and_weight(
                &ZAbacus::from_partition(&mu, h).unwrap(),
                h,
            )
            .unwrap();
            assert_eq!(core, Partition::empty());
            let (_, w_orig) = e_core_and_weight(
                &ZAbacus::from_partition(&lam, h).unwrap(),
                e,
            )
            .unwrap();
            assert_eq!(w, w_orig);
        }
    }

    #[test]
    fn core_transpose_is_an_involution_on_labels() {
        let mut tested = 0;
        for e in [4u32, 5, 7] {
            for n in 0..=15u32 {
                for rho in all_partitions(n) {
                    let h = rho.cols();
                    if h >= e {
                        continue;
                    }
                    let beads = ZAbacus::from_partition(&rho, h).unwrap();
                    if beads.beads().last().copied().unwrap_or(0) >= e as u64 {
                        continue; // not the column-0 configuration
                    }
                    let ea = EAbacus::from_zabacus(&beads, e).unwrap();
                    let t = core_transpose_abacus(&ea).unwrap();
                    assert_eq!(t.to_partition(), rho.conjugate(), "e={e}, rho={rho}");
                    let back = core_transpose_abacus(&t).unwrap();
                    assert_eq!(back.to_partition(), rho, "e={e}, rho={rho}");
                    tested += 1;
                }
            }
        }
        assert!(tested > 50, "only {tested} cores exercised");
    }

    fn all_partitions(n: u32) -> Vec<Partition> {
        fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition::new(prefix.clone()).unwrap());
                return;
            }
            for next in (1..=max.min(n)).rev() {
                prefix.push(next);
                rec(n - next, next, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n.max(1), &mut Vec::new(), &mut out);
        out
    }

    proptest! {
        #[test]
        fn abacus_round_trips(parts in proptest::collection::vec(1u32..=8, 0..8), pad in 0u32..3) {
            let mut parts = parts;
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            let h = lam.cols() + pad;
            if h > 0 {
                let a = ZAbacus::from_partition(&lam, h).unwrap();
                prop_assert_eq!(a.to_partition(), lam.clone());
                for e in 2u32..=5 {
                    let ea = EAbacus::from_zabacus(&a, e).unwrap();
                    prop_assert_eq!(ea.to_partition(), lam.clone());
                }
            }
        }

        #[test]
        fn tau_words_have_hd_equal_to_weight(e in 3u32..=6, raw in proptest::collection::vec(0u32..6, 0..5)) {
            let mut word: Vec<u32> = raw.into_iter().map(|x| x % e).collect();
            word.sort_unstable_by(|a, b| b.cmp(a));
            let u = apply_tau_word(e, &word).unwrap();
            let total: u64 = word.iter().map(|&x| x as u64).sum();
            prop_assert_eq!(hd(&u), total);
        }

        #[test]
        fn inserting_empty_runners_preserves_hd(
            parts in proptest::collection::vec(1u32..=6, 0..6),
            r_seed in proptest::collection::vec(0u32..2, 0..12),
        ) {
            let mut parts = parts;
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            let e = lam.cols().max(2) + 2;
            if is_unitary(&lam, e) && lam.cols() > 0 {
                let u = UnitaryAbacus::from_partition(&lam, e).unwrap();
                let ea = u.to_eabacus();
                let slots = e as usize + 1;
                let mut r = vec![0u32; slots];
                for (i, v) in r_seed.iter().enumerate() {
                    r[i % slots] += v;
                }
                let big = ea.insert_empty_runners(&r).unwrap();
                let bu = UnitaryAbacus::from_eabacus(&big).unwrap();
                prop_assert_eq!(hd(&bu), hd(&u));
            }
        }
    }
}
