//! Partitions, multipartitions, nodes, residues, and the box dominance order.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A partition: weakly decreasing positive parts. Trailing zeros are stripped
/// on construction, so the empty partition is the empty sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Domain("interior zero part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("parts not weakly decreasing: {parts:?}")));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of row `r` (1-based); zero beyond the last row.
    pub fn row(&self, r: u32) -> u32 {
        if r == 0 {
            return 0;
        }
        self.parts.get(r as usize - 1).copied().unwrap_or(0)
    }

    pub fn rows(&self) -> u32 {
        self.parts.len() as u32
    }

    /// Number of columns, i.e. the first part.
    pub fn cols(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn conjugate(&self) -> Self {
        let mut t = Vec::new();
        let mut j = 1u32;
        loop {
            let height = self.parts.iter().take_while(|&&p| p >= j).count() as u32;
            if height == 0 {
                break;
            }
            t.push(height);
            j += 1;
        }
        Self { parts: t }
    }

    /// Column heights padded with zeros to exactly `h` entries.
    pub fn col_heights(&self, h: u32) -> Result<Vec<u32>> {
        let t = self.conjugate();
        if t.parts.len() as u32 > h {
            return Err(Error::Domain(format!("{self} has more than {h} columns")));
        }
        let mut v = t.parts;
        v.resize(h as usize, 0);
        Ok(v)
    }

    pub fn contains(&self, r: u32, c: u32) -> bool {
        r >= 1 && c >= 1 && c <= self.row(r)
    }

    /// True iff every row drop (including the last row against 0) is < e.
    pub fn is_e_restricted(&self, e: u32) -> bool {
        (0..self.parts.len()).all(|i| {
            let next = self.parts.get(i + 1).copied().unwrap_or(0);
            self.parts[i] - next < e
        })
    }

    /// The partition with one box appended to row `r` (1-based, may open a new
    /// row directly below the last).
    pub fn with_box(&self, r: u32) -> Result<Self> {
        if r == 0 || r as usize > self.parts.len() + 1 {
            return Err(Error::Domain(format!("row {r} not addable in {self}")));
        }
        let above = if r == 1 { u32::MAX } else { self.row(r - 1) };
        if self.row(r) >= above {
            return Err(Error::Domain(format!("row {r} not addable in {self}")));
        }
        let mut parts = self.parts.clone();
        if r as usize == parts.len() + 1 {
            parts.push(1);
        } else {
            parts[r as usize - 1] += 1;
        }
        Ok(Self { parts })
    }

    /// The partition with the last box of row `r` removed.
    pub fn without_box(&self, r: u32) -> Result<Self> {
        if r == 0 || r as usize > self.parts.len() || self.row(r) <= self.row(r + 1) {
            return Err(Error::Domain(format!("row {r} not removable in {self}")));
        }
        let mut parts = self.parts.clone();
        parts[r as usize - 1] -= 1;
        if parts[r as usize - 1] == 0 {
            parts.pop();
        }
        Ok(Self { parts })
    }
}

impl fmt::Display for Partition {
    /// Exponent notation matching the literal grammar: `3^4,1`; `0` for ∅.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut pieces = Vec::new();
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut k = 1;
            while i + k < self.parts.len() && self.parts[i + k] == p {
                k += 1;
            }
            if k == 1 {
                pieces.push(format!("{p}"));
            } else {
                pieces.push(format!("{p}^{k}"));
            }
            i += k;
        }
        write!(f, "{}", pieces.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts comma-separated parts with optional `^` multiplicity
    /// (`3^4,1`); `0` and the empty string denote the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut parts = Vec::new();
        for piece in s.split(',') {
            let piece = piece.trim();
            let (base, mult) = match piece.split_once('^') {
                Some((b, m)) => (b.trim(), m.trim()),
                None => (piece, "1"),
            };
            let base: u32 = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad part {piece:?}")))?;
            let mult: u32 = mult
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity {piece:?}")))?;
            for _ in 0..mult {
                parts.push(base);
            }
        }
        Self::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// An ℓ-tuple of partitions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Multipartition {
    comps: Vec<Partition>,
}

impl Multipartition {
    pub fn new(comps: Vec<Partition>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::Domain("level must be at least 1".into()));
        }
        Ok(Self { comps })
    }

    pub fn from_partition(p: Partition) -> Self {
        Self { comps: vec![p] }
    }

    pub fn empty(level: u32) -> Self {
        Self { comps: vec![Partition::empty(); level as usize] }
    }

    pub fn components(&self) -> &[Partition] {
        &self.comps
    }

    /// Component `m`, 1-based.
    pub fn component(&self, m: u32) -> &Partition {
        &self.comps[m as usize - 1]
    }

    pub fn level(&self) -> u32 {
        self.comps.len() as u32
    }

    pub fn size(&self) -> u64 {
        self.comps.iter().map(|p| p.size()).sum()
    }

    pub fn contains(&self, node: Node) -> bool {
        node.comp >= 1
            && node.comp <= self.level()
            && self.component(node.comp).contains(node.row, node.col)
    }

    /// All boxes, component by component, rows top to bottom.
    pub fn boxes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for (mi, comp) in self.comps.iter().enumerate() {
            for (ri, &len) in comp.parts().iter().enumerate() {
                for c in 1..=len {
                    out.push(Node { row: ri as u32 + 1, col: c, comp: mi as u32 + 1 });
                }
            }
        }
        out
    }

    pub fn with_node(&self, node: Node) -> Result<Self> {
        if node.comp == 0 || node.comp > self.level() {
            return Err(Error::Domain(format!("component {} out of range", node.comp)));
        }
        let comp = self.component(node.comp).with_box(node.row)?;
        if comp.row(node.row) != node.col {
            return Err(Error::Domain(format!("node {node:?} not addable")));
        }
        let mut comps = self.comps.clone();
        comps[node.comp as usize - 1] = comp;
        Ok(Self { comps })
    }

    pub fn without_node(&self, node: Node) -> Result<Self> {
        if node.comp == 0 || node.comp > self.level() {
            return Err(Error::Domain(format!("component {} out of range", node.comp)));
        }
        if self.component(node.comp).row(node.row) != node.col {
            return Err(Error::Domain(format!("node {node:?} not removable")));
        }
        let comp = self.component(node.comp).without_box(node.row)?;
        let mut comps = self.comps.clone();
        comps[node.comp as usize - 1] = comp;
        Ok(Self { comps })
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pieces: Vec<String> = self.comps.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", pieces.join("|"))
    }
}

impl FromStr for Multipartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let comps: Result<Vec<Partition>> = s.split('|').map(|p| p.parse()).collect();
        Self::new(comps?)
    }
}

/// A box (r, c, m): row, column, component, all 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Node {
    pub row: u32,
    pub col: u32,
    pub comp: u32,
}

impl Node {
    pub fn new(row: u32, col: u32, comp: u32) -> Self {
        Self { row, col, comp }
    }

    /// Sort key of the box order: (ℓ(r−c)+m, r+c), smaller = more dominant.
    /// Distinct boxes always get distinct keys, so the order is total.
    pub fn dominance_key(&self, level: u32) -> (i64, u32) {
        let diag = self.row as i64 - self.col as i64;
        (level as i64 * diag + self.comp as i64, self.row + self.col)
    }
}

/// Quantum characteristic, level, charge, and column bound shared by all
/// higher-level operations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChargeContext {
    e: u32,
    kappa: Vec<u32>,
    h: u32,
}

impl ChargeContext {
    /// Charges are reduced mod e. Levels ≥ 2 require e > hℓ; level 1
    /// requires e ≥ h. The e = hℓ boundary for ℓ ≥ 2 is rejected here.
    pub fn new(e: u32, kappa: &[i64], h: u32) -> Result<Self> {
        if e < 2 {
            return Err(Error::Domain("quantum characteristic e must be at least 2".into()));
        }
        if kappa.is_empty() {
            return Err(Error::Domain("level must be at least 1".into()));
        }
        if h == 0 {
            return Err(Error::Domain("column bound h must be at least 1".into()));
        }
        let level = kappa.len() as u32;
        if level >= 2 {
            if e <= h * level {
                return Err(Error::Domain(format!(
                    "need e > h*level for level >= 2 (got e={e}, h={h}, level={level})"
                )));
            }
        } else if e < h {
            return Err(Error::Domain(format!(
                "need e >= h for level 1 (got e={e}, h={h})"
            )));
        }
        let kappa = kappa
            .iter()
            .map(|&k| (k.rem_euclid(e as i64)) as u32)
            .collect();
        Ok(Self { e, kappa, h })
    }

    /// Level-1 context with charge 0, the default for single partitions.
    pub fn level_one(e: u32, h: u32) -> Result<Self> {
        Self::new(e, &[0], h)
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn level(&self) -> u32 {
        self.kappa.len() as u32
    }

    pub fn kappa(&self) -> &[u32] {
        &self.kappa
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// Ambient rank hℓ of the alcove embedding.
    pub fn rank(&self) -> u32 {
        self.h * self.level()
    }
}

/// res(r, c, m) = κ_m + c − r mod e.
pub fn residue(node: Node, ctx: &ChargeContext) -> Result<u32> {
    if node.comp == 0 || node.comp > ctx.level() {
        return Err(Error::Domain(format!("component {} out of range", node.comp)));
    }
    let k = ctx.kappa()[node.comp as usize - 1] as i64;
    Ok((k + node.col as i64 - node.row as i64).rem_euclid(ctx.e() as i64) as u32)
}

/// Residue multiset of all boxes, as counts indexed by residue.
pub fn residue_content(lambda: &Multipartition, ctx: &ChargeContext) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; ctx.e() as usize];
    for b in lambda.boxes() {
        counts[residue(b, ctx)? as usize] += 1;
    }
    Ok(counts)
}

/// True iff λ dominates μ: for each residue i, every initial segment of the
/// box order holds at least as many i-boxes of λ as of μ.
///
/// Counting only at the boxes of μ (and strictly) would admit ties between
/// distinct multipartitions; the initial-segment refinement implies those
/// per-box inequalities and is a genuine partial order.
pub fn dominates(lambda: &Multipartition, mu: &Multipartition, ctx: &ChargeContext) -> Result<bool> {
    if lambda.size() != mu.size() {
        return Err(Error::Domain(format!(
            "size mismatch: |{lambda}| = {} vs |{mu}| = {}",
            lambda.size(),
            mu.size()
        )));
    }
    if lambda.level() != mu.level() || lambda.level() != ctx.level() {
        return Err(Error::Domain("level mismatch".into()));
    }
    let level = ctx.level();
    let keyed = |nu: &Multipartition| -> Result<Vec<Vec<(i64, u32)>>> {
        let mut per_res = vec![Vec::new(); ctx.e() as usize];
        for b in nu.boxes() {
            per_res[residue(b, ctx)? as usize].push(b.dominance_key(level));
        }
        for keys in &mut per_res {
            keys.sort_unstable();
        }
        Ok(per_res)
    };
    let lam_keys = keyed(lambda)?;
    let mu_keys = keyed(mu)?;
    for i in 0..ctx.e() as usize {
        // segments only need checking at μ's own box keys
        for (pos, &b) in mu_keys[i].iter().enumerate() {
            if lam_keys[i].partition_point(|&k| k <= b) < pos + 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Boundary {
    Addable,
    Removable,
}

/// Addable or removable nodes, optionally filtered by residue, listed
/// component by component and top row first.
pub fn boundary_nodes(
    lambda: &Multipartition,
    which: Boundary,
    residue_filter: Option<u32>,
    ctx: &ChargeContext,
) -> Result<Vec<Node>> {
    let mut out = Vec::new();
    for m in 1..=lambda.level() {
        let comp = lambda.component(m);
        match which {
            Boundary::Addable => {
                for r in 1..=comp.rows() + 1 {
                    let above = if r == 1 { u32::MAX } else { comp.row(r - 1) };
                    if comp.row(r) < above {
                        out.push(Node::new(r, comp.row(r) + 1, m));
                    }
                }
            }
            Boundary::Removable => {
                for r in 1..=comp.rows() {
                    if comp.row(r) > comp.row(r + 1) {
                        out.push(Node::new(r, comp.row(r), m));
                    }
                }
            }
        }
    }
    if let Some(i) = residue_filter {
        let mut filtered = Vec::new();
        for n in out {
            if residue(n, ctx)? == i % ctx.e() {
                filtered.push(n);
            }
        }
        return Ok(filtered);
    }
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn hook_length_count(p: &Partition) -> u128 {
    let n = p.size();
    let conj = p.conjugate();
    let mut numer: u128 = 1;
    let mut denom: u128 = 1;
    for r in 1..=p.rows() {
        for c in 1..=p.row(r) {
            let hook = (p.row(r) - c) + (conj.row(c) - r) + 1;
            denom *= hook as u128;
        }
    }
    for i in 1..=n {
        numer *= i as u128;
        // interleave divisions to keep the intermediate small
        while denom > 1 && numer % denom == 0 {
            numer /= denom;
            denom = 1;
        }
    }
    numer / denom
}

/// Number of standard tableaux: the hook-length count per component times the
/// multinomial coefficient distributing entries over components.
pub fn dim_specht(lambda: &Multipartition) -> u128 {
    let n = lambda.size();
    let mut remaining = n;
    let mut acc: u128 = 1;
    for comp in lambda.components() {
        acc *= binomial(remaining, comp.size());
        remaining -= comp.size();
        acc *= hook_length_count(comp);
    }
    acc
}
