//! Unitary simple modules as explicit combinatorial data: tableau bases with
//! generator matrices, branching under restriction, the unitary branching
//! graph, and the Mullineux involution in abacus, path, and crystal form.

use std::collections::{BTreeMap, HashMap};

use crate::abacus::{core_transpose_abacus, e_core_and_weight, is_unitary, EAbacus, ZAbacus};
use crate::alcove::{good_nodes, in_fundamental_alcove};
use crate::partition_core::{
    boundary_nodes, residue, Boundary, ChargeContext, Multipartition, Node, Partition,
};
use crate::tableaux::{enumerate_std_e, residue_sequence, StandardTableau};
use crate::{Error, Result};

/// Square integer matrix in sorted sparse triplet form. Entry (i, j, v) is
/// the coefficient of the i-th basis vector in the image of the j-th, so
/// matrices compose on the left.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix {
    rows: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrix {
    pub fn zero(rows: usize) -> Self {
        Self { rows, entries: Vec::new() }
    }

    pub fn identity(rows: usize) -> Self {
        Self { rows, entries: (0..rows).map(|i| (i, i, 1)).collect() }
    }

    /// Normalizes: repeated coordinates are summed, zeros dropped, order
    /// fixed row-major. Equal matrices therefore compare equal structurally.
    pub fn from_entries(rows: usize, entries: Vec<(usize, usize, i64)>) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (i, j, v) in entries {
            if i >= rows || j >= rows {
                return Err(Error::Domain(format!(
                    "entry ({i}, {j}) outside a {rows}x{rows} matrix"
                )));
            }
            *acc.entry((i, j)).or_insert(0) += v;
        }
        Ok(Self::collect(rows, acc))
    }

    fn collect(rows: usize, acc: BTreeMap<(usize, usize), i64>) -> Self {
        let entries = acc
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|((i, j), v)| (i, j, v))
            .collect();
        Self { rows, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn entries(&self) -> &[(usize, usize, i64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows {
            return Err(Error::Domain(format!(
                "matrix size mismatch: {} vs {}",
                self.rows, other.rows
            )));
        }
        let mut rows_of: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
        for &(k, j, w) in &other.entries {
            rows_of.entry(k).or_default().push((j, w));
        }
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for &(i, k, v) in &self.entries {
            if let Some(row) = rows_of.get(&k) {
                for &(j, w) in row {
                    *acc.entry((i, j)).or_insert(0) += v * w;
                }
            }
        }
        Ok(Self::collect(self.rows, acc))
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows {
            return Err(Error::Domain(format!(
                "matrix size mismatch: {} vs {}",
                self.rows, other.rows
            )));
        }
        let mut all = self.entries.clone();
        all.extend_from_slice(&other.entries);
        Self::from_entries(self.rows, all)
    }

    /// The square submatrix on the listed basis indices, reindexed in their
    /// given order. Entries with a coordinate outside the subset are dropped.
    pub fn submatrix(&self, index: &[usize]) -> Result<SparseMatrix> {
        let mut pos: HashMap<usize, usize> = HashMap::with_capacity(index.len());
        for (new, &old) in index.iter().enumerate() {
            if old >= self.rows {
                return Err(Error::Domain(format!("index {old} out of range")));
            }
            if pos.insert(old, new).is_some() {
                return Err(Error::Domain(format!("index {old} repeats")));
            }
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|&(i, j, v)| Some((*pos.get(&i)?, *pos.get(&j)?, v)))
            .collect();
        Self::from_entries(index.len(), entries)
    }
}

/// A unitary simple module presented on its alcove-restricted tableau basis:
/// one diagonal projector per residue word, one (zero) dot matrix per entry,
/// and one crossing matrix per adjacent pair of entries.
pub struct SimpleModuleModel {
    lambda: Multipartition,
    ctx: ChargeContext,
    basis: Vec<StandardTableau>,
    residue_seqs: Vec<Vec<u32>>,
    idempotents: Vec<(Vec<u32>, SparseMatrix)>,
    ys: Vec<SparseMatrix>,
    psis: Vec<SparseMatrix>,
}

impl SimpleModuleModel {
    pub fn lambda(&self) -> &Multipartition {
        &self.lambda
    }

    pub fn context(&self) -> &ChargeContext {
        &self.ctx
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[StandardTableau] {
        &self.basis
    }

    /// Residue words of the basis paths, parallel to `basis`. Pairwise
    /// distinct: each weight space is one-dimensional.
    pub fn residue_sequences(&self) -> &[Vec<u32>] {
        &self.residue_seqs
    }

    /// Diagonal projectors keyed by residue word, in basis order.
    pub fn idempotents(&self) -> &[(Vec<u32>, SparseMatrix)] {
        &self.idempotents
    }

    /// Dot generators y_1, ..., y_n. All zero on a unitary simple module.
    pub fn y_matrices(&self) -> &[SparseMatrix] {
        &self.ys
    }

    /// Crossing generators psi_1, ..., psi_{n-1}. psi_r swaps the entries
    /// r, r+1 of a basis path when their residues are neither equal nor
    /// cyclically adjacent mod e, and kills it otherwise.
    pub fn psi_matrices(&self) -> &[SparseMatrix] {
        &self.psis
    }
}

/// Builds the matrix model of the simple module labeled by a fundamental
/// alcove weight.
pub fn generator_matrices(lambda: &Multipartition, ctx: &ChargeContext) -> Result<SimpleModuleModel> {
    let basis = enumerate_std_e(lambda, ctx)?;
    if basis.is_empty() {
        return Err(Error::Internal(format!(
            "{lambda} lies in the alcove but has no restricted paths"
        )));
    }
    let dim = basis.len();
    let n = lambda.size() as usize;
    let e = ctx.e();

    let residue_seqs: Vec<Vec<u32>> = basis
        .iter()
        .map(|t| residue_sequence(t, ctx))
        .collect::<Result<_>>()?;
    let mut word_index: HashMap<&[u32], usize> = HashMap::with_capacity(dim);
    for (s, seq) in residue_seqs.iter().enumerate() {
        if word_index.insert(seq.as_slice(), s).is_some() {
            return Err(Error::Internal(format!(
                "residue word {seq:?} repeats in {lambda}: weight spaces must be one-dimensional"
            )));
        }
    }

    let idempotents = residue_seqs
        .iter()
        .enumerate()
        .map(|(s, seq)| {
            (seq.clone(), SparseMatrix { rows: dim, entries: vec![(s, s, 1)] })
        })
        .collect();

    let node_index: HashMap<Vec<Node>, usize> = basis
        .iter()
        .enumerate()
        .map(|(s, t)| (t.nodes().to_vec(), s))
        .collect();

    let mut psis = Vec::with_capacity(n.saturating_sub(1));
    for r in 1..n {
        let mut entries = Vec::new();
        for (s, seq) in residue_seqs.iter().enumerate() {
            let gap = (seq[r - 1] + e - seq[r]) % e;
            if gap == 0 || gap == 1 || gap == e - 1 {
                continue;
            }
            let mut swapped = basis[s].nodes().to_vec();
            swapped.swap(r - 1, r);
            let Some(&target) = node_index.get(&swapped) else {
                return Err(Error::Internal(format!(
                    "swapping entries {r} and {} of {} leaves the restricted basis of {lambda}",
                    r + 1,
                    basis[s]
                )));
            };
            entries.push((target, s, 1));
        }
        psis.push(SparseMatrix::from_entries(dim, entries)?);
    }

    Ok(SimpleModuleModel {
        lambda: lambda.clone(),
        ctx: ctx.clone(),
        basis,
        residue_seqs,
        idempotents,
        ys: (0..n).map(|_| SparseMatrix::zero(dim)).collect(),
        psis,
    })
}

/// Restriction to one fewer box: residue of each good box mapped to the
/// smaller alcove weight. Distinct good boxes always carry distinct residues.
pub fn restriction_decomposition(
    lambda: &Multipartition,
    ctx: &ChargeContext,
) -> Result<BTreeMap<u32, Multipartition>> {
    let mut out = BTreeMap::new();
    for node in good_nodes(lambda, ctx)? {
        let r = residue(node, ctx)?;
        if out.insert(r, lambda.without_node(node)?).is_some() {
            return Err(Error::Internal(format!(
                "two good boxes of {lambda} share residue {r}"
            )));
        }
    }
    Ok(out)
}

/// Unitary with fewer than e columns. Such partitions are automatically
/// e-restricted: successive differences are bounded by the column count.
pub fn is_unitary_restricted(lambda: &Partition, e: u32) -> bool {
    lambda.is_empty() || (lambda.cols() < e && is_unitary(lambda, e))
}

/// The Mullineux image of a unitary partition with h < e columns.
///
/// Write the e-weight as w = (e-h)q + r. The e-core transposes on the
/// abacus (beads and gaps swap in column 0, then the runners flip), and the
/// r lowest beads of the transposed core move q+1 columns right while the
/// remaining e-h-r move q columns right. The image is again unitary, with
/// at most e-h columns, and the map is an involution.
pub fn mullineux(lambda: &Partition, e: u32) -> Result<Partition> {
    if e < 2 {
        return Err(Error::Domain("quantum characteristic e must be at least 2".into()));
    }
    if lambda.is_empty() {
        return Ok(Partition::empty());
    }
    let h = lambda.cols();
    if h >= e {
        return Err(Error::Domain(format!(
            "{lambda} has {h} columns; the transpose-core construction needs fewer than e = {e}"
        )));
    }
    if !is_unitary(lambda, e) {
        return Err(Error::Domain(format!("{lambda} is not unitary at e = {e}")));
    }
    let (core, weight) = e_core_and_weight(&ZAbacus::from_partition(lambda, h)?, e)?;
    let free = (e - h) as u64;
    let q = weight / free;
    let r = (weight % free) as usize;
    // a unitary abacus has at most one bead per runner, so the core is flat
    let flipped = core_transpose_abacus(&EAbacus::from_partition(&core, h, e)?)?;
    let occupied: Vec<u64> = flipped
        .runners()
        .iter()
        .enumerate()
        .filter(|(_, runner)| !runner.is_empty())
        .map(|(g, _)| g as u64)
        .collect();
    if occupied.len() as u64 != free {
        return Err(Error::Internal(format!(
            "transposed core of {lambda} has {} beads, expected {free}",
            occupied.len()
        )));
    }
    let beads = occupied
        .iter()
        .enumerate()
        .map(|(k, &g)| g + e as u64 * (q + u64::from(k < r)))
        .collect();
    Ok(ZAbacus::from_positions(beads)?.to_partition())
}

/// Pushes a restricted path through the Mullineux map shape by shape. The
/// image path visits the images of the prefix shapes; its residue word is
/// the negation mod e of the input's, and the map is a bijection between
/// the two restricted bases.
pub fn mullineux_tableau(t: &StandardTableau, e: u32) -> Result<StandardTableau> {
    let shape = t.shape();
    if shape.level() != 1 {
        return Err(Error::Domain(
            "the Mullineux path map is defined for single partitions".into(),
        ));
    }
    // reject a bad full shape as a domain error; a bad interior prefix of a
    // valid path would be a bug
    mullineux(shape.component(1), e)?;
    let mut mapped = Vec::with_capacity(t.size() + 1);
    for step in t.shape_chain() {
        mapped.push(mullineux(step.component(1), e).map_err(|err| {
            Error::Internal(format!("prefix {step} left the unitary range: {err}"))
        })?);
    }
    let mut nodes = Vec::with_capacity(t.size());
    for k in 1..mapped.len() {
        nodes.push(single_box_difference(&mapped[k - 1], &mapped[k])?);
    }
    StandardTableau::new(1, nodes)
        .map_err(|err| Error::Internal(format!("image path of {t} is not standard: {err}")))
}

fn single_box_difference(a: &Partition, b: &Partition) -> Result<Node> {
    let mut found = None;
    for r in 1..=a.rows().max(b.rows()) {
        match (b.row(r).checked_sub(a.row(r)), &found) {
            (Some(0), _) => {}
            (Some(1), None) => found = Some(Node::new(r, b.row(r), 1)),
            _ => {
                return Err(Error::Internal(format!("{a} and {b} do not differ by one box")));
            }
        }
    }
    found.ok_or_else(|| Error::Internal(format!("{a} and {b} do not differ by one box")))
}

/// The level-one raising operator on alcove weights: adds the leftmost
/// addable box of the given residue, if any. The caller decides whether the
/// result stays in the alcove.
pub fn crystal_f(lambda: &Partition, i: u32, ctx: &ChargeContext) -> Result<Option<Partition>> {
    if ctx.level() != 1 {
        return Err(Error::Domain("the leftmost-box operator is a level-one construction".into()));
    }
    if i >= ctx.e() {
        return Err(Error::Domain(format!("residue {i} out of range for e = {}", ctx.e())));
    }
    let mp = Multipartition::from_partition(lambda.clone());
    if !in_fundamental_alcove(&mp, ctx)? {
        return Err(Error::Domain(format!("{lambda} is not in the fundamental alcove")));
    }
    let addable = boundary_nodes(&mp, Boundary::Addable, Some(i), ctx)?;
    match addable.into_iter().min_by_key(|n| n.col) {
        Some(node) => Ok(Some(lambda.with_box(node.row)?)),
        None => Ok(None),
    }
}

/// Independent route to the Mullineux image through crystal operators:
/// strip a good box of some residue i, map the rest recursively, and add a
/// cogood box of residue -i. Defined on every e-restricted partition, with
/// charge 0 residues; agrees with the abacus construction on the unitary
/// restricted range.
pub fn classical_mullineux_oracle(lambda: &Partition, e: u32) -> Result<Partition> {
    if e < 2 {
        return Err(Error::Domain("quantum characteristic e must be at least 2".into()));
    }
    if !lambda.is_e_restricted(e) {
        return Err(Error::Domain(format!("{lambda} is not {e}-restricted")));
    }
    mull_rec(lambda, e)
}

fn mull_rec(lambda: &Partition, e: u32) -> Result<Partition> {
    if lambda.is_empty() {
        return Ok(Partition::empty());
    }
    for i in 0..e {
        let Some(node) = good_removable(lambda, i, e) else { continue };
        let image = mull_rec(&lambda.without_box(node.row)?, e)?;
        let neg = (e - i) % e;
        let target = cogood_addable(&image, neg, e).ok_or_else(|| {
            Error::Internal(format!("no cogood {neg}-box on {image} while lifting {lambda}"))
        })?;
        return image.with_box(target.row);
    }
    Err(Error::Internal(format!("{lambda} has no good box for any residue")))
}

fn cell_residue(row: u32, col: u32, e: u32) -> u32 {
    (col as i64 - row as i64).rem_euclid(e as i64) as u32
}

/// Signature scan for one residue: addable and removable boxes in box order
/// (most dominant first), with each removable canceled by the next addable
/// directly after it. What survives is a run of addables followed by a run
/// of removables.
fn reduced_signature(lambda: &Partition, i: u32, e: u32) -> Vec<(Node, bool)> {
    let mut word = Vec::new();
    for r in 1..=lambda.rows() + 1 {
        let above = if r == 1 { u32::MAX } else { lambda.row(r - 1) };
        let c = lambda.row(r) + 1;
        if c <= above && cell_residue(r, c, e) == i {
            word.push((Node::new(r, c, 1), false));
        }
    }
    for r in 1..=lambda.rows() {
        let c = lambda.row(r);
        if c > lambda.row(r + 1) && cell_residue(r, c, e) == i {
            word.push((Node::new(r, c, 1), true));
        }
    }
    word.sort_by_key(|(n, _)| n.dominance_key(1));
    let mut stack: Vec<(Node, bool)> = Vec::new();
    for item in word {
        if !item.1 && stack.last().is_some_and(|top| top.1) {
            stack.pop();
        } else {
            stack.push(item);
        }
    }
    stack
}

/// The most dominant surviving removable i-box, if any.
fn good_removable(lambda: &Partition, i: u32, e: u32) -> Option<Node> {
    reduced_signature(lambda, i, e)
        .iter()
        .find(|(_, removable)| *removable)
        .map(|&(n, _)| n)
}

/// The least dominant surviving addable i-box, if any.
fn cogood_addable(lambda: &Partition, i: u32, e: u32) -> Option<Node> {
    reduced_signature(lambda, i, e)
        .iter()
        .rev()
        .find(|(_, removable)| !*removable)
        .map(|&(n, _)| n)
}

/// One edge of the unitary branching graph: a size-k vertex, the good box
/// removed, its charge-0 residue, and the size-(k-1) target.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BranchEdge {
    pub from: usize,
    pub node: Node,
    pub residue: u32,
    pub to: usize,
}

/// The unitary branching graph up to a fixed size: at each size the unitary
/// restricted partitions, with one edge per good box.
pub struct UnitaryBranchingGraph {
    e: u32,
    levels: Vec<Vec<Partition>>,
    edges: Vec<Vec<BranchEdge>>,
}

impl UnitaryBranchingGraph {
    pub fn build(e: u32, max_size: u32) -> Result<Self> {
        if e < 2 {
            return Err(Error::Domain("quantum characteristic e must be at least 2".into()));
        }
        let mut levels: Vec<Vec<Partition>> = vec![vec![Partition::empty()]];
        let mut edges: Vec<Vec<BranchEdge>> = vec![Vec::new()];
        for k in 1..=max_size {
            let vertices: Vec<Partition> = partitions_of(k)
                .into_iter()
                .filter(|q| is_unitary_restricted(q, e))
                .collect();
            let below: HashMap<&Partition, usize> =
                levels[k as usize - 1].iter().enumerate().map(|(i, q)| (q, i)).collect();
            let mut level_edges = Vec::new();
            for (from, lam) in vertices.iter().enumerate() {
                let ctx = ChargeContext::level_one(e, lam.cols())?;
                let mp = Multipartition::from_partition(lam.clone());
                for node in good_nodes(&mp, &ctx)? {
                    let smaller = lam.without_box(node.row)?;
                    let Some(&to) = below.get(&smaller) else {
                        return Err(Error::Internal(format!(
                            "branching step {lam} -> {smaller} leaves the unitary restricted range"
                        )));
                    };
                    level_edges.push(BranchEdge {
                        from,
                        node,
                        residue: residue(node, &ctx)?,
                        to,
                    });
                }
            }
            levels.push(vertices);
            edges.push(level_edges);
        }
        Ok(Self { e, levels, edges })
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn max_size(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn vertices(&self, k: u32) -> &[Partition] {
        &self.levels[k as usize]
    }

    /// Edges from size-k vertices down to size k-1.
    pub fn edges_at(&self, k: u32) -> &[BranchEdge] {
        &self.edges[k as usize]
    }

    /// Path counts down to the empty partition, indexed like the vertices.
    /// These are the dimensions of the corresponding simple modules.
    pub fn dimensions(&self) -> Vec<Vec<u128>> {
        let mut dims: Vec<Vec<u128>> = vec![vec![1]];
        for k in 1..self.levels.len() {
            let mut row = vec![0u128; self.levels[k].len()];
            for edge in &self.edges[k] {
                row[edge.from] += dims[k - 1][edge.to];
            }
            dims.push(row);
        }
        dims
    }
}

/// All partitions of n, in descending lexicographic order.
fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::new(acc.clone()).expect("weakly decreasing by construction"));
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            acc.push(part);
            rec(rest - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}
