//! Graded bookkeeping for the column-move complexes read as free resolutions:
//! exact c-values, integral shift tables, Betti numbers, projective dimension,
//! depth and regularity, closed forms for the equal-coordinate arrangements,
//! power rescaling, the transposed dual complex, and support strata.

use std::collections::BTreeMap;

use num_rational::Rational64;

use crate::abacus::{e_core_and_weight, is_unitary, UnitaryAbacus, ZAbacus};
use crate::bgg::build_complex;
use crate::partition_core::dim_specht;
use crate::{ChargeContext, Error, Multipartition, Partition, Result};

/// One free summand: a label μ with its multiplicity dim S(μ) and the
/// grading shift c_head − c_μ (≤ 0; generators sit in degree −shift).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedTerm {
    pub mu: Partition,
    pub dim: u128,
    pub shift: i64,
}

/// A signed component of the differential, one homological degree down.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedEdge {
    pub from: Partition,
    pub to: Partition,
    pub sign: i8,
}

/// A resolution with exact grading data: `levels[i]` holds the degree-i
/// summands, `power` records how far the shifts have been rescaled.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedResolution {
    pub label: Partition,
    pub e: u32,
    pub power: u32,
    pub levels: Vec<Vec<GradedTerm>>,
    pub edges: Vec<GradedEdge>,
}

impl GradedResolution {
    pub fn pdim(&self) -> u64 {
        self.levels.len() as u64 - 1
    }

    pub fn shifts_by_level(&self) -> Vec<Vec<i64>> {
        self.levels
            .iter()
            .map(|terms| terms.iter().map(|t| t.shift).collect())
            .collect()
    }

    /// max over degrees i of (largest generator degree at i) − i.
    pub fn regularity(&self) -> i64 {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, terms)| {
                terms.iter().map(|t| -t.shift).max().unwrap_or(0) - i as i64
            })
            .max()
            .unwrap_or(0)
    }
}

/// Graded Betti numbers β_{i,j}: multiplicity of a degree-j generator in
/// homological degree i.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BettiTable {
    lambda: Partition,
    e: u32,
    entries: BTreeMap<(u64, u64), u128>,
}

impl BettiTable {
    pub fn from_resolution(res: &GradedResolution) -> Self {
        let mut entries: BTreeMap<(u64, u64), u128> = BTreeMap::new();
        for (i, terms) in res.levels.iter().enumerate() {
            for t in terms {
                *entries.entry((i as u64, t.shift.unsigned_abs())).or_insert(0) += t.dim;
            }
        }
        Self { lambda: res.label.clone(), e: res.e, entries }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn get(&self, i: u64, j: u64) -> u128 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Sorted (i, j, β_{i,j}) triples over the nonzero entries.
    pub fn triples(&self) -> Vec<(u64, u64, u128)> {
        self.entries.iter().map(|(&(i, j), &b)| (i, j, b)).collect()
    }

    /// Σ_j β_{i,j}, the total rank in homological degree i.
    pub fn row_total(&self, i: u64) -> u128 {
        self.entries.iter().filter(|(&(bi, _), _)| bi == i).map(|(_, &b)| b).sum()
    }

    /// The usual staircase layout: column i, row j − i, dots for zeros.
    pub fn staircase_text(&self) -> String {
        let pdim = self.entries.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let max_row = self.entries.keys().map(|&(i, j)| j - i).max().unwrap_or(0);
        let mut cells: Vec<Vec<String>> = Vec::new();
        let header =
            std::iter::once(String::new()).chain((0..=pdim).map(|i| i.to_string())).collect();
        cells.push(header);
        let totals = std::iter::once("total:".into())
            .chain((0..=pdim).map(|i| self.row_total(i).to_string()))
            .collect();
        cells.push(totals);
        for r in 0..=max_row {
            let mut row = vec![format!("{r}:")];
            for i in 0..=pdim {
                let b = self.get(i, i + r);
                row.push(if b == 0 { ".".into() } else { b.to_string() });
            }
            cells.push(row);
        }
        let mut widths = vec![0usize; (pdim + 2) as usize];
        for row in &cells {
            for (c, s) in row.iter().enumerate() {
                widths[c] = widths[c].max(s.len());
            }
        }
        cells
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(c, s)| format!("{s:>width$}", width = widths[c]))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Headline invariants of a resolution together with its shift lists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResolutionSummary {
    pub lambda: Partition,
    pub e: u32,
    pub n: u64,
    pub pdim: u64,
    pub depth: u64,
    pub regularity: i64,
    pub level_shifts: Vec<Vec<i64>>,
}

/// Closed-form invariants of an equal-coordinate arrangement's ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArrangementInvariants {
    pub e: u32,
    pub n: u64,
    pub clusters: u64,
    pub power: u32,
    pub label: Partition,
    pub pdim: u64,
    pub depth: u64,
    pub regularity: i64,
    pub cohen_macaulay: bool,
}

/// n/2 − (1/e)·Σ over boxes of (column − row), exactly.
pub fn c_function(lambda: &Partition, e: u32) -> Result<Rational64> {
    if e == 0 {
        return Err(Error::Domain("need a positive rank".into()));
    }
    let mut contents: i64 = 0;
    for (r, &len) in lambda.parts().iter().enumerate() {
        let (r, len) = (r as i64 + 1, i64::from(len));
        contents += len * (len + 1) / 2 - r * len;
    }
    Ok(Rational64::new(lambda.size() as i64, 2) - Rational64::new(contents, i64::from(e)))
}

/// c_μ − c_head as an integer; fractional differences within one table are a
/// broken invariant.
fn integral_gap(head: Rational64, mu: &Partition, e: u32) -> Result<i64> {
    let gap = c_function(mu, e)? - head;
    if !gap.is_integer() {
        return Err(Error::Internal(format!(
            "c-gap {gap} of {mu} is not an integer"
        )));
    }
    Ok(gap.to_integer())
}

/// The column-move complex of a unitary λ with every term carrying its exact
/// grading shift; c is checked to increase strictly along every edge.
pub fn graded_resolution(lambda: &Partition, e: u32) -> Result<GradedResolution> {
    if !is_unitary(lambda, e) {
        return Err(Error::Domain(format!("{lambda} is not unitary at rank {e}")));
    }
    let ctx = ChargeContext::level_one(e, lambda.cols().max(1))?;
    let cx = build_complex(&Multipartition::from_partition(lambda.clone()), &ctx)?;
    let head = c_function(lambda, e)?;

    let mut levels = Vec::with_capacity(cx.levels.len());
    for terms in &cx.levels {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let mu = t.mu.component(1).clone();
            let shift = -integral_gap(head, &mu, e)?;
            out.push(GradedTerm { mu, dim: t.dim, shift });
        }
        levels.push(out);
    }
    let mut edges = Vec::with_capacity(cx.edges.len());
    for edge in &cx.edges {
        let from = edge.from.component(1).clone();
        let to = edge.to.component(1).clone();
        if c_function(&from, e)? <= c_function(&to, e)? {
            return Err(Error::Internal(format!(
                "c fails to increase along the edge {to} -> {from}"
            )));
        }
        edges.push(GradedEdge { from, to, sign: edge.sign });
    }
    Ok(GradedResolution { label: lambda.clone(), e, power: 1, levels, edges })
}

/// Betti table of the resolution of a unitary λ.
pub fn betti_table(lambda: &Partition, e: u32) -> Result<BettiTable> {
    Ok(BettiTable::from_resolution(&graded_resolution(lambda, e)?))
}

/// pdim, depth and regularity of a unitary λ's module, with the shift lists.
///
/// pdim is (h−1)k for h the column count and k the e-weight; depth is the
/// complement; regularity comes from the extremal member μ0 obtained by
/// sliding every bead fully left and the top bead k runner slots right.
pub fn resolution_summary(lambda: &Partition, e: u32) -> Result<ResolutionSummary> {
    let res = graded_resolution(lambda, e)?;
    let n = lambda.size();
    let h = u64::from(lambda.cols());
    let (_, k) = e_core_and_weight(&ZAbacus::from_partition(lambda, lambda.cols())?, e)?;
    let pdim = if k == 0 { 0 } else { (h - 1) * k };
    if pdim != res.pdim() {
        return Err(Error::Internal(format!(
            "formula pdim {pdim} disagrees with the built complex ({})",
            res.pdim()
        )));
    }

    let regularity = if k == 0 {
        0
    } else {
        let ua = UnitaryAbacus::from_partition(lambda, e)?;
        let mut positions: Vec<u64> = ua.occupied().iter().map(|&g| g as u64).collect();
        *positions.last_mut().expect("k > 0 forces beads") += u64::from(e) * k;
        let mu0 = ZAbacus::from_positions(positions)?.to_partition();
        integral_gap(c_function(lambda, e)?, &mu0, e)? - pdim as i64
    };

    Ok(ResolutionSummary {
        lambda: lambda.clone(),
        e,
        n,
        pdim,
        depth: n - pdim,
        regularity,
        level_shifts: res.shifts_by_level(),
    })
}

/// The one-row label (n) of the smallest quotient, or the fattest unitary
/// label ((e−1)^p, q) of the smallest ideal, of the ambient polynomial ring.
fn socle_label(e: u32, n: u64) -> Result<Partition> {
    let p = (n / u64::from(e - 1)) as usize;
    let q = (n % u64::from(e - 1)) as u32;
    let mut parts = vec![e - 1; p];
    if q > 0 {
        parts.push(q);
    }
    Partition::new(parts)
}

/// Closed-form pdim, depth, regularity and the Cohen–Macaulay flag for the
/// ring of the arrangement with the given cluster count (one cluster when
/// `clusters` is None; k clusters require n = ke) and coordinate power.
pub fn arrangement_invariants(
    e: u32,
    n: u64,
    clusters: Option<u64>,
    power: u32,
) -> Result<ArrangementInvariants> {
    if e < 2 || u64::from(e) > n {
        return Err(Error::Domain(format!("need 2 <= e <= n, got e={e}, n={n}")));
    }
    if power == 0 {
        return Err(Error::Domain("power must be positive".into()));
    }
    let (lp, ni, ei) = (i64::from(power), n as i64, i64::from(e));
    match clusters {
        None => {
            let f = n / u64::from(e);
            let pdim = (u64::from(e) - 2) * f + 1;
            let fi = f as i64;
            let regularity = if n.is_multiple_of(u64::from(e)) {
                fi * (lp * (ni - 1) - ei + 2) - 1
            } else {
                fi * (lp * ni - ei + 2) - 1
            };
            Ok(ArrangementInvariants {
                e,
                n,
                clusters: 1,
                power,
                label: socle_label(e, n)?,
                pdim,
                depth: n - pdim,
                regularity,
                cohen_macaulay: e == 2 || f == 1,
            })
        }
        Some(k) => {
            if k == 0 || n != k * u64::from(e) {
                return Err(Error::Domain(format!(
                    "cluster count {k} is incompatible with e={e}, n={n}"
                )));
            }
            let ki = k as i64;
            let twice = ki * (lp * (ni + ei - ki - 1) - 2 * (ei - 1));
            if twice % 2 != 0 {
                return Err(Error::Internal("odd doubled regularity".into()));
            }
            Ok(ArrangementInvariants {
                e,
                n,
                clusters: k,
                power,
                label: Partition::new(vec![n as u32])?,
                pdim: (u64::from(e) - 1) * k,
                depth: k,
                regularity: twice / 2,
                cohen_macaulay: true,
            })
        }
    }
}

/// The resolution of the one-row label (ek): the complex of (e^k) with every
/// term transposed, every arrow reversed, and shifts re-read from c.
pub fn ringel_dual_resolution(e: u32, k: u64) -> Result<GradedResolution> {
    if e < 2 {
        return Err(Error::Domain("need e >= 2".into()));
    }
    if k == 0 {
        let empty = Partition::empty();
        let term = GradedTerm { mu: empty.clone(), dim: 1, shift: 0 };
        return Ok(GradedResolution {
            label: empty,
            e,
            power: 1,
            levels: vec![vec![term]],
            edges: Vec::new(),
        });
    }
    let lambda = Partition::new(vec![e; k as usize])?;
    let ctx = ChargeContext::level_one(e, e)?;
    let cx = build_complex(&Multipartition::from_partition(lambda), &ctx)?;
    let pdim = cx.levels.len() as u64 - 1;
    if pdim != (u64::from(e) - 1) * k {
        return Err(Error::Internal(format!(
            "dual complex length {pdim} differs from (e-1)k"
        )));
    }

    let triv = Partition::new(vec![(u64::from(e) * k) as u32])?;
    let head = c_function(&triv, e)?;
    let mut levels = Vec::with_capacity(cx.levels.len());
    for terms in cx.levels.iter().rev() {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let mu = t.mu.component(1).conjugate();
            let shift = -integral_gap(head, &mu, e)?;
            let dim = dim_specht(&Multipartition::from_partition(mu.clone()));
            out.push(GradedTerm { mu, dim, shift });
        }
        out.sort_by(|a, b| a.mu.cmp(&b.mu));
        levels.push(out);
    }
    let edges = cx
        .edges
        .iter()
        .map(|edge| GradedEdge {
            from: edge.to.component(1).conjugate(),
            to: edge.from.component(1).conjugate(),
            sign: edge.sign,
        })
        .collect();
    Ok(GradedResolution { label: triv, e, power: 1, levels, edges })
}

/// The same resolution with every grading shift multiplied by `power`.
pub fn power_scale(res: &GradedResolution, power: u32) -> Result<GradedResolution> {
    if power == 0 {
        return Err(Error::Domain("power must be positive".into()));
    }
    let mut scaled = res.clone();
    scaled.power = res
        .power
        .checked_mul(power)
        .ok_or_else(|| Error::Internal("power overflow".into()))?;
    for terms in &mut scaled.levels {
        for t in terms {
            t.shift *= i64::from(power);
        }
    }
    Ok(scaled)
}

/// Index of the coincidence stratum carrying the module of λ: the size |μ|
/// in the unique splitting λ = eμ + ν with ν e-restricted, read off rowwise
/// by dividing the successive differences by e.
pub fn support_stratum(lambda: &Partition, e: u32) -> Result<u64> {
    if e == 0 {
        return Err(Error::Domain("need a positive rank".into()));
    }
    let parts = lambda.parts();
    let mut total = 0u64;
    let mut below = 0u64; // μ-part of the next row down
    for (r, &len) in parts.iter().enumerate().rev() {
        let next = parts.get(r + 1).copied().unwrap_or(0);
        below += u64::from((len - next) / e);
        total += below;
    }
    Ok(total)
}
