//! Affine alcove geometry on the column embedding: lengths, fundamental
//! alcove membership, good nodes, one-column reflection moves, path degrees.

use crate::abacus::{hd, UnitaryAbacus};
use crate::partition_core::{
    boundary_nodes, dominates, Boundary, ChargeContext, Multipartition, Node, Partition,
};
use crate::{Error, Result};

/// Every cyclic window of h consecutive residues contains at most one charge
/// entry, counted with multiplicity.
pub fn is_h_admissible(kappa: &[u32], h: u32, e: u32) -> bool {
    (0..e).all(|start| {
        let hits: u32 = kappa
            .iter()
            .map(|&k| {
                let offset = (k + e - start % e) % e;
                u32::from((offset as u64) < h as u64)
            })
            .sum();
        hits <= 1
    })
}

/// Coordinates of λ: the i-th column height of component m sits at index
/// h(m−1)+i (1-based), so the vector has hℓ entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EmbeddedPoint {
    pub coords: Vec<i64>,
}

impl EmbeddedPoint {
    pub fn new(lambda: &Multipartition, ctx: &ChargeContext) -> Result<Self> {
        let h = ctx.h();
        if lambda.level() != ctx.level() {
            return Err(Error::Domain("level mismatch".into()));
        }
        let mut coords = Vec::with_capacity(ctx.rank() as usize);
        for comp in lambda.components() {
            for ht in comp.col_heights(h)? {
                coords.push(ht as i64);
            }
        }
        Ok(Self { coords })
    }

    /// Inverse of the embedding; None when the coordinates are not weakly
    /// decreasing within some component.
    pub fn to_multipartition(&self, ctx: &ChargeContext) -> Option<Multipartition> {
        let h = ctx.h() as usize;
        let mut comps = Vec::with_capacity(ctx.level() as usize);
        for block in self.coords.chunks(h) {
            if block.iter().any(|&c| c < 0) || block.windows(2).any(|w| w[0] < w[1]) {
                return None;
            }
            let heights: Vec<u32> = block.iter().map(|&c| c as u32).filter(|&c| c > 0).collect();
            comps.push(Partition::new(heights).ok()?.conjugate());
        }
        Multipartition::new(comps).ok()
    }
}

/// The shift vector: block m is (e−κ_m, e−κ_m−1, …, e−κ_m−h+1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RhoShift {
    pub coords: Vec<i64>,
}

impl RhoShift {
    pub fn new(ctx: &ChargeContext) -> Self {
        let (e, h) = (ctx.e() as i64, ctx.h() as i64);
        let mut coords = Vec::with_capacity(ctx.rank() as usize);
        for &k in ctx.kappa() {
            for i in 0..h {
                coords.push(e - k as i64 - i);
            }
        }
        Self { coords }
    }
}

fn shifted_point(lambda: &Multipartition, ctx: &ChargeContext) -> Result<Vec<i64>> {
    let emb = EmbeddedPoint::new(lambda, ctx)?;
    let rho = RhoShift::new(ctx);
    Ok(emb.coords.iter().zip(&rho.coords).map(|(a, b)| a + b).collect())
}

fn on_wall(v: i64, e: i64) -> bool {
    v.rem_euclid(e) == 0
}

/// Multiples of e in the open interval between a and b.
fn walls_strictly_between(a: i64, b: i64, e: i64) -> u64 {
    let (lo, hi) = (a.min(b), a.max(b));
    if lo == hi {
        return 0;
    }
    ((hi - 1).div_euclid(e) - lo.div_euclid(e)).max(0) as u64
}

fn check_geometry(ctx: &ChargeContext) -> Result<()> {
    if !is_h_admissible(ctx.kappa(), ctx.h(), ctx.e()) {
        return Err(Error::Domain("charge is not admissible for this column bound".into()));
    }
    Ok(())
}

/// Wall count between the shifted point and the shifted origin, inclusive at
/// the point itself. For level 1 with e = h this is the abacus degree.
pub fn alcove_length(lambda: &Multipartition, ctx: &ChargeContext) -> Result<u64> {
    if ctx.level() == 1 && ctx.e() == ctx.h() {
        let u = UnitaryAbacus::from_partition_ambient(lambda.component(1), ctx.e(), ctx.h())?;
        return Ok(hd(&u));
    }
    check_geometry(ctx)?;
    let v = shifted_point(lambda, ctx)?;
    let rho = RhoShift::new(ctx).coords;
    let e = ctx.e() as i64;
    let mut total = 0;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            let (v0, vl) = (rho[a] - rho[b], v[a] - v[b]);
            total += walls_strictly_between(v0, vl, e) + u64::from(on_wall(vl, e));
        }
    }
    Ok(total)
}

pub fn in_fundamental_alcove(lambda: &Multipartition, ctx: &ChargeContext) -> Result<bool> {
    if ctx.level() == 1 && ctx.e() == ctx.h() {
        // a runner collision already rules out the degree-zero window shape
        return Ok(UnitaryAbacus::from_partition_ambient(lambda.component(1), ctx.e(), ctx.h())
            .map(|u| hd(&u) == 0)
            .unwrap_or(false));
    }
    Ok(alcove_length(lambda, ctx)? == 0)
}

/// Removable nodes whose removal stays inside the fundamental alcove, in box
/// order.
pub fn good_nodes(lambda: &Multipartition, ctx: &ChargeContext) -> Result<Vec<Node>> {
    if !in_fundamental_alcove(lambda, ctx)? {
        return Err(Error::Domain("good nodes are only defined inside the fundamental alcove".into()));
    }
    let mut out = Vec::new();
    for node in boundary_nodes(lambda, Boundary::Removable, None, ctx)? {
        let smaller = lambda.without_node(node)?;
        if in_fundamental_alcove(&smaller, ctx)? {
            out.push(node);
        }
    }
    out.sort_by_key(|n| n.dominance_key(ctx.level()));
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairKind {
    Maximal,
    Minimal,
    Both,
}

/// Reflection datum: coordinates i < j (1-based) and the integer m with the
/// exchange (v_i, v_j) → (v_j + me, v_i − me) on shifted points.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ReflectionMove {
    pub i: usize,
    pub j: usize,
    pub m: i64,
    pub kind: PairKind,
}

/// All β with β strictly more dominant than α, length exactly one less, and
/// β a single two-coordinate reflection image of α. Each move is classified
/// as maximal (the reflecting wall is the only one between the pair),
/// minimal (the count equals twice the root-length of α minus one), or both;
/// exchanges fitting neither pattern are not returned.
pub fn one_column_predecessors(
    alpha: &Multipartition,
    ctx: &ChargeContext,
) -> Result<Vec<(Multipartition, ReflectionMove)>> {
    if ctx.level() == 1 && ctx.e() == ctx.h() {
        return Err(Error::Domain(
            "reflection moves are replaced by abacus exchanges when e equals the column bound".into(),
        ));
    }
    check_geometry(ctx)?;
    let v = shifted_point(alpha, ctx)?;
    let rho = RhoShift::new(ctx).coords;
    let e = ctx.e() as i64;
    let len_alpha = alcove_length(alpha, ctx)?;
    if len_alpha == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            let (ca, cb) = (v[a] - rho[a], v[b] - rho[b]);
            let sum = ca + cb;
            for new_ca in 0..=sum {
                if new_ca == ca {
                    continue;
                }
                let shifted_a = new_ca + rho[a];
                if (shifted_a - v[b]).rem_euclid(e) != 0 {
                    continue;
                }
                let m = (shifted_a - v[b]).div_euclid(e);
                let mut coords: Vec<i64> = v.iter().zip(&rho).map(|(x, r)| x - r).collect();
                coords[a] = new_ca;
                coords[b] = sum - new_ca;
                let Some(beta) = (EmbeddedPoint { coords }).to_multipartition(ctx) else {
                    continue;
                };
                if alcove_length(&beta, ctx)? + 1 != len_alpha {
                    continue;
                }
                if !dominates(&beta, alpha, ctx)? || beta == *alpha {
                    continue;
                }
                let w = shifted_point(&beta, ctx)?;
                let (va, vb) = (v[a] - v[b], w[a] - w[b]);
                let between = walls_strictly_between(va, vb, e)
                    + u64::from(on_wall(va, e))
                    + u64::from(on_wall(vb, e));
                let v0 = rho[a] - rho[b];
                let to_origin =
                    walls_strictly_between(v0, va, e) + u64::from(on_wall(va, e));
                let maximal = between == 1;
                let minimal = to_origin > 0 && between == 2 * to_origin - 1;
                let kind = match (maximal, minimal) {
                    (true, true) => PairKind::Both,
                    (true, false) => PairKind::Maximal,
                    (false, true) => PairKind::Minimal,
                    (false, false) => continue,
                };
                out.push((beta, ReflectionMove { i: a + 1, j: b + 1, m, kind }));
            }
        }
    }
    out.sort_by_key(|(_, mv)| (mv.i, mv.j, mv.m));
    Ok(out)
}

/// Sum of step degrees along a box-by-box path from the empty multipartition:
/// +1 for stepping off a wall toward the origin side, −1 for stepping onto a
/// wall from the far side.
pub fn path_degree(path: &[Multipartition], ctx: &ChargeContext) -> Result<i64> {
    check_geometry(ctx)?;
    let Some(first) = path.first() else {
        return Err(Error::Domain("empty path".into()));
    };
    if first.size() != 0 {
        return Err(Error::Domain("paths must start at the empty multipartition".into()));
    }
    let rho = RhoShift::new(ctx).coords;
    let e = ctx.e() as i64;
    let mut deg = 0i64;
    let mut prev = shifted_point(first, ctx)?;
    for (step, point) in path.iter().enumerate().skip(1) {
        if point.size() != step as u64 {
            return Err(Error::Domain("path must add one box per step".into()));
        }
        let cur = shifted_point(point, ctx)?;
        for a in 0..cur.len() {
            for b in a + 1..cur.len() {
                let (vx, vy) = (prev[a] - prev[b], cur[a] - cur[b]);
                if vx == vy {
                    continue;
                }
                let v0 = rho[a] - rho[b];
                if on_wall(vx, e) {
                    // leaving the wall through x: toward origin side?
                    if (v0 - vx).signum() == (vy - vx).signum() {
                        deg += 1;
                    }
                } else if on_wall(vy, e) && (vx - vy).signum() != (v0 - vy).signum() {
                    deg -= 1;
                }
            }
        }
        prev = cur;
    }
    Ok(deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abacus::{covering_transpositions, enumerate_po, enumerate_po_abaci, is_unitary};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn mp(s: &str) -> Multipartition {
        s.parse().unwrap()
    }

    fn eg1_ctx() -> ChargeContext {
        ChargeContext::new(4, &[0, 1, 2], 1).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_h_admissible(&[0], 3, 3));
        assert!(is_h_admissible(&[0, 1, 2], 1, 4));
        assert!(!is_h_admissible(&[0, 0], 1, 4));
        assert!(!is_h_admissible(&[0, 2], 3, 7));
        assert!(is_h_admissible(&[0, 3], 3, 7));
    }

    #[test]
    fn admissible_rho_avoids_walls() {
        for (kappa, h, e) in [(vec![0u32, 1, 2], 1u32, 4u32), (vec![0, 3], 3, 7), (vec![0], 3, 4)] {
            let ctx = ChargeContext::new(e, &kappa.iter().map(|&k| k as i64).collect::<Vec<_>>(), h).unwrap();
            assert!(is_h_admissible(&kappa, h, e));
            let rho = RhoShift::new(&ctx).coords;
            for a in 0..rho.len() {
                for b in a + 1..rho.len() {
                    assert!((rho[a] - rho[b]).rem_euclid(e as i64) != 0);
                }
            }
        }
    }

    #[test]
    fn length_examples() {
        let ctx = ChargeContext::new(3, &[0], 2).unwrap();
        assert_eq!(alcove_length(&mp("1^3"), &ctx).unwrap(), 1);
        assert_eq!(alcove_length(&mp("2,1"), &ctx).unwrap(), 0);
        assert_eq!(alcove_length(&mp("1,1"), &ctx).unwrap(), 1); // on a wall
        assert!(!in_fundamental_alcove(&mp("1,1"), &ctx).unwrap());

        let ctx5 = ChargeContext::new(5, &[0], 3).unwrap();
        assert!(in_fundamental_alcove(&mp("3^5"), &ctx5).unwrap());
    }

    #[test]
    fn lengths_match_abacus_degrees_across_orbits() {
        for (lam, e) in [("3^4,1", 4u32), ("3^5", 5), ("2^3,1", 4), ("4^2,3", 6)] {
            let lam = p(lam);
            assert!(is_unitary(&lam, e), "{lam} at e={e}");
            let ctx = ChargeContext::level_one(e, lam.cols()).unwrap();
            let abaci = enumerate_po_abaci(&lam, e).unwrap();
            for u in abaci {
                let mu = Multipartition::from_partition(u.to_partition());
                assert_eq!(
                    alcove_length(&mu, &ctx).unwrap(),
                    hd(&u),
                    "mu = {mu}, e = {e}"
                );
            }
        }
    }

    #[test]
    fn orbit_lengths_reproduce_the_three_colour_degrees() {
        let ctx = ChargeContext::level_one(5, 3).unwrap();
        let mut degrees: Vec<u64> = enumerate_po(&p("3^5"), 5)
            .unwrap()
            .iter()
            .map(|m| alcove_length(&Multipartition::from_partition(m.clone()), &ctx).unwrap())
            .collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![0, 1, 2, 2, 3, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn membership_matches_unitary_window() {
        for e in 2u32..=6 {
            for n in 0..=20u64 {
                for lam in partitions_of(n as u32) {
                    let h = lam.cols().max(1);
                    if h > e {
                        continue;
                    }
                    let ctx = ChargeContext::level_one(e, h).unwrap();
                    let mu = Multipartition::from_partition(lam.clone());
                    assert_eq!(
                        in_fundamental_alcove(&mu, &ctx).unwrap(),
                        is_unitary(&lam, e),
                        "λ = {lam}, e = {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn level_three_block_has_unique_alcove_member() {
        let ctx = eg1_ctx();
        let target = mp("1^3|1^3|1^2");
        assert!(in_fundamental_alcove(&target, &ctx).unwrap());
        let content = crate::partition_core::residue_content(&target, &ctx).unwrap();
        let mut found = 0;
        for a in 0..=8u32 {
            for b in 0..=(8 - a) {
                let c = 8 - a - b;
                let cand = Multipartition::new(vec![column(a), column(b), column(c)]).unwrap();
                if crate::partition_core::residue_content(&cand, &ctx).unwrap() == content
                    && in_fundamental_alcove(&cand, &ctx).unwrap()
                {
                    found += 1;
                    assert_eq!(cand, target);
                }
            }
        }
        assert_eq!(found, 1);
    }

    fn column(height: u32) -> Partition {
        if height == 0 {
            Partition::empty()
        } else {
            Partition::new(vec![1; height as usize]).unwrap()
        }
    }

    fn partitions_of(n: u32) -> Vec<Partition> {
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

    #[test]
    fn good_node_examples() {
        let ctx = ChargeContext::new(3, &[0], 2).unwrap();
        assert_eq!(good_nodes(&mp("2,1"), &ctx).unwrap(), vec![Node::new(2, 1, 1)]);
        assert!(good_nodes(&Multipartition::empty(1), &ctx).unwrap().is_empty());
        assert!(good_nodes(&mp("1,1"), &ctx).is_err());
    }

    #[test]
    fn single_block_member_peels_along_a_unique_path() {
        let ctx = eg1_ctx();
        let mut cur = mp("1^3|1^3|1^2");
        for _ in 0..8 {
            let good = good_nodes(&cur, &ctx).unwrap();
            assert_eq!(good.len(), 1, "at {cur}");
            cur = cur.without_node(good[0]).unwrap();
        }
        assert_eq!(cur.size(), 0);
    }

    #[test]
    fn predecessors_of_alcove_members_are_empty() {
        let ctx = ChargeContext::new(3, &[0], 2).unwrap();
        assert!(one_column_predecessors(&mp("2,1"), &ctx).unwrap().is_empty());
    }

    #[test]
    fn level_three_reflection_examples() {
        let ctx = eg1_ctx();
        let alpha = mp("1^8|0|0");
        assert_eq!(alcove_length(&alpha, &ctx).unwrap(), 4);
        let preds = one_column_predecessors(&alpha, &ctx).unwrap();
        let maximal = preds
            .iter()
            .find(|(b, _)| *b == mp("1^6|0|1^2"))
            .expect("two-box slide to the third component");
        assert_eq!(maximal.1.kind, PairKind::Maximal);
        assert_eq!((maximal.1.i, maximal.1.j, maximal.1.m), (1, 3, 2));
        let minimal = preds
            .iter()
            .find(|(b, _)| *b == mp("1^2|0|1^6"))
            .expect("six-box slide to the third component");
        assert_eq!(minimal.1.kind, PairKind::Minimal);
        assert_eq!((minimal.1.i, minimal.1.j, minimal.1.m), (1, 3, 1));
        for (beta, _) in &preds {
            assert_eq!(alcove_length(beta, &ctx).unwrap(), 3);
        }
    }

    #[test]
    fn a_reflection_near_the_origin_is_both_kinds() {
        let ctx = eg1_ctx();
        let alpha = mp("1^6|0|1^2");
        let preds = one_column_predecessors(&alpha, &ctx).unwrap();
        let both = preds
            .iter()
            .find(|(b, _)| *b == mp("1^4|0|1^4"))
            .expect("balanced slide");
        assert_eq!(both.1.kind, PairKind::Both);
    }

    #[test]
    fn minimal_pairs_reflect_through_wall_zero_or_one() {
        let ctx = eg1_ctx();
        for a in 0..=8u32 {
            for b in 0..=(8 - a) {
                let c = 8 - a - b;
                let alpha = Multipartition::new(vec![column(a), column(b), column(c)]).unwrap();
                for (_, mv) in one_column_predecessors(&alpha, &ctx).unwrap() {
                    if mv.kind == PairKind::Minimal || mv.kind == PairKind::Both {
                        assert!(mv.m == 0 || mv.m == 1, "m = {} at {alpha}", mv.m);
                    }
                }
            }
        }
    }

    #[test]
    fn level_one_predecessors_agree_with_abacus_exchanges() {
        use std::collections::HashSet;
        for (lam, e) in [("3^4,1", 4u32), ("3^5", 5)] {
            let lam = p(lam);
            let ctx = ChargeContext::level_one(e, lam.cols()).unwrap();
            for u in enumerate_po_abaci(&lam, e).unwrap() {
                let mu = Multipartition::from_partition(u.to_partition());
                let geometric: HashSet<Partition> = one_column_predecessors(&mu, &ctx)
                    .unwrap()
                    .into_iter()
                    .map(|(b, _)| b.component(1).clone())
                    .collect();
                let abacus: HashSet<Partition> = covering_transpositions(&u)
                    .into_iter()
                    .map(|(v, _)| v.to_partition())
                    .collect();
                assert_eq!(geometric, abacus, "at {mu}, e = {e}");
            }
        }
    }

    #[test]
    fn path_degrees_for_the_two_column_staircase() {
        let ctx = ChargeContext::new(3, &[0], 2).unwrap();
        let included = [mp("0"), mp("1"), mp("2"), mp("2,1")];
        assert_eq!(path_degree(&included, &ctx).unwrap(), 0);
        let excluded = [mp("0"), mp("1"), mp("1,1"), mp("2,1")];
        assert_eq!(path_degree(&excluded, &ctx).unwrap(), 1);
    }

    #[test]
    fn classical_signature_rule_matches_alcove_good_nodes() {
        for e in 3u32..=5 {
            for n in 1..=14u32 {
                for lam in partitions_of(n) {
                    let h = lam.cols();
                    if h == 0 || h > e || !is_unitary(&lam, e) {
                        continue;
                    }
                    let ctx = ChargeContext::level_one(e, h).unwrap();
                    let mu = Multipartition::from_partition(lam.clone());
                    let geometric: Vec<Node> = good_nodes(&mu, &ctx).unwrap();
                    let classical = signature_good_nodes(&mu, &ctx);
                    assert_eq!(geometric, classical, "λ = {lam}, e = {e}");
                }
            }
        }
    }

    /// Signature rule: per residue, read addable/removable nodes in box
    /// order, cancel removable-then-addable pairs, take the most dominant
    /// surviving removable node.
    fn signature_good_nodes(lambda: &Multipartition, ctx: &ChargeContext) -> Vec<Node> {
        let mut out = Vec::new();
        for i in 0..ctx.e() {
            let mut word: Vec<(Node, bool)> =
                boundary_nodes(lambda, Boundary::Removable, Some(i), ctx)
                    .unwrap()
                    .into_iter()
                    .map(|n| (n, true))
                    .chain(
                        boundary_nodes(lambda, Boundary::Addable, Some(i), ctx)
                            .unwrap()
                            .into_iter()
                            .map(|n| (n, false)),
                    )
                    .collect();
            word.sort_by_key(|(n, _)| n.dominance_key(ctx.level()));
            let mut stack: Vec<(Node, bool)> = Vec::new();
            for item in word {
                if !item.1 && stack.last().is_some_and(|top| top.1) {
                    stack.pop();
                } else {
                    stack.push(item);
                }
            }
            if let Some((node, _)) = stack.iter().find(|(_, removable)| *removable) {
                out.push(*node);
            }
        }
        out.sort_by_key(|n| n.dominance_key(ctx.level()));
        out
    }
}
