//! Standard tableaux as node-adding paths, residue sequences, the
//! alcove-restricted subset, and the branching count.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::alcove::{good_nodes, in_fundamental_alcove};
use crate::partition_core::{
    residue, ChargeContext, Multipartition, Node,
};
use crate::{Error, Result};

/// A standard tableau of shape λ, stored as the sequence of nodes receiving
/// the entries 1..n. Every prefix is a multipartition, so entries increase
/// along rows and columns automatically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StandardTableau {
    level: u32,
    nodes: Vec<Node>,
}

impl StandardTableau {
    pub fn new(level: u32, nodes: Vec<Node>) -> Result<Self> {
        let mut shape = Multipartition::empty(level);
        for &node in &nodes {
            shape = shape.with_node(node)?;
        }
        Ok(Self { level, nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn shape(&self) -> Multipartition {
        self.prefix_shape(self.nodes.len())
    }

    pub fn prefix_shape(&self, k: usize) -> Multipartition {
        let mut shape = Multipartition::empty(self.level);
        for &node in &self.nodes[..k] {
            shape = shape.with_node(node).expect("validated on construction");
        }
        shape
    }

    /// The full chain ∅ = λ(0) ⊂ λ(1) ⊂ … ⊂ λ(n).
    pub fn shape_chain(&self) -> Vec<Multipartition> {
        let mut chain = Vec::with_capacity(self.nodes.len() + 1);
        let mut shape = Multipartition::empty(self.level);
        chain.push(shape.clone());
        for &node in &self.nodes {
            shape = shape.with_node(node).expect("validated on construction");
            chain.push(shape.clone());
        }
        chain
    }

    /// Grid view: entries per component, per row.
    pub fn rows(&self) -> Vec<Vec<Vec<u32>>> {
        let shape = self.shape();
        let mut grid: Vec<Vec<Vec<u32>>> = shape
            .components()
            .iter()
            .map(|c| c.parts().iter().map(|&len| vec![0; len as usize]).collect())
            .collect();
        for (entry, node) in self.nodes.iter().enumerate() {
            grid[node.comp as usize - 1][node.row as usize - 1][node.col as usize - 1] =
                entry as u32 + 1;
        }
        grid
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self
            .rows()
            .iter()
            .map(|comp| {
                if comp.is_empty() {
                    "0".to_string()
                } else {
                    comp.iter()
                        .map(|row| {
                            row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
                        })
                        .collect::<Vec<_>>()
                        .join(" / ")
                }
            })
            .collect();
        write!(f, "{}", comps.join(" | "))
    }
}

/// All standard tableaux of shape λ, ordered lexicographically by the box
/// keys of the added nodes.
pub fn enumerate_std(lambda: &Multipartition) -> Vec<StandardTableau> {
    let level = lambda.level();
    let mut out = Vec::new();
    let mut nodes = Vec::with_capacity(lambda.size() as usize);
    fn rec(
        current: &Multipartition,
        lambda: &Multipartition,
        nodes: &mut Vec<Node>,
        out: &mut Vec<StandardTableau>,
    ) {
        if current.size() == lambda.size() {
            out.push(StandardTableau {
                level: lambda.level(),
                nodes: nodes.clone(),
            });
            return;
        }
        let mut frontier: Vec<Node> = addable_inside(current, lambda);
        frontier.sort_by_key(|n| n.dominance_key(lambda.level()));
        for node in frontier {
            nodes.push(node);
            rec(&current.with_node(node).expect("addable"), lambda, nodes, out);
            nodes.pop();
        }
    }
    rec(&Multipartition::empty(level), lambda, &mut nodes, &mut out);
    out
}

fn addable_inside(current: &Multipartition, lambda: &Multipartition) -> Vec<Node> {
    let mut out = Vec::new();
    for (idx, comp) in current.components().iter().enumerate() {
        let target = &lambda.components()[idx];
        for r in 1..=comp.rows() + 1 {
            let c = comp.row(r) + 1;
            if c <= target.row(r) && (r == 1 || comp.row(r - 1) >= c) {
                out.push(Node::new(r, c, idx as u32 + 1));
            }
        }
    }
    out
}

/// The distinguished tableau built by repeatedly placing the largest entry
/// in the least dominant removable box.
pub fn canonical_tableau(lambda: &Multipartition) -> StandardTableau {
    let mut shape = lambda.clone();
    let mut nodes = vec![Node::new(1, 1, 1); lambda.size() as usize];
    for entry in (0..lambda.size() as usize).rev() {
        let node = *removable_nodes(&shape)
            .iter()
            .max_by_key(|n| n.dominance_key(lambda.level()))
            .expect("nonempty shape has a removable box");
        nodes[entry] = node;
        shape = shape.without_node(node).expect("removable");
    }
    StandardTableau { level: lambda.level(), nodes }
}

fn removable_nodes(shape: &Multipartition) -> Vec<Node> {
    let mut out = Vec::new();
    for (idx, comp) in shape.components().iter().enumerate() {
        for r in 1..=comp.rows() {
            let len = comp.row(r);
            if len > 0 && comp.row(r + 1) < len {
                out.push(Node::new(r, len, idx as u32 + 1));
            }
        }
    }
    out
}

/// Alcove-restricted test: every prefix shape lies in the fundamental alcove
/// of the same ambient context. This is sharper at level one than asking each
/// prefix partition to be column-restricted, because wall points are excluded.
pub fn is_e_restricted(t: &StandardTableau, ctx: &ChargeContext) -> Result<bool> {
    let shape = t.shape();
    if !in_fundamental_alcove(&shape, ctx)? {
        return Err(Error::Domain(format!(
            "{shape} is not in the fundamental alcove"
        )));
    }
    let mut current = Multipartition::empty(t.level);
    for &node in &t.nodes {
        current = current.with_node(node)?;
        if !in_fundamental_alcove(&current, ctx)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The alcove-restricted tableaux of shape λ, in enumeration order.
pub fn enumerate_std_e(
    lambda: &Multipartition,
    ctx: &ChargeContext,
) -> Result<Vec<StandardTableau>> {
    if !in_fundamental_alcove(lambda, ctx)? {
        return Err(Error::Domain(format!(
            "{lambda} is not in the fundamental alcove"
        )));
    }
    let mut out = Vec::new();
    for t in enumerate_std(lambda) {
        if is_e_restricted(&t, ctx)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Memoized branching count of alcove-restricted tableaux, shareable across
/// queries. Identical keys always resolve to identical values, so concurrent
/// refills are benign.
pub struct BranchingCounter {
    ctx: ChargeContext,
    cache: Mutex<HashMap<Multipartition, u128>>,
}

impl BranchingCounter {
    pub fn new(ctx: ChargeContext) -> Self {
        Self { ctx, cache: Mutex::new(HashMap::new()) }
    }

    pub fn ctx(&self) -> &ChargeContext {
        &self.ctx
    }

    pub fn count(&self, lambda: &Multipartition) -> Result<u128> {
        if !in_fundamental_alcove(lambda, &self.ctx)? {
            return Err(Error::Domain(format!(
                "{lambda} is not in the fundamental alcove"
            )));
        }
        if let Some(&hit) = self.cache.lock().unwrap().get(lambda) {
            return Ok(hit);
        }
        let value = if lambda.size() == 0 {
            1
        } else {
            let mut total = 0u128;
            for node in good_nodes(lambda, &self.ctx)? {
                total += self.count(&lambda.without_node(node)?)?;
            }
            total
        };
        self.cache.lock().unwrap().insert(lambda.clone(), value);
        Ok(value)
    }
}

/// One-shot branching count with a fresh cache.
pub fn count_std_e(lambda: &Multipartition, ctx: &ChargeContext) -> Result<u128> {
    BranchingCounter::new(ctx.clone()).count(lambda)
}

/// Residues of the nodes in entry order.
pub fn residue_sequence(t: &StandardTableau, ctx: &ChargeContext) -> Result<Vec<u32>> {
    t.nodes.iter().map(|&n| residue(n, ctx)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abacus::is_unitary;
    use crate::alcove::path_degree;
    use crate::partition_core::{dim_specht, Partition};

    fn mp(s: &str) -> Multipartition {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_counts_match_hook_lengths() {
        assert_eq!(enumerate_std(&mp("1^5")).len(), 1);
        assert_eq!(enumerate_std(&mp("2,1")).len(), 2);
        assert_eq!(enumerate_std(&mp("3,3,3,1")).len(), 210);
        for lam in ["4,2", "2,2,1", "3,1|2", "1^3|1^3|1^2"] {
            let lam = mp(lam);
            assert_eq!(enumerate_std(&lam).len() as u128, dim_specht(&lam), "{lam}");
        }
    }

    #[test]
    fn enumeration_is_ordered_and_valid() {
        let all = enumerate_std(&mp("2,2"));
        assert_eq!(all.len(), 2);
        let keys: Vec<Vec<(i64, u32)>> = all
            .iter()
            .map(|t| t.nodes().iter().map(|n| n.dominance_key(1)).collect())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for t in &all {
            assert_eq!(t.shape(), mp("2,2"));
        }
    }

    #[test]
    fn canonical_tableau_examples() {
        assert_eq!(
            canonical_tableau(&mp("1^4")).nodes(),
            &[Node::new(1, 1, 1), Node::new(2, 1, 1), Node::new(3, 1, 1), Node::new(4, 1, 1)]
        );
        // the least dominant removable box takes the largest entry
        assert_eq!(
            canonical_tableau(&mp("2,1")).nodes(),
            &[Node::new(1, 1, 1), Node::new(1, 2, 1), Node::new(2, 1, 1)]
        );
        let t = canonical_tableau(&mp("2,1|1,1"));
        assert_eq!(t.shape(), mp("2,1|1,1"));
        // second-component boxes are less dominant, so they fill late
        assert_eq!(t.to_string(), "1 2 / 4 | 3 / 5");
    }

    #[test]
    fn restriction_examples() {
        let ctx = ChargeContext::new(3, &[0], 2).unwrap();
        let all = enumerate_std(&mp("2,1"));
        let flags: Vec<bool> =
            all.iter().map(|t| is_e_restricted(t, &ctx).unwrap()).collect();
        let row_first = all
            .iter()
            .position(|t| t.nodes()[1] == Node::new(1, 2, 1))
            .unwrap();
        let col_first = 1 - row_first;
        assert!(flags[row_first]);
        assert!(!flags[col_first]);

        assert!(is_e_restricted(&canonical_tableau(&mp("2,1")), &ctx).unwrap());
        assert!(is_e_restricted(
            &canonical_tableau(&mp("1")),
            &ChargeContext::new(3, &[0], 1).unwrap()
        )
        .unwrap());
    }

    #[test]
    fn restricted_counts() {
        let ctx = ChargeContext::new(3, &[0], 2).unwrap();
        assert_eq!(count_std_e(&mp("2,1"), &ctx).unwrap(), 1);
        assert_eq!(count_std_e(&Multipartition::empty(1), &ChargeContext::new(3, &[0], 1).unwrap()).unwrap(), 1);

        let eg = ChargeContext::new(4, &[0, 1, 2], 1).unwrap();
        assert_eq!(count_std_e(&mp("1^3|1^3|1^2"), &eg).unwrap(), 1);
        let members = enumerate_std_e(&mp("1^3|1^3|1^2"), &eg).unwrap();
        assert_eq!(members.len(), 1);
    }

    #[test]
    fn residue_sequences() {
        let ctx = ChargeContext::new(3, &[0], 1).unwrap();
        let t = canonical_tableau(&mp("1^3"));
        assert_eq!(residue_sequence(&t, &ctx).unwrap(), vec![0, 2, 1]);
        let empty = canonical_tableau(&Multipartition::empty(1));
        assert!(residue_sequence(&empty, &ctx).unwrap().is_empty());
    }

    #[test]
    fn restricted_tableaux_have_distinct_residue_sequences_and_degree_zero() {
        for (lam, e) in [("3^4", 4u32), ("2^2,1", 3), ("3,3", 3), ("4,4,2", 5)] {
            let lam: Partition = lam.parse().unwrap();
            assert!(is_unitary(&lam, e));
            let ctx = ChargeContext::level_one(e, lam.cols()).unwrap();
            let mu = Multipartition::from_partition(lam);
            let members = enumerate_std_e(&mu, &ctx).unwrap();
            let mut seen = std::collections::HashSet::new();
            for t in &members {
                assert!(seen.insert(residue_sequence(t, &ctx).unwrap()), "collision at {mu}");
                assert_eq!(path_degree(&t.shape_chain(), &ctx).unwrap(), 0, "degree at {mu}");
            }
        }
    }

    #[test]
    fn enumeration_agrees_with_branching_count() {
        for (lam, e) in [("2,1", 3u32), ("3^4", 4), ("2^2,1", 3), ("3^3", 4), ("2^4", 3)] {
            let lam: Partition = lam.parse().unwrap();
            let h = lam.cols();
            let ctx = ChargeContext::level_one(e, h).unwrap();
            let mu = Multipartition::from_partition(lam);
            assert_eq!(
                enumerate_std_e(&mu, &ctx).unwrap().len() as u128,
                count_std_e(&mu, &ctx).unwrap(),
                "{mu}, e = {e}"
            );
        }
        let eg = ChargeContext::new(4, &[0, 1, 2], 1).unwrap();
        for m in ["1^3|1^3|1^2", "1^2|1|1"] {
            let m = mp(m);
            assert_eq!(
                enumerate_std_e(&m, &eg).unwrap().len() as u128,
                count_std_e(&m, &eg).unwrap()
            );
        }
    }

    #[test]
    fn branching_identity_over_good_nodes() {
        let ctx = ChargeContext::level_one(4, 3).unwrap();
        let counter = BranchingCounter::new(ctx.clone());
        for lam in ["3^4,1", "3^3", "3,3,2"] {
            let lam = mp(lam);
            if !in_fundamental_alcove(&lam, &ctx).unwrap() {
                continue;
            }
            let total = counter.count(&lam).unwrap();
            let via_branches: u128 = good_nodes(&lam, &ctx)
                .unwrap()
                .iter()
                .map(|&n| counter.count(&lam.without_node(n).unwrap()).unwrap())
                .sum();
            assert_eq!(total, via_branches, "{lam}");
        }
    }

    #[test]
    fn canonical_tableau_is_restricted_for_alcove_members() {
        for (lam, e) in [("3^4,1", 4u32), ("3^5", 5), ("2^3", 3)] {
            let lam: Partition = lam.parse().unwrap();
            let ctx = ChargeContext::level_one(e, lam.cols()).unwrap();
            let mu = Multipartition::from_partition(lam);
            assert!(in_fundamental_alcove(&mu, &ctx).unwrap());
            assert!(is_e_restricted(&canonical_tableau(&mu), &ctx).unwrap());
        }
    }
}
