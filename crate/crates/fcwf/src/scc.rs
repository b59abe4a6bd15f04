//! Strongly connected components of a net graph, with top/bottom flags and
//! the acyclic condensation.

use std::collections::BTreeSet;

use crate::net::{Net, NodeId};

/// SCC partition of a net's nodes.
///
/// Components are ordered by their smallest member identifier. A component is
/// *top* when no arc enters it from outside and *bottom* when no arc leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    components: Vec<BTreeSet<NodeId>>,
    is_top: Vec<bool>,
    is_bottom: Vec<bool>,
    condensation: Vec<(usize, usize)>,
}

impl SccDecomposition {
    pub fn components(&self) -> &[BTreeSet<NodeId>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_top(&self, index: usize) -> bool {
        self.is_top[index]
    }

    pub fn is_bottom(&self, index: usize) -> bool {
        self.is_bottom[index]
    }

    /// Arcs of the condensation graph between component indices.
    pub fn condensation(&self) -> &[(usize, usize)] {
        &self.condensation
    }

    pub fn component_of(&self, node: &NodeId) -> Option<usize> {
        self.components.iter().position(|c| c.contains(node))
    }

    pub fn bottom_components(&self) -> impl Iterator<Item = &BTreeSet<NodeId>> {
        self.components.iter().enumerate().filter(|(i, _)| self.is_bottom[*i]).map(|(_, c)| c)
    }

    pub fn top_components(&self) -> impl Iterator<Item = &BTreeSet<NodeId>> {
        self.components.iter().enumerate().filter(|(i, _)| self.is_top[*i]).map(|(_, c)| c)
    }
}

/// Iterative Tarjan over unified node indices; returns component id per node.
/// Component ids are in reverse topological order of discovery and get
/// remapped afterwards, so nothing here needs to be deterministic beyond the
/// fixed iteration order.
pub(crate) fn scc_indices<Succ, I>(node_count: usize, succ: Succ) -> (usize, Vec<usize>)
where
    Succ: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; node_count];
    let mut low = vec![0usize; node_count];
    let mut on_stack = vec![false; node_count];
    let mut comp = vec![UNSET; node_count];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comp_count = 0usize;

    // Explicit DFS stack of (node, resume position in its successor list).
    let mut call: Vec<(usize, usize)> = Vec::new();
    for start in 0..node_count {
        if index[start] != UNSET {
            continue;
        }
        call.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&(v, pos)) = call.last() {
            let mut child = None;
            let mut new_pos = pos;
            for w in succ(v).skip(pos) {
                new_pos += 1;
                if index[w] == UNSET {
                    child = Some(w);
                    break;
                }
                if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            }
            call.last_mut().expect("nonempty call stack").1 = new_pos;
            if let Some(w) = child {
                index[w] = next_index;
                low[w] = next_index;
                next_index += 1;
                stack.push(w);
                on_stack[w] = true;
                call.push((w, 0));
                continue;
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = comp_count;
                    if w == v {
                        break;
                    }
                }
                comp_count += 1;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
        }
    }
    (comp_count, comp)
}

impl Net {
    /// Computes the SCC decomposition of the net's graph.
    pub fn scc(&self) -> SccDecomposition {
        let n = self.node_count();
        let (count, raw_comp) = scc_indices(n, |u| self.unified_succ(u));

        // Group nodes and order components by smallest member identifier.
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for u in 0..n {
            members[raw_comp[u]].push(u);
        }
        let mut sets: Vec<BTreeSet<NodeId>> = members
            .iter()
            .map(|m| m.iter().map(|&u| self.unified_node_id(u)).collect())
            .collect();
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| {
            sets[a].iter().next().unwrap().cmp(sets[b].iter().next().unwrap())
        });
        let mut rank = vec![0usize; count];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut components = vec![BTreeSet::new(); count];
        for (old, set) in sets.drain(..).enumerate() {
            components[rank[old]] = set;
        }

        let mut condensation = BTreeSet::new();
        for u in 0..n {
            let cu = rank[raw_comp[u]];
            for v in self.unified_succ(u) {
                let cv = rank[raw_comp[v]];
                if cu != cv {
                    condensation.insert((cu, cv));
                }
            }
        }
        let mut is_top = vec![true; count];
        let mut is_bottom = vec![true; count];
        for &(a, b) in &condensation {
            is_bottom[a] = false;
            is_top[b] = false;
        }
        SccDecomposition {
            components,
            is_top,
            is_bottom,
            condensation: condensation.into_iter().collect(),
        }
    }

    /// True iff the SCC decomposition has exactly one component.
    pub fn is_strongly_connected(&self) -> bool {
        if self.node_count() == 0 {
            return false;
        }
        let (count, _) = scc_indices(self.node_count(), |u| self.unified_succ(u));
        count == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format;
    use crate::net::NodeId;

    #[test]
    fn fig1_has_two_components() {
        let net = format::parse(include_str!("../fixtures/fig1.net")).unwrap().net;
        let scc = net.scc();
        assert_eq!(scc.len(), 2);

        let top: Vec<&str> =
            scc.components()[0].iter().map(|n| n.name.as_str()).collect();
        assert_eq!(top, vec!["s1", "s2", "s3", "s4", "t1", "t2", "t3"]);
        assert!(scc.is_top(0));
        assert!(!scc.is_bottom(0));

        let bottom: Vec<&str> =
            scc.components()[1].iter().map(|n| n.name.as_str()).collect();
        assert_eq!(bottom, vec!["s5", "t4"]);
        assert!(scc.is_bottom(1));
        assert!(!scc.is_top(1));

        assert_eq!(scc.condensation(), &[(0, 1)]);
        assert!(!net.is_strongly_connected());
    }

    #[test]
    fn cycle_and_fig3_are_strongly_connected() {
        let cycle = format::parse(include_str!("../fixtures/cycle1.net")).unwrap().net;
        let scc = cycle.scc();
        assert_eq!(scc.len(), 1);
        assert!(scc.is_top(0) && scc.is_bottom(0));
        assert!(cycle.is_strongly_connected());

        let fig3 = format::parse(include_str!("../fixtures/fig3.net")).unwrap().net;
        assert_eq!(fig3.scc().len(), 1);
        assert!(fig3.is_strongly_connected());
    }

    #[test]
    fn components_partition_nodes_and_condensation_is_acyclic() {
        for src in [
            include_str!("../fixtures/fig1.net"),
            include_str!("../fixtures/fig3.net"),
            include_str!("../fixtures/fig2net.net"),
            include_str!("../fixtures/fcchoice.net"),
        ] {
            let net = format::parse(src).unwrap().net;
            let scc = net.scc();
            let mut seen: Vec<NodeId> = Vec::new();
            for c in scc.components() {
                for n in c {
                    seen.push(n.clone());
                }
            }
            seen.sort();
            let mut all: Vec<NodeId> = net.nodes().collect();
            all.sort();
            assert_eq!(seen, all);

            // Condensation arcs only go from smaller discovery layers to
            // larger ones once topologically sorted; a cycle would make the
            // longest-path computation diverge, so check via Kahn's algorithm.
            let count = scc.len();
            let mut indeg = vec![0usize; count];
            for &(_, b) in scc.condensation() {
                indeg[b] += 1;
            }
            let mut queue: Vec<usize> =
                (0..count).filter(|&c| indeg[c] == 0).collect();
            let mut removed = 0;
            while let Some(c) = queue.pop() {
                removed += 1;
                for &(a, b) in scc.condensation() {
                    if a == c {
                        indeg[b] -= 1;
                        if indeg[b] == 0 {
                            queue.push(b);
                        }
                    }
                }
            }
            assert_eq!(removed, count, "condensation has a cycle");
        }
    }

    #[test]
    fn isolated_nodes_are_their_own_components() {
        let net = crate::net::Net::build(&["a", "b"], &["t"], &[("a", "t"), ("t", "a")]).unwrap();
        let scc = net.scc();
        assert_eq!(scc.len(), 2);
        assert_eq!(scc.components()[1].len(), 1);
        assert!(scc.is_top(1) && scc.is_bottom(1));
    }
}
