//! Classification of node subsets as (semi-)T- or (semi-)S-components and
//! construction of covering component families.
//!
//! A T-side subset qualifies as a semi-T-component when its induced subnet is
//! strongly connected, has at least one transition, every member place has
//! exactly one successor transition inside, and all member transitions output
//! inside. The full (non-proper) case additionally balances the pre side.
//! S-side classification is the same check on the reverse-dual net.

use std::collections::BTreeSet;

use crate::freechoice::{self, Allocation, FcError};
use crate::net::{Net, NetError, NodeId, NodeKind};
use crate::scc::scc_indices;

/// Which side a classification speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    TSide,
    SSide,
}

/// Outcome of classifying a node subset on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    NotComponent,
    Full,
    Proper { type1: bool, type2: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentKind {
    pub side: Side,
    pub status: Status,
}

impl ComponentKind {
    pub fn is_semi(&self) -> bool {
        matches!(self.status, Status::Full | Status::Proper { .. })
    }

    pub fn is_full(&self) -> bool {
        self.status == Status::Full
    }

    pub fn is_proper(&self) -> bool {
        matches!(self.status, Status::Proper { .. })
    }

    pub fn type2(&self) -> bool {
        matches!(self.status, Status::Proper { type2: true, .. })
    }
}

/// Self-certifying witness detail attached to proper components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Evidence {
    /// Node with two or more incident arcs inside the component where one is
    /// allowed (a place on the T side, a transition on the S side).
    Excessive(NodeId),
    /// Boundary arc crossing into (T side) or out of (S side) the component.
    Boundary(NodeId, NodeId),
}

/// A node subset together with its classification and evidence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Component {
    pub nodes: BTreeSet<NodeId>,
    pub kind: ComponentKind,
    pub evidence: Vec<Evidence>,
}

impl Component {
    /// Places of the component, in identifier order.
    pub fn places(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Place)
            .map(|n| n.name.as_str())
            .collect()
    }

    /// Transitions of the component, in identifier order.
    pub fn transitions(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Transition)
            .map(|n| n.name.as_str())
            .collect()
    }
}

fn induced_strongly_connected(net: &Net, members: &[usize]) -> bool {
    if members.is_empty() {
        return false;
    }
    let pos = |u: usize| members.binary_search(&u).ok();
    let (count, _) = scc_indices(members.len(), |i| {
        net.unified_succ(members[i]).filter_map(pos).collect::<Vec<_>>().into_iter()
    });
    count == 1
}

/// Classifies a node subset on the transition side, collecting evidence for
/// proper outcomes.
pub fn classify_t(net: &Net, nodes: &BTreeSet<NodeId>) -> Result<Component, NetError> {
    let mut members = Vec::with_capacity(nodes.len());
    let mut place_members = Vec::new();
    let mut trans_members = Vec::new();
    for node in nodes {
        if !net.contains(node) {
            return Err(NetError::UnknownNode(node.name.clone()));
        }
        let u = net.unified_index(node).unwrap();
        members.push(u);
        match node.kind {
            NodeKind::Place => place_members.push(u),
            NodeKind::Transition => trans_members.push(u - net.place_count()),
        }
    }
    members.sort_unstable();

    let not_component = Component {
        nodes: nodes.clone(),
        kind: ComponentKind { side: Side::TSide, status: Status::NotComponent },
        evidence: Vec::new(),
    };

    if trans_members.is_empty() || !induced_strongly_connected(net, &members) {
        return Ok(not_component);
    }
    let in_trans = |t: usize| trans_members.binary_search(&t).is_ok();
    let in_place = |p: usize| place_members.binary_search(&p).is_ok();

    // Every member place has exactly one successor transition inside.
    for &pu in &place_members {
        let inside = net.place_succ(pu).iter().filter(|&&t| in_trans(t)).count();
        if inside != 1 {
            return Ok(not_component);
        }
    }
    // Member transitions only output inside.
    for &t in &trans_members {
        if net.trans_succ(t).iter().any(|&p| !in_place(p)) {
            return Ok(not_component);
        }
    }

    // Semi-T-component established; decide full vs proper.
    let mut evidence = Vec::new();
    let mut type1 = false;
    for &pu in &place_members {
        let inside = net.place_pred(pu).iter().filter(|&&t| in_trans(t)).count();
        if inside >= 2 {
            type1 = true;
            evidence.push(Evidence::Excessive(NodeId::place(net.place_name(pu))));
        }
    }
    let mut type2 = false;
    for &t in &trans_members {
        for &p in net.trans_pred(t) {
            if !in_place(p) {
                type2 = true;
                evidence.push(Evidence::Boundary(
                    NodeId::place(net.place_name(p)),
                    NodeId::transition(net.transition_name(t)),
                ));
            }
        }
    }
    evidence.sort();
    evidence.dedup();
    let status = if type1 || type2 { Status::Proper { type1, type2 } } else { Status::Full };
    Ok(Component { nodes: nodes.clone(), kind: ComponentKind { side: Side::TSide, status }, evidence })
}

/// Classifies a node subset on the place side via the reverse-dual net.
pub fn classify_s(net: &Net, nodes: &BTreeSet<NodeId>) -> Result<Component, NetError> {
    for node in nodes {
        if !net.contains(node) {
            return Err(NetError::UnknownNode(node.name.clone()));
        }
    }
    let rd = net.reverse_dual();
    let flipped: BTreeSet<NodeId> = nodes
        .iter()
        .map(|n| match n.kind {
            NodeKind::Place => NodeId::transition(n.name.clone()),
            NodeKind::Transition => NodeId::place(n.name.clone()),
        })
        .collect();
    let on_rd = classify_t(&rd, &flipped)?;
    let evidence = on_rd
        .evidence
        .into_iter()
        .map(|e| match e {
            Evidence::Excessive(n) => Evidence::Excessive(NodeId::transition(n.name)),
            // An inbound arc (s, t) of the reverse-dual is the outbound arc
            // (t, s) of the original net, with kinds flipped back.
            Evidence::Boundary(from, to) => {
                Evidence::Boundary(NodeId::place(to.name), NodeId::transition(from.name))
            }
        })
        .collect();
    Ok(Component {
        nodes: nodes.clone(),
        kind: ComponentKind { side: Side::SSide, status: on_rd.kind.status },
        evidence,
    })
}

/// The shorthand the decision procedures use.
pub fn classify_t_side(net: &Net, nodes: &BTreeSet<NodeId>) -> Result<ComponentKind, NetError> {
    classify_t(net, nodes).map(|c| c.kind)
}

pub fn classify_s_side(net: &Net, nodes: &BTreeSet<NodeId>) -> Result<ComponentKind, NetError> {
    classify_s(net, nodes).map(|c| c.kind)
}

/// Bottom SCCs of the allocation subnet, each classified on the T side
/// against the original net.
pub fn bottom_components_of_allocation(
    net: &Net,
    alloc: &Allocation,
) -> Result<Vec<Component>, FcError> {
    let sub = freechoice::allocation_subnet(net, alloc)?;
    let scc = sub.scc();
    let mut out = Vec::new();
    for bottom in scc.bottom_components() {
        out.push(classify_t(net, bottom)?);
    }
    Ok(out)
}

/// The semi-T-component through `t0`: the bottom SCC of the allocation subnet
/// for the allocation directed to `t0`.
pub fn semi_t_through(net: &Net, t0: &str) -> Result<Component, FcError> {
    semi_t_through_pref(net, t0, &BTreeSet::new())
}

pub(crate) fn semi_t_through_pref(
    net: &Net,
    t0: &str,
    prefer: &BTreeSet<String>,
) -> Result<Component, FcError> {
    let targets: BTreeSet<String> = [t0.to_string()].into();
    let alloc = freechoice::directed_allocation_pref(net, &targets, prefer)?;
    let sub = freechoice::allocation_subnet(net, &alloc)?;
    let scc = sub.scc();
    let target = NodeId::transition(t0);
    let bottom = scc
        .bottom_components()
        .find(|c| c.contains(&target))
        .expect("directed allocation has a bottom SCC containing its target");
    Ok(classify_t(net, bottom)?)
}

/// Grows a family of semi-T-components whose transition sets cover the net's
/// transitions. Seeds are taken in identifier order over still-uncovered
/// transitions; distance ties inside the directed-allocation construction
/// prefer uncovered transitions so that symmetric nets yield symmetric
/// covers.
pub fn semi_t_cover(net: &Net) -> Result<Vec<Component>, FcError> {
    if net.place_count() == 0 || net.transition_count() == 0 {
        return Err(FcError::Degenerate);
    }
    let mut cover = Vec::new();
    let mut covered: BTreeSet<String> = BTreeSet::new();
    let mut uncovered: BTreeSet<String> = net.transitions().map(String::from).collect();
    while let Some(seed) = uncovered.iter().next().cloned() {
        let component = semi_t_through_pref(net, &seed, &uncovered)?;
        for t in component.transitions() {
            covered.insert(t.to_string());
            uncovered.remove(t);
        }
        assert!(covered.contains(&seed), "grown component must contain its seed");
        cover.push(component);
    }
    Ok(cover)
}

/// Dual construction covering the net's places with semi-S-components.
pub fn semi_s_cover(net: &Net) -> Result<Vec<Component>, FcError> {
    let rd = net.reverse_dual();
    let mut out = Vec::new();
    for component in semi_t_cover(&rd)? {
        let nodes: BTreeSet<NodeId> = component
            .nodes
            .iter()
            .map(|n| match n.kind {
                NodeKind::Place => NodeId::transition(n.name.clone()),
                NodeKind::Transition => NodeId::place(n.name.clone()),
            })
            .collect();
        out.push(classify_s(net, &nodes)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format;
    use crate::freechoice::allocation;

    fn net(src: &str) -> Net {
        format::parse(src).unwrap().net
    }

    fn fig3() -> Net {
        net(include_str!("../fixtures/fig3.net"))
    }

    fn node_set(net: &Net, names: &[&str]) -> BTreeSet<NodeId> {
        names
            .iter()
            .map(|n| {
                if net.place_index(n).is_some() {
                    NodeId::place(*n)
                } else {
                    NodeId::transition(*n)
                }
            })
            .collect()
    }

    const Y1: [&str; 9] = ["s1", "s2", "s3", "s6", "s7", "t1", "t3", "t5", "t7"];
    const Y2: [&str; 9] = ["s1", "s2", "s3", "s4", "s5", "t1", "t2", "t4", "t6"];
    const YW: [&str; 10] = ["s1", "s2", "s3", "s4", "s7", "t1", "t2", "t5", "t6", "t7"];

    #[test]
    fn classify_fig3_subsets() {
        let fig3 = fig3();
        let full = classify_t(&fig3, &node_set(&fig3, &Y1)).unwrap();
        assert_eq!(full.kind.status, Status::Full);
        assert!(full.evidence.is_empty());

        let proper = classify_t(&fig3, &node_set(&fig3, &YW)).unwrap();
        assert_eq!(proper.kind.status, Status::Proper { type1: true, type2: true });
        assert!(proper.evidence.contains(&Evidence::Excessive(NodeId::place("s1"))));
        assert!(proper
            .evidence
            .contains(&Evidence::Boundary(NodeId::place("s5"), NodeId::transition("t6"))));
        assert!(proper
            .evidence
            .contains(&Evidence::Boundary(NodeId::place("s6"), NodeId::transition("t7"))));

        let all: BTreeSet<NodeId> = fig3.nodes().collect();
        assert_eq!(classify_t_side(&fig3, &all).unwrap().status, Status::NotComponent);
    }

    #[test]
    fn classify_cycle_both_sides() {
        let cycle = net(include_str!("../fixtures/cycle1.net"));
        let all: BTreeSet<NodeId> = cycle.nodes().collect();
        assert_eq!(classify_t_side(&cycle, &all).unwrap().status, Status::Full);
        assert_eq!(classify_s_side(&cycle, &all).unwrap().status, Status::Full);
    }

    #[test]
    fn s_side_matches_figure_captions() {
        let fig4 = net(include_str!("../fixtures/fig4net.net"));
        let bold = node_set(&fig4, &["s11", "s21", "s31", "t11", "t12", "t21", "t22", "t31"]);
        let c = classify_s(&fig4, &bold).unwrap();
        assert_eq!(c.kind.status, Status::Proper { type1: true, type2: true });
        assert!(c.evidence.contains(&Evidence::Excessive(NodeId::transition("t11"))));
        assert!(c
            .evidence
            .contains(&Evidence::Boundary(NodeId::place("s31"), NodeId::transition("t32"))));

        let fig3 = fig3();
        let c = classify_s_side(&fig3, &node_set(&fig3, &["s1", "t1"])).unwrap();
        assert_eq!(c.status, Status::NotComponent);
    }

    #[test]
    fn singleton_places_on_the_s_side() {
        // An isolated place is a full S-component; a place with no preset but
        // a postset is a proper semi-S of Type II; a place with a preset is
        // no component at all.
        let n = Net::build(&["a", "b", "c"], &["t"], &[("b", "t"), ("t", "c")]).unwrap();
        let single = |name: &str| [NodeId::place(name)].into_iter().collect::<BTreeSet<_>>();
        assert_eq!(classify_s_side(&n, &single("a")).unwrap().status, Status::Full);
        assert_eq!(
            classify_s_side(&n, &single("b")).unwrap().status,
            Status::Proper { type1: false, type2: true }
        );
        assert_eq!(classify_s_side(&n, &single("c")).unwrap().status, Status::NotComponent);
        // On the T side a lone place is never a component.
        assert_eq!(classify_t_side(&n, &single("a")).unwrap().status, Status::NotComponent);
    }

    #[test]
    fn bottom_components_of_fig3_allocations() {
        let fig3 = fig3();
        let alloc = allocation(&fig3, ["t1", "t3", "t5", "t6", "t7"]).unwrap();
        let bottoms = bottom_components_of_allocation(&fig3, &alloc).unwrap();
        assert_eq!(bottoms.len(), 1);
        assert_eq!(bottoms[0].nodes, node_set(&fig3, &Y1));
        assert_eq!(bottoms[0].kind.status, Status::Full);
    }

    #[test]
    fn bottom_component_of_fig2net_allocation_is_proper_both_types() {
        let fig2 = net(include_str!("../fixtures/fig2net.net"));
        let alloc = allocation(&fig2, ["t11", "t21", "t31", "t42", "t51"]).unwrap();
        let bottoms = bottom_components_of_allocation(&fig2, &alloc).unwrap();
        assert_eq!(bottoms.len(), 1);
        assert_eq!(
            bottoms[0].nodes,
            node_set(&fig2, &["s11", "s12", "s21", "s22", "s31", "t11", "t21", "t31"])
        );
        assert_eq!(bottoms[0].kind.status, Status::Proper { type1: true, type2: true });
    }

    #[test]
    fn semi_t_through_examples() {
        let fig3 = fig3();
        let through_t4 = semi_t_through(&fig3, "t4").unwrap();
        assert_eq!(through_t4.nodes, node_set(&fig3, &Y2));
        assert_eq!(through_t4.kind.status, Status::Full);

        let through_t7 = semi_t_through(&fig3, "t7").unwrap();
        assert_eq!(through_t7.nodes, node_set(&fig3, &Y1));

        let cycle = net(include_str!("../fixtures/cycle1.net"));
        let whole = semi_t_through(&cycle, "t").unwrap();
        assert_eq!(whole.nodes, cycle.nodes().collect());
    }

    #[test]
    fn fig3_cover_is_two_full_components() {
        let fig3 = fig3();
        let cover = semi_t_cover(&fig3).unwrap();
        assert_eq!(cover.len(), 2);
        let mut sets: Vec<Vec<&str>> = cover.iter().map(|c| c.transitions()).collect();
        sets.sort();
        assert_eq!(sets, vec![vec!["t1", "t2", "t4", "t6"], vec!["t1", "t3", "t5", "t7"]]);
        assert!(cover.iter().all(|c| c.kind.is_full()));
    }

    #[test]
    fn covers_cover() {
        for src in [
            include_str!("../fixtures/cycle1.net"),
            include_str!("../fixtures/fig3.net"),
            include_str!("../fixtures/fig2net.net"),
            include_str!("../fixtures/fcchoice.net"),
            include_str!("../fixtures/fig4net.net"),
        ] {
            let n = net(src);
            let cover = semi_t_cover(&n).unwrap();
            let mut covered: BTreeSet<&str> = BTreeSet::new();
            for c in &cover {
                assert!(c.kind.is_semi());
                covered.extend(c.transitions());
            }
            assert_eq!(covered, n.transitions().collect());

            let cover = semi_s_cover(&n).unwrap();
            let mut covered: BTreeSet<&str> = BTreeSet::new();
            for c in &cover {
                assert!(c.kind.is_semi());
                covered.extend(c.places());
            }
            assert_eq!(covered, n.places().collect());
        }
    }

    #[test]
    fn classification_is_idempotent_on_cover_members() {
        let fig3 = fig3();
        for c in semi_t_cover(&fig3).unwrap() {
            let again = classify_t(&fig3, &c.nodes).unwrap();
            assert_eq!(again.kind, c.kind);
        }
    }
}
