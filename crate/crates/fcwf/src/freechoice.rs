//! Free-choice recognition, cluster decomposition, and (place-)allocations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::net::{Net, NetError, NodeId, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FcError {
    #[error("net is not free-choice")]
    NotFreeChoice,
    #[error("net is not strongly connected")]
    NotStronglyConnected,
    #[error("cluster {{{0}}} contains no transition")]
    ClusterWithoutTransition(String),
    #[error("cluster {{{0}}} contains no place")]
    ClusterWithoutPlace(String),
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),
    #[error("target set is empty")]
    EmptyTargets,
    #[error("net needs at least one place and one transition")]
    Degenerate,
    #[error(transparent)]
    Net(#[from] NetError),
}

/// True iff transitions with intersecting presets have equal presets.
pub fn is_free_choice(net: &Net) -> bool {
    violating_pair(net).is_none()
}

/// A pair of transitions refuting the free-choice property, if any.
pub fn violating_pair(net: &Net) -> Option<(NodeId, NodeId)> {
    // Group transitions by each input place; all transitions sharing a place
    // must have identical presets.
    for p in 0..net.place_count() {
        let succs = net.place_succ(p);
        for window in succs.windows(2) {
            let (a, b) = (window[0], window[1]);
            if net.trans_pred(a) != net.trans_pred(b) {
                return Some((
                    NodeId::transition(net.transition_name(a)),
                    NodeId::transition(net.transition_name(b)),
                ));
            }
        }
    }
    None
}

/// The cluster partition of a free-choice net.
///
/// Clusters are ordered by smallest member identifier. All places with empty
/// postset share one cluster, as do all transitions with empty preset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    clusters: Vec<BTreeSet<NodeId>>,
    place_cluster: Vec<usize>,
    trans_cluster: Vec<usize>,
}

impl ClusterPartition {
    pub fn clusters(&self) -> &[BTreeSet<NodeId>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn cluster_of(&self, net: &Net, node: &NodeId) -> Option<usize> {
        match node.kind {
            NodeKind::Place => net.place_index(&node.name).map(|p| self.place_cluster[p]),
            NodeKind::Transition => {
                net.transition_index(&node.name).map(|t| self.trans_cluster[t])
            }
        }
    }

    pub(crate) fn cluster_of_place(&self, p: usize) -> usize {
        self.place_cluster[p]
    }

    pub(crate) fn cluster_of_transition(&self, t: usize) -> usize {
        self.trans_cluster[t]
    }

    /// Transition indices of one cluster, in identifier order.
    pub(crate) fn cluster_transitions(&self, net: &Net, cluster: usize) -> Vec<usize> {
        (0..net.transition_count()).filter(|&t| self.trans_cluster[t] == cluster).collect()
    }

    pub(crate) fn cluster_places(&self, net: &Net, cluster: usize) -> Vec<usize> {
        (0..net.place_count()).filter(|&p| self.place_cluster[p] == cluster).collect()
    }
}

/// Computes the unique cluster partition of a free-choice net.
pub fn clusters(net: &Net) -> Result<ClusterPartition, FcError> {
    if !is_free_choice(net) {
        return Err(FcError::NotFreeChoice);
    }
    // Union of place->transition arcs induces the partition; postset-free
    // places form one shared cluster, preset-free transitions another.
    let p_count = net.place_count();
    let t_count = net.transition_count();
    let mut place_cluster = vec![usize::MAX; p_count];
    let mut trans_cluster = vec![usize::MAX; t_count];
    let mut raw: Vec<BTreeSet<NodeId>> = Vec::new();

    for p in 0..p_count {
        if place_cluster[p] != usize::MAX || net.place_succ(p).is_empty() {
            continue;
        }
        let id = raw.len();
        let mut members = BTreeSet::new();
        let mut queue = VecDeque::from([NodeKindIdx::Place(p)]);
        place_cluster[p] = id;
        while let Some(item) = queue.pop_front() {
            match item {
                NodeKindIdx::Place(p) => {
                    members.insert(NodeId::place(net.place_name(p)));
                    for &t in net.place_succ(p) {
                        if trans_cluster[t] == usize::MAX {
                            trans_cluster[t] = id;
                            queue.push_back(NodeKindIdx::Trans(t));
                        }
                    }
                }
                NodeKindIdx::Trans(t) => {
                    members.insert(NodeId::transition(net.transition_name(t)));
                    for &p in net.trans_pred(t) {
                        if place_cluster[p] == usize::MAX {
                            place_cluster[p] = id;
                            queue.push_back(NodeKindIdx::Place(p));
                        }
                    }
                }
            }
        }
        raw.push(members);
    }

    let sink_places: Vec<usize> =
        (0..p_count).filter(|&p| net.place_succ(p).is_empty()).collect();
    if !sink_places.is_empty() {
        let id = raw.len();
        let mut members = BTreeSet::new();
        for &p in &sink_places {
            place_cluster[p] = id;
            members.insert(NodeId::place(net.place_name(p)));
        }
        raw.push(members);
    }
    let source_transitions: Vec<usize> =
        (0..t_count).filter(|&t| net.trans_pred(t).is_empty()).collect();
    if !source_transitions.is_empty() {
        let id = raw.len();
        let mut members = BTreeSet::new();
        for &t in &source_transitions {
            trans_cluster[t] = id;
            members.insert(NodeId::transition(net.transition_name(t)));
        }
        raw.push(members);
    }

    // Reorder by smallest member identifier.
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[a].iter().next().unwrap().cmp(raw[b].iter().next().unwrap()));
    let mut rank = vec![0usize; raw.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let mut clusters = vec![BTreeSet::new(); raw.len()];
    for (old, set) in raw.into_iter().enumerate() {
        clusters[rank[old]] = set;
    }
    for c in place_cluster.iter_mut().chain(trans_cluster.iter_mut()) {
        *c = rank[*c];
    }
    Ok(ClusterPartition { clusters, place_cluster, trans_cluster })
}

enum NodeKindIdx {
    Place(usize),
    Trans(usize),
}

/// A choice of exactly one transition per cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    chosen: BTreeSet<String>,
}

impl Allocation {
    pub fn chosen(&self) -> &BTreeSet<String> {
        &self.chosen
    }

    /// The cluster-indexed view of the choice.
    pub fn as_map(&self, net: &Net) -> Result<BTreeMap<usize, NodeId>, FcError> {
        let partition = clusters(net)?;
        let mut map = BTreeMap::new();
        for name in &self.chosen {
            let t = net
                .transition_index(name)
                .ok_or_else(|| FcError::Net(NetError::UnknownNode(name.clone())))?;
            map.insert(partition.cluster_of_transition(t), NodeId::transition(name.clone()));
        }
        Ok(map)
    }
}

/// Validates a transition choice as an allocation: exactly one transition
/// from every cluster.
pub fn allocation<I, S>(net: &Net, chosen: I) -> Result<Allocation, FcError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let partition = clusters(net)?;
    let chosen: BTreeSet<String> = chosen.into_iter().map(Into::into).collect();
    let mut per_cluster: Vec<Option<&str>> = vec![None; partition.len()];
    for name in &chosen {
        let t = net
            .transition_index(name)
            .ok_or_else(|| FcError::Net(NetError::UnknownNode(name.clone())))?;
        let c = partition.cluster_of_transition(t);
        if let Some(prev) = per_cluster[c] {
            return Err(FcError::InvalidAllocation(format!(
                "transitions `{prev}` and `{name}` share a cluster"
            )));
        }
        per_cluster[c] = Some(name);
    }
    for (c, slot) in per_cluster.iter().enumerate() {
        if slot.is_none() {
            let members = member_list(&partition.clusters()[c]);
            if partition.cluster_transitions(net, c).is_empty() {
                return Err(FcError::ClusterWithoutTransition(members));
            }
            return Err(FcError::InvalidAllocation(format!(
                "no transition chosen for cluster {{{members}}}"
            )));
        }
    }
    Ok(Allocation { chosen })
}

fn member_list(cluster: &BTreeSet<NodeId>) -> String {
    cluster.iter().map(|n| n.name.as_str()).collect::<Vec<_>>().join(", ")
}

/// The subnet induced by all places plus the allocated transitions.
pub fn allocation_subnet(net: &Net, alloc: &Allocation) -> Result<Net, FcError> {
    let _ = allocation(net, alloc.chosen.iter().cloned())?;
    let mut nodes: BTreeSet<NodeId> = net.places().map(NodeId::place).collect();
    nodes.extend(alloc.chosen.iter().map(NodeId::transition));
    Ok(net.induced_subnet(&nodes)?)
}

/// Per-node shortest distance (in arcs) to the target node set, measured in
/// the full graph of `net`; `usize::MAX` when unreachable.
pub(crate) fn distances_to(net: &Net, targets: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; net.node_count()];
    let mut queue = VecDeque::new();
    for &u in targets {
        if dist[u] == usize::MAX {
            dist[u] = 0;
            queue.push_back(u);
        }
    }
    while let Some(u) = queue.pop_front() {
        for v in net.unified_pred(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Builds the allocation directed to a target transition set: per cluster the
/// transition closest to the targets, ties broken first toward `prefer`
/// members and then by identifier.
pub(crate) fn directed_allocation_pref(
    net: &Net,
    targets: &BTreeSet<String>,
    prefer: &BTreeSet<String>,
) -> Result<Allocation, FcError> {
    if targets.is_empty() {
        return Err(FcError::EmptyTargets);
    }
    if !net.is_strongly_connected() {
        return Err(FcError::NotStronglyConnected);
    }
    let partition = clusters(net)?;
    let mut target_nodes = Vec::new();
    for name in targets {
        let t = net
            .transition_index(name)
            .ok_or_else(|| FcError::Net(NetError::UnknownNode(name.clone())))?;
        target_nodes.push(t + net.place_count());
    }
    let dist = distances_to(net, &target_nodes);

    let mut chosen = BTreeSet::new();
    for c in 0..partition.len() {
        let members = partition.cluster_transitions(net, c);
        if members.is_empty() {
            return Err(FcError::ClusterWithoutTransition(member_list(&partition.clusters()[c])));
        }
        let best = members
            .iter()
            .min_by_key(|&&t| {
                let name = net.transition_name(t);
                (dist[t + net.place_count()], !prefer.contains(name), name)
            })
            .copied()
            .expect("cluster has a transition");
        chosen.insert(net.transition_name(best).to_string());
    }
    Ok(Allocation { chosen })
}

/// The allocation directed to `targets` in a strongly connected free-choice
/// net; distance ties break by transition identifier.
pub fn directed_allocation(net: &Net, targets: &BTreeSet<String>) -> Result<Allocation, FcError> {
    directed_allocation_pref(net, targets, &BTreeSet::new())
}

/// A choice of exactly one place per cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceAllocation {
    chosen: BTreeSet<String>,
}

impl PlaceAllocation {
    pub fn chosen(&self) -> &BTreeSet<String> {
        &self.chosen
    }
}

/// Validates a place choice as a place-allocation.
pub fn place_allocation<I, S>(net: &Net, chosen: I) -> Result<PlaceAllocation, FcError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let rd = net.reverse_dual();
    let alloc = allocation(&rd, chosen).map_err(|e| match e {
        FcError::ClusterWithoutTransition(m) => FcError::ClusterWithoutPlace(m),
        other => other,
    })?;
    Ok(PlaceAllocation { chosen: alloc.chosen })
}

/// The subnet induced by all transitions plus the allocated places.
pub fn place_allocation_subnet(net: &Net, alloc: &PlaceAllocation) -> Result<Net, FcError> {
    let _ = place_allocation(net, alloc.chosen.iter().cloned())?;
    let mut nodes: BTreeSet<NodeId> = net.transitions().map(NodeId::transition).collect();
    nodes.extend(alloc.chosen.iter().map(NodeId::place));
    Ok(net.induced_subnet(&nodes)?)
}

/// The place-allocation co-directed from a source place set: the directed
/// construction on the reverse-dual net, mapped back.
pub fn co_directed_place_allocation(
    net: &Net,
    sources: &BTreeSet<String>,
) -> Result<PlaceAllocation, FcError> {
    let rd = net.reverse_dual();
    let alloc = directed_allocation(&rd, sources).map_err(|e| match e {
        FcError::ClusterWithoutTransition(m) => FcError::ClusterWithoutPlace(m),
        other => other,
    })?;
    Ok(PlaceAllocation { chosen: alloc.chosen })
}
