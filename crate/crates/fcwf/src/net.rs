//! Place/transition net model: nodes, flow relation, markings and firing.
//!
//! Nets are immutable after construction. Places and transitions are kept in
//! identifier order and all derived structures (presets, subnets, SCCs)
//! inherit that order, so every analysis downstream is deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Whether a node is a place (token holder) or a transition (token mover).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Place,
    Transition,
}

/// A node identity: kind plus identifier string.
///
/// Within one net the place and transition name spaces are disjoint, so the
/// name alone identifies a node; ordering is by name first to match the
/// "smallest identifier" tie-breaking used everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeId {
    pub kind: NodeKind,
    pub name: String,
}

impl NodeId {
    pub fn place(name: impl Into<String>) -> Self {
        NodeId { kind: NodeKind::Place, name: name.into() }
    }

    pub fn transition(name: impl Into<String>) -> Self {
        NodeId { kind: NodeKind::Transition, name: name.into() }
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name).then(self.kind.cmp(&other.kind))
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(String, String),
    #[error("arc {0} -> {1} does not connect a place with a transition")]
    NonBipartiteArc(String, String),
    #[error("marking domain does not match the net's places")]
    MarkingDomainMismatch,
    #[error("duplicate marking entry for `{0}`")]
    DuplicateMarkingEntry(String),
    #[error("transition `{0}` is not enabled")]
    NotEnabled(String),
    #[error("step {index}: transition `{transition}` is not enabled")]
    NotEnabledAt { index: usize, transition: String },
    #[error("token count overflow")]
    TokenOverflow,
}

/// An immutable place/transition net with unweighted arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    places: Vec<String>,
    transitions: Vec<String>,
    // Adjacency by index, each list sorted. `p_*` are indexed by place,
    // `t_*` by transition; entries of `p_*` are transition indices and
    // entries of `t_*` are place indices.
    p_out: Vec<Vec<usize>>,
    p_in: Vec<Vec<usize>>,
    t_out: Vec<Vec<usize>>,
    t_in: Vec<Vec<usize>>,
    place_lookup: HashMap<String, usize>,
    trans_lookup: HashMap<String, usize>,
}

impl Net {
    /// Builds a net from identifier lists and name-level arcs.
    pub fn build(
        places: &[&str],
        transitions: &[&str],
        arcs: &[(&str, &str)],
    ) -> Result<Net, NetError> {
        let mut place_names: Vec<String> = places.iter().map(|s| s.to_string()).collect();
        let mut trans_names: Vec<String> = transitions.iter().map(|s| s.to_string()).collect();
        place_names.sort();
        trans_names.sort();

        let mut place_lookup = HashMap::new();
        let mut trans_lookup = HashMap::new();
        for (i, name) in place_names.iter().enumerate() {
            if !is_valid_identifier(name) {
                return Err(NetError::InvalidIdentifier(name.clone()));
            }
            if place_lookup.insert(name.clone(), i).is_some() {
                return Err(NetError::DuplicateNode(name.clone()));
            }
        }
        for (i, name) in trans_names.iter().enumerate() {
            if !is_valid_identifier(name) {
                return Err(NetError::InvalidIdentifier(name.clone()));
            }
            if place_lookup.contains_key(name) {
                return Err(NetError::DuplicateNode(name.clone()));
            }
            if trans_lookup.insert(name.clone(), i).is_some() {
                return Err(NetError::DuplicateNode(name.clone()));
            }
        }

        let mut net = Net {
            p_out: vec![Vec::new(); place_names.len()],
            p_in: vec![Vec::new(); place_names.len()],
            t_out: vec![Vec::new(); trans_names.len()],
            t_in: vec![Vec::new(); trans_names.len()],
            places: place_names,
            transitions: trans_names,
            place_lookup,
            trans_lookup,
        };

        for (from, to) in arcs {
            match (net.place_lookup.get(*from), net.trans_lookup.get(*from)) {
                (Some(&p), None) => {
                    let t = match net.trans_lookup.get(*to) {
                        Some(&t) => t,
                        None if net.place_lookup.contains_key(*to) => {
                            return Err(NetError::NonBipartiteArc(from.to_string(), to.to_string()))
                        }
                        None => return Err(NetError::UnknownNode(to.to_string())),
                    };
                    if net.p_out[p].contains(&t) {
                        return Err(NetError::DuplicateArc(from.to_string(), to.to_string()));
                    }
                    net.p_out[p].push(t);
                    net.t_in[t].push(p);
                }
                (None, Some(&t)) => {
                    let p = match net.place_lookup.get(*to) {
                        Some(&p) => p,
                        None if net.trans_lookup.contains_key(*to) => {
                            return Err(NetError::NonBipartiteArc(from.to_string(), to.to_string()))
                        }
                        None => return Err(NetError::UnknownNode(to.to_string())),
                    };
                    if net.t_out[t].contains(&p) {
                        return Err(NetError::DuplicateArc(from.to_string(), to.to_string()));
                    }
                    net.t_out[t].push(p);
                    net.p_in[p].push(t);
                }
                _ => return Err(NetError::UnknownNode(from.to_string())),
            }
        }
        for list in net
            .p_out
            .iter_mut()
            .chain(net.p_in.iter_mut())
            .chain(net.t_out.iter_mut())
            .chain(net.t_in.iter_mut())
        {
            list.sort_unstable();
        }
        Ok(net)
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn arc_count(&self) -> usize {
        self.p_out.iter().map(Vec::len).sum::<usize>() + self.t_out.iter().map(Vec::len).sum::<usize>()
    }

    /// Place names in identifier order.
    pub fn places(&self) -> impl Iterator<Item = &str> {
        self.places.iter().map(String::as_str)
    }

    /// Transition names in identifier order.
    pub fn transitions(&self) -> impl Iterator<Item = &str> {
        self.transitions.iter().map(String::as_str)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.places
            .iter()
            .map(|p| NodeId::place(p.clone()))
            .chain(self.transitions.iter().map(|t| NodeId::transition(t.clone())))
    }

    /// All arcs as (source, target) pairs, sorted by name pair.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.arc_count());
        for (p, succs) in self.p_out.iter().enumerate() {
            for &t in succs {
                out.push((
                    NodeId::place(self.places[p].clone()),
                    NodeId::transition(self.transitions[t].clone()),
                ));
            }
        }
        for (t, succs) in self.t_out.iter().enumerate() {
            for &p in succs {
                out.push((
                    NodeId::transition(self.transitions[t].clone()),
                    NodeId::place(self.places[p].clone()),
                ));
            }
        }
        out.sort();
        out
    }

    pub fn place_index(&self, name: &str) -> Option<usize> {
        self.place_lookup.get(name).copied()
    }

    pub fn transition_index(&self, name: &str) -> Option<usize> {
        self.trans_lookup.get(name).copied()
    }

    pub fn place_name(&self, index: usize) -> &str {
        &self.places[index]
    }

    pub fn transition_name(&self, index: usize) -> &str {
        &self.transitions[index]
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        match node.kind {
            NodeKind::Place => self.place_lookup.contains_key(&node.name),
            NodeKind::Transition => self.trans_lookup.contains_key(&node.name),
        }
    }

    fn resolve(&self, node: &NodeId) -> Result<(NodeKind, usize), NetError> {
        match node.kind {
            NodeKind::Place => self
                .place_index(&node.name)
                .map(|i| (NodeKind::Place, i))
                .ok_or_else(|| NetError::UnknownNode(node.name.clone())),
            NodeKind::Transition => self
                .transition_index(&node.name)
                .map(|i| (NodeKind::Transition, i))
                .ok_or_else(|| NetError::UnknownNode(node.name.clone())),
        }
    }

    /// Preset of a node: all nodes with an arc into it.
    pub fn preset(&self, node: &NodeId) -> Result<BTreeSet<NodeId>, NetError> {
        let (kind, i) = self.resolve(node)?;
        Ok(match kind {
            NodeKind::Place => self.p_in[i]
                .iter()
                .map(|&t| NodeId::transition(self.transitions[t].clone()))
                .collect(),
            NodeKind::Transition => self.t_in[i]
                .iter()
                .map(|&p| NodeId::place(self.places[p].clone()))
                .collect(),
        })
    }

    /// Postset of a node: all nodes it has an arc to.
    pub fn postset(&self, node: &NodeId) -> Result<BTreeSet<NodeId>, NetError> {
        let (kind, i) = self.resolve(node)?;
        Ok(match kind {
            NodeKind::Place => self.p_out[i]
                .iter()
                .map(|&t| NodeId::transition(self.transitions[t].clone()))
                .collect(),
            NodeKind::Transition => self.t_out[i]
                .iter()
                .map(|&p| NodeId::place(self.places[p].clone()))
                .collect(),
        })
    }

    // Index-level adjacency, used by the analyses in this crate.

    pub(crate) fn place_succ(&self, p: usize) -> &[usize] {
        &self.p_out[p]
    }

    pub(crate) fn place_pred(&self, p: usize) -> &[usize] {
        &self.p_in[p]
    }

    pub(crate) fn trans_succ(&self, t: usize) -> &[usize] {
        &self.t_out[t]
    }

    pub(crate) fn trans_pred(&self, t: usize) -> &[usize] {
        &self.t_in[t]
    }

    // Unified node indexing: places come first, then transitions.

    pub(crate) fn node_count(&self) -> usize {
        self.places.len() + self.transitions.len()
    }

    pub(crate) fn unified_succ(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let p = self.places.len();
        let (st, base): (&[usize], usize) =
            if u < p { (&self.p_out[u], p) } else { (&self.t_out[u - p], 0) };
        st.iter().map(move |&v| v + base)
    }

    pub(crate) fn unified_pred(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let p = self.places.len();
        let (st, base): (&[usize], usize) =
            if u < p { (&self.p_in[u], p) } else { (&self.t_in[u - p], 0) };
        st.iter().map(move |&v| v + base)
    }

    pub(crate) fn unified_node_id(&self, u: usize) -> NodeId {
        let p = self.places.len();
        if u < p {
            NodeId::place(self.places[u].clone())
        } else {
            NodeId::transition(self.transitions[u - p].clone())
        }
    }

    pub(crate) fn unified_index(&self, node: &NodeId) -> Option<usize> {
        match node.kind {
            NodeKind::Place => self.place_index(&node.name),
            NodeKind::Transition => self.transition_index(&node.name).map(|t| t + self.places.len()),
        }
    }

    /// The subnet induced by a node subset: kept nodes plus all arcs between them.
    pub fn induced_subnet(&self, nodes: &BTreeSet<NodeId>) -> Result<Net, NetError> {
        let mut places = Vec::new();
        let mut transitions = Vec::new();
        for node in nodes {
            match self.resolve(node)?.0 {
                NodeKind::Place => places.push(node.name.as_str()),
                NodeKind::Transition => transitions.push(node.name.as_str()),
            }
        }
        let place_set: BTreeSet<&str> = places.iter().copied().collect();
        let trans_set: BTreeSet<&str> = transitions.iter().copied().collect();
        let mut arcs = Vec::new();
        for &p in &places {
            let pi = self.place_index(p).unwrap();
            for &t in &self.p_out[pi] {
                if trans_set.contains(self.transitions[t].as_str()) {
                    arcs.push((p, self.transitions[t].as_str()));
                }
            }
        }
        for &t in &transitions {
            let ti = self.transition_index(t).unwrap();
            for &p in &self.t_out[ti] {
                if place_set.contains(self.places[p].as_str()) {
                    arcs.push((t, self.places[p].as_str()));
                }
            }
        }
        Net::build(&places, &transitions, &arcs)
    }

    /// Swaps the roles of places and transitions and reverses every arc.
    /// Names are preserved, kinds flip.
    pub fn reverse_dual(&self) -> Net {
        let places: Vec<&str> = self.transitions.iter().map(String::as_str).collect();
        let transitions: Vec<&str> = self.places.iter().map(String::as_str).collect();
        let mut arcs = Vec::with_capacity(self.arc_count());
        for (p, succs) in self.p_out.iter().enumerate() {
            for &t in succs {
                // (s, t) in F becomes (t, s): place t -> transition s.
                arcs.push((self.transitions[t].as_str(), self.places[p].as_str()));
            }
        }
        for (t, succs) in self.t_out.iter().enumerate() {
            for &p in succs {
                arcs.push((self.places[p].as_str(), self.transitions[t].as_str()));
            }
        }
        Net::build(&places, &transitions, &arcs).expect("reverse dual of a valid net is valid")
    }

    /// True when the transition has at least one token on every preset place.
    /// Transitions with an empty preset are always enabled.
    pub fn enabled(&self, m: &Marking, transition: &str) -> Result<bool, NetError> {
        let t = self
            .transition_index(transition)
            .ok_or_else(|| NetError::UnknownNode(transition.to_string()))?;
        m.check_domain(self)?;
        Ok(self.enabled_idx(m, t))
    }

    pub(crate) fn enabled_idx(&self, m: &Marking, t: usize) -> bool {
        self.t_in[t].iter().all(|&p| m.tokens[p] >= 1)
    }

    /// Fires an enabled transition, producing the successor marking.
    pub fn fire(&self, m: &Marking, transition: &str) -> Result<Marking, NetError> {
        let t = self
            .transition_index(transition)
            .ok_or_else(|| NetError::UnknownNode(transition.to_string()))?;
        m.check_domain(self)?;
        if !self.enabled_idx(m, t) {
            return Err(NetError::NotEnabled(transition.to_string()));
        }
        self.fire_idx(m, t)
    }

    pub(crate) fn fire_idx(&self, m: &Marking, t: usize) -> Result<Marking, NetError> {
        let mut tokens = m.tokens.clone();
        for &p in &self.t_in[t] {
            if !self.t_out[t].contains(&p) {
                tokens[p] -= 1;
            }
        }
        for &p in &self.t_out[t] {
            if !self.t_in[t].contains(&p) {
                tokens[p] = tokens[p].checked_add(1).ok_or(NetError::TokenOverflow)?;
            }
        }
        Ok(Marking { tokens })
    }

    /// Fires a whole sequence, reporting the earliest failing step.
    pub fn fire_sequence(&self, m: &Marking, seq: &FiringSequence) -> Result<Marking, NetError> {
        m.check_domain(self)?;
        let mut current = m.clone();
        for (index, step) in seq.steps().iter().enumerate() {
            let t = self
                .transition_index(step)
                .ok_or_else(|| NetError::UnknownNode(step.clone()))?;
            if !self.enabled_idx(&current, t) {
                return Err(NetError::NotEnabledAt { index, transition: step.clone() });
            }
            current = self.fire_idx(&current, t)?;
        }
        Ok(current)
    }

    /// Summed token effect of a sequence, one entry per place in place order,
    /// independent of enabledness.
    pub fn sequence_effect(&self, seq: &FiringSequence) -> Result<Vec<i64>, NetError> {
        let mut delta = vec![0i64; self.places.len()];
        for step in seq.steps() {
            let t = self
                .transition_index(step)
                .ok_or_else(|| NetError::UnknownNode(step.clone()))?;
            for &p in &self.t_in[t] {
                if !self.t_out[t].contains(&p) {
                    delta[p] -= 1;
                }
            }
            for &p in &self.t_out[t] {
                if !self.t_in[t].contains(&p) {
                    delta[p] += 1;
                }
            }
        }
        Ok(delta)
    }
}

/// Token counts per place, dense in the net's place order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marking {
    tokens: Vec<u64>,
}

impl Marking {
    pub fn zeros(net: &Net) -> Marking {
        Marking { tokens: vec![0; net.place_count()] }
    }

    pub fn uniform(net: &Net, count: u64) -> Marking {
        Marking { tokens: vec![count; net.place_count()] }
    }

    pub fn all_ones(net: &Net) -> Marking {
        Marking::uniform(net, 1)
    }

    pub fn from_tokens(net: &Net, tokens: Vec<u64>) -> Result<Marking, NetError> {
        if tokens.len() != net.place_count() {
            return Err(NetError::MarkingDomainMismatch);
        }
        Ok(Marking { tokens })
    }

    pub fn from_pairs(net: &Net, pairs: &[(&str, u64)]) -> Result<Marking, NetError> {
        let mut tokens = vec![0; net.place_count()];
        let mut seen = BTreeSet::new();
        for (name, count) in pairs {
            let p = net
                .place_index(name)
                .ok_or_else(|| NetError::UnknownNode(name.to_string()))?;
            if !seen.insert(p) {
                return Err(NetError::DuplicateMarkingEntry(name.to_string()));
            }
            tokens[p] = *count;
        }
        Ok(Marking { tokens })
    }

    pub fn tokens(&self) -> &[u64] {
        &self.tokens
    }

    pub fn get(&self, net: &Net, place: &str) -> Result<u64, NetError> {
        let p = net
            .place_index(place)
            .ok_or_else(|| NetError::UnknownNode(place.to_string()))?;
        Ok(self.tokens[p])
    }

    /// True when every place of the given set is unmarked.
    pub fn unmarked_on(&self, net: &Net, places: &BTreeSet<String>) -> Result<bool, NetError> {
        for name in places {
            if self.get(net, name)? > 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_domain(&self, net: &Net) -> Result<(), NetError> {
        if self.tokens.len() != net.place_count() {
            return Err(NetError::MarkingDomainMismatch);
        }
        Ok(())
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// An ordered sequence of transition names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiringSequence {
    steps: Vec<String>,
}

impl FiringSequence {
    pub fn new<I, S>(steps: I) -> FiringSequence
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FiringSequence { steps: steps.into_iter().map(Into::into).collect() }
    }

    pub fn steps(&self) -> &[String] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: impl Into<String>) {
        self.steps.push(step.into());
    }

    /// Order-preserving filter keeping only the listed transitions.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> FiringSequence {
        FiringSequence {
            steps: self.steps.iter().filter(|s| keep.contains(*s)).cloned().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format;

    fn fig1() -> Net {
        format::parse(include_str!("../fixtures/fig1.net")).unwrap().net
    }

    fn fig3() -> Net {
        format::parse(include_str!("../fixtures/fig3.net")).unwrap().net
    }

    fn cycle1() -> Net {
        format::parse(include_str!("../fixtures/cycle1.net")).unwrap().net
    }

    fn names(set: &BTreeSet<NodeId>) -> Vec<&str> {
        set.iter().map(|n| n.name.as_str()).collect()
    }

    #[test]
    fn preset_and_postset() {
        let fig1 = fig1();
        let pre = fig1.preset(&NodeId::transition("t2")).unwrap();
        assert_eq!(names(&pre), vec!["s3", "s4"]);

        let cycle = cycle1();
        let pre = cycle.preset(&NodeId::transition("t")).unwrap();
        assert_eq!(names(&pre), vec!["s"]);

        let fig3 = fig3();
        let post = fig3.postset(&NodeId::transition("t1")).unwrap();
        assert_eq!(names(&post), vec!["s2", "s3"]);

        assert_eq!(
            fig3.preset(&NodeId::transition("zzz")),
            Err(NetError::UnknownNode("zzz".into()))
        );
        // A declared name with the wrong kind is unknown as well.
        assert!(fig3.preset(&NodeId::place("t1")).is_err());
    }

    #[test]
    fn induced_subnets() {
        let fig3 = fig3();
        let sub = fig3
            .induced_subnet(&[NodeId::place("s1"), NodeId::transition("t1")].into_iter().collect())
            .unwrap();
        assert_eq!(sub.place_count(), 1);
        assert_eq!(sub.transition_count(), 1);
        assert_eq!(sub.arcs(), vec![(NodeId::place("s1"), NodeId::transition("t1"))]);

        let all: BTreeSet<NodeId> = fig3.nodes().collect();
        assert_eq!(fig3.induced_subnet(&all).unwrap(), fig3);

        let fig1 = fig1();
        let sub = fig1
            .induced_subnet(&[NodeId::place("s5"), NodeId::transition("t4")].into_iter().collect())
            .unwrap();
        let mut arcs = sub.arcs();
        arcs.sort();
        assert_eq!(
            arcs,
            vec![
                (NodeId::place("s5"), NodeId::transition("t4")),
                (NodeId::transition("t4"), NodeId::place("s5")),
            ]
        );
    }

    #[test]
    fn reverse_dual_involution_and_shape() {
        let fig1 = fig1();
        assert_eq!(fig1.reverse_dual().reverse_dual(), fig1);

        let cycle = cycle1();
        let rd = cycle.reverse_dual();
        assert_eq!(rd.places().collect::<Vec<_>>(), vec!["t"]);
        assert_eq!(rd.transitions().collect::<Vec<_>>(), vec!["s"]);
        assert_eq!(rd.arc_count(), 2);
        assert_eq!(rd.reverse_dual(), cycle);
    }

    #[test]
    fn enabling_and_firing() {
        let fig1 = fig1();
        let m = Marking::from_pairs(&fig1, &[("s3", 1), ("s4", 1)]).unwrap();
        assert!(fig1.enabled(&m, "t2").unwrap());
        assert!(!fig1.enabled(&m, "t1").unwrap());

        let m1 = fig1.fire(&m, "t2").unwrap();
        assert_eq!(m1.tokens(), &[1, 0, 0, 0, 1]);
        assert_eq!(fig1.fire(&m, "t1"), Err(NetError::NotEnabled("t1".into())));

        let cycle = cycle1();
        let m = Marking::from_pairs(&cycle, &[("s", 1)]).unwrap();
        assert!(cycle.enabled(&m, "t").unwrap());
        // s is both input and output of t, so firing changes nothing.
        assert_eq!(cycle.fire(&m, "t").unwrap(), m);
    }

    #[test]
    fn fire_self_loop_effects_on_fig3() {
        let fig3 = fig3();
        let m = Marking::all_ones(&fig3);
        let m2 = fig3.fire(&m, "t6").unwrap();
        assert_eq!(m2.get(&fig3, "s4").unwrap(), 0);
        assert_eq!(m2.get(&fig3, "s5").unwrap(), 0);
        assert_eq!(m2.get(&fig3, "s1").unwrap(), 2);
        for p in ["s2", "s3", "s6", "s7"] {
            assert_eq!(m2.get(&fig3, p).unwrap(), 1);
        }
    }

    #[test]
    fn fire_sequences() {
        let fig1 = fig1();
        let m = Marking::from_pairs(&fig1, &[("s3", 1), ("s4", 1)]).unwrap();
        let m1 = fig1.fire_sequence(&m, &FiringSequence::new(["t2", "t1", "t3"])).unwrap();
        assert_eq!(m1.tokens(), &[0, 0, 1, 1, 1]);

        let m2 = fig1.fire_sequence(&m1, &FiringSequence::new(["t2", "t1", "t4"])).unwrap();
        assert_eq!(m2.tokens(), &[0, 0, 0, 0, 2]);

        assert_eq!(fig1.fire_sequence(&m, &FiringSequence::default()).unwrap(), m);

        let err = fig1.fire_sequence(&m, &FiringSequence::new(["t2", "t4", "t1"]));
        assert_eq!(err, Err(NetError::NotEnabledAt { index: 1, transition: "t4".into() }));
    }

    #[test]
    fn sequence_effects() {
        let fig1 = fig1();
        let delta = fig1.sequence_effect(&FiringSequence::new(["t2", "t1", "t3"])).unwrap();
        assert_eq!(delta, vec![0, 0, 0, 0, 1]);

        let cycle = cycle1();
        let delta = cycle.sequence_effect(&FiringSequence::new(["t", "t", "t"])).unwrap();
        assert_eq!(delta, vec![0]);

        let fig3 = fig3();
        let delta = fig3.sequence_effect(&FiringSequence::new(["t1"])).unwrap();
        let idx = |n| fig3.place_index(n).unwrap();
        assert_eq!(delta[idx("s1")], -1);
        assert_eq!(delta[idx("s2")], 1);
        assert_eq!(delta[idx("s3")], 1);
        assert!(delta.iter().map(|d| d.abs()).sum::<i64>() == 3);
    }

    #[test]
    fn fire_agrees_with_sequence_effect() {
        let fig1 = fig1();
        let m = Marking::from_pairs(&fig1, &[("s3", 1), ("s4", 1)]).unwrap();
        let seq = FiringSequence::new(["t2", "t1", "t3", "t2", "t1", "t4"]);
        let end = fig1.fire_sequence(&m, &seq).unwrap();
        let delta = fig1.sequence_effect(&seq).unwrap();
        for (i, d) in delta.iter().enumerate() {
            assert_eq!(end.tokens()[i] as i64, m.tokens()[i] as i64 + d);
        }
    }

    #[test]
    fn restrict_sequences() {
        let seq = FiringSequence::new(["t2", "t1", "t3", "t2"]);
        let keep: BTreeSet<String> = ["t2".to_string()].into();
        assert_eq!(seq.restrict(&keep), FiringSequence::new(["t2", "t2"]));

        let all: BTreeSet<String> = ["t1", "t2", "t3"].map(String::from).into();
        assert_eq!(seq.restrict(&all), seq);

        let seq = FiringSequence::new(["t2", "t1", "t4"]);
        let keep: BTreeSet<String> = ["t1", "t2"].map(String::from).into();
        assert_eq!(seq.restrict(&keep), FiringSequence::new(["t2", "t1"]));
    }

    #[test]
    fn build_rejects_malformed_nets() {
        assert!(matches!(
            Net::build(&["s", "s"], &["t"], &[]),
            Err(NetError::DuplicateNode(_))
        ));
        assert!(matches!(
            Net::build(&["x"], &["x"], &[]),
            Err(NetError::DuplicateNode(_))
        ));
        assert!(matches!(
            Net::build(&["1bad"], &[], &[]),
            Err(NetError::InvalidIdentifier(_))
        ));
        assert!(matches!(
            Net::build(&["a", "b"], &["t"], &[("a", "b")]),
            Err(NetError::NonBipartiteArc(..))
        ));
        assert!(matches!(
            Net::build(&["a"], &["t"], &[("a", "t"), ("a", "t")]),
            Err(NetError::DuplicateArc(..))
        ));
        assert!(matches!(
            Net::build(&["a"], &["t"], &[("a", "u")]),
            Err(NetError::UnknownNode(_))
        ));
        // Isolated nodes are allowed.
        let net = Net::build(&["a", "lonely"], &["t"], &[("a", "t")]).unwrap();
        assert_eq!(net.place_count(), 2);
    }
}
