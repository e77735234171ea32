//! Induced subnets and place-merging.

use std::collections::BTreeSet;

use super::{Net, NetError, System};
use crate::Tokens;

/// Index maps from a derived net back to its parent: entry `i` is the parent
/// index of the derived node `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubnetMap {
    pub places: Vec<usize>,
    pub transitions: Vec<usize>,
}

fn restrict(net: &Net, places: &[usize], transitions: &[usize], suffix: &str) -> Result<(Net, SubnetMap), NetError> {
    let mut new_index = vec![usize::MAX; net.num_places()];
    for (i, &p) in places.iter().enumerate() {
        new_index[p] = i;
    }
    let keep = |arcs: &[(usize, Tokens)]| -> Vec<(usize, Tokens)> {
        arcs.iter().filter(|&&(p, _)| new_index[p] != usize::MAX).map(|&(p, w)| (new_index[p], w)).collect()
    };
    let pre = transitions.iter().map(|&t| keep(net.inputs(t))).collect();
    let post = transitions.iter().map(|&t| keep(net.outputs(t))).collect();
    let sub = Net::from_arcs(
        format!("{}{}", net.name(), suffix),
        places.iter().map(|&p| net.place_id(p).to_string()).collect(),
        transitions.iter().map(|&t| net.transition_id(t).to_string()).collect(),
        pre,
        post,
    )?;
    Ok((sub, SubnetMap { places: places.to_vec(), transitions: transitions.to_vec() }))
}

fn normalize(ids: &[usize], bound: usize) -> Result<Vec<usize>, NetError> {
    let set: BTreeSet<usize> = ids.iter().copied().collect();
    if let Some(&bad) = set.iter().find(|&&i| i >= bound) {
        return Err(NetError::IndexOutOfRange(bad));
    }
    Ok(set.into_iter().collect())
}

/// P-subnet induced by `places`: transitions •P' ∪ P'•, arcs restricted.
pub fn p_subnet(net: &Net, places: &[usize]) -> Result<(Net, SubnetMap), NetError> {
    let places = normalize(places, net.num_places())?;
    let mut ts = net.producers_of(&places);
    ts.extend(net.consumers_of(&places));
    let ts: Vec<usize> = ts.into_iter().collect();
    restrict(net, &places, &ts, "|P")
}

/// T-subnet induced by `transitions`: places •T' ∪ T'•.
pub fn t_subnet(net: &Net, transitions: &[usize]) -> Result<(Net, SubnetMap), NetError> {
    let ts = normalize(transitions, net.num_transitions())?;
    let ps: BTreeSet<usize> =
        ts.iter().flat_map(|&t| net.inputs(t).iter().chain(net.outputs(t)).map(|&(p, _)| p)).collect();
    let ps: Vec<usize> = ps.into_iter().collect();
    restrict(net, &ps, &ts, "|T")
}

fn restrict_marking(sys: &System, map: &SubnetMap) -> Vec<Tokens> {
    map.places.iter().map(|&p| sys.m0[p]).collect()
}

pub fn p_subsystem(sys: &System, places: &[usize]) -> Result<(System, SubnetMap), NetError> {
    let (net, map) = p_subnet(&sys.net, places)?;
    let m0 = restrict_marking(sys, &map);
    Ok((System::new(net, m0)?, map))
}

pub fn t_subsystem(sys: &System, transitions: &[usize]) -> Result<(System, SubnetMap), NetError> {
    let (net, map) = t_subnet(&sys.net, transitions)?;
    let m0 = restrict_marking(sys, &map);
    Ok((System::new(net, m0)?, map))
}

/// A set of places to collapse into one. Without a name, the merged place
/// takes the identifier of its lowest-indexed member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeGroup {
    pub name: Option<String>,
    pub places: Vec<usize>,
}

impl MergeGroup {
    pub fn new(places: Vec<usize>) -> Self {
        MergeGroup { name: None, places }
    }

    pub fn named(name: impl Into<String>, places: Vec<usize>) -> Self {
        MergeGroup { name: Some(name.into()), places }
    }
}

/// Collapses each group to a single place whose arc weights are the sums of
/// its members' weights. The merged place sits at the position of its lowest
/// member; other places keep their relative order. Returns the merged net and
/// the old→new place map.
pub fn merge_places(net: &Net, groups: &[MergeGroup]) -> Result<(Net, Vec<usize>), NetError> {
    let np = net.num_places();
    let mut group_of = vec![usize::MAX; np];
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(groups.len());
    for (g, grp) in groups.iter().enumerate() {
        let ps = normalize(&grp.places, np)?;
        if ps.is_empty() {
            return Err(NetError::EmptyMergeGroup);
        }
        for &p in &ps {
            if group_of[p] != usize::MAX {
                return Err(NetError::OverlappingMerge(net.place_id(p).to_string()));
            }
            group_of[p] = g;
        }
        members.push(ps);
    }
    let mut old_to_new = vec![usize::MAX; np];
    let mut names = Vec::new();
    for p in 0..np {
        let g = group_of[p];
        if g == usize::MAX {
            old_to_new[p] = names.len();
            names.push(net.place_id(p).to_string());
        } else if members[g][0] == p {
            let idx = names.len();
            for &q in &members[g] {
                old_to_new[q] = idx;
            }
            names.push(groups[g].name.clone().unwrap_or_else(|| net.place_id(p).to_string()));
        }
    }
    let remap = |arcs: &[(usize, Tokens)]| arcs.iter().map(|&(p, w)| (old_to_new[p], w)).collect();
    let pre = (0..net.num_transitions()).map(|t| remap(net.inputs(t))).collect();
    let post = (0..net.num_transitions()).map(|t| remap(net.outputs(t))).collect();
    let merged = Net::from_arcs(net.name(), names, net.transition_ids().to_vec(), pre, post)?;
    Ok((merged, old_to_new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::NetBuilder;

    fn fig1() -> Net {
        NetBuilder::new("fig1")
            .places(["p1", "p2", "p3", "p4"])
            .transition("t1", &[("p1", 1)], &[("p3", 2)])
            .transition("t2", &[("p3", 4), ("p4", 3)], &[("p1", 2), ("p2", 1)])
            .transition("t3", &[("p2", 1)], &[("p4", 3)])
            .build()
            .unwrap()
    }

    #[test]
    fn t_subnet_of_t2() {
        let (sub, map) = t_subnet(&fig1(), &[1]).unwrap();
        let expected = NetBuilder::new("x")
            .places(["p1", "p2", "p3", "p4"])
            .transition("t2", &[("p3", 4), ("p4", 3)], &[("p1", 2), ("p2", 1)])
            .build()
            .unwrap();
        assert_eq!(sub, expected);
        assert_eq!(map.transitions, vec![1]);
    }

    #[test]
    fn p_subnet_of_p1_p3() {
        let (sub, map) = p_subnet(&fig1(), &[2, 0]).unwrap();
        let expected = NetBuilder::new("x")
            .places(["p1", "p3"])
            .transition("t1", &[("p1", 1)], &[("p3", 2)])
            .transition("t2", &[("p3", 4)], &[("p1", 2)])
            .build()
            .unwrap();
        assert_eq!(sub, expected);
        assert_eq!(map.places, vec![0, 2]);
    }

    #[test]
    fn empty_p_subnet() {
        let (sub, _) = p_subnet(&fig1(), &[]).unwrap();
        assert_eq!(sub.num_places(), 0);
        assert_eq!(sub.num_transitions(), 0);
    }

    #[test]
    fn merge_collapses_weights() {
        let net = NetBuilder::new("m")
            .places(["a", "b", "c"])
            .transition("t", &[("a", 1), ("c", 2)], &[("b", 1)])
            .build()
            .unwrap();
        let (merged, map) = merge_places(&net, &[MergeGroup::named("ac", vec![0, 2])]).unwrap();
        assert_eq!(merged.place_ids(), ["ac", "b"]);
        assert_eq!(map, vec![0, 1, 0]);
        assert_eq!(merged.weight_pt(0, 0), 3);
        let (same, _) = merge_places(&net, &[]).unwrap();
        assert_eq!(same, net);
    }

    #[test]
    fn overlapping_groups_rejected() {
        let net = fig1();
        let r = merge_places(&net, &[MergeGroup::new(vec![0, 1]), MergeGroup::new(vec![1, 2])]);
        assert_eq!(r.unwrap_err(), NetError::OverlappingMerge("p2".into()));
    }
}
