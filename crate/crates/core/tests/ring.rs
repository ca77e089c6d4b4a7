use std::collections::BTreeMap;

use icncache::routing::{ring_hash, HashRing, DEFAULT_VIRTUAL_NODES};
use icncache::{ObjectId, RouterId};
use proptest::prelude::*;

const IDS: u64 = 10_000;

fn ten() -> HashRing {
    HashRing::new((0..10).map(RouterId), DEFAULT_VIRTUAL_NODES).unwrap()
}

/// Independent lookup: the smallest virtual-node key at or above the object
/// key, wrapping to the global minimum.
fn brute_locate(routers: &[u32], vnodes: usize, id: u64) -> RouterId {
    let key = ring_hash(id.to_string().as_bytes());
    let mut points: Vec<(u64, u32)> = routers
        .iter()
        .flat_map(|&r| (0..vnodes).map(move |k| (ring_hash(format!("{r}-{k}").as_bytes()), r)))
        .collect();
    points.sort();
    let owner = points.iter().find(|&&(p, _)| p >= key).unwrap_or(&points[0]).1;
    RouterId(owner)
}

#[test]
fn locate_matches_linear_scan() {
    let routers = [0, 3, 7, 12];
    let ring = HashRing::new(routers.iter().map(|&r| RouterId(r)), 16).unwrap();
    for id in 0..2000 {
        assert_eq!(ring.locate(ObjectId(id)), brute_locate(&routers, 16, id));
    }
}

#[test]
fn removal_moves_only_the_removed_routers_ids() {
    let ring = ten();
    for victim in 0..10 {
        let smaller = ring.without_router(RouterId(victim)).unwrap();
        for id in 0..IDS {
            let before = ring.locate(ObjectId(id));
            let after = smaller.locate(ObjectId(id));
            if before != RouterId(victim) {
                assert_eq!(before, after, "id {id} moved off router {before}");
            } else {
                assert_ne!(after, RouterId(victim));
            }
        }
    }
}

#[test]
fn load_is_balanced_within_a_quarter() {
    let ring = ten();
    let mut load: BTreeMap<RouterId, u64> = BTreeMap::new();
    for id in 0..IDS {
        *load.entry(ring.locate(ObjectId(id))).or_default() += 1;
    }
    assert_eq!(load.len(), 10);
    let mean = IDS as f64 / 10.0;
    for (r, &n) in &load {
        let dev = (n as f64 - mean).abs() / mean;
        assert!(dev <= 0.25, "router {r} holds {n} ids ({:.1}% off)", dev * 100.0);
    }
}

#[test]
fn remove_then_readd_restores_every_assignment() {
    let ring = ten();
    for victim in 0..10 {
        let mut again = ring.without_router(RouterId(victim)).unwrap();
        again.add_router(RouterId(victim));
        assert!((0..IDS).all(|id| again.locate(ObjectId(id)) == ring.locate(ObjectId(id))));
    }
}

proptest! {
    #[test]
    fn lookups_land_on_members(routers in prop::collection::btree_set(0u32..500, 1..12), id in any::<u64>()) {
        let ring = HashRing::new(routers.iter().map(|&r| RouterId(r)), 8).unwrap();
        let owner = ring.locate(ObjectId(id));
        prop_assert!(routers.contains(&owner.0));
        prop_assert_eq!(owner, ring.locate(ObjectId(id)));
    }
}
