//! Built-in benchmark topologies.
//!
//! The physical side is the classic 14-node NSF backbone (21 links) and its
//! `NSF1` variant augmented with a link between the two degree-2 nodes 6 and
//! 9, which raises the minimum degree and edge connectivity to 3. The
//! logical side is four 7-node virtual datacenter networks: `CLN1` and
//! `CLN3` are 3-edge-connected with 11 links each; adding three links turns
//! them into the 4-regular, 4-edge-connected `CLN2` and `CLN4`. The CLN edge
//! lists are fixed here so experiments are reproducible; their degree and
//! connectivity profiles are what the companion tests pin down.

use crate::net::{LogicalNetwork, NetError, PhysicalNetwork};

pub const NSF_EDGES: [(u32, u32); 21] = [
    (0, 1),
    (0, 2),
    (0, 7),
    (1, 2),
    (1, 3),
    (2, 5),
    (3, 4),
    (3, 10),
    (4, 5),
    (4, 6),
    (5, 9),
    (5, 12),
    (6, 7),
    (7, 8),
    (8, 9),
    (8, 11),
    (8, 13),
    (10, 11),
    (10, 12),
    (11, 13),
    (12, 13),
];

/// The extra NSF1 link joins the two degree-2 nodes.
pub const NSF1_EXTRA: (u32, u32) = (6, 9);

const CLN1_EDGES: [(u32, u32); 11] = [
    (0, 1),
    (0, 2),
    (0, 5),
    (0, 6),
    (1, 3),
    (1, 6),
    (2, 3),
    (2, 4),
    (3, 5),
    (4, 5),
    (4, 6),
];

// CLN2 = CLN1 plus (1,2), (3,4), (5,6).
const CLN2_EDGES: [(u32, u32); 14] = [
    (0, 1),
    (0, 2),
    (0, 5),
    (0, 6),
    (1, 2),
    (1, 3),
    (1, 6),
    (2, 3),
    (2, 4),
    (3, 4),
    (3, 5),
    (4, 5),
    (4, 6),
    (5, 6),
];

const CLN3_EDGES: [(u32, u32); 11] = [
    (0, 4),
    (0, 5),
    (0, 6),
    (1, 3),
    (1, 5),
    (1, 6),
    (2, 3),
    (2, 4),
    (2, 6),
    (3, 5),
    (4, 6),
];

// CLN4 = CLN3 plus (0,3), (1,4), (2,5).
const CLN4_EDGES: [(u32, u32); 14] = [
    (0, 3),
    (0, 4),
    (0, 5),
    (0, 6),
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 6),
    (2, 3),
    (2, 4),
    (2, 5),
    (2, 6),
    (3, 5),
    (4, 6),
];

/// Node placements onto NSF. CLN1/CLN2 share one injective map (including
/// the physical nodes 2, 4 and 7, whose pairwise shortest paths overlap);
/// CLN3/CLN4 share another.
pub const CLN12_NODE_MAP: [u32; 7] = [2, 4, 7, 9, 12, 0, 5];
pub const CLN34_NODE_MAP: [u32; 7] = [1, 3, 6, 8, 10, 13, 11];

/// Summary line for one built-in topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyInfo {
    pub name: &'static str,
    pub kind: TopologyKind,
    pub nodes: u32,
    pub edges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyKind {
    Physical,
    Logical,
}

/// The built-in physical topologies by name (`NSF`, `NSF1`).
pub fn builtin_physical(name: &str) -> Option<PhysicalNetwork> {
    let edges = match normalize(name).as_str() {
        "nsf" => NSF_EDGES.to_vec(),
        "nsf1" => {
            let mut e = NSF_EDGES.to_vec();
            e.push(NSF1_EXTRA);
            e
        }
        _ => return None,
    };
    Some(PhysicalNetwork::new(14, edges).expect("built-in physical topology is valid"))
}

/// The built-in logical topologies by name (`CLN1`..`CLN4`), instantiated
/// against a physical network that must offer the mapped node ids.
pub fn builtin_logical(
    name: &str,
    phys: &PhysicalNetwork,
) -> Option<Result<LogicalNetwork, NetError>> {
    let (edges, map): (Vec<(u32, u32)>, Vec<u32>) = match normalize(name).as_str() {
        "cln1" => (CLN1_EDGES.to_vec(), CLN12_NODE_MAP.to_vec()),
        "cln2" => (CLN2_EDGES.to_vec(), CLN12_NODE_MAP.to_vec()),
        "cln3" => (CLN3_EDGES.to_vec(), CLN34_NODE_MAP.to_vec()),
        "cln4" => (CLN4_EDGES.to_vec(), CLN34_NODE_MAP.to_vec()),
        _ => return None,
    };
    Some(LogicalNetwork::new(7, edges, map, phys))
}

fn normalize(name: &str) -> String {
    name.trim()
        .chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase()
}

/// Catalog of every built-in topology with its size.
pub fn builtin_topologies() -> Vec<TopologyInfo> {
    vec![
        TopologyInfo {
            name: "NSF",
            kind: TopologyKind::Physical,
            nodes: 14,
            edges: 21,
        },
        TopologyInfo {
            name: "NSF1",
            kind: TopologyKind::Physical,
            nodes: 14,
            edges: 22,
        },
        TopologyInfo {
            name: "CLN1",
            kind: TopologyKind::Logical,
            nodes: 7,
            edges: 11,
        },
        TopologyInfo {
            name: "CLN2",
            kind: TopologyKind::Logical,
            nodes: 7,
            edges: 14,
        },
        TopologyInfo {
            name: "CLN3",
            kind: TopologyKind::Logical,
            nodes: 7,
            edges: 11,
        },
        TopologyInfo {
            name: "CLN4",
            kind: TopologyKind::Logical,
            nodes: 7,
            edges: 14,
        },
    ]
}
