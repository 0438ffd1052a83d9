//! PR quad-tree over store coordinates with per-quadrant product
//! statistics, plus pre-computed inter-quadrant travel times.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::network::{RoadNetwork, TravelTime, TravelTimeTable, INF_TT};

const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadNode {
    pub bbox: Rect,
    /// Child node indices in [SW, SE, NW, NE] order; `None` for leaves.
    pub children: Option<[usize; 4]>,
    /// Catalog store indices in this leaf (empty for internal nodes).
    pub stores: Vec<u32>,
    /// Dense leaf numbering used by [`PartitionTimes`].
    pub leaf_id: Option<usize>,
    /// Subtree store count.
    pub store_count: usize,
    /// Per-product price aggregate over subtree stores:
    /// product -> (price sum in cents, seller count).
    pub products: BTreeMap<u32, (u64, u32)>,
}

/// Point-region quad-tree: quadrants holding more stores than the capacity
/// split at the bounding-box midpoint; points on a split line go to the
/// west/south child.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StoreQuadTree {
    pub nodes: Vec<QuadNode>,
    pub root: usize,
    pub capacity: usize,
    pub leaf_count: usize,
    /// Set when coincident store coordinates forced a leaf over capacity.
    pub overflow: bool,
}

impl StoreQuadTree {
    pub fn node(&self, idx: usize) -> &QuadNode {
        &self.nodes[idx]
    }

    pub fn is_leaf(&self, idx: usize) -> bool {
        self.nodes[idx].children.is_none()
    }

    /// Leaf ids under a node, in leaf-id order.
    pub fn leaves_under(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(idx, &mut out);
        out
    }

    fn collect_leaves(&self, idx: usize, out: &mut Vec<usize>) {
        match self.nodes[idx].children {
            None => {
                if let Some(l) = self.nodes[idx].leaf_id {
                    out.push(l);
                }
            }
            Some(children) => {
                for c in children {
                    self.collect_leaves(c, out);
                }
            }
        }
    }
}

/// Build the quad-tree for every store of the catalog, using the store
/// vertices' coordinates.
pub fn build_quadtree(
    catalog: &Catalog,
    network: &RoadNetwork,
    capacity: usize,
) -> StoreQuadTree {
    assert!(capacity >= 1, "leaf capacity must be at least 1");
    let points: Vec<(u32, f64, f64)> = catalog
        .stores()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (x, y) = network.coord(s.vertex).unwrap_or((0.0, 0.0));
            (i as u32, x, y)
        })
        .collect();
    let bbox = if points.is_empty() {
        Rect {
            x0: 0.0,
            y0: 0.0,
            x1: 0.0,
            y1: 0.0,
        }
    } else {
        Rect {
            x0: points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
            y0: points.iter().map(|p| p.2).fold(f64::INFINITY, f64::min),
            x1: points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max),
            y1: points.iter().map(|p| p.2).fold(f64::NEG_INFINITY, f64::max),
        }
    };
    let mut tree = StoreQuadTree {
        nodes: Vec::new(),
        root: 0,
        capacity,
        leaf_count: 0,
        overflow: false,
    };
    let root = build_node(&mut tree, catalog, bbox, points, capacity, 0);
    tree.root = root;
    tree
}

fn build_node(
    tree: &mut StoreQuadTree,
    catalog: &Catalog,
    bbox: Rect,
    points: Vec<(u32, f64, f64)>,
    capacity: usize,
    depth: usize,
) -> usize {
    let coincident = points
        .windows(2)
        .all(|w| w[0].1 == w[1].1 && w[0].2 == w[1].2);
    if points.len() <= capacity || coincident || depth >= MAX_DEPTH {
        if points.len() > capacity {
            tree.overflow = true;
        }
        let stores: Vec<u32> = points.iter().map(|p| p.0).collect();
        let node = QuadNode {
            bbox,
            children: None,
            leaf_id: Some(tree.leaf_count),
            store_count: stores.len(),
            products: aggregate_products(catalog, &stores),
            stores,
        };
        tree.leaf_count += 1;
        tree.nodes.push(node);
        return tree.nodes.len() - 1;
    }

    let mx = (bbox.x0 + bbox.x1) / 2.0;
    let my = (bbox.y0 + bbox.y1) / 2.0;
    let mut buckets: [Vec<(u32, f64, f64)>; 4] = Default::default();
    for p in points {
        let east = p.1 > mx;
        let north = p.2 > my;
        buckets[(north as usize) << 1 | east as usize].push(p);
    }
    let child_boxes = [
        Rect { x0: bbox.x0, y0: bbox.y0, x1: mx, y1: my },
        Rect { x0: mx, y0: bbox.y0, x1: bbox.x1, y1: my },
        Rect { x0: bbox.x0, y0: my, x1: mx, y1: bbox.y1 },
        Rect { x0: mx, y0: my, x1: bbox.x1, y1: bbox.y1 },
    ];
    let mut children = [0usize; 4];
    let mut store_count = 0;
    let mut products: BTreeMap<u32, (u64, u32)> = BTreeMap::new();
    for (i, bucket) in buckets.into_iter().enumerate() {
        let c = build_node(tree, catalog, child_boxes[i], bucket, capacity, depth + 1);
        store_count += tree.nodes[c].store_count;
        for (&p, &(sum, cnt)) in &tree.nodes[c].products {
            let e = products.entry(p).or_insert((0, 0));
            e.0 += sum;
            e.1 += cnt;
        }
        children[i] = c;
    }
    tree.nodes.push(QuadNode {
        bbox,
        children: Some(children),
        stores: Vec::new(),
        leaf_id: None,
        store_count,
        products,
    });
    tree.nodes.len() - 1
}

fn aggregate_products(catalog: &Catalog, stores: &[u32]) -> BTreeMap<u32, (u64, u32)> {
    let mut products: BTreeMap<u32, (u64, u32)> = BTreeMap::new();
    for &s in stores {
        for (&p, &c) in &catalog.store(s).assortment {
            let e = products.entry(p).or_insert((0, 0));
            e.0 += c;
            e.1 += 1;
        }
    }
    products
}

/// Leaf-pair minimum travel times, pre-computed from the store-pair table
/// and min-aggregated to internal nodes on demand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionTimes {
    leaf_count: usize,
    times: Vec<TravelTime>,
}

impl PartitionTimes {
    pub fn leaf_pair(&self, a: usize, b: usize) -> TravelTime {
        self.times[a * self.leaf_count + b]
    }

    /// Minimum travel time between a leaf and any leaf under `node`.
    pub fn leaf_to_node(&self, tree: &StoreQuadTree, leaf: usize, node: usize) -> TravelTime {
        tree.leaves_under(node)
            .into_iter()
            .map(|l| self.leaf_pair(leaf, l))
            .min()
            .unwrap_or(INF_TT)
    }
}

/// Pre-compute the inter-quadrant travel times of a tree (Def. 6 at the
/// leaf level: minimum over store pairs of the two leaves).
pub fn precompute_partition_times(
    tree: &StoreQuadTree,
    catalog: &Catalog,
    table: &TravelTimeTable,
) -> PartitionTimes {
    let mut leaf_stores: Vec<&[u32]> = vec![&[]; tree.leaf_count];
    for node in &tree.nodes {
        if let Some(l) = node.leaf_id {
            leaf_stores[l] = &node.stores;
        }
    }
    let l = tree.leaf_count;
    let mut times = vec![INF_TT; l * l];
    for a in 0..l {
        for b in a..l {
            let mut best = INF_TT;
            for &sa in leaf_stores[a] {
                for &sb in leaf_stores[b] {
                    let va = catalog.store(sa).vertex;
                    let vb = catalog.store(sb).vertex;
                    if let (Some(ia), Some(ib)) = (table.index_of(va), table.index_of(vb)) {
                        best = best.min(table.time_by_index(ia, ib));
                    }
                }
            }
            times[a * l + b] = best;
            times[b * l + a] = best;
        }
    }
    PartitionTimes {
        leaf_count: l,
        times,
    }
}
