//! Shared test fixtures: the five-store worked example and seeded random
//! instances.

use crate::catalog::{Catalog, CatalogRow, ShoppingList};
use crate::network::RoadNetwork;
use crate::query::Scenario;

/// Travel times (seconds) of the worked example. The six two-store routes
/// through {s1,s5} x {s2,s3,s4} come out at 28/38/41/47/48/36 seconds.
pub(crate) fn worked_example_network() -> RoadNetwork {
    let edges_s: &[(u64, u64, u64)] = &[
        (0, 1, 10),
        (0, 2, 20),
        (0, 3, 28),
        (0, 4, 27),
        (0, 5, 12),
        (0, 6, 26),
        (1, 2, 10),
        (1, 3, 18),
        (1, 4, 22),
        (1, 5, 18),
        (1, 6, 18),
        (2, 3, 12),
        (2, 4, 13),
        (2, 5, 27),
        (2, 6, 8),
        (3, 4, 14),
        (3, 5, 26),
        (3, 6, 10),
        (4, 5, 15),
        (4, 6, 9),
        (5, 6, 24),
    ];
    let edges: Vec<(u64, u64, u64)> =
        edges_s.iter().map(|&(a, b, w)| (a, b, w * 1000)).collect();
    let mut net = RoadNetwork::from_edges(&edges).unwrap();
    // stores s1/s5 share the south-west quadrant, s2/s3/s4 the north-east
    let coords = [
        (0u64, 0.0, 0.0),
        (1, 1.0, 1.0),
        (2, 7.0, 6.0),
        (3, 8.0, 7.0),
        (4, 9.0, 6.0),
        (5, 2.0, 2.0),
        (6, 10.0, 7.0),
    ];
    for (v, x, y) in coords {
        net.set_coord(v, x, y).unwrap();
    }
    net
}

pub(crate) fn worked_example_catalog() -> Catalog {
    let rows = [
        ("s1", 1u64, "A", 700u64),
        ("s1", 1, "B", 800),
        ("s1", 1, "F", 1000),
        ("s2", 2, "C", 1000),
        ("s2", 2, "D", 800),
        ("s2", 2, "E", 1000),
        ("s3", 3, "C", 500),
        ("s3", 3, "D", 300),
        ("s3", 3, "F", 600),
        ("s4", 4, "C", 800),
        ("s4", 4, "D", 700),
        ("s4", 4, "F", 1200),
        ("s5", 5, "A", 600),
        ("s5", 5, "B", 700),
        ("s5", 5, "E", 800),
    ];
    Catalog::from_rows(
        rows.iter()
            .map(|&(s, v, p, c)| CatalogRow {
                store_id: s.into(),
                vertex: v,
                product_id: p.into(),
                price_cents: c,
            })
            .collect(),
    )
    .unwrap()
}

pub(crate) fn worked_example_scenario() -> Scenario {
    Scenario::assemble(worked_example_network(), worked_example_catalog()).unwrap()
}

pub(crate) fn abcd_list() -> ShoppingList {
    ShoppingList::new(
        ["A", "B", "C", "D"]
            .iter()
            .map(|p| (p.to_string(), 1))
            .collect(),
    )
    .unwrap()
}
