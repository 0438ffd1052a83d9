//! Heuristic solver: score-driven depth-first search of the store
//! quad-tree, building partial routes leaf by leaf.
//!
//! Each visited leaf contributes orderings of irredundant store subsets
//! covering the products still missing; the Cartesian product with the
//! existing partial routes becomes the new partial-route set. Routes whose
//! shopping time exceeds the upper bound drop out, and completed routes
//! feed the skyline at the end in shopping-time order.

use std::time::Instant;

use crate::bsl::{st_of_min_cost_route, PrunedView};
use crate::catalog::{min_cost_assignment, Cents, CostAssignment};
use crate::network::{tt_add, TravelTime, INF_TT};
use crate::quadtree::{PartitionTimes, StoreQuadTree};
use crate::query::{PsdQuery, ShoppingRoute, SolveContext, SolveError};
use crate::skyline::{CostVector, LinearSkyline};

#[derive(Debug, Clone)]
pub struct ApxConfig {
    /// Partial-route beam width; the Cartesian product is trimmed to the
    /// best entries by normalized time plus cost.
    pub beam: usize,
    /// Leaf subsets up to this size get every ordering; larger ones only
    /// the nearest-neighbor order.
    pub exact_order_limit: usize,
    /// Store-set size limit for the exact shopping-time upper bound,
    /// shared with the exact solver.
    pub st_exact_limit: usize,
}

impl Default for ApxConfig {
    fn default() -> Self {
        ApxConfig {
            beam: 512,
            exact_order_limit: 5,
            st_exact_limit: 8,
        }
    }
}

#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct ApxStats {
    pub leaves_visited: u64,
    pub partial_routes_peak: usize,
    pub rescore_calls: u64,
    pub wall_ms: u64,
}

#[derive(Debug)]
pub struct ApxOutput {
    pub skyline: LinearSkyline<ShoppingRoute>,
    pub stats: ApxStats,
    pub st_upper_bound: TravelTime,
    pub min_cost: Cents,
}

/// Where a quadrant is reached from when scored.
#[derive(Debug, Clone, Copy)]
pub enum ScoreOrigin {
    Shopper,
    Leaf(usize),
}

/// Per-query view of the tree: minimum shopper/delivery travel times per
/// node over the pruned store set.
pub struct TreeQueryView<'a> {
    pub tree: &'a StoreQuadTree,
    pub ptimes: &'a PartitionTimes,
    pub node_shopper: Vec<TravelTime>,
    pub node_delivery: Vec<TravelTime>,
}

impl<'a> TreeQueryView<'a> {
    pub fn build(
        tree: &'a StoreQuadTree,
        ptimes: &'a PartitionTimes,
        from_shopper: &[TravelTime],
        from_delivery: &[TravelTime],
    ) -> Self {
        // nodes are stored children-first, so one forward pass suffices
        let n = tree.nodes.len();
        let mut node_shopper = vec![INF_TT; n];
        let mut node_delivery = vec![INF_TT; n];
        for (i, node) in tree.nodes.iter().enumerate() {
            match node.children {
                None => {
                    for &s in &node.stores {
                        node_shopper[i] = node_shopper[i].min(from_shopper[s as usize]);
                        node_delivery[i] = node_delivery[i].min(from_delivery[s as usize]);
                    }
                }
                Some(children) => {
                    for c in children {
                        node_shopper[i] = node_shopper[i].min(node_shopper[c]);
                        node_delivery[i] = node_delivery[i].min(node_delivery[c]);
                    }
                }
            }
        }
        TreeQueryView {
            tree,
            ptimes,
            node_shopper,
            node_delivery,
        }
    }

    /// The quadrant scoring function: normalized travel term plus
    /// normalized average listed-product price term, or infinity when the
    /// quadrant offers none of the listed products.
    pub fn score_quadrant(
        &self,
        origin: ScoreOrigin,
        listed_pids: &[u32],
        node: usize,
        st_upper: TravelTime,
        max_price: Cents,
    ) -> f64 {
        let products = &self.tree.node(node).products;
        let mut m = 0u32;
        let mut price_sum = 0.0;
        for pid in listed_pids {
            if let Some(&(sum, cnt)) = products.get(pid) {
                m += 1;
                let avg = sum as f64 / cnt as f64;
                price_sum += avg / max_price as f64;
            }
        }
        if m == 0 {
            return f64::INFINITY;
        }
        let to_node = match origin {
            ScoreOrigin::Shopper => self.node_shopper[node],
            ScoreOrigin::Leaf(l) => self.ptimes.leaf_to_node(self.tree, l, node),
        };
        let st_x = tt_add(to_node, self.node_delivery[node]);
        if st_x == INF_TT {
            return f64::INFINITY;
        }
        st_x as f64 / st_upper as f64 + price_sum / m as f64
    }
}

#[derive(Debug, Clone)]
struct PartialRoute {
    stores: Vec<u16>,
    st: TravelTime,
    covered: u128,
}

pub(crate) struct Explorer<'a> {
    view: &'a PrunedView,
    tview: &'a TreeQueryView<'a>,
    /// catalog store index -> pruned position
    pruned_of: &'a [Option<u16>],
    listed_pids: &'a [Option<u32>],
    st_upper: TravelTime,
    max_price: Cents,
    max_list_cost: Cents,
    config: &'a ApxConfig,
    pr: Vec<PartialRoute>,
    last_leaf: Option<usize>,
    completed: Vec<(Vec<u16>, TravelTime)>,
    stats: ApxStats,
}

impl<'a> Explorer<'a> {
    fn missing_mask(&self) -> u128 {
        let covered = self.pr.first().map_or(0, |r| r.covered);
        self.view.full_mask & !covered
    }

    fn missing_pids(&self, mask: u128) -> Vec<u32> {
        self.listed_pids
            .iter()
            .enumerate()
            .filter_map(|(pos, pid)| {
                if mask & (1u128 << pos) != 0 {
                    *pid
                } else {
                    None
                }
            })
            .collect()
    }

    fn explore(&mut self, node_idx: usize) {
        if self.missing_mask() == 0 {
            return;
        }
        if self.tview.tree.is_leaf(node_idx) {
            self.visit_leaf(node_idx);
            return;
        }
        let children = self.tview.tree.node(node_idx).children.unwrap();
        let mut remaining: Vec<usize> = children.to_vec();
        let mut first_pass = true;
        while !remaining.is_empty() {
            let missing = self.missing_mask();
            if missing == 0 {
                break;
            }
            let pids = self.missing_pids(missing);
            let origin = match self.last_leaf {
                Some(l) => ScoreOrigin::Leaf(l),
                None => ScoreOrigin::Shopper,
            };
            let mut best: Option<(f64, usize)> = None;
            for (pos, &c) in remaining.iter().enumerate() {
                let s =
                    self.tview
                        .score_quadrant(origin, &pids, c, self.st_upper, self.max_price);
                if s.is_finite() && best.map_or(true, |(b, _)| s < b) {
                    best = Some((s, pos));
                }
            }
            if !first_pass {
                self.stats.rescore_calls += remaining.len() as u64;
            }
            first_pass = false;
            let Some((_, pos)) = best else { break };
            let child = remaining.remove(pos);
            self.explore(child);
        }
    }

    /// Build the leaf's partial routes and fold them into the running set.
    fn visit_leaf(&mut self, node_idx: usize) {
        let missing = self.missing_mask();
        let node = self.tview.tree.node(node_idx);
        let relevant: Vec<u16> = node
            .stores
            .iter()
            .filter_map(|&s| self.pruned_of[s as usize])
            .filter(|&p| self.view.masks[p as usize] & missing != 0)
            .collect();
        if relevant.is_empty() {
            return;
        }
        self.stats.leaves_visited += 1;
        let coverable = relevant
            .iter()
            .fold(0u128, |m, &p| m | (self.view.masks[p as usize] & missing));

        let subsets = irredundant_covers(&relevant, missing, coverable, &|p| {
            self.view.masks[p as usize]
        });
        let mut leaf_routes: Vec<Vec<u16>> = Vec::new();
        for subset in &subsets {
            if subset.len() <= self.config.exact_order_limit {
                permutations_into(subset, &mut leaf_routes);
            } else {
                leaf_routes.push(self.nearest_neighbor_order(subset));
            }
        }

        let bases = if self.pr.is_empty() {
            vec![PartialRoute {
                stores: Vec::new(),
                st: 0,
                covered: 0,
            }]
        } else {
            std::mem::take(&mut self.pr)
        };
        let mut next = Vec::new();
        for base in &bases {
            for lr in &leaf_routes {
                let first = lr[0];
                let mut st = match base.stores.last() {
                    Some(&end) => tt_add(
                        base.st - self.view.from_delivery[end as usize],
                        self.view.pair(end, first),
                    ),
                    None => self.view.from_shopper[first as usize],
                };
                for w in lr.windows(2) {
                    st = tt_add(st, self.view.pair(w[0], w[1]));
                }
                st = tt_add(st, self.view.from_delivery[*lr.last().unwrap() as usize]);
                if st > self.st_upper {
                    continue;
                }
                let mut stores = base.stores.clone();
                stores.extend_from_slice(lr);
                let covered = base.covered | coverable;
                if covered == self.view.full_mask {
                    self.completed.push((stores.clone(), st));
                }
                next.push(PartialRoute {
                    stores,
                    st,
                    covered,
                });
            }
        }
        self.stats.partial_routes_peak = self.stats.partial_routes_peak.max(next.len());
        if next.len() > self.config.beam {
            let st_upper = self.st_upper as f64;
            let max_cost = self.max_list_cost as f64;
            let mut keyed: Vec<(f64, PartialRoute)> = next
                .into_iter()
                .map(|r| {
                    let (sc, _) = self.view.route_cost(&r.stores);
                    let key = r.st as f64 / st_upper + sc as f64 / max_cost;
                    (key, r)
                })
                .collect();
            keyed.sort_by(|a, b| {
                a.0.partial_cmp(&b.0)
                    .unwrap()
                    .then_with(|| (a.1.st, &a.1.stores).cmp(&(b.1.st, &b.1.stores)))
            });
            keyed.truncate(self.config.beam);
            next = keyed.into_iter().map(|(_, r)| r).collect();
        }
        self.pr = next;
        self.last_leaf = if self.pr.is_empty() {
            None
        } else {
            node.leaf_id
        };
    }

    fn nearest_neighbor_order(&self, subset: &[u16]) -> Vec<u16> {
        let start_key = |s: u16| -> TravelTime {
            match self.last_leaf {
                None => self.view.from_shopper[s as usize],
                Some(leaf) => {
                    let prev = self
                        .tview
                        .tree
                        .nodes
                        .iter()
                        .find(|n| n.leaf_id == Some(leaf))
                        .expect("leaf id valid");
                    prev.stores
                        .iter()
                        .filter_map(|&ps| self.pruned_of[ps as usize])
                        .map(|p| self.view.pair(p, s))
                        .min()
                        .unwrap_or(INF_TT)
                }
            }
        };
        let mut left = subset.to_vec();
        let mut order = Vec::with_capacity(subset.len());
        let mut at: Option<u16> = None;
        while !left.is_empty() {
            let (i, _) = left
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let key = match at {
                        Some(prev) => self.view.pair(prev, s),
                        None => start_key(s),
                    };
                    (i, (key, s))
                })
                .min_by_key(|&(_, k)| k)
                .unwrap();
            let s = left.remove(i);
            order.push(s);
            at = Some(s);
        }
        order
    }
}

/// Subsets of `relevant` that cover `coverable` with no removable member,
/// ascending by bitmask. Falls back to one greedy cover when the leaf is
/// too large to enumerate (only reachable through coincident-point
/// overflow leaves).
fn irredundant_covers(
    relevant: &[u16],
    missing: u128,
    coverable: u128,
    mask_of: &dyn Fn(u16) -> u128,
) -> Vec<Vec<u16>> {
    let r = relevant.len();
    if r > 20 {
        let mut left = coverable;
        let mut pick = Vec::new();
        while left != 0 {
            let (_, best) = relevant
                .iter()
                .filter(|&&s| (mask_of(s) & left) != 0)
                .map(|&s| ((mask_of(s) & left).count_ones(), s))
                .max_by_key(|&(c, s)| (c, std::cmp::Reverse(s)))
                .expect("coverable stays coverable");
            pick.push(best);
            left &= !mask_of(best);
        }
        pick.sort_unstable();
        return vec![pick];
    }
    let masks: Vec<u128> = relevant.iter().map(|&s| mask_of(s) & missing).collect();
    let mut out = Vec::new();
    for bits in 1u32..(1u32 << r) {
        let mut cover = 0u128;
        for (i, m) in masks.iter().enumerate() {
            if bits & (1 << i) != 0 {
                cover |= m;
            }
        }
        if cover != coverable {
            continue;
        }
        let irredundant = (0..r).filter(|i| bits & (1 << i) != 0).all(|i| {
            let mut without = 0u128;
            for (j, m) in masks.iter().enumerate() {
                if j != i && bits & (1 << j) != 0 {
                    without |= m;
                }
            }
            without != coverable
        });
        if irredundant {
            out.push(
                (0..r)
                    .filter(|i| bits & (1 << i) != 0)
                    .map(|i| relevant[i])
                    .collect(),
            );
        }
    }
    out
}

fn permutations_into(items: &[u16], out: &mut Vec<Vec<u16>>) {
    fn rec(work: &mut Vec<u16>, k: usize, out: &mut Vec<Vec<u16>>) {
        if k == work.len() {
            out.push(work.clone());
            return;
        }
        for i in k..work.len() {
            work.swap(k, i);
            rec(work, k + 1, out);
            work.swap(k, i);
        }
    }
    let mut work = items.to_vec();
    rec(&mut work, 0, out);
}

/// Approximate linear skyline for a query over a pre-built quad-tree.
pub fn solve_apx(
    ctx: &SolveContext,
    tree: &StoreQuadTree,
    ptimes: &PartitionTimes,
    query: &PsdQuery,
    config: &ApxConfig,
) -> Result<ApxOutput, SolveError> {
    let start = Instant::now();
    let list = query.shopping_list()?;
    let (sc_stores, _, sc_min) = min_cost_assignment(ctx.catalog, ctx.index, &list)?;
    let pruned = ctx.catalog.prune_stores(&list);
    let qt = ctx.query_times(query, &pruned)?;

    let mut stats = ApxStats::default();
    let mut skyline = LinearSkyline::new();

    if list.is_empty() {
        skyline.try_insert(
            CostVector::new(qt.shopper_to_delivery, 0),
            ShoppingRoute {
                stores: Vec::new(),
                st: qt.shopper_to_delivery,
                sc: 0,
                assignment: CostAssignment {
                    per_product: Default::default(),
                },
                detour_ranks: Vec::new(),
            },
        )?;
        stats.wall_ms = start.elapsed().as_millis() as u64;
        return Ok(ApxOutput {
            skyline,
            stats,
            st_upper_bound: qt.shopper_to_delivery,
            min_cost: 0,
        });
    }

    let sc_store_vec: Vec<u32> = sc_stores.iter().copied().collect();
    let (st_upper, _) = st_of_min_cost_route(ctx, &qt, &sc_store_vec, config.st_exact_limit);
    if st_upper == INF_TT {
        return Err(SolveError::UnreachableDelivery);
    }

    let view = PrunedView::build(ctx, &qt, &pruned, &list)?;
    let listed_pids: Vec<Option<u32>> = list
        .resolved(ctx.catalog)
        .iter()
        .map(|&(p, _)| p)
        .collect();
    let max_price: Cents = listed_pids
        .iter()
        .flatten()
        .flat_map(|&pid| ctx.index.sellers(pid).iter().map(|&(_, c)| c))
        .max()
        .unwrap_or(1);
    let max_list_cost: Cents = view
        .quantities
        .iter()
        .map(|&q| q as u64 * max_price)
        .sum::<u64>()
        .max(1);
    let mut pruned_of = vec![None; ctx.catalog.store_count()];
    for (pos, &s) in pruned.iter().enumerate() {
        pruned_of[s as usize] = Some(pos as u16);
    }
    let tview = TreeQueryView::build(tree, ptimes, &qt.from_shopper, &qt.from_delivery);

    let mut explorer = Explorer {
        view: &view,
        tview: &tview,
        pruned_of: &pruned_of,
        listed_pids: &listed_pids,
        st_upper,
        max_price,
        max_list_cost,
        config,
        pr: Vec::new(),
        last_leaf: None,
        completed: Vec::new(),
        stats,
    };
    explorer.explore(tree.root);
    let mut completed = explorer.completed;
    let mut stats = explorer.stats;

    completed.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    let mut last_inserted: Option<(Vec<u16>, TravelTime)> = None;
    for (stores, st) in completed {
        if last_inserted.as_ref() == Some(&(stores.clone(), st)) {
            continue;
        }
        let (sc, assignment) = view.route_cost(&stores);
        let route = ShoppingRoute {
            stores: stores.iter().map(|&p| view.stores[p as usize]).collect(),
            st,
            sc,
            assignment: lift(&view, &assignment, &listed_pids),
            detour_ranks: Vec::new(),
        };
        skyline.try_insert(CostVector::new(st, sc), route)?;
        last_inserted = Some((stores, st));
    }

    stats.wall_ms = start.elapsed().as_millis() as u64;
    Ok(ApxOutput {
        skyline,
        stats,
        st_upper_bound: st_upper,
        min_cost: sc_min,
    })
}

fn lift(view: &PrunedView, a: &CostAssignment, listed_pids: &[Option<u32>]) -> CostAssignment {
    let per_product = a
        .per_product
        .iter()
        .filter_map(|(&pos, &(s, c))| {
            listed_pids[pos as usize].map(|pid| (pid, (view.stores[s as usize], c)))
        })
        .collect();
    CostAssignment { per_product }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsl::{solve_bsl, BslConfig};
    use crate::quadtree::{build_quadtree, precompute_partition_times};
    use crate::query::Scenario;
    use crate::testfix::{abcd_list, worked_example_scenario};

    fn solve_fixture(capacity: usize) -> (ApxOutput, Scenario) {
        let scenario = worked_example_scenario();
        let tree = build_quadtree(&scenario.catalog, &scenario.network, capacity);
        let ptimes = precompute_partition_times(&tree, &scenario.catalog, &scenario.table);
        let query = PsdQuery::new(0, 6, &abcd_list());
        let out = solve_apx(
            &scenario.ctx(),
            &tree,
            &ptimes,
            &query,
            &ApxConfig::default(),
        )
        .unwrap();
        (out, scenario)
    }

    #[test]
    fn single_leaf_tree_matches_exact_solver() {
        let (out, scenario) = solve_fixture(5);
        let query = PsdQuery::new(0, 6, &abcd_list());
        let exact = solve_bsl(&scenario.ctx(), &query, &BslConfig::default()).unwrap();
        assert_eq!(out.skyline.vectors(), exact.skyline.vectors());
        assert_eq!(out.stats.leaves_visited, 1);
    }

    #[test]
    fn two_leaf_fixture_follows_scores() {
        // the north-east leaf scores best, so routes start with one of its
        // stores and the only combination within the time bound is s2-s1
        let (out, _) = solve_fixture(4);
        assert_eq!(out.stats.leaves_visited, 2);
        assert_eq!(
            out.skyline.vectors(),
            vec![CostVector::new(48_000, 3300)]
        );
    }

    #[test]
    fn score_infinite_without_listed_products() {
        let scenario = worked_example_scenario();
        let tree = build_quadtree(&scenario.catalog, &scenario.network, 4);
        let ptimes = precompute_partition_times(&tree, &scenario.catalog, &scenario.table);
        let query = PsdQuery::new(0, 6, &abcd_list());
        let ctx = scenario.ctx();
        let list = query.shopping_list().unwrap();
        let pruned = ctx.catalog.prune_stores(&list);
        let qt = ctx.query_times(&query, &pruned).unwrap();
        let tview = TreeQueryView::build(&tree, &ptimes, &qt.from_shopper, &qt.from_delivery);
        // an empty child quadrant offers nothing
        let children = tree.node(tree.root).children.unwrap();
        let empty_child = children
            .iter()
            .find(|&&c| tree.node(c).store_count == 0)
            .copied()
            .unwrap();
        let a = ctx.catalog.product_index("A").unwrap();
        let score = tview.score_quadrant(
            ScoreOrigin::Shopper,
            &[a],
            empty_child,
            48_000,
            1000,
        );
        assert!(score.is_infinite());
    }

    #[test]
    fn score_formula_matches_hand_evaluation() {
        let scenario = worked_example_scenario();
        let tree = build_quadtree(&scenario.catalog, &scenario.network, 4);
        let ptimes = precompute_partition_times(&tree, &scenario.catalog, &scenario.table);
        let query = PsdQuery::new(0, 6, &abcd_list());
        let ctx = scenario.ctx();
        let list = query.shopping_list().unwrap();
        let pruned = ctx.catalog.prune_stores(&list);
        let qt = ctx.query_times(&query, &pruned).unwrap();
        let tview = TreeQueryView::build(&tree, &ptimes, &qt.from_shopper, &qt.from_delivery);
        let children = tree.node(tree.root).children.unwrap();
        let pid = |n: &str| ctx.catalog.product_index(n).unwrap();
        let listed = [pid("A"), pid("B"), pid("C"), pid("D")];
        // south-west child holds s1 and s5: reachable in 10s, delivery 18s,
        // avg A 6.50, avg B 7.50, maxPrice 10.00, ST^U 48s
        let sw = children[0];
        let got = tview.score_quadrant(ScoreOrigin::Shopper, &listed, sw, 48_000, 1000);
        let want = 28_000.0 / 48_000.0 + (0.65 + 0.75) / 2.0;
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        // north-east child: 20s + 8s travel, avg C 7.666.., avg D 6.00
        let ne = children[3];
        let got = tview.score_quadrant(ScoreOrigin::Shopper, &listed, ne, 48_000, 1000);
        let want = 28_000.0 / 48_000.0 + (766.0 + 1.0 / 1.5 + 600.0) / 1000.0 / 2.0;
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn zero_distance_max_price_quadrant_scores_one() {
        // store at the shared shopper/delivery vertex, all listed products
        // at the maximum price
        let net = crate::network::RoadNetwork::from_edges(&[(0, 1, 1000)]).unwrap();
        let catalog = crate::catalog::Catalog::from_rows(vec![crate::catalog::CatalogRow {
            store_id: "s".into(),
            vertex: 0,
            product_id: "P".into(),
            price_cents: 500,
        }])
        .unwrap();
        let scenario = Scenario::assemble(net, catalog).unwrap();
        let ctx = scenario.ctx();
        let tree = build_quadtree(&scenario.catalog, &scenario.network, 4);
        let ptimes = precompute_partition_times(&tree, &scenario.catalog, &scenario.table);
        let list = crate::catalog::ShoppingList::new(vec![("P".into(), 1)]).unwrap();
        let query = PsdQuery::new(0, 0, &list);
        let pruned = ctx.catalog.prune_stores(&list);
        let qt = ctx.query_times(&query, &pruned).unwrap();
        let tview = TreeQueryView::build(&tree, &ptimes, &qt.from_shopper, &qt.from_delivery);
        let p = ctx.catalog.product_index("P").unwrap();
        let score = tview.score_quadrant(ScoreOrigin::Shopper, &[p], tree.root, 60_000, 500);
        assert_eq!(score, 1.0);
    }

    #[test]
    fn irredundant_covers_enumerates_minimal_sets() {
        // store 0 covers {a}, store 1 covers {b}, store 2 covers {a,b}
        let masks = [0b01u128, 0b10, 0b11];
        let covers = irredundant_covers(&[0, 1, 2], 0b11, 0b11, &|s| masks[s as usize]);
        assert_eq!(covers, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn infeasible_list_is_an_error() {
        let scenario = worked_example_scenario();
        let tree = build_quadtree(&scenario.catalog, &scenario.network, 8);
        let ptimes = precompute_partition_times(&tree, &scenario.catalog, &scenario.table);
        let list = crate::catalog::ShoppingList::new(vec![("Z".into(), 1)]).unwrap();
        let query = PsdQuery::new(0, 6, &list);
        let err = solve_apx(
            &scenario.ctx(),
            &tree,
            &ptimes,
            &query,
            &ApxConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, SolveError::Catalog(_)));
    }

    #[test]
    fn emitted_routes_are_sound() {
        let (out, scenario) = solve_fixture(4);
        let ctx = scenario.ctx();
        let query = PsdQuery::new(0, 6, &abcd_list());
        let list = query.shopping_list().unwrap();
        let pruned = ctx.catalog.prune_stores(&list);
        let qt = ctx.query_times(&query, &pruned).unwrap();
        for (v, route) in out.skyline.entries() {
            assert!(ctx.catalog.satisfies_list(&list, &route.stores));
            assert_eq!(ctx.route_time(&qt, &route.stores), v.st);
            let (sc, _) = ctx.route_cost(&route.stores, &list).unwrap();
            assert_eq!(sc, v.sc);
            assert!(v.st <= out.st_upper_bound);
        }
    }
}
