//! Exact solver: minimum-detour route generation in non-decreasing
//! shopping-time order, with cost-bound pruning and early termination.
//!
//! Candidates are store sequences. Popping a sequence generates two
//! successors: append the store with the minimum detour after the current
//! tail (`theta^s`), and replace the tail with the store holding the next
//! detour rank from the same origin (`theta^p`). Both successors have
//! shopping time no smaller than their parent, so the priority queue pops
//! candidates in non-decreasing shopping time and skyline insertion needs
//! only the single left-neighbor check.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::time::Instant;

use crate::catalog::{min_cost_assignment, Cents, CostAssignment, ShoppingList};
use crate::network::{tt_add, TravelTime, INF_TT};
use crate::query::{PsdQuery, QueryTimes, ShoppingRoute, SolveContext, SolveError};
use crate::skyline::{CostVector, LinearSkyline};

#[derive(Debug, Clone)]
pub struct BslConfig {
    /// Hard cap on popped candidates; hitting it returns a flagged,
    /// possibly sub-optimal skyline.
    pub max_popped: u64,
    /// Store-set size up to which the minimum-cost route order is solved
    /// exactly; larger sets fall back to nearest-neighbor order.
    pub exact_order_limit: usize,
}

impl Default for BslConfig {
    fn default() -> Self {
        BslConfig {
            max_popped: 5_000_000,
            exact_order_limit: 8,
        }
    }
}

#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct BslStats {
    pub popped: u64,
    pub pushed: u64,
    pub evicted: u64,
    pub terminated_early: bool,
    pub capped: bool,
    /// Theorem-2 witness: pops never regressed in shopping time.
    pub pop_st_monotone: bool,
    pub wall_ms: u64,
}

#[derive(Debug)]
pub struct BslOutput {
    pub skyline: LinearSkyline<ShoppingRoute>,
    pub stats: BslStats,
    pub st_upper_bound: TravelTime,
    pub min_cost: Cents,
}

/// Detour-sorted store list for one origin: entries ascending by
/// `mTT(origin, s) + mTT(s, delivery)`, ties by store index.
#[derive(Debug, Clone)]
pub struct DetourRanking {
    entries: Vec<(TravelTime, u16)>,
}

impl DetourRanking {
    fn build(keys: impl Iterator<Item = (TravelTime, u16)>) -> Self {
        let mut entries: Vec<(TravelTime, u16)> = keys.collect();
        entries.sort_unstable();
        DetourRanking { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, rank: u32) -> Option<(TravelTime, u16)> {
        self.entries.get(rank as usize - 1).copied()
    }

    /// First ranked store not excluded; `None` when all are excluded or
    /// only unreachable stores remain. Returns the 1-based rank.
    pub fn min_detour(&self, exclude: &[u16]) -> Option<(u32, u16, TravelTime)> {
        self.scan_from(0, exclude)
    }

    /// First store ranked strictly after `rank` and not excluded.
    pub fn next_min_detour(&self, rank: u32, exclude: &[u16]) -> Option<(u32, u16, TravelTime)> {
        self.scan_from(rank as usize, exclude)
    }

    fn scan_from(&self, start: usize, exclude: &[u16]) -> Option<(u32, u16, TravelTime)> {
        self.entries[start..]
            .iter()
            .enumerate()
            .find(|(_, (d, s))| *d != INF_TT && !exclude.contains(s))
            .map(|(i, &(d, s))| ((start + i + 1) as u32, s, d))
    }
}

/// Rankings for every origin a query can extend from: the shopper's
/// location and each pruned store.
pub struct DetourRankings {
    pub from_shopper: DetourRanking,
    pub from_store: Vec<DetourRanking>,
}

/// Dense per-query view of the pruned store set.
pub(crate) struct PrunedView {
    /// pruned position -> catalog store index
    pub stores: Vec<u32>,
    /// pruned pair travel times, row-major
    pub pair: Vec<TravelTime>,
    pub from_shopper: Vec<TravelTime>,
    pub from_delivery: Vec<TravelTime>,
    /// per pruned store, listed products it sells as (item position, price)
    pub item_prices: Vec<Vec<(usize, Cents)>>,
    /// per pruned store, bitmask over list positions
    pub masks: Vec<u128>,
    pub full_mask: u128,
    pub quantities: Vec<u32>,
}

impl PrunedView {
    pub(crate) fn build(
        ctx: &SolveContext,
        qt: &QueryTimes,
        pruned: &[u32],
        list: &ShoppingList,
    ) -> Result<Self, SolveError> {
        if list.len() > 128 {
            return Err(SolveError::ListTooLarge(list.len()));
        }
        let n = pruned.len();
        let mut pair = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                pair[i * n + j] = ctx.store_pair_time(pruned[i], pruned[j]);
            }
        }
        let resolved = list.resolved(ctx.catalog);
        let mut item_prices = vec![Vec::new(); n];
        let mut masks = vec![0u128; n];
        for (pos, (pid, _)) in resolved.iter().enumerate() {
            let Some(pid) = pid else { continue };
            for (i, &s) in pruned.iter().enumerate() {
                if let Some(&c) = ctx.catalog.store(s).assortment.get(pid) {
                    item_prices[i].push((pos, c));
                    masks[i] |= 1u128 << pos;
                }
            }
        }
        let full_mask = if list.len() == 128 {
            u128::MAX
        } else {
            (1u128 << list.len()) - 1
        };
        Ok(PrunedView {
            stores: pruned.to_vec(),
            pair,
            from_shopper: pruned
                .iter()
                .map(|&s| qt.from_shopper[s as usize])
                .collect(),
            from_delivery: pruned
                .iter()
                .map(|&s| qt.from_delivery[s as usize])
                .collect(),
            item_prices,
            masks,
            full_mask,
            quantities: resolved.iter().map(|&(_, q)| q).collect(),
        })
    }

    #[inline]
    pub(crate) fn pair(&self, a: u16, b: u16) -> TravelTime {
        self.pair[a as usize * self.stores.len() + b as usize]
    }

    #[inline]
    fn detour(&self, origin: Option<u16>, s: u16) -> TravelTime {
        let leg = match origin {
            Some(o) => self.pair(o, s),
            None => self.from_shopper[s as usize],
        };
        tt_add(leg, self.from_delivery[s as usize])
    }

    /// Cost and assignment of a covering route, cheapest store per product
    /// with earliest-in-sequence tie-break.
    pub(crate) fn route_cost(&self, route: &[u16]) -> (Cents, CostAssignment) {
        let mut best: Vec<Option<(u16, Cents)>> = vec![None; self.quantities.len()];
        for &s in route {
            for &(pos, price) in &self.item_prices[s as usize] {
                if best[pos].map_or(true, |(_, bc)| price < bc) {
                    best[pos] = Some((s, price));
                }
            }
        }
        let mut total = 0;
        let mut per_product = std::collections::BTreeMap::new();
        for (pos, choice) in best.iter().enumerate() {
            if let Some((s, price)) = choice {
                total += price * self.quantities[pos] as u64;
                per_product.insert(pos as u32, (*s as u32, *price));
            }
        }
        (total, CostAssignment { per_product })
    }

    /// Rewrites a pruned-index assignment onto catalog product and store
    /// indices.
    fn lift_assignment(&self, a: &CostAssignment, list_products: &[Option<u32>]) -> CostAssignment {
        let per_product = a
            .per_product
            .iter()
            .filter_map(|(&pos, &(s, c))| {
                list_products[pos as usize].map(|pid| (pid, (self.stores[s as usize], c)))
            })
            .collect();
        CostAssignment { per_product }
    }
}

/// Build the per-origin detour rankings for a query.
pub fn build_detour_rankings(view: &PrunedView) -> DetourRankings {
    let n = view.stores.len();
    let from_shopper = DetourRanking::build((0..n as u16).map(|s| (view.detour(None, s), s)));
    let from_store = (0..n as u16)
        .map(|o| DetourRanking::build((0..n as u16).map(|s| (view.detour(Some(o), s), s))))
        .collect();
    DetourRankings {
        from_shopper,
        from_store,
    }
}

/// Shopping time of the minimum-cost store set under the best visiting
/// order found: exact over all permutations up to `exact_limit` stores,
/// nearest-neighbor order beyond. Returns the time and the order.
pub fn st_of_min_cost_route(
    ctx: &SolveContext,
    qt: &QueryTimes,
    stores: &[u32],
    exact_limit: usize,
) -> (TravelTime, Vec<u32>) {
    if stores.is_empty() {
        return (qt.shopper_to_delivery, Vec::new());
    }
    let time_of = |order: &[u32]| -> TravelTime {
        let mut t = qt.from_shopper[order[0] as usize];
        for w in order.windows(2) {
            t = tt_add(t, ctx.store_pair_time(w[0], w[1]));
        }
        tt_add(t, qt.from_delivery[*order.last().unwrap() as usize])
    };
    if stores.len() <= exact_limit {
        let mut best_t = INF_TT;
        let mut best: Vec<u32> = Vec::new();
        permute(&mut stores.to_vec(), 0, &mut |order| {
            let t = time_of(order);
            if t < best_t {
                best_t = t;
                best = order.to_vec();
            }
        });
        (best_t, best)
    } else {
        // nearest-neighbor from the shopper
        let mut left: Vec<u32> = stores.to_vec();
        let mut order = Vec::with_capacity(stores.len());
        let mut at: Option<u32> = None;
        while !left.is_empty() {
            let (i, _) = left
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let t = match at {
                        Some(prev) => ctx.store_pair_time(prev, s),
                        None => qt.from_shopper[s as usize],
                    };
                    (i, t)
                })
                .min_by_key(|&(_, t)| t)
                .unwrap();
            let s = left.remove(i);
            order.push(s);
            at = Some(s);
        }
        (time_of(&order), order)
    }
}

fn permute(items: &mut Vec<u32>, k: usize, visit: &mut impl FnMut(&[u32])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Candidate {
    st: TravelTime,
    stores: Vec<u16>,
    ranks: Vec<u32>,
    covered: u128,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.st, self.stores.len(), &self.stores).cmp(&(
            other.st,
            other.stores.len(),
            &other.stores,
        ))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact linear skyline for a query.
pub fn solve_bsl(
    ctx: &SolveContext,
    query: &PsdQuery,
    config: &BslConfig,
) -> Result<BslOutput, SolveError> {
    let start = Instant::now();
    let list = query.shopping_list()?;
    let (sc_stores, _, sc_min) = min_cost_assignment(ctx.catalog, ctx.index, &list)?;
    let pruned = ctx.catalog.prune_stores(&list);
    let qt = ctx.query_times(query, &pruned)?;

    let mut stats = BslStats {
        pop_st_monotone: true,
        ..Default::default()
    };
    let mut skyline = LinearSkyline::new();

    if list.is_empty() {
        // degenerate query: the direct trip is the single answer
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
        return Ok(BslOutput {
            skyline,
            stats,
            st_upper_bound: qt.shopper_to_delivery,
            min_cost: 0,
        });
    }

    let sc_store_vec: Vec<u32> = sc_stores.iter().copied().collect();
    let (st_upper, _) = st_of_min_cost_route(ctx, &qt, &sc_store_vec, config.exact_order_limit);
    if st_upper == INF_TT {
        return Err(SolveError::UnreachableDelivery);
    }

    let view = PrunedView::build(ctx, &qt, &pruned, &list)?;
    let rankings = build_detour_rankings(&view);
    let list_products: Vec<Option<u32>> = list
        .resolved(ctx.catalog)
        .iter()
        .map(|&(p, _)| p)
        .collect();

    let mut heap: BinaryHeap<Reverse<Candidate>> = BinaryHeap::new();
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    if let Some((rank, s, d)) = rankings.from_shopper.min_detour(&[]) {
        if d <= st_upper {
            let c = Candidate {
                st: d,
                stores: vec![s],
                ranks: vec![rank],
                covered: view.masks[s as usize],
            };
            seen.insert(c.stores.clone());
            heap.push(Reverse(c));
            stats.pushed += 1;
        }
    }

    let mut sc_upper: Cents = Cents::MAX;
    let mut last_pop_st: TravelTime = 0;

    while let Some(Reverse(cand)) = heap.pop() {
        if stats.popped >= config.max_popped {
            stats.capped = true;
            break;
        }
        stats.popped += 1;
        if cand.st < last_pop_st {
            stats.pop_st_monotone = false;
        }
        last_pop_st = cand.st;

        if cand.covered == view.full_mask {
            let (sc, assignment) = view.route_cost(&cand.stores);
            if sc < sc_upper {
                let route = ShoppingRoute {
                    stores: cand
                        .stores
                        .iter()
                        .map(|&s| view.stores[s as usize])
                        .collect(),
                    st: cand.st,
                    sc,
                    assignment: view.lift_assignment(&assignment, &list_products),
                    detour_ranks: cand.ranks.clone(),
                };
                let out = skyline.try_insert(CostVector::new(cand.st, sc), route)?;
                debug_assert!(out.accepted);
                stats.evicted += out.evicted as u64;
                sc_upper = sc;
                if sc_upper == sc_min {
                    stats.terminated_early = true;
                    break;
                }
            }
        }

        let last = *cand.stores.last().unwrap();

        // theta^s: append the minimum-detour store after the tail
        if let Some((rank, s, _)) = rankings.from_store[last as usize].min_detour(&cand.stores) {
            let st = tt_add(
                cand.st - view.from_delivery[last as usize],
                view.detour(Some(last), s),
            );
            if st <= st_upper {
                let mut stores = cand.stores.clone();
                stores.push(s);
                if seen.insert(stores.clone()) {
                    let mut ranks = cand.ranks.clone();
                    ranks.push(rank);
                    let covered = cand.covered | view.masks[s as usize];
                    heap.push(Reverse(Candidate {
                        st,
                        stores,
                        ranks,
                        covered,
                    }));
                    stats.pushed += 1;
                }
            }
        }

        // theta^p: bump the tail to the next detour rank from its origin
        let prefix = &cand.stores[..cand.stores.len() - 1];
        let origin = prefix.last().copied();
        let ranking = match origin {
            Some(o) => &rankings.from_store[o as usize],
            None => &rankings.from_shopper,
        };
        let tail_rank = *cand.ranks.last().unwrap();
        if let Some((rank, s, _)) = ranking.next_min_detour(tail_rank, prefix) {
            let st = tt_add(
                cand.st - view.detour(origin, last),
                view.detour(origin, s),
            );
            if st <= st_upper {
                let mut stores = prefix.to_vec();
                stores.push(s);
                if seen.insert(stores.clone()) {
                    let mut ranks = cand.ranks.clone();
                    *ranks.last_mut().unwrap() = rank;
                    let covered = prefix
                        .iter()
                        .fold(0u128, |m, &p| m | view.masks[p as usize])
                        | view.masks[s as usize];
                    heap.push(Reverse(Candidate {
                        st,
                        stores,
                        ranks,
                        covered,
                    }));
                    stats.pushed += 1;
                }
            }
        }
    }

    stats.wall_ms = start.elapsed().as_millis() as u64;
    Ok(BslOutput {
        skyline,
        stats,
        st_upper_bound: st_upper,
        min_cost: sc_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::Scenario;
    use crate::testfix::{abcd_list, worked_example_scenario};

    fn abcd_query() -> PsdQuery {
        PsdQuery::new(0, 6, &abcd_list())
    }

    fn view_for(scenario: &Scenario, query: &PsdQuery) -> (PrunedView, QueryTimes, Vec<u32>) {
        let ctx = scenario.ctx();
        let list = query.shopping_list().unwrap();
        let pruned = ctx.catalog.prune_stores(&list);
        let qt = ctx.query_times(query, &pruned).unwrap();
        let view = PrunedView::build(&ctx, &qt, &pruned, &list).unwrap();
        (view, qt, pruned)
    }

    #[test]
    fn worked_example_route_times() {
        let scenario = worked_example_scenario();
        let ctx = scenario.ctx();
        let query = abcd_query();
        let list = query.shopping_list().unwrap();
        let pruned = ctx.catalog.prune_stores(&list);
        let qt = ctx.query_times(&query, &pruned).unwrap();
        let route = |ids: &[&str]| -> Vec<u32> {
            ids.iter()
                .map(|id| ctx.catalog.store_index(id).unwrap())
                .collect()
        };
        let cases = [
            (vec!["s1", "s2"], 28_000),
            (vec!["s1", "s3"], 38_000),
            (vec!["s1", "s4"], 41_000),
            (vec!["s5", "s2"], 47_000),
            (vec!["s5", "s3"], 48_000),
            (vec!["s5", "s4"], 36_000),
        ];
        for (ids, want) in cases {
            assert_eq!(ctx.route_time(&qt, &route(&ids)), want, "{ids:?}");
        }
    }

    #[test]
    fn singleton_ranking() {
        let scenario = worked_example_scenario();
        let query = PsdQuery::new(
            0,
            6,
            &crate::catalog::ShoppingList::new(vec![("A".into(), 1)]).unwrap(),
        );
        let (view, _, pruned) = view_for(&scenario, &query);
        // only s1 and s5 sell A
        assert_eq!(pruned.len(), 2);
        let rankings = build_detour_rankings(&view);
        assert_eq!(rankings.from_shopper.len(), 2);
        for r in &rankings.from_store {
            assert_eq!(r.len(), 2);
        }
    }

    #[test]
    fn tie_broken_by_store_order() {
        // path v0 - s@1 - s@2 - v3, unit edges: both stores detour equally
        let net = crate::network::RoadNetwork::from_edges(&[
            (0, 1, 1000),
            (1, 2, 1000),
            (2, 3, 1000),
        ])
        .unwrap();
        let catalog = crate::catalog::Catalog::from_rows(
            [("a", 1u64, "P", 100u64), ("b", 2, "P", 100)]
                .iter()
                .map(|&(s, v, p, c)| crate::catalog::CatalogRow {
                    store_id: s.into(),
                    vertex: v,
                    product_id: p.into(),
                    price_cents: c,
                })
                .collect(),
        )
        .unwrap();
        let scenario = Scenario::assemble(net, catalog).unwrap();
        let list = crate::catalog::ShoppingList::new(vec![("P".into(), 1)]).unwrap();
        let query = PsdQuery::new(0, 3, &list);
        let (view, _, _) = view_for(&scenario, &query);
        let rankings = build_detour_rankings(&view);
        // detour(a) = 1 + 2 = 3, detour(b) = 2 + 1 = 3; tie -> store a first
        let order: Vec<u16> = rankings
            .from_shopper
            .entries
            .iter()
            .map(|&(_, s)| s)
            .collect();
        assert_eq!(order, vec![0, 1]);
    }

    #[test]
    fn min_and_next_min_detour() {
        let scenario = worked_example_scenario();
        let (view, _, _) = view_for(&scenario, &abcd_query());
        let rankings = build_detour_rankings(&view);
        let (r1, first, _) = rankings.from_shopper.min_detour(&[]).unwrap();
        assert_eq!(r1, 1);
        let (r2, second, _) = rankings.from_shopper.min_detour(&[first]).unwrap();
        assert!(r2 > 1);
        assert_ne!(first, second);
        let (r2b, second_b, _) = rankings.from_shopper.next_min_detour(1, &[]).unwrap();
        assert_eq!((r2, second), (r2b, second_b));
        // exhausting the ranking yields none
        let n = rankings.from_shopper.len() as u32;
        assert!(rankings.from_shopper.next_min_detour(n, &[]).is_none());
        let all: Vec<u16> = (0..n as u16).collect();
        assert!(rankings.from_shopper.min_detour(&all).is_none());
    }

    #[test]
    fn rankings_match_direct_sort_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        // random 6x6 grid with 8 stores all selling the product
        let n = 6u64;
        let mut edges = Vec::new();
        for r in 0..n {
            for c in 0..n {
                let v = r * n + c;
                if c + 1 < n {
                    edges.push((v, v + 1, rng.random_range(500..4000)));
                }
                if r + 1 < n {
                    edges.push((v, v + n, rng.random_range(500..4000)));
                }
            }
        }
        let net = crate::network::RoadNetwork::from_edges(&edges).unwrap();
        let verts = [1u64, 5, 9, 14, 20, 23, 28, 33];
        let rows = verts
            .iter()
            .enumerate()
            .map(|(i, &v)| crate::catalog::CatalogRow {
                store_id: format!("s{i}"),
                vertex: v,
                product_id: "P".into(),
                price_cents: 100 + i as u64,
            })
            .collect();
        let catalog = crate::catalog::Catalog::from_rows(rows).unwrap();
        let scenario = Scenario::assemble(net, catalog).unwrap();
        let list = crate::catalog::ShoppingList::new(vec![("P".into(), 1)]).unwrap();
        let query = PsdQuery::new(0, 35, &list);
        let (view, _, _) = view_for(&scenario, &query);
        let rankings = build_detour_rankings(&view);
        for (o, ranking) in rankings.from_store.iter().enumerate() {
            let mut expect: Vec<(u64, u16)> = (0..verts.len() as u16)
                .map(|s| {
                    (
                        view.pair(o as u16, s) + view.from_delivery[s as usize],
                        s,
                    )
                })
                .collect();
            expect.sort_unstable();
            assert_eq!(ranking.entries, expect);
        }
    }

    #[test]
    fn worked_example_exact_skyline() {
        let scenario = worked_example_scenario();
        let ctx = scenario.ctx();
        let out = solve_bsl(&ctx, &abcd_query(), &BslConfig::default()).unwrap();
        let vectors = out.skyline.vectors();
        assert_eq!(
            vectors,
            vec![
                CostVector::new(28_000, 3300),
                CostVector::new(38_000, 2300),
                CostVector::new(48_000, 2100),
            ]
        );
        assert!(out.stats.pop_st_monotone);
        assert!(out.stats.terminated_early);
        assert_eq!(out.min_cost, 2100);
        // first skyline entry is the minimum-shopping-time route
        let first = &out.skyline.entries()[0].1;
        let ids: Vec<&str> = first
            .stores
            .iter()
            .map(|&s| ctx.catalog.store(s).id.as_str())
            .collect();
        assert_eq!(ids, vec!["s1", "s2"]);
    }

    #[test]
    fn single_store_catalog() {
        let net = crate::network::RoadNetwork::from_edges(&[(0, 1, 2000), (1, 2, 3000)]).unwrap();
        let catalog = crate::catalog::Catalog::from_rows(vec![crate::catalog::CatalogRow {
            store_id: "only".into(),
            vertex: 1,
            product_id: "P".into(),
            price_cents: 450,
        }])
        .unwrap();
        let scenario = Scenario::assemble(net, catalog).unwrap();
        let list = crate::catalog::ShoppingList::new(vec![("P".into(), 2)]).unwrap();
        let query = PsdQuery::new(0, 2, &list);
        let out = solve_bsl(&scenario.ctx(), &query, &BslConfig::default()).unwrap();
        assert_eq!(out.skyline.len(), 1);
        assert_eq!(
            out.skyline.vectors()[0],
            CostVector::new(5000, 900)
        );
    }

    #[test]
    fn infeasible_list_errors() {
        let scenario = worked_example_scenario();
        let list = crate::catalog::ShoppingList::new(vec![("Z".into(), 1)]).unwrap();
        let query = PsdQuery::new(0, 6, &list);
        let err = solve_bsl(&scenario.ctx(), &query, &BslConfig::default()).unwrap_err();
        assert!(matches!(
            err,
            SolveError::Catalog(crate::catalog::CatalogError::InfeasibleList { .. })
        ));
    }

    #[test]
    fn st_upper_bound_of_min_cost_set() {
        let scenario = worked_example_scenario();
        let ctx = scenario.ctx();
        let query = abcd_query();
        let list = query.shopping_list().unwrap();
        let pruned = ctx.catalog.prune_stores(&list);
        let qt = ctx.query_times(&query, &pruned).unwrap();
        let (stores, _, _) =
            min_cost_assignment(ctx.catalog, ctx.index, &list).unwrap();
        let set: Vec<u32> = stores.iter().copied().collect();
        let (st, order) = st_of_min_cost_route(&ctx, &qt, &set, 8);
        assert_eq!(st, 48_000);
        let ids: Vec<&str> = order
            .iter()
            .map(|&s| ctx.catalog.store(s).id.as_str())
            .collect();
        assert_eq!(ids, vec!["s5", "s3"]);
    }

    #[test]
    fn st_of_singleton_set_is_forced() {
        let scenario = worked_example_scenario();
        let ctx = scenario.ctx();
        let query = abcd_query();
        let list = query.shopping_list().unwrap();
        let pruned = ctx.catalog.prune_stores(&list);
        let qt = ctx.query_times(&query, &pruned).unwrap();
        let s1 = ctx.catalog.store_index("s1").unwrap();
        let (st, _) = st_of_min_cost_route(&ctx, &qt, &[s1], 8);
        assert_eq!(st, 10_000 + 18_000);
    }

    #[test]
    fn exact_order_matches_permutation_oracle() {
        let scenario = worked_example_scenario();
        let ctx = scenario.ctx();
        let query = abcd_query();
        let list = query.shopping_list().unwrap();
        let pruned = ctx.catalog.prune_stores(&list);
        let qt = ctx.query_times(&query, &pruned).unwrap();
        let set: Vec<u32> = (0..5).collect();
        let (st, _) = st_of_min_cost_route(&ctx, &qt, &set, 8);
        // brute check over all 120 orders
        let mut best = INF_TT;
        permute(&mut set.clone(), 0, &mut |order| {
            let mut t = qt.from_shopper[order[0] as usize];
            for w in order.windows(2) {
                t = tt_add(t, ctx.store_pair_time(w[0], w[1]));
            }
            t = tt_add(t, qt.from_delivery[*order.last().unwrap() as usize]);
            if t < best {
                best = t;
            }
        });
        assert_eq!(st, best);
    }
}
