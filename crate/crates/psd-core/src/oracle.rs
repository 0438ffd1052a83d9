//! Brute-force ground truth for small instances.
//!
//! Everything here is deliberately written from the definitions --
//! exhaustive subset/permutation enumeration, pairwise domination checks,
//! pairwise segment checks -- and shares no logic with the solvers'
//! generation schemes. It is the reference the solvers are tested against.

use thiserror::Error;

use crate::catalog::Cents;
use crate::network::{tt_add, TravelTime, INF_TT};
use crate::query::{PsdQuery, SolveContext, SolveError};
use crate::skyline::{conventionally_dominates, CostVector};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance has {got} stores after pruning; oracle refuses above {limit}")]
    TooLarge { got: usize, limit: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Exhaustive enumeration result for one query.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Every feasible ordering with finite shopping time.
    pub routes: Vec<(Vec<u32>, CostVector)>,
    pub conventional: Vec<CostVector>,
    pub linear: Vec<CostVector>,
}

/// Conventional skyline of a vector multiset: distinct vectors dominated by
/// no other, ascending by shopping time.
pub fn conventional_skyline_of(vectors: &[CostVector]) -> Vec<CostVector> {
    let mut distinct = vectors.to_vec();
    distinct.sort();
    distinct.dedup();
    let mut out: Vec<CostVector> = distinct
        .iter()
        .filter(|&&v| {
            !distinct
                .iter()
                .any(|&u| u != v && conventionally_dominates(u, v))
        })
        .copied()
        .collect();
    out.sort();
    out
}

/// Linear skyline of a vector multiset: conventional skyline members that
/// lie strictly below every segment between two other members.
pub fn linear_skyline_of(vectors: &[CostVector]) -> Vec<CostVector> {
    let cs = conventional_skyline_of(vectors);
    cs.iter()
        .filter(|&&v| {
            !cs.iter().any(|&a| {
                cs.iter().any(|&b| {
                    a != v
                        && b != v
                        && a.st <= v.st
                        && v.st <= b.st
                        && on_or_above_segment(a, v, b)
                })
            })
        })
        .copied()
        .collect()
}

fn on_or_above_segment(a: CostVector, v: CostVector, b: CostVector) -> bool {
    // (v.sc - a.sc) * (b.st - a.st) >= (v.st - a.st) * (b.sc - a.sc)
    let lhs = (v.sc as i128 - a.sc as i128) * (b.st as i128 - a.st as i128);
    let rhs = (v.st as i128 - a.st as i128) * (b.sc as i128 - a.sc as i128);
    lhs >= rhs
}

/// Enumerate every ordering of every feasible store subset and derive the
/// exact skylines. Refuses instances with more than `max_stores` stores
/// after pruning.
pub fn brute_force_skylines(
    ctx: &SolveContext,
    query: &PsdQuery,
    max_stores: usize,
) -> Result<OracleResult, OracleError> {
    let list = query.shopping_list().map_err(SolveError::from)?;

    // sellers of at least one listed product, by assortment scan
    let mut wanted = Vec::new();
    for (name, _) in list.items() {
        if let Some(p) = ctx.catalog.product_index(name) {
            wanted.push(p);
        }
    }
    let stores: Vec<u32> = (0..ctx.catalog.store_count() as u32)
        .filter(|&s| {
            let a = &ctx.catalog.store(s).assortment;
            wanted.iter().any(|p| a.contains_key(p))
        })
        .collect();
    if stores.len() > max_stores {
        return Err(OracleError::TooLarge {
            got: stores.len(),
            limit: max_stores,
        });
    }

    let qt = ctx.query_times(query, &stores)?;
    let items: Vec<(u32, u32)> = list
        .items()
        .iter()
        .map(|(name, q)| (ctx.catalog.product_index(name).unwrap_or(u32::MAX), *q))
        .collect();

    let n = stores.len();
    let mut routes: Vec<(Vec<u32>, CostVector)> = Vec::new();
    for subset_bits in 1u32..(1 << n) {
        let subset: Vec<u32> = (0..n)
            .filter(|&i| subset_bits & (1 << i) != 0)
            .map(|i| stores[i])
            .collect();
        let Some(sc) = subset_cost(ctx, &subset, &items) else {
            continue;
        };
        for perm in permutations(&subset) {
            let st = ordering_time(ctx, &qt, &perm);
            if st != INF_TT {
                routes.push((perm, CostVector::new(st, sc)));
            }
        }
    }
    let vectors: Vec<CostVector> = routes.iter().map(|(_, v)| *v).collect();
    let conventional = conventional_skyline_of(&vectors);
    let linear = linear_skyline_of(&vectors);
    Ok(OracleResult {
        routes,
        conventional,
        linear,
    })
}

/// Cost of buying every listed product at its cheapest subset store;
/// `None` when the subset misses a product.
fn subset_cost(ctx: &SolveContext, subset: &[u32], items: &[(u32, u32)]) -> Option<Cents> {
    let mut total: Cents = 0;
    for &(p, q) in items {
        let cheapest = subset
            .iter()
            .filter_map(|&s| ctx.catalog.store(s).assortment.get(&p))
            .min()?;
        total += cheapest * q as u64;
    }
    Some(total)
}

fn ordering_time(ctx: &SolveContext, qt: &crate::query::QueryTimes, perm: &[u32]) -> TravelTime {
    let mut t = qt.from_shopper[perm[0] as usize];
    for w in perm.windows(2) {
        t = tt_add(t, ctx.store_pair_time(w[0], w[1]));
    }
    tt_add(t, qt.from_delivery[*perm.last().unwrap() as usize])
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Grid-sampling estimate of the non-dominated area of a skyline within its
/// own bounding box. Converges to the exact staircase area as the
/// resolution grows.
pub fn grid_area(skyline: &[CostVector], resolution: usize) -> f64 {
    assert!(!skyline.is_empty(), "grid_area needs a nonempty skyline");
    let mut entries = skyline.to_vec();
    entries.sort();
    let x_max = entries.last().unwrap().st as f64;
    let y_max = entries.first().unwrap().sc as f64;
    if x_max == 0.0 || y_max == 0.0 {
        return 0.0;
    }
    let r = resolution as f64;
    let mut non_dominated_cells: u64 = 0;
    for i in 0..resolution {
        let x = (i as f64 + 0.5) * x_max / r;
        // a cell center is dominated iff some entry has st <= x and sc <= y
        let threshold = entries
            .iter()
            .filter(|e| (e.st as f64) <= x)
            .map(|e| e.sc as f64)
            .fold(f64::INFINITY, f64::min);
        let count = if threshold.is_infinite() {
            resolution
        } else {
            // centers y_j = (j + 0.5) * y_max / r below the threshold
            let boundary = threshold * r / y_max - 0.5;
            boundary.ceil().clamp(0.0, r) as usize
        };
        non_dominated_cells += count as u64;
    }
    (non_dominated_cells as f64 / (r * r)) * x_max * y_max
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(st: u64, sc: u64) -> CostVector {
        CostVector::new(st, sc)
    }

    #[test]
    fn conventional_skyline_keeps_incomparable_points() {
        let vs = [
            cv(28, 33),
            cv(38, 23),
            cv(41, 30),
            cv(47, 31),
            cv(48, 21),
            cv(36, 28),
        ];
        assert_eq!(
            conventional_skyline_of(&vs),
            vec![cv(28, 33), cv(36, 28), cv(38, 23), cv(48, 21)]
        );
    }

    #[test]
    fn linear_skyline_drops_point_above_chord() {
        let vs = [cv(28, 33), cv(36, 28), cv(38, 23), cv(48, 21)];
        assert_eq!(
            linear_skyline_of(&vs),
            vec![cv(28, 33), cv(38, 23), cv(48, 21)]
        );
    }

    #[test]
    fn linear_subset_of_conventional() {
        let vs = [cv(1, 9), cv(2, 7), cv(3, 6), cv(5, 2), cv(4, 8), cv(2, 2)];
        let cs = conventional_skyline_of(&vs);
        let ls = linear_skyline_of(&vs);
        assert!(ls.iter().all(|v| cs.contains(v)));
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(permutations(&[7]).len(), 1);
    }

    #[test]
    fn grid_area_singleton() {
        let area = grid_area(&[cv(2, 3)], 1000);
        assert!((area - 6.0).abs() < 0.01);
    }

    #[test]
    fn grid_area_degenerate_box() {
        assert_eq!(grid_area(&[cv(0, 5)], 500), 0.0);
        assert_eq!(grid_area(&[cv(5, 0)], 500), 0.0);
    }

    #[test]
    fn grid_area_three_point_staircase() {
        // box 4x4; the only dominated block with positive area is the
        // quadrant of (2,2), i.e. [2,4]x[2,4] = 4, so the region is 12.
        let area = grid_area(&[cv(1, 4), cv(2, 2), cv(4, 1)], 2000);
        let exact = 12.0;
        assert!((area - exact).abs() / exact < 0.005, "{area} vs {exact}");
    }
}
