//! Query representation and the shared per-query machinery: single-source
//! travel times, route time/cost arithmetic, and skyline serialization.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{
    shopping_cost, Catalog, CatalogError, Cents, CostAssignment, PriceTable, ProductIndex,
    ShoppingList,
};
use crate::network::{tt_add, NetworkError, RoadNetwork, TravelTime, TravelTimeTable, INF_TT};
use crate::skyline::{CostVector, LinearSkyline};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("delivery location unreachable from the minimum-cost store set")]
    UnreachableDelivery,
    #[error("shopping list has {0} products; at most 128 are supported per query")]
    ListTooLarge(usize),
    #[error("skyline contract violated: {0}")]
    Skyline(#[from] crate::skyline::SkylineError),
}

/// A Personal Shopper's Dilemma query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsdQuery {
    pub shopper_vertex: u64,
    pub delivery_vertex: u64,
    pub list: Vec<QueryItem>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QueryItem {
    pub product: String,
    pub qty: u32,
}

impl PsdQuery {
    pub fn new(shopper: u64, delivery: u64, list: &ShoppingList) -> Self {
        PsdQuery {
            shopper_vertex: shopper,
            delivery_vertex: delivery,
            list: list
                .items()
                .iter()
                .map(|(p, q)| QueryItem {
                    product: p.clone(),
                    qty: *q,
                })
                .collect(),
        }
    }

    pub fn shopping_list(&self) -> Result<ShoppingList, CatalogError> {
        ShoppingList::new(
            self.list
                .iter()
                .map(|i| (i.product.clone(), i.qty))
                .collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, std::io::Error> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_json(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?)
    }
}

/// Immutable per-scenario state shared by every solver and query.
pub struct SolveContext<'a> {
    pub network: &'a RoadNetwork,
    pub catalog: &'a Catalog,
    pub index: &'a ProductIndex,
    pub prices: &'a PriceTable,
    /// Store-pair fastest-path times over all catalog store vertices.
    pub table: &'a TravelTimeTable,
}

impl<'a> SolveContext<'a> {
    /// Fastest time between two stores by catalog index.
    pub fn store_pair_time(&self, a: u32, b: u32) -> TravelTime {
        let va = self.catalog.store(a).vertex;
        let vb = self.catalog.store(b).vertex;
        match (self.table.index_of(va), self.table.index_of(vb)) {
            (Some(ia), Some(ib)) => self.table.time_by_index(ia, ib),
            _ => INF_TT,
        }
    }

    /// Run the two single-source searches for a query over the pruned
    /// store set: shopper -> stores + delivery, delivery -> stores.
    pub fn query_times(
        &self,
        query: &PsdQuery,
        pruned: &[u32],
    ) -> Result<QueryTimes, SolveError> {
        let n = self.catalog.store_count();
        let mut from_shopper = vec![INF_TT; n];
        let mut from_delivery = vec![INF_TT; n];
        let store_vertices: Vec<u64> =
            pruned.iter().map(|&s| self.catalog.store(s).vertex).collect();

        let mut shopper_targets = store_vertices.clone();
        shopper_targets.push(query.delivery_vertex);
        let shopper_map = self
            .network
            .multi_target_fastest_paths(query.shopper_vertex, &shopper_targets)?;
        let delivery_map = self
            .network
            .multi_target_fastest_paths(query.delivery_vertex, &store_vertices)?;

        for (&s, &v) in pruned.iter().zip(&store_vertices) {
            from_shopper[s as usize] = shopper_map[&v];
            from_delivery[s as usize] = delivery_map[&v];
        }
        Ok(QueryTimes {
            from_shopper,
            from_delivery,
            shopper_to_delivery: shopper_map[&query.delivery_vertex],
        })
    }

    /// Shopping time of a store sequence for this query (Def. 2 shape):
    /// shopper -> first store -> ... -> last store -> delivery.
    pub fn route_time(&self, qt: &QueryTimes, route: &[u32]) -> TravelTime {
        let Some((&first, rest)) = route.split_first() else {
            return qt.shopper_to_delivery;
        };
        let mut t = qt.from_shopper[first as usize];
        let mut prev = first;
        for &s in rest {
            t = tt_add(t, self.store_pair_time(prev, s));
            prev = s;
        }
        tt_add(t, qt.from_delivery[prev as usize])
    }

    pub fn route_cost(
        &self,
        route: &[u32],
        list: &ShoppingList,
    ) -> Result<(Cents, CostAssignment), CatalogError> {
        shopping_cost(self.catalog, self.prices, route, list)
    }
}

/// Travel times produced by the two per-query searches, indexed by catalog
/// store index. Stores outside the pruned set hold the infinity sentinel.
#[derive(Debug, Clone)]
pub struct QueryTimes {
    pub from_shopper: Vec<TravelTime>,
    pub from_delivery: Vec<TravelTime>,
    pub shopper_to_delivery: TravelTime,
}

/// Owning bundle of everything a query needs: network, catalog, lookup
/// tables, and store-pair times. Build once, answer many queries.
pub struct Scenario {
    pub network: RoadNetwork,
    pub catalog: Catalog,
    pub index: ProductIndex,
    pub prices: PriceTable,
    pub table: TravelTimeTable,
}

impl Scenario {
    /// Validate the catalog against the network, build the lookup tables,
    /// and pre-compute the store-pair travel times.
    pub fn assemble(network: RoadNetwork, catalog: Catalog) -> Result<Self, SolveError> {
        catalog.validate_against(&network)?;
        let (index, prices) = crate::catalog::build_indexes(&catalog);
        let store_vertices: Vec<u64> = catalog.stores().iter().map(|s| s.vertex).collect();
        let table = network.precompute_store_pair_times(&store_vertices)?;
        Ok(Scenario {
            network,
            catalog,
            index,
            prices,
            table,
        })
    }

    /// Same as [`Scenario::assemble`] but reusing an existing store-pair
    /// table (for example one loaded from a cache sidecar).
    pub fn assemble_with_table(
        network: RoadNetwork,
        catalog: Catalog,
        table: TravelTimeTable,
    ) -> Result<Self, SolveError> {
        catalog.validate_against(&network)?;
        let (index, prices) = crate::catalog::build_indexes(&catalog);
        Ok(Scenario {
            network,
            catalog,
            index,
            prices,
            table,
        })
    }

    pub fn ctx(&self) -> SolveContext<'_> {
        SolveContext {
            network: &self.network,
            catalog: &self.catalog,
            index: &self.index,
            prices: &self.prices,
            table: &self.table,
        }
    }
}

/// A concrete shopping route with its derived quantities.
#[derive(Debug, Clone)]
pub struct ShoppingRoute {
    pub stores: Vec<u32>,
    pub st: TravelTime,
    pub sc: Cents,
    pub assignment: CostAssignment,
    /// Minimum-detour rank per position; empty for routes not produced by
    /// the rank-based generation scheme.
    pub detour_ranks: Vec<u32>,
}

impl ShoppingRoute {
    pub fn cost_vector(&self) -> CostVector {
        CostVector::new(self.st, self.sc)
    }
}

/// Serialized skyline entry: `{st_seconds, sc_cents, stores, assignment}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkylineEntryJson {
    pub st_seconds: f64,
    pub sc_cents: Cents,
    pub stores: Vec<String>,
    pub assignment: BTreeMap<String, String>,
}

pub fn skyline_to_json(
    skyline: &LinearSkyline<ShoppingRoute>,
    catalog: &Catalog,
) -> Vec<SkylineEntryJson> {
    skyline
        .entries()
        .iter()
        .map(|(v, route)| SkylineEntryJson {
            st_seconds: v.st as f64 / 1000.0,
            sc_cents: v.sc,
            stores: route
                .stores
                .iter()
                .map(|&s| catalog.store(s).id.clone())
                .collect(),
            assignment: route.assignment.named(catalog),
        })
        .collect()
}
