//! Seeded synthetic cities: grid networks, store placement over concentric
//! rings, size-dependent assortments, price distributions, and query
//! batches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{Catalog, CatalogRow, ShoppingList};
use crate::network::RoadNetwork;
use crate::query::{PsdQuery, Scenario};

#[derive(Debug, Error)]
pub enum DatagenError {
    #[error("config error: {0}")]
    Config(String),
    #[error("query generation failed: {0}")]
    Feasibility(String),
    #[error(transparent)]
    Catalog(#[from] crate::catalog::CatalogError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostDistribution {
    Rising,
    Normal,
    Declining,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeDistribution {
    Increasing,
    Random,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StoreSize {
    Small,
    Medium,
    Large,
}

impl StoreSize {
    /// Assortment fraction of the product universe.
    pub fn fraction(self) -> f64 {
        match self {
            StoreSize::Small => 0.25,
            StoreSize::Medium => 0.50,
            StoreSize::Large => 0.75,
        }
    }
}

/// One experiment cell. Defaults follow the standard configuration:
/// 25 stores, normal prices, random sizes, list size 10, capacity 8.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_cardinality")]
    pub store_cardinality: usize,
    #[serde(default = "default_cost")]
    pub cost_distribution: CostDistribution,
    #[serde(default = "default_size")]
    pub size_distribution: SizeDistribution,
    #[serde(default = "default_list_size")]
    pub list_size: usize,
    #[serde(default = "default_capacity")]
    pub leaf_capacity: usize,
    #[serde(default = "default_query_count")]
    pub query_count: usize,
    #[serde(default)]
    pub seed: u64,
    /// Side length of the synthetic grid network.
    #[serde(default = "default_grid")]
    pub grid_size: usize,
    #[serde(default = "default_universe")]
    pub product_universe: usize,
}

fn default_cardinality() -> usize {
    25
}
fn default_cost() -> CostDistribution {
    CostDistribution::Normal
}
fn default_size() -> SizeDistribution {
    SizeDistribution::Random
}
fn default_list_size() -> usize {
    10
}
fn default_capacity() -> usize {
    8
}
fn default_query_count() -> usize {
    100
}
fn default_grid() -> usize {
    20
}
fn default_universe() -> usize {
    1000
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            store_cardinality: default_cardinality(),
            cost_distribution: default_cost(),
            size_distribution: default_size(),
            list_size: default_list_size(),
            leaf_capacity: default_capacity(),
            query_count: default_query_count(),
            seed: 0,
            grid_size: default_grid(),
            product_universe: default_universe(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), DatagenError> {
        if self.store_cardinality < 1
            || self.list_size < 1
            || self.leaf_capacity < 1
            || self.query_count < 1
            || self.grid_size < 2
            || self.product_universe < 4
        {
            return Err(DatagenError::Config(
                "counts must be positive (grid >= 2, universe >= 4)".into(),
            ));
        }
        Ok(())
    }
}

/// Synthetic city: network, placed stores with sizes/rings, assortments.
#[derive(Debug, Clone)]
pub struct CityModel {
    pub network: RoadNetwork,
    pub center_vertex: u64,
    pub store_vertices: Vec<u64>,
    pub store_sizes: Vec<StoreSize>,
    /// 0 = inner, 1 = middle, 2 = outer.
    pub store_rings: Vec<u8>,
    /// Euclidean distance to the city center, per store.
    pub store_dist: Vec<f64>,
    /// Product indices into the universe, per store.
    pub assortments: Vec<Vec<u32>>,
    pub universe: Vec<String>,
}

/// Seeded grid network with jittered coordinates and perturbed weights.
/// An n-by-n grid has n^2 vertices and 2n(n-1) edges.
pub fn gen_grid_network(n: usize, seed: u64) -> RoadNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n64 = n as u64;
    let mut coords = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let x = c as f64 + rng.random_range(-0.2..0.2);
            let y = r as f64 + rng.random_range(-0.2..0.2);
            coords.push((r as u64 * n64 + c as u64, x, y));
        }
    }
    let coord_of = |v: u64| coords[v as usize];
    let mut edges = Vec::new();
    for r in 0..n64 {
        for c in 0..n64 {
            let v = r * n64 + c;
            let mut push = |a: u64, b: u64, rng: &mut ChaCha8Rng| {
                let (_, ax, ay) = coord_of(a);
                let (_, bx, by) = coord_of(b);
                let dist = ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt();
                // one grid unit takes about a minute to traverse
                let ms = (dist * 60_000.0 * rng.random_range(0.9..1.2)).round() as u64;
                edges.push((a, b, ms.max(1)));
            };
            if c + 1 < n64 {
                push(v, v + 1, &mut rng);
            }
            if r + 1 < n64 {
                push(v, v + n64, &mut rng);
            }
        }
    }
    let mut net = RoadNetwork::from_edges(&edges).expect("grid edges are valid");
    for (v, x, y) in coords {
        net.set_coord(v, x, y).unwrap();
    }
    net
}

/// Place stores, assign rings by distance terciles from the center vertex,
/// pick sizes per the distribution, and draw assortments.
pub fn gen_city(
    config: &ExperimentConfig,
    network: RoadNetwork,
    seed: u64,
) -> Result<CityModel, DatagenError> {
    config.validate()?;
    let vertex_ids = network.vertex_ids();
    if config.store_cardinality > vertex_ids.len() {
        return Err(DatagenError::Config(format!(
            "{} stores requested but the network has only {} vertices",
            config.store_cardinality,
            vertex_ids.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // center = vertex nearest the coordinate centroid
    let coords: Vec<(f64, f64)> = vertex_ids
        .iter()
        .map(|&v| network.coord(v).unwrap())
        .collect();
    let cx = coords.iter().map(|c| c.0).sum::<f64>() / coords.len() as f64;
    let cy = coords.iter().map(|c| c.1).sum::<f64>() / coords.len() as f64;
    let center_vertex = vertex_ids
        .iter()
        .zip(&coords)
        .min_by(|(_, a), (_, b)| {
            let da = (a.0 - cx).powi(2) + (a.1 - cy).powi(2);
            let db = (b.0 - cx).powi(2) + (b.1 - cy).powi(2);
            da.partial_cmp(&db).unwrap()
        })
        .map(|(&v, _)| v)
        .unwrap();
    let (ccx, ccy) = network.coord(center_vertex).unwrap();

    // uniform store placement without replacement
    let mut pool = vertex_ids.clone();
    let mut store_vertices = Vec::with_capacity(config.store_cardinality);
    for _ in 0..config.store_cardinality {
        let i = rng.random_range(0..pool.len());
        store_vertices.push(pool.swap_remove(i));
    }

    let store_dist: Vec<f64> = store_vertices
        .iter()
        .map(|&v| {
            let (x, y) = network.coord(v).unwrap();
            ((x - ccx).powi(2) + (y - ccy).powi(2)).sqrt()
        })
        .collect();

    // ring terciles by distance
    let k = config.store_cardinality;
    let per_ring = k.div_ceil(3);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| store_dist[a].partial_cmp(&store_dist[b]).unwrap());
    let mut store_rings = vec![0u8; k];
    for (pos, &s) in order.iter().enumerate() {
        store_rings[s] = (pos / per_ring).min(2) as u8;
    }

    let store_sizes: Vec<StoreSize> = (0..k)
        .map(|s| match config.size_distribution {
            SizeDistribution::Increasing => match store_rings[s] {
                0 => StoreSize::Small,
                1 => StoreSize::Medium,
                _ => StoreSize::Large,
            },
            SizeDistribution::Decreasing => match store_rings[s] {
                0 => StoreSize::Large,
                1 => StoreSize::Medium,
                _ => StoreSize::Small,
            },
            SizeDistribution::Random => match rng.random_range(0..3) {
                0 => StoreSize::Small,
                1 => StoreSize::Medium,
                _ => StoreSize::Large,
            },
        })
        .collect();

    let width = (config.product_universe as f64).log10().ceil().max(1.0) as usize;
    let universe: Vec<String> = (0..config.product_universe)
        .map(|i| format!("p{i:0width$}"))
        .collect();
    let assortments: Vec<Vec<u32>> = store_sizes
        .iter()
        .map(|size| {
            let count = ((config.product_universe as f64 * size.fraction()) as usize)
                .clamp(1, config.product_universe - 1);
            let mut pool: Vec<u32> = (0..config.product_universe as u32).collect();
            let mut chosen = Vec::with_capacity(count);
            for _ in 0..count {
                let i = rng.random_range(0..pool.len());
                chosen.push(pool.swap_remove(i));
            }
            chosen.sort_unstable();
            chosen
        })
        .collect();

    Ok(CityModel {
        network,
        center_vertex,
        store_vertices,
        store_sizes,
        store_rings,
        store_dist,
        assortments,
        universe,
    })
}

/// Price every (store, product) pair under the chosen distribution.
pub fn assign_prices(
    city: &CityModel,
    dist: CostDistribution,
    seed: u64,
) -> Result<Catalog, DatagenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = city.store_vertices.len();
    let width = (k as f64).log10().ceil().max(1.0) as usize + 1;
    let store_id = |s: usize| format!("s{s:0width$}");

    // sellers per product, in store order
    let mut sellers: Vec<Vec<usize>> = vec![Vec::new(); city.universe.len()];
    for (s, assortment) in city.assortments.iter().enumerate() {
        for &p in assortment {
            sellers[p as usize].push(s);
        }
    }

    let mut rows = Vec::new();
    for (p, sellers) in sellers.iter().enumerate() {
        if sellers.is_empty() {
            continue;
        }
        match dist {
            CostDistribution::Normal => {
                let mean = rng.random_range(5.0..15.0);
                let normal = Normal::new(mean, 2.0).unwrap();
                for &s in sellers {
                    let price = normal.sample(&mut rng).max(0.50);
                    rows.push(row(&city.universe[p], store_id(s), city.store_vertices[s], price));
                }
            }
            CostDistribution::Rising | CostDistribution::Declining => {
                let a = rng.random_range(5.0..15.0);
                let b = rng.random_range(5.0..15.0);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let d_near = sellers
                    .iter()
                    .map(|&s| city.store_dist[s])
                    .fold(f64::INFINITY, f64::min);
                let d_far = sellers
                    .iter()
                    .map(|&s| city.store_dist[s])
                    .fold(f64::NEG_INFINITY, f64::max);
                for &s in sellers {
                    let t = if d_far > d_near {
                        (city.store_dist[s] - d_near) / (d_far - d_near)
                    } else {
                        0.0
                    };
                    let price = match dist {
                        CostDistribution::Rising => lo + t * (hi - lo),
                        _ => hi - t * (hi - lo),
                    };
                    rows.push(row(&city.universe[p], store_id(s), city.store_vertices[s], price));
                }
            }
        }
    }
    Ok(Catalog::from_rows(rows)?)
}

fn row(product: &str, store_id: String, vertex: u64, price_dollars: f64) -> CatalogRow {
    let cents = ((price_dollars * 100.0).round() as u64).max(50);
    CatalogRow {
        store_id,
        vertex,
        product_id: product.to_string(),
        price_cents: cents,
    }
}

/// Seed-deterministic query batch: random distinct shopper/delivery
/// vertices and a feasible list of distinct products per query.
pub fn gen_queries(
    city: &CityModel,
    catalog: &Catalog,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<Vec<PsdQuery>, DatagenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertex_ids = city.network.vertex_ids();
    let mut queries = Vec::with_capacity(config.query_count);
    if config.list_size > city.universe.len() {
        return Err(DatagenError::Config(
            "list size exceeds the product universe".into(),
        ));
    }
    for q in 0..config.query_count {
        let mut attempts = 0;
        let list = loop {
            attempts += 1;
            if attempts > 500 {
                return Err(DatagenError::Feasibility(format!(
                    "query {q}: no feasible list after 500 attempts"
                )));
            }
            let mut pool: Vec<u32> = (0..city.universe.len() as u32).collect();
            let mut items = Vec::with_capacity(config.list_size);
            for _ in 0..config.list_size {
                let i = rng.random_range(0..pool.len());
                items.push(pool.swap_remove(i));
            }
            if items
                .iter()
                .all(|&p| catalog.product_index(&city.universe[p as usize]).is_some())
            {
                break ShoppingList::new(
                    items
                        .into_iter()
                        .map(|p| (city.universe[p as usize].clone(), 1))
                        .collect(),
                )?;
            }
        };
        let shopper = vertex_ids[rng.random_range(0..vertex_ids.len())];
        let delivery = loop {
            let v = vertex_ids[rng.random_range(0..vertex_ids.len())];
            if v != shopper {
                break v;
            }
        };
        queries.push(PsdQuery::new(shopper, delivery, &list));
    }
    Ok(queries)
}

/// A fully generated experiment world.
pub struct World {
    pub city: CityModel,
    pub catalog: Catalog,
    pub queries: Vec<PsdQuery>,
}

/// Generate network, city, prices, and queries from one config. Phase
/// seeds derive from `config.seed`.
pub fn build_world(config: &ExperimentConfig) -> Result<World, DatagenError> {
    config.validate()?;
    let network = gen_grid_network(config.grid_size, config.seed);
    let city = gen_city(config, network, config.seed.wrapping_add(1))?;
    let catalog = assign_prices(&city, config.cost_distribution, config.seed.wrapping_add(2))?;
    let queries = gen_queries(&city, &catalog, config, config.seed.wrapping_add(3))?;
    Ok(World {
        city,
        catalog,
        queries,
    })
}

impl World {
    pub fn into_scenario(self) -> Result<(Scenario, Vec<PsdQuery>), crate::query::SolveError> {
        let scenario = Scenario::assemble(self.city.network, self.catalog)?;
        Ok((scenario, self.queries))
    }
}
