//! Stores, products, prices, shopping lists, and the lookup tables the
//! solvers consume.
//!
//! Money is integer minor units (cents); decimal prices in input files are
//! converted exactly on load. Store indices follow the lexicographic order
//! of store ids, which fixes every price tie-break.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use thiserror::Error;

use crate::network::RoadNetwork;

/// Money in integer cents.
pub type Cents = u64;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("invalid shopping list: {0}")]
    InvalidList(String),
    #[error("products sold nowhere: {missing:?}")]
    InfeasibleList { missing: Vec<String> },
    #[error("route misses products: {missing:?}")]
    InfeasibleRoute { missing: Vec<String> },
    #[error("store {store} references vertex {vertex} absent from the network")]
    UnknownVertex { store: String, vertex: u64 },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A store: location vertex plus an assortment of unit prices.
#[derive(Debug, Clone)]
pub struct Store {
    pub id: String,
    pub vertex: u64,
    /// product index -> unit price in cents
    pub assortment: BTreeMap<u32, Cents>,
}

/// Immutable catalog of stores with interned product ids.
#[derive(Debug, Clone)]
pub struct Catalog {
    stores: Vec<Store>,
    store_by_id: HashMap<String, u32>,
    products: Vec<String>,
    product_by_id: HashMap<String, u32>,
}

/// One (store, product, price) record prior to interning.
#[derive(Debug, Clone)]
pub struct CatalogRow {
    pub store_id: String,
    pub vertex: u64,
    pub product_id: String,
    pub price_cents: Cents,
}

impl Catalog {
    /// Build a catalog from rows. Stores are ordered by id, products by
    /// first-seen order after sorting rows, so the result is independent of
    /// input row order.
    pub fn from_rows(rows: Vec<CatalogRow>) -> Result<Self, CatalogError> {
        let mut rows = rows;
        rows.sort_by(|a, b| {
            (&a.store_id, &a.product_id).cmp(&(&b.store_id, &b.product_id))
        });
        let mut products: Vec<String> = rows.iter().map(|r| r.product_id.clone()).collect();
        products.sort();
        products.dedup();
        let product_by_id: HashMap<String, u32> = products
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();

        let mut stores: Vec<Store> = Vec::new();
        let mut store_by_id: HashMap<String, u32> = HashMap::new();
        for row in rows {
            if row.price_cents == 0 {
                return Err(CatalogError::Parse {
                    path: String::new(),
                    line: 0,
                    msg: format!(
                        "price for product {} at store {} must be positive",
                        row.product_id, row.store_id
                    ),
                });
            }
            let pid = product_by_id[&row.product_id];
            match store_by_id.get(&row.store_id) {
                Some(&si) => {
                    let store = &mut stores[si as usize];
                    if store.vertex != row.vertex {
                        return Err(CatalogError::Parse {
                            path: String::new(),
                            line: 0,
                            msg: format!("store {} listed at two vertices", row.store_id),
                        });
                    }
                    if store.assortment.insert(pid, row.price_cents).is_some() {
                        return Err(CatalogError::Parse {
                            path: String::new(),
                            line: 0,
                            msg: format!(
                                "duplicate (store, product) row: ({}, {})",
                                row.store_id, row.product_id
                            ),
                        });
                    }
                }
                None => {
                    let si = stores.len() as u32;
                    store_by_id.insert(row.store_id.clone(), si);
                    stores.push(Store {
                        id: row.store_id,
                        vertex: row.vertex,
                        assortment: BTreeMap::from([(pid, row.price_cents)]),
                    });
                }
            }
        }
        Ok(Catalog {
            stores,
            store_by_id,
            products,
            product_by_id,
        })
    }

    pub fn store_count(&self) -> usize {
        self.stores.len()
    }

    pub fn stores(&self) -> &[Store] {
        &self.stores
    }

    pub fn store(&self, idx: u32) -> &Store {
        &self.stores[idx as usize]
    }

    pub fn store_index(&self, id: &str) -> Option<u32> {
        self.store_by_id.get(id).copied()
    }

    pub fn product_count(&self) -> usize {
        self.products.len()
    }

    pub fn product_name(&self, idx: u32) -> &str {
        &self.products[idx as usize]
    }

    pub fn product_index(&self, id: &str) -> Option<u32> {
        self.product_by_id.get(id).copied()
    }

    pub fn validate_against(&self, net: &RoadNetwork) -> Result<(), CatalogError> {
        for s in &self.stores {
            if !net.contains(s.vertex) {
                return Err(CatalogError::UnknownVertex {
                    store: s.id.clone(),
                    vertex: s.vertex,
                });
            }
        }
        Ok(())
    }

    /// Stores selling at least one product of the list, ascending by index.
    pub fn prune_stores(&self, list: &ShoppingList) -> Vec<u32> {
        let wanted: HashSet<u32> = list
            .items
            .iter()
            .filter_map(|(p, _)| self.product_index(p))
            .collect();
        self.stores
            .iter()
            .enumerate()
            .filter(|(_, s)| s.assortment.keys().any(|p| wanted.contains(p)))
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// True iff every listed product is sold by at least one store of the
    /// route.
    pub fn satisfies_list(&self, list: &ShoppingList, route: &[u32]) -> bool {
        list.items.iter().all(|(p, _)| {
            match self.product_index(p) {
                Some(pid) => route
                    .iter()
                    .any(|&s| self.stores[s as usize].assortment.contains_key(&pid)),
                None => false,
            }
        })
    }

    /// Sorted canonical rendering used for cache keys.
    pub fn canonical_string(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        for store in &self.stores {
            let _ = write!(s, "s {} {}", store.id, store.vertex);
            for (&p, &c) in &store.assortment {
                let _ = write!(s, " {}={}", self.products[p as usize], c);
            }
            s.push('\n');
        }
        s
    }
}

/// Per-product list of `(store, price)` ascending by price, ties by store
/// index (lexicographic store id).
#[derive(Debug, Clone)]
pub struct ProductIndex {
    per_product: Vec<Vec<(u32, Cents)>>,
}

impl ProductIndex {
    pub fn sellers(&self, product: u32) -> &[(u32, Cents)] {
        &self.per_product[product as usize]
    }
}

/// Flat `(product, store) -> unit price` lookup.
#[derive(Debug, Clone)]
pub struct PriceTable {
    prices: HashMap<(u32, u32), Cents>,
}

impl PriceTable {
    pub fn price(&self, product: u32, store: u32) -> Option<Cents> {
        self.prices.get(&(product, store)).copied()
    }
}

/// Build the two price lookup tables in one pass over the catalog.
pub fn build_indexes(catalog: &Catalog) -> (ProductIndex, PriceTable) {
    let mut per_product = vec![Vec::new(); catalog.product_count()];
    let mut prices = HashMap::new();
    for (si, store) in catalog.stores.iter().enumerate() {
        for (&pid, &cents) in &store.assortment {
            per_product[pid as usize].push((si as u32, cents));
            prices.insert((pid, si as u32), cents);
        }
    }
    for list in &mut per_product {
        list.sort_by_key(|&(s, c)| (c, s));
    }
    (ProductIndex { per_product }, PriceTable { prices })
}

/// A customer's shopping list: distinct products with positive quantities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShoppingList {
    items: Vec<(String, u32)>,
}

impl ShoppingList {
    pub fn new(mut items: Vec<(String, u32)>) -> Result<Self, CatalogError> {
        items.sort_by(|a, b| a.0.cmp(&b.0));
        for w in items.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CatalogError::InvalidList(format!(
                    "duplicate product {}",
                    w[0].0
                )));
            }
        }
        if let Some((p, _)) = items.iter().find(|(_, q)| *q == 0) {
            return Err(CatalogError::InvalidList(format!(
                "quantity for {p} must be at least 1"
            )));
        }
        Ok(ShoppingList { items })
    }

    pub fn items(&self) -> &[(String, u32)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Resolve product names to catalog indices; unknown products resolve to
    /// `None` (sold nowhere).
    pub fn resolved(&self, catalog: &Catalog) -> Vec<(Option<u32>, u32)> {
        self.items
            .iter()
            .map(|(p, q)| (catalog.product_index(p), *q))
            .collect()
    }
}

/// Chosen purchase store per product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostAssignment {
    /// product index -> (store index, unit price)
    pub per_product: BTreeMap<u32, (u32, Cents)>,
}

impl CostAssignment {
    /// product-id -> store-id map for serialization.
    pub fn named(&self, catalog: &Catalog) -> BTreeMap<String, String> {
        self.per_product
            .iter()
            .map(|(&p, &(s, _))| {
                (
                    catalog.product_name(p).to_string(),
                    catalog.store(s).id.clone(),
                )
            })
            .collect()
    }
}

/// Assign every product to its globally cheapest seller (ties to the lowest
/// store id). Returns the store set, the assignment, and the total cost --
/// a lower bound on the shopping cost of every feasible route.
pub fn min_cost_assignment(
    catalog: &Catalog,
    index: &ProductIndex,
    list: &ShoppingList,
) -> Result<(BTreeSet<u32>, CostAssignment, Cents), CatalogError> {
    let mut missing = Vec::new();
    let mut per_product = BTreeMap::new();
    let mut stores = BTreeSet::new();
    let mut total: Cents = 0;
    for (name, qty) in list.items() {
        let sellers = catalog
            .product_index(name)
            .map(|p| (p, index.sellers(p)))
            .filter(|(_, s)| !s.is_empty());
        match sellers {
            Some((pid, sellers)) => {
                let (store, price) = sellers[0];
                per_product.insert(pid, (store, price));
                stores.insert(store);
                total += price * *qty as u64;
            }
            None => missing.push(name.clone()),
        }
    }
    if !missing.is_empty() {
        return Err(CatalogError::InfeasibleList { missing });
    }
    Ok((stores, CostAssignment { per_product }, total))
}

/// Shopping cost of a route: each product bought entirely at the cheapest
/// store of the sequence selling it, per-product ties resolved to the
/// earliest store in the sequence.
pub fn shopping_cost(
    catalog: &Catalog,
    table: &PriceTable,
    route: &[u32],
    list: &ShoppingList,
) -> Result<(Cents, CostAssignment), CatalogError> {
    let mut missing = Vec::new();
    let mut per_product = BTreeMap::new();
    let mut total: Cents = 0;
    for (name, qty) in list.items() {
        let pid = catalog.product_index(name);
        let choice = pid.and_then(|p| {
            let mut best: Option<(u32, Cents)> = None;
            for &s in route {
                if let Some(c) = table.price(p, s) {
                    if best.map_or(true, |(_, bc)| c < bc) {
                        best = Some((s, c));
                    }
                }
            }
            best.map(|b| (p, b))
        });
        match choice {
            Some((p, (store, price))) => {
                per_product.insert(p, (store, price));
                total += price * *qty as u64;
            }
            None => missing.push(name.clone()),
        }
    }
    if !missing.is_empty() {
        return Err(CatalogError::InfeasibleRoute { missing });
    }
    Ok((total, CostAssignment { per_product }))
}

/// Parse a decimal dollar amount into exact cents (at most two decimals).
pub fn parse_price_cents(tok: &str) -> Option<Cents> {
    let (int_part, frac_part) = match tok.split_once('.') {
        Some((i, f)) => (i, f),
        None => (tok, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if frac_part.len() > 2 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let whole: u64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().ok()?
    };
    let mut cents = 0u64;
    let mut scale = 10;
    for c in frac_part.chars() {
        cents += (c as u64 - '0' as u64) * scale;
        scale /= 10;
    }
    whole.checked_mul(100).map(|w| w + cents)
}

/// Load a store catalog CSV: header `store_id,vertex_id,product_id,price`,
/// one row per (store, product).
pub fn load_catalog_csv(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let pstr = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: pstr.clone(),
        source,
    })?;
    let mut rows = Vec::new();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "store_id,vertex_id,product_id,price" => {}
        _ => {
            return Err(CatalogError::Parse {
                path: pstr,
                line: 1,
                msg: "expected header `store_id,vertex_id,product_id,price`".into(),
            })
        }
    }
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(CatalogError::Parse {
                path: pstr,
                line: lineno + 1,
                msg: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let vertex: u64 = fields[1].trim().parse().map_err(|_| CatalogError::Parse {
            path: pstr.clone(),
            line: lineno + 1,
            msg: format!("invalid vertex id `{}`", fields[1]),
        })?;
        let price_cents =
            parse_price_cents(fields[3].trim()).ok_or_else(|| CatalogError::Parse {
                path: pstr.clone(),
                line: lineno + 1,
                msg: format!("invalid price `{}`", fields[3]),
            })?;
        if price_cents == 0 {
            return Err(CatalogError::Parse {
                path: pstr,
                line: lineno + 1,
                msg: "price must be positive".into(),
            });
        }
        rows.push(CatalogRow {
            store_id: fields[0].trim().to_string(),
            vertex,
            product_id: fields[2].trim().to_string(),
            price_cents,
        });
    }
    Catalog::from_rows(rows)
}

/// Write a catalog back out in the CSV interchange format.
pub fn write_catalog_csv(catalog: &Catalog, path: impl AsRef<Path>) -> std::io::Result<()> {
    use std::fmt::Write as _;
    let mut out = String::from("store_id,vertex_id,product_id,price\n");
    for store in catalog.stores() {
        for (&p, &cents) in &store.assortment {
            let _ = writeln!(
                out,
                "{},{},{},{}.{:02}",
                store.id,
                store.vertex,
                catalog.product_name(p),
                cents / 100,
                cents % 100
            );
        }
    }
    std::fs::write(path, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfix::{abcd_list, worked_example_catalog};

    fn route(catalog: &Catalog, ids: &[&str]) -> Vec<u32> {
        ids.iter().map(|id| catalog.store_index(id).unwrap()).collect()
    }

    #[test]
    fn product_index_orders_sellers_by_price() {
        let catalog = worked_example_catalog();
        let (index, _) = build_indexes(&catalog);
        let c = catalog.product_index("C").unwrap();
        let sellers: Vec<(String, Cents)> = index
            .sellers(c)
            .iter()
            .map(|&(s, p)| (catalog.store(s).id.clone(), p))
            .collect();
        assert_eq!(
            sellers,
            vec![
                ("s3".to_string(), 500),
                ("s4".to_string(), 800),
                ("s2".to_string(), 1000)
            ]
        );
    }

    #[test]
    fn empty_catalog_builds_empty_tables() {
        let catalog = Catalog::from_rows(vec![]).unwrap();
        let (index, _) = build_indexes(&catalog);
        assert_eq!(catalog.store_count(), 0);
        assert_eq!(index.per_product.len(), 0);
    }

    #[test]
    fn price_table_agrees_with_assortments() {
        let catalog = worked_example_catalog();
        let (_, table) = build_indexes(&catalog);
        for (si, store) in catalog.stores().iter().enumerate() {
            for (&p, &c) in &store.assortment {
                assert_eq!(table.price(p, si as u32), Some(c));
            }
        }
    }

    #[test]
    fn prune_keeps_sellers_only() {
        let catalog = worked_example_catalog();
        let all = catalog.prune_stores(&abcd_list());
        assert_eq!(all.len(), 5);

        let f_list = ShoppingList::new(vec![("F".into(), 1)]).unwrap();
        let pruned = catalog.prune_stores(&f_list);
        let ids: Vec<&str> = pruned
            .iter()
            .map(|&s| catalog.store(s).id.as_str())
            .collect();
        assert_eq!(ids, vec!["s1", "s3", "s4"]);

        let nowhere = ShoppingList::new(vec![("Z".into(), 1)]).unwrap();
        assert!(catalog.prune_stores(&nowhere).is_empty());
    }

    #[test]
    fn min_cost_assignment_matches_worked_example() {
        let catalog = worked_example_catalog();
        let (index, _) = build_indexes(&catalog);
        let (stores, _, total) = min_cost_assignment(&catalog, &index, &abcd_list()).unwrap();
        let ids: Vec<&str> = stores.iter().map(|&s| catalog.store(s).id.as_str()).collect();
        assert_eq!(ids, vec!["s3", "s5"]);
        assert_eq!(total, 2100);
    }

    #[test]
    fn min_cost_assignment_applies_quantity() {
        let catalog = worked_example_catalog();
        let (index, _) = build_indexes(&catalog);
        let list = ShoppingList::new(vec![("A".into(), 2)]).unwrap();
        let (stores, _, total) = min_cost_assignment(&catalog, &index, &list).unwrap();
        assert_eq!(stores.len(), 1);
        assert_eq!(catalog.store(*stores.iter().next().unwrap()).id, "s5");
        assert_eq!(total, 1200);
    }

    #[test]
    fn min_cost_assignment_reports_missing() {
        let catalog = worked_example_catalog();
        let (index, _) = build_indexes(&catalog);
        let list = ShoppingList::new(vec![("A".into(), 1), ("Z".into(), 1)]).unwrap();
        match min_cost_assignment(&catalog, &index, &list) {
            Err(CatalogError::InfeasibleList { missing }) => {
                assert_eq!(missing, vec!["Z".to_string()])
            }
            other => panic!("expected infeasible list, got {other:?}"),
        }
    }

    #[test]
    fn shopping_cost_matches_route_totals() {
        let catalog = worked_example_catalog();
        let (_, table) = build_indexes(&catalog);
        let list = abcd_list();
        let cases = [
            (vec!["s1", "s2"], 3300),
            (vec!["s1", "s3"], 2300),
            (vec!["s5", "s4"], 2800),
        ];
        for (ids, want) in cases {
            let r = route(&catalog, &ids);
            let (total, _) = shopping_cost(&catalog, &table, &r, &list).unwrap();
            assert_eq!(total, want, "route {ids:?}");
        }
    }

    #[test]
    fn shopping_cost_is_permutation_invariant() {
        let catalog = worked_example_catalog();
        let (_, table) = build_indexes(&catalog);
        let list = abcd_list();
        let a = shopping_cost(&catalog, &table, &route(&catalog, &["s1", "s3"]), &list).unwrap();
        let b = shopping_cost(&catalog, &table, &route(&catalog, &["s3", "s1"]), &list).unwrap();
        assert_eq!(a.0, b.0);
    }

    #[test]
    fn shopping_cost_infeasible_names_missing_products() {
        let catalog = worked_example_catalog();
        let (_, table) = build_indexes(&catalog);
        let err = shopping_cost(&catalog, &table, &route(&catalog, &["s1"]), &abcd_list())
            .unwrap_err();
        match err {
            CatalogError::InfeasibleRoute { missing } => {
                assert_eq!(missing, vec!["C".to_string(), "D".to_string()])
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn satisfies_list_cases() {
        let catalog = worked_example_catalog();
        let list = abcd_list();
        assert!(catalog.satisfies_list(&list, &route(&catalog, &["s1", "s2"])));
        assert!(!catalog.satisfies_list(&list, &route(&catalog, &["s1"])));
        let empty = ShoppingList::new(vec![]).unwrap();
        assert!(catalog.satisfies_list(&empty, &[]));
    }

    #[test]
    fn extension_never_increases_cost() {
        // incremental-cost property over the worked example
        let catalog = worked_example_catalog();
        let (_, table) = build_indexes(&catalog);
        let list = abcd_list();
        let base = route(&catalog, &["s1", "s3"]);
        let (c0, _) = shopping_cost(&catalog, &table, &base, &list).unwrap();
        for extra in ["s2", "s4", "s5"] {
            let mut r = base.clone();
            r.push(catalog.store_index(extra).unwrap());
            let (c1, _) = shopping_cost(&catalog, &table, &r, &list).unwrap();
            assert!(c1 <= c0);
        }
    }

    #[test]
    fn min_cost_is_lower_bound() {
        let catalog = worked_example_catalog();
        let (index, table) = build_indexes(&catalog);
        let list = abcd_list();
        let (_, _, bound) = min_cost_assignment(&catalog, &index, &list).unwrap();
        for pair in [["s1", "s2"], ["s1", "s3"], ["s5", "s4"], ["s5", "s2"]] {
            let (c, _) = shopping_cost(&catalog, &table, &route(&catalog, &pair), &list).unwrap();
            assert!(bound <= c);
        }
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("catalog.csv");
        let catalog = worked_example_catalog();
        write_catalog_csv(&catalog, &path).unwrap();
        let loaded = load_catalog_csv(&path).unwrap();
        assert_eq!(loaded.canonical_string(), catalog.canonical_string());
    }

    #[test]
    fn csv_rejects_bad_price() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("catalog.csv");
        std::fs::write(
            &path,
            "store_id,vertex_id,product_id,price\ns1,1,A,0.00\n",
        )
        .unwrap();
        assert!(matches!(
            load_catalog_csv(&path),
            Err(CatalogError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn list_validation() {
        assert!(ShoppingList::new(vec![("A".into(), 1), ("A".into(), 2)]).is_err());
        assert!(ShoppingList::new(vec![("A".into(), 0)]).is_err());
    }

    #[test]
    fn price_parsing_is_exact() {
        assert_eq!(parse_price_cents("7"), Some(700));
        assert_eq!(parse_price_cents("0.5"), Some(50));
        assert_eq!(parse_price_cents("12.34"), Some(1234));
        assert_eq!(parse_price_cents("1.234"), None);
        assert_eq!(parse_price_cents("x"), None);
    }
}
