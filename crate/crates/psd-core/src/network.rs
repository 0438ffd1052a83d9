//! Road network representation and fastest-path queries.
//!
//! The network is an undirected graph whose edge weights are travel times.
//! Weights are stored as integer milliseconds so that every shopping time
//! derived from them is exact; `INF_TT` marks unreachable pairs.

use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

/// Travel time in integer milliseconds.
pub type TravelTime = u64;

/// Sentinel for "unreachable": compares greater than any real travel time.
pub const INF_TT: TravelTime = u64::MAX;

/// Add travel times, propagating the unreachable sentinel.
#[inline]
pub fn tt_add(a: TravelTime, b: TravelTime) -> TravelTime {
    if a == INF_TT || b == INF_TT {
        INF_TT
    } else {
        a + b
    }
}

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("{path}:{line}: {msg}")]
    Validation {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("unknown vertex id {0}")]
    UnknownVertex(u64),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Undirected road network with positive travel-time weights.
///
/// Immutable after construction; vertex ids from input files are mapped to
/// dense internal indices. Coordinates default to the origin until a
/// coordinate file is loaded.
#[derive(Debug, Clone)]
pub struct RoadNetwork {
    ext_ids: Vec<u64>,
    id_map: HashMap<u64, u32>,
    coords: Vec<(f64, f64)>,
    adj: Vec<Vec<(u32, TravelTime)>>,
    edge_count: usize,
}

impl RoadNetwork {
    /// Build a network from `(v1, v2, weight_ms)` records. Duplicate edges
    /// collapse to the minimum weight; self-loops and zero weights are
    /// rejected.
    pub fn from_edges(edges: &[(u64, u64, TravelTime)]) -> Result<Self, NetworkError> {
        let mut net = RoadNetwork {
            ext_ids: Vec::new(),
            id_map: HashMap::new(),
            coords: Vec::new(),
            adj: Vec::new(),
            edge_count: 0,
        };
        let mut seen: HashMap<(u32, u32), TravelTime> = HashMap::new();
        for &(a, b, w) in edges {
            if a == b {
                return Err(NetworkError::Validation {
                    path: String::new(),
                    line: 0,
                    msg: format!("self-loop on vertex {a}"),
                });
            }
            if w == 0 || w == INF_TT {
                return Err(NetworkError::Validation {
                    path: String::new(),
                    line: 0,
                    msg: format!("edge ({a},{b}) has non-positive weight"),
                });
            }
            let ia = net.intern(a);
            let ib = net.intern(b);
            let key = (ia.min(ib), ia.max(ib));
            match seen.get_mut(&key) {
                Some(prev) => {
                    if w < *prev {
                        *prev = w;
                    }
                }
                None => {
                    seen.insert(key, w);
                }
            }
        }
        net.edge_count = seen.len();
        for ((ia, ib), w) in seen {
            net.adj[ia as usize].push((ib, w));
            net.adj[ib as usize].push((ia, w));
        }
        for nbrs in &mut net.adj {
            nbrs.sort_unstable();
        }
        Ok(net)
    }

    fn intern(&mut self, ext: u64) -> u32 {
        if let Some(&i) = self.id_map.get(&ext) {
            return i;
        }
        let i = self.ext_ids.len() as u32;
        self.ext_ids.push(ext);
        self.coords.push((0.0, 0.0));
        self.adj.push(Vec::new());
        self.id_map.insert(ext, i);
        i
    }

    pub fn vertex_count(&self) -> usize {
        self.ext_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains(&self, ext: u64) -> bool {
        self.id_map.contains_key(&ext)
    }

    pub fn index_of(&self, ext: u64) -> Result<u32, NetworkError> {
        self.id_map
            .get(&ext)
            .copied()
            .ok_or(NetworkError::UnknownVertex(ext))
    }

    pub fn ext_id(&self, idx: u32) -> u64 {
        self.ext_ids[idx as usize]
    }

    /// External vertex ids in ascending order.
    pub fn vertex_ids(&self) -> Vec<u64> {
        let mut ids = self.ext_ids.clone();
        ids.sort_unstable();
        ids
    }

    pub fn coord(&self, ext: u64) -> Result<(f64, f64), NetworkError> {
        Ok(self.coords[self.index_of(ext)? as usize])
    }

    pub fn set_coord(&mut self, ext: u64, x: f64, y: f64) -> Result<(), NetworkError> {
        let i = self.index_of(ext)?;
        self.coords[i as usize] = (x, y);
        Ok(())
    }

    /// Fastest-path travel times from `source` to every vertex, by internal
    /// index. Plain settled-set label-setting search; stops early once
    /// `targets_left` distinct target indices have been settled.
    fn dijkstra(&self, source: u32, targets: Option<&[bool]>) -> Vec<TravelTime> {
        let n = self.vertex_count();
        let mut dist = vec![INF_TT; n];
        let mut heap: BinaryHeap<std::cmp::Reverse<(TravelTime, u32)>> = BinaryHeap::new();
        let mut targets_left = targets.map(|t| t.iter().filter(|&&b| b).count());
        dist[source as usize] = 0;
        heap.push(std::cmp::Reverse((0, source)));
        while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
            if d > dist[v as usize] {
                continue;
            }
            if let (Some(left), Some(t)) = (targets_left.as_mut(), targets) {
                if t[v as usize] {
                    *left -= 1;
                    if *left == 0 {
                        break;
                    }
                }
            }
            for &(u, w) in &self.adj[v as usize] {
                let nd = d + w;
                if nd < dist[u as usize] {
                    dist[u as usize] = nd;
                    heap.push(std::cmp::Reverse((nd, u)));
                }
            }
        }
        dist
    }

    /// Travel times from `source` to each of `targets` (internal indices).
    pub fn times_from_index(&self, source: u32, targets: &[u32]) -> Vec<TravelTime> {
        let mut mask = vec![false; self.vertex_count()];
        for &t in targets {
            mask[t as usize] = true;
        }
        let dist = self.dijkstra(source, Some(&mask));
        targets.iter().map(|&t| dist[t as usize]).collect()
    }

    /// Single-source multi-target fastest paths over external vertex ids.
    /// Unreachable targets map to [`INF_TT`].
    pub fn multi_target_fastest_paths(
        &self,
        source: u64,
        targets: &[u64],
    ) -> Result<HashMap<u64, TravelTime>, NetworkError> {
        let src = self.index_of(source)?;
        let idxs: Vec<u32> = targets
            .iter()
            .map(|&t| self.index_of(t))
            .collect::<Result<_, _>>()?;
        let times = self.times_from_index(src, &idxs);
        Ok(targets.iter().copied().zip(times).collect())
    }

    /// Pre-compute the symmetric store-pair travel-time table.
    /// One source search per store, dispatched over a worker pool.
    pub fn precompute_store_pair_times(
        &self,
        store_vertices: &[u64],
    ) -> Result<TravelTimeTable, NetworkError> {
        use rayon::prelude::*;

        let mut vertices: Vec<u64> = store_vertices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let idxs: Vec<u32> = vertices
            .iter()
            .map(|&v| self.index_of(v))
            .collect::<Result<_, _>>()?;
        let n = vertices.len();
        let rows: Vec<Vec<TravelTime>> = idxs
            .par_iter()
            .map(|&src| self.times_from_index(src, &idxs))
            .collect();
        let mut times = vec![INF_TT; n * n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &t) in row.iter().enumerate() {
                times[i * n + j] = t;
            }
        }
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        Ok(TravelTimeTable {
            vertices,
            index,
            times,
        })
    }

    /// Canonical text rendering used for cache keys: sorted vertex ids and
    /// sorted edges with millisecond weights.
    pub fn canonical_string(&self) -> String {
        let mut edges: Vec<(u64, u64, TravelTime)> = Vec::with_capacity(self.edge_count);
        for (ia, nbrs) in self.adj.iter().enumerate() {
            let a = self.ext_ids[ia];
            for &(ib, w) in nbrs {
                let b = self.ext_ids[ib as usize];
                if a < b {
                    edges.push((a, b, w));
                }
            }
        }
        edges.sort_unstable();
        let mut s = String::new();
        let _ = writeln!(s, "n {}", self.vertex_count());
        for (a, b, w) in edges {
            let _ = writeln!(s, "e {a} {b} {w}");
        }
        s
    }
}

/// Parse a decimal-seconds weight into exact milliseconds.
/// Accepts up to three fractional digits.
fn parse_weight_ms(tok: &str) -> Option<TravelTime> {
    let (int_part, frac_part) = match tok.split_once('.') {
        Some((i, f)) => (i, f),
        None => (tok, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if frac_part.len() > 3 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let whole: u64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().ok()?
    };
    let mut frac_ms = 0u64;
    let mut scale = 100;
    for c in frac_part.chars() {
        frac_ms += (c as u64 - '0' as u64) * scale;
        scale /= 10;
    }
    whole.checked_mul(1000).map(|w| w + frac_ms)
}

/// Load a network from an edge-list file: one `v1 v2 weight` record per
/// line, `#` lines ignored, weights in decimal seconds.
pub fn load_network(path: impl AsRef<Path>) -> Result<RoadNetwork, NetworkError> {
    let path = path.as_ref();
    let pstr = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| NetworkError::Io {
        path: pstr.clone(),
        source,
    })?;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(NetworkError::Parse {
                path: pstr,
                line: lineno + 1,
                msg: format!("expected `v1 v2 weight`, got {} fields", toks.len()),
            });
        }
        let parse_id = |tok: &str| -> Result<u64, NetworkError> {
            tok.parse().map_err(|_| NetworkError::Parse {
                path: pstr.clone(),
                line: lineno + 1,
                msg: format!("invalid vertex id `{tok}`"),
            })
        };
        let a = parse_id(toks[0])?;
        let b = parse_id(toks[1])?;
        let w = parse_weight_ms(toks[2]).ok_or_else(|| NetworkError::Parse {
            path: pstr.clone(),
            line: lineno + 1,
            msg: format!("invalid weight `{}`", toks[2]),
        })?;
        if w == 0 {
            return Err(NetworkError::Validation {
                path: pstr,
                line: lineno + 1,
                msg: "weight must be positive".into(),
            });
        }
        if a == b {
            return Err(NetworkError::Validation {
                path: pstr,
                line: lineno + 1,
                msg: "edge endpoints must be distinct".into(),
            });
        }
        edges.push((a, b, w));
    }
    RoadNetwork::from_edges(&edges).map_err(|e| match e {
        NetworkError::Validation { msg, .. } => NetworkError::Validation {
            path: pstr,
            line: 0,
            msg,
        },
        other => other,
    })
}

/// Load a `v x y` coordinate file into an existing network.
pub fn load_coordinates(
    net: &mut RoadNetwork,
    path: impl AsRef<Path>,
) -> Result<(), NetworkError> {
    let path = path.as_ref();
    let pstr = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| NetworkError::Io {
        path: pstr.clone(),
        source,
    })?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(NetworkError::Parse {
                path: pstr,
                line: lineno + 1,
                msg: format!("expected `v x y`, got {} fields", toks.len()),
            });
        }
        let v: u64 = toks[0].parse().map_err(|_| NetworkError::Parse {
            path: pstr.clone(),
            line: lineno + 1,
            msg: format!("invalid vertex id `{}`", toks[0]),
        })?;
        let parse_f = |tok: &str| -> Result<f64, NetworkError> {
            tok.parse().map_err(|_| NetworkError::Parse {
                path: pstr.clone(),
                line: lineno + 1,
                msg: format!("invalid coordinate `{tok}`"),
            })
        };
        let x = parse_f(toks[1])?;
        let y = parse_f(toks[2])?;
        if !net.contains(v) {
            return Err(NetworkError::Validation {
                path: pstr,
                line: lineno + 1,
                msg: format!("vertex {v} not present in edge list"),
            });
        }
        net.set_coord(v, x, y)?;
    }
    Ok(())
}

/// Symmetric fastest-path times over a fixed store-vertex set.
#[derive(Debug, Clone)]
pub struct TravelTimeTable {
    vertices: Vec<u64>,
    index: HashMap<u64, usize>,
    times: Vec<TravelTime>,
}

impl TravelTimeTable {
    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn time(&self, a: u64, b: u64) -> Result<TravelTime, NetworkError> {
        let ia = *self
            .index
            .get(&a)
            .ok_or(NetworkError::UnknownVertex(a))?;
        let ib = *self
            .index
            .get(&b)
            .ok_or(NetworkError::UnknownVertex(b))?;
        Ok(self.times[ia * self.vertices.len() + ib])
    }

    pub fn time_by_index(&self, ia: usize, ib: usize) -> TravelTime {
        self.times[ia * self.vertices.len() + ib]
    }

    pub fn index_of(&self, v: u64) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub(crate) fn from_parts(vertices: Vec<u64>, times: Vec<TravelTime>) -> Self {
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        TravelTimeTable {
            vertices,
            index,
            times,
        }
    }

    pub(crate) fn raw_times(&self) -> &[TravelTime] {
        &self.times
    }
}
