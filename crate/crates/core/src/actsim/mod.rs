//! Human-activity synthesis: resident movements between entrances and
//! furniture are simulated with a bidirectional RRT and rasterized into a
//! density map.

mod activity;
mod density;
mod graph;
mod rrt;

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::floorplan::{BoundaryImage, RasterFloorplan};
use crate::furnish::FurnitureInstance;
use crate::grid::{derive_seed, Grid, Mask, Pos};

pub use activity::{blend, ActivityMap, LIVING_WEIGHT, ROOMS_WEIGHT};
pub use density::{accumulate, normalize, rasterize_density, unit_samples};
pub use graph::{
    build_connectivity_graph, furniture_anchor, ConnectivityGraph, GraphEdge, GraphNode, NodeKind,
    Partition, Scene,
};
pub use rrt::{bi_rrt_path, line_pixels, resample, segment_free, shortcut, BiRrtParams};

/// Walkable pixels.
pub type FreeSpaceMask = Mask;

#[derive(Debug, Error)]
pub enum ActsimError {
    #[error("no path found")]
    NoPath,
    #[error("path endpoint is not in free space")]
    EndpointBlocked,
    #[error("no paths to rasterize")]
    EmptyInput,
    #[error("floorplan has no main entrance")]
    NoEntrance,
    #[error("connectivity graph has no edges")]
    NoConnectivity,
    #[error("none of the {0} graph edges could be resolved")]
    AllEdgesUnsolvable(usize),
    #[error("invalid simulation parameters: {0}")]
    InvalidParams(String),
    #[error("invalid activity map: {0}")]
    InvalidMap(String),
    #[error("malformed activity map: {0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl ActsimError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Trajectories simulated along one graph edge.
#[derive(Debug, Clone)]
pub struct EdgePaths {
    pub edge: GraphEdge,
    pub paths: Vec<Vec<Pos>>,
}

impl EdgePaths {
    pub fn solved(&self) -> bool {
        !self.paths.is_empty()
    }
}

/// Full result of a simulation, including the intermediate densities.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub map: ActivityMap,
    pub living_density: Grid<f64>,
    pub rooms_density: Grid<f64>,
    pub graph: ConnectivityGraph,
    pub edges: Vec<EdgePaths>,
}

impl Simulation {
    pub fn solved_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.solved()).count()
    }
}

/// Simulates every graph edge `runs_per_edge` times and blends the living and
/// room densities 6:4. Unsolvable edges are skipped with a warning.
pub fn simulate(scene: &Scene, params: &BiRrtParams, seed: u64) -> Result<Simulation, ActsimError> {
    params.validate()?;
    let graph = scene.graph();
    if graph.edges.is_empty() {
        return Err(ActsimError::NoConnectivity);
    }

    // endpoints in different components can never connect; skip those edges
    // without burning the iteration budget
    let mut components: HashMap<Partition, Grid<u32>> = HashMap::new();
    for e in &graph.edges {
        components
            .entry(e.partition)
            .or_insert_with(|| scene.free_mask(e.partition).components4().0);
    }
    let reachable = |e: &GraphEdge| {
        let labels = &components[&e.partition];
        let (a, b) = (graph.nodes[e.a].pos, graph.nodes[e.b].pos);
        match (labels.get(a), labels.get(b)) {
            (Some(&la), Some(&lb)) => la != 0 && la == lb,
            _ => false,
        }
    };

    let jobs: Vec<(usize, usize)> = graph
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| reachable(e))
        .flat_map(|(i, _)| (0..params.runs_per_edge).map(move |r| (i, r)))
        .collect();
    let results: Vec<(usize, Option<Vec<Pos>>)> = jobs
        .par_iter()
        .map(|&(i, r)| {
            let e = &graph.edges[i];
            let run_seed = derive_seed(derive_seed(seed, i as u64), r as u64);
            let path = bi_rrt_path(
                scene.free_mask(e.partition),
                graph.nodes[e.a].pos,
                graph.nodes[e.b].pos,
                params,
                run_seed,
            )
            .ok();
            (i, path)
        })
        .collect();

    let mut edges: Vec<EdgePaths> = graph
        .edges
        .iter()
        .map(|&edge| EdgePaths {
            edge,
            paths: Vec::new(),
        })
        .collect();
    for (i, path) in results {
        if let Some(p) = path {
            edges[i].paths.push(p);
        }
    }
    for (i, e) in edges.iter().enumerate() {
        if !e.solved() {
            log::warn!(
                "edge {i} {} -> {} unsolved, skipped",
                graph.nodes[e.edge.a].pos,
                graph.nodes[e.edge.b].pos
            );
        }
    }
    if edges.iter().all(|e| !e.solved()) {
        return Err(ActsimError::AllEdgesUnsolvable(edges.len()));
    }

    let (w, h) = scene.inside.dims();
    let partition_density = |living: bool| {
        let paths: Vec<Vec<Pos>> = edges
            .iter()
            .filter(|e| (e.edge.partition == Partition::Living) == living)
            .flat_map(|e| e.paths.iter().cloned())
            .collect();
        let mut g = accumulate(&paths, params.splat_sigma, w, h);
        normalize(&mut g);
        g
    };
    let (living_density, rooms_density) =
        rayon::join(|| partition_density(true), || partition_density(false));
    let map = blend(&living_density, &rooms_density, &scene.inside)?;
    Ok(Simulation {
        map,
        living_density,
        rooms_density,
        graph,
        edges,
    })
}

/// Activity map of a labelled floorplan with placed furniture.
pub fn synthesize_activity_map(
    fp: &RasterFloorplan,
    furniture: &[FurnitureInstance],
    params: &BiRrtParams,
    seed: u64,
) -> Result<ActivityMap, ActsimError> {
    Ok(simulate(&Scene::from_floorplan(fp, furniture)?, params, seed)?.map)
}

/// Activity map of a bare boundary with user-placed furniture.
pub fn synthesize_boundary_activity(
    boundary: &BoundaryImage,
    furniture: &[FurnitureInstance],
    params: &BiRrtParams,
    seed: u64,
) -> Result<ActivityMap, ActsimError> {
    Ok(simulate(&Scene::from_boundary(boundary, furniture)?, params, seed)?.map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::furnish::{place_primary_furniture, PlacementPolicy};
    use crate::synth;

    #[test]
    fn deterministic_and_supported() {
        let fp = synth::floorplan(11);
        let furniture = place_primary_furniture(&fp, &PlacementPolicy::default(), 5).unwrap();
        let params = BiRrtParams::default();
        let a = synthesize_activity_map(&fp, &furniture, &params, 42).unwrap();
        let b = synthesize_activity_map(&fp, &furniture, &params, 42).unwrap();
        assert_eq!(a.to_binary(), b.to_binary());
        for (p, &v) in a.density().iter() {
            if v > 0.0 {
                assert!(fp.inside().at(p));
            }
        }
    }

    #[test]
    fn paths_stay_in_free_space() {
        let fp = synth::floorplan(12);
        let furniture = place_primary_furniture(&fp, &PlacementPolicy::default(), 0).unwrap();
        let scene = Scene::from_floorplan(&fp, &furniture).unwrap();
        let sim = simulate(&scene, &BiRrtParams::default(), 1).unwrap();
        assert_eq!(sim.solved_edges(), sim.edges.len());
        for e in &sim.edges {
            let free = scene.free_mask(e.edge.partition);
            for p in e.paths.iter().flatten() {
                assert!(free.at(*p));
            }
        }
    }

    #[test]
    fn no_furniture_means_living_only() {
        let fp = synth::floorplan(13);
        let scene = Scene::from_floorplan(&fp, &[]).unwrap();
        let sim = simulate(&scene, &BiRrtParams::default(), 2).unwrap();
        for (p, &v) in sim.map.density().iter() {
            let expected = if fp.inside().at(p) {
                0.6 * sim.living_density[p]
            } else {
                0.0
            };
            assert!((v - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_scene_with_one_piece() {
        let fp = synth::floorplan(14);
        let boundary = crate::floorplan::extract_boundary(&fp).unwrap();
        let furniture = place_primary_furniture(&fp, &PlacementPolicy::default(), 0).unwrap();
        let one = &furniture[..1];
        let m = synthesize_boundary_activity(&boundary, one, &BiRrtParams::default(), 0).unwrap();
        assert!(m.density().as_slice().iter().any(|&v| v > 0.0));
    }

    #[test]
    fn lone_entrance_has_no_connectivity() {
        let fp = synth::floorplan(15);
        let boundary = crate::floorplan::extract_boundary(&fp).unwrap();
        let r = synthesize_boundary_activity(&boundary, &[], &BiRrtParams::default(), 0);
        assert!(matches!(r, Err(ActsimError::NoConnectivity)));
    }
}
