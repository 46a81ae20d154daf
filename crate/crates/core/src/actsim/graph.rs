use crate::floorplan::{BoundaryImage, RasterFloorplan, RoomLabel};
use crate::furnish::{room_entrance, FurnitureInstance};
use crate::grid::{Mask, Pos, Rect};

use super::ActsimError;

/// Distance of a furniture anchor from the piece's edge, pixels.
const ANCHOR_OFFSET: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    MainEntrance,
    RoomEntrance,
    FurnitureAnchor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphNode {
    pub pos: Pos,
    pub kind: NodeKind,
}

/// Which free-space mask an edge is planned in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partition {
    Living,
    /// Index of the furniture piece whose room hosts the edge.
    Room(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub partition: Partition,
}

/// Undirected graph of entrances and furniture anchors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

impl ConnectivityGraph {
    pub fn living_edges(&self) -> impl Iterator<Item = &GraphEdge> {
        self.edges
            .iter()
            .filter(|e| e.partition == Partition::Living)
    }

    pub fn room_edges(&self) -> impl Iterator<Item = &GraphEdge> {
        self.edges
            .iter()
            .filter(|e| e.partition != Partition::Living)
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.a == node || e.b == node)
            .count()
    }

    fn node(&mut self, pos: Pos, kind: NodeKind) -> usize {
        if let Some(i) = self.nodes.iter().position(|n| n.pos == pos) {
            return i;
        }
        self.nodes.push(GraphNode { pos, kind });
        self.nodes.len() - 1
    }
}

/// Walkable space and graph endpoints of one simulation.
#[derive(Debug, Clone)]
pub struct Scene {
    pub inside: Mask,
    /// Free space of the living partition.
    pub living_free: Mask,
    /// Free space of each furniture piece's room, indexed like `furniture`.
    pub room_free: Vec<Mask>,
    pub main_entrance: Pos,
    /// Entrances of rooms with or without furniture, in discovery order.
    pub room_entrances: Vec<Pos>,
    pub furniture: Vec<FurnitureInstance>,
}

impl Scene {
    /// Scene of a labelled floorplan. The living partition walks living and
    /// door pixels; each room partition walks the room plus interior doors.
    pub fn from_floorplan(
        fp: &RasterFloorplan,
        furniture: &[FurnitureInstance],
    ) -> Result<Self, ActsimError> {
        let cat = fp.category();
        let obstacles = furniture_mask(fp.width(), fp.height(), furniture);
        let doors = cat.map(|l| l.is_door());
        let living_free = cat
            .map(|&l| l == RoomLabel::Living)
            .or(&doors)
            .and_not(&obstacles);
        let interior_doors = fp.label_mask(RoomLabel::InteriorDoor);

        let main_entrance = main_entrance_point(fp, &living_free).ok_or(ActsimError::NoEntrance)?;

        let mut room_entrances = Vec::new();
        for room in fp.rooms() {
            if room.label == RoomLabel::Living {
                continue;
            }
            if let Some(e) = room_entrance(fp, &room) {
                room_entrances.push(e.position);
            }
        }
        let room_free = furniture
            .iter()
            .map(|f| {
                fp.room_ids()
                    .map(|&id| id == f.room_id)
                    .or(&interior_doors)
                    .and_not(&obstacles)
            })
            .collect();
        Ok(Self {
            inside: fp.inside().clone(),
            living_free,
            room_free,
            main_entrance,
            room_entrances,
            furniture: furniture.to_vec(),
        })
    }

    /// Scene of a bare boundary, as used by the interactive designer: every
    /// partition walks the interior and the entrance, minus furniture.
    pub fn from_boundary(
        boundary: &BoundaryImage,
        furniture: &[FurnitureInstance],
    ) -> Result<Self, ActsimError> {
        let main_entrance = boundary.entrance_point().ok_or(ActsimError::NoEntrance)?;
        let obstacles = furniture_mask(boundary.width(), boundary.height(), furniture);
        let free = boundary
            .interior()
            .or(boundary.entrance())
            .and_not(&obstacles);
        Ok(Self {
            inside: boundary.inside().clone(),
            room_free: vec![free.clone(); furniture.len()],
            living_free: free,
            main_entrance,
            room_entrances: Vec::new(),
            furniture: furniture.to_vec(),
        })
    }

    pub fn graph(&self) -> ConnectivityGraph {
        let mut g = ConnectivityGraph {
            nodes: Vec::new(),
            edges: Vec::new(),
        };
        g.node(self.main_entrance, NodeKind::MainEntrance);
        for &e in self
            .room_entrances
            .iter()
            .chain(self.furniture.iter().map(|f| &f.entrance))
        {
            g.node(e, NodeKind::RoomEntrance);
        }
        let living_nodes = g.nodes.len();
        for i in 0..living_nodes {
            for j in i + 1..living_nodes {
                g.edges.push(GraphEdge {
                    a: i,
                    b: j,
                    partition: Partition::Living,
                });
            }
        }
        for (k, f) in self.furniture.iter().enumerate() {
            let a = g.node(f.entrance, NodeKind::RoomEntrance);
            let anchor = furniture_anchor(&f.rect, f.entrance, &self.room_free[k]);
            let b = g.node(anchor, NodeKind::FurnitureAnchor);
            g.edges.push(GraphEdge {
                a,
                b,
                partition: Partition::Room(k),
            });
        }
        g
    }

    pub fn free_mask(&self, partition: Partition) -> &Mask {
        match partition {
            Partition::Living => &self.living_free,
            Partition::Room(k) => &self.room_free[k],
        }
    }
}

/// Builds the entrance/furniture graph of a labelled floorplan.
pub fn build_connectivity_graph(
    fp: &RasterFloorplan,
    furniture: &[FurnitureInstance],
) -> Result<ConnectivityGraph, ActsimError> {
    Ok(Scene::from_floorplan(fp, furniture)?.graph())
}

fn furniture_mask(w: usize, h: usize, furniture: &[FurnitureInstance]) -> Mask {
    let mut m = Mask::filled(w, h, false);
    for f in furniture {
        m.fill_rect(&f.rect, true);
    }
    m
}

/// Middle main-entrance pixel among those touching the living free space,
/// or among all of them when none touch it.
fn main_entrance_point(fp: &RasterFloorplan, living_free: &Mask) -> Option<Pos> {
    let cat = fp.category();
    let all = fp.main_entrance_pixels();
    let touching: Vec<Pos> = all
        .iter()
        .copied()
        .filter(|p| {
            p.neighbors4()
                .iter()
                .any(|q| cat.get(*q) == Some(&RoomLabel::Living) && living_free.at(*q))
        })
        .collect();
    let pick = if touching.is_empty() { all } else { touching };
    pick.get(pick.len() / 2).copied()
}

/// The spot a resident stands at to use a piece: the free side midpoint,
/// pushed [`ANCHOR_OFFSET`] pixels out, nearest the room entrance. Falls back
/// to the free pixel nearest the piece.
pub fn furniture_anchor(rect: &Rect, entrance: Pos, free: &Mask) -> Pos {
    let (cx, cy) = (rect.x + rect.w / 2, rect.y + rect.h / 2);
    let sides = [
        Pos::new(cx, rect.y - ANCHOR_OFFSET),
        Pos::new(cx, rect.bottom() - 1 + ANCHOR_OFFSET),
        Pos::new(rect.x - ANCHOR_OFFSET, cy),
        Pos::new(rect.right() - 1 + ANCHOR_OFFSET, cy),
    ];
    let mut best: Option<(f64, Pos)> = None;
    for p in sides.into_iter().filter(|&p| free.at(p)) {
        let d = p.distance(entrance);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, p));
        }
    }
    if let Some((_, p)) = best {
        return p;
    }
    free.set_positions()
        .map(|p| (rect.distance_to(p), p))
        .fold(None, |acc: Option<(f64, Pos)>, (d, p)| match acc {
            Some((bd, _)) if bd <= d => acc,
            _ => Some((d, p)),
        })
        .map_or(entrance, |(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::furnish::{place_primary_furniture, PlacementPolicy};
    use crate::synth;

    #[test]
    fn living_edges_form_a_complete_graph() {
        // find a plan with exactly three doored rooms
        let fp = (0..200)
            .map(synth::plan)
            .find(|p| p.doors.len() == 3)
            .expect("some plan has three rooms")
            .floorplan;
        let g = build_connectivity_graph(&fp, &[]).unwrap();
        let living: Vec<_> = g.living_edges().collect();
        assert_eq!(g.nodes.len(), 4);
        // C(4,2) by enumeration of unordered pairs
        let mut pairs = 0;
        for i in 0..4 {
            for _ in i + 1..4 {
                pairs += 1;
            }
        }
        assert_eq!(living.len(), pairs);
        assert_eq!(g.room_edges().count(), 0);
        assert!(g.degree(0) >= 1);
        assert_eq!(g.nodes[0].kind, NodeKind::MainEntrance);
    }

    #[test]
    fn furniture_adds_room_edges_and_shares_entrances() {
        let fp = synth::floorplan(7);
        let furniture = place_primary_furniture(&fp, &PlacementPolicy::default(), 1).unwrap();
        let g = build_connectivity_graph(&fp, &furniture).unwrap();
        assert_eq!(g.room_edges().count(), furniture.len());
        // furniture entrances coincide with door entrances, so no new living nodes
        let doored = fp
            .rooms()
            .iter()
            .filter(|r| r.label != RoomLabel::Living)
            .count();
        let entrances = g
            .nodes
            .iter()
            .filter(|n| n.kind != NodeKind::FurnitureAnchor)
            .count();
        assert_eq!(entrances, doored + 1);
        for e in g.room_edges() {
            let Partition::Room(k) = e.partition else {
                unreachable!()
            };
            let scene = Scene::from_floorplan(&fp, &furniture).unwrap();
            assert!(scene.room_free[k].at(g.nodes[e.b].pos));
            assert!(!furniture[k].rect.contains(g.nodes[e.b].pos));
        }
    }

    #[test]
    fn duplicate_entrances_are_merged() {
        let fp = synth::floorplan(3);
        let scene = Scene::from_floorplan(&fp, &[]).unwrap();
        let mut doubled = scene.clone();
        doubled.room_entrances.extend(scene.room_entrances.clone());
        doubled.room_entrances.push(scene.main_entrance);
        assert_eq!(doubled.graph(), scene.graph());
    }

    #[test]
    fn anchor_prefers_side_nearest_entrance() {
        let free = Mask::filled(40, 40, true);
        let rect = Rect::new(10, 10, 10, 6);
        assert_eq!(
            furniture_anchor(&rect, Pos::new(15, 35), &free),
            Pos::new(15, 17)
        );
        assert_eq!(
            furniture_anchor(&rect, Pos::new(0, 13), &free),
            Pos::new(8, 13)
        );
    }
}
