//! The worked examples shipped with the crate: base graph, vanishing
//! subgroup and expected standard point for each. `dice_alt` is the
//! second orientation reading of `dice` (see `fixtures/metadata.json`).

use crate::graph::Graph;
use crate::invariants::VanishingSubgroup;
use crate::io::{GraphFile, IoError, PointFile};
use crate::quadric::{point_to_realization, ProjectivePoint};

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub graph_json: &'static str,
    pub point_json: &'static str,
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture {
            name: $name,
            graph_json: include_str!(concat!("../fixtures/", $name, ".graph.json")),
            point_json: include_str!(concat!("../fixtures/", $name, ".point.json")),
        }
    };
}

pub const ALL: [Fixture; 9] = [
    fixture!("square"),
    fixture!("honeycomb"),
    fixture!("kagome"),
    fixture!("triangular"),
    fixture!("sqrt6"),
    fixture!("lattice_8_4"),
    fixture!("dice"),
    fixture!("dice_alt"),
    fixture!("cairo"),
];

pub fn get(name: &str) -> Option<Fixture> {
    ALL.iter().copied().find(|f| f.name == name)
}

impl Fixture {
    pub fn graph_file(&self) -> GraphFile {
        GraphFile::parse(self.graph_json).expect("fixture graph parses")
    }

    pub fn graph(&self) -> Graph {
        self.graph_file().graph().expect("fixture graph is valid")
    }

    /// The printed subgroup, or for a graph file without one, the subgroup
    /// recovered from the expected point.
    pub fn subgroup(&self) -> Result<VanishingSubgroup, IoError> {
        let f = self.graph_file();
        let g = f.graph()?;
        if f.vanishing_group.is_some() || g.betti_number() == 2 {
            return f.subgroup(&g);
        }
        let rec = point_to_realization(&self.point(), &g).map_err(|e| IoError::Point(e.to_string()))?;
        Ok(rec.subgroup)
    }

    pub fn point(&self) -> ProjectivePoint {
        PointFile::parse(self.point_json).and_then(|p| p.point()).expect("fixture point parses")
    }
}
