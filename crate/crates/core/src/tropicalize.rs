//! Tropicalization of a skeleton through a tuple of potentials.

use crate::complex::{Piece, TropicalComplex};
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::lattice::{content, lattice_length, IntVec, Point};
use crate::potential::PLFunction;
use crate::skeleton::Skeleton;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkeletonCell {
    Edge(usize),
    Ray(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellImage {
    Collapsed(Point),
    Segment(Point, Point),
    Ray(Point, IntVec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeExpansion {
    pub cell: SkeletonCell,
    pub slopes: IntVec,
    /// `m_rel`: gcd of the slopes, zero exactly when the cell collapses.
    pub expansion: u64,
    pub image: CellImage,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeExpansionReport {
    pub edges: Vec<EdgeExpansion>,
    pub rays: Vec<EdgeExpansion>,
}

impl EdgeExpansionReport {
    pub fn edge_expansions(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.expansion).collect()
    }
}

/// Image of each vertex under `(F_1, ..., F_n)`.
pub fn vertex_images(sk: &Skeleton, coords: &[PLFunction]) -> Vec<Point> {
    (0..sk.vertices.len()).map(|v| coords.iter().map(|f| f.values[v].clone()).collect()).collect()
}

/// Maps the skeleton into `Q^n` and assembles the weighted image.
///
/// The result is subdivided at all images of skeleton vertices; apply
/// [`TropicalComplex::merge_collinear`] for the minimal presentation.
pub fn trop_map(sk: &Skeleton, coords: &[PLFunction]) -> Result<(TropicalComplex, EdgeExpansionReport)> {
    if coords.is_empty() {
        return Err(Error::InvalidInput("need at least one coordinate function".into()));
    }
    for f in coords {
        if f.edge_slopes.len() != sk.edges.len()
            || f.ray_slopes.len() != sk.rays.len()
            || f.values.len() != sk.vertices.len()
        {
            return Err(Error::InvalidInput("coordinate function does not match the skeleton".into()));
        }
    }
    let images = vertex_images(sk, coords);
    let mut pieces = Vec::new();
    let mut report = EdgeExpansionReport::default();
    for (i, e) in sk.edges.iter().enumerate() {
        let slopes: IntVec = coords.iter().map(|f| f.edge_slopes[i]).collect();
        let m = content(&slopes);
        let image = if m == 0 {
            CellImage::Collapsed(images[e.u].clone())
        } else {
            pieces.push(Piece::Segment(images[e.u].clone(), images[e.v].clone(), m));
            CellImage::Segment(images[e.u].clone(), images[e.v].clone())
        };
        report.edges.push(EdgeExpansion { cell: SkeletonCell::Edge(i), slopes, expansion: m, image });
    }
    for (j, r) in sk.rays.iter().enumerate() {
        let slopes: IntVec = coords.iter().map(|f| f.ray_slopes[j]).collect();
        let m = content(&slopes);
        let image = if m == 0 {
            CellImage::Collapsed(images[r.base].clone())
        } else {
            pieces.push(Piece::Ray(images[r.base].clone(), slopes.clone(), m));
            CellImage::Ray(images[r.base].clone(), slopes.clone())
        };
        report.rays.push(EdgeExpansion { cell: SkeletonCell::Ray(r.puncture.clone()), slopes, expansion: m, image });
    }
    Ok((TropicalComplex::from_pieces(coords.len(), &pieces, &images), report))
}

/// Lattice length of the image of a skeleton edge (zero if collapsed).
pub fn image_length(report: &EdgeExpansionReport, edge: usize) -> Rat {
    match &report.edges[edge].image {
        CellImage::Segment(a, b) => lattice_length(a, b),
        _ => Rat::zero(),
    }
}

/// Total lattice length of the images of the given skeleton edges, counted
/// with expansion (a 2-to-1 image is counted twice).
pub fn image_cycle_length(sk: &Skeleton, report: &EdgeExpansionReport, edges: &[usize]) -> Rat {
    edges
        .iter()
        .map(|&i| Rat::from_int(report.edges[i].expansion as i64) * &sk.edges[i].length)
        .sum()
}
