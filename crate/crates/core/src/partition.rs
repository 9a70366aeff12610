use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Side labels for the vertices of a partite complex.
///
/// Labels are kept when passing to links, so a link of a `k`-simplex has
/// `k + 1` labels with no vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    side_of: BTreeMap<usize, usize>,
}

impl Partition {
    pub fn from_map(side_of: BTreeMap<usize, usize>) -> Self {
        Partition { side_of }
    }

    /// `sides[j]` lists the vertices of side `j`.
    pub fn from_sides(sides: &[Vec<usize>]) -> Self {
        let side_of = sides
            .iter()
            .enumerate()
            .flat_map(|(j, vs)| vs.iter().map(move |&v| (v, j)))
            .collect();
        Partition { side_of }
    }

    pub fn side(&self, v: usize) -> Option<usize> {
        self.side_of.get(&v).copied()
    }

    pub fn map(&self) -> &BTreeMap<usize, usize> {
        &self.side_of
    }

    /// Distinct side labels in increasing order.
    pub fn labels(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.side_of.values().copied().collect();
        l.sort_unstable();
        l.dedup();
        l
    }

    pub fn members(&self, side: usize) -> Vec<usize> {
        self.side_of
            .iter()
            .filter(|(_, &s)| s == side)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Vertex blocks sorted by smallest member; label-independent.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks: Vec<Vec<usize>> = self.labels().into_iter().map(|l| self.members(l)).collect();
        blocks.sort();
        blocks
    }

    /// Every vertex labelled and every facet a transversal of `n + 1` distinct labels.
    pub fn validate(&self, x: &SimplicialComplex) -> Result<()> {
        for v in x.vertices() {
            if !self.side_of.contains_key(&v) {
                return Err(Error::NotPartite(format!("vertex {v} has no side")));
            }
        }
        for f in x.facets() {
            let mut labels: Vec<usize> = f.vertices().iter().map(|v| self.side_of[v]).collect();
            labels.sort_unstable();
            labels.dedup();
            if labels.len() != f.len() {
                return Err(Error::NotPartite(format!("facet {f} repeats a side")));
            }
        }
        Ok(())
    }

    /// The partition seen by a subcomplex (typically a link).
    pub fn restrict(&self, sub: &SimplicialComplex) -> Partition {
        let side_of = sub
            .vertices()
            .into_iter()
            .filter_map(|v| self.side_of.get(&v).map(|&s| (v, s)))
            .collect();
        Partition { side_of }
    }

    /// One past the largest label in use.
    pub fn side_count(&self) -> usize {
        self.labels().last().map_or(0, |&m| m + 1)
    }
}
