use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered simplex in canonical form: strictly increasing vertex ids.
///
/// The empty simplex has dimension -1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees the vertices are strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }

    /// Face obtained by deleting the vertex at position `i`.
    pub fn facet_without(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    /// The simplex with `v` added, plus the position `v` lands at.
    pub fn with_vertex(&self, v: usize) -> (Simplex, usize) {
        match self.0.binary_search(&v) {
            Ok(pos) => (self.clone(), pos),
            Err(pos) => {
                let mut out = self.0.clone();
                out.insert(pos, v);
                (Simplex(out), pos)
            }
        }
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// Vertices of `self` not in `other`.
    pub fn difference(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A simplex with a chosen vertex order. Cochains evaluate on these with a sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedSimplex {
    vertices: Vec<usize>,
}

impl OrderedSimplex {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(OrderedSimplex { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dim(&self) -> isize {
        self.vertices.len() as isize - 1
    }

    /// Concatenation `self` followed by `other`. Vertex sets must be disjoint.
    pub fn concat(&self, other: &OrderedSimplex) -> Result<OrderedSimplex> {
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices);
        OrderedSimplex::new(v)
    }

    /// Sign of the permutation sorting the vertices into canonical order.
    pub fn parity(&self) -> f64 {
        // count inversions; desk-scale simplices are tiny
        let mut inversions = 0usize;
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                if self.vertices[i] > self.vertices[j] {
                    inversions += 1;
                }
            }
        }
        if inversions.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn canonical(&self) -> Simplex {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        Simplex(v)
    }
}

impl From<&Simplex> for OrderedSimplex {
    fn from(s: &Simplex) -> Self {
        OrderedSimplex { vertices: s.0.clone() }
    }
}

impl fmt::Display for OrderedSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}
