//! Finite pure simplicial complexes given by their facets.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::simplex::Simplex;

/// A pure `n`-dimensional simplicial complex, closed under taking faces.
///
/// Every level `k` in `-1..=n` stores its simplices in sorted order; the
/// position of a simplex in that list is its coordinate in the cochain basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    dim: usize,
    levels: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    cofaces: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkConnectivity {
    pub tau: Simplex,
    pub link_dim: usize,
    pub connected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivityReport {
    pub links: Vec<LinkConnectivity>,
    pub all_connected: bool,
}

impl ConnectivityReport {
    pub fn failures(&self) -> impl Iterator<Item = &LinkConnectivity> {
        self.links.iter().filter(|l| !l.connected)
    }
}

/// Connected components of the facet adjacency graph (facets sharing a codimension-1 face).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GalleryReport {
    pub connected: bool,
    pub components: usize,
    /// Component id of each facet, in facet order.
    pub component_of_facet: Vec<usize>,
}

/// Largest facet size accepted; closure enumerates all `2^size` faces.
pub const MAX_FACET_SIZE: usize = 20;

impl SimplicialComplex {
    /// Downward closure of a list of equal-size facets.
    pub fn from_facets<F, I>(facets: F) -> Result<Self>
    where
        F: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let simplices = facets
            .into_iter()
            .map(|f| Simplex::new(f.into_iter().collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_simplices(simplices)
    }

    pub fn from_simplices(facets: Vec<Simplex>) -> Result<Self> {
        let first = facets.first().ok_or(Error::EmptyInput)?;
        let size = first.len();
        if size == 0 {
            return Err(Error::MixedDimension { expected: 1, found: 0 });
        }
        if size > MAX_FACET_SIZE {
            return Err(Error::BadParams(format!(
                "facets of {size} vertices exceed the limit of {MAX_FACET_SIZE}"
            )));
        }
        if let Some(bad) = facets.iter().find(|f| f.len() != size) {
            return Err(Error::MixedDimension {
                expected: size,
                found: bad.len(),
            });
        }
        let dim = size - 1;
        let mut sets: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 2];
        for facet in &facets {
            let verts = facet.vertices();
            for mask in 0u64..(1u64 << size) {
                let sub: Vec<usize> = (0..size)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| verts[i])
                    .collect();
                let level = sub.len();
                sets[level].insert(Simplex::from_sorted(sub));
            }
        }
        let levels: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<Simplex, usize>> = levels
            .iter()
            .map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let mut cofaces: Vec<Vec<Vec<usize>>> =
            levels.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for level in 1..levels.len() {
            for (j, sigma) in levels[level].iter().enumerate() {
                for i in 0..sigma.len() {
                    let face = sigma.facet_without(i);
                    let fi = index[level - 1][&face];
                    cofaces[level - 1][fi].push(j);
                }
            }
        }
        Ok(SimplicialComplex {
            dim,
            levels,
            index,
            cofaces,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical `k`-simplices; empty outside `-1..=n`.
    pub fn simplices(&self, k: isize) -> &[Simplex] {
        match self.level(k) {
            Some(l) => &self.levels[l],
            None => &[],
        }
    }

    pub fn count(&self, k: isize) -> usize {
        self.simplices(k).len()
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.levels[self.dim + 1]
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.levels[1].iter().map(|s| s.vertices()[0]).collect()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.level(s.dim()).and_then(|l| self.index[l].get(s).copied())
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    /// Positions (in level `k+1`) of the cofaces of the `i`-th `k`-simplex.
    pub fn cofaces(&self, k: isize, i: usize) -> &[usize] {
        match self.level(k) {
            Some(l) => &self.cofaces[l][i],
            None => &[],
        }
    }

    fn level(&self, k: isize) -> Option<usize> {
        if k < -1 || k > self.dim as isize {
            None
        } else {
            Some((k + 1) as usize)
        }
    }

    /// The link of `tau`, keeping the original vertex ids.
    pub fn link(&self, tau: &Simplex) -> Result<SimplicialComplex> {
        if !self.contains(tau) {
            return Err(Error::SimplexNotInComplex(tau.clone()));
        }
        if tau.dim() >= self.dim as isize {
            return Err(Error::DegreeOutOfRange {
                degree: tau.dim(),
                min: -1,
                max: self.dim as isize - 1,
            });
        }
        if tau.is_empty() {
            return Ok(self.clone());
        }
        let facets: Vec<Simplex> = self
            .facets()
            .iter()
            .filter(|f| tau.is_face_of(f))
            .map(|f| f.difference(tau))
            .collect();
        SimplicialComplex::from_simplices(facets)
    }

    /// The pure `k`-complex whose facets are the `k`-simplices.
    pub fn skeleton(&self, k: usize) -> Result<SimplicialComplex> {
        if k > self.dim {
            return Err(Error::DegreeOutOfRange {
                degree: k as isize,
                min: 0,
                max: self.dim as isize,
            });
        }
        SimplicialComplex::from_simplices(self.simplices(k as isize).to_vec())
    }

    /// Breadth-first search over the 1-skeleton.
    pub fn is_one_skeleton_connected(&self) -> bool {
        let n = self.count(0);
        if n <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for e in self.simplices(1) {
            let a = self.index_of(&Simplex::vertex(e.vertices()[0])).unwrap();
            let b = self.index_of(&Simplex::vertex(e.vertices()[1])).unwrap();
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n
    }

    /// Checks the 1-skeleton of every link of dimension at least one, `X` itself included.
    pub fn check_all_links_connected(&self) -> ConnectivityReport {
        let mut links = Vec::new();
        for k in -1..=(self.dim as isize - 2) {
            for tau in self.simplices(k) {
                let link = self.link(tau).expect("tau is in the complex");
                links.push(LinkConnectivity {
                    tau: tau.clone(),
                    link_dim: link.dim(),
                    connected: link.is_one_skeleton_connected(),
                });
            }
        }
        let all_connected = links.iter().all(|l| l.connected);
        ConnectivityReport {
            links,
            all_connected,
        }
    }

    fn facet_adjacency(&self) -> Vec<Vec<usize>> {
        let n = self.dim as isize;
        let mut adj = vec![Vec::new(); self.count(n)];
        for i in 0..self.count(n - 1) {
            let cof = self.cofaces(n - 1, i);
            for (a, &x) in cof.iter().enumerate() {
                for &y in &cof[a + 1..] {
                    adj[x].push(y);
                    adj[y].push(x);
                }
            }
        }
        adj
    }

    pub fn gallery_report(&self) -> GalleryReport {
        let adj = self.facet_adjacency();
        let mut component_of_facet = vec![usize::MAX; adj.len()];
        let mut components = 0;
        for start in 0..adj.len() {
            if component_of_facet[start] != usize::MAX {
                continue;
            }
            component_of_facet[start] = components;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if component_of_facet[w] == usize::MAX {
                        component_of_facet[w] = components;
                        queue.push_back(w);
                    }
                }
            }
            components += 1;
        }
        GalleryReport {
            connected: components <= 1,
            components,
            component_of_facet,
        }
    }

    pub fn is_gallery_connected(&self) -> bool {
        self.gallery_report().connected
    }

    /// A shortest gallery from a facet containing `u` to one containing `v`.
    pub fn gallery(&self, u: usize, v: usize) -> Option<Vec<Simplex>> {
        let facets = self.facets();
        let adj = self.facet_adjacency();
        let mut prev = vec![usize::MAX; facets.len()];
        let mut seen = vec![false; facets.len()];
        let mut queue = VecDeque::new();
        for (i, f) in facets.iter().enumerate() {
            if f.contains(u) {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            if facets[i].contains(v) {
                let mut path = vec![facets[i].clone()];
                let mut cur = i;
                while prev[cur] != usize::MAX {
                    cur = prev[cur];
                    path.push(facets[cur].clone());
                }
                path.reverse();
                return Some(path);
            }
            for &w in &adj[i] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = i;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Finds a side assignment by colouring one facet and propagating across
    /// shared codimension-1 faces.
    pub fn detect_partition(&self) -> Result<Partition> {
        let facets = self.facets();
        let gallery = self.gallery_report();
        if !gallery.connected {
            return Err(Error::NotGalleryConnected);
        }
        let adj = self.facet_adjacency();
        let mut side: HashMap<usize, usize> = HashMap::new();
        for (c, &v) in facets[0].vertices().iter().enumerate() {
            side.insert(v, c);
        }
        let mut seen = vec![false; facets.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for &w in &adj[i] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                let facet = &facets[w];
                let used: BTreeSet<usize> = facet
                    .vertices()
                    .iter()
                    .filter_map(|v| side.get(v).copied())
                    .collect();
                let missing: Vec<usize> = (0..=self.dim).filter(|c| !used.contains(c)).collect();
                for &v in facet.vertices() {
                    if side.contains_key(&v) {
                        continue;
                    }
                    match missing.as_slice() {
                        [c] => {
                            side.insert(v, *c);
                        }
                        _ => {
                            return Err(Error::NotPartite(format!(
                                "facet {facet} repeats a side"
                            )))
                        }
                    }
                }
                queue.push_back(w);
            }
        }
        let partition = Partition::from_map(side.into_iter().collect());
        partition.validate(self)?;
        Ok(partition)
    }
}
