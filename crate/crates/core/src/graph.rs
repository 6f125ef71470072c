//! The associated graph Γ and graph maps between such graphs.

use std::collections::BTreeSet;

use crate::system::{Sym, Word};
use crate::tree::UnionFind;

/// Directed multigraph: vertices are forest components, edges are letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphGamma {
    pub vertex_names: Vec<String>,
    pub edge_names: Vec<String>,
    /// `(source, target)` per edge.
    pub edges: Vec<(usize, usize)>,
}

impl GraphGamma {
    pub fn from_edges(vertex_names: Vec<String>, edge_names: Vec<String>, edges: Vec<(usize, usize)>) -> Self {
        GraphGamma { vertex_names, edge_names, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn components(&self) -> usize {
        let n = self.vertex_count();
        let mut uf = UnionFind::new(n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        (0..n).filter(|&v| uf.find(v) == v).count()
    }

    pub fn is_connected(&self) -> bool {
        self.components() <= 1
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn betti(&self) -> usize {
        self.edge_count() + self.components() - self.vertex_count()
    }

    /// Number of edge ends at each vertex (a loop counts twice).
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count()];
        for &(a, b) in &self.edges {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    pub fn min_valence(&self) -> Option<usize> {
        self.valences().into_iter().min()
    }

    pub fn count_valence_at_least(&self, k: usize) -> usize {
        self.valences().into_iter().filter(|&v| v >= k).count()
    }

    /// Initial vertex of a symbol viewed as an oriented edge.
    pub fn source(&self, s: Sym) -> usize {
        let (a, b) = self.edges[s.index];
        if s.inverse {
            b
        } else {
            a
        }
    }

    pub fn target(&self, s: Sym) -> usize {
        self.source(s.inv())
    }

    /// Symbols with initial vertex `v`, in canonical order: the set `I(v)`.
    pub fn outgoing(&self, v: usize) -> Vec<Sym> {
        (0..2 * self.edge_count()).map(Sym::from_id).filter(|&s| self.source(s) == v).collect()
    }

    /// Whether the rose: one vertex, all edges loops.
    pub fn is_rose(&self) -> bool {
        self.vertex_count() == 1
    }

    /// First Betti number of the subgraph spanned by `edges` (with their endpoints).
    pub fn sub_betti(&self, edges: &BTreeSet<usize>) -> usize {
        let verts: BTreeSet<usize> = edges.iter().flat_map(|&e| [self.edges[e].0, self.edges[e].1]).collect();
        let mut uf = UnionFind::new(self.vertex_count());
        for &e in edges {
            uf.union(self.edges[e].0, self.edges[e].1);
        }
        let comps = verts.iter().filter(|&&v| uf.find(v) == v).count();
        edges.len() + comps - verts.len()
    }

    pub fn edge_label(&self, s: Sym) -> String {
        if s.inverse {
            format!("{}^-1", self.edge_names[s.index])
        } else {
            self.edge_names[s.index].clone()
        }
    }
}

/// A graph morphism `Γ_out -> Γ_in`: vertices to vertices, edges to edge paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    pub vertex_images: Vec<usize>,
    pub edge_images: Vec<Word>,
}

impl GraphMap {
    pub fn identity(g: &GraphGamma) -> GraphMap {
        GraphMap {
            vertex_images: (0..g.vertex_count()).collect(),
            edge_images: (0..g.edge_count()).map(|e| Word(vec![Sym::pos(e)])).collect(),
        }
    }

    /// Image of a path of `Γ_out` in `Γ_in`, freely reduced.
    pub fn map_word(&self, w: &Word) -> Word {
        let mut out = Vec::new();
        for &s in &w.0 {
            let img = &self.edge_images[s.index];
            if s.inverse {
                out.extend(img.inverse().0);
            } else {
                out.extend(img.0.iter().copied());
            }
        }
        Word(out).reduced()
    }

    /// `self: C -> B` followed by `earlier: B -> A`.
    pub fn then(&self, earlier: &GraphMap) -> GraphMap {
        GraphMap {
            vertex_images: self.vertex_images.iter().map(|&v| earlier.vertex_images[v]).collect(),
            edge_images: self.edge_images.iter().map(|w| earlier.map_word(w)).collect(),
        }
    }

    /// Checks that every edge goes to a nonempty path between the images of its endpoints.
    pub fn respects_incidence(&self, out: &GraphGamma, into: &GraphGamma) -> bool {
        if self.vertex_images.len() != out.vertex_count() || self.edge_images.len() != out.edge_count() {
            return false;
        }
        out.edges.iter().enumerate().all(|(e, &(a, b))| {
            let path = &self.edge_images[e].0;
            let Some(first) = path.first() else {
                return false;
            };
            let mut at = into.source(*first);
            if at != self.vertex_images[a] {
                return false;
            }
            for &s in path {
                if into.source(s) != at {
                    return false;
                }
                at = into.target(s);
            }
            at == self.vertex_images[b]
        })
    }
}
