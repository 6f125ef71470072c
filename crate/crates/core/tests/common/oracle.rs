//! Brute-force oracles shared by the integration tests.

use std::collections::BTreeSet;

use treesplit::iet::{IntervalExchange, RauzyKind};
use treesplit::{Scalar, SystemOfIsometries, Word};

/// An interval exchange read off as plain data: letter lengths, top and bottom orders.
pub struct Exchange {
    pub lengths: Vec<Scalar>,
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

impl Exchange {
    pub fn of(e: &IntervalExchange) -> Self {
        Exchange { lengths: e.lengths().to_vec(), top: e.top().to_vec(), bottom: e.bottom().to_vec() }
    }

    pub fn starts(&self, order: &[usize]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.lengths.len()];
        let mut acc = Scalar::zero();
        for &j in order {
            out[j] = acc.clone();
            acc = &acc + &self.lengths[j];
        }
        out
    }

    pub fn total(&self) -> Scalar {
        self.lengths.iter().fold(Scalar::zero(), |a, l| &a + l)
    }

    /// Letter whose half-open interval in `order` holds `x`.
    pub fn which(&self, starts: &[Scalar], x: &Scalar) -> usize {
        (0..self.lengths.len()).find(|&j| &starts[j] <= x && x < &(&starts[j] + &self.lengths[j])).unwrap()
    }

    pub fn forward(&self, x: &Scalar) -> (usize, Scalar) {
        let (t, b) = (self.starts(&self.top), self.starts(&self.bottom));
        let j = self.which(&t, x);
        (j, &(x - &t[j]) + &b[j])
    }

    pub fn backward(&self, y: &Scalar) -> Scalar {
        let (t, b) = (self.starts(&self.top), self.starts(&self.bottom));
        let j = self.which(&b, y);
        &(y - &b[j]) + &t[j]
    }

    /// Itineraries of length `m` of the cylinders of positive length, and their inverses.
    pub fn coding(&self, m: usize) -> BTreeSet<Vec<(usize, bool)>> {
        let mut cuts: BTreeSet<Scalar> = self.starts(&self.top).into_iter().collect();
        let mut layer: Vec<Scalar> = cuts.iter().cloned().collect();
        for _ in 1..m {
            layer = layer.iter().map(|y| self.backward(y)).collect();
            cuts.extend(layer.iter().cloned());
        }
        let mut pts: Vec<Scalar> = cuts.into_iter().collect();
        pts.push(self.total());
        let mut out = BTreeSet::new();
        for w in pts.windows(2) {
            let mut x = &(&w[0] + &w[1]) / &Scalar::int(2);
            let mut word = Vec::with_capacity(m);
            for _ in 0..m {
                let (j, y) = self.forward(&x);
                word.push((j, false));
                x = y;
            }
            let inv: Vec<(usize, bool)> = word.iter().rev().map(|&(j, _)| (j, true)).collect();
            out.insert(word);
            out.insert(inv);
        }
        out
    }

    /// Every symbol defined at `x` on closed intervals, with the image of `x`.
    pub fn closed_moves(&self, x: &Scalar) -> Vec<(usize, bool, Scalar)> {
        let (t, b) = (self.starts(&self.top), self.starts(&self.bottom));
        let mut out = Vec::new();
        for j in 0..self.lengths.len() {
            let (te, be) = (&t[j] + &self.lengths[j], &b[j] + &self.lengths[j]);
            if &t[j] <= x && x <= &te {
                out.push((j, false, &(x - &t[j]) + &b[j]));
            }
            if &b[j] <= x && x <= &be {
                out.push((j, true, &(x - &b[j]) + &t[j]));
            }
        }
        out
    }

    /// Whether letter `j` is defined on a germ at `x` pointing right (`up`) or left.
    pub fn defined_on_side(&self, j: usize, x: &Scalar, up: bool) -> bool {
        let t = &self.starts(&self.top)[j];
        let e = t + &self.lengths[j];
        if up {
            t <= x && x < &e
        } else {
            t < x && x <= &e
        }
    }

    /// Breadth-first orbit of `x` to radius `r`: points with their depths, and
    /// links `(u, letter, v)` oriented along the letter.
    pub fn orbit(&self, x: &Scalar, r: usize) -> (Vec<(Scalar, usize)>, BTreeSet<(usize, usize, usize)>) {
        let mut nodes = vec![(x.clone(), 0)];
        let mut links = BTreeSet::new();
        let mut i = 0;
        while i < nodes.len() {
            let (y, d) = nodes[i].clone();
            if d < r {
                for (j, inv, z) in self.closed_moves(&y) {
                    let v = match nodes.iter().position(|(p, _)| *p == z) {
                        Some(v) => v,
                        None => {
                            nodes.push((z, d + 1));
                            nodes.len() - 1
                        }
                    };
                    links.insert(if inv { (v, j, i) } else { (i, j, v) });
                }
            }
            i += 1;
        }
        (nodes, links)
    }

    /// Number of classes of germs at the orbit points, glued along the links.
    pub fn germ_classes(&self, nodes: &[(Scalar, usize)], links: &BTreeSet<(usize, usize, usize)>) -> usize {
        let total = self.total();
        let mut germs: Vec<(usize, bool)> = Vec::new();
        for (i, (y, _)) in nodes.iter().enumerate() {
            if y.is_positive() {
                germs.push((i, false));
            }
            if y < &total {
                germs.push((i, true));
            }
        }
        let mut parent: Vec<usize> = (0..germs.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] == x {
                x
            } else {
                let r = find(p, p[x]);
                p[x] = r;
                r
            }
        }
        for &(u, j, v) in links {
            for up in [false, true] {
                if self.defined_on_side(j, &nodes[u].0, up) {
                    let a = germs.iter().position(|&g| g == (u, up)).unwrap();
                    let b = germs.iter().position(|&g| g == (v, up)).unwrap();
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        (0..germs.len()).filter(|&g| find(&mut parent, g) == g).count()
    }

    /// Right Rauzy-Veech induction: the longer of the two last intervals loses the other.
    pub fn rauzy(&mut self) -> Option<RauzyKind> {
        let t = *self.top.last().unwrap();
        let b = *self.bottom.last().unwrap();
        match self.lengths[t].cmp(&self.lengths[b]) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => {
                self.lengths[t] = &self.lengths[t] - &self.lengths[b];
                self.bottom.pop();
                let at = self.bottom.iter().position(|&x| x == t).unwrap();
                self.bottom.insert(at + 1, b);
                Some(RauzyKind::Top)
            }
            std::cmp::Ordering::Less => {
                self.lengths[b] = &self.lengths[b] - &self.lengths[t];
                self.top.pop();
                let at = self.top.iter().position(|&x| x == b).unwrap();
                self.top.insert(at + 1, t);
                Some(RauzyKind::Bottom)
            }
        }
    }
}

pub fn plain(w: &Word) -> Vec<(usize, bool)> {
    w.0.iter().map(|s| (s.index, s.inverse)).collect()
}

/// `b1` and valences of the graph with one vertex per component and one edge per letter.
pub fn graph_oracle(s: &SystemOfIsometries) -> (usize, Vec<usize>) {
    let v = s.forest.len();
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] == x {
            x
        } else {
            let r = find(p, p[x]);
            p[x] = r;
            r
        }
    }
    let mut valence = vec![0; v];
    for l in &s.letters {
        let (a, b) = (l.map.domain.tree, l.map.image.tree);
        valence[a] += 1;
        valence[b] += 1;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let comps = (0..v).filter(|&x| find(&mut parent, x) == x).count();
    (s.letters.len() + comps - v, valence)
}

/// Closure under the flip and chaining with distinct ends, by fixpoint iteration.
pub fn closure_oracle(pairs: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut out = pairs.clone();
    loop {
        let mut next = out.clone();
        for &(i, j) in &out {
            next.insert((j, i));
            for &(k, l) in &out {
                if j == k && i != l {
                    next.insert((i, l));
                }
            }
        }
        if next == out {
            return out;
        }
        out = next;
    }
}
