use std::collections::HashMap;

/// A finite graph with colored vertices and colored arcs. Undirected edges are
/// stored as a pair of arcs of the same color; directed edges as an arc of
/// color `c` and a reverse arc of color `c ^ 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColoredGraph {
    pub vertex_color: Vec<u32>,
    pub adj: Vec<Vec<(u8, usize)>>,
}

impl ColoredGraph {
    pub fn new(n: usize) -> ColoredGraph {
        ColoredGraph { vertex_color: vec![0; n], adj: vec![Vec::new(); n] }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_undirected(&mut self, a: usize, b: usize, color: u8) {
        self.adj[a].push((color, b));
        self.adj[b].push((color, a));
    }

    /// Adds `a -> b` with arc color `2c` and its reverse with color `2c + 1`.
    pub fn add_directed(&mut self, a: usize, b: usize, color: u8) {
        self.adj[a].push((2 * color, b));
        self.adj[b].push((2 * color + 1, a));
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn sorted_adj(&self) -> Vec<Vec<(u8, usize)>> {
        self.adj
            .iter()
            .map(|l| {
                let mut l = l.clone();
                l.sort_unstable();
                l
            })
            .collect()
    }

    /// Breadth-first distances from `root`.
    pub fn distances(&self, root: usize) -> Vec<Option<usize>> {
        self.multi_source_distances(&[root])
    }

    pub fn multi_source_distances(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        let mut queue = std::collections::VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap() + 1;
            for &(_, y) in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Induced subgraph on `keep` (in that order).
    pub fn induced(&self, keep: &[usize]) -> ColoredGraph {
        let mut pos = HashMap::with_capacity(keep.len());
        for (i, &x) in keep.iter().enumerate() {
            pos.insert(x, i);
        }
        let mut g = ColoredGraph::new(keep.len());
        for (i, &x) in keep.iter().enumerate() {
            g.vertex_color[i] = self.vertex_color[x];
            for &(c, y) in &self.adj[x] {
                if let Some(&j) = pos.get(&y) {
                    g.adj[i].push((c, j));
                }
            }
        }
        g
    }

    /// Ball of radius `r` around `root`; the root becomes vertex 0.
    pub fn ball(&self, root: usize, r: usize) -> ColoredGraph {
        let dist = self.distances(root);
        let mut keep: Vec<usize> = (0..self.len()).filter(|&x| dist[x].map_or(false, |d| d <= r)).collect();
        keep.sort_by_key(|&x| (dist[x], x));
        self.induced(&keep)
    }
}

/// Isomorphism of colored graphs sending `root1` to `root2`, by color
/// refinement and individualization with backtracking. Returns the vertex map.
pub fn rooted_isomorphism(g1: &ColoredGraph, root1: usize, g2: &ColoredGraph, root2: usize) -> Option<Vec<usize>> {
    if g1.len() != g2.len() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let a1 = g1.sorted_adj();
    let a2 = g2.sorted_adj();
    let n = g1.len();
    let mut colors1: Vec<u32> = g1.vertex_color.iter().map(|&c| 2 * c).collect();
    let mut colors2: Vec<u32> = g2.vertex_color.iter().map(|&c| 2 * c).collect();
    colors1[root1] += 1;
    colors2[root2] += 1;
    let mut st = IsoState { a1: &a1, a2: &a2, n };
    let (c1, c2) = st.refine(colors1, colors2)?;
    colors1 = c1;
    colors2 = c2;
    let map = st.search(colors1, colors2)?;
    let ok = (0..n).all(|x| {
        let mut img: Vec<(u8, usize)> = a1[x].iter().map(|&(c, y)| (c, map[y])).collect();
        img.sort_unstable();
        img == a2[map[x]]
    });
    ok.then_some(map)
}

struct IsoState<'a> {
    a1: &'a [Vec<(u8, usize)>],
    a2: &'a [Vec<(u8, usize)>],
    n: usize,
}

impl IsoState<'_> {
    /// Joint refinement of both colorings; `None` when the color histograms differ.
    fn refine(&mut self, mut c1: Vec<u32>, mut c2: Vec<u32>) -> Option<(Vec<u32>, Vec<u32>)> {
        let mut classes = usize::MAX;
        loop {
            let mut table: HashMap<(u32, Vec<(u8, u32)>), u32> = HashMap::new();
            let sig = |c: &[u32], adj: &[Vec<(u8, usize)>], x: usize| {
                let mut s: Vec<(u8, u32)> = adj[x].iter().map(|&(e, y)| (e, c[y])).collect();
                s.sort_unstable();
                (c[x], s)
            };
            let mut keys1 = Vec::with_capacity(self.n);
            let mut keys2 = Vec::with_capacity(self.n);
            for x in 0..self.n {
                keys1.push(sig(&c1, self.a1, x));
                keys2.push(sig(&c2, self.a2, x));
            }
            let mut sorted: Vec<&(u32, Vec<(u8, u32)>)> = keys1.iter().collect();
            sorted.sort();
            sorted.dedup();
            for (i, k) in sorted.into_iter().enumerate() {
                table.insert(k.clone(), i as u32);
            }
            let mut n1 = Vec::with_capacity(self.n);
            let mut n2 = Vec::with_capacity(self.n);
            for x in 0..self.n {
                n1.push(table[&keys1[x]]);
                n2.push(*table.get(&keys2[x])?);
            }
            let mut h1 = n1.clone();
            let mut h2 = n2.clone();
            h1.sort_unstable();
            h2.sort_unstable();
            if h1 != h2 {
                return None;
            }
            let count = table.len();
            c1 = n1;
            c2 = n2;
            if count == classes {
                return Some((c1, c2));
            }
            classes = count;
        }
    }

    fn search(&mut self, c1: Vec<u32>, c2: Vec<u32>) -> Option<Vec<usize>> {
        let mut members: HashMap<u32, Vec<usize>> = HashMap::new();
        for (x, &c) in c1.iter().enumerate() {
            members.entry(c).or_default().push(x);
        }
        let target = members.iter().filter(|(_, v)| v.len() > 1).min_by_key(|(c, v)| (v.len(), **c));
        let Some((&color, class)) = target else {
            let mut pos = HashMap::with_capacity(self.n);
            for (y, &c) in c2.iter().enumerate() {
                pos.insert(c, y);
            }
            return Some(c1.iter().map(|c| pos[c]).collect());
        };
        let x = class[0];
        let fresh = self.n as u32 + 1;
        for y in (0..self.n).filter(|&y| c2[y] == color) {
            let mut d1 = c1.clone();
            let mut d2 = c2.clone();
            d1[x] = fresh;
            d2[y] = fresh;
            if let Some((r1, r2)) = self.refine(d1, d2) {
                if let Some(map) = self.search(r1, r2) {
                    let ok = (0..self.n).all(|u| {
                        let mut img: Vec<(u8, usize)> = self.a1[u].iter().map(|&(c, v)| (c, map[v])).collect();
                        img.sort_unstable();
                        img == self.a2[map[u]]
                    });
                    if ok {
                        return Some(map);
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> ColoredGraph {
        let mut g = ColoredGraph::new(n);
        for i in 0..n {
            g.add_undirected(i, (i + 1) % n, 0);
        }
        g
    }

    #[test]
    fn cycles() {
        assert!(rooted_isomorphism(&cycle(6), 0, &cycle(6), 3).is_some());
        let mut two_triangles = ColoredGraph::new(6);
        for (a, b) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
            two_triangles.add_undirected(a, b, 0);
        }
        assert!(rooted_isomorphism(&cycle(6), 0, &two_triangles, 0).is_none());
    }

    #[test]
    fn direction_matters() {
        let mut a = ColoredGraph::new(3);
        a.add_directed(0, 1, 0);
        a.add_directed(0, 2, 0);
        let mut b = ColoredGraph::new(3);
        b.add_directed(0, 1, 0);
        b.add_directed(2, 0, 0);
        assert!(rooted_isomorphism(&a, 0, &b, 0).is_none());
        assert!(rooted_isomorphism(&a, 0, &a, 0).is_some());
    }

    #[test]
    fn regular_graphs_need_search() {
        // Two 3-regular graphs on 6 vertices: prism and K_{3,3}.
        let mut prism = ColoredGraph::new(6);
        for (a, b) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)] {
            prism.add_undirected(a, b, 0);
        }
        let mut k33 = ColoredGraph::new(6);
        for a in 0..3 {
            for b in 3..6 {
                k33.add_undirected(a, b, 0);
            }
        }
        assert!(rooted_isomorphism(&prism, 0, &k33, 0).is_none());
        let mut relabeled = ColoredGraph::new(6);
        let p = [3, 0, 5, 1, 4, 2];
        for (a, b) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)] {
            relabeled.add_undirected(p[a], p[b], 0);
        }
        let map = rooted_isomorphism(&prism, 2, &relabeled, p[2]).unwrap();
        assert_eq!(map[2], p[2]);
    }
}
