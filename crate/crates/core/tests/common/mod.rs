//! Brute-force oracles over plain set partitions, sharing no code with the library.
//!
//! A locus is a partition of `0..n` given by canonical block labels. Coordinates in one
//! block agree. The first `anchors` points are pinned constants that must stay in
//! distinct blocks, which models the anchored polydiagonals of `(ℙ¹)ⁿ⁻³` with ground set
//! `{0, 1, ∞, 4, …, n}`. Codimension (in units of `m`) is `n − #blocks`.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use wonderful::diagonal::{Anchor, AnchoredPolydiagonal, Polydiagonal};

pub type Part = Vec<usize>;

#[derive(Clone, Copy, Debug)]
pub struct Space {
    pub n: usize,
    pub anchors: usize,
}

pub fn canon(labels: &[usize]) -> Part {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let k = map.len();
            *map.entry(*l).or_insert(k)
        })
        .collect()
}

impl Space {
    pub fn diagonals(n: usize) -> Space {
        Space { n, anchors: 0 }
    }

    pub fn anchored(n: usize) -> Space {
        Space { n, anchors: 3 }
    }

    pub fn ambient(&self) -> Part {
        (0..self.n).collect()
    }

    pub fn part_of(&self, groups: &[Vec<usize>]) -> Part {
        let mut labels: Vec<usize> = (0..self.n).collect();
        for g in groups {
            for &x in g {
                labels[x] = g[0];
            }
        }
        canon(&labels)
    }

    pub fn blocks(&self, p: &Part) -> usize {
        p.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn codim(&self, p: &Part) -> usize {
        self.n - self.blocks(p)
    }

    pub fn meet(&self, a: &Part, b: &Part) -> Option<Part> {
        let mut labels: Vec<usize> = a.clone();
        loop {
            let mut changed = false;
            for i in 0..self.n {
                for j in 0..self.n {
                    if (labels[i] == labels[j] || b[i] == b[j]) && labels[i] != labels[j] {
                        let (lo, hi) = (labels[i].min(labels[j]), labels[i].max(labels[j]));
                        for l in labels.iter_mut() {
                            if *l == hi {
                                *l = lo;
                            }
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..self.anchors {
            for j in 0..i {
                if labels[i] == labels[j] {
                    return None;
                }
            }
        }
        Some(canon(&labels))
    }

    pub fn meet_all(&self, items: &[&Part]) -> Option<Part> {
        let mut acc = self.ambient();
        for x in items {
            acc = self.meet(&acc, x)?;
        }
        Some(acc)
    }

    /// `a ⊇ b` as loci: every equation of `a` holds on `b`.
    pub fn contains(&self, a: &Part, b: &Part) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| a[i] != a[j] || b[i] == b[j]))
    }

    pub fn transversal(&self, items: &[&Part]) -> bool {
        match self.meet_all(items) {
            None => false,
            Some(s) => {
                items.len() == 1
                    || self.codim(&s) == items.iter().map(|x| self.codim(x)).sum::<usize>()
            }
        }
    }

    pub fn closure(&self, gens: &[Part]) -> Vec<Part> {
        let mut set: Vec<Part> = Vec::new();
        for g in gens {
            if !set.contains(g) {
                set.push(g.clone());
            }
        }
        loop {
            let mut grown = false;
            for i in 0..set.len() {
                for j in 0..i {
                    if let Some(s) = self.meet(&set[i], &set[j]) {
                        if !set.contains(&s) {
                            set.push(s);
                            grown = true;
                        }
                    }
                }
            }
            if !grown {
                return set;
            }
        }
    }

    pub fn minimal(&self, items: &[Part]) -> Vec<Part> {
        items
            .iter()
            .filter(|g| !items.iter().any(|h| h != *g && self.contains(g, h)))
            .cloned()
            .collect()
    }

    pub fn factors(&self, building: &[Part], s: &Part) -> Vec<Part> {
        let above: Vec<Part> = building
            .iter()
            .filter(|g| self.contains(g, s))
            .cloned()
            .collect();
        self.minimal(&above)
    }

    pub fn is_building(&self, building: &[Part]) -> Option<Part> {
        for s in self.closure(building) {
            let f = self.factors(building, &s);
            let refs: Vec<&Part> = f.iter().collect();
            if f.is_empty() || self.meet_all(&refs).as_ref() != Some(&s) || !self.transversal(&refs)
            {
                return Some(s);
            }
        }
        None
    }

    /// The recursive minimal-elements definition of a nest, verbatim.
    pub fn is_nest(&self, building: &[Part], t: &[Part]) -> bool {
        if t.is_empty() {
            return true;
        }
        let mins = self.minimal(t);
        let refs: Vec<&Part> = mins.iter().collect();
        let Some(s) = self.meet_all(&refs) else {
            return false;
        };
        let f: BTreeSet<Part> = self.factors(building, &s).into_iter().collect();
        if f != mins.iter().cloned().collect() {
            return false;
        }
        mins.iter().all(|a| {
            let upper: Vec<Part> = t
                .iter()
                .filter(|b| *b != a && self.contains(b, a))
                .cloned()
                .collect();
            self.is_nest(building, &upper)
        })
    }

    /// Nests as the unions of factors along flags of the induced arrangement.
    pub fn nests_from_flags(&self, building: &[Part]) -> HashSet<BTreeSet<Part>> {
        let arr = self.closure(building);
        let mut out = HashSet::new();
        let mut chain: Vec<usize> = Vec::new();
        self.chains(&arr, building, &mut chain, &mut out);
        out
    }

    fn chains(
        &self,
        arr: &[Part],
        building: &[Part],
        chain: &mut Vec<usize>,
        out: &mut HashSet<BTreeSet<Part>>,
    ) {
        if !chain.is_empty() {
            let t: BTreeSet<Part> = chain
                .iter()
                .flat_map(|&i| self.factors(building, &arr[i]))
                .collect();
            out.insert(t);
        }
        for k in 0..arr.len() {
            let ok = match chain.last() {
                None => true,
                Some(&l) => arr[k] != arr[l] && self.contains(&arr[k], &arr[l]),
            };
            if ok {
                chain.push(k);
                self.chains(arr, building, chain, out);
                chain.pop();
            }
        }
    }

    /// All nonempty nests by running the recursive definition on every subset.
    pub fn all_nests(&self, building: &[Part]) -> Vec<BTreeSet<Part>> {
        let mut out = Vec::new();
        for mask in 1u64..(1 << building.len()) {
            let t: Vec<Part> = (0..building.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| building[i].clone())
                .collect();
            if self.is_nest(building, &t) {
                out.push(t.into_iter().collect());
            }
        }
        out
    }
}

pub fn from_polydiagonal(p: &Polydiagonal) -> Part {
    let sp = Space::diagonals(p.n() as usize);
    let groups: Vec<Vec<usize>> = p
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&i| i as usize - 1).collect())
        .collect();
    sp.part_of(&groups)
}

/// Ground set `0, 1, ∞, 4, …, n` mapped to `0..n`.
pub fn from_anchored(p: &AnchoredPolydiagonal) -> Part {
    let sp = Space::anchored(p.n() as usize);
    let groups: Vec<Vec<usize>> = p
        .blocks()
        .iter()
        .map(|b| {
            let mut g: Vec<usize> = Vec::new();
            if let Some(a) = b.anchor {
                g.push(match a {
                    Anchor::Zero => 0,
                    Anchor::One => 1,
                    Anchor::Infinity => 2,
                });
            }
            g.extend(b.members.iter().map(|&i| i as usize - 1));
            g
        })
        .collect();
    sp.part_of(&groups)
}

/// Every diagonal Δ_I with |I| ≥ 2 of Xⁿ, by subsets.
pub fn fm_oracle(n: usize) -> Vec<Part> {
    let sp = Space::diagonals(n);
    (0u32..(1 << n))
        .filter(|m| m.count_ones() >= 2)
        .map(|m| sp.part_of(&[(0..n).filter(|i| m >> i & 1 == 1).collect()]))
        .collect()
}

/// Every set partition of `0..n` except the discrete one.
pub fn all_partitions(n: usize) -> Vec<Part> {
    let sp = Space::diagonals(n);
    let mut out = Vec::new();
    let total = (n as u32).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let labels: Vec<usize> = (0..n)
            .map(|_| {
                let l = (c % n as u32) as usize;
                c /= n as u32;
                l
            })
            .collect();
        let p = canon(&labels);
        if sp.blocks(&p) < n && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Vertex sets of vertex-2-connected subgraphs, by brute force over edge subsets.
pub fn v2c_vertex_sets(n: usize, edges: &[(usize, usize)]) -> BTreeSet<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for mask in 1u64..(1 << edges.len()) {
        let es: Vec<(usize, usize)> = (0..edges.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| edges[i])
            .collect();
        let vs: BTreeSet<usize> = es.iter().flat_map(|&(a, b)| [a, b]).collect();
        let connected_without = |skip: Option<usize>| {
            let live: Vec<usize> = vs.iter().copied().filter(|&v| Some(v) != skip).collect();
            let mut seen = BTreeSet::from([live[0]]);
            let mut stack = vec![live[0]];
            while let Some(v) = stack.pop() {
                for &(a, b) in &es {
                    for (x, y) in [(a, b), (b, a)] {
                        if x == v && Some(y) != skip && seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
            }
            seen.len() == live.len()
        };
        if connected_without(None) && vs.iter().all(|&v| connected_without(Some(v))) {
            out.insert(vs);
        }
    }
    let _ = n;
    out
}

/// Partitions by connected components of every full edge subset with an edge.
pub fn full_subgraph_partitions(n: usize, edges: &[(usize, usize)]) -> BTreeSet<Part> {
    let sp = Space::diagonals(n);
    let mut out = BTreeSet::new();
    for mask in 1u64..(1 << edges.len()) {
        let es: Vec<(usize, usize)> = (0..edges.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| edges[i])
            .collect();
        let groups: Vec<Vec<usize>> = es.iter().map(|&(a, b)| vec![a - 1, b - 1]).collect();
        let p = sp
            .meet_all(
                &groups
                    .iter()
                    .map(|g| sp.part_of(std::slice::from_ref(g)))
                    .collect::<Vec<_>>()
                    .iter()
                    .collect::<Vec<_>>(),
            )
            .unwrap();
        let full = edges
            .iter()
            .all(|&(a, b)| p[a - 1] != p[b - 1] || es.contains(&(a, b)));
        if full {
            out.insert(p);
        }
    }
    out
}

/// All graphs on `1..=n` as edge lists.
pub fn all_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect();
    (0u64..(1 << pairs.len()))
        .map(|m| {
            (0..pairs.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect()
        })
        .collect()
}
