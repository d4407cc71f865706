//! Polydiagonals of `Xⁿ` (symbolic `dim X = m`) and anchored polydiagonals of `(ℙ¹)ⁿ⁻³`.

use std::cmp::Ordering;
use std::fmt;

use crate::dim::Dim;
use crate::error::{input, Result};
use crate::linear::Subspace;
use crate::model::Model;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn block_label(block: &[u32], wide: bool) -> String {
    if wide {
        format!(
            "({})",
            block
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        )
    } else {
        block.iter().map(u32::to_string).collect()
    }
}

/// The locus where coordinates agree within each block.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polydiagonal {
    n: u32,
    blocks: Vec<Vec<u32>>,
}

impl Polydiagonal {
    pub fn new(n: u32, blocks: Vec<Vec<u32>>) -> Result<Self> {
        if n < 2 {
            return input("polydiagonals need n ≥ 2");
        }
        let mut seen = vec![false; n as usize + 1];
        let mut canon = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            b.sort_unstable();
            b.dedup();
            if b.len() < 2 {
                return input(format!("block {b:?} has fewer than 2 members"));
            }
            for &i in &b {
                if i == 0 || i > n {
                    return input(format!("index {i} outside 1..={n}"));
                }
                if std::mem::replace(&mut seen[i as usize], true) {
                    return input(format!("index {i} occurs in two blocks"));
                }
            }
            canon.push(b);
        }
        if canon.is_empty() {
            return input("a polydiagonal needs at least one block");
        }
        canon.sort();
        Ok(Polydiagonal { n, blocks: canon })
    }

    /// The diagonal Δ_I.
    pub fn diagonal(n: u32, members: &[u32]) -> Result<Self> {
        Polydiagonal::new(n, vec![members.to_vec()])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// `n − Σ(|b| − 1)`: the dimension divided by `m`.
    pub fn dim_coefficient(&self) -> i64 {
        self.n as i64 - self.blocks.iter().map(|b| b.len() as i64 - 1).sum::<i64>()
    }

    pub fn dim(&self) -> Dim {
        Dim::m(self.dim_coefficient())
    }

    pub fn dim_at(&self, m: i64) -> i64 {
        self.dim().at(m)
    }

    pub fn intersect(&self, other: &Polydiagonal) -> Result<Polydiagonal> {
        if self.n != other.n {
            return input(format!("n mismatch: {} vs {}", self.n, other.n));
        }
        let mut uf = UnionFind::new(self.n as usize + 1);
        for b in self.blocks.iter().chain(&other.blocks) {
            for w in b.windows(2) {
                uf.union(w[0] as usize, w[1] as usize);
            }
        }
        let mut classes: Vec<Vec<u32>> = vec![Vec::new(); self.n as usize + 1];
        for i in 1..=self.n {
            let r = uf.find(i as usize);
            classes[r].push(i);
        }
        Polydiagonal::new(
            self.n,
            classes.into_iter().filter(|c| c.len() >= 2).collect(),
        )
    }

    pub fn contains(&self, other: &Polydiagonal) -> Result<bool> {
        Ok(&self.intersect(other)? == other)
    }

    /// The subspace of ℚⁿ cut out by `x_i = x_j` for `i, j` in a common block (`m = 1`).
    pub fn to_linear(&self) -> Subspace {
        let n = self.n as usize;
        let mut rows = Vec::new();
        for b in &self.blocks {
            for w in b.windows(2) {
                let mut r = vec![0i64; n];
                r[w[0] as usize - 1] = 1;
                r[w[1] as usize - 1] = -1;
                rows.push(r);
            }
        }
        Subspace::from_integers(n, &rows).expect("rows have length n")
    }

    pub fn label(&self) -> String {
        let wide = self.n >= 10;
        let parts: Vec<String> = self.blocks.iter().map(|b| block_label(b, wide)).collect();
        format!("Δ{}", parts.join(","))
    }
}

impl Ord for Polydiagonal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.blocks.len(), &self.blocks).cmp(&(other.n, other.blocks.len(), &other.blocks))
    }
}

impl PartialOrd for Polydiagonal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Polydiagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Polydiagonals of `Xⁿ` with `dim X = m` kept symbolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolydiagonalModel {
    pub n: u32,
}

impl Model for PolydiagonalModel {
    type Elem = Polydiagonal;

    fn ambient_dim(&self) -> Dim {
        Dim::m(self.n as i64)
    }

    fn dim(&self, e: &Polydiagonal) -> Result<Dim> {
        Ok(e.dim())
    }

    fn meet(&self, a: &Polydiagonal, b: &Polydiagonal) -> Result<Option<Polydiagonal>> {
        a.intersect(b).map(Some)
    }

    fn label(&self, e: &Polydiagonal) -> String {
        e.label()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor {
    Zero,
    One,
    Infinity,
}

impl Anchor {
    pub const ALL: [Anchor; 3] = [Anchor::Zero, Anchor::One, Anchor::Infinity];

    pub fn symbol(self) -> &'static str {
        match self {
            Anchor::Zero => "0",
            Anchor::One => "1",
            Anchor::Infinity => "∞",
        }
    }

    pub fn json_tag(self) -> &'static str {
        match self {
            Anchor::Zero => "0",
            Anchor::One => "1",
            Anchor::Infinity => "inf",
        }
    }

    pub fn from_tag(s: &str) -> Result<Anchor> {
        match s {
            "0" => Ok(Anchor::Zero),
            "1" => Ok(Anchor::One),
            "inf" | "∞" => Ok(Anchor::Infinity),
            _ => input(format!("unknown anchor {s:?}")),
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnchoredBlock {
    pub members: Vec<u32>,
    pub anchor: Option<Anchor>,
}

/// A locus in `(ℙ¹)ⁿ⁻³` (coordinates `p_4..p_n`) where coordinates agree within each
/// block and anchored blocks are pinned to 0, 1 or ∞.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnchoredPolydiagonal {
    n: u32,
    blocks: Vec<AnchoredBlock>,
}

impl AnchoredPolydiagonal {
    pub fn new(n: u32, blocks: Vec<AnchoredBlock>) -> Result<Self> {
        if n < 4 {
            return input("anchored polydiagonals need n ≥ 4");
        }
        let mut seen = vec![false; n as usize + 1];
        let mut used = [false; 3];
        let mut canon = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            b.members.sort_unstable();
            b.members.dedup();
            if b.members.len() < 2 {
                return input(format!("block {:?} has fewer than 2 members", b.members));
            }
            for &i in &b.members {
                if i < 4 || i > n {
                    return input(format!("index {i} outside 4..={n}"));
                }
                if std::mem::replace(&mut seen[i as usize], true) {
                    return input(format!("index {i} occurs in two blocks"));
                }
            }
            if let Some(a) = b.anchor {
                if std::mem::replace(&mut used[a.index()], true) {
                    return input(format!("anchor {} used by two blocks", a.symbol()));
                }
            }
            canon.push(b);
        }
        if canon.is_empty() {
            return input("an anchored polydiagonal needs at least one block");
        }
        canon.sort();
        Ok(AnchoredPolydiagonal { n, blocks: canon })
    }

    /// Δ_I, or Δ_{I,a} when an anchor is given.
    pub fn diagonal(n: u32, members: &[u32], anchor: Option<Anchor>) -> Result<Self> {
        AnchoredPolydiagonal::new(
            n,
            vec![AnchoredBlock {
                members: members.to_vec(),
                anchor,
            }],
        )
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[AnchoredBlock] {
        &self.blocks
    }

    pub fn dim(&self) -> i64 {
        let covered: usize = self.blocks.iter().map(|b| b.members.len()).sum();
        let free = self.blocks.iter().filter(|b| b.anchor.is_none()).count();
        (self.n as i64 - 3) - covered as i64 + free as i64
    }

    /// `None` when two anchors collide.
    pub fn intersect(&self, other: &AnchoredPolydiagonal) -> Result<Option<AnchoredPolydiagonal>> {
        if self.n != other.n {
            return input(format!("n mismatch: {} vs {}", self.n, other.n));
        }
        let n = self.n as usize;
        // Nodes 0..3 are the anchors, coordinate i is node i.
        let mut uf = UnionFind::new(n + 1);
        for b in self.blocks.iter().chain(&other.blocks) {
            for w in b.members.windows(2) {
                uf.union(w[0] as usize, w[1] as usize);
            }
            if let Some(a) = b.anchor {
                uf.union(a.index(), b.members[0] as usize);
            }
        }
        if (0..3).any(|a| (a + 1..3).any(|c| uf.find(a) == uf.find(c))) {
            return Ok(None);
        }
        let mut classes: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for i in 4..=self.n {
            let r = uf.find(i as usize);
            classes[r].push(i);
        }
        let mut blocks = Vec::new();
        for (root, members) in classes.into_iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let anchor = Anchor::ALL.into_iter().find(|a| uf.find(a.index()) == root);
            if members.len() < 2 {
                if anchor.is_some() {
                    return crate::error::invariant("anchored singleton produced by intersection");
                }
                continue;
            }
            blocks.push(AnchoredBlock { members, anchor });
        }
        AnchoredPolydiagonal::new(self.n, blocks).map(Some)
    }

    pub fn contains(&self, other: &AnchoredPolydiagonal) -> Result<bool> {
        Ok(self.intersect(other)?.as_ref() == Some(other))
    }

    pub fn label(&self) -> String {
        let wide = self.n >= 10;
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| match b.anchor {
                None => block_label(&b.members, wide),
                Some(a) => format!("{},{}", block_label(&b.members, wide), a.symbol()),
            })
            .collect();
        format!("Δ{}", parts.join(";"))
    }
}

impl fmt::Debug for AnchoredPolydiagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Anchored polydiagonals of `(ℙ¹)ⁿ⁻³`; here `m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnchoredModel {
    pub n: u32,
}

impl Model for AnchoredModel {
    type Elem = AnchoredPolydiagonal;

    fn ambient_dim(&self) -> Dim {
        Dim::constant(self.n as i64 - 3)
    }

    fn dim(&self, e: &AnchoredPolydiagonal) -> Result<Dim> {
        Ok(Dim::constant(e.dim()))
    }

    fn meet(
        &self,
        a: &AnchoredPolydiagonal,
        b: &AnchoredPolydiagonal,
    ) -> Result<Option<AnchoredPolydiagonal>> {
        a.intersect(b)
    }

    fn label(&self, e: &AnchoredPolydiagonal) -> String {
        e.label()
    }
}

/// All polydiagonals of `Xⁿ` (set partitions with a block of size ≥ 2), in ascending
/// dimension order.
pub fn all_polydiagonals(n: u32) -> Vec<Polydiagonal> {
    let mut out = Vec::new();
    let mut growth = vec![0usize; n as usize];
    fn rec(i: usize, max: usize, growth: &mut Vec<usize>, n: u32, out: &mut Vec<Polydiagonal>) {
        if i == growth.len() {
            let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); max + 1];
            for (k, &g) in growth.iter().enumerate() {
                blocks[g].push(k as u32 + 1);
            }
            let blocks: Vec<_> = blocks.into_iter().filter(|b| b.len() >= 2).collect();
            if !blocks.is_empty() {
                out.push(Polydiagonal::new(n, blocks).unwrap());
            }
            return;
        }
        for g in 0..=max + 1 {
            if i == 0 && g > 0 {
                break;
            }
            growth[i] = g;
            rec(i + 1, max.max(g), growth, n, out);
        }
    }
    if n >= 2 {
        rec(0, 0, &mut growth, n, &mut out);
    }
    out.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
    out
}
