//! Generators for the standard building sets and their canonical blow-up orders.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagonal::{all_polydiagonals, Anchor, AnchoredPolydiagonal, Polydiagonal};
use crate::error::{input, Result};
use crate::graph::{subgraph_diagonal, v2c_subgraphs, LabeledGraph};
use crate::linear::{rational, LinearModel, Rational, Subspace};

fn subsets_of(items: &[u32]) -> Vec<Vec<u32>> {
    (0u64..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// All diagonals Δ_I of `Xⁿ` (`|I| ≥ 2`), in ascending dimension.
pub fn fm_building_set(n: u32) -> Vec<Polydiagonal> {
    let all: Vec<u32> = (1..=n).collect();
    let mut out: Vec<Polydiagonal> = subsets_of(&all)
        .into_iter()
        .filter(|s| s.len() >= 2)
        .map(|s| Polydiagonal::diagonal(n, &s).unwrap())
        .collect();
    out.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
    out
}

/// The order of the original construction of `X[n]`: for `k = 2..n`, the diagonals
/// with largest index `k`, larger index sets first.
pub fn fm_original_order(n: u32) -> Vec<Polydiagonal> {
    let mut out = Vec::new();
    for k in 2..=n {
        let lower: Vec<u32> = (1..k).collect();
        let mut group: Vec<Vec<u32>> = subsets_of(&lower)
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|mut s| {
                s.push(k);
                s
            })
            .collect();
        group.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        out.extend(group.iter().map(|s| Polydiagonal::diagonal(n, s).unwrap()));
    }
    out
}

/// Every polydiagonal of `Xⁿ`, in ascending dimension.
pub fn ulyanov_building_set(n: u32) -> Vec<Polydiagonal> {
    all_polydiagonals(n)
}

/// Δ_I and Δ_{I,a} for `I ⊆ {4..n}`, `|I| ≥ 2`, in ascending dimension.
pub fn m0n_building_set(n: u32) -> Result<Vec<AnchoredPolydiagonal>> {
    if n < 4 {
        return input("M0,n needs n ≥ 4");
    }
    let coords: Vec<u32> = (4..=n).collect();
    let mut out = Vec::new();
    for s in subsets_of(&coords).into_iter().filter(|s| s.len() >= 2) {
        out.push(AnchoredPolydiagonal::diagonal(n, &s, None)?);
        for a in Anchor::ALL {
            out.push(AnchoredPolydiagonal::diagonal(n, &s, Some(a))?);
        }
    }
    out.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
    Ok(out)
}

/// Keel's order: for `k = 5..n` and `s = k−3` down to 2, the anchored diagonals with
/// largest index `k` and `|I| = s`, then the plain diagonals with largest index `k` and
/// `|J| = s + 1`; finally the plain diagonals with largest index `k` and `|J| = 2`.
pub fn keel_order(n: u32) -> Result<Vec<AnchoredPolydiagonal>> {
    if n < 4 {
        return input("M0,n needs n ≥ 4");
    }
    let with_max = |k: u32, size: usize| -> Vec<Vec<u32>> {
        let lower: Vec<u32> = (4..k).collect();
        subsets_of(&lower)
            .into_iter()
            .filter(|s| s.len() + 1 == size)
            .map(|mut s| {
                s.push(k);
                s
            })
            .collect()
    };
    let mut out = Vec::new();
    for k in 5..=n {
        for s in (2..=(k - 3) as usize).rev() {
            for set in with_max(k, s) {
                for a in Anchor::ALL {
                    out.push(AnchoredPolydiagonal::diagonal(n, &set, Some(a))?);
                }
            }
            for set in with_max(k, s + 1) {
                out.push(AnchoredPolydiagonal::diagonal(n, &set, None)?);
            }
        }
        for set in with_max(k, 2) {
            out.push(AnchoredPolydiagonal::diagonal(n, &set, None)?);
        }
    }
    Ok(out)
}

/// The Kuperberg–Thurston building set of `g`, in ascending dimension.
pub fn kt_building_set(g: &LabeledGraph) -> Result<Vec<Polydiagonal>> {
    let mut out = crate::graph::kt_building_set(g)?;
    out.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
    Ok(out)
}

/// For `Γ₁ ⊊ Γ₂`: Δ of the v2c subgraphs of Γ₁ by descending vertex count, then Δ of
/// the remaining v2c subgraphs of Γ₂ by descending vertex count.
pub fn kt_extension_order(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<Vec<Polydiagonal>> {
    if g1.n() != g2.n() || !g1.edges().is_subset(g2.edges()) {
        return input("the first graph must be a subgraph of the second on the same vertices");
    }
    let by_desc = |g: &LabeledGraph| -> Result<Vec<Polydiagonal>> {
        let mut subs = v2c_subgraphs(g);
        subs.sort_by(|a, b| b.vertices.len().cmp(&a.vertices.len()).then(a.cmp(b)));
        subs.iter().map(|s| subgraph_diagonal(g.n(), s)).collect()
    };
    let first = by_desc(g1)?;
    let mut out = first.clone();
    out.extend(by_desc(g2)?.into_iter().filter(|d| !first.contains(d)));
    Ok(out)
}

/// Subspaces of ℙ^{n−3} spanned by proper subsets of `n − 1` generic points, as cones
/// in ℚ^{n−2}, in ascending dimension. Returns the model (with names registered), the
/// named elements and the seed actually used.
pub fn kapranov(n: u32, seed: u64) -> Result<(LinearModel, NamedSubspaces, u64)> {
    if n < 4 {
        return input("the Kapranov generator needs n ≥ 4");
    }
    let d = (n - 2) as usize;
    let count = (n - 1) as usize;
    let mut seed = seed;
    let points = loop {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Vec<Rational>> = (0..count)
            .map(|_| (0..d).map(|_| rational(rng.gen_range(-9..=9), 1)).collect())
            .collect();
        if generic(&pts, d) {
            break pts;
        }
        seed += 1;
    };
    let labels: Vec<u32> = (1..=count as u32).collect();
    let mut model = LinearModel::new(d, true);
    let mut out = Vec::new();
    let mut subsets: Vec<Vec<u32>> = subsets_of(&labels)
        .into_iter()
        .filter(|s| !s.is_empty() && s.len() < d)
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    for s in subsets {
        let span: Vec<Vec<Rational>> = s.iter().map(|&i| points[i as usize - 1].clone()).collect();
        let sub = Subspace::annihilator_of_span(d, &span)?;
        let name = format!(
            "Λ{}",
            s.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(".")
        );
        model.name(&sub, &name);
        out.push((name, sub));
    }
    Ok((model, out, seed))
}

pub type NamedSubspaces = Vec<(String, Subspace)>;

/// Every `d` of the points are linearly independent.
fn generic(points: &[Vec<Rational>], d: usize) -> bool {
    let idx: Vec<u32> = (0..points.len() as u32).collect();
    subsets_of(&idx)
        .into_iter()
        .filter(|s| s.len() == d)
        .all(|s| {
            let vs: Vec<Vec<Rational>> = s.iter().map(|&i| points[i as usize].clone()).collect();
            Subspace::independent(&vs, d)
        })
}
