//! 𝒢-nests: recognition, enumeration and the flag ⇄ nest conversions.

use crate::arrangement::{minimal_containing, minimal_elements};
use crate::error::{input, invariant, precondition, Error, Result};
use crate::model::Model;

pub const DEFAULT_MAX_NESTS: usize = 1 << 20;

/// Recursive nest test: the minimal elements of `t` must be exactly the 𝒢-factors of
/// their (nonempty) intersection, and the elements above each minimal one must again
/// form a nest. The empty family is a nest.
pub fn is_nest<M: Model>(model: &M, building: &[M::Elem], t: &[M::Elem]) -> Result<bool> {
    if let Some(x) = t.iter().find(|x| !building.contains(x)) {
        return input(format!("{} is not in the building set", model.label(x)));
    }
    nest_rec(model, building, t)
}

fn nest_rec<M: Model>(model: &M, building: &[M::Elem], t: &[M::Elem]) -> Result<bool> {
    if t.is_empty() {
        return Ok(true);
    }
    let minima = minimal_elements(model, t)?;
    let Some(s) = model.meet_all(&minima)? else {
        return Ok(false);
    };
    let factors = minimal_containing(model, building, &s)?;
    if factors.len() != minima.len() || !factors.iter().all(|f| minima.contains(f)) {
        return Ok(false);
    }
    for a in &minima {
        let mut upper = Vec::new();
        for b in t {
            if b != a && model.contains(b, a)? {
                upper.push(b.clone());
            }
        }
        if !nest_rec(model, building, &upper)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All nonempty nests with at most `max_size` elements, each sorted by label and the
/// list sorted lexicographically by labels. Subsets of nests are nests, so the search
/// only extends nests.
pub fn enumerate_nests<M: Model>(
    model: &M,
    building: &[M::Elem],
    max_size: Option<usize>,
    max_nests: usize,
) -> Result<Vec<Vec<M::Elem>>> {
    let limit = max_size.unwrap_or(building.len());
    let mut out: Vec<Vec<M::Elem>> = Vec::new();
    let mut current = Vec::new();
    extend(model, building, 0, limit, max_nests, &mut current, &mut out)?;
    let mut keyed: Vec<(Vec<String>, Vec<M::Elem>)> = out
        .into_iter()
        .map(|mut n| {
            n.sort_by_key(|e| model.label(e));
            (n.iter().map(|e| model.label(e)).collect(), n)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, n)| n).collect())
}

fn extend<M: Model>(
    model: &M,
    building: &[M::Elem],
    start: usize,
    limit: usize,
    max_nests: usize,
    current: &mut Vec<M::Elem>,
    out: &mut Vec<Vec<M::Elem>>,
) -> Result<()> {
    if current.len() == limit {
        return Ok(());
    }
    for i in start..building.len() {
        current.push(building[i].clone());
        if nest_rec(model, building, current)? {
            if out.len() == max_nests {
                return Err(Error::Resource(format!("more than {max_nests} nests")));
            }
            out.push(current.clone());
            extend(model, building, i + 1, limit, max_nests, current, out)?;
        }
        current.pop();
    }
    Ok(())
}

/// The flag `S₁ ⊊ S₂ ⊊ …` with `S_j` the intersection of the nest after removing its
/// minimal layer `j − 1` times.
pub fn flag_from_nest<M: Model>(
    model: &M,
    building: &[M::Elem],
    t: &[M::Elem],
) -> Result<Vec<M::Elem>> {
    if !is_nest(model, building, t)? {
        return precondition("not a nest");
    }
    let mut flag: Vec<M::Elem> = Vec::new();
    let mut layer = t.to_vec();
    while !layer.is_empty() {
        let Some(s) = model.meet_all(&layer)? else {
            return invariant("nest layer with empty intersection");
        };
        if flag.last() != Some(&s) {
            flag.push(s);
        }
        let minima = minimal_elements(model, &layer)?;
        layer.retain(|x| !minima.contains(x));
    }
    Ok(flag)
}

/// Union of the 𝒢-factors of the flag members, in building order.
pub fn nest_from_flag<M: Model>(
    model: &M,
    building: &[M::Elem],
    flag: &[M::Elem],
) -> Result<Vec<M::Elem>> {
    for w in flag.windows(2) {
        if !model.contains(&w[1], &w[0])? {
            return input(format!(
                "flag is not ascending: {} ⊄ {}",
                model.label(&w[0]),
                model.label(&w[1])
            ));
        }
    }
    let mut members = Vec::new();
    for s in flag {
        for f in minimal_containing(model, building, s)? {
            if !members.contains(&f) {
                members.push(f);
            }
        }
    }
    let out: Vec<M::Elem> = building
        .iter()
        .filter(|g| members.contains(g))
        .cloned()
        .collect();
    if !is_nest(model, building, &out)? {
        return invariant("flag induces a non-nest");
    }
    Ok(out)
}
