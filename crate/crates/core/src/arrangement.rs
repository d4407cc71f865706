//! Model-agnostic arrangement logic: closure, transversality, factors, building sets,
//! F-factorizations and irreducible elements.

use std::collections::HashSet;

use crate::dim::Dim;
use crate::error::{input, invariant, precondition, Error, Result};
use crate::model::{locus_meet_all, Locus, Model};

pub const DEFAULT_MAX_ELEMENTS: usize = 4096;
pub const DEFAULT_IRREDUCIBLE_CAP: usize = 64;

/// Closes `elements` under pairwise intersection. The result is sorted.
pub fn close_intersections<M: Model>(
    model: &M,
    elements: &[M::Elem],
    max_elements: usize,
) -> Result<Vec<M::Elem>> {
    let mut seen: HashSet<M::Elem> = HashSet::new();
    let mut list: Vec<M::Elem> = Vec::new();
    for e in elements {
        if seen.insert(e.clone()) {
            list.push(e.clone());
        }
    }
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            if let Some(x) = model.meet(&list[i], &list[j])? {
                if seen.insert(x.clone()) {
                    list.push(x);
                    if list.len() > max_elements {
                        return Err(Error::Resource(format!(
                            "induced arrangement exceeds {max_elements} elements"
                        )));
                    }
                }
            }
        }
        i += 1;
    }
    list.sort();
    Ok(list)
}

/// Nonempty common intersection with additive codimensions. Singletons are transversal.
pub fn is_transversal<M: Model>(model: &M, items: &[M::Elem]) -> Result<bool> {
    match items {
        [] => input("transversality of an empty collection"),
        [_] => Ok(true),
        _ => {
            let Some(meet) = model.meet_all(items)? else {
                return Ok(false);
            };
            let total: Dim = items.iter().map(|e| model.codim(e)).sum::<Result<Dim>>()?;
            Ok(model.codim(&meet)? == total)
        }
    }
}

/// Minimal elements of `{G ∈ building : G ⊇ s}`, in building order.
pub fn minimal_containing<M: Model>(
    model: &M,
    building: &[M::Elem],
    s: &M::Elem,
) -> Result<Vec<M::Elem>> {
    let mut above = Vec::new();
    for g in building {
        if model.contains(g, s)? {
            above.push(g.clone());
        }
    }
    minimal_elements(model, &above)
}

/// Elements of `items` that strictly contain no other element of `items`.
pub fn minimal_elements<M: Model>(model: &M, items: &[M::Elem]) -> Result<Vec<M::Elem>> {
    let mut out = Vec::new();
    'outer: for g in items {
        for h in items {
            if h != g && model.contains(g, h)? {
                continue 'outer;
            }
        }
        out.push(g.clone());
    }
    Ok(out)
}

/// The 𝒢-factors of `s`; `arrangement` must be the induced arrangement of `building`.
pub fn g_factors<M: Model>(
    model: &M,
    building: &[M::Elem],
    arrangement: &[M::Elem],
    s: &M::Elem,
) -> Result<Vec<M::Elem>> {
    if !arrangement.contains(s) {
        return input(format!(
            "{} is not in the induced arrangement",
            model.label(s)
        ));
    }
    minimal_containing(model, building, s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildingVerdict<E> {
    pub arrangement: Vec<E>,
    /// First arrangement element whose factors fail the building-set condition.
    pub witness: Option<E>,
}

impl<E> BuildingVerdict<E> {
    pub fn is_building(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks that `building` is a building set of its induced arrangement.
pub fn is_building_set<M: Model>(
    model: &M,
    building: &[M::Elem],
    max_elements: usize,
) -> Result<BuildingVerdict<M::Elem>> {
    let arrangement = close_intersections(model, building, max_elements)?;
    let witness = building_witness(model, building, &arrangement)?;
    Ok(BuildingVerdict {
        arrangement,
        witness,
    })
}

/// First `s` in `arrangement` whose 𝒢-factors are not transversal with intersection `s`.
pub fn building_witness<M: Model>(
    model: &M,
    building: &[M::Elem],
    arrangement: &[M::Elem],
) -> Result<Option<M::Elem>> {
    for s in arrangement {
        let factors = minimal_containing(model, building, s)?;
        let ok = !factors.is_empty()
            && model.meet_all(&factors)?.as_ref() == Some(s)
            && is_transversal(model, &factors)?;
        if !ok {
            return Ok(Some(s.clone()));
        }
    }
    Ok(None)
}

/// `(A, B)`: the part containing the center and the part transversal to it.
pub type Factorization<E> = (Locus<E>, Locus<E>);

/// `(A, B)` with `A ⊇ F`, `B` transversal to `F` and `A ∩ B = S`.
pub fn f_factorization<M: Model>(
    model: &M,
    building: &[M::Elem],
    arrangement: &[M::Elem],
    s: &M::Elem,
    f: &M::Elem,
) -> Result<Factorization<M::Elem>> {
    if !building.contains(f) {
        return input(format!("{} is not in the building set", model.label(f)));
    }
    for g in building {
        if g != f && model.contains(f, g)? {
            return precondition(format!(
                "{} is not minimal: it contains {}",
                model.label(f),
                model.label(g)
            ));
        }
    }
    if model.meet(s, f)?.is_none() {
        return precondition(format!(
            "{} does not meet {}",
            model.label(s),
            model.label(f)
        ));
    }
    let factors = g_factors(model, building, arrangement, s)?;
    let mut over = Vec::new();
    let mut rest = Vec::new();
    for g in factors {
        if model.contains(&g, f)? {
            over.push(g);
        } else {
            rest.push(g);
        }
    }
    let a = locus_meet_all(model, &over)?;
    let b = locus_meet_all(model, &rest)?;
    let (Some(a), Some(b)) = (a, b) else {
        return invariant(format!(
            "factors of {} have empty partial intersection",
            model.label(s)
        ));
    };
    check_factorization(model, s, f, &a, &b)?;
    Ok((a, b))
}

fn check_factorization<M: Model>(
    model: &M,
    s: &M::Elem,
    f: &M::Elem,
    a: &Locus<M::Elem>,
    b: &Locus<M::Elem>,
) -> Result<()> {
    let label = || model.label(s);
    if let Locus::Proper(a) = a {
        if !model.contains(a, f)? {
            return invariant(format!("F-part of {} does not contain F", label()));
        }
    }
    if let Locus::Proper(b) = b {
        if !is_transversal(model, &[b.clone(), f.clone()])? {
            return invariant(format!(
                "residual part of {} is not transversal to F",
                label()
            ));
        }
    }
    let meet = crate::model::locus_meet(model, a, b)?;
    if meet != Some(Locus::Proper(s.clone())) {
        return invariant(format!(
            "F-factorization of {} does not recover it",
            label()
        ));
    }
    Ok(())
}

/// Irreducible elements of a closed arrangement (the minimal building set).
pub fn irreducible_elements<M: Model>(
    model: &M,
    arrangement: &[M::Elem],
    cap: usize,
) -> Result<Vec<M::Elem>> {
    if arrangement.len() > cap {
        return Err(Error::Resource(format!(
            "irreducibility search capped at {cap} elements, arrangement has {}",
            arrangement.len()
        )));
    }
    let mut sorted = arrangement.to_vec();
    sorted.sort();
    sorted.dedup();
    let search = Irreducibility::new(model, &sorted)?;
    let mut out = Vec::new();
    for (i, g) in sorted.iter().enumerate() {
        if !search.reducible(i)? {
            out.push(g.clone());
        }
    }
    if let Some(w) = building_witness(model, &out, &sorted)? {
        return invariant(format!(
            "irreducible elements fail the building-set condition at {}",
            model.label(&w)
        ));
    }
    Ok(out)
}

struct Irreducibility<'a, M: Model> {
    model: &'a M,
    elems: &'a [M::Elem],
    codims: Vec<Dim>,
    /// `contains[i][j]`: element i ⊇ element j.
    contains: Vec<Vec<bool>>,
}

impl<'a, M: Model> Irreducibility<'a, M> {
    fn new(model: &'a M, elems: &'a [M::Elem]) -> Result<Self> {
        let codims = elems
            .iter()
            .map(|e| model.codim(e))
            .collect::<Result<_>>()?;
        let mut contains = vec![vec![false; elems.len()]; elems.len()];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                contains[i][j] = model.contains(a, b)?;
            }
        }
        Ok(Irreducibility {
            model,
            elems,
            codims,
            contains,
        })
    }

    fn index(&self, e: &M::Elem) -> Result<usize> {
        match self.elems.binary_search(e) {
            Ok(i) => Ok(i),
            Err(_) => input(format!(
                "{} is outside the arrangement",
                self.model.label(e)
            )),
        }
    }

    fn reducible(&self, g: usize) -> Result<bool> {
        let above: Vec<usize> = (0..self.elems.len())
            .filter(|&s| s != g && self.contains[s][g])
            .collect();
        self.decompose(g, &above, 0, &mut Vec::new(), None, Dim::ZERO)
    }

    fn decompose(
        &self,
        g: usize,
        above: &[usize],
        start: usize,
        chosen: &mut Vec<usize>,
        meet: Option<usize>,
        codim_sum: Dim,
    ) -> Result<bool> {
        for k in start..above.len() {
            let s = above[k];
            let new_meet = match meet {
                None => s,
                Some(m) => match self.model.meet(&self.elems[m], &self.elems[s])? {
                    Some(x) => self.index(&x)?,
                    None => continue,
                },
            };
            let sum = codim_sum + self.codims[s];
            if self.codims[new_meet] != sum {
                continue;
            }
            chosen.push(s);
            let found = if new_meet == g {
                chosen.len() >= 2 && self.lifts(g, chosen)?
            } else {
                self.decompose(g, above, k + 1, chosen, Some(new_meet), sum)?
            };
            chosen.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn lifts(&self, g: usize, factors: &[usize]) -> Result<bool> {
        for target in 0..self.elems.len() {
            if target == g || !self.contains[target][g] {
                continue;
            }
            if !self.lift_one(target, factors, 0, None, Dim::ZERO)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Chooses `G'_i ⊇ G_i` (possibly the ambient) with `⋔ G'_i = target`.
    fn lift_one(
        &self,
        target: usize,
        factors: &[usize],
        i: usize,
        meet: Option<usize>,
        codim_sum: Dim,
    ) -> Result<bool> {
        if i == factors.len() {
            return Ok(meet == Some(target) && codim_sum == self.codims[target]);
        }
        if self.lift_one(target, factors, i + 1, meet, codim_sum)? {
            return Ok(true);
        }
        for s in 0..self.elems.len() {
            if !self.contains[s][factors[i]] || !self.contains[s][target] {
                continue;
            }
            let sum = codim_sum + self.codims[s];
            let slack = self.codims[target] - sum;
            if slack.m_coeff < 0 || slack.at(1) < 0 {
                continue;
            }
            let new_meet = match meet {
                None => s,
                Some(m) => match self.model.meet(&self.elems[m], &self.elems[s])? {
                    Some(x) => self.index(&x)?,
                    None => continue,
                },
            };
            if self.lift_one(target, factors, i + 1, Some(new_meet), sum)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Whether `building ⊆ arrangement` is a building set of the whole `arrangement`.
pub fn is_building_set_of<M: Model>(
    model: &M,
    building: &[M::Elem],
    arrangement: &[M::Elem],
) -> Result<bool> {
    Ok(building_witness(model, building, arrangement)?.is_none())
}
