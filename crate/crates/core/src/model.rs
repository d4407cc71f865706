//! The interface every arrangement backend implements.

use std::fmt::Debug;
use std::hash::Hash;

use crate::dim::Dim;
use crate::error::Result;

/// A geometric backend. Elements are proper, nonempty, nonsingular closed
/// subvarieties of a fixed ambient space; intersections are clean.
pub trait Model {
    type Elem: Clone + Eq + Hash + Ord + Debug;

    fn ambient_dim(&self) -> Dim;

    fn dim(&self, e: &Self::Elem) -> Result<Dim>;

    /// `None` means the intersection is empty.
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Option<Self::Elem>>;

    fn label(&self, e: &Self::Elem) -> String;

    /// `a ⊇ b`.
    fn contains(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool> {
        Ok(self.meet(a, b)?.as_ref() == Some(b))
    }

    fn codim(&self, e: &Self::Elem) -> Result<Dim> {
        Ok(self.ambient_dim() - self.dim(e)?)
    }

    /// Intersection of a nonempty list; `None` if empty at any stage.
    fn meet_all<'a, I>(&self, items: I) -> Result<Option<Self::Elem>>
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut iter = items.into_iter();
        let Some(first) = iter.next() else {
            return crate::error::input("intersection of an empty collection");
        };
        let mut acc = first.clone();
        for e in iter {
            match self.meet(&acc, e)? {
                Some(x) => acc = x,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }
}

/// An element or the whole ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Locus<E> {
    Ambient,
    Proper(E),
}

impl<E> Locus<E> {
    pub fn proper(&self) -> Option<&E> {
        match self {
            Locus::Ambient => None,
            Locus::Proper(e) => Some(e),
        }
    }

    pub fn is_ambient(&self) -> bool {
        matches!(self, Locus::Ambient)
    }
}

pub fn locus_meet<M: Model>(
    model: &M,
    a: &Locus<M::Elem>,
    b: &Locus<M::Elem>,
) -> Result<Option<Locus<M::Elem>>> {
    Ok(match (a, b) {
        (Locus::Ambient, x) | (x, Locus::Ambient) => Some(x.clone()),
        (Locus::Proper(x), Locus::Proper(y)) => model.meet(x, y)?.map(Locus::Proper),
    })
}

pub fn locus_dim<M: Model>(model: &M, a: &Locus<M::Elem>) -> Result<Dim> {
    match a {
        Locus::Ambient => Ok(model.ambient_dim()),
        Locus::Proper(e) => model.dim(e),
    }
}

pub fn locus_label<M: Model>(model: &M, a: &Locus<M::Elem>) -> String {
    match a {
        Locus::Ambient => "AMBIENT".to_string(),
        Locus::Proper(e) => model.label(e),
    }
}

/// Intersection of a possibly empty list of loci (empty list gives the ambient).
pub fn locus_meet_all<'a, M: Model>(
    model: &M,
    items: impl IntoIterator<Item = &'a M::Elem>,
) -> Result<Option<Locus<M::Elem>>>
where
    M::Elem: 'a,
{
    let mut acc = Locus::Ambient;
    for e in items {
        match locus_meet(model, &acc, &Locus::Proper(e.clone()))? {
            Some(x) => acc = x,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}
