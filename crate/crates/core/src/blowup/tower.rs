use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::Hash;

use crate::arrangement::{is_transversal, minimal_containing};
use crate::dim::Dim;
use crate::error::{input, invariant, precondition, Result};
use crate::model::{Locus, Model};

/// Index of an element inside one level of a [`Tower`].
pub type Id = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    /// Strict transform of an element not contained in the center.
    Strict(Id),
    /// `ℙ(N_F A|_Z)` over `Z = base ⊆ F`, with `A = fibre ⊋ F`.
    Exceptional { base: Id, fibre: Locus<Id> },
}

/// Public view of a tower element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transformed<E> {
    Base(E),
    Strict(Id),
    Exceptional { base: Id, fibre: Locus<Id> },
}

struct Interner<T> {
    items: Vec<T>,
    index: HashMap<T, Id>,
}

impl<T: Clone + Eq + Hash> Interner<T> {
    fn new() -> Self {
        Interner {
            items: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, x: T) -> Id {
        if let Some(&i) = self.index.get(&x) {
            return i;
        }
        let i = self.items.len() as Id;
        self.items.push(x.clone());
        self.index.insert(x, i);
        i
    }
}

#[derive(Default)]
struct Cache {
    meet: HashMap<(Id, Id), Option<Id>>,
    dim: HashMap<Id, Dim>,
    fibre: HashMap<Id, Locus<Id>>,
}

struct Level {
    center: Id,
    nodes: RefCell<Interner<Node>>,
}

/// A chain `Y = Y₀ ← Y₁ ← … ← Y_k` of blow-ups along building-set members, each
/// minimal in the current building set. One `carried` member is exempt from the
/// minimality requirement; its transform may lie inside a center.
pub struct Tower<'m, M: Model> {
    model: &'m M,
    base: RefCell<Interner<M::Elem>>,
    levels: Vec<Level>,
    building: Vec<Vec<Id>>,
    carried: Option<usize>,
    caches: RefCell<Vec<Cache>>,
}

impl<'m, M: Model> Tower<'m, M> {
    pub fn new(model: &'m M, building: &[M::Elem]) -> Result<Self> {
        Tower::with_carried(model, building, None)
    }

    /// `carried` indexes `building`.
    pub fn with_carried(
        model: &'m M,
        building: &[M::Elem],
        carried: Option<usize>,
    ) -> Result<Self> {
        if let Some(c) = carried {
            if c >= building.len() {
                return input("carried index outside the building set");
            }
        }
        let mut base = Interner::new();
        let ids: Vec<Id> = building.iter().map(|e| base.intern(e.clone())).collect();
        if ids.len() != base.items.len() {
            return input("duplicate building-set members");
        }
        Ok(Tower {
            model,
            base: RefCell::new(base),
            levels: Vec::new(),
            building: vec![ids],
            carried,
            caches: RefCell::new(vec![Cache::default()]),
        })
    }

    pub fn model(&self) -> &'m M {
        self.model
    }

    /// Number of blow-ups performed.
    pub fn top(&self) -> usize {
        self.levels.len()
    }

    /// Transforms of the building set at `level`, in the original building order.
    pub fn building(&self, level: usize) -> &[Id] {
        &self.building[level]
    }

    pub fn carried(&self) -> Option<usize> {
        self.carried
    }

    /// Level-0 id of a base element (interned on demand).
    pub fn base_id(&self, e: &M::Elem) -> Id {
        self.base.borrow_mut().intern(e.clone())
    }

    pub fn base_elem(&self, id: Id) -> M::Elem {
        self.base.borrow().items[id as usize].clone()
    }

    pub fn center(&self, level: usize) -> Option<Id> {
        level.checked_sub(1).map(|l| self.levels[l].center)
    }

    pub fn describe(&self, level: usize, id: Id) -> Transformed<M::Elem> {
        if level == 0 {
            return Transformed::Base(self.base_elem(id));
        }
        match self.node(level, id) {
            Node::Strict(s) => Transformed::Strict(s),
            Node::Exceptional { base, fibre } => Transformed::Exceptional { base, fibre },
        }
    }

    pub fn level_model(&self, level: usize) -> LevelModel<'_, 'm, M> {
        LevelModel { tower: self, level }
    }

    fn node(&self, level: usize, id: Id) -> Node {
        self.levels[level - 1].nodes.borrow().items[id as usize]
    }

    fn intern(&self, level: usize, node: Node) -> Id {
        self.levels[level - 1].nodes.borrow_mut().intern(node)
    }

    pub fn label(&self, level: usize, id: Id) -> String {
        if level == 0 {
            return self.model.label(&self.base_elem(id));
        }
        match self.node(level, id) {
            Node::Strict(s) => format!("{}~", self.label(level - 1, s)),
            Node::Exceptional { base, fibre } => {
                let f = match fibre {
                    Locus::Ambient => "Y".to_string(),
                    Locus::Proper(a) => self.label(level - 1, a),
                };
                format!("E{level}[{}|{f}]", self.label(level - 1, base))
            }
        }
    }

    pub fn dim(&self, level: usize, id: Id) -> Result<Dim> {
        if let Some(&d) = self.caches.borrow()[level].dim.get(&id) {
            return Ok(d);
        }
        let d = if level == 0 {
            self.model.dim(&self.base_elem(id))?
        } else {
            match self.node(level, id) {
                Node::Strict(s) => self.dim(level - 1, s)?,
                Node::Exceptional { base, fibre } => {
                    let f = self.levels[level - 1].center;
                    self.dim(level - 1, base)? + self.locus_dim(level - 1, fibre)?
                        - self.dim(level - 1, f)?
                        - Dim::constant(1)
                }
            }
        };
        self.caches.borrow_mut()[level].dim.insert(id, d);
        Ok(d)
    }

    pub fn codim(&self, level: usize, id: Id) -> Result<Dim> {
        Ok(self.model.ambient_dim() - self.dim(level, id)?)
    }

    fn locus_dim(&self, level: usize, l: Locus<Id>) -> Result<Dim> {
        match l {
            Locus::Ambient => Ok(self.model.ambient_dim()),
            Locus::Proper(x) => self.dim(level, x),
        }
    }

    pub fn contains(&self, level: usize, a: Id, b: Id) -> Result<bool> {
        Ok(self.meet(level, a, b)? == Some(b))
    }

    fn locus_meet(&self, level: usize, a: Locus<Id>, b: Locus<Id>) -> Result<Option<Locus<Id>>> {
        Ok(match (a, b) {
            (Locus::Ambient, x) | (x, Locus::Ambient) => Some(x),
            (Locus::Proper(x), Locus::Proper(y)) => self.meet(level, x, y)?.map(Locus::Proper),
        })
    }

    pub fn meet(&self, level: usize, a: Id, b: Id) -> Result<Option<Id>> {
        if a == b {
            return Ok(Some(a));
        }
        let key = (a.min(b), a.max(b));
        if let Some(&r) = self.caches.borrow()[level].meet.get(&key) {
            return Ok(r);
        }
        let r = if level == 0 {
            let (x, y) = (self.base_elem(a), self.base_elem(b));
            self.model.meet(&x, &y)?.map(|z| self.base_id(&z))
        } else {
            self.meet_derived(level, self.node(level, a), self.node(level, b))?
                .map(|n| self.intern(level, n))
        };
        self.caches.borrow_mut()[level].meet.insert(key, r);
        Ok(r)
    }

    fn meet_derived(&self, level: usize, a: Node, b: Node) -> Result<Option<Node>> {
        let prev = level - 1;
        let f = self.levels[prev].center;
        let f_locus = Locus::Proper(f);
        match (a, b) {
            (Node::Strict(s), Node::Strict(t)) => {
                let Some(p) = self.meet(prev, s, t)? else {
                    return Ok(None);
                };
                let Some(pf) = self.meet(prev, p, f)? else {
                    return Ok(Some(Node::Strict(p)));
                };
                let fibre = self.fibre_meet(prev, self.fibre(prev, s)?, self.fibre(prev, t)?)?;
                let exceptional =
                    (fibre != f_locus).then_some(Node::Exceptional { base: pf, fibre });
                let strict = (!self.contains(prev, f, p)?).then_some(Node::Strict(p));
                match (strict, exceptional) {
                    (Some(st), Some(_)) => {
                        if self.fibre(prev, p)? != fibre {
                            return invariant(format!(
                                "fibre of {} differs from the meet of the fibres of {} and {}",
                                self.label(prev, p),
                                self.label(prev, s),
                                self.label(prev, t)
                            ));
                        }
                        Ok(Some(st))
                    }
                    (Some(_), None) => invariant(format!(
                        "{} meets the center but the transforms of {} and {} do not meet over it",
                        self.label(prev, p),
                        self.label(prev, s),
                        self.label(prev, t)
                    )),
                    (None, ex) => Ok(ex),
                }
            }
            (Node::Strict(s), Node::Exceptional { base, fibre })
            | (Node::Exceptional { base, fibre }, Node::Strict(s)) => {
                if self.meet(prev, s, f)?.is_none() {
                    return Ok(None);
                }
                let Some(z) = self.meet(prev, base, s)? else {
                    return Ok(None);
                };
                let a = self.fibre_meet(prev, fibre, self.fibre(prev, s)?)?;
                Ok((a != f_locus).then_some(Node::Exceptional { base: z, fibre: a }))
            }
            (
                Node::Exceptional {
                    base: z1,
                    fibre: a1,
                },
                Node::Exceptional {
                    base: z2,
                    fibre: a2,
                },
            ) => {
                let Some(z) = self.meet(prev, z1, z2)? else {
                    return Ok(None);
                };
                let a = self.fibre_meet(prev, a1, a2)?;
                Ok((a != f_locus).then_some(Node::Exceptional { base: z, fibre: a }))
            }
        }
    }

    fn fibre_meet(&self, level: usize, a: Locus<Id>, b: Locus<Id>) -> Result<Locus<Id>> {
        match self.locus_meet(level, a, b)? {
            Some(x) => Ok(x),
            None => invariant("two elements containing the center have empty intersection"),
        }
    }

    /// The part `A` of the F-factorization `S = A ∩ B` for the next center `F`, for `S`
    /// meeting `F` and not contained in it.
    fn fibre(&self, level: usize, s: Id) -> Result<Locus<Id>> {
        if let Some(&a) = self.caches.borrow()[level].fibre.get(&s) {
            return Ok(a);
        }
        let f = self.levels[level].center;
        let lm = self.level_model(level);
        let factors = minimal_containing(&lm, &self.building[level], &s)?;
        let (mut a, mut b) = (Locus::Ambient, Locus::Ambient);
        for g in factors {
            let part = if self.contains(level, g, f)? {
                &mut a
            } else {
                &mut b
            };
            *part = match self.locus_meet(level, *part, Locus::Proper(g))? {
                Some(x) => x,
                None => return invariant("factors with empty partial intersection"),
            };
        }
        if self.locus_meet(level, a, b)? != Some(Locus::Proper(s)) {
            return invariant(format!(
                "no F-factorization of {} for center {}",
                self.label(level, s),
                self.label(level, f)
            ));
        }
        if let Locus::Proper(b) = b {
            if !is_transversal(&lm, &[b, f])? {
                return invariant(format!(
                    "residual factor of {} is not transversal to {}",
                    self.label(level, s),
                    self.label(level, f)
                ));
            }
        }
        self.caches.borrow_mut()[level].fibre.insert(s, a);
        Ok(a)
    }

    /// Dominant transform at `level` of an element of `level − 1`.
    pub fn transform(&self, level: usize, s: Id) -> Result<Id> {
        let f = self.levels[level - 1].center;
        let node = if self.contains(level - 1, f, s)? {
            Node::Exceptional {
                base: s,
                fibre: Locus::Ambient,
            }
        } else {
            Node::Strict(s)
        };
        Ok(self.intern(level, node))
    }

    /// The exceptional divisor of the blow-up producing `level`.
    pub fn exceptional(&self, level: usize) -> Id {
        let f = self.levels[level - 1].center;
        self.intern(
            level,
            Node::Exceptional {
                base: f,
                fibre: Locus::Ambient,
            },
        )
    }

    /// Blows up `center`, a member of the current building set.
    pub fn blow_up(&mut self, center: Id) -> Result<()> {
        let top = self.top();
        let current = self.building[top].clone();
        if !current.contains(&center) {
            return precondition("center is not in the current building set");
        }
        for (i, &g) in current.iter().enumerate() {
            if g == center {
                continue;
            }
            if self.contains(top, center, g)? {
                if Some(i) == self.carried {
                    continue;
                }
                return precondition(format!(
                    "center {} is not minimal: it contains {}",
                    self.label(top, center),
                    self.label(top, g)
                ));
            }
            if !self.contains(top, g, center)?
                && self.meet(top, g, center)?.is_some()
                && !is_transversal(&self.level_model(top), &[g, center])?
            {
                return invariant(format!(
                    "{} neither contains nor is transversal to the minimal center {}",
                    self.label(top, g),
                    self.label(top, center)
                ));
            }
        }
        self.levels.push(Level {
            center,
            nodes: RefCell::new(Interner::new()),
        });
        self.caches.borrow_mut().push(Cache::default());
        let next = current
            .iter()
            .map(|&g| self.transform(top + 1, g))
            .collect::<Result<Vec<_>>>()?;
        self.building.push(next);
        Ok(())
    }
}

/// One level of a tower viewed as a [`Model`].
pub struct LevelModel<'t, 'm, M: Model> {
    tower: &'t Tower<'m, M>,
    level: usize,
}

impl<M: Model> LevelModel<'_, '_, M> {
    pub fn level(&self) -> usize {
        self.level
    }
}

impl<M: Model> Model for LevelModel<'_, '_, M> {
    type Elem = Id;

    fn ambient_dim(&self) -> Dim {
        self.tower.model.ambient_dim()
    }

    fn dim(&self, e: &Id) -> Result<Dim> {
        self.tower.dim(self.level, *e)
    }

    fn meet(&self, a: &Id, b: &Id) -> Result<Option<Id>> {
        self.tower.meet(self.level, *a, *b)
    }

    fn label(&self, e: &Id) -> String {
        self.tower.label(self.level, *e)
    }
}
