use crate::arrangement::{
    building_witness, close_intersections, is_building_set, minimal_elements, DEFAULT_MAX_ELEMENTS,
};
use crate::dim::Dim;
use crate::error::{input, invariant, precondition, Error, Result};
use crate::model::Model;

use super::tower::{Id, Tower};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub max_elements: usize,
    /// Validate the building-set property of every intermediate level (slow).
    pub verify_levels: bool,
    /// Compute the divisor intersection table of the final state.
    pub table: bool,
    pub max_subsets: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_elements: DEFAULT_MAX_ELEMENTS,
            verify_levels: false,
            table: true,
            max_subsets: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterRecord {
    /// 1-based step index.
    pub j: usize,
    pub center: String,
    pub dim: Dim,
    pub closed_form_dim: Dim,
    pub codim: Dim,
}

impl CenterRecord {
    /// Blowing up a divisor changes nothing.
    pub fn is_trivial(&self) -> bool {
        self.codim == Dim::constant(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarVerdict<E> {
    /// Length of the first prefix that is not a building set.
    pub failing_prefix: Option<usize>,
    /// Arrangement element witnessing the failure.
    pub witness: Option<E>,
}

impl<E> StarVerdict<E> {
    pub fn is_valid(&self) -> bool {
        self.failing_prefix.is_none()
    }
}

/// Condition (*): every prefix of `order` is a building set of its induced arrangement.
pub fn check_star_order<M: Model>(
    model: &M,
    order: &[M::Elem],
    max_elements: usize,
) -> Result<StarVerdict<M::Elem>> {
    check_distinct(model, order)?;
    for i in 1..=order.len() {
        let verdict = is_building_set(model, &order[..i], max_elements)?;
        if let Some(w) = verdict.witness {
            return Ok(StarVerdict {
                failing_prefix: Some(i),
                witness: Some(w),
            });
        }
    }
    Ok(StarVerdict {
        failing_prefix: None,
        witness: None,
    })
}

fn check_distinct<M: Model>(model: &M, order: &[M::Elem]) -> Result<()> {
    for (i, a) in order.iter().enumerate() {
        if order[..i].contains(a) {
            return input(format!("{} occurs twice in the order", model.label(a)));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderStrategy {
    /// Stable topological order by inclusion, smaller elements first.
    Inclusion,
    /// Ascending dimension, ties broken by label.
    AscendingDim,
}

pub fn suggest_order<M: Model>(
    model: &M,
    building: &[M::Elem],
    strategy: OrderStrategy,
    max_elements: usize,
) -> Result<Vec<M::Elem>> {
    check_distinct(model, building)?;
    let verdict = is_building_set(model, building, max_elements)?;
    if let Some(w) = verdict.witness {
        return precondition(format!("not a building set, witness {}", model.label(&w)));
    }
    let order = match strategy {
        OrderStrategy::Inclusion => inclusion_order(model, building)?,
        OrderStrategy::AscendingDim => {
            let mut keyed = building
                .iter()
                .map(|g| Ok((model.dim(g)?, model.label(g), g.clone())))
                .collect::<Result<Vec<_>>>()?;
            keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            keyed.into_iter().map(|(_, _, g)| g).collect()
        }
    };
    let check = check_star_order(model, &order, max_elements)?;
    if let Some(i) = check.failing_prefix {
        return invariant(format!("suggested order fails condition (*) at prefix {i}"));
    }
    Ok(order)
}

/// Kahn's algorithm, always emitting the earliest available element.
fn inclusion_order<M: Model>(model: &M, items: &[M::Elem]) -> Result<Vec<M::Elem>> {
    let n = items.len();
    let mut below = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && model.contains(&items[i], &items[j])? {
                below[i].push(j);
            }
        }
    }
    let mut placed = vec![false; n];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let Some(i) = (0..n).find(|&i| !placed[i] && below[i].iter().all(|&j| placed[j])) else {
            return invariant("inclusion relation has a cycle");
        };
        placed[i] = true;
        out.push(items[i].clone());
    }
    Ok(out)
}

/// Dimension of the `j`-th center (1-based) of the sequence along `order`:
/// `dim G_j + Σ (d − 1 − dim G)` over the minimal earlier elements containing `G_j`.
pub fn center_dim_closed_form<M: Model>(model: &M, order: &[M::Elem], j: usize) -> Result<Dim> {
    if j == 0 || j > order.len() {
        return input(format!("step {j} outside 1..={}", order.len()));
    }
    let verdict = check_star_order(model, &order[..j], DEFAULT_MAX_ELEMENTS)?;
    if let Some(i) = verdict.failing_prefix {
        return precondition(format!("order fails condition (*) at prefix {i}"));
    }
    closed_form(model, order, j)
}

fn closed_form<M: Model>(model: &M, order: &[M::Elem], j: usize) -> Result<Dim> {
    let g = &order[j - 1];
    let mut above = Vec::new();
    for h in &order[..j - 1] {
        if model.contains(h, g)? {
            above.push(h.clone());
        }
    }
    let d = model.ambient_dim();
    let mut total = model.dim(g)?;
    for h in minimal_elements(model, &above)? {
        total = total + d - Dim::constant(1) - model.dim(&h)?;
    }
    Ok(total)
}

/// Snapshot after the first `steps` blow-ups along `order`.
///
/// For step `j` the prefix `G₁..G_{j−1}` is blown up in a stable inclusion-compatible
/// order with `G_j` carried along (its transform may sit inside a center), after which
/// the transform of `G_j` is the next center.
pub struct BlowupState<'m, M: Model> {
    model: &'m M,
    order: Vec<M::Elem>,
    steps: usize,
    tower: Tower<'m, M>,
    /// Tower building index to position in `order`.
    positions: Vec<usize>,
    max_elements: usize,
}

impl<'m, M: Model> BlowupState<'m, M> {
    pub fn new(model: &'m M, order: &[M::Elem]) -> Result<Self> {
        check_distinct(model, order)?;
        Ok(BlowupState {
            model,
            order: order.to_vec(),
            steps: 0,
            tower: Tower::new(model, &[])?,
            positions: Vec::new(),
            max_elements: DEFAULT_MAX_ELEMENTS,
        })
    }

    pub fn with_max_elements(mut self, max_elements: usize) -> Self {
        self.max_elements = max_elements;
        self
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_complete(&self) -> bool {
        self.steps == self.order.len()
    }

    pub fn order(&self) -> &[M::Elem] {
        &self.order
    }

    pub fn tower(&self) -> &Tower<'m, M> {
        &self.tower
    }

    /// Transform at the top level of `order[i]`, for `i < steps`.
    pub fn transform_of(&self, i: usize) -> Option<Id> {
        let k = self.positions.iter().position(|&p| p == i)?;
        Some(self.tower.building(self.tower.top())[k])
    }

    /// Performs the next blow-up.
    pub fn step(self) -> Result<(Self, CenterRecord)> {
        let j = self.steps + 1;
        if j > self.order.len() {
            return precondition("sequence already complete");
        }
        let model = self.model;
        let prefix = &self.order[..j - 1];
        let mut positions: Vec<usize> = Vec::with_capacity(j);
        for g in inclusion_order(model, prefix)? {
            positions.push(prefix.iter().position(|h| *h == g).unwrap_or_default());
        }
        positions.push(j - 1);
        let building: Vec<M::Elem> = positions.iter().map(|&p| self.order[p].clone()).collect();
        let mut tower = Tower::with_carried(model, &building, Some(j - 1))?;
        for k in 0..j - 1 {
            let center = tower.building(k)[k];
            tower.blow_up(center)?;
        }
        let center = tower.building(j - 1)[j - 1];
        let dim = tower.dim(j - 1, center)?;
        let codim = tower.codim(j - 1, center)?;
        let closed_form_dim = closed_form(model, &self.order, j)?;
        let label = model.label(&self.order[j - 1]);
        if dim != closed_form_dim {
            return invariant(format!(
                "center {label} at step {j}: tracked dim {dim}, closed form {closed_form_dim}"
            ));
        }
        if !codim.is_positive() {
            return invariant(format!("center {label} at step {j} has codim {codim}"));
        }
        tower.blow_up(center)?;
        let record = CenterRecord {
            j,
            center: label,
            dim,
            closed_form_dim,
            codim,
        };
        let state = BlowupState {
            model,
            order: self.order,
            steps: j,
            tower,
            positions,
            max_elements: self.max_elements,
        };
        Ok((state, record))
    }

    /// Every blown-up center has become a divisor.
    pub fn check_divisors(&self) -> Result<()> {
        let top = self.tower.top();
        for (k, &id) in self.tower.building(top).iter().enumerate() {
            let codim = self.tower.codim(top, id)?;
            if codim != Dim::constant(1) {
                return invariant(format!(
                    "transform of {} has codim {codim} after being blown up",
                    self.model.label(&self.order[self.positions[k]])
                ));
            }
        }
        Ok(())
    }

    /// Building-set property of every level of the current tower.
    pub fn check_levels(&self) -> Result<()> {
        for level in 0..=self.tower.top() {
            let lm = self.tower.level_model(level);
            let building = self.tower.building(level);
            let arrangement = close_intersections(&lm, building, self.max_elements)?;
            if let Some(w) = building_witness(&lm, building, &arrangement)? {
                return invariant(format!(
                    "level {level} is not a building set, witness {}",
                    self.tower.label(level, w)
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    /// Divisor names, sorted.
    pub members: Vec<String>,
    pub nonempty: bool,
    /// Codimension of the intersection when nonempty.
    pub codim: Option<Dim>,
    /// Codimension equals the number of divisors.
    pub additive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorTable {
    /// Divisor names in the order of the sequence.
    pub names: Vec<String>,
    /// Final codimension of each divisor.
    pub codims: Vec<Dim>,
    /// One row per nonempty subset, sorted by member names.
    pub rows: Vec<TableRow>,
}

impl DivisorTable {
    pub fn nonempty_subsets(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .filter(|r| r.nonempty)
            .map(|r| r.members.clone())
            .collect()
    }

    pub fn all_additive(&self) -> bool {
        self.rows.iter().all(|r| !r.nonempty || r.additive)
    }
}

pub fn divisor_intersection_table<M: Model>(
    state: &BlowupState<'_, M>,
    max_subsets: usize,
) -> Result<DivisorTable> {
    if !state.is_complete() {
        return precondition("divisor table requires a completed sequence");
    }
    let n = state.order.len();
    if n >= usize::BITS as usize - 1 || (1usize << n) > max_subsets {
        return Err(Error::Resource(format!(
            "2^{n} divisor subsets exceed the cap {max_subsets}"
        )));
    }
    let tower = &state.tower;
    let top = tower.top();
    let names: Vec<String> = state.order.iter().map(|g| state.model.label(g)).collect();
    let divisors: Vec<Id> = (0..n)
        .map(|i| {
            state
                .transform_of(i)
                .ok_or_else(|| Error::Invariant("missing transform".into()))
        })
        .collect::<Result<_>>()?;
    let codims = divisors
        .iter()
        .map(|&d| tower.codim(top, d))
        .collect::<Result<Vec<_>>>()?;
    let mut meets: Vec<Option<Id>> = vec![None; 1 << n];
    let mut rows = Vec::with_capacity((1 << n) - 1);
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        meets[mask] = if rest == 0 {
            Some(divisors[low])
        } else {
            match meets[rest] {
                Some(x) => tower.meet(top, x, divisors[low])?,
                None => None,
            }
        };
        let mut members: Vec<String> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| names[i].clone())
            .collect();
        members.sort();
        let (codim, additive) = match meets[mask] {
            Some(x) => {
                let c = tower.codim(top, x)?;
                let sum: Dim = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| codims[i])
                    .sum();
                (Some(c), c == sum)
            }
            None => (None, false),
        };
        rows.push(TableRow {
            members,
            nonempty: meets[mask].is_some(),
            codim,
            additive,
        });
    }
    rows.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(DivisorTable {
        names,
        codims,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupTrace {
    pub steps: Vec<CenterRecord>,
    pub table: Option<DivisorTable>,
}

/// Runs the whole sequence along a (*)-valid `order`.
pub fn run_sequence<M: Model>(
    model: &M,
    order: &[M::Elem],
    options: &RunOptions,
) -> Result<BlowupTrace> {
    let verdict = check_star_order(model, order, options.max_elements)?;
    if let (Some(i), Some(w)) = (verdict.failing_prefix, &verdict.witness) {
        return precondition(format!(
            "order fails condition (*) at prefix {i}, witness {}",
            model.label(w)
        ));
    }
    let mut state = BlowupState::new(model, order)?.with_max_elements(options.max_elements);
    let mut steps = Vec::with_capacity(order.len());
    while !state.is_complete() {
        let (next, record) = state.step()?;
        state = next;
        if options.verify_levels {
            state.check_levels()?;
        }
        steps.push(record);
    }
    state.check_divisors()?;
    let table = if options.table {
        let table = divisor_intersection_table(&state, options.max_subsets)?;
        if !table.all_additive() {
            return invariant("a nonempty divisor intersection is not transversal");
        }
        Some(table)
    } else {
        None
    };
    Ok(BlowupTrace { steps, table })
}
