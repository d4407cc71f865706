//! One PASS/FAIL line per acceptance criterion. Expected counts were produced by the
//! brute-force oracles in `tests/common` and are checked against them in `tests/oracles.rs`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use wonderful::arrangement::{
    irreducible_elements, is_building_set, is_building_set_of, is_transversal,
};
use wonderful::blowup::{
    check_star_order, run_sequence, suggest_order, OrderStrategy, RunOptions, Tower,
};
use wonderful::diagonal::{all_polydiagonals, AnchoredModel, Polydiagonal, PolydiagonalModel};
use wonderful::families::{
    fm_building_set, fm_original_order, keel_order, kt_building_set, kt_extension_order,
    m0n_building_set, ulyanov_building_set,
};
use wonderful::graph::LabeledGraph;
use wonderful::linear::{LinearModel, Subspace};
use wonderful::nest::{enumerate_nests, is_nest, DEFAULT_MAX_NESTS};
use wonderful::{Dim, Model};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn d(n: u32, m: &[u32]) -> Polydiagonal {
    Polydiagonal::diagonal(n, m).unwrap()
}

fn subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0u64..(1 << items.len())).map(move |m| {
        (0..items.len())
            .filter(|i| m >> i & 1 == 1)
            .map(|i| items[i].clone())
            .collect()
    })
}

fn all_graphs(n: u32) -> Vec<LabeledGraph> {
    let pairs: Vec<(u32, u32)> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect();
    (0u64..(1 << pairs.len()))
        .map(|m| {
            let edges = (0..pairs.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| pairs[i]);
            LabeledGraph::new(n, edges).unwrap()
        })
        .collect()
}

fn nest_labels<M: Model>(model: &M, building: &[M::Elem]) -> Result<Vec<Vec<String>>, String> {
    let mut out: Vec<Vec<String>> = e(enumerate_nests(model, building, None, DEFAULT_MAX_NESTS))?
        .iter()
        .map(|t| {
            let mut v: Vec<String> = t.iter().map(|x| model.label(x)).collect();
            v.sort();
            v
        })
        .collect();
    out.sort();
    Ok(out)
}

fn c1() -> Outcome {
    let x3 = PolydiagonalModel { n: 3 };
    let full = [
        d(3, &[1, 2]),
        d(3, &[1, 3]),
        d(3, &[2, 3]),
        d(3, &[1, 2, 3]),
    ];
    ensure(e(is_building_set(&x3, &full, 100))?.is_building(), || {
        "all diagonals rejected".into()
    })?;
    let two = [d(3, &[1, 2]), d(3, &[1, 3])];
    let v = e(is_building_set(&x3, &two, 100))?;
    ensure(v.is_building(), || "{Δ12,Δ13} rejected".into())?;
    let mut want = vec![d(3, &[1, 2]), d(3, &[1, 3]), d(3, &[1, 2, 3])];
    want.sort();
    ensure(v.arrangement == want, || {
        format!("induced arrangement {:?}", v.arrangement)
    })?;
    let three = &full[..3];
    let v = e(is_building_set(&x3, three, 100))?;
    ensure(v.witness == Some(d(3, &[1, 2, 3])), || {
        format!("witness {:?}", v.witness)
    })?;
    Ok("three building-set verdicts on X³ with witness Δ123".into())
}

fn c2() -> Outcome {
    let x4 = PolydiagonalModel { n: 4 };
    let g = fm_building_set(4);
    let yes1 = [d(4, &[1, 2]), d(4, &[1, 2, 3])];
    let yes2 = [d(4, &[1, 2]), d(4, &[3, 4]), d(4, &[1, 2, 3, 4])];
    let no = [d(4, &[1, 2]), d(4, &[1, 3])];
    ensure(e(is_nest(&x4, &g, &yes1))?, || "{Δ12,Δ123}".into())?;
    ensure(e(is_nest(&x4, &g, &yes2))?, || "{Δ12,Δ34,Δ1234}".into())?;
    ensure(!e(is_nest(&x4, &g, &no))?, || "{Δ12,Δ13}".into())?;
    Ok("nest verdicts on X⁴".into())
}

fn c3() -> Outcome {
    let valid = |ok: bool, what: String| ensure(ok, || format!("{what} fails (*)"));
    for n in 4..=5 {
        let m = PolydiagonalModel { n };
        valid(
            e(check_star_order(&m, &fm_original_order(n), 4096))?.is_valid(),
            format!("FM order n={n}"),
        )?;
    }
    let mut checked = 0;
    for n in 2..=5 {
        let m = PolydiagonalModel { n };
        let mut sets = vec![fm_building_set(n), ulyanov_building_set(n)];
        if n <= 4 {
            for g in all_graphs(n) {
                sets.push(e(kt_building_set(&g))?);
            }
        } else {
            sets.push(e(kt_building_set(&LabeledGraph::path(n)))?);
            let cycle = e(LabeledGraph::new(n, (1..=n).map(|i| (i, i % n + 1))))?;
            sets.push(e(kt_building_set(&cycle))?);
        }
        for g in sets.into_iter().filter(|g| !g.is_empty()) {
            let order = e(suggest_order(&m, &g, OrderStrategy::AscendingDim, 4096))?;
            valid(
                e(check_star_order(&m, &order, 4096))?.is_valid(),
                format!("ascending order n={n}"),
            )?;
            checked += 1;
        }
    }
    let a5 = AnchoredModel { n: 5 };
    let order = e(suggest_order(
        &a5,
        &e(m0n_building_set(5))?,
        OrderStrategy::AscendingDim,
        4096,
    ))?;
    valid(
        e(check_star_order(&a5, &order, 4096))?.is_valid(),
        "ascending order M̄0,5".into(),
    )?;
    let x3 = PolydiagonalModel { n: 3 };
    let bad = [
        d(3, &[1, 2]),
        d(3, &[1, 3]),
        d(3, &[2, 3]),
        d(3, &[1, 2, 3]),
    ];
    let v = e(check_star_order(&x3, &bad, 100))?;
    ensure(v.failing_prefix == Some(3), || {
        format!("bad order fails at {:?}", v.failing_prefix)
    })?;
    Ok(format!(
        "FM orders n=4,5 valid; {} ascending orders valid; bad order fails at prefix 3",
        checked + 1
    ))
}

fn c4() -> Outcome {
    for n in 3..=5 {
        let model = PolydiagonalModel { n };
        let order = fm_original_order(n);
        let options = RunOptions {
            table: false,
            ..RunOptions::default()
        };
        let trace = e(run_sequence(&model, &order, &options))?;
        for (r, g) in trace.steps.iter().zip(&order) {
            let pair = g.blocks()[0].len() == 2;
            for m in 1..=3 {
                ensure(r.dim.at(m) == r.closed_form_dim.at(m), || {
                    format!("{} tracked ≠ closed form", r.center)
                })?;
                let want = if pair { m } else { m + 1 };
                ensure(r.codim.at(m) == want, || {
                    format!("{} codim {} at m={m}", r.center, r.codim)
                })?;
            }
        }
        if n == 4 {
            ensure(
                trace.steps[0].dim == Dim::m(3) && trace.steps[1].dim == Dim::new(3, -1),
                || {
                    format!(
                        "first dims {} and {}",
                        trace.steps[0].dim, trace.steps[1].dim
                    )
                },
            )?;
        }
    }
    Ok("FM center dims: 3m, 3m-1, …; codim m for pairs, m+1 otherwise (n ≤ 5, m ≤ 3)".into())
}

fn c5() -> Outcome {
    let mut summary = Vec::new();
    for n in 5..=6u32 {
        let model = AnchoredModel { n };
        let order = e(keel_order(n))?;
        ensure(
            e(check_star_order(&model, &order, 4096))?.is_valid(),
            || format!("Keel order n={n} fails (*)"),
        )?;
        let options = RunOptions {
            table: false,
            ..RunOptions::default()
        };
        let trace = e(run_sequence(&model, &order, &options))?;
        let mut twos = 0;
        for r in &trace.steps {
            match r.codim.at(1) {
                1 => {}
                2 => twos += 1,
                c => return Err(format!("center {} has codim {c}", r.center)),
            }
        }
        // Δ_{I,a} has codim |I| and Δ_I codim |I|−1 in (ℙ¹)ⁿ⁻³.
        let k = (n - 3) as u64;
        let sizes =
            |s: u64| (1..=s).fold((1u64, 1u64), |(num, den), i| (num * (k + 1 - i), den * i));
        let binom = |s: u64| {
            let (a, b) = sizes(s);
            a / b
        };
        let expected: u64 =
            (2..=k).map(|s| 3 * binom(s)).sum::<u64>() + (3..=k).map(binom).sum::<u64>();
        ensure(twos == expected, || {
            format!("n={n}: {twos} codim-2 centers, expected {expected}")
        })?;
        summary.push(format!("n={n}: {twos} codim-2 of {}", trace.steps.len()));
    }
    Ok(format!("Keel orders pass (*); {}", summary.join(", ")))
}

type MeetCache<E> = std::collections::HashMap<(E, E), Option<E>>;

/// Memoizes the exact meets of a model.
struct Memo<M: Model> {
    inner: M,
    meets: std::cell::RefCell<MeetCache<M::Elem>>,
}

impl<M: Model> Model for Memo<M> {
    type Elem = M::Elem;

    fn ambient_dim(&self) -> Dim {
        self.inner.ambient_dim()
    }

    fn dim(&self, x: &M::Elem) -> wonderful::Result<Dim> {
        self.inner.dim(x)
    }

    fn meet(&self, a: &M::Elem, b: &M::Elem) -> wonderful::Result<Option<M::Elem>> {
        let key = (a.clone(), b.clone());
        if let Some(r) = self.meets.borrow().get(&key) {
            return Ok(r.clone());
        }
        let r = self.inner.meet(a, b)?;
        self.meets.borrow_mut().insert(key, r.clone());
        Ok(r)
    }

    fn label(&self, x: &M::Elem) -> String {
        self.inner.label(x)
    }
}

fn linear_image(model: &mut LinearModel, p: &Polydiagonal) -> Subspace {
    let s = p.to_linear();
    model.name(&s, p.label());
    s
}

fn c6() -> Outcome {
    for n in 2..=4u32 {
        let dm = PolydiagonalModel { n };
        let mut lm = LinearModel::new(n as usize, false);
        let all = all_polydiagonals(n);
        let lin: Vec<Subspace> = all.iter().map(|p| linear_image(&mut lm, p)).collect();
        let lm = Memo {
            inner: lm,
            meets: Default::default(),
        };
        for (a, la) in all.iter().zip(&lin) {
            for (b, lb) in all.iter().zip(&lin) {
                let meet = e(dm.meet(a, b))?.map(|x| x.to_linear());
                ensure(meet == e(lm.meet(la, lb))?, || {
                    format!("meet {} {}", a.label(), b.label())
                })?;
                ensure(e(dm.contains(a, b))? == e(lm.contains(la, lb))?, || {
                    "containment".into()
                })?;
            }
        }
        for mask in 1u64..(1 << all.len()) {
            let idx: Vec<usize> = (0..all.len()).filter(|i| mask >> i & 1 == 1).collect();
            let ds: Vec<Polydiagonal> = idx.iter().map(|&i| all[i].clone()).collect();
            let ls: Vec<Subspace> = idx.iter().map(|&i| lin[i].clone()).collect();
            ensure(
                e(is_transversal(&dm, &ds))? == e(is_transversal(&lm, &ls))?,
                || "transversality".into(),
            )?;
            let vd = e(is_building_set(&dm, &ds, 100))?;
            let vl = e(is_building_set(&lm, &ls, 100))?;
            ensure(vd.is_building() == vl.is_building(), || {
                "building verdict".into()
            })?;
            let mapped: BTreeSet<Subspace> = vd.arrangement.iter().map(|x| x.to_linear()).collect();
            ensure(mapped == vl.arrangement.iter().cloned().collect(), || {
                "induced arrangement".into()
            })?;
        }
        for g in [fm_building_set(n), ulyanov_building_set(n)] {
            let lg: Vec<Subspace> = g.iter().map(|p| p.to_linear()).collect();
            for mask in 0u64..(1 << g.len()) {
                let t: Vec<_> = (0..g.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| g[i].clone())
                    .collect();
                let lt: Vec<_> = (0..g.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| lg[i].clone())
                    .collect();
                ensure(
                    e(is_nest(&dm, &g, &t))? == e(is_nest(&lm, &lg, &lt))?,
                    || "nest verdict".into(),
                )?;
            }
        }
    }
    Ok("diagonal and linear models agree on every subset for n ≤ 4".into())
}

fn c7() -> Outcome {
    let x3 = PolydiagonalModel { n: 3 };
    let a = e(enumerate_nests(
        &x3,
        &fm_building_set(3),
        None,
        DEFAULT_MAX_NESTS,
    ))?
    .len();
    let m05 = AnchoredModel { n: 5 };
    let b = e(enumerate_nests(
        &m05,
        &e(m0n_building_set(5))?,
        None,
        DEFAULT_MAX_NESTS,
    ))?
    .len();
    ensure(a == 7 && b == 7, || format!("counts {a} and {b}"))?;
    Ok("7 nests for FM n=3 and 7 for M̄0,5".into())
}

fn c8() -> Outcome {
    fn check<M: Model>(model: &M, order: &[M::Elem], what: &str) -> Result<(), String> {
        let options = RunOptions {
            verify_levels: true,
            ..RunOptions::default()
        };
        let trace = e(run_sequence(model, order, &options))?;
        let table = trace.table.ok_or("no table")?;
        ensure(
            table.nonempty_subsets() == nest_labels(model, order)?,
            || format!("{what}: table ≠ nests"),
        )?;
        ensure(table.all_additive(), || {
            format!("{what}: non-additive codim")
        })
    }
    check(&PolydiagonalModel { n: 3 }, &fm_original_order(3), "FM n=3")?;
    check(&AnchoredModel { n: 5 }, &e(keel_order(5))?, "M̄0,5")?;
    let path = e(kt_building_set(&LabeledGraph::path(3)))?;
    check(&PolydiagonalModel { n: 3 }, &path, "KT path")?;
    Ok("nonempty divisor intersections are the nests, all transversal".into())
}

fn preserved<M: Model>(model: &M, g: &[M::Elem], center: &M::Elem) -> Result<usize, String> {
    let mut tower = e(Tower::new(model, g))?;
    let f = tower.base_id(center);
    e(tower.blow_up(f))?;
    let lifted = tower.level_model(1);
    let ids = tower.building(1).to_vec();
    for mask in 0u64..(1 << g.len()) {
        let t: Vec<_> = (0..g.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| g[i].clone())
            .collect();
        let tt: Vec<_> = (0..g.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ids[i])
            .collect();
        ensure(
            e(is_nest(model, g, &t))? == e(is_nest(&lifted, &ids, &tt))?,
            || format!("subset {mask:b}"),
        )?;
    }
    Ok(1 << g.len())
}

fn c9() -> Outcome {
    let x4 = PolydiagonalModel { n: 4 };
    let center = d(4, &[1, 2, 3, 4]);
    let a = preserved(&x4, &fm_building_set(4), &center)?;
    let b = preserved(&x4, &ulyanov_building_set(4), &center)?;
    Ok(format!(
        "nest verdicts preserved by Bl_Δ1234 on {a} FM and {b} polydiagonal subsets"
    ))
}

fn c10() -> Outcome {
    let model = PolydiagonalModel { n: 3 };
    let g = fm_building_set(3);
    let mut results = Vec::new();
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..g.len() {
        let mut next = Vec::new();
        for p in &perms {
            for i in (0..g.len()).filter(|i| !p.contains(i)) {
                next.push([p.clone(), vec![i]].concat());
            }
        }
        perms = next;
    }
    for p in perms {
        let order: Vec<_> = p.iter().map(|&i| g[i].clone()).collect();
        if !e(check_star_order(&model, &order, 100))?.is_valid() {
            continue;
        }
        let table = e(run_sequence(&model, &order, &RunOptions::default()))?
            .table
            .ok_or("no table")?;
        let mut codims: Vec<(String, Dim)> = table
            .names
            .iter()
            .cloned()
            .zip(table.codims.iter().copied())
            .collect();
        codims.sort();
        results.push((table.rows, codims));
    }
    ensure(results.windows(2).all(|w| w[0] == w[1]), || {
        "tables differ".into()
    })?;
    Ok(format!(
        "{} (*)-valid orders give identical tables and codims",
        results.len()
    ))
}

fn c11() -> Outcome {
    let x4 = PolydiagonalModel { n: 4 };
    let gmin: BTreeSet<_> = e(irreducible_elements(&x4, &all_polydiagonals(4), 64))?
        .into_iter()
        .collect();
    let fm: BTreeSet<_> = fm_building_set(4).into_iter().collect();
    ensure(gmin == fm, || {
        "minimal building set of X⁴ is not the diagonals".into()
    })?;
    let x3 = PolydiagonalModel { n: 3 };
    let arr = all_polydiagonals(3);
    let gmin3 = e(irreducible_elements(&x3, &arr, 64))?;
    let mut building = 0;
    for g in subsets(&arr) {
        if !g.is_empty() && e(is_building_set_of(&x3, &g, &arr))? {
            building += 1;
            ensure(gmin3.iter().all(|x| g.contains(x)), || {
                "G_min not contained".into()
            })?;
        }
    }
    Ok(format!(
        "G_min(X⁴) = diagonals; G_min(X³) inside all {building} building subsets"
    ))
}

fn c12() -> Outcome {
    let mut pairs = 0;
    for n in 2..=4 {
        let model = PolydiagonalModel { n };
        let graphs = all_graphs(n);
        for g1 in &graphs {
            for g2 in &graphs {
                if g1 == g2 || !g1.edges().is_subset(g2.edges()) {
                    continue;
                }
                let order = e(kt_extension_order(g1, g2))?;
                let v = e(check_star_order(&model, &order, 4096))?;
                ensure(v.is_valid(), || {
                    format!(
                        "{:?} ⊂ {:?} fails at {:?}",
                        g1.edges(),
                        g2.edges(),
                        v.failing_prefix
                    )
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} graph pairs pass (*)"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("building-set verdicts", c1, Duration::from_secs(1)),
        ("nest verdicts", c2, Duration::from_secs(1)),
        ("order checks", c3, Duration::from_secs(10)),
        ("center dimensions", c4, Duration::from_secs(60)),
        ("Keel order", c5, Duration::from_secs(30)),
        ("oracle equivalence", c6, Duration::from_secs(60)),
        ("nest enumeration", c7, Duration::from_secs(60)),
        ("divisor/nest correspondence", c8, Duration::from_secs(60)),
        ("single-step nest preservation", c9, Duration::from_secs(60)),
        ("order independence", c10, Duration::from_secs(60)),
        ("minimal building set", c11, Duration::from_secs(120)),
        ("graph extension orders", c12, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *budget => Err(format!("{msg}, but took {took:.2?} > {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({took:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({took:.2?})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
