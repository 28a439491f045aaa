use std::collections::HashMap;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::filter::{Compiled, FamilyFilter, Slot};
use super::{edge_lattice_report, reduce_polygon};
use crate::error::{Error, Result};
use crate::exec::{try_map, Execution};
use crate::multiplication::{check_surjectivity_with, cokernel_of_polygons, CheckMode};
use crate::toric::{classify_polygon, polygon_of, Fan, PositivityClass, TorusDivisor, MAX_RAYS};

/// Largest number of candidate divisors a sweep enumerates in full.
pub const DEFAULT_SWEEP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOptions {
    pub budget: u64,
    /// Required when the family exceeds the budget; selects the sample.
    pub seed: Option<u64>,
    pub exec: Execution,
    /// `brute` checks cokernels only; `structured` and `both` also run
    /// [`check_surjectivity_with`] on `(L, E')` for every class.
    pub mode: CheckMode,
    /// When false, only aggregate statistics are kept.
    pub keep_instances: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            budget: DEFAULT_SWEEP_BUDGET,
            seed: None,
            exec: Execution::default(),
            mode: CheckMode::Brute,
            keep_instances: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepInstance {
    pub e: TorusDivisor,
    pub reduced: TorusDivisor,
    pub h0_e: u64,
    pub h0_sum: u64,
    pub sumset_size: u64,
    pub coker_dim: u64,
    pub structured_fallbacks: u64,
    /// `coker(L, E') = 0` and every missing point of `coker(L, E)` avoids `P_{L+E'}`.
    pub pipeline_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepResult {
    pub fixed_l: TorusDivisor,
    pub h0_l: u64,
    pub e_max: i64,
    /// In graded lexicographic order of `E`; empty unless instances are kept.
    pub instances: Vec<SweepInstance>,
    pub instance_count: u64,
    /// Distinct divisor classes up to translation among the instances.
    pub class_count: u64,
    pub max_coker: u64,
    /// Smallest coefficient bound at which `max_coker` is reached.
    pub stabilization_coeff: i64,
    /// Largest lattice count of a face `σ_j(E')`, `j ∈ J`, over the sweep.
    pub max_edge_lattice_count: u64,
    pub pipeline_violations: u64,
    pub structured_fallbacks: u64,
    /// Size of the family before sampling.
    pub candidates: u64,
    /// Set when the family exceeded the budget and was sampled.
    pub sampled_seed: Option<u64>,
}

struct Enumerator {
    compiled: Compiled,
    e_max: i64,
}

impl Enumerator {
    fn vars(&self) -> usize {
        self.compiled.weights.len()
    }

    fn count(&self) -> Result<u64> {
        let radix = (self.e_max + 1) as u64;
        radix.checked_pow(self.vars() as u32).ok_or(Error::Overflow)
    }

    fn fill(&self, assign: &[i64], out: &mut [i64]) {
        for (o, s) in out.iter_mut().zip(&self.compiled.slots) {
            *o = match s {
                Slot::Fixed(v) => *v,
                Slot::Var(i) => assign[*i],
            };
        }
    }

    /// Visits every assignment in graded lexicographic order of the coefficient vector.
    fn for_each(&self, f: &mut dyn FnMut(&[i64]) -> Result<()>) -> Result<()> {
        let w = &self.compiled.weights;
        let mut suffix = vec![0i64; w.len() + 1];
        for i in (0..w.len()).rev() {
            suffix[i] = suffix[i + 1] + w[i] * self.e_max;
        }
        let mut assign = vec![0i64; w.len()];
        let mut buf = vec![0i64; self.compiled.slots.len()];
        for grade in 0..=suffix[0] {
            self.dfs(0, grade, &suffix, &mut assign, &mut buf, f)?;
        }
        Ok(())
    }

    fn dfs(
        &self,
        v: usize,
        remaining: i64,
        suffix: &[i64],
        assign: &mut [i64],
        buf: &mut [i64],
        f: &mut dyn FnMut(&[i64]) -> Result<()>,
    ) -> Result<()> {
        if v == assign.len() {
            if remaining == 0 {
                self.fill(assign, buf);
                f(buf)?;
            }
            return Ok(());
        }
        let w = self.compiled.weights[v];
        for x in 0..=self.e_max {
            let r = remaining - w * x;
            if r < 0 {
                break;
            }
            if r > suffix[v + 1] {
                continue;
            }
            assign[v] = x;
            self.dfs(v + 1, r, suffix, assign, buf, f)?;
        }
        Ok(())
    }

    /// `budget` assignments drawn without replacement, split evenly over the values of
    /// the first variable, returned in graded lexicographic order.
    fn sample(&self, budget: u64, seed: u64) -> Result<Vec<Vec<i64>>> {
        let k = self.vars();
        if k == 0 {
            return Ok(Vec::new());
        }
        let radix = (self.e_max + 1) as u64;
        let stratum = radix.checked_pow(k as u32 - 1).ok_or(Error::Overflow)?;
        let stratum_len = usize::try_from(stratum).map_err(|_| Error::Overflow)?;
        let (per, rem) = (budget / radix, budget % radix);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(budget as usize);
        let mut assign = vec![0i64; k];
        for s in 0..radix {
            let m = (per + u64::from(s < rem)).min(stratum) as usize;
            for idx in index::sample(&mut rng, stratum_len, m) {
                assign[0] = s as i64;
                let mut rest = idx as u64;
                for a in assign.iter_mut().skip(1).rev() {
                    *a = (rest % radix) as i64;
                    rest /= radix;
                }
                let mut buf = vec![0i64; self.compiled.slots.len()];
                self.fill(&assign, &mut buf);
                out.push(buf);
            }
        }
        out.sort_by(|a, b| {
            let (sa, sb): (i64, i64) = (a.iter().sum(), b.iter().sum());
            sa.cmp(&sb).then_with(|| a.cmp(b))
        });
        Ok(out)
    }
}

type ClassKey = [i64; MAX_RAYS];

/// Translation bringing the first two coefficients to zero: `m` with
/// `<m, v_0> = a_0` and `<m, v_1> = a_1`.
fn normalizer(fan: &Fan, a: &[i64]) -> (i128, i128) {
    let (v0, v1) = (fan.ray(0), fan.ray(1));
    let (a0, a1) = (a[0] as i128, a[1] as i128);
    (
        v1.y as i128 * a0 - v0.y as i128 * a1,
        -(v1.x as i128) * a0 + v0.x as i128 * a1,
    )
}

fn shift(fan: &Fan, a: &[i64], m: (i128, i128), sign: i128) -> Result<Vec<i64>> {
    a.iter()
        .zip(fan.rays())
        .map(|(c, v)| {
            let t = *c as i128 - sign * (m.0 * v.x as i128 + m.1 * v.y as i128);
            i64::try_from(t).map_err(|_| Error::Overflow)
        })
        .collect()
}

fn class_key(fan: &Fan, a: &[i64]) -> Result<ClassKey> {
    let canon = shift(fan, a, normalizer(fan, a), 1)?;
    let mut key = [0i64; MAX_RAYS];
    key[..canon.len()].copy_from_slice(&canon);
    Ok(key)
}

#[derive(Debug, Clone)]
struct ClassOutcome {
    h0_e: u64,
    h0_sum: u64,
    sumset_size: u64,
    coker_dim: u64,
    reduced: Vec<i64>,
    fallbacks: u64,
    pipeline_ok: bool,
    max_edge: u64,
}

struct Context<'a> {
    fan: &'a Fan,
    l: &'a TorusDivisor,
    pl: crate::geometry::ConvexLatticePolygon,
    mode: CheckMode,
}

impl Context<'_> {
    fn evaluate(&self, key: &ClassKey) -> Result<Option<ClassOutcome>> {
        let fan = self.fan;
        let e = TorusDivisor::new(key[..fan.len()].to_vec());
        let pe = polygon_of(fan, &e)?;
        if pe.lattice_count()? == 0 {
            return Ok(None);
        }
        let psum = polygon_of(fan, &self.l.checked_add(&e)?)?;
        let coker = cokernel_of_polygons(&self.pl, &pe, &psum)?;
        let red = reduce_polygon(fan, &e, &pe)?;
        let psum_red = polygon_of(fan, &self.l.checked_add(&red.reduced)?)?;
        let coker_red = cokernel_of_polygons(&self.pl, &red.hull_polygon, &psum_red)?;
        let mut pipeline_ok = coker_red.coker_dim == 0;
        for m in &coker.missing_points {
            if psum_red.contains_lattice(*m)? {
                pipeline_ok = false;
            }
        }
        let mut fallbacks = 0;
        if self.mode.runs_structured() {
            let r = check_surjectivity_with(
                fan,
                self.l,
                &red.reduced,
                self.mode,
                Execution::Sequential,
            )?;
            pipeline_ok &= r.surjective;
            fallbacks = r.structured_fallbacks;
        }
        let max_edge = edge_lattice_report(fan, &red)?
            .iter()
            .map(|x| x.1)
            .max()
            .unwrap_or(0);
        Ok(Some(ClassOutcome {
            h0_e: coker.h0_e,
            h0_sum: coker.h0_sum,
            sumset_size: coker.sumset_size,
            coker_dim: coker.coker_dim,
            reduced: red.reduced.coeffs().to_vec(),
            fallbacks,
            pipeline_ok,
            max_edge,
        }))
    }
}

/// [`sweep_cokernel_with`] under default options.
pub fn sweep_cokernel(
    fan: &Fan,
    l: &TorusDivisor,
    e_max: i64,
    filter: Option<&FamilyFilter>,
) -> Result<SweepResult> {
    sweep_cokernel_with(fan, l, e_max, filter, &SweepOptions::default())
}

/// Cokernel dimensions of `H^0(L) ⊗ H^0(E) -> H^0(L + E)` for every nonzero `E` with
/// sections and coefficients in `[0, e_max]` (or matching `filter`).
///
/// Each instance also checks that the cokernel disappears after replacing `E` by its
/// globally generated reduction `E'`, and that every missing point lies outside
/// `P_{L+E'}`. Divisors that differ by a translation share one evaluation.
pub fn sweep_cokernel_with(
    fan: &Fan,
    l: &TorusDivisor,
    e_max: i64,
    filter: Option<&FamilyFilter>,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    let n = fan.len();
    if n > MAX_RAYS {
        return Err(Error::FanTooLarge {
            rays: n,
            limit: MAX_RAYS,
        });
    }
    if e_max < 1 {
        return Err(Error::precondition("e_max must be at least 1"));
    }
    let pl = polygon_of(fan, l)?;
    if classify_polygon(fan, l, &pl)? != PositivityClass::Ample {
        return Err(Error::precondition("the fixed divisor L must be ample"));
    }
    let full = FamilyFilter::full(n);
    let filter = filter.unwrap_or(&full);
    if filter.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: filter.len(),
        });
    }
    let en = Enumerator {
        compiled: filter.compile(),
        e_max,
    };
    let candidates = en.count()?;
    let sampled = if candidates > opts.budget {
        let seed = opts.seed.ok_or(Error::BudgetExceeded {
            required: candidates,
            budget: opts.budget,
        })?;
        Some(en.sample(opts.budget, seed)?)
    } else {
        None
    };
    let visit = |f: &mut dyn FnMut(&[i64]) -> Result<()>| -> Result<()> {
        match &sampled {
            Some(list) => list.iter().try_for_each(|a| f(a)),
            None => en.for_each(f),
        }
    };

    let mut ids: HashMap<ClassKey, u32> = HashMap::new();
    let mut classes: Vec<ClassKey> = Vec::new();
    let mut order: Vec<u32> = Vec::new();
    visit(&mut |a| {
        if a.iter().all(|&c| c == 0) {
            return Ok(());
        }
        let key = class_key(fan, a)?;
        let id = *ids.entry(key).or_insert_with(|| {
            classes.push(key);
            (classes.len() - 1) as u32
        });
        order.push(id);
        Ok(())
    })?;
    drop(ids);

    let ctx = Context {
        fan,
        l,
        pl,
        mode: opts.mode,
    };
    let outcomes = try_map(opts.exec, &classes, |k| ctx.evaluate(k))?;

    let mut res = SweepResult {
        fixed_l: l.clone(),
        h0_l: ctx.pl.lattice_count()?,
        e_max,
        instances: Vec::new(),
        instance_count: 0,
        class_count: outcomes.iter().filter(|o| o.is_some()).count() as u64,
        max_coker: 0,
        stabilization_coeff: 0,
        max_edge_lattice_count: 0,
        pipeline_violations: 0,
        structured_fallbacks: 0,
        candidates,
        sampled_seed: sampled.as_ref().and(opts.seed),
    };
    let mut best: Option<(u64, i64)> = None;
    let mut next = 0usize;
    visit(&mut |a| {
        if a.iter().all(|&c| c == 0) {
            return Ok(());
        }
        let id = order[next] as usize;
        next += 1;
        let Some(o) = &outcomes[id] else {
            return Ok(());
        };
        res.instance_count += 1;
        res.max_edge_lattice_count = res.max_edge_lattice_count.max(o.max_edge);
        res.structured_fallbacks += o.fallbacks;
        if !o.pipeline_ok {
            res.pipeline_violations += 1;
        }
        let top = *a.iter().max().expect("nonempty");
        best = match best {
            Some((c, t)) if c > o.coker_dim || (c == o.coker_dim && t <= top) => Some((c, t)),
            _ => Some((o.coker_dim, top)),
        };
        if opts.keep_instances {
            let m = normalizer(fan, a);
            res.instances.push(SweepInstance {
                e: TorusDivisor::new(a.to_vec()),
                reduced: TorusDivisor::new(shift(fan, &o.reduced, m, -1)?),
                h0_e: o.h0_e,
                h0_sum: o.h0_sum,
                sumset_size: o.sumset_size,
                coker_dim: o.coker_dim,
                structured_fallbacks: o.fallbacks,
                pipeline_ok: o.pipeline_ok,
            });
        }
        Ok(())
    })?;
    if let Some((c, t)) = best {
        res.max_coker = c;
        res.stabilization_coeff = t;
    }
    Ok(res)
}
