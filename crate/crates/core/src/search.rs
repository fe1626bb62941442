//! Deterministic search over auxiliary-scheme parameterizations.
//!
//! A scheme is a list of pmf blocks (points on probability simplices) plus a
//! list of deterministic-map blocks. The optimizer exhaustively evaluates
//! the cross product of a resolution-m simplex grid with the full map
//! enumeration, then polishes the best feasible candidate with seeded random
//! coordinate perturbations. Results are bit-identical for a fixed
//! `(config, space, objective)` regardless of worker count: the grid phase
//! reduces with (value, candidate-id) minima and ties always go to the
//! lexicographically smallest parameter vector.

use crate::report::SearchStats;
use crate::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Knobs for the grid-then-refine optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Grid resolution m: grid probabilities are multiples of 1/m.
    pub grid_resolution: usize,
    /// Number of independent refinement restarts from the grid optimum.
    pub restarts: usize,
    /// Perturbation steps per restart.
    pub refine_steps: usize,
    /// Initial perturbation magnitude; decays geometrically within a restart.
    pub step_scale: f64,
    pub seed: u64,
    /// Grid-phase worker threads. Never changes the result.
    pub parallel_workers: usize,
    /// Cap on the number of deterministic maps enumerated per block.
    pub map_cap: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_resolution: 4,
            restarts: 4,
            refine_steps: 200,
            step_scale: 0.1,
            seed: 1,
            parallel_workers: 1,
            map_cap: 1_000_000,
        }
    }
}

/// One conditional-pmf block of the parameterization.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfBlock {
    pub label: String,
    pub dim: usize,
}

/// One deterministic-map block.
#[derive(Debug, Clone, PartialEq)]
pub struct MapBlock {
    pub label: String,
    pub domain: usize,
    pub codomain: usize,
}

/// A scheme parameterization: the search space.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamSpace {
    pub pmf_blocks: Vec<PmfBlock>,
    pub map_blocks: Vec<MapBlock>,
}

/// A candidate scheme: one pmf per pmf block, one table per map block.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint {
    pub pmfs: Vec<Vec<f64>>,
    pub maps: Vec<Vec<usize>>,
}

/// Objective outcome for one candidate. Evaluation must be pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub feasible: bool,
}

/// Result of [`minimize`]: the best feasible candidate, if any, with
/// diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub best: Option<(f64, ParamPoint)>,
    pub stats: SearchStats,
}

/// All pmfs with denominator `resolution` on the `dimension`-simplex, in
/// lexicographically ascending order. Count is C(m+d-1, d-1).
pub fn simplex_grid(dimension: usize, resolution: usize) -> Vec<Vec<f64>> {
    assert!(dimension >= 1 && resolution >= 1);
    let mut out = Vec::with_capacity(simplex_grid_count(dimension, resolution) as usize);
    let mut prefix = Vec::with_capacity(dimension);
    fill_simplex(dimension, resolution, resolution, &mut prefix, &mut out);
    out
}

fn fill_simplex(
    dimension: usize,
    resolution: usize,
    remaining: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<f64>>,
) {
    if dimension == 1 {
        prefix.push(remaining);
        out.push(prefix.iter().map(|&k| k as f64 / resolution as f64).collect());
        prefix.pop();
        return;
    }
    for k in 0..=remaining {
        prefix.push(k);
        fill_simplex(dimension - 1, resolution, remaining - k, prefix, out);
        prefix.pop();
    }
}

/// C(m+d-1, d-1): the size of the resolution-m grid on the d-simplex.
pub fn simplex_grid_count(dimension: usize, resolution: usize) -> u128 {
    binomial((resolution + dimension - 1) as u128, (dimension - 1) as u128)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All k^n total maps from an n-point domain to a k-point codomain, as
/// tables in lexicographic order. Errors when k^n exceeds `cap`.
pub fn enumerate_maps(
    domain_size: usize,
    codomain_size: usize,
    cap: u128,
) -> Result<Vec<Vec<usize>>, Error> {
    assert!(domain_size >= 1 && codomain_size >= 1);
    let count = (codomain_size as u128)
        .checked_pow(domain_size as u32)
        .unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::BudgetExceeded { needed: count, cap });
    }
    let count = count as usize;
    let mut out = Vec::with_capacity(count);
    for id in 0..count {
        let mut table = vec![0usize; domain_size];
        let mut rem = id;
        for slot in (0..domain_size).rev() {
            table[slot] = rem % codomain_size;
            rem /= codomain_size;
        }
        out.push(table);
    }
    Ok(out)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Lexicographic order on parameter vectors: pmf blocks first, then maps.
fn lex_less(a: &ParamPoint, b: &ParamPoint) -> bool {
    for (pa, pb) in a.pmfs.iter().zip(&b.pmfs) {
        for (x, y) in pa.iter().zip(pb) {
            if x < y {
                return true;
            }
            if x > y {
                return false;
            }
        }
    }
    a.maps < b.maps
}

struct Grids {
    pmf: Vec<Vec<Vec<f64>>>,
    map: Vec<Vec<Vec<usize>>>,
    /// Candidate count per block, pmf blocks first.
    sizes: Vec<u64>,
    total: u64,
}

impl Grids {
    fn build(space: &ParamSpace, config: &SearchConfig) -> Result<Self, Error> {
        let pmf: Vec<_> = space
            .pmf_blocks
            .iter()
            .map(|b| simplex_grid(b.dim, config.grid_resolution))
            .collect();
        let map: Vec<_> = space
            .map_blocks
            .iter()
            .map(|b| enumerate_maps(b.domain, b.codomain, config.map_cap))
            .collect::<Result<_, _>>()?;
        let mut sizes = Vec::new();
        let mut total: u128 = 1;
        for g in &pmf {
            sizes.push(g.len() as u64);
            total *= g.len() as u128;
        }
        for g in &map {
            sizes.push(g.len() as u64);
            total *= g.len() as u128;
        }
        if total > u64::MAX as u128 {
            return Err(Error::BudgetExceeded { needed: total, cap: u64::MAX as u128 });
        }
        Ok(Self { pmf, map, sizes, total: total as u64 })
    }

    fn decode(&self, id: u64) -> ParamPoint {
        let mut digits = vec![0usize; self.sizes.len()];
        let mut rem = id;
        for i in (0..self.sizes.len()).rev() {
            digits[i] = (rem % self.sizes[i]) as usize;
            rem /= self.sizes[i];
        }
        let n_pmf = self.pmf.len();
        ParamPoint {
            pmfs: self
                .pmf
                .iter()
                .enumerate()
                .map(|(i, g)| g[digits[i]].clone())
                .collect(),
            maps: self
                .map
                .iter()
                .enumerate()
                .map(|(i, g)| g[digits[n_pmf + i]].clone())
                .collect(),
        }
    }
}

/// Grid search over the whole space followed by seeded local refinement.
///
/// The returned value is the objective at a feasible candidate, hence a
/// certified upper bound on the infimum over the space. `best` is `None`
/// when no grid candidate is feasible.
pub fn minimize<F>(
    objective: F,
    space: &ParamSpace,
    config: &SearchConfig,
) -> Result<SearchReport, Error>
where
    F: Fn(&ParamPoint) -> Evaluation + Sync,
{
    assert!(config.grid_resolution >= 1);
    let grids = Grids::build(space, config)?;
    let workers = config.parallel_workers.max(1).min(grids.total.max(1) as usize);

    // (value, id) minimum over a strided shard of candidate ids.
    let scan = |start: u64| -> (Option<(f64, u64)>, u64) {
        let mut best: Option<(f64, u64)> = None;
        let mut feasible = 0u64;
        let mut id = start;
        while id < grids.total {
            let point = grids.decode(id);
            let eval = objective(&point);
            if eval.feasible {
                feasible += 1;
                let better = match best {
                    None => true,
                    Some((v, _)) => eval.value < v,
                };
                if better {
                    best = Some((eval.value, id));
                }
            }
            id += workers as u64;
        }
        (best, feasible)
    };

    let shards: Vec<(Option<(f64, u64)>, u64)> = if workers <= 1 {
        vec![scan(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| s.spawn(move || scan(w)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    };

    let mut grid_best: Option<(f64, u64)> = None;
    let mut feasible_candidates = 0u64;
    for (best, feas) in shards {
        feasible_candidates += feas;
        if let Some((v, id)) = best {
            let better = match grid_best {
                None => true,
                Some((bv, bid)) => v < bv || (v == bv && id < bid),
            };
            if better {
                grid_best = Some((v, id));
            }
        }
    }

    let mut stats = SearchStats {
        candidates_evaluated: grids.total,
        feasible_candidates,
        grid_value: grid_best.map(|(v, _)| v),
        refine_accepted: 0,
        seed: config.seed,
    };

    let Some((grid_value, grid_id)) = grid_best else {
        return Ok(SearchReport { best: None, stats });
    };

    let start = grids.decode(grid_id);
    let mut best_value = grid_value;
    let mut best_point = start.clone();

    if !space.pmf_blocks.is_empty() {
        for restart in 0..config.restarts {
            let mut rng =
                ChaCha8Rng::seed_from_u64(splitmix64(config.seed) ^ splitmix64(restart as u64));
            let mut cur = start.clone();
            let mut cur_value = grid_value;
            for step in 0..config.refine_steps {
                let decay = if config.refine_steps > 1 {
                    (-8.0 * step as f64 / config.refine_steps as f64).exp2()
                } else {
                    1.0
                };
                let scale = config.step_scale * decay;
                let block = rng.gen_range(0..cur.pmfs.len());
                let coord = rng.gen_range(0..cur.pmfs[block].len());
                let delta = (rng.gen::<f64>() * 2.0 - 1.0) * scale;
                let mut trial = cur.clone();
                trial.pmfs[block][coord] += delta;
                if !project_to_simplex(&mut trial.pmfs[block]) {
                    continue;
                }
                let eval = objective(&trial);
                if eval.feasible && eval.value < cur_value {
                    cur = trial;
                    cur_value = eval.value;
                    stats.refine_accepted += 1;
                }
            }
            if cur_value < best_value || (cur_value == best_value && lex_less(&cur, &best_point)) {
                best_value = cur_value;
                best_point = cur;
            }
        }
    }

    Ok(SearchReport {
        best: Some((best_value, best_point)),
        stats,
    })
}

/// Clamp negatives to zero and renormalize. Returns false when the whole
/// block collapsed to zero mass.
fn project_to_simplex(pmf: &mut [f64]) -> bool {
    let mut sum = 0.0;
    for p in pmf.iter_mut() {
        if *p < 0.0 {
            *p = 0.0;
        }
        sum += *p;
    }
    if sum <= 0.0 {
        return false;
    }
    for p in pmf.iter_mut() {
        *p /= sum;
    }
    true
}
