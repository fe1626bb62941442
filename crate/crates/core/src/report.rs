//! Solve reports shared by the distributed and cascade solvers.

/// A rate pair. For the two-encoder setting the coordinates are (R1, R2);
/// for the cascade they are (R12, R23).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

/// The achieving scheme, flattened into its searched parameter blocks plus
/// the decoders chosen cell-wise on top of them.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSummary {
    /// One label/values pair per conditional-pmf block, e.g. `p(a,u1|x1=0)`.
    pub pmf_blocks: Vec<(String, Vec<f64>)>,
    /// Enumerated deterministic maps, e.g. the action table.
    pub maps: Vec<(String, Vec<usize>)>,
    /// Cell-wise optimal decoder tables.
    pub decoders: Vec<(String, Vec<usize>)>,
}

/// Best feasible point found by a solver.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Minimized weighted rate.
    pub value: f64,
    /// The rate pair attaining `value` on the scheme's rate region.
    pub rates: RatePoint,
    pub realized_cost: f64,
    pub realized_d1: f64,
    pub realized_d2: f64,
    pub scheme: SchemeSummary,
}

/// Search diagnostics. Identical configurations produce identical stats
/// regardless of worker count.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    pub candidates_evaluated: u64,
    pub feasible_candidates: u64,
    /// Best feasible value seen in the grid phase, if any.
    pub grid_value: Option<f64>,
    pub refine_accepted: u64,
    pub seed: u64,
}

/// Outcome of a solver run: the best feasible point with diagnostics, or a
/// certificate that no candidate satisfied the constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Option<Solution>,
    pub stats: SearchStats,
    /// True when the evaluated region is known to be the exact
    /// rate-distortion-cost region (degraded source sets with causal side
    /// information, or the single-encoder-action lossless setting); false
    /// when it is an inner bound / achievable upper bound.
    pub exact_region: bool,
}

impl SolveReport {
    pub fn is_feasible(&self) -> bool {
        self.solution.is_some()
    }

    pub fn value(&self) -> Option<f64> {
        self.solution.as_ref().map(|s| s.value)
    }
}
