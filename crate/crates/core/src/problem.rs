//! Declarative problem descriptions for the two vending-machine settings:
//! two distributed encoders feeding one decoder, and a three-node cascade.
//!
//! A problem bundles the source pmf p(x1,x2), the action-dependent channel
//! p(y|a,x1,x2), per-action costs, two distortion tables on
//! (x1,x2,y,xhat_j), and the (D1, D2, Γ) budgets. Construction does not
//! validate; [`DistributedProblem::validate`] reports every violation so a
//! config loader can surface all problems at once.

use crate::info::{ConditionalPmf, JointPmf};
use crate::scalar::Scalar;
use crate::Error;

/// Cost and distortion budgets (Γ, D1, D2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budgets<S> {
    pub gamma: S,
    pub d1: S,
    pub d2: S,
}

/// Which source a reconstruction refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceVar {
    X1,
    X2,
}

/// Per-symbol distortion d(x1, x2, y, xhat), stored row-major with x1
/// slowest and xhat fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionTable<S> {
    dims: [usize; 4],
    values: Vec<S>,
}

impl<S: Scalar> DistortionTable<S> {
    pub fn new(dims: [usize; 4], values: Vec<S>) -> Result<Self, Error> {
        let len: usize = dims.iter().product();
        if values.len() != len {
            return Err(Error::InvalidPmf(format!(
                "distortion table has {} entries, expected {len}",
                values.len()
            )));
        }
        Ok(Self { dims, values })
    }

    pub fn from_fn(dims: [usize; 4], f: impl Fn(usize, usize, usize, usize) -> S) -> Self {
        let mut values = Vec::with_capacity(dims.iter().product());
        for x1 in 0..dims[0] {
            for x2 in 0..dims[1] {
                for y in 0..dims[2] {
                    for xh in 0..dims[3] {
                        values.push(f(x1, x2, y, xh));
                    }
                }
            }
        }
        Self { dims, values }
    }

    /// 0/1 distortion on the chosen source coordinate, broadcast over the
    /// other source and the side information. Requires the reconstruction
    /// alphabet to equal the source alphabet.
    pub fn hamming(which: SourceVar, dims: [usize; 4]) -> Result<Self, Error> {
        let src = match which {
            SourceVar::X1 => dims[0],
            SourceVar::X2 => dims[1],
        };
        if dims[3] != src {
            return Err(Error::InvalidPmf(format!(
                "Hamming distortion needs matching alphabets, source has {src} symbols, reconstruction {}",
                dims[3]
            )));
        }
        Ok(Self::from_fn(dims, |x1, x2, _y, xh| {
            let x = match which {
                SourceVar::X1 => x1,
                SourceVar::X2 => x2,
            };
            if x == xh {
                S::zero()
            } else {
                S::one()
            }
        }))
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, x1: usize, x2: usize, y: usize, xhat: usize) -> S {
        let [_, d2, d3, d4] = self.dims;
        self.values[((x1 * d2 + x2) * d3 + y) * d4 + xhat]
    }

    /// Reconstruction alphabet size.
    pub fn recon_card(&self) -> usize {
        self.dims[3]
    }

    /// True iff the table is exactly 0/1 Hamming on the chosen coordinate.
    pub fn is_hamming(&self, which: SourceVar) -> bool {
        let src = match which {
            SourceVar::X1 => self.dims[0],
            SourceVar::X2 => self.dims[1],
        };
        if self.dims[3] != src {
            return false;
        }
        let mut flat = 0;
        for x1 in 0..self.dims[0] {
            for x2 in 0..self.dims[1] {
                for _y in 0..self.dims[2] {
                    for xh in 0..self.dims[3] {
                        let x = match which {
                            SourceVar::X1 => x1,
                            SourceVar::X2 => x2,
                        };
                        let want = if x == xh { S::zero() } else { S::one() };
                        if self.values[flat] != want {
                            return false;
                        }
                        flat += 1;
                    }
                }
            }
        }
        true
    }
}

/// One invariant violation found by `validate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// What is wrong, e.g. `channel cell (a=1, x1=0, x2=1)`.
    pub subject: String,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.subject, self.detail)
    }
}

/// Two correlated sources at separate encoders, one decoder whose side
/// information channel is steered by an action under a cost budget.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributedProblem<S> {
    /// p(x1, x2) over variables ("x1", "x2").
    pub source: JointPmf<S>,
    /// p(y | a, x1, x2) with conditioning variables exactly ("a", "x1", "x2").
    pub channel: ConditionalPmf<S>,
    /// Per-action cost, indexed by the action symbol.
    pub cost: Vec<S>,
    pub d1: DistortionTable<S>,
    pub d2: DistortionTable<S>,
    pub budgets: Budgets<S>,
}

/// Same ingredients for the three-node cascade: Node 1 sees both sources,
/// Node 2 re-encodes toward Node 3, whose causal side information is
/// steered by the action.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeProblem<S> {
    pub source: JointPmf<S>,
    pub channel: ConditionalPmf<S>,
    pub cost: Vec<S>,
    pub d1: DistortionTable<S>,
    pub d2: DistortionTable<S>,
    pub budgets: Budgets<S>,
}

macro_rules! problem_accessors {
    ($ty:ident) => {
        impl<S: Scalar> $ty<S> {
            pub fn x1_card(&self) -> usize {
                self.source.variables()[0].cardinality
            }

            pub fn x2_card(&self) -> usize {
                self.source.variables()[1].cardinality
            }

            pub fn action_card(&self) -> usize {
                self.cost.len()
            }

            pub fn y_card(&self) -> usize {
                self.channel.target()[0].cardinality
            }

            pub fn xhat1_card(&self) -> usize {
                self.d1.recon_card()
            }

            pub fn xhat2_card(&self) -> usize {
                self.d2.recon_card()
            }

            /// Checks every invariant; returns all violations, not just the
            /// first. Pure, so repeated calls agree.
            pub fn validate(&self) -> Vec<Violation> {
                validate_parts(
                    &self.source,
                    &self.channel,
                    &self.cost,
                    &self.d1,
                    &self.d2,
                    &self.budgets,
                )
            }

            pub fn with_budgets(mut self, budgets: Budgets<S>) -> Self {
                self.budgets = budgets;
                self
            }
        }
    };
}

problem_accessors!(DistributedProblem);
problem_accessors!(CascadeProblem);

impl<S: Scalar> DistributedProblem<S> {
    /// True iff x2 is a deterministic per-symbol function of x1 almost
    /// surely: for every x1 of positive probability, p(x2|x1) is a point
    /// mass within 1e-12. This is the degraded-source-sets condition under
    /// which the causal inner bound is the exact region.
    pub fn check_degraded(&self) -> bool {
        let x1n = self.x1_card();
        let x2n = self.x2_card();
        let mass = self.source.mass();
        let tol = S::from_f64(1e-12).unwrap();
        for x1 in 0..x1n {
            let row = &mass[x1 * x2n..(x1 + 1) * x2n];
            let total = row.iter().fold(S::zero(), |a, &b| a + b);
            if total <= S::zero() {
                continue;
            }
            let max = row.iter().fold(S::zero(), |a, &b| if b > a { b } else { a });
            if (total - max) / total > tol {
                return false;
            }
        }
        true
    }
}

fn validate_parts<S: Scalar>(
    source: &JointPmf<S>,
    channel: &ConditionalPmf<S>,
    cost: &[S],
    d1: &DistortionTable<S>,
    d2: &DistortionTable<S>,
    budgets: &Budgets<S>,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let tol = S::normalization_tol();

    let src_vars = source.variables();
    if src_vars.len() != 2 || src_vars[0].name != "x1" || src_vars[1].name != "x2" {
        out.push(Violation {
            subject: "source".into(),
            detail: "variables must be exactly (x1, x2)".into(),
        });
        return out;
    }
    let x1n = src_vars[0].cardinality;
    let x2n = src_vars[1].cardinality;
    let mut sum = S::zero();
    for (i, &p) in source.mass().iter().enumerate() {
        if p < S::zero() || !p.is_finite() {
            out.push(Violation {
                subject: format!("source cell (x1={}, x2={})", i / x2n, i % x2n),
                detail: format!("negative or non-finite probability {p}"),
            });
        }
        sum = sum + p;
    }
    if (sum - S::one()).abs() > tol {
        out.push(Violation {
            subject: "source".into(),
            detail: format!("probabilities sum to {sum}, not 1"),
        });
    }

    let given: Vec<&str> = channel.given().iter().map(|v| v.name.as_str()).collect();
    if given != ["a", "x1", "x2"] {
        out.push(Violation {
            subject: "channel".into(),
            detail: format!("conditioning variables must be exactly (a, x1, x2), got {given:?}"),
        });
        return out;
    }
    if channel.target().len() != 1 || channel.target()[0].name != "y" {
        out.push(Violation {
            subject: "channel".into(),
            detail: "target must be the single variable y".into(),
        });
        return out;
    }
    let an = channel.given()[0].cardinality;
    if channel.given()[1].cardinality != x1n || channel.given()[2].cardinality != x2n {
        out.push(Violation {
            subject: "channel".into(),
            detail: "source alphabets disagree with the source pmf".into(),
        });
    }
    let yn = channel.target()[0].cardinality;
    for a in 0..an {
        for x1 in 0..x1n.min(channel.given()[1].cardinality) {
            for x2 in 0..x2n.min(channel.given()[2].cardinality) {
                let cell = (a * channel.given()[1].cardinality + x1)
                    * channel.given()[2].cardinality
                    + x2;
                let row = &channel.mass()[cell * yn..(cell + 1) * yn];
                let mut s = S::zero();
                let mut bad_entry = false;
                for &p in row {
                    if p < S::zero() || !p.is_finite() {
                        bad_entry = true;
                    }
                    s = s + p;
                }
                let subject = format!("channel cell (a={a}, x1={x1}, x2={x2})");
                if bad_entry {
                    out.push(Violation {
                        subject: subject.clone(),
                        detail: "negative or non-finite probability".into(),
                    });
                }
                if (s - S::one()).abs() > tol {
                    out.push(Violation {
                        subject,
                        detail: format!("probabilities sum to {s}, not 1"),
                    });
                }
            }
        }
    }

    if cost.len() != an {
        out.push(Violation {
            subject: "cost".into(),
            detail: format!("{} entries for {an} actions", cost.len()),
        });
    }
    for (a, &c) in cost.iter().enumerate() {
        if c < S::zero() || !c.is_finite() {
            out.push(Violation {
                subject: format!("cost(a={a})"),
                detail: format!("must be finite and nonnegative, got {c}"),
            });
        }
    }

    for (name, table) in [("distortion1", d1), ("distortion2", d2)] {
        let dims = table.dims();
        if dims[0] != x1n || dims[1] != x2n || dims[2] != yn {
            out.push(Violation {
                subject: name.into(),
                detail: format!(
                    "dimensions ({}, {}, {}) disagree with alphabets ({x1n}, {x2n}, {yn})",
                    dims[0], dims[1], dims[2]
                ),
            });
            continue;
        }
        for (i, &v) in table.values().iter().enumerate() {
            if v < S::zero() || !v.is_finite() {
                let d4 = dims[3];
                let d3 = dims[2] * d4;
                let d2d = dims[1] * d3;
                out.push(Violation {
                    subject: format!(
                        "{name} cell (x1={}, x2={}, y={}, xhat={})",
                        i / d2d,
                        (i % d2d) / d3,
                        (i % d3) / d4,
                        i % d4
                    ),
                    detail: format!("must be finite and nonnegative, got {v}"),
                });
            }
        }
    }

    for (name, b) in [
        ("budget gamma", budgets.gamma),
        ("budget d1", budgets.d1),
        ("budget d2", budgets.d2),
    ] {
        if b < S::zero() || !b.is_finite() {
            out.push(Violation {
                subject: name.into(),
                detail: format!("must be finite and nonnegative, got {b}"),
            });
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::vars;

    fn dsbs_source(p: f64) -> JointPmf<f64> {
        JointPmf::new(
            vars(&[("x1", 2), ("x2", 2)]),
            vec![(1.0 - p) / 2.0, p / 2.0, p / 2.0, (1.0 - p) / 2.0],
        )
        .unwrap()
    }

    fn switched_channel() -> ConditionalPmf<f64> {
        let mut mass = Vec::new();
        for a in 0..2usize {
            for x1 in 0..2usize {
                for x2 in 0..2usize {
                    let y = if a == 0 { 1 } else { (x1 + x2) % 2 };
                    mass.push(if y == 0 { 1.0 } else { 0.0 });
                    mass.push(if y == 1 { 1.0 } else { 0.0 });
                }
            }
        }
        ConditionalPmf::new(vars(&[("a", 2), ("x1", 2), ("x2", 2)]), vars(&[("y", 2)]), mass)
            .unwrap()
    }

    fn well_formed() -> DistributedProblem<f64> {
        DistributedProblem {
            source: dsbs_source(0.1),
            channel: switched_channel(),
            cost: vec![0.0, 1.0],
            d1: DistortionTable::hamming(SourceVar::X1, [2, 2, 2, 2]).unwrap(),
            d2: DistortionTable::hamming(SourceVar::X2, [2, 2, 2, 2]).unwrap(),
            budgets: Budgets { gamma: 1.0, d1: 0.0, d2: 0.0 },
        }
    }

    #[test]
    fn well_formed_problem_validates() {
        let p = well_formed();
        assert!(p.validate().is_empty());
        // validate is pure: a second call agrees.
        assert_eq!(p.validate(), p.validate());
    }

    #[test]
    fn broken_channel_cell_is_named() {
        let mut p = well_formed();
        let mut mass = p.channel.mass().to_vec();
        // Cell (a=1, x1=0, x2=1) now sums to 0.98.
        let cell = (1 * 2 + 0) * 2 + 1;
        mass[cell * 2] = 0.49;
        mass[cell * 2 + 1] = 0.49;
        p.channel = ConditionalPmf::from_parts_unchecked(
            vars(&[("a", 2), ("x1", 2), ("x2", 2)]),
            vars(&[("y", 2)]),
            mass,
        );
        let v = p.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].subject, "channel cell (a=1, x1=0, x2=1)");
        assert!(v[0].detail.contains("0.98"));
    }

    #[test]
    fn negative_distortion_is_a_range_violation() {
        let mut p = well_formed();
        let mut values = p.d2.values().to_vec();
        values[3] = -0.5;
        p.d2 = DistortionTable::new([2, 2, 2, 2], values).unwrap();
        let v = p.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].subject.starts_with("distortion2 cell"));
        assert!(v[0].detail.contains("-0.5"));
    }

    #[test]
    fn degraded_detection() {
        // X2 identical to X1.
        let mut p = well_formed();
        p.source = JointPmf::new(
            vars(&[("x1", 2), ("x2", 2)]),
            vec![0.5, 0.0, 0.0, 0.5],
        )
        .unwrap();
        assert!(p.check_degraded());

        // A DSBS is not degraded.
        assert!(!well_formed().check_degraded());

        // Zero-probability x1 rows are ignored.
        p.source = JointPmf::new(
            vars(&[("x1", 2), ("x2", 2)]),
            vec![0.6, 0.0, 0.0, 0.4],
        )
        .unwrap();
        assert!(p.check_degraded());
    }

    #[test]
    fn degraded_pair_alphabet_construction() {
        // X1 ranges over pairs (x1', x2) with X2 its second coordinate.
        let x1p = [0.3, 0.7];
        let x2p = [0.6, 0.4];
        let mut mass = vec![0.0; 4 * 2];
        for (i, pi) in x1p.iter().enumerate() {
            for (j, pj) in x2p.iter().enumerate() {
                let x1 = i * 2 + j;
                mass[x1 * 2 + j] = pi * pj;
            }
        }
        let source = JointPmf::new(vars(&[("x1", 4), ("x2", 2)]), mass).unwrap();
        let n_cells = 2 * 4 * 2;
        let channel = ConditionalPmf::new(
            vars(&[("a", 2), ("x1", 4), ("x2", 2)]),
            vars(&[("y", 2)]),
            vec![0.5; n_cells * 2],
        )
        .unwrap();
        let p = DistributedProblem {
            source,
            channel,
            cost: vec![0.0, 1.0],
            d1: DistortionTable::hamming(SourceVar::X1, [4, 2, 2, 4]).unwrap(),
            d2: DistortionTable::hamming(SourceVar::X2, [4, 2, 2, 2]).unwrap(),
            budgets: Budgets { gamma: 1.0, d1: 0.0, d2: 0.0 },
        };
        assert!(p.validate().is_empty());
        assert!(p.check_degraded());

        // Relabeling x1 symbols does not change the verdict.
        let perm = [2usize, 0, 3, 1];
        let mut relabeled = vec![0.0; 8];
        for x1 in 0..4 {
            for x2 in 0..2 {
                relabeled[perm[x1] * 2 + x2] = p.source.mass()[x1 * 2 + x2];
            }
        }
        let mut q = p.clone();
        q.source = JointPmf::new(vars(&[("x1", 4), ("x2", 2)]), relabeled).unwrap();
        assert!(q.check_degraded());
    }

    #[test]
    fn hamming_builder() {
        let t = DistortionTable::<f64>::hamming(SourceVar::X2, [2, 2, 2, 2]).unwrap();
        assert_eq!(t.get(0, 0, 0, 0), 0.0);
        assert_eq!(t.get(0, 0, 1, 1), 1.0);
        assert_eq!(t.get(1, 1, 0, 1), 0.0);

        let t3 = DistortionTable::<f64>::hamming(SourceVar::X1, [3, 2, 2, 3]).unwrap();
        for x in 0..3 {
            assert_eq!(t3.get(x, 0, 0, x), 0.0);
        }
        assert!(t3.is_hamming(SourceVar::X1));
        assert!(!t3.is_hamming(SourceVar::X2));

        let e = DistortionTable::<f64>::hamming(SourceVar::X1, [3, 2, 2, 2]).unwrap_err();
        assert!(matches!(e, Error::InvalidPmf(_)));
    }
}
