//! Exact information measures over labeled finite alphabets.
//!
//! A [`JointPmf`] is a dense probability tensor over named variables, stored
//! row-major with the first variable slowest. Conditional factors and
//! deterministic maps combine into joints through [`compose`], which is the
//! chain rule with Kronecker-delta factors standing in for the maps. All
//! measures are in bits (base-2 logarithms) with the `0 log 0 = 0`
//! convention.
//!
//! Everything here is immutable after construction and every operation is
//! pure, so values can be shared freely across worker threads.

use crate::scalar::Scalar;
use crate::Error;

/// A named finite-alphabet variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpec {
    pub name: String,
    pub cardinality: usize,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, cardinality: usize) -> Self {
        Self {
            name: name.into(),
            cardinality,
        }
    }
}

/// Shorthand for a list of variables.
pub fn vars(specs: &[(&str, usize)]) -> Vec<VariableSpec> {
    specs
        .iter()
        .map(|&(n, c)| VariableSpec::new(n, c))
        .collect()
}

fn check_var_list(list: &[VariableSpec]) -> Result<(), Error> {
    for (i, v) in list.iter().enumerate() {
        if v.name.is_empty() {
            return Err(Error::InvalidPmf("empty variable name".into()));
        }
        if v.cardinality < 1 {
            return Err(Error::InvalidPmf(format!(
                "variable '{}' has cardinality 0",
                v.name
            )));
        }
        if list[..i].iter().any(|w| w.name == v.name) {
            return Err(Error::InvalidPmf(format!(
                "variable '{}' appears twice",
                v.name
            )));
        }
    }
    Ok(())
}

fn product_len(list: &[VariableSpec]) -> usize {
    list.iter().map(|v| v.cardinality).product()
}

/// Flat-index table sending each cell of the full tensor with axis sizes
/// `cards` to the corresponding cell of the marginal over `axes` (taken in
/// the order given). Runs an odometer so the cost is O(cells).
pub(crate) fn projection_table(cards: &[usize], axes: &[usize]) -> Vec<u32> {
    let mut axis_factor = vec![0usize; cards.len()];
    let mut stride = 1usize;
    for &ax in axes.iter().rev() {
        axis_factor[ax] = stride;
        stride *= cards[ax];
    }
    let len: usize = cards.iter().product();
    let mut table = Vec::with_capacity(len);
    let mut digits = vec![0usize; cards.len()];
    let mut cur = 0usize;
    for _ in 0..len {
        table.push(cur as u32);
        for ax in (0..cards.len()).rev() {
            digits[ax] += 1;
            cur += axis_factor[ax];
            if digits[ax] == cards[ax] {
                digits[ax] = 0;
                cur -= cards[ax] * axis_factor[ax];
            } else {
                break;
            }
        }
    }
    table
}

/// Entropy in bits of an unnormalized nonnegative buffer, `0 log 0 = 0`.
pub(crate) fn entropy_of_buffer<S: Scalar>(buf: &[S]) -> S {
    let mut h = S::zero();
    for &p in buf {
        if p > S::zero() {
            h = h - p * p.log2();
        }
    }
    h
}

/// Dense joint pmf over an ordered list of named variables.
///
/// Mass is stored row-major: the first variable is the slowest index, the
/// last the fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<S> {
    variables: Vec<VariableSpec>,
    mass: Vec<S>,
}

impl<S: Scalar> JointPmf<S> {
    /// Builds a joint pmf, checking nonnegativity and normalization
    /// (sum within `Scalar::normalization_tol` of one).
    pub fn new(variables: Vec<VariableSpec>, mass: Vec<S>) -> Result<Self, Error> {
        check_var_list(&variables)?;
        if variables.is_empty() {
            return Err(Error::InvalidPmf("joint pmf needs at least one variable".into()));
        }
        let want = product_len(&variables);
        if mass.len() != want {
            return Err(Error::InvalidPmf(format!(
                "mass has {} entries, alphabet product is {}",
                mass.len(),
                want
            )));
        }
        let mut sum = S::zero();
        for &p in &mass {
            if p < S::zero() || !p.is_finite() {
                return Err(Error::InvalidPmf(format!("negative or non-finite entry {p}")));
            }
            sum = sum + p;
        }
        if (sum - S::one()).abs() > S::normalization_tol() {
            return Err(Error::InvalidPmf(format!("entries sum to {sum}, not 1")));
        }
        Ok(Self { variables, mass })
    }

    /// Builds without validating. For staging possibly-invalid data that a
    /// later `validate` pass is expected to inspect.
    pub fn from_parts_unchecked(variables: Vec<VariableSpec>, mass: Vec<S>) -> Self {
        Self { variables, mass }
    }

    /// Uniform distribution over the given variables.
    pub fn uniform(variables: Vec<VariableSpec>) -> Result<Self, Error> {
        check_var_list(&variables)?;
        let len = product_len(&variables);
        if len == 0 {
            return Err(Error::InvalidPmf("empty alphabet".into()));
        }
        let p = S::one() / S::from_usize(len).unwrap();
        Ok(Self {
            variables,
            mass: vec![p; len],
        })
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn mass(&self) -> &[S] {
        &self.mass
    }

    pub(crate) fn cards(&self) -> Vec<usize> {
        self.variables.iter().map(|v| v.cardinality).collect()
    }

    pub fn axis_of(&self, name: &str) -> Result<usize, Error> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::InvalidQuery(format!("unknown variable '{name}'")))
    }

    /// Probability of one cell, indexed in variable order.
    pub fn get(&self, index: &[usize]) -> S {
        assert_eq!(index.len(), self.variables.len());
        let mut flat = 0usize;
        for (d, v) in index.iter().zip(&self.variables) {
            assert!(*d < v.cardinality);
            flat = flat * v.cardinality + d;
        }
        self.mass[flat]
    }

    /// Rescales the mass to sum to one. Never done implicitly by any
    /// operation.
    pub fn normalized(mut self) -> Result<Self, Error> {
        let sum = self.mass.iter().fold(S::zero(), |a, &b| a + b);
        if sum <= S::zero() {
            return Err(Error::InvalidPmf("cannot normalize zero mass".into()));
        }
        for p in &mut self.mass {
            *p = *p / sum;
        }
        Ok(self)
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> S {
        entropy_of_buffer(&self.mass)
    }

    fn resolve_set(&self, names: &[&str]) -> Result<Vec<usize>, Error> {
        let mut axes = Vec::with_capacity(names.len());
        for n in names {
            let ax = self.axis_of(n)?;
            if !axes.contains(&ax) {
                axes.push(ax);
            }
        }
        axes.sort_unstable();
        Ok(axes)
    }

    /// Marginal over `keep`, in the variables' original order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointPmf<S>, Error> {
        if keep.is_empty() {
            return Err(Error::InvalidQuery("empty keep set".into()));
        }
        let axes = self.resolve_set(keep)?;
        let cards = self.cards();
        let table = projection_table(&cards, &axes);
        let out_len: usize = axes.iter().map(|&a| cards[a]).product();
        let mut mass = vec![S::zero(); out_len];
        for (cell, &bucket) in self.mass.iter().zip(&table) {
            mass[bucket as usize] = mass[bucket as usize] + *cell;
        }
        Ok(JointPmf {
            variables: axes.iter().map(|&a| self.variables[a].clone()).collect(),
            mass,
        })
    }

    /// Entropy of the marginal over `names` without materializing it.
    pub fn entropy_of(&self, names: &[&str]) -> Result<S, Error> {
        if names.is_empty() {
            return Ok(S::zero());
        }
        let axes = self.resolve_set(names)?;
        let cards = self.cards();
        let table = projection_table(&cards, &axes);
        let out_len: usize = axes.iter().map(|&a| cards[a]).product();
        let mut buf = vec![S::zero(); out_len];
        for (cell, &bucket) in self.mass.iter().zip(&table) {
            buf[bucket as usize] = buf[bucket as usize] + *cell;
        }
        Ok(entropy_of_buffer(&buf))
    }

    /// H(targets | givens) = H(targets ∪ givens) − H(givens).
    pub fn conditional_entropy(&self, targets: &[&str], givens: &[&str]) -> Result<S, Error> {
        if targets.is_empty() {
            return Err(Error::InvalidQuery("empty target set".into()));
        }
        check_disjoint(&[targets, givens])?;
        let joint: Vec<&str> = targets.iter().chain(givens.iter()).copied().collect();
        Ok(self.entropy_of(&joint)? - self.entropy_of(givens)?)
    }

    /// I(a ; b | given), symmetric in `a` and `b`, nonnegative up to
    /// floating-point slack.
    pub fn mutual_information(&self, a: &[&str], b: &[&str], given: &[&str]) -> Result<S, Error> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidQuery("empty argument set".into()));
        }
        check_disjoint(&[a, b, given])?;
        let ag: Vec<&str> = a.iter().chain(given.iter()).copied().collect();
        let bg: Vec<&str> = b.iter().chain(given.iter()).copied().collect();
        let abg: Vec<&str> = a.iter().chain(b.iter()).chain(given.iter()).copied().collect();
        Ok(self.entropy_of(&ag)? + self.entropy_of(&bg)?
            - self.entropy_of(&abg)?
            - self.entropy_of(given)?)
    }
}

fn check_disjoint(sets: &[&[&str]]) -> Result<(), Error> {
    for (i, s) in sets.iter().enumerate() {
        for t in &sets[..i] {
            for n in *s {
                if t.contains(n) {
                    return Err(Error::InvalidQuery(format!(
                        "variable '{n}' appears in two argument sets"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Conditional pmf p(target | given), stored given-major then target.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalPmf<S> {
    given: Vec<VariableSpec>,
    target: Vec<VariableSpec>,
    mass: Vec<S>,
}

impl<S: Scalar> ConditionalPmf<S> {
    /// Builds a conditional pmf; every conditioning cell must be a valid pmf.
    pub fn new(
        given: Vec<VariableSpec>,
        target: Vec<VariableSpec>,
        mass: Vec<S>,
    ) -> Result<Self, Error> {
        if target.is_empty() {
            return Err(Error::InvalidPmf("conditional pmf needs a target".into()));
        }
        let all: Vec<VariableSpec> = given.iter().chain(target.iter()).cloned().collect();
        check_var_list(&all)?;
        let g_len = product_len(&given);
        let t_len = product_len(&target);
        if mass.len() != g_len * t_len {
            return Err(Error::InvalidPmf(format!(
                "mass has {} entries, expected {}",
                mass.len(),
                g_len * t_len
            )));
        }
        for g in 0..g_len {
            let row = &mass[g * t_len..(g + 1) * t_len];
            let mut sum = S::zero();
            for &p in row {
                if p < S::zero() || !p.is_finite() {
                    return Err(Error::InvalidPmf(format!(
                        "negative or non-finite entry {p} in conditioning cell {g}"
                    )));
                }
                sum = sum + p;
            }
            if (sum - S::one()).abs() > S::normalization_tol() {
                return Err(Error::InvalidPmf(format!(
                    "conditioning cell {g} sums to {sum}, not 1"
                )));
            }
        }
        Ok(Self { given, target, mass })
    }

    /// Builds without validating; see [`JointPmf::from_parts_unchecked`].
    pub fn from_parts_unchecked(
        given: Vec<VariableSpec>,
        target: Vec<VariableSpec>,
        mass: Vec<S>,
    ) -> Self {
        Self { given, target, mass }
    }

    pub fn given(&self) -> &[VariableSpec] {
        &self.given
    }

    pub fn target(&self) -> &[VariableSpec] {
        &self.target
    }

    pub fn mass(&self) -> &[S] {
        &self.mass
    }

    pub(crate) fn target_len(&self) -> usize {
        product_len(&self.target)
    }
}

/// Total deterministic function from a variable product to one codomain
/// variable. Contributes a Kronecker-delta factor in compositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicMap {
    domain: Vec<VariableSpec>,
    codomain: VariableSpec,
    table: Vec<usize>,
}

impl DeterministicMap {
    pub fn new(
        domain: Vec<VariableSpec>,
        codomain: VariableSpec,
        table: Vec<usize>,
    ) -> Result<Self, Error> {
        let mut all = domain.clone();
        all.push(codomain.clone());
        check_var_list(&all)?;
        let d_len = product_len(&domain);
        if table.len() != d_len {
            return Err(Error::InvalidPmf(format!(
                "map table has {} entries, domain product is {d_len}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v >= codomain.cardinality) {
            return Err(Error::InvalidPmf(format!(
                "map value {bad} outside codomain '{}' of size {}",
                codomain.name, codomain.cardinality
            )));
        }
        Ok(Self { domain, codomain, table })
    }

    /// Constant map onto `value`.
    pub fn constant(
        domain: Vec<VariableSpec>,
        codomain: VariableSpec,
        value: usize,
    ) -> Result<Self, Error> {
        let len = product_len(&domain);
        Self::new(domain, codomain, vec![value; len])
    }

    pub fn domain(&self) -> &[VariableSpec] {
        &self.domain
    }

    pub fn codomain(&self) -> &VariableSpec {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, domain_flat: usize) -> usize {
        self.table[domain_flat]
    }

    /// The delta factor as a dense conditional mass, domain-major.
    pub(crate) fn dense_mass<S: Scalar>(&self) -> Vec<S> {
        let k = self.codomain.cardinality;
        let mut mass = vec![S::zero(); self.table.len() * k];
        for (d, &v) in self.table.iter().enumerate() {
            mass[d * k + v] = S::one();
        }
        mass
    }
}

/// One factor of a chain-rule composition.
#[derive(Debug, Clone)]
pub enum Factor<'a, S> {
    Joint(&'a JointPmf<S>),
    Conditional(&'a ConditionalPmf<S>),
    Map(&'a DeterministicMap),
}

impl<'a, S: Scalar> Factor<'a, S> {
    fn given_vars(&self) -> &[VariableSpec] {
        match self {
            Factor::Joint(_) => &[],
            Factor::Conditional(c) => &c.given,
            Factor::Map(m) => &m.domain,
        }
    }

    fn target_vars(&self) -> &[VariableSpec] {
        match self {
            Factor::Joint(j) => &j.variables,
            Factor::Conditional(c) => &c.target,
            Factor::Map(m) => std::slice::from_ref(&m.codomain),
        }
    }
}

/// Chain-rule product of the factors, in production order.
///
/// Every factor's conditioning variables must be produced by an earlier
/// factor, and no variable may be produced twice. Deterministic maps enter
/// as delta factors.
pub fn compose<S: Scalar>(factors: &[Factor<'_, S>]) -> Result<JointPmf<S>, Error> {
    if factors.is_empty() {
        return Err(Error::Composition("no factors".into()));
    }
    let mut variables: Vec<VariableSpec> = Vec::new();
    for f in factors {
        for g in f.given_vars() {
            match variables.iter().find(|v| v.name == g.name) {
                None => {
                    return Err(Error::Composition(format!(
                        "factor conditions on '{}', which no earlier factor produces",
                        g.name
                    )))
                }
                Some(v) if v.cardinality != g.cardinality => {
                    return Err(Error::Composition(format!(
                        "alphabet mismatch on '{}': {} vs {}",
                        g.name, v.cardinality, g.cardinality
                    )))
                }
                _ => {}
            }
        }
        for t in f.target_vars() {
            if variables.iter().any(|v| v.name == t.name) {
                return Err(Error::Composition(format!(
                    "variable '{}' produced twice",
                    t.name
                )));
            }
            variables.push(t.clone());
        }
    }

    let cards: Vec<usize> = variables.iter().map(|v| v.cardinality).collect();
    let len: usize = cards.iter().product();
    let mut mass = vec![S::one(); len];
    let mut map_storage: Vec<Vec<S>> = Vec::new();
    // Resolve each factor to (its dense mass, projection of the full tensor
    // onto its own index layout), then multiply in.
    for f in factors {
        let axes: Vec<usize> = f
            .given_vars()
            .iter()
            .chain(f.target_vars().iter())
            .map(|v| variables.iter().position(|w| w.name == v.name).unwrap())
            .collect();
        let table = projection_table(&cards, &axes);
        let fmass: &[S] = match f {
            Factor::Joint(j) => &j.mass,
            Factor::Conditional(c) => &c.mass,
            Factor::Map(m) => {
                map_storage.push(m.dense_mass());
                map_storage.last().unwrap()
            }
        };
        for (cell, &idx) in mass.iter_mut().zip(&table) {
            *cell = *cell * fmass[idx as usize];
        }
    }
    Ok(JointPmf { variables, mass })
}
