//! Concrete payment spaces: extended-real intervals, finite lattice tables,
//! principal-ideal subspaces, and finite products, with the order operations
//! and optional metrics used by the solvers.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::value::{Backend, ExtReal};

/// An element of a payment space.
#[derive(Debug, Clone, PartialEq)]
pub enum LatticeValue {
    ExtReal(ExtReal),
    FiniteElem(usize),
    Tuple(Vec<LatticeValue>),
}

impl LatticeValue {
    pub fn as_ext_real(&self) -> Option<&ExtReal> {
        match self {
            LatticeValue::ExtReal(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_finite(&self) -> Option<usize> {
        match self {
            LatticeValue::FiniteElem(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for LatticeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeValue::ExtReal(v) => write!(f, "{v}"),
            LatticeValue::FiniteElem(i) => write!(f, "#{i}"),
            LatticeValue::Tuple(vs) => {
                write!(f, "(")?;
                for (k, v) in vs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("value does not belong to the space: {0}")]
    NotInSpace(String),
    #[error("leq matrix is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("leq matrix is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("leq matrix is not transitive at ({0}, {1}, {2})")]
    NotTransitive(usize, usize, usize),
    #[error("elements {0} and {1} have no {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("finite table has no {0} element")]
    NoExtremum(&'static str),
    #[error("interval lower endpoint exceeds upper endpoint")]
    EmptyInterval,
    #[error("operation `{0}` requires a complete-lattice table")]
    NotComplete(&'static str),
    #[error("cannot enumerate an interval space")]
    EnumerateInterval,
    #[error("no distance registered for this space kind")]
    NoMetric,
    #[error("leq matrix dimension mismatch")]
    BadMatrix,
}

/// A finite poset given by an explicit `leq` matrix, validated at
/// construction. Complete-lattice structure (joins, meets, bottom, top) is
/// checked by exhaustion; tables that are mere posets are admitted only
/// through [`FiniteLattice::poset`] and support evaluation but not the
/// order-theoretic solver operations.
#[derive(Debug, Clone)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Option<Vec<Vec<usize>>>,
    meet: Option<Vec<Vec<usize>>>,
    bottom: Option<usize>,
    top: Option<usize>,
}

impl FiniteLattice {
    /// Builds a validated complete lattice from an explicit leq matrix.
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let mut table = Self::poset(names, leq)?;
        table.check_completeness()?;
        Ok(table)
    }

    /// Builds a validated poset without requiring lattice structure; used for
    /// discrete-order payment spaces consumed only by the acyclic solver.
    pub fn poset(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(LatticeError::BadMatrix);
        }
        for (i, row) in leq.iter().enumerate() {
            if !row[i] {
                return Err(LatticeError::NotReflexive(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(LatticeError::NotAntisymmetric(i, j));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(LatticeError::NotTransitive(i, j, k));
                    }
                }
            }
        }
        Ok(FiniteLattice {
            names,
            leq,
            join: None,
            meet: None,
            bottom: None,
            top: None,
        })
    }

    /// Builds a complete lattice from element names and covering pairs; leq
    /// is the reflexive-transitive closure of the cover relation.
    pub fn from_covers(
        names: Vec<String>,
        covers: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(lo, hi) in covers {
            if lo >= n || hi >= n {
                return Err(LatticeError::BadMatrix);
            }
            leq[lo][hi] = true;
        }
        // Warshall closure. Row k is stable within round k (the only writes to
        // it, at i == k, are no-ops), so a snapshot is sound.
        for k in 0..n {
            let row_k = leq[k].clone();
            for row in leq.iter_mut() {
                if row[k] {
                    for (j, &below) in row_k.iter().enumerate() {
                        if below {
                            row[j] = true;
                        }
                    }
                }
            }
        }
        Self::new(names, leq)
    }

    /// The n-element chain 0 < 1 < ... < n-1.
    pub fn chain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        Self::new(names, leq).expect("chain is a complete lattice")
    }

    /// The n-element discrete order (no lattice structure unless n = 1).
    pub fn discrete(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        Self::poset(names, leq).expect("discrete order is a poset")
    }

    fn check_completeness(&mut self) -> Result<(), LatticeError> {
        let n = self.names.len();
        if n == 0 {
            return Err(LatticeError::NoExtremum("any"));
        }
        let mut join = vec![vec![0usize; n]; n];
        let mut meet = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = self
                    .least_of(|x| self.leq[a][x] && self.leq[b][x])
                    .ok_or(LatticeError::NotALattice(a, b, "join"))?;
                meet[a][b] = self
                    .greatest_of(|x| self.leq[x][a] && self.leq[x][b])
                    .ok_or(LatticeError::NotALattice(a, b, "meet"))?;
            }
        }
        self.bottom = Some(
            self.least_of(|_| true)
                .ok_or(LatticeError::NoExtremum("bottom"))?,
        );
        self.top = Some(
            self.greatest_of(|_| true)
                .ok_or(LatticeError::NoExtremum("top"))?,
        );
        self.join = Some(join);
        self.meet = Some(meet);
        Ok(())
    }

    fn least_of(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let candidates: Vec<usize> = (0..self.names.len()).filter(|&x| pred(x)).collect();
        candidates
            .iter()
            .copied()
            .find(|&m| candidates.iter().all(|&c| self.leq[m][c]))
    }

    fn greatest_of(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let candidates: Vec<usize> = (0..self.names.len()).filter(|&x| pred(x)).collect();
        candidates
            .iter()
            .copied()
            .find(|&m| candidates.iter().all(|&c| self.leq[c][m]))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_complete_lattice(&self) -> bool {
        self.join.is_some()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Covering pairs of the order, for serialization.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.names.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq[a][b] {
                    let strict_between = (0..n)
                        .any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b]);
                    if !strict_between {
                        out.push((a, b));
                    }
                }
            }
        }
        out
    }
}

/// A payment space: the concrete stand-in for an ordered set of global
/// elements.
#[derive(Debug, Clone)]
pub enum PaymentSpace {
    /// `[lower, upper]` in the extended nonnegative reals; `upper` may be
    /// infinity.
    Interval { lower: ExtReal, upper: ExtReal },
    FiniteTable(Arc<FiniteLattice>),
    Product(Vec<PaymentSpace>),
    /// The principal ideal of `bound` inside `parent`; elements keep their
    /// parent representation.
    Ideal {
        parent: Box<PaymentSpace>,
        bound: Box<LatticeValue>,
    },
}

/// A principal ideal `↓bound` viewed with its parent space.
#[derive(Debug, Clone)]
pub struct PrincipalIdeal {
    pub parent: PaymentSpace,
    pub bound: LatticeValue,
}

impl PrincipalIdeal {
    pub fn contains(&self, x: &LatticeValue) -> Result<bool, LatticeError> {
        Ok(self.parent.contains(x)? && self.parent.leq(x, &self.bound)?)
    }

    /// The ideal as a payment space in its own right.
    pub fn as_space(&self) -> PaymentSpace {
        principal_ideal_space(&self.parent, &self.bound)
    }
}

fn principal_ideal_space(parent: &PaymentSpace, bound: &LatticeValue) -> PaymentSpace {
    match (parent, bound) {
        (PaymentSpace::Interval { lower, .. }, LatticeValue::ExtReal(b)) => {
            PaymentSpace::Interval {
                lower: lower.clone(),
                upper: b.clone(),
            }
        }
        _ => PaymentSpace::Ideal {
            parent: Box::new(parent.clone()),
            bound: Box::new(bound.clone()),
        },
    }
}

impl PaymentSpace {
    pub fn interval(lower: ExtReal, upper: ExtReal) -> Result<Self, LatticeError> {
        if !lower.leq(&upper) {
            return Err(LatticeError::EmptyInterval);
        }
        Ok(PaymentSpace::Interval { lower, upper })
    }

    pub fn unbounded(backend: Backend) -> Self {
        PaymentSpace::Interval {
            lower: ExtReal::zero(backend),
            upper: ExtReal::Infinity,
        }
    }

    pub fn finite(table: FiniteLattice) -> Self {
        PaymentSpace::FiniteTable(Arc::new(table))
    }

    /// Finite product with componentwise order; the empty product is the
    /// one-element space.
    pub fn product(factors: Vec<PaymentSpace>) -> Self {
        PaymentSpace::Product(factors)
    }

    pub fn contains(&self, x: &LatticeValue) -> Result<bool, LatticeError> {
        match (self, x) {
            (PaymentSpace::Interval { lower, upper }, LatticeValue::ExtReal(v)) => {
                Ok(lower.leq(v) && v.leq(upper))
            }
            (PaymentSpace::FiniteTable(t), LatticeValue::FiniteElem(i)) => Ok(*i < t.len()),
            (PaymentSpace::Product(fs), LatticeValue::Tuple(vs)) => {
                if fs.len() != vs.len() {
                    return Ok(false);
                }
                for (f, v) in fs.iter().zip(vs) {
                    if !f.contains(v)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (PaymentSpace::Ideal { parent, bound }, v) => {
                Ok(parent.contains(v)? && parent.leq(v, bound)?)
            }
            _ => Ok(false),
        }
    }

    fn expect_member(&self, x: &LatticeValue) -> Result<(), LatticeError> {
        if self.contains(x)? {
            Ok(())
        } else {
            Err(LatticeError::NotInSpace(x.to_string()))
        }
    }

    /// Partial-order verdict; for products, true iff true in every component.
    pub fn leq(&self, a: &LatticeValue, b: &LatticeValue) -> Result<bool, LatticeError> {
        match (self, a, b) {
            (PaymentSpace::Interval { .. }, LatticeValue::ExtReal(x), LatticeValue::ExtReal(y)) => {
                Ok(x.leq(y))
            }
            (
                PaymentSpace::FiniteTable(t),
                LatticeValue::FiniteElem(i),
                LatticeValue::FiniteElem(j),
            ) => {
                if *i >= t.len() || *j >= t.len() {
                    return Err(LatticeError::NotInSpace(format!("#{i} or #{j}")));
                }
                Ok(t.leq(*i, *j))
            }
            (PaymentSpace::Product(fs), LatticeValue::Tuple(xs), LatticeValue::Tuple(ys)) => {
                if fs.len() != xs.len() || fs.len() != ys.len() {
                    return Err(LatticeError::NotInSpace("tuple arity".into()));
                }
                for ((f, x), y) in fs.iter().zip(xs).zip(ys) {
                    if !f.leq(x, y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (PaymentSpace::Ideal { parent, .. }, x, y) => parent.leq(x, y),
            _ => Err(LatticeError::NotInSpace(
                "value kind does not match space kind".into(),
            )),
        }
    }

    pub fn join(&self, a: &LatticeValue, b: &LatticeValue) -> Result<LatticeValue, LatticeError> {
        self.expect_member(a)?;
        self.expect_member(b)?;
        match (self, a, b) {
            (PaymentSpace::Interval { .. }, LatticeValue::ExtReal(x), LatticeValue::ExtReal(y)) => {
                Ok(LatticeValue::ExtReal(x.max(y)))
            }
            (
                PaymentSpace::FiniteTable(t),
                LatticeValue::FiniteElem(i),
                LatticeValue::FiniteElem(j),
            ) => {
                let join = t.join.as_ref().ok_or(LatticeError::NotComplete("join"))?;
                Ok(LatticeValue::FiniteElem(join[*i][*j]))
            }
            (PaymentSpace::Product(fs), LatticeValue::Tuple(xs), LatticeValue::Tuple(ys)) => {
                let mut out = Vec::with_capacity(fs.len());
                for ((f, x), y) in fs.iter().zip(xs).zip(ys) {
                    out.push(f.join(x, y)?);
                }
                Ok(LatticeValue::Tuple(out))
            }
            // A principal ideal is join-closed: both arguments lie below the
            // bound, hence so does their parent join.
            (PaymentSpace::Ideal { parent, .. }, x, y) => parent.join(x, y),
            _ => unreachable!("membership checked above"),
        }
    }

    pub fn meet(&self, a: &LatticeValue, b: &LatticeValue) -> Result<LatticeValue, LatticeError> {
        self.expect_member(a)?;
        self.expect_member(b)?;
        match (self, a, b) {
            (PaymentSpace::Interval { .. }, LatticeValue::ExtReal(x), LatticeValue::ExtReal(y)) => {
                Ok(LatticeValue::ExtReal(x.min(y)))
            }
            (
                PaymentSpace::FiniteTable(t),
                LatticeValue::FiniteElem(i),
                LatticeValue::FiniteElem(j),
            ) => {
                let meet = t.meet.as_ref().ok_or(LatticeError::NotComplete("meet"))?;
                Ok(LatticeValue::FiniteElem(meet[*i][*j]))
            }
            (PaymentSpace::Product(fs), LatticeValue::Tuple(xs), LatticeValue::Tuple(ys)) => {
                let mut out = Vec::with_capacity(fs.len());
                for ((f, x), y) in fs.iter().zip(xs).zip(ys) {
                    out.push(f.meet(x, y)?);
                }
                Ok(LatticeValue::Tuple(out))
            }
            (PaymentSpace::Ideal { parent, .. }, x, y) => parent.meet(x, y),
            _ => unreachable!("membership checked above"),
        }
    }

    pub fn bottom(&self) -> Result<LatticeValue, LatticeError> {
        match self {
            PaymentSpace::Interval { lower, .. } => Ok(LatticeValue::ExtReal(lower.clone())),
            PaymentSpace::FiniteTable(t) => t
                .bottom
                .map(LatticeValue::FiniteElem)
                .ok_or(LatticeError::NotComplete("bottom")),
            PaymentSpace::Product(fs) => Ok(LatticeValue::Tuple(
                fs.iter().map(|f| f.bottom()).collect::<Result<_, _>>()?,
            )),
            PaymentSpace::Ideal { parent, .. } => parent.bottom(),
        }
    }

    pub fn top(&self) -> Result<LatticeValue, LatticeError> {
        match self {
            PaymentSpace::Interval { upper, .. } => Ok(LatticeValue::ExtReal(upper.clone())),
            PaymentSpace::FiniteTable(t) => t
                .top
                .map(LatticeValue::FiniteElem)
                .ok_or(LatticeError::NotComplete("top")),
            PaymentSpace::Product(fs) => Ok(LatticeValue::Tuple(
                fs.iter().map(|f| f.top()).collect::<Result<_, _>>()?,
            )),
            PaymentSpace::Ideal { bound, .. } => Ok((**bound).clone()),
        }
    }

    /// The ideal `↓bound` of this space.
    pub fn principal_ideal(&self, bound: &LatticeValue) -> Result<PrincipalIdeal, LatticeError> {
        self.expect_member(bound)?;
        Ok(PrincipalIdeal {
            parent: self.clone(),
            bound: bound.clone(),
        })
    }

    /// Every element exactly once in a deterministic order; errors on
    /// interval spaces.
    pub fn enumerate(&self) -> Result<Vec<LatticeValue>, LatticeError> {
        match self {
            PaymentSpace::Interval { .. } => Err(LatticeError::EnumerateInterval),
            PaymentSpace::FiniteTable(t) => {
                Ok((0..t.len()).map(LatticeValue::FiniteElem).collect())
            }
            PaymentSpace::Product(fs) => {
                let mut out = vec![LatticeValue::Tuple(Vec::new())];
                for f in fs {
                    let elems = f.enumerate()?;
                    let mut next = Vec::with_capacity(out.len() * elems.len());
                    for prefix in &out {
                        let LatticeValue::Tuple(prefix) = prefix else {
                            unreachable!()
                        };
                        for e in &elems {
                            let mut t = prefix.clone();
                            t.push(e.clone());
                            next.push(LatticeValue::Tuple(t));
                        }
                    }
                    out = next;
                }
                Ok(out)
            }
            PaymentSpace::Ideal { parent, bound } => {
                let mut out = Vec::new();
                for v in parent.enumerate()? {
                    if parent.leq(&v, bound)? {
                        out.push(v);
                    }
                }
                Ok(out)
            }
        }
    }

    /// True when the space kind compares with exact equality (no interval
    /// float coordinates).
    pub fn is_finite_kind(&self) -> bool {
        match self {
            PaymentSpace::Interval { .. } => false,
            PaymentSpace::FiniteTable(_) => true,
            PaymentSpace::Product(fs) => fs.iter().all(|f| f.is_finite_kind()),
            PaymentSpace::Ideal { parent, .. } => parent.is_finite_kind(),
        }
    }
}

/// Per-factor distance specification, aggregated as an ℓ¹ sum over factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricSpec {
    /// Absolute difference on extended reals, discrete 0/1 on finite
    /// elements.
    #[default]
    L1Abs,
    /// Discrete 0/1 on every factor.
    L1Discrete,
}

/// ℓ¹ distance between two members of a space; infinite when an extended-real
/// coordinate is infinite in exactly one argument.
pub fn distance(
    metric: MetricSpec,
    space: &PaymentSpace,
    a: &LatticeValue,
    b: &LatticeValue,
) -> Result<ExtReal, LatticeError> {
    space.expect_member(a)?;
    space.expect_member(b)?;
    distance_inner(metric, space, a, b)
}

fn distance_inner(
    metric: MetricSpec,
    space: &PaymentSpace,
    a: &LatticeValue,
    b: &LatticeValue,
) -> Result<ExtReal, LatticeError> {
    match (space, a, b) {
        (PaymentSpace::Interval { lower, .. }, LatticeValue::ExtReal(x), LatticeValue::ExtReal(y)) => {
            match metric {
                MetricSpec::L1Abs => Ok(x.abs_diff(y)),
                MetricSpec::L1Discrete => Ok(if x == y {
                    ExtReal::zero(lower.backend().unwrap_or_default())
                } else {
                    ExtReal::from_int(1, lower.backend().unwrap_or_default())
                }),
            }
        }
        (
            PaymentSpace::FiniteTable(_),
            LatticeValue::FiniteElem(i),
            LatticeValue::FiniteElem(j),
        ) => Ok(ExtReal::from_int(i64::from(i != j), Backend::Rational)),
        (PaymentSpace::Product(fs), LatticeValue::Tuple(xs), LatticeValue::Tuple(ys)) => {
            let mut acc: Option<ExtReal> = None;
            for ((f, x), y) in fs.iter().zip(xs).zip(ys) {
                let d = distance_inner(metric, f, x, y)?;
                acc = Some(match acc {
                    None => d,
                    Some(s) => s.add(&d),
                });
            }
            Ok(acc.unwrap_or(ExtReal::from_int(0, Backend::Rational)))
        }
        (PaymentSpace::Ideal { parent, .. }, x, y) => distance_inner(metric, parent, x, y),
        _ => Err(LatticeError::NoMetric),
    }
}

/// Value equality as used for stabilization detection: exact on rationals
/// and finite elements, tolerance-based on floats.
pub fn values_equal(a: &LatticeValue, b: &LatticeValue) -> bool {
    // PartialEq on ExtReal already folds in the float tolerance.
    a == b
}

impl FiniteLattice {
    #[cfg(test)]
    fn poset_only(&self) -> bool {
        !self.is_complete_lattice()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Backend;

    fn b() -> Backend {
        Backend::Rational
    }

    fn ext(n: i64) -> LatticeValue {
        LatticeValue::ExtReal(ExtReal::from_int(n, b()))
    }

    #[test]
    fn interval_order_and_bounds() {
        let s = PaymentSpace::unbounded(b());
        assert!(s.leq(&ext(3), &ext(5)).unwrap());
        assert!(s.leq(&ext(3), &ext(3)).unwrap());
        assert!(!s.leq(&ext(5), &ext(3)).unwrap());
        assert_eq!(s.bottom().unwrap(), ext(0));
        assert_eq!(s.top().unwrap(), LatticeValue::ExtReal(ExtReal::Infinity));
        assert_eq!(s.join(&ext(3), &ext(5)).unwrap(), ext(5));
        assert_eq!(s.meet(&ext(3), &ext(5)).unwrap(), ext(3));
    }

    #[test]
    fn bounded_interval_top() {
        let s = PaymentSpace::interval(ExtReal::zero(b()), ExtReal::from_int(7, b())).unwrap();
        assert_eq!(s.top().unwrap(), ext(7));
        assert!(!s.contains(&ext(8)).unwrap());
    }

    #[test]
    fn chain_order() {
        let s = PaymentSpace::finite(FiniteLattice::chain(2));
        let zero = LatticeValue::FiniteElem(0);
        let one = LatticeValue::FiniteElem(1);
        assert!(!s.leq(&one, &zero).unwrap());
        assert_eq!(s.join(&zero, &one).unwrap(), one);
        assert_eq!(s.bottom().unwrap(), zero);
    }

    #[test]
    fn join_identity_law() {
        let s = PaymentSpace::finite(FiniteLattice::chain(3));
        let bot = s.bottom().unwrap();
        for x in s.enumerate().unwrap() {
            assert_eq!(s.join(&bot, &x).unwrap(), x);
        }
    }

    #[test]
    fn product_is_componentwise() {
        let c2 = PaymentSpace::finite(FiniteLattice::chain(2));
        let s = PaymentSpace::product(vec![c2.clone(), c2]);
        let a = LatticeValue::Tuple(vec![LatticeValue::FiniteElem(0), LatticeValue::FiniteElem(1)]);
        let c = LatticeValue::Tuple(vec![LatticeValue::FiniteElem(1), LatticeValue::FiniteElem(0)]);
        let top = LatticeValue::Tuple(vec![LatticeValue::FiniteElem(1), LatticeValue::FiniteElem(1)]);
        assert!(!s.leq(&a, &c).unwrap());
        assert_eq!(s.join(&a, &c).unwrap(), top);
        assert_eq!(s.enumerate().unwrap().len(), 4);
    }

    #[test]
    fn empty_product_is_terminal() {
        let s = PaymentSpace::product(vec![]);
        let elems = s.enumerate().unwrap();
        assert_eq!(elems, vec![LatticeValue::Tuple(vec![])]);
        assert_eq!(s.bottom().unwrap(), s.top().unwrap());
    }

    #[test]
    fn principal_ideal_of_interval() {
        let s = PaymentSpace::unbounded(b());
        let ideal = s.principal_ideal(&ext(10)).unwrap();
        assert!(ideal.contains(&ext(10)).unwrap());
        assert!(!ideal.contains(&ext(11)).unwrap());
        match ideal.as_space() {
            PaymentSpace::Interval { upper, .. } => {
                assert_eq!(upper, ExtReal::from_int(10, b()))
            }
            other => panic!("expected interval, got {other:?}"),
        }
    }

    #[test]
    fn principal_ideal_membership_is_exactly_leq() {
        let table = FiniteLattice::from_covers(
            vec!["bot".into(), "a".into(), "b".into(), "top".into()],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        let s = PaymentSpace::finite(table);
        let bound = LatticeValue::FiniteElem(1);
        let ideal = s.principal_ideal(&bound).unwrap();
        for x in s.enumerate().unwrap() {
            assert_eq!(ideal.contains(&x).unwrap(), s.leq(&x, &bound).unwrap());
        }
        // Degenerate ideal on a 2-chain.
        let chain = PaymentSpace::finite(FiniteLattice::chain(2));
        let zero_ideal = chain
            .principal_ideal(&LatticeValue::FiniteElem(0))
            .unwrap()
            .as_space();
        assert_eq!(zero_ideal.enumerate().unwrap().len(), 1);
    }

    #[test]
    fn improper_ideal_is_whole_space() {
        let s = PaymentSpace::finite(FiniteLattice::chain(3));
        let top = s.top().unwrap();
        let ideal = s.principal_ideal(&top).unwrap().as_space();
        assert_eq!(ideal.enumerate().unwrap().len(), 3);
    }

    #[test]
    fn rejects_non_lattice_table() {
        // Two incomparable elements with no bound: not a lattice.
        let err = FiniteLattice::new(
            vec!["a".into(), "b".into()],
            vec![vec![true, false], vec![false, true]],
        );
        assert!(err.is_err());
        // But admitted as a poset.
        assert!(FiniteLattice::discrete(2).poset_only());
    }

    #[test]
    fn rejects_bad_order_axioms() {
        assert!(matches!(
            FiniteLattice::poset(
                vec!["a".into(), "b".into()],
                vec![vec![true, true], vec![true, true]],
            ),
            Err(LatticeError::NotAntisymmetric(_, _))
        ));
        assert!(matches!(
            FiniteLattice::poset(vec!["a".into()], vec![vec![false]]),
            Err(LatticeError::NotReflexive(_))
        ));
    }

    #[test]
    fn l1_distance() {
        let s = PaymentSpace::product(vec![
            PaymentSpace::unbounded(b()),
            PaymentSpace::unbounded(b()),
        ]);
        let x = LatticeValue::Tuple(vec![ext(1), ext(2)]);
        let y = LatticeValue::Tuple(vec![ext(4), ext(2)]);
        assert_eq!(
            distance(MetricSpec::L1Abs, &s, &x, &y).unwrap(),
            ExtReal::from_int(3, b())
        );
        assert!(distance(MetricSpec::L1Abs, &s, &x, &x).unwrap().is_zero());
    }

    #[test]
    fn discrete_metric_on_chain() {
        let s = PaymentSpace::finite(FiniteLattice::chain(2));
        let d = distance(
            MetricSpec::L1Abs,
            &s,
            &LatticeValue::FiniteElem(0),
            &LatticeValue::FiniteElem(1),
        )
        .unwrap();
        assert_eq!(d, ExtReal::from_int(1, b()));
    }

    #[test]
    fn triangle_inequality_on_samples() {
        let s = PaymentSpace::unbounded(b());
        let pts: Vec<LatticeValue> = [0, 1, 3, 7, 10].iter().map(|&n| ext(n)).collect();
        for a in &pts {
            for bb in &pts {
                for c in &pts {
                    let ab = distance(MetricSpec::L1Abs, &s, a, bb).unwrap();
                    let bc = distance(MetricSpec::L1Abs, &s, bb, c).unwrap();
                    let ac = distance(MetricSpec::L1Abs, &s, a, c).unwrap();
                    assert!(ac.leq(&ab.add(&bc)));
                }
            }
        }
    }

    #[test]
    fn absorption_on_finite_table() {
        let table = FiniteLattice::from_covers(
            vec!["bot".into(), "a".into(), "b".into(), "top".into()],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        let s = PaymentSpace::finite(table);
        let elems = s.enumerate().unwrap();
        for a in &elems {
            for bb in &elems {
                let j = s.join(a, bb).unwrap();
                assert_eq!(s.meet(a, &j).unwrap(), *a);
                // Antisymmetry.
                if s.leq(a, bb).unwrap() && s.leq(bb, a).unwrap() {
                    assert_eq!(a, bb);
                }
            }
        }
    }
}
