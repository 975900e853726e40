//! Ground set, ordered element sets and the knapsack instance `(f, V, B)`.

use std::fmt;

use crate::error::{Error, Result};

/// Dense identifier of one element of the ground set, `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElementId(pub usize);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for ElementId {
    fn from(index: usize) -> Self {
        ElementId(index)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of distinct elements that remembers insertion order.
///
/// The order matters: AST's boost phase works on the prefixes `T^i`, the
/// first `i` elements added to `T`.
#[derive(Clone, Debug, Default)]
pub struct ElementSet {
    order: Vec<ElementId>,
    mask: Vec<bool>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty set with membership storage sized for a ground set of `n`.
    pub fn with_ground_size(n: usize) -> Self {
        ElementSet {
            order: Vec::new(),
            mask: vec![false; n],
        }
    }

    /// The set `{0, .., n-1}` in id order.
    pub fn full(n: usize) -> Self {
        ElementSet {
            order: (0..n).map(ElementId).collect(),
            mask: vec![true; n],
        }
    }

    /// Builds a set from ids, silently skipping repeats (first occurrence wins).
    pub fn from_ids<I>(ids: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<ElementId>,
    {
        let mut set = ElementSet::new();
        for id in ids {
            set.insert(id.into());
        }
        set
    }

    /// Inserts `e` at the end of the order. Returns `false` if it was already present.
    pub fn insert(&mut self, e: ElementId) -> bool {
        let i = e.index();
        if i >= self.mask.len() {
            self.mask.resize(i + 1, false);
        }
        if self.mask[i] {
            return false;
        }
        self.mask[i] = true;
        self.order.push(e);
        true
    }

    pub fn extend_from<I: IntoIterator<Item = ElementId>>(&mut self, ids: I) {
        for e in ids {
            self.insert(e);
        }
    }

    #[inline]
    pub fn contains(&self, e: ElementId) -> bool {
        self.mask.get(e.index()).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Members in insertion order.
    pub fn as_slice(&self) -> &[ElementId] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.order.iter().copied()
    }

    /// The first `len` inserted elements.
    pub fn prefix(&self, len: usize) -> ElementSet {
        ElementSet::from_ids(self.order[..len.min(self.order.len())].iter().copied())
    }

    /// Members in ascending id order.
    pub fn sorted_ids(&self) -> Vec<ElementId> {
        let mut ids = self.order.clone();
        ids.sort_unstable();
        ids
    }

    /// `self ∪ other`, keeping `self`'s order followed by `other`'s new elements.
    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.extend_from(other.iter());
        out
    }

    /// Elements of `self` not in `other`, order preserved.
    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        ElementSet::from_ids(self.iter().filter(|&e| !other.contains(e)))
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.iter().all(|e| !other.contains(e))
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    /// Set equality, ignoring insertion order.
    pub fn same_members(&self, other: &ElementSet) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }

    /// Largest id + 1, or 0 for the empty set.
    pub fn id_bound(&self) -> usize {
        self.order.iter().map(|e| e.index() + 1).max().unwrap_or(0)
    }
}

/// Two sets are equal when they hold the same elements in the same order.
impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for ElementSet {}

impl FromIterator<ElementId> for ElementSet {
    fn from_iter<T: IntoIterator<Item = ElementId>>(iter: T) -> Self {
        let mut set = ElementSet::new();
        set.extend_from(iter);
        set
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = ElementId;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, ElementId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.order.iter().copied()
    }
}

/// Element costs and a budget: the constraint half of an SMK instance.
#[derive(Clone, Debug, PartialEq)]
pub struct KnapsackInstance {
    costs: Vec<f64>,
    budget: f64,
}

impl KnapsackInstance {
    pub fn new(costs: Vec<f64>, budget: f64) -> Result<Self> {
        if let Some((i, c)) = costs
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c > 0.0))
        {
            return Err(Error::InvalidInstance(format!(
                "cost of element {i} must be positive and finite, got {c}"
            )));
        }
        if !(budget.is_finite() && budget > 0.0) {
            return Err(Error::InvalidInstance(format!(
                "budget must be positive and finite, got {budget}"
            )));
        }
        Ok(KnapsackInstance { costs, budget })
    }

    /// Same costs, budget set to `fraction` of the total cost.
    pub fn with_budget_fraction(costs: Vec<f64>, fraction: f64) -> Result<Self> {
        let total: f64 = costs.iter().sum();
        KnapsackInstance::new(costs, fraction * total)
    }

    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        KnapsackInstance::new(self.costs.clone(), budget)
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    #[inline]
    pub fn cost_of(&self, e: ElementId) -> f64 {
        self.costs[e.index()]
    }

    pub fn total_cost(&self) -> f64 {
        self.costs.iter().sum()
    }

    /// `c(S)`, accumulated in ascending id order so the result does not
    /// depend on how the set was built.
    pub fn cost(&self, set: &ElementSet) -> f64 {
        set.sorted_ids().into_iter().map(|e| self.cost_of(e)).sum()
    }

    /// Whether a total cost fits the budget (inclusive).
    #[inline]
    pub fn fits(&self, total: f64) -> bool {
        total <= self.budget
    }

    pub fn feasible(&self, set: &ElementSet) -> bool {
        self.fits(self.cost(set))
    }

    pub fn check_members(&self, set: &ElementSet) -> Result<()> {
        check_ids(set.iter(), self.n())
    }

    /// `k`: the largest cardinality of any feasible set.
    pub fn max_feasible_cardinality(&self) -> usize {
        let mut sorted = self.costs.clone();
        sorted.sort_by(f64::total_cmp);
        let mut total = 0.0;
        sorted
            .iter()
            .take_while(|&&c| {
                total += c;
                total <= self.budget
            })
            .count()
    }
}

pub(crate) fn check_ids<I: IntoIterator<Item = ElementId>>(ids: I, n: usize) -> Result<()> {
    for id in ids {
        if id.index() >= n {
            return Err(Error::ElementOutOfRange { id, n });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[usize]) -> ElementSet {
        ElementSet::from_ids(ids.iter().copied())
    }

    #[test]
    fn element_set_keeps_insertion_order_and_rejects_duplicates() {
        let mut s = set(&[3, 1]);
        assert!(!s.insert(ElementId(3)));
        assert!(s.insert(ElementId(0)));
        assert_eq!(s.as_slice(), &[ElementId(3), ElementId(1), ElementId(0)]);
        assert_eq!(s.prefix(2), set(&[3, 1]));
        assert_eq!(s.sorted_ids(), vec![ElementId(0), ElementId(1), ElementId(3)]);
        assert!(s.same_members(&set(&[0, 1, 3])));
        assert_ne!(s, set(&[0, 1, 3]));
    }

    #[test]
    fn set_algebra() {
        let a = set(&[0, 2, 4]);
        let b = set(&[4, 5]);
        assert_eq!(a.union(&b), set(&[0, 2, 4, 5]));
        assert_eq!(a.difference(&b), set(&[0, 2]));
        assert!(!a.is_disjoint(&b));
        assert!(set(&[1]).is_disjoint(&a));
        assert_eq!(a.id_bound(), 5);
    }

    #[test]
    fn feasibility_examples() {
        let unit = KnapsackInstance::new(vec![1.0; 3], 2.0).unwrap();
        assert!(unit.feasible(&ElementSet::new()));
        assert!(!unit.feasible(&set(&[0, 1, 2])));
        assert!(unit.feasible(&set(&[0, 2])));

        // 0.5 + 0.6 == 1.1 in binary floating point; the boundary is inclusive.
        let edge = KnapsackInstance::new(vec![0.5, 0.6], 1.1).unwrap();
        assert!(edge.feasible(&set(&[0, 1])));
        assert!(edge.feasible(&set(&[1, 0])));
    }

    #[test]
    fn rejects_non_positive_costs_and_budget() {
        assert!(KnapsackInstance::new(vec![1.0, 0.0], 1.0).is_err());
        assert!(KnapsackInstance::new(vec![1.0, -2.0], 1.0).is_err());
        assert!(KnapsackInstance::new(vec![1.0, f64::NAN], 1.0).is_err());
        assert!(KnapsackInstance::new(vec![1.0], 0.0).is_err());
    }

    #[test]
    fn max_feasible_cardinality_counts_cheapest_prefix() {
        let inst = KnapsackInstance::new(vec![3.0, 1.0, 2.0, 0.5], 3.6).unwrap();
        assert_eq!(inst.max_feasible_cardinality(), 3);
    }

    #[test]
    fn cost_is_order_independent() {
        let inst = KnapsackInstance::new(vec![0.1, 0.2, 0.3, 1e-17], 10.0).unwrap();
        assert_eq!(inst.cost(&set(&[3, 2, 1, 0])), inst.cost(&set(&[0, 1, 2, 3])));
    }
}
