//! Multiindices and the index sets built from them.
//!
//! A multiindex `α = (α₁, …, α_l)` with digits in `{0, 1, 2, 3}` names the
//! multiple integral whose innermost integrator is `α₁` and outermost is
//! `α_l`: 0 is `ds`, 1 is `dW`, 2 is `Ñ(ds, dx)` over the unit ball `B` and
//! 3 is `N(ds, dx)` over its complement `B'`. The empty multiindex `v` has
//! length zero.
//!
//! Orders γ are half-integers and are carried as `2γ` so that set membership
//! is exact integer arithmetic.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::levy::JumpRegion;
use crate::{Error, Result};

/// A finite word over `{0, 1, 2, 3}`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Multiindex(Vec<u8>);

/// Digit tallies of a multiindex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    /// zeros (time integrals)
    pub s: usize,
    /// ones (Wiener integrals)
    pub w: usize,
    /// twos (compensated small-jump integrals)
    pub n_tilde: usize,
    /// threes (tail-jump integrals)
    pub n: usize,
    /// `n_tilde + n`
    pub k: usize,
}

impl Counts {
    pub fn len(&self) -> usize {
        self.s + self.w + self.n_tilde + self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl std::ops::Add for Counts {
    type Output = Counts;

    fn add(self, rhs: Counts) -> Counts {
        Counts {
            s: self.s + rhs.s,
            w: self.w + rhs.w,
            n_tilde: self.n_tilde + rhs.n_tilde,
            n: self.n + rhs.n,
            k: self.k + rhs.k,
        }
    }
}

impl Multiindex {
    /// The empty multiindex `v`.
    pub fn empty() -> Self {
        Multiindex(Vec::new())
    }

    pub fn new(digits: impl Into<Vec<u8>>) -> Result<Self> {
        let digits = digits.into();
        if let Some(d) = digits.iter().find(|&&d| d > 3) {
            return Err(Error::domain(format!("multiindex digit {d} is not in {{0,1,2,3}}")));
        }
        Ok(Multiindex(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for &d in &self.0 {
            match d {
                0 => c.s += 1,
                1 => c.w += 1,
                2 => c.n_tilde += 1,
                _ => c.n += 1,
            }
        }
        c.k = c.n_tilde + c.n;
        c
    }

    /// `α−`: drops the last (outermost) digit.
    pub fn drop_last(&self) -> Result<Multiindex> {
        match self.0.split_last() {
            Some((_, rest)) => Ok(Multiindex(rest.to_vec())),
            None => Err(Error::domain("drop_last of the empty multiindex")),
        }
    }

    /// `−α`: drops the first (innermost) digit.
    pub fn drop_first(&self) -> Result<Multiindex> {
        match self.0.split_first() {
            Some((_, rest)) => Ok(Multiindex(rest.to_vec())),
            None => Err(Error::domain("drop_first of the empty multiindex")),
        }
    }

    /// `(j) ⌢ α`.
    pub fn prepend(&self, digit: u8) -> Result<Multiindex> {
        let mut d = Vec::with_capacity(self.len() + 1);
        d.push(digit);
        d.extend_from_slice(&self.0);
        Multiindex::new(d)
    }

    pub fn concat(&self, other: &Multiindex) -> Multiindex {
        let mut d = self.0.clone();
        d.extend_from_slice(&other.0);
        Multiindex(d)
    }

    /// The subsequence of jump digits (2s and 3s); its length is `k(α)`.
    pub fn beta(&self) -> Multiindex {
        Multiindex(self.0.iter().copied().filter(|&d| d >= 2).collect())
    }

    /// Integration region `B_i^α` of the `i`-th mark variable (1-based):
    /// the small ball when `β(α)_{k+1−i} = 2`, the tail when it is 3.
    pub fn ball_at(&self, i: usize) -> Result<JumpRegion> {
        let beta = self.beta();
        let k = beta.len();
        if i == 0 || i > k {
            return Err(Error::domain(format!("ball index {i} outside 1..={k} for {self}")));
        }
        Ok(match beta.0[k - i] {
            2 => JumpRegion::Small,
            _ => JumpRegion::Tail,
        })
    }
}

impl Ord for Multiindex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Multiindex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Multiindex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("v");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Multiindex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multiindex({self})")
    }
}

impl FromStr for Multiindex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "v" || s.is_empty() {
            return Ok(Multiindex::empty());
        }
        let digits = s
            .chars()
            .map(|c| match c {
                '0'..='3' => Ok(c as u8 - b'0'),
                _ => Err(Error::domain(format!("invalid multiindex character {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Multiindex(digits))
    }
}

/// A strong order γ, stored as the positive integer `2γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(u32);

impl Order {
    pub const EULER: Order = Order(1);
    pub const MILSTEIN: Order = Order(2);

    pub fn from_half_units(twice_gamma: u32) -> Result<Self> {
        if twice_gamma == 0 {
            return Err(Error::domain("order γ must be positive"));
        }
        Ok(Order(twice_gamma))
    }

    /// Accepts only positive half-integers.
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        let twice = 2.0 * gamma;
        if !(twice >= 1.0) || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(Error::domain(format!("γ = {gamma} is not a positive half-integer")));
        }
        Ok(Order(twice as u32))
    }

    pub fn half_units(self) -> u32 {
        self.0
    }

    pub fn gamma(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `l(α) + s(α) ≤ 2γ` or `l(α) = s(α) = γ + 1/2`.
    pub fn admits(self, alpha: &Multiindex) -> bool {
        let l = alpha.len() as u64;
        let s = alpha.counts().s as u64;
        let h = self.0 as u64;
        l + s <= h || (l == s && 2 * l == h + 1)
    }

    /// Upper bound on the length of members of `A_γ`. Every member satisfies
    /// `l ≤ 2γ` or `l = γ + 1/2`, so `2γ + 1` is a safe enumeration bound.
    pub fn max_len(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    Hierarchical(Order),
    Remainder,
    Other,
}

/// A finite set of multiindices, ordered by length then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    members: BTreeSet<Multiindex>,
    kind: SetKind,
}

impl IndexSet {
    pub fn from_members(members: impl IntoIterator<Item = Multiindex>) -> Self {
        IndexSet { members: members.into_iter().collect(), kind: SetKind::Other }
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn order(&self) -> Option<Order> {
        match self.kind {
            SetKind::Hierarchical(o) => Some(o),
            _ => None,
        }
    }

    pub fn contains(&self, alpha: &Multiindex) -> bool {
        self.members.contains(alpha)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Multiindex> {
        self.members.iter()
    }

    /// `v ∈ A` and `α ∈ A \ {v} ⇒ −α ∈ A`.
    pub fn is_hierarchical(&self) -> bool {
        self.contains(&Multiindex::empty())
            && self
                .members
                .iter()
                .filter(|a| !a.is_empty())
                .all(|a| a.drop_first().map(|t| self.contains(&t)).unwrap_or(false))
    }

    /// Members rendered as digit strings, e.g. `["v", "0", "1", "11"]`.
    pub fn labels(&self) -> Vec<String> {
        self.members.iter().map(|m| m.to_string()).collect()
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = &'a Multiindex;
    type IntoIter = std::collections::btree_set::Iter<'a, Multiindex>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// `A_γ`, grown from `v` by prepending digits. Membership of `A_γ` is closed
/// under `−α`, so every member is reached from a shorter member.
pub fn hierarchical_set(order: Order) -> IndexSet {
    let mut members = BTreeSet::new();
    let mut frontier = vec![Multiindex::empty()];
    members.insert(Multiindex::empty());
    for _ in 0..order.max_len() {
        let mut next = Vec::new();
        for base in &frontier {
            for j in 0..4u8 {
                let cand = base.prepend(j).expect("digit in range");
                if order.admits(&cand) && members.insert(cand.clone()) {
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    debug_assert!(members.iter().all(|m| m.len() <= order.max_len()));
    IndexSet { members, kind: SetKind::Hierarchical(order) }
}

/// `B(A) = {α : α ∉ A, −α ∈ A}`, obtained as `{(j)⌢β : β ∈ A} \ A`.
pub fn remainder_set(set: &IndexSet) -> Result<IndexSet> {
    if !set.is_hierarchical() {
        return Err(Error::domain("remainder set requested for a non-hierarchical set"));
    }
    let members = set
        .iter()
        .flat_map(|beta| (0..4u8).map(move |j| beta.prepend(j).expect("digit in range")))
        .filter(|alpha| !set.contains(alpha))
        .collect();
    Ok(IndexSet { members, kind: SetKind::Remainder })
}

/// `Π(α)`: all binary words of length `ñ(α)`; a single empty word when `ñ(α) = 0`.
///
/// Position `i` selects, for the `i`-th compensated small-jump integral of
/// `α`, the ε-ball (0) or the ε-disc (1).
pub fn subscript_set(alpha: &Multiindex) -> Vec<Vec<u8>> {
    let n = alpha.counts().n_tilde;
    (0..1u64 << n)
        .map(|bits| (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect())
        .collect()
}
