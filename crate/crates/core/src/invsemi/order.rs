//! Natural order, compatibility, joins, completeness, infinite
//! distributivity, and filters of abstract inverse semigroups.
//!
//! Exhaustive enumeration of compatible subsets is only attempted below a
//! size cap (the powerset of a maximal compatible clique must stay small).
//! Above the cap the same questions are answered through reductions that
//! are equivalent for finite semigroups:
//!
//! * join existence for every compatible subset is decided by a search over
//!   the reachable (upper-bound set, common-compatibility set) states, which
//!   collapse the exponentially many subsets with identical behaviour;
//! * once completeness is known, joins of finite compatible sets fold
//!   through binary joins (intermediates exist and pairs below a common
//!   upper bound are compatible), so distributivity and compatible
//!   primality reduce to the binary case.
//!
//! The two paths are cross-checked against each other on small inputs in
//! the test suite.

use std::collections::HashMap;

use thiserror::Error;

use super::table::InverseSemigroup;

/// s ≤ t iff s = f·t for some idempotent f.
pub fn natural_leq(s: &InverseSemigroup, a: usize, b: usize) -> bool {
    s.idempotents().iter().any(|&f| s.mul(f, b) == a)
}

/// s and t are compatible iff both s·t* and s*·t are idempotent.
pub fn is_compatible(s: &InverseSemigroup, a: usize, b: usize) -> bool {
    s.is_idempotent(s.mul(a, s.inv(b))) && s.is_idempotent(s.mul(s.inv(a), b))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JoinError {
    #[error("elements {a} and {b} are incompatible; a join is not defined")]
    Incompatible { a: usize, b: usize },
}

/// Which path produced a completeness / distributivity answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMethod {
    /// Literal enumeration of every compatible subset.
    Exhaustive,
    /// State-space / binary-join reduction (equivalent, used above the cap).
    Reduction,
}

/// Precomputed order data shared by the heavier checks.
pub(crate) struct OrderData {
    pub n: usize,
    /// Row-major n×n: `leq[a*n+b]` iff a ≤ b.
    pub leq: Vec<bool>,
    /// Row-major n×n compatibility.
    pub compat: Vec<bool>,
}

impl OrderData {
    pub fn new(s: &InverseSemigroup) -> Self {
        let n = s.size();
        let idem = s.idempotents();
        let mut leq = vec![false; n * n];
        for b in 0..n {
            for &f in &idem {
                leq[s.mul(f, b) * n + b] = true;
            }
        }
        let mut compat = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                compat[a * n + b] = is_compatible(s, a, b);
            }
        }
        OrderData { n, leq, compat }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn compatible(&self, a: usize, b: usize) -> bool {
        self.compat[a * self.n + b]
    }

    /// Least element of `elems`, if one is a lower bound of all of them.
    pub fn minimum_of(&self, elems: &[usize]) -> Option<usize> {
        elems
            .iter()
            .copied()
            .find(|&m| elems.iter().all(|&u| self.leq(m, u)))
    }

    /// Join of an arbitrary (already pairwise-compatible) list.
    pub fn join_of(&self, z: &[usize]) -> Option<usize> {
        let ubs: Vec<usize> = (0..self.n)
            .filter(|&u| z.iter().all(|&zi| self.leq(zi, u)))
            .collect();
        self.minimum_of(&ubs)
    }

    /// Greatest lower bound of a pair, if it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lbs: Vec<usize> = (0..self.n)
            .filter(|&m| self.leq(m, a) && self.leq(m, b))
            .collect();
        lbs.iter()
            .copied()
            .find(|&g| lbs.iter().all(|&m| self.leq(m, g)))
    }

    /// Join of every compatible pair, as a row-major table (`None` for
    /// incompatible or joinless pairs).
    pub fn pair_join_table(&self) -> Vec<Option<usize>> {
        let n = self.n;
        let mut table = vec![None; n * n];
        for a in 0..n {
            for b in a..n {
                if self.compatible(a, b) {
                    let j = self.join_of(&[a, b]);
                    table[a * n + b] = j;
                    table[b * n + a] = j;
                }
            }
        }
        table
    }

    /// Least element, if any.
    pub fn least(&self) -> Option<usize> {
        (0..self.n).find(|&z| (0..self.n).all(|u| self.leq(z, u)))
    }
}

/// Upper bounds of `z` in the natural order.
pub fn upper_bounds(s: &InverseSemigroup, z: &[usize]) -> Vec<usize> {
    let data = OrderData::new(s);
    (0..s.size())
        .filter(|&u| z.iter().all(|&zi| data.leq(zi, u)))
        .collect()
}

/// Least upper bound of a compatible subset. `Ok(None)` means the set is
/// compatible but has no join in `s`; an incompatible input is an error,
/// not an absent join.
pub fn join(s: &InverseSemigroup, z: &[usize]) -> Result<Option<usize>, JoinError> {
    for (i, &a) in z.iter().enumerate() {
        for &b in &z[i + 1..] {
            if !is_compatible(s, a, b) {
                return Err(JoinError::Incompatible { a, b });
            }
        }
    }
    Ok(OrderData::new(s).join_of(z))
}

/// Greatest lower bound of a pair, if it exists.
pub fn meet_of_pair(s: &InverseSemigroup, a: usize, b: usize) -> Option<usize> {
    OrderData::new(s).meet(a, b)
}

const EXHAUSTIVE_SIZE_CAP: usize = 64;
const EXHAUSTIVE_CLIQUE_CAP: usize = 16;
const EXHAUSTIVE_TOTAL_CAP: usize = 1 << 21;

/// Maximal cliques of the compatibility graph (Bron–Kerbosch with pivot).
/// Only for semigroups with at most 64 elements.
fn maximal_compatible_cliques(data: &OrderData) -> Vec<u64> {
    let n = data.n;
    assert!(n <= 64);
    let adj: Vec<u64> = (0..n)
        .map(|a| {
            let mut row = 0u64;
            for b in 0..n {
                if b != a && data.compatible(a, b) {
                    row |= 1 << b;
                }
            }
            row
        })
        .collect();

    fn bk(r: u64, mut p: u64, mut x: u64, adj: &[u64], out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = crate::bits::iter(p | x)
            .max_by_key(|&v| (p & adj[v]).count_ones())
            .unwrap();
        let candidates = p & !adj[pivot];
        for v in crate::bits::iter(candidates) {
            bk(r | 1 << v, p & adj[v], x & adj[v], adj, out);
            p &= !(1u64 << v);
            x |= 1 << v;
        }
    }

    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    bk(0, crate::bits::full(n), 0, &adj, &mut out);
    out.sort_unstable();
    out
}

/// Every compatible subset, as sorted element lists in canonical order.
/// `None` when the enumeration would be infeasible (see the caps); callers
/// then use the reduction paths instead.
pub fn compatible_subsets(s: &InverseSemigroup) -> Option<Vec<Vec<usize>>> {
    if s.size() > EXHAUSTIVE_SIZE_CAP {
        return None;
    }
    let data = OrderData::new(s);
    let cliques = maximal_compatible_cliques(&data);
    let mut budget: usize = 0;
    for &c in &cliques {
        let k = c.count_ones() as usize;
        if k > EXHAUSTIVE_CLIQUE_CAP {
            return None;
        }
        budget = budget.saturating_add(1usize << k);
        if budget > EXHAUSTIVE_TOTAL_CAP {
            return None;
        }
    }
    let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
    for &c in &cliques {
        for sub in crate::bits::subsets(c) {
            seen.insert(sub);
        }
    }
    if s.size() == 0 {
        seen.insert(0);
    }
    let mut sets: Vec<u64> = seen.into_iter().collect();
    sets.sort_unstable();
    Some(sets.into_iter().map(crate::bits::to_vec).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    /// Every compatible subset, including the empty one, has a join.
    pub complete: bool,
    /// Separate clause for ∨∅: the semigroup has a least element.
    pub empty_join_exists: bool,
    /// A compatible subset with no join, when one exists.
    pub missing: Option<Vec<usize>>,
    pub method: CheckMethod,
}

/// Decides whether every compatible subset has a join.
pub fn complete_report(s: &InverseSemigroup) -> CompletenessReport {
    let data = OrderData::new(s);
    if let Some(subsets) = compatible_subsets(s) {
        let mut empty_join_exists = true;
        let mut missing = None;
        for z in &subsets {
            if data.join_of(z).is_none() {
                if z.is_empty() {
                    empty_join_exists = false;
                    if missing.is_none() {
                        missing = Some(z.clone());
                    }
                } else if missing.is_none() {
                    missing = Some(z.clone());
                }
            }
        }
        return CompletenessReport {
            complete: missing.is_none(),
            empty_join_exists,
            missing,
            method: CheckMethod::Exhaustive,
        };
    }
    complete_report_reduction(s, &data)
}

/// Word-vector helpers for subsets of semigroup elements (size may exceed
/// 64 here, unlike point sets).
fn words_full(n: usize) -> Vec<u64> {
    let w = n.div_ceil(64);
    let mut v = vec![u64::MAX; w];
    if !n.is_multiple_of(64) && w > 0 {
        v[w - 1] = (1u64 << (n % 64)) - 1;
    }
    v
}

fn words_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn words_iter(v: &[u64]) -> impl Iterator<Item = usize> + '_ {
    v.iter()
        .enumerate()
        .flat_map(|(w, &word)| crate::bits::iter(word).map(move |b| w * 64 + b))
}

fn complete_report_reduction(s: &InverseSemigroup, data: &OrderData) -> CompletenessReport {
    let n = s.size();
    let up_rows: Vec<Vec<u64>> = (0..n)
        .map(|z| {
            let mut row = vec![0u64; n.div_ceil(64)];
            for u in 0..n {
                if data.leq(z, u) {
                    row[u / 64] |= 1 << (u % 64);
                }
            }
            row
        })
        .collect();
    let compat_rows: Vec<Vec<u64>> = (0..n)
        .map(|z| {
            let mut row = vec![0u64; n.div_ceil(64)];
            for u in 0..n {
                if data.compatible(z, u) {
                    row[u / 64] |= 1 << (u % 64);
                }
            }
            row
        })
        .collect();

    let has_min = |ub: &[u64]| -> bool {
        let elems: Vec<usize> = words_iter(ub).collect();
        data.minimum_of(&elems).is_some()
    };

    type StateKey = (Vec<u64>, Vec<u64>);
    let start: StateKey = (words_full(n), words_full(n));
    let empty_join_exists = has_min(&start.0);

    // Each state is (upper bounds of Z, elements compatible with all of Z);
    // join existence and all future extensions depend on Z only through
    // this pair, so one representative per state is enough.
    let mut parents: HashMap<StateKey, Option<(StateKey, usize)>> = HashMap::new();
    parents.insert(start.clone(), None);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start.clone());
    let mut missing: Option<Vec<usize>> = if empty_join_exists {
        None
    } else {
        Some(Vec::new())
    };

    'bfs: while let Some(state) = queue.pop_front() {
        let (ub, compat) = state.clone();
        for z in words_iter(&compat).collect::<Vec<_>>() {
            let new_ub = words_and(&ub, &up_rows[z]);
            let new_compat = words_and(&compat, &compat_rows[z]);
            let key = (new_ub, new_compat);
            if parents.contains_key(&key) {
                continue;
            }
            parents.insert(key.clone(), Some((state.clone(), z)));
            if !has_min(&key.0) && missing.is_none() {
                // Reconstruct one witness Z along the parent chain.
                let mut zset = Vec::new();
                let mut cur = key.clone();
                while let Some(Some((prev, added))) = parents.get(&cur).cloned() {
                    zset.push(added);
                    cur = prev;
                }
                zset.sort_unstable();
                zset.dedup();
                missing = Some(zset);
                break 'bfs;
            }
            assert!(
                parents.len() <= 500_000,
                "compatible-subset state space exceeded the safety cap"
            );
            queue.push_back(key);
        }
    }

    CompletenessReport {
        complete: missing.is_none(),
        empty_join_exists,
        missing,
        method: CheckMethod::Reduction,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributivityReport {
    pub distributive: bool,
    /// `(s, Z)` with `s·∨Z ≠ ∨(sZ)` or `sZ` incompatible.
    pub witness: Option<(usize, Vec<usize>)>,
    pub method: CheckMethod,
}

/// Decides whether multiplication distributes over joins of compatible
/// sets: for every `s` and compatible `Z` with a join, `sZ` is compatible
/// and `s·∨Z = ∨(sZ)`.
pub fn distributive_report(s: &InverseSemigroup) -> DistributivityReport {
    let data = OrderData::new(s);
    if let Some(subsets) = compatible_subsets(s) {
        for z in &subsets {
            let Some(w) = data.join_of(z) else { continue };
            for t in 0..s.size() {
                let mut tz: Vec<usize> = z.iter().map(|&zi| s.mul(t, zi)).collect();
                tz.sort_unstable();
                tz.dedup();
                let pairwise_ok = tz
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| tz[i + 1..].iter().all(|&b| data.compatible(a, b)));
                if !pairwise_ok || data.join_of(&tz) != Some(s.mul(t, w)) {
                    return DistributivityReport {
                        distributive: false,
                        witness: Some((t, z.clone())),
                        method: CheckMethod::Exhaustive,
                    };
                }
            }
        }
        return DistributivityReport {
            distributive: true,
            witness: None,
            method: CheckMethod::Exhaustive,
        };
    }

    let completeness = complete_report(s);
    assert!(
        completeness.complete,
        "distributivity beyond the exhaustive cap requires a complete semigroup"
    );
    // With completeness in hand, finite joins fold through binary joins, so
    // distributivity over every compatible set reduces to the binary case
    // plus the empty set.
    let zero = data.least().expect("complete semigroup has a least element");
    for t in 0..s.size() {
        if s.mul(t, zero) != zero {
            return DistributivityReport {
                distributive: false,
                witness: Some((t, Vec::new())),
                method: CheckMethod::Reduction,
            };
        }
    }
    let joins = data.pair_join_table();
    let n = s.size();
    for a in 0..n {
        for b in a..n {
            if !data.compatible(a, b) {
                continue;
            }
            let w = joins[a * n + b]
                .expect("complete semigroup has binary joins of compatible pairs");
            for t in 0..n {
                let ta = s.mul(t, a);
                let tb = s.mul(t, b);
                if !data.compatible(ta, tb) || joins[ta * n + tb] != Some(s.mul(t, w)) {
                    return DistributivityReport {
                        distributive: false,
                        witness: Some((t, vec![a, b])),
                        method: CheckMethod::Reduction,
                    };
                }
            }
        }
    }
    DistributivityReport {
        distributive: true,
        witness: None,
        method: CheckMethod::Reduction,
    }
}

/// The paper leaves "filter of an inverse semigroup" undefined when binary
/// meets are missing; both candidate readings are carried side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterVariant {
    /// Nonempty, upward closed, and downward directed (any two members have
    /// a lower bound inside the filter).
    DownwardDirected,
    /// Nonempty, upward closed, and closed under binary meets where they
    /// exist.
    MeetClosed,
}

/// All filters of the natural order under the chosen definition, each as a
/// sorted member list, in canonical order.
pub fn filters(s: &InverseSemigroup, variant: FilterVariant) -> Vec<Vec<usize>> {
    let data = OrderData::new(s);
    let n = s.size();
    let upset = |m: usize| -> Vec<usize> { (0..n).filter(|&u| data.leq(m, u)).collect() };

    let mut out: Vec<Vec<usize>> = match variant {
        FilterVariant::DownwardDirected => {
            // A finite downward-directed set has a minimum (fold pairwise
            // lower bounds), so these filters are exactly the principal
            // up-sets. Cross-checked by brute force in the tests.
            (0..n).map(upset).collect()
        }
        FilterVariant::MeetClosed => {
            // Minimal elements of such a filter form an antichain in which
            // no two elements have a meet (a meet would sit below two
            // distinct minimal elements). Enumerate those antichains, then
            // keep the up-closures that really are meet-closed.
            let mut candidates: Vec<Vec<usize>> = Vec::new();
            let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
            while let Some((antichain, next)) = stack.pop() {
                if !antichain.is_empty() {
                    candidates.push(antichain.clone());
                    assert!(
                        candidates.len() <= 1 << 20,
                        "filter enumeration exceeded the safety cap"
                    );
                }
                for e in next..n {
                    let ok = antichain.iter().all(|&a| {
                        !data.leq(a, e) && !data.leq(e, a) && data.meet(a, e).is_none()
                    });
                    if ok {
                        let mut bigger = antichain.clone();
                        bigger.push(e);
                        stack.push((bigger, e + 1));
                    }
                }
            }
            let mut filters = Vec::new();
            for antichain in candidates {
                let members: Vec<usize> = (0..n)
                    .filter(|&u| antichain.iter().any(|&a| data.leq(a, u)))
                    .collect();
                let meet_closed = members.iter().all(|&a| {
                    members
                        .iter()
                        .all(|&b| match data.meet(a, b) {
                            None => true,
                            Some(m) => members.contains(&m),
                        })
                });
                if meet_closed {
                    filters.push(members);
                }
            }
            filters
        }
    };
    out.sort();
    out.dedup();
    out
}

/// Shared data for deciding compatible primality of many filters of one
/// semigroup.
pub(crate) struct PrimalityContext {
    n: usize,
    /// Exhaustive path: all compatible subsets paired with their joins.
    joined_subsets: Option<Vec<(Vec<usize>, usize)>>,
    /// Reduction path: binary join table plus the least element.
    pair_joins: Option<(Vec<Option<usize>>, usize)>,
}

impl PrimalityContext {
    pub fn new(s: &InverseSemigroup) -> Self {
        let data = OrderData::new(s);
        if let Some(subsets) = compatible_subsets(s) {
            let joined = subsets
                .into_iter()
                .filter_map(|z| data.join_of(&z).map(|w| (z, w)))
                .collect();
            return PrimalityContext {
                n: s.size(),
                joined_subsets: Some(joined),
                pair_joins: None,
            };
        }
        let completeness = complete_report(s);
        assert!(
            completeness.complete,
            "compatible primality beyond the exhaustive cap requires a complete semigroup"
        );
        let zero = data.least().expect("complete semigroup has a least element");
        PrimalityContext {
            n: s.size(),
            joined_subsets: None,
            pair_joins: Some((data.pair_join_table(), zero)),
        }
    }

    /// Whether the filter `f` (sorted member list) is compatibly prime:
    /// whenever a compatible set `Z` has its join in the filter, some
    /// member of `Z` is in the filter. The empty set counts, so a filter
    /// containing the least element is never compatibly prime.
    pub fn is_prime(&self, f: &[usize]) -> bool {
        let member = |x: usize| f.binary_search(&x).is_ok();
        if let Some(joined) = &self.joined_subsets {
            return joined
                .iter()
                .all(|(z, w)| !member(*w) || z.iter().any(|&zi| member(zi)));
        }
        // In a complete semigroup joins fold through binary joins, so
        // primality over every compatible set reduces to pairs plus the
        // empty set.
        let (joins, zero) = self.pair_joins.as_ref().unwrap();
        if member(*zero) {
            return false;
        }
        for a in 0..self.n {
            for b in a + 1..self.n {
                if let Some(w) = joins[a * self.n + b] {
                    if member(w) && !member(a) && !member(b) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// One-off form of [`PrimalityContext::is_prime`].
pub fn is_compatibly_prime(s: &InverseSemigroup, f: &[usize]) -> bool {
    PrimalityContext::new(s).is_prime(f)
}
