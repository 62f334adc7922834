//! Small helpers for `u64`-backed point sets.
//!
//! Points of every finite space are integers `0..n` with `n <= 64`, so a
//! subset is a single `u64` with bit `i` set iff point `i` is a member.

/// Bitset with the low `n` bits set.
pub fn full(n: usize) -> u64 {
    assert!(n <= 64, "point sets are limited to 64 points");
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates over the members of a bitset in ascending order.
pub fn iter(set: u64) -> impl Iterator<Item = usize> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// Number of members.
pub fn count(set: u64) -> usize {
    set.count_ones() as usize
}

/// Membership test.
pub fn contains(set: u64, i: usize) -> bool {
    set >> i & 1 == 1
}

/// Renders a bitset as `{0, 2, 5}` for reports.
pub fn show(set: u64) -> String {
    let elems: Vec<String> = iter(set).map(|i| i.to_string()).collect();
    format!("{{{}}}", elems.join(", "))
}

/// Sorted member list, the JSON-facing form of a bitset.
pub fn to_vec(set: u64) -> Vec<usize> {
    iter(set).collect()
}

/// Builds a bitset from member indices; panics if any index is 64 or more.
pub fn from_iter<I: IntoIterator<Item = usize>>(elems: I) -> u64 {
    let mut set = 0u64;
    for i in elems {
        assert!(i < 64, "point index {i} out of bitset range");
        set |= 1 << i;
    }
    set
}

/// All subsets of `set`, ascending as integers. Only for small sets.
pub fn subsets(set: u64) -> Vec<u64> {
    let members: Vec<usize> = iter(set).collect();
    assert!(
        members.len() <= 24,
        "refusing to enumerate 2^{} subsets",
        members.len()
    );
    let mut out = Vec::with_capacity(1 << members.len());
    for mask in 0u64..(1 << members.len()) {
        let mut sub = 0u64;
        for (j, &m) in members.iter().enumerate() {
            if mask >> j & 1 == 1 {
                sub |= 1 << m;
            }
        }
        out.push(sub);
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_iter() {
        assert_eq!(full(0), 0);
        assert_eq!(full(3), 0b111);
        assert_eq!(iter(0b1010).collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn subsets_of_three() {
        let subs = subsets(0b101);
        assert_eq!(subs, vec![0b000, 0b001, 0b100, 0b101]);
    }
}
