//! Abstract inverse semigroups as multiplication tables.

use crate::report::Report;

/// A finite semigroup with explicit multiplication and inverse tables.
///
/// The tables are not trusted: [`verify_inverse_semigroup`] re-checks every
/// axiom and reports witnesses for failures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InverseSemigroup {
    size: usize,
    /// Row-major `size × size` table of element indices.
    mul: Vec<usize>,
    inv: Vec<usize>,
    unit: Option<usize>,
}

impl InverseSemigroup {
    pub fn from_raw(size: usize, mul: Vec<usize>, inv: Vec<usize>, unit: Option<usize>) -> Self {
        assert_eq!(mul.len(), size * size, "mul table must be size × size");
        assert_eq!(inv.len(), size, "inv table must have one entry per element");
        InverseSemigroup {
            size,
            mul,
            inv,
            unit,
        }
    }

    /// Builds a table from a multiplication function, deriving inverses.
    /// Panics if some element lacks an inverse; use on trusted data.
    pub fn from_mul_fn(size: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let table: Vec<usize> = (0..size * size).map(|k| mul(k / size, k % size)).collect();
        let inv: Vec<usize> = (0..size)
            .map(|s| {
                (0..size)
                    .find(|&t| {
                        table[s * size + t] < size
                            && table[table[s * size + t] * size + s] == s
                            && table[t * size + s] < size
                            && table[table[t * size + s] * size + t] == t
                    })
                    .expect("every element must have an inverse")
            })
            .collect();
        let s = InverseSemigroup {
            size,
            mul: table,
            inv,
            unit: None,
        };
        let unit = find_unit(&s);
        InverseSemigroup { unit, ..s }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn mul_table(&self) -> &[usize] {
        &self.mul
    }

    pub fn inv_table(&self) -> &[usize] {
        &self.inv
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    /// Indices of the idempotents, ascending.
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&s| self.is_idempotent(s)).collect()
    }

    /// Product of a nonempty slice, left to right.
    pub fn product(&self, elems: &[usize]) -> usize {
        let mut acc = elems[0];
        for &e in &elems[1..] {
            acc = self.mul(acc, e);
        }
        acc
    }

    /// Adjoins a fresh two-sided unit as the new last element. A fresh unit
    /// is always added, even if the semigroup already is a monoid.
    pub fn adjoin_unit(&self) -> InverseSemigroup {
        let n = self.size;
        let new = n;
        let size = n + 1;
        let mut mul = vec![0usize; size * size];
        for a in 0..n {
            for b in 0..n {
                mul[a * size + b] = self.mul(a, b);
            }
        }
        for a in 0..size {
            mul[a * size + new] = a;
            mul[new * size + a] = a;
        }
        let mut inv: Vec<usize> = self.inv.clone();
        inv.push(new);
        InverseSemigroup {
            size,
            mul,
            inv,
            unit: Some(new),
        }
    }
}

/// Finds the two-sided neutral element, if any.
pub fn find_unit(s: &InverseSemigroup) -> Option<usize> {
    (0..s.size()).find(|&e| (0..s.size()).all(|x| s.mul(e, x) == x && s.mul(x, e) == x))
}

/// Finds the two-sided absorbing element, if any.
pub fn find_zero(s: &InverseSemigroup) -> Option<usize> {
    (0..s.size()).find(|&z| (0..s.size()).all(|x| s.mul(z, x) == z && s.mul(x, z) == z))
}

/// True iff the index array `f` is a semigroup homomorphism `from → to`.
/// Homomorphisms between inverse semigroups automatically preserve
/// inverses, but the check is included for verification purposes.
pub fn is_homomorphism(f: &[usize], from: &InverseSemigroup, to: &InverseSemigroup) -> bool {
    if f.len() != from.size() || f.iter().any(|&y| y >= to.size()) {
        return false;
    }
    for a in 0..from.size() {
        if f[from.inv(a)] != to.inv(f[a]) {
            return false;
        }
        for b in 0..from.size() {
            if f[from.mul(a, b)] != to.mul(f[a], f[b]) {
                return false;
            }
        }
    }
    true
}

/// Checks associativity, the two inverse equations, commuting idempotents,
/// uniqueness of inverses, and neutrality of a declared unit.
pub fn verify_inverse_semigroup(s: &InverseSemigroup) -> Report {
    let mut report = Report::valid();
    let n = s.size();

    if s.mul_table().iter().any(|&x| x >= n) || s.inv_table().iter().any(|&x| x >= n) {
        report.push("index-range", "table entry out of range".to_string());
        return report;
    }
    if let Some(e) = s.unit() {
        if e >= n {
            report.push("index-range", format!("declared unit {e} out of range"));
            return report;
        }
    }

    'assoc: for a in 0..n {
        for b in 0..n {
            let ab = s.mul(a, b);
            for c in 0..n {
                if s.mul(ab, c) != s.mul(a, s.mul(b, c)) {
                    report.push(
                        "associativity",
                        format!(
                            "({a}·{b})·{c} = {} but {a}·({b}·{c}) = {}",
                            s.mul(ab, c),
                            s.mul(a, s.mul(b, c))
                        ),
                    );
                    break 'assoc;
                }
            }
        }
    }

    for a in 0..n {
        let t = s.inv(a);
        if s.mul(s.mul(a, t), a) != a {
            report.push("inverse-sts", format!("{a}·{t}·{a} ≠ {a}"));
        }
        if s.mul(s.mul(t, a), t) != t {
            report.push("inverse-tst", format!("{t}·{a}·{t} ≠ {t}"));
        }
    }

    let idem = s.idempotents();
    'commute: for &f in &idem {
        for &g in &idem {
            if s.mul(f, g) != s.mul(g, f) {
                report.push(
                    "idempotents-commute",
                    format!("{f}·{g} = {} but {g}·{f} = {}", s.mul(f, g), s.mul(g, f)),
                );
                break 'commute;
            }
        }
    }

    'unique: for a in 0..n {
        for t in 0..n {
            let is_inverse = s.mul(s.mul(a, t), a) == a && s.mul(s.mul(t, a), t) == t;
            if is_inverse && t != s.inv(a) {
                report.push(
                    "unique-inverse",
                    format!("{t} and {} are both inverses of {a}", s.inv(a)),
                );
                break 'unique;
            }
        }
    }

    if let Some(e) = s.unit() {
        for x in 0..n {
            if s.mul(e, x) != x || s.mul(x, e) != x {
                report.push("unit-neutral", format!("declared unit {e} fails on {x}"));
                break;
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn z2_is_a_valid_inverse_semigroup() {
        let z2 = corpus::cyclic_group(2);
        assert!(verify_inverse_semigroup(&z2).is_valid());
        assert_eq!(z2.unit(), Some(0));
        assert_eq!(z2.idempotents(), vec![0]);
    }

    #[test]
    fn left_zero_semigroup_rejected() {
        // xy = x on two elements: both elements are idempotent and
        // ab = a ≠ b = ba.
        let s = InverseSemigroup::from_raw(2, vec![0, 0, 1, 1], vec![0, 1], None);
        let report = verify_inverse_semigroup(&s);
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == "idempotents-commute" || v.axiom == "unique-inverse"));
    }

    #[test]
    fn adjoin_unit_is_fresh_and_neutral() {
        let z2 = corpus::cyclic_group(2);
        let m = z2.adjoin_unit();
        assert_eq!(m.size(), 3);
        assert_eq!(m.unit(), Some(2));
        assert_ne!(m.unit(), z2.unit());
        assert!(verify_inverse_semigroup(&m).is_valid());
        // The original table embeds.
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(m.mul(a, b), z2.mul(a, b));
            }
        }

        let one = corpus::chain_semilattice(1);
        let two = one.adjoin_unit();
        assert_eq!(two.size(), 2);
        assert!(verify_inverse_semigroup(&two).is_valid());
    }

    #[test]
    fn adjoin_unit_valid_across_corpus() {
        for (_, s) in corpus::semigroups() {
            assert!(verify_inverse_semigroup(&s.adjoin_unit()).is_valid());
        }
    }

    #[test]
    fn find_zero_examples() {
        assert_eq!(find_zero(&corpus::cyclic_group(2)), None);
        let chain = corpus::chain_semilattice(3);
        assert_eq!(find_zero(&chain), Some(0));
    }
}
