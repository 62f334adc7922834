//! Paterson's universal groupoid of a finite inverse semigroup: the
//! character space of `E(S)`, its basis topology, the wide representation
//! `ρ_u`, and the germ groupoid `G_u`.

use crate::bits;
use crate::fintop::{generate_topology, FiniteSpace};
use crate::germs::{germ_groupoid, GermError, GermGroupoid};
use crate::invsemi::{InverseSemigroup, PartialBijection};
use crate::repr::Representation;

/// The space of nonzero multiplicative functions `E(S) → {0,1}`.
#[derive(Debug, Clone)]
pub struct CharacterSpace {
    /// Idempotents of `S`, ascending; characters are bitmasks over these
    /// positions.
    pub idempotents: Vec<usize>,
    /// Characters sorted ascending as bitmasks.
    pub characters: Vec<u64>,
    /// Topology generated by the sets `D_f ∩ (X∖D_{f₁}) ∩ … ∩ (X∖D_{fₙ})`
    /// over all tuples with `f·fᵢ = fᵢ`.
    pub topology: FiniteSpace,
}

impl CharacterSpace {
    /// `D_s = {x : x(ss*) = 1}`, as a bitset of character indices.
    pub fn d_set(&self, s: &InverseSemigroup, element: usize) -> u64 {
        let target = s.mul(element, s.inv(element));
        let position = self
            .idempotents
            .binary_search(&target)
            .expect("ss* is idempotent");
        bits::from_iter(
            self.characters
                .iter()
                .enumerate()
                .filter(|(_, &chi)| bits::contains(chi, position))
                .map(|(i, _)| i),
        )
    }
}

/// Enumerates all characters of `E(S)` (filtering the `2^|E|` candidate
/// maps by multiplicativity) and generates the basis topology.
pub fn character_space(s: &InverseSemigroup) -> CharacterSpace {
    let idempotents = s.idempotents();
    let k = idempotents.len();
    assert!(k <= 16, "character enumeration is capped at 16 idempotents");
    let position: std::collections::HashMap<usize, usize> = idempotents
        .iter()
        .enumerate()
        .map(|(i, &f)| (f, i))
        .collect();

    let mut characters: Vec<u64> = Vec::new();
    for mask in 1u64..(1 << k) {
        let multiplicative = (0..k).all(|i| {
            (0..k).all(|j| {
                let product = s.mul(idempotents[i], idempotents[j]);
                let value = bits::contains(mask, i) && bits::contains(mask, j);
                bits::contains(mask, position[&product]) == value
            })
        });
        if multiplicative {
            characters.push(mask);
        }
    }

    let n = characters.len();
    assert!(n <= 20, "character space is capped at 20 points");
    let d_of_idem = |f: usize| -> u64 {
        let pos = position[&f];
        bits::from_iter(
            characters
                .iter()
                .enumerate()
                .filter(|(_, &chi)| bits::contains(chi, pos))
                .map(|(i, _)| i),
        )
    };

    // All tuples (f; f₁…fₙ): f an idempotent, the fᵢ drawn from the
    // idempotents below f. Duplicates are removed by bitset identity.
    let universe = bits::full(n);
    let mut basis: Vec<u64> = Vec::new();
    for &f in &idempotents {
        let below: Vec<usize> = idempotents
            .iter()
            .copied()
            .filter(|&fi| s.mul(f, fi) == fi)
            .collect();
        let d_f = d_of_idem(f);
        for subset_mask in 0u64..(1 << below.len()) {
            let mut set = d_f;
            for (i, &fi) in below.iter().enumerate() {
                if bits::contains(subset_mask, i) {
                    set &= universe & !d_of_idem(fi);
                }
            }
            basis.push(set);
        }
    }
    basis.sort_unstable();
    basis.dedup();

    CharacterSpace {
        idempotents,
        characters,
        topology: generate_topology(n, &basis),
    }
}

/// The representation `ρ_u(s) : D_s → D_{s*}` sending `x` to
/// `y(f) = x(s·f·s*)`.
pub fn universal_representation(s: &InverseSemigroup) -> (CharacterSpace, Representation) {
    let space = character_space(s);
    let position: std::collections::HashMap<usize, usize> = space
        .idempotents
        .iter()
        .enumerate()
        .map(|(i, &f)| (f, i))
        .collect();
    let assign: Vec<PartialBijection> = (0..s.size())
        .map(|el| {
            let pairs: Vec<(usize, usize)> = bits::iter(space.d_set(s, el))
                .map(|xi| {
                    let chi = space.characters[xi];
                    let mut image = 0u64;
                    for (i, &f) in space.idempotents.iter().enumerate() {
                        let conj = s.mul(s.mul(el, f), s.inv(el));
                        if bits::contains(chi, position[&conj]) {
                            image |= 1 << i;
                        }
                    }
                    let yi = space
                        .characters
                        .binary_search(&image)
                        .expect("conjugate of a character is a character");
                    (xi, yi)
                })
                .collect();
            PartialBijection::from_pairs(space.characters.len(), &pairs)
                .expect("ρ_u(s) is a bijection D_s → D_s*")
        })
        .collect();
    let rep = Representation::new(s.clone(), space.topology.clone(), assign);
    (space, rep)
}

/// The universal groupoid: the germ groupoid of `ρ_u`.
pub fn universal_groupoid(s: &InverseSemigroup) -> Result<GermGroupoid, GermError> {
    let (_, rep) = universal_representation(s);
    germ_groupoid(&rep)
}
