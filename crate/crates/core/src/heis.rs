//! The 4-torsion `H4` of a split level-2 theta group and its Heisenberg
//! subgroups.
//!
//! `H4` is modelled as triples `(s, a, b)` with `s ∈ Z/4` and
//! `(a, b) ∈ F2^g × F2^g` packed into one bitmask as in [`crate::theta`].
//! The product is `(s + s′ + 2⟨b, a′⟩, a + a′, b + b′)`, so the commutator
//! of two lifts is `2·e2` and `μ4 = {(s, 0)}` is central.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::theta::{arf, QuadFormF2, SymplecticF2};

pub const MAX_GENUS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct H4Element {
    pub s: u8,
    /// `a` in the low `g` bits, `b` above.
    pub p: u64,
}

#[derive(Clone, Debug)]
pub struct H4 {
    space: SymplecticF2,
}

impl H4 {
    pub fn identity(&self) -> H4Element {
        H4Element { s: 0, p: 0 }
    }

    pub fn space(&self) -> &SymplecticF2 {
        &self.space
    }

    pub fn order(&self) -> usize {
        4 * self.space.size()
    }

    pub fn central(&self, s: u8) -> H4Element {
        H4Element { s: s % 4, p: 0 }
    }

    fn inner(&self, x: u64, y: u64) -> u8 {
        // ⟨b, a′⟩ with b the high half of x and a′ the low half of y.
        let g = self.space.genus();
        let mask = (1u64 << g) - 1;
        (((x >> g) & y & mask).count_ones() & 1) as u8
    }

    pub fn mul(&self, x: H4Element, y: H4Element) -> H4Element {
        H4Element {
            s: (x.s + y.s + 2 * self.inner(x.p, y.p)) % 4,
            p: x.p ^ y.p,
        }
    }

    pub fn inverse(&self, x: H4Element) -> H4Element {
        // x² = (2s + 2⟨b, a⟩, 0), so x⁻¹ = x·(x²)⁻¹.
        let sq = self.mul(x, x);
        self.mul(x, self.central(4 - sq.s))
    }

    pub fn commutator(&self, x: H4Element, y: H4Element) -> H4Element {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(xy, self.inverse(yx))
    }

    pub fn element_order(&self, x: H4Element) -> u32 {
        let mut y = x;
        let mut n = 1;
        while y != self.identity() {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    pub fn elements(&self) -> impl Iterator<Item = H4Element> + '_ {
        self.space
            .vectors()
            .flat_map(|p| (0..4u8).map(move |s| H4Element { s, p }))
    }
}

/// `H4` for genus `g`, after checking `x⁴ = 1` and `x² ∈ μ2` throughout.
pub fn build_h4(g: usize) -> Result<H4> {
    if !(1..=MAX_GENUS).contains(&g) {
        return Err(Error::Precondition(format!("genus {g} outside 1..={MAX_GENUS}")));
    }
    let h = H4 {
        space: SymplecticF2::new(g)?,
    };
    for x in h.elements() {
        let sq = h.mul(x, x);
        if sq.p != 0 || sq.s % 2 != 0 || h.mul(sq, sq) != h.identity() {
            return Err(Error::Inconsistent(format!("{x:?} is not 4-torsion with square in μ2")));
        }
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HeisSubgroup {
    pub g: usize,
    /// Sorted.
    pub elements: Vec<H4Element>,
}

impl HeisSubgroup {
    pub fn contains(&self, x: &H4Element) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// Checks closure, `G ∩ μ4 = {0, 2}` and surjectivity onto `A[2]`.
    pub fn validate(&self, h: &H4) -> Result<()> {
        if self.elements.len() != h.order() / 2 {
            return Err(Error::Input(format!("subgroup has {} elements", self.elements.len())));
        }
        for &x in &self.elements {
            for &y in &self.elements {
                if !self.contains(&h.mul(x, y)) {
                    return Err(Error::Input("not closed under multiplication".into()));
                }
            }
        }
        let centre: Vec<u8> = self.elements.iter().filter(|x| x.p == 0).map(|x| x.s).collect();
        if centre != [0, 2] {
            return Err(Error::Input(format!("G ∩ μ4 = {centre:?}")));
        }
        let image: BTreeSet<u64> = self.elements.iter().map(|x| x.p).collect();
        if image.len() != h.space().size() {
            return Err(Error::Input("projection to A[2] is not surjective".into()));
        }
        Ok(())
    }

    pub fn order4_count(&self, h: &H4) -> usize {
        self.elements.iter().filter(|&&x| h.element_order(x) == 4).count()
    }
}

fn closure(h: &H4, gens: &[H4Element]) -> Vec<H4Element> {
    let mut set: BTreeSet<H4Element> = BTreeSet::new();
    set.insert(h.identity());
    let mut frontier = vec![h.identity()];
    while let Some(x) = frontier.pop() {
        for &gen in gens {
            let y = h.mul(x, gen);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// Every Heisenberg subgroup of `H4`, one per splitting of
/// `H4/Z2 → A[2]`. A candidate splitting is fixed by the `s`-bit of the
/// lift of each basis vector; the subgroup generated by `Z2` and these
/// lifts is kept when it is a genuine Heisenberg subgroup.
pub fn enumerate_heisenberg_subgroups(g: usize) -> Result<Vec<HeisSubgroup>> {
    let h = build_h4(g)?;
    let n = 2 * g;
    let found: Vec<HeisSubgroup> = (0..1u64 << n)
        .into_par_iter()
        .filter_map(|bits| {
            let mut gens = vec![h.central(2)];
            gens.extend((0..n).map(|i| H4Element {
                s: ((bits >> i) & 1) as u8,
                p: 1 << i,
            }));
            let cand = HeisSubgroup {
                g,
                elements: closure(&h, &gens),
            };
            cand.validate(&h).ok().map(|_| cand)
        })
        .collect();
    if found.len() != 1 << n {
        return Err(Error::Inconsistent(format!("found {} Heisenberg subgroups, expected {}", found.len(), 1 << n)));
    }
    Ok(found)
}

/// `t_G(x)`: the square of any lift of `x` in `G`, read in `μ2 = {0, 2}`.
pub fn subgroup_to_theta(h: &H4, grp: &HeisSubgroup) -> Result<QuadFormF2> {
    grp.validate(h)?;
    let space = *h.space();
    let mut values = vec![u8::MAX; space.size()];
    for &x in &grp.elements {
        let sq = h.mul(x, x);
        let v = sq.s / 2;
        let slot = &mut values[x.p as usize];
        if *slot != u8::MAX && *slot != v {
            return Err(Error::Inconsistent(format!("lifts of {} have different squares", space.label(x.p))));
        }
        *slot = v;
    }
    let t = QuadFormF2 { g: space.genus(), values };
    if !t.is_refinement() {
        return Err(Error::Inconsistent("t_G does not refine e2".into()));
    }
    Ok(t)
}

/// `G_χ = {g·s | g ∈ G, s ∈ μ4, s ≡ χ(π(g)) mod 2}` for a character
/// `χ: A[2] → μ4/Z2 ≅ F2`.
pub fn twist_by_character(h: &H4, grp: &HeisSubgroup, chi: impl Fn(u64) -> u8) -> HeisSubgroup {
    let mut set = BTreeSet::new();
    for &x in &grp.elements {
        let want = chi(x.p) & 1;
        for s in 0..4u8 {
            if s % 2 == want {
                set.insert(h.mul(x, h.central(s)));
            }
        }
    }
    HeisSubgroup {
        g: grp.g,
        elements: set.into_iter().collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtraspecialClass {
    /// Central product of dihedral groups.
    Plus,
    /// Contains one quaternion factor.
    Minus,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeisRecord {
    pub index: usize,
    pub theta: QuadFormF2,
    pub arf: u8,
    pub order4_elements: usize,
    pub class: ExtraspecialClass,
}

/// Enumeration with the theta characteristic, Arf invariant and
/// order-4 element count of each subgroup.
pub fn heisenberg_records(g: usize) -> Result<Vec<HeisRecord>> {
    let h = build_h4(g)?;
    let mut groups = enumerate_heisenberg_subgroups(g)?;
    groups.sort_by(|a, b| a.elements.cmp(&b.elements));
    let plus_count = plus_order4_count(g);
    groups
        .iter()
        .enumerate()
        .map(|(index, grp)| {
            let theta = subgroup_to_theta(&h, grp)?;
            let order4_elements = grp.order4_count(&h);
            Ok(HeisRecord {
                index,
                arf: arf(&theta),
                theta,
                order4_elements,
                class: if order4_elements == plus_count {
                    ExtraspecialClass::Plus
                } else {
                    ExtraspecialClass::Minus
                },
            })
        })
        .collect()
}

/// Order-4 elements in the `+` extraspecial group of order `2^{1+2g}`:
/// two lifts of each nonzero vector where an even form takes the value 1.
fn plus_order4_count(g: usize) -> usize {
    let total = 1usize << (2 * g);
    let even_zeros = (1usize << (g - 1)) * ((1usize << g) + 1);
    2 * (total - even_zeros)
}
