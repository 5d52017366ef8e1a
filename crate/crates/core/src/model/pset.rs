//! Finite pointed sets and basepoint-preserving maps.
//!
//! A point is its index in a fixed enumeration of the object, the basepoint
//! being 0. Smash products, wedges, cartesian products and pointed function
//! spaces are all enumerated by mixed-radix arithmetic, so equal points are
//! equal integers.

use super::{SObj, SmcBackend};

#[derive(Clone, Copy, Debug, Default)]
pub struct PointedSets;

impl PointedSets {
    fn card(&self, o: &SObj) -> Option<u128> {
        match o {
            SObj::Unit => Some(2),
            SObj::Atom(n) => Some((*n).max(1) as u128),
            SObj::Tensor(a, b) => (self.card(a)? - 1).checked_mul(self.card(b)? - 1)?.checked_add(1),
            SObj::Hom(a, b) => {
                let e = u32::try_from(self.card(a)? - 1).ok()?;
                self.card(b)?.checked_pow(e)
            }
            SObj::Prod(ps) => ps.iter().try_fold(1u128, |acc, p| acc.checked_mul(self.card(p)?)),
            SObj::Coprod(ps) => ps.iter().try_fold(1u128, |acc, p| acc.checked_add(self.card(p)? - 1)),
        }
    }

    fn c(&self, o: &SObj) -> u128 {
        self.card(o).expect("object admitted without a finite size")
    }
}

impl SmcBackend for PointedSets {
    type Elem = u128;

    fn name(&self) -> &'static str {
        "pset"
    }

    fn atom_min(&self) -> u32 {
        1
    }

    fn size(&self, o: &SObj) -> Option<u128> {
        self.card(o)
    }

    fn ngens(&self, o: &SObj) -> usize {
        (self.c(o) - 1) as usize
    }

    fn gen(&self, _: &SObj, k: usize) -> u128 {
        k as u128 + 1
    }

    fn coords(&self, _: &SObj, e: &u128) -> Vec<usize> {
        if *e == 0 {
            vec![]
        } else {
            vec![(*e - 1) as usize]
        }
    }

    fn zero(&self, _: &SObj) -> u128 {
        0
    }

    fn sum(&self, _: &SObj, es: &[u128]) -> u128 {
        let mut live = es.iter().filter(|e| **e != 0);
        let first = live.next().copied().unwrap_or(0);
        debug_assert!(live.next().is_none(), "two non-base points summed");
        first
    }

    fn npoints(&self, o: &SObj) -> Option<u128> {
        self.card(o)
    }

    fn point(&self, _: &SObj, i: u128) -> u128 {
        i
    }

    fn point_index(&self, _: &SObj, e: &u128) -> u128 {
        *e
    }

    fn tuple(&self, parts: &[SObj], es: &[u128]) -> u128 {
        parts.iter().zip(es).fold(0, |acc, (p, e)| acc * self.c(p) + e)
    }

    fn proj(&self, parts: &[SObj], e: &u128, i: usize) -> u128 {
        let below: u128 = parts[i + 1..].iter().map(|p| self.c(p)).product();
        (e / below) % self.c(&parts[i])
    }

    fn hom(&self, _: &SObj, b: &SObj, images: &[u128]) -> u128 {
        let cb = self.c(b);
        images.iter().fold(0, |acc, y| acc * cb + y)
    }

    fn hom_images(&self, a: &SObj, b: &SObj, f: &u128) -> Vec<u128> {
        let cb = self.c(b);
        let n = self.ngens(a);
        let mut out = vec![0; n];
        let mut rest = *f;
        for slot in out.iter_mut().rev() {
            *slot = rest % cb;
            rest /= cb;
        }
        out
    }
}
