//! Finite-dimensional vector spaces over the two-element field.
//!
//! A vector is a bit vector in the standard basis of its object. Tensors use
//! the Kronecker ordering, products and coproducts are both the direct sum,
//! and `a ⊸ b` stores the images of the basis of `a` one after another.

use super::{SObj, SmcBackend};

#[derive(Clone, Copy, Debug, Default)]
pub struct Gf2;

/// Global elements are enumerated only for spaces up to this dimension.
const POINT_DIM_LIMIT: usize = 16;

impl Gf2 {
    fn dim(&self, o: &SObj) -> Option<usize> {
        match o {
            SObj::Unit => Some(1),
            SObj::Atom(n) => Some(*n as usize),
            SObj::Tensor(a, b) | SObj::Hom(a, b) => self.dim(a)?.checked_mul(self.dim(b)?),
            SObj::Prod(ps) | SObj::Coprod(ps) => ps.iter().try_fold(0usize, |acc, p| acc.checked_add(self.dim(p)?)),
        }
    }

    fn d(&self, o: &SObj) -> usize {
        self.dim(o).expect("object admitted without a finite dimension")
    }
}

impl SmcBackend for Gf2 {
    type Elem = Vec<bool>;

    fn name(&self) -> &'static str {
        "gf2"
    }

    fn atom_min(&self) -> u32 {
        0
    }

    fn size(&self, o: &SObj) -> Option<u128> {
        self.dim(o).map(|d| d as u128)
    }

    fn ngens(&self, o: &SObj) -> usize {
        self.d(o)
    }

    fn gen(&self, o: &SObj, k: usize) -> Vec<bool> {
        let mut v = vec![false; self.d(o)];
        v[k] = true;
        v
    }

    fn coords(&self, _: &SObj, e: &Vec<bool>) -> Vec<usize> {
        e.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect()
    }

    fn zero(&self, o: &SObj) -> Vec<bool> {
        vec![false; self.d(o)]
    }

    fn sum(&self, o: &SObj, es: &[Vec<bool>]) -> Vec<bool> {
        let mut acc = self.zero(o);
        for e in es {
            for (a, b) in acc.iter_mut().zip(e) {
                *a ^= *b;
            }
        }
        acc
    }

    fn npoints(&self, o: &SObj) -> Option<u128> {
        let d = self.dim(o)?;
        if d >= 127 {
            None
        } else {
            Some(1u128 << d)
        }
    }

    fn points(&self, o: &SObj) -> Result<Vec<Vec<bool>>, super::ModelError> {
        let d = self.d(o);
        if d > POINT_DIM_LIMIT {
            return Err(super::ModelError::TooLarge(format!("all vectors of a {}-dimensional space", d)));
        }
        Ok((0..1u128 << d).map(|i| self.point(o, i)).collect())
    }

    fn point(&self, o: &SObj, i: u128) -> Vec<bool> {
        (0..self.d(o)).map(|k| (i >> k) & 1 == 1).collect()
    }

    fn point_index(&self, _: &SObj, e: &Vec<bool>) -> u128 {
        e.iter().enumerate().filter(|(_, b)| **b).map(|(k, _)| 1u128 << k).sum()
    }

    fn tuple(&self, _: &[SObj], es: &[Vec<bool>]) -> Vec<bool> {
        es.concat()
    }

    fn proj(&self, parts: &[SObj], e: &Vec<bool>, i: usize) -> Vec<bool> {
        let off: usize = parts[..i].iter().map(|p| self.d(p)).sum();
        e[off..off + self.d(&parts[i])].to_vec()
    }

    fn hom(&self, _: &SObj, _: &SObj, images: &[Vec<bool>]) -> Vec<bool> {
        images.concat()
    }

    fn hom_images(&self, a: &SObj, b: &SObj, f: &Vec<bool>) -> Vec<Vec<bool>> {
        let db = self.d(b);
        (0..self.d(a)).map(|k| f[k * db..(k + 1) * db].to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Mor;

    #[test]
    fn dimensions_follow_the_formers() {
        let g = Gf2;
        let (a, b) = (SObj::Atom(2), SObj::Atom(3));
        assert_eq!(g.size(&SObj::tensor(a.clone(), b.clone())), Some(6));
        assert_eq!(g.size(&SObj::hom(a.clone(), b.clone())), Some(6));
        assert_eq!(g.size(&SObj::Prod(vec![a.clone(), b.clone()])), Some(5));
        assert_eq!(g.size(&SObj::Coprod(vec![a, b])), Some(5));
        assert_eq!(g.size(&SObj::top()), Some(0));
    }

    #[test]
    fn global_elements_are_all_vectors() {
        let g = Gf2;
        for d in 0..=4 {
            assert_eq!(g.points(&SObj::Atom(d)).unwrap().len(), 1 << d);
        }
    }

    #[test]
    fn kronecker_product_of_vectors() {
        let g = Gf2;
        let (a, b) = (SObj::Atom(2), SObj::Atom(2));
        let x = vec![true, true];
        let y = vec![false, true];
        assert_eq!(g.tensor(&a, &b, &x, &y), vec![false, true, false, true]);
        assert_eq!(g.untensor(&a, &b, &g.tensor(&a, &b, &x, &y)).len(), 2);
    }

    fn all_maps(g: &Gf2, a: &SObj, b: &SObj) -> Vec<Mor<Vec<bool>>> {
        let h = SObj::hom(a.clone(), b.clone());
        g.points(&h)
            .unwrap()
            .into_iter()
            .map(|f| Mor {
                dom: a.clone(),
                cod: b.clone(),
                images: g.hom_images(a, b, &f),
            })
            .collect()
    }

    #[test]
    fn composition_is_associative_and_unital() {
        let g = Gf2;
        let a = SObj::Atom(2);
        let all = all_maps(&g, &a, &a);
        for f in &all {
            assert_eq!(Mor::identity(&g, &a).after(&g, f), *f);
            for h in &all {
                for k in &all {
                    assert_eq!(k.after(&g, &h.after(&g, f)), k.after(&g, h).after(&g, f));
                }
            }
        }
    }

    #[test]
    fn tensor_is_functorial() {
        let g = Gf2;
        let a = SObj::Atom(2);
        let all = all_maps(&g, &a, &a);
        for f in all.iter().step_by(3) {
            for h in all.iter().step_by(2) {
                for p in all.iter().step_by(5) {
                    for q in all.iter().step_by(7) {
                        let lhs = f.after(&g, h).tensor(&g, &p.after(&g, q));
                        let rhs = f.tensor(&g, p).after(&g, &h.tensor(&g, q));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn injections_of_two_differ() {
        let g = Gf2;
        let two = [SObj::Unit, SObj::Unit];
        let tt = g.inject(&two, 0, &g.unit());
        let ff = g.inject(&two, 1, &g.unit());
        assert_eq!(tt, vec![true, false]);
        assert_eq!(ff, vec![false, true]);
    }
}
