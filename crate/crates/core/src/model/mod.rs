//! Families models. A closed type denotes, for every point of the finite set
//! of intuitionistic environments, an object of a finite symmetric monoidal
//! category; a term denotes a morphism out of the tensor of its linear
//! context. Two categories are provided: finite pointed sets with the smash
//! product ([`PointedSets`]) and finite-dimensional GF(2) vector spaces with
//! the tensor product ([`Gf2`]).
//!
//! Objects are kept in a strict normal form ([`SObj`]) that records how they
//! were built, so elements can be taken apart structurally without chasing
//! coherence isomorphisms.

mod config;
mod gf2;
mod interp;
mod pset;

pub use config::{Config, ConfigError};
pub use gf2::Gf2;
pub use interp::{Denotation, Interp, Point};
pub use pset::PointedSets;

use std::fmt::Debug;
use std::hash::Hash;

/// Objects in normal form. `Prod([])` is terminal and `Coprod([])` initial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SObj {
    /// The monoidal unit.
    Unit,
    /// A base object: a pointed set with that many points, or a space of that
    /// dimension.
    Atom(u32),
    Tensor(Box<SObj>, Box<SObj>),
    Hom(Box<SObj>, Box<SObj>),
    Prod(Vec<SObj>),
    Coprod(Vec<SObj>),
}

impl SObj {
    pub fn top() -> SObj {
        SObj::Prod(vec![])
    }

    pub fn initial() -> SObj {
        SObj::Coprod(vec![])
    }

    pub fn two() -> SObj {
        SObj::Coprod(vec![SObj::Unit, SObj::Unit])
    }

    pub fn tensor(a: SObj, b: SObj) -> SObj {
        SObj::Tensor(Box::new(a), Box::new(b))
    }

    pub fn hom(a: SObj, b: SObj) -> SObj {
        SObj::Hom(Box::new(a), Box::new(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("object too large to enumerate: {0}")]
    TooLarge(String),
    #[error("{0}")]
    Ill(String),
}

/// Largest number of points, generators or environments ever enumerated.
pub const ENUM_LIMIT: u128 = 1 << 16;

/// A finite symmetric monoidal category with finite products, coproducts and
/// internal homs, presented through elements.
///
/// Every object has a finite list of generators (the non-base points of a
/// pointed set, the basis of a vector space); a morphism is fixed by the
/// images of the generators, and every element is a sum of generators (in
/// pointed sets, of at most one).
pub trait SmcBackend {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn name(&self) -> &'static str;
    /// Smallest base object a configuration may assign.
    fn atom_min(&self) -> u32;
    /// Points of a pointed set; dimension of a space.
    fn size(&self, o: &SObj) -> Option<u128>;
    fn ngens(&self, o: &SObj) -> usize;
    fn gen(&self, o: &SObj, k: usize) -> Self::Elem;
    /// Indices of the generators summing to `e`.
    fn coords(&self, o: &SObj, e: &Self::Elem) -> Vec<usize>;
    fn zero(&self, o: &SObj) -> Self::Elem;
    fn sum(&self, o: &SObj, es: &[Self::Elem]) -> Self::Elem;
    /// `|Hom(I, o)|`.
    fn npoints(&self, o: &SObj) -> Option<u128>;
    /// The `i`-th global element; `point_index` inverts it.
    fn point(&self, o: &SObj, i: u128) -> Self::Elem;
    fn point_index(&self, o: &SObj, e: &Self::Elem) -> u128;
    fn tuple(&self, parts: &[SObj], es: &[Self::Elem]) -> Self::Elem;
    fn proj(&self, parts: &[SObj], e: &Self::Elem, i: usize) -> Self::Elem;
    /// The element of `a ⊸ b` sending generator `k` of `a` to `images[k]`.
    fn hom(&self, a: &SObj, b: &SObj, images: &[Self::Elem]) -> Self::Elem;
    fn hom_images(&self, a: &SObj, b: &SObj, f: &Self::Elem) -> Vec<Self::Elem>;

    /// Refuse objects too large to work with.
    fn admit(&self, o: &SObj) -> Result<(), ModelError> {
        match self.npoints(o) {
            Some(n) if n <= ENUM_LIMIT * ENUM_LIMIT => Ok(()),
            _ => Err(ModelError::TooLarge(format!("{:?}", o))),
        }
    }

    fn points(&self, o: &SObj) -> Result<Vec<Self::Elem>, ModelError> {
        match self.npoints(o) {
            Some(n) if n <= ENUM_LIMIT => Ok((0..n).map(|i| self.point(o, i)).collect()),
            _ => Err(ModelError::TooLarge(format!("global elements of {:?}", o))),
        }
    }

    fn unit(&self) -> Self::Elem {
        self.gen(&SObj::Unit, 0)
    }

    fn tensor(&self, a: &SObj, b: &SObj, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let t = SObj::tensor(a.clone(), b.clone());
        let nb = self.ngens(b);
        let mut parts = Vec::new();
        for i in self.coords(a, x) {
            for j in self.coords(b, y) {
                parts.push(self.gen(&t, i * nb + j));
            }
        }
        self.sum(&t, &parts)
    }

    /// Write an element of `a ⊗ b` as a sum of generator pairs.
    fn untensor(&self, a: &SObj, b: &SObj, e: &Self::Elem) -> Vec<(Self::Elem, Self::Elem)> {
        let t = SObj::tensor(a.clone(), b.clone());
        let nb = self.ngens(b);
        self.coords(&t, e)
            .into_iter()
            .map(|k| (self.gen(a, k / nb), self.gen(b, k % nb)))
            .collect()
    }

    fn inject(&self, parts: &[SObj], i: usize, e: &Self::Elem) -> Self::Elem {
        let c = SObj::Coprod(parts.to_vec());
        let off: usize = parts[..i].iter().map(|p| self.ngens(p)).sum();
        let gs: Vec<_> = self.coords(&parts[i], e).into_iter().map(|k| self.gen(&c, off + k)).collect();
        self.sum(&c, &gs)
    }

    /// The non-zero components of an element of a coproduct.
    fn cases(&self, parts: &[SObj], e: &Self::Elem) -> Vec<(usize, Self::Elem)> {
        let c = SObj::Coprod(parts.to_vec());
        let mut by_part: Vec<Vec<Self::Elem>> = vec![Vec::new(); parts.len()];
        let offs: Vec<usize> = parts
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += self.ngens(p);
                Some(o)
            })
            .collect();
        for k in self.coords(&c, e) {
            let i = (0..parts.len())
                .find(|&j| offs[j] <= k && k < offs[j] + self.ngens(&parts[j]))
                .expect("coordinate outside every summand");
            by_part[i].push(self.gen(&parts[i], k - offs[i]));
        }
        by_part
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(|(i, v)| (i, self.sum(&parts[i], &v)))
            .collect()
    }

    fn apply(&self, a: &SObj, b: &SObj, f: &Self::Elem, x: &Self::Elem) -> Self::Elem {
        let imgs = self.hom_images(a, b, f);
        let hit: Vec<_> = self.coords(a, x).into_iter().map(|k| imgs[k].clone()).collect();
        self.sum(b, &hit)
    }
}

/// A morphism, given by the images of the generators of its domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mor<E> {
    pub dom: SObj,
    pub cod: SObj,
    pub images: Vec<E>,
}

impl<E: Clone + Eq + Ord + Hash + Debug> Mor<E> {
    pub fn identity<B: SmcBackend<Elem = E>>(b: &B, o: &SObj) -> Self {
        Mor {
            dom: o.clone(),
            cod: o.clone(),
            images: (0..b.ngens(o)).map(|k| b.gen(o, k)).collect(),
        }
    }

    pub fn apply<B: SmcBackend<Elem = E>>(&self, b: &B, x: &E) -> E {
        let hit: Vec<_> = b.coords(&self.dom, x).into_iter().map(|k| self.images[k].clone()).collect();
        b.sum(&self.cod, &hit)
    }

    /// `self ∘ f`.
    pub fn after<B: SmcBackend<Elem = E>>(&self, b: &B, f: &Mor<E>) -> Self {
        Mor {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            images: f.images.iter().map(|y| self.apply(b, y)).collect(),
        }
    }

    pub fn tensor<B: SmcBackend<Elem = E>>(&self, b: &B, g: &Mor<E>) -> Self {
        let mut images = Vec::new();
        for x in &self.images {
            for y in &g.images {
                images.push(b.tensor(&self.cod, &g.cod, x, y));
            }
        }
        Mor {
            dom: SObj::tensor(self.dom.clone(), g.dom.clone()),
            cod: SObj::tensor(self.cod.clone(), g.cod.clone()),
            images,
        }
    }

    /// The morphism as a global element of the internal hom.
    pub fn name<B: SmcBackend<Elem = E>>(&self, b: &B) -> E {
        b.hom(&self.dom, &self.cod, &self.images)
    }
}
