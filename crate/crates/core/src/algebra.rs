//! The common interface terms are evaluated against.
//!
//! A bare [`FiniteLattice`], a convolution algebra, a subset (complex)
//! algebra and products of algebras all implement [`Algebra`]. Operations are
//! addressed by their index in [`Algebra::signature`].

use std::fmt::Debug;

use rand::RngCore;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::relstruct::{Signature, EMPTY_SIGNATURE};

pub trait Algebra: Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn signature(&self) -> &Signature;
    fn bottom(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.meet(a, b) == *a
    }

    /// Heyting implication; fails when the algebra is not Heyting.
    fn implies(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.implies(a, &self.bottom())
    }

    /// Applies operation `op` of the signature.
    fn apply(&self, op: usize, args: &[Self::Elem]) -> Result<Self::Elem>;

    /// Size of the space enumeration walks through before any filtering.
    fn raw_size(&self) -> u128;

    /// All elements in the documented enumeration order. Fails when
    /// [`Algebra::raw_size`] exceeds `cap`.
    fn elements(&self, cap: u64) -> Result<Vec<Self::Elem>>;

    /// One pseudo-random element.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// JSON rendering used in reports and witnesses.
    fn describe(&self, e: &Self::Elem) -> Value;
}

pub(crate) fn check_raw_size(count: u128, cap: u64) -> Result<()> {
    if count > cap as u128 {
        Err(Error::BudgetExceeded { count, cap })
    } else {
        Ok(())
    }
}

pub(crate) fn check_arity(sig: &Signature, op: usize, found: usize) -> Result<()> {
    let spec = sig.get(op);
    if spec.arity != found {
        return Err(Error::ArityMismatch {
            relation: spec.name.clone(),
            expected: spec.arity,
            found,
        });
    }
    Ok(())
}

impl Algebra for FiniteLattice {
    type Elem = Elem;

    fn signature(&self) -> &Signature {
        &EMPTY_SIGNATURE
    }

    fn bottom(&self) -> Elem {
        FiniteLattice::bottom(self)
    }

    fn top(&self) -> Elem {
        FiniteLattice::top(self)
    }

    fn meet(&self, a: &Elem, b: &Elem) -> Elem {
        FiniteLattice::meet(self, *a, *b)
    }

    fn join(&self, a: &Elem, b: &Elem) -> Elem {
        FiniteLattice::join(self, *a, *b)
    }

    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        FiniteLattice::leq(self, *a, *b)
    }

    fn implies(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.heyting_implies(*a, *b)
    }

    fn apply(&self, op: usize, _args: &[Elem]) -> Result<Elem> {
        Err(Error::UnknownOperation(format!("#{op}")))
    }

    fn raw_size(&self) -> u128 {
        self.size() as u128
    }

    fn elements(&self, cap: u64) -> Result<Vec<Elem>> {
        check_raw_size(self.raw_size(), cap)?;
        Ok((0..self.size()).collect())
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Elem {
        (rng.next_u64() % self.size() as u64) as usize
    }

    fn describe(&self, e: &Elem) -> Value {
        Value::String(self.label(*e).to_string())
    }
}

/// Direct product of two algebras over the same signature.
pub struct ProductAlgebra<'a, A, B> {
    pub left: &'a A,
    pub right: &'a B,
}

impl<'a, A: Algebra, B: Algebra> ProductAlgebra<'a, A, B> {
    pub fn new(left: &'a A, right: &'a B) -> Result<Self> {
        let (l, r) = (left.signature(), right.signature());
        let same_shape = l.len() == r.len()
            && l.iter().zip(r.iter()).all(|(x, y)| x.arity == y.arity && x.name == y.name);
        if !same_shape {
            return Err(Error::SignatureMismatch);
        }
        Ok(ProductAlgebra { left, right })
    }
}

impl<A: Algebra, B: Algebra> Algebra for ProductAlgebra<'_, A, B> {
    type Elem = (A::Elem, B::Elem);

    fn signature(&self) -> &Signature {
        self.left.signature()
    }

    fn bottom(&self) -> Self::Elem {
        (self.left.bottom(), self.right.bottom())
    }

    fn top(&self) -> Self::Elem {
        (self.left.top(), self.right.top())
    }

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.meet(&a.0, &b.0), self.right.meet(&a.1, &b.1))
    }

    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.join(&a.0, &b.0), self.right.join(&a.1, &b.1))
    }

    fn implies(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok((
            self.left.implies(&a.0, &b.0)?,
            self.right.implies(&a.1, &b.1)?,
        ))
    }

    fn apply(&self, op: usize, args: &[Self::Elem]) -> Result<Self::Elem> {
        let (ls, rs): (Vec<_>, Vec<_>) = args.iter().cloned().unzip();
        Ok((self.left.apply(op, &ls)?, self.right.apply(op, &rs)?))
    }

    fn raw_size(&self) -> u128 {
        self.left.raw_size().saturating_mul(self.right.raw_size())
    }

    fn elements(&self, cap: u64) -> Result<Vec<Self::Elem>> {
        check_raw_size(self.raw_size(), cap)?;
        let ls = self.left.elements(cap)?;
        let rs = self.right.elements(cap)?;
        Ok(ls
            .iter()
            .flat_map(|a| rs.iter().map(move |b| (a.clone(), b.clone())))
            .collect())
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        let a = self.left.sample(rng);
        (a, self.right.sample(rng))
    }

    fn describe(&self, e: &Self::Elem) -> Value {
        Value::Array(vec![self.left.describe(&e.0), self.right.describe(&e.1)])
    }
}
