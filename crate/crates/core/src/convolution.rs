//! Convolution algebras `L^X`, subset (complex) algebras, and the maps
//! between them.
//!
//! For a join-mode relation `R` of arity `n` the operation is
//!
//! ```text
//! f(α_1..α_n)(x) = ⋁ { α_1(x_1) ∧ … ∧ α_n(x_n) : (x_1..x_n, x) ∈ R }
//! ```
//!
//! and a meet-mode relation `S` gives the dual
//!
//! ```text
//! g(α_1..α_n)(x) = ⋀ { α_1(x_1) ∨ … ∨ α_n(x_n) : (x_1..x_n, x) ∈ S }
//! ```
//!
//! The empty join is bottom and the empty meet is top, everywhere. That single
//! convention covers nullary operations and points without predecessors.

use rand::RngCore;
use serde_json::Value;

use crate::algebra::{check_arity, check_raw_size, Algebra};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, LatticeMorphism};
use crate::relstruct::{check_p_morphism, Mode, RelStructure, Signature};

/// An element of `L^X`: `values[x]` is the lattice element at point `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LFunction(Vec<Elem>);

impl LFunction {
    pub fn new(values: Vec<Elem>) -> Self {
        LFunction(values)
    }

    pub fn constant(value: Elem, carrier: usize) -> Self {
        LFunction(vec![value; carrier])
    }

    pub fn values(&self) -> &[Elem] {
        &self.0
    }

    pub fn get(&self, x: usize) -> Elem {
        self.0[x]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses a JSON-style literal: one label per carrier point.
    pub fn from_labels<S: AsRef<str>>(lattice: &FiniteLattice, labels: &[S]) -> Result<Self> {
        labels
            .iter()
            .map(|l| lattice.element(l.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(LFunction)
    }

    pub fn to_labels(&self, lattice: &FiniteLattice) -> Vec<String> {
        self.0.iter().map(|&e| lattice.label(e).to_string()).collect()
    }
}

/// `L^X`, optionally restricted to order-preserving functions.
#[derive(Debug, Clone)]
pub struct ConvAlgebra {
    lattice: FiniteLattice,
    structure: RelStructure,
    ordered: bool,
}

impl ConvAlgebra {
    pub fn new(lattice: FiniteLattice, structure: RelStructure) -> Self {
        ConvAlgebra {
            lattice,
            structure,
            ordered: false,
        }
    }

    /// The subalgebra of order-preserving functions; needs an ordered structure.
    pub fn ordered(lattice: FiniteLattice, structure: RelStructure) -> Result<Self> {
        if structure.order().is_none() {
            return Err(Error::NotOrdered);
        }
        Ok(ConvAlgebra {
            lattice,
            structure,
            ordered: true,
        })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn structure(&self) -> &RelStructure {
        &self.structure
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    pub fn carrier(&self) -> usize {
        self.structure.carrier()
    }

    pub fn constant(&self, value: Elem) -> LFunction {
        LFunction::constant(value, self.carrier())
    }

    pub fn check_function(&self, f: &LFunction) -> Result<()> {
        if f.len() != self.carrier() {
            return Err(Error::LengthMismatch {
                expected: self.carrier(),
                found: f.len(),
            });
        }
        if let Some(&bad) = f.values().iter().find(|&&v| v >= self.lattice.size()) {
            return Err(Error::IndexOutOfRange {
                context: "function value".into(),
                index: bad,
                bound: self.lattice.size(),
            });
        }
        Ok(())
    }

    pub fn is_order_preserving(&self, f: &LFunction) -> bool {
        match self.structure.order() {
            None => true,
            Some(order) => order
                .strict_pairs()
                .into_iter()
                .all(|(a, b)| self.lattice.leq(f.get(a), f.get(b))),
        }
    }

    fn check_args(&self, i: usize, args: &[LFunction]) -> Result<()> {
        if i >= self.structure.signature().len() {
            return Err(Error::UnknownRelation(format!("#{i}")));
        }
        check_arity(self.structure.signature(), i, args.len())?;
        args.iter().try_for_each(|a| self.check_function(a))
    }

    fn check_mode(&self, i: usize, expected: Mode) -> Result<()> {
        let spec = self.structure.signature().get(i);
        if spec.mode != expected {
            return Err(Error::WrongMode {
                relation: spec.name.clone(),
                expected,
                found: spec.mode,
            });
        }
        Ok(())
    }

    /// Operation of a join-mode relation.
    pub fn conv_op(&self, i: usize, args: &[LFunction]) -> Result<LFunction> {
        self.check_args(i, args)?;
        self.check_mode(i, Mode::Join)?;
        Ok(self.convolve(i, args))
    }

    /// Operation of a meet-mode relation.
    pub fn dual_conv_op(&self, i: usize, args: &[LFunction]) -> Result<LFunction> {
        self.check_args(i, args)?;
        self.check_mode(i, Mode::Meet)?;
        Ok(self.convolve(i, args))
    }

    fn convolve(&self, i: usize, args: &[LFunction]) -> LFunction {
        let l = &self.lattice;
        let rel = self.structure.relation(i);
        let mode = self.structure.signature().get(i).mode;
        let values = (0..self.carrier())
            .map(|x| {
                let preds = rel.predecessors(x).iter();
                match mode {
                    Mode::Join => l.join_all(preds.map(|t| {
                        l.meet_all(t.iter().zip(args).map(|(&xk, a)| a.get(xk)))
                    })),
                    Mode::Meet => l.meet_all(preds.map(|t| {
                        l.join_all(t.iter().zip(args).map(|(&xk, a)| a.get(xk)))
                    })),
                }
            })
            .collect();
        LFunction(values)
    }

    fn pointwise(&self, a: &LFunction, b: &LFunction, f: impl Fn(Elem, Elem) -> Elem) -> LFunction {
        LFunction(a.0.iter().zip(&b.0).map(|(&x, &y)| f(x, y)).collect())
    }

    /// Enumerates `L^X` lexicographically, point 0 most significant, with
    /// lattice elements in build order. Order-preserving filter applies when
    /// the algebra is ordered.
    pub fn enumerate_functions(&self, cap: u64) -> Result<impl Iterator<Item = LFunction> + '_> {
        check_raw_size(self.raw_size(), cap)?;
        Ok(FunctionIter::new(self.lattice.size(), self.carrier())
            .filter(move |f| !self.ordered || self.is_order_preserving(f)))
    }
}

/// Lexicographic odometer over `base^len` value vectors.
struct FunctionIter {
    base: usize,
    next: Option<Vec<Elem>>,
}

impl FunctionIter {
    fn new(base: usize, len: usize) -> Self {
        FunctionIter {
            base,
            next: Some(vec![0; len]),
        }
    }
}

impl Iterator for FunctionIter {
    type Item = LFunction;

    fn next(&mut self) -> Option<LFunction> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.base {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(LFunction(current))
    }
}

impl Algebra for ConvAlgebra {
    type Elem = LFunction;

    fn signature(&self) -> &Signature {
        self.structure.signature()
    }

    fn bottom(&self) -> LFunction {
        self.constant(self.lattice.bottom())
    }

    fn top(&self) -> LFunction {
        self.constant(self.lattice.top())
    }

    fn meet(&self, a: &LFunction, b: &LFunction) -> LFunction {
        self.pointwise(a, b, |x, y| self.lattice.meet(x, y))
    }

    fn join(&self, a: &LFunction, b: &LFunction) -> LFunction {
        self.pointwise(a, b, |x, y| self.lattice.join(x, y))
    }

    fn leq(&self, a: &LFunction, b: &LFunction) -> bool {
        a.0.iter().zip(&b.0).all(|(&x, &y)| self.lattice.leq(x, y))
    }

    /// Pointwise Heyting implication. In the ordered algebra the value at `x`
    /// is the meet of the pointwise implications over everything above `x`.
    fn implies(&self, a: &LFunction, b: &LFunction) -> Result<LFunction> {
        let l = &self.lattice;
        let pointwise = (0..self.carrier())
            .map(|x| l.heyting_implies(a.get(x), b.get(x)))
            .collect::<Result<Vec<_>>>()?;
        match (self.ordered, self.structure.order()) {
            (true, Some(order)) => {
                let n = self.carrier();
                Ok(LFunction(
                    (0..n)
                        .map(|x| l.meet_all((0..n).filter(|&y| order.le(x, y)).map(|y| pointwise[y])))
                        .collect(),
                ))
            }
            _ => Ok(LFunction(pointwise)),
        }
    }

    fn apply(&self, op: usize, args: &[LFunction]) -> Result<LFunction> {
        check_arity(self.signature(), op, args.len())?;
        Ok(self.convolve(op, args))
    }

    fn raw_size(&self) -> u128 {
        (self.lattice.size() as u128)
            .checked_pow(self.carrier() as u32)
            .unwrap_or(u128::MAX)
    }

    fn elements(&self, cap: u64) -> Result<Vec<LFunction>> {
        Ok(self.enumerate_functions(cap)?.collect())
    }

    /// Uniform on `L^X`. In the ordered case, values are drawn point by point
    /// along a linear extension, each uniformly above the join of the values
    /// already fixed below it.
    fn sample(&self, rng: &mut dyn RngCore) -> LFunction {
        let l = &self.lattice;
        let n = self.carrier();
        let mut values = vec![l.bottom(); n];
        match (self.ordered, self.structure.order()) {
            (true, Some(order)) => {
                for x in order.linear_extension() {
                    let floor = l.join_all((0..n).filter(|&y| y != x && order.le(y, x)).map(|y| values[y]));
                    let above: Vec<Elem> = (0..l.size()).filter(|&c| l.leq(floor, c)).collect();
                    values[x] = above[(rng.next_u64() % above.len() as u64) as usize];
                }
            }
            _ => {
                for v in values.iter_mut() {
                    *v = (rng.next_u64() % l.size() as u64) as usize;
                }
            }
        }
        LFunction(values)
    }

    fn describe(&self, e: &LFunction) -> Value {
        Value::from(e.to_labels(&self.lattice))
    }
}

/// A set of carrier points as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u64);

impl Subset {
    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> Self {
        Subset(points.into_iter().fold(0, |acc, x| acc | 1 << x))
    }

    pub fn points(self, carrier: usize) -> Vec<usize> {
        (0..carrier).filter(|&x| self.contains(x)).collect()
    }
}

/// The complex algebra on the power set of the carrier, or on its up-sets
/// when ordered. Join-mode relations give relational images, meet-mode
/// relations their duals.
#[derive(Debug, Clone)]
pub struct SubsetAlgebra {
    structure: RelStructure,
    ordered: bool,
}

/// Subset algebras use a 64-bit mask per element.
pub const MAX_SUBSET_CARRIER: usize = 64;

impl SubsetAlgebra {
    pub fn new(structure: RelStructure) -> Result<Self> {
        Self::build(structure, false)
    }

    /// The up-set complex algebra of an ordered structure.
    pub fn ordered(structure: RelStructure) -> Result<Self> {
        if structure.order().is_none() {
            return Err(Error::NotOrdered);
        }
        Self::build(structure, true)
    }

    fn build(structure: RelStructure, ordered: bool) -> Result<Self> {
        if structure.carrier() > MAX_SUBSET_CARRIER {
            return Err(Error::IndexOutOfRange {
                context: "subset algebra carrier".into(),
                index: structure.carrier(),
                bound: MAX_SUBSET_CARRIER,
            });
        }
        Ok(SubsetAlgebra { structure, ordered })
    }

    pub fn structure(&self) -> &RelStructure {
        &self.structure
    }

    fn full(&self) -> u64 {
        let n = self.structure.carrier();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    pub fn is_up_set(&self, s: Subset) -> bool {
        match self.structure.order() {
            None => true,
            Some(order) => order
                .strict_pairs()
                .into_iter()
                .all(|(a, b)| !s.contains(a) || s.contains(b)),
        }
    }

    pub fn complex_op(&self, i: usize, args: &[Subset]) -> Result<Subset> {
        if i >= self.structure.signature().len() {
            return Err(Error::UnknownRelation(format!("#{i}")));
        }
        check_arity(self.structure.signature(), i, args.len())?;
        Ok(self.image(i, args))
    }

    fn image(&self, i: usize, args: &[Subset]) -> Subset {
        let rel = self.structure.relation(i);
        let mode = self.structure.signature().get(i).mode;
        Subset::from_points((0..self.structure.carrier()).filter(|&x| {
            let mut preds = rel.predecessors(x).iter();
            match mode {
                Mode::Join => preds.any(|t| t.iter().zip(args).all(|(&xk, a)| a.contains(xk))),
                Mode::Meet => preds.all(|t| t.iter().zip(args).any(|(&xk, a)| a.contains(xk))),
            }
        }))
    }
}

impl Algebra for SubsetAlgebra {
    type Elem = Subset;

    fn signature(&self) -> &Signature {
        self.structure.signature()
    }

    fn bottom(&self) -> Subset {
        Subset(0)
    }

    fn top(&self) -> Subset {
        Subset(self.full())
    }

    fn meet(&self, a: &Subset, b: &Subset) -> Subset {
        Subset(a.0 & b.0)
    }

    fn join(&self, a: &Subset, b: &Subset) -> Subset {
        Subset(a.0 | b.0)
    }

    fn leq(&self, a: &Subset, b: &Subset) -> bool {
        a.0 & !b.0 == 0
    }

    /// `¬a ∪ b`, shrunk to the largest up-set inside it when ordered.
    fn implies(&self, a: &Subset, b: &Subset) -> Result<Subset> {
        let boolean = Subset(!a.0 & self.full() | b.0);
        match (self.ordered, self.structure.order()) {
            (true, Some(order)) => {
                let n = self.structure.carrier();
                Ok(Subset::from_points((0..n).filter(|&x| {
                    (0..n).all(|y| !order.le(x, y) || boolean.contains(y))
                })))
            }
            _ => Ok(boolean),
        }
    }

    fn apply(&self, op: usize, args: &[Subset]) -> Result<Subset> {
        check_arity(self.signature(), op, args.len())?;
        Ok(self.image(op, args))
    }

    fn raw_size(&self) -> u128 {
        1u128 << self.structure.carrier()
    }

    fn elements(&self, cap: u64) -> Result<Vec<Subset>> {
        check_raw_size(self.raw_size(), cap)?;
        Ok((0..=self.full())
            .map(Subset)
            .filter(|&s| !self.ordered || self.is_up_set(s))
            .collect())
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Subset {
        let s = Subset(rng.next_u64() & self.full());
        if !self.ordered {
            return s;
        }
        // Close upwards; every up-set arises this way.
        let order = self.structure.order().expect("ordered algebra has an order");
        let n = self.structure.carrier();
        Subset::from_points((0..n).filter(|&y| (0..n).any(|x| s.contains(x) && order.le(x, y))))
    }

    fn describe(&self, e: &Subset) -> Value {
        Value::from(e.points(self.structure.carrier()))
    }
}

/// `α ↦ {x : α(x) = 1}` for functions into the 2-element lattice.
pub fn iso_phi(lattice: &FiniteLattice, alpha: &LFunction) -> Result<Subset> {
    if lattice.size() != 2 {
        return Err(Error::NotTwoElement(lattice.size()));
    }
    if alpha.len() > MAX_SUBSET_CARRIER {
        return Err(Error::IndexOutOfRange {
            context: "subset carrier".into(),
            index: alpha.len(),
            bound: MAX_SUBSET_CARRIER,
        });
    }
    let top = lattice.top();
    Ok(Subset::from_points(
        alpha.values().iter().enumerate().filter(|(_, &v)| v == top).map(|(x, _)| x),
    ))
}

pub fn iso_phi_inv(lattice: &FiniteLattice, subset: Subset, carrier: usize) -> Result<LFunction> {
    if lattice.size() != 2 {
        return Err(Error::NotTwoElement(lattice.size()));
    }
    Ok(LFunction(
        (0..carrier)
            .map(|x| if subset.contains(x) { lattice.top() } else { lattice.bottom() })
            .collect(),
    ))
}

/// `φ ∘ α`. With `validate`, `φ` is first checked to be a lattice morphism.
pub fn lift_lattice_morphism(phi: &LatticeMorphism, alpha: &LFunction, validate: bool) -> Result<LFunction> {
    if validate {
        phi.validate()?;
    }
    if let Some(&bad) = alpha.values().iter().find(|&&v| v >= phi.source.size()) {
        return Err(Error::IndexOutOfRange {
            context: "function value".into(),
            index: bad,
            bound: phi.source.size(),
        });
    }
    Ok(LFunction(alpha.values().iter().map(|&a| phi.apply(a)).collect()))
}

/// A validated p-morphism `source -> target`.
#[derive(Debug, Clone)]
pub struct PMorphism {
    map: Vec<usize>,
    target_carrier: usize,
}

impl PMorphism {
    pub fn new(map: Vec<usize>, source: &RelStructure, target: &RelStructure) -> Result<Self> {
        if let Some(v) = check_p_morphism(&map, source, target)? {
            return Err(Error::NotAPMorphism(v.to_string()));
        }
        Ok(PMorphism {
            map,
            target_carrier: target.carrier(),
        })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_carrier];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.target_carrier).all(|y| self.map.contains(&y))
    }

    /// `β ∘ p`.
    pub fn pull(&self, beta: &LFunction) -> LFunction {
        LFunction(self.map.iter().map(|&x| beta.get(x)).collect())
    }
}

/// `β ∘ p`, after checking that `p` is a p-morphism.
pub fn pullback_pmorphism(
    p: &[usize],
    source: &RelStructure,
    target: &RelStructure,
    beta: &LFunction,
) -> Result<LFunction> {
    let pm = PMorphism::new(p.to_vec(), source, target)?;
    if beta.len() != target.carrier() {
        return Err(Error::LengthMismatch {
            expected: target.carrier(),
            found: beta.len(),
        });
    }
    Ok(pm.pull(beta))
}

/// Splits a function into a product lattice into its two component functions.
pub fn split_product(lattice: &FiniteLattice, alpha: &LFunction) -> Result<(LFunction, LFunction)> {
    let (_, right) = lattice.factors().ok_or(Error::NotAProductLattice)?;
    let m = right.size();
    Ok((
        LFunction(alpha.values().iter().map(|&p| p / m).collect()),
        LFunction(alpha.values().iter().map(|&p| p % m).collect()),
    ))
}

pub fn merge_product(lattice: &FiniteLattice, left: &LFunction, right: &LFunction) -> Result<LFunction> {
    let (_, r) = lattice.factors().ok_or(Error::NotAProductLattice)?;
    if left.len() != right.len() {
        return Err(Error::LengthMismatch {
            expected: left.len(),
            found: right.len(),
        });
    }
    let m = r.size();
    Ok(LFunction(
        left.values().iter().zip(right.values()).map(|(&a, &b)| a * m + b).collect(),
    ))
}

/// The function with value `value` at `x` and bottom elsewhere.
pub fn delta(lattice: &FiniteLattice, carrier: usize, x: usize, value: Elem) -> LFunction {
    let mut values = vec![lattice.bottom(); carrier];
    values[x] = value;
    LFunction(values)
}

/// One-point functions `δ_x` for each `x` with `α(x) ≠ 0`; they join to `α`.
pub fn delta_decompose(lattice: &FiniteLattice, alpha: &LFunction) -> Vec<LFunction> {
    alpha
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != lattice.bottom())
        .map(|(x, &v)| delta(lattice, alpha.len(), x, v))
        .collect()
}

/// The function with value `value` at `x` and top elsewhere.
pub fn co_delta(lattice: &FiniteLattice, carrier: usize, x: usize, value: Elem) -> LFunction {
    let mut values = vec![lattice.top(); carrier];
    values[x] = value;
    LFunction(values)
}

/// One-point functions `ε_x` for each `x` with `α(x) ≠ 1`; they meet to `α`.
pub fn co_delta_decompose(lattice: &FiniteLattice, alpha: &LFunction) -> Vec<LFunction> {
    alpha
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != lattice.top())
        .map(|(x, &v)| co_delta(lattice, alpha.len(), x, v))
        .collect()
}

/// Every function pointwise below `alpha`.
pub fn functions_below(lattice: &FiniteLattice, alpha: &LFunction) -> Vec<LFunction> {
    pointwise_choices(alpha, |a| (0..lattice.size()).filter(|&c| lattice.leq(c, a)).collect())
}

/// Every function pointwise above `alpha`.
pub fn functions_above(lattice: &FiniteLattice, alpha: &LFunction) -> Vec<LFunction> {
    pointwise_choices(alpha, |a| (0..lattice.size()).filter(|&c| lattice.leq(a, c)).collect())
}

fn pointwise_choices(alpha: &LFunction, choices: impl Fn(Elem) -> Vec<Elem>) -> Vec<LFunction> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha.values() {
        let options = choices(a);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(LFunction).collect()
}
