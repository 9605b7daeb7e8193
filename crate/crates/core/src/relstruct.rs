//! Finite relational structures of (extended) type.
//!
//! A relation of arity `n` has tuples of length `n + 1`; the last coordinate
//! is the output, as in `(x_1, ..., x_n, x)`. Each relation carries a mode:
//! join-mode relations are convolved with joins of meets, meet-mode relations
//! with meets of joins.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::order_closure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Join,
    Meet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelSpec {
    pub name: String,
    /// Number of arguments of the induced operation.
    pub arity: usize,
    pub mode: Mode,
}

impl RelSpec {
    pub fn new(name: impl Into<String>, arity: usize, mode: Mode) -> Self {
        RelSpec {
            name: name.into(),
            arity,
            mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    specs: Vec<RelSpec>,
}

pub(crate) static EMPTY_SIGNATURE: Signature = Signature { specs: Vec::new() };

impl Signature {
    pub fn new(specs: Vec<RelSpec>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &specs {
            if !seen.insert(s.name.as_str()) {
                return Err(Error::DuplicateRelation(s.name.clone()));
            }
        }
        Ok(Signature { specs })
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn get(&self, i: usize) -> &RelSpec {
        &self.specs[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &RelSpec> {
        self.specs.iter()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.specs.iter().position(|s| s.name == name)
    }
}

/// Tuples of one relation, plus an index from each output point to its
/// predecessor argument tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    tuples: BTreeSet<Vec<usize>>,
    preds: Vec<Vec<Vec<usize>>>,
}

impl Relation {
    fn new(carrier: usize, tuples: BTreeSet<Vec<usize>>) -> Self {
        let mut preds = vec![Vec::new(); carrier];
        for t in &tuples {
            let (out, args) = t.split_last().expect("tuples are nonempty");
            preds[*out].push(args.to_vec());
        }
        Relation { tuples, preds }
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<usize>> {
        &self.tuples
    }

    /// Argument tuples `(x_1..x_n)` with `(x_1..x_n, x)` in the relation.
    pub fn predecessors(&self, x: usize) -> &[Vec<usize>] {
        &self.preds[x]
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }
}

/// Partial order on a carrier, stored as a full matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order {
    n: usize,
    leq: Vec<bool>,
}

impl Order {
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    /// All pairs `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && self.le(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Points listed so that every point comes after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..self.n).collect();
        pts.sort_by_key(|&x| (0..self.n).filter(|&y| self.le(y, x)).count());
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelStructure {
    carrier: usize,
    signature: Signature,
    relations: Vec<Relation>,
    order: Option<Order>,
}

impl RelStructure {
    /// Validates and builds a structure. `relations[i]` holds the tuples of
    /// `signature.get(i)`. When an order is given it is closed
    /// reflexively-transitively, and join-mode relations must be up-closed and
    /// meet-mode relations down-closed in the output coordinate.
    pub fn new(
        carrier: usize,
        signature: Signature,
        relations: Vec<Vec<Vec<usize>>>,
        order_pairs: Option<&[(usize, usize)]>,
    ) -> Result<Self> {
        if carrier == 0 {
            return Err(Error::EmptyCarrier);
        }
        if relations.len() != signature.len() {
            return Err(Error::SignatureMismatch);
        }
        let mut built = Vec::with_capacity(relations.len());
        for (spec, tuples) in signature.iter().zip(relations) {
            let mut set = BTreeSet::new();
            for t in tuples {
                if t.len() != spec.arity + 1 {
                    return Err(Error::ArityMismatch {
                        relation: spec.name.clone(),
                        expected: spec.arity + 1,
                        found: t.len(),
                    });
                }
                if let Some(&bad) = t.iter().find(|&&x| x >= carrier) {
                    return Err(Error::IndexOutOfRange {
                        context: format!("relation `{}`", spec.name),
                        index: bad,
                        bound: carrier,
                    });
                }
                set.insert(t);
            }
            built.push(Relation::new(carrier, set));
        }
        let order = match order_pairs {
            None => None,
            Some(pairs) => {
                if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= carrier || b >= carrier) {
                    return Err(Error::IndexOutOfRange {
                        context: "order pair".into(),
                        index: a.max(b),
                        bound: carrier,
                    });
                }
                let leq = order_closure(carrier, pairs).map_err(|(a, b)| Error::NotAPoset {
                    a: a.to_string(),
                    b: b.to_string(),
                })?;
                Some(Order { n: carrier, leq })
            }
        };
        let s = RelStructure {
            carrier,
            signature,
            relations: built,
            order,
        };
        s.check_order_closure()?;
        Ok(s)
    }

    fn check_order_closure(&self) -> Result<()> {
        let Some(order) = &self.order else {
            return Ok(());
        };
        for (spec, rel) in self.signature.iter().zip(&self.relations) {
            for t in rel.tuples() {
                let out = *t.last().unwrap();
                for y in 0..self.carrier {
                    let (needed, closure) = match spec.mode {
                        Mode::Join => (order.le(out, y), "up-closed"),
                        Mode::Meet => (order.le(y, out), "down-closed"),
                    };
                    if needed {
                        let mut moved = t.clone();
                        *moved.last_mut().unwrap() = y;
                        if !rel.contains(&moved) {
                            return Err(Error::OrderNotClosed {
                                relation: spec.name.clone(),
                                closure,
                                tuple: t.clone(),
                                required: moved,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn relation(&self, i: usize) -> &Relation {
        &self.relations[i]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&Relation> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub fn order(&self) -> Option<&Order> {
        self.order.as_ref()
    }

    /// Same carrier and order, keeping only the named relations in the given order.
    pub fn reduct(&self, names: &[&str]) -> Result<RelStructure> {
        let mut specs = Vec::new();
        let mut rels = Vec::new();
        for name in names {
            let i = self
                .signature
                .index_of(name)
                .ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
            specs.push(self.signature.get(i).clone());
            rels.push(self.relations[i].clone());
        }
        Ok(RelStructure {
            carrier: self.carrier,
            signature: Signature::new(specs)?,
            relations: rels,
            order: self.order.clone(),
        })
    }

    /// Same tuples with every relation switched to `mode`.
    pub fn with_mode(&self, mode: Mode) -> RelStructure {
        let specs = self
            .signature
            .iter()
            .map(|s| RelSpec::new(s.name.clone(), s.arity, mode))
            .collect();
        RelStructure {
            carrier: self.carrier,
            signature: Signature { specs },
            relations: self.relations.clone(),
            order: None,
        }
    }

    /// Structure of a group: ternary `*` as `(a, b, a·b)`, binary `inv` as
    /// `(a, a⁻¹)`, unary `e` as `{e}`, all join-mode.
    pub fn from_group(table: &[Vec<usize>]) -> Result<RelStructure> {
        let n = table.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::NotAGroup("table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::NotAGroup("closure fails".into()));
        }
        let mul = |a: usize, b: usize| table[a][b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| Error::NotAGroup("no identity".into()))?;
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul(a, b) == e && mul(b, a) == e)
                .ok_or_else(|| Error::NotAGroup(format!("{a} has no inverse")))?;
            inv.push(b);
        }
        let signature = Signature::new(vec![
            RelSpec::new("*", 2, Mode::Join),
            RelSpec::new("inv", 1, Mode::Join),
            RelSpec::new("e", 0, Mode::Join),
        ])?;
        let mult = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| vec![a, b, mul(a, b)])
            .collect();
        let inverses = (0..n).map(|a| vec![a, inv[a]]).collect();
        RelStructure::new(n, signature, vec![mult, inverses, vec![vec![e]]], None)
    }

    /// `(X, ∇)` with `∇ = X × X` as a single join-mode relation `f`.
    pub fn full(n: usize) -> Result<RelStructure> {
        let all = all_pairs(n);
        RelStructure::new(
            n,
            Signature::new(vec![RelSpec::new("f", 1, Mode::Join)])?,
            vec![all],
            None,
        )
    }

    /// `(X, ∇, ∇)` of extended type `(1, 1)`: join-mode `dia`, meet-mode `box`.
    pub fn full_extended(n: usize) -> Result<RelStructure> {
        let all = all_pairs(n);
        RelStructure::new(
            n,
            Signature::new(vec![
                RelSpec::new("dia", 1, Mode::Join),
                RelSpec::new("box", 1, Mode::Meet),
            ])?,
            vec![all.clone(), all],
            None,
        )
    }

    /// Disjoint union; points of `other` are shifted by `self.carrier()`.
    pub fn disjoint_union(&self, other: &RelStructure) -> Result<RelStructure> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch);
        }
        let shift = self.carrier;
        let relations = self
            .relations
            .iter()
            .zip(&other.relations)
            .map(|(a, b)| {
                a.tuples
                    .iter()
                    .cloned()
                    .chain(b.tuples.iter().map(|t| t.iter().map(|x| x + shift).collect()))
                    .collect()
            })
            .collect();
        let order = match (&self.order, &other.order) {
            (None, None) => None,
            (a, b) => {
                let mut pairs = a.as_ref().map(Order::strict_pairs).unwrap_or_default();
                pairs.extend(
                    b.as_ref()
                        .map(Order::strict_pairs)
                        .unwrap_or_default()
                        .into_iter()
                        .map(|(x, y)| (x + shift, y + shift)),
                );
                Some(pairs)
            }
        };
        RelStructure::new(
            self.carrier + other.carrier,
            self.signature.clone(),
            relations,
            order.as_deref(),
        )
    }

    pub fn from_doc(doc: &StructureDoc) -> Result<RelStructure> {
        let specs = doc
            .relations
            .iter()
            .map(|r| RelSpec::new(r.name.clone(), r.arity, r.mode))
            .collect();
        let tuples = doc.relations.iter().map(|r| r.tuples.clone()).collect();
        RelStructure::new(
            doc.carrier,
            Signature::new(specs)?,
            tuples,
            doc.order.as_deref(),
        )
    }

    pub fn to_doc(&self) -> StructureDoc {
        StructureDoc {
            carrier: self.carrier,
            relations: self
                .signature
                .iter()
                .zip(&self.relations)
                .map(|(s, r)| RelationDoc {
                    name: s.name.clone(),
                    arity: s.arity,
                    mode: s.mode,
                    tuples: r.tuples.iter().cloned().collect(),
                })
                .collect(),
            order: self.order.as_ref().map(Order::strict_pairs),
        }
    }
}

fn all_pairs(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .flat_map(|a| (0..n).map(move |b| vec![a, b]))
        .collect()
}

/// JSON structure document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub carrier: usize,
    pub relations: Vec<RelationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub name: String,
    pub arity: usize,
    pub mode: Mode,
    pub tuples: Vec<Vec<usize>>,
}

/// Where a candidate p-morphism breaks the predecessor-set condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PMorphismViolation {
    Predecessors {
        relation: String,
        point: usize,
        /// In the target's predecessor set of `p(point)` but not in the image.
        only_in_target: Vec<Vec<usize>>,
        /// In the image of `point`'s predecessors but not in the target's set.
        only_in_image: Vec<Vec<usize>>,
    },
    NotOrderPreserving {
        below: usize,
        above: usize,
    },
}

impl std::fmt::Display for PMorphismViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PMorphismViolation::Predecessors {
                relation,
                point,
                only_in_target,
                only_in_image,
            } => write!(
                f,
                "relation `{relation}` at point {point}: target-only {only_in_target:?}, image-only {only_in_image:?}"
            ),
            PMorphismViolation::NotOrderPreserving { below, above } => {
                write!(f, "{below} <= {above} but images are not ordered")
            }
        }
    }
}

/// Checks the p-morphism condition for `map: source -> target`. For ordered
/// structures the map must also be order preserving.
pub fn check_p_morphism(
    map: &[usize],
    source: &RelStructure,
    target: &RelStructure,
) -> Result<Option<PMorphismViolation>> {
    if source.signature != target.signature {
        return Err(Error::SignatureMismatch);
    }
    if map.len() != source.carrier {
        return Err(Error::LengthMismatch {
            expected: source.carrier,
            found: map.len(),
        });
    }
    if let Some(&bad) = map.iter().find(|&&y| y >= target.carrier) {
        return Err(Error::IndexOutOfRange {
            context: "p-morphism value".into(),
            index: bad,
            bound: target.carrier,
        });
    }
    for (i, spec) in source.signature.iter().enumerate() {
        for x in 0..source.carrier {
            let wanted: BTreeSet<Vec<usize>> = target.relations[i]
                .predecessors(map[x])
                .iter()
                .cloned()
                .collect();
            let image: BTreeSet<Vec<usize>> = source.relations[i]
                .predecessors(x)
                .iter()
                .map(|args| args.iter().map(|&a| map[a]).collect())
                .collect();
            if wanted != image {
                return Ok(Some(PMorphismViolation::Predecessors {
                    relation: spec.name.clone(),
                    point: x,
                    only_in_target: wanted.difference(&image).cloned().collect(),
                    only_in_image: image.difference(&wanted).cloned().collect(),
                }));
            }
        }
    }
    if let (Some(so), Some(to)) = (&source.order, &target.order) {
        for (a, b) in so.strict_pairs() {
            if !to.le(map[a], map[b]) {
                return Ok(Some(PMorphismViolation::NotOrderPreserving {
                    below: a,
                    above: b,
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_p_morphism(map: &[usize], source: &RelStructure, target: &RelStructure) -> Result<bool> {
    Ok(check_p_morphism(map, source, target)?.is_none())
}
