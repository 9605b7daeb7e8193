//! Finite bounded lattices.
//!
//! Elements are dense indices `0..size`. The order matrix and the meet, join
//! and (when distributive) Heyting implication tables are computed once at
//! construction; every later operation is a table lookup.
//!
//! Every finite lattice is complete, and for finite lattices meet-continuity,
//! complete distributivity and plain distributivity coincide. The checkers
//! elsewhere in the crate lean on this: "distributive" is the only hypothesis
//! they ever test.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a lattice element.
pub type Elem = usize;

/// Reflexive-transitive closure of `pairs` on `0..n`, as a row-major matrix.
///
/// Returns the first antisymmetry violation found, if any.
pub(crate) fn order_closure(
    n: usize,
    pairs: &[(usize, usize)],
) -> std::result::Result<Vec<bool>, (usize, usize)> {
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for &(a, b) in pairs {
        leq[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if leq[a * n + b] && leq[b * n + a] {
                return Err((a, b));
            }
        }
    }
    Ok(leq)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    labels: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    implies: Option<Vec<Elem>>,
    bottom: Elem,
    top: Elem,
    distributive: bool,
    boolean: bool,
    factors: Option<Box<(FiniteLattice, FiniteLattice)>>,
}

impl FiniteLattice {
    /// Builds the lattice whose order is the reflexive-transitive closure of
    /// `order_pairs`, given as `(lower, upper)` label pairs.
    pub fn build<S: AsRef<str>>(labels: &[S], order_pairs: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()))
        };
        let pairs = order_pairs
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(labels, &pairs)
    }

    /// Same as [`FiniteLattice::build`] with the order given on indices.
    pub fn from_pairs(labels: Vec<String>, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::IndexOutOfRange {
                context: "order pair".into(),
                index: a.max(b),
                bound: n,
            });
        }
        let leq = order_closure(n, pairs).map_err(|(a, b)| Error::NotAPoset {
            a: labels[a].clone(),
            b: labels[b].clone(),
        })?;
        Self::from_order(labels, leq)
    }

    /// Builds from a full order matrix that is already a partial order.
    fn from_order(labels: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = labels.len();
        let le = |a: usize, b: usize| leq[a * n + b];
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let glb = (0..n)
                    .filter(|&c| le(c, a) && le(c, b))
                    .fold(None, |best: Option<usize>, c| match best {
                        Some(g) if le(c, g) => Some(g),
                        _ => Some(c),
                    })
                    .filter(|&g| (0..n).all(|c| !(le(c, a) && le(c, b)) || le(c, g)));
                let lub = (0..n)
                    .filter(|&c| le(a, c) && le(b, c))
                    .fold(None, |best: Option<usize>, c| match best {
                        Some(g) if le(g, c) => Some(g),
                        _ => Some(c),
                    })
                    .filter(|&g| (0..n).all(|c| !(le(a, c) && le(b, c)) || le(g, c)));
                let (Some(g), Some(l)) = (glb, lub) else {
                    return Err(Error::NotALattice {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        missing: if glb.is_none() {
                            "greatest lower bound"
                        } else {
                            "least upper bound"
                        },
                    });
                };
                meet[a * n + b] = g;
                meet[b * n + a] = g;
                join[a * n + b] = l;
                join[b * n + a] = l;
            }
        }
        let bottom = (1..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (1..n).fold(0, |acc, x| join[acc * n + x]);
        let mut lattice = FiniteLattice {
            labels,
            leq,
            meet,
            join,
            implies: None,
            bottom,
            top,
            distributive: false,
            boolean: false,
            factors: None,
        };
        lattice.classify();
        Ok(lattice)
    }

    fn classify(&mut self) {
        let n = self.size();
        self.distributive = (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
                })
            })
        });
        self.boolean = self.distributive && (0..n).all(|a| self.complement(a).is_some());
        self.implies = self.distributive.then(|| {
            let mut table = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    table[a * n + b] =
                        self.join_all((0..n).filter(|&c| self.leq(self.meet(a, c), b)));
                }
            }
            table
        });
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    pub fn element(&self, label: &str) -> Result<Elem> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.size() + b]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.size() + b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.size() + b]
    }

    /// Meet of any number of elements; the empty meet is top.
    pub fn meet_all(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of any number of elements; the empty join is bottom.
    pub fn join_all(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Range-checked greatest lower bound of a set of elements.
    pub fn meet_of(&self, elems: &[Elem]) -> Result<Elem> {
        self.check_all(elems)?;
        Ok(self.meet_all(elems.iter().copied()))
    }

    /// Range-checked least upper bound of a set of elements.
    pub fn join_of(&self, elems: &[Elem]) -> Result<Elem> {
        self.check_all(elems)?;
        Ok(self.join_all(elems.iter().copied()))
    }

    fn check_all(&self, elems: &[Elem]) -> Result<()> {
        match elems.iter().find(|&&e| e >= self.size()) {
            Some(&e) => Err(Error::UnknownElement(format!("#{e}"))),
            None => Ok(()),
        }
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    pub fn is_boolean(&self) -> bool {
        self.boolean
    }

    pub fn complement(&self, a: Elem) -> Option<Elem> {
        (0..self.size())
            .find(|&b| self.meet(a, b) == self.bottom && self.join(a, b) == self.top)
    }

    /// Relative pseudocomplement `a -> b`, the largest `c` with `a ∧ c <= b`.
    pub fn heyting_implies(&self, a: Elem, b: Elem) -> Result<Elem> {
        let table = self.implies.as_ref().ok_or(Error::NotHeyting)?;
        Ok(table[a * self.size() + b])
    }

    /// Pseudocomplement `¬a = a -> 0`.
    pub fn pseudocomplement(&self, a: Elem) -> Result<Elem> {
        self.heyting_implies(a, self.bottom)
    }

    /// Order dual: same elements and labels, order reversed.
    pub fn dual(&self) -> FiniteLattice {
        let n = self.size();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq(b, a);
            }
        }
        let mut dual = FiniteLattice {
            labels: self.labels.clone(),
            leq,
            meet: self.join.clone(),
            join: self.meet.clone(),
            implies: None,
            bottom: self.top,
            top: self.bottom,
            distributive: false,
            boolean: false,
            factors: self
                .factors
                .as_ref()
                .map(|f| Box::new((f.0.dual(), f.1.dual()))),
        };
        dual.classify();
        dual
    }

    /// Cartesian product with the componentwise order. The pair `(a, b)` has
    /// index `a * other.size() + b`.
    pub fn product(&self, other: &FiniteLattice) -> FiniteLattice {
        let (n, m) = (self.size(), other.size());
        let labels = (0..n * m)
            .map(|p| format!("({},{})", self.labels[p / m], other.labels[p % m]))
            .collect();
        let mut leq = vec![false; n * m * n * m];
        for p in 0..n * m {
            for q in 0..n * m {
                leq[p * n * m + q] = self.leq(p / m, q / m) && other.leq(p % m, q % m);
            }
        }
        let mut product =
            FiniteLattice::from_order(labels, leq).expect("product of lattices is a lattice");
        product.factors = Some(Box::new((self.clone(), other.clone())));
        product
    }

    /// The two factors, when this lattice was built by [`FiniteLattice::product`].
    pub fn factors(&self) -> Option<(&FiniteLattice, &FiniteLattice)> {
        self.factors.as_deref().map(|(a, b)| (a, b))
    }

    /// Smallest bounded sublattice containing `generators`, with its inclusion map.
    pub fn generated_sublattice(&self, generators: &[Elem]) -> Result<Sublattice> {
        self.check_all(generators)?;
        let mut set: BTreeSet<Elem> = generators.iter().copied().collect();
        set.insert(self.bottom);
        set.insert(self.top);
        loop {
            let current: Vec<Elem> = set.iter().copied().collect();
            let mut grew = false;
            for &a in &current {
                for &b in &current {
                    grew |= set.insert(self.meet(a, b));
                    grew |= set.insert(self.join(a, b));
                }
            }
            if !grew {
                break;
            }
        }
        let embedding: Vec<Elem> = set.into_iter().collect();
        let k = embedding.len();
        let mut leq = vec![false; k * k];
        for (i, &a) in embedding.iter().enumerate() {
            for (j, &b) in embedding.iter().enumerate() {
                leq[i * k + j] = self.leq(a, b);
            }
        }
        let labels = embedding.iter().map(|&a| self.labels[a].clone()).collect();
        let lattice = FiniteLattice::from_order(labels, leq)?;
        Ok(Sublattice { lattice, embedding })
    }

    pub fn from_doc(doc: &LatticeDoc) -> Result<Self> {
        FiniteLattice::build(&doc.labels, &doc.leq)
    }

    /// Canonical document: labels sorted, every pair of the order listed.
    pub fn to_canonical_doc(&self) -> LatticeDoc {
        let mut labels = self.labels.clone();
        labels.sort();
        let mut leq = Vec::new();
        for a in &labels {
            for b in &labels {
                let (x, y) = (self.element(a).unwrap(), self.element(b).unwrap());
                if self.leq(x, y) {
                    leq.push((a.clone(), b.clone()));
                }
            }
        }
        LatticeDoc { labels, leq }
    }
}

/// A sublattice together with its inclusion into the parent lattice.
#[derive(Debug, Clone)]
pub struct Sublattice {
    pub lattice: FiniteLattice,
    /// `embedding[i]` is the parent element of sublattice element `i`.
    pub embedding: Vec<Elem>,
}

/// JSON lattice document: `{"labels": [...], "leq": [["a","b"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub labels: Vec<String>,
    pub leq: Vec<(String, String)>,
}

/// A map between finite lattices given as an element table.
#[derive(Debug, Clone)]
pub struct LatticeMorphism {
    pub source: FiniteLattice,
    pub target: FiniteLattice,
    map: Vec<Elem>,
}

impl LatticeMorphism {
    pub fn new(source: FiniteLattice, target: FiniteLattice, map: Vec<Elem>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::LengthMismatch {
                expected: source.size(),
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&b| b >= target.size()) {
            return Err(Error::IndexOutOfRange {
                context: "morphism value".into(),
                index: bad,
                bound: target.size(),
            });
        }
        Ok(LatticeMorphism {
            source,
            target,
            map,
        })
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    pub fn table(&self) -> &[Elem] {
        &self.map
    }

    /// Checks preservation of bounds and binary meets and joins. On finite
    /// lattices this already gives preservation of arbitrary meets and joins.
    pub fn validate(&self) -> Result<()> {
        let (src, tgt) = (&self.source, &self.target);
        if self.apply(src.bottom()) != tgt.bottom() {
            return Err(Error::NotAMorphism("bottom not preserved".into()));
        }
        if self.apply(src.top()) != tgt.top() {
            return Err(Error::NotAMorphism("top not preserved".into()));
        }
        for a in 0..src.size() {
            for b in 0..src.size() {
                let (fa, fb) = (self.apply(a), self.apply(b));
                if self.apply(src.meet(a, b)) != tgt.meet(fa, fb) {
                    return Err(Error::NotAMorphism(format!(
                        "meet of {} and {} not preserved",
                        src.label(a),
                        src.label(b)
                    )));
                }
                if self.apply(src.join(a, b)) != tgt.join(fa, fb) {
                    return Err(Error::NotAMorphism(format!(
                        "join of {} and {} not preserved",
                        src.label(a),
                        src.label(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        let image: BTreeSet<Elem> = self.map.iter().copied().collect();
        image.len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        let image: BTreeSet<Elem> = self.map.iter().copied().collect();
        image.len() == self.target.size()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FiniteLattice {
        FiniteLattice::build(&["0", "m", "1"], &[("0", "m"), ("m", "1")]).unwrap()
    }

    fn diamond(atoms: &[&str]) -> FiniteLattice {
        let mut labels = vec!["0"];
        labels.extend_from_slice(atoms);
        labels.push("1");
        let mut pairs = Vec::new();
        for a in atoms {
            pairs.push(("0", *a));
            pairs.push((*a, "1"));
        }
        FiniteLattice::build(&labels, &pairs).unwrap()
    }

    fn n5() -> FiniteLattice {
        FiniteLattice::build(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        )
        .unwrap()
    }

    // Independent distributivity scan over labels, used as an oracle.
    fn has_distributivity_violation(l: &FiniteLattice) -> Option<(Elem, Elem, Elem)> {
        let n = l.size();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = l.meet(a, l.join(b, c));
                    let rhs = l.join(l.meet(a, b), l.meet(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    #[test]
    fn three_chain_is_distributive_not_boolean() {
        let l = chain3();
        assert_eq!(l.size(), 3);
        assert!(l.is_distributive());
        assert!(!l.is_boolean());
        assert_eq!(l.bottom(), 0);
        assert_eq!(l.top(), 2);
    }

    #[test]
    fn m3_is_not_distributive() {
        let m3 = diamond(&["a", "b", "c"]);
        assert!(!m3.is_distributive());
        let (a, b, c) = (1, 2, 3);
        assert_eq!(m3.meet(a, m3.join(b, c)), a);
        assert_eq!(m3.join(m3.meet(a, b), m3.meet(a, c)), m3.bottom());
        assert!(has_distributivity_violation(&m3).is_some());
    }

    #[test]
    fn cycle_is_rejected() {
        let err = FiniteLattice::build(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::NotAPoset { .. }));
    }

    #[test]
    fn missing_bounds_are_reported() {
        let err = FiniteLattice::build(&["a", "b"], &[]).unwrap_err();
        match err {
            Error::NotALattice { a, b, missing } => {
                assert_eq!((a.as_str(), b.as_str()), ("a", "b"));
                assert_eq!(missing, "greatest lower bound");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_label_in_pairs() {
        let err = FiniteLattice::build(&["a"], &[("a", "z")]).unwrap_err();
        assert!(matches!(err, Error::UnknownElement(_)));
    }

    #[test]
    fn meets_and_joins_of_sets() {
        let l = chain3();
        assert_eq!(l.meet_of(&[1, 2]).unwrap(), 1);
        assert_eq!(l.join_of(&[]).unwrap(), l.bottom());
        assert_eq!(l.meet_of(&[]).unwrap(), l.top());
        let m3 = diamond(&["a", "b", "c"]);
        assert_eq!(m3.join_of(&[1, 2]).unwrap(), m3.top());
        assert!(matches!(l.meet_of(&[7]), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn heyting_on_chain() {
        let l = chain3();
        assert_eq!(l.heyting_implies(1, 0).unwrap(), 0);
        assert_eq!(l.pseudocomplement(1).unwrap(), 0);
        for a in 0..3 {
            assert_eq!(l.heyting_implies(a, a).unwrap(), l.top());
        }
        assert!(matches!(n5().heyting_implies(1, 2), Err(Error::NotHeyting)));
    }

    #[test]
    fn residuation_on_small_distributive_lattices() {
        let b2 = diamond(&["a", "b"]);
        let b3 = {
            let two = FiniteLattice::build(&["0", "1"], &[("0", "1")]).unwrap();
            two.product(&two).product(&two)
        };
        for l in [chain3(), b2, b3, chain3().product(&chain3())] {
            assert!(l.size() <= 9);
            let n = l.size();
            for a in 0..n {
                for b in 0..n {
                    let imp = l.heyting_implies(a, b).unwrap();
                    for c in 0..n {
                        assert_eq!(l.leq(l.meet(a, c), b), l.leq(c, imp));
                    }
                }
            }
        }
    }

    #[test]
    fn dual_and_product() {
        let l = chain3();
        let d = l.dual();
        assert_eq!(d.bottom(), 2);
        assert_eq!(d.top(), 0);
        assert!(d.leq(2, 1) && d.leq(1, 0));
        assert_eq!(d.dual(), l);

        let two = FiniteLattice::build(&["0", "1"], &[("0", "1")]).unwrap();
        let b2 = two.product(&two);
        assert_eq!(b2.size(), 4);
        assert!(b2.is_boolean());
        assert_eq!(b2.dual().dual(), b2);
        let (f, g) = b2.factors().unwrap();
        assert_eq!((f.size(), g.size()), (2, 2));
    }

    #[test]
    fn lattice_laws_by_exhaustive_scan() {
        for l in [chain3(), n5(), diamond(&["a", "b", "c"]), diamond(&["a", "b"])] {
            let n = l.size();
            for a in 0..n {
                assert!(l.leq(l.bottom(), a) && l.leq(a, l.top()));
                for b in 0..n {
                    assert_eq!(l.meet(a, b), l.meet(b, a));
                    assert_eq!(l.join(a, l.meet(a, b)), a);
                    assert_eq!(l.meet(a, l.join(a, b)), a);
                    for c in 0..n {
                        assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
                        assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
                    }
                }
            }
            assert_eq!(
                l.is_distributive(),
                has_distributivity_violation(&l).is_none()
            );
            let has_complements =
                (0..n).all(|a| (0..n).any(|b| l.meet(a, b) == 0 && l.join(a, b) == n - 1));
            assert_eq!(l.is_boolean(), l.is_distributive() && has_complements);
        }
    }

    #[test]
    fn generated_sublattices() {
        let b2 = diamond(&["a", "b"]);
        let sub = b2.generated_sublattice(&[1]).unwrap();
        assert_eq!(sub.embedding, vec![0, 1, 3]);
        assert!(sub.lattice.is_distributive() && !sub.lattice.is_boolean());

        let trivial = b2.generated_sublattice(&[]).unwrap();
        assert_eq!(trivial.embedding, vec![0, 3]);

        let all = b2.generated_sublattice(&[0, 1, 2, 3]).unwrap();
        assert_eq!(all.lattice, b2);

        // Inclusion preserves operations, and dropping any non-generator
        // element breaks closure.
        let m3 = diamond(&["a", "b", "c"]);
        let sub = m3.generated_sublattice(&[1, 2]).unwrap();
        let emb = &sub.embedding;
        for i in 0..emb.len() {
            for j in 0..emb.len() {
                assert_eq!(emb[sub.lattice.meet(i, j)], m3.meet(emb[i], emb[j]));
                assert_eq!(emb[sub.lattice.join(i, j)], m3.join(emb[i], emb[j]));
            }
        }
        for &drop in emb.iter().filter(|&&e| e != 1 && e != 2) {
            let rest: BTreeSet<Elem> = emb.iter().copied().filter(|&e| e != drop).collect();
            let closed = rest.iter().all(|&a| {
                rest.iter()
                    .all(|&b| rest.contains(&m3.meet(a, b)) && rest.contains(&m3.join(a, b)))
            });
            let bounded = rest.contains(&m3.bottom()) && rest.contains(&m3.top());
            assert!(!(closed && bounded));
        }
    }

    #[test]
    fn canonical_doc_round_trip() {
        let l = n5();
        let doc = l.to_canonical_doc();
        let mut sorted = doc.labels.clone();
        sorted.sort();
        assert_eq!(doc.labels, sorted);
        let again = FiniteLattice::from_doc(&doc).unwrap();
        assert_eq!(again.to_canonical_doc(), doc);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.starts_with("{\"labels\":["));
    }

    #[test]
    fn morphism_validation() {
        let c3 = chain3();
        let two = FiniteLattice::build(&["0", "1"], &[("0", "1")]).unwrap();
        let up = LatticeMorphism::new(c3.clone(), two.clone(), vec![0, 1, 1]).unwrap();
        assert!(up.validate().is_ok());
        let down = LatticeMorphism::new(c3.clone(), two.clone(), vec![0, 0, 1]).unwrap();
        assert!(down.validate().is_ok());
        assert!(down.is_surjective() && !down.is_injective());
        let bad = LatticeMorphism::new(c3, two, vec![0, 1, 0]).unwrap();
        assert!(matches!(bad.validate(), Err(Error::NotAMorphism(_))));
    }
}
