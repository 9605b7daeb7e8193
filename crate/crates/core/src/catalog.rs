//! Named constructors for lattices, groups and structures.
//!
//! Names are written `head` or `head(arg, ...)`, where arguments are numbers
//! or nested names: `chain(3)`, `product(chain(2),boolean(2))`, `dual(N5)`.
//! Digit suffixes abbreviate a single numeric argument: `chain3`, `Z2`, `B2`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::relstruct::{Mode, RelSpec, RelStructure, Signature};
use crate::termlang::Equation;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Name {
    head: String,
    args: Vec<Name>,
}

impl Name {
    fn parse(text: &str) -> Result<Name> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, rest) = Name::parse_at(&compact)?;
        if !rest.is_empty() {
            return Err(Error::UnknownName(text.to_string()));
        }
        Ok(name.expand_suffix())
    }

    fn parse_at(s: &str) -> Result<(Name, &str)> {
        let end = s.find(['(', ')', ',']).unwrap_or(s.len());
        let head = &s[..end];
        if head.is_empty() {
            return Err(Error::UnknownName(s.to_string()));
        }
        let mut rest = &s[end..];
        let mut args = Vec::new();
        if let Some(inner) = rest.strip_prefix('(') {
            rest = inner;
            loop {
                let (arg, r) = Name::parse_at(rest)?;
                args.push(arg.expand_suffix());
                if let Some(r) = r.strip_prefix(',') {
                    rest = r;
                } else if let Some(r) = r.strip_prefix(')') {
                    rest = r;
                    break;
                } else {
                    return Err(Error::UnknownName(s.to_string()));
                }
            }
        }
        Ok((
            Name {
                head: head.to_string(),
                args,
            },
            rest,
        ))
    }

    /// `chain3` -> `chain(3)`, except for names that are atomic as written.
    fn expand_suffix(self) -> Name {
        const ATOMIC: [&str; 3] = ["M3", "N5", "S3"];
        if !self.args.is_empty() || ATOMIC.contains(&self.head.as_str()) {
            return self;
        }
        let split = self.head.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        if split == 0 || split == self.head.len() {
            return self;
        }
        let (h, digits) = self.head.split_at(split);
        let h = if h == "B" { "boolean" } else { h };
        Name {
            head: h.to_string(),
            args: vec![Name {
                head: digits.to_string(),
                args: vec![],
            }],
        }
    }

    fn number(&self, original: &str) -> Result<usize> {
        if !self.args.is_empty() {
            return Err(Error::UnknownName(original.to_string()));
        }
        self.head
            .parse()
            .map_err(|_| Error::UnknownName(original.to_string()))
    }

    fn single_number(&self, original: &str) -> Result<usize> {
        match self.args.as_slice() {
            [n] => n.number(original),
            _ => Err(Error::UnknownName(original.to_string())),
        }
    }
}

/// Builds a named lattice.
pub fn get_lattice(name: &str) -> Result<FiniteLattice> {
    lattice_from(&Name::parse(name)?, name)
}

fn lattice_from(n: &Name, original: &str) -> Result<FiniteLattice> {
    let unknown = || Error::UnknownName(original.to_string());
    match (n.head.as_str(), n.args.as_slice()) {
        ("chain", _) => chain(n.single_number(original)?),
        ("boolean", _) => boolean(n.single_number(original)?),
        ("M3", []) => m3(),
        ("N5", []) => n5(),
        ("product", [a, b]) => Ok(lattice_from(a, original)?.product(&lattice_from(b, original)?)),
        ("dual", [a]) => Ok(lattice_from(a, original)?.dual()),
        _ => Err(unknown()),
    }
}

/// `n`-element chain. Labels: `0,1` for `n = 2`, `0,m,1` for `n = 3`,
/// `0,c1,..,c{n-2},1` beyond.
pub fn chain(n: usize) -> Result<FiniteLattice> {
    if n == 0 {
        return Err(Error::EmptyLattice);
    }
    let labels: Vec<String> = match n {
        1 => vec!["0".into()],
        2 => vec!["0".into(), "1".into()],
        3 => vec!["0".into(), "m".into(), "1".into()],
        _ => std::iter::once("0".to_string())
            .chain((1..n - 1).map(|i| format!("c{i}")))
            .chain(std::iter::once("1".to_string()))
            .collect(),
    };
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    FiniteLattice::from_pairs(labels, &pairs)
}

/// Largest atom count `boolean` accepts.
pub const MAX_BOOLEAN_ATOMS: usize = 6;

/// Power set of `k` atoms; element `i` is the subset with bitmask `i`.
pub fn boolean(k: usize) -> Result<FiniteLattice> {
    if k > MAX_BOOLEAN_ATOMS {
        return Err(Error::UnknownName(format!("boolean({k})")));
    }
    let size = 1usize << k;
    let labels = (0..size)
        .map(|mask| {
            if mask == 0 {
                "0".to_string()
            } else if mask == size - 1 {
                "1".to_string()
            } else {
                (0..k)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| (b'a' + b as u8) as char)
                    .collect()
            }
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|m| (0..k).filter(move |b| m >> b & 1 == 0).map(move |b| (m, m | 1 << b)))
        .collect();
    FiniteLattice::from_pairs(labels, &pairs)
}

/// The diamond: three pairwise incomparable atoms.
pub fn m3() -> Result<FiniteLattice> {
    FiniteLattice::build(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
}

/// The pentagon: `0 < a < c < 1` and `0 < b < 1`.
pub fn n5() -> Result<FiniteLattice> {
    FiniteLattice::build(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
    )
}

/// Builds a named group structure.
pub fn get_group(name: &str) -> Result<RelStructure> {
    let n = Name::parse(name)?;
    match (n.head.as_str(), n.args.as_slice()) {
        ("Z", _) => cyclic(n.single_number(name)?),
        ("S3", []) => s3(),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

pub fn cyclic(n: usize) -> Result<RelStructure> {
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    RelStructure::from_group(&table)
}

/// Permutations of `{0,1,2}` in lexicographic order, composed right to left.
pub fn s3() -> Result<RelStructure> {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
    let table = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| index([p[q[0]], p[q[1]], p[q[2]]]))
                .collect()
        })
        .collect::<Vec<Vec<usize>>>();
    RelStructure::from_group(&table)
}

/// Builds any named structure: groups, `nabla(n)`, `nabla_ext(n)`,
/// `ordered_chain(n)`, `type2(n)` and `type2_mixed(n)`.
pub fn get_structure(name: &str) -> Result<RelStructure> {
    let n = Name::parse(name)?;
    match n.head.as_str() {
        "Z" | "S3" => get_group(name),
        "nabla" => RelStructure::full(n.single_number(name)?),
        "nabla_ext" => RelStructure::full_extended(n.single_number(name)?),
        "ordered_chain" => ordered_chain(n.single_number(name)?),
        "type2" => Ok(type2_structure(n.single_number(name)?, Type2Variant::Join)?.structure),
        "type2_mixed" => Ok(type2_structure(n.single_number(name)?, Type2Variant::Mixed)?.structure),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Chain `0 < 1 < … < n-1` with join-mode `up = ≤` and meet-mode `down = ≥`,
/// which are up- and down-closed in the output respectively.
pub fn ordered_chain(n: usize) -> Result<RelStructure> {
    let le: Vec<Vec<usize>> = (0..n)
        .flat_map(|a| (a..n).map(move |b| vec![a, b]))
        .collect();
    let ge = le.iter().map(|t| vec![t[1], t[0]]).collect();
    let order: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    RelStructure::new(
        n,
        Signature::new(vec![
            RelSpec::new("up", 1, Mode::Join),
            RelSpec::new("down", 1, Mode::Meet),
        ])?,
        vec![le, ge],
        Some(&order),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type2Variant {
    /// Every relation convolved with joins.
    Join,
    /// Adds meet-mode copies `cap_d`, `cup_d`, `star_d` of the three
    /// non-nullary relations.
    Mixed,
}

/// A discretized type-2 truth-value structure.
#[derive(Debug, Clone)]
pub struct Type2 {
    pub structure: RelStructure,
    /// Display symbol -> relation name.
    pub op_names: BTreeMap<String, String>,
    /// Grid point labels `0, 1/(n-1), …, 1`.
    pub grid_labels: Vec<String>,
}

/// Grid `{0, 1/(n-1), …, 1}` as indices with ternary `cap` (min), ternary
/// `cup` (max), binary `star` (`x ↦ 1-x`), and unary `one0 = {0}`,
/// `one1 = {1}`.
pub fn type2_structure(n: usize, variant: Type2Variant) -> Result<Type2> {
    if n < 2 {
        return Err(Error::InvalidGrid(n));
    }
    let pairs = || (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
    let cap: Vec<Vec<usize>> = pairs().map(|(a, b)| vec![a, b, a.min(b)]).collect();
    let cup: Vec<Vec<usize>> = pairs().map(|(a, b)| vec![a, b, a.max(b)]).collect();
    let star: Vec<Vec<usize>> = (0..n).map(|a| vec![a, n - 1 - a]).collect();
    let mut specs = vec![
        RelSpec::new("cap", 2, Mode::Join),
        RelSpec::new("cup", 2, Mode::Join),
        RelSpec::new("star", 1, Mode::Join),
        RelSpec::new("one0", 0, Mode::Join),
        RelSpec::new("one1", 0, Mode::Join),
    ];
    let mut relations = vec![cap.clone(), cup.clone(), star.clone(), vec![vec![0]], vec![vec![n - 1]]];
    let mut op_names: BTreeMap<String, String> = [("⊓", "cap"), ("⊔", "cup"), ("*", "star"), ("1₀", "one0"), ("1₁", "one1")]
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    if variant == Type2Variant::Mixed {
        specs.extend([
            RelSpec::new("cap_d", 2, Mode::Meet),
            RelSpec::new("cup_d", 2, Mode::Meet),
            RelSpec::new("star_d", 1, Mode::Meet),
        ]);
        relations.extend([cap, cup, star]);
        for (sym, rel) in [("⊓ᵈ", "cap_d"), ("⊔ᵈ", "cup_d"), ("*ᵈ", "star_d")] {
            op_names.insert(sym.to_string(), rel.to_string());
        }
    }
    let grid_labels = (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == n - 1 => "1".to_string(),
            i => {
                let g = gcd(i, n - 1);
                format!("{}/{}", i / g, (n - 1) / g)
            }
        })
        .collect();
    Ok(Type2 {
        structure: RelStructure::new(n, Signature::new(specs)?, relations, None)?,
        op_names,
        grid_labels,
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The lattices exercised by checks that range over "all shipped lattices".
pub fn lattice_pool() -> Vec<(String, FiniteLattice)> {
    [
        "chain(2)",
        "chain(3)",
        "chain(4)",
        "chain(5)",
        "boolean(2)",
        "boolean(3)",
        "M3",
        "N5",
        "dual(N5)",
        "product(chain(2),chain(3))",
    ]
    .iter()
    .map(|n| (n.to_string(), get_lattice(n).expect("pool names are valid")))
    .collect()
}

/// Deterministic pool of small structures: carriers of size 1 to 3, one to
/// three relations of arity 0 to 2 in both modes. Hand-picked entries come
/// first, then pseudo-random ones drawn from `seed`.
pub fn structure_pool(seed: u64) -> Vec<(String, RelStructure)> {
    let mut pool: Vec<(String, RelStructure)> = vec![
        ("Z(2)".into(), cyclic(2).expect("group")),
        ("Z(3)".into(), cyclic(3).expect("group")),
        ("nabla(1)".into(), RelStructure::full(1).expect("valid")),
        ("nabla(3)".into(), RelStructure::full(3).expect("valid")),
        ("nabla_ext(2)".into(), RelStructure::full_extended(2).expect("valid")),
        ("type2(2)".into(), type2_structure(2, Type2Variant::Mixed).expect("valid").structure),
    ];
    let empty = RelStructure::new(
        2,
        Signature::new(vec![
            RelSpec::new("r", 1, Mode::Join),
            RelSpec::new("s", 2, Mode::Meet),
            RelSpec::new("k", 0, Mode::Meet),
        ])
        .expect("distinct names"),
        vec![vec![], vec![], vec![]],
        None,
    )
    .expect("valid");
    pool.push(("empty(2)".into(), empty));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..16 {
        let carrier = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=3);
        let mut specs = Vec::new();
        let mut relations = Vec::new();
        for r in 0..count {
            let arity = rng.gen_range(0..=2);
            let mode = if rng.gen_bool(0.5) { Mode::Join } else { Mode::Meet };
            specs.push(RelSpec::new(format!("r{r}"), arity, mode));
            relations.push(random_relation(&mut rng, carrier, arity + 1, 0.4));
        }
        let s = RelStructure::new(carrier, Signature::new(specs).expect("distinct"), relations, None)
            .expect("in range");
        pool.push((format!("random({seed},{i})"), s));
    }
    pool
}

/// Every tuple of `len` points over `carrier`, each kept with probability `p`.
pub fn random_relation(rng: &mut impl Rng, carrier: usize, len: usize, p: f64) -> Vec<Vec<usize>> {
    all_tuples(carrier, len)
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect()
}

/// All `len`-tuples over `0..carrier` in lexicographic order.
pub fn all_tuples(carrier: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..carrier).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Signature shared by the equation-transfer frames.
pub fn transfer_signature() -> Signature {
    Signature::new(vec![
        RelSpec::new("f", 1, Mode::Join),
        RelSpec::new("g", 2, Mode::Join),
        RelSpec::new("c", 0, Mode::Join),
        RelSpec::new("h", 1, Mode::Meet),
    ])
    .expect("distinct names")
}

/// Frames over [`transfer_signature`] with 1 to 3 points.
pub fn transfer_frames(seed: u64) -> Vec<(String, RelStructure)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for carrier in 1..=3 {
        for i in 0..3 {
            let relations = vec![
                random_relation(&mut rng, carrier, 2, 0.5),
                random_relation(&mut rng, carrier, 3, 0.3),
                random_relation(&mut rng, carrier, 1, 0.5),
                random_relation(&mut rng, carrier, 2, 0.5),
            ];
            let s = RelStructure::new(carrier, transfer_signature(), relations, None).expect("in range");
            out.push((format!("frame({carrier},{i})"), s));
        }
    }
    out
}

fn equations(pairs: &[(&str, &str)]) -> Vec<Equation> {
    pairs
        .iter()
        .map(|(l, r)| Equation::parse(l, r).expect("pool equations parse"))
        .collect()
}

/// Negation-free equations in at most two variables over [`transfer_signature`].
pub fn transfer_equations() -> Vec<Equation> {
    equations(&[
        ("x", "x"),
        ("(op f (join x y))", "(join (op f x) (op f y))"),
        ("(op f (meet x y))", "(meet (op f x) (op f y))"),
        ("(join x (op f x))", "(op f x)"),
        ("(join (op f (op f x)) (op f x))", "(op f x)"),
        ("(op g x y)", "(op g y x)"),
        ("(op g x bot)", "bot"),
        ("(op h (meet x y))", "(meet (op h x) (op h y))"),
        ("(op h top)", "top"),
        ("(op f (op c))", "(op c)"),
        ("(meet (op f x) (op h y))", "(meet (op f (meet x (op h y))) (op h y))"),
        ("(op g (op g x y) x)", "(op g x (op g y x))"),
        ("(op h (op f x))", "(op f (op h x))"),
        ("(op g x (op c))", "x"),
        ("(meet x (op h x))", "(op h x)"),
    ])
}

/// Equations in the group signature `*`, `inv`, `e`.
pub fn group_equations() -> Vec<Equation> {
    equations(&[
        ("x", "x"),
        ("(op * x (op * y z))", "(op * (op * x y) z)"),
        ("(op * x (join y z))", "(join (op * x y) (op * x z))"),
        ("(op * x (op e))", "x"),
        ("(op inv (op inv x))", "x"),
        ("(op * x y)", "(op * y x)"),
        ("(op inv (op * x y))", "(op * (op inv y) (op inv x))"),
        ("(op * x x)", "x"),
        ("(op inv (meet x y))", "(meet (op inv x) (op inv y))"),
        ("(join x (op * x x))", "(op * x x)"),
    ])
}

/// Candidate equations for the type-2 structures, written with the
/// relation names `cap`, `cup`, `star`, `one0`, `one1`.
pub fn type2_equations() -> Vec<Equation> {
    equations(&[
        ("(op cap x y)", "(op cap y x)"),
        ("(op cup x y)", "(op cup y x)"),
        ("(op star (op star x))", "x"),
        ("(op star (op cap x y))", "(op cup (op star x) (op star y))"),
        ("(op cap x (op one1))", "x"),
        ("(op cup x (op one0))", "x"),
        ("(op cap x x)", "x"),
        ("(op cap x (op cup x y))", "x"),
        ("(op cap x (op cap x y))", "(op cap x y)"),
        ("(op star (op one0))", "(op one1)"),
        ("(op cap x (op cup y y))", "(op cup (op cap x y) (op cap x y))"),
        ("(meet x (op cap x y))", "(op cap x (meet x y))"),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: &'static str,
    pub params: &'static str,
}

pub fn list() -> Vec<CatalogEntry> {
    let e = |name, kind, params| CatalogEntry { name, kind, params };
    vec![
        e("chain", "lattice", "n: integer >= 1"),
        e("boolean", "lattice", "k: integer 0..=6"),
        e("M3", "lattice", ""),
        e("N5", "lattice", ""),
        e("product", "lattice", "a: lattice, b: lattice"),
        e("dual", "lattice", "a: lattice"),
        e("Z", "group", "n: integer >= 1"),
        e("S3", "group", ""),
        e("nabla", "structure", "n: integer >= 1"),
        e("ordered_chain", "structure", "n: integer >= 1"),
        e("nabla_ext", "extended-structure", "n: integer >= 1"),
        e("type2", "extended-structure", "n: integer >= 2"),
        e("type2_mixed", "extended-structure", "n: integer >= 2"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_names() {
        let two = get_lattice("chain(2)").unwrap();
        assert_eq!(two.labels(), ["0", "1"]);
        assert_eq!(get_lattice("chain3").unwrap().labels(), ["0", "m", "1"]);
        assert_eq!(get_lattice("chain(5)").unwrap().labels(), ["0", "c1", "c2", "c3", "1"]);
        let b2 = get_lattice("boolean(2)").unwrap();
        assert!(b2.is_boolean());
        assert_eq!(b2.labels(), ["0", "a", "b", "1"]);
        assert_eq!(get_lattice("B2").unwrap().labels(), b2.labels());
        assert!(!get_lattice("N5").unwrap().is_distributive());
        assert!(!get_lattice("M3").unwrap().is_distributive());
        let p = get_lattice("product(chain(2), chain(3))").unwrap();
        assert_eq!(p.size(), 6);
        assert!(p.factors().is_some());
        assert!(!get_lattice("dual(N5)").unwrap().is_distributive());
        for bad in ["chain", "foo", "chain(x)", "product(M3)", "chain(2", "boolean(9)"] {
            assert!(get_lattice(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn groups() {
        let z3 = get_group("Z(3)").unwrap();
        assert_eq!(z3.carrier(), 3);
        assert_eq!(get_group("Z2").unwrap().carrier(), 2);
        let s3 = get_group("S3").unwrap();
        assert_eq!(s3.carrier(), 6);
        let mult = s3.relation_by_name("*").unwrap();
        let commutes = (0..6).all(|a| {
            (0..6).all(|b| {
                let ab = mult.tuples().iter().find(|t| t[0] == a && t[1] == b).unwrap()[2];
                let ba = mult.tuples().iter().find(|t| t[0] == b && t[1] == a).unwrap()[2];
                ab == ba
            })
        });
        assert!(!commutes);
        assert!(matches!(get_group("Q8"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn type2_grid() {
        let t = type2_structure(3, Type2Variant::Join).unwrap();
        assert_eq!(t.grid_labels, ["0", "1/2", "1"]);
        let s = &t.structure;
        let star = s.relation_by_name("star").unwrap();
        for tup in star.tuples() {
            assert!(star.contains(&[tup[1], tup[0]]));
        }
        for name in ["cap", "cup"] {
            let r = s.relation_by_name(name).unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(r.tuples().iter().filter(|t| t[0] == a && t[1] == b).count(), 1);
                }
            }
        }
        assert_eq!(t.op_names["⊔"], "cup");
        assert!(matches!(type2_structure(1, Type2Variant::Join), Err(Error::InvalidGrid(1))));
        let mixed = type2_structure(2, Type2Variant::Mixed).unwrap();
        assert_eq!(mixed.structure.signature().len(), 8);
    }

    #[test]
    fn deterministic_builds() {
        let a: Vec<_> = structure_pool(0).into_iter().map(|(n, s)| (n, s.to_doc())).collect();
        let b: Vec<_> = structure_pool(0).into_iter().map(|(n, s)| (n, s.to_doc())).collect();
        assert_eq!(
            serde_json::to_string(&a.iter().map(|x| &x.1).collect::<Vec<_>>()).unwrap(),
            serde_json::to_string(&b.iter().map(|x| &x.1).collect::<Vec<_>>()).unwrap()
        );
        assert!(a.len() >= 20);
        assert_eq!(
            get_lattice("N5").unwrap().to_canonical_doc(),
            get_lattice("N5").unwrap().to_canonical_doc()
        );
    }

    #[test]
    fn pool_shape() {
        let pool = structure_pool(0);
        assert!(pool
            .iter()
            .all(|(_, s)| s.carrier() <= 3 && s.signature().iter().all(|r| r.arity <= 2)));
        let has_nullary = pool.iter().any(|(_, s)| s.signature().iter().any(|r| r.arity == 0));
        let has_meet = pool.iter().any(|(_, s)| s.signature().iter().any(|r| r.mode == Mode::Meet));
        assert!(has_nullary && has_meet);
        assert!(transfer_equations().len() >= 10);
        assert!(type2_equations().len() >= 8);
        for eq in transfer_equations() {
            eq.check_signature(&transfer_signature()).unwrap();
        }
    }
}
