//! Terms, equations and validity checking.
//!
//! Grammar (s-expressions):
//!
//! ```text
//! term := NAME | (var NAME) | bot | top
//!       | (meet term term) | (join term term)
//!       | (op NAME term*) | (neg term) | (imp term term)
//! ```
//!
//! `Display` is the canonical printer; printing then parsing is the identity.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::relstruct::Signature;

const KEYWORDS: [&str; 8] = ["var", "bot", "top", "meet", "join", "op", "neg", "imp"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Bot,
    Top,
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Op(String, Vec<Term>),
    Neg(Box<Term>),
    Imp(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn op(name: &str, args: Vec<Term>) -> Term {
        Term::Op(name.to_string(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Imp(Box::new(a), Box::new(b))
    }

    pub fn parse(text: &str) -> Result<Term> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens, pos: 0, end: text.len() };
        let term = parser.term()?;
        if let Some((at, tok)) = parser.tokens.get(parser.pos) {
            return Err(Error::Syntax {
                pos: *at,
                msg: format!("unexpected trailing `{tok}`"),
            });
        }
        Ok(term)
    }

    /// Parses and checks every operation against `sig`.
    pub fn parse_checked(text: &str, sig: &Signature) -> Result<Term> {
        let t = Term::parse(text)?;
        t.check(sig)?;
        Ok(t)
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) | Term::Bot | Term::Top => Ok(()),
            Term::Meet(a, b) | Term::Join(a, b) | Term::Imp(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
            Term::Neg(a) => a.check(sig),
            Term::Op(name, args) => {
                let i = sig
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownOperation(name.clone()))?;
                crate::algebra::check_arity(sig, i, args.len())?;
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Bot | Term::Top => {}
            Term::Meet(a, b) | Term::Join(a, b) | Term::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Neg(a) => a.collect_vars(out),
            Term::Op(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// True when the term avoids `neg` and `imp`.
    pub fn is_negation_free(&self) -> bool {
        match self {
            Term::Var(_) | Term::Bot | Term::Top => true,
            Term::Meet(a, b) | Term::Join(a, b) => a.is_negation_free() && b.is_negation_free(),
            Term::Op(_, args) => args.iter().all(Term::is_negation_free),
            Term::Neg(_) | Term::Imp(..) => false,
        }
    }

    /// Replaces operation names through `map`; names missing from it are kept.
    pub fn rename_ops(&self, map: &BTreeMap<String, String>) -> Term {
        let r = |t: &Term| Box::new(t.rename_ops(map));
        match self {
            Term::Var(_) | Term::Bot | Term::Top => self.clone(),
            Term::Meet(a, b) => Term::Meet(r(a), r(b)),
            Term::Join(a, b) => Term::Join(r(a), r(b)),
            Term::Imp(a, b) => Term::Imp(r(a), r(b)),
            Term::Neg(a) => Term::Neg(r(a)),
            Term::Op(name, args) => Term::Op(
                map.get(name).cloned().unwrap_or_else(|| name.clone()),
                args.iter().map(|a| a.rename_ops(map)).collect(),
            ),
        }
    }

    pub fn compile(&self, sig: &Signature, vars: &[String]) -> Result<Compiled> {
        Ok(Compiled(self.lower(sig, vars)?))
    }

    fn lower(&self, sig: &Signature, vars: &[String]) -> Result<Node> {
        let l = |t: &Term| t.lower(sig, vars).map(Box::new);
        Ok(match self {
            Term::Var(v) => Node::Var(
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            ),
            Term::Bot => Node::Bot,
            Term::Top => Node::Top,
            Term::Meet(a, b) => Node::Meet(l(a)?, l(b)?),
            Term::Join(a, b) => Node::Join(l(a)?, l(b)?),
            Term::Imp(a, b) => Node::Imp(l(a)?, l(b)?),
            Term::Neg(a) => Node::Neg(l(a)?),
            Term::Op(name, args) => {
                let i = sig
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownOperation(name.clone()))?;
                crate::algebra::check_arity(sig, i, args.len())?;
                Node::Op(
                    i,
                    args.iter().map(|a| a.lower(sig, vars)).collect::<Result<_>>()?,
                )
            }
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Bot => write!(f, "bot"),
            Term::Top => write!(f, "top"),
            Term::Meet(a, b) => write!(f, "(meet {a} {b})"),
            Term::Join(a, b) => write!(f, "(join {a} {b})"),
            Term::Imp(a, b) => write!(f, "(imp {a} {b})"),
            Term::Neg(a) => write!(f, "(neg {a})"),
            Term::Op(name, args) => {
                write!(f, "(op {name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '(' || c == ')' {
            out.push((i, c.to_string()));
            chars.next();
        } else {
            let mut atom = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_whitespace() || c == '(' || c == ')' {
                    break;
                }
                atom.push(c);
                chars.next();
            }
            out.push((i, atom));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, String)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn next(&mut self) -> Result<(usize, String)> {
        let tok = self.tokens.get(self.pos).cloned().ok_or(Error::Syntax {
            pos: self.end,
            msg: "unexpected end of input".into(),
        })?;
        self.pos += 1;
        Ok(tok)
    }

    fn peek_is_close(&self) -> bool {
        self.tokens.get(self.pos).is_some_and(|(_, t)| t == ")")
    }

    fn name(&mut self) -> Result<String> {
        let (at, tok) = self.next()?;
        if tok == "(" || tok == ")" {
            return Err(Error::Syntax {
                pos: at,
                msg: format!("expected a name, found `{tok}`"),
            });
        }
        Ok(tok)
    }

    fn close(&mut self) -> Result<()> {
        let (at, tok) = self.next()?;
        if tok != ")" {
            return Err(Error::Syntax {
                pos: at,
                msg: format!("expected `)`, found `{tok}`"),
            });
        }
        Ok(())
    }

    fn term(&mut self) -> Result<Term> {
        let (at, tok) = self.next()?;
        match tok.as_str() {
            ")" => Err(Error::Syntax {
                pos: at,
                msg: "unexpected `)`".into(),
            }),
            "bot" => Ok(Term::Bot),
            "top" => Ok(Term::Top),
            "(" => {
                let (head_at, head) = self.next()?;
                let t = match head.as_str() {
                    "var" => {
                        let v = self.name()?;
                        if KEYWORDS.contains(&v.as_str()) {
                            return Err(Error::Syntax {
                                pos: head_at,
                                msg: format!("`{v}` is reserved"),
                            });
                        }
                        Term::Var(v)
                    }
                    "meet" => Term::meet(self.term()?, self.term()?),
                    "join" => Term::join(self.term()?, self.term()?),
                    "imp" => Term::imp(self.term()?, self.term()?),
                    "neg" => Term::neg(self.term()?),
                    "op" => {
                        let name = self.name()?;
                        let mut args = Vec::new();
                        while !self.peek_is_close() {
                            args.push(self.term()?);
                        }
                        Term::Op(name, args)
                    }
                    other => {
                        return Err(Error::Syntax {
                            pos: head_at,
                            msg: format!("unknown form `{other}`"),
                        })
                    }
                };
                self.close()?;
                Ok(t)
            }
            name if KEYWORDS.contains(&name) => Err(Error::Syntax {
                pos: at,
                msg: format!("`{name}` is reserved"),
            }),
            name => Ok(Term::Var(name.to_string())),
        }
    }
}

/// A term with variables and operations resolved to indices.
#[derive(Debug, Clone)]
pub struct Compiled(Node);

#[derive(Debug, Clone)]
enum Node {
    Var(usize),
    Bot,
    Top,
    Meet(Box<Node>, Box<Node>),
    Join(Box<Node>, Box<Node>),
    Op(usize, Vec<Node>),
    Neg(Box<Node>),
    Imp(Box<Node>, Box<Node>),
}

impl Compiled {
    pub fn eval<A: Algebra>(&self, alg: &A, assignment: &[A::Elem]) -> Result<A::Elem> {
        eval_node(&self.0, alg, assignment)
    }
}

fn eval_node<A: Algebra>(n: &Node, alg: &A, env: &[A::Elem]) -> Result<A::Elem> {
    Ok(match n {
        Node::Var(i) => env[*i].clone(),
        Node::Bot => alg.bottom(),
        Node::Top => alg.top(),
        Node::Meet(a, b) => alg.meet(&eval_node(a, alg, env)?, &eval_node(b, alg, env)?),
        Node::Join(a, b) => alg.join(&eval_node(a, alg, env)?, &eval_node(b, alg, env)?),
        Node::Imp(a, b) => alg.implies(&eval_node(a, alg, env)?, &eval_node(b, alg, env)?)?,
        Node::Neg(a) => alg.neg(&eval_node(a, alg, env)?)?,
        Node::Op(i, args) => {
            let vals = args
                .iter()
                .map(|a| eval_node(a, alg, env))
                .collect::<Result<Vec<_>>>()?;
            alg.apply(*i, &vals)?
        }
    })
}

/// Evaluates `t` under a by-name assignment.
pub fn eval_term<A: Algebra>(t: &Term, alg: &A, assignment: &BTreeMap<String, A::Elem>) -> Result<A::Elem> {
    let vars = t.vars();
    let env = vars
        .iter()
        .map(|v| {
            assignment
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnboundVariable(v.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    t.compile(alg.signature(), &vars)?.eval(alg, &env)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    vars: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationDoc {
    pub lhs: String,
    pub rhs: String,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        let mut vars = lhs.vars();
        for v in rhs.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        Equation { lhs, rhs, vars }
    }

    pub fn parse(lhs: &str, rhs: &str) -> Result<Self> {
        Ok(Equation::new(Term::parse(lhs)?, Term::parse(rhs)?))
    }

    pub fn from_doc(doc: &EquationDoc) -> Result<Self> {
        Equation::parse(&doc.lhs, &doc.rhs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Equation::from_doc(&serde_json::from_str(text)?)
    }

    pub fn to_doc(&self) -> EquationDoc {
        EquationDoc {
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
        }
    }

    /// Variables of both sides in first-occurrence order, lhs first.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_negation_free(&self) -> bool {
        self.lhs.is_negation_free() && self.rhs.is_negation_free()
    }

    pub fn check_signature(&self, sig: &Signature) -> Result<()> {
        self.lhs.check(sig)?;
        self.rhs.check(sig)
    }

    pub fn rename_ops(&self, map: &BTreeMap<String, String>) -> Equation {
        Equation::new(self.lhs.rename_ops(map), self.rhs.rename_ops(map))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Default cap on evaluated assignments before checks fall back to sampling.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Enumerate everything; fail with `BudgetExceeded` if too large.
    Exhaustive,
    Sample { samples: u64, seed: u64 },
    /// Exhaustive within budget, otherwise sampled.
    Auto { samples: u64, seed: u64 },
}

/// How a search over assignments was (or will be) carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plan {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

impl Plan {
    /// Chooses a plan for `count` total assignments.
    pub fn choose(mode: CheckMode, count: u128, budget: u64) -> Result<Plan> {
        match mode {
            CheckMode::Exhaustive => {
                crate::algebra::check_raw_size(count, budget)?;
                Ok(Plan::Exhaustive)
            }
            CheckMode::Sample { samples, seed } => Ok(Plan::Sampled { samples, seed }),
            CheckMode::Auto { samples, seed } => Ok(if count <= budget as u128 {
                Plan::Exhaustive
            } else {
                Plan::Sampled { samples, seed }
            }),
        }
    }
}

/// Result of a search: the first witness found, and how many assignments
/// were examined up to and including it.
#[derive(Debug, Clone)]
pub struct SearchOutcome<T> {
    pub plan: Plan,
    pub witness: Option<T>,
    pub tried: u64,
}

/// Number of `k`-tuples over `n` elements, saturating.
pub fn tuple_count(n: usize, k: usize) -> u128 {
    (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

/// Walks all `k`-tuples of `elems` (first coordinate most significant) in
/// parallel and returns the least one for which `probe` yields a witness.
pub fn search_exhaustive<E, T, F>(elems: &[E], k: usize, budget: u64, probe: F) -> Result<SearchOutcome<T>>
where
    E: Clone + Sync,
    T: Send,
    F: Fn(&[E]) -> Option<T> + Sync,
{
    let count = tuple_count(elems.len(), k);
    crate::algebra::check_raw_size(count, budget)?;
    let count = count as u64;
    let n = elems.len() as u64;
    let found = (0..count).into_par_iter().find_map_first(|idx| {
        let mut tuple = Vec::with_capacity(k);
        let mut rest = idx;
        let mut digits = vec![0u64; k];
        for d in digits.iter_mut().rev() {
            *d = rest % n;
            rest /= n;
        }
        tuple.extend(digits.iter().map(|&d| elems[d as usize].clone()));
        probe(&tuple).map(|w| (idx, w))
    });
    Ok(match found {
        Some((idx, w)) => SearchOutcome {
            plan: Plan::Exhaustive,
            witness: Some(w),
            tried: idx + 1,
        },
        None => SearchOutcome {
            plan: Plan::Exhaustive,
            witness: None,
            tried: count,
        },
    })
}

/// Draws `samples` tuples of `k` elements from `alg` with a ChaCha8 stream
/// seeded by `seed`, stopping at the first witness.
pub fn search_sampled<A, T, F>(alg: &A, k: usize, samples: u64, seed: u64, mut probe: F) -> SearchOutcome<T>
where
    A: Algebra,
    F: FnMut(&[A::Elem]) -> Option<T>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let tuple: Vec<A::Elem> = (0..k).map(|_| alg.sample(&mut rng)).collect();
        if let Some(w) = probe(&tuple) {
            return SearchOutcome {
                plan: Plan::Sampled { samples, seed },
                witness: Some(w),
                tried: i + 1,
            };
        }
    }
    SearchOutcome {
        plan: Plan::Sampled { samples, seed },
        witness: None,
        tried: samples,
    }
}

/// Exhaustive or sampled search over `k`-tuples of `alg`, per `mode`.
pub fn search<A, T, F>(alg: &A, k: usize, mode: CheckMode, budget: u64, probe: F) -> Result<SearchOutcome<T>>
where
    A: Algebra,
    T: Send,
    F: Fn(&[A::Elem]) -> Option<T> + Sync,
{
    // Listing the carrier is itself capped by the budget.
    let elems = if alg.raw_size() <= budget as u128 {
        Some(alg.elements(budget)?)
    } else {
        None
    };
    let count = elems.as_ref().map_or(u128::MAX, |e| tuple_count(e.len(), k));
    match Plan::choose(mode, count, budget)? {
        Plan::Exhaustive => search_exhaustive(&elems.unwrap_or_default(), k, budget, probe),
        Plan::Sampled { samples, seed } => Ok(search_sampled(alg, k, samples, seed, probe)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerdictStatus<E> {
    ValidExhaustive,
    ValidSampled { samples: u64, seed: u64 },
    Counterexample { assignment: Vec<E>, lhs: E, rhs: E },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<E> {
    pub status: VerdictStatus<E>,
    pub assignments_tried: u64,
}

impl<E> Verdict<E> {
    pub fn is_valid(&self) -> bool {
        !matches!(self.status, VerdictStatus::Counterexample { .. })
    }

    pub fn is_exhaustive(&self) -> bool {
        matches!(self.status, VerdictStatus::ValidExhaustive)
    }

    pub fn counterexample(&self) -> Option<&[E]> {
        match &self.status {
            VerdictStatus::Counterexample { assignment, .. } => Some(assignment),
            _ => None,
        }
    }
}

impl<E: Clone> Verdict<E> {
    pub fn to_json<A: Algebra<Elem = E>>(&self, alg: &A, eq: &Equation) -> Value {
        let status = match &self.status {
            VerdictStatus::ValidExhaustive => json!({"status": "valid_exhaustive"}),
            VerdictStatus::ValidSampled { samples, seed } => {
                json!({"status": "valid_sampled", "samples": samples, "seed": seed})
            }
            VerdictStatus::Counterexample { assignment, lhs, rhs } => {
                let vars: serde_json::Map<String, Value> = eq
                    .vars()
                    .iter()
                    .zip(assignment)
                    .map(|(v, e)| (v.clone(), alg.describe(e)))
                    .collect();
                json!({
                    "status": "counterexample",
                    "assignment": vars,
                    "lhs": alg.describe(lhs),
                    "rhs": alg.describe(rhs),
                })
            }
        };
        let mut obj = status;
        obj["assignments_tried"] = json!(self.assignments_tried);
        obj
    }
}

/// Decides `eq` over `alg`. Variables range over the whole carrier of `alg`.
/// Exhaustive verdicts report the least counterexample in enumeration order.
pub fn check_equation<A: Algebra>(eq: &Equation, alg: &A, mode: CheckMode, budget: u64) -> Result<Verdict<A::Elem>> {
    let sig = alg.signature();
    let lhs = eq.lhs.compile(sig, eq.vars())?;
    let rhs = eq.rhs.compile(sig, eq.vars())?;
    // assignment, lhs value, rhs value
    type Found<E> = (Vec<E>, E, E);
    let probe = |env: &[A::Elem]| -> Option<Result<Found<A::Elem>>> {
        let l = match lhs.eval(alg, env) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        let r = match rhs.eval(alg, env) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        (l != r).then(|| Ok((env.to_vec(), l, r)))
    };
    let out = search(alg, eq.vars().len(), mode, budget, probe)?;
    let status = match out.witness {
        Some(w) => {
            let (assignment, lhs, rhs) = w?;
            VerdictStatus::Counterexample { assignment, lhs, rhs }
        }
        None => match out.plan {
            Plan::Exhaustive => VerdictStatus::ValidExhaustive,
            Plan::Sampled { samples, seed } => VerdictStatus::ValidSampled { samples, seed },
        },
    };
    Ok(Verdict {
        status,
        assignments_tried: out.tried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::{ConvAlgebra, LFunction};
    use crate::lattice::FiniteLattice;
    use crate::relstruct::{Mode, RelSpec, RelStructure};

    fn chain(n: usize) -> FiniteLattice {
        let labels: Vec<String> = match n {
            2 => vec!["0".into(), "1".into()],
            _ => vec!["0".into(), "m".into(), "1".into()],
        };
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteLattice::from_pairs(labels, &pairs).unwrap()
    }

    fn unary(n: usize, tuples: &[&[usize]]) -> RelStructure {
        RelStructure::new(
            n,
            Signature::new(vec![RelSpec::new("f", 1, Mode::Join)]).unwrap(),
            vec![tuples.iter().map(|t| t.to_vec()).collect()],
            None,
        )
        .unwrap()
    }

    #[test]
    fn parses_forms() {
        let t = Term::parse("(join (op f x) (op f y))").unwrap();
        assert_eq!(
            t,
            Term::join(Term::op("f", vec![Term::var("x")]), Term::op("f", vec![Term::var("y")]))
        );
        assert_eq!(Term::parse("(imp x bot)").unwrap(), Term::imp(Term::var("x"), Term::Bot));
        assert_eq!(Term::parse("(var x)").unwrap(), Term::var("x"));
        assert_eq!(Term::parse("  top ").unwrap(), Term::Top);
        assert_eq!(Term::parse("(op e)").unwrap(), Term::op("e", vec![]));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "(meet x)", "(meet x y", "(foo x)", "x y", ")", "(var op)", "meet"] {
            assert!(matches!(Term::parse(bad), Err(Error::Syntax { .. })), "{bad}");
        }
    }

    #[test]
    fn signature_checks() {
        let s = unary(2, &[]);
        assert!(matches!(
            Term::parse_checked("(op f x y)", s.signature()),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            Term::parse_checked("(op g x)", s.signature()),
            Err(Error::UnknownOperation(_))
        ));
    }

    #[test]
    fn canonical_round_trip() {
        for text in ["(meet x (join y z))", "(op * (op inv a) bot)", "(neg (imp x top))", "(op e)"] {
            let t = Term::parse(text).unwrap();
            assert_eq!(t.to_string(), text);
            assert_eq!(Term::parse(&t.to_string()).unwrap(), t);
        }
        assert_eq!(Term::parse("(var  q)").unwrap().to_string(), "q");
    }

    #[test]
    fn variable_order() {
        let eq = Equation::parse("(op f (join y x))", "(join x z)").unwrap();
        assert_eq!(eq.vars(), ["y", "x", "z"]);
    }

    #[test]
    fn evaluation() {
        let z2 = RelStructure::from_group(&[vec![0, 1], vec![1, 0]]).unwrap();
        let alg = ConvAlgebra::new(chain(3), z2);
        let t = Term::parse("(op * x y)").unwrap();
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), LFunction::new(vec![1, 2]));
        env.insert("y".to_string(), LFunction::new(vec![2, 1]));
        assert_eq!(eval_term(&t, &alg, &env).unwrap(), LFunction::new(vec![1, 2]));
        assert_eq!(eval_term(&Term::var("x"), &alg, &env).unwrap(), env["x"]);
        assert!(matches!(
            eval_term(&Term::var("w"), &alg, &env),
            Err(Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn additivity_valid_meet_preservation_fails() {
        let l = chain(3);
        let alg = ConvAlgebra::new(l, unary(2, &[&[0, 1], &[1, 1]]));
        let add = Equation::parse("(op f (join x y))", "(join (op f x) (op f y))").unwrap();
        let v = check_equation(&add, &alg, CheckMode::Exhaustive, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, VerdictStatus::ValidExhaustive);
        assert_eq!(v.assignments_tried, 81);

        let alg2 = ConvAlgebra::new(chain(2), unary(2, &[&[0, 1], &[1, 1]]));
        let mul = Equation::parse("(op f (meet x y))", "(meet (op f x) (op f y))").unwrap();
        let v = check_equation(&mul, &alg2, CheckMode::Exhaustive, DEFAULT_BUDGET).unwrap();
        // least counterexample in enumeration order is x=(0,1), y=(1,0)
        assert_eq!(
            v.counterexample().unwrap(),
            [LFunction::new(vec![0, 1]), LFunction::new(vec![1, 0])]
        );
        let chi0 = LFunction::new(vec![1, 0]);
        let chi1 = LFunction::new(vec![0, 1]);
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), chi0);
        env.insert("y".to_string(), chi1);
        let lhs = eval_term(&mul.lhs, &alg2, &env).unwrap();
        let rhs = eval_term(&mul.rhs, &alg2, &env).unwrap();
        assert_eq!((lhs.get(1), rhs.get(1)), (0, 1));
    }

    #[test]
    fn trivial_and_budget() {
        let alg = ConvAlgebra::new(chain(3), RelStructure::full(3).unwrap());
        let eq = Equation::parse("x", "x").unwrap();
        assert!(check_equation(&eq, &alg, CheckMode::Exhaustive, 100).unwrap().is_exhaustive());
        let two = Equation::parse("(meet x y)", "(meet y x)").unwrap();
        assert!(matches!(
            check_equation(&two, &alg, CheckMode::Exhaustive, 100),
            Err(Error::BudgetExceeded { count: 729, cap: 100 })
        ));
        let v = check_equation(&two, &alg, CheckMode::Auto { samples: 50, seed: 0 }, 100).unwrap();
        assert_eq!(v.status, VerdictStatus::ValidSampled { samples: 50, seed: 0 });
    }

    #[test]
    fn distributivity_on_b2() {
        let two = chain(2);
        let b2 = two.product(&two);
        let eq = Equation::parse("(meet x (join y z))", "(join (meet x y) (meet x z))").unwrap();
        let v = check_equation(&eq, &b2, CheckMode::Exhaustive, DEFAULT_BUDGET).unwrap();
        assert!(v.is_exhaustive());
    }

    #[test]
    fn json_equation() {
        let eq = Equation::from_json(r#"{"lhs": "(op f x)", "rhs": "x"}"#).unwrap();
        assert_eq!(eq.to_string(), "(op f x) = x");
        assert!(eq.is_negation_free());
        assert!(!Equation::parse("(neg x)", "x").unwrap().is_negation_free());
    }
}
