//! Property checkers. Each returns a [`Report`] that either passes or names
//! the clause that broke together with a concrete finite witness.
//!
//! Clauses are asserted only under the hypotheses of the property they
//! check (usually a distributive lattice). Outside those hypotheses the same
//! computation is run and recorded with status `observed`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Algebra, ProductAlgebra};
use crate::catalog;
use crate::convolution::{
    co_delta_decompose, delta_decompose, functions_above, functions_below, iso_phi, iso_phi_inv,
    ConvAlgebra, LFunction, PMorphism, Subset, SubsetAlgebra,
};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, LatticeMorphism};
use crate::relstruct::{check_p_morphism, Mode, RelSpec, RelStructure, Signature};
use crate::termlang::{
    check_equation, search, search_exhaustive, tuple_count, CheckMode, Equation, SearchOutcome, Verdict,
    VerdictStatus, DEFAULT_BUDGET, DEFAULT_SAMPLES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    PassSampled,
    Fail,
    Observed,
}

#[derive(Debug, Clone, Serialize)]
pub struct Clause {
    pub name: String,
    pub status: Status,
    pub tried: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stats {
    pub evaluations: u64,
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub checker: String,
    pub instance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub stats: Stats,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.stats.clauses.iter().find(|c| c.name == name)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Result of testing one universally quantified clause.
#[derive(Debug, Clone)]
pub enum Outcome {
    Holds { exhaustive: bool, tried: u64 },
    Fails { witness: Value, tried: u64 },
}

impl Outcome {
    pub fn holds(&self) -> bool {
        matches!(self, Outcome::Holds { .. })
    }

    /// Holds, and was decided over every case.
    pub fn conclusive(&self) -> bool {
        !matches!(self, Outcome::Holds { exhaustive: false, .. })
    }

    fn tried(&self) -> u64 {
        match self {
            Outcome::Holds { tried, .. } | Outcome::Fails { tried, .. } => *tried,
        }
    }

    fn witness(&self) -> Option<&Value> {
        match self {
            Outcome::Fails { witness, .. } => Some(witness),
            Outcome::Holds { .. } => None,
        }
    }

    fn from_search(out: SearchOutcome<Value>) -> Outcome {
        match out.witness {
            Some(witness) => Outcome::Fails {
                witness,
                tried: out.tried,
            },
            None => Outcome::Holds {
                exhaustive: matches!(out.plan, crate::termlang::Plan::Exhaustive),
                tried: out.tried,
            },
        }
    }

    fn exact(ok: bool, tried: u64, witness: impl FnOnce() -> Value) -> Outcome {
        if ok {
            Outcome::Holds {
                exhaustive: true,
                tried,
            }
        } else {
            Outcome::Fails {
                witness: witness(),
                tried,
            }
        }
    }

    fn from_verdict<E: Clone, A: Algebra<Elem = E>>(v: &Verdict<E>, alg: &A, eq: &Equation) -> Outcome {
        match &v.status {
            VerdictStatus::Counterexample { .. } => Outcome::Fails {
                witness: v.to_json(alg, eq),
                tried: v.assignments_tried,
            },
            VerdictStatus::ValidExhaustive => Outcome::Holds {
                exhaustive: true,
                tried: v.assignments_tried,
            },
            VerdictStatus::ValidSampled { .. } => Outcome::Holds {
                exhaustive: false,
                tried: v.assignments_tried,
            },
        }
    }
}

/// Accumulates clauses into a report.
struct Builder {
    checker: String,
    instance: String,
    clauses: Vec<Clause>,
    witness: Option<Value>,
    asserting: bool,
}

impl Builder {
    fn new(checker: &str, instance: &str) -> Self {
        Builder {
            checker: checker.to_string(),
            instance: instance.to_string(),
            clauses: Vec::new(),
            witness: None,
            asserting: true,
        }
    }

    /// Asserted clause; recorded as observed when the builder is not asserting.
    fn check(&mut self, name: impl Into<String>, outcome: Outcome) {
        if self.asserting {
            self.assert(name, outcome);
        } else {
            self.observe_outcome(name, outcome);
        }
    }

    fn assert(&mut self, name: impl Into<String>, outcome: Outcome) {
        let name = name.into();
        let tried = outcome.tried();
        let (status, detail) = match outcome {
            Outcome::Holds { exhaustive: true, .. } => (Status::Pass, None),
            Outcome::Holds { exhaustive: false, .. } => (Status::PassSampled, None),
            Outcome::Fails { witness, .. } => {
                if self.witness.is_none() {
                    self.witness = Some(json!({"clause": name, "witness": witness}));
                }
                (Status::Fail, Some(witness))
            }
        };
        self.clauses.push(Clause {
            name,
            status,
            tried,
            detail,
        });
    }

    fn observe_outcome(&mut self, name: impl Into<String>, outcome: Outcome) {
        let tried = outcome.tried();
        let detail = match &outcome {
            Outcome::Holds { exhaustive, .. } => json!({"holds": true, "exhaustive": exhaustive}),
            Outcome::Fails { witness, .. } => json!({"holds": false, "witness": witness}),
        };
        self.clauses.push(Clause {
            name: name.into(),
            status: Status::Observed,
            tried,
            detail: Some(detail),
        });
    }

    fn observe(&mut self, name: impl Into<String>, value: Value) {
        self.clauses.push(Clause {
            name: name.into(),
            status: Status::Observed,
            tried: 0,
            detail: Some(value),
        });
    }

    fn finish(self) -> Report {
        let statuses: Vec<Status> = self.clauses.iter().map(|c| c.status).collect();
        let status = if statuses.contains(&Status::Fail) {
            Status::Fail
        } else if !statuses.is_empty() && statuses.iter().all(|&s| s == Status::Observed) {
            Status::Observed
        } else if statuses.contains(&Status::PassSampled) {
            Status::PassSampled
        } else {
            Status::Pass
        };
        Report {
            checker: self.checker,
            instance: self.instance,
            status,
            witness: self.witness,
            stats: Stats {
                evaluations: self.clauses.iter().map(|c| c.tried).sum(),
                clauses: self.clauses,
            },
        }
    }
}

/// Search strategy shared by all checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub mode: CheckMode,
    pub budget: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            mode: CheckMode::Auto {
                samples: DEFAULT_SAMPLES,
                seed: 0,
            },
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Settings {
    pub fn with_budget(budget: u64) -> Self {
        Settings {
            budget,
            ..Settings::default()
        }
    }
}

fn law<A, F>(alg: &A, k: usize, s: &Settings, probe: F) -> Result<Outcome>
where
    A: Algebra,
    F: Fn(&[A::Elem]) -> Option<Value> + Sync,
{
    Ok(Outcome::from_search(search(alg, k, s.mode, s.budget, probe)?))
}

fn eq_law<A: Algebra>(alg: &A, lhs: &str, rhs: &str, s: &Settings) -> Result<Outcome> {
    let eq = Equation::parse(lhs, rhs)?;
    let v = check_equation(&eq, alg, s.mode, s.budget)?;
    Ok(Outcome::from_verdict(&v, alg, &eq))
}

fn ap<A: Algebra>(alg: &A, op: usize, args: &[A::Elem]) -> A::Elem {
    alg.apply(op, args).expect("argument count follows the signature")
}

fn imp<A: Algebra>(alg: &A, a: &A::Elem, b: &A::Elem) -> A::Elem {
    alg.implies(a, b).expect("lattice checked to be Heyting")
}

fn show<A: Algebra>(alg: &A, t: &[A::Elem]) -> Value {
    Value::Array(t.iter().map(|e| alg.describe(e)).collect())
}

fn require_heyting(l: &FiniteLattice) -> Result<()> {
    if l.is_distributive() {
        Ok(())
    } else {
        Err(Error::NotHeyting)
    }
}

fn require_op(sig: &Signature, op: usize) -> Result<&RelSpec> {
    if op >= sig.len() {
        return Err(Error::UnknownRelation(format!("#{op}")));
    }
    Ok(sig.get(op))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Join-mode operation, preserving joins in each argument.
    Additive,
    /// Meet-mode operation, preserving meets in each argument.
    Multiplicative,
}

/// Most elements for which every family of arguments is enumerated.
pub const SUBSET_FALLBACK_LIMIT: usize = 16;

/// Additivity (or multiplicativity) of operation `op` in each argument.
///
/// On a finite lattice, preserving binary joins and the empty join already
/// gives preservation of every join; both are checked for each position. When
/// `|L^X| ≤ 16` and the budget allows, every family of arguments is checked
/// as well.
pub fn check_operator(
    instance: &str,
    alg: &ConvAlgebra,
    op: usize,
    kind: OperatorKind,
    s: &Settings,
) -> Result<Report> {
    let spec = require_op(alg.signature(), op)?.clone();
    let want = match kind {
        OperatorKind::Additive => Mode::Join,
        OperatorKind::Multiplicative => Mode::Meet,
    };
    if spec.mode != want {
        return Err(Error::WrongMode {
            relation: spec.name,
            expected: want,
            found: spec.mode,
        });
    }
    let mut b = Builder::new("operator", instance);
    b.asserting = alg.lattice().is_distributive();
    let n = spec.arity;
    let combine = |x: &LFunction, y: &LFunction| match kind {
        OperatorKind::Additive => alg.join(x, y),
        OperatorKind::Multiplicative => alg.meet(x, y),
    };
    let unit = match kind {
        OperatorKind::Additive => alg.bottom(),
        OperatorKind::Multiplicative => alg.top(),
    };
    if n == 0 {
        b.check(
            "nullary",
            Outcome::Holds {
                exhaustive: true,
                tried: 0,
            },
        );
    }
    for k in 0..n {
        let binary = law(alg, n + 1, s, |t| {
            let (args, extra) = t.split_at(n);
            let mut merged = args.to_vec();
            merged[k] = combine(&args[k], &extra[0]);
            let mut swapped = args.to_vec();
            swapped[k] = extra[0].clone();
            let lhs = ap(alg, op, &merged);
            let rhs = combine(&ap(alg, op, args), &ap(alg, op, &swapped));
            (lhs != rhs).then(|| {
                json!({"position": k, "args": show(alg, args), "extra": alg.describe(&extra[0]),
                       "lhs": alg.describe(&lhs), "rhs": alg.describe(&rhs)})
            })
        })?;
        b.check(format!("position {k}: binary"), binary);

        let empty = law(alg, n - 1, s, |t| {
            let mut args = t.to_vec();
            args.insert(k, unit.clone());
            let out = ap(alg, op, &args);
            (out != unit).then(|| json!({"position": k, "args": show(alg, &args), "result": alg.describe(&out)}))
        })?;
        b.check(format!("position {k}: empty family"), empty);

        let elems = if alg.raw_size() <= SUBSET_FALLBACK_LIMIT as u128 {
            alg.elements(s.budget)?
        } else {
            Vec::new()
        };
        let m = elems.len();
        let families = if m > 0 && m <= SUBSET_FALLBACK_LIMIT {
            (1u128 << m).saturating_mul(tuple_count(m, n - 1))
        } else {
            u128::MAX
        };
        if families <= s.budget as u128 {
            let index: BTreeMap<&LFunction, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
            let out = search_exhaustive(&elems, n - 1, s.budget, |others| {
                let row: Vec<LFunction> = elems
                    .iter()
                    .map(|y| {
                        let mut args = others.to_vec();
                        args.insert(k, y.clone());
                        ap(alg, op, &args)
                    })
                    .collect();
                (0u64..1 << m).find_map(|mask| {
                    let members = (0..m).filter(|&i| mask >> i & 1 == 1);
                    let sup = members.clone().fold(unit.clone(), |acc, i| combine(&acc, &elems[i]));
                    let rhs = members.fold(unit.clone(), |acc, i| combine(&acc, &row[i]));
                    let lhs = &row[index[&sup]];
                    (*lhs != rhs).then(|| {
                        json!({"position": k, "others": show(alg, others),
                               "family": (0..m).filter(|&i| mask >> i & 1 == 1)
                                   .map(|i| alg.describe(&elems[i])).collect::<Vec<_>>()})
                    })
                })
            })?;
            let outcome = match Outcome::from_search(out) {
                Outcome::Holds { exhaustive, tried } => Outcome::Holds {
                    exhaustive,
                    tried: tried << m,
                },
                fails => fails,
            };
            b.check(format!("position {k}: all families"), outcome);
        } else {
            b.observe(
                format!("position {k}: all families"),
                json!({"skipped": "family count exceeds limit or budget"}),
            );
        }
    }
    Ok(b.finish())
}

/// Each output of `op` is recovered from one-point functions below its
/// arguments (join mode), or one-point functions above them (meet mode).
/// Both the one-point decomposition and the family of all functions below
/// (above) the arguments are checked.
pub fn check_finitely_supported(instance: &str, alg: &ConvAlgebra, op: usize, s: &Settings) -> Result<Report> {
    let spec = require_op(alg.signature(), op)?.clone();
    let l = alg.lattice();
    let n = spec.arity;
    let mut b = Builder::new("finitely_supported", instance);
    b.asserting = l.is_distributive();
    let join_mode = spec.mode == Mode::Join;
    let fold = |acc: LFunction, x: &LFunction| if join_mode { alg.join(&acc, x) } else { alg.meet(&acc, x) };
    let unit = if join_mode { alg.bottom() } else { alg.top() };

    // Combines `op` over every tuple drawn from `choices`.
    let reconstruct = |choices: &[Vec<LFunction>]| -> LFunction {
        let mut acc = unit.clone();
        let mut idx = vec![0usize; n];
        if choices.iter().any(Vec::is_empty) {
            return acc;
        }
        loop {
            let args: Vec<LFunction> = idx.iter().zip(choices).map(|(&i, c)| c[i].clone()).collect();
            acc = fold(acc, &ap(alg, op, &args));
            let mut pos = n;
            loop {
                if pos == 0 {
                    return acc;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    };

    let one_point = law(alg, n, s, |args| {
        let choices: Vec<Vec<LFunction>> = args
            .iter()
            .map(|a| if join_mode { delta_decompose(l, a) } else { co_delta_decompose(l, a) })
            .collect();
        let want = ap(alg, op, args);
        let got = reconstruct(&choices);
        (want != got).then(|| json!({"args": show(alg, args), "output": alg.describe(&want), "reconstructed": alg.describe(&got)}))
    })?;
    b.check("one-point decomposition", one_point);

    // Total inner evaluations of the second formulation over all tuples.
    let per_arg: u128 = (0..l.size())
        .map(|a| {
            (0..l.size())
                .filter(|&c| if join_mode { l.leq(c, a) } else { l.leq(a, c) })
                .count() as u128
        })
        .sum::<u128>()
        .checked_pow(alg.carrier() as u32)
        .unwrap_or(u128::MAX);
    let total = per_arg.checked_pow(n as u32).unwrap_or(u128::MAX);
    let inner = Settings {
        mode: if total <= s.budget as u128 {
            CheckMode::Exhaustive
        } else {
            match s.mode {
                CheckMode::Exhaustive => return Err(Error::BudgetExceeded { count: total, cap: s.budget }),
                CheckMode::Sample { samples, seed } | CheckMode::Auto { samples, seed } => {
                    CheckMode::Sample { samples, seed }
                }
            }
        },
        budget: s.budget,
    };
    let families = law(alg, n, &inner, |args| {
        let choices: Vec<Vec<LFunction>> = args
            .iter()
            .map(|a| if join_mode { functions_below(l, a) } else { functions_above(l, a) })
            .collect();
        let want = ap(alg, op, args);
        let got = reconstruct(&choices);
        (want != got).then(|| json!({"args": show(alg, args), "output": alg.describe(&want), "reconstructed": alg.describe(&got)}))
    })?;
    b.check("all functions below arguments", families);
    Ok(b.finish())
}

fn binary_frame(n: usize, tuples: Vec<Vec<usize>>, name: &str, mode: Mode) -> Result<RelStructure> {
    RelStructure::new(n, Signature::new(vec![RelSpec::new(name, 1, mode)])?, vec![tuples], None)
}

/// For a single binary relation `R`: `a ≤ f(a)` holds iff `R` is reflexive,
/// `f(f(a)) ≤ f(a)` iff `R` is transitive, and the meet-mode operation `g`
/// is an interior operator iff both hold. Relation properties are read off
/// the tuples directly; the equations are decided in the algebra.
pub fn check_closure_correspondence(instance: &str, l: &FiniteLattice, x: &RelStructure, s: &Settings) -> Result<Report> {
    let spec = require_op(x.signature(), 0)?;
    if x.signature().len() != 1 || spec.arity != 1 {
        return Err(Error::ArityMismatch {
            relation: spec.name.clone(),
            expected: 1,
            found: spec.arity,
        });
    }
    let n = x.carrier();
    let rel = x.relation(0);
    let tuples: Vec<Vec<usize>> = rel.tuples().iter().cloned().collect();
    let reflexive = (0..n).all(|a| rel.contains(&[a, a]));
    let transitive = tuples
        .iter()
        .all(|t| tuples.iter().filter(|u| u[0] == t[1]).all(|u| rel.contains(&[t[0], u[1]])));

    let mut b = Builder::new("closure_correspondence", instance);
    b.asserting = l.is_distributive();
    b.observe("relation", json!({"tuples": tuples, "reflexive": reflexive, "transitive": transitive}));

    let fwd = ConvAlgebra::new(l.clone(), binary_frame(n, tuples.clone(), "f", Mode::Join)?);
    let bwd = ConvAlgebra::new(l.clone(), binary_frame(n, tuples.clone(), "g", Mode::Meet)?);

    let agree = |b: &mut Builder, name: &str, flag: bool, outcome: Outcome| {
        let ok = outcome.holds() == flag;
        let detail = json!({"relation_flag": flag, "equation_holds": outcome.holds(), "witness": outcome.witness()});
        let tried = outcome.tried();
        b.check(name, Outcome::exact(ok, tried, || detail));
    };

    let additive = eq_law(&fwd, "(op f (join x y))", "(join (op f x) (op f y))", s)?;
    let normal = eq_law(&fwd, "(op f bot)", "bot", s)?;
    b.check("f(a∨b) = f(a)∨f(b)", additive.clone());
    b.check("f(0) = 0", normal.clone());
    let refl_eq = eq_law(&fwd, "(join x (op f x))", "(op f x)", s)?;
    let trans_eq = eq_law(&fwd, "(join (op f (op f x)) (op f x))", "(op f x)", s)?;
    let closure = additive.holds() && normal.holds() && refl_eq.holds() && trans_eq.holds();
    agree(&mut b, "a ≤ f(a) iff reflexive", reflexive, refl_eq);
    agree(&mut b, "f(f(a)) ≤ f(a) iff transitive", transitive, trans_eq);
    b.check(
        "f closure operator iff reflexive and transitive",
        Outcome::exact(closure == (reflexive && transitive), 0, || json!({"closure": closure})),
    );

    let mult = eq_law(&bwd, "(op g (meet x y))", "(meet (op g x) (op g y))", s)?;
    let conormal = eq_law(&bwd, "(op g top)", "top", s)?;
    let deflat = eq_law(&bwd, "(meet x (op g x))", "(op g x)", s)?;
    let idem = eq_law(&bwd, "(meet (op g x) (op g (op g x)))", "(op g x)", s)?;
    let interior = mult.holds() && conormal.holds() && deflat.holds() && idem.holds();
    agree(&mut b, "g(a) ≤ a iff reflexive", reflexive, deflat);
    agree(&mut b, "g(a) ≤ g(g(a)) iff transitive", transitive, idem);
    b.check(
        "g interior operator iff reflexive and transitive",
        Outcome::exact(interior == (reflexive && transitive), 0, || json!({"interior": interior})),
    );

    // g over L is f over the order dual of L, element for element.
    let dual = ConvAlgebra::new(l.dual(), binary_frame(n, tuples, "f", Mode::Join)?);
    let same = law(&bwd, 1, s, |a| {
        let g = ap(&bwd, 0, a);
        let f = ap(&dual, 0, a);
        (g != f).then(|| json!({"arg": show(&bwd, a), "g": bwd.describe(&g), "f_dual": dual.describe(&f)}))
    })?;
    b.check("g over L equals f over dual L", same);
    Ok(b.finish())
}

/// `(X, ∇, ∇)` over `L`: `◇` and `□` are the constant sup and inf, `◇` is a
/// finitely additive closure operator, `□` a finitely multiplicative
/// interior operator, and the three monadic axioms hold.
pub fn check_monadic_axioms(instance: &str, l: &FiniteLattice, n: usize, s: &Settings) -> Result<Report> {
    let alg = ConvAlgebra::new(l.clone(), RelStructure::full_extended(n)?);
    let mut b = Builder::new("monadic_axioms", instance);
    b.asserting = l.is_distributive();
    let formula = law(&alg, 1, s, |a| {
        let sup = l.join_all(a[0].values().iter().copied());
        let inf = l.meet_all(a[0].values().iter().copied());
        let dia = ap(&alg, 0, a);
        let boxed = ap(&alg, 1, a);
        (dia != alg.constant(sup) || boxed != alg.constant(inf))
            .then(|| json!({"arg": show(&alg, a), "dia": alg.describe(&dia), "box": alg.describe(&boxed)}))
    })?;
    b.check("◇ is the constant join, □ the constant meet", formula);
    let laws = [
        ("◇0 = 0", "(op dia bot)", "bot"),
        ("◇(a∨b) = ◇a∨◇b", "(op dia (join x y))", "(join (op dia x) (op dia y))"),
        ("a ≤ ◇a", "(join x (op dia x))", "(op dia x)"),
        ("◇◇a = ◇a", "(op dia (op dia x))", "(op dia x)"),
        ("□1 = 1", "(op box top)", "top"),
        ("□(a∧b) = □a∧□b", "(op box (meet x y))", "(meet (op box x) (op box y))"),
        ("□a ≤ a", "(meet x (op box x))", "(op box x)"),
        ("□□a = □a", "(op box (op box x))", "(op box x)"),
        ("monadic: □◇a = ◇a", "(op box (op dia x))", "(op dia x)"),
        ("monadic: ◇□a = □a", "(op dia (op box x))", "(op box x)"),
        ("monadic: ◇(◇a∧b) = ◇a∧◇b", "(op dia (meet (op dia x) y))", "(meet (op dia x) (op dia y))"),
    ];
    for (name, lhs, rhs) in laws {
        b.check(name, eq_law(&alg, lhs, rhs, s)?);
    }
    Ok(b.finish())
}

/// `f(a)∧f(b) = f(f(a)∧b)` on `(X, ∇)`: asserted for distributive `L`,
/// observed otherwise.
pub fn check_nabla_equation(instance: &str, l: &FiniteLattice, n: usize, s: &Settings) -> Result<Report> {
    let alg = ConvAlgebra::new(l.clone(), RelStructure::full(n)?);
    let mut b = Builder::new("nabla_equation", instance);
    b.asserting = l.is_distributive();
    let out = eq_law(&alg, "(meet (op f x) (op f y))", "(op f (meet (op f x) y))", s)?;
    b.check("f(a)∧f(b) = f(f(a)∧b)", out);
    Ok(b.finish())
}

/// Distributivity by scanning every triple, independent of the lattice's
/// own classification.
pub fn distributivity_failure(l: &FiniteLattice) -> Option<(Elem, Elem, Elem)> {
    let n = l.size();
    (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .find(|&(a, b, c)| l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c)))
}

/// Associativity of the group product on `L^{Z₂}` against distributivity of
/// `L`. A failure of distributivity `a(b₀+b₁) ≠ ab₀+ab₁` yields the explicit
/// non-associative triple `(a,0)`, `(b₀,b₁)`, `(1,1)`, which is checked too.
pub fn check_z2_associativity(instance: &str, l: &FiniteLattice, s: &Settings) -> Result<Report> {
    let alg = ConvAlgebra::new(l.clone(), catalog::cyclic(2)?);
    let mut b = Builder::new("z2_associativity", instance);
    let assoc = law(&alg, 3, s, |t| {
        let lhs = ap(&alg, 0, &[ap(&alg, 0, &[t[0].clone(), t[1].clone()]), t[2].clone()]);
        let rhs = ap(&alg, 0, &[t[0].clone(), ap(&alg, 0, &[t[1].clone(), t[2].clone()])]);
        (lhs != rhs).then(|| json!({"a": alg.describe(&t[0]), "b": alg.describe(&t[1]), "c": alg.describe(&t[2]),
                                   "(a*b)*c": alg.describe(&lhs), "a*(b*c)": alg.describe(&rhs)}))
    })?;
    let failure = distributivity_failure(l);
    let distributive = failure.is_none();
    b.observe("distributive", json!(distributive));
    b.observe_outcome("associative", assoc.clone());
    if assoc.conclusive() {
        let associative = assoc.holds();
        b.assert(
            "associative iff distributive",
            Outcome::exact(associative == distributive, assoc.tried(), || {
                json!({"associative": associative, "distributive": distributive, "witness": assoc.witness()})
            }),
        );
    } else {
        b.observe("associative iff distributive", json!("associativity only sampled"));
    }
    if let Some((a, b0, b1)) = failure {
        let t = [
            LFunction::new(vec![a, l.bottom()]),
            LFunction::new(vec![b0, b1]),
            LFunction::new(vec![l.top(), l.top()]),
        ];
        let lhs = ap(&alg, 0, &[ap(&alg, 0, &[t[0].clone(), t[1].clone()]), t[2].clone()]);
        let rhs = ap(&alg, 0, &[t[0].clone(), ap(&alg, 0, &[t[1].clone(), t[2].clone()])]);
        b.assert(
            "constructed triple is non-associative",
            Outcome::exact(lhs.get(0) != rhs.get(0), 1, || json!({"triple": show(&alg, &t)})),
        );
        b.observe("constructed triple", json!({"triple": show(&alg, &t), "(a*b)*c": alg.describe(&lhs), "a*(b*c)": alg.describe(&rhs)}));
    }
    Ok(b.finish())
}

fn group_ops(g: &RelStructure) -> Result<(usize, usize, usize)> {
    let sig = g.signature();
    let find = |name: &str| sig.index_of(name).ok_or_else(|| Error::UnknownRelation(name.to_string()));
    Ok((find("*")?, find("inv")?, find("e")?))
}

/// The relation-algebra axioms and De Morgan weakened to `¬¬c` on
/// `L^G` with `;` the group product, `⌣` inversion and `1′` the identity;
/// plain De Morgan is decided and compared with `L` being Boolean.
pub fn check_relation_algebra(instance: &str, l: &FiniteLattice, g: &RelStructure, s: &Settings) -> Result<Report> {
    require_heyting(l)?;
    let (mul, inv, _) = group_ops(g)?;
    let alg = ConvAlgebra::new(l.clone(), g.clone());
    let mut b = Builder::new("relation_algebra", instance);
    let axioms = [
        ("assoc: a;(b;c) = (a;b);c", "(op * x (op * y z))", "(op * (op * x y) z)"),
        ("unit: a;1' = a", "(op * x (op e))", "x"),
        ("unit: 1';a = a", "(op * (op e) x)", "x"),
        ("additive: (a∨b);c = a;c ∨ b;c", "(op * (join x y) z)", "(join (op * x z) (op * y z))"),
        ("additive: a;(b∨c) = a;b ∨ a;c", "(op * x (join y z))", "(join (op * x y) (op * x z))"),
        ("involution: a⌣⌣ = a", "(op inv (op inv x))", "x"),
        ("converse additive: (a∨b)⌣ = a⌣∨b⌣", "(op inv (join x y))", "(join (op inv x) (op inv y))"),
        ("converse reverses: (a;b)⌣ = b⌣;a⌣", "(op inv (op * x y))", "(op * (op inv y) (op inv x))"),
        ("negation law: (a⌣;¬(a;b))∨¬b = ¬b", "(join (op * (op inv x) (neg (op * x y))) (neg y))", "(neg y)"),
    ];
    for (name, lhs, rhs) in axioms {
        b.check(name, eq_law(&alg, lhs, rhs, s)?);
    }
    let neg = |a: &LFunction| imp(&alg, a, &alg.bottom());
    let de_morgan = |modified: bool| {
        let alg = &alg;
        move |t: &[LFunction]| -> Option<Value> {
            let (a, bb, c) = (&t[0], &t[1], &t[2]);
            let bound = if modified { neg(&neg(c)) } else { c.clone() };
            let p1 = alg.leq(&ap(alg, mul, &[a.clone(), bb.clone()]), &bound);
            let p2 = alg.leq(&ap(alg, mul, &[ap(alg, inv, std::slice::from_ref(a)), neg(c)]), &neg(bb));
            let p3 = alg.leq(&ap(alg, mul, &[neg(c), ap(alg, inv, std::slice::from_ref(bb))]), &neg(a));
            (p1 != p2 || p2 != p3).then(|| json!({"a": alg.describe(a), "b": alg.describe(bb), "c": alg.describe(c),
                                                   "sides": [p1, p2, p3]}))
        }
    };
    b.check("De Morgan with ¬¬c", law(&alg, 3, s, de_morgan(true))?);
    let original = law(&alg, 3, s, de_morgan(false))?;
    b.observe_outcome("De Morgan", original.clone());
    let boolean = l.is_boolean();
    if original.conclusive() {
        let holds = original.holds();
        b.assert(
            "De Morgan iff L Boolean",
            Outcome::exact(holds == boolean, original.tried(), || {
                json!({"de_morgan": holds, "boolean": boolean, "witness": original.witness()})
            }),
        );
    } else if boolean {
        b.assert("De Morgan iff L Boolean", original);
    } else {
        b.observe("De Morgan iff L Boolean", json!("inconclusive: De Morgan only sampled"));
    }
    Ok(b.finish())
}

/// Residuals of `;` on `L^G` by brute force, the residuation law, and the
/// identities relating them to `0′ = ¬1′` and double negation.
pub fn check_residuation(instance: &str, l: &FiniteLattice, g: &RelStructure, s: &Settings) -> Result<Report> {
    require_heyting(l)?;
    let (mul, inv, unit) = group_ops(g)?;
    let alg = ConvAlgebra::new(l.clone(), g.clone());
    let elems = alg.elements(s.budget)?;
    let m = elems.len();
    crate::algebra::check_raw_size(tuple_count(m, 2), s.budget)?;
    let index: BTreeMap<&LFunction, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let table: Vec<Vec<usize>> = (0..m)
        .into_par_iter()
        .map(|i| (0..m).map(|j| index[&ap(&alg, mul, &[elems[i].clone(), elems[j].clone()])]).collect())
        .collect();
    let leq = |i: usize, j: usize| alg.leq(&elems[i], &elems[j]);
    let sup = |it: &mut dyn Iterator<Item = usize>| it.fold(alg.bottom(), |acc, c| alg.join(&acc, &elems[c]));
    // a\b and b/a as element indices.
    let left = |a: usize, bb: usize| index[&sup(&mut (0..m).filter(|&c| leq(table[a][c], bb)))];
    let right = |bb: usize, a: usize| index[&sup(&mut (0..m).filter(|&c| leq(table[c][a], bb)))];
    let one = index[&ap(&alg, unit, &[])];
    let zero = index[&imp(&alg, &elems[one], &alg.bottom())];
    let neg = |a: usize| index[&imp(&alg, &elems[a], &alg.bottom())];
    let conv = |a: usize| index[&ap(&alg, inv, &[elems[a].clone()])];
    let mut b = Builder::new("residuation", instance);
    let ids: Vec<usize> = (0..m).collect();
    let idx = ConvIndex { m };

    let show_i = |i: usize| alg.describe(&elems[i]);
    let residuals: Vec<(usize, usize)> = (0..m * m)
        .into_par_iter()
        .map(|k| (left(k / m, k % m), right(k % m, k / m)))
        .collect();
    let lres = |a: usize, bb: usize| residuals[a * m + bb].0;
    let rres = |bb: usize, a: usize| residuals[a * m + bb].1;

    let law_out = search_exhaustive_or_sampled(&idx, &ids, 3, s, |t| {
        let (a, bb, c) = (t[0], t[1], t[2]);
        let l1 = leq(table[a][c], bb) == leq(c, lres(a, bb));
        let l2 = leq(table[c][a], bb) == leq(c, rres(bb, a));
        (!(l1 && l2)).then(|| json!({"a": show_i(a), "b": show_i(bb), "c": show_i(c)}))
    })?;
    b.check("a;c ≤ b iff c ≤ a\\b, and c;a ≤ b iff c ≤ b/a", law_out);

    let exact_all = |f: &dyn Fn(usize) -> bool| -> Outcome {
        let bad = (0..m).find(|&a| !f(a));
        Outcome::exact(bad.is_none(), m as u64, || json!({"a": show_i(bad.expect("failed"))}))
    };
    b.check("1'\\b = b", exact_all(&|bb| lres(one, bb) == bb));
    b.check("a\\0' = ¬(a⌣)", exact_all(&|a| lres(a, zero) == neg(conv(a))));
    b.check("0'/a = ¬(a⌣)", exact_all(&|a| rres(zero, a) == neg(conv(a))));
    b.check("¬(a⌣) = (¬a)⌣", exact_all(&|a| neg(conv(a)) == conv(neg(a))));
    b.check("(0'/a)\\0' = ¬¬a", exact_all(&|a| lres(rres(zero, a), zero) == neg(neg(a))));
    b.check("0'/(a\\0') = ¬¬a", exact_all(&|a| rres(zero, lres(a, zero)) == neg(neg(a))));
    b.check("0'/a = a\\0'", exact_all(&|a| rres(zero, a) == lres(a, zero)));
    let gbi_fail = (0..m).find(|&a| lres(rres(zero, a), zero) != a);
    b.observe("(0'/a)\\0' = a", json!({"holds": gbi_fail.is_none(), "witness": gbi_fail.map(show_i)}));
    let boolean = l.is_boolean();
    b.check(
        "(0'/a)\\0' = a iff L Boolean",
        Outcome::exact(gbi_fail.is_none() == boolean, m as u64, || {
            json!({"boolean": boolean, "witness": gbi_fail.map(show_i)})
        }),
    );
    Ok(b.finish())
}

/// Index space used to search over element indices instead of elements.
struct ConvIndex {
    m: usize,
}

fn search_exhaustive_or_sampled<F>(idx: &ConvIndex, ids: &[usize], k: usize, s: &Settings, probe: F) -> Result<Outcome>
where
    F: Fn(&[usize]) -> Option<Value> + Sync,
{
    use rand::{Rng, SeedableRng};
    let count = tuple_count(idx.m, k);
    match crate::termlang::Plan::choose(s.mode, count, s.budget)? {
        crate::termlang::Plan::Exhaustive => Ok(Outcome::from_search(search_exhaustive(ids, k, s.budget, probe)?)),
        crate::termlang::Plan::Sampled { samples, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for i in 0..samples {
                let t: Vec<usize> = (0..k).map(|_| rng.gen_range(0..idx.m)).collect();
                if let Some(w) = probe(&t) {
                    return Ok(Outcome::Fails { witness: w, tried: i + 1 });
                }
            }
            Ok(Outcome::Holds {
                exhaustive: false,
                tried: samples,
            })
        }
    }
}

/// Lifts an assignment of subsets to functions into `L` valued in `{0, 1}`.
fn lift_subsets(l: &FiniteLattice, assignment: &[Subset], carrier: usize) -> Vec<LFunction> {
    assignment
        .iter()
        .map(|s| {
            LFunction::new(
                (0..carrier)
                    .map(|x| if s.contains(x) { l.top() } else { l.bottom() })
                    .collect(),
            )
        })
        .collect()
}

/// Each equation gets the same verdict over `L^X` as over the complex
/// algebra, for each distributive `L`. For other lattices only "valid over
/// `L^X` implies valid over the complex algebra" is asserted. A complex
/// algebra counterexample is always re-checked at its `{0,1}`-valued lift in
/// `L^X`, which settles sampled cases.
pub fn check_equation_transfer(
    instance: &str,
    lattices: &[(String, FiniteLattice)],
    x: &RelStructure,
    pool: &[Equation],
    s: &Settings,
) -> Result<Report> {
    let complex = SubsetAlgebra::new(x.clone())?;
    let mut b = Builder::new("equation_transfer", instance);
    for (i, eq) in pool.iter().enumerate() {
        if !eq.is_negation_free() {
            b.observe(format!("eq{i}"), json!({"equation": eq.to_string(), "skipped": "uses neg or imp"}));
            continue;
        }
        let reference = check_equation(eq, &complex, s.mode, s.budget)?;
        for (lname, l) in lattices {
            let alg = ConvAlgebra::new(l.clone(), x.clone());
            let verdict = check_equation(eq, &alg, s.mode, s.budget)?;
            let name = format!("eq{i} over {lname}");
            let detail = |lifted: Option<bool>| {
                json!({"equation": eq.to_string(), "lattice": lname,
                       "complex": reference.to_json(&complex, eq), "lattice_verdict": verdict.to_json(&alg, eq),
                       "lifted_counterexample_fails": lifted})
            };
            let outcome = match reference.counterexample() {
                Some(cx) => {
                    let lifted = lift_subsets(l, cx, x.carrier());
                    let vars = eq.vars();
                    let lhs = eq.lhs.compile(alg.signature(), vars)?.eval(&alg, &lifted)?;
                    let rhs = eq.rhs.compile(alg.signature(), vars)?.eval(&alg, &lifted)?;
                    let lifted_fails = lhs != rhs;
                    Outcome::exact(lifted_fails, verdict.assignments_tried, || detail(Some(lifted_fails)))
                }
                None => {
                    let tried = verdict.assignments_tried;
                    if verdict.is_valid() {
                        Outcome::Holds {
                            exhaustive: reference.is_exhaustive() && verdict.is_exhaustive(),
                            tried,
                        }
                    } else if l.is_distributive() {
                        Outcome::Fails {
                            witness: detail(None),
                            tried,
                        }
                    } else {
                        b.observe(name.clone(), detail(None));
                        continue;
                    }
                }
            };
            b.assert(name, outcome);
        }
    }
    Ok(b.finish())
}

/// Pairs of structurally related algebras and a map between them.
struct HomCase<'a, A: Algebra, B: Algebra> {
    src: &'a A,
    dst: &'a B,
    map: &'a (dyn Fn(&A::Elem) -> B::Elem + Sync),
}

fn homomorphism_clauses<A: Algebra, B: Algebra>(
    b: &mut Builder,
    prefix: &str,
    case: &HomCase<A, B>,
    with_implies: bool,
    s: &Settings,
) -> Result<()> {
    let (src, dst, map) = (case.src, case.dst, case.map);
    let same = src.signature().len() == dst.signature().len()
        && src
            .signature()
            .iter()
            .zip(dst.signature().iter())
            .all(|(x, y)| x.arity == y.arity);
    if !same {
        return Err(Error::SignatureMismatch);
    }
    b.assert(
        format!("{prefix}: bounds"),
        Outcome::exact(
            map(&src.bottom()) == dst.bottom() && map(&src.top()) == dst.top(),
            2,
            || json!("bounds not preserved"),
        ),
    );
    let lattice_ops = law(src, 2, s, |t| {
        let (x, y) = (&t[0], &t[1]);
        let ok = map(&src.meet(x, y)) == dst.meet(&map(x), &map(y))
            && map(&src.join(x, y)) == dst.join(&map(x), &map(y));
        (!ok).then(|| show(src, t))
    })?;
    b.assert(format!("{prefix}: meets and joins"), lattice_ops);
    if with_implies {
        let implies = law(src, 2, s, |t| {
            let lhs = map(&imp(src, &t[0], &t[1]));
            let rhs = imp(dst, &map(&t[0]), &map(&t[1]));
            (lhs != rhs).then(|| show(src, t))
        })?;
        b.assert(format!("{prefix}: implication"), implies);
    }
    for (i, spec) in src.signature().iter().enumerate() {
        let out = law(src, spec.arity, s, |t| {
            let lhs = map(&ap(src, i, t));
            let mapped: Vec<B::Elem> = t.iter().map(map).collect();
            let rhs = ap(dst, i, &mapped);
            (lhs != rhs).then(|| json!({"args": show(src, t), "image_of_result": dst.describe(&lhs), "result_of_images": dst.describe(&rhs)}))
        })?;
        b.assert(format!("{prefix}: operation {}", spec.name), out);
    }
    Ok(())
}

/// Image of every element; `(injective, surjective)` and a witness of the first
/// failure of injectivity.
fn image_facts<A: Algebra, B: Algebra>(case: &HomCase<A, B>, budget: u64) -> Result<(bool, bool, Option<Value>)> {
    let src_elems = case.src.elements(budget)?;
    let dst_elems = case.dst.elements(budget)?;
    let image: Vec<B::Elem> = src_elems.par_iter().map(|e| (case.map)(e)).collect();
    let mut collision = None;
    'outer: for i in 0..image.len() {
        for j in 0..i {
            if image[i] == image[j] {
                collision = Some(json!([case.src.describe(&src_elems[j]), case.src.describe(&src_elems[i])]));
                break 'outer;
            }
        }
    }
    let surjective = dst_elems.par_iter().all(|d| image.contains(d));
    Ok((collision.is_none(), surjective, collision))
}

fn bijection_clause<A: Algebra, B: Algebra>(b: &mut Builder, prefix: &str, case: &HomCase<A, B>, budget: u64) -> Result<()> {
    let (inj, surj, collision) = image_facts(case, budget)?;
    let tried = case.src.raw_size().min(u64::MAX as u128) as u64;
    b.assert(
        format!("{prefix}: bijective"),
        Outcome::exact(inj && surj, tried, || json!({"injective": inj, "surjective": surj, "collision": collision})),
    );
    Ok(())
}

/// `φ: 2^X → subsets`, `α ↦ {x : α(x) = 1}` is a bijective homomorphism
/// for every mode of relation. For ordered structures the order-preserving
/// functions map onto up-sets, implication included.
pub fn check_complex_isomorphism(instance: &str, x: &RelStructure, s: &Settings) -> Result<Report> {
    let two = catalog::chain(2)?;
    let mut b = Builder::new("complex_isomorphism", instance);
    let conv = ConvAlgebra::new(two.clone(), x.clone());
    let sub = SubsetAlgebra::new(x.clone())?;
    let map = |a: &LFunction| iso_phi(&two, a).expect("two-element lattice");
    let case = HomCase {
        src: &conv,
        dst: &sub,
        map: &map,
    };
    bijection_clause(&mut b, "2^X", &case, s.budget)?;
    homomorphism_clauses(&mut b, "2^X", &case, true, s)?;
    let round_trip = law(&sub, 1, s, |t| {
        let back = iso_phi_inv(&two, t[0], x.carrier()).expect("two-element lattice");
        (map(&back) != t[0]).then(|| show(&sub, t))
    })?;
    b.assert("2^X: inverse", round_trip);
    if x.order().is_some() {
        let conv = ConvAlgebra::ordered(two.clone(), x.clone())?;
        let sub = SubsetAlgebra::ordered(x.clone())?;
        let case = HomCase {
            src: &conv,
            dst: &sub,
            map: &map,
        };
        bijection_clause(&mut b, "ordered 2^X", &case, s.budget)?;
        homomorphism_clauses(&mut b, "ordered 2^X", &case, true, s)?;
    }
    Ok(b.finish())
}

/// Instances for [`check_structural_isos`], by catalog name.
#[derive(Debug, Clone)]
pub struct IsoConfig {
    /// `(L₁, L₂, X)`: `(L₁×L₂)^X ≅ L₁^X × L₂^X`.
    pub products: Vec<(String, String, String)>,
    /// `(L, X, Y)`: `L^{X⊕Y} ≅ L^X × L^Y`.
    pub coproducts: Vec<(String, String, String)>,
    /// `(L, M, φ table, X)`: `φ^X` is a homomorphism, one-one/onto iff `φ` is.
    pub morphisms: Vec<(String, String, Vec<Elem>, String)>,
    pub pmorphisms: Vec<PCase>,
    /// `(L, ordered X)`: order-preserving functions form a subalgebra.
    pub ordered: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct PCase {
    pub lattice: String,
    pub source: String,
    pub target: String,
    /// Restrict both structures to these relations before checking.
    pub reduct: Option<Vec<String>>,
    pub map: Vec<usize>,
}

impl Default for IsoConfig {
    fn default() -> Self {
        let t = |a: &str, b: &str, c: &str| (a.to_string(), b.to_string(), c.to_string());
        IsoConfig {
            products: vec![
                t("chain(2)", "chain(2)", "Z(2)"),
                t("chain(2)", "chain(3)", "nabla(2)"),
                t("chain(3)", "chain(2)", "ordered_chain(2)"),
            ],
            coproducts: vec![
                t("chain(3)", "nabla(1)", "nabla(1)"),
                t("chain(3)", "nabla(2)", "nabla(1)"),
                t("chain(2)", "Z(2)", "Z(2)"),
            ],
            morphisms: vec![
                ("chain(3)".into(), "chain(2)".into(), vec![0, 1, 1], "Z(2)".into()),
                ("chain(3)".into(), "chain(2)".into(), vec![0, 0, 1], "nabla(2)".into()),
                ("chain(2)".into(), "chain(3)".into(), vec![0, 2], "Z(2)".into()),
                ("chain(3)".into(), "boolean(2)".into(), vec![0, 1, 3], "Z(3)".into()),
                ("boolean(2)".into(), "chain(2)".into(), vec![0, 1, 0, 1], "type2(2)".into()),
                ("chain(3)".into(), "chain(3)".into(), vec![0, 1, 2], "nabla_ext(2)".into()),
            ],
            pmorphisms: vec![
                PCase {
                    lattice: "chain(3)".into(),
                    source: "Z(4)".into(),
                    target: "Z(2)".into(),
                    reduct: Some(vec!["*".into(), "inv".into()]),
                    map: vec![0, 1, 0, 1],
                },
                PCase {
                    lattice: "chain(3)".into(),
                    source: "Z(3)".into(),
                    target: "Z(3)".into(),
                    reduct: None,
                    map: vec![0, 1, 2],
                },
                PCase {
                    lattice: "boolean(2)".into(),
                    source: "nabla(3)".into(),
                    target: "nabla(1)".into(),
                    reduct: None,
                    map: vec![0, 0, 0],
                },
                PCase {
                    lattice: "chain(2)".into(),
                    source: "nabla_ext(3)".into(),
                    target: "nabla_ext(2)".into(),
                    reduct: None,
                    map: vec![0, 1, 1],
                },
            ],
            ordered: vec![
                ("chain(3)".into(), "ordered_chain(2)".into()),
                ("chain(3)".into(), "ordered_chain(3)".into()),
                ("boolean(2)".into(), "ordered_chain(3)".into()),
            ],
        }
    }
}

/// One report per configured instance.
pub fn check_structural_isos(config: &IsoConfig, s: &Settings) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for (l1, l2, x) in &config.products {
        out.push(product_case(l1, l2, x, s)?);
    }
    for (l, x, y) in &config.coproducts {
        out.push(coproduct_case(l, x, y, s)?);
    }
    for (l, m, table, x) in &config.morphisms {
        out.push(morphism_case(l, m, table, x, s)?);
    }
    for p in &config.pmorphisms {
        out.push(pmorphism_case(p, s)?);
    }
    for (l, x) in &config.ordered {
        out.push(ordered_case(l, x, s)?);
    }
    Ok(out)
}

fn product_case(l1: &str, l2: &str, x: &str, s: &Settings) -> Result<Report> {
    let (a, c) = (catalog::get_lattice(l1)?, catalog::get_lattice(l2)?);
    let x_s = catalog::get_structure(x)?;
    let prod = a.product(&c);
    let mut b = Builder::new("product_isomorphism", &format!("({l1} x {l2})^{x}"));
    let whole = ConvAlgebra::new(prod.clone(), x_s.clone());
    let left = ConvAlgebra::new(a, x_s.clone());
    let right = ConvAlgebra::new(c, x_s);
    let pair = ProductAlgebra::new(&left, &right)?;
    let map = |f: &LFunction| crate::convolution::split_product(&prod, f).expect("built as a product");
    let case = HomCase {
        src: &whole,
        dst: &pair,
        map: &map,
    };
    bijection_clause(&mut b, "split", &case, s.budget)?;
    homomorphism_clauses(&mut b, "split", &case, prod.is_distributive(), s)?;
    Ok(b.finish())
}

fn coproduct_case(l: &str, x: &str, y: &str, s: &Settings) -> Result<Report> {
    let lat = catalog::get_lattice(l)?;
    let (xs, ys) = (catalog::get_structure(x)?, catalog::get_structure(y)?);
    let sum = xs.disjoint_union(&ys)?;
    let mut b = Builder::new("coproduct_isomorphism", &format!("{l}^({x} + {y})"));
    let whole = ConvAlgebra::new(lat.clone(), sum);
    let left = ConvAlgebra::new(lat.clone(), xs.clone());
    let right = ConvAlgebra::new(lat.clone(), ys);
    let pair = ProductAlgebra::new(&left, &right)?;
    let split = xs.carrier();
    let map = |f: &LFunction| {
        (
            LFunction::new(f.values()[..split].to_vec()),
            LFunction::new(f.values()[split..].to_vec()),
        )
    };
    let case = HomCase {
        src: &whole,
        dst: &pair,
        map: &map,
    };
    let count = whole.elements(s.budget)?.len() as u128;
    b.assert(
        "element count",
        Outcome::exact(count == left.raw_size() * right.raw_size(), 1, || json!({"count": count})),
    );
    bijection_clause(&mut b, "restrict", &case, s.budget)?;
    homomorphism_clauses(&mut b, "restrict", &case, lat.is_distributive(), s)?;
    Ok(b.finish())
}

fn morphism_case(l: &str, m: &str, table: &[Elem], x: &str, s: &Settings) -> Result<Report> {
    let (src_l, dst_l) = (catalog::get_lattice(l)?, catalog::get_lattice(m)?);
    let xs = catalog::get_structure(x)?;
    let phi = LatticeMorphism::new(src_l.clone(), dst_l.clone(), table.to_vec())?;
    let mut b = Builder::new("lifted_morphism", &format!("{l} -> {m} {table:?} over {x}"));
    let valid = phi.validate();
    b.assert(
        "φ is a lattice morphism",
        Outcome::exact(valid.is_ok(), 1, || json!(valid.as_ref().err().map(|e| e.to_string()))),
    );
    let src = ConvAlgebra::new(src_l, xs.clone());
    let dst = ConvAlgebra::new(dst_l, xs);
    let map = |f: &LFunction| crate::convolution::lift_lattice_morphism(&phi, f, false).expect("values in range");
    let case = HomCase {
        src: &src,
        dst: &dst,
        map: &map,
    };
    homomorphism_clauses(&mut b, "φ^X", &case, false, s)?;
    let (inj, surj, _) = image_facts(&case, s.budget)?;
    b.assert(
        "φ one-one iff φ^X one-one",
        Outcome::exact(inj == phi.is_injective(), 1, || json!({"phi": phi.is_injective(), "lifted": inj})),
    );
    b.assert(
        "φ onto iff φ^X onto",
        Outcome::exact(surj == phi.is_surjective(), 1, || json!({"phi": phi.is_surjective(), "lifted": surj})),
    );
    Ok(b.finish())
}

fn pmorphism_case(p: &PCase, s: &Settings) -> Result<Report> {
    let l = catalog::get_lattice(&p.lattice)?;
    let (mut xs, mut ys) = (catalog::get_structure(&p.source)?, catalog::get_structure(&p.target)?);
    let mut b = Builder::new(
        "pullback",
        &format!("{} over {} -> {} {:?}", p.lattice, p.source, p.target, p.map),
    );
    if let Some(names) = &p.reduct {
        let full = check_p_morphism(&p.map, &xs, &ys)?;
        b.observe(
            "full signature",
            json!({"p_morphism": full.is_none(), "violation": full.map(|v| v.to_string())}),
        );
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        xs = xs.reduct(&names)?;
        ys = ys.reduct(&names)?;
    }
    let pm = PMorphism::new(p.map.clone(), &xs, &ys)?;
    let src = ConvAlgebra::new(l.clone(), ys);
    let dst = ConvAlgebra::new(l.clone(), xs);
    let map = |f: &LFunction| pm.pull(f);
    let case = HomCase {
        src: &src,
        dst: &dst,
        map: &map,
    };
    homomorphism_clauses(&mut b, "p^L", &case, l.is_distributive(), s)?;

    let elems = src.elements(s.budget)?;
    if elems.len() <= SUBSET_FALLBACK_LIMIT && (1u128 << elems.len()) <= s.budget as u128 {
        let bad = (0u64..1 << elems.len()).into_par_iter().find_first(|&mask| {
            let family: Vec<&LFunction> = (0..elems.len()).filter(|&i| mask >> i & 1 == 1).map(|i| &elems[i]).collect();
            let sup = family.iter().fold(src.bottom(), |acc, f| src.join(&acc, f));
            let inf = family.iter().fold(src.top(), |acc, f| src.meet(&acc, f));
            let psup = family.iter().fold(dst.bottom(), |acc, f| dst.join(&acc, &pm.pull(f)));
            let pinf = family.iter().fold(dst.top(), |acc, f| dst.meet(&acc, &pm.pull(f)));
            pm.pull(&sup) != psup || pm.pull(&inf) != pinf
        });
        b.assert(
            "p^L: arbitrary joins and meets",
            Outcome::exact(bad.is_none(), 1 << elems.len(), || json!({"family_mask": bad})),
        );
    } else {
        b.observe("p^L: arbitrary joins and meets", json!({"skipped": "too many families"}));
    }
    let (inj, surj, _) = image_facts(&case, s.budget)?;
    if l.size() >= 2 {
        b.assert(
            "p onto iff p^L one-one",
            Outcome::exact(inj == pm.is_surjective(), 1, || json!({"p_onto": pm.is_surjective(), "lifted_one_one": inj})),
        );
        b.assert(
            "p one-one iff p^L onto",
            Outcome::exact(surj == pm.is_injective(), 1, || json!({"p_one_one": pm.is_injective(), "lifted_onto": surj})),
        );
    }
    Ok(b.finish())
}

fn ordered_case(l: &str, x: &str, s: &Settings) -> Result<Report> {
    let lat = catalog::get_lattice(l)?;
    let xs = catalog::get_structure(x)?;
    let mut b = Builder::new("ordered_subalgebra", &format!("{l}^{x}"));
    let ordered = ConvAlgebra::ordered(lat.clone(), xs.clone())?;
    let all = ConvAlgebra::new(lat.clone(), xs.clone());
    for (i, spec) in xs.signature().iter().enumerate() {
        let out = law(&all, spec.arity, s, |t| {
            let r = ap(&all, i, t);
            (!ordered.is_order_preserving(&r)).then(|| json!({"args": show(&all, t), "result": all.describe(&r)}))
        })?;
        b.assert(format!("operation {} yields order-preserving functions", spec.name), out);
    }
    let lattice_ops = law(&ordered, 2, s, |t| {
        let ok = [ordered.meet(&t[0], &t[1]), ordered.join(&t[0], &t[1])]
            .iter()
            .all(|r| ordered.is_order_preserving(r));
        (!ok).then(|| show(&ordered, t))
    })?;
    b.assert("meets and joins stay order-preserving", lattice_ops);
    if lat.is_distributive() {
        let heyting = law(&ordered, 3, s, |t| {
            let i = imp(&ordered, &t[0], &t[1]);
            let ok = ordered.is_order_preserving(&i)
                && ordered.leq(&ordered.meet(&t[0], &t[2]), &t[1]) == ordered.leq(&t[2], &i);
            (!ok).then(|| show(&ordered, t))
        })?;
        b.assert("implication is the relative pseudocomplement", heyting);
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(name: &str) -> FiniteLattice {
        catalog::get_lattice(name).unwrap()
    }

    fn exhaustive() -> Settings {
        Settings {
            mode: CheckMode::Exhaustive,
            budget: DEFAULT_BUDGET,
        }
    }

    #[test]
    fn operator_examples() {
        let alg = ConvAlgebra::new(lat("chain(3)"), catalog::cyclic(2).unwrap());
        let r = check_operator("z2", &alg, 0, OperatorKind::Additive, &exhaustive()).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        let nullary = check_operator("e", &alg, 2, OperatorKind::Additive, &exhaustive()).unwrap();
        assert_eq!(nullary.status, Status::Pass);
        assert!(check_operator("x", &alg, 0, OperatorKind::Multiplicative, &exhaustive()).is_err());

        let ext = ConvAlgebra::new(lat("boolean(2)"), RelStructure::full_extended(2).unwrap());
        let r = check_operator("box", &ext, 1, OperatorKind::Multiplicative, &exhaustive()).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.clause("position 0: all families").unwrap().status, Status::Pass);
    }

    #[test]
    fn finite_support_and_deltas() {
        let alg = ConvAlgebra::new(lat("chain(3)"), catalog::cyclic(2).unwrap());
        for op in 0..3 {
            let r = check_finitely_supported("z2", &alg, op, &exhaustive()).unwrap();
            assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        }
        let l = alg.lattice();
        let (a, bb) = (LFunction::new(vec![1, 0]), LFunction::new(vec![0, 2]));
        let da = delta_decompose(l, &a);
        let db = delta_decompose(l, &bb);
        assert_eq!((da.len(), db.len()), (1, 1));
        assert_eq!(
            alg.conv_op(0, &[da[0].clone(), db[0].clone()]).unwrap(),
            alg.conv_op(0, &[a, bb]).unwrap()
        );
    }

    #[test]
    fn closure_examples() {
        let c3 = lat("chain(3)");
        let frame = |t: &[[usize; 2]]| binary_frame(2, t.iter().map(|p| p.to_vec()).collect(), "f", Mode::Join).unwrap();
        let r = check_closure_correspondence("preorder", &c3, &frame(&[[0, 0], [1, 1], [0, 1]]), &exhaustive()).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        let r = check_closure_correspondence("01", &c3, &frame(&[[0, 1]]), &exhaustive()).unwrap();
        assert_eq!(r.status, Status::Pass);
        let r = check_closure_correspondence("empty", &c3, &frame(&[]), &exhaustive()).unwrap();
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn z2_associativity_pool() {
        for (name, l) in catalog::lattice_pool() {
            let r = check_z2_associativity(&name, &l, &exhaustive()).unwrap();
            assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
            let assoc = r.clause("associative").unwrap().detail.as_ref().unwrap()["holds"].as_bool().unwrap();
            assert_eq!(assoc, l.is_distributive(), "{name}");
        }
    }

    #[test]
    fn nabla_and_monadic() {
        for n in 1..=3 {
            let r = check_nabla_equation("c3", &lat("chain(3)"), n, &exhaustive()).unwrap();
            assert_eq!(r.status, Status::Pass);
            let r = check_monadic_axioms("c3", &lat("chain(3)"), n, &exhaustive()).unwrap();
            assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        }
        let r = check_nabla_equation("n5", &lat("N5"), 2, &exhaustive()).unwrap();
        assert_eq!(r.status, Status::Observed);
    }

    #[test]
    fn relation_algebra_and_residuation() {
        let z2 = catalog::cyclic(2).unwrap();
        let r = check_relation_algebra("c3", &lat("chain(3)"), &z2, &exhaustive()).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        let dm = r.clause("De Morgan").unwrap().detail.as_ref().unwrap();
        assert_eq!(dm["holds"], json!(false));
        let r = check_relation_algebra("b2", &lat("boolean(2)"), &z2, &exhaustive()).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.clause("De Morgan").unwrap().detail.as_ref().unwrap()["holds"], json!(true));

        for l in ["chain(3)", "boolean(2)"] {
            let r = check_residuation(l, &lat(l), &z2, &exhaustive()).unwrap();
            assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        }
        assert!(matches!(
            check_relation_algebra("n5", &lat("N5"), &z2, &exhaustive()),
            Err(Error::NotHeyting)
        ));
    }

    #[test]
    fn transfer_examples() {
        let z2 = catalog::cyclic(2).unwrap();
        let ls: Vec<(String, FiniteLattice)> = ["chain(3)", "boolean(2)", "N5"]
            .iter()
            .map(|n| (n.to_string(), lat(n)))
            .collect();
        let r = check_equation_transfer("z2", &ls, &z2, &catalog::group_equations(), &Settings::default()).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        // associativity is valid over the complex algebra but not over N5^Z2
        let n5 = r.clause("eq1 over N5").unwrap();
        assert_eq!(n5.status, Status::Observed);
    }

    #[test]
    fn isomorphisms() {
        for (name, x) in catalog::structure_pool(0) {
            let r = check_complex_isomorphism(&name, &x, &exhaustive()).unwrap();
            assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        }
        let r = check_complex_isomorphism("oc3", &catalog::ordered_chain(3).unwrap(), &exhaustive()).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        for r in check_structural_isos(&IsoConfig::default(), &Settings::default()).unwrap() {
            assert_eq!(r.status, Status::Pass, "{}", r.to_json_line());
        }
    }

    #[test]
    fn report_shape() {
        let r = check_nabla_equation("c3", &lat("chain(3)"), 2, &exhaustive()).unwrap();
        let v: Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["checker"], "nabla_equation");
        assert_eq!(v["status"], "pass");
        assert!(v.get("witness").is_none());
        assert!(v["stats"]["clauses"].is_array());
    }
}
