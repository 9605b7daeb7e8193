use thiserror::Error;

use crate::relstruct::Mode;

/// Every failure the workbench can report, grouped by the module that raises it.
#[derive(Debug, Error)]
pub enum Error {
    // lattices
    #[error("a lattice needs at least one element")]
    EmptyLattice,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order is not antisymmetric: `{a}` <= `{b}` and `{b}` <= `{a}`")]
    NotAPoset { a: String, b: String },
    #[error("`{a}` and `{b}` have no {missing}")]
    NotALattice {
        a: String,
        b: String,
        missing: &'static str,
    },
    #[error("lattice is not distributive, so it has no Heyting implication")]
    NotHeyting,

    // relational structures
    #[error("carrier must be nonempty")]
    EmptyCarrier,
    #[error("duplicate relation name `{0}`")]
    DuplicateRelation(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation `{relation}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("{context}: index {index} out of range (size {bound})")]
    IndexOutOfRange {
        context: String,
        index: usize,
        bound: usize,
    },
    #[error("relation `{relation}` is not {closure}: contains {tuple:?} but not {required:?}")]
    OrderNotClosed {
        relation: String,
        closure: &'static str,
        tuple: Vec<usize>,
        required: Vec<usize>,
    },
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("not a group: {0}")]
    NotAGroup(String),

    // convolution algebras
    #[error("relation `{relation}` is {found:?}-mode, expected {expected:?}")]
    WrongMode {
        relation: String,
        expected: Mode,
        found: Mode,
    },
    #[error("function has {found} values, carrier has {expected} points")]
    LengthMismatch { expected: usize, found: usize },
    #[error("lattice has {0} elements, the subset isomorphism needs exactly 2")]
    NotTwoElement(usize),
    #[error("not a lattice morphism: {0}")]
    NotAMorphism(String),
    #[error("not a p-morphism: {0}")]
    NotAPMorphism(String),
    #[error("lattice was not built as a product")]
    NotAProductLattice,
    #[error("structure carries no order")]
    NotOrdered,
    #[error("enumeration needs {count} evaluations, budget is {cap}")]
    BudgetExceeded { count: u128, cap: u64 },

    // term language
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown operation `{0}`")]
    UnknownOperation(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    // catalog
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("type-2 grid needs at least 2 points, got {0}")]
    InvalidGrid(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
