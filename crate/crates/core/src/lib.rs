//! Congruence p-schemes for constant-term sequences.
//!
//! Sequences of the form `A(n) = ct[P(x)^n Q(x)]`, with `P` and `Q` Laurent
//! polynomials, reduce modulo a prime power `p^r` to p-automatic sequences.
//! This crate computes the finite systems of recurrences witnessing that —
//! linear, scaling and automatic p-schemes — and puts them to work: fast
//! evaluation at astronomically large indices, exact attained/forbidden
//! residue sets, schemes for p-adic valuations, smallest-index searches, and
//! prime scans for divisibility results.
//!
//! The pieces:
//!
//! * [`modring`]: arithmetic in `Z/p^r`, including Howell-form linear algebra;
//! * [`laurent`]: sparse Laurent polynomials, the Cartier operator, symmetry
//!   folding;
//! * [`polyparse`]: the textual expression grammar;
//! * [`scheme`]: scheme construction, minimization, serialization, DOT export;
//! * [`analyze`]: evaluation and analysis of computed schemes;
//! * [`catalog`]: built-in sequences (Catalan, Motzkin, both Apery families);
//! * [`oracle`]: brute-force constant terms for cross-checks.

pub mod analyze;
pub mod catalog;
pub mod laurent;
pub mod modring;
pub mod oracle;
pub mod polyparse;
pub mod scheme;

pub use analyze::{
    crt_combine, divisibility_scan, first_index, nth_term, residue_census, value_set,
    valuation_scheme, AnalyzeError, BigIndex, ScanOptions, ScanReport, ValueSet,
    DEFAULT_NODE_CAP,
};
pub use catalog::{builtin, motzkin_nu2_reference, SequenceDef};
pub use laurent::{
    canonical_fold, detect_symmetries, DegreeKind, LaurentError, LaurentPoly, Monomial,
    SymmetryGroup,
};
pub use modring::{Modulus, ModringError, Residue, RowMatrix};
pub use oracle::{ct_direct, sequence_prefix, OracleError};
pub use polyparse::{parse_laurent, ExprSource, ParseError};
pub use scheme::{
    compute_scheme, degree_bound, deserialize, export_dot, minimize, scaling_to_automatic,
    serialize, ComputeOptions, CongruenceScheme, SchemeBuilder, SchemeError, SchemeKind,
    SchemeMeta,
};
