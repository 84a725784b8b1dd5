//! File formats and report plumbing for the `lipdiam` command-line tool.
//!
//! JSON is the canonical interchange format. Rational scalars travel as
//! strings (`"3/4"`, `"0.25"`, `"2"`) or JSON numbers, both parsed exactly;
//! all emission uses the canonical `p/q` string form.

pub mod formats;
pub mod report;

pub use formats::{
    load_space, parse_rational_arg, space_hash, space_to_file, FamilyFile, FreeVectorFile,
    FunctionFile, SliceEntry, SpaceFile, SpaceRef,
};
pub use report::{flatten_csv, render_text, Report};
