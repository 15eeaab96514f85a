//! Plain-text listing of an LP or MILP for external diffing.
//!
//! ```text
//! LP <min|max> VARS <n> ROWS <m>
//! OBJ <constant>
//! C <j> <coef>                 nonzero objective entries, ascending j
//! R <i> <le|eq|ge> <rhs>       one line per row, in row order
//! A <j> <coef>                 nonzero entries of the preceding row, ascending j
//! B <j> <lower> <upper>        every variable, ascending j (inf / -inf spelled out)
//! I <j>                        integer variables, ascending j
//! N <j> <name>                 names, when the program carries them
//! END
//! ```
//!
//! Numbers use Rust's shortest round-trip formatting, so listings are stable
//! byte-for-byte for identical programs.

use std::io::{self, Write};

use super::{LinearProgram, Relation, Sense};

pub fn write_listing(
    out: &mut dyn Write,
    lp: &LinearProgram,
    integer: Option<&[bool]>,
) -> io::Result<()> {
    let sense = match lp.sense {
        Sense::Minimize => "min",
        Sense::Maximize => "max",
    };
    writeln!(
        out,
        "LP {sense} VARS {} ROWS {}",
        lp.num_vars(),
        lp.rows.len()
    )?;
    writeln!(out, "OBJ {}", lp.constant)?;
    for (j, &c) in lp.objective.iter().enumerate() {
        if c != 0.0 {
            writeln!(out, "C {j} {c}")?;
        }
    }
    for (i, row) in lp.rows.iter().enumerate() {
        let rel = match row.relation {
            Relation::Le => "le",
            Relation::Eq => "eq",
            Relation::Ge => "ge",
        };
        writeln!(out, "R {i} {rel} {}", row.rhs)?;
        let mut coeffs = row.coeffs.clone();
        coeffs.sort_by_key(|&(j, _)| j);
        for (j, a) in coeffs {
            writeln!(out, "A {j} {a}")?;
        }
    }
    for j in 0..lp.num_vars() {
        writeln!(out, "B {j} {} {}", lp.lower[j], lp.upper[j])?;
    }
    if let Some(mask) = integer {
        for (j, _) in mask.iter().enumerate().filter(|(_, &b)| b) {
            writeln!(out, "I {j}")?;
        }
    }
    if let Some(names) = &lp.names {
        for (j, name) in names.iter().enumerate() {
            writeln!(out, "N {j} {name}")?;
        }
    }
    writeln!(out, "END")
}
