//! The single-qubit walkthrough behind `qbc demo`.

use std::fmt::Write;

use qbc::attacks::run_commitment_attack;
use qbc::protocols::{bb84_script, script_execute};
use qbc::qmath::{fidelity, reduced_state, DensityMatrix};

use crate::error::CliError;

fn show(m: &DensityMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|j| {
                let z = m.matrix()[(i, j)];
                format!("{:+.4}{:+.4}i", z.re, z.im)
            })
            .collect();
        writeln!(s, "    [{}]", row.join("  ")).unwrap();
    }
    s
}

pub fn demo() -> Result<String, CliError> {
    let script = bb84_script();
    let mut out = String::new();
    writeln!(out, "Single-qubit BB84-style commitment").unwrap();
    writeln!(out, "  bit 0: send |0> or |+>; bit 1: send |1> or |->.").unwrap();
    writeln!(out, "  Alice keeps the choice of basis as a qubit entangled with the photon.").unwrap();
    writeln!(out).unwrap();

    let r0 = reduced_state(script_execute(&script, 0)?.state(), &[1])?;
    let r1 = reduced_state(script_execute(&script, 1)?.state(), &[1])?;
    writeln!(out, "Bob's photon after committing to 0:").unwrap();
    out.push_str(&show(&r0));
    writeln!(out, "Bob's photon after committing to 1:").unwrap();
    out.push_str(&show(&r1));
    writeln!(out, "F(rho0, rho1) = {:.6}", fidelity(&r0, &r1)?).unwrap();
    writeln!(out).unwrap();

    let attack = run_commitment_attack(&script)?;
    writeln!(out, "Alice commits to 0, then rotates her kept qubit and opens as 1.").unwrap();
    writeln!(out, "Bob checks the opened state against an honest commitment to 1.").unwrap();
    writeln!(out).unwrap();
    write!(out, "{}", attack.report).unwrap();
    Ok(out)
}
