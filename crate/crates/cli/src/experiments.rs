//! One function per experiment kind. Trials run in parallel, each on its own
//! RNG stream `stream(master_seed, trial)`, and rows are collected in trial
//! order, so the output never depends on scheduling.

use rand::Rng;
use rayon::prelude::*;

use qbc::attacks::{bcjl_epr_attack, run_commitment_attack, two_party_attack, AttackReport, MAX_EXACT_OPENING_N};
use qbc::protocols::{
    bcjl_run, choose_r, leaky_script, random_concealing_script, random_script, BcjlParams, FunctionTable,
};
use qbc::rng::stream;

use crate::config::{ExperimentConfig, ExperimentKind, FunctionKind, ScriptFamily, DEFAULT_DOMAIN};
use crate::error::CliError;
use crate::table::{Cell, Table};
use crate::BUILD_ID;

const REPORT_COLUMNS: [&str; 6] =
    ["fidelity", "delta", "achieved_overlap", "acceptance_probability", "detection_probability", "u_dim"];

fn report_cells(r: &AttackReport) -> Vec<Cell> {
    vec![
        r.fidelity.into(),
        r.delta.into(),
        r.achieved_overlap.into(),
        r.acceptance_probability.into(),
        r.detection_probability.into(),
        r.u_dim.into(),
    ]
}

/// Runs a validated config and returns the full table, summary row included.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Table, CliError> {
    config.validate()?;
    let seed = config.seed();
    let (label, mut table, rows) = match config.kind {
        ExperimentKind::BcjlHonest => ("trial", bcjl_honest_table(), par_trials(config, bcjl_honest_row)?),
        ExperimentKind::BcjlAttack => ("trial", bcjl_attack_table(), par_trials(config, bcjl_attack_row)?),
        ExperimentKind::ScriptAttack => ("trial", Table::new(&REPORT_COLUMNS), par_trials(config, script_attack_row)?),
        ExperimentKind::FidelitySweep => {
            let mut cols = vec!["leak"];
            cols.extend(REPORT_COLUMNS);
            let rows = config
                .sweep_grid()
                .par_iter()
                .map(|&s| {
                    let r = run_commitment_attack(&leaky_script(s)?)?.report;
                    let mut cells = vec![Cell::Float(s)];
                    cells.extend(report_cells(&r));
                    Ok(cells)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            ("point", Table::new(&cols), rows)
        }
        ExperimentKind::TwoParty => {
            let f = function_table(config)?;
            let rows = (0..config.trials)
                .into_par_iter()
                .map(|i| two_party_row(&f, &mut stream(seed, i as u64)))
                .collect::<Result<Vec<_>, CliError>>()?;
            ("trial", two_party_table(), rows)
        }
    };
    for (i, cells) in rows.into_iter().enumerate() {
        table.push(label, i, seed, BUILD_ID, cells);
    }
    table.summarize(seed, BUILD_ID);
    Ok(table)
}

fn par_trials<F>(config: &ExperimentConfig, trial: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    F: Fn(&ExperimentConfig, &mut qbc::rng::Stream) -> Result<Vec<Cell>, CliError> + Sync,
{
    (0..config.trials)
        .into_par_iter()
        .map(|i| trial(config, &mut stream(config.seed(), i as u64)))
        .collect()
}

fn bcjl_params(config: &ExperimentConfig) -> Result<BcjlParams, CliError> {
    let mut p = BcjlParams::new(config.n.unwrap_or(0), config.k.unwrap_or(0), config.epsilon)?;
    if let Some(t) = config.threshold_factor {
        p.threshold_factor = t;
    }
    Ok(p)
}

fn bcjl_honest_table() -> Table {
    Table::new(&[
        "code_rate",
        "committed_bit",
        "matched",
        "errors",
        "error_rate",
        "codeword_ok",
        "error_ok",
        "parity_ok",
        "accepted",
    ])
}

fn bcjl_honest_row(config: &ExperimentConfig, rng: &mut qbc::rng::Stream) -> Result<Vec<Cell>, CliError> {
    let params = bcjl_params(config)?;
    let bit = rng.random_range(0..2u8);
    let v = bcjl_run(&params, bit, true, rng)?.verdict;
    Ok(vec![
        (params.k as f64 / params.n as f64).into(),
        bit.into(),
        v.matched.into(),
        v.errors.into(),
        v.error_rate().into(),
        v.codeword_ok.into(),
        v.error_ok.into(),
        v.parity_ok.into(),
        v.accepted().into(),
    ])
}

fn bcjl_attack_table() -> Table {
    let mut cols = vec!["code_rate", "r"];
    cols.extend(REPORT_COLUMNS);
    cols.extend(["pass_probability_0", "pass_probability_1", "opened_0", "opened_1", "both_opened"]);
    Table::new(&cols)
}

/// Draws `G` and `r`, runs the delayed-choice attack, then samples one
/// opening of each bit.
fn bcjl_attack_row(config: &ExperimentConfig, rng: &mut qbc::rng::Stream) -> Result<Vec<Cell>, CliError> {
    let params = bcjl_params(config)?;
    let code = params.draw_code(rng)?;
    let r = choose_r(&code, rng)?;
    let attack = bcjl_epr_attack(&code, &r)?;
    let exact = |bit| -> Result<Cell, CliError> {
        if code.n() <= MAX_EXACT_OPENING_N {
            Ok(attack.opening_pass_probability(bit)?.into())
        } else {
            Ok(Cell::Empty)
        }
    };
    let opened0 = attack.simulate_opening(0, rng)?.accepted();
    let opened1 = attack.simulate_opening(1, rng)?.accepted();
    let mut cells = vec![code.rate().into(), Cell::Text(r.to_string())];
    cells.extend(report_cells(&attack.report));
    cells.extend([exact(0)?, exact(1)?, opened0.into(), opened1.into(), (opened0 && opened1).into()]);
    Ok(cells)
}

fn script_attack_row(config: &ExperimentConfig, rng: &mut qbc::rng::Stream) -> Result<Vec<Cell>, CliError> {
    let script = match config.script {
        ScriptFamily::Random => random_script(2, 1, 1, rng)?,
        ScriptFamily::Concealing => random_concealing_script(1, 1, 1, rng)?,
    };
    Ok(report_cells(&run_commitment_attack(&script)?.report))
}

fn function_table(config: &ExperimentConfig) -> Result<FunctionTable, CliError> {
    let d = config.domain.unwrap_or(DEFAULT_DOMAIN);
    Ok(match config.function {
        FunctionKind::Equality => FunctionTable::equality(d)?,
        FunctionKind::Constant => FunctionTable::constant(d, d, 0)?,
        // the table gets a stream no trial uses
        FunctionKind::Random => FunctionTable::random(d, d, &mut stream(config.seed(), u64::MAX))?,
    })
}

fn two_party_table() -> Table {
    Table::new(&["x", "y_start", "learned", "expected", "recovered", "max_disturbance", "independence_gap"])
}

fn two_party_row(f: &FunctionTable, rng: &mut qbc::rng::Stream) -> Result<Vec<Cell>, CliError> {
    let x = rng.random_range(0..f.nx());
    let y_start = rng.random_range(0..f.ny());
    let got = two_party_attack(f, x, y_start, rng)?;
    let bits = |row: &[u8]| row.iter().map(|b| char::from(b'0' + b)).collect::<String>();
    let learned = got.row();
    Ok(vec![
        x.into(),
        y_start.into(),
        Cell::Text(bits(&learned)),
        Cell::Text(bits(f.row(x))),
        (learned == f.row(x)).into(),
        got.max_disturbance.into(),
        got.independence_gap.into(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(text).unwrap()
    }

    #[test]
    fn honest_noiseless_runs_all_verify() {
        let t = run_experiment(&cfg(r#"{"kind": "bcjl-honest", "master_seed": 3, "n": 12, "k": 6, "trials": 40}"#))
            .unwrap();
        assert_eq!(t.rows.len(), 41);
        let acc = t.column("accepted").unwrap();
        assert!(t.rows[..40].iter().all(|r| r[acc] == Cell::Bool(true)));
        assert_eq!(t.rows[40][acc], Cell::Float(1.0));
    }

    #[test]
    fn sweep_detection_is_one_minus_fidelity_squared() {
        let t = run_experiment(&cfg(r#"{"kind": "fidelity-sweep", "master_seed": 0}"#)).unwrap();
        let (f, d) = (t.column("fidelity").unwrap(), t.column("detection_probability").unwrap());
        for row in &t.rows[..t.rows.len() - 1] {
            let (f, d) = (row[f].as_f64().unwrap(), row[d].as_f64().unwrap());
            assert!((d - (1.0 - f * f)).abs() < 1e-6);
        }
    }

    #[test]
    fn caps_surface_as_cap_errors() {
        let e = run_experiment(&cfg(r#"{"kind": "bcjl-attack", "master_seed": 1, "n": 12, "k": 2}"#)).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{e}");
        let e = run_experiment(&cfg(r#"{"kind": "two-party", "master_seed": 1, "domain": 9}"#)).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{e}");
        let e = run_experiment(&cfg(r#"{"kind": "bcjl-honest", "master_seed": 1, "n": 80, "k": 4}"#)).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{e}");
    }

    #[test]
    fn two_party_rows_recover() {
        let t = run_experiment(&cfg(r#"{"kind": "two-party", "master_seed": 5, "trials": 6, "function": "random", "domain": 4}"#))
            .unwrap();
        let rec = t.column("recovered").unwrap();
        assert!(t.rows[..6].iter().all(|r| r[rec] == Cell::Bool(true)));
    }
}
