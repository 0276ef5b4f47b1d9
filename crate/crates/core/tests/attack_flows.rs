use qbc::attacks::{bcjl_epr_attack, ideal_cheat_unitary, run_commitment_attack, two_party_attack};
use qbc::codes::generate_code;
use qbc::protocols::{
    choose_r, concealment_fidelity, leaky_script, random_concealing_script, random_script, script_execute, script_trace,
    script_verify, FunctionTable, Party,
};
use qbc::qmath::{apply_local, fidelity, reduced_state, Side};
use qbc::rng::stream;

#[test]
fn concealing_scripts_flip_exactly() {
    for i in 0..20 {
        let mut rng = stream(100, i);
        let script = random_concealing_script(1 + (i as usize % 2), 1, 1, &mut rng).unwrap();
        let a = run_commitment_attack(&script).unwrap();
        assert!(a.report.achieved_overlap > 1.0 - 1e-8, "script {i}: {}", a.report);
        assert!(a.report.acceptance_probability > 1.0 - 1e-8);

        // the ideal construction works here too, on the same cut
        let kept = a.alice_registers.clone();
        let rest: Vec<usize> = (0..script.register_count()).filter(|r| !kept.contains(r)).collect();
        let order: Vec<usize> = kept.iter().chain(&rest).copied().collect();
        let f0 = script_execute(&script, 0).unwrap().into_state().permute(&order).unwrap();
        let f1 = script_execute(&script, 1).unwrap().into_state().permute(&order).unwrap();
        let u = ideal_cheat_unitary(&f0, &f1, kept.len()).unwrap();
        let flipped = apply_local(&u, &f0, kept.len(), Side::A).unwrap();
        assert!(flipped.overlap(&f1).unwrap() > 1.0 - 1e-8);
    }
}

#[test]
fn random_scripts_hit_the_fidelity_bound() {
    for i in 0..20 {
        let script = random_script(2, 1, 1, &mut stream(200, i)).unwrap();
        let a = run_commitment_attack(&script).unwrap();
        let bob = vec![1, 2];
        let r0 = reduced_state(&a.committed, &bob).unwrap();
        let r1 = reduced_state(script_execute(&script, 1).unwrap().state(), &bob).unwrap();
        let f = fidelity(&r0, &r1).unwrap();
        assert!((a.report.achieved_overlap - f).abs() < 1e-8);
        let direct = script_verify(&a.attacked, &script, 1).unwrap();
        assert!((direct - f * f).abs() < 1e-8);
        // Bob's side is exactly as he left it
        assert!(reduced_state(&a.attacked, &bob).unwrap().distance(&r0) < 1e-12);
    }
}

#[test]
fn every_alice_step_is_invisible_to_bob() {
    for i in 0..10 {
        let script = random_script(3, 2, 2, &mut stream(300, i)).unwrap();
        for bit in 0..2 {
            let trace = script_trace(&script, bit).unwrap();
            for (s, step) in script.steps.iter().enumerate() {
                if step.party != Party::Alice {
                    continue;
                }
                let bob = trace[s].held_by(Party::Bob);
                let before = reduced_state(trace[s].state(), &bob).unwrap();
                let after = reduced_state(trace[s + 1].state(), &bob).unwrap();
                assert!(before.distance(&after) < 1e-12);
            }
        }
    }
}

#[test]
fn leak_sweep_is_monotone() {
    let mut prev_detection = f64::INFINITY;
    for i in 0..=20 {
        let s = i as f64 / 20.0;
        let r = run_commitment_attack(&leaky_script(s).unwrap()).unwrap().report;
        assert!((r.detection_probability - (1.0 - r.fidelity * r.fidelity)).abs() < 1e-8);
        // larger leak, smaller fidelity, more detection
        assert!(r.detection_probability >= prev_detection - 1e-12 || i == 0);
        prev_detection = r.detection_probability;
    }
}

#[test]
fn epr_attack_matches_concealment_fidelity() {
    for (i, (n, k)) in [(3, 2), (4, 2), (5, 3)].into_iter().enumerate() {
        let mut rng = stream(400, i as u64);
        let code = generate_code(n, k, 1, &mut rng, 1000).unwrap();
        let r = choose_r(&code, &mut rng).unwrap();
        let attack = bcjl_epr_attack(&code, &r).unwrap();
        let f = concealment_fidelity(&code, &r).unwrap();
        assert!((attack.report.achieved_overlap - f).abs() < 1e-8, "n={n} k={k}");
        assert!(attack.opening_pass_probability(1).unwrap() >= attack.report.acceptance_probability - 1e-9);
    }
}

#[test]
fn two_party_equality_leaks_input() {
    let f = FunctionTable::equality(8).unwrap();
    let mut rng = stream(500, 0);
    for x in 0..8 {
        let got = two_party_attack(&f, x, (x + 3) % 8, &mut rng).unwrap();
        assert_eq!(got.row(), f.row(x));
        assert_eq!(got.row().iter().position(|&v| v == 1), Some(x));
        assert!(got.max_disturbance < 1e-10);
        assert!(got.independence_gap < 1e-12);
    }
}
