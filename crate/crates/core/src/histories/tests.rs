use super::*;
use crate::algorithms::{run_deutsch_jozsa, run_grover, Choice, GroverOptions};
use crate::bits::bits;
use crate::families::FamilyKind;
use crate::sharing::{enumerate_sharings, SharingOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grover_step() -> (FunctionFamily, StateVector, StateVector, OracleUnitary, Vec<f64>) {
    let fam = FunctionFamily::build(FamilyKind::Grover, 2).unwrap();
    let run = run_grover(&fam, Choice::Label(bits("01")), &GroverOptions::default(), &mut ChaCha8Rng::seed_from_u64(7))
        .unwrap();
    let pre = run.trajectory.stage("hadamard V").unwrap().state.clone();
    let post = run.trajectory.stage("oracle 1").unwrap().state.clone();
    (fam, pre, post, run.oracle, run.trajectory.phases)
}

#[test]
fn grover_histories_recompose_the_oracle_step() {
    let (fam, pre, post, oracle, phases) = grover_step();
    let mut hs = decompose(&pre, &oracle).unwrap();
    assert_eq!(hs.len(), 32);
    let mag = hs[0].amplitude.norm();
    assert!(hs.iter().all(|h| (h.amplitude.norm() - mag).abs() < 1e-15));
    assert!(recompose(&hs, pre.layout(), None).unwrap().distance(&post).unwrap() < 1e-12);

    attach_phases(&mut hs, &fam, &phases, pre.layout());
    assert!(recompose(&hs, pre.layout(), Some(&phases)).unwrap().distance(&post).unwrap() < 1e-12);
    let rows: Vec<&str> = hs.iter().map(|h| h.rendered.as_str()).collect();
    for expected in [
        "e^{iφ1}|01⟩_B|01⟩_A|0⟩_V → e^{iφ1}|01⟩_B|01⟩_A|1⟩_V",
        "-e^{iφ1}|01⟩_B|01⟩_A|1⟩_V → -e^{iφ1}|01⟩_B|01⟩_A|0⟩_V",
        "e^{iφ1}|01⟩_B|00⟩_A|0⟩_V → e^{iφ1}|01⟩_B|00⟩_A|0⟩_V",
        "-e^{iφ1}|01⟩_B|00⟩_A|1⟩_V → -e^{iφ1}|01⟩_B|00⟩_A|1⟩_V",
    ] {
        assert!(rows.contains(&expected), "{expected}");
    }
}

#[test]
fn sharp_state_has_one_history() {
    let (_, pre, _, oracle, _) = grover_step();
    let sharp = StateVector::basis(pre.layout().clone(), &[bits("10"), bits("10"), bits("0")]).unwrap();
    let hs = decompose(&sharp, &oracle).unwrap();
    assert_eq!(hs.len(), 1);
    assert_eq!(hs[0].post, vec![bits("10"), bits("10"), bits("1")]);
    let back = recompose(&hs, pre.layout(), None).unwrap();
    assert!(back.distance(&oracle.apply(&sharp).unwrap()).unwrap() < 1e-15);
}

#[test]
fn deutsch_jozsa_histories() {
    let fam = FunctionFamily::build(FamilyKind::DeutschJozsa, 2).unwrap();
    let run =
        run_deutsch_jozsa(&fam, Choice::Label(bits("0011")), false, None, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    let pre = &run.trajectory.stage("hadamard V").unwrap().state;
    let post = &run.trajectory.stage("oracle 1").unwrap().state;
    let mut hs = decompose(pre, &run.oracle).unwrap();
    assert!(recompose(&hs, pre.layout(), None).unwrap().distance(post).unwrap() < 1e-12);
    attach_phases(&mut hs, &fam, &run.trajectory.phases, pre.layout());
    let rows: Vec<&str> = hs.iter().map(|h| h.rendered.as_str()).collect();
    assert!(rows.contains(&"e^{iφ2}|0011⟩_B|10⟩_A|0⟩_V → e^{iφ2}|0011⟩_B|10⟩_A|1⟩_V"));
    assert!(rows.contains(&"-e^{iφ2}|0011⟩_B|10⟩_A|1⟩_V → -e^{iφ2}|0011⟩_B|10⟩_A|0⟩_V"));

    // the final Hadamard on the recomposed state gives the classified output
    let h = crate::quantum::hadamard(2);
    let out = recompose(&hs, pre.layout(), None).unwrap().apply_unitary(&h, &["A"]).unwrap();
    let stored = &run.trajectory.stage("hadamard A (2)").unwrap().state;
    assert!(out.distance(stored).unwrap() < 1e-12);
}

#[test]
fn grover_tags_follow_decision_trees() {
    let (fam, pre, _, oracle, _) = grover_step();
    let mut hs = decompose(&pre, &oracle).unwrap();
    let b = bits("01");
    let alice = Share::parities(&fam, &b, &[bits("10")]).unwrap();
    tag_histories(&mut hs, &fam, std::slice::from_ref(&alice)).unwrap();
    let tagged = |a: &str| hs.iter().filter(|h| h.b == Some(b) && h.a == bits(a)).all(|h| h.shares == vec![0]);
    assert!(tagged("01"));
    assert!(tagged("00"));
    assert!(hs.iter().filter(|h| h.b == Some(b) && h.a == bits("10")).all(|h| h.shares.is_empty()));
}

#[test]
fn every_label_query_pair_is_covered() {
    for kind in [FamilyKind::Grover, FamilyKind::DeutschJozsa] {
        let fam = FunctionFamily::build(kind, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (pre, oracle) = match kind {
            FamilyKind::Grover => {
                let r = run_grover(&fam, Choice::Random, &GroverOptions::default(), &mut rng).unwrap();
                (r.trajectory.stage("hadamard V").unwrap().state.clone(), r.oracle)
            }
            _ => {
                let r = run_deutsch_jozsa(&fam, Choice::Random, false, None, &mut rng).unwrap();
                (r.trajectory.stage("hadamard V").unwrap().state.clone(), r.oracle)
            }
        };
        let mut hs = decompose(&pre, &oracle).unwrap();
        for b in fam.labels() {
            let shares = alice_shares(&enumerate_sharings(&fam, &b, &SharingOptions::default()).unwrap());
            let mine: Vec<_> = hs.iter().filter(|h| h.b == Some(b)).cloned().collect();
            let mut mine = mine;
            tag_histories(&mut mine, &fam, &shares).unwrap();
            assert!(mine.iter().all(|h| !h.shares.is_empty()), "{kind} {b}");
        }
        tag_histories(&mut hs, &fam, &[]).unwrap();
    }
}
