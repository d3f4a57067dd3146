use weno_core::analysis::{collect_weight_trace, WeightTrace};
use weno_core::problems::{setup_euler1d, ProblemId};
use weno_core::solver::ReconstructionMode;
use weno_core::weno::{SchemeConfig, SchemeKind};

fn trace(kind: SchemeKind) -> WeightTrace {
    let s = setup_euler1d(
        ProblemId::TitarevToro,
        1000,
        SchemeConfig::new(kind),
        ReconstructionMode::Characteristic,
    )
    .unwrap();
    let times: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
    collect_weight_trace(&s.disc, s.initial, &s.controls, &times).unwrap()
}

/// Share of samples on the diagonal but away from both corners.
fn off_corner(tr: &WeightTrace) -> f64 {
    let hits = tr
        .samples
        .iter()
        .filter(|s| s.lambda[1] < 0.05 && s.lambda[0] > 0.05 && s.lambda[2] > 0.05)
        .count();
    hits as f64 / tr.samples.len() as f64
}

#[test]
fn titarev_toro_lambda1_near_zero_is_rare_for_zc() {
    let zc = trace(SchemeKind::Zc);
    let js = trace(SchemeKind::Js);
    let (fz, fj) = (
        zc.lambda1_fraction_below(0.05),
        js.lambda1_fraction_below(0.05),
    );
    println!("lambda1 < 0.05: ZC {fz:.5}, JS {fj:.5}");
    println!(
        "excluding corners: ZC {:.5}, JS {:.5}",
        off_corner(&zc),
        off_corner(&js)
    );
    assert!(fj > 1e-2, "JS {fj}");
    assert!(fz < 1e-3, "ZC {fz}");
}
