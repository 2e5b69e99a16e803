//! Fast internal consistency checks run by the `selftest` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{ChannelConfig, ChannelProcess};
use crate::error::Result;
use crate::frontend::{
    bias_quantize_rows, transmit_block, AdcConfig, PowerAmplifier, QamConstellation, Quantizer,
    SalehParams,
};
use crate::numeric::{relative_error, ridge_solve, RealMatrix, RlsState};
use crate::receivers::{count_symbol_errors, demap_rows, zf_weights, SoftDetector};

/// Outcome of one self-check.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> SelfCheck {
    match f() {
        Ok((passed, detail)) => SelfCheck {
            name,
            passed,
            detail,
        },
        Err(e) => SelfCheck {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn ridge_check(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let z = gaussian(30, 8, rng);
        let t = gaussian(30, 3, rng);
        let gamma = 0.5;
        let beta = ridge_solve(&z, &t, gamma)?;
        let gram = z.tr_mul(&z) + RealMatrix::identity(8, 8) * gamma;
        let oracle = gram
            .lu()
            .solve(&z.tr_mul(&t))
            .expect("regularized Gram is invertible");
        worst = worst.max(relative_error(&beta, &oracle));
    }
    Ok((worst < 1e-10, format!("max relative error {worst:.2e}")))
}

fn rls_check(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (l, v, m0, m) = (6, 2, 10, 60);
    let r = gaussian(m0 + m, l, rng);
    let t = gaussian(m0 + m, v, rng);
    let gamma = 1e-3;
    let mut state = RlsState::init(
        &r.rows(0, m0).into_owned(),
        &t.rows(0, m0).into_owned(),
        gamma,
        1.0,
    )?;
    let mut worst = 0.0f64;
    for i in m0..m0 + m {
        state.step(&r.row(i).transpose(), &t.row(i).transpose())?;
        let batch = ridge_solve(
            &r.rows(0, i + 1).into_owned(),
            &t.rows(0, i + 1).into_owned(),
            gamma,
        )?;
        worst = worst.max(relative_error(state.beta(), &batch));
    }
    Ok((worst < 1e-8, format!("max relative error {worst:.2e}")))
}

fn quantizer_check() -> Result<(bool, String)> {
    let q = Quantizer::mid_rise(3, 1.0)?;
    let levels = q.levels();
    let grid: Vec<f64> = (0..=4000).map(|i| -2.0 + i as f64 * 1e-3).collect();
    let on_levels = grid.iter().all(|&c| levels.contains(&q.apply(c)));
    let odd = grid
        .iter()
        .filter(|&&c| (c / 0.25).fract() != 0.0)
        .all(|&c| q.apply(-c) == -q.apply(c));
    let idempotent = grid.iter().all(|&c| q.apply(q.apply(c)) == q.apply(c));
    let passed = levels.len() == 8 && on_levels && odd && idempotent;
    Ok((
        passed,
        format!(
            "levels={} in_set={on_levels} odd={odd} idempotent={idempotent}",
            levels.len()
        ),
    ))
}

fn pa_check() -> Result<(bool, String)> {
    let p = SalehParams::default();
    let out = p.distort(crate::Complex64::new(1.0, 0.0));
    let amp = p.alpha_a / (1.0 + p.eps_a);
    let phase = p.alpha_phi / (1.0 + p.eps_phi);
    let err = (out.norm() - amp).abs() + (out.arg() - phase).abs();
    let peak = p.am_am(p.saturation_input());
    let peak_err = (peak - p.saturation_output()).abs();
    Ok((
        err < 1e-12 && peak_err < 1e-12,
        format!(
            "|f(1)| = {:.6}, arg f(1) = {:.6}, peak output {:.6}",
            out.norm(),
            out.arg(),
            peak
        ),
    ))
}

fn ideal_chain_check() -> Result<(bool, String)> {
    let cfg = ChannelConfig {
        n_antennas: 32,
        n_users: 4,
        ..ChannelConfig::default()
    };
    let h = ChannelProcess::draw(&cfg, 7)?.realize(0);
    let constellation = QamConstellation::qam16();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let labels: Vec<u8> = (0..400 * 4).map(|_| rng.random_range(0..16u8)).collect();
    let x = crate::numeric::ComplexMatrix::from_row_iterator(
        400,
        4,
        labels.iter().map(|&l| constellation.point(l)),
    );
    let y = transmit_block(&h, &x, 0.0, &PowerAmplifier::Bypass, &mut rng)?;
    let r = bias_quantize_rows(&y, &AdcConfig::unbiased(Quantizer::Ideal, 32))?;
    let decided = demap_rows(&zf_weights(&h)?.estimate_rows(&r), &constellation);
    let errors = count_symbol_errors(&decided, &labels);
    Ok((
        errors == 0,
        format!("{errors} errors in {} symbols", labels.len()),
    ))
}

/// Run every self-check with a fixed seed.
pub fn run_selftest() -> Vec<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    vec![
        check("ridge-normal-equations", || ridge_check(&mut rng)),
        check("rls-matches-batch", || rls_check(&mut rng)),
        check("mid-rise-quantizer", quantizer_check),
        check("saleh-reference-values", pa_check),
        check("ideal-chain-zero-forcing", ideal_chain_check),
    ]
}
