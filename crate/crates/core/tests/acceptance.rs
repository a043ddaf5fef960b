//! Acceptance suite: every criterion prints one PASS/FAIL line
//! (`cargo test --test acceptance -- --nocapture` to see them all).
//!
//! Two criteria pin truncation dimensions that measurement shows are too
//! small for their stated tolerances (see the failure messages); they are
//! implemented exactly as stated and fail honestly. Each is paired with a
//! supplement that runs the identical check at an adequate dimension and
//! passes, demonstrating that the law being tested holds and only the
//! pinned dimension is at fault.

use std::sync::OnceLock;

use num_complex::Complex64;
use sqbath_core::diagnostics::{fidelity, quadrature_variances, trace_distance};
use sqbath_core::fock::{
    density_from_spec, make_ladder, InitialStateSpec, SqueezeParams, StateAudit,
};
use sqbath_core::liouvillian::{
    basis_matrix, build_lindblad, integrate, make_k_generators, spectrum, steady_state_numeric,
    vec_index, vectorize, Superoperator,
};
use sqbath_core::ode::{integrate_dopri5, OdeOptions};
use sqbath_core::profile::GammaProfile;
use sqbath_core::su11::{
    analytic_propagate, asymptotic_state, component_rho_nm, damped_kminus_series, solve_gauge,
    AnalyticPropagator,
};

fn report(criterion: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("acceptance criterion {criterion}: {verdict}: {detail}");
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_steady_state_identity() {
    let dim = 40;
    let params = SqueezeParams::new(0.5, 0.0).unwrap();
    let l = build_lindblad(dim, &params.moments(), 1.0).unwrap();
    let numeric = steady_state_numeric(&l).unwrap();
    let constructed = asymptotic_state(&params, dim, 1e-8).unwrap();
    let f = fidelity(&numeric, &constructed).unwrap();
    report(
        "1",
        f > 1.0 - 1e-8,
        &format!("null-vector vs constructed squeezed vacuum fidelity = {f:.12}"),
    );
}

struct ComboRun {
    label: String,
    worst_distance: f64,
    audits: Vec<StateAudit>,
    leakages: Vec<f64>,
}

/// The full {profile} × {initial state} × {r} comparison matrix between the
/// adaptive integrator and the closed-form propagator.
fn run_oracle_matrix(dim: usize, ode_tol: f64, frame_gate: f64) -> Vec<ComboRun> {
    let profiles: Vec<(&str, GammaProfile)> = vec![
        ("constant", GammaProfile::constant(1.0).unwrap()),
        ("ramp", GammaProfile::linear_ramp(0.25, 1.25, 1.5).unwrap()),
        ("gaussian-pulse", GammaProfile::gaussian_pulse(1.0, 0.25, 1.2, 0.45).unwrap()),
    ];
    let states: Vec<(&str, InitialStateSpec)> = vec![
        ("fock2", InitialStateSpec::Fock(2)),
        ("coherent1", InitialStateSpec::Coherent(Complex64::new(1.0, 0.0))),
        ("thermal0.5", InitialStateSpec::Thermal { n_bar: 0.5 }),
    ];
    let grid: Vec<f64> = (0..10).map(|k| 4.0 * k as f64 / 9.0).collect();

    let mut out = Vec::new();
    for (pname, profile) in &profiles {
        for (sname, state) in &states {
            for &r in &[0.0, 0.3, 0.7] {
                let params = SqueezeParams::new(r, 0.0).unwrap();
                let rho0 = density_from_spec(state, dim, 1e-6).unwrap();
                let numeric =
                    integrate(&rho0, profile, &params.moments(), &grid, ode_tol).unwrap();
                let prop = AnalyticPropagator::new(dim, &params, profile, frame_gate).unwrap();
                let analytic = prop.propagate(&rho0, &grid).unwrap();

                let mut worst = 0.0f64;
                let mut audits = Vec::new();
                let mut leakages = Vec::new();
                for k in 0..grid.len() {
                    let d = trace_distance(&numeric.states[k], &analytic.states[k]).unwrap();
                    worst = worst.max(d);
                    audits.push(numeric.states[k].audit().unwrap());
                    audits.push(analytic.states[k].audit().unwrap());
                    leakages.push(numeric.leakage[k]);
                    leakages.push(analytic.leakage[k]);
                }
                out.push(ComboRun {
                    label: format!("{pname}/{sname}/r={r}"),
                    worst_distance: worst,
                    audits,
                    leakages,
                });
            }
        }
    }
    out
}

/// The matrix at the criterion's literal dimension. The squeezed-frame
/// truncation gate is widened to the measured wall mass at r=0.7 (~2e-5)
/// so the distances themselves tell the story.
fn oracle_matrix_dim40() -> &'static Vec<ComboRun> {
    static MATRIX: OnceLock<Vec<ComboRun>> = OnceLock::new();
    MATRIX.get_or_init(|| run_oracle_matrix(40, 1e-10, 1e-4))
}

/// The same matrix in a space large enough that the squeezed-frame tails
/// of every combination clear the truncation wall.
fn oracle_matrix_dim72() -> &'static Vec<ComboRun> {
    static MATRIX: OnceLock<Vec<ComboRun>> = OnceLock::new();
    MATRIX.get_or_init(|| run_oracle_matrix(72, 1e-10, 1e-6))
}

fn worst_combo(runs: &[ComboRun]) -> (f64, &str) {
    let mut worst = 0.0f64;
    let mut label = "";
    for run in runs {
        if run.worst_distance > worst {
            worst = run.worst_distance;
            label = &run.label;
        }
    }
    (worst, label)
}

#[test]
fn criterion_2_oracle_equivalence() {
    let runs = oracle_matrix_dim40();
    let (worst, label) = worst_combo(runs);
    report(
        "2",
        worst < 1e-6 && runs.len() == 27,
        &format!(
            "27 profile×state×r combinations at dim=40, worst inter-method trace distance = {worst:.3e} ({label}); \
             the r=0.7 squeezed-frame states carry ~2e-5 population at the dim=40 truncation wall, \
             which floors the attainable agreement above the stated 1e-6 (see the dim=72 supplement)"
        ),
    );
}

#[test]
fn criterion_2_supplement_oracle_equivalence_adequate_truncation() {
    let runs = oracle_matrix_dim72();
    let (worst, label) = worst_combo(runs);
    report(
        "2-supplement",
        worst < 1e-6 && runs.len() == 27,
        &format!(
            "same 27 combinations and 1e-6 tolerance at dim=72: worst inter-method trace distance = {worst:.3e} ({label})"
        ),
    );
}

struct ConvergenceRun {
    label: String,
    final_fidelity_numeric: f64,
    final_fidelity_analytic: f64,
    monotone: bool,
    audits: Vec<StateAudit>,
    leakages: Vec<f64>,
}

fn convergence_runs() -> &'static Vec<ConvergenceRun> {
    static RUNS: OnceLock<Vec<ConvergenceRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let dim = 40;
        let params = SqueezeParams::new(0.5, 0.0).unwrap();
        let profile = GammaProfile::constant(1.0).unwrap();
        let target = asymptotic_state(&params, dim, 1e-8).unwrap();
        let grid: Vec<f64> = (0..=40).map(|k| 0.5 * k as f64).collect();
        let states: Vec<(&str, InitialStateSpec)> = vec![
            ("fock3", InitialStateSpec::Fock(3)),
            ("coherent1", InitialStateSpec::Coherent(Complex64::new(1.0, 0.0))),
            ("thermal0.5", InitialStateSpec::Thermal { n_bar: 0.5 }),
        ];
        states
            .into_iter()
            .map(|(label, spec)| {
                let rho0 = density_from_spec(&spec, dim, 1e-6).unwrap();
                let traj = integrate(&rho0, &profile, &params.moments(), &grid, 1e-9).unwrap();
                let mut monotone = true;
                let mut last = f64::INFINITY;
                let mut audits = Vec::new();
                let mut leakages = Vec::new();
                for (state, leak) in traj.states.iter().zip(traj.leakage.iter()) {
                    let d = trace_distance(state, &target).unwrap();
                    if d > last + 1e-10 {
                        monotone = false;
                    }
                    last = d;
                    audits.push(state.audit().unwrap());
                    leakages.push(*leak);
                }
                let final_fidelity_numeric =
                    fidelity(traj.states.last().unwrap(), &target).unwrap();
                let rho20 = analytic_propagate(&rho0, &profile, &params, 20.0, 1e-6).unwrap();
                let final_fidelity_analytic = fidelity(&rho20, &target).unwrap();
                ConvergenceRun {
                    label: label.to_string(),
                    final_fidelity_numeric,
                    final_fidelity_analytic,
                    monotone,
                    audits,
                    leakages,
                }
            })
            .collect()
    })
}

#[test]
fn criterion_3_squeezing_mold_convergence() {
    let runs = convergence_runs();
    let mut ok = true;
    let mut detail = String::new();
    for run in runs {
        let pass = run.final_fidelity_numeric > 1.0 - 1e-6
            && run.final_fidelity_analytic > 1.0 - 1e-6
            && run.monotone;
        ok &= pass;
        detail.push_str(&format!(
            "[{}: F_num={:.9}, F_ana={:.9}, monotone={}] ",
            run.label, run.final_fidelity_numeric, run.final_fidelity_analytic, run.monotone
        ));
    }
    report("3", ok, detail.trim());
}

/// Cluster check: eigenvalues must match -γ(n+m)/2 with multiplicity n+m+1
/// for n+m ≤ 12 at relative tolerance 1e-4, with exactly one zero mode.
fn spectrum_cluster_check(dim: usize) -> (bool, String) {
    let gamma = 1.0;
    let params = SqueezeParams::new(0.3, 0.0).unwrap();
    let l = build_lindblad(dim, &params.moments(), gamma).unwrap();
    let vals = spectrum(&l).unwrap();

    let zero_modes = vals.iter().filter(|v| v.norm() < 1e-8).count();
    let mut ok = zero_modes == 1;
    let mut detail = format!("dim={dim}: zero modes = {zero_modes}; ");

    for s in 1..=12usize {
        let target = -gamma * s as f64 / 2.0;
        let window = 1e-4 * target.abs();
        let count = vals
            .iter()
            .filter(|v| (*v - Complex64::new(target, 0.0)).norm() <= window)
            .count();
        if count != s + 1 {
            ok = false;
            detail.push_str(&format!("s={s}: found {count}, expected {}; ", s + 1));
        }
    }
    if ok {
        detail.push_str("multiplicities n+m+1 confirmed for 1 <= n+m <= 12 at rel. tol 1e-4");
    }
    (ok, detail)
}

#[test]
fn criterion_4_spectrum() {
    let (ok, mut detail) = spectrum_cluster_check(25);
    if !ok {
        detail.push_str(
            "note: at dim=25 the squeeze dressing of basis elements with n+m ≳ 8 reaches the \
             truncation wall and shifts those eigenvalues by far more than the 1e-4 window \
             (the clusters converge to exact multiplicities as dim grows; see the dim=40 supplement)",
        );
    }
    report("4", ok, &detail);
}

#[test]
fn criterion_4_supplement_spectrum_adequate_truncation() {
    let (ok, detail) = spectrum_cluster_check(40);
    report("4-supplement", ok, &detail);
}

#[test]
fn criterion_5_gauge_ode() {
    let profiles: Vec<(&str, GammaProfile, f64)> = vec![
        ("constant", GammaProfile::constant(1.0).unwrap(), 5.0),
        ("linear-ramp", GammaProfile::linear_ramp(0.3, 1.5, 2.0).unwrap(), 4.0),
        ("exp-switch", GammaProfile::exponential_switch(1.2, 0.9).unwrap(), 4.5),
        (
            "gaussian-pulse",
            GammaProfile::gaussian_pulse(1.0, 0.4, 1.5, 0.5).unwrap(),
            5.0,
        ),
        (
            "piecewise",
            GammaProfile::piecewise(vec![(0.0, 0.2), (1.0, 1.3), (3.0, 0.8)]).unwrap(),
            5.0,
        ),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (name, profile, t_end) in &profiles {
        // Independent oracle: integrate the gauge condition directly.
        let grid: Vec<f64> = (0..=10).map(|k| t_end * k as f64 / 10.0).collect();
        let opts = OdeOptions { rtol: 1e-13, atol: 1e-15, max_steps: 10_000_000 };
        let mut alpha_ode = Vec::new();
        integrate_dopri5(
            |t, y, dy| dy[0] = (y[0] + Complex64::new(1.0, 0.0)) * profile.rate(t),
            &grid,
            &[Complex64::new(0.0, 0.0)],
            &opts,
            |_k, _t, y| {
                alpha_ode.push(y[0].re);
                Ok(())
            },
        )
        .unwrap();

        let mut worst = 0.0f64;
        let mut y_prev = -1.0;
        let mut y_monotone = true;
        for (t, ode_alpha) in grid.iter().zip(alpha_ode.iter()) {
            let s = solve_gauge(profile, *t).unwrap();
            assert!(s.gamma_int <= 5.0 + 1e-9, "Γ out of the tested range");
            let closed = s.alpha.unwrap();
            let err = (closed - ode_alpha).abs() / closed.abs().max(1.0);
            worst = worst.max(err);
            if s.y < y_prev {
                y_monotone = false;
            }
            y_prev = s.y;
            // y = 1 - e^{-Γ} by construction; check it against Γ directly.
            let y_expect = -(-s.gamma_int).exp_m1();
            worst = worst.max((s.y - y_expect).abs());
        }
        // Saturation towards 1 for profiles with a positive asymptotic rate.
        let y_late = solve_gauge(profile, 200.0).unwrap().y;
        let saturates = (y_late - 1.0).abs() < 1e-12;
        ok &= worst < 1e-10 && y_monotone && saturates;
        detail.push_str(&format!("[{name}: max err {worst:.2e}] "));
    }
    report("5", ok, detail.trim());
}

#[test]
fn criterion_6_formula_equivalence() {
    let dim = 40;
    let params = SqueezeParams::new(0.3, 0.6).unwrap();
    let profile = GammaProfile::linear_ramp(0.4, 1.1, 1.0).unwrap();
    let squeeze = sqbath_core::make_squeeze_operator(dim, &params).unwrap();
    let mut worst = 0.0f64;
    for &t in &[0.3, 1.1, 2.6] {
        let sample = solve_gauge(&profile, t).unwrap();
        for n in 0..=8 {
            for m in 0..=8 {
                let qsum = component_rho_nm(n, m, &profile, &params, t, dim).unwrap();
                let frame = damped_kminus_series(sample.gamma_int, &basis_matrix(dim, n, m));
                let series = &(&squeeze.adjoint() * &frame) * &squeeze;
                worst = worst.max((&qsum - &series).max_abs());
            }
        }
    }
    report(
        "6",
        worst < 1e-10,
        &format!("explicit q-sum vs lowering-series path, n,m <= 8, 3 times: max dev {worst:.3e}"),
    );
}

#[test]
fn criterion_7_variance_law() {
    let dim = 80;
    let probes: Vec<f64> = (0..8).map(|k| k as f64 * std::f64::consts::PI / 8.0).collect();
    let mut ok = true;
    let mut detail = String::new();
    for &r in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let params = SqueezeParams::new(r, 0.0).unwrap();
        let rho = asymptotic_state(&params, dim, 1e-8).unwrap();
        let rep = quadrature_variances(&rho, &probes).unwrap();
        let vmin_expect = (-2.0 * r).exp() / 4.0;
        let vmax_expect = (2.0 * r).exp() / 4.0;
        let (_, _, num) = make_ladder(dim).unwrap();
        let n_mean = rho.expectation(&num).re;
        let n_expect = r.sinh().powi(2);
        let pass = (rep.min_variance - vmin_expect).abs() < 1e-4
            && (rep.max_variance - vmax_expect).abs() < 1e-4
            && (n_mean - n_expect).abs() < 1e-6;
        ok &= pass;
        detail.push_str(&format!(
            "[r={r}: vmin err {:.1e}, vmax err {:.1e}, <n> err {:.1e}] ",
            (rep.min_variance - vmin_expect).abs(),
            (rep.max_variance - vmax_expect).abs(),
            (n_mean - n_expect).abs()
        ));
    }
    report("7", ok, detail.trim());
}

#[test]
fn criterion_8_algebra_suite() {
    let mut ok = true;
    let mut detail = String::new();

    // su(1,1) commutators on interior basis elements, and the exact
    // commutation of the left and right ladder families.
    let d = 12;
    let (k_plus, k_minus, k_zero) = make_k_generators(d).unwrap();
    let mut worst_su11 = 0.0f64;
    for n in 0..d - 1 {
        for m in 0..d - 1 {
            let b = vectorize(&basis_matrix(d, n, m));
            let zp = k_zero.apply_vec(&k_plus.apply_vec(&b));
            let pz = k_plus.apply_vec(&k_zero.apply_vec(&b));
            let kp = k_plus.apply_vec(&b);
            for i in 0..zp.len() {
                worst_su11 = worst_su11.max((zp[i] - pz[i] - kp[i]).norm());
            }
            let zm = k_zero.apply_vec(&k_minus.apply_vec(&b));
            let mz = k_minus.apply_vec(&k_zero.apply_vec(&b));
            let km = k_minus.apply_vec(&b);
            for i in 0..zm.len() {
                worst_su11 = worst_su11.max((zm[i] - mz[i] + km[i]).norm());
            }
            let mp = k_minus.apply_vec(&k_plus.apply_vec(&b));
            let pm = k_plus.apply_vec(&k_minus.apply_vec(&b));
            let kz = k_zero.apply_vec(&b);
            for i in 0..mp.len() {
                worst_su11 = worst_su11.max((mp[i] - pm[i] - kz[i] * 2.0).norm());
            }
        }
    }
    ok &= worst_su11 < 1e-12;
    detail.push_str(&format!("su(1,1) commutators: {worst_su11:.2e}; "));

    let (a, adag, num) = make_ladder(d).unwrap();
    let lefts = [
        Superoperator::left_mult(&a),
        Superoperator::left_mult(&adag),
        Superoperator::left_mult(&num),
    ];
    let rights = [
        Superoperator::right_mult(&a),
        Superoperator::right_mult(&adag),
        Superoperator::right_mult(&num),
    ];
    let mut worst_lr = 0.0f64;
    for lo in &lefts {
        for ro in &rights {
            let lr = lo.compose(ro);
            let rl = ro.compose(lo);
            worst_lr = worst_lr.max((lr.matrix() - rl.matrix()).max_abs());
        }
    }
    ok &= worst_lr < 1e-12;
    detail.push_str(&format!("[left, right] families: {worst_lr:.2e}; "));

    // Ladder actions on every basis element of the 12-level space.
    let mut worst_action = 0.0f64;
    for n in 0..d {
        for m in 0..d {
            let b = vectorize(&basis_matrix(d, n, m));
            let kp = k_plus.apply_vec(&b);
            let km = k_minus.apply_vec(&b);
            let kz = k_zero.apply_vec(&b);
            for i in 0..d {
                for j in 0..d {
                    let slot = vec_index(i, j, d);
                    let expect_kp = if n + 1 < d && m + 1 < d && i == n + 1 && j == m + 1 {
                        (((n + 1) * (m + 1)) as f64).sqrt()
                    } else {
                        0.0
                    };
                    let expect_km = if n >= 1 && m >= 1 && i + 1 == n && j + 1 == m {
                        ((n * m) as f64).sqrt()
                    } else {
                        0.0
                    };
                    let expect_kz =
                        if i == n && j == m { (n + m + 1) as f64 / 2.0 } else { 0.0 };
                    worst_action = worst_action.max((kp[slot].re - expect_kp).abs());
                    worst_action = worst_action.max(kp[slot].im.abs());
                    worst_action = worst_action.max((km[slot].re - expect_km).abs());
                    worst_action = worst_action.max(km[slot].im.abs());
                    worst_action = worst_action.max((kz[slot].re - expect_kz).abs());
                    worst_action = worst_action.max(kz[slot].im.abs());
                }
            }
        }
    }
    ok &= worst_action < 1e-12;
    detail.push_str(&format!("ladder actions on all |n⟩⟨m| up to dim 12: {worst_action:.2e}"));

    report("8", ok, &detail);
}

#[test]
fn criterion_9_cptp_monitors() {
    let mut worst_trace = 0.0f64;
    let mut worst_eig = 0.0f64;
    let mut ok = true;
    let mut audit_count = 0usize;

    let matrices = [oracle_matrix_dim40(), oracle_matrix_dim72()];
    for matrix in matrices {
        for run in matrix {
            for (audit, leak) in run.audits.iter().zip(run.leakages.iter()) {
                audit_count += 1;
                if audit.trace_defect > 1e-8 + leak {
                    ok = false;
                }
                worst_trace = worst_trace.max(audit.trace_defect);
                worst_eig = worst_eig.min(audit.min_eigenvalue);
                if audit.min_eigenvalue <= -1e-10 {
                    ok = false;
                }
            }
        }
    }
    for run in convergence_runs() {
        for (audit, leak) in run.audits.iter().zip(run.leakages.iter()) {
            audit_count += 1;
            if audit.trace_defect > 1e-8 + leak {
                ok = false;
            }
            worst_trace = worst_trace.max(audit.trace_defect);
            worst_eig = worst_eig.min(audit.min_eigenvalue);
            if audit.min_eigenvalue <= -1e-10 {
                ok = false;
            }
        }
    }
    report(
        "9",
        ok,
        &format!(
            "{audit_count} states audited across every acceptance trajectory: \
             worst trace defect {worst_trace:.3e}, most negative eigenvalue {worst_eig:.3e}"
        ),
    );
}
