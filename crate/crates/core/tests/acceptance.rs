//! One pass/fail line per acceptance criterion.
//!
//! Reference values come from oracles written here (hand-built single
//! excitation Hamiltonians, Padé exponentials, closed forms) rather than
//! from the library's own routes. Criteria that do not reproduce are listed
//! in `KNOWN_FAILURES`; the test fails if that list goes stale in either
//! direction.

use std::collections::BTreeSet;
use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;

use tatm::classify::{classify, scan_critical, scan_optimum, ClassifyOptions};
use tatm::evolution::{
    djc_propagator_as_printed, djc_propagator_blocks, resolvent_propagator, single_excitation_numeric,
    tc_propagator_blocks, time_grid, Propagator, Trajectory,
};
use tatm::fields::{assemble_initial, rho_nm_printed_diagonal, rho_nm_state, AtomicState, FieldSpec, Truncation};
use tatm::linalg::{max_abs, unitarity_deviation, CMatrix};
use tatm::measures::{
    concurrence_bell00, concurrence_matrix, concurrence_x_form, negativity_lowsqueeze_approx, Cut,
};
use tatm::model::{
    build_djc_hamiltonian, build_hamiltonian, build_tc_hamiltonian, excitation_number, map_ac_to_djc,
    map_sc_to_tc, CouplingModel, ModelParams,
};
use tatm::scenario::{Config, Measure, Scenario};
use tatm::space::CompositeSpace;
use tatm::state::QuantumState;
use tatm::table::{table_one_report, TableOptions};

/// Criteria expected to print FAIL; the ledger records why.
const KNOWN_FAILURES: &[&str] = &["5", "8"];

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

// ---------- independent oracles ----------

/// `H(φ)` on `eg00, ge00, gg10, gg01`, written out by hand.
fn single_excitation_h(phi: f64, g: f64) -> DMatrix<C64> {
    let mut h = DMatrix::zeros(4, 4);
    h[(0, 2)] = c(g, 0.0);
    h[(0, 3)] = c(g, 0.0);
    h[(1, 2)] = c(g, 0.0);
    h[(1, 3)] = C64::from_polar(g, phi);
    for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
        h[(j, i)] = h[(i, j)].conj();
    }
    h
}

fn expm_i(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    (h * c(0.0, -t)).exp()
}

/// `C = 2|c_eg c_ge|` for a single-excitation pure state.
fn oracle_concurrence(psi: &nalgebra::DVector<C64>) -> f64 {
    2.0 * (psi[0] * psi[1]).norm()
}

fn sigma_plus() -> DMatrix<C64> {
    let mut s = DMatrix::zeros(2, 2);
    s[(0, 1)] = c(1.0, 0.0);
    s
}

fn lower(n_max: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n_max + 1, n_max + 1, |i, j| {
        if j == i + 1 {
            c((j as f64).sqrt(), 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

fn kron(ms: &[&DMatrix<C64>]) -> DMatrix<C64> {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.kronecker(m))
}

/// `√2 g (σ₁⁺ + σ₂⁺) a + h.c.` on `[2, 2, N+1]`.
fn oracle_tc_h(g: f64, n_max: usize) -> DMatrix<C64> {
    let (sp, i2, a) = (sigma_plus(), DMatrix::identity(2, 2), lower(n_max));
    let j = kron(&[&sp, &i2, &a]) + kron(&[&i2, &sp, &a]);
    (&j + j.adjoint()) * c(SQRT_2 * g, 0.0)
}

/// `√2 g (σ₁⁺ a₁ + σ₂⁺ a₂) + h.c.` on `[2, 2, N+1, N+1]`.
fn oracle_djc_h(g: f64, n_max: usize) -> DMatrix<C64> {
    let (sp, i2, a, id) = (sigma_plus(), DMatrix::identity(2, 2), lower(n_max), DMatrix::identity(n_max + 1, n_max + 1));
    let j = kron(&[&sp, &i2, &a, &id]) + kron(&[&i2, &sp, &id, &a]);
    (&j + j.adjoint()) * c(SQRT_2 * g, 0.0)
}

/// Largest deviation restricted to basis states whose excitation is at most
/// `e_max` (the truncation edge is not part of either model).
fn deviation_low_sectors(a: &CMatrix, b: &DMatrix<C64>, space: &CompositeSpace, e_max: usize) -> f64 {
    let n = space.total_dim();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        if space.excitation(j) > e_max {
            continue;
        }
        for i in 0..n {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

fn scenario(src: &str, name: &str) -> Scenario {
    Config::parse(src).expect("acceptance config parses").scenario(name).unwrap().clone()
}

fn trajectory(phi: f64, atomic: AtomicState, field: FieldSpec, n_max: usize) -> Trajectory {
    let p = ModelParams::new(1.0, phi, n_max).unwrap();
    let f = field.prepare(Truncation::new(n_max)).unwrap();
    let s = assemble_initial(atomic, &f.state, &CompositeSpace::two_mode(n_max)).unwrap();
    Trajectory::new(&CouplingModel::general(&p), &s).unwrap()
}

// ---------- criteria ----------

fn closed_forms() -> Line {
    let start = Instant::now();
    let times = time_grid(25.0, 500);
    let mut worst = [0.0f64; 4];
    for phi in [0.0, 0.7, 1.9, 2.9, PI] {
        let (k1, k2) = (2.0 * (phi / 4.0).sin(), 2.0 * (phi / 4.0).cos());
        let eg = trajectory(phi, AtomicState::Eg, FieldSpec::Fock { n: 0, m: 0 }, 1);
        let gg = trajectory(phi, AtomicState::Gg, FieldSpec::Fock { n: 1, m: 0 }, 1);
        let h = single_excitation_h(phi, 1.0);
        for &t in &times {
            let c_eg = concurrence_matrix(eg.atomic_at(t).matrix());
            let c_gg = concurrence_matrix(gg.atomic_at(t).matrix());
            if phi != PI {
                let want = 0.25 * ((2.0 * k1 * t).cos() - (2.0 * k2 * t).cos()).abs();
                worst[0] = worst[0].max((c_eg - want).abs());
                let want = 0.5 * ((k1 * t).sin().powi(2) + (k2 * t).sin().powi(2));
                worst[1] = worst[1].max((c_gg - want).abs());
            }
            if phi == 0.0 {
                worst[2] = worst[2].max((c_gg - 0.5 * (2.0 * t).sin().powi(2)).abs());
            }
            if phi == PI {
                worst[2] = worst[2].max((c_gg - (SQRT_2 * t).sin().powi(2)).abs());
            }
            let u = expm_i(&h, t);
            let from_eg = u.column(0).into_owned();
            let from_gg = u.column(2).into_owned();
            worst[3] = worst[3]
                .max((c_eg - oracle_concurrence(&from_eg)).abs())
                .max((c_gg - oracle_concurrence(&from_gg)).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let err = worst.iter().cloned().fold(0.0, f64::max);
    Line {
        id: "1",
        pass: err < 1e-8 && secs < 10.0,
        detail: format!(
            "closed forms: eg00 {:.1e}, gg10 {:.1e}, reductions {:.1e}, hand-built H {:.1e} (tol 1e-8); {secs:.1} s (limit 10 s)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    }
}

fn death_lattice() -> Line {
    let phi: f64 = 1.0;
    let (k1, k2) = (2.0 * (phi / 4.0).sin(), 2.0 * (phi / 4.0).cos());
    let traj = trajectory(phi, AtomicState::Eg, FieldSpec::Fock { n: 0, m: 0 }, 1);
    let times = time_grid(25.0, 2501);
    let values: Vec<f64> = times.iter().map(|&t| concurrence_matrix(traj.atomic_at(t).matrix())).collect();
    let probe = |t: f64| concurrence_matrix(traj.atomic_at(t).matrix());
    let opts = ClassifyOptions { check_horizon: false, ..ClassifyOptions::default() };
    let v = match classify(&times, &values, &opts, Some(&probe)) {
        Ok(v) => v,
        Err(e) => return Line { id: "2", pass: false, detail: format!("classifier error: {e}") },
    };
    let mut found: Vec<f64> = v.isolated_zeros.clone();
    found.extend(v.dead_intervals.iter().map(|(a, b)| 0.5 * (a + b)));
    let mut worst: f64 = 0.0;
    for m in 1..=5 {
        let td = m as f64 * PI / (k2 - k1);
        let d = found.iter().map(|z| (z - td).abs()).fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    let extra = found
        .iter()
        .filter(|&&z| z > 0.0 && ((z * (k2 - k1) / PI).round() - z * (k2 - k1) / PI).abs() > 1e-3)
        .count();
    Line {
        id: "2",
        pass: worst < 1e-4,
        detail: format!(
            "eg00, phi = 1: worst |t_zero - m pi/(K2-K1)| over m = 1..5 is {worst:.1e} (tol 1e-4); {extra} further zeros off that lattice"
        ),
    }
}

fn mapping_equivalences() -> Line {
    // B is exact on n + m <= n_max; the coherent tail beyond 8 is ~1e-12
    let n_max = 8;
    let cases = [
        (AtomicState::Eg, FieldSpec::Fock { n: 2, m: 1 }),
        (AtomicState::Psi, FieldSpec::Fock { n: 0, m: 0 }),
        (AtomicState::Ee, FieldSpec::Fock { n: 1, m: 1 }),
        (AtomicState::Phi, FieldSpec::Eta { n: 1, m: 0 }),
        (AtomicState::Gg, FieldSpec::Coherent { alpha: c(0.4, 0.1), beta: c(-0.2, 0.0) }),
    ];
    let times = [0.0, 1.3, 4.7, 9.1, 15.0];
    let mut worst: f64 = 0.0;
    for (atomic, field) in cases {
        let f = field.prepare(Truncation::with_eps(n_max, 1e-10)).unwrap();
        let s = assemble_initial(atomic, &f.state, &CompositeSpace::two_mode(n_max)).unwrap();
        let p0 = ModelParams::new(1.0, 0.0, n_max).unwrap();
        let pp = ModelParams::new(1.0, PI, n_max).unwrap();
        let full0 = Trajectory::new(&CouplingModel::general(&p0), &s).unwrap();
        let fullp = Trajectory::new(&CouplingModel::general(&pp), &s).unwrap();
        let tc_state = QuantumState::Mixed(map_sc_to_tc(&s).unwrap().to_ensemble(1e-14).unwrap());
        let tc = Trajectory::new(&CouplingModel::tc(&p0), &tc_state).unwrap();
        let djc = Trajectory::new(&CouplingModel::djc(&pp), &map_ac_to_djc(&s).unwrap()).unwrap();
        for &t in &times {
            worst = worst
                .max(max_abs(&(full0.atomic_at(t).matrix() - tc.atomic_at(t).matrix())))
                .max(max_abs(&(fullp.atomic_at(t).matrix() - djc.atomic_at(t).matrix())));
        }
    }
    Line {
        id: "3",
        pass: worst < 1e-8,
        detail: format!("H(0) vs mapped TC and H(pi) vs mapped DJC, 5 states, gt in [0, 15]: max entry deviation {worst:.1e} (tol 1e-8)"),
    }
}

fn propagator_blocks() -> Line {
    let n_max = 6;
    let p = ModelParams::new(1.0, 0.0, n_max).unwrap();
    let tc_space = CompositeSpace::single_mode(n_max);
    let djc_space = CompositeSpace::two_mode(n_max);
    let h_tc = build_tc_hamiltonian(&p, &tc_space).unwrap();
    let h_djc = build_djc_hamiltonian(&p, &djc_space).unwrap();
    let (o_tc, o_djc) = (oracle_tc_h(1.0, n_max), oracle_djc_h(1.0, n_max));
    let mut worst = [0.0f64; 2];
    for t in [0.37, 2.2, 7.9] {
        let a = tc_propagator_blocks(&p, n_max, t);
        let n = Propagator::numeric(&h_tc, &tc_space, t).unwrap();
        worst[0] = worst[0]
            .max(a.deviation_on_sectors(&n, n_max))
            .max(deviation_low_sectors(a.matrix(), &expm_i(&o_tc, t), &tc_space, n_max));
        let a = djc_propagator_blocks(&p, n_max, t);
        let n = Propagator::numeric(&h_djc, &djc_space, t).unwrap();
        worst[1] = worst[1]
            .max(a.deviation_on_sectors(&n, n_max))
            .max(deviation_low_sectors(a.matrix(), &expm_i(&o_djc, t), &djc_space, n_max));
    }
    Line {
        id: "4",
        pass: worst[0] < 1e-8 && worst[1] < 1e-8,
        detail: format!(
            "N_max = 6, three times: TC blocks {:.1e}, DJC blocks {:.1e} vs eigen and Pade exponentials (tol 1e-8)",
            worst[0], worst[1]
        ),
    }
}

fn table_one() -> Line {
    let start = Instant::now();
    let report = match table_one_report(&TableOptions::default()) {
        Ok(r) => r,
        Err(e) => return Line { id: "5", pass: false, detail: format!("error: {e}") },
    };
    let bad: Vec<String> = report
        .mismatches()
        .iter()
        .map(|c| {
            let got = match &c.default {
                Ok(o) => o.label.to_string(),
                Err(e) => e.clone(),
            };
            format!("{} {}->{}", c.cell_id(), c.published, got)
        })
        .collect();
    Line {
        id: "5",
        pass: report.passed(),
        detail: format!(
            "unambiguous {}, '/' branches {}, footnote {}; mismatches: [{}]; {:.0} s",
            verdict(report.unambiguous_reproduced()),
            verdict(report.ambiguous_reproduced()),
            verdict(report.footnotes_reproduced()),
            bad.join(", "),
            start.elapsed().as_secs_f64()
        ),
    }
}

const THERMAL: &str = r#"
[scenario.phi_thermal]
picture = "sc"
atomic = "phi"
field = "thermal"
nbar = 0.45
n_max = 12
eps_trunc = 1e-5
t_max = 40.0
samples = 4001
"#;

fn thermal_threshold() -> Line {
    let start = Instant::now();
    let base = scenario(THERMAL, "phi_thermal");
    let eval = |x: f64| Ok(base.with_parameter("nbar", x)?.verdict()?.label);
    let r = match scan_critical("nbar", 0.3, 0.5, 0.005, 3, eval) {
        Ok(r) => r,
        Err(e) => return Line { id: "6", pass: false, detail: format!("scan error: {e}") },
    };
    let secs = start.elapsed().as_secs_f64();
    let (lo, hi) = (r.critical - r.uncertainty, r.critical + r.uncertainty);
    Line {
        id: "6",
        pass: lo >= 0.38 && hi <= 0.48 && secs < 300.0,
        detail: format!(
            "Phi + thermal (SC): nbar_crit = {:.4} +- {:.4} ({} -> {}), target [0.38, 0.48]; {secs:.0} s (limit 300 s)",
            r.critical, r.uncertainty, r.low_label, r.high_label
        ),
    }
}

const TRANSFER: &str = r#"
[scenario.ee_tmss]
picture = "djc"
atomic = "ee"
field = "tmss"
xi_re = 0.5
n_max = 22
eps_trunc = 1e-5
t_max = 25.0
samples = 2501
check_horizon = false
"#;

fn transfer_optimum() -> Line {
    let base = scenario(TRANSFER, "ee_tmss");
    let eval = |x: f64| base.with_parameter("xi", x)?.peak_concurrence();
    match scan_optimum("xi", 0.05, 1.0, 20, eval) {
        Ok(r) => Line {
            id: "7",
            pass: r.interior,
            detail: format!("DJC ee + tmss: peak concurrence maximal at xi = {:.3} (C = {:.4}), interior = {}", r.argmax, r.max, r.interior),
        },
        Err(e) => Line { id: "7", pass: false, detail: format!("scan error: {e}") },
    }
}

const LOW_SQUEEZE: &str = r#"
[scenario.ee_tmss_small]
picture = "djc"
atomic = "ee"
field = "tmss"
xi_re = 0.05
n_max = 8
t_max = 6.0
samples = 601
measures = ["negativity:atoms", "negativity:modes"]
check_horizon = false
"#;

fn low_squeezing() -> Line {
    let xi: f64 = 0.05;
    let rec = scenario(LOW_SQUEEZE, "ee_tmss_small").run().unwrap();
    let atoms = rec.column(Measure::Negativity(Cut::Atoms)).unwrap();
    let modes = rec.column(Measure::Negativity(Cut::Modes)).unwrap();
    let (mut ea, mut ef): (f64, f64) = (0.0, 0.0);
    for (k, &t) in rec.times.iter().enumerate() {
        let approx = negativity_lowsqueeze_approx(xi, 1.0, t).unwrap();
        ea = ea.max((atoms[k] - approx.atoms).abs());
        ef = ef.max((modes[k] - approx.fields).abs());
    }
    let tol = 5.0 * xi * xi;
    Line {
        id: "8",
        pass: ea <= tol && ef <= tol,
        detail: format!("xi = 0.05, gt in [0, 6]: atom-atom error {ea:.2e}, field-field error {ef:.2e} (tol 5 xi^2 = {tol:.2e})"),
    }
}

fn parity_diagonal() -> Line {
    let mut worst: f64 = 0.0;
    let times = time_grid(25.0, 501);
    for n in [1, 2] {
        for atomic in [AtomicState::Ee, AtomicState::Eg, AtomicState::Gg] {
            let traj = trajectory(PI, atomic, FieldSpec::Fock { n, m: n }, n + 1);
            for &t in &times {
                worst = worst.max(traj.atomic_at(t).max_off_diagonal());
            }
        }
    }
    Line {
        id: "9",
        pass: worst < 1e-10,
        detail: format!("ee/eg/gg + fock(n, n), n = 1, 2, phi = pi: max off-diagonal {worst:.1e} (tol 1e-10)"),
    }
}

fn random_qubit_unitary(rng: &mut StdRng) -> DMatrix<C64> {
    let h = DMatrix::from_fn(2, 2, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    expm_i(&((&h + h.adjoint()) * c(0.5, 0.0)), 1.0)
}

fn random_state(rng: &mut StdRng) -> DMatrix<C64> {
    let m = DMatrix::from_fn(4, 4, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let r = &m * m.adjoint();
    let tr = r.trace();
    r / tr
}

fn invariants() -> Line {
    let mut rng = StdRng::seed_from_u64(7);
    let mut failures = Vec::new();
    let n_max = 4;
    let space = CompositeSpace::two_mode(n_max);
    let n_op = excitation_number(&space).unwrap();
    for _ in 0..6 {
        let phi = rng.random_range(0.0..2.0 * PI);
        let t = rng.random_range(0.0..20.0);
        let p = ModelParams::new(1.0, phi, n_max).unwrap();
        let h = build_hamiltonian(&p, &space).unwrap();
        let u = Propagator::numeric(&h, &space, t).unwrap();
        if unitarity_deviation(u.matrix()) > 1e-10 {
            failures.push(format!("unitarity phi={phi:.3}"));
        }
        let comm = h.matrix() * n_op.matrix() - n_op.matrix() * h.matrix();
        if max_abs(&comm) > 1e-12 {
            failures.push(format!("excitation phi={phi:.3}"));
        }
        let traj = trajectory(phi, AtomicState::Phi, FieldSpec::Thermal { nbar: 0.2 }, 12);
        let rho = traj.atomic_at(t);
        let ev = rho.eigenvalues();
        if (rho.trace() - 1.0).abs() > 1e-10 || ev.iter().any(|&l| l < -1e-10) {
            failures.push(format!("trace/positivity phi={phi:.3} t={t:.2}"));
        }
    }
    for _ in 0..50 {
        let rho = random_state(&mut rng);
        let (ua, ub) = (random_qubit_unitary(&mut rng), random_qubit_unitary(&mut rng));
        let u = ua.kronecker(&ub);
        let rotated = &u * &rho * u.adjoint();
        if (concurrence_matrix(&rho) - concurrence_matrix(&rotated)).abs() > 1e-9 {
            failures.push("local-unitary invariance".into());
        }
        // X form: keep the anti-diagonal and diagonal, keep it a state
        let mut x = DMatrix::zeros(4, 4);
        for i in 0..4 {
            x[(i, i)] = rho[(i, i)];
        }
        let (a, d, b, cc) = (rho[(0, 0)].re, rho[(3, 3)].re, rho[(1, 1)].re, rho[(2, 2)].re);
        let z14 = rho[(0, 3)] * ((a * d).sqrt() / rho[(0, 3)].norm()).min(1.0);
        let z23 = rho[(1, 2)] * ((b * cc).sqrt() / rho[(1, 2)].norm()).min(1.0);
        x[(0, 3)] = z14;
        x[(3, 0)] = z14.conj();
        x[(1, 2)] = z23;
        x[(2, 1)] = z23.conj();
        let want = 2.0 * (z14.norm() - (b * cc).sqrt()).max(z23.norm() - (a * d).sqrt()).max(0.0);
        if (concurrence_matrix(&x) - want).abs() > 1e-9 || (concurrence_x_form(&x) - want).abs() > 1e-9 {
            failures.push("X-form".into());
        }
    }
    failures.dedup();
    Line {
        id: "10",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "unitarity, excitation conservation, trace/positivity, local-unitary invariance, X-form: 0 failures".into()
        } else {
            format!("failures: {}", failures.join(", "))
        },
    }
}

fn audit() -> Line {
    let mut worst_elem: f64 = 0.0;
    let mut worst_mag: f64 = 0.0;
    for (phi, t) in [(0.0, 0.7), (1.0, 2.0), (2.5, 1.3), (PI, 4.0)] {
        let p = ModelParams::new(1.0, phi, 1).unwrap();
        let r = resolvent_propagator(&p, t);
        let n = single_excitation_numeric(&p, t).unwrap();
        worst_elem = worst_elem.max(max_abs(&(r.matrix() - n.matrix())));
        for i in 0..4 {
            for j in 0..4 {
                worst_mag = worst_mag.max((r.matrix()[(i, j)].norm() - n.matrix()[(i, j)].norm()).abs());
            }
        }
    }
    let mut bell: f64 = 0.0;
    for phi in [0.7, 1.9, 2.9] {
        let h = single_excitation_h(phi, 1.0);
        for t in time_grid(10.0, 200) {
            let mut psi = nalgebra::DVector::zeros(4);
            psi[0] = c(1.0 / SQRT_2, 0.0);
            psi[1] = c(1.0 / SQRT_2, 0.0);
            let out = expm_i(&h, t) * psi;
            bell = bell.max((concurrence_bell00(phi, 1.0, t) - oracle_concurrence(&out)).abs());
        }
    }
    let n_max = 4;
    let p = ModelParams::new(1.0, PI, n_max).unwrap();
    let space = CompositeSpace::two_mode(n_max);
    let mut u2: f64 = 0.0;
    for t in [0.5, 1.7] {
        let exact = djc_propagator_blocks(&p, n_max, t);
        u2 = u2.max(deviation_low_sectors(&djc_propagator_as_printed(&p, n_max, t), exact.matrix(), &space, n_max));
    }
    let mut rho: f64 = 0.0;
    for (n, m) in [(1, 1), (2, 1), (2, 2)] {
        let exact = rho_nm_state(n, m, Truncation::new(n + m)).unwrap();
        let printed = rho_nm_printed_diagonal(n, m);
        for (k, v) in printed.iter().enumerate() {
            rho = rho.max((exact.matrix()[(k, k)].re - v).abs());
        }
    }
    let all_finite = [worst_elem, worst_mag, bell, u2, rho].iter().all(|x| x.is_finite());
    Line {
        id: "11",
        pass: all_finite,
        detail: format!(
            "informative: resolvent U vs numeric {worst_elem:.2e} (magnitudes {worst_mag:.1e}); printed bell00 concurrence {bell:.2e}; printed DJC U2 {u2:.2e}; printed rho_nm diagonal {rho:.2e}"
        ),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn main() {
    let criteria: [fn() -> Line; 11] = [
        closed_forms,
        death_lattice,
        mapping_equivalences,
        propagator_blocks,
        table_one,
        thermal_threshold,
        transfer_optimum,
        low_squeezing,
        parity_diagonal,
        invariants,
        audit,
    ];
    // ACCEPTANCE_ONLY=2,6 runs a subset
    let only: Option<BTreeSet<String>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').map(|s| s.trim().to_string()).collect());
    let selected = |id: usize| only.as_ref().is_none_or(|o| o.contains(&id.to_string()));
    let mut failed = BTreeSet::new();
    for (k, f) in criteria.iter().enumerate() {
        if !selected(k + 1) {
            continue;
        }
        let line = f();
        println!("criterion {:>2}: {} | {}", line.id, if line.pass { "PASS" } else { "FAIL" }, line.detail);
        if !line.pass {
            failed.insert(line.id);
        }
    }
    let known: BTreeSet<&str> = KNOWN_FAILURES
        .iter()
        .copied()
        .filter(|id| selected(id.parse().unwrap()))
        .collect();
    assert_eq!(failed, known, "failing criteria differ from the recorded list");
}
