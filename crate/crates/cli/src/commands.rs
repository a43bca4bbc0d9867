use std::fmt::Write as _;

use gaborkit::density::{lower_density, rs_trace_bounds, hap_residual, CenterGrid, PointSet, TfPlane};
use gaborkit::gabor::{
    dual_window, frame_bounds, frame_operator, janssen, density_trace_probe, normalized_trace, GaborSystem,
};
use gaborkit::heisenberg::{
    j_embed, kernel_period, pi_rep, sigma_matrix, HGammaElement, HeisenbergElement,
};
use gaborkit::linalg::{max_abs, operator_norm, CMatrix};
use gaborkit::modspace::{default_window, m1v_norm, WeightSpec};
use gaborkit::tfcore::{istft, stft};
use gaborkit::twisted::{
    l1_spectral_radius, spectral_radius_l2, spectral_radius_l2_auto, wiener_invert, LatticeIndex, TwistedSequence,
};
use gaborkit::{Complex64, Error, Result, Signal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::*;
use crate::parse;
use crate::report::{complex, complex_list, write_atomic, Report};

pub fn run(cmd: &Command, seed: u64) -> (Report, Result<()>) {
    let (name, tag) = names(cmd);
    let mut report = Report::new(name, tag);
    report.input("seed", seed);
    let res = match cmd {
        Command::Stft(a) => stft_cmd(a, seed, &mut report),
        Command::FrameBounds(a) => frame_bounds_cmd(a, &mut report),
        Command::DualWindow(a) => dual_window_cmd(a, seed, &mut report),
        Command::Janssen(a) => janssen_cmd(a, &mut report),
        Command::TraceProbe(a) => trace_probe_cmd(a, &mut report),
        Command::TwistedInvert(a) => twisted_invert_cmd(a, &mut report),
        Command::SpectralRadius(a) => spectral_radius_cmd(a, &mut report),
        Command::Density(a) => density_cmd(a, &mut report),
        Command::Hap(a) => hap_cmd(a, seed, &mut report),
        Command::RsBounds(a) => rs_bounds_cmd(a, &mut report),
        Command::Modnorm(a) => modnorm_cmd(a, seed, &mut report),
        Command::HeisenbergCheck(a) => heisenberg_cmd(a, seed, &mut report),
    };
    (report, res)
}

fn names(cmd: &Command) -> (&'static str, &'static str) {
    match cmd {
        Command::Stft(_) => ("stft", "stft-inversion"),
        Command::FrameBounds(_) => ("frame-bounds", "frame-inequality"),
        Command::DualWindow(_) => ("dual-window", "dual-frame-expansion"),
        Command::Janssen(_) => ("janssen", "janssen-representation"),
        Command::TraceProbe(_) => ("trace-probe", "trace-density-limit"),
        Command::TwistedInvert(_) => ("twisted-invert", "twisted-wiener-inversion"),
        Command::SpectralRadius(_) => ("spectral-radius", "twisted-spectral-radius"),
        Command::Density(_) => ("density", "lower-beurling-density"),
        Command::Hap(_) => ("hap", "homogeneous-approximation"),
        Command::RsBounds(_) => ("rs-bounds", "projection-trace-rank"),
        Command::Modnorm(_) => ("modnorm", "modulation-space-norm"),
        Command::HeisenbergCheck(_) => ("heisenberg-check", "heisenberg-representations"),
    }
}

fn window(w: &WindowArgs, len: usize, report: &mut Report) -> Result<Signal> {
    match &w.window_file {
        Some(path) => {
            report.input("window_file", path.display().to_string());
            parse::window_from_file(path, len)
        }
        None => {
            report.input("window", w.window.as_str());
            parse::window_from_name(&w.window, len)
        }
    }
}

fn system(s: &SystemArgs, report: &mut Report) -> Result<GaborSystem> {
    report.input("l", s.len).input("a", s.a).input("b", s.b);
    let phi = window(&s.window, s.len, report)?;
    GaborSystem::new(phi, s.a, s.b)
}

fn stft_cmd(a: &StftArgs, seed: u64, report: &mut Report) -> Result<()> {
    report.input("l", a.len).input("signal", a.signal.as_str());
    let phi = window(&a.window, a.len, report)?;
    let f = parse::signal_from_spec(&a.signal, a.len, seed)?;
    let grid = stft(&f, &phi)?;
    let expected = a.len as f64 * f.norm_sqr() * phi.norm_sqr();
    let parseval_rel = (grid.energy() - expected).abs() / expected;
    let back = istft(&grid, &phi)?;
    let roundtrip = back.max_abs_diff(&f)?;
    report
        .output("energy", grid.energy())
        .output("parseval_constant", expected)
        .output("parseval_relative_error", parseval_rel)
        .output("roundtrip_error", roundtrip)
        .tolerance("parseval_relative", 1e-10)
        .tolerance("roundtrip", 1e-12)
        .check("parseval", parseval_rel <= 1e-10)
        .check("roundtrip", roundtrip <= 1e-12);
    if let Some(path) = &a.csv {
        let mut text = String::new();
        for m in 0..a.len {
            let row: Vec<String> = (0..a.len).map(|n| format!("{:e}", grid.get(m, n).norm())).collect();
            writeln!(text, "{}", row.join(",")).expect("string write");
        }
        write_atomic(path, &text)?;
        report.output("csv", path.display().to_string());
    }
    Ok(())
}

fn frame_bounds_cmd(a: &SystemArgs, report: &mut Report) -> Result<()> {
    let sys = system(a, report)?;
    let fb = frame_bounds(&sys);
    report
        .output("c1", fb.lower)
        .output("c2", fb.upper)
        .output("is_frame", fb.is_frame)
        .output("redundancy", sys.redundancy())
        .output("density_parameter", sys.density_parameter())
        .output("atom_count", sys.atom_count())
        .tolerance("frame", gaborkit::gabor::FRAME_TOLERANCE);
    Ok(())
}

fn dual_window_cmd(a: &SystemArgs, seed: u64, report: &mut Report) -> Result<()> {
    let sys = system(a, report)?;
    let dual = dual_window(&sys)?;
    let dual_sys = sys.with_window(dual.clone())?;
    let f = parse::random_signal(sys.len(), &mut ChaCha8Rng::seed_from_u64(seed))?;
    // f = Σ⟨f, g̃⟩ g and f = Σ⟨f, g⟩ g̃
    let primal = sys.synthesis(&dual_sys.analysis(&f)?)?.max_abs_diff(&f)?;
    let dual_err = dual_sys.synthesis(&sys.analysis(&f)?)?.max_abs_diff(&f)?;
    report
        .output("dual", complex_list(dual.samples()))
        .output("reconstruction_error_primal", primal)
        .output("reconstruction_error_dual", dual_err)
        .tolerance("reconstruction", 1e-10)
        .check("reconstruction", primal.max(dual_err) <= 1e-10);
    Ok(())
}

fn janssen_cmd(a: &JanssenArgs, report: &mut Report) -> Result<()> {
    let sys = system(&a.system, report)?;
    let psi = a
        .psi
        .as_deref()
        .map(|p| {
            report.input("psi", p);
            parse::window_from_name(p, sys.len())
        })
        .transpose()?;
    let rep = janssen(&sys, psi.as_ref())?;
    let s = frame_operator(&sys, psi.as_ref())?;
    let err = operator_norm(&(&s - rep.operator()));
    let psi_ref = psi.as_ref().unwrap_or(sys.window());
    let trace = normalized_trace(&s)?;
    let predicted = psi_ref.inner(sys.window())? * sys.redundancy();
    let trace_err = (trace - predicted).norm();
    let coefs: Vec<Value> = rep
        .significant(a.threshold)
        .into_iter()
        .map(|(j, k, c)| json!({"j": j, "k": k, "value": complex(c)}))
        .collect();
    report
        .input("threshold", a.threshold)
        .output("coefficients", coefs)
        .output("modulation_step", rep.freq_step)
        .output("translation_step", rep.time_step)
        .output("operator_error", err)
        .output("normalized_trace", complex(trace))
        .output("trace_error", trace_err)
        .tolerance("operator", 1e-10)
        .tolerance("trace", 1e-12)
        .check("operator", err <= 1e-10)
        .check("trace", trace_err <= 1e-12);
    Ok(())
}

fn trace_probe_cmd(a: &TraceProbeArgs, report: &mut Report) -> Result<()> {
    let sys = system(&a.system, report)?;
    let psi = match &a.psi {
        Some(p) => {
            report.input("psi", p.as_str());
            parse::window_from_name(p, sys.len())?
        }
        None => sys.window().clone(),
    };
    let points = density_trace_probe(&psi, &sys, &a.eps)?;
    let is_frame = frame_bounds(&sys.with_window(psi.clone())?).is_frame;
    let target = sys.density_parameter();
    let limit = points.last().map(|p| p.value.re).unwrap_or(f64::NAN);
    let rows: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({"eps": p.eps, "value": complex(p.value), "lower_ok": p.lower_ok, "upper_ok": p.upper_ok})
        })
        .collect();
    report
        .input("eps", a.eps.clone())
        .output("points", rows)
        .output("limit", limit)
        .output("density_parameter", target)
        .output("is_frame", is_frame)
        .tolerance("limit", 1e-6)
        .check("inequalities", points.iter().all(|p| p.lower_ok && p.upper_ok))
        .check("limit", !is_frame || (limit - target).abs() <= 1e-6)
        .check("at_most_one", limit <= 1.0 + 1e-6);
    Ok(())
}

fn seq_entries(s: &TwistedSequence) -> Value {
    Value::Array(
        s.entries()
            .map(|(i, v)| {
                if i.dim() == 1 {
                    json!({"j": i.j[0], "k": i.k[0], "value": complex(*v)})
                } else {
                    json!({"j": i.j, "k": i.k, "value": complex(*v)})
                }
            })
            .collect(),
    )
}

fn twisted_invert_cmd(a: &TwistedInvertArgs, report: &mut Report) -> Result<()> {
    report.input("gamma", a.gamma).input("seq", a.seq.as_str()).input("max_terms", a.max_terms);
    if !(a.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {} must be positive", a.tol)));
    }
    let seq = parse::sequence(&a.seq, a.gamma)?;
    let inv = wiener_invert(&seq, a.tol / 10.0, a.max_terms)?;
    report
        .output("inverse", seq_entries(&inv.inverse.pruned(a.tol / 10.0)))
        .output("terms", inv.terms)
        .output("right_residual", inv.right_residual)
        .output("left_residual", inv.left_residual)
        .output("lower_eigenvalue", inv.lower)
        .output("upper_eigenvalue", inv.upper)
        .output("truncation_radius", inv.radius)
        .tolerance("residual", a.tol)
        .check("residual", inv.right_residual.max(inv.left_residual) <= a.tol);
    Ok(())
}

fn spectral_radius_cmd(a: &SpectralRadiusArgs, report: &mut Report) -> Result<()> {
    report.input("gamma", a.gamma).input("seq", a.seq.as_str()).input("n", a.n);
    let seq = parse::sequence(&a.seq, a.gamma)?;
    let l1 = l1_spectral_radius(&seq, a.n)?;
    let (l2, radius) = match a.radius {
        Some(r) => (spectral_radius_l2(&seq, r)?, r),
        None => spectral_radius_l2_auto(&seq)?,
    };
    let rel = (l1.extrapolated - l2).abs() / l2.max(f64::MIN_POSITIVE);
    report
        .output("hermitian", seq.is_hermitian(1e-12 * seq.l1_norm().max(1.0)))
        .output("l1_root_estimate", l1.root_estimate)
        .output("l1_extrapolated", l1.extrapolated)
        .output("l1_norm", seq.l1_norm())
        .output("l2_estimate", l2)
        .output("truncation_radius", radius)
        .output("relative_difference", rel);
    Ok(())
}

fn density_cmd(a: &DensityArgs, report: &mut Report) -> Result<()> {
    let lam = match &a.points.points {
        Some(path) => {
            report.input("points", path.display().to_string());
            PointSet::from_file(path, Some(a.extent))?
        }
        None => {
            report.input("lattice", a.lattice.as_str());
            let (u, v) = parse::generators(&a.lattice)?;
            PointSet::lattice(u, v, a.extent)?
        }
    };
    report.input("extent", a.extent).input("radii", a.radii.clone()).input("centers", a.centers);
    let r_max = a.radii.iter().copied().fold(0.0, f64::max);
    let grid = CenterGrid::Regular {
        per_side: a.centers,
        half_width: (a.extent - r_max).max(0.0),
    };
    let rep = lower_density(&lam, &a.radii, &grid)?;
    report
        .output("point_count", lam.len())
        .output("nu_minus", rep.nu_minus.clone())
        .output("estimates", rep.estimates.clone())
        .output("lower_density", rep.lower_density)
        .output("ball_volume", "pi*r^2")
        .check("monotone", rep.monotone);
    if let Some(path) = &a.csv {
        let mut text = String::from("radius,nu_minus,estimate\n");
        for ((r, n), e) in rep.radii.iter().zip(&rep.nu_minus).zip(&rep.estimates) {
            writeln!(text, "{r},{n},{e}").expect("string write");
        }
        write_atomic(path, &text)?;
        report.output("csv", path.display().to_string());
    }
    Ok(())
}

fn plane(p: &PlaneArgs, len: usize, report: &mut Report) -> Result<(TfPlane, (f64, f64))> {
    let plane = match p.time_unit {
        Some(t) if t > 0 && len % t == 0 => TfPlane::new(len, t, len / t)?,
        Some(t) => return Err(Error::NotADivisor { step: t, len }),
        None => TfPlane::square(len)?,
    };
    let center = parse::real_pair(&p.center)?;
    report
        .input("time_unit", plane.time_unit())
        .input("freq_unit", plane.freq_unit())
        .input("center", vec![center.0, center.1]);
    Ok((plane, center))
}

fn lambda(p: &PointArgs, plane: &TfPlane, sys: &GaborSystem, report: &mut Report) -> Result<Vec<(f64, f64)>> {
    match &p.points {
        Some(path) => {
            report.input("points", path.display().to_string());
            Ok(PointSet::from_file(path, None)?.points().to_vec())
        }
        None => plane.system_points(sys),
    }
}

fn hap_cmd(a: &HapArgs, seed: u64, report: &mut Report) -> Result<()> {
    let sys = system(&a.system, report)?;
    let (plane, center) = plane(&a.plane, sys.len(), report)?;
    let lam = lambda(&a.points, &plane, &sys, report)?;
    let f = parse::signal_from_spec(&a.signal, sys.len(), seed)?;
    let res = hap_residual(&plane, &lam, sys.window(), &f, center, a.radius)?;
    report
        .input("signal", a.signal.as_str())
        .input("radius", a.radius)
        .output("residual", res)
        .output("relative_residual", res / f.norm())
        .output("signal_norm", f.norm());
    Ok(())
}

fn rs_bounds_cmd(a: &RsBoundsArgs, report: &mut Report) -> Result<()> {
    let sys = system(&a.system, report)?;
    let (plane, center) = plane(&a.plane, sys.len(), report)?;
    let lam = lambda(&a.points, &plane, &sys, report)?;
    let rep = rs_trace_bounds(&plane, &lam, sys.window(), a.r, a.big_r, center)?;
    let (eig_min, eig_max) = rep
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    report
        .input("r", a.r)
        .input("big_r", a.big_r)
        .output("trace_t", rep.trace_t)
        .output("card_lam", rep.card_lam)
        .output("card_grid", rep.card_grid)
        .output("epsilon_witness", rep.epsilon_witness)
        .output("rank_w", rep.rank_w)
        .output("eigenvalue_min", if eig_min.is_finite() { eig_min } else { 0.0 })
        .output("eigenvalue_max", if eig_max.is_finite() { eig_max } else { 0.0 })
        .tolerance("eigenvalue", 1e-10)
        .tolerance("trace", 1e-8)
        .check("eigenvalues_in_unit_interval", rep.eigenvalues_in_unit_interval())
        .check("trace_dominated_by_rank", rep.trace_dominated_by_rank())
        .check("chain", rep.chain_holds());
    Ok(())
}

fn modnorm_cmd(a: &ModnormArgs, seed: u64, report: &mut Report) -> Result<()> {
    report.input("l", a.len).input("signal", a.signal.as_str()).input("weight", a.weight.as_str());
    let w: WeightSpec = a.weight.parse()?;
    let f = parse::signal_from_spec(&a.signal, a.len, seed)?;
    let g = match &a.gamma_window {
        Some(name) => {
            report.input("gamma_window", name.as_str());
            parse::window_from_name(name, a.len)?
        }
        None => default_window(a.len)?,
    };
    let norm = m1v_norm(&f, &w, &g)?;
    let plain = m1v_norm(&f, &WeightSpec::Constant, &g)?;
    report
        .output("m1v_norm", norm)
        .output("m1_norm", plain)
        .output("l2_norm", f.norm())
        .check("weight_at_least_one", norm >= plain * (1.0 - 1e-12));
    Ok(())
}

fn random_h(rng: &mut ChaCha8Rng, range: i64) -> HeisenbergElement {
    HeisenbergElement::new1(
        rng.gen_range(-range..=range),
        rng.gen_range(-range..=range),
        rng.gen_range(-range..=range),
    )
}

fn heisenberg_cmd(a: &HeisenbergArgs, seed: u64, report: &mut Report) -> Result<()> {
    report
        .input("l", a.len)
        .input("a", a.a)
        .input("b", a.b)
        .input("n", a.n)
        .input("p", a.p)
        .input("delta", a.delta)
        .input("trials", a.trials);
    if a.n == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    let q = kernel_period(a.len, a.a, a.b)?;
    let gamma = a.p as f64 / a.n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = HeisenbergElement::identity(1);

    let mut axioms = true;
    let mut commutators_central = true;
    let mut pi_err: f64 = 0.0;
    let mut pi_commutator_err: f64 = 0.0;
    let mut sigma_hom_err: f64 = 0.0;
    let mut sigma_unitary_err: f64 = 0.0;
    let mut hgamma_err: f64 = 0.0;
    for _ in 0..a.trials {
        let (x, y, z) = (random_h(&mut rng, 20), random_h(&mut rng, 20), random_h(&mut rng, 20));
        axioms &= x.mul(&y)?.mul(&z)? == x.mul(&y.mul(&z)?)?
            && id.mul(&x)? == x
            && x.mul(&id)? == x
            && x.mul(&x.inverse())? == id
            && x.inverse().mul(&x)? == id;
        let comm = x.commutator(&y)?;
        commutators_central &= comm.is_central();

        let (px, py) = (pi_rep(&x, a.len, a.a, a.b)?, pi_rep(&y, a.len, a.a, a.b)?);
        let pxy = pi_rep(&x.mul(&y)?, a.len, a.a, a.b)?;
        pi_err = pi_err.max(max_abs(&(&px * &py - pxy)));
        let group_comm = &px * &py * px.adjoint() * py.adjoint();
        let scalar = group_comm[(0, 0)];
        let scalar_defect = max_abs(&(&group_comm - CMatrix::identity(a.len, a.len) * scalar));
        pi_commutator_err = pi_commutator_err.max(scalar_defect).max((scalar.norm() - 1.0).abs());

        let (sx, sy) = (sigma_matrix(gamma, a.delta, &x, a.n)?, sigma_matrix(gamma, a.delta, &y, a.n)?);
        let sxy = sigma_matrix(gamma, a.delta, &x.mul(&y)?, a.n)?;
        sigma_hom_err = sigma_hom_err.max(max_abs(&(&sx * &sy - sxy)));
        sigma_unitary_err = sigma_unitary_err.max(max_abs(&(sx.adjoint() * &sx - CMatrix::identity(a.n, a.n))));

        let hx = HGammaElement::from_heisenberg(&x, gamma);
        let hy = HGammaElement::from_heisenberg(&y, gamma);
        let hxy = HGammaElement::from_heisenberg(&x.mul(&y)?, gamma);
        hgamma_err = hgamma_err.max((hx.mul(&hy, gamma)?.zeta - hxy.zeta).norm());
    }
    let kernel = pi_rep(&HeisenbergElement::new1(0, 0, q as i64), a.len, a.a, a.b)?;
    let kernel_err = max_abs(&(kernel - CMatrix::identity(a.len, a.len)));

    // J intertwines ♮_γ with group convolution on an N-point circle grid
    let random_seq = |rng: &mut ChaCha8Rng| -> Result<TwistedSequence> {
        TwistedSequence::from_entries(
            1,
            gamma,
            (0..4).map(|_| {
                (
                    LatticeIndex::new1(rng.gen_range(-2..=2), rng.gen_range(-2..=2)),
                    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                )
            }),
        )
    };
    let (sa, sb) = (random_seq(&mut rng)?, random_seq(&mut rng)?);
    let lhs = j_embed(&sa.conv(&sb)?, a.n)?;
    let rhs = j_embed(&sa, a.n)?.group_convolution(&j_embed(&sb, a.n)?)?;
    let j_err = lhs.max_abs_diff(&rhs);
    let covariance = j_embed(&sa, a.n)?.covariance_defect();

    report
        .output("kernel_period", q)
        .output("gamma", gamma)
        .output("pi_homomorphism_error", pi_err)
        .output("pi_kernel_error", kernel_err)
        .output("pi_commutator_scalar_error", pi_commutator_err)
        .output("sigma_homomorphism_error", sigma_hom_err)
        .output("sigma_unitarity_error", sigma_unitary_err)
        .output("hgamma_homomorphism_error", hgamma_err)
        .output("j_intertwining_error", j_err)
        .output("j_covariance_error", covariance)
        .tolerance("matrix", 1e-12)
        .tolerance("kernel", 1e-14)
        .check("group_axioms", axioms)
        .check("commutators_central", commutators_central)
        .check("pi_homomorphism", pi_err <= 1e-12)
        .check("pi_kernel", kernel_err <= 1e-14)
        .check("pi_commutator_scalar", pi_commutator_err <= 1e-12)
        .check("sigma_homomorphism", sigma_hom_err <= 1e-12)
        .check("sigma_unitary", sigma_unitary_err <= 1e-12)
        .check("hgamma_homomorphism", hgamma_err <= 1e-12)
        .check("j_intertwining", j_err <= 1e-12)
        .check("j_covariance", covariance <= 1e-12);
    Ok(())
}
