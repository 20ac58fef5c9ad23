use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde_json::json;

use super::args::*;
use super::exit;
use super::output::{Cell, Table};
use super::{Cli, CliError, CliResult, OutputFormat};
use crate::bloch::{to_density, from_density, AffineBlochMap, BlochVector, Superoperator};
use crate::cp::{
    bloch_inequalities, bloch_lhs, choi_matrix, choi_test, kraus_from_choi, lifetime_violations,
    unital_kraus, unital_kraus_terms, unital_kraus_weights, verify_kraus, tetrahedron_sample, CpVerdict,
    DecayRates, KrausSet, BLOCH_INEQUALITY_TEXT, LIFETIME_INEQUALITY_TEXT,
};
use crate::linalg::{hermitian_eigenvalues4, pauli_coefficients};
use crate::markov::{
    damping_basis, evolve_by_damping_basis, integrate_bloch, preset_rates, semigroup_check, BlochParams,
    LindbladGenerator, Preset,
};
use crate::nonmarkov::{rts_lambda, rts_map, DephasingChannel, RtsParams};
use crate::ode::time_grid;
use crate::separability::{peres_eigenvalues, separability_times};
use crate::stochastic::{ensemble_average, NoiseKind, NoiseSpec};

pub fn execute(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::CheckCp(m) => check_cp(cli, m),
        Command::Fig1(a) => fig1(cli, a),
        Command::Fig2(a) => fig2(cli, a),
        Command::Fig3(a) => fig3(cli, a),
        Command::Evolve(a) => evolve(cli, a),
        Command::Montecarlo(a) => montecarlo(cli, a),
        Command::Separability(a) => separability(cli, a),
        Command::Kraus(a) => kraus(cli, a),
        Command::DampingBasis(a) => damping(cli, a),
    }
}

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(cli: &Cli, table: &Table) -> CliResult<()> {
    let mut w = sink(cli.out.as_deref())?;
    table.write(&mut w, cli.format)?;
    w.flush()?;
    Ok(())
}

fn arr3(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn verdict_code(v: &CpVerdict) -> i32 {
    if v.is_completely_positive {
        exit::OK
    } else if v.is_positive {
        exit::DOMAIN_NEGATIVE
    } else {
        exit::NOT_POSITIVE
    }
}

fn matrix_map(values: &[f64]) -> CliResult<AffineBlochMap> {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row.copy_from_slice(&values[4 * i..4 * i + 4]);
    }
    AffineBlochMap::from_superoperator(&Superoperator(m)).map_err(|e| CliError::Usage(format!("malformed matrix: {e}")))
}

fn fmt3(x: [f64; 3]) -> String {
    format!("({}, {}, {})", x[0], x[1], x[2])
}

fn kraus_lines(k: &KrausSet) -> Vec<String> {
    k.operators
        .iter()
        .map(|op| {
            let e = |z: Complex64| format!("{:.6}{:+.6}i", z.re, z.im);
            format!("[[{}, {}], [{}, {}]]", e(op.0[0][0]), e(op.0[0][1]), e(op.0[1][0]), e(op.0[1][1]))
        })
        .collect()
}

struct Report {
    lines: Vec<String>,
    json: serde_json::Value,
    code: i32,
}

fn check_cp(cli: &Cli, m: &MapInput) -> CliResult<i32> {
    let report = if let Some(r) = &m.rates {
        rates_report(arr3(r))?
    } else if let Some(l) = &m.lambda {
        map_report(AffineBlochMap::unital(arr3(l)))?
    } else {
        let values = m.matrix.as_ref().expect("clap enforces one input form");
        map_report(matrix_map(values)?)?
    };
    let mut w = sink(cli.out.as_deref())?;
    match cli.format {
        OutputFormat::Csv => {
            for l in &report.lines {
                writeln!(w, "{l}")?;
            }
        }
        OutputFormat::Json => writeln!(w, "{}", report.json)?,
    }
    w.flush()?;
    Ok(report.code)
}

fn rates_report(r: [f64; 3]) -> CliResult<Report> {
    if let Some(k) = r.iter().position(|x| *x < 0.0) {
        let line = format!(
            "not positive: rate {} is negative, so Λ = e^(−rt) grows beyond 1",
            r[k]
        );
        return Ok(Report {
            json: json!({"input": "rates", "rates": r, "positive": false, "completely_positive": false, "note": line}),
            lines: vec![format!("rates: {}", fmt3(r)), "verdict: not PM".into(), line],
            code: exit::NOT_POSITIVE,
        });
    }
    let rates = DecayRates::from_array(r);
    let violated = lifetime_violations(rates)?;
    // Worst Choi eigenvalue along the exponential family.
    let slowest = r.iter().cloned().filter(|x| *x > 0.0).fold(f64::INFINITY, f64::min);
    let horizon = if slowest.is_finite() { 10.0 / slowest } else { 1.0 };
    let (mut worst, mut worst_t) = (f64::INFINITY, 0.0);
    for t in time_grid(horizon, horizon / 2000.0) {
        let q = bloch_inequalities(rates.lambda_at(t)).choi_min_eigenvalue;
        if q < worst {
            worst = q;
            worst_t = t;
        }
    }
    let cp = violated.is_empty();
    let mut lines = vec![
        format!("rates: {}", fmt3(r)),
        format!("verdict: {}", if cp { "CPM" } else { "PM only" }),
    ];
    for k in &violated {
        lines.push(format!("violates {}", LIFETIME_INEQUALITY_TEXT[*k]));
    }
    lines.push(format!("min Choi eigenvalue over t: {worst:.6e} at t = {worst_t:.6}"));
    Ok(Report {
        json: json!({
            "input": "rates", "rates": r, "positive": true, "completely_positive": cp,
            "violated_lifetime_inequalities": violated.iter().map(|k| k + 1).collect::<Vec<_>>(),
            "min_choi_eigenvalue": worst, "min_choi_time": worst_t,
        }),
        lines,
        code: if cp { exit::OK } else { exit::DOMAIN_NEGATIVE },
    })
}

fn map_report(map: AffineBlochMap) -> CliResult<Report> {
    let verdict = choi_test(&map);
    let spectrum = if map.is_unital() {
        let mut w = unital_kraus_weights(map.lambda);
        w.sort_by(f64::total_cmp);
        w
    } else {
        hermitian_eigenvalues4(&choi_matrix(&map.superoperator()))?
    };
    let label = match verdict_code(&verdict) {
        exit::OK => "CPM",
        exit::DOMAIN_NEGATIVE => "PM only",
        _ => "not PM",
    };
    let mut lines = vec![
        format!("lambda: {}", fmt3(map.lambda)),
        format!("translation: {}", fmt3(map.translation)),
        format!("verdict: {label}"),
    ];
    if let Some(k) = verdict.violated_inequality {
        lines.push(format!("violates {}", BLOCH_INEQUALITY_TEXT[k - 1]));
    }
    lines.push(format!(
        "Choi spectrum: {}",
        spectrum.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ")
    ));
    let mut kraus_json = serde_json::Value::Null;
    if verdict.is_completely_positive {
        if map.is_unital() {
            let terms = unital_kraus_terms(map.lambda)?;
            let names = ["I", "σ₁", "σ₂", "σ₃"];
            let text: Vec<String> = terms
                .iter()
                .map(|t| format!("√{:.6} {}", t.weight, names[t.pauli]))
                .collect();
            lines.push(format!("Kraus: {{{}}}", text.join(", ")));
            kraus_json = json!(terms.iter().map(|t| json!({"pauli": t.pauli, "weight": t.weight})).collect::<Vec<_>>());
        } else {
            let k = kraus_from_choi(&map)?;
            let text = kraus_lines(&k);
            lines.push(format!("Kraus: {{{}}}", text.join(", ")));
            kraus_json = json!(text);
        }
    }
    Ok(Report {
        json: json!({
            "input": "map", "lambda": map.lambda, "translation": map.translation,
            "positive": verdict.is_positive, "completely_positive": verdict.is_completely_positive,
            "violated_inequality": verdict.violated_inequality, "choi_spectrum": spectrum, "kraus": kraus_json,
        }),
        lines,
        code: verdict_code(&verdict),
    })
}

fn fig1(cli: &Cli, a: &Fig1Args) -> CliResult<i32> {
    let points = tetrahedron_sample(a.n)?;
    let mut table = Table::new(&["l1", "l2", "l3", "positive", "cp"]);
    let mut n_cp = 0;
    for p in &points {
        n_cp += p.verdict.is_completely_positive as usize;
        table.push(vec![
            p.lambda[0].into(),
            p.lambda[1].into(),
            p.lambda[2].into(),
            p.verdict.is_positive.into(),
            p.verdict.is_completely_positive.into(),
        ]);
    }
    eprintln!("CP fraction: {:.6} ({n_cp} of {})", n_cp as f64 / points.len() as f64, points.len());
    emit(cli, &table)?;
    Ok(exit::OK)
}

fn grid(t_end: f64, dt: f64) -> CliResult<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(CliError::Usage(format!("need t_end ≥ 0 and dt > 0, got {t_end}, {dt}")));
    }
    Ok(time_grid(t_end, dt))
}

fn fig2(cli: &Cli, a: &Fig2Args) -> CliResult<i32> {
    let rates = DecayRates::from_array(arr3(&a.rates));
    rates.validate()?;
    let mut table = Table::new(&["t", "c1", "c2", "c3", "c4"]);
    let mut max = [f64::NEG_INFINITY; 4];
    for t in grid(a.t_max, a.dt)? {
        let c = bloch_lhs(rates.lambda_at(t));
        for k in 0..4 {
            max[k] = max[k].max(c[k]);
        }
        table.push(vec![t.into(), c[0].into(), c[1].into(), c[2].into(), c[3].into()]);
    }
    for (k, m) in max.iter().enumerate() {
        eprintln!("max c{} = {m:.6}{}", k + 1, if *m > 1.0 + 1e-10 { " > 1" } else { "" });
    }
    emit(cli, &table)?;
    Ok(exit::OK)
}

fn fig3(cli: &Cli, a: &Fig3Args) -> CliResult<i32> {
    if !(a.gamma > 0.0) {
        return Err(CliError::Usage(format!("γ must be > 0, got {}", a.gamma)));
    }
    let times = grid(a.t_max, a.dt)?;
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir)?;
    }
    let mut long = Table::new(&["tau", "t", "lambda", "separable"]);
    for &tau in &a.taus {
        let channel = if tau == 0.0 {
            DephasingChannel::WhiteNoise { gamma: a.gamma }
        } else {
            DephasingChannel::Rts(RtsParams::with_white_noise_rate(a.gamma, tau)?)
        };
        let roots = if a.t_max > 0.0 { separability_times(&channel, a.t_max)? } else { Vec::new() };
        let mut marked = vec![false; times.len()];
        for r in &roots {
            let k = times
                .iter()
                .enumerate()
                .min_by(|x, y| (x.1 - r).abs().total_cmp(&(y.1 - r).abs()))
                .map(|(k, _)| k)
                .expect("non-empty grid");
            marked[k] = true;
        }
        eprintln!(
            "tau = {tau}: {}",
            if roots.is_empty() {
                "no zero crossing".to_string()
            } else {
                format!("separable at t = {}", roots.iter().map(|r| format!("{r:.6}")).collect::<Vec<_>>().join(", "))
            }
        );
        let mut table = Table::new(&["t", "lambda", "separable"]);
        for (k, &t) in times.iter().enumerate() {
            let l = channel.lambda(t)?;
            table.push(vec![t.into(), l.into(), marked[k].into()]);
            long.push(vec![tau.into(), t.into(), l.into(), marked[k].into()]);
        }
        if let Some(dir) = &cli.out {
            let ext = match cli.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            };
            let mut w = sink(Some(&dir.join(format!("fig3_tau_{tau}.{ext}"))))?;
            table.write(&mut w, cli.format)?;
            w.flush()?;
        }
    }
    if cli.out.is_none() {
        emit(cli, &long)?;
    }
    Ok(exit::OK)
}

fn require_value(v: Option<f64>, flag: &str, preset: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("--preset {preset} requires --{flag}")))
}

fn bloch_params(g: &GeneratorArgs) -> CliResult<BlochParams> {
    let (mut rates, w_eq) = match g.preset {
        Some(kind) => {
            let preset = match kind {
                PresetKind::Standard => Preset::Standard {
                    t1: require_value(g.t1, "t1", "standard")?,
                    t2: require_value(g.t2, "t2", "standard")?,
                },
                PresetKind::Squeezed => {
                    Preset::SqueezedVacuum {
                        a: require_value(g.einstein_a, "einstein-a", "squeezed")?,
                        n: require_value(g.photons, "photons", "squeezed")?,
                        m: g.squeezing.unwrap_or_default(),
                    }
                }
                PresetKind::Triple => {
                    let gm = g
                        .gammas
                        .as_ref()
                        .ok_or_else(|| CliError::Usage("--preset triple requires --gammas".into()))?;
                    Preset::TripleGaussian {
                        gamma_a: gm[0],
                        gamma_b: gm[1],
                        gamma_c: gm[2],
                    }
                }
            };
            let pr = preset_rates(preset)?;
            if !pr.completely_positive {
                log::warn!("preset rates {:?} do not generate a completely positive map", pr.rates);
            }
            (pr.rates, pr.w_eq)
        }
        None => (g.rates.unwrap_or([0.0; 3]), g.w_eq),
    };
    if !(g.dephasing >= 0.0) {
        return Err(CliError::Usage(format!("--dephasing must be ≥ 0, got {}", g.dephasing)));
    }
    rates[0] += 4.0 * g.dephasing;
    rates[1] += 4.0 * g.dephasing;
    Ok(BlochParams::new(g.rabi, g.detuning, DecayRates::from_array(rates), w_eq)?)
}

fn evolve(cli: &Cli, a: &EvolveArgs) -> CliResult<i32> {
    let p = bloch_params(&a.generator)?;
    let b0 = BlochVector::from_array(arr3(&a.b0));
    let mut table = Table::new(&["t", "u", "v", "w"]);
    match a.method {
        EvolveMethod::Ode => {
            for (t, b) in integrate_bloch(&p, b0, a.t_end, a.dt)?.iter() {
                table.push(vec![t.into(), b.u.into(), b.v.into(), b.w.into()]);
            }
        }
        EvolveMethod::DampingBasis => {
            let basis = damping_basis(&LindbladGenerator::from_bloch_params(&p)?)?;
            let rho0 = to_density(b0)?;
            for t in grid(a.t_end, a.dt)? {
                let b = from_density(&evolve_by_damping_basis(&basis, &rho0, t)?)?;
                table.push(vec![t.into(), b.u.into(), b.v.into(), b.w.into()]);
            }
        }
    }
    emit(cli, &table)?;
    Ok(exit::OK)
}

fn montecarlo(cli: &Cli, a: &MonteCarloArgs) -> CliResult<i32> {
    let kind = match a.noise {
        NoiseChoice::Telegraph => NoiseKind::Telegraph { a: a.a, tau: a.tau },
        NoiseChoice::Gaussian => NoiseKind::GaussianWhite { gammas: arr3(&a.gammas) },
    };
    let spec = NoiseSpec { kind, seed: a.seed };
    let b0 = arr3(&a.b0);
    let result = ensemble_average(&spec, BlochVector::from_array(b0), a.t_end, a.dt, a.n_traj)?;
    let analytic = |t: f64| -> CliResult<[f64; 3]> {
        Ok(match kind {
            NoiseKind::Telegraph { a, tau } => {
                let l = if a == 0.0 { 1.0 } else { rts_lambda(&RtsParams::new(a, tau)?, t)? };
                [l * b0[0], l * b0[1], b0[2]]
            }
            NoiseKind::GaussianWhite { gammas: [ga, gb, gc] } => {
                let r = [gb + gc, ga + gc, ga + gb];
                [0, 1, 2].map(|k| b0[k] * (-r[k] * t).exp())
            }
        })
    };
    let mut table = Table::new(&[
        "t", "mean_u", "mean_v", "mean_w", "se_u", "se_v", "se_w", "analytic_u", "analytic_v", "analytic_w",
        "within_3se",
    ]);
    let mut n_ok = 0;
    for (i, &t) in result.times.iter().enumerate() {
        let m = result.mean[i].to_array();
        let se = result.se[i];
        let an = analytic(t)?;
        let ok = (0..3).all(|k| (m[k] - an[k]).abs() <= 3.0 * se[k] + 1e-12);
        n_ok += ok as usize;
        let mut row: Vec<Cell> = vec![t.into()];
        row.extend(m.iter().chain(&se).chain(&an).map(|x| Cell::from(*x)));
        row.push(ok.into());
        table.push(row);
    }
    eprintln!(
        "{n_ok} of {} grid points within 3 standard errors ({} trajectories)",
        result.times.len(),
        result.n_traj
    );
    emit(cli, &table)?;
    Ok(exit::OK)
}

fn separability(cli: &Cli, a: &SeparabilityArgs) -> CliResult<i32> {
    let (channel, default_t) = match (a.a, a.tau, a.white_noise) {
        (Some(amp), Some(tau), None) => (DephasingChannel::Rts(RtsParams::new(amp, tau)?), 40.0 * tau),
        (None, _, Some(gamma)) if gamma > 0.0 => (DephasingChannel::WhiteNoise { gamma }, 20.0 / gamma),
        (None, _, Some(gamma)) => return Err(CliError::Usage(format!("γ must be > 0, got {gamma}"))),
        _ => return Err(CliError::Usage("give either --a and --tau, or --white-noise".into())),
    };
    let t_max = a.t_max.unwrap_or(default_t);
    let roots = separability_times(&channel, t_max)?;
    if roots.is_empty() {
        eprintln!("no finite separability time in (0, {t_max}]");
    } else {
        eprintln!(
            "separability times: {}",
            roots.iter().map(|r| format!("{r:.10}")).collect::<Vec<_>>().join(", ")
        );
    }
    let mut table = Table::new(&["t", "lambda", "e1", "e2", "e3", "e4", "entangled"]);
    for t in grid(t_max, a.dt.unwrap_or(t_max / 400.0))? {
        let map = channel.map(t)?;
        let s = peres_eigenvalues(&map);
        let mut row: Vec<Cell> = vec![t.into(), map.lambda[0].into()];
        row.extend(s.values.iter().map(|x| Cell::from(*x)));
        row.push(s.is_entangled().into());
        table.push(row);
    }
    emit(cli, &table)?;
    Ok(exit::OK)
}

fn kraus(cli: &Cli, a: &KrausArgs) -> CliResult<i32> {
    let (map, known) = if let Some(r) = &a.rates {
        let rates = DecayRates::from_array(arr3(r));
        rates.validate()?;
        (AffineBlochMap::unital(rates.lambda_at(a.t)), None)
    } else if let Some(l) = &a.lambda {
        (AffineBlochMap::unital(arr3(l)), None)
    } else if let Some(m) = &a.matrix {
        (matrix_map(m)?, None)
    } else {
        let r = a.rts.as_ref().expect("clap enforces one input form");
        let (map, k) = rts_map(&RtsParams::new(r[0], r[1])?, a.t)?;
        (map, Some(k))
    };
    let verdict = choi_test(&map);
    if !verdict.is_completely_positive {
        eprintln!("map is not completely positive (min Choi eigenvalue {:.6e}); no Kraus set", verdict.choi_min_eigenvalue);
        return Ok(verdict_code(&verdict));
    }
    let k = match known {
        Some(k) => k,
        None if map.is_unital() => unital_kraus(map.lambda)?,
        None => kraus_from_choi(&map)?,
    };
    let check = verify_kraus(&k, &map);
    match &check.diagnostic {
        None => eprintln!("Kraus set verified: completeness defect {:.2e}", check.completeness_defect),
        Some(d) => eprintln!("Kraus verification failed: {d}"),
    }
    let mut table = Table::new(&[
        "k", "k00_re", "k00_im", "k01_re", "k01_im", "k10_re", "k10_im", "k11_re", "k11_im",
    ]);
    for (i, op) in k.operators.iter().enumerate() {
        let mut row: Vec<Cell> = vec![i.into()];
        for z in op.0.iter().flatten() {
            row.push(z.re.into());
            row.push(z.im.into());
        }
        table.push(row);
    }
    emit(cli, &table)?;
    Ok(if check.passed() { exit::OK } else { exit::DOMAIN_NEGATIVE })
}

fn damping(cli: &Cli, g: &GeneratorArgs) -> CliResult<i32> {
    let p = bloch_params(g)?;
    let basis = damping_basis(&LindbladGenerator::from_bloch_params(&p)?)?;
    let semigroup = semigroup_check(&basis, 1.0, 1.0)?;
    eprintln!(
        "duality defect {:.2e}; semigroup composition defect {:.2e}",
        basis.duality_defect(),
        semigroup.composition_defect
    );
    let mut cols = vec!["i".to_string(), "lambda_re".into(), "lambda_im".into()];
    for side in ["r", "l"] {
        for p in ["i", "x", "y", "z"] {
            cols.push(format!("{side}_{p}_re"));
            cols.push(format!("{side}_{p}_im"));
        }
    }
    let mut table = Table {
        columns: cols,
        rows: Vec::new(),
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..4 {
        let z = basis.eigenvalues()[i];
        let mut row: Vec<Cell> = vec![i.into(), z.re.into(), z.im.into()];
        for op in [&basis.right()[i], &basis.left()[i]] {
            // Coefficients in the σ_α/√2 basis.
            for c in pauli_coefficients(op) {
                row.push((c.re * h).into());
                row.push((c.im * h).into());
            }
        }
        table.push(row);
    }
    emit(cli, &table)?;
    Ok(exit::OK)
}
