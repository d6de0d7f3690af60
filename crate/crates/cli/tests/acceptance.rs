//! End-to-end acceptance checks. Prints one `[PASS]` or `[FAIL]` line per
//! criterion and exits non-zero if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cqpolar::channels::{
    bob_channel, build_channel, capacity_ratio_curve, check_classical_environment, eve_channel,
    symmetric_holevo, Axis,
};
use cqpolar::polarize::{
    combine_minus, combine_plus, polarization_fractions, synthesize, synthesize_recursive,
    verify_pure_state_invariance,
};
use cqpolar::qmath::random::{
    random_density, random_diagonal_density, random_pure, random_unitary,
};
use cqpolar::qpolar::{
    encode, monte_carlo_quantum, run_coherent_protocol, select_phases, ClassicalScDecoder,
    HelstromCascade, PureEnsembles,
};
use cqpolar::wiretap::{
    code_rates, exact_leakage, partition_channels, reliability_bound, security_bound,
    PolarPartition,
};
use cqpolar::{
    ChannelFamilySpec, ComplexMatrix, CqChannel, DensityOperator, EvolveMode, IsometricChannel,
    PureState, SetLabel, WiretapCode,
};

type Outcome = Result<String, String>;

/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_channel(rng: &mut ChaCha8Rng) -> CqChannel {
    let d = rng.random_range(2..=4);
    let r0 = rng.random_range(1..=d);
    let r1 = rng.random_range(1..=d);
    CqChannel::new(random_density(d, r0, rng), random_density(d, r1, rng)).unwrap()
}

fn random_commuting_channel(rng: &mut ChaCha8Rng) -> CqChannel {
    let d = rng.random_range(2..=4);
    let u = random_unitary(d, rng);
    let a = random_diagonal_density(d, rng).conjugate(&u).unwrap();
    let b = random_diagonal_density(d, rng).conjugate(&u).unwrap();
    CqChannel::new(a, b).unwrap()
}

fn max_diff(a: &DensityOperator, b: &DensityOperator) -> f64 {
    a.matrix().max_abs_diff(b.matrix())
}

fn fidelity_recursion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let w = random_channel(&mut rng);
        let f = w.fidelity().map_err(err)?;
        let fp = combine_plus(&w).and_then(|c| c.fidelity()).map_err(err)?;
        let dev = (fp - f * f).abs();
        worst = worst.max(dev);
        ensure(dev <= 1e-10, || {
            format!("channel {k}: F(W+) = {fp}, F(W)^2 = {}", f * f)
        })?;
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn critical_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut slack = f64::INFINITY;
    for k in 0..100 {
        let w = random_commuting_channel(&mut rng);
        let f = w.fidelity().map_err(err)?;
        let fm = combine_minus(&w).and_then(|c| c.fidelity()).map_err(err)?;
        let lower = f * (2.0 - f * f).sqrt();
        slack = slack.min(fm - lower);
        ensure(fm >= lower - 1e-10, || {
            format!("channel {k}: F(W-) = {fm} < {lower}")
        })?;
    }
    let mut gap: f64 = 0.0;
    let mut interior = 0;
    for k in 0..100 {
        let d = rng.random_range(2..=4);
        let (a, b) = (random_pure(d, &mut rng), random_pure(d, &mut rng));
        let overlap = a.inner(&b).norm_sqr();
        if overlap > 1e-6 && overlap < 1.0 - 1e-6 {
            interior += 1;
        }
        let chk = verify_pure_state_invariance(&a, &b).map_err(err)?;
        gap = gap.max(chk.gap);
        ensure(chk.gap <= 1e-9, || {
            format!("pair {k}: F(W) = {}, F(W-) = {}", chk.f_w, chk.f_w_minus)
        })?;
    }
    ensure(interior == 100, || {
        format!("only {interior} pairs with overlap in (0, 1)")
    })?;
    Ok(format!("min slack {slack:.2e}, pure-pair gap {gap:.2e}"))
}

fn family_grids() -> Vec<ChannelFamilySpec> {
    let grid: Vec<f64> = (0..20).map(|k| k as f64 / 19.0).collect();
    let mut specs = Vec::new();
    for &p in &grid {
        specs.push(ChannelFamilySpec::amplitude_damping(p));
        specs.push(ChannelFamilySpec::photon_detected_jump(p));
        specs.push(ChannelFamilySpec::erasure(p));
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            specs.push(ChannelFamilySpec::dephasing(p, axis));
        }
    }
    specs.extend((2..22).map(ChannelFamilySpec::cloning));
    specs
}

fn classical_environment() -> Outcome {
    let specs = family_grids();
    let mut worst: f64 = 0.0;
    for spec in &specs {
        let norm = build_channel(spec)
            .and_then(|c| check_classical_environment(&c))
            .map_err(err)?;
        worst = worst.max(norm);
        ensure(norm <= 1e-12, || {
            format!("{spec}: commutator norm {norm:e}")
        })?;
    }
    Ok(format!("{} channels, max norm {worst:.2e}", specs.len()))
}

fn exact_vs_recursive() -> Outcome {
    let mut worst: f64 = 0.0;
    for spec in [
        ChannelFamilySpec::erasure(0.3),
        ChannelFamilySpec::dephasing(0.2, Axis::Z),
        ChannelFamilySpec::amplitude_damping(0.25),
    ] {
        let w = bob_channel(&build_channel(&spec).map_err(err)?).map_err(err)?;
        for n in 0..=2 {
            for i in 1..=1usize << n {
                let exact = synthesize(&w, n, i)
                    .and_then(|s| s.to_dense())
                    .map_err(err)?;
                let rec = synthesize_recursive(&w, n, i).map_err(err)?;
                for x in 0..2 {
                    let d = max_diff(exact.rho(x), rec.rho(x));
                    worst = worst.max(d);
                    ensure(d <= 1e-10, || format!("{spec} n={n} i={i} x={x}: {d:e}"))?;
                }
            }
        }
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn holevo_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let w = random_channel(&mut rng);
        let minus = combine_minus(&w)
            .and_then(|c| symmetric_holevo(&c))
            .map_err(err)?;
        let plus = combine_plus(&w)
            .and_then(|c| symmetric_holevo(&c))
            .map_err(err)?;
        let twice = 2.0 * symmetric_holevo(&w).map_err(err)?;
        let dev = (minus + plus - twice).abs();
        worst = worst.max(dev);
        ensure(dev <= 1e-8, || {
            format!("channel {k}: {} vs {twice}", minus + plus)
        })?;
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn polarization() -> Outcome {
    let w = CqChannel::bec(0.5).map_err(err)?;
    let pinned = [
        (12, 0.428955078125),
        (16, 0.448944091796875),
        (20, 0.4648723602294922),
    ];
    let mut prev: Option<(f64, f64)> = None;
    let mut last = (0.0, 0.0);
    for (n, good) in pinned {
        let f = polarization_fractions(&w, n, 0.2, EvolveMode::ExactClassical).map_err(err)?;
        ensure((f.good - good).abs() < 1e-12, || {
            format!("n={n}: good {} != {good}", f.good)
        })?;
        ensure((f.poor - good).abs() < 1e-12, || {
            format!("n={n}: poor {} != {good}", f.poor)
        })?;
        if let Some((g, p)) = prev {
            ensure(f.good >= g && f.poor >= p, || {
                format!("n={n}: fractions not monotone")
            })?;
        }
        prev = Some((f.good, f.poor));
        last = (f.good, f.poor);
    }
    ensure(
        (last.0 - 0.5).abs() <= 0.12 && (last.1 - 0.5).abs() <= 0.12,
        || format!("n=20: good {}, poor {}", last.0, last.1),
    )?;
    Ok(format!("n=20 good {:.6}, poor {:.6}", last.0, last.1))
}

fn wiretap_rates() -> Outcome {
    let ch = build_channel(&ChannelFamilySpec::erasure(0.25)).map_err(err)?;
    let (bob, eve) = (
        bob_channel(&ch).map_err(err)?,
        eve_channel(&ch).map_err(err)?,
    );
    let pinned = [(8, 0.34375), (10, 0.35546875), (12, 0.37646484375)];
    let mut prev: Option<(f64, f64)> = None;
    let mut rate = 0.0;
    for (n, expected) in pinned {
        let (p, _) = partition_channels(&bob, &eve, n, 0.2).map_err(err)?;
        let r = code_rates(&p);
        ensure((r.rate - expected).abs() < 1e-12, || {
            format!("n={n}: rate {} != {expected}", r.rate)
        })?;
        if let Some((pr, pk)) = prev {
            ensure(
                r.rate >= pr && (r.rate - 0.5).abs() <= (pr - 0.5).abs(),
                || format!("n={n}: rate {} does not approach 0.5", r.rate),
            )?;
            ensure(r.key_rate <= pk, || {
                format!("n={n}: key rate {} increased", r.key_rate)
            })?;
        }
        prev = Some((r.rate, r.key_rate));
        rate = r.rate;
    }
    ensure((rate - 0.5).abs() <= 0.15, || format!("n=12: rate {rate}"))?;
    Ok(format!("n=12 rate {rate}"))
}

fn strong_security() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut slack = f64::INFINITY;
    let mut with_info = 0;
    for spec in [
        ChannelFamilySpec::dephasing(0.1, Axis::Z),
        ChannelFamilySpec::amplitude_damping(0.1),
    ] {
        let ch = build_channel(&spec).map_err(err)?;
        let (bob, eve) = (
            bob_channel(&ch).map_err(err)?,
            eve_channel(&ch).map_err(err)?,
        );
        for k in 0..20 {
            let beta = rng.random_range(0.05..0.45);
            let (p, t) = partition_channels(&bob, &eve, 2, beta).map_err(err)?;
            let frozen = (0..p.count(SetLabel::B))
                .map(|_| rng.random_range(0..2u8))
                .collect();
            with_info += usize::from(p.count(SetLabel::A) > 0);
            let code = WiretapCode::new(p, rng.random())
                .with_frozen(frozen)
                .map_err(err)?;
            let leak = exact_leakage(&code, &ch).map_err(err)?;
            let bound = security_bound(&code.partition, &t.eve).map_err(err)?;
            if code.partition.count(SetLabel::A) > 0 {
                slack = slack.min(bound - leak);
            }
            ensure(leak <= bound + 1e-9, || {
                format!("{spec} code {k} (beta {beta}): leakage {leak} > bound {bound}")
            })?;
        }
    }
    ensure(with_info > 0, || "no code carries information".into())?;
    Ok(format!(
        "40 codes, {with_info} with |A| > 0, min slack {slack:.3e}"
    ))
}

fn labels_code(layout: &str, seed: u64) -> WiretapCode {
    let labels: Vec<SetLabel> = layout
        .chars()
        .map(|c| match c {
            'A' => SetLabel::A,
            'B' => SetLabel::B,
            'X' => SetLabel::X,
            _ => SetLabel::Y,
        })
        .collect();
    let n = layout.len().trailing_zeros() as usize;
    WiretapCode::new(PolarPartition::from_labels(n, 0.2, labels).unwrap(), seed)
}

fn decoder_bound() -> Outcome {
    let ch = build_channel(&ChannelFamilySpec::amplitude_damping(0.1)).map_err(err)?;
    let (bob, eve) = (
        bob_channel(&ch).map_err(err)?,
        eve_channel(&ch).map_err(err)?,
    );
    let (p, t) = partition_channels(&bob, &eve, 3, 0.2).map_err(err)?;
    ensure(t.bob.iter().all(|x| x.exact), || {
        "Bob's trackers are not exact".into()
    })?;
    let bound = reliability_bound(&p, &t.bob).map_err(err)?;
    let run = monte_carlo_quantum(&bob, &WiretapCode::new(p, 9), 10_000, 9).map_err(err)?;
    ensure(run.error_rate <= bound, || {
        format!("error rate {} above bound {bound}", run.error_rate)
    })?;

    let w =
        bob_channel(&build_channel(&ChannelFamilySpec::erasure(0.3)).map_err(err)?).map_err(err)?;
    let classical = ClassicalScDecoder::from_channel(&w).map_err(err)?;
    let ens = PureEnsembles::new(&w).map_err(err)?;
    let cascade = HelstromCascade::new(&w, 4).map_err(err)?;
    let code = labels_code("BYAA", 21);
    let known = code.known_bits();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for k in 0..100 {
        let info: Vec<u8> = (0..2).map(|_| rng.random_range(0..2)).collect();
        let random: Vec<u8> = vec![rng.random_range(0..2)];
        let x = encode(&code.input_word(&info, &random)).map_err(err)?;
        let picks: Vec<usize> = x.iter().map(|&b| ens.sample(b, &mut rng)).collect();
        let c = classical.decode(&picks, &known).map_err(err)?;
        let psi = ens.product(&x, &picks).map_err(err)?;
        let q = cascade.decode_pure(&psi, &known, &mut rng).map_err(err)?;
        ensure(c == q.decisions, || {
            format!("trial {k}: {c:?} vs {:?}", q.decisions)
        })?;
    }
    Ok(format!(
        "error rate {:.4} <= bound {bound:.4}; 100/100 erasure decisions match",
        run.error_rate
    ))
}

fn identity_channel() -> IsometricChannel {
    IsometricChannel::new(
        ComplexMatrix::identity(2),
        2,
        1,
        vec![
            PureState::basis(2, 0).unwrap(),
            PureState::basis(2, 1).unwrap(),
        ],
    )
    .unwrap()
}

fn coherent_protocol() -> Outcome {
    let id = identity_channel();
    let code = labels_code("AA", 1);
    let phases = select_phases(&id, &code).map_err(err)?;
    let tr = run_coherent_protocol(&id, &code, &phases).map_err(err)?;
    ensure((tr.final_fidelity - 1.0).abs() <= 1e-10, || {
        format!("identity: F = {}", tr.final_fidelity)
    })?;

    let spec = ChannelFamilySpec::erasure(0.0);
    let ch = build_channel(&spec).map_err(err)?;
    let (p, _) = partition_channels(
        &bob_channel(&ch).map_err(err)?,
        &eve_channel(&ch).map_err(err)?,
        1,
        0.2,
    )
    .map_err(err)?;
    let code = WiretapCode::new(p, 1);
    let tr =
        run_coherent_protocol(&ch, &code, &select_phases(&ch, &code).map_err(err)?).map_err(err)?;
    ensure((tr.final_fidelity - 1.0).abs() <= 1e-10, || {
        format!("erasure 0: F = {}", tr.final_fidelity)
    })?;

    let ch = build_channel(&ChannelFamilySpec::amplitude_damping(0.1)).map_err(err)?;
    let (p, _) = partition_channels(
        &bob_channel(&ch).map_err(err)?,
        &eve_channel(&ch).map_err(err)?,
        2,
        0.2,
    )
    .map_err(err)?;
    let code = WiretapCode::new(p, 3);
    let tr =
        run_coherent_protocol(&ch, &code, &select_phases(&ch, &code).map_err(err)?).map_err(err)?;
    let bound = 1.0 - 2.0 * (1.0 - tr.overlap) - 2.0 * (2.0 * 2f64.ln() * tr.leakage).sqrt();
    ensure(tr.final_fidelity >= bound - 1e-6, || {
        format!("AD 0.1: F = {} < bound {bound}", tr.final_fidelity)
    })?;
    Ok(format!(
        "AD 0.1 N=4: F = {:.6} >= {bound:.6}",
        tr.final_fidelity
    ))
}

fn capacity_curves() -> Outcome {
    let grid: Vec<f64> = (2..=45).map(|k| k as f64 / 100.0).collect();
    for spec in [
        ChannelFamilySpec::erasure(0.1),
        ChannelFamilySpec::dephasing(0.1, Axis::Z),
    ] {
        for row in capacity_ratio_curve(&spec, &grid).map_err(err)? {
            let r = row
                .ratio
                .ok_or_else(|| format!("{spec} at {}: no ratio", row.parameter))?;
            ensure((r - 1.0).abs() <= 1e-9, || {
                format!("{spec} at {}: ratio {r}", row.parameter)
            })?;
        }
    }
    let pinned = [
        (
            ChannelFamilySpec::amplitude_damping(0.1),
            [1.00057302837, 1.00430473311, 1.01014419164, 1.01372936861],
        ),
        (
            ChannelFamilySpec::photon_detected_jump(0.1),
            [1.00000693038, 1.0001884171, 1.00140097179, 1.00598913812],
        ),
    ];
    let mut summary = Vec::new();
    for (spec, values) in pinned {
        let rows = capacity_ratio_curve(&spec, &grid).map_err(err)?;
        let ratios: Vec<f64> = rows
            .iter()
            .map(|r| {
                r.ratio
                    .ok_or_else(|| format!("{spec} at {}: no ratio", r.parameter))
            })
            .collect::<Result<_, _>>()?;
        for (row, &r) in rows.iter().zip(&ratios) {
            ensure(r >= 1.0 - 1e-12, || {
                format!("{spec} at {}: ratio {r} < 1", row.parameter)
            })?;
        }
        for pair in ratios.windows(2) {
            ensure((pair[1] - pair[0]).abs() < 0.05, || {
                format!("{spec}: jump {pair:?}")
            })?;
        }
        ensure(ratios[0] < 1.02, || {
            format!("{spec}: ratio at 0.02 is {}", ratios[0])
        })?;
        for (value, expected) in [0.02, 0.1, 0.25, 0.45].into_iter().zip(values) {
            let k = grid
                .iter()
                .position(|&g| (g - value).abs() < 1e-12)
                .unwrap();
            ensure((ratios[k] - expected).abs() < 1e-9, || {
                format!("{spec} at {value}: ratio {} != {expected}", ratios[k])
            })?;
        }
        summary.push(format!(
            "{} max {:.5}",
            spec.family.name(),
            ratios.last().unwrap()
        ));
    }
    Ok(summary.join(", "))
}

fn dense_encode(u: &[u8]) -> Vec<u8> {
    let len = u.len();
    let n = len.trailing_zeros();
    let mut f = vec![vec![1u8]];
    for _ in 0..n {
        let m = f.len();
        let mut next = vec![vec![0u8; 2 * m]; 2 * m];
        for r in 0..m {
            for c in 0..m {
                next[r][c] = f[r][c];
                next[m + r][c] = f[r][c];
                next[m + r][m + c] = f[r][c];
            }
        }
        f = next;
    }
    let rev = |r: usize| r.reverse_bits() >> (usize::BITS - n);
    (0..len)
        .map(|c| (0..len).fold(0, |acc, r| acc ^ (u[r] & f[rev(r)][c])))
        .collect()
}

fn encoder_performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..10 {
        let u: Vec<u8> = (0..16).map(|_| rng.random_range(0..2)).collect();
        let x = encode(&u).map_err(err)?;
        ensure(x == dense_encode(&u), || format!("vector {k}: {u:?}"))?;
    }
    let u: Vec<u8> = (0..1 << 20).map(|_| rng.random_range(0..2)).collect();
    let start = Instant::now();
    let x = encode(&u).map_err(err)?;
    let took = start.elapsed();
    ensure(x.len() == 1 << 20, || "wrong output length".into())?;
    ensure(took < Duration::from_secs(1), || {
        format!("N = 2^20 took {took:?}")
    })?;
    Ok(format!("N = 2^20 in {:.1} ms", took.as_secs_f64() * 1e3))
}

fn run_twice(dir: &Path, name: &str, args: &[&str]) -> Result<(), String> {
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.join(format!("{name}-{k}"));
        let status = Command::new(env!("CARGO_BIN_EXE_cqpolar"))
            .args(args)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(err)?;
        ensure(status.status.success(), || {
            format!("{name}: {}", String::from_utf8_lossy(&status.stderr))
        })?;
        outputs.push(std::fs::read(&out).map_err(err)?);
    }
    ensure(outputs[0] == outputs[1], || {
        format!("{name}: outputs differ")
    })
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let bec = r#"{"family":"erasure","parameter":0.25}"#;
    let ad = r#"{"family":"amplitude_damping","parameter":0.1}"#;
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("channel-info", vec!["channel-info", "--spec", ad]),
        ("polarize", vec!["polarize", "--spec", bec, "--n", "8"]),
        (
            "polarize-json",
            vec!["polarize", "--spec", ad, "--n", "6", "--format", "json"],
        ),
        (
            "partition",
            vec!["partition", "--spec", bec, "--n", "8", "--format", "json"],
        ),
        (
            "partition-csv",
            vec!["partition", "--spec", ad, "--n", "2", "--leakage"],
        ),
        (
            "simulate-classical",
            vec![
                "simulate",
                "--spec",
                bec,
                "--n",
                "6",
                "--trials",
                "500",
                "--seed",
                "7",
                "--mode",
                "classical_sc",
            ],
        ),
        (
            "simulate-quantum",
            vec![
                "simulate",
                "--spec",
                ad,
                "--n",
                "3",
                "--trials",
                "500",
                "--seed",
                "7",
                "--mode",
                "quantum_sc",
                "--format",
                "csv",
            ],
        ),
        (
            "simulate-coherent",
            vec!["simulate", "--spec", ad, "--n", "2", "--mode", "coherent"],
        ),
        ("capacity", vec!["capacity", "--spec", ad]),
        (
            "verify-a",
            vec!["verify", "--suite", "appendix_a", "--seed", "3"],
        ),
        ("verify-b", vec!["verify", "--suite", "appendix_b"]),
        ("verify-lemma1", vec!["verify", "--suite", "lemma1"]),
        (
            "verify-conservation",
            vec!["verify", "--suite", "conservation", "--format", "csv"],
        ),
    ];
    for (name, args) in &runs {
        run_twice(dir.path(), name, args)?;
    }
    Ok(format!("{} invocations byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("fidelity recursion F(W+) = F(W)^2", 10, fidelity_recursion),
        (
            "critical inequality and pure-state invariance",
            30,
            critical_inequality,
        ),
        (
            "classical environment of all families",
            30,
            classical_environment,
        ),
        ("exact vs recursive synthesis", 120, exact_vs_recursive),
        ("Holevo conservation", 60, holevo_conservation),
        ("BEC(0.5) polarization fractions", 60, polarization),
        ("erasure wiretap rates", 60, wiretap_rates),
        ("strong security at N = 4", 300, strong_security),
        (
            "quantum SC decoder bound and erasure equivalence",
            600,
            decoder_bound,
        ),
        ("coherent protocol fidelity", 600, coherent_protocol),
        ("capacity ratio curves", 60, capacity_curves),
        ("encoder performance", 60, encoder_performance),
        ("CLI determinism", 600, determinism),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|detail| {
            if took > Duration::from_secs(limit) {
                Err(format!("{detail}; took {took:?}, limit {limit} s"))
            } else {
                Ok(detail)
            }
        });
        match result {
            Ok(detail) => println!(
                "[PASS] {:>2} {name}: {detail} ({:.2} s)",
                k + 1,
                took.as_secs_f64()
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "[FAIL] {:>2} {name}: {detail} ({:.2} s)",
                    k + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
