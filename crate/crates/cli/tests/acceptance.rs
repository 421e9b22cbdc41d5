//! Acceptance gate: one line per criterion with its verdict and timing.
//! Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use logpois::chart::{H3Verdict, LogChart};
use logpois::connection::{
    ep_principal, gauge_transform, poisson_curvature, poisson_curvature_column, ConnMatrix, GaugeMatrix, PvMatrix,
    ResidueTuple,
};
use logpois::error::Error;
use logpois::monodromy::{meridional_character, to_complex, transport_1d, twisted_rep_eval, ComplexMatrixF, Letter, TwistedWord};
use logpois::poisson::{JacobiVerdict, LogForm};
use logpois::ppd::{defect, normalize, stabilizer_kernel, verify_uniqueness, NormalizeOptions, UniquenessVerdict, VariableOrder};
use logpois::rank2::*;
use logpois::sample::*;
use logpois::series::Ring;
use logpois::spectral::centralizer_check_series;
use logpois::text::parse_poly;
use logpois::{HolomorphyClass, LaurentPoly, Matrix, MultiIndex, Polyvector, Scalar};
use logpois_cli::report::parse_report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn log_canonical_chart(rng: &mut ChaCha8Rng, n: usize, r: usize, t: i32) -> LogChart {
    let ring = Ring::with_leading_logs(n, r, t, 1).unwrap();
    LogChart::log_canonical(ring, &random_log_canonical(rng, n))
}

// 1
fn l1111_jacobi() -> Outcome {
    let mut rng = rng(1);
    for k in 0..25 {
        let p = random_l1111_params(&mut rng);
        let ch = l1111_structure(&p, &L1111_DEFAULT_LOG, 5, 1).map_err(|e| e.to_string())?;
        ensure!(ch.poisson().check_jacobi() == JacobiVerdict::Poisson, "draw {k}: jacobiator nonzero for a = {:?}", p.a());
    }
    Ok("25 draws, jacobiator zero on all triples".into())
}

// 2
fn l1111_hamiltonians() -> Outcome {
    let mut rng = rng(1);
    for k in 0..25 {
        let p = random_l1111_params(&mut rng);
        let ch = l1111_structure(&p, &L1111_DEFAULT_LOG, 5, 1).map_err(|e| e.to_string())?;
        ensure!(xi_closed_check(&ch).map_err(|e| e.to_string())? == XiVerdict::Ok, "draw {k}: closed form disagrees");
        ensure!(ch.check_h3() == H3Verdict::Ok, "draw {k}: log-tangency fails");
        for (i, x) in ch.log_hamiltonians().iter().enumerate() {
            ensure!(ch.poisson().delta_vector(x).is_zero(), "draw {k}: delta(X{}) nonzero", i + 1);
        }
    }
    Ok("25 draws, closed form agrees, delta(X_i) = 0".into())
}

// 3
fn ep_flatness() -> Outcome {
    let mut rng = rng(3);
    let (mut flat, mut curved) = (0, 0);
    for k in 0..50 {
        let ch = log_canonical_chart(&mut rng, 2, 2, 4);
        let e = rng.gen_range(1..=3);
        let (a1, a2) = if k % 2 == 0 {
            let m = random_matrix(&mut rng, e);
            let (s, t) = (small_rational(&mut rng), small_rational(&mut rng));
            (m.scale(&s).add(&Matrix::identity(e).scale(&t)), m.mul(&m).add(&m.scale(&t)))
        } else {
            (random_matrix(&mut rng, e), random_matrix(&mut rng, e))
        };
        let comm = a1.commutator(&a2);
        let theta = ep_principal(&ch, &ResidueTuple::new(vec![a1, a2]).unwrap()).map_err(|e| e.to_string())?;
        let xs = ch.log_hamiltonians();
        let expected = PvMatrix::kron(&comm, &xs[0].wedge(&xs[1]));
        let col = poisson_curvature_column(&ch, &theta);
        ensure!(col.is_zero() == comm.is_zero(), "draw {k}: flatness and commutation disagree");
        ensure!(col == expected, "draw {k}: curvature differs from [A1,A2] X1^X2");
        ensure!(poisson_curvature(&ch, &theta) == expected.neg(), "draw {k}: row convention is not the negative");
        if comm.is_zero() {
            flat += 1
        } else {
            curved += 1
        }
    }
    Ok(format!("50 pairs ({flat} commuting, {curved} not), exact formula holds"))
}

struct Instance {
    chart: LogChart,
    residues: ResidueTuple,
    theta0: ConnMatrix,
    theta: ConnMatrix,
    g: GaugeMatrix,
}

const T: i32 = 6;

fn instances() -> Vec<Instance> {
    let mut rng = rng(4);
    (0..20)
        .map(|k| {
            let n = 2 + k % 3;
            let e = 2 + (k / 3) % 2;
            let ring = Ring::with_leading_logs(n, n, T, 1).unwrap();
            let chart = LogChart::log_canonical(ring, &random_log_canonical(&mut rng, n));
            let residues = random_residues(&mut rng, n, e);
            let theta0 = ep_principal(&chart, &residues).unwrap();
            let g = random_gauge(&mut rng, ring, e, 3);
            let theta = gauge_transform(&chart, &theta0, &g).unwrap();
            Instance { chart, residues, theta0, theta, g }
        })
        .collect()
}

fn opts(inst: &Instance, order: VariableOrder) -> NormalizeOptions {
    NormalizeOptions { residues: Some(inst.residues.clone()), order, ..Default::default() }
}

// 4
fn round_trip() -> Outcome {
    let mut worst = 0f64;
    for (k, inst) in instances().iter().enumerate() {
        let start = Instant::now();
        let res = normalize(&inst.chart, &inst.theta, T, &opts(inst, VariableOrder::Canonical)).map_err(|e| format!("instance {k}: {e}"))?;
        ensure!(res.normal_form == inst.theta0, "instance {k}: normal form differs");
        ensure!(defect(&inst.chart, &inst.theta, &res.gauge, &inst.theta0).map_err(|e| e.to_string())?.is_zero(), "instance {k}: defect nonzero");
        let v = verify_uniqueness(&inst.chart, &inst.theta, &res.gauge, &inst.g.inverse().unwrap(), &inst.residues, T)
            .map_err(|e| format!("instance {k}: {e}"))?;
        ensure!(matches!(v, UniquenessVerdict::Ok { .. }), "instance {k}: {v:?}");
        let secs = start.elapsed().as_secs_f64();
        ensure!(secs < 60.0, "instance {k} took {secs:.1} s");
        worst = worst.max(secs);
    }
    Ok(format!("20 instances, defect zero, uniqueness vs constructing gauge, slowest {worst:.2} s"))
}

fn c2(t: i32) -> LogChart {
    let ring = Ring::with_leading_logs(2, 2, t, 1).unwrap();
    LogChart::log_canonical(ring, &Matrix::from_rows(vec![vec![Scalar::ZERO, Scalar::ONE], vec![-Scalar::ONE, Scalar::ZERO]]))
}

// 5
fn worked_instance() -> Outcome {
    let ch = c2(4);
    let ring = ch.ring();
    let l = ch.labels().to_vec();
    let a = ResidueTuple::new(vec![Matrix::diag(&[Scalar::frac(1, 2), Scalar::ZERO]), Matrix::zeros(2, 2)]).unwrap();
    let theta0 = ep_principal(&ch, &a).unwrap();
    let mut g = GaugeMatrix::identity(ring, 2);
    g.set(0, 1, parse_poly("z1", ring, &l).unwrap());
    let theta = gauge_transform(&ch, &theta0, &g).unwrap();
    let res = normalize(&ch, &theta, 4, &NormalizeOptions { residues: Some(a), ..Default::default() }).map_err(|e| e.to_string())?;
    let rec = &res.certificate[0];
    let mut k1 = GaugeMatrix::zero(ring, 2);
    k1.set(0, 1, parse_poly("-z1", ring, &l).unwrap());
    ensure!(rec.degree == 1 && rec.correction == k1, "K1 = {}", rec.correction.fmt_with(&l));
    ensure!(rec.denominators.iter().any(|d| d.weight == vec![Scalar::frac(1, 2), Scalar::ZERO]), "denominator (1/2,0) missing");
    ensure!(res.normal_form == theta0, "normal form differs");
    ensure!(res.gauge.mul(&g) == GaugeMatrix::identity(ring, 2).in_ring(res.gauge.ring()), "H g is not the identity");
    Ok("K1 = -z1 E12, denominator (1/2,0)".into())
}

// 6
fn uniqueness() -> Outcome {
    let mut worst = 0f64;
    let mut dims = 0usize;
    for (k, inst) in instances().iter().enumerate() {
        let start = Instant::now();
        let h1 = normalize(&inst.chart, &inst.theta, T, &opts(inst, VariableOrder::Reversed)).map_err(|e| e.to_string())?.gauge;
        let h2 = normalize(&inst.chart, &inst.theta, T, &opts(inst, VariableOrder::Shuffled(k as u64 + 1))).map_err(|e| e.to_string())?.gauge;
        match verify_uniqueness(&inst.chart, &inst.theta, &h1, &h2, &inst.residues, T).map_err(|e| e.to_string())? {
            UniquenessVerdict::Ok { g } => {
                let ch = inst.chart.with_trunc(T);
                ensure!(g.delta(&ch).is_zero(), "instance {k}: delta G nonzero");
                ensure!(centralizer_check_series(&g, &inst.residues).is_none(), "instance {k}: G leaves the centralizer");
            }
            v => return Err(format!("instance {k}: {v:?}")),
        }
        for d in stabilizer_kernel(&inst.chart, &inst.residues, 4).map_err(|e| e.to_string())? {
            ensure!(d.violations.is_empty(), "instance {k}: {}", d.violations.join("; "));
            dims += d.dimension;
        }
        let secs = start.elapsed().as_secs_f64();
        ensure!(secs < 30.0, "instance {k} took {secs:.1} s");
        worst = worst.max(secs);
    }
    Ok(format!("20 instances, reversed vs shuffled agree, {dims} kernel vectors all Casimir-centralizer, slowest {worst:.2} s"))
}

// 7
fn resonance() -> Outcome {
    let ch = c2(4);
    let ring = ch.ring();
    let a = ResidueTuple::new(vec![Matrix::diag(&[Scalar::ONE, Scalar::ZERO]), Matrix::zeros(2, 2)]).unwrap();
    let mut theta = ep_principal(&ch, &a).unwrap();
    let bump = ch.log_hamiltonians()[0].mul_fn(&LaurentPoly::var(ring, 0));
    theta.set(0, 1, theta.get(0, 1).add(&bump));
    match normalize(&ch, &theta, 4, &NormalizeOptions { residues: Some(a), ..Default::default() }) {
        Err(e @ Error::Resonance { .. }) => {
            let Error::Resonance { alpha, .. } = &e else { unreachable!() };
            ensure!(*alpha == vec![Scalar::ONE, Scalar::ZERO], "alpha = {alpha:?}");
            ensure!(e.to_string().contains("non-resonance"), "message does not name the hypothesis");
            Ok("rejected with alpha = (1,0)".into())
        }
        other => Err(format!("expected a resonance, got {other:?}")),
    }
}

// 8
fn koszul() -> Outcome {
    let mut rng = rng(8);
    let mut log_only = 0;
    for k in 0..50 {
        let n = rng.gen_range(2..=4);
        let r = rng.gen_range(1..=n);
        let ch = log_canonical_chart(&mut rng, n, r, 8);
        let p = ch.poisson();
        let ring = ch.ring();
        let form = |rng: &mut ChaCha8Rng| LogForm::from_vec(ring, (0..n).map(|_| random_poly(rng, ring, 0, 2, 2)).collect());
        let (a, b) = (form(&mut rng), form(&mut rng));
        let res = p.koszul(&a, &b).map_err(|e| format!("draw {k}: {e}"))?;
        // Classes refer to coordinate-frame coefficients; only a pole the
        // log frame cannot absorb is a failure.
        ensure!(res.bracket.is_log_holomorphic(), "draw {k}: bracket has poles in the log frame");
        ensure!(res.class != HolomorphyClass::GenuinePole, "draw {k}: bracket has a genuine pole");
        ensure!(res.classes.iter().all(|(_, c)| *c != HolomorphyClass::GenuinePole), "draw {k}: a coefficient has a genuine pole");
        log_only += (res.class == HolomorphyClass::LogarithmicOnly) as usize;
        // Generators dz_i/z_i bracket to d of a constant.
        let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..n));
        let gi = LogForm::term(ring, &[i], LaurentPoly::one(ring));
        let gj = LogForm::term(ring, &[j], LaurentPoly::one(ring));
        let res = p.koszul(&gi, &gj).map_err(|e| e.to_string())?;
        ensure!(res.bracket.is_log_holomorphic(), "draw {k}: generator bracket leaves the log frame");
        if j < r {
            ensure!(res.bracket.is_zero(), "draw {k}: bracket of log generators is nonzero");
        }
    }
    Ok(format!("50 draws, all brackets log-holomorphic ({log_only} with admissible log poles)"))
}

// 9
fn poincare() -> Outcome {
    let mut rng = rng(9);
    for k in 0..100 {
        let n = rng.gen_range(2..=4);
        let r = rng.gen_range(1..=n);
        let ch = log_canonical_chart(&mut rng, n, r, 8);
        let f = random_poly(&mut rng, ch.ring(), 1, 8, 6);
        let eta = LogForm::differential(&f);
        let g = ch.log_poincare_primitive(&eta).map_err(|e| format!("draw {k}: {e}"))?;
        ensure!(LogForm::differential(&g) == eta, "draw {k}: d(primitive) differs");
    }
    for k in 0..20 {
        let n = rng.gen_range(2..=4);
        let ch = log_canonical_chart(&mut rng, n, n, 8);
        let ring = ch.ring();
        let i = rng.gen_range(0..n);
        let c = small_rational(&mut rng);
        let eta = LogForm::differential(&random_poly(&mut rng, ring, 1, 6, 4)).add(&LogForm::term(ring, &[i], LaurentPoly::constant(ring, c.clone())));
        match ch.log_poincare_primitive(&eta) {
            Err(Error::NonzeroResidue { coord, residue }) => {
                let want = LaurentPoly::constant(ring, c.clone()).fmt_with(ch.labels());
                ensure!(coord == i && residue == want, "draw {k}: witness ({coord}, {residue}) expected ({i}, {want})");
            }
            other => return Err(format!("draw {k}: residue not rejected: {other:?}")),
        }
    }
    Ok("100 primitives exact, 20 residue inputs rejected with witness".into())
}

fn max_diff(a: &ComplexMatrixF, b: &ComplexMatrixF) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// 10
fn monodromy() -> Outcome {
    let mut rng = rng(10);
    let mut worst = 0f64;
    for k in 0..20 {
        let a = rational_in(&mut rng, 2, 7);
        let y = transport_1d(&a, 100_000).map_err(|e| e.to_string())?;
        let c = meridional_character(&ResidueTuple::new(vec![Matrix::diag(std::slice::from_ref(&a))]).unwrap(), &[1]).unwrap();
        let d = (y - c[(0, 0)]).norm();
        ensure!(d < 1e-8, "draw {k}: a = {a}, |transport - character| = {d:e}");
        worst = worst.max(d);
    }
    let mut hom = 0f64;
    for _ in 0..50 {
        let r = rng.gen_range(1..=3);
        let e = rng.gen_range(1..=3);
        let a = random_residues(&mut rng, r, e);
        let m1: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..=3)).collect();
        let m2: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..=3)).collect();
        let sum: Vec<i64> = m1.iter().zip(&m2).map(|(x, y)| x + y).collect();
        let lhs = meridional_character(&a, &sum).unwrap();
        let rhs = meridional_character(&a, &m1).unwrap() * meridional_character(&a, &m2).unwrap();
        hom = hom.max(max_diff(&lhs, &rhs));
        // Leaf letters commute with nothing in particular; concatenation still multiplies.
        let mut rho = BTreeMap::new();
        rho.insert("g".to_string(), to_complex(&random_invertible(&mut rng, e)));
        let w1 = TwistedWord(vec![Letter::Leaf { generator: "g".into(), inverse: false }, Letter::Meridian(m1)]);
        let w2 = TwistedWord(vec![Letter::Meridian(m2), Letter::Leaf { generator: "g".into(), inverse: true }]);
        let lhs = twisted_rep_eval(&rho, &a, &w1.concat(&w2)).unwrap();
        let rhs = twisted_rep_eval(&rho, &a, &w1).unwrap() * twisted_rep_eval(&rho, &a, &w2).unwrap();
        let scale = lhs.iter().map(|z| z.norm()).fold(1.0, f64::max);
        hom = hom.max(max_diff(&lhs, &rhs) / scale);
    }
    ensure!(hom < 1e-10, "homomorphism defect {hom:e}");
    let half = meridional_character(&ResidueTuple::new(vec![Matrix::diag(&[Scalar::frac(1, 2)])]).unwrap(), &[1]).unwrap()[(0, 0)];
    ensure!((half.re + 1.0).abs() < 1e-12 && half.im.abs() < 1e-12, "a = 1/2 gives {half}");
    Ok(format!("transport error <= {worst:.1e}, homomorphism defect {hom:.1e}, 1/2 -> -1"))
}

/// Hamiltonian field plus log Hamiltonians: always Poisson.
fn poisson_field(rng: &mut ChaCha8Rng, ch: &LogChart) -> Polyvector {
    let mut v = ch.poisson().hamiltonian(&random_poly(rng, ch.ring(), 1, 2, 2));
    for x in ch.log_hamiltonians() {
        v = v.add(&x.scale(&small_rational(rng)));
    }
    v
}

// 11
fn rank2() -> Outcome {
    let mut rng = rng(11);
    let mut flat = 0;
    for k in 0..50 {
        let n = rng.gen_range(2..=3);
        let ch = log_canonical_chart(&mut rng, n, n, 5);
        let ring = ch.ring();
        let zero = Polyvector::zero(ring, 1);
        let t = match k % 3 {
            0 => PoissonTriple::new(zero.clone(), poisson_field(&mut rng, &ch), zero),
            1 => PoissonTriple::new(zero.clone(), zero, poisson_field(&mut rng, &ch)),
            _ => PoissonTriple::new(random_log_vector(&mut rng, ring, 2, 2), random_log_vector(&mut rng, ring, 2, 2), random_log_vector(&mut rng, ring, 2, 2)),
        }
        .map_err(|e| e.to_string())?;
        let rep = mc_check(&ch, &t).map_err(|e| e.to_string())?;
        let curv = poisson_curvature(&ch, &triple_to_theta(&t).unwrap()).is_zero();
        ensure!(rep.flat() == curv, "triple {k}: MC system and curvature disagree");
        ensure!(curvature_conventions_agree(&ch, &t).map_err(|e| e.to_string())?, "triple {k}: conventions disagree");
        flat += curv as usize;
    }
    for k in 0..10 {
        let p = random_l1111_params(&mut rng);
        let ch = l1111_structure(&p, &L1111_DEFAULT_LOG, 5, 1).map_err(|e| e.to_string())?;
        let t = l1111_triple(&ch).map_err(|e| e.to_string())?;
        ensure!(mc_check(&ch, &t).map_err(|e| e.to_string())?.flat(), "L1111 draw {k}: triple is not flat");
    }
    let mut crit_ok = 0;
    for k in 0..50 {
        let n = rng.gen_range(2..=4);
        let ch = log_canonical_chart(&mut rng, n, n, 5);
        let ring = ch.ring();
        let scaling = rng.gen_bool(0.4);
        let comps = (0..n)
            .map(|i| {
                let f = if scaling {
                    LaurentPoly::monomial(ring, MultiIndex::unit(i), small_rational(&mut rng))
                } else {
                    let terms: Vec<_> = (0..rng.gen_range(0..=2)).map(|_| (MultiIndex::unit(i).with(i, rng.gen_range(0..=2)), small_rational(&mut rng))).collect();
                    LaurentPoly::from_terms(ring, terms)
                };
                (vec![i], f)
            })
            .collect();
        let v = Polyvector::from_standard(ring, 1, comps);
        let rep = coord_criterion_check(ch.poisson(), &v).map_err(|e| e.to_string())?;
        let direct = ch.poisson().lichnerowicz(&v).map_err(|e| e.to_string())?.is_zero();
        ensure!(rep.ok() == direct, "criterion draw {k}: disagrees with the Lie derivative");
        crit_ok += direct as usize;
    }
    let mut lu_ok = 0;
    for k in 0..50 {
        let n = rng.gen_range(2..=4);
        let ch = log_canonical_chart(&mut rng, n, n, 5);
        let ring = ch.ring();
        let c = ch.log_canonical_constants().unwrap();
        let crafted = k % 2 == 0;
        let cu: Vec<Scalar> = (0..n)
            .map(|i| if crafted { if i == 0 { Scalar::ONE } else { Scalar::ZERO } } else if rng.gen_bool(0.5) { Scalar::ZERO } else { small_rational(&mut rng) })
            .collect();
        let b: Vec<Scalar> = (0..n).map(|i| if crafted && i > 0 { c.get(0, i).clone() } else { small_rational(&mut rng) }).collect();
        let u = Polyvector::from_standard(ring, 1, (0..n).map(|i| (vec![i], LaurentPoly::constant(ring, cu[i].clone()))).collect());
        let v = Polyvector::from_standard(ring, 1, (0..n).map(|i| (vec![i], LaurentPoly::monomial(ring, MultiIndex::unit(i), b[i].clone()))).collect());
        let rep = lu_uw_check(&ch, &u, &v).map_err(|e| e.to_string())?;
        let direct = ch.poisson().delta_vector(&u) == u.wedge(&v);
        ensure!(rep.ok() == direct, "lu draw {k}: disagrees with the direct identity");
        lu_ok += direct as usize;
    }
    Ok(format!("50 triples ({flat} flat), 10 L1111 triples flat, criterion {crit_ok}/50 and lu {lu_ok}/50 hold, all agree"))
}

fn jobs() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("jobs");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == "job")).collect();
    v.sort();
    v
}

// 12
fn cli_determinism() -> Outcome {
    let all = jobs();
    for p in &all {
        let name = p.file_name().unwrap().to_string_lossy();
        let text = std::fs::read_to_string(p).unwrap();
        let want: i32 = text.lines().next().and_then(|l| l.strip_prefix("# expect: ")).and_then(|e| e.trim().parse().ok()).ok_or(format!("{name}: no expect line"))?;
        let run = || Command::new(env!("CARGO_BIN_EXE_logpois")).arg(p).output().unwrap();
        let (a, b) = (run(), run());
        ensure!(a.stdout == b.stdout, "{name}: output differs between runs");
        let code = a.status.code().unwrap_or(-1);
        ensure!(code == want, "{name}: exit {code}, expected {want}");
        let out = String::from_utf8(a.stdout).map_err(|e| e.to_string())?;
        let rep = parse_report(&out).map_err(|e| format!("{name}: {e}"))?;
        ensure!(rep.to_string() == out, "{name}: parse then emit is not the identity");
        ensure!(rep.status.exit_code() == code, "{name}: report exit differs from process exit");
    }
    Ok(format!("{} jobs byte-identical across runs, exit codes as documented", all.len()))
}

fn main() {
    let criteria: [(u32, &str, f64, fn() -> Outcome); 12] = [
        (1, "L1111 Jacobi", 5.0, l1111_jacobi),
        (2, "L1111 log Hamiltonians", 5.0, l1111_hamiltonians),
        (3, "principal part flatness", 10.0, ep_flatness),
        (4, "normal form round trip", 20.0 * 60.0, round_trip),
        (5, "worked C2 instance", 1.0, worked_instance),
        (6, "uniqueness and stabilizer", 20.0 * 30.0, uniqueness),
        (7, "resonant rejection", 1.0, resonance),
        (8, "Koszul log closure", 5.0, koszul),
        (9, "log Poincare primitive", 10.0, poincare),
        (10, "monodromy", 20.0, monodromy),
        (11, "rank-2 suite", 30.0, rank2),
        (12, "CLI determinism", f64::INFINITY, cli_determinism),
    ];
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        let (verdict, detail) = match out {
            Ok(d) if secs <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {budget} s budget")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {n:>2} {verdict} [{secs:7.2} s] {name}: {detail}");
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
