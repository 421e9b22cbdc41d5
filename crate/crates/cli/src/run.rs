//! Command dispatch.

use logpois::chart::{H3Verdict, LogChart};
use logpois::connection::{
    extract_principal, gauge_transform, poisson_curvature, poisson_curvature_column, ConnMatrix, GaugeMatrix,
    ResidueTuple,
};
use logpois::error::{Error, Result};
use logpois::monodromy::{fmt_complex, fmt_matrix, meridional_character, to_complex, transport_1d, twisted_rep_eval};
use logpois::poisson::{JacobiVerdict, LogForm};
use logpois::ppd::{normalize, verify_uniqueness, NormalizationResult, NormalizeOptions, UniquenessVerdict, VariableOrder};
use logpois::rank2::{
    coord_criterion_check, l1111_triple, lu_uw_check, mc_check, xi_closed_check, xi_closed_formula, LuCondition,
    McEquation, XiVerdict,
};
use logpois::series::fmt_monomial;
use logpois::spectral::{check_nonresonance, joint_spectrum, NonresVerdict, SpectralData};
use logpois::{Polyvector, Scalar};

use crate::jobspec::{fmt_word, mode_name, order_name, Command, GaugeSource, Job, JobSpec};
use crate::report::{Report, EXIT_INPUT, EXIT_MATH};

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn fmt_scalars(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Records an engine error; input errors exit 3, everything else 2.
pub fn error_report(command: &str, err: &Error) -> Report {
    let mut rep = Report::new(command);
    rep.fail(err.code(), if err.is_input_error() { EXIT_INPUT } else { EXIT_MATH });
    rep.section("message", [err.to_string()]);
    rep
}

pub fn run(job: &JobSpec) -> Report {
    let mut rep = Report::new(job.command.name());
    match dispatch(job, &mut rep) {
        Ok(()) => rep,
        Err(e) => {
            let mut err = error_report(job.command.name(), &e);
            // Keep whatever was computed before the failure.
            let mut sections = rep.sections;
            sections.extend(err.sections);
            err.sections = sections;
            err
        }
    }
}

fn residues_of(job: &JobSpec) -> Result<ResidueTuple> {
    let c = job.connection.as_ref().expect("checked at parse time");
    match &c.residues {
        Some(a) => Ok(a.clone()),
        None => Ok(extract_principal(&job.chart, &c.theta)?.0),
    }
}

fn theta_of(job: &JobSpec) -> &ConnMatrix {
    &job.connection.as_ref().expect("checked at parse time").theta
}

fn residue_lines(a: &ResidueTuple) -> Vec<String> {
    a.mats().iter().enumerate().map(|(i, m)| format!("A{} = {m}", i + 1)).collect()
}

fn spectrum_lines(s: &SpectralData) -> Vec<String> {
    let mut out = Vec::new();
    for (k, b) in s.blocks.iter().enumerate() {
        out.push(format!("block {k}: lambda = {}, dim = {}, nilpotency <= {}", fmt_scalars(&b.lambda), b.basis.len(), b.nilpotency_bound));
        for v in &b.basis {
            out.push(format!("  basis {}", fmt_scalars(v)));
        }
    }
    out
}

fn pv_lines(label: &str, xs: &[Polyvector], chart: &LogChart) -> Vec<String> {
    xs.iter().enumerate().map(|(i, x)| format!("{label}{} = {}", i + 1, x.fmt_with(chart.labels()))).collect()
}

fn gauge_line(g: &GaugeMatrix, chart: &LogChart) -> String {
    g.fmt_with(chart.labels())
}

fn certificate_lines(res: &NormalizationResult, chart: &LogChart) -> Vec<String> {
    let n = chart.n();
    let mut out = vec![format!("truncation {}", res.truncation)];
    for d in &res.certificate {
        out.push(format!("degree {}: defect support {}, linearized flatness {}", d.degree, d.support, yes(d.linearized_mc)));
        out.push(format!("  K = {}", gauge_line(&d.correction, chart)));
        for den in &d.denominators {
            let mono = fmt_monomial(&den.monomial, chart.labels(), n);
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            out.push(format!(
                "  blocks ({},{}) at {mono}: weight {}",
                den.kappa,
                den.kappa_prime,
                fmt_scalars(&den.weight)
            ));
        }
    }
    out
}

fn dispatch(job: &JobSpec, rep: &mut Report) -> Result<()> {
    let chart = &job.chart;
    let labels = chart.labels();
    let p = chart.poisson();
    match job.command {
        Command::CheckJacobi => {
            rep.section("sigma", [p.sigma().fmt_with(labels)]);
            match p.check_jacobi() {
                JacobiVerdict::Poisson => rep.section("verdict", ["jacobi: holds"]),
                JacobiVerdict::Violation { i, j, k, witness } => {
                    rep.section(
                        "verdict",
                        [format!("jacobi: fails at ({},{},{})", labels[i], labels[j], labels[k]), format!("witness = {}", witness.fmt_with(labels))],
                    );
                    rep.fail("jacobi", EXIT_MATH);
                }
            }
        }
        Command::CheckH3 => match chart.check_h3() {
            H3Verdict::Ok => rep.section("verdict", ["log-tangency: holds"]),
            H3Verdict::Failure { coord, witness } => {
                rep.section(
                    "verdict",
                    [format!("log-tangency: fails for {}", labels[coord]), format!("X = {}", witness.fmt_with(labels))],
                );
                rep.fail("h3-failure", EXIT_MATH);
            }
        },
        Command::LogHamiltonians => {
            let mut lines = Vec::new();
            for i in chart.log_coords() {
                let h = chart.log_hamiltonian(i)?;
                lines.push(format!("X[{}] = {}", labels[i], h.field.fmt_with(labels)));
                lines.push(format!("  class {:?}, tangent {}", h.class, yes(h.tangent)));
            }
            rep.section("hamiltonians", lines);
        }
        Command::Koszul => {
            let Job::Koszul { alpha, beta } = &job.job else { unreachable!() };
            let k = p.koszul(alpha, beta)?;
            rep.section("bracket", [k.bracket.fmt_with(labels)]);
            rep.section("class", [format!("{:?}", k.class), format!("log frame holomorphic {}", yes(k.bracket.is_log_holomorphic()))]);
        }
        Command::Curvature => {
            let theta = theta_of(job);
            let row = poisson_curvature(chart, theta);
            let col = poisson_curvature_column(chart, theta);
            rep.section("theta", [theta.fmt_with(labels)]);
            rep.section("curvature", [format!("row = {}", row.fmt_with(labels)), format!("column = {}", col.fmt_with(labels))]);
            rep.section("verdict", [format!("flat: {}", yes(row.is_zero()))]);
        }
        Command::Gauge => {
            let Job::Gauge { g } = &job.job else { unreachable!() };
            let out = gauge_transform(chart, theta_of(job), g)?;
            rep.section("gauge", [gauge_line(g, chart)]);
            rep.section("theta", [out.fmt_with(labels)]);
        }
        Command::ExtractPrincipal => {
            let (a, v) = extract_principal(chart, theta_of(job))?;
            rep.section("residues", residue_lines(&a));
            rep.section("remainder", [v.fmt_with(labels)]);
        }
        Command::Spectrum => {
            let a = residues_of(job)?;
            rep.section("residues", residue_lines(&a));
            rep.section("spectrum", spectrum_lines(&joint_spectrum(&a)?));
        }
        Command::Nonresonance => {
            let a = residues_of(job)?;
            let s = joint_spectrum(&a)?;
            rep.section("spectrum", spectrum_lines(&s));
            match check_nonresonance(&s, job.mode) {
                NonresVerdict::Nonresonant => {
                    rep.section("verdict", [format!("non-resonance ({}): holds", mode_name(job.mode))]);
                }
                NonresVerdict::Resonant { kappa, kappa_prime, alpha } => {
                    rep.section(
                        "verdict",
                        [format!(
                            "non-resonance ({}): fails, blocks ({kappa},{kappa_prime}) differ by alpha = {}",
                            mode_name(job.mode),
                            fmt_scalars(&alpha)
                        )],
                    );
                    rep.fail("resonance", EXIT_MATH);
                }
            }
        }
        Command::Normalize => {
            let Job::Normalize { order } = &job.job else { unreachable!() };
            let res = run_normalize(job, *order)?;
            rep.section("options", [format!("trunc {}", chart.ring().trunc()), format!("order {}", order_name(*order)), format!("mode {}", mode_name(job.mode))]);
            rep.section("residues", residue_lines(&res.residues));
            rep.section("spectrum", spectrum_lines(&res.spectral));
            rep.section("normal-form", [res.normal_form.fmt_with(labels)]);
            rep.section("gauge", [gauge_line(&res.gauge, chart)]);
            rep.section("certificate", certificate_lines(&res, chart));
        }
        Command::VerifyUniqueness => {
            let Job::VerifyUniqueness { h1, h2 } = &job.job else { unreachable!() };
            let g1 = resolve_gauge(job, h1)?;
            let g2 = resolve_gauge(job, h2)?;
            let a = residues_of(job)?;
            let t = chart.ring().trunc();
            rep.section("gauges", [format!("H1 = {}", gauge_line(&g1, chart)), format!("H2 = {}", gauge_line(&g2, chart))]);
            match verify_uniqueness(chart, theta_of(job), &g1, &g2, &a, t)? {
                UniquenessVerdict::Ok { g } => {
                    rep.section("stabilizer", [format!("G = {}", gauge_line(&g, chart))]);
                    rep.section("verdict", ["uniqueness: holds"]);
                }
                UniquenessVerdict::NotCasimir { row, col, witness } => {
                    rep.section("verdict", [format!("uniqueness: entry ({row},{col}) is not a Casimir"), format!("delta = {witness}")]);
                    rep.fail("not-casimir", EXIT_MATH);
                }
                UniquenessVerdict::NotCentralizer { index } => {
                    rep.section("verdict", [format!("uniqueness: G does not commute with A{}", index + 1)]);
                    rep.fail("not-centralizer", EXIT_MATH);
                }
            }
        }
        Command::Character => {
            let Job::Character { m } = &job.job else { unreachable!() };
            let a = residues_of(job)?;
            let c = meridional_character(&a, m)?;
            let mv: Vec<String> = m.iter().map(|x| x.to_string()).collect();
            rep.section("meridian", [format!("m = ({})", mv.join(","))]);
            rep.section("character", [fmt_matrix(&c)]);
        }
        Command::TwistedEval => {
            let Job::TwistedEval { rho, word } = &job.job else { unreachable!() };
            let a = residues_of(job)?;
            let cm = rho.iter().map(|(k, m)| (k.clone(), to_complex(m))).collect();
            let v = twisted_rep_eval(&cm, &a, word)?;
            rep.section("word", [fmt_word(word)]);
            rep.section("value", [fmt_matrix(&v)]);
        }
        Command::Transport1d => {
            let Job::Transport { a } = &job.job else { unreachable!() };
            let y = transport_1d(a, job.steps)?;
            let tuple = ResidueTuple::new(vec![logpois::Matrix::diag(std::slice::from_ref(a))])?;
            let c = meridional_character(&tuple, &[1])?[(0, 0)];
            rep.section("input", [format!("a = {a}"), format!("steps = {}", job.steps)]);
            rep.section("transport", [fmt_complex(y)]);
            rep.section("character", [fmt_complex(c)]);
            let diff = (y - c).norm();
            rep.section("agreement", [format!("within 1e-8: {}", yes(diff < 1e-8))]);
        }
        Command::Rank2Mc => {
            let Job::Rank2Mc { triple } = &job.job else { unreachable!() };
            rep.section(
                "triple",
                [
                    format!("u = {}", triple.u.fmt_with(labels)),
                    format!("v = {}", triple.v.fmt_with(labels)),
                    format!("w = {}", triple.w.fmt_with(labels)),
                ],
            );
            let r = mc_check(chart, triple)?;
            let mut lines: Vec<String> = r
                .violations
                .iter()
                .map(|(eq, d)| {
                    let name = match eq {
                        McEquation::U => "delta(u) + 2 u^v",
                        McEquation::V => "delta(v) - u^w",
                        McEquation::W => "delta(w) + 2 v^w",
                    };
                    format!("{name} = {}", d.fmt_with(labels))
                })
                .collect();
            lines.push(format!("curvature zero: {}", yes(r.curvature_zero)));
            lines.push(format!("flat: {}", yes(r.flat())));
            rep.section("verdict", lines);
            if !r.flat() {
                rep.fail("not-flat", EXIT_MATH);
            }
        }
        Command::Rank2Criterion => {
            let Job::Rank2Criterion { v } = &job.job else { unreachable!() };
            let r = coord_criterion_check(p, v)?;
            let mut lines: Vec<String> = r
                .fails
                .iter()
                .map(|(i, j, l, rr)| format!("({},{}): {} != {}", labels[*i], labels[*j], l.fmt_with(labels), rr.fmt_with(labels)))
                .collect();
            lines.push(format!("criterion: {}", if r.ok() { "holds" } else { "fails" }));
            lines.push(format!("lie derivative zero: {}", yes(r.lie_derivative_zero)));
            rep.section("verdict", lines);
            if !r.ok() {
                rep.fail("criterion", EXIT_MATH);
            }
        }
        Command::Rank2Luuw => {
            let Job::Rank2Luuw { u, v } = &job.job else { unreachable!() };
            let r = lu_uw_check(chart, u, v)?;
            let mut lines: Vec<String> = r
                .fails
                .iter()
                .map(|(i, j, c)| {
                    let which = match c {
                        LuCondition::First => "c_i (c_ij - b_j) != 0",
                        LuCondition::Second => "c_j (c_ij + b_i) != 0",
                    };
                    format!("({},{}): {which}", labels[*i], labels[*j])
                })
                .collect();
            lines.push(format!("conditions: {}", if r.ok() { "hold" } else { "fail" }));
            lines.push(format!("direct identity: {}", yes(r.direct)));
            rep.section("verdict", lines);
            if !r.ok() {
                rep.fail("lu-condition", EXIT_MATH);
            }
        }
        Command::L1111Build => {
            let params = job.l1111.as_ref().expect("checked at parse time");
            let c = chart.log_canonical_constants().expect("log-canonical");
            rep.section("weights", [fmt_scalars(params.a())]);
            rep.section("constants", [c.to_string()]);
            rep.section("sigma", [p.sigma().fmt_with(labels)]);
            let xs: Vec<Polyvector> = chart.log_coords().into_iter().map(|i| xi_closed_formula(chart.ring(), &c, i)).collect();
            rep.section("hamiltonians", pv_lines("X", &xs, chart));
            let t = l1111_triple(chart)?;
            rep.section("triple", [format!("u = {}", t.u.fmt_with(labels)), format!("v = {}", t.v.fmt_with(labels)), format!("w = {}", t.w.fmt_with(labels))]);
            let jac = p.check_jacobi() == JacobiVerdict::Poisson;
            let flat = mc_check(chart, &t)?.flat();
            rep.section("checks", [format!("jacobi: {}", yes(jac)), format!("triple flat: {}", yes(flat))]);
            if !jac || !flat {
                rep.fail(if jac { "not-flat" } else { "jacobi" }, EXIT_MATH);
            }
        }
        Command::XiCheck => match xi_closed_check(chart)? {
            XiVerdict::Ok => {
                let poisson = chart.log_hamiltonians().iter().all(|x| p.delta_vector(x).is_zero());
                rep.section("hamiltonians", pv_lines("X", &chart.log_hamiltonians(), chart));
                rep.section("verdict", ["closed form: agrees".to_string(), format!("delta(X) = 0: {}", yes(poisson))]);
                if !poisson {
                    rep.fail("not-poisson", EXIT_MATH);
                }
            }
            XiVerdict::Mismatch { coord, closed, anchor } => {
                rep.section(
                    "verdict",
                    [
                        format!("closed form: differs at {}", labels[coord]),
                        format!("closed = {}", closed.fmt_with(labels)),
                        format!("anchor = {}", anchor.fmt_with(labels)),
                    ],
                );
                rep.fail("xi-mismatch", EXIT_MATH);
            }
        },
        Command::PoincarePrimitive => {
            let Job::PoincarePrimitive { eta } = &job.job else { unreachable!() };
            let f = chart.log_poincare_primitive(eta)?;
            rep.section("primitive", [f.fmt_with(labels)]);
            rep.section("check", [format!("df = eta: {}", yes(LogForm::differential(&f) == *eta))]);
        }
        Command::RankAt => {
            let Job::RankAt { point } = &job.job else { unreachable!() };
            let r = p.rank_at(point)?;
            rep.section("rank", [format!("rank at {} = {r}", fmt_scalars(point))]);
        }
    }
    Ok(())
}

fn run_normalize(job: &JobSpec, order: VariableOrder) -> Result<NormalizationResult> {
    let c = job.connection.as_ref().expect("checked at parse time");
    let opts = NormalizeOptions { residues: c.residues.clone(), order, mode: job.mode };
    normalize(&job.chart, &c.theta, job.chart.ring().trunc(), &opts)
}

fn resolve_gauge(job: &JobSpec, src: &GaugeSource) -> Result<GaugeMatrix> {
    match src {
        GaugeSource::Solver(o) => Ok(run_normalize(job, *o)?.gauge),
        GaugeSource::Constructing => {
            let c = job.connection.as_ref().expect("checked at parse time");
            c.constructing
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("no constructing gauge in [connection]".into()))?
                .inverse()
        }
        GaugeSource::Explicit(g) => Ok(g.clone()),
    }
}
