use logpois::chart::H3Verdict;
use logpois::connection::ResidueTuple;
use logpois::monodromy::{fmt_complex, fmt_matrix, meridional_character, transport_1d, transport_1d_path};
use logpois::poisson::JacobiVerdict;
use logpois::rank2::{l1111_structure, l1111_triple, mc_check, xi_closed_check, L1111Params, XiVerdict, L1111_DEFAULT_LOG};
use logpois::text::{parse_int_list, parse_matrix, parse_scalar_list};
use logpois::{Matrix, Scalar};

fn bracketed(s: &str) -> String {
    let t = s.trim();
    if t.starts_with('(') || t.starts_with('[') {
        t.to_string()
    } else {
        format!("({t})")
    }
}

/// Residues are matrices separated by `;` or newlines; the meridian is a
/// comma-separated integer list.
pub fn character(residues: &str, meridian: &str) -> Result<String, String> {
    let mats = residues
        .split([';', '\n'])
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_matrix(s).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if mats.is_empty() {
        return Err("no residue matrices given".into());
    }
    let a = ResidueTuple::new(mats).map_err(|e| e.to_string())?;
    let m = parse_int_list(&bracketed(meridian)).map_err(|e| e.to_string())?;
    let c = meridional_character(&a, &m).map_err(|e| e.to_string())?;
    Ok(fmt_matrix(&c))
}

pub fn transport(a: &str, steps: usize, samples: usize) -> Result<Vec<f64>, String> {
    let a: Scalar = a.trim().parse().map_err(|e: logpois::ParseError| e.to_string())?;
    let path = transport_1d_path(&a, steps, samples).map_err(|e| e.to_string())?;
    Ok(path.iter().flat_map(|z| [z.re, z.im]).collect())
}

/// Formatted endpoint of the integration next to the exact character value.
pub fn transport_endpoint(a: &str, steps: usize) -> Result<(String, String), String> {
    let a: Scalar = a.trim().parse().map_err(|e: logpois::ParseError| e.to_string())?;
    let y = transport_1d(&a, steps).map_err(|e| e.to_string())?;
    let c = meridional_character(&ResidueTuple::new(vec![Matrix::diag(&[a])]).map_err(|e| e.to_string())?, &[1]).map_err(|e| e.to_string())?;
    Ok((fmt_complex(y), fmt_complex(c[(0, 0)])))
}

pub fn l1111(weights: &str) -> Result<String, String> {
    let a = parse_scalar_list(&bracketed(weights)).map_err(|e| e.to_string())?;
    let a: [Scalar; 4] = a.try_into().map_err(|v: Vec<Scalar>| format!("expected 4 weights, got {}", v.len()))?;
    let p = L1111Params::new(a).map_err(|e| e.to_string())?;
    let ch = l1111_structure(&p, &L1111_DEFAULT_LOG, 4, 1).map_err(|e| e.to_string())?;
    let l = ch.labels();
    let mut out = vec![format!("sigma = {}", ch.poisson().sigma().fmt_with(l))];
    out.push(match ch.poisson().check_jacobi() {
        JacobiVerdict::Poisson => "jacobi: holds".into(),
        JacobiVerdict::Violation { i, j, k, .. } => format!("jacobi: fails at ({i},{j},{k})"),
    });
    for (i, x) in ch.log_hamiltonians().iter().enumerate() {
        out.push(format!("X{} = {}", i + 1, x.fmt_with(l)));
    }
    out.push(format!("log-tangency: {}", if ch.check_h3() == H3Verdict::Ok { "holds" } else { "fails" }));
    let xi = xi_closed_check(&ch).map_err(|e| e.to_string())?;
    out.push(format!("closed form: {}", if xi == XiVerdict::Ok { "agrees" } else { "disagrees" }));
    let t = l1111_triple(&ch).map_err(|e| e.to_string())?;
    let flat = mc_check(&ch, &t).map_err(|e| e.to_string())?.flat();
    out.push(format!("triple (d0, -v/2, 0): {}", if flat { "flat" } else { "not flat" }));
    Ok(out.join("\n"))
}
