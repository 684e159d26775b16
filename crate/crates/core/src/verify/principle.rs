use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::solver::{solve, Boundaries, BoundaryCondition, ProblemSpec, SolutionField};

use super::instance::{generate_comparison_pair, generate_instance_with_notes, InstanceConfig};
use super::{Classification, VerificationReport};

fn check_shapes(problem: &ProblemSpec, solution: &SolutionField) -> Result<()> {
    if solution.grid() != &problem.grid || solution.mesh() != &problem.mesh {
        return Err(Error::Usage(
            "solution was not computed on the problem's grid and mesh".into(),
        ));
    }
    Ok(())
}

fn sign_error(what: &str, value: f64, at: f64) -> Error {
    domain(alloc::format!("sign hypothesis: {what} = {value} > 0 at {at}"))
}

/// Asserts the hypotheses of the maximum principle: `u0 ≤ 0`, `f ≤ 0` and
/// nonpositive boundary data (Robin: data of `ν a u_x + g u`) on all samples.
fn check_nonpositive_data(p: &ProblemSpec) -> Result<()> {
    let x = p.grid.nodes();
    for &xi in x {
        let u = (p.u0)(xi);
        if u > 0.0 {
            return Err(sign_error("u0", u, xi));
        }
    }
    for &t in p.mesh.nodes() {
        for &xi in x {
            let f = (p.coefficients.f)(xi, t);
            if f > 0.0 {
                return Err(sign_error("f", f, t));
            }
        }
        if let Boundaries::Separated { left, right } = &p.boundaries {
            for bc in [left, right] {
                let v = match bc {
                    BoundaryCondition::Dirichlet { value } => value(t),
                    BoundaryCondition::Robin { data, .. } => data(t),
                };
                if v > 0.0 {
                    return Err(sign_error("boundary data", v, t));
                }
            }
        }
    }
    Ok(())
}

/// `max u` over all grid × mesh points; passes when it is `≤ tol`.
///
/// Errors if the problem's data are not nonpositive or the solution does not
/// belong to the problem.
pub fn verify_max_principle(problem: &ProblemSpec, solution: &SolutionField, tol: f64) -> Result<VerificationReport> {
    check_shapes(problem, solution)?;
    check_nonpositive_data(problem)?;
    let (worst, witness) = solution.max_with_witness();
    Ok(VerificationReport::new(worst, witness, tol))
}

fn same_bits(p: f64, q: f64) -> bool {
    p.to_bits() == q.to_bits()
}

/// Coefficients, operator, grid and boundary weights must coincide (sampled,
/// bit for bit); data must be ordered `¹ ≤ ²`.
fn check_comparable(p1: &ProblemSpec, p2: &ProblemSpec) -> Result<()> {
    let usage = |m: &str| Err(Error::Usage(alloc::format!("comparison: {m}")));
    if p1.grid != p2.grid || p1.mesh != p2.mesh {
        return usage("problems live on different grids");
    }
    let times = p1.mesh.nodes();
    for n in 1..times.len() {
        if p1.operator.step_weights(times, n)? != p2.operator.step_weights(times, n)? {
            return usage("time operators differ");
        }
    }
    let (c1, c2) = (&p1.coefficients, &p2.coefficients);
    if !same_bits(c1.lambda_bound, c2.lambda_bound) {
        return usage("lambda bounds differ");
    }
    let x = p1.grid.nodes();
    let mids: Vec<f64> = (0..p1.grid.intervals()).map(|i| p1.grid.midpoint(i)).collect();
    for &t in times {
        for &xi in x.iter().chain(&mids) {
            let pairs = [(&c1.a, &c2.a), (&c1.b, &c2.b), (&c1.c, &c2.c)];
            if pairs.iter().any(|(f, g)| !same_bits(f(xi, t), g(xi, t))) {
                return usage("coefficients differ");
            }
        }
        for &xi in x {
            if (c1.f)(xi, t) > (c2.f)(xi, t) {
                return Err(domain(alloc::format!("comparison: f1 > f2 at ({xi}, {t})")));
            }
        }
        match (&p1.boundaries, &p2.boundaries) {
            (Boundaries::Periodic, Boundaries::Periodic) => {}
            (Boundaries::Separated { left: l1, right: r1 }, Boundaries::Separated { left: l2, right: r2 }) => {
                for (b1, b2) in [(l1, l2), (r1, r2)] {
                    let (d1, d2) = match (b1, b2) {
                        (BoundaryCondition::Dirichlet { value: v1 }, BoundaryCondition::Dirichlet { value: v2 }) => {
                            (v1(t), v2(t))
                        }
                        (
                            BoundaryCondition::Robin { weight: g1, data: d1 },
                            BoundaryCondition::Robin { weight: g2, data: d2 },
                        ) => {
                            if !same_bits(g1(t), g2(t)) {
                                return usage("Robin weights differ");
                            }
                            (d1(t), d2(t))
                        }
                        _ => return usage("boundary kinds differ"),
                    };
                    if d1 > d2 {
                        return Err(domain(alloc::format!("comparison: boundary data1 > data2 at t = {t}")));
                    }
                }
            }
            _ => return usage("boundary kinds differ"),
        }
    }
    for &xi in x {
        if (p1.u0)(xi) > (p2.u0)(xi) {
            return Err(domain(alloc::format!("comparison: u0_1 > u0_2 at {xi}")));
        }
    }
    Ok(())
}

/// `max(s1 − s2)` over all grid × mesh points; passes when it is `≤ tol`.
pub fn verify_comparison(
    p1: &ProblemSpec,
    p2: &ProblemSpec,
    s1: &SolutionField,
    s2: &SolutionField,
    tol: f64,
) -> Result<VerificationReport> {
    check_shapes(p1, s1)?;
    check_shapes(p2, s2)?;
    check_comparable(p1, p2)?;
    let (worst, witness) = s1.difference(s2)?.max_with_witness();
    Ok(VerificationReport::new(worst, witness, tol))
}

fn scheme_refusal(err: &Error, tol: f64) -> Option<VerificationReport> {
    match err {
        Error::StepRestriction { .. } => {
            let mut r = VerificationReport::new(f64::INFINITY, (0, 0), tol).with_note(alloc::format!("{err}"));
            r.classification = Classification::SchemeLimitation;
            Some(r)
        }
        _ => None,
    }
}

fn finish(mut report: VerificationReport, seed: u64, notes: Vec<alloc::string::String>) -> VerificationReport {
    report.instance_seed = seed;
    report.notes.extend(notes);
    report
}

/// Generates, solves and checks one instance. A solve refused by the step
/// restriction becomes a failed [`Classification::SchemeLimitation`] report.
pub fn max_principle_case(config: &InstanceConfig, tol: f64) -> Result<VerificationReport> {
    let (problem, notes) = generate_instance_with_notes(config)?;
    let report = match solve(&problem) {
        Ok(s) => verify_max_principle(&problem, &s, tol)?,
        Err(e) => scheme_refusal(&e, tol).ok_or(e)?,
    };
    Ok(finish(report, config.seed, notes))
}

/// Comparison check on [`generate_comparison_pair`].
pub fn comparison_case(config: &InstanceConfig, tol: f64) -> Result<VerificationReport> {
    let (p1, p2) = generate_comparison_pair(config)?;
    let solved = solve(&p1).and_then(|s1| Ok((s1, solve(&p2)?)));
    let report = match solved {
        Ok((s1, s2)) => verify_comparison(&p1, &p2, &s1, &s2, tol)?,
        Err(e) => scheme_refusal(&e, tol).ok_or(e)?,
    };
    Ok(finish(report, config.seed, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{BcKind, OperatorKind};

    fn cfg(seed: u64, lambda: f64, bc: BcKind) -> InstanceConfig {
        let mut c = InstanceConfig::new(seed, lambda, OperatorKind::Single { alpha: 0.5 }, bc);
        c.intervals = 16;
        c.steps = 16;
        c
    }

    #[test]
    fn zero_data_passes_with_nonpositive_worst() {
        let p = crate::verify::generate_instance(&cfg(2, 1.0, BcKind::Dirichlet)).unwrap();
        let zero = p
            .with_source(crate::solver::field_fn(|_, _| 0.0))
            .with_initial(crate::solver::space_fn(|_| 0.0))
            .with_boundaries(Boundaries::homogeneous_dirichlet());
        let s = solve(&zero).unwrap();
        let r = verify_max_principle(&zero, &s, 0.0).unwrap();
        assert!(r.passed && r.worst_violation <= 0.0);
    }

    #[test]
    fn positive_data_is_a_hypothesis_error() {
        let p = crate::verify::generate_instance(&cfg(2, 0.0, BcKind::Dirichlet)).unwrap();
        let bad = p.with_initial(crate::solver::space_fn(|_| 1.0));
        let s = solve(&bad).unwrap();
        assert!(matches!(verify_max_principle(&bad, &s, 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn cases_pass_for_each_boundary_kind() {
        for bc in [BcKind::Dirichlet, BcKind::Robin, BcKind::Periodic] {
            for seed in 0..5 {
                let r = max_principle_case(&cfg(seed, 4.0, bc), 1e-8).unwrap();
                assert!(r.passed, "{bc:?} {seed}: {r:?}");
                let r = comparison_case(&cfg(seed, 1.0, bc), 1e-8).unwrap();
                assert!(r.passed, "{bc:?} {seed}: {r:?}");
            }
        }
    }

    #[test]
    fn identical_problems_compare_equal() {
        let p = crate::verify::generate_instance(&cfg(4, 1.0, BcKind::Robin)).unwrap();
        let s = solve(&p).unwrap();
        let r = verify_comparison(&p, &p, &s, &s, 0.0).unwrap();
        assert_eq!(r.worst_violation, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn swapped_order_is_rejected() {
        let (p1, p2) = generate_comparison_pair(&cfg(4, 1.0, BcKind::Dirichlet)).unwrap();
        let (s1, s2) = (solve(&p1).unwrap(), solve(&p2).unwrap());
        assert!(verify_comparison(&p2, &p1, &s2, &s1, 1e-8).is_err());
    }
}
