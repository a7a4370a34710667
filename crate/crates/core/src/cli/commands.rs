use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};

use super::{
    is_stdin, Command, Context, CoverCmd, Failure, FracCmd, PolydiscCmd, RunMode, ZonoidCmd,
    ZonotopeCmd, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_OK,
};
use crate::covering::format::{parse_cover, verdict_line, write_cover, RecordedVerdict};
use crate::covering::{
    construct_cover, exact_value_2d, exact_value_3d, lower_bound_recurrence, search_minimal_cover,
    verify_cover, CoverError, CubeCover, SearchOptions, Side, Verdict,
};
use crate::fractional::{fractional_covering_number, lp_fractional_cover, CSV_HEADER};
use crate::polydisc::{
    direction_set_from_cover, first_unilluminated, fractional_number_polydisc,
    illumination_number_polydisc, light_source_number, parse_directions, write_directions,
    LightSourceSource,
};
use crate::torus::{format_rational, parse_rational, TorusPoint};
use crate::zonoid::{
    complex_real_identity_check, parse_centers, parse_zonoid, summand_extraction, support_function,
    Quadrature,
};
use crate::zonotope::{
    complex_illuminating_set, fractional_measure, parse_direction_vectors, parse_generators,
    real_illuminating_set, reduce_to_canonical, verify_illumination_to_depth,
    write_direction_vectors, write_generators, CanonicalZonotope, Field, Generators,
};

type Outcome = Result<i32, Failure>;

pub(crate) fn reads_stdin(cmd: &Command) -> bool {
    match cmd {
        Command::Cover(CoverCmd::Verify { file, .. }) | Command::Cover(CoverCmd::Plot { file }) => {
            is_stdin(file.as_deref())
        }
        Command::Zonotope(ZonotopeCmd::Reduce { file })
        | Command::Zonotope(ZonotopeCmd::Illuminate { file, .. }) => is_stdin(file.as_deref()),
        Command::Zonoid(ZonoidCmd::Support { file, .. }) => is_stdin(file.as_deref()),
        _ => false,
    }
}

pub(crate) fn dispatch(cmd: &Command, ctx: &mut Context) -> Outcome {
    match cmd {
        Command::Cover(c) => cover(c, ctx),
        Command::Frac(c) => frac(c, ctx),
        Command::Polydisc(c) => polydisc(c, ctx),
        Command::Zonotope(c) => zonotope(c, ctx),
        Command::Zonoid(c) => zonoid(c, ctx),
    }
}

fn rational_arg(s: &str) -> Result<BigRational, Failure> {
    parse_rational(s).map_err(Failure::usage)
}

fn cover_failure(e: CoverError) -> Failure {
    Failure::usage(e)
}

fn cover(cmd: &CoverCmd, ctx: &mut Context) -> Outcome {
    match cmd {
        CoverCmd::Construct { n, m, certify } => {
            let exact = construct_cover(*n, *m).map_err(cover_failure)?;
            let mut cover = match ctx.cfg.mode {
                RunMode::Exact => exact,
                RunMode::Float => CubeCover::new(
                    *n,
                    Side::float(1.0 / *m as f64, ctx.cfg.margin).map_err(cover_failure)?,
                    exact.bases().to_vec(),
                )
                .map_err(cover_failure)?,
            };
            if *certify {
                cover.certificate = Some(verify_cover(&cover).map_err(cover_failure)?);
            }
            ctx.emit(&write_cover(&cover))?;
            ctx.note(&format!("cubes={}", cover.len()));
            Ok(EXIT_OK)
        }
        CoverCmd::Verify { file, point } => {
            let text = ctx.read_input(file.as_deref())?;
            let parsed = parse_cover(&text).map_err(Failure::usage)?;
            let mut cover = parsed.cover;
            if let Some(p) = point {
                let pt: TorusPoint = p.parse().map_err(Failure::usage)?;
                if pt.dimension() != cover.dimension() {
                    return Err(Failure::usage("point dimension does not match the cover"));
                }
                match cover.covering_cubes(&pt) {
                    Some(c) if c.is_empty() => ctx.say(&format!("point {pt}: uncovered")),
                    Some(c) => {
                        let list: Vec<String> = c.iter().map(usize::to_string).collect();
                        ctx.say(&format!("point {pt}: covered by cubes {}", list.join(",")))
                    }
                    None => ctx.say(&format!("point {pt}: inconclusive")),
                }
            }
            let cert = match verify_cover(&cover) {
                Ok(c) => c,
                Err(CoverError::FloatModeInconclusive(msg)) => {
                    ctx.say(&format!("# verdict: inconclusive {msg}"));
                    return Ok(EXIT_INCONCLUSIVE);
                }
                Err(e) => return Err(cover_failure(e)),
            };
            ctx.say(&verdict_line(&cert));
            let code = if cert.is_covered() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            if let Some(recorded) = parsed.recorded {
                let agrees = matches!(
                    (&recorded, &cert.verdict),
                    (RecordedVerdict::Covered, Verdict::Covered)
                        | (RecordedVerdict::Uncovered(_), Verdict::Uncovered(_))
                );
                if !agrees {
                    ctx.note("warning: recorded verdict disagrees with the verifier");
                }
            }
            if ctx.cfg.out.is_some() {
                cover.certificate = Some(cert);
                ctx.emit(&write_cover(&cover))?;
            }
            Ok(code)
        }
        CoverCmd::Search { n, eps, grid } => {
            let eps = rational_arg(eps)?;
            let opts = SearchOptions {
                node_budget: ctx.cfg.budget,
            };
            match search_minimal_cover(*n, &eps, *grid, &opts) {
                Ok(out) => {
                    ctx.emit(&write_cover(&out.cover))?;
                    ctx.note(&format!(
                        "size={} lower_bound={} exact={} nodes={}",
                        out.cover.len(),
                        out.lower_bound,
                        out.is_exact,
                        out.nodes
                    ));
                    Ok(EXIT_OK)
                }
                Err(CoverError::Infeasible(q)) => {
                    ctx.say(&format!("no cover by cubes based on the 1/{q} grid"));
                    Ok(EXIT_NEGATIVE)
                }
                Err(CoverError::BudgetExceeded { budget, best }) => {
                    let best = best.map_or("none".to_string(), |b| b.to_string());
                    ctx.say(&format!(
                        "inconclusive: node budget {budget} exhausted, best size {best}"
                    ));
                    Ok(EXIT_INCONCLUSIVE)
                }
                Err(e) => Err(cover_failure(e)),
            }
        }
        CoverCmd::Table { dim, eps_list } => {
            if !matches!(dim, 2 | 3) {
                return Err(Failure::usage("table supports dimensions 2 and 3"));
            }
            let mut csv = String::from("eps,lower,exact,source\n");
            for raw in eps_list {
                let eps = rational_arg(raw)?;
                if !(eps > BigRational::from_integer(0.into())
                    && eps < BigRational::from_integer(1.into()))
                {
                    return Err(Failure::usage(format!("eps {raw} must lie in (0, 1)")));
                }
                let lower = lower_bound_recurrence(*dim, &eps);
                let (exact, source) = if *dim == 2 {
                    (exact_value_2d(&eps).to_string(), "formula")
                } else {
                    match exact_value_3d(&eps) {
                        Ok((v, _)) => (v.to_string(), "table"),
                        Err(_) => ("?".to_string(), "none"),
                    }
                };
                csv.push_str(&format!("{},{lower},{exact},{source}\n", raw.trim()));
            }
            ctx.emit(&csv)?;
            Ok(EXIT_OK)
        }
        CoverCmd::Plot { file } => {
            let text = ctx.read_input(file.as_deref())?;
            let mut cover = parse_cover(&text).map_err(Failure::usage)?.cover;
            if cover.dimension() == 2 {
                cover.certificate = verify_cover(&cover).ok();
            }
            let svg = crate::svg::emit_svg(&cover).map_err(Failure::usage)?;
            ctx.emit(&svg)?;
            Ok(EXIT_OK)
        }
    }
}

fn frac(cmd: &FracCmd, ctx: &mut Context) -> Outcome {
    match cmd {
        FracCmd::Value { n, eps } => {
            let eps = rational_arg(eps)?;
            let v = fractional_covering_number(*n, &eps).map_err(Failure::usage)?;
            ctx.say(&format!(
                "{} ({})",
                format_rational(&v),
                v.to_f64().unwrap_or(f64::NAN)
            ));
            Ok(EXIT_OK)
        }
        FracCmd::Lp { n, eps, k } => {
            let eps = rational_arg(eps)?;
            let report = lp_fractional_cover(*n, &eps, *k).map_err(Failure::usage)?;
            ctx.emit(&format!("{CSV_HEADER}\n{}\n", report.csv_row()))?;
            if !report.aligned {
                ctx.note("note: grid not aligned with eps; the LP value is only an upper bound");
            }
            Ok(EXIT_OK)
        }
    }
}

fn phase_grid(ctx: &Context, q: Option<u64>) -> Result<u64, Failure> {
    let q = q.unwrap_or(ctx.cfg.q);
    if q < 8 {
        return Err(Failure::usage("phase grid must be at least 8"));
    }
    Ok(q)
}

fn polydisc(cmd: &PolydiscCmd, ctx: &mut Context) -> Outcome {
    match cmd {
        PolydiscCmd::Ill { n } => {
            if *n == 0 {
                return Err(Failure::usage("n must be positive"));
            }
            ctx.say(&format!(
                "classical={} fractional={}",
                illumination_number_polydisc(*n),
                fractional_number_polydisc(*n)
            ));
            Ok(EXIT_OK)
        }
        PolydiscCmd::Directions { n } => {
            let cover = construct_cover(*n, 2).map_err(cover_failure)?;
            let dirs = direction_set_from_cover(&cover).map_err(Failure::usage)?;
            ctx.emit(&write_directions(&dirs, *n))?;
            ctx.note(&format!("directions={}", dirs.len()));
            Ok(EXIT_OK)
        }
        PolydiscCmd::Lightsource { n, r } => {
            let v = light_source_number(*n, *r).map_err(Failure::usage)?;
            let exact = v.exact().map_or("?".to_string(), |e| e.to_string());
            let eps = v
                .eps_exact
                .as_ref()
                .map_or(format!("{}", v.eps), format_rational);
            let source = match v.source {
                LightSourceSource::UnitFraction { m } => format!("unit-fraction(m={m})"),
                LightSourceSource::Circle => "circle".into(),
                LightSourceSource::Plane => "formula".into(),
                LightSourceSource::Table => "table".into(),
                LightSourceSource::Construction { m } => format!("construction(m={m})"),
            };
            ctx.say(&format!(
                "eps={eps} lower={} upper={} exact={exact} source={source}",
                v.lower, v.upper
            ));
            Ok(EXIT_OK)
        }
        PolydiscCmd::Check { directions, grid } => {
            let q = phase_grid(ctx, *grid)?;
            let text = ctx.read_input(Some(directions))?;
            let (n, dirs) = parse_directions(&text).map_err(Failure::usage)?;
            match first_unilluminated(&dirs, n, q) {
                None => {
                    ctx.say(&format!("illuminated: all {q}^{n} grid points"));
                    Ok(EXIT_OK)
                }
                Some(x) => {
                    ctx.say(&format!("not illuminated: {x}"));
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
    }
}

fn canonical_text<S: Field>(k: &CanonicalZonotope<S>) -> String {
    let mut out = write_generators(k.dimension(), k.generators());
    let lambda: Vec<&str> = k
        .lambda()
        .iter()
        .map(|&l| if l { "1" } else { "0" })
        .collect();
    let source: Vec<String> = k.source.iter().map(|s| (s + 1).to_string()).collect();
    out.push_str(&format!(
        "# lambda: {}\n# source: {}\n",
        lambda.join(","),
        source.join(",")
    ));
    out
}

fn illuminate_text<S: Field>(k: &CanonicalZonotope<S>, dirs: &[Vec<S>], comment: &str) -> String {
    let vectors: Vec<Vec<S>> = dirs.iter().map(|d| k.vector_of(d)).collect();
    let mut out = write_direction_vectors(k.dimension(), &vectors);
    out.push_str(&format!("# {comment}\n"));
    out
}

fn verify_text<S: Field>(
    ctx: &mut Context,
    k: &CanonicalZonotope<S>,
    dirs: &[Vec<S>],
    q: u64,
) -> Outcome {
    let coeffs = dirs
        .iter()
        .map(|w| k.coefficients_of(w))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Failure::usage("direction dimension does not match"))?;
    let report =
        verify_illumination_to_depth(k, &coeffs, q, ctx.cfg.t_depth).map_err(Failure::usage)?;
    match &report.first_failure {
        None => {
            ctx.say(&format!(
                "illuminated: {}/{} candidates",
                report.illuminated, report.candidates
            ));
            Ok(EXIT_OK)
        }
        Some(c) => {
            let point: Vec<String> = c.point.iter().map(Field::format_entry).collect();
            ctx.say(&format!(
                "not illuminated at tested steps: {}/{} candidates, first {}",
                report.illuminated,
                report.candidates,
                point.join(",")
            ));
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn zonotope(cmd: &ZonotopeCmd, ctx: &mut Context) -> Outcome {
    match cmd {
        ZonotopeCmd::Reduce { file } => {
            let text = ctx.read_input(file.as_deref())?;
            let out = match parse_generators(&text).map_err(Failure::usage)? {
                Generators::Real { vectors, .. } => {
                    canonical_text(&reduce_to_canonical(&vectors).map_err(Failure::usage)?)
                }
                Generators::Complex { vectors, .. } => {
                    canonical_text(&reduce_to_canonical(&vectors).map_err(Failure::usage)?)
                }
            };
            ctx.emit(&out)?;
            Ok(EXIT_OK)
        }
        ZonotopeCmd::Illuminate { file, fractional } => {
            let text = ctx.read_input(file.as_deref())?;
            let out = match parse_generators(&text).map_err(Failure::usage)? {
                Generators::Real { vectors, .. } => {
                    if *fractional {
                        return Err(Failure::usage(
                            "the half-circle measure needs a complex zonotope",
                        ));
                    }
                    let k = reduce_to_canonical(&vectors).map_err(Failure::usage)?;
                    let dirs = real_illuminating_set(&k).map_err(Failure::usage)?;
                    ctx.note(&format!("directions={}", dirs.len()));
                    illuminate_text(&k, &dirs, "illuminates the canonical form")
                }
                Generators::Complex { vectors, .. } => {
                    let k = reduce_to_canonical(&vectors).map_err(Failure::usage)?;
                    if *fractional {
                        let m = fractional_measure(&k).map_err(Failure::usage)?;
                        let arcs: Vec<Vec<Complex64>> = m
                            .arcs
                            .iter()
                            .map(|y| {
                                y.iter()
                                    .map(|v| Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0))
                                    .collect()
                            })
                            .collect();
                        ctx.note(&format!("total_mass={}", m.total_mass()));
                        illuminate_text(&k, &arcs, "unit mass on each arc e^{it} y, 0 < t < pi")
                    } else {
                        let dirs = complex_illuminating_set(&k).map_err(Failure::usage)?;
                        ctx.note(&format!("directions={}", dirs.len()));
                        illuminate_text(&k, &dirs, "illuminates the canonical form")
                    }
                }
            };
            ctx.emit(&out)?;
            Ok(EXIT_OK)
        }
        ZonotopeCmd::Verify { file, dirs, q } => {
            let text = ctx.read_input(Some(file))?;
            let dir_text = ctx.read_input(Some(dirs))?;
            let gens = parse_generators(&text).map_err(Failure::usage)?;
            let dirs = parse_direction_vectors(&dir_text).map_err(Failure::usage)?;
            match (gens, dirs) {
                (Generators::Real { vectors, .. }, Generators::Real { vectors: d, .. }) => {
                    let k = reduce_to_canonical(&vectors).map_err(Failure::usage)?;
                    verify_text(ctx, &k, &d, 2)
                }
                (Generators::Complex { vectors, .. }, Generators::Complex { vectors: d, .. }) => {
                    let q = phase_grid(ctx, *q)?;
                    let k = reduce_to_canonical(&vectors).map_err(Failure::usage)?;
                    verify_text(ctx, &k, &d, q)
                }
                _ => Err(Failure::usage(
                    "generator and direction files use different fields",
                )),
            }
        }
    }
}

fn parse_vector(s: &str) -> Result<Vec<Complex64>, Failure> {
    s.split(',')
        .map(|e| crate::zonotope::parse_complex(e.trim()))
        .collect::<Result<_, _>>()
        .map_err(Failure::usage)
}

fn zonoid(cmd: &ZonoidCmd, ctx: &mut Context) -> Outcome {
    match cmd {
        ZonoidCmd::Support { file, theta } => {
            let text = ctx.read_input(file.as_deref())?;
            let z = parse_zonoid(&text).map_err(Failure::usage)?;
            let theta = parse_vector(theta)?;
            if theta.len() != z.dimension() {
                return Err(Failure::usage("theta has the wrong dimension"));
            }
            ctx.say(&format!("{}", support_function(&z, &theta)));
            Ok(EXIT_OK)
        }
        ZonoidCmd::IdentityCheck { trials, n, q, seed } => {
            let mut rng = rand::rngs::StdRng::seed_from_u64(*seed);
            let mut worst = 0.0f64;
            for _ in 0..*trials {
                let mut v = || -> Vec<Complex64> {
                    (0..*n)
                        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                };
                let (x, y) = (v(), v());
                worst = worst
                    .max(complex_real_identity_check(&x, &y, *q, Quadrature::SplitSimpson).error);
            }
            ctx.say(&format!("trials={trials} q={q} max_error={worst:e}"));
            Ok(if worst < 1e-6 { EXIT_OK } else { EXIT_NEGATIVE })
        }
        ZonoidCmd::Extract {
            file,
            clusters,
            delta,
            samples,
        } => {
            let z = parse_zonoid(&ctx.read_input(Some(file))?).map_err(Failure::usage)?;
            let centers =
                parse_centers(&ctx.read_input(Some(clusters))?).map_err(Failure::usage)?;
            let x = summand_extraction(&z, &centers, *delta, *samples).map_err(Failure::usage)?;
            let diam: Vec<String> = x.diameters.iter().map(|d| format!("{d:e}")).collect();
            ctx.say(&format!(
                "m={} diameters={} hausdorff_estimate={:e} samples={} summand={} within_delta={}",
                x.m,
                diam.join(","),
                x.hausdorff_estimate,
                x.samples,
                x.summand_ok,
                x.within_delta()
            ));
            Ok(if x.within_delta() && x.summand_ok {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
    }
}
