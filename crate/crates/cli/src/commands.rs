//! One function per subcommand; each returns its output files in memory.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use salem_core::approx::{SelbergPair, SANDWICH_GRID};
use salem_core::bounds::{
    gamma_exponent, pipeline, select_case_and_delta, CaseParams, DeltaResult, PipelineConfig, PipelineReport,
};
use salem_core::flow::{
    estimate_gr, fit_product_bound, generate_tiling, holder_fit_series, product_bound_check, HolderFit,
    ProductBoundFit, ProductBoundParams, ProductBoundReport, TILING_LENGTH_FACTOR,
};
use salem_core::numberfield::ReducedForm;
use salem_core::orbit::{fractional_orbit_series, torus_frequency, trace_orbit, IntegerTraces, Interval, Region, SalemNumber};
use salem_core::substitution::{
    classify_perron, perron_data, Classification, PerronData, Substitution, SubstitutionSpec, DEFAULT_LENGTH_CAP,
};
use serde::Serialize;

use crate::config::{AnalysisConfig, Theorem};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, json_doc, CsvDoc, Meta, OutputFile};

pub struct Context {
    pub cfg: AnalysisConfig,
    pub sub: Substitution,
}

impl Context {
    pub fn new(cfg: AnalysisConfig) -> CliResult<Self> {
        let sub = Substitution::from_spec(&cfg.substitution).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Context { cfg, sub })
    }

    pub fn meta(&self, command: &str) -> Meta {
        Meta {
            command: command.into(),
            config_sha256: self.cfg.hash(),
            precision_bits: self.cfg.precision_bits,
            seed: self.cfg.seed,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    fn perron(&self) -> CliResult<PerronData> {
        Ok(perron_data(&self.sub.matrix(), self.cfg.precision_bits)?)
    }

    fn salem(&self) -> CliResult<SalemNumber> {
        let perron = self.perron()?;
        SalemNumber::new(perron.min_poly, self.cfg.precision_bits)
            .map_err(|e| CliError::Config(format!("this command needs a Salem substitution: {e}")))
    }

    fn hp(&self, x: &salem_core::hp::Real) -> String {
        x.to_decimal(self.cfg.hp_digits())
    }

    /// Parses the η list against a field of degree `d`.
    fn etas(&self, d: usize) -> CliResult<Vec<ReducedForm>> {
        if self.cfg.eta.is_empty() {
            return Err(CliError::element("the eta list is empty"));
        }
        self.cfg
            .eta
            .iter()
            .map(|text| {
                let r: ReducedForm = text.parse()?;
                if r.degree() != d {
                    return Err(CliError::element(format!(
                        "eta {text:?} has {} coefficients, field degree is {d}",
                        r.degree()
                    )));
                }
                Ok(r)
            })
            .collect()
    }

    fn intervals(&self) -> CliResult<Vec<Interval>> {
        Ok(self.cfg.intervals.iter().map(|&[a, b]| Interval::new(a, b)).collect::<Result<Vec<_>, _>>()?)
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    substitution: SubstitutionSpec,
    matrix: Vec<Vec<u64>>,
    primitive: bool,
    char_poly: String,
    char_poly_coeffs: Vec<String>,
    min_poly: String,
    min_poly_coeffs: Vec<String>,
    alpha: String,
    alpha_f64: f64,
    verdict: String,
    salem: bool,
    unit_circle_count: usize,
    thetas: Vec<String>,
    left_eigenvector: Vec<String>,
    right_eigenvector: Vec<String>,
    eigen_residual: f64,
    /// Sum of the absolute coefficients of the minimal polynomial.
    length: String,
    delta1: String,
    delta1_f64: f64,
}

pub fn analyze(ctx: &Context) -> CliResult<Vec<OutputFile>> {
    let m = ctx.sub.matrix();
    let perron = ctx.perron()?;
    let prec = ctx.cfg.precision_bits;
    let verdict = classify_perron(&perron.min_poly, prec)?;
    let is_salem = verdict.classification == Classification::Salem;
    let thetas = if is_salem {
        SalemNumber::new(perron.min_poly.clone(), prec)?.thetas.iter().map(|t| ctx.hp(t)).collect()
    } else {
        Vec::new()
    };
    let length = perron.min_poly.length();
    let report = AnalyzeReport {
        substitution: ctx.sub.to_spec(),
        matrix: m.rows().to_vec(),
        primitive: m.is_primitive(),
        char_poly: perron.char_poly.to_string(),
        char_poly_coeffs: perron.char_poly.coeffs().iter().map(|c| c.to_string()).collect(),
        min_poly: perron.min_poly.to_string(),
        min_poly_coeffs: perron.min_poly.coeffs().iter().map(|c| c.to_string()).collect(),
        alpha: ctx.hp(&perron.alpha),
        alpha_f64: perron.alpha.to_f64(),
        verdict: verdict.classification.to_string(),
        salem: is_salem,
        unit_circle_count: verdict.unit_circle_count,
        thetas,
        left_eigenvector: perron.left_eigenvector.iter().map(|x| ctx.hp(x)).collect(),
        right_eigenvector: perron.right_eigenvector.iter().map(|x| ctx.hp(x)).collect(),
        eigen_residual: perron.eigen_residual(&m).to_f64(),
        delta1: format!("1/{length}"),
        delta1_f64: 1.0 / length.to_f64().unwrap_or(f64::INFINITY),
        length: length.to_string(),
    };
    Ok(vec![OutputFile::new("analyze.json", json_doc(&ctx.meta("analyze"), &report))])
}

pub fn trace_orbit_cmd(ctx: &Context) -> CliResult<Vec<OutputFile>> {
    let salem = ctx.salem()?;
    let d = salem.degree();
    let horizon = ctx.cfg.horizon;
    if horizon < d {
        return Err(CliError::element(format!("horizon {horizon} is below the field degree {d}")));
    }
    let etas = ctx.etas(d)?;
    let table = salem.orbit_table(horizon);
    let per_eta = etas
        .par_iter()
        .map(|eta| {
            let orbit = trace_orbit(&salem.field, eta, horizon)?;
            let frac = fractional_orbit_series(eta, &salem, &table)?;
            let traces: Vec<String> = IntegerTraces::new(&salem.field, eta).take(horizon + 1).map(|t| t.to_string()).collect();
            Ok((orbit, frac, traces))
        })
        .collect::<Result<Vec<_>, salem_core::Error>>()?;

    let meta = ctx.meta("trace-orbit");
    let mut dump = CsvDoc::new(&meta, &["eta", "n", "T_n", "residue", "frac_orbit"]);
    let mut summary = CsvDoc::new(&meta, &["eta", "L", "period", "preperiod", "cycle"]);
    for (text, (orbit, frac, traces)) in ctx.cfg.eta.iter().zip(&per_eta) {
        for n in 0..=horizon {
            let residue = if n < orbit.preperiod {
                orbit.prefix[n]
            } else {
                orbit.residues[(n - orbit.preperiod) % orbit.period]
            };
            dump.row([text.clone(), n.to_string(), traces[n].clone(), residue.to_string(), fmt_f64(frac[n])]);
        }
        let cycle: Vec<String> = orbit.residues.iter().map(|r| r.to_string()).collect();
        summary.row([
            text.clone(),
            orbit.eta.denominator.to_string(),
            orbit.period.to_string(),
            orbit.preperiod.to_string(),
            cycle.join(","),
        ]);
    }
    Ok(vec![
        OutputFile::new("trace_orbit.csv", dump.finish()),
        OutputFile::new("trace_orbit_summary.csv", summary.finish()),
    ])
}

pub fn equidist(ctx: &Context) -> CliResult<Vec<OutputFile>> {
    let salem = ctx.salem()?;
    let etas = ctx.etas(salem.degree())?;
    let intervals = ctx.intervals()?;
    let n = ctx.cfg.equidist_n;
    let table = salem.orbit_table(n);
    // Rows in (η, J) order: per η the orbit is computed once, then each J.
    let rows = etas
        .par_iter()
        .map(|eta| {
            let series = fractional_orbit_series(eta, &salem, &table)?;
            intervals
                .iter()
                .map(|j| {
                    let count = series[1..].iter().filter(|&&x| j.contains(x)).count();
                    let torus = torus_frequency(eta, &salem, j)?;
                    Ok((count, torus))
                })
                .collect::<Result<Vec<_>, salem_core::Error>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut doc = CsvDoc::new(
        &ctx.meta("equidist"),
        &["eta", "a", "b", "N", "count", "empirical", "torus", "abs_diff"],
    );
    for (text, per_j) in ctx.cfg.eta.iter().zip(&rows) {
        for (j, &(count, torus)) in intervals.iter().zip(per_j) {
            let empirical = count as f64 / n as f64;
            doc.row([
                text.clone(),
                fmt_f64(j.a),
                fmt_f64(j.b),
                n.to_string(),
                count.to_string(),
                fmt_f64(empirical),
                fmt_f64(torus),
                fmt_f64((empirical - torus).abs()),
            ]);
        }
    }
    Ok(vec![OutputFile::new("equidist.csv", doc.finish())])
}

pub fn selberg_check(ctx: &Context) -> CliResult<Vec<OutputFile>> {
    let jobs: Vec<(Interval, usize)> = ctx
        .intervals()?
        .into_iter()
        .flat_map(|j| ctx.cfg.selberg_degrees.iter().map(move |&n| (j, n)))
        .collect();
    let pairs = jobs
        .par_iter()
        .map(|&(j, n)| {
            let pair = SelbergPair::new(j.a, j.b, n)?;
            let margins = pair.grid_margins(SANDWICH_GRID);
            Ok((pair, margins))
        })
        .collect::<Result<Vec<_>, salem_core::Error>>()?;

    let meta = ctx.meta("selberg-check");
    let mut summary = CsvDoc::new(
        &meta,
        &[
            "a",
            "b",
            "N",
            "min_plus_margin",
            "min_minus_margin",
            "integral_plus",
            "integral_minus",
            "expected_plus",
            "expected_minus",
        ],
    );
    let mut coeffs = CsvDoc::new(&meta, &["a", "b", "N", "polynomial", "k", "cos_coeff", "sin_coeff"]);
    for (pair, (lo_plus, lo_minus, _)) in &pairs {
        let width = pair.b - pair.a;
        let excess = 1.0 / (pair.n + 1) as f64;
        summary.row([
            fmt_f64(pair.a),
            fmt_f64(pair.b),
            pair.n.to_string(),
            fmt_f64(*lo_plus),
            fmt_f64(*lo_minus),
            fmt_f64(pair.s_plus.integral()),
            fmt_f64(pair.s_minus.integral()),
            fmt_f64(width + excess),
            fmt_f64(width - excess),
        ]);
        for (name, poly) in [("plus", &pair.s_plus), ("minus", &pair.s_minus)] {
            for (k, c, s) in poly.coefficient_rows() {
                coeffs.row([
                    fmt_f64(pair.a),
                    fmt_f64(pair.b),
                    pair.n.to_string(),
                    name.to_string(),
                    k.to_string(),
                    fmt_f64(c),
                    fmt_f64(s),
                ]);
            }
        }
    }
    Ok(vec![
        OutputFile::new("selberg.csv", summary.finish()),
        OutputFile::new("selberg_coefficients.csv", coeffs.finish()),
    ])
}

#[derive(Serialize)]
struct TilingInfo {
    seed_letter: usize,
    tiles: usize,
    iterations: usize,
    total_length: String,
}

#[derive(Serialize)]
struct SpectralFit {
    omega: f64,
    holder: Option<HolderFit>,
    holder_error: Option<String>,
    product_bound_check: Option<ProductBoundReport>,
    product_bound_fit: Option<ProductBoundFit>,
    product_bound_error: Option<String>,
}

#[derive(Serialize)]
struct SpectralReport {
    letter: usize,
    num_samples: usize,
    r_grid: Vec<f64>,
    tiling: TilingInfo,
    fits: Vec<SpectralFit>,
}

pub fn spectral(ctx: &Context) -> CliResult<Vec<OutputFile>> {
    let sc = &ctx.cfg.spectral;
    let perron = ctx.perron()?;
    let r_max = *sc.r_grid.last().expect("validated nonempty");
    let tiles = generate_tiling(&ctx.sub, &perron, 0, TILING_LENGTH_FACTOR * r_max, DEFAULT_LENGTH_CAP)?;
    let letter = sc.letter - 1;
    let series = sc
        .omega
        .par_iter()
        .map(|&omega| estimate_gr(&tiles, letter, omega, &sc.r_grid, sc.num_samples, ctx.cfg.seed))
        .collect::<Result<Vec<_>, _>>()?;

    let fits: Vec<SpectralFit> = series
        .iter()
        .map(|s| {
            let (holder, holder_error) = split(holder_fit_series(s));
            let mut fit = SpectralFit {
                omega: s.omega,
                holder,
                holder_error,
                product_bound_check: None,
                product_bound_fit: None,
                product_bound_error: None,
            };
            match (sc.lambda, sc.c1) {
                (Some(lambda), Some(c1)) => {
                    let params = ProductBoundParams { kappa: sc.kappa, lambda, c1, c2: sc.c2 };
                    (fit.product_bound_check, fit.product_bound_error) =
                        split(product_bound_check(s, params, &perron.alpha));
                }
                _ if sc.fit => {
                    (fit.product_bound_fit, fit.product_bound_error) =
                        split(fit_product_bound(s, sc.kappa, sc.c2, &perron.alpha));
                }
                _ => {}
            }
            fit
        })
        .collect();

    let meta = ctx.meta("spectral");
    let mut doc = CsvDoc::new(&meta, &["omega", "R", "G_R", "slope_fit"]);
    for (s, f) in series.iter().zip(&fits) {
        let slope = f.holder.as_ref().map_or(f64::NAN, |h| h.slope);
        for (&r, &g) in s.r_values.iter().zip(&s.g_values) {
            doc.row([fmt_f64(s.omega), fmt_f64(r), fmt_f64(g), fmt_f64(slope)]);
        }
    }
    let report = SpectralReport {
        letter: sc.letter,
        num_samples: sc.num_samples,
        r_grid: sc.r_grid.clone(),
        tiling: TilingInfo {
            seed_letter: 1,
            tiles: tiles.len(),
            iterations: tiles.iterations,
            total_length: ctx.hp(tiles.total_length()),
        },
        fits,
    };
    Ok(vec![
        OutputFile::new("spectral.csv", doc.finish()),
        OutputFile::new("spectral_fit.json", json_doc(&meta, &report)),
    ])
}

fn split<T>(r: salem_core::Result<T>) -> (Option<T>, Option<String>) {
    match r {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

#[derive(Serialize)]
struct Hypotheses {
    abs_eta: f64,
    abs_sigma0_eta: f64,
    l: String,
    abs_eta_in_range: bool,
    sigma0_bounded: bool,
    denominator_bounded: bool,
    all: bool,
}

#[derive(Serialize)]
struct EtaBounds {
    eta: String,
    hypotheses: Hypotheses,
    report: PipelineReport,
}

#[derive(Serialize)]
struct CaseBounds {
    params: CaseParams,
    result: DeltaResult,
    gamma: f64,
}

#[derive(Serialize)]
struct BoundsReport {
    theorem: Theorem,
    frequency: f64,
    frequency_convention: String,
    eta_reports: Vec<EtaBounds>,
    case_reports: Vec<CaseBounds>,
}

pub fn bounds(ctx: &Context) -> CliResult<Vec<OutputFile>> {
    bounds_impl(ctx, true)
}

fn bounds_impl(ctx: &Context, use_eta: bool) -> CliResult<Vec<OutputFile>> {
    let bc = &ctx.cfg.bounds;
    let use_eta = use_eta && !ctx.cfg.eta.is_empty();
    if !use_eta && bc.case_params.is_empty() {
        return Err(CliError::Config("bounds needs an eta list or explicit case_params".into()));
    }
    let perron = ctx.perron()?;
    let alpha = perron.alpha.to_f64();
    let degree = perron.min_poly.degree();
    let (frequency, convention) = match bc.theorem {
        Theorem::General => (1.0 / 3.0, "1/3".to_string()),
        Theorem::Uniform => (1.0 / (3.0 * bc.a.powi(degree as i32)), "1/(3A^d)".to_string()),
    };
    let pc = PipelineConfig {
        lambda: bc.lambda,
        frequency,
        frequency_convention: convention.clone(),
        tau: bc.tau,
        d_const: bc.d_const,
        c_alpha: bc.c_alpha,
        a: bc.a,
    };

    let mut eta_reports = Vec::new();
    if use_eta {
        let salem = ctx.salem()?;
        let etas = ctx.etas(salem.degree())?;
        let reports = etas.par_iter().map(|eta| pipeline(&salem, eta, &pc)).collect::<Result<Vec<_>, _>>()?;
        for ((text, eta), report) in ctx.cfg.eta.iter().zip(&etas).zip(reports) {
            let big_l = eta.denominator.to_f64().unwrap_or(f64::INFINITY);
            let abs_eta = salem.numerator_value(eta).abs().to_f64() / big_l;
            let abs_sigma0_eta = salem.sigma0_value(eta).abs().to_f64() / big_l;
            let abs_eta_in_range = (1.0 / bc.b..=bc.b).contains(&abs_eta);
            let sigma0_bounded = abs_sigma0_eta <= bc.c;
            let denominator_bounded = big_l <= bc.a;
            eta_reports.push(EtaBounds {
                eta: text.clone(),
                hypotheses: Hypotheses {
                    abs_eta,
                    abs_sigma0_eta,
                    l: eta.denominator.to_string(),
                    abs_eta_in_range,
                    sigma0_bounded,
                    denominator_bounded,
                    all: abs_eta_in_range && sigma0_bounded && denominator_bounded,
                },
                report,
            });
        }
    }

    let case_reports = bc
        .case_params
        .iter()
        .map(|p| {
            let result = select_case_and_delta(p)?;
            let gamma = gamma_exponent(result.delta, bc.lambda, alpha, frequency)?;
            Ok(CaseBounds { params: p.clone(), result, gamma })
        })
        .collect::<Result<Vec<_>, salem_core::Error>>()?;

    let report = BoundsReport {
        theorem: bc.theorem,
        frequency,
        frequency_convention: convention,
        eta_reports,
        case_reports,
    };
    Ok(vec![OutputFile::new("bounds.json", json_doc(&ctx.meta("bounds"), &report))])
}

#[derive(Serialize)]
struct Skipped {
    command: &'static str,
    reason: String,
}

#[derive(Serialize)]
struct ReportIndex {
    commands_run: Vec<&'static str>,
    skipped: Vec<Skipped>,
    files: Vec<String>,
}

/// Every command; those needing a Salem field and an η list are skipped,
/// with the reason recorded, when either is missing.
pub fn report(ctx: &Context) -> CliResult<Vec<OutputFile>> {
    let mut files = Vec::new();
    let mut commands_run = Vec::new();
    let mut skipped = Vec::new();
    files.extend(analyze(ctx)?);
    commands_run.push("analyze");
    let salem_reason = match ctx.salem() {
        Ok(_) if ctx.cfg.eta.is_empty() => Some("the eta list is empty".to_string()),
        Ok(_) => None,
        Err(e) => Some(e.to_string()),
    };
    type Command = fn(&Context) -> CliResult<Vec<OutputFile>>;
    let eta_commands: [(&'static str, Command); 2] = [("trace-orbit", trace_orbit_cmd), ("equidist", equidist)];
    for (name, run) in eta_commands {
        match &salem_reason {
            None => {
                files.extend(run(ctx)?);
                commands_run.push(name);
            }
            Some(reason) => skipped.push(Skipped { command: name, reason: reason.clone() }),
        }
    }
    files.extend(selberg_check(ctx)?);
    commands_run.push("selberg-check");
    files.extend(spectral(ctx)?);
    commands_run.push("spectral");
    match (&salem_reason, ctx.cfg.bounds.case_params.is_empty()) {
        (Some(reason), true) => skipped.push(Skipped { command: "bounds", reason: reason.clone() }),
        // Without a usable η the explicit case list still runs.
        _ => {
            files.extend(bounds_impl(ctx, salem_reason.is_none())?);
            commands_run.push("bounds");
        }
    }
    let index = ReportIndex { commands_run, skipped, files: files.iter().map(|f| f.name.clone()).collect() };
    files.push(OutputFile::new("report.json", json_doc(&ctx.meta("report"), &index)));
    Ok(files)
}
