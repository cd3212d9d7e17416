use std::fs;
use std::path::Path;

use gbf_core::asymptotics::{expansion_csv, expansion_table, remainder_cm_order_check, ExpansionSpec};
use gbf_core::cm_probe::{bernstein_order_probe, cm_order_probe, cm_probe, log_cm_probe, ProbeConfig, ProbeReport};
use gbf_core::glambda::{g_lambda, g_lambda_derivative, log_g_neg, sigma_lambda, weighted_derivative};
use gbf_core::inequality::{sweep, GridSpec, Inequality, MarginOptions, Omega};
use gbf_core::smoothing::{approx_fn, bg1_sides, gg1_sides, try_smooth};
use gbf_core::special::{incomplete_beta, log_gamma, lower_incomplete_gamma};
use gbf_core::{laplace_transform, Axis, GBFRep, MeasureSpec, Spacing};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::{csv, json, num, CsvRow, Format, Report};
use crate::{
    ApproximateArgs, AsymptoticsArgs, GlambdaArgs, IdentitiesArgs, InequalitiesArgs, ProbeArgs, ProbeKind, Suite, Which,
};

pub struct Context {
    pub tol: f64,
    pub format: Format,
}

impl Context {
    fn render<R: CsvRow + Serialize>(&self, rows: &[R], extra: serde_json::Value) -> CliResult<String> {
        match self.format {
            Format::Csv => Ok(csv(rows)),
            Format::Json => json(&json!({ "summary": extra, "rows": rows })),
        }
    }
}

fn load<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let fail = |source: Box<dyn std::error::Error + Send + Sync>| CliError::Fixture {
        path: path.to_path_buf(),
        source,
    };
    let text = fs::read_to_string(path).map_err(|e| fail(e.into()))?;
    serde_json::from_str(&text).map_err(|e| fail(e.into()))
}

fn require<'a, T>(v: &'a Option<T>, what: &str) -> CliResult<&'a T> {
    v.as_ref()
        .ok_or_else(|| CliError::Config(format!("{what} is required")))
}

fn require_lambdas(l: &[f64], what: &str) -> CliResult<Vec<f64>> {
    if l.is_empty() {
        return Err(CliError::Config(format!("--lambda is required for {what}")));
    }
    Ok(l.to_vec())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

#[derive(Serialize)]
struct IdentityRow {
    suite: &'static str,
    lambda: f64,
    x: Option<f64>,
    y: f64,
    lhs: f64,
    rhs: f64,
    residual: f64,
    bound: f64,
    pass: bool,
}

impl CsvRow for IdentityRow {
    const HEADER: &'static str = "suite,lambda,x,y,lhs,rhs,residual,bound,status";

    fn write_row(&self, out: &mut String) {
        out.push_str(self.suite);
        out.push(',');
        num(out, self.lambda);
        out.push(',');
        if let Some(x) = self.x {
            num(out, x);
        }
        for v in [self.y, self.lhs, self.rhs, self.residual, self.bound] {
            out.push(',');
            num(out, v);
        }
        out.push(',');
        out.push_str(verdict(self.pass));
    }
}

fn identity_row(
    suite: &'static str,
    lambda: f64,
    x: Option<f64>,
    y: f64,
    lhs: f64,
    rhs: f64,
    bound: f64,
) -> IdentityRow {
    let residual = lhs - rhs;
    IdentityRow {
        suite,
        lambda,
        x,
        y,
        lhs,
        rhs,
        residual,
        bound,
        pass: residual.abs() <= bound,
    }
}

pub fn identities(ctx: &Context, a: &IdentitiesArgs) -> CliResult<Report> {
    let (bg_lambdas, gg_lambdas, xs, ys) = if a.grid == "default" {
        let l = if a.lambda.is_empty() {
            vec![0.5, 1.0, 2.5]
        } else {
            a.lambda.clone()
        };
        let g = if a.lambda.is_empty() {
            vec![0.5, 1.0, 3.0]
        } else {
            a.lambda.clone()
        };
        (l, g, vec![0.1, 1.0, 10.0], vec![0.1, 1.0, 10.0])
    } else {
        let axis: Axis = a.grid.parse()?;
        let l = require_lambdas(&a.lambda, "a custom identity grid")?;
        (l.clone(), l, axis.points(), axis.points())
    };
    let gg_ys = if a.grid == "default" {
        vec![0.5, 2.0, 10.0]
    } else {
        ys.clone()
    };
    let mut rows = Vec::new();
    if matches!(a.suite, Suite::Bg1 | Suite::All) {
        for &l in &bg_lambdas {
            let bound = 1e-8 * log_gamma(l)?.exp();
            for &x in &xs {
                for &y in &ys {
                    let s = bg1_sides(l, x, y)?;
                    rows.push(identity_row("bg1", l, Some(x), y, s.lhs, s.rhs, bound));
                }
            }
        }
    }
    if matches!(a.suite, Suite::Bg2 | Suite::All) {
        for &l in &bg_lambdas {
            for &z in &xs {
                for &y in &ys {
                    let smoothed = try_smooth(|t| lower_incomplete_gamma(l, z * t), y, 1.0, ctx.tol.min(1e-12))?;
                    let closed = (log_gamma(l + y)? - log_gamma(y)?).exp() * incomplete_beta(l, y, z / (z + y))?;
                    rows.push(identity_row(
                        "bg2",
                        l,
                        Some(z),
                        y,
                        smoothed,
                        closed,
                        1e-8 * closed.abs(),
                    ));
                }
            }
        }
    }
    if matches!(a.suite, Suite::Gg1 | Suite::All) {
        for &l in &gg_lambdas {
            let bound = if l == 1.0 { 1e-9 } else { 1e-8 };
            for &y in &gg_ys {
                let s = gg1_sides(l, y)?;
                rows.push(identity_row("gg1", l, None, y, s.lhs, s.rhs, bound));
            }
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    let max_abs = rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    let summary = json!({ "rows": rows.len(), "max_abs_residual": max_abs, "verdict": verdict(pass) });
    Ok(Report {
        body: ctx.render(&rows, summary.clone())?,
        summary: summary.to_string(),
        outcome: pass.into(),
    })
}

pub fn inequalities(ctx: &Context, a: &InequalitiesArgs) -> CliResult<Report> {
    let which = match a.which {
        Which::I => Inequality::I,
        Which::II => Inequality::II,
        Which::III => Inequality::ThmIII(load(require(&a.rep, "--rep")?)?),
        Which::IV => Inequality::ThmIV(load(require(&a.rep, "--rep")?)?),
        Which::CorCm => {
            let path = require(&a.rep, "--rep")?;
            let raw: serde_json::Value = load(path)?;
            if raw.get("lambda").is_some() {
                Inequality::CorCm(Omega::Derived(load::<GBFRep>(path)?))
            } else {
                Inequality::CorCm(Omega::Spec(load::<MeasureSpec>(path)?))
            }
        }
        Which::CorBddCm => Inequality::CorBddCm(load(require(&a.rep, "--rep")?)?),
    };
    let lambdas = match &which {
        Inequality::I | Inequality::II | Inequality::CorCm(Omega::Spec(_)) => require_lambdas(&a.lambda, which.id())?,
        _ => vec![1.0],
    };
    let grid = GridSpec::square(lambdas, a.xy_grid)?;
    let opts = MarginOptions {
        tol: ctx.tol,
        check_hypotheses: !a.no_hypothesis_check,
        ..MarginOptions::default()
    };
    let report = sweep(&which, &grid, &opts)?;
    let summary = serde_json::to_string(&report.summary()).map_err(|e| CliError::Config(e.to_string()))?;
    let body = match ctx.format {
        Format::Csv => report.to_csv(),
        Format::Json => json(&json!({ "summary": report.summary(), "entries": report.entries }))?,
    };
    let outcome = if report.has_errors() {
        Outcome::Numerical
    } else {
        report.pass.into()
    };
    Ok(Report { body, summary, outcome })
}

#[derive(Serialize)]
struct ApproxRow {
    lambda: f64,
    x: f64,
    n: u32,
    f_n: f64,
    f: f64,
    error: f64,
}

impl CsvRow for ApproxRow {
    const HEADER: &'static str = "lambda,x,n,f_n,f,error";

    fn write_row(&self, out: &mut String) {
        num(out, self.lambda);
        out.push(',');
        num(out, self.x);
        out.push_str(&format!(",{}", self.n));
        for v in [self.f_n, self.f, self.error] {
            out.push(',');
            num(out, v);
        }
    }
}

pub fn approximate(ctx: &Context, a: &ApproximateArgs) -> CliResult<Report> {
    let rep: GBFRep = load(&a.rep)?;
    if a.n.is_empty() || a.x.is_empty() {
        return Err(CliError::Config("--n and --x need at least one value".into()));
    }
    let mut rows = Vec::new();
    for &x in &a.x {
        let f = rep.eval(x, ctx.tol)?;
        for &n in &a.n {
            let f_n = approx_fn(&rep, n, x, ctx.tol)?;
            rows.push(ApproxRow {
                lambda: rep.lambda,
                x,
                n,
                f_n,
                f,
                error: f_n - f,
            });
        }
    }
    let summary = json!({ "rows": rows.len(), "verdict": "pass" });
    Ok(Report {
        body: ctx.render(&rows, summary.clone())?,
        summary: summary.to_string(),
        outcome: Outcome::Pass,
    })
}

#[derive(Serialize)]
struct GlambdaRow {
    lambda: f64,
    x: f64,
    g: f64,
    neg_log_g: f64,
    sigma: f64,
    derivative: f64,
    weighted_derivative: f64,
    sign_ok: bool,
}

impl CsvRow for GlambdaRow {
    const HEADER: &'static str = "lambda,x,g,neg_log_g,sigma,derivative,weighted_derivative,sign_ok";

    fn write_row(&self, out: &mut String) {
        for (i, v) in [
            self.lambda,
            self.x,
            self.g,
            self.neg_log_g,
            self.sigma,
            self.derivative,
            self.weighted_derivative,
        ]
        .into_iter()
        .enumerate()
        {
            if i > 0 {
                out.push(',');
            }
            num(out, v);
        }
        out.push_str(if self.sign_ok { ",true" } else { ",false" });
    }
}

pub fn glambda(ctx: &Context, a: &GlambdaArgs) -> CliResult<Report> {
    let mut rows = Vec::new();
    for &l in &a.lambda {
        for x in a.grid.points() {
            let g = g_lambda(l, x)?;
            let d = g_lambda_derivative(l, x)?;
            let sign_ok = if l < 1.0 {
                g > 1.0 && d < 0.0
            } else if l > 1.0 {
                g < 1.0 && d > 0.0
            } else {
                (g - 1.0).abs() <= 1e-15
            };
            rows.push(GlambdaRow {
                lambda: l,
                x,
                g,
                neg_log_g: log_g_neg(l, x)?,
                sigma: sigma_lambda(l, x)?,
                derivative: d,
                weighted_derivative: weighted_derivative(l, x)?,
                sign_ok,
            });
        }
    }
    let pass = !rows.is_empty() && rows.iter().all(|r| r.sign_ok);
    let summary = json!({ "rows": rows.len(), "verdict": verdict(pass) });
    Ok(Report {
        body: ctx.render(&rows, summary.clone())?,
        summary: summary.to_string(),
        outcome: pass.into(),
    })
}

type Probed = Box<dyn Fn(f64) -> f64 + Sync>;

fn probe_function(name: &str, lambda: Option<f64>, rep: Option<&Path>, tol: f64) -> CliResult<Probed> {
    let need_lambda = || lambda.ok_or_else(|| CliError::Config(format!("--lambda is required for {name}")));
    let need_rep = || rep.ok_or_else(|| CliError::Config(format!("--rep is required for {name}")));
    let f: Probed = match name {
        "exp-neg" => Box::new(|x: f64| (-x).exp()),
        "inv-1p" => Box::new(|x: f64| 1.0 / (1.0 + x)),
        "inv-sqrt" => Box::new(|x: f64| x.powf(-0.5)),
        "identity" => Box::new(|x| x),
        "sin-plus-2" => Box::new(|x: f64| x.sin() + 2.0),
        "exp" => Box::new(f64::exp),
        "g-lambda" => {
            let l = need_lambda()?;
            Box::new(move |x| g_lambda(l, x).unwrap_or(f64::NAN))
        }
        "inv-g-lambda" => {
            let l = need_lambda()?;
            Box::new(move |x| g_lambda(l, x).map_or(f64::NAN, |g| 1.0 / g))
        }
        "weighted-derivative" => {
            let l = need_lambda()?;
            Box::new(move |x| weighted_derivative(l, x).unwrap_or(f64::NAN))
        }
        "lower-gamma" => {
            let l = need_lambda()?;
            Box::new(move |x| lower_incomplete_gamma(l, x).unwrap_or(f64::NAN))
        }
        "laplace" => {
            let mu: MeasureSpec = load(need_rep()?)?;
            Box::new(move |x| laplace_transform(&mu, x, tol).unwrap_or(f64::NAN))
        }
        "gbf" => {
            let r: GBFRep = load(need_rep()?)?;
            Box::new(move |x| r.eval(x, tol).unwrap_or(f64::NAN))
        }
        other => return Err(CliError::Config(format!("unknown probe function '{other}'"))),
    };
    Ok(f)
}

#[derive(Serialize)]
struct ProbeRow<'a> {
    function: &'a str,
    kind: &'static str,
    order: Option<f64>,
    #[serde(flatten)]
    report: &'a ProbeReport,
}

impl CsvRow for ProbeRow<'_> {
    const HEADER: &'static str =
        "function,kind,order,max_order,x_min,x_max,points,passed_through_order,worst_order,worst_x,worst_value,status";

    fn write_row(&self, out: &mut String) {
        let r = self.report;
        out.push_str(&format!("{},{},", self.function, self.kind));
        if let Some(o) = self.order {
            num(out, o);
        }
        out.push_str(&format!(",{},", r.max_order));
        num(out, r.grid.x_min);
        out.push(',');
        num(out, r.grid.x_max);
        out.push_str(&format!(",{},", r.grid.points));
        if let Some(p) = r.passed_through_order {
            out.push_str(&p.to_string());
        }
        out.push_str(&format!(",{},", r.worst.order));
        num(out, r.worst.x);
        out.push(',');
        num(out, r.worst.value);
        out.push(',');
        out.push_str(verdict(r.pass));
    }
}

pub fn probe(ctx: &Context, a: &ProbeArgs) -> CliResult<Report> {
    if a.grid.spacing != Spacing::Log {
        return Err(CliError::Config(
            "probe grids are log-spaced; use log:min:max:count".into(),
        ));
    }
    let cfg = ProbeConfig::new(a.max_order, a.grid.min, a.grid.max, a.grid.count)?;
    let f = probe_function(&a.function, a.lambda, a.rep.as_deref(), ctx.tol)?;
    let need_order = || {
        a.order
            .ok_or_else(|| CliError::Config("--order is required for this kind".into()))
    };
    let (kind, order, report) = match a.kind {
        ProbeKind::Cm => ("cm", None, cm_probe(f, &cfg)?),
        ProbeKind::Order => {
            let o = need_order()?;
            ("order", Some(o), cm_order_probe(f, o, &cfg)?)
        }
        ProbeKind::Log => ("log", None, log_cm_probe(f, &cfg)?),
        ProbeKind::Bernstein => {
            let o = need_order()?;
            ("bernstein", Some(o), bernstein_order_probe(f, o, &cfg)?)
        }
    };
    let row = ProbeRow {
        function: &a.function,
        kind,
        order,
        report: &report,
    };
    let summary = json!({
        "passed_through_order": report.passed_through_order,
        "worst": report.worst,
        "verdict": verdict(report.pass),
    });
    Ok(Report {
        body: ctx.render(std::slice::from_ref(&row), summary.clone())?,
        summary: summary.to_string(),
        outcome: report.pass.into(),
    })
}

pub fn asymptotics(ctx: &Context, a: &AsymptoticsArgs) -> CliResult<Report> {
    let base = match &a.rep {
        Some(p) => {
            let s: ExpansionSpec = load(p)?;
            s.validate()?;
            s.with_order(a.n)?
        }
        None => ExpansionSpec::lomax(a.lambda, a.n)?,
    };
    for w in base.warnings() {
        eprintln!("warning: {w}");
    }
    let rows = expansion_table(&base, &a.x, a.n, ctx.tol)?;
    let mut pass = rows.iter().all(|r| r.bracket_ok);
    let remainder = match a.max_order {
        Some(k) => {
            let cfg = ProbeConfig {
                max_order: k,
                ..ProbeConfig::default()
            };
            cfg.validate()?;
            let r = remainder_cm_order_check(&base, a.n, &cfg, ctx.tol)?;
            pass &= r.pass;
            Some(r)
        }
        None => None,
    };
    let summary = json!({
        "rows": rows.len(),
        "brackets": rows.iter().all(|r| r.bracket_ok),
        "remainder_probe": remainder.as_ref().map(|r| json!({
            "alpha": a.n as f64 - base.lambda,
            "passed_through_order": r.passed_through_order,
            "worst": r.worst,
            "pass": r.pass,
        })),
        "verdict": verdict(pass),
    });
    let body = match ctx.format {
        Format::Csv => expansion_csv(&rows),
        Format::Json => json(&json!({ "summary": summary, "rows": rows }))?,
    };
    Ok(Report {
        body,
        summary: summary.to_string(),
        outcome: pass.into(),
    })
}

/// Overall result of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Numerical,
}

impl From<bool> for Outcome {
    fn from(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}
