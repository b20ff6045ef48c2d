//! Command-line frontend: subcommands classify, henon, cascade, diagram,
//! rescale-check, symbolic, nf-reduce.
//!
//! Outputs are deterministic: identical inputs produce byte-identical CSV
//! and JSON. Floating-point fields are printed with 17 significant digits
//! and '.' as the decimal separator. Exit codes: 0 success, 2 validation
//! failure, 3 numerical failure.

use crate::bif;
use crate::error::{Error, Result};
use crate::globalmap::ModelMap;
use crate::henon;
use crate::jets::{self, Jet2, JetMap2};
use crate::rescale;
use crate::semilocal;
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

/// 17 significant digits, '.' decimal separator.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Parser)]
#[command(name = "apm", version, about = "area-preserving map tangency laboratory")]
struct CliArgs {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct OutOpt {
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tangency invariants and class of a model (JSON profile)
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Closed-form conservative Henon analysis over an M grid (CSV)
    Henon {
        /// analyze the orientable family
        #[arg(long, conflicts_with = "nonorientable")]
        orientable: bool,
        /// analyze the non-orientable family
        #[arg(long)]
        nonorientable: bool,
        /// M grid as A:B:STEP
        #[arg(long, value_name = "A:B:STEP", allow_hyphen_values = true)]
        m: String,
        /// emit JSON instead of CSV
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Cascade of elliptic intervals over a k range (CSV)
    Cascade {
        #[arg(long)]
        model: PathBuf,
        /// k range as A:B (inclusive)
        #[arg(long, value_name = "A:B")]
        k: String,
        /// optional mu window as A:B
        #[arg(long, value_name = "A:B", allow_hyphen_values = true)]
        mu: Option<String>,
        /// emit JSON instead of CSV
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Two-parameter bifurcation curves over an alpha grid (CSV, optional SVG)
    Diagram {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_name = "A:B")]
        k: String,
        /// alpha grid as A:B:STEP
        #[arg(long, value_name = "A:B:STEP", allow_hyphen_values = true)]
        alpha: String,
        /// optional SVG rendering of the curves
        #[arg(long)]
        svg: Option<PathBuf>,
        /// emit JSON instead of CSV
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Residuals of the rescaled return maps against the Henon limit (CSV)
    RescaleCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_name = "A:B")]
        k: String,
        /// ball radius in rescaled units
        #[arg(long, default_value_t = 2.0)]
        ball: f64,
        /// emit JSON instead of CSV
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Symbolic-code admissibility and orbit search (JSON report)
    Symbolic {
        #[arg(long)]
        model: PathBuf,
        /// code as comma-separated block lengths, optionally with legs:
        /// "8,10" or "8:1,10:2"
        #[arg(long)]
        code: String,
        /// run the shooting verifier as well
        #[arg(long)]
        verify: bool,
        /// override for the S1 classifier constant
        #[arg(long)]
        s1: Option<f64>,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Normal-form reduction of a jet map (JSON in, JSON out)
    NfReduce {
        /// jet file: { "order": D, "fx": [[i,j,c],...], "fy": [[i,j,c],...] }
        #[arg(long)]
        jet: PathBuf,
        /// normal-form order n (default: largest with 2n+1 <= D)
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        out: OutOpt,
    },
}

/// Entry point used by the `apm` binary and by tests.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(args.cmd) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Classify { model, out } => {
            let model = ModelMap::load(&model)?;
            model.validate()?;
            let profile = semilocal::compute_profile(&model)?;
            write_out(&out, serde_json::to_string_pretty(&profile)?.as_bytes())
        }
        Cmd::Henon { orientable, nonorientable, m, json, out } => {
            if !orientable && !nonorientable {
                return Err(Error::Validation(
                    "pass --orientable or --nonorientable".into(),
                ));
            }
            let grid = parse_grid(&m)?;
            if json {
                let rows: Vec<_> = grid
                    .iter()
                    .map(|&mv| {
                        if orientable {
                            henon::analyze_orientable(mv)
                        } else {
                            henon::analyze_nonorientable(mv)
                        }
                    })
                    .collect();
                write_out(&out, serde_json::to_string_pretty(&rows)?.as_bytes())
            } else {
                write_out(&out, henon_csv(orientable, &grid).as_bytes())
            }
        }
        Cmd::Cascade { model, k, mu, json, out } => {
            let model = ModelMap::load(&model)?;
            model.validate()?;
            let ks = parse_k_range(&k)?;
            let window = match mu {
                Some(w) => Some(parse_pair(&w)?),
                None => None,
            };
            if json {
                let scan = bif::cascade_scan(&model, &ks, window);
                write_out(&out, serde_json::to_string_pretty(&scan)?.as_bytes())
            } else {
                write_out(&out, cascade_csv(&model, &ks, window)?.as_bytes())
            }
        }
        Cmd::Diagram { model, k, alpha, svg, json, out } => {
            let model = ModelMap::load(&model)?;
            model.validate()?;
            let ks = parse_k_range(&k)?;
            let alphas = parse_grid(&alpha)?;
            let samples = bif::bif_curves(&model, &ks, &alphas)?;
            if let Some(path) = svg {
                std::fs::write(&path, diagram_svg(&samples))?;
            }
            if json {
                write_out(&out, serde_json::to_string_pretty(&samples)?.as_bytes())
            } else {
                write_out(&out, diagram_csv(&samples).as_bytes())
            }
        }
        Cmd::RescaleCheck { model, k, ball, json, out } => {
            let model = ModelMap::load(&model)?;
            model.validate()?;
            if ball <= 0.0 {
                return Err(Error::Validation("ball radius must be positive".into()));
            }
            let ks = parse_k_range(&k)?;
            if json {
                let rows: Result<Vec<_>> = ks.iter().map(|&k| rescale::rescaled_tk(&model, k, ball)).collect();
                write_out(&out, serde_json::to_string_pretty(&rows?)?.as_bytes())
            } else {
                write_out(&out, rescale_csv(&model, &ks, ball)?.as_bytes())
            }
        }
        Cmd::Symbolic { model, code, verify, s1, out } => {
            let model = ModelMap::load(&model)?;
            model.validate()?;
            let code = semilocal::SymbolCode::parse(&code)?;
            write_out(&out, symbolic_report(&model, &code, verify, s1)?.as_bytes())
        }
        Cmd::NfReduce { jet, n, out } => {
            let text = std::fs::read_to_string(&jet)?;
            let (map, order) = parse_jet_file(&text)?;
            let n = n.unwrap_or_else(|| ((order.saturating_sub(1)) / 2).max(1));
            let result = jets::normal_form_reduce(&map, n)?;
            write_out(&out, nf_result_json(&result).as_bytes())
        }
    }
}

fn write_out(out: &OutOpt, bytes: &[u8]) -> Result<()> {
    match &out.out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// parsing helpers
// ---------------------------------------------------------------------------

fn parse_pair(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::Validation(format!("expected A:B, got '{text}'")));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Validation(format!("bad number '{}'", parts[0])))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Validation(format!("bad number '{}'", parts[1])))?;
    Ok((a, b))
}

pub fn parse_k_range(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::Validation(format!("expected A:B, got '{text}'")));
    }
    let a: usize = parts[0]
        .parse()
        .map_err(|_| Error::Validation(format!("bad integer '{}'", parts[0])))?;
    let b: usize = parts[1]
        .parse()
        .map_err(|_| Error::Validation(format!("bad integer '{}'", parts[1])))?;
    if b < a {
        return Err(Error::Validation(format!("empty range '{text}'")));
    }
    Ok((a..=b).collect())
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Validation(format!("expected A:B:STEP, got '{text}'")));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Validation(format!("bad number '{}'", parts[0])))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Validation(format!("bad number '{}'", parts[1])))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|_| Error::Validation(format!("bad number '{}'", parts[2])))?;
    if !(step > 0.0) || b < a {
        return Err(Error::Validation(format!("empty or descending grid '{text}'")));
    }
    let n = ((b - a) / step + 0.5).floor() as usize;
    Ok((0..=n).map(|i| a + i as f64 * step).collect())
}

// ---------------------------------------------------------------------------
// emitters
// ---------------------------------------------------------------------------

fn henon_csv(orientable: bool, grid: &[f64]) -> String {
    let mut s = String::from("M,x,y,trace,stability,psi\n");
    for &m in grid {
        let a = if orientable {
            henon::analyze_orientable(m)
        } else {
            henon::analyze_nonorientable(m)
        };
        for fp in &a.fixed_points {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_f64(m),
                fmt_f64(fp.point.x),
                fmt_f64(fp.point.y),
                fmt_f64(fp.trace),
                fp.stability.as_str(),
                fp.psi.map(fmt_f64).unwrap_or_default(),
            ));
        }
        for c in &a.two_cycles {
            s.push_str(&format!(
                "{},{},{},{},2cycle-{},{}\n",
                fmt_f64(m),
                fmt_f64(c.points[0].x),
                fmt_f64(c.points[0].y),
                fmt_f64(c.trace),
                c.stability.as_str(),
                c.psi.map(fmt_f64).unwrap_or_default(),
            ));
        }
    }
    s
}

fn cascade_csv(model: &ModelMap, ks: &[usize], window: Option<(f64, f64)>) -> Result<String> {
    let scan = bif::cascade_scan(model, ks, window);
    let mut samples = Vec::new();
    for iv in &scan {
        if let (Some(p), Some(m)) = (iv.mu_plus_detected, iv.mu_minus_detected) {
            let err = (p - iv.mu_plus_formula).abs().max((m - iv.mu_minus_formula).abs());
            samples.push((iv.k, err));
        }
    }
    let lambda = model.saddle.lambda().abs();
    let unit = |k: usize| k as f64 * lambda.powi(3 * k as i32);
    let c_fit = if samples.is_empty() {
        0.0
    } else {
        bif::fitted_envelope(&samples, unit).0
    };

    let mut s = String::from(
        "k,kind,mu_minus_det,mu_plus_det,mu_minus_formula,mu_plus_formula,res_pi2,res_2pi3,res_acos14,pass\n",
    );
    for iv in &scan {
        let res = |tag: bif::ResTag| -> String {
            iv.resonances
                .iter()
                .find(|r| r.tag == tag)
                .and_then(|r| r.mu_detected)
                .map(fmt_f64)
                .unwrap_or_default()
        };
        let pass = iv.complete
            && match (iv.mu_plus_detected, iv.mu_minus_detected) {
                (Some(p), Some(m)) => {
                    let err = (p - iv.mu_plus_formula).abs().max((m - iv.mu_minus_formula).abs());
                    let in_budget = err <= 3.0 * c_fit.max(1e-300) * unit(iv.k);
                    let interior = iv.detected_bounds().map_or(false, |(lo, hi)| {
                        iv.resonances
                            .iter()
                            .filter_map(|r| r.mu_detected)
                            .all(|mu| mu > lo && mu < hi)
                    });
                    in_budget && interior
                }
                _ => false,
            };
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            iv.k,
            iv.kind.as_str(),
            iv.mu_minus_detected.map(fmt_f64).unwrap_or_default(),
            iv.mu_plus_detected.map(fmt_f64).unwrap_or_default(),
            fmt_f64(iv.mu_minus_formula),
            fmt_f64(iv.mu_plus_formula),
            res(bif::ResTag::PiHalf),
            res(bif::ResTag::TwoPiThird),
            res(bif::ResTag::AcosMinusQuarter),
            pass,
        ));
    }
    Ok(s)
}

fn diagram_csv(samples: &[bif::BifCurveSample]) -> String {
    let mut s = String::from("k,curve,alpha,mu\n");
    for sample in samples {
        s.push_str(&format!(
            "{},{},{},{}\n",
            sample.k,
            sample.curve_tag.as_str(),
            fmt_f64(sample.alpha),
            fmt_f64(sample.mu),
        ));
    }
    s
}

fn rescale_csv(model: &ModelMap, ks: &[usize], ball: f64) -> Result<String> {
    let mut rows = Vec::new();
    for &k in ks {
        rows.push(rescale::rescaled_tk(model, k, ball)?);
    }
    let lambda = model.saddle.lambda().abs();
    let unit = |k: usize| k as f64 * lambda.powi(k as i32);
    let samples: Vec<(usize, f64)> = rows.iter().map(|r| (r.k, r.residual_bound)).collect();
    let c_fit = bif::fitted_envelope(&samples, unit).0;
    let mut s = String::from("k,nu1,nu2,M,residual,budget,pass\n");
    for r in &rows {
        let budget = 2.0 * c_fit * unit(r.k);
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k,
            r.nu1,
            r.nu2,
            fmt_f64(r.m),
            fmt_f64(r.residual_bound),
            fmt_f64(budget),
            r.residual_bound <= budget,
        ));
    }
    Ok(s)
}

fn symbolic_report(
    model: &ModelMap,
    code: &semilocal::SymbolCode,
    verify: bool,
    s1: Option<f64>,
) -> Result<String> {
    let profile = semilocal::compute_profile(model)?;
    let kbar = profile.kbar;
    let admissible = semilocal::admissible_code(&profile, code, kbar)?;
    let mut report = serde_json::json!({
        "code": code,
        "class": profile.class_tag.as_str(),
        "tau": profile.tau,
        "kbar": kbar,
        "admissible": admissible,
    });
    if let Some(s1) = s1 {
        report["s1"] = serde_json::json!(s1);
    }
    if verify {
        let outcome = semilocal::code_to_orbit(model, code)?;
        report["orbit"] = match outcome {
            semilocal::OrbitOutcome::Found(orbit) => serde_json::json!({
                "found": true,
                "residual": orbit.residual,
                "period": orbit.period,
                "points": orbit.points,
            }),
            semilocal::OrbitOutcome::Absent { seeds_tried } => serde_json::json!({
                "found": false,
                "certified_absent": true,
                "seeds_tried": seeds_tried,
            }),
            semilocal::OrbitOutcome::Inconclusive { seeds_tried, best_residual } => serde_json::json!({
                "found": false,
                "certified_absent": false,
                "inconclusive": true,
                "seeds_tried": seeds_tried,
                "best_residual": best_residual,
            }),
        };
    }
    Ok(serde_json::to_string_pretty(&report)?)
}

fn parse_jet_file(text: &str) -> Result<(JetMap2, usize)> {
    #[derive(serde::Deserialize)]
    struct JetFile {
        order: usize,
        fx: Vec<(usize, usize, f64)>,
        fy: Vec<(usize, usize, f64)>,
    }
    let file: JetFile = serde_json::from_str(text)?;
    let mut fx = Jet2::zero(file.order);
    for (i, j, c) in file.fx {
        if i + j > file.order {
            return Err(Error::Validation(format!(
                "fx term ({i},{j}) beyond order {}",
                file.order
            )));
        }
        fx.set(i, j, c);
    }
    let mut fy = Jet2::zero(file.order);
    for (i, j, c) in file.fy {
        if i + j > file.order {
            return Err(Error::Validation(format!(
                "fy term ({i},{j}) beyond order {}",
                file.order
            )));
        }
        fy.set(i, j, c);
    }
    let map = JetMap2::new(fx, fy)?;
    Ok((map, file.order))
}

fn jet_terms_json(jet: &Jet2) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = jet
        .terms()
        .map(|(i, j, c)| serde_json::json!([i, j, c]))
        .collect();
    serde_json::Value::Array(terms)
}

fn nf_result_json(r: &jets::NormalFormResult) -> String {
    let v = serde_json::json!({
        "betas": r.betas,
        "tilde_betas": r.tilde_betas,
        "change": {
            "order": r.change.order(),
            "fx": jet_terms_json(&r.change.fx),
            "fy": jet_terms_json(&r.change.fy),
        },
        "reduced": {
            "order": r.reduced.order(),
            "fx": jet_terms_json(&r.reduced.fx),
            "fy": jet_terms_json(&r.reduced.fy),
        },
    });
    serde_json::to_string_pretty(&v).expect("json")
}

// ---------------------------------------------------------------------------
// SVG rendering (plots are a convenience, never part of acceptance)
// ---------------------------------------------------------------------------

fn diagram_svg(samples: &[bif::BifCurveSample]) -> String {
    let (w, h) = (640.0, 480.0);
    if samples.is_empty() {
        return format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\"/>");
    }
    let (mut mu_lo, mut mu_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut al_lo, mut al_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in samples {
        mu_lo = mu_lo.min(s.mu);
        mu_hi = mu_hi.max(s.mu);
        al_lo = al_lo.min(s.alpha);
        al_hi = al_hi.max(s.alpha);
    }
    let pad = 40.0;
    let sx = |mu: f64| pad + (mu - mu_lo) / (mu_hi - mu_lo).max(1e-300) * (w - 2.0 * pad);
    let sy = |al: f64| h - pad - (al - al_lo) / (al_hi - al_lo).max(1e-300) * (h - 2.0 * pad);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\"/>\n",
        sx(0.0),
        pad,
        sx(0.0),
        h - pad
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\"/>\n",
        pad,
        sy(0.0),
        w - pad,
        sy(0.0)
    ));
    // group samples per (k, curve)
    let mut keys: Vec<(usize, &'static str)> = samples
        .iter()
        .map(|s| (s.k, s.curve_tag.as_str()))
        .collect();
    keys.sort();
    keys.dedup();
    let palette = ["#1b6ca8", "#c23b22", "#2e854b", "#8e44ad", "#b8860b", "#555555"];
    let curve_points = |k: usize, tag: &str| -> Vec<(f64, f64)> {
        samples
            .iter()
            .filter(|s| s.k == k && s.curve_tag.as_str() == tag)
            .map(|s| (sx(s.mu), sy(s.alpha)))
            .collect()
    };
    // elliptic domains E_k: filled band between the two curves of each k
    let mut ks: Vec<usize> = keys.iter().map(|(k, _)| *k).collect();
    ks.dedup();
    for (idx, k) in ks.iter().enumerate() {
        let tags: Vec<&str> = keys.iter().filter(|(kk, _)| kk == k).map(|(_, t)| *t).collect();
        if tags.len() == 2 {
            let mut poly = curve_points(*k, tags[0]);
            let mut back = curve_points(*k, tags[1]);
            back.reverse();
            poly.extend(back);
            let pts: String = poly
                .iter()
                .map(|(x, y)| format!("{x:.2},{y:.2}"))
                .collect::<Vec<_>>()
                .join(" ");
            svg.push_str(&format!(
                "<polygon fill=\"{}\" fill-opacity=\"0.15\" stroke=\"none\" points=\"{}\"/>\n",
                palette[idx % palette.len()],
                pts
            ));
        }
    }
    for (idx, (k, tag)) in keys.iter().enumerate() {
        let pts: String = curve_points(*k, tag)
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect::<Vec<_>>()
            .join(" ");
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"{}\"/>\n",
            palette[idx % palette.len()],
            pts
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
