//! Subcommand implementations.

use std::fmt::Write as _;

use opuc::cmv::power_diagonal;
use opuc::coeffs::{right_limits, sparse_condition_check};
use opuc::jacobi::{jacobi_moment, m_function, resolvent_diagonal, simon_classify};
use opuc::moebius::Side;
use opuc::polys::ratio_trace;
use opuc::schur::{schur_eval, schur_eval_structured, MinusTail, PlusTail};
use opuc::spectral::{
    boundary_values, khrushchev_classify, pearson_defect, random_experiment, reflectionless_defect_measure,
    reflectionless_defect_operator, sigma_ac_estimate, DefectReport,
};
use opuc::{Error, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Command, C64};

/// JSON result plus named CSV tables.
pub struct Output {
    pub result: Value,
    pub tables: Vec<(String, String)>,
}

fn to_json<S: serde::Serialize>(v: &S) -> Value {
    serde_json::to_value(v).expect("result types serialize")
}

struct Table {
    name: &'static str,
    text: String,
}

impl Table {
    fn new(name: &'static str, header: &str) -> Self {
        Self { name, text: format!("{header}\n") }
    }

    fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    fn done(self) -> (String, String) {
        (self.name.to_string(), self.text)
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn defect_table(name: &'static str, r: &DefectReport<f64>) -> (String, String) {
    let mut buf = Vec::new();
    r.write_csv(&mut buf).expect("in-memory write");
    (name.to_string(), String::from_utf8(buf).expect("utf8"))
}

pub fn execute(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::SchurEval { descriptor, n, side, points, depth, structured } => {
            let values: Vec<C64> = points
                .par_iter()
                .map(|&z| match (side, structured) {
                    (Side::Plus, true) => schur_eval_structured(&PlusTail { desc: descriptor, n: *n }, z),
                    (Side::Minus, true) => schur_eval_structured(&MinusTail { desc: descriptor, n: *n }, z),
                    (Side::Plus, false) => schur_eval(&PlusTail { desc: descriptor, n: *n }, z, *depth),
                    (Side::Minus, false) => schur_eval(&MinusTail { desc: descriptor, n: *n }, z, *depth),
                })
                .collect::<Result<_>>()?;
            let mut t = Table::new("values.csv", "z_re,z_im,f_re,f_im");
            for (z, f) in points.iter().zip(&values) {
                t.row(&[num(z.re), num(z.im), num(f.re), num(f.im)]);
            }
            Ok(Output {
                result: json!({ "values": to_json(&values) }),
                tables: vec![t.done()],
            })
        }
        Command::SigmaAc { descriptor, grid } => {
            let g = grid.build()?;
            let est = sigma_ac_estimate(descriptor, &g)?;
            let (vals, _) = boundary_values(&PlusTail { desc: descriptor, n: 0 }, &g)?;
            let mut t = Table::new("boundary.csv", "theta,abs_f");
            for (k, f) in vals.iter().enumerate() {
                t.row(&[num(g.theta(k)), num(f.norm())]);
            }
            Ok(Output { result: to_json(&est), tables: vec![t.done()] })
        }
        Command::Reflectionless { descriptor, n, arcs, grid } => {
            let g = grid.build()?;
            let a = match arcs {
                Some(a) => a.clone(),
                None => sigma_ac_estimate(descriptor, &g)?.arcs,
            };
            let op = reflectionless_defect_operator(descriptor, *n, &a, &g)?;
            let me = reflectionless_defect_measure(descriptor, *n, &a, &g)?;
            Ok(Output {
                result: json!({
                    "arcs": to_json(&a),
                    "operator": to_json(&op),
                    "operator_passes": op.passes(),
                    "measure": to_json(&me),
                    "measure_passes": me.passes(),
                }),
                tables: vec![defect_table("operator.csv", &op), defect_table("measure.csv", &me)],
            })
        }
        Command::ClassifyKhrushchev { descriptor, probe, ell_max } => {
            let label = khrushchev_classify(descriptor, *probe, *ell_max)?;
            Ok(Output { result: to_json(&label), tables: vec![] })
        }
        Command::ClassifySimon { descriptor, probe, points, depth } => {
            let label = simon_classify(descriptor, *probe)?;
            let mut t = Table::new(
                "resolvent.csv",
                "n,z_re,z_im,g_re,g_im,m_minus_re,m_minus_im,m_plus_re,m_plus_im",
            );
            for z in points {
                for n in probe.indices() {
                    let g = resolvent_diagonal(descriptor, n, *z, *depth)?;
                    let mm = m_function(descriptor, n, Side::Minus, *z, *depth)?;
                    let mp = m_function(descriptor, n, Side::Plus, *z, *depth)?;
                    t.row(&[
                        n.to_string(),
                        num(z.re),
                        num(z.im),
                        num(g.re),
                        num(g.im),
                        num(mm.re),
                        num(mm.im),
                        num(mp.re),
                        num(mp.im),
                    ]);
                }
            }
            let tables = if points.is_empty() { vec![] } else { vec![t.done()] };
            Ok(Output {
                result: json!({ "label": to_json(&label), "class_label": label.label() }),
                tables,
            })
        }
        Command::Moments { descriptor, jacobi, sites, ell_max } => {
            if *ell_max == 0 {
                return Err(Error::InvalidArgument("ell_max must be positive".into()));
            }
            let mut t = Table::new("moments.csv", "n,ell,re,im");
            let mut rows = Vec::new();
            match (descriptor, jacobi) {
                (Some(d), None) => {
                    for &n in sites {
                        for ell in 1..=*ell_max {
                            let m = power_diagonal(d, n, ell)?;
                            t.row(&[n.to_string(), ell.to_string(), num(m.re), num(m.im)]);
                            rows.push(json!({ "n": n, "ell": ell, "value": to_json(&m) }));
                        }
                    }
                }
                (None, Some(j)) => {
                    for &n in sites {
                        for ell in 1..=*ell_max {
                            let m = jacobi_moment(j, n, ell)?;
                            t.row(&[n.to_string(), ell.to_string(), num(m), num(0.0)]);
                            rows.push(json!({ "n": n, "ell": ell, "value": m }));
                        }
                    }
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "moments needs exactly one of `descriptor` and `jacobi`".into(),
                    ))
                }
            }
            Ok(Output { result: json!({ "moments": rows }), tables: vec![t.done()] })
        }
        Command::Ratio { descriptor, points, n_max, tol } => {
            let traces = points
                .par_iter()
                .map(|&z| ratio_trace(descriptor, z, *n_max, *tol))
                .collect::<Result<Vec<_>>>()?;
            let mut t = Table::new("ratio.csv", "point,n,re,im");
            let mut summary = Vec::new();
            for (i, (z, tr)) in points.iter().zip(&traces).enumerate() {
                for (n, r) in tr.ratios.iter().enumerate() {
                    t.row(&[i.to_string(), n.to_string(), num(r.re), num(r.im)]);
                }
                summary.push(json!({
                    "z": to_json(z),
                    "limit": to_json(&tr.limit),
                    "g": to_json(&tr.g(*z)),
                    "deviation": tr.deviation,
                    "converged": tr.converged,
                }));
            }
            Ok(Output { result: json!({ "points": summary, "tol": tol }), tables: vec![t.done()] })
        }
        Command::PearsonDefect { descriptor, n, a, s, grid } => {
            let g = grid.build()?;
            let reports = n
                .iter()
                .map(|&n| pearson_defect(descriptor, n, a, s, &g))
                .collect::<Result<Vec<_>>>()?;
            let mut t = Table::new("pearson.csv", "n,defect,plus_integral,minus_integral");
            for r in &reports {
                t.row(&[r.n.to_string(), num(r.defect), num(r.plus_integral), num(r.minus_integral)]);
            }
            Ok(Output { result: json!({ "reports": to_json(&reports) }), tables: vec![t.done()] })
        }
        Command::RightLimits { descriptor } => {
            let limits = right_limits(descriptor)?;
            Ok(Output { result: json!({ "count": limits.len(), "limits": to_json(&limits) }), tables: vec![] })
        }
        Command::SparseCheck { descriptor, config } => {
            let report = sparse_condition_check(descriptor, config)?;
            let mut t = Table::new("per_k.csv", "k,max_product");
            for d in &report.per_k {
                t.row(&[d.k.to_string(), num(d.max_product)]);
            }
            Ok(Output { result: to_json(&report), tables: vec![t.done()] })
        }
        Command::RandomExperiment { base, scale, distribution, seeds, grid } => {
            let g = grid.build()?;
            let report = random_experiment(base, scale, distribution, seeds, &g)?;
            let mut t = Table::new("seeds.csv", "seed,measure");
            for s in &report.per_seed {
                t.row(&[s.seed.to_string(), num(s.measure)]);
            }
            Ok(Output { result: to_json(&report), tables: vec![t.done()] })
        }
    }
}

/// Errors caused by the configuration rather than by the numerics.
pub fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidDescriptor(_)
            | Error::InvalidArgument(_)
            | Error::IndexOutOfRange { .. }
            | Error::Unsupported { .. }
            | Error::ModulusOutOfRange { .. }
    )
}
