use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use serde_json::{json, Value};

use toricprec_core::catalog;
use toricprec_core::io::{parse_f64_list, parse_rational_list, PolytopeDoc};
use toricprec_core::moment::{
    compare_moment_maps, lattice_distance_lift, mu_fs, mu_quot, EQUALITY_TOL, QUOT_TOL,
};
use toricprec_core::polyalg::{format_rational, rat, Rational};
use toricprec_core::polytope::LatticePolytope;
use toricprec_core::precision::{check_slp, solve_slp_weights, WeightSolution};
use toricprec_core::search::search_polygons;
use toricprec_core::statistics::{
    horn_matrix_slp, horn_structure_report, minimal_horn, mle_closed_form, mle_newton, verify_horn,
    HornMatrix, NEWTON_TOL,
};

use crate::args::{
    CatalogArgs, Cli, Command, HornCommand, MleArgs, MleMethodArg, MomentCommand, SearchCommand,
    SlpCommand,
};
use crate::report::{bracket, float, Outcome, Table};

const HORN_VERIFY_TOL: f64 = 1e-9;

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn rational_list(v: &[Rational]) -> String {
    bracket(v, format_rational)
}

fn float_list(v: &[f64]) -> String {
    bracket(v, float)
}

fn int_list(v: &[i64]) -> String {
    bracket(v, |x| x.to_string())
}

struct Loaded {
    path: PathBuf,
    polytope: LatticePolytope,
    weights: Option<Vec<Rational>>,
}

impl Loaded {
    fn weights_or_ones(&self) -> Vec<Rational> {
        self.weights
            .clone()
            .unwrap_or_else(|| vec![rat(1); self.polytope.num_points()])
    }

    fn input(&self) -> Value {
        json!({ "file": self.path.display().to_string() })
    }
}

fn load_polytope(path: &Path) -> Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = PolytopeDoc::from_json(&text)?;
    let (polytope, weights) = doc
        .load()
        .with_context(|| format!("loading {}", path.display()))?;
    Ok(Loaded {
        path: path.to_path_buf(),
        polytope,
        weights,
    })
}

fn load_horn(path: &Path) -> Result<HornMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing Horn matrix {}", path.display()))
}

fn polytope_summary(p: &LatticePolytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices(),
        "lattice_points": p.lattice_points(),
    })
}

/// Writes a JSON document to `output`, or returns it as the text rendering.
fn emit_document(
    command: &str,
    inputs: Value,
    doc: String,
    doc_value: Value,
    output: &Option<PathBuf>,
) -> Result<Outcome> {
    match output {
        Some(path) => {
            fs::write(path, format!("{doc}\n"))
                .with_context(|| format!("writing {}", path.display()))?;
            let text = Table::new().row("wrote", path.display()).render();
            Ok(Outcome::new(
                command,
                inputs,
                json!({ "written": path.display().to_string(), "document": doc_value }),
                text,
            ))
        }
        None => Ok(Outcome::new(
            command,
            inputs,
            json!({ "document": doc_value }),
            format!("{doc}\n"),
        )),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Catalog(a) => catalog_cmd(a),
        Command::Slp(SlpCommand::Check { file, weights }) => slp_check(file, weights.as_deref()),
        Command::Slp(SlpCommand::Weights { file }) => slp_weights(file),
        Command::Horn(h) => horn_cmd(h, cli),
        Command::Mle(a) => mle_cmd(a, cli.tol.unwrap_or(NEWTON_TOL)),
        Command::Moment(m) => moment_cmd(m, cli),
        Command::Search(SearchCommand::Polygons { max_coord }) => search_cmd(*max_coord),
    }
}

fn catalog_cmd(a: &CatalogArgs) -> Result<Outcome> {
    let params: Vec<&str> = a.params.iter().map(String::as_str).collect();
    let fixture = catalog::by_name(&a.name, &params)?;
    let doc = PolytopeDoc::from_fixture(&fixture);
    let inputs = json!({ "name": a.name, "params": a.params });
    let value = serde_json::to_value(&doc)?;
    emit_document("catalog", inputs, doc.to_json(), value, &a.output)
}

fn slp_check(file: &Path, weights: Option<&str>) -> Result<Outcome> {
    let l = load_polytope(file)?;
    let w = match weights {
        Some(s) => parse_rational_list(s)?,
        None => l.weights_or_ones(),
    };
    let r = check_slp(&l.polytope, &w)?;
    let c = r.constant_c.as_ref().map(format_rational);
    let text = Table::new()
        .row("n_P", int_list(&r.n_p))
        .row("weights", rational_list(&w))
        .row("beta_w", &r.beta_w)
        .row("constant", c.clone().unwrap_or_else(|| "-".into()))
        .row(
            "verdict",
            if r.verdict {
                "strict linear precision"
            } else {
                "no strict linear precision"
            },
        )
        .render();
    let mut inputs = l.input();
    inputs["weights"] = json!(rationals(&w));
    let outputs = json!({
        "polytope": polytope_summary(&l.polytope),
        "slp": serde_json::to_value(&r)?,
    });
    Ok(Outcome::new("slp check", inputs, outputs, text).verdict(r.verdict))
}

fn slp_weights(file: &Path) -> Result<Outcome> {
    let l = load_polytope(file)?;
    let sol = solve_slp_weights(&l.polytope);
    let (outputs, text) = match &sol {
        WeightSolution::Found(w) => (
            json!({ "feasible": true, "weights": rationals(w) }),
            Table::new().row("weights", rational_list(w)).render(),
        ),
        WeightSolution::NormalSumNonzero(n) => (
            json!({ "feasible": false, "reason": "normal_sum_nonzero", "n_P": n }),
            Table::new()
                .row("weights", "infeasible")
                .row("reason", format!("facet normals sum to {}", int_list(n)))
                .render(),
        ),
        WeightSolution::Infeasible => (
            json!({ "feasible": false, "reason": "linear_system_infeasible" }),
            Table::new()
                .row("weights", "infeasible")
                .row("reason", "no positive weights make beta_w constant")
                .render(),
        ),
    };
    Ok(Outcome::new("slp weights", l.input(), outputs, text).verdict(sol.weights().is_some()))
}

fn horn_text(h: &HornMatrix) -> String {
    let rows = h
        .rows()
        .iter()
        .map(|r| int_list(r))
        .collect::<Vec<_>>()
        .join("\n");
    Table::new()
        .row("rows", rows)
        .row("constants", rational_list(h.constants()))
        .render()
}

fn horn_cmd(cmd: &HornCommand, cli: &Cli) -> Result<Outcome> {
    match cmd {
        HornCommand::Build { file, output } => {
            let l = load_polytope(file)?;
            let w = match &l.weights {
                Some(w) => w.clone(),
                None => solve_slp_weights(&l.polytope)
                    .weights()
                    .ok_or_else(|| anyhow!("no weights with strict linear precision exist"))?
                    .to_vec(),
            };
            let h = horn_matrix_slp(&l.polytope, &w)?;
            let doc = serde_json::to_string_pretty(&h)?;
            let mut inputs = l.input();
            inputs["weights"] = json!(rationals(&w));
            let mut out =
                emit_document("horn build", inputs, doc, serde_json::to_value(&h)?, output)?;
            if output.is_some() {
                out.text.push_str(&horn_text(&h));
            }
            Ok(out)
        }
        HornCommand::Minimize { horn, output } => {
            let h = load_horn(horn)?;
            let m = minimal_horn(&h)?;
            let doc = serde_json::to_string_pretty(&m)?;
            let inputs = json!({ "horn": horn.display().to_string() });
            let mut out = emit_document(
                "horn minimize",
                inputs,
                doc,
                serde_json::to_value(&m)?,
                output,
            )?;
            if output.is_some() {
                out.text.push_str(&horn_text(&m));
            }
            Ok(out)
        }
        HornCommand::Verify { horn, file, trials } => {
            let h = load_horn(horn)?;
            let l = load_polytope(file)?;
            let w = l.weights_or_ones();
            let tol = cli.tol.unwrap_or(HORN_VERIFY_TOL);
            let v = verify_horn(&h, &l.polytope, &w, *trials, tol, cli.seed)?;
            let failures = v.trials.iter().filter(|t| !t.passed).count();
            let text = Table::new()
                .row("mode", format!("{:?}", v.mode).to_lowercase())
                .row("trials", v.trials.len())
                .row("failures", failures)
                .row("max residual", format!("{:e}", v.max_residual))
                .row("tolerance", format!("{tol:e}"))
                .row("verdict", if v.passed { "pass" } else { "fail" })
                .render();
            let inputs = json!({
                "horn": horn.display().to_string(),
                "file": file.display().to_string(),
                "trials": trials,
                "tol": tol,
            });
            Ok(
                Outcome::new("horn verify", inputs, serde_json::to_value(&v)?, text)
                    .verdict(v.passed),
            )
        }
        HornCommand::Explain { horn, file } => {
            let h = load_horn(horn)?;
            let l = load_polytope(file)?;
            let r = horn_structure_report(&h, &l.polytope)?;
            let mut t = Table::new()
                .row("nonnegative rows", r.nonnegative_rows.len())
                .row("negative rows", r.negative_rows.len())
                .row("mixed rows", r.mixed_rows.len())
                .row(
                    "distance block",
                    if r.nonnegative_block_is_distance_matrix {
                        "equal"
                    } else {
                        "different"
                    },
                );
            for c in &r.collections {
                let m = match (c.matching_row, c.proportional_row) {
                    (Some(i), _) => format!("negative row {i}"),
                    (None, Some(i)) => format!("negative row {i}, scaled"),
                    (None, None) => "no matching row".into(),
                };
                t = t.row(
                    &format!(
                        "collection {}",
                        int_list(&c.collection.iter().map(|&x| x as i64).collect::<Vec<_>>())
                    ),
                    format!("{} -> {m}", int_list(&c.negated_sum)),
                );
            }
            let inputs =
                json!({ "horn": horn.display().to_string(), "file": file.display().to_string() });
            Ok(Outcome::new(
                "horn explain",
                inputs,
                serde_json::to_value(&r)?,
                t.render(),
            ))
        }
    }
}

fn mle_cmd(a: &MleArgs, tol: f64) -> Result<Outcome> {
    let l = load_polytope(&a.file)?;
    let w = l.weights_or_ones();
    let u = parse_rational_list(&a.u)?;
    let closed = match a.method {
        MleMethodArg::ClosedForm => true,
        MleMethodArg::Newton => false,
        MleMethodArg::Auto => check_slp(&l.polytope, &w)?.verdict,
    };
    let mut inputs = l.input();
    inputs["u"] = json!(rationals(&u));
    inputs["weights"] = json!(rationals(&w));
    let (outputs, text) = if closed {
        let r = mle_closed_form(&l.polytope, &w, &u)?;
        (
            json!({
                "method": "closed_form",
                "estimate": rationals(&r.estimate),
                "sufficient_statistic": rationals(&r.sufficient_statistic),
                "residual": format_rational(&r.residual),
                "iterations": 0,
            }),
            Table::new()
                .row("method", "closed form")
                .row("estimate", rational_list(&r.estimate))
                .row("tau_A(u)", rational_list(&r.sufficient_statistic))
                .row("residual", format_rational(&r.residual))
                .render(),
        )
    } else {
        inputs["tol"] = json!(tol);
        let r = mle_newton(&l.polytope, &w, &u, tol)?;
        (
            json!({
                "method": "newton",
                "estimate": r.estimate,
                "sufficient_statistic": r.sufficient_statistic,
                "residual": r.residual,
                "iterations": r.iterations,
            }),
            Table::new()
                .row("method", "newton")
                .row("estimate", float_list(&r.estimate))
                .row("tau_A(u)", float_list(&r.sufficient_statistic))
                .row("residual", format!("{:e}", r.residual))
                .row("iterations", r.iterations)
                .render(),
        )
    };
    Ok(Outcome::new("mle", inputs, outputs, text))
}

fn moment_cmd(cmd: &MomentCommand, cli: &Cli) -> Result<Outcome> {
    match cmd {
        MomentCommand::Compare { file, samples, csv } => {
            let l = load_polytope(file)?;
            let w = l.weights_or_ones();
            let tol = cli.tol.unwrap_or(EQUALITY_TOL);
            let c = compare_moment_maps(&l.polytope, &w, *samples, tol, cli.seed)?;
            if let Some(path) = csv {
                let d = l.polytope.dim();
                let mut out = (1..=d)
                    .map(|k| format!("q{k}"))
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(",gap\n");
                for (q, g) in c.sample_points.iter().zip(&c.gaps) {
                    let cells: Vec<String> = q.iter().map(|x| x.to_string()).collect();
                    out.push_str(&format!("{},{g}\n", cells.join(",")));
                }
                fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
            }
            let text = Table::new()
                .row("samples", c.sample_points.len())
                .row("max gap", format!("{:e}", c.max_gap))
                .row("tolerance", format!("{tol:e}"))
                .row("maps agree", c.maps_agree)
                .row("strict linear precision", c.slp_verdict)
                .render();
            let mut inputs = l.input();
            inputs["samples"] = json!(samples);
            inputs["tol"] = json!(tol);
            inputs["weights"] = json!(rationals(&w));
            let agree = c.maps_agree;
            Ok(
                Outcome::new("moment compare", inputs, serde_json::to_value(&c)?, text)
                    .verdict(agree),
            )
        }
        MomentCommand::Fs { file, q } => {
            let l = load_polytope(file)?;
            let w = l.weights_or_ones();
            let qv = parse_f64_list(q)?;
            let v = mu_fs(&l.polytope, &w, &qv)?;
            let mut inputs = l.input();
            inputs["q"] = json!(qv);
            inputs["weights"] = json!(rationals(&w));
            let text = Table::new().row("mu_FS", float_list(&v)).render();
            Ok(Outcome::new(
                "moment fs",
                inputs,
                json!({ "point": v }),
                text,
            ))
        }
        MomentCommand::Quot { file, q } => {
            let l = load_polytope(file)?;
            let qv = parse_f64_list(q)?;
            let tol = cli.tol.unwrap_or(QUOT_TOL);
            let v = mu_quot(&l.polytope, &qv, tol)?;
            let mut inputs = l.input();
            inputs["q"] = json!(qv);
            inputs["tol"] = json!(tol);
            let text = Table::new().row("mu_quot", float_list(&v)).render();
            Ok(Outcome::new(
                "moment quot",
                inputs,
                json!({ "point": v }),
                text,
            ))
        }
        MomentCommand::Lift { file, p } => {
            let l = load_polytope(file)?;
            let pv = parse_rational_list(p)?;
            let v = lattice_distance_lift(&l.polytope, &pv)?;
            let mut inputs = l.input();
            inputs["p"] = json!(rationals(&pv));
            let text = Table::new().row("|z_i|^2", rational_list(&v)).render();
            Ok(Outcome::new(
                "moment lift",
                inputs,
                json!({ "moduli": rationals(&v) }),
                text,
            ))
        }
    }
}

fn search_cmd(max_coord: i64) -> Result<Outcome> {
    let r = search_polygons(max_coord)?;
    let ok = r.all_positive_classified && r.all_trapezoids_negative;
    let mut t = Table::new()
        .row("box", format!("[0, {max_coord}]^2"))
        .row("polygons", r.polygons)
        .row("normal sum zero", r.normal_sum_zero)
        .row("slp positive", r.slp_positive.len());
    for (shape, n) in &r.shape_counts {
        t = t.row(&format!("  {shape}"), n);
    }
    t = t
        .row("all classified", r.all_positive_classified)
        .row("trapezoids checked", r.trapezoids.len())
        .row("trapezoids negative", r.all_trapezoids_negative);
    let inputs = json!({ "max_coord": max_coord });
    Ok(Outcome::new(
        "search polygons",
        inputs,
        serde_json::to_value(&r)?,
        t.render(),
    )
    .verdict(ok))
}
