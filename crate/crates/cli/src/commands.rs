use std::path::Path;

use calibra::calib::{catalog_by_name, comass_estimate, CatalogForm};
use calibra::forms::{FloatForm, FormDocument};
use calibra::scalar::{Rational, Scalar};
use calibra::slag::{
    complex_det, embed_complex, omega_residuals, phase_verdict, preserves_omega_form, slag_squeezing_witness,
    two_phase_implies_full, ComplexMatrix,
};
use calibra::squeeze::{
    complex_plane, coordinate_plane, lagrangian_plane, nonsqueezing_sweep, rigidity_witness_symplectic,
    squeeze_search, GroupSpec,
};
use calibra::stab::classify_power_preserver;
use calibra::symplin::{
    classify_map, k_width_ellipsoid, linear_symplectic_width, symplectic_residuals, symplectic_spectrum,
    williamson_with, Ellipsoid, SkewSolver,
};
use calibra::linalg;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, Common, FormSource, GroupKind, Solver, SqueezeTarget, WitnessKind};
use crate::io::{CliError, CliResult, Inputs, Report};

pub fn run(command: &Command, common: &Common, inputs: &mut Inputs) -> CliResult<Report> {
    match command {
        Command::Williamson { matrix, solver } => {
            let m = read_real_matrix(inputs, matrix)?;
            let solver = match solver {
                Solver::Hermitian => SkewSolver::Hermitian,
                Solver::Symmetric => SkewSolver::Symmetric,
            };
            let w = williamson_with(&m, solver)?;
            let (rj, rm) = w.residuals(&m);
            let mut value = crate::io::to_value(&w)?;
            value["residuals"] = json!({ "symplectic": rj, "normal_form": rm });
            Ok(Report { json: value, csv: None })
        }
        Command::Spectrum { ellipsoid } => {
            let e: Ellipsoid = read_library(inputs, ellipsoid)?;
            Report::new(&symplectic_spectrum(&e)?)
        }
        Command::Width { ellipsoid, k } => {
            let e: Ellipsoid = read_library(inputs, ellipsoid)?;
            let width = linear_symplectic_width(&e)?;
            let mut value = json!({ "width": width });
            if let Some(k) = k {
                value["k"] = json!(k);
                value["k_width"] = json!(k_width_ellipsoid(&e, *k)?);
            }
            Ok(Report { json: value, csv: None })
        }
        Command::Classify { matrix } => {
            let a = read_real_matrix(inputs, matrix)?;
            let class = classify_map(&a, common.tol)?;
            let (plus, minus) = symplectic_residuals(&a)?;
            Report::new(&json!({ "class": class, "symplectic_residual": plus, "anti_symplectic_residual": minus }))
        }
        Command::PowerClassify { matrix, k } => {
            let a = read_real_matrix(inputs, matrix)?;
            Report::new(&classify_power_preserver(&a, *k, common.tol)?)
        }
        Command::Comass { form, iters } => {
            let alpha = real_form(inputs, form)?;
            let report = comass_estimate(&alpha, common.restarts, common.seed, iters.unwrap_or(common.budget))?;
            #[derive(Serialize)]
            struct Row {
                restart: usize,
                value: f64,
            }
            let rows: Vec<Row> = report.restart_values.iter().enumerate().map(|(restart, &value)| Row { restart, value }).collect();
            Report::with_rows(&report, &rows)
        }
        Command::Squeeze { target } => {
            let (group, basis) = squeeze_target(inputs, target)?;
            let result = squeeze_search(&group, &basis, target.radius, common.restarts, common.seed, common.budget)?;
            Report::with_rows(&result, &result.restarts)
        }
        Command::Sweep { target, trials } => {
            let (group, basis) = squeeze_target(inputs, target)?;
            Report::new(&nonsqueezing_sweep(&group, &basis, target.radius, *trials, common.seed)?)
        }
        Command::Witness { matrix, kind } => {
            let psi = read_real_matrix(inputs, matrix)?;
            match kind {
                WitnessKind::Symplectic => {
                    let w = rigidity_witness_symplectic(&psi, common.tol, common.seed)?;
                    Report::new(&json!({ "found": w.is_some(), "witness": w }))
                }
                WitnessKind::Slag => {
                    let w = slag_squeezing_witness(&psi, common.tol)?;
                    Report::new(&json!({ "found": true, "witness": w }))
                }
            }
        }
        Command::SlagCheck { matrix, phases } => {
            let a = read_real_matrix(inputs, matrix)?;
            let preserves = preserves_omega_form(&a, common.tol)?;
            let residuals = omega_residuals(&a, common.tol)?;
            let phase = phase_verdict(&a, common.tol)?;
            let det = complex_det(&a, common.tol)?.map(|z| [z.re, z.im]);
            let mut value = json!({
                "preserves_omega": preserves,
                "residuals": residuals,
                "phase": phase,
                "complex_det": det,
            });
            if let Some(p) = phases {
                value["two_phase"] = json!(two_phase_implies_full(&a, p[0], p[1], common.tol)?);
            }
            Ok(Report { json: value, csv: None })
        }
        Command::FormsEval { form, vectors, exact } => forms_eval(inputs, form, vectors, *exact),
    }
}

/// Deserializes a library type, mapping validation failures to library errors.
fn read_library<T: serde::de::DeserializeOwned>(inputs: &mut Inputs, path: &Path) -> CliResult<T> {
    let value: Value = inputs.read_json(path)?;
    serde_json::from_value(value).map_err(|e| CliError::Input(format!("invalid document {}: {e}", path.display())))
}

fn matrix_from_value(value: &Value) -> CliResult<DMatrix<f64>> {
    if value.is_object() {
        let m: ComplexMatrix = serde_json::from_value(value.clone())
            .map_err(|e| CliError::Input(format!("invalid complex matrix: {e}")))?;
        return Ok(embed_complex(&m));
    }
    let rows: Vec<Vec<f64>> =
        serde_json::from_value(value.clone()).map_err(|e| CliError::Input(format!("invalid matrix rows: {e}")))?;
    Ok(linalg::from_rows(&rows)?)
}

/// Rows of a real matrix, or `{"re", "im"}` embedded as a real `2n × 2n`.
fn read_real_matrix(inputs: &mut Inputs, path: &Path) -> CliResult<DMatrix<f64>> {
    let value: Value = inputs.read_json(path)?;
    matrix_from_value(&value)
}

fn catalog_form(form: &FormSource) -> CliResult<CatalogForm> {
    let name = form.form.as_deref().expect("clap requires --form or --form-file");
    let dim = match (form.dim, name.trim()) {
        (Some(d), _) => d,
        (None, n) if n.starts_with("g2_") => 7,
        (None, n) if n.starts_with("spin7") => 8,
        (None, _) => return Err(CliError::Input(format!("--dim is required for {name}"))),
    };
    Ok(catalog_by_name(name, dim)?)
}

fn real_form(inputs: &mut Inputs, form: &FormSource) -> CliResult<FloatForm> {
    if let Some(path) = &form.form_file {
        let doc: FormDocument = inputs.read_json(path)?;
        return Ok(doc.to_form::<f64>()?);
    }
    match catalog_form(form)? {
        CatalogForm::Real(f) => Ok(f),
        CatalogForm::Complex(_) => Err(CliError::Input("a real-valued form is required here".into())),
    }
}

fn forms_eval(inputs: &mut Inputs, form: &FormSource, vectors: &Path, exact: bool) -> CliResult<Report> {
    let raw: Vec<Vec<Value>> = inputs.read_json(vectors)?;
    if exact {
        let doc: FormDocument = match &form.form_file {
            Some(path) => inputs.read_json(path)?,
            None => return Err(CliError::Input("--exact needs --form-file".into())),
        };
        let alpha = doc.to_complex::<Rational>()?;
        let vs = parse_vectors::<Rational>(&raw)?;
        let (re, im) = alpha.evaluate(&vs)?;
        return Report::new(&json!({ "re": re.to_json(), "im": im.to_json() }));
    }
    let vs = parse_vectors::<f64>(&raw)?;
    let alpha = match &form.form_file {
        Some(path) => {
            let doc: FormDocument = inputs.read_json(path)?;
            doc.to_complex::<f64>()?
        }
        None => match catalog_form(form)? {
            CatalogForm::Real(f) => calibra::forms::ComplexKForm::from_real(f),
            CatalogForm::Complex(c) => c,
        },
    };
    let (re, im) = alpha.evaluate(&vs)?;
    Report::new(&json!({ "re": re, "im": im }))
}

fn parse_vectors<S: Scalar>(raw: &[Vec<Value>]) -> CliResult<Vec<DVector<S>>> {
    raw.iter()
        .map(|v| {
            let entries = v.iter().map(S::from_json).collect::<calibra::Result<Vec<S>>>()?;
            Ok(DVector::from_vec(entries))
        })
        .collect()
}

fn required(value: Option<usize>, flag: &str, group: &str) -> CliResult<usize> {
    value.ok_or_else(|| CliError::Input(format!("--{flag} is required for --group {group}")))
}

fn squeeze_target(inputs: &mut Inputs, target: &SqueezeTarget) -> CliResult<(GroupSpec, DMatrix<f64>)> {
    let group = match target.group {
        GroupKind::Sp => GroupSpec::Symplectic { n: required(target.n, "n", "sp")? },
        GroupKind::Power => {
            GroupSpec::PowerStabilizer { n: required(target.n, "n", "power")?, k: required(target.k, "k", "power")? }
        }
        GroupKind::Slnc => GroupSpec::SlnC { n: required(target.n, "n", "slnc")? },
        GroupKind::Iso => GroupSpec::Isometry { dim: required(target.dim.or(target.n.map(|n| 2 * n)), "dim", "iso")? },
        GroupKind::Custom => {
            let path = target
                .generators
                .as_ref()
                .ok_or_else(|| CliError::Input("--generators is required for --group custom".into()))?;
            let raw: Vec<Value> = inputs.read_json(path)?;
            let generators = raw.iter().map(matrix_from_value).collect::<CliResult<Vec<_>>>()?;
            GroupSpec::Custom { generators }
        }
    };
    group.validate()?;
    let dim = group.dim();
    let half = |name: &str| -> CliResult<usize> {
        if dim % 2 != 0 {
            return Err(CliError::Input(format!("cylinder `{name}` needs an even dimension, got {dim}")));
        }
        Ok(dim / 2)
    };
    let spec = target.cylinder.trim();
    let parse_k = |s: &str| -> CliResult<usize> {
        s.parse().map_err(|_| CliError::Input(format!("bad plane dimension in `{spec}`")))
    };
    let basis = if spec == "symplectic" {
        complex_plane(half(spec)?, 1)
    } else if spec == "lagrangian" {
        lagrangian_plane(half(spec)?)
    } else if let Some(k) = spec.strip_prefix("complex:") {
        let n = half(spec)?;
        let k = parse_k(k)?;
        if k == 0 || k > n {
            return Err(CliError::Input(format!("complex plane dimension {k} must lie in 1..={n}")));
        }
        complex_plane(n, k)
    } else if let Some(k) = spec.strip_prefix("coordinate:") {
        let k = parse_k(k)?;
        if k == 0 || k > dim {
            return Err(CliError::Input(format!("coordinate plane dimension {k} must lie in 1..={dim}")));
        }
        coordinate_plane(dim, k)
    } else {
        read_real_matrix(inputs, Path::new(spec))?
    };
    Ok((group, basis))
}
