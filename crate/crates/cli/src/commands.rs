use std::path::Path;

use divgeo::bose_geometry::geometry_report;
use divgeo::bose_model::{
    fit, sample_mean_occupations, BoseModelPoint, EnergySpectrum, FitOptions, OccupationSequence,
};
use divgeo::density_core::{
    pauli_z, relative_entropy, Basis, CMatrix, DensityMatrix, HermitianOperator,
};
use divgeo::quantum_model::{
    border_probe, canonical_border_path, conditional_manifold_point, conditional_objectives,
    conditioned_weight, project, pythagoras_conditional, pythagoras_model_with,
    ExponentialFamilyModel, ProjectOptions,
};
use divgeo::schema::{
    scan_triples, BoseFitJson, BoseInputJson, ComplexMatrixJson, ModelJson, ProjectionJson,
    RelativeEntropyJson, SelectionJson, WeakValueJson,
};
use divgeo::weak_measurement::{amplification_scan, delta_family, weak_value, PrePostSelection};
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{parse_grid, read_json, read_matrix, read_vector, write_report, Failure, Outcome};
use crate::{Cli, Command, Family, PathFamily};

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn fit_options(cli: &Cli) -> FitOptions {
    let d = FitOptions::default();
    FitOptions {
        tolerance: cli.tol.unwrap_or(d.tolerance),
        max_iterations: cli.max_iter.unwrap_or(d.max_iterations),
    }
}

fn project_options(cli: &Cli) -> ProjectOptions {
    let d = ProjectOptions::default();
    ProjectOptions {
        tolerance: cli.tol.unwrap_or(d.tolerance),
        max_iterations: cli.max_iter.unwrap_or(d.max_iterations),
    }
}

fn check_config(cli: &Cli) -> Outcome<()> {
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::config(format!(
                "--tol must be positive, got {tol}"
            )));
        }
    }
    if cli.max_iter == Some(0) {
        return Err(Failure::config("--max-iter must be positive"));
    }
    Ok(())
}

/// Model file after shape checks; generators are validated as operators later.
struct RawModel {
    generators: Vec<CMatrix>,
    theta: Vec<f64>,
}

fn read_model(path: &Path) -> Outcome<RawModel> {
    let m: ModelJson = read_json(path)?;
    let generators = m
        .generators
        .iter()
        .map(|g| {
            let mat = g.to_matrix().map_err(|e| Failure::parse(path, e))?;
            if mat.nrows() != m.dim {
                return Err(Failure::parse(
                    path,
                    format!(
                        "generator of dimension {} in a model of dimension {}",
                        mat.nrows(),
                        m.dim
                    ),
                ));
            }
            Ok(mat)
        })
        .collect::<Outcome<Vec<_>>>()?;
    if !m.theta.is_empty() && m.theta.len() != generators.len() {
        return Err(Failure::parse(
            path,
            format!(
                "{} parameters for {} generators",
                m.theta.len(),
                generators.len()
            ),
        ));
    }
    Ok(RawModel {
        generators,
        theta: m.theta,
    })
}

impl RawModel {
    fn build(self) -> Outcome<(ExponentialFamilyModel, Vec<f64>)> {
        let k = self.generators.len();
        let generators = self
            .generators
            .into_iter()
            .map(HermitianOperator::new)
            .collect::<divgeo::Result<Vec<_>>>()?;
        let theta = if self.theta.is_empty() {
            vec![0.0; k]
        } else {
            self.theta
        };
        Ok((ExponentialFamilyModel::new(generators)?, theta))
    }
}

fn read_basis(path: Option<&Path>) -> Outcome<Option<CMatrix>> {
    path.map(read_matrix).transpose()
}

fn build_basis(raw: Option<CMatrix>, dim: usize) -> Outcome<Basis> {
    Ok(match raw {
        Some(m) => Basis::new(m)?,
        None => Basis::standard(dim),
    })
}

fn state(m: CMatrix) -> Outcome<DensityMatrix> {
    Ok(DensityMatrix::new(m)?)
}

fn bose_input(path: &Path) -> Outcome<(BoseInputJson, EnergySpectrum)> {
    let input: BoseInputJson = read_json(path)?;
    let spectrum = EnergySpectrum::new(input.spectrum.clone())?;
    Ok((input, spectrum))
}

pub fn run(cli: &Cli) -> Outcome<()> {
    check_config(cli)?;
    let report = match &cli.command {
        Command::FitBose { input } => {
            let (data, spectrum) = bose_input(input)?;
            let occupations = data
                .occupations
                .clone()
                .ok_or_else(|| Failure::parse(input, "fit-bose needs \"occupations\""))?;
            if cli.validate_only {
                return validated(cli);
            }
            let n = OccupationSequence::new(occupations)?;
            let report = fit(&n, &spectrum, &fit_options(cli))?;
            log::info!("fit converged after {} iterations", report.iterations);
            to_value(&BoseFitJson::from_report(&report, data.shots))
        }
        Command::BoseGeometry { input, beta, mu } => {
            let (data, spectrum) = bose_input(input)?;
            let given = match (beta, mu) {
                (Some(b), Some(m)) => Some((*b, *m)),
                _ => data.beta.zip(data.mu),
            };
            if given.is_none() && data.occupations.is_none() {
                return Err(Failure::parse(
                    input,
                    "need a point (beta, mu) or occupations to fit",
                ));
            }
            if cli.validate_only {
                return validated(cli);
            }
            let n = match &data.occupations {
                Some(o) => OccupationSequence::new(o.clone())?,
                None => OccupationSequence::new(vec![0.0; spectrum.len()])?,
            };
            let point = match given {
                Some((b, m)) => BoseModelPoint::new(b, m)?,
                None => fit(&n, &spectrum, &fit_options(cli))?.point,
            };
            let mut report = to_value(&geometry_report(&n, &spectrum, &point)?);
            report["beta"] = json!(point.beta);
            report["mu"] = json!(point.mu);
            report
        }
        Command::SampleBose { input, shots } => {
            let (data, spectrum) = bose_input(input)?;
            let (beta, mu) = data
                .beta
                .zip(data.mu)
                .ok_or_else(|| Failure::parse(input, "sample-bose needs \"beta\" and \"mu\""))?;
            if *shots == 0 {
                return Err(Failure::config("--shots must be positive"));
            }
            if cli.validate_only {
                return validated(cli);
            }
            let point = BoseModelPoint::new(beta, mu)?;
            let mean = sample_mean_occupations(&spectrum, &point, *shots, cli.seed)?;
            to_value(&BoseInputJson {
                spectrum: data.spectrum,
                occupations: Some(mean.counts().to_vec()),
                shots: Some(*shots as u64),
                beta: Some(beta),
                mu: Some(mu),
            })
        }
        Command::Relent { sigma, rho } => {
            let (s, r) = (read_matrix(sigma)?, read_matrix(rho)?);
            if cli.validate_only {
                return validated(cli);
            }
            let divergence = relative_entropy(&state(s)?, &state(r)?)?;
            to_value(&RelativeEntropyJson { divergence })
        }
        Command::Qproject { sigma, model } => {
            let (s, m) = (read_matrix(sigma)?, read_model(model)?);
            if cli.validate_only {
                return validated(cli);
            }
            let (model, _) = m.build()?;
            let report = project(&state(s)?, &model, &project_options(cli))?;
            to_value(&ProjectionJson::from(&report))
        }
        Command::Pythagoras {
            sigma,
            rho,
            model,
            basis,
        } => {
            let s = read_matrix(sigma)?;
            let b = read_basis(basis.basis.as_deref())?;
            match (rho, model) {
                (Some(rho), _) => {
                    let r = read_matrix(rho)?;
                    if cli.validate_only {
                        return validated(cli);
                    }
                    let basis = build_basis(b, s.nrows())?;
                    to_value(&pythagoras_conditional(&state(s)?, &state(r)?, &basis)?)
                }
                (None, Some(model)) => {
                    let m = read_model(model)?;
                    if cli.validate_only {
                        return validated(cli);
                    }
                    let (model, theta) = m.build()?;
                    let sigma = state(s)?;
                    let report = project(&sigma, &model, &project_options(cli))?;
                    let mut out =
                        to_value(&pythagoras_model_with(&sigma, &report, &model, &theta)?);
                    out["theta_hat"] = json!(report.theta_hat);
                    out
                }
                (None, None) => unreachable!("clap requires --rho or --model"),
            }
        }
        Command::CondManifold {
            model,
            sigma,
            basis,
        } => {
            let m = read_model(model)?;
            let s = sigma.as_deref().map(read_matrix).transpose()?;
            let b = read_basis(basis.basis.as_deref())?;
            if cli.validate_only {
                return validated(cli);
            }
            let (model, theta) = m.build()?;
            let basis = build_basis(b, model.dim())?;
            let rho_c = conditional_manifold_point(&model, &theta, &basis)?;
            let mut out = json!({ "rho_c": ComplexMatrixJson::from(rho_c.matrix()) });
            if let Some(s) = s {
                let o = conditional_objectives(&state(s)?, &model, &theta, &basis)?;
                out["conditioned"] = json!(o.conditioned);
                out["full"] = json!(o.full);
                out["offset"] = json!(o.offset);
            }
            out
        }
        Command::BorderProbe {
            sigma,
            path_family,
            t_grid,
        } => {
            let s = read_matrix(sigma)?;
            let grid = parse_grid(t_grid)?;
            if cli.validate_only {
                return validated(cli);
            }
            let sigma = state(s)?;
            let basis = Basis::standard(sigma.dim());
            let weight = conditioned_weight(&sigma, &basis, 0)?;
            let rows = match path_family {
                PathFamily::Canonical => {
                    border_probe(&sigma, canonical_border_path(sigma.dim()), &grid)?
                }
            };
            let rows: Vec<[f64; 3]> = rows
                .iter()
                .map(|&(t, d)| [t, d, d + weight * t.ln()])
                .collect();
            json!({ "weight": weight, "rows": rows })
        }
        Command::WeakValue {
            input,
            pre,
            post,
            op,
        } => {
            let (pre, post) = match (input, pre, post) {
                (Some(path), _, _) => {
                    let sel: SelectionJson = read_json(path)?;
                    let pre = sel.pre.to_vector().map_err(|e| Failure::parse(path, e))?;
                    let post = sel.post.to_vector().map_err(|e| Failure::parse(path, e))?;
                    (pre, post)
                }
                (None, Some(pre), Some(post)) => (read_vector(pre)?, read_vector(post)?),
                _ => unreachable!("clap requires a selection"),
            };
            let c = read_matrix(op)?;
            if cli.validate_only {
                return validated(cli);
            }
            let selection = PrePostSelection::new(&pre, &post)?;
            let w = weak_value(&selection, &HermitianOperator::new(c)?)?;
            to_value(&WeakValueJson::from(&w))
        }
        Command::AmpScan { family, op, eps } => {
            let c = op.as_deref().map(read_matrix).transpose()?;
            let eps = parse_grid(eps)?;
            if cli.validate_only {
                return validated(cli);
            }
            let c = match c {
                Some(m) => HermitianOperator::new(m)?,
                None => pauli_z(),
            };
            let rows = match family {
                Family::Delta => amplification_scan(|e| delta_family(1.0 - e), &c, &eps)?,
            };
            to_value(&scan_triples(&rows))
        }
    };
    write_report(&report, cli.out.as_ref())
}

fn validated(cli: &Cli) -> Outcome<()> {
    log::info!("inputs are valid; skipping computation");
    write_report(&json!({ "valid": true }), cli.out.as_ref())
}
