//! Command-line front end: parses flags and optional config files, runs the
//! verification commands, and emits deterministic machine-readable reports.
//!
//! Exit codes: 0 = every verdict passed, 1 = a verified claim failed,
//! 2 = invalid input. Nothing else.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use trispin::config::{self, OutputFormat, PartialConfig, RunConfig};
use trispin::exclusion::{
    born_probability, build_preparations, exclusion_basis, find_exclusion_matching,
    identity_mismatch_probability, identity_pairing_probabilities, pbr_two_qubit_protocol,
    probability_table, theta_grid, MATCHED_PROBABILITY_TOL, ZERO_AMPLITUDE_TOL,
};
use trispin::hamiltonian::{
    analytic_spectrum, coupling_audit, degeneracy_report, explicit_matrix, spectrum_audit,
    verify_builder, Collision, CouplingConfig, BUILDER_TOL,
};
use trispin::linalg::{hermitian_eigendecomposition, OperatorMatrix, StateVector};
use trispin::ontic::{
    build_overlap_toy_model, build_psi_ontic_model, consistency_check, forbidden_outcome_bound,
    model_to_node, ConsistencyReport,
};
use trispin::report::{csv_table, CsvValue, Node};
use trispin::suite::{report_node, run_all, SuiteOptions};
use trispin::{Error, Result};

#[derive(Parser)]
#[command(
    name = "trispin",
    version,
    about = "Verifies a three-spin exclusion measurement: Hamiltonian structure, closed-form spectrum, exclusion matchings, and the overlap contradiction bound."
)]
struct Cli {
    /// Config file (flat key=value lines or JSON); flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Report format: json (default) or csv (exclusion scans only).
    #[arg(long, global = true, value_name = "FORMAT")]
    output: Option<String>,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Master random seed for everything randomized.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the Hamiltonian at one parameter point: builder agreement,
    /// certified spectrum, coupling audit, degeneracy report.
    Hamiltonian {
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Certify the exclusion structure at one angle or across a θ grid.
    Exclusion {
        /// Preparation angle in radians, strictly inside (0, pi/2).
        #[arg(long)]
        theta: Option<f64>,
        /// Scan this many equally spaced angles inside (0, pi/2) instead.
        #[arg(long, conflicts_with = "theta")]
        grid: Option<usize>,
    },
    /// Verify the two-qubit exclusion protocol.
    Pbr2,
    /// Build the ontological models, check consistency against the quantum
    /// statistics, and run the seeded Monte Carlo.
    Ontic {
        /// Per-party overlap mass in (0, 1].
        #[arg(long)]
        q: Option<f64>,
        /// Monte-Carlo sample count.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Run the whole verification suite (checks 1-8).
    AllChecks {
        /// Monte-Carlo sample count for the fidelity check.
        #[arg(long)]
        samples: Option<u64>,
        /// Perturb reference-matrix entry ROW,COL (1-based) by DELTA, so a
        /// corrupted reference must flip the verdict (mutation test).
        #[arg(long, value_name = "ROW,COL,DELTA")]
        inject_matrix_error: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(error) => {
            eprintln!("error: {error}");
            std::process::exit(exit_code_for(&error));
        }
    }
}

fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::InvalidParameter { .. } | Error::Parse(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<i32> {
    let file_config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter {
                name: "config",
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            config::parse_config(&text)?
        }
        None => PartialConfig::default(),
    };

    let mut cli_partial = PartialConfig {
        seed: cli.seed,
        output: match &cli.output {
            Some(s) => Some(s.parse()?),
            None => None,
        },
        ..PartialConfig::default()
    };

    let mut single_theta_requested = false;
    let mut inject: Option<(usize, usize, f64)> = None;
    match &cli.command {
        Command::Hamiltonian { a, b, c } => {
            cli_partial.a = *a;
            cli_partial.b = *b;
            cli_partial.c = *c;
        }
        Command::Exclusion { theta, grid } => {
            cli_partial.theta = *theta;
            cli_partial.grid = *grid;
            single_theta_requested = theta.is_some();
        }
        Command::Pbr2 => {}
        Command::Ontic { q, samples } => {
            cli_partial.q = *q;
            cli_partial.samples = *samples;
        }
        Command::AllChecks {
            samples,
            inject_matrix_error,
        } => {
            cli_partial.samples = *samples;
            if let Some(raw) = inject_matrix_error {
                inject = Some(parse_injection(raw)?);
            }
        }
    }

    let resolved = config::resolve(file_config.merged_with(cli_partial))?;

    if resolved.output == OutputFormat::Csv && !matches!(cli.command, Command::Exclusion { .. }) {
        return Err(Error::InvalidParameter {
            name: "output",
            message: "csv output is only available for exclusion theta scans".to_string(),
        });
    }

    let (text, verdict) = match cli.command {
        Command::Hamiltonian { .. } => {
            let (node, verdict) = cmd_hamiltonian(&resolved)?;
            (node.to_json()?, verdict)
        }
        Command::Exclusion { .. } => cmd_exclusion(&resolved, single_theta_requested)?,
        Command::Pbr2 => {
            let (node, verdict) = cmd_pbr2()?;
            (node.to_json()?, verdict)
        }
        Command::Ontic { .. } => {
            let (node, verdict) = cmd_ontic(&resolved)?;
            (node.to_json()?, verdict)
        }
        Command::AllChecks { .. } => {
            let (node, verdict) = cmd_all_checks(&resolved, inject)?;
            (node.to_json()?, verdict)
        }
    };

    match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| Error::InvalidParameter {
            name: "out",
            message: format!("cannot write {}: {e}", path.display()),
        })?,
        None => print!("{text}"),
    }

    Ok(if verdict { 0 } else { 1 })
}

fn parse_injection(raw: &str) -> Result<(usize, usize, f64)> {
    let parts: Vec<&str> = raw.split(',').collect();
    let invalid = |message: String| Error::InvalidParameter {
        name: "inject-matrix-error",
        message,
    };
    if parts.len() != 3 {
        return Err(invalid(format!("expected ROW,COL,DELTA, got '{raw}'")));
    }
    let row: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| invalid(format!("row '{}' is not an integer", parts[0])))?;
    let col: usize = parts[1]
        .trim()
        .parse()
        .map_err(|_| invalid(format!("column '{}' is not an integer", parts[1])))?;
    let delta: f64 = parts[2]
        .trim()
        .parse()
        .map_err(|_| invalid(format!("delta '{}' is not a number", parts[2])))?;
    if !(1..=8).contains(&row) || !(1..=8).contains(&col) {
        return Err(invalid(format!(
            "entry ({row},{col}) outside the 8x8 matrix (indices are 1-based)"
        )));
    }
    Ok((row - 1, col - 1, delta))
}

// ---------------------------------------------------------------------------
// Report assembly helpers
// ---------------------------------------------------------------------------

fn envelope(command: &str, parameters: Node, body: Vec<(String, Node)>, verdict: bool) -> Node {
    let mut fields = vec![
        ("schema-version".to_string(), Node::str("1")),
        ("tool".to_string(), Node::str("trispin")),
        (
            "version".to_string(),
            Node::str(env!("CARGO_PKG_VERSION")),
        ),
        ("command".to_string(), Node::str(command)),
        ("parameters".to_string(), parameters),
    ];
    fields.extend(body);
    fields.push(("verdict".to_string(), Node::Bool(verdict)));
    Node::Obj(fields)
}

/// Complex matrices serialize as rows of [re, im] pairs.
fn matrix_node(m: &OperatorMatrix) -> Node {
    Node::Arr(
        (0..m.dim())
            .map(|i| {
                Node::Arr(
                    (0..m.dim())
                        .map(|j| {
                            let z = m.get(i, j);
                            Node::Arr(vec![Node::Float(z.re), Node::Float(z.im)])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn state_node(v: &StateVector) -> Node {
    Node::Arr(
        v.amplitudes()
            .iter()
            .map(|z| Node::Arr(vec![Node::Float(z.re), Node::Float(z.im)]))
            .collect(),
    )
}

fn collision_nodes(collisions: &[Collision]) -> Node {
    Node::Arr(
        collisions
            .iter()
            .map(|c| {
                Node::Obj(vec![
                    ("i".to_string(), Node::Int(c.i as i64)),
                    ("j".to_string(), Node::Int(c.j as i64)),
                    ("vanishing_form".to_string(), Node::str(c.form.to_string())),
                ])
            })
            .collect(),
    )
}

fn consistency_node(report: &ConsistencyReport) -> Node {
    Node::Obj(vec![
        ("max_deviation".to_string(), Node::Float(report.max_deviation)),
        ("eps".to_string(), Node::Float(report.eps)),
        ("passes".to_string(), Node::Bool(report.passes)),
        (
            "violations".to_string(),
            Node::Arr(
                report
                    .violations
                    .iter()
                    .map(|v| {
                        Node::Obj(vec![
                            ("preparation".to_string(), Node::Int(v.preparation as i64)),
                            ("outcome".to_string(), Node::Int(v.outcome as i64)),
                            ("predicted".to_string(), Node::Float(v.predicted)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_hamiltonian(cfg: &RunConfig) -> Result<(Node, bool)> {
    let (a, b, c) = (cfg.a, cfg.b, cfg.c);
    let coupling = CouplingConfig::standard(a, b, c)?;
    let residual = verify_builder(&coupling)?;
    let reference = explicit_matrix(a, b, c)?;
    let analytic = analytic_spectrum(a, b, c)?;
    let numeric = hermitian_eigendecomposition(&reference)?;
    let analytic_values = analytic.eigenvalues();
    let numeric_values = numeric.eigenvalues();
    let max_value_deviation = analytic_values
        .iter()
        .zip(&numeric_values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);

    let audit = spectrum_audit(a, b, c)?;
    let audit_node = Node::Arr(
        audit
            .iter()
            .map(|entry| {
                Node::Obj(vec![
                    ("index".to_string(), Node::Int(entry.index as i64)),
                    (
                        "documented_form".to_string(),
                        Node::str(entry.documented.to_string()),
                    ),
                    (
                        "certified_form".to_string(),
                        Node::str(entry.certified.to_string()),
                    ),
                    ("forms_match".to_string(), Node::Bool(entry.forms_match)),
                    (
                        "documented_value".to_string(),
                        Node::Float(entry.documented_value),
                    ),
                    (
                        "certified_value".to_string(),
                        Node::Float(entry.certified_value),
                    ),
                    (
                        "residual_documented".to_string(),
                        Node::Float(entry.residual_documented),
                    ),
                    (
                        "residual_certified".to_string(),
                        Node::Float(entry.residual_certified),
                    ),
                ])
            })
            .collect(),
    );

    let tensors = coupling_audit(a, b, c)?;
    let coupling_node = Node::Obj(vec![
        (
            "standard_residual".to_string(),
            Node::Float(tensors.standard_residual),
        ),
        (
            "pairwise_only_residual".to_string(),
            Node::Float(tensors.pairwise_only_residual),
        ),
        (
            "b_vecs_match_catalog".to_string(),
            Node::Bool(tensors.b_vecs_match_catalog),
        ),
        (
            "mu12_matches_catalog".to_string(),
            Node::Bool(tensors.mu12_matches_catalog),
        ),
        (
            "mu13_matches_catalog".to_string(),
            Node::Bool(tensors.mu13_matches_catalog),
        ),
        (
            "mu13_matches_catalog_transpose".to_string(),
            Node::Bool(tensors.mu13_matches_catalog_transpose),
        ),
        (
            "mu23_matches_catalog".to_string(),
            Node::Bool(tensors.mu23_matches_catalog),
        ),
        (
            "three_site_components".to_string(),
            Node::Arr(
                tensors
                    .three_site_components
                    .iter()
                    .map(|((i, j, k), coeff)| {
                        Node::Obj(vec![
                            (
                                "axes".to_string(),
                                Node::int_array(&[*i + 1, *j + 1, *k + 1]),
                            ),
                            ("coefficient".to_string(), Node::Float(*coeff)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ]);

    let degeneracies = degeneracy_report(a, b, c)?;
    let verdict = residual <= BUILDER_TOL && max_value_deviation <= 1e-10;

    let node = envelope(
        "hamiltonian",
        Node::Obj(vec![
            ("a".to_string(), Node::Float(a)),
            ("b".to_string(), Node::Float(b)),
            ("c".to_string(), Node::Float(c)),
        ]),
        vec![
            ("builder_residual".to_string(), Node::Float(residual)),
            ("explicit_matrix".to_string(), matrix_node(&reference)),
            (
                "spectrum".to_string(),
                Node::Obj(vec![
                    (
                        "analytic_sorted".to_string(),
                        Node::float_array(&analytic_values),
                    ),
                    (
                        "numeric_sorted".to_string(),
                        Node::float_array(&numeric_values),
                    ),
                    (
                        "max_value_deviation".to_string(),
                        Node::Float(max_value_deviation),
                    ),
                ]),
            ),
            ("spectrum_audit".to_string(), audit_node),
            ("coupling_audit".to_string(), coupling_node),
            (
                "degeneracies".to_string(),
                Node::Obj(vec![
                    (
                        "threshold".to_string(),
                        Node::Float(degeneracies.threshold),
                    ),
                    (
                        "certified".to_string(),
                        collision_nodes(&degeneracies.collisions),
                    ),
                    (
                        "documented".to_string(),
                        collision_nodes(&degeneracies.documented_collisions),
                    ),
                    (
                        "degenerate".to_string(),
                        Node::Bool(!degeneracies.collisions.is_empty()),
                    ),
                ]),
            ),
        ],
        verdict,
    );
    Ok((node, verdict))
}

fn cmd_exclusion(cfg: &RunConfig, single_theta_requested: bool) -> Result<(String, bool)> {
    let thetas: Vec<f64> = match (single_theta_requested, cfg.grid) {
        (false, Some(points)) => theta_grid(points)?,
        _ => vec![cfg.theta],
    };
    let basis = exclusion_basis();

    let mut scans = Vec::with_capacity(thetas.len());
    let mut permutation: Option<Vec<usize>> = None;
    let mut stable = true;
    let mut worst_matched_probability: f64 = 0.0;
    let mut worst_identity_deviation: f64 = 0.0;
    for &theta in &thetas {
        let family = build_preparations(theta)?;
        let (matching, max_amplitude) = find_exclusion_matching(&family, &basis)?;
        let table = probability_table(&family, &basis)?;
        let mut max_probability: f64 = 0.0;
        for outcome in 1..=basis.len() {
            let prep = matching.excluded_preparation(outcome)?;
            max_probability = max_probability.max(table[prep - 1][outcome - 1]);
        }
        worst_matched_probability = worst_matched_probability.max(max_probability);
        let perm = matching.as_one_based();
        match &permutation {
            None => permutation = Some(perm.clone()),
            Some(first) => stable &= *first == perm,
        }
        let identity = identity_pairing_probabilities(&family, &basis)?;
        let closed = identity_mismatch_probability(theta);
        worst_identity_deviation = worst_identity_deviation.max((identity[1] - closed).abs());
        scans.push((theta, perm, max_amplitude, max_probability, identity[1], table));
    }

    let verdict = worst_matched_probability <= MATCHED_PROBABILITY_TOL
        && stable
        && worst_identity_deviation <= 1e-12;

    if cfg.output == OutputFormat::Csv {
        let mut rows = Vec::new();
        for (theta, _, _, _, _, table) in &scans {
            for (prep, row) in table.iter().enumerate() {
                for (outcome, &p) in row.iter().enumerate() {
                    rows.push(vec![
                        CsvValue::Float(*theta),
                        CsvValue::Int(prep as i64 + 1),
                        CsvValue::Int(outcome as i64 + 1),
                        CsvValue::Float(p),
                    ]);
                }
            }
        }
        let text = csv_table(
            &["theta", "prep_index", "outcome_index", "probability"],
            &rows,
        )?;
        return Ok((text, verdict));
    }

    let parameters = if single_theta_requested || cfg.grid.is_none() {
        Node::Obj(vec![("theta".to_string(), Node::Float(cfg.theta))])
    } else {
        Node::Obj(vec![(
            "grid".to_string(),
            Node::Int(cfg.grid.unwrap_or(0) as i64),
        )])
    };

    let mut body: Vec<(String, Node)> = vec![
        (
            "matching".to_string(),
            Node::int_array(permutation.as_deref().unwrap_or(&[])),
        ),
        ("permutation_stable".to_string(), Node::Bool(stable)),
        (
            "max_matched_probability".to_string(),
            Node::Float(worst_matched_probability),
        ),
        (
            "matched_probability_bound".to_string(),
            Node::Float(MATCHED_PROBABILITY_TOL),
        ),
        (
            "identity_pair_2_max_deviation_from_closed_form".to_string(),
            Node::Float(worst_identity_deviation),
        ),
        (
            "zero_amplitude_threshold".to_string(),
            Node::Float(ZERO_AMPLITUDE_TOL),
        ),
    ];

    if scans.len() == 1 {
        let (theta, _, max_amplitude, _, identity2, table) = &scans[0];
        body.push((
            "identity_pair_2_probability".to_string(),
            Node::Float(*identity2),
        ));
        body.push((
            "identity_pair_2_closed_form".to_string(),
            Node::Float(identity_mismatch_probability(*theta)),
        ));
        body.push((
            "max_matched_amplitude".to_string(),
            Node::Float(*max_amplitude),
        ));
        body.push(("probability_table".to_string(), Node::float_matrix(table)));
    } else {
        body.push((
            "scan".to_string(),
            Node::Arr(
                scans
                    .iter()
                    .map(|(theta, perm, max_amplitude, max_probability, _, _)| {
                        Node::Obj(vec![
                            ("theta".to_string(), Node::Float(*theta)),
                            ("matching".to_string(), Node::int_array(perm)),
                            (
                                "max_matched_amplitude".to_string(),
                                Node::Float(*max_amplitude),
                            ),
                            (
                                "max_matched_probability".to_string(),
                                Node::Float(*max_probability),
                            ),
                        ])
                    })
                    .collect(),
            ),
        ));
    }

    let node = envelope("exclusion", parameters, body, verdict);
    Ok((node.to_json()?, verdict))
}

fn cmd_pbr2() -> Result<(Node, bool)> {
    let protocol = pbr_two_qubit_protocol()?;
    let completeness = protocol.basis.completeness_deviation()?;
    let p_half = born_probability(&protocol.preparations[0], protocol.basis.outcome(4)?)?;
    let verdict = protocol.max_matched_amplitude.powi(2) <= MATCHED_PROBABILITY_TOL
        && completeness <= 1e-12
        && (p_half - 0.5).abs() <= 1e-12;

    let node = envelope(
        "pbr2",
        Node::Obj(vec![]),
        vec![
            (
                "preparations".to_string(),
                Node::Arr(protocol.preparations.iter().map(state_node).collect()),
            ),
            (
                "basis".to_string(),
                Node::Arr(protocol.basis.outcomes().iter().map(state_node).collect()),
            ),
            (
                "matching".to_string(),
                Node::int_array(&protocol.matching.as_one_based()),
            ),
            (
                "max_matched_amplitude".to_string(),
                Node::Float(protocol.max_matched_amplitude),
            ),
            (
                "basis_completeness_deviation".to_string(),
                Node::Float(completeness),
            ),
            (
                "probability_table".to_string(),
                Node::float_matrix(&protocol.probability_table),
            ),
            (
                "p_outcome4_given_prep1".to_string(),
                Node::Float(p_half),
            ),
        ],
        verdict,
    );
    Ok((node, verdict))
}

fn cmd_ontic(cfg: &RunConfig) -> Result<(Node, bool)> {
    let family = build_preparations(cfg.theta)?;
    let basis = exclusion_basis();
    let (matching, _) = find_exclusion_matching(&family, &basis)?;

    let toy = build_overlap_toy_model(cfg.q)?;
    let toy_bound = forbidden_outcome_bound(&toy, &matching)?;
    let floor = cfg.q * cfg.q * cfg.q / 8.0;
    let toy_consistency = consistency_check(&toy, &family, &basis, 1e-3)?;

    let psi_ontic = build_psi_ontic_model(&family, &basis)?;
    let psi_consistency = consistency_check(&psi_ontic, &family, &basis, 1e-9)?;
    let psi_bound = forbidden_outcome_bound(&psi_ontic, &matching)?;

    let preparation = 1usize;
    let forbidden = matching.outcome_excluding(preparation - 1)? + 1;
    let exact = toy.prediction(preparation)?;
    let frequencies = toy.monte_carlo_run(preparation, cfg.samples, cfg.seed)?;
    let p = exact[forbidden - 1];
    let five_sigma = 5.0 * (p * (1.0 - p) / cfg.samples as f64).sqrt();
    let mc_deviation = (frequencies[forbidden - 1] - p).abs();
    let mc_ok = mc_deviation <= five_sigma;

    // The verified claims: the overlap model is refuted (its forbidden
    // outcomes exceed the pigeonhole floor and the strict consistency check
    // fails), the point-supported model is consistent, and the Monte Carlo
    // agrees with the exhaustive summation.
    let verdict = toy_bound >= floor - 1e-12
        && !toy_consistency.passes
        && psi_consistency.passes
        && psi_bound <= 1e-12
        && mc_ok;

    let node = envelope(
        "ontic",
        Node::Obj(vec![
            ("q".to_string(), Node::Float(cfg.q)),
            ("theta".to_string(), Node::Float(cfg.theta)),
            ("samples".to_string(), Node::Int(cfg.samples as i64)),
            ("seed".to_string(), Node::Int(cfg.seed as i64)),
        ]),
        vec![
            ("pigeonhole_floor".to_string(), Node::Float(floor)),
            ("overlap_model".to_string(), model_to_node(&toy)),
            (
                "overlap_model_forbidden_bound".to_string(),
                Node::Float(toy_bound),
            ),
            (
                "overlap_model_consistency".to_string(),
                consistency_node(&toy_consistency),
            ),
            (
                "point_model".to_string(),
                model_to_node(&psi_ontic),
            ),
            (
                "point_model_consistency".to_string(),
                consistency_node(&psi_consistency),
            ),
            (
                "point_model_forbidden_bound".to_string(),
                Node::Float(psi_bound),
            ),
            (
                "monte_carlo".to_string(),
                Node::Obj(vec![
                    ("preparation".to_string(), Node::Int(preparation as i64)),
                    (
                        "forbidden_outcome".to_string(),
                        Node::Int(forbidden as i64),
                    ),
                    (
                        "frequencies".to_string(),
                        Node::float_array(&frequencies),
                    ),
                    ("exhaustive".to_string(), Node::float_array(&exact)),
                    ("deviation".to_string(), Node::Float(mc_deviation)),
                    ("five_sigma".to_string(), Node::Float(five_sigma)),
                    ("within_five_sigma".to_string(), Node::Bool(mc_ok)),
                ]),
            ),
        ],
        verdict,
    );
    Ok((node, verdict))
}

fn cmd_all_checks(cfg: &RunConfig, inject: Option<(usize, usize, f64)>) -> Result<(Node, bool)> {
    let options = SuiteOptions {
        seed: cfg.seed,
        samples: cfg.samples,
        inject,
    };
    let report = run_all(&options)?;
    let mut parameters = vec![
        ("seed".to_string(), Node::Int(cfg.seed as i64)),
        ("samples".to_string(), Node::Int(cfg.samples as i64)),
    ];
    if let Some((row, col, delta)) = inject {
        parameters.push((
            "inject_matrix_error".to_string(),
            Node::Obj(vec![
                ("row".to_string(), Node::Int(row as i64 + 1)),
                ("col".to_string(), Node::Int(col as i64 + 1)),
                ("delta".to_string(), Node::Float(delta)),
            ]),
        ));
    }
    let verdict = report.all_passed;
    let node = envelope(
        "all-checks",
        Node::Obj(parameters),
        vec![("results".to_string(), report_node(&report))],
        verdict,
    );
    Ok((node, verdict))
}
