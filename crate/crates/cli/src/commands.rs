use std::env;
use std::path::Path;
use std::str::FromStr;

use compactlin::cover::{
    build_cover_model_excluding, solve_cover_exact, solve_cover_greedy_model, CoverError, CoverSolution, CoverWeights,
    MultiplierAssignment,
};
use compactlin::generate::{self, CoefficientMode, QapPreset, QapSpec, QtspSpec, RandomSpec};
use compactlin::io::{design_to_json, instance_to_json, parse_design, parse_instance, write_milp, MilpFormat};
use compactlin::linearize::{
    check_conditions, compact_linearize, compact_linearize_unchecked, glover_woolsey, induce_products, LinearizeError,
    RowTag,
};
use compactlin::model::validate;
use compactlin::verify::{
    detect_case, find_strict_dominance_witness, verify_dominance, verify_dominance_unchecked,
    verify_integer_consistency, VerifyError, DEFAULT_BRUTE_CAP,
};
use compactlin::{Instance, Model, Rational};
use serde_json::json;

use crate::output::{emit, read_input, sibling, write_all};
use crate::report;
use crate::{CheckArg, CoverArg, CoverArgs, Failure, FormatArg, InstanceArgs, MethodArg, PresetArg};

fn invalid(msg: impl ToString) -> Failure {
    Failure::Invalid(msg.to_string())
}

/// Reads, validates and optionally restricts the instance.
fn load(args: &InstanceArgs) -> Result<Instance, Failure> {
    let text = read_input(&args.instance)?;
    let inst: Instance = parse_instance(&text).map_err(invalid)?;
    let checked = validate(&inst).map_err(invalid)?;
    for issue in checked.issues.iter().filter(|i| !i.is_blocking()) {
        eprintln!("warning: {issue}");
    }
    if checked.has_blocking() {
        let lines: Vec<String> = checked.issues.iter().filter(|i| i.is_blocking()).map(|i| i.to_string()).collect();
        return Err(invalid(lines.join("; ")));
    }
    match &args.constraints {
        Some(keep) => inst.restrict_to(keep).map_err(invalid),
        None => Ok(inst),
    }
}

fn load_design(path: &Path, inst: &Instance) -> Result<MultiplierAssignment, Failure> {
    let text = read_input(path)?;
    let design = parse_design(&text, inst.constraints.len()).map_err(invalid)?;
    design.check_against(inst).map_err(invalid)?;
    Ok(design)
}

fn parse_weights(text: Option<&str>, inst: &Instance) -> Result<CoverWeights<Rational>, Failure> {
    let Some(text) = text else {
        return Ok(CoverWeights::default_for(inst));
    };
    let values = text
        .split(',')
        .map(|s| Rational::from_str(s.trim()).map_err(|_| invalid(format!("bad weight {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let [equation, plus, minus, product] =
        <[Rational; 4]>::try_from(values).map_err(|_| invalid("--weights takes four values: wE,wI+,wI-,wQ"))?;
    Ok(CoverWeights { equation, plus, minus, product })
}

fn cover_failure(e: CoverError) -> Failure {
    match e {
        CoverError::NonPositiveWeight | CoverError::Unlinearizable(_) => invalid(e),
        other => Failure::Io(other.into()),
    }
}

fn linearize_failure(e: LinearizeError) -> Failure {
    match e {
        LinearizeError::Design(_) => invalid(e),
        other => Failure::Design(other.to_string()),
    }
}

struct Designed {
    design: MultiplierAssignment,
    solution: Option<CoverSolution<Rational>>,
    mode: &'static str,
}

fn choose_design(inst: &Instance, args: &CoverArgs) -> Result<Designed, Failure> {
    if args.cover != CoverArg::File && args.design.is_some() {
        return Err(invalid("--design is only used with --cover file"));
    }
    match args.cover {
        CoverArg::File => {
            let path = args.design.as_deref().ok_or_else(|| invalid("--cover file needs --design"))?;
            Ok(Designed { design: load_design(path, inst)?, solution: None, mode: "file" })
        }
        CoverArg::Exact | CoverArg::Greedy => {
            let weights = parse_weights(args.weights.as_deref(), inst)?;
            let model = build_cover_model_excluding(inst, &weights).map_err(cover_failure)?;
            if args.cover == CoverArg::Exact {
                let sol = solve_cover_exact(&model).map_err(cover_failure)?;
                Ok(Designed { design: sol.assignment.clone(), solution: Some(sol), mode: "exact" })
            } else {
                let design = solve_cover_greedy_model(&model).map_err(cover_failure)?;
                Ok(Designed { design, solution: None, mode: "greedy" })
            }
        }
    }
}

fn compact_model(inst: &Instance, designed: &Designed) -> Result<Model, Failure> {
    compact_linearize(inst, &designed.design).map_err(linearize_failure)
}

pub fn linearize(
    input: &InstanceArgs,
    method: MethodArg,
    cover: &CoverArgs,
    format: FormatArg,
    out: &Path,
    force: bool,
) -> Result<(), Failure> {
    let inst = load(input)?;
    let format = match format {
        FormatArg::Lp => MilpFormat::Lp,
        FormatArg::Mps => MilpFormat::Mps,
    };
    let mut summary = json!({
        "n": inst.n,
        "constraints": inst.constraints.len(),
        "unlinearizable": inst.unlinearizable_products().iter().map(report::pair).collect::<Vec<_>>(),
    });
    let (model, design) = match method {
        MethodArg::Gw => {
            summary["method"] = json!("gw");
            (glover_woolsey(&inst), MultiplierAssignment::for_instance(&inst))
        }
        MethodArg::Compact => {
            let designed = choose_design(&inst, cover)?;
            let model = compact_model(&inst, &designed)?;
            let q = induce_products(&inst, &designed.design);
            summary["method"] = json!("compact");
            summary["cover"] = report::cover(designed.mode, designed.solution.as_ref(), &designed.design);
            summary["products"] = report::induced(&q, &inst);
            summary["conditions"] = report::conditions(&check_conditions(&inst, &designed.design, &q));
            (model, designed.design)
        }
    };
    let text = write_milp(&model, format);
    summary["model"] = report::model_summary(&model);
    summary["approximated"] = json!(text.starts_with("\\ WARNING") || text.starts_with("* WARNING"));

    let mut summary_text = serde_json::to_string_pretty(&summary).expect("serializable");
    summary_text.push('\n');
    write_all(
        &[
            (sibling(out, &format!(".{}", format.extension())), text),
            (sibling(out, ".design.json"), design_to_json(&design)),
            (sibling(out, ".summary.json"), summary_text),
        ],
        force,
    )?;
    let rows = &summary["model"]["rows"];
    eprintln!(
        "wrote {} rows ({} compact equations, {} GW rows) to {}",
        rows["total"],
        rows["compact_equation"],
        rows["gw"],
        sibling(out, &format!(".{}", format.extension())).display()
    );
    Ok(())
}

pub fn compare(input: &InstanceArgs, cover: &CoverArgs, out: Option<&Path>, force: bool) -> Result<(), Failure> {
    let inst = load(input)?;
    let designed = choose_design(&inst, cover)?;
    let compact = compact_model(&inst, &designed)?;
    let gw = glover_woolsey(&inst);
    let q = induce_products(&inst, &designed.design);
    let linearization = |m: &Model| m.count_rows(RowTag::is_linearization);
    let value = json!({
        "n": inst.n,
        "products": report::induced(&q, &inst),
        "cover": report::cover(designed.mode, designed.solution.as_ref(), &designed.design),
        "compact": report::model_summary(&compact),
        "gw": report::model_summary(&gw),
        "linearization_rows": { "compact": linearization(&compact), "gw": linearization(&gw) },
    });
    let mut text = serde_json::to_string_pretty(&value).expect("serializable");
    text.push('\n');
    emit(out, &text, force)
}

fn brute_cap() -> Result<usize, Failure> {
    match env::var("COMPACTLIN_BRUTE_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| invalid(format!("COMPACTLIN_BRUTE_CAP={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_BRUTE_CAP),
    }
}

fn verify_failure(e: VerifyError) -> Failure {
    match e {
        VerifyError::CapExceeded { .. } | VerifyError::Linearize(LinearizeError::Design(_)) => invalid(e),
        other => Failure::Io(other.into()),
    }
}

pub fn verify(
    input: &InstanceArgs,
    design_path: &Path,
    checks: &[CheckArg],
    out: Option<&Path>,
    force: bool,
) -> Result<(), Failure> {
    let inst = load(input)?;
    let design = load_design(design_path, &inst)?;
    let cap = brute_cap()?;
    let q = induce_products(&inst, &design);
    let conditions = check_conditions(&inst, &design, &q);

    let mut text = String::new();
    let mut value = json!({ "conditions": report::conditions(&conditions) });
    if conditions.passes() {
        text.push_str("conditions: all hold\n");
    }
    for (pair, condition) in conditions.violations() {
        text.push_str(&format!("conditions: {condition} fails for {pair}\n"));
    }
    let mut all_pass = true;
    let mut checks = checks.to_vec();
    checks.dedup();
    for check in checks {
        match check {
            CheckArg::Consistency => {
                let model = compact_linearize_unchecked(&inst, &design).map_err(linearize_failure)?;
                let result = verify_integer_consistency(&inst, &model, cap).map_err(verify_failure)?;
                all_pass &= result.passes();
                report::consistency_text(&mut text, &result);
                value["consistency"] = report::consistency(&result);
            }
            CheckArg::Dominance => {
                let result = match detect_case(&inst, &design) {
                    Some(case) => verify_dominance(&inst, &design, case),
                    None => verify_dominance_unchecked(&inst, &design),
                }
                .map_err(verify_failure)?;
                let names: Vec<String> = compact_linearize_unchecked(&inst, &design)
                    .map_err(linearize_failure)?
                    .columns()
                    .map(|c| c.name())
                    .collect();
                all_pass &= result.passes();
                report::dominance_text(&mut text, &result, &names);
                value["dominance"] = report::dominance(&result);
            }
            CheckArg::Strict => {
                let result = find_strict_dominance_witness(&inst, &design).map_err(verify_failure)?;
                report::strict_text(&mut text, &result);
                value["strict"] = report::strict(&result);
            }
        }
    }
    value["passes"] = json!(all_pass);
    text.push_str(&format!("overall: {}\n", report::verdict(all_pass)));

    print!("{text}");
    if let Some(stem) = out {
        let mut json_text = serde_json::to_string_pretty(&value).expect("serializable");
        json_text.push('\n');
        write_all(&[(sibling(stem, ".verify.json"), json_text), (sibling(stem, ".verify.txt"), text)], force)?;
    }
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn emit_generated(
    inst: &Instance,
    design: Option<&MultiplierAssignment>,
    out: Option<&Path>,
    design_out: Option<&Path>,
    force: bool,
) -> Result<(), Failure> {
    let inst_text = instance_to_json(inst);
    match (design_out, design) {
        (Some(_), None) => Err(invalid("this preset has no design")),
        (Some(dpath), Some(d)) => {
            let mut files = vec![(dpath.to_path_buf(), design_to_json(d))];
            match out {
                Some(p) => files.push((p.to_path_buf(), inst_text)),
                None => print!("{inst_text}"),
            }
            write_all(&files, force)
        }
        (None, _) => emit(out, &inst_text, force),
    }
}

pub fn gen_qap(
    n: usize,
    preset: PresetArg,
    seed: u64,
    out: Option<&Path>,
    design_out: Option<&Path>,
    force: bool,
) -> Result<(), Failure> {
    if n < 2 {
        return Err(invalid("--n must be at least 2"));
    }
    let preset = match preset {
        PresetArg::MostCompact => QapPreset::MostCompact,
        PresetArg::FriezeYadegar => QapPreset::FriezeYadegar,
        PresetArg::Gw => QapPreset::GwBaseline,
    };
    let (inst, design) = generate::gen_qap::<Rational>(&QapSpec { n, preset }, seed);
    emit_generated(&inst, design.as_ref(), out, design_out, force)
}

pub fn gen_qtsp(
    nodes: usize,
    subtour: bool,
    seed: u64,
    out: Option<&Path>,
    design_out: Option<&Path>,
    force: bool,
) -> Result<(), Failure> {
    if nodes < 4 {
        return Err(invalid("--nodes must be at least 4"));
    }
    if subtour && nodes > 10 {
        return Err(invalid("--subtour is limited to 10 nodes"));
    }
    let (inst, design) = generate::gen_qtsp::<Rational>(&QtspSpec { nodes, include_subtour: subtour }, seed);
    emit_generated(&inst, Some(&design), out, design_out, force)
}

pub struct RandomOpts {
    pub n: usize,
    pub equations: usize,
    pub inequalities: usize,
    pub density: f64,
    pub unit: bool,
    pub disjoint: bool,
    pub max_support: usize,
}

pub fn gen_random(opts: &RandomOpts, seed: u64, out: Option<&Path>, force: bool) -> Result<(), Failure> {
    if opts.n == 0 || opts.equations + opts.inequalities == 0 {
        return Err(invalid("need at least one variable and one constraint"));
    }
    if !(opts.density > 0.0 && opts.density <= 1.0) {
        return Err(invalid("--density must lie in (0, 1]"));
    }
    if opts.max_support == 0 {
        return Err(invalid("--max-support must be positive"));
    }
    let mut spec = RandomSpec::new(opts.n, opts.equations, opts.inequalities, opts.density);
    spec.coefficients = if opts.unit { CoefficientMode::Unit } else { CoefficientMode::Rational };
    spec.disjoint = opts.disjoint;
    spec.max_support = opts.max_support;
    let inst: Instance = generate::gen_random(&spec, seed);
    emit(out, &instance_to_json(&inst), force)
}
