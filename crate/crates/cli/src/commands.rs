use num_rational::BigRational;
use serde_json::{json, Value};
use transcend::exactnum::{BallRecord, FieldElement, NumberField};
use transcend::measure::{
    estimate_wd, eval_at, for_each_row, liouville_scan, reference_c2, EvalOptions, Instance, Record, Retention, ScanConfig,
    Strategy, ValueSource,
};
use transcend::polyseries::{basis_size, MonomialOrder, MultiPoly, Poly, TruncSeries};
use transcend::relations::{buchberger, certification_order, ledger, relation_kernel, specialize, LedgerParams, DEFAULT_MARGIN};
use transcend::siegel::{build_auxiliary, check_multiplicity, default_vstar, iterate, AuxiliaryForm, AuxiliaryResult, HEIGHT_PREC};
use transcend::specfile::{parse_rational, raw_element, raw_multipoly, raw_poly, raw_system, SpecFile};
use transcend::systems::{
    choose_ell, companion, companion_solution, direct_sum, is_regular, mahler_compose, Kind, LinearSystemSpec, RatFunc,
};
use transcend::Error;

use crate::output::{csv_err, emit, envelope, opt_f64, sink};
use crate::{AuxArgs, Command, Common, Failure, Format, RecordsArg, StrategyArg};

const DEFAULT_PRECISION: u32 = 128;
const DEFAULT_SERIES_ORDER: usize = 32;
const DEFAULT_MULTIPLICITY_ORDER: usize = 256;

pub fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Series { common } => series(&common),
        Command::System { common } => system(&common),
        Command::Regular { common, require } => regular(&common, require),
        Command::Pade { common, aux } => pade(&common, &aux),
        Command::Iterate { common, aux, steps } => iterate_cmd(&common, &aux, steps),
        Command::Relations { common, d, z_degree, margin } => relations(&common, d, z_degree, margin),
        Command::Ledger { common, delta, d, h, t, z_degree, margin } => ledger_cmd(&common, LedgerArgs { delta, d, h, t, z_degree, margin }),
        Command::Multiplicity { common, trials, big_m, big_n } => multiplicity(&common, trials, big_m, big_n),
        Command::Eval { common } => eval(&common),
        Command::Scan { common, d, h_max, records } => scan(&common, d, h_max, records),
        Command::Wd { common, d, schedule } => wd(&common, d, schedule),
        Command::Compose { common, rho, ell } => compose(&common, rho, ell),
    }
}

fn load(common: &Common) -> Result<SpecFile, Failure> {
    let text = std::fs::read_to_string(&common.spec).map_err(|e| Failure::Usage(format!("{}: {e}", common.spec.display())))?;
    Ok(SpecFile::from_json(&text)?)
}

fn precision(common: &Common, spec: &SpecFile) -> u32 {
    common.precision.or(spec.defaults.precision).unwrap_or(DEFAULT_PRECISION)
}

fn series_order(common: &Common, spec: &SpecFile, fallback: usize) -> usize {
    common.order.or(spec.defaults.order).unwrap_or(fallback)
}

fn functions_required(spec: &SpecFile) -> Result<(), Failure> {
    if spec.functions.is_empty() {
        return Err(Error::Precondition("the instance declares no functions".into()).into());
    }
    Ok(())
}

fn alpha(spec: &SpecFile) -> Result<FieldElement, Failure> {
    spec.alpha.clone().ok_or_else(|| Error::Precondition("the instance declares no evaluation point alpha".into()).into())
}

fn transcendence_degree(spec: &SpecFile) -> u32 {
    spec.declared_t.unwrap_or(spec.functions.len() as u32)
}

fn rational_arg(flag: Option<&String>, default: Option<&String>, fallback: &str) -> Result<BigRational, Failure> {
    let s = flag.or(default).map(String::as_str).unwrap_or(fallback);
    Ok(parse_rational(s)?)
}

fn series_of(spec: &SpecFile, order: usize) -> Result<Vec<TruncSeries>, Failure> {
    Ok(spec.functions.iter().map(|f| f.extend_series(order)).collect::<Result<Vec<_>, _>>()?)
}

/// `Y' = 0` or `Y(z^q) = Y`, solved by the constant 1.
fn constant_system(kind: Kind, k: &NumberField) -> Result<LinearSystemSpec, Error> {
    let entry = match kind {
        Kind::Differential => Poly::zero(k),
        Kind::Mahler { .. } => Poly::one(k),
    };
    LinearSystemSpec::from_entries(kind, k, vec![vec![RatFunc::poly(entry)]])
}

/// Whether the solution vector gets a leading constant coordinate 1. Inhomogeneous
/// companions already carry one.
fn prepends_one(spec: &SpecFile) -> bool {
    !spec.functions.iter().any(|f| f.is_inhomogeneous())
}

/// Direct sum of the companion systems, preceded by the constant system when needed.
fn vector_system(spec: &SpecFile) -> Result<LinearSystemSpec, Failure> {
    functions_required(spec)?;
    let kind = spec.kind().unwrap();
    let mut parts = Vec::new();
    if prepends_one(spec) {
        parts.push(constant_system(kind, &spec.field)?);
    }
    for f in &spec.functions {
        parts.push(companion(f)?);
    }
    Ok(direct_sum(&parts)?)
}

fn vector_solution(spec: &SpecFile, order: usize) -> Result<Vec<TruncSeries>, Failure> {
    let mut g = Vec::new();
    if prepends_one(spec) {
        g.push(TruncSeries::one(&spec.field, order));
    }
    for f in &spec.functions {
        g.extend(companion_solution(f, order)?);
    }
    Ok(g)
}

fn target_system(spec: &SpecFile) -> Result<LinearSystemSpec, Failure> {
    match &spec.system {
        Some(s) => Ok(s.clone()),
        None => vector_system(spec),
    }
}

fn status_str<T: serde::Serialize>(s: &T) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn series(common: &Common) -> Result<(), Failure> {
    let spec = load(common)?;
    functions_required(&spec)?;
    let order = series_order(common, &spec, DEFAULT_SERIES_ORDER);
    let all = series_of(&spec, order)?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for (f, s) in spec.functions.iter().zip(&all) {
        for (n, c) in s.coeffs().iter().enumerate() {
            rows.push(vec![f.name.clone(), n.to_string(), c.to_string()]);
        }
        out.push(json!({
            "name": f.name,
            "order": s.order(),
            "valuation": s.valuation().to_string(),
            "coefficients": s.coeffs().iter().map(raw_element).collect::<Vec<_>>(),
        }));
    }
    let report = envelope("series", common, &spec.name, json!({ "order": order }), json!({ "functions": out }));
    emit(common, &report, Some((&["function", "n", "coefficient"], rows)))
}

fn system(common: &Common) -> Result<(), Failure> {
    let spec = load(common)?;
    let mut result = serde_json::Map::new();
    if !spec.functions.is_empty() {
        let companions = spec.functions.iter().map(companion).collect::<Result<Vec<_>, _>>()?;
        let sum = vector_system(&spec)?;
        result.insert(
            "companions".into(),
            json!(spec.functions.iter().zip(&companions).map(|(f, c)| json!({ "name": f.name, "size": c.size(), "system": raw_system(c) })).collect::<Vec<_>>()),
        );
        result.insert("constant_coordinate".into(), json!(prepends_one(&spec)));
        result.insert("direct_sum".into(), json!({ "size": sum.size(), "system": raw_system(&sum), "det_numerator": raw_poly(&sum.det_numerator()) }));
    }
    if let Some(s) = &spec.system {
        result.insert("declared".into(), json!({ "size": s.size(), "system": raw_system(s), "det_numerator": raw_poly(&s.det_numerator()) }));
    }
    let report = envelope("system", common, &spec.name, json!({}), Value::Object(result));
    emit(common, &report, None)
}

fn regular(common: &Common, require: bool) -> Result<(), Failure> {
    let spec = load(common)?;
    let sys = target_system(&spec)?;
    let a = alpha(&spec)?;
    let rep = is_regular(&sys, &a, spec.embedding)?;
    let report = envelope(
        "regular",
        common,
        &spec.name,
        json!({ "alpha": raw_element(&a), "embedding": spec.embedding, "require": require }),
        serde_json::to_value(&rep).map_err(std::io::Error::from)?,
    );
    let witness = serde_json::to_value(&rep.witness).ok().and_then(|v| v["witness"].as_str().map(String::from)).unwrap_or_default();
    let row = vec![rep.regular.to_string(), witness];
    emit(common, &report, Some((&["regular", "witness"], vec![row])))?;
    if require && !rep.regular {
        return Err(Failure::Math { code: "singular-point", message: format!("the system is singular along the orbit of {a}") });
    }
    Ok(())
}

struct AuxSetup {
    n: usize,
    vstar: usize,
    eps: BigRational,
    order: usize,
    g: Vec<TruncSeries>,
    result: AuxiliaryResult,
}

fn auxiliary(common: &Common, spec: &SpecFile, aux: &AuxArgs, extra_order: usize) -> Result<AuxSetup, Failure> {
    functions_required(spec)?;
    let w = vector_system(spec)?.size();
    let n = aux.n.or(spec.defaults.n).unwrap_or(1);
    let eps = rational_arg(aux.eps.as_ref(), spec.defaults.eps.as_ref(), "0")?;
    let vstar = aux.vstar.or(spec.defaults.vstar).unwrap_or_else(|| default_vstar(w, n, &eps));
    let order = series_order(common, spec, vstar + 1 + extra_order);
    let g = vector_solution(spec, order)?;
    let result = build_auxiliary(&g, n, vstar)?;
    Ok(AuxSetup { n, vstar, eps, order, g, result })
}

fn form_json(f: &AuxiliaryForm) -> Value {
    json!({
        "generation": f.generation,
        "degree_bound": f.degree_bound,
        "coefficients": f.coeffs.iter().map(raw_poly).collect::<Vec<_>>(),
    })
}

fn pade(common: &Common, aux: &AuxArgs) -> Result<(), Failure> {
    let spec = load(common)?;
    let s = auxiliary(common, &spec, aux, 0)?;
    let report = envelope(
        "pade",
        common,
        &spec.name,
        json!({ "n": s.n, "vstar": s.vstar, "eps": s.eps.to_string(), "order": s.order, "constant_coordinate": prepends_one(&spec) }),
        json!({ "form": form_json(&s.result.form), "summary": s.result.summary() }),
    );
    emit(common, &report, None)
}

fn iterate_cmd(common: &Common, aux: &AuxArgs, steps: Option<usize>) -> Result<(), Failure> {
    let spec = load(common)?;
    let k = steps.or(spec.defaults.steps).unwrap_or(3);
    let s = auxiliary(common, &spec, aux, 16)?;
    let sys = vector_system(&spec)?;
    let (forms, trace) = iterate(&s.result.form, &sys, &s.g, k, HEIGHT_PREC)?;
    let rows = trace
        .iter()
        .map(|r| vec![r.generation.to_string(), r.valuation.clone(), r.degree.to_string(), r.height.clone(), r.clearing_power.to_string()])
        .collect();
    let report = envelope(
        "iterate",
        common,
        &spec.name,
        json!({ "n": s.n, "vstar": s.vstar, "eps": s.eps.to_string(), "order": s.order, "steps": k }),
        json!({ "trace": trace, "final_form": form_json(forms.last().unwrap()) }),
    );
    emit(common, &report, Some((&["generation", "valuation", "degree", "height", "clearing_power"], rows)))
}

fn relations(common: &Common, d: Option<usize>, z_degree: Option<usize>, margin: Option<usize>) -> Result<(), Failure> {
    let spec = load(common)?;
    functions_required(&spec)?;
    let m = spec.functions.len();
    let d = d.or(spec.defaults.d).unwrap_or(2);
    let z = z_degree.or(spec.defaults.z_degree).unwrap_or(0);
    let margin = margin.or(spec.defaults.margin).unwrap_or(DEFAULT_MARGIN);
    let order = series_order(common, &spec, certification_order(m, d, z, margin).max(basis_size(m, d) * (z + 1) + 1));
    let f = series_of(&spec, order)?;
    let rel = relation_kernel(&f, d, z, order, margin)?;
    let mut result = json!({
        "certified": rel.certified,
        "dimension": rel.dim(),
        "generators": rel.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    });
    if let Some(a) = &spec.alpha {
        let spec_rel = specialize(&rel, a);
        let gb = buchberger(&spec_rel, MonomialOrder::GrLex);
        result["specialized"] = json!(spec_rel.iter().map(raw_multipoly).collect::<Vec<_>>());
        result["groebner_basis"] = json!(gb.iter().map(raw_multipoly).collect::<Vec<_>>());
    }
    let report = envelope("relations", common, &spec.name, json!({ "d": d, "z_degree": z, "margin": margin, "order": order }), result);
    emit(common, &report, None)
}

struct LedgerArgs {
    delta: Option<usize>,
    d: Option<usize>,
    h: Option<usize>,
    t: Option<usize>,
    z_degree: Option<usize>,
    margin: Option<usize>,
}

fn ledger_cmd(common: &Common, a: LedgerArgs) -> Result<(), Failure> {
    let spec = load(common)?;
    functions_required(&spec)?;
    let m = spec.functions.len();
    let delta = a.delta.or(spec.defaults.delta).unwrap_or(1);
    let d = a.d.or(spec.defaults.d).unwrap_or(2);
    let h = a.h.or(spec.defaults.h).unwrap_or(1);
    let t = a.t.unwrap_or(transcendence_degree(&spec) as usize);
    let z = a.z_degree.or(spec.defaults.z_degree).unwrap_or(0);
    let margin = a.margin.or(spec.defaults.margin).unwrap_or(DEFAULT_MARGIN);
    let top = delta * d;
    let order = series_order(common, &spec, certification_order(m, top, z, margin).max(basis_size(m, top) * (z + 1) + 1));
    let f = series_of(&spec, order)?;
    let p_poly = match &spec.ledger_poly {
        Some(p) => p.clone(),
        None => {
            let mut e = vec![0; m];
            e[0] = 1;
            MultiPoly::from_terms(m, [(e, 1.into())])
        }
    };
    let (value_relations, source) = match (&spec.value_relations, &spec.alpha) {
        (Some(v), _) => (v.clone(), "declared"),
        (None, Some(al)) => (specialize(&relation_kernel(&f, top, z, order, margin)?, al), "specialized-functional"),
        (None, None) => (Vec::new(), "none"),
    };
    let params = LedgerParams { delta, d, h, t, z_degree: z, order, margin };
    let l = ledger(&f, &p_poly, &value_relations, &params)?;
    let report = envelope(
        "ledger",
        common,
        &spec.name,
        json!({
            "delta": delta, "d": d, "h": h, "t": t, "z_degree": z, "margin": margin, "order": order,
            "p_poly": p_poly.to_string(), "value_relations": source,
        }),
        json!({ "ledger": l, "identities_hold": l.identities_hold() }),
    );
    let row = [l.p, l.q, l.r, l.s, l.u, l.v, l.w].iter().map(|x| x.to_string()).chain([l.vh_below_w.to_string()]).collect();
    emit(common, &report, Some((&["p", "q", "r", "s", "u", "v", "w", "vh_below_w"], vec![row])))
}

fn multiplicity(common: &Common, trials: Option<usize>, big_m: Option<usize>, big_n: Option<usize>) -> Result<(), Failure> {
    let spec = load(common)?;
    functions_required(&spec)?;
    let trials = trials.or(spec.defaults.trials).unwrap_or(50);
    let mm = big_m.or(spec.defaults.big_m).unwrap_or(1);
    let nn = big_n.or(spec.defaults.big_n).unwrap_or(1);
    let seed = common.seed.or(spec.defaults.seed).unwrap_or(0);
    let order = series_order(common, &spec, DEFAULT_MULTIPLICITY_ORDER);
    let t = transcendence_degree(&spec);
    let f = series_of(&spec, order)?;
    let rep = check_multiplicity(&f, t, trials, mm, nn, seed)?;
    let rows = rep.valuations.iter().enumerate().map(|(i, v)| vec![i.to_string(), v.to_string()]).collect();
    let report = envelope(
        "multiplicity",
        common,
        &spec.name,
        json!({ "trials": trials, "big_m": mm, "big_n": nn, "seed": seed, "order": order, "t": t }),
        serde_json::to_value(&rep).map_err(std::io::Error::from)?,
    );
    emit(common, &report, Some((&["trial", "valuation"], rows)))
}

fn instance(spec: &SpecFile) -> Result<Instance, Failure> {
    functions_required(spec)?;
    Ok(Instance { functions: spec.functions.clone(), alpha: alpha(spec)?, embedding: spec.embedding, options: EvalOptions::default() })
}

fn eval(common: &Common) -> Result<(), Failure> {
    let spec = load(common)?;
    let inst = instance(&spec)?;
    let prec = precision(common, &spec);
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for f in &spec.functions {
        let e = eval_at(f, &inst.alpha, spec.embedding, prec, inst.options)?;
        let rec = BallRecord::from(&e.value);
        rows.push(vec![f.name.clone(), rec.re_f64.to_string(), rec.im_f64.to_string(), rec.rad_f64.to_string(), e.rigorous.to_string()]);
        out.push(json!({ "name": f.name, "value": rec, "rigorous": e.rigorous, "terms": e.terms, "pull_back_steps": e.pull_back_steps }));
    }
    let report = envelope(
        "eval",
        common,
        &spec.name,
        json!({ "precision": prec, "alpha": raw_element(&inst.alpha), "embedding": spec.embedding }),
        json!({ "values": out }),
    );
    emit(common, &report, Some((&["function", "re", "im", "radius", "rigorous"], rows)))
}

fn scan_config(common: &Common, spec: &SpecFile, d: Option<usize>, h_max: Option<u64>) -> ScanConfig {
    let mut cfg = ScanConfig::new(d.or(spec.defaults.d).unwrap_or(1), h_max.or(spec.defaults.h_max).unwrap_or(64), precision(common, spec));
    cfg.t = transcendence_degree(spec);
    cfg.strategy = match common.strategy {
        Some(StrategyArg::Lattice) => Strategy::Lattice,
        _ => Strategy::Exhaustive,
    };
    cfg.value_relations = spec.value_relations.clone().unwrap_or_default();
    cfg.field = spec.field.clone();
    cfg
}

const RECORD_HEADER: [&str; 7] = ["coeffs", "degree", "height", "log2_abs_lower", "log2_abs_upper", "exponent", "status"];

fn coeff_string(c: &[i64]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn record_row(r: &Record) -> Vec<String> {
    vec![
        coeff_string(&r.coeffs),
        r.degree.to_string(),
        r.height.to_string(),
        opt_f64(r.log2_abs_lower),
        opt_f64(r.log2_abs_upper),
        opt_f64(r.exponent),
        status_str(&r.status),
    ]
}

fn scan(common: &Common, d: Option<usize>, h_max: Option<u64>, records: RecordsArg) -> Result<(), Failure> {
    let spec = load(common)?;
    let inst = instance(&spec)?;
    let mut cfg = scan_config(common, &spec, d, h_max);
    if common.format == Format::Csv && records == RecordsArg::All {
        // stream the whole table instead of holding it in memory
        let omega = inst.values(cfg.precision)?;
        let mut w = csv::Writer::from_writer(sink(common)?);
        w.write_record(RECORD_HEADER).map_err(csv_err)?;
        let mut write = |row: &transcend::measure::Row| -> Result<(), Error> {
            let line = [
                coeff_string(&row.coeffs),
                row.degree.to_string(),
                row.height.to_string(),
                opt_f64(row.log2_abs_lower),
                opt_f64(row.log2_abs_upper),
                opt_f64(row.exponent),
                status_str(&row.status),
            ];
            w.write_record(&line).map_err(|e| Error::Invalid(format!("csv output: {e}")))
        };
        for_each_row(&omega, cfg.d, cfg.h_max, cfg.t, &mut write)?;
        w.flush()?;
        return Ok(());
    }
    if records == RecordsArg::All {
        cfg.retention = Retention::All;
    }
    let rep = liouville_scan(&inst, &cfg)?;
    let c2 = reference_c2(rep.m as u32, spec.field.degree() as u32);
    let mut table: Vec<&Record> = rep.frontier.iter().chain(&rep.undetermined).chain(&rep.certified_zero).collect();
    if records == RecordsArg::All {
        table = rep.records.iter().collect();
    }
    table.sort_by(|a, b| (a.height, &a.coeffs).cmp(&(b.height, &b.coeffs)));
    let rows = table.into_iter().map(record_row).collect();
    let report = envelope(
        "scan",
        common,
        &spec.name,
        json!({
            "d": cfg.d, "h_max": cfg.h_max, "t": cfg.t, "precision": cfg.precision,
            "strategy": cfg.strategy, "retention": cfg.retention, "max_refinements": cfg.max_refinements,
            "lattice_budget": cfg.lattice_budget, "value_relations": cfg.value_relations.len(),
            "alpha": raw_element(&inst.alpha), "embedding": spec.embedding,
        }),
        json!({
            "report": rep,
            "fit_is_valid": rep.fit_is_valid(),
            "reference_c2": { "coefficient": c2.coefficient.to_string(), "radicand": c2.radicand, "value": c2.to_f64() },
        }),
    );
    emit(common, &report, Some((&RECORD_HEADER, rows)))
}

fn wd(common: &Common, d: Option<usize>, schedule: Option<Vec<u64>>) -> Result<(), Failure> {
    let spec = load(common)?;
    let inst = instance(&spec)?;
    let cfg = scan_config(common, &spec, d, None);
    let schedule = schedule.or(spec.defaults.schedule.clone()).unwrap_or_else(|| {
        let mut v = Vec::new();
        let mut h = 2;
        while h <= cfg.h_max {
            v.push(h);
            h *= 2;
        }
        v
    });
    let est = estimate_wd(&inst, cfg.d, &schedule, &cfg)?;
    let rows = est.points.iter().map(|p| vec![p.height.to_string(), opt_f64(p.exponent), p.witness.as_deref().map(coeff_string).unwrap_or_default()]).collect();
    let report = envelope(
        "wd",
        common,
        &spec.name,
        json!({ "d": cfg.d, "schedule": schedule, "precision": cfg.precision, "strategy": cfg.strategy }),
        serde_json::to_value(&est).map_err(std::io::Error::from)?,
    );
    emit(common, &report, Some((&["height", "exponent", "witness"], rows)))
}

fn compose(common: &Common, rho: Option<String>, ell: Option<usize>) -> Result<(), Failure> {
    let spec = load(common)?;
    let sys = target_system(&spec)?;
    let Kind::Mahler { q } = sys.kind else {
        return Err(Error::KindMismatch("composition applies to Mahler systems".into()).into());
    };
    let a = alpha(&spec)?;
    let rho = rational_arg(rho.as_ref(), spec.defaults.rho.as_ref(), "1/2")?;
    let ell = match ell {
        Some(l) => l,
        None => choose_ell(&rho, &a, q, spec.embedding)?,
    };
    let composed = mahler_compose(&sys, ell)?;
    let base = is_regular(&sys, &a, spec.embedding)?;
    let reg = is_regular(&composed, &a, spec.embedding)?;
    let report = envelope(
        "compose",
        common,
        &spec.name,
        json!({ "rho": rho.to_string(), "ell": ell, "alpha": raw_element(&a), "embedding": spec.embedding }),
        json!({
            "q_power": q.pow(ell as u32),
            "base_regularity": base,
            "composed_regularity": reg,
            "system": raw_system(&composed),
        }),
    );
    emit(common, &report, None)
}
