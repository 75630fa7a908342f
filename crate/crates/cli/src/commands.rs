use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use bosonic_mac::asymptotics::{
    homodyne_probe, homodyne_schedule, lemma1_probe, lemma1_schedule, lemma2_case1, lemma2_case2,
    lemma2_case3, lemma2_schedule, receiver_gap_at_low_power, receiver_gap_schedule,
    CaseThreeConfig, CaseThreeReport, LimitProbe, Verdict,
};
use bosonic_mac::gaussian::squeezing_for_cost;
use bosonic_mac::rates::{
    outer_bound, rate_bundle, receiver_individual_rate, receiver_sum_rate,
    sum_rate_capacity_coherent,
};
use bosonic_mac::region::{
    build_region, fmt17, global_constraint_scan, optimize_squeezing, squeeze_surface, Encoding,
    GlobalScanReport, Objective, RegionReport, SqueezeOptimum, ALL_SIGNS, DEFAULT_GRID,
    DEFAULT_SPLITS,
};
use bosonic_mac::{ChannelParams, PhotonBudget, RateBundle, Receiver, Sign, User};
use serde::{Deserialize, Serialize};

use crate::args::{AsymptoticsArgs, CommonArgs, Format, OptimizeArgs, RegionArgs};
use crate::error::{CliError, CliResult};
use crate::settings::{resolve, resolve_opt, ConfigFile};

pub const DEFAULT_ETA1: f64 = 0.5;
pub const DEFAULT_ETA2: f64 = 0.9;
pub const DEFAULT_NT: f64 = 1.0;
pub const DEFAULT_NA: f64 = 1.0;
pub const DEFAULT_NB: f64 = 1.0;
pub const DEFAULT_SEED: u64 = 0;

/// Resolved settings shared by every subcommand.
#[derive(Debug)]
pub struct Context {
    pub config: ConfigFile,
    pub params: ChannelParams,
    pub budget: PhotonBudget,
    pub grid: usize,
    pub seed: u64,
    format: Option<Format>,
    out: Option<PathBuf>,
}

fn non_negative(field: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(CliError::invalid(
            field,
            format!("must be a finite non-negative number, got {x}"),
        ))
    }
}

fn squeezing(
    config: &ConfigFile,
    r_key: &str,
    p_key: &str,
    r_flag: Option<f64>,
    p_flag: Option<f64>,
    n: f64,
) -> CliResult<f64> {
    let r = resolve_opt(config, r_key, r_flag)?;
    let p = resolve_opt(config, p_key, p_flag)?;
    match (r, p) {
        (Some(_), Some(_)) => Err(CliError::invalid(
            p_key,
            format!("cannot be combined with --{r_key}"),
        )),
        (Some(r), None) => Ok(r),
        (None, Some(p)) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::invalid(
                    p_key,
                    format!("must lie in [0, 1], got {p}"),
                ));
            }
            Ok(squeezing_for_cost(p * n, Sign::Plus))
        }
        (None, None) => Ok(0.0),
    }
}

impl Context {
    pub fn resolve(common: &CommonArgs) -> CliResult<Self> {
        let config = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let params = ChannelParams::new(
            resolve(&config, "eta1", common.eta1, DEFAULT_ETA1)?,
            resolve(&config, "eta2", common.eta2, DEFAULT_ETA2)?,
            resolve(&config, "nt", common.nt, DEFAULT_NT)?,
        )?;
        let n_a = non_negative("na", resolve(&config, "na", common.na, DEFAULT_NA)?)?;
        let n_b = non_negative("nb", resolve(&config, "nb", common.nb, DEFAULT_NB)?)?;
        let r_a = squeezing(&config, "ra", "pa", common.ra, common.pa, n_a)?;
        let r_b = squeezing(&config, "rb", "pb", common.rb, common.pb, n_b)?;
        let budget = PhotonBudget::new(n_a, n_b, r_a, r_b)?;
        let grid = resolve(&config, "grid", common.grid, DEFAULT_GRID)?;
        if grid < 2 {
            return Err(CliError::invalid(
                "grid",
                format!("must be at least 2, got {grid}"),
            ));
        }
        let format = match resolve_opt::<String>(&config, "format", None)? {
            _ if common.format.is_some() => common.format,
            Some(s) if s == "csv" => Some(Format::Csv),
            Some(s) if s == "json" => Some(Format::Json),
            Some(s) => {
                return Err(CliError::invalid(
                    "format",
                    format!("expected csv or json, got `{s}`"),
                ))
            }
            None => None,
        };
        let out = resolve_opt(&config, "out", common.out.clone())?;
        Ok(Context {
            seed: resolve(&config, "seed", common.seed, DEFAULT_SEED)?,
            config,
            params,
            budget,
            grid,
            format,
            out,
        })
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Requested format, JSON unless stated otherwise.
    pub fn out_format(&self) -> Format {
        self.format_or(Format::Json)
    }

    /// Write `text` to `--out` or standard output.
    pub fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, text).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                log::info!("wrote {}", path.display());
                Ok(())
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|source| CliError::Io {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })
            }
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn opt17(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReceiverRates {
    pub alice: f64,
    pub bob: f64,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatesRecord {
    pub params: ChannelParams,
    pub budget: PhotonBudget,
    pub rates: RateBundle,
    pub outer_bound_a: f64,
    pub outer_bound_b: f64,
    /// Coherent-input sum-rate capacity (squeezing ignored).
    pub sum_capacity_coherent: f64,
    /// Absent when the receiver formula does not apply to this encoding.
    pub heterodyne: Option<ReceiverRates>,
    pub homodyne: Option<ReceiverRates>,
}

fn receiver_rates(
    params: &ChannelParams,
    budget: &PhotonBudget,
    rx: Receiver,
) -> Option<ReceiverRates> {
    let result = (|| {
        Ok::<_, bosonic_mac::Error>(ReceiverRates {
            alice: receiver_individual_rate(params, budget, rx, User::Alice)?,
            bob: receiver_individual_rate(params, budget, rx, User::Bob)?,
            sum: receiver_sum_rate(params, budget, rx)?,
        })
    })();
    match result {
        Ok(r) => Some(r),
        Err(e) => {
            log::info!("{rx:?} rates omitted: {e}");
            None
        }
    }
}

pub fn rates_record(params: &ChannelParams, budget: &PhotonBudget) -> CliResult<RatesRecord> {
    Ok(RatesRecord {
        params: *params,
        budget: *budget,
        rates: rate_bundle(params, budget)?,
        outer_bound_a: outer_bound(params, budget, User::Alice),
        outer_bound_b: outer_bound(params, budget, User::Bob),
        sum_capacity_coherent: sum_rate_capacity_coherent(params, budget),
        heterodyne: receiver_rates(params, budget, Receiver::Heterodyne),
        homodyne: receiver_rates(params, budget, Receiver::Homodyne),
    })
}

const RATES_HEADER: &str =
    "eta1,eta2,nt,na,nb,ra,rb,r_max_a,r_max_b,r_max_ab,branch_a,branch_b,branch_ab,\
r_ub_a,r_ub_b,c_sum_coherent,c_het_a,c_het_b,c_het_sum,c_hom_a,c_hom_b,c_hom_sum";

fn rates_csv(r: &RatesRecord) -> String {
    let het = r.heterodyne;
    let hom = r.homodyne;
    let fields = [
        fmt17(r.params.eta1()),
        fmt17(r.params.eta2()),
        fmt17(r.params.n_thermal()),
        fmt17(r.budget.n_a),
        fmt17(r.budget.n_b),
        fmt17(r.budget.r_a),
        fmt17(r.budget.r_b),
        fmt17(r.rates.r_max_a),
        fmt17(r.rates.r_max_b),
        fmt17(r.rates.r_max_ab),
        format!("{:?}", r.rates.branch_a),
        format!("{:?}", r.rates.branch_b),
        format!("{:?}", r.rates.branch_ab),
        fmt17(r.outer_bound_a),
        fmt17(r.outer_bound_b),
        fmt17(r.sum_capacity_coherent),
        opt17(het.map(|x| x.alice)),
        opt17(het.map(|x| x.bob)),
        opt17(het.map(|x| x.sum)),
        opt17(hom.map(|x| x.alice)),
        opt17(hom.map(|x| x.bob)),
        opt17(hom.map(|x| x.sum)),
    ];
    format!("{RATES_HEADER}\n{}\n", fields.join(","))
}

pub fn cmd_rates(ctx: &Context) -> CliResult<()> {
    let record = rates_record(&ctx.params, &ctx.budget)?;
    match ctx.format_or(Format::Json) {
        Format::Json => ctx.emit(&to_json(&record)),
        Format::Csv => ctx.emit(&rates_csv(&record)),
    }
}

pub fn cmd_surface(ctx: &Context) -> CliResult<()> {
    log::info!("surface on a {0}x{0} grid, 4 sign layers", ctx.grid);
    let surface = squeeze_surface(
        &ctx.params,
        ctx.budget.n_a,
        ctx.budget.n_b,
        ctx.grid,
        &ALL_SIGNS,
    )?;
    match ctx.format_or(Format::Csv) {
        Format::Csv => ctx.emit(&surface.to_csv()),
        Format::Json => ctx.emit(&to_json(&surface)),
    }
}

// ---------------------------------------------------------------------------

pub fn parse_encodings(text: &str) -> CliResult<Vec<Encoding>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(CliError::invalid(
            "encodings",
            "at least one encoding is required",
        ));
    }
    text.split(',')
        .map(|item| {
            let bad =
                || CliError::invalid("encodings", format!("expected `r_A:r_B`, got `{item}`"));
            let (a, b) = item.trim().split_once(':').ok_or_else(bad)?;
            let r_a: f64 = a.trim().parse().map_err(|_| bad())?;
            let r_b: f64 = b.trim().parse().map_err(|_| bad())?;
            if !(r_a.is_finite() && r_b.is_finite()) {
                return Err(bad());
            }
            Ok(Encoding { r_a, r_b })
        })
        .collect()
}

fn region_csv(report: &RegionReport) -> String {
    let mut s = String::from("dataset,r_a,r_b\n");
    let mut push = |label: &str, pts: &[(f64, f64)]| {
        for (a, b) in pts {
            let _ = writeln!(s, "{label},{},{}", fmt17(*a), fmt17(*b));
        }
    };
    for lp in report.pentagons.iter().chain(&report.receivers) {
        let pts: Vec<(f64, f64)> = lp
            .pentagon
            .vertices
            .iter()
            .map(|p| (p.r_a, p.r_b))
            .collect();
        push(&lp.label, &pts);
    }
    let ob = report.outer_box;
    push(
        "outer bound",
        &[
            (0.0, 0.0),
            (ob.r_ub_a, 0.0),
            (ob.r_ub_a, ob.r_ub_b),
            (0.0, ob.r_ub_b),
        ],
    );
    s
}

pub fn cmd_region(ctx: &Context, args: &RegionArgs) -> CliResult<()> {
    let encodings = match resolve_opt::<String>(&ctx.config, "encodings", args.encodings.clone())? {
        Some(text) => parse_encodings(&text)?,
        None => {
            let mut v = vec![Encoding::COHERENT];
            if !ctx.budget.is_coherent() {
                v.push(Encoding {
                    r_a: ctx.budget.r_a,
                    r_b: ctx.budget.r_b,
                });
            }
            v
        }
    };
    let report = build_region(
        &ctx.params,
        ctx.budget.n_a,
        ctx.budget.n_b,
        &encodings,
        true,
    )?;
    match ctx.format_or(Format::Json) {
        Format::Json => ctx.emit(&to_json(&report)),
        Format::Csv => ctx.emit(&region_csv(&report)),
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    pub params: ChannelParams,
    pub probes: Vec<LimitProbe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case3: Option<CaseThreeReport>,
    pub converged: bool,
}

impl AsymptoticsReport {
    fn all_probes(&self) -> Vec<&LimitProbe> {
        let mut v: Vec<&LimitProbe> = self.probes.iter().collect();
        if let Some(c) = &self.case3 {
            v.push(&c.branch1);
            v.push(&c.branch2);
        }
        v
    }
}

fn asymptotics_csv(report: &AsymptoticsReport) -> String {
    let mut s = String::from("probe,index,n,ratio,target,verdict\n");
    for p in report.all_probes() {
        for (i, (n, r)) in p.schedule.iter().zip(&p.ratios).enumerate() {
            let _ = writeln!(
                s,
                "{},{i},{},{},{},{}",
                p.lemma,
                fmt17(*n),
                fmt17(*r),
                fmt17(p.target),
                serde_json::to_value(p.verdict)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default()
            );
        }
    }
    s
}

pub fn run_asymptotics(ctx: &Context, args: &AsymptoticsArgs) -> CliResult<AsymptoticsReport> {
    let cfg = &ctx.config;
    let lemma = resolve(cfg, "lemma", args.lemma.clone(), "all".to_string())?;
    let case = resolve_opt(cfg, "case", args.case)?;
    if let Some(c) = case {
        if !(1..=3).contains(&c) {
            return Err(CliError::invalid(
                "case",
                format!("must be 1, 2 or 3, got {c}"),
            ));
        }
    }
    let user = match resolve(cfg, "user", args.user.clone(), "alice".to_string())?.as_str() {
        "alice" => User::Alice,
        "bob" => User::Bob,
        other => {
            return Err(CliError::invalid(
                "user",
                format!("expected alice or bob, got `{other}`"),
            ))
        }
    };
    let case3 = CaseThreeConfig::new(
        resolve(cfg, "scale-a", args.scale_a, 1.0)?,
        resolve(cfg, "scale-b", args.scale_b, 1.0)?,
        resolve(cfg, "kappa", args.kappa, 1.0)?,
        resolve(cfg, "displacement-a", args.displacement_a, 0.5)?,
    )
    .map_err(|e| match e {
        bosonic_mac::Error::InvalidParameter { name, reason } => CliError::invalid(
            match name {
                "a" => "scale-a",
                "b" => "scale-b",
                "p_a" => "displacement-a",
                other => other,
            },
            reason,
        ),
        other => other.into(),
    })?;

    let (l1, hom, l2, gap) = match lemma.as_str() {
        "all" => (true, true, true, true),
        "1" => (true, false, false, false),
        "hom-half" => (false, true, false, false),
        "2" => (false, false, true, false),
        "receiver-gap" => (false, false, false, true),
        other => {
            return Err(CliError::invalid(
                "lemma",
                format!("expected 1, hom-half, 2, receiver-gap or all, got `{other}`"),
            ))
        }
    };
    let p = &ctx.params;
    let mut probes = Vec::new();
    let mut case3_report = None;
    if l1 {
        probes.push(lemma1_probe(p, user, &lemma1_schedule())?);
    }
    if hom {
        probes.push(homodyne_probe(p, &homodyne_schedule())?);
    }
    if l2 {
        let wants = |c: u8| case.is_none_or(|k| k == c);
        if wants(1) {
            probes.push(lemma2_case1(p, &lemma2_schedule())?);
        }
        if wants(2) {
            probes.push(lemma2_case2(p, &lemma2_schedule())?);
        }
        if wants(3) {
            case3_report = Some(lemma2_case3(p, &case3, &lemma2_schedule())?);
        }
    }
    if gap {
        probes.extend(receiver_gap_at_low_power(p, &receiver_gap_schedule())?);
    }
    let converged = probes.iter().all(|pr| !pr.verdict.is_failure())
        && case3_report
            .as_ref()
            .is_none_or(|c| c.verdict != Verdict::Diverged);
    for pr in &probes {
        log::info!("{}: {:?}, gap {:e}", pr.lemma, pr.verdict, pr.gap);
    }
    Ok(AsymptoticsReport {
        params: *p,
        probes,
        case3: case3_report,
        converged,
    })
}

pub fn cmd_asymptotics(ctx: &Context, args: &AsymptoticsArgs) -> CliResult<()> {
    let report = run_asymptotics(ctx, args)?;
    match ctx.format_or(Format::Json) {
        Format::Json => ctx.emit(&to_json(&report))?,
        Format::Csv => ctx.emit(&asymptotics_csv(&report))?,
    }
    if report.converged {
        Ok(())
    } else {
        let failing: Vec<&str> = report
            .all_probes()
            .into_iter()
            .filter(|p| p.verdict.is_failure())
            .map(|p| p.lemma.as_str())
            .collect();
        Err(CliError::Verification(format!(
            "diverged probes: {}",
            failing.join(", ")
        )))
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OptimizeReport {
    Squeezing(SqueezeOptimum),
    Global(GlobalScanReport),
}

fn optimize_csv(report: &OptimizeReport) -> String {
    let mut s = String::from("objective,s,p_A,p_B,sign_A,sign_B,value,baseline\n");
    match report {
        OptimizeReport::Squeezing(o) => {
            let _ = writeln!(
                s,
                "{},,{},{},{},{},{},{}",
                serde_json::to_value(o.objective)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                fmt17(o.p_a),
                fmt17(o.p_b),
                o.sign_a,
                o.sign_b,
                fmt17(o.value),
                fmt17(o.baseline)
            );
        }
        OptimizeReport::Global(g) => {
            for (name, a) in [("alice", &g.alice), ("bob", &g.bob), ("sum", &g.sum)] {
                let _ = writeln!(
                    s,
                    "{name},{},{},{},{},{},{},",
                    fmt17(a.s),
                    fmt17(a.p_a),
                    fmt17(a.p_b),
                    a.sign_a,
                    a.sign_b,
                    fmt17(a.value)
                );
            }
        }
    }
    s
}

pub fn cmd_optimize(ctx: &Context, args: &OptimizeArgs) -> CliResult<()> {
    let cfg = &ctx.config;
    let objective = resolve(cfg, "objective", args.objective.clone(), "ra".to_string())?;
    let (n_a, n_b) = (ctx.budget.n_a, ctx.budget.n_b);
    let report = match objective.as_str() {
        "ra" | "rb" | "sum" => {
            let obj = match objective.as_str() {
                "ra" => Objective::MaxRA,
                "rb" => Objective::MaxRB,
                _ => Objective::MaxSum,
            };
            OptimizeReport::Squeezing(optimize_squeezing(
                &ctx.params,
                n_a,
                n_b,
                obj,
                &ALL_SIGNS,
                ctx.grid,
            )?)
        }
        "global" => {
            let n_s = non_negative("ns", resolve(cfg, "ns", args.ns, n_a + n_b)?)?;
            let splits = resolve(cfg, "splits", args.splits, DEFAULT_SPLITS)?;
            if splits < 2 {
                return Err(CliError::invalid(
                    "splits",
                    format!("must be at least 2, got {splits}"),
                ));
            }
            OptimizeReport::Global(global_constraint_scan(&ctx.params, n_s, splits, ctx.grid)?)
        }
        other => {
            return Err(CliError::invalid(
                "objective",
                format!("expected ra, rb, sum or global, got `{other}`"),
            ))
        }
    };
    match ctx.format_or(Format::Json) {
        Format::Json => ctx.emit(&to_json(&report)),
        Format::Csv => ctx.emit(&optimize_csv(&report)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings_parse() {
        let e = parse_encodings("0:0, 0:3,-1.5:2").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(
            e[2],
            Encoding {
                r_a: -1.5,
                r_b: 2.0
            }
        );
        assert!(parse_encodings("").is_err());
        assert!(parse_encodings("1").is_err());
        assert!(parse_encodings("a:1").is_err());
    }

    #[test]
    fn rates_record_round_trips() {
        let p = ChannelParams::new(0.2, 0.9, 4.0).unwrap();
        let r = rates_record(&p, &PhotonBudget::coherent(4.0, 8.0)).unwrap();
        let back: RatesRecord = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(back, r);
        let csv = rates_csv(&r);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(
            csv.lines().next().unwrap().split(',').count(),
            csv.lines().nth(1).unwrap().split(',').count()
        );
    }

    #[test]
    fn squeezed_record_omits_heterodyne() {
        let p = ChannelParams::new(0.25, 0.9, 1.0).unwrap();
        let b = PhotonBudget::new(1.0, 1000.0, 0.0, 3.0).unwrap();
        let r = rates_record(&p, &b).unwrap();
        assert!(r.heterodyne.is_none());
        assert!(r.homodyne.is_some());
    }
}
