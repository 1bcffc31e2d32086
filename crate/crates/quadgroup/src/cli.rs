//! Command-line driver.  Subcommands load groups, subgroups, maps and
//! presentations from JSON files, run the requested computation, and print a
//! report in text form (and JSON on request).
//!
//! Exit codes: 0 success, 1 a verified FAIL verdict, 2 usage or parse error,
//! 3 invalid algebraic input, 4 cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;

use crate::abelian::FgAb;
use crate::error::{Error, Result};
use crate::groups::{
    abelianization, center, construct, construct_subgroup, derived_subgroup,
    lower_central_series, nilpotency_class, FiniteGroup, GroupSpec, Subgroup, SubgroupSpec,
};
use crate::passi::{is_polynomial, passi_group, FgAbSpec, PolyMapSpec};
use crate::quadmaps::{bilinear_part, quadratic_verdict, radical, MapSpec};
use crate::report::{matrix_rows, Report};
use crate::universal_q::{
    build_q, presented_build, presented_check, GenPairSpec, PresentationSpec, PresentedVerdict,
};
use crate::verify::{run_battery, DEFAULT_ZOO};
use crate::{DEFAULT_BUDGET, DEFAULT_DEGREE_CAP, DEFAULT_ORDER_CAP};

#[derive(Parser)]
#[command(
    name = "quadgroup",
    version,
    about = "Quadratic maps between finite groups: universal groups, polynomial groups, verification battery"
)]
struct Cli {
    /// Largest group order accepted from input files.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    max_order: u64,

    /// Largest polynomial degree accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP)]
    max_degree: usize,

    /// Evaluation budget for exhaustive scans; operations refuse rather than
    /// sample when they would exceed it.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural profile: order, center, derived subgroup, lower central
    /// series, nilpotency class, abelianization.
    Analyze { group: PathBuf },

    /// Universal quadratic group of G relative a subgroup.
    Qgroup {
        group: PathBuf,
        /// Subgroup file; omit for the trivial subgroup, "all" for G itself.
        #[arg(long)]
        subgroup: Option<String>,
        /// Also write the report as JSON to this path.
        #[arg(long)]
        report: Option<PathBuf>,
    },

    /// Relative polynomial group P_n(G,B) in invariant-factor form.
    Passi {
        group: PathBuf,
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },

    /// Quadraticity verdict for a map given by a value table.
    Checkmap {
        domain: PathBuf,
        codomain: PathBuf,
        map: PathBuf,
        #[arg(long)]
        subgroup: Option<String>,
    },

    /// Degree-n polynomiality verdict for a map into a finite abelian group.
    Checkpoly {
        domain: PathBuf,
        /// Codomain descriptor file: {"factors":[...]}.
        codomain: PathBuf,
        map: PathBuf,
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },

    /// Decide whether generator data (chi, psi) prescribes a quadratic map
    /// on a presented group.
    Presented {
        presentation: PathBuf,
        target: PathBuf,
        genpair: PathBuf,
    },

    /// Run the verification battery over a zoo of groups.
    Verify {
        /// "default" or a comma-separated list of zoo names.
        #[arg(long, default_value = "default")]
        zoo: String,
        /// Write the full report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            match e {
                Error::Parse(_) => 2,
                Error::Invalid(_) => 3,
                Error::CapExceeded(_) => 4,
            }
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

fn load_group(path: &Path, max_order: u64) -> Result<FiniteGroup> {
    let spec: GroupSpec = read_json(path)?;
    let g = construct(&spec)?;
    if g.size as u64 > max_order {
        return Err(Error::cap(format!(
            "group order {} exceeds --max-order {max_order}",
            g.size
        )));
    }
    Ok(g)
}

/// Omitted: trivial subgroup. "all": the whole group. Anything else: a file
/// holding {"elements":[...]} or {"generators":[...]}.
fn resolve_subgroup(g: &FiniteGroup, arg: Option<&str>) -> Result<Subgroup> {
    match arg {
        None => Ok(Subgroup::trivial(g)),
        Some("all") => Ok(Subgroup::whole(g)),
        Some(path) => {
            let spec: SubgroupSpec = read_json(Path::new(path))?;
            construct_subgroup(g, &spec)
        }
    }
}

fn write_json(path: &Path, report: &Report) -> Result<()> {
    fs::write(path, report.to_json())
        .map_err(|e| Error::parse(format!("cannot write {}: {e}", path.display())))
}

fn subgroup_display(b: &Subgroup) -> String {
    format!("order {}, elements {:?}", b.order(), b.elements)
}

fn class_display(c: Option<usize>) -> String {
    match c {
        Some(c) => c.to_string(),
        None => "not nilpotent".into(),
    }
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Analyze { group } => {
            let g = load_group(group, cli.max_order)?;
            let mut r = Report::new("analyze");
            r.push("group", g.label.clone());
            r.push("order", g.size.to_string());
            r.push("center", subgroup_display(&center(&g)));
            r.push("derived subgroup", subgroup_display(&derived_subgroup(&g)));
            let orders: Vec<usize> =
                lower_central_series(&g).iter().map(|s| s.order()).collect();
            r.push("lower central series orders", format!("{orders:?}"));
            r.push("nilpotency class", class_display(nilpotency_class(&g)));
            r.push(
                "abelianization",
                format!("{:?}", abelianization(&g).group.factors),
            );
            print!("{}", r.render_text());
            Ok(0)
        }

        Command::Qgroup { group, subgroup, report } => {
            let g = load_group(group, cli.max_order)?;
            let b = resolve_subgroup(&g, subgroup.as_deref())?;
            let qg = build_q(&g, &b, cli.budget)?;
            let mut r = Report::new("qgroup");
            r.push("base group", g.label.clone());
            r.push("relative subgroup", subgroup_display(&b));
            r.push("order", qg.group.size.to_string());
            r.push("tensor square", format!("{:?}", qg.tensor.group.factors));
            r.push("nilpotency class", class_display(nilpotency_class(&qg.group)));
            r.push(
                "abelianization",
                format!("{:?}", abelianization(&qg.group).group.factors),
            );
            // central extension re-verified on the finished tables
            let tt = qg.tensor.group.order_u64()? as usize;
            let order_ok = qg.group.size == tt * g.size;
            let central_ok = (0..tt as u32).all(|x| {
                let z = qg.w.apply(x);
                qg.group.elements().all(|u| qg.group.comm(z, u) == 0)
            });
            let mut wimg: Vec<u32> = (0..tt as u32).map(|x| qg.w.apply(x)).collect();
            wimg.sort_unstable();
            let kernel_ok = qg.proj.kernel().elements == wimg;
            let retract_ok = g.elements().all(|a| qg.proj.apply(qg.q_elt(a)) == a);
            let ok = order_ok && central_ok && kernel_ok && retract_ok;
            r.push(
                "extension",
                if ok {
                    "verified: tensor square embeds centrally as Ker(proj), proj . q = id"
                        .to_string()
                } else {
                    "FAILED".to_string()
                },
            );
            if !ok {
                r.status = "fail".into();
            }
            print!("{}", r.render_text());
            if let Some(path) = report {
                write_json(path, &r)?;
            }
            Ok(if ok { 0 } else { 1 })
        }

        Command::Passi { group, subgroup, degree, report } => {
            if *degree > cli.max_degree {
                return Err(Error::cap(format!(
                    "degree {degree} exceeds --max-degree {}",
                    cli.max_degree
                )));
            }
            let g = load_group(group, cli.max_order)?;
            let b = resolve_subgroup(&g, subgroup.as_deref())?;
            let p = passi_group(&g, &b, *degree, cli.budget)?;
            let mut r = Report::new("passi");
            r.push("base group", g.label.clone());
            r.push("relative subgroup", subgroup_display(&b));
            r.push("degree", degree.to_string());
            r.push("invariant factors", format!("{:?}", p.group.factors));
            r.push("order", p.group.order_u64()?.to_string());
            if let (Some(mu), Some(ts)) = (&p.mu, &p.tensor) {
                r.push("tensor square", format!("{:?}", ts.group.factors));
                r.push_table(
                    "pairing matrix (rows: polynomial group, cols: tensor generators)",
                    matrix_rows(mu),
                );
            }
            print!("{}", r.render_text());
            if let Some(path) = report {
                write_json(path, &r)?;
            }
            Ok(0)
        }

        Command::Checkmap { domain, codomain, map, subgroup } => {
            let dg = load_group(domain, cli.max_order)?;
            let cg = load_group(codomain, cli.max_order)?;
            let spec: MapSpec = read_json(map)?;
            let f = spec.realize(Some(&dg), Some(&cg))?;
            let b = resolve_subgroup(&f.domain, subgroup.as_deref())?;
            let v = quadratic_verdict(&f, &b, cli.budget)?;
            let mut r = Report::new("checkmap");
            r.push("domain", f.domain.label.clone());
            r.push("codomain", f.codomain.label.clone());
            r.push("relative subgroup", subgroup_display(&b));
            let verdict = if v.is_linear {
                "linear"
            } else if v.is_quadratic {
                "quadratic"
            } else {
                "not quadratic"
            };
            r.push("verdict", verdict);
            r.push("image subgroup order", v.i_f.order().to_string());
            r.push("deviation subgroup order", v.d_f.order().to_string());
            if let Some(w) = &v.counterexample {
                r.push("counterexample", format!("{} at {:?}", w.law, w.elements));
            }
            if v.is_quadratic {
                let rad = radical(&f, cli.budget)?;
                r.push("radical", subgroup_display(&rad));
                let part = bilinear_part(&f, &b, cli.budget)?;
                r.push("tensor square", format!("{:?}", part.tensor.group.factors));
                let gens = part.tensor.group.rank();
                let rows: Vec<Vec<String>> = (0..gens)
                    .map(|k| {
                        let img = part.w.apply(&part.tensor.group.unit(k));
                        vec![
                            format!("g{k}"),
                            part.d_ab.from_ab(&img).to_string(),
                            format!("{img:?}"),
                        ]
                    })
                    .collect();
                r.push_table(
                    "pairing on tensor generators (codomain element, coordinates)",
                    rows,
                );
            } else {
                r.status = "fail".into();
            }
            print!("{}", r.render_text());
            Ok(if v.is_quadratic { 0 } else { 1 })
        }

        Command::Checkpoly { domain, codomain, map, subgroup, degree } => {
            if *degree > cli.max_degree {
                return Err(Error::cap(format!(
                    "degree {degree} exceeds --max-degree {}",
                    cli.max_degree
                )));
            }
            let dg = load_group(domain, cli.max_order)?;
            let cod: FgAbSpec = read_json(codomain)?;
            let cod_ab = FgAb::from_cyclic_orders(&cod.factors)?;
            let spec: PolyMapSpec = read_json(map)?;
            let f = spec.realize(Some(&dg), Some(&cod_ab))?;
            let b = resolve_subgroup(&f.domain, subgroup.as_deref())?;
            let v = is_polynomial(&f, *degree, &b, cli.budget)?;
            let mut r = Report::new("checkpoly");
            r.push("domain", f.domain.label.clone());
            r.push("codomain", format!("{:?}", f.codomain.factors));
            r.push("relative subgroup", subgroup_display(&b));
            r.push("degree", degree.to_string());
            r.push("verdict", if v.pass { "polynomial" } else { "not polynomial" });
            if let Some(w) = &v.witness {
                r.push("witness element of 1 + J", format!("{w:?}"));
            }
            if !v.pass {
                r.status = "fail".into();
            }
            print!("{}", r.render_text());
            Ok(if v.pass { 0 } else { 1 })
        }

        Command::Presented { presentation, target, genpair } => {
            let pspec: PresentationSpec = read_json(presentation)?;
            let p = pspec.realize()?;
            let h = load_group(target, cli.max_order)?;
            let gspec: GenPairSpec = read_json(genpair)?;
            let gp = gspec.realize();
            let verdict = presented_check(&p, &h, &gp)?;
            let mut r = Report::new("presented");
            r.push("generators", p.generators.to_string());
            r.push("relators", p.relators.len().to_string());
            r.push("target", h.label.clone());
            for cond in ["data-commutation", "relator-vanishing", "exponent-pairing"] {
                let status = match &verdict {
                    PresentedVerdict::Accept => "ok".to_string(),
                    PresentedVerdict::Reject { violations } => violations
                        .iter()
                        .find(|(c, _)| c == cond)
                        .map(|(_, w)| format!("violated: {w}"))
                        .unwrap_or_else(|| "ok".to_string()),
                };
                r.push(cond, status);
            }
            let accept = verdict == PresentedVerdict::Accept;
            r.push("verdict", if accept { "ACCEPT" } else { "REJECT" });
            if accept && p.pi.is_some() {
                let f = presented_build(&p, &h, &gp, cli.budget)?;
                let rows: Vec<Vec<String>> = f
                    .domain
                    .elements()
                    .map(|a| vec![a.to_string(), f.apply(a).to_string()])
                    .collect();
                r.push_table("constructed map (element, value)", rows);
            }
            if !accept {
                r.status = "reject".into();
            }
            print!("{}", r.render_text());
            Ok(if accept { 0 } else { 1 })
        }

        Command::Verify { zoo, json } => {
            let names: Vec<String> = if zoo == "default" {
                DEFAULT_ZOO.iter().map(|s| s.to_string()).collect()
            } else {
                zoo.split(',').map(|s| s.trim().to_string()).collect()
            };
            let theorems = run_battery(&names, cli.budget)?;
            let mut pass = 0usize;
            let mut fail = 0usize;
            let mut skip = 0usize;
            for t in &theorems {
                let (p, f, s) = t.counts();
                pass += p;
                fail += f;
                skip += s;
            }
            let claims = pass + fail + skip;
            let mut r = Report::new("verify");
            r.push("zoo", names.join(", "));
            if fail > 0 {
                r.status = "fail".into();
            }
            r.summary = Some(format!(
                "checked {claims} claims over {} instances: {pass} pass / {fail} fail / {skip} skipped",
                theorems.len()
            ));
            r.theorems = theorems;
            print!("{}", r.render_text());
            if let Some(path) = json {
                write_json(path, &r)?;
            }
            Ok(if fail == 0 { 0 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert!(Cli::try_parse_from(["quadgroup", "frobnicate"]).is_err());
    }

    #[test]
    fn verify_accepts_zoo_flag() {
        let cli = Cli::try_parse_from(["quadgroup", "verify", "--zoo", "C2"]).unwrap();
        match cli.command {
            Command::Verify { zoo, json } => {
                assert_eq!(zoo, "C2");
                assert!(json.is_none());
            }
            _ => panic!("wrong command"),
        }
    }

    #[test]
    fn caps_have_documented_defaults() {
        let cli = Cli::try_parse_from(["quadgroup", "analyze", "g.json"]).unwrap();
        assert_eq!(cli.max_order, DEFAULT_ORDER_CAP);
        assert_eq!(cli.max_degree, DEFAULT_DEGREE_CAP);
        assert_eq!(cli.budget, DEFAULT_BUDGET);
    }

}
