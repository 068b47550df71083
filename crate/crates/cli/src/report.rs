//! The report object shared by all subcommands: a command id, the exact
//! inputs (including seeds), the results, and the catalog fingerprint.
//! JSON output is deterministic (serde_json sorts object keys) and every
//! rational is rendered exactly as numerator/denominator.

use serde::Serialize;
use serde_json::{json, Value};

use fano3::chow::Catalog;
use fano3::instanton::{
    cohomology_table, ext_balance, h1_formula, min_quantum, moduli_dim, serre_plan, Entry,
    InstantonError, InstantonSpec,
};
use fano3::monad::{
    export_monad, monad_ranks, MonadSpace, PencilCount, QMonad, ScanStats, VerifyReport,
};
use fano3::rat::render;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub fingerprint: String,
    pub inputs: Value,
    pub results: Value,
}

fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

fn fingerprint() -> String {
    let catalog = fano3::build_catalog().expect("catalog builds");
    fano3::chow::catalog_fingerprint(&fano3::chow::export_catalog(&catalog))
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("inputs: {}\n", compact(&self.inputs)));
        out.push_str(&render_value("results", &self.results, 0));
        out.push_str(&format!("fingerprint: {} (version {})\n", self.fingerprint, self.version));
        out
    }

    pub fn catalog_listing(catalog: &Catalog, fingerprint: &str) -> Report {
        let entries: Vec<Value> = catalog
            .threefolds()
            .iter()
            .map(|x| {
                json!({
                    "id": x.id,
                    "index": x.index,
                    "picard_rank": x.picard_rank,
                    "degree": x.degree,
                    "genus": x.genus,
                })
            })
            .collect();
        Report {
            command: "catalog".into(),
            version: version(),
            fingerprint: fingerprint.to_string(),
            inputs: json!({}),
            results: json!({
                "threefolds": entries,
                "aux_rings": ["G24", "LQ"],
            }),
        }
    }

    pub fn spec_report(catalog: &Catalog, spec: &InstantonSpec) -> Result<Report, InstantonError> {
        let x = &spec.x;
        let table = cohomology_table(spec, (spec.eps - x.index)..=0)?;
        let table_json: Vec<Value> = table
            .p_range
            .iter()
            .enumerate()
            .map(|(col, &p)| {
                let cell = |q: usize| match &table.rows[q][col] {
                    Entry::Known(v) => json!(v),
                    Entry::Undetermined => json!("undetermined"),
                };
                json!({
                    "p": p,
                    "h0": cell(0),
                    "h1": cell(1),
                    "h2": cell(2),
                    "h3": cell(3),
                })
            })
            .collect();

        let min_q = if spec.non_ordinary {
            Some(min_quantum(x, spec.eps)?)
        } else {
            None
        };
        let h1 = if !(spec.eps == 1 && x.index == 1) {
            Some(render(&h1_formula(spec)?))
        } else {
            None
        };
        let balance = render(&ext_balance(spec)?);
        let moduli = match moduli_dim(spec) {
            Ok(v) => json!(render(&v)),
            Err(e) => json!({ "rejected": e.to_string() }),
        };
        let plan = match serre_plan(spec) {
            Ok(p) => json!({
                "s": p.s,
                "a": p.a.to_string(),
                "b": p.b.to_string(),
                "z": p.z.to_string(),
                "c1": p.result.c1.to_string(),
                "c2": p.result.c2.to_string(),
            }),
            Err(e) => json!({ "rejected": e.to_string() }),
        };
        let ranks = MonadSpace::parse(&x.id)
            .ok()
            .and_then(|space| monad_ranks(space, spec.k).ok())
            .map(|r| json!({ "dim_h": r.dim_h, "dim_k": r.dim_k }));

        Ok(Report {
            command: "report".into(),
            version: version(),
            fingerprint: fano3::chow::catalog_fingerprint(&fano3::chow::export_catalog(catalog)),
            inputs: json!({
                "threefold": x.id,
                "eps": spec.eps,
                "k": spec.k,
            }),
            results: json!({
                "admissible": true,
                "non_ordinary": spec.non_ordinary,
                "even": spec.even,
                "q_eps": spec.q,
                "min_quantum": min_q,
                "h1_of_e": h1,
                "ext_balance": balance,
                "moduli_dim": moduli,
                "serre_plan": plan,
                "monad_ranks": ranks,
                "charge_class": spec.bundle_class.c2.to_string(),
                "cohomology_table": table_json,
            }),
        })
    }

    pub fn monad_sample(monad: &QMonad, verify: &VerifyReport) -> Report {
        let doc = export_monad(monad);
        Report {
            command: "monad sample".into(),
            version: version(),
            fingerprint: fingerprint(),
            inputs: json!({ "k": monad.k, "seed": monad.seed }),
            results: json!({
                "monad": serde_json::to_value(&doc).expect("monad doc serialises"),
                "verify_passed": verify.ok,
            }),
        }
    }

    pub fn monad_verify(monad: &QMonad, verify: &VerifyReport, points: usize) -> Report {
        Report {
            command: "monad verify".into(),
            version: version(),
            fingerprint: fingerprint(),
            inputs: json!({ "k": monad.k, "seed": monad.seed, "points": points }),
            results: json!({
                "ok": verify.ok,
                "points_checked": verify.points_checked,
                "witness": verify.witness,
            }),
        }
    }

    pub fn monad_scan(monad: &QMonad, stats: &ScanStats, workers: usize) -> Report {
        Report {
            command: "monad scan".into(),
            version: version(),
            fingerprint: fingerprint(),
            inputs: json!({
                "k": monad.k,
                "seed": stats.seed,
                "lines": stats.lines,
                "workers": workers,
            }),
            results: json!({
                "jumping_count": stats.jumping_count,
                "histogram": stats.histogram,
                "witnesses": serde_json::to_value(&stats.witnesses).expect("witnesses serialise"),
            }),
        }
    }

    pub fn monad_pencil(monad: &QMonad, count: &PencilCount) -> Report {
        Report {
            command: "monad pencil".into(),
            version: version(),
            fingerprint: fingerprint(),
            inputs: json!({ "k": monad.k, "seed": monad.seed, "family_seed": count.family_seed }),
            results: json!({
                "degree": count.degree,
                "distinct_roots": count.distinct_roots,
                "squarefree": count.squarefree,
                "base_point": count.base_point,
            }),
        }
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("values serialise")
}

fn render_value(label: &str, v: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            let mut out = format!("{pad}{label}:\n");
            for (k, val) in map {
                out.push_str(&render_value(k, val, indent + 1));
            }
            out
        }
        Value::Array(items) => {
            let simple = items
                .iter()
                .all(|x| !matches!(x, Value::Object(_) | Value::Array(_)));
            if simple {
                format!("{pad}{label}: {}\n", compact(v))
            } else {
                let mut out = format!("{pad}{label}:\n");
                for item in items {
                    out.push_str(&format!("{pad}  - {}\n", compact(item)));
                }
                out
            }
        }
        other => format!("{pad}{label}: {}\n", compact(other)),
    }
}
