//! Verification suites run by `growth verify`.

use anyhow::{bail, Result};
use growth_core::cayley::{self, CayleyBall};
use growth_core::confalg::{self, render_rational};
use growth_core::config::{self, Configuration};
use growth_core::presentation::PresentationKind;
use growth_core::series::{self, FreeGroupForm, GrowthKind};
use growth_core::words::ElementStore;
use growth_core::Rational;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Assumptions,
    Lemma3,
    Kabi,
    #[value(name = "classC")]
    ClassC,
    Freegroup,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Assumptions => "assumptions",
            Suite::Lemma3 => "lemma3",
            Suite::Kabi => "kabi",
            Suite::ClassC => "classC",
            Suite::Freegroup => "freegroup",
        }
    }
}

/// Named pass/fail checks plus detail lines.
#[derive(Debug, Default)]
pub struct Report {
    pub checks: Vec<(String, bool, String)>,
    pub details: Vec<String>,
}

impl Report {
    fn check(&mut self, name: impl Into<String>, ok: bool, info: impl Into<String>) {
        self.checks.push((name.into(), ok, info.into()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, ok, info) in &self.checks {
            let status = if *ok { "pass" } else { "fail" };
            if info.is_empty() {
                out.push_str(&format!("{name}: {status}\n"));
            } else {
                out.push_str(&format!("{name}: {status} ({info})\n"));
            }
        }
        for d in &self.details {
            out.push_str(d);
            out.push('\n');
        }
        out
    }
}

pub struct Params {
    pub max_deg: usize,
    pub kabi_radius: Option<usize>,
    pub extension_size: usize,
}

pub fn run(suite: Suite, store: &ElementStore, p: &Params) -> Result<Report> {
    match suite {
        Suite::Assumptions => assumptions(store, p),
        Suite::Lemma3 => lemma3(store, p, false),
        Suite::ClassC => lemma3(store, p, true),
        Suite::Kabi => kabi(store, p),
        Suite::Freegroup => freegroup(store, p),
    }
}

fn assumptions(store: &ElementStore, p: &Params) -> Result<Report> {
    let mut r = Report::default();
    let h = store.horizon();
    if h < 2 {
        bail!("assumptions suite needs --n >= 2");
    }
    let validation = store.presentation().validate();
    let msgs: Vec<String> = validation.failures().map(|c| format!("{}: {}", c.name, c.failure.as_deref().unwrap_or(""))).collect();
    r.check("presentation", validation.passed(), msgs.join("; "));
    let cancel = store.cancellativity_violations();
    r.check("cancellative", cancel.is_empty(), format!("{} violations", cancel.len()));
    r.details.extend(cancel.into_iter().take(20).map(|v| format!("cancellativity: {v}")));

    let mut dead_total = 0;
    for n in 0..h {
        let dead = store.dead_elements(n)?;
        dead_total += dead.len();
        r.details.extend(dead.iter().take(5).map(|&g| format!("dead at n={n}: {}", store.render(g))));
    }
    r.check("dead_elements", dead_total == 0, format!("{dead_total} dead elements for n < {h}"));

    let n_ext = (h - 1).min(4);
    let ext = cayley::check_extension_property(store, n_ext, p.extension_size)?;
    r.check(
        "extension_property",
        ext.passed(),
        format!(
            "n={n_ext} k={} subgraphs={} classes={} isomorphisms={}",
            p.extension_size, ext.subgraphs, ext.classes, ext.isomorphisms_checked
        ),
    );
    r.details.extend(ext.failures.iter().take(20).map(|f| format!("extension: {f}")));

    let top = CayleyBall::new(store, h - 1)?;
    let entries = config::enumerate_connected(&top, p.max_deg);
    let work: Vec<(Configuration, usize)> = entries
        .iter()
        .flat_map(|e| (e.first_radius + 1..=h).map(move |n| (e.config.clone(), n)))
        .collect();
    let reports = work
        .par_iter()
        .map(|(s, n)| cayley::check_formula_f(store, s, *n))
        .collect::<growth_core::Result<Vec<_>>>()?;
    let holds = reports.iter().filter(|f| f.holds()).count();
    let equal = reports.iter().filter(|f| f.equality()).count();
    r.check("formula_bounds", holds == reports.len(), format!("{holds}/{} pairs (S,n)", reports.len()));
    if store.is_homogeneous() {
        r.check("formula_equality", equal == reports.len(), format!("{equal}/{} pairs (S,n)", reports.len()));
    } else {
        r.details.push(format!("formula_equality: {equal}/{} pairs (not required: group)", reports.len()));
    }
    for f in reports.iter().filter(|f| !f.holds() || (store.is_homogeneous() && !f.equality())) {
        r.details.push(format!("formula: S={} n={} lhs={} rhs={} bound={}", f.config, f.n, f.lhs, f.rhs, f.bound));
    }
    Ok(r)
}

fn lemma3(store: &ElementStore, p: &Params, class_c: bool) -> Result<Report> {
    let mut r = Report::default();
    let order = store.horizon();
    let entries = series::verify_class_c(store, p.max_deg, order)?;
    let (mut emb, mut part, mut radius) = (0, 0, 0);
    for e in &entries {
        emb += e.embedding_matches as usize;
        part += e.partition_matches as usize;
        radius += (e.radius_l == e.first_radius) as usize;
        r.details.push(format!(
            "S={} L={} first_radius={} counts={} Z={}",
            e.config,
            e.radius_l,
            e.first_radius,
            if e.embedding_matches { "ok" } else { "mismatch" },
            if e.partition_matches { "ok" } else { "mismatch" }
        ));
    }
    let total = entries.len();
    r.check("configurations", total > 0, format!("{total} with at most {} vertices", p.max_deg));
    r.check("counts_shift", emb == total, format!("{emb}/{total}: A(S,Γ_(n+L)) = #Γ_n for n+L <= {order}"));
    r.check("partition_monomial", part == total, format!("{part}/{total}: Z(S,t) = t^L to order {order}"));
    if class_c {
        r.check("radius_is_first_occurrence", radius == total, format!("{radius}/{total}"));
    }
    Ok(r)
}

fn kabi(store: &ElementStore, p: &Params) -> Result<Report> {
    let mut r = Report::default();
    let radius = p.kabi_radius.unwrap_or(store.horizon().saturating_sub(1));
    let table = confalg::kabi_table(store, p.max_deg, radius)?;
    let q = store.label_count();
    r.details.push(format!("configurations: {}", table.len()));
    let inv = table.inversion_failures();
    r.check("inversion", inv.is_empty(), format!("{} failing pairs of {}", inv.len(), table.len() * table.len()));
    let rec = table.reconstruction_failures(p.max_deg)?;
    r.check("reconstruction", rec.is_empty(), format!("{} failing T up to degree {}", rec.len(), p.max_deg));
    let neg = table.negative_entries();
    r.check("nonnegative", neg.is_empty(), format!("{} negative entries", neg.len()));
    let sup = table.support_violations();
    r.check("support", sup.is_empty(), format!("{} entries outside T ⊂ S", sup.len()));
    let van = table.vanishing_violations(q);
    r.check("vanishing_bound", van.is_empty(), format!("{} nonzero K(T,S) with #S > #T(#G-1)+2, #G={q}", van.len()));
    for (t, s, v) in &van {
        r.details.push(format!("vanishing: K({t},{s}) = {}", render_rational(v)));
    }
    let doubled = table.vanishing_violations(2 * q);
    r.details.push(format!("vanishing with valence {}: {} violations", 2 * q, doubled.len()));
    Ok(r)
}

fn freegroup(store: &ElementStore, p: &Params) -> Result<Report> {
    let pres = store.presentation();
    if pres.kind != PresentationKind::FreeGroup {
        bail!("freegroup suite needs a FreeGroup:<f> presentation");
    }
    let f = pres.rank();
    let h = store.horizon();
    let mut r = Report::default();
    let ball = series::growth_series(store, GrowthKind::Ball, h)?;
    let closed = series::free_group_closed_form(f, 0, FreeGroupForm::EmbeddingSeries { order: h })?;
    r.check("growth_series", ball == closed, format!("P(t) to order {h}"));

    let entries = config::enumerate_connected(&CayleyBall::new(store, h)?, p.max_deg);
    let rows = entries
        .par_iter()
        .map(|e| -> growth_core::Result<(Configuration, usize, bool, bool, bool)> {
            let d = config::diameter_d(&e.config);
            let counts = config::embedding_counts_by_radius(store, &e.config, h)?;
            let mut count_ok = true;
            for (n, &c) in counts.iter().enumerate().skip(d / 2) {
                let want = series::free_group_closed_form(f, d, FreeGroupForm::Count { n })?.coeff(0);
                count_ok &= Rational::from_integer(c.into()) == want;
            }
            let pa = series::embedding_series(store, &e.config, h)?;
            let pa_ok = pa == series::free_group_closed_form(f, d, FreeGroupForm::EmbeddingSeries { order: h })?;
            let z = pa.div(&ball)?;
            let z_ok = z == series::free_group_closed_form(f, d, FreeGroupForm::Partition { order: h })?;
            Ok((e.config.clone(), d, count_ok, pa_ok, z_ok))
        })
        .collect::<growth_core::Result<Vec<_>>>()?;
    let total = rows.len();
    let tally = |k: fn(&(Configuration, usize, bool, bool, bool)) -> bool| rows.iter().filter(|x| k(x)).count();
    let (c, pa, z) = (tally(|x| x.2), tally(|x| x.3), tally(|x| x.4));
    r.check("counts", c == total, format!("{c}/{total} configurations, n <= {h}"));
    r.check("embedding_series", pa == total, format!("{pa}/{total}"));
    r.check("partition", z == total, format!("{z}/{total}"));
    for (s, d, a, b, zz) in &rows {
        r.details.push(format!("S={s} d={d} counts={a} series={b} Z={zz}"));
    }
    Ok(r)
}
