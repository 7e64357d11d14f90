//! Dispatch of a [`JobSpec`] to the library.

use std::ops::RangeInclusive;

use koszul_core::bimodule::GradedBimodule;
use koszul_core::duality::{DiagramStatus, Duality};
use koszul_core::hochschild::{
    basis_classes, check_cup_commutativity, cochain_window, compare_koszul_hochschild, hochschild_cohomology,
    hochschild_cup, hochschild_homology, verify_hochschild_cupcap_duality, Bar, HCochain,
};
use koszul_core::homology::HomologyReport;
use koszul_core::koszul::{
    chain_slice_exact, cochain_slice_exact, is_n_koszul, koszul_cohomology, koszul_homology, KoszulVerdict,
};
use koszul_core::linalg::{Field, PrimeField, Rationals};
use koszul_core::presentation::{check_single_monomial, nu, parse_document, Algebra, FieldSpec, MonomialVerdict};
use koszul_core::presentation::{Document, Presentation};
use koszul_core::presets::preset_text;
use koszul_core::products::{class_product, verify_identities, Chain, Cochain, IdentityBounds, KClass, ProductKind};

use crate::error::CliError;
use crate::format;
use crate::job::{CapSide, ClassRef, Command, JobSpec, OutputFormat, Source};
use crate::report::ReportDocument;

/// Reads the presentation, fixes the field and runs the command.
pub fn run(job: &JobSpec) -> Result<ReportDocument, CliError> {
    job.validate()?;
    let text = match &job.source {
        Source::Preset(name) => preset_text(name)?,
        Source::File(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
    };
    let doc = parse_document(&text)?;
    let spec = job.field.or(doc.field).unwrap_or(FieldSpec::Rationals);
    match spec {
        FieldSpec::Rationals => run_in(&Rationals, spec, &doc, job),
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(p).ok_or_else(|| CliError::Usage(format!("{p} is not a prime below 2^63")))?;
            run_in(&f, spec, &doc, job)
        }
    }
}

fn run_in<F: Field>(field: &F, spec: FieldSpec, doc: &Document, job: &JobSpec) -> Result<ReportDocument, CliError> {
    let pres = Presentation::from_document(field, doc)?;
    let mut out = ReportDocument::default();
    out.header.push(format!("koszulcalc {}", job.command.name()));
    out.header.push(format!(
        "source={} field={} gens={} N={} relations={}",
        job.source,
        field.name(),
        pres.gens().join(","),
        pres.n(),
        pres.relations().len()
    ));
    out.header.push(format!(
        "degrees={} weights={} seed={}",
        format::range(&job.degrees),
        format::range(&job.weights),
        job.seed
    ));
    if job.print_normalized {
        for l in pres.to_text(spec).lines() {
            out.header.push(format!("normalized: {l}"));
        }
    }
    let alg = Algebra::new(pres);
    let mut ctx = Ctx {
        alg: &alg,
        job,
        out: &mut out,
    };
    match &job.command {
        Command::Wspace => ctx.wspace(),
        Command::Dims => ctx.dims(),
        Command::Homology { classes } => ctx.koszul_report(false, *classes),
        Command::Cohomology { classes } => ctx.koszul_report(true, *classes),
        Command::Hochschild { cutoff, recheck } => ctx.hochschild(*cutoff, *recheck),
        Command::Cup { alpha, beta, cutoff } => ctx.cup(*alpha, *beta, *cutoff)?,
        Command::Cap { alpha, gamma, side } => ctx.cap(*alpha, *gamma, *side)?,
        Command::CheckKoszul => ctx.check_koszul(),
        Command::VerifyIdentities { trials } => ctx.verify_identities(*trials),
        Command::VerifyDuality { alpha, q } => ctx.verify_duality(*alpha, *q)?,
        Command::VerifyHochschild {
            alpha,
            q,
            cutoff,
            max_shift,
        } => ctx.verify_hochschild(*alpha, *q, *cutoff, *max_shift)?,
        Command::Compare { r_max, cutoff } => ctx.compare(*r_max, *cutoff),
        Command::CheckMonomial => ctx.check_monomial(),
    }
    Ok(out)
}

struct Ctx<'a, F: Field> {
    alg: &'a Algebra<F>,
    job: &'a JobSpec,
    out: &'a mut ReportDocument,
}

fn nonneg(w: &RangeInclusive<i64>) -> RangeInclusive<i64> {
    (*w.start()).max(0)..=*w.end()
}

impl<F: Field> Ctx<'_, F> {
    fn n(&self) -> usize {
        self.alg.n()
    }

    /// `A` on the weight window, with room for one differential.
    fn padded(&self) -> GradedBimodule<F> {
        GradedBimodule::regular(self.alg, 0, self.job.weight_bound() + self.n() as i64)
    }

    fn emit_report(&mut self, rep: &HomologyReport<F>) {
        let text = match self.job.format {
            OutputFormat::Table => rep.table(),
            OutputFormat::Records => rep.records(),
        };
        for l in text.lines() {
            self.out.line(l);
        }
    }

    fn wspace(&mut self) {
        self.out.section("W spaces");
        for p in self.job.degrees.clone() {
            let len = nu(self.n(), p);
            let ws = self.alg.w_space(len);
            self.out.line(format!("W p={p} len={len} dim={}", ws.dim()));
            if self.job.format == OutputFormat::Table {
                for (k, v) in ws.basis().iter().enumerate() {
                    let label = self.alg.w_label(len, k);
                    self.out.line(format!("  {label} = {}", self.alg.presentation().format_tensor(len, v)));
                }
            }
        }
    }

    fn dims(&mut self) {
        self.out.section("Hilbert series");
        for r in nonneg(&self.job.weights) {
            self.out.line(format!("A r={r} dim={}", self.alg.dim(r)));
        }
    }

    fn koszul_report(&mut self, cohomology: bool, list: bool) {
        let m = self.padded();
        let rep = if cohomology {
            koszul_cohomology(self.alg, &m, self.job.degrees.clone(), nonneg(&self.job.weights))
        } else {
            koszul_homology(self.alg, &m, self.job.degrees.clone(), nonneg(&self.job.weights))
        };
        self.out.section(if cohomology { "HK^p(A)_r" } else { "HK_p(A)_r" });
        self.emit_report(&rep);
        for p in self.job.degrees.clone() {
            self.out.line(format!("total p={p} dim={}", rep.total_dim(p)));
        }
        if list {
            self.out.section("classes");
            for p in self.job.degrees.clone() {
                for (i, (w, v)) in numbered(&rep, p).into_iter().enumerate() {
                    let text = if cohomology {
                        format::cochain(self.alg, p, w - nu(self.n(), p) as i64, &v)
                    } else {
                        format::chain(self.alg, p, w + nu(self.n(), p) as i64, &v)
                    };
                    self.out.line(format!("HK{p}:{i} r={w} {text}"));
                }
            }
        }
    }

    fn hochschild(&mut self, cutoff: usize, recheck: bool) {
        let m = GradedBimodule::regular(self.alg, 0, self.job.weight_bound());
        let rep = hochschild_homology(self.alg, &m, self.job.degrees.clone(), nonneg(&self.job.weights));
        self.out.section("HH_p(A)_t");
        self.emit_report(&rep);
        let w = cutoff as i64;
        let lo = *self.job.degrees.start();
        let hi = (*self.job.degrees.end()).min(cutoff);
        let m = GradedBimodule::regular(self.alg, 0, cochain_window(cutoff, w));
        let rep = hochschild_cohomology(self.alg, &m, lo..=hi, -w..=w, cutoff, recheck);
        self.out.section(format!("HH^p(A)_t (shift t, input cutoff {cutoff}, recheck={recheck})"));
        self.emit_report(&rep);
        for p in lo..=hi {
            self.out.line(format!("total p={p} dim={}", rep.total_dim(p)));
        }
    }

    /// Basis classes of degree `p` with coefficients in `A`, numbered in
    /// report order.
    fn hk_list(&self, p: usize, cohomology: bool) -> Result<Vec<KClass<F>>, CliError> {
        let m = self.padded();
        let rep = if cohomology {
            koszul_cohomology(self.alg, &m, p..=p, nonneg(&self.job.weights))
        } else {
            koszul_homology(self.alg, &m, p..=p, nonneg(&self.job.weights))
        };
        let np = nu(self.n(), p) as i64;
        let mut out = Vec::new();
        for (w, v) in numbered(&rep, p) {
            out.push(if cohomology {
                KClass::of_cochain(self.alg, &m, &Cochain::new(p, w - np, v))?
            } else {
                KClass::of_chain(self.alg, &m, &Chain::new(p, w + np, v))?
            });
        }
        Ok(out)
    }

    fn hk_class(&self, r: ClassRef, cohomology: bool) -> Result<KClass<F>, CliError> {
        let mut list = self.hk_list(r.degree, cohomology)?;
        if r.index >= list.len() {
            return Err(CliError::Usage(format!(
                "{r}: degree {} has {} classes in the weight window",
                r.degree,
                list.len()
            )));
        }
        Ok(list.swap_remove(r.index))
    }

    fn hh_classes(&self, max_degree: usize, shifts: RangeInclusive<i64>, cutoff: usize) -> Vec<HCochain<F::Elem>> {
        let reg = GradedBimodule::regular(self.alg, 0, cochain_window(cutoff, *shifts.end()));
        basis_classes(self.alg, &reg, max_degree, shifts, cutoff)
    }

    fn hh_class(&self, r: ClassRef, classes: &[HCochain<F::Elem>]) -> Result<HCochain<F::Elem>, CliError> {
        let of_degree: Vec<_> = classes.iter().filter(|c| c.p == r.degree).collect();
        of_degree
            .get(r.index)
            .map(|c| (*c).clone())
            .ok_or_else(|| CliError::Usage(format!("{r}: degree {} has {} classes", r.degree, of_degree.len())))
    }

    fn cup(&mut self, alpha: ClassRef, beta: ClassRef, cutoff: usize) -> Result<(), CliError> {
        if alpha.hochschild != beta.hochschild {
            return Err(CliError::Usage("cup needs two HK or two HH classes".into()));
        }
        self.out.section("cup");
        if alpha.hochschild {
            let w = cutoff as i64;
            let classes = self.hh_classes(alpha.degree.max(beta.degree), -w..=w, cutoff);
            let (f, g) = (self.hh_class(alpha, &classes)?, self.hh_class(beta, &classes)?);
            let reg = GradedBimodule::regular(self.alg, 0, cochain_window(cutoff, w));
            let c = hochschild_cup(self.alg, (&reg, &f), (&reg, &g))?;
            let h = Bar::new(self.alg, &reg).truncated_cohomology(c.p, c.s, c.cutoff);
            let value = if h.is_boundary(&c.v) {
                "coboundary".to_string()
            } else {
                format!("nonzero class of degree {} at shift {}", c.p, c.s)
            };
            self.out.line(format!("{alpha} ⌣ {beta} = {value}"));
            return Ok(());
        }
        // Products land at the sum of the weights.
        let big = GradedBimodule::regular(self.alg, 0, 2 * self.job.weight_bound() + self.n() as i64);
        let (a, b) = (self.hk_class(alpha, true)?, self.hk_class(beta, true)?);
        let prod = class_product(self.alg, (&big, &a), (&big, &b), ProductKind::Cup)?;
        let (fa, fb) = (
            format::cochain(self.alg, a.degree, a.weight, &a.rep),
            format::cochain(self.alg, b.degree, b.weight, &b.rep),
        );
        if !cochain_slice_exact(self.alg, &big, prod.degree, prod.weight) {
            self.out.check(false, format!("{fa} ⌣ {fb} = ? (outside the window)"));
        } else if prod.is_zero() {
            self.out.line(format!("{fa} ⌣ {fb} = coboundary"));
        } else {
            let text = format::cochain(self.alg, prod.degree, prod.weight, &prod.rep);
            self.out.line(format!("{fa} ⌣ {fb} = [{text}]"));
        }
        Ok(())
    }

    fn cap(&mut self, alpha: ClassRef, gamma: ClassRef, side: CapSide) -> Result<(), CliError> {
        if alpha.hochschild || gamma.hochschild {
            return Err(CliError::Usage("cap is available for HK classes".into()));
        }
        if gamma.degree < alpha.degree {
            return Err(CliError::Usage("cap needs the homology degree to be at least the cohomology degree".into()));
        }
        let big = GradedBimodule::regular(self.alg, 0, 2 * self.job.weight_bound() + self.n() as i64);
        let a = self.hk_class(alpha, true)?;
        let z = self.hk_class(gamma, false)?;
        let kind = match side {
            CapSide::Left => ProductKind::CapLeft,
            CapSide::Right => ProductKind::CapRight,
        };
        let prod = class_product(self.alg, (&big, &a), (&big, &z), kind)?;
        let fa = format::cochain(self.alg, a.degree, a.weight, &a.rep);
        let fz = format::chain(self.alg, z.degree, z.weight, &z.rep);
        let lhs = match side {
            CapSide::Left => format!("{fa} ⌢ {fz}"),
            CapSide::Right => format!("{fz} ⌢ {fa}"),
        };
        self.out.section("cap");
        if !chain_slice_exact(self.alg, &big, prod.degree, prod.weight) {
            self.out.check(false, format!("{lhs} = ? (outside the window)"));
        } else if prod.is_zero() {
            self.out.line(format!("{lhs} = boundary"));
        } else {
            let text = format::chain(self.alg, prod.degree, prod.weight, &prod.rep);
            self.out.line(format!("{lhs} = [{text}]"));
        }
        Ok(())
    }

    fn check_koszul(&mut self) {
        self.out.section("koszulity of K(A)");
        match is_n_koszul(self.alg, self.job.degree_bound(), self.job.weight_bound()) {
            KoszulVerdict::KoszulUpToBound {
                degree_bound,
                weight_bound,
            } => self.out.line(format!(
                "verdict=koszul exact_up_to_degree={degree_bound} exact_up_to_weight={weight_bound}"
            )),
            KoszulVerdict::NotKoszul {
                degree, weight, text, ..
            } => self
                .out
                .line(format!("verdict=not_koszul degree={degree} weight={weight} witness={text}")),
        }
    }

    fn verify_identities(&mut self, trials: usize) {
        let rep = verify_identities(
            self.alg,
            IdentityBounds {
                max_degree: self.job.degree_bound(),
                max_weight: self.job.weight_bound(),
                trials,
                seed: self.job.seed,
            },
        );
        self.out.section(format!("identities (trials={} seed={})", rep.trials, rep.seed));
        for c in &rep.checks {
            let status = if c.passed() { "pass" } else { "fail" };
            let mut line = format!("identity=\"{}\" cases={} failures={} status={status}", c.name, c.cases, c.failures);
            if let Some(first) = &c.first_failure {
                line.push_str(&format!(" first=\"{first}\""));
            }
            self.out.check(c.passed(), line);
        }
        if self.n() > 2 {
            let mut line = format!("chain_level_associativity_failures={}", rep.chain_level_failures);
            if let Some(ex) = &rep.chain_level_example {
                line.push_str(&format!(" example=\"{ex}\""));
            }
            self.out.line(line);
        }
    }

    fn verify_duality(&mut self, alpha: Option<ClassRef>, q: usize) -> Result<(), CliError> {
        let alphas = match alpha {
            Some(r) if r.hochschild => return Err(CliError::Usage("verify-duality takes an HK class".into())),
            Some(r) => vec![self.hk_class(r, true)?],
            None => {
                let mut v = Vec::new();
                for p in 0..=2 {
                    v.extend(self.hk_list(p, true)?);
                }
                v
            }
        };
        let reg = GradedBimodule::regular(self.alg, 0, self.job.weight_bound());
        let dual = GradedBimodule::dual(&reg, false);
        for m in [&reg, &dual] {
            let d = Duality::new(self.alg, m);
            self.out.section(format!("coefficients {} (slices)", m.label()));
            for s in d.check_slices(q) {
                let eta = d.check_eta(s.q, s.t);
                self.out.check(eta.passed(), eta.to_string());
                self.out.check(s.passed(), s.to_string());
            }
            self.out.section(format!("coefficients {} (diagrams)", m.label()));
            for a in &alphas {
                // Rebuild the class on the unpadded window used by the duality.
                let a = KClass::of_cochain(self.alg, &reg, &a.cochain())?;
                for r in d.verify_cupcap_diagrams(&reg, &a, q)? {
                    self.out.check(r.passed(), r.to_string());
                }
            }
        }
        Ok(())
    }

    fn verify_hochschild(
        &mut self,
        alpha: Option<ClassRef>,
        q: usize,
        cutoff: usize,
        max_shift: i64,
    ) -> Result<(), CliError> {
        let shifts = -(cutoff as i64)..=max_shift;
        let max_degree = alpha.map_or(2, |r| r.degree);
        let classes = self.hh_classes(max_degree, shifts.clone(), cutoff);
        let alphas = match alpha {
            Some(r) if !r.hochschild => return Err(CliError::Usage("verify-hochschild takes an HH class".into())),
            Some(r) => vec![self.hh_class(r, &classes)?],
            None => classes.clone(),
        };
        let reg = GradedBimodule::regular(self.alg, 0, cochain_window(cutoff, max_shift));
        let m = GradedBimodule::regular(self.alg, 0, (cutoff as i64 + 5).max(10));
        self.out.section(format!("Hochschild duality (cutoff {cutoff}, {} classes)", alphas.len()));
        let mut class_level = 0;
        for al in &alphas {
            for r in verify_hochschild_cupcap_duality(self.alg, &reg, &m, al, q, 0..=cutoff as i64)? {
                if r.diagram == "capsym" && r.status == DiagramStatus::Pass {
                    class_level += 1;
                }
                self.out.check(r.passed(), r.to_string());
            }
        }
        self.out.line(format!("class_level_pairs={class_level}"));
        let comm = check_cup_commutativity(self.alg, &reg, &classes, q)?;
        self.out.check(comm.violations == 0, comm.to_string());
        Ok(())
    }

    fn compare(&mut self, r_max: i64, cutoff: usize) {
        let m = GradedBimodule::regular(self.alg, 0, cochain_window(cutoff, r_max));
        let rep = compare_koszul_hochschild(self.alg, &m, r_max, cutoff);
        self.out.section(format!("Koszul vs Hochschild (cutoff {cutoff})"));
        for l in &rep.lines {
            self.out.check(l.passed(), l.to_string());
        }
        for l in &rep.inclusion {
            self.out.check(l.chain_map, l.to_string());
        }
    }

    fn check_monomial(&mut self) {
        self.out.section("single monomial relation");
        let v = check_single_monomial(self.alg.presentation());
        self.out.check(v != MonomialVerdict::NotApplicable, format!("verdict={}", v.as_str()));
        if v == MonomialVerdict::NotApplicable {
            return;
        }
        let n = self.n();
        for p in n + 1..=self.job.degree_bound().max(n + 1) {
            self.out.line(format!("W len={p} dim={}", self.alg.w_dim(p)));
        }
    }
}

/// Basis classes of degree p in report order: `(weight key, representative)`
/// over exact slices.
fn numbered<F: Field>(
    rep: &HomologyReport<F>,
    p: usize,
) -> Vec<(i64, koszul_core::linalg::SparseVec<F::Elem>)> {
    rep.entries
        .iter()
        .filter(|((d, _), e)| *d == p && e.exactness.is_exact())
        .flat_map(|((_, w), e)| e.representatives.iter().map(move |v| (*w, v.clone())))
        .collect()
}
