//! JSON rendering and the full reproduction run: every catalog entry against
//! every check, plus golden identities from the worked examples.

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, CatalogEntry};
use crate::error::Result;
use crate::exterior::{Bidegree, Form, Monomial, Space};
use crate::hodge::{harmonic_membership, mono, CheckId, Hodge, Membership, Status, Subspace, VerificationReport};
use crate::linalg::Matrix;
use crate::model::{validate, CheckStatus, ValidationReport};
use crate::operators::{apply_matrix, Differential, OperatorId, OperatorMatrix, SymCalculus};
use crate::scalar::{Coefficient, GaussianRational, Nonzeroness, SymScalar};
use crate::ENGINE_VERSION;

type Q = GaussianRational;

/// `[{monomial, coeff}, ...]` in monomial order.
pub fn form_json<C: Coefficient>(f: &Form<C>) -> Value {
    Value::Array(f.iter().map(|(m, c)| json!({ "monomial": m.to_string(), "coeff": c.to_string() })).collect())
}

pub fn subspace_json(v: &Subspace) -> Value {
    json!({
        "ambient": v.ambient().to_string(),
        "dim": v.dim(),
        "basis": v.forms().iter().map(form_json).collect::<Vec<_>>(),
    })
}

/// Row-major entries as canonical scalar text.
pub fn matrix_entries(m: &Matrix<Q>) -> Value {
    Value::Array(
        (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect())).collect(),
    )
}

pub fn operator_matrix_json(spec_name: &str, m: &OperatorMatrix, n: usize) -> Value {
    json!({
        "spec_name": spec_name,
        "engine_version": ENGINE_VERSION,
        "operator": m.id.to_string(),
        "source": m.source.to_string(),
        "target": m.target.to_string(),
        "source_basis": m.source.basis(n).iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "target_basis": m.target.basis(n).iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "rows": m.matrix.rows(),
        "cols": m.matrix.cols(),
        "entries": matrix_entries(&m.matrix),
    })
}

/// The verification report with the engine version and a top-level
/// `witness` (the first one) when there is one.
pub fn verification_json(r: &VerificationReport) -> Value {
    let mut v = serde_json::to_value(r).expect("reports serialize");
    let obj = v.as_object_mut().expect("object");
    obj.insert("engine_version".into(), ENGINE_VERSION.into());
    obj.insert("verdict".into(), r.verdict().into());
    if let Some(w) = r.witnesses.first() {
        obj.insert("witness".into(), form_json(&w.form));
    }
    v
}

pub fn validation_json(r: &ValidationReport) -> Value {
    let mut v = serde_json::to_value(r).expect("reports serialize");
    let obj = v.as_object_mut().expect("object");
    obj.insert("engine_version".into(), ENGINE_VERSION.into());
    obj.insert("check_id".into(), "validate".into());
    obj.insert("status".into(), if r.is_clean() { "Holds" } else { "Fails" }.into());
    v
}

/// A concrete identity from one of the worked examples, evaluated exactly.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Golden {
    pub spec_name: String,
    pub check_id: String,
    pub statement: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_form")]
    pub witness: Option<Form<SymScalar>>,
    pub detail: Vec<String>,
}

fn ser_opt_form<S: serde::Serializer>(f: &Option<Form<SymScalar>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match f {
        Some(f) => form_json(f).serialize(s),
        None => s.serialize_none(),
    }
}

impl Golden {
    fn new(spec: &str, id: &str, statement: impl Into<String>, holds: bool) -> Self {
        Self {
            spec_name: spec.into(),
            check_id: id.into(),
            statement: statement.into(),
            status: if holds { Status::Holds } else { Status::Fails },
            witness: None,
            detail: Vec::new(),
        }
    }

    fn with_witness(mut self, f: Form<SymScalar>) -> Self {
        self.witness = Some(f);
        self
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.detail.push(s.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("golden serializes");
        v.as_object_mut().expect("object").insert("engine_version".into(), ENGINE_VERSION.into());
        v
    }
}

fn sym(f: &Form<Q>) -> Form<SymScalar> {
    f.to_symbolic()
}

fn q(re: i64, im: i64) -> Q {
    Q::from_ints(re, im)
}

/// Reference generators of invariant `H^{2,1}_∂̄` on the Iwasawa entry. The
/// third one is not ∂̄-harmonic for this structure; see `h21_delbar`.
pub fn iwasawa_harmonic_21_generators() -> Vec<Form<Q>> {
    vec![
        mono(&[1, 3], &[1]) + mono(&[2, 3], &[2]),
        mono(&[1, 3], &[2]) + mono(&[2, 3], &[1]) + mono(&[2, 3], &[2]).scale_const(&q(0, -2)),
        mono(&[1, 3], &[3]) + mono(&[2, 3], &[3]),
    ]
}

fn golden_torus6_f(entry: &CatalogEntry) -> Result<Vec<Golden>> {
    let spec = &entry.spec;
    let calc = SymCalculus::new(spec)?;
    let a: Form<SymScalar> = Form::basis(Monomial::new(&[1], &[3]));
    let f_sym = spec.symbols.get("F").expect("declared").symbol.clone();
    let quarter_f = SymScalar::symbol(f_sym).scale(&Q::ratio(1, 4));
    let expected = Form::monomial(Monomial::new(&[], &[1, 2, 3]), quarter_f);
    let mubar = calc.differential(Differential::Mubar, &a)?;
    let mu = calc.differential(Differential::Mu, &a)?;
    let strongest = mubar.iter().map(|(_, c)| c.nonzeroness()).next().unwrap_or(Nonzeroness::Zero);
    let report = validate(spec)?;
    let skipped = matches!(report.d_squared[0].status, CheckStatus::SkippedOpaque(_));
    let name = &spec.name;
    Ok(vec![
        Golden::new(name, "mubar_phi13", "mubar(phi{1,3}) = 1/4*F*phi{,123}", mubar == expected).with_witness(mubar.clone()),
        Golden::new(name, "mu_phi13", "mu(phi{1,3}) = 0", mu.is_zero()).with_witness(mu),
        Golden::new(
            name,
            "mubar_phi13_nonzero",
            "the coefficient of mubar(phi{1,3}) is declared nonvanishing, so (Delta_delbar - Delta_del) phi{1,3} = -mubar* mubar phi{1,3} is nonzero",
            strongest == Nonzeroness::NonzeroDeclared,
        )
        .note(format!("nonzeroness: {strongest:?}")),
        Golden::new(
            name,
            "validate",
            "d^2 phi1 is skipped (F' is opaque) and d omega = 0 is verified",
            skipped && report.omega_closed == CheckStatus::Verified && report.almost_kahler,
        ),
    ])
}

fn golden_h12_t3(entry: &CatalogEntry) -> Result<Vec<Golden>> {
    let spec = &entry.spec;
    let name = &spec.name;
    let h = Hodge::new(spec)?;
    let calc = h.calculus();
    let a = mono(&[1], &[4]);
    let mubar = calc.differential(Differential::Mubar, &a)?;
    let expected = mono(&[], &[2, 3, 4]).scale_const(&(Q::ratio(-1, 4) * Q::i()));
    let mu = calc.differential(Differential::Mu, &a)?;
    let space = Space::Bidegree(Bidegree::new(1, 1));
    let lap_bar = calc.matrix(OperatorId::Laplacian(Differential::Delbar), space)?;
    let lap = calc.matrix(OperatorId::Laplacian(Differential::Del), space)?;
    let diff = OperatorMatrix { matrix: &lap_bar.matrix - &lap.matrix, ..lap_bar.clone() };
    let image = apply_matrix(&diff, spec.n, &a).expect("(1,1)-form");
    let hb = h.harmonic_space(Differential::Delbar, Bidegree::new(1, 1))?;
    let hd = h.harmonic_space(Differential::Del, Bidegree::new(1, 1))?;
    Ok(vec![
        Golden::new(name, "mubar_psi14", "mubar(phi{1,4}) = -1/4*i*phi{,234}", mubar == expected)
            .with_witness(sym(&mubar)),
        Golden::new(name, "mu_psi14", "mu(phi{1,4}) = 0", mu.is_zero()),
        Golden::new(name, "laplacians_differ", "(Delta_delbar - Delta_del) phi{1,4} != 0", !image.is_zero())
            .with_witness(sym(&image)),
        Golden::new(name, "h11_equal", "invariant H^{1,1}_delbar = H^{1,1}_del", hb == hd).note(format!(
            "dim H^{{1,1}}_delbar = {}, dim H^{{1,1}}_del = {}",
            hb.dim(),
            hd.dim()
        )),
    ])
}

fn golden_torus6_g(entry: &CatalogEntry) -> Result<Vec<Golden>> {
    let spec = &entry.spec;
    let name = &spec.name;
    let calc = SymCalculus::new(spec)?;
    let a: Form<SymScalar> = Form::basis(Monomial::new(&[1], &[2]));
    let star = calc.star(&a)?;
    let star_expected = -calc.omega().wedge(&a);
    let del = harmonic_membership(&calc, Differential::Del, &a)?;
    let delbar = harmonic_membership(&calc, Differential::Delbar, &a)?;
    let v3g = spec.symbols.get("V3g").expect("declared").symbol.clone();
    let expected_witness = Form::monomial(Monomial::new(&[3], &[1, 2]), SymScalar::symbol(v3g));
    let separated = match &delbar {
        Membership::NotHarmonic { witness, nonzeroness, .. } => {
            *witness == expected_witness && *nonzeroness == Nonzeroness::NonzeroDeclared
        }
        _ => false,
    };
    let mut out = vec![
        Golden::new(name, "star_phi12", "*phi{1,2} = -omega ∧ phi{1,2}", star == star_expected),
        Golden::new(name, "phi12_del_harmonic", "phi{1,2} is del-harmonic", del.is_harmonic()),
        Golden::new(
            name,
            "phi12_not_delbar_harmonic",
            "phi{1,2} is not delbar-harmonic: delbar phi{1,2} = V3g*phi{3,12}",
            separated,
        ),
    ];
    if let Membership::NotHarmonic { witness, nonzeroness, .. } = delbar {
        let last = out.last_mut().expect("pushed");
        last.witness = Some(witness);
        last.detail.push(format!("nonzeroness: {nonzeroness:?}"));
    }
    Ok(out)
}

fn golden_iwasawa(entry: &CatalogEntry) -> Result<Vec<Golden>> {
    let spec = &entry.spec;
    let name = &spec.name;
    let h = Hodge::new(spec)?;
    let n = spec.n;
    let b21 = Bidegree::new(2, 1);
    let gens = iwasawa_harmonic_21_generators();
    let harmonic = h.harmonic_space(Differential::Delbar, b21)?;
    let reference_span = Subspace::span(Space::Bidegree(b21), n, &gens)?;
    let certificate = Hodge::change_of_basis(&harmonic, &gens);
    let prim = harmonic.intersect(&h.primitive_subspace(b21)?)?;
    let lifted = h.l_power_image(&h.harmonic_space(Differential::Delbar, Bidegree::new(1, 0))?, 1)?;
    let line = Subspace::span(Space::Bidegree(b21), n, &gens[..1])?;
    let sum = prim.sum(&lifted)?;
    let outsider = gens[1].clone();
    let dec = h.primitive_decompose(&outsider)?;
    let beta1 = dec.components.get(&1).cloned().unwrap_or_else(Form::zero);
    let real = entry.real.as_ref().expect("Iwasawa carries a real presentation");
    let complexified = real.presentation.complexify();
    let validation = validate(spec)?;

    let mut cert = Golden::new(
        name,
        "h21_delbar",
        "invariant H^{2,1}_delbar has dimension 3 and is spanned by phi{13,1}+phi{23,2}, phi{13,2}+phi{23,1}-2i*phi{23,2}, phi{13,3}+phi{23,3}",
        harmonic.dim() == 3 && harmonic == reference_span && certificate.is_some(),
    );
    for f in harmonic.forms() {
        cert = cert.note(format!("echelon basis: {f}"));
    }
    for (i, g) in gens.iter().enumerate() {
        if !harmonic.contains(g)? {
            cert = cert.note(format!("generator {} = {g} is not in the computed space", i + 1));
        }
    }
    if let Some(c) = &certificate {
        for i in 0..c.rows() {
            let row: Vec<String> = c.row(i).iter().map(|x| x.to_string()).collect();
            cert = cert.note(format!("generator {} = [{}] in the echelon basis", i + 1, row.join(", ")));
        }
    }
    Ok(vec![
        Golden::new(
            name,
            "complexify",
            "the real structure equations complexify to the stored 4 d phi1, 4 d phi2 and d phi3 = 0",
            spec.structure.iter().map(|f| f.to_constant()).collect::<Option<Vec<_>>>() == Some(complexified),
        ),
        Golden::new(
            name,
            "unitary_scale",
            "omega = i*(phi{1,1}+phi{2,2}+phi{3,3}) is closed with unitary scale 2",
            validation.unitary_scale.as_deref() == Some("2") && validation.almost_kahler,
        ),
        cert,
        Golden::new(name, "l_h10_line", "L(H^{1,0}_delbar) is the line through phi{13,1}+phi{23,2}", lifted == line),
        Golden::new(
            name,
            "not_in_sum",
            "phi{13,2}+phi{23,1}-2i*phi{23,2} is not in (H^{2,1}_delbar ∩ P^{2,1}) + L(H^{1,0}_delbar)",
            !sum.contains(&outsider)?,
        )
        .with_witness(sym(&outsider))
        .note(format!(
            "dim (H^{{2,1}}_delbar ∩ P^{{2,1}}) = {}, dim L(H^{{1,0}}_delbar) = {}",
            prim.dim(),
            lifted.dim()
        ))
        .note(format!(
            "primitive decomposition: {}",
            dec.components.iter().map(|(r, b)| format!("beta_{} = {b}", 3 - 2 * r)).collect::<Vec<_>>().join("; ")
        )),
        Golden::new(
            name,
            "not_primitive",
            "phi{13,2}+phi{23,1}-2i*phi{23,2} has a nonzero L-component in its primitive decomposition",
            !beta1.is_zero(),
        )
        .with_witness(sym(&beta1)),
    ])
}

/// Golden identities of the worked examples, grouped by catalog entry.
pub fn golden_identities() -> Result<Vec<Golden>> {
    let mut out = Vec::new();
    out.extend(golden_torus6_f(&catalog::get("torus6_f")?)?);
    out.extend(golden_h12_t3(&catalog::get("h12_t3")?)?);
    out.extend(golden_torus6_g(&catalog::get("torus6_g")?)?);
    out.extend(golden_iwasawa(&catalog::get("iwasawa_ak")?)?);
    Ok(out)
}

/// Results of one catalog entry.
#[derive(Clone, Debug)]
pub struct EntryRun {
    pub key: String,
    pub provenance: String,
    pub validation: ValidationReport,
    pub checks: Vec<VerificationReport>,
    /// `(check, expected, actual)` where the verdict differs from the catalog.
    pub mismatches: Vec<(CheckId, String, String)>,
}

#[derive(Clone, Debug)]
pub struct Reproduction {
    pub entries: Vec<EntryRun>,
    pub golden: Vec<Golden>,
}

/// Runs every catalog entry through validation and every check, then the
/// golden identities.
pub fn reproduce() -> Result<Reproduction> {
    let mut entries = Vec::new();
    for entry in catalog::all()? {
        let validation = validate(&entry.spec)?;
        let checks = if crate::hodge::inapplicability(&entry.spec, CheckId::Prop31).is_none() {
            Hodge::new(&entry.spec)?.verify_all()?
        } else {
            CheckId::ALL.into_iter().map(|id| crate::hodge::verify(&entry.spec, id)).collect::<Result<Vec<_>>>()?
        };
        let mismatches = entry
            .expected
            .iter()
            .zip(&checks)
            .filter(|(e, r)| e.verdict != r.verdict())
            .map(|(e, r)| (e.check, e.verdict.to_string(), r.verdict()))
            .collect();
        entries.push(EntryRun {
            key: entry.key.to_string(),
            provenance: entry.provenance.to_string(),
            validation,
            checks,
            mismatches,
        });
    }
    Ok(Reproduction { entries, golden: golden_identities()? })
}

impl Reproduction {
    /// Number of failed checks, failed goldens, unclean validations and
    /// verdicts that differ from the catalog expectations.
    pub fn failures(&self) -> usize {
        let checks = self.entries.iter().flat_map(|e| &e.checks).filter(|r| r.status == Status::Fails).count();
        let golden = self.golden.iter().filter(|g| g.status == Status::Fails).count();
        let validation = self.entries.iter().filter(|e| !e.validation.is_clean()).count();
        let mismatches: usize = self.entries.iter().map(|e| e.mismatches.len()).sum();
        checks + golden + validation + mismatches
    }

    pub fn to_json(&self) -> Value {
        json!({
            "engine_version": ENGINE_VERSION,
            "failures": self.failures(),
            "entries": self.entries.iter().map(|e| json!({
                "spec_name": e.key,
                "provenance": e.provenance,
                "validation": validation_json(&e.validation),
                "checks": e.checks.iter().map(verification_json).collect::<Vec<_>>(),
                "mismatches": e.mismatches.iter().map(|(c, exp, act)| json!({
                    "check_id": c.name(), "expected": exp, "actual": act,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "golden": self.golden.iter().map(Golden::to_json).collect::<Vec<_>>(),
        })
    }

    /// Human rendering of the same facts as [`Reproduction::to_json`].
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("== {} ({})\n", e.key, e.provenance));
            out.push_str(&format!(
                "   validate: {} (almost_kahler {}, unitary_scale {})\n",
                if e.validation.is_clean() { "clean" } else { "FAILED" },
                e.validation.almost_kahler,
                e.validation.unitary_scale.as_deref().unwrap_or("none"),
            ));
            for r in &e.checks {
                let extra = r.reason.as_deref().map(|s| format!(" [{s}]")).unwrap_or_default();
                out.push_str(&format!("   {:<13} {}{}\n", r.check_id.name(), r.verdict(), extra));
                for w in &r.witnesses {
                    out.push_str(&format!("      witness: {} ({})\n", w.form, w.explanation));
                }
            }
            for (c, exp, act) in &e.mismatches {
                out.push_str(&format!("   MISMATCH {c}: expected {exp}, got {act}\n"));
            }
        }
        out.push_str("== worked examples\n");
        for g in &self.golden {
            out.push_str(&format!("   [{}] {}/{}: {}\n", g.status, g.spec_name, g.check_id, g.statement));
            if let Some(w) = &g.witness {
                out.push_str(&format!("      value: {w}\n"));
            }
            for d in &g.detail {
                out.push_str(&format!("      {d}\n"));
            }
        }
        out.push_str(&format!("failures: {}\n", self.failures()));
        out
    }
}
