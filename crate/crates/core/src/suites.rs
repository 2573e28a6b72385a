//! Verification suites, registered by name and selected at run time.

use std::path::Path;

use crate::equivariant::{
    check_osg_axioms, load_representation, tva_check, verify_mathai_quillen, virasoro_class_check, weil_c,
    OsgStructure, PieceWindow, TensorAlgebra,
};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::rational::Q;
use crate::report::Report;
use crate::vertex::{axiom_suite, AxiomSamples, Family};
use crate::weil::WeilAlgebra;

/// Which O(s𝔤)-algebra plays the role of `𝒜`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Point,
    /// A second copy of `𝒲(𝔤)` with primed labels.
    Weil,
    Linear(Vec<Vec<Vec<Q>>>),
}

impl Coefficients {
    /// `point`, `weil` or `linear:<path>`; the path is resolved against `base`.
    pub fn parse(selector: &str, lie: &LieAlgebra, base: Option<&Path>) -> Result<Self> {
        match selector {
            "point" => Ok(Coefficients::Point),
            "weil" => Ok(Coefficients::Weil),
            s => {
                let path = s
                    .strip_prefix("linear:")
                    .ok_or_else(|| Error::Input(format!("unknown model selector `{s}` (point | weil | linear:<path>)")))?;
                let path = match base {
                    Some(b) if Path::new(path).is_relative() => b.join(path),
                    _ => Path::new(path).to_path_buf(),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
                let (rep_lie, rho) = load_representation(&text, path.parent())?;
                let n = lie.dim();
                let same = rep_lie.basis == lie.basis
                    && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| rep_lie.c(i, j, k) == lie.c(i, j, k))));
                if !same {
                    return Err(Error::Input(format!(
                        "representation is over {}, not over {}",
                        rep_lie.name, lie.name
                    )));
                }
                Ok(Coefficients::Linear(rho))
            }
        }
    }

    pub fn structure(&self, lie: &LieAlgebra) -> Result<OsgStructure> {
        match self {
            Coefficients::Point => Ok(OsgStructure::trivial(lie)),
            Coefficients::Weil => Ok(OsgStructure::weil(lie)),
            Coefficients::Linear(rho) => OsgStructure::linear_model(lie, rho),
        }
    }

    /// `𝒲(𝔤)⊗𝒜` with the algebra's default invariant form.
    pub fn tensor(&self, lie: &LieAlgebra) -> Result<TensorAlgebra> {
        TensorAlgebra::new(WeilAlgebra::with_default_form(lie.clone()), self.structure(lie)?)
    }
}

pub struct SuiteContext {
    pub lie: LieAlgebra,
    pub coefficients: Coefficients,
    pub window: PieceWindow,
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn run(&self, ctx: &SuiteContext) -> Result<Report>;
}

struct LieSuite;
struct AxiomSuite;
struct WeilSuite;
struct OsgSuite;
struct TvaSuite;
struct MathaiQuillenSuite;
struct VirasoroClassSuite;

impl Suite for LieSuite {
    fn name(&self) -> &'static str {
        "lie"
    }
    fn describe(&self) -> &'static str {
        "antisymmetry, Jacobi identity and the declared invariant form"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Report> {
        let mut r = Report::new("lie", &ctx.lie.name);
        r.check("structure constants", ctx.lie.validate().map(|_| format!("dimension {}", ctx.lie.dim())).map_err(|e| e.to_string()));
        if let Some(f) = &ctx.lie.declared_form {
            r.check(
                "form invariance",
                match f.invariance_violation(&ctx.lie) {
                    None if f.is_symmetric() => Ok("symmetric and invariant".into()),
                    None => Err("form is not symmetric".into()),
                    Some((i, j, k)) => Err(format!("violated at ({i}, {j}, {k})")),
                },
            );
        }
        Ok(r)
    }
}

impl Suite for AxiomSuite {
    fn name(&self) -> &'static str {
        "axioms"
    }
    fn describe(&self) -> &'static str {
        "circle-algebra identities on generators and composite fields of W(g)"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Report> {
        let w = WeilAlgebra::with_default_form(ctx.lie.clone());
        let mut states: Vec<_> = [Family::B, Family::C, Family::Beta, Family::Gamma].iter().map(|f| w.gen(*f, 0)).collect();
        states.push(w.theta_w(0));
        states.push(w.j_bc());
        states.push(w.omega_w());
        let samples = AxiomSamples::new(states);
        Ok(axiom_suite(&w.gs, &samples, &ctx.lie.name))
    }
}

impl Suite for WeilSuite {
    fn name(&self) -> &'static str {
        "weil"
    }
    fn describe(&self) -> &'static str {
        "OPE catalog of W(g) and square-zero, contraction and grading identities on pieces"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Report> {
        let w = WeilAlgebra::with_default_form(ctx.lie.clone());
        let mut r = w.verify_ope_catalog();
        r.merge(w.verify_pieces(ctx.window.max_weight, ctx.window.degrees.clone()));
        Ok(r.cutoff("max_weight", ctx.window.max_weight as i64))
    }
}

impl Suite for OsgSuite {
    fn name(&self) -> &'static str {
        "osg"
    }
    fn describe(&self) -> &'static str {
        "O(sg)-algebra axioms of the selected coefficient algebra"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Report> {
        Ok(check_osg_axioms(&ctx.coefficients.structure(&ctx.lie)?, &ctx.window))
    }
}

impl Suite for TvaSuite {
    fn name(&self) -> &'static str {
        "tva"
    }
    fn describe(&self) -> &'static str {
        "topological vertex algebra relations on W(C) (ignores --algebra)"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Report> {
        let (w, fields) = weil_c();
        Ok(tva_check(&w.gs, &fields, &ctx.window))
    }
}

impl Suite for MathaiQuillenSuite {
    fn name(&self) -> &'static str {
        "mathai-quillen"
    }
    fn describe(&self) -> &'static str {
        "conjugation identities of exp(phi(0)) and the basic-to-Cartan isomorphism"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Report> {
        Ok(verify_mathai_quillen(&ctx.coefficients.tensor(&ctx.lie)?, &ctx.window))
    }
}

impl Suite for VirasoroClassSuite {
    fn name(&self) -> &'static str {
        "bfl"
    }
    fn describe(&self) -> &'static str {
        "class-level properties of the Virasoro element bfL in the cohomology of a point"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Report> {
        let t = Coefficients::Point.tensor(&ctx.lie)?;
        virasoro_class_check(&t, ctx.window.max_weight, *ctx.window.degrees.end())
    }
}

static SUITES: &[&dyn Suite] =
    &[&LieSuite, &AxiomSuite, &WeilSuite, &OsgSuite, &TvaSuite, &MathaiQuillenSuite, &VirasoroClassSuite];

pub fn suites() -> &'static [&'static dyn Suite] {
    SUITES
}

pub fn suite_by_name(name: &str) -> Result<&'static dyn Suite> {
    SUITES.iter().copied().find(|s| s.name() == name).ok_or_else(|| {
        let names: Vec<_> = SUITES.iter().map(|s| s.name()).collect();
        Error::Input(format!("unknown suite `{name}` (known: {})", names.join(", ")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(lie: LieAlgebra) -> SuiteContext {
        SuiteContext { lie, coefficients: Coefficients::Point, window: PieceWindow::new(1, -2..=3) }
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(suite_by_name("tva").unwrap().name(), "tva");
        assert!(suite_by_name("nope").is_err());
        let mut names: Vec<_> = suites().iter().map(|s| s.name()).collect();
        names.dedup();
        assert_eq!(names.len(), suites().len());
    }

    #[test]
    fn every_suite_passes_on_sl2() {
        let c = ctx(LieAlgebra::sl2());
        for s in suites() {
            let r = s.run(&c).unwrap();
            assert!(r.passed(), "{}: {r}", s.name());
        }
    }

    #[test]
    fn corrupted_form_is_reported() {
        let mut lie = LieAlgebra::sl2();
        lie.declared_form = Some(crate::lie::BilinearForm::identity(3));
        let r = suite_by_name("weil").unwrap().run(&ctx(lie)).unwrap();
        assert!(!r.passed());
        assert_eq!(r.find("form invariance").unwrap().status, crate::report::Status::Fail);
    }

    #[test]
    fn selector_parsing() {
        let lie = LieAlgebra::sl2();
        assert_eq!(Coefficients::parse("point", &lie, None).unwrap(), Coefficients::Point);
        assert!(Coefficients::parse("linear:/does/not/exist.json", &lie, None).is_err());
        assert!(Coefficients::parse("torus", &lie, None).is_err());
    }
}
