use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::contact::{
    canonical_rotation, classify_chain, classify_consistency, enumerate_structures, par_map_indices,
    ConsistencyClass, RotationVector, ThetaEvaluator, DEFAULT_CAP,
};
use crate::error::{domain, Result};
use crate::exactmath::{cf_expand_head, format_fraction, format_rational, int, rat, Rational};
use crate::plumbing::{
    lens_chain, prism_graph, seifert_to_plumbing, torus_surgery_chain, SeifertData, StabilizedDiagram,
    Vertex,
};

use super::qhb::{QhbMatch, QhbTemplates};
use super::spherical::{spherical_graph, SphericalKind};
use super::{lspace_status_general, o_membership, LSpaceStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Status {
    Fillable,
    NotFillable,
    Candidate,
    Unknown,
}

/// Which kind of argument settles a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    /// Rational homology ball fillings of stars with `e0 <= -2` come only
    /// from the QHB families, and only for `±ξ_can`.
    QhbClassification,
    /// A filling by a rational homology ball forces `θ = -2`.
    ThetaObstruction,
    /// A filled structure on an L-space with `e0 = -2`, or any `e0 >= 0`,
    /// is consistent or mostly consistent.
    ConsistencyFilter,
    /// Splitting along a mixed torus rules out every structure when
    /// `e0 = -1` and `r1 + r2 + r3 > 1 > r1 + r2`.
    MixedTorusSplitting,
    /// Parameter ranges of negative torus-knot surgeries that bound no ball.
    TorusKnotSurgery,
    /// Lens spaces: fillable exactly for `p/q ∈ 𝒪` and `±ξ_can`.
    LensClassification,
    /// Prism and the T/I-type spherical spaces bound no ball.
    SphericalTheta,
    /// Nothing known decides the case.
    OutsideKnownRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filling {
    Qhb(QhbMatch),
    LensBall { m: i64, h: i64 },
}

impl Filling {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Filling::Qhb(m) => serde_json::json!({ "kind": "qhb_plumbing", "family": m.to_json() }),
            Filling::LensBall { m, h } => serde_json::json!({ "kind": "lens_ball", "m": m, "h": h }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub rule: Rule,
    pub reason: String,
    pub filling: Option<Filling>,
}

impl Verdict {
    fn new(status: Status, rule: Rule, reason: impl Into<String>) -> Self {
        Verdict { status, rule, reason: reason.into(), filling: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictInput {
    Seifert(SeifertData),
    Lens(i64, i64),
    Prism(i64, i64),
    TorusSurgery(i64, i64, Rational),
    /// `Σ(p, q, pqn + 1)`.
    Brieskorn(i64, i64, i64),
    Spherical(SphericalKind),
}

impl fmt::Display for VerdictInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictInput::Seifert(s) => write!(f, "{s}"),
            VerdictInput::Lens(p, q) => write!(f, "L({p},{q})"),
            VerdictInput::Prism(p, q) => write!(f, "D({p},{q})"),
            VerdictInput::TorusSurgery(p, q, r) => write!(f, "S3_{}(T({p},{q}))", format_rational(r)),
            VerdictInput::Brieskorn(p, q, n) => write!(f, "Sigma({p},{q},{})", p * q * n + 1),
            VerdictInput::Spherical(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerdictOptions {
    pub cap: u64,
    pub threads: usize,
    pub canonical_only: bool,
    pub templates: QhbTemplates,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions { cap: DEFAULT_CAP, threads: 1, canonical_only: false, templates: QhbTemplates::builtin() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureVerdict {
    pub rotation: RotationVector,
    pub theta: Option<Rational>,
    pub class: Option<ConsistencyClass>,
    pub verdict: Verdict,
}

impl StructureVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "rotation": self.rotation.0,
            "theta": self.theta.as_ref().map(format_fraction),
            "class": self.class.map(|c| c.label()),
            "status": self.verdict.status,
            "justification": { "rule": self.verdict.rule, "reason": self.verdict.reason },
        });
        if let Some(f) = &self.verdict.filling {
            v["construction"] = f.to_json();
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerdictReport {
    pub input: String,
    pub diagram: StabilizedDiagram,
    pub qhb: Option<QhbMatch>,
    pub lspace: Option<LSpaceStatus>,
    pub structures: Vec<StructureVerdict>,
}

impl VerdictReport {
    pub fn all(&self, status: Status) -> bool {
        self.structures.iter().all(|s| s.verdict.status == status)
    }

    pub fn count(&self, status: Status) -> usize {
        self.structures.iter().filter(|s| s.verdict.status == status).count()
    }

    /// Candidate structures with `ξ` and `-ξ` identified.
    pub fn candidate_classes(&self) -> usize {
        let mut seen = BTreeSet::new();
        for s in &self.structures {
            if s.verdict.status == Status::Candidate {
                let neg = s.rotation.negated();
                seen.insert(if neg < s.rotation { neg } else { s.rotation.clone() });
            }
        }
        seen.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "input": self.input,
            "qhb": self.qhb.as_ref().map(|m| m.to_json()),
            "lspace": self.lspace,
            "candidate_classes": self.candidate_classes(),
            "structures": self.structures.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        })
    }
}

enum Branch {
    AllNot(Rule, String),
    CanonicalOnly { rule: Rule, filling: Filling },
    Consistency,
    Undecided(String),
}

struct Plan {
    diagram: StabilizedDiagram,
    branch: Branch,
    use_theta: bool,
    qhb: Option<QhbMatch>,
    lspace: Option<LSpaceStatus>,
}

impl Plan {
    fn new(diagram: StabilizedDiagram, branch: Branch) -> Self {
        Plan { diagram, branch, use_theta: true, qhb: None, lspace: None }
    }
}

/// The `e0 >= 0` model: a 0-framed center (never stabilized) with legs from
/// `-1/s_i`, where `s_1 = e0 + r1` sits on the largest invariant.
fn rolled_diagram(s: &SeifertData) -> Result<StabilizedDiagram> {
    let [r1, r2, r3] = s.r();
    let slopes = [int(s.e0()) + r1, r2.clone(), r3.clone()];
    let legs = slopes
        .iter()
        .map(|x| {
            Ok(cf_expand_head(&x.recip())?.coeffs().iter().map(|&a| Vertex::plumbing(-a)).collect())
        })
        .collect::<Result<Vec<Vec<Vertex>>>>()?;
    StabilizedDiagram::star(Vertex { weight: 0, capacity: 0 }, &legs)
}

fn seifert_plan(s: &SeifertData, opts: &VerdictOptions) -> Result<Plan> {
    let e0 = s.e0();
    if e0 >= 0 {
        let mut plan = Plan::new(rolled_diagram(s)?, Branch::Consistency);
        plan.use_theta = false;
        plan.lspace = Some(LSpaceStatus::LSpace);
        return Ok(plan);
    }
    let d = seifert_to_plumbing(s);
    if e0 == -1 {
        let [r1, r2, r3] = s.r();
        let branch = if r1 + r2 + r3 > Rational::one() && r1 + r2 < Rational::one() {
            Branch::AllNot(Rule::MixedTorusSplitting, "r1 + r2 + r3 > 1 > r1 + r2".into())
        } else {
            Branch::Undecided("e0 = -1 outside the range r1 + r2 + r3 > 1 > r1 + r2".into())
        };
        let mut plan = Plan::new(d, branch);
        plan.use_theta = false;
        plan.lspace = Some(lspace_status_general(s));
        return Ok(plan);
    }
    if e0 < -4 {
        return Ok(Plan::new(
            d,
            Branch::AllNot(Rule::QhbClassification, format!("e0 = {e0} < -4 admits no rational homology ball")),
        ));
    }
    let qhb = opts.templates.match_diagram(&d);
    let branch = match &qhb {
        Some(m) => Branch::CanonicalOnly { rule: Rule::QhbClassification, filling: Filling::Qhb(m.clone()) },
        None if e0 <= -3 => Branch::AllNot(Rule::QhbClassification, "not in any QHB family".into()),
        None => match lspace_status_general(s) {
            LSpaceStatus::LSpace => Branch::Consistency,
            _ => Branch::Undecided("e0 = -2, not in a QHB family and not an L-space".into()),
        },
    };
    let mut plan = Plan::new(d, branch);
    plan.lspace = (e0 == -2).then(|| lspace_status_general(s));
    plan.qhb = qhb;
    Ok(plan)
}

fn torus_plan(p: i64, q: i64, r: &Rational) -> Result<Plan> {
    let d = torus_surgery_chain(p, q, r)?;
    let integer = r.is_integer();
    let reciprocal = r.numer() == &(-num_bigint::BigInt::one());
    let trefoil = (p, q) == (2, 3);
    let decided = if trefoil { integer && *r < int(-1) } else { integer || reciprocal };
    let branch = if decided {
        Branch::AllNot(
            Rule::TorusKnotSurgery,
            if trefoil {
                "integral surgery below -1 on the trefoil".to_string()
            } else {
                format!("surgery coefficient {} on T({p},{q}) is a negative integer or -1/n", format_rational(r))
            },
        )
    } else {
        Branch::Undecided("torus-knot surgery outside the decided ranges".into())
    };
    Ok(Plan::new(d, branch))
}

fn plan(input: &VerdictInput, opts: &VerdictOptions) -> Result<Plan> {
    match input {
        VerdictInput::Seifert(s) => seifert_plan(s, opts),
        VerdictInput::Lens(p, q) => {
            let d = lens_chain(*p, *q)?;
            let branch = match o_membership(*p, *q)? {
                Some((m, h)) => Branch::CanonicalOnly { rule: Rule::LensClassification, filling: Filling::LensBall { m, h } },
                None => Branch::AllNot(Rule::LensClassification, format!("{p}/{q} is not of the form m²/(mh-1)")),
            };
            Ok(Plan::new(d, branch))
        }
        VerdictInput::Prism(p, q) => {
            let d = prism_graph(*p, *q)?;
            Ok(Plan::new(d, Branch::AllNot(Rule::SphericalTheta, "prism manifolds bound no rational homology ball".into())))
        }
        VerdictInput::Spherical(kind) => {
            let d = spherical_graph(*kind)?;
            Ok(Plan::new(d, Branch::AllNot(Rule::SphericalTheta, format!("{kind} bounds no rational homology ball"))))
        }
        VerdictInput::TorusSurgery(p, q, r) => {
            if !r.is_negative() {
                return domain("torus-knot surgery coefficient must be negative");
            }
            torus_plan(*p, *q, r)
        }
        VerdictInput::Brieskorn(p, q, n) => {
            if *n < 1 {
                return domain(format!("n = {n} must be positive"));
            }
            torus_plan(*p, *q, &rat(-1, *n))
        }
    }
}

fn decide(branch: &Branch, canonical: bool, class: Option<ConsistencyClass>) -> Verdict {
    match branch {
        Branch::AllNot(rule, why) => Verdict::new(Status::NotFillable, *rule, why.clone()),
        Branch::CanonicalOnly { rule, filling } => {
            if canonical {
                Verdict { filling: Some(filling.clone()), ..Verdict::new(Status::Fillable, *rule, "±canonical structure") }
            } else {
                Verdict::new(Status::NotFillable, *rule, "only ±canonical fills")
            }
        }
        Branch::Consistency => match class {
            Some(ConsistencyClass::Inconsistent) | None => {
                Verdict::new(Status::NotFillable, Rule::ConsistencyFilter, "inconsistent stabilizations")
            }
            Some(c) => Verdict::new(Status::Candidate, Rule::ConsistencyFilter, format!("{} structure; existence open", c.label())),
        },
        Branch::Undecided(why) => Verdict::new(Status::Unknown, Rule::OutsideKnownRange, why.clone()),
    }
}

fn class_of(d: &StabilizedDiagram, rot: &RotationVector) -> Option<ConsistencyClass> {
    if d.center().is_some() {
        classify_consistency(d, rot).ok()
    } else {
        Some(classify_chain(d, rot))
    }
}

/// Per-structure verdicts; `θ ≠ -2` overrides every verdict except
/// NotFillable wherever `θ` is defined.
pub fn filling_verdict(input: &VerdictInput, opts: &VerdictOptions) -> Result<VerdictReport> {
    let plan = plan(input, opts)?;
    let d = &plan.diagram;
    let can = canonical_rotation(d);
    let rotations = if opts.canonical_only {
        vec![can.clone()]
    } else {
        enumerate_structures(d).collect_all(opts.cap)?
    };
    let eval = if plan.use_theta { ThetaEvaluator::new(d).ok() } else { None };
    let minus_two = int(-2);
    let structures = par_map_indices(rotations.len(), opts.threads, |i| {
        let rotation = rotations[i].clone();
        let theta = eval.as_ref().map(|e| e.theta(&rotation));
        let class = class_of(d, &rotation);
        let canonical = rotation == can || rotation == can.negated();
        let mut verdict = decide(&plan.branch, canonical, class);
        if let Some(t) = &theta {
            if *t != minus_two && verdict.status != Status::NotFillable {
                verdict = Verdict::new(
                    Status::NotFillable,
                    Rule::ThetaObstruction,
                    format!("theta = {} is not -2", format_rational(t)),
                );
            }
        }
        StructureVerdict { rotation, theta, class, verdict }
    });
    Ok(VerdictReport {
        input: input.to_string(),
        diagram: plan.diagram.clone(),
        qhb: plan.qhb,
        lspace: plan.lspace,
        structures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstruct::brieskorn;

    fn run(input: VerdictInput) -> VerdictReport {
        filling_verdict(&input, &VerdictOptions::default()).unwrap()
    }

    fn seifert(e0: i64, r: [Rational; 3]) -> VerdictInput {
        VerdictInput::Seifert(SeifertData::new(e0, r).unwrap())
    }

    #[test]
    fn lens_cases() {
        let r = run(VerdictInput::Lens(9, 5));
        let can = canonical_rotation(&r.diagram);
        for s in &r.structures {
            let pm = s.rotation == can || s.rotation == can.negated();
            assert_eq!(s.verdict.status == Status::Fillable, pm);
            if pm {
                assert_eq!(s.verdict.filling, Some(Filling::LensBall { m: 3, h: 2 }));
            }
        }
        assert!(run(VerdictInput::Lens(8, 3)).all(Status::NotFillable));
        let four = run(VerdictInput::Lens(4, 1));
        assert_eq!(four.count(Status::Fillable), 2);
        assert_eq!(four.count(Status::NotFillable), 1);
    }

    #[test]
    fn spherical_cases() {
        assert!(run(VerdictInput::Prism(11, 3)).all(Status::NotFillable));
        for k in [SphericalKind::T3, SphericalKind::T27, SphericalKind::I49] {
            assert!(run(VerdictInput::Spherical(k)).all(Status::NotFillable));
        }
    }

    #[test]
    fn torus_cases() {
        let r = run(brieskorn(2, 5, 1).unwrap());
        assert_eq!(r.input, "Sigma(2,5,11)");
        assert!(r.all(Status::NotFillable));
        assert!(run(VerdictInput::TorusSurgery(2, 3, int(-4))).all(Status::NotFillable));
        let open = run(VerdictInput::TorusSurgery(2, 3, int(-1)));
        let can = canonical_rotation(&open.diagram);
        let at_can = open.structures.iter().find(|s| s.rotation == can).unwrap();
        assert_eq!(at_can.theta, Some(int(-2)));
        assert_eq!(at_can.verdict.status, Status::Unknown);
        assert!(filling_verdict(&VerdictInput::TorusSurgery(2, 3, int(1)), &VerdictOptions::default()).is_err());
    }

    #[test]
    fn deep_e0_is_never_fillable() {
        assert!(run(seifert(-5, [rat(1, 2), rat(1, 3), rat(1, 5)])).all(Status::NotFillable));
        assert!(run(seifert(-7, [rat(4, 5), rat(2, 3), rat(3, 7)])).all(Status::NotFillable));
    }

    #[test]
    fn mixed_torus_range() {
        let r = run(seifert(-1, [rat(1, 2), rat(1, 3), rat(1, 4)]));
        assert!(r.all(Status::NotFillable));
        assert!(r.structures.iter().all(|s| s.verdict.rule == Rule::MixedTorusSplitting));
        let open = run(seifert(-1, [rat(1, 2), rat(1, 2), rat(1, 2)]));
        assert!(open.all(Status::Unknown));
        // sorted, (4/5, 1/5, 1/10) has r1 + r2 = 1 and sits on the boundary
        assert!(run(seifert(-1, [rat(4, 5), rat(1, 10), rat(1, 5)])).all(Status::Unknown));
    }

    #[test]
    fn qhb_family_member() {
        let t = QhbTemplates::builtin();
        let d = t.get("W").unwrap().instantiate([1, 0, 2]).unwrap();
        let (c, legs) = d.star_weights().unwrap();
        let r: Vec<Rational> = legs.iter().map(|l| crate::exactmath::cf_eval(&l.iter().map(|w| -w).collect::<Vec<_>>()).unwrap().recip()).collect();
        let s = SeifertData::new(c, [r[0].clone(), r[1].clone(), r[2].clone()]).unwrap();
        let rep = run(VerdictInput::Seifert(s));
        assert_eq!(rep.qhb.as_ref().map(|m| m.id.as_str()), Some("W"));
        assert_eq!(rep.count(Status::Fillable), 2);
        assert_eq!(rep.count(Status::Fillable) + rep.count(Status::NotFillable), rep.structures.len());
    }

    #[test]
    fn e0_minus_two_lspace_filter() {
        let r = run(seifert(-2, [rat(3, 8), rat(1, 3), rat(1, 3)]));
        assert_eq!(r.lspace, Some(LSpaceStatus::LSpace));
        assert_eq!(r.qhb, None);
        for s in &r.structures {
            if s.class == Some(ConsistencyClass::Inconsistent) {
                assert_eq!(s.verdict.status, Status::NotFillable);
            }
            assert_ne!(s.verdict.status, Status::Fillable);
        }
        assert!(r.candidate_classes() <= 4);
    }

    #[test]
    fn theta_filter_is_last() {
        for input in [
            seifert(-2, [rat(2, 3), rat(1, 2), rat(1, 3)]),
            seifert(-2, [rat(3, 8), rat(1, 3), rat(1, 3)]),
            VerdictInput::Lens(9, 5),
            VerdictInput::TorusSurgery(2, 5, rat(-3, 2)),
        ] {
            for s in run(input).structures {
                if let Some(t) = &s.theta {
                    if *t != int(-2) {
                        assert_eq!(s.verdict.status, Status::NotFillable);
                    }
                }
            }
        }
    }

    #[test]
    fn nonnegative_e0() {
        let r = run(seifert(1, [rat(1, 2), rat(1, 2), rat(1, 4)]));
        assert!(r.structures.iter().all(|s| s.theta.is_none()));
        assert!(r.structures.iter().all(|s| match s.class {
            Some(ConsistencyClass::Inconsistent) => s.verdict.status == Status::NotFillable,
            _ => s.verdict.status == Status::Candidate,
        }));
        assert!(r.candidate_classes() <= 4);
        assert_eq!(r.diagram.weights()[0], 0);
    }

    #[test]
    fn canonical_only_and_json() {
        let opts = VerdictOptions { canonical_only: true, ..VerdictOptions::default() };
        let r = filling_verdict(&VerdictInput::Lens(9, 5), &opts).unwrap();
        assert_eq!(r.structures.len(), 1);
        let j = r.to_json();
        assert_eq!(j["input"], "L(9,5)");
        assert_eq!(j["structures"][0]["status"], "Fillable");
        assert_eq!(j["structures"][0]["theta"], "-2/1");
        assert_eq!(j["structures"][0]["justification"]["rule"], "LensClassification");
        assert_eq!(j["structures"][0]["construction"]["kind"], "lens_ball");
    }

    #[test]
    fn threads_do_not_change_results() {
        let input = seifert(-2, [rat(3, 8), rat(2, 7), rat(1, 3)]);
        let one = run(input.clone());
        let four = filling_verdict(&input, &VerdictOptions { threads: 4, ..VerdictOptions::default() }).unwrap();
        assert_eq!(one, four);
    }
}
