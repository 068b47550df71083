//! Instanton-specific arithmetic: admissibility and quantum-number bounds,
//! cohomology tables in the natural range, Ext balance, moduli dimensions,
//! Serre-construction planning and the elementary-transformation ledger.
//!
//! An instanton class on X is a rank-2 bundle class with c1 = -eps h; its
//! quantum number is k = deg(h c2). The spec (X, eps, k) is non-ordinary
//! when index - eps is odd, and then k must be even and at least the sharp
//! lower bound (2, or 4 when index = 2 with degree >= 6 or index = 1).

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bundles::{
    dual, end_of_rank2, riemann_roch, serre_bundle, twist, BundleClass, BundleError,
};
use crate::chow::{ChowError, CycleClass, FanoThreefold, PRIME_GENERA};
use crate::rat::{frac, rat, render, to_i64, Rat};

#[derive(Debug, Error)]
pub enum InstantonError {
    #[error("index {0} out of range 1..=4")]
    IndexOutOfRange(i64),
    #[error("epsilon must be 0 or 1, got {0}")]
    BadEpsilon(i64),
    #[error(
        "operation requires a non-ordinary spec (index - eps odd); the ordinary-case bound \
         is outside this tool's scope"
    )]
    OrdinarySpec,
    #[error("quantum number {k} violates the sharp bound {min} on {id}")]
    BelowBound { id: String, k: i64, min: i64 },
    #[error("quantum number must be even for non-ordinary specs, got {0}")]
    OddQuantum(i64),
    #[error("h^1 formula needs (eps, index) != (1, 1): its derivation uses h^2 = 0")]
    H1Undefined,
    #[error("Serre planner rejects index 1: the constructed bundle has h^0 = 1 there")]
    PlannerIndexOne,
    #[error("conic count s = {0} is not a non-negative integer")]
    BadConicCount(String),
    #[error("moduli formula hypotheses violated: {0}")]
    ModuliHypotheses(String),
    #[error("genus {0} outside the admitted range 3..=10, 12")]
    GenusOutOfRange(i64),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Chow(#[from] ChowError),
}

/// q_X^eps = floor((index + 1 - eps) / 2), for 1 <= index <= 4.
pub fn q_epsilon(index: i64, eps: i64) -> Result<i64, InstantonError> {
    if !(1..=4).contains(&index) {
        return Err(InstantonError::IndexOutOfRange(index));
    }
    if !(0..=1).contains(&eps) {
        return Err(InstantonError::BadEpsilon(eps));
    }
    Ok((index + 1 - eps).div_euclid(2))
}

/// Sharp lower bound for the quantum number of an indecomposable
/// non-ordinary instanton bundle.
pub fn min_quantum(x: &FanoThreefold, eps: i64) -> Result<i64, InstantonError> {
    if !(0..=1).contains(&eps) {
        return Err(InstantonError::BadEpsilon(eps));
    }
    if (x.index - eps) % 2 == 0 {
        return Err(InstantonError::OrdinarySpec);
    }
    Ok(if x.index >= 3 || (x.index == 2 && x.degree <= 5) {
        2
    } else {
        4
    })
}

/// A (threefold, eps, quantum number) spec with its derived invariants and
/// the normalised rank-2 bundle class carrying the charge.
#[derive(Debug, Clone)]
pub struct InstantonSpec {
    pub x: Arc<FanoThreefold>,
    pub eps: i64,
    pub k: i64,
    pub q: i64,
    /// eps parity: even instanton iff eps = 0.
    pub even: bool,
    /// index - eps parity.
    pub non_ordinary: bool,
    pub bundle_class: BundleClass,
    pub verdict: Admissibility,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Admissibility {
    Admissible,
    /// k below the sharp bound for a non-ordinary spec.
    BelowBound { min: i64 },
    /// Non-ordinary specs must have even k.
    OddQuantum,
}

impl InstantonSpec {
    /// Builds the spec with the default charge class: k * line for the
    /// Picard-rank-one entries, (k/2) * conic (even k) or k * line (odd k)
    /// otherwise. deg(h c2) = k in all cases.
    pub fn new(x: &Arc<FanoThreefold>, eps: i64, k: i64) -> Result<Self, InstantonError> {
        let charge = default_charge(x, k);
        Self::with_charge(x, eps, k, charge)
    }

    /// Same, with an explicitly chosen charge class of h-degree k.
    pub fn with_charge(
        x: &Arc<FanoThreefold>,
        eps: i64,
        k: i64,
        charge: CycleClass,
    ) -> Result<Self, InstantonError> {
        let q = q_epsilon(x.index, eps)?;
        let hc2 = x.h.mul(&charge).degree_of()?;
        if hc2 != rat(k) {
            return Err(InstantonError::Inconsistent(format!(
                "charge has h-degree {}, expected {k}",
                render(&hc2)
            )));
        }
        let c1 = x.h.scale(&rat(-eps));
        let bundle_class = BundleClass::new(2, c1, charge, x.ring.zero());
        let non_ordinary = (x.index - eps) % 2 != 0;
        let verdict = if non_ordinary {
            if k % 2 != 0 {
                Admissibility::OddQuantum
            } else {
                let min = min_quantum(x, eps)?;
                if k < min {
                    Admissibility::BelowBound { min }
                } else {
                    Admissibility::Admissible
                }
            }
        } else {
            Admissibility::Admissible
        };
        Ok(InstantonSpec {
            x: Arc::clone(x),
            eps,
            k,
            q,
            even: eps % 2 == 0,
            non_ordinary,
            bundle_class,
            verdict,
        })
    }

    pub fn is_admissible(&self) -> bool {
        self.verdict == Admissibility::Admissible
    }

    fn require_admissible(&self) -> Result<(), InstantonError> {
        match &self.verdict {
            Admissibility::Admissible => Ok(()),
            Admissibility::OddQuantum => Err(InstantonError::OddQuantum(self.k)),
            Admissibility::BelowBound { min } => Err(InstantonError::BelowBound {
                id: self.x.id.clone(),
                k: self.k,
                min: *min,
            }),
        }
    }

    /// The class of E(t h).
    pub fn twisted(&self, t: i64) -> BundleClass {
        twist(&self.bundle_class, &self.x.h.scale(&rat(t)))
    }
}

fn default_charge(x: &Arc<FanoThreefold>, k: i64) -> CycleClass {
    if x.picard_rank == 1 {
        return x.line_class.scale(&rat(k));
    }
    if k % 2 == 0 {
        x.conic_classes[0].scale(&frac(k, 2))
    } else {
        // deg(h . line) = 1 on every catalog entry
        x.line_class.scale(&rat(k))
    }
}

/// h^1(E) = -chi(E) = eps - 2 + (index - eps) k / 2, for (eps, index)
/// different from (1, 1). Cross-checked against Riemann-Roch.
pub fn h1_formula(spec: &InstantonSpec) -> Result<Rat, InstantonError> {
    if spec.eps == 1 && spec.x.index == 1 {
        return Err(InstantonError::H1Undefined);
    }
    let value = rat(spec.eps - 2) + frac((spec.x.index - spec.eps) * spec.k, 2);
    let rr = -riemann_roch(&spec.x, &spec.bundle_class);
    if value != rr {
        return Err(InstantonError::Inconsistent(format!(
            "h^1 formula {} disagrees with -chi = {}",
            render(&value),
            render(&rr)
        )));
    }
    Ok(value)
}

/// h^1 - h^2 of End(E): 2 index k - index eps deg(X)/2 - 3, asserted equal
/// to 1 - chi(End E) by Riemann-Roch. A mismatch is a catalog inconsistency
/// and surfaces as a hard error.
pub fn ext_balance(spec: &InstantonSpec) -> Result<Rat, InstantonError> {
    spec.require_admissible()?;
    let i = spec.x.index;
    let value = rat(2 * i * spec.k) - frac(i * spec.eps * spec.x.degree, 2) - rat(3);
    let end = end_of_rank2(&spec.bundle_class)?;
    let rr = rat(1) - riemann_roch(&spec.x, &end);
    if value != rr {
        return Err(InstantonError::Inconsistent(format!(
            "ext balance {} disagrees with 1 - chi(End) = {}",
            render(&value),
            render(&rr)
        )));
    }
    Ok(value)
}

/// Dimension of the moduli component at the constructed bundles:
/// 8k-5 (index 4), 6k-3 (index 3), 4k-deg-3 (index 2), 2k-3 (index 1,
/// prime family). Requires a non-ordinary spec with k at least the sharp
/// bound; asserted equal to ext_balance.
pub fn moduli_dim(spec: &InstantonSpec) -> Result<Rat, InstantonError> {
    if !spec.non_ordinary {
        return Err(InstantonError::OrdinarySpec);
    }
    spec.require_admissible()?;
    if spec.x.index == 1 && spec.x.picard_rank != 1 {
        return Err(InstantonError::ModuliHypotheses(
            "index-1 formula covers the prime family only".into(),
        ));
    }
    let k = spec.k;
    let value = match spec.x.index {
        4 => rat(8 * k - 5),
        3 => rat(6 * k - 3),
        2 => rat(4 * k - spec.x.degree - 3),
        1 => rat(2 * k - 3),
        i => return Err(InstantonError::IndexOutOfRange(i)),
    };
    let balance = ext_balance(spec)?;
    if value != balance {
        return Err(InstantonError::Inconsistent(format!(
            "moduli dimension {} disagrees with ext balance {}",
            render(&value),
            render(&balance)
        )));
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// Cohomology tables
// ---------------------------------------------------------------------------

/// A table entry: a value forced by the vanishing ranges and Riemann-Roch,
/// or explicitly undetermined (the table never guesses).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Entry {
    Known(i64),
    Undetermined,
}

/// Values h^q(E(p h)) for q = 0..3 over a twist range.
#[derive(Debug, Clone, Serialize)]
pub struct CohomologyTable {
    pub p_range: Vec<i64>,
    /// rows[q][column] with q = 0, 1, 2, 3.
    pub rows: Vec<Vec<Entry>>,
}

impl CohomologyTable {
    pub fn get(&self, q: usize, p: i64) -> &Entry {
        let col = self
            .p_range
            .iter()
            .position(|&x| x == p)
            .expect("p outside requested range");
        &self.rows[q][col]
    }
}

/// Fills the table from the forced vanishing ranges: semistability vanishings
/// for h^0/h^3, the h^1 and h^2 vanishing ranges, and naturality in
/// eps - index <= t <= 0 where the one possibly-nonzero entry per column is
/// +-chi(E(t h)). Everything else is Undetermined.
pub fn cohomology_table(
    spec: &InstantonSpec,
    p_range: std::ops::RangeInclusive<i64>,
) -> Result<CohomologyTable, InstantonError> {
    spec.require_admissible()?;
    let (i, eps, q) = (spec.x.index, spec.eps, spec.q);
    let odd = (i - eps) % 2 != 0;
    let h2_vanish_from = if odd { 1 - q } else { -q };
    // natural-range windows: h^1 may live in [1-q, 0], h^2 in
    // [eps - i, eps - i - 1 + q]
    let w1 = (1 - q, 0);
    let w2 = (eps - i, eps - i - 1 + q);

    let chi_at = |t: i64| -> Result<i64, InstantonError> {
        let chi = riemann_roch(&spec.x, &spec.twisted(t));
        to_i64(&chi).ok_or_else(|| {
            InstantonError::Inconsistent(format!(
                "non-integral chi at twist {t}: {}",
                render(&chi)
            ))
        })
    };

    let mut rows = vec![Vec::new(); 4];
    let p_list: Vec<i64> = p_range.collect();
    for &t in &p_list {
        let h0 = if t <= 0 {
            Entry::Known(0)
        } else {
            Entry::Undetermined
        };
        let h3 = if t >= eps - i {
            Entry::Known(0)
        } else {
            Entry::Undetermined
        };
        let mut h1 = if t <= -q {
            Entry::Known(0)
        } else {
            Entry::Undetermined
        };
        let mut h2 = if t >= h2_vanish_from {
            Entry::Known(0)
        } else {
            Entry::Undetermined
        };
        if t >= w1.0 && t <= w1.1 {
            // only h^1 can be nonzero here
            let v = -chi_at(t)?;
            if v < 0 {
                return Err(InstantonError::Inconsistent(format!(
                    "forced h^1(E({t}h)) = {v} < 0"
                )));
            }
            h1 = Entry::Known(v);
            h2 = Entry::Known(0);
        }
        if t >= w2.0 && t <= w2.1 {
            let v = chi_at(t)?;
            if v < 0 {
                return Err(InstantonError::Inconsistent(format!(
                    "forced h^2(E({t}h)) = {v} < 0"
                )));
            }
            h2 = Entry::Known(v);
            h1 = Entry::Known(0);
        }
        rows[0].push(h0);
        rows[1].push(h1);
        rows[2].push(h2);
        rows[3].push(h3);
    }
    let table = CohomologyTable {
        p_range: p_list,
        rows,
    };
    // structural check: at most one nonzero entry per column inside the
    // natural range, and the alternating sum matches chi when all four
    // entries are known
    for (col, &t) in table.p_range.iter().enumerate() {
        let entries: Vec<Entry> = (0..4).map(|qq| table.rows[qq][col].clone()).collect();
        if t >= eps - i && t <= 0 {
            let nonzero = entries
                .iter()
                .filter(|e| matches!(e, Entry::Known(v) if *v != 0))
                .count();
            if nonzero > 1 {
                return Err(InstantonError::Inconsistent(format!(
                    "naturality fails in column {t}"
                )));
            }
        }
        if let (Entry::Known(a), Entry::Known(b), Entry::Known(c), Entry::Known(d)) = (
            entries[0].clone(),
            entries[1].clone(),
            entries[2].clone(),
            entries[3].clone(),
        ) {
            if a - b + c - d != chi_at(t)? {
                return Err(InstantonError::Inconsistent(format!(
                    "alternating sum mismatch in column {t}"
                )));
            }
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Serre planner
// ---------------------------------------------------------------------------

/// Output of the Serre-construction planner: s disjoint conics in class Z,
/// end twists A and B, and the resulting rank-2 class.
#[derive(Debug, Clone)]
pub struct SerrePlan {
    pub s: i64,
    pub a: CycleClass,
    pub b: CycleClass,
    pub z: CycleClass,
    pub result: BundleClass,
}

/// Plans the conic construction: s = (k + 2q - 2)/2 disjoint conics,
/// A = (1 - q - eps) h, B = (q - 1) h. Index 1 is rejected (the construction
/// produces a section there). The result is asserted to have c1 = -eps h
/// and deg(h c2) = k.
pub fn serre_plan(spec: &InstantonSpec) -> Result<SerrePlan, InstantonError> {
    if spec.x.index == 1 {
        return Err(InstantonError::PlannerIndexOne);
    }
    if !spec.non_ordinary {
        return Err(InstantonError::OrdinarySpec);
    }
    spec.require_admissible()?;
    let q = spec.q;
    let s_rat = frac(spec.k + 2 * q - 2, 2);
    let s = to_i64(&s_rat)
        .filter(|&s| s >= 0)
        .ok_or_else(|| InstantonError::BadConicCount(render(&s_rat)))?;
    let a = spec.x.h.scale(&rat(1 - q - spec.eps));
    let b = spec.x.h.scale(&rat(q - 1));
    let z = spec.x.conic_classes[0].scale(&rat(s));
    let result = serre_bundle(&spec.x, &a, &b, &z)?;
    if result.c1 != spec.x.h.scale(&rat(-spec.eps)) {
        return Err(InstantonError::Inconsistent("planner c1 mismatch".into()));
    }
    let hc2 = spec.x.h.mul(&result.c2).degree_of()?;
    if hc2 != rat(spec.k) {
        return Err(InstantonError::Inconsistent(format!(
            "planner charge mismatch: deg(h c2) = {}",
            render(&hc2)
        )));
    }
    Ok(SerrePlan { s, a, b, z, result })
}

// ---------------------------------------------------------------------------
// Numeric ledgers
// ---------------------------------------------------------------------------

/// The chi ledger of the elementary transformation E_{k,phi} = ker(E_k -> O_C)
/// on a prime Fano threefold, re-derived through Riemann-Roch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementaryTransformLedger {
    pub k: i64,
    pub h_c2: i64,
    pub c3: i64,
    pub dim_ext1: i64,
    pub chi_ee: i64,
    pub chi_e_oc: i64,
    pub chi_oc_e: i64,
    pub chi_oc_oc: i64,
}

/// Ledger for even k >= 2. chi(E_k, E_k) = chi(End E_k) is computed by
/// Riemann-Roch on every prime-family entry (it is genus independent), and
/// dim Ext^1 = 1 - (chi(E,E) - chi(E,O_C) - chi(O_C,E) + chi(O_C,O_C))
/// must come out as 2k + 1.
pub fn elementary_transform_ledger(
    catalog: &crate::chow::Catalog,
    k: i64,
) -> Result<ElementaryTransformLedger, InstantonError> {
    if k % 2 != 0 || k < 2 {
        return Err(InstantonError::OddQuantum(k));
    }
    let mut chi_ee = None;
    for g in PRIME_GENERA {
        let x = catalog.prime(g)?;
        let e = BundleClass::new(2, x.ring.zero(), x.line_class.scale(&rat(k)), x.ring.zero());
        let end = end_of_rank2(&e)?;
        let chi = riemann_roch(x, &end);
        let chi = to_i64(&chi).ok_or_else(|| {
            InstantonError::Inconsistent(format!("non-integral chi(End) = {}", render(&chi)))
        })?;
        match chi_ee {
            None => chi_ee = Some(chi),
            Some(prev) if prev != chi => {
                return Err(InstantonError::Inconsistent(
                    "chi(End) varies with the genus".into(),
                ))
            }
            _ => {}
        }
    }
    let chi_ee = chi_ee.expect("prime family is nonempty");
    if chi_ee != 4 - 2 * k {
        return Err(InstantonError::Inconsistent(format!(
            "chi(E,E) = {chi_ee}, expected {}",
            4 - 2 * k
        )));
    }
    let (chi_e_oc, chi_oc_e, chi_oc_oc) = (2, 2, 0);
    let dim_ext1 = 1 - (chi_ee - chi_e_oc - chi_oc_e + chi_oc_oc);
    if dim_ext1 != 2 * k + 1 {
        return Err(InstantonError::Inconsistent(format!(
            "dim Ext^1 = {dim_ext1}, expected {}",
            2 * k + 1
        )));
    }
    Ok(ElementaryTransformLedger {
        k,
        h_c2: k + 2,
        c3: 0,
        dim_ext1,
        chi_ee,
        chi_e_oc,
        chi_oc_e,
        chi_oc_oc,
    })
}

/// Canonical-curve route to a minimal even instanton on a genus-g prime
/// Fano: Z has degree 2g+2 and arithmetic genus g+2, the bundle has c1 = 0
/// and h c2 = 4. chi(O_X(h)) = h^3/2 + 3 = g + 2 is re-checked by
/// Riemann-Roch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalCurvePlan {
    pub genus: i64,
    pub deg_z: i64,
    pub pa_z: i64,
    pub c1: i64,
    pub h_c2: i64,
}

pub fn canonical_curve_plan(
    catalog: &crate::chow::Catalog,
    g: i64,
) -> Result<CanonicalCurvePlan, InstantonError> {
    if !PRIME_GENERA.contains(&g) {
        return Err(InstantonError::GenusOutOfRange(g));
    }
    let x = catalog.prime(g)?;
    let chi_oh = riemann_roch(x, &BundleClass::line_bundle(&x.h));
    if chi_oh != frac(x.degree, 2) + rat(3) || chi_oh != rat(g + 2) {
        return Err(InstantonError::Inconsistent(format!(
            "chi(O_X(h)) = {} off the prime-family value",
            render(&chi_oh)
        )));
    }
    Ok(CanonicalCurvePlan {
        genus: g,
        deg_z: 2 * g + 2,
        pa_z: g + 2,
        c1: 0,
        h_c2: 4,
    })
}

/// chi(E(th)) and chi of its Serre-dual twist, used by duality tests.
pub fn serre_twist_chi(spec: &InstantonSpec, t: i64) -> (Rat, Rat) {
    let lhs = riemann_roch(&spec.x, &spec.twisted(t));
    let dual_twist = twist(
        &dual(&spec.twisted(t)),
        &spec.x.h.scale(&rat(-spec.x.index)),
    );
    let rhs = riemann_roch(&spec.x, &dual_twist);
    (lhs, rhs)
}
