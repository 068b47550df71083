//! Slopes, effective-cone predicates, Hoppe-criterion obligation lists and
//! the divisor case analyses behind the sharp quantum-number bound.
//!
//! The engine cannot compute h^0 of arbitrary twists, so Hoppe's criterion
//! is exposed as a list of proof obligations (the divisors D for which
//! h^0(F(-D)) = 0 must be verified externally), not as a stability verdict.

use serde::Serialize;
use thiserror::Error;

use crate::bundles::BundleClass;
use crate::chow::{CycleClass, FanoThreefold};
use crate::rat::{frac, rat, Rat};

/// Default lattice window for enumerations over the Picard lattice.
pub const DEFAULT_WINDOW: i64 = 10;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("slope of a rank-0 class")]
    RankZero,
    #[error("case replay supports F62, F63, F7 only; got {0}")]
    UnsupportedVariety(String),
}

/// Divisor class in the Picard basis of a fixed threefold.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorClass {
    pub coords: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coords: Vec<i64>) -> Self {
        DivisorClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass {
            coords: vec![0; rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn to_cycle(&self, x: &FanoThreefold) -> CycleClass {
        x.divisor_class(&self.coords)
    }

    pub fn neg(&self) -> Self {
        DivisorClass {
            coords: self.coords.iter().map(|&c| -c).collect(),
        }
    }

    pub fn label(&self, x: &FanoThreefold) -> String {
        self.to_cycle(x).to_string()
    }
}

/// Slope of a divisor class: deg(D h^2).
pub fn divisor_slope(x: &FanoThreefold, d: &DivisorClass) -> Rat {
    let h2 = x.h.mul(&x.h);
    d.to_cycle(x)
        .mul(&h2)
        .degree_of()
        .expect("degree-3 product")
}

/// Slope of a bundle class: deg(c1 h^2) / rank.
pub fn slope(x: &FanoThreefold, f: &BundleClass) -> Result<Rat, StabilityError> {
    if f.rank == 0 {
        return Err(StabilityError::RankZero);
    }
    let h2 = x.h.mul(&x.h);
    let num = f.c1.mul(&h2).degree_of().expect("degree-3 product");
    Ok(num / rat(f.rank))
}

/// Membership in the effective cone (the zero divisor counts as a member).
pub fn effective_or_zero(x: &FanoThreefold, d: &DivisorClass) -> bool {
    x.effective_cone.iter().all(|row| {
        row.iter()
            .zip(&d.coords)
            .map(|(&r, &c)| r * c)
            .sum::<i64>()
            >= 0
    })
}

/// Effectivity of a nonzero divisor: cone membership plus D != 0.
pub fn effective(x: &FanoThreefold, d: &DivisorClass) -> bool {
    !d.is_zero() && effective_or_zero(x, d)
}

/// Enumerates the Hoppe proof obligations for a rank-2 class F: all lattice
/// divisors D with coordinates bounded by `window` whose slope is at least
/// mu(F) (strictly greater when `strict`, the semistability variant). For
/// each returned D, mu-(semi)stability requires h^0(F(-D)) = 0; the check
/// itself is outside the engine's reach.
pub fn hoppe_obligations(
    x: &FanoThreefold,
    f: &BundleClass,
    strict: bool,
    window: i64,
) -> Result<Vec<DivisorClass>, StabilityError> {
    assert_eq!(f.rank, 2, "Hoppe criterion stated for rank 2");
    let mu = slope(x, f)?;
    let mut out = Vec::new();
    let rank = x.picard_rank;
    let mut coords = vec![-window; rank];
    loop {
        let d = DivisorClass::new(coords.clone());
        let s = divisor_slope(x, &d);
        let keep = if strict { s > mu } else { s >= mu };
        if keep {
            out.push(d);
        }
        // odometer over the window
        let mut i = 0;
        loop {
            if i == rank {
                out.sort_by(|a, b| a.coords.cmp(&b.coords));
                return Ok(out);
            }
            if coords[i] < window {
                coords[i] += 1;
                break;
            }
            coords[i] = -window;
            i += 1;
        }
    }
}

/// Slope-balance condition for a decomposable instanton O(D) (+) O(-D-eps h):
/// deg(D h^2) = -eps h^3 / 2.
pub fn decomposable_balance(x: &FanoThreefold, eps: i64, d: &DivisorClass) -> bool {
    divisor_slope(x, d) == frac(-eps * x.degree, 2)
}

/// One enumeration step of the minimal-charge case analysis.
#[derive(Debug, Clone, Serialize)]
pub struct CaseStep {
    pub divisor: Vec<i64>,
    pub label: String,
    pub slope: String,
    pub bound_ok: bool,
    pub residual_charge: String,
    pub survives: bool,
}

/// Replay of the divisor case analysis on the Picard-rank >= 2 entries.
#[derive(Debug, Clone, Serialize)]
pub struct CaseTrace {
    pub id: String,
    pub steps: Vec<CaseStep>,
    pub survivors: Vec<Vec<i64>>,
}

impl CaseTrace {
    pub fn nonzero_survivors(&self) -> Vec<Vec<i64>> {
        self.survivors
            .iter()
            .filter(|c| c.iter().any(|&x| x != 0))
            .cloned()
            .collect()
    }
}

/// Replays the minimal-charge (k = 2) divisor analysis: enumerates
/// effective-or-zero D in a lattice window, keeps those with 2 D h^2 <= h^3,
/// and then cuts by the residual charge deg(h c2(E(h - D))), which equals
/// 2 - D h^2 + deg(h D^2) and must be non-negative since the zero locus of
/// the section represents it. Survivors on F62/F63 are 0 and the h_i, on
/// F7 exactly 0, f and xi - f.
pub fn sharp_case_replay(x: &FanoThreefold) -> Result<CaseTrace, StabilityError> {
    if !matches!(x.id.as_str(), "F62" | "F63" | "F7") {
        return Err(StabilityError::UnsupportedVariety(x.id.clone()));
    }
    let window = DEFAULT_WINDOW;
    let rank = x.picard_rank;
    let mut steps = Vec::new();
    let mut survivors = Vec::new();
    let mut coords = vec![-window; rank];
    loop {
        let d = DivisorClass::new(coords.clone());
        if effective_or_zero(x, &d) {
            let s = divisor_slope(x, &d);
            let bound_ok = rat(2) * s.clone() <= rat(x.degree);
            if bound_ok {
                let dc = d.to_cycle(x);
                // charge of E(h - D) at minimal charge 2
                let residual = rat(2) - s.clone()
                    + x.h
                        .mul(&dc.mul(&dc))
                        .degree_of()
                        .expect("degree-3 product");
                let survives = residual >= rat(0);
                if survives {
                    survivors.push(d.coords.clone());
                }
                steps.push(CaseStep {
                    divisor: d.coords.clone(),
                    label: d.label(x),
                    slope: crate::rat::render(&s),
                    bound_ok,
                    residual_charge: crate::rat::render(&residual),
                    survives,
                });
            }
        }
        let mut i = 0;
        loop {
            if i == rank {
                survivors.sort();
                return Ok(CaseTrace {
                    id: x.id.clone(),
                    steps,
                    survivors,
                });
            }
            if coords[i] < window {
                coords[i] += 1;
                break;
            }
            coords[i] = -window;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{build_catalog, Catalog};
    use crate::instanton::InstantonSpec;

    fn catalog() -> Catalog {
        build_catalog().unwrap()
    }

    #[test]
    fn slope_examples() {
        let c = catalog();
        let f62 = c.get("F62").unwrap();
        let e = InstantonSpec::new(f62, 1, 4).unwrap().bundle_class;
        assert_eq!(slope(f62, &e).unwrap(), rat(-3));

        let f7 = c.get("F7").unwrap();
        let e = InstantonSpec::new(f7, 1, 4).unwrap().bundle_class;
        assert_eq!(slope(f7, &e).unwrap(), frac(-7, 2));

        let o = BundleClass::trivial(&f7.ring, 1);
        assert_eq!(slope(f7, &o).unwrap(), rat(0));
        let z = BundleClass::trivial(&f7.ring, 0);
        assert!(matches!(slope(f7, &z), Err(StabilityError::RankZero)));
    }

    #[test]
    fn effective_examples() {
        let c = catalog();
        let f7 = c.get("F7").unwrap();
        // the exceptional divisor E in |xi - f|
        assert!(effective(f7, &DivisorClass::new(vec![1, -1])));
        assert!(!effective(f7, &DivisorClass::new(vec![0, -1])));

        let f62 = c.get("F62").unwrap();
        assert!(!effective(f62, &DivisorClass::new(vec![1, -1])));
        assert!(effective(f62, &DivisorClass::new(vec![1, 0])));

        for id in ["P3", "F62", "F63", "F7"] {
            let x = c.get(id).unwrap();
            let zero = DivisorClass::zero(x.picard_rank);
            assert!(effective_or_zero(x, &zero));
            assert!(!effective(x, &zero));
        }
    }

    #[test]
    fn hoppe_obligations_examples() {
        let c = catalog();
        // F63, eps = 1 instanton: exactly the D with a1+a2+a3 >= -1
        let f63 = c.get("F63").unwrap();
        let e = InstantonSpec::new(f63, 1, 4).unwrap().bundle_class;
        let obligations = hoppe_obligations(f63, &e, false, 3).unwrap();
        for d in &obligations {
            assert!(d.coords.iter().sum::<i64>() >= -1);
        }
        let count = (-3i64..=3)
            .flat_map(|a| (-3i64..=3).flat_map(move |b| (-3i64..=3).map(move |c| (a, b, c))))
            .filter(|(a, b, c)| a + b + c >= -1)
            .count();
        assert_eq!(obligations.len(), count);

        // P3, eps = 1: D = d h with d >= 0
        let p3 = c.get("P3").unwrap();
        let e = InstantonSpec::new(p3, 1, 2).unwrap().bundle_class;
        let obligations = hoppe_obligations(p3, &e, false, 3).unwrap();
        assert_eq!(
            obligations,
            vec![
                DivisorClass::new(vec![0]),
                DivisorClass::new(vec![1]),
                DivisorClass::new(vec![2]),
                DivisorClass::new(vec![3]),
            ]
        );

        // trivial rank 2, strict variant: slope > 0
        let oo = BundleClass::trivial(&p3.ring, 2);
        let strict = hoppe_obligations(p3, &oo, true, 1).unwrap();
        assert_eq!(strict, vec![DivisorClass::new(vec![1])]);

        // F7, eps = 1: slope(a1 xi + a2 f) = 4 a1 + 3 a2 against mu = -7/2
        let f7 = c.get("F7").unwrap();
        let e = InstantonSpec::new(f7, 1, 4).unwrap().bundle_class;
        for d in hoppe_obligations(f7, &e, false, 3).unwrap() {
            assert!(2 * (4 * d.coords[0] + 3 * d.coords[1]) >= -7);
        }
    }

    #[test]
    fn hoppe_window_monotone() {
        let c = catalog();
        let f62 = c.get("F62").unwrap();
        let e = InstantonSpec::new(f62, 1, 4).unwrap().bundle_class;
        let small = hoppe_obligations(f62, &e, false, 2).unwrap();
        let large = hoppe_obligations(f62, &e, false, 5).unwrap();
        for d in &small {
            assert!(large.contains(d));
        }
        assert!(large.len() > small.len());
    }

    #[test]
    fn decomposable_balance_examples() {
        let c = catalog();
        let f62 = c.get("F62").unwrap();
        // O(-h1) (+) O(-h2): D = -h1 balances at eps = 1
        let d = DivisorClass::new(vec![-1, 0]);
        assert!(decomposable_balance(f62, 1, &d));

        // P3: no integral D balances eps = 1 (d = -1/2 impossible)
        let p3 = c.get("P3").unwrap();
        for dd in -5..=5 {
            assert!(!decomposable_balance(p3, 1, &DivisorClass::new(vec![dd])));
        }

        for id in ["P3", "Q3", "F62", "F63", "F7"] {
            let x = c.get(id).unwrap();
            assert!(decomposable_balance(
                x,
                0,
                &DivisorClass::zero(x.picard_rank)
            ));
        }
    }

    #[test]
    fn decomposable_balance_symmetry() {
        // D balances iff -D - eps h balances (the two split summands)
        let c = catalog();
        let f62 = c.get("F62").unwrap();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for eps in 0i64..=1 {
                    let d = DivisorClass::new(vec![a, b]);
                    let other = DivisorClass::new(vec![-a - eps, -b - eps]);
                    assert_eq!(
                        decomposable_balance(f62, eps, &d),
                        decomposable_balance(f62, eps, &other)
                    );
                }
            }
        }
    }

    #[test]
    fn sharp_case_replay_survivors() {
        let c = catalog();
        let f62 = sharp_case_replay(c.get("F62").unwrap()).unwrap();
        assert_eq!(f62.nonzero_survivors(), vec![vec![0, 1], vec![1, 0]]);

        let f63 = sharp_case_replay(c.get("F63").unwrap()).unwrap();
        assert_eq!(
            f63.nonzero_survivors(),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );

        let f7 = sharp_case_replay(c.get("F7").unwrap()).unwrap();
        assert_eq!(f7.nonzero_survivors(), vec![vec![0, 1], vec![1, -1]]);

        assert!(matches!(
            sharp_case_replay(c.get("P3").unwrap()),
            Err(StabilityError::UnsupportedVariety(_))
        ));
    }

    #[test]
    fn replay_survivors_satisfy_bound() {
        let c = catalog();
        for id in ["F62", "F63", "F7"] {
            let x = c.get(id).unwrap();
            let trace = sharp_case_replay(x).unwrap();
            for coords in &trace.survivors {
                let d = DivisorClass::new(coords.clone());
                assert!(effective_or_zero(x, &d));
                assert!(rat(2) * divisor_slope(x, &d) <= rat(x.degree));
            }
        }
    }

    #[test]
    fn slope_additive_under_twist() {
        let c = catalog();
        for id in ["P3", "F62", "F63", "F7"] {
            let x = c.get(id).unwrap();
            let e = InstantonSpec::new(x, 1, 4).unwrap().bundle_class;
            let mut coords = vec![0i64; x.picard_rank];
            coords[0] = 2;
            if x.picard_rank > 1 {
                coords[1] = -1;
            }
            let l = x.divisor_class(&coords);
            let twisted = crate::bundles::twist(&e, &l);
            let h2 = x.h.mul(&x.h);
            let dl = l.mul(&h2).degree_of().unwrap();
            assert_eq!(
                slope(x, &twisted).unwrap(),
                slope(x, &e).unwrap() + dl,
                "{id}"
            );
        }
    }
}
