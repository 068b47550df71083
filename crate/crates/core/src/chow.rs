//! Graded cohomology rings of the catalog varieties and the catalog itself.
//!
//! Every ring is tiny (at most three basis monomials per degree), so rings
//! are stored as fixed named bases per degree together with a precomputed
//! multiplication table. Tables are entered in the normal form dictated by
//! each ring presentation and validated exhaustively at build time:
//! commutativity, associativity and grading over all basis pairs/triples,
//! plus the degree and Noether checks on every threefold.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{rat, render, Rat};

#[derive(Debug, Error)]
pub enum ChowError {
    #[error("ring law violations in `{ring}`: {violations:?}")]
    RingLaws {
        ring: String,
        violations: Vec<String>,
    },
    #[error("catalog check failed for `{id}`: {reason}")]
    CatalogCheck { id: String, reason: String },
    #[error("class is not homogeneous of top degree")]
    NotTopDegree,
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("invalid catalog document: {0}")]
    BadDocument(String),
}

// ---------------------------------------------------------------------------
// Rings and classes
// ---------------------------------------------------------------------------

/// Graded ring with a fixed monomial basis per degree and a full
/// multiplication table on basis elements. Immutable once built.
#[derive(Debug)]
pub struct CycleRing {
    pub id: String,
    /// Top degree (3 for threefolds, 4 for the Grassmannian of lines).
    pub dimension: usize,
    /// Basis names per degree `0..=dimension`; degree 0 is always `["1"]`.
    pub basis: Vec<Vec<String>>,
    /// `table[(d1, i1, d2, i2)]` = coefficients of the product over the
    /// basis of degree `d1 + d2` (entries of degree sum > dimension are
    /// absent: such products vanish).
    table: HashMap<(usize, usize, usize, usize), Vec<Rat>>,
    /// Index of the distinguished point class in top degree.
    pub point_index: usize,
}

impl PartialEq for CycleRing {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

/// Table entry for the ring builder: two basis names and the coefficient
/// combination of their product.
pub type ProductSpec<'a> = (&'a str, &'a str, Vec<(i64, &'a str)>);

impl CycleRing {
    /// Builds a ring from a table given on nontrivial basis pairs (both
    /// factors of positive degree, degree sum at most the dimension).
    /// Products with 1 and vanishing products above the top degree are
    /// implied.
    pub fn build(
        id: &str,
        dimension: usize,
        basis: Vec<Vec<&str>>,
        point_name: &str,
        products: Vec<ProductSpec<'_>>,
    ) -> Result<Arc<CycleRing>, ChowError> {
        assert_eq!(basis.len(), dimension + 1);
        assert_eq!(basis[0], vec!["1"]);
        let basis: Vec<Vec<String>> = basis
            .into_iter()
            .map(|names| names.into_iter().map(String::from).collect())
            .collect();
        let locate = |name: &str| -> (usize, usize) {
            for (d, names) in basis.iter().enumerate() {
                if let Some(i) = names.iter().position(|n| n == name) {
                    return (d, i);
                }
            }
            panic!("unknown basis name `{name}` in ring `{id}`");
        };
        let point_index = {
            let (d, i) = locate(point_name);
            assert_eq!(d, dimension, "point class must live in top degree");
            i
        };
        let mut table = HashMap::new();
        for (a, b, combo) in products {
            let (da, ia) = locate(a);
            let (db, ib) = locate(b);
            assert!(da >= 1 && db >= 1 && da + db <= dimension);
            let mut coeffs = vec![Rat::zero(); basis[da + db].len()];
            for (c, name) in combo {
                let (dc, ic) = locate(name);
                assert_eq!(dc, da + db, "graded violation in table entry");
                coeffs[ic] += rat(c);
            }
            table.insert((da, ia, db, ib), coeffs.clone());
            table.insert((db, ib, da, ia), coeffs);
        }
        let ring = Arc::new(CycleRing {
            id: id.to_string(),
            dimension,
            basis,
            table,
            point_index,
        });
        // Missing entries would silently read as zero; require completeness.
        for d1 in 1..=dimension {
            for d2 in 1..=dimension {
                if d1 + d2 > dimension {
                    continue;
                }
                for i1 in 0..ring.basis[d1].len() {
                    for i2 in 0..ring.basis[d2].len() {
                        if !ring.table.contains_key(&(d1, i1, d2, i2)) {
                            return Err(ChowError::CatalogCheck {
                                id: id.to_string(),
                                reason: format!(
                                    "missing product {}*{}",
                                    ring.basis[d1][i1], ring.basis[d2][i2]
                                ),
                            });
                        }
                    }
                }
            }
        }
        let report = verify_ring_laws(&ring);
        if !report.violations.is_empty() {
            return Err(ChowError::RingLaws {
                ring: id.to_string(),
                violations: report.violations,
            });
        }
        Ok(ring)
    }

    pub fn zero(self: &Arc<Self>) -> CycleClass {
        CycleClass {
            ring: Arc::clone(self),
            comps: self.basis.iter().map(|b| vec![Rat::zero(); b.len()]).collect(),
        }
    }

    pub fn one(self: &Arc<Self>) -> CycleClass {
        self.basis_class("1")
    }

    /// The named basis element as a class.
    pub fn basis_class(self: &Arc<Self>, name: &str) -> CycleClass {
        let mut z = self.zero();
        for (d, names) in self.basis.iter().enumerate() {
            if let Some(i) = names.iter().position(|n| n == name) {
                z.comps[d][i] = Rat::one();
                return z;
            }
        }
        panic!("unknown basis name `{name}` in ring `{}`", self.id);
    }

    pub fn point_class(self: &Arc<Self>) -> CycleClass {
        let mut z = self.zero();
        z.comps[self.dimension][self.point_index] = Rat::one();
        z
    }

    fn mul_basis(&self, d1: usize, i1: usize, d2: usize, i2: usize) -> Option<&Vec<Rat>> {
        self.table.get(&(d1, i1, d2, i2))
    }
}

/// Exact rational element of a graded ring, stored as one coefficient vector
/// per degree over the ring's fixed monomial basis.
#[derive(Debug, Clone)]
pub struct CycleClass {
    ring: Arc<CycleRing>,
    comps: Vec<Vec<Rat>>,
}

impl PartialEq for CycleClass {
    fn eq(&self, other: &Self) -> bool {
        self.ring.id == other.ring.id && self.comps == other.comps
    }
}

impl CycleClass {
    pub fn ring(&self) -> &Arc<CycleRing> {
        &self.ring
    }

    pub fn coeff(&self, degree: usize, index: usize) -> &Rat {
        &self.comps[degree][index]
    }

    pub fn set_coeff(&mut self, degree: usize, index: usize, value: Rat) {
        self.comps[degree][index] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|v| v.iter().all(Rat::is_zero))
    }

    /// Degree of a homogeneous class; `None` for zero or mixed classes.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for (d, v) in self.comps.iter().enumerate() {
            if v.iter().any(|c| !c.is_zero()) {
                if deg.is_some() {
                    return None;
                }
                deg = Some(d);
            }
        }
        deg
    }

    pub fn is_homogeneous_of(&self, degree: usize) -> bool {
        self.is_zero() || self.homogeneous_degree() == Some(degree)
    }

    fn assert_same_ring(&self, other: &CycleClass) {
        assert_eq!(
            self.ring.id, other.ring.id,
            "mixed-ring operands: `{}` vs `{}`",
            self.ring.id, other.ring.id
        );
    }

    pub fn add(&self, rhs: &CycleClass) -> CycleClass {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&rhs.comps) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        out
    }

    pub fn sub(&self, rhs: &CycleClass) -> CycleClass {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> CycleClass {
        self.scale(&rat(-1))
    }

    pub fn scale(&self, c: &Rat) -> CycleClass {
        let mut out = self.clone();
        for v in out.comps.iter_mut() {
            for x in v.iter_mut() {
                *x = &*x * c;
            }
        }
        out
    }

    /// Graded bilinear product via the ring table. Components whose degree
    /// would exceed the ring dimension vanish.
    pub fn mul(&self, rhs: &CycleClass) -> CycleClass {
        self.assert_same_ring(rhs);
        let ring = &self.ring;
        let mut out = ring.zero();
        for (d1, v1) in self.comps.iter().enumerate() {
            for (i1, c1) in v1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (d2, v2) in rhs.comps.iter().enumerate() {
                    if d1 + d2 > ring.dimension {
                        continue;
                    }
                    for (i2, c2) in v2.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        let prod = c1 * c2;
                        if d1 == 0 {
                            out.comps[d2][i2] += &prod;
                        } else if d2 == 0 {
                            out.comps[d1][i1] += &prod;
                        } else {
                            let coeffs = ring
                                .mul_basis(d1, i1, d2, i2)
                                .expect("validated table is complete");
                            for (k, c) in coeffs.iter().enumerate() {
                                if !c.is_zero() {
                                    out.comps[d1 + d2][k] += &prod * c;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> CycleClass {
        let mut acc = self.ring.one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient of the point class for a class homogeneous of top degree
    /// (the zero class counts, with degree 0).
    pub fn degree_of(&self) -> Result<Rat, ChowError> {
        if self.is_zero() {
            return Ok(Rat::zero());
        }
        if self.homogeneous_degree() != Some(self.ring.dimension) {
            return Err(ChowError::NotTopDegree);
        }
        Ok(self.comps[self.ring.dimension][self.ring.point_index].clone())
    }
}

impl fmt::Display for CycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (d, v) in self.comps.iter().enumerate() {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    terms.push(format!("{}*{}", render(c), self.ring.basis[d][i]));
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Report of an exhaustive ring-law check.
#[derive(Debug, Clone, Default)]
pub struct RingLawReport {
    pub violations: Vec<String>,
}

/// Exhaustive commutativity/associativity/grading check over all basis
/// pairs and triples. The list is empty on the shipped catalog.
pub fn verify_ring_laws(ring: &Arc<CycleRing>) -> RingLawReport {
    let mut violations = Vec::new();
    let mut elems = Vec::new();
    for (d, names) in ring.basis.iter().enumerate() {
        for name in names {
            elems.push((d, ring.basis_class(name), name.clone()));
        }
    }
    let one = ring.one();
    for (_, x, name) in &elems {
        if one.mul(x) != *x {
            violations.push(format!("unit law fails on {name}"));
        }
    }
    for (d1, a, na) in &elems {
        for (d2, b, nb) in &elems {
            let ab = a.mul(b);
            if ab != b.mul(a) {
                violations.push(format!("commutativity fails on ({na}, {nb})"));
            }
            if !ab.is_zero() {
                let deg = ab.homogeneous_degree();
                if deg != Some(d1 + d2) {
                    violations.push(format!("grading fails on ({na}, {nb})"));
                }
            }
            for (_, c, nc) in &elems {
                if ab.mul(c) != a.mul(&b.mul(c)) {
                    violations.push(format!("associativity fails on ({na}, {nb}, {nc})"));
                }
            }
        }
    }
    RingLawReport { violations }
}

// ---------------------------------------------------------------------------
// The catalog
// ---------------------------------------------------------------------------

/// Catalog descriptor of a Fano threefold: cohomology ring, index, Picard
/// data, distinguished classes and effective-cone inequalities.
#[derive(Debug)]
pub struct FanoThreefold {
    pub id: String,
    pub ring: Arc<CycleRing>,
    /// Fano index: the canonical class is -index * h.
    pub index: i64,
    pub picard_rank: usize,
    /// Names of the degree-1 basis, which is the Picard basis here.
    pub picard_basis: Vec<String>,
    pub h: CycleClass,
    /// deg(h^3).
    pub degree: i64,
    pub line_class: CycleClass,
    /// c2 of the cotangent bundle (equal to c2 of the tangent bundle).
    pub c2_omega: CycleClass,
    pub conic_classes: Vec<CycleClass>,
    /// Rows `r`: D = sum a_i * basis_i is effective-or-zero iff r . a >= 0
    /// for every row.
    pub effective_cone: Vec<Vec<i64>>,
    /// Same shape, for the cone of curve classes in the degree-2 basis.
    pub curve_cone: Vec<Vec<i64>>,
    /// Genus, for the prime family only.
    pub genus: Option<i64>,
}

impl FanoThreefold {
    /// Degree-1 class with the given Picard coordinates.
    pub fn divisor_class(&self, coords: &[i64]) -> CycleClass {
        assert_eq!(coords.len(), self.picard_rank, "coordinate count must equal the Picard rank");
        let mut out = self.ring.zero();
        for (i, &c) in coords.iter().enumerate() {
            out.comps[1][i] += rat(c);
        }
        out
    }

    pub fn point(&self) -> CycleClass {
        self.ring.point_class()
    }

    fn validate(&self) -> Result<(), ChowError> {
        let fail = |reason: String| ChowError::CatalogCheck {
            id: self.id.clone(),
            reason,
        };
        let h3 = self.h.pow(3).degree_of().map_err(|_| fail("h^3 not top degree".into()))?;
        if h3 != rat(self.degree) {
            return Err(fail(format!("h^3 = {} but catalog degree is {}", render(&h3), self.degree)));
        }
        if self.h.mul(&self.line_class) != self.point() {
            return Err(fail("h . line != point".into()));
        }
        // Noether check: c1(T) c2(T) = 24 pt with c1(T) = index * h.
        let c1t = self.h.scale(&rat(self.index));
        let noether = c1t.mul(&self.c2_omega).degree_of().map_err(|_| fail("Noether product not top degree".into()))?;
        if noether != rat(24) {
            return Err(fail(format!("c1(T) c2(T) = {} != 24", render(&noether))));
        }
        for conic in &self.conic_classes {
            let d = self.h.mul(conic).degree_of().map_err(|_| fail("conic class not degree 2".into()))?;
            if d != rat(2) {
                return Err(fail(format!("conic class has h-degree {}", render(&d))));
            }
        }
        if !self.line_class.is_homogeneous_of(2) {
            return Err(fail("line class must have degree 2".into()));
        }
        if self.effective_cone.iter().any(|r| r.len() != self.picard_rank) {
            return Err(fail("effective cone row length mismatch".into()));
        }
        Ok(())
    }
}

/// The built-in catalog: the eight index >= 2 threefolds, the prime family
/// Prime3..Prime12 (genus 11 excluded), and two auxiliary rings G24
/// (lines in P3) and LQ (lines on the quadric).
#[derive(Debug)]
pub struct Catalog {
    threefolds: Vec<Arc<FanoThreefold>>,
    aux_rings: Vec<Arc<CycleRing>>,
}

pub const PRIME_GENERA: [i64; 9] = [3, 4, 5, 6, 7, 8, 9, 10, 12];

impl Catalog {
    pub fn threefolds(&self) -> &[Arc<FanoThreefold>] {
        &self.threefolds
    }

    pub fn aux_rings(&self) -> &[Arc<CycleRing>] {
        &self.aux_rings
    }

    pub fn get(&self, id: &str) -> Result<&Arc<FanoThreefold>, ChowError> {
        self.threefolds
            .iter()
            .find(|x| x.id.eq_ignore_ascii_case(id))
            .ok_or_else(|| ChowError::UnknownId(id.to_string()))
    }

    /// Any catalog ring, including the auxiliary ones, by id.
    pub fn ring(&self, id: &str) -> Result<&Arc<CycleRing>, ChowError> {
        if let Some(r) = self.aux_rings.iter().find(|r| r.id.eq_ignore_ascii_case(id)) {
            return Ok(r);
        }
        self.get(id).map(|x| &x.ring)
    }

    pub fn prime(&self, genus: i64) -> Result<&Arc<FanoThreefold>, ChowError> {
        self.get(&format!("Prime{genus}"))
    }
}

/// Builds and validates the whole catalog. Any ring-law or Noether failure
/// aborts with a diagnostic.
pub fn build_catalog() -> Result<Catalog, ChowError> {
    let mut threefolds = Vec::new();

    // --- Picard rank one, h^2 = delta * l ------------------------------
    // P3 keeps the table in the same shape (delta = 1, l = h^2).
    let rank_one = |id: &str, delta: i64| -> Result<Arc<CycleRing>, ChowError> {
        CycleRing::build(
            id,
            3,
            vec![vec!["1"], vec!["h"], vec!["l"], vec!["pt"]],
            "pt",
            vec![("h", "h", vec![(delta, "l")]), ("h", "l", vec![(1, "pt")])],
        )
    };

    let mut push_rank_one = |id: &str, index: i64, delta: i64, c2o: i64, genus: Option<i64>|
     -> Result<(), ChowError> {
        let ring = rank_one(id, delta)?;
        let x = FanoThreefold {
            id: id.to_string(),
            ring: Arc::clone(&ring),
            index,
            picard_rank: 1,
            picard_basis: vec!["h".to_string()],
            h: ring.basis_class("h"),
            degree: delta,
            line_class: ring.basis_class("l"),
            c2_omega: ring.basis_class("l").scale(&rat(c2o)),
            conic_classes: vec![ring.basis_class("l").scale(&rat(2))],
            effective_cone: vec![vec![1]],
            curve_cone: vec![vec![1]],
            genus,
        };
        x.validate()?;
        threefolds.push(Arc::new(x));
        Ok(())
    };

    // c2(Omega) on the rank-one entries is (24 / index) * l, pinned by the
    // Noether check below.
    push_rank_one("P3", 4, 1, 6, None)?;
    push_rank_one("Q3", 3, 2, 8, None)?;
    push_rank_one("V3", 2, 3, 12, None)?;
    push_rank_one("V4", 2, 4, 12, None)?;
    push_rank_one("V5", 2, 5, 12, None)?;
    for g in PRIME_GENERA {
        push_rank_one(&format!("Prime{g}"), 1, 2 * g - 2, 24, Some(g))?;
    }

    // --- F62: hyperplane section of the Segre of P2 x P2 ----------------
    // Z[h1,h2]/(h1^2 - h1 h2 + h2^2, h1^3, h2^3); degree-2 basis is the two
    // line classes h1^2, h2^2, and h1 h2 = h1^2 + h2^2 as cycles.
    {
        let ring = CycleRing::build(
            "F62",
            3,
            vec![vec!["1"], vec!["h1", "h2"], vec!["h1^2", "h2^2"], vec!["pt"]],
            "pt",
            vec![
                ("h1", "h1", vec![(1, "h1^2")]),
                ("h2", "h2", vec![(1, "h2^2")]),
                ("h1", "h2", vec![(1, "h1^2"), (1, "h2^2")]),
                ("h1", "h1^2", vec![]),
                ("h1", "h2^2", vec![(1, "pt")]),
                ("h2", "h1^2", vec![(1, "pt")]),
                ("h2", "h2^2", vec![]),
            ],
        )?;
        let h = ring.basis_class("h1").add(&ring.basis_class("h2"));
        let conic = ring.basis_class("h1^2").add(&ring.basis_class("h2^2"));
        let x = FanoThreefold {
            id: "F62".to_string(),
            ring: Arc::clone(&ring),
            index: 2,
            picard_rank: 2,
            picard_basis: vec!["h1".to_string(), "h2".to_string()],
            h,
            degree: 6,
            line_class: ring.basis_class("h1^2"),
            c2_omega: conic.scale(&rat(6)),
            conic_classes: vec![conic],
            effective_cone: vec![vec![1, 0], vec![0, 1]],
            curve_cone: vec![vec![1, 0], vec![0, 1]],
            genus: None,
        };
        x.validate()?;
        threefolds.push(Arc::new(x));
    }

    // --- F63: P1 x P1 x P1 ----------------------------------------------
    {
        let ring = CycleRing::build(
            "F63",
            3,
            vec![
                vec!["1"],
                vec!["h1", "h2", "h3"],
                vec!["h1h2", "h1h3", "h2h3"],
                vec!["pt"],
            ],
            "pt",
            vec![
                ("h1", "h1", vec![]),
                ("h2", "h2", vec![]),
                ("h3", "h3", vec![]),
                ("h1", "h2", vec![(1, "h1h2")]),
                ("h1", "h3", vec![(1, "h1h3")]),
                ("h2", "h3", vec![(1, "h2h3")]),
                ("h1", "h1h2", vec![]),
                ("h1", "h1h3", vec![]),
                ("h1", "h2h3", vec![(1, "pt")]),
                ("h2", "h1h2", vec![]),
                ("h2", "h2h3", vec![]),
                ("h2", "h1h3", vec![(1, "pt")]),
                ("h3", "h1h3", vec![]),
                ("h3", "h2h3", vec![]),
                ("h3", "h1h2", vec![(1, "pt")]),
            ],
        )?;
        let h = ring
            .basis_class("h1")
            .add(&ring.basis_class("h2"))
            .add(&ring.basis_class("h3"));
        let c2o = ring
            .basis_class("h1h2")
            .add(&ring.basis_class("h1h3"))
            .add(&ring.basis_class("h2h3"))
            .scale(&rat(4));
        let conics = vec![
            ring.basis_class("h1h2").add(&ring.basis_class("h1h3")),
            ring.basis_class("h1h2").add(&ring.basis_class("h2h3")),
            ring.basis_class("h1h3").add(&ring.basis_class("h2h3")),
        ];
        let x = FanoThreefold {
            id: "F63".to_string(),
            ring: Arc::clone(&ring),
            index: 2,
            picard_rank: 3,
            picard_basis: vec!["h1".into(), "h2".into(), "h3".into()],
            h,
            degree: 6,
            line_class: ring.basis_class("h1h2"),
            c2_omega: c2o,
            conic_classes: conics,
            effective_cone: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            curve_cone: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            genus: None,
        };
        x.validate()?;
        threefolds.push(Arc::new(x));
    }

    // --- F7: blow-up of P3 at a point ------------------------------------
    // Z[xi,f]/(f^3, xi^2 - xi f); lines are f^2 (fibres) and xif - f^2
    // (lines in the exceptional plane E, |E| = |xi - f|).
    {
        let ring = CycleRing::build(
            "F7",
            3,
            vec![vec!["1"], vec!["xi", "f"], vec!["xif", "f^2"], vec!["pt"]],
            "pt",
            vec![
                ("xi", "xi", vec![(1, "xif")]),
                ("xi", "f", vec![(1, "xif")]),
                ("f", "f", vec![(1, "f^2")]),
                ("xi", "xif", vec![(1, "pt")]),
                ("xi", "f^2", vec![(1, "pt")]),
                ("f", "xif", vec![(1, "pt")]),
                ("f", "f^2", vec![]),
            ],
        )?;
        let h = ring.basis_class("xi").add(&ring.basis_class("f"));
        let exceptional_conic = ring
            .basis_class("xif")
            .sub(&ring.basis_class("f^2"))
            .scale(&rat(2));
        let x = FanoThreefold {
            id: "F7".to_string(),
            ring: Arc::clone(&ring),
            index: 2,
            picard_rank: 2,
            picard_basis: vec!["xi".into(), "f".into()],
            h,
            degree: 7,
            line_class: ring.basis_class("f^2"),
            c2_omega: ring.basis_class("xif").scale(&rat(6)),
            conic_classes: vec![ring.basis_class("xif"), exceptional_conic],
            effective_cone: vec![vec![1, 0], vec![1, 1]],
            // curve classes a*xif + b*f^2 effective iff a >= 0, a + b >= 0
            curve_cone: vec![vec![1, 0], vec![1, 1]],
            genus: None,
        };
        x.validate()?;
        threefolds.push(Arc::new(x));
    }

    // --- auxiliary rings --------------------------------------------------
    // G24: the Grassmannian of lines in P3 (a fourfold), Schubert basis.
    let g24 = CycleRing::build(
        "G24",
        4,
        vec![
            vec!["1"],
            vec!["s1"],
            vec!["s2", "s11"],
            vec!["s21"],
            vec!["s22"],
        ],
        "s22",
        vec![
            ("s1", "s1", vec![(1, "s2"), (1, "s11")]),
            ("s1", "s2", vec![(1, "s21")]),
            ("s1", "s11", vec![(1, "s21")]),
            ("s1", "s21", vec![(1, "s22")]),
            ("s2", "s2", vec![(1, "s22")]),
            ("s11", "s11", vec![(1, "s22")]),
            ("s2", "s11", vec![]),
        ],
    )?;
    // LQ: the Hilbert scheme of lines on the quadric, isomorphic to P3.
    let lq = CycleRing::build(
        "LQ",
        3,
        vec![vec!["1"], vec!["H"], vec!["H^2"], vec!["H^3"]],
        "H^3",
        vec![("H", "H", vec![(1, "H^2")]), ("H", "H^2", vec![(1, "H^3")])],
    )?;

    Ok(Catalog {
        threefolds,
        aux_rings: vec![g24, lq],
    })
}

// ---------------------------------------------------------------------------
// Export / import
// ---------------------------------------------------------------------------

/// Serialisable image of a ring, for the audit document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RingDoc {
    pub id: String,
    pub dimension: usize,
    pub basis: Vec<Vec<String>>,
    pub point: String,
    /// (a, b, [(coefficient, basis name)]) triples, a <= b lexicographically.
    pub products: Vec<ProductDoc>,
}

pub type ProductDoc = (String, String, Vec<(String, String)>);

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VarietyDoc {
    pub id: String,
    pub index: i64,
    pub picard_rank: usize,
    pub degree: i64,
    pub genus: Option<i64>,
    pub ring: RingDoc,
    pub h: String,
    pub line_class: String,
    pub c2_omega: String,
    pub conic_classes: Vec<String>,
    pub effective_cone: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CatalogDoc {
    pub varieties: Vec<VarietyDoc>,
    pub aux_rings: Vec<RingDoc>,
}

fn ring_doc(ring: &Arc<CycleRing>) -> RingDoc {
    let mut products = Vec::new();
    let mut keys: Vec<_> = ring.table.keys().copied().collect();
    keys.sort();
    for (d1, i1, d2, i2) in keys {
        let a = &ring.basis[d1][i1];
        let b = &ring.basis[d2][i2];
        if (d1, i1) > (d2, i2) {
            continue; // symmetric partner already listed
        }
        let combo = ring.table[&(d1, i1, d2, i2)]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (render(c), ring.basis[d1 + d2][k].clone()))
            .collect();
        products.push((a.clone(), b.clone(), combo));
    }
    RingDoc {
        id: ring.id.clone(),
        dimension: ring.dimension,
        basis: ring.basis.clone(),
        point: ring.basis[ring.dimension][ring.point_index].clone(),
        products,
    }
}

pub fn export_catalog(catalog: &Catalog) -> CatalogDoc {
    let varieties = catalog
        .threefolds
        .iter()
        .map(|x| VarietyDoc {
            id: x.id.clone(),
            index: x.index,
            picard_rank: x.picard_rank,
            degree: x.degree,
            genus: x.genus,
            ring: ring_doc(&x.ring),
            h: x.h.to_string(),
            line_class: x.line_class.to_string(),
            c2_omega: x.c2_omega.to_string(),
            conic_classes: x.conic_classes.iter().map(|c| c.to_string()).collect(),
            effective_cone: x.effective_cone.clone(),
        })
        .collect();
    CatalogDoc {
        varieties,
        aux_rings: catalog.aux_rings.iter().map(ring_doc).collect(),
    }
}

fn ring_from_doc(doc: &RingDoc) -> Result<Arc<CycleRing>, ChowError> {
    let basis: Vec<Vec<&str>> = doc.basis.iter().map(|v| v.iter().map(String::as_str).collect()).collect();
    let mut products = Vec::new();
    for (a, b, combo) in &doc.products {
        let mut parsed = Vec::new();
        for (c, name) in combo {
            let coeff: i64 = c
                .parse()
                .map_err(|_| ChowError::BadDocument(format!("non-integer table coefficient `{c}`")))?;
            parsed.push((coeff, name.as_str()));
        }
        products.push((a.as_str(), b.as_str(), parsed));
    }
    CycleRing::build(&doc.id, doc.dimension, basis, &doc.point, products)
}

/// Rebuilds every ring in the document and revalidates the ring laws; the
/// returned rings witness that the document is well formed. The
/// distinguished-class strings are checked against a fresh export.
pub fn import_catalog(doc: &CatalogDoc) -> Result<Vec<Arc<CycleRing>>, ChowError> {
    let mut rings = Vec::new();
    for v in &doc.varieties {
        rings.push(ring_from_doc(&v.ring)?);
    }
    for r in &doc.aux_rings {
        rings.push(ring_from_doc(r)?);
    }
    Ok(rings)
}

/// Deterministic FNV-1a fingerprint of the exported catalog document.
pub fn catalog_fingerprint(doc: &CatalogDoc) -> String {
    let bytes = format!("{doc:?}");
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in bytes.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}
