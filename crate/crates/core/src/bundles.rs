//! Formal Chern-class calculus for bundle classes over a catalog ring, and
//! Riemann-Roch on the catalog threefolds.
//!
//! A [`BundleClass`] is a rank together with c1, c2, c3 in a fixed ring; it
//! need not come from an actual bundle, but the operations all follow the
//! splitting principle, so classes assembled from line bundles and Serre
//! classes behave exactly like their geometric counterparts.

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::chow::{ChowError, CycleClass, CycleRing, FanoThreefold};
use crate::rat::{binom, rat, Rat};

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("operation requires rank 2, got {0}")]
    RankNotTwo(i64),
    #[error("class Z is not a non-negative combination of catalog curve classes")]
    NotACurveClass,
    #[error(transparent)]
    Chow(#[from] ChowError),
}

/// Formal vector bundle: rank plus Chern classes c1, c2, c3.
///
/// Invariants: rank >= 0; c3 = 0 when rank <= 2, c2 = 0 when rank <= 1,
/// c1 = 0 when rank = 0; all classes homogeneous in the same ring.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleClass {
    pub rank: i64,
    pub c1: CycleClass,
    pub c2: CycleClass,
    pub c3: CycleClass,
}

impl BundleClass {
    pub fn new(rank: i64, c1: CycleClass, c2: CycleClass, c3: CycleClass) -> Self {
        assert!(rank >= 0, "negative rank");
        assert_eq!(c1.ring().id, c2.ring().id, "mixed-ring Chern classes");
        assert_eq!(c1.ring().id, c3.ring().id, "mixed-ring Chern classes");
        assert!(c1.is_homogeneous_of(1), "c1 must have degree 1");
        assert!(c2.is_homogeneous_of(2), "c2 must have degree 2");
        assert!(c3.is_homogeneous_of(3), "c3 must have degree 3");
        if rank <= 2 {
            assert!(c3.is_zero(), "rank <= 2 forces c3 = 0");
        }
        if rank <= 1 {
            assert!(c2.is_zero(), "rank <= 1 forces c2 = 0");
        }
        if rank == 0 {
            assert!(c1.is_zero(), "rank 0 forces c1 = 0");
        }
        BundleClass { rank, c1, c2, c3 }
    }

    pub fn ring(&self) -> &Arc<CycleRing> {
        self.c1.ring()
    }

    pub fn trivial(ring: &Arc<CycleRing>, rank: i64) -> Self {
        BundleClass::new(rank, ring.zero(), ring.zero(), ring.zero())
    }

    /// The line bundle O(d) for a degree-1 class d.
    pub fn line_bundle(d: &CycleClass) -> Self {
        let ring = d.ring().clone();
        BundleClass::new(1, d.clone(), ring.zero(), ring.zero())
    }

    fn assert_same_ring(&self, other: &BundleClass) {
        assert_eq!(
            self.ring().id,
            other.ring().id,
            "mixed-ring operands: `{}` vs `{}`",
            self.ring().id,
            other.ring().id
        );
    }
}

/// Whitney sum: ranks add and c(F (+) G) = c(F) c(G) truncated at the ring
/// dimension.
pub fn whitney_sum(f: &BundleClass, g: &BundleClass) -> BundleClass {
    f.assert_same_ring(g);
    let c1 = f.c1.add(&g.c1);
    let c2 = f.c2.add(&f.c1.mul(&g.c1)).add(&g.c2);
    let c3 = f
        .c3
        .add(&f.c2.mul(&g.c1))
        .add(&f.c1.mul(&g.c2))
        .add(&g.c3);
    BundleClass::new(f.rank + g.rank, c1, c2, c3)
}

/// Formal K-theory difference: c(F - G) = c(F) / c(G), rank subtracts.
/// Used to peel monad end terms off the middle term. The result must
/// satisfy the BundleClass invariants, which holds whenever the difference
/// is a genuine bundle class.
pub fn whitney_difference(f: &BundleClass, g: &BundleClass) -> BundleClass {
    f.assert_same_ring(g);
    // inverse total Chern class of g
    let i1 = g.c1.neg();
    let i2 = g.c1.mul(&g.c1).sub(&g.c2);
    let i3 = g
        .c1
        .mul(&g.c1)
        .mul(&g.c1)
        .neg()
        .add(&g.c1.mul(&g.c2).scale(&rat(2)))
        .sub(&g.c3);
    let c1 = f.c1.add(&i1);
    let c2 = f.c2.add(&f.c1.mul(&i1)).add(&i2);
    let c3 = f.c3.add(&f.c2.mul(&i1)).add(&f.c1.mul(&i2)).add(&i3);
    BundleClass::new(f.rank - g.rank, c1, c2, c3)
}

/// Dual: c_i goes to (-1)^i c_i.
pub fn dual(f: &BundleClass) -> BundleClass {
    BundleClass::new(f.rank, f.c1.neg(), f.c2.clone(), f.c3.neg())
}

/// Twist by a degree-1 class, by the splitting-principle expansion for
/// arbitrary rank r (increments use the pre-twist c1, c2):
///   c1 += r L
///   c2 += (r-1) c1 L + C(r,2) L^2
///   c3 += (r-2) c2 L + C(r-1,2) c1 L^2 + C(r,3) L^3
pub fn twist(f: &BundleClass, l: &CycleClass) -> BundleClass {
    assert_eq!(f.ring().id, l.ring().id, "mixed-ring twist");
    assert!(l.is_homogeneous_of(1), "twist class must have degree 1");
    let r = f.rank;
    let l2 = l.mul(l);
    let l3 = l2.mul(l);
    let c1 = f.c1.add(&l.scale(&rat(r)));
    let c2 = f
        .c2
        .add(&f.c1.mul(l).scale(&rat(r - 1)))
        .add(&l2.scale(&binom(r, 2)));
    let c3 = f
        .c3
        .add(&f.c2.mul(l).scale(&rat(r - 2)))
        .add(&f.c1.mul(&l2).scale(&binom(r - 1, 2)))
        .add(&l3.scale(&binom(r, 3)));
    BundleClass::new(r, c1, c2, c3)
}

/// End(F) for rank-2 F: rank 4, c1 = 0, c2 = 4 c2(F) - c1(F)^2, c3 = 0.
pub fn end_of_rank2(f: &BundleClass) -> Result<BundleClass, BundleError> {
    if f.rank != 2 {
        return Err(BundleError::RankNotTwo(f.rank));
    }
    let ring = f.ring().clone();
    let c2 = f.c2.scale(&rat(4)).sub(&f.c1.mul(&f.c1));
    Ok(BundleClass::new(4, ring.zero(), c2, ring.zero()))
}

/// Rank-2 class of an extension 0 -> O(A) -> F -> I_Z(B) -> 0:
/// c1 = A + B, c2 = A.B + Z, c3 = 0. Z must lie in the non-negative span
/// of the catalog curve classes of X (a shape check, not a geometric one).
pub fn serre_bundle(
    x: &FanoThreefold,
    a: &CycleClass,
    b: &CycleClass,
    z: &CycleClass,
) -> Result<BundleClass, BundleError> {
    assert_eq!(a.ring().id, x.ring.id, "mixed-ring operands");
    assert_eq!(b.ring().id, x.ring.id, "mixed-ring operands");
    assert_eq!(z.ring().id, x.ring.id, "mixed-ring operands");
    assert!(a.is_homogeneous_of(1) && b.is_homogeneous_of(1));
    if !z.is_homogeneous_of(2) {
        return Err(BundleError::NotACurveClass);
    }
    let deg2_len = x.ring.basis[2].len();
    for row in &x.curve_cone {
        let mut acc = Rat::zero();
        for (i, &c) in row.iter().enumerate().take(deg2_len) {
            acc += z.coeff(2, i) * rat(c);
        }
        if acc < Rat::zero() {
            return Err(BundleError::NotACurveClass);
        }
    }
    let c1 = a.add(b);
    let c2 = a.mul(b).add(z);
    Ok(BundleClass::new(2, c1, c2, x.ring.zero()))
}

/// Euler characteristic by Riemann-Roch on a threefold, with w = -index h:
///   chi(F) = rank + (1/6) deg(c1^3 - 3 c1 c2 + 3 c3)
///          - (1/4) deg(w c1^2 - 2 w c2)
///          + (1/12) deg(w^2 c1 + c2(Omega) c1)
/// (chi(O_X) = 1 on every catalog entry).
pub fn riemann_roch(x: &FanoThreefold, f: &BundleClass) -> Rat {
    assert_eq!(f.ring().id, x.ring.id, "bundle class over a different ring");
    let w = x.h.scale(&rat(-x.index));
    let c1 = &f.c1;
    let c13 = c1.mul(c1).mul(c1);
    let t1 = c13
        .sub(&c1.mul(&f.c2).scale(&rat(3)))
        .add(&f.c3.scale(&rat(3)));
    let t2 = w.mul(&c1.mul(c1)).sub(&w.mul(&f.c2).scale(&rat(2)));
    let t3 = w.mul(&w).mul(c1).add(&x.c2_omega.mul(c1));
    let deg = |c: CycleClass| c.degree_of().expect("top-degree product");
    rat(f.rank) + deg(t1) / rat(6) - deg(t2) / rat(4) + deg(t3) / rat(12)
}

/// Serre duality at Euler-characteristic level on a threefold:
/// chi(F) = -chi(F^dual (x) O(-index h)).
pub fn serre_chi_identity(x: &FanoThreefold, f: &BundleClass) -> bool {
    let minus_ih = x.h.scale(&rat(-x.index));
    let rhs = riemann_roch(x, &twist(&dual(f), &minus_ih));
    riemann_roch(x, f) == -rhs
}
