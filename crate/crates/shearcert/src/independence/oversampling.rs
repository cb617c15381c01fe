use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::shearlet2d::{enumerate, support_polygon, Cone, ShearletIndex, ShearletSystemSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OversamplingReport {
    pub factor: u32,
    pub c: (Exact, Exact),
    pub c_over_n: (Exact, Exact),
    pub coarse_count: usize,
    pub fine_count: usize,
    /// Every coarse `(j, k, m)` appears as `(j, k, n m)` with identical translation.
    pub contained: bool,
    pub first_missing: Option<ShearletIndex>,
    /// A fine index with a component of `m` not divisible by `n`.
    pub strictness_witness: Option<ShearletIndex>,
    pub strict: bool,
    pub consequence: String,
}

/// Translation parameters of an element, as products of sampling constant and index.
fn offsets(idx: &ShearletIndex, c: &(Exact, Exact)) -> (Exact, Exact) {
    let m1 = Exact::from_int(idx.m.0);
    let m2 = Exact::from_int(idx.m.1);
    match idx.cone {
        Cone::Phi => (&c.0 * &m1, &c.0 * &m2),
        Cone::Psi => (&c.0 * &m1, &c.1 * &m2),
        Cone::PsiTilde => (&c.1 * &m1, &c.0 * &m2),
    }
}

/// Exact check that the system with constants `c` is a subsystem of the one
/// with constants `c / n`, and that the inclusion is proper for `n >= 2`.
pub fn oversampling_containment(spec: &ShearletSystemSpec, n: u32) -> Result<OversamplingReport> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "oversampling factor must be at least 1".into(),
        ));
    }
    let fine_spec = spec.oversampled(n);
    let coarse = enumerate(spec);
    let fine = enumerate(&fine_spec);
    let fine_set: HashSet<ShearletIndex> = fine.iter().copied().collect();
    let s = Exact::from_int(spec.support_length());
    let nn = n as i64;
    let first_missing = coarse
        .iter()
        .find(|idx| {
            let image = ShearletIndex {
                m: (nn * idx.m.0, nn * idx.m.1),
                ..**idx
            };
            !fine_set.contains(&image)
                || offsets(idx, &spec.c) != offsets(&image, &fine_spec.c)
                || support_polygon(idx, &spec.c, &s, &s)
                    != support_polygon(&image, &fine_spec.c, &s, &s)
        })
        .copied();
    let strictness_witness = fine
        .iter()
        .find(|idx| idx.m.0 % nn != 0 || idx.m.1 % nn != 0)
        .copied();
    let contained = first_missing.is_none();
    let strict = strictness_witness.is_some();
    let consequence = if contained && strict {
        format!(
            "SH(c) is a proper subsystem of SH(c/{n}). When SH(c) is a frame, each extra element of \
             SH(c/{n}) expands in SH(c), and the difference is a nontrivial vanishing series, so \
             SH(c/{n}) cannot be omega-independent."
        )
    } else if contained {
        "SH(c) and SH(c/n) coincide on this domain; no conclusion about omega-independence.".into()
    } else {
        "containment failed; no conclusion.".into()
    };
    Ok(OversamplingReport {
        factor: n,
        c: spec.c.clone(),
        c_over_n: fine_spec.c.clone(),
        coarse_count: coarse.len(),
        fine_count: fine.len(),
        contained,
        first_missing,
        strictness_witness,
        strict,
        consequence,
    })
}
