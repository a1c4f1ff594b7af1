//! Intersection-property decisions: cross/r-wise intersection, triviality,
//! t-covering number, and maximal-pair closure, all with counterexample
//! witnesses.
//!
//! Checks are exhaustive by default. When the tuple space exceeds the
//! budget the caller may opt into seeded sampling, and every sampled
//! outcome is flagged: a sampled pass is evidence, not a proof.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::families::{Family, FamiliesError};
use crate::gfq::{dim_meet, meet, FieldDesc, GfqError, Subspace};
use crate::lattice::{enumerate_between, shared_slice, LatticeError};
use crate::qcount::{CountValue, QcountError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("check of {required} tuples refused (budget {budget}); enable sampling to proceed")]
    BudgetExceeded { required: CountValue, budget: u64 },
    #[error("at least two families are required")]
    TooFewFamilies,
    #[error("family is empty")]
    EmptyFamily,
    #[error("no cover exists: member dimension is below the threshold")]
    NoCover,
    #[error("pair is not maximal: the partner closure grows it")]
    NotMaximal,
    #[error(transparent)]
    Gfq(#[from] GfqError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Families(#[from] FamiliesError),
    #[error(transparent)]
    Qcount(#[from] QcountError),
}

/// Evidence of an intersection failure: the members of the offending
/// tuple and the dimension their meet actually achieved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub members: Vec<Subspace>,
    pub achieved_dim: usize,
}

/// Outcome of an intersection check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub tuples_checked: u64,
    pub sampled: bool,
}

impl CheckOutcome {
    fn pass(tuples_checked: u64, sampled: bool) -> Self {
        CheckOutcome { holds: true, witness: None, tuples_checked, sampled }
    }

    fn fail(witness: Witness, tuples_checked: u64, sampled: bool) -> Self {
        CheckOutcome { holds: false, witness: Some(witness), tuples_checked, sampled }
    }
}

/// Seeded sampling fallback for checks whose tuple space exceeds budget.
#[derive(Clone, Copy, Debug)]
pub struct SampleCfg {
    pub tuples: u64,
    pub seed: u64,
}

fn product_size(families: &[&Family]) -> BigUint {
    families.iter().map(|f| BigUint::from(f.len())).product()
}

/// Decides whether the families are cross t-intersecting: every
/// transversal tuple must meet in dimension at least `t`.
pub fn is_cross_intersecting(
    families: &[&Family],
    t: usize,
    field: &FieldDesc,
    budget: u64,
    sample: Option<SampleCfg>,
) -> Result<CheckOutcome, VerifyError> {
    if families.len() < 2 {
        return Err(VerifyError::TooFewFamilies);
    }
    let n = families[0].ambient();
    for fam in families {
        if fam.ambient() != n {
            return Err(GfqError::AmbientMismatch(n, fam.ambient()).into());
        }
    }
    if families.iter().any(|f| f.is_empty()) {
        // Universal quantification over an empty product holds vacuously.
        return Ok(CheckOutcome::pass(0, false));
    }
    let total = product_size(families);
    match total.to_u64() {
        Some(c) if c <= budget => {}
        _ => match sample {
            Some(cfg) => return Ok(sampled_cross_check(families, t, field, cfg)),
            None => return Err(VerifyError::BudgetExceeded { required: total, budget }),
        },
    }

    if families.len() == 2 {
        // Pair fast path, parallel over the first family.
        let (a, b) = (families[0], families[1]);
        let checked = (a.len() as u64) * (b.len() as u64);
        let failure = a.members().par_iter().find_map_first(|fa| {
            for fb in b.members() {
                let d = dim_meet(fa, fb, field).expect("ambient checked");
                if d < t {
                    return Some(Witness { members: vec![fa.clone(), fb.clone()], achieved_dim: d });
                }
            }
            None
        });
        return Ok(match failure {
            Some(w) => CheckOutcome::fail(w, checked, false),
            None => CheckOutcome::pass(checked, false),
        });
    }

    // General r: depth-first over the transversal product with prefix
    // meets; a prefix below t already witnesses a failure because meets
    // only shrink.
    let mut checked = 0u64;
    let outcome = cross_dfs(families, t, field, 0, None, &mut Vec::new(), &mut checked)?;
    Ok(match outcome {
        Some(w) => CheckOutcome::fail(w, checked, false),
        None => CheckOutcome::pass(checked, false),
    })
}

fn cross_dfs(
    families: &[&Family],
    t: usize,
    field: &FieldDesc,
    depth: usize,
    prefix: Option<Subspace>,
    chosen: &mut Vec<Subspace>,
    checked: &mut u64,
) -> Result<Option<Witness>, VerifyError> {
    if depth == families.len() {
        *checked += 1;
        let prefix = prefix.expect("nonempty product");
        if prefix.dim() < t {
            return Ok(Some(Witness { members: chosen.clone(), achieved_dim: prefix.dim() }));
        }
        return Ok(None);
    }
    for member in families[depth].members() {
        let next = match &prefix {
            None => member.clone(),
            Some(p) => meet(p, member, field)?,
        };
        chosen.push(member.clone());
        if next.dim() < t {
            // Complete the tuple arbitrarily; any completion fails.
            let mut members = chosen.clone();
            for fam in &families[depth + 1..] {
                members.push(fam.members()[0].clone());
            }
            let achieved = {
                let mut acc = next.clone();
                for m in &members[depth + 1..] {
                    acc = meet(&acc, m, field)?;
                }
                acc.dim()
            };
            *checked += 1;
            chosen.pop();
            return Ok(Some(Witness { members, achieved_dim: achieved }));
        }
        let found = cross_dfs(families, t, field, depth + 1, Some(next), chosen, checked)?;
        chosen.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn sampled_cross_check(
    families: &[&Family],
    t: usize,
    field: &FieldDesc,
    cfg: SampleCfg,
) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for done in 0..cfg.tuples {
        let mut acc: Option<Subspace> = None;
        let mut members = Vec::with_capacity(families.len());
        for fam in families {
            let pick = fam.members()[rng.gen_range(0..fam.len())].clone();
            acc = Some(match acc {
                None => pick.clone(),
                Some(p) => meet(&p, &pick, field).expect("ambient checked"),
            });
            members.push(pick);
        }
        let dim = acc.expect("nonempty").dim();
        if dim < t {
            return CheckOutcome {
                holds: false,
                witness: Some(Witness { members, achieved_dim: dim }),
                tuples_checked: done + 1,
                sampled: true,
            };
        }
    }
    CheckOutcome { holds: true, witness: None, tuples_checked: cfg.tuples, sampled: true }
}

/// Number of r-multisets from a family of size `m`: C(m + r - 1, r).
fn multiset_count(m: u64, r: u64) -> BigUint {
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..r {
        num *= BigUint::from(m + r - 1 - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

/// Decides whether `family` is r-wise t-intersecting, with repetition
/// allowed.
///
/// A multiset's meet equals the meet of its support, so when the family
/// has at least `r` members it suffices to check all r-subsets (smaller
/// supports extend to r-subsets whose meets are no larger); a family
/// smaller than `r` reduces to the meet of all members. The depth-first
/// walk prunes as soon as a prefix dips below `t`, which is already a
/// counterexample.
pub fn is_rwise_intersecting(
    family: &Family,
    r: usize,
    t: usize,
    field: &FieldDesc,
    budget: u64,
    sample: Option<SampleCfg>,
) -> Result<CheckOutcome, VerifyError> {
    assert!(r >= 2, "r-wise needs r >= 2");
    if family.is_empty() {
        return Ok(CheckOutcome::pass(0, false));
    }
    if family.member_dim() < t {
        let w = Witness {
            members: vec![family.members()[0].clone()],
            achieved_dim: family.member_dim(),
        };
        return Ok(CheckOutcome::fail(w, 1, false));
    }
    if family.len() < r {
        let mut acc = family.members()[0].clone();
        for m in &family.members()[1..] {
            acc = meet(&acc, m, field)?;
        }
        return Ok(if acc.dim() < t {
            CheckOutcome::fail(
                Witness { members: family.members().to_vec(), achieved_dim: acc.dim() },
                1,
                false,
            )
        } else {
            CheckOutcome::pass(1, false)
        });
    }

    let total = multiset_count(family.len() as u64, r as u64);
    match total.to_u64() {
        Some(c) if c <= budget => {}
        _ => match sample {
            Some(cfg) => return Ok(sampled_rwise_check(family, r, t, field, cfg)),
            None => return Err(VerifyError::BudgetExceeded { required: total, budget }),
        },
    }

    // Parallel over the first index of the combination.
    let members = family.members();
    let results: Vec<(u64, Option<Witness>)> = (0..=members.len() - r)
        .into_par_iter()
        .map(|first| {
            let mut checked = 0u64;
            let mut chosen = vec![members[first].clone()];
            let witness = rwise_dfs(
                members,
                r,
                t,
                field,
                first + 1,
                members[first].clone(),
                &mut chosen,
                &mut checked,
            );
            (checked, witness)
        })
        .collect();
    let mut checked = 0;
    let mut witness = None;
    for (c, w) in results {
        checked += c;
        if witness.is_none() {
            witness = w;
        }
    }
    Ok(match witness {
        Some(w) => CheckOutcome::fail(w, checked, false),
        None => CheckOutcome::pass(checked, false),
    })
}

#[allow(clippy::too_many_arguments)]
fn rwise_dfs(
    members: &[Subspace],
    r: usize,
    t: usize,
    field: &FieldDesc,
    start: usize,
    prefix: Subspace,
    chosen: &mut Vec<Subspace>,
    checked: &mut u64,
) -> Option<Witness> {
    if prefix.dim() < t {
        *checked += 1;
        return Some(Witness { members: chosen.clone(), achieved_dim: prefix.dim() });
    }
    if chosen.len() == r {
        *checked += 1;
        return None;
    }
    let remaining = r - chosen.len();
    for i in start..=members.len() - remaining {
        if chosen.len() + 1 == r {
            // Leaf: only the dimension is needed.
            let d = dim_meet(&prefix, &members[i], field).expect("same ambient");
            *checked += 1;
            if d < t {
                let mut ms = chosen.clone();
                ms.push(members[i].clone());
                return Some(Witness { members: ms, achieved_dim: d });
            }
            continue;
        }
        let next = meet(&prefix, &members[i], field).expect("same ambient");
        chosen.push(members[i].clone());
        let found = rwise_dfs(members, r, t, field, i + 1, next, chosen, checked);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn sampled_rwise_check(
    family: &Family,
    r: usize,
    t: usize,
    field: &FieldDesc,
    cfg: SampleCfg,
) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for done in 0..cfg.tuples {
        let mut members = Vec::with_capacity(r);
        let mut acc: Option<Subspace> = None;
        for _ in 0..r {
            let pick = family.members()[rng.gen_range(0..family.len())].clone();
            acc = Some(match acc {
                None => pick.clone(),
                Some(p) => meet(&p, &pick, field).expect("same ambient"),
            });
            members.push(pick);
        }
        let dim = acc.expect("r >= 2").dim();
        if dim < t {
            return CheckOutcome {
                holds: false,
                witness: Some(Witness { members, achieved_dim: dim }),
                tuples_checked: done + 1,
                sampled: true,
            };
        }
    }
    CheckOutcome { holds: true, witness: None, tuples_checked: cfg.tuples, sampled: true }
}

/// Meet of every member across all the families.
pub fn global_meet(families: &[&Family], field: &FieldDesc) -> Result<Subspace, VerifyError> {
    let mut acc: Option<Subspace> = None;
    for fam in families {
        for m in fam.members() {
            acc = Some(match acc {
                None => m.clone(),
                Some(p) => {
                    if p.dim() == 0 {
                        return Ok(p);
                    }
                    meet(&p, m, field)?
                }
            });
        }
    }
    acc.ok_or(VerifyError::EmptyFamily)
}

/// Whether the families share a common t-dimensional subspace.
pub fn is_trivial(families: &[&Family], t: usize, field: &FieldDesc) -> Result<bool, VerifyError> {
    Ok(global_meet(families, field)?.dim() >= t)
}

/// Exact t-covering data: the covering number and every cover of that
/// minimum dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverResult {
    pub tau: usize,
    pub covers: Vec<Subspace>,
    pub t: usize,
}

fn is_cover(cand: &Subspace, family: &Family, t: usize, field: &FieldDesc) -> bool {
    family.members().iter().all(|m| dim_meet(cand, m, field).expect("same ambient") >= t)
}

/// Candidate covers of dimension `s`: every cover meets the first member
/// `F` in at least `t` dimensions, so it contains some t-subspace of `F`;
/// generating only the s-spaces over those is complete.
fn cover_candidates(
    family: &Family,
    s: usize,
    t: usize,
    field: &FieldDesc,
    budget: u64,
) -> Result<Vec<Subspace>, VerifyError> {
    let n = family.ambient();
    let first = &family.members()[0];
    let full = Subspace::full(n, field);
    let zero = Subspace::zero(n, field);

    let via_envelope = {
        use crate::qcount::{count_containing, gauss_binom};
        let anchors = gauss_binom(first.dim() as i64, t as i64, field.q())?;
        let per = count_containing(t as i64, s as i64, n as i64, field.q())?;
        let direct = gauss_binom(n as i64, s as i64, field.q())?;
        anchors * per < direct
    };
    if via_envelope {
        let mut set = BTreeSet::new();
        for anchor in enumerate_between(&zero, first, t, field)? {
            set.extend(enumerate_between(&anchor, &full, s, field)?);
        }
        Ok(set.into_iter().collect())
    } else {
        Ok(shared_slice(n, s, field, budget)?.to_vec())
    }
}

/// Exact covering number search, ascending from dimension `t`; returns
/// all minimum-dimension covers.
pub fn covering_number(
    family: &Family,
    t: usize,
    field: &FieldDesc,
    budget: u64,
) -> Result<CoverResult, VerifyError> {
    if family.is_empty() {
        return Err(VerifyError::EmptyFamily);
    }
    if family.member_dim() < t {
        return Err(VerifyError::NoCover);
    }
    let n = family.ambient();
    for s in t..=n {
        let candidates = cover_candidates(family, s, t, field, budget)?;
        let covers: Vec<Subspace> = candidates
            .into_par_iter()
            .filter(|c| is_cover(c, family, t, field))
            .collect();
        if !covers.is_empty() {
            return Ok(CoverResult { tau: s, covers, t });
        }
    }
    unreachable!("the whole space covers any family with member_dim >= t")
}

/// The unique largest family of `partner_dim`-spaces cross t-intersecting
/// with every member of `family`.
pub fn partner_closure(
    family: &Family,
    partner_dim: usize,
    t: usize,
    field: &FieldDesc,
    budget: u64,
) -> Result<Family, VerifyError> {
    let n = family.ambient();
    let slice = shared_slice(n, partner_dim, field, budget)?;
    // Fast acceptance: a candidate meeting the family's global meet in at
    // least t meets every member in at least t, since the global meet
    // sits inside each of them.
    let core = if family.is_empty() { None } else { Some(global_meet(&[family], field)?) };
    let members: Vec<Subspace> = slice
        .par_iter()
        .filter(|cand| {
            if let Some(core) = &core {
                if core.dim() >= t && dim_meet(cand, core, field).expect("ambient") >= t {
                    return true;
                }
            }
            family.members().iter().all(|m| dim_meet(cand, m, field).expect("ambient") >= t)
        })
        .cloned()
        .collect();
    Ok(Family::from_members(n, partner_dim, field.q(), members)?)
}

/// Alternates [`partner_closure`] on a pair until it stops changing.
/// Returns the fixed point and the number of alternation rounds.
///
/// One closure step determines the partner side entirely, so after the
/// first hop only the first coordinate carries state: as soon as a round
/// reproduces it, the freshly computed partner pair is mutually closed.
pub fn closure_fixed_point(
    f1: &Family,
    f2: &Family,
    t: usize,
    field: &FieldDesc,
    budget: u64,
) -> Result<(Family, Family, usize), VerifyError> {
    let mut a = f1.clone();
    let mut rounds = 0usize;
    loop {
        let next_b = partner_closure(&a, f2.member_dim(), t, field, budget)?;
        let next_a = partner_closure(&next_b, a.member_dim(), t, field, budget)?;
        rounds += 1;
        if next_a == a {
            return Ok((next_a, next_b, rounds));
        }
        a = next_a;
        // Growth is monotone and bounded by the slice, so this cannot
        // loop forever; the assert is a tripwire, not control flow.
        assert!(rounds as u64 <= 2 + budget, "closure failed to converge");
    }
}

/// Outcome of the round-robin closure on r >= 3 cross families.
#[derive(Clone, Debug)]
pub struct RcrossClosure {
    pub families: Vec<Family>,
    pub rounds: usize,
    /// False when the round cap was hit or a state repeated without
    /// stabilizing; coordinate-wise closure for three or more families
    /// is not guaranteed to settle on a unique maximum, so
    /// non-convergence is reported rather than asserted away.
    pub converged: bool,
}

/// Round-robin coordinate closure for r >= 3 families: each coordinate is
/// replaced by every subspace of its dimension that meets all transversal
/// tuples of the other coordinates in at least `t`.
pub fn closure_rcross(
    families: &[Family],
    t: usize,
    field: &FieldDesc,
    budget: u64,
    max_rounds: usize,
) -> Result<RcrossClosure, VerifyError> {
    if families.len() < 2 {
        return Err(VerifyError::TooFewFamilies);
    }
    let n = families[0].ambient();
    let mut current: Vec<Family> = families.to_vec();
    let mut seen_states: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    let state_key = |fams: &[Family]| -> Vec<Vec<u64>> {
        fams.iter()
            .map(|f| f.members().iter().flat_map(|s| s.codes().iter().copied()).collect())
            .collect()
    };
    seen_states.insert(state_key(&current));
    for round in 1..=max_rounds {
        let mut next = current.clone();
        for i in 0..next.len() {
            let others: Vec<&Family> =
                next.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f).collect();
            let dim = next[i].member_dim();
            let slice = shared_slice(n, dim, field, budget)?;
            let members: Vec<Subspace> = slice
                .par_iter()
                .filter(|cand| rcross_admits(cand, &others, t, field))
                .cloned()
                .collect();
            next[i] = Family::from_members(n, dim, field.q(), members)?;
        }
        let fixed = next == current;
        current = next;
        if fixed {
            return Ok(RcrossClosure { families: current, rounds: round, converged: true });
        }
        if !seen_states.insert(state_key(&current)) {
            // State revisited without being a fixed point: a cycle.
            return Ok(RcrossClosure { families: current, rounds: round, converged: false });
        }
    }
    Ok(RcrossClosure { families: current, rounds: max_rounds, converged: false })
}

/// Whether `cand` meets every transversal tuple of `others` in >= t.
fn rcross_admits(cand: &Subspace, others: &[&Family], t: usize, field: &FieldDesc) -> bool {
    fn dfs(
        cand_meet: &Subspace,
        others: &[&Family],
        t: usize,
        field: &FieldDesc,
    ) -> bool {
        if cand_meet.dim() < t {
            return false;
        }
        let Some((first, rest)) = others.split_first() else {
            return true;
        };
        first
            .members()
            .iter()
            .all(|m| dfs(&meet(cand_meet, m, field).expect("ambient"), rest, t, field))
    }
    dfs(cand, others, t, field)
}

/// For a maximal cross-t pair, checks that the two sets of minimum
/// t-covers are themselves cross t-intersecting.
pub fn mincover_cross_check(
    f1: &Family,
    f2: &Family,
    t: usize,
    field: &FieldDesc,
    budget: u64,
) -> Result<CheckOutcome, VerifyError> {
    let closed_2 = partner_closure(f1, f2.member_dim(), t, field, budget)?;
    let closed_1 = partner_closure(f2, f1.member_dim(), t, field, budget)?;
    if &closed_1 != f1 || &closed_2 != f2 {
        return Err(VerifyError::NotMaximal);
    }
    let covers_1 = covering_number(f1, t, field, budget)?;
    let covers_2 = covering_number(f2, t, field, budget)?;
    let mut checked = 0u64;
    for c1 in &covers_1.covers {
        for c2 in &covers_2.covers {
            checked += 1;
            let d = dim_meet(c1, c2, field)?;
            if d < t {
                return Ok(CheckOutcome::fail(
                    Witness { members: vec![c1.clone(), c2.clone()], achieved_dim: d },
                    checked,
                    false,
                ));
            }
        }
    }
    Ok(CheckOutcome::pass(checked, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{construct, ConstructionSpec, Family};
    use crate::gfq::field_make;
    use crate::lattice::{enumerate_slice, DEFAULT_BUDGET};

    const B: u64 = DEFAULT_BUDGET;

    fn star(k: usize, anchor: &Subspace, f: &FieldDesc) -> Family {
        construct(&ConstructionSpec::C { k, t_anchor: anchor.clone() }, f, B).unwrap()
    }

    #[test]
    fn stars_over_a_common_anchor_are_cross_intersecting() {
        let f = field_make(2).unwrap();
        let t_anchor = Subspace::coordinate(6, 1, &f);
        let f1 = star(2, &t_anchor, &f);
        let f2 = star(3, &t_anchor, &f);
        let out = is_cross_intersecting(&[&f1, &f2], 1, &f, B, None).unwrap();
        assert!(out.holds);
        assert!(!out.sampled);
        assert!(is_trivial(&[&f1, &f2], 1, &f).unwrap());
    }

    #[test]
    fn disjoint_anchor_stars_fail_with_witness() {
        let f = field_make(2).unwrap();
        let a1 = Subspace::coordinate(6, 1, &f);
        let a2 = Subspace::from_rows(&[vec![0, 0, 0, 0, 0, 1]], &f).unwrap();
        let f1 = star(2, &a1, &f);
        let f2 = star(2, &a2, &f);
        let out = is_cross_intersecting(&[&f1, &f2], 1, &f, B, None).unwrap();
        assert!(!out.holds);
        let w = out.witness.unwrap();
        assert_eq!(w.members.len(), 2);
        assert!(w.achieved_dim < 1);
        assert_eq!(dim_meet(&w.members[0], &w.members[1], &f).unwrap(), w.achieved_dim);
    }

    #[test]
    fn ab_pair_is_cross_intersecting() {
        let f = field_make(2).unwrap();
        let x = Subspace::coordinate(6, 1, &f);
        let m = Subspace::coordinate(6, 3, &f);
        let fam_a =
            construct(&ConstructionSpec::A { k: 2, x: x.clone(), m: m.clone() }, &f, B).unwrap();
        let fam_b = construct(&ConstructionSpec::B { l: 2, x, m }, &f, B).unwrap();
        let out = is_cross_intersecting(&[&fam_a, &fam_b], 1, &f, B, None).unwrap();
        assert!(out.holds, "witness: {:?}", out.witness);
        // Non-trivial: the B side has members avoiding X.
        assert!(!is_trivial(&[&fam_a, &fam_b], 1, &f).unwrap());
        assert!(!is_trivial(&[&fam_b], 1, &f).unwrap());
    }

    #[test]
    fn rwise_constructions_pass_and_low_meet_fails() {
        // A(k, t+r-1, X, M) ∪ [M ch k] and D(k, t+r-1, Z) at q=2, n=6,
        // k=3, r=3, t=1 (so the union anchor X has dim t+r-2 = 2).
        let f = field_make(2).unwrap();
        let (k, r, t) = (3usize, 3usize, 1usize);
        let x = Subspace::coordinate(6, t + r - 2, &f);
        let m = Subspace::coordinate(6, k + 1, &f);
        let a = construct(&ConstructionSpec::A { k, x: x.clone(), m: m.clone() }, &f, B).unwrap();
        let mfull = construct(&ConstructionSpec::MFull { k, m: m.clone() }, &f, B).unwrap();
        let mut members = a.members().to_vec();
        members.extend(mfull.members().iter().cloned());
        let union = Family::from_members(6, k, 2, members).unwrap();
        let out = is_rwise_intersecting(&union, r, t, &f, B, None).unwrap();
        assert!(out.holds, "witness: {:?}", out.witness);
        assert!(!is_trivial(&[&union], t, &f).unwrap());

        let z = Subspace::coordinate(6, t + r, &f);
        let d = construct(&ConstructionSpec::D { l: k, s: t + r - 1, t_anchor: z }, &f, B).unwrap();
        let out = is_rwise_intersecting(&d, r, t, &f, B, None).unwrap();
        assert!(out.holds, "witness: {:?}", out.witness);
        assert!(!is_trivial(&[&d], t, &f).unwrap());

        // Two members meeting below t + r - 2 sink the family.
        let bad = Family::from_members(
            6,
            2,
            2,
            vec![
                Subspace::coordinate(6, 2, &f),
                Subspace::from_rows(&[vec![0, 0, 0, 0, 1, 0], vec![0, 0, 0, 0, 0, 1]], &f).unwrap(),
            ],
        )
        .unwrap();
        let out = is_rwise_intersecting(&bad, 3, 1, &f, B, None).unwrap();
        assert!(!out.holds);
        assert!(out.witness.unwrap().achieved_dim < 1);
    }

    #[test]
    fn rwise_small_family_reduces_to_global_meet() {
        let f = field_make(2).unwrap();
        let fam = Family::from_members(
            4,
            2,
            2,
            vec![
                Subspace::coordinate(4, 2, &f),
                Subspace::from_rows(&[vec![1, 0, 0, 0], vec![0, 0, 1, 0]], &f).unwrap(),
            ],
        )
        .unwrap();
        // r = 5 exceeds the family size; the joint meet is the e1 line.
        assert!(is_rwise_intersecting(&fam, 5, 1, &f, B, None).unwrap().holds);
        assert!(!is_rwise_intersecting(&fam, 5, 2, &f, B, None).unwrap().holds);
    }

    #[test]
    fn tau_of_star_is_t() {
        let f = field_make(2).unwrap();
        let anchor = Subspace::coordinate(6, 1, &f);
        let fam = star(3, &anchor, &f);
        let res = covering_number(&fam, 1, &f, B).unwrap();
        assert_eq!(res.tau, 1);
        assert!(res.covers.contains(&anchor));
    }

    #[test]
    fn tau_of_a_is_t_with_cover_x() {
        let f = field_make(2).unwrap();
        let x = Subspace::coordinate(6, 1, &f);
        let m = Subspace::coordinate(6, 3, &f);
        let fam = construct(&ConstructionSpec::A { k: 2, x: x.clone(), m }, &f, B).unwrap();
        let res = covering_number(&fam, 1, &f, B).unwrap();
        assert_eq!(res.tau, 1);
        assert_eq!(res.covers, vec![x]);
    }

    #[test]
    fn tau_of_b_is_t_plus_1() {
        let f = field_make(2).unwrap();
        let x = Subspace::coordinate(6, 1, &f);
        let m = Subspace::coordinate(6, 3, &f);
        let fam = construct(&ConstructionSpec::B { l: 2, x, m }, &f, B).unwrap();
        let res = covering_number(&fam, 1, &f, B).unwrap();
        assert_eq!(res.tau, 2);
    }

    #[test]
    fn envelope_and_full_scan_agree() {
        let f = field_make(2).unwrap();
        let x = Subspace::coordinate(5, 1, &f);
        let m = Subspace::coordinate(5, 3, &f);
        let fam = construct(&ConstructionSpec::B { l: 2, x, m }, &f, B).unwrap();
        for s in 1..=3usize {
            let candidates = cover_candidates(&fam, s, 1, &f, B).unwrap();
            let via_env: Vec<Subspace> =
                candidates.into_iter().filter(|c| is_cover(c, &fam, 1, &f)).collect();
            let via_full: Vec<Subspace> = enumerate_slice(5, s, &f, B)
                .unwrap()
                .into_elements()
                .into_iter()
                .filter(|c| is_cover(c, &fam, 1, &f))
                .collect();
            assert_eq!(via_env, via_full, "s={s}");
        }
    }

    #[test]
    fn closure_of_star_is_the_partner_star() {
        let f = field_make(2).unwrap();
        let anchor = Subspace::coordinate(6, 1, &f);
        let f1 = star(2, &anchor, &f);
        let partner = partner_closure(&f1, 3, 1, &f, B).unwrap();
        assert_eq!(partner, star(3, &anchor, &f));
    }

    #[test]
    fn closure_of_singleton_collects_everything_meeting_it() {
        let f = field_make(2).unwrap();
        let member = Subspace::coordinate(5, 2, &f);
        let single = Family::from_members(5, 2, 2, vec![member.clone()]).unwrap();
        let closed = partner_closure(&single, 3, 2, &f, B).unwrap();
        for s in enumerate_slice(5, 3, &f, B).unwrap().elements() {
            assert_eq!(closed.contains_member(s), dim_meet(s, &member, &f).unwrap() >= 2);
        }
    }

    #[test]
    fn ab_pair_is_a_fixed_point() {
        let f = field_make(2).unwrap();
        let x = Subspace::coordinate(6, 1, &f);
        let m = Subspace::coordinate(6, 3, &f);
        let fam_a =
            construct(&ConstructionSpec::A { k: 2, x: x.clone(), m: m.clone() }, &f, B).unwrap();
        let fam_b = construct(&ConstructionSpec::B { l: 2, x, m }, &f, B).unwrap();
        assert_eq!(partner_closure(&fam_a, 2, 1, &f, B).unwrap(), fam_b);
        assert_eq!(partner_closure(&fam_b, 2, 1, &f, B).unwrap(), fam_a);
        let (c1, c2, _rounds) = closure_fixed_point(&fam_a, &fam_b, 1, &f, B).unwrap();
        assert_eq!(c1, fam_a);
        assert_eq!(c2, fam_b);
    }

    #[test]
    fn closure_is_monotone_toward_the_fixed_point() {
        // f ⊆ closure(closure(f)) when the dimensions line up.
        let f = field_make(2).unwrap();
        let seed = Family::from_members(5, 2, 2, vec![Subspace::coordinate(5, 2, &f)]).unwrap();
        let partner = partner_closure(&seed, 2, 1, &f, B).unwrap();
        let back = partner_closure(&partner, 2, 1, &f, B).unwrap();
        for m in seed.members() {
            assert!(back.contains_member(m));
        }
        // One more alternation is a no-op (idempotent at the fixed point).
        let (a, b, _) = closure_fixed_point(&back, &partner, 1, &f, B).unwrap();
        assert_eq!(partner_closure(&a, 2, 1, &f, B).unwrap(), b);
        assert_eq!(partner_closure(&b, 2, 1, &f, B).unwrap(), a);
    }

    #[test]
    fn mincover_cross_check_on_maximal_pairs() {
        let f = field_make(2).unwrap();
        let anchor = Subspace::coordinate(6, 1, &f);
        let f1 = star(2, &anchor, &f);
        let f2 = star(3, &anchor, &f);
        assert!(mincover_cross_check(&f1, &f2, 1, &f, B).unwrap().holds);

        let x = Subspace::coordinate(6, 1, &f);
        let m = Subspace::coordinate(6, 3, &f);
        let fam_a =
            construct(&ConstructionSpec::A { k: 2, x: x.clone(), m: m.clone() }, &f, B).unwrap();
        let fam_b = construct(&ConstructionSpec::B { l: 2, x, m }, &f, B).unwrap();
        assert!(mincover_cross_check(&fam_a, &fam_b, 1, &f, B).unwrap().holds);

        // Dropping a member breaks maximality.
        let truncated = Family::from_members(6, 2, 2, fam_b.members()[1..].to_vec()).unwrap();
        assert!(matches!(
            mincover_cross_check(&fam_a, &truncated, 1, &f, B),
            Err(VerifyError::NotMaximal)
        ));
    }

    #[test]
    fn budget_exceeded_without_sampling_is_an_error() {
        let f = field_make(2).unwrap();
        let anchor = Subspace::coordinate(6, 1, &f);
        let f1 = star(2, &anchor, &f);
        let f2 = star(3, &anchor, &f);
        assert!(matches!(
            is_cross_intersecting(&[&f1, &f2], 1, &f, 10, None),
            Err(VerifyError::BudgetExceeded { .. })
        ));
        let out =
            is_cross_intersecting(&[&f1, &f2], 1, &f, 10, Some(SampleCfg { tuples: 64, seed: 7 }))
                .unwrap();
        assert!(out.holds);
        assert!(out.sampled);
        assert_eq!(out.tuples_checked, 64);
    }

    #[test]
    fn rcross_closure_converges_on_star_triples() {
        let f = field_make(2).unwrap();
        let anchor = Subspace::coordinate(5, 1, &f);
        let fams: Vec<Family> = (0..3).map(|_| star(2, &anchor, &f)).collect();
        let out = closure_rcross(&fams, 1, &f, B, 16).unwrap();
        assert!(out.converged);
        for fam in &out.families {
            assert_eq!(fam, &star(2, &anchor, &f));
        }
        // A seeded non-maximal triple grows and settles.
        let single = Family::from_members(5, 2, 2, vec![Subspace::coordinate(5, 2, &f)]).unwrap();
        let out = closure_rcross(&[single.clone(), single.clone(), single], 1, &f, B, 16).unwrap();
        assert!(out.converged);
        let check = is_cross_intersecting(
            &[&out.families[0], &out.families[1], &out.families[2]],
            1,
            &f,
            u64::MAX,
            None,
        )
        .unwrap();
        assert!(check.holds);
    }

    #[test]
    fn maximal_pairs_with_minimum_taus_are_trivial() {
        // Whenever both covering numbers of a maximal pair equal t the
        // pair shares a common t-space.
        let f = field_make(2).unwrap();
        let t = 1usize;
        let mut pairs: Vec<(Family, Family)> = Vec::new();
        let anchor = Subspace::coordinate(6, t, &f);
        pairs.push((star(2, &anchor, &f), star(3, &anchor, &f)));
        let x = Subspace::coordinate(6, t, &f);
        let m = Subspace::coordinate(6, 3, &f);
        pairs.push((
            construct(&ConstructionSpec::A { k: 2, x: x.clone(), m: m.clone() }, &f, B).unwrap(),
            construct(&ConstructionSpec::B { l: 2, x, m }, &f, B).unwrap(),
        ));
        let z = Subspace::coordinate(6, t + 1, &f);
        pairs.push((
            construct(&ConstructionSpec::C { k: 2, t_anchor: z.clone() }, &f, B).unwrap(),
            construct(&ConstructionSpec::D { l: 2, s: t, t_anchor: z }, &f, B).unwrap(),
        ));
        // A cover-seeded fixed point as well.
        let seed = Family::from_members(6, 2, 2, vec![Subspace::coordinate(6, 2, &f)]).unwrap();
        let empty = Family::from_members(6, 2, 2, vec![]).unwrap();
        let (a, b, _) = closure_fixed_point(&seed, &empty, t, &f, B).unwrap();
        pairs.push((a, b));

        for (f1, f2) in &pairs {
            // All are maximal by construction/closure; both taus at t
            // must force a common t-space.
            let tau1 = covering_number(f1, t, &f, B).unwrap().tau;
            let tau2 = covering_number(f2, t, &f, B).unwrap().tau;
            if tau1 == t && tau2 == t {
                assert!(is_trivial(&[f1, f2], t, &f).unwrap());
            }
            // Cover-bound property with the refined tau-based cases.
            for (fam, partner) in [(f1, f2), (f2, f1)] {
                let (n, k, l) = (fam.ambient() as i64, fam.member_dim() as i64, partner.member_dim() as i64);
                let (mk, ml) = (
                    covering_number(fam, t, &f, B).unwrap().tau as i64,
                    covering_number(partner, t, &f, B).unwrap().tau as i64,
                );
                let tt = t as i64;
                use crate::qcount::gauss_binom;
                let coarse = gauss_binom(mk, tt, 2).unwrap() * gauss_binom(n - tt, k - tt, 2).unwrap();
                assert!(BigUint::from(fam.len()) <= coarse);
                if ml == tt + 1 {
                    let refined = gauss_binom(mk, tt, 2).unwrap()
                        * gauss_binom(l - tt + 1, 1, 2).unwrap()
                        * gauss_binom(n - tt - 1, k - tt - 1, 2).unwrap();
                    assert!(BigUint::from(fam.len()) <= refined, "refined (i) bound failed");
                } else if ml >= tt + 2 {
                    let refined = gauss_binom(mk, tt, 2).unwrap()
                        * gauss_binom(l, 1, 2).unwrap().pow((ml - tt - 2) as u32)
                        * gauss_binom(l - tt + 1, 1, 2).unwrap().pow(2)
                        * gauss_binom(n - ml, k - ml, 2).unwrap();
                    assert!(BigUint::from(fam.len()) <= refined, "refined (ii) bound failed");
                }
            }
        }
    }

    #[test]
    fn fs_bound_instantiated_on_a_constructed_family() {
        // Family of k-spaces all meeting a fixed l-space G in >= t dims;
        // for S with dim(G ∩ S) = r0 < t, the members over S number at
        // most [l-r0 ch t-r0] * [n-s0-t+r0 ch k-s0-t+r0].
        use crate::qcount::gauss_binom;
        let f = field_make(2).unwrap();
        let (n, k, l, t) = (6usize, 2usize, 3usize, 1usize);
        let g = Subspace::coordinate(n, l, &f);
        let fam =
            construct(&ConstructionSpec::D { l: k, s: t, t_anchor: g.clone() }, &f, B).unwrap();
        // S spanned by e4: meets G trivially, r0 = 0.
        let s_anchor = Subspace::from_rows(&[vec![0, 0, 0, 1, 0, 0]], &f).unwrap();
        let r0 = dim_meet(&g, &s_anchor, &f).unwrap();
        assert_eq!(r0, 0);
        let over_s = fam
            .members()
            .iter()
            .filter(|m| crate::gfq::contains(m, &s_anchor, &f).unwrap())
            .count();
        let s0 = s_anchor.dim();
        let bound = gauss_binom((l - r0) as i64, (t - r0) as i64, 2).unwrap()
            * gauss_binom((n - s0 - t + r0) as i64, (k - s0 - t + r0) as i64, 2).unwrap();
        assert!(BigUint::from(over_s) <= bound, "{over_s} > {bound}");
    }
}
