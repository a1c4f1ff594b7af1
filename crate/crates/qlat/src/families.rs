//! The named family constructions, as membership predicates and explicit
//! enumerations with formula-backed size checks.
//!
//! Every construction is anchored to explicit subspaces supplied by the
//! caller; [`coordinate_spec`] picks a nested coordinate-aligned anchor
//! chain when the caller only cares about dimensions. Enumeration lifts
//! through the quotient by the containment anchor where one exists and
//! falls back to filtering a full slice otherwise.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::gfq::{contains, dim_meet, join, FieldDesc, GfqError, Subspace};
use crate::lattice::{enumerate_between, shared_slice, LatticeError};
use crate::qcount::{
    count_containing, formula_eval, gauss_binom, nprime, CountValue, FormulaId, FormulaParams,
    QcountError,
};

#[derive(Debug, Error)]
pub enum FamiliesError {
    #[error("anchor violation: {0}")]
    AnchorViolation(String),
    #[error("no closed-form size is paired with construction {0}")]
    NoFormula(ConstructionKind),
    #[error("family is empty")]
    EmptyFamily,
    #[error("family members must all have dimension {expected}, found {found}")]
    MixedDimensions { expected: usize, found: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Gfq(#[from] GfqError),
    #[error(transparent)]
    Qcount(#[from] QcountError),
}

/// A finite set of equal-dimension subspaces, canonically sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    q: u64,
    ambient: usize,
    member_dim: usize,
    members: Vec<Subspace>,
}

impl Family {
    /// Builds a family from members, sorting and deduplicating.
    pub fn from_members(
        ambient: usize,
        member_dim: usize,
        q: u64,
        members: Vec<Subspace>,
    ) -> Result<Family, FamiliesError> {
        let mut members = members;
        for m in &members {
            if m.dim() != member_dim {
                return Err(FamiliesError::MixedDimensions { expected: member_dim, found: m.dim() });
            }
            if m.ambient() != ambient {
                return Err(GfqError::AmbientMismatch(ambient, m.ambient()).into());
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { q, ambient, member_dim, members })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn member_dim(&self) -> usize {
        self.member_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn contains_member(&self, s: &Subspace) -> bool {
        self.members.binary_search(s).is_ok()
    }

    /// Minimal subspace containing every member.
    pub fn hull(&self, f: &FieldDesc) -> Result<Subspace, FamiliesError> {
        let mut it = self.members.iter();
        let first = it.next().ok_or(FamiliesError::EmptyFamily)?;
        let mut acc = first.clone();
        for m in it {
            if acc.dim() == self.ambient {
                break;
            }
            acc = join(&acc, m, f)?;
        }
        Ok(acc)
    }
}

/// Construction names. `E1`/`E2`/`E3` are the three layers of the `H2`
/// union; `MFull` is the full level `[M ch k]` of a fixed subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionKind {
    A,
    B,
    C,
    D,
    E1,
    E2,
    E3,
    H2,
    MFull,
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConstructionKind::A => "A",
            ConstructionKind::B => "B",
            ConstructionKind::C => "C",
            ConstructionKind::D => "D",
            ConstructionKind::E1 => "E1",
            ConstructionKind::E2 => "E2",
            ConstructionKind::E3 => "E3",
            ConstructionKind::H2 => "H2",
            ConstructionKind::MFull => "M_full",
        };
        f.write_str(s)
    }
}

impl FromStr for ConstructionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(ConstructionKind::A),
            "B" | "b" => Ok(ConstructionKind::B),
            "C" | "c" => Ok(ConstructionKind::C),
            "D" | "d" => Ok(ConstructionKind::D),
            "E1" | "e1" => Ok(ConstructionKind::E1),
            "E2" | "e2" => Ok(ConstructionKind::E2),
            "E3" | "e3" => Ok(ConstructionKind::E3),
            "H2" | "h2" => Ok(ConstructionKind::H2),
            "M_full" | "m_full" | "mfull" => Ok(ConstructionKind::MFull),
            other => Err(format!("unknown construction name: {other}")),
        }
    }
}

/// A fully anchored construction.
///
/// * `A`: k-spaces containing `x` that meet `m` in dimension at least
///   `dim x + 1`.
/// * `B`: l-spaces containing `x`, together with every l-subspace of `m`.
/// * `C`: k-spaces containing `t_anchor`.
/// * `D`: l-spaces meeting `t_anchor` in dimension at least `s`.
/// * `E1`/`E2`/`E3`: the three layers of `H2` over the chain `x ⊆ m ⊆ c`.
/// * `H2`: their union.
/// * `MFull`: all k-subspaces of `m`.
#[derive(Clone, Debug)]
pub enum ConstructionSpec {
    A { k: usize, x: Subspace, m: Subspace },
    B { l: usize, x: Subspace, m: Subspace },
    C { k: usize, t_anchor: Subspace },
    D { l: usize, s: usize, t_anchor: Subspace },
    E1 { k: usize, x: Subspace, m: Subspace },
    E2 { k: usize, x: Subspace, m: Subspace, c: Subspace },
    E3 { k: usize, x: Subspace, m: Subspace, c: Subspace },
    H2 { k: usize, x: Subspace, m: Subspace, c: Subspace },
    MFull { k: usize, m: Subspace },
}

/// Size-check report: the enumerated cardinality against the paired
/// closed-form value.
#[derive(Clone, Debug)]
pub struct SizeCheck {
    pub kind: ConstructionKind,
    pub enumerated: CountValue,
    pub formula: CountValue,
    pub formula_label: String,
    pub matches: bool,
}

impl ConstructionSpec {
    pub fn kind(&self) -> ConstructionKind {
        match self {
            ConstructionSpec::A { .. } => ConstructionKind::A,
            ConstructionSpec::B { .. } => ConstructionKind::B,
            ConstructionSpec::C { .. } => ConstructionKind::C,
            ConstructionSpec::D { .. } => ConstructionKind::D,
            ConstructionSpec::E1 { .. } => ConstructionKind::E1,
            ConstructionSpec::E2 { .. } => ConstructionKind::E2,
            ConstructionSpec::E3 { .. } => ConstructionKind::E3,
            ConstructionSpec::H2 { .. } => ConstructionKind::H2,
            ConstructionSpec::MFull { .. } => ConstructionKind::MFull,
        }
    }

    pub fn member_dim(&self) -> usize {
        match self {
            ConstructionSpec::A { k, .. }
            | ConstructionSpec::C { k, .. }
            | ConstructionSpec::E1 { k, .. }
            | ConstructionSpec::E2 { k, .. }
            | ConstructionSpec::E3 { k, .. }
            | ConstructionSpec::H2 { k, .. }
            | ConstructionSpec::MFull { k, .. } => *k,
            ConstructionSpec::B { l, .. } | ConstructionSpec::D { l, .. } => *l,
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            ConstructionSpec::A { x, .. }
            | ConstructionSpec::B { x, .. }
            | ConstructionSpec::E1 { x, .. }
            | ConstructionSpec::E2 { x, .. }
            | ConstructionSpec::E3 { x, .. }
            | ConstructionSpec::H2 { x, .. } => x.ambient(),
            ConstructionSpec::C { t_anchor, .. } | ConstructionSpec::D { t_anchor, .. } => {
                t_anchor.ambient()
            }
            ConstructionSpec::MFull { m, .. } => m.ambient(),
        }
    }

    /// Checks the nesting and dimension invariants of the anchors.
    pub fn validate(&self, f: &FieldDesc) -> Result<(), FamiliesError> {
        let bad = |msg: String| Err(FamiliesError::AnchorViolation(msg));
        let n = self.ambient();
        let member_dim = self.member_dim();
        if member_dim > n {
            return bad(format!("member dimension {member_dim} exceeds ambient {n}"));
        }
        match self {
            ConstructionSpec::A { k, x, m } => {
                if !contains(m, x, f)? {
                    return bad("A requires x ⊆ m".into());
                }
                if m.dim() <= x.dim() {
                    return bad("A requires dim m > dim x".into());
                }
                if *k < x.dim() {
                    return bad("A requires k ≥ dim x".into());
                }
            }
            ConstructionSpec::B { l, x, m } => {
                if !contains(m, x, f)? {
                    return bad("B requires x ⊆ m".into());
                }
                if m.dim() != l + 1 {
                    return bad(format!("B requires dim m = l + 1, got {} vs l = {}", m.dim(), l));
                }
                if x.dim() > *l {
                    return bad("B requires dim x ≤ l".into());
                }
            }
            ConstructionSpec::C { k, t_anchor } => {
                if t_anchor.dim() > *k {
                    return bad("C requires dim t_anchor ≤ k".into());
                }
            }
            ConstructionSpec::D { l, s, t_anchor } => {
                if *s > t_anchor.dim() || *s > *l {
                    return bad("D requires s ≤ dim t_anchor and s ≤ l".into());
                }
            }
            ConstructionSpec::E1 { k, x, m } => {
                if !contains(m, x, f)? || m.dim() != *k || x.dim() >= *k {
                    return bad("E1 requires x ⊂ m with dim m = k".into());
                }
            }
            ConstructionSpec::E2 { k, x, m, c }
            | ConstructionSpec::E3 { k, x, m, c }
            | ConstructionSpec::H2 { k, x, m, c } => {
                if !contains(m, x, f)? || !contains(c, m, f)? {
                    return bad(format!("{} requires x ⊆ m ⊆ c", self.kind()));
                }
                if m.dim() != *k {
                    return bad(format!("{} requires dim m = k", self.kind()));
                }
                let d = x.dim();
                if d >= *k {
                    return bad(format!("{} requires dim x < k", self.kind()));
                }
                let cd = c.dim();
                if cd <= *k || (cd > 2 * k - d && cd != n) {
                    return bad(format!(
                        "{} requires dim c in {{k+1, ..., 2k - dim x}} or dim c = n",
                        self.kind()
                    ));
                }
                if matches!(self, ConstructionSpec::E3 { .. }) && d == 0 {
                    return bad("E3 requires dim x ≥ 1".into());
                }
            }
            ConstructionSpec::MFull { k, m } => {
                if *k > m.dim() {
                    return bad("M_full requires k ≤ dim m".into());
                }
            }
        }
        Ok(())
    }

    /// Membership predicate, the definitional condition verbatim.
    pub fn accepts(&self, s: &Subspace, f: &FieldDesc) -> Result<bool, FamiliesError> {
        if s.dim() != self.member_dim() || s.ambient() != self.ambient() {
            return Ok(false);
        }
        let ok = match self {
            ConstructionSpec::A { x, m, .. } => {
                contains(s, x, f)? && dim_meet(s, m, f)? >= x.dim() + 1
            }
            ConstructionSpec::B { x, m, .. } => contains(s, x, f)? || contains(m, s, f)?,
            ConstructionSpec::C { t_anchor, .. } => contains(s, t_anchor, f)?,
            ConstructionSpec::D { s: thresh, t_anchor, .. } => {
                dim_meet(s, t_anchor, f)? >= *thresh
            }
            ConstructionSpec::E1 { x, m, .. } => {
                contains(s, x, f)? && dim_meet(s, m, f)? >= x.dim() + 1
            }
            ConstructionSpec::E2 { k, x, m, c } => {
                let d = x.dim();
                contains(s, x, f)?
                    && dim_meet(s, m, f)? == d
                    && dim_meet(s, c, f)? == c.dim() + d - k
            }
            ConstructionSpec::E3 { k, x, m, c } => {
                contains(c, s, f)?
                    && dim_meet(s, x, f)? + 1 == x.dim()
                    && dim_meet(s, m, f)? + 1 == *k
            }
            ConstructionSpec::H2 { k, x, m, c } => {
                let e1 = ConstructionSpec::E1 { k: *k, x: x.clone(), m: m.clone() };
                let e2 = ConstructionSpec::E2 { k: *k, x: x.clone(), m: m.clone(), c: c.clone() };
                let e3 = ConstructionSpec::E3 { k: *k, x: x.clone(), m: m.clone(), c: c.clone() };
                e1.accepts(s, f)? || e2.accepts(s, f)? || e3.accepts(s, f)?
            }
            ConstructionSpec::MFull { m, .. } => contains(m, s, f)?,
        };
        Ok(ok)
    }
}

fn check_family_budget(count: BigUint, budget: u64) -> Result<(), FamiliesError> {
    use num_traits::ToPrimitive;
    match count.to_u64() {
        Some(c) if c <= budget => Ok(()),
        _ => Err(LatticeError::BudgetExceeded { required: count, budget }.into()),
    }
}

/// Materializes the construction as an explicit family.
pub fn construct(
    spec: &ConstructionSpec,
    f: &FieldDesc,
    budget: u64,
) -> Result<Family, FamiliesError> {
    spec.validate(f)?;
    let n = spec.ambient();
    let dim = spec.member_dim();
    let full = Subspace::full(n, f);

    let members: Vec<Subspace> = match spec {
        ConstructionSpec::A { k, x, m } => {
            check_family_budget(count_containing(x.dim() as i64, *k as i64, n as i64, f.q())?, budget)?;
            let threshold = x.dim() + 1;
            let mut out = Vec::new();
            for s in enumerate_between(x, &full, *k, f)? {
                if dim_meet(&s, m, f)? >= threshold {
                    out.push(s);
                }
            }
            out
        }
        ConstructionSpec::B { l, x, m } => {
            check_family_budget(count_containing(x.dim() as i64, *l as i64, n as i64, f.q())?, budget)?;
            let mut set: BTreeSet<Subspace> =
                enumerate_between(x, &full, *l, f)?.into_iter().collect();
            set.extend(enumerate_between(&Subspace::zero(n, f), m, *l, f)?);
            set.into_iter().collect()
        }
        ConstructionSpec::C { k, t_anchor } => {
            check_family_budget(
                count_containing(t_anchor.dim() as i64, *k as i64, n as i64, f.q())?,
                budget,
            )?;
            enumerate_between(t_anchor, &full, *k, f)?
        }
        ConstructionSpec::D { l, s, t_anchor } => {
            check_family_budget(gauss_binom(n as i64, *l as i64, f.q())?, budget)?;
            let mut out = Vec::new();
            for cand in shared_slice(n, *l, f, budget)?.iter() {
                if dim_meet(cand, t_anchor, f)? >= *s {
                    out.push(cand.clone());
                }
            }
            out
        }
        ConstructionSpec::E1 { .. } | ConstructionSpec::E2 { .. } | ConstructionSpec::E3 { .. } => {
            enumerate_layer(spec, f, budget)?
        }
        ConstructionSpec::H2 { k, x, m, c } => {
            let mut set = BTreeSet::new();
            for layer in h2_layers(*k, x, m, c) {
                set.extend(enumerate_layer(&layer, f, budget)?);
            }
            set.into_iter().collect()
        }
        ConstructionSpec::MFull { k, m } => {
            check_family_budget(gauss_binom(m.dim() as i64, *k as i64, f.q())?, budget)?;
            enumerate_between(&Subspace::zero(n, f), m, *k, f)?
        }
    };
    Family::from_members(n, dim, f.q(), members)
}

fn h2_layers(k: usize, x: &Subspace, m: &Subspace, c: &Subspace) -> [ConstructionSpec; 3] {
    [
        ConstructionSpec::E1 { k, x: x.clone(), m: m.clone() },
        ConstructionSpec::E2 { k, x: x.clone(), m: m.clone(), c: c.clone() },
        ConstructionSpec::E3 { k, x: x.clone(), m: m.clone(), c: c.clone() },
    ]
}

fn enumerate_layer(
    spec: &ConstructionSpec,
    f: &FieldDesc,
    budget: u64,
) -> Result<Vec<Subspace>, FamiliesError> {
    let n = spec.ambient();
    let full = Subspace::full(n, f);
    let candidates = match spec {
        ConstructionSpec::E1 { k, x, .. } | ConstructionSpec::E2 { k, x, .. } => {
            check_family_budget(count_containing(x.dim() as i64, *k as i64, n as i64, f.q())?, budget)?;
            enumerate_between(x, &full, *k, f)?
        }
        ConstructionSpec::E3 { k, c, .. } => {
            check_family_budget(gauss_binom(c.dim() as i64, *k as i64, f.q())?, budget)?;
            enumerate_between(&Subspace::zero(n, f), c, *k, f)?
        }
        _ => unreachable!("enumerate_layer only handles E1/E2/E3"),
    };
    let mut out = Vec::new();
    for s in candidates {
        if spec.accepts(&s, f)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// The closed form paired with a construction, if the anchors admit one.
pub fn paired_formula(
    spec: &ConstructionSpec,
    f: &FieldDesc,
) -> Result<(String, CountValue), FamiliesError> {
    let q = f.q();
    let n = spec.ambient() as i64;
    match spec {
        ConstructionSpec::A { k, x, m } => {
            let (t, l) = (x.dim() as i64, m.dim() as i64 - 1);
            let p = FormulaParams { q, n, t, k: *k as i64, l, ..Default::default() };
            Ok((format!("g1(k={k},l={l},n={n},t={t})"), formula_eval(FormulaId::G1, &p)?))
        }
        ConstructionSpec::B { l, x, .. } => {
            let t = x.dim() as i64;
            let p = FormulaParams { q, n, t, l: *l as i64, ..Default::default() };
            Ok((format!("g2(l={l},n={n},t={t})"), formula_eval(FormulaId::G2, &p)?))
        }
        ConstructionSpec::C { k, t_anchor } => {
            let z = t_anchor.dim() as i64;
            let v = count_containing(z, *k as i64, n, q)?;
            Ok((format!("[{} ch {}]", n - z, *k as i64 - z), v))
        }
        ConstructionSpec::D { l, s, t_anchor } => {
            // Partition by intersection dimension with the anchor.
            let z = t_anchor.dim() as i64;
            let mut total = BigUint::from(0u32);
            for h in *s as i64..=(*l as i64).min(z) {
                total += nprime(0, 0, *l as i64, h, n - z, z, q)?;
            }
            Ok((format!("sum_h>={s} N'(0,0;{l},h;{n},{})", n - z), total))
        }
        ConstructionSpec::E1 { k, x, m } => {
            let (d, l) = (x.dim() as i64, m.dim() as i64 - 1);
            let p = FormulaParams { q, n, t: d, k: *k as i64, l, ..Default::default() };
            Ok((format!("g1(k={k},l={l},n={n},t={d})"), formula_eval(FormulaId::G1, &p)?))
        }
        ConstructionSpec::H2 { k, x, c, .. } => {
            let d = x.dim() as i64;
            let p = FormulaParams { q, n, k: *k as i64, d, ..Default::default() };
            if c.dim() == *k + 1 {
                Ok((format!("h1(d={d},k={k},n={n})"), formula_eval(FormulaId::H1, &p)?))
            } else if c.dim() as i64 == n {
                Ok((format!("h2(d={d},k={k},n={n})"), formula_eval(FormulaId::H2, &p)?))
            } else {
                Err(FamiliesError::NoFormula(spec.kind()))
            }
        }
        ConstructionSpec::MFull { k, m } => {
            let v = gauss_binom(m.dim() as i64, *k as i64, q)?;
            Ok((format!("[{} ch {k}]", m.dim()), v))
        }
        ConstructionSpec::E2 { .. } | ConstructionSpec::E3 { .. } => {
            Err(FamiliesError::NoFormula(spec.kind()))
        }
    }
}

/// Enumerates the construction and compares against its paired formula.
pub fn size_check(
    spec: &ConstructionSpec,
    f: &FieldDesc,
    budget: u64,
) -> Result<SizeCheck, FamiliesError> {
    let (formula_label, formula) = paired_formula(spec, f)?;
    let family = construct(spec, f, budget)?;
    let enumerated = BigUint::from(family.len());
    let matches = enumerated == formula;
    Ok(SizeCheck { kind: spec.kind(), enumerated, formula, formula_label, matches })
}

/// Minimal subspace containing all members.
pub fn hull(family: &Family, f: &FieldDesc) -> Result<Subspace, FamiliesError> {
    family.hull(f)
}

/// Serializes a family in the lattice cache format, with a plain-text
/// descriptor in a `.spec` sidecar next to it.
pub fn family_save(
    family: &Family,
    descriptor: &str,
    path: &Path,
) -> Result<(), FamiliesError> {
    let slice = crate::lattice::LatticeSlice::from_parts(
        family.q(),
        family.ambient(),
        family.member_dim(),
        family.members().to_vec(),
    );
    crate::lattice::cache_save(&slice, path)?;
    let sidecar = path.with_extension("spec");
    std::fs::write(&sidecar, format!("{descriptor}
"))
        .map_err(crate::lattice::LatticeError::from)?;
    Ok(())
}

/// Loads a family saved by [`family_save`], returning the members and the
/// sidecar descriptor.
pub fn family_load(path: &Path) -> Result<(Family, String), FamiliesError> {
    let slice = crate::lattice::cache_load(path)?;
    let descriptor = std::fs::read_to_string(path.with_extension("spec"))
        .map_err(crate::lattice::LatticeError::from)?
        .trim_end()
        .to_string();
    let family = Family::from_members(
        slice.ambient(),
        slice.dim(),
        slice.q(),
        slice.into_elements(),
    )?;
    Ok((family, descriptor))
}

/// Anchor dimensions for [`coordinate_spec`].
#[derive(Clone, Copy, Debug, Default)]
pub struct AnchorDims {
    pub x: Option<usize>,
    pub m: Option<usize>,
    pub c: Option<usize>,
    pub t: Option<usize>,
    pub s: Option<usize>,
}

/// Builds a construction over the nested coordinate anchors
/// `span(e_1..e_d)`. The size formulas are anchor-independent, so this is
/// the default chain for CLI runs and sweeps.
pub fn coordinate_spec(
    kind: ConstructionKind,
    member_dim: usize,
    n: usize,
    dims: &AnchorDims,
    f: &FieldDesc,
) -> Result<ConstructionSpec, FamiliesError> {
    let need = |v: Option<usize>, what: &str| {
        v.ok_or_else(|| {
            FamiliesError::AnchorViolation(format!("{kind} requires an anchor dimension {what}"))
        })
    };
    let coord = |d: usize| -> Result<Subspace, FamiliesError> {
        if d > n {
            return Err(FamiliesError::AnchorViolation(format!(
                "anchor dimension {d} exceeds ambient {n}"
            )));
        }
        Ok(Subspace::coordinate(n, d, f))
    };
    let spec = match kind {
        ConstructionKind::A => ConstructionSpec::A {
            k: member_dim,
            x: coord(need(dims.x, "x")?)?,
            m: coord(need(dims.m, "m")?)?,
        },
        ConstructionKind::B => ConstructionSpec::B {
            l: member_dim,
            x: coord(need(dims.x, "x")?)?,
            m: coord(need(dims.m, "m")?)?,
        },
        ConstructionKind::C => {
            ConstructionSpec::C { k: member_dim, t_anchor: coord(need(dims.t, "t")?)? }
        }
        ConstructionKind::D => ConstructionSpec::D {
            l: member_dim,
            s: need(dims.s, "s")?,
            t_anchor: coord(need(dims.t, "t")?)?,
        },
        ConstructionKind::E1 => ConstructionSpec::E1 {
            k: member_dim,
            x: coord(need(dims.x, "x")?)?,
            m: coord(need(dims.m, "m")?)?,
        },
        ConstructionKind::E2 => ConstructionSpec::E2 {
            k: member_dim,
            x: coord(need(dims.x, "x")?)?,
            m: coord(need(dims.m, "m")?)?,
            c: coord(need(dims.c, "c")?)?,
        },
        ConstructionKind::E3 => ConstructionSpec::E3 {
            k: member_dim,
            x: coord(need(dims.x, "x")?)?,
            m: coord(need(dims.m, "m")?)?,
            c: coord(need(dims.c, "c")?)?,
        },
        ConstructionKind::H2 => ConstructionSpec::H2 {
            k: member_dim,
            x: coord(need(dims.x, "x")?)?,
            m: coord(need(dims.m, "m")?)?,
            c: coord(need(dims.c, "c")?)?,
        },
        ConstructionKind::MFull => {
            ConstructionSpec::MFull { k: member_dim, m: coord(need(dims.m, "m")?)? }
        }
    };
    Ok(spec)
}
