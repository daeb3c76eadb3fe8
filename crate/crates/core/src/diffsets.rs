//! Bidifference sets: difference, divisible, relative and partial difference
//! sets over finite abelian groups.
//!
//! A subset `S` of a group `G` is a bidifference set relative to `A` (with
//! `e ∈ A`) when every non-identity element of `A` is a difference
//! `g_s - g_t` of elements of `S` in exactly `λ` ways and every element
//! outside `A` in exactly `μ` ways. All constructions here are re-verified by
//! exhaustive difference counting before they are returned.

use std::fmt;

use crate::algebra::{is_prime_power, AbelianGroup, Element, FiniteField};
use crate::error::{Error, Result};

/// Largest group searched exhaustively.
pub const SEARCH_MAX_ORDER: usize = 40;
/// Largest number of candidate subsets a single search may enumerate.
pub const SEARCH_MAX_SUBSETS: u128 = 50_000_000;
/// Largest `q` accepted by the Singer and picket-fence constructions.
pub const CONSTRUCTION_MAX_Q: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Difference,
    Divisible,
    Relative,
    Partial,
    General,
}

impl Kind {
    /// Whether a set of this kind also counts as a set of kind `wanted`.
    pub fn satisfies(self, wanted: Kind) -> bool {
        match wanted {
            Kind::General => true,
            Kind::Divisible => matches!(self, Kind::Difference | Kind::Divisible | Kind::Relative),
            _ => self == wanted,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(match text {
            "difference" => Kind::Difference,
            "divisible" => Kind::Divisible,
            "relative" => Kind::Relative,
            "partial" => Kind::Partial,
            "general" | "bidifference" | "general-bidifference" => Kind::General,
            other => {
                return Err(Error::Parse(format!(
                    "unknown difference-set kind '{other}'"
                )))
            }
        })
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Difference => "difference",
            Kind::Divisible => "divisible",
            Kind::Relative => "relative",
            Kind::Partial => "partial",
            Kind::General => "general-bidifference",
        })
    }
}

/// `(n, m, l, λ, μ)`. `λ` is `None` when `A = {e}` and `μ` is `None` when
/// `A = G`; in those cases the count is vacuous.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub lambda: Option<usize>,
    pub mu: Option<usize>,
}

impl Params {
    /// `m(m-1) = λ(l-1) + μ(n-l)`, reading vacuous counts as zero.
    pub fn counting_identity_holds(&self) -> bool {
        let lam = self.lambda.unwrap_or(0);
        let mu = self.mu.unwrap_or(0);
        self.m * (self.m - 1) == lam * (self.l - 1) + mu * (self.n - self.l)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        write!(
            f,
            "({},{},{},{},{})",
            self.n,
            self.m,
            self.l,
            show(self.lambda),
            show(self.mu)
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BidifferenceSet {
    pub group: AbelianGroup,
    /// The set `S`, sorted.
    pub set: Vec<Element>,
    /// The relative set `A`, sorted, containing the identity.
    pub relative: Vec<Element>,
    pub params: Params,
    pub kind: Kind,
}

fn normalize(group: &AbelianGroup, elems: &[Element], what: &str) -> Result<Vec<Element>> {
    let mut v = elems.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != elems.len() {
        return Err(Error::InvalidParameter(format!(
            "{what} contains repeated elements"
        )));
    }
    if let Some(&bad) = v.iter().find(|&&a| !group.contains(a)) {
        return Err(Error::InvalidParameter(format!(
            "{what} element {bad} is not in {group}"
        )));
    }
    Ok(v)
}

/// Number of ordered pairs `(s, t)` in `S` with `s - t = g`, for every `g`.
fn difference_histogram(group: &AbelianGroup, set: &[Element]) -> Vec<usize> {
    let mut hist = vec![0; group.order()];
    for &s in set {
        for &t in set {
            if s != t {
                hist[group.sub(s, t)] += 1;
            }
        }
    }
    hist
}

/// Checks constancy of `hist` on `A \ {e}` and on `G \ A`.
fn counts_on(
    group: &AbelianGroup,
    hist: &[usize],
    in_relative: &[bool],
) -> Result<(Option<usize>, Option<usize>)> {
    let mut lambda: Option<usize> = None;
    let mut mu: Option<usize> = None;
    for g in group.elements().skip(1) {
        let slot = if in_relative[g] { &mut lambda } else { &mut mu };
        match *slot {
            None => *slot = Some(hist[g]),
            Some(expected) if expected != hist[g] => {
                return Err(Error::NonConstantDifferences {
                    element: group.format_element(g),
                    count: hist[g],
                    expected,
                })
            }
            Some(_) => {}
        }
    }
    Ok((lambda, mu))
}

fn classify_kind(
    group: &AbelianGroup,
    set: &[Element],
    relative: &[Element],
    lambda: Option<usize>,
    mu: Option<usize>,
) -> Kind {
    if mu.is_none() || (lambda.is_some() && lambda == mu) {
        return Kind::Difference;
    }
    if group.is_subgroup(relative) {
        return if lambda.unwrap_or(0) == 0 {
            Kind::Relative
        } else {
            Kind::Divisible
        };
    }
    let mut s_e: Vec<Element> = set.to_vec();
    s_e.push(group.identity());
    s_e.sort_unstable();
    s_e.dedup();
    if s_e == relative {
        Kind::Partial
    } else {
        Kind::General
    }
}

/// Exhaustively counts differences of `S` and checks them against `A`.
pub fn verify_bidifference(
    group: &AbelianGroup,
    set: &[Element],
    relative: &[Element],
) -> Result<BidifferenceSet> {
    let set = normalize(group, set, "S")?;
    let relative = normalize(group, relative, "A")?;
    if set.is_empty() {
        return Err(Error::InvalidParameter("S must be non-empty".into()));
    }
    if relative.first() != Some(&group.identity()) {
        return Err(Error::InvalidParameter(
            "A must contain the identity".into(),
        ));
    }
    let mut in_relative = vec![false; group.order()];
    for &a in &relative {
        in_relative[a] = true;
    }
    let hist = difference_histogram(group, &set);
    let (lambda, mu) = counts_on(group, &hist, &in_relative)?;
    let params = Params {
        n: group.order(),
        m: set.len(),
        l: relative.len(),
        lambda,
        mu,
    };
    let kind = classify_kind(group, &set, &relative, lambda, mu);
    Ok(BidifferenceSet {
        group: group.clone(),
        set,
        relative,
        params,
        kind,
    })
}

/// `{1, ..., n-1}` in `Z_n`, an `(n, n-1, n-2)`-difference set.
pub fn simplectic(n: usize) -> Result<BidifferenceSet> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "simplectic sets need n >= 2, got {n}"
        )));
    }
    let group = AbelianGroup::cyclic(n)?;
    let set: Vec<Element> = (1..n).collect();
    let all: Vec<Element> = group.elements().collect();
    let d = verify_bidifference(&group, &set, &all)?;
    expect_params(&d, n - 1, Some(n - 2), None)?;
    Ok(d)
}

fn expect_params(
    d: &BidifferenceSet,
    m: usize,
    lambda: Option<usize>,
    mu: Option<usize>,
) -> Result<()> {
    let p = &d.params;
    let ok = p.m == m && (lambda.is_none() || p.lambda == lambda) && (mu.is_none() || p.mu == mu);
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "constructed set has parameters {p}"
        )))
    }
}

fn construction_field(q: u64, extension: u32) -> Result<(u32, FiniteField)> {
    if q > CONSTRUCTION_MAX_Q {
        return Err(Error::Guard(format!("q={q} exceeds {CONSTRUCTION_MAX_Q}")));
    }
    let (p, a) = if q < 2 { None } else { is_prime_power(q)? }
        .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
    Ok((a, FiniteField::new(p, a * extension)?))
}

/// Falls back to exhaustive search when a trace construction fails to verify.
fn fallback(
    q: u64,
    group: &AbelianGroup,
    m: usize,
    kind: Kind,
    relative: Option<&[Element]>,
    cause: Error,
) -> Result<BidifferenceSet> {
    if q > 5 {
        return Err(cause);
    }
    search(group, m, kind, relative)?
        .into_iter()
        .next()
        .ok_or(cause)
}

/// Singer `(q²+q+1, q+1, 1)`-difference set in `Z_{q²+q+1}`:
/// `{ i : Tr(g^i) = 0 }` for a primitive `g` of `GF(q³)`, read modulo `q²+q+1`.
pub fn singer(q: u64) -> Result<BidifferenceSet> {
    let (sub, field) = construction_field(q, 3)?;
    let n = (q * q + q + 1) as usize;
    let group = AbelianGroup::cyclic(n)?;
    let g = field.primitive_element();
    let mut set = Vec::new();
    let mut x = 1;
    for i in 0..field.order() as usize - 1 {
        if field.trace(x, sub)? == 0 {
            set.push(i % n);
        }
        x = field.mul(x, g);
    }
    set.sort_unstable();
    set.dedup();
    let all: Vec<Element> = group.elements().collect();
    let m = q as usize + 1;
    let built = verify_bidifference(&group, &set, &all)
        .and_then(|d| expect_params(&d, m, Some(1), None).map(|_| d));
    built.or_else(|e| fallback(q, &group, m, Kind::Difference, None, e))
}

/// Picket-fence `(q²-1, q, q-1, 1)`-relative difference set in `Z_{q²-1}`:
/// `{ i : Tr(g^i) = 1 }` for a primitive `g` of `GF(q²)`, relative to the
/// subgroup `(q+1) Z_{q²-1}`.
pub fn picket_fence(q: u64) -> Result<BidifferenceSet> {
    let (sub, field) = construction_field(q, 2)?;
    let n = (q * q - 1) as usize;
    let group = AbelianGroup::cyclic(n)?;
    let g = field.primitive_element();
    let mut set = Vec::new();
    let mut x = 1;
    for i in 0..n {
        if field.trace(x, sub)? == 1 {
            set.push(i);
        }
        x = field.mul(x, g);
    }
    let step = q as usize + 1;
    let relative: Vec<Element> = (0..n).step_by(step).collect();
    let m = q as usize;
    let built = verify_bidifference(&group, &set, &relative).and_then(|d| {
        let lambda_ok = d.params.lambda.unwrap_or(0) == 0;
        if d.kind == Kind::Relative && lambda_ok && d.params.l == m - 1 {
            expect_params(&d, m, None, Some(1)).map(|_| d)
        } else {
            Err(Error::Verification(format!(
                "picket fence has parameters {}",
                d.params
            )))
        }
    });
    built.or_else(|e| fallback(q, &group, m, Kind::Relative, Some(&relative), e))
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Enumerates `m`-subsets of `G` in lexicographic order and returns every
/// verified set of the requested kind.
///
/// `relative` pins `A`. Without it, difference sets are tested against
/// `A = G`, partial difference sets against `A = S ∪ {e}`, and the remaining
/// kinds against every subgroup of `G` (one hit per matching subgroup).
pub fn search(
    group: &AbelianGroup,
    m: usize,
    kind: Kind,
    relative: Option<&[Element]>,
) -> Result<Vec<BidifferenceSet>> {
    let n = group.order();
    if n > SEARCH_MAX_ORDER {
        return Err(Error::Guard(format!(
            "exhaustive search limited to |G| <= {SEARCH_MAX_ORDER}, got {n}"
        )));
    }
    if m == 0 || m > n {
        return Err(Error::InvalidParameter(format!(
            "subset size {m} outside 1..={n}"
        )));
    }
    let count = binomial(n, m);
    if count > SEARCH_MAX_SUBSETS {
        return Err(Error::Guard(format!(
            "C({n},{m}) = {count} subsets exceeds {SEARCH_MAX_SUBSETS}"
        )));
    }
    let candidates: Option<Vec<Vec<Element>>> = match (relative, kind) {
        (Some(a), _) => Some(vec![normalize(group, a, "A")?]),
        (None, Kind::Difference) => Some(vec![group.elements().collect()]),
        (None, Kind::Partial) => None,
        (None, _) => Some(group.subgroups()),
    };
    let masks: Option<Vec<Vec<bool>>> = candidates.as_ref().map(|cands| {
        cands
            .iter()
            .map(|a| {
                let mut mask = vec![false; n];
                a.iter().for_each(|&x| mask[x] = true);
                mask
            })
            .collect()
    });

    let mut hits = Vec::new();
    let mut subset: Vec<Element> = (0..m).collect();
    loop {
        let hist = difference_histogram(group, &subset);
        match (&candidates, &masks) {
            (Some(cands), Some(masks)) => {
                for (a, mask) in cands.iter().zip(masks) {
                    if let Ok((lambda, mu)) = counts_on(group, &hist, mask) {
                        push_hit(&mut hits, group, &subset, a, lambda, mu, kind);
                    }
                }
            }
            _ => {
                let mut a = subset.clone();
                if a[0] != 0 {
                    a.insert(0, 0);
                }
                let mut mask = vec![false; n];
                a.iter().for_each(|&x| mask[x] = true);
                if let Ok((lambda, mu)) = counts_on(group, &hist, &mask) {
                    push_hit(&mut hits, group, &subset, &a, lambda, mu, kind);
                }
            }
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    Ok(hits)
}

fn push_hit(
    hits: &mut Vec<BidifferenceSet>,
    group: &AbelianGroup,
    subset: &[Element],
    relative: &[Element],
    lambda: Option<usize>,
    mu: Option<usize>,
    wanted: Kind,
) {
    let found = classify_kind(group, subset, relative, lambda, mu);
    if found.satisfies(wanted) {
        hits.push(BidifferenceSet {
            group: group.clone(),
            set: subset.to_vec(),
            relative: relative.to_vec(),
            params: Params {
                n: group.order(),
                m: subset.len(),
                l: relative.len(),
                lambda,
                mu,
            },
            kind: found,
        });
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Angle set of the harmonic frame generated by a divisible difference set:
/// `(1/m) sqrt(m - λ + l(λ - μ))` (realised when `A ≠ G`) and
/// `(1/m) sqrt(m - λ)` (realised when `A ≠ {e}`), sorted, equal values merged.
pub fn predicted_harmonic_angles(params: &Params) -> Result<Vec<f64>> {
    let Params {
        n,
        m,
        l,
        lambda,
        mu,
    } = *params;
    if m == 0 || l == 0 || l > n {
        return Err(Error::InvalidParameter(format!(
            "inconsistent parameters {params}"
        )));
    }
    let mf = m as f64;
    let radical = |value: i64| -> Result<f64> {
        if value < 0 {
            Err(Error::InvalidParameter(format!(
                "negative radicand {value} for parameters {params}"
            )))
        } else {
            Ok((value as f64).sqrt() / mf)
        }
    };
    let mut out = Vec::new();
    if l < n {
        let mu = mu.ok_or_else(|| Error::InvalidParameter("μ missing with A ≠ G".into()))? as i64;
        let lam = lambda.map_or(mu, |x| x as i64);
        out.push(radical(m as i64 - lam + l as i64 * (lam - mu))?);
    }
    if l > 1 {
        let lam =
            lambda.ok_or_else(|| Error::InvalidParameter("λ missing with A ≠ {e}".into()))? as i64;
        out.push(radical(m as i64 - lam)?);
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    Ok(out)
}
