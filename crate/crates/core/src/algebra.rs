//! Finite abelian groups with their characters, and finite fields `GF(p^a)`.
//!
//! Group elements are encoded as mixed-radix indices: the tuple
//! `(b_1, ..., b_k)` maps to `((b_1 n_2 + b_2) n_3 + ...) + b_k`, so index
//! order equals lexicographic tuple order. Field elements are encoded as
//! `Σ c_i p^i` over their polynomial coefficients.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::Complex;

/// Largest group order accepted.
pub const MAX_GROUP_ORDER: usize = 1024;
/// Largest field order accepted.
pub const MAX_FIELD_ORDER: u64 = 4096;

/// Index of a group element.
pub type Element = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<usize>,
    order: usize,
}

impl AbelianGroup {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "group needs at least one factor".into(),
            ));
        }
        if let Some(f) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::InvalidParameter(format!(
                "invariant factor {f} is below 2"
            )));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &f| {
                acc.checked_mul(f).filter(|&o| o <= MAX_GROUP_ORDER)
            })
            .ok_or_else(|| Error::Guard(format!("group order exceeds {MAX_GROUP_ORDER}")))?;
        Ok(Self { factors, order })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Parses the `n1xn2x...` notation, e.g. `8` or `2x4`.
    pub fn parse(spec: &str) -> Result<Self> {
        let factors = spec
            .split('x')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad group factor '{part}' in '{spec}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_cyclic_spec(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn identity(&self) -> Element {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    pub fn contains(&self, a: Element) -> bool {
        a < self.order
    }

    pub fn to_tuple(&self, mut a: Element) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = a % f;
            a /= f;
        }
        out
    }

    pub fn from_tuple(&self, tuple: &[usize]) -> Result<Element> {
        if tuple.len() != self.factors.len() {
            return Err(Error::InvalidParameter(format!(
                "element {tuple:?} has {} coordinates, group has {}",
                tuple.len(),
                self.factors.len()
            )));
        }
        let mut idx = 0;
        for (&b, &f) in tuple.iter().zip(&self.factors) {
            if b >= f {
                return Err(Error::InvalidParameter(format!(
                    "coordinate {b} out of range for Z_{f}"
                )));
            }
            idx = idx * f + b;
        }
        Ok(idx)
    }

    fn combine(&self, a: Element, b: Element, sign: bool) -> Element {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for &f in self.factors.iter().rev() {
            let (x, y) = (a % f, b % f);
            let z = if sign { (x + y) % f } else { (x + f - y) % f };
            out += z * place;
            place *= f;
            a /= f;
            b /= f;
        }
        out
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        self.combine(a, b, true)
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.combine(a, b, false)
    }

    pub fn neg(&self, a: Element) -> Element {
        self.sub(0, a)
    }

    /// Character value `exp(2πi Σ a_i b_i / n_i)`.
    pub fn character(&self, a: Element, b: Element) -> Result<Complex> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::InvalidParameter(format!(
                "element out of range for group of order {}",
                self.order
            )));
        }
        Ok(self.character_unchecked(a, b))
    }

    pub(crate) fn character_unchecked(&self, a: Element, b: Element) -> Complex {
        let (ta, tb) = (self.to_tuple(a), self.to_tuple(b));
        // accumulate the phase as an exact fraction of a full turn per factor
        let turns: f64 = ta
            .iter()
            .zip(&tb)
            .zip(&self.factors)
            .map(|((&x, &y), &f)| ((x * y) % f) as f64 / f as f64)
            .sum();
        Complex::from_polar(1.0, 2.0 * PI * turns)
    }

    /// True if `set` is closed under addition and contains the identity.
    pub fn is_subgroup(&self, set: &[Element]) -> bool {
        let members: BTreeSet<Element> = set.iter().copied().collect();
        members.contains(&0)
            && members
                .iter()
                .all(|&a| members.iter().all(|&b| members.contains(&self.add(a, b))))
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn span(&self, gens: &[Element]) -> Vec<Element> {
        let mut members: BTreeSet<Element> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        members.into_iter().collect()
    }

    /// All subgroups, each sorted, ordered by (size, elements).
    pub fn subgroups(&self) -> Vec<Vec<Element>> {
        let mut found: BTreeSet<Vec<Element>> = BTreeSet::new();
        let mut layer: Vec<Vec<Element>> = vec![vec![0]];
        found.insert(vec![0]);
        // every subgroup is generated by at most `factors.len()` elements
        for _ in 0..self.factors.len() {
            let mut next = Vec::new();
            for h in &layer {
                for g in self.elements() {
                    if h.binary_search(&g).is_ok() {
                        continue;
                    }
                    let mut gens = h.clone();
                    gens.push(g);
                    let sub = self.span(&gens);
                    if found.insert(sub.clone()) {
                        next.push(sub);
                    }
                }
            }
            layer = next;
        }
        let mut out: Vec<Vec<Element>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Formats an element as `3` (cyclic) or `(1,2)`.
    pub fn format_element(&self, a: Element) -> String {
        if self.is_cyclic_spec() {
            a.to_string()
        } else {
            let t: Vec<String> = self.to_tuple(a).iter().map(ToString::to_string).collect();
            format!("({})", t.join(","))
        }
    }

    pub fn format_set(&self, set: &[Element]) -> String {
        let parts: Vec<String> = set.iter().map(|&a| self.format_element(a)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Parses a comma-separated element list: `1,2,4` for cyclic groups,
    /// `(0,1),(1,1)` for products.
    pub fn parse_set(&self, text: &str) -> Result<Vec<Element>> {
        let text = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut out = Vec::new();
        if text.trim().is_empty() {
            return Ok(out);
        }
        if text.contains('(') {
            let mut rest = text;
            while let Some(start) = rest.find('(') {
                let end = rest[start..]
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed tuple in '{text}'")))?
                    + start;
                let tuple = rest[start + 1..end]
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad coordinate '{s}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(self.from_tuple(&tuple)?);
                rest = &rest[end + 1..];
            }
        } else {
            for part in text.split(',') {
                let v: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element '{part}'")))?;
                let elem = if self.is_cyclic_spec() {
                    if v >= self.order {
                        return Err(Error::InvalidParameter(format!(
                            "element {v} not in Z_{}",
                            self.order
                        )));
                    }
                    v
                } else {
                    return Err(Error::Parse(format!(
                        "elements of {} must be written as tuples",
                        self
                    )));
                };
                out.push(elem);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("x"))
    }
}

/// Returns `(p, a)` with `n = p^a` for prime `p`, or `None`.
pub fn is_prime_power(n: u64) -> Result<Option<(u64, u32)>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "prime-power test needs n >= 2, got {n}"
        )));
    }
    let p = smallest_prime_factor(n);
    let mut rest = n;
    let mut a = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        a += 1;
    }
    Ok((rest == 1).then_some((p, a)))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_prime_factor(n);
        out.push(p);
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    out
}

/// Field element, encoded as `Σ c_i p^i`.
pub type FieldElement = u32;

/// `GF(p^a)` realised as `GF(p)[x]` modulo the smallest monic irreducible
/// polynomial of degree `a`, with log/exp tables for multiplication.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    degree: u32,
    order: u32,
    /// Coefficients `c_0..c_a` of the monic modulus.
    modulus: Vec<u32>,
    primitive: FieldElement,
    exp: Vec<FieldElement>,
    log: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl FiniteField {
    pub fn new(p: u64, degree: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!(
                "characteristic {p} is not prime"
            )));
        }
        if degree == 0 {
            return Err(Error::InvalidParameter(
                "extension degree must be at least 1".into(),
            ));
        }
        let order = p
            .checked_pow(degree)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| {
                Error::Guard(format!(
                    "field order {p}^{degree} exceeds {MAX_FIELD_ORDER}"
                ))
            })?;
        let p = p as u32;
        let modulus = smallest_irreducible(p, degree);
        let mut field = Self {
            p,
            degree,
            order: order as u32,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.primitive = field.find_primitive();
        field.build_tables();
        Ok(field)
    }

    /// `GF(q)` for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, a) = is_prime_power(q)?
            .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        Self::new(p, a)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients `c_0, ..., c_a` of the modulus (monic, so `c_a = 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> std::ops::Range<FieldElement> {
        0..self.order
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        let mut x = x;
        (0..self.degree)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.degree as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter(format!(
                "{coeffs:?} is not an element of GF({})",
                self.order
            )));
        }
        Ok(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.digitwise(x, y, |a, b| (a + b) % self.p)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.digitwise(x, y, |a, b| (a + self.p - b) % self.p)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        self.sub(0, x)
    }

    fn digitwise(
        &self,
        mut x: FieldElement,
        mut y: FieldElement,
        f: impl Fn(u32, u32) -> u32,
    ) -> FieldElement {
        if self.degree == 1 {
            return f(x, y);
        }
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.degree {
            out += f(x % self.p, y % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x == 0 || y == 0 {
            return 0;
        }
        let n = self.order - 1;
        self.exp[((self.log[x as usize] + self.log[y as usize]) % n) as usize]
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[x as usize] as u64 * (e % n)) % n) as usize]
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x == 0 {
            return Err(Error::InvalidParameter(
                "zero has no multiplicative inverse".into(),
            ));
        }
        let n = self.order - 1;
        Ok(self.exp[((n - self.log[x as usize]) % n) as usize])
    }

    /// Smallest element (in encoding order) of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> FieldElement {
        self.primitive
    }

    pub fn multiplicative_order(&self, x: FieldElement) -> Result<u64> {
        if x == 0 {
            return Err(Error::InvalidParameter(
                "zero has no multiplicative order".into(),
            ));
        }
        let n = (self.order - 1) as u64;
        let mut ord = n;
        for r in distinct_prime_factors(n) {
            while ord.is_multiple_of(r) && self.pow(x, ord / r) == 1 {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// Whether `x` lies in the subfield `GF(p^sub_degree)`.
    pub fn in_subfield(&self, x: FieldElement, sub_degree: u32) -> bool {
        self.pow(x, (self.p as u64).pow(sub_degree)) == x
    }

    /// Relative trace down to the subfield `GF(p^sub_degree)`:
    /// `Tr(x) = Σ_{i < b} x^{q^i}` with `q = p^sub_degree`, `b = degree / sub_degree`.
    ///
    /// The result is an element of this field lying in the subfield; `0` and
    /// `1` coincide with the subfield's own `0` and `1`.
    pub fn trace(&self, x: FieldElement, sub_degree: u32) -> Result<FieldElement> {
        if sub_degree == 0 || !self.degree.is_multiple_of(sub_degree) {
            return Err(Error::InvalidParameter(format!(
                "GF({}^{}) is not a subfield of GF({})",
                self.p, sub_degree, self.order
            )));
        }
        let q = (self.p as u64).pow(sub_degree);
        let mut acc = 0;
        let mut term = x;
        for _ in 0..self.degree / sub_degree {
            acc = self.add(acc, term);
            term = self.pow(term, q);
        }
        Ok(acc)
    }

    fn poly_mul_mod(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let d = self.degree as usize;
        let mut prod = vec![0u32; 2 * d];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        reduce(&mut prod, &self.modulus, self.p);
        prod.truncate(d);
        prod.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn find_primitive(&self) -> FieldElement {
        let n = (self.order - 1) as u64;
        if n == 1 {
            return 1;
        }
        let factors = distinct_prime_factors(n);
        let slow_pow = |x: FieldElement, mut e: u64| {
            let mut base = x;
            let mut acc = 1;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.poly_mul_mod(acc, base);
                }
                base = self.poly_mul_mod(base, base);
                e >>= 1;
            }
            acc
        };
        (1..self.order)
            .find(|&x| factors.iter().all(|&r| slow_pow(x, n / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&mut self) {
        let n = (self.order - 1) as usize;
        self.exp = Vec::with_capacity(n);
        self.log = vec![0; self.order as usize];
        let mut x = 1;
        for i in 0..n {
            self.exp.push(x);
            self.log[x as usize] = i as u32;
            x = self.poly_mul_mod(x, self.primitive);
        }
    }
}

/// Reduces `poly` (ascending coefficients) modulo a monic `modulus` in place.
fn reduce(poly: &mut [u32], modulus: &[u32], p: u32) {
    let d = modulus.len() - 1;
    for top in (d..poly.len()).rev() {
        let c = poly[top];
        if c == 0 {
            continue;
        }
        for (k, &mk) in modulus.iter().enumerate() {
            let idx = top - d + k;
            poly[idx] = (poly[idx] + p * p - (c * mk) % p) % p;
        }
    }
}

fn decode_monic(code: u64, degree: u32, p: u32) -> Vec<u32> {
    let mut c = code;
    let mut out: Vec<u32> = (0..degree)
        .map(|_| {
            let v = (c % p as u64) as u32;
            c /= p as u64;
            v
        })
        .collect();
    out.push(1);
    out
}

/// Exhaustive trial division by every monic polynomial of degree `1..=d/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let d = (poly.len() - 1) as u32;
    for fd in 1..=d / 2 {
        for code in 0..(p as u64).pow(fd) {
            let factor = decode_monic(code, fd, p);
            let mut rem = poly.to_vec();
            reduce(&mut rem, &factor, p);
            if rem[..fd as usize].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of the given degree, ordered by the
/// encoding `Σ c_i p^i` of its lower coefficients.
fn smallest_irreducible(p: u32, degree: u32) -> Vec<u32> {
    (0..(p as u64).pow(degree))
        .map(|code| decode_monic(code, degree, p))
        .find(|poly| is_irreducible(poly, p))
        .expect("irreducible polynomials exist in every degree")
}
