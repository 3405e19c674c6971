//! The two double covers of Sym(m), realised inside a Clifford algebra with
//! exact coefficients.
//!
//! Transposition `(a b)` lifts to `(e_a - e_b) / sqrt(2)`. With `e_i^2 = -1`
//! ([`CoverKind::Tilde`]) a lifted transposition squares to `-1`; with
//! `e_i^2 = +1` ([`CoverKind::Hat`]) it squares to `+1`. The projection back
//! to Sym(m) is read off from conjugating the basis vectors.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equivariant::{EquivariantError, FiniteGroup, GroupFile};
use crate::perm::{self, Perm, PermError};

/// Dense blade storage is used up to this many generators.
pub const MAX_GENERATORS: usize = 12;
/// Largest palette for which [`enumerate_cover`] builds the whole group.
pub const COVER_GUARD: usize = 6;

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("mixing {left} and {right} covers")]
    KindMismatch { left: CoverKind, right: CoverKind },
    #[error("algebra dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("generator index {i} outside 1..{m}")]
    IndexRange { i: usize, m: usize },
    #[error("{0} generators is outside 1..={MAX_GENERATORS}")]
    DimensionGuard(usize),
    #[error("palette size {0} is outside the cover enumeration range 2..={COVER_GUARD}")]
    CoverGuard(usize),
    #[error("cover closure has {got} elements, expected {expected}")]
    CoverSize { expected: usize, got: usize },
    #[error("coefficients with incompatible radicals cannot be added")]
    MixedRadical,
    #[error("element is not a unit of the pin group")]
    NotUnit,
    #[error("conjugating e_{0} does not give a signed basis vector")]
    NotInGroup(usize),
    #[error("order exceeds {0}")]
    OrderSentinel(usize),
    #[error("unknown cover kind {0:?} (expected tilde or hat)")]
    UnknownKind(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] EquivariantError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverKind {
    /// `e_i^2 = -1`: r disjoint transpositions lift to order 4 iff r = 1, 2 mod 4.
    Tilde,
    /// `e_i^2 = +1`: r disjoint transpositions lift to order 4 iff r = 2, 3 mod 4.
    Hat,
}

impl CoverKind {
    pub const ALL: [CoverKind; 2] = [CoverKind::Tilde, CoverKind::Hat];

    pub fn generator_square(self) -> i64 {
        match self {
            CoverKind::Tilde => -1,
            CoverKind::Hat => 1,
        }
    }

    /// The order a lift of `r >= 1` disjoint transpositions must have.
    pub fn expected_order(self, r: usize) -> usize {
        let order_four = match self {
            CoverKind::Tilde => matches!(r % 4, 1 | 2),
            CoverKind::Hat => matches!(r % 4, 2 | 3),
        };
        if order_four {
            4
        } else {
            2
        }
    }
}

impl fmt::Display for CoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverKind::Tilde => "tilde",
            CoverKind::Hat => "hat",
        })
    }
}

impl FromStr for CoverKind {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tilde" => Ok(CoverKind::Tilde),
            "hat" => Ok(CoverKind::Hat),
            _ => Err(SpinError::UnknownKind(s.to_string())),
        }
    }
}

/// The real number `num * sqrt(2)^(-k)` in normal form: zero is `(0, 0)`,
/// and `num` is odd whenever `k >= 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordScalar {
    num: i64,
    k: u32,
}

impl CliffordScalar {
    pub const ZERO: CliffordScalar = CliffordScalar { num: 0, k: 0 };
    pub const ONE: CliffordScalar = CliffordScalar { num: 1, k: 0 };

    pub fn new(num: i64, k: u32) -> Self {
        let (mut num, mut k) = (num, k);
        if num == 0 {
            return Self::ZERO;
        }
        while k >= 2 && num % 2 == 0 {
            num /= 2;
            k -= 2;
        }
        CliffordScalar { num, k }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn root_two_power(self) -> u32 {
        self.k
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `None` when the sum would need an odd power of `sqrt(2)` in the numerator.
    pub fn checked_add(self, other: Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other);
        }
        if other.is_zero() {
            return Some(self);
        }
        let (lo, hi) = if self.k <= other.k {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.k - lo.k;
        if diff % 2 == 1 {
            return None;
        }
        Some(Self::new(lo.num * (1i64 << (diff / 2)) + hi.num, hi.k))
    }

    pub fn to_f64(self) -> f64 {
        let half_powers = 0.5f64.powi((self.k / 2) as i32);
        let odd = if self.k % 2 == 1 {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0
        };
        self.num as f64 * half_powers * odd
    }
}

impl Mul for CliffordScalar {
    type Output = CliffordScalar;

    fn mul(self, other: Self) -> Self {
        Self::new(self.num * other.num, self.k + other.k)
    }
}

impl Neg for CliffordScalar {
    type Output = CliffordScalar;

    fn neg(self) -> Self {
        CliffordScalar {
            num: -self.num,
            k: self.k,
        }
    }
}

impl fmt::Display for CliffordScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/sqrt2^{}", self.num, self.k)
        }
    }
}

/// A basis blade `e_{i1} ... e_{ik}` with `i1 < ... < ik`, as a bitmask with
/// bit `i - 1` standing for `e_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(pub u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_indices(indices: &[usize]) -> Blade {
        Blade(indices.iter().fold(0, |acc, &i| acc | 1 << (i - 1)))
    }

    pub fn vector(i: usize) -> Blade {
        Blade(1 << (i - 1))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }
}

/// Product of two blades: the symmetric-difference blade and a sign from
/// reordering the generators and squaring the shared ones.
pub fn blade_mul(a: Blade, b: Blade, kind: CoverKind) -> (Blade, i64) {
    let mut swaps = 0;
    let mut rest = a.0 >> 1;
    while rest != 0 {
        swaps += (rest & b.0).count_ones();
        rest >>= 1;
    }
    let mut sign = if swaps % 2 == 0 { 1 } else { -1 };
    if kind == CoverKind::Tilde && (a.0 & b.0).count_ones() % 2 == 1 {
        sign = -sign;
    }
    (Blade(a.0 ^ b.0), sign)
}

/// An element of the Clifford algebra on `m` generators, used for members of
/// the double cover. Coefficients are stored densely over all `2^m` blades.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PinElement {
    kind: CoverKind,
    m: usize,
    coeffs: Vec<CliffordScalar>,
}

fn check_dimension(m: usize) -> Result<(), SpinError> {
    if m == 0 || m > MAX_GENERATORS {
        return Err(SpinError::DimensionGuard(m));
    }
    Ok(())
}

impl PinElement {
    fn zero(m: usize, kind: CoverKind) -> Self {
        PinElement {
            kind,
            m,
            coeffs: vec![CliffordScalar::ZERO; 1 << m],
        }
    }

    /// `+1` or `-1` (any nonzero `sign` is reduced to its sign).
    pub fn unit(m: usize, kind: CoverKind, sign: i64) -> Result<Self, SpinError> {
        check_dimension(m)?;
        let mut x = Self::zero(m, kind);
        x.coeffs[0] = CliffordScalar::new(sign.signum(), 0);
        Ok(x)
    }

    /// `(e_a - e_b) / sqrt(2)`.
    pub fn root(a: usize, b: usize, m: usize, kind: CoverKind) -> Result<Self, SpinError> {
        check_dimension(m)?;
        for i in [a, b] {
            if i == 0 || i > m {
                return Err(SpinError::IndexRange { i, m });
            }
        }
        if a == b {
            return Err(SpinError::IndexRange { i: a, m });
        }
        let mut x = Self::zero(m, kind);
        x.coeffs[Blade::vector(a).0 as usize] = CliffordScalar::new(1, 1);
        x.coeffs[Blade::vector(b).0 as usize] = CliffordScalar::new(-1, 1);
        Ok(x)
    }

    /// The Coxeter generator lifting `(i i+1)`.
    pub fn gen(i: usize, m: usize, kind: CoverKind) -> Result<Self, SpinError> {
        if i == 0 || i >= m {
            return Err(SpinError::IndexRange { i, m });
        }
        Self::root(i, i + 1, m, kind)
    }

    fn basis_vector(i: usize, m: usize, kind: CoverKind) -> Self {
        let mut x = Self::zero(m, kind);
        x.coeffs[Blade::vector(i).0 as usize] = CliffordScalar::ONE;
        x
    }

    pub fn kind(&self) -> CoverKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coefficient(&self, blade: Blade) -> CliffordScalar {
        self.coeffs[blade.0 as usize]
    }

    /// Nonzero `(blade, coefficient)` pairs in blade order.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, CliffordScalar)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(b, &c)| (Blade(b as u32), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_parity_homogeneous(&self) -> bool {
        let mut parities = self.terms().map(|(b, _)| b.grade() % 2);
        match parities.next() {
            None => false,
            Some(p) => parities.all(|q| q == p),
        }
    }

    /// `Some(s)` when this element is the scalar `s = +1` or `-1`.
    pub fn scalar_sign(&self) -> Option<i64> {
        let mut terms = self.terms();
        match (terms.next(), terms.next()) {
            (Some((Blade::SCALAR, c)), None) if c.k == 0 && c.num.abs() == 1 => Some(c.num),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.scalar_sign() == Some(1)
    }

    fn compatible(&self, other: &Self) -> Result<(), SpinError> {
        if self.kind != other.kind {
            return Err(SpinError::KindMismatch {
                left: self.kind,
                right: other.kind,
            });
        }
        if self.m != other.m {
            return Err(SpinError::DimensionMismatch {
                left: self.m,
                right: other.m,
            });
        }
        Ok(())
    }

    pub fn pin_mul(&self, other: &Self) -> Result<Self, SpinError> {
        self.compatible(other)?;
        let mut out = Self::zero(self.m, self.kind);
        let rhs: Vec<(Blade, CliffordScalar)> = other.terms().collect();
        for (a, ca) in self.terms() {
            for &(b, cb) in &rhs {
                let (blade, sign) = blade_mul(a, b, self.kind);
                let mut term = ca.mul(cb);
                if sign < 0 {
                    term = term.neg();
                }
                let slot = &mut out.coeffs[blade.0 as usize];
                *slot = slot.checked_add(term).ok_or(SpinError::MixedRadical)?;
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        PinElement {
            kind: self.kind,
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Reverses the order of generators in every blade.
    pub fn reversal(&self) -> Self {
        let mut out = self.clone();
        for (b, c) in out.coeffs.iter_mut().enumerate() {
            let g = (b as u32).count_ones();
            if (g * g.saturating_sub(1) / 2) % 2 == 1 {
                *c = c.neg();
            }
        }
        out
    }

    /// `x^-1 = s * reversal(x)` where `x * reversal(x) = s = +-1`.
    pub fn inverse(&self) -> Result<Self, SpinError> {
        let rev = self.reversal();
        let norm = self.pin_mul(&rev)?;
        match norm.scalar_sign() {
            Some(1) => Ok(rev),
            Some(_) => Ok(rev.neg()),
            None => Err(SpinError::NotUnit),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.inverse().is_ok()
    }

    /// The permutation `i -> j` with `x^-1 e_i x = +-e_j`; a homomorphism
    /// for the right-action composition of [`Perm`].
    pub fn project(&self) -> Result<Perm, SpinError> {
        let inv = self.inverse()?;
        let mut images = Vec::with_capacity(self.m);
        for i in 1..=self.m {
            let e = Self::basis_vector(i, self.m, self.kind);
            let conj = inv.pin_mul(&e)?.pin_mul(self)?;
            let mut terms = conj.terms();
            let j = match (terms.next(), terms.next()) {
                (Some((blade, c)), None)
                    if blade.grade() == 1 && c.k == 0 && c.num.abs() == 1 =>
                {
                    blade.0.trailing_zeros() as usize
                }
                _ => return Err(SpinError::NotInGroup(i)),
            };
            images.push(j);
        }
        Ok(Perm::from_indices(images)?)
    }

    /// Least `t >= 1` with `x^t = 1`.
    pub fn order(&self) -> Result<usize, SpinError> {
        let limit = (1..=self.m).fold(2usize, |acc, i| acc.saturating_mul(i));
        let mut power = self.clone();
        for t in 1..=limit {
            if power.is_one() {
                return Ok(t);
            }
            power = power.pin_mul(self)?;
        }
        Err(SpinError::OrderSentinel(limit))
    }

    /// Nonzero terms as `(blade indices, numerator, power of 1/sqrt2)`.
    pub fn encode(&self) -> Vec<(Vec<usize>, i64, u32)> {
        self.terms()
            .map(|(b, c)| (b.indices(), c.num, c.k))
            .collect()
    }
}

impl fmt::Debug for PinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(b, c)| {
                if b == Blade::SCALAR {
                    c.to_string()
                } else {
                    let name: Vec<String> = b.indices().iter().map(|i| format!("e{i}")).collect();
                    format!("{c}*{}", name.join(""))
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// One of the two lifts of `p`: the product of lifted transpositions in the
/// canonical decomposition of [`Perm::transpositions`]. The other lift is its
/// negation.
pub fn lift(p: &Perm, kind: CoverKind) -> Result<PinElement, SpinError> {
    let m = p.degree();
    let mut x = PinElement::unit(m, kind, 1)?;
    for (a, b) in p.transpositions() {
        x = x.pin_mul(&PinElement::root(a, b, m, kind)?)?;
    }
    Ok(x)
}

/// The enumerated double cover: a [`FiniteGroup`] with `phi` the projection,
/// and the Clifford element behind each label.
#[derive(Clone, Debug)]
pub struct Cover {
    pub kind: CoverKind,
    pub m: usize,
    pub group: Arc<FiniteGroup>,
    pub elements: Vec<PinElement>,
}

impl Cover {
    pub fn label_of(&self, x: &PinElement) -> Option<usize> {
        self.elements.iter().position(|e| e == x)
    }

    /// Label of `-1`.
    pub fn central_involution(&self) -> usize {
        self.elements
            .iter()
            .position(|e| e.scalar_sign() == Some(-1))
            .expect("-1 is a generator of the closure")
    }

    pub fn export(&self) -> CoverFile {
        CoverFile {
            kind: self.kind,
            m: self.m,
            group: self.group.to_file(),
            elements: self
                .elements
                .iter()
                .enumerate()
                .map(|(label, e)| CoverElementFile {
                    label,
                    terms: e
                        .encode()
                        .into_iter()
                        .map(|(blade, num, k)| CoverTermFile { blade, num, k })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverTermFile {
    pub blade: Vec<usize>,
    pub num: i64,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverElementFile {
    pub label: usize,
    pub terms: Vec<CoverTermFile>,
}

/// Cover export: the group table plus the Clifford coefficients of each label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFile {
    pub kind: CoverKind,
    pub m: usize,
    pub group: GroupFile,
    pub elements: Vec<CoverElementFile>,
}

/// Breadth-first closure of `{-1, gen(1), .., gen(m-1)}` under right
/// multiplication, starting from `1` (label 0).
pub fn cover_elements(m: usize, kind: CoverKind) -> Result<Vec<PinElement>, SpinError> {
    if !(2..=COVER_GUARD).contains(&m) {
        return Err(SpinError::CoverGuard(m));
    }
    let mut gens = vec![PinElement::unit(m, kind, -1)?];
    for i in 1..m {
        gens.push(PinElement::gen(i, m, kind)?);
    }
    let mut elements = vec![PinElement::unit(m, kind, 1)?];
    let mut seen: HashMap<PinElement, usize> = HashMap::new();
    seen.insert(elements[0].clone(), 0);
    let mut next = 0;
    while next < elements.len() {
        let x = elements[next].clone();
        for g in &gens {
            let y = x.pin_mul(g)?;
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        next += 1;
    }
    let expected = 2 * (1..=m).product::<usize>();
    if elements.len() != expected {
        return Err(SpinError::CoverSize {
            expected,
            got: elements.len(),
        });
    }
    Ok(elements)
}

/// The double cover of Sym(m) as a [`FiniteGroup`] of order `2 m!`.
///
/// Table entries are found by projecting the product to Sym(m), which leaves
/// two candidate lifts, and comparing one coefficient of the product.
pub fn enumerate_cover(m: usize, kind: CoverKind) -> Result<Cover, SpinError> {
    let elements = cover_elements(m, kind)?;
    let size = elements.len();
    let phi: Vec<Perm> = elements
        .iter()
        .map(PinElement::project)
        .collect::<Result<_, _>>()?;
    let mut lifts: HashMap<&Perm, Vec<usize>> = HashMap::new();
    for (label, p) in phi.iter().enumerate() {
        lifts.entry(p).or_default().push(label);
    }
    let terms: Vec<Vec<(Blade, CliffordScalar)>> =
        elements.iter().map(|e| e.terms().collect()).collect();
    let pivot: Vec<(Blade, CliffordScalar)> = terms.iter().map(|t| t[0]).collect();

    let mut mul = Vec::with_capacity(size);
    for a in 0..size {
        let mut row = Vec::with_capacity(size);
        for b in 0..size {
            let p = phi[a].compose(&phi[b])?;
            let candidates = &lifts[&p];
            let first = candidates[0];
            let (target, expected) = pivot[first];
            let mut coeff = CliffordScalar::ZERO;
            for &(blade, ca) in &terms[a] {
                let partner = Blade(blade.0 ^ target.0);
                let cb = elements[b].coefficient(partner);
                if cb.is_zero() {
                    continue;
                }
                let (_, sign) = blade_mul(blade, partner, kind);
                let mut term = ca.mul(cb);
                if sign < 0 {
                    term = term.neg();
                }
                coeff = coeff.checked_add(term).ok_or(SpinError::MixedRadical)?;
            }
            let label = if coeff == expected {
                first
            } else if coeff == expected.neg() && candidates.len() == 2 {
                candidates[1]
            } else {
                return Err(SpinError::NotUnit);
            };
            row.push(label);
        }
        mul.push(row);
    }
    let group = FiniteGroup::from_raw(mul, phi)?;
    Ok(Cover {
        kind,
        m,
        group: Arc::new(group),
        elements,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableMode {
    /// Every element of the right cycle type in the enumerated cover.
    Exhaustive,
    /// The two lifts of `(1 2)(3 4)..(2r-1 2r)` only.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderRuleRow {
    /// Number of disjoint transpositions.
    pub r: usize,
    pub expected_order: usize,
    /// Distinct orders observed among checked lifts.
    pub observed_orders: Vec<usize>,
    pub lifts_checked: usize,
    /// Both lifts of every checked permutation share an order.
    pub lifts_agree: bool,
}

impl OrderRuleRow {
    pub fn matches(&self) -> bool {
        self.lifts_agree && self.observed_orders == [self.expected_order]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderRuleTable {
    pub m: usize,
    pub kind: CoverKind,
    pub mode: TableMode,
    pub rows: Vec<OrderRuleRow>,
}

impl OrderRuleTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(OrderRuleRow::matches)
    }

    pub fn order_for(&self, r: usize) -> Option<usize> {
        self.rows
            .iter()
            .find(|row| row.r == r)
            .and_then(|row| (row.observed_orders.len() == 1).then(|| row.observed_orders[0]))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} cover of Sym({}), {:?} mode\n", self.kind, self.m, self.mode);
        out.push_str("   r  expected  observed  lifts  verdict\n");
        for row in &self.rows {
            let observed: Vec<String> = row.observed_orders.iter().map(usize::to_string).collect();
            out.push_str(&format!(
                "{:>4}  {:>8}  {:>8}  {:>5}  {}\n",
                row.r,
                row.expected_order,
                observed.join(","),
                row.lifts_checked,
                if row.matches() { "ok" } else { "MISMATCH" }
            ));
        }
        out
    }
}

fn canonical_involution(m: usize, r: usize) -> Result<Perm, PermError> {
    let cycles: Vec<[usize; 2]> = (0..r).map(|t| [2 * t + 1, 2 * t + 2]).collect();
    let refs: Vec<&[usize]> = cycles.iter().map(|c| &c[..]).collect();
    Perm::from_cycles(m, &refs)
}

/// Orders of lifted products of `r` disjoint transpositions for
/// `1 <= r <= m/2`, compared with the congruence rule of `kind`.
pub fn order_rule_table(m: usize, kind: CoverKind, mode: TableMode) -> Result<OrderRuleTable, SpinError> {
    let mut rows = Vec::new();
    match mode {
        TableMode::Exhaustive => {
            let cover = enumerate_cover(m, kind)?;
            for r in 1..=m / 2 {
                let mut cycle_type = vec![2; r];
                cycle_type.extend(std::iter::repeat_n(1, m - 2 * r));
                cycle_type.sort_unstable();
                let mut by_perm: HashMap<&Perm, Vec<usize>> = HashMap::new();
                for (label, x) in cover.elements.iter().enumerate() {
                    let p = cover.group.phi(label);
                    if p.cycle_type() == cycle_type {
                        by_perm.entry(p).or_default().push(x.order()?);
                    }
                }
                rows.push(summarise(r, kind, by_perm.into_values()));
            }
        }
        TableMode::Direct => {
            check_dimension(m)?;
            for r in 1..=m / 2 {
                let x = lift(&canonical_involution(m, r)?, kind)?;
                let orders = vec![x.order()?, x.neg().order()?];
                rows.push(summarise(r, kind, std::iter::once(orders)));
            }
        }
    }
    Ok(OrderRuleTable { m, kind, mode, rows })
}

fn summarise(r: usize, kind: CoverKind, groups: impl Iterator<Item = Vec<usize>>) -> OrderRuleRow {
    let mut observed = Vec::new();
    let mut lifts_checked = 0;
    let mut lifts_agree = true;
    for orders in groups {
        lifts_checked += orders.len();
        lifts_agree &= orders.len() == 2 && orders[0] == orders[1];
        observed.extend(orders);
    }
    observed.sort_unstable();
    observed.dedup();
    OrderRuleRow {
        r,
        expected_order: kind.expected_order(r),
        observed_orders: observed,
        lifts_checked,
        lifts_agree,
    }
}

/// Exhaustive mode where the cover can be enumerated, direct otherwise.
pub fn default_table_mode(m: usize) -> TableMode {
    if m <= COVER_GUARD {
        TableMode::Exhaustive
    } else {
        TableMode::Direct
    }
}

/// An order-2 element of the cover whose image moves every colour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockingInvolution {
    /// Label in the enumerated cover; absent in direct mode.
    pub label: Option<usize>,
    pub perm: Perm,
    pub cycle_type: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupplementCheck {
    pub m: usize,
    pub kind: CoverKind,
    pub mode: TableMode,
    pub holds: bool,
    pub involutions_checked: usize,
    pub blocking: Option<BlockingInvolution>,
}

/// Whether every order-2 element of the enumerated cover projects to the
/// identity or to a permutation with a fixed point.
pub fn supplement_condition(m: usize, kind: CoverKind) -> Result<SupplementCheck, SpinError> {
    let cover = enumerate_cover(m, kind)?;
    let group = &cover.group;
    let mut checked = 0;
    let mut blocking = None;
    for g in (0..group.size()).filter(|&g| group.is_involution(g)) {
        checked += 1;
        let p = group.phi(g);
        if !p.is_identity() && p.fixed_points().is_empty() && blocking.is_none() {
            blocking = Some(BlockingInvolution {
                label: Some(g),
                perm: p.clone(),
                cycle_type: p.cycle_type(),
            });
        }
    }
    Ok(SupplementCheck {
        m,
        kind,
        mode: TableMode::Exhaustive,
        holds: blocking.is_none(),
        involutions_checked: checked,
        blocking,
    })
}

/// The same condition decided from one representative: an order-2 element
/// projects to the identity or an involution, the fixed-point-free
/// involutions of Sym(m) form one conjugacy class (m even), and conjugate
/// lifts have equal orders. So the condition fails exactly when a lift of
/// `(1 2)(3 4)..(m-1 m)` has order 2.
pub fn supplement_condition_direct(m: usize, kind: CoverKind) -> Result<SupplementCheck, SpinError> {
    check_dimension(m)?;
    let mut check = SupplementCheck {
        m,
        kind,
        mode: TableMode::Direct,
        holds: true,
        involutions_checked: 0,
        blocking: None,
    };
    if m.is_multiple_of(2) {
        let p = canonical_involution(m, m / 2)?;
        let x = lift(&p, kind)?;
        check.involutions_checked = 1;
        if x.order()? == 2 {
            check.holds = false;
            check.blocking = Some(BlockingInvolution {
                label: None,
                cycle_type: p.cycle_type(),
                perm: p,
            });
        }
    }
    Ok(check)
}

/// Exhaustive when the cover can be enumerated, direct otherwise.
pub fn supplement_condition_auto(m: usize, kind: CoverKind) -> Result<SupplementCheck, SpinError> {
    if (2..=COVER_GUARD).contains(&m) {
        supplement_condition(m, kind)
    } else {
        supplement_condition_direct(m, kind)
    }
}

/// Fixed-point-free involutions of `{1..m}` in lexicographic order.
pub fn fpf_involution_count(m: usize) -> Result<usize, SpinError> {
    Ok(perm::fixed_point_free_involutions(m)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::enumerate_sym;

    fn s(num: i64, k: u32) -> CliffordScalar {
        CliffordScalar::new(num, k)
    }

    #[test]
    fn scalar_normal_form() {
        assert_eq!(s(1, 1).mul(s(1, 1)), s(1, 2));
        assert_eq!(s(1, 2).to_f64(), 0.5);
        assert_eq!(s(2, 2), s(1, 0));
        assert_eq!(s(4, 3), s(2, 1));
        assert_eq!(s(2, 1).root_two_power(), 1);
        assert_eq!(s(0, 5), CliffordScalar::ZERO);
        assert_eq!(s(1, 2).checked_add(s(1, 2)), Some(s(1, 0)));
        assert_eq!(s(1, 1).checked_add(s(1, 0)), None);
        assert_eq!(s(1, 1).checked_add(s(-1, 1)), Some(CliffordScalar::ZERO));
    }

    #[test]
    fn blade_mul_examples() {
        let e1 = Blade::vector(1);
        let e2 = Blade::vector(2);
        assert_eq!(blade_mul(e1, e1, CoverKind::Hat), (Blade::SCALAR, 1));
        assert_eq!(blade_mul(e1, e1, CoverKind::Tilde), (Blade::SCALAR, -1));
        for kind in CoverKind::ALL {
            let (b12, s12) = blade_mul(e1, e2, kind);
            let (b21, s21) = blade_mul(e2, e1, kind);
            assert_eq!(b12, Blade::from_indices(&[1, 2]));
            assert_eq!(b12, b21);
            assert_eq!(s12, -s21);
        }
        // e1 e2 e1 e2 = -e1 e1 e2 e2
        let e12 = Blade::from_indices(&[1, 2]);
        assert_eq!(blade_mul(e12, e12, CoverKind::Hat), (Blade::SCALAR, -1));
        assert_eq!(blade_mul(e12, e12, CoverKind::Tilde), (Blade::SCALAR, -1));
    }

    #[test]
    fn generator_squares() {
        let one = |k| PinElement::unit(3, k, 1).unwrap();
        let minus = |k| PinElement::unit(3, k, -1).unwrap();
        for kind in CoverKind::ALL {
            let g = PinElement::gen(1, 3, kind).unwrap();
            assert_eq!(g.terms().count(), 2);
            assert_eq!(g.pin_mul(&one(kind)).unwrap(), g);
        }
        let t = PinElement::gen(1, 3, CoverKind::Tilde).unwrap();
        assert_eq!(t.pin_mul(&t).unwrap(), minus(CoverKind::Tilde));
        let h = PinElement::gen(1, 3, CoverKind::Hat).unwrap();
        assert_eq!(h.pin_mul(&h).unwrap(), one(CoverKind::Hat));
        assert!(PinElement::gen(0, 3, CoverKind::Hat).is_err());
        assert!(PinElement::gen(3, 3, CoverKind::Hat).is_err());
    }

    #[test]
    fn disjoint_generators_anticommute() {
        for kind in CoverKind::ALL {
            let a = PinElement::gen(1, 4, kind).unwrap();
            let b = PinElement::gen(3, 4, kind).unwrap();
            assert_eq!(a.pin_mul(&b).unwrap(), b.pin_mul(&a).unwrap().neg());
        }
        let a = PinElement::gen(1, 4, CoverKind::Hat).unwrap();
        let b = PinElement::gen(1, 4, CoverKind::Tilde).unwrap();
        assert!(matches!(a.pin_mul(&b), Err(SpinError::KindMismatch { .. })));
    }

    #[test]
    fn projection_examples() {
        for kind in CoverKind::ALL {
            assert!(PinElement::unit(4, kind, -1).unwrap().project().unwrap().is_identity());
            for i in 1..4 {
                let p = PinElement::gen(i, 4, kind).unwrap().project().unwrap();
                assert_eq!(p, Perm::transposition(4, i, i + 1).unwrap());
            }
            for p in enumerate_sym(4).unwrap() {
                let x = lift(&p, kind).unwrap();
                assert!(x.is_parity_homogeneous());
                assert_eq!(x.project().unwrap(), p);
            }
        }
        let mut not_unit = PinElement::gen(1, 3, CoverKind::Hat).unwrap();
        not_unit.coeffs[0] = CliffordScalar::ONE;
        assert!(not_unit.project().is_err());
    }

    #[test]
    fn projection_is_a_homomorphism_on_s3_cover() {
        for kind in CoverKind::ALL {
            let els = cover_elements(3, kind).unwrap();
            for a in &els {
                for b in &els {
                    let ab = a.pin_mul(b).unwrap();
                    assert_eq!(
                        ab.project().unwrap(),
                        a.project().unwrap().compose(&b.project().unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn lift_examples() {
        for kind in CoverKind::ALL {
            assert!(lift(&Perm::identity(3), kind).unwrap().is_one());
        }
        let t = Perm::transposition(3, 1, 2).unwrap();
        assert_eq!(lift(&t, CoverKind::Tilde).unwrap().order().unwrap(), 4);
        assert_eq!(lift(&t, CoverKind::Hat).unwrap().order().unwrap(), 2);
    }

    #[test]
    fn lift_projects_back() {
        for kind in CoverKind::ALL {
            for p in perm::enumerate_sym(4).unwrap() {
                assert_eq!(lift(&p, kind).unwrap().project().unwrap(), p, "{kind} {p}");
            }
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(PinElement::unit(3, CoverKind::Hat, -1).unwrap().order().unwrap(), 2);
        let dbl = Perm::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(lift(&dbl, CoverKind::Tilde).unwrap().order().unwrap(), 4);
        let quad = canonical_involution(8, 4).unwrap();
        for kind in CoverKind::ALL {
            assert_eq!(lift(&quad, kind).unwrap().order().unwrap(), 2);
        }
    }

    #[test]
    fn m2_tilde_is_cyclic_of_order_4() {
        let cover = enumerate_cover(2, CoverKind::Tilde).unwrap();
        assert_eq!(cover.group.size(), 4);
        let orders: Vec<usize> = (0..4).map(|g| cover.group.element_order(g)).collect();
        assert!(orders.contains(&4));
        let hat = enumerate_cover(2, CoverKind::Hat).unwrap();
        assert!((0..4).all(|g| hat.group.element_order(g) <= 2));
    }

    #[test]
    fn cover_sizes_and_axioms() {
        for kind in CoverKind::ALL {
            let c3 = enumerate_cover(3, kind).unwrap();
            assert_eq!(c3.group.size(), 12);
            assert!(c3.group.check_axioms());
            let c4 = enumerate_cover(4, kind).unwrap();
            assert_eq!(c4.group.size(), 48);
            assert!(c4.group.check_axioms());
        }
        assert!(matches!(enumerate_cover(7, CoverKind::Hat), Err(SpinError::CoverGuard(7))));
        assert!(matches!(enumerate_cover(1, CoverKind::Hat), Err(SpinError::CoverGuard(1))));
    }

    #[test]
    fn fast_table_matches_full_products() {
        for m in 2..=4 {
            for kind in CoverKind::ALL {
                let cover = enumerate_cover(m, kind).unwrap();
                let index: HashMap<&PinElement, usize> =
                    cover.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
                for (a, x) in cover.elements.iter().enumerate() {
                    for (b, y) in cover.elements.iter().enumerate() {
                        let xy = x.pin_mul(y).unwrap();
                        assert_eq!(index[&xy], cover.group.mul(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_is_plus_minus_one() {
        for m in 2..=4 {
            for kind in CoverKind::ALL {
                let cover = enumerate_cover(m, kind).unwrap();
                let kernel = cover.group.kernel();
                assert_eq!(kernel, vec![0, cover.central_involution()]);
                assert!(cover.elements[kernel[1]].scalar_sign() == Some(-1));
            }
        }
    }

    #[test]
    fn lifts_come_in_negated_pairs() {
        for kind in CoverKind::ALL {
            let cover = enumerate_cover(4, kind).unwrap();
            for x in &cover.elements {
                assert!(cover.label_of(&x.neg()).is_some());
                let sq = x.pin_mul(x).unwrap();
                let order = x.order().unwrap();
                if sq.scalar_sign().is_some() {
                    assert!([1, 2, 4].contains(&order));
                }
            }
        }
    }

    #[test]
    fn order_rule_small_tables() {
        let t4 = order_rule_table(4, CoverKind::Tilde, TableMode::Exhaustive).unwrap();
        assert_eq!(t4.order_for(1), Some(4));
        assert_eq!(t4.order_for(2), Some(4));
        assert!(t4.passed());
        let direct = order_rule_table(8, CoverKind::Hat, TableMode::Direct).unwrap();
        assert_eq!(direct.order_for(4), Some(2));
        assert!(direct.passed());
        assert!(direct.to_text().contains("ok"));
    }

    #[test]
    fn supplement_small_cases() {
        assert!(supplement_condition(2, CoverKind::Tilde).unwrap().holds);
        let hat = supplement_condition(2, CoverKind::Hat).unwrap();
        assert!(!hat.holds);
        assert_eq!(hat.blocking.unwrap().cycle_type, vec![2]);
        for kind in CoverKind::ALL {
            assert!(supplement_condition(4, kind).unwrap().holds);
            assert!(supplement_condition(3, kind).unwrap().holds);
            for m in 2..=4 {
                assert_eq!(
                    supplement_condition(m, kind).unwrap().holds,
                    supplement_condition_direct(m, kind).unwrap().holds
                );
            }
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("tilde".parse::<CoverKind>().unwrap(), CoverKind::Tilde);
        assert_eq!("HAT".parse::<CoverKind>().unwrap(), CoverKind::Hat);
        assert!("spin".parse::<CoverKind>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn scalar() -> impl Strategy<Value = CliffordScalar> {
            (-50i64..50, 0u32..6).prop_map(|(n, k)| CliffordScalar::new(n, k))
        }

        proptest! {
            #[test]
            fn scalar_mul_associative(a in scalar(), b in scalar(), c in scalar()) {
                prop_assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
                let v = a.mul(b).to_f64();
                prop_assert!((v - a.to_f64() * b.to_f64()).abs() < 1e-9);
            }

            #[test]
            fn normal_form_is_unique(n in -40i64..40, k in 0u32..5, shift in 0u32..3) {
                let scaled = CliffordScalar::new(n * (1 << shift), k + 2 * shift);
                prop_assert_eq!(scaled, CliffordScalar::new(n, k));
            }

            #[test]
            fn pin_mul_associative_in_s4_cover(
                a in 0usize..48, b in 0usize..48, c in 0usize..48, tilde in any::<bool>()
            ) {
                let kind = if tilde { CoverKind::Tilde } else { CoverKind::Hat };
                let els = cover_elements(4, kind).unwrap();
                let lhs = els[a].pin_mul(&els[b]).unwrap().pin_mul(&els[c]).unwrap();
                let rhs = els[a].pin_mul(&els[b].pin_mul(&els[c]).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
