//! Monomials, monomial ideals and the ideal operations needed downstream:
//! sums, products, powers, intersections, colons, localization, saturation
//! and symbolic powers of squarefree ideals.
//!
//! Every ideal is stored through its minimal generating set, kept sorted by
//! degree and then lexicographically descending, so that printed and
//! serialized output is stable.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A monomial `x^a` given by its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn unit(ambient: usize) -> Self {
        Monomial(vec![0; ambient])
    }

    /// The variable `x_i`, 1-based.
    pub fn var(ambient: usize, i: usize) -> Self {
        let mut e = vec![0; ambient];
        e[i - 1] = 1;
        Monomial(e)
    }

    /// Squarefree product of the given 1-based variables.
    pub fn squarefree(ambient: usize, vars: &[usize]) -> Self {
        let mut e = vec![0; ambient];
        for &i in vars {
            e[i - 1] = 1;
        }
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn into_exponents(self) -> Vec<u32> {
        self.0
    }

    pub fn ambient(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&a| a <= 1)
    }

    /// 1-based indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, _)| i + 1).collect()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a.checked_add(*b).expect("exponent overflow")).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a.checked_mul(k).expect("exponent overflow")).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// `self / gcd(self, other)`: the generator of `(self) : other`.
    pub fn colon(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a.saturating_sub(*b)).collect())
    }

    fn check_ambient(&self, ambient: usize) -> Result<()> {
        if self.ambient() != ambient {
            return Err(Error::DimensionMismatch { expected: ambient, got: self.ambient() });
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if a > 1 {
                write!(f, "^{a}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Monomial {
    /// Parses the `x1^a1*x2^a2` text form; the ambient dimension must be
    /// supplied because omitted variables are implicit.
    pub fn parse(text: &str, ambient: usize) -> Result<Monomial> {
        let text = text.trim();
        let mut e = vec![0u32; ambient];
        if text == "1" {
            return Ok(Monomial(e));
        }
        for factor in text.split('*') {
            let factor = factor.trim();
            let body = factor
                .strip_prefix('x')
                .ok_or_else(|| Error::parse(1, format!("bad factor `{factor}`")))?;
            let (var, exp) = match body.split_once('^') {
                Some((v, a)) => (v, a.parse::<u32>().map_err(|_| Error::parse(1, format!("bad exponent in `{factor}`")))?),
                None => (body, 1),
            };
            let i: usize = var.parse().map_err(|_| Error::parse(1, format!("bad variable in `{factor}`")))?;
            if i == 0 || i > ambient {
                return Err(Error::parse(1, format!("variable x{i} outside x1..x{ambient}")));
            }
            e[i - 1] += exp;
        }
        Ok(Monomial(e))
    }
}

/// A monomial prime `(x_i : i in C)`, identified with its support `C`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimeSupport(Vec<usize>);

impl PrimeSupport {
    pub fn new(mut support: Vec<usize>) -> Self {
        support.sort_unstable();
        support.dedup();
        PrimeSupport(support)
    }

    pub fn full(ambient: usize) -> Self {
        PrimeSupport((1..=ambient).collect())
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn union(&self, other: &PrimeSupport) -> PrimeSupport {
        PrimeSupport::new(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &PrimeSupport) -> bool {
        self.0.iter().all(|i| other.contains(*i))
    }

    pub fn ideal(&self, ambient: usize) -> MonomialIdeal {
        MonomialIdeal::from_minimal(ambient, self.0.iter().map(|&i| Monomial::var(ambient, i)).collect())
    }

    pub fn shifted(&self, offset: usize) -> PrimeSupport {
        PrimeSupport(self.0.iter().map(|i| i + offset).collect())
    }
}

impl Ord for PrimeSupport {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PrimeSupport {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PrimeSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A monomial ideal of `K[x_1..x_r]` held as its minimal generators.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IdealRepr", into = "IdealRepr")]
pub struct MonomialIdeal {
    ambient: usize,
    gens: Vec<Monomial>,
}

#[derive(Serialize, Deserialize)]
struct IdealRepr {
    ambient: usize,
    generators: Vec<Vec<u32>>,
}

impl TryFrom<IdealRepr> for MonomialIdeal {
    type Error = Error;
    fn try_from(repr: IdealRepr) -> Result<Self> {
        MonomialIdeal::new(repr.ambient, repr.generators.into_iter().map(Monomial).collect())
    }
}

impl From<MonomialIdeal> for IdealRepr {
    fn from(ideal: MonomialIdeal) -> Self {
        IdealRepr { ambient: ideal.ambient, generators: ideal.gens.into_iter().map(|m| m.0).collect() }
    }
}

/// Reduces a generator list to its divisibility-minimal antichain.
pub fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort();
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        // divisors have strictly smaller degree once duplicates are gone
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept
}

impl MonomialIdeal {
    pub fn new(ambient: usize, gens: Vec<Monomial>) -> Result<Self> {
        for g in &gens {
            g.check_ambient(ambient)?;
        }
        Ok(MonomialIdeal { ambient, gens: minimalize(gens) })
    }

    /// Skips validation; `gens` must already have length-`ambient` entries.
    pub(crate) fn from_minimal(ambient: usize, gens: Vec<Monomial>) -> Self {
        debug_assert!(gens.iter().all(|g| g.ambient() == ambient));
        MonomialIdeal { ambient, gens: minimalize(gens) }
    }

    pub fn zero(ambient: usize) -> Self {
        MonomialIdeal { ambient, gens: Vec::new() }
    }

    pub fn unit(ambient: usize) -> Self {
        MonomialIdeal { ambient, gens: vec![Monomial::unit(ambient)] }
    }

    /// The edge ideal `(x_i x_j : {i, j} an edge)`.
    pub fn edge_ideal(g: &Graph) -> Self {
        let r = g.vertex_count();
        let gens = g.edges().into_iter().map(|(u, v)| Monomial::squarefree(r, &[u, v])).collect();
        MonomialIdeal::from_minimal(r, gens)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_unit()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_proper(&self) -> bool {
        !self.is_zero() && !self.is_unit()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(Monomial::is_squarefree)
    }

    pub fn max_degree(&self) -> u64 {
        self.gens.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u64 {
        self.gens.iter().map(Monomial::degree).min().unwrap_or(0)
    }

    /// Largest exponent of each variable over the minimal generators.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut rho = vec![0; self.ambient];
        for g in &self.gens {
            for (r, &a) in rho.iter_mut().zip(g.exponents()) {
                *r = (*r).max(a);
            }
        }
        rho
    }

    fn check_same(&self, other: &MonomialIdeal) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: other.ambient });
        }
        Ok(())
    }

    pub fn contains(&self, f: &Monomial) -> bool {
        f.ambient() == self.ambient && self.gens.iter().any(|g| g.divides(f))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &MonomialIdeal) -> bool {
        self.ambient == other.ambient && self.gens.iter().all(|g| other.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same(other)?;
        Ok(MonomialIdeal::from_minimal(self.ambient, self.gens.iter().chain(&other.gens).cloned().collect()))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        Ok(MonomialIdeal::from_minimal(self.ambient, gens))
    }

    pub fn power(&self, n: usize) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.ambient);
        for _ in 0..n {
            acc = acc.product(self).expect("same ambient");
        }
        acc
    }

    /// Generated by pairwise lcms of the generators.
    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b));
            }
        }
        Ok(MonomialIdeal::from_minimal(self.ambient, gens))
    }

    /// `(self : f)`.
    pub fn colon(&self, f: &Monomial) -> Result<MonomialIdeal> {
        f.check_ambient(self.ambient)?;
        Ok(MonomialIdeal::from_minimal(self.ambient, self.gens.iter().map(|g| g.colon(f)).collect()))
    }

    /// `(self : other)`, the intersection of the colons by each generator.
    pub fn colon_ideal(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same(other)?;
        if other.is_zero() {
            return Ok(MonomialIdeal::unit(self.ambient));
        }
        let mut acc: Option<MonomialIdeal> = None;
        for h in &other.gens {
            let c = self.colon(h)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        Ok(acc.expect("nonempty"))
    }

    /// `I R_F ∩ R`: the variables in `vars` (1-based) are set to 1.
    pub fn localize(&self, vars: &[usize]) -> MonomialIdeal {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut e = g.0.clone();
                for &i in vars {
                    e[i - 1] = 0;
                }
                Monomial(e)
            })
            .collect();
        MonomialIdeal::from_minimal(self.ambient, gens)
    }

    /// `(self : p^∞)`.
    pub fn saturate(&self, p: &PrimeSupport) -> MonomialIdeal {
        let prime = p.ideal(self.ambient);
        let mut current = self.clone();
        loop {
            let next = current.colon_ideal(&prime).expect("same ambient");
            if next == current {
                return current;
            }
            current = next;
        }
    }

    /// Minimal primes of a squarefree ideal: the minimal sets of variables
    /// meeting the support of every generator (minimal vertex covers for an
    /// edge ideal). Exhaustive over subsets, so limited to 24 variables.
    pub fn minimal_primes(&self) -> Result<Vec<PrimeSupport>> {
        if !self.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let r = self.ambient;
        assert!(r <= 24, "minimal prime enumeration is exhaustive over 2^r subsets");
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let supports: Vec<u32> = self
            .gens
            .iter()
            .map(|g| g.support().iter().fold(0u32, |m, i| m | 1 << (i - 1)))
            .collect();
        let covers = |c: u32| supports.iter().all(|s| s & c != 0);
        let mut out = Vec::new();
        for c in 0u32..1 << r {
            if covers(c) && (0..r).all(|i| c >> i & 1 == 0 || !covers(c & !(1 << i))) {
                out.push(PrimeSupport((0..r).filter(|i| c >> i & 1 == 1).map(|i| i + 1).collect()));
            }
        }
        out.sort();
        Ok(out)
    }

    /// `I^(n)`: the intersection of the `n`-th powers of the minimal primes.
    pub fn symbolic_power(&self, n: usize) -> Result<MonomialIdeal> {
        if n == 0 {
            return Err(Error::InvalidPower(0));
        }
        let primes = self.minimal_primes()?;
        let mut acc = MonomialIdeal::unit(self.ambient);
        for p in primes {
            acc = acc.intersect(&p.ideal(self.ambient).power(n))?;
        }
        if self.is_zero() {
            return Ok(MonomialIdeal::zero(self.ambient));
        }
        Ok(acc)
    }

    /// Re-embeds into `K[x_1..x_total]` with variable `i` sent to `i + offset`.
    pub fn embed(&self, total: usize, offset: usize) -> MonomialIdeal {
        assert!(offset + self.ambient <= total);
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut e = vec![0; total];
                e[offset..offset + self.ambient].copy_from_slice(&g.0);
                Monomial(e)
            })
            .collect();
        MonomialIdeal { ambient: total, gens }
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MonomialIdeal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
