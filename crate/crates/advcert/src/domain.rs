//! Input domains, assignments, measures, and partial functions.
//!
//! Strings are fixed-width digit vectors over the alphabet `{0, ..., q-1}`
//! (the usual 1-based alphabet is relabelled to 0-based).  The base-q integer
//! rank of a string is the canonical sort key, so lexicographic order on the
//! digit vectors is rank order everywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// One input symbol, a digit in `{0, ..., q-1}`.
pub type Symbol = u8;

/// A fixed-width input string; `word[j]` is the symbol at coordinate `j` (0-based).
pub type Word = Vec<Symbol>;

/// Memory caps keeping everything dense-matrix sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of strings `q^n` in a domain.
    pub max_strings: usize,
    /// Maximum number of assignments a single enumeration may produce.
    pub max_assignments: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_strings: 1 << 12, max_assignments: 1 << 16 }
    }
}

/// The set `[q]^n` of all length-`n` strings over a `q`-letter alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDomain {
    n: usize,
    q: usize,
    num_strings: usize,
    caps: Caps,
}

impl InputDomain {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        Self::with_caps(n, q, Caps::default())
    }

    /// The Boolean domain `{0,1}^n`.
    pub fn boolean(n: usize) -> Result<Self> {
        Self::new(n, 2)
    }

    pub fn with_caps(n: usize, q: usize, caps: Caps) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAssignment("arity n must be positive".into()));
        }
        if q < 2 {
            return Err(Error::InvalidAssignment(format!("alphabet size q must be >= 2, got {q}")));
        }
        let strings = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if strings > caps.max_strings as u128 {
            return Err(Error::DomainTooLarge { n, q, strings, cap: caps.max_strings });
        }
        Ok(InputDomain { n, q, num_strings: strings as usize, caps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn num_strings(&self) -> usize {
        self.num_strings
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn is_boolean(&self) -> bool {
        self.q == 2
    }

    pub fn require_boolean(&self) -> Result<()> {
        if self.q == 2 {
            Ok(())
        } else {
            Err(Error::BooleanOnly { q: self.q })
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() == self.n && w.iter().all(|&s| (s as usize) < self.q)
    }

    /// Base-q rank of a string; coordinate 0 is the most significant digit.
    pub fn rank(&self, w: &Word) -> usize {
        debug_assert!(self.contains(w));
        w.iter().fold(0usize, |acc, &s| acc * self.q + s as usize)
    }

    pub fn word_from_rank(&self, mut r: usize) -> Word {
        let mut w = vec![0u8; self.n];
        for j in (0..self.n).rev() {
            w[j] = (r % self.q) as u8;
            r /= self.q;
        }
        w
    }

    /// All strings in rank order.
    pub fn strings(&self) -> Vec<Word> {
        (0..self.num_strings).map(|r| self.word_from_rank(r)).collect()
    }

    /// Number of assignments of weight at most `kmax`, as an unsaturated count.
    pub fn assignment_count(&self, kmax: usize) -> u128 {
        let mut total = 0u128;
        for k in 0..=kmax.min(self.n) {
            total += binomial(self.n, k) * (self.q as u128).pow(k as u32);
        }
        total
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Renders a word as a digit string ("0110"), comma-separated above base 10.
pub fn word_string(w: &Word) -> String {
    if w.iter().all(|&s| s < 10) {
        w.iter().map(|s| char::from(b'0' + s)).collect()
    } else {
        w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Parses a digit string into a word; validates against the domain.
pub fn parse_word(s: &str, domain: &InputDomain) -> Result<Word> {
    let w: Word = s
        .chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| Error::InvalidFunction(format!("bad digit {c:?} in string {s:?}")))
        })
        .collect::<Result<_>>()?;
    if !domain.contains(&w) {
        return Err(Error::InvalidFunction(format!(
            "string {s:?} is not in [{}]^{}",
            domain.q(),
            domain.n()
        )));
    }
    Ok(w)
}

/// A partial fixing of input coordinates: a map from coordinates to symbols.
///
/// The weight is the number of fixed coordinates; the empty assignment is
/// valid and agrees with every string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    entries: BTreeMap<usize, Symbol>,
}

impl Assignment {
    pub fn empty() -> Self {
        Assignment { entries: BTreeMap::new() }
    }

    pub fn new(pairs: impl IntoIterator<Item = (usize, Symbol)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (j, s) in pairs {
            if entries.insert(j, s).is_some() {
                return Err(Error::InvalidAssignment(format!("coordinate {j} fixed twice")));
            }
        }
        Ok(Assignment { entries })
    }

    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, j: usize) -> Option<Symbol> {
        self.entries.get(&j).copied()
    }

    pub fn defines(&self, j: usize) -> bool {
        self.entries.contains_key(&j)
    }

    pub fn coordinates(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, Symbol)> + '_ {
        self.entries.iter().map(|(&j, &s)| (j, s))
    }

    pub fn validate(&self, domain: &InputDomain) -> Result<()> {
        for (&j, &s) in &self.entries {
            if j >= domain.n() {
                return Err(Error::InvalidAssignment(format!(
                    "coordinate {j} out of range for n = {}",
                    domain.n()
                )));
            }
            if s as usize >= domain.q() {
                return Err(Error::InvalidAssignment(format!(
                    "symbol {s} out of range for q = {}",
                    domain.q()
                )));
            }
        }
        Ok(())
    }

    /// True iff `x` agrees with this assignment on every fixed coordinate.
    pub fn agrees(&self, x: &Word) -> bool {
        self.entries.iter().all(|(&j, &s)| x.get(j) == Some(&s))
    }

    /// The assignment extended by `j -> s`; `j` must be outside the domain of self.
    pub fn extended(&self, j: usize, s: Symbol) -> Result<Self> {
        if self.defines(j) {
            return Err(Error::InvalidAssignment(format!("coordinate {j} already fixed")));
        }
        let mut entries = self.entries.clone();
        entries.insert(j, s);
        Ok(Assignment { entries })
    }

    /// Merges two assignments; `None` if they contradict on a shared coordinate.
    pub fn merged(&self, other: &Assignment) -> Option<Assignment> {
        let mut entries = self.entries.clone();
        for (&j, &s) in &other.entries {
            match entries.insert(j, s) {
                Some(prev) if prev != s => return None,
                _ => {}
            }
        }
        Some(Assignment { entries })
    }

    /// Sort key matching enumeration order: (weight, coordinate set, symbol tuple).
    pub fn sort_key(&self) -> (usize, Vec<usize>, Vec<Symbol>) {
        (
            self.weight(),
            self.entries.keys().copied().collect(),
            self.entries.values().copied().collect(),
        )
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> =
            self.entries.iter().map(|(j, s)| format!("{j}->{s}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// All assignments of weight at most `kmax`, sorted by
/// (weight, coordinate set lexicographic, symbol tuple lexicographic).
pub fn enumerate_assignments(domain: &InputDomain, kmax: usize) -> Result<Vec<Assignment>> {
    if kmax > domain.n() {
        return Err(Error::InvalidAssignment(format!(
            "kmax = {kmax} exceeds arity n = {}",
            domain.n()
        )));
    }
    let count = domain.assignment_count(kmax);
    let cap = domain.caps().max_assignments;
    if count > cap as u128 {
        return Err(Error::EnumerationOverflow { count, kmax, cap });
    }

    let mut out = Vec::with_capacity(count as usize);
    for k in 0..=kmax {
        for coords in combinations(domain.n(), k) {
            let mut symbols = vec![0u8; k];
            'tuples: loop {
                out.push(Assignment {
                    entries: coords.iter().copied().zip(symbols.iter().copied()).collect(),
                });
                // odometer over symbol tuples, last coordinate fastest
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break 'tuples;
                    }
                    pos -= 1;
                    symbols[pos] += 1;
                    if (symbols[pos] as usize) < domain.q() {
                        break;
                    }
                    symbols[pos] = 0;
                }
            }
        }
    }
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

/// k-subsets of {0, ..., n-1} in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// A nonnegative weight function on a finite set of strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    weights: BTreeMap<Word, f64>,
}

impl Measure {
    pub fn new(entries: impl IntoIterator<Item = (Word, f64)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (w, v) in entries {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "weight {v} at {} is not a finite nonnegative number",
                    word_string(&w)
                )));
            }
            if weights.insert(w.clone(), v).is_some() {
                return Err(Error::InvalidMeasure(format!(
                    "string {} listed twice",
                    word_string(&w)
                )));
            }
        }
        Ok(Measure { weights })
    }

    pub fn uniform(support: impl IntoIterator<Item = Word>) -> Result<Self> {
        let support: Vec<Word> = support.into_iter().collect();
        if support.is_empty() {
            return Err(Error::InvalidMeasure("uniform measure needs a nonempty support".into()));
        }
        let w = 1.0 / support.len() as f64;
        Measure::new(support.into_iter().map(|x| (x, w)))
    }

    pub fn weight(&self, w: &Word) -> f64 {
        self.weights.get(w).copied().unwrap_or(0.0)
    }

    /// Support in rank order (zero-weight entries included if present).
    pub fn support(&self) -> impl Iterator<Item = &Word> + '_ {
        self.weights.keys()
    }

    pub fn support_vec(&self) -> Vec<Word> {
        self.weights.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, f64)> + '_ {
        self.weights.iter().map(|(w, &v)| (w, v))
    }

    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }

    pub fn is_probability(&self, tol: f64) -> bool {
        (self.total() - 1.0).abs() <= tol
    }

    pub fn require_probability(&self, tol: f64) -> Result<()> {
        let total = self.total();
        if (total - 1.0).abs() <= tol {
            Ok(())
        } else {
            Err(Error::InvalidMeasure(format!(
                "total mass {total} is not 1 within {tol:e}"
            )))
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Measure> {
        Measure::new(self.weights.iter().map(|(w, &v)| (w.clone(), c * v)))
    }

    /// Mass of the event "x agrees with `a`": the marginal of the assignment.
    pub fn marginal(&self, a: &Assignment) -> f64 {
        self.weights.iter().filter(|(w, _)| a.agrees(w)).map(|(_, &v)| v).sum()
    }

    /// Drops zero-weight entries from the support.
    pub fn pruned(&self) -> Measure {
        Measure {
            weights: self
                .weights
                .iter()
                .filter(|(_, &v)| v > 0.0)
                .map(|(w, &v)| (w.clone(), v))
                .collect(),
        }
    }
}

/// A partial Boolean-valued function given by its 1-inputs `X` and 0-inputs `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFunction {
    domain: InputDomain,
    ones: BTreeSet<Word>,
    zeros: BTreeSet<Word>,
}

impl PartialFunction {
    pub fn new(
        domain: InputDomain,
        ones: impl IntoIterator<Item = Word>,
        zeros: impl IntoIterator<Item = Word>,
    ) -> Result<Self> {
        let ones: BTreeSet<Word> = ones.into_iter().collect();
        let zeros: BTreeSet<Word> = zeros.into_iter().collect();
        for w in ones.iter().chain(zeros.iter()) {
            if !domain.contains(w) {
                return Err(Error::InvalidFunction(format!(
                    "string {} is outside [{}]^{}",
                    word_string(w),
                    domain.q(),
                    domain.n()
                )));
            }
        }
        if let Some(w) = ones.intersection(&zeros).next() {
            return Err(Error::InvalidFunction(format!(
                "string {} assigned both values",
                word_string(w)
            )));
        }
        Ok(PartialFunction { domain, ones, zeros })
    }

    /// A total function from a predicate.
    pub fn total(domain: InputDomain, f: impl Fn(&Word) -> bool) -> Result<Self> {
        let (ones, zeros): (Vec<Word>, Vec<Word>) =
            domain.strings().into_iter().partition(|w| f(w));
        PartialFunction::new(domain, ones, zeros)
    }

    pub fn domain(&self) -> &InputDomain {
        &self.domain
    }

    pub fn ones(&self) -> &BTreeSet<Word> {
        &self.ones
    }

    pub fn zeros(&self) -> &BTreeSet<Word> {
        &self.zeros
    }

    pub fn is_total(&self) -> bool {
        self.ones.len() + self.zeros.len() == self.domain.num_strings()
    }

    pub fn value(&self, w: &Word) -> Option<bool> {
        if self.ones.contains(w) {
            Some(true)
        } else if self.zeros.contains(w) {
            Some(false)
        } else {
            None
        }
    }

    // Built-in Boolean families.

    pub fn or(n: usize) -> Result<Self> {
        Self::total(InputDomain::boolean(n)?, |w| w.iter().any(|&s| s == 1))
    }

    pub fn and(n: usize) -> Result<Self> {
        Self::total(InputDomain::boolean(n)?, |w| w.iter().all(|&s| s == 1))
    }

    /// XOR of all coordinates: 1 on odd-weight strings.
    pub fn parity(n: usize) -> Result<Self> {
        Self::total(InputDomain::boolean(n)?, |w| w.iter().map(|&s| s as usize).sum::<usize>() % 2 == 1)
    }

    pub fn majority(n: usize) -> Result<Self> {
        Self::total(InputDomain::boolean(n)?, |w| {
            2 * w.iter().map(|&s| s as usize).sum::<usize>() > n
        })
    }

    /// Symmetric function: `values[k]` is the output on Hamming weight k.
    pub fn symmetric(n: usize, values: &[bool]) -> Result<Self> {
        if values.len() != n + 1 {
            return Err(Error::InvalidFunction(format!(
                "symmetric function on n = {n} needs {} values, got {}",
                n + 1,
                values.len()
            )));
        }
        let values = values.to_vec();
        Self::total(InputDomain::boolean(n)?, move |w| {
            values[w.iter().map(|&s| s as usize).sum::<usize>()]
        })
    }

    /// Total function from a truth table in rank order.
    pub fn from_truth_table(n: usize, bits: &[bool]) -> Result<Self> {
        let domain = InputDomain::boolean(n)?;
        if bits.len() != domain.num_strings() {
            return Err(Error::InvalidFunction(format!(
                "truth table for n = {n} needs {} bits, got {}",
                domain.num_strings(),
                bits.len()
            )));
        }
        let bits = bits.to_vec();
        let d2 = domain.clone();
        Self::total(domain, move |w| bits[d2.rank(w)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Word {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn assignment_counts_match_formula() {
        // n=2, q=2, kmax=1: 1 empty + 4 singletons
        let d = InputDomain::new(2, 2).unwrap();
        assert_eq!(enumerate_assignments(&d, 1).unwrap().len(), 5);
        // n=2, q=2, kmax=2: 1 + 4 + 4
        assert_eq!(enumerate_assignments(&d, 2).unwrap().len(), 9);
        // n=3, q=3, kmax=1: 1 + 3*3
        let d = InputDomain::new(3, 3).unwrap();
        assert_eq!(enumerate_assignments(&d, 1).unwrap().len(), 10);
    }

    #[test]
    fn enumeration_is_sorted_and_duplicate_free() {
        // set-equality against a naive recursive generator
        fn naive(domain: &InputDomain, kmax: usize) -> Vec<Assignment> {
            fn go(
                n: usize,
                q: usize,
                next: usize,
                left: usize,
                cur: &Assignment,
                out: &mut Vec<Assignment>,
            ) {
                out.push(cur.clone());
                if left == 0 {
                    return;
                }
                for j in next..n {
                    for s in 0..q {
                        let ext = cur.extended(j, s as u8).unwrap();
                        go(n, q, j + 1, left - 1, &ext, out);
                    }
                }
            }
            let mut out = Vec::new();
            go(domain.n(), domain.q(), 0, kmax, &Assignment::empty(), &mut out);
            out.sort_by_key(|a| a.sort_key());
            out.dedup();
            out
        }

        for (n, q) in [(2usize, 2usize), (3, 2), (4, 2), (3, 3), (4, 3)] {
            let d = InputDomain::new(n, q).unwrap();
            for kmax in 0..=n {
                let fast = enumerate_assignments(&d, kmax).unwrap();
                let slow = naive(&d, kmax);
                assert_eq!(fast, slow, "n={n} q={q} kmax={kmax}");
                let mut keys: Vec<_> = fast.iter().map(|a| a.sort_key()).collect();
                let sorted = keys.clone();
                keys.sort();
                assert_eq!(keys, sorted);
                keys.dedup();
                assert_eq!(keys.len(), fast.len());
            }
        }
    }

    #[test]
    fn enumeration_overflow_names_count() {
        let caps = Caps { max_strings: 1 << 12, max_assignments: 8 };
        let d = InputDomain::with_caps(2, 2, caps).unwrap();
        match enumerate_assignments(&d, 2) {
            Err(Error::EnumerationOverflow { count, cap, .. }) => {
                assert_eq!(count, 9);
                assert_eq!(cap, 8);
            }
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn agrees_examples() {
        let a = Assignment::new([(0usize, 0u8)]).unwrap();
        assert!(a.agrees(&bits("01")));
        assert!(Assignment::empty().agrees(&bits("01")));
        let b = Assignment::new([(1usize, 0u8)]).unwrap();
        assert!(!b.agrees(&bits("01")));
    }

    #[test]
    fn marginal_examples() {
        let mu = Measure::uniform([bits("00"), bits("11")]).unwrap();
        let a = Assignment::new([(0usize, 0u8)]).unwrap();
        assert_eq!(mu.marginal(&a), 0.5);
        assert_eq!(mu.marginal(&Assignment::empty()), 1.0);
        let ab = Assignment::new([(0usize, 0u8), (1, 1)]).unwrap();
        assert_eq!(mu.marginal(&ab), 0.0);
    }

    #[test]
    fn marginal_monotone_under_extension_and_partitions() {
        let d = InputDomain::new(3, 2).unwrap();
        // a lopsided distribution on a subset
        let mu = Measure::new([
            (bits("000"), 0.5),
            (bits("011"), 0.25),
            (bits("101"), 0.125),
            (bits("110"), 0.125),
        ])
        .unwrap();
        for a in enumerate_assignments(&d, 2).unwrap() {
            let pa = mu.marginal(&a);
            for j in 0..3 {
                if a.defines(j) {
                    continue;
                }
                let mut partition_sum = 0.0;
                for s in 0..2u8 {
                    let b = a.extended(j, s).unwrap();
                    let pb = mu.marginal(&b);
                    assert!(pb <= pa + 1e-15, "extension must not gain mass");
                    partition_sum += pb;
                }
                assert!((partition_sum - pa).abs() < 1e-12);
            }
        }
        // full partition over a fixed coordinate set sums to total mass
        let total: f64 = (0..2u8)
            .flat_map(|s0| (0..2u8).map(move |s1| (s0, s1)))
            .map(|(s0, s1)| mu.marginal(&Assignment::new([(0, s0), (1, s1)]).unwrap()))
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn domain_cap_is_enforced() {
        let caps = Caps { max_strings: 8, max_assignments: 1 << 16 };
        assert!(InputDomain::with_caps(4, 2, caps).is_err());
        assert!(InputDomain::with_caps(3, 2, caps).is_ok());
    }

    #[test]
    fn rank_roundtrip() {
        let d = InputDomain::new(3, 3).unwrap();
        for r in 0..d.num_strings() {
            assert_eq!(d.rank(&d.word_from_rank(r)), r);
        }
        // lexicographic order on digit vectors is rank order
        let strings = d.strings();
        for w in strings.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn partial_function_invariants() {
        assert!(PartialFunction::new(
            InputDomain::boolean(2).unwrap(),
            [bits("11")],
            [bits("11")]
        )
        .is_err());
        let f = PartialFunction::parity(3).unwrap();
        assert!(f.is_total());
        assert_eq!(f.value(&bits("011")), Some(false));
        assert_eq!(f.value(&bits("001")), Some(true));
        let g = PartialFunction::new(
            InputDomain::boolean(2).unwrap(),
            [bits("11")],
            [bits("00")],
        )
        .unwrap();
        assert!(!g.is_total());
        assert_eq!(g.value(&bits("01")), None);
    }

    #[test]
    fn builtin_families() {
        let or2 = PartialFunction::or(2).unwrap();
        assert_eq!(or2.ones().len(), 3);
        let maj3 = PartialFunction::majority(3).unwrap();
        assert_eq!(maj3.ones().len(), 4);
        let and3 = PartialFunction::and(3).unwrap();
        assert_eq!(and3.ones().len(), 1);
        let sym = PartialFunction::symmetric(2, &[true, false, true]).unwrap();
        assert_eq!(sym.value(&bits("00")), Some(true));
        assert_eq!(sym.value(&bits("01")), Some(false));
        assert_eq!(sym.value(&bits("11")), Some(true));
    }
}
