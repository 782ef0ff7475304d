//! Boolean functions on `n` variables, stored as dense truth tables.
//!
//! Bit order: variable `x_1` is the most significant bit of a table index,
//! `x_n` the least significant. Outcome strings and masks use the same order.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::wht;

/// Default upper bound on the variable count (16 Mi table entries).
pub const DEFAULT_MAX_VARS: usize = 24;

/// Index mask of variable `x_j` (1-based) in an `n`-bit string.
#[inline]
pub fn var_mask(n: usize, j: usize) -> usize {
    debug_assert!((1..=n).contains(&j));
    1 << (n - j)
}

/// Renders `y` as an `n`-character bit string, `x_1` first.
pub fn bit_string(y: usize, n: usize) -> String {
    (1..=n)
        .map(|j| if y & var_mask(n, j) != 0 { '1' } else { '0' })
        .collect()
}

/// Where a truth table came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Provenance {
    Raw,
    /// `f(x) = parity(x AND mask)`.
    Linear(usize),
    /// `f(x) = 1` iff `x AND mask == mask`.
    Product(usize),
    /// Any other algebraic normal form expression.
    Anf(String),
}

/// A set of variable indices in `1..=n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VariableSet(u64);

impl VariableSet {
    pub fn new() -> Self {
        VariableSet(0)
    }

    /// Positions of the ones in the `n`-bit outcome `y`.
    pub fn from_outcome(y: usize, n: usize) -> Self {
        let mut set = VariableSet::new();
        for j in 1..=n {
            if y & var_mask(n, j) != 0 {
                set.insert(j);
            }
        }
        set
    }

    /// Inverse of [`VariableSet::from_outcome`].
    pub fn to_mask(self, n: usize) -> usize {
        self.iter().fold(0, |acc, j| acc | var_mask(n, j))
    }

    pub fn insert(&mut self, j: usize) {
        assert!((1..=64).contains(&j), "variable index {j} out of range");
        self.0 |= 1 << (j - 1);
    }

    pub fn contains(&self, j: usize) -> bool {
        (1..=64).contains(&j) && self.0 & (1 << (j - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VariableSet) -> VariableSet {
        VariableSet(self.0 | other.0)
    }

    pub fn is_subset(&self, other: &VariableSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (1..=64).filter(move |j| bits & (1 << (j - 1)) != 0)
    }
}

impl FromIterator<usize> for VariableSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VariableSet::new();
        for j in iter {
            set.insert(j);
        }
        set
    }
}

impl fmt::Display for VariableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|j| format!("x{j}")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl Serialize for VariableSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VariableSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(d)?;
        if let Some(bad) = items.iter().find(|j| !(1..=64).contains(*j)) {
            return Err(serde::de::Error::custom(format!(
                "variable index {bad} out of range"
            )));
        }
        Ok(items.into_iter().collect())
    }
}

/// A total map `{0,1}^n -> {0,1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>,
    provenance: Provenance,
}

fn check_n(n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoVariables);
    }
    if n > limit {
        return Err(Error::SizeExceeded { n, limit });
    }
    Ok(())
}

impl BooleanFunction {
    pub fn from_table(n: usize, table: Vec<bool>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVariables);
        }
        if n >= usize::BITS as usize || table.len() != 1 << n {
            return Err(Error::MalformedTable(format!(
                "expected {} entries for n={n}, found {}",
                1usize << n,
                table.len()
            )));
        }
        Ok(BooleanFunction {
            n,
            table,
            provenance: Provenance::Raw,
        })
    }

    /// Builds the table by evaluating `f` at every index.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_n(n, DEFAULT_MAX_VARS)?;
        Self::from_table(n, (0..1usize << n).map(f).collect())
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    /// `f(x) = parity(x AND mask)`.
    pub fn linear(n: usize, mask: usize) -> Result<Self> {
        let mut f = Self::from_fn(n, |x| (x & mask).count_ones() % 2 == 1)?;
        f.provenance = Provenance::Linear(mask & ((1 << n) - 1));
        Ok(f)
    }

    /// Product of the variables selected by `mask`.
    pub fn product(n: usize, mask: usize) -> Result<Self> {
        let mask = mask & ((1 << n) - 1);
        let mut f = Self::from_fn(n, |x| x & mask == mask)?;
        f.provenance = Provenance::Product(mask);
        Ok(f)
    }

    /// `x_1 x_2 ... x_m` on `n` variables.
    pub fn leading_product(n: usize, m: usize) -> Result<Self> {
        if m > n {
            return Err(Error::VariableOutOfRange { index: m, n });
        }
        let mask = (1..=m).fold(0, |acc, j| acc | var_mask(n, j));
        Self::product(n, mask)
    }

    /// Embeds `inner` (on `positions.len()` variables) into `n` variables:
    /// inner variable `i` reads outer variable `positions[i - 1]`.
    pub fn embed(n: usize, positions: &[usize], inner: &BooleanFunction) -> Result<Self> {
        check_n(n, DEFAULT_MAX_VARS)?;
        if positions.len() != inner.n {
            return Err(Error::MalformedTable(format!(
                "{} positions for a function of {} variables",
                positions.len(),
                inner.n
            )));
        }
        if let Some(&bad) = positions.iter().find(|&&p| !(1..=n).contains(&p)) {
            return Err(Error::VariableOutOfRange { index: bad, n });
        }
        let m = inner.n;
        Self::from_fn(n, |x| {
            let idx = positions.iter().enumerate().fold(0, |acc, (i, &p)| {
                if x & var_mask(n, p) != 0 {
                    acc | var_mask(m, i + 1)
                } else {
                    acc
                }
            });
            inner.table[idx]
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `f(x)` for the `n`-bit input `x`.
    #[inline]
    pub fn evaluate(&self, x: usize) -> bool {
        self.table[x]
    }

    /// `f` at the input given as bits `x_1..x_n`.
    pub fn evaluate_bits(&self, bits: &[bool]) -> bool {
        assert_eq!(bits.len(), self.n, "input has the wrong number of bits");
        let x = bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        self.table[x]
    }

    /// Every variable whose flip changes `f` for some input. Exhaustive.
    pub fn relevant_variables_bruteforce(&self) -> VariableSet {
        (1..=self.n)
            .filter(|&j| {
                let bit = var_mask(self.n, j);
                (0..self.table.len())
                    .filter(|x| x & bit == 0)
                    .any(|x| self.table[x] != self.table[x | bit])
            })
            .collect()
    }

    /// Renders the truth-table file format.
    pub fn to_table_file(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        out.extend(self.table.iter().map(|&b| if b { '1' } else { '0' }));
        out.push('\n');
        out
    }
}

/// Parses the truth-table file format: `n=<int>` then `2^n` characters `0`/`1`.
pub fn parse_table(text: &str, limit: usize) -> Result<BooleanFunction> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedTable("empty file".into()))?;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::MalformedTable(format!("bad header line {header:?}")))?;
    check_n(n, limit)?;
    let body = lines
        .next()
        .ok_or_else(|| Error::MalformedTable("missing table line".into()))?
        .trim();
    if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
        return Err(Error::MalformedTable(format!(
            "unexpected trailing line {extra:?}"
        )));
    }
    let table = body
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::MalformedTable(format!(
                "unexpected character {other:?}"
            ))),
        })
        .collect::<Result<Vec<bool>>>()?;
    BooleanFunction::from_table(n, table)
}

pub fn read_table_file(path: &Path, limit: usize) -> Result<BooleanFunction> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedTable(format!("{}: {e}", path.display())))?;
    parse_table(&text, limit)
}

/// Parses an XOR-of-AND-monomials expression over `x1..xn` with the default size limit.
pub fn parse_anf(text: &str, n: usize) -> Result<BooleanFunction> {
    parse_anf_with_limit(text, n, DEFAULT_MAX_VARS)
}

/// Grammar: `expr := term ('+' term)*`, `term := '1' | '0' | factor ('*' factor)*`,
/// `factor := 'x' integer`. `+` is XOR, `*` is AND, whitespace is ignored.
pub fn parse_anf_with_limit(text: &str, n: usize, limit: usize) -> Result<BooleanFunction> {
    check_n(n, limit)?;
    let monomials = AnfParser::new(text, n).parse()?;

    let mut coeffs = vec![false; 1 << n];
    for &m in &monomials {
        coeffs[m] = true;
    }
    wht::mobius(&mut coeffs, Exec::default());

    let provenance = if monomials.iter().all(|m| m.count_ones() == 1) {
        Provenance::Linear(monomials.iter().fold(0, |acc, m| acc | m))
    } else if monomials.len() == 1 && monomials.iter().all(|m| m.count_ones() >= 2) {
        Provenance::Product(*monomials.iter().next().unwrap())
    } else {
        Provenance::Anf(text.trim().to_string())
    };
    Ok(BooleanFunction {
        n,
        table: coeffs,
        provenance,
    })
}

struct AnfParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    end: usize,
    n: usize,
}

impl<'a> AnfParser<'a> {
    fn new(text: &'a str, n: usize) -> Self {
        AnfParser {
            chars: text.char_indices().peekable(),
            end: text.len(),
            n,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn peek(&mut self) -> Option<(usize, char)> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn error<T>(&self, position: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: position + 1,
            message: message.into(),
        })
    }

    /// Returns the monomial masks with nonzero coefficient; repeated monomials cancel.
    fn parse(mut self) -> Result<BTreeSet<usize>> {
        let mut monomials = BTreeSet::new();
        loop {
            if let Some(m) = self.term()? {
                if !monomials.insert(m) {
                    monomials.remove(&m);
                }
            }
            match self.peek() {
                None => return Ok(monomials),
                Some((_, '+')) => {
                    self.chars.next();
                }
                Some((pos, c)) => {
                    return self.error(pos, format!("expected '+' or end, found {c:?}"))
                }
            }
        }
    }

    /// `None` for the constant-zero term.
    fn term(&mut self) -> Result<Option<usize>> {
        match self.peek() {
            Some((_, '1')) => {
                self.chars.next();
                Ok(Some(0))
            }
            Some((_, '0')) => {
                self.chars.next();
                Ok(None)
            }
            _ => {
                let mut mask = self.factor()?;
                while let Some((_, '*')) = self.peek() {
                    self.chars.next();
                    mask |= self.factor()?;
                }
                Ok(Some(mask))
            }
        }
    }

    fn factor(&mut self) -> Result<usize> {
        match self.peek() {
            Some((_, 'x')) => {
                self.chars.next();
            }
            Some((pos, c)) => return self.error(pos, format!("expected a variable, found {c:?}")),
            None => return self.error(self.end, "unexpected end of expression"),
        }
        let start = match self.chars.peek() {
            Some(&(pos, c)) if c.is_ascii_digit() => pos,
            Some(&(pos, _)) => return self.error(pos, "expected a variable index after 'x'"),
            None => return self.error(self.end, "expected a variable index after 'x'"),
        };
        let mut digits = String::new();
        while let Some((_, c)) = self.chars.next_if(|(_, c)| c.is_ascii_digit()) {
            digits.push(c);
        }
        let index: usize = match digits.parse() {
            Ok(v) => v,
            Err(_) => return self.error(start, format!("variable index {digits} too large")),
        };
        if !(1..=self.n).contains(&index) {
            return Err(Error::VariableOutOfRange { index, n: self.n });
        }
        Ok(var_mask(self.n, index))
    }
}
