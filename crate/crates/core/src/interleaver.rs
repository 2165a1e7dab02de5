//! Dithered relative-prime interleaver.
//!
//! The full permutation is built in three stages: a small dither table is
//! applied inside each group of `group_len` consecutive indices, the result
//! goes through the affine map `(p * i + s) mod n`, and finally the values at
//! the group heads are shifted by one group.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::{Error, Result};

const GR25: [usize; 25] = [
    7, 20, 12, 4, 9, 21, 0, 18, 11, 6, 16, 3, 19, 23, 10, 15, 1, 24, 17, 13, 22, 2, 8, 14, 5,
];

/// Small table hard-coded in the reference interleaver routine. It is neither
/// Gr24 nor its inverse.
const FIG7_TABLE: [usize; 24] = [
    0, 14, 9, 22, 18, 2, 15, 5, 10, 17, 4, 13, 7, 1, 21, 12, 16, 23, 6, 19, 11, 3, 8, 20,
];

pub const PAPER_N: usize = 1344;
pub const PAPER_P: usize = 173;
pub const PAPER_S: usize = 1184;

/// A short permutation of `0..len` used inside each interleaver group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DitherSequence {
    values: Vec<usize>,
}

impl DitherSequence {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if !is_bijection(&values) {
            return Err(Error::Structure(format!(
                "dither sequence of length {} is not a permutation",
                values.len()
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The 25-entry sequence read off the Grünbaum graph.
pub fn gr25() -> DitherSequence {
    DitherSequence { values: GR25.to_vec() }
}

/// [`gr25`] with the entry 24 dropped.
pub fn gr24() -> DitherSequence {
    DitherSequence {
        values: GR25.iter().copied().filter(|&v| v != 24).collect(),
    }
}

/// The table used by the reference interleaver routine.
pub fn fig7_table() -> DitherSequence {
    DitherSequence { values: FIG7_TABLE.to_vec() }
}

/// Which small table to dither with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmallTable {
    #[default]
    Fig7,
    Gr24,
}

impl SmallTable {
    pub fn sequence(self) -> DitherSequence {
        match self {
            SmallTable::Fig7 => fig7_table(),
            SmallTable::Gr24 => gr24(),
        }
    }
}

impl FromStr for SmallTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig7" => Ok(SmallTable::Fig7),
            "gr24" => Ok(SmallTable::Gr24),
            other => Err(Error::Parameter(format!("unknown small table `{other}`"))),
        }
    }
}

/// Group-head shift pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftMode {
    /// Walk the heads swapping each with the previous one; the first head has
    /// no predecessor and is not swapped. Net effect: head values rotate left
    /// by one group.
    #[default]
    SkipFirst,
    /// Same walk, but the first head is swapped with the last head.
    Cyclic,
    /// No shift pass.
    Off,
}

impl FromStr for ShiftMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skip-first" => Ok(ShiftMode::SkipFirst),
            "cyclic" => Ok(ShiftMode::Cyclic),
            "off" | "none" => Ok(ShiftMode::Off),
            other => Err(Error::Parameter(format!("unknown shift mode `{other}`"))),
        }
    }
}

/// Parameters of a dithered relative-prime interleaver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaverSpec {
    pub n: usize,
    pub p: usize,
    pub s: usize,
    pub small: DitherSequence,
    pub shift: ShiftMode,
}

impl InterleaverSpec {
    /// n = 1344, p = 173, s = 1184 with the reference table.
    pub fn paper() -> Self {
        Self {
            n: PAPER_N,
            p: PAPER_P,
            s: PAPER_S,
            small: fig7_table(),
            shift: ShiftMode::SkipFirst,
        }
    }

    pub fn group_len(&self) -> usize {
        self.small.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("interleaver length must be positive".into()));
        }
        if gcd(self.p, self.n) != 1 {
            return Err(Error::Parameter(format!(
                "p = {} is not coprime with n = {}",
                self.p, self.n
            )));
        }
        if self.s >= self.n {
            return Err(Error::Parameter(format!("s = {} must be below n = {}", self.s, self.n)));
        }
        let l = self.group_len();
        if l == 0 || self.n % l != 0 {
            return Err(Error::Parameter(format!(
                "group length {l} does not divide n = {}",
                self.n
            )));
        }
        Ok(())
    }
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A bijection on `0..n`. `apply(i)` is where input `i` goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        if !is_bijection(&map) {
            return Err(Error::Structure(format!(
                "map of length {} is not a bijection",
                map.len()
            )));
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn invert(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { map: inv }
    }

    /// `self` after `first`: `i -> self(first(i))`.
    pub fn compose(&self, first: &Permutation) -> Result<Permutation> {
        if self.len() != first.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                actual: first.len(),
            });
        }
        Ok(Permutation {
            map: first.map.iter().map(|&i| self.map[i]).collect(),
        })
    }

    /// First line `n`, then one index per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.map.len() * 5 + 8);
        let _ = writeln!(out, "{}", self.map.len());
        for v in &self.map {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse = |(line, l): (usize, &str)| -> Result<usize> {
            l.parse().map_err(|e| Error::Parse {
                line,
                msg: format!("`{l}`: {e}"),
            })
        };
        let n = parse(lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing length header".into(),
        })?)?;
        let map = lines.map(parse).collect::<Result<Vec<_>>>()?;
        if map.len() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: map.len(),
            });
        }
        Permutation::new(map)
    }
}

/// Counting check: every value in `0..len` appears exactly once.
pub fn is_bijection(map: &[usize]) -> bool {
    let mut count = vec![0u32; map.len()];
    for &v in map {
        match count.get_mut(v) {
            Some(c) => *c += 1,
            None => return false,
        }
    }
    count.iter().all(|&c| c == 1)
}

/// Relative-prime index map `(p * i + s) mod n`.
pub fn rp_index(i: usize, p: usize, s: usize, n: usize) -> Result<usize> {
    if n == 0 || gcd(p, n) != 1 {
        return Err(Error::Parameter(format!("p = {p} is not coprime with n = {n}")));
    }
    if i >= n {
        return Err(Error::Parameter(format!("index {i} outside 0..{n}")));
    }
    Ok(((p as u128 * i as u128 + s as u128) % n as u128) as usize)
}

/// Builds the full dithered relative-prime interleaver.
pub fn build_gruenbaum_interleaver(spec: &InterleaverSpec) -> Result<Permutation> {
    spec.validate()?;
    let (n, p, s) = (spec.n, spec.p, spec.s);
    let len = spec.group_len();
    let table = spec.small.values();

    let mut dst: Vec<usize> = (0..n)
        .map(|i| {
            let offset = i % len;
            let dithered = i - offset + table[offset];
            (s + dithered * p) % n
        })
        .collect();

    match spec.shift {
        ShiftMode::Off => {}
        ShiftMode::SkipFirst | ShiftMode::Cyclic => {
            let mut prev = match spec.shift {
                ShiftMode::Cyclic => Some(n - len),
                _ => None,
            };
            for head in (0..n).step_by(len) {
                if let Some(j) = prev {
                    dst.swap(j, head);
                }
                prev = Some(head);
            }
        }
    }
    debug_assert!(is_bijection(&dst));
    Ok(Permutation { map: dst })
}

/// The interleaver used for the 192-bit, rate-1/4 code.
pub fn paper_interleaver() -> Permutation {
    build_gruenbaum_interleaver(&InterleaverSpec::paper()).expect("paper parameters are valid")
}

/// Minimum over index pairs of `|i - j| + |map[i] - map[j]|`; `None` below two entries.
pub fn s_random_metric(map: &[usize]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..map.len() {
        for j in i + 1..map.len() {
            let d = (j - i) + map[i].abs_diff(map[j]);
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best
}
