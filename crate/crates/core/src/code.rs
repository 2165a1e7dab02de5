//! Systematic IRA code: irregular repetition, interleaving, grouped XOR and an
//! accumulator.
//!
//! Edges are numbered twice. The repetition stage emits edges in information
//! node order (node 0's copies first); combiner slot `i` reads repetition
//! edge `perm(i)` ([`Wiring::Gather`]), or edge `e` is written to slot
//! `perm(e)` ([`Wiring::Scatter`]); checks consume slots in chain order. All
//! per-edge state in the decoders is indexed by slot.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::interleaver::{paper_interleaver, Permutation};
use crate::{Bit, Error, Result};

/// Information positions forced to 1 in the 192-bit frame.
pub const PAPER_PINNED: [usize; 8] = [3, 9, 11, 18, 19, 26, 27, 74];
pub const PAPER_K: usize = 192;
pub const PAPER_M: usize = 576;
pub const PAPER_EDGES: usize = 1344;

/// Edge-perspective repetition degree distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    terms: Vec<(usize, f64)>,
}

impl DegreeProfile {
    /// Merges repeated degrees and checks that the fractions sum to one.
    pub fn new(terms: &[(usize, f64)]) -> Result<Self> {
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for &(d, f) in terms {
            if d == 0 {
                return Err(Error::Parameter("degree must be positive".into()));
            }
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::Parameter(format!("fraction {f} for degree {d} outside (0, 1]")));
            }
            *merged.entry(d).or_insert(0.0) += f;
        }
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!("fractions sum to {total}, not 1")));
        }
        Ok(Self {
            terms: merged.into_iter().collect(),
        })
    }

    /// 0.2x^3 + 0.4x^7 + 0.1x^11 + 0.15x^7 + 0.1x^29 + 0.05x^31, the two x^7
    /// terms merged.
    pub fn paper() -> Self {
        Self::new(&[(3, 0.2), (7, 0.4), (11, 0.1), (7, 0.15), (29, 0.1), (31, 0.05)])
            .expect("paper profile sums to one")
    }

    /// `(degree, fraction)` pairs, ascending by degree.
    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }
}

impl FromStr for DegreeProfile {
    type Err = Error;

    /// `paper` or a list like `3:0.2,7:0.8`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "paper" {
            return Ok(Self::paper());
        }
        let terms = s
            .split(',')
            .map(|t| {
                let (d, f) = t
                    .split_once(':')
                    .ok_or_else(|| Error::Parameter(format!("bad profile term `{t}`")))?;
                let d = d.trim().parse().map_err(|_| Error::Parameter(format!("bad degree `{d}`")))?;
                let f = f.trim().parse().map_err(|_| Error::Parameter(format!("bad fraction `{f}`")))?;
                Ok((d, f))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&terms)
    }
}

/// Per-node repetition degrees for `k` information nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedDegrees {
    pub rep_degree: Vec<usize>,
}

impl RealizedDegrees {
    pub fn edges(&self) -> usize {
        self.rep_degree.iter().sum()
    }

    /// degree -> node count
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &d in &self.rep_degree {
            *h.entry(d).or_insert(0) += 1;
        }
        h
    }
}

/// Integer node counts per degree with exactly `k` nodes and `edges` edges,
/// closest in L1 to the profile's edge fractions.
///
/// Ties go to the candidate closest to the rounded node-perspective counts,
/// then to the one with more nodes at lower degrees.
pub fn realize_degrees(profile: &DegreeProfile, k: usize, edges: usize) -> Result<RealizedDegrees> {
    let degrees: Vec<usize> = profile.terms.iter().map(|t| t.0).collect();
    let fractions: Vec<f64> = profile.terms.iter().map(|t| t.1).collect();
    let node_weight: f64 = profile.terms.iter().map(|&(d, f)| f / d as f64).sum();
    let node_target: Vec<i64> = profile
        .terms
        .iter()
        .map(|&(d, f)| (k as f64 * (f / d as f64) / node_weight).round() as i64)
        .collect();

    let mut best: Option<(f64, i64, Vec<usize>)> = None;
    let mut counts = vec![0usize; degrees.len()];
    let mut consider = |counts: &[usize]| {
        let l1: f64 = counts
            .iter()
            .zip(&degrees)
            .zip(&fractions)
            .map(|((&c, &d), &f)| ((c * d) as f64 / edges as f64 - f).abs())
            .sum();
        let node_dist: i64 = counts
            .iter()
            .zip(&node_target)
            .map(|(&c, &t)| (c as i64 - t).abs())
            .sum();
        let better = match &best {
            None => true,
            Some((bl, bn, bc)) => {
                if (l1 - bl).abs() > 1e-12 {
                    l1 < *bl
                } else if node_dist != *bn {
                    node_dist < *bn
                } else {
                    counts > bc.as_slice()
                }
            }
        };
        if better {
            best = Some((l1, node_dist, counts.to_vec()));
        }
    };
    enumerate_counts(&degrees, degrees.len(), k, edges, &mut counts, &mut consider);

    let (_, _, counts) = best.ok_or_else(|| {
        let (lo, hi) = (degrees[0] * k, degrees[degrees.len() - 1] * k);
        Error::Construction(format!(
            "no assignment of {k} nodes over degrees {degrees:?} has {edges} edges \
             (reachable range {lo}..={hi}, gap {})",
            if edges < lo { lo - edges } else { edges.saturating_sub(hi) }
        ))
    })?;
    let rep_degree = degrees
        .iter()
        .zip(&counts)
        .flat_map(|(&d, &c)| std::iter::repeat_n(d, c))
        .collect();
    Ok(RealizedDegrees { rep_degree })
}

/// Fixes counts for degrees `[2..upto)` from the top down, then solves the
/// remaining 2x2 system for the two lowest degrees.
fn enumerate_counts(
    degrees: &[usize],
    upto: usize,
    nodes_left: usize,
    edges_left: usize,
    counts: &mut [usize],
    consider: &mut dyn FnMut(&[usize]),
) {
    match upto {
        0 => {}
        1 => {
            if degrees[0] * nodes_left == edges_left {
                counts[0] = nodes_left;
                consider(counts);
            }
        }
        2 => {
            let (d1, d2) = (degrees[0], degrees[1]);
            let base = d1 * nodes_left;
            if edges_left < base || (edges_left - base) % (d2 - d1) != 0 {
                return;
            }
            let n2 = (edges_left - base) / (d2 - d1);
            if n2 > nodes_left {
                return;
            }
            counts[0] = nodes_left - n2;
            counts[1] = n2;
            consider(counts);
        }
        _ => {
            let d = degrees[upto - 1];
            let lowest = degrees[0];
            for c in 0..=nodes_left.min(edges_left / d) {
                let (n, e) = (nodes_left - c, edges_left - c * d);
                // remaining nodes need at least the lowest degree each
                if e < n * lowest {
                    break;
                }
                counts[upto - 1] = c;
                enumerate_counts(degrees, upto - 1, n, e, counts, consider);
            }
            counts[upto - 1] = 0;
        }
    }
}

/// Check fan-ins taking values `floor(E/m)` and `ceil(E/m)`, spread evenly so
/// that the high-degree checks lead each block (3,2,2 for E=1344, m=576).
pub fn realize_check_degrees(edges: usize, m: usize) -> Result<Vec<usize>> {
    if m == 0 || edges < m {
        return Err(Error::Parameter(format!(
            "cannot spread {edges} edges over {m} checks"
        )));
    }
    let low = edges / m;
    let extra = edges - low * m;
    Ok((0..m)
        .map(|j| if (j * extra) % m < extra { low + 1 } else { low })
        .collect())
}

/// How the permutation connects repetition edges to combiner slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Wiring {
    /// `slot[i] = edge[perm(i)]`, the way a `dst[]` table is read.
    #[default]
    Gather,
    /// `slot[perm(e)] = edge[e]`.
    Scatter,
}

impl FromStr for Wiring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gather" => Ok(Self::Gather),
            "scatter" => Ok(Self::Scatter),
            other => Err(Error::Parameter(format!("unknown wiring `{other}` (gather|scatter)"))),
        }
    }
}

impl std::fmt::Display for Wiring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Gather => "gather",
            Self::Scatter => "scatter",
        })
    }
}

/// A realized IRA code with its Tanner graph in slot order.
#[derive(Debug, Clone, PartialEq)]
pub struct IraCode {
    k: usize,
    m: usize,
    rep_degree: Vec<usize>,
    perm: Permutation,
    wiring: Wiring,
    check_degree: Vec<usize>,
    pinned: Vec<(usize, Bit)>,
    /// slot -> information node
    slot_info: Vec<usize>,
    /// check j owns slots `check_offsets[j]..check_offsets[j + 1]`
    check_offsets: Vec<usize>,
    /// info node u owns `info_slots[info_offsets[u]..info_offsets[u + 1]]`
    info_offsets: Vec<usize>,
    info_slots: Vec<usize>,
}

impl IraCode {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Parity bits, also the number of checks.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Codeword length `k + m`.
    pub fn n(&self) -> usize {
        self.k + self.m
    }

    pub fn edges(&self) -> usize {
        self.slot_info.len()
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n() as f64
    }

    pub fn rep_degree(&self) -> &[usize] {
        &self.rep_degree
    }

    pub fn check_degree(&self) -> &[usize] {
        &self.check_degree
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn wiring(&self) -> Wiring {
        self.wiring
    }

    pub fn pinned(&self) -> &[(usize, Bit)] {
        &self.pinned
    }

    pub fn payload_len(&self) -> usize {
        self.k - self.pinned.len()
    }

    /// Returns a copy with a different pin list.
    pub fn with_pinned(&self, pinned: Vec<(usize, Bit)>) -> Result<Self> {
        validate_pins(&pinned, self.k)?;
        Ok(Self {
            pinned,
            ..self.clone()
        })
    }

    /// Combiner slots of check `j`.
    pub fn check_slots(&self, j: usize) -> std::ops::Range<usize> {
        self.check_offsets[j]..self.check_offsets[j + 1]
    }

    pub fn slot_info(&self) -> &[usize] {
        &self.slot_info
    }

    /// Information node feeding combiner slot `slot`.
    pub fn info_of_slot(&self, slot: usize) -> usize {
        self.slot_info[slot]
    }

    /// Combiner slots carrying copies of information node `u`.
    pub fn info_slots(&self, u: usize) -> &[usize] {
        &self.info_slots[self.info_offsets[u]..self.info_offsets[u + 1]]
    }

    /// Information nodes seen by check `j`, one per slot (repeats possible).
    pub fn check_info(&self, j: usize) -> &[usize] {
        &self.slot_info[self.check_slots(j)]
    }

    /// Variable nodes of check `j` in the full Tanner graph: information nodes
    /// `0..k` then parity nodes `k..k+m`. Parity `j` and, for `j > 0`, parity
    /// `j - 1` close the accumulator constraint.
    pub fn check_variables(&self, j: usize) -> Vec<usize> {
        let mut vars = self.check_info(j).to_vec();
        vars.push(self.k + j);
        if j > 0 {
            vars.push(self.k + j - 1);
        }
        vars
    }

    /// Full information vector with pins inserted and the payload in order.
    pub fn expand_payload(&self, payload: &[Bit]) -> Result<Vec<Bit>> {
        if payload.len() != self.payload_len() {
            return Err(Error::Parameter(format!(
                "payload has {} bits, code expects {}",
                payload.len(),
                self.payload_len()
            )));
        }
        let mut info = vec![0; self.k];
        let mut pinned = vec![false; self.k];
        for &(pos, bit) in &self.pinned {
            info[pos] = bit;
            pinned[pos] = true;
        }
        let mut src = payload.iter();
        for (bit, _) in info.iter_mut().zip(&pinned).filter(|(_, &p)| !p) {
            *bit = *src.next().expect("payload length checked");
        }
        Ok(info)
    }

    /// Payload bits (non-pinned positions) of an information vector.
    pub fn extract_payload(&self, info: &[Bit]) -> Vec<Bit> {
        let mut pinned = vec![false; self.k];
        for &(pos, _) in &self.pinned {
            pinned[pos] = true;
        }
        info.iter()
            .zip(&pinned)
            .filter(|(_, &p)| !p)
            .map(|(&b, _)| b)
            .collect()
    }

    /// Key-value text description: `k`, `m`, `rep_degree`, `check_degree`,
    /// `pinned` (`pos:bit` pairs) and the inline `perm`.
    pub fn to_text(&self) -> String {
        fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
            v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        }
        let mut out = String::new();
        let _ = writeln!(out, "# ira code, rate {}/{}", self.k, self.n());
        let _ = writeln!(out, "k {}", self.k);
        let _ = writeln!(out, "m {}", self.m);
        let _ = writeln!(out, "rep_degree {}", join(&self.rep_degree));
        let _ = writeln!(out, "check_degree {}", join(&self.check_degree));
        let _ = writeln!(
            out,
            "pinned {}",
            join(self.pinned.iter().map(|(p, b)| format!("{p}:{b}")))
        );
        let _ = writeln!(out, "wiring {}", self.wiring);
        let _ = writeln!(out, "perm {}", join(self.perm.as_slice()));
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            fields.insert(key, (idx + 1, rest.trim()));
        }
        let get = |key: &str| {
            fields.get(key).copied().ok_or(Error::Parse {
                line: 0,
                msg: format!("missing `{key}`"),
            })
        };
        let numbers = |key: &str| -> Result<Vec<usize>> {
            let (line, rest) = get(key)?;
            rest.split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad number `{t}` in `{key}`"),
                    })
                })
                .collect()
        };
        let k = *numbers("k")?.first().ok_or(Error::Parse { line: 0, msg: "empty `k`".into() })?;
        let m = *numbers("m")?.first().ok_or(Error::Parse { line: 0, msg: "empty `m`".into() })?;
        let rep = RealizedDegrees {
            rep_degree: numbers("rep_degree")?,
        };
        let check = numbers("check_degree")?;
        let perm = Permutation::new(numbers("perm")?)?;
        let pinned = match fields.get("pinned") {
            None => Vec::new(),
            Some(&(line, rest)) => rest
                .split_whitespace()
                .map(|t| {
                    let bad = || Error::Parse {
                        line,
                        msg: format!("bad pin `{t}`"),
                    };
                    let (p, b) = t.split_once(':').ok_or_else(bad)?;
                    let p: usize = p.parse().map_err(|_| bad())?;
                    let b: Bit = b.parse().map_err(|_| bad())?;
                    if b > 1 {
                        return Err(bad());
                    }
                    Ok((p, b))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let wiring = match fields.get("wiring") {
            None => Wiring::default(),
            Some(&(line, rest)) => rest.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad wiring `{rest}`"),
            })?,
        };
        let code = build_code_with(&rep, &perm, &check, &pinned, wiring)?;
        if code.k != k || code.m != m {
            return Err(Error::Structure(format!(
                "header says k={k}, m={m}; degree arrays give k={}, m={}",
                code.k, code.m
            )));
        }
        Ok(code)
    }
}

fn validate_pins(pinned: &[(usize, Bit)], k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    for &(pos, bit) in pinned {
        if pos >= k {
            return Err(Error::Construction(format!("pinned position {pos} outside 0..{k}")));
        }
        if bit > 1 {
            return Err(Error::Construction(format!("pinned value {bit} is not a bit")));
        }
        if std::mem::replace(&mut seen[pos], true) {
            return Err(Error::Construction(format!("pinned position {pos} repeated")));
        }
    }
    Ok(())
}

/// Wires the repetition stage through `perm` into the check chain with the
/// default [`Wiring::Gather`].
pub fn build_code(
    rep: &RealizedDegrees,
    perm: &Permutation,
    check_degree: &[usize],
    pinned: &[(usize, Bit)],
) -> Result<IraCode> {
    build_code_with(rep, perm, check_degree, pinned, Wiring::default())
}

pub fn build_code_with(
    rep: &RealizedDegrees,
    perm: &Permutation,
    check_degree: &[usize],
    pinned: &[(usize, Bit)],
    wiring: Wiring,
) -> Result<IraCode> {
    let edges = rep.edges();
    let check_edges: usize = check_degree.iter().sum();
    if perm.len() != edges || check_edges != edges {
        return Err(Error::Construction(format!(
            "edge counts disagree: repetition {edges}, interleaver {}, checks {check_edges}",
            perm.len()
        )));
    }
    if rep.rep_degree.is_empty() || check_degree.is_empty() {
        return Err(Error::Construction("code needs information and parity nodes".into()));
    }
    let k = rep.rep_degree.len();
    validate_pins(pinned, k)?;

    let edge_slot = match wiring {
        Wiring::Gather => perm.invert(),
        Wiring::Scatter => perm.clone(),
    };
    let mut slot_info = vec![0; edges];
    let mut info_offsets = Vec::with_capacity(k + 1);
    let mut info_slots = Vec::with_capacity(edges);
    let mut e = 0;
    info_offsets.push(0);
    for (u, &d) in rep.rep_degree.iter().enumerate() {
        for _ in 0..d {
            let slot = edge_slot.apply(e);
            slot_info[slot] = u;
            info_slots.push(slot);
            e += 1;
        }
        info_offsets.push(info_slots.len());
    }
    let mut check_offsets = Vec::with_capacity(check_degree.len() + 1);
    check_offsets.push(0);
    for &d in check_degree {
        check_offsets.push(check_offsets.last().unwrap() + d);
    }
    Ok(IraCode {
        k,
        m: check_degree.len(),
        rep_degree: rep.rep_degree.clone(),
        perm: perm.clone(),
        wiring,
        check_degree: check_degree.to_vec(),
        pinned: pinned.to_vec(),
        slot_info,
        check_offsets,
        info_offsets,
        info_slots,
    })
}

/// The 192-bit, rate-1/4 code with the eight pinned ones.
pub fn paper_code() -> IraCode {
    let rep = realize_degrees(&DegreeProfile::paper(), PAPER_K, PAPER_EDGES)
        .expect("paper profile is feasible");
    let check = realize_check_degrees(PAPER_EDGES, PAPER_M).expect("valid check spread");
    let pinned: Vec<(usize, Bit)> = PAPER_PINNED.iter().map(|&p| (p, 1)).collect();
    build_code(&rep, &paper_interleaver(), &check, &pinned).expect("paper code is consistent")
}

/// Systematic codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub systematic: Vec<Bit>,
    pub parity: Vec<Bit>,
}

impl Codeword {
    /// Transmission order: systematic bits, then parity.
    pub fn to_bits(&self) -> Vec<Bit> {
        let mut out = self.systematic.clone();
        out.extend_from_slice(&self.parity);
        out
    }
}

/// Running XOR, the 1/(1+D) filter.
pub fn accumulate(bits: &[Bit]) -> Vec<Bit> {
    let mut state = 0;
    bits.iter()
        .map(|&b| {
            state ^= b;
            state
        })
        .collect()
}

/// Combiner outputs: XOR of the information bits wired into each check.
pub fn combine(code: &IraCode, info: &[Bit]) -> Vec<Bit> {
    (0..code.m)
        .map(|j| code.check_info(j).iter().fold(0, |acc, &u| acc ^ info[u]))
        .collect()
}

/// Encodes a payload of `k - |pinned|` bits.
pub fn encode(code: &IraCode, payload: &[Bit]) -> Result<Codeword> {
    let info = code.expand_payload(payload)?;
    Ok(encode_info(code, &info))
}

/// Encodes a full information vector (pins are not enforced).
pub fn encode_info(code: &IraCode, info: &[Bit]) -> Codeword {
    assert_eq!(info.len(), code.k, "information vector length");
    let parity = accumulate(&combine(code, info));
    Codeword {
        systematic: info.to_vec(),
        parity,
    }
}

/// Indices of the parity constraints violated by `word`.
pub fn failed_checks(code: &IraCode, word: &Codeword) -> Vec<usize> {
    let c = combine(code, &word.systematic);
    (0..code.m)
        .filter(|&j| {
            let prev = if j > 0 { word.parity[j - 1] } else { 0 };
            c[j] ^ word.parity[j] ^ prev != 0
        })
        .collect()
}

/// All parity constraints hold and every pinned position carries its value.
pub fn check_codeword(code: &IraCode, word: &Codeword) -> bool {
    if word.systematic.len() != code.k || word.parity.len() != code.m {
        return false;
    }
    code.pinned.iter().all(|&(p, b)| word.systematic[p] == b) && failed_checks(code, word).is_empty()
}
