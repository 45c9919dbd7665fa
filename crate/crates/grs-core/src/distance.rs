//! Exact error-distance computation via two independent engines, plus the
//! degree-based bound sandwich, producing checkable certificates.
//!
//! The exhaustive engine minimizes Hamming distance over all q^k codewords.
//! The subsets engine maximizes agreement counts instead: every polynomial of
//! degree < k through some k positions of the word is interpolated and
//! re-scored against all n positions. Both search spaces are partitioned into
//! fixed chunks and merged with a deterministic tie-break, so results do not
//! depend on the worker count.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::code::{GrsCode, Word};
use crate::error::{Error, Result};
use crate::gf::Element;
use crate::poly::{lagrange_interpolate, Degree, Polynomial};

/// Search-space caps; the engines fail loudly instead of hanging.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Max codewords the exhaustive engine may scan.
    pub codewords: u64,
    /// Max position subsets the subsets engine may interpolate.
    pub subsets: u64,
    /// Certificates list every nearest message up to this count, beyond it
    /// only the smallest, plus the exact count either way.
    pub nearest_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { codewords: 1 << 24, subsets: 1 << 24, nearest_cap: 64 }
    }
}

impl Budget {
    pub fn with_limit(limit: u64) -> Self {
        Budget { codewords: limit, subsets: limit, ..Budget::default() }
    }
}

/// Which algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Exhaustive,
    Subsets,
    /// Run both and insist they agree.
    Cross,
    /// Pick the cheaper single engine from the search-space sizes.
    Auto,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Engine::Exhaustive),
            "subsets" => Ok(Engine::Subsets),
            "cross" => Ok(Engine::Cross),
            "auto" => Ok(Engine::Auto),
            other => Err(Error::PreconditionViolated(format!(
                "unknown engine {other:?} (expected exhaustive|subsets|cross|auto)"
            ))),
        }
    }
}

/// Exact error distance plus everything needed to check it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceCertificate {
    pub distance: usize,
    /// n - distance: best agreement count over messages of degree < k.
    pub max_agreements: usize,
    /// distance == n - k, the covering radius.
    pub is_deep_hole: bool,
    /// Exact number of messages attaining the minimum.
    pub nearest_count: u64,
    /// All minimizers in ascending message order if they fit the cap,
    /// otherwise just the smallest.
    pub nearest_messages: Vec<Polynomial>,
    pub engine: &'static str,
}

impl DistanceCertificate {
    fn agrees_with(&self, other: &Self) -> bool {
        self.distance == other.distance
            && self.max_agreements == other.max_agreements
            && self.nearest_count == other.nearest_count
            && self.nearest_messages == other.nearest_messages
    }
}

/// Optimum shared by both engines before it is dressed up as a certificate:
/// message digit vectors are fixed-length k, low-to-high.
struct Optimum {
    distance: usize,
    count: u64,
    messages: Vec<Vec<u16>>,
}

fn finalize(code: &GrsCode, opt: Optimum, cap: usize, engine: &'static str) -> DistanceCertificate {
    let field = code.field();
    let keep = if opt.count as usize <= cap { opt.messages.len() } else { 1 };
    let nearest_messages = opt.messages[..keep.min(opt.messages.len())]
        .iter()
        .map(|digits| {
            Polynomial::new(field.clone(), digits.iter().map(|&d| Element(d)).collect())
        })
        .collect();
    DistanceCertificate {
        distance: opt.distance,
        max_agreements: code.n() - opt.distance,
        is_deep_hole: opt.distance == code.covering_radius(),
        nearest_count: opt.count,
        nearest_messages,
        engine,
    }
}

fn digits_of(mut index: u64, q: u64, len: usize) -> Vec<u16> {
    let mut digits = vec![0u16; len];
    for d in digits.iter_mut() {
        *d = (index % q) as u16;
        index /= q;
    }
    digits
}

/// Minimum Hamming distance over every codeword, by definition.
///
/// The message space is walked as a base-q odometer while the codeword is
/// updated incrementally; chunks of fixed size are scanned in parallel and
/// merged in index order.
pub fn error_distance_exhaustive(
    code: &GrsCode,
    u: &Word,
    budget: &Budget,
) -> Result<DistanceCertificate> {
    code.eval_set().check_word(u)?;
    let total_wide = code.codeword_count().unwrap_or(u128::MAX);
    if total_wide > budget.codewords as u128 {
        return Err(Error::BudgetExceeded { required: total_wide, budget: budget.codewords });
    }
    let total = total_wide as u64;
    let pows = code.point_powers();
    let cap = budget.nearest_cap;

    const CHUNK: u64 = 1 << 13;
    let chunk_count = total.div_ceil(CHUNK);
    let chunks: Vec<Optimum> = (0..chunk_count)
        .into_par_iter()
        .map(|c| {
            scan_message_range(code, u, &pows, c * CHUNK, ((c + 1) * CHUNK).min(total), cap)
        })
        .collect();

    let mut merged = Optimum { distance: usize::MAX, count: 0, messages: Vec::new() };
    for chunk in chunks {
        if chunk.distance < merged.distance {
            merged = chunk;
        } else if chunk.distance == merged.distance {
            merged.count += chunk.count;
            for msg in chunk.messages {
                if merged.messages.len() <= cap {
                    merged.messages.push(msg);
                }
            }
        }
    }
    Ok(finalize(code, merged, cap, "exhaustive"))
}

fn scan_message_range(
    code: &GrsCode,
    u: &Word,
    pows: &[Vec<Element>],
    start: u64,
    end: u64,
    cap: usize,
) -> Optimum {
    let field = code.field();
    let q = field.order() as u64;
    let target = u.entries();

    let mut digits = digits_of(start, q, code.k());
    let mut word: Vec<Element> = (0..code.n())
        .map(|t| {
            let mut acc = Element::ZERO;
            for (i, &d) in digits.iter().enumerate() {
                acc = field.add(acc, field.mul(Element(d), pows[i][t]));
            }
            acc
        })
        .collect();

    let mut best = Optimum { distance: usize::MAX, count: 0, messages: Vec::new() };
    let mut index = start;
    loop {
        let dist = word.iter().zip(target).filter(|(a, b)| a != b).count();
        if dist < best.distance {
            best.distance = dist;
            best.count = 1;
            best.messages.clear();
            best.messages.push(digits.clone());
        } else if dist == best.distance {
            best.count += 1;
            if best.messages.len() <= cap {
                best.messages.push(digits.clone());
            }
        }

        index += 1;
        if index == end {
            return best;
        }
        for (i, digit) in digits.iter_mut().enumerate() {
            let old = Element(*digit);
            let wrapped = (*digit as u64 + 1) == q;
            let new = if wrapped { Element::ZERO } else { Element(*digit + 1) };
            *digit = new.0;
            let delta = field.sub(new, old);
            for (w, p) in word.iter_mut().zip(&pows[i]) {
                *w = field.add(*w, field.mul(delta, *p));
            }
            if !wrapped {
                break;
            }
        }
    }
}

/// C(n, k), saturating at u128::MAX.
fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Lexicographically next k-combination of 0..n; false when exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for t in i + 1..k {
                combo[t] = combo[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The k-combination of 0..n at `rank` in lexicographic order.
fn unrank_combination(mut rank: u128, n: usize, k: usize) -> Vec<usize> {
    let mut combo = Vec::with_capacity(k);
    let mut next = 0;
    for remaining in (1..=k).rev() {
        let mut c = next;
        loop {
            let block = binomial(n - c - 1, remaining - 1);
            if rank < block {
                break;
            }
            rank -= block;
            c += 1;
        }
        combo.push(c);
        next = c + 1;
    }
    combo
}

/// Maximizes agreements: interpolate through every k-subset of positions and
/// rescore against the whole word. Every minimizer of the exhaustive engine
/// agrees on at least k positions, so interpolating any k of them recovers
/// it; the two engines therefore certify the same optimum set.
pub fn error_distance_subsets(
    code: &GrsCode,
    u: &Word,
    budget: &Budget,
) -> Result<DistanceCertificate> {
    code.eval_set().check_word(u)?;
    let n = code.n();
    let k = code.k();
    let total = binomial(n, k);
    if total > budget.subsets as u128 {
        return Err(Error::BudgetExceeded { required: total, budget: budget.subsets });
    }

    const CHUNK: u128 = 1 << 12;
    let chunk_count = total.div_ceil(CHUNK);
    // best agreement count and the set of messages attaining it, keyed by
    // reversed digits so set order is ascending message index
    let chunks: Vec<(usize, BTreeSet<Vec<u16>>)> = (0..chunk_count as u64)
        .into_par_iter()
        .map(|c| {
            scan_subset_range(
                code,
                u,
                (c as u128) * CHUNK,
                ((c as u128 + 1) * CHUNK).min(total),
            )
        })
        .collect();

    let mut best_agreements = 0usize;
    let mut keys: BTreeSet<Vec<u16>> = BTreeSet::new();
    for (agreements, chunk_keys) in chunks {
        if agreements > best_agreements {
            best_agreements = agreements;
            keys = chunk_keys;
        } else if agreements == best_agreements {
            keys.extend(chunk_keys);
        }
    }

    if best_agreements < k {
        // a k-point interpolant always agrees on its own k positions
        return Err(Error::EngineMismatch(format!(
            "subsets engine found only {best_agreements} agreements, below k={k}"
        )));
    }

    let cap = budget.nearest_cap;
    let mut messages = Vec::new();
    for key in &keys {
        if messages.len() > cap {
            break;
        }
        let mut digits = key.clone();
        digits.reverse();
        messages.push(digits);
    }
    let opt = Optimum {
        distance: n - best_agreements,
        count: keys.len() as u64,
        messages,
    };
    Ok(finalize(code, opt, cap, "subsets"))
}

fn scan_subset_range(
    code: &GrsCode,
    u: &Word,
    start: u128,
    end: u128,
) -> (usize, BTreeSet<Vec<u16>>) {
    let field = code.field();
    let points = code.eval_set().points();
    let entries = u.entries();
    let n = code.n();
    let k = code.k();

    let mut combo = unrank_combination(start, n, k);
    let mut best = 0usize;
    let mut keys: BTreeSet<Vec<u16>> = BTreeSet::new();
    let mut rank = start;
    loop {
        let sample: Vec<(Element, Element)> =
            combo.iter().map(|&t| (points[t], entries[t])).collect();
        let h = lagrange_interpolate(field, &sample).expect("subset abscissae are distinct");
        let agreements = points
            .iter()
            .zip(entries)
            .filter(|&(&x, &y)| h.eval(x) == y)
            .count();
        debug_assert!(agreements >= k);
        if agreements > best {
            best = agreements;
            keys.clear();
        }
        if agreements == best {
            let mut key: Vec<u16> = vec![0; k];
            for (i, &c) in h.coeffs().iter().enumerate() {
                key[k - 1 - i] = c.0;
            }
            keys.insert(key);
        }

        rank += 1;
        if rank == end {
            return (best, keys);
        }
        let more = next_combination(&mut combo, n);
        debug_assert!(more, "rank bounds guarantee another combination");
    }
}

/// Degree-based sandwich: (0, 0) for codewords, otherwise
/// (n - deg(u), n - k) for k <= deg(u) <= n-1.
pub fn distance_bounds(code: &GrsCode, u: &Word) -> Result<(usize, usize)> {
    let n = code.n();
    let k = code.k();
    match code.eval_set().word_degree(u)? {
        d if d.at_most(k - 1) => Ok((0, 0)),
        Degree::Finite(d) => Ok((n - d, n - k)),
        Degree::NegInf => unreachable!("NegInf passes every at_most bound"),
    }
}

/// Runs both engines and insists on identical certificates; a disagreement is
/// a bug in one of them and aborts loudly.
pub fn cross_check(code: &GrsCode, u: &Word, budget: &Budget) -> Result<DistanceCertificate> {
    let exhaustive = error_distance_exhaustive(code, u, budget)?;
    let subsets = error_distance_subsets(code, u, budget)?;
    if !exhaustive.agrees_with(&subsets) {
        return Err(Error::EngineMismatch(format!(
            "exhaustive found d={} ({} nearest), subsets found d={} ({} nearest) for word {}",
            exhaustive.distance,
            exhaustive.nearest_count,
            subsets.distance,
            subsets.nearest_count,
            u.to_csv(),
        )));
    }
    Ok(DistanceCertificate { engine: "cross", ..exhaustive })
}

/// Dispatches on the engine choice; `Auto` compares the work estimates
/// C(n,k) * k^2 against q^k * n and picks the cheaper side.
pub fn error_distance(
    code: &GrsCode,
    u: &Word,
    engine: Engine,
    budget: &Budget,
) -> Result<DistanceCertificate> {
    match engine {
        Engine::Exhaustive => error_distance_exhaustive(code, u, budget),
        Engine::Subsets => error_distance_subsets(code, u, budget),
        Engine::Cross => cross_check(code, u, budget),
        Engine::Auto => {
            let k = code.k();
            let subset_cost = binomial(code.n(), k).saturating_mul((k * k) as u128);
            let exhaustive_cost = code
                .codeword_count()
                .unwrap_or(u128::MAX)
                .saturating_mul(code.n() as u128);
            if subset_cost < exhaustive_cost {
                error_distance_subsets(code, u, budget)
            } else {
                error_distance_exhaustive(code, u, budget)
            }
        }
    }
}
