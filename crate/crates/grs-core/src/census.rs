//! Exhaustive classification of the word space for small parameters, either
//! word by word or one scale-and-shift orbit at a time, reporting deep-hole
//! inventories per class.
//!
//! Orbit mode enumerates canonical forms (monic high parts of degree k..n-1,
//! plus the codeword class), classifies one representative each, and scales
//! counts by the orbit size. Full mode enumerates every word. Both modes
//! produce identical totals, which the tests insist on.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{GrsCode, Word};
use crate::deephole::{canonical_form, orbit_size, reciprocal_word, CanonicalForm};
use crate::distance::{cross_check, Budget, DistanceCertificate};
use crate::error::{Error, Result};
use crate::gf::Element;
use crate::poly::Degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Orbits,
    Full,
}

impl CensusMode {
    pub fn label(self) -> &'static str {
        match self {
            CensusMode::Orbits => "orbits",
            CensusMode::Full => "full",
        }
    }
}

impl std::str::FromStr for CensusMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orbits" => Ok(CensusMode::Orbits),
            "full" => Ok(CensusMode::Full),
            other => Err(Error::PreconditionViolated(format!(
                "unknown census mode {other:?} (expected orbits|full)"
            ))),
        }
    }
}

/// Classification labels, in precedence order for deep holes: a degree-k deep
/// hole counts as TRIVIAL even when it also matches a constructed form; the
/// overlap is tallied separately so nothing is double-counted silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WordClass {
    #[serde(rename = "CODEWORD")]
    Codeword,
    #[serde(rename = "TRIVIAL_DEEP_HOLE")]
    TrivialDeepHole,
    #[serde(rename = "THEOREM_DEEP_HOLE")]
    TheoremDeepHole,
    #[serde(rename = "OTHER_DEEP_HOLE")]
    OtherDeepHole,
    #[serde(rename = "ORDINARY")]
    Ordinary,
}

impl WordClass {
    pub fn label(self) -> &'static str {
        match self {
            WordClass::Codeword => "CODEWORD",
            WordClass::TrivialDeepHole => "TRIVIAL_DEEP_HOLE",
            WordClass::TheoremDeepHole => "THEOREM_DEEP_HOLE",
            WordClass::OtherDeepHole => "OTHER_DEEP_HOLE",
            WordClass::Ordinary => "ORDINARY",
        }
    }
}

/// Everything learned about one word.
#[derive(Debug, Clone)]
pub struct Classification {
    pub class: WordClass,
    pub certificate: DistanceCertificate,
    pub canonical: CanonicalForm,
    pub degree: Degree,
    /// Deep hole that is both degree-k and matches a constructed-class form.
    pub trivial_and_theorem: bool,
}

/// Reusable classifier; precomputes the canonical forms of the constructed
/// words 1/(x - a_j) once per code.
pub struct Classifier<'a> {
    code: &'a GrsCode,
    budget: Budget,
    theorem_forms: Vec<CanonicalForm>,
}

impl<'a> Classifier<'a> {
    pub fn new(code: &'a GrsCode, budget: Budget) -> Result<Self> {
        let mut theorem_forms = Vec::new();
        for &a in code.eval_set().excluded() {
            let form = canonical_form(code, &reciprocal_word(code, a)?)?;
            if !theorem_forms.contains(&form) {
                theorem_forms.push(form);
            }
        }
        Ok(Classifier { code, budget, theorem_forms })
    }

    pub fn theorem_forms(&self) -> &[CanonicalForm] {
        &self.theorem_forms
    }

    pub fn classify(&self, u: &Word) -> Result<Classification> {
        let code = self.code;
        let certificate = cross_check(code, u, &self.budget)?;
        let degree = code.eval_set().word_degree(u)?;
        let canonical = canonical_form(code, u)?;
        let (class, trivial_and_theorem) = if certificate.distance == 0 {
            (WordClass::Codeword, false)
        } else if certificate.distance == code.covering_radius() {
            let trivial = degree == Degree::Finite(code.k());
            let theorem = self.theorem_forms.contains(&canonical);
            let class = if trivial {
                WordClass::TrivialDeepHole
            } else if theorem {
                WordClass::TheoremDeepHole
            } else {
                WordClass::OtherDeepHole
            };
            (class, trivial && theorem)
        } else {
            (WordClass::Ordinary, false)
        };
        Ok(Classification { class, certificate, canonical, degree, trivial_and_theorem })
    }
}

/// One-off classification of a single word.
pub fn classify_word(code: &GrsCode, u: &Word, budget: &Budget) -> Result<Classification> {
    Classifier::new(code, *budget)?.classify(u)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusParams {
    pub field: String,
    pub p: u32,
    pub m: u32,
    pub q: u32,
    pub modulus_index: Option<u64>,
    pub excluded: Vec<u64>,
    pub k: usize,
    pub n: usize,
    pub mode: CensusMode,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overlaps {
    pub trivial_and_theorem: u128,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusTotals {
    pub words: u128,
    pub codewords: u128,
    pub deep_holes: u128,
    pub trivial: u128,
    pub theorem: u128,
    pub other: u128,
    pub overlaps: Overlaps,
}

/// Word counts bucketed by interpolation degree (None for the zero word) and
/// error distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramEntry {
    pub degree: Option<u64>,
    pub distance: u64,
    pub count: u128,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCounts {
    pub codeword: u64,
    pub trivial: u64,
    pub theorem: u64,
    pub other: u64,
    pub ordinary: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EngineMeta {
    pub distance_engine: &'static str,
    pub mode: CensusMode,
    pub records: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub params: CensusParams,
    pub totals: CensusTotals,
    pub histogram: Vec<HistogramEntry>,
    pub orbits: OrbitCounts,
    pub engine: EngineMeta,
    /// Wall-clock time; kept out of the serialized report so identical runs
    /// stay byte-identical.
    #[serde(skip)]
    pub runtime_ms: u128,
}

/// One emitted record: an orbit in orbit mode, a single word in full mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    pub seq: u64,
    pub canonical_form: String,
    pub degree: Option<u64>,
    pub distance: u64,
    pub class: WordClass,
    /// How many words this record accounts for.
    pub words: u128,
    pub trivial_and_theorem: bool,
}

/// Running census state; serializable so interrupted runs can resume from the
/// last emitted record.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CensusAccumulator {
    totals: CensusTotals,
    histogram: Vec<HistogramEntry>,
    orbit_counts: OrbitCounts,
    /// Full mode only: canonical form -> class, so orbits are counted once.
    seen_forms: BTreeMap<String, WordClass>,
}

impl CensusAccumulator {
    fn bump_histogram(&mut self, degree: Option<u64>, distance: u64, count: u128) {
        let key = |d: Option<u64>, dist: u64| (d.map_or(-1i128, |v| v as i128), dist);
        let target = key(degree, distance);
        match self
            .histogram
            .binary_search_by_key(&target, |e| key(e.degree, e.distance))
        {
            Ok(i) => self.histogram[i].count += count,
            Err(i) => self
                .histogram
                .insert(i, HistogramEntry { degree, distance, count }),
        }
    }

    pub fn absorb(&mut self, record: &CensusRecord, q: u32, k: usize, mode: CensusMode) {
        let w = record.words;
        self.totals.words += w;
        match record.class {
            WordClass::Codeword => self.totals.codewords += w,
            WordClass::TrivialDeepHole => {
                self.totals.deep_holes += w;
                self.totals.trivial += w;
            }
            WordClass::TheoremDeepHole => {
                self.totals.deep_holes += w;
                self.totals.theorem += w;
            }
            WordClass::OtherDeepHole => {
                self.totals.deep_holes += w;
                self.totals.other += w;
            }
            WordClass::Ordinary => {}
        }
        if record.trivial_and_theorem {
            self.totals.overlaps.trivial_and_theorem += w;
        }

        if mode == CensusMode::Orbits && record.class == WordClass::Codeword {
            // the codeword class mixes degrees: one zero word plus
            // (q-1) q^d polynomials of each degree d < k, all at distance 0
            self.bump_histogram(None, 0, 1);
            for d in 0..k {
                let count = (q as u128 - 1) * (q as u128).pow(d as u32);
                self.bump_histogram(Some(d as u64), 0, count);
            }
        } else {
            self.bump_histogram(record.degree, record.distance, w);
        }

        match mode {
            CensusMode::Orbits => {
                let slot = match record.class {
                    WordClass::Codeword => &mut self.orbit_counts.codeword,
                    WordClass::TrivialDeepHole => &mut self.orbit_counts.trivial,
                    WordClass::TheoremDeepHole => &mut self.orbit_counts.theorem,
                    WordClass::OtherDeepHole => &mut self.orbit_counts.other,
                    WordClass::Ordinary => &mut self.orbit_counts.ordinary,
                };
                *slot += 1;
            }
            CensusMode::Full => {
                self.seen_forms
                    .insert(record.canonical_form.clone(), record.class);
            }
        }
    }

    pub fn totals(&self) -> &CensusTotals {
        &self.totals
    }

    fn orbit_counts(&self, mode: CensusMode) -> OrbitCounts {
        match mode {
            CensusMode::Orbits => self.orbit_counts,
            CensusMode::Full => {
                let mut counts = OrbitCounts::default();
                for class in self.seen_forms.values() {
                    match class {
                        WordClass::Codeword => counts.codeword += 1,
                        WordClass::TrivialDeepHole => counts.trivial += 1,
                        WordClass::TheoremDeepHole => counts.theorem += 1,
                        WordClass::OtherDeepHole => counts.other += 1,
                        WordClass::Ordinary => counts.ordinary += 1,
                    }
                }
                counts
            }
        }
    }
}

/// Stable identity of a census run, stored in checkpoints so a resume cannot
/// silently continue someone else's run.
pub fn params_key(code: &GrsCode, mode: CensusMode) -> String {
    let excluded: Vec<String> = code
        .eval_set()
        .excluded()
        .iter()
        .map(|e| e.to_string())
        .collect();
    format!(
        "field={};exclude={};k={};mode={}",
        code.field().spec_string(),
        excluded.join(","),
        code.k(),
        mode.label()
    )
}

fn census_params(code: &GrsCode, mode: CensusMode) -> CensusParams {
    let field = code.field();
    CensusParams {
        field: field.spec_string(),
        p: field.p(),
        m: field.m(),
        q: field.order(),
        modulus_index: field.modulus_index(),
        excluded: code
            .eval_set()
            .excluded()
            .iter()
            .map(|e| e.index() as u64)
            .collect(),
        k: code.k(),
        n: code.n(),
        mode,
    }
}

/// Number of records a census of this code emits in the given mode:
/// canonical forms (orbit mode) or words (full mode).
pub fn record_count(code: &GrsCode, mode: CensusMode) -> Option<u128> {
    let q = code.field().order() as u128;
    match mode {
        CensusMode::Full => q.checked_pow(code.n() as u32),
        CensusMode::Orbits => {
            let mut total: u128 = 1; // the codeword class
            for d in code.k()..code.n() {
                total = total.checked_add(q.checked_pow((d - code.k()) as u32)?)?;
            }
            Some(total)
        }
    }
}

/// Representative word of the orbit-mode record at `seq`: the zero word for
/// seq 0, otherwise the evaluation of the canonical form enumerated by
/// high-part degree ascending, then coefficient index ascending.
fn orbit_representative(code: &GrsCode, seq: u64) -> Word {
    if seq == 0 {
        return Word::zero(code.n());
    }
    let field = code.field().clone();
    let q = field.order() as u64;
    let k = code.k();
    let mut local = seq - 1;
    let mut degree = k;
    loop {
        let block = q.pow((degree - k) as u32);
        if local < block {
            break;
        }
        local -= block;
        degree += 1;
    }
    let mut coeffs = vec![Element::ZERO; degree + 1];
    coeffs[degree] = Element::ONE;
    for c in coeffs.iter_mut().take(degree).skip(k) {
        *c = Element((local % q) as u16);
        local /= q;
    }
    let form = crate::poly::Polynomial::new(field, coeffs);
    code.eval_set().evaluate(&form).expect("same field")
}

fn word_at_index(code: &GrsCode, mut index: u64) -> Word {
    let q = code.field().order() as u64;
    let entries = (0..code.n())
        .map(|_| {
            let e = Element((index % q) as u16);
            index /= q;
            e
        })
        .collect();
    Word::new(entries)
}

fn make_record(
    code: &GrsCode,
    classifier: &Classifier,
    mode: CensusMode,
    seq: u64,
) -> Result<CensusRecord> {
    let rep = match mode {
        CensusMode::Orbits => orbit_representative(code, seq),
        CensusMode::Full => word_at_index(code, seq),
    };
    let cls = classifier.classify(&rep)?;
    let words = match mode {
        CensusMode::Full => 1,
        CensusMode::Orbits if seq == 0 => code.codeword_count().expect("within budget"),
        CensusMode::Orbits => orbit_size(code),
    };
    let degree = match mode {
        // the codeword class mixes degrees; single words report their own
        CensusMode::Orbits if seq == 0 => None,
        _ => cls.degree.finite().map(|d| d as u64),
    };
    Ok(CensusRecord {
        seq,
        canonical_form: cls.canonical.to_csv(),
        degree,
        distance: cls.certificate.distance as u64,
        class: cls.class,
        words,
        trivial_and_theorem: cls.trivial_and_theorem,
    })
}

/// Runs a census, emitting one record per orbit (or word) in a fixed order.
///
/// Records are classified in parallel chunks but absorbed and handed to
/// `on_record` strictly in sequence, so emission and checkpoints are
/// deterministic. `resume` restarts after the given number of records with
/// the accumulator they produced.
pub fn run_census<F>(
    code: &GrsCode,
    mode: CensusMode,
    budget: &Budget,
    resume: Option<(u64, CensusAccumulator)>,
    mut on_record: F,
) -> Result<CensusReport>
where
    F: FnMut(&CensusRecord, &CensusAccumulator) -> Result<()>,
{
    let started = Instant::now();
    let q = code.field().order();
    let k = code.k();

    let too_big = Error::BudgetExceeded { required: u128::MAX, budget: budget.codewords };
    let total_words = (q as u128)
        .checked_pow(code.n() as u32)
        .ok_or(too_big.clone())?;
    let records_wide = record_count(code, mode).ok_or(too_big)?;
    if records_wide > budget.codewords as u128 {
        return Err(Error::BudgetExceeded {
            required: records_wide,
            budget: budget.codewords,
        });
    }
    let total_records = records_wide as u64;
    let _ = total_words; // countability guard only

    let classifier = Classifier::new(code, *budget)?;
    let (mut next, mut acc) = resume.unwrap_or_default();
    if next > total_records {
        return Err(Error::PreconditionViolated(format!(
            "resume point {next} beyond the {total_records} records of this census"
        )));
    }

    const CHUNK: u64 = 256;
    while next < total_records {
        let end = (next + CHUNK).min(total_records);
        let records: Vec<CensusRecord> = (next..end)
            .into_par_iter()
            .map(|seq| make_record(code, &classifier, mode, seq))
            .collect::<Result<Vec<_>>>()?;
        for record in &records {
            acc.absorb(record, q, k, mode);
            on_record(record, &acc)?;
        }
        next = end;
    }

    Ok(CensusReport {
        params: census_params(code, mode),
        totals: acc.totals,
        histogram: acc.histogram.clone(),
        orbits: acc.orbit_counts(mode),
        engine: EngineMeta {
            distance_engine: "cross",
            mode,
            records: total_records,
        },
        runtime_ms: started.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::EvaluationSet;
    use crate::gf::FiniteField;
    use std::sync::Arc;

    fn punctured_code(q: u32, excluded: &[u64], k: usize) -> GrsCode {
        let field: Arc<FiniteField> = match q {
            4 => FiniteField::extension(2, 2).unwrap(),
            8 => FiniteField::extension(2, 3).unwrap(),
            9 => FiniteField::extension(3, 2).unwrap(),
            p => FiniteField::prime(p).unwrap(),
        };
        let excl: Vec<Element> = excluded.iter().map(|&i| field.element(i).unwrap()).collect();
        GrsCode::new(EvaluationSet::puncture(field, &excl).unwrap(), k).unwrap()
    }

    fn run(code: &GrsCode, mode: CensusMode) -> CensusReport {
        run_census(code, mode, &Budget::default(), None, |_, _| Ok(())).unwrap()
    }

    #[test]
    fn gf4_census_golden() {
        // rho = 1 makes every non-codeword a deep hole; the single deep-hole
        // orbit has degree k, so the constructed class is swallowed by the
        // trivial one and shows up only in the overlap counter
        let code = punctured_code(4, &[0], 2);
        for mode in [CensusMode::Orbits, CensusMode::Full] {
            let report = run(&code, mode);
            assert_eq!(report.totals.words, 64);
            assert_eq!(report.totals.codewords, 16);
            assert_eq!(report.totals.deep_holes, 48);
            assert_eq!(report.totals.trivial, 48);
            assert_eq!(report.totals.theorem, 0);
            assert_eq!(report.totals.other, 0);
            assert_eq!(report.totals.overlaps.trivial_and_theorem, 48);
            assert_eq!(report.orbits.codeword, 1);
            assert_eq!(report.orbits.trivial, 1);
        }
    }

    #[test]
    fn gf5_census_golden_and_mode_agreement() {
        let code = punctured_code(5, &[0], 2);
        let orbit_report = run(&code, CensusMode::Orbits);
        let full_report = run(&code, CensusMode::Full);

        for report in [&orbit_report, &full_report] {
            assert_eq!(report.totals.words, 625);
            assert_eq!(report.totals.codewords, 25);
            assert_eq!(report.totals.trivial, 100);
            assert_eq!(report.totals.theorem, 100);
            assert_eq!(report.totals.overlaps.trivial_and_theorem, 0);
            assert!(report.totals.deep_holes >= 200);
        }
        assert_eq!(orbit_report.totals, full_report.totals);
        assert_eq!(orbit_report.histogram, full_report.histogram);
        assert_eq!(orbit_report.orbits, full_report.orbits);

        // histogram covers the whole space exactly once
        let total: u128 = full_report.histogram.iter().map(|e| e.count).sum();
        assert_eq!(total, 625);
        // at least one word sits at the covering radius
        assert!(full_report
            .histogram
            .iter()
            .any(|e| e.distance == code.covering_radius() as u64 && e.count > 0));
    }

    #[test]
    fn classify_examples() {
        let code = punctured_code(5, &[0], 2);
        let budget = Budget::default();
        let field = code.field();

        let constructed = Word::parse(field, "1,3,2,4").unwrap();
        let cls = classify_word(&code, &constructed, &budget).unwrap();
        assert_eq!(cls.class, WordClass::TheoremDeepHole);
        assert!(!cls.trivial_and_theorem);

        let degree_k = Word::parse(field, "1,4,4,1").unwrap();
        let cls = classify_word(&code, &degree_k, &budget).unwrap();
        assert_eq!(cls.class, WordClass::TrivialDeepHole);

        let msg = crate::poly::Polynomial::from_indices(field.clone(), &[1, 1]).unwrap();
        let cls = classify_word(&code, &code.encode(&msg).unwrap(), &budget).unwrap();
        assert_eq!(cls.class, WordClass::Codeword);

        // one corrupted position: distance 1, below the covering radius
        let near = Word::parse(field, "2,3,4,1").unwrap();
        let cls = classify_word(&code, &near, &budget).unwrap();
        assert_eq!(cls.class, WordClass::Ordinary);
    }

    #[test]
    fn resume_reproduces_the_full_run() {
        let code = punctured_code(5, &[0], 2);
        let budget = Budget::default();

        let mut all_records = Vec::new();
        let full = run_census(&code, CensusMode::Orbits, &budget, None, |r, _| {
            all_records.push(r.clone());
            Ok(())
        })
        .unwrap();

        // rebuild the accumulator from a prefix, then resume
        let cut = 3.min(all_records.len());
        let mut acc = CensusAccumulator::default();
        for record in &all_records[..cut] {
            acc.absorb(record, code.field().order(), code.k(), CensusMode::Orbits);
        }
        let mut resumed_records = Vec::new();
        let resumed = run_census(
            &code,
            CensusMode::Orbits,
            &budget,
            Some((cut as u64, acc)),
            |r, _| {
                resumed_records.push(r.clone());
                Ok(())
            },
        )
        .unwrap();

        assert_eq!(resumed.totals, full.totals);
        assert_eq!(resumed.histogram, full.histogram);
        assert_eq!(resumed.orbits, full.orbits);
        assert_eq!(resumed_records, all_records[cut..]);

        // resuming a finished run emits nothing and reports the same totals
        let mut acc = CensusAccumulator::default();
        for record in &all_records {
            acc.absorb(record, code.field().order(), code.k(), CensusMode::Orbits);
        }
        let total = all_records.len() as u64;
        let finished = run_census(&code, CensusMode::Orbits, &budget, Some((total, acc)), |_, _| {
            panic!("no records expected")
        })
        .unwrap();
        assert_eq!(finished.totals, full.totals);
    }

    #[test]
    fn record_counts_and_budget() {
        let code = punctured_code(5, &[0], 2);
        assert_eq!(record_count(&code, CensusMode::Orbits), Some(7)); // 1 + 1 + 5
        assert_eq!(record_count(&code, CensusMode::Full), Some(625));
        let tiny = Budget::with_limit(10);
        assert!(matches!(
            run_census(&code, CensusMode::Full, &tiny, None, |_, _| Ok(())),
            Err(Error::BudgetExceeded { required: 625, budget: 10 })
        ));
    }

    #[test]
    fn every_constructed_word_lands_in_a_deep_hole_class() {
        use crate::deephole::{construct_deep_hole, DeepHoleSpec};
        let code = punctured_code(7, &[0, 3], 2);
        let field = code.field().clone();
        let budget = Budget::default();
        for j in 1..=2 {
            for lambda in [1u64, 4] {
                let spec = DeepHoleSpec {
                    code: &code,
                    j,
                    lambda: field.element(lambda).unwrap(),
                    r: crate::poly::Polynomial::from_indices(field.clone(), &[2, 3]).unwrap(),
                };
                let u = construct_deep_hole(&spec).unwrap();
                let cls = classify_word(&code, &u, &budget).unwrap();
                assert!(
                    matches!(
                        cls.class,
                        WordClass::TheoremDeepHole | WordClass::TrivialDeepHole
                    ),
                    "got {:?}",
                    cls.class
                );
            }
        }
    }
}
