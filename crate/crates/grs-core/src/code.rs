//! Generalized Reed-Solomon codes over arbitrary evaluation sets, encoding,
//! and the Hamming metric on words.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Element, FiniteField};
use crate::poly::{lagrange_interpolate, Degree, Polynomial};

/// Default cap on codeword enumeration (2^24).
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

/// An ordered evaluation set D, always kept in ascending element index order,
/// together with its complement in the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationSet {
    field: Arc<FiniteField>,
    points: Vec<Element>,
    /// The punctured elements a_1..a_l, in the order they were given.
    excluded: Vec<Element>,
}

impl EvaluationSet {
    /// D = F_q minus the given punctures. The punctures keep their given
    /// order (they are addressed by 1-based index elsewhere); the points are
    /// ascending.
    pub fn puncture(field: Arc<FiniteField>, excluded: &[Element]) -> Result<Self> {
        let q = field.order() as usize;
        let mut is_excluded = vec![false; q];
        for &a in excluded {
            if a.index() >= q {
                return Err(Error::PreconditionViolated(format!(
                    "element {a} out of range for {field}"
                )));
            }
            if is_excluded[a.index()] {
                return Err(Error::DuplicateAbscissa(a.index() as u64));
            }
            is_excluded[a.index()] = true;
        }
        let points: Vec<Element> = field.all_elements().filter(|e| !is_excluded[e.index()]).collect();
        if points.is_empty() {
            return Err(Error::PreconditionViolated(
                "evaluation set must be nonempty".into(),
            ));
        }
        Ok(EvaluationSet { field, points, excluded: excluded.to_vec() })
    }

    /// D = all of F_q (no punctures).
    pub fn full(field: Arc<FiniteField>) -> Self {
        let points = field.all_elements().collect();
        EvaluationSet { field, points, excluded: Vec::new() }
    }

    /// An arbitrary subset of F_q; points are sorted ascending and the
    /// complement becomes the puncture list (ascending).
    pub fn from_points(field: Arc<FiniteField>, points: &[Element]) -> Result<Self> {
        let q = field.order() as usize;
        let mut keep = vec![false; q];
        for &x in points {
            if x.index() >= q {
                return Err(Error::PreconditionViolated(format!(
                    "element {x} out of range for {field}"
                )));
            }
            if keep[x.index()] {
                return Err(Error::DuplicateAbscissa(x.index() as u64));
            }
            keep[x.index()] = true;
        }
        if points.is_empty() {
            return Err(Error::PreconditionViolated(
                "evaluation set must be nonempty".into(),
            ));
        }
        let (points, excluded) = field.all_elements().partition(|e| keep[e.index()]);
        Ok(EvaluationSet { field, points, excluded })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn points(&self) -> &[Element] {
        &self.points
    }

    pub fn excluded(&self) -> &[Element] {
        &self.excluded
    }

    /// n = |D|.
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// l = number of punctured elements.
    pub fn l(&self) -> usize {
        self.excluded.len()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    /// Errors unless the word length matches n.
    pub fn check_word(&self, u: &Word) -> Result<()> {
        if u.len() != self.n() {
            return Err(Error::LengthMismatch(u.len(), self.n()));
        }
        Ok(())
    }

    /// Pointwise evaluation of any polynomial on D, in point order.
    pub fn evaluate(&self, f: &Polynomial) -> Result<Word> {
        self.field.check_same(f.field())?;
        Ok(Word::new(self.points.iter().map(|&x| f.eval(x)).collect()))
    }

    /// The unique interpolation polynomial of degree < n matching u on D.
    pub fn interpolate_word(&self, u: &Word) -> Result<Polynomial> {
        self.check_word(u)?;
        let pts: Vec<_> = self.points.iter().copied().zip(u.entries().iter().copied()).collect();
        lagrange_interpolate(&self.field, &pts)
    }

    /// Degree of the interpolation of u (NegInf for the zero word).
    pub fn word_degree(&self, u: &Word) -> Result<Degree> {
        Ok(self.interpolate_word(u)?.degree())
    }

    /// N(x) = prod over D of (x - x_i).
    pub fn vanishing(&self) -> Polynomial {
        crate::poly::vanishing_poly(&self.field, &self.points).expect("points are distinct")
    }
}

/// The code C(D, k): evaluations on D of every polynomial of degree < k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrsCode {
    eval_set: EvaluationSet,
    k: usize,
}

impl GrsCode {
    pub fn new(eval_set: EvaluationSet, k: usize) -> Result<Self> {
        let n = eval_set.n();
        if k < 1 || k > n {
            return Err(Error::DimensionOutOfRange { k, n });
        }
        Ok(GrsCode { eval_set, k })
    }

    pub fn eval_set(&self) -> &EvaluationSet {
        &self.eval_set
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.eval_set.field()
    }

    pub fn n(&self) -> usize {
        self.eval_set.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// d = n - k + 1 (the codes here are MDS).
    pub fn min_distance(&self) -> usize {
        self.n() - self.k + 1
    }

    /// rho = n - k; words at this error distance are the deep holes.
    pub fn covering_radius(&self) -> usize {
        self.n() - self.k
    }

    /// Evaluates a message of degree at most k-1 on D.
    pub fn encode(&self, message: &Polynomial) -> Result<Word> {
        self.field().check_same(message.field())?;
        if let Degree::Finite(d) = message.degree() {
            if d > self.k - 1 {
                return Err(Error::DegreeTooHigh { deg: d, max: self.k - 1 });
            }
        }
        self.eval_set.evaluate(message)
    }

    /// True iff the interpolation of u has degree at most k-1.
    pub fn is_codeword(&self, u: &Word) -> Result<bool> {
        Ok(self.eval_set.word_degree(u)?.at_most(self.k - 1))
    }

    /// Number of codewords, q^k, if it fits in 128 bits.
    pub fn codeword_count(&self) -> Option<u128> {
        (self.field().order() as u128).checked_pow(self.k as u32)
    }

    /// Streams all q^k codewords exactly once, in ascending message index
    /// order; fails fast when q^k exceeds the budget.
    pub fn enumerate_codewords(&self, budget: u64) -> Result<CodewordIter<'_>> {
        let total = self.codeword_count().unwrap_or(u128::MAX);
        if total > budget as u128 {
            return Err(Error::BudgetExceeded { required: total, budget });
        }
        Ok(CodewordIter::new(self, total as u64))
    }

    /// x_t^i for i < k, the encoding table shared by enumeration and the
    /// distance engines.
    pub(crate) fn point_powers(&self) -> Vec<Vec<Element>> {
        let field = self.field();
        let points = self.eval_set.points();
        (0..self.k)
            .map(|i| points.iter().map(|&x| field.pow(x, i as u64)).collect())
            .collect()
    }
}

/// A length-n vector over the field, aligned with the points of an
/// evaluation set. Deliberately a plain value: operations that need the set
/// take it alongside.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    entries: Vec<Element>,
}

impl Word {
    pub fn new(entries: Vec<Element>) -> Self {
        Word { entries }
    }

    /// Parses the CLI text form: comma-separated element indices.
    pub fn parse(field: &FiniteField, text: &str) -> Result<Self> {
        let entries = text
            .split(',')
            .map(|tok| {
                let idx = tok.trim().parse::<u64>().map_err(|_| {
                    Error::PreconditionViolated(format!("bad entry {tok:?} in word {text:?}"))
                })?;
                field.element(idx)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { entries })
    }

    pub fn to_csv(&self) -> String {
        self.entries
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn zero(n: usize) -> Self {
        Word { entries: vec![Element::ZERO; n] }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_csv())
    }
}

/// Number of positions where two words differ.
pub fn hamming_distance(u: &Word, v: &Word) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(u.entries()
        .iter()
        .zip(v.entries())
        .filter(|(a, b)| a != b)
        .count())
}

/// Number of nonzero entries.
pub fn hamming_weight(u: &Word) -> usize {
    u.entries().iter().filter(|e| !e.is_zero()).count()
}

/// Iterator over all (message, codeword) pairs in message index order.
///
/// Codewords are maintained incrementally: bumping message digit i adds
/// (new - old) * x^i to every entry, so a step costs O(n) amortized instead
/// of a full O(nk) re-encoding.
pub struct CodewordIter<'a> {
    code: &'a GrsCode,
    pows: Vec<Vec<Element>>,
    digits: Vec<u16>,
    word: Vec<Element>,
    emitted: u64,
    total: u64,
}

impl<'a> CodewordIter<'a> {
    fn new(code: &'a GrsCode, total: u64) -> Self {
        CodewordIter {
            pows: code.point_powers(),
            digits: vec![0; code.k()],
            word: vec![Element::ZERO; code.n()],
            emitted: 0,
            total,
            code,
        }
    }
}

impl Iterator for CodewordIter<'_> {
    type Item = (Polynomial, Word);

    fn next(&mut self) -> Option<Self::Item> {
        if self.emitted == self.total {
            return None;
        }
        if self.emitted > 0 {
            let field = self.code.field();
            let q = field.order();
            for (i, digit) in self.digits.iter_mut().enumerate() {
                let old = Element(*digit);
                let wrapped = (*digit as u32 + 1) == q;
                let new = if wrapped { Element::ZERO } else { Element(*digit + 1) };
                *digit = new.0;
                let delta = field.sub(new, old);
                for (w, p) in self.word.iter_mut().zip(&self.pows[i]) {
                    *w = field.add(*w, field.mul(delta, *p));
                }
                if !wrapped {
                    break;
                }
            }
        }
        self.emitted += 1;
        let message = Polynomial::new(
            self.code.field().clone(),
            self.digits.iter().map(|&d| Element(d)).collect(),
        );
        Some((message, Word::new(self.word.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Arc<FiniteField> {
        match q {
            4 => FiniteField::extension(2, 2).unwrap(),
            8 => FiniteField::extension(2, 3).unwrap(),
            9 => FiniteField::extension(3, 2).unwrap(),
            p => FiniteField::prime(p).unwrap(),
        }
    }

    fn punctured_code(q: u32, excluded: &[u64], k: usize) -> GrsCode {
        let field = gf(q);
        let excl: Vec<Element> = excluded.iter().map(|&i| field.element(i).unwrap()).collect();
        GrsCode::new(EvaluationSet::puncture(field, &excl).unwrap(), k).unwrap()
    }

    #[test]
    fn derived_parameters() {
        let code = punctured_code(5, &[0], 2);
        assert_eq!(code.n(), 4);
        assert_eq!(code.min_distance(), 3);
        assert_eq!(code.covering_radius(), 2);

        let code = punctured_code(4, &[0], 2);
        assert_eq!(code.n(), 3);
        assert_eq!(code.min_distance(), 2);
        assert_eq!(code.covering_radius(), 1);

        let field = gf(5);
        let es = EvaluationSet::puncture(field, &[Element(0)]).unwrap();
        assert!(matches!(
            GrsCode::new(es, 5),
            Err(Error::DimensionOutOfRange { k: 5, n: 4 })
        ));
    }

    #[test]
    fn puncture_set_layout() {
        let field = gf(5);
        let es = EvaluationSet::puncture(field.clone(), &[Element(3), Element(0)]).unwrap();
        assert_eq!(es.points(), &[Element(1), Element(2), Element(4)]);
        assert_eq!(es.excluded(), &[Element(3), Element(0)]); // given order kept
        assert_eq!((es.n(), es.l()), (3, 2));
        assert!(es.contains(Element(2)));
        assert!(!es.contains(Element(3)));
        assert!(matches!(
            EvaluationSet::puncture(field.clone(), &[Element(1), Element(1)]),
            Err(Error::DuplicateAbscissa(1))
        ));
        let all: Vec<Element> = field.all_elements().collect();
        assert!(EvaluationSet::puncture(field, &all).is_err());
    }

    #[test]
    fn from_points_sorts_and_complements() {
        let field = gf(5);
        let es = EvaluationSet::from_points(field, &[Element(4), Element(1)]).unwrap();
        assert_eq!(es.points(), &[Element(1), Element(4)]);
        assert_eq!(es.excluded(), &[Element(0), Element(2), Element(3)]);
    }

    #[test]
    fn encode_examples() {
        let code = punctured_code(5, &[0], 2);
        let f = code.field().clone();
        let msg = Polynomial::from_indices(f.clone(), &[1, 1]).unwrap(); // x + 1
        assert_eq!(code.encode(&msg).unwrap().to_csv(), "2,3,4,0");
        let zero = Polynomial::zero(f.clone());
        assert_eq!(code.encode(&zero).unwrap(), Word::zero(4));
        let c2 = Polynomial::constant(f.clone(), Element(2));
        assert_eq!(code.encode(&c2).unwrap().to_csv(), "2,2,2,2");
        let too_big = Polynomial::from_indices(f, &[0, 0, 1]).unwrap();
        assert!(matches!(
            code.encode(&too_big),
            Err(Error::DegreeTooHigh { deg: 2, max: 1 })
        ));
    }

    #[test]
    fn hamming_examples() {
        let u = Word::parse(&gf(5), "1,3,2,4").unwrap();
        let v = Word::parse(&gf(5), "2,3,4,0").unwrap();
        assert_eq!(hamming_distance(&u, &v).unwrap(), 3);
        assert_eq!(hamming_distance(&u, &u).unwrap(), 0);
        assert_eq!(hamming_weight(&Word::zero(4)), 0);
        assert_eq!(hamming_weight(&u), 4);
        let short = Word::zero(3);
        assert!(matches!(
            hamming_distance(&u, &short),
            Err(Error::LengthMismatch(4, 3))
        ));
    }

    #[test]
    fn word_degree_examples() {
        let code = punctured_code(5, &[0], 2);
        let es = code.eval_set();
        let u = Word::parse(code.field(), "1,3,2,4").unwrap();
        assert_eq!(es.word_degree(&u).unwrap(), Degree::Finite(3));
        assert!(!code.is_codeword(&u).unwrap());

        let msg = Polynomial::from_indices(code.field().clone(), &[1, 1]).unwrap();
        let encoded = code.encode(&msg).unwrap();
        assert_eq!(es.word_degree(&encoded).unwrap(), Degree::Finite(1));
        assert!(code.is_codeword(&encoded).unwrap());

        assert_eq!(es.word_degree(&Word::zero(4)).unwrap(), Degree::NegInf);
        assert!(code.is_codeword(&Word::zero(4)).unwrap());
    }

    #[test]
    fn enumeration_counts_and_budget() {
        let code = punctured_code(4, &[0], 2);
        assert_eq!(code.enumerate_codewords(1 << 24).unwrap().count(), 16);

        let code = punctured_code(5, &[0], 2);
        assert_eq!(code.enumerate_codewords(1 << 24).unwrap().count(), 25);

        let code = punctured_code(7, &[0], 5);
        assert!(matches!(
            code.enumerate_codewords(1 << 10),
            Err(Error::BudgetExceeded { required: 16807, budget: 1024 })
        ));
    }

    #[test]
    fn enumeration_matches_direct_encoding() {
        let code = punctured_code(5, &[0], 3);
        let mut seen = std::collections::HashSet::new();
        for (message, word) in code.enumerate_codewords(1 << 24).unwrap() {
            assert_eq!(code.encode(&message).unwrap(), word);
            assert!(seen.insert(word.to_csv()), "duplicate codeword");
        }
        assert_eq!(seen.len(), 125);
    }

    #[test]
    fn minimum_weight_is_mds_small() {
        for (q, k) in [(4, 1), (4, 2), (5, 1), (5, 2), (5, 3)] {
            let code = punctured_code(q, &[0], k);
            let min_weight = code
                .enumerate_codewords(1 << 24)
                .unwrap()
                .filter(|(m, _)| !m.is_zero())
                .map(|(_, w)| hamming_weight(&w))
                .min()
                .unwrap();
            assert_eq!(min_weight, code.min_distance(), "GF({q}) k={k}");
        }
    }

    #[test]
    fn encoding_is_linear() {
        let code = punctured_code(9, &[0, 4], 3);
        let field = code.field().clone();
        let f = Polynomial::from_indices(field.clone(), &[3, 7, 2]).unwrap();
        let g = Polynomial::from_indices(field.clone(), &[8, 0, 5]).unwrap();
        let sum_words: Vec<Element> = code
            .encode(&f)
            .unwrap()
            .entries()
            .iter()
            .zip(code.encode(&g).unwrap().entries())
            .map(|(&a, &b)| field.add(a, b))
            .collect();
        assert_eq!(Word::new(sum_words), code.encode(&f.add(&g).unwrap()).unwrap());

        let lam = Element(5);
        let scaled: Vec<Element> = code
            .encode(&f)
            .unwrap()
            .entries()
            .iter()
            .map(|&a| field.mul(lam, a))
            .collect();
        assert_eq!(Word::new(scaled), code.encode(&f.scale(lam)).unwrap());
    }

    #[test]
    fn word_parse_validates() {
        let field = gf(5);
        assert!(Word::parse(&field, "1,3,2,4").is_ok());
        assert!(Word::parse(&field, "1,5").is_err());
        assert!(Word::parse(&field, "1,,2").is_err());
    }
}
