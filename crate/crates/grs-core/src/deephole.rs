//! Deep-hole construction, agreement witnesses, and canonical forms for the
//! scale-and-shift equivalence on words.
//!
//! The construction: puncture a_j out of the evaluation set, then evaluate
//! lambda * (x - a_j)^(q-2) + r(x) on D with deg(r) < k. Since a_j is off D,
//! (x - a_j)^(q-2) evaluates as 1/(x - a_j) there, which no degree-< k
//! polynomial can match on more than k points.

use crate::code::{GrsCode, Word};
use crate::distance::{cross_check, Budget, DistanceCertificate};
use crate::error::{Error, Result};
use crate::gf::Element;
use crate::poly::{Degree, Polynomial};

/// Parameters of one constructed word: which puncture, the scale, the
/// degree-< k shift.
#[derive(Debug, Clone)]
pub struct DeepHoleSpec<'a> {
    pub code: &'a GrsCode,
    /// 1-based index into the puncture list, selecting a_j.
    pub j: usize,
    pub lambda: Element,
    pub r: Polynomial,
}

/// A degree-(k-1) polynomial g certifying that 1/(x - a_j) is matched on
/// exactly k points of D by some codeword message.
#[derive(Debug, Clone)]
pub struct WitnessCertificate {
    pub g: Polynomial,
    /// The k points of D where the match happens: c_i + a_j.
    pub agreement_points: Vec<Element>,
    /// Pointwise re-check over all of D found exactly these agreements.
    pub verified: bool,
}

/// Orbit representative under u -> lambda * u + f(D), deg(f) < k: the
/// interpolation with its low-degree part dropped, scaled monic. Two words
/// are equivalent (and share their error distance) iff their forms are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalForm {
    /// The word is a codeword; its whole orbit is the code itself.
    Zero,
    /// Monic polynomial supported on degrees k..n-1.
    High(Polynomial),
}

impl CanonicalForm {
    pub fn as_poly(&self) -> Option<&Polynomial> {
        match self {
            CanonicalForm::Zero => None,
            CanonicalForm::High(p) => Some(p),
        }
    }

    /// Coefficient-csv text form; the codeword class prints as "0".
    pub fn to_csv(&self) -> String {
        match self {
            CanonicalForm::Zero => "0".into(),
            CanonicalForm::High(p) => p.to_csv(),
        }
    }

    /// Degree shared by every word in the orbit (None for the codeword class,
    /// where degrees mix).
    pub fn degree(&self) -> Option<usize> {
        self.as_poly().and_then(|p| p.degree().finite())
    }
}

fn puncture_at(code: &GrsCode, j: usize) -> Result<Element> {
    let l = code.eval_set().l();
    if l == 0 {
        return Err(Error::PreconditionViolated(
            "the construction needs at least one punctured point".into(),
        ));
    }
    if j < 1 || j > l {
        return Err(Error::PreconditionViolated(format!(
            "puncture index j={j} out of range 1..={l}"
        )));
    }
    Ok(code.eval_set().excluded()[j - 1])
}

fn construction_preconditions(code: &GrsCode, j: usize, lambda: Element) -> Result<Element> {
    let a = puncture_at(code, j)?;
    let q = code.field().order() as usize;
    let l = code.eval_set().l();
    let k = code.k();
    if q < 4 {
        return Err(Error::PreconditionViolated(format!(
            "field order {q} below the minimum 4"
        )));
    }
    if k < 2 || k + l + 1 > q {
        return Err(Error::PreconditionViolated(format!(
            "dimension k={k} outside 2..={}",
            q - l - 1
        )));
    }
    if lambda.is_zero() {
        return Err(Error::PreconditionViolated("lambda must be nonzero".into()));
    }
    Ok(a)
}

/// The word (1/(x_i - a))_i, defined whenever a is off the evaluation set.
pub fn reciprocal_word(code: &GrsCode, a: Element) -> Result<Word> {
    let field = code.field();
    let entries = code
        .eval_set()
        .points()
        .iter()
        .map(|&x| field.inv(field.sub(x, a)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Word::new(entries))
}

/// Evaluates lambda * (x - a_j)^(q-2) + r(x) on D.
///
/// Uses the O(n) inverse form lambda/(x_i - a_j) + r(x_i) rather than
/// expanding the degree q-2 power; a^(q-2) = 1/a makes the two identical.
pub fn construct_deep_hole(spec: &DeepHoleSpec) -> Result<Word> {
    let code = spec.code;
    let a = construction_preconditions(code, spec.j, spec.lambda)?;
    code.field().check_same(spec.r.field())?;
    if !spec.r.degree().at_most(code.k() - 1) {
        return Err(Error::PreconditionViolated(format!(
            "shift degree {} exceeds k-1={}",
            spec.r.degree(),
            code.k() - 1
        )));
    }
    let field = code.field();
    let entries = code
        .eval_set()
        .points()
        .iter()
        .map(|&x| {
            let recip = field.inv(field.sub(x, a))?;
            Ok(field.add(field.mul(spec.lambda, recip), spec.r.eval(x)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Word::new(entries))
}

/// Builds the agreement witness g(x) = (1 - prod_i (1 - x/c_i)) / x for k
/// distinct c_i avoiding every a_t - a_j, and re-checks pointwise that
/// 1/(y - a_j) = g(y - a_j) on exactly the k points c_i + a_j of D.
pub fn witness_polynomial(
    code: &GrsCode,
    j: usize,
    c_choice: Option<&[Element]>,
) -> Result<WitnessCertificate> {
    let a = puncture_at(code, j)?;
    let field = code.field().clone();
    let k = code.k();

    let mut forbidden = vec![false; field.order() as usize];
    for &a_t in code.eval_set().excluded() {
        forbidden[field.sub(a_t, a).index()] = true;
    }

    let cs: Vec<Element> = match c_choice {
        Some(cs) => {
            if cs.len() != k {
                return Err(Error::InvalidWitnessSet(format!(
                    "need exactly k={k} elements, got {}",
                    cs.len()
                )));
            }
            let mut seen = vec![false; field.order() as usize];
            for &c in cs {
                if c.index() >= field.order() as usize {
                    return Err(Error::InvalidWitnessSet(format!("element {c} out of range")));
                }
                if forbidden[c.index()] {
                    return Err(Error::InvalidWitnessSet(format!(
                        "{c} collides with a difference of punctured points"
                    )));
                }
                if seen[c.index()] {
                    return Err(Error::InvalidWitnessSet(format!("duplicate element {c}")));
                }
                seen[c.index()] = true;
            }
            cs.to_vec()
        }
        None => {
            let picked: Vec<Element> = field
                .all_elements()
                .filter(|e| !forbidden[e.index()])
                .take(k)
                .collect();
            if picked.len() < k {
                return Err(Error::InvalidWitnessSet(format!(
                    "only {} eligible elements for k={k}",
                    picked.len()
                )));
            }
            picked
        }
    };

    // prod_i (1 - c_i^{-1} x) has constant term 1 and degree exactly k
    let mut prod = Polynomial::one(field.clone());
    for &c in &cs {
        let lin = Polynomial::new(
            field.clone(),
            vec![Element::ONE, field.neg(field.inv(c)?)],
        );
        prod = prod.mul(&lin)?;
    }
    let diff = Polynomial::one(field.clone()).sub(&prod)?;
    assert!(diff.coeff(0).is_zero(), "1 - prod must lose its constant term");
    let g = Polynomial::new(field.clone(), diff.coeffs()[1..].to_vec());
    assert_eq!(g.degree(), Degree::Finite(k - 1));

    let agreement_points: Vec<Element> = cs.iter().map(|&c| field.add(c, a)).collect();

    // exact agreement count of 1/(y - a) against g(y - a) over all of D
    let mut verified = agreement_points.iter().all(|&y| code.eval_set().contains(y));
    let mut matches = 0usize;
    for &y in code.eval_set().points() {
        let shifted = field.sub(y, a);
        if field.inv(shifted)? == g.eval(shifted) {
            matches += 1;
            if !agreement_points.contains(&y) {
                verified = false;
            }
        }
    }
    verified &= matches == k;

    Ok(WitnessCertificate { g, agreement_points, verified })
}

/// Cross-checked test for distance == n - k.
pub fn verify_deep_hole(
    code: &GrsCode,
    u: &Word,
    budget: &Budget,
) -> Result<(bool, DistanceCertificate)> {
    let cert = cross_check(code, u, budget)?;
    Ok((cert.distance == code.covering_radius(), cert))
}

/// Interpolates u, drops every coefficient below degree k, and scales the
/// rest monic; `Zero` iff u is a codeword.
pub fn canonical_form(code: &GrsCode, u: &Word) -> Result<CanonicalForm> {
    let interp = code.eval_set().interpolate_word(u)?;
    let field = code.field().clone();
    let mut coeffs = interp.coeffs().to_vec();
    let low = code.k().min(coeffs.len());
    for c in coeffs.iter_mut().take(low) {
        *c = Element::ZERO;
    }
    let high = Polynomial::new(field.clone(), coeffs);
    if high.is_zero() {
        return Ok(CanonicalForm::Zero);
    }
    let lead_inv = field.inv(high.leading_coeff())?;
    Ok(CanonicalForm::High(high.scale(lead_inv)))
}

/// (q - 1) * q^k: the number of distinct words lambda * u + f(D) reachable
/// from any non-codeword u.
pub fn orbit_size(code: &GrsCode) -> u128 {
    let q = code.field().order() as u128;
    (q - 1)
        .checked_mul(
            q.checked_pow(code.k() as u32)
                .expect("orbit size exceeds u128"),
        )
        .expect("orbit size exceeds u128")
}
