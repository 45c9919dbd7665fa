//! Dense univariate polynomial algebra over a [`FiniteField`], including
//! Lagrange interpolation and reduction modulo the vanishing polynomial of an
//! evaluation set.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Element, FiniteField};

/// Degree of a polynomial. The zero polynomial gets a sentinel that compares
/// below every finite degree, so guards like `deg(u) <= k-1` stay unambiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    /// The finite value, if any.
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// True when the degree is at most `bound`; NegInf passes every bound.
    pub fn at_most(self, bound: usize) -> bool {
        match self {
            Degree::NegInf => true,
            Degree::Finite(d) => d <= bound,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial as a coefficient vector, index i holding the coefficient of
/// x^i. Always normalized: the highest stored coefficient is nonzero, and the
/// zero polynomial stores nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Arc<FiniteField>,
    coeffs: Vec<Element>,
}

impl Polynomial {
    /// Builds from low-to-high coefficients, trimming trailing zeros.
    pub fn new(field: Arc<FiniteField>, mut coeffs: Vec<Element>) -> Self {
        while coeffs.last() == Some(&Element::ZERO) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.index() < field.order() as usize));
        Polynomial { field, coeffs }
    }

    pub fn zero(field: Arc<FiniteField>) -> Self {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn one(field: Arc<FiniteField>) -> Self {
        Self::constant(field, Element::ONE)
    }

    pub fn constant(field: Arc<FiniteField>, c: Element) -> Self {
        Self::new(field, vec![c])
    }

    /// c * x^degree.
    pub fn monomial(field: Arc<FiniteField>, c: Element, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero(field);
        }
        let mut coeffs = vec![Element::ZERO; degree + 1];
        coeffs[degree] = c;
        Polynomial { field, coeffs }
    }

    /// Checked construction from raw element indices, low-to-high.
    pub fn from_indices(field: Arc<FiniteField>, indices: &[u64]) -> Result<Self> {
        let coeffs = indices
            .iter()
            .map(|&i| field.element(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, coeffs))
    }

    /// Parses the CLI text form: comma-separated coefficient indices,
    /// low-to-high (`"1,0,0,1"` is x^3 + 1).
    pub fn parse(field: Arc<FiniteField>, text: &str) -> Result<Self> {
        let indices = text
            .split(',')
            .map(|tok| {
                tok.trim().parse::<u64>().map_err(|_| {
                    Error::PreconditionViolated(format!("bad coefficient {tok:?} in {text:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(field, &indices)
    }

    /// The inverse of [`Self::parse`]; the zero polynomial prints as "0".
    pub fn to_csv(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    /// Coefficient of x^i, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> Element {
        self.coeffs.get(i).copied().unwrap_or(Element::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Finite(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> Element {
        self.coeffs.last().copied().unwrap_or(Element::ZERO)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.field.check_same(&rhs.field)?;
        let f = &self.field;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| f.add(self.coeff(i), rhs.coeff(i)))
            .collect();
        Ok(Self::new(f.clone(), coeffs))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.field.check_same(&rhs.field)?;
        let f = &self.field;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| f.sub(self.coeff(i), rhs.coeff(i)))
            .collect();
        Ok(Self::new(f.clone(), coeffs))
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&c| f.neg(c)).collect();
        Self::new(f.clone(), coeffs)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.field.check_same(&rhs.field)?;
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(f.clone()));
        }
        let mut coeffs = vec![Element::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Ok(Self::new(f.clone(), coeffs))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: Element) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&a| f.mul(a, c)).collect();
        Self::new(f.clone(), coeffs)
    }

    /// Long division: `self = q * rhs + r` with `deg(r) < deg(rhs)`.
    pub fn divrem(&self, rhs: &Self) -> Result<(Self, Self)> {
        self.field.check_same(&rhs.field)?;
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field.clone();
        let dd = rhs.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let lead_inv = f.inv(rhs.leading_coeff())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Element::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let factor = f.mul(rem[top], lead_inv);
            if factor.is_zero() {
                continue;
            }
            quot[top - dd] = factor;
            for (t, &rc) in rhs.coeffs.iter().enumerate() {
                rem[top - dd + t] = f.sub(rem[top - dd + t], f.mul(factor, rc));
            }
        }
        rem.truncate(dd);
        Ok((Self::new(f.clone(), quot), Self::new(f, rem)))
    }

    /// Horner evaluation; the zero polynomial evaluates to zero.
    pub fn eval(&self, at: Element) -> Element {
        let f = &self.field;
        let mut acc = Element::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, at), c);
        }
        acc
    }

    /// f^e by square-and-multiply; f^0 = 1.
    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one(self.field.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        result
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_csv())
    }
}

fn check_distinct(points: impl Iterator<Item = Element>, q: usize) -> Result<()> {
    let mut seen = vec![false; q];
    for x in points {
        if seen[x.index()] {
            return Err(Error::DuplicateAbscissa(x.index() as u64));
        }
        seen[x.index()] = true;
    }
    Ok(())
}

/// The unique polynomial of degree at most n-1 through n points with pairwise
/// distinct abscissae. Direct Lagrange basis construction, O(n^2).
pub fn lagrange_interpolate(
    field: &Arc<FiniteField>,
    points: &[(Element, Element)],
) -> Result<Polynomial> {
    if points.is_empty() {
        return Err(Error::PreconditionViolated(
            "interpolation needs at least one point".into(),
        ));
    }
    check_distinct(points.iter().map(|&(x, _)| x), field.order() as usize)?;

    let master = vanishing_poly(field, &points.iter().map(|&(x, _)| x).collect::<Vec<_>>())?;
    let mut acc = Polynomial::zero(field.clone());
    for &(x, y) in points {
        if y.is_zero() {
            continue;
        }
        // basis_i = master / (x - x_i), exact by construction
        let basis = synthetic_div_by_root(&master, x);
        let denom = basis.eval(x);
        let scale = field.div(y, denom)?;
        acc = acc.add(&basis.scale(scale))?;
    }
    Ok(acc)
}

/// Quotient of `f` by the linear factor (x - root); assumes f(root) = 0.
fn synthetic_div_by_root(f: &Polynomial, root: Element) -> Polynomial {
    let field = f.field().clone();
    let coeffs = f.coeffs();
    let mut quot = vec![Element::ZERO; coeffs.len() - 1];
    let mut carry = Element::ZERO;
    for i in (0..coeffs.len() - 1).rev() {
        carry = field.add(coeffs[i + 1], field.mul(carry, root));
        quot[i] = carry;
    }
    debug_assert!(f.eval(root).is_zero());
    Polynomial::new(field, quot)
}

/// N(x) = prod over D of (x - x_i): monic, degree |D|, roots exactly D.
pub fn vanishing_poly(field: &Arc<FiniteField>, points: &[Element]) -> Result<Polynomial> {
    check_distinct(points.iter().copied(), field.order() as usize)?;
    // build up the product one root at a time
    let mut coeffs = vec![Element::ONE];
    for &root in points {
        let neg_root = field.neg(root);
        coeffs.push(Element::ZERO);
        for i in (0..coeffs.len() - 1).rev() {
            let shifted = coeffs[i];
            coeffs[i + 1] = field.add(coeffs[i + 1], shifted);
            coeffs[i] = field.mul(shifted, neg_root);
        }
    }
    Ok(Polynomial::new(field.clone(), coeffs))
}

/// Reduction of f modulo the vanishing polynomial of `points`: the unique
/// representative of degree < |points| that agrees with f everywhere on them.
pub fn reduce_mod_vanishing(f: &Polynomial, points: &[Element]) -> Result<Polynomial> {
    let n = vanishing_poly(f.field(), points)?;
    Ok(f.divrem(&n)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FiniteField;

    fn gf5() -> Arc<FiniteField> {
        FiniteField::prime(5).unwrap()
    }

    fn gf4() -> Arc<FiniteField> {
        FiniteField::extension(2, 2).unwrap()
    }

    fn p(field: &Arc<FiniteField>, idx: &[u64]) -> Polynomial {
        Polynomial::from_indices(field.clone(), idx).unwrap()
    }

    #[test]
    fn degree_sentinel_orders_below_everything() {
        assert!(Degree::NegInf < Degree::Finite(0));
        assert!(Degree::Finite(0) < Degree::Finite(3));
        assert!(Degree::NegInf.at_most(0));
        assert!(!Degree::Finite(2).at_most(1));
        let f = gf5();
        assert_eq!(Polynomial::zero(f.clone()).degree(), Degree::NegInf);
        assert_eq!(p(&f, &[0, 0, 3]).degree(), Degree::Finite(2));
    }

    #[test]
    fn ring_ops() {
        let f = gf5();
        // (x+1)(x-1) = x^2 - 1 = x^2 + 4
        let lhs = p(&f, &[1, 1]).mul(&p(&f, &[4, 1])).unwrap();
        assert_eq!(lhs, p(&f, &[4, 0, 1]));
        // additive identity
        let g = p(&f, &[2, 3, 1]);
        assert_eq!(g.add(&Polynomial::zero(f.clone())).unwrap(), g);
        // Frobenius over GF(2): (x+1)^2 = x^2 + 1
        let f2 = FiniteField::prime(2).unwrap();
        let sq = p(&f2, &[1, 1]).pow(2);
        assert_eq!(sq, p(&f2, &[1, 0, 1]));
        // and in characteristic 2 with q = 4 as well
        let f4 = gf4();
        assert_eq!(p(&f4, &[1, 1]).pow(2), p(&f4, &[1, 0, 1]));
    }

    #[test]
    fn divrem_examples() {
        let f = gf5();
        let (q, r) = p(&f, &[0, 0, 0, 1]).divrem(&p(&f, &[4, 1])).unwrap();
        assert_eq!(q, p(&f, &[1, 1, 1]));
        assert_eq!(r, p(&f, &[1]));
        // verify by multiplying back
        let back = q.mul(&p(&f, &[4, 1])).unwrap().add(&r).unwrap();
        assert_eq!(back, p(&f, &[0, 0, 0, 1]));

        let g = p(&f, &[2, 0, 3]);
        let (q, r) = g.divrem(&g).unwrap();
        assert_eq!(q, Polynomial::one(f.clone()));
        assert!(r.is_zero());

        let (q, r) = Polynomial::zero(f.clone()).divrem(&g).unwrap();
        assert!(q.is_zero() && r.is_zero());

        assert!(matches!(
            g.divrem(&Polynomial::zero(f.clone())),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn eval_examples() {
        let f = gf5();
        let cube = p(&f, &[0, 0, 0, 1]);
        assert_eq!(cube.eval(Element(2)), Element(3)); // 8 mod 5
        assert_eq!(cube.eval(Element(4)), Element(4)); // 64 mod 5
        assert_eq!(p(&f, &[3]).eval(Element(2)), Element(3));
        assert_eq!(Polynomial::zero(f).eval(Element(2)), Element::ZERO);
    }

    #[test]
    fn pow_examples() {
        let f = gf5();
        assert_eq!(p(&f, &[1, 2]).pow(0), Polynomial::one(f.clone()));
        // (x - 0)^3 = x^3
        assert_eq!(p(&f, &[0, 1]).pow(3), p(&f, &[0, 0, 0, 1]));
    }

    #[test]
    fn lagrange_recovers_cube() {
        let f = gf5();
        // x^3 on {1,2,3,4} evaluates to 1,3,2,4
        let pts = [
            (Element(1), Element(1)),
            (Element(2), Element(3)),
            (Element(3), Element(2)),
            (Element(4), Element(4)),
        ];
        assert_eq!(lagrange_interpolate(&f, &pts).unwrap(), p(&f, &[0, 0, 0, 1]));
        // point order must not matter
        let mut shuffled = pts;
        shuffled.reverse();
        assert_eq!(
            lagrange_interpolate(&f, &shuffled).unwrap(),
            p(&f, &[0, 0, 0, 1])
        );
    }

    #[test]
    fn lagrange_small_cases() {
        let f = gf5();
        let single = lagrange_interpolate(&f, &[(Element(3), Element(2))]).unwrap();
        assert_eq!(single, p(&f, &[2]));
        // the line x+1 through (1,2),(2,3),(3,4),(4,0)
        let line = lagrange_interpolate(
            &f,
            &[
                (Element(1), Element(2)),
                (Element(2), Element(3)),
                (Element(3), Element(4)),
                (Element(4), Element(0)),
            ],
        )
        .unwrap();
        assert_eq!(line, p(&f, &[1, 1]));
        assert!(matches!(
            lagrange_interpolate(&f, &[(Element(1), Element(0)), (Element(1), Element(2))]),
            Err(Error::DuplicateAbscissa(1))
        ));
        assert!(lagrange_interpolate(&f, &[]).is_err());
    }

    #[test]
    fn vanishing_poly_examples() {
        let f = gf5();
        // over the nonzero elements of GF(5): x^4 - 1
        let n = vanishing_poly(&f, &[Element(1), Element(2), Element(3), Element(4)]).unwrap();
        assert_eq!(n, p(&f, &[4, 0, 0, 0, 1]));
        assert_eq!(vanishing_poly(&f, &[Element(0)]).unwrap(), p(&f, &[0, 1]));
        // over all of GF(4): x^4 + x = x^q - x
        let f4 = gf4();
        let all: Vec<_> = f4.all_elements().collect();
        assert_eq!(vanishing_poly(&f4, &all).unwrap(), p(&f4, &[0, 1, 0, 0, 1]));
    }

    #[test]
    fn reduce_mod_vanishing_examples() {
        let f = gf5();
        let d = [Element(1), Element(2), Element(3), Element(4)];
        let x4 = p(&f, &[0, 0, 0, 0, 1]);
        assert_eq!(reduce_mod_vanishing(&x4, &d).unwrap(), Polynomial::one(f.clone()));
        let low = p(&f, &[2, 3, 0, 1]);
        assert_eq!(reduce_mod_vanishing(&low, &d).unwrap(), low);
        let n = vanishing_poly(&f, &d).unwrap();
        assert!(reduce_mod_vanishing(&n, &d).unwrap().is_zero());
        // pointwise agreement on D
        let g = p(&f, &[1, 4, 0, 2, 3, 1, 2]);
        let reduced = reduce_mod_vanishing(&g, &d).unwrap();
        assert!(reduced.degree().at_most(3));
        for &x in &d {
            assert_eq!(g.eval(x), reduced.eval(x));
        }
    }

    #[test]
    fn csv_round_trip() {
        let f = gf5();
        let g = Polynomial::parse(f.clone(), "1,0,0,1").unwrap();
        assert_eq!(g, p(&f, &[1, 0, 0, 1]));
        assert_eq!(g.to_csv(), "1,0,0,1");
        assert_eq!(Polynomial::parse(f.clone(), "0").unwrap(), Polynomial::zero(f.clone()));
        assert_eq!(Polynomial::zero(f.clone()).to_csv(), "0");
        // trailing zeros normalize away
        assert_eq!(Polynomial::parse(f.clone(), "1,2,0,0").unwrap().to_csv(), "1,2");
        assert!(Polynomial::parse(f.clone(), "1,9").is_err());
        assert!(Polynomial::parse(f, "1,x").is_err());
    }

    #[test]
    fn field_mismatch_on_mixed_ops() {
        let a = p(&gf5(), &[1, 1]);
        let b = p(&gf4(), &[1, 1]);
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(..))));
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch(..))));
        assert!(matches!(a.divrem(&b), Err(Error::FieldMismatch(..))));
    }
}
