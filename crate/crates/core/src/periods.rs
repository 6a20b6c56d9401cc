//! Classical periods, closed-form quantum periods, regularisation and
//! recurrence guessing.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::laurent::{power_constant_terms, LaurentPolynomial};
use crate::linalg::RationalMatrix;
use crate::ring::{factorial, Coefficient, IntegerPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error("need at least {needed} coefficients, got {got}")]
    InsufficientCoefficients { needed: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    Classical,
    Quantum,
    RegularisedQuantum,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Classical => "classical",
            SeriesKind::Quantum => "quantum",
            SeriesKind::RegularisedQuantum => "regularised-quantum",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [SeriesKind::Classical, SeriesKind::Quantum, SeriesKind::RegularisedQuantum]
            .into_iter()
            .find(|k| k.name() == name)
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Truncated power series `c_0 + c_1 t + ... + c_N t^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodSeries<R> {
    coefficients: Vec<R>,
    kind: SeriesKind,
}

impl<R: Coefficient> PeriodSeries<R> {
    /// Panics on an empty coefficient list.
    pub fn new(coefficients: Vec<R>, kind: SeriesKind) -> Self {
        assert!(!coefficients.is_empty(), "a series has at least c_0");
        Self { coefficients, kind }
    }

    pub fn coefficients(&self) -> &[R] {
        &self.coefficients
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coefficients.len());
        Self::new(self.coefficients[..n].to_vec(), self.kind)
    }

    pub fn map<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> PeriodSeries<S> {
        PeriodSeries::new(self.coefficients.iter().map(f).collect(), self.kind)
    }
}

impl PeriodSeries<BigInt> {
    pub fn to_rational(&self) -> PeriodSeries<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }
}

impl PeriodSeries<IntegerPolynomial> {
    /// Evaluates every coefficient at `a`.
    pub fn specialize(&self, a: &BigInt) -> PeriodSeries<BigInt> {
        self.map(|c| c.evaluate(a))
    }
}

/// `π_f = Σ coeff_1(f^k) t^k` up to `t^n`.
pub fn classical_period<R: Coefficient>(f: &LaurentPolynomial<R>, n: usize) -> PeriodSeries<R> {
    PeriodSeries::new(power_constant_terms(f, n), SeriesKind::Classical)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// A (1,1) divisor in P²×P².
    X2,
    /// P¹×P¹×P¹.
    X3,
}

impl Model {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "X2" | "x2" => Some(Model::X2),
            "X3" | "x3" => Some(Model::X3),
            _ => None,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::X2 => "X2",
            Model::X3 => "X3",
        })
    }
}

/// Closed-form quantum period up to `t^n`:
/// `Σ (l+m)!/(l!³m!³) t^(2l+2m)` for X2 and `Σ 1/(l!²m!²n!²) t^(2l+2m+2n)` for X3.
pub fn quantum_period(model: Model, n: usize) -> PeriodSeries<BigRational> {
    let half = n / 2;
    let facts: Vec<BigInt> = (0..=half as u64).map(factorial).collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    match model {
        Model::X2 => {
            for l in 0..=half {
                for m in 0..=half - l {
                    let den = facts[l].pow(3) * facts[m].pow(3);
                    coeffs[2 * (l + m)] += BigRational::new(facts[l + m].clone(), den);
                }
            }
        }
        Model::X3 => {
            for l in 0..=half {
                for m in 0..=half - l {
                    for k in 0..=half - l - m {
                        let den = (&facts[l] * &facts[m] * &facts[k]).pow(2);
                        coeffs[2 * (l + m + k)] += BigRational::new(BigInt::one(), den);
                    }
                }
            }
        }
    }
    PeriodSeries::new(coeffs, SeriesKind::Quantum)
}

/// Multiplies the coefficient of `t^d` by `d!`.
pub fn regularise<R: Coefficient>(s: &PeriodSeries<R>) -> PeriodSeries<R> {
    let coeffs = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(d, c)| c.mul_ref(&R::from_integer(factorial(d as u64))))
        .collect();
    let kind = match s.kind {
        SeriesKind::Quantum => SeriesKind::RegularisedQuantum,
        other => other,
    };
    PeriodSeries::new(coeffs, kind)
}

/// Divides the coefficient of `t^d` by `d!`.
pub fn deregularise(s: &PeriodSeries<BigRational>) -> PeriodSeries<BigRational> {
    let coeffs = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(d, c)| c / BigRational::from_integer(factorial(d as u64)))
        .collect();
    let kind = match s.kind {
        SeriesKind::RegularisedQuantum => SeriesKind::Quantum,
        other => other,
    };
    PeriodSeries::new(coeffs, kind)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MirrorVerdict {
    EqualToOrder(usize),
    Mismatch { index: usize, classical: BigRational, quantum: BigRational },
}

impl fmt::Display for MirrorVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MirrorVerdict::EqualToOrder(n) => write!(f, "equal to order {n}"),
            MirrorVerdict::Mismatch { index, classical, quantum } => {
                write!(f, "mismatch at index {index}: classical {classical}, quantum {quantum}")
            }
        }
    }
}

/// Compares two series coefficient by coefficient up to `n`.
pub fn compare_series(
    classical: &PeriodSeries<BigRational>,
    quantum: &PeriodSeries<BigRational>,
    n: usize,
) -> MirrorVerdict {
    let pairs = classical.coefficients.iter().zip(&quantum.coefficients).take(n + 1);
    for (index, (c, q)) in pairs.enumerate() {
        if c != q {
            return MirrorVerdict::Mismatch { index, classical: c.clone(), quantum: q.clone() };
        }
    }
    MirrorVerdict::EqualToOrder(n)
}

/// Compares `π_f` with the regularised quantum period of `model` up to `t^n`.
pub fn mirror_check(f: &LaurentPolynomial<BigInt>, model: Model, n: usize) -> MirrorVerdict {
    let classical = classical_period(f, n).to_rational();
    let quantum = regularise(&quantum_period(model, n));
    compare_series(&classical, &quantum, n)
}

/// `Σ_{i=0}^{r} p_i(k) c_{k+i} = 0` with integer polynomials `p_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRecurrence {
    degree: usize,
    /// `polynomials[i][j]` is the coefficient of `k^j` in `p_i`.
    polynomials: Vec<Vec<BigInt>>,
}

impl LinearRecurrence {
    /// Panics if the shape is ragged or `p_r` is zero.
    pub fn new(polynomials: Vec<Vec<BigInt>>) -> Self {
        assert!(polynomials.len() >= 2, "order at least 1");
        let degree = polynomials[0].len().saturating_sub(1);
        assert!(polynomials.iter().all(|p| p.len() == degree + 1), "ragged recurrence");
        assert!(polynomials.last().unwrap().iter().any(|c| !c.is_zero()), "zero leading polynomial");
        Self { degree, polynomials }
    }

    pub fn order(&self) -> usize {
        self.polynomials.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn polynomials(&self) -> &[Vec<BigInt>] {
        &self.polynomials
    }

    fn eval(p: &[BigInt], k: usize) -> BigInt {
        let k = BigInt::from(k);
        p.iter().rev().fold(BigInt::zero(), |acc, c| acc * &k + c)
    }

    /// Value of the left-hand side at `k`.
    pub fn residual(&self, series: &[BigRational], k: usize) -> BigRational {
        self.polynomials
            .iter()
            .enumerate()
            .map(|(i, p)| BigRational::from_integer(Self::eval(p, k)) * &series[k + i])
            .sum()
    }

    /// True when every index with a full window is annihilated.
    pub fn annihilates(&self, series: &[BigRational]) -> bool {
        let r = self.order();
        series.len() > r && (0..series.len() - r).all(|k| self.residual(series, k).is_zero())
    }
}

fn format_k_poly(p: &[BigInt]) -> String {
    let mut parts = Vec::new();
    for (j, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let abs = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        let body = match j {
            0 => abs.to_string(),
            _ => {
                let coef = if abs.is_one() { String::new() } else { format!("{abs}*") };
                let pow = if j == 1 { String::new() } else { format!("^{j}") };
                format!("{coef}k{pow}")
            }
        };
        parts.push((sign, body));
    }
    let mut out = String::new();
    for (n, (sign, body)) in parts.iter().enumerate() {
        if n == 0 {
            if *sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(if *sign == "-" { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}

impl fmt::Display for LinearRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, p) in self.polynomials.iter().enumerate().rev() {
            if p.iter().all(Zero::is_zero) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let shift = if i == 0 { "c(k)".to_string() } else { format!("c(k+{i})") };
            write!(f, "({})*{shift}", format_k_poly(p))?;
        }
        write!(f, " = 0")
    }
}

/// Number of validation rows required beyond the unknown count.
pub const SURPLUS_ROWS: usize = 10;

/// Searches `(r, d)` in increasing lexicographic order, `1 <= r <= max_order`,
/// `0 <= d <= max_degree`, for a recurrence annihilating every window of the
/// series. Among several solutions for the first successful `(r, d)`, the
/// lexicographically smallest normalized coefficient vector wins.
pub fn guess_recurrence(
    series: &[BigRational],
    max_order: usize,
    max_degree: usize,
) -> Result<Option<LinearRecurrence>, PeriodError> {
    let needed = (max_order + 1) * (max_degree + 1) + max_order + SURPLUS_ROWS;
    if series.len() < needed {
        return Err(PeriodError::InsufficientCoefficients { needed, got: series.len() });
    }
    for r in 1..=max_order {
        for d in 0..=max_degree {
            if let Some(rec) = solve_shape(series, r, d) {
                return Ok(Some(rec));
            }
        }
    }
    Ok(None)
}

fn solve_shape(series: &[BigRational], r: usize, d: usize) -> Option<LinearRecurrence> {
    let cols = (r + 1) * (d + 1);
    let rows: Vec<Vec<BigRational>> = (0..series.len() - r)
        .map(|k| {
            let kq = BigRational::from_integer(BigInt::from(k));
            let mut row = Vec::with_capacity(cols);
            for c in &series[k..=k + r] {
                let mut pow = BigRational::one();
                for _ in 0..=d {
                    row.push(&pow * c);
                    pow *= &kq;
                }
            }
            row
        })
        .collect();
    let lead = r * (d + 1)..cols;
    RationalMatrix::from_rows(rows)
        .nullspace()
        .into_iter()
        .filter(|v| v[lead.clone()].iter().any(|c| !c.is_zero()))
        .map(|v| normalize(&v, lead.clone()))
        .min_by(|a, b| lex(a, b))
        .map(|v| LinearRecurrence::new(v.chunks(d + 1).map(<[BigInt]>::to_vec).collect()))
}

/// Clears denominators, divides by the content and makes the top nonzero
/// coefficient of the leading polynomial positive.
fn normalize(v: &[BigRational], lead: std::ops::Range<usize>) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    for c in &mut ints {
        *c = &*c / &content;
    }
    let top = ints[lead].iter().rev().find(|c| !c.is_zero()).cloned().expect("nonzero leading polynomial");
    if top.is_negative() {
        for c in &mut ints {
            *c = -&*c;
        }
    }
    ints
}

fn lex(a: &[BigInt], b: &[BigInt]) -> Ordering {
    a.iter().cmp(b.iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{family_f, family_f_symbolic, parse_expression};
    use crate::ring::binomial;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn classical_periods_of_the_family() {
        let f2 = classical_period(&family_f(BigInt::from(2)), 10);
        assert_eq!(f2.coefficients(), ints(&[1, 0, 4, 0, 60, 0, 1120, 0, 24220, 0, 567504]).as_slice());
        let f3 = classical_period(&family_f(BigInt::from(3)), 10);
        assert_eq!(f3.coefficients(), ints(&[1, 0, 6, 0, 90, 0, 1860, 0, 44730, 0, 1172556]).as_slice());
        assert_eq!(f3.kind(), SeriesKind::Classical);
    }

    #[test]
    fn symbolic_series_specializes() {
        let sym = classical_period(&family_f_symbolic(), 6);
        assert_eq!(sym.coefficients()[2].to_string(), "2*a");
        assert_eq!(sym.coefficients()[4].to_string(), "6*a^2+36");
        assert_eq!(sym.coefficients()[6].to_string(), "20*a^3+360*a+240");
        let at2 = sym.specialize(&BigInt::from(2));
        assert_eq!(at2, classical_period(&family_f(BigInt::from(2)), 6));
    }

    #[test]
    fn quantum_low_order() {
        let x2 = quantum_period(Model::X2, 4);
        assert_eq!(x2.coefficients()[0], q(1, 1));
        assert_eq!(x2.coefficients()[2], q(2, 1));
        // l+m = 2: 2/8 + 2/1 + 2/8
        assert_eq!(x2.coefficients()[4], q(5, 2));
        let x3 = quantum_period(Model::X3, 2);
        assert_eq!(x3.coefficients()[2], q(3, 1));
    }

    #[test]
    fn regularise_and_back() {
        let reg = regularise(&quantum_period(Model::X2, 10));
        assert_eq!(reg.kind(), SeriesKind::RegularisedQuantum);
        let expected: Vec<BigRational> = [1, 0, 4, 0, 60, 0, 1120, 0, 24220, 0, 567504].iter().map(|&c| q(c, 1)).collect();
        assert_eq!(reg.coefficients(), expected.as_slice());
        assert_eq!(deregularise(&reg), quantum_period(Model::X2, 10));
        let f2 = classical_period(&family_f(BigInt::from(2)), 4).to_rational();
        assert_eq!(deregularise(&f2).coefficients(), &[q(1, 1), q(0, 1), q(2, 1), q(0, 1), q(5, 2)]);
        let one = PeriodSeries::new(vec![q(1, 1)], SeriesKind::Classical);
        assert_eq!(deregularise(&one), one);
    }

    #[test]
    fn mirror_verdicts() {
        assert_eq!(mirror_check(&family_f(BigInt::from(2)), Model::X2, 10), MirrorVerdict::EqualToOrder(10));
        assert_eq!(mirror_check(&family_f(BigInt::from(3)), Model::X3, 10), MirrorVerdict::EqualToOrder(10));
        assert_eq!(
            mirror_check(&family_f(BigInt::from(3)), Model::X2, 10),
            MirrorVerdict::Mismatch { index: 2, classical: q(6, 1), quantum: q(4, 1) }
        );
    }

    #[test]
    fn constant_series_recurrence() {
        let ones = vec![q(1, 1); 20];
        let rec = guess_recurrence(&ones, 1, 0).unwrap().unwrap();
        assert_eq!(rec.polynomials(), &[ints(&[-1]), ints(&[1])]);
        assert_eq!(rec.to_string(), "(1)*c(k+1) + (-1)*c(k) = 0");
    }

    #[test]
    fn central_binomial_recurrence() {
        let f = parse_expression("x + x^-1").unwrap();
        let series = classical_period(f.as_integer().unwrap(), 40).to_rational();
        for n in 0..15u64 {
            assert_eq!(series.coefficients()[2 * n as usize], BigRational::from_integer(binomial(2 * n, n)));
        }
        let rec = guess_recurrence(series.coefficients(), 2, 1).unwrap().unwrap();
        assert_eq!(rec.polynomials(), &[ints(&[-4, -4]), ints(&[0, 0]), ints(&[2, 1])]);
        assert!(rec.annihilates(series.coefficients()));
        assert_eq!(rec.to_string(), "(k + 2)*c(k+2) + (-4*k - 4)*c(k) = 0");
    }

    #[test]
    fn insufficient_coefficients() {
        let short = vec![q(1, 1); 5];
        assert_eq!(
            guess_recurrence(&short, 2, 2).unwrap_err(),
            PeriodError::InsufficientCoefficients { needed: 21, got: 5 }
        );
    }
}
