use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Real polynomial with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn monomial(degree: usize, coeff: f64) -> Self {
        let mut c = vec![0.0; degree + 1];
        c[degree] = coeff;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![0.0]);
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Polynomial::new(c)
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Polynomial {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0.0);
        c.extend(self.coeffs.iter().enumerate().map(|(k, &c)| c / (k as f64 + 1.0)));
        Polynomial::new(c)
    }

    pub fn sum_coeffs(&self) -> f64 {
        self.coeffs.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePolynomialError {
    pub term: alloc::string::String,
}

impl fmt::Display for ParsePolynomialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse polynomial term `{}`", self.term)
    }
}

impl core::error::Error for ParsePolynomialError {}

fn parse_coeff(s: &str) -> Option<f64> {
    let s = s.trim().trim_end_matches('*').trim();
    if s.is_empty() {
        return Some(1.0);
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            (d != 0.0).then(|| n / d)
        }
        None => s.parse().ok(),
    }
}

/// Accepts sums such as `"0.2 x + 0.25 x^2 + 0.1 x^6"`, `"2/45 + 4/9 x^3"` or
/// `"x^5"`. Only `+` separates terms; coefficients must be non-negative.
impl FromStr for Polynomial {
    type Err = ParsePolynomialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |t: &str| ParsePolynomialError { term: t.into() };
        let mut coeffs: Vec<f64> = Vec::new();
        if s.trim().is_empty() {
            return Err(err(s));
        }
        for raw in s.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(err(raw));
            }
            let (coef, power) = match term.find('x') {
                Some(pos) => {
                    let coef = parse_coeff(&term[..pos]).ok_or_else(|| err(term))?;
                    let rest = term[pos + 1..].trim();
                    let power = if rest.is_empty() {
                        1
                    } else {
                        let p = rest.strip_prefix('^').ok_or_else(|| err(term))?;
                        p.trim().parse::<usize>().map_err(|_| err(term))?
                    };
                    (coef, power)
                }
                None => (parse_coeff(term).ok_or_else(|| err(term))?, 0),
            };
            if !coef.is_finite() {
                return Err(err(term));
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0.0);
            }
            coeffs[power] += coef;
        }
        Ok(Polynomial::new(coeffs))
    }
}
