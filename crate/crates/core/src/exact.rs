//! Exact rational arithmetic and its JSON rendering.
//!
//! Densities are `Ratio<u64>`; anything that sums many terms with
//! unrelated denominators uses [`BigRational`]. On the wire every exact
//! value is `{"exact": "p/q", "float": x}` with the float purely advisory.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub type Density = Ratio<u64>;

/// `num / den`, with `0/0` read as zero (densities of empty windows).
pub fn density(num: usize, den: usize) -> Density {
    if den == 0 {
        Ratio::new_raw(0, 1)
    } else {
        Ratio::new(num as u64, den as u64)
    }
}

pub fn to_big(r: &Density) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// The decimal that `x` prints as, read back exactly: `0.1` becomes `1/10`.
///
/// Thresholds arrive as decimal text from users, so this is the value they
/// meant rather than the nearest binary fraction.
pub fn decimal(x: f64) -> BigRational {
    if !x.is_finite() {
        return BigRational::zero();
    }
    let text = format!("{x}");
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text.as_str()),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let numer: BigInt = format!("{int}{frac}").parse().unwrap_or_default();
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    BigRational::new(numer * sign, denom)
}

/// `r >= x` with `x` read as a decimal.
pub fn ge_f64(r: &Density, x: f64) -> bool {
    to_big(r) >= decimal(x)
}

pub fn render(numer: impl ToString, denom: impl ToString) -> String {
    format!("{}/{}", numer.to_string(), denom.to_string())
}

pub fn density_f64(r: &Density) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn big_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

fn write<S: Serializer>(s: S, exact: String, float: f64) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Exact", 2)?;
    st.serialize_field("exact", &exact)?;
    st.serialize_field("float", &float)?;
    st.end()
}

pub fn ser_density<S: Serializer>(r: &Density, s: S) -> Result<S::Ok, S::Error> {
    write(s, render(r.numer(), r.denom()), density_f64(r))
}

pub fn ser_big<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    write(s, render(r.numer(), r.denom()), big_f64(r))
}

/// Wrapper so exact values can sit inside collections that derive `Serialize`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactDensity(pub Density);

impl Serialize for ExactDensity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_density(&self.0, s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactBig(pub BigRational);

impl Serialize for ExactBig {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_big(&self.0, s)
    }
}
