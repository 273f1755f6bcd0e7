//! Points of the affine plane with coordinates in one number field
//! `L = Q(gamma)`, presented on the power basis of `gamma`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numbers::{AlgebraicNumber, NumberFieldElement, ProjPoint};

#[derive(Clone, Debug)]
pub struct FieldPoint {
    pub field: Arc<AlgebraicNumber>,
    pub u: NumberFieldElement,
    pub v: NumberFieldElement,
}

fn rational_field() -> Arc<AlgebraicNumber> {
    Arc::new(AlgebraicNumber::rational(&BigRational::zero()))
}

impl FieldPoint {
    /// Presents `(a1, a2)` over a common field. Supported: both rational, one
    /// rational, or both the same root of the same minimal polynomial.
    pub fn from_pair(a1: &AlgebraicNumber, a2: &AlgebraicNumber) -> Result<Self> {
        match (a1.as_rational(), a2.as_rational()) {
            (Some(r1), Some(r2)) => Ok(Self::rational(r1, r2)),
            (None, Some(r2)) => {
                let f = Arc::new(a1.clone());
                Ok(Self {
                    u: NumberFieldElement::generator(f.clone()),
                    v: NumberFieldElement::from_rational(f.clone(), r2),
                    field: f,
                })
            }
            (Some(r1), None) => {
                let f = Arc::new(a2.clone());
                Ok(Self {
                    u: NumberFieldElement::from_rational(f.clone(), r1),
                    v: NumberFieldElement::generator(f.clone()),
                    field: f,
                })
            }
            (None, None) => {
                if a1.minpoly == a2.minpoly && a1.distinguished == a2.distinguished {
                    let f = Arc::new(a1.clone());
                    let g = NumberFieldElement::generator(f.clone());
                    Ok(Self { u: g.clone(), v: g, field: f })
                } else {
                    Err(Error::UnsupportedField(
                        "coordinates must be rational or the same algebraic number".into(),
                    ))
                }
            }
        }
    }

    pub fn rational(r1: BigRational, r2: BigRational) -> Self {
        let f = rational_field();
        Self {
            u: NumberFieldElement::from_rational(f.clone(), r1),
            v: NumberFieldElement::from_rational(f.clone(), r2),
            field: f,
        }
    }

    /// Finite point of `P^1 x P^1` with rational coordinates; `None` when a
    /// factor is the point at infinity.
    pub fn from_proj(p1: &ProjPoint, p2: &ProjPoint) -> Option<Self> {
        Some(Self::rational(p1.affine()?, p2.affine()?))
    }

    /// `[L : Q]`.
    pub fn degree(&self) -> usize {
        self.field.degree()
    }
}
