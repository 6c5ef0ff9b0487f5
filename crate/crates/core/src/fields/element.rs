use std::fmt;

use super::{Fe, Field, FieldError};

/// An element bundled with its field, for callers that want mismatches caught
/// at runtime instead of by construction.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl FieldElement {
    pub fn new(field: &Field, encoding: u64) -> Result<Self, FieldError> {
        Ok(FieldElement { value: field.element(encoding)?, field: field.clone() })
    }

    pub fn from_fe(field: &Field, value: Fe) -> Self {
        debug_assert!(value.0 < field.order());
        FieldElement { field: field.clone(), value }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn encoding(&self) -> u32 {
        self.value.0
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn apply(&self, op: ArithOp, other: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.field != other.field {
            return Err(FieldError::Mismatch(self.field.to_string(), other.field.to_string()));
        }
        let f = &self.field;
        let value = match op {
            ArithOp::Add => f.add(self.value, other.value),
            ArithOp::Sub => f.sub(self.value, other.value),
            ArithOp::Mul => f.mul(self.value, other.value),
        };
        Ok(FieldElement { field: f.clone(), value })
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), value: self.field.neg(self.value) }
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(FieldElement { field: self.field.clone(), value: self.field.inv(self.value)? })
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement { field: self.field.clone(), value: self.field.pow(self.value, e) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatched_fields_are_rejected() {
        let f3 = Field::prime(3).unwrap();
        let f9: Field = "3^2".parse().unwrap();
        let a = FieldElement::new(&f3, 1).unwrap();
        let b = FieldElement::new(&f9, 1).unwrap();
        assert!(matches!(a.apply(ArithOp::Add, &b), Err(FieldError::Mismatch(..))));
    }

    #[test]
    fn checked_ops() {
        let f3 = Field::prime(3).unwrap();
        let two = FieldElement::new(&f3, 2).unwrap();
        assert_eq!(two.apply(ArithOp::Add, &two).unwrap().encoding(), 1);
        assert_eq!(two.apply(ArithOp::Mul, &two).unwrap().encoding(), 1);
        assert_eq!(two.neg().encoding(), 1);
        assert_eq!(two.inv().unwrap().encoding(), 2);
        assert!(FieldElement::new(&f3, 0).unwrap().inv().is_err());
        assert!(FieldElement::new(&f3, 3).is_err());
        let f9: Field = "3^2".parse().unwrap();
        assert_eq!(FieldElement::new(&f9, 7).unwrap().coeffs(), vec![1, 2]);
    }
}
