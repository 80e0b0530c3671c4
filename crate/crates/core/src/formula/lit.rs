use std::fmt;
use std::ops::Not;

/// A propositional variable. Indices start at 1, as in DIMACS.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u32);

impl Var {
    /// Panics on index 0.
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variable indices start at 1");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Slot in a dense array sized `num_vars + 1` (slot 0 unused).
    pub fn idx(self) -> usize {
        self.0 as usize
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, false)
    }

    pub fn neg(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn lit(self, value: bool) -> Lit {
        Lit::new(self, !value)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal, packed as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, negated: bool) -> Lit {
        Lit(var.0 << 1 | negated as u32)
    }

    /// From a signed DIMACS integer. Panics on 0.
    pub fn from_dimacs(value: i64) -> Lit {
        assert!(value != 0, "0 is not a literal");
        Lit::new(Var::new(value.unsigned_abs() as u32), value < 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().0 as i64;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    /// The truth value the variable must take for this literal to hold.
    pub fn polarity(self) -> bool {
        !self.is_negated()
    }

    /// Dense code usable as an array index (`2 * var + negated`).
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_roundtrip() {
        for v in [-7i64, -1, 1, 42] {
            assert_eq!(Lit::from_dimacs(v).to_dimacs(), v);
        }
        let l = Lit::from_dimacs(-3);
        assert_eq!(l.var(), Var::new(3));
        assert!(l.is_negated());
        assert_eq!(!l, Var::new(3).pos());
        assert_eq!(Var::new(3).lit(false), l);
    }

    #[test]
    #[should_panic]
    fn zero_var_rejected() {
        Var::new(0);
    }
}
