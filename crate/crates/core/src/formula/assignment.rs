use super::lit::{Lit, Var};

/// A partial map from variables to truth values over a dense domain `1..=max_var`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new(max_var: u32) -> Assignment {
        Assignment {
            values: vec![None; max_var as usize + 1],
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, bool)>>(pairs: I) -> Assignment {
        let mut a = Assignment::default();
        for (v, b) in pairs {
            a.set(v, b);
        }
        a
    }

    /// Builds a total assignment over `vars` from the low bits of `bits` (first var = bit 0).
    pub fn from_bits(vars: &[Var], bits: u64) -> Assignment {
        Assignment::from_pairs(vars.iter().enumerate().map(|(i, &v)| (v, bits >> i & 1 == 1)))
    }

    pub fn max_var(&self) -> u32 {
        self.values.len().saturating_sub(1) as u32
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get(v.idx()).copied().flatten()
    }

    /// Panics when `v` is unassigned.
    pub fn value(&self, v: Var) -> bool {
        self.get(v)
            .unwrap_or_else(|| panic!("variable {v} is unassigned"))
    }

    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        self.get(l.var()).map(|b| b == l.polarity())
    }

    pub fn set(&mut self, v: Var, b: bool) {
        if v.idx() >= self.values.len() {
            self.values.resize(v.idx() + 1, None);
        }
        self.values[v.idx()] = Some(b);
    }

    pub fn unset(&mut self, v: Var) {
        if let Some(slot) = self.values.get_mut(v.idx()) {
            *slot = None;
        }
    }

    pub fn is_assigned(&self, v: Var) -> bool {
        self.get(v).is_some()
    }

    /// Assigned variables in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| (Var::new(i as u32), b)))
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Restriction to `vars`; variables unassigned here stay unassigned.
    pub fn project(&self, vars: &[Var]) -> Assignment {
        Assignment::from_pairs(vars.iter().filter_map(|&v| self.get(v).map(|b| (v, b))))
    }

    /// The values of `vars` in order. Panics if one is unassigned.
    pub fn values_of(&self, vars: &[Var]) -> Vec<bool> {
        vars.iter().map(|&v| self.value(v)).collect()
    }

    /// Literals that are true under this assignment, restricted to `vars`.
    pub fn cube(&self, vars: &[Var]) -> Vec<Lit> {
        vars.iter().map(|&v| v.lit(self.value(v))).collect()
    }
}
