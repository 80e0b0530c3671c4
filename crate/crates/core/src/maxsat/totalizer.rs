use crate::formula::{Lit, Var};

/// Unary counter over input literals. Output `k` (1-based) is implied true
/// whenever at least `k` inputs are true, so asserting its negation bounds the
/// count from above.
#[derive(Clone, Debug)]
pub struct Totalizer {
    outputs: Vec<Lit>,
}

impl Totalizer {
    /// Clauses go to `sink`; auxiliary variables are taken from `next_var`.
    pub fn build(inputs: &[Lit], next_var: &mut u32, sink: &mut dyn FnMut(Vec<Lit>)) -> Totalizer {
        let outputs = if inputs.is_empty() {
            Vec::new()
        } else {
            Self::node(inputs, next_var, sink)
        };
        Totalizer { outputs }
    }

    fn node(inputs: &[Lit], next_var: &mut u32, sink: &mut dyn FnMut(Vec<Lit>)) -> Vec<Lit> {
        if inputs.len() == 1 {
            return inputs.to_vec();
        }
        let mid = inputs.len() / 2;
        let a = Self::node(&inputs[..mid], next_var, sink);
        let b = Self::node(&inputs[mid..], next_var, sink);
        let out: Vec<Lit> = (0..a.len() + b.len())
            .map(|_| {
                let v = Var::new(*next_var);
                *next_var += 1;
                v.pos()
            })
            .collect();
        for i in 0..=a.len() {
            for j in 0..=b.len() {
                if i + j == 0 {
                    continue;
                }
                let mut c = Vec::with_capacity(3);
                if i > 0 {
                    c.push(!a[i - 1]);
                }
                if j > 0 {
                    c.push(!b[j - 1]);
                }
                c.push(out[i + j - 1]);
                sink(c);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    /// Assumption literal enforcing "at most `k` inputs true"; `None` when the
    /// bound is trivially satisfied.
    pub fn at_most(&self, k: usize) -> Option<Lit> {
        self.outputs.get(k).map(|&o| !o)
    }
}
