//! Random 2-QBF instances with planted Skolem functions.
//!
//! Every output gets a random function of at most three earlier variables
//! (inputs or earlier outputs). Some outputs have their definition encoded as
//! clauses, the rest are only constrained by random clauses that the planted
//! functions satisfy, so every instance is realizable by construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Assignment, CnfFormula, Lit, QbfSpec, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub max_total_vars: u32,
    pub max_fn_inputs: usize,
    /// Probability (percent) that an output's definition is encoded.
    pub encode_percent: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_total_vars: 14,
            max_fn_inputs: 3,
            encode_percent: 75,
        }
    }
}

/// A planted function: output `var` equals `table[bits of inputs]`, with
/// `inputs[0]` as the lowest bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedFn {
    pub var: Var,
    pub inputs: Vec<Var>,
    pub table: Vec<bool>,
    pub encoded: bool,
}

impl PlantedFn {
    pub fn eval(&self, a: &Assignment) -> bool {
        let idx = self
            .inputs
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &v)| acc | ((a.value(v) as usize) << i));
        self.table[idx]
    }
}

#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub spec: QbfSpec,
    pub planted: Vec<PlantedFn>,
}

impl PlantedInstance {
    /// Extends an input assignment with the planted output values.
    pub fn complete(&self, x: &Assignment) -> Assignment {
        let mut a = x.clone();
        for p in &self.planted {
            let b = p.eval(&a);
            a.set(p.var, b);
        }
        a
    }
}

pub fn planted_instance(seed: u64, cfg: &GeneratorConfig) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = rng.gen_range(3..=cfg.max_total_vars.max(3));
    let nx = rng.gen_range(1..total).min(8);
    let ny = (total - nx).max(1);
    let x_vars: Vec<Var> = (1..=nx).map(Var::new).collect();
    let y_vars: Vec<Var> = (nx + 1..=nx + ny).map(Var::new).collect();
    let mut f = CnfFormula::new(nx + ny);
    let mut planted = Vec::new();
    for (i, &y) in y_vars.iter().enumerate() {
        let mut pool: Vec<Var> = x_vars.iter().chain(&y_vars[..i]).copied().collect();
        pool.shuffle(&mut rng);
        let k = rng.gen_range(0..=cfg.max_fn_inputs.min(pool.len()));
        let mut inputs: Vec<Var> = pool[..k].to_vec();
        inputs.sort();
        let table: Vec<bool> = (0..1usize << k).map(|_| rng.gen()).collect();
        let encoded = rng.gen_range(0..100) < cfg.encode_percent;
        if encoded {
            for (c, &out) in table.iter().enumerate() {
                let mut clause: Vec<Lit> = inputs
                    .iter()
                    .enumerate()
                    .map(|(b, &v)| v.lit((c >> b) & 1 == 0))
                    .collect();
                clause.push(y.lit(out));
                f.add_clause(clause);
            }
        }
        planted.push(PlantedFn { var: y, inputs, table, encoded });
    }
    let inst = PlantedInstance {
        spec: QbfSpec::new(f.clone(), x_vars.clone(), y_vars.clone()).expect("valid spec"),
        planted,
    };
    let points: Vec<Assignment> = (0u64..1 << nx)
        .map(|b| inst.complete(&Assignment::from_bits(&x_vars, b)))
        .collect();
    let all: Vec<Var> = x_vars.iter().chain(&y_vars).copied().collect();
    let noise = rng.gen_range(0..=2 * total as usize);
    let mut added = 0;
    let mut tries = 0;
    while added < noise && tries < 50 * (noise + 1) {
        tries += 1;
        let len = rng.gen_range(2..=3);
        let c: Vec<Lit> = all.choose_multiple(&mut rng, len).map(|&v| v.lit(rng.gen())).collect();
        if points.iter().all(|p| c.iter().any(|&l| p.lit_value(l) == Some(true))) {
            f.add_clause(c);
            added += 1;
        }
    }
    PlantedInstance {
        spec: QbfSpec::new(f, x_vars, y_vars).expect("valid spec"),
        planted: inst.planted,
    }
}
