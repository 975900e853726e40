use crate::error::{Error, Result};
use crate::instance::{ElementId, ElementSet};
use crate::oracle::{Evaluator, Objective};

/// Additive set function `f(S) = Σ_{e ∈ S} value[e]`.
#[derive(Clone, Debug)]
pub struct Modular {
    values: Vec<f64>,
}

impl Modular {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("modular values must be finite".into()));
        }
        Ok(Modular { values })
    }
}

impl Objective for Modular {
    fn ground_size(&self) -> usize {
        self.values.len()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        set.sorted_ids().into_iter().map(|e| self.values[e.index()]).sum()
    }

    fn evaluator(&self, base: &ElementSet) -> Box<dyn Evaluator + '_> {
        let mut eval = ModularEvaluator {
            values: &self.values,
            inside: vec![false; self.values.len()],
            value: 0.0,
        };
        for e in base {
            eval.insert(e);
        }
        Box::new(eval)
    }
}

struct ModularEvaluator<'a> {
    values: &'a [f64],
    inside: Vec<bool>,
    value: f64,
}

impl Evaluator for ModularEvaluator<'_> {
    fn value(&self) -> f64 {
        self.value
    }

    fn gain(&self, e: ElementId) -> f64 {
        if self.inside[e.index()] {
            0.0
        } else {
            self.values[e.index()]
        }
    }

    fn insert(&mut self, e: ElementId) {
        if !self.inside[e.index()] {
            self.inside[e.index()] = true;
            self.value += self.values[e.index()];
        }
    }
}

/// Non-negative combination `Σ_j coef_j · f_j` of objectives over the same ground set.
pub struct WeightedSum {
    n: usize,
    parts: Vec<(f64, Box<dyn Objective>)>,
}

impl WeightedSum {
    pub fn new(parts: Vec<(f64, Box<dyn Objective>)>) -> Result<Self> {
        let n = parts
            .first()
            .map(|(_, f)| f.ground_size())
            .ok_or_else(|| Error::param("a weighted sum needs at least one part"))?;
        for (coef, f) in &parts {
            if !(coef.is_finite() && *coef >= 0.0) {
                return Err(Error::param(format!("coefficient {coef} must be non-negative")));
            }
            if f.ground_size() != n {
                return Err(Error::param("all parts must share one ground set"));
            }
        }
        Ok(WeightedSum { n, parts })
    }
}

impl Objective for WeightedSum {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.parts.iter().map(|(c, f)| c * f.value(set)).sum()
    }

    fn evaluator(&self, base: &ElementSet) -> Box<dyn Evaluator + '_> {
        Box::new(SumEvaluator {
            parts: self
                .parts
                .iter()
                .map(|(c, f)| (*c, f.evaluator(base)))
                .collect(),
        })
    }
}

struct SumEvaluator<'a> {
    parts: Vec<(f64, Box<dyn Evaluator + 'a>)>,
}

impl Evaluator for SumEvaluator<'_> {
    fn value(&self) -> f64 {
        self.parts.iter().map(|(c, e)| c * e.value()).sum()
    }

    fn gain(&self, e: ElementId) -> f64 {
        self.parts.iter().map(|(c, ev)| c * ev.gain(e)).sum()
    }

    fn insert(&mut self, e: ElementId) {
        for (_, ev) in &mut self.parts {
            ev.insert(e);
        }
    }
}
