use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest variable count [`brute_model`] accepts.
pub const MAX_BRUTE_VARS: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("duplicate variable in clause {0}")]
    DuplicateVariable(usize),
    #[error("clause {0} is not an ordered triple i0 < i1 < i2")]
    Unordered(usize),
    #[error("clause {clause} mentions variable {var} outside 0..{m}")]
    VariableOutOfRange { clause: usize, var: usize, m: usize },
    #[error("occurrence count of variable {var} is {count}, expected 3")]
    OccurrenceCount { var: usize, count: usize },
    #[error("formula declares {m} clauses but lists {got}")]
    ClauseCount { m: usize, got: usize },
    #[error("model search limited to {MAX_BRUTE_VARS} variables, formula has {0}")]
    TooLarge(usize),
}

/// A cubic monotone one-in-three 3-SAT instance: `m` clauses over the
/// variables `X_0..X_{m-1}`, each variable in exactly three clauses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cm1in3Formula {
    m: usize,
    clauses: Vec<[usize; 3]>,
}

impl Cm1in3Formula {
    pub fn new(m: usize, clauses: Vec<[usize; 3]>) -> Result<Self, FormulaError> {
        for (i, c) in clauses.iter().enumerate() {
            if c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
                return Err(FormulaError::DuplicateVariable(i));
            }
            if !(c[0] < c[1] && c[1] < c[2]) {
                return Err(FormulaError::Unordered(i));
            }
            if let Some(&v) = c.iter().find(|&&v| v >= m) {
                return Err(FormulaError::VariableOutOfRange { clause: i, var: v, m });
            }
        }
        let mut count = vec![0usize; m];
        for c in &clauses {
            for &v in c {
                count[v] += 1;
            }
        }
        if let Some((var, &c)) = count.iter().enumerate().find(|(_, &c)| c != 3) {
            return Err(FormulaError::OccurrenceCount { var, count: c });
        }
        if clauses.len() != m {
            return Err(FormulaError::ClauseCount { m, got: clauses.len() });
        }
        Ok(Cm1in3Formula { m, clauses })
    }

    /// The six-clause instance used throughout as the running example.
    pub fn example() -> Self {
        Cm1in3Formula::new(6, vec![[0, 1, 2], [0, 2, 3], [0, 1, 3], [2, 4, 5], [1, 4, 5], [3, 4, 5]])
            .expect("example formula is cubic monotone")
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// Every clause meets `model` in exactly one variable.
    pub fn is_model(&self, model: &[usize]) -> bool {
        self.clauses.iter().all(|c| c.iter().filter(|v| model.contains(v)).count() == 1)
    }
}

/// The first one-in-three model in lexicographic order of sorted variable
/// lists, or `None`.
pub fn brute_model(f: &Cm1in3Formula) -> Result<Option<Vec<usize>>, FormulaError> {
    if f.m > MAX_BRUTE_VARS {
        return Err(FormulaError::TooLarge(f.m));
    }
    let mut hits = vec![0u8; f.clauses.len()];
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); f.m];
    for (i, c) in f.clauses.iter().enumerate() {
        for &v in c {
            occurs[v].push(i);
        }
    }
    let mut chosen = Vec::new();
    Ok(dfs(f, &occurs, &mut hits, &mut chosen, 0))
}

// Preorder over increasing variable lists visits subsets in lexicographic
// order, so the first complete hit is the lexicographically least model.
fn dfs(f: &Cm1in3Formula, occurs: &[Vec<usize>], hits: &mut [u8], chosen: &mut Vec<usize>, next: usize) -> Option<Vec<usize>> {
    if hits.iter().all(|&h| h == 1) {
        return Some(chosen.clone());
    }
    for v in next..f.m {
        if occurs[v].iter().any(|&c| hits[c] >= 1) {
            continue;
        }
        for &c in &occurs[v] {
            hits[c] += 1;
        }
        chosen.push(v);
        if let Some(m) = dfs(f, occurs, hits, chosen, v + 1) {
            return Some(m);
        }
        chosen.pop();
        for &c in &occurs[v] {
            hits[c] -= 1;
        }
    }
    None
}
