use std::collections::HashSet;
use std::sync::Arc;

use crate::FormError;

/// Coordinates `t_1..t_n` of a chart together with Grassmann parameters `eta_1..eta_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chart {
    even: Vec<String>,
    odd: Vec<String>,
}

/// Generators are packed into `u32` bit masks.
pub const MAX_GENERATORS: usize = 32;

impl Chart {
    pub fn new<S: AsRef<str>>(even: &[S], odd: &[S]) -> Result<Arc<Chart>, FormError> {
        let even: Vec<String> = even.iter().map(|s| s.as_ref().to_string()).collect();
        let odd: Vec<String> = odd.iter().map(|s| s.as_ref().to_string()).collect();
        if even.len() > MAX_GENERATORS || odd.len() > MAX_GENERATORS {
            return Err(FormError::TooManyGenerators);
        }
        let mut seen = HashSet::new();
        for name in even.iter().chain(odd.iter()) {
            if name.is_empty() || !seen.insert(name.clone()) {
                return Err(FormError::BadName(name.clone()));
            }
        }
        Ok(Arc::new(Chart { even, odd }))
    }

    /// `t1..tn` and `e1..ek`.
    pub fn standard(n: usize, k: usize) -> Arc<Chart> {
        let even: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        let odd: Vec<String> = (1..=k).map(|i| format!("e{i}")).collect();
        Chart::new(&even, &odd).expect("standard names are distinct")
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn even_names(&self) -> &[String] {
        &self.even
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd
    }

    pub fn even_index(&self, name: &str) -> Option<usize> {
        self.even.iter().position(|v| v == name)
    }

    pub fn odd_index(&self, name: &str) -> Option<usize> {
        self.odd.iter().position(|v| v == name)
    }

    /// Same chart with one more even coordinate appended at the end.
    pub fn with_fiber(&self, name: &str) -> Result<Arc<Chart>, FormError> {
        let mut even = self.even.clone();
        even.push(name.to_string());
        Chart::new(&even, &self.odd)
    }

    /// Same chart with one more Grassmann parameter appended at the end.
    pub fn with_odd(&self, name: &str) -> Result<Arc<Chart>, FormError> {
        let mut odd = self.odd.clone();
        odd.push(name.to_string());
        Chart::new(&self.even, &odd)
    }

    /// Grassmann parameters only.
    pub fn odd_only(&self) -> Arc<Chart> {
        Arc::new(Chart { even: Vec::new(), odd: self.odd.clone() })
    }
}
