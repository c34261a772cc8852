use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent vector, one slot per ring variable.
///
/// Ordered by graded reverse lexicographic order: higher total degree is
/// larger; on ties the monomial with the smaller exponent in the last
/// differing variable is larger.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u32; 6]>,
    degree: u32,
}

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, num_vars),
            degree: 0,
        }
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut m = Monomial::one(num_vars);
        m.exps[index] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial {
            degree: exps.iter().sum(),
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.num_vars(), other.num_vars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    /// `self / x_index`, if `x_index` divides `self`.
    pub fn div_var(&self, index: usize) -> Option<Monomial> {
        if self.exps[index] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[index] -= 1;
        m.degree -= 1;
        Some(m)
    }

    /// Index of the first variable with a positive exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    /// Exponent vector reindexed into a ring with `num_vars` slots;
    /// `map[i]` is the new slot of old variable `i`.
    pub fn remap(&self, num_vars: usize, map: &[usize]) -> Monomial {
        let mut exps = SmallVec::from_elem(0, num_vars);
        for (i, &e) in self.exps.iter().enumerate() {
            exps[map[i]] += e;
        }
        Monomial {
            exps,
            degree: self.degree,
        }
    }

    pub(crate) fn render(&self, names: &[String], out: &mut String) {
        let mut first = true;
        for (name, &e) in names.iter().zip(&self.exps) {
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(name);
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// All monomials in `num_vars` variables of total degree at most `d`,
/// in increasing grevlex order. There are `C(num_vars + d, num_vars)` of them.
pub fn monomials_up_to_degree(num_vars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; num_vars];
    fn rec(pos: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos == current.len() {
            out.push(Monomial::from_exponents(current));
            return;
        }
        for e in 0..=left {
            current[pos] = e;
            rec(pos + 1, left - e, current, out);
        }
        current[pos] = 0;
    }
    rec(0, d, &mut current, &mut out);
    out.sort();
    out
}
