//! Fundamental invariants of some reflection groups.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Field, Monomial, Polynomial};
use crate::error::Error;

/// Built-in generator families. CLI names: `elem:N`, `psum:N`, `hyper:N`,
/// `prodsym:L1,L2,...`, `d3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorFamily {
    /// Elementary symmetric polynomials, invariants of `S_n`.
    ElementarySymmetric(usize),
    /// Power sums `p_1, ..., p_n`, also invariants of `S_n`.
    PowerSums(usize),
    /// Elementary symmetric polynomials in the squares; signed permutations `B_n`.
    Hyperoctahedral(usize),
    /// Blockwise elementary symmetric polynomials, `S_l1 x ... x S_lr`.
    ProductSymmetric(Vec<usize>),
    /// The symmetry group of the regular triangle acting on the plane.
    Dihedral3,
}

impl GeneratorFamily {
    pub fn num_vars(&self) -> usize {
        match self {
            GeneratorFamily::ElementarySymmetric(n)
            | GeneratorFamily::PowerSums(n)
            | GeneratorFamily::Hyperoctahedral(n) => *n,
            GeneratorFamily::ProductSymmetric(parts) => parts.iter().sum(),
            GeneratorFamily::Dihedral3 => 2,
        }
    }

    /// The generators, in nondecreasing degree order.
    pub fn generators<F: Field>(&self, ctx: &F::Ctx) -> Vec<Polynomial<F>> {
        match self {
            GeneratorFamily::ElementarySymmetric(n) => elementary_symmetric(*n, ctx),
            GeneratorFamily::PowerSums(n) => power_sums(*n, ctx),
            GeneratorFamily::Hyperoctahedral(n) => hyperoctahedral(*n, ctx),
            GeneratorFamily::ProductSymmetric(parts) => product_symmetric(parts, ctx).0,
            GeneratorFamily::Dihedral3 => dihedral3(ctx),
        }
    }

    /// Degrees of the generators.
    pub fn degrees(&self) -> Vec<u32> {
        match self {
            GeneratorFamily::ElementarySymmetric(n) | GeneratorFamily::PowerSums(n) => (1..=*n as u32).collect(),
            GeneratorFamily::Hyperoctahedral(n) => (1..=*n as u32).map(|k| 2 * k).collect(),
            GeneratorFamily::ProductSymmetric(parts) => {
                let mut d: Vec<u32> = parts.iter().flat_map(|&l| 1..=l as u32).collect();
                d.sort_unstable();
                d
            }
            GeneratorFamily::Dihedral3 => vec![2, 3],
        }
    }
}

impl fmt::Display for GeneratorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorFamily::ElementarySymmetric(n) => write!(f, "elem:{n}"),
            GeneratorFamily::PowerSums(n) => write!(f, "psum:{n}"),
            GeneratorFamily::Hyperoctahedral(n) => write!(f, "hyper:{n}"),
            GeneratorFamily::ProductSymmetric(parts) => {
                let s: Vec<String> = parts.iter().map(usize::to_string).collect();
                write!(f, "prodsym:{}", s.join(","))
            }
            GeneratorFamily::Dihedral3 => f.write_str("d3"),
        }
    }
}

impl FromStr for GeneratorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::UnknownFamily(s.to_string());
        let positive = |t: &str| t.trim().parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(bad);
        let s_trim = s.trim();
        if s_trim == "d3" {
            return Ok(GeneratorFamily::Dihedral3);
        }
        let (name, arg) = s_trim.split_once(':').ok_or_else(bad)?;
        match name {
            "elem" => Ok(GeneratorFamily::ElementarySymmetric(positive(arg)?)),
            "psum" => Ok(GeneratorFamily::PowerSums(positive(arg)?)),
            "hyper" => Ok(GeneratorFamily::Hyperoctahedral(positive(arg)?)),
            "prodsym" => Ok(GeneratorFamily::ProductSymmetric(
                arg.split(',').map(positive).collect::<Result<_, _>>()?,
            )),
            _ => Err(bad()),
        }
    }
}

/// `(e_1, ..., e_n)` from the recurrence on `prod (t + x_i)`:
/// `E_k <- E_k + x_i * E_{k-1}` as each variable is multiplied in.
pub fn elementary_symmetric<F: Field>(n: usize, ctx: &F::Ctx) -> Vec<Polynomial<F>> {
    let one = Polynomial::constant(n, F::one(ctx));
    // coeffs[k] = E_k of the variables seen so far
    let mut coeffs: Vec<Polynomial<F>> = vec![one];
    for i in 0..n {
        let x = Polynomial::var(n, i, ctx);
        coeffs.push(Polynomial::zero(n, ctx));
        for k in (1..coeffs.len()).rev() {
            coeffs[k] = &coeffs[k] + &(&x * &coeffs[k - 1]);
        }
    }
    coeffs.into_iter().skip(1).collect()
}

pub fn power_sums<F: Field>(n: usize, ctx: &F::Ctx) -> Vec<Polynomial<F>> {
    (1..=n as u32)
        .map(|k| {
            let terms = (0..n).map(|i| {
                let mut e = vec![0; n];
                e[i] = k;
                (Monomial::from_exponents(&e), F::one(ctx))
            });
            Polynomial::from_terms(n, ctx, terms)
        })
        .collect()
}

/// Elementary symmetric polynomials of `x_1^2, ..., x_n^2`.
pub fn hyperoctahedral<F: Field>(n: usize, ctx: &F::Ctx) -> Vec<Polynomial<F>> {
    elementary_symmetric::<F>(n, ctx)
        .into_iter()
        .map(|p| {
            let terms = p.terms().map(|(m, c)| {
                let doubled: Vec<u32> = m.exponents().iter().map(|e| 2 * e).collect();
                (Monomial::from_exponents(&doubled), c.clone())
            });
            Polynomial::from_terms(n, ctx, terms.collect::<Vec<_>>())
        })
        .collect()
}

/// Elementary symmetric polynomials of consecutive variable blocks of the
/// given sizes, stably sorted by degree. The second component maps each
/// output position to its index in the unsorted block concatenation.
pub fn product_symmetric<F: Field>(parts: &[usize], ctx: &F::Ctx) -> (Vec<Polynomial<F>>, Vec<usize>) {
    let n: usize = parts.iter().sum();
    let mut blocks: Vec<(u32, Polynomial<F>)> = Vec::with_capacity(n);
    let mut offset = 0;
    for &len in parts {
        let map: Vec<usize> = (offset..offset + len).collect();
        for (k, p) in elementary_symmetric::<F>(len, ctx).into_iter().enumerate() {
            blocks.push((k as u32 + 1, p.remap_vars(n, &map)));
        }
        offset += len;
    }
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| blocks[i].0);
    let polys = order.iter().map(|&i| blocks[i].1.clone()).collect();
    (polys, order)
}

/// `(x1^2 + x2^2, x1^3 - 3 x1 x2^2)`.
pub fn dihedral3<F: Field>(ctx: &F::Ctx) -> Vec<Polynomial<F>> {
    let m = |a, b| Monomial::from_exponents(&[a, b]);
    let one = F::one(ctx);
    vec![
        Polynomial::from_terms(2, ctx, [(m(2, 0), one.clone()), (m(0, 2), one.clone())]),
        Polynomial::from_terms(2, ctx, [(m(3, 0), one), (m(1, 2), F::from_i64(ctx, -3))]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Rational, RationalField};

    fn render(ps: &[Polynomial<Rational>]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn elementary() {
        assert_eq!(render(&elementary_symmetric(2, &RationalField)), ["x1 + x2", "x1*x2"]);
        assert_eq!(
            render(&elementary_symmetric(3, &RationalField)),
            ["x1 + x2 + x3", "x1*x2 + x1*x3 + x2*x3", "x1*x2*x3"]
        );
        assert_eq!(render(&elementary_symmetric(1, &RationalField)), ["x1"]);
    }

    #[test]
    fn power_sum_family() {
        assert_eq!(
            render(&power_sums(3, &RationalField)),
            ["x1 + x2 + x3", "x1^2 + x2^2 + x3^2", "x1^3 + x2^3 + x3^3"]
        );
        assert_eq!(render(&power_sums(1, &RationalField)), ["x1"]);
    }

    #[test]
    fn hyperoctahedral_family() {
        assert_eq!(render(&hyperoctahedral(2, &RationalField)), ["x1^2 + x2^2", "x1^2*x2^2"]);
        assert_eq!(render(&hyperoctahedral(1, &RationalField)), ["x1^2"]);
    }

    #[test]
    fn product_family() {
        assert_eq!(render(&product_symmetric(&[1, 1], &RationalField).0), ["x1", "x2"]);
        let (ps, perm) = product_symmetric::<Rational>(&[2, 1], &RationalField);
        assert_eq!(render(&ps), ["x1 + x2", "x3", "x1*x2"]);
        assert_eq!(perm, [0, 2, 1]);
    }

    #[test]
    fn dihedral() {
        assert_eq!(render(&dihedral3(&RationalField)), ["x1^2 + x2^2", "x1^3 - 3*x1*x2^2"]);
    }

    #[test]
    fn degrees_are_nondecreasing_and_match() {
        let fams: Vec<GeneratorFamily> = ["elem:4", "psum:3", "hyper:3", "prodsym:3,1,2", "d3"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for fam in fams {
            let gens = fam.generators::<Rational>(&RationalField);
            let degs: Vec<u32> = gens.iter().map(|g| g.total_degree() as u32).collect();
            assert_eq!(degs, fam.degrees(), "{fam}");
            assert!(degs.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(gens.len(), fam.num_vars());
            assert!(gens.iter().all(|g| g.num_vars() == fam.num_vars()));
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("psum:3".parse::<GeneratorFamily>().unwrap(), GeneratorFamily::PowerSums(3));
        assert_eq!(
            "prodsym:2,2".parse::<GeneratorFamily>().unwrap(),
            GeneratorFamily::ProductSymmetric(vec![2, 2])
        );
        for bad in ["psum:0", "psum", "foo:2", "prodsym:", "elem:x"] {
            assert!(bad.parse::<GeneratorFamily>().is_err(), "{bad}");
        }
        for s in ["elem:2", "hyper:4", "prodsym:1,3", "d3"] {
            assert_eq!(s.parse::<GeneratorFamily>().unwrap().to_string(), s);
        }
    }
}
