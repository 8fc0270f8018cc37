//! Shared fixtures: hand-written tabulated parameter formulas for the four
//! canonical families, and a seeded sampler of admissible rational pairs.

#![allow(dead_code)]

use opoly::classification::CanonicalFamily;
use opoly::pearson::PearsonPair;
use opoly::{pochhammer, Poly, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5EED_0C0B;

pub fn s(text: &str) -> Scalar {
    text.parse().unwrap_or_else(|e| panic!("bad scalar {text}: {e}"))
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

pub fn hermite() -> CanonicalFamily {
    CanonicalFamily::Hermite
}

pub fn laguerre(alpha: &str) -> CanonicalFamily {
    CanonicalFamily::Laguerre { alpha: s(alpha) }
}

pub fn jacobi(alpha: &str, beta: &str) -> CanonicalFamily {
    CanonicalFamily::Jacobi { alpha: s(alpha), beta: s(beta) }
}

pub fn bessel(alpha: &str) -> CanonicalFamily {
    CanonicalFamily::Bessel { alpha: s(alpha) }
}

/// The families and parameters used for the tabulated-value checks.
pub fn table_fixtures() -> Vec<CanonicalFamily> {
    let mut out = vec![hermite()];
    out.extend(["0", "1/2", "-1/2", "3"].map(laguerre));
    out.extend([("0", "0"), ("1/2", "1/2"), ("1", "2"), ("-1/2", "3")].map(|(a, b)| jacobi(a, b)));
    out.extend(["0", "1", "5/2"].map(bessel));
    out
}

/// Tabulated values at one index. `None` marks an expression whose
/// denominator vanishes at that index.
#[derive(Clone, Debug)]
pub struct Expected {
    pub lambda: Option<Scalar>,
    pub beta: Option<Scalar>,
    pub gamma: Option<Scalar>,
    pub a: Option<Scalar>,
    pub b: Option<Scalar>,
    pub c: Option<Scalar>,
    pub r1: Option<Scalar>,
    pub s1: Option<Scalar>,
    pub h: Option<Scalar>,
    pub t: Option<Scalar>,
    pub k: Option<Scalar>,
}

fn div(num: Scalar, den: Scalar) -> Option<Scalar> {
    num.checked_div(&den)
}

fn sign(n: usize) -> Scalar {
    if n.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

/// Closed-form table entries, typed in from the reference table.
pub fn expected(family: &CanonicalFamily, n: usize) -> Expected {
    let nn = int(n as i64);
    let one = int(1);
    let two = int(2);
    let four = int(4);
    match family {
        CanonicalFamily::Hermite => Expected {
            lambda: Some(&two * &nn),
            beta: Some(int(0)),
            gamma: Some(&nn / &two),
            a: Some(int(0)),
            b: Some(int(0)),
            c: Some(nn.clone()),
            r1: Some(int(0)),
            s1: Some(int(0)),
            h: Some(int(-2)),
            t: Some(nn.clone()),
            k: div(sign(n), two.pow(n as u32)),
        },
        CanonicalFamily::Laguerre { alpha } => {
            let na = &nn + alpha;
            Expected {
                lambda: Some(nn.clone()),
                beta: Some(&(&two * &nn) + alpha + &one),
                gamma: Some(&nn * &na),
                a: Some(int(0)),
                b: Some(nn.clone()),
                c: Some(&nn * &na),
                r1: Some(nn.clone()),
                s1: Some(int(0)),
                h: Some(int(-1)),
                t: Some(&nn * &na),
                k: Some(sign(n)),
            }
        }
        CanonicalFamily::Jacobi { alpha, beta } => {
            let sum = &(&two * &nn) + alpha + beta;
            let na = &nn + alpha;
            let nb = &nn + beta;
            let nab = &(&nn + alpha) + beta;
            let nab1 = &nab + &one;
            let outer = &sum * &(&sum + &two);
            let quad = &(&(&sum - &one) * &sum) * &(&sum * &(&sum + &one));
            let gamma_num = &(&(&four * &nn) * &na) * &(&nb * &nab);
            Expected {
                lambda: Some(&nn * &nab1),
                beta: div(&(beta * beta) - &(alpha * alpha), outer.clone()),
                gamma: div(gamma_num.clone(), quad.clone()),
                a: Some(-&nn),
                b: div(&(&(&two * &(alpha - beta)) * &nn) * &nab1, outer.clone()),
                c: div(&gamma_num * &nab1, quad.clone()),
                r1: div(&(&two * &(alpha - beta)) * &nn, outer),
                s1: div(-(&(&(&four * &(&nn - &one)) * &nn) * &(&na * &nb)), quad),
                h: Some(-(&sum - &one)),
                t: div(gamma_num, &(&sum - &one) * &(&sum * &sum)),
                k: div(sign(n), pochhammer(&nab1, n)),
            }
        }
        CanonicalFamily::Bessel { alpha } => {
            let sum = &(&two * &nn) + alpha;
            let na = &nn + alpha;
            let na1 = &na + &one;
            let outer = &sum * &(&sum + &two);
            let quad = &(&(&sum - &one) * &sum) * &(&sum * &(&sum + &one));
            Expected {
                lambda: Some(-(&nn * &na1)),
                beta: div(-(&two * alpha), outer.clone()),
                gamma: div(-(&(&four * &nn) * &na), quad.clone()),
                a: Some(nn.clone()),
                b: div(-(&(&four * &nn) * &na1), outer.clone()),
                c: div(&(&(&four * &nn) * &na) * &na1, quad.clone()),
                r1: div(&four * &nn, outer),
                s1: div(&(&four * &(&nn - &one)) * &nn, quad),
                h: Some(&sum - &one),
                t: div(&(&four * &nn) * &na, &(&sum - &one) * &(&sum * &sum)),
                k: div(one, pochhammer(&na1, n)),
            }
        }
    }
}

/// Shape of a sampled pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Constant,
    Linear,
    DoubleZero,
    RationalZeros,
    Generic,
}

pub struct PairSampler {
    rng: ChaCha8Rng,
}

impl PairSampler {
    pub fn new(seed: u64) -> Self {
        PairSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn rational(&mut self) -> Scalar {
        let num = self.rng.gen_range(-6i64..=6);
        let den = self.rng.gen_range(1i64..=4);
        Scalar::ratio(num, den)
    }

    fn nonzero(&mut self) -> Scalar {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    fn candidate(&mut self, shape: Shape) -> PearsonPair {
        let (a, b, c) = match shape {
            Shape::Constant => (int(0), int(0), self.nonzero()),
            Shape::Linear => (int(0), self.nonzero(), self.rational()),
            Shape::DoubleZero => {
                let (lead, root) = (self.nonzero(), self.rational());
                (lead.clone(), &(&int(-2) * &lead) * &root, &(&lead * &root) * &root)
            }
            Shape::RationalZeros => {
                let (lead, r1, r2) = (self.nonzero(), self.rational(), self.rational());
                (lead.clone(), -(&lead * &(&r1 + &r2)), &(&lead * &r1) * &r2)
            }
            Shape::Generic => (self.nonzero(), self.rational(), self.rational()),
        };
        let (p, q) = (self.nonzero(), self.rational());
        PearsonPair::from_coeffs(a, b, c, p, q).expect("nonzero psi")
    }

    /// An admissible pair of the given shape passing the regularity
    /// conditions for every `n ≤ horizon`.
    pub fn regular_pair(&mut self, shape: Shape, horizon: usize) -> PearsonPair {
        loop {
            let pair = self.candidate(shape);
            if pair.admissible() && (0..=horizon).all(|n| !pair.regularity_numerator(n).is_zero()) {
                return pair;
            }
        }
    }

    /// Cycles through all shapes.
    pub fn regular_pairs(&mut self, count: usize, horizon: usize) -> Vec<PearsonPair> {
        const SHAPES: [Shape; 5] = [Shape::Constant, Shape::Linear, Shape::DoubleZero, Shape::RationalZeros, Shape::Generic];
        (0..count).map(|i| self.regular_pair(SHAPES[i % SHAPES.len()], horizon)).collect()
    }

    pub fn small_rational(&mut self) -> Scalar {
        self.rational()
    }

    pub fn nonzero_rational(&mut self) -> Scalar {
        self.nonzero()
    }

    pub fn poly(&mut self, degree: usize) -> Poly {
        Poly::new((0..=degree).map(|_| self.rational()).collect())
    }
}
