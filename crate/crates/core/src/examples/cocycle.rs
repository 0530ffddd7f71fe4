use std::f64::consts::PI;

use crate::csalg::{dense_to_row, CStarAlgebra};
use crate::error::{Error, Result};
use crate::fqgroup::FiniteGroup;
use crate::linalg::{CMat, CVec, C64, ONE};
use crate::Config;

/// A normalized unit-modulus 2-cocycle `σ(g, h)` on a finite group.
#[derive(Debug, Clone)]
pub struct TwoCocycle {
    group: FiniteGroup,
    values: Vec<C64>,
}

impl TwoCocycle {
    /// Validate the cocycle identity, normalization and unit modulus.
    pub fn new(group: FiniteGroup, values: Vec<C64>, tol: f64) -> Result<Self> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::Dimension(format!("cocycle needs {} values, got {}", n * n, values.len())));
        }
        let s = Self { group, values };
        let modulus = s.values.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
        if modulus > tol {
            return Err(Error::CocycleInvalid { identity: "|σ| = 1", residual: modulus });
        }
        let norm = s.normalization_residual();
        if norm > tol {
            return Err(Error::CocycleInvalid { identity: "σ(e,g) = σ(g,e) = 1", residual: norm });
        }
        let id = s.identity_residual();
        if id > tol {
            return Err(Error::CocycleInvalid { identity: "σ(g,h)σ(gh,k) = σ(h,k)σ(g,hk)", residual: id });
        }
        Ok(s)
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        let n = group.order();
        Self { group, values: vec![ONE; n * n] }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn value(&self, g: usize, h: usize) -> C64 {
        self.values[g * self.group.order() + h]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn identity_residual(&self) -> f64 {
        let g = &self.group;
        let n = g.order();
        let mut res: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.value(a, b) * self.value(g.mul(a, b), c);
                    let rhs = self.value(b, c) * self.value(a, g.mul(b, c));
                    res = res.max((lhs - rhs).norm());
                }
            }
        }
        res
    }

    pub fn normalization_residual(&self) -> f64 {
        let e = self.group.identity();
        (0..self.group.order())
            .map(|g| (self.value(e, g) - ONE).norm().max((self.value(g, e) - ONE).norm()))
            .fold(0.0, f64::max)
    }

    /// The twisted group algebra `ℂ_σ[G]`: `u_g u_h = σ(g,h) u_{gh}`, `u_g* = u_g⁻¹`.
    ///
    /// It is the C*-algebra generated by the twisted left regular
    /// representation `π(g)δ_h = σ(g,h)δ_{gh}` on `ℂ^{|G|}`, which is faithful on it.
    pub fn twisted_group_algebra(&self, cfg: &Config) -> Result<CStarAlgebra> {
        let g = &self.group;
        let n = g.order();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut v = CVec::zeros(n);
                v[g.mul(a, b)] = self.value(a, b);
                table.push(dense_to_row(&v, 0.0));
            }
        }
        let mut star = CMat::zeros(n, n);
        for a in 0..n {
            let inv = g.inv(a);
            star[(inv, a)] = self.value(inv, a).conj();
        }
        let mut unit = CVec::zeros(n);
        unit[g.identity()] = ONE;
        let labels = g.labels().iter().map(|l| format!("u{l}")).collect();
        CStarAlgebra::from_table(table, star, unit, labels)?.validated(cfg)
    }

    /// Matrices of the twisted regular representation on `ℂ^{|G|}`.
    pub fn twisted_regular_representation(&self) -> Vec<CMat> {
        let g = &self.group;
        let n = g.order();
        (0..n)
            .map(|a| {
                let mut m = CMat::zeros(n, n);
                for b in 0..n {
                    m[(g.mul(a, b), b)] = self.value(a, b);
                }
                m
            })
            .collect()
    }
}

/// `exp(2πi·k/n)`, exact on the real and imaginary axes.
pub fn root_of_unity(k: usize, n: usize) -> C64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// `σ((a,b),(c,d)) = exp(2πi·bc/n)` on `ℤ/n × ℤ/n`, elements indexed `a·n + b`.
pub fn heisenberg_cocycle(n: usize, tol: f64) -> Result<TwoCocycle> {
    if n < 2 {
        return Err(Error::Dimension("the Heisenberg cocycle needs n ≥ 2".into()));
    }
    let z = FiniteGroup::cyclic(n);
    let group = FiniteGroup::product(&z, &z);
    let m = n * n;
    let mut values = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let (b, c) = (x % n, y / n);
            values.push(root_of_unity((b * c) % n, n));
        }
    }
    TwoCocycle::new(group, values, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fro_norm;

    #[test]
    fn heisenberg_values_satisfy_the_cocycle_identity() {
        for n in 2..=4 {
            let s = heisenberg_cocycle(n, 1e-12).unwrap();
            assert!(s.identity_residual() < 1e-14);
            assert_eq!(s.normalization_residual(), 0.0);
        }
    }

    #[test]
    fn perturbed_value_is_rejected() {
        let s = heisenberg_cocycle(2, 1e-12).unwrap();
        let mut v = s.values().to_vec();
        v[5] = root_of_unity(1, 3);
        let err = TwoCocycle::new(s.group().clone(), v, 1e-9).unwrap_err();
        assert!(matches!(err, Error::CocycleInvalid { .. }));
    }

    #[test]
    fn roots_of_unity_are_exact_on_the_axes() {
        assert_eq!(root_of_unity(1, 4), C64::new(0.0, 1.0));
        assert_eq!(root_of_unity(3, 6), C64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(7, 7), C64::new(1.0, 0.0));
        let w = root_of_unity(1, 5);
        assert!((w.powu(5) - ONE).norm() < 1e-14);
    }

    #[test]
    fn twisted_representation_is_projective() {
        // π(g)π(h) = σ(g,h)π(gh), checked on explicit matrices
        let s = heisenberg_cocycle(3, 1e-12).unwrap();
        let pi = s.twisted_regular_representation();
        let g = s.group();
        for a in 0..9 {
            for b in 0..9 {
                let lhs = &pi[a] * &pi[b];
                let rhs = &pi[g.mul(a, b)] * s.value(a, b);
                assert!(fro_norm(&(lhs - rhs)) < 1e-14);
            }
        }
    }

    #[test]
    fn heisenberg_twist_is_a_full_matrix_algebra() {
        let cfg = Config::default();
        for n in 2..=3 {
            let a = heisenberg_cocycle(n, 1e-12).unwrap().twisted_group_algebra(&cfg).unwrap();
            assert_eq!(a.wedderburn().unwrap().block_sizes, vec![n]);
        }
        let z = FiniteGroup::cyclic(2);
        let trivial = TwoCocycle::trivial(FiniteGroup::product(&z, &z)).twisted_group_algebra(&cfg).unwrap();
        assert_eq!(trivial.wedderburn().unwrap().block_sizes, vec![1; 4]);
    }
}
