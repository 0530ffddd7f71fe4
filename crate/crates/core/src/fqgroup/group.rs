use crate::error::{Error, Result};

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Check closure, associativity, identity and inverses of `table[g][h] = gh`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::NotAGroup("table is not closed on {0..n-1}".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let inverse = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g][h] == identity && table[h][g] == identity)
                    .ok_or_else(|| Error::NotAGroup(format!("element {g} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = (0..n).map(|g| format!("g{g}")).collect();
        Ok(Self { table, identity, inverse, labels })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.order() {
            self.labels = labels;
        }
        self
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table)
            .expect("cyclic table is a group")
            .with_labels((0..n).map(|k| k.to_string()).collect())
    }

    /// Permutations of three points in lexicographic order; composition `(στ)(x) = σ(τ(x))`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| index([s[t[0]], s[t[1]], s[t[2]]])).collect())
            .collect();
        let labels = perms.iter().map(|p| format!("[{}{}{}]", p[0], p[1], p[2])).collect();
        Self::from_table(table).expect("S3 is a group").with_labels(labels)
    }

    /// Direct product with elements `(a, b)` indexed `a * |H| + b`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (n, m) = (g.order(), h.order());
        let table = (0..n * m)
            .map(|x| (0..n * m).map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m)).collect())
            .collect();
        let labels = (0..n * m).map(|x| format!("({},{})", g.labels[x / m], h.labels[x % m])).collect();
        Self::from_table(table).expect("product of groups").with_labels(labels)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_nonabelian_of_order_six() {
        let g = FiniteGroup::symmetric3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.identity(), 0);
        for x in 0..6 {
            assert_eq!(g.mul(x, g.inv(x)), 0);
        }
    }

    #[test]
    fn latin_square_without_associativity_is_rejected() {
        // a quasigroup of order 3 that is not associative
        let table = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert!(matches!(FiniteGroup::from_table(table), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn product_of_cyclic_groups() {
        let g = FiniteGroup::product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3));
        assert_eq!(g.order(), 9);
        assert!(g.is_abelian());
        assert_eq!(g.identity(), 0);
    }
}
