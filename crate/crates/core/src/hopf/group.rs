use super::HopfError;

/// Multiplication table of a finite group; element 0 is not assumed to be the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Wraps a table after checking closure, associativity, identity and inverses.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, HopfError> {
        let g = GroupTable { labels, table };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), HopfError> {
        let n = self.labels.len();
        let fail = |axiom: String| Err(HopfError::NotAGroup { axiom });
        if n == 0 {
            return fail("empty element set".into());
        }
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return fail(format!("table is not {n}x{n}"));
        }
        if let Some(x) = self.table.iter().flatten().find(|&&x| x >= n) {
            return fail(format!("closure: entry {x} out of range"));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail(format!(
                            "associativity at ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        ));
                    }
                }
            }
        }
        let Some(e) = (0..n).find(|&e| (0..n).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
        else {
            return fail("identity: no two-sided identity".into());
        };
        if let Some(x) = (0..n).find(|&x| !(0..n).any(|y| self.mul(x, y) == e && self.mul(y, x) == e)) {
            return fail(format!("inverses: {} has no inverse", self.labels[x]));
        }
        Ok(())
    }

    /// Cyclic group Z_n with labels `e, g, g^2, ...`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable { labels, table }
    }

    /// Z2 × Z2 with element `a1 + 2 a2` for the pair `(a1, a2)`.
    pub fn klein() -> Self {
        let labels = ["e", "a", "b", "ab"].map(String::from).to_vec();
        let table = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        GroupTable { labels, table }
    }

    /// Symmetric group on three letters; elements are permutations in one-line notation.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let labels = ["e", "(01)", "(12)", "(02)", "(012)", "(021)"].map(String::from).to_vec();
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        // (a·b)(x) = a(b(x))
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        GroupTable { labels, table }
    }

    /// Direct product with element index `i * other.order() + j`.
    pub fn direct_product(&self, other: &GroupTable) -> Self {
        let (n, m) = (self.order(), other.order());
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        GroupTable { labels, table }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        (0..self.order())
            .find(|&e| (0..self.order()).all(|x| self.mul(e, x) == x))
            .expect("validated group")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let e = self.identity();
        (0..self.order()).find(|&b| self.mul(a, b) == e).expect("validated group")
    }

    /// Whether `set` is a subgroup.
    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        !set.is_empty()
            && set.iter().all(|&x| x < self.order())
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
            && set.contains(&self.identity())
    }
}
