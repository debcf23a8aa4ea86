use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("image {value} out of range for size {size}")]
    OutOfRange { value: usize, size: usize },
    #[error("image {value} appears twice")]
    Repeated { value: usize },
}

/// A bijection on `{0, ..., n-1}`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermutationError> {
        let size = images.len();
        let mut seen = vec![false; size];
        for &v in &images {
            if v >= size {
                return Err(PermutationError::OutOfRange { value: v, size });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(PermutationError::Repeated { value: v });
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// Uniformly random permutation (Fisher-Yates).
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
        use rand::seq::SliceRandom;
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert_eq!(
            Permutation::new(vec![0, 2]),
            Err(PermutationError::OutOfRange { value: 2, size: 2 })
        );
        assert_eq!(
            Permutation::new(vec![1, 1, 0]),
            Err(PermutationError::Repeated { value: 1 })
        );
    }

    #[test]
    fn inverse_and_compose() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(3));
        let q = Permutation::new(vec![1, 0, 2]).unwrap();
        // (p ∘ q)(0) = p(1) = 0
        assert_eq!(p.compose(&q).apply(0), 0);
    }
}
