/// Fixed-width bit set over `0..len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Self) -> Self {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn and_not(&self, other: &Self) -> Self {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect() }
    }

    pub fn or(&self, other: &Self) -> Self {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect() }
    }

    pub fn intersection_count(&self, other: &Self) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn ops_agree_with_vec_bool(a in proptest::collection::vec(any::<bool>(), 130), b in proptest::collection::vec(any::<bool>(), 130)) {
            let mut x = BitSet::new(130);
            let mut y = BitSet::new(130);
            for i in 0..130 {
                if a[i] { x.insert(i); }
                if b[i] { y.insert(i); }
            }
            let and: Vec<usize> = (0..130).filter(|&i| a[i] && b[i]).collect();
            prop_assert_eq!(x.and(&y).iter().collect::<Vec<_>>(), and.clone());
            prop_assert_eq!(x.intersection_count(&y), and.len());
            let diff: Vec<usize> = (0..130).filter(|&i| a[i] && !b[i]).collect();
            prop_assert_eq!(x.and_not(&y).iter().collect::<Vec<_>>(), diff);
            prop_assert_eq!(x.or(&y).count(), (0..130).filter(|&i| a[i] || b[i]).count());
        }
    }
}
