use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Train/validation/test partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub val: Vec<T>,
    pub test: Vec<T>,
}

/// Shuffles deterministically by `seed` and cuts 30:1:1 (75k/2.5k/2.5k);
/// the remainder of the integer division goes to training.
pub fn split_dataset<T: Clone>(items: &[T], seed: u64) -> Split<T> {
    let mut shuffled = items.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_eval = items.len() / 32;
    let test = shuffled.split_off(shuffled.len() - n_eval);
    let val = shuffled.split_off(shuffled.len() - n_eval);
    Split {
        train: shuffled,
        val,
        test,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_on_320_items() {
        let items: Vec<u32> = (0..320).collect();
        let s = split_dataset(&items, 7);
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (300, 10, 10));
        let mut all: Vec<u32> = s
            .train
            .iter()
            .chain(&s.val)
            .chain(&s.test)
            .copied()
            .collect();
        all.sort();
        assert_eq!(all, items);
    }

    #[test]
    fn tiny_input_goes_to_train() {
        let s = split_dataset(&["a", "b"], 1);
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (2, 0, 0));
    }

    #[test]
    fn same_seed_same_split() {
        let items: Vec<u32> = (0..100).collect();
        assert_eq!(split_dataset(&items, 3), split_dataset(&items, 3));
        assert_ne!(
            split_dataset(&items, 3).train,
            split_dataset(&items, 4).train
        );
    }
}
