//! Small random matroids for exhaustive verification.

use rand::seq::SliceRandom;
use rand::Rng;

use super::Matroid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomFamily {
    Uniform,
    Partition,
    Graphic,
    Linear,
}

impl RandomFamily {
    pub const ALL: [RandomFamily; 4] = [
        RandomFamily::Uniform,
        RandomFamily::Partition,
        RandomFamily::Graphic,
        RandomFamily::Linear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RandomFamily::Uniform => "uniform",
            RandomFamily::Partition => "partition",
            RandomFamily::Graphic => "graphic",
            RandomFamily::Linear => "linear",
        }
    }
}

/// A random matroid on `0..n` from the given family.
pub fn random_matroid<R: Rng + ?Sized>(family: RandomFamily, n: usize, rng: &mut R) -> Matroid {
    match family {
        RandomFamily::Uniform => Matroid::uniform(n, rng.gen_range(0..=n)),
        RandomFamily::Partition => {
            let block_count = rng.gen_range(1..=n.max(1));
            let mut blocks = vec![Vec::new(); block_count];
            for e in 0..n {
                blocks[rng.gen_range(0..block_count)].push(e);
            }
            blocks.retain(|b| !b.is_empty());
            let capacities = blocks
                .iter()
                .map(|b| rng.gen_range(0..=b.len()))
                .collect();
            Matroid::partition(blocks, capacities).expect("blocks partition 0..n")
        }
        RandomFamily::Graphic => {
            let vertices = rng.gen_range(2..=5);
            let edges = (0..n)
                .map(|_| {
                    let u = rng.gen_range(0..vertices);
                    // loops are rare but legal
                    let v = if rng.gen_bool(0.1) {
                        u
                    } else {
                        let mut v = rng.gen_range(0..vertices - 1);
                        if v >= u {
                            v += 1;
                        }
                        v
                    };
                    (u, v)
                })
                .collect();
            Matroid::graphic(vertices, edges).expect("endpoints in range")
        }
        RandomFamily::Linear => {
            let prime = *[2u64, 3].choose(rng).expect("nonempty");
            let rows = rng.gen_range(1..=4);
            let columns = (0..n)
                .map(|_| (0..rows).map(|_| rng.gen_range(0..prime as i64)).collect())
                .collect();
            Matroid::linear(prime, columns).expect("valid field")
        }
    }
}

/// A random independent subset of `m`'s ground set, of size at most `max_len`.
pub fn random_independent<R: Rng + ?Sized>(m: &Matroid, max_len: usize, rng: &mut R) -> Vec<usize> {
    let mut order = m.ground().elements().to_vec();
    order.shuffle(rng);
    let mut set = Vec::new();
    for e in order {
        if set.len() >= max_len {
            break;
        }
        set.push(e);
        if !m.independent_trusted(&set) {
            set.pop();
        }
    }
    set
}
