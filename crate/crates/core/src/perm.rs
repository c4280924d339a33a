//! Homomorphisms to small symmetric groups and to `Z`, used as exact
//! invariants to bucket group elements before confirming equality.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::Relator;
use crate::word::{Letter, Word};

/// Images of every letter (indexed by `Letter::index`) as permutations of `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct PermRep {
    images: Vec<Vec<u8>>,
}

impl PermRep {
    fn degree(&self) -> usize {
        self.images[0].len()
    }

    fn eval(&self, word: &[Letter]) -> Vec<u8> {
        let mut p: Vec<u8> = (0..self.degree() as u8).collect();
        for &l in word {
            let img = &self.images[l.index()];
            for x in p.iter_mut() {
                *x = img[*x as usize];
            }
        }
        p
    }

    fn kills(&self, w: &Word) -> bool {
        self.eval(w.letters()).iter().enumerate().all(|(i, &x)| i == x as usize)
    }
}

fn inverse_perm(p: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

/// A family of homomorphisms whose joint image is an invariant of group elements.
#[derive(Debug, Clone)]
pub struct ElementKeyer {
    reps: Vec<PermRep>,
    /// Integer exponent-sum functionals vanishing on every relator.
    characters: Vec<Vec<i64>>,
}

impl ElementKeyer {
    /// Search deterministically for up to `wanted` permutation representations
    /// of degree 4 to 7 within `budget` random trials.
    pub fn new(generators: usize, relators: &[Relator], seed: u64, wanted: usize, budget: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reps: Vec<PermRep> = Vec::new();
        let degrees = [5usize, 6, 7, 4];
        for trial in 0..budget {
            if reps.len() >= wanted {
                break;
            }
            let m = degrees[trial % degrees.len()];
            let mut images = Vec::with_capacity(2 * generators);
            for _ in 0..generators {
                let mut p: Vec<u8> = (0..m as u8).collect();
                p.shuffle(&mut rng);
                let inv = inverse_perm(&p);
                images.push(p);
                images.push(inv);
            }
            let rep = PermRep { images };
            let trivial_image = (0..generators).all(|g| rep.images[2 * g].iter().enumerate().all(|(i, &x)| i == x as usize));
            if !trivial_image && relators.iter().all(|r| rep.kills(&r.word)) && !reps.contains(&rep) {
                reps.push(rep);
            }
        }
        ElementKeyer { reps, characters: integer_kernel(generators, relators) }
    }

    pub fn representation_count(&self) -> usize {
        self.reps.len()
    }

    pub fn character_count(&self) -> usize {
        self.characters.len()
    }

    /// Equal group elements have equal keys.
    pub fn key(&self, word: &Word) -> Vec<i64> {
        let mut exps = vec![0i64; self.characters.first().map_or(0, Vec::len)];
        for &l in word.letters() {
            if let Some(e) = exps.get_mut(l.generator as usize) {
                *e += if l.inverted { -1 } else { 1 };
            }
        }
        let mut key: Vec<i64> = self.characters.iter().map(|c| c.iter().zip(&exps).map(|(a, b)| a * b).sum()).collect();
        for rep in &self.reps {
            key.extend(rep.eval(word.letters()).into_iter().map(i64::from));
        }
        key
    }
}

/// Integer basis of `{x : r·x = 0 for every relator exponent vector r}`.
fn integer_kernel(generators: usize, relators: &[Relator]) -> Vec<Vec<i64>> {
    let rows: Vec<Vec<Ratio<i64>>> = relators
        .iter()
        .map(|r| {
            let mut v = vec![Ratio::from_integer(0); generators];
            for &l in r.word.letters() {
                v[l.generator as usize] += Ratio::from_integer(if l.inverted { -1 } else { 1 });
            }
            v
        })
        .collect();
    // reduced row echelon form
    let mut m = rows;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..generators {
        let Some(p) = (row..m.len()).find(|&i| m[i][col] != Ratio::from_integer(0)) else {
            continue;
        };
        m.swap(row, p);
        let lead = m[row][col];
        for x in m[row].iter_mut() {
            *x /= lead;
        }
        for i in 0..m.len() {
            if i != row && m[i][col] != Ratio::from_integer(0) {
                let f = m[i][col];
                let pivot_row = m[row].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..generators).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Ratio::from_integer(0); generators];
        v[free] = Ratio::from_integer(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free];
        }
        let lcm = v.iter().fold(1i64, |acc, x| num_integer_lcm(acc, *x.denom()));
        basis.push(v.iter().map(|x| (x * Ratio::from_integer(lcm)).to_integer()).collect());
    }
    basis
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn rel(al: &Alphabet, w: &str) -> Relator {
        Relator { word: al.parse_word(w).unwrap(), component: 0 }
    }

    #[test]
    fn keys_respect_relators() {
        let al = Alphabet::new(&["a", "b", "c", "d"]).unwrap();
        let rels = vec![rel(&al, "a b c d")];
        let k = ElementKeyer::new(4, &rels, 7, 4, 20_000);
        assert!(k.representation_count() > 0);
        assert_eq!(k.character_count(), 3);
        let u = al.parse_word("a b").unwrap();
        let v = al.parse_word("d^-1 c^-1").unwrap();
        assert_eq!(k.key(&u), k.key(&v));
        assert_ne!(k.key(&u), k.key(&al.parse_word("a").unwrap()));
    }

    #[test]
    fn kernel_of_free_group_is_full() {
        let k = integer_kernel(2, &[]);
        assert_eq!(k, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn kernel_vectors_annihilate_relators() {
        let al = Alphabet::new(&["a", "b", "c"]).unwrap();
        let rels = vec![rel(&al, "a a b"), rel(&al, "b c c c")];
        let k = integer_kernel(3, &rels);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(2 * v[0] + v[1], 0);
        assert_eq!(v[1] + 3 * v[2], 0);
    }
}
