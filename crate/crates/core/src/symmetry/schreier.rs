//! Group order from generators by the Schreier–Sims algorithm.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use super::PermGenerator;

type Perm = Vec<u32>;

fn then(a: &[u32], b: &[u32]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn inverse(a: &[u32]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

fn is_identity(a: &[u32]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

struct Level {
    base: u32,
    gens: Vec<Perm>,
    /// orbit point -> inverse of a transversal element mapping `base` there
    inv_transversal: HashMap<u32, Perm>,
    orbit: Vec<u32>,
}

struct Chain {
    n: usize,
    levels: Vec<Level>,
}

impl Chain {
    fn new(n: usize) -> Chain {
        Chain { n, levels: Vec::new() }
    }

    /// Residue of `g` after stripping through levels `from..`.
    fn sift(&self, mut g: Perm, from: usize) -> Perm {
        for level in &self.levels[from..] {
            let b = g[level.base as usize];
            match level.inv_transversal.get(&b) {
                Some(inv) => g = then(&g, inv),
                None => return g,
            }
        }
        g
    }

    fn extend(&mut self, level: usize, g: Perm) {
        let g = self.sift(g, level);
        if is_identity(&g) {
            return;
        }
        if level == self.levels.len() {
            let base = g.iter().enumerate().find(|&(i, &x)| i as u32 != x).unwrap().0 as u32;
            let mut inv_transversal = HashMap::new();
            inv_transversal.insert(base, (0..self.n as u32).collect());
            self.levels.push(Level { base, gens: Vec::new(), inv_transversal, orbit: vec![base] });
        }
        let old_orbit_len = self.levels[level].orbit.len();
        self.levels[level].gens.push(g);
        let new_gen = self.levels[level].gens.len() - 1;

        // grow the orbit, keeping existing transversal elements
        let mut i = 0;
        while i < self.levels[level].orbit.len() {
            let beta = self.levels[level].orbit[i];
            let lv = &mut self.levels[level];
            let gens: Vec<usize> = if i < old_orbit_len { vec![new_gen] } else { (0..lv.gens.len()).collect() };
            for s in gens {
                let img = lv.gens[s][beta as usize];
                if !lv.inv_transversal.contains_key(&img) {
                    // u_img = u_beta then s; inverse = s^-1 then u_beta^-1
                    let inv = then(&inverse(&lv.gens[s]), &lv.inv_transversal[&beta]);
                    lv.inv_transversal.insert(img, inv);
                    lv.orbit.push(img);
                }
            }
            i += 1;
        }

        // Schreier generators for the pairs not tested before
        let orbit = self.levels[level].orbit.clone();
        let num_gens = self.levels[level].gens.len();
        for (i, &beta) in orbit.iter().enumerate() {
            let range = if i < old_orbit_len { new_gen..num_gens } else { 0..num_gens };
            for s in range {
                let lv = &self.levels[level];
                let u_beta = inverse(&lv.inv_transversal[&beta]);
                let sg = then(&u_beta, &lv.gens[s]);
                let img = sg[lv.base as usize];
                let schreier = then(&sg, &lv.inv_transversal[&img]);
                if !is_identity(&schreier) {
                    self.extend(level + 1, schreier);
                }
            }
        }
    }

    fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }
}

/// Order of the group generated by permutations of `0..n` given as images.
pub fn group_order_of_node_perms(gens: &[Vec<u32>]) -> BigUint {
    let Some(n) = gens.first().map(Vec::len) else {
        return BigUint::one();
    };
    // work on the moved points only
    let mut moved: Vec<u32> = (0..n as u32).filter(|&x| gens.iter().any(|g| g[x as usize] != x)).collect();
    moved.sort_unstable();
    let index: HashMap<u32, u32> = moved.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let mut chain = Chain::new(moved.len());
    for g in gens {
        let compact: Perm = moved.iter().map(|x| index[&g[*x as usize]]).collect();
        chain.extend(0, compact);
    }
    chain.order()
}

/// Order of the literal permutation group generated by `gens`.
pub fn group_order(gens: &[PermGenerator]) -> BigUint {
    let perms: Vec<Vec<u32>> = gens.iter().map(|g| g.images().iter().map(|l| l.code() as u32).collect()).collect();
    group_order_of_node_perms(&perms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Perm {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    fn swap01(n: u32) -> Perm {
        let mut p: Perm = (0..n).collect();
        p.swap(0, 1);
        p
    }

    #[test]
    fn symmetric_groups() {
        for n in 2..=7u32 {
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(group_order_of_node_perms(&[cycle(n), swap01(n)]), BigUint::from(fact));
        }
    }

    #[test]
    fn cyclic_and_trivial() {
        assert_eq!(group_order_of_node_perms(&[cycle(5)]), BigUint::from(5u32));
        assert_eq!(group_order_of_node_perms(&[]), BigUint::one());
        assert_eq!(group_order_of_node_perms(&[(0..4).collect()]), BigUint::one());
    }

    #[test]
    fn dihedral_of_square() {
        let rot = vec![1, 2, 3, 0];
        let refl = vec![0, 3, 2, 1];
        assert_eq!(group_order_of_node_perms(&[rot, refl]), BigUint::from(8u32));
    }

    #[test]
    fn large_symmetric_group() {
        let n = 20u32;
        let fact: BigUint = (1..=20u32).map(BigUint::from).product();
        assert_eq!(group_order_of_node_perms(&[cycle(n), swap01(n)]), fact);
    }
}
