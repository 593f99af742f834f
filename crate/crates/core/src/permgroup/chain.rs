use rand::Rng;

use super::Permutation;

/// One level of a stabilizer chain: the basic orbit of the base point under the level's strong
/// generators, with a transversal element `u_b` sending the base point to each `b`.
#[derive(Debug, Clone)]
pub struct Level {
    pub base: u32,
    pub gens: Vec<Permutation>,
    pub orbit: Vec<u32>,
    transversal: Vec<Option<Permutation>>,
    inverse: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base: u32, gens: Vec<Permutation>) -> Self {
        let mut l = Level { base, gens, orbit: Vec::new(), transversal: Vec::new(), inverse: Vec::new() };
        l.rebuild(degree);
        l
    }

    fn rebuild(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.base as usize] = Some(Permutation::identity(degree));
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            for s in &self.gens {
                let c = s.apply(b);
                if self.transversal[c as usize].is_none() {
                    let u = self.transversal[b as usize].as_ref().expect("orbit point").then(s);
                    self.transversal[c as usize] = Some(u);
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
        self.inverse = self.transversal.iter().map(|u| u.as_ref().map(Permutation::inverse)).collect();
    }

    pub fn transversal(&self, b: u32) -> Option<&Permutation> {
        self.transversal[b as usize].as_ref()
    }
}

/// Base and strong generating set, built by deterministic Schreier–Sims.
#[derive(Debug, Clone)]
pub struct StabChain {
    levels: Vec<Level>,
    base: Vec<u32>,
}

impl StabChain {
    pub fn build(degree: usize, generators: &[Permutation]) -> Self {
        let gens: Vec<Permutation> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<u32> = Vec::new();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().expect("not the identity"));
            }
        }
        let mut levels: Vec<Level> = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let fixing = gens.iter().filter(|g| base[..i].iter().all(|&c| g.apply(c) == c)).cloned().collect();
                Level::new(degree, b, fixing)
            })
            .collect();

        let mut i = levels.len() as isize - 1;
        while i >= 0 {
            let lv = i as usize;
            let mut jump = None;
            'scan: for oi in 0..levels[lv].orbit.len() {
                let b = levels[lv].orbit[oi];
                for si in 0..levels[lv].gens.len() {
                    let s = &levels[lv].gens[si];
                    let sb = s.apply(b);
                    let g1 = levels[lv].transversal(b).expect("orbit point").then(s);
                    if Some(&g1) == levels[lv].transversal(sb) {
                        continue;
                    }
                    let schreier = g1.then(levels[lv].inverse[sb as usize].as_ref().expect("orbit point"));
                    let (h, j) = strip(&levels, &schreier, lv + 1);
                    let target = if j < levels.len() {
                        j
                    } else if !h.is_identity() {
                        let nb = h.first_moved().expect("not the identity");
                        levels.push(Level::new(degree, nb, Vec::new()));
                        base.push(nb);
                        levels.len() - 1
                    } else {
                        continue;
                    };
                    for level in &mut levels[lv + 1..=target] {
                        level.gens.push(h.clone());
                        level.rebuild(degree);
                    }
                    jump = Some(target);
                    break 'scan;
                }
            }
            match jump {
                Some(t) => i = t as isize,
                None => i -= 1,
            }
        }
        StabChain { levels, base }
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (h, j) = strip(&self.levels, g, 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn random_element<R: Rng + ?Sized>(&self, degree: usize, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(degree);
        for l in self.levels.iter().rev() {
            let b = l.orbit[rng.gen_range(0..l.orbit.len())];
            g = g.then(l.transversal(b).expect("orbit point"));
        }
        g
    }

    /// Depth-first walk over group elements `g = u_m ⋯ u_0` (applied right to left). `prune(level,
    /// image)` sees the image of the level's base point under every completion and may cut the branch.
    pub fn search(
        &self,
        degree: usize,
        prune: &mut dyn FnMut(usize, u32) -> bool,
        visit: &mut dyn FnMut(&Permutation),
    ) {
        self.walk(0, &Permutation::identity(degree), None, prune, visit);
    }

    /// As [`search`](Self::search) restricted to elements sending the first base point to `first`.
    pub fn search_from(
        &self,
        degree: usize,
        first: u32,
        prune: &mut dyn FnMut(usize, u32) -> bool,
        visit: &mut dyn FnMut(&Permutation),
    ) {
        self.walk(0, &Permutation::identity(degree), Some(first), prune, visit);
    }

    fn walk(
        &self,
        level: usize,
        prefix: &Permutation,
        first: Option<u32>,
        prune: &mut dyn FnMut(usize, u32) -> bool,
        visit: &mut dyn FnMut(&Permutation),
    ) {
        let Some(l) = self.levels.get(level) else {
            visit(prefix);
            return;
        };
        for &b in &l.orbit {
            if level == 0 && first.is_some_and(|f| f != b) {
                continue;
            }
            if !prune(level, prefix.apply(b)) {
                continue;
            }
            let next = l.transversal(b).expect("orbit point").then(prefix);
            self.walk(level + 1, &next, first, prune, visit);
        }
    }
}

/// Sifts `g` through levels `start..`; returns the residue and the level where sifting stopped.
fn strip(levels: &[Level], g: &Permutation, start: usize) -> (Permutation, usize) {
    let mut h = g.clone();
    for (j, l) in levels.iter().enumerate().skip(start) {
        let b = h.apply(l.base);
        match &l.inverse[b as usize] {
            Some(inv) => h = h.then(inv),
            None => return (h, j),
        }
    }
    (h, levels.len())
}
