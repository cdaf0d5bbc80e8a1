//! Non-crossing partitions, Temperley-Lieb pairings, Kreweras complements and the
//! Möbius function of NC(n). Ground sets are `{1..n}`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path};

/// A partition of `{1..n}` with sorted blocks, ordered by minimum element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

/// A non-crossing perfect matching of `{1..2n}`.
pub type TlPairing = Partition;

impl Partition {
    /// Canonicalizes and validates the block list (disjoint cover, non-crossing).
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Partition> {
        let p = Partition::canonical(n, blocks);
        let mut seen = vec![false; n + 1];
        for b in &p.blocks {
            if b.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            for &x in b {
                if x == 0 || x > n || seen[x] {
                    return Err(Error::Invalid(format!("element {x} missing from or repeated in 1..{n}")));
                }
                seen[x] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::Invalid(format!("blocks do not cover 1..{n}")));
        }
        if !p.is_noncrossing() {
            return Err(Error::Invalid("partition is crossing".into()));
        }
        Ok(p)
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<usize>>) -> Partition {
        blocks.iter_mut().for_each(|b| b.sort_unstable());
        blocks.sort_by_key(|b| b.first().copied().unwrap_or(0));
        Partition { n, blocks }
    }

    /// 1_n: a single block.
    pub fn full(n: usize) -> Partition {
        let blocks = if n == 0 { vec![] } else { vec![(1..=n).collect()] };
        Partition { n, blocks }
    }

    /// 0_n: singletons.
    pub fn singletons(n: usize) -> Partition {
        Partition { n, blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of each element, 1-based elements (index 0 unused).
    pub fn block_of(&self) -> Vec<usize> {
        let mut of = vec![usize::MAX; self.n + 1];
        for (k, b) in self.blocks.iter().enumerate() {
            for &x in b {
                of[x] = k;
            }
        }
        of
    }

    pub fn is_noncrossing(&self) -> bool {
        let of = self.block_of();
        // a < b < c < d with a,c in one block and b,d in another.
        for a in 1..=self.n {
            for b in a + 1..=self.n {
                if of[a] == of[b] {
                    continue;
                }
                for c in b + 1..=self.n {
                    if of[c] != of[a] {
                        continue;
                    }
                    for d in c + 1..=self.n {
                        if of[d] == of[b] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// Partner of each point of a pairing; index 0 unused.
    pub fn partner(&self) -> Vec<usize> {
        let mut p = vec![0; self.n + 1];
        for b in &self.blocks {
            if let [i, j] = b[..] {
                p[i] = j;
                p[j] = i;
            }
        }
        p
    }

    /// π ≤ τ: every block of π lies inside a block of τ.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.n != other.n {
            return false;
        }
        let of = other.block_of();
        self.blocks.iter().all(|b| b.iter().all(|&x| of[x] == of[b[0]]))
    }

    /// Restriction to a block-union `elems` (sorted), relabelled to `{1..|elems|}`.
    pub fn restrict(&self, elems: &[usize]) -> Partition {
        let mut index = vec![0; self.n + 1];
        for (k, &x) in elems.iter().enumerate() {
            index[x] = k + 1;
        }
        let blocks =
            self.blocks.iter().filter(|b| index[b[0]] != 0).map(|b| b.iter().map(|&x| index[x]).collect()).collect();
        Partition::canonical(elems.len(), blocks)
    }

    /// Rotation `i ↦ i+1 (mod n)`.
    pub fn rotate(&self) -> Partition {
        let n = self.n;
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&x| x % n + 1).collect()).collect();
        Partition::canonical(n, blocks)
    }

    /// Blocks that are intervals `[k+1, l]`, excluding the case of a single block.
    pub fn interval_blocks(&self) -> Vec<(usize, usize)> {
        if self.blocks.len() <= 1 {
            return Vec::new();
        }
        self.blocks
            .iter()
            .filter(|b| b[b.len() - 1] - b[0] + 1 == b.len())
            .map(|b| (b[0] - 1, b[b.len() - 1]))
            .collect()
    }

    /// Removes the interval block `[k+1, l]` and relabels the rest.
    pub fn remove_interval(&self, k: usize, l: usize) -> Partition {
        let width = l - k;
        let blocks = self
            .blocks
            .iter()
            .filter(|b| !(b[0] == k + 1 && b[b.len() - 1] == l))
            .map(|b| b.iter().map(|&x| if x > l { x - width } else { x }).collect())
            .collect();
        Partition::canonical(self.n - width, blocks)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn catalan(n: usize) -> u64 {
    // C_n = binom(2n, n)/(n+1), built incrementally to stay exact.
    let mut c: u64 = 1;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// NC(n) by backtracking over element placements, in lexicographic block order.
pub fn enumerate_nc(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    place(1, n, &mut blocks, &mut out);
    out
}

fn place(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Partition>) {
    if i > n {
        out.push(Partition::canonical(n, blocks.clone()));
        return;
    }
    for k in 0..blocks.len() {
        let last = *blocks[k].last().expect("blocks are nonempty");
        // Adding i to block k crosses iff another block has elements on both sides of `last`.
        let crosses = blocks
            .iter()
            .enumerate()
            .any(|(j, b)| j != k && b.iter().any(|&x| x > last) && b.iter().any(|&x| x < last));
        if !crosses {
            blocks[k].push(i);
            place(i + 1, n, blocks, out);
            blocks[k].pop();
        }
    }
    blocks.push(vec![i]);
    place(i + 1, n, blocks, out);
    blocks.pop();
}

/// TL(m) for even m: 1 is paired with an even-distance point j, recursively inside and outside.
pub fn enumerate_tl(m: usize) -> Vec<TlPairing> {
    if m % 2 == 1 {
        return Vec::new();
    }
    tl_on(1, m).into_iter().map(|blocks| Partition::canonical(m, blocks)).collect()
}

fn tl_on(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut j = lo + 1;
    while j <= hi {
        for inner in tl_on(lo + 1, j - 1) {
            for outer in tl_on(j + 1, hi) {
                let mut blocks = vec![vec![lo, j]];
                blocks.extend(inner.iter().cloned());
                blocks.extend(outer.iter().cloned());
                out.push(blocks);
            }
        }
        j += 2;
    }
    out
}

/// Kreweras complement via the permutation `π⁻¹γ`, with `i'` placed right after `i`.
pub fn kreweras(p: &Partition) -> Partition {
    let n = p.n;
    if n == 0 {
        return p.clone();
    }
    // π as a permutation: each block is a cycle in increasing order.
    let mut prev = vec![0; n + 1];
    for b in &p.blocks {
        for (k, &x) in b.iter().enumerate() {
            prev[x] = b[(k + b.len() - 1) % b.len()];
        }
    }
    let mut seen = vec![false; n + 1];
    let mut blocks = Vec::new();
    for s in 1..=n {
        if seen[s] {
            continue;
        }
        let mut block = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            block.push(x);
            x = prev[x % n + 1];
        }
        blocks.push(block);
    }
    Partition::canonical(n, blocks)
}

/// Kreweras complement by brute force: the coarsest σ ∈ NC(n) with π ∪ σ non-crossing on
/// the interleaved set 1 < 1' < 2 < 2' < … (i ↦ 2i−1, i' ↦ 2i).
pub fn kreweras_brute(p: &Partition) -> Partition {
    let n = p.n;
    let mut best: Option<Partition> = None;
    for s in enumerate_nc(n) {
        let mut blocks: Vec<Vec<usize>> = p.blocks.iter().map(|b| b.iter().map(|&x| 2 * x - 1).collect()).collect();
        blocks.extend(s.blocks.iter().map(|b| b.iter().map(|&x| 2 * x).collect()));
        if !Partition::canonical(2 * n, blocks).is_noncrossing() {
            continue;
        }
        if best.as_ref().is_none_or(|b| s.block_count() < b.block_count()) {
            best = Some(s);
        }
    }
    best.expect("0_n is always compatible")
}

/// All set partitions of {1..n} via restricted growth strings.
pub fn enumerate_set_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        let n = rgs.len();
        if i == n {
            let mut blocks = vec![Vec::new(); max];
            for (k, &b) in rgs.iter().enumerate() {
                blocks[b].push(k + 1);
            }
            out.push(Partition::canonical(n, blocks));
            return;
        }
        for b in 0..=max {
            rgs[i] = b;
            rec(i + 1, max.max(b + 1), rgs, out);
        }
    }
    rec(0, 0, &mut rgs, &mut out);
    out
}

/// Checks that every class `{a_1<…<a_k}` of K(T) has constant parity and that
/// `{a_i+1, a_{i+1}} ∈ T` cyclically. Returns a witness on failure.
pub fn kreweras_class_structure(t: &TlPairing) -> std::result::Result<(), String> {
    let m = t.n;
    let partner = t.partner();
    for c in kreweras(t).blocks() {
        if c.iter().any(|&a| a % 2 != c[0] % 2) {
            return Err(format!("class {c:?} of K({t}) mixes parities"));
        }
        for i in 0..c.len() {
            let a = c[i] % m + 1;
            let b = c[(i + 1) % c.len()];
            if partner[a] != b {
                return Err(format!("class {c:?} of K({t}): {{{a},{b}}} is not a class of T"));
            }
        }
    }
    Ok(())
}

/// Σ_{c∈C} ε_T(c) = 2−|C| for classes of K(T) avoiding 2n and −|C| for the one containing 2n,
/// with ε_T(i) = +1 on the smaller element of its pair and −1 on the larger.
pub fn epsilon_identity_check(t: &TlPairing) -> std::result::Result<(), String> {
    let m = t.n;
    let partner = t.partner();
    for c in kreweras(t).blocks() {
        let sum: i64 = c.iter().map(|&i| if i < partner[i] { 1 } else { -1 }).sum();
        let want = if c.contains(&m) { -(c.len() as i64) } else { 2 - c.len() as i64 };
        if sum != want {
            return Err(format!("class {c:?} of K({t}): ε sum {sum}, expected {want}"));
        }
    }
    Ok(())
}

/// μ(π, τ) as a product over blocks B of τ of μ(π|_B, 1_B), each evaluated as
/// Π over blocks V of K(π|_B) of (−1)^{|V|−1} Cat_{|V|−1}.
pub fn mobius_nc(p: &Partition, t: &Partition) -> Result<i64> {
    if !p.refines(t) {
        return Err(Error::Invalid(format!("{p} does not refine {t}")));
    }
    let mut value = 1i64;
    for b in t.blocks() {
        for v in kreweras(&p.restrict(b)).blocks() {
            let sign = if v.len() % 2 == 1 { 1 } else { -1 };
            value *= sign * catalan(v.len() - 1) as i64;
        }
    }
    Ok(value)
}

/// μ(π, τ) from the defining recursion Σ_{π≤σ≤τ} μ(σ, τ) = [π = τ], over the whole lattice.
pub fn mobius_nc_recursive(p: &Partition, t: &Partition) -> Result<i64> {
    if !p.refines(t) {
        return Err(Error::Invalid(format!("{p} does not refine {t}")));
    }
    let interval: Vec<Partition> = enumerate_nc(p.n).into_iter().filter(|s| p.refines(s) && s.refines(t)).collect();
    let mut memo: HashMap<Partition, i64> = HashMap::new();
    Ok(mobius_down(p, t, &interval, &mut memo))
}

fn mobius_down(s: &Partition, t: &Partition, interval: &[Partition], memo: &mut HashMap<Partition, i64>) -> i64 {
    if s == t {
        return 1;
    }
    if let Some(&v) = memo.get(s) {
        return v;
    }
    let mut sum = 0;
    for u in interval {
        if u != s && s.refines(u) {
            sum += mobius_down(u, t, interval, memo);
        }
    }
    memo.insert(s.clone(), -sum);
    -sum
}

/// S(π): for each block {c_1<…<c_t}, pair (c_p,2) with (c_{p+1},1) and (c_t,2) with (c_1,1),
/// where (c,1) ↦ 2c−1 and (c,2) ↦ 2c.
pub fn double_bijection(p: &Partition) -> TlPairing {
    let mut blocks = Vec::new();
    for b in &p.blocks {
        for k in 0..b.len() {
            let next = b[(k + 1) % b.len()];
            blocks.push(vec![2 * b[k], 2 * next - 1]);
        }
    }
    Partition::canonical(2 * p.n, blocks)
}

/// ξ_{2i} = reversal(ξ_{2i+1}) for i = 1..n, indices mod 2n.
pub fn is_starry(g: &Graph, path: &Path) -> Result<bool> {
    let m = path.len();
    if m % 2 == 1 || m == 0 {
        return Err(Error::Invalid(format!("starry test needs a positive even length, got {m}")));
    }
    Ok((1..=m / 2).all(|i| path.edge(2 * i) == g.edge(path.edge((2 * i) % m + 1)).reversal))
}
