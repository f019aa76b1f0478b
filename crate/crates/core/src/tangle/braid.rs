//! Ribbon pure braid words, their tangle diagrams, and strand doubling and
//! deletion.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{parse_sign, TangleEvent, TangleWord};
use crate::error::{Error, Result};

/// A generator of the ribbon pure braid group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    /// Artin generator `σ_ij^e`, `i < j`.
    Sigma { i: usize, j: usize, e: i8 },
    /// Full twist `t_k^e` of strand `k`.
    Twist { k: usize, e: i8 },
}

impl Letter {
    pub fn sigma(i: usize, j: usize, e: i8) -> Self {
        Letter::Sigma { i, j, e }
    }

    pub fn twist(k: usize, e: i8) -> Self {
        Letter::Twist { k, e }
    }

    pub fn inverse(self) -> Self {
        match self {
            Letter::Sigma { i, j, e } => Letter::Sigma { i, j, e: -e },
            Letter::Twist { k, e } => Letter::Twist { k, e: -e },
        }
    }

    fn fits(&self, n: usize) -> bool {
        match *self {
            Letter::Sigma { i, j, e } => 1 <= i && i < j && j <= n && e.abs() == 1,
            Letter::Twist { k, e } => 1 <= k && k <= n && e.abs() == 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PureBraidWord {
    pub n: usize,
    pub letters: Vec<Letter>,
}

fn inverse_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

impl PureBraidWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        if let Some((k, l)) = letters.iter().enumerate().find(|(_, l)| !l.fits(n)) {
            return Err(Error::Index(format!("letter {} ({l:?}) does not fit {n} strands", k + 1)));
        }
        Ok(PureBraidWord { n, letters })
    }

    pub fn identity(n: usize) -> Self {
        PureBraidWord { n, letters: Vec::new() }
    }

    pub fn inverse(&self) -> Self {
        PureBraidWord { n: self.n, letters: inverse_word(&self.letters) }
    }

    /// Cancels adjacent inverse letters.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        PureBraidWord { n: self.n, letters: out }
    }

    /// Exponent sum of the twist letters on each strand.
    pub fn twist_sums(&self) -> Vec<i64> {
        let mut s = vec![0; self.n];
        for l in &self.letters {
            if let Letter::Twist { k, e } = *l {
                s[k - 1] += e as i64;
            }
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("braid n={}\n", self.n);
        for l in &self.letters {
            match *l {
                Letter::Sigma { i, j, e } => s.push_str(&format!("s {i} {j} {}\n", sign_char(e))),
                Letter::Twist { k, e } => s.push_str(&format!("t {k} {}\n", sign_char(e))),
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (w, extra) = parse_braid_lines(text)?;
        if let Some((line, _)) = extra.first() {
            return Err(Error::Parse { line: *line, msg: "unexpected line in a braid file".into() });
        }
        Ok(w)
    }
}

fn sign_char(e: i8) -> char {
    if e > 0 {
        '+'
    } else {
        '-'
    }
}

impl fmt::Display for PureBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses a braid file, returning lines it does not understand with their
/// line numbers.
pub(crate) fn parse_braid_lines(text: &str) -> Result<(PureBraidWord, Vec<(usize, Vec<String>)>)> {
    let mut n = None;
    let mut letters = Vec::new();
    let mut extra = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: ln + 1, msg };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let Some(n) = n else {
            let w = (parts.len() == 2 && parts[0] == "braid")
                .then(|| parts[1].strip_prefix("n="))
                .flatten()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| perr("expected header 'braid n=<strands>'".into()))?;
            n = Some(w);
            continue;
        };
        let num = |s: &str| s.parse::<usize>().map_err(|_| perr(format!("bad index '{s}'")));
        let sign = |s: &str| parse_sign(s).ok_or_else(|| perr(format!("bad sign '{s}'")));
        let l = match parts.as_slice() {
            ["s", i, j, e] => Letter::sigma(num(i)?, num(j)?, sign(e)?),
            ["t", k, e] => Letter::twist(num(k)?, sign(e)?),
            _ => {
                extra.push((ln + 1, parts.iter().map(|s| s.to_string()).collect()));
                continue;
            }
        };
        if !l.fits(n) {
            return Err(perr(format!("{l:?} does not fit {n} strands")));
        }
        letters.push(l);
    }
    let n = n.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    Ok((PureBraidWord { n, letters }, extra))
}

/// Crossing events of `σ_ij` (strand `j` passes behind the strands between
/// and wraps once around strand `i`).
fn artin_events(i: usize, j: usize, e: i8) -> Vec<TangleEvent> {
    let mut ev: Vec<TangleEvent> = (i + 1..j).rev().map(|p| TangleEvent::cross(p, -1)).collect();
    ev.push(TangleEvent::cross(i, 1));
    ev.push(TangleEvent::cross(i, 1));
    ev.extend((i + 1..j).map(|p| TangleEvent::cross(p, 1)));
    if e < 0 {
        ev = ev
            .into_iter()
            .rev()
            .map(|x| match x {
                TangleEvent::Cross { pos, sign } => TangleEvent::cross(pos, -sign),
                other => other,
            })
            .collect();
    }
    ev
}

pub fn braid_to_tangle(p: &PureBraidWord) -> TangleWord {
    let mut events = Vec::new();
    for l in &p.letters {
        match *l {
            Letter::Sigma { i, j, e } => events.extend(artin_events(i, j, e)),
            Letter::Twist { k, e } => events.extend([
                TangleEvent::Cup { pos: k + 1 },
                TangleEvent::cross(k, e),
                TangleEvent::Cap { pos: k + 1 },
            ]),
        }
    }
    TangleWord { bottom: p.n, events }
}

/// Replaces strand `i` by two parallel copies. Products in the doubling
/// table are read bottom to top, so each pair appears right factor first.
pub fn double_strand(p: &PureBraidWord, i: usize) -> Result<PureBraidWord> {
    if i < 1 || i > p.n {
        return Err(Error::Index(format!("strand {i} out of range 1..={}", p.n)));
    }
    let mut out = Vec::new();
    for l in &p.letters {
        match *l {
            Letter::Sigma { i: k, j: l2, e } => {
                if i < k {
                    out.push(Letter::sigma(k + 1, l2 + 1, e));
                } else if i == k {
                    let w = [Letter::sigma(i + 1, l2 + 1, 1), Letter::sigma(i, l2 + 1, 1)];
                    out.extend(if e > 0 { w.to_vec() } else { inverse_word(&w) });
                } else if i < l2 {
                    out.push(Letter::sigma(k, l2 + 1, e));
                } else if i == l2 {
                    let w = [Letter::sigma(k, i + 1, 1), Letter::sigma(k, i, 1)];
                    out.extend(if e > 0 { w.to_vec() } else { inverse_word(&w) });
                } else {
                    out.push(*l);
                }
            }
            Letter::Twist { k, e } => {
                if i < k {
                    out.push(Letter::twist(k + 1, e));
                } else if i == k {
                    out.extend([Letter::sigma(i, i + 1, e), Letter::twist(i, e), Letter::twist(i + 1, e)]);
                } else {
                    out.push(*l);
                }
            }
        }
    }
    Ok(PureBraidWord { n: p.n + 1, letters: out })
}

/// Removes strand `i`.
pub fn delete_strand(p: &PureBraidWord, i: usize) -> Result<PureBraidWord> {
    if i < 1 || i > p.n {
        return Err(Error::Index(format!("strand {i} out of range 1..={}", p.n)));
    }
    let mut out = Vec::new();
    for l in &p.letters {
        match *l {
            Letter::Sigma { i: k, j, e } => {
                if i == k || i == j {
                    continue;
                }
                let sh = |x: usize| if x > i { x - 1 } else { x };
                out.push(Letter::sigma(sh(k), sh(j), e));
            }
            Letter::Twist { k, e } => {
                if i == k {
                    continue;
                }
                out.push(Letter::twist(if k > i { k - 1 } else { k }, e));
            }
        }
    }
    Ok(PureBraidWord { n: p.n - 1, letters: out })
}

/// `σ_k A_ij σ_k⁻¹` as a word in Artin generators (`σ_k` read first).
fn conjugate_generator(k: usize, i: usize, j: usize) -> Vec<Letter> {
    if k + 1 == i {
        vec![Letter::sigma(i - 1, j, 1)]
    } else if k == i {
        if i + 1 == j {
            vec![Letter::sigma(i, j, 1)]
        } else {
            vec![Letter::sigma(i, i + 1, 1), Letter::sigma(i + 1, j, 1), Letter::sigma(i, i + 1, -1)]
        }
    } else if k + 1 == j {
        vec![Letter::sigma(i, j - 1, 1)]
    } else if k == j {
        vec![Letter::sigma(i, j, -1), Letter::sigma(i, j + 1, 1), Letter::sigma(i, j, 1)]
    } else {
        vec![Letter::sigma(i, j, 1)]
    }
}

/// `γ·x·γ⁻¹` for a positive crossing word `γ` (listed in reading order).
fn conjugate(gamma: &[usize], x: Letter) -> Vec<Letter> {
    let mut word = vec![x];
    for &k in gamma.iter().rev() {
        word = word
            .into_iter()
            .flat_map(|l| match l {
                Letter::Sigma { i, j, e } => {
                    let w = conjugate_generator(k, i, j);
                    if e > 0 {
                        w
                    } else {
                        inverse_word(&w)
                    }
                }
                t => vec![t],
            })
            .collect();
    }
    word
}

/// Positive permutation braid reaching the arrangement `labels` from the
/// sorted one, as crossing positions in reading order.
fn permutation_braid(labels: &[usize]) -> Vec<usize> {
    let mut a = labels.to_vec();
    let mut swaps = Vec::new();
    loop {
        let mut moved = false;
        for p in 0..a.len().saturating_sub(1) {
            if a[p] > a[p + 1] {
                a.swap(p, p + 1);
                swaps.push(p + 1);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    swaps.reverse();
    swaps
}

/// Rewrites a crossing-only pure braid diagram (positions and signs, read
/// bottom to top) as a word in Artin generators.
pub fn crossing_word_to_pure_braid(n: usize, word: &[(usize, i8)]) -> Result<PureBraidWord> {
    let mut arr: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for &(p, e) in word {
        if p < 1 || p >= n {
            return Err(Error::Width(format!("crossing at {p} on {n} strands")));
        }
        let inverted = arr[p - 1] > arr[p];
        let mut after = arr.clone();
        after.swap(p - 1, p);
        match (inverted, e > 0) {
            (false, false) => out.extend(conjugate(&permutation_braid(&arr), Letter::sigma(p, p + 1, -1))),
            (true, true) => out.extend(conjugate(&permutation_braid(&after), Letter::sigma(p, p + 1, 1))),
            _ => {}
        }
        arr = after;
    }
    if arr.iter().enumerate().any(|(k, &x)| k != x) {
        return Err(Error::Pairing("crossing word does not induce the identity permutation".into()));
    }
    Ok(PureBraidWord { n, letters: out }.free_reduce())
}

/// Free-group word; generator `x_k` is `k` and its inverse `-k` (1-based).
type FreeWord = Vec<i32>;

fn free_push(w: &mut FreeWord, x: i32) {
    if w.last() == Some(&-x) {
        w.pop();
    } else {
        w.push(x);
    }
}

/// Images of the free generators under the Artin action of a crossing
/// word, substituting one crossing at a time.
pub fn artin_action(n: usize, word: &[(usize, i8)]) -> Vec<Vec<i32>> {
    let mut images: Vec<FreeWord> = (1..=n as i32).map(|k| vec![k]).collect();
    for &(p, e) in word {
        let (a, b) = (p as i32, p as i32 + 1);
        let sub = |x: i32| -> FreeWord {
            let g = x.abs();
            let img: FreeWord = if e > 0 {
                if g == a {
                    vec![a, b, -a]
                } else if g == b {
                    vec![a]
                } else {
                    vec![g]
                }
            } else if g == a {
                vec![b]
            } else if g == b {
                vec![-b, a, b]
            } else {
                vec![g]
            };
            if x > 0 {
                img
            } else {
                img.iter().rev().map(|y| -y).collect()
            }
        };
        for im in images.iter_mut() {
            let mut next = FreeWord::new();
            for &x in im.iter() {
                for y in sub(x) {
                    free_push(&mut next, y);
                }
            }
            *im = next;
        }
    }
    images
}

fn crossings_of(w: &TangleWord) -> Vec<(usize, i8)> {
    w.events
        .iter()
        .filter_map(|e| match *e {
            TangleEvent::Cross { pos, sign } => Some((pos, sign)),
            _ => None,
        })
        .collect()
}

/// Equality in the ribbon pure braid group: same braid and same twist sums.
pub fn braid_eq(a: &PureBraidWord, b: &PureBraidWord) -> bool {
    let strip = |p: &PureBraidWord| {
        let no_twists = PureBraidWord {
            n: p.n,
            letters: p.letters.iter().copied().filter(|l| matches!(l, Letter::Sigma { .. })).collect(),
        };
        artin_action(p.n, &crossings_of(&braid_to_tangle(&no_twists)))
    };
    a.n == b.n && a.twist_sums() == b.twist_sums() && strip(a) == strip(b)
}

/// One instance of a defining relation of the ribbon pure braid group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub label: String,
    pub lhs: PureBraidWord,
    pub rhs: PureBraidWord,
    /// False for the interleaved commutation `i<k<j<l`, which does not hold
    /// between the braids themselves.
    pub geometric: bool,
}

/// All instances of the Markov relations on `n` strands. The relations are
/// written in composition order (rightmost letter lowest) and stored here
/// bottom to top.
pub fn markov_relations(n: usize) -> Vec<RelationInstance> {
    let s = |i, j| Letter::sigma(i, j, 1);
    let word = |ls: &[Letter]| PureBraidWord { n, letters: ls.iter().rev().copied().collect() };
    let mut out = Vec::new();
    let mut push = |label: String, a: &[Letter], b: &[Letter], geometric: bool| {
        out.push(RelationInstance { label, lhs: word(a), rhs: word(b), geometric });
    };
    for k in 1..=n {
        for l in 1..=n {
            if k < l {
                push(format!("t{k} t{l}"), &[Letter::twist(k, 1), Letter::twist(l, 1)], &[Letter::twist(l, 1), Letter::twist(k, 1)], true);
            }
            for j in l + 1..=n {
                let (t, x) = (Letter::twist(k, 1), s(l, j));
                push(format!("t{k} s{l},{j}"), &[t, x], &[x, t], true);
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in i + 1..=n {
                for l in k + 1..=n {
                    let (a, b) = (s(i, j), s(k, l));
                    if j < k {
                        push(format!("s{i},{j} s{k},{l} disjoint"), &[a, b], &[b, a], true);
                    } else if k < j && j < l {
                        push(format!("s{i},{j} s{k},{l} interleaved"), &[a, b], &[b, a], false);
                    }
                }
            }
            for k in j + 1..=n {
                let (ij, ik, jk) = (s(i, j), s(i, k), s(j, k));
                push(format!("triple {i},{j},{k} first"), &[ij, ik, jk], &[ik, jk, ij], true);
                push(format!("triple {i},{j},{k} second"), &[ik, jk, ij], &[jk, ij, ik], true);
                for l in k + 1..=n {
                    let (jl, jki) = (s(j, l), Letter::sigma(j, k, -1));
                    push(format!("quad {i},{j},{k},{l}"), &[ik, jk, jl, jki], &[jk, jl, jki, ik], true);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::{validate_tangle, Mode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pure(n: usize, len: usize, twists: bool, rng: &mut ChaCha8Rng) -> PureBraidWord {
        let letters = (0..len)
            .map(|_| {
                let e = if rng.gen_bool(0.5) { 1 } else { -1 };
                if twists && rng.gen_bool(0.2) {
                    Letter::twist(rng.gen_range(1..=n), e)
                } else {
                    let i = rng.gen_range(1..n);
                    Letter::sigma(i, rng.gen_range(i + 1..=n), e)
                }
            })
            .collect();
        PureBraidWord { n, letters }
    }

    #[test]
    fn artin_generators_are_pure() {
        for n in 2..=5 {
            for i in 1..n {
                for j in i + 1..=n {
                    let w = braid_to_tangle(&PureBraidWord::new(n, vec![Letter::sigma(i, j, 1)]).unwrap());
                    validate_tangle(&w, Mode::StringLink).unwrap();
                }
            }
        }
    }

    #[test]
    fn conjugation_table_matches_artin_action() {
        for n in 2..=6 {
            for i in 1..n {
                for j in i + 1..=n {
                    for k in 1..n {
                        let mut lhs = vec![(k, 1i8)];
                        lhs.extend(crossings_of(&braid_to_tangle(&PureBraidWord { n, letters: vec![Letter::sigma(i, j, 1)] })));
                        lhs.push((k, -1));
                        let rhs = PureBraidWord { n, letters: conjugate_generator(k, i, j) };
                        assert_eq!(
                            artin_action(n, &lhs),
                            artin_action(n, &crossings_of(&braid_to_tangle(&rhs))),
                            "k={k} i={i} j={j}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn crossing_words_convert_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let p = random_pure(n, rng.gen_range(0..6), false, &mut rng);
            let cw = crossings_of(&braid_to_tangle(&p));
            let q = crossing_word_to_pure_braid(n, &cw).unwrap();
            assert!(braid_eq(&p, &q), "{p} vs {q}");
        }
    }

    #[test]
    fn doubling_matches_cabling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..=4);
            let p = random_pure(n, rng.gen_range(0..5), false, &mut rng);
            let i = rng.gen_range(1..=n);
            let d = double_strand(&p, i).unwrap();
            // cable the crossing word directly: strand i becomes two parallel strands
            let mut cabled = Vec::new();
            let mut arr: Vec<usize> = (1..=n).collect();
            for (pos, s) in crossings_of(&braid_to_tangle(&p)) {
                let width = |x: usize| if x == i { 2 } else { 1 };
                let start: usize = arr[..pos - 1].iter().map(|&x| width(x)).sum();
                let (a, b) = (width(arr[pos - 1]), width(arr[pos]));
                // a strands on the left cross b strands on the right
                for r in 0..a {
                    for c in 0..b {
                        cabled.push((start + a - r + c, s));
                    }
                }
                arr.swap(pos - 1, pos);
            }
            let q = crossing_word_to_pure_braid(n + 1, &cabled).unwrap();
            assert!(braid_eq(&d, &q), "doubling {i} of {p}");
        }
    }

    #[test]
    fn deletion_drops_a_strand() {
        let p = PureBraidWord::new(3, vec![Letter::sigma(1, 3, 1), Letter::sigma(2, 3, -1), Letter::twist(2, 1)]).unwrap();
        let d = delete_strand(&p, 2).unwrap();
        assert_eq!(d.letters, vec![Letter::sigma(1, 2, 1)]);
        assert_eq!(delete_strand(&double_strand(&p, 2).unwrap(), 3).unwrap().letters.len(), 3);
    }

    #[test]
    fn markov_relations_hold_between_braids() {
        for n in 2..=5 {
            let rels = markov_relations(n);
            for r in &rels {
                assert_eq!(braid_eq(&r.lhs, &r.rhs), r.geometric, "{} on {n} strands", r.label);
            }
        }
        assert!(markov_relations(5).iter().any(|r| !r.geometric));
    }

    #[test]
    fn text_roundtrip() {
        let p = PureBraidWord::new(3, vec![Letter::sigma(1, 3, -1), Letter::twist(2, 1)]).unwrap();
        assert_eq!(PureBraidWord::parse(&p.to_text()).unwrap(), p);
        assert!(PureBraidWord::parse("braid n=2\ns 2 1 +\n").is_err());
    }
}
