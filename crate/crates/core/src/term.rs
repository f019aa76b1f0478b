//! Sliced terms of the free braided category generated by the Hopf diagram
//! letters, and the convolution structure on forms `*^{⊗n} → 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    Delta,
    Eps,
    S,
    Sinv,
    OmegaPlus,
    OmegaMinus,
    ThetaPlus,
    ThetaMinus,
    BraidPlus,
    BraidMinus,
}

impl Generator {
    pub const ALL: [Generator; 10] = [
        Generator::Delta,
        Generator::Eps,
        Generator::S,
        Generator::Sinv,
        Generator::OmegaPlus,
        Generator::OmegaMinus,
        Generator::ThetaPlus,
        Generator::ThetaMinus,
        Generator::BraidPlus,
        Generator::BraidMinus,
    ];

    /// (inputs, outputs)
    pub fn arity(self) -> (usize, usize) {
        use Generator::*;
        match self {
            Delta => (1, 2),
            Eps | ThetaPlus | ThetaMinus => (1, 0),
            S | Sinv => (1, 1),
            OmegaPlus | OmegaMinus => (2, 0),
            BraidPlus | BraidMinus => (2, 2),
        }
    }

    pub fn is_antipode(self) -> bool {
        matches!(self, Generator::S | Generator::Sinv)
    }

    pub fn is_braiding(self) -> bool {
        matches!(self, Generator::BraidPlus | Generator::BraidMinus)
    }

    pub fn inverse_braiding(self) -> Option<Generator> {
        match self {
            Generator::BraidPlus => Some(Generator::BraidMinus),
            Generator::BraidMinus => Some(Generator::BraidPlus),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        use Generator::*;
        match self {
            Delta => "delta",
            Eps => "eps",
            S => "s",
            Sinv => "sinv",
            OmegaPlus => "w+",
            OmegaMinus => "w-",
            ThetaPlus => "t+",
            ThetaMinus => "t-",
            BraidPlus => "x+",
            BraidMinus => "x-",
        }
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .iter()
            .copied()
            .find(|g| g.token() == s)
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown generator '{s}'") })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slice {
    pub left: usize,
    pub gen: Generator,
    pub right: usize,
}

impl Slice {
    pub fn new(left: usize, gen: Generator, right: usize) -> Self {
        Slice { left, gen, right }
    }

    pub fn width_in(&self) -> usize {
        self.left + self.gen.arity().0 + self.right
    }

    pub fn width_out(&self) -> usize {
        self.left + self.gen.arity().1 + self.right
    }

    pub fn padded(&self, left: usize, right: usize) -> Slice {
        Slice::new(self.left + left, self.gen, self.right + right)
    }
}

/// A morphism `*^{⊗dom} → *^{⊗cod}` as a bottom-to-top list of slices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidedTerm {
    dom: usize,
    slices: Vec<Slice>,
}

impl BraidedTerm {
    pub fn new(dom: usize, slices: Vec<Slice>) -> Result<Self> {
        let mut w = dom;
        for (k, s) in slices.iter().enumerate() {
            if s.width_in() != w {
                return Err(Error::Arity(format!(
                    "slice {} expects width {} but receives {}",
                    k + 1,
                    s.width_in(),
                    w
                )));
            }
            w = s.width_out();
        }
        Ok(BraidedTerm { dom, slices })
    }

    /// Skips validation; callers guarantee width chaining.
    pub(crate) fn from_parts(dom: usize, slices: Vec<Slice>) -> Self {
        debug_assert!(BraidedTerm::new(dom, slices.clone()).is_ok());
        BraidedTerm { dom, slices }
    }

    pub fn identity(n: usize) -> Self {
        BraidedTerm { dom: n, slices: Vec::new() }
    }

    pub fn generator(g: Generator) -> Self {
        BraidedTerm { dom: g.arity().0, slices: vec![Slice::new(0, g, 0)] }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.slices.last().map_or(self.dom, Slice::width_out)
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn count(&self, pred: impl Fn(Generator) -> bool) -> usize {
        self.slices.iter().filter(|s| pred(s.gen)).count()
    }

    pub fn antipode_count(&self) -> usize {
        self.count(Generator::is_antipode)
    }

    /// Width of the strand set just below slice `k` (k = len gives the codomain).
    pub fn width_at(&self, k: usize) -> usize {
        if k == 0 {
            self.dom
        } else {
            self.slices[k - 1].width_out()
        }
    }

    /// Textual form: `hd n=<dom>` followed by one slice per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("hd n={}\n", self.dom);
        for sl in &self.slices {
            s.push_str(&format!("{} {} {}\n", sl.left, sl.gen, sl.right));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut dom: Option<usize> = None;
        let mut slices = Vec::new();
        let mut width = 0;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: ln + 1, msg };
            if dom.is_none() {
                let n = line
                    .strip_prefix("hd")
                    .map(str::trim)
                    .and_then(|r| r.strip_prefix("n="))
                    .ok_or_else(|| perr("expected header 'hd n=<dom>'".into()))?;
                let n: usize = n.trim().parse().map_err(|_| perr(format!("bad domain '{n}'")))?;
                dom = Some(n);
                width = n;
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(perr(format!("expected '<left> <gen> <right>', got '{line}'")));
            }
            let left: usize = parts[0].parse().map_err(|_| perr(format!("bad left count '{}'", parts[0])))?;
            let gen: Generator = parts[1].parse().map_err(|_| perr(format!("unknown generator '{}'", parts[1])))?;
            let right: usize = parts[2].parse().map_err(|_| perr(format!("bad right count '{}'", parts[2])))?;
            let s = Slice::new(left, gen, right);
            if s.width_in() != width {
                return Err(perr(format!("slice needs width {} but the current width is {}", s.width_in(), width)));
            }
            width = s.width_out();
            slices.push(s);
        }
        let dom = dom.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
        Ok(BraidedTerm { dom, slices })
    }
}

impl fmt::Display for BraidedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `f` followed by `g`.
pub fn term_compose(f: &BraidedTerm, g: &BraidedTerm) -> Result<BraidedTerm> {
    if f.cod() != g.dom() {
        return Err(Error::Arity(format!("cannot compose: codomain {} vs domain {}", f.cod(), g.dom())));
    }
    let mut slices = f.slices.clone();
    slices.extend_from_slice(&g.slices);
    Ok(BraidedTerm { dom: f.dom, slices })
}

pub fn term_tensor(f: &BraidedTerm, g: &BraidedTerm) -> BraidedTerm {
    let mut slices: Vec<Slice> = f.slices.iter().map(|s| s.padded(0, g.dom)).collect();
    let fc = f.cod();
    slices.extend(g.slices.iter().map(|s| s.padded(fc, 0)));
    BraidedTerm { dom: f.dom + g.dom, slices }
}

/// Left comb `Δ^{(n)}: * → *^{⊗(n+1)}` with `Δ^{(n+1)} = (Δ^{(n)} ⊗ id)Δ`.
pub fn delta_power(n: usize) -> BraidedTerm {
    // Δ first, then Δ^{(n-1)} on the left leg; unrolled this is Δ at position 0 each time.
    let slices = (0..n).map(|k| Slice::new(0, Generator::Delta, k)).collect();
    BraidedTerm { dom: 1, slices }
}

/// A form `*^{⊗n} → 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HopfDiagram {
    term: BraidedTerm,
}

impl HopfDiagram {
    pub fn new(term: BraidedTerm) -> Result<Self> {
        if term.cod() != 0 {
            return Err(Error::Arity(format!("a Hopf diagram needs codomain 0, got {}", term.cod())));
        }
        Ok(HopfDiagram { term })
    }

    pub fn n(&self) -> usize {
        self.term.dom()
    }

    pub fn term(&self) -> &BraidedTerm {
        &self.term
    }

    pub fn into_term(self) -> BraidedTerm {
        self.term
    }

    pub fn generator(g: Generator) -> Self {
        HopfDiagram::new(BraidedTerm::generator(g)).expect("generator is not a form")
    }

    pub fn tensor(&self, other: &HopfDiagram) -> HopfDiagram {
        HopfDiagram { term: term_tensor(&self.term, &other.term) }
    }

    /// Precomposes with `pre: *^m → *^n`.
    pub fn precompose(&self, pre: &BraidedTerm) -> Result<HopfDiagram> {
        HopfDiagram::new(term_compose(pre, &self.term)?)
    }
}

impl fmt::Display for HopfDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.term.fmt(f)
    }
}

/// `ε^{⊗n}`, the unit of the convolution product.
pub fn conv_identity(n: usize) -> HopfDiagram {
    // successive ε slices each eat the leftmost strand
    let slices = (0..n).map(|k| Slice::new(0, Generator::Eps, n - k - 1)).collect();
    HopfDiagram { term: BraidedTerm { dom: n, slices } }
}

/// Comultiplication of `*^{⊗n}`: `*^{⊗n} → *^{⊗2n}` with all first copies
/// on the left, the second copies routed past them by positive braidings.
pub fn tensor_coproduct(n: usize) -> BraidedTerm {
    let mut slices = Vec::new();
    for k in 0..n {
        // strand k sits at 2k after the first k strands were doubled
        slices.push(Slice::new(2 * k, Generator::Delta, n - k - 1));
    }
    let w = 2 * n;
    for k in 2..=n {
        // first copy of strand k is at 2(k-1); move it left past k-1 second copies
        for p in ((k - 1)..=(2 * k - 3)).rev() {
            slices.push(Slice::new(p, Generator::BraidPlus, w - p - 2));
        }
    }
    BraidedTerm::from_parts(n, slices)
}

/// `(D1 ⊗ D2) ∘ Δ_{*^{⊗n}}`.
pub fn conv_compose(d1: &HopfDiagram, d2: &HopfDiagram) -> Result<HopfDiagram> {
    if d1.n() != d2.n() {
        return Err(Error::Arity(format!("convolution of diagrams with {} and {} inputs", d1.n(), d2.n())));
    }
    let body = term_tensor(&d1.term, &d2.term);
    HopfDiagram::new(term_compose(&tensor_coproduct(d1.n()), &body)?)
}

/// Convolution product of a non-empty list, folded left.
pub fn conv_product(ds: &[HopfDiagram], n: usize) -> Result<HopfDiagram> {
    let mut acc: Option<HopfDiagram> = None;
    for d in ds {
        acc = Some(match acc {
            None => d.clone(),
            Some(a) => conv_compose(&a, d)?,
        });
    }
    Ok(acc.unwrap_or_else(|| conv_identity(n)))
}

/// A one-input form `g` on input `k` (1-based) of `n`, with ε on the others.
pub fn single_form(g: Generator, k: usize, n: usize) -> Result<HopfDiagram> {
    if g.arity() != (1, 0) || k == 0 || k > n {
        return Err(Error::Index(format!("single form {g} at {k} of {n}")));
    }
    let mut slices = Vec::with_capacity(n);
    let mut w = n;
    for _ in 1..k {
        w -= 1;
        slices.push(Slice::new(0, Generator::Eps, w));
    }
    for _ in k..n {
        w -= 1;
        slices.push(Slice::new(1, Generator::Eps, w - 1));
    }
    slices.push(Slice::new(0, g, 0));
    HopfDiagram::new(BraidedTerm::from_parts(n, slices))
}

/// A two-input form `g` on inputs `i < j` (1-based) of `n`, with ε on the others.
pub fn pair_form(g: Generator, i: usize, j: usize, n: usize) -> Result<HopfDiagram> {
    if g.arity() != (2, 0) || i == 0 || i >= j || j > n {
        return Err(Error::Index(format!("pair form {g} at ({i},{j}) of {n}")));
    }
    let mut slices = Vec::with_capacity(n);
    let mut w = n;
    for _ in 1..i {
        w -= 1;
        slices.push(Slice::new(0, Generator::Eps, w));
    }
    for _ in (i + 1)..j {
        w -= 1;
        slices.push(Slice::new(1, Generator::Eps, w - 1));
    }
    for _ in j..n {
        w -= 1;
        slices.push(Slice::new(2, Generator::Eps, w - 2));
    }
    slices.push(Slice::new(0, g, 0));
    HopfDiagram::new(BraidedTerm::from_parts(n, slices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    #[test]
    fn compose_chains_arity() {
        let t = term_compose(&BraidedTerm::generator(S), &BraidedTerm::generator(Delta)).unwrap();
        assert_eq!((t.dom(), t.cod()), (1, 2));
        assert!(term_compose(&BraidedTerm::generator(Delta), &BraidedTerm::generator(S)).is_err());
        let g = BraidedTerm::new(3, vec![Slice::new(1, OmegaPlus, 0)]).unwrap();
        assert_eq!(term_compose(&BraidedTerm::identity(3), &g).unwrap(), g);
    }

    #[test]
    fn tensor_bookkeeping() {
        let e = BraidedTerm::generator(Eps);
        let ee = term_tensor(&e, &e);
        assert_eq!((ee.dom(), ee.cod()), (2, 0));
        assert_eq!(term_tensor(&BraidedTerm::identity(0), &e), e);
        let td = term_tensor(&BraidedTerm::generator(ThetaPlus), &BraidedTerm::generator(Delta));
        assert_eq!((td.dom(), td.cod()), (2, 2));
    }

    #[test]
    fn delta_powers() {
        assert_eq!(delta_power(0), BraidedTerm::identity(1));
        assert_eq!(delta_power(1), BraidedTerm::generator(Delta));
        let d2 = delta_power(2);
        assert_eq!(d2.slices(), &[Slice::new(0, Delta, 0), Slice::new(0, Delta, 1)]);
        assert_eq!(d2.cod(), 3);
    }

    #[test]
    fn convolution_unit_shapes() {
        assert!(conv_identity(0).term().is_empty());
        assert_eq!(conv_identity(1), HopfDiagram::generator(Eps));
        assert_eq!(conv_identity(3).term().len(), 3);
        let c = conv_compose(&HopfDiagram::generator(ThetaPlus), &HopfDiagram::generator(ThetaMinus)).unwrap();
        assert_eq!(c.term().slices(), &[Slice::new(0, Delta, 0), Slice::new(0, ThetaPlus, 1), Slice::new(0, ThetaMinus, 0)]);
    }

    #[test]
    fn coproduct_widths() {
        for n in 0..5 {
            let t = tensor_coproduct(n);
            assert_eq!((t.dom(), t.cod()), (n, 2 * n));
            assert_eq!(t.count(|g| g == BraidPlus), n * (n.saturating_sub(1)) / 2);
        }
    }

    #[test]
    fn pair_and_single_forms() {
        let p = pair_form(OmegaPlus, 2, 4, 5).unwrap();
        assert_eq!(p.term().count(|g| g == Eps), 3);
        assert_eq!(p.term().slices().last().unwrap().gen, OmegaPlus);
        assert_eq!(single_form(ThetaPlus, 1, 1).unwrap(), HopfDiagram::generator(ThetaPlus));
        assert!(pair_form(OmegaPlus, 3, 2, 4).is_err());
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let t = BraidedTerm::new(2, vec![Slice::new(0, S, 1), Slice::new(0, OmegaPlus, 0)]).unwrap();
        assert_eq!(BraidedTerm::parse(&t.to_text()).unwrap(), t);
        let bad = "hd n=2\n0 s 1\n0 eps 0\n";
        match BraidedTerm::parse(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
