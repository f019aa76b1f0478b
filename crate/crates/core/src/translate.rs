//! Translation between ribbon pure braids, string links and Hopf diagrams.

use crate::error::{Error, Result};
use crate::tangle::{
    extract_presentation, to_string_link, Letter, PureBraidWord, StringLinkPresentation, TangleEvent, TangleWord,
};
use crate::term::{conv_identity, conv_product, pair_form, single_form, BraidedTerm, Generator, HopfDiagram, Slice};

/// Form of the generator `σ_ij^{±1}`: the pairing `ω±` on legs `i, j`.
pub fn sigma_diagram(i: usize, j: usize, n: usize, e: i8) -> Result<HopfDiagram> {
    pair_form(if e > 0 { Generator::OmegaPlus } else { Generator::OmegaMinus }, i, j, n)
}

/// Form of the twist `t_k^{±1}`: `θ±` on leg `k`.
pub fn omega_diagram(k: usize, n: usize, e: i8) -> Result<HopfDiagram> {
    single_form(if e > 0 { Generator::ThetaPlus } else { Generator::ThetaMinus }, k, n)
}

fn letter_form(l: Letter, n: usize) -> Result<HopfDiagram> {
    match l {
        Letter::Sigma { i, j, e } => sigma_diagram(i, j, n, e),
        Letter::Twist { k, e } => omega_diagram(k, n, e),
    }
}

/// Convolution product of the letter forms. Words are read bottom to top
/// while `D₁ ⋆ D₂` stacks `D₂` below `D₁`, so the top letter comes first.
pub fn psi0(p: &PureBraidWord) -> Result<HopfDiagram> {
    if p.letters.is_empty() {
        return Ok(conv_identity(p.n));
    }
    let forms: Vec<HopfDiagram> = p.letters.iter().rev().map(|&l| letter_form(l, p.n)).collect::<Result<_>>()?;
    conv_product(&forms, p.n)
}

/// `D ∘ (id^{i−2} ⊗ (id⊗S⊗id)Δ^{(2)} ⊗ id^{n−i−1})`: merges legs `i−1, i, i+1`.
pub fn contract_c(d: &HopfDiagram, i: usize) -> Result<HopfDiagram> {
    let n = d.n();
    if i < 2 || i + 1 > n {
        return Err(Error::Index(format!("contraction index {i} needs 2 ≤ i ≤ {}", n.saturating_sub(1))));
    }
    let (l, r) = (i - 2, n - i - 1);
    let gadget = BraidedTerm::new(
        n - 2,
        vec![Slice::new(l, Generator::Delta, r), Slice::new(l, Generator::Delta, r + 1), Slice::new(l + 1, Generator::S, r + 1)],
    )?;
    d.precompose(&gadget)
}

/// Hopf diagram of a presented string link.
pub fn psi_full(p: &StringLinkPresentation) -> Result<HopfDiagram> {
    let mut body = psi0(&p.braid)?;
    for &j in &p.contractions {
        body = contract_c(&body, j)?;
    }
    let mut prefix = Vec::new();
    for (k, &a) in p.twists.iter().enumerate() {
        for _ in 0..a.unsigned_abs() {
            prefix.push(omega_diagram(k + 1, p.n, if a > 0 { 1 } else { -1 })?);
        }
    }
    if prefix.is_empty() {
        return Ok(body);
    }
    prefix.push(body);
    conv_product(&prefix, p.n)
}

/// Hopf diagram of a string link given as a tangle word.
pub fn psi_of_tangle(t: &TangleWord) -> Result<HopfDiagram> {
    psi_full(&extract_presentation(t)?)
}

/// A string link read from a braid, presentation or tangle file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkSource {
    Tangle(TangleWord),
    Presentation(StringLinkPresentation),
}

impl LinkSource {
    /// Dispatches on the header line: `tangle w=…` or `braid n=…`.
    pub fn parse(text: &str) -> Result<Self> {
        let header = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty());
        match header {
            Some(h) if h.starts_with("tangle") => Ok(LinkSource::Tangle(TangleWord::parse(text)?)),
            Some(h) if h.starts_with("braid") => Ok(LinkSource::Presentation(StringLinkPresentation::parse(text)?)),
            _ => Err(Error::Parse { line: 1, msg: "expected a 'braid n=' or 'tangle w=' header".into() }),
        }
    }

    pub fn presentation(&self) -> Result<StringLinkPresentation> {
        match self {
            LinkSource::Tangle(t) => extract_presentation(t),
            LinkSource::Presentation(p) => Ok(p.clone()),
        }
    }
}

fn cross(p: usize, s: i8) -> TangleEvent {
    TangleEvent::cross(p, s)
}

/// Events of one generator acting on strand pairs starting at position `p`.
fn fragment(g: Generator, p: usize) -> Vec<TangleEvent> {
    use Generator::*;
    use TangleEvent::{Cap, Cup};
    let antipode = |s: i8| vec![cross(p, s), Cup { pos: p }, cross(p + 1, s), Cap { pos: p }];
    let clasp = || vec![cross(p + 1, 1), cross(p + 1, 1), Cap { pos: p }, Cap { pos: p }];
    match g {
        Eps => vec![Cap { pos: p }],
        Delta => vec![Cup { pos: p + 1 }],
        ThetaPlus | ThetaMinus => {
            let s = if g == ThetaPlus { 1 } else { -1 };
            vec![Cup { pos: p + 2 }, cross(p + 1, s), Cap { pos: p + 2 }, Cap { pos: p }]
        }
        S => antipode(1),
        Sinv => antipode(-1),
        OmegaMinus => clasp(),
        OmegaPlus => {
            let mut v = antipode(-1);
            v.extend(clasp());
            v
        }
        BraidPlus => vec![cross(p + 1, 1), cross(p, 1), cross(p + 2, 1), cross(p + 1, 1)],
        BraidMinus => vec![cross(p + 1, -1), cross(p + 2, -1), cross(p, -1), cross(p + 1, -1)],
    }
}

/// Handle of a Hopf diagram: every leg is a pair of strands.
pub fn phi(d: &HopfDiagram) -> TangleWord {
    let mut events = Vec::new();
    for s in d.term().slices() {
        events.extend(fragment(s.gen, 2 * s.left + 1));
    }
    TangleWord { bottom: 2 * d.n(), events }
}

/// String link of a Hopf diagram.
pub fn psi_geom(d: &HopfDiagram) -> Result<TangleWord> {
    to_string_link(&phi(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::{validate_tangle, Mode};

    #[test]
    fn generator_fragments_are_handles() {
        for g in Generator::ALL {
            let (a, o) = g.arity();
            let mut slices = vec![Slice::new(0, g, 0)];
            for k in (0..o).rev() {
                slices.push(Slice::new(k, Generator::Eps, 0));
            }
            let d = HopfDiagram::new(BraidedTerm::new(a, slices).unwrap()).unwrap();
            let h = phi(&d);
            assert_eq!(validate_tangle(&h, Mode::Handle).unwrap().n_components, a, "{g:?}");
            validate_tangle(&psi_geom(&d).unwrap(), Mode::StringLink).unwrap();
        }
    }

    #[test]
    fn link_sources_dispatch_on_header() {
        let b = LinkSource::parse("# a comment\nbraid n=2\ns 1 2 +\n").unwrap();
        let d = psi_full(&b.presentation().unwrap()).unwrap();
        assert_eq!(d, sigma_diagram(1, 2, 2, 1).unwrap());
        let t = LinkSource::parse("tangle w=1\ncup 2\nx 1 +\ncap 2\n").unwrap();
        assert_eq!(t.presentation().unwrap().n, 1);
        assert!(matches!(LinkSource::parse("hd n=1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn contraction_reduces_legs() {
        let d = conv_identity(5);
        assert_eq!(contract_c(&d, 3).unwrap().n(), 3);
        assert!(contract_c(&d, 5).is_err());
    }
}
