//! Bending string links into handles and back, and strand contraction.

use serde::{Deserialize, Serialize};

use super::{validate_tangle, Mode, TangleEvent, TangleWord};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    ToHandle,
    ToStringLink,
}

/// Handle made of `n` nested-free caps on adjacent pairs.
pub fn handle_identity(n: usize) -> TangleWord {
    TangleWord { bottom: 2 * n, events: vec![TangleEvent::Cap { pos: 1 }; n] }
}

/// Moves every returning strand from its slot left of its partner to the far
/// left, passing behind everything: `[h1 b1 … hn bn] → [hn … h1 b1 … bn]`.
fn gather_left(n: usize) -> Vec<TangleEvent> {
    let mut ev = Vec::new();
    for k in 2..=n {
        for p in (1..=2 * k - 2).rev() {
            ev.push(TangleEvent::cross(p, 1));
        }
    }
    ev
}

fn inverse_events(ev: &[TangleEvent]) -> Vec<TangleEvent> {
    ev.iter()
        .rev()
        .map(|e| match *e {
            TangleEvent::Cross { pos, sign } => TangleEvent::cross(pos, -sign),
            _ => unreachable!("only crossings are inverted"),
        })
        .collect()
}

/// String link to handle: the top end of each strand bends left over the
/// tops of the strands before it and comes down behind the diagram to the
/// slot just left of its own bottom end.
pub fn to_handle(s: &TangleWord) -> Result<TangleWord> {
    validate_tangle(s, Mode::StringLink)?;
    let n = s.bottom;
    let mut ev = gather_left(n);
    ev.extend(s.events.iter().map(|e| e.shifted(n)));
    ev.extend((1..=n).rev().map(|p| TangleEvent::Cap { pos: p }));
    TangleWord::new(2 * n, ev)
}

/// Handle to string link, inverse to [`to_handle`] up to isotopy.
pub fn to_string_link(h: &TangleWord) -> Result<TangleWord> {
    validate_tangle(h, Mode::Handle)?;
    let n = h.bottom / 2;
    let mut ev: Vec<TangleEvent> = (1..=n).map(|p| TangleEvent::Cup { pos: p }).collect();
    ev.extend(inverse_events(&gather_left(n)).iter().map(|e| e.shifted(n)));
    ev.extend(h.events.iter().map(|e| e.shifted(n)));
    TangleWord::new(n, ev)
}

pub fn convert_f_g(t: &TangleWord, dir: Direction) -> Result<TangleWord> {
    match dir {
        Direction::ToHandle => to_handle(t),
        Direction::ToStringLink => to_string_link(t),
    }
}

/// Joins strands `i−1, i, i+1` of a string link into one, the middle one
/// reversed: a cup below strands `i−1, i` and a cap above `i, i+1`.
pub fn contract_tangle(t: &TangleWord, i: usize) -> Result<TangleWord> {
    let n = t.bottom;
    if i < 2 || i + 1 > n {
        return Err(Error::Index(format!("contraction index {i} needs 2 ≤ i ≤ {}", n.saturating_sub(1))));
    }
    let mut ev = vec![TangleEvent::Cup { pos: i - 1 }];
    ev.extend_from_slice(&t.events);
    ev.push(TangleEvent::Cap { pos: i });
    TangleWord::new(n - 2, ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::{braid_to_tangle, closure_linking, Letter, PureBraidWord};

    #[test]
    fn bending_gives_valid_shapes() {
        for n in 1..=4 {
            let s = TangleWord::identity(n);
            let h = to_handle(&s).unwrap();
            validate_tangle(&h, Mode::Handle).unwrap();
            let back = to_string_link(&h).unwrap();
            validate_tangle(&back, Mode::StringLink).unwrap();
            validate_tangle(&to_string_link(&handle_identity(n)).unwrap(), Mode::StringLink).unwrap();
        }
    }

    #[test]
    fn bending_keeps_linking() {
        let p = PureBraidWord::new(3, vec![Letter::sigma(1, 3, 1), Letter::twist(2, -1), Letter::sigma(2, 3, 1)]).unwrap();
        let s = braid_to_tangle(&p);
        let h = to_handle(&s).unwrap();
        assert_eq!(closure_linking(&s).unwrap(), closure_linking(&h).unwrap());
        let back = to_string_link(&h).unwrap();
        assert_eq!(closure_linking(&back).unwrap(), closure_linking(&s).unwrap());
    }

    #[test]
    fn contraction_merges_three_strands() {
        let t = contract_tangle(&TangleWord::identity(3), 2).unwrap();
        assert_eq!(validate_tangle(&t, Mode::StringLink).unwrap().n_components, 1);
        assert!(contract_tangle(&TangleWord::identity(3), 3).is_err());
    }
}
