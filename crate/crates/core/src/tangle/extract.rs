//! Presentations of string links as contracted ribbon pure braids.
//!
//! A presentation `(P, j_1 … j_m, α)` stands for
//! `t_1^{α_1}⋯t_n^{α_n} · c_{j_m}(⋯ c_{j_1}(P))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::braid::parse_braid_lines;
use super::{
    braid_to_tangle, contract_tangle, crossing_word_to_pure_braid, validate_tangle, ComponentReport, Mode, PureBraidWord,
    TangleEvent, TangleWord,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringLinkPresentation {
    pub n: usize,
    pub braid: PureBraidWord,
    /// Applied first to last.
    pub contractions: Vec<usize>,
    pub twists: Vec<i64>,
}

impl StringLinkPresentation {
    pub fn new(braid: PureBraidWord, contractions: Vec<usize>, twists: Vec<i64>) -> Result<Self> {
        let mut w = braid.n;
        for (r, &j) in contractions.iter().enumerate() {
            if j < 2 || j + 1 > w {
                return Err(Error::Index(format!("contraction {} = {j} does not fit width {w}", r + 1)));
            }
            w -= 2;
        }
        if twists.len() != w {
            return Err(Error::Arity(format!("{} twist exponents for {w} strands", twists.len())));
        }
        Ok(StringLinkPresentation { n: w, braid, contractions, twists })
    }

    pub fn from_braid(braid: PureBraidWord) -> Self {
        let n = braid.n;
        StringLinkPresentation { n, braid, contractions: Vec::new(), twists: vec![0; n] }
    }

    pub fn to_text(&self) -> String {
        let mut s = self.braid.to_text();
        if !self.contractions.is_empty() {
            let js: Vec<String> = self.contractions.iter().map(|j| j.to_string()).collect();
            s.push_str(&format!("contract {}\n", js.join(" ")));
        }
        let ts: Vec<String> = self.twists.iter().map(|a| a.to_string()).collect();
        s.push_str(&format!("twists {}\n", ts.join(" ")));
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (braid, extra) = parse_braid_lines(text)?;
        let mut contractions = Vec::new();
        let mut twists = None;
        for (line, parts) in extra {
            let perr = |msg: String| Error::Parse { line, msg };
            match parts[0].as_str() {
                "contract" => {
                    for p in &parts[1..] {
                        contractions.push(p.parse::<usize>().map_err(|_| perr(format!("bad index '{p}'")))?);
                    }
                }
                "twists" => {
                    let v: std::result::Result<Vec<i64>, _> = parts[1..].iter().map(|p| p.parse::<i64>()).collect();
                    twists = Some(v.map_err(|_| perr("bad twist exponent".into()))?);
                }
                other => return Err(perr(format!("unrecognized line '{other}'"))),
            }
        }
        let width = braid.n - 2 * contractions.len().min(braid.n / 2);
        StringLinkPresentation::new(braid, contractions, twists.unwrap_or_else(|| vec![0; width]))
    }
}

impl fmt::Display for StringLinkPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn kink(k: usize, e: i8) -> [TangleEvent; 3] {
    [TangleEvent::Cup { pos: k + 1 }, TangleEvent::cross(k, e), TangleEvent::Cap { pos: k + 1 }]
}

/// The string link a presentation stands for.
pub fn presentation_to_tangle(p: &StringLinkPresentation) -> Result<TangleWord> {
    let mut w = braid_to_tangle(&p.braid);
    for &j in &p.contractions {
        w = contract_tangle(&w, j)?;
    }
    for (k, &a) in p.twists.iter().enumerate() {
        let e = if a > 0 { 1 } else { -1 };
        for _ in 0..a.unsigned_abs() {
            w.events.extend(kink(k + 1, e));
        }
    }
    Ok(w)
}

/// Presentation of `c_j` applied to the string link of `p`.
pub fn contract_presentation(p: &StringLinkPresentation, j: usize) -> Result<StringLinkPresentation> {
    if j < 2 || j + 1 > p.n {
        return Err(Error::Index(format!("contraction index {j} needs 2 ≤ j ≤ {}", p.n.saturating_sub(1))));
    }
    let mut twists = p.twists[..j - 2].to_vec();
    twists.push(p.twists[j - 2] + p.twists[j - 1] + p.twists[j]);
    twists.extend_from_slice(&p.twists[j + 1..]);
    let mut contractions = p.contractions.clone();
    contractions.push(j);
    StringLinkPresentation::new(p.braid.clone(), contractions, twists)
}

fn oriented_sign(rep: &ComponentReport, w: &TangleWord, e: usize) -> (i64, usize) {
    let (s, a, _) = rep.crossing_sign(w, e).expect("crossing");
    (s as i64, a)
}

/// Start and length of the events to delete for the first curl, and the
/// index of its crossing.
fn find_kink(ev: &[TangleEvent]) -> Option<(usize, usize, usize)> {
    use TangleEvent::*;
    for k in 0..ev.len() {
        match (ev[k], ev.get(k + 1)) {
            (Cup { pos: c }, Some(&Cross { pos: p, .. })) if p == c => return Some((k + 1, 1, k + 1)),
            (Cross { pos: p, .. }, Some(&Cap { pos: c })) if p == c => return Some((k, 1, k)),
            _ => {}
        }
        if let (Cup { pos: c }, Some(&Cross { pos: p, .. }), Some(&Cap { pos: q })) = (ev[k], ev.get(k + 1), ev.get(k + 2)) {
            if (p + 1 == c && q == c) || (p == c + 1 && q == c) {
                return Some((k, 3, k + 1));
            }
        }
    }
    None
}

/// Removes curls, returning the simplified word and the framing each
/// component lost.
pub fn remove_kinks(w: &TangleWord) -> Result<(TangleWord, Vec<i64>)> {
    let mut cur = w.normalize();
    let n = validate_tangle(&cur, Mode::StringLink)?.n_components;
    let mut alpha = vec![0i64; n];
    while let Some((start, len, cross)) = find_kink(&cur.events) {
        let rep = validate_tangle(&cur, Mode::StringLink)?;
        let (s, comp) = oriented_sign(&rep, &cur, cross);
        alpha[comp] += s;
        cur.events.drain(start..start + len);
        cur = cur.normalize();
    }
    Ok((cur, alpha))
}

/// Turns every extremum traversed left-to-right around with a curl,
/// returning the new word and the twist exponents that compensate.
pub fn make_left_handed(w: &TangleWord) -> Result<(TangleWord, Vec<i64>)> {
    let rep = validate_tangle(w, Mode::StringLink)?;
    let mut alpha = vec![0i64; rep.n_components];
    let mut ev = Vec::with_capacity(w.events.len());
    for (e, &x) in w.events.iter().enumerate() {
        match (x, rep.points_left(e)) {
            (TangleEvent::Cap { pos }, Some(false)) => {
                alpha[rep.piece_comp[rep.pieces.event_in[e][0]]] += 1;
                ev.push(TangleEvent::cross(pos, 1));
                ev.push(x);
            }
            (TangleEvent::Cup { pos }, Some(false)) => {
                alpha[rep.piece_comp[rep.pieces.event_out[e][0]]] += 1;
                ev.push(x);
                ev.push(TangleEvent::cross(pos, 1));
            }
            _ => ev.push(x),
        }
    }
    Ok((TangleWord::new(w.bottom, ev)?, alpha))
}

/// Finger of two strands riding over the diagram; `gap` counts the other
/// strands to its left.
fn finger_right(gap: usize) -> [TangleEvent; 2] {
    [TangleEvent::cross(gap + 2, 1), TangleEvent::cross(gap + 1, 1)]
}

fn finger_left(gap: usize) -> [TangleEvent; 2] {
    [TangleEvent::cross(gap, -1), TangleEvent::cross(gap + 1, -1)]
}

/// Forward events moving the finger from `from` to `to`.
fn finger_walk(mut from: usize, to: usize) -> Vec<TangleEvent> {
    let mut out = Vec::new();
    while from < to {
        out.extend(finger_right(from));
        from += 1;
    }
    while from > to {
        out.extend(finger_left(from));
        from -= 1;
    }
    out
}

fn at(e: TangleEvent, left: bool) -> TangleEvent {
    if left {
        e
    } else {
        e.shifted(2)
    }
}

/// Removes the cap at `h` and drags its two strands up over everything,
/// ending with `target` other strands to their left at the top.
fn pull_cap_up(ev: &[TangleEvent], h: usize, target: usize, tags: &[Option<usize>]) -> (Vec<TangleEvent>, Vec<Option<usize>>) {
    let mut out: Vec<TangleEvent> = ev[..h].to_vec();
    let mut otags: Vec<Option<usize>> = tags[..h].to_vec();
    let mut gap = ev[h].pos() - 1;
    let push = |out: &mut Vec<TangleEvent>, otags: &mut Vec<Option<usize>>, e: TangleEvent, t: Option<usize>| {
        out.push(e);
        otags.push(t);
    };
    for k in h + 1..ev.len() {
        let e = ev[k];
        match e {
            TangleEvent::Cross { pos, .. } | TangleEvent::Cap { pos } => {
                if pos == gap {
                    for x in finger_right(gap) {
                        push(&mut out, &mut otags, x, None);
                    }
                    gap += 1;
                }
                let left = pos < gap;
                push(&mut out, &mut otags, at(e, left), tags[k]);
                if matches!(e, TangleEvent::Cap { .. }) && left {
                    gap -= 2;
                }
            }
            TangleEvent::Cup { pos } => {
                let left = pos - 1 < gap;
                push(&mut out, &mut otags, at(e, left), tags[k]);
                if left {
                    gap += 2;
                }
            }
        }
    }
    for x in finger_walk(gap, target) {
        push(&mut out, &mut otags, x, None);
    }
    (out, otags)
}

/// Removes the cup at `h` and drags its two strands down over everything,
/// ending with `target` other strands to their left at the bottom.
fn pull_cup_down(ev: &[TangleEvent], h: usize, target: usize, tags: &[Option<usize>]) -> (Vec<TangleEvent>, Vec<Option<usize>>) {
    // built top-down, reversed at the end
    let mut rev: Vec<(TangleEvent, Option<usize>)> = Vec::new();
    let mut gap = ev[h].pos() - 1;
    for k in (0..h).rev() {
        let e = ev[k];
        match e {
            TangleEvent::Cross { pos, .. } | TangleEvent::Cup { pos } => {
                if pos == gap {
                    let mv = finger_left(gap + 1);
                    rev.extend(mv.iter().rev().map(|&x| (x, None)));
                    gap += 1;
                }
                let left = pos < gap;
                rev.push((at(e, left), tags[k]));
                if matches!(e, TangleEvent::Cup { .. }) && left {
                    gap -= 2;
                }
            }
            TangleEvent::Cap { pos } => {
                let left = pos - 1 < gap;
                rev.push((at(e, left), tags[k]));
                if left {
                    gap += 2;
                }
            }
        }
    }
    let walk = finger_walk(target, gap);
    rev.extend(walk.iter().rev().map(|&x| (x, None)));
    rev.reverse();
    let (mut out, mut otags): (Vec<_>, Vec<_>) = rev.into_iter().unzip();
    out.extend_from_slice(&ev[h + 1..]);
    otags.extend_from_slice(&tags[h + 1..]);
    (out, otags)
}

/// Events met walking component `comp` from its bottom end: the first cap,
/// then the first cup after it.
fn first_max_then_min(rep: &ComponentReport, comp: usize) -> Option<(usize, usize)> {
    let p = &rep.pieces;
    let mut cur = p.bottom_pieces[comp];
    let mut up = true;
    let mut max = None;
    loop {
        let next = if up {
            match p.top_end[cur] {
                super::TopEnd::Top(_) => return None,
                super::TopEnd::CrossIn(e, s) => (p.event_out[e][1 - s], true),
                super::TopEnd::Cap(e, s) => {
                    max.get_or_insert(e);
                    (p.event_in[e][1 - s], false)
                }
            }
        } else {
            match p.bottom_end[cur] {
                super::BottomEnd::Bottom(_) => return None,
                super::BottomEnd::CrossOut(e, s) => (p.event_in[e][1 - s], false),
                super::BottomEnd::Cup(e, _) => return max.map(|m| (m, e)),
            }
        };
        cur = next.0;
        up = next.1;
    }
}

/// Presentation of a framed string link: curls are traded for twist
/// exponents, extrema are made to point left, and then pairs of extrema are
/// pulled to the top and bottom until a pure braid remains.
pub fn extract_presentation(w: &TangleWord) -> Result<StringLinkPresentation> {
    let n = validate_tangle(w, Mode::StringLink)?.n_components;
    let (w1, mut alpha) = remove_kinks(w)?;
    let (w2, a2) = make_left_handed(&w1)?;
    for (a, b) in alpha.iter_mut().zip(a2) {
        *a += b;
    }
    let mut cur = w2;
    let mut recorded = Vec::new();
    loop {
        let rep = validate_tangle(&cur, Mode::StringLink)?;
        let mut with_extrema: Option<usize> = None;
        for (e, x) in cur.events.iter().enumerate() {
            let piece = match x {
                TangleEvent::Cap { .. } => rep.pieces.event_in[e][0],
                TangleEvent::Cup { .. } => rep.pieces.event_out[e][0],
                TangleEvent::Cross { .. } => continue,
            };
            let c = rep.piece_comp[piece];
            with_extrema = Some(with_extrema.map_or(c, |m| m.max(c)));
        }
        let Some(i) = with_extrema else { break };
        let (m, m2) = first_max_then_min(&rep, i).ok_or_else(|| Error::Other("component has no maximum".into()))?;
        // i is 0-based: i strands stay left of the pulled cap, i−1 of the pulled cup
        let tags: Vec<Option<usize>> = (0..cur.events.len()).map(Some).collect();
        let (ev, tags) = pull_cap_up(&cur.events, m, i + 1, &tags);
        let h = tags.iter().position(|t| *t == Some(m2)).expect("cup survives the first pull");
        let (ev, _) = pull_cup_down(&ev, h, i, &tags);
        cur = TangleWord::new(cur.bottom + 2, ev)?;
        recorded.push(i + 2);
    }
    recorded.reverse();
    let crossings: Vec<(usize, i8)> = cur
        .events
        .iter()
        .map(|e| match *e {
            TangleEvent::Cross { pos, sign } => (pos, sign),
            _ => unreachable!("extrema were all pulled out"),
        })
        .collect();
    let braid = crossing_word_to_pure_braid(cur.bottom, &crossings)?;
    let p = StringLinkPresentation::new(braid, recorded, alpha)?;
    debug_assert_eq!(p.n, n);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::{closure_linking, Letter};

    #[test]
    fn kinks_become_twists() {
        let p = PureBraidWord::new(2, vec![Letter::twist(1, 1), Letter::twist(2, -1), Letter::twist(2, -1)]).unwrap();
        let (w, a) = remove_kinks(&braid_to_tangle(&p)).unwrap();
        assert!(w.events.is_empty());
        assert_eq!(a, vec![1, -2]);
    }

    #[test]
    fn pure_braids_extract_to_themselves() {
        let p = PureBraidWord::new(3, vec![Letter::sigma(1, 3, 1), Letter::sigma(1, 2, -1), Letter::twist(3, 1)]).unwrap();
        let q = extract_presentation(&braid_to_tangle(&p)).unwrap();
        assert!(q.contractions.is_empty());
        assert_eq!(q.twists, vec![0, 0, 1]);
        assert!(crate::tangle::braid_eq(&PureBraidWord::new(3, p.letters[..2].to_vec()).unwrap(), &q.braid));
    }

    #[test]
    fn contracted_braid_roundtrip_keeps_linking() {
        let p = PureBraidWord::new(5, vec![Letter::sigma(1, 4, 1), Letter::sigma(2, 5, -1), Letter::sigma(3, 4, 1)]).unwrap();
        let pres = StringLinkPresentation::new(p, vec![3], vec![1, 0, -1]).unwrap();
        let t = presentation_to_tangle(&pres).unwrap();
        let q = extract_presentation(&t).unwrap();
        let t2 = presentation_to_tangle(&q).unwrap();
        assert_eq!(closure_linking(&t).unwrap(), closure_linking(&t2).unwrap());
    }

    #[test]
    fn text_roundtrip() {
        let p = PureBraidWord::new(3, vec![Letter::sigma(1, 3, 1)]).unwrap();
        let pres = StringLinkPresentation::new(p, vec![2], vec![-1]).unwrap();
        assert_eq!(StringLinkPresentation::parse(&pres.to_text()).unwrap(), pres);
    }
}

