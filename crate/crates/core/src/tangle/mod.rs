//! Framed tangle diagrams as words of elementary events.
//!
//! Positions are 1-based. `Cross(p, +)` exchanges the strands at `p` and
//! `p+1` with the lower-left strand passing over; `Cross(p, −)` has it pass
//! under. `Cap(p)` joins strands `p`, `p+1`; `Cup(p)` creates two strands at
//! `p`, `p+1`. Framing is the blackboard framing.

mod braid;
mod extract;
mod handle;
mod linking;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use braid::{
    artin_action, braid_eq, braid_to_tangle, crossing_word_to_pure_braid, delete_strand, double_strand, markov_relations, Letter,
    PureBraidWord, RelationInstance,
};
pub use extract::{
    contract_presentation, extract_presentation, make_left_handed, presentation_to_tangle, remove_kinks,
    StringLinkPresentation,
};
pub use handle::{contract_tangle, convert_f_g, handle_identity, to_handle, to_string_link, Direction};
pub use linking::{b_minus, closure_linking, LinkingData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TangleEvent {
    Cross { pos: usize, sign: i8 },
    Cap { pos: usize },
    Cup { pos: usize },
}

impl TangleEvent {
    pub fn pos(&self) -> usize {
        match *self {
            TangleEvent::Cross { pos, .. } | TangleEvent::Cap { pos } | TangleEvent::Cup { pos } => pos,
        }
    }

    pub fn cross(pos: usize, sign: i8) -> Self {
        TangleEvent::Cross { pos, sign }
    }

    /// Same event moved by `d` positions.
    pub fn shifted(&self, d: usize) -> Self {
        match *self {
            TangleEvent::Cross { pos, sign } => TangleEvent::Cross { pos: pos + d, sign },
            TangleEvent::Cap { pos } => TangleEvent::Cap { pos: pos + d },
            TangleEvent::Cup { pos } => TangleEvent::Cup { pos: pos + d },
        }
    }

    fn apply_width(&self, w: usize) -> Result<usize> {
        match *self {
            TangleEvent::Cross { pos, sign } if pos >= 1 && pos < w && (sign == 1 || sign == -1) => Ok(w),
            TangleEvent::Cap { pos } if pos >= 1 && pos < w => Ok(w - 2),
            TangleEvent::Cup { pos } if pos >= 1 && pos <= w + 1 => Ok(w + 2),
            e => Err(Error::Width(format!("{e:?} does not fit width {w}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TangleWord {
    pub bottom: usize,
    pub events: Vec<TangleEvent>,
}

impl TangleWord {
    pub fn new(bottom: usize, events: Vec<TangleEvent>) -> Result<Self> {
        let w = TangleWord { bottom, events };
        w.widths()?;
        Ok(w)
    }

    pub fn identity(n: usize) -> Self {
        TangleWord { bottom: n, events: Vec::new() }
    }

    /// Widths below each event and at the top.
    pub fn widths(&self) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(self.events.len() + 1);
        let mut w = self.bottom;
        out.push(w);
        for (k, e) in self.events.iter().enumerate() {
            w = e.apply_width(w).map_err(|err| Error::Width(format!("event {}: {err}", k + 1)))?;
            out.push(w);
        }
        Ok(out)
    }

    pub fn top(&self) -> usize {
        *self.widths().expect("valid word").last().unwrap()
    }

    /// `self` below `other`.
    pub fn then(&self, other: &TangleWord) -> Result<TangleWord> {
        if self.top() != other.bottom {
            return Err(Error::Width(format!("stacking width {} onto {}", other.bottom, self.top())));
        }
        let mut events = self.events.clone();
        events.extend_from_slice(&other.events);
        Ok(TangleWord { bottom: self.bottom, events })
    }

    /// Side by side: `self` on the left.
    pub fn tensor(&self, other: &TangleWord) -> TangleWord {
        let mut events = self.events.clone();
        let t = self.top();
        events.extend(other.events.iter().map(|e| e.shifted(t)));
        TangleWord { bottom: self.bottom + other.bottom, events }
    }

    pub fn crossing_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, TangleEvent::Cross { .. })).count()
    }

    pub fn extremum_count(&self) -> usize {
        self.events.len() - self.crossing_count()
    }

    /// Cancels `Cup(c)` followed by `Cap(c±1)` (a zigzag) and `Cross(p,s)`
    /// followed by `Cross(p,−s)` until neither occurs.
    pub fn normalize(&self) -> TangleWord {
        let mut ev: Vec<TangleEvent> = Vec::with_capacity(self.events.len());
        for &e in &self.events {
            let cancel = match (ev.last(), e) {
                (Some(&TangleEvent::Cup { pos: c }), TangleEvent::Cap { pos: p }) => p + 1 == c || p == c + 1,
                (Some(&TangleEvent::Cross { pos: a, sign: s }), TangleEvent::Cross { pos: b, sign: t }) => a == b && s == -t,
                _ => false,
            };
            if cancel {
                ev.pop();
            } else {
                ev.push(e);
            }
        }
        TangleWord { bottom: self.bottom, events: ev }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("tangle w={}\n", self.bottom);
        for e in &self.events {
            match *e {
                TangleEvent::Cross { pos, sign } => s.push_str(&format!("x {pos} {}\n", if sign > 0 { '+' } else { '-' })),
                TangleEvent::Cap { pos } => s.push_str(&format!("cap {pos}\n")),
                TangleEvent::Cup { pos } => s.push_str(&format!("cup {pos}\n")),
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut bottom = None;
        let mut events = Vec::new();
        let mut width = 0;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: ln + 1, msg };
            let parts: Vec<&str> = line.split_whitespace().collect();
            if bottom.is_none() {
                let w = (parts.len() == 2 && parts[0] == "tangle")
                    .then(|| parts[1].strip_prefix("w="))
                    .flatten()
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| perr("expected header 'tangle w=<width>'".into()))?;
                bottom = Some(w);
                width = w;
                continue;
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| perr(format!("bad position '{s}'")));
            let e = match parts.as_slice() {
                ["x", p, s] => TangleEvent::Cross { pos: num(p)?, sign: parse_sign(s).ok_or_else(|| perr(format!("bad sign '{s}'")))? },
                ["cap", p] => TangleEvent::Cap { pos: num(p)? },
                ["cup", p] => TangleEvent::Cup { pos: num(p)? },
                _ => return Err(perr(format!("unrecognized event '{line}'"))),
            };
            width = e.apply_width(width).map_err(|err| perr(err.to_string()))?;
            events.push(e);
        }
        Ok(TangleWord { bottom: bottom.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?, events })
    }
}

pub(crate) fn parse_sign(s: &str) -> Option<i8> {
    match s {
        "+" | "+1" | "1" => Some(1),
        "-" | "-1" => Some(-1),
        _ => None,
    }
}

impl fmt::Display for TangleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    StringLink,
    Handle,
    ClosedLink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endpoint {
    Bottom(usize),
    Top(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BottomEnd {
    Bottom(usize),
    CrossOut(usize, usize),
    Cup(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TopEnd {
    Top(usize),
    CrossIn(usize, usize),
    Cap(usize, usize),
}

/// Strand pieces between events and how they connect.
#[derive(Clone, Debug)]
pub struct Pieces {
    pub bottom_pieces: Vec<usize>,
    pub top_pieces: Vec<usize>,
    /// Pieces consumed by each event, left to right.
    pub event_in: Vec<Vec<usize>>,
    /// Pieces created by each event, left to right.
    pub event_out: Vec<Vec<usize>>,
    bottom_end: Vec<BottomEnd>,
    top_end: Vec<TopEnd>,
}

impl Pieces {
    pub fn build(w: &TangleWord) -> Result<Pieces> {
        w.widths()?;
        let mut bottom_end = Vec::new();
        let mut top_end: Vec<Option<TopEnd>> = Vec::new();
        let mut frontier: Vec<usize> = (0..w.bottom).collect();
        for k in 0..w.bottom {
            bottom_end.push(BottomEnd::Bottom(k + 1));
            top_end.push(None);
        }
        let mut event_in = Vec::with_capacity(w.events.len());
        let mut event_out = Vec::with_capacity(w.events.len());
        let fresh = |be: BottomEnd, bottom_end: &mut Vec<BottomEnd>, top_end: &mut Vec<Option<TopEnd>>| {
            bottom_end.push(be);
            top_end.push(None);
            bottom_end.len() - 1
        };
        for (e, ev) in w.events.iter().enumerate() {
            let p = ev.pos() - 1;
            match *ev {
                TangleEvent::Cross { .. } => {
                    let (l, r) = (frontier[p], frontier[p + 1]);
                    top_end[l] = Some(TopEnd::CrossIn(e, 0));
                    top_end[r] = Some(TopEnd::CrossIn(e, 1));
                    let a = fresh(BottomEnd::CrossOut(e, 0), &mut bottom_end, &mut top_end);
                    let b = fresh(BottomEnd::CrossOut(e, 1), &mut bottom_end, &mut top_end);
                    frontier[p] = a;
                    frontier[p + 1] = b;
                    event_in.push(vec![l, r]);
                    event_out.push(vec![a, b]);
                }
                TangleEvent::Cap { .. } => {
                    let (l, r) = (frontier[p], frontier[p + 1]);
                    top_end[l] = Some(TopEnd::Cap(e, 0));
                    top_end[r] = Some(TopEnd::Cap(e, 1));
                    frontier.drain(p..p + 2);
                    event_in.push(vec![l, r]);
                    event_out.push(vec![]);
                }
                TangleEvent::Cup { .. } => {
                    let a = fresh(BottomEnd::Cup(e, 0), &mut bottom_end, &mut top_end);
                    let b = fresh(BottomEnd::Cup(e, 1), &mut bottom_end, &mut top_end);
                    frontier.splice(p..p, [a, b]);
                    event_in.push(vec![]);
                    event_out.push(vec![a, b]);
                }
            }
        }
        for (k, &pc) in frontier.iter().enumerate() {
            top_end[pc] = Some(TopEnd::Top(k + 1));
        }
        Ok(Pieces {
            bottom_pieces: (0..w.bottom).collect(),
            top_pieces: frontier,
            event_in,
            event_out,
            bottom_end,
            top_end: top_end.into_iter().map(|t| t.expect("every piece has a top end")).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.bottom_end.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bottom_end.is_empty()
    }

    /// Follows a strand from `start` in direction `up`, labelling pieces.
    /// Returns the endpoint reached, or `None` for a closed loop.
    fn walk(&self, start: usize, up: bool, comp: usize, dir: &mut [i8], label: &mut [usize]) -> Option<Endpoint> {
        let (mut cur, mut up) = (start, up);
        loop {
            dir[cur] = if up { 1 } else { -1 };
            label[cur] = comp;
            let next = if up {
                match self.top_end[cur] {
                    TopEnd::Top(k) => return Some(Endpoint::Top(k)),
                    TopEnd::CrossIn(e, s) => (self.event_out[e][1 - s], true),
                    TopEnd::Cap(e, s) => (self.event_in[e][1 - s], false),
                }
            } else {
                match self.bottom_end[cur] {
                    BottomEnd::Bottom(k) => return Some(Endpoint::Bottom(k)),
                    BottomEnd::CrossOut(e, s) => (self.event_in[e][1 - s], false),
                    BottomEnd::Cup(e, s) => (self.event_out[e][1 - s], true),
                }
            };
            if next.0 == start {
                return None;
            }
            cur = next.0;
            up = next.1;
        }
    }
}

/// Result of traversing a tangle word.
#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub mode: Mode,
    /// Arcs first (in label order), then closed components.
    pub n_components: usize,
    pub arcs: Vec<(Endpoint, Endpoint)>,
    pub closed: usize,
    /// +1 when the piece is traversed upward.
    pub piece_dir: Vec<i8>,
    pub piece_comp: Vec<usize>,
    pub pieces: Pieces,
}

impl ComponentReport {
    /// Oriented sign of crossing event `e`: geometric sign times the two directions.
    pub fn crossing_sign(&self, w: &TangleWord, e: usize) -> Option<(i8, usize, usize)> {
        match w.events[e] {
            TangleEvent::Cross { sign, .. } => {
                let ins = &self.pieces.event_in[e];
                let s = sign * self.piece_dir[ins[0]] * self.piece_dir[ins[1]];
                Some((s, self.piece_comp[ins[0]], self.piece_comp[ins[1]]))
            }
            _ => None,
        }
    }

    /// Writhe of each component (sum of self-crossing signs).
    pub fn writhes(&self, w: &TangleWord) -> Vec<i64> {
        let mut out = vec![0i64; self.n_components];
        for e in 0..w.events.len() {
            if let Some((s, a, b)) = self.crossing_sign(w, e) {
                if a == b {
                    out[a] += s as i64;
                }
            }
        }
        out
    }

    /// Whether the extremum at event `e` is traversed right-to-left.
    pub fn points_left(&self, e: usize) -> Option<bool> {
        let ins = &self.pieces.event_in[e];
        let outs = &self.pieces.event_out[e];
        if ins.len() == 2 && outs.is_empty() {
            // cap: the up-going piece is where the traversal arrives
            Some(self.piece_dir[ins[1]] == 1)
        } else if ins.is_empty() && outs.len() == 2 {
            // cup: traversal arrives on the down-going piece
            Some(self.piece_dir[outs[1]] == -1)
        } else {
            None
        }
    }
}

pub fn validate_tangle(w: &TangleWord, mode: Mode) -> Result<ComponentReport> {
    let pieces = Pieces::build(w)?;
    let np = pieces.len();
    let mut dir = vec![0i8; np];
    let mut label = vec![usize::MAX; np];
    let mut arcs = Vec::new();
    let top = pieces.top_pieces.len();
    match mode {
        Mode::StringLink => {
            if w.bottom != top {
                return Err(Error::Pairing(format!("bottom width {} but top width {}", w.bottom, top)));
            }
            for k in 0..w.bottom {
                let end = pieces.walk(pieces.bottom_pieces[k], true, k, &mut dir, &mut label);
                if end != Some(Endpoint::Top(k + 1)) {
                    return Err(Error::Pairing(format!("bottom endpoint {} reaches {:?}", k + 1, end)));
                }
                arcs.push((Endpoint::Bottom(k + 1), Endpoint::Top(k + 1)));
            }
        }
        Mode::Handle => {
            if top != 0 || w.bottom % 2 != 0 {
                return Err(Error::Pairing(format!("a handle needs an even bottom and no top, got {} / {}", w.bottom, top)));
            }
            for k in 0..w.bottom / 2 {
                let end = pieces.walk(pieces.bottom_pieces[2 * k + 1], true, k, &mut dir, &mut label);
                if end != Some(Endpoint::Bottom(2 * k + 1)) {
                    return Err(Error::Pairing(format!("arc from bottom {} reaches {:?}", 2 * k + 2, end)));
                }
                arcs.push((Endpoint::Bottom(2 * k + 2), Endpoint::Bottom(2 * k + 1)));
            }
        }
        Mode::ClosedLink => {
            for k in 0..w.bottom {
                let pc = pieces.bottom_pieces[k];
                if label[pc] == usize::MAX {
                    let c = arcs.len();
                    let end = pieces.walk(pc, true, c, &mut dir, &mut label).expect("arcs end");
                    arcs.push((Endpoint::Bottom(k + 1), end));
                }
            }
            for k in 0..top {
                let pc = pieces.top_pieces[k];
                if label[pc] == usize::MAX {
                    let c = arcs.len();
                    let end = pieces.walk(pc, false, c, &mut dir, &mut label).expect("arcs end");
                    arcs.push((Endpoint::Top(k + 1), end));
                }
            }
        }
    }
    let mut closed = 0;
    for pc in 0..np {
        if label[pc] == usize::MAX {
            if mode != Mode::ClosedLink {
                return Err(Error::ClosedComponent(format!("piece {pc} lies on a closed loop")));
            }
            let c = arcs.len() + closed;
            pieces.walk(pc, true, c, &mut dir, &mut label);
            closed += 1;
        }
    }
    Ok(ComponentReport {
        mode,
        n_components: arcs.len() + closed,
        arcs,
        closed,
        piece_dir: dir,
        piece_comp: label,
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use TangleEvent::*;

    #[test]
    fn parallel_strands_are_a_string_link() {
        let r = validate_tangle(&TangleWord::identity(3), Mode::StringLink).unwrap();
        assert_eq!(r.n_components, 3);
    }

    #[test]
    fn circle_is_closed_only() {
        let w = TangleWord::new(0, vec![Cup { pos: 1 }, Cap { pos: 1 }]).unwrap();
        assert_eq!(validate_tangle(&w, Mode::ClosedLink).unwrap().n_components, 1);
        assert!(validate_tangle(&w, Mode::StringLink).is_err());
    }

    #[test]
    fn nested_caps_are_a_handle_identity() {
        let w = TangleWord::new(4, vec![Cap { pos: 1 }, Cap { pos: 1 }]).unwrap();
        let r = validate_tangle(&w, Mode::Handle).unwrap();
        assert_eq!(r.n_components, 2);
        assert_eq!(r.points_left(0), Some(true));
    }

    #[test]
    fn width_violations() {
        assert!(TangleWord::new(1, vec![Cross { pos: 1, sign: 1 }]).is_err());
        assert!(TangleWord::new(2, vec![Cap { pos: 2 }]).is_err());
        assert!(TangleWord::parse("tangle w=2\nx 1 +\ncap 3\n").is_err());
    }

    #[test]
    fn text_roundtrip() {
        let w = TangleWord::new(1, vec![Cup { pos: 2 }, Cross { pos: 1, sign: -1 }, Cap { pos: 2 }]).unwrap();
        assert_eq!(TangleWord::parse(&w.to_text()).unwrap(), w);
    }

    #[test]
    fn zigzag_and_reidemeister_two_cancel() {
        let w = TangleWord::new(1, vec![Cup { pos: 2 }, Cap { pos: 1 }, Cross { pos: 1, sign: 1 }]);
        assert!(w.is_err());
        let w = TangleWord::new(2, vec![Cross { pos: 1, sign: 1 }, Cross { pos: 1, sign: -1 }, Cup { pos: 1 }, Cap { pos: 2 }]).unwrap();
        assert!(w.normalize().events.is_empty());
    }
}
