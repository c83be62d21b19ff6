//! SGF ingestion: FF[4] main line with B/W/C/SZ/KM properties.
//!
//! Variation subtrees beyond the first are skipped; every move is
//! replayed through the engine, pairing each position with the move made
//! from it and the comment attached to that node.

use thiserror::Error;

use super::board::{Color, GoError, GoMove, GoState, Point, Vertex, MAX_SIZE, MIN_SIZE};

#[derive(Debug, Error, PartialEq, Clone)]
pub enum SgfError {
    #[error("SGF parse error at byte {offset}: {message}")]
    ParseError { offset: usize, message: String },
    #[error("illegal move #{move_number} in record: {source}")]
    IllegalMoveInRecord { move_number: usize, source: GoError },
}

/// One main-line step: the position before the move, the move, and the
/// comment attached to the move's node (which describes the position the
/// move creates).
#[derive(Clone, Debug)]
pub struct SgfEntry {
    pub state_before: GoState,
    pub mv: GoMove,
    pub comment: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SgfGame {
    pub size: usize,
    pub komi: Option<f64>,
    pub root_comment: Option<String>,
    pub entries: Vec<SgfEntry>,
}

impl SgfGame {
    /// The position each entry's comment talks about.
    pub fn annotated_state(&self, entry: &SgfEntry) -> Result<GoState, GoError> {
        entry.state_before.apply_move(entry.mv)
    }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

type Node = Vec<(String, Vec<String>)>;

impl<'a> Scanner<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, SgfError> {
        Err(SgfError::ParseError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), SgfError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {:?}", b as char))
        }
    }

    /// One property value: `[` ... `]` with backslash escapes.
    fn value(&mut self) -> Result<String, SgfError> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => return self.err("unterminated property value"),
                Some(b'\\') => {
                    self.pos += 1;
                    if let Some(c) = self.peek() {
                        out.push(c);
                        self.pos += 1;
                    }
                }
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
        String::from_utf8(out).or_else(|_| self.err("property value is not UTF-8"))
    }

    /// One node: `;` then properties `IDENT [value]+`.
    fn node(&mut self) -> Result<Node, SgfError> {
        self.expect(b';')?;
        let mut props = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_uppercase() => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                        self.pos += 1;
                    }
                    let ident = String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned();
                    let mut values = Vec::new();
                    self.skip_ws();
                    while self.peek() == Some(b'[') {
                        values.push(self.value()?);
                        self.skip_ws();
                    }
                    if values.is_empty() {
                        return self.err(format!("property {ident} lacks a value"));
                    }
                    props.push((ident, values));
                }
                _ => break,
            }
        }
        Ok(props)
    }

    /// Skip a full subtree `( ... )`, honoring bracket escapes.
    fn skip_subtree(&mut self) -> Result<(), SgfError> {
        self.expect(b'(')?;
        let mut depth = 1;
        while depth > 0 {
            match self.peek() {
                None => return self.err("unterminated variation"),
                Some(b'[') => {
                    self.value()?;
                }
                Some(b'(') => {
                    depth += 1;
                    self.pos += 1;
                }
                Some(b')') => {
                    depth -= 1;
                    self.pos += 1;
                }
                _ => self.pos += 1,
            }
        }
        Ok(())
    }

    /// Main-line nodes: the leftmost path through the game tree. At every
    /// branch point the first subtree continues the line and the sibling
    /// subtrees are skipped.
    fn main_line(&mut self) -> Result<Vec<Node>, SgfError> {
        self.skip_ws();
        self.expect(b'(')?;
        let mut nodes = Vec::new();
        let mut depth = 1u32;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b';') => nodes.push(self.node()?),
                Some(b'(') => {
                    self.pos += 1;
                    depth += 1;
                }
                Some(b')') => {
                    self.pos += 1;
                    depth -= 1;
                    loop {
                        self.skip_ws();
                        match self.peek() {
                            Some(b'(') => self.skip_subtree()?,
                            _ => break,
                        }
                    }
                    if depth == 0 {
                        break;
                    }
                }
                None => return self.err("unterminated game tree"),
                Some(c) => return self.err(format!("unexpected byte {:?}", c as char)),
            }
        }
        Ok(nodes)
    }
}

fn parse_sgf_point(value: &str, size: usize, offset: usize) -> Result<Vertex, SgfError> {
    if value.is_empty() || (value == "tt" && size <= 19) {
        return Ok(Vertex::Pass);
    }
    let chars: Vec<char> = value.chars().collect();
    if chars.len() != 2 || !chars[0].is_ascii_lowercase() || !chars[1].is_ascii_lowercase() {
        return Err(SgfError::ParseError {
            offset,
            message: format!("bad coordinate {value:?}"),
        });
    }
    let x = chars[0] as usize - 'a' as usize;
    let y = chars[1] as usize - 'a' as usize;
    if x >= size || y >= size {
        return Err(SgfError::ParseError {
            offset,
            message: format!("coordinate {value:?} outside a {size}x{size} board"),
        });
    }
    // SGF rows run top-down; board rows run bottom-up.
    Ok(Vertex::Point(Point::new(x as u8 + 1, (size - y) as u8)))
}

/// Parse an SGF record and replay its main line.
pub fn load_sgf(bytes: &[u8]) -> Result<SgfGame, SgfError> {
    let mut scanner = Scanner { bytes, pos: 0 };
    let nodes = scanner.main_line()?;
    if nodes.is_empty() {
        return Err(SgfError::ParseError { offset: 0, message: "no nodes in record".into() });
    }

    let mut size = 19usize;
    let mut komi = None;
    let mut root_comment = None;
    for (ident, values) in &nodes[0] {
        match ident.as_str() {
            "SZ" => {
                size = values[0].parse().map_err(|_| SgfError::ParseError {
                    offset: 0,
                    message: format!("bad SZ {:?}", values[0]),
                })?;
                if !(MIN_SIZE..=MAX_SIZE).contains(&size) {
                    return Err(SgfError::ParseError {
                        offset: 0,
                        message: format!("unsupported board size {size}"),
                    });
                }
            }
            "KM" => {
                komi = Some(values[0].parse().map_err(|_| SgfError::ParseError {
                    offset: 0,
                    message: format!("bad KM {:?}", values[0]),
                })?);
            }
            "C" => root_comment = Some(values[0].clone()),
            _ => {}
        }
    }

    let mut entries = Vec::new();
    let mut state = GoState::new(size);
    let mut move_number = 0usize;
    for node in nodes.iter().skip(1) {
        let mut mv = None;
        let mut comment = None;
        for (ident, values) in node {
            match ident.as_str() {
                "B" | "W" => {
                    if mv.is_some() {
                        return Err(SgfError::ParseError {
                            offset: 0,
                            message: "node carries two moves".into(),
                        });
                    }
                    let color = if ident == "B" { Color::Black } else { Color::White };
                    let vertex = parse_sgf_point(&values[0], size, 0)?;
                    mv = Some(GoMove { color, vertex });
                }
                "C" => comment = Some(values[0].clone()),
                _ => {}
            }
        }
        if let Some(mv) = mv {
            move_number += 1;
            let next = state.apply_move(mv).map_err(|source| SgfError::IllegalMoveInRecord {
                move_number,
                source,
            })?;
            entries.push(SgfEntry { state_before: state, mv, comment });
            state = next;
        }
        // Move-less nodes (setup or annotation-only) are skipped.
    }

    Ok(SgfGame { size, komi, root_comment, entries })
}
