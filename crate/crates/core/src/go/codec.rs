//! Textual board codec.
//!
//! `o` is a white stone, `#` a black stone, `•` an empty point. Rows
//! print top-down from row N to row 1 with row labels on the left;
//! column letters run A..T across the top, skipping I, so the bottom-left
//! corner is A1. The most recent moves may carry per-color ordinals:
//! `o(1)` marks white's first placement, `#(3)` black's third. Cells are
//! separated by single spaces and lines end with LF.

use thiserror::Error;

use super::board::{Color, GoError, GoState, Point, Vertex};

/// Column letters for a 19-line board; `I` is skipped.
pub const COLUMN_LETTERS: &str = "ABCDEFGHJKLMNOPQRST";

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CodecError {
    #[error("bad cell symbol {token:?} in row {row}")]
    BadSymbol { token: String, row: u8 },
    #[error("row {row} holds {got} cells, expected {expected}")]
    RaggedGrid { row: u8, expected: usize, got: usize },
    #[error("coordinate frame mismatch: {0}")]
    CoordinateMismatch(String),
    #[error(transparent)]
    InvalidPosition(#[from] GoError),
}

/// A recovered move annotation: which stone carries which per-color index.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Annotation {
    pub point: Point,
    pub color: Color,
    pub index: u32,
}

/// Letter for a 1-based column.
pub fn column_letter(col: u8) -> char {
    COLUMN_LETTERS
        .chars()
        .nth(usize::from(col) - 1)
        .expect("column within board range")
}

/// `D4`-style vertex text; `pass` for passes.
pub fn vertex_to_str(v: Vertex) -> String {
    match v {
        Vertex::Pass => "pass".to_string(),
        Vertex::Point(p) => format!("{}{}", column_letter(p.col), p.row),
    }
}

/// Inverse of [`vertex_to_str`]; accepts either letter case.
pub fn vertex_from_str(text: &str) -> Result<Vertex, CodecError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("pass") {
        return Ok(Vertex::Pass);
    }
    let mut chars = t.chars();
    let letter = chars
        .next()
        .ok_or_else(|| CodecError::CoordinateMismatch("empty vertex".into()))?
        .to_ascii_uppercase();
    let col = COLUMN_LETTERS
        .find(letter)
        .ok_or_else(|| CodecError::CoordinateMismatch(format!("bad column in {text:?}")))?
        as u8
        + 1;
    let row: u8 = chars
        .as_str()
        .parse()
        .map_err(|_| CodecError::CoordinateMismatch(format!("bad row in {text:?}")))?;
    Ok(Vertex::Point(Point::new(col, row)))
}

/// Render a board with the last `annotate_last_k` moves annotated.
///
/// `annotate_last_k` is clamped to the history length; passes inside the
/// window consume a slot but render nothing.
pub fn serialize_board(state: &GoState, annotate_last_k: usize) -> String {
    let size = state.size();
    let width = if size >= 10 { 2 } else { 1 };
    let k = annotate_last_k.min(state.history().len());
    let cutoff_ply = (state.history().len() - k) as u32;

    let mut out = String::new();
    out.push_str(&" ".repeat(width));
    for col in 1..=size as u8 {
        out.push(' ');
        out.push(column_letter(col));
    }
    for row in (1..=size as u8).rev() {
        out.push('\n');
        out.push_str(&format!("{row:>width$}"));
        for col in 1..=size as u8 {
            out.push(' ');
            let p = Point::new(col, row);
            let idx = state.index_of(p);
            match state.stone_at(p) {
                None => out.push('•'),
                Some(color) => {
                    let symbol = if color == Color::White { 'o' } else { '#' };
                    out.push(symbol);
                    if let Some(pl) = state.placement_at(idx) {
                        if pl.ply > cutoff_ply {
                            out.push_str(&format!("({})", pl.per_color_index));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Recover the stone layout and annotations from codec text.
///
/// History beyond the annotations is unknown: the returned state has an
/// empty move list and black to move.
pub fn parse_board(text: &str) -> Result<(GoState, Vec<Annotation>), CodecError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CodecError::CoordinateMismatch("empty board text".into()))?;
    let letters: Vec<&str> = header.split_whitespace().collect();
    let size = letters.len();
    if !(super::board::MIN_SIZE..=super::board::MAX_SIZE).contains(&size) {
        return Err(CodecError::CoordinateMismatch(format!(
            "header names {size} columns"
        )));
    }
    for (i, token) in letters.iter().enumerate() {
        let expected = column_letter(i as u8 + 1).to_string();
        if *token != expected {
            return Err(CodecError::CoordinateMismatch(format!(
                "column {} labeled {token:?}, expected {expected:?}",
                i + 1
            )));
        }
    }

    let mut grid: Vec<Option<Color>> = vec![None; size * size];
    let mut annotations = Vec::new();
    for expected_row in (1..=size as u8).rev() {
        let line = lines.next().ok_or_else(|| {
            CodecError::CoordinateMismatch(format!("missing row {expected_row}"))
        })?;
        let mut tokens = line.split_whitespace();
        let label = tokens.next().unwrap_or_default();
        if label.parse::<u8>() != Ok(expected_row) {
            return Err(CodecError::CoordinateMismatch(format!(
                "row labeled {label:?}, expected {expected_row}"
            )));
        }
        let cells: Vec<&str> = tokens.collect();
        if cells.len() != size {
            return Err(CodecError::RaggedGrid {
                row: expected_row,
                expected: size,
                got: cells.len(),
            });
        }
        for (i, token) in cells.iter().enumerate() {
            let point = Point::new(i as u8 + 1, expected_row);
            let (color, index) = parse_cell(token, expected_row)?;
            if let Some(color) = color {
                grid[(usize::from(expected_row) - 1) * size + i] = Some(color);
                if let Some(index) = index {
                    annotations.push(Annotation { point, color, index });
                }
            }
        }
    }
    if let Some(extra) = lines.next() {
        return Err(CodecError::CoordinateMismatch(format!(
            "unexpected trailing line {extra:?}"
        )));
    }
    let state = GoState::from_grid(size, grid, Color::Black)?;
    Ok((state, annotations))
}

fn parse_cell(token: &str, row: u8) -> Result<(Option<Color>, Option<u32>), CodecError> {
    let bad = || CodecError::BadSymbol { token: token.to_string(), row };
    let mut chars = token.chars();
    let color = match chars.next() {
        Some('•') => None,
        Some('o') => Some(Color::White),
        Some('#') => Some(Color::Black),
        _ => return Err(bad()),
    };
    let rest = chars.as_str();
    if rest.is_empty() {
        return Ok((color, None));
    }
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    if color.is_none() {
        return Err(bad()); // an empty point cannot carry a move index
    }
    let index: u32 = inner.parse().map_err(|_| bad())?;
    Ok((color, Some(index)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::go::board::{GoMove, KoRule};
    use crate::seeding;
    use rand::Rng;

    #[test]
    fn empty_board_serializes_to_dots_with_frame() {
        let st = GoState::new(19);
        let text = serialize_board(&st, 0);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 20);
        assert_eq!(lines[0], "   A B C D E F G H J K L M N O P Q R S T");
        assert_eq!(lines[1], "19 • • • • • • • • • • • • • • • • • • •");
        assert_eq!(lines[19], " 1 • • • • • • • • • • • • • • • • • • •");
    }

    #[test]
    fn bottom_left_corner_is_a1() {
        let st = GoState::new(5)
            .apply_move(GoMove::place(Color::Black, 1, 1))
            .unwrap();
        let text = serialize_board(&st, 0);
        let last = text.lines().last().unwrap();
        assert_eq!(last, "1 # • • • •");
    }

    #[test]
    fn whites_first_move_annotated_o1() {
        let st = GoState::new(5)
            .apply_move(GoMove::place(Color::Black, 3, 3))
            .unwrap()
            .apply_move(GoMove::place(Color::White, 2, 2))
            .unwrap();
        let text = serialize_board(&st, 2);
        assert!(text.contains("o(1)"), "white's first move must read o(1):\n{text}");
        assert!(text.contains("#(1)"));
    }

    #[test]
    fn annotation_window_counts_plies_not_stones() {
        let st = GoState::new(5)
            .apply_move(GoMove::place(Color::Black, 1, 1))
            .unwrap()
            .apply_move(GoMove::place(Color::White, 5, 5))
            .unwrap()
            .apply_move(GoMove::place(Color::Black, 2, 2))
            .unwrap();
        // Window of one: only black's latest stone is annotated, and it is
        // black's second placement.
        let text = serialize_board(&st, 1);
        assert!(text.contains("#(2)"));
        assert!(!text.contains("o(1)"));
        assert!(!text.contains("#(1)"));
    }

    #[test]
    fn minimal_grid_with_one_black_stone_parses() {
        let text = "  A B C D E\n5 • • • • •\n4 • • • • •\n3 • • # • •\n2 • • • • •\n1 • • • • •";
        let (st, ann) = parse_board(text).unwrap();
        assert_eq!(st.stone_at(Point::new(3, 3)), Some(Color::Black));
        assert_eq!(st.stones_on_board(), 1);
        assert!(ann.is_empty());
    }

    #[test]
    fn unknown_symbol_is_rejected() {
        let text = "  A B C D E\n5 • • • • •\n4 • • • • •\n3 • • x • •\n2 • • • • •\n1 • • • • •";
        assert!(matches!(
            parse_board(text),
            Err(CodecError::BadSymbol { row: 3, .. })
        ));
    }

    #[test]
    fn short_row_is_ragged() {
        let text = "  A B C D E\n5 • • • • •\n4 • • • •\n3 • • • • •\n2 • • • • •\n1 • • • • •";
        assert_eq!(
            parse_board(text).unwrap_err(),
            CodecError::RaggedGrid { row: 4, expected: 5, got: 4 }
        );
    }

    #[test]
    fn wrong_row_label_is_coordinate_mismatch() {
        let text = "  A B C D E\n5 • • • • •\n9 • • • • •\n3 • • • • •\n2 • • • • •\n1 • • • • •";
        assert!(matches!(
            parse_board(text),
            Err(CodecError::CoordinateMismatch(_))
        ));
    }

    #[test]
    fn round_trip_on_seeded_random_states() {
        let mut done = 0;
        let mut seed = 0u64;
        while done < 1000 {
            let mut rng = seeding::rng(seed, "codec-roundtrip", 0);
            seed += 1;
            let size = [5usize, 9, 19][usize::try_from(seed % 3).unwrap()];
            let mut st = GoState::new(size).with_ko_rule(KoRule::PositionalSuperko);
            let plies = rng.gen_range(0..(size * size) as u32);
            for _ in 0..plies {
                let legal = st.legal_points();
                if legal.is_empty() {
                    break;
                }
                let p = legal[rng.gen_range(0..legal.len())];
                st = st
                    .apply_move(GoMove { color: st.to_move(), vertex: Vertex::Point(p) })
                    .unwrap();
            }
            let k = rng.gen_range(0..5);
            let text = serialize_board(&st, k);
            let (parsed, annotations) = parse_board(&text).expect("own output parses");
            assert_eq!(parsed.grid(), st.grid(), "stone layout survives the round trip");
            // Annotated indices match the placement bookkeeping.
            let window = k.min(st.history().len());
            let mut expected = 0;
            for idx in 0..st.grid().len() {
                if let Some(pl) = st.placement_at(idx) {
                    if pl.ply > (st.history().len() - window) as u32 {
                        expected += 1;
                    }
                }
            }
            assert_eq!(annotations.len(), expected);
            for a in &annotations {
                let pl = st.placement_at(st.index_of(a.point)).unwrap();
                assert_eq!(pl.per_color_index, a.index);
                assert_eq!(st.stone_at(a.point), Some(a.color));
            }
            done += 1;
        }
    }

    #[test]
    fn vertex_text_round_trips_and_skips_i() {
        assert_eq!(vertex_to_str(Vertex::Point(Point::new(1, 1))), "A1");
        assert_eq!(vertex_to_str(Vertex::Point(Point::new(9, 10))), "J10");
        assert_eq!(vertex_to_str(Vertex::Pass), "pass");
        assert_eq!(vertex_from_str("j10").unwrap(), Vertex::Point(Point::new(9, 10)));
        assert_eq!(vertex_from_str("PASS").unwrap(), Vertex::Pass);
        assert!(vertex_from_str("I3").is_err());
    }
}
