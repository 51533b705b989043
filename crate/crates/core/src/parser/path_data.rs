//! SVG 1.1 path data grammar.

use thiserror::Error;

use crate::model::{Opcode, RawCommand};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathDataError {
    #[error("path syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("path data ended at byte {offset} while arguments were expected")]
    UnexpectedEnd { offset: usize },
}

impl PathDataError {
    pub fn offset(&self) -> usize {
        match self {
            PathDataError::Syntax { offset, .. } | PathDataError::UnexpectedEnd { offset } => *offset,
        }
    }
}

/// Parses a `d` attribute into one [`RawCommand`] per argument group.
///
/// Implicit repetitions are expanded, so `"m 0 0 10 10"` yields a relative
/// moveto followed by a relative lineto. Empty or all-whitespace input is an
/// empty path.
pub fn parse_path_data(d: &str) -> Result<Vec<RawCommand>, PathDataError> {
    let mut lexer = Lexer {
        bytes: d.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    lexer.skip_ws();
    if lexer.at_end() {
        return Ok(out);
    }

    let mut current: Option<(Opcode, bool)> = None;
    loop {
        lexer.skip_ws();
        if lexer.at_end() {
            break;
        }
        let start = lexer.pos;
        let byte = lexer.bytes[start];
        let (opcode, relative) = match Opcode::from_letter(byte as char) {
            Some(cmd) => {
                lexer.pos += 1;
                if current.is_none() && cmd.0 != Opcode::MoveTo {
                    return Err(syntax(start, "path data must begin with a moveto"));
                }
                cmd
            }
            None if is_number_start(byte) => match current {
                Some((Opcode::ClosePath, _)) => {
                    return Err(syntax(start, "closepath takes no arguments"));
                }
                Some((Opcode::MoveTo, rel)) => (Opcode::LineTo, rel),
                Some(cmd) => cmd,
                None => return Err(syntax(start, "path data must begin with a moveto")),
            },
            None => return Err(syntax(start, "expected a command letter or number")),
        };

        let mut args = [0.0; 7];
        let arity = opcode.arity();
        for (i, slot) in args.iter_mut().enumerate().take(arity) {
            if i > 0 {
                lexer.skip_comma_wsp();
            } else {
                lexer.skip_ws();
            }
            if lexer.at_end() {
                return Err(PathDataError::UnexpectedEnd { offset: d.len() });
            }
            *slot = if opcode == Opcode::ArcTo && (i == 3 || i == 4) {
                lexer.flag()?
            } else {
                lexer.number()?
            };
        }
        out.push(
            RawCommand::new(opcode, relative, &args[..arity])
                .map_err(|e| syntax(start, &e.to_string()))?,
        );
        current = Some((opcode, relative));

        // A comma may separate repeated argument groups but never precedes a letter.
        if arity > 0 {
            lexer.skip_ws();
            if lexer.peek() == Some(b',') {
                let comma = lexer.pos;
                lexer.pos += 1;
                lexer.skip_ws();
                match lexer.peek() {
                    None => return Err(PathDataError::UnexpectedEnd { offset: d.len() }),
                    Some(b) if is_number_start(b) => {}
                    Some(_) => return Err(syntax(comma, "comma must be followed by an argument")),
                }
            }
        }
    }
    Ok(out)
}

/// Parses a comma/whitespace separated number list such as a `points` attribute.
pub(crate) fn parse_number_list(s: &str) -> Result<Vec<f64>, PathDataError> {
    let mut lexer = Lexer {
        bytes: s.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    lexer.skip_ws();
    while !lexer.at_end() {
        out.push(lexer.number()?);
        lexer.skip_comma_wsp();
    }
    Ok(out)
}

fn syntax(offset: usize, message: &str) -> PathDataError {
    PathDataError::Syntax {
        offset,
        message: message.to_owned(),
    }
}

fn is_number_start(b: u8) -> bool {
    b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.')
}

fn is_wsp(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | b'\x0c')
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(is_wsp) {
            self.pos += 1;
        }
    }

    fn skip_comma_wsp(&mut self) {
        self.skip_ws();
        if self.peek() == Some(b',') {
            self.pos += 1;
            self.skip_ws();
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn number(&mut self) -> Result<f64, PathDataError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let int_digits = self.digits();
        let mut frac_digits = 0;
        if self.peek() == Some(b'.') {
            self.pos += 1;
            frac_digits = self.digits();
        }
        if int_digits == 0 && frac_digits == 0 {
            if self.at_end() {
                return Err(PathDataError::UnexpectedEnd {
                    offset: self.bytes.len(),
                });
            }
            return Err(syntax(start, "expected a number"));
        }
        // The exponent is only consumed when digits follow it.
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                self.pos = save;
            }
        }
        // The slice is ASCII by construction.
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii number");
        let value: f64 = text
            .parse()
            .map_err(|_| syntax(start, "malformed number"))?;
        if !value.is_finite() {
            return Err(syntax(start, "number out of range"));
        }
        Ok(value)
    }

    fn flag(&mut self) -> Result<f64, PathDataError> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(0.0)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(1.0)
            }
            Some(_) => Err(syntax(self.pos, "arc flag must be 0 or 1")),
            None => Err(PathDataError::UnexpectedEnd {
                offset: self.bytes.len(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn letters(cmds: &[RawCommand]) -> String {
        cmds.iter().map(|c| c.letter()).collect()
    }

    #[test]
    fn two_command_path() {
        let cmds = parse_path_data("M0,0 L10,10").unwrap();
        assert_eq!(letters(&cmds), "ML");
        assert_eq!(cmds[1].args(), &[10.0, 10.0]);
    }

    #[test]
    fn implicit_moveto_repetition_becomes_relative_lineto() {
        let cmds = parse_path_data("m 0 0 10 10").unwrap();
        assert_eq!(letters(&cmds), "ml");
        assert_eq!(cmds[1].args(), &[10.0, 10.0]);
        let abs = parse_path_data("M1 2 3 4 5 6").unwrap();
        assert_eq!(letters(&abs), "MLL");
    }

    #[test]
    fn missing_arguments_at_end() {
        assert_eq!(
            parse_path_data("M0 0 A"),
            Err(PathDataError::UnexpectedEnd { offset: 6 })
        );
        assert!(matches!(
            parse_path_data("M0 0 L"),
            Err(PathDataError::UnexpectedEnd { .. })
        ));
        assert!(matches!(
            parse_path_data("M0 0 L 5"),
            Err(PathDataError::UnexpectedEnd { .. })
        ));
        assert!(matches!(
            parse_path_data("M0 0 L 5,"),
            Err(PathDataError::UnexpectedEnd { .. })
        ));
    }

    #[test]
    fn compact_arc_flags() {
        let cmds = parse_path_data("M0 0a1 1 0 011 1").unwrap();
        assert_eq!(letters(&cmds), "Ma");
        assert_eq!(cmds[1].args(), &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let cmds = parse_path_data("M0 0A25,25 -30 1,1 50,-25").unwrap();
        assert_eq!(cmds[1].args(), &[25.0, 25.0, -30.0, 1.0, 1.0, 50.0, -25.0]);
        assert!(matches!(
            parse_path_data("M0 0a1 1 0 2 1 1 1"),
            Err(PathDataError::Syntax { offset: 11, .. })
        ));
    }

    #[test]
    fn numbers_without_separators() {
        let cmds = parse_path_data("M.5.5L-1-2e1 3E-1+4").unwrap();
        assert_eq!(cmds[0].args(), &[0.5, 0.5]);
        assert_eq!(cmds[1].args(), &[-1.0, -20.0]);
        assert_eq!(cmds[2].args(), &[0.3, 4.0]);
    }

    #[test]
    fn all_twenty_opcodes() {
        let d = "M0 0m1 1L2 2l1 1H3h1V4v1C1 1 2 2 3 3c1 1 2 2 3 3S1 1 2 2s1 1 2 2Q1 1 2 2q1 1 2 2T5 5t1 1A1 1 0 0 1 9 9a1 1 0 1 0 1 1Zz";
        let cmds = parse_path_data(d).unwrap();
        assert_eq!(letters(&cmds), "MmLlHhVvCcSsQqTtAaZz");
    }

    #[test]
    fn grammar_violations_are_positioned() {
        assert!(matches!(
            parse_path_data("L0 0"),
            Err(PathDataError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse_path_data("M0 0 Z 5 5"),
            Err(PathDataError::Syntax { offset: 7, .. })
        ));
        assert!(matches!(
            parse_path_data("M0 0 X"),
            Err(PathDataError::Syntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse_path_data("M0 0 L1 1,L2 2"),
            Err(PathDataError::Syntax { offset: 9, .. })
        ));
        assert!(matches!(
            parse_path_data("M1e999 0"),
            Err(PathDataError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_path_data("M0 0 L1e 2"),
            Err(PathDataError::Syntax { .. })
        ));
    }

    #[test]
    fn empty_input_is_empty_path() {
        assert_eq!(parse_path_data("").unwrap(), Vec::new());
        assert_eq!(parse_path_data(" \n\t").unwrap(), Vec::new());
    }

    proptest! {
        #[test]
        fn never_panics_and_positions_errors(s in "\\PC{0,64}") {
            if let Err(e) = parse_path_data(&s) {
                prop_assert!(e.offset() <= s.len());
            }
        }

        #[test]
        fn never_panics_on_path_like_noise(s in "[MmLlHhVvCcSsQqTtAaZz0-9 ,.eE+-]{0,80}") {
            if let Err(e) = parse_path_data(&s) {
                prop_assert!(e.offset() <= s.len());
            }
        }
    }
}
