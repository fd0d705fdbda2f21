//! Tokenizer for inline expressions.

use num_bigint::BigInt;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    /// Zero-based character offset within the lexed text.
    pub pos: usize,
}

/// Splits `text` into tokens. Identifiers may carry trailing `~` marks.
pub fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            d if d.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    return Err(Error::Syntax {
                        line,
                        col: col0 + i + 1,
                        msg: "decimal literals are not supported; write a fraction".into(),
                    });
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Num(s.parse().expect("digits")), pos: start });
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                while i < chars.len() && chars[i] == '~' {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Ident(s), pos: start });
                continue;
            }
            other => {
                return Err(Error::Syntax { line, col: col0 + i + 1, msg: format!("unexpected character `{other}`") });
            }
        };
        out.push(Token { tok, pos: start });
        i += 1;
    }
    out.push(Token { tok: Tok::Eof, pos: chars.len() });
    Ok(out)
}
