use std::fmt;

use super::{ParseError, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    Nat(u32),
    Def,
    Axiom,
    Fun,
    Prop,
    Univ,
    LParen,
    RParen,
    Colon,
    ColonEq,
    Arrow,
    FatArrow,
    Dot,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(name) => write!(f, "identifier `{name}`"),
            Token::Nat(n) => write!(f, "number `{n}`"),
            Token::Def => f.write_str("`def`"),
            Token::Axiom => f.write_str("`axiom`"),
            Token::Fun => f.write_str("`fun`"),
            Token::Prop => f.write_str("`Prop`"),
            Token::Univ => f.write_str("`U`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Colon => f.write_str("`:`"),
            Token::ColonEq => f.write_str("`:=`"),
            Token::Arrow => f.write_str("`->`"),
            Token::FatArrow => f.write_str("`=>`"),
            Token::Dot => f.write_str("`.`"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn keyword(word: &str) -> Option<Token> {
    match word {
        "def" => Some(Token::Def),
        "axiom" => Some(Token::Axiom),
        "fun" => Some(Token::Fun),
        "Prop" => Some(Token::Prop),
        "U" => Some(Token::Univ),
        _ => None,
    }
}

pub fn tokenize(text: &str) -> Result<Vec<(Token, Span)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    let mut col = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let span = Span::new(line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        let token = match c {
            '(' => {
                bump!();
                Token::LParen
            }
            ')' => {
                bump!();
                Token::RParen
            }
            '.' => {
                bump!();
                Token::Dot
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    Token::ColonEq
                } else {
                    Token::Colon
                }
            }
            '=' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    Token::FatArrow
                } else {
                    return Err(ParseError::new(span, "expected `=>` after `=`"));
                }
            }
            '-' => {
                bump!();
                match chars.peek() {
                    Some('>') => {
                        bump!();
                        Token::Arrow
                    }
                    Some('-') => {
                        while let Some(&c) = chars.peek() {
                            if c == '\n' {
                                break;
                            }
                            bump!();
                        }
                        continue;
                    }
                    _ => return Err(ParseError::new(span, "expected `->` or a `--` comment after `-`")),
                }
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    digits.push(d);
                    bump!();
                }
                match digits.parse() {
                    Ok(n) => Token::Nat(n),
                    Err(_) => return Err(ParseError::new(span, format!("number `{digits}` is too large"))),
                }
            }
            c if is_ident_start(c) => {
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if !is_ident_continue(d) {
                        break;
                    }
                    word.push(d);
                    bump!();
                }
                keyword(&word).unwrap_or(Token::Ident(word))
            }
            other => {
                return Err(ParseError::new(span, format!("unexpected character `{other}`")));
            }
        };
        tokens.push((token, span));
    }
    tokens.push((Token::Eof, Span::new(line, col)));
    Ok(tokens)
}
