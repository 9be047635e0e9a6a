use crate::error::{Error, Position, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Open,
    Close,
    Equals,
    /// Text between `<` and `>`.
    Iri(String),
    Literal(String),
    Word(String),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Iri(s) => format!("`<{s}>`"),
            Tok::Literal(_) => "a string literal".into(),
            Tok::Word(w) => format!("`{w}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Position,
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '<' | '>' | '=' | '#' | '"')
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    let advance = |c: char, line: &mut usize, column: &mut usize| {
        if c == '\n' {
            *line += 1;
            *column = 1;
        } else {
            *column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut line, &mut column);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                advance(c, &mut line, &mut column);
            }
            continue;
        }
        let tok = match c {
            '(' | ')' | '=' => {
                chars.next();
                advance(c, &mut line, &mut column);
                match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    _ => Tok::Equals,
                }
            }
            '<' => {
                chars.next();
                advance(c, &mut line, &mut column);
                let mut iri = String::new();
                loop {
                    match chars.next() {
                        Some('>') => {
                            advance('>', &mut line, &mut column);
                            break;
                        }
                        Some(c) if !c.is_whitespace() && c != '<' => {
                            advance(c, &mut line, &mut column);
                            iri.push(c);
                        }
                        _ => {
                            return Err(Error::Parse {
                                position: pos,
                                message: "unterminated IRI".into(),
                            })
                        }
                    }
                }
                Tok::Iri(iri)
            }
            '"' => {
                chars.next();
                advance(c, &mut line, &mut column);
                let mut lit = String::new();
                loop {
                    match chars.next() {
                        Some('"') => {
                            advance('"', &mut line, &mut column);
                            break;
                        }
                        Some('\\') => {
                            advance('\\', &mut line, &mut column);
                            if let Some(e) = chars.next() {
                                advance(e, &mut line, &mut column);
                                lit.push(e);
                            }
                        }
                        Some(c) => {
                            advance(c, &mut line, &mut column);
                            lit.push(c);
                        }
                        None => {
                            return Err(Error::Parse {
                                position: pos,
                                message: "unterminated string literal".into(),
                            })
                        }
                    }
                }
                Tok::Literal(lit)
            }
            '>' => {
                return Err(Error::Parse {
                    position: pos,
                    message: "unexpected `>`".into(),
                })
            }
            _ => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    chars.next();
                    advance(c, &mut line, &mut column);
                    word.push(c);
                }
                Tok::Word(word)
            }
        };
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Position { line, column },
    });
    Ok(out)
}
