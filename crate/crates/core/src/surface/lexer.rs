use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: usize,
}

// Longest symbols first so greedy matching picks `<->` over `<`.
const SYMBOLS: &[&str] = &[
    "<->", "->", "<=", ">=", "!=", ":=", "<", ">", "[", "]", "(", ")", "{", "}", ",", ";", ".", "?", "*", "^", "~", "!",
    "|", "&", "=", "'", "+", "-", "/", "@",
];

pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(text[start..i].to_string()), pos: start });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            if i + 1 < bytes.len() && bytes[i] == b'.' && (bytes[i + 1] as char).is_ascii_digit() {
                i += 1;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
            }
            out.push(Token { tok: Tok::Num(text[start..i].to_string()), pos: start });
            continue;
        }
        for s in SYMBOLS {
            if text[i..].starts_with(s) {
                out.push(Token { tok: Tok::Sym(s), pos: i });
                i += s.len();
                continue 'outer;
            }
        }
        return Err(ParseError::at(i, format!("unexpected character {:?}", c)));
    }
    Ok(out)
}
