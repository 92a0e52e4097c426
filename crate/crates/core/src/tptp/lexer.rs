use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    LowerWord(String),
    UpperWord(String),
    /// `_`-prefixed word; only valid as a formula name.
    UnderscoreWord(String),
    DollarWord(String),
    SingleQuoted(String),
    DoubleQuoted(String),
    Number(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Pipe,
    Tilde,
    Equals,
    NotEquals,
    Colon,
    /// Any other connective (`&`, `=>`, `<=>`, `!`, `?`, …); never valid in CNF.
    Other(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LowerWord(s)
            | Tok::UpperWord(s)
            | Tok::UnderscoreWord(s)
            | Tok::DollarWord(s)
            | Tok::Number(s)
            | Tok::Other(s) => format!("`{s}`"),
            Tok::SingleQuoted(s) => format!("'{s}'"),
            Tok::DoubleQuoted(s) => format!("\"{s}\""),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Equals => "`=`".into(),
            Tok::NotEquals => "`!=`".into(),
            Tok::Colon => "`:`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let err = |msg: String| ParseError::Syntax {
            file: None,
            line: start_line,
            column: start_col,
            message: msg,
        };
        if c.is_whitespace() {
            advance!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            advance!();
            advance!();
            loop {
                if i >= chars.len() {
                    return Err(err("unterminated block comment".into()));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    advance!();
                    advance!();
                    break;
                }
                advance!();
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            let mut word = String::new();
            word.push(c);
            advance!();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                word.push(chars[i]);
                advance!();
            }
            if c == '$' {
                if word.len() == 1 {
                    return Err(err("lone `$`".into()));
                }
                Tok::DollarWord(word)
            } else if c == '_' {
                Tok::UnderscoreWord(word)
            } else if c.is_ascii_uppercase() {
                Tok::UpperWord(word)
            } else {
                Tok::LowerWord(word)
            }
        } else if c.is_ascii_digit() {
            let mut num = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                num.push(chars[i]);
                advance!();
            }
            Tok::Number(num)
        } else if c == '\'' || c == '"' {
            let quote = c;
            let mut content = String::new();
            advance!();
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(err("unterminated quoted string".into())),
                    Some('\\') => {
                        advance!();
                        match chars.get(i) {
                            Some(&e) if e == '\\' || e == quote => {
                                content.push(e);
                                advance!();
                            }
                            _ => return Err(err("invalid escape in quoted string".into())),
                        }
                    }
                    Some(&q) if q == quote => {
                        advance!();
                        break;
                    }
                    Some(&other) => {
                        content.push(other);
                        advance!();
                    }
                }
            }
            if quote == '\'' {
                if content.is_empty() {
                    return Err(err("empty single-quoted atom".into()));
                }
                Tok::SingleQuoted(content)
            } else {
                Tok::DoubleQuoted(content)
            }
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, width) = match (c, next) {
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                ('|', _) => (Tok::Pipe, 1),
                ('~', Some('|')) => (Tok::Other("~|".into()), 2),
                ('~', Some('&')) => (Tok::Other("~&".into()), 2),
                ('~', _) => (Tok::Tilde, 1),
                ('!', Some('=')) => (Tok::NotEquals, 2),
                ('=', Some('>')) => (Tok::Other("=>".into()), 2),
                ('=', _) => (Tok::Equals, 1),
                (':', _) => (Tok::Colon, 1),
                ('<', Some('=')) if chars.get(i + 2) == Some(&'>') => (Tok::Other("<=>".into()), 3),
                ('<', Some('=')) => (Tok::Other("<=".into()), 2),
                ('<', Some('~')) if chars.get(i + 2) == Some(&'>') => (Tok::Other("<~>".into()), 3),
                ('&' | '!' | '?' | '^' | '@' | '*' | '+' | '>' | '-', _) => (Tok::Other(c.to_string()), 1),
                _ => return Err(err(format!("unexpected character `{c}`"))),
            };
            for _ in 0..width {
                advance!();
            }
            tok
        };
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    Ok(out)
}
