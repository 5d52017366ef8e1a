use crate::diag::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `#name` directive label.
    Label(String),
    /// `(x)`, the tensor connective. Where an atom is expected it stands for
    /// the parenthesised variable `x`.
    TensorOp,
    /// `(+)`
    PlusOp,
    Lolli,
    Amp,
    Bang,
    Backslash,
    Dot,
    Colon,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    /// `<>`
    TopUnit,
    Star,
    Slash,
    Bar,
    Arrow,
    Turnstile,
    EqEq,
    Iso,
    Assign,
    Zero,
    Two,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::Label(s) => format!("`#{}`", s),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", token_text(other)),
        }
    }
}

pub fn token_text(t: &Tok) -> &'static str {
    match t {
        Tok::TensorOp => "(x)",
        Tok::PlusOp => "(+)",
        Tok::Lolli => "-o",
        Tok::Amp => "&",
        Tok::Bang => "!",
        Tok::Backslash => "\\",
        Tok::Dot => ".",
        Tok::Colon => ":",
        Tok::Comma => ",",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBracket => "[",
        Tok::RBracket => "]",
        Tok::Lt => "<",
        Tok::Gt => ">",
        Tok::TopUnit => "<>",
        Tok::Star => "*",
        Tok::Slash => "/",
        Tok::Bar => "|",
        Tok::Arrow => "->",
        Tok::Turnstile => "|-",
        Tok::EqEq => "==",
        Tok::Iso => "~=",
        Tok::Assign => ":=",
        Tok::Zero => "0",
        Tok::Two => "2",
        Tok::Ident(_) | Tok::Label(_) | Tok::Eof => "",
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Split source text into tokens. Identifiers may carry a `#n` suffix
/// (the checker's fresh names print that way).
pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        let peek = |k: usize| chars.get(i + k).copied();
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && peek(1) == Some('-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = if ident_start(c) {
            let mut j = i + 1;
            while j < chars.len() {
                if ident_continue(chars[j]) {
                    j += 1;
                } else if chars[j] == '#' && chars.get(j + 1).is_some_and(|d| d.is_ascii_digit()) {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                } else {
                    break;
                }
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c == '#' {
            let mut j = i + 1;
            while j < chars.len() && (ident_continue(chars[j]) || chars[j] == '-') {
                j += 1;
            }
            if j == i + 1 {
                return Err(Diagnostic::error(span, "expected a label name after `#`"));
            }
            (Tok::Label(chars[i + 1..j].iter().collect()), j - i)
        } else {
            match (c, peek(1), peek(2)) {
                ('(', Some('x'), Some(')')) => (Tok::TensorOp, 3),
                ('(', Some('+'), Some(')')) => (Tok::PlusOp, 3),
                ('-', Some('o'), _) if !peek(2).is_some_and(ident_continue) => (Tok::Lolli, 2),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('|', Some('-'), _) => (Tok::Turnstile, 2),
                ('=', Some('='), _) => (Tok::EqEq, 2),
                ('~', Some('='), _) => (Tok::Iso, 2),
                (':', Some('='), _) => (Tok::Assign, 2),
                ('<', Some('>'), _) => (Tok::TopUnit, 2),
                ('&', _, _) => (Tok::Amp, 1),
                ('!', _, _) => (Tok::Bang, 1),
                ('\\', _, _) => (Tok::Backslash, 1),
                ('.', _, _) => (Tok::Dot, 1),
                (':', _, _) => (Tok::Colon, 1),
                (',', _, _) => (Tok::Comma, 1),
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                ('[', _, _) => (Tok::LBracket, 1),
                (']', _, _) => (Tok::RBracket, 1),
                ('<', _, _) => (Tok::Lt, 1),
                ('>', _, _) => (Tok::Gt, 1),
                ('*', _, _) => (Tok::Star, 1),
                ('/', _, _) => (Tok::Slash, 1),
                ('|', _, _) => (Tok::Bar, 1),
                ('0', _, _) if !peek(1).is_some_and(|d| d.is_ascii_alphanumeric()) => (Tok::Zero, 1),
                ('2', _, _) if !peek(1).is_some_and(|d| d.is_ascii_alphanumeric()) => (Tok::Two, 1),
                _ => {
                    return Err(Diagnostic::error(
                        span,
                        format!("unexpected character {:?}", c),
                    ))
                }
            }
        };
        out.push(Token { tok, span });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(line, col),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn tensor_and_plus_are_single_tokens() {
        assert_eq!(
            toks("a (x) b (+) c"),
            vec![
                Tok::Ident("a".into()),
                Tok::TensorOp,
                Tok::Ident("b".into()),
                Tok::PlusOp,
                Tok::Ident("c".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_primes() {
        assert_eq!(
            toks("x' -- trailing\n-o y#3"),
            vec![
                Tok::Ident("x'".into()),
                Tok::Lolli,
                Tok::Ident("y#3".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn spans_track_lines() {
        let t = lex("a\n  b").unwrap();
        assert_eq!(t[1].span, Span::new(2, 3));
    }

    #[test]
    fn stray_character_is_reported() {
        let e = lex("a $ b").unwrap_err();
        assert_eq!(e.span, Span::new(1, 3));
    }
}
