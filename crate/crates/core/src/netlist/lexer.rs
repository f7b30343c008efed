// SPDX-License-Identifier: Apache-2.0

//! Line-oriented tokenizer for `.snl` files.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(u64),
    Eq,
    LBracket,
    RBracket,
    Comma,
    Arrow,
    Dot,
    Plus,
    Minus,
    /// A character that starts no valid token.
    Stray(char),
    /// Digits that do not fit in 64 bits.
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// 1-based column of the first character.
    pub column: usize,
    pub lexeme: String,
}

/// Splits `text` into lines (LF or CRLF) with comments removed.
pub fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n').enumerate().map(|(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let code = match line.find('#') {
            Some(at) => &line[..at],
            None => line,
        };
        (i + 1, code)
    })
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes one comment-free line.
pub fn tokenize(line: &str) -> Vec<Token> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = if is_ident_start(c) {
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            TokenKind::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            digits.parse().map_or(TokenKind::Overflow, TokenKind::Int)
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            TokenKind::Arrow
        } else {
            i += 1;
            match c {
                '=' => TokenKind::Eq,
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                ',' => TokenKind::Comma,
                '.' => TokenKind::Dot,
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                other => TokenKind::Stray(other),
            }
        };
        out.push(Token {
            kind,
            column,
            lexeme: chars[start..i].iter().collect(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<TokenKind> {
        tokenize(s).into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn connect_line() {
        use TokenKind::*;
        assert_eq!(
            kinds("connect clk.out -> n1.in0 delay=+2"),
            vec![
                Ident("connect".into()),
                Ident("clk".into()),
                Dot,
                Ident("out".into()),
                Arrow,
                Ident("n1".into()),
                Dot,
                Ident("in0".into()),
                Ident("delay".into()),
                Eq,
                Plus,
                Int(2),
            ]
        );
    }

    #[test]
    fn columns_and_strays() {
        let t = tokenize("run  12 @");
        assert_eq!(t[1].column, 6);
        assert_eq!(t[2].kind, TokenKind::Stray('@'));
        assert_eq!(t[2].column, 9);
        assert_eq!(kinds("99999999999999999999999")[0], TokenKind::Overflow);
    }

    #[test]
    fn comments_and_crlf() {
        let ls: Vec<_> = lines("run 3 # go\r\n# only\r\nprobe a").collect();
        assert_eq!(ls, vec![(1, "run 3 "), (2, ""), (3, "probe a")]);
    }
}
