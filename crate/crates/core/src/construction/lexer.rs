//! Tokens of one source line.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// Unsigned integer or decimal literal, as written.
    Number(String),
    Sym(char),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    /// 1-based column of the first character.
    pub column: usize,
}

/// Splits a line (comments already removed) into tokens; on failure returns
/// the column of the offending character.
pub(crate) fn tokenize(line: &str) -> Result<Vec<Token>, (usize, char)> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), column });
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Token { tok: Tok::Number(chars[start..i].iter().collect()), column });
        } else if "()=,+-*/^".contains(c) {
            out.push(Token { tok: Tok::Sym(c), column });
            i += 1;
        } else {
            return Err((column, c));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_tokens() {
        let toks = tokenize("point A free at (0, -1/2)").unwrap();
        let kinds: Vec<Tok> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Ident("point".into()));
        assert_eq!(kinds[4], Tok::Sym('('));
        assert_eq!(kinds[7], Tok::Sym('-'));
        assert_eq!(toks[4].column, 17);
        assert!(matches!(tokenize("a ; b"), Err((3, ';'))));
    }
}
