//! Tokenizer for the supported Java subset.
//!
//! Comments vanish, string/char/number literals become opaque
//! [`Tok::Literal`] tokens, and every other symbol is a single-character
//! [`Tok::Punct`]. Keeping `>>` as two `>` tokens lets the parser close
//! nested type arguments without special cases.

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Punct(char),
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;

    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                let start = line;
                i += 2;
                loop {
                    match chars.get(i) {
                        None => return Err(ParseError::new(start, "unterminated comment")),
                        Some('*') if chars.get(i + 1) == Some(&'/') => {
                            i += 2;
                            break;
                        }
                        Some('\n') => {
                            line += 1;
                            i += 1;
                        }
                        Some(_) => i += 1,
                    }
                }
            }
            '"' if chars.get(i + 1) == Some(&'"') && chars.get(i + 2) == Some(&'"') => {
                let start = line;
                i += 3;
                loop {
                    match chars.get(i) {
                        None => return Err(ParseError::new(start, "unterminated text block")),
                        Some('\\') => i += 2,
                        Some('"')
                            if chars.get(i + 1) == Some(&'"') && chars.get(i + 2) == Some(&'"') =>
                        {
                            i += 3;
                            break;
                        }
                        Some('\n') => {
                            line += 1;
                            i += 1;
                        }
                        Some(_) => i += 1,
                    }
                }
                tokens.push(Token {
                    tok: Tok::Literal,
                    line: start,
                });
            }
            '"' | '\'' => {
                let quote = c;
                i += 1;
                loop {
                    match chars.get(i) {
                        None | Some('\n') => {
                            return Err(ParseError::new(line, "unterminated literal"))
                        }
                        Some('\\') => i += 2,
                        Some(&q) if q == quote => {
                            i += 1;
                            break;
                        }
                        Some(_) => i += 1,
                    }
                }
                tokens.push(Token {
                    tok: Tok::Literal,
                    line,
                });
            }
            c if c.is_ascii_digit()
                || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) =>
            {
                let hex = c == '0' && matches!(chars.get(i + 1), Some('x' | 'X'));
                i += 1;
                while let Some(&d) = chars.get(i) {
                    let exponent_sign = matches!(d, '+' | '-')
                        && matches!(chars[i - 1], 'e' | 'E' | 'p' | 'P')
                        && !(hex && matches!(chars[i - 1], 'e' | 'E'));
                    if d.is_alphanumeric() || d == '_' || d == '.' || exponent_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    tok: Tok::Literal,
                    line,
                });
            }
            c if c.is_alphabetic() || c == '_' || c == '$' => {
                let start = i;
                while chars
                    .get(i)
                    .is_some_and(|d| d.is_alphanumeric() || *d == '_' || *d == '$')
                {
                    i += 1;
                }
                tokens.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                });
            }
            _ => {
                tokens.push(Token {
                    tok: Tok::Punct(c),
                    line,
                });
                i += 1;
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    fn ident(s: &str) -> Tok {
        Tok::Ident(s.to_string())
    }

    #[test]
    fn comments_and_strings_are_opaque() {
        assert_eq!(
            kinds("/* B b; */ String s = \"C c;\"; // D d;\n"),
            vec![
                ident("String"),
                ident("s"),
                Tok::Punct('='),
                Tok::Literal,
                Tok::Punct(';')
            ]
        );
    }

    #[test]
    fn lines_are_tracked() {
        let toks = tokenize("a\n/* x\n y */ b\n\"\"\"\ntext\n\"\"\" c").unwrap();
        let lines: Vec<usize> = toks.iter().map(|t| t.line).collect();
        assert_eq!(lines, vec![1, 3, 4, 6]);
    }

    #[test]
    fn numbers_and_chars() {
        assert_eq!(
            kinds("1.5e-3f + 0x1F - '\\'' .5"),
            vec![
                Tok::Literal,
                Tok::Punct('+'),
                Tok::Literal,
                Tok::Punct('-'),
                Tok::Literal,
                Tok::Literal
            ]
        );
    }

    #[test]
    fn shift_is_split() {
        assert_eq!(
            kinds("Map<K,List<V>>"),
            vec![
                ident("Map"),
                Tok::Punct('<'),
                ident("K"),
                Tok::Punct(','),
                ident("List"),
                Tok::Punct('<'),
                ident("V"),
                Tok::Punct('>'),
                Tok::Punct('>')
            ]
        );
    }

    #[test]
    fn unterminated_input_is_an_error() {
        assert_eq!(tokenize("a /* b").unwrap_err().line, 1);
        assert_eq!(tokenize("a\n\"abc\n").unwrap_err().line, 2);
        assert!(tokenize("'x").is_err());
        assert!(tokenize("\"\"\" never closed").is_err());
    }
}
