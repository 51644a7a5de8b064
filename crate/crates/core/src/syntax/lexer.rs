use super::ast::SourceSpan;
use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TokenKind {
    Open(char),
    Close(char),
    Atom(String),
    Str(String),
    /// A `;` comment. `own_line` is false when code precedes it on its line.
    Comment { text: String, own_line: bool },
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

pub(crate) fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    Lexer::new(source).run()
}

struct Lexer<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    line: u32,
    col: u32,
    code_on_line: bool,
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | '{' | '}' | '"' | ';')
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, chars: src.char_indices().collect(), pos: 0, line: 1, col: 1, code_on_line: false }
    }

    fn byte_pos(&self) -> usize {
        self.chars.get(self.pos).map(|&(b, _)| b).unwrap_or(self.src.len())
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
            self.code_on_line = false;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn run(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            let (start, line, col) = (self.byte_pos(), self.line, self.col);
            let span = |end: usize| SourceSpan::new(start, end, line, col);
            let kind = match c {
                '(' | '[' | '{' => {
                    self.bump();
                    TokenKind::Open(c)
                }
                ')' | ']' | '}' => {
                    self.bump();
                    TokenKind::Close(c)
                }
                ';' => {
                    let own_line = !self.code_on_line;
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                    let text = self.src[start..self.byte_pos()].trim_end().to_string();
                    out.push(Token { kind: TokenKind::Comment { text, own_line }, span: span(self.byte_pos()) });
                    continue;
                }
                '"' => TokenKind::Str(self.string(start, line, col)?),
                _ => {
                    while let Some(c) = self.peek() {
                        if is_delimiter(c) {
                            break;
                        }
                        self.bump();
                    }
                    TokenKind::Atom(self.src[start..self.byte_pos()].to_string())
                }
            };
            self.code_on_line = true;
            out.push(Token { kind, span: span(self.byte_pos()) });
        }
        Ok(out)
    }

    fn string(&mut self, start: usize, line: u32, col: u32) -> Result<String, ParseError> {
        self.bump();
        let mut text = String::new();
        loop {
            match self.bump() {
                None => {
                    return Err(ParseError::new(
                        "unterminated string literal",
                        SourceSpan::new(start, self.src.len(), line, col),
                    ))
                }
                Some('"') => return Ok(text),
                Some('\\') => {
                    let esc = self.bump();
                    text.push(match esc {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('\\') => '\\',
                        Some('"') => '"',
                        other => {
                            return Err(ParseError::new(
                                format!("bad escape sequence \\{}", other.map(String::from).unwrap_or_default()),
                                SourceSpan::new(start, self.byte_pos(), line, col),
                            ))
                        }
                    });
                }
                Some(c) => text.push(c),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_count_characters() {
        let toks = tokenize("; ℝ≥0\n(f \"é\" x)").unwrap();
        assert!(matches!(&toks[0].kind, TokenKind::Comment { own_line: true, .. }));
        let x = toks.iter().find(|t| t.kind == TokenKind::Atom("x".into())).unwrap();
        assert_eq!((x.span.line, x.span.column), (2, 8));
    }

    #[test]
    fn trailing_comment_is_not_own_line() {
        let toks = tokenize("(define A 1)  ; note\n; own").unwrap();
        let comments: Vec<bool> = toks
            .iter()
            .filter_map(|t| match &t.kind {
                TokenKind::Comment { own_line, .. } => Some(*own_line),
                _ => None,
            })
            .collect();
        assert_eq!(comments, vec![false, true]);
    }

    #[test]
    fn unterminated_string() {
        assert!(tokenize("(f \"abc").is_err());
    }
}
