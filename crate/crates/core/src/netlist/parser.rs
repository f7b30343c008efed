// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser; one statement per line, recovery at line ends.

use std::collections::BTreeMap;

use super::ast::{BlockParams, EndpointRef, NetlistAst, Statement};
use super::lexer::{lines, tokenize, Token, TokenKind};
use super::Diagnostic;

struct LineParser<'a> {
    line: usize,
    tokens: &'a [Token],
    pos: usize,
    end_column: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn error_here(&self, message: impl Into<String>) -> Diagnostic {
        match self.peek() {
            Some(t) => Diagnostic::error(self.line, t.column, message, &t.lexeme),
            None => Diagnostic::error(self.line, self.end_column, message, ""),
        }
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.error_here(format!("expected {what}"))),
        }
    }

    fn int(&mut self, what: &str) -> PResult<u64> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Int(v)) => {
                self.pos += 1;
                Ok(*v)
            }
            Some(TokenKind::Overflow) => Err(self.error_here(format!("{what} is too large"))),
            Some(TokenKind::Minus) => Err(self.error_here(format!("{what} must not be negative"))),
            _ => Err(self.error_here(format!("expected integer {what}"))),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<()> {
        if self.peek().map(|t| &t.kind) == Some(&kind) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Ident(s)) if s == word => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error_here(format!("expected `{word}`"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn finish(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error_here("unexpected trailing input"))
        }
    }

    fn endpoint(&mut self) -> PResult<EndpointRef> {
        let name = self.ident("endpoint name")?;
        let port = if self.peek().map(|t| &t.kind) == Some(&TokenKind::Dot) {
            self.pos += 1;
            Some(self.ident("port name after `.`")?)
        } else {
            None
        };
        Ok(EndpointRef { name, port })
    }

    fn statement(&mut self) -> PResult<Statement> {
        let head = self.ident("statement keyword")?;
        let stmt = match head.as_str() {
            "source" => self.source()?,
            "block" => self.block()?,
            "connect" => self.connect()?,
            "probe" => Statement::Probe(self.endpoint()?),
            "run" => Statement::Run(self.int("horizon")?),
            _ => {
                self.pos -= 1;
                return Err(self.error_here(format!(
                    "unknown statement `{head}` (expected source, block, connect, probe or run)"
                )));
            }
        };
        self.finish()?;
        Ok(stmt)
    }

    fn source(&mut self) -> PResult<Statement> {
        let name = self.ident("source name")?;
        self.keyword("spikes")?;
        self.expect(TokenKind::Eq, "`=`")?;
        self.expect(TokenKind::LBracket, "`[`")?;
        let mut spikes = Vec::new();
        if self.peek().map(|t| &t.kind) == Some(&TokenKind::RBracket) {
            self.pos += 1;
            return Ok(Statement::Source { name, spikes });
        }
        loop {
            spikes.push(self.int("spike tick")?);
            match self.bump().map(|t| &t.kind) {
                Some(TokenKind::Comma) => continue,
                Some(TokenKind::RBracket) => break,
                _ => {
                    self.pos -= 1;
                    return Err(self.error_here("expected `,` or `]`"));
                }
            }
        }
        Ok(Statement::Source { name, spikes })
    }

    fn block(&mut self) -> PResult<Statement> {
        let kind = self.ident("block kind")?;
        let name = self.ident("block name")?;
        let mut params = BlockParams::default();
        while !self.at_end() {
            let key_tok = self.peek().expect("not at end");
            let key = self.ident("parameter name")?;
            self.expect(TokenKind::Eq, "`=` after parameter name")?;
            let value = self.int(&format!("value for `{key}`"))?;
            let slot = match key.as_str() {
                "inputs" => &mut params.inputs,
                "half_period" => &mut params.half_period,
                "first" => &mut params.first,
                _ => {
                    return Err(Diagnostic::error(
                        self.line,
                        key_tok.column,
                        format!("unknown parameter `{key}` (expected inputs, half_period or first)"),
                        &key_tok.lexeme,
                    ))
                }
            };
            if slot.replace(value).is_some() {
                return Err(Diagnostic::error(
                    self.line,
                    key_tok.column,
                    format!("parameter `{key}` given twice"),
                    &key_tok.lexeme,
                ));
            }
        }
        Ok(Statement::Block { kind, name, params })
    }

    fn connect(&mut self) -> PResult<Statement> {
        let from = self.endpoint()?;
        self.expect(TokenKind::Arrow, "`->`")?;
        let to = self.endpoint()?;
        let mut delay = 0;
        if !self.at_end() {
            self.keyword("delay")?;
            self.expect(TokenKind::Eq, "`=`")?;
            if self.peek().map(|t| &t.kind) == Some(&TokenKind::Plus) {
                self.pos += 1;
            }
            delay = self.int("extra delay")?;
        }
        Ok(Statement::Connect { from, to, delay })
    }
}

/// Parses `.snl` text. Every line with a syntax error yields one diagnostic;
/// duplicate names and repeated `run` statements are reported as well.
pub fn parse(text: &str) -> Result<NetlistAst, Vec<Diagnostic>> {
    let mut ast = NetlistAst::default();
    let mut diags = Vec::new();
    let mut declared: BTreeMap<String, usize> = BTreeMap::new();
    let mut run_line: Option<usize> = None;

    for (line, code) in lines(text) {
        let tokens = tokenize(code);
        if tokens.is_empty() {
            continue;
        }
        if let Some(t) = tokens.iter().find(|t| matches!(t.kind, TokenKind::Stray(_))) {
            diags.push(Diagnostic::error(
                line,
                t.column,
                format!("unexpected character `{}`", t.lexeme),
                &t.lexeme,
            ));
            continue;
        }
        let mut p = LineParser {
            line,
            tokens: &tokens,
            pos: 0,
            end_column: code.chars().count() + 1,
        };
        match p.statement() {
            Ok(stmt) => {
                if let Some(name) = stmt.declared_name() {
                    if let Some(first) = declared.get(name) {
                        let column = name_column(&tokens, name);
                        diags.push(Diagnostic::error(
                            line,
                            column,
                            format!("name `{name}` already declared on line {first}"),
                            name,
                        ));
                        continue;
                    }
                    declared.insert(name.to_string(), line);
                }
                if let Statement::Run(_) = stmt {
                    if let Some(first) = run_line {
                        diags.push(Diagnostic::error(
                            line,
                            tokens[0].column,
                            format!("second `run` statement (first on line {first})"),
                            "run",
                        ));
                        continue;
                    }
                    run_line = Some(line);
                }
                ast.statements.push(stmt);
                ast.lines.push(line);
            }
            Err(d) => diags.push(d),
        }
    }
    if diags.is_empty() {
        Ok(ast)
    } else {
        Err(diags)
    }
}

fn name_column(tokens: &[Token], name: &str) -> usize {
    tokens
        .iter()
        .skip(1)
        .find(|t| t.kind == TokenKind::Ident(name.to_string()))
        .map_or(1, |t| t.column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_statement() {
        let ast = parse("block and_classic g inputs=4\n").unwrap();
        assert_eq!(
            ast.statements,
            vec![Statement::Block {
                kind: "and_classic".into(),
                name: "g".into(),
                params: BlockParams {
                    inputs: Some(4),
                    ..Default::default()
                },
            }]
        );
    }

    #[test]
    fn connect_with_delay() {
        let ast = parse("connect clk.out -> n1.in0 delay=+2").unwrap();
        assert_eq!(
            ast.statements[0],
            Statement::Connect {
                from: EndpointRef::new("clk", Some("out")),
                to: EndpointRef::new("n1", Some("in0")),
                delay: 2,
            }
        );
        let ast = parse("connect a->g.in0 delay = 3").unwrap();
        assert!(matches!(ast.statements[0], Statement::Connect { delay: 3, .. }));
    }

    #[test]
    fn missing_integer_is_located() {
        let d = parse("block xor g inputs=").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].line, d[0].column), (1, 20));
        assert!(d[0].message.contains("integer"));
    }

    #[test]
    fn recovers_per_line() {
        let text = "source a spikes=[1,\nblock or g inputs=2\nrun x\nprobe\nconnect a g\n";
        let d = parse(text).unwrap_err();
        assert_eq!(d.iter().map(|d| d.line).collect::<Vec<_>>(), vec![1, 3, 4, 5]);
    }

    #[test]
    fn source_lists_and_comments() {
        let ast = parse("# header\nsource s spikes=[ 1, 2 ,3 ] # trailing\r\nsource e spikes=[]\n").unwrap();
        assert_eq!(ast.lines, vec![2, 3]);
        assert_eq!(
            ast.statements[0],
            Statement::Source {
                name: "s".into(),
                spikes: vec![1, 2, 3]
            }
        );
    }

    #[test]
    fn semantic_checks() {
        let d = parse("source a spikes=[]\nblock or a inputs=1\nrun 4\nrun 5\n").unwrap_err();
        assert_eq!(d.len(), 2);
        assert!(d[0].message.contains("already declared"));
        assert_eq!(d[0].column, 10);
        assert!(d[1].message.contains("second `run`"));
    }

    #[test]
    fn negative_delay_and_strays() {
        let d = parse("connect a -> g.in0 delay=-1\nrun 4 $\nblock or g inputs=2 inputs=3\nblock or g foo=1").unwrap_err();
        assert_eq!(d.len(), 4);
        assert!(d[0].message.contains("negative"));
        assert_eq!(d[1].lexeme, "$");
        assert!(d[2].message.contains("twice"));
        assert!(d[3].message.contains("unknown parameter"));
    }
}
