//! Recursive-descent parser for VQL text.
//!
//! Keywords and identifiers are matched case-insensitively. Trailing
//! clauses (`WHERE`, `BIN`, `GROUP BY`, `ORDER BY`) may appear in any
//! order, each at most once; `TRANSFORM GROUP c` is accepted as an
//! alternate spelling of `GROUP BY c`. Sub-selects may nest two levels
//! deep at most.

use crate::ast::*;
use crate::error::ParseError;
use crate::lexer::{tokenize, Token, TokenKind};

/// Parses a complete query. The whole input must be consumed.
pub fn parse(input: &str) -> Result<VqlAst, ParseError> {
    let tokens = tokenize(input)?;
    let mut p = Parser { tokens: &tokens, pos: 0, input_len: input.len() };
    let ast = p.query()?;
    if let Some(tok) = p.peek() {
        return Err(ParseError::Syntax {
            offset: tok.offset,
            expected: "end of input".into(),
            found: tok.kind.describe(),
        });
    }
    Ok(ast)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'a Token> {
        self.tokens.get(self.pos + n)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.input_len, |t| t.offset)
    }

    fn err(&self, expected: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.here(),
            expected: expected.into(),
            found: self.peek().map_or_else(|| "end of input".into(), |t| t.kind.describe()),
        }
    }

    /// True when the current token is the given bare word, case folded.
    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Ident(s), .. }) if s.eq_ignore_ascii_case(kw))
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.err(format!("keyword {kw}")))
        }
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if &t.kind == kind => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(what)),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token { kind: TokenKind::Ident(s), .. }) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.err(what)),
        }
    }

    fn query(&mut self) -> Result<VqlAst, ParseError> {
        self.expect_kw("VISUALIZE")?;
        let chart_type = self.chart_type()?;
        self.expect_kw("SELECT")?;
        let x = ColumnExpr::Column(self.column_ref("x-axis column")?);
        self.expect(&TokenKind::Comma, "\",\" between the two selected expressions")?;
        let y = self.column_expr()?;
        self.expect_kw("FROM")?;
        let from_table = self.ident("table name after FROM")?;
        let mut joins = Vec::new();
        while self.at_kw("JOIN") {
            joins.push(self.join_clause()?);
        }

        let mut where_pred = None;
        let mut bin = None;
        let mut group = None;
        let mut order_by = None;
        loop {
            if self.at_kw("WHERE") {
                if where_pred.is_some() {
                    return Err(self.err("at most one WHERE clause"));
                }
                self.pos += 1;
                where_pred = Some(self.or_pred(0)?);
            } else if self.at_kw("BIN") {
                if bin.is_some() {
                    return Err(self.err("at most one BIN clause"));
                }
                self.pos += 1;
                bin = Some(self.bin_spec()?);
            } else if self.at_kw("GROUP") || self.at_kw("TRANSFORM") {
                if group.is_some() {
                    return Err(self.err("at most one grouping clause"));
                }
                group = Some(self.group_spec()?);
            } else if self.at_kw("ORDER") {
                if order_by.is_some() {
                    return Err(self.err("at most one ORDER BY clause"));
                }
                self.pos += 1;
                self.expect_kw("BY")?;
                order_by = Some(self.order_spec()?);
            } else {
                break;
            }
        }

        Ok(VqlAst {
            chart_type,
            select: SelectClause { x, y },
            from_table,
            joins,
            where_pred,
            bin,
            group,
            order_by,
        })
    }

    fn chart_type(&mut self) -> Result<ChartType, ParseError> {
        let offset = self.here();
        let word = self.ident("chart type")?;
        match word.to_ascii_lowercase().as_str() {
            "bar" => Ok(ChartType::Bar),
            "pie" => Ok(ChartType::Pie),
            "line" => Ok(ChartType::Line),
            "scatter" => Ok(ChartType::Scatter),
            _ => Err(ParseError::UnsupportedChartType { offset, found: word }),
        }
    }

    fn column_expr(&mut self) -> Result<ColumnExpr, ParseError> {
        for func in [("COUNT", AggFunc::Count), ("SUM", AggFunc::Sum), ("AVG", AggFunc::Avg)] {
            if self.at_kw(func.0) && matches!(self.peek_at(1), Some(Token { kind: TokenKind::LParen, .. })) {
                self.pos += 2;
                let agg = self.agg_body(func.1)?;
                return Ok(ColumnExpr::Aggregate(agg));
            }
        }
        Ok(ColumnExpr::Column(self.column_ref("column or aggregate")?))
    }

    fn agg_body(&mut self, func: AggFunc) -> Result<AggExpr, ParseError> {
        let (arg, distinct) = if matches!(self.peek(), Some(Token { kind: TokenKind::Star, .. })) {
            if func != AggFunc::Count {
                return Err(self.err(format!("a column argument for {}", func.as_str())));
            }
            self.pos += 1;
            (AggArg::Star, false)
        } else {
            // DISTINCT counts as the keyword only when a column follows;
            // otherwise it is a column named "distinct".
            let distinct = self.at_kw("DISTINCT")
                && !matches!(self.peek_at(1), Some(Token { kind: TokenKind::RParen, .. }) | None);
            if distinct {
                self.pos += 1;
            }
            (AggArg::Column(self.column_ref("aggregate argument")?), distinct)
        };
        self.expect(&TokenKind::RParen, "\")\" closing the aggregate")?;
        Ok(AggExpr { func, arg, distinct })
    }

    fn column_ref(&mut self, what: &str) -> Result<ColumnRef, ParseError> {
        let first = self.ident(what)?;
        if matches!(self.peek(), Some(Token { kind: TokenKind::Dot, .. })) {
            self.pos += 1;
            let name = self.ident("column name after \".\"")?;
            Ok(ColumnRef { table: Some(first), name })
        } else {
            Ok(ColumnRef { table: None, name: first })
        }
    }

    fn join_clause(&mut self) -> Result<JoinClause, ParseError> {
        self.expect_kw("JOIN")?;
        let table = self.ident("table name after JOIN")?;
        self.expect_kw("ON")?;
        let left = self.column_ref("join column")?;
        self.expect(&TokenKind::Eq, "\"=\" in join condition")?;
        let right = self.column_ref("join column")?;
        Ok(JoinClause { table, left, right })
    }

    fn or_pred(&mut self, depth: usize) -> Result<Predicate, ParseError> {
        let mut acc = self.and_pred(depth)?;
        while self.eat_kw("OR") {
            let rhs = self.and_pred(depth)?;
            acc = Predicate::Or(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn and_pred(&mut self, depth: usize) -> Result<Predicate, ParseError> {
        let mut acc = self.primary_pred(depth)?;
        while self.eat_kw("AND") {
            let rhs = self.primary_pred(depth)?;
            acc = Predicate::And(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn primary_pred(&mut self, depth: usize) -> Result<Predicate, ParseError> {
        if matches!(self.peek(), Some(Token { kind: TokenKind::LParen, .. })) {
            self.pos += 1;
            let inner = self.or_pred(depth)?;
            self.expect(&TokenKind::RParen, "\")\" closing the condition group")?;
            return Ok(inner);
        }
        self.comparison(depth)
    }

    fn comparison(&mut self, depth: usize) -> Result<Predicate, ParseError> {
        let left = self.column_ref("condition column")?;
        let op = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Eq) => CompareOp::Eq,
            Some(TokenKind::Ne) => CompareOp::Ne,
            Some(TokenKind::Lt) => CompareOp::Lt,
            Some(TokenKind::Le) => CompareOp::Le,
            Some(TokenKind::Gt) => CompareOp::Gt,
            Some(TokenKind::Ge) => CompareOp::Ge,
            Some(TokenKind::Ident(s)) if s.eq_ignore_ascii_case("LIKE") => CompareOp::Like,
            Some(TokenKind::Ident(s)) if s.eq_ignore_ascii_case("IN") => CompareOp::In,
            _ => return Err(self.err("comparison operator")),
        };
        self.pos += 1;
        let right = match op {
            CompareOp::In => self.in_rhs(depth)?,
            CompareOp::Like => match self.peek() {
                Some(Token { kind: TokenKind::Str(s), .. }) => {
                    let s = s.clone();
                    self.pos += 1;
                    RightHand::Literal(Literal::Text(s))
                }
                _ => return Err(self.err("string pattern after LIKE")),
            },
            _ => self.scalar_rhs(depth)?,
        };
        Ok(Predicate::Compare { left, op, right })
    }

    fn in_rhs(&mut self, depth: usize) -> Result<RightHand, ParseError> {
        self.expect(&TokenKind::LParen, "\"(\" after IN")?;
        if self.at_kw("SELECT") {
            let sq = self.subquery(depth + 1)?;
            self.expect(&TokenKind::RParen, "\")\" closing the sub-select")?;
            return Ok(RightHand::Subquery(Box::new(sq)));
        }
        let mut items = vec![self.literal()?];
        while matches!(self.peek(), Some(Token { kind: TokenKind::Comma, .. })) {
            self.pos += 1;
            items.push(self.literal()?);
        }
        self.expect(&TokenKind::RParen, "\")\" closing the IN list")?;
        Ok(RightHand::List(items))
    }

    fn scalar_rhs(&mut self, depth: usize) -> Result<RightHand, ParseError> {
        match self.peek() {
            Some(Token { kind: TokenKind::LParen, .. }) => {
                self.pos += 1;
                if !self.at_kw("SELECT") {
                    return Err(self.err("SELECT starting a sub-select"));
                }
                let sq = self.subquery(depth + 1)?;
                self.expect(&TokenKind::RParen, "\")\" closing the sub-select")?;
                Ok(RightHand::Subquery(Box::new(sq)))
            }
            _ => Ok(RightHand::Literal(self.literal()?)),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        match self.peek() {
            Some(Token { kind: TokenKind::Str(s), .. }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(Literal::Text(s))
            }
            Some(Token { kind: TokenKind::Number(n), .. }) => {
                let n = *n;
                self.pos += 1;
                Ok(Literal::Number(n))
            }
            _ => Err(self.err("literal value")),
        }
    }

    /// Parses a sub-select body (after the opening paren, `SELECT` still
    /// pending). `depth` is 1 for a sub-select of the top query.
    fn subquery(&mut self, depth: usize) -> Result<Subquery, ParseError> {
        if depth > 2 {
            return Err(self.err("sub-selects nested at most two levels deep"));
        }
        self.expect_kw("SELECT")?;
        let select = self.column_expr()?;
        self.expect_kw("FROM")?;
        let from_table = self.ident("table name after FROM")?;
        let mut joins = Vec::new();
        while self.at_kw("JOIN") {
            joins.push(self.join_clause()?);
        }
        let where_pred = if self.eat_kw("WHERE") {
            Some(Box::new(self.or_pred(depth)?))
        } else {
            None
        };
        let group = if self.at_kw("GROUP") || self.at_kw("TRANSFORM") {
            Some(self.group_spec()?)
        } else {
            None
        };
        Ok(Subquery { select, from_table, joins, where_pred, group })
    }

    fn bin_spec(&mut self) -> Result<BinSpec, ParseError> {
        let column = self.column_ref("column to bin")?;
        self.expect_kw("BY")?;
        let offset = self.here();
        let word = self.ident("bin interval")?;
        let interval = match word.to_ascii_lowercase().as_str() {
            "year" => BinInterval::Year,
            "month" => BinInterval::Month,
            "day" => BinInterval::Day,
            "weekday" => BinInterval::Weekday,
            _ => {
                return Err(ParseError::Syntax {
                    offset,
                    expected: "year, month, day, or weekday".into(),
                    found: format!("{word:?}"),
                })
            }
        };
        Ok(BinSpec { column, interval })
    }

    /// Accepts `GROUP BY c1, c2` and `TRANSFORM GROUP c1, c2`.
    fn group_spec(&mut self) -> Result<GroupSpec, ParseError> {
        if self.eat_kw("TRANSFORM") {
            self.expect_kw("GROUP")?;
        } else {
            self.expect_kw("GROUP")?;
            self.expect_kw("BY")?;
        }
        let mut columns = vec![self.column_ref("grouping column")?];
        while matches!(self.peek(), Some(Token { kind: TokenKind::Comma, .. })) {
            self.pos += 1;
            columns.push(self.column_ref("grouping column")?);
        }
        Ok(GroupSpec { columns })
    }

    fn order_spec(&mut self) -> Result<OrderSpec, ParseError> {
        let key = self.column_ref("ordering key")?;
        let dir = if self.eat_kw("ASC") {
            SortDir::Asc
        } else if self.eat_kw("DESC") {
            SortDir::Desc
        } else {
            SortDir::Asc
        };
        Ok(OrderSpec { key, dir })
    }
}
