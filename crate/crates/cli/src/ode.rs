//! Polynomial ODE text.
//!
//! One equation per line, `x<i>' = <polynomial>`. A polynomial is a signed
//! sum of terms; a term is a product of factors separated by `*`, each factor
//! either a nonnegative rational constant (`3`, `1/2`) or a variable with an
//! optional nonnegative integer exponent (`x2`, `x2^3`). Blank lines and `#`
//! comments are ignored.
//!
//! Distinct monomials become the columns of `Y_s`, sorted lexicographically
//! by exponent vector; their coefficient vectors become the columns of `W`.
//! Monomials whose coefficients cancel in every equation are dropped.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crn_realize_core::ratmat::rat;
use crn_realize_core::{NetReactionData, RatMatrix, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
}

/// Sparse exponent map of a monomial, variable index (1-based) to power.
type Monomial = BTreeMap<usize, u32>;

struct Line {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Line {
    fn new(src: &str, line: usize) -> Self {
        let body = src.split('#').next().unwrap_or("");
        Self {
            chars: body.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.error(format!("expected '{c}', found '{d}'"))),
            None => Err(self.error(format!("expected '{c}', found end of line"))),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    /// `x<k>` with `k >= 1`; returns `k` and its start position.
    fn variable(&mut self) -> Result<(usize, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        self.expect('x')?;
        let digits = self
            .digits()
            .ok_or_else(|| self.error("expected a variable index after 'x'"))?;
        match digits.parse::<usize>() {
            Ok(k) if k >= 1 => Ok((k, start)),
            _ => Err(self.error_at(start, format!("invalid variable x{digits}"))),
        }
    }

    fn constant(&mut self) -> Result<Rational, ParseError> {
        let start = self.pos;
        let num = self
            .digits()
            .ok_or_else(|| self.error("expected a number"))?;
        if self.chars.get(self.pos) == Some(&'.') {
            return Err(self.error("decimal constants are not supported; write p/q"));
        }
        let mut value = Rational::from_integer(num.parse::<BigInt>().expect("digits"));
        if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            let den = self
                .digits()
                .ok_or_else(|| self.error("expected a denominator"))?;
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return Err(self.error_at(start, "zero denominator"));
            }
            value /= Rational::from_integer(den);
        }
        Ok(value)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            return Err(self.error("non-integer exponent: exponents must be nonnegative integers"));
        }
        let digits = self
            .digits()
            .ok_or_else(|| self.error("expected an exponent after '^'"))?;
        if matches!(self.chars.get(self.pos), Some('.') | Some('/')) {
            return Err(self.error_at(start, "non-integer exponent"));
        }
        digits
            .parse::<u32>()
            .map_err(|_| self.error_at(start, "exponent too large"))
    }

    /// A product of factors. Records variable positions for range checks.
    fn term(
        &mut self,
        vars_seen: &mut Vec<(usize, usize)>,
    ) -> Result<(Rational, Monomial), ParseError> {
        let mut coeff = Rational::one();
        let mut mono = Monomial::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.constant()?,
                Some('x') => {
                    let (k, pos) = self.variable()?;
                    vars_seen.push((k, pos));
                    let e = if self.peek() == Some('^') {
                        self.pos += 1;
                        self.exponent()?
                    } else {
                        1
                    };
                    if e > 0 {
                        *mono.entry(k).or_insert(0) += e;
                    }
                }
                Some(c) => return Err(self.error(format!("expected a factor, found '{c}'"))),
                None => return Err(self.error("expected a factor, found end of line")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((coeff, mono));
            }
        }
    }

    fn polynomial(
        &mut self,
        vars_seen: &mut Vec<(usize, usize)>,
    ) -> Result<Vec<(Rational, Monomial)>, ParseError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    Rational::one()
                }
                Some('-') => {
                    self.pos += 1;
                    -Rational::one()
                }
                _ if first => Rational::one(),
                Some(c) => return Err(self.error(format!("expected '+' or '-', found '{c}'"))),
                None => return Ok(terms),
            };
            first = false;
            let (c, m) = self.term(vars_seen)?;
            terms.push((sign * c, m));
            if self.at_end() {
                return Ok(terms);
            }
        }
    }
}

struct Equation {
    line: usize,
    terms: Vec<(Rational, Monomial)>,
}

pub fn parse_ode(text: &str) -> Result<NetReactionData, ParseError> {
    let mut equations: BTreeMap<usize, Equation> = BTreeMap::new();
    let mut vars_seen: Vec<(usize, usize, usize)> = Vec::new();
    let mut last_line = 0;
    for (idx, src) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let mut cur = Line::new(src, lineno);
        if cur.at_end() {
            continue;
        }
        let (k, head) = cur.variable()?;
        cur.expect('\'')?;
        cur.expect('=')?;
        let mut seen = Vec::new();
        let terms = cur.polynomial(&mut seen)?;
        if terms.is_empty() {
            return Err(cur.error("missing right-hand side"));
        }
        vars_seen.extend(seen.into_iter().map(|(v, p)| (v, lineno, p)));
        if let Some(prev) = equations.get(&k) {
            return Err(cur.error_at(
                head,
                format!("duplicate equation for x{k} (first on line {})", prev.line),
            ));
        }
        equations.insert(
            k,
            Equation {
                line: lineno,
                terms,
            },
        );
    }

    let n = *equations.keys().next_back().ok_or(ParseError {
        line: last_line.max(1),
        column: 1,
        message: "no equations".into(),
    })?;
    if let Some(missing) = (1..=n).find(|k| !equations.contains_key(k)) {
        return Err(ParseError {
            line: last_line,
            column: 1,
            message: format!("missing equation for x{missing} (system has x1..x{n})"),
        });
    }
    if let Some(&(v, line, pos)) = vars_seen.iter().find(|(v, _, _)| *v > n) {
        return Err(ParseError {
            line,
            column: pos + 1,
            message: format!("x{v} has no equation (system has x1..x{n})"),
        });
    }

    let mut columns: BTreeMap<Vec<u32>, Vec<Rational>> = BTreeMap::new();
    for (&k, eq) in &equations {
        for (c, mono) in &eq.terms {
            let mut y = vec![0u32; n];
            for (&v, &e) in mono {
                y[v - 1] = e;
            }
            let col = columns
                .entry(y)
                .or_insert_with(|| vec![Rational::zero(); n]);
            col[k - 1] += c;
        }
    }
    columns.retain(|_, w| w.iter().any(|x| !x.is_zero()));

    let ys: Vec<Vec<Rational>> = columns
        .keys()
        .map(|y| y.iter().map(|&e| rat(e.into())).collect())
        .collect();
    let ws: Vec<Vec<Rational>> = columns.into_values().collect();
    let data = NetReactionData::new(
        RatMatrix::from_columns(&ys, n).expect("uniform length"),
        RatMatrix::from_columns(&ws, n).expect("uniform length"),
    )
    .expect("monomials are distinct");
    Ok(data)
}

fn exponent_of(x: &Rational) -> Option<u32> {
    (x.is_integer() && !x.is_negative())
        .then(|| x.to_integer().to_u32())
        .flatten()
}

/// Writes `data` as ODE text that `parse_ode` reads back. Fails when a
/// source coordinate is not a nonnegative integer.
pub fn emit_ode(data: &NetReactionData) -> Result<String, String> {
    let n = data.dim();
    let ys = data.sources();
    let w = data.net_vectors();
    let mut exps = Vec::with_capacity(data.len());
    for j in 0..data.len() {
        let col: Option<Vec<u32>> = ys.column(j).iter().map(exponent_of).collect();
        exps.push(col.ok_or_else(|| {
            format!("source {j} is not a nonnegative integer vector, so it is not a monomial")
        })?);
    }
    let mut out = String::new();
    for i in 0..n {
        let mut rhs = String::new();
        for (j, y) in exps.iter().enumerate() {
            let c = &w[(i, j)];
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if rhs.is_empty() {
                if c.is_negative() {
                    rhs.push('-');
                }
            } else {
                let _ = write!(rhs, " {sign} ");
            }
            let factors: Vec<String> = y
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| match e {
                    1 => format!("x{}", v + 1),
                    _ => format!("x{}^{e}", v + 1),
                })
                .collect();
            let a = c.abs();
            let body = match (a.is_one(), factors.is_empty()) {
                (_, true) => a.to_string(),
                (true, false) => factors.join("*"),
                (false, false) => format!("{a}*{}", factors.join("*")),
            };
            rhs.push_str(&body);
        }
        if rhs.is_empty() {
            rhs.push('0');
        }
        let _ = writeln!(out, "x{}' = {rhs}", i + 1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crn_realize_core::ratmat::ratio;

    fn cols(m: &RatMatrix) -> Vec<Vec<Rational>> {
        m.columns()
    }

    #[test]
    fn example_ode() {
        let d = parse_ode("x1' = -x1 + x1^2\nx2' = x1^3 - x1^3*x2^2").unwrap();
        assert_eq!(
            d.sources(),
            &RatMatrix::from_i64(&[&[1, 2, 3, 3], &[0, 0, 0, 2]])
        );
        assert_eq!(
            d.net_vectors(),
            &RatMatrix::from_i64(&[&[-1, 1, 0, 0], &[0, 0, 1, -1]])
        );
    }

    #[test]
    fn zero_system() {
        let d = parse_ode("x1' = 0").unwrap();
        assert_eq!(d.len(), 0);
        assert_eq!(d.dim(), 1);
    }

    #[test]
    fn rational_coefficient() {
        let d = parse_ode("x1' = 1/2*x1").unwrap();
        assert_eq!(cols(d.sources()), vec![vec![rat(1)]]);
        assert_eq!(cols(d.net_vectors()), vec![vec![ratio(1, 2)]]);
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let d =
            parse_ode("x1' = x1*x2 + 2*x2*x1 - 3*x1^1*x2 + 4\n# comment\n\nx2' = x2^0*x1").unwrap();
        // x1*x2 cancels; constant 4 and x1 remain
        assert_eq!(d.sources(), &RatMatrix::from_i64(&[&[0, 1], &[0, 0]]));
        assert_eq!(d.net_vectors(), &RatMatrix::from_i64(&[&[4, 0], &[0, 1]]));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_ode("x1' = x1 +\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 11));
        let e = parse_ode("x1' = x1\nx1' = 2").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        assert!(e.message.contains("duplicate"));
        let e = parse_ode("x1' = x1^1.5").unwrap_err();
        assert_eq!((e.line, e.column), (1, 10));
        assert!(e.message.contains("non-integer exponent"));
        let e = parse_ode("x1' = x1^-1").unwrap_err();
        assert!(e.message.contains("non-integer exponent"));
        let e = parse_ode("x1' = x3").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        let e = parse_ode("x2' = x2").unwrap_err();
        assert!(e.message.contains("missing equation for x1"));
        let e = parse_ode("y' = 1").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(parse_ode("x1 = 1").is_err());
        assert!(parse_ode("x1' = 1/0").is_err());
        assert!(parse_ode("").is_err());
    }

    #[test]
    fn emit_then_parse() {
        let text = "x1' = -x1 + x1^2\nx2' = x1^3 - x1^3*x2^2\n";
        let d = parse_ode(text).unwrap();
        assert_eq!(emit_ode(&d).unwrap(), text);
        let d2 = parse_ode("x1' = 3/2 - 1/3*x1").unwrap();
        assert_eq!(emit_ode(&d2).unwrap(), "x1' = 3/2 - 1/3*x1\n");
        assert_eq!(parse_ode(&emit_ode(&d2).unwrap()).unwrap(), d2);
    }

    #[test]
    fn emit_rejects_fractional_sources() {
        let d = NetReactionData::new(
            RatMatrix::from_columns(&[vec![ratio(1, 2)]], 1).unwrap(),
            RatMatrix::from_i64(&[&[1]]),
        )
        .unwrap();
        assert!(emit_ode(&d).is_err());
    }
}
