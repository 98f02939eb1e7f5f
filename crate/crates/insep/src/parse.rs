//! Text formats: defining polynomials (`X^8 + t*X^3 + t*X^2 + t`,
//! `X^4 + 2*X + 2`), element term lists (`a_i @ i`), and base-field
//! specs (`laurent:p=2,d=1`, `padic:p=3`).
//!
//! Parse errors carry the offending token and its byte position.

use thiserror::Error;

use crate::field::extension::EisensteinExtension;
use crate::field::laurent::LaurentField;
use crate::field::padic::PadicField;
use crate::field::residue::ResidueField;
use crate::field::{ValuedField, DEFAULT_PRECISION};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { position, message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    X,
    T,
    G,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    At,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '@' => {
                out.push((i, Tok::At));
                i += 1;
            }
            ',' => {
                out.push((i, Tok::Comma));
                i += 1;
            }
            'X' | 'x' => {
                out.push((i, Tok::X));
                i += 1;
            }
            't' => {
                out.push((i, Tok::T));
                i += 1;
            }
            'g' => {
                out.push((i, Tok::G));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                let mut v: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((bytes[i] - b'0') as u64))
                        .ok_or(ParseError {
                            position: start,
                            message: "integer literal overflows".into(),
                        })?;
                    i += 1;
                }
                out.push((start, Tok::Int(v)));
            }
            other => return err(i, format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

/// A dense polynomial in X over base elements; the parse-time value type.
struct PolyVal<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> PolyVal<E> {
    fn constant(e: E) -> Self {
        PolyVal { coeffs: vec![e] }
    }
}

struct Parser<'a, F: ValuedField> {
    field: &'a F,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a, F: ValuedField> Parser<'a, F> {
    fn new(field: &'a F, text: &str) -> Result<Self, ParseError> {
        Ok(Parser { field, toks: lex(text)?, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize, ParseError> {
        match self.bump() {
            Some((p, t)) if t == want => Ok(p),
            Some((p, t)) => err(p, format!("expected {what}, found `{t:?}`")),
            None => err(self.end, format!("expected {what}, found end of input")),
        }
    }

    fn add(&self, a: &PolyVal<F::Elem>, b: &PolyVal<F::Elem>) -> PolyVal<F::Elem> {
        let len = a.coeffs.len().max(b.coeffs.len());
        let z = self.field.zero();
        let coeffs = (0..len)
            .map(|i| {
                let x = a.coeffs.get(i).unwrap_or(&z);
                let y = b.coeffs.get(i).unwrap_or(&z);
                self.field.add(x, y)
            })
            .collect();
        PolyVal { coeffs }
    }

    fn neg(&self, a: &PolyVal<F::Elem>) -> PolyVal<F::Elem> {
        PolyVal { coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect() }
    }

    fn mul(&self, a: &PolyVal<F::Elem>, b: &PolyVal<F::Elem>) -> PolyVal<F::Elem> {
        let mut coeffs = vec![self.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                coeffs[i + j] = self.field.add(&coeffs[i + j], &self.field.mul(x, y));
            }
        }
        PolyVal { coeffs }
    }

    fn pow(&self, a: &PolyVal<F::Elem>, e: u64) -> PolyVal<F::Elem> {
        let mut acc = PolyVal::constant(self.field.one());
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// poly := ['-'] term (('+'|'-') term)*
    fn poly(&mut self) -> Result<PolyVal<F::Elem>, ParseError> {
        let mut acc = if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            let t = self.term()?;
            self.neg(&t)
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.add(&acc, &t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.add(&acc, &self.neg(&t));
                }
                _ => return Ok(acc),
            }
        }
    }

    /// term := factor ('*' factor)*
    fn term(&mut self) -> Result<PolyVal<F::Elem>, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = self.mul(&acc, &f);
        }
        Ok(acc)
    }

    /// factor := atom ['^' uint]
    fn factor(&mut self) -> Result<PolyVal<F::Elem>, ParseError> {
        let a = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            match self.bump() {
                Some((_, Tok::Int(e))) => {
                    if e > 256 {
                        return err(self.here(), "exponent too large");
                    }
                    Ok(self.pow(&a, e))
                }
                Some((p, t)) => err(p, format!("expected exponent, found `{t:?}`")),
                None => err(self.end, "expected exponent, found end of input"),
            }
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self) -> Result<PolyVal<F::Elem>, ParseError> {
        match self.bump() {
            Some((_, Tok::Int(v))) => {
                if v > i64::MAX as u64 {
                    return err(self.here(), "integer literal too large");
                }
                Ok(PolyVal::constant(self.field.from_int(v as i64)))
            }
            Some((_, Tok::X)) => Ok(PolyVal { coeffs: vec![self.field.zero(), self.field.one()] }),
            Some((p, Tok::T)) => {
                if self.field.e_k().is_some() {
                    return err(p, "`t` is only defined over a Laurent-series base");
                }
                Ok(PolyVal::constant(self.field.uniformizer()))
            }
            Some((p, Tok::G)) => match self.generator() {
                Some(g) => Ok(PolyVal::constant(g)),
                None => err(p, "`g` needs a residue field of degree > 1"),
            },
            Some((_, Tok::LParen)) => {
                let inner = self.poly()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some((p, t)) => err(p, format!("expected a value, found `{t:?}`")),
            None => err(self.end, "expected a value, found end of input"),
        }
    }

    fn generator(&self) -> Option<F::Elem> {
        self.field.residue_generator()
    }
}

/// Parses a polynomial in X into its dense coefficient list (low degree
/// first).
pub fn parse_poly<F: ValuedField>(field: &F, text: &str) -> Result<Vec<F::Elem>, ParseError> {
    let mut p = Parser::new(field, text)?;
    let v = p.poly()?;
    if let Some((pos, t)) = p.bump() {
        return err(pos, format!("trailing input `{t:?}`"));
    }
    let mut coeffs = v.coeffs;
    while coeffs.len() > 1 && field.is_exact_zero(coeffs.last().unwrap()) {
        coeffs.pop();
    }
    Ok(coeffs)
}

#[derive(Debug, Error)]
pub enum PolyToExtensionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("not an Eisenstein polynomial: {0}")]
    NotEisenstein(String),
}

/// Parses a monic Eisenstein polynomial into an extension descriptor.
pub fn parse_eisenstein<F: ValuedField>(
    field: &F,
    text: &str,
) -> Result<EisensteinExtension<F>, PolyToExtensionError> {
    let coeffs = parse_poly(field, text)?;
    let n = coeffs.len() - 1;
    if n == 0 || coeffs[n] != field.one() {
        return Err(PolyToExtensionError::NotMonic);
    }
    // f(X) = X^n - c_1 X^{n-1} + …: c_h = (-1)^h · coeff(X^{n-h})
    let c: Vec<F::Elem> = (1..=n)
        .map(|h| {
            let raw = &coeffs[n - h];
            if h % 2 == 0 {
                raw.clone()
            } else {
                field.neg(raw)
            }
        })
        .collect();
    EisensteinExtension::new(field.clone(), c)
        .map_err(|e| PolyToExtensionError::NotEisenstein(e.to_string()))
}

/// Parses an element term list `a_i @ i, a_j @ j` into `(exponent,
/// coefficient)` pairs. Coefficients are X-free expressions.
pub fn parse_terms<F: ValuedField>(
    field: &F,
    text: &str,
) -> Result<Vec<(u32, F::Elem)>, ParseError> {
    let mut parser = Parser::new(field, text)?;
    let mut out = Vec::new();
    if parser.peek().is_none() {
        return Ok(out);
    }
    loop {
        let at = parser.here();
        let value = parser.poly()?;
        if value.coeffs.len() > 1 {
            return err(at, "element coefficients cannot contain X");
        }
        parser.expect(Tok::At, "`@`")?;
        let (p, tok) = parser
            .bump()
            .ok_or(ParseError { position: parser.end, message: "expected exponent".into() })?;
        let Tok::Int(e) = tok else {
            return err(p, format!("expected exponent, found `{tok:?}`"));
        };
        if e > u32::MAX as u64 {
            return err(p, "exponent too large");
        }
        out.push((e as u32, value.coeffs.into_iter().next().unwrap()));
        match parser.bump() {
            None => return Ok(out),
            Some((_, Tok::Comma)) => continue,
            Some((p, t)) => return err(p, format!("expected `,`, found `{t:?}`")),
        }
    }
}

/// A parsed `--base` specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseSpec {
    Laurent { p: u32, d: u32, modulus: Option<Vec<u8>> },
    Padic { p: u32 },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad base spec `{text}`: {message}")]
pub struct BaseSpecError {
    pub text: String,
    pub message: String,
}

impl std::str::FromStr for BaseSpec {
    type Err = BaseSpecError;

    /// `laurent:p=2,d=1[,modulus=c0.c1…]` or `padic:p=3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| BaseSpecError { text: s.to_string(), message: m.to_string() };
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("missing `kind:`"))?;
        let mut p: Option<u32> = None;
        let mut d: Option<u32> = None;
        let mut modulus: Option<Vec<u8>> = None;
        for kv in rest.split(',') {
            if kv.is_empty() {
                continue;
            }
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match k.trim() {
                "p" => p = Some(v.trim().parse().map_err(|_| bad("bad p"))?),
                "d" => d = Some(v.trim().parse().map_err(|_| bad("bad d"))?),
                "modulus" => {
                    let coeffs: Result<Vec<u8>, _> =
                        v.trim().split('.').map(|c| c.parse::<u8>()).collect();
                    modulus = Some(coeffs.map_err(|_| bad("bad modulus digits"))?);
                }
                other => return Err(bad(&format!("unknown key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| bad("missing p"))?;
        match kind.trim() {
            "laurent" => Ok(BaseSpec::Laurent { p, d: d.unwrap_or(1), modulus }),
            "padic" => {
                if d.is_some() || modulus.is_some() {
                    return Err(bad("padic takes only p"));
                }
                Ok(BaseSpec::Padic { p })
            }
            other => Err(bad(&format!("unknown base kind `{other}`"))),
        }
    }
}

impl BaseSpec {
    pub fn build_laurent(&self, precision: i64) -> Result<Option<LaurentField>, String> {
        match self {
            BaseSpec::Laurent { p, d, modulus } => {
                let rf = match modulus {
                    Some(m) => ResidueField::with_modulus(*p, m.clone()),
                    None => ResidueField::extension(*p, *d),
                }
                .map_err(|e| e.to_string())?;
                Ok(Some(LaurentField::with_precision(rf, precision)))
            }
            BaseSpec::Padic { .. } => Ok(None),
        }
    }

    pub fn build_padic(&self, precision: i64) -> Option<PadicField> {
        match self {
            BaseSpec::Padic { p } => Some(PadicField::with_precision(*p, precision)),
            BaseSpec::Laurent { .. } => None,
        }
    }

    pub fn default_precision() -> i64 {
        DEFAULT_PRECISION
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Valuation;

    fn f2t() -> LaurentField {
        LaurentField::new(ResidueField::prime(2).unwrap())
    }

    #[test]
    fn parses_the_example_polynomial() {
        let k = f2t();
        let ext = parse_eisenstein(&k, "X^8 + t*X^3 + t*X^2 + t").unwrap();
        assert_eq!(ext.degree(), 8);
        assert_eq!(ext.poly_string(), "X^8 + t*X^3 + t*X^2 + t");
        let vals: Vec<Valuation> =
            ext.coefficients().iter().map(|c| k.valuation(c)).collect();
        assert_eq!(vals[4], Valuation::Finite(1));
        assert_eq!(vals[7], Valuation::Finite(1));
    }

    #[test]
    fn parses_padic_polynomial_with_signs() {
        let q2 = PadicField::new(2);
        let ext = parse_eisenstein(&q2, "X^4 + 2*X + 2").unwrap();
        assert_eq!(ext.degree(), 4);
        assert_eq!(ext.poly_string(), "X^4 + 2*X + 2");
        let ext = parse_eisenstein(&q2, "X^2 - 2*X + 2").unwrap();
        assert_eq!(ext.poly_string(), "X^2 + -2*X + 2");
    }

    #[test]
    fn rejects_t_over_padic_bases() {
        let q2 = PadicField::new(2);
        let e = parse_eisenstein(&q2, "X^2 + t").unwrap_err();
        assert!(e.to_string().contains("Laurent"), "{e}");
    }

    #[test]
    fn error_positions_point_at_tokens() {
        let k = f2t();
        let e = parse_poly(&k, "X^2 + ?").unwrap_err();
        assert_eq!(e.position, 6);
        assert!(e.to_string().contains('?'));
        let e = parse_poly(&k, "X^2 + + t").unwrap_err();
        assert_eq!(e.position, 6);
        let e = parse_poly(&k, "X^2 + (t").unwrap_err();
        assert!(e.message.contains(")"));
    }

    #[test]
    fn rejects_non_eisenstein_and_non_monic() {
        let k = f2t();
        assert!(matches!(
            parse_eisenstein(&k, "2*X^2 + t"),
            Err(PolyToExtensionError::NotMonic)
        ));
        assert!(matches!(
            parse_eisenstein(&k, "X^2 + 1"),
            Err(PolyToExtensionError::NotEisenstein(_))
        ));
        assert!(matches!(
            parse_eisenstein(&k, "X^2 + t^2"),
            Err(PolyToExtensionError::NotEisenstein(_))
        ));
    }

    #[test]
    fn parses_residue_generator_coefficients() {
        let f4 = ResidueField::extension(2, 2).unwrap();
        let k = LaurentField::new(f4.clone());
        let coeffs = parse_poly(&k, "(1 + g)*t^2 + t").unwrap();
        assert_eq!(coeffs.len(), 1);
        assert_eq!(k.format(&coeffs[0]), "t + (g+1)*t^2");
        // g is meaningless over F_2
        let e = parse_poly(&f2t(), "g*t").unwrap_err();
        assert!(e.message.contains("degree > 1"));
    }

    #[test]
    fn parses_element_terms() {
        let k = f2t();
        let terms = parse_terms(&k, "1 @ 1, t @ 3").unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].0, 1);
        assert_eq!(terms[1].0, 3);
        assert_eq!(k.valuation(&terms[1].1), Valuation::Finite(1));
        assert!(parse_terms(&k, "X @ 1").is_err());
        assert!(parse_terms(&k, "1 @").is_err());
        assert!(parse_terms(&k, "").unwrap().is_empty());
    }

    #[test]
    fn base_specs_round_trip() {
        let spec: BaseSpec = "laurent:p=2,d=1".parse().unwrap();
        assert_eq!(spec, BaseSpec::Laurent { p: 2, d: 1, modulus: None });
        let spec: BaseSpec = "padic:p=3".parse().unwrap();
        assert_eq!(spec, BaseSpec::Padic { p: 3 });
        let spec: BaseSpec = "laurent:p=2,d=2".parse().unwrap();
        assert!(spec.build_laurent(64).unwrap().is_some());
        assert!("noise:p=2".parse::<BaseSpec>().is_err());
        assert!("padic:p=3,d=2".parse::<BaseSpec>().is_err());
        let spec: BaseSpec = "laurent:p=2,modulus=1.1".parse().unwrap();
        assert!(spec.build_laurent(64).unwrap().is_some());
    }
}
