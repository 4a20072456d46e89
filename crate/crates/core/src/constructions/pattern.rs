//! Tiny expression language for the case tables: linear index expressions
//! over `i`, `j`, `k`, `n`, vertex patterns like `u[i-1]`, and conditions
//! like `4 <= j-i <= 2k` or `j-i even`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::GpParams;

fn pattern_error(text: &str, message: impl Into<String>) -> Error {
    Error::Pattern { text: text.to_string(), message: message.into() }
}

/// Values of the pattern variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Env {
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub n: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    I,
    J,
    K,
    N,
}

/// `c_i*i + c_j*j + c_k*k + c_n*n + c`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LinearExpr {
    coeffs: [i64; 4],
    constant: i64,
}

impl LinearExpr {
    pub fn eval(&self, env: &Env) -> i64 {
        let [ci, cj, ck, cn] = self.coeffs;
        ci * env.i + cj * env.j + ck * env.k + cn * env.n + self.constant
    }

    pub fn uses_i(&self) -> bool {
        self.coeffs[0] != 0
    }

    pub fn uses_j(&self) -> bool {
        self.coeffs[1] != 0
    }
}

impl FromStr for LinearExpr {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(pattern_error(text, "empty expression"));
        }
        let mut expr = LinearExpr::default();
        let mut pos = 0;
        while pos < s.len() {
            let mut sign = 1;
            if s[pos] == '+' || s[pos] == '-' {
                if s[pos] == '-' {
                    sign = -1;
                }
                pos += 1;
            } else if pos > 0 {
                return Err(pattern_error(text, "expected + or -"));
            }
            let digits_start = pos;
            while pos < s.len() && s[pos].is_ascii_digit() {
                pos += 1;
            }
            let coefficient: Option<i64> = (pos > digits_start)
                .then(|| s[digits_start..pos].iter().collect::<String>().parse().unwrap());
            let var = match s.get(pos) {
                Some('i') => Some(Var::I),
                Some('j') => Some(Var::J),
                Some('k') => Some(Var::K),
                Some('n') => Some(Var::N),
                _ => None,
            };
            if var.is_some() {
                pos += 1;
            }
            match (coefficient, var) {
                (None, None) => return Err(pattern_error(text, "dangling sign")),
                (Some(c), None) => expr.constant += sign * c,
                (c, Some(v)) => expr.coeffs[v as usize] += sign * c.unwrap_or(1),
            }
        }
        Ok(expr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    U,
    V,
}

/// `u[expr]` or `v[expr]`, index reduced modulo n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPattern {
    pub side: Side,
    pub index: LinearExpr,
    text: String,
}

impl VertexPattern {
    pub fn vertex(&self, params: &GpParams, env: &Env) -> usize {
        let idx = self.index.eval(env);
        match self.side {
            Side::U => params.u(idx),
            Side::V => params.v(idx),
        }
    }
}

impl fmt::Display for VertexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl FromStr for VertexPattern {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let side = match t.chars().next() {
            Some('u') => Side::U,
            Some('v') => Side::V,
            _ => return Err(pattern_error(text, "vertex pattern must start with u or v")),
        };
        let inner = t[1..]
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| pattern_error(text, "expected brackets"))?;
        Ok(Self { side, index: inner.parse()?, text: t.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    fn holds(self, a: i64, b: i64) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Eq => a == b,
            Cmp::Ge => a >= b,
            Cmp::Gt => a > b,
        }
    }
}

/// A parity test or a chained comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Parity { expr: LinearExpr, even: bool },
    Chain { first: LinearExpr, rest: Vec<(Cmp, LinearExpr)> },
}

impl Condition {
    pub fn holds(&self, env: &Env) -> bool {
        match self {
            Condition::Parity { expr, even } => (expr.eval(env).rem_euclid(2) == 0) == *even,
            Condition::Chain { first, rest } => {
                let mut left = first.eval(env);
                for (cmp, expr) in rest {
                    let right = expr.eval(env);
                    if !cmp.holds(left, right) {
                        return false;
                    }
                    left = right;
                }
                true
            }
        }
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(e) = t.strip_suffix("even") {
            return Ok(Condition::Parity { expr: e.parse()?, even: true });
        }
        if let Some(e) = t.strip_suffix("odd") {
            return Ok(Condition::Parity { expr: e.parse()?, even: false });
        }
        let mut exprs = Vec::new();
        let mut ops = Vec::new();
        let mut rest = t;
        loop {
            let cut = rest.find(['<', '>', '=']);
            let Some(at) = cut else {
                exprs.push(rest);
                break;
            };
            exprs.push(&rest[..at]);
            let two = rest[at..].starts_with("<=") || rest[at..].starts_with(">=");
            let op = match &rest[at..at + if two { 2 } else { 1 }] {
                "<" => Cmp::Lt,
                "<=" => Cmp::Le,
                "=" => Cmp::Eq,
                ">=" => Cmp::Ge,
                ">" => Cmp::Gt,
                _ => unreachable!(),
            };
            ops.push(op);
            rest = &rest[at + if two { 2 } else { 1 }..];
        }
        if ops.is_empty() {
            return Err(pattern_error(text, "condition needs a comparison or parity"));
        }
        let mut parsed = exprs.into_iter().map(str::parse::<LinearExpr>);
        let first = parsed.next().unwrap()?;
        let rest = ops.into_iter().zip(parsed).map(|(op, e)| Ok((op, e?))).collect::<Result<_>>()?;
        Ok(Condition::Chain { first, rest })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(i: i64, j: i64, k: i64) -> Env {
        Env { i, j, k, n: 4 * k + 2 }
    }

    #[test]
    fn linear_expressions() {
        let e = |s: &str| s.parse::<LinearExpr>().unwrap().eval(&env(3, 10, 4));
        assert_eq!(e("2k+1"), 9);
        assert_eq!(e("i-1"), 2);
        assert_eq!(e("j-2i"), 4);
        assert_eq!(e("-2k"), -8);
        assert_eq!(e("n-1"), 17);
        assert_eq!(e("4k - 1"), 15);
        assert_eq!(e("0"), 0);
        assert!("2k+".parse::<LinearExpr>().is_err());
        assert!("2x".parse::<LinearExpr>().is_err());
        assert!("".parse::<LinearExpr>().is_err());
    }

    #[test]
    fn conditions() {
        let c = |s: &str| s.parse::<Condition>().unwrap().holds(&env(3, 10, 4));
        assert!(c("4 <= j-i <= 2k"));
        assert!(!c("j-i = 2"));
        assert!(c("j-i odd"));
        assert!(c("i odd"));
        assert!(!c("j odd"));
        assert!(c("-2k < i-j < -2"));
        assert!(c("i < j"));
        assert!(!c("i >= j"));
        assert!(c("j-i >= 2k-1"));
        assert!("j-i".parse::<Condition>().is_err());
    }

    #[test]
    fn negative_parity_uses_euclidean_remainder() {
        let odd: Condition = "j-i odd".parse().unwrap();
        assert!(odd.holds(&env(5, 2, 3)));
    }

    #[test]
    fn vertex_patterns_wrap_modulo_n() {
        let p = GpParams::new(14, 2).unwrap();
        let u: VertexPattern = "u[i-1]".parse().unwrap();
        assert_eq!(u.vertex(&p, &env(0, 0, 3)), 13);
        let v: VertexPattern = "v[j+2]".parse().unwrap();
        assert_eq!(v.vertex(&p, &env(0, 13, 3)), 14 + 1);
        assert_eq!(v.to_string(), "v[j+2]");
        assert!("w[i]".parse::<VertexPattern>().is_err());
        assert!("u(i)".parse::<VertexPattern>().is_err());
    }
}
