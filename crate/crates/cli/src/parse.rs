use std::path::Path;

use gaborkit::density::parse_pair;
use gaborkit::twisted::{LatticeIndex, TwistedSequence};
use gaborkit::{Complex64, Error, Result, Signal, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A window name, with bare `gaussian` meaning width `√L`.
pub fn window_from_name(name: &str, len: usize) -> Result<Signal> {
    let w: Window = if name.trim() == "gaussian" {
        Window::Gaussian((len as f64).sqrt())
    } else {
        name.parse()?
    };
    w.generate(len)
}

pub fn window_from_file(path: &Path, len: usize) -> Result<Signal> {
    let text = std::fs::read_to_string(path)?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (re, im) = parse_pair(t, i + 1)?;
        samples.push(Complex64::new(re, im));
    }
    let s = Signal::new(samples)?;
    s.check_len(len)?;
    Ok(s)
}

/// Unit-norm complex Gaussian noise.
pub fn random_signal(len: usize, rng: &mut ChaCha8Rng) -> Result<Signal> {
    let samples = (0..len)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    Signal::new(samples)?.normalized()
}

/// `random` draws from the seeded generator; anything else is a window name.
pub fn signal_from_spec(spec: &str, len: usize, seed: u64) -> Result<Signal> {
    if spec.trim() == "random" {
        random_signal(len, &mut ChaCha8Rng::seed_from_u64(seed))
    } else {
        window_from_name(spec, len)
    }
}

/// `"x,y"` as a pair of reals.
pub fn real_pair(s: &str) -> Result<(f64, f64)> {
    parse_pair(s.trim(), 1).map_err(|e| Error::InvalidParameter(format!("{s:?}: {e}")))
}

/// `"u1,u2;v1,v2"` as two vectors.
pub fn generators(s: &str) -> Result<((f64, f64), (f64, f64))> {
    let (u, v) = s
        .split_once(';')
        .ok_or_else(|| Error::InvalidParameter(format!("expected \"u1,u2;v1,v2\", got {s:?}")))?;
    Ok((real_pair(u)?, real_pair(v)?))
}

/// Parses finite sums of `e` and `d(j,k)` with real or parenthesised complex
/// coefficients, e.g. `e-0.5*d(1,0)`, `2*e+(0.1-0.2i)*d(0,1)` or
/// `d([1,0],[0,1])` in dimension two.
pub fn sequence(src: &str, gamma: f64) -> Result<TwistedSequence> {
    let mut p = SeqParser {
        chars: src.chars().collect(),
        pos: 0,
    };
    let terms = p.expr()?;
    let dims: Vec<usize> = terms.iter().filter_map(|(i, _)| i.as_ref().map(|(j, _)| j.len())).collect();
    let dim = dims.first().copied().unwrap_or(1);
    if dims.iter().any(|&d| d != dim) {
        return Err(Error::InvalidParameter(format!("mixed dimensions in {src:?}")));
    }
    TwistedSequence::from_entries(
        dim,
        gamma,
        terms.into_iter().map(|(idx, c)| match idx {
            Some((j, k)) => (LatticeIndex::new(j, k), c),
            None => (LatticeIndex::zero(dim), c),
        }),
    )
}

type Term = (Option<(Vec<i64>, Vec<i64>)>, Complex64);

struct SeqParser {
    chars: Vec<char>,
    pos: usize,
}

impl SeqParser {
    fn err(&self, msg: &str) -> Error {
        Error::InvalidParameter(format!("sequence: {msg} at position {}", self.pos))
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

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        loop {
            let (idx, c) = self.term()?;
            terms.push((idx, c * sign));
            sign = match self.peek() {
                Some('+') => 1.0,
                Some('-') => -1.0,
                None => break,
                Some(_) => return Err(self.err("expected '+' or '-'")),
            };
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term> {
        let coef = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let c = self.complex()?;
                self.expect(')')?;
                Some(c)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => Some(Complex64::new(self.number()?, 0.0)),
            _ => None,
        };
        match coef {
            Some(c) if self.eat('*') => Ok((self.atom()?, c)),
            Some(c) => Ok((None, c)),
            None => Ok((self.atom()?, Complex64::new(1.0, 0.0))),
        }
    }

    fn complex(&mut self) -> Result<Complex64> {
        let mut z = Complex64::new(0.0, 0.0);
        let mut first = true;
        while first || matches!(self.peek(), Some('+') | Some('-')) {
            let sign = if self.eat('-') {
                -1.0
            } else {
                self.eat('+');
                1.0
            };
            let v = sign * if self.peek() == Some('i') { 1.0 } else { self.number()? };
            if self.eat('i') {
                z.im += v;
            } else {
                z.re += v;
            }
            first = false;
        }
        Ok(z)
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let at = |p: usize| self.chars.get(p).copied();
        let mut p = self.pos;
        while at(p).is_some_and(|c| c.is_ascii_digit() || c == '.') {
            p += 1;
        }
        if matches!(at(p), Some('e') | Some('E')) {
            let q = if matches!(at(p + 1), Some('+') | Some('-')) { p + 2 } else { p + 1 };
            if at(q).is_some_and(|c| c.is_ascii_digit()) {
                p = q;
                while at(p).is_some_and(|c| c.is_ascii_digit()) {
                    p += 1;
                }
            }
        }
        self.pos = p;
        let text: String = self.chars[start..p].iter().collect();
        text.parse().map_err(|_| self.err(&format!("bad number {text:?}")))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| self.err(&format!("bad integer {text:?}")))
    }

    fn index(&mut self) -> Result<Vec<i64>> {
        if !self.eat('[') {
            return Ok(vec![self.integer()?]);
        }
        let mut v = vec![self.integer()?];
        while self.eat(',') {
            v.push(self.integer()?);
        }
        self.expect(']')?;
        Ok(v)
    }

    fn atom(&mut self) -> Result<Option<(Vec<i64>, Vec<i64>)>> {
        match self.peek() {
            Some('e') => {
                self.pos += 1;
                Ok(None)
            }
            Some('d') => {
                self.pos += 1;
                self.expect('(')?;
                let j = self.index()?;
                self.expect(',')?;
                let k = self.index()?;
                self.expect(')')?;
                if j.len() != k.len() {
                    return Err(self.err("j and k must have the same length"));
                }
                Ok(Some((j, k)))
            }
            _ => Err(self.err("expected 'e' or 'd(j,k)'")),
        }
    }
}
