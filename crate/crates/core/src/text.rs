//! Text form of step functions: `t_0 v_1 t_1 v_2 ... t_k` with exact
//! fractions, e.g. `0 1 1/2 2 1`. Point values are written by label; a value
//! that is itself a step function is written in brackets, so an element of
//! `HM² X` looks like `0 [0 1 1] 1/2 [0 1 1/2 2 1] 1`.

use crate::error::{Error, Result};
use crate::hm::HmFn;
use crate::rat::Rat;
use crate::space::{FiniteSpace, Point};
use crate::stepfn::StepFn;

pub(crate) trait Codec: Sized {
    fn encode(&self, space: &FiniteSpace, out: &mut String);
    fn decode(tokens: &mut Tokens<'_>, space: &FiniteSpace) -> Result<Self>;
}

pub(crate) struct Tokens<'a> {
    rest: &'a str,
}

impl<'a> Tokens<'a> {
    fn new(s: &'a str) -> Self {
        Tokens { rest: s }
    }

    fn peek(&self) -> Option<&'a str> {
        let s = self.rest.trim_start();
        let first = s.chars().next()?;
        if first == '[' || first == ']' {
            return Some(&s[..1]);
        }
        let end = s
            .find(|c: char| c.is_whitespace() || c == '[' || c == ']')
            .unwrap_or(s.len());
        Some(&s[..end])
    }

    fn next(&mut self) -> Option<&'a str> {
        let tok = self.peek()?;
        let s = self.rest.trim_start();
        self.rest = &s[tok.len()..];
        Some(tok)
    }

    fn expect(&mut self, want: &str) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::Parse(format!("expected {want:?}, found {other:?}"))),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.next() {
            None => Ok(()),
            Some(t) => Err(Error::Parse(format!("trailing input at {t:?}"))),
        }
    }
}

impl Codec for Point {
    fn encode(&self, space: &FiniteSpace, out: &mut String) {
        out.push_str(space.label(*self));
    }

    fn decode(tokens: &mut Tokens<'_>, space: &FiniteSpace) -> Result<Self> {
        let tok = tokens
            .next()
            .ok_or_else(|| Error::Parse("expected a point label".into()))?;
        space
            .point(tok)
            .ok_or_else(|| Error::Parse(format!("unknown point label {tok:?}")))
    }
}

impl<V: Codec + Eq> Codec for StepFn<V> {
    fn encode(&self, space: &FiniteSpace, out: &mut String) {
        out.push('[');
        encode_steps(self, space, out);
        out.push(']');
    }

    fn decode(tokens: &mut Tokens<'_>, space: &FiniteSpace) -> Result<Self> {
        tokens.expect("[")?;
        let f = decode_steps(tokens, space)?;
        tokens.expect("]")?;
        Ok(f)
    }
}

fn encode_steps<V: Codec>(f: &StepFn<V>, space: &FiniteSpace, out: &mut String) {
    for piece in f.iter() {
        out.push_str(&piece.lo.to_string());
        out.push(' ');
        piece.value.encode(space, out);
        out.push(' ');
    }
    out.push('1');
}

fn decode_steps<V: Codec + Eq>(tokens: &mut Tokens<'_>, space: &FiniteSpace) -> Result<StepFn<V>> {
    let mut breaks = vec![parse_rat(tokens)?];
    let mut values = Vec::new();
    while !matches!(tokens.peek(), None | Some("]")) {
        values.push(V::decode(tokens, space)?);
        breaks.push(parse_rat(tokens)?);
    }
    StepFn::from_pieces(breaks, values)
}

fn parse_rat(tokens: &mut Tokens<'_>) -> Result<Rat> {
    tokens
        .next()
        .ok_or_else(|| Error::Parse("expected a breakpoint".into()))?
        .parse()
}

pub(crate) fn encode<V: Codec>(f: &StepFn<V>, space: &FiniteSpace) -> String {
    let mut out = String::new();
    encode_steps(f, space, &mut out);
    out
}

pub(crate) fn decode<V: Codec + Eq>(space: &FiniteSpace, s: &str) -> Result<StepFn<V>> {
    let mut tokens = Tokens::new(s);
    let f = decode_steps(&mut tokens, space)?;
    tokens.finish()?;
    Ok(f)
}

pub(crate) fn encode_hm(f: &HmFn) -> String {
    encode(f.steps(), f.space())
}

pub(crate) fn decode_hm(space: &FiniteSpace, s: &str) -> Result<HmFn> {
    HmFn::new(space, decode(space, s)?)
}
