//! Text format for morphisms: `a->ab; b->ba`.
//!
//! Images may use powers, `a^3` or `(ab)^2`. Rules are separated by `;`, `,`
//! or newlines. Without an explicit alphabet the domain is the sorted set of
//! left-hand symbols and the codomain adds any further symbols used on the
//! right. With an alphabet both sides use it and every letter needs a rule.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::morphisms::Morphism;
use crate::words::{Alphabet, Word};

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// `(symbol, image, offset of the rule)` in input order.
fn rules(s: &str) -> Result<Vec<(char, Word, usize)>> {
    let mut out = Vec::new();
    let mut start = 0;
    for part in s.split([';', ',', '\n']) {
        let here = start;
        start += part.len() + 1;
        let trimmed = part.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = here + part.len() - trimmed.len();
        let arrow = trimmed
            .find("->")
            .or_else(|| trimmed.find('→'))
            .ok_or_else(|| err(lead, format!("expected 'x->word', found '{}'", trimmed.trim())))?;
        let arrow_len = if trimmed[arrow..].starts_with("->") { 2 } else { '→'.len_utf8() };
        let lhs: Vec<char> = trimmed[..arrow].trim().chars().collect();
        let [symbol] = lhs[..] else {
            return Err(err(lead, "left-hand side must be a single symbol"));
        };
        let rhs_raw = &trimmed[arrow + arrow_len..];
        let rhs_at = lead + arrow + arrow_len + (rhs_raw.len() - rhs_raw.trim_start().len());
        let rhs = rhs_raw.trim();
        if rhs.is_empty() {
            return Err(err(rhs_at, format!("empty image for '{symbol}'")));
        }
        let image = expand(rhs, rhs_at)?;
        if out.iter().any(|(c, _, _)| *c == symbol) {
            return Err(err(lead, format!("second rule for '{symbol}'")));
        }
        out.push((symbol, image, lead));
    }
    if out.is_empty() {
        return Err(err(0, "no rules"));
    }
    Ok(out)
}

/// Expands `a^3`, `(ab)^2` and plain symbols into a word.
fn expand(rhs: &str, at: usize) -> Result<Word> {
    let chars: Vec<(usize, char)> = rhs.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let unit: Word = match c {
            '(' => {
                let close =
                    chars[i..].iter().position(|&(_, c)| c == ')').ok_or_else(|| err(at + off, "unclosed '('"))?;
                let inner: Word = chars[i + 1..i + close].iter().map(|p| p.1).collect();
                if let Some(&(o, c)) = chars[i + 1..i + close].iter().find(|p| "(^".contains(p.1)) {
                    return Err(err(at + o, format!("unexpected '{c}' inside parentheses")));
                }
                if inner.is_empty() {
                    return Err(err(at + off, "empty parentheses"));
                }
                i += close + 1;
                inner
            }
            ')' | '^' | '>' | '-' => return Err(err(at + off, format!("unexpected '{c}' in image"))),
            c if c.is_whitespace() => return Err(err(at + off, "unexpected space in image")),
            c => {
                i += 1;
                vec![c]
            }
        };
        let mut times = 1;
        if chars.get(i).is_some_and(|p| p.1 == '^') {
            let digits: String = chars[i + 1..].iter().map(|p| p.1).take_while(char::is_ascii_digit).collect();
            let exp_at = at + chars[i].0;
            times = digits.parse::<usize>().map_err(|_| err(exp_at, "expected an exponent after '^'"))?;
            if times == 0 {
                return Err(err(exp_at, "exponent must be positive"));
            }
            i += 1 + digits.len();
        }
        for _ in 0..times {
            out.extend_from_slice(&unit);
        }
    }
    Ok(out)
}

pub fn parse_morphism(s: &str, alphabet: Option<&Alphabet>) -> Result<Morphism> {
    let rules = rules(s)?;
    let (domain, codomain) = match alphabet {
        Some(a) => (a.clone(), a.clone()),
        None => {
            let lhs: BTreeSet<char> = rules.iter().map(|r| r.0).collect();
            let all: BTreeSet<char> =
                lhs.iter().copied().chain(rules.iter().flat_map(|r| r.1.iter().copied())).collect();
            (Alphabet::new(lhs.into_iter().collect())?, Alphabet::new(all.into_iter().collect())?)
        }
    };
    let mut images = vec![None; domain.len()];
    for (symbol, image, at) in rules {
        let i =
            domain.index_of(symbol).ok_or_else(|| err(at, format!("'{symbol}' is not in the alphabet {domain}")))?;
        if let Some(c) = image.iter().find(|c| !codomain.contains(**c)) {
            return Err(err(at, format!("'{c}' is not in the alphabet {codomain}")));
        }
        images[i] = Some(image);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| err(s.len(), format!("no rule for '{}'", domain.symbol(i)))))
        .collect::<Result<Vec<_>>>()?;
    Morphism::new(domain, codomain, images)
}

/// Accepts the text format or the JSON object form.
pub fn parse_morphism_any(s: &str, alphabet: Option<&Alphabet>) -> Result<Morphism> {
    if s.trim_start().starts_with('{') {
        let phi: Morphism = serde_json::from_str(s).map_err(|e| err(e.column().saturating_sub(1), e.to_string()))?;
        return match alphabet {
            Some(a) if !phi.domain().same_set(a) => {
                Err(Error::AlphabetMismatch(format!("morphism is over {}, expected {a}", phi.domain())))
            }
            _ => Ok(phi),
        };
    }
    parse_morphism(s, alphabet)
}

/// Renders a parse error with a caret under the offending offset.
pub fn annotate(input: &str, e: &Error) -> String {
    match e {
        Error::Parse { pos, msg } => {
            let line_start = input[..(*pos).min(input.len())].rfind('\n').map_or(0, |i| i + 1);
            let line_end = input[line_start..].find('\n').map_or(input.len(), |i| line_start + i);
            let col = input[line_start..(*pos).min(input.len())].chars().count();
            format!("{msg}\n  {}\n  {}^", &input[line_start..line_end], " ".repeat(col))
        }
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let phi = parse_morphism("a->ab; b->ba", None).unwrap();
        assert_eq!(phi, Morphism::from_images(&["ab", "ba"]).unwrap());
        assert_eq!(parse_morphism(&phi.to_string(), None).unwrap(), phi);
        let phi = parse_morphism(" b -> a ,\n a->bb ", None).unwrap();
        assert_eq!(phi.to_string(), "a->bb; b->a");
        assert_eq!(parse_morphism_any(&serde_json::to_string(&phi).unwrap(), None).unwrap(), phi);
    }

    #[test]
    fn powers() {
        let phi = parse_morphism("a->a^2b^3(ab)^2; b->b", None).unwrap();
        assert_eq!(phi.to_string(), "a->aabbbabab; b->b");
        assert_eq!(parse_morphism("0->01; 1->10", None).unwrap().to_string(), "0->01; 1->10");
    }

    #[test]
    fn inferred_codomain() {
        let phi = parse_morphism("a->ab; b->c", None).unwrap();
        assert!(!phi.is_endomorphism());
        assert_eq!(phi.codomain().to_string(), "abc");
    }

    #[test]
    fn explicit_alphabet() {
        let abc: Alphabet = "abc".parse().unwrap();
        assert!(matches!(parse_morphism("a->ab; b->ba", Some(&abc)), Err(Error::Parse { pos: 12, .. })));
        let phi = parse_morphism("a->ab; b->ba; c->c", Some(&abc)).unwrap();
        assert!(phi.is_endomorphism());
    }

    #[test]
    fn errors_point_at_the_problem() {
        assert!(matches!(parse_morphism("a->ab; b=ba", None), Err(Error::Parse { pos: 7, .. })));
        assert!(matches!(parse_morphism("a->ab; b->", None), Err(Error::Parse { pos: 10, .. })));
        assert!(matches!(parse_morphism("a->a b", None), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_morphism("a->a; a->b", None), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(parse_morphism("ab->a", None), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_morphism("a->a^0b", None), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_morphism("a->(ab", None), Err(Error::Parse { pos: 3, .. })));
        let e = parse_morphism("a->ab; b=ba", None).unwrap_err();
        assert!(annotate("a->ab; b=ba", &e).ends_with("\n  a->ab; b=ba\n         ^"));
    }
}
