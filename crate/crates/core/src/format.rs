//! Text formats for received words, exact rationals and `ℓ` sweeps.
//!
//! A received word is one block per line, elements separated by whitespace.
//! Each element is exactly `m·r` base-`p` digits (`0-9`, `a-z`, case
//! insensitive), least significant first: digit `j·r + s` is the `z^s`
//! coefficient of the `y^j` coordinate in the tower basis. Blank lines and
//! text after `#` are ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::field::{ExtElement, ExtField};
use crate::sum_rank::{BlockVector, LengthPartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Blocks of field elements, one per non-empty line.
pub fn parse_received(field: &ExtField, text: &str) -> Result<Vec<Vec<ExtElement>>, ParseError> {
    let p = field.base().characteristic();
    if p > 36 {
        return Err(err(1, 1, format!("characteristic {p} has no digit encoding")));
    }
    let r = field.base().degree();
    let width = field.degree() * r;
    let mut blocks = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut block = Vec::new();
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            let token = &tail[..len];
            let col = line[..offset + start].chars().count() + 1;
            block.push(parse_element(field, token, width, p, r).map_err(|(i, msg)| err(ln + 1, col + i, msg))?);
            offset += start + len;
            rest = &tail[len..];
        }
        if !block.is_empty() {
            blocks.push(block);
        }
    }
    Ok(blocks)
}

fn parse_element(field: &ExtField, token: &str, width: usize, p: u32, r: usize) -> Result<ExtElement, (usize, String)> {
    let mut digits = Vec::with_capacity(width);
    for (i, ch) in token.chars().enumerate() {
        match ch.to_digit(36).filter(|&d| d < p) {
            Some(d) => digits.push(d),
            None => return Err((i, format!("{ch:?} is not a base-{p} digit"))),
        }
    }
    if digits.len() != width {
        return Err((0, format!("element has {} digits, expected {width}", digits.len())));
    }
    let coords: Vec<_> = digits
        .chunks(r)
        .map(|c| field.base().from_coeffs(c).expect("digits below p"))
        .collect();
    Ok(field.reconstruct(&coords))
}

/// Parses and checks the blocks against a partition.
pub fn parse_received_word(
    field: &ExtField,
    partition: &LengthPartition,
    text: &str,
) -> Result<BlockVector, ParseError> {
    let blocks = parse_received(field, text)?;
    if blocks.len() != partition.ell() {
        return Err(err(
            1,
            1,
            format!("found {} blocks, expected {}", blocks.len(), partition.ell()),
        ));
    }
    for (i, (b, &ni)) in blocks.iter().zip(partition.blocks()).enumerate() {
        if b.len() != ni {
            return Err(err(
                1,
                1,
                format!("block {} has {} elements, expected {ni}", i + 1, b.len()),
            ));
        }
    }
    let data = blocks.concat();
    Ok(BlockVector::new(data, partition.clone()).expect("lengths checked"))
}

pub fn format_element(field: &ExtField, x: ExtElement) -> String {
    let base = field.base();
    field
        .ext_expand(x)
        .into_iter()
        .flat_map(|c| base.coeffs(c))
        .map(|d| char::from_digit(d, 36).expect("digit below 36"))
        .collect()
}

/// Inverse of [`parse_received_word`], with a trailing newline per block.
pub fn format_received(field: &ExtField, y: &BlockVector) -> String {
    let mut out = String::new();
    for block in y.blocks() {
        let line: Vec<String> = block.iter().map(|&x| format_element(field, x)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// `"num/den"`, or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num.parse().map_err(|_| err(1, 1, format!("bad numerator in {s:?}")))?;
    let den: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| err(1, num_width(s) + 2, format!("bad denominator in {s:?}")))?,
        None => BigInt::from(1),
    };
    if den.is_zero() {
        return Err(err(1, num_width(s) + 2, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn num_width(s: &str) -> usize {
    s.find('/').unwrap_or(s.len())
}

/// Always writes the reduced `"num/den"` form, including `"1/1"`.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Comma-separated positive integers; empty input is an empty sweep.
pub fn parse_ell_sweep(s: &str) -> Result<Vec<usize>, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut col = 1;
    for part in s.split(',') {
        let v: usize = part
            .trim()
            .parse()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| err(1, col, format!("{:?} is not a positive integer", part.trim())))?;
        out.push(v);
        col += part.chars().count() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::field::Field;

    #[test]
    fn element_digits_are_little_endian() {
        let f = ExtField::new(2, 2, 3).unwrap();
        let x = parse_received(&f, "100000").unwrap()[0][0];
        assert_eq!(x, f.one());
        let y = parse_received(&f, "001000").unwrap()[0][0];
        assert_eq!(y, f.basis(1));
        let z = parse_received(&f, "010000").unwrap()[0][0];
        assert_eq!(z, f.embed(f.base().from_coeffs(&[0, 1]).unwrap()));
    }

    #[test]
    fn received_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, r, m, blocks) in [(11, 1, 5, vec![5, 5]), (2, 4, 3, vec![3, 2, 1]), (3, 1, 2, vec![2, 2])] {
            let f = ExtField::new(p, r, m).unwrap();
            let part = LengthPartition::new(blocks).unwrap();
            let y = BlockVector::random(&f, part.clone(), &mut rng);
            let text = format_received(&f, &y);
            assert_eq!(parse_received_word(&f, &part, &text).unwrap(), y);
            let noisy = format!("# header\n\n{}", text.replace('\n', "   # note\n").to_uppercase());
            assert_eq!(parse_received_word(&f, &part, &noisy).unwrap(), y);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let f = ExtField::new(3, 1, 2).unwrap();
        let e = parse_received(&f, "01 12\n02  1x").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
        let e = parse_received(&f, "010").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let part = LengthPartition::new(vec![2, 2]).unwrap();
        assert!(parse_received_word(&f, &part, "01 12\n").is_err());
        assert!(parse_received_word(&f, &part, "01 12\n00").is_err());
    }

    #[test]
    fn rationals() {
        let half = parse_rational("2/4").unwrap();
        assert_eq!(format_rational(&half), "1/2");
        assert_eq!(format_rational(&parse_rational("3").unwrap()), "3/1");
        assert_eq!(format_rational(&parse_rational("-6/-4").unwrap()), "3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn sweeps() {
        assert_eq!(parse_ell_sweep("1,2, 4 ,5").unwrap(), vec![1, 2, 4, 5]);
        assert!(parse_ell_sweep("").unwrap().is_empty());
        let e = parse_ell_sweep("1,0").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(parse_ell_sweep("1,,2").is_err());
    }
}
