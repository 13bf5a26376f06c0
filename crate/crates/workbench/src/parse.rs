//! Text formats: hex words, `L|R` blocks and pair files.
//!
//! A pair file holds one directive per line; `#` starts a comment.
//!
//! ```text
//! width 16
//! c FFEE
//! pair CDF5|E8B4 BE3A|8ECF
//! pair C191|7CDD 544D|F9EA
//! pair D0C4|4EE7 63CB|541A
//! extra 6565|6877 ...
//! ```

use asr_core::attack::{ChosenPairSet, KnownPair};
use asr_core::cipher::FeistelSpec;
use asr_core::{Block, Word};

use crate::error::{CliError, CliResult};

pub fn parse_word(s: &str, width: u32) -> CliResult<Word> {
    let t = s.trim();
    let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    if t.is_empty() {
        return Err(CliError::input("empty hex word"));
    }
    let v = u32::from_str_radix(t, 16).map_err(|_| CliError::input(format!("'{s}' is not a hex word")))?;
    Word::new(v, width).map_err(|e| CliError::input(format!("'{s}': {e}")))
}

pub fn parse_block(s: &str, width: u32) -> CliResult<Block> {
    let (l, r) = s
        .split_once('|')
        .ok_or_else(|| CliError::input(format!("block '{s}' must be written L|R")))?;
    let b = Block::new(parse_word(l, width)?, parse_word(r, width)?);
    b.map_err(|e| CliError::input(format!("block '{s}': {e}")))
}

/// Master key as 4 words, either concatenated (`B0AEC7E9C3CEE6C3`) or
/// separated by spaces or commas.
pub fn parse_master(s: &str, width: u32) -> CliResult<[Word; 4]> {
    let parts: Vec<&str> = s.split([',', ' ']).filter(|p| !p.is_empty()).collect();
    let parts: Vec<String> = if parts.len() == 1 {
        let digits = width.div_ceil(4) as usize;
        let t = parts[0];
        if t.len() != 4 * digits || !t.is_ascii() {
            return Err(CliError::input(format!(
                "master key '{s}' needs 4 words of {digits} hex digits"
            )));
        }
        (0..4).map(|i| t[i * digits..(i + 1) * digits].to_string()).collect()
    } else {
        parts.iter().map(|p| p.to_string()).collect()
    };
    if parts.len() != 4 {
        return Err(CliError::input(format!("master key '{s}' needs exactly 4 words")));
    }
    let mut out = [Word::zero(width).map_err(CliError::from)?; 4];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = parse_word(p, width)?;
    }
    Ok(out)
}

pub fn parse_subkeys(s: &str, width: u32) -> CliResult<Vec<Word>> {
    s.split([',', ' '])
        .filter(|p| !p.is_empty())
        .map(|p| parse_word(p, width))
        .collect()
}

/// Parsed pair file, before rule validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFile {
    pub width: u32,
    pub constant: Word,
    pub pairs: Vec<KnownPair>,
    pub extras: Vec<KnownPair>,
}

impl PairFile {
    pub fn into_set(self, spec: &FeistelSpec) -> CliResult<ChosenPairSet> {
        let pairs: [KnownPair; 3] = self
            .pairs
            .try_into()
            .map_err(|v: Vec<KnownPair>| CliError::input(format!("need 3 rule pairs, found {}", v.len())))?;
        Ok(ChosenPairSet::new(self.constant, pairs, self.extras, spec)?)
    }
}

fn at(line: usize, col: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("line {line}, column {col}: {msg}"))
}

pub fn parse_pair_file(text: &str) -> CliResult<PairFile> {
    let mut width = None;
    let mut constant = None;
    let mut pairs = Vec::new();
    let mut extras = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut fields = Vec::new();
        let mut rest = body;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let end = tail.find(char::is_whitespace).unwrap_or(tail.len());
            fields.push((offset + start + 1, &tail[..end]));
            offset += start + end;
            rest = &tail[end..];
        }
        let Some(&(col, key)) = fields.first() else {
            continue;
        };
        let arg = |k: usize| -> CliResult<(usize, &str)> {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| at(line, col, format!("'{key}' expects {k} argument(s)")))
        };
        match key {
            "width" => {
                let (c, v) = arg(1)?;
                let w: u32 = v.parse().map_err(|_| at(line, c, format!("bad width '{v}'")))?;
                width = Some(w);
            }
            "c" | "pair" | "extra" => {
                let w = width.ok_or_else(|| at(line, col, "'width' must come first"))?;
                if key == "c" {
                    let (c, v) = arg(1)?;
                    constant = Some(parse_word(v, w).map_err(|e| at(line, c, e))?);
                    continue;
                }
                let (cp, p) = arg(1)?;
                let (cc, ct) = arg(2)?;
                let p = parse_block(p, w).map_err(|e| at(line, cp, e))?;
                let ct = parse_block(ct, w).map_err(|e| at(line, cc, e))?;
                let kp = KnownPair::new(p, ct).map_err(|e| at(line, cp, e))?;
                if key == "pair" {
                    pairs.push(kp);
                } else {
                    extras.push(kp);
                }
            }
            other => return Err(at(line, col, format!("unknown directive '{other}'"))),
        }
    }
    let width = width.ok_or_else(|| CliError::input("pair file has no 'width' line"))?;
    let constant = constant.ok_or_else(|| CliError::input("pair file has no 'c' line"))?;
    Ok(PairFile {
        width,
        constant,
        pairs,
        extras,
    })
}

pub fn format_pair_file(set: &ChosenPairSet) -> String {
    let c = set.constant_c();
    let mut s = format!("width {}\nc {c}\n", c.width());
    for p in set.pairs() {
        s += &format!("pair {} {}\n", p.plaintext, p.ciphertext);
    }
    for p in set.extras() {
        s += &format!("extra {} {}\n", p.plaintext, p.ciphertext);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_and_blocks() {
        assert_eq!(parse_word("0xFE40", 16).unwrap().value(), 0xFE40);
        assert_eq!(parse_block("CDF5|e8b4", 16).unwrap().halves(), (0xCDF5, 0xE8B4));
        assert!(parse_word("1FF", 8).is_err());
        assert!(parse_block("CDF5E8B4", 16).is_err());
        assert!(parse_word("xyz", 8).is_err());
    }

    #[test]
    fn master_forms() {
        let a = parse_master("B0AEC7E9C3CEE6C3", 16).unwrap();
        let b = parse_master("B0AE,C7E9,C3CE,E6C3", 16).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_master("A1B2", 4).unwrap()[3].value(), 2);
        assert!(parse_master("B0AEC7E9", 16).is_err());
    }

    #[test]
    fn pair_file_errors_carry_positions() {
        let e = parse_pair_file("width 16\nc FFEE\npair CDF5|E8B4 BE3A-8ECF\n").unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("line 3, column 16"), "{e}");
        let e = parse_pair_file("c FFEE\n").unwrap_err();
        assert!(e.to_string().contains("line 1, column 1"));
        let e = parse_pair_file("width 16\nfoo 1\n").unwrap_err();
        assert!(e.to_string().contains("unknown directive"));
    }

    #[test]
    fn pair_file_round_trip() {
        let text = "width 8 # toy\nc 3A\npair 01|02 03|04\n\npair 05|06 07|08\npair 09|0A 0B|0C\nextra 0D|0E 0F|10\n";
        let f = parse_pair_file(text).unwrap();
        assert_eq!(f.pairs.len(), 3);
        assert_eq!(f.extras.len(), 1);
        assert_eq!(f.constant.value(), 0x3A);
    }
}
