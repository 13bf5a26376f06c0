use core::fmt;
use core::ops::{BitAnd, BitXor};

use crate::{Error, Result};

pub const MIN_WIDTH: u32 = 3;
pub const MAX_WIDTH: u32 = 16;

pub(crate) fn mask(width: u32) -> u16 {
    if width >= 16 {
        u16::MAX
    } else {
        (1u16 << width) - 1
    }
}

/// Cyclic left rotation of the low `width` bits of `x`.
#[inline]
pub(crate) fn rotl_raw(x: u16, c: u32, width: u32) -> u16 {
    if c == 0 {
        return x;
    }
    let m = mask(width);
    ((x << c) | (x >> (width - c))) & m
}

/// A half-block: an unsigned value interpreted as a `width`-bit vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    value: u16,
    width: u8,
}

impl Word {
    pub fn new(value: u32, width: u32) -> Result<Self> {
        if !(MIN_WIDTH..=MAX_WIDTH).contains(&width) {
            return Err(Error::UnsupportedWidth(width));
        }
        if value > mask(width) as u32 {
            return Err(Error::ValueTooWide { value, width });
        }
        Ok(Word {
            value: value as u16,
            width: width as u8,
        })
    }

    /// Builds a word from the low `width` bits of `value`; `width` must be valid.
    pub(crate) fn truncating(value: u16, width: u32) -> Self {
        debug_assert!((MIN_WIDTH..=MAX_WIDTH).contains(&width));
        Word {
            value: value & mask(width),
            width: width as u8,
        }
    }

    pub fn zero(width: u32) -> Result<Self> {
        Word::new(0, width)
    }

    pub fn value(self) -> u16 {
        self.value
    }

    pub fn width(self) -> u32 {
        self.width as u32
    }

    pub fn check_width(self, expected: u32) -> Result<()> {
        if self.width() != expected {
            return Err(Error::WidthMismatch {
                expected,
                actual: self.width(),
            });
        }
        Ok(())
    }

    /// Parses a binary string, most significant bit first. Spaces are ignored,
    /// the width is the number of digits.
    pub fn from_bin(s: &str) -> Result<Self> {
        let mut value = 0u32;
        let mut width = 0u32;
        for ch in s.chars().filter(|c| !c.is_whitespace()) {
            let bit = match ch {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::param(alloc::format!("bad binary digit {ch:?}"))),
            };
            value = (value << 1) | bit;
            width += 1;
            if width > MAX_WIDTH {
                return Err(Error::UnsupportedWidth(width));
            }
        }
        Word::new(value, width)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self} @{})", self.width)
    }
}

/// Hex, most significant digit first, zero padded to the word width.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.width as usize).div_ceil(4);
        write!(f, "{:0width$X}", self.value, width = digits)
    }
}

impl BitXor for Word {
    type Output = Word;

    fn bitxor(self, rhs: Word) -> Word {
        assert_eq!(self.width, rhs.width, "xor of words with different widths");
        Word {
            value: self.value ^ rhs.value,
            width: self.width,
        }
    }
}

impl BitAnd for Word {
    type Output = Word;

    fn bitand(self, rhs: Word) -> Word {
        assert_eq!(self.width, rhs.width, "and of words with different widths");
        Word {
            value: self.value & rhs.value,
            width: self.width,
        }
    }
}

/// Cyclic left rotation of `x` by `c` bits within its width.
pub fn rotl(x: Word, c: u32) -> Result<Word> {
    if c >= x.width() {
        return Err(Error::param(alloc::format!(
            "rotation {c} not below width {}",
            x.width()
        )));
    }
    Ok(Word {
        value: rotl_raw(x.value, c, x.width()),
        width: x.width,
    })
}

/// A full block `(left, right)`; both halves share one width.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    left: Word,
    right: Word,
}

impl Block {
    pub fn new(left: Word, right: Word) -> Result<Self> {
        right.check_width(left.width())?;
        Ok(Block { left, right })
    }

    pub fn from_raw(left: u32, right: u32, width: u32) -> Result<Self> {
        Block::new(Word::new(left, width)?, Word::new(right, width)?)
    }

    pub(crate) fn from_raw_unchecked(left: u16, right: u16, width: u32) -> Self {
        Block {
            left: Word::truncating(left, width),
            right: Word::truncating(right, width),
        }
    }

    pub fn left(self) -> Word {
        self.left
    }

    pub fn right(self) -> Word {
        self.right
    }

    pub fn halves(self) -> (u16, u16) {
        (self.left.value, self.right.value)
    }

    /// Half-block width; the block size is twice this.
    pub fn width(self) -> u32 {
        self.left.width()
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block({self})")
    }
}

/// `L|R` in hex.
impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.left, self.right)
    }
}
