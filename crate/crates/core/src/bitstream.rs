// SPDX-License-Identifier: Apache-2.0

//! MSB-first bit packing.
//!
//! A [`BitBuffer`] accumulates fields of 1 to 32 bits each. The first bit
//! written lands in the most significant bit of the first byte, so a hex dump
//! of a payload reads left to right in write order regardless of host
//! endianness.

use crate::error::{Error, Result};

pub const MAX_WIDTH: u32 = 32;

/// Growable bit sequence. Bits past `bit_len` in the final byte are always zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitBuffer {
    bytes: Vec<u8>,
    bit_len: usize,
}

fn check_width(width: u32) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        return Err(Error::Width(width));
    }
    Ok(())
}

impl BitBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            bit_len: 0,
        }
    }

    /// Wraps existing bytes holding `bit_len` valid bits.
    ///
    /// Fails with a truncation error when the bytes are too short and with a
    /// corruption error when there are surplus bytes or nonzero padding bits.
    pub fn from_parts(bytes: Vec<u8>, bit_len: usize) -> Result<Self> {
        let need = bit_len.div_ceil(8);
        if bytes.len() < need {
            return Err(Error::Truncated(format!(
                "{} bits need {need} bytes, have {}",
                bit_len,
                bytes.len()
            )));
        }
        if bytes.len() > need {
            return Err(Error::Corrupt(format!(
                "{} surplus bytes after {bit_len} bits",
                bytes.len() - need
            )));
        }
        let tail = bit_len % 8;
        if tail != 0 {
            let last = bytes[need - 1];
            if last & (0xFF >> tail) != 0 {
                return Err(Error::Corrupt("nonzero padding bits".into()));
            }
        }
        Ok(Self { bytes, bit_len })
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn is_empty(&self) -> bool {
        self.bit_len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u32, width: u32) -> Result<()> {
        check_width(width)?;
        if width < 32 && value >> width != 0 {
            return Err(Error::Range { value, width });
        }
        let mut remaining = width;
        while remaining > 0 {
            let used = (self.bit_len % 8) as u32;
            if used == 0 {
                self.bytes.push(0);
            }
            let free = 8 - used;
            let take = free.min(remaining);
            let chunk = (value >> (remaining - take)) & ((1u32 << take) - 1);
            let last = self.bytes.last_mut().expect("byte pushed above");
            *last |= (chunk << (free - take)) as u8;
            remaining -= take;
            self.bit_len += take as usize;
        }
        Ok(())
    }

    pub fn write_bit(&mut self, bit: bool) {
        self.write_bits(bit as u32, 1)
            .expect("1-bit write is always in range");
    }

    /// Zero-fills to the next byte boundary and returns how many bits were added.
    pub fn pad_to_byte(&mut self) -> u32 {
        let pad = ((8 - self.bit_len % 8) % 8) as u32;
        // the pad bits already sit zeroed inside the last byte
        self.bit_len += pad as usize;
        pad
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader::new(self)
    }
}

/// Cursor over a [`BitBuffer`].
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    buf: &'a BitBuffer,
    cursor: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(buf: &'a BitBuffer) -> Self {
        Self { buf, cursor: 0 }
    }

    pub fn position(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.buf.bit_len - self.cursor
    }

    /// Reads `width` bits starting at the cursor and advances past them.
    pub fn read_bits(&mut self, width: u32) -> Result<u32> {
        check_width(width)?;
        if self.remaining() < width as usize {
            return Err(Error::Truncated(format!(
                "read of {width} bits at offset {} past end of {}-bit stream",
                self.cursor, self.buf.bit_len
            )));
        }
        let bytes = &self.buf.bytes;
        let mut value = 0u64;
        let mut remaining = width;
        while remaining > 0 {
            let byte = bytes[self.cursor / 8];
            let offset = (self.cursor % 8) as u32;
            let avail = 8 - offset;
            let take = avail.min(remaining);
            let chunk = (byte >> (avail - take)) & ((1u16 << take) - 1) as u8;
            value = (value << take) | chunk as u64;
            remaining -= take;
            self.cursor += take as usize;
        }
        Ok(value as u32)
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        Ok(self.read_bits(1)? == 1)
    }
}
