// SPDX-License-Identifier: Apache-2.0

//! The `.wpk` file: a 22-byte header binding the payload to its dictionary,
//! then the payload, optionally deflated.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "WPK1"
//!      4     1  version (1)
//!      5     1  flags (bit 0: second stage applied)
//!      6     8  dictionary digest, big-endian
//!     14     8  payload bit length up to END_OF_STREAM, big-endian
//!     22     …  body
//! ```

use std::io::{Read, Write};

use flate2::read::DeflateDecoder;
use flate2::write::DeflateEncoder;
use flate2::Compression;

use crate::bitstream::BitBuffer;
use crate::codec::{self, EncodeOptions, Payload};
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::tokenizer;

pub const MAGIC: &[u8; 4] = b"WPK1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 22;
pub const FLAG_SECOND_STAGE: u8 = 0b1;

/// General-purpose byte compressor applied to the payload.
///
/// `inflate(&deflate(x), x.len())` must return `x`.
pub trait SecondStage {
    fn deflate(&self, data: &[u8]) -> Vec<u8>;

    /// Decompresses `data`, which must expand to exactly `expected_len` bytes.
    fn inflate(&self, data: &[u8], expected_len: usize) -> Result<Vec<u8>>;
}

/// Raw RFC 1951 streams, no zlib or gzip wrapper.
#[derive(Debug, Clone, Copy)]
pub struct Deflate {
    pub level: u32,
}

impl Default for Deflate {
    fn default() -> Self {
        Self { level: 9 }
    }
}

impl SecondStage for Deflate {
    fn deflate(&self, data: &[u8]) -> Vec<u8> {
        let mut enc = DeflateEncoder::new(Vec::new(), Compression::new(self.level));
        enc.write_all(data).expect("writing to a Vec");
        enc.finish().expect("writing to a Vec")
    }

    fn inflate(&self, data: &[u8], expected_len: usize) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(expected_len);
        DeflateDecoder::new(data)
            .take(expected_len as u64 + 1)
            .read_to_end(&mut out)
            .map_err(|e| Error::Corrupt(format!("inflate: {e}")))?;
        if out.len() != expected_len {
            return Err(Error::Truncated(format!(
                "body inflates to {} bytes, header promises {expected_len}",
                out.len()
            )));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub flags: u8,
    pub dict_digest: u64,
    pub payload_bit_length: u64,
    pub body: Vec<u8>,
}

impl Container {
    pub fn second_stage(&self) -> bool {
        self.flags & FLAG_SECOND_STAGE != 0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.body.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.flags);
        out.extend_from_slice(&self.dict_digest.to_be_bytes());
        out.extend_from_slice(&self.payload_bit_length.to_be_bytes());
        out.extend_from_slice(&self.body);
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Container> {
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(Error::Format("not a wordpack container".into()));
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::Truncated(format!(
                "{}-byte file is shorter than the header",
                bytes.len()
            )));
        }
        if bytes[4] != VERSION {
            return Err(Error::Format(format!("unsupported version {}", bytes[4])));
        }
        let flags = bytes[5];
        if flags & !FLAG_SECOND_STAGE != 0 {
            return Err(Error::Format(format!("unknown flags {flags:#04x}")));
        }
        Ok(Container {
            flags,
            dict_digest: u64::from_be_bytes(bytes[6..14].try_into().unwrap()),
            payload_bit_length: u64::from_be_bytes(bytes[14..22].try_into().unwrap()),
            body: bytes[HEADER_LEN..].to_vec(),
        })
    }
}

/// Output of [`compress_detailed`]: the file plus the payload statistics.
#[derive(Debug, Clone)]
pub struct Compressed {
    pub container: Container,
    pub payload: Payload,
    pub tokens: Vec<tokenizer::Token>,
}

impl Compressed {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.container.to_bytes()
    }
}

pub fn compress(text: &[u8], dict: &Dictionary, opts: EncodeOptions) -> Result<Vec<u8>> {
    Ok(compress_detailed(text, dict, opts, &Deflate::default())?.to_bytes())
}

pub fn compress_detailed(
    text: &[u8],
    dict: &Dictionary,
    opts: EncodeOptions,
    stage: &dyn SecondStage,
) -> Result<Compressed> {
    let tokens = tokenizer::tokenize(text);
    let payload = codec::encode(&tokens, dict)?;
    let bytes = payload.bits.as_bytes();
    let (flags, body) = if opts.second_stage {
        (FLAG_SECOND_STAGE, stage.deflate(bytes))
    } else {
        (0, bytes.to_vec())
    };
    Ok(Compressed {
        container: Container {
            flags,
            dict_digest: dict.digest(),
            payload_bit_length: payload.framed_bits() as u64,
            body,
        },
        payload,
        tokens,
    })
}

pub fn decompress(bytes: &[u8], dict: &Dictionary) -> Result<Vec<u8>> {
    decompress_with(bytes, dict, &Deflate::default())
}

pub fn decompress_with(
    bytes: &[u8],
    dict: &Dictionary,
    stage: &dyn SecondStage,
) -> Result<Vec<u8>> {
    let c = Container::parse(bytes)?;
    if c.dict_digest != dict.digest() {
        return Err(Error::WrongDictionary {
            expected: c.dict_digest,
            found: dict.digest(),
        });
    }
    let bit_len = usize::try_from(c.payload_bit_length)
        .map_err(|_| Error::Corrupt("payload length overflows".into()))?;
    let byte_len = bit_len.div_ceil(8);
    let payload = if c.second_stage() {
        stage.inflate(&c.body, byte_len)?
    } else {
        if c.body.len() != byte_len {
            return Err(Error::Truncated(format!(
                "body holds {} bytes, header promises {byte_len}",
                c.body.len()
            )));
        }
        c.body
    };
    let bits = BitBuffer::from_parts(payload, bit_len)?;
    let tokens = codec::decode(&bits, dict)?;
    tokenizer::detokenize(&tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dict() -> Dictionary {
        Dictionary::build(["a", "b", "the", "cat"]).unwrap()
    }

    const PLAIN: EncodeOptions = EncodeOptions {
        second_stage: false,
    };
    const DEFLATED: EncodeOptions = EncodeOptions { second_stage: true };

    #[test]
    fn empty_input() {
        let c = compress(b"", &dict(), PLAIN).unwrap();
        assert_eq!(c.len(), HEADER_LEN + 3);
        assert_eq!(&c[14..22], &19u64.to_be_bytes());
        assert_eq!(decompress(&c, &dict()).unwrap(), b"");
    }

    #[test]
    fn header_layout() {
        let d = dict();
        let c = compress(b"The cat.", &d, DEFLATED).unwrap();
        assert_eq!(&c[..4], b"WPK1");
        assert_eq!(c[4], 1);
        assert_eq!(c[5], 1);
        assert_eq!(&c[6..14], &d.digest().to_be_bytes());
        assert_eq!(&c[14..22], &(3 * 19u64 + 19).to_be_bytes());
        assert_eq!(decompress(&c, &d).unwrap(), b"The cat.");
    }

    #[test]
    fn rejects_bad_containers() {
        let d = dict();
        let good = compress(b"the cat", &d, PLAIN).unwrap();

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decompress(&bad, &d), Err(Error::Format(_))));
        let mut bad = good.clone();
        bad[4] = 9;
        assert!(matches!(decompress(&bad, &d), Err(Error::Format(_))));
        let mut bad = good.clone();
        bad[5] = 0x80;
        assert!(matches!(decompress(&bad, &d), Err(Error::Format(_))));

        let other = Dictionary::build(["a"]).unwrap();
        assert!(matches!(
            decompress(&good, &other),
            Err(Error::WrongDictionary { .. })
        ));

        assert!(matches!(
            decompress(&good[..good.len() - 1], &d),
            Err(Error::Truncated(_))
        ));
        assert!(matches!(
            decompress(&good[..10], &d),
            Err(Error::Truncated(_))
        ));

        let deflated = compress(b"the cat", &d, DEFLATED).unwrap();
        let mut bad = deflated.clone();
        bad[HEADER_LEN] = 0xFF;
        assert!(matches!(
            decompress(&bad, &d),
            Err(Error::Corrupt(_) | Error::Truncated(_))
        ));
        // garbage that still inflates: a stored block of the wrong length
        let mut bad = deflated[..HEADER_LEN].to_vec();
        bad.extend_from_slice(&Deflate::default().deflate(&[0u8; 1]));
        assert!(matches!(decompress(&bad, &d), Err(Error::Truncated(_))));
    }

    #[test]
    fn second_stage_contract() {
        let stage = Deflate::default();
        for data in [&b""[..], b"x", &[0u8; 5000], b"the cat the cat the cat"] {
            assert_eq!(
                stage.inflate(&stage.deflate(data), data.len()).unwrap(),
                data
            );
        }
    }

    proptest! {
        #[test]
        fn round_trip_any_bytes(text in prop::collection::vec(any::<u8>(), 0..300), second in any::<bool>()) {
            let d = dict();
            let opts = EncodeOptions { second_stage: second };
            let c = compress(&text, &d, opts).unwrap();
            prop_assert_eq!(decompress(&c, &d).unwrap(), text);
        }

        #[test]
        fn deflate_inflate_identity(data in prop::collection::vec(any::<u8>(), 0..2000)) {
            let stage = Deflate::default();
            prop_assert_eq!(stage.inflate(&stage.deflate(&data), data.len()).unwrap(), data);
        }
    }
}
