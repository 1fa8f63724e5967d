//! Byte-order-mark and UTF-8 based encoding detection.

use crate::error::InferenceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextEncoding {
    Utf8,
    Utf16Le,
    Utf16Be,
    Latin1,
}

impl TextEncoding {
    pub fn name(self) -> &'static str {
        match self {
            TextEncoding::Utf8 => "utf-8",
            TextEncoding::Utf16Le => "utf-16le",
            TextEncoding::Utf16Be => "utf-16be",
            TextEncoding::Latin1 => "latin-1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectedEncoding {
    pub encoding: TextEncoding,
    /// Length of the byte-order mark to skip before decoding.
    pub bom_len: usize,
    pub warning: Option<String>,
}

impl DetectedEncoding {
    pub fn name(&self) -> &'static str {
        self.encoding.name()
    }
}

pub fn detect_encoding(bytes: &[u8]) -> DetectedEncoding {
    let (encoding, bom_len) = match bytes {
        [0xEF, 0xBB, 0xBF, ..] => (TextEncoding::Utf8, 3),
        [0xFF, 0xFE, ..] => (TextEncoding::Utf16Le, 2),
        [0xFE, 0xFF, ..] => (TextEncoding::Utf16Be, 2),
        _ if std::str::from_utf8(bytes).is_ok() => (TextEncoding::Utf8, 0),
        _ => {
            return DetectedEncoding {
                encoding: TextEncoding::Latin1,
                bom_len: 0,
                warning: Some("content is not valid UTF-8; decoded as latin-1".to_string()),
            }
        }
    };
    DetectedEncoding {
        encoding,
        bom_len,
        warning: None,
    }
}

/// Decodes `bytes` with the detected encoding, dropping any byte-order mark.
pub fn decode(bytes: &[u8], detected: &DetectedEncoding) -> Result<String, InferenceError> {
    let body = &bytes[detected.bom_len..];
    match detected.encoding {
        TextEncoding::Utf8 => std::str::from_utf8(body)
            .map(str::to_owned)
            .map_err(|e| InferenceError::Undecodable(format!("invalid UTF-8 after byte-order mark: {e}"))),
        TextEncoding::Latin1 => Ok(body.iter().map(|&b| char::from(b)).collect()),
        TextEncoding::Utf16Le | TextEncoding::Utf16Be => {
            if body.len() % 2 != 0 {
                return Err(InferenceError::Undecodable("odd number of UTF-16 bytes".into()));
            }
            let units = body.chunks_exact(2).map(|pair| {
                let pair = [pair[0], pair[1]];
                if detected.encoding == TextEncoding::Utf16Le {
                    u16::from_le_bytes(pair)
                } else {
                    u16::from_be_bytes(pair)
                }
            });
            char::decode_utf16(units)
                .collect::<Result<String, _>>()
                .map_err(|e| InferenceError::Undecodable(format!("invalid UTF-16: {e}")))
        }
    }
}

/// Text that decodes but carries control characters other than tab, line
/// feed, carriage return and form feed is treated as binary.
pub fn looks_binary(text: &str) -> bool {
    text.chars()
        .any(|c| c < ' ' && !matches!(c, '\t' | '\n' | '\r' | '\x0c'))
}
