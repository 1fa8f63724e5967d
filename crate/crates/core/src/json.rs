//! Strict JSON reading with JSON Pointer locations.
//!
//! `serde_json::Value` silently keeps the last of two duplicate keys, so
//! documents are first read through [`parse_strict`], which rejects
//! duplicates, and then converted to typed records with [`Record`], which
//! tracks the pointer of every value it touches.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, DeserializeSeed, MapAccess, SeqAccess, Visitor};
use serde_json::{Map, Number, Value};

use crate::error::JsonError;

/// Unknown keys of a record, kept for lossless re-serialization.
pub type Extra = BTreeMap<String, Value>;

/// Escapes one reference token per RFC 6901.
pub fn escape_token(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

/// Appends a token to a pointer.
pub fn join(pointer: &str, token: impl fmt::Display) -> String {
    format!("{pointer}/{}", escape_token(&token.to_string()))
}

/// Splits a pointer into unescaped tokens. `None` when the syntax is invalid.
pub fn split_pointer(pointer: &str) -> Option<Vec<String>> {
    if pointer.is_empty() {
        return Some(Vec::new());
    }
    let rest = pointer.strip_prefix('/')?;
    rest.split('/').map(unescape_token).collect()
}

fn unescape_token(raw: &str) -> Option<String> {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars();
    while let Some(c) = chars.next() {
        if c == '~' {
            match chars.next() {
                Some('0') => out.push('~'),
                Some('1') => out.push('/'),
                _ => return None,
            }
        } else {
            out.push(c);
        }
    }
    Some(out)
}

pub fn kind_name(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

/// Parses JSON text, rejecting duplicate object keys.
pub fn parse_strict(text: &str) -> Result<Value, JsonError> {
    let duplicate = RefCell::new(None);
    let mut de = serde_json::Deserializer::from_str(text);
    let seed = StrictValue {
        pointer: String::new(),
        duplicate: &duplicate,
    };
    let result = seed.deserialize(&mut de).and_then(|v| de.end().map(|()| v));
    result.map_err(|err| match duplicate.into_inner() {
        Some((pointer, key)) => JsonError::DuplicateKey {
            pointer,
            key,
            line: err.line(),
            column: err.column(),
        },
        None => JsonError::Syntax {
            message: strip_location(&err.to_string()),
            line: err.line(),
            column: err.column(),
        },
    })
}

fn strip_location(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(idx) => message[..idx].to_string(),
        None => message.to_string(),
    }
}

struct StrictValue<'a> {
    pointer: String,
    duplicate: &'a RefCell<Option<(String, String)>>,
}

impl<'de> DeserializeSeed<'de> for StrictValue<'_> {
    type Value = Value;

    fn deserialize<D: de::Deserializer<'de>>(self, deserializer: D) -> Result<Value, D::Error> {
        deserializer.deserialize_any(self)
    }
}

impl<'de> Visitor<'de> for StrictValue<'_> {
    type Value = Value;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("any JSON value")
    }

    fn visit_bool<E>(self, v: bool) -> Result<Value, E> {
        Ok(Value::Bool(v))
    }

    fn visit_i64<E>(self, v: i64) -> Result<Value, E> {
        Ok(Value::Number(v.into()))
    }

    fn visit_u64<E>(self, v: u64) -> Result<Value, E> {
        Ok(Value::Number(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Value, E> {
        Number::from_f64(v)
            .map(Value::Number)
            .ok_or_else(|| E::custom("non-finite number"))
    }

    fn visit_str<E>(self, v: &str) -> Result<Value, E> {
        Ok(Value::String(v.to_owned()))
    }

    fn visit_string<E>(self, v: String) -> Result<Value, E> {
        Ok(Value::String(v))
    }

    fn visit_unit<E>(self) -> Result<Value, E> {
        Ok(Value::Null)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Value, A::Error> {
        let mut items = Vec::new();
        loop {
            let seed = StrictValue {
                pointer: join(&self.pointer, items.len()),
                duplicate: self.duplicate,
            };
            match seq.next_element_seed(seed)? {
                Some(v) => items.push(v),
                None => break,
            }
        }
        Ok(Value::Array(items))
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Value, A::Error> {
        let mut out = Map::new();
        while let Some(key) = map.next_key::<String>()? {
            if out.contains_key(&key) {
                *self.duplicate.borrow_mut() = Some((self.pointer.clone(), key.clone()));
                return Err(de::Error::custom(format!("duplicate key \"{key}\"")));
            }
            let seed = StrictValue {
                pointer: join(&self.pointer, &key),
                duplicate: self.duplicate,
            };
            let value = map.next_value_seed(seed)?;
            out.insert(key, value);
        }
        Ok(Value::Object(out))
    }
}

/// Conversion from a JSON value located at `pointer`.
pub trait FromJson: Sized {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError>;
}

impl FromJson for String {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        match value {
            Value::String(s) => Ok(s),
            other => Err(wrong_kind(pointer, "string", &other)),
        }
    }
}

impl FromJson for bool {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        match value {
            Value::Bool(b) => Ok(b),
            other => Err(wrong_kind(pointer, "boolean", &other)),
        }
    }
}

impl FromJson for u64 {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        match value.as_u64() {
            Some(n) => Ok(n),
            None => Err(wrong_kind(pointer, "non-negative integer", &value)),
        }
    }
}

impl FromJson for Value {
    fn from_json(value: Value, _pointer: &str) -> Result<Self, JsonError> {
        Ok(value)
    }
}

impl<T: FromJson> FromJson for Vec<T> {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        match value {
            Value::Array(items) => items
                .into_iter()
                .enumerate()
                .map(|(i, item)| T::from_json(item, &join(pointer, i)))
                .collect(),
            other => Err(wrong_kind(pointer, "array", &other)),
        }
    }
}

pub fn wrong_kind(pointer: &str, expected: &'static str, found: &Value) -> JsonError {
    JsonError::WrongKind {
        pointer: pointer.to_string(),
        expected,
        found: kind_name(found),
    }
}

/// Closed string enumerations.
pub trait StrEnum: Sized + Copy + 'static {
    const VARIANTS: &'static [Self];
    fn as_str(self) -> &'static str;

    fn from_name(name: &str) -> Option<Self> {
        Self::VARIANTS.iter().copied().find(|v| v.as_str() == name)
    }

    fn allowed() -> String {
        Self::VARIANTS
            .iter()
            .map(|v| v.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Declares a closed string enum with `Serialize` and `FromJson` impls.
macro_rules! str_enum {
    ($(#[$meta:meta])* pub enum $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name { $($variant),+ }

        impl $crate::json::StrEnum for $name {
            const VARIANTS: &'static [Self] = &[$(Self::$variant),+];
            fn as_str(self) -> &'static str {
                match self { $(Self::$variant => $text),+ }
            }
        }

        impl $name {
            pub fn as_str(self) -> &'static str {
                <Self as $crate::json::StrEnum>::as_str(self)
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <Self as $crate::json::StrEnum>::from_name(s).ok_or_else(|| {
                    format!("\"{s}\" is not one of: {}", <Self as $crate::json::StrEnum>::allowed())
                })
            }
        }

        impl ::serde::Serialize for $name {
            fn serialize<S: ::serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl $crate::json::FromJson for $name {
            fn from_json(
                value: ::serde_json::Value,
                pointer: &str,
            ) -> Result<Self, $crate::error::JsonError> {
                let text = String::from_json(value, pointer)?;
                <Self as $crate::json::StrEnum>::from_name(&text).ok_or_else(|| {
                    $crate::error::JsonError::InvalidEnum {
                        pointer: pointer.to_string(),
                        value: text,
                        allowed: <Self as $crate::json::StrEnum>::allowed(),
                    }
                })
            }
        }
    };
}
pub(crate) use str_enum;

/// Typed field access over one JSON object. Keys are removed as they are
/// read; whatever remains at the end is the record's unknown-key map.
pub struct Record {
    pointer: String,
    map: Map<String, Value>,
}

impl Record {
    pub fn new(value: Value, pointer: &str) -> Result<Self, JsonError> {
        match value {
            Value::Object(map) => Ok(Self {
                pointer: pointer.to_string(),
                map,
            }),
            other => Err(wrong_kind(pointer, "object", &other)),
        }
    }

    pub fn pointer(&self) -> &str {
        &self.pointer
    }

    pub fn required<T: FromJson>(&mut self, key: &str) -> Result<T, JsonError> {
        match self.map.remove(key) {
            Some(v) => T::from_json(v, &join(&self.pointer, key)),
            None => Err(JsonError::MissingKey {
                pointer: self.pointer.clone(),
                key: key.to_string(),
            }),
        }
    }

    pub fn optional<T: FromJson>(&mut self, key: &str) -> Result<Option<T>, JsonError> {
        self.map
            .remove(key)
            .map(|v| T::from_json(v, &join(&self.pointer, key)))
            .transpose()
    }

    pub fn or_default<T: FromJson + Default>(&mut self, key: &str) -> Result<T, JsonError> {
        Ok(self.optional(key)?.unwrap_or_default())
    }

    /// Fails on any key that was not read.
    pub fn deny_unknown(self) -> Result<(), JsonError> {
        match self.map.into_iter().next() {
            None => Ok(()),
            Some((key, _)) => Err(JsonError::UnknownKey {
                pointer: self.pointer,
                key,
            }),
        }
    }

    pub fn finish(self) -> Extra {
        self.map.into_iter().collect()
    }
}
