//! Scalar value types accepted as field input.
//!
//! The approximated field keeps the numeric type of the input, so integer
//! fields quantize folded values (midpoints round toward negative infinity)
//! and can develop plateaus that the monotony offsets disambiguate. All
//! error and metric arithmetic happens in `f64`.

use std::fmt;

/// Type tag for the supported raw payload formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarType {
    F32,
    F64,
    I8,
    I16,
    I32,
    I64,
    U8,
    U16,
    U32,
    U64,
}

impl ScalarType {
    pub fn parse(tag: &str) -> Option<ScalarType> {
        Some(match tag {
            "f32" => ScalarType::F32,
            "f64" => ScalarType::F64,
            "i8" => ScalarType::I8,
            "i16" => ScalarType::I16,
            "i32" => ScalarType::I32,
            "i64" => ScalarType::I64,
            "u8" => ScalarType::U8,
            "u16" => ScalarType::U16,
            "u32" => ScalarType::U32,
            "u64" => ScalarType::U64,
            _ => return None,
        })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ScalarType::F32 => "f32",
            ScalarType::F64 => "f64",
            ScalarType::I8 => "i8",
            ScalarType::I16 => "i16",
            ScalarType::I32 => "i32",
            ScalarType::I64 => "i64",
            ScalarType::U8 => "u8",
            ScalarType::U16 => "u16",
            ScalarType::U32 => "u32",
            ScalarType::U64 => "u64",
        }
    }

    /// Payload width of one value in bytes.
    pub fn width(&self) -> usize {
        match self {
            ScalarType::I8 | ScalarType::U8 => 1,
            ScalarType::I16 | ScalarType::U16 => 2,
            ScalarType::F32 | ScalarType::I32 | ScalarType::U32 => 4,
            ScalarType::F64 | ScalarType::I64 | ScalarType::U64 => 8,
        }
    }
}

impl fmt::Display for ScalarType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A field value type: ordered, convertible to `f64`, with a midpoint that
/// stays in the type (integers floor toward negative infinity).
pub trait Scalar:
    Copy + PartialEq + PartialOrd + Send + Sync + fmt::Debug + fmt::Display + 'static
{
    const TYPE: ScalarType;

    fn midpoint(a: Self, b: Self) -> Self;
    fn to_f64(self) -> f64;
    fn read_le(bytes: &[u8]) -> Self;
    fn write_le(self, out: &mut Vec<u8>);

    fn is_finite_value(self) -> bool {
        true
    }
}

macro_rules! int_scalar {
    ($ty:ty, $wide:ty, $tag:expr) => {
        impl Scalar for $ty {
            const TYPE: ScalarType = $tag;

            #[inline]
            fn midpoint(a: Self, b: Self) -> Self {
                ((a as $wide + b as $wide).div_euclid(2)) as $ty
            }

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }

            fn read_le(bytes: &[u8]) -> Self {
                <$ty>::from_le_bytes(bytes.try_into().expect("width-checked slice"))
            }

            fn write_le(self, out: &mut Vec<u8>) {
                out.extend_from_slice(&self.to_le_bytes());
            }
        }
    };
}

int_scalar!(i8, i32, ScalarType::I8);
int_scalar!(i16, i32, ScalarType::I16);
int_scalar!(i32, i64, ScalarType::I32);
int_scalar!(i64, i128, ScalarType::I64);
int_scalar!(u8, u32, ScalarType::U8);
int_scalar!(u16, u32, ScalarType::U16);
int_scalar!(u32, u64, ScalarType::U32);
int_scalar!(u64, u128, ScalarType::U64);

impl Scalar for f32 {
    const TYPE: ScalarType = ScalarType::F32;

    #[inline]
    fn midpoint(a: Self, b: Self) -> Self {
        ((a as f64 + b as f64) * 0.5) as f32
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }

    fn read_le(bytes: &[u8]) -> Self {
        f32::from_le_bytes(bytes.try_into().expect("width-checked slice"))
    }

    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f64 {
    const TYPE: ScalarType = ScalarType::F64;

    #[inline]
    fn midpoint(a: Self, b: Self) -> Self {
        a * 0.5 + b * 0.5
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    fn read_le(bytes: &[u8]) -> Self {
        f64::from_le_bytes(bytes.try_into().expect("width-checked slice"))
    }

    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}
