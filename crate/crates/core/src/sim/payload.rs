use bitvec::prelude::*;

/// Bits a node keeps from preprocessing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Payload {
    bits: BitVec<u8, Lsb0>,
}

impl Payload {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `width` bits of `value`.
    pub fn push(&mut self, value: u64, width: usize) {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value >> width == 0, "{value} does not fit in {width} bits");
        for i in 0..width {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    pub fn with(mut self, value: u64, width: usize) -> Self {
        self.push(value, width);
        self
    }

    /// Appends another payload's bits.
    pub fn extend(&mut self, other: &Payload) {
        self.bits.extend_from_bitslice(&other.bits);
    }

    pub fn len_bits(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn read(&self, offset: usize, width: usize) -> u64 {
        self.bits[offset..offset + width]
            .iter()
            .enumerate()
            .fold(0, |acc, (i, b)| acc | ((*b as u64) << i))
    }

    pub fn slice(&self, offset: usize, width: usize) -> Payload {
        Payload { bits: self.bits[offset..offset + width].to_bitvec() }
    }

    pub fn reader(&self) -> PayloadReader<'_> {
        PayloadReader { payload: self, pos: 0 }
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.bits.as_raw_slice()
    }
}

/// Sequential reader over a payload.
pub struct PayloadReader<'a> {
    payload: &'a Payload,
    pos: usize,
}

impl PayloadReader<'_> {
    pub fn take(&mut self, width: usize) -> u64 {
        let v = self.payload.read(self.pos, width);
        self.pos += width;
        v
    }

    pub fn rest(&mut self) -> Payload {
        let p = self.payload.slice(self.pos, self.payload.len_bits() - self.pos);
        self.pos = self.payload.len_bits();
        p
    }
}

/// Bits needed to store values in `0..count`.
pub fn bits_for(count: usize) -> usize {
    if count <= 1 {
        0
    } else {
        (usize::BITS - (count - 1).leading_zeros()) as usize
    }
}

/// Per-vertex payloads produced by preprocessing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreprocessedState {
    payloads: Vec<Payload>,
}

impl PreprocessedState {
    pub fn new(payloads: Vec<Payload>) -> Self {
        PreprocessedState { payloads }
    }

    pub fn payload(&self, v: usize) -> &Payload {
        &self.payloads[v]
    }

    pub fn len(&self) -> usize {
        self.payloads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payloads.is_empty()
    }

    /// Largest payload in bits (the per-node storage cost).
    pub fn s_sup_bits(&self) -> usize {
        self.payloads.iter().map(Payload::len_bits).max().unwrap_or(0)
    }
}
