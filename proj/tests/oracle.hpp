// SPDX-License-Identifier: Apache-2.0
//
// Reference models used by the tests. Nothing here calls into the library's
// shape or evaluation code.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "socgen/fhdl.hpp"

namespace oracle {

inline int64_t min_of(int width, bool is_signed) { return is_signed ? -(int64_t{1} << (width - 1)) : 0; }
inline int64_t max_of(int width, bool is_signed) {
  return is_signed ? (int64_t{1} << (width - 1)) - 1 : (int64_t{1} << width) - 1;
}

inline bool in_range(int64_t v, int width, bool is_signed) {
  return v >= min_of(width, is_signed) && v <= max_of(width, is_signed);
}

// Every value representable with the given width and signedness.
inline std::vector<int64_t> all_values(int width, bool is_signed) {
  std::vector<int64_t> out;
  for (int64_t v = min_of(width, is_signed); v <= max_of(width, is_signed); ++v) out.push_back(v);
  return out;
}

inline uint64_t raw_bits(int64_t v, int width) {
  return static_cast<uint64_t>(v) & (width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1);
}

// Integer semantics of each operator on mathematical values.
inline int64_t binary(socgen::BinaryOp op, int64_t a, int64_t b, int b_width) {
  using socgen::BinaryOp;
  switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::And: return a & b;
    case BinaryOp::Or: return a | b;
    case BinaryOp::Xor: return a ^ b;
    case BinaryOp::Shl: {
      // the shift amount is the operand's bit pattern
      const uint64_t amount = raw_bits(b, b_width);
      int64_t r = a;
      for (uint64_t i = 0; i < amount; ++i) r *= 2;
      return r;
    }
    case BinaryOp::Shr: {
      const uint64_t amount = raw_bits(b, b_width);
      int64_t r = a;
      for (uint64_t i = 0; i < amount; ++i) r = (r >= 0) ? r / 2 : -((-r + 1) / 2);
      return r;
    }
    case BinaryOp::Eq: return a == b;
    case BinaryOp::Ne: return a != b;
    case BinaryOp::Lt: return a < b;
    case BinaryOp::Le: return a <= b;
    case BinaryOp::Gt: return a > b;
    case BinaryOp::Ge: return a >= b;
  }
  return 0;
}

inline int64_t bitwise_not(int64_t a, int width, bool is_signed) {
  return is_signed ? -a - 1 : max_of(width, false) - a;
}

// Software model of the blinker: returns led after each of `ticks` ticks.
inline std::vector<int> blinker_leds(int64_t preload, int ticks) {
  std::vector<int> out;
  int64_t counter = 0;
  int led = 0;
  for (int t = 0; t < ticks; ++t) {
    if (counter == 0) {
      led ^= 1;
      counter = preload;
    } else {
      counter -= 1;
    }
    out.push_back(led);
  }
  return out;
}

// Down counter with reload, as a list of observed values after each tick.
inline std::vector<int64_t> timer_values(int64_t load, int64_t reload, int ticks) {
  std::vector<int64_t> out;
  int64_t counter = load;
  for (int t = 0; t < ticks; ++t) {
    counter = counter == 0 ? reload : counter - 1;
    out.push_back(counter);
  }
  return out;
}

// Little-endian 32-bit words from bytes, missing bytes read as zero.
inline std::vector<uint32_t> le_words(const std::vector<uint8_t>& bytes) {
  std::vector<uint32_t> out((bytes.size() + 3) / 4, 0);
  for (size_t i = 0; i < bytes.size(); ++i) out[i / 4] |= uint32_t{bytes[i]} << (8 * (i % 4));
  return out;
}

// Smallest period of a sequence (the whole length if none shorter fits).
inline size_t period_of(const std::vector<int64_t>& seq) {
  for (size_t p = 1; p < seq.size(); ++p) {
    bool ok = true;
    for (size_t i = p; i < seq.size() && ok; ++i) ok = seq[i] == seq[i - p];
    if (ok) return p;
  }
  return seq.size();
}

}  // namespace oracle
