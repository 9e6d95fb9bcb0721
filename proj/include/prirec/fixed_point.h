// Copyright 2026 The PriRec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Fixed-point encoding of reals into the ring Z_{2^ell}.
//
// A real x is represented by round(x * 2^frac_bits) reduced modulo 2^ell, so
// negative values occupy the upper half of the ring (two's complement).
// Products are formed on the integer representatives and then truncated by
// an arithmetic right shift of frac_bits, which restores the scale.

#ifndef PRIREC_FIXED_POINT_H_
#define PRIREC_FIXED_POINT_H_

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace prirec {

struct RingElement {
  std::uint64_t value = 0;

  friend auto operator<=>(const RingElement&, const RingElement&) = default;
};

// Checked arithmetic raises RangeError when a result leaves the representable
// range; ring arithmetic wraps silently. Protocols operate on uniformly
// random shares and must use kRing.
enum class ArithmeticMode { kChecked, kRing };

// The ring Z_{2^bits}, 1 <= bits <= 64.
class Ring {
 public:
  explicit Ring(int bits = 64);

  int bits() const { return bits_; }
  std::uint64_t mask() const { return mask_; }
  // Wire size of one element.
  std::size_t element_bytes() const { return (bits_ + 7) / 8; }

  RingElement Reduce(std::uint64_t v) const { return {v & mask_}; }
  RingElement Add(RingElement a, RingElement b) const {
    return {(a.value + b.value) & mask_};
  }
  RingElement Sub(RingElement a, RingElement b) const {
    return {(a.value - b.value) & mask_};
  }
  RingElement Neg(RingElement a) const { return {(0 - a.value) & mask_}; }
  // Raw ring product, no rescaling.
  RingElement Mul(RingElement a, RingElement b) const {
    return {(a.value * b.value) & mask_};
  }
  // Two's-complement interpretation of an element.
  std::int64_t ToSigned(RingElement a) const;

  template <typename Generator>
  RingElement Random(Generator& gen) const {
    return {static_cast<std::uint64_t>(gen()) & mask_};
  }

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  int bits_;
  std::uint64_t mask_;
};

class FixedPointCodec {
 public:
  static constexpr int kDefaultRingBits = 64;
  static constexpr int kDefaultFractionalBits = 16;

  // Requires 0 < frac_bits < ell <= 64; throws ArgumentError otherwise.
  explicit FixedPointCodec(int ell = kDefaultRingBits,
                           int frac_bits = kDefaultFractionalBits);

  int ell() const { return ring_.bits(); }
  int frac_bits() const { return frac_bits_; }
  const Ring& ring() const { return ring_; }

  // Smallest positive representable step, 2^-frac_bits.
  double resolution() const { return resolution_; }
  // Exclusive bound on |x| accepted by Encode: 2^(ell - frac_bits - 1).
  double max_magnitude() const { return max_magnitude_; }

  // Throws RangeError if |x| >= max_magnitude() or x is not finite.
  RingElement Encode(double x) const;
  double Decode(RingElement v) const;

  std::vector<RingElement> EncodeVector(std::span<const double> xs) const;
  std::vector<double> DecodeVector(std::span<const RingElement> vs) const;

  RingElement Add(RingElement a, RingElement b) const {
    return ring_.Add(a, b);
  }

  // Fixed-point product with truncation: the integer product is shifted
  // right by frac_bits as a signed value. In kChecked mode the exact product
  // is formed and a result outside the representable range raises
  // RangeError; in kRing mode the product wraps modulo 2^ell before the
  // shift, which is the behaviour of the truncation on shared values.
  RingElement Mul(RingElement a, RingElement b,
                  ArithmeticMode mode = ArithmeticMode::kChecked) const;

  friend bool operator==(const FixedPointCodec&,
                         const FixedPointCodec&) = default;

 private:
  Ring ring_;
  int frac_bits_;
  double resolution_;
  double max_magnitude_;
};

}  // namespace prirec

#endif  // PRIREC_FIXED_POINT_H_
