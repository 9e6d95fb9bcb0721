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

#include "prirec/fixed_point.h"

#include <cmath>
#include <string>

#include "prirec/errors.h"

namespace prirec {

Ring::Ring(int bits) : bits_(bits) {
  if (bits < 1 || bits > 64) {
    throw ArgumentError("ring width must be in [1, 64], got " +
                        std::to_string(bits));
  }
  mask_ = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

std::int64_t Ring::ToSigned(RingElement a) const {
  const int shift = 64 - bits_;
  // Sign-extend from bit (bits_ - 1).
  return static_cast<std::int64_t>(a.value << shift) >> shift;
}

FixedPointCodec::FixedPointCodec(int ell, int frac_bits)
    : ring_(ell), frac_bits_(frac_bits) {
  if (frac_bits <= 0 || frac_bits >= ell) {
    throw ArgumentError("fractional bits must satisfy 0 < l_f < ell (ell=" +
                        std::to_string(ell) +
                        ", l_f=" + std::to_string(frac_bits) + ")");
  }
  resolution_ = std::ldexp(1.0, -frac_bits);
  max_magnitude_ = std::ldexp(1.0, ell - frac_bits - 1);
}

RingElement FixedPointCodec::Encode(double x) const {
  if (!std::isfinite(x) || std::fabs(x) >= max_magnitude_) {
    throw RangeError("value " + std::to_string(x) +
                     " outside fixed-point range (|x| < " +
                     std::to_string(max_magnitude_) + ")");
  }
  const auto scaled =
      static_cast<std::int64_t>(std::llround(std::ldexp(x, frac_bits_)));
  return ring_.Reduce(static_cast<std::uint64_t>(scaled));
}

double FixedPointCodec::Decode(RingElement v) const {
  return std::ldexp(static_cast<double>(ring_.ToSigned(v)), -frac_bits_);
}

std::vector<RingElement> FixedPointCodec::EncodeVector(
    std::span<const double> xs) const {
  std::vector<RingElement> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(Encode(x));
  return out;
}

std::vector<double> FixedPointCodec::DecodeVector(
    std::span<const RingElement> vs) const {
  std::vector<double> out;
  out.reserve(vs.size());
  for (RingElement v : vs) out.push_back(Decode(v));
  return out;
}

RingElement FixedPointCodec::Mul(RingElement a, RingElement b,
                                 ArithmeticMode mode) const {
  if (mode == ArithmeticMode::kRing) {
    const RingElement product = ring_.Mul(a, b);
    return ring_.Reduce(
        static_cast<std::uint64_t>(ring_.ToSigned(product) >> frac_bits_));
  }
  const __int128 product = static_cast<__int128>(ring_.ToSigned(a)) *
                           static_cast<__int128>(ring_.ToSigned(b));
  // >> on a negative __int128 is an arithmetic shift (floor division).
  const __int128 truncated = product >> frac_bits_;
  const __int128 limit = static_cast<__int128>(1) << (ell() - 1);
  if (truncated >= limit || truncated < -limit) {
    throw RangeError("fixed-point product overflows the representable range");
  }
  return ring_.Reduce(static_cast<std::uint64_t>(
      static_cast<std::int64_t>(truncated)));
}

}  // namespace prirec
