// Copyright 2026 The vcdn-migrate Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace vcdn {

/// Handle of a node (server or client group) in a scenario graph.
struct NodeId {
  std::int32_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
  friend std::ostream& operator<<(std::ostream& os, NodeId id) { return os << id.value; }
};

/// Handle of a vCDN in the catalog.
struct VcdnId {
  std::int32_t value = 0;

  friend constexpr auto operator<=>(VcdnId, VcdnId) = default;
  friend std::ostream& operator<<(std::ostream& os, VcdnId id) { return os << id.value; }
};

/// Exact arbitrary-precision rational, used wherever metrics divide.
using Rational = boost::multiprecision::cpp_rational;

/// Fixed-point non-integral quantity with three decimal places (Mbps, GB, or
/// cost units depending on context). All comparisons are exact.
class Quantity {
 public:
  static constexpr std::int64_t kScale = 1000;

  constexpr Quantity() = default;

  static constexpr Quantity from_milli(std::int64_t milli) { return Quantity(milli); }
  static constexpr Quantity whole(std::int64_t units) { return Quantity(units * kScale); }

  /// Converts a decimal value, rejecting anything finer than 1/1000.
  static Quantity from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("quantity must be finite");
    const double scaled = value * static_cast<double>(kScale);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-6 * std::max(1.0, std::abs(scaled))) {
      throw std::invalid_argument("quantity " + std::to_string(value) +
                                  " has more than three decimal places");
    }
    return Quantity(static_cast<std::int64_t>(rounded));
  }

  constexpr std::int64_t milli() const { return milli_; }
  double to_double() const { return static_cast<double>(milli_) / kScale; }
  Rational to_rational() const { return Rational(milli_, kScale); }

  /// Shortest decimal spelling, e.g. "12", "12.5", "0.125".
  std::string to_string() const {
    const bool negative = milli_ < 0;
    const std::int64_t mag = negative ? -milli_ : milli_;
    std::string out = (negative ? "-" : "") + std::to_string(mag / kScale);
    std::int64_t frac = mag % kScale;
    if (frac != 0) {
      std::string digits = std::to_string(frac);
      digits.insert(0, 3 - digits.size(), '0');
      while (digits.back() == '0') digits.pop_back();
      out += "." + digits;
    }
    return out;
  }

  constexpr Quantity& operator+=(Quantity o) { milli_ += o.milli_; return *this; }
  constexpr Quantity& operator-=(Quantity o) { milli_ -= o.milli_; return *this; }
  friend constexpr Quantity operator+(Quantity a, Quantity b) { return a += b; }
  friend constexpr Quantity operator-(Quantity a, Quantity b) { return a -= b; }
  friend constexpr Quantity operator*(Quantity a, std::int64_t k) { return Quantity(a.milli_ * k); }
  friend constexpr Quantity operator*(std::int64_t k, Quantity a) { return Quantity(a.milli_ * k); }
  friend constexpr auto operator<=>(Quantity, Quantity) = default;
  friend std::ostream& operator<<(std::ostream& os, Quantity q) { return os << q.to_string(); }

 private:
  constexpr explicit Quantity(std::int64_t milli) : milli_(milli) {}
  std::int64_t milli_ = 0;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace vcdn

template <>
struct std::hash<vcdn::NodeId> {
  std::size_t operator()(vcdn::NodeId id) const noexcept { return std::hash<std::int32_t>{}(id.value); }
};
