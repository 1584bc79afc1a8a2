/* Copyright 2026 The gridcuts Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <iosfwd>

namespace gridcuts {

/// Active power held as an integer number of micro-megawatts (1 W).
///
/// Every flow, capacity, injection and margin inside the graph engine uses
/// this type, so conservation, capacity identities and cut sums are
/// exact integer arithmetic. Conversion to floating MW happens only at the
/// edges (file formats, reports, the DC oracle).
class Power {
 public:
  static constexpr std::int64_t kUnitsPerMw = 1'000'000;

  constexpr Power() = default;

  static constexpr Power from_units(std::int64_t units) { return Power(units); }

  /// Rounds to the nearest unit. Throws std::domain_error on NaN, infinity
  /// or magnitudes that do not fit.
  static Power from_mw(double mw);

  constexpr std::int64_t units() const { return units_; }
  double mw() const { return static_cast<double>(units_) / static_cast<double>(kUnitsPerMw); }

  constexpr bool is_zero() const { return units_ == 0; }
  constexpr bool positive() const { return units_ > 0; }
  constexpr bool negative() const { return units_ < 0; }

  constexpr Power operator-() const { return Power(-units_); }
  constexpr Power& operator+=(Power o) {
    units_ += o.units_;
    return *this;
  }
  constexpr Power& operator-=(Power o) {
    units_ -= o.units_;
    return *this;
  }
  friend constexpr Power operator+(Power a, Power b) { return Power(a.units_ + b.units_); }
  friend constexpr Power operator-(Power a, Power b) { return Power(a.units_ - b.units_); }
  friend constexpr auto operator<=>(Power, Power) = default;

 private:
  constexpr explicit Power(std::int64_t units) : units_(units) {}
  std::int64_t units_ = 0;
};

constexpr Power abs(Power p) { return p.negative() ? -p : p; }

std::ostream& operator<<(std::ostream& os, Power p);

}  // namespace gridcuts
