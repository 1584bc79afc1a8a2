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

#include "gridcuts/units.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "gridcuts/errors.hpp"

namespace gridcuts {

Power Power::from_mw(double mw) {
  if (!std::isfinite(mw)) throw std::domain_error("power value is not finite");
  const double scaled = mw * static_cast<double>(kUnitsPerMw);
  // Leave headroom so sums over large networks cannot overflow.
  if (std::fabs(scaled) > 1e17) throw std::domain_error("power value out of range");
  return Power(std::llround(scaled));
}

std::ostream& operator<<(std::ostream& os, Power p) { return os << p.mw() << " MW"; }

ParseError::ParseError(std::string source, std::size_t line, std::size_t column,
                       const std::string& what)
    : InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

}  // namespace gridcuts
