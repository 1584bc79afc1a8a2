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

#include <cstdint>

#include "gridcuts/model.hpp"

namespace gridcuts {

struct RandomFixtureOptions {
  std::size_t min_buses = 4;
  std::size_t max_buses = 10;
  /// Extra branches beyond the spanning tree, as a fraction of bus count.
  double mesh_ratio = 0.6;
  /// Chance that a non-tree branch duplicates an existing bus pair.
  double parallel_chance = 0.1;
  int max_injection_mw = 100;
  int min_rating_mw = 20;
  int max_rating_mw = 120;
};

/// Small connected, balanced network whose injections can be served.
/// Values carry two decimals. Identical seeds give identical data.
NetworkData random_fixture(std::uint64_t seed, const RandomFixtureOptions& options = {});

struct GridOptions {
  std::size_t buses = 2000;
  std::size_t branches = 3000;
  double generator_share = 0.3;
  double load_share = 0.6;
};

/// Geometric meshed grid: buses scattered in a unit square, joined by a
/// nearest-neighbour spanning tree plus the shortest remaining candidate
/// links. Reactance grows with length. Ratings are raised on limiting cuts
/// until the injections can be served.
NetworkData synthetic_grid(std::uint64_t seed, const GridOptions& options = {});

}  // namespace gridcuts
