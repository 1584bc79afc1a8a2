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
#include <map>
#include <span>
#include <vector>

#include "gridcuts/feasibility.hpp"
#include "gridcuts/update.hpp"

namespace gridcuts {

/// Certificates (branches touched by each asset's last feasibility test),
/// keyed by branch index.
struct CertificateStore {
  std::map<std::size_t, std::vector<std::size_t>> certificates;
  std::uint64_t generation = 0;

  friend bool operator==(const CertificateStore&, const CertificateStore&) = default;
};

/// Replaces the certificates of the re-tested branches and bumps the
/// generation. An empty result list returns the store unchanged.
CertificateStore refresh(CertificateStore store, std::span<const FtResult> results);

/// Drops the entries of branches that were re-tested but produced no result
/// (now zero flow, or removed).
void forget(CertificateStore& store, std::span<const std::size_t> branches);

/// Branches whose feasibility result may have changed after `update`:
/// every asset whose certificate meets a changed branch or the outaged one,
/// plus the changed branches themselves, minus the outaged branch. Sorted.
/// Throws StateError if the store generation differs from `expected`.
std::vector<std::size_t> shortlist(const CertificateStore& store, const UpdateResult& update,
                                   std::uint64_t expected_generation);

}  // namespace gridcuts
