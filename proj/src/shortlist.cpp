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

#include "gridcuts/shortlist.hpp"

#include <algorithm>
#include <string>

namespace gridcuts {

CertificateStore refresh(CertificateStore store, std::span<const FtResult> results) {
  if (results.empty()) return store;
  for (const FtResult& r : results) store.certificates[r.branch] = r.certificate;
  ++store.generation;
  return store;
}

void forget(CertificateStore& store, std::span<const std::size_t> branches) {
  for (std::size_t br : branches) store.certificates.erase(br);
}

std::vector<std::size_t> shortlist(const CertificateStore& store, const UpdateResult& update,
                                   std::uint64_t expected_generation) {
  if (store.generation != expected_generation)
    throw StateError("certificate store is stale (generation " + std::to_string(store.generation) +
                     ", expected " + std::to_string(expected_generation) + ")");

  std::vector<std::size_t> touched = update.changed;
  touched.insert(std::lower_bound(touched.begin(), touched.end(), update.branch), update.branch);

  std::vector<std::size_t> out = update.changed;
  for (const auto& [branch, cert] : store.certificates) {
    // Both lists are sorted; a linear merge finds any common member.
    auto a = cert.begin();
    auto b = touched.begin();
    while (a != cert.end() && b != touched.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        out.push_back(branch);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase(out, update.branch);
  return out;
}

}  // namespace gridcuts
