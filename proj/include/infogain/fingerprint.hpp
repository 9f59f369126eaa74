#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "infogain/joint.hpp"
#include "infogain/model.hpp"

namespace infogain {

// 64-bit FNV-1a, for provenance tags only (not a cryptographic hash).
class Fnv1a {
 public:
  void update(std::string_view bytes);
  void update_u64(std::uint64_t value);
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

std::string fingerprint_bytes(std::string_view bytes);
// Structure of a schema: names, roles and domains, in order.
std::string schema_fingerprint(const SignalSchema& schema, std::size_t num_states);
// Schema plus every row's indices.
std::string dataset_fingerprint(const Dataset& data);

}  // namespace infogain
