#include "infogain/fingerprint.hpp"

#include <cstdio>

namespace infogain {

void Fnv1a::update(std::string_view bytes) {
  for (unsigned char c : bytes) {
    state_ ^= c;
    state_ *= 0x100000001b3ull;
  }
}

void Fnv1a::update_u64(std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    state_ ^= (value >> (8 * i)) & 0xffu;
    state_ *= 0x100000001b3ull;
  }
}

std::string Fnv1a::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
  return std::string("fnv1a64:") + buf;
}

std::string fingerprint_bytes(std::string_view bytes) {
  Fnv1a h;
  h.update(bytes);
  return h.hex();
}

namespace {

void hash_schema(Fnv1a& h, const SignalSchema& schema, std::size_t num_states) {
  h.update_u64(num_states);
  h.update_u64(schema.num_signals());
  for (const auto& s : schema.signals()) {
    h.update(s.name);
    h.update_u64(s.values.size());
    for (const auto& v : s.values) {
      h.update(v);
      h.update_u64(0);
    }
  }
  h.update_u64(schema.decisions().size());
  for (const auto& d : schema.decisions()) {
    h.update(d.name);
    h.update(role_name(d.role));
    h.update_u64(d.domain.size());
    for (const auto& v : d.domain.labels) {
      h.update(v);
      h.update_u64(0);
    }
  }
}

}  // namespace

std::string schema_fingerprint(const SignalSchema& schema, std::size_t num_states) {
  Fnv1a h;
  hash_schema(h, schema, num_states);
  return h.hex();
}

std::string dataset_fingerprint(const Dataset& data) {
  Fnv1a h;
  hash_schema(h, data.schema(), data.num_states());
  h.update_u64(data.num_rows());
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    h.update_u64(data.state(r));
    for (auto v : data.values(r)) h.update_u64(v);
  }
  return h.hex();
}

}  // namespace infogain
