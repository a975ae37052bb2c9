#pragma once

#include "vcsim/core/types.hpp"

#include <cstddef>
#include <string_view>

namespace vcsim::core {

// Canonical byte encoding: fixed field order, big-endian integers,
// length-prefixed sequences. Digests are reproducible across runs and
// platforms.
class byte_writer {
  public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    const std::vector<std::uint8_t>& bytes() const { return buf_; }

  private:
    std::vector<std::uint8_t> buf_;
};

digest fnv128(const std::vector<std::uint8_t>& bytes);

void encode(byte_writer& w, const actor_id& a);
void encode(byte_writer& w, const digest& d);
void encode(byte_writer& w, const signature& s);
void encode(byte_writer& w, const lock_entry& l);
void encode(byte_writer& w, const channel_state& s);
void encode(byte_writer& w, const update_announcement& m);
void encode(byte_writer& w, const signed_state_publication& p);
void encode(byte_writer& w, const contract_info& ci);
void encode(byte_writer& w, const register_tx& tx);

template <class T>
std::vector<std::uint8_t> canonical_bytes(const T& v) {
    byte_writer w;
    encode(w, v);
    return w.bytes();
}

template <class T>
digest digest_of(const T& v) {
    return fnv128(canonical_bytes(v));
}

// Bytes a register signer commits to: everything except the signature list.
std::vector<std::uint8_t> register_signing_bytes(const register_tx& tx);

}  // namespace vcsim::core
