#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace agora {

// Minimal SHA-256 (FIPS 180-4), enough to fingerprint output files for the
// run manifest. Verified against the NIST test vectors in the unit suite.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    std::string hex_digest();  // finalizes; further updates are invalid

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint8_t buffer_[64];
    std::uint64_t bit_len_ = 0;
    std::size_t buffer_len_ = 0;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);  // throws IoError

}  // namespace agora
