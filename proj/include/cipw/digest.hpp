/*
 Copyright 2026 The cipw Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef CIPW_DIGEST_HPP
#define CIPW_DIGEST_HPP

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "cipw/error.hpp"
#include "cipw/serialization.hpp"

namespace cipw {

inline std::string sha256_hex(std::string_view text) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), text.data(), text.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
        throw Error(ErrorKind::Io, "sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

/// Fingerprint of the physical and standing-control parameters a table was learned with.
inline std::string parameter_digest(const ModelParams& mp) {
    return "sha256:" + sha256_hex(canonical_dump(json(mp)));
}

} // namespace cipw

#endif // CIPW_DIGEST_HPP
