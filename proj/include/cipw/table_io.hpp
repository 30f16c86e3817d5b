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

#ifndef CIPW_TABLE_IO_HPP
#define CIPW_TABLE_IO_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cipw/digest.hpp"
#include "cipw/serialization.hpp"
#include "cipw/table.hpp"

namespace cipw {

// CIPTBL1 layout:
//   8 bytes   magic "CIPTBL1\n"
//   8 bytes   header length L, little-endian unsigned
//   L bytes   header, canonical JSON (sorted keys, no whitespace)
//   N bytes   one label per cell, row-major, last grid dimension fastest
inline constexpr std::array<char, 8> kTableMagic = {'C', 'I', 'P', 'T', 'B', 'L', '1', '\n'};

inline json table_header(const ClassifierTable& t) {
    return {
        {"version", t.provenance.version},
        {"mode", std::string(to_string(t.mode))},
        {"grid", t.grid},
        {"param_digest", t.provenance.param_digest},
        {"impulse", t.provenance.impulse},
        {"simulation", t.provenance.sim},
        {"cells", t.labels.size()},
    };
}

inline void save_table(const ClassifierTable& t, std::ostream& out) {
    t.validate();
    const std::string header = canonical_dump(table_header(t));
    std::array<char, 8> len{};
    auto n = static_cast<std::uint64_t>(header.size());
    for (std::size_t i = 0; i < 8; ++i) len[i] = static_cast<char>((n >> (8 * i)) & 0xFF);
    out.write(kTableMagic.data(), kTableMagic.size());
    out.write(len.data(), len.size());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(t.labels.data()), static_cast<std::streamsize>(t.labels.size()));
    if (!out) throw Error(ErrorKind::Io, "failed writing classifier table");
}

inline void save_table(const ClassifierTable& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    save_table(t, out);
}

/**
 * Reads a CIPTBL1 stream. When `expected` is given, the stored parameter
 * digest must match the digest of those parameters.
 */
inline ClassifierTable load_table(std::istream& in, const std::optional<ModelParams>& expected = std::nullopt) {
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() != static_cast<std::streamsize>(magic.size()) || magic != kTableMagic)
        throw Error(ErrorKind::BadMagic, "not a CIPTBL1 file");

    std::array<unsigned char, 8> len{};
    in.read(reinterpret_cast<char*>(len.data()), len.size());
    if (in.gcount() != 8) throw Error(ErrorKind::TruncatedPayload, "missing header length");
    std::uint64_t header_len = 0;
    for (std::size_t i = 0; i < 8; ++i) header_len |= static_cast<std::uint64_t>(len[i]) << (8 * i);
    if (header_len > (1u << 24)) throw Error(ErrorKind::MalformedHeader, "header length is implausible");

    std::string header(header_len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(header_len));
    if (static_cast<std::uint64_t>(in.gcount()) != header_len) throw Error(ErrorKind::TruncatedPayload, "header cut short");

    ClassifierTable t;
    try {
        const json h = json::parse(header);
        const int version = h.at("version").get<int>();
        if (version != kTableFormatVersion)
            throw Error(ErrorKind::UnknownVersion, "table format version " + std::to_string(version));
        t.mode = measurement_mode_from_string(h.at("mode").get<std::string>());
        t.grid = h.at("grid").get<GridSpec>();
        t.provenance.version = version;
        t.provenance.param_digest = h.at("param_digest").get<std::string>();
        t.provenance.impulse = h.at("impulse").get<ImpulseParams>();
        t.provenance.sim = h.at("simulation").get<SimSettings>();
        t.grid.validate();
        if (h.at("cells").get<std::uint64_t>() != t.grid.cell_count())
            throw Error(ErrorKind::MalformedHeader, "cell count disagrees with grid");
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedHeader, e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::UnknownVersion || e.kind() == ErrorKind::MalformedHeader) throw;
        throw Error(ErrorKind::MalformedHeader, e.what());
    }

    const std::size_t n = t.grid.cell_count();
    t.labels.resize(n);
    in.read(reinterpret_cast<char*>(t.labels.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw Error(ErrorKind::TruncatedPayload,
                    "expected " + std::to_string(n) + " label bytes, found " + std::to_string(in.gcount()));
    if (in.peek() != std::char_traits<char>::eof()) throw Error(ErrorKind::TrailingData, "bytes after label payload");
    for (auto l : t.labels)
        if (l > 9) throw Error(ErrorKind::MalformedHeader, "label byte outside 0..9");

    if (expected) {
        const std::string want = parameter_digest(*expected);
        if (want != t.provenance.param_digest)
            throw Error(ErrorKind::DigestMismatch,
                        "table digest " + t.provenance.param_digest + " does not match parameters " + want);
    }
    return t;
}

inline ClassifierTable load_table(const std::filesystem::path& path,
                                  const std::optional<ModelParams>& expected = std::nullopt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open table '" + path.string() + "'");
    return load_table(in, expected);
}

} // namespace cipw

#endif // CIPW_TABLE_IO_HPP
