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

#ifndef CIPW_ERROR_HPP
#define CIPW_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cipw {

enum class ErrorKind {
    InvalidArgument,
    NonFiniteState,
    SingularMassMatrix,
    DegenerateRod,
    AngleOutOfBranch,
    ConstraintInfeasible,
    OutOfRange,
    BadMagic,
    TruncatedPayload,
    TrailingData,
    DigestMismatch,
    UnknownVersion,
    MalformedHeader,
    Io,
    Config,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::NonFiniteState: return "non-finite-state";
        case ErrorKind::SingularMassMatrix: return "singular-mass-matrix";
        case ErrorKind::DegenerateRod: return "degenerate-rod";
        case ErrorKind::AngleOutOfBranch: return "angle-out-of-branch";
        case ErrorKind::ConstraintInfeasible: return "constraint-infeasible";
        case ErrorKind::OutOfRange: return "out-of-range";
        case ErrorKind::BadMagic: return "bad-magic";
        case ErrorKind::TruncatedPayload: return "truncated-payload";
        case ErrorKind::TrailingData: return "trailing-data";
        case ErrorKind::DigestMismatch: return "digest-mismatch";
        case ErrorKind::UnknownVersion: return "unknown-version";
        case ErrorKind::MalformedHeader: return "malformed-header";
        case ErrorKind::Io: return "io";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

/// Every failure raised by the library. `kind()` is stable and is what
/// callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw Error(ErrorKind::InvalidArgument, message);
}

} // namespace cipw

#endif // CIPW_ERROR_HPP
