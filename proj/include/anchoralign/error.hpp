#ifndef ANCHORALIGN_ERROR_HPP
#define ANCHORALIGN_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace anchoralign {

enum class ErrorCode {
    Io,
    MalformedHeader,
    TruncatedData,
    TrailingData,
    RowLengthMismatch,
    NonFinite,
    EmptyMatrix,
    ZeroRow,
    OutOfRange,
    DimMismatch,
    SizeMismatch,
    EmptyIntervals,
    ZeroLength,
    IllegalShape,
    NoPath,
    ParseError,
    Config,
};

const char* error_code_name(ErrorCode code);

// All failures in the library surface as this exception. `index` carries the
// offending row / line / sentence when one applies.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::size_t> index = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> index_;
};

} // namespace anchoralign

#endif
