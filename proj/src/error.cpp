#include "anchoralign/error.hpp"

namespace anchoralign {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::TrailingData: return "TrailingData";
    case ErrorCode::RowLengthMismatch: return "RowLengthMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::EmptyIntervals: return "EmptyIntervals";
    case ErrorCode::ZeroLength: return "ZeroLength";
    case ErrorCode::IllegalShape: return "IllegalShape";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

static std::string decorate(ErrorCode code, const std::string& message,
                            std::optional<std::size_t> index) {
    std::string out = error_code_name(code);
    if (index) {
        out += "(" + std::to_string(*index) + ")";
    }
    out += ": " + message;
    return out;
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index)
    : std::runtime_error(decorate(code, message, index)), code_(code), index_(index) {}

} // namespace anchoralign
