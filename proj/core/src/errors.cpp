#include "ensel/errors.hpp"

namespace ensel {

const char* to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::EmptyFile: return "empty file";
        case ParseErrorKind::BadHeader: return "bad header";
        case ParseErrorKind::MalformedRow: return "malformed row";
        case ParseErrorKind::InvalidValue: return "invalid value";
        case ParseErrorKind::DuplicateModelName: return "duplicate model name";
        case ParseErrorKind::Io: return "i/o error";
    }
    return "unknown";
}

namespace {

std::string format_parse_error(ParseErrorKind kind, std::size_t line, const std::string& detail) {
    std::string msg = to_string(kind);
    if (line > 0) msg += " at line " + std::to_string(line);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
    : std::runtime_error(format_parse_error(kind, line, detail)), kind_(kind), line_(line) {}

}  // namespace ensel
