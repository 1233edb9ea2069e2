#pragma once

#include <stdexcept>
#include <string>

namespace rectiplan {

// Failure categories surfaced by the library. Tests match on the code,
// not on the message text.
enum class Errc {
    MalformedProgram,
    NumericalFailure,
    BadN,
    AliasedHarmonic,
    SpecInvalid,
    LengthMismatch,
    NonpositiveLoad,
    OutOfRange,
    DegenerateRow,
    TooLarge,
    BadCsv,
    ConfigInvalid,
    ZeroSignal,
    ZeroDesired,
    EmptySignal,
    NonpositiveParams,
    IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace rectiplan
