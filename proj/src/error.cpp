#include "rectiplan/error.hpp"

namespace rectiplan {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::MalformedProgram: return "MalformedProgram";
        case Errc::NumericalFailure: return "NumericalFailure";
        case Errc::BadN: return "BadN";
        case Errc::AliasedHarmonic: return "AliasedHarmonic";
        case Errc::SpecInvalid: return "SpecInvalid";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::NonpositiveLoad: return "NonpositiveLoad";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::DegenerateRow: return "DegenerateRow";
        case Errc::TooLarge: return "TooLarge";
        case Errc::BadCsv: return "BadCsv";
        case Errc::ConfigInvalid: return "ConfigInvalid";
        case Errc::ZeroSignal: return "ZeroSignal";
        case Errc::ZeroDesired: return "ZeroDesired";
        case Errc::EmptySignal: return "EmptySignal";
        case Errc::NonpositiveParams: return "NonpositiveParams";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace rectiplan
